//! Partial orientations of a graph's edges, acyclicity/transitivity checks,
//! and the closed cone attached to an acyclic orientation: membership,
//! a conical generating set, and invariance under `alpha*I + L`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matrix::RealVector;

/// State of one edge {i, j} with i < j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeState {
    Unoriented,
    /// Arc i -> j.
    Forward,
    /// Arc j -> i.
    Backward,
}

/// An orientation of a subset of a graph's edges. "Full" when nothing is
/// left unoriented.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialOrientation {
    graph: Graph,
    /// Parallel to `graph.edges()` in sorted order.
    states: Vec<EdgeState>,
}

impl PartialOrientation {
    pub fn unoriented(graph: Graph) -> Self {
        let states = vec![EdgeState::Unoriented; graph.edge_count()];
        PartialOrientation { graph, states }
    }

    /// Builds a full orientation from a list of arcs covering every edge.
    pub fn from_arcs(graph: Graph, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut o = PartialOrientation::unoriented(graph);
        for (a, b) in arcs {
            if !o.graph.has_edge(a, b) {
                return Err(Error::InvalidGraph(format!(
                    "arc ({a},{b}) is not an edge of the graph"
                )));
            }
            o.orient(a, b);
        }
        if !o.is_full() {
            return Err(Error::NotFull);
        }
        Ok(o)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn edge_index(&self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        self.graph
            .edges()
            .position(|e| e == key)
            .expect("edge exists")
    }

    /// Directs edge {a, b} as a -> b.
    pub fn orient(&mut self, a: usize, b: usize) {
        let idx = self.edge_index(a, b);
        self.states[idx] = if a < b {
            EdgeState::Forward
        } else {
            EdgeState::Backward
        };
    }

    pub fn state(&self, i: usize, j: usize) -> EdgeState {
        self.states[self.edge_index(i, j)]
    }

    pub fn is_full(&self) -> bool {
        self.states.iter().all(|s| *s != EdgeState::Unoriented)
    }

    /// Directed edges in sorted-edge order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .zip(&self.states)
            .filter_map(|((i, j), s)| match s {
                EdgeState::Forward => Some((i, j)),
                EdgeState::Backward => Some((j, i)),
                EdgeState::Unoriented => None,
            })
            .collect()
    }

    pub fn unoriented_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .zip(&self.states)
            .filter_map(|(e, s)| (*s == EdgeState::Unoriented).then_some(e))
            .collect()
    }

    /// The dual orientation: every arc reversed.
    pub fn reversed(&self) -> PartialOrientation {
        let states = self
            .states
            .iter()
            .map(|s| match s {
                EdgeState::Unoriented => EdgeState::Unoriented,
                EdgeState::Forward => EdgeState::Backward,
                EdgeState::Backward => EdgeState::Forward,
            })
            .collect();
        PartialOrientation {
            graph: self.graph.clone(),
            states,
        }
    }
}

/// True iff the (full) orientation has no directed cycle.
pub fn is_acyclic(o: &PartialOrientation) -> Result<bool> {
    if !o.is_full() {
        return Err(Error::NotFull);
    }
    let n = o.graph.n();
    let mut indeg = vec![0usize; n + 1];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (a, b) in o.arcs() {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    Ok(seen == n)
}

/// True iff `o` is a transitive orientation of `g`: acyclic and closed under
/// composition, so the comparability graph of the induced order is exactly `g`.
pub fn is_transitive(g: &Graph, o: &PartialOrientation) -> Result<bool> {
    debug_assert_eq!(g, o.graph());
    if !is_acyclic(o)? {
        return Ok(false);
    }
    let n = g.n();
    let arcs = o.arcs();
    let mut has_arc = vec![false; (n + 1) * (n + 1)];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(a, b) in &arcs {
        has_arc[a * (n + 1) + b] = true;
        out[a].push(b);
    }
    for &(i, j) in &arcs {
        for &k in &out[j] {
            if !g.has_edge(i, k) || !has_arc[i * (n + 1) + k] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reflexive-transitive reachability relation of a full acyclic orientation.
#[derive(Debug, Clone)]
pub struct Preorder {
    n: usize,
    reaches: Vec<bool>,
}

impl Preorder {
    pub fn n(&self) -> usize {
        self.n
    }

    /// u <= v in the induced order.
    pub fn le(&self, u: usize, v: usize) -> bool {
        self.reaches[(u - 1) * self.n + (v - 1)]
    }

    /// Principal filter of `v`: everything at or above `v`.
    pub fn up_set_of(&self, v: usize) -> VertexSet {
        (1..=self.n).filter(|&w| self.le(v, w)).collect()
    }
}

/// Order induced by a full acyclic orientation: u below v iff a directed
/// path leads from u to v.
pub fn induced_preorder(o: &PartialOrientation) -> Result<Preorder> {
    if !is_acyclic(o)? {
        return Err(Error::Cyclic);
    }
    let n = o.graph().n();
    let mut reaches = vec![false; n * n];
    for v in 1..=n {
        reaches[(v - 1) * n + (v - 1)] = true;
    }
    for (a, b) in o.arcs() {
        reaches[(a - 1) * n + (b - 1)] = true;
    }
    // Warshall closure
    for k in 0..n {
        for i in 0..n {
            if reaches[i * n + k] {
                for j in 0..n {
                    if reaches[k * n + j] {
                        reaches[i * n + j] = true;
                    }
                }
            }
        }
    }
    Ok(Preorder { n, reaches })
}

/// True iff `x` sits in the closed cone of `o`: weakly increasing along
/// every arc, with `cone_tol` slack.
pub fn cone_contains(o: &PartialOrientation, x: &RealVector, cone_tol: f64) -> bool {
    o.arcs()
        .iter()
        .all(|&(a, b)| x.value(a) <= x.value(b) + cone_tol)
}

/// First arc (a, b) of `o` with x_a > x_b + cone_tol, if any.
pub fn first_violated_arc(
    o: &PartialOrientation,
    x: &RealVector,
    cone_tol: f64,
) -> Option<(usize, usize)> {
    o.arcs()
        .into_iter()
        .find(|&(a, b)| x.value(a) > x.value(b) + cone_tol)
}

/// A conical generating set for the closed cone of a full acyclic
/// orientation: the all-ones vector with both signs, plus the indicator of
/// every nonempty proper up-set of the induced order.
#[derive(Debug, Clone)]
pub struct ConeGenerators {
    pub generators: Vec<RealVector>,
    /// Up-sets matching `generators[2..]`, sorted by size then lexicographically.
    pub up_sets: Vec<VertexSet>,
}

/// Enumerates the generating set. Exponential in n, so capped at n <= 16.
pub fn cone_generators(o: &PartialOrientation) -> Result<ConeGenerators> {
    let n = o.graph().n();
    if n > 16 {
        return Err(Error::SizeLimit {
            what: "cone_generators",
            limit: "n <= 16".into(),
            got: format!("n = {n}"),
        });
    }
    let pre = induced_preorder(o)?;

    // reach mask of v = bitset of {w : v <= w}
    let reach: Vec<u32> = (1..=n)
        .map(|v| {
            (1..=n)
                .filter(|&w| pre.le(v, w))
                .fold(0u32, |m, w| m | (1 << (w - 1)))
        })
        .collect();

    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut up_sets: Vec<VertexSet> = Vec::new();
    for mask in 1..full {
        let mut closed = true;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            if reach[v] & !mask != 0 {
                closed = false;
                break;
            }
            m &= m - 1;
        }
        if closed {
            up_sets.push((1..=n).filter(|&v| mask & (1 << (v - 1)) != 0).collect());
        }
    }
    up_sets.sort_by(|a, b| (a.len(), a.to_vec()).cmp(&(b.len(), b.to_vec())));

    let mut generators = vec![
        RealVector::new(vec![1.0; n]),
        RealVector::new(vec![-1.0; n]),
    ];
    generators.extend(up_sets.iter().map(|u| RealVector::indicator(n, u.iter())));

    Ok(ConeGenerators { generators, up_sets })
}

/// Outcome of the cone-invariance test, with a certificate on failure.
#[derive(Debug, Clone)]
pub struct ConeInvariance {
    pub invariant: bool,
    /// Failing generator and the arc its image violates.
    pub witness: Option<(RealVector, (usize, usize))>,
}

/// Tests whether the closed cone of `o` is invariant under `alpha*I + L`.
///
/// The check runs over the conical generating set. Generators and the
/// Laplacian are integral, so for integral `alpha` every comparison is exact:
/// a violation has magnitude at least 1, far beyond `cone_tol`.
///
/// When `o` is not transitive, the indicator of a principal filter of a
/// maximal "closure-violating" vertex is tried first, so failures carry that
/// certificate whenever it applies.
pub fn is_cone_invariant(
    g: &Graph,
    o: &PartialOrientation,
    alpha: f64,
    cone_tol: f64,
) -> Result<ConeInvariance> {
    debug_assert_eq!(g, o.graph());
    debug_assert!(alpha >= 0.0);
    let gens = cone_generators(o)?;
    let l = g.laplacian();
    let image = |v: &RealVector| l.mul_vec(v).add(&v.scale(alpha));

    let mut candidates: Vec<RealVector> = Vec::new();
    if !is_transitive(g, o)? {
        if let Some(filters) = principal_filter_candidates(g, o)? {
            candidates.extend(filters);
        }
    }
    candidates.extend(gens.generators.iter().cloned());

    for v in candidates {
        let mv = image(&v);
        if let Some(arc) = first_violated_arc(o, &mv, cone_tol) {
            return Ok(ConeInvariance {
                invariant: false,
                witness: Some((v, arc)),
            });
        }
    }
    Ok(ConeInvariance {
        invariant: true,
        witness: None,
    })
}

/// Indicators of principal filters of order-maximal vertices in the set of
/// composition-closure violations ((i,j),(j,k) arcs without an (i,k) arc).
fn principal_filter_candidates(
    g: &Graph,
    o: &PartialOrientation,
) -> Result<Option<Vec<RealVector>>> {
    let n = g.n();
    let arcs = o.arcs();
    let mut has_arc = vec![false; (n + 1) * (n + 1)];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(a, b) in &arcs {
        has_arc[a * (n + 1) + b] = true;
        out[a].push(b);
    }
    let mut violating: BTreeSet<usize> = BTreeSet::new();
    for &(i, j) in &arcs {
        for &k in &out[j] {
            if !has_arc[i * (n + 1) + k] {
                violating.insert(k);
            }
        }
    }
    if violating.is_empty() {
        return Ok(None);
    }
    let pre = induced_preorder(o)?;
    let maximal: Vec<usize> = violating
        .iter()
        .copied()
        .filter(|&l| violating.iter().all(|&m| m == l || !pre.le(l, m)))
        .collect();
    Ok(Some(
        maximal
            .into_iter()
            .map(|l| RealVector::indicator(n, pre.up_set_of(l).iter()))
            .collect(),
    ))
}

// --- orientation text format ------------------------------------------------
//
//   n 3
//   a 2 1
//   u 1 3
//
// Same framing as the edge-list format; `a i j` is the arc i -> j, `u i j`
// (with i < j) an unoriented edge.

pub fn parse_orientation(text: &str) -> Result<PartialOrientation> {
    let mut n: Option<usize> = None;
    let mut entries: Vec<(usize, usize, bool)> = Vec::new(); // (a, b, oriented)
    let mut seen = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap();
        let err = |msg: String| Error::Parse { line: lineno, msg };
        match tag {
            "n" => {
                if n.is_some() {
                    return Err(err("repeated `n` line".into()));
                }
                let v: usize = parts
                    .next()
                    .ok_or_else(|| err("`n` needs a count".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad vertex count: {e}")))?;
                if v == 0 {
                    return Err(err("vertex count must be positive".into()));
                }
                n = Some(v);
            }
            "a" | "u" => {
                let nn = n.ok_or_else(|| err("edge line before `n` line".into()))?;
                let i: usize = parts
                    .next()
                    .ok_or_else(|| err("needs two endpoints".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                let j: usize = parts
                    .next()
                    .ok_or_else(|| err("needs two endpoints".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                if i == j || i == 0 || j == 0 || i > nn || j > nn {
                    return Err(err(format!("bad endpoints ({i},{j}) for n = {nn}")));
                }
                if tag == "u" && i > j {
                    return Err(err("`u` lines require i < j".into()));
                }
                if !seen.insert((i.min(j), i.max(j))) {
                    return Err(err(format!("duplicate edge ({i},{j})")));
                }
                entries.push((i, j, tag == "a"));
            }
            _ => return Err(err(format!("unknown line tag `{tag}`"))),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `n <N>` line".into(),
    })?;
    let graph = Graph::new(n, entries.iter().map(|&(a, b, _)| (a.min(b), a.max(b))))?;
    let mut o = PartialOrientation::unoriented(graph);
    for (a, b, oriented) in entries {
        if oriented {
            o.orient(a, b);
        }
    }
    Ok(o)
}

pub fn to_orientation_text(o: &PartialOrientation) -> String {
    let mut out = format!("n {}\n", o.graph().n());
    for ((i, j), s) in o.graph().edges().zip(&o.states) {
        match s {
            EdgeState::Unoriented => out.push_str(&format!("u {i} {j}\n")),
            EdgeState::Forward => out.push_str(&format!("a {i} {j}\n")),
            EdgeState::Backward => out.push_str(&format!("a {j} {i}\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn orient(g: &Graph, arcs: &[(usize, usize)]) -> PartialOrientation {
        PartialOrientation::from_arcs(g.clone(), arcs.iter().copied()).unwrap()
    }

    #[test]
    fn acyclicity() {
        let g = k3();
        assert!(is_acyclic(&orient(&g, &[(1, 2), (2, 3), (1, 3)])).unwrap());
        assert!(!is_acyclic(&orient(&g, &[(1, 2), (2, 3), (3, 1)])).unwrap());
        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        assert!(is_acyclic(&orient(&k2, &[(1, 2)])).unwrap());
        assert!(matches!(
            is_acyclic(&PartialOrientation::unoriented(g)),
            Err(Error::NotFull)
        ));
    }

    #[test]
    fn transitivity() {
        let g = p3();
        assert!(is_transitive(&g, &orient(&g, &[(2, 1), (2, 3)])).unwrap());
        assert!(!is_transitive(&g, &orient(&g, &[(1, 2), (2, 3)])).unwrap());
        let g = k3();
        assert!(is_transitive(&g, &orient(&g, &[(1, 2), (2, 3), (1, 3)])).unwrap());
    }

    #[test]
    fn preorder_cases() {
        let g = p3();
        let pre = induced_preorder(&orient(&g, &[(2, 1), (2, 3)])).unwrap();
        assert!(pre.le(2, 1) && pre.le(2, 3));
        assert!(!pre.le(1, 3) && !pre.le(3, 1));

        let pre = induced_preorder(&orient(&g, &[(1, 2), (2, 3)])).unwrap();
        assert!(pre.le(1, 2) && pre.le(2, 3) && pre.le(1, 3));

        let one = Graph::edgeless(1);
        let pre = induced_preorder(&PartialOrientation::unoriented(one)).unwrap();
        assert!(pre.le(1, 1));

        let cyc = orient(&k3(), &[(1, 2), (2, 3), (3, 1)]);
        assert!(matches!(induced_preorder(&cyc), Err(Error::Cyclic)));
    }

    #[test]
    fn cone_membership() {
        let g = p3();
        let o = orient(&g, &[(2, 1), (2, 3)]);
        assert!(cone_contains(&o, &RealVector::new(vec![1.0, -2.0, 1.0]), 1e-9));
        assert!(!cone_contains(&o, &RealVector::new(vec![-2.0, 1.0, -2.0]), 1e-9));
        assert!(cone_contains(&o, &RealVector::new(vec![0.5, 0.5, 0.5]), 1e-9));
    }

    #[test]
    fn generators_k2_p3_k1() {
        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        let gens = cone_generators(&orient(&k2, &[(1, 2)])).unwrap();
        assert_eq!(gens.up_sets, vec![VertexSet::singleton(2)]);
        assert_eq!(gens.generators.len(), 3);

        let g = p3();
        let gens = cone_generators(&orient(&g, &[(2, 1), (2, 3)])).unwrap();
        let expect: Vec<VertexSet> = vec![
            VertexSet::singleton(1),
            VertexSet::singleton(3),
            VertexSet::from_iter([1, 3]),
        ];
        assert_eq!(gens.up_sets, expect);

        let k1 = Graph::edgeless(1);
        let gens = cone_generators(&PartialOrientation::unoriented(k1)).unwrap();
        assert!(gens.up_sets.is_empty());
        assert_eq!(gens.generators.len(), 2);
    }

    #[test]
    fn generator_soundness() {
        let g = Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let o = orient(&g, &[(1, 2), (2, 3), (4, 3), (1, 4)]);
        for gen in cone_generators(&o).unwrap().generators {
            assert!(cone_contains(&o, &gen, 0.0));
        }
    }

    #[test]
    fn cone_invariance_examples() {
        let g = p3();
        let good = orient(&g, &[(2, 1), (2, 3)]);
        let res = is_cone_invariant(&g, &good, 0.0, 1e-9).unwrap();
        assert!(res.invariant);

        let bad = orient(&g, &[(1, 2), (2, 3)]);
        let res = is_cone_invariant(&g, &bad, 0.0, 1e-9).unwrap();
        assert!(!res.invariant);
        let (gen, arc) = res.witness.unwrap();
        // principal filter of 3: indicator (0, 0, 1); L*(0,0,1) = (0,-1,1)
        // rises from vertex 1 to 2 against the arc (1,2)
        assert_eq!(gen.entries(), &[0.0, 0.0, 1.0]);
        assert_eq!(arc, (1, 2));

        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        let o = orient(&k2, &[(1, 2)]);
        assert!(is_cone_invariant(&k2, &o, 0.0, 1e-9).unwrap().invariant);
    }

    #[test]
    fn orientation_roundtrip() {
        let g = p3();
        let mut o = PartialOrientation::unoriented(g);
        o.orient(2, 1);
        let text = to_orientation_text(&o);
        assert_eq!(text, "n 3\na 2 1\nu 2 3\n");
        assert_eq!(parse_orientation(&text).unwrap(), o);
        assert!(parse_orientation("n 2\nu 2 1\n").is_err());
        assert!(parse_orientation("n 2\na 1 2\na 2 1\n").is_err());
    }

    #[test]
    fn reversal() {
        let g = p3();
        let o = orient(&g, &[(2, 1), (2, 3)]);
        assert_eq!(o.reversed().arcs(), vec![(1, 2), (3, 2)]);
        assert_eq!(o.reversed().reversed(), o);
    }
}
