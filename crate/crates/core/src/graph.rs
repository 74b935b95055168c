//! Simple undirected graphs on vertex set {1, .., n}, plus the elementary
//! operations everything else builds on: Laplacian, complement, components,
//! neighborhoods, induced subgraphs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// A set of vertex labels, each in 1..=n of the graph it refers to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet {
    members: BTreeSet<usize>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet {
            members: BTreeSet::new(),
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet {
            members: BTreeSet::from([v]),
        }
    }

    /// The full set {1, .., n}.
    pub fn full(n: usize) -> Self {
        VertexSet {
            members: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn insert(&mut self, v: usize) {
        self.members.insert(v);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn min(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A partition of {1, .., n} into disjoint nonempty blocks.
///
/// Block order is meaningful to callers (fibers are ordered by value,
/// canonical partitions by minimum vertex), so it is preserved as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<VertexSet>,
}

impl Partition {
    /// Validates disjointness, non-emptiness and coverage of {1, .., n}.
    pub fn new(n: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut covered = 0usize;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidGraph("partition has an empty block".into()));
            }
            for v in b.iter() {
                if v == 0 || v > n {
                    return Err(Error::InvalidGraph(format!(
                        "partition member {v} outside 1..={n}"
                    )));
                }
                if seen[v] {
                    return Err(Error::InvalidGraph(format!(
                        "vertex {v} appears in two blocks"
                    )));
                }
                seen[v] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::InvalidGraph(format!(
                "partition covers {covered} of {n} vertices"
            )));
        }
        Ok(Partition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(v))
            .expect("vertex not covered by partition")
    }

    /// Same blocks, reordered by minimum vertex label.
    pub fn sorted_by_min(mut self) -> Self {
        self.blocks.sort_by_key(|b| b.min().unwrap_or(0));
        self
    }
}

/// Simple undirected graph on vertices 1..=n. Edges are unordered pairs
/// stored as (i, j) with i < j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{i},{j}}} outside 1..={n}"
                )));
            }
            let e = (i.min(j), i.max(j));
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {{{},{}}}",
                    e.0, e.1
                )));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, []).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order, each as (i, j) with i < j.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Laplacian matrix L = D - A; row/column k corresponds to vertex k.
    pub fn laplacian(&self) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(self.n);
        for &(i, j) in &self.edges {
            m.set_entry(i, j, -1.0);
            m.set_entry(j, i, -1.0);
            m.set_entry(i, i, m.entry(i, i) + 1.0);
            m.set_entry(j, j, m.entry(j, j) + 1.0);
        }
        m
    }

    /// Complement graph: {i,j} is an edge iff it is not one here.
    pub fn complement(&self) -> Graph {
        let mut edges = BTreeSet::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if !self.edges.contains(&(i, j)) {
                    edges.insert((i, j));
                }
            }
        }
        Graph { n: self.n, edges }
    }

    /// Vertex sets of the maximal connected subgraphs, ordered by minimum
    /// vertex label.
    pub fn connected_components(&self) -> Partition {
        let mut comp = vec![0usize; self.n + 1];
        let mut next = 0usize;
        for start in 1..=self.n {
            if comp[start] != 0 {
                continue;
            }
            next += 1;
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v).iter() {
                    if comp[u] == 0 {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
        }
        let mut blocks: Vec<VertexSet> = vec![VertexSet::new(); next];
        for v in 1..=self.n {
            blocks[comp[v] - 1].insert(v);
        }
        Partition::new(self.n, blocks)
            .expect("components form a partition")
            .sorted_by_min()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Open neighborhood N(X): vertices outside `x` adjacent to some member.
    pub fn open_neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for &(a, b) in &self.edges {
            if x.contains(a) && !x.contains(b) {
                out.insert(b);
            }
            if x.contains(b) && !x.contains(a) {
                out.insert(a);
            }
        }
        out
    }

    /// Induced subgraph G[X], relabeled to 1..=|X|. Returns the graph and the
    /// label map: new label k corresponds to old label `map[k-1]`.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if x.is_empty() {
            return Err(Error::EmptySet);
        }
        let map: Vec<usize> = x.to_vec();
        let mut rev = vec![0usize; self.n + 1];
        for (k, &v) in map.iter().enumerate() {
            rev[v] = k + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| x.contains(a) && x.contains(b))
            .map(|&(a, b)| (rev[a], rev[b]));
        let g = Graph::new(map.len(), edges)?;
        Ok((g, map))
    }

    /// True iff `x` and `y` are disjoint and every cross pair is an edge.
    pub fn completely_adjacent(&self, x: &VertexSet, y: &VertexSet) -> bool {
        if !x.is_disjoint(y) {
            return false;
        }
        x.iter().all(|i| y.iter().all(|j| self.has_edge(i, j)))
    }
}

// --- edge-list text format ------------------------------------------------
//
//   # comment
//   n 4
//   e 1 2
//   e 2 3
//
// First non-comment line declares the vertex count; `e i j` lines require
// 1 <= i < j <= n and may not repeat.

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
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
                if parts.next().is_some() {
                    return Err(err("trailing tokens after `n <N>`".into()));
                }
                n = Some(v);
            }
            "e" => {
                let nn = n.ok_or_else(|| err("`e` line before `n` line".into()))?;
                let i: usize = parts
                    .next()
                    .ok_or_else(|| err("`e` needs two endpoints".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                let j: usize = parts
                    .next()
                    .ok_or_else(|| err("`e` needs two endpoints".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens after `e <i> <j>`".into()));
                }
                if !(1 <= i && i < j && j <= nn) {
                    return Err(err(format!("edge ({i},{j}) must satisfy 1 <= i < j <= {nn}")));
                }
                if !seen.insert((i, j)) {
                    return Err(err(format!("duplicate edge ({i},{j})")));
                }
                edges.push((i, j));
            }
            _ => return Err(err(format!("unknown line tag `{tag}`"))),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `n <N>` line".into(),
    })?;
    Graph::new(n, edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        out.push_str(&format!("e {i} {j}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    pub(crate) fn p4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn laplacian_k2() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let l = g.laplacian();
        assert_eq!(l.entry(1, 1), 1.0);
        assert_eq!(l.entry(1, 2), -1.0);
        assert_eq!(l.entry(2, 1), -1.0);
        assert_eq!(l.entry(2, 2), 1.0);
    }

    #[test]
    fn laplacian_edgeless() {
        let l = Graph::edgeless(3).laplacian();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(l.entry(i, j), 0.0);
            }
        }
    }

    #[test]
    fn laplacian_p3() {
        let l = p3().laplacian();
        let expect = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(l.entry(i, j), expect[i - 1][j - 1]);
            }
        }
        // rows of any Laplacian sum to zero
        for i in 1..=3 {
            let s: f64 = (1..=3).map(|j| l.entry(i, j)).sum();
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn complement_cases() {
        let k3 = Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k3.complement(), Graph::edgeless(3));
        assert_eq!(p3().complement(), Graph::new(3, [(1, 3)]).unwrap());
        assert_eq!(
            Graph::edgeless(2).complement(),
            Graph::new(2, [(1, 2)]).unwrap()
        );
        assert_eq!(p4().complement().complement(), p4());
    }

    #[test]
    fn components_cases() {
        assert_eq!(p3().connected_components().len(), 1);
        assert_eq!(Graph::edgeless(3).connected_components().len(), 3);
        let comp = p3().complement().connected_components();
        assert_eq!(comp.blocks()[0], VertexSet::from_iter([1, 3]));
        assert_eq!(comp.blocks()[1], VertexSet::singleton(2));
    }

    #[test]
    fn open_neighborhood_cases() {
        let g = p3();
        assert_eq!(
            g.open_neighborhood(&VertexSet::singleton(2)),
            VertexSet::from_iter([1, 3])
        );
        assert_eq!(
            g.open_neighborhood(&VertexSet::from_iter([1, 3])),
            VertexSet::singleton(2)
        );
        assert_eq!(g.open_neighborhood(&VertexSet::full(3)), VertexSet::new());
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = p4();
        let (h, map) = g.induced_subgraph(&VertexSet::from_iter([1, 2])).unwrap();
        assert_eq!(h, Graph::new(2, [(1, 2)]).unwrap());
        assert_eq!(map, vec![1, 2]);

        let (h, _) = g.induced_subgraph(&VertexSet::from_iter([1, 4])).unwrap();
        assert_eq!(h, Graph::edgeless(2));

        let (h, map) = g.induced_subgraph(&VertexSet::full(4)).unwrap();
        assert_eq!(h, g);
        assert_eq!(map, vec![1, 2, 3, 4]);

        assert!(g.induced_subgraph(&VertexSet::new()).is_err());
    }

    #[test]
    fn completely_adjacent_cases() {
        let g = p3();
        assert!(g.completely_adjacent(&VertexSet::singleton(1), &VertexSet::singleton(2)));
        assert!(!g.completely_adjacent(&VertexSet::singleton(1), &VertexSet::singleton(3)));
        assert!(!g.completely_adjacent(&VertexSet::from_iter([1, 2]), &VertexSet::singleton(2)));
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 2)]).is_err());
        assert!(Graph::new(3, [(1, 4)]).is_err());
        assert!(Graph::new(3, [(1, 2), (2, 1)]).is_err());
        assert!(Graph::new(0, []).is_err());
    }

    #[test]
    fn parse_and_serialize() {
        let text = "# a path\nn 3\ne 1 2\ne 2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, p3());
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);

        assert!(parse_edge_list("n 3\ne 2 1\n").is_err()); // i < j required
        assert!(parse_edge_list("n 3\ne 1 2\ne 1 2\n").is_err()); // duplicate
        assert!(parse_edge_list("e 1 2\n").is_err()); // edge before n
        assert!(parse_edge_list("n 0\n").is_err());
        assert!(parse_edge_list("x 1\n").is_err());
    }

    #[test]
    fn partition_validation() {
        let ok = Partition::new(3, vec![VertexSet::from_iter([1, 3]), VertexSet::singleton(2)]);
        assert!(ok.is_ok());
        assert!(Partition::new(3, vec![VertexSet::from_iter([1, 2])]).is_err());
        assert!(Partition::new(
            3,
            vec![VertexSet::from_iter([1, 2]), VertexSet::from_iter([2, 3])]
        )
        .is_err());
        assert!(Partition::new(2, vec![VertexSet::from_iter([1, 2]), VertexSet::new()]).is_err());
    }
}
