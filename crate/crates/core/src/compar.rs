//! Comparability recognition and transitive orientations: a brute-force
//! census (the oracle), a product-formula count through the canonical
//! partition, and the randomized spectral orientation procedure that samples
//! the top eigenspace and recurses through fibers.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modular::canonical_partition;
use crate::orientation::{is_transitive, PartialOrientation};
use crate::spectral::{
    derive_seed, eigendecompose, fibers, induce_orientation, sample_ucuv_nondegenerate,
    top_eigenspace, ToleranceConfig,
};

/// 2^|E| scans stay tractable up to here.
pub const BRUTEFORCE_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecognitionMethod {
    BruteForce,
    Spectral,
}

/// Verdict of a comparability test, with a transitive orientation as the
/// certificate on success.
#[derive(Debug, Clone)]
pub struct RecognitionResult {
    pub is_comparability: bool,
    pub certificate: Option<PartialOrientation>,
    pub method: RecognitionMethod,
}

/// Every transitive orientation of a graph, lexicographically ordered by
/// arc list.
#[derive(Debug, Clone)]
pub struct OrientationCensus {
    pub orientations: Vec<PartialOrientation>,
    pub count: u64,
}

/// Depth-first scan over full orientations with composition pruning: once
/// arcs (x,a),(a,b) are both placed, the closing edge {x,b} must exist and
/// must not be oriented against them. Leaves are verified in full.
fn scan_transitive(g: &Graph, stop_at_first: bool) -> Result<Vec<PartialOrientation>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.edge_count() > BRUTEFORCE_EDGE_LIMIT {
        return Err(Error::SizeLimit {
            what: "orientation scan",
            limit: format!("|E| <= {BRUTEFORCE_EDGE_LIMIT}"),
            got: format!("|E| = {}", g.edge_count()),
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let n = g.n();

    struct Scan<'a> {
        g: &'a Graph,
        edges: &'a [(usize, usize)],
        has_arc: Vec<bool>,
        out: Vec<Vec<usize>>,
        inc: Vec<Vec<usize>>,
        arcs: Vec<(usize, usize)>,
        found: Vec<PartialOrientation>,
        stop_at_first: bool,
    }

    impl Scan<'_> {
        fn idx(&self, a: usize, b: usize) -> usize {
            a * (self.g.n() + 1) + b
        }

        fn compatible(&self, a: usize, b: usize) -> bool {
            // close (x,a),(a,b)
            for &x in &self.inc[a] {
                if !self.g.has_edge(x, b) || self.has_arc[self.idx(b, x)] {
                    return false;
                }
            }
            // close (a,b),(b,y)
            for &y in &self.out[b] {
                if !self.g.has_edge(a, y) || self.has_arc[self.idx(y, a)] {
                    return false;
                }
            }
            true
        }

        fn place(&mut self, depth: usize) -> bool {
            if depth == self.edges.len() {
                let o = PartialOrientation::from_arcs(self.g.clone(), self.arcs.iter().copied())
                    .expect("arcs cover every edge");
                if is_transitive(self.g, &o).expect("full orientation") {
                    self.found.push(o);
                    if self.stop_at_first {
                        return true;
                    }
                }
                return false;
            }
            let (i, j) = self.edges[depth];
            for (a, b) in [(i, j), (j, i)] {
                if !self.compatible(a, b) {
                    continue;
                }
                let slot = self.idx(a, b);
                self.has_arc[slot] = true;
                self.out[a].push(b);
                self.inc[b].push(a);
                self.arcs.push((a, b));
                let stop = self.place(depth + 1);
                self.arcs.pop();
                self.inc[b].pop();
                self.out[a].pop();
                self.has_arc[slot] = false;
                if stop {
                    return true;
                }
            }
            false
        }
    }

    let mut scan = Scan {
        g,
        edges: &edges,
        has_arc: vec![false; (n + 1) * (n + 1)],
        out: vec![Vec::new(); n + 1],
        inc: vec![Vec::new(); n + 1],
        arcs: Vec::new(),
        found: Vec::new(),
        stop_at_first,
    };
    scan.place(0);
    Ok(scan.found)
}

/// Scans full orientations and returns the first transitive one found, or a
/// negative verdict. Connected input with at most 20 edges.
pub fn recognize_bruteforce(g: &Graph) -> Result<RecognitionResult> {
    let mut found = scan_transitive(g, true)?;
    Ok(RecognitionResult {
        is_comparability: !found.is_empty(),
        certificate: found.pop(),
        method: RecognitionMethod::BruteForce,
    })
}

/// All transitive orientations, in deterministic (lexicographic) order.
pub fn enumerate_transitive_orientations(g: &Graph) -> Result<OrientationCensus> {
    let mut found = scan_transitive(g, false)?;
    found.sort_by_key(|o| o.arcs());
    Ok(OrientationCensus {
        count: found.len() as u64,
        orientations: found,
    })
}

/// Counts transitive orientations through the canonical partition:
/// orientations of the copartition subgraph times, for every connected
/// component of every block, the count of the induced subgraph. Rejects
/// non-comparability input.
pub fn count_via_decomposition(g: &Graph) -> Result<u64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    count_rec(g)
}

fn count_rec(g: &Graph) -> Result<u64> {
    if g.n() == 1 {
        return Ok(1);
    }
    let d = canonical_partition(g)?;
    let quotient = enumerate_transitive_orientations(&d.copartition)?;
    if quotient.count == 0 {
        return Err(Error::NotComparability);
    }
    let mut total = quotient.count;
    for block in d.partition.blocks() {
        if block.len() < 2 {
            continue;
        }
        let (sub, _) = g.induced_subgraph(block)?;
        for comp in sub.connected_components().blocks() {
            if comp.len() < 2 {
                continue;
            }
            let (csub, _) = sub.induced_subgraph(comp)?;
            total = total
                .checked_mul(count_rec(&csub)?)
                .ok_or(Error::NotComparability)?;
        }
    }
    Ok(total)
}

/// One round of the iterative spectral procedure: sample a u.c.u.v. in the
/// top eigenspace, keep the arcs it induces (they orient the copartition
/// subgraph), and recurse with derived seeds on the connected components
/// inside each fiber. The assembled orientation must come out transitive;
/// anything else is reported as an inconsistency (tolerance trouble or
/// non-comparability input).
pub fn spectral_orient(g: &Graph, seed: u64, cfg: &ToleranceConfig) -> Result<PartialOrientation> {
    let mut arcs = Vec::new();
    orient_level(g, seed, cfg, &mut arcs)?;
    let o = PartialOrientation::from_arcs(g.clone(), arcs)?;
    if !is_transitive(g, &o)? {
        return Err(Error::Inconsistent(
            "assembled orientation is not transitive".into(),
        ));
    }
    Ok(o)
}

fn orient_level(
    g: &Graph,
    seed: u64,
    cfg: &ToleranceConfig,
    out: &mut Vec<(usize, usize)>,
) -> Result<()> {
    let n = g.n();
    if n == 1 {
        return Ok(());
    }
    let spectrum = eigendecompose(&g.laplacian(), cfg)?;
    let basis = top_eigenspace(&spectrum, g, cfg)?;
    let (x, _) = sample_ucuv_nondegenerate(&basis, seed, cfg)?;
    let induced = induce_orientation(g, &x, cfg);
    let arcs = induced.arcs();

    // The oriented part must already be transitive on the subgraph it covers.
    let covered = Graph::new(n, arcs.iter().map(|&(a, b)| (a.min(b), a.max(b))))?;
    let part = PartialOrientation::from_arcs(covered.clone(), arcs.iter().copied())?;
    if !is_transitive(&covered, &part)? {
        return Err(Error::Inconsistent(
            "induced orientation of the copartition subgraph is not transitive".into(),
        ));
    }
    out.extend(arcs);

    for fiber in fibers(&x, cfg).blocks() {
        if fiber.len() < 2 {
            continue;
        }
        let (sub, map) = g.induced_subgraph(fiber)?;
        for comp in sub.connected_components().blocks() {
            if comp.len() < 2 {
                continue;
            }
            let (csub, cmap) = sub.induced_subgraph(comp)?;
            let fiber_min = fiber.min().unwrap() as u64;
            let comp_min = map[comp.min().unwrap() - 1] as u64;
            let child_seed = derive_seed(seed, (fiber_min << 32) | comp_min);
            let mut child_arcs = Vec::new();
            orient_level(&csub, child_seed, cfg, &mut child_arcs)?;
            out.extend(
                child_arcs
                    .into_iter()
                    .map(|(a, b)| (map[cmap[a - 1] - 1], map[cmap[b - 1] - 1])),
            );
        }
    }
    Ok(())
}

/// Runs `spectral_orient` speculatively. A transitive output settles the
/// question; persistent failures fall back to the brute-force scan when the
/// graph is small enough, and are inconclusive otherwise.
pub fn recognize_spectral(
    g: &Graph,
    trials: u32,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<RecognitionResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for t in 0..trials.max(1) {
        let s = if t == 0 {
            seed
        } else {
            derive_seed(seed, (1 << 24) + t as u64)
        };
        match spectral_orient(g, s, cfg) {
            Ok(o) => {
                return Ok(RecognitionResult {
                    is_comparability: true,
                    certificate: Some(o),
                    method: RecognitionMethod::Spectral,
                })
            }
            Err(Error::Inconsistent(_)) | Err(Error::Degenerate { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if g.edge_count() <= BRUTEFORCE_EDGE_LIMIT {
        recognize_bruteforce(g)
    } else {
        Err(Error::Inconclusive { trials })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn p4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap()
    }

    fn k3() -> Graph {
        Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn c5() -> Graph {
        Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap()
    }

    #[test]
    fn bruteforce_verdicts() {
        let r = recognize_bruteforce(&p4()).unwrap();
        assert!(r.is_comparability);
        let cert = r.certificate.unwrap();
        assert!(is_transitive(&p4(), &cert).unwrap());

        let r = recognize_bruteforce(&c5()).unwrap();
        assert!(!r.is_comparability);
        assert!(r.certificate.is_none());

        assert!(recognize_bruteforce(&k3()).unwrap().is_comparability);
    }

    #[test]
    fn census_counts() {
        assert_eq!(enumerate_transitive_orientations(&k3()).unwrap().count, 6);
        assert_eq!(enumerate_transitive_orientations(&p4()).unwrap().count, 2);
        assert_eq!(enumerate_transitive_orientations(&c5()).unwrap().count, 0);
    }

    #[test]
    fn census_is_sorted_and_reversal_closed() {
        let census = enumerate_transitive_orientations(&k3()).unwrap();
        let arcs: Vec<_> = census.orientations.iter().map(|o| o.arcs()).collect();
        let mut sorted = arcs.clone();
        sorted.sort();
        assert_eq!(arcs, sorted);
        for o in &census.orientations {
            assert!(census.orientations.contains(&o.reversed()));
        }
    }

    #[test]
    fn decomposition_counts() {
        assert_eq!(count_via_decomposition(&k3()).unwrap(), 6);
        assert_eq!(count_via_decomposition(&p3()).unwrap(), 2);
        assert_eq!(count_via_decomposition(&p4()).unwrap(), 2);
        assert!(matches!(
            count_via_decomposition(&c5()),
            Err(Error::NotComparability)
        ));
    }

    #[test]
    fn spectral_orient_p3() {
        let cfg = ToleranceConfig::default();
        let g = p3();
        let a = [(2, 1), (2, 3)];
        let b = [(1, 2), (3, 2)];
        for seed in 0..10 {
            let arcs = spectral_orient(&g, seed, &cfg).unwrap().arcs();
            assert!(arcs == a || arcs == b, "unexpected arcs {arcs:?}");
        }
    }

    #[test]
    fn spectral_orient_k2() {
        let cfg = ToleranceConfig::default();
        let g = Graph::new(2, [(1, 2)]).unwrap();
        for seed in 0..6 {
            let arcs = spectral_orient(&g, seed, &cfg).unwrap().arcs();
            assert!(arcs == [(1, 2)] || arcs == [(2, 1)]);
        }
    }

    #[test]
    fn spectral_orient_p4_hits_both() {
        let cfg = ToleranceConfig::default();
        let g = p4();
        let mut freq: BTreeMap<Vec<(usize, usize)>, usize> = BTreeMap::new();
        for seed in 0..400 {
            let o = spectral_orient(&g, seed, &cfg).unwrap();
            assert!(is_transitive(&g, &o).unwrap());
            *freq.entry(o.arcs()).or_default() += 1;
        }
        assert_eq!(freq.len(), 2);
        assert!(freq.values().all(|&c| c > 100));
    }

    #[test]
    fn spectral_recognition() {
        let cfg = ToleranceConfig::default();
        let r = recognize_spectral(&p4(), 3, 11, &cfg).unwrap();
        assert!(r.is_comparability);
        assert_eq!(r.method, RecognitionMethod::Spectral);
        assert!(is_transitive(&p4(), &r.certificate.unwrap()).unwrap());

        let r = recognize_spectral(&c5(), 3, 11, &cfg).unwrap();
        assert!(!r.is_comparability);
        assert_eq!(r.method, RecognitionMethod::BruteForce);

        assert!(recognize_spectral(&k3(), 3, 0, &cfg).unwrap().is_comparability);
    }

    #[test]
    fn size_limit_respected() {
        // K7 has 21 edges, one past the scan limit
        let edges = (1..=7).flat_map(|i| ((i + 1)..=7).map(move |j| (i, j)));
        let k7 = Graph::new(7, edges).unwrap();
        assert!(matches!(
            recognize_bruteforce(&k7),
            Err(Error::SizeLimit { .. })
        ));
    }
}
