//! Modules, the canonical partition, and the copartition subgraph.
//!
//! Maximal proper modules are found by exhaustive subset scan rather than a
//! linear-time decomposition: the scan doubles as the oracle the rest of the
//! library is validated against, and the spectral machinery provides the
//! scalable route in `compar`.

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition, VertexSet};

/// How one vertex set relates to the module qualifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleReport {
    pub block: VertexSet,
    /// Strict subset of the vertex set.
    pub is_proper: bool,
    /// More than one member.
    pub is_nontrivial: bool,
    /// Induces a connected subgraph.
    pub is_connected: bool,
}

impl ModuleReport {
    pub fn for_set(g: &Graph, block: VertexSet) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::EmptySet);
        }
        let (sub, _) = g.induced_subgraph(&block)?;
        Ok(ModuleReport {
            is_proper: block.len() < g.n(),
            is_nontrivial: block.len() > 1,
            is_connected: sub.is_connected(),
            block,
        })
    }
}

/// True iff every member of `a` has the same neighborhood outside `a`.
pub fn is_module(g: &Graph, a: &VertexSet) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut members = a.iter();
    let first = members.next().unwrap();
    let outside = |v: usize| -> VertexSet {
        g.neighbors(v).iter().filter(|w| !a.contains(*w)).collect()
    };
    let reference = outside(first);
    Ok(members.all(|v| outside(v) == reference))
}

/// All nonempty modules, by exhaustive 2^n scan. Ordered by size, then
/// lexicographically by member list. Capped at n <= 16.
pub fn enumerate_modules_bruteforce(g: &Graph) -> Result<Vec<VertexSet>> {
    let n = g.n();
    if n > 16 {
        return Err(Error::SizeLimit {
            what: "enumerate_modules_bruteforce",
            limit: "n <= 16".into(),
            got: format!("n = {n}"),
        });
    }
    let nbr: Vec<u32> = (0..=n)
        .map(|v| {
            if v == 0 {
                0
            } else {
                g.neighbors(v).iter().fold(0u32, |m, w| m | (1 << (w - 1)))
            }
        })
        .collect();

    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut found: Vec<VertexSet> = Vec::new();
    for mask in 1..=full {
        let mut reference: Option<u32> = None;
        let mut ok = true;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize + 1;
            let outside = nbr[v] & !mask;
            match reference {
                None => reference = Some(outside),
                Some(r) if r != outside => {
                    ok = false;
                    break;
                }
                _ => {}
            }
            m &= m - 1;
        }
        if ok {
            found.push((1..=n).filter(|&v| mask & (1 << (v - 1)) != 0).collect());
        }
    }
    found.sort_by(|a, b| (a.len(), a.to_vec()).cmp(&(b.len(), b.to_vec())));
    Ok(found)
}

/// The canonical partition with its copartition subgraph.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    pub partition: Partition,
    /// Source graph minus every edge internal to a block.
    pub copartition: Graph,
    pub complement_connected: bool,
}

/// Canonical partition of a connected graph: the maximal proper modules when
/// the complement is connected, otherwise the connected components of the
/// complement. Blocks are ordered by minimum vertex label.
pub fn canonical_partition(g: &Graph) -> Result<CanonicalDecomposition> {
    if g.n() < 2 {
        return Err(Error::SizeLimit {
            what: "canonical_partition",
            limit: "n >= 2".into(),
            got: format!("n = {}", g.n()),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let comp = g.complement();
    let comp_parts = comp.connected_components();
    let complement_connected = comp_parts.len() == 1;

    let partition = if !complement_connected {
        comp_parts
    } else {
        maximal_proper_modules(g)?
    };

    let blocked: Vec<usize> = {
        let mut idx = vec![0usize; g.n() + 1];
        for (k, b) in partition.blocks().iter().enumerate() {
            for v in b.iter() {
                idx[v] = k;
            }
        }
        idx
    };
    let copartition = Graph::new(
        g.n(),
        g.edges().filter(|&(i, j)| blocked[i] != blocked[j]),
    )?;

    Ok(CanonicalDecomposition {
        partition,
        copartition,
        complement_connected,
    })
}

/// Inclusion-maximal proper modules, which partition the vertex set whenever
/// both the graph and its complement are connected.
fn maximal_proper_modules(g: &Graph) -> Result<Partition> {
    let n = g.n();
    let all = enumerate_modules_bruteforce(g)?;
    let mut proper: Vec<VertexSet> = all.into_iter().filter(|m| m.len() < n).collect();
    // Scan from largest down; overlap with an already-kept module implies
    // containment (maximal proper modules are pairwise disjoint here), so
    // keeping only sets disjoint from earlier picks yields the maximals.
    proper.sort_by_key(|m| std::cmp::Reverse(m.len()));
    let mut kept: Vec<VertexSet> = Vec::new();
    for m in proper {
        if kept.iter().all(|k| k.is_disjoint(&m)) {
            kept.push(m);
        }
    }
    Partition::new(n, kept)
        .map(Partition::sorted_by_min)
        .map_err(|_| {
            Error::InvalidGraph("maximal proper modules do not partition the vertex set".into())
        })
}

/// The graph on the full vertex set keeping only edges inside `x` — the
/// complement of the copartition construction, used to split the Laplacian.
pub fn restrict_to_block(g: &Graph, x: &VertexSet) -> Result<Graph> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    Graph::new(
        g.n(),
        g.edges().filter(|&(i, j)| x.contains(i) && x.contains(j)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn p4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap()
    }

    fn k3() -> Graph {
        Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn is_module_cases() {
        let g = p4();
        for v in 1..=4 {
            assert!(is_module(&g, &VertexSet::singleton(v)).unwrap());
        }
        assert!(is_module(&g, &VertexSet::full(4)).unwrap());
        assert!(!is_module(&g, &VertexSet::from_iter([2, 3])).unwrap());
        assert!(is_module(&g, &VertexSet::new()).is_err());
    }

    #[test]
    fn enumerate_k2() {
        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        let mods = enumerate_modules_bruteforce(&k2).unwrap();
        let expect: Vec<VertexSet> = vec![
            VertexSet::singleton(1),
            VertexSet::singleton(2),
            VertexSet::from_iter([1, 2]),
        ];
        assert_eq!(mods, expect);
    }

    #[test]
    fn enumerate_p4_prime() {
        let mods = enumerate_modules_bruteforce(&p4()).unwrap();
        assert_eq!(mods.len(), 5); // four singletons and the whole set
        assert_eq!(mods[4], VertexSet::full(4));
    }

    #[test]
    fn enumerate_p3() {
        let mods = enumerate_modules_bruteforce(&p3()).unwrap();
        let expect: Vec<VertexSet> = vec![
            VertexSet::singleton(1),
            VertexSet::singleton(2),
            VertexSet::singleton(3),
            VertexSet::from_iter([1, 3]),
            VertexSet::full(3),
        ];
        assert_eq!(mods, expect);
    }

    #[test]
    fn canonical_p3() {
        let d = canonical_partition(&p3()).unwrap();
        assert!(!d.complement_connected);
        assert_eq!(d.partition.blocks()[0], VertexSet::from_iter([1, 3]));
        assert_eq!(d.partition.blocks()[1], VertexSet::singleton(2));
        assert_eq!(d.copartition, p3());
    }

    #[test]
    fn canonical_k3() {
        let d = canonical_partition(&k3()).unwrap();
        assert!(!d.complement_connected);
        assert_eq!(d.partition.len(), 3);
        assert_eq!(d.copartition, k3());
    }

    #[test]
    fn canonical_p4() {
        let d = canonical_partition(&p4()).unwrap();
        assert!(d.complement_connected);
        assert_eq!(d.partition.len(), 4);
        assert_eq!(d.copartition, p4());
    }

    #[test]
    fn canonical_rejects() {
        assert!(canonical_partition(&Graph::edgeless(1)).is_err());
        assert!(canonical_partition(&Graph::new(3, [(1, 2)]).unwrap()).is_err());
    }

    #[test]
    fn restrict_cases() {
        let g = p3();
        assert_eq!(
            restrict_to_block(&g, &VertexSet::from_iter([1, 3])).unwrap(),
            Graph::edgeless(3)
        );
        let g = p4();
        assert_eq!(
            restrict_to_block(&g, &VertexSet::from_iter([1, 2])).unwrap(),
            Graph::new(4, [(1, 2)]).unwrap()
        );
        assert_eq!(restrict_to_block(&g, &VertexSet::full(4)).unwrap(), g);
    }

    #[test]
    fn module_report_flags() {
        let g = p3();
        let r = ModuleReport::for_set(&g, VertexSet::from_iter([1, 3])).unwrap();
        assert!(r.is_proper && r.is_nontrivial && !r.is_connected);
        let r = ModuleReport::for_set(&g, VertexSet::full(3)).unwrap();
        assert!(!r.is_proper && r.is_nontrivial && r.is_connected);
    }
}
