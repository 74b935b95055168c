//! Seeded graph generators: named families for tests, Erdős–Rényi samples,
//! and comparability graphs built from random DAG reachability.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn path_graph(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("n >= 1")
}

pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3);
    let edges = (1..n).map(|i| (i, i + 1)).chain([(1, n)]);
    Graph::new(n, edges).expect("valid cycle")
}

pub fn complete_graph(n: usize) -> Graph {
    let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
    Graph::new(n, edges).expect("n >= 1")
}

/// Complete multipartite graph; parts are consecutive label ranges.
pub fn complete_multipartite(sizes: &[usize]) -> Graph {
    assert!(!sizes.is_empty() && sizes.iter().all(|&s| s > 0));
    let n: usize = sizes.iter().sum();
    let mut part = vec![0usize; n + 1];
    let mut v = 1;
    for (k, &s) in sizes.iter().enumerate() {
        for _ in 0..s {
            part[v] = k;
            v += 1;
        }
    }
    let edges = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| part[i] != part[j]);
    Graph::new(n, edges).expect("valid multipartite")
}

/// Erdős–Rényi G(n, p). Not conditioned on anything.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    Graph::new(n, edges).expect("valid gnp sample")
}

/// Connected Erdős–Rényi sample via rejection, up to `max_attempts` draws.
pub fn gnp_connected(n: usize, p: f64, seed: u64, max_attempts: u32) -> Result<Graph> {
    for attempt in 0..max_attempts {
        let g = gnp(n, p, derive(seed, attempt));
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: max_attempts,
    })
}

/// Comparability graph of a random DAG's reachability order: vertices are
/// shuffled into a random linear order, pairs become arcs with probability
/// `density`, and the transitive closure's underlying undirected graph is
/// returned. Connected by rejection.
pub fn random_poset_graph(n: usize, density: f64, seed: u64, max_attempts: u32) -> Result<Graph> {
    for attempt in 0..max_attempts {
        let g = poset_sample(n, density, derive(seed, attempt));
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: max_attempts,
    })
}

fn poset_sample(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random linear order on the labels
    let mut position: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        position.swap(i, rng.gen_range(0..=i));
    }
    let mut reach = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (position[i], position[j]);
            if rng.gen::<f64>() < density {
                reach[a * n + b] = true;
            }
        }
    }
    // transitive closure along the linear order
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }
    let edges = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .filter(|&(a, b)| reach[a * n + b] || reach[b * n + a])
        .map(|(a, b)| (a + 1, b + 1));
    Graph::new(n, edges).expect("valid poset graph")
}

fn derive(seed: u64, attempt: u32) -> u64 {
    crate::spectral::derive_seed(seed, 0x5EED_0000 + attempt as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compar::recognize_bruteforce;

    #[test]
    fn named_families() {
        assert_eq!(path_graph(4).edge_count(), 3);
        assert_eq!(cycle_graph(5).edge_count(), 5);
        assert_eq!(complete_graph(4).edge_count(), 6);
        let g = complete_multipartite(&[2, 2]);
        assert_eq!(g.edge_count(), 4);
        assert!(!g.has_edge(1, 2) && g.has_edge(1, 3));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gnp_connected(6, 0.5, 9, 100).unwrap();
        let b = gnp_connected(6, 0.5, 9, 100).unwrap();
        assert_eq!(a, b);
        let a = random_poset_graph(6, 0.4, 9, 100).unwrap();
        let b = random_poset_graph(6, 0.4, 9, 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn poset_graphs_are_comparability() {
        for seed in 0..20 {
            let g = random_poset_graph(6, 0.35, seed, 200).unwrap();
            assert!(g.is_connected());
            if g.edge_count() <= 20 {
                assert!(recognize_bruteforce(&g).unwrap().is_comparability);
            }
        }
    }
}
