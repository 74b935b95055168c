//! Symmetric eigendecomposition and the top-eigenspace toolkit: unit-vector
//! sampling inside an eigenspace, fiber extraction, induced orientations.
//!
//! The eigensolver is a cyclic Jacobi sweep. It is exact enough for the
//! dense, small-to-medium matrices this library works with and keeps the
//! numerical core free of external dependencies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition, VertexSet};
use crate::matrix::{RealVector, SquareMatrix};
use crate::orientation::PartialOrientation;

/// Numerical knobs. Defaults are calibrated for Laplacians of small
/// integer-weight graphs, whose distinct eigenvalues are well separated.
#[derive(Debug, Clone)]
pub struct ToleranceConfig {
    /// Relative width of the eigenvalue cluster treated as the top eigenspace.
    pub eig_group_tol: f64,
    /// Two vector entries within this distance belong to the same fiber.
    pub fiber_tol: f64,
    /// Slack allowed when testing membership in a closed orientation cone.
    pub cone_tol: f64,
    /// Jacobi stops once off-diagonal Frobenius mass falls below this times
    /// the input norm.
    pub jacobi_sweep_tol: f64,
    pub max_sweeps: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eig_group_tol: 1e-8,
            fiber_tol: 1e-6,
            cone_tol: 1e-9,
            jacobi_sweep_tol: 1e-12,
            max_sweeps: 100,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.eig_group_tol,
            self.fiber_tol,
            self.cone_tol,
            self.jacobi_sweep_tol,
            self.max_sweeps as f64,
        ];
        if all.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::InvalidGraph(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Full eigendecomposition of a symmetric matrix: ascending eigenvalues with
/// a matching orthonormal eigenbasis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<RealVector>,
}

/// Orthonormal basis of the eigenspace of the largest eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenspaceBasis {
    pub n: usize,
    pub vectors: Vec<RealVector>,
    pub lambda_max: f64,
}

impl EigenspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Distance from `x` to its orthogonal projection onto the span.
    pub fn projection_residual(&self, x: &RealVector) -> f64 {
        let mut r = x.clone();
        for b in &self.vectors {
            r.deflate(b);
        }
        r.norm()
    }
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Rejects asymmetric input (checked to 1e-12) and reports non-convergence
/// after `max_sweeps` sweeps.
pub fn eigendecompose(m: &SquareMatrix, cfg: &ToleranceConfig) -> Result<Spectrum> {
    if m.asymmetry() > 1e-12 {
        return Err(Error::NotSymmetric(m.asymmetry()));
    }
    let n = m.n();
    let norm = m.frobenius_norm();
    let stop = cfg.jacobi_sweep_tol * norm.max(f64::MIN_POSITIVE);

    let mut a = m.clone();
    let mut v = SquareMatrix::identity(n);

    let off = |a: &SquareMatrix| -> f64 {
        let mut s = 0.0;
        for i in 1..=n {
            for j in (i + 1)..=n {
                s += 2.0 * a.entry(i, j) * a.entry(i, j);
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1 || off(&a) <= stop;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= cfg.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off: off(&a),
            });
        }
        sweeps += 1;
        for p in 1..n {
            for q in (p + 1)..=n {
                let apq = a.entry(p, q);
                if apq.abs() <= stop / (n as f64) {
                    continue;
                }
                // rotation annihilating a_pq
                let theta = (a.entry(q, q) - a.entry(p, p)) / (2.0 * apq);
                let t = {
                    let s = theta.signum();
                    s / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        converged = off(&a) <= stop;
    }

    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&i, &j| a.entry(i, i).partial_cmp(&a.entry(j, j)).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.entry(i, i)).collect();
    let eigenvectors: Vec<RealVector> = order
        .iter()
        .map(|&col| RealVector::new((1..=n).map(|row| v.entry(row, col)).collect()))
        .collect();

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Two-sided Jacobi rotation of rows/columns p and q of a symmetric matrix.
fn rotate(a: &mut SquareMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.n();
    let (p0, q0) = (p - 1, q - 1);
    let data = a.data_mut();
    for k in 0..n {
        if k == p0 || k == q0 {
            continue;
        }
        let akp = data[k * n + p0];
        let akq = data[k * n + q0];
        data[k * n + p0] = c * akp - s * akq;
        data[k * n + q0] = s * akp + c * akq;
        data[p0 * n + k] = data[k * n + p0];
        data[q0 * n + k] = data[k * n + q0];
    }
    let app = data[p0 * n + p0];
    let aqq = data[q0 * n + q0];
    let apq = data[p0 * n + q0];
    data[p0 * n + p0] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    data[q0 * n + q0] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    data[p0 * n + q0] = 0.0;
    data[q0 * n + p0] = 0.0;
}

/// Right-multiply the accumulated eigenvector matrix by the rotation.
fn rotate_columns(v: &mut SquareMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = v.n();
    let (p0, q0) = (p - 1, q - 1);
    let data = v.data_mut();
    for k in 0..n {
        let vkp = data[k * n + p0];
        let vkq = data[k * n + q0];
        data[k * n + p0] = c * vkp - s * vkq;
        data[k * n + q0] = s * vkp + c * vkq;
    }
}

/// Collects the eigenvectors whose eigenvalue sits within
/// `eig_group_tol * max(1, lambda_max)` of the top and re-orthonormalizes.
///
/// The graph must be connected with n >= 2; in that regime the top eigenspace
/// is orthogonal to the all-ones vector.
pub fn top_eigenspace(s: &Spectrum, g: &Graph, cfg: &ToleranceConfig) -> Result<EigenspaceBasis> {
    if g.n() < 2 {
        return Err(Error::SizeLimit {
            what: "top_eigenspace",
            limit: "n >= 2".into(),
            got: format!("n = {}", g.n()),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lambda_max = *s.eigenvalues.last().expect("nonempty spectrum");
    let width = cfg.eig_group_tol * lambda_max.max(1.0);
    let picked: Vec<RealVector> = s
        .eigenvalues
        .iter()
        .zip(&s.eigenvectors)
        .filter(|(&l, _)| lambda_max - l <= width)
        .map(|(_, v)| v.clone())
        .collect();

    // Jacobi output is orthonormal already; a Gram-Schmidt pass tidies up
    // rounding inside the cluster.
    let mut vectors: Vec<RealVector> = Vec::with_capacity(picked.len());
    for mut v in picked {
        for b in &vectors {
            v.deflate(b);
        }
        let norm = v.norm();
        debug_assert!(norm > 1e-8, "cluster vectors nearly dependent");
        vectors.push(v.scale(1.0 / norm));
    }

    Ok(EigenspaceBasis {
        n: g.n(),
        vectors,
        lambda_max,
    })
}

/// Deterministic seed derivation for independent sampling branches.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniformly chosen unit vector in the span of `basis`: standard Gaussian
/// coefficients on the orthonormal basis, normalized. Deterministic per seed.
pub fn sample_ucuv(basis: &EigenspaceBasis, seed: u64) -> RealVector {
    assert!(basis.dim() > 0, "sample_ucuv needs a nonempty basis");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs: Vec<f64> = (0..basis.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let mut x = RealVector::zeros(basis.n);
        for (c, b) in coeffs.iter().zip(&basis.vectors) {
            x = x.add(&b.scale(*c));
        }
        let norm = x.norm();
        if norm > 1e-12 {
            return x.scale(1.0 / norm);
        }
    }
}

/// Vertex classes whose coordinates agree across the whole eigenspace.
///
/// Two vertices land in one class when every basis vector gives them equal
/// entries (within `fiber_tol`); a generic sample separates exactly these
/// classes, so they act as the reference when declaring a sample degenerate.
fn coordinate_classes(basis: &EigenspaceBasis, fiber_tol: f64) -> Vec<usize> {
    let n = basis.n;
    let mut class: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let same = basis
                .vectors
                .iter()
                .all(|b| (b.entries()[i] - b.entries()[j]).abs() <= fiber_tol);
            if same {
                // union by relabel; n is small enough for the simple version
                let (ci, cj) = (class[i], class[j]);
                if ci != cj {
                    for c in class.iter_mut() {
                        if *c == cj {
                            *c = ci;
                        }
                    }
                }
            }
        }
    }
    class
}

/// Samples a u.c.u.v., resampling (next derived seed, up to 16 attempts)
/// whenever two vertices from different coordinate classes land within
/// `10 * fiber_tol` of each other. Returns the vector and the attempt count.
pub fn sample_ucuv_nondegenerate(
    basis: &EigenspaceBasis,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<(RealVector, u32)> {
    const MAX_ATTEMPTS: u32 = 16;
    let class = coordinate_classes(basis, cfg.fiber_tol);
    let gap = 10.0 * cfg.fiber_tol;
    for attempt in 0..MAX_ATTEMPTS {
        let s = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, attempt as u64)
        };
        let x = sample_ucuv(basis, s);
        let degenerate = (0..basis.n).any(|i| {
            ((i + 1)..basis.n).any(|j| {
                class[i] != class[j] && (x.entries()[i] - x.entries()[j]).abs() <= gap
            })
        });
        if !degenerate {
            return Ok((x, attempt + 1));
        }
    }
    Err(Error::Degenerate {
        attempts: MAX_ATTEMPTS,
    })
}

/// Partition of the vertices into blocks of (numerically) equal value.
///
/// Entries are sorted and cut wherever consecutive values differ by more than
/// `fiber_tol`; the clustering is transitive by construction. Blocks are
/// returned in ascending order of their value.
pub fn fibers(x: &RealVector, cfg: &ToleranceConfig) -> Partition {
    let n = x.n();
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| x.value(a).partial_cmp(&x.value(b)).unwrap());

    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut current = VertexSet::new();
    let mut prev: Option<f64> = None;
    for v in order {
        let val = x.value(v);
        if let Some(p) = prev {
            if val - p > cfg.fiber_tol {
                blocks.push(std::mem::take(&mut current));
            }
        }
        current.insert(v);
        prev = Some(val);
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    Partition::new(n, blocks).expect("gap clustering yields a partition")
}

/// Mean value of `x` on each block of `part`, in block order.
pub fn fiber_values(x: &RealVector, part: &Partition) -> Vec<f64> {
    part.blocks()
        .iter()
        .map(|b| b.iter().map(|v| x.value(v)).sum::<f64>() / b.len() as f64)
        .collect()
}

/// Orientation induced by `x`: each edge points toward its larger endpoint
/// value, and stays unoriented exactly when both endpoints share a fiber.
pub fn induce_orientation(g: &Graph, x: &RealVector, cfg: &ToleranceConfig) -> PartialOrientation {
    debug_assert_eq!(g.n(), x.n());
    let part = fibers(x, cfg);
    let mut rank = vec![0usize; g.n() + 1];
    for (k, b) in part.blocks().iter().enumerate() {
        for v in b.iter() {
            rank[v] = k;
        }
    }
    let mut o = PartialOrientation::unoriented(g.clone());
    for (i, j) in g.edges() {
        if rank[i] < rank[j] {
            o.orient(i, j);
        } else if rank[j] < rank[i] {
            o.orient(j, i);
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn k(n: usize) -> Graph {
        let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
        Graph::new(n, edges).unwrap()
    }

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn eigen_k2() {
        let s = eigendecompose(&k(2).laplacian(), &cfg()).unwrap();
        assert_close(s.eigenvalues[0], 0.0, 1e-12);
        assert_close(s.eigenvalues[1], 2.0, 1e-12);
    }

    #[test]
    fn eigen_p3() {
        // frozen from the closed-form cubic oracle in tests/oracle.rs
        let s = eigendecompose(&p3().laplacian(), &cfg()).unwrap();
        let expect = [0.0, 1.0, 3.0];
        for (l, e) in s.eigenvalues.iter().zip(expect) {
            assert_close(*l, e, 1e-10);
        }
    }

    #[test]
    fn eigen_k22() {
        // frozen from the characteristic-polynomial oracle in tests/oracle.rs
        let g = Graph::new(4, [(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        let s = eigendecompose(&g.laplacian(), &cfg()).unwrap();
        let expect = [0.0, 2.0, 2.0, 4.0];
        for (l, e) in s.eigenvalues.iter().zip(expect) {
            assert_close(*l, e, 1e-10);
        }
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let mut m = SquareMatrix::zeros(2);
        m.set_entry(1, 2, 1.0);
        assert!(matches!(
            eigendecompose(&m, &cfg()),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn eigen_residuals_and_orthonormality() {
        let g = Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)]).unwrap();
        let l = g.laplacian();
        let s = eigendecompose(&l, &cfg()).unwrap();
        for (k, v) in s.eigenvectors.iter().enumerate() {
            let r = l.mul_vec(v).sub(&v.scale(s.eigenvalues[k]));
            assert!(r.norm() <= 1e-8 * s.eigenvalues[k].max(1.0));
            for (k2, w) in s.eigenvectors.iter().enumerate() {
                let expect = if k == k2 { 1.0 } else { 0.0 };
                assert_close(v.dot(w), expect, 1e-9);
            }
        }
    }

    #[test]
    fn top_eigenspace_k3_p3_p4() {
        let c = cfg();
        let b = top_eigenspace(&eigendecompose(&k(3).laplacian(), &c).unwrap(), &k(3), &c).unwrap();
        assert_eq!(b.dim(), 2);
        assert_close(b.lambda_max, 3.0, 1e-10);

        let b = top_eigenspace(&eigendecompose(&p3().laplacian(), &c).unwrap(), &p3(), &c).unwrap();
        assert_eq!(b.dim(), 1);
        let probe = RealVector::new(vec![1.0, -2.0, 1.0]).scale(1.0 / 6.0f64.sqrt());
        assert_close(b.vectors[0].dot(&probe).abs(), 1.0, 1e-9);

        let p4 = Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let b = top_eigenspace(&eigendecompose(&p4.laplacian(), &c).unwrap(), &p4, &c).unwrap();
        assert_eq!(b.dim(), 1);
    }

    #[test]
    fn top_eigenspace_rejects() {
        let c = cfg();
        let disc = Graph::new(3, [(1, 2)]).unwrap();
        let s = eigendecompose(&disc.laplacian(), &c).unwrap();
        assert!(matches!(top_eigenspace(&s, &disc, &c), Err(Error::Disconnected)));

        let one = Graph::edgeless(1);
        let s = eigendecompose(&one.laplacian(), &c).unwrap();
        assert!(top_eigenspace(&s, &one, &c).is_err());
    }

    #[test]
    fn sampling_properties() {
        let c = cfg();
        let g = k(3);
        let b = top_eigenspace(&eigendecompose(&g.laplacian(), &c).unwrap(), &g, &c).unwrap();
        let x0 = sample_ucuv(&b, 0);
        let x1 = sample_ucuv(&b, 1);
        assert!(x0.sub(&x1).norm() > 1e-6);
        let ones = RealVector::new(vec![1.0; 3]);
        assert!(x0.dot(&ones).abs() <= 1e-8);
        assert!(x1.dot(&ones).abs() <= 1e-8);
        assert_close(x0.norm(), 1.0, 1e-12);
        assert!(b.projection_residual(&x0) <= 1e-10);
        // determinism
        assert_eq!(x0, sample_ucuv(&b, 0));

        // dimension-1 basis: only two unit vectors exist
        let g = p3();
        let b = top_eigenspace(&eigendecompose(&g.laplacian(), &c).unwrap(), &g, &c).unwrap();
        for seed in 0..8 {
            let x = sample_ucuv(&b, seed);
            assert_close(x.dot(&b.vectors[0]).abs(), 1.0, 1e-12);
        }
    }

    #[test]
    fn fibers_cases() {
        let c = cfg();
        let p = fibers(&RealVector::new(vec![1.0, -2.0, 1.0]), &c);
        assert_eq!(p.blocks()[0], VertexSet::singleton(2));
        assert_eq!(p.blocks()[1], VertexSet::from_iter([1, 3]));

        let p = fibers(&RealVector::new(vec![0.7, 0.7, 0.7]), &c);
        assert_eq!(p.len(), 1);

        let p = fibers(&RealVector::new(vec![0.0, 0.5, 1.0]), &c);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn induce_orientation_cases() {
        let c = cfg();
        let g = p3();
        let x = RealVector::new(vec![1.0, -2.0, 1.0]).scale(1.0 / 6.0f64.sqrt());
        let o = induce_orientation(&g, &x, &c);
        assert_eq!(o.arcs(), vec![(2, 1), (2, 3)]);

        let o = induce_orientation(&g, &RealVector::new(vec![0.3, 0.3, 0.3]), &c);
        assert!(o.arcs().is_empty());
        assert_eq!(o.unoriented_edges().len(), 2);

        let k2 = k(2);
        let x = RealVector::new(vec![-1.0, 1.0]).scale(1.0 / 2.0f64.sqrt());
        let o = induce_orientation(&k2, &x, &c);
        assert_eq!(o.arcs(), vec![(1, 2)]);
    }

    #[test]
    fn nondegenerate_sampling_k3() {
        let c = cfg();
        let g = k(3);
        let b = top_eigenspace(&eigendecompose(&g.laplacian(), &c).unwrap(), &g, &c).unwrap();
        let (x, attempts) = sample_ucuv_nondegenerate(&b, 7, &c).unwrap();
        assert!(attempts >= 1);
        let f = fibers(&x, &c);
        assert_eq!(f.len(), 3, "non-degenerate sample separates K3 vertices");
    }

    #[test]
    fn degenerate_when_tolerance_is_huge() {
        let mut c = cfg();
        c.fiber_tol = 0.2; // 10x gap swallows the whole unit ball spread
        let g = k(3);
        let b =
            top_eigenspace(&eigendecompose(&g.laplacian(), &cfg()).unwrap(), &g, &cfg()).unwrap();
        assert!(matches!(
            sample_ucuv_nondegenerate(&b, 0, &c),
            Err(Error::Degenerate { attempts: 16 })
        ));
    }

    #[test]
    fn derive_seed_spreads() {
        let a = derive_seed(42, 1);
        let b = derive_seed(42, 2);
        let c = derive_seed(43, 1);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
