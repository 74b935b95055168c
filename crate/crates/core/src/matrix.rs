//! Dense real square matrices and vectors indexed by vertex labels.
//!
//! Row/column k corresponds to vertex k (labels are 1-based, storage is not).

use std::fmt;

/// Real vector in R^{[n]}; entry for vertex v is `value(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector {
    entries: Vec<f64>,
}

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Self {
        RealVector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        RealVector {
            entries: vec![0.0; n],
        }
    }

    /// Indicator vector of a vertex set inside {1, .., n}.
    pub fn indicator(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut v = RealVector::zeros(n);
        for m in members {
            v.entries[m - 1] = 1.0;
        }
        v
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Entry at vertex `v` (1-based).
    pub fn value(&self, v: usize) -> f64 {
        self.entries[v - 1]
    }

    pub fn set_value(&mut self, v: usize, x: f64) {
        self.entries[v - 1] = x;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn dot(&self, other: &RealVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, c: f64) -> RealVector {
        RealVector {
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &RealVector) -> RealVector {
        RealVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RealVector) -> RealVector {
        RealVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Subtract the projection onto `other` (assumed unit norm).
    pub fn deflate(&mut self, other: &RealVector) {
        let c = self.dot(other);
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            *x -= c * y;
        }
    }
}

/// Dense n-by-n real matrix; `entry(i, j)` addresses the vertex pair (i, j).
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 1..=n {
            m.set_entry(i, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    pub fn set_entry(&mut self, i: usize, j: usize, x: f64) {
        self.data[(i - 1) * self.n + (j - 1)] = x;
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Largest |m_ij - m_ji| over all pairs.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                worst = worst.max((self.entry(i, j) - self.entry(j, i)).abs());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &RealVector) -> RealVector {
        debug_assert_eq!(self.n, v.n());
        let mut out = vec![0.0; self.n];
        for r in 0..self.n {
            let row = &self.data[r * self.n..(r + 1) * self.n];
            out[r] = row
                .iter()
                .zip(v.entries())
                .map(|(a, b)| a * b)
                .sum::<f64>();
        }
        RealVector::new(out)
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        debug_assert_eq!(self.n, other.n);
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> SquareMatrix {
        debug_assert_eq!(self.n, other.n);
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Rank-one accumulate: self += c * v * v^T.
    pub fn add_outer(&mut self, c: f64, v: &RealVector) {
        for r in 0..self.n {
            for s in 0..self.n {
                self.data[r * self.n + s] += c * v.entries()[r] * v.entries()[s];
            }
        }
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            for j in 1..=self.n {
                if j > 1 {
                    write!(f, " ")?;
                }
                write!(f, "{:8.4}", self.entry(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_vec_and_outer() {
        let mut m = SquareMatrix::zeros(2);
        m.set_entry(1, 1, 1.0);
        m.set_entry(1, 2, -1.0);
        m.set_entry(2, 1, -1.0);
        m.set_entry(2, 2, 1.0);
        let v = RealVector::new(vec![1.0, -1.0]);
        assert_eq!(m.mul_vec(&v).entries(), &[2.0, -2.0]);

        let mut p = SquareMatrix::zeros(2);
        p.add_outer(0.5, &RealVector::new(vec![1.0, 1.0]));
        assert_eq!(p.entry(1, 2), 0.5);
        assert_eq!(p.entry(2, 2), 0.5);
    }

    #[test]
    fn asymmetry_detects() {
        let mut m = SquareMatrix::identity(3);
        assert_eq!(m.asymmetry(), 0.0);
        m.set_entry(1, 3, 2.0);
        assert_eq!(m.asymmetry(), 2.0);
    }
}
