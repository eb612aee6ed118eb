//! Skew-symmetric exchange matrices and their quivers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),
    #[error("matrix rows have inconsistent lengths")]
    Ragged,
}

/// Square matrix `b_{ij}` stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> ExchangeMatrix<T> {
    pub fn zero(n: usize) -> Self {
        ExchangeMatrix {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from rows without checking skew-symmetry (C-matrices are not).
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Ragged);
        }
        Ok(ExchangeMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a skew-symmetric matrix from rows.
    pub fn skew_from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let m = Self::from_rows(rows)?;
        m.check_skew_symmetric()?;
        Ok(m)
    }

    /// Builds the skew-symmetric matrix of a quiver given by arrows `(i, j)`,
    /// each occurrence counting once.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Result<Self, MatrixError> {
        let mut m = Self::zero(n);
        for &(i, j) in arrows {
            for k in [i, j] {
                if k >= n {
                    return Err(MatrixError::IndexOutOfRange { index: k, rank: n });
                }
            }
            m.add(i, j, T::one());
            m.add(j, i, -T::one());
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let e = &mut self.entries[i * self.n + j];
        *e = e.clone() + v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn check_skew_symmetric(&self) -> Result<(), MatrixError> {
        for i in 0..self.n {
            for j in i..self.n {
                if *self.get(i, j) != -self.get(j, i).clone() {
                    return Err(MatrixError::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.check_skew_symmetric().is_ok()
    }

    pub fn negated(&self) -> Self {
        ExchangeMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }

    /// `P B P^T` for the relabeling sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// Exchange-matrix mutation at `k`:
    /// `b'_{ij} = -b_{ij}` if `k ∈ {i, j}`, else
    /// `b_{ij} + sgn(b_{ik}) max(0, b_{ik} b_{kj})`.
    pub fn mutate(&self, k: usize) -> Result<Self, MatrixError> {
        if k >= self.n {
            return Err(MatrixError::IndexOutOfRange {
                index: k,
                rank: self.n,
            });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = if i == k || j == k {
                    -self.get(i, j).clone()
                } else {
                    let bik = self.get(i, k);
                    let prod = (bik.clone() * self.get(k, j).clone()).positive_part();
                    self.get(i, j).clone() + bik.signum() * prod
                };
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Converts entries to another scalar type.
    pub fn convert<U: Scalar>(&self) -> Option<ExchangeMatrix<U>> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_i64().and_then(U::from_i64))
            .collect::<Option<Vec<U>>>()?;
        Some(ExchangeMatrix { n: self.n, entries })
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(T::zero)
    }
}

impl<T: Scalar> fmt::Debug for ExchangeMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Quiver of a skew-symmetric matrix: `b_{ij} > 0` arrows from `i` to `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: usize,
    /// Sorted `(i, j, multiplicity)` with positive multiplicity.
    pub arrows: Vec<(usize, usize, u64)>,
}

impl Quiver {
    pub fn from_matrix<T: Scalar>(b: &ExchangeMatrix<T>) -> Result<Self, MatrixError> {
        b.check_skew_symmetric()?;
        let mut arrows = Vec::new();
        for i in 0..b.rank() {
            for j in 0..b.rank() {
                let e = b.get(i, j);
                if e.is_positive() {
                    let mult = e.to_u64().expect("arrow multiplicity fits u64");
                    arrows.push((i, j, mult));
                }
            }
        }
        Ok(Quiver {
            vertices: b.rank(),
            arrows,
        })
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        self.arrows
            .iter()
            .find(|a| a.0 == i && a.1 == j)
            .map(|a| a.2)
            .unwrap_or(0)
    }

    pub fn to_matrix<T: Scalar>(&self) -> ExchangeMatrix<T> {
        let mut m = ExchangeMatrix::zero(self.vertices);
        for &(i, j, k) in &self.arrows {
            m.add(i, j, T::of(k as i64));
            m.add(j, i, -T::of(k as i64));
        }
        m
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|a| a.0 == a.1)
    }

    pub fn has_two_cycles(&self) -> bool {
        self.arrows.iter().any(|a| self.multiplicity(a.1, a.0) > 0)
    }

    /// Multiset of arrows with names substituted for vertex indices.
    pub fn named_arrows(&self, names: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &(i, j, k) in &self.arrows {
            for _ in 0..k {
                out.push((names[i], names[j]));
            }
        }
        out.sort_unstable();
        out
    }

    /// Graphviz rendering, multiplicity drawn as parallel edges.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut s = String::from("digraph quiver {\n");
        for (v, l) in labels.iter().enumerate().take(self.vertices) {
            s.push_str(&format!("  {v} [label=\"{l}\"];\n"));
        }
        for &(i, j, k) in &self.arrows {
            for _ in 0..k {
                s.push_str(&format!("  {i} -> {j};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}
