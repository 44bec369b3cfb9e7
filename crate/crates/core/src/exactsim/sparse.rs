//! Compressed sparse row matrices with complex entries.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator<T> {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex<T>>,
}

impl<T: Real> SparseOperator<T> {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex<T>)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.max(c) + 1,
            });
        }
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex<T>> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                let slot = vals.last_mut().unwrap();
                *slot = *slot + v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex<T>)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// `out = A x`.
    pub fn apply_into(&self, x: &[Complex<T>], out: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.dim);
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc = acc + self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim];
        self.apply_into(x, &mut out);
        out
    }

    /// `⟨x|A|x⟩`.
    pub fn expectation(&self, x: &[Complex<T>]) -> Complex<T> {
        let ax = self.apply(x);
        x.iter()
            .zip(&ax)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |s, v| s + v)
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.row(r)
            .find(|&(cc, _)| cc == c)
            .map(|(_, v)| v)
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                worst = worst.max((v - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Gershgorin enclosure `[lo, hi]` of the real parts of the spectrum.
    pub fn gershgorin_bounds(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for r in 0..self.dim {
            let mut centre = T::zero();
            let mut radius = T::zero();
            for (c, v) in self.row(r) {
                if c == r {
                    centre = v.re;
                } else {
                    radius = radius + v.norm();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        if self.dim == 0 {
            (T::zero(), T::zero())
        } else {
            (lo, hi)
        }
    }

    /// Frobenius norm of `[A, D]` for a diagonal `D`.
    pub fn commutator_with_diagonal(&self, diag: &[T]) -> T {
        let mut acc = T::zero();
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                let e = v.norm() * (diag[c] - diag[r]).abs();
                acc = acc + e * e;
            }
        }
        acc.sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(c, v)| c == r || v.norm() == T::zero()))
    }
}
