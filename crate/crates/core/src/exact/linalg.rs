//! Small dense exact linear algebra: 2×2 matrices, linear solves and the
//! inertia of symmetric forms.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix2 {
    #[serde(with = "super::rational::serde_rational::vec")]
    entries: Vec<Rational>,
}

impl Matrix2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self {
            entries: vec![a, b, c, d],
        }
    }

    pub fn zero() -> Self {
        Self::new(
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    /// Entry at `(row, col)`, both in `0..2`.
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[2 * row + col]
    }

    pub fn trace(&self) -> Rational {
        self.get(0, 0) + self.get(1, 1)
    }

    pub fn det(&self) -> Rational {
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// A 2×2 matrix is nilpotent iff its trace and determinant vanish.
    pub fn is_nilpotent(&self) -> bool {
        self.trace().is_zero() && self.det().is_zero()
    }

    /// Scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.get(0, 1).is_zero() && self.get(1, 0).is_zero() && self.get(0, 0) == self.get(1, 1)
    }
}

/// Dense rational matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return Err(Error::InvalidInput("solve needs a square system".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::InvalidInput("singular linear system".into()))?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                }
                b.swap(pivot, col);
            }
            let inv = Rational::one() / a.get(col, col);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) * &inv;
                for c in col..n {
                    let v = a.get(r, c) - &factor * a.get(col, c);
                    a.set(r, c, v);
                }
                let v = &b[r] - &factor * &b[col];
                b[r] = v;
            }
        }
        Ok((0..n).map(|i| &b[i] / a.get(i, i)).collect())
    }

    /// `(positive, negative, zero)` counts of a symmetric matrix, by
    /// congruence diagonalization.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            // bring a nonzero diagonal entry to (k, k)
            let diag = (k..n).find(|&i| !a.get(i, i).is_zero());
            match diag {
                Some(i) => a.swap_sym(i, k),
                None => {
                    let off = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a.get(i, j).is_zero());
                    match off {
                        // row/col j += row/col i makes (j, j) = 2 a_ij != 0
                        Some((i, j)) => {
                            a.add_sym(j, i, &Rational::one());
                            a.swap_sym(j, k);
                        }
                        None => break,
                    }
                }
            }
            let pivot = a.get(k, k).clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for r in k + 1..n {
                if a.get(r, k).is_zero() {
                    continue;
                }
                let factor = -(a.get(r, k) / &pivot);
                a.add_sym(r, k, &factor);
            }
            k += 1;
        }
        (pos, neg, n - pos - neg)
    }

    fn swap_sym(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.cols;
        for c in 0..n {
            self.data.swap(i * n + c, j * n + c);
        }
        for r in 0..n {
            self.data.swap(r * n + i, r * n + j);
        }
    }

    /// row_dst += f row_src, then col_dst += f col_src.
    fn add_sym(&mut self, dst: usize, src: usize, f: &Rational) {
        let n = self.cols;
        for c in 0..n {
            let v = self.get(dst, c) + f * self.get(src, c);
            self.set(dst, c, v);
        }
        for r in 0..n {
            let v = self.get(r, dst) + f * self.get(r, src);
            self.set(r, dst, v);
        }
    }
}
