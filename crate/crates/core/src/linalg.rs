//! Dense exact linear algebra over the rationals.
//!
//! Rows are scaled to integers, then forward elimination runs fraction-free
//! (Bareiss: cross-multiply and divide by the previous pivot, which is always
//! exact), with the pivot chosen by smallest absolute numerator to keep the
//! integers short. Back substitution produces the reduced echelon form that
//! kernel and solve read off. Everything is exact; there is no tolerance
//! anywhere.

use crate::rational::{numer_abs, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend(row);
        }
        RationalMatrix { rows: nrows, cols: ncols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn rank(&self) -> usize {
        self.clone().forward_eliminate().len()
    }

    /// Basis of the right kernel `{v : Mv = 0}`, each vector scaled so its
    /// first nonzero coordinate is 1. The basis has `cols - rank` vectors.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut work = self.clone();
        let pivots = work.forward_eliminate();
        work.back_substitute(&pivots);
        let pivot_set: Vec<usize> = pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -work.get(row, free).clone();
            }
            normalize_leading(&mut v);
            basis.push(v);
        }
        basis
    }

    /// One solution of `Mx = rhs` (free coordinates zero), or `None` when the
    /// system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let mut work = RationalMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                work.set(i, j, self.get(i, j).clone());
            }
            work.set(i, self.cols, rhs[i].clone());
        }
        let pivots = work.forward_eliminate();
        if pivots.contains(&self.cols) {
            return None;
        }
        work.back_substitute(&pivots);
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = work.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Scales every row to integers, then runs fraction-free row elimination.
    /// Returns the pivot columns; afterwards the matrix is in row echelon
    /// form with integer entries.
    fn forward_eliminate(&mut self) -> Vec<usize> {
        for i in 0..self.rows {
            self.scale_row_to_integers(i);
        }
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pivot_row = (r..self.rows)
                .filter(|&i| !self.get(i, c).is_zero())
                .min_by_key(|&i| numer_abs(self.get(i, c)));
            let Some(p) = pivot_row else { continue };
            self.swap_rows(r, p);
            let pivot = self.get(r, c).numer().clone();
            for i in r + 1..self.rows {
                let factor = self.get(i, c).numer().clone();
                for j in c + 1..self.cols {
                    let num = self.get(r, c).numer() * self.get(i, j).numer()
                        - &factor * self.get(r, j).numer();
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "fraction-free step must divide exactly");
                    self.set(i, j, Rational::from_integer(q));
                }
                self.set(i, c, Rational::zero());
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduces an echelon matrix to reduced row echelon form.
    fn back_substitute(&mut self, pivots: &[usize]) {
        for row in (0..pivots.len()).rev() {
            let pc = pivots[row];
            let inv = {
                let p = self.get(row, pc);
                debug_assert!(!p.is_zero());
                Rational::one() / p
            };
            for j in pc..self.cols {
                let scaled = self.get(row, j) * &inv;
                self.set(row, j, scaled);
            }
            for above in 0..row {
                let factor = self.get(above, pc).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in pc..self.cols {
                    let updated = self.get(above, j) - &(self.get(row, j) * &factor);
                    self.set(above, j, updated);
                }
            }
        }
    }

    fn scale_row_to_integers(&mut self, row: usize) {
        let mut lcm = BigInt::one();
        for j in 0..self.cols {
            lcm = lcm.lcm(self.get(row, j).denom());
        }
        if lcm.is_one() {
            return;
        }
        let factor = Rational::from_integer(lcm);
        for j in 0..self.cols {
            let scaled = self.get(row, j) * &factor;
            self.set(row, j, scaled);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Scale a vector so its first nonzero coordinate is 1.
pub fn normalize_leading(v: &mut [Rational]) {
    if let Some(first) = v.iter().position(|c| !c.is_zero()) {
        let inv = Rational::one() / &v[first];
        for c in v.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

/// Incrementally maintained row space for rank and span-completion queries.
/// Rows are kept in echelon form with unit leading coefficients.
#[derive(Debug, Clone)]
pub struct RowSpace {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span; if a nonzero residue remains it joins
    /// the basis and the call returns true.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        for row in &self.rows {
            let pivot = row.iter().position(|c| !c.is_zero()).unwrap();
            let factor = v[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a = &*a - &(b * &factor);
            }
        }
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        normalize_leading(&mut v);
        let at = self
            .rows
            .partition_point(|row| row.iter().position(|c| !c.is_zero()).unwrap() < pivot);
        self.rows.insert(at, v);
        true
    }

    /// True when `v` already lies in the span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut probe = self.clone();
        !probe.insert(v.to_vec())
    }
}
