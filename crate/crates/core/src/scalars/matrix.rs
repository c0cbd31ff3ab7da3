use std::fmt;

use super::poly::Poly;
use super::{Rational, RatFunc, ScalarError};

/// Dense row-major matrix over Q(v).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Entrywise specialization v -> at.
    pub fn evaluate(&self, at: &Rational) -> Result<Matrix, ScalarError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.specialize(at))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Fraction-free row echelon form over Q[v]. Returns the echelon rows and pivot columns.
    fn echelon(&self) -> (Vec<Vec<Poly>>, Vec<usize>) {
        let mut a: Vec<Vec<Poly>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut l = Poly::one();
                for e in row {
                    if !e.denom().is_one() {
                        let g = l.gcd(e.denom());
                        l = &l * &e.denom().div_exact(&g);
                    }
                }
                row.iter()
                    .map(|e| if e.is_zero() { Poly::zero() } else { &e.numer().clone() * &l.div_exact(e.denom()) })
                    .collect()
            })
            .filter(|r: &Vec<Poly>| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut prev = Poly::one();
        let mut k = 0;
        for c in 0..self.cols {
            if k == a.len() {
                break;
            }
            let Some(p) = (k..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(k, p);
            let (head, tail) = a.split_at_mut(k + 1);
            let piv_row = &head[k];
            for row in tail.iter_mut() {
                for j in c + 1..self.cols {
                    let t = &(&piv_row[c] * &row[j]) - &(&row[c] * &piv_row[j]);
                    row[j] = if prev.is_one() { t } else { t.div_exact(&prev) };
                }
                row[c] = Poly::zero();
            }
            // rows of zeros in the untouched columns before c stay zero
            prev = a[k][c].clone();
            pivots.push(c);
            k += 1;
        }
        a.truncate(k);
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space in reduced form: each vector has a 1 in its own free
    /// column and 0 in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<RatFunc>> {
        let (ech, pivots) = self.echelon();
        let mut r: Vec<Vec<RatFunc>> = ech
            .into_iter()
            .map(|row| row.into_iter().map(RatFunc::from_poly).collect())
            .collect();
        // back substitution to reduced echelon form
        for i in (0..r.len()).rev() {
            let pc = pivots[i];
            let inv = r[i][pc].inv().expect("zero pivot");
            for j in pc..self.cols {
                if !r[i][j].is_zero() {
                    r[i][j] = &r[i][j] * &inv;
                }
            }
            for up in 0..i {
                let f = r[up][pc].clone();
                if f.is_zero() {
                    continue;
                }
                for j in pc..self.cols {
                    if !r[i][j].is_zero() {
                        let t = &f * &r[i][j];
                        r[up][j] = &r[up][j] - &t;
                    }
                }
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![RatFunc::zero(); self.cols];
            v[free] = RatFunc::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[i][free];
            }
            basis.push(v);
        }
        basis
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|e| e.to_text()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: i64) -> RatFunc {
        RatFunc::from_int(n)
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(Matrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn symmetric_row() {
        let m = Matrix::from_rows(vec![vec![RatFunc::nu(), RatFunc::nu()]]);
        // normalized on the free column, so the span of (1, -1) shows up as (-1, 1)
        assert_eq!(m.kernel_basis(), vec![vec![rf(-1), rf(1)]]);
    }

    #[test]
    fn zero_columns_are_free() {
        let m = Matrix::from_rows(vec![vec![rf(0), rf(1), rf(2)], vec![rf(0), rf(2), rf(4)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(m.rank(), 1);
    }
}
