//! Dense exact linear algebra over `Q(q)`.

use crate::qfield::{Poly, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalFunction>,
}

/// Row-reduced echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![RationalFunction::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RationalFunction::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RationalFunction {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RationalFunction) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RationalFunction] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = RationalFunction::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form; the pivot of each row is its first nonzero
    /// column, scanning columns left to right.
    ///
    /// Rows are cleared to `Z[q]` and reduced fraction-free (Bareiss
    /// Gauss-Jordan: every update divides exactly by the previous pivot), so
    /// only the final entries are normalized as fractions.
    pub fn rref(&self) -> Echelon {
        let mut a: Vec<Vec<Poly>> = (0..self.rows).map(|r| clear_denominators(self.row(r))).collect();
        let mut pivots = Vec::new();
        let mut prev = Poly::one();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(lead, p);
            let piv = a[lead][c].clone();
            let pivot_row = a[lead].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == lead {
                    continue;
                }
                let factor = row[c].clone();
                for k in 0..self.cols {
                    let mut x = &piv * &row[k];
                    if !factor.is_zero() && !pivot_row[k].is_zero() {
                        x = &x - &(&factor * &pivot_row[k]);
                    }
                    row[k] = if x.is_zero() { x } else { x.div_exact(&prev).expect("Bareiss division is exact") };
                }
            }
            prev = piv;
            pivots.push(c);
            lead += 1;
        }
        let mut m = Matrix::zeros(lead, self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            let d = &a[r][pc];
            for (k, x) in a[r].iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, k, RationalFunction::from_polys(x.clone(), d.clone()).expect("nonzero pivot"));
                }
            }
        }
        Echelon { matrix: m, pivots }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Indices of a maximal linearly independent set of rows, chosen greedily
    /// from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        let t = self.transpose();
        t.rref().pivots
    }

    /// Basis of `{v : self v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<RationalFunction>> {
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![RationalFunction::zero(); self.cols];
                v[f] = RationalFunction::one();
                for (r, &p) in e.pivots.iter().enumerate() {
                    v[p] = -e.matrix.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, RationalFunction::one());
        }
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, e.matrix.get(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

/// A row of `Q(q)` scaled by the lcm of its denominators into `Z[q]`.
fn clear_denominators(row: &[RationalFunction]) -> Vec<Poly> {
    let mut lcm = Poly::one();
    for x in row.iter().filter(|x| !x.is_zero()) {
        let d = x.denominator();
        if d.is_one() {
            continue;
        }
        let g = lcm.gcd(&d);
        lcm = &lcm * &d.div_exact(&g).expect("gcd divides");
    }
    row.iter()
        .map(|x| if x.is_zero() { Poly::zero() } else { &x.numerator() * &lcm.div_exact(&x.denominator()).expect("lcm is a multiple") })
        .collect()
}
