//! Exact dense linear algebra over the prime field F_p.
//!
//! Everything downstream (tensor decompositions, homology, homotopy
//! reductions) reduces to ranks, kernels and tracked row/column operations
//! of small dense matrices, so this module keeps the representation as
//! plain as possible: a row-major `Vec<u64>` of reduced residues.

use crate::error::{Error, Result};

/// The prime field F_p. Elements are `u64` residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (((v % p) + p) % p) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(
            !a.is_multiple_of(self.p),
            "division by zero in F_{}",
            self.p
        );
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// A dense matrix over F_p, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Matrix::zero(field, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of signed integers (reduced mod p).
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.reduce_i64(v));
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::ShapeMismatch);
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(Error::ShapeMismatch);
        }
        let f = self.field;
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = f.add(*a, b);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = self.field;
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = f.mul(*a, c);
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Copy of the given column as a `rows x 1` matrix.
    pub fn column(&self, j: usize) -> Matrix {
        let mut out = Matrix::zero(self.field, self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j));
        }
        out
    }

    /// Row-reduce in place to reduced row echelon form; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    let tmp = self.get(row, j);
                    let v = self.get(pr, j);
                    self.set(row, j, v);
                    self.set(pr, j, tmp);
                }
            }
            let inv = f.inv(self.get(row, col));
            for j in 0..self.cols {
                let v = f.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// F_p-rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// A matrix whose columns form a basis of `ker(self)`.
    ///
    /// The column count is always `cols - rank`.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(m.get(r, fc)));
            }
        }
        out
    }

    /// Smith-like reduction with tracked base change: returns `(r, p, q)` with
    /// `p * self * q = r`, where `r` is an identity block followed by zeros
    /// and `p`, `q` are invertible.
    pub fn reduce_with_transform(&self) -> (Matrix, Matrix, Matrix) {
        let f = self.field;
        let mut r = self.clone();
        let mut p = Matrix::identity(f, self.rows);
        let mut q = Matrix::identity(f, self.cols);
        let mut done = 0usize;
        loop {
            // find a pivot entry in the untouched block
            let mut pivot = None;
            'outer: for i in done..self.rows {
                for j in done..self.cols {
                    if r.get(i, j) != 0 {
                        pivot = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            r.swap_rows(done, pi);
            p.swap_rows(done, pi);
            r.swap_cols(done, pj);
            q.swap_cols(done, pj);
            let inv = f.inv(r.get(done, done));
            r.scale_row(done, inv);
            p.scale_row(done, inv);
            for i in 0..self.rows {
                if i == done {
                    continue;
                }
                let c = r.get(i, done);
                if c != 0 {
                    r.add_scaled_row(i, done, f.neg(c));
                    p.add_scaled_row(i, done, f.neg(c));
                }
            }
            for j in 0..self.cols {
                if j == done {
                    continue;
                }
                let c = r.get(done, j);
                if c != 0 {
                    r.add_scaled_col(j, done, f.neg(c));
                    q.add_scaled_col(j, done, f.neg(c));
                }
            }
            done += 1;
        }
        (r, p, q)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let tmp = self.get(a, j);
            let v = self.get(b, j);
            self.set(a, j, v);
            self.set(b, j, tmp);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let tmp = self.get(i, a);
            let v = self.get(i, b);
            self.set(i, a, v);
            self.set(i, b, tmp);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(r, j), c);
            self.set(r, j, v);
        }
    }

    /// row[target] += c * row[source]
    fn add_scaled_row(&mut self, target: usize, source: usize, c: u64) {
        for j in 0..self.cols {
            let v = self
                .field
                .add(self.get(target, j), self.field.mul(c, self.get(source, j)));
            self.set(target, j, v);
        }
    }

    /// col[target] += c * col[source]
    fn add_scaled_col(&mut self, target: usize, source: usize, c: u64) {
        for i in 0..self.rows {
            let v = self
                .field
                .add(self.get(i, target), self.field.mul(c, self.get(i, source)));
            self.set(i, target, v);
        }
    }

    /// Solve `self * x = b` for all columns of `b`; `None` if inconsistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let mut aug = self.hcat(b).expect("hcat");
        let pivots = aug.rref_in_place();
        // inconsistent if a pivot falls in the b-block
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, aug.get(r, self.cols + j));
            }
        }
        // check residual exactly (free variables set to zero)
        let prod = self.mul(&x).expect("mul");
        if &prod == b {
            Some(x)
        } else {
            None
        }
    }

    /// Indices of a maximal set of linearly independent columns, scanned left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.rref_in_place()
    }

    /// Inverse of an invertible square matrix; panics otherwise.
    pub fn inverse(&self) -> Matrix {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let id = Matrix::identity(self.field, self.rows);
        let mut aug = self.hcat(&id).expect("hcat");
        let pivots = aug.rref_in_place();
        assert_eq!(pivots.len(), self.rows, "matrix is singular");
        let mut out = Matrix::zero(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, aug.get(i, self.cols + j));
            }
        }
        out
    }

    /// Standard-basis columns extending the (independent) columns of `basis`
    /// to a basis of the full space. Returns `[basis | completion]`.
    pub fn extend_to_basis(&self) -> Matrix {
        let f = self.field;
        let dim = self.rows;
        let mut chosen = self.clone();
        let mut rank = chosen.rank();
        assert_eq!(rank, self.cols, "extend_to_basis: columns not independent");
        for k in 0..dim {
            if rank == dim {
                break;
            }
            let mut e = Matrix::zero(f, dim, 1);
            e.set(k, 0, 1);
            let candidate = chosen.hcat(&e).expect("hcat");
            if candidate.rank() > rank {
                chosen = candidate;
                rank += 1;
            }
        }
        chosen
    }
}
