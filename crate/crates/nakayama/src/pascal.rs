//! Pascal-triangle construction of indecomposable submodules
//! M(i, i', l, {u_0..u_l}) of M(i, 0) (x) M(i', 0).
//!
//! The triangle is filled row by row from the seed row; the entry at row r,
//! column c is the coefficient of the basis tensor v^{(r-c)/2} (x) v^{(r+c)/2},
//! and it is killed as soon as either factor exponent leaves its module
//! (left exponent >= i or right exponent >= i'). Entries live in F_p.

use crate::error::{Error, Result};
use crate::hopf::AlgebraParams;
use crate::linalg::Matrix;
use crate::modcat::{make_uniserial, tensor, tensor_layout, QuiverRep, UniserialClass};

/// Seed data (i, i', l, U): factor lengths, starting row, and the
/// coefficients u_0..u_l placed on row l (taken mod p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PascalSeed {
    pub i: usize,
    pub i_prime: usize,
    pub l: usize,
    pub coeffs: Vec<i64>,
}

impl PascalSeed {
    pub fn new(i: usize, i_prime: usize, l: usize, coeffs: Vec<i64>) -> Self {
        PascalSeed {
            i,
            i_prime,
            l,
            coeffs,
        }
    }

    fn validate(&self, params: &AlgebraParams) -> Result<()> {
        let d = params.d();
        if self.i < 1 || self.i > d || self.i_prime < 1 || self.i_prime > d {
            return Err(Error::SeedInvariant(format!(
                "factor lengths ({}, {}) must lie in [1, {d}]",
                self.i, self.i_prime
            )));
        }
        if self.l > self.i.min(self.i_prime) {
            return Err(Error::SeedInvariant(format!(
                "starting row l = {} exceeds min(i, i') = {}",
                self.l,
                self.i.min(self.i_prime)
            )));
        }
        if self.l >= d {
            return Err(Error::SeedInvariant(format!(
                "starting row l = {} must be below d = {d}",
                self.l
            )));
        }
        if self.coeffs.len() != self.l + 1 {
            return Err(Error::SeedInvariant(format!(
                "need {} coefficients for row l = {}, got {}",
                self.l + 1,
                self.l,
                self.coeffs.len()
            )));
        }
        Ok(())
    }
}

/// The filled triangle: `rows[k]` holds row `l + k`, whose entry at index t
/// sits in column c = -(l+k) + 2t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PascalTriangle {
    pub seed: PascalSeed,
    pub start_row: usize,
    pub rows: Vec<Vec<u64>>,
}

impl PascalTriangle {
    /// Entry at (row r, column c); zero outside the stored region.
    pub fn entry(&self, r: usize, c: i64) -> u64 {
        if r < self.start_row {
            return 0;
        }
        let k = r - self.start_row;
        let Some(row) = self.rows.get(k) else {
            return 0;
        };
        let idx2 = c + r as i64;
        if idx2 < 0 || idx2 % 2 != 0 {
            return 0;
        }
        let idx = (idx2 / 2) as usize;
        row.get(idx).copied().unwrap_or(0)
    }

    /// Coefficient c(a, b) of the basis tensor v^a (x) v^b, stored at
    /// position (a + b, b - a).
    pub fn coefficient(&self, a: usize, b: usize) -> u64 {
        self.entry(a + b, b as i64 - a as i64)
    }

    /// Rows rendered as a centered text grid.
    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            + 1;
        let last = self.start_row + self.rows.len().saturating_sub(1);
        let mut out = String::new();
        for (k, row) in self.rows.iter().enumerate() {
            let r = self.start_row + k;
            let indent = (last - r) * width / 2;
            out.push_str(&" ".repeat(indent));
            let cells: Vec<String> = row
                .iter()
                .map(|v| format!("{v:>w$}", w = width - 1))
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Fill the triangle from a seed: row l carries U mod p, every later row
/// follows the Pascal rule, and an entry is zeroed whenever its basis tensor
/// vanishes in M(i, 0) (x) M(i', 0). Rows stop at the first all-zero row or
/// at row i + i' - 2, whichever comes first.
pub fn build_triangle(params: &AlgebraParams, seed: &PascalSeed) -> Result<PascalTriangle> {
    seed.validate(params)?;
    let f = params.field();
    let (i, ip, l) = (seed.i, seed.i_prime, seed.l);
    let kill = |r: usize, t: usize, v: u64| -> u64 {
        // index t means column c = -r + 2t: left exponent r - t, right exponent t
        let left = r - t;
        let right = t;
        if left >= i || right >= ip {
            0
        } else {
            v
        }
    };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let first: Vec<u64> = seed
        .coeffs
        .iter()
        .enumerate()
        .map(|(t, &u)| kill(l, t, f.reduce_i64(u)))
        .collect();
    rows.push(first);
    let last_row = i + ip - 2;
    for r in (l + 1)..=last_row {
        if rows.last().map(|row| row.iter().all(|&v| v == 0)) == Some(true) {
            break;
        }
        let prev = rows.last().expect("at least the seed row");
        let mut row = vec![0u64; r + 1];
        for (t, slot) in row.iter_mut().enumerate() {
            // parents: same column c = -r + 2t, i.e. previous-row indices t-1 and t
            let left_parent = if t >= 1 {
                prev.get(t - 1).copied().unwrap_or(0)
            } else {
                0
            };
            let right_parent = prev.get(t).copied().unwrap_or(0);
            *slot = kill(r, t, f.add(left_parent, right_parent));
        }
        rows.push(row);
    }
    while rows.last().map(|row| row.iter().all(|&v| v == 0)) == Some(true) {
        rows.pop();
    }
    if rows.is_empty() {
        rows.push(vec![0; l + 1]);
    }
    Ok(PascalTriangle {
        seed: seed.clone(),
        start_row: l,
        rows,
    })
}

/// A Pascal module realized inside the ambient tensor: the abstract
/// uniserial, its class, and the per-vertex embedding into
/// M(i, 0) (x) M(i', 0).
#[derive(Debug, Clone)]
pub struct RealizedModule {
    pub triangle: PascalTriangle,
    pub class: UniserialClass,
    pub module: QuiverRep,
    /// Per-vertex embedding matrices into the ambient tensor.
    pub embedding: Vec<Matrix>,
}

/// Realize the module generated by the seed row inside the ambient tensor
/// and verify that the embedding commutes with the arrow actions.
pub fn realize_module(params: &AlgebraParams, seed: &PascalSeed) -> Result<RealizedModule> {
    let triangle = build_triangle(params, seed)?;
    let nonzero_rows = triangle
        .rows
        .iter()
        .take_while(|row| row.iter().any(|&v| v != 0))
        .count();
    if nonzero_rows == 0 {
        return Err(Error::ZeroSeed);
    }
    // rows are consecutive once nonzero; anything after the first zero row is zero
    debug_assert!(triangle
        .rows
        .iter()
        .skip(nonzero_rows)
        .all(|row| row.iter().all(|&v| v == 0)));

    let n = params.n();
    let f = params.field();
    let class = UniserialClass::new(nonzero_rows, params.vertex(seed.l as i64));
    let module = make_uniserial(params, class)?;

    let x = make_uniserial(params, UniserialClass::new(seed.i, 0))?;
    let y = make_uniserial(params, UniserialClass::new(seed.i_prime, 0))?;
    let ambient = tensor(&x, &y)?;
    let layout = tensor_layout(&x, &y);

    // embedding: the basis vector of the module at row l + k maps to
    // sum_t entry(l+k, t) * (v^{l+k-t} (x) v^t)
    let mut embedding: Vec<Matrix> = (0..n)
        .map(|v| Matrix::zero(f, ambient.dims()[v], module.dims()[v]))
        .collect();
    for k in 0..nonzero_rows {
        let r = seed.l + k;
        let v = params.vertex(r as i64);
        let row = &triangle.rows[k];
        for (t, &coeff) in row.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            let (a, b) = (r - t, t); // v^a (x) v^b, a at vertex a mod n, b at vertex b mod n
            let l1 = params.vertex(a as i64);
            let l2 = params.vertex(b as i64);
            let block = layout.blocks[v]
                .iter()
                .find(|blk| blk.0 == l1 && blk.1 == l2)
                .ok_or_else(|| Error::Internal("triangle entry outside ambient tensor".into()))?;
            // both factors are uniserial with 0/1 dimensions: block is 1x1
            embedding[v].set(block.2, 0, coeff);
        }
    }

    // the embedding must commute with the arrow actions exactly
    for v in 0..n {
        let tgt = (v + 1) % n;
        let lhs = ambient.arrow(v as i64).mul(&embedding[v])?;
        let rhs = embedding[tgt].mul(module.arrow(v as i64))?;
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "embedding does not intertwine arrows at vertex {v}"
            )));
        }
    }

    Ok(RealizedModule {
        triangle,
        class,
        module,
        embedding,
    })
}
