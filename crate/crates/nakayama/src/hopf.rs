//! The algebra A = KZ_n/J^d, its Hopf-validity criterion, and the
//! comultiplication data that drives every tensor product downstream.

use crate::error::{Error, Result};
use crate::linalg::{is_prime, PrimeField};
use crate::util::binomial_mod_p;

/// Parameters of the fixed algebra KZ_n/J^d with d = p^m <= n over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlgebraParams {
    n: usize,
    p: u64,
    m: u32,
    d: usize,
}

impl AlgebraParams {
    /// Validates the Hopf condition before handing out parameters.
    pub fn new(n: usize, p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::TruncationTooSmall { d: 1 });
        }
        let d = (p as usize)
            .checked_pow(m)
            .ok_or(Error::TruncationTooSmall { d: 0 })?;
        validate_hopf(n as u64, d as u64, p)?;
        Ok(AlgebraParams { n, p, m, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    /// Vertex index reduced to [0, n).
    pub fn vertex(&self, k: i64) -> usize {
        let n = self.n as i64;
        (((k % n) + n) % n) as usize
    }
}

/// Decides whether KZ_n/J^d carries the Hopf structure: true exactly when
/// d is a power of p and d <= n. On failure the error names the first
/// binomial coefficient C(d, i) that is nonzero mod p, or the size bound.
pub fn validate_hopf(n: u64, d: u64, p: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::TruncationTooSmall { d });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    if n < 1 || d > n {
        return Err(Error::HopfSizeExceeded { d, n });
    }
    for i in 1..d {
        let residue = binomial_mod_p(d, i, p);
        if residue != 0 {
            return Err(Error::HopfBinomialObstruction { d, i, residue });
        }
    }
    Ok(())
}

/// A basis element of the path algebra surviving in KZ_n/J^d that the
/// comultiplication acts on: a vertex idempotent or an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisTag {
    Vertex(usize),
    Arrow(usize),
}

impl BasisTag {
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let body = s.trim();
        if body.len() < 2 || !body.is_char_boundary(1) {
            return Err(Error::UnknownTag(s.to_string()));
        }
        let (kind, idx) = body.split_at(1);
        let k: usize = idx.parse().map_err(|_| Error::UnknownTag(s.to_string()))?;
        if k >= n {
            return Err(Error::UnknownTag(s.to_string()));
        }
        match kind {
            "v" => Ok(BasisTag::Vertex(k)),
            "a" => Ok(BasisTag::Arrow(k)),
            _ => Err(Error::UnknownTag(s.to_string())),
        }
    }
}

impl std::fmt::Display for BasisTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisTag::Vertex(k) => write!(f, "v{k}"),
            BasisTag::Arrow(k) => write!(f, "a{k}"),
        }
    }
}

/// Support of the comultiplication on a basis element of the cycle with `n`
/// vertices: `Delta(v_k) = sum v_{g1} (x) v_{g2}` over `g1 + g2 = k`, and
/// `Delta(a_k) = sum (a_{g1} (x) v_{g2} + v_{g1} (x) a_{g2})`.
pub fn comultiplication_support(n: usize, tag: BasisTag) -> Vec<(BasisTag, BasisTag)> {
    let reduce = |k: i64| (((k % n as i64) + n as i64) % n as i64) as usize;
    let mut out = Vec::new();
    match tag {
        BasisTag::Vertex(k) => {
            for g1 in 0..n {
                let g2 = reduce(k as i64 - g1 as i64);
                out.push((BasisTag::Vertex(g1), BasisTag::Vertex(g2)));
            }
        }
        BasisTag::Arrow(k) => {
            for g1 in 0..n {
                let g2 = reduce(k as i64 - g1 as i64);
                out.push((BasisTag::Arrow(g1), BasisTag::Vertex(g2)));
            }
            for g1 in 0..n {
                let g2 = reduce(k as i64 - g1 as i64);
                out.push((BasisTag::Vertex(g1), BasisTag::Arrow(g2)));
            }
        }
    }
    out
}

/// Counit: 1 on v_0, 0 on every other vertex and on all arrows.
/// Exposed for completeness; no computation in this crate consumes it.
pub fn counit(tag: BasisTag) -> u64 {
    match tag {
        BasisTag::Vertex(0) => 1,
        _ => 0,
    }
}

/// Antipode on basis elements: S(v_h) = v_{-h} and S(a_h) = -a_{-h-1}.
/// Returned as (sign, tag) with sign in {+1, -1}. Exposed for completeness.
pub fn antipode(params: &AlgebraParams, tag: BasisTag) -> (i8, BasisTag) {
    match tag {
        BasisTag::Vertex(h) => (1, BasisTag::Vertex(params.vertex(-(h as i64)))),
        BasisTag::Arrow(h) => (-1, BasisTag::Arrow(params.vertex(-(h as i64) - 1))),
    }
}
