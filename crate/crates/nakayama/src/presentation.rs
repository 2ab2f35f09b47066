//! Multivariate integer polynomials in y, z, w1..w_{m-1} and the polynomial
//! presentation Z[y, z, w1..w_{m-1}] / (g_0, ..., g_m) of the Green ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::greenring::GreenRing;
use crate::hopf::AlgebraParams;

/// Exponent vector in the fixed variable order y < z < w1 < ... < w_{m-1}.
///
/// Monomials are compared lexicographically with the *largest* variable most
/// significant, so the ordering key reads the exponents from the back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// A polynomial over Z in the presentation variables; no zero coefficients
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        IntPoly::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = IntPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, idx, 1), BigInt::one());
        p
    }

    pub fn monomial(nvars: usize, exps: &[u32], coeff: i64) -> Self {
        let mut p = IntPoly::zero(nvars);
        if coeff != 0 {
            p.terms.insert(Monomial(exps.to_vec()), BigInt::from(coeff));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = IntPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut out = IntPoly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Leading term under the fixed order; `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Evaluate at integer arguments (one per variable).
    pub fn eval_i64(&self, args: &[i64]) -> BigInt {
        assert_eq!(args.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= BigInt::from(args[idx]);
                }
            }
            acc += term;
        }
        acc
    }
}

/// Printable names of the presentation variables for `m_exponent` = m.
pub fn variable_names(nvars: usize) -> Vec<String> {
    let mut names = vec!["y".to_string(), "z".to_string()];
    for l in 1..nvars.saturating_sub(1) {
        names.push(format!("w{l}"));
    }
    names
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = variable_names(self.nvars);
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.total_degree() == 0 {
                factors.push(mag.to_string());
            }
            for (idx, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[idx].clone()),
                    _ => factors.push(format!("{}^{}", names[idx], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// The Chebyshev-like sequence a_1 = a1, a_2 = a2, a_k = z a_{k-1} - y a_{k-2},
/// written g(k, a1, a2). Coefficients are exact integers.
pub fn chebyshev_g(nvars: usize, k: usize, a1: &IntPoly, a2: &IntPoly) -> Result<IntPoly> {
    if k == 0 {
        return Err(Error::RecurrenceIndexZero);
    }
    let y = IntPoly::var(nvars, 0);
    let z = IntPoly::var(nvars, 1);
    let mut prev = a1.clone();
    if k == 1 {
        return Ok(prev);
    }
    let mut cur = a2.clone();
    for _ in 3..=k {
        let next = z.mul(&cur).sub(&y.mul(&prev));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The polynomial presentation of r(KZ_n/J^d): generators g_0..g_m of the
/// defining ideal together with the monomial basis data.
#[derive(Debug, Clone)]
pub struct Presentation {
    params: AlgebraParams,
    generators: Vec<IntPoly>,
    /// Human-readable factored forms where the construction knows one
    /// (g_1 = (z - y - 1) g(p, 1, z)); expanded rendering otherwise.
    display_forms: Vec<String>,
}

impl Presentation {
    /// Wrap an arbitrary candidate generator list for verification.
    pub fn from_generators(params: AlgebraParams, generators: Vec<IntPoly>) -> Self {
        let display_forms = generators.iter().map(|g| g.to_string()).collect();
        Presentation {
            params,
            generators,
            display_forms,
        }
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    pub fn display_forms(&self) -> &[String] {
        &self.display_forms
    }

    pub fn nvars(&self) -> usize {
        self.params.m() as usize + 1
    }

    /// "Z[y,z,...]/(g0, g1, ...)" in the factored rendering.
    pub fn text(&self) -> String {
        let names = variable_names(self.nvars());
        format!("Z[{}]/({})", names.join(","), self.display_forms.join(", "))
    }
}

/// Builds the presentation: g_0 = y^n - 1, g_1 = (z - y - 1) g(p, 1, z), and
/// for each l in [1, m-1] the relation obtained from the product
/// [M(p^l+1, 0)] [M((p-1)p^l+1, 0)], whose decomposition starts at
/// [M(p^{l+1}, 0)], rewritten through the generator expressions.
pub fn build_presentation(ring: &GreenRing) -> Result<Presentation> {
    let params = *ring.params();
    let nvars = params.m() as usize + 1;
    let n = params.n();
    let p = params.p() as usize;

    let mut generators = Vec::new();
    let mut display_forms = Vec::new();

    // g_0 = y^n - 1
    let g0 =
        IntPoly::monomial(nvars, &Monomial::var(nvars, 0, n as u32).0, 1).sub(&IntPoly::one(nvars));
    display_forms.push(g0.to_string());
    generators.push(g0);

    // g_1 = (z - y - 1) g(p, 1, z)
    let y = IntPoly::var(nvars, 0);
    let z = IntPoly::var(nvars, 1);
    let lead = z.sub(&y).sub(&IntPoly::one(nvars));
    let gp = chebyshev_g(nvars, p, &IntPoly::one(nvars), &z)?;
    let g1 = lead.mul(&gp);
    display_forms.push(if p == 2 {
        format!("({})*z", lead)
    } else {
        format!("({})*({})", lead, gp)
    });
    generators.push(g1);

    // g_{l+1} = w_l f_{(p-1)p^l+1} - (expression of the full product)
    for l in 1..params.m() as usize {
        let pl = p.pow(l as u32);
        let w_l = IntPoly::var(nvars, 1 + l);
        let partner = (p - 1) * pl + 1;
        let f_partner = ring.express_at_zero(partner)?;
        let product = ring.class_product(
            crate::modcat::UniserialClass::new(pl + 1, 0),
            crate::modcat::UniserialClass::new(partner, 0),
        )?;
        let mut rhs = IntPoly::zero(nvars);
        for (class, mult) in &product {
            let f = ring.express_in_generators(*class)?;
            rhs = rhs.add(&f.scale(&BigInt::from(*mult)));
        }
        let g = w_l.mul(&f_partner).sub(&rhs);
        display_forms.push(g.to_string());
        generators.push(g);
    }

    Ok(Presentation {
        params,
        generators,
        display_forms,
    })
}

/// The monomial basis B = { y^i z^j w1^{l1} ... : i < n, j < p, l_k < p } of
/// the quotient ring; |B| = n d.
pub fn monomial_basis(pres: &Presentation) -> Vec<Monomial> {
    let nvars = pres.nvars();
    let n = pres.params.n() as u32;
    let p = pres.params.p() as u32;
    let mut bounds = vec![n];
    bounds.extend(std::iter::repeat_n(p, nvars - 1));
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    loop {
        out.push(Monomial(exps.clone()));
        let mut idx = 0;
        loop {
            if idx == nvars {
                return out;
            }
            exps[idx] += 1;
            if exps[idx] < bounds[idx] {
                break;
            }
            exps[idx] = 0;
            idx += 1;
        }
    }
}

/// Reduce `f` modulo the presentation ideal using only the leading terms
/// (they are the pure powers y^n, z^p, w_l^p, so division terminates with a
/// normal form supported on the monomial basis).
pub fn reduce_modulo(pres: &Presentation, f: &IntPoly) -> IntPoly {
    let mut acc = f.clone();
    'outer: loop {
        for g in &pres.generators {
            let (lt_m, lt_c) = g.leading_term().expect("generators are nonzero");
            assert!(lt_c.is_one(), "reduction needs monic leading terms");
            // find a monomial of acc divisible by lt(g)
            let target = acc
                .terms
                .iter()
                .rev()
                .find(|(m, _)| lt_m.divides(m))
                .map(|(m, c)| (m.clone(), c.clone()));
            if let Some((m, c)) = target {
                let quotient = IntPoly {
                    nvars: acc.nvars,
                    terms: BTreeMap::from([(m.div(lt_m), c)]),
                };
                acc = acc.sub(&quotient.mul(g));
                continue 'outer;
            }
        }
        return acc;
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

/// Verification report for a presentation.
#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "ok " } else { "FAIL" },
                c.name,
                c.details
            )?;
        }
        Ok(())
    }
}

/// Verifies a presentation against the ring it presents:
/// (a) every generator maps to zero under the evaluation map,
/// (b) the leading terms are y^n, z^p, w_1^p, ..., w_{m-1}^p,
/// (c) the monomial basis has exactly n d elements,
/// (d) products of sampled basis monomials reduce to normal forms inside the
///     basis span whose evaluation matches the ring product.
pub fn verify_presentation(ring: &GreenRing, pres: &Presentation) -> Result<Report> {
    let params = *pres.params();
    let mut checks = Vec::new();

    // (a) evaluation of generators
    for (idx, g) in pres.generators.iter().enumerate() {
        let image = ring.evaluate(g)?;
        let passed = image.is_zero();
        checks.push(Check {
            name: format!("phi(g{idx}) = 0"),
            passed,
            details: if passed {
                "maps to zero".into()
            } else {
                format!("maps to {image}")
            },
        });
    }

    // (b) leading terms
    let nvars = pres.nvars();
    let mut expected = vec![Monomial::var(nvars, 0, params.n() as u32)];
    for v in 1..nvars {
        expected.push(Monomial::var(nvars, v, params.p() as u32));
    }
    for (idx, (g, want)) in pres.generators.iter().zip(expected.iter()).enumerate() {
        let lt = g.leading_term();
        let passed = lt.is_some_and(|(m, c)| m == want && c.is_one());
        checks.push(Check {
            name: format!("lt(g{idx})"),
            passed,
            details: match lt {
                Some((m, c)) => format!("found {}*{:?}", c, m.0),
                None => "zero polynomial".into(),
            },
        });
    }

    // (c) basis count
    let basis = monomial_basis(pres);
    let want = params.n() * params.d();
    checks.push(Check {
        name: "|B| = nd".into(),
        passed: basis.len() == want,
        details: format!("{} monomials, expected {}", basis.len(), want),
    });

    // (d) multiplication closure on sampled basis pairs; only meaningful
    // when the leading terms came out right, so gate on the (b) checks
    let lt_ok = checks
        .iter()
        .filter(|c| c.name.starts_with("lt("))
        .all(|c| c.passed);
    let mut rng = crate::util::SplitMix64::new(0x9e5);
    let samples = if lt_ok {
        20.min(basis.len() * basis.len())
    } else {
        0
    };
    let mut closure_ok = lt_ok;
    let mut detail = if lt_ok {
        String::from("sampled products stay in span(B)")
    } else {
        String::from("skipped: leading terms already wrong")
    };
    for _ in 0..samples {
        let a = &basis[rng.below(basis.len() as u64) as usize];
        let b = &basis[rng.below(basis.len() as u64) as usize];
        let pa = IntPoly {
            nvars,
            terms: BTreeMap::from([(a.clone(), BigInt::one())]),
        };
        let pb = IntPoly {
            nvars,
            terms: BTreeMap::from([(b.clone(), BigInt::one())]),
        };
        let prod = pa.mul(&pb);
        let reduced = reduce_modulo(pres, &prod);
        let in_span = reduced.terms.keys().all(|m| basis.contains(m));
        let phi_prod = ring.multiply(&ring.evaluate(&pa)?, &ring.evaluate(&pb)?)?;
        let phi_reduced = ring.evaluate(&reduced)?;
        if !in_span || phi_prod != phi_reduced {
            closure_ok = false;
            detail = format!("failure at {:?} * {:?}", a.0, b.0);
            break;
        }
    }
    checks.push(Check {
        name: "multiplication closure".into(),
        passed: closure_ok,
        details: detail,
    });

    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_reads_largest_variable_first() {
        // y < z: z^2 beats y*z, which beats z, which beats y^5
        let z2 = Monomial(vec![0, 2]);
        let yz = Monomial(vec![1, 1]);
        let z = Monomial(vec![0, 1]);
        let y5 = Monomial(vec![5, 0]);
        assert!(z2 > yz);
        assert!(yz > z);
        assert!(z > y5);
    }

    #[test]
    fn chebyshev_initial_and_known_values() {
        let one = IntPoly::one(2);
        let z = IntPoly::var(2, 1);
        assert_eq!(chebyshev_g(2, 1, &one, &z).unwrap(), one);
        assert_eq!(chebyshev_g(2, 2, &one, &z).unwrap(), z);
        assert!(matches!(
            chebyshev_g(2, 0, &one, &z),
            Err(Error::RecurrenceIndexZero)
        ));

        // g(5,1,z) = z^4 - 3 y z^2 + y^2
        let g5 = chebyshev_g(2, 5, &one, &z).unwrap();
        let expect = IntPoly::monomial(2, &[0, 4], 1)
            .add(&IntPoly::monomial(2, &[1, 2], -3))
            .add(&IntPoly::monomial(2, &[2, 0], 1));
        assert_eq!(g5, expect);

        // g(7,1,z) = z^6 - 5 y z^4 + 6 y^2 z^2 - y^3
        let g7 = chebyshev_g(2, 7, &one, &z).unwrap();
        let expect = IntPoly::monomial(2, &[0, 6], 1)
            .add(&IntPoly::monomial(2, &[1, 4], -5))
            .add(&IntPoly::monomial(2, &[2, 2], 6))
            .add(&IntPoly::monomial(2, &[3, 0], -1));
        assert_eq!(g7, expect);
    }

    #[test]
    fn chebyshev_dimension_character() {
        // substituting y = 1, z = 2 turns g(t, 1, z) into the dimension t
        let one = IntPoly::one(2);
        let z = IntPoly::var(2, 1);
        for t in 1..=12 {
            let g = chebyshev_g(2, t, &one, &z).unwrap();
            assert_eq!(g.eval_i64(&[1, 2]), BigInt::from(t));
        }
    }

    #[test]
    fn injected_fault_is_reported() {
        use crate::greenring::GreenRing;
        let ring = GreenRing::new(AlgebraParams::new(10, 2, 1).unwrap());
        let pres = build_presentation(&ring).unwrap();
        let report = verify_presentation(&ring, &pres).unwrap();
        assert!(report.passed());

        // replace g0 by y^{n+1} - 1: the evaluation check must fail
        let mut gens = pres.generators().to_vec();
        gens[0] = IntPoly::monomial(2, &[11, 0], 1).sub(&IntPoly::one(2));
        let tampered = Presentation::from_generators(*pres.params(), gens);
        let report = verify_presentation(&ring, &tampered).unwrap();
        assert!(!report.passed());
        let phi_g0 = report
            .checks
            .iter()
            .find(|c| c.name == "phi(g0) = 0")
            .unwrap();
        assert!(!phi_g0.passed);
    }

    #[test]
    fn display_format() {
        let one = IntPoly::one(2);
        let z = IntPoly::var(2, 1);
        let g7 = chebyshev_g(2, 7, &one, &z).unwrap();
        assert_eq!(g7.to_string(), "z^6-5*y*z^4+6*y^2*z^2-y^3");
        let y10 = IntPoly::monomial(2, &[10, 0], 1).sub(&IntPoly::one(2));
        assert_eq!(y10.to_string(), "y^10-1");
    }
}
