//! The module category of KZ_n/J^d: quiver representations of the oriented
//! n-cycle over F_p with J^d = 0, the uniserial modules M(i, j), the Hopf
//! tensor product, and Krull-Schmidt decomposition.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hopf::AlgebraParams;
use crate::linalg::Matrix;

/// The isomorphism class of the uniserial module M(length, vertex):
/// the quotient of the projective at `vertex` by the `length`-th radical
/// power. `vertex` is always reduced to `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct UniserialClass {
    pub length: usize,
    pub vertex: usize,
}

impl UniserialClass {
    pub fn new(length: usize, vertex: usize) -> Self {
        UniserialClass { length, vertex }
    }
}

impl fmt::Display for UniserialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{})", self.length, self.vertex)
    }
}

/// A multiset of uniserial classes: the output of `decompose`.
pub type Decomposition = BTreeMap<UniserialClass, usize>;

/// Shift every class vertex by `shift` (mod n).
pub fn shift_decomposition(
    params: &AlgebraParams,
    dec: &Decomposition,
    shift: i64,
) -> Decomposition {
    dec.iter()
        .map(|(c, &mult)| {
            (
                UniserialClass::new(c.length, params.vertex(c.vertex as i64 + shift)),
                mult,
            )
        })
        .collect()
}

/// Total dimension of a decomposition (sum of lengths with multiplicity).
pub fn decomposition_dimension(dec: &Decomposition) -> usize {
    dec.iter().map(|(c, &m)| c.length * m).sum()
}

/// A finite-dimensional representation of the cyclic quiver Z_n over F_p:
/// a dimension per vertex and an arrow matrix per arrow, subject to J^d = 0.
///
/// `arrows[j]` is the matrix of the arrow from vertex j to vertex j+1,
/// with shape `dims[j+1] x dims[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    params: AlgebraParams,
    dims: Vec<usize>,
    arrows: Vec<Matrix>,
}

impl QuiverRep {
    pub fn new(params: AlgebraParams, dims: Vec<usize>, arrows: Vec<Matrix>) -> Result<Self> {
        let n = params.n();
        assert_eq!(dims.len(), n);
        assert_eq!(arrows.len(), n);
        for j in 0..n {
            let tgt = (j + 1) % n;
            if arrows[j].rows() != dims[tgt] || arrows[j].cols() != dims[j] {
                return Err(Error::ShapeMismatch);
            }
        }
        let rep = QuiverRep {
            params,
            dims,
            arrows,
        };
        if !rep.is_nilpotent() {
            return Err(Error::NilpotencyViolated);
        }
        Ok(rep)
    }

    pub fn zero(params: AlgebraParams) -> Self {
        let n = params.n();
        let f = params.field();
        QuiverRep {
            params,
            dims: vec![0; n],
            arrows: (0..n).map(|_| Matrix::zero(f, 0, 0)).collect(),
        }
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, vertex: i64) -> usize {
        self.dims[self.params.vertex(vertex)]
    }

    pub fn arrow(&self, j: i64) -> &Matrix {
        &self.arrows[self.params.vertex(j)]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Check that every composite of d consecutive arrows vanishes.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.params.n();
        for j in 0..n {
            if self.composite_ranks(j).last().copied().unwrap_or(0) != 0 {
                return false;
            }
        }
        true
    }

    /// Ranks r(j, t) of the composite of t consecutive arrows starting at
    /// vertex j, for t = 0..=d. r(j, 0) = dim at j.
    fn composite_ranks(&self, j: usize) -> Vec<usize> {
        let d = self.params.d();
        let f = self.params.field();
        let mut out = Vec::with_capacity(d + 1);
        out.push(self.dims[j]);
        let mut comp = Matrix::identity(f, self.dims[j]);
        for t in 1..=d {
            let a = self.arrow(j as i64 + t as i64 - 1);
            comp = a.mul(&comp).expect("arrow shapes line up");
            out.push(comp.rank());
        }
        out
    }

    /// The full rank function r(j, t) for j in [0, n), t in [0, d].
    pub fn rank_function(&self) -> Vec<Vec<usize>> {
        (0..self.params.n())
            .map(|j| self.composite_ranks(j))
            .collect()
    }

    /// Krull-Schmidt decomposition into uniserial classes.
    ///
    /// The multiplicity of M(l, j) is recovered from the rank function by
    /// inclusion-exclusion:
    ///   mult(l, j) = r(j, l-1) - r(j, l) - r(j-1, l) + r(j-1, l+1).
    pub fn decompose(&self) -> Result<Decomposition> {
        let n = self.params.n();
        let d = self.params.d();
        let r = self.rank_function();
        // rank_function already computes r(j, d); nilpotency means it is 0
        for row in &r {
            if row[d] != 0 {
                return Err(Error::NilpotencyViolated);
            }
        }
        let rank = |j: i64, t: i64| -> i64 {
            if t < 0 {
                return 0;
            }
            let t = t as usize;
            if t > d {
                return 0;
            }
            r[self.params.vertex(j)][t] as i64
        };
        let mut out = Decomposition::new();
        for j in 0..n as i64 {
            for l in 1..=d as i64 {
                let mult = rank(j, l - 1) - rank(j, l) - rank(j - 1, l) + rank(j - 1, l + 1);
                if mult < 0 {
                    return Err(Error::Internal(format!(
                        "negative multiplicity {mult} for M({l},{j})"
                    )));
                }
                if mult > 0 {
                    out.insert(UniserialClass::new(l as usize, j as usize), mult as usize);
                }
            }
        }
        if decomposition_dimension(&out) != self.total_dim() {
            return Err(Error::Internal(
                "decomposition does not account for the full dimension".into(),
            ));
        }
        Ok(out)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &QuiverRep) -> Result<QuiverRep> {
        if self.params != other.params {
            return Err(Error::ParamMismatch);
        }
        let n = self.params.n();
        let f = self.params.field();
        let mut dims = vec![0; n];
        let mut arrows = Vec::with_capacity(n);
        for j in 0..n {
            dims[j] = self.dims[j] + other.dims[j];
        }
        for j in 0..n {
            let tgt = (j + 1) % n;
            let mut a = Matrix::zero(f, dims[tgt], dims[j]);
            for r in 0..self.dims[tgt] {
                for c in 0..self.dims[j] {
                    a.set(r, c, self.arrows[j].get(r, c));
                }
            }
            for r in 0..other.dims[tgt] {
                for c in 0..other.dims[j] {
                    a.set(
                        self.dims[tgt] + r,
                        self.dims[j] + c,
                        other.arrows[j].get(r, c),
                    );
                }
            }
            arrows.push(a);
        }
        Ok(QuiverRep {
            params: self.params,
            dims,
            arrows,
        })
    }
}

/// Builds the uniserial module M(length, vertex): dimension 1 on the
/// `length` consecutive vertices starting at `vertex`, with each arrow
/// sending basis vector v^k to v^{k+1} and the last one to zero.
pub fn make_uniserial(params: &AlgebraParams, class: UniserialClass) -> Result<QuiverRep> {
    let d = params.d();
    if class.length < 1 || class.length > d {
        return Err(Error::LengthOutOfRange {
            length: class.length,
            d,
        });
    }
    let n = params.n();
    let f = params.field();
    let mut dims = vec![0usize; n];
    for k in 0..class.length {
        dims[params.vertex(class.vertex as i64 + k as i64)] += 1;
    }
    // length <= d <= n, so no vertex is hit twice and all dims are 0 or 1
    let mut arrows = Vec::with_capacity(n);
    for j in 0..n {
        let tgt = (j + 1) % n;
        let mut a = Matrix::zero(f, dims[tgt], dims[j]);
        // the arrow at vertex j acts as v^k -> v^{k+1} when j carries v^k
        // with k < length - 1
        if dims[j] == 1 {
            let k = params.vertex(j as i64 - class.vertex as i64);
            // k is the basis index at vertex j (unique since length <= n)
            if k + 1 < class.length && dims[tgt] == 1 {
                a.set(0, 0, 1);
            }
        }
        arrows.push(a);
    }
    QuiverRep::new(*params, dims, arrows)
}

/// One tensor block at a vertex: (l1, l2, offset, dim_x_l1, dim_y_l2).
pub(crate) type TensorBlock = (usize, usize, usize, usize, usize);

/// Index layout of a tensor product: for each vertex, the ordered list of
/// blocks (l1, l2) with l1 + l2 = vertex (mod n) and nonzero factors,
/// ordered lexicographically, plus offsets into the concatenated basis.
pub(crate) struct TensorLayout {
    pub blocks: Vec<Vec<TensorBlock>>,
    pub dims: Vec<usize>,
}

pub(crate) fn tensor_layout(x: &QuiverRep, y: &QuiverRep) -> TensorLayout {
    let params = x.params();
    let n = params.n();
    let mut blocks = Vec::with_capacity(n);
    let mut dims = vec![0usize; n];
    for v in 0..n {
        let mut list = Vec::new();
        let mut offset = 0usize;
        for l1 in 0..n {
            let l2 = params.vertex(v as i64 - l1 as i64);
            let (dx, dy) = (x.dims()[l1], y.dims()[l2]);
            if dx == 0 || dy == 0 {
                continue;
            }
            list.push((l1, l2, offset, dx, dy));
            offset += dx * dy;
        }
        dims[v] = offset;
        blocks.push(list);
    }
    TensorLayout { blocks, dims }
}

/// The Hopf tensor product X (x) Y: the component at vertex l is the direct
/// sum of X_{l1} (x) Y_{l2} over l1 + l2 = l, and the arrow at l acts on the
/// (l1, l2) block as A^X (x) id + id (x) A^Y.
pub fn tensor(x: &QuiverRep, y: &QuiverRep) -> Result<QuiverRep> {
    if x.params() != y.params() {
        return Err(Error::ParamMismatch);
    }
    let params = *x.params();
    let n = params.n();
    let f = params.field();
    let layout = tensor_layout(x, y);
    let mut arrows = Vec::with_capacity(n);
    for v in 0..n {
        let tgt = (v + 1) % n;
        let mut a = Matrix::zero(f, layout.dims[tgt], layout.dims[v]);
        for &(l1, l2, src_off, dx, dy) in &layout.blocks[v] {
            // component A^X_{l1} (x) id: block (l1, l2) -> (l1 + 1, l2)
            let ax = x.arrow(l1 as i64);
            if ax.rows() > 0 {
                if let Some(&(_, _, tgt_off, tdx, tdy)) = layout.blocks[tgt]
                    .iter()
                    .find(|b| b.0 == (l1 + 1) % n && b.1 == l2)
                {
                    debug_assert_eq!(tdy, dy);
                    for r in 0..tdx {
                        for c in 0..dx {
                            let coeff = ax.get(r, c);
                            if coeff == 0 {
                                continue;
                            }
                            for b in 0..dy {
                                let row = tgt_off + r * tdy + b;
                                let col = src_off + c * dy + b;
                                let val = f.add(a.get(row, col), coeff);
                                a.set(row, col, val);
                            }
                        }
                    }
                }
            }
            // component id (x) A^Y_{l2}: block (l1, l2) -> (l1, l2 + 1)
            let ay = y.arrow(l2 as i64);
            if ay.rows() > 0 {
                if let Some(&(_, _, tgt_off, tdx, tdy)) = layout.blocks[tgt]
                    .iter()
                    .find(|b| b.0 == l1 && b.1 == (l2 + 1) % n)
                {
                    debug_assert_eq!(tdx, dx);
                    for r in 0..tdy {
                        for c in 0..dy {
                            let coeff = ay.get(r, c);
                            if coeff == 0 {
                                continue;
                            }
                            for bx in 0..dx {
                                let row = tgt_off + bx * tdy + r;
                                let col = src_off + bx * dy + c;
                                let val = f.add(a.get(row, col), coeff);
                                a.set(row, col, val);
                            }
                        }
                    }
                }
            }
        }
        arrows.push(a);
    }
    QuiverRep::new(params, layout.dims, arrows)
}

/// Matrix of `f (x) id_Y` (per vertex) from tensor(X, Y) to tensor(X', Y),
/// where `f` is a module morphism X -> X' given per vertex.
pub(crate) fn tensor_map_left(
    x: &QuiverRep,
    x_new: &QuiverRep,
    f_maps: &[Matrix],
    y: &QuiverRep,
) -> Vec<Matrix> {
    let params = x.params();
    let n = params.n();
    let field = params.field();
    let src = tensor_layout(x, y);
    let dst = tensor_layout(x_new, y);
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut m = Matrix::zero(field, dst.dims[v], src.dims[v]);
        for &(l1, l2, src_off, dx, dy) in &src.blocks[v] {
            let fm = &f_maps[l1];
            if fm.rows() == 0 {
                continue;
            }
            if let Some(&(_, _, dst_off, tdx, tdy)) =
                dst.blocks[v].iter().find(|b| b.0 == l1 && b.1 == l2)
            {
                debug_assert_eq!(tdy, dy);
                for r in 0..tdx {
                    for c in 0..dx {
                        let coeff = fm.get(r, c);
                        if coeff == 0 {
                            continue;
                        }
                        for b in 0..dy {
                            m.set(dst_off + r * tdy + b, src_off + c * dy + b, coeff);
                        }
                    }
                }
            }
        }
        out.push(m);
    }
    out
}

/// Matrix of `id_X (x) g` (per vertex) from tensor(X, Y) to tensor(X, Y'),
/// with an overall scalar factor (used for the Koszul sign).
pub(crate) fn tensor_map_right(
    x: &QuiverRep,
    y: &QuiverRep,
    y_new: &QuiverRep,
    g_maps: &[Matrix],
    scalar: u64,
) -> Vec<Matrix> {
    let params = x.params();
    let n = params.n();
    let field = params.field();
    let src = tensor_layout(x, y);
    let dst = tensor_layout(x, y_new);
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut m = Matrix::zero(field, dst.dims[v], src.dims[v]);
        for &(l1, l2, src_off, dx, dy) in &src.blocks[v] {
            let gm = &g_maps[l2];
            if gm.rows() == 0 {
                continue;
            }
            if let Some(&(_, _, dst_off, _tdx, tdy)) =
                dst.blocks[v].iter().find(|b| b.0 == l1 && b.1 == l2)
            {
                for r in 0..tdy {
                    for c in 0..dy {
                        let coeff = field.mul(gm.get(r, c), scalar);
                        if coeff == 0 {
                            continue;
                        }
                        for bx in 0..dx {
                            m.set(dst_off + bx * tdy + r, src_off + bx * dy + c, coeff);
                        }
                    }
                }
            }
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn params(n: usize, p: u64, m: u32) -> AlgebraParams {
        AlgebraParams::new(n, p, m).unwrap()
    }

    fn dec(items: &[(usize, usize, usize)]) -> Decomposition {
        items
            .iter()
            .map(|&(l, v, m)| (UniserialClass::new(l, v), m))
            .collect()
    }

    #[test]
    fn uniserial_shapes() {
        let pr = params(6, 5, 1);
        let simple = make_uniserial(&pr, UniserialClass::new(1, 0)).unwrap();
        assert_eq!(simple.dims(), &[1, 0, 0, 0, 0, 0]);
        assert!(simple.arrows.iter().all(|a| a.is_zero()));

        let proj = make_uniserial(&pr, UniserialClass::new(5, 2)).unwrap();
        assert_eq!(proj.dims(), &[1, 0, 1, 1, 1, 1]);

        let m3 = make_uniserial(&pr, UniserialClass::new(3, 0)).unwrap();
        assert_eq!(m3.dims(), &[1, 1, 1, 0, 0, 0]);

        assert!(matches!(
            make_uniserial(&pr, UniserialClass::new(6, 0)),
            Err(Error::LengthOutOfRange { .. })
        ));
        assert!(matches!(
            make_uniserial(&pr, UniserialClass::new(0, 0)),
            Err(Error::LengthOutOfRange { .. })
        ));
    }

    #[test]
    fn constructor_rejects_non_nilpotent_and_mismatched() {
        let pr = params(2, 2, 1);
        let f = pr.field();
        // both arrows the identity: the composite of d = 2 arrows is nonzero
        let id = Matrix::identity(f, 1);
        assert!(matches!(
            QuiverRep::new(pr, vec![1, 1], vec![id.clone(), id.clone()]),
            Err(Error::NilpotencyViolated)
        ));
        // wrong arrow shape
        assert!(matches!(
            QuiverRep::new(pr, vec![1, 2], vec![id.clone(), id]),
            Err(Error::ShapeMismatch)
        ));
        // tensor over different parameters
        let other = params(3, 3, 1);
        let x = make_uniserial(&pr, UniserialClass::new(1, 0)).unwrap();
        let y = make_uniserial(&other, UniserialClass::new(1, 0)).unwrap();
        assert!(matches!(tensor(&x, &y), Err(Error::ParamMismatch)));
        assert!(matches!(x.direct_sum(&y), Err(Error::ParamMismatch)));
    }

    #[test]
    fn decompose_uniserial_is_identity() {
        for (n, p, m) in [(4usize, 2u64, 2u32), (6, 5, 1), (9, 3, 2)] {
            let pr = params(n, p, m);
            for l in 1..=pr.d() {
                for v in 0..n {
                    let x = make_uniserial(&pr, UniserialClass::new(l, v)).unwrap();
                    assert_eq!(x.decompose().unwrap(), dec(&[(l, v, 1)]));
                }
            }
        }
    }

    #[test]
    fn tensor_dimension_counts_partitions() {
        // brute-force oracle straight from the basis description
        let pr = params(6, 5, 1);
        for (i, j, i2, j2) in [(2usize, 0usize, 2usize, 0usize), (3, 1, 4, 5), (5, 2, 2, 3)] {
            let x = make_uniserial(&pr, UniserialClass::new(i, j)).unwrap();
            let y = make_uniserial(&pr, UniserialClass::new(i2, j2)).unwrap();
            let t = tensor(&x, &y).unwrap();
            for l in 0..6usize {
                let mut count = 0;
                for l1 in 0..6usize {
                    let l2 = pr.vertex(l as i64 - l1 as i64);
                    if x.dims()[l1] > 0 && y.dims()[l2] > 0 {
                        count += 1;
                    }
                }
                assert_eq!(t.dims()[l], count);
            }
            assert_eq!(t.total_dim(), i * i2);
        }
        // frozen example: dim(M(2,0) (x) M(2,0)) = (1,2,1,0,0,0)
        let x = make_uniserial(&pr, UniserialClass::new(2, 0)).unwrap();
        let t = tensor(&x, &x).unwrap();
        assert_eq!(t.dims(), &[1, 2, 1, 0, 0, 0]);
    }

    #[test]
    fn tensor_with_unit_is_identity_class() {
        let pr = params(6, 5, 1);
        let unit = make_uniserial(&pr, UniserialClass::new(1, 0)).unwrap();
        for l in 1..=5 {
            for v in 0..6 {
                let x = make_uniserial(&pr, UniserialClass::new(l, v)).unwrap();
                let t = tensor(&x, &unit).unwrap();
                assert_eq!(t.decompose().unwrap(), dec(&[(l, v, 1)]));
                let t = tensor(&unit, &x).unwrap();
                assert_eq!(t.decompose().unwrap(), dec(&[(l, v, 1)]));
            }
        }
    }

    #[test]
    fn decompose_tensor_examples() {
        // p = 2, d = 2: M(2,0) (x) M(2,0) = M(2,0) + M(2,1)
        let pr = params(4, 2, 1);
        let x = make_uniserial(&pr, UniserialClass::new(2, 0)).unwrap();
        let t = tensor(&x, &x).unwrap();
        assert_eq!(t.decompose().unwrap(), dec(&[(2, 0, 1), (2, 1, 1)]));

        // n = d = 27, p = 3: M(4,0) (x) M(10,0) = M(13,0) + M(9,1) + M(9,2) + M(9,3)
        let pr = params(27, 3, 3);
        let a = make_uniserial(&pr, UniserialClass::new(4, 0)).unwrap();
        let b = make_uniserial(&pr, UniserialClass::new(10, 0)).unwrap();
        let t = tensor(&a, &b).unwrap();
        assert_eq!(
            t.decompose().unwrap(),
            dec(&[(13, 0, 1), (9, 1, 1), (9, 2, 1), (9, 3, 1)])
        );
    }

    #[test]
    fn tensor_with_simple_shifts_vertices() {
        // M(i, j) (x) M(1, j') = M(i, j + j') in both orders
        for (n, p, m) in [(4usize, 2u64, 1u32), (6, 5, 1), (9, 3, 2)] {
            let pr = params(n, p, m);
            for i in 1..=pr.d() {
                for j in 0..n {
                    for j2 in 0..n {
                        let x = make_uniserial(&pr, UniserialClass::new(i, j)).unwrap();
                        let s = make_uniserial(&pr, UniserialClass::new(1, j2)).unwrap();
                        let expected = dec(&[(i, pr.vertex((j + j2) as i64), 1)]);
                        assert_eq!(tensor(&x, &s).unwrap().decompose().unwrap(), expected);
                        assert_eq!(tensor(&s, &x).unwrap().decompose().unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_identity_and_commutativity() {
        let pr = params(6, 2, 1);
        for i in 1..=2usize {
            for i2 in 1..=2usize {
                let base = tensor(
                    &make_uniserial(&pr, UniserialClass::new(i, 0)).unwrap(),
                    &make_uniserial(&pr, UniserialClass::new(i2, 0)).unwrap(),
                )
                .unwrap()
                .decompose()
                .unwrap();
                for j in 0..6 {
                    for j2 in 0..6 {
                        let t = tensor(
                            &make_uniserial(&pr, UniserialClass::new(i, j)).unwrap(),
                            &make_uniserial(&pr, UniserialClass::new(i2, j2)).unwrap(),
                        )
                        .unwrap();
                        let dec_t = t.decompose().unwrap();
                        assert_eq!(
                            dec_t,
                            shift_decomposition(&pr, &base, (j + j2) as i64),
                            "reduction identity at ({i},{j}) x ({i2},{j2})"
                        );
                        let swapped = tensor(
                            &make_uniserial(&pr, UniserialClass::new(i2, j2)).unwrap(),
                            &make_uniserial(&pr, UniserialClass::new(i, j)).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(dec_t, swapped.decompose().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_at_class_level() {
        let pr = params(5, 2, 2);
        let mut rng = SplitMix64::new(7);
        for _ in 0..10 {
            let pick = |rng: &mut SplitMix64| {
                UniserialClass::new((rng.below(4) + 1) as usize, rng.below(5) as usize)
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let (xa, xb, xc) = (
                make_uniserial(&pr, a).unwrap(),
                make_uniserial(&pr, b).unwrap(),
                make_uniserial(&pr, c).unwrap(),
            );
            let left = tensor(&tensor(&xa, &xb).unwrap(), &xc).unwrap();
            let right = tensor(&xa, &tensor(&xb, &xc).unwrap()).unwrap();
            assert_eq!(left.decompose().unwrap(), right.decompose().unwrap());
        }
    }

    #[test]
    fn tensor_is_nilpotent() {
        let pr = params(4, 2, 2);
        for i in 1..=4 {
            for i2 in 1..=4 {
                let t = tensor(
                    &make_uniserial(&pr, UniserialClass::new(i, 1)).unwrap(),
                    &make_uniserial(&pr, UniserialClass::new(i2, 3)).unwrap(),
                )
                .unwrap();
                assert!(t.is_nilpotent());
            }
        }
    }

    #[test]
    fn direct_sum_properties() {
        let pr = params(6, 3, 1);
        let x = make_uniserial(&pr, UniserialClass::new(3, 2)).unwrap();
        let zero = QuiverRep::zero(pr);
        let s = x.direct_sum(&zero).unwrap();
        assert_eq!(s.decompose().unwrap(), x.decompose().unwrap());

        let y = make_uniserial(&pr, UniserialClass::new(2, 5)).unwrap();
        let s = x.direct_sum(&y).unwrap();
        for v in 0..6 {
            assert_eq!(s.dims()[v], x.dims()[v] + y.dims()[v]);
        }
        assert_eq!(s.decompose().unwrap(), dec(&[(3, 2, 1), (2, 5, 1)]));
    }

    /// The decomposition oracle: build random direct sums of uniserials and
    /// check that `decompose` returns exactly the constructed multiset, and
    /// that the rank function of the reconstruction matches the input's.
    #[test]
    fn decompose_oracle_random_sums() {
        let mut rng = SplitMix64::new(0x0dd5);
        for p in [2u64, 3] {
            for n in p as usize..=6 {
                let pr = params(n, p, 1);
                for _ in 0..25 {
                    let count = 1 + rng.below(4) as usize;
                    let mut expected = Decomposition::new();
                    let mut sum = QuiverRep::zero(pr);
                    for _ in 0..count {
                        let c = UniserialClass::new(
                            (rng.below(pr.d() as u64) + 1) as usize,
                            rng.below(n as u64) as usize,
                        );
                        *expected.entry(c).or_insert(0) += 1;
                        sum = sum.direct_sum(&make_uniserial(&pr, c).unwrap()).unwrap();
                    }
                    assert_eq!(sum.decompose().unwrap(), expected);
                    // rank-function round trip
                    let mut rebuilt = QuiverRep::zero(pr);
                    for (c, m) in &expected {
                        for _ in 0..*m {
                            rebuilt = rebuilt
                                .direct_sum(&make_uniserial(&pr, *c).unwrap())
                                .unwrap();
                        }
                    }
                    assert_eq!(rebuilt.rank_function(), sum.rank_function());
                }
            }
        }
    }
}
