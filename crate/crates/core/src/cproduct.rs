//! The C-product and its algebra: identity, conjugate transpose, structure
//! predicates, inverse and powers.
//!
//! Every product is evaluated in the transform domain, slice by slice.
//! `mat_embed` is only used by tests as an oracle.

use crate::error::{Error, Result};
use crate::kernels::{self, numerical_rank};
use crate::matrix::Matrix;
use crate::tensor::Tensor3;
use crate::transform::TransformContext;

/// Absolute tolerance for the structure predicates on raw entries.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Shared pattern of all frontal slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    FDiagonal,
    FUpper,
    FLower,
    None,
}

fn check_product_dims(a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.n2() != b.n1() || a.n3() != b.n3() {
        return Err(Error::shape(format!(
            "cannot multiply {:?} by {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

fn check_square(a: &Tensor3, what: &str) -> Result<()> {
    if a.n1() != a.n2() {
        return Err(Error::shape(format!(
            "{what} needs square slices, got {:?}",
            a.dims()
        )));
    }
    Ok(())
}

/// Slice-by-slice matrix product.
pub fn facewise_product(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_product_dims(a, b)?;
    let slices: Vec<Matrix> = a
        .slices()
        .iter()
        .zip(b.slices())
        .map(|(x, y)| x * &y)
        .collect();
    if slices.is_empty() {
        return Ok(Tensor3::zeros((a.n1(), b.n2(), 0)));
    }
    Tensor3::from_slices(&slices)
}

/// `L^{-1}(L(A) facewise L(B))`.
pub fn cprod(a: &Tensor3, b: &Tensor3, ctx: &TransformContext) -> Result<Tensor3> {
    check_product_dims(a, b)?;
    let la = ctx.apply_l(a)?;
    let lb = ctx.apply_l(b)?;
    ctx.apply_l_inv(&facewise_product(&la, &lb)?)
}

/// Left-to-right product of a chain of tensors.
pub fn cprod_chain(factors: &[&Tensor3], ctx: &TransformContext) -> Result<Tensor3> {
    let (first, rest) = factors.split_first().expect("empty product chain");
    let mut acc = ctx.forward_slices(first)?;
    let mut left = *first;
    for &f in rest {
        check_product_dims(left, f)?;
        for (x, y) in acc.iter_mut().zip(ctx.forward_slices(f)?) {
            *x = &*x * &y;
        }
        left = f;
    }
    ctx.from_transform_slices(&acc)
}

/// The tensor whose transform-domain slices are all `I_n`.
pub fn identity_tensor(n: usize, ctx: &TransformContext) -> Tensor3 {
    let slices = vec![Matrix::identity(n); ctx.n3()];
    ctx.from_transform_slices(&slices)
        .expect("identity slices have consistent shape")
}

/// `L(A^H)^(i) = (L(A)^(i))^H`.
pub fn conj_transpose(a: &Tensor3, ctx: &TransformContext) -> Result<Tensor3> {
    let slices: Vec<Matrix> = ctx.forward_slices(a)?.iter().map(Matrix::adjoint).collect();
    ctx.from_transform_slices(&slices)
}

/// Classifies the raw frontal slices. A zero tensor is F-diagonal.
pub fn structure_of(a: &Tensor3) -> StructureKind {
    let (n1, n2, n3) = a.dims();
    let (mut lower, mut upper) = (false, false);
    for k in 0..n3 {
        for i in 0..n1 {
            for j in 0..n2 {
                if a[(i, j, k)].norm() > STRUCTURE_TOL {
                    lower |= i > j;
                    upper |= i < j;
                }
            }
        }
    }
    match (lower, upper) {
        (false, false) => StructureKind::FDiagonal,
        (false, true) => StructureKind::FUpper,
        (true, false) => StructureKind::FLower,
        (true, true) => StructureKind::None,
    }
}

/// True when `A` is at least as structured as `kind` (a diagonal tensor is
/// also upper and lower).
pub fn has_structure(a: &Tensor3, kind: StructureKind) -> bool {
    let found = structure_of(a);
    match kind {
        StructureKind::None => true,
        StructureKind::FDiagonal => found == StructureKind::FDiagonal,
        StructureKind::FUpper | StructureKind::FLower => {
            found == kind || found == StructureKind::FDiagonal
        }
    }
}

/// `A^H *c A = A *c A^H = I`, checked entrywise to `1e-8`.
pub fn is_unitary(a: &Tensor3, ctx: &TransformContext) -> Result<bool> {
    check_square(a, "unitarity")?;
    let id = Matrix::identity(a.n1());
    Ok(ctx.forward_slices(a)?.iter().all(|s| {
        (&s.adjoint() * s).approx_eq(&id, 1e-8) && (s * &s.adjoint()).approx_eq(&id, 1e-8)
    }))
}

/// `A^H = A`, to `1e-12 * max(1, max|A|)`.
pub fn is_symmetric(a: &Tensor3, ctx: &TransformContext) -> Result<bool> {
    check_square(a, "symmetry")?;
    let ah = conj_transpose(a, ctx)?;
    Ok(ah.max_abs_diff(a) <= STRUCTURE_TOL * a.max_abs().max(1.0))
}

/// Inverse under the C-product; every transform slice must be nonsingular
/// under the shared rank rule.
pub fn tensor_inverse(a: &Tensor3, ctx: &TransformContext) -> Result<Tensor3> {
    check_square(a, "inverse")?;
    let slices = ctx.forward_slices(a)?;
    let cutoff = ctx.slice_tolerance(&slices)?.cutoff();
    let n = a.n1();
    let mut out = Vec::with_capacity(slices.len());
    for (i, s) in slices.iter().enumerate() {
        let rank = numerical_rank(s, Some(cutoff))?;
        let singular = Error::SingularSlice {
            slice: i + 1,
            rank,
            n,
        };
        if rank < n {
            return Err(singular);
        }
        out.push(kernels::inverse(s).ok_or(singular)?);
    }
    ctx.from_transform_slices(&out)
}

/// `A^k` under the C-product; `A^0` is the identity tensor.
pub fn tensor_power(a: &Tensor3, k: usize, ctx: &TransformContext) -> Result<Tensor3> {
    check_square(a, "power")?;
    ctx.map_slices(a, |_, s| Ok(s.pow(k)))
}
