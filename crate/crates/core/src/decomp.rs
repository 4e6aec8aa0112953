//! Tensor factorizations under the C-product.
//!
//! Each one factors the transform-domain slices with the matrix kernels and
//! maps the factors back with `L^{-1}`. The full-rank, QDR and HS forms exist
//! only when every transform slice has the same numerical rank; otherwise
//! they fail with [`Error::RankMismatch`] carrying all slice ranks.

use crate::cproduct::{conj_transpose, cprod_chain};
use crate::error::{Error, Result};
use crate::geninv::{drazin_inverse, DrazinMethod};
use crate::kernels::{self, rank_from_singular_values, RankTolerance};
use crate::matrix::{Matrix, C64};
use crate::tensor::Tensor3;
use crate::transform::TransformContext;

/// `A = U *c S *c V^H`.
#[derive(Debug, Clone)]
pub struct CSvd {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
}

/// `A = Q *c R` with `Q` unitary and `R` F-upper.
#[derive(Debug, Clone)]
pub struct CQr {
    pub q: Tensor3,
    pub r: Tensor3,
}

/// `A = Q^H *c T *c Q` with `Q` unitary and `T` F-upper.
#[derive(Debug, Clone)]
pub struct CSchur {
    pub q: Tensor3,
    pub t: Tensor3,
}

/// `A = M *c N` with `M` of size `n1 x r x n3` and `N` of size `r x n2 x n3`.
#[derive(Debug, Clone)]
pub struct CFullRank {
    pub m: Tensor3,
    pub n: Tensor3,
    pub r: usize,
}

/// `A = Q *c D *c R` with `D` invertible and F-diagonal.
#[derive(Debug, Clone)]
pub struct CQdr {
    pub q: Tensor3,
    pub d: Tensor3,
    pub r_factor: Tensor3,
    pub r: usize,
}

/// `A = U *c [[Sr *c K, Sr *c L], [O, O]] *c U^H` where `[K, L]` is the
/// first `r` block rows of `V^H *c U` from the C-SVD.
#[derive(Debug, Clone)]
pub struct CHs {
    pub u: Tensor3,
    pub sr: Tensor3,
    pub k: Tensor3,
    pub l: Tensor3,
    pub r: usize,
}

/// `A = core + nil` with `core = A^2 *c A^D` and `nil` nilpotent of index `k`.
#[derive(Debug, Clone)]
pub struct CoreNilpotentParts {
    pub core: Tensor3,
    pub nil: Tensor3,
    pub k: usize,
}

impl CSvd {
    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        cprod_chain(&[&self.u, &self.s, &conj_transpose(&self.v, ctx)?], ctx)
    }
}

impl CQr {
    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        cprod_chain(&[&self.q, &self.r], ctx)
    }
}

impl CSchur {
    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        cprod_chain(&[&conj_transpose(&self.q, ctx)?, &self.t, &self.q], ctx)
    }
}

impl CFullRank {
    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        cprod_chain(&[&self.m, &self.n], ctx)
    }
}

impl CQdr {
    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        cprod_chain(&[&self.q, &self.d, &self.r_factor], ctx)
    }
}

impl CHs {
    /// The middle factor `[[Sr *c K, Sr *c L], [O, O]]`.
    pub fn middle(&self, ctx: &TransformContext) -> Result<Tensor3> {
        let n = self.u.n1();
        let n3 = ctx.n3();
        let top_left = cprod_chain(&[&self.sr, &self.k], ctx)?;
        let top_right = cprod_chain(&[&self.sr, &self.l], ctx)?;
        Tensor3::compose_blocks(
            &top_left,
            &top_right,
            &Tensor3::zeros((n - self.r, self.r, n3)),
            &Tensor3::zeros((n - self.r, n - self.r, n3)),
        )
    }

    pub fn reconstruct(&self, ctx: &TransformContext) -> Result<Tensor3> {
        let middle = self.middle(ctx)?;
        cprod_chain(&[&self.u, &middle, &conj_transpose(&self.u, ctx)?], ctx)
    }
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

/// Returns the shared rank, or `RankMismatch` with every slice rank.
pub(crate) fn common_rank(ranks: Vec<usize>) -> Result<usize> {
    match ranks.first() {
        Some(&r) if ranks.iter().all(|&x| x == r) => Ok(r),
        Some(_) => Err(Error::RankMismatch { ranks }),
        None => Ok(0),
    }
}

pub fn c_svd(a: &Tensor3, ctx: &TransformContext) -> Result<CSvd> {
    let mut us = Vec::new();
    let mut ss = Vec::new();
    let mut vs = Vec::new();
    for slice in ctx.forward_slices(a)? {
        let f = kernels::svd_matrix(&slice)?;
        ss.push(f.sigma());
        us.push(f.u);
        vs.push(f.v);
    }
    Ok(CSvd {
        u: ctx.from_transform_slices(&us)?,
        s: ctx.from_transform_slices(&ss)?,
        v: ctx.from_transform_slices(&vs)?,
    })
}

pub fn c_qr(a: &Tensor3, ctx: &TransformContext) -> Result<CQr> {
    let (qs, rs): (Vec<_>, Vec<_>) = ctx
        .forward_slices(a)?
        .iter()
        .map(|s| {
            let f = kernels::qr_matrix(s);
            (f.q, f.r)
        })
        .unzip();
    Ok(CQr {
        q: ctx.from_transform_slices(&qs)?,
        r: ctx.from_transform_slices(&rs)?,
    })
}

pub fn c_schur(a: &Tensor3, ctx: &TransformContext) -> Result<CSchur> {
    check_square(a, "C-Schur")?;
    let mut qs = Vec::new();
    let mut ts = Vec::new();
    for slice in ctx.forward_slices(a)? {
        let f = kernels::schur_matrix(&slice)?;
        qs.push(f.q);
        ts.push(f.t);
    }
    Ok(CSchur {
        q: ctx.from_transform_slices(&qs)?,
        t: ctx.from_transform_slices(&ts)?,
    })
}

pub(crate) fn full_rank_slices(
    slices: &[Matrix],
    tol: &RankTolerance,
    ctx: &TransformContext,
) -> Result<CFullRank> {
    let factors = slices
        .iter()
        .map(|s| kernels::full_rank_with(s, tol))
        .collect::<Result<Vec<_>>>()?;
    let r = common_rank(factors.iter().map(|f| f.r).collect())?;
    let (ms, ns): (Vec<_>, Vec<_>) = factors.into_iter().map(|f| (f.m, f.n)).unzip();
    Ok(CFullRank {
        m: ctx.from_transform_slices(&ms)?,
        n: ctx.from_transform_slices(&ns)?,
        r,
    })
}

pub fn c_full_rank(a: &Tensor3, ctx: &TransformContext) -> Result<CFullRank> {
    let slices = ctx.forward_slices(a)?;
    let tol = ctx.slice_tolerance(&slices)?;
    full_rank_slices(&slices, &tol, ctx)
}

pub(crate) fn qdr_slices(
    slices: &[Matrix],
    tol: &RankTolerance,
    ctx: &TransformContext,
) -> Result<CQdr> {
    let factors = slices
        .iter()
        .map(|s| kernels::qdr_with(s, tol))
        .collect::<Result<Vec<_>>>()?;
    let r = common_rank(factors.iter().map(|f| f.r).collect())?;
    let mut qs = Vec::new();
    let mut ds = Vec::new();
    let mut rs = Vec::new();
    for f in factors {
        qs.push(f.q);
        ds.push(f.d);
        rs.push(f.r_factor);
    }
    Ok(CQdr {
        q: ctx.from_transform_slices(&qs)?,
        d: ctx.from_transform_slices(&ds)?,
        r_factor: ctx.from_transform_slices(&rs)?,
        r,
    })
}

pub fn c_qdr(a: &Tensor3, ctx: &TransformContext) -> Result<CQdr> {
    let slices = ctx.forward_slices(a)?;
    let tol = ctx.slice_tolerance(&slices)?;
    qdr_slices(&slices, &tol, ctx)
}

pub fn c_hs(a: &Tensor3, ctx: &TransformContext) -> Result<CHs> {
    check_square(a, "C-HS")?;
    let n = a.n1();
    let slices = ctx.forward_slices(a)?;
    let cutoff = ctx.slice_tolerance(&slices)?.cutoff();
    let svds = slices
        .iter()
        .map(kernels::svd_matrix)
        .collect::<Result<Vec<_>>>()?;
    let r = common_rank(
        svds.iter()
            .map(|f| rank_from_singular_values(&f.s, cutoff))
            .collect(),
    )?;

    let mut us = Vec::new();
    let mut srs = Vec::new();
    let mut ks = Vec::new();
    let mut ls = Vec::new();
    for f in svds {
        let w = &f.v.adjoint() * &f.u;
        let diag: Vec<_> = f.s[..r].iter().map(|&s| C64::new(s, 0.0)).collect();
        srs.push(Matrix::from_diag(&diag));
        ks.push(w.submatrix(0, 0, r, r));
        ls.push(w.submatrix(0, r, r, n - r));
        us.push(f.u);
    }
    Ok(CHs {
        u: ctx.from_transform_slices(&us)?,
        sr: ctx.from_transform_slices(&srs)?,
        k: ctx.from_transform_slices(&ks)?,
        l: ctx.from_transform_slices(&ls)?,
        r,
    })
}

pub fn core_nilpotent_parts(a: &Tensor3, ctx: &TransformContext) -> Result<CoreNilpotentParts> {
    let drazin = drazin_inverse(a, ctx, DrazinMethod::PowerFormula)?;
    let core = cprod_chain(&[a, a, &drazin.x], ctx)?;
    let nil = a - &core;
    Ok(CoreNilpotentParts {
        core,
        nil,
        k: drazin.index.unwrap_or(0),
    })
}
