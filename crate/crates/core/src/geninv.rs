//! Moore-Penrose, Drazin, group and along-`G` inverses of tensors.
//!
//! Every routine returns the inverse together with the residuals of its
//! defining equations, so a caller can tell a numerically poor answer from a
//! good one without recomputing anything.

use std::fmt;
use std::str::FromStr;

use crate::cproduct::{conj_transpose, cprod_chain, tensor_inverse};
use crate::decomp::{self, c_hs, c_qr, c_schur, c_svd};
use crate::error::{Error, Result};
use crate::kernels::{self, index_with, pinv_with, RankTolerance};
use crate::matrix::Matrix;
use crate::tensor::Tensor3;
use crate::transform::TransformContext;

/// Residual thresholds, each multiplied by `1 + max|A|`.
pub const MP_TOL: f64 = 1e-8;
pub const DRAZIN_TOL: f64 = 1e-7;
pub const ALONG_TOL: f64 = 1e-8;

macro_rules! method_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
        pub enum $name {
            #[default]
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|m| m.name() == s)
                    .ok_or_else(|| {
                        let names: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
                        format!("unknown method `{s}`, expected one of: {}", names.join(", "))
                    })
            }
        }
    };
}

method_enum! {
    /// Route to the Moore-Penrose inverse. `Schur` and `Hs` need square
    /// slices; `FullRank`, `Qdr` and `Hs` need equal transform-slice ranks.
    MpMethod {
        Slicewise => "slicewise",
        Svd => "svd",
        Qr => "qr",
        Schur => "schur",
        FullRank => "fullrank",
        Qdr => "qdr",
        Hs => "hs",
    }
}

method_enum! {
    /// Route to the Drazin inverse.
    DrazinMethod {
        PowerFormula => "power",
        QdrOfPower => "qdr",
        CoreNilpotent => "corenil",
        Hs => "hs",
    }
}

method_enum! {
    /// Route to the inverse along `G`.
    AlongMethod {
        SvdOfG => "svd",
        GagDagger => "gag",
        FullRankOfG => "fullrank",
    }
}

/// Max-entry residual of one defining equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub label: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl Residual {
    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone)]
pub struct GenInvResult {
    pub x: Tensor3,
    pub residuals: Vec<Residual>,
    /// Tensor index, for Drazin and group inverses.
    pub index: Option<usize>,
}

impl GenInvResult {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(Residual::passed)
    }

    pub fn residual(&self, label: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|r| r.label == label)
            .map(|r| r.value)
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

fn check_dims(found: &Tensor3, expected: (usize, usize, usize), what: &str) -> Result<()> {
    if found.dims() != expected {
        return Err(Error::shape(format!(
            "{what} has dims {:?}, expected {expected:?}",
            found.dims()
        )));
    }
    Ok(())
}

fn residual(label: &'static str, lhs: &Tensor3, rhs: &Tensor3, threshold: f64) -> Residual {
    Residual {
        label,
        value: lhs.max_abs_diff(rhs),
        threshold,
    }
}

/// Slicewise pseudo-inverse with one cutoff for every slice.
fn pinv_slices(a: &Tensor3, ctx: &TransformContext, cutoff: f64) -> Result<Tensor3> {
    ctx.map_slices(a, |_, s| pinv_with(s, cutoff))
}

/// Slicewise pseudo-inverse under the default rank rule of `a`.
pub(crate) fn pinv_default(a: &Tensor3, ctx: &TransformContext) -> Result<Tensor3> {
    let cutoff = ctx.tolerance_of(a)?.cutoff();
    pinv_slices(a, ctx, cutoff)
}

/// Residuals of `AXA = A`, `XAX = X`, `(AX)^H = AX`, `(XA)^H = XA`.
pub fn check_penrose(a: &Tensor3, x: &Tensor3, ctx: &TransformContext) -> Result<Vec<Residual>> {
    check_dims(x, (a.n2(), a.n1(), a.n3()), "candidate inverse")?;
    let threshold = MP_TOL * (1.0 + a.max_abs());
    let ax = cprod_chain(&[a, x], ctx)?;
    let xa = cprod_chain(&[x, a], ctx)?;
    Ok(vec![
        residual("AXA=A", &cprod_chain(&[&ax, a], ctx)?, a, threshold),
        residual("XAX=X", &cprod_chain(&[&xa, x], ctx)?, x, threshold),
        residual("(AX)^H=AX", &conj_transpose(&ax, ctx)?, &ax, threshold),
        residual("(XA)^H=XA", &conj_transpose(&xa, ctx)?, &xa, threshold),
    ])
}

/// Residuals of `A^(k+1) X = A^k`, `XAX = X`, `AX = XA`.
pub fn check_drazin(
    a: &Tensor3,
    x: &Tensor3,
    k: usize,
    ctx: &TransformContext,
) -> Result<Vec<Residual>> {
    check_square(a, "Drazin check")?;
    check_dims(x, a.dims(), "candidate inverse")?;
    let threshold = DRAZIN_TOL * (1.0 + a.max_abs());
    let ak = ctx.map_slices(a, |_, s| Ok(s.pow(k)))?;
    let ax = cprod_chain(&[a, x], ctx)?;
    Ok(vec![
        residual(
            "A^(k+1)X=A^k",
            &cprod_chain(&[&ak, &ax], ctx)?,
            &ak,
            threshold,
        ),
        residual("XAX=X", &cprod_chain(&[x, &ax], ctx)?, x, threshold),
        residual("AX=XA", &ax, &cprod_chain(&[x, a], ctx)?, threshold),
    ])
}

/// Residuals of `XAG = G`, `GAX = G`, and of the least-squares witnesses for
/// `X = G U` and `X^H = G^H V`.
pub fn check_along(
    a: &Tensor3,
    g: &Tensor3,
    x: &Tensor3,
    ctx: &TransformContext,
) -> Result<Vec<Residual>> {
    let (n1, n2, n3) = a.dims();
    check_dims(g, (n2, n1, n3), "G")?;
    check_dims(x, (n2, n1, n3), "candidate inverse")?;
    let threshold = ALONG_TOL * (1.0 + a.max_abs());
    let u = cprod_chain(&[&pinv_default(g, ctx)?, x], ctx)?;
    let gh = conj_transpose(g, ctx)?;
    let xh = conj_transpose(x, ctx)?;
    let v = cprod_chain(&[&pinv_default(&gh, ctx)?, &xh], ctx)?;
    Ok(vec![
        residual("XAG=G", &cprod_chain(&[x, a, g], ctx)?, g, threshold),
        residual("GAX=G", &cprod_chain(&[g, a, x], ctx)?, g, threshold),
        residual("X=GU", &cprod_chain(&[g, &u], ctx)?, x, threshold),
        residual("X^H=G^HV", &cprod_chain(&[&gh, &v], ctx)?, &xh, threshold),
    ])
}

pub fn mp_inverse(a: &Tensor3, ctx: &TransformContext, method: MpMethod) -> Result<GenInvResult> {
    let x = match method {
        MpMethod::Slicewise => pinv_default(a, ctx)?,
        MpMethod::Svd => {
            let f = c_svd(a, ctx)?;
            let s_dag = pinv_slices(&f.s, ctx, ctx.tolerance_of(a)?.cutoff())?;
            cprod_chain(&[&f.v, &s_dag, &conj_transpose(&f.u, ctx)?], ctx)?
        }
        MpMethod::Qr => {
            let f = c_qr(a, ctx)?;
            let r_dag = pinv_slices(&f.r, ctx, ctx.tolerance_of(a)?.cutoff())?;
            cprod_chain(&[&r_dag, &conj_transpose(&f.q, ctx)?], ctx)?
        }
        MpMethod::Schur => {
            let f = c_schur(a, ctx)?;
            let t_dag = pinv_slices(&f.t, ctx, ctx.tolerance_of(a)?.cutoff())?;
            cprod_chain(&[&conj_transpose(&f.q, ctx)?, &t_dag, &f.q], ctx)?
        }
        MpMethod::FullRank => {
            let f = decomp::c_full_rank(a, ctx)?;
            let mh = conj_transpose(&f.m, ctx)?;
            let nh = conj_transpose(&f.n, ctx)?;
            let inner = tensor_inverse(&cprod_chain(&[&mh, a, &nh], ctx)?, ctx)?;
            cprod_chain(&[&nh, &inner, &mh], ctx)?
        }
        MpMethod::Qdr => {
            // factor A^H = Q D R, then A^+ = Q (R A Q)^{-1} R
            let f = decomp::c_qdr(&conj_transpose(a, ctx)?, ctx)?;
            let inner = tensor_inverse(&cprod_chain(&[&f.r_factor, a, &f.q], ctx)?, ctx)?;
            cprod_chain(&[&f.q, &inner, &f.r_factor], ctx)?
        }
        MpMethod::Hs => {
            let h = c_hs(a, ctx)?;
            let (n, r, n3) = (a.n1(), h.r, ctx.n3());
            let sr_inv = tensor_inverse(&h.sr, ctx)?;
            let top = cprod_chain(&[&conj_transpose(&h.k, ctx)?, &sr_inv], ctx)?;
            let bottom = cprod_chain(&[&conj_transpose(&h.l, ctx)?, &sr_inv], ctx)?;
            let middle = Tensor3::compose_blocks(
                &top,
                &Tensor3::zeros((r, n - r, n3)),
                &bottom,
                &Tensor3::zeros((n - r, n - r, n3)),
            )?;
            cprod_chain(&[&h.u, &middle, &conj_transpose(&h.u, ctx)?], ctx)?
        }
    };
    let residuals = check_penrose(a, &x, ctx)?;
    Ok(GenInvResult {
        x,
        residuals,
        index: None,
    })
}

fn index_of_slices(slices: &[Matrix], tol: &RankTolerance) -> Result<usize> {
    slices
        .iter()
        .map(|s| index_with(s, tol))
        .try_fold(0, |acc, k| Ok(acc.max(k?)))
}

/// Largest index over the transform-domain slices.
pub fn tensor_index(a: &Tensor3, ctx: &TransformContext) -> Result<usize> {
    check_square(a, "index")?;
    let slices = ctx.forward_slices(a)?;
    index_of_slices(&slices, &ctx.slice_tolerance(&slices)?)
}

/// `A^k (A^(2k+1))^+ A^k` slicewise, with the MP inverse as the {1}-inverse.
fn power_formula(slices: &[Matrix], k: usize, tol: &RankTolerance) -> Result<Vec<Matrix>> {
    let cutoff = tol.power_cutoff(2 * k + 1);
    slices
        .iter()
        .map(|s| {
            let ak = s.pow(k);
            let big = &(&ak * &ak) * s;
            Ok(&(&ak * &pinv_with(&big, cutoff)?) * &ak)
        })
        .collect()
}

fn drazin_by_power(
    a: &Tensor3,
    ctx: &TransformContext,
    tol: &RankTolerance,
) -> Result<(Tensor3, usize)> {
    let slices = ctx.forward_slices(a)?;
    let k = index_of_slices(&slices, tol)?;
    Ok((
        ctx.from_transform_slices(&power_formula(&slices, k, tol)?)?,
        k,
    ))
}

pub fn drazin_inverse(
    a: &Tensor3,
    ctx: &TransformContext,
    method: DrazinMethod,
) -> Result<GenInvResult> {
    check_square(a, "Drazin inverse")?;
    let slices = ctx.forward_slices(a)?;
    let tol = ctx.slice_tolerance(&slices)?;
    let k = index_of_slices(&slices, &tol)?;
    let x = match method {
        DrazinMethod::PowerFormula => {
            ctx.from_transform_slices(&power_formula(&slices, k, &tol)?)?
        }
        DrazinMethod::QdrOfPower => {
            let powers: Vec<Matrix> = slices.iter().map(|s| s.pow(k)).collect();
            let power_tol = RankTolerance::absolute(tol.power_cutoff(k));
            let f = decomp::qdr_slices(&powers, &power_tol, ctx)?;
            let inner = tensor_inverse(&cprod_chain(&[&f.r_factor, a, &f.q], ctx)?, ctx)?;
            cprod_chain(&[&f.q, &inner, &f.r_factor], ctx)?
        }
        DrazinMethod::CoreNilpotent => {
            let mut out = Vec::with_capacity(slices.len());
            for (i, s) in slices.iter().enumerate() {
                let cn = kernels::core_nilpotent_with(s, &tol)?;
                let x = cn.drazin().ok_or_else(|| Error::SingularSlice {
                    slice: i + 1,
                    rank: kernels::numerical_rank(&cn.c, None).unwrap_or(0),
                    n: cn.r,
                })?;
                out.push(x);
            }
            ctx.from_transform_slices(&out)?
        }
        DrazinMethod::Hs => {
            // A = U [[T, Sr L], [O, O]] U^H with T = Sr K; the Drazin inverse of
            // that block triangle is [[T^D, (T^D)^2 Sr L], [O, O]]
            let h = c_hs(a, ctx)?;
            let (n, r, n3) = (a.n1(), h.r, ctx.n3());
            let t = cprod_chain(&[&h.sr, &h.k], ctx)?;
            let (td, _) = drazin_by_power(&t, ctx, &tol)?;
            let top_right = cprod_chain(&[&td, &td, &h.sr, &h.l], ctx)?;
            let middle = Tensor3::compose_blocks(
                &td,
                &top_right,
                &Tensor3::zeros((n - r, r, n3)),
                &Tensor3::zeros((n - r, n - r, n3)),
            )?;
            cprod_chain(&[&h.u, &middle, &conj_transpose(&h.u, ctx)?], ctx)?
        }
    };
    let residuals = check_drazin(a, &x, k, ctx)?;
    Ok(GenInvResult {
        x,
        residuals,
        index: Some(k),
    })
}

/// Drazin inverse with `k = 1`; fails with `IndexTooLarge` when the index exceeds 1.
pub fn group_inverse(a: &Tensor3, ctx: &TransformContext) -> Result<GenInvResult> {
    check_square(a, "group inverse")?;
    let slices = ctx.forward_slices(a)?;
    let tol = ctx.slice_tolerance(&slices)?;
    let k = index_of_slices(&slices, &tol)?;
    if k > 1 {
        return Err(Error::IndexTooLarge(k));
    }
    let x = ctx.from_transform_slices(&power_formula(&slices, 1, &tol)?)?;
    let residuals = check_drazin(a, &x, 1, ctx)?;
    Ok(GenInvResult {
        x,
        residuals,
        index: Some(k),
    })
}

pub fn inverse_along(
    a: &Tensor3,
    g: &Tensor3,
    ctx: &TransformContext,
    method: AlongMethod,
) -> Result<GenInvResult> {
    let (n1, n2, n3) = a.dims();
    check_dims(g, (n2, n1, n3), "G")?;
    let x = match method {
        AlongMethod::SvdOfG => {
            let a_slices = ctx.forward_slices(a)?;
            let g_slices = ctx.forward_slices(g)?;
            let a_cut = ctx.slice_tolerance(&a_slices)?.cutoff();
            let g_cut = ctx.slice_tolerance(&g_slices)?.cutoff();
            let mut out = Vec::with_capacity(n3);
            for (i, (ai, gi)) in a_slices.iter().zip(&g_slices).enumerate() {
                let f = kernels::svd_matrix(gi)?;
                let r = kernels::rank_from_singular_values(&f.s, g_cut);
                let block = (&(&f.v.adjoint() * ai) * &f.u).submatrix(0, 0, r, r);
                let rank = kernels::numerical_rank(&block, Some(a_cut))?;
                let singular = Error::NotInvertibleAlong {
                    slice: i + 1,
                    rank,
                    expected: r,
                };
                if rank < r {
                    return Err(singular);
                }
                let block_inv = kernels::inverse(&block).ok_or(singular)?;
                let ur = f.u.submatrix(0, 0, n2, r);
                let vr = f.v.submatrix(0, 0, n1, r);
                out.push(&(&ur * &block_inv) * &vr.adjoint());
            }
            ctx.from_transform_slices(&out)?
        }
        AlongMethod::GagDagger => {
            let gag = cprod_chain(&[g, a, g], ctx)?;
            let gag_slices = ctx.forward_slices(&gag)?;
            let g_slices = ctx.forward_slices(g)?;
            let gag_cut = ctx.slice_tolerance(&gag_slices)?.cutoff();
            let g_cut = ctx.slice_tolerance(&g_slices)?.cutoff();
            // existence: rank(G A G) = rank(G) on every slice
            for (i, (s, gi)) in gag_slices.iter().zip(&g_slices).enumerate() {
                let rank = kernels::numerical_rank(s, Some(gag_cut))?;
                let expected = kernels::numerical_rank(gi, Some(g_cut))?;
                if rank < expected {
                    return Err(Error::NotInvertibleAlong {
                        slice: i + 1,
                        rank,
                        expected,
                    });
                }
            }
            let middle = pinv_slices(&gag, ctx, gag_cut)?;
            cprod_chain(&[g, &middle, g], ctx)?
        }
        AlongMethod::FullRankOfG => {
            let f = decomp::c_full_rank(g, ctx)?;
            let inner = cprod_chain(&[&f.n, a, &f.m], ctx)?;
            let inv = tensor_inverse(&inner, ctx).map_err(|e| match e {
                Error::SingularSlice { slice, rank, n } => Error::NotInvertibleAlong {
                    slice,
                    rank,
                    expected: n,
                },
                other => other,
            })?;
            cprod_chain(&[&f.m, &inv, &f.n], ctx)?
        }
    };
    let residuals = check_along(a, g, &x, ctx)?;
    Ok(GenInvResult {
        x,
        residuals,
        index: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cproduct::{cprod, identity_tensor};
    use crate::matrix::C64;
    use crate::transform::{mat_embed, ten_extract};

    fn sample(dims: (usize, usize, usize), seed: f64) -> Tensor3 {
        Tensor3::from_fn(dims, |i, j, k| {
            let x = seed + (i * 19 + j * 7 + k * 5) as f64;
            C64::new((1.7 * x).sin(), 0.5 * (0.3 * x).cos())
        })
    }

    fn example1() -> Tensor3 {
        Tensor3::from_real_slices(&[
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 3.0]],
            &[&[2.0, 3.0, 0.0], &[2.0, 0.0, 0.0], &[1.0, 0.0, 5.0]],
            &[&[3.0, 1.0, 0.0], &[0.0, 2.0, 3.0], &[4.0, 0.0, 0.0]],
            &[&[3.0, 1.0, 4.0], &[0.0, 2.0, 2.0], &[1.0, 0.0, 2.0]],
        ])
    }

    #[test]
    fn method_names_round_trip() {
        for m in MpMethod::ALL {
            assert_eq!(m.name().parse::<MpMethod>().unwrap(), *m);
        }
        assert_eq!(
            "corenil".parse::<DrazinMethod>().unwrap(),
            DrazinMethod::CoreNilpotent
        );
        assert_eq!(AlongMethod::default(), AlongMethod::SvdOfG);
        assert!("bogus".parse::<AlongMethod>().is_err());
    }

    #[test]
    fn example1_methods_agree() {
        let ctx = TransformContext::new(4);
        let a = example1();
        let base = mp_inverse(&a, &ctx, MpMethod::Slicewise).unwrap();
        assert!(base.passed(), "{:?}", base.residuals);
        for &m in MpMethod::ALL {
            let r = mp_inverse(&a, &ctx, m).unwrap();
            assert!(r.passed(), "{m}: {:?}", r.residuals);
            assert!(r.x.approx_eq(&base.x, 1e-6), "{m}");
        }
    }

    #[test]
    fn mp_trivial_cases() {
        let ctx = TransformContext::new(3);
        let id = identity_tensor(3, &ctx);
        assert!(mp_inverse(&id, &ctx, MpMethod::Slicewise)
            .unwrap()
            .x
            .approx_eq(&id, 1e-12));
        let zero = Tensor3::zeros((2, 3, 3));
        for &m in &[
            MpMethod::Slicewise,
            MpMethod::Svd,
            MpMethod::Qr,
            MpMethod::FullRank,
            MpMethod::Qdr,
        ] {
            let x = mp_inverse(&zero, &ctx, m).unwrap().x;
            assert_eq!(x.dims(), (3, 2, 3));
            assert!(x.max_abs() < 1e-15, "{m}");
        }
    }

    #[test]
    fn mp_matches_matricization() {
        let ctx = TransformContext::new(3);
        let a = sample((3, 2, 3), 0.0);
        let x = mp_inverse(&a, &ctx, MpMethod::Slicewise).unwrap().x;
        let oracle = ten_extract(&kernels::pinv_matrix(&mat_embed(&a)).unwrap(), x.dims()).unwrap();
        assert!(x.approx_eq(&oracle, 1e-8));
    }

    #[test]
    fn penrose_check_of_zero_candidate() {
        let ctx = TransformContext::new(2);
        let a = sample((2, 3, 2), 1.0);
        let res = check_penrose(&a, &Tensor3::zeros((3, 2, 2)), &ctx).unwrap();
        assert!((res[0].value - a.max_abs()).abs() < 1e-15);
        assert!(!res[0].passed());
        assert!(check_penrose(&a, &a, &ctx).is_err());
    }

    #[test]
    fn index_examples() {
        let ctx = TransformContext::new(2);
        assert_eq!(tensor_index(&identity_tensor(3, &ctx), &ctx).unwrap(), 0);
        let a = ctx
            .from_transform_slices(&[
                Matrix::identity(2),
                Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
            ])
            .unwrap();
        assert_eq!(tensor_index(&a, &ctx).unwrap(), 2);
        assert_eq!(kernels::index_matrix(&mat_embed(&a)).unwrap(), 2);
        assert!(matches!(
            group_inverse(&a, &ctx),
            Err(Error::IndexTooLarge(2))
        ));
    }

    #[test]
    fn drazin_trivial_cases() {
        let ctx = TransformContext::new(2);
        let inv = Tensor3::from_fn((2, 2, 2), |i, j, k| {
            C64::new(if i == j { 3.0 } else { 1.0 + k as f64 }, 0.0)
        });
        let expect = tensor_inverse(&inv, &ctx).unwrap();
        for &m in DrazinMethod::ALL {
            let r = drazin_inverse(&inv, &ctx, m).unwrap();
            assert_eq!(r.index, Some(0));
            assert!(r.x.approx_eq(&expect, 1e-10), "{m}");
        }
        assert!(group_inverse(&inv, &ctx)
            .unwrap()
            .x
            .approx_eq(&expect, 1e-10));

        let nil = ctx
            .from_transform_slices(&[
                Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
                Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]),
            ])
            .unwrap();
        for &m in DrazinMethod::ALL {
            let r = drazin_inverse(&nil, &ctx, m).unwrap();
            assert!(r.x.max_abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn drazin_methods_agree_on_singular_input() {
        let ctx = TransformContext::new(2);
        let left = sample((3, 2, 2), 0.3);
        let right = sample((2, 3, 2), 2.2);
        let a = cprod(&left, &right, &ctx).unwrap();
        let base = drazin_inverse(&a, &ctx, DrazinMethod::PowerFormula).unwrap();
        assert_eq!(base.index, Some(1));
        assert!(base.passed(), "{:?}", base.residuals);
        let oracle =
            ten_extract(&kernels::drazin_matrix(&mat_embed(&a)).unwrap(), a.dims()).unwrap();
        assert!(base.x.approx_eq(&oracle, 1e-7));
        for &m in DrazinMethod::ALL {
            let r = drazin_inverse(&a, &ctx, m).unwrap();
            assert!(r.passed(), "{m}: {:?}", r.residuals);
            assert!(r.x.approx_eq(&base.x, 1e-5), "{m}");
        }
        let g = group_inverse(&a, &ctx).unwrap();
        assert!(g.x.approx_eq(&base.x, 1e-8));
    }

    #[test]
    fn perturbed_drazin_candidate_is_flagged() {
        let ctx = TransformContext::new(2);
        let a = Tensor3::from_fn((2, 2, 2), |i, j, _| {
            C64::new(if i == j { 2.0 } else { 0.5 }, 0.0)
        });
        let r = drazin_inverse(&a, &ctx, DrazinMethod::PowerFormula).unwrap();
        let mut x = r.x.clone();
        x[(0, 0, 0)] += C64::new(1e-3, 0.0);
        let res = check_drazin(&a, &x, 0, &ctx).unwrap();
        // XAX - X is first order in the perturbation with a coefficient near 1
        let xax = res.iter().find(|r| r.label == "XAX=X").unwrap().value;
        assert!(xax > 1e-4 && xax < 1e-2, "{xax}");
    }

    #[test]
    fn along_identities() {
        let ctx = TransformContext::new(2);
        let a = Tensor3::from_fn((3, 3, 2), |i, j, k| {
            C64::new(
                if i == j {
                    4.0
                } else {
                    ((i + 2 * j + k) as f64).cos()
                },
                0.0,
            )
        });
        let id = identity_tensor(3, &ctx);
        let inv = tensor_inverse(&a, &ctx).unwrap();
        for &m in AlongMethod::ALL {
            let r = inverse_along(&a, &id, &ctx, m).unwrap();
            assert!(r.passed(), "{m}: {:?}", r.residuals);
            assert!(r.x.approx_eq(&inv, 1e-8), "{m}");
        }

        let b = sample((3, 2, 2), 5.0);
        let ah = conj_transpose(&b, &ctx).unwrap();
        let mp = mp_inverse(&b, &ctx, MpMethod::Slicewise).unwrap().x;
        for &m in AlongMethod::ALL {
            let r = inverse_along(&b, &ah, &ctx, m).unwrap();
            assert!(r.x.approx_eq(&mp, 1e-6), "{m}");
        }
    }

    #[test]
    fn along_reports_singular_block() {
        let ctx = TransformContext::new(2);
        // A annihilates the range of G in slice 2
        let e11 = Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let g = ctx.from_transform_slices(&[e11.clone(), e11]).unwrap();
        let a = ctx
            .from_transform_slices(&[
                Matrix::identity(2),
                Matrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]),
            ])
            .unwrap();
        for &m in AlongMethod::ALL {
            match inverse_along(&a, &g, &ctx, m) {
                Err(Error::NotInvertibleAlong { slice, .. }) => assert_eq!(slice, 2, "{m}"),
                other => panic!("{m}: {other:?}"),
            }
        }
    }
}
