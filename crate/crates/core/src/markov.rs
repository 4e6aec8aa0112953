//! Higher-order Markov chains described by transition tensors.
//!
//! The limiting behaviour of a chain is captured by the ergodic projector
//! `E = I - A *c A^#` with `A = I - P`, and approached by Cesàro averages,
//! lazy (alpha-blended) powers, or plain powers of `P`.

use std::fmt;
use std::str::FromStr;

use crate::cproduct::{cprod, identity_tensor};
use crate::error::{Error, Result};
use crate::geninv::group_inverse;
use crate::matrix::{Matrix, C64};
use crate::tensor::Tensor3;
use crate::transform::TransformContext;

/// Allowed deviation of a column sum from 1.
pub const COLUMN_SUM_TOL: f64 = 1e-10;
/// Slack on the `[0, 1]` entry bounds and on imaginary parts, for round-off
/// left by the transform.
pub const ENTRY_TOL: f64 = 1e-12;

/// Which slices must be column-stochastic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StochasticMode {
    /// The raw frontal slices.
    Raw,
    /// The transform-domain slices `L(P)^(i)`.
    #[default]
    Transform,
}

impl FromStr for StochasticMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(Self::Raw),
            "transform" => Ok(Self::Transform),
            _ => Err(format!("unknown mode `{s}`, expected raw or transform")),
        }
    }
}

/// A validated transition tensor.
#[derive(Debug, Clone)]
pub struct TransitionTensor {
    p: Tensor3,
    mode: StochasticMode,
}

impl TransitionTensor {
    pub fn tensor(&self) -> &Tensor3 {
        &self.p
    }

    pub fn mode(&self) -> StochasticMode {
        self.mode
    }
}

/// How the limit is approached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// `(I + P + ... + P^(n-1)) / n`.
    Cesaro,
    /// `(alpha I + (1 - alpha) P)^n`.
    AlphaBlend(f64),
    /// `P^n`.
    Power,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Cesaro => write!(f, "cesaro"),
            Estimator::AlphaBlend(a) => write!(f, "alpha({a})"),
            Estimator::Power => write!(f, "power"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErgodicReport {
    pub e: Tensor3,
    /// The estimate at the last checkpoint.
    pub estimate: Tensor3,
    /// `(steps, max|estimate - E|)` at every checkpoint.
    pub errors: Vec<(usize, f64)>,
    pub estimator: Estimator,
    /// For `Power` only: whether some power of `P` up to `n^2` has strictly
    /// positive transform slices. A heuristic, not a proof of regularity.
    pub regular: Option<bool>,
}

fn column_violations(slice: &Matrix, k: usize, what: &str, out: &mut Vec<String>) {
    for j in 0..slice.cols() {
        let sum: C64 = (0..slice.rows()).map(|i| slice[(i, j)]).sum();
        if (sum - C64::new(1.0, 0.0)).norm() > COLUMN_SUM_TOL {
            out.push(format!(
                "{what} {} column {} sums to {}",
                k + 1,
                j + 1,
                sum.re
            ));
        }
    }
}

fn entry_violations(p: &Tensor3, out: &mut Vec<String>) {
    let (n1, n2, n3) = p.dims();
    for k in 0..n3 {
        for i in 0..n1 {
            for j in 0..n2 {
                let v = p[(i, j, k)];
                if v.im.abs() > ENTRY_TOL || v.re < -ENTRY_TOL || v.re > 1.0 + ENTRY_TOL {
                    out.push(format!(
                        "entry ({}, {}, {}) = {v} is outside [0, 1]",
                        i + 1,
                        j + 1,
                        k + 1
                    ));
                }
            }
        }
    }
}

fn square_slices(p: &Tensor3) -> Result<()> {
    if p.n1() != p.n2() {
        return Err(Error::shape(format!(
            "transition tensor needs square slices, got {:?}",
            p.dims()
        )));
    }
    Ok(())
}

/// Checks entries in `[0, 1]` and unit column sums of the raw or transform
/// slices, depending on `mode`.
pub fn validate_transition(
    p: &Tensor3,
    ctx: &TransformContext,
    mode: StochasticMode,
) -> Result<TransitionTensor> {
    square_slices(p)?;
    let mut problems = Vec::new();
    entry_violations(p, &mut problems);
    let (slices, what) = match mode {
        StochasticMode::Raw => (p.slices(), "slice"),
        StochasticMode::Transform => (ctx.forward_slices(p)?, "transform slice"),
    };
    for (k, s) in slices.iter().enumerate() {
        column_violations(s, k, what, &mut problems);
    }
    if !problems.is_empty() {
        return Err(Error::NotStochastic(problems.join("; ")));
    }
    Ok(TransitionTensor { p: p.clone(), mode })
}

/// Builds `P = L^{-1}(slices)` from column-stochastic transform slices and
/// rejects the result if a raw entry leaves `[0, 1]`.
pub fn transition_from_transform_slices(
    slices: &[Matrix],
    ctx: &TransformContext,
) -> Result<TransitionTensor> {
    let mut problems = Vec::new();
    for (k, s) in slices.iter().enumerate() {
        column_violations(s, k, "input slice", &mut problems);
    }
    if !problems.is_empty() {
        return Err(Error::NotStochastic(problems.join("; ")));
    }
    let p = ctx.from_transform_slices(slices)?;
    validate_transition(&p, ctx, StochasticMode::Transform)
}

/// `E = I - A *c A^#` with `A = I - P`.
pub fn ergodic_projector(t: &TransitionTensor, ctx: &TransformContext) -> Result<Tensor3> {
    let id = identity_tensor(t.p.n1(), ctx);
    let a = &id - &t.p;
    let a_sharp = group_inverse(&a, ctx)?.x;
    Ok(&id - &cprod(&a, &a_sharp, ctx)?)
}

/// Doubling checkpoints `1, 2, 4, ...` below `steps`, then `steps` itself.
pub fn default_checkpoints(steps: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |n| n.checked_mul(2))
        .take_while(|&n| n < steps)
        .collect();
    if steps > 0 {
        out.push(steps);
    }
    out
}

pub fn limit_estimate(
    t: &TransitionTensor,
    ctx: &TransformContext,
    estimator: Estimator,
    steps: usize,
) -> Result<ErgodicReport> {
    limit_estimate_at(t, ctx, estimator, &default_checkpoints(steps))
}

/// Runs the estimator and records its error against `E` at each checkpoint.
/// Checkpoints must be positive and strictly increasing.
pub fn limit_estimate_at(
    t: &TransitionTensor,
    ctx: &TransformContext,
    estimator: Estimator,
    checkpoints: &[usize],
) -> Result<ErgodicReport> {
    if let Estimator::AlphaBlend(alpha) = estimator {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
    }
    let valid = !checkpoints.is_empty()
        && checkpoints[0] > 0
        && checkpoints.windows(2).all(|w| w[0] < w[1]);
    if !valid {
        return Err(Error::shape(format!(
            "checkpoints must be positive and increasing, got {checkpoints:?}"
        )));
    }

    let e = ergodic_projector(t, ctx)?;
    let n = t.p.n1();
    let id = Matrix::identity(n);
    let p_slices = ctx.forward_slices(&t.p)?;
    let step: Vec<Matrix> = match estimator {
        Estimator::AlphaBlend(alpha) => p_slices
            .iter()
            .map(|p| &id.scale(C64::new(alpha, 0.0)) + &p.scale(C64::new(1.0 - alpha, 0.0)))
            .collect(),
        _ => p_slices,
    };

    let mut power = vec![id.clone(); step.len()];
    let mut sum = vec![Matrix::zeros(n, n); step.len()];
    let mut errors = Vec::with_capacity(checkpoints.len());
    let mut estimate = e.clone();
    let mut next = checkpoints.iter().peekable();
    let last = *checkpoints.last().unwrap();
    for count in 1..=last {
        // after this iteration `power` holds step^count and `sum` holds
        // I + P + ... + P^(count-1)
        for ((pw, s), m) in power.iter_mut().zip(sum.iter_mut()).zip(&step) {
            if estimator == Estimator::Cesaro {
                *s = &*s + pw;
            }
            *pw = &*pw * m;
        }
        if next.peek() == Some(&&count) {
            next.next();
            let slices: Vec<Matrix> = match estimator {
                Estimator::Cesaro => sum
                    .iter()
                    .map(|s| s.scale(C64::new(1.0 / count as f64, 0.0)))
                    .collect(),
                _ => power.clone(),
            };
            estimate = ctx.from_transform_slices(&slices)?;
            errors.push((count, estimate.max_abs_diff(&e)));
        }
    }

    let regular = match estimator {
        Estimator::Power => Some(looks_regular(t, ctx)?),
        _ => None,
    };
    Ok(ErgodicReport {
        e,
        estimate,
        errors,
        estimator,
        regular,
    })
}

/// True if for some `k <= n^2` every entry of every transform slice of `P^k`
/// has a strictly positive real part.
pub fn looks_regular(t: &TransitionTensor, ctx: &TransformContext) -> Result<bool> {
    let n = t.p.n1();
    let slices = ctx.forward_slices(&t.p)?;
    let mut power = slices.clone();
    for _ in 0..(n * n).max(1) {
        if power.iter().all(|m| m.data().iter().all(|v| v.re > 0.0)) {
            return Ok(true);
        }
        power = power.iter().zip(&slices).map(|(a, b)| a * b).collect();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cproduct::cprod_chain;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn half() -> Tensor3 {
        Tensor3::from_real_slices(&[&[&[0.5, 0.5], &[0.5, 0.5]]])
    }

    fn random_stochastic(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let mut m = Matrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(0.05..1.0), 0.0));
        for j in 0..n {
            let total: f64 = (0..n).map(|i| m[(i, j)].re).sum();
            for i in 0..n {
                m[(i, j)] /= total;
            }
        }
        m
    }

    fn random_chain(n: usize, n3: usize, seed: u64) -> (TransformContext, TransitionTensor) {
        let ctx = TransformContext::new(n3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = random_stochastic(n, &mut rng);
        let t = transition_from_transform_slices(&vec![p1; n3], &ctx).unwrap();
        (ctx, t)
    }

    #[test]
    fn two_state_chain() {
        let ctx = TransformContext::new(1);
        for mode in [StochasticMode::Raw, StochasticMode::Transform] {
            validate_transition(&half(), &ctx, mode).unwrap();
        }
        let t = validate_transition(&half(), &ctx, StochasticMode::Transform).unwrap();
        assert!(ergodic_projector(&t, &ctx)
            .unwrap()
            .approx_eq(&half(), 1e-12));
        let report = limit_estimate(&t, &ctx, Estimator::Power, 1).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert!(report.errors[0].1 < 1e-12);
        assert_eq!(report.regular, Some(true));
    }

    #[test]
    fn rejects_bad_tensors() {
        let ctx = TransformContext::new(1);
        let bad = Tensor3::from_real_slices(&[&[&[1.5, 0.5], &[-0.5, 0.5]]]);
        match validate_transition(&bad, &ctx, StochasticMode::Raw) {
            Err(Error::NotStochastic(msg)) => assert!(msg.contains("(2, 1, 1)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let sums = Tensor3::from_real_slices(&[&[&[0.5, 0.5], &[0.4, 0.5]]]);
        assert!(matches!(
            validate_transition(&sums, &ctx, StochasticMode::Raw),
            Err(Error::NotStochastic(_))
        ));
    }

    #[test]
    fn raw_and_transform_modes_differ() {
        // raw slices both stochastic: transform slice 1 has column sums 2
        let ctx = TransformContext::new(2);
        let p =
            Tensor3::from_real_slices(&[&[&[0.5, 0.5], &[0.5, 0.5]], &[&[1.0, 0.0], &[0.0, 1.0]]]);
        validate_transition(&p, &ctx, StochasticMode::Raw).unwrap();
        assert!(validate_transition(&p, &ctx, StochasticMode::Transform).is_err());
    }

    #[test]
    fn transform_constructor() {
        let ctx = TransformContext::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p1 = random_stochastic(3, &mut rng);
        let t =
            transition_from_transform_slices(&[p1.clone(), p1.clone(), p1.clone()], &ctx).unwrap();
        assert_eq!(t.mode(), StochasticMode::Transform);
        let p2 = random_stochastic(3, &mut rng);
        assert!(matches!(
            transition_from_transform_slices(&[p1.clone(), p2, p1], &ctx),
            Err(Error::NotStochastic(_))
        ));
    }

    #[test]
    fn identity_chain() {
        let ctx = TransformContext::new(2);
        let t = transition_from_transform_slices(&[Matrix::identity(3), Matrix::identity(3)], &ctx)
            .unwrap();
        let e = ergodic_projector(&t, &ctx).unwrap();
        assert!(e.approx_eq(&identity_tensor(3, &ctx), 1e-12));
    }

    #[test]
    fn projector_identities() {
        let (ctx, t) = random_chain(3, 2, 11);
        let e = ergodic_projector(&t, &ctx).unwrap();
        let a = &identity_tensor(3, &ctx) - t.tensor();
        assert!(cprod(&e, &e, &ctx).unwrap().approx_eq(&e, 1e-7));
        assert!(cprod(&a, &e, &ctx).unwrap().max_abs() < 1e-7);
        assert!(cprod(&e, &a, &ctx).unwrap().max_abs() < 1e-7);
        // E is the limit of P^n for a positive chain
        let p50 = cprod_chain(&vec![t.tensor(); 50], &ctx).unwrap();
        assert!(p50.approx_eq(&e, 1e-10));
    }

    #[test]
    fn cesaro_and_blend_converge() {
        let (ctx, t) = random_chain(3, 3, 5);
        let report =
            limit_estimate_at(&t, &ctx, Estimator::Cesaro, &[250, 500, 1000, 2000]).unwrap();
        let err: Vec<f64> = report.errors.iter().map(|e| e.1).collect();
        assert!(err[3] <= 1e-2);
        assert!(err[2] <= 0.6 * err[1]);
        let blend = limit_estimate(&t, &ctx, Estimator::AlphaBlend(0.5), 200).unwrap();
        assert_eq!(blend.errors.last().unwrap().0, 200);
        assert!(blend.errors.last().unwrap().1 <= 1e-6);
        assert_eq!(blend.regular, None);
    }

    #[test]
    fn alpha_must_be_open_unit_interval() {
        let (ctx, t) = random_chain(2, 2, 1);
        for alpha in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(
                limit_estimate(&t, &ctx, Estimator::AlphaBlend(alpha), 10),
                Err(Error::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn checkpoints() {
        assert_eq!(default_checkpoints(1), vec![1]);
        assert_eq!(default_checkpoints(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(default_checkpoints(8), vec![1, 2, 4, 8]);
        let (ctx, t) = random_chain(2, 1, 2);
        assert!(limit_estimate_at(&t, &ctx, Estimator::Power, &[3, 2]).is_err());
    }

    #[test]
    fn periodic_chain_is_not_regular() {
        let ctx = TransformContext::new(1);
        let flip = Tensor3::from_real_slices(&[&[&[0.0, 1.0], &[1.0, 0.0]]]);
        let t = validate_transition(&flip, &ctx, StochasticMode::Raw).unwrap();
        assert!(!looks_regular(&t, &ctx).unwrap());
        // Cesàro averages still converge to E = 1/2
        let report = limit_estimate(&t, &ctx, Estimator::Cesaro, 1000).unwrap();
        assert!(report.errors.last().unwrap().1 <= 1e-3);
    }
}
