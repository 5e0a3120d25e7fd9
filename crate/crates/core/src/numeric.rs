//! High-precision evaluation of J, Δ and user forms at points of ℋ, the
//! numeric determination of α₃, and zero location for certificate roots.
//!
//! Evaluation runs over the cusp parameter q̃(τ) = α₃·e^{2πiτ/h₃}. The
//! truncated series is summed by Horner over balls; the dropped tail is
//! bounded by an empirical geometric envelope |cₖ| ≤ C·R̂⁻ᵏ whose radius R̂
//! comes from a coefficient ratio test over the computed terms, and the
//! reliable disk is ρ_max = 0.7·R̂. Evaluations outside ρ_max are refused.
//!
//! α₃ is pinned by the normalization J(ζ₁) = 1: Newton on the series from a
//! truncated-polynomial seed, then α₃ = q̃*/e^{2πiζ₁/h₃}. For signature
//! (∞,∞,∞) the vertices sit on ∂ℋ, |q̃(ζ₁)| equals the full convergence
//! radius, and the in-disk solve does not exist; the error says so rather
//! than working around it.

use crate::discriminant::{delta_expansion, DiscriminantError, DiscriminantExpansion};
use crate::field::{Ball, CoefficientField, ComplexBalls, Rationals};
use crate::group::{derive_constants, GroupConstants, Signature, VertexOrder};
use crate::hauptmodul::{hauptmodul_expansion, HauptmodulError};
use crate::roots::{aberth_roots, RootError};
use crate::series::{SeriesError, TruncatedSeries};
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("alpha3 came out non-real ({0}); bug or insufficient order")]
    NonrealAlpha(String),
    #[error("outside the reliable evaluation disk: {0}")]
    OutsideReliableDisk(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    Hauptmodul(#[from] HauptmodulError),
    #[error(transparent)]
    Discriminant(#[from] DiscriminantError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Empirical geometric envelope for the dropped tail of a truncated series:
/// |cₖ| ≤ C·R̂⁻ᵏ for k at and beyond the truncation order.
#[derive(Clone, Debug)]
pub struct TailModel {
    /// ln R̂ (estimated convergence radius).
    pub log_radius: Float,
    /// ln C.
    pub log_c: Float,
    /// First unknown exponent.
    pub from_order: i64,
}

impl TailModel {
    /// Upper bound on |Σ_{k≥N} cₖ rᵏ| ≤ C(r/R̂)^N/(1 − r/R̂); `None` if r ≥ R̂.
    pub fn bound(&self, log_r: &Float) -> Option<Float> {
        let ratio_log = Float::with_val(64, log_r - &self.log_radius);
        if !ratio_log.is_sign_negative() {
            return None;
        }
        let ratio = Float::with_val(64, ratio_log.exp_ref());
        let denom = Float::with_val(64, 1u32 - &ratio);
        let mut lt = Float::with_val(64, &self.log_c)
            + Float::with_val(64, &ratio_log * Float::with_val(64, self.from_order));
        lt -= denom.ln();
        let mut b = Float::with_val(64, lt.exp_ref());
        b *= Float::with_val(64, 1.1); // slack on the envelope itself
        Some(b)
    }
}

fn log_abs_rational(c: &Rational) -> Option<Float> {
    if c.cmp0() == std::cmp::Ordering::Equal {
        return None;
    }
    let f = Float::with_val(64, c).abs();
    Some(Float::with_val(64, f.ln_ref()))
}

/// Ratio-test tail model from the regular part (k ≥ 0) of a rational
/// series. `fallback_log_radius` substitutes the radius estimate when the
/// series has too few usable coefficients of its own.
pub fn tail_model(
    series: &TruncatedSeries<Rationals>,
    fallback_log_radius: Option<&Float>,
) -> Option<TailModel> {
    let order = series.order();
    let mut logs: Vec<(i64, Float)> = Vec::new();
    for k in series.valuation().max(0)..order {
        if let Some(c) = series.coeff(k) {
            if let Some(l) = log_abs_rational(&c) {
                logs.push((k, l));
            }
        }
    }
    let log_radius = if logs.len() >= 10 {
        // Slope over the last 40% of nonzero terms. The subexponential
        // e^{c√k} factor in automorphic coefficients makes this an
        // underestimate of the true radius — the conservative direction.
        let start = logs.len() - (logs.len() * 2 / 5).max(2);
        let (k0, l0) = &logs[start];
        let (k1, l1) = logs.last().unwrap();
        if k1 == k0 {
            return None;
        }
        Float::with_val(64, l0 - l1) / Float::with_val(64, k1 - k0)
    } else {
        fallback_log_radius?.clone()
    };
    // C = max |c_k| R̂^k over every computed term
    let mut log_c = Float::with_val(64, -1e30);
    for (k, l) in &logs {
        let t = Float::with_val(64, l + Float::with_val(64, &log_radius * Float::with_val(64, *k)));
        if t > log_c {
            log_c = t;
        }
    }
    Some(TailModel { log_radius, log_c, from_order: order })
}

/// α₃ with an error bound; positive real by construction.
#[derive(Clone, Debug)]
pub struct Alpha3 {
    pub value: Float,
    pub error: Float,
}

impl Alpha3 {
    pub fn as_ball(&self, prec: u32) -> Ball {
        Ball::new(Complex::with_val(prec, (&self.value, 0)), self.error.clone())
    }
}

/// Precomputed state for numeric evaluation over one signature.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub constants: GroupConstants,
    pub j: TruncatedSeries<Rationals>,
    pub delta: DiscriminantExpansion,
    pub prec: u32,
    pub series_order: i64,
    pub j_tail: TailModel,
    pub delta_tail: TailModel,
    /// ln of the estimated convergence radius of the q̃-disk.
    pub log_radius: Float,
    /// ln ρ_max = ln(0.7·R̂).
    pub log_rho_max: Float,
}

/// Builds the evaluation context: constants, J and Δ expansions, tail
/// models, the reliable-disk bound, and α₃.
pub fn eval_context(sig: &Signature, order: i64, prec: u32) -> Result<EvalContext, NumericError> {
    let mut constants = derive_constants(sig, prec);
    let j = hauptmodul_expansion(sig, order)?.series;
    let delta = delta_expansion(sig, order.max(sig.n_delta() as i64 + 2))?;
    let j_tail = tail_model(&j, None).ok_or_else(|| {
        NumericError::PrecisionExhausted("too few coefficients for a tail model".into())
    })?;
    let delta_tail = tail_model(&delta.series, Some(&j_tail.log_radius)).ok_or_else(|| {
        NumericError::PrecisionExhausted("too few coefficients for a delta tail model".into())
    })?;
    let log_radius = j_tail.log_radius.clone();
    let log_rho_max = Float::with_val(64, &log_radius + Float::with_val(64, (0.7f64).ln()));
    let alpha3 = compute_alpha3_from(&j, &constants, prec)?;
    constants.alpha3 = Some(alpha3);
    Ok(EvalContext {
        constants,
        j,
        delta,
        prec,
        series_order: order,
        j_tail,
        delta_tail,
        log_radius,
        log_rho_max,
    })
}

impl EvalContext {
    pub fn alpha3(&self) -> &Alpha3 {
        self.constants.alpha3.as_ref().expect("eval context always carries alpha3")
    }

    /// The estimated reliable-disk radius ρ_max (q̃ units).
    pub fn rho_max(&self) -> Float {
        Float::with_val(64, self.log_rho_max.exp_ref())
    }

    /// q̃(τ) = α₃·e^{2πiτ/h₃} as a ball.
    pub fn qtilde(&self, tau: &Complex) -> Result<Ball, NumericError> {
        let prec = self.prec;
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let two_pi_i = Complex::with_val(prec, (0, Float::with_val(prec, 2 * &pi)));
        let num = Ball::from_rounded(Complex::with_val(prec, tau * &two_pi_i));
        let h3 = Ball::from_rounded(Complex::with_val(prec, (&self.constants.h3, 0)));
        let arg = num
            .div(&h3)
            .ok_or_else(|| NumericError::PrecisionExhausted("h3 division".into()))?;
        let e = arg
            .exp()
            .ok_or_else(|| NumericError::PrecisionExhausted("exp argument too wide".into()))?;
        Ok(self.alpha3().as_ball(prec).mul(&e))
    }

    fn check_in_disk(&self, q: &Ball, what: &str) -> Result<(), NumericError> {
        let abs = q.abs_upper();
        if abs.is_zero() {
            return Ok(());
        }
        let log_abs = Float::with_val(64, abs.ln_ref());
        if log_abs > self.log_rho_max {
            return Err(NumericError::OutsideReliableDisk(format!(
                "{what}: |qtilde| = {:.4e} exceeds rho_max = {:.4e}",
                abs.to_f64(),
                self.rho_max().to_f64()
            )));
        }
        Ok(())
    }
}

/// Horner sum of a rational series at a ball point, tail bound folded into
/// the radius. Negative valuations handled via q̃⁻¹ powers.
fn eval_rational_series(
    series: &TruncatedSeries<Rationals>,
    tail: &TailModel,
    q: &Ball,
    prec: u32,
) -> Result<Ball, NumericError> {
    let field = ComplexBalls::new(prec);
    let val = series.valuation().min(0);
    let order = series.order();
    let mut acc = Ball::zero(prec);
    for k in (val..order).rev() {
        acc = acc.mul(q);
        if let Some(c) = series.coeff(k) {
            if c.cmp0() != std::cmp::Ordering::Equal {
                acc = acc.add(&field.from_rational(&c));
            }
        }
    }
    if val < 0 {
        let qinv = q
            .inv()
            .ok_or_else(|| NumericError::OutsideReliableDisk("qtilde ball contains zero".into()))?;
        acc = acc.mul(&qinv.powi((-val) as u64));
    }
    let abs = q.abs_upper();
    let log_r = Float::with_val(64, abs.ln_ref());
    let bound = tail.bound(&log_r).ok_or_else(|| {
        NumericError::OutsideReliableDisk("point at or beyond the estimated radius".into())
    })?;
    Ok(acc.widen(&bound))
}

fn eval_ball_series(
    series: &TruncatedSeries<ComplexBalls>,
    tail: &TailModel,
    q: &Ball,
    prec: u32,
) -> Result<Ball, NumericError> {
    let val = series.valuation().min(0);
    let order = series.order();
    let mut acc = Ball::zero(prec);
    for k in (val..order).rev() {
        acc = acc.mul(q);
        if let Some(c) = series.coeff(k) {
            acc = acc.add(&c.promote(prec));
        }
    }
    if val < 0 {
        let qinv = q
            .inv()
            .ok_or_else(|| NumericError::OutsideReliableDisk("qtilde ball contains zero".into()))?;
        acc = acc.mul(&qinv.powi((-val) as u64));
    }
    let abs = q.abs_upper();
    let log_r = Float::with_val(64, abs.ln_ref());
    let bound = tail.bound(&log_r).ok_or_else(|| {
        NumericError::OutsideReliableDisk("point at or beyond the estimated radius".into())
    })?;
    Ok(acc.widen(&bound))
}

fn require_upper_half(tau: &Complex) -> Result<(), NumericError> {
    if !tau.imag().is_sign_positive() || tau.imag().is_zero() {
        return Err(NumericError::OutsideReliableDisk(format!(
            "tau = {tau} is not in the open upper half plane"
        )));
    }
    Ok(())
}

/// J_Γ(τ) with error bound.
pub fn eval_j(ctx: &EvalContext, tau: &Complex) -> Result<Ball, NumericError> {
    require_upper_half(tau)?;
    let q = ctx.qtilde(tau)?;
    ctx.check_in_disk(&q, "eval_j")?;
    eval_rational_series(&ctx.j, &ctx.j_tail, &q, ctx.prec)
}

/// Δ_{2L}(τ) with error bound.
pub fn eval_delta(ctx: &EvalContext, tau: &Complex) -> Result<Ball, NumericError> {
    require_upper_half(tau)?;
    let q = ctx.qtilde(tau)?;
    ctx.check_in_disk(&q, "eval_delta")?;
    eval_rational_series(&ctx.delta.series, &ctx.delta_tail, &q, ctx.prec)
}

/// A user form's series, exact or numeric.
pub enum FormSeries<'a> {
    Rational(&'a TruncatedSeries<Rationals>),
    Ball(&'a TruncatedSeries<ComplexBalls>),
}

/// Evaluates a user form at τ. The tail model is estimated from the form's
/// own coefficients, borrowing the J radius when the form is short (same
/// natural boundary).
pub fn eval_form(ctx: &EvalContext, form: FormSeries<'_>, tau: &Complex) -> Result<Ball, NumericError> {
    require_upper_half(tau)?;
    let q = ctx.qtilde(tau)?;
    ctx.check_in_disk(&q, "eval_form")?;
    match form {
        FormSeries::Rational(s) => {
            let tail = tail_model(s, Some(&ctx.j_tail.log_radius)).ok_or_else(|| {
                NumericError::PrecisionExhausted("form too short for a tail model".into())
            })?;
            eval_rational_series(s, &tail, &q, ctx.prec)
        }
        FormSeries::Ball(s) => {
            let log_radius = ctx.j_tail.log_radius.clone();
            let mut log_c = Float::with_val(64, -1e30);
            for k in s.valuation().max(0)..s.order() {
                if let Some(c) = s.coeff(k) {
                    let a = c.abs_upper();
                    if !a.is_zero() {
                        let t = Float::with_val(64, a.ln_ref())
                            + Float::with_val(64, &log_radius * Float::with_val(64, k));
                        let t = Float::with_val(64, t);
                        if t > log_c {
                            log_c = t;
                        }
                    }
                }
            }
            let tail = TailModel { log_radius, log_c, from_order: s.order() };
            eval_ball_series(s, &tail, &q, ctx.prec)
        }
    }
}

// ---------------------------------------------------------------------------
// series evaluation at complex midpoints (Newton internals)
// ---------------------------------------------------------------------------

struct SeriesEvaluator {
    val: i64,
    coeffs: Vec<Complex>,
    prec: u32,
}

impl SeriesEvaluator {
    fn new(series: &TruncatedSeries<Rationals>, prec: u32) -> Self {
        let val = series.valuation();
        let coeffs = (val..series.order())
            .map(|k| Complex::with_val(prec, series.coeff(k).unwrap()))
            .collect();
        SeriesEvaluator { val, coeffs, prec }
    }

    /// (value, derivative) at a midpoint.
    fn eval(&self, q: &Complex) -> (Complex, Complex) {
        let prec = self.prec;
        let mut f = Complex::new(prec);
        let mut df = Complex::new(prec);
        // regular part
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let k = self.val + i as i64;
            if k < 0 {
                continue;
            }
            f *= q;
            f += c;
            if k >= 1 {
                df *= q;
                df += Complex::with_val(prec, c * Complex::with_val(prec, k));
            }
        }
        // principal part
        if self.val < 0 {
            let qinv = Complex::with_val(prec, q.clone().recip());
            for (i, c) in self.coeffs.iter().enumerate() {
                let k = self.val + i as i64;
                if k >= 0 {
                    break;
                }
                let qk = qinv.clone().pow((-k) as u32);
                f += Complex::with_val(prec, c * &qk);
                let d = Complex::with_val(prec, c * &qk)
                    * Complex::with_val(prec, &qinv * Complex::with_val(prec, k));
                df += d;
            }
        }
        (f, df)
    }
}

fn series_newton_solve(
    evaluator: &SeriesEvaluator,
    target: &Complex,
    seed: Complex,
    prec: u32,
    log_rho_max: Option<&Float>,
) -> Result<Complex, NumericError> {
    let mut q = seed;
    let eps = Float::with_val(64, Float::i_exp(1, -(prec as i32) + 24));
    let mut last_step = Float::with_val(64, f64::MAX);
    let mut bad_steps = 0u32;
    for _ in 0..400 {
        let (f, df) = evaluator.eval(&q);
        let resid = Complex::with_val(prec, &f - target);
        if df.is_zero() {
            return Err(NumericError::NewtonDivergence("derivative vanished".into()));
        }
        let step = Complex::with_val(prec, &resid / &df);
        let step_abs = Float::with_val(64, step.abs_ref());
        q -= &step;
        if let Some(rho) = log_rho_max {
            let qa = Float::with_val(64, q.abs_ref());
            if !qa.is_zero() {
                let over = Float::with_val(64, qa.ln_ref()) - rho;
                if Float::with_val(64, over) > 0.7f64 {
                    return Err(NumericError::OutsideReliableDisk(
                        "newton iterate escaped the reliable disk".into(),
                    ));
                }
            }
        }
        let scale = Float::with_val(64, q.abs_ref()) + 1u32;
        let rel = Float::with_val(64, &step_abs / &scale);
        if rel < eps {
            return Ok(q);
        }
        if rel > last_step {
            bad_steps += 1;
            if bad_steps > 16 {
                return Err(NumericError::NewtonDivergence(
                    "step size failed to contract".into(),
                ));
            }
        } else {
            bad_steps = 0;
        }
        last_step = rel;
    }
    Err(NumericError::NewtonDivergence("iteration cap reached".into()))
}

/// Solves series-J(q̃*) = 1 and returns α₃ = q̃*/e^{2πiζ₁/h₃}, which must be
/// real positive within its error bound.
pub fn compute_alpha3(sig: &Signature, order: i64, prec: u32) -> Result<Alpha3, NumericError> {
    let j = hauptmodul_expansion(sig, order)?.series;
    let constants = derive_constants(sig, prec);
    compute_alpha3_from(&j, &constants, prec)
}

pub(crate) fn compute_alpha3_from(
    j: &TruncatedSeries<Rationals>,
    constants: &GroupConstants,
    prec: u32,
) -> Result<Alpha3, NumericError> {
    let sig = constants.signature;
    if sig.p() == VertexOrder::Infinity {
        return Err(NumericError::OutsideReliableDisk(
            "signature (inf,inf,inf): zeta1 lies on the real axis, so |qtilde(zeta1)| \
             equals the convergence radius of the expansion and the normalization \
             J(zeta1) = 1 cannot be solved inside the disk"
                .into(),
        ));
    }

    // Seed: roots of the truncated polynomial q·(J_trunc(q) − 1), picked by
    // the argument a positive real α₃ forces: arg q̃* = −2π cos(π/p)/h₃.
    let seed_prec = 192u32;
    let deg = 12i64.min(j.order() - 1);
    let mut poly: Vec<Ball> = vec![Ball::one(seed_prec)];
    for k in 0..deg {
        let mut c = j.coeff(k).unwrap_or_default();
        if k == 0 {
            c -= Rational::from(1);
        }
        poly.push(Ball::from_rational(seed_prec, &c));
    }
    let candidates = aberth_roots(&poly, seed_prec)?;

    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let target_arg = {
        let cos_p = match sig.p() {
            VertexOrder::Finite(p) => Float::with_val(prec, &pi / p).cos(),
            VertexOrder::Infinity => unreachable!(),
        };
        let mut a = Float::with_val(prec, -2 * &pi) * &cos_p;
        a /= &constants.h3;
        let two_pi = Float::with_val(prec, 2 * &pi);
        while a <= Float::with_val(prec, -&pi) {
            a += &two_pi;
        }
        while a > pi {
            a -= &two_pi;
        }
        Float::with_val(64, a)
    };

    let mut best: Option<(Float, Complex)> = None;
    for c in &candidates {
        let m = c.mid();
        let abs = Float::with_val(64, m.abs_ref());
        if abs.is_zero() {
            continue;
        }
        let arg = Float::with_val(64, m.clone().arg().real());
        let mut d = Float::with_val(64, &arg - &target_arg).abs();
        let two_pi = Float::with_val(64, rug::float::Constant::Pi) * 2u32;
        let reflected = Float::with_val(64, &two_pi - &d);
        if reflected < d {
            d = reflected;
        }
        // prefer matching argument, then small modulus
        let score = Float::with_val(64, &d * 100u32) + Float::with_val(64, abs.ln_ref());
        if best.as_ref().map(|(s, _)| score < *s).unwrap_or(true) {
            best = Some((score, Complex::with_val(prec, m)));
        }
    }
    let seed = best
        .ok_or_else(|| NumericError::NewtonDivergence("no usable seed root".into()))?
        .1;

    // J − 1 vanishes to order exactly p at the elliptic point ζ₁, so plain
    // Newton on J(q̃) = 1 is only linearly convergent there. The (p−1)-th
    // derivative has a simple zero at q̃*: solve that instead, then check
    // J(q̃*) is actually near 1.
    let p_order = match sig.p() {
        VertexOrder::Finite(p) => p as i64,
        VertexOrder::Infinity => unreachable!(),
    };
    let mut dseries = j.clone();
    for _ in 0..(p_order - 1) {
        dseries = dseries.derivative();
    }
    let evaluator = SeriesEvaluator::new(&dseries, prec);
    let zero_target = Complex::new(prec);
    let qstar = series_newton_solve(&evaluator, &zero_target, seed, prec, None)?;

    // sanity: the critical point we found is the J = 1 one
    let tail = tail_model(j, None).ok_or_else(|| {
        NumericError::PrecisionExhausted("tail model unavailable for alpha3".into())
    })?;
    let jval = eval_rational_series(j, &tail, &Ball::exact(qstar.clone()), prec)?;
    let j_dist = jval.sub(&Ball::one(prec)).abs_upper();
    if j_dist.to_f64() > 1e-6 {
        return Err(NumericError::NewtonDivergence(format!(
            "critical point found has J = 1 + {:.3e}; wrong branch",
            j_dist.to_f64()
        )));
    }

    // simple-root error bound for the derivative equation:
    // |q̃* error| ≤ (|J^{(p−1)}(q̃*)| + tail) / |J^{(p)}(q̃*)|
    let dtail = tail_model(&dseries, Some(&tail.log_radius)).ok_or_else(|| {
        NumericError::PrecisionExhausted("tail model unavailable for alpha3 derivative".into())
    })?;
    let dval = eval_rational_series(&dseries, &dtail, &Ball::exact(qstar.clone()), prec)?;
    let resid = dval.abs_upper();
    let dd = SeriesEvaluator::new(&dseries.derivative(), prec);
    let (ddval, _) = dd.eval(&qstar);
    let dd_abs = Float::with_val(64, ddval.abs_ref());
    if dd_abs.is_zero() {
        return Err(NumericError::NewtonDivergence(
            "second-order derivative vanished at the solution".into(),
        ));
    }
    let err = Float::with_val(64, &resid / &dd_abs) * 4u32;
    let qstar_ball = Ball::new(qstar, err);

    // α₃ = q̃* / e^{2πiζ₁/h₃}
    let two_pi = Float::with_val(prec, 2 * Float::with_val(prec, rug::float::Constant::Pi));
    let two_pi_i_zeta = Ball::from_rounded(Complex::with_val(
        prec,
        &constants.zeta1 * Complex::with_val(prec, (0, &two_pi)),
    ));
    let h3 = Ball::from_rounded(Complex::with_val(prec, (&constants.h3, 0)));
    let e = two_pi_i_zeta
        .div(&h3)
        .and_then(|a| a.exp())
        .ok_or_else(|| NumericError::PrecisionExhausted("exp(2 pi i zeta1/h3)".into()))?;
    let alpha = qstar_ball
        .div(&e)
        .ok_or_else(|| NumericError::PrecisionExhausted("alpha3 division".into()))?;

    let im = Float::with_val(64, alpha.mid().imag()).abs();
    let tol = Float::with_val(64, alpha.rad() * 16u32)
        + Float::with_val(64, Float::i_exp(1, -(prec as i32) + 32));
    if im > tol {
        return Err(NumericError::NonrealAlpha(format!(
            "Im(alpha3) = {:.3e} exceeds tolerance {:.3e}",
            im.to_f64(),
            tol.to_f64()
        )));
    }
    let value = Float::with_val(prec, alpha.mid().real());
    if !value.is_sign_positive() {
        return Err(NumericError::NonrealAlpha(format!(
            "alpha3 = {:.3e} is not positive",
            value.to_f64()
        )));
    }
    let error = Float::with_val(64, alpha.rad() + &im);
    Ok(Alpha3 { value, error })
}

// ---------------------------------------------------------------------------
// zero location
// ---------------------------------------------------------------------------

/// A located zero representative in the period strip |Re τ| ≤ h₃/2.
#[derive(Clone, Debug)]
pub struct LocatedZero {
    pub tau: Ball,
    pub qtilde: Ball,
    /// |J(τ*) − r| upper bound from the verification pass.
    pub residual: Float,
}

/// Distance guard around the elliptic values 0 and 1, where J′ vanishes and
/// series Newton breaks down.
const ELLIPTIC_GUARD: f64 = 0.02;

/// Finds τ* with J(τ*) = r by Newton on the series from seed q̃₀ = 1/r, then
/// τ* = (h₃/2πi)·log(q̃*/α₃) with the branch chosen in the period strip.
///
/// Exact roots at 0 and 1 are the elliptic vertices and belong to the
/// caller; roots too close to them are refused.
pub fn locate_zero(ctx: &EvalContext, root: &Ball) -> Result<LocatedZero, NumericError> {
    let prec = ctx.prec;
    let r = Complex::with_val(prec, root.mid());
    let r_abs = Float::with_val(64, r.abs_ref());
    let dist1 = Float::with_val(
        64,
        Complex::with_val(64, &r - Complex::with_val(64, 1)).abs_ref(),
    );
    if r_abs < ELLIPTIC_GUARD || dist1 < ELLIPTIC_GUARD {
        return Err(NumericError::OutsideReliableDisk(format!(
            "root {:.4}+{:.4}i is too close to the elliptic values 0/1 for series inversion",
            Float::with_val(64, r.real()).to_f64(),
            Float::with_val(64, r.imag()).to_f64()
        )));
    }
    let seed = Complex::with_val(prec, r.clone().recip());
    let seed_abs = Float::with_val(64, seed.abs_ref());
    if Float::with_val(64, seed_abs.ln_ref()) > ctx.log_rho_max {
        return Err(NumericError::OutsideReliableDisk(format!(
            "seed 1/r has modulus {:.4e}, beyond rho_max = {:.4e}",
            seed_abs.to_f64(),
            ctx.rho_max().to_f64()
        )));
    }

    let evaluator = SeriesEvaluator::new(&ctx.j, prec);
    let qstar = series_newton_solve(&evaluator, &r, seed, prec, Some(&ctx.log_rho_max))?;

    // τ* = (h₃/2πi)·log(q̃*/α₃) = −i(h₃/2π)·log(q̃*/α₃)
    let qball = Ball::exact(qstar.clone());
    let alpha = ctx.alpha3().as_ball(prec);
    let ratio = qball
        .div(&alpha)
        .ok_or_else(|| NumericError::PrecisionExhausted("qtilde/alpha3".into()))?;
    let lg = ratio
        .ln()
        .ok_or_else(|| NumericError::PrecisionExhausted("log of qtilde ratio".into()))?;
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let h3_over_2pi = Float::with_val(prec, &ctx.constants.h3 / Float::with_val(prec, 2 * &pi));
    let factor = Ball::from_rounded(Complex::with_val(
        prec,
        (Float::with_val(prec, 0), Float::with_val(prec, -&h3_over_2pi)),
    ));
    let mut tau = lg.mul(&factor);

    // strip reduction: Re τ ∈ [−h₃/2, h₃/2)
    let h3f = Float::with_val(prec, &ctx.constants.h3);
    let k = Float::with_val(prec, tau.mid().real() / &h3f).round();
    if !k.is_zero() {
        let shift = Ball::exact(Complex::with_val(prec, (Float::with_val(prec, &k * &h3f), 0)));
        tau = tau.sub(&shift);
    }

    if !tau.mid().imag().is_sign_positive() {
        return Err(NumericError::OutsideReliableDisk(
            "located point is not in the upper half plane".into(),
        ));
    }

    // verification: J(τ*) must reproduce r within combined error bounds
    let check = eval_j(ctx, &Complex::with_val(prec, tau.mid()))?;
    let resid = check.sub(root).abs_upper();
    let tol = {
        let mut t = Float::with_val(64, root.rad() + check.rad());
        t += Float::with_val(64, Float::i_exp(1, -((prec / 2) as i32)));
        t * 256u32
    };
    if resid > tol {
        return Err(NumericError::NewtonDivergence(format!(
            "verification failed: |J(tau*) - r| = {:.3e} > tol {:.3e}",
            resid.to_f64(),
            tol.to_f64()
        )));
    }

    Ok(LocatedZero { tau, qtilde: qball, residual: resid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_signature, VertexOrder::Finite as F, VertexOrder::Infinity as I};

    fn sig(p: crate::group::VertexOrder, q: crate::group::VertexOrder) -> Signature {
        make_signature(p, q).unwrap()
    }

    #[test]
    fn alpha3_236_is_1728() {
        let a = compute_alpha3(&sig(F(2), F(3)), 48, 420).unwrap();
        let diff = (a.value.clone() - 1728u32).abs();
        assert!(
            diff < 1e-25,
            "alpha3 = {} (err {})",
            a.value.to_f64(),
            a.error.to_f64()
        );
        assert!(a.error.to_f64() < 1e-25);
    }

    #[test]
    fn alpha3_infinite_signature_is_refused() {
        let err = compute_alpha3(&sig(I, I), 24, 256).unwrap_err();
        assert!(matches!(err, NumericError::OutsideReliableDisk(_)));
    }

    #[test]
    fn eval_j_at_vertices_236() {
        let ctx = eval_context(&sig(F(2), F(3)), 48, 420).unwrap();
        let tau_i = Complex::with_val(420, (0, 1));
        let v = eval_j(&ctx, &tau_i).unwrap();
        let diff = v.sub(&Ball::one(420)).abs_upper();
        assert!(diff.to_f64() < 1e-30, "J(i) = {v:?}");

        let half = Float::with_val(420, 0.5);
        let s3 = Float::with_val(420, 3u32).sqrt() / 2u32;
        let zeta2 = Complex::with_val(420, (&half, &s3));
        let v0 = eval_j(&ctx, &zeta2).unwrap();
        assert!(v0.abs_upper().to_f64() < 1e-30, "J(zeta2) = {v0:?}");
    }

    #[test]
    fn eval_j_at_2i_is_classical() {
        let ctx = eval_context(&sig(F(2), F(3)), 48, 420).unwrap();
        let tau = Complex::with_val(420, (0, 2));
        let v = eval_j(&ctx, &tau).unwrap();
        // j(2i) = 66^3 = 287496, so J(2i) = 287496/1728
        let expect = Ball::from_rational(420, &Rational::from((287496, 1728)));
        let diff = v.sub(&expect).abs_upper();
        assert!(diff.to_f64() < 1e-25, "J(2i) = {v:?}");
    }

    #[test]
    fn eval_periodicity() {
        let ctx = eval_context(&sig(F(2), F(5)), 48, 380).unwrap();
        let tau = Complex::with_val(380, (0.21, 1.4));
        let shifted = Complex::with_val(380, &tau + &ctx.constants.h3);
        let a = eval_j(&ctx, &tau).unwrap();
        let b = eval_j(&ctx, &shifted).unwrap();
        let d = a.sub(&b).abs_upper();
        let tol = Float::with_val(64, a.rad() + b.rad()) * 64u32;
        assert!(d <= tol, "|J(tau) - J(tau+h3)| = {:.3e}", d.to_f64());
    }

    #[test]
    fn locate_zero_roundtrip_236() {
        let ctx = eval_context(&sig(F(2), F(3)), 48, 420).unwrap();
        let r = Ball::from_rational(420, &Rational::from((287496, 1728)));
        let z = locate_zero(&ctx, &r).unwrap();
        let two_i = Complex::with_val(420, (0, 2));
        let d = Float::with_val(64, Complex::with_val(420, z.tau.mid() - &two_i).abs_ref());
        assert!(d.to_f64() < 1e-20, "tau* = {:?}", z.tau);
    }

    #[test]
    fn locate_zero_guards_elliptic_values() {
        let ctx = eval_context(&sig(F(2), F(3)), 32, 256).unwrap();
        let near_one = Ball::exact(Complex::with_val(256, (1.005, 0.0)));
        assert!(matches!(
            locate_zero(&ctx, &near_one),
            Err(NumericError::OutsideReliableDisk(_))
        ));
    }

    #[test]
    fn eval_refuses_outside_disk_and_lower_half() {
        let ctx = eval_context(&sig(F(2), F(3)), 32, 256).unwrap();
        let tau = Complex::with_val(256, (0.0, 1e-4));
        assert!(matches!(eval_j(&ctx, &tau), Err(NumericError::OutsideReliableDisk(_))));
        let lower = Complex::with_val(256, (0.0, -1.0));
        assert!(matches!(eval_j(&ctx, &lower), Err(NumericError::OutsideReliableDisk(_))));
    }

    #[test]
    fn alpha3_stability_under_escalation() {
        let a1 = compute_alpha3(&sig(F(2), F(5)), 40, 360).unwrap();
        let a2 = compute_alpha3(&sig(F(2), F(5)), 80, 488).unwrap();
        let diff = Float::with_val(64, &a1.value - &a2.value).abs();
        let budget = Float::with_val(64, &a1.error + &a2.error);
        assert!(
            diff <= budget,
            "alpha3 drifted: {} vs {} (budget {:.3e})",
            a1.value.to_f64(),
            a2.value.to_f64(),
            budget.to_f64()
        );
    }
}
