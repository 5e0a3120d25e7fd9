//! The discriminant-analogue form Δ_{2L} and its exact q̃-expansion:
//!
//!   Δ_{2L} = (−1)^L · (θJ)^L · J^{⌈L/q⌉−L} · (J−1)^{⌈L/p⌉−L}
//!          = q̃^{n_Δ} + O(q̃^{n_Δ+1}),
//!
//! with θ = q̃·d/dq̃, L the lcm convention of [`Signature::l`], and
//! n_Δ = L(1 − 1/p − 1/q). ⌈L/∞⌉ = 0. Negative powers are series inverses
//! of unit-leading Laurent series; no rational-function form is kept.

use crate::field::Rationals;
use crate::group::Signature;
use crate::hauptmodul::{hauptmodul_expansion, HauptmodulError};
use crate::series::{SeriesError, TruncatedSeries};
use rug::{Complex, Float, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscriminantError {
    #[error("truncation order {requested} leaves no provable term (needs > n_delta = {n_delta})")]
    InsufficientOrder { requested: i64, n_delta: u64 },
    #[error("expansion violates its defining shape: {0}")]
    ShapeViolation(String),
    #[error(transparent)]
    Hauptmodul(#[from] HauptmodulError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Exact expansion of Δ_{2L} for a signature.
#[derive(Clone, Debug)]
pub struct DiscriminantExpansion {
    pub signature: Signature,
    /// Weight 2L.
    pub weight: u64,
    pub n_delta: u64,
    pub series: TruncatedSeries<Rationals>,
}

/// Evaluates the closed formula for Δ_{2L} in series arithmetic, through
/// truncation order `n` (coefficients known for exponents < n).
pub fn delta_expansion(
    sig: &Signature,
    n: i64,
) -> Result<DiscriminantExpansion, DiscriminantError> {
    let n_delta = sig.n_delta();
    if n <= n_delta as i64 {
        return Err(DiscriminantError::InsufficientOrder { requested: n, n_delta });
    }
    let l = sig.l() as i64;
    let e_q = sig.q().ceil_div_into(sig.l()) as i64 - l;
    let e_p = sig.p().ceil_div_into(sig.l()) as i64 - l;

    // Provable order of the product comes out as N_J + 1 + 2n_Δ − L, so a
    // J expansion of order n − 1 − 2n_Δ + L suffices; keep a small margin
    // and a retry loop as a backstop.
    let mut j_order = (n + l - 2 * n_delta as i64 + 1).max(n_delta as i64 + 3).max(3);
    for _ in 0..4 {
        let j = hauptmodul_expansion(sig, j_order)?.series;
        let theta_j = j.theta();
        let one = TruncatedSeries::constant(Rationals, Rational::from(1));
        let j_minus_1 = j.sub(&one);

        let mut delta = theta_j.pow(l)?;
        if e_q != 0 {
            delta = delta.mul(&j.pow(e_q)?);
        }
        if e_p != 0 {
            delta = delta.mul(&j_minus_1.pow(e_p)?);
        }
        if l % 2 == 1 {
            delta = delta.neg();
        }

        if delta.order() >= n {
            let delta = delta.truncated(n);
            if delta.valuation() != n_delta as i64 {
                return Err(DiscriminantError::ShapeViolation(format!(
                    "valuation {} differs from n_delta {}",
                    delta.valuation(),
                    n_delta
                )));
            }
            if delta.leading() != Some(&Rational::from(1)) {
                return Err(DiscriminantError::ShapeViolation(format!(
                    "leading coefficient {:?}, expected exactly 1",
                    delta.leading()
                )));
            }
            return Ok(DiscriminantExpansion {
                signature: *sig,
                weight: 2 * sig.l(),
                n_delta,
                series: delta,
            });
        }
        j_order += l.max(4);
    }
    Err(DiscriminantError::InsufficientOrder { requested: n, n_delta })
}

/// One sample of a non-vanishing spot check.
#[derive(Clone, Debug)]
pub struct NonvanishingSample {
    pub tau: Complex,
    pub qtilde_abs: Float,
    /// Certified lower bound on |Δ(τ)|.
    pub lower_bound: Float,
    pub nonzero: bool,
}

/// Spot-check report: |Δ(τ)| > 0 with certified margin at each sample.
/// Purely a check at the sampled points, not a proof of non-vanishing.
#[derive(Clone, Debug)]
pub struct NonvanishingReport {
    pub signature: Signature,
    pub samples: Vec<NonvanishingSample>,
    pub all_nonzero: bool,
}

/// Evaluates Δ at each sample point and records the certified margin.
pub fn delta_nonvanishing_check(
    ctx: &crate::numeric::EvalContext,
    samples: &[Complex],
) -> Result<NonvanishingReport, crate::numeric::NumericError> {
    let mut out = Vec::with_capacity(samples.len());
    let mut all = true;
    for tau in samples {
        let q = ctx.qtilde(tau)?;
        let value = crate::numeric::eval_delta(ctx, tau)?;
        let lower = value.abs_lower();
        let nonzero = !lower.is_zero();
        all &= nonzero;
        out.push(NonvanishingSample {
            tau: tau.clone(),
            qtilde_abs: q.abs_upper(),
            lower_bound: lower,
            nonzero,
        });
    }
    Ok(NonvanishingReport { signature: ctx.constants.signature, samples: out, all_nonzero: all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_signature, VertexOrder::Finite as F, VertexOrder::Infinity as I};

    fn sig(p: crate::group::VertexOrder, q: crate::group::VertexOrder) -> Signature {
        make_signature(p, q).unwrap()
    }

    #[test]
    fn delta_236_first_terms() {
        let d = delta_expansion(&sig(F(2), F(3)), 6).unwrap();
        assert_eq!(d.series.valuation(), 1);
        assert_eq!(d.series.coeff(1), Some(Rational::from(1)));
        assert_eq!(d.series.coeff(2), Some(Rational::from((-1, 72))));
        assert_eq!(d.weight, 12);
    }

    #[test]
    fn delta_leading_shape_across_signatures() {
        for (p, q) in [
            (F(2), F(3)),
            (F(2), F(5)),
            (F(3), F(4)),
            (F(5), F(6)),
            (F(2), I),
            (F(7), I),
            (I, I),
        ] {
            let s = sig(p, q);
            let d = delta_expansion(&s, s.n_delta() as i64 + 4).unwrap();
            assert_eq!(d.series.valuation(), s.n_delta() as i64, "({p},{q})");
            assert_eq!(d.series.coeff(s.n_delta() as i64), Some(Rational::from(1)));
        }
    }

    #[test]
    fn delta_25_valuation_is_3() {
        let d = delta_expansion(&sig(F(2), F(5)), 8).unwrap();
        assert_eq!(d.series.valuation(), 3);
        assert_eq!(d.n_delta, 3);
    }

    #[test]
    fn binary_vs_iterated_power_agree() {
        let s = sig(F(2), F(5));
        let j = hauptmodul_expansion(&s, 12).unwrap().series;
        let theta_j = j.theta();
        let by_binary = theta_j.pow(10).unwrap();
        let mut by_iter = theta_j.clone();
        for _ in 1..10 {
            by_iter = by_iter.mul(&theta_j);
        }
        assert_eq!(by_binary.valuation(), by_iter.valuation());
        let top = by_binary.order().min(by_iter.order());
        for k in by_binary.valuation()..top {
            assert_eq!(by_binary.coeff(k), by_iter.coeff(k), "exponent {k}");
        }
    }

    #[test]
    fn insufficient_order_is_reported() {
        let s = sig(F(2), F(5)); // n_delta = 3
        assert!(matches!(
            delta_expansion(&s, 3),
            Err(DiscriminantError::InsufficientOrder { .. })
        ));
    }
}
