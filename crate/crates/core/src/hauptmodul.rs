//! The normalized Hauptmodul expansion J = q̃⁻¹ + Σ cₖ q̃ᵏ, exact over ℚ.
//!
//! J is the inverse of the Schwarz triangle map for angles π/p, π/q, 0. In
//! the scale-free variable u = log q̃ it satisfies the autonomous ODE
//! {J, u} + (dJ/du)²·R(J) = 0 with
//!
//!   R(J) = (1−ν₀²)/(2J²) + (1−ν₁²)/(2(1−J)²) + (1−ν₀²−ν₁²)/(2J(1−J)),
//!
//! ν₀ = 1/q (angle at J = 0), ν₁ = 1/p (at J = 1), ν∞ = 0 (cusp at J = ∞).
//!
//! The expansion is built by the Frobenius method at the logarithmic
//! singularity of the associated hypergeometric equation: with
//! ā = (1 − 1/p − 1/q)/2 and b̄ = (1 − 1/p + 1/q)/2, the equation
//! z(1−z)v″ + [1 − (ā+b̄+1)z]v′ − āb̄v = 0 (z = 1/J) has solutions
//! F(z) and F(z)·log z + G(z) near z = 0, and
//!
//!   u = log z + G(z)/F(z),   q̃ = e^u = z·e^{G/F}.
//!
//! Reverting z ↦ q̃ and inverting gives J. All steps are exact in ℚ, and the
//! coefficient of the leading term q̃⁻¹ comes out exactly 1 — which is the
//! normalization defining q̃ (rescaling q̃ changes the leading coefficient).
//! [`verify_schwarzian`] re-checks any expansion against the ODE directly,
//! through an independent series computation.

use crate::field::Rationals;
use crate::group::Signature;
use crate::series::{SeriesError, TruncatedSeries};
use rug::Rational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HauptmodulError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(i64),
    #[error("expansion failed to solve its defining recursion: {0}")]
    RecursionInconsistency(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The exact rational data of R(J): numerators of the three partial
/// fractions (denominators 2J², 2(1−J)², 2J(1−J)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchwarzianRhs {
    /// ν₀² = 1/q²
    pub nu0_sq: Rational,
    /// ν₁² = 1/p²
    pub nu1_sq: Rational,
    /// 1 − ν₀²
    pub at_zero: Rational,
    /// 1 − ν₁²
    pub at_one: Rational,
    /// 1 − ν₀² − ν₁² (ν∞ = 0)
    pub mixed: Rational,
}

/// Exact coefficients of the Schwarzian right-hand side for a signature.
pub fn schwarzian_rhs(sig: &Signature) -> SchwarzianRhs {
    let nu0 = sig.recip_q();
    let nu1 = sig.recip_p();
    let nu0_sq = Rational::from(&nu0 * &nu0);
    let nu1_sq = Rational::from(&nu1 * &nu1);
    let one = Rational::from(1);
    SchwarzianRhs {
        at_zero: Rational::from(&one - &nu0_sq),
        at_one: Rational::from(&one - &nu1_sq),
        mixed: Rational::from(Rational::from(&one - &nu0_sq) - &nu1_sq),
        nu0_sq,
        nu1_sq,
    }
}

/// The normalized Hauptmodul expansion of a signature through a truncation
/// order: coefficients for exponents −1 .. order−1 are known exactly.
#[derive(Clone, Debug)]
pub struct HauptmodulExpansion {
    pub signature: Signature,
    pub series: TruncatedSeries<Rationals>,
}

impl HauptmodulExpansion {
    /// cₖ, the coefficient of q̃ᵏ (k ≥ 0).
    pub fn c(&self, k: i64) -> Option<Rational> {
        self.series.coeff(k)
    }
}

/// Frobenius pair at the logarithmic point: F = Σ Aₙzⁿ and G = Σ Bₙzⁿ with
/// A₀ = 1, Aₙ₊₁ = Aₙ(ā+n)(b̄+n)/(n+1)², Bₙ = Aₙ·Σₘ[1/(ā+m)+1/(b̄+m)−2/(m+1)].
fn frobenius_pair(
    sig: &Signature,
    order: i64,
) -> (TruncatedSeries<Rationals>, TruncatedSeries<Rationals>) {
    let half = Rational::from((1u32, 2u32));
    let one = Rational::from(1);
    let a = Rational::from(Rational::from(&one - &sig.recip_p()) - &sig.recip_q()) * &half;
    let b = Rational::from(&a + &sig.recip_q());

    let n = order.max(1) as usize;
    let mut big_a = Vec::with_capacity(n);
    let mut big_b = Vec::with_capacity(n);
    big_a.push(one.clone());
    big_b.push(Rational::new());
    let mut harm = Rational::new();
    for m in 0..n - 1 {
        let am = Rational::from(&a + Rational::from(m as u64));
        let bm = Rational::from(&b + Rational::from(m as u64));
        let next = Rational::from(&big_a[m] * &am) * &bm
            / Rational::from((m as u64 + 1) * (m as u64 + 1));
        harm += am.recip() + bm.recip() - Rational::from((2u64, m as u64 + 1));
        big_b.push(Rational::from(&next * &harm));
        big_a.push(next);
    }
    (
        TruncatedSeries::new(Rationals, 0, big_a, order),
        TruncatedSeries::new(Rationals, 0, big_b, order),
    )
}

/// Computes the expansion J = q̃⁻¹ + Σ_{k≥0} cₖ q̃ᵏ through order `n`
/// (coefficients known for all exponents < n).
pub fn hauptmodul_expansion(
    sig: &Signature,
    n: i64,
) -> Result<HauptmodulExpansion, HauptmodulError> {
    if n < 2 {
        return Err(HauptmodulError::OrderTooSmall(n));
    }
    // J = 1/z(q̃) loses two orders to the inversion; build the z-side to n+1.
    let m = n + 1;
    let (f, g) = frobenius_pair(sig, m);
    let h = g.mul(&f.inv()?);
    let w_of_z = TruncatedSeries::monomial(Rationals, Rational::from(1), 1)
        .mul(&h.exp()?);
    let z_of_w = w_of_z.revert()?;
    let j = z_of_w.inv()?;

    if j.valuation() != -1 {
        return Err(HauptmodulError::RecursionInconsistency(format!(
            "expected valuation -1, got {}",
            j.valuation()
        )));
    }
    if j.leading() != Some(&Rational::from(1)) {
        return Err(HauptmodulError::RecursionInconsistency(format!(
            "leading coefficient is {:?}, expected exactly 1",
            j.leading()
        )));
    }
    if j.order() < n {
        return Err(HauptmodulError::RecursionInconsistency(format!(
            "provable order {} fell short of requested {}",
            j.order(),
            n
        )));
    }
    Ok(HauptmodulExpansion { signature: *sig, series: j.truncated(n) })
}

/// Plugs a series into {J, u} + (θJ)²·R(J) and returns the residual, which
/// must vanish through its provable order for a genuine expansion.
///
/// Computed with θ = q̃·d/dq̃ (so u-derivatives are θ-powers) entirely in
/// series arithmetic; this path shares nothing with the Frobenius
/// construction beyond the series engine.
pub fn verify_schwarzian(exp: &HauptmodulExpansion) -> Result<TruncatedSeries<Rationals>, HauptmodulError> {
    let rhs = schwarzian_rhs(&exp.signature);
    let j = &exp.series;
    let j1 = j.theta();
    let j2 = j1.theta();
    let j3 = j2.theta();

    let j1_inv = j1.inv()?;
    // {J, u} = J'''/J' - (3/2)(J''/J')^2
    let t1 = j3.mul(&j1_inv);
    let quot = j2.mul(&j1_inv);
    let t2 = quot.mul(&quot).scale(&Rational::from((3u32, 2u32)));
    let schwarzian = t1.sub(&t2);

    // R(J) = at_zero/(2J^2) + at_one/(2(1-J)^2) + mixed/(2J(1-J))
    let one = TruncatedSeries::constant(Rationals, Rational::from(1));
    let one_minus_j = one.sub(j);
    let half = Rational::from((1u32, 2u32));
    let inv_j2 = j.mul(j).inv()?;
    let inv_om2 = one_minus_j.mul(&one_minus_j).inv()?;
    let inv_mix = j.mul(&one_minus_j).inv()?;
    let r = inv_j2
        .scale(&Rational::from(&rhs.at_zero * &half))
        .add(&inv_om2.scale(&Rational::from(&rhs.at_one * &half)))
        .add(&inv_mix.scale(&Rational::from(&rhs.mixed * &half)));

    Ok(schwarzian.add(&j1.mul(&j1).mul(&r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_signature, VertexOrder::Finite as F, VertexOrder::Infinity as I};
    use crate::series::TruncatedSeries;

    fn sig(p: crate::group::VertexOrder, q: crate::group::VertexOrder) -> Signature {
        make_signature(p, q).unwrap()
    }

    #[test]
    fn rhs_values() {
        let r = schwarzian_rhs(&sig(F(2), F(3)));
        assert_eq!(r.nu0_sq, Rational::from((1, 9)));
        assert_eq!(r.nu1_sq, Rational::from((1, 4)));
        assert_eq!(
            Rational::from(&r.at_zero / Rational::from(2)),
            Rational::from((4, 9))
        );
        let r = schwarzian_rhs(&sig(I, I));
        assert_eq!(r.at_zero, 1);
        assert_eq!(r.at_one, 1);
        assert_eq!(r.mixed, 1);
        let r = schwarzian_rhs(&sig(F(2), F(5)));
        assert_eq!(r.nu0_sq, Rational::from((1, 25)));
        assert_eq!(r.nu1_sq, Rational::from((1, 4)));
    }

    #[test]
    fn leading_term_is_qtilde_inverse() {
        for (p, q) in [(F(2), F(3)), (F(2), F(7)), (F(3), F(5)), (F(4), I), (I, I)] {
            let e = hauptmodul_expansion(&sig(p, q), 6).unwrap();
            assert_eq!(e.series.valuation(), -1);
            assert_eq!(e.series.coeff(-1), Some(Rational::from(1)));
        }
    }

    #[test]
    fn c0_for_236_is_31_over_72() {
        let e = hauptmodul_expansion(&sig(F(2), F(3)), 3).unwrap();
        assert_eq!(e.c(0), Some(Rational::from((31, 72))));
        // c1 = 196884 / 1728^2
        assert_eq!(e.c(1), Some(Rational::from((196884, 2985984))));
    }

    #[test]
    fn prefix_stability() {
        let lo = hauptmodul_expansion(&sig(F(2), F(5)), 8).unwrap();
        let hi = hauptmodul_expansion(&sig(F(2), F(5)), 14).unwrap();
        for k in -1..8 {
            assert_eq!(lo.series.coeff(k), hi.series.coeff(k), "coefficient {k}");
        }
    }

    #[test]
    fn schwarzian_residual_vanishes() {
        for (p, q) in [(F(2), F(3)), (F(2), F(5)), (F(3), F(7)), (I, I)] {
            let e = hauptmodul_expansion(&sig(p, q), 10).unwrap();
            let resid = verify_schwarzian(&e).unwrap();
            assert!(
                resid.is_zero(),
                "residual for ({p},{q}) should vanish, got {:?}",
                resid
            );
            assert!(resid.order() >= 5, "residual provable order too small");
        }
    }

    #[test]
    fn schwarzian_detects_corruption() {
        let e = hauptmodul_expansion(&sig(F(2), F(3)), 10).unwrap();
        let mut coeffs: Vec<Rational> = (-1..e.series.order())
            .map(|k| e.series.coeff(k).unwrap())
            .collect();
        coeffs[2] += Rational::from((1, 1000)); // perturb c1
        let corrupted = HauptmodulExpansion {
            signature: e.signature,
            series: TruncatedSeries::new(Rationals, -1, coeffs, e.series.order()),
        };
        let resid = verify_schwarzian(&corrupted).unwrap();
        assert!(!resid.is_zero(), "perturbed series must leave a residual");
    }
}
