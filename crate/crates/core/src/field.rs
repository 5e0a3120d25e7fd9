//! Coefficient fields for truncated series: exact rationals and complex balls.
//!
//! Two backends implement [`CoefficientField`]:
//! - [`Rationals`]: exact arbitrary-precision rationals, used for every
//!   expansion whose coefficients live in ℚ (Hauptmodul, discriminant form,
//!   rational certificates).
//! - [`ComplexBalls`]: midpoint-radius complex arithmetic at a fixed working
//!   precision, used for forms whose algebraic coefficients are only given
//!   numerically and for all evaluation results.
//!
//! Ball radii are upper bounds maintained with upward rounding; they absorb
//! both input uncertainty and the rounding of each midpoint operation.
//! Containment is validated empirically by the test suite (recompute at
//! higher precision, check the original ball contains the refinement).

use rug::{Complex, Float, Rational};
use std::fmt;

/// Precision (bits) used for radius bookkeeping. Radii only need a couple of
/// significant digits but benefit from MPFR's huge exponent range.
pub const RAD_PREC: u32 = 64;

/// Field-operation abstraction shared by all series code.
pub trait CoefficientField: Clone + fmt::Debug {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. `None` when the element is zero (or, for
    /// balls, cannot be certified nonzero).
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn mul_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem;
    fn div_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem;
    /// Exact zero test for rationals; "contains zero" for balls.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
}

/// The exact rational field ℚ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoefficientField for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::new()
    }
    fn one(&self) -> Rational {
        Rational::from(1)
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from(n)
    }
    fn from_rational(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a + b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a - b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        Rational::from(-a)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.cmp0() == std::cmp::Ordering::Equal {
            None
        } else {
            Some(Rational::from(a.recip_ref()))
        }
    }
    fn mul_i64(&self, a: &Rational, n: i64) -> Rational {
        Rational::from(a * Rational::from(n))
    }
    fn div_i64(&self, a: &Rational, n: i64) -> Rational {
        Rational::from(a / Rational::from(n))
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.cmp0() == std::cmp::Ordering::Equal
    }
    fn is_one(&self, a: &Rational) -> bool {
        *a == 1u32
    }
}

// ---------------------------------------------------------------------------
// radius helpers (upward rounding throughout)
// ---------------------------------------------------------------------------

fn rad_new(v: f64) -> Float {
    Float::with_val(RAD_PREC, v)
}

/// Nudges a nonnegative RAD_PREC float up by a relative 2⁻⁴⁰, absorbing the
/// to-nearest rounding (≤ 2⁻⁶³ relative per op) of the radius arithmetic.
fn bump(x: Float) -> Float {
    let t = Float::with_val(RAD_PREC, &x >> 40);
    Float::with_val(RAD_PREC, &x + &t)
}

pub(crate) fn rad_add(a: &Float, b: &Float) -> Float {
    bump(Float::with_val(RAD_PREC, a + b))
}

pub(crate) fn rad_mul(a: &Float, b: &Float) -> Float {
    bump(Float::with_val(RAD_PREC, a * b))
}

fn rad_div(a: &Float, b: &Float) -> Float {
    bump(Float::with_val(RAD_PREC, a / b))
}

/// Upper bound on |z|.
pub(crate) fn abs_up(z: &Complex) -> Float {
    bump(Float::with_val(RAD_PREC, z.abs_ref()))
}

/// Lower bound on |z|, clamped at 0.
fn abs_down(z: &Complex) -> Float {
    let x = Float::with_val(RAD_PREC, z.abs_ref());
    let t = Float::with_val(RAD_PREC, &x >> 40);
    let lo = Float::with_val(RAD_PREC, &x - &t);
    if lo.is_sign_negative() {
        rad_new(0.0)
    } else {
        lo
    }
}

/// Bound on the rounding error of one MPC operation that produced `mid` at
/// its own precision: a generous 4·2⁻ᴾ·|mid|.
fn ulp_rad(mid: &Complex) -> Float {
    let p = mid.prec().0.min(mid.prec().1);
    let mut u = abs_up(mid);
    u >>= p.saturating_sub(2);
    u
}

// ---------------------------------------------------------------------------
// Ball
// ---------------------------------------------------------------------------

/// A complex ball: all numbers within distance `rad` of `mid`.
#[derive(Clone)]
pub struct Ball {
    mid: Complex,
    rad: Float,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ball({:.6e} +/- {:.3e})", self.mid, self.rad.to_f64())
    }
}

impl Ball {
    pub fn new(mid: Complex, rad: Float) -> Self {
        debug_assert!(rad.is_sign_positive() || rad.is_zero());
        Ball { mid, rad }
    }

    /// Ball of radius zero around an exactly-representable midpoint.
    pub fn exact(mid: Complex) -> Self {
        Ball { mid, rad: rad_new(0.0) }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::exact(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Ball::exact(Complex::with_val(prec, 1))
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        Ball::exact(Complex::with_val(prec, n))
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        let mid = Complex::with_val(prec, r);
        let rad = ulp_rad(&mid);
        Ball { mid, rad }
    }

    pub fn from_float(f: Float) -> Self {
        let prec = f.prec();
        Ball::exact(Complex::with_val(prec, f))
    }

    /// Midpoint with a rounding-sized radius, for values produced by a short
    /// chain of correctly-rounded MPFR/MPC operations.
    pub fn from_rounded(mid: Complex) -> Self {
        let rad = ulp_rad(&mid);
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Complex {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec().0
    }

    pub fn with_rad(mut self, rad: Float) -> Self {
        self.rad = rad;
        self
    }

    /// Enlarges the radius by `extra`.
    pub fn widen(&self, extra: &Float) -> Self {
        Ball { mid: self.mid.clone(), rad: rad_add(&self.rad, extra) }
    }

    pub fn abs_upper(&self) -> Float {
        rad_add(&abs_up(&self.mid), &self.rad)
    }

    pub fn abs_lower(&self) -> Float {
        let mut lo = abs_down(&self.mid);
        lo -= &self.rad;
        if lo.is_sign_negative() {
            lo = rad_new(0.0);
        }
        lo
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// Does this ball contain the other ball's midpoint?
    pub fn contains_point(&self, z: &Complex) -> bool {
        let d = abs_up(&Complex::with_val(self.prec(), z - &self.mid));
        d <= self.rad
    }

    pub fn add(&self, b: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec(), &self.mid + &b.mid);
        let rad = rad_add(&rad_add(&self.rad, &b.rad), &ulp_rad(&mid));
        Ball { mid, rad }
    }

    pub fn sub(&self, b: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec(), &self.mid - &b.mid);
        let rad = rad_add(&rad_add(&self.rad, &b.rad), &ulp_rad(&mid));
        Ball { mid, rad }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Complex::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn mul(&self, b: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec(), &self.mid * &b.mid);
        // |a||rb| + |b||ra| + ra rb
        let t1 = rad_mul(&abs_up(&self.mid), &b.rad);
        let t2 = rad_mul(&abs_up(&b.mid), &self.rad);
        let t3 = rad_mul(&self.rad, &b.rad);
        let rad = rad_add(&rad_add(&rad_add(&t1, &t2), &t3), &ulp_rad(&mid));
        Ball { mid, rad }
    }

    pub fn mul_i64(&self, n: i64) -> Ball {
        let mid = Complex::with_val(self.prec(), &self.mid * n);
        let nf = rad_new(n.unsigned_abs() as f64);
        let rad = rad_add(&rad_mul(&self.rad, &nf), &ulp_rad(&mid));
        Ball { mid, rad }
    }

    /// `None` when the ball cannot be certified away from zero.
    pub fn inv(&self) -> Option<Ball> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return None;
        }
        let mid = Complex::with_val(self.prec(), self.mid.clone().recip());
        // |1/z - 1/m| <= r / (|m| (|m| - r)) <= r / lo^2
        let err = rad_div(&self.rad, &rad_mul(&lo, &lo));
        let rad = rad_add(&err, &ulp_rad(&mid));
        Some(Ball { mid, rad })
    }

    pub fn div(&self, b: &Ball) -> Option<Ball> {
        b.inv().map(|i| self.mul(&i))
    }

    pub fn powi(&self, n: u64) -> Ball {
        let mut result = Ball::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Complex exponential. `None` if the input radius is ≥ 1 (the image
    /// would be uselessly fat).
    pub fn exp(&self) -> Option<Ball> {
        if self.rad >= 1u32 {
            return None;
        }
        let mid = Complex::with_val(self.prec(), self.mid.clone().exp());
        // |e^z - e^m| <= |e^m| (e^r - 1) <= 3 |e^m| r  for r < 1
        let scale = rad_mul(&abs_up(&mid), &rad_new(3.0));
        let rad = rad_add(&rad_mul(&scale, &self.rad), &ulp_rad(&mid));
        Some(Ball { mid, rad })
    }

    /// Principal branch logarithm. `None` when the ball touches 0 or more
    /// than half-covers it (branch would be ambiguous).
    pub fn ln(&self) -> Option<Ball> {
        let lo = self.abs_lower();
        if lo.is_zero() || rad_mul(&self.rad, &rad_new(2.0)) > lo {
            return None;
        }
        let mid = Complex::with_val(self.prec(), self.mid.clone().ln());
        // |ln z - ln m| <= -ln(1 - r/|m|) <= 2 r/|m| for r/|m| <= 1/2
        let err = rad_mul(&rad_div(&self.rad, &lo), &rad_new(2.0));
        let rad = rad_add(&err, &ulp_rad(&mid));
        Some(Ball { mid, rad })
    }

    /// Upscales precision of the midpoint (no information gain).
    pub fn promote(&self, prec: u32) -> Ball {
        Ball { mid: Complex::with_val(prec, &self.mid), rad: self.rad.clone() }
    }
}

/// The complex-ball backend at a fixed working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexBalls {
    pub prec: u32,
}

impl ComplexBalls {
    pub fn new(prec: u32) -> Self {
        ComplexBalls { prec }
    }
}

impl CoefficientField for ComplexBalls {
    type Elem = Ball;

    fn zero(&self) -> Ball {
        Ball::zero(self.prec)
    }
    fn one(&self) -> Ball {
        Ball::one(self.prec)
    }
    fn from_i64(&self, n: i64) -> Ball {
        Ball::from_i64(self.prec, n)
    }
    fn from_rational(&self, r: &Rational) -> Ball {
        Ball::from_rational(self.prec, r)
    }
    fn add(&self, a: &Ball, b: &Ball) -> Ball {
        a.add(b)
    }
    fn sub(&self, a: &Ball, b: &Ball) -> Ball {
        a.sub(b)
    }
    fn neg(&self, a: &Ball) -> Ball {
        a.neg()
    }
    fn mul(&self, a: &Ball, b: &Ball) -> Ball {
        a.mul(b)
    }
    fn inv(&self, a: &Ball) -> Option<Ball> {
        a.inv()
    }
    fn mul_i64(&self, a: &Ball, n: i64) -> Ball {
        a.mul_i64(n)
    }
    fn div_i64(&self, a: &Ball, n: i64) -> Ball {
        a.div(&Ball::from_i64(self.prec, n)).expect("nonzero integer divisor")
    }
    fn is_zero(&self, a: &Ball) -> bool {
        a.contains_zero()
    }
    fn is_one(&self, a: &Ball) -> bool {
        let one = Complex::with_val(a.prec(), 1);
        a.contains_point(&one) && {
            let d = abs_up(&Complex::with_val(a.prec(), &a.mid - &one));
            // close to 1, not merely a huge ball around it
            rad_add(&d, &a.rad) < 0.5f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(prec: u32, re: f64, im: f64) -> Ball {
        Ball::exact(Complex::with_val(prec, (re, im)))
    }

    #[test]
    fn rational_field_axioms_spot() {
        let f = Rationals;
        let a = Rational::from((3, 7));
        let b = Rational::from((-2, 5));
        assert_eq!(f.add(&a, &b), Rational::from((1, 35)));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert!(f.is_zero(&f.sub(&a, &a)));
    }

    #[test]
    fn ball_mul_contains_true_product() {
        let a = c(128, 1.5, -2.0).widen(&Float::with_val(RAD_PREC, 1e-20));
        let b = c(128, -0.25, 3.0).widen(&Float::with_val(RAD_PREC, 1e-22));
        let p = a.mul(&b);
        let exact = Complex::with_val(256, (1.5, -2.0)) * Complex::with_val(256, (-0.25, 3.0));
        assert!(p.contains_point(&Complex::with_val(128, exact)));
    }

    #[test]
    fn ball_inv_certifies_or_refuses() {
        let a = c(128, 2.0, 0.0);
        let i = a.inv().unwrap();
        assert!(i.contains_point(&Complex::with_val(128, 0.5)));
        let fat = c(64, 1e-30, 0.0).widen(&Float::with_val(RAD_PREC, 1.0));
        assert!(fat.inv().is_none());
    }

    #[test]
    fn ball_exp_ln_roundtrip() {
        let a = c(256, 0.7, 1.1).widen(&Float::with_val(RAD_PREC, 1e-40));
        let e = a.exp().unwrap();
        let l = e.ln().unwrap();
        assert!(l.contains_point(&Complex::with_val(256, (0.7, 1.1))));
        // radius stayed small
        assert!(l.rad().to_f64() < 1e-30);
    }

    #[test]
    fn ball_radius_survives_deep_products() {
        // radii must stay positive even past f64 underflow scales
        // (20 squarings puts |x| near 1e-315653, far below f64's 1e-308 floor)
        let mut x = c(64, 0.5, 0.0).widen(&Float::with_val(RAD_PREC, 1e-10));
        for _ in 0..20 {
            x = x.mul(&x.clone());
        }
        assert!(x.rad().is_sign_positive() && !x.rad().is_zero());
        assert!(x.abs_upper().is_sign_positive());
    }
}
