//! Signatures (p, q, ∞) and derived group constants.
//!
//! The group of signature (p, q, ∞) is generated by elliptic elements M₁, M₂
//! of orders p, q fixing the vertices ζ₁ = −e^{−πi/p}, ζ₂ = e^{πi/q} and a
//! parabolic M₃: τ ↦ τ + h₃ with cusp width h₃ = 2cos(π/p) + 2cos(π/q),
//! subject to M₁M₂M₃ = 1. Infinite vertex orders are a dedicated enum value
//! and every formula takes 1/∞ = 0 and ⌈L/∞⌉ = 0 explicitly.

use rug::{Complex, Float, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("vertex orders must satisfy 2 <= p <= q: {0}")]
    OrderViolation(String),
    #[error("signature is not hyperbolic: 1/p + 1/q must be < 1, got {0}")]
    NotHyperbolic(String),
}

/// A vertex order: an integer ≥ 2 or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexOrder {
    Finite(u32),
    Infinity,
}

impl VertexOrder {
    pub fn recip(&self) -> Rational {
        match self {
            VertexOrder::Finite(n) => Rational::from((1u32, *n)),
            VertexOrder::Infinity => Rational::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, VertexOrder::Finite(_))
    }

    /// ⌈L/n⌉ with ⌈L/∞⌉ = 0.
    pub fn ceil_div_into(&self, l: u64) -> u64 {
        match self {
            VertexOrder::Finite(n) => l.div_ceil(*n as u64),
            VertexOrder::Infinity => 0,
        }
    }
}

impl std::fmt::Display for VertexOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexOrder::Finite(n) => write!(f, "{n}"),
            VertexOrder::Infinity => write!(f, "inf"),
        }
    }
}

/// A validated triangle-group signature (p, q, ∞).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    p: VertexOrder,
    q: VertexOrder,
}

/// Validates 2 ≤ p ≤ q ≤ ∞ and 1/p + 1/q < 1.
pub fn make_signature(p: VertexOrder, q: VertexOrder) -> Result<Signature, GroupError> {
    if let VertexOrder::Finite(n) = p {
        if n < 2 {
            return Err(GroupError::OrderViolation(format!("p = {n} < 2")));
        }
    }
    if let VertexOrder::Finite(n) = q {
        if n < 2 {
            return Err(GroupError::OrderViolation(format!("q = {n} < 2")));
        }
    }
    if p > q {
        return Err(GroupError::OrderViolation(format!("p = {p} > q = {q}")));
    }
    let sum = Rational::from(p.recip() + q.recip());
    if sum >= 1u32 {
        return Err(GroupError::NotHyperbolic(sum.to_string()));
    }
    Ok(Signature { p, q })
}

impl Signature {
    pub fn p(&self) -> VertexOrder {
        self.p
    }

    pub fn q(&self) -> VertexOrder {
        self.q
    }

    /// L = lcm(p, q) for finite p, q; L = p for q = ∞; L = 1 for p = q = ∞.
    pub fn l(&self) -> u64 {
        match (self.p, self.q) {
            (VertexOrder::Finite(p), VertexOrder::Finite(q)) => {
                let (p, q) = (p as u64, q as u64);
                p / gcd(p, q) * q
            }
            (VertexOrder::Finite(p), VertexOrder::Infinity) => p as u64,
            (VertexOrder::Infinity, _) => 1,
        }
    }

    /// n_Δ = L(1 − 1/p − 1/q); always a positive integer.
    pub fn n_delta(&self) -> u64 {
        let l = self.l();
        let n = Rational::from(l)
            * (Rational::from(1) - self.p.recip() - self.q.recip());
        debug_assert!(n.is_integer() && n > 0u32, "n_delta must be a positive integer");
        n.numer().to_u64().expect("n_delta fits u64")
    }

    pub fn recip_p(&self) -> Rational {
        self.p.recip()
    }

    pub fn recip_q(&self) -> Rational {
        self.q.recip()
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},inf)", self.p, self.q)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Takeuchi's classification: the nine signatures (p, q, ∞) whose triangle
/// groups are arithmetic. The source paper states only the count; the list
/// is from the classification itself (stable, external data).
const ARITHMETIC_SIGNATURES: [(VertexOrder, VertexOrder); 9] = {
    use VertexOrder::{Finite as F, Infinity as I};
    [
        (F(2), F(3)),
        (F(2), F(4)),
        (F(2), F(6)),
        (F(2), I),
        (F(3), F(3)),
        (F(3), I),
        (F(4), F(4)),
        (F(6), F(6)),
        (I, I),
    ]
};

/// Whether the triangle group of this signature is arithmetic.
pub fn is_arithmetic(sig: &Signature) -> bool {
    ARITHMETIC_SIGNATURES.contains(&(sig.p, sig.q))
}

/// A 2×2 real matrix acting on ℋ by fractional linear transformations.
#[derive(Clone, Debug)]
pub struct Mat2 {
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub d: Float,
}

impl Mat2 {
    pub fn identity(prec: u32) -> Self {
        Mat2 {
            a: Float::with_val(prec, 1),
            b: Float::with_val(prec, 0),
            c: Float::with_val(prec, 0),
            d: Float::with_val(prec, 1),
        }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let prec = self.a.prec();
        let f = |x: &Float, y: &Float, u: &Float, v: &Float| {
            Float::with_val(prec, x * y) + Float::with_val(prec, u * v)
        };
        Mat2 {
            a: f(&self.a, &o.a, &self.b, &o.c),
            b: f(&self.a, &o.b, &self.b, &o.d),
            c: f(&self.c, &o.a, &self.d, &o.c),
            d: f(&self.c, &o.b, &self.d, &o.d),
        }
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inv_det1(&self) -> Mat2 {
        let prec = self.a.prec();
        Mat2 {
            a: self.d.clone(),
            b: Float::with_val(prec, -&self.b),
            c: Float::with_val(prec, -&self.c),
            d: self.a.clone(),
        }
    }

    pub fn trace(&self) -> Float {
        Float::with_val(self.a.prec(), &self.a + &self.d)
    }

    pub fn det(&self) -> Float {
        let prec = self.a.prec();
        Float::with_val(prec, &self.a * &self.d) - Float::with_val(prec, &self.b * &self.c)
    }

    /// Möbius action (aτ + b)/(cτ + d).
    pub fn apply(&self, tau: &Complex) -> Complex {
        let prec = tau.prec().0;
        let num = Complex::with_val(prec, tau * &self.a) + &self.b;
        let den = Complex::with_val(prec, tau * &self.c) + &self.d;
        Complex::with_val(prec, num / den)
    }
}

/// Derived constants of a signature at a working precision.
#[derive(Clone, Debug)]
pub struct GroupConstants {
    pub signature: Signature,
    pub prec: u32,
    /// Cusp width h₃ = 2cos(π/p) + 2cos(π/q).
    pub h3: Float,
    pub l: u64,
    pub n_delta: u64,
    /// ζ₁ = −e^{−πi/p}, fixed point of M₁ (on ∂ℋ when p = ∞).
    pub zeta1: Complex,
    /// ζ₂ = e^{πi/q}, fixed point of M₂ (on ∂ℋ when q = ∞).
    pub zeta2: Complex,
    pub m1: Mat2,
    pub m2: Mat2,
    pub m3: Mat2,
    pub arithmetic: bool,
    /// The normalizing constant q̃₃/e^{2πiτ/h₃}; filled by
    /// [`crate::numeric::compute_alpha3`].
    pub alpha3: Option<crate::numeric::Alpha3>,
}

fn cos_pi_over(prec: u32, n: &VertexOrder) -> Float {
    match n {
        VertexOrder::Finite(k) => {
            let pi = Float::with_val(prec, rug::float::Constant::Pi);
            (pi / *k).cos()
        }
        VertexOrder::Infinity => Float::with_val(prec, 1),
    }
}

/// Elliptic element fixing x₀ + iy₀ that conjugates to the rotation
/// [[cos φ, sin φ], [−sin φ, cos φ]] at i, with φ = π/n.
fn elliptic_at(prec: u32, x0: &Float, y0: &Float, n: u32) -> Mat2 {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let phi = pi / n;
    let (sin, cos) = phi.sin_cos(Float::new(prec));
    let sy = Float::with_val(prec, y0.sqrt_ref());
    let sy_inv = Float::with_val(prec, sy.recip_ref());
    // A = [[sqrt(y0), x0/sqrt(y0)], [0, 1/sqrt(y0)]] sends i to x0 + i y0.
    let a = Mat2 {
        a: sy.clone(),
        b: Float::with_val(prec, x0 * &sy_inv),
        c: Float::with_val(prec, 0),
        d: sy_inv,
    };
    let r = Mat2 {
        a: cos.clone(),
        b: sin.clone(),
        c: Float::with_val(prec, -&sin),
        d: cos,
    };
    a.mul(&r).mul(&a.inv_det1())
}

/// Parabolic element fixing the real point x₀, with parameter t:
/// Id + t·[[x₀, −x₀²], [1, −x₀]].
fn parabolic_at(prec: u32, x0: i64, t: i64) -> Mat2 {
    let f = |v: i64| Float::with_val(prec, v);
    Mat2 {
        a: f(1 + t * x0),
        b: f(-t * x0 * x0),
        c: f(t),
        d: f(1 - t * x0),
    }
}

/// Populates every field of [`GroupConstants`] except α₃.
pub fn derive_constants(sig: &Signature, prec: u32) -> GroupConstants {
    let cos_p = cos_pi_over(prec, &sig.p());
    let cos_q = cos_pi_over(prec, &sig.q());
    let h3 = Float::with_val(prec, &cos_p + &cos_q) * 2u32;

    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    // zeta1 = -e^{-pi i/p} = -cos(pi/p) + i sin(pi/p)
    let zeta1 = match sig.p() {
        VertexOrder::Finite(p) => {
            let (sin, cos) = Float::with_val(prec, &pi / p).sin_cos(Float::new(prec));
            Complex::with_val(prec, (-cos, sin))
        }
        VertexOrder::Infinity => Complex::with_val(prec, (-1, 0)),
    };
    // zeta2 = e^{pi i/q} = cos(pi/q) + i sin(pi/q)
    let zeta2 = match sig.q() {
        VertexOrder::Finite(q) => {
            let (sin, cos) = Float::with_val(prec, &pi / q).sin_cos(Float::new(prec));
            Complex::with_val(prec, (cos, sin))
        }
        VertexOrder::Infinity => Complex::with_val(prec, (1, 0)),
    };

    let m3 = Mat2 {
        a: Float::with_val(prec, 1),
        b: h3.clone(),
        c: Float::with_val(prec, 0),
        d: Float::with_val(prec, 1),
    };
    let m1 = match sig.p() {
        VertexOrder::Finite(p) => {
            elliptic_at(prec, &Float::with_val(prec, zeta1.real()), &Float::with_val(prec, zeta1.imag()), p)
        }
        // Both orders infinite: the unique nontrivial parameter making
        // M₂ = M₁⁻¹M₃⁻¹ parabolic as well.
        VertexOrder::Infinity => parabolic_at(prec, -1, -1),
    };
    // M₁M₂M₃ = 1 in PSL(2, R) pins M₂.
    let m2 = m1.inv_det1().mul(&m3.inv_det1());

    GroupConstants {
        signature: *sig,
        prec,
        h3,
        l: sig.l(),
        n_delta: sig.n_delta(),
        zeta1,
        zeta2,
        m1,
        m2,
        m3,
        arithmetic: is_arithmetic(sig),
        alpha3: None,
    }
}
