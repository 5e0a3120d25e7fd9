//! Truncated Laurent series over a pluggable coefficient field.
//!
//! A series stores exact knowledge of the coefficients for exponents
//! `valuation .. order`; everything at `order` and beyond is unknown (not
//! zero). Coefficients are materialized for `valuation .. valuation + len`;
//! exponents between the materialized window and `order` are known zeros.
//! Every operation computes the exact provable order of its result, so
//! precision loss is explicit rather than silent:
//!
//! - `add`:  order = min(Na, Nb)
//! - `mul`:  order = min(va + Nb, vb + Na)
//! - `inv`:  order = Na − 2·va
//! - `theta`, `exp`, `log`, `revert`: order preserved
//!
//! The zero series is canonical: empty coefficient list with
//! `valuation == order`. Exactly-known data (constants, monomials) carries
//! the sentinel order [`EXACT_ORDER`].

use crate::field::CoefficientField;
use thiserror::Error;

/// Order value used for exactly-known series (constants, monomials built
/// from exact data). Large enough to dominate every realistic truncation,
/// small enough that sums never overflow `i64`.
pub const EXACT_ORDER: i64 = i64::MAX / 4;

/// Orders above this are treated as "effectively exact": operations whose
/// result would have infinitely many terms (inverse, exp, log of such a
/// series) demand an explicit truncation first.
const MATERIALIZE_LIMIT: i64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series that is zero through its truncation order")]
    DivisionByZeroSeries,
    #[error("operand has an invalid valuation for this operation: {0}")]
    BadValuation(String),
    #[error("truncation order too small: {0}")]
    InsufficientOrder(String),
    #[error("operation on exactly-known data would not terminate: {0}; truncate first")]
    NeedsTruncation(String),
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries<F: CoefficientField> {
    field: F,
    /// Exponent of the first materialized coefficient.
    val: i64,
    /// Coefficients for exponents `val .. val + coeffs.len()`.
    coeffs: Vec<F::Elem>,
    /// First unknown exponent; exponents in `val + coeffs.len() .. order`
    /// are known zeros.
    order: i64,
}

impl<F: CoefficientField> TruncatedSeries<F> {
    /// Builds a series from raw parts and normalizes (strips zero leading
    /// and trailing coefficients, canonicalizes the zero series).
    pub fn new(field: F, val: i64, coeffs: Vec<F::Elem>, order: i64) -> Self {
        assert!(
            val + coeffs.len() as i64 <= order,
            "materialized window exceeds truncation order"
        );
        let mut s = TruncatedSeries { field, val, coeffs, order };
        s.normalize();
        s
    }

    /// The zero series, known through `order`.
    pub fn zero(field: F, order: i64) -> Self {
        TruncatedSeries { field, val: order, coeffs: Vec::new(), order }
    }

    /// An exactly-known constant.
    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::monomial(field, c, 0)
    }

    /// The monomial `c·wᵏ`, exactly known.
    pub fn monomial(field: F, c: F::Elem, k: i64) -> Self {
        if field.is_zero(&c) {
            return Self::zero(field, EXACT_ORDER);
        }
        TruncatedSeries { field, val: k, coeffs: vec![c], order: EXACT_ORDER }
    }

    fn normalize(&mut self) {
        let mut lead = 0usize;
        while lead < self.coeffs.len() && self.field.is_zero(&self.coeffs[lead]) {
            lead += 1;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while let Some(last) = self.coeffs.last() {
            if self.field.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.val = self.order;
        }
    }

    /// Extends the *claimed* knowledge to `order`, treating the gap as
    /// zeros. Only sound where the caller supplies the correctness argument
    /// (Newton iteration seeds).
    pub(crate) fn assume_order(mut self, order: i64) -> Self {
        if self.order < order {
            if self.coeffs.is_empty() {
                self.val = order;
            }
            self.order = order;
        }
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Zero through the truncation order.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest nonzero exponent (== order for the zero series).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// First unknown exponent.
    pub fn order(&self) -> i64 {
        self.order
    }

    fn window_end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Coefficient at exponent `k`: zero below the valuation and in the
    /// implicit-zero gap, `None` at or beyond the truncation order.
    pub fn coeff(&self, k: i64) -> Option<F::Elem> {
        if k >= self.order {
            return None;
        }
        if k < self.val || k >= self.window_end() {
            return Some(self.field.zero());
        }
        Some(self.coeffs[(k - self.val) as usize].clone())
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.first()
    }

    /// Restricts knowledge to exponents `< order`.
    pub fn truncated(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let keep = (order - self.val).clamp(0, self.coeffs.len() as i64) as usize;
        let mut s = TruncatedSeries {
            field: self.field.clone(),
            val: self.val.min(order),
            coeffs: self.coeffs[..keep].to_vec(),
            order,
        };
        s.normalize();
        s
    }

    /// Multiplies by `wᵏ`.
    pub fn shifted(&self, k: i64) -> Self {
        TruncatedSeries {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            order: self.order.saturating_add(k).min(EXACT_ORDER),
        }
    }

    pub fn add(&self, b: &Self) -> Self {
        let order = self.order.min(b.order);
        if self.is_zero() {
            return b.truncated(order);
        }
        if b.is_zero() {
            return self.truncated(order);
        }
        let val = self.val.min(b.val);
        let hi = self.window_end().max(b.window_end()).min(order);
        let mut coeffs = Vec::with_capacity((hi - val).max(0) as usize);
        for k in val..hi {
            let x = self.coeff(k).unwrap_or_else(|| self.field.zero());
            let y = b.coeff(k).unwrap_or_else(|| self.field.zero());
            coeffs.push(self.field.add(&x, &y));
        }
        TruncatedSeries::new(self.field.clone(), val, coeffs, order)
    }

    pub fn sub(&self, b: &Self) -> Self {
        self.add(&b.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            field: self.field.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), EXACT_ORDER);
        }
        let mut s = TruncatedSeries {
            field: self.field.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
            order: self.order,
        };
        s.normalize();
        s
    }

    pub fn mul(&self, b: &Self) -> Self {
        // Provable order: unknown tails enter at va + Nb and vb + Na.
        let order = self
            .val
            .saturating_add(b.order)
            .min(b.val.saturating_add(self.order))
            .min(EXACT_ORDER);
        if self.is_zero() || b.is_zero() {
            return Self::zero(self.field.clone(), order);
        }
        let val = self.val + b.val;
        let window = (order - val)
            .clamp(0, (self.coeffs.len() + b.coeffs.len()) as i64 - 1) as usize;
        let mut coeffs = vec![self.field.zero(); window];
        for (i, x) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= window {
                    break;
                }
                let t = self.field.mul(x, y);
                coeffs[k] = self.field.add(&coeffs[k], &t);
            }
        }
        TruncatedSeries::new(self.field.clone(), val, coeffs, order)
    }

    /// Multiplicative inverse of a series with invertible leading coefficient.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZeroSeries);
        }
        let lead = self
            .field
            .inv(&self.coeffs[0])
            .ok_or(SeriesError::DivisionByZeroSeries)?;
        if self.coeffs.len() == 1 {
            // c·wᵛ inverts exactly.
            let order = self.order.saturating_sub(2 * self.val).min(EXACT_ORDER);
            return Ok(TruncatedSeries::new(self.field.clone(), -self.val, vec![lead], order));
        }
        if self.order - self.val > MATERIALIZE_LIMIT {
            return Err(SeriesError::NeedsTruncation("series inverse".into()));
        }
        // a = c w^v (1 + s)  =>  a^{-1} = c^{-1} w^{-v} (1 + s)^{-1}
        let order = self.order - 2 * self.val;
        let n = (self.order - self.val) as usize;
        let mut inv = vec![self.field.zero(); n];
        inv[0] = lead.clone();
        for k in 1..n {
            // sum_{j<=k} inv[j] * a[k-j] = 0
            let mut acc = self.field.zero();
            for j in 0..k {
                let idx = k - j;
                if idx < self.coeffs.len() {
                    let t = self.field.mul(&inv[j], &self.coeffs[idx]);
                    acc = self.field.add(&acc, &t);
                }
            }
            inv[k] = self.field.neg(&self.field.mul(&acc, &lead));
        }
        Ok(TruncatedSeries::new(self.field.clone(), -self.val, inv, order))
    }

    /// Integer power, negative exponents via inversion.
    pub fn pow(&self, m: i64) -> Result<Self, SeriesError> {
        if m == 0 {
            return Ok(Self::constant(self.field.clone(), self.field.one()));
        }
        let base = if m < 0 { self.inv()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq.clone());
        }
        Ok(acc.unwrap())
    }

    /// The operator `θ = w·d/dw`: coefficient at exponent k becomes k·aₖ.
    pub fn theta(&self) -> Self {
        let mut s = TruncatedSeries {
            field: self.field.clone(),
            val: self.val,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| self.field.mul_i64(c, self.val + i as i64))
                .collect(),
            order: self.order,
        };
        s.normalize();
        s
    }

    /// Ordinary derivative d/dw.
    pub fn derivative(&self) -> Self {
        let mut s = TruncatedSeries {
            field: self.field.clone(),
            val: self.val - 1,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| self.field.mul_i64(c, self.val + i as i64))
                .collect(),
            order: self.order.saturating_sub(1),
        };
        s.normalize();
        s
    }

    /// Formal exponential; requires valuation ≥ 1.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Ok(Self::constant(self.field.clone(), self.field.one())
                .truncated(self.order));
        }
        if self.val < 1 {
            return Err(SeriesError::BadValuation(format!(
                "series_exp requires valuation >= 1, got {}",
                self.val
            )));
        }
        if self.order > MATERIALIZE_LIMIT {
            return Err(SeriesError::NeedsTruncation("series exp".into()));
        }
        let n = self.order.max(1) as usize;
        // e' = a'·e, solved coefficient by coefficient; e_0 = 1.
        let mut a = vec![self.field.zero(); n];
        for k in self.val..self.window_end().min(self.order) {
            a[k as usize] = self.coeff(k).unwrap();
        }
        let mut e = vec![self.field.zero(); n];
        e[0] = self.field.one();
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k {
                if self.field.is_zero(&a[j]) {
                    continue;
                }
                let t = self.field.mul(&self.field.mul_i64(&a[j], j as i64), &e[k - j]);
                acc = self.field.add(&acc, &t);
            }
            e[k] = self.field.div_i64(&acc, k as i64);
        }
        Ok(TruncatedSeries::new(self.field.clone(), 0, e, self.order))
    }

    /// Formal logarithm of `1 + (valuation ≥ 1 terms)`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeff(0).ok_or_else(|| {
            SeriesError::InsufficientOrder("series_log needs the constant term".into())
        })?;
        if self.val < 0 || !self.field.is_one(&c0) {
            return Err(SeriesError::BadValuation(
                "series_log requires the form 1 + O(w)".into(),
            ));
        }
        if self.order > MATERIALIZE_LIMIT {
            return Err(SeriesError::NeedsTruncation("series log".into()));
        }
        // log(a)' = a'/a, integrated term by term.
        let d = self.derivative().mul(&self.inv()?);
        let order = self.order;
        let mut coeffs = Vec::new();
        for k in 1..order {
            match d.coeff(k - 1) {
                Some(c) => coeffs.push(self.field.div_i64(&c, k)),
                None => break,
            }
        }
        let ord = 1 + coeffs.len() as i64;
        Ok(TruncatedSeries::new(self.field.clone(), 1, coeffs, ord.min(order)))
    }

    /// Composition `self ∘ b` for `b` with valuation ≥ 1, via Horner on the
    /// regular part plus powers of `b⁻¹` for the principal part.
    pub fn compose(&self, b: &Self) -> Result<Self, SeriesError> {
        if b.val < 1 && !b.is_zero() {
            return Err(SeriesError::BadValuation(
                "composition requires inner valuation >= 1".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.field.clone(), self.order));
        }
        if self.order > MATERIALIZE_LIMIT {
            return Err(SeriesError::NeedsTruncation("composition".into()));
        }
        // Horner over the regular part (exponents 0 .. order).
        let mut acc = Self::zero(self.field.clone(), EXACT_ORDER);
        let hi = self.window_end() - 1;
        if hi >= 0 {
            for k in (0..=hi).rev() {
                acc = acc.mul(b);
                if let Some(c) = self.coeff(k) {
                    if !self.field.is_zero(&c) {
                        acc = acc.add(&Self::constant(self.field.clone(), c));
                    }
                }
            }
        }
        // Principal part via powers of b^{-1}.
        if self.val < 0 {
            let binv = b.inv()?;
            let mut p = binv.clone();
            for k in 1..=(-self.val) {
                if let Some(c) = self.coeff(-k) {
                    if !self.field.is_zero(&c) {
                        acc = acc.add(&p.scale(&c));
                    }
                }
                if k < -self.val {
                    p = p.mul(&binv);
                }
            }
        }
        // Unknown tail of self enters at exponent order(self)·val(b).
        let tail_order = self.order.saturating_mul(b.val.max(1)).min(EXACT_ORDER);
        Ok(acc.truncated(tail_order.min(acc.order())))
    }

    /// Compositional inverse of a series `a = c₁w + …` with invertible `c₁`:
    /// returns `b` with `a(b(w)) = w` through the provable order.
    ///
    /// Newton iteration with order doubling: b ← b − (a∘b − w)/(a′∘b).
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if self.is_zero() || self.val != 1 {
            return Err(SeriesError::BadValuation(format!(
                "series_revert requires valuation exactly 1, got {}",
                self.valuation()
            )));
        }
        let c1 = self.coeffs.first().ok_or(SeriesError::DivisionByZeroSeries)?;
        let c1_inv = self
            .field
            .inv(c1)
            .ok_or(SeriesError::DivisionByZeroSeries)?;
        let n = self.order.min(MATERIALIZE_LIMIT);
        if n < 2 {
            return Err(SeriesError::InsufficientOrder(
                "reversion needs order >= 2".into(),
            ));
        }
        let w = Self::monomial(self.field.clone(), self.field.one(), 1);
        let deriv = self.derivative();
        // Start from b = w / c1, correct through order 2.
        let mut b = w.scale(&c1_inv).truncated(2);
        let mut reach = 2i64;
        while reach < n {
            reach = (reach * 2).min(n);
            let a_trunc = self.truncated(reach);
            let d_trunc = deriv.truncated(reach - 1);
            b = b.assume_order(reach);
            let fb = a_trunc.compose(&b)?.sub(&w.truncated(reach));
            if fb.is_zero() {
                continue;
            }
            let dfb = d_trunc.compose(&b)?;
            let corr = fb.mul(&dfb.inv()?);
            b = b.sub(&corr).truncated(reach);
        }
        Ok(b.assume_order(n).truncated(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use rug::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn s(val: i64, coeffs: &[(i64, i64)]) -> TruncatedSeries<Rationals> {
        let cs: Vec<Rational> = coeffs.iter().map(|&(n, d)| r(n, d)).collect();
        let order = val + cs.len() as i64;
        TruncatedSeries::new(Rationals, val, cs, order)
    }

    #[test]
    fn mul_laurent_example() {
        // (w^{-1} + 1)(w) = 1 + w
        let a = s(-1, &[(1, 1), (1, 1)]);
        let b = TruncatedSeries::monomial(Rationals, r(1, 1), 1);
        let p = a.mul(&b);
        assert_eq!(p.valuation(), 0);
        assert_eq!(p.coeff(0), Some(r(1, 1)));
        assert_eq!(p.coeff(1), Some(r(1, 1)));
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 + w)^{-1} = 1 - w + w^2 - ...
        let a = s(0, &[(1, 1), (1, 1)]).assume_order(6);
        let inv = a.pow(-1).unwrap();
        for k in 0..6 {
            assert_eq!(inv.coeff(k), Some(r(if k % 2 == 0 { 1 } else { -1 }, 1)));
        }
    }

    #[test]
    fn square_of_j_like_leading_terms() {
        // (w^{-1} + 744/1728 + ...)^2 = w^{-2} + (1488/1728) w^{-1} + ...
        let a = s(-1, &[(1, 1), (744, 1728), (196884, 2985984)]);
        let sq = a.pow(2).unwrap();
        assert_eq!(sq.valuation(), -2);
        assert_eq!(sq.coeff(-2), Some(r(1, 1)));
        assert_eq!(sq.coeff(-1), Some(r(1488, 1728)));
    }

    #[test]
    fn theta_rules() {
        let a = TruncatedSeries::monomial(Rationals, r(1, 1), -1).truncated(5);
        let t = a.theta();
        assert_eq!(t.coeff(-1), Some(r(-1, 1)));
        let c = TruncatedSeries::constant(Rationals, r(7, 2)).truncated(5);
        assert!(c.theta().is_zero());
        // theta(w^3 - (1/72) w^4) = 3 w^3 - (4/72) w^4
        let b = s(3, &[(1, 1), (-1, 72)]);
        let tb = b.theta();
        assert_eq!(tb.coeff(3), Some(r(3, 1)));
        assert_eq!(tb.coeff(4), Some(r(-4, 72)));
    }

    #[test]
    fn exp_of_w() {
        let a = s(1, &[(1, 1)]).assume_order(6);
        let e = a.exp().unwrap();
        assert_eq!(e.coeff(0), Some(r(1, 1)));
        assert_eq!(e.coeff(1), Some(r(1, 1)));
        assert_eq!(e.coeff(2), Some(r(1, 2)));
        assert_eq!(e.coeff(3), Some(r(1, 6)));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = TruncatedSeries::zero(Rationals, 8);
        let e = z.exp().unwrap();
        assert_eq!(e.coeff(0), Some(r(1, 1)));
        assert_eq!(e.order(), 8);
    }

    #[test]
    fn log_exp_roundtrip() {
        // log(exp(3w - w^2)) = 3w - w^2
        let a = s(1, &[(3, 1), (-1, 1)]).assume_order(8);
        let round = a.exp().unwrap().log().unwrap();
        assert_eq!(round.coeff(1), Some(r(3, 1)));
        assert_eq!(round.coeff(2), Some(r(-1, 1)));
        for k in 3..7 {
            assert_eq!(round.coeff(k), Some(r(0, 1)));
        }
    }

    #[test]
    fn exp_rejects_constant_term() {
        let a = s(0, &[(1, 1), (1, 1)]);
        assert!(matches!(a.exp(), Err(SeriesError::BadValuation(_))));
    }

    #[test]
    fn revert_identity() {
        let w = TruncatedSeries::monomial(Rationals, r(1, 1), 1).truncated(9);
        let b = w.revert().unwrap();
        assert_eq!(b.coeff(1), Some(r(1, 1)));
        for k in 2..9 {
            assert_eq!(b.coeff(k), Some(r(0, 1)));
        }
    }

    #[test]
    fn revert_catalan_signs() {
        // w = x + x^2  =>  x = w - w^2 + 2w^3 - 5w^4 + 14w^5 - ...
        let a = s(1, &[(1, 1), (1, 1)]).assume_order(8);
        let b = a.revert().unwrap();
        assert_eq!(b.coeff(1), Some(r(1, 1)));
        assert_eq!(b.coeff(2), Some(r(-1, 1)));
        assert_eq!(b.coeff(3), Some(r(2, 1)));
        assert_eq!(b.coeff(4), Some(r(-5, 1)));
        assert_eq!(b.coeff(5), Some(r(14, 1)));
        // composition check a(b(w)) = w
        let comp = a.compose(&b).unwrap();
        assert_eq!(comp.coeff(1), Some(r(1, 1)));
        for k in 2..comp.order() {
            assert_eq!(comp.coeff(k), Some(r(0, 1)), "residual at w^{k}");
        }
    }

    #[test]
    fn division_by_zero_series_is_an_error() {
        let z = TruncatedSeries::<Rationals>::zero(Rationals, 5);
        assert!(matches!(z.inv(), Err(SeriesError::DivisionByZeroSeries)));
    }

    #[test]
    fn mul_order_rule() {
        let a = s(-1, &[(1, 1), (2, 1), (3, 1)]); // val -1, order 2
        let b = s(2, &[(5, 1), (7, 1)]); // val 2, order 4
        let p = a.mul(&b);
        // min(va + Nb, vb + Na) = min(-1 + 4, 2 + 2) = 3
        assert_eq!(p.order(), 3);
        assert_eq!(p.valuation(), 1);
        assert_eq!(p.coeff(1), Some(r(5, 1)));
        assert_eq!(p.coeff(2), Some(r(17, 1)));
    }

    #[test]
    fn implicit_zero_gap_reads_as_zero() {
        let a = TruncatedSeries::new(Rationals, 1, vec![r(4, 1)], 10);
        assert_eq!(a.coeff(1), Some(r(4, 1)));
        assert_eq!(a.coeff(5), Some(r(0, 1)));
        assert_eq!(a.coeff(9), Some(r(0, 1)));
        assert_eq!(a.coeff(10), None);
        let sum = a.add(&a);
        assert_eq!(sum.coeff(1), Some(r(8, 1)));
        assert_eq!(sum.coeff(7), Some(r(0, 1)));
    }
}
