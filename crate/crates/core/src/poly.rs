//! Dense univariate polynomials over ℚ, plus the handful of exact
//! operations the certificate pipeline needs: evaluation, derivative,
//! exact division, gcd, and Yun's square-free decomposition (so root
//! multiplicities of rational certificates are exact, not clustered).

use rug::Rational;

/// Coefficients in ascending order; invariant: no trailing zeros
/// (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map(|c| c.cmp0() == std::cmp::Ordering::Equal) == Some(true) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Rational::from(c * Rational::from(i as u64)))
            .collect();
        RatPoly::new(coeffs)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_default();
            let b = o.coeffs.get(i).cloned().unwrap_or_default();
            out.push(a - b);
        }
        RatPoly::new(out)
    }

    /// Euclidean division; returns (quotient, remainder).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Rational::new(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = Rational::from(rem.last().unwrap() / lead);
            if f.cmp0() != std::cmp::Ordering::Equal {
                quo[k] = f.clone();
                for (i, c) in d.coeffs.iter().enumerate() {
                    let t = Rational::from(c * &f);
                    rem[k + i] -= t;
                }
            }
            rem.pop();
        }
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => {
                let inv = Rational::from(lead.clone().recip());
                RatPoly::new(
                    self.coeffs
                        .iter()
                        .map(|c| Rational::from(c * &inv))
                        .collect(),
                )
            }
        }
    }

    /// Yun's square-free decomposition: pairs (factor, multiplicity) with
    /// the factors square-free, pairwise coprime, and
    /// ∏ factorᵢ^multᵢ = monic(self).
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        if a0.degree() == Some(0) {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut i = 1u32;
        loop {
            let d = c.sub(&b.derivative());
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            i += 1;
            if b.degree() == Some(0) {
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> RatPoly {
        RatPoly::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[2, 0, -3, 1, 4]);
        let b = p(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        let back = q.mul(&b);
        let n = back.coeffs.len().max(r.coeffs.len());
        let sum = RatPoly::new(
            (0..n)
                .map(|i| {
                    Rational::from(
                        back.coeffs.get(i).cloned().unwrap_or_default()
                            + r.coeffs.get(i).cloned().unwrap_or_default(),
                    )
                })
                .collect(),
        );
        assert_eq!(sum, a);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let shared = p(&[-2, 1]);
        let a = shared.mul(&p(&[1, 1]));
        let b = shared.mul(&p(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), shared.monic());
    }

    #[test]
    fn squarefree_of_power() {
        // (x - 2)^6 (x + 1)
        let lin = p(&[-2, 1]);
        let mut f = p(&[1, 1]);
        for _ in 0..6 {
            f = f.mul(&lin);
        }
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        for (fac, m) in &dec {
            if *m == 6 {
                assert_eq!(*fac, lin.monic());
            } else {
                assert_eq!(*m, 1);
                assert_eq!(*fac, p(&[1, 1]).monic());
            }
        }
    }

    #[test]
    fn eval_horner() {
        let f = p(&[1, -3, 2]);
        assert_eq!(f.eval(&Rational::from(2)), Rational::from(3));
        assert_eq!(f.eval(&Rational::from(1)), Rational::from(0));
    }
}
