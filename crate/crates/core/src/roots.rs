//! Simultaneous polynomial root finding (Aberth–Ehrlich) at working
//! precision, with residual-based error radii.
//!
//! Exact rational certificates should be square-freed first
//! ([`crate::poly::RatPoly::squarefree_decomposition`]); the iteration here
//! assumes simple roots and converges cubically to them.

use crate::field::Ball;
use rug::{Complex, Float};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum RootError {
    #[error("leading coefficient is zero or not certified nonzero")]
    DegenerateLeading,
    #[error("aberth iteration failed to converge within {0} sweeps")]
    NoConvergence(usize),
}

fn eval_poly(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::new(prec);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

fn eval_poly_deriv(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::new(prec);
    for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc *= z;
        acc += Complex::with_val(prec, c * i as u32);
    }
    acc
}

/// All roots of the polynomial with the given ascending coefficients
/// (degree = len − 1 ≥ 1), as midpoints with residual-derived radii.
///
/// Trailing zero coefficients (exact roots at the origin) must be deflated
/// by the caller if exactness there matters; this routine treats them
/// numerically like any other root.
pub fn aberth_roots(coeffs: &[Ball], prec: u32) -> Result<Vec<Ball>, RootError> {
    let n = coeffs.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let lead = &coeffs[n - 1];
    if lead.contains_zero() {
        return Err(RootError::DegenerateLeading);
    }
    let deg = n - 1;
    let mids: Vec<Complex> = coeffs
        .iter()
        .map(|b| Complex::with_val(prec, b.mid()))
        .collect();

    // Initial guesses on a circle of the Cauchy-style radius
    // 1 + max |a_i / a_d|, angles offset to avoid symmetry traps.
    let lead_abs = lead.abs_lower();
    let mut rmax = Float::with_val(64, 0);
    for b in coeffs.iter().take(deg) {
        let r = Float::with_val(64, b.abs_upper() / &lead_abs);
        if r > rmax {
            rmax = r;
        }
    }
    let radius = Float::with_val(prec, &rmax + 1u32);
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mut z: Vec<Complex> = (0..deg)
        .map(|j| {
            let angle = Float::with_val(prec, 2 * &pi) * Float::with_val(prec, j as u32)
                / Float::with_val(prec, deg as u32)
                + Float::with_val(prec, 0.4);
            let (s, c) = angle.sin_cos(Float::new(prec));
            Complex::with_val(prec, (&radius * &c, &radius * &s))
        })
        .collect();

    // Aberth sweeps; the iteration is stopped on Newton-correction size.
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    let max_sweeps = 64 + 8 * deg + 4 * prec as usize;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut max_step = Float::with_val(64, 0);
        for j in 0..deg {
            let pz = eval_poly(&mids, &z[j]);
            let dz = eval_poly_deriv(&mids, &z[j]);
            if dz.is_zero() {
                // nudge off a critical point
                z[j] += Complex::with_val(prec, (1e-3, 1.3e-3));
                max_step = Float::with_val(64, 1);
                continue;
            }
            let newton = Complex::with_val(prec, &pz / &dz);
            let mut s = Complex::new(prec);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    let d = Complex::with_val(prec, &z[j] - zk);
                    if d.is_zero() {
                        continue;
                    }
                    s += d.recip();
                }
            }
            let denom = Complex::with_val(prec, 1u32) - Complex::with_val(prec, &newton * &s);
            let step = if denom.is_zero() {
                newton
            } else {
                Complex::with_val(prec, &newton / &denom)
            };
            let sz = Float::with_val(64, step.abs_ref());
            let scale = Float::with_val(64, z[j].abs_ref()) + 1u32;
            if Float::with_val(64, &sz / &scale) > max_step {
                max_step = Float::with_val(64, &sz / &scale);
            }
            z[j] -= step;
        }
        if max_step < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(RootError::NoConvergence(max_sweeps));
    }

    // Error radius per root: |p(z)| / |p'(z)|, inflated by the coefficient
    // uncertainty |Σ radᵢ zⁱ| / |p'(z)|, then doubled for slack.
    let out = z
        .into_iter()
        .map(|zj| {
            let pz = eval_poly(&mids, &zj);
            let dz = eval_poly_deriv(&mids, &zj);
            let dz_abs = Float::with_val(64, dz.abs_ref());
            let mut coeff_term = Float::with_val(64, 0);
            let zj_abs = Float::with_val(64, zj.abs_ref());
            let mut pow = Float::with_val(64, 1);
            for b in coeffs {
                coeff_term += Float::with_val(64, b.rad() * &pow);
                pow *= &zj_abs;
            }
            let resid = Float::with_val(64, pz.abs_ref());
            let rad = if dz_abs.is_zero() {
                Float::with_val(64, 1)
            } else {
                Float::with_val(64, (resid + coeff_term) / dz_abs) * 2u32
            };
            Ball::new(zj, rad)
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(prec: u32, cs: &[(f64, f64)]) -> Vec<Ball> {
        cs.iter()
            .map(|&(re, im)| Ball::exact(Complex::with_val(prec, (re, im))))
            .collect()
    }

    fn closest_dist(roots: &[Ball], target: (f64, f64)) -> f64 {
        roots
            .iter()
            .map(|r| {
                let d = Complex::with_val(64, (target.0, target.1)) - r.mid().clone();
                Float::with_val(64, d.abs_ref()).to_f64()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn quadratic_roots() {
        // x^2 + 1 = 0
        let p = poly(128, &[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let roots = aberth_roots(&p, 128).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(closest_dist(&roots, (0.0, 1.0)) < 1e-30);
        assert!(closest_dist(&roots, (0.0, -1.0)) < 1e-30);
    }

    #[test]
    fn wilkinson_fragment() {
        // (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let p = poly(192, &[(24.0, 0.0), (-50.0, 0.0), (35.0, 0.0), (-10.0, 0.0), (1.0, 0.0)]);
        let roots = aberth_roots(&p, 192).unwrap();
        for t in 1..=4 {
            assert!(closest_dist(&roots, (t as f64, 0.0)) < 1e-40);
        }
        // residual radii are honest
        for r in &roots {
            assert!(r.rad().to_f64() < 1e-30);
        }
    }

    #[test]
    fn scaled_high_degree() {
        // roots at k/7 for k = -3..3, lead coefficient 5
        let mut cs = vec![Ball::exact(Complex::with_val(192, 5))];
        let mut coeffs: Vec<Complex> = vec![Complex::with_val(192, 5)];
        for k in -3i32..=3 {
            let root = Complex::with_val(192, (k as f64 / 7.0, 0.0));
            let mut next = vec![Complex::new(192); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= Complex::with_val(192, c * &root);
            }
            coeffs = next;
        }
        cs = coeffs.into_iter().map(Ball::exact).collect();
        let roots = aberth_roots(&cs, 192).unwrap();
        assert_eq!(roots.len(), 7);
        for k in -3i32..=3 {
            assert!(closest_dist(&roots, (k as f64 / 7.0, 0.0)) < 1e-35, "root {k}/7");
        }
    }
}
