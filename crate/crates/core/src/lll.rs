//! Exact LLL lattice basis reduction over the integers, with rational
//! Gram–Schmidt bookkeeping (Lovász parameter δ = 3/4).
//!
//! Dimensions here are tiny (≤ max recognition degree + 3), so the
//! textbook algorithm with exact arithmetic is both simplest and fast.

use rug::{Integer, Rational};

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        acc += Integer::from(x * y);
    }
    acc
}

/// In-place LLL reduction of the row basis.
pub fn lll_reduce(basis: &mut Vec<Vec<Integer>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = Rational::from((3u32, 4u32));

    // mu[i][j] for j < i, and squared norms b*_i of the GS vectors, kept as
    // exact rationals and recomputed incrementally.
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut bstar = vec![Rational::new(); n];

    // full Gram-Schmidt from scratch (dimensions are small)
    let gram_schmidt = |basis: &Vec<Vec<Integer>>,
                        mu: &mut Vec<Vec<Rational>>,
                        bstar: &mut Vec<Rational>| {
        let n = basis.len();
        // b*_i = |b_i|^2 - sum_j mu_ij^2 b*_j ; mu_ij = <b_i, b*_j>/b*_j
        // computed via the recursive projection representation.
        let mut proj: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Rational> =
                basis[i].iter().map(|x| Rational::from(x)).collect();
            for j in 0..i {
                let mut num = Rational::new();
                for (x, y) in basis[i].iter().zip(&proj[j]) {
                    num += Rational::from(y * Rational::from(x));
                }
                let m = if bstar[j].cmp0() == std::cmp::Ordering::Equal {
                    Rational::new()
                } else {
                    Rational::from(&num / &bstar[j])
                };
                mu[i][j] = m.clone();
                for (vk, pk) in v.iter_mut().zip(&proj[j]) {
                    *vk -= Rational::from(pk * &m);
                }
            }
            let mut norm = Rational::new();
            for x in &v {
                norm += Rational::from(x * x);
            }
            mu[i][i] = Rational::from(1);
            bstar[i] = norm;
            proj.push(v);
        }
    };

    gram_schmidt(basis, &mut mu, &mut bstar);

    let mut k = 1usize;
    while k < n {
        // size reduction
        for j in (0..k).rev() {
            let m = mu[k][j].clone();
            let rounded = rational_round(&m);
            if rounded.cmp0() != std::cmp::Ordering::Equal {
                let (head, tail) = basis.split_at_mut(k);
                let bj = &head[j];
                for (x, y) in tail[0].iter_mut().zip(bj.iter()) {
                    *x -= Integer::from(y * &rounded);
                }
                for l in 0..=j {
                    let t = Rational::from(&mu[j][l] * Rational::from(&rounded));
                    mu[k][l] -= t;
                }
            }
        }
        // Lovász condition
        let lhs = bstar[k].clone();
        let rhs = Rational::from(&delta - Rational::from(&mu[k][k - 1] * &mu[k][k - 1]))
            * &bstar[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            gram_schmidt(basis, &mut mu, &mut bstar);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
}

fn rational_round(r: &Rational) -> Integer {
    r.clone().round().into_numer_denom().0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[Integer]) -> Integer {
        dot(v, v)
    }

    #[test]
    fn round_halves_and_signs() {
        assert_eq!(rational_round(&Rational::from((7, 2))), 4);
        assert_eq!(rational_round(&Rational::from((-7, 2))), -4); // ties away from zero
        assert_eq!(rational_round(&Rational::from((1, 3))), 0);
        assert_eq!(rational_round(&Rational::from((-5, 3))), -2);
        assert_eq!(rational_round(&Rational::from(9)), 9);
    }

    #[test]
    fn reduces_classic_2d_lattice() {
        let mut b = vec![
            vec![Integer::from(1), Integer::from(1)],
            vec![Integer::from(1), Integer::from(0)],
        ];
        lll_reduce(&mut b);
        // shortest vectors of Z^2-equivalent lattice have norm 1
        assert!(norm2(&b[0]) <= 1);
    }

    #[test]
    fn finds_short_relation_vector() {
        // lattice encoding the relation 3*1 + 1*(-3) = 0 among (1, 3)
        // with classic knapsack-style scaling
        let s = Integer::from(1_000_000u64);
        let mut b = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(&s * 3u32)],
            vec![Integer::from(0), Integer::from(1), Integer::from(&s * 1u32)],
        ];
        lll_reduce(&mut b);
        // the short vector should be (1, -3, 0): 1*3s - 3*1s = 0
        let found = b.iter().any(|v| {
            v[2].cmp0() == std::cmp::Ordering::Equal
                && ((v[0] == 1 && v[1] == -3) || (v[0] == -1 && v[1] == 3))
        });
        assert!(found, "basis after reduction: {b:?}");
    }

    #[test]
    fn golden_ratio_relation() {
        // x^2 - x - 1 has root phi; encode 1, phi, phi^2 at scale 10^12
        let phi = 1.618033988749894848_f64;
        let s = 1e12;
        let mut b = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(0), Integer::from(s as i64)],
            vec![
                Integer::from(0),
                Integer::from(1),
                Integer::from(0),
                Integer::from((phi * s) as i64),
            ],
            vec![
                Integer::from(0),
                Integer::from(0),
                Integer::from(1),
                Integer::from((phi * phi * s) as i64),
            ],
        ];
        lll_reduce(&mut b);
        let found = b.iter().any(|v| {
            (v[0] == -1 && v[1] == -1 && v[2] == 1) || (v[0] == 1 && v[1] == 1 && v[2] == -1)
        });
        assert!(found, "expected +/-(−1, −1, 1, ~0) in {b:?}");
    }
}
