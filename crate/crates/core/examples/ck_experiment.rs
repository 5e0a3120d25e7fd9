// Scratch experiment: exact interpolation of the Hauptmodul coefficients
// c_0..c_5 as polynomials in (X, Y) = (1/p^2, 1/q^2), and timing probes.

use rug::Rational;
use triforms_core::group::{make_signature, Signature, VertexOrder};
use triforms_core::hauptmodul::hauptmodul_expansion;

fn sig(p: u32, q: u32) -> Signature {
    make_signature(VertexOrder::Finite(p), VertexOrder::Finite(q)).unwrap()
}

/// Solve the exact least-squares-free linear system A x = b by Gaussian
/// elimination; returns None if inconsistent/underdetermined rows conflict.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, cols: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    let mut piv_row = 0usize;
    let mut piv_cols = Vec::new();
    for col in 0..cols {
        let mut sel = None;
        for r in piv_row..rows {
            if a[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        a.swap(piv_row, sel);
        b.swap(piv_row, sel);
        let inv = Rational::from(a[piv_row][col].clone().recip());
        for c in col..cols {
            a[piv_row][c] = Rational::from(&a[piv_row][c] * &inv);
        }
        b[piv_row] = Rational::from(&b[piv_row] * &inv);
        for r in 0..rows {
            if r != piv_row && a[r][col] != 0 {
                let f = a[r][col].clone();
                for c in col..cols {
                    let t = Rational::from(&a[piv_row][c] * &f);
                    a[r][c] -= t;
                }
                let t = Rational::from(&b[piv_row] * &f);
                b[r] -= t;
            }
        }
        piv_cols.push(col);
        piv_row += 1;
        if piv_row == rows {
            break;
        }
    }
    // consistency of remaining rows
    for r in piv_row..rows {
        if b[r] != 0 {
            return None;
        }
    }
    let mut x = vec![Rational::new(); cols];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

fn main() {
    // pool of signatures
    let mut pool = Vec::new();
    for p in 2..=9u32 {
        for q in p..=12u32 {
            if make_signature(VertexOrder::Finite(p), VertexOrder::Finite(q)).is_ok() {
                pool.push(sig(p, q));
            }
        }
    }
    println!("pool size {}", pool.len());
    let t0 = std::time::Instant::now();
    let exps: Vec<_> = pool
        .iter()
        .map(|s| hauptmodul_expansion(s, 7).unwrap())
        .collect();
    println!("expansions to order 7 for {} signatures: {:?}", pool.len(), t0.elapsed());

    for k in 0..=5i64 {
        // monomials X^i Y^j with i + j <= dmax
        for dmax in 1..=(k as usize + 2) {
            let mut monos = Vec::new();
            for i in 0..=dmax {
                for j in 0..=(dmax - i) {
                    monos.push((i as u32, j as u32));
                }
            }
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (s, e) in pool.iter().zip(&exps) {
                let x = Rational::from(&s.recip_p() * &s.recip_p());
                let y = Rational::from(&s.recip_q() * &s.recip_q());
                let row: Vec<Rational> = monos
                    .iter()
                    .map(|&(i, j)| {
                        let mut m = Rational::from(1);
                        for _ in 0..i {
                            m *= &x;
                        }
                        for _ in 0..j {
                            m *= &y;
                        }
                        m
                    })
                    .collect();
                rows.push(row);
                rhs.push(e.c(k).unwrap());
            }
            if let Some(coef) = solve(rows.clone(), rhs.clone(), monos.len()) {
                let nonzero = coef.iter().filter(|c| **c != 0).count();
                println!(
                    "c_{k}: fits in (X,Y) degree <= {dmax}: {} monomials, {} nonzero",
                    monos.len(),
                    nonzero
                );
                // print the polynomial
                let terms: Vec<String> = monos
                    .iter()
                    .zip(&coef)
                    .filter(|(_, c)| **c != 0)
                    .map(|(&(i, j), c)| format!("({c})X^{i}Y^{j}"))
                    .collect();
                println!("   c_{k} = {}", terms.join(" + "));
                break;
            } else if dmax == k as usize + 2 {
                println!("c_{k}: NO exact fit up to degree {dmax} in (X, Y)");
            }
        }
    }

    // timing probe at higher orders
    for (p, q, n) in [(2u32, 3u32, 40i64), (2, 5, 80), (3, 4, 90), (2, 7, 120)] {
        let t = std::time::Instant::now();
        let e = hauptmodul_expansion(&sig(p, q), n).unwrap();
        let c_last = e.c(n - 2).unwrap();
        let digits = c_last.numer().significant_digits::<bool>().max(
            c_last.denom().significant_digits::<bool>(),
        );
        println!(
            "J({p},{q}) to order {n}: {:?} (last coeff ~{digits} bits)",
            t.elapsed()
        );
    }
}
