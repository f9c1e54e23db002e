//! Independent eigenvalue oracle for small symmetric matrices.
//!
//! The characteristic polynomial `det(xI - A)` is expanded over all
//! permutations (Leibniz), and its real roots are isolated by bisection
//! between the roots of its derivative. For integer matrices the polynomial
//! is split exactly into square-free factors first (Yun's algorithm over the
//! rationals), so repeated eigenvalues are found as simple roots of a factor.
//! Nothing here shares code with the Householder/QR solver under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Coefficients in ascending order, `p[i]` multiplies `x^i`.
type Poly = Vec<f64>;

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

fn mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `det(xI - A)` by permutation expansion; `a` is row-major `n x n`.
pub fn characteristic_polynomial(n: usize, a: &[f64]) -> Poly {
    let mut total = vec![0.0; n + 1];
    for (perm, sign) in permutations(n) {
        let mut term = vec![sign];
        for (i, &j) in perm.iter().enumerate() {
            let entry = if i == j {
                vec![-a[i * n + j], 1.0]
            } else {
                vec![-a[i * n + j]]
            };
            term = mul(&term, &entry);
        }
        for (t, c) in total.iter_mut().zip(term) {
            *t += c;
        }
    }
    total
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(p: &[f64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    p
}

/// Real roots of a real-rooted polynomial with simple roots, ascending.
pub fn real_roots_simple(p: &[f64]) -> Vec<f64> {
    let p = trim(p.to_vec());
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-p[0] / p[1]];
    }
    let lead = p[deg];
    let bound = 1.0 + p[..deg].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut cuts = vec![-bound];
    cuts.extend(real_roots_simple(&derivative(&p)));
    cuts.push(bound);
    let mut roots = Vec::with_capacity(deg);
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval(&p, lo), eval(&p, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval(&p, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots.dedup();
    roots
}

// ---------------------------------------------------------------------------
// exact square-free decomposition

type QPoly = Vec<BigRational>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn q_deriv(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

fn q_is_const(p: &QPoly) -> bool {
    p.len() == 1
}

fn q_monic(p: QPoly) -> QPoly {
    let lead = p.last().unwrap().clone();
    p.into_iter().map(|c| c / &lead).collect()
}

/// `(quotient, remainder)`.
fn q_divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let b = q_trim(b.clone());
    let mut r = q_trim(a.clone());
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &coef * bc;
        }
        q[shift] = coef;
        r.pop();
        r = q_trim(r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    (q_trim(q), r)
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (q_trim(a.clone()), q_trim(b.clone()));
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = q_divmod(&x, &y);
        x = y;
        y = r;
    }
    q_monic(x)
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let len = a.len().max(b.len());
    let get = |p: &QPoly, i: usize| p.get(i).cloned().unwrap_or_else(BigRational::zero);
    q_trim((0..len).map(|i| get(a, i) - get(b, i)).collect())
}

/// Yun: `p = Π a_i^i` with each `a_i` square-free; returns `(a_i, i)`.
fn square_free(p: &QPoly) -> Vec<(QPoly, usize)> {
    let p = q_monic(q_trim(p.clone()));
    let dp = q_deriv(&p);
    let a0 = q_gcd(&p, &dp);
    let mut b = q_divmod(&p, &a0).0;
    let mut c = q_divmod(&dp, &a0).0;
    let mut d = q_sub(&c, &q_deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while !q_is_const(&b) {
        let a = q_gcd(&b, &d);
        b = q_divmod(&b, &a).0;
        c = q_divmod(&d, &a).0;
        d = q_sub(&c, &q_deriv(&b));
        if !q_is_const(&a) {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn is_small_integer(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() < (1u64 << 20) as f64
}

/// Eigenvalues of a symmetric `n x n` matrix (`n ≤ 6`), descending.
pub fn oracle_eigenvalues(n: usize, a: &[f64]) -> Vec<f64> {
    assert!(n <= 6, "permutation expansion is only meant for tiny matrices");
    let p = characteristic_polynomial(n, a);
    let mut roots = Vec::with_capacity(n);
    if a.iter().all(|&x| is_small_integer(x)) {
        let q: QPoly = p
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c as i64)))
            .collect();
        for (factor, mult) in square_free(&q) {
            let f: Poly = factor.iter().map(|c| c.to_f64().unwrap()).collect();
            for r in real_roots_simple(&f) {
                roots.extend(std::iter::repeat_n(r, mult));
            }
        }
    } else {
        roots = real_roots_simple(&p);
    }
    assert_eq!(roots.len(), n, "oracle lost roots of {p:?}");
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}
