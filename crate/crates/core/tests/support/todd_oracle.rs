//! Todd polynomials by brute force: Bernoulli numbers from their recurrence,
//! explicit formal roots, and substitution of elementary symmetric
//! polynomials. Shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

pub type Q = BigRational;

/// Polynomial in the roots `r_1..r_R`, keyed by exponent vector.
pub type Poly = BTreeMap<Vec<u32>, Q>;

pub const ROOTS: usize = 4;

fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_0..B_n` with `B_1 = +1/2`.
pub fn bernoulli_plus(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = vec![Q::one()];
    for m in 1..=n {
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Q::from_integer(binom(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-s / Q::from_integer(BigInt::from(m + 1)));
    }
    if n >= 1 {
        b[1] = -b[1].clone();
    }
    b
}

/// Coefficients of `x/(1 - e^{-x})`: `B_j^+ / j!`.
pub fn todd_coefficients(n: usize) -> Vec<Q> {
    let b = bernoulli_plus(n);
    let mut fact = BigInt::one();
    b.into_iter()
        .enumerate()
        .map(|(j, bj)| {
            if j > 0 {
                fact *= BigInt::from(j);
            }
            bj / Q::from_integer(fact.clone())
        })
        .collect()
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn mul(a: &Poly, b: &Poly, max_degree: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if degree(&e) > max_degree {
                continue;
            }
            *out.entry(e).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(acc: &mut Poly, p: &Poly, s: &Q) {
    for (e, c) in p {
        *acc.entry(e.clone()).or_insert_with(Q::zero) += c * s;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn constant(c: Q) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(vec![0; ROOTS], c);
    }
    p
}

/// Weight-`w` part of `∏_i Q(r_i)`.
pub fn todd_in_roots(w: u32) -> Poly {
    let a = todd_coefficients(w as usize);
    let mut prod = constant(Q::one());
    for i in 0..ROOTS {
        let mut factor = Poly::new();
        for (j, aj) in a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            let mut e = vec![0; ROOTS];
            e[i] = j as u32;
            factor.insert(e, aj.clone());
        }
        prod = mul(&prod, &factor, w);
    }
    prod.into_iter().filter(|(e, _)| degree(e) == w).collect()
}

/// `e_k(r_1..r_R)`.
pub fn elementary(k: usize) -> Poly {
    let mut p = Poly::new();
    for mask in 0u32..(1 << ROOTS) {
        if mask.count_ones() as usize == k {
            let e = (0..ROOTS).map(|i| (mask >> i) & 1).collect();
            p.insert(e, Q::one());
        }
    }
    p
}

/// A polynomial in `c1..c4` as `(coefficient, [a1, a2, a3, a4])` terms.
pub type ChernPoly = Vec<(Q, [u32; 4])>;

/// Substitutes `c_k = e_k(roots)`.
pub fn in_roots(f: &ChernPoly) -> Poly {
    let e: Vec<Poly> = (1..=4).map(elementary).collect();
    let mut out = Poly::new();
    for (c, exps) in f {
        let mut term = constant(Q::one());
        for (k, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                term = mul(&term, &e[k], u32::MAX);
            }
        }
        add_scaled(&mut out, &term, c);
    }
    out
}

/// Closed forms of the weight 1..4 Todd polynomials.
pub fn todd_fixtures() -> Vec<ChernPoly> {
    vec![
        vec![(qq(1, 2), [1, 0, 0, 0])],
        vec![(qq(1, 12), [2, 0, 0, 0]), (qq(1, 12), [0, 1, 0, 0])],
        vec![(qq(1, 24), [1, 1, 0, 0])],
        vec![
            (qq(-1, 720), [4, 0, 0, 0]),
            (qq(4, 720), [2, 1, 0, 0]),
            (qq(3, 720), [0, 2, 0, 0]),
            (qq(1, 720), [1, 0, 1, 0]),
            (qq(-1, 720), [0, 0, 0, 1]),
        ],
    ]
}
