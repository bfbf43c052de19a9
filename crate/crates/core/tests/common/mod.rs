#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rand::Rng;

use pirad_core::{CoeffExpr, InputPolynomial, ValuationInfo};

pub fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// A non-zero integer in `[-bound, bound]` prime to `p`.
pub fn unit<R: Rng>(rng: &mut R, p: u32, bound: i64) -> i64 {
    loop {
        let n: i64 = rng.gen_range(1..=bound);
        if n % p as i64 != 0 {
            return if rng.gen_bool(0.5) { n } else { -n };
        }
    }
}

/// `p^v · u / w` with `u, w` units.
pub fn with_valuation<R: Rng>(rng: &mut R, p: u32, v: i32) -> BigRational {
    let u = unit(rng, p, 40);
    let w = unit(rng, p, 40).abs();
    let pv = BigRational::from_integer(BigInt::from(p));
    let scale = if v >= 0 {
        num_traits::pow(pv, v as usize)
    } else {
        num_traits::pow(pv, (-v) as usize).recip()
    };
    br(u, w) * scale
}

/// Random rational polynomial: degree in `1..=max_degree`, each coefficient
/// non-zero with probability `density` (the top one always), valuations in
/// `vmin..=vmax`.
pub fn random_poly<R: Rng>(rng: &mut R, p: u32, max_degree: usize, vmin: i32, vmax: i32, density: f64) -> InputPolynomial {
    let d = rng.gen_range(1..=max_degree);
    let mut c = vec![BigRational::zero(); d + 1];
    for (i, slot) in c.iter_mut().enumerate().skip(1) {
        if i == d || rng.gen_bool(density) {
            *slot = with_valuation_in(rng, p, vmin, vmax);
        }
    }
    InputPolynomial::from_rationals(p, &c).unwrap()
}

/// Random polynomial supported on `1, p, …, p^depth`.
pub fn random_p_typical<R: Rng>(rng: &mut R, p: u32, depth: u32, vmin: i32, vmax: i32) -> InputPolynomial {
    let d = (p as usize).pow(depth);
    let mut c = vec![BigRational::zero(); d + 1];
    let mut k = 1;
    while k <= d {
        if k == d || rng.gen_bool(0.7) {
            c[k] = with_valuation_in(rng, p, vmin, vmax);
        }
        k *= p as usize;
    }
    InputPolynomial::from_rationals(p, &c).unwrap()
}

/// Random polynomial with two or three monomials.
pub fn random_lacunary<R: Rng>(rng: &mut R, p: u32, max_degree: usize, vmin: i32, vmax: i32) -> InputPolynomial {
    let d = rng.gen_range(2..=max_degree);
    let mut c = vec![BigRational::zero(); d + 1];
    c[d] = with_valuation_in(rng, p, vmin, vmax);
    for _ in 0..rng.gen_range(1..=2) {
        let i = rng.gen_range(1..d);
        c[i] = with_valuation_in(rng, p, vmin, vmax);
    }
    InputPolynomial::from_rationals(p, &c).unwrap()
}

/// `p^s` as a rational.
pub fn p_power(p: u32, s: i64) -> BigRational {
    let pv = BigRational::from_integer(BigInt::from(p));
    if s >= 0 {
        num_traits::pow(pv, s as usize)
    } else {
        num_traits::pow(pv, (-s) as usize).recip()
    }
}

/// Zero at working precision, and not vacuously: the difference is not
/// certified non-zero and is known to vanish to at least `digits`.
pub fn zero_at_precision(info: ValuationInfo, digits: i64) -> bool {
    match info {
        ValuationInfo::Infinite => true,
        ValuationInfo::Exact(_) => false,
        ValuationInfo::AtLeast(b) => b >= Rational64::from_integer(digits),
    }
}

/// `a_k` at degree `k` only.
pub fn monomial(p: u32, k: usize, a: CoeffExpr) -> Vec<CoeffExpr> {
    let mut c = vec![CoeffExpr::zero(); k + 1];
    c[k] = a;
    let _ = p;
    c
}

pub fn ceil(r: Rational64) -> i64 {
    let f = r.floor().to_integer();
    if Rational64::from_integer(f) == r {
        f
    } else {
        f + 1
    }
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// `with_valuation` with `v` drawn from `lo..=hi`.
pub fn with_valuation_in<R: Rng>(rng: &mut R, p: u32, lo: i32, hi: i32) -> BigRational {
    let v = rng.gen_range(lo..=hi);
    with_valuation(rng, p, v)
}
