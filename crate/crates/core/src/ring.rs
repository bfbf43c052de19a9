//! Coefficient rings for series and Witt vectors.
//!
//! A ring handle carries the context (prime, precision, tower) needed to
//! create constants; elements are plain values.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::{is_prime, PadicScalar};
use crate::valuation::{min_without_cancellation, ValuationInfo};

pub trait CoeffRing: Clone + Debug {
    type Elem: Clone + Debug;

    fn prime(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_exact_zero(&self, a: &Self::Elem) -> bool;
    fn valuation_info(&self, a: &Self::Elem) -> ValuationInfo;
    fn same_ring(&self, other: &Self) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// `a / n` for a non-zero integer `n`.
    fn div_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        assert!(n != 0, "division by the integer zero");
        let inv = self.from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)));
        self.mul(a, &inv)
    }

    fn pow(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Certified valuation, `Ok(None)` for exact zero.
    fn valuation(&self, a: &Self::Elem) -> Result<Option<Rational64>> {
        self.valuation_info(a).certified()
    }
}

/// `Q_p` at a fixed relative precision for constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpRing {
    p: u32,
    prec: u32,
}

impl QpRing {
    pub fn new(p: u32, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        Ok(QpRing { p, prec })
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }
}

impl CoeffRing for QpRing {
    type Elem = PadicScalar;

    fn prime(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> PadicScalar {
        PadicScalar::zero(self.p)
    }
    fn one(&self) -> PadicScalar {
        PadicScalar::p_power(self.p, 0, self.prec)
    }
    fn from_rational(&self, q: &BigRational) -> PadicScalar {
        PadicScalar::from_ratio_unchecked(q, self.p, self.prec)
    }
    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a + b
    }
    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        -a
    }
    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a * b
    }
    fn is_exact_zero(&self, a: &PadicScalar) -> bool {
        a.is_exact_zero()
    }
    fn valuation_info(&self, a: &PadicScalar) -> ValuationInfo {
        a.valuation_info()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

/// Polynomials in an auxiliary indeterminate over `R`, dense, lowest degree
/// first, with trailing exact zeros trimmed. The valuation is the Gauss
/// valuation on the closed unit disk.
#[derive(Clone, Debug)]
pub struct PolyRing<R: CoeffRing> {
    base: R,
}

impl<R: CoeffRing> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn constant(&self, c: R::Elem) -> Vec<R::Elem> {
        self.trim(vec![c])
    }

    /// Degree in the auxiliary indeterminate, `None` for the zero polynomial.
    pub fn degree(&self, a: &[R::Elem]) -> Option<usize> {
        a.iter().rposition(|c| !self.base.is_exact_zero(c))
    }

    pub fn trim(&self, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
        while a.last().is_some_and(|c| self.base.is_exact_zero(c)) {
            a.pop();
        }
        a
    }
}

impl<R: CoeffRing> CoeffRing for PolyRing<R> {
    type Elem = Vec<R::Elem>;

    fn prime(&self) -> u32 {
        self.base.prime()
    }
    fn zero(&self) -> Vec<R::Elem> {
        Vec::new()
    }
    fn one(&self) -> Vec<R::Elem> {
        vec![self.base.one()]
    }
    fn from_rational(&self, q: &BigRational) -> Vec<R::Elem> {
        self.trim(vec![self.base.from_rational(q)])
    }
    fn add(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.trim(out)
    }
    fn neg(&self, a: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().map(|c| self.base.neg(c)).collect()
    }
    fn mul(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.base.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.base.is_exact_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.base.is_exact_zero(y) {
                    continue;
                }
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.trim(out)
    }
    fn is_exact_zero(&self, a: &Vec<R::Elem>) -> bool {
        a.iter().all(|c| self.base.is_exact_zero(c))
    }
    fn valuation_info(&self, a: &Vec<R::Elem>) -> ValuationInfo {
        min_without_cancellation(a.iter().map(|c| self.base.valuation_info(c)))
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.base.same_ring(&other.base)
    }
}
