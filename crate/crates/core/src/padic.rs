//! Elements of `Q_p` at finite relative precision.
//!
//! A non-zero value is stored as `p^v * u` with `0 < u < p^N`, `p ∤ u`,
//! known modulo `p^(v+N)`. Exact zero is a separate state, as is a value that
//! cancelled below its absolute precision ("indistinguishable from zero").
//! Only exact zero and certified non-zero values answer valuation queries.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::valuation::ValuationInfo;

thread_local! {
    static POWERS: RefCell<HashMap<(u32, u32), Rc<BigInt>>> = RefCell::new(HashMap::new());
}

/// `p^n`, memoized per thread.
pub(crate) fn p_pow(p: u32, n: u32) -> Rc<BigInt> {
    POWERS.with(|cache| {
        cache
            .borrow_mut()
            .entry((p, n))
            .or_insert_with(|| Rc::new(num_traits::pow(BigInt::from(p), n as usize)))
            .clone()
    })
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Strip the `p`-part of a non-zero integer: returns `(v_p(n), n / p^v)`.
pub(crate) fn split_p(n: &BigInt, p: u32) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(n)` for a non-zero machine integer.
pub fn vp_u64(mut n: u64, p: u32) -> u32 {
    assert!(n != 0, "v_p(0) is infinite");
    let p = p as u64;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one(), "unit is not invertible modulo p^N");
    g.x.mod_floor(m)
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Zero,
    Known { val: i64, unit: BigInt, prec: u32 },
    Fuzzy { abs_prec: i64 },
}

#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalar {
    p: u32,
    repr: Repr,
}

impl PadicScalar {
    pub fn zero(p: u32) -> Self {
        PadicScalar { p, repr: Repr::Zero }
    }

    /// A value known only to be `0 mod p^abs_prec`.
    pub fn indistinct(p: u32, abs_prec: i64) -> Self {
        PadicScalar {
            p,
            repr: Repr::Fuzzy { abs_prec },
        }
    }

    /// `num/den` to relative precision `prec`.
    pub fn from_rational(num: &BigInt, den: &BigInt, p: u32, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if prec == 0 {
            return Err(Error::InvalidInput("relative precision must be at least 1".into()));
        }
        Ok(Self::from_rational_unchecked(num, den, p, prec))
    }

    pub fn from_ratio(q: &BigRational, p: u32, prec: u32) -> Result<Self> {
        Self::from_rational(q.numer(), q.denom(), p, prec)
    }

    pub fn from_i64(n: i64, p: u32, prec: u32) -> Result<Self> {
        Self::from_rational(&BigInt::from(n), &BigInt::one(), p, prec)
    }

    pub(crate) fn from_rational_unchecked(num: &BigInt, den: &BigInt, p: u32, prec: u32) -> Self {
        if num.is_zero() {
            return Self::zero(p);
        }
        let (vn, un) = split_p(num, p);
        let (vd, ud) = split_p(den, p);
        let modulus = p_pow(p, prec);
        let unit = (un * mod_inverse(&ud.mod_floor(&modulus), &modulus)).mod_floor(&modulus);
        PadicScalar {
            p,
            repr: Repr::Known {
                val: vn - vd,
                unit,
                prec,
            },
        }
    }

    pub(crate) fn from_ratio_unchecked(q: &BigRational, p: u32, prec: u32) -> Self {
        Self::from_rational_unchecked(q.numer(), q.denom(), p, prec)
    }

    /// `p^k` to relative precision `prec`.
    pub(crate) fn p_power(p: u32, k: i64, prec: u32) -> Self {
        PadicScalar {
            p,
            repr: Repr::Known {
                val: k,
                unit: BigInt::one(),
                prec,
            },
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when the value cancelled below its absolute precision.
    pub fn is_indistinct(&self) -> bool {
        matches!(self.repr, Repr::Fuzzy { .. })
    }

    pub fn valuation_info(&self) -> ValuationInfo {
        match &self.repr {
            Repr::Zero => ValuationInfo::Infinite,
            Repr::Known { val, .. } => ValuationInfo::Exact(Rational64::from_integer(*val)),
            Repr::Fuzzy { abs_prec } => ValuationInfo::AtLeast(Rational64::from_integer(*abs_prec)),
        }
    }

    /// Certified valuation; `Ok(None)` for exact zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        match &self.repr {
            Repr::Zero => Ok(None),
            Repr::Known { val, .. } => Ok(Some(*val)),
            Repr::Fuzzy { .. } => Err(Error::PrecisionExhausted),
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Known { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Known { prec, .. } => Some(*prec),
            _ => None,
        }
    }

    /// Exponent of the error term; `None` for exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Known { val, prec, .. } => Some(val + *prec as i64),
            Repr::Fuzzy { abs_prec } => Some(*abs_prec),
        }
    }

    /// The rational `p^v * u` represented by this value (zero for the
    /// exact and indistinct zero states).
    pub fn representative(&self) -> BigRational {
        match &self.repr {
            Repr::Known { val, unit, .. } => {
                let pp = p_pow(self.p, val.unsigned_abs() as u32);
                if *val >= 0 {
                    BigRational::from_integer(unit * pp.as_ref())
                } else {
                    BigRational::new(unit.clone(), pp.as_ref().clone())
                }
            }
            _ => BigRational::zero(),
        }
    }

    /// True if `self ≡ q` modulo the absolute precision of `self`.
    pub fn agrees_with_rational(&self, q: &BigRational) -> bool {
        match self.absolute_precision() {
            None => q.is_zero(),
            Some(abs) => {
                let diff = self.representative() - q;
                if diff.is_zero() {
                    return true;
                }
                let (vn, _) = split_p(diff.numer(), self.p);
                let (vd, _) = split_p(diff.denom(), self.p);
                vn - vd >= abs
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Fuzzy { .. } => Err(Error::PrecisionExhausted),
            Repr::Known { val, unit, prec } => {
                let modulus = p_pow(self.p, *prec);
                Ok(PadicScalar {
                    p: self.p,
                    repr: Repr::Known {
                        val: -val,
                        unit: mod_inverse(unit, &modulus),
                        prec: *prec,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Known { val, unit, prec } => Repr::Known {
                val: val + k,
                unit: unit.clone(),
                prec: *prec,
            },
            Repr::Fuzzy { abs_prec } => Repr::Fuzzy {
                abs_prec: abs_prec + k,
            },
        };
        PadicScalar { p: self.p, repr }
    }

    /// `self^n` for `n >= 1`.
    pub fn pow(&self, n: u64) -> Self {
        assert!(n >= 1, "pow expects a positive exponent");
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc.expect("n >= 1")
    }

    /// Lower the relative precision to at most `prec`.
    pub fn truncate(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Known { val, unit, prec: old } if *old > prec => PadicScalar {
                p: self.p,
                repr: Repr::Known {
                    val: *val,
                    unit: unit.mod_floor(&p_pow(self.p, prec)),
                    prec,
                },
            },
            _ => self.clone(),
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic scalars over different primes");
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => return other.clone(),
            (_, Repr::Zero) => return self.clone(),
            _ => {}
        }
        let abs = self
            .absolute_precision()
            .unwrap()
            .min(other.absolute_precision().unwrap());
        let knowns: Vec<(i64, &BigInt)> = [&self.repr, &other.repr]
            .into_iter()
            .filter_map(|r| match r {
                Repr::Known { val, unit, .. } => Some((*val, unit)),
                _ => None,
            })
            .collect();
        let Some(vmin) = knowns.iter().map(|(v, _)| *v).min() else {
            return Self::indistinct(p, abs);
        };
        if vmin >= abs {
            return Self::indistinct(p, abs);
        }
        let width = (abs - vmin) as u32;
        let modulus = p_pow(p, width);
        let mut s = BigInt::zero();
        for (v, u) in knowns {
            let gap = v - vmin;
            if gap >= width as i64 {
                continue;
            }
            if gap == 0 {
                s += u;
            } else {
                s += u * p_pow(p, gap as u32).as_ref();
            }
        }
        let s = s.mod_floor(&modulus);
        if s.is_zero() {
            return Self::indistinct(p, abs);
        }
        let (k, unit) = split_p(&s, p);
        let val = vmin + k;
        PadicScalar {
            p,
            repr: Repr::Known {
                val,
                unit,
                prec: (abs - val) as u32,
            },
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic scalars over different primes");
        let p = self.p;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Repr::Zero,
            (Repr::Fuzzy { abs_prec: a }, Repr::Fuzzy { abs_prec: b }) => {
                Repr::Fuzzy { abs_prec: a + b }
            }
            (Repr::Fuzzy { abs_prec }, Repr::Known { val, .. })
            | (Repr::Known { val, .. }, Repr::Fuzzy { abs_prec }) => Repr::Fuzzy {
                abs_prec: abs_prec + val,
            },
            (
                Repr::Known {
                    val: v1,
                    unit: u1,
                    prec: n1,
                },
                Repr::Known {
                    val: v2,
                    unit: u2,
                    prec: n2,
                },
            ) => {
                let prec = (*n1).min(*n2);
                Repr::Known {
                    val: v1 + v2,
                    unit: (u1 * u2).mod_floor(&p_pow(p, prec)),
                    prec,
                }
            }
        };
        PadicScalar { p, repr }
    }

    fn neg_impl(&self) -> Self {
        let repr = match &self.repr {
            Repr::Known { val, unit, prec } => Repr::Known {
                val: *val,
                unit: p_pow(self.p, *prec).as_ref() - unit,
                prec: *prec,
            },
            other => other.clone(),
        };
        PadicScalar { p: self.p, repr }
    }
}

impl<'a> Add<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(&rhs.neg_impl())
    }
}

impl<'a> Mul<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.mul_impl(rhs)
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Fuzzy { abs_prec } => write!(f, "O({p}^{abs_prec})"),
            Repr::Known { val, unit, prec } => {
                // Print the symmetric residue, which is short for small integers.
                let modulus = p_pow(p, *prec);
                let half: BigInt = modulus.as_ref() / 2;
                let shown = if unit > &half {
                    unit - modulus.as_ref()
                } else {
                    unit.clone()
                };
                let shown = if shown.abs().to_u64().is_some() {
                    shown.to_string()
                } else {
                    format!("<{} digits>", prec)
                };
                write!(f, "{shown}*{p}^{val} + O({p}^{})", val + *prec as i64)
            }
        }
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
