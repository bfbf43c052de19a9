//! Arithmetic in the totally ramified tower `Q_p(ζ)`, `ζ` of order `p^(L+1)`.
//!
//! Elements are coordinate vectors over the basis `1, π, …, π^(e-1)` with
//! `π = ζ - 1` and `e = p^L (p-1)`. Because the valuations `i/e` of the basis
//! elements have pairwise distinct fractional parts, the valuation of an
//! element is the minimum of `v(c_i) + i/e` and can be read off exactly.
//!
//! Structural constants (the minimal polynomial, `π_k = ζ^(p^(L-k)) - 1`,
//! `π^-1`) are kept as exact rationals and only rounded to `p`-adic scalars
//! when an element is built, so exact zeros stay exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{is_prime, PadicScalar};
use crate::ring::CoeffRing;
use crate::valuation::{min_without_cancellation, ValuationInfo};

pub type Tower = Arc<CycloTower>;

pub struct CycloTower {
    p: u32,
    level: u32,
    degree: usize,
    prec: u32,
    /// Monic minimal polynomial of `π`, lowest degree first.
    minpoly: Vec<BigInt>,
    /// `-m_i` for `i < e`: the reduction rule `π^e = Σ -m_i π^i`.
    reduction: Vec<PadicScalar>,
    pis: Vec<Vec<BigRational>>,
    pi_inverse: Vec<BigRational>,
}

impl fmt::Debug for CycloTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycloTower")
            .field("p", &self.p)
            .field("level", &self.level)
            .field("degree", &self.degree)
            .field("prec", &self.prec)
            .finish()
    }
}

/// `Σ_{j<p} (1+X)^(j p^L)`, the minimal polynomial of `ζ - 1`.
pub fn cyclotomic_minpoly(p: u32, level: u32) -> Vec<BigInt> {
    let q = (p as u64).pow(level) as usize;
    let base: Vec<BigInt> = (0..=q)
        .map(|k| binomial(BigInt::from(q), BigInt::from(k)))
        .collect();
    let e = q * (p as usize - 1);
    let mut total = vec![BigInt::zero(); e + 1];
    let mut power = vec![BigInt::one()];
    for j in 0..p {
        for (i, c) in power.iter().enumerate() {
            total[i] += c;
        }
        if j + 1 < p {
            let mut next = vec![BigInt::zero(); power.len() + q];
            for (i, a) in power.iter().enumerate() {
                for (k, b) in base.iter().enumerate() {
                    next[i + k] += a * b;
                }
            }
            power = next;
        }
    }
    total
}

/// Exact product modulo a monic polynomial, coordinates lowest degree first.
fn exact_mulmod(a: &[BigRational], b: &[BigRational], minpoly: &[BigInt]) -> Vec<BigRational> {
    let e = minpoly.len() - 1;
    let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    exact_reduce(prod, minpoly, e)
}

fn exact_reduce(mut prod: Vec<BigRational>, minpoly: &[BigInt], e: usize) -> Vec<BigRational> {
    for j in (e..prod.len()).rev() {
        let c = std::mem::take(&mut prod[j]);
        if c.is_zero() {
            continue;
        }
        for i in 0..e {
            prod[j - e + i] -= &c * BigRational::from_integer(minpoly[i].clone());
        }
    }
    prod.resize(e, BigRational::zero());
    prod
}

impl CycloTower {
    /// The tower `Q_p(ζ_{p^(level+1)})` with constants at relative precision `prec`.
    pub fn new(p: u32, level: u32, prec: u32) -> Result<Tower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        let minpoly = cyclotomic_minpoly(p, level);
        let e = minpoly.len() - 1;
        let reduction = minpoly[..e]
            .iter()
            .map(|m| PadicScalar::from_rational_unchecked(&-m, &BigInt::one(), p, prec))
            .collect();

        let one = |i: usize| {
            let mut v = vec![BigRational::zero(); e];
            if i < e {
                v[i] = BigRational::one();
            }
            v
        };
        // π itself; for e = 1 the basis is just {1} and π = -m_0.
        let top = if e == 1 {
            vec![BigRational::from_integer(-minpoly[0].clone())]
        } else {
            one(1)
        };
        let mut pis = vec![top];
        for _ in 0..level {
            let prev = pis.last().unwrap();
            let mut zeta = prev.clone();
            zeta[0] += BigRational::one();
            let mut acc = zeta.clone();
            for _ in 1..p {
                acc = exact_mulmod(&acc, &zeta, &minpoly);
            }
            acc[0] -= BigRational::one();
            pis.push(acc);
        }
        pis.reverse();

        // π (π^(e-1) + m_{e-1} π^(e-2) + … + m_1) = -m_0
        let m0 = BigRational::from_integer(minpoly[0].clone());
        let mut pi_inverse = vec![BigRational::zero(); e];
        for i in 0..e {
            pi_inverse[i] = -BigRational::from_integer(minpoly[i + 1].clone()) / &m0;
        }

        Ok(Arc::new(CycloTower {
            p,
            level,
            degree: e,
            prec,
            minpoly,
            reduction,
            pis,
            pi_inverse,
        }))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Ramification index `e = p^L (p-1)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        CycloElement {
            tower: self.clone(),
            coords: vec![PadicScalar::zero(self.p); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.scalar(PadicScalar::p_power(self.p, 0, self.prec))
    }

    pub fn scalar(self: &Arc<Self>, s: PadicScalar) -> CycloElement {
        assert_eq!(s.prime(), self.p);
        let mut x = self.zero();
        x.coords[0] = s;
        x
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> CycloElement {
        self.scalar(PadicScalar::from_ratio_unchecked(q, self.p, self.prec))
    }

    /// Element with the given exact coordinates in the `π`-basis.
    pub fn from_exact(self: &Arc<Self>, coords: &[BigRational]) -> CycloElement {
        assert!(coords.len() <= self.degree);
        let mut x = self.zero();
        for (c, q) in x.coords.iter_mut().zip(coords) {
            *c = PadicScalar::from_ratio_unchecked(q, self.p, self.prec);
        }
        x
    }

    /// Exact coordinates of `π_k = ζ_k - 1`, `ζ_k` of order `p^(k+1)`.
    pub fn exact_pi(&self, k: u32) -> Result<&[BigRational]> {
        if k > self.level {
            return Err(Error::LevelTooSmall {
                need: k,
                have: self.level,
            });
        }
        Ok(&self.pis[k as usize])
    }

    pub fn exact_mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        exact_mulmod(a, b, &self.minpoly)
    }

    pub fn exact_one(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree];
        v[0] = BigRational::one();
        v
    }

    /// `π_k = ζ^(p^(L-k)) - 1`.
    pub fn pi(self: &Arc<Self>, k: u32) -> Result<CycloElement> {
        let exact = self.exact_pi(k)?;
        Ok(self.from_exact(exact))
    }

    /// `ζ_k`, a primitive root of unity of order `p^(k+1)`.
    pub fn zeta(self: &Arc<Self>, k: u32) -> Result<CycloElement> {
        let mut exact = self.exact_pi(k)?.to_vec();
        exact[0] += BigRational::one();
        Ok(self.from_exact(&exact))
    }

    /// `π_L^-1`.
    pub fn pi_inverse(self: &Arc<Self>) -> CycloElement {
        self.from_exact(&self.pi_inverse)
    }

    fn same_as(&self, other: &CycloTower) -> bool {
        self.p == other.p && self.level == other.level
    }
}

#[derive(Clone)]
pub struct CycloElement {
    tower: Tower,
    coords: Vec<PadicScalar>,
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl CycloElement {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coords(&self) -> &[PadicScalar] {
        &self.coords
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(PadicScalar::is_exact_zero)
    }

    pub fn valuation_info(&self) -> ValuationInfo {
        let e = self.tower.degree as i64;
        min_without_cancellation(
            self.coords
                .iter()
                .enumerate()
                .map(|(i, c)| c.valuation_info().shift(Rational64::new(i as i64, e))),
        )
    }

    /// Exact valuation with `v(p) = 1`; `Ok(None)` for exact zero.
    pub fn valuation(&self) -> Result<Option<Rational64>> {
        self.valuation_info().certified()
    }

    /// Certified lower bound for the valuation (`None` = exact zero).
    pub fn lower_bound(&self) -> Option<Rational64> {
        self.valuation_info().lower_bound()
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        CycloElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|c| c.shift(k)).collect(),
        }
    }

    pub fn scale(&self, s: &PadicScalar) -> Self {
        CycloElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = self.tower.one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_tower(&self, other: &Self) {
        assert!(
            self.tower.same_as(&other.tower),
            "cyclotomic elements from different towers"
        );
    }

    fn add_impl(&self, other: &Self) -> Self {
        self.check_tower(other);
        CycloElement {
            tower: self.tower.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_tower(other);
        let e = self.tower.degree;
        let p = self.tower.p;
        let mut prod = vec![PadicScalar::zero(p); 2 * e - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        for j in (e..2 * e - 1).rev() {
            let c = std::mem::replace(&mut prod[j], PadicScalar::zero(p));
            if c.is_exact_zero() {
                continue;
            }
            for (i, r) in self.tower.reduction.iter().enumerate() {
                if r.is_exact_zero() {
                    continue;
                }
                prod[j - e + i] = &prod[j - e + i] + &(&c * r);
            }
        }
        prod.truncate(e);
        CycloElement {
            tower: self.tower.clone(),
            coords: prod,
        }
    }

    /// Split a certified non-zero element as `x = p^q π^r y` with `y` a unit.
    fn unit_part(&self) -> Result<(i64, usize, CycloElement)> {
        let v = self.valuation()?.ok_or(Error::DivisionByZero)?;
        let e = self.tower.degree as i64;
        let m = v * Rational64::from_integer(e);
        debug_assert!(m.is_integer());
        let m = m.to_integer();
        let (q, r) = (m.div_euclid(e), m.rem_euclid(e) as usize);
        let mut y = self.clone();
        if r > 0 {
            y = &y * &self.tower.pi_inverse().pow(r as u64);
        }
        Ok((q, r, y.shift(-q)))
    }

    /// Inverse by Newton lifting of the unit part from the residue field.
    pub fn inv(&self) -> Result<Self> {
        let (q, r, y) = self.unit_part()?;
        let tower = &self.tower;
        let c0 = &y.coords[0];
        if c0.valuation()? != Some(0) {
            return Err(Error::PrecisionExhausted);
        }
        let mut z = tower.scalar(c0.inv()?);
        let two = tower.from_rational(&BigRational::from_integer(2.into()));
        // Each step doubles the π-adic accuracy, starting from 1/e.
        let target = (tower.degree as u64) * (tower.prec as u64 + 1);
        let steps = 64 - target.leading_zeros() + 1;
        for _ in 0..steps {
            z = &z * &(&two - &(&y * &z));
        }
        let residual = &(&y * &z) - &tower.one();
        if residual
            .lower_bound()
            .is_some_and(|b| b <= Rational64::from_integer(0))
        {
            return Err(Error::PrecisionExhausted);
        }
        let mut out = z;
        if r > 0 {
            out = &out * &tower.pi_inverse().pow(r as u64);
        }
        Ok(out.shift(-q))
    }

    /// Inverse by solving the dense linear system `x · z = 1` over `Q_p`.
    pub fn inv_linear(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let tower = &self.tower;
        let e = tower.degree;
        let p = tower.p;
        // Column j holds the coordinates of x·π^j.
        let mut basis = tower.zero();
        basis.coords[0] = PadicScalar::p_power(p, 0, tower.prec);
        let uniformizer = tower.from_exact(&tower.pis[tower.level as usize]);
        let mut cols = Vec::with_capacity(e);
        let mut power = self.clone();
        for _ in 0..e {
            cols.push(power.coords.clone());
            power = &power * &uniformizer;
        }
        let mut a: Vec<Vec<PadicScalar>> = (0..e)
            .map(|i| (0..e).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mut rhs: Vec<PadicScalar> = basis.coords.clone();

        for col in 0..e {
            let mut best: Option<(usize, i64)> = None;
            for (row, line) in a.iter().enumerate().skip(col) {
                if let Ok(Some(v)) = line[col].valuation() {
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((row, v));
                    }
                }
            }
            let Some((pivot, _)) = best else {
                return Err(Error::PrecisionExhausted);
            };
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            let inv = a[col][col].inv()?;
            for row in col + 1..e {
                if a[row][col].is_exact_zero() {
                    continue;
                }
                let factor = &a[row][col] * &inv;
                for k in col..e {
                    let t = &factor * &a[col][k];
                    a[row][k] = &a[row][k] - &t;
                }
                let t = &factor * &rhs[col];
                rhs[row] = &rhs[row] - &t;
            }
        }
        let mut z = vec![PadicScalar::zero(p); e];
        for row in (0..e).rev() {
            let mut acc = rhs[row].clone();
            for k in row + 1..e {
                acc = &acc - &(&a[row][k] * &z[k]);
            }
            z[row] = acc.div(&a[row][row])?;
        }
        // z holds coordinates in the basis {π^j}; expand them.
        let mut out = tower.zero();
        let mut power = tower.one();
        for c in &z {
            out = &out + &power.scale(c);
            power = &power * &uniformizer;
        }
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// True if `self - other` has valuation at least `digits`.
    pub fn agrees_to(&self, other: &Self, digits: i64) -> bool {
        let d = self - other;
        d.lower_bound()
            .is_none_or(|b| b >= Rational64::from_integer(digits))
    }
}

impl<'a> Add<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        self.add_impl(&-rhs)
    }
}

impl<'a> Mul<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        self.mul_impl(rhs)
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Evaluate `f = Σ f_i X^i` at `x` by Horner's rule.
pub fn eval_poly(f: &[CycloElement], x: &CycloElement) -> CycloElement {
    let mut acc = x.tower.zero();
    for c in f.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Newton iteration for the root of `f` attracted by `x0`.
///
/// Requires `v(f(x0)) > 2 v(f'(x0))`; the result is the unique root with
/// `v(x - x0) > v(f'(x0))`.
pub fn hensel_root(f: &[CycloElement], x0: &CycloElement) -> Result<CycloElement> {
    let tower = x0.tower.clone();
    let deg = f
        .iter()
        .rposition(|c| !c.is_exact_zero())
        .ok_or(Error::ZeroPolynomial)?;
    let f = &f[..=deg];
    match deg {
        0 => return Err(Error::InvalidInput("constant polynomial has no root".into())),
        1 => return (-&f[0]).div(&f[1]),
        _ => {}
    }
    let df: Vec<CycloElement> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.shift(0).scale(&PadicScalar::from_rational_unchecked(
            &BigInt::from(i),
            &BigInt::one(),
            tower.p,
            tower.prec,
        )))
        .collect();

    let fx = eval_poly(f, x0);
    let vf = match fx.valuation_info() {
        ValuationInfo::Exact(v) => v,
        _ => return Ok(x0.clone()),
    };
    let dfx = eval_poly(&df, x0);
    let vd = dfx.valuation()?.ok_or(Error::NewtonCondition)?;
    if vf <= vd * 2 {
        return Err(Error::NewtonCondition);
    }

    let target = (tower.degree as u64) * (tower.prec as u64 + 1);
    let budget = (64 - target.leading_zeros() + 4) as usize;
    let mut x = x0.clone();
    for _ in 0..budget {
        let fx = eval_poly(f, &x);
        if !matches!(fx.valuation_info(), ValuationInfo::Exact(_)) {
            return Ok(x);
        }
        let step = fx.div(&eval_poly(&df, &x))?;
        x = &x - &step;
    }
    let fx = eval_poly(f, &x);
    match fx.valuation_info() {
        ValuationInfo::Exact(v) if v <= vd * 2 + Rational64::new(tower.prec as i64, 2) => {
            Err(Error::NoConvergence(budget))
        }
        _ => Ok(x),
    }
}

/// Dwork's `π`: the root of `X^(p-1) + p` congruent to `ζ_0 - 1` modulo
/// `(ζ_0 - 1)^2`.
///
/// Newton from `π_0` directly only satisfies the Hensel condition for
/// `p <= 3`, so the unit `u = π / π_0` is lifted instead, as the root of
/// `u^(p-1) = -p / π_0^(p-1)` near 1.
pub fn dwork_pi(tower: &Tower) -> Result<CycloElement> {
    let p = tower.p;
    let pi0 = tower.pi(0)?;
    let c = pi0.pow((p - 1) as u64).inv()?.shift(1);
    let c = -&c;
    let mut f = vec![tower.zero(); p as usize];
    f[0] = -&c;
    f[p as usize - 1] = tower.one();
    let u = hensel_root(&f, &tower.one())?;
    Ok(&pi0 * &u)
}

impl CoeffRing for Tower {
    type Elem = CycloElement;

    fn prime(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> CycloElement {
        CycloTower::zero(self)
    }
    fn one(&self) -> CycloElement {
        CycloTower::one(self)
    }
    fn from_rational(&self, q: &BigRational) -> CycloElement {
        CycloTower::from_rational(self, q)
    }
    fn add(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a + b
    }
    fn neg(&self, a: &CycloElement) -> CycloElement {
        -a
    }
    fn mul(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a * b
    }
    fn is_exact_zero(&self, a: &CycloElement) -> bool {
        a.is_exact_zero()
    }
    fn valuation_info(&self, a: &CycloElement) -> ValuationInfo {
        a.valuation_info()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.same_as(other)
    }
    fn div_int(&self, a: &CycloElement, n: i64) -> CycloElement {
        a.scale(&PadicScalar::from_rational_unchecked(
            &BigInt::one(),
            &BigInt::from(n),
            self.p,
            self.prec,
        ))
    }
}
