//! Radius of convergence of `exp(P)` for a polynomial `P` with `P(0) = 0`.
//!
//! With `d_i = ⌊log_p(D/i)⌋` put `P̃(T) = Σ a_i / π_(d_i) T^i` and let
//! `ẽ = 1 + Σ ã_i T^i` be `exp(P̃)` truncated at degree `D`. Then
//! `log_p ρ = min_i v(ã_i) / i`, i.e. `ρ` is the smallest absolute value of
//! a root of `ẽ`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::cyclotomic::{CycloElement, CycloTower, Tower};
use crate::error::{Error, Result};
use crate::expr::CoeffExpr;
use crate::newton::{lower_hull, Vertex};
use crate::padic::is_prime;
use crate::precision::escalate;
use crate::ring::{CoeffRing, PolyRing};
use crate::series::{gauss_log_norm, poly_exp, TruncSeries};
use crate::valuation::ValuationInfo;

/// Largest `j` with `n p^j ≤ d`.
pub fn depth_of(d: u64, n: u64, p: u64) -> u32 {
    assert!(n >= 1 && n <= d && p >= 2);
    let mut j = 0;
    let mut x = n;
    while let Some(y) = x.checked_mul(p) {
        if y > d {
            break;
        }
        x = y;
        j += 1;
    }
    j
}

/// `d_n = ⌊log_p(D/n)⌋` for `n = 1, …, D`.
pub fn depth_levels(d: u64, p: u64) -> Vec<u32> {
    (1..=d).map(|n| depth_of(d, n, p)).collect()
}

/// A polynomial `a_1 T + … + a_D T^D` with a declared degree `D`.
///
/// The declared degree may exceed the actual degree (trailing zero
/// coefficients); it fixes the depths `d_i` and the truncation of `ẽ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputPolynomial {
    p: u32,
    coeffs: Vec<CoeffExpr>,
}

impl InputPolynomial {
    /// `coeffs[i]` is the coefficient of `T^i`; `coeffs[0]` must vanish.
    pub fn new(p: u32, mut coeffs: Vec<CoeffExpr>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if coeffs.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::NonZeroConstantTerm);
        }
        while coeffs.last().is_some_and(CoeffExpr::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::ZeroPolynomial);
        }
        Ok(InputPolynomial { p, coeffs })
    }

    pub fn from_rationals(p: u32, coeffs: &[BigRational]) -> Result<Self> {
        Self::new(p, coeffs.iter().cloned().map(CoeffExpr::rational).collect())
    }

    /// Declare a degree `d ≥ deg P`, padding with zero coefficients.
    pub fn with_declared_degree(mut self, d: usize) -> Result<Self> {
        if d < self.degree() {
            return Err(Error::InvalidInput(format!(
                "declared degree {d} is below the actual degree {}",
                self.actual_degree()
            )));
        }
        self.coeffs.resize(d + 1, CoeffExpr::zero());
        Ok(self)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Declared degree `D`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn actual_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap()
    }

    pub fn coeffs(&self) -> &[CoeffExpr] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &CoeffExpr {
        &self.coeffs[i]
    }

    /// Tower level needed by the coefficients themselves.
    pub fn coefficient_level(&self) -> u32 {
        self.coeffs.iter().map(CoeffExpr::level).max().unwrap_or(0)
    }

    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(CoeffExpr::as_rational).collect()
    }

    /// Degrees carrying a non-zero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (1..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn is_p_typical(&self) -> bool {
        self.support().into_iter().all(|i| is_power_of(i, self.p as usize))
    }

    /// `P(λT)` for a rational `λ`, same declared degree.
    pub fn scaled(&self, lambda: &BigRational) -> Self {
        let mut power = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.scale(&power));
            power *= lambda;
        }
        if lambda.is_zero() {
            coeffs[0] = CoeffExpr::zero();
        }
        InputPolynomial { p: self.p, coeffs }
    }

    /// `P(p^s T)`.
    pub fn scaled_by_p_power(&self, s: i32) -> Self {
        let p = BigRational::from_integer(BigInt::from(self.p));
        let lambda = if s >= 0 {
            num_traits::pow(p, s as usize)
        } else {
            num_traits::pow(p, (-s) as usize).recip()
        };
        self.scaled(&lambda)
    }

    /// Tower level for the radius pipeline: `max(⌊log_p D⌋, coefficient level)`.
    pub fn tower_level(&self) -> u32 {
        let d = depth_of(self.degree() as u64, 1, self.p as u64);
        d.max(self.coefficient_level())
    }

    /// Initial working precision `32 + ⌈D/(p-1)⌉`.
    pub fn start_precision(&self) -> u32 {
        let d = self.degree() as u32;
        32 + d.div_ceil(self.p - 1)
    }

    pub fn eval_coeffs(&self, tower: &Tower) -> Result<Vec<CycloElement>> {
        self.coeffs.iter().map(|c| c.eval(tower)).collect()
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Result of a radius computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusReport {
    pub prime: u32,
    pub degree: usize,
    /// `log_p ρ`.
    pub log_radius: Rational64,
    /// `(i, v(ã_i))` for `1 ≤ i ≤ D`.
    pub valuations: Vec<(usize, ValuationInfo)>,
    /// Lower hull of `(0, 0)` and the certified points `(i, v(ã_i))`.
    pub hull: Vec<Vertex>,
    /// Degrees attaining `min v(ã_i) / i`.
    pub extremal_degrees: Vec<usize>,
    pub level: u32,
    pub precision: u32,
}

/// `min_i v_i / i` over `infos[i-1]`; uncertain entries are tolerated only
/// when their bound cannot reach the certified minimum.
fn build_report(p: u32, infos: Vec<ValuationInfo>, level: u32, precision: u32) -> Result<RadiusReport> {
    let mut best: Option<Rational64> = None;
    let mut extremal = Vec::new();
    let mut points = vec![(0i64, Rational64::zero())];
    for (idx, info) in infos.iter().enumerate() {
        let i = idx as i64 + 1;
        if let ValuationInfo::Exact(v) = info {
            points.push((i, *v));
            let r = *v / Rational64::from_integer(i);
            match best {
                Some(b) if r > b => {}
                Some(b) if r == b => extremal.push(i as usize),
                _ => {
                    best = Some(r);
                    extremal = vec![i as usize];
                }
            }
        }
    }
    for (idx, info) in infos.iter().enumerate() {
        if let ValuationInfo::AtLeast(b) = info {
            let bound = *b / Rational64::from_integer(idx as i64 + 1);
            if best.is_none_or(|m| bound <= m) {
                return Err(Error::PrecisionExhausted);
            }
        }
    }
    let log_radius = best.ok_or(Error::ZeroPolynomial)?;
    Ok(RadiusReport {
        prime: p,
        degree: infos.len(),
        log_radius,
        valuations: infos.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect(),
        hull: lower_hull(&points),
        extremal_degrees: extremal,
        level,
        precision,
    })
}

fn tower_for(poly: &InputPolynomial, prec: u32) -> Result<Tower> {
    CycloTower::new(poly.prime(), poly.tower_level(), prec)
}

fn pi_inverses(tower: &Tower, depths: &[u32]) -> Result<Vec<CycloElement>> {
    let top = depths.iter().copied().max().unwrap_or(0);
    (0..=top).map(|k| tower.pi(k)?.inv()).collect()
}

/// `P̃` in `tower`, dense with `ã_0 = 0`.
pub fn tilde_polynomial_in(poly: &InputPolynomial, tower: &Tower) -> Result<Vec<CycloElement>> {
    let d = poly.degree();
    let depths = depth_levels(d as u64, poly.prime() as u64);
    let inverses = pi_inverses(tower, &depths)?;
    let mut out = vec![tower.zero(); d + 1];
    for i in 1..=d {
        let a = poly.coeff(i).eval(tower)?;
        if !a.is_exact_zero() {
            out[i] = &a * &inverses[depths[i - 1] as usize];
        }
    }
    Ok(out)
}

/// `P̃` at working precision `prec`.
pub fn tilde_polynomial(poly: &InputPolynomial, prec: u32) -> Result<(Tower, Vec<CycloElement>)> {
    let tower = tower_for(poly, prec)?;
    let tilde = tilde_polynomial_in(poly, &tower)?;
    Ok((tower, tilde))
}

/// `ẽ = exp(P̃)` modulo `T^(D+1)` at working precision `prec`.
pub fn tilde_e(poly: &InputPolynomial, prec: u32) -> Result<TruncSeries<Tower>> {
    let (tower, tilde) = tilde_polynomial(poly, prec)?;
    poly_exp(&tower, &tilde, poly.degree())
}

/// Radius at a fixed working precision; fails with `PrecisionExhausted` if
/// the minimum cannot be certified.
pub fn radius_at_precision(poly: &InputPolynomial, prec: u32) -> Result<RadiusReport> {
    let e = tilde_e(poly, prec)?;
    let infos = e.valuation_infos()[1..].to_vec();
    build_report(poly.prime(), infos, poly.tower_level(), prec)
}

/// Exact `log_p ρ`, escalating precision from [`InputPolynomial::start_precision`].
pub fn radius_log(poly: &InputPolynomial) -> Result<RadiusReport> {
    radius_log_from(poly, poly.start_precision())
}

pub fn radius_log_from(poly: &InputPolynomial, start: u32) -> Result<RadiusReport> {
    escalate(start, |prec| radius_at_precision(poly, prec)).map(|(r, _)| r)
}

/// Dual Newton polygon of `ẽ`: the lower hull of `(0,0)` and `(i, v(ã_i))`.
/// Its first slope is `log_p ρ`.
pub fn newton_polygon_dual(report: &RadiusReport) -> &[Vertex] {
    &report.hull
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralityMode {
    /// Every degree `1..=D`.
    Full,
    /// Degrees `1, p, p^2, …` only; requires a p-typical polynomial.
    PPowers,
    /// The monoid generated by `p` and the support of `P`, cut at `D`.
    Monoid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub mode: IntegralityMode,
    pub integral: bool,
    /// First tested degree with `v(ã_i) < 0`.
    pub witness: Option<usize>,
    pub tested: Vec<usize>,
    pub precision: u32,
}

/// The multiplicative monoid generated by `p` and the support of `P`,
/// intersected with `[1, D]`.
pub fn degree_monoid(poly: &InputPolynomial) -> Vec<usize> {
    let d = poly.degree();
    let mut gens: BTreeSet<usize> = poly.support().into_iter().filter(|&g| g > 1).collect();
    gens.insert(poly.prime() as usize);
    let mut seen = BTreeSet::from([1usize]);
    let mut queue = VecDeque::from([1usize]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            if let Some(y) = x.checked_mul(*g) {
                if y <= d && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Tested degrees for `mode`.
pub fn integrality_degrees(poly: &InputPolynomial, mode: IntegralityMode) -> Result<Vec<usize>> {
    let d = poly.degree();
    match mode {
        IntegralityMode::Full => Ok((1..=d).collect()),
        IntegralityMode::PPowers => {
            if !poly.is_p_typical() {
                return Err(Error::InvalidInput(
                    "p_powers mode needs a polynomial supported on powers of p".into(),
                ));
            }
            let p = poly.prime() as usize;
            let mut out = Vec::new();
            let mut q = 1;
            while q <= d {
                out.push(q);
                q *= p;
            }
            Ok(out)
        }
        IntegralityMode::Monoid => Ok(degree_monoid(poly)),
    }
}

/// Whether `exp(P)` has integral coefficients, decided on `ẽ`.
pub fn integrality_check(poly: &InputPolynomial, mode: IntegralityMode) -> Result<IntegralityReport> {
    integrality_check_from(poly, mode, poly.start_precision())
}

pub fn integrality_check_from(poly: &InputPolynomial, mode: IntegralityMode, start: u32) -> Result<IntegralityReport> {
    let tested = integrality_degrees(poly, mode)?;
    let (witness, precision) = escalate(start, |prec| {
        let e = tilde_e(poly, prec)?;
        for &i in &tested {
            match e.ring().valuation_info(e.coeff(i)) {
                ValuationInfo::Infinite => {}
                ValuationInfo::Exact(v) => {
                    if v < Rational64::zero() {
                        return Ok(Some(i));
                    }
                }
                ValuationInfo::AtLeast(b) => {
                    if b < Rational64::zero() {
                        return Err(Error::PrecisionExhausted);
                    }
                }
            }
        }
        Ok(None)
    })?;
    Ok(IntegralityReport {
        mode,
        integral: witness.is_none(),
        witness,
        tested,
        precision,
    })
}

/// Taylor coefficients at `a`: `a_i(a) = Σ_{k ≥ i} a_k C(k, i) a^(k-i)`, so
/// that `P(T + a) = P(a) + Σ a_i(a) T^i`. Same declared degree as `P`.
pub fn shifted_coefficients(poly: &InputPolynomial, a: &CoeffExpr) -> Result<InputPolynomial> {
    let d = poly.degree();
    let mut powers = vec![CoeffExpr::integer(1)];
    for _ in 1..d {
        let next = powers.last().unwrap().mul(a);
        powers.push(next);
    }
    let mut coeffs = vec![CoeffExpr::zero(); d + 1];
    for (i, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let mut acc = CoeffExpr::zero();
        for k in i..=d {
            let ak = poly.coeff(k);
            if ak.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(binomial(BigInt::from(k), BigInt::from(i)));
            acc = acc.add(&ak.mul(&powers[k - i]).scale(&c));
        }
        *slot = acc;
    }
    InputPolynomial::new(poly.prime(), coeffs)?.with_declared_degree(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RocPoint {
    At(String),
    /// A generic point with `|a| = p^log_r`.
    Generic(Rational64),
}

/// Radius of convergence of the Taylor expansion of `exp(P)` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RocReport {
    pub point: RocPoint,
    pub log_radius: Rational64,
    pub contributing: Vec<usize>,
    pub level: u32,
    pub precision: u32,
}

/// `log_p ρ(a)` for `exp(P)` expanded around `a`.
pub fn roc_at_point(poly: &InputPolynomial, a: &CoeffExpr) -> Result<RocReport> {
    roc_at_point_from(poly, a, poly.start_precision())
}

pub fn roc_at_point_from(poly: &InputPolynomial, a: &CoeffExpr, start: u32) -> Result<RocReport> {
    let shifted = shifted_coefficients(poly, a)?;
    let r = radius_log_from(&shifted, start)?;
    Ok(RocReport {
        point: RocPoint::At(a.to_string()),
        log_radius: r.log_radius,
        contributing: r.extremal_degrees,
        level: r.level,
        precision: r.precision,
    })
}

/// `ã_i(a)` as polynomials in an indeterminate `a` over the tower;
/// `polys[i]` is dense in `a`, `polys[0] = 1`.
#[derive(Clone, Debug)]
pub struct RocPolynomials {
    pub tower: Tower,
    pub polys: Vec<Vec<CycloElement>>,
}

pub fn roc_polynomials_at(poly: &InputPolynomial, prec: u32) -> Result<RocPolynomials> {
    let tower = tower_for(poly, prec)?;
    let d = poly.degree();
    let depths = depth_levels(d as u64, poly.prime() as u64);
    let inverses = pi_inverses(&tower, &depths)?;
    let coeffs = poly.eval_coeffs(&tower)?;
    let ring = PolyRing::new(tower.clone());
    let mut tilde: Vec<Vec<CycloElement>> = vec![Vec::new(); d + 1];
    for i in 1..=d {
        let inv = &inverses[depths[i - 1] as usize];
        let mut in_a = vec![tower.zero(); d - i + 1];
        for k in i..=d {
            if coeffs[k].is_exact_zero() {
                continue;
            }
            let c = tower.from_rational(&BigRational::from_integer(binomial(
                BigInt::from(k),
                BigInt::from(i),
            )));
            in_a[k - i] = &(&coeffs[k] * &c) * inv;
        }
        tilde[i] = ring.trim(in_a);
    }
    let e = poly_exp(&ring, &tilde, d)?;
    Ok(RocPolynomials {
        tower,
        polys: e.into_coeffs(),
    })
}

pub fn roc_polynomials(poly: &InputPolynomial) -> Result<RocPolynomials> {
    roc_polynomials_at(poly, poly.start_precision())
}

/// `log_p ρ` at a generic point of the circle `|a| = p^log_r`, with
/// `|ã_i(a)|` replaced by its Gauss norm.
pub fn roc_at_generic_radius(poly: &InputPolynomial, log_r: Rational64) -> Result<RocReport> {
    roc_at_generic_radius_from(poly, log_r, poly.start_precision())
}

pub fn roc_at_generic_radius_from(poly: &InputPolynomial, log_r: Rational64, start: u32) -> Result<RocReport> {
    let (report, precision) = escalate(start, |prec| {
        let rp = roc_polynomials_at(poly, prec)?;
        let mut infos = Vec::with_capacity(poly.degree());
        for f in &rp.polys[1..] {
            if f.iter().all(CycloElement::is_exact_zero) {
                infos.push(ValuationInfo::Infinite);
            } else {
                let g = gauss_log_norm(&rp.tower, f, log_r)?;
                infos.push(ValuationInfo::Exact(-g.log_norm));
            }
        }
        build_report(poly.prime(), infos, poly.tower_level(), prec)
    })?;
    Ok(RocReport {
        point: RocPoint::Generic(log_r),
        log_radius: report.log_radius,
        contributing: report.extremal_degrees,
        level: report.level,
        precision,
    })
}
