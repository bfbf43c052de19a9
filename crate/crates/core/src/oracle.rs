//! Brute-force checks: the coefficients `b_i` of `exp(P)` itself, computed
//! without the `P̃` transformation.
//!
//! For rational `P` the coefficients are computed exactly over `Q`;
//! otherwise in the cyclotomic tower with adaptive precision.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use crate::cyclotomic::CycloTower;
use crate::error::{Error, Result};
use crate::padic::split_p;
use crate::precision::escalate;
use crate::radius::InputPolynomial;
use crate::series::{exp_digit_loss, poly_exp};
use crate::valuation::ValuationInfo;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub prime: u32,
    /// Degree bound `M`.
    pub bound: usize,
    /// `v(b_i)` for `0 ≤ i ≤ M`; `None` for `b_i = 0`.
    pub valuations: Vec<Option<Rational64>>,
    /// `sup_{1 ≤ j ≤ i} -v(b_j)/j` for `0 ≤ i ≤ M` (`None` while all `b_j` vanish).
    pub running_sup: Vec<Option<Rational64>>,
    pub first_non_integral: Option<usize>,
    /// Working precision, `None` when computed exactly over `Q`.
    pub precision: Option<u32>,
}

/// `min(4 D p, 2000)`.
pub fn default_bound(poly: &InputPolynomial) -> usize {
    (4 * poly.degree() * poly.prime() as usize).min(2000)
}

fn rational_valuation(q: &BigRational, p: u32) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let (a, _) = split_p(q.numer(), p);
    let (b, _) = split_p(q.denom(), p);
    Some(a - b)
}

/// Exact `exp(P)` coefficients over `Q` up to degree `m`.
pub fn exp_rational(coeffs: &[BigRational], m: usize) -> Vec<BigRational> {
    let weighted: Vec<(usize, BigRational)> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(k, c)| *k <= m && !c.is_zero())
        .map(|(k, c)| (k, c * BigRational::from_integer(BigInt::from(k))))
        .collect();
    let mut b = vec![BigRational::from_integer(BigInt::from(1))];
    for n in 1..=m {
        let mut acc = BigRational::zero();
        for (k, kp) in &weighted {
            if *k > n {
                break;
            }
            if !b[n - k].is_zero() {
                acc += kp * &b[n - k];
            }
        }
        b.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    b
}

fn report(p: u32, valuations: Vec<Option<Rational64>>, precision: Option<u32>) -> OracleReport {
    let mut running = Vec::with_capacity(valuations.len());
    let mut sup: Option<Rational64> = None;
    let mut first_non_integral = None;
    for (i, v) in valuations.iter().enumerate() {
        if i > 0 {
            if let Some(v) = v {
                let x = -*v / Rational64::from_integer(i as i64);
                sup = Some(sup.map_or(x, |s| s.max(x)));
                if v.is_negative() && first_non_integral.is_none() {
                    first_non_integral = Some(i);
                }
            }
        }
        running.push(sup);
    }
    OracleReport {
        prime: p,
        bound: valuations.len() - 1,
        valuations,
        running_sup: running,
        first_non_integral,
        precision,
    }
}

/// Coefficients of `exp(P)` up to degree `m` with certified valuations.
pub fn exp_coefficients(poly: &InputPolynomial, m: usize) -> Result<OracleReport> {
    if m == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let p = poly.prime();
    if let Some(coeffs) = poly.rational_coeffs() {
        let b = exp_rational(&coeffs, m);
        let vals = b
            .iter()
            .map(|c| rational_valuation(c, p).map(Rational64::from_integer))
            .collect();
        return Ok(report(p, vals, None));
    }
    let start = 32 + exp_digit_loss(p, m) as u32;
    let (vals, prec) = escalate(start, |prec| {
        let tower = CycloTower::new(p, poly.coefficient_level(), prec)?;
        let coeffs = poly.eval_coeffs(&tower)?;
        let e = poly_exp(&tower, &coeffs, m)?;
        e.coeffs()
            .iter()
            .map(|c| match c.valuation_info() {
                ValuationInfo::Infinite => Ok(None),
                ValuationInfo::Exact(v) => Ok(Some(v)),
                ValuationInfo::AtLeast(_) => Err(Error::PrecisionExhausted),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(report(p, vals, Some(prec)))
}

/// `sup_{1 ≤ i ≤ M} -v(b_i)/i`, a lower bound for `-log_p ρ`.
pub fn empirical_radius_bound(poly: &InputPolynomial, m: usize) -> Result<Rational64> {
    let r = exp_coefficients(poly, m)?;
    r.running_sup[m].ok_or(Error::ZeroPolynomial)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityScan {
    pub bound: usize,
    pub integral: bool,
    pub first_violation: Option<usize>,
}

/// Direct check of `v(b_i) ≥ 0` for `i ≤ M`.
pub fn integrality_scan(poly: &InputPolynomial, m: usize) -> Result<IntegralityScan> {
    let r = exp_coefficients(poly, m)?;
    Ok(IntegralityScan {
        bound: m,
        integral: r.first_non_integral.is_none(),
        first_violation: r.first_non_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Atom, CoeffExpr};

    fn t(p: u32) -> InputPolynomial {
        InputPolynomial::from_rationals(p, &[BigRational::zero(), BigRational::from_integer(1.into())]).unwrap()
    }

    #[test]
    fn legendre_for_exp() {
        let r = exp_coefficients(&t(3), 81).unwrap();
        for n in 1..=81usize {
            assert_eq!(r.valuations[n], Some(Rational64::from_integer(-(exp_digit_loss(3, n) as i64))));
        }
        assert_eq!(r.running_sup[81], Some(Rational64::new(40, 81)));
        assert_eq!(empirical_radius_bound(&t(3), 81).unwrap(), Rational64::new(40, 81));
    }

    #[test]
    fn scan_of_exp() {
        for p in [2u32, 3, 5] {
            let s = integrality_scan(&t(p), 20).unwrap();
            assert_eq!(s.first_violation, Some(p as usize));
        }
        let two_t = InputPolynomial::from_rationals(2, &[BigRational::zero(), BigRational::from_integer(2.into())]).unwrap();
        assert!(integrality_scan(&two_t, 64).unwrap().integral);
        assert!(empirical_radius_bound(&two_t, 64).unwrap() <= Rational64::zero());
    }

    #[test]
    fn tower_path_matches_rational_path() {
        // zeta(0) - pi(0) = 1, so this is exp(T) written in the tower.
        let c = CoeffExpr::atom(Atom::Zeta(0)).sub(&CoeffExpr::atom(Atom::Pi(0)));
        let poly = InputPolynomial::new(3, vec![CoeffExpr::zero(), c]).unwrap();
        let a = exp_coefficients(&poly, 27).unwrap();
        let b = exp_coefficients(&t(3), 27).unwrap();
        assert_eq!(a.valuations, b.valuations);
        assert!(a.precision.is_some());
    }
}
