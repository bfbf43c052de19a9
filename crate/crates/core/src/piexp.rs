//! π-exponentials: the Witt vector `w_d` with ghost `(π_d, …, π_0)`, the
//! series `e_d`, and the global generator of degree `D`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::cyclotomic::{CycloElement, Tower};
use crate::error::{Error, Result};
use crate::radius::depth_levels;
use crate::ring::CoeffRing;
use crate::series::{poly_exp, TruncSeries};
use crate::witt::{ah_to_series, GhostWitt};

fn need_level(tower: &Tower, d: u32) -> Result<()> {
    if d > tower.level() {
        return Err(Error::LevelTooSmall {
            need: d,
            have: tower.level(),
        });
    }
    Ok(())
}

/// Ghost vector `(π_d, π_(d-1), …, π_0)`.
pub fn w_d_ghost(tower: &Tower, d: u32) -> Result<GhostWitt<Tower>> {
    need_level(tower, d)?;
    let ghost = (0..=d).rev().map(|k| tower.pi(k)).collect::<Result<Vec<_>>>()?;
    Ok(GhostWitt::new(tower.clone(), ghost))
}

/// The polynomial `π_d T + π_(d-1) T^p / p + … + π_0 T^(p^d) / p^d`, cut at `cap`.
pub fn e_d_log(tower: &Tower, d: u32, cap: usize) -> Result<Vec<CycloElement>> {
    need_level(tower, d)?;
    let p = tower.prime() as usize;
    let mut poly = vec![tower.zero(); cap + 1];
    let mut q = 1usize;
    for j in 0..=d {
        if q > cap {
            break;
        }
        poly[q] = tower.div_int(&tower.pi(d - j)?, q as i64);
        q *= p;
    }
    Ok(poly)
}

/// `e_d(T) = exp(π_d T + π_(d-1) T^p / p + … + π_0 T^(p^d) / p^d)`.
pub fn e_d_series(tower: &Tower, d: u32, cap: usize) -> Result<TruncSeries<Tower>> {
    poly_exp(tower, &e_d_log(tower, d, cap)?, cap)
}

/// `Σ_{n ≤ D} π_(d_n) T^n / n` with `d_n = ⌊log_p(D/n)⌋`.
pub fn global_generator_log(tower: &Tower, degree: usize) -> Result<Vec<CycloElement>> {
    let depths = depth_levels(degree as u64, tower.prime() as u64);
    need_level(tower, depths[0])?;
    let mut poly = vec![tower.zero(); degree + 1];
    for (i, d) in depths.iter().enumerate() {
        let n = i + 1;
        poly[n] = tower.div_int(&tower.pi(*d)?, n as i64);
    }
    Ok(poly)
}

/// `exp(Σ_{n ≤ D} π_(d_n) T^n / n)` modulo `T^(cap+1)`.
pub fn global_generator(tower: &Tower, degree: usize, cap: usize) -> Result<TruncSeries<Tower>> {
    let mut log = global_generator_log(tower, degree)?;
    log.truncate(cap + 1);
    poly_exp(tower, &log, cap)
}

/// `e_AH(T) = exp(-T - T^p/p - T^(p^2)/p^2 - …)` modulo `T^(cap+1)`.
pub fn artin_hasse<R: CoeffRing>(ring: &R, cap: usize) -> Result<TruncSeries<R>> {
    let p = ring.prime() as usize;
    let mut len = 0;
    let mut q = 1usize;
    while q <= cap {
        len += 1;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    let ones = GhostWitt::new(ring.clone(), vec![ring.one(); len]);
    ah_to_series(&ones, cap)
}

/// `H(X)` with `X H(X) = (X+1)^p - 1`, integer coefficients lowest first.
pub fn lubin_tate_cofactor(p: u32) -> Vec<BigInt> {
    (1..=p)
        .map(|k| binomial(BigInt::from(p), BigInt::from(k)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `e_d` for the p-typical Witt vector `w_d`.
    PTypical { d: u32 },
    /// The generator attached to polynomials of degree at most `D`.
    Global { degree: usize },
}

/// A π-exponential together with its lazily computed expansion.
#[derive(Debug)]
pub struct PiExpGenerator {
    tower: Tower,
    kind: GeneratorKind,
    cap: usize,
    series: OnceLock<TruncSeries<Tower>>,
}

impl PiExpGenerator {
    pub fn new(tower: Tower, kind: GeneratorKind, cap: usize) -> Result<Self> {
        match kind {
            GeneratorKind::PTypical { d } => need_level(&tower, d)?,
            GeneratorKind::Global { degree } => {
                if degree == 0 {
                    return Err(Error::InvalidInput("degree must be at least 1".into()));
                }
                need_level(&tower, depth_levels(degree as u64, tower.prime() as u64)[0])?
            }
        }
        Ok(PiExpGenerator {
            tower,
            kind,
            cap,
            series: OnceLock::new(),
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Ghost vector of the underlying Witt vector (p-typical case only).
    pub fn ghost(&self) -> Option<GhostWitt<Tower>> {
        match self.kind {
            GeneratorKind::PTypical { d } => w_d_ghost(&self.tower, d).ok(),
            GeneratorKind::Global { .. } => None,
        }
    }

    pub fn series(&self) -> Result<&TruncSeries<Tower>> {
        if let Some(s) = self.series.get() {
            return Ok(s);
        }
        let s = match self.kind {
            GeneratorKind::PTypical { d } => e_d_series(&self.tower, d, self.cap)?,
            GeneratorKind::Global { degree } => global_generator(&self.tower, degree, self.cap)?,
        };
        Ok(self.series.get_or_init(|| s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloTower;
    use num_rational::{BigRational, Rational64};

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn ghost_of_w_d() {
        let t = CycloTower::new(3, 2, 30).unwrap();
        let w = w_d_ghost(&t, 2).unwrap();
        let v: Vec<_> = w.ghost().iter().map(|c| c.valuation().unwrap().unwrap()).collect();
        assert_eq!(v, vec![q(1, 18), q(1, 6), q(1, 2)]);
        assert!(w.frobenius().agrees_to(&w_d_ghost(&t, 1).unwrap(), 25));
        assert!(w.frobenius().frobenius().frobenius().is_zero());
        assert!(matches!(w_d_ghost(&t, 3), Err(Error::LevelTooSmall { .. })));
    }

    #[test]
    fn e_zero_at_two() {
        let t = CycloTower::new(2, 0, 30).unwrap();
        let e = e_d_series(&t, 0, 2).unwrap();
        assert!(e.coeff(2).agrees_to(&t.from_rational(&BigRational::from_integer(2.into())), 25));
        assert_eq!(e.coeff(2).valuation().unwrap(), Some(q(1, 1)));
    }

    #[test]
    fn e_d_congruent_to_one() {
        let t = CycloTower::new(3, 1, 40).unwrap();
        let e = e_d_series(&t, 1, 27).unwrap();
        for c in &e.coeffs()[1..] {
            assert!(c.lower_bound().is_none_or(|v| v >= q(1, 6)));
        }
    }

    #[test]
    fn global_generator_of_degree_one_is_e0() {
        let t = CycloTower::new(5, 0, 30).unwrap();
        let g = global_generator(&t, 1, 10).unwrap();
        let e = e_d_series(&t, 0, 10).unwrap();
        assert!(g.agrees_to(&e, 25));
    }

    #[test]
    fn global_generator_is_integral() {
        let t = CycloTower::new(2, 2, 40).unwrap();
        let g = PiExpGenerator::new(t.clone(), GeneratorKind::Global { degree: 5 }, 24).unwrap();
        for c in g.series().unwrap().coeffs() {
            assert!(c.lower_bound().is_none_or(|v| v >= q(0, 1)));
        }
        assert!(PiExpGenerator::new(t, GeneratorKind::Global { degree: 8 }, 8).is_err());
    }

    #[test]
    fn cofactor() {
        let h = lubin_tate_cofactor(3);
        assert_eq!(h, vec![BigInt::from(3), BigInt::from(3), BigInt::from(1)]);
    }

    #[test]
    fn artin_hasse_is_integral() {
        let r = crate::ring::QpRing::new(3, 40).unwrap();
        let e = artin_hasse(&r, 30).unwrap();
        for c in e.coeffs() {
            assert!(c.valuation_info().lower_bound().is_none_or(|v| v >= q(0, 1)));
        }
    }
}
