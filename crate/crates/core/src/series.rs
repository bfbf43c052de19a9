//! Power series truncated at a degree cap.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::padic::vp_u64;
use crate::ring::CoeffRing;
use crate::valuation::ValuationInfo;

/// A series `b_0 + b_1 T + … + b_M T^M` known modulo `T^(M+1)`.
#[derive(Clone, Debug)]
pub struct TruncSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> TruncSeries<R> {
    /// Pads with zeros or truncates `coeffs` to length `cap + 1`.
    pub fn new(ring: R, cap: usize, mut coeffs: Vec<R::Elem>) -> Self {
        coeffs.resize(cap + 1, ring.zero());
        TruncSeries { ring, coeffs }
    }

    pub fn one(ring: R, cap: usize) -> Self {
        let one = ring.one();
        Self::new(ring, cap, vec![one])
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn truncate(&self, cap: usize) -> Self {
        Self::new(self.ring.clone(), cap, self.coeffs[..=cap.min(self.cap())].to_vec())
    }

    /// Cauchy product, truncated at the smaller of the two caps.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let cap = self.cap().min(other.cap());
        let r = &self.ring;
        let mut out = vec![r.zero(); cap + 1];
        for (i, a) in self.coeffs[..=cap].iter().enumerate() {
            if r.is_exact_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..=cap - i].iter().enumerate() {
                if r.is_exact_zero(b) {
                    continue;
                }
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let cap = self.cap().min(other.cap());
        let coeffs = (0..=cap)
            .map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// `f(cT)`: coefficient `b_n` becomes `b_n c^n`.
    pub fn scale(&self, c: &R::Elem) -> Self {
        let r = &self.ring;
        let mut power = r.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for b in &self.coeffs {
            coeffs.push(if r.is_exact_zero(b) { r.zero() } else { r.mul(b, &power) });
            power = r.mul(&power, c);
        }
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// `f(T^m)`, truncated at the same cap.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1);
        let cap = self.cap();
        let mut coeffs = vec![self.ring.zero(); cap + 1];
        for (i, b) in self.coeffs.iter().enumerate() {
            if i * m > cap {
                break;
            }
            coeffs[i * m] = b.clone();
        }
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn valuation_infos(&self) -> Vec<ValuationInfo> {
        self.coeffs.iter().map(|c| self.ring.valuation_info(c)).collect()
    }

    /// True if `self - other` has valuation at least `digits` in every degree.
    pub fn agrees_to(&self, other: &Self, digits: i64) -> bool {
        let cap = self.cap().min(other.cap());
        (0..=cap).all(|i| {
            let d = self.ring.sub(&self.coeffs[i], &other.coeffs[i]);
            self.ring
                .valuation_info(&d)
                .lower_bound()
                .is_none_or(|b| b >= Rational64::from_integer(digits))
        })
    }
}

/// `exp(P)` modulo `T^(cap+1)` via `n b_n = Σ k p_k b_(n-k)`.
///
/// Each division by `n` costs up to `v_p(n)` digits; see [`exp_digit_loss`].
pub fn poly_exp<R: CoeffRing>(ring: &R, poly: &[R::Elem], cap: usize) -> Result<TruncSeries<R>> {
    if poly.first().is_some_and(|c| !ring.is_exact_zero(c)) {
        return Err(Error::NonZeroConstantTerm);
    }
    let weighted: Vec<(usize, R::Elem)> = poly
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(k, c)| *k <= cap && !ring.is_exact_zero(c))
        .map(|(k, c)| (k, ring.mul(&ring.from_int(k as i64), c)))
        .collect();
    let mut b = Vec::with_capacity(cap + 1);
    b.push(ring.one());
    for n in 1..=cap {
        let mut acc = ring.zero();
        for (k, kp) in &weighted {
            if *k > n {
                break;
            }
            let prev = &b[n - k];
            if ring.is_exact_zero(prev) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(kp, prev));
        }
        let bn = if ring.is_exact_zero(&acc) {
            acc
        } else {
            ring.div_int(&acc, n as i64)
        };
        b.push(bn);
    }
    Ok(TruncSeries::new(ring.clone(), cap, b))
}

/// Worst-case digits lost by [`poly_exp`] up to degree `cap`: `v_p(cap!)`.
pub fn exp_digit_loss(p: u32, cap: usize) -> u64 {
    (1..=cap as u64).map(|n| vp_u64(n, p) as u64).sum()
}

/// `log f` as a polynomial of degree `cap` with zero constant term.
pub fn series_log<R: CoeffRing>(f: &TruncSeries<R>) -> Result<Vec<R::Elem>> {
    let ring = f.ring();
    let b = f.coeffs();
    let delta = ring.sub(&b[0], &ring.one());
    if matches!(ring.valuation_info(&delta), ValuationInfo::Exact(_)) {
        return Err(Error::ConstantTermNotOne);
    }
    // f'/f = l', so n l_n = n b_n - Σ_{k<n} k l_k b_(n-k)
    let mut l = vec![ring.zero(); b.len()];
    for n in 1..b.len() {
        let mut acc = ring.mul(&ring.from_int(n as i64), &b[n]);
        for k in 1..n {
            if ring.is_exact_zero(&l[k]) || ring.is_exact_zero(&b[n - k]) {
                continue;
            }
            let t = ring.mul(&ring.mul(&ring.from_int(k as i64), &l[k]), &b[n - k]);
            acc = ring.sub(&acc, &t);
        }
        l[n] = if ring.is_exact_zero(&acc) {
            acc
        } else {
            ring.div_int(&acc, n as i64)
        };
    }
    Ok(l)
}

/// `log_p` of a Gauss norm together with the degrees attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussNorm {
    pub log_norm: Rational64,
    pub argmax: Vec<usize>,
}

/// `max_i (-v(b_i) + i log_r)`: the Gauss norm at radius `p^log_r`.
///
/// A coefficient known only to some absolute precision is harmless if its
/// largest possible contribution stays strictly below the certified maximum.
pub fn gauss_log_norm<R: CoeffRing>(ring: &R, coeffs: &[R::Elem], log_r: Rational64) -> Result<GaussNorm> {
    let mut best: Option<GaussNorm> = None;
    let mut uncertain: Option<Rational64> = None;
    for (i, c) in coeffs.iter().enumerate() {
        let shift = log_r * Rational64::from_integer(i as i64);
        let v = match ring.valuation_info(c) {
            ValuationInfo::Infinite => continue,
            ValuationInfo::AtLeast(b) => {
                let ub = -b + shift;
                uncertain = Some(uncertain.map_or(ub, |u| u.max(ub)));
                continue;
            }
            ValuationInfo::Exact(v) => v,
        };
        let value = -v + shift;
        match &mut best {
            Some(g) if value < g.log_norm => {}
            Some(g) if value == g.log_norm => g.argmax.push(i),
            _ => {
                best = Some(GaussNorm {
                    log_norm: value,
                    argmax: vec![i],
                })
            }
        }
    }
    match (best, uncertain) {
        (Some(g), Some(ub)) if ub < g.log_norm => Ok(g),
        (Some(g), None) => Ok(g),
        (_, Some(_)) => Err(Error::PrecisionExhausted),
        (None, None) => Err(Error::ZeroPolynomial),
    }
}
