//! p-typical Witt vectors in ghost coordinates, the Artin–Hasse map and
//! universal (big Witt) coordinates of 1-unit series.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::radius::depth_of;
use crate::ring::CoeffRing;
use crate::series::{poly_exp, TruncSeries};
use crate::valuation::ValuationInfo;

/// A Witt vector given by finitely many ghost components `(φ_0, φ_1, …)`;
/// all later components are zero.
#[derive(Clone, Debug)]
pub struct GhostWitt<R: CoeffRing> {
    ring: R,
    ghost: Vec<R::Elem>,
}

impl<R: CoeffRing> GhostWitt<R> {
    pub fn new(ring: R, ghost: Vec<R::Elem>) -> Self {
        let mut w = GhostWitt { ring, ghost };
        w.trim();
        w
    }

    pub fn zero(ring: R) -> Self {
        GhostWitt {
            ring,
            ghost: Vec::new(),
        }
    }

    /// `γ_0(t)`, with ghost components `t, t^p, t^(p^2), …`, kept to `len` terms.
    pub fn gamma0(ring: R, t: &R::Elem, len: usize) -> Self {
        let p = ring.prime() as u64;
        let mut ghost = Vec::with_capacity(len);
        let mut x = t.clone();
        for _ in 0..len {
            ghost.push(x.clone());
            x = ring.pow(&x, p);
        }
        Self::new(ring, ghost)
    }

    fn trim(&mut self) {
        while self.ghost.last().is_some_and(|c| self.ring.is_exact_zero(c)) {
            self.ghost.pop();
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ghost(&self) -> &[R::Elem] {
        &self.ghost
    }

    /// Ghost component `i`, zero beyond the support.
    pub fn component(&self, i: usize) -> R::Elem {
        self.ghost.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.ghost.is_empty()
    }

    /// Frobenius: `(φ_0, φ_1, …) ↦ (φ_1, φ_2, …)`.
    pub fn frobenius(&self) -> Self {
        GhostWitt {
            ring: self.ring.clone(),
            ghost: self.ghost.iter().skip(1).cloned().collect(),
        }
    }

    /// Verschiebung: `(φ_0, φ_1, …) ↦ (0, pφ_0, pφ_1, …)`.
    pub fn verschiebung(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.ring.from_int(self.ring.prime() as i64);
        let mut ghost = vec![self.ring.zero()];
        ghost.extend(self.ghost.iter().map(|c| self.ring.mul(&p, c)));
        GhostWitt {
            ring: self.ring.clone(),
            ghost,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.ghost.len().max(other.ghost.len());
        let ghost = (0..n)
            .map(|i| self.ring.add(&self.component(i), &other.component(i)))
            .collect();
        Ok(Self::new(self.ring.clone(), ghost))
    }

    pub fn neg(&self) -> Self {
        GhostWitt {
            ring: self.ring.clone(),
            ghost: self.ghost.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    /// Witt product: componentwise on ghosts.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ghost = self
            .ghost
            .iter()
            .zip(&other.ghost)
            .map(|(a, b)| self.ring.mul(a, b))
            .collect();
        Ok(Self::new(self.ring.clone(), ghost))
    }

    /// Apply `f` to every ghost component.
    pub fn map(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Self::new(self.ring.clone(), self.ghost.iter().map(f).collect())
    }

    /// True if the ghost sequences agree to `digits` in every component.
    pub fn agrees_to(&self, other: &Self, digits: i64) -> bool {
        let n = self.ghost.len().max(other.ghost.len());
        (0..n).all(|i| {
            let d = self.ring.sub(&self.component(i), &other.component(i));
            self.ring
                .valuation_info(&d)
                .lower_bound()
                .is_none_or(|b| b >= Rational64::from_integer(digits))
        })
    }

    /// Witt coordinates `x_0, …, x_(n-1)` from `φ_k = Σ_{i≤k} p^i x_i^(p^(k-i))`.
    pub fn witt_coords(&self, n: usize) -> WittCoords<R::Elem> {
        let r = &self.ring;
        let p = r.prime() as u64;
        let mut x: Vec<R::Elem> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.component(k);
            for (i, xi) in x.iter().enumerate() {
                if r.is_exact_zero(xi) {
                    continue;
                }
                let term = r.mul(&r.from_int(p.pow(i as u32) as i64), &r.pow(xi, p.pow((k - i) as u32)));
                acc = r.sub(&acc, &term);
            }
            let xk = if r.is_exact_zero(&acc) {
                acc
            } else {
                r.div_int(&acc, p.pow(k as u32) as i64)
            };
            x.push(xk);
        }
        let integral = x.iter().all(|c| match r.valuation_info(c) {
            ValuationInfo::Infinite => true,
            ValuationInfo::Exact(v) => v >= Rational64::from_integer(0),
            // Zero to a non-negative absolute precision: consistent with integrality.
            ValuationInfo::AtLeast(v) => v >= Rational64::from_integer(0),
        });
        WittCoords { coords: x, integral }
    }
}

#[derive(Clone, Debug)]
pub struct WittCoords<E> {
    pub coords: Vec<E>,
    /// False if some coordinate was certified to have negative valuation.
    pub integral: bool,
}

/// `AH(x) = exp(-Σ φ_i T^(p^i) / p^i)` modulo `T^(cap+1)`.
pub fn ah_to_series<R: CoeffRing>(x: &GhostWitt<R>, cap: usize) -> Result<TruncSeries<R>> {
    let r = x.ring();
    let p = r.prime() as usize;
    let mut poly = vec![r.zero(); cap + 1];
    let mut q = 1usize;
    for phi in x.ghost() {
        if q > cap {
            break;
        }
        poly[q] = r.neg(&r.div_int(phi, q as i64));
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    poly_exp(r, &poly, cap)
}

/// The component `P_n` of `P(T) = Σ_{p ∤ n} P_n(T^n)`, with `P_n` p-typical.
#[derive(Clone, Debug)]
pub struct PTypicalComponent<E> {
    pub n: usize,
    /// `⌊log_p(D/n)⌋`, the largest `j` with `n p^j ≤ D`.
    pub depth: u32,
    /// Dense coefficients of `P_n`; only degrees `p^j` are non-zero.
    pub poly: Vec<E>,
}

impl<E> PTypicalComponent<E> {
    pub fn is_zero_with(&self, is_zero: impl Fn(&E) -> bool) -> bool {
        self.poly.iter().all(is_zero)
    }
}

/// Split `P` (dense, degree `D = poly.len() - 1`) by the p-free part of each
/// degree. Every p-free `n ≤ D` gets a component, possibly zero.
pub fn p_typical_decompose<R: CoeffRing>(ring: &R, poly: &[R::Elem]) -> Result<Vec<PTypicalComponent<R::Elem>>> {
    if poly.first().is_some_and(|c| !ring.is_exact_zero(c)) {
        return Err(Error::NonZeroConstantTerm);
    }
    let p = ring.prime() as usize;
    let d = poly.len().saturating_sub(1);
    let mut out = Vec::new();
    for n in (1..=d).filter(|n| n % p != 0) {
        let depth = depth_of(d as u64, n as u64, p as u64);
        let mut comp = vec![ring.zero(); p.pow(depth) + 1];
        let mut q = 1usize;
        for _ in 0..=depth {
            comp[q] = poly[n * q].clone();
            q *= p;
        }
        out.push(PTypicalComponent { n, depth, poly: comp });
    }
    Ok(out)
}

/// `Σ_n P_n(T^n)` as a dense polynomial of degree `d`.
pub fn p_typical_recompose<R: CoeffRing>(ring: &R, parts: &[PTypicalComponent<R::Elem>], d: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); d + 1];
    for part in parts {
        for (j, c) in part.poly.iter().enumerate() {
            if ring.is_exact_zero(c) {
                continue;
            }
            let deg = part.n * j;
            if deg <= d {
                out[deg] = ring.add(&out[deg], c);
            }
        }
    }
    out
}

/// Coordinates `u_1, …, u_D` with `f ≡ Π (1 - u_n T^n) mod T^(D+1)`.
#[derive(Clone, Debug)]
pub struct UniversalCoords<R: CoeffRing> {
    ring: R,
    u: Vec<R::Elem>,
}

impl<R: CoeffRing> UniversalCoords<R> {
    pub fn from_series(f: &TruncSeries<R>, d: usize) -> Result<Self> {
        let ring = f.ring().clone();
        if d > f.cap() {
            return Err(Error::InvalidInput(format!(
                "series known to degree {} only, {} requested",
                f.cap(),
                d
            )));
        }
        let delta = ring.sub(f.coeff(0), &ring.one());
        if matches!(ring.valuation_info(&delta), ValuationInfo::Exact(_)) {
            return Err(Error::ConstantTermNotOne);
        }
        let mut g: Vec<R::Elem> = f.coeffs()[..=d].to_vec();
        let mut u = Vec::with_capacity(d);
        for n in 1..=d {
            // g ≡ 1 mod T^n, so the factor (1 - u_n T^n) is read off at degree n.
            let un = ring.neg(&g[n]);
            if !ring.is_exact_zero(&un) {
                // g ← g / (1 - u_n T^n) = g · Σ_j u_n^j T^(nj), top-down in place.
                for k in (n..=d).rev() {
                    let mut acc = g[k].clone();
                    let mut power = un.clone();
                    let mut j = 1;
                    while j * n <= k {
                        let prev = &g[k - j * n];
                        if !ring.is_exact_zero(prev) {
                            acc = ring.add(&acc, &ring.mul(&power, prev));
                        }
                        power = ring.mul(&power, &un);
                        j += 1;
                    }
                    g[k] = acc;
                }
            }
            u.push(un);
        }
        Ok(UniversalCoords { ring, u })
    }

    pub fn coords(&self) -> &[R::Elem] {
        &self.u
    }

    /// `u_n` for `1 ≤ n ≤ D`.
    pub fn get(&self, n: usize) -> &R::Elem {
        &self.u[n - 1]
    }

    pub fn to_series(&self) -> TruncSeries<R> {
        let d = self.u.len();
        let r = &self.ring;
        let mut acc = TruncSeries::one(r.clone(), d);
        for (i, un) in self.u.iter().enumerate() {
            if r.is_exact_zero(un) {
                continue;
            }
            let mut factor = vec![r.zero(); i + 2];
            factor[0] = r.one();
            factor[i + 1] = r.neg(un);
            let factor = TruncSeries::new(r.clone(), d, factor);
            acc = acc.mul(&factor).expect("same ring");
        }
        acc
    }

    /// True if `u_1, …, u_k` are all certified integral.
    pub fn integral_through(&self, k: usize) -> Result<bool> {
        for un in &self.u[..k.min(self.u.len())] {
            if let Some(v) = self.ring.valuation(un)? {
                if v < Rational64::from_integer(0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
