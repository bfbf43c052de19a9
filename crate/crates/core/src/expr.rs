//! Symbolic coefficients: rational combinations of monomials in `π_k`, `ζ_k`
//! and Dwork's `π`, evaluated exactly into a cyclotomic tower.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{dwork_pi, CycloElement, Tower};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `π_k = ζ_k - 1`.
    Pi(u32),
    /// `ζ_k`, of order `p^(k+1)`.
    Zeta(u32),
    /// A root of `X^(p-1) = -p` congruent to `π_0`.
    DworkPi,
}

impl Atom {
    fn level(self) -> u32 {
        match self {
            Atom::Pi(k) | Atom::Zeta(k) => k,
            Atom::DworkPi => 0,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pi(k) => write!(f, "pi({k})"),
            Atom::Zeta(k) => write!(f, "zeta({k})"),
            Atom::DworkPi => write!(f, "dworkpi"),
        }
    }
}

/// Sum of `c · Π atom^e` with rational `c`, kept merged and free of zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoeffExpr {
    terms: BTreeMap<BTreeMap<Atom, u32>, BigRational>,
}

impl CoeffExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        let mut e = Self::zero();
        if !q.is_zero() {
            e.terms.insert(BTreeMap::new(), q);
        }
        e
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn atom(a: Atom) -> Self {
        let mut e = Self::zero();
        e.terms.insert(BTreeMap::from([(a, 1)]), BigRational::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest tower level referenced, 0 if none.
    pub fn level(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.keys())
            .map(|a| a.level())
            .max()
            .unwrap_or(0)
    }

    /// The value if no atoms occur.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BTreeMap::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CoeffExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (a, e) in m2 {
                    *m.entry(*a).or_insert(0) += e;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::integer(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn add_term(&mut self, m: BTreeMap<Atom, u32>, c: BigRational) {
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Exact value in `tower`. Terms without Dwork's `π` are summed with
    /// exact rational coordinates, so an expression that vanishes
    /// identically evaluates to an exact zero.
    pub fn eval(&self, tower: &Tower) -> Result<CycloElement> {
        let mut by_dwork: BTreeMap<u32, Vec<BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coords = tower.exact_one();
            let mut dwork = 0;
            for (a, e) in m {
                let base = match a {
                    Atom::Pi(k) => tower.exact_pi(*k)?.to_vec(),
                    Atom::Zeta(k) => {
                        let mut z = tower.exact_pi(*k)?.to_vec();
                        z[0] += BigRational::one();
                        z
                    }
                    Atom::DworkPi => {
                        dwork += e;
                        continue;
                    }
                };
                for _ in 0..*e {
                    coords = tower.exact_mul(&coords, &base);
                }
            }
            let slot = by_dwork
                .entry(dwork)
                .or_insert_with(|| vec![BigRational::zero(); tower.degree()]);
            for (s, x) in slot.iter_mut().zip(coords) {
                *s += x * c;
            }
        }
        let mut out = tower.zero();
        let mut dpi: Option<CycloElement> = None;
        for (k, coords) in by_dwork {
            if coords.iter().all(Zero::is_zero) {
                continue;
            }
            let mut x = tower.from_exact(&coords);
            if k > 0 {
                if dpi.is_none() {
                    dpi = Some(dwork_pi(tower)?);
                }
                x = &x * &dpi.as_ref().unwrap().pow(k as u64);
            }
            out = &out + &x;
        }
        Ok(out)
    }
}

impl From<BigRational> for CoeffExpr {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let c = c.abs();
            let atoms: Vec<String> = m
                .iter()
                .map(|(a, e)| if *e == 1 { a.to_string() } else { format!("{a}^{e}") })
                .collect();
            if atoms.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", atoms.join("*"))?;
            } else {
                write!(f, "{c}*{}", atoms.join("*"))?;
            }
        }
        Ok(())
    }
}
