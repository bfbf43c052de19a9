//! JSON report types and their text rendering.
//!
//! Rationals are `{"num", "den", "decimal"}` with `den > 0`; `decimal` is a
//! rounded annotation and never used for decisions.

use std::fmt::Write;

use num_rational::Rational64;
use num_traits::Signed;
use pirad_core::ValuationInfo;
use serde::{Deserialize, Serialize};

const DECIMALS: u32 = 12;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
    pub decimal: String,
}

impl Rat {
    pub fn value(&self) -> Rational64 {
        Rational64::new(self.num, self.den)
    }
}

/// Round `r` to `DECIMALS` places, half away from zero.
pub fn decimal(r: Rational64) -> String {
    let scale = 10i128.pow(DECIMALS);
    let n = (*r.numer() as i128).abs() * scale;
    let d = *r.denom() as i128;
    let q = (2 * n + d) / (2 * d);
    let sign = if r.is_negative() && q != 0 { "-" } else { "" };
    format!("{sign}{}.{:0width$}", q / scale, q % scale, width = DECIMALS as usize)
}

impl From<Rational64> for Rat {
    fn from(r: Rational64) -> Self {
        Rat {
            num: *r.numer(),
            den: *r.denom(),
            decimal: decimal(r),
        }
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A certified valuation.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Val {
    /// The value is exactly zero.
    Infinite,
    Exact { value: Rat },
    /// Only a lower bound is known.
    AtLeast { value: Rat },
}

impl From<ValuationInfo> for Val {
    fn from(v: ValuationInfo) -> Self {
        match v {
            ValuationInfo::Infinite => Val::Infinite,
            ValuationInfo::Exact(r) => Val::Exact { value: r.into() },
            ValuationInfo::AtLeast(r) => Val::AtLeast { value: r.into() },
        }
    }
}

impl std::fmt::Display for Val {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Val::Infinite => write!(f, "inf"),
            Val::Exact { value } => write!(f, "{value}"),
            Val::AtLeast { value } => write!(f, ">= {value}"),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DegreeVal {
    pub degree: usize,
    pub valuation: Val,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RadiusOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub log_radius: Rat,
    pub extremal_degrees: Vec<usize>,
    /// `v(ã_i)` for the coefficients of the transformed exponential.
    pub valuations: Vec<DegreeVal>,
    pub level: u32,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TildeTerm {
    pub degree: usize,
    pub depth: u32,
    /// Valuation of the coefficient of the transformed polynomial.
    pub polynomial: Val,
    /// Valuation of the coefficient of its exponential.
    pub exponential: Val,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TildeOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub terms: Vec<TildeTerm>,
    pub level: u32,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IntegralityOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub mode: String,
    pub integral: bool,
    pub witness: Option<usize>,
    pub tested: Vec<usize>,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointOut {
    At { value: String },
    Generic { log_r: Rat },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RocOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub point: PointOut,
    pub log_radius: Rat,
    pub contributing: Vec<usize>,
    pub level: u32,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct VertexOut {
    pub degree: i64,
    pub valuation: Rat,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct NewtonOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub vertices: Vec<VertexOut>,
    pub slopes: Vec<Rat>,
    pub log_radius: Rat,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct OracleOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub bound: usize,
    /// `sup_{i ≤ M} -v(b_i)/i`.
    pub empirical_bound: Option<Rat>,
    pub first_non_integral: Option<usize>,
    /// `None` when computed exactly over the rationals.
    pub precision: Option<u32>,
    pub valuations: Vec<DegreeVal>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ComponentOut {
    /// The p-free index `n`; the component is `Σ_j a_(n p^j) T^(n p^j)`.
    pub n: usize,
    pub depth: u32,
    pub degrees: Vec<usize>,
    pub log_radius: Rat,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WittOut {
    pub prime: u32,
    pub degree: usize,
    pub polynomial: String,
    pub log_radius: Rat,
    /// Non-zero p-typical components.
    pub components: Vec<ComponentOut>,
    /// `v(u_n)` where `exp(P) ≡ Π (1 - u_n T^n) mod T^(D+1)`.
    pub universal: Vec<DegreeVal>,
    pub universal_integral: bool,
    pub precision: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Radius(RadiusOut),
    Tilde(TildeOut),
    Integrality(IntegralityOut),
    Roc(RocOut),
    Newton(NewtonOut),
    Oracle(OracleOut),
    Witt(WittOut),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ErrorBody {
    pub code: String,
    pub exit: i32,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ErrorOut {
    pub error: ErrorBody,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok(Report),
    Error(ErrorBody),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BatchItem {
    pub line: usize,
    pub input: String,
    pub outcome: Outcome,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BatchOut {
    pub results: Vec<BatchItem>,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn header(out: &mut String, prime: u32, degree: usize, poly: &str) {
    writeln!(out, "P = {poly}").unwrap();
    writeln!(out, "p = {prime}, D = {degree}").unwrap();
}

fn rat_line(out: &mut String, label: &str, r: &Rat) {
    writeln!(out, "{label} = {r}  (~ {})", r.decimal).unwrap();
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Radius(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                rat_line(&mut s, "log_p rho", &r.log_radius);
                writeln!(s, "attained at degrees: {}", join(&r.extremal_degrees)).unwrap();
                for dv in &r.valuations {
                    writeln!(s, "  v(e~_{}) = {}", dv.degree, dv.valuation).unwrap();
                }
                writeln!(s, "tower level {}, precision {}", r.level, r.precision).unwrap();
            }
            Report::Tilde(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                writeln!(s, "{:>6} {:>6} {:>18} {:>18}", "i", "d_i", "v(P~_i)", "v(e~_i)").unwrap();
                for t in &r.terms {
                    writeln!(
                        s,
                        "{:>6} {:>6} {:>18} {:>18}",
                        t.degree,
                        t.depth,
                        t.polynomial.to_string(),
                        t.exponential.to_string()
                    )
                    .unwrap();
                }
                writeln!(s, "tower level {}, precision {}", r.level, r.precision).unwrap();
            }
            Report::Integrality(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                writeln!(s, "mode: {}", r.mode).unwrap();
                writeln!(s, "integral: {}", if r.integral { "yes" } else { "no" }).unwrap();
                if let Some(w) = r.witness {
                    writeln!(s, "first failing degree: {w}").unwrap();
                }
                writeln!(s, "degrees tested: {}", r.tested.len()).unwrap();
                writeln!(s, "precision {}", r.precision).unwrap();
            }
            Report::Roc(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                match &r.point {
                    PointOut::At { value } => writeln!(s, "point: a = {value}").unwrap(),
                    PointOut::Generic { log_r } => writeln!(s, "point: generic, log_p |a| = {log_r}").unwrap(),
                }
                rat_line(&mut s, "log_p rho(a)", &r.log_radius);
                writeln!(s, "attained at degrees: {}", join(&r.contributing)).unwrap();
                writeln!(s, "tower level {}, precision {}", r.level, r.precision).unwrap();
            }
            Report::Newton(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                let vs: Vec<String> = r.vertices.iter().map(|v| format!("({}, {})", v.degree, v.valuation)).collect();
                writeln!(s, "vertices: {}", vs.join(" ")).unwrap();
                writeln!(s, "slopes: {}", join(&r.slopes)).unwrap();
                rat_line(&mut s, "log_p rho", &r.log_radius);
                writeln!(s, "precision {}", r.precision).unwrap();
            }
            Report::Oracle(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                writeln!(s, "M = {}", r.bound).unwrap();
                match &r.empirical_bound {
                    Some(b) => rat_line(&mut s, "sup -v(b_i)/i", b),
                    None => writeln!(s, "sup -v(b_i)/i: all b_i vanish").unwrap(),
                }
                match r.first_non_integral {
                    Some(i) => writeln!(s, "first non-integral degree: {i}").unwrap(),
                    None => writeln!(s, "integral up to degree {}", r.bound).unwrap(),
                }
                match r.precision {
                    Some(p) => writeln!(s, "precision {p}").unwrap(),
                    None => writeln!(s, "exact rational arithmetic").unwrap(),
                }
            }
            Report::Witt(r) => {
                header(&mut s, r.prime, r.degree, &r.polynomial);
                rat_line(&mut s, "log_p rho", &r.log_radius);
                for c in &r.components {
                    writeln!(
                        s,
                        "  component n = {} (depth {}, degrees {}): log_p rho = {}",
                        c.n,
                        c.depth,
                        join(&c.degrees),
                        c.log_radius
                    )
                    .unwrap();
                }
                writeln!(s, "universal coordinates:").unwrap();
                for dv in &r.universal {
                    writeln!(s, "  v(u_{}) = {}", dv.degree, dv.valuation).unwrap();
                }
                writeln!(s, "integral: {}", if r.universal_integral { "yes" } else { "no" }).unwrap();
                writeln!(s, "precision {}", r.precision).unwrap();
            }
        }
        s
    }
}
