//! Job dispatch and error classification.

use std::fmt;

use num_rational::Rational64;
use pirad_core::newton::slopes;
use pirad_core::oracle::{default_bound, exp_coefficients};
use pirad_core::precision::escalate;
use pirad_core::radius::{
    depth_levels, integrality_check_from, radius_log_from, roc_at_generic_radius_from, roc_at_point_from,
    tilde_polynomial,
};
use pirad_core::series::exp_digit_loss;
use pirad_core::{
    poly_exp, CoeffExpr, CycloTower, Error, InputPolynomial, IntegralityMode, UniversalCoords, ValuationInfo,
};

use crate::args::{Command, PolyArgs};
use crate::parse::{parse_constant, parse_expression, ParseError};
use crate::report::*;

/// Exit status classes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const PRECISION: i32 = 4;
    pub const MATH: i32 = 5;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: &'static str,
    pub exit: i32,
    pub message: String,
    pub position: Option<usize>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: "usage",
            exit: exit::USAGE,
            message: message.into(),
            position: None,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: "io",
            exit: exit::OTHER,
            message: message.into(),
            position: None,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code.to_string(),
            exit: self.exit,
            message: self.message.clone(),
            position: self.position,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error ({}): {}", self.code, self.message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            code: "syntax",
            exit: exit::PARSE,
            message: e.to_string(),
            position: Some(e.position),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, exit) = match &e {
            Error::NotPrime(_) => ("not_prime", exit::USAGE),
            Error::InvalidInput(_) => ("invalid_input", exit::USAGE),
            Error::NonZeroConstantTerm => ("nonzero_constant_term", exit::PARSE),
            Error::ZeroPolynomial => ("zero_polynomial", exit::PARSE),
            Error::PrecisionExhausted => ("precision_exhausted", exit::PRECISION),
            Error::EscalationLimit { .. } => ("escalation_limit", exit::PRECISION),
            Error::NoConvergence(_) => ("no_convergence", exit::PRECISION),
            Error::DivisionByZero => ("division_by_zero", exit::MATH),
            Error::RingMismatch => ("ring_mismatch", exit::MATH),
            Error::ConstantTermNotOne => ("constant_term_not_one", exit::MATH),
            Error::LevelTooSmall { .. } => ("level_too_small", exit::MATH),
            Error::NewtonCondition => ("newton_condition", exit::MATH),
        };
        CliError {
            code,
            exit,
            message: e.to_string(),
            position: None,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Build the input polynomial from text, the prime and an optional declared degree.
pub fn parse_polynomial(text: &str, p: u32, degree: Option<usize>) -> CliResult<InputPolynomial> {
    let sym = parse_expression(text)?;
    let poly = InputPolynomial::new(p, sym.0)?;
    Ok(match degree {
        Some(d) => poly.with_declared_degree(d)?,
        None => poly,
    })
}

/// Canonical text form of `P`.
pub fn format_polynomial(poly: &InputPolynomial) -> String {
    let mut out = String::new();
    for (k, c) in poly.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let mut s = c.to_string();
        let compound = s[1..].contains(" + ") || s[1..].contains(" - ");
        let negative = !compound && s.starts_with('-');
        if negative {
            s.remove(0);
        }
        if !out.is_empty() {
            out.push_str(if negative { " - " } else { " + " });
        } else if negative {
            out.push('-');
        }
        let mono = if k == 1 { "T".to_string() } else { format!("T^{k}") };
        if compound {
            out.push_str(&format!("({s})*{mono}"));
        } else if s == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{s}*{mono}"));
        }
    }
    out
}

fn start_precision(args: &PolyArgs, poly: &InputPolynomial) -> u32 {
    args.prec.unwrap_or_else(|| poly.start_precision())
}

fn mode_name(m: IntegralityMode) -> &'static str {
    match m {
        IntegralityMode::Full => "full",
        IntegralityMode::PPowers => "ppowers",
        IntegralityMode::Monoid => "monoid",
    }
}

/// Run one job; `text` is the polynomial (already read from stdin if needed).
pub fn run(cmd: &Command, text: &str) -> CliResult<Report> {
    let args = cmd.poly_args();
    let poly = parse_polynomial(text, args.prime, args.degree)?;
    let start = start_precision(args, &poly);
    let shown = format_polynomial(&poly);
    let (p, d) = (poly.prime(), poly.degree());
    Ok(match cmd {
        Command::Radius(_) => {
            let r = radius_log_from(&poly, start)?;
            Report::Radius(RadiusOut {
                prime: p,
                degree: d,
                polynomial: shown,
                log_radius: r.log_radius.into(),
                extremal_degrees: r.extremal_degrees,
                valuations: r
                    .valuations
                    .into_iter()
                    .map(|(degree, v)| DegreeVal {
                        degree,
                        valuation: v.into(),
                    })
                    .collect(),
                level: r.level,
                precision: r.precision,
            })
        }
        Command::Tilde(_) => {
            let r = radius_log_from(&poly, start)?;
            let (_, tilde) = tilde_polynomial(&poly, r.precision)?;
            let depths = depth_levels(d as u64, p as u64);
            let terms = r
                .valuations
                .into_iter()
                .map(|(i, v)| TildeTerm {
                    degree: i,
                    depth: depths[i - 1],
                    polynomial: tilde[i].valuation_info().into(),
                    exponential: v.into(),
                })
                .collect();
            Report::Tilde(TildeOut {
                prime: p,
                degree: d,
                polynomial: shown,
                terms,
                level: r.level,
                precision: r.precision,
            })
        }
        Command::Integrality { mode, .. } => {
            let r = integrality_check_from(&poly, (*mode).into(), start)?;
            Report::Integrality(IntegralityOut {
                prime: p,
                degree: d,
                polynomial: shown,
                mode: mode_name(r.mode).to_string(),
                integral: r.integral,
                witness: r.witness,
                tested: r.tested,
                precision: r.precision,
            })
        }
        Command::Roc { at, generic_logr, .. } => {
            let (r, point) = match (at, generic_logr) {
                (Some(a), None) => {
                    let a = parse_constant(a)?;
                    let r = roc_at_point_from(&poly, &a, start)?;
                    (r, PointOut::At { value: a.to_string() })
                }
                (None, Some(lr)) => {
                    let lr: Rational64 = lr
                        .trim()
                        .parse()
                        .map_err(|_| CliError::usage(format!("'{lr}' is not a rational number")))?;
                    let r = roc_at_generic_radius_from(&poly, lr, start)?;
                    (r, PointOut::Generic { log_r: lr.into() })
                }
                _ => return Err(CliError::usage("give exactly one of --at and --generic-logr")),
            };
            Report::Roc(RocOut {
                prime: p,
                degree: d,
                polynomial: shown,
                point,
                log_radius: r.log_radius.into(),
                contributing: r.contributing,
                level: r.level,
                precision: r.precision,
            })
        }
        Command::Newton(_) => {
            let r = radius_log_from(&poly, start)?;
            Report::Newton(NewtonOut {
                prime: p,
                degree: d,
                polynomial: shown,
                vertices: r
                    .hull
                    .iter()
                    .map(|&(i, v)| VertexOut {
                        degree: i,
                        valuation: v.into(),
                    })
                    .collect(),
                slopes: slopes(&r.hull).into_iter().map(Rat::from).collect(),
                log_radius: r.log_radius.into(),
                precision: r.precision,
            })
        }
        Command::Oracle { bound, .. } => {
            let m = bound.unwrap_or_else(|| default_bound(&poly));
            if m < d {
                return Err(CliError::usage(format!("degree bound {m} is below the degree {d}")));
            }
            let r = exp_coefficients(&poly, m)?;
            Report::Oracle(OracleOut {
                prime: p,
                degree: d,
                polynomial: shown,
                bound: r.bound,
                empirical_bound: r.running_sup[m].map(Rat::from),
                first_non_integral: r.first_non_integral,
                precision: r.precision,
                valuations: r
                    .valuations
                    .into_iter()
                    .enumerate()
                    .skip(1)
                    .map(|(degree, v)| DegreeVal {
                        degree,
                        valuation: match v {
                            Some(v) => Val::Exact { value: v.into() },
                            None => Val::Infinite,
                        },
                    })
                    .collect(),
            })
        }
        Command::Witt(_) => witt(&poly, shown, args.prec)?,
    })
}

fn witt(poly: &InputPolynomial, shown: String, prec: Option<u32>) -> CliResult<Report> {
    let (p, d) = (poly.prime(), poly.degree());
    let pu = p as usize;
    let total = radius_log_from(poly, prec.unwrap_or_else(|| poly.start_precision()))?;
    let mut components = Vec::new();
    for n in (1..=d).filter(|n| n % pu != 0) {
        let mut degrees = Vec::new();
        let mut coeffs = vec![CoeffExpr::zero()];
        let mut depth = 0;
        let mut k = n;
        while k <= d {
            coeffs.resize(k + 1, CoeffExpr::zero());
            coeffs[k] = poly.coeff(k).clone();
            if !poly.coeff(k).is_zero() {
                degrees.push(k);
            }
            if k * pu > d {
                break;
            }
            k *= pu;
            depth += 1;
        }
        if degrees.is_empty() {
            continue;
        }
        let comp = InputPolynomial::new(p, coeffs)?;
        let r = radius_log_from(&comp, comp.start_precision())?;
        components.push(ComponentOut {
            n,
            depth,
            degrees,
            log_radius: r.log_radius.into(),
        });
    }
    let start = prec.unwrap_or(32 + exp_digit_loss(p, d) as u32);
    let (infos, precision) = escalate(start, |prec| {
        let tower = CycloTower::new(p, poly.coefficient_level(), prec)?;
        let e = poly_exp(&tower, &poly.eval_coeffs(&tower)?, d)?;
        let u = UniversalCoords::from_series(&e, d)?;
        let infos: Vec<ValuationInfo> = u.coords().iter().map(|x| x.valuation_info()).collect();
        // Integrality must be decided; a lower bound below zero is not enough.
        if infos
            .iter()
            .any(|v| matches!(v, ValuationInfo::AtLeast(b) if *b < Rational64::from_integer(0)))
        {
            return Err(Error::PrecisionExhausted);
        }
        Ok(infos)
    })?;
    let universal_integral = infos
        .iter()
        .all(|v| !matches!(v, ValuationInfo::Exact(x) if *x < Rational64::from_integer(0)));
    Ok(Report::Witt(WittOut {
        prime: p,
        degree: d,
        polynomial: shown,
        log_radius: total.log_radius.into(),
        components,
        universal: infos
            .into_iter()
            .enumerate()
            .map(|(i, v)| DegreeVal {
                degree: i + 1,
                valuation: v.into(),
            })
            .collect(),
        universal_integral,
        precision,
    }))
}
