//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use pirad_core::newton::first_slope;
use pirad_core::oracle::{empirical_radius_bound, integrality_scan};
use pirad_core::piexp::{artin_hasse, e_d_series, lubin_tate_cofactor, w_d_ghost};
use pirad_core::radius::{integrality_check, radius_log, roc_at_point, IntegralityMode};
use pirad_core::series::exp_digit_loss;
use pirad_core::witt::{ah_to_series, p_typical_decompose, GhostWitt, UniversalCoords};
use pirad_core::{Atom, CoeffExpr, CoeffRing, CycloTower, InputPolynomial, QpRing, TruncSeries};

type Outcome = Result<String, String>;

const SEED: u64 = 0x5EED_2024;

fn rational_poly(p: u32, c: &[BigRational]) -> InputPolynomial {
    InputPolynomial::from_rationals(p, c).unwrap()
}

fn exp_t(p: u32) -> InputPolynomial {
    rational_poly(p, &[br(0, 1), br(1, 1)])
}

fn log_radius(poly: &InputPolynomial) -> Result<Rational64, String> {
    radius_log(poly).map(|r| r.log_radius).map_err(|e| e.to_string())
}

fn check_eq(failures: &mut Vec<String>, what: &str, got: Rational64, want: Rational64) {
    if got != want {
        failures.push(format!("{what}: got {got}, expected {want}"));
    }
}

fn verdict(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures.join("; "))
    }
}

/// Golden radii.
fn criterion_1() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;

    for p in [2u32, 3, 5, 7] {
        check_eq(&mut fails, &format!("exp(T), p={p}"), log_radius(&exp_t(p))?, q(-1, p as i64 - 1));
        count += 1;
    }

    for p in [2u32, 3, 5] {
        let pi = p as i64;
        let mut c = vec![BigRational::zero(); p as usize + 1];
        c[1] = br(1, 1);
        c[p as usize] = br(1, pi);
        let want = q(-(2 * pi - 1), pi * pi * (pi - 1));
        check_eq(&mut fails, &format!("exp(T+T^p/p), p={p}"), log_radius(&rational_poly(p, &c))?, want);
        count += 1;
    }

    for p in [2u32, 3, 5, 7] {
        let padded = exp_t(p).with_declared_degree(p as usize).map_err(|e| e.to_string())?;
        check_eq(&mut fails, &format!("exp(T) declared degree p, p={p}"), log_radius(&padded)?, log_radius(&exp_t(p))?);
        count += 1;
    }

    for p in [2u32, 3, 5] {
        let pi = p as i64;
        let dwork = CoeffExpr::atom(Atom::DworkPi);
        let mut c = vec![CoeffExpr::zero(); p as usize + 1];
        c[1] = dwork.clone();
        c[p as usize] = dwork.neg();
        let poly = InputPolynomial::new(p, c).map_err(|e| e.to_string())?;
        check_eq(&mut fails, &format!("exp(pi(T-T^p)), p={p}"), log_radius(&poly)?, q(pi - 1, pi * pi));
        count += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..5 {
        let p = 5u32;
        let mut c = vec![BigRational::zero(); 6];
        c[1] = br(1, 1);
        c[5] = br(1, 5);
        for slot in c.iter_mut().take(5).skip(2) {
            *slot = BigRational::from_integer(BigInt::from(unit(&mut rng, p, 30)));
        }
        let label = format!("T + a2 T^2 + a3 T^3 + a4 T^4 + T^5/5 at p=5, a2..a4 = {}, {}, {}", c[2], c[3], c[4]);
        check_eq(&mut fails, &label, log_radius(&rational_poly(p, &c))?, q(-1, 4));
        count += 1;
    }

    verdict(fails, format!("{count} exact radii"))
}

/// π-exponential coefficient law.
fn criterion_2() -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for p in [2u32, 3] {
        for d in 0u32..=2 {
            let cap = (p as usize).pow(d + 2);
            let prec = exp_digit_loss(p, cap) as u32 + 48;
            let tower = CycloTower::new(p, d, prec).map_err(|e| e.to_string())?;
            let e = e_d_series(&tower, d, cap).map_err(|e| e.to_string())?;
            let floor = q(1, (p as i64).pow(d) * (p as i64 - 1));
            for i in 1..=cap {
                let is_power = (0..=d + 2).any(|k| (p as usize).pow(k) == i);
                let info = e.coeff(i).valuation_info();
                let ok = match (is_power, info.certified()) {
                    (true, Ok(Some(v))) => v == floor,
                    (false, Ok(Some(v))) => v > floor,
                    (false, Ok(None)) => true,
                    (false, Err(_)) => info.lower_bound().is_some_and(|b| b > floor),
                    (true, _) => false,
                };
                if !ok {
                    fails.push(format!("p={p} d={d} i={i}: {info:?} vs v(pi_d) = {floor}"));
                }
                checked += 1;
            }
        }
    }
    verdict(fails, format!("{checked} coefficients checked"))
}

/// `AH(w_d) = e_AH(ζT) · e_AH(-T)` to degree 200.
fn criterion_3() -> Outcome {
    let cap = 200;
    let mut fails = Vec::new();
    for p in [2u32, 3] {
        for d in 0u32..=1 {
            let prec = exp_digit_loss(p, cap) as u32 + 64;
            let tower = CycloTower::new(p, d, prec).map_err(|e| e.to_string())?;
            let lhs = ah_to_series(&w_d_ghost(&tower, d).map_err(|e| e.to_string())?, cap).map_err(|e| e.to_string())?;
            let eah = artin_hasse(&tower, cap).map_err(|e| e.to_string())?;
            let zeta = tower.zeta(d).map_err(|e| e.to_string())?;
            let minus_one = tower.from_rational(&br(-1, 1));
            let rhs = eah.scale(&zeta).mul(&eah.scale(&minus_one)).map_err(|e| e.to_string())?;
            let bad: Vec<usize> = (0..=cap)
                .filter(|&i| !zero_at_precision((lhs.coeff(i) - rhs.coeff(i)).valuation_info(), 20))
                .collect();
            if let Some(first) = bad.first() {
                fails.push(format!(
                    "p={p} d={d}: {} of {} coefficients differ, first at degree {first}",
                    bad.len(),
                    cap + 1
                ));
            }
        }
    }
    verdict(fails, "4 cases to degree 200".into())
}

/// Oracle bracketing.
fn criterion_4() -> Outcome {
    let mut fails = Vec::new();
    let bound = empirical_radius_bound(&exp_t(3), 81).map_err(|e| e.to_string())?;
    let truth = -log_radius(&exp_t(3))?;
    check_eq(&mut fails, "bound(T, p=3, M=81)", bound, q(40, 81));
    check_eq(&mut fails, "-log_3 rho(T)", truth, q(1, 2));
    check_eq(&mut fails, "gap", truth - bound, q(1, 162));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut violations = 0;
    for _ in 0..50 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let poly = random_poly(&mut rng, p, 12, -3, 3, 0.4);
        let m = 4 * poly.degree() * p as usize;
        let b = empirical_radius_bound(&poly, m).map_err(|e| e.to_string())?;
        let r = -log_radius(&poly)?;
        if b > r {
            violations += 1;
            fails.push(format!("p={p} P={:?}: bound {b} > {r}", poly.rational_coeffs().unwrap()));
        }
    }
    verdict(fails, format!("40/81 exact, gap 1/162, 50 random P with {violations} violations"))
}

/// Integrality criteria agree.
fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut integral_count = 0;
    for _ in 0..30 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let base = random_poly(&mut rng, p, 8, -2, 2, 0.5);
        // Rescale so that the radius lands just above or just below 1.
        let r = log_radius(&base)?;
        let s = ceil(-r) - rng.gen_range(0..=1);
        let poly = base.scaled(&p_power(p, s));
        let d = poly.degree();
        let scan = integrality_scan(&poly, 4 * d).map_err(|e| e.to_string())?;
        let check = integrality_check(&poly, IntegralityMode::Full).map_err(|e| e.to_string())?;
        if scan.integral != check.integral {
            fails.push(format!(
                "p={p} P={:?}: scan {} (first violation {:?}) vs check {} (witness {:?})",
                poly.rational_coeffs().unwrap(),
                scan.integral,
                scan.first_violation,
                check.integral,
                check.witness
            ));
        }
        integral_count += check.integral as usize;
    }

    let mut mode_cases = 0;
    for _ in 0..30 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let depth = rng.gen_range(1..=if p == 2 { 3 } else { 2 });
        let base = random_p_typical(&mut rng, p, depth, -2, 2);
        let r = log_radius(&base)?;
        let poly = base.scaled(&p_power(p, ceil(-r) - rng.gen_range(0..=1)));
        let full = integrality_check(&poly, IntegralityMode::Full).map_err(|e| e.to_string())?;
        let pp = integrality_check(&poly, IntegralityMode::PPowers).map_err(|e| e.to_string())?;
        if full.integral != pp.integral {
            fails.push(format!("p-typical p={p} P={:?}: full {} vs p_powers {}", poly.rational_coeffs().unwrap(), full.integral, pp.integral));
        }
        mode_cases += 1;
    }
    for _ in 0..30 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let base = random_lacunary(&mut rng, p, 12, -2, 2);
        let r = log_radius(&base)?;
        let poly = base.scaled(&p_power(p, ceil(-r) - rng.gen_range(0..=1)));
        let full = integrality_check(&poly, IntegralityMode::Full).map_err(|e| e.to_string())?;
        let mono = integrality_check(&poly, IntegralityMode::Monoid).map_err(|e| e.to_string())?;
        if full.integral != mono.integral {
            fails.push(format!("lacunary p={p} P={:?}: full {} vs monoid {}", poly.rational_coeffs().unwrap(), full.integral, mono.integral));
        }
        mode_cases += 1;
    }
    verdict(
        fails,
        format!("30 scan/check pairs ({integral_count} integral), {mode_cases} mode comparisons"),
    )
}

/// `ρ(a)` for `P = T^2` at `p = 2`.
fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let poly = rational_poly(2, &[br(0, 1), br(0, 1), br(1, 1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut n = 0;
    for v in [0i32, 1, 2, -1, -2] {
        for _ in 0..4 {
            let a = with_valuation(&mut rng, 2, v);
            let want = if v >= 0 { q(-1, 2) } else { q(v as i64, 1) };
            let got = roc_at_point(&poly, &CoeffExpr::rational(a.clone()))
                .map_err(|e| e.to_string())?
                .log_radius;
            check_eq(&mut fails, &format!("a = {a}"), got, want);
            n += 1;
        }
    }
    verdict(fails, format!("{n} sample points"))
}

fn component_poly(poly: &InputPolynomial, n: usize) -> Option<InputPolynomial> {
    let d = poly.degree();
    let p = poly.prime() as usize;
    let mut c = vec![CoeffExpr::zero(); d + 1];
    let mut k = n;
    let mut any = false;
    while k <= d {
        if !poly.coeff(k).is_zero() {
            c[k] = poly.coeff(k).clone();
            any = true;
        }
        k *= p;
    }
    any.then(|| InputPolynomial::new(poly.prime(), c).unwrap())
}

/// Property suites, 100 seeded instances each.
fn criterion_7() -> Outcome {
    let n = 100;
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);

    // Homogeneity: ρ(P(p^s T)) = ρ(P) · p^s in log scale.
    for _ in 0..n {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let poly = random_poly(&mut rng, p, 6, -2, 2, 0.5);
        let s = rng.gen_range(-2i64..=2);
        let lhs = log_radius(&poly.scaled(&p_power(p, s)))?;
        let rhs = log_radius(&poly)? + Rational64::from_integer(s);
        if lhs != rhs {
            fails.push(format!("homogeneity p={p} s={s}: {lhs} vs {rhs}"));
        }
    }

    // p-typical splitting.
    for _ in 0..n {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let poly = random_poly(&mut rng, p, 9, -2, 2, 0.5);
        let whole = log_radius(&poly)?;
        let mut parts = Vec::new();
        for n in (1..=poly.degree()).filter(|n| n % p as usize != 0) {
            if let Some(c) = component_poly(&poly, n) {
                parts.push(log_radius(&c)?);
            }
        }
        let min = parts.into_iter().min().unwrap();
        if whole != min {
            fails.push(format!("splitting p={p} P={:?}: {whole} vs min {min}", poly.rational_coeffs().unwrap()));
        }
    }

    // Witt: F(V(x)) = p x, and AH is a homomorphism.
    for _ in 0..n {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let ring = QpRing::new(p, 40).unwrap();
        let len = rng.gen_range(1..=5);
        let rand_ghost = |rng: &mut ChaCha8Rng| {
            let g: Vec<_> = (0..len).map(|_| ring.from_rational(&with_valuation_in(rng, p, 0, 3))).collect();
            GhostWitt::new(ring.clone(), g)
        };
        let x = rand_ghost(&mut rng);
        let y = rand_ghost(&mut rng);
        let fv = x.verschiebung().frobenius();
        let px = x.map(|c| ring.mul(c, &ring.from_int(p as i64)));
        if !fv.agrees_to(&px, 30) {
            fails.push(format!("F∘V != p at p={p}"));
        }
        let cap = 3 * p as usize;
        let lhs = ah_to_series(&x.add(&y).unwrap(), cap).unwrap();
        let rhs = ah_to_series(&x, cap).unwrap().mul(&ah_to_series(&y, cap).unwrap()).unwrap();
        if !lhs.agrees_to(&rhs, 20) {
            fails.push(format!("AH(x+y) != AH(x)AH(y) at p={p}"));
        }
    }

    // Imbrication: w_(d-1) = w_d · H(w_d).
    for _ in 0..n {
        let (p, d) = [(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)][rng.gen_range(0..6)];
        let prec = rng.gen_range(20..=60);
        let tower = CycloTower::new(p, d, prec).unwrap();
        let h = lubin_tate_cofactor(p);
        let eval_h = |x: &pirad_core::CycloElement| {
            let mut acc = tower.zero();
            for c in h.iter().rev() {
                acc = &(&acc * x) + &tower.from_rational(&BigRational::from_integer(c.clone()));
            }
            acc
        };
        let wd = w_d_ghost(&tower, d).unwrap();
        let hw = wd.map(|c| eval_h(c));
        let prod = wd.mul(&hw).unwrap();
        if !prod.agrees_to(&w_d_ghost(&tower, d - 1).unwrap(), prec as i64 / 2) {
            fails.push(format!("imbrication p={p} d={d} N={prec}"));
        }
        if !wd.frobenius().agrees_to(&w_d_ghost(&tower, d - 1).unwrap(), prec as i64 / 2) {
            fails.push(format!("F(w_d) != w_(d-1) p={p} d={d}"));
        }
    }

    // Universal coordinates round trip.
    for _ in 0..n {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let ring = QpRing::new(p, 40).unwrap();
        let d = rng.gen_range(1..=15);
        let mut c = vec![ring.one()];
        for _ in 0..d {
            c.push(if rng.gen_bool(0.3) {
                ring.zero()
            } else {
                ring.from_rational(&with_valuation_in(&mut rng, p, -1, 2))
            });
        }
        let f = TruncSeries::new(ring.clone(), d, c);
        let u = UniversalCoords::from_series(&f, d).unwrap();
        if !u.to_series().agrees_to(&f, 20) {
            fails.push(format!("universal coords round trip p={p} D={d}"));
        }
    }

    // Dual Newton polygon: first slope = log_p ρ.
    for _ in 0..n {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let poly = random_poly(&mut rng, p, 7, -2, 2, 0.5);
        let r = radius_log(&poly).map_err(|e| e.to_string())?;
        if first_slope(&r.hull) != Some(r.log_radius) {
            fails.push(format!("newton p={p}: slope {:?} vs {}", first_slope(&r.hull), r.log_radius));
        }
    }

    // Sanity of the decomposition used above.
    let ring = QpRing::new(2, 20).unwrap();
    let parts = p_typical_decompose(&ring, &vec![ring.one(); 1].into_iter().chain(vec![ring.one(); 17]).collect::<Vec<_>>());
    if parts.is_ok() {
        fails.push("decomposition accepted a non-zero constant term".into());
    }

    verdict(fails, format!("7 suites x {n} instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("golden radii", criterion_1),
        ("pi-exponential coefficient law", criterion_2),
        ("Matsuda identity to degree 200", criterion_3),
        ("oracle bracketing", criterion_4),
        ("integrality criteria equivalences", criterion_5),
        ("rho(a) piecewise law for T^2 at p=2", criterion_6),
        ("property suites", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
