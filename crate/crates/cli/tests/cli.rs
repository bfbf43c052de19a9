use std::io::Write;
use std::process::{Command, Output, Stdio};

use pirad_cli::report::{BatchOut, ErrorOut, Outcome, Report};
use pirad_cli::to_json;

fn pirad(args: &[&str]) -> Output {
    pirad_with_stdin(args, "")
}

fn pirad_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pirad"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn pirad");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> Report {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = pirad(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&report), text.trim_end(), "round trip for {args:?}");
    report
}

fn log_radius(r: &Report) -> (i64, i64) {
    match r {
        Report::Radius(r) => (r.log_radius.num, r.log_radius.den),
        Report::Roc(r) => (r.log_radius.num, r.log_radius.den),
        Report::Newton(r) => (r.log_radius.num, r.log_radius.den),
        Report::Witt(r) => (r.log_radius.num, r.log_radius.den),
        other => panic!("no radius in {other:?}"),
    }
}

#[test]
fn radius_of_exp_t() {
    let r = json_report(&["radius", "-p", "3", "T"]);
    assert_eq!(log_radius(&r), (-1, 2));
    let o = pirad(&["radius", "-p", "3", "T"]);
    assert!(stdout(&o).contains("log_p rho = -1/2"));
}

#[test]
fn radius_of_truncated_artin_hasse() {
    let r = json_report(&["radius", "-p", "2", "T + T^2/2"]);
    assert_eq!(log_radius(&r), (-3, 4));
}

#[test]
fn oracle_bound_for_exp_t() {
    match json_report(&["oracle", "-p", "3", "-M", "81", "T"]) {
        Report::Oracle(o) => {
            let b = o.empirical_bound.unwrap();
            assert_eq!((b.num, b.den), (40, 81));
            assert_eq!(o.first_non_integral, Some(3));
            assert_eq!(o.valuations.len(), 81);
            assert_eq!(o.precision, None);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn every_subcommand_round_trips() {
    let jobs: &[&[&str]] = &[
        &["tilde", "-p", "3", "T + T^3/3"],
        &["integrality", "-p", "2", "--mode", "monoid", "2*T + 2*T^3"],
        &["integrality", "-p", "2", "--mode", "ppowers", "2*T + T^2"],
        &["roc", "-p", "2", "--at", "1/2", "T^2"],
        &["roc", "-p", "2", "--generic-logr", "-1", "T^2"],
        &["newton", "-p", "2", "T + T^2/2"],
        &["witt", "-p", "3", "T + T^2 + T^3/3"],
        &["oracle", "-p", "2", "pi(0)*T"],
        &["radius", "-p", "3", "--degree", "3", "T"],
    ];
    for job in jobs {
        json_report(job);
    }
}

#[test]
fn padding_and_tower_inputs() {
    assert_eq!(log_radius(&json_report(&["radius", "-p", "3", "--degree", "3", "T"])), (-1, 2));
    assert_eq!(log_radius(&json_report(&["radius", "-p", "3", "dworkpi*(T - T^3)"])), (2, 9));
    assert_eq!(log_radius(&json_report(&["radius", "-p", "2", "pi(0)*T - pi(0)*T^2"])), (1, 4));
    assert_eq!(log_radius(&json_report(&["radius", "-p", "5", "\u{2212}T"])), (-1, 4));
}

#[test]
fn roc_piecewise_law() {
    assert_eq!(log_radius(&json_report(&["roc", "-p", "2", "--at", "4", "T^2"])), (-1, 2));
    assert_eq!(log_radius(&json_report(&["roc", "-p", "2", "--at", "1/4", "T^2"])), (-2, 1));
    assert_eq!(log_radius(&json_report(&["roc", "-p", "2", "--generic-logr", "1", "T^2"])), (-1, 1));
}

#[test]
fn witt_components() {
    match json_report(&["witt", "-p", "3", "T + T^2 + T^3/3"]) {
        Report::Witt(w) => {
            let ns: Vec<usize> = w.components.iter().map(|c| c.n).collect();
            assert_eq!(ns, vec![1, 2]);
            assert_eq!(w.components[0].degrees, vec![1, 3]);
            assert!(w.universal_integral);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn reads_polynomial_from_stdin() {
    let o = pirad_with_stdin(&["--json", "radius", "-p", "2"], "T + T^2/2\n");
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(log_radius(&r), (-3, 4));
}

#[test]
fn batch_runs_all_jobs_in_order() {
    let input = "radius -p 3 T\n# comment\n\noracle -p 3 -M 81 T\nradius -p 2 \"T + T^2/2\"\nradius -p 3 \"T +\"\n";
    let o = pirad_with_stdin(&["--json", "--batch", "-"], input);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    let b: BatchOut = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&b), text.trim_end());
    let lines: Vec<usize> = b.results.iter().map(|r| r.line).collect();
    assert_eq!(lines, vec![1, 4, 5, 6]);
    match &b.results[2].outcome {
        Outcome::Ok(r) => assert_eq!(log_radius(r), (-3, 4)),
        other => panic!("{other:?}"),
    }
    match &b.results[3].outcome {
        Outcome::Error(e) => assert_eq!((e.code.as_str(), e.exit, e.position), ("syntax", 3, Some(4))),
        other => panic!("{other:?}"),
    }
}

fn exit_code(args: &[&str]) -> i32 {
    pirad(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["radius", "-p", "3", "T"]), 0);
    // usage
    assert_eq!(exit_code(&[]), 2);
    assert_eq!(exit_code(&["radius", "T"]), 2);
    assert_eq!(exit_code(&["radius", "-p", "4", "T"]), 2);
    assert_eq!(exit_code(&["frobnicate", "-p", "3", "T"]), 2);
    assert_eq!(exit_code(&["roc", "-p", "2", "T^2"]), 2);
    assert_eq!(exit_code(&["integrality", "-p", "2", "--mode", "ppowers", "T^3"]), 2);
    assert_eq!(exit_code(&["radius", "-p", "3", "--degree", "1", "T^2"]), 2);
    assert_eq!(exit_code(&["oracle", "-p", "3", "-M", "2", "T^3"]), 2);
    // parse
    assert_eq!(exit_code(&["radius", "-p", "3", "1"]), 3);
    assert_eq!(exit_code(&["radius", "-p", "3", "T - T"]), 3);
    assert_eq!(exit_code(&["radius", "-p", "3", "T + *"]), 3);
    assert_eq!(exit_code(&["roc", "-p", "2", "--at", "T", "T^2"]), 3);
    // a coefficient that vanishes but not symbolically: never certified
    assert_eq!(exit_code(&["radius", "-p", "3", "--prec", "4", "(dworkpi^2 + 3)*T"]), 4);
    assert_eq!(exit_code(&["--help"]), 0);
}

#[test]
fn json_errors_are_structured() {
    let o = pirad(&["--json", "radius", "-p", "3", "T + (T"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    let e: ErrorOut = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&e), text.trim_end());
    assert_eq!(e.error.code, "syntax");
    assert_eq!(e.error.position, Some(7));

    let o = pirad(&["--json", "radius", "-p", "3", "1 + T"]);
    let e: ErrorOut = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(e.error.code, "nonzero_constant_term");
}
