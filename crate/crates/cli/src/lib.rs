//! Command-line front end for `pirad-core`.

pub mod args;
pub mod parse;
pub mod report;
pub mod run;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::Parser;
use rayon::prelude::*;

use args::Cli;
use report::{BatchItem, BatchOut, ErrorOut, Outcome, Report};
use run::{exit, CliError, CliResult};

/// Serialize a report in the canonical JSON form.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn read_all(mut r: impl Read) -> CliResult<String> {
    let mut s = String::new();
    r.read_to_string(&mut s).map_err(|e| CliError::io(e.to_string()))?;
    Ok(s)
}

fn run_single(cli: &Cli, stdin: impl Read) -> CliResult<Report> {
    let cmd = cli.command.as_ref().expect("checked by caller");
    let text = match &cmd.poly_args().poly {
        Some(t) => t.clone(),
        None => read_all(stdin)?,
    };
    if text.trim().is_empty() {
        return Err(CliError::usage("no polynomial given"));
    }
    run::run(cmd, &text)
}

fn run_batch_line(line: &str) -> CliResult<Report> {
    let words = shlex::split(line).ok_or_else(|| CliError::usage("unbalanced quotes"))?;
    let cli = Cli::try_parse_from(std::iter::once("pirad".to_string()).chain(words))
        .map_err(|e| CliError::usage(e.to_string().trim_end().to_string()))?;
    if cli.batch.is_some() {
        return Err(CliError::usage("--batch cannot be nested"));
    }
    let Some(cmd) = &cli.command else {
        return Err(CliError::usage("missing subcommand"));
    };
    let Some(text) = &cmd.poly_args().poly else {
        return Err(CliError::usage("batch jobs must give the polynomial inline"));
    };
    run::run(cmd, text)
}

fn batch(cli: &Cli, stdin: impl Read, out: &mut impl Write) -> i32 {
    let path = cli.batch.as_ref().expect("checked by caller");
    let content = if path.as_os_str() == "-" {
        read_all(stdin)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
    };
    let content = match content {
        Ok(c) => c,
        Err(e) => return report_error(&e, cli.json, out),
    };
    let jobs: Vec<(usize, &str)> = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<BatchItem> = jobs
        .par_iter()
        .map(|&(line, input)| BatchItem {
            line,
            input: input.to_string(),
            outcome: match run_batch_line(input) {
                Ok(r) => Outcome::Ok(r),
                Err(e) => Outcome::Error(e.body()),
            },
        })
        .collect();
    let code = results
        .iter()
        .find_map(|r| match &r.outcome {
            Outcome::Error(e) => Some(e.exit),
            Outcome::Ok(_) => None,
        })
        .unwrap_or(exit::OK);
    if cli.json {
        let _ = writeln!(out, "{}", to_json(&BatchOut { results }));
    } else {
        for r in &results {
            let _ = writeln!(out, "[line {}] {}", r.line, r.input);
            match &r.outcome {
                Outcome::Ok(rep) => {
                    let _ = write!(out, "{}", rep.to_text());
                }
                Outcome::Error(e) => {
                    let _ = writeln!(out, "error ({}): {}", e.code, e.message);
                }
            }
            let _ = writeln!(out);
        }
    }
    code
}

fn report_error(e: &CliError, json: bool, out: &mut impl Write) -> i32 {
    if json {
        let _ = writeln!(out, "{}", to_json(&ErrorOut { error: e.body() }));
    } else {
        eprintln!("{e}");
    }
    e.exit
}

/// Parse `argv`, run, write the report to `out`; returns the exit status.
pub fn execute<I, T>(argv: I, stdin: impl Read, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match (&cli.batch, &cli.command) {
        (Some(_), Some(_)) => report_error(&CliError::usage("--batch cannot be combined with a subcommand"), cli.json, out),
        (Some(_), None) => batch(&cli, stdin, out),
        (None, Some(_)) => match run_single(&cli, stdin) {
            Ok(r) => {
                let _ = if cli.json {
                    writeln!(out, "{}", to_json(&r))
                } else {
                    write!(out, "{}", r.to_text())
                };
                exit::OK
            }
            Err(e) => report_error(&e, cli.json, out),
        },
        (None, None) => report_error(&CliError::usage("missing subcommand (try --help)"), cli.json, out),
    }
}
