//! `detrr` — run the determinant-identity checks from the command line.
//!
//! Every verification subcommand prints one block per check with both sides
//! of the identity rendered canonically, and exits 0 only when every check
//! behaved as expected (negative controls are expected to fail). Usage and
//! validation problems exit 2; a genuinely failed identity exits 1.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use detrr_core::frobcurve::{frobenius_pushforward, ProjLineBundle};
use detrr_core::primes::is_prime;
use detrr_core::sweep::{run_sweep, SweepConfig};
use detrr_core::verify::{
    arr_report, coeff_table, cube_identity_report, verify_deligne, verify_main_degree,
    verify_main_grading, verify_mumford, verify_remark_lambda, CoeffTable,
    VerificationReport,
};

const EXIT_FAILED_IDENTITY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "detrr",
    version,
    about = "Exact checks of determinant-of-cohomology identities in characteristic p"
)]
struct Cli {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exponent table of the p^4 identity for one prime.
    Coeffs {
        #[arg(long)]
        p: u64,
    },
    /// Check the p^4 identity at degree level.
    VerifyMain {
        #[arg(long)]
        p: u64,
        /// Substitute lam = ww/12 (Mumford's isomorphism).
        #[arg(long)]
        assume_mumford: bool,
    },
    /// Check the p^4 identity at grading level, symbolically in (d, g).
    VerifyGrading {
        #[arg(long)]
        p: u64,
    },
    /// Check Deligne's theorem forms; --p 2 adds the cross-check against
    /// the p = 2 main identity.
    VerifyDeligne {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        assume_mumford: bool,
    },
    /// Check Mumford's isomorphism D(n*w) = (6n^2-6n+1)*D(w).
    VerifyMumford {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long)]
        assume_mumford: bool,
    },
    /// Check the lambda-power family p^4*D(n*w) = sum c_a*D((np+a)*w).
    VerifyRemark {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        assume_mumford: bool,
    },
    /// Check Adams-Riemann-Roch for O(d) on the projective line over F_p.
    VerifyArr {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: i64,
    },
    /// Check the cube identity p^3 + (t-p)^3 = t*(p^2 + p(p-t) + (p-t)^2);
    /// symbolic by default, --p specializes the prime.
    VerifyCube {
        #[arg(long)]
        p: Option<u64>,
    },
    /// Print the splitting of the Frobenius pushforward of O(d).
    Frobenius {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: i64,
    },
    /// Run every check for all primes up to a bound.
    Sweep {
        #[arg(long, default_value_t = 13)]
        p_max: u64,
        #[arg(long)]
        assume_mumford: bool,
    },
}

#[derive(Serialize)]
struct ReportDocument {
    reports: Vec<VerificationReport>,
    passed: usize,
    failed: usize,
    unexpected: usize,
}

impl ReportDocument {
    fn new(reports: Vec<VerificationReport>) -> Self {
        let passed = reports.iter().filter(|r| r.passed()).count();
        let failed = reports.len() - passed;
        let unexpected = reports.iter().filter(|r| !r.as_expected()).count();
        ReportDocument {
            reports,
            passed,
            failed,
            unexpected,
        }
    }

    fn exit_code(&self) -> ExitCode {
        if self.unexpected == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_FAILED_IDENTITY)
        }
    }
}

#[derive(Serialize)]
struct FrobeniusDocument {
    p: u64,
    d: i64,
    summands: Vec<i64>,
    h0: i64,
    h1: i64,
    chi: i64,
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn require_prime(p: u64) -> Result<(), ExitCode> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(usage_error(&format!("{p} is not prime")))
    }
}

fn format_params(params: &BTreeMap<String, String>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_report_text(report: &VerificationReport) {
    let tag = match (report.passed(), report.as_expected()) {
        (true, _) => "PASS",
        (false, true) => "FAIL (expected)",
        (false, false) => "FAIL",
    };
    println!(
        "[{tag}] {}  {}  ({} ms)",
        report.identity,
        format_params(&report.params),
        report.elapsed.as_millis()
    );
    println!("    lhs = {}", report.lhs);
    println!("    rhs = {}", report.rhs);
    if !report.note.is_empty() {
        println!("    note: {}", report.note);
    }
}

fn write_out_file(path: &PathBuf, json: &str) -> Result<(), ExitCode> {
    std::fs::write(path, json).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn emit_reports(
    reports: Vec<VerificationReport>,
    format: Format,
    out: Option<&PathBuf>,
) -> ExitCode {
    let doc = ReportDocument::new(reports);
    let json = serde_json::to_string_pretty(&doc).expect("reports serialize");
    if let Some(path) = out {
        if let Err(code) = write_out_file(path, &json) {
            return code;
        }
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            for report in &doc.reports {
                print_report_text(report);
            }
            println!(
                "{} checks: {} pass, {} fail, {} unexpected",
                doc.reports.len(),
                doc.passed,
                doc.failed,
                doc.unexpected
            );
        }
    }
    doc.exit_code()
}

fn emit_coeffs(table: &CoeffTable, format: Format, out: Option<&PathBuf>) -> ExitCode {
    let json = serde_json::to_string_pretty(table).expect("table serializes");
    if let Some(path) = out {
        if let Err(code) = write_out_file(path, &json) {
            return code;
        }
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            println!("p = {}", table.p);
            println!("{:>4}  {:>10}", "a", "exponent");
            for &(a, c) in &table.entries {
                println!("{a:>4}  {c:>10}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn emit_frobenius(doc: &FrobeniusDocument, format: Format, out: Option<&PathBuf>) -> ExitCode {
    let json = serde_json::to_string_pretty(doc).expect("document serializes");
    if let Some(path) = out {
        if let Err(code) = write_out_file(path, &json) {
            return code;
        }
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            let twists = doc
                .summands
                .iter()
                .map(|e| format!("O({e})"))
                .collect::<Vec<_>>()
                .join(" + ");
            println!("F_*O({}) on the projective line over F_{}:", doc.d, doc.p);
            println!("    {twists}");
            println!(
                "    rank = {}, chi = {} (h0 = {}, h1 = {})",
                doc.summands.len(),
                doc.chi,
                doc.h0,
                doc.h1
            );
        }
    }
    ExitCode::SUCCESS
}

fn run(cli: Cli) -> ExitCode {
    let format = cli.format;
    let out = cli.out.as_ref();
    match cli.command {
        Command::Coeffs { p } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let table = coeff_table(p).expect("p validated prime");
            emit_coeffs(&table, format, out)
        }
        Command::VerifyMain { p, assume_mumford } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let report = verify_main_degree(p, assume_mumford).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::VerifyGrading { p } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let report = verify_main_grading(p).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::VerifyDeligne { p, assume_mumford } => {
            let p2_mode = match p {
                None => false,
                Some(2) => true,
                Some(other) => {
                    return usage_error(&format!(
                        "verify-deligne only takes --p 2 (the cross-check against the \
                         p = 2 identity), got {other}"
                    ));
                }
            };
            emit_reports(verify_deligne(p2_mode, assume_mumford), format, out)
        }
        Command::VerifyMumford {
            n,
            p,
            assume_mumford,
        } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let report = verify_mumford(n, p, assume_mumford).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::VerifyRemark {
            n,
            p,
            assume_mumford,
        } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let report =
                verify_remark_lambda(n, p, assume_mumford).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::VerifyArr { p, d } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let report = arr_report(p, d).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::VerifyCube { p } => {
            if let Some(p) = p {
                if let Err(code) = require_prime(p) {
                    return code;
                }
            }
            let report = cube_identity_report(p).expect("p validated prime");
            emit_reports(vec![report], format, out)
        }
        Command::Frobenius { p, d } => {
            if let Err(code) = require_prime(p) {
                return code;
            }
            let bundle = ProjLineBundle::new(p, d).expect("p validated prime");
            let decomposition = frobenius_pushforward(&bundle);
            let doc = FrobeniusDocument {
                p,
                d,
                summands: decomposition.summands().to_vec(),
                h0: bundle.h0(),
                h1: bundle.h1(),
                chi: bundle.chi(),
            };
            emit_frobenius(&doc, format, out)
        }
        Command::Sweep {
            p_max,
            assume_mumford,
        } => {
            if p_max < 2 {
                return usage_error("--p-max must be at least 2");
            }
            let outcome = run_sweep(&SweepConfig::with_p_max(p_max, assume_mumford));
            emit_reports(outcome.reports, format, out)
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
