//! Command-line front end: class-number audits, family sweeps, certificate
//! generation and re-verification.
//!
//! Exit codes: 0 success, 1 usage/input or parse error, 2 budget exceeded,
//! 3 property violation found.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use trifields::cubicfields::DepressedCubic;
use trifields::families::{self, TripleCertificate};
use trifields::quadforms::{self, GroupKind};
use trifields::sweeps;
use trifields::{Budget, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "trifields", version, about = "Class-group oracle and 3-divisibility certificates for quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Decimal-digit bound for integer factorization.
    #[arg(long, global = true, default_value_t = 20)]
    budget_digits: usize,

    /// Bound on |discriminant| for class-group enumeration.
    #[arg(long, global = true, default_value_t = 400_000_000)]
    budget_enum: i64,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Run seed, recorded for reproducibility. All randomized internals
    /// derive their state from their inputs, so this never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Class number and 3-rank of Q(√radicand) (h for imaginary, h+ for real).
    Classnum {
        radicand: String,
    },
    /// Reduced forms (imaginary) or reduction cycles (real) plus the summary.
    Classgroup {
        radicand: String,
    },
    /// Ramification report for the cubic X³ − aX − b.
    CubicCheck {
        a: String,
        b: String,
        /// Also check every prime dividing D(f), not just 3 and gcd(a, b).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Sweep the 3t(3888t² + 108t + 1) family over an inclusive range "lo..hi".
    Prop24 {
        range: String,
    },
    /// Sweep the 1 − 2916t³ family over an inclusive range "lo..hi".
    Prop25 {
        range: String,
    },
    /// Emit triple certificates for a valid k.
    Triples {
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long, default_value = "1")]
        from: String,
    },
    /// Re-verify a certificate JSON file from scratch.
    Verify {
        path: PathBuf,
    },
    /// Check r ≤ s ≤ r+1 and divisibility transfer for squarefree d ≤ d_max.
    ScholzScan {
        d_max: i64,
    },
    /// Cross-check unramified cubics against the class-group oracle on the
    /// grid |a|, |b| ≤ bound; samples = 0 verifies every qualifying cubic.
    LemmaFuzz {
        bound: i64,
        samples: u64,
    },
}

fn parse_bigint(s: &str) -> Result<BigInt, Error> {
    BigInt::from_str(s).map_err(|_| Error::MalformedCertificate(format!("not an integer: {s}")))
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let parts: Vec<&str> = s.split("..").collect();
    let bad = || Error::MalformedCertificate(format!("range must look like 1..25, got {s}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo = parts[0].parse().map_err(|_| bad())?;
    let hi = parts[1].parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::FactorBudget { .. } | Error::EnumBudget(_, _) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 1 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let budget = Budget {
        factor_digits: cli.budget_digits,
        enum_bound: cli.budget_enum,
    };
    match run(&cli, &budget) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: &Cli, budget: &Budget) -> Result<ExitCode, Error> {
    match &cli.command {
        Cmd::Classnum { radicand } => {
            let r = parse_bigint(radicand)?;
            let s = quadforms::class_group_summary(&r, budget)?;
            match cli.format {
                Format::Json | Format::Csv => println!("{}", serde_json::to_string(&s).unwrap()),
                Format::Table => {
                    let label = match s.kind {
                        GroupKind::ImaginaryOrdinary => "h",
                        GroupKind::RealNarrow => "h+",
                    };
                    let flag = if s.class_number % 3 == 0 { "  [3 | h]" } else { "" };
                    println!(
                        "Q(√{r}): Δ = {}  {label} = {}  rk3 = {}{flag}",
                        s.discriminant, s.class_number, s.three_rank
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classgroup { radicand } => {
            let r = parse_bigint(radicand)?;
            let summary = quadforms::class_group_summary(&r, budget)?;
            let dv: i128 = summary.discriminant.to_string().parse().unwrap();
            match cli.format {
                Format::Json | Format::Csv => {
                    let forms: Vec<Vec<(i128, i128, i128)>> = if dv < 0 {
                        vec![quadforms::reduced_forms_imaginary(dv)
                            .iter()
                            .map(|f| (f.a, f.b, f.c))
                            .collect()]
                    } else {
                        quadforms::reduction_cycles(dv)
                            .iter()
                            .map(|cy| cy.iter().map(|f| (f.a, f.b, f.c)).collect())
                            .collect()
                    };
                    let out = serde_json::json!({
                        "summary": summary,
                        "classes": forms,
                    });
                    println!("{}", serde_json::to_string(&out).unwrap());
                }
                Format::Table => {
                    println!(
                        "Δ = {}  class number = {}  rk3 = {}",
                        summary.discriminant, summary.class_number, summary.three_rank
                    );
                    if dv < 0 {
                        for f in quadforms::reduced_forms_imaginary(dv) {
                            println!("  ({}, {}, {})", f.a, f.b, f.c);
                        }
                    } else {
                        for (i, cy) in quadforms::reduction_cycles(dv).iter().enumerate() {
                            let head = cy[0];
                            println!(
                                "  cycle {i}: length {} starting ({}, {}, {})",
                                cy.len(),
                                head.a,
                                head.b,
                                head.c
                            );
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CubicCheck { a, b, exhaustive } => {
            let f = DepressedCubic::new(parse_bigint(a)?, parse_bigint(b)?);
            let report = if *exhaustive {
                f.splitting_field_unramified_exhaustive(budget)?
            } else {
                f.splitting_field_unramified(budget)?
            };
            match cli.format {
                Format::Json | Format::Csv => {
                    println!("{}", serde_json::to_string(&report).unwrap())
                }
                Format::Table => {
                    println!(
                        "X³ − {}X − {}: D = {}, unramified = {}",
                        f.a, f.b, report.disc, report.unramified
                    );
                    for c in &report.checked_primes {
                        println!(
                            "  p = {}: totally ramified = {} ({:?})",
                            c.p, c.totally_ramified, c.condition
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Prop24 { range } => {
            let (lo, hi) = parse_range(range)?;
            let rows = sweeps::prop24_sweep(lo, hi, budget)?;
            print_family_rows(&rows, cli.format);
            sweep_exit(rows.iter().all(|r| r.divisible_by_3))
        }
        Cmd::Prop25 { range } => {
            let (lo, hi) = parse_range(range)?;
            let rows = sweeps::prop25_sweep(lo, hi, budget)?;
            print_family_rows(&rows, cli.format);
            sweep_exit(rows.iter().all(|r| r.divisible_by_3))
        }
        Cmd::Triples { k, count, from } => {
            let k = parse_bigint(k)?;
            let mut from = parse_bigint(from)?;
            for _ in 0..*count {
                let n = families::next_n(&k, &from, budget)?;
                let cert = families::make_triple(&k, &n, budget)?;
                match cli.format {
                    Format::Json | Format::Csv => {
                        println!("{}", serde_json::to_string(&cert).unwrap())
                    }
                    Format::Table => println!(
                        "k = {}  n = {}  t_n = {}  d = {}  all_checks = {}",
                        cert.k, cert.n, cert.t_n, cert.d, cert.all_checks
                    ),
                }
                from = n + 1;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::MalformedCertificate(format!("{}: {e}", path.display())))?;
            let mut all = true;
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let cert: TripleCertificate = serde_json::from_str(line).map_err(|e| {
                    Error::MalformedCertificate(format!("line {}: {e}", lineno + 1))
                })?;
                let audit = families::verify_certificate(&cert, budget);
                match cli.format {
                    Format::Json | Format::Csv => {
                        println!("{}", serde_json::to_string(&audit).unwrap())
                    }
                    Format::Table => {
                        println!("certificate (k = {}, n = {}):", cert.k, cert.n);
                        for item in &audit.items {
                            println!(
                                "  [{}] {}: {}",
                                if item.pass { "pass" } else { "FAIL" },
                                item.name,
                                item.detail
                            );
                        }
                    }
                }
                all &= audit.all_pass;
            }
            sweep_exit(all)
        }
        Cmd::ScholzScan { d_max } => {
            let rows = sweeps::scholz_scan(*d_max, budget)?;
            let violations: Vec<_> = rows.iter().filter(|r| !r.ok()).collect();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({
                        "scanned": rows.len(),
                        "violations": violations,
                    }))
                    .unwrap()
                ),
                Format::Csv => {
                    println!("d,r,s,h_plus,h_minus,ok");
                    for r in &rows {
                        println!("{},{},{},{},{},{}", r.d, r.r, r.s, r.h_plus, r.h_minus, r.ok());
                    }
                }
                Format::Table => {
                    println!("scanned {} squarefree d, {} violations", rows.len(), violations.len());
                    for v in &violations {
                        println!("  VIOLATION d = {}: r = {}, s = {}", v.d, v.r, v.s);
                    }
                }
            }
            sweep_exit(violations.is_empty())
        }
        Cmd::LemmaFuzz { bound, samples } => {
            let rep = sweeps::lemma_fuzz(*bound, *samples, budget)?;
            match cli.format {
                Format::Json | Format::Csv => println!("{}", serde_json::to_string(&rep).unwrap()),
                Format::Table => {
                    println!(
                        "qualifying = {}, verified = {}, skipped (budget) = {}, violations = {}",
                        rep.qualifying,
                        rep.verified,
                        rep.skipped_over_budget,
                        rep.violations.len()
                    );
                    for v in &rep.violations {
                        println!(
                            "  VIOLATION a = {}, b = {}: Δ = {}, h = {}",
                            v.a, v.b, v.field_disc, v.class_number
                        );
                    }
                }
            }
            sweep_exit(rep.violations.is_empty())
        }
    }
}

fn print_family_rows(rows: &[sweeps::FamilyRow], format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(rows).unwrap()),
        Format::Csv => {
            println!("t,radicand,discriminant,class_number,divisible_by_3");
            for r in rows {
                println!(
                    "{},{},{},{},{}",
                    r.t, r.radicand, r.discriminant, r.class_number, r.divisible_by_3
                );
            }
        }
        Format::Table => {
            let pass = rows.iter().filter(|r| r.divisible_by_3).count();
            for r in rows {
                println!(
                    "t = {:>3}  Δ = {:>12}  h = {:>6}  3|h: {}",
                    r.t, r.discriminant, r.class_number, r.divisible_by_3
                );
            }
            println!("{pass}/{} divisible by 3", rows.len());
        }
    }
}

fn sweep_exit(ok: bool) -> Result<ExitCode, Error> {
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
}
