use std::path::PathBuf;
use std::process::ExitCode;

use catseries::config::{MRange, SuiteConfig};
use catseries::report::{decimal, decimal_mag};
use catseries::suite::{recognize_member, run_suite, sum_options};
use catseries_core::constants::{constant, gamma_quarter_agm, pi_agm, pi_machin, Constant};
use catseries_core::dougall::{dougall_lhs, dougall_rhs, DougallVariant};
use catseries_core::family::{FamilyDescriptor, FamilyId};
use catseries_core::gamma::log_gamma_rational;
use catseries_core::series::{alternating_partial, partial_sum_real, sum_series_with, tail_bound, Strategy};
use catseries_core::Error;
use clap::{Parser, Subcommand};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "catseries", version, about = "Verify cubed-Catalan and central-binomial series identities")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum each (family, m) pair and compare with its closed form
    Verify {
        #[arg(long)]
        family: Option<FamilyId>,
        /// A..B (inclusive) or M; needs --family
        #[arg(long)]
        m: Option<MRange>,
        #[arg(long)]
        prec: Option<u32>,
        /// One tolerance for every convergence class
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the table
        #[arg(long)]
        json: bool,
        /// Worker threads
        #[arg(long)]
        jobs: Option<usize>,
        /// Skip the exact check suites
        #[arg(long)]
        no_checks: bool,
    },
    /// Sum one member of a family
    Sum {
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        m: i64,
        /// Plain partial sum through this index, with a remainder estimate
        #[arg(long)]
        terms: Option<i64>,
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long, default_value_t = 1e-25)]
        eps: f64,
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Print the constants and their independent cross-checks
    Constants {
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Find a member's value as a rational combination of basis monomials
    Recognize {
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        m: i64,
        /// Comma-separated monomials, e.g. "1, pi^-2, ln2*pi^-2"
        #[arg(long)]
        basis: String,
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, default_value_t = 1000)]
        coeff_bound: u64,
        #[arg(long, default_value_t = 10_000)]
        denom_bound: u64,
    },
    /// Evaluate both sides of a Dougall-type sum at rational x
    Dougall {
        #[arg(long)]
        variant: DougallVariant,
        #[arg(long)]
        x: BigRational,
        #[arg(long, default_value_t = 1e-30)]
        eps: f64,
        #[arg(long)]
        prec: Option<u32>,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<SuiteConfig, Failure> {
    let mut c = SuiteConfig::from_env()?;
    if let Some(p) = path {
        let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        c.apply_text(&text)?;
    }
    Ok(c)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut config = load_config(cli.config.as_ref())?;
    match cli.command {
        Command::Verify { family, m, prec, tol, out, json, jobs, no_checks } => {
            if let Some(p) = prec {
                config.precision_bits = p;
            }
            if let Some(t) = tol {
                config.set_tolerance(t);
            }
            if let Some(j) = jobs {
                config.parallelism = j;
            }
            if let Some(o) = out {
                config.output = Some(o);
            }
            if let Some(r) = m {
                let f = family.ok_or_else(|| Error::Usage("--m needs --family".into()))?;
                config.ranges.insert(f.name().to_string(), r);
            }
            let report = run_suite(&config, family, !no_checks)?;
            if json {
                println!("{}", report.to_json());
            } else {
                for r in &report.reports {
                    println!("{}", r.line());
                }
                for c in &report.checks {
                    let status = if c.pass { "PASS" } else { "FAIL" };
                    println!("check {:<32} {status} ({} cases)", c.name, c.checked);
                    for f in c.failures.iter().take(5) {
                        println!("    {f}");
                    }
                }
                let s = &report.summary;
                println!("reports: {} pass, {} fail; checks: {} pass, {} fail", s.pass, s.fail, s.checks_pass, s.checks_fail);
            }
            if let Some(path) = &config.output {
                std::fs::write(path, report.to_json()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            if !report.summary.all_passed() {
                return Err(Failure::Failed);
            }
        }
        Command::Sum { family, m, terms, strategy, eps, prec } => {
            let prec = prec.unwrap_or(config.precision_bits);
            let d = FamilyDescriptor::new(family, m)?;
            if let Some(n) = terms {
                if d.alternating {
                    let (s, next) = alternating_partial(family, m, n, prec)?;
                    println!("partial sum through k={n}: {}", decimal(&s));
                    println!("alternating remainder bound: {}", decimal(&next));
                } else {
                    let s = partial_sum_real(family, m, n, prec)?;
                    println!("partial sum through k={n}: {}", decimal(&s));
                    match tail_bound(family, m, n) {
                        Ok(b) => println!("tail bound: {}", decimal(&b)),
                        Err(e) => println!("tail bound unavailable: {e}"),
                    }
                }
            } else {
                let opts = catseries_core::series::SumOptions { prec, strategy, ..sum_options(&config) };
                let r = sum_series_with(family, m, eps, &opts)?;
                println!("value: {}", decimal(&r.value));
                println!("radius: {}", decimal_mag(&r.value.radius()));
                println!("terms: {}", r.terms_used);
                println!("strategy: {}", r.strategy);
            }
        }
        Command::Constants { prec } => {
            let prec = prec.unwrap_or(config.precision_bits);
            for c in Constant::ALL {
                println!("{:<14} {}", c.name(), decimal(&constant(c, prec)?));
            }
            let pi_gap = pi_agm(prec).sub(&pi_machin(prec)).abs_upper();
            let g = gamma_quarter_agm(prec)?;
            let g_lg = log_gamma_rational(&BigRational::new(1.into(), 4.into()), prec + 16)?.exp()?;
            let g_gap = g.sub(&g_lg).abs_upper();
            println!("pi: AGM vs Machin differ by at most 2^{:.1}", pi_gap.log2());
            println!("Gamma(1/4): AGM vs log-Gamma differ by at most 2^{:.1}", g_gap.log2());
        }
        Command::Recognize { family, m, basis, prec, coeff_bound, denom_bound } => {
            let prec = prec.unwrap_or(config.precision_bits);
            let (v, found) = recognize_member(family, m, &basis, prec, coeff_bound, denom_bound)?;
            println!("value: {}", decimal(&v));
            match found {
                Some(cf) => println!("found: {cf}"),
                None => {
                    println!("no relation over the basis");
                    return Err(Failure::Failed);
                }
            }
        }
        Command::Dougall { variant, x, eps, prec } => {
            let prec = prec.unwrap_or(config.precision_bits);
            let l = dougall_lhs(variant, &x, eps, prec)?;
            let r = dougall_rhs(variant, &x, prec)?;
            println!("lhs: {}", decimal(&l));
            println!("rhs: {}", decimal(&r));
            println!("difference: {}", decimal_mag(&l.sub(&r).abs_upper()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Lib(e @ (Error::Usage(_) | Error::Domain(_)))) => {
            eprintln!("catseries: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("catseries: {e}");
            ExitCode::from(4)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("catseries: {msg}");
            ExitCode::from(3)
        }
    }
}
