use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand};
use critline::campaign::{self, default_workers, summarize, Campaign, Summary};
use critline::{selftest, Journal};
use critline_core::consequences::{consequence_report_with, parse_dbn_table, DBN_TABLE};
use critline_core::orchestra::RunConfig;
use critline_core::rigor::Context;
use critline_core::zcount::{default_step, scan_lattice, EvalPolicy, Evaluator, Lattice};
use critline_core::Dyadic;

#[derive(Parser)]
#[command(name = "critline", version, about = "Certified counting of zeta zeros on the critical line")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count sign changes of Z on a lattice in [from, to).
    Scan {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Lattice step; defaults to a fraction of the mean gap.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 64)]
        prec: u32,
        /// Print every bracketing interval.
        #[arg(long)]
        verbose: bool,
    },
    /// Start a campaign certifying N(t) on (0, height].
    Run {
        #[arg(long)]
        height: f64,
        #[arg(long, default_value_t = 500.0)]
        unit_length: f64,
        /// `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        journal: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Continue an interrupted campaign.
    Resume {
        #[arg(long)]
        journal: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Stitch a journal and report the verified height.
    Certify {
        #[arg(long)]
        journal: PathBuf,
    },
    /// Explicit prime-counting ranges implied by a verified height.
    Consequences {
        #[arg(long)]
        height: f64,
        /// Extra de Bruijn–Newman rows, `threshold bound` per line.
        #[arg(long)]
        dbn_table: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Quick checks against the reference zero table.
    Selftest,
}

fn dyadic(x: f64, what: &str) -> Result<Dyadic> {
    Dyadic::from_f64(x).filter(|d| d.is_positive()).ok_or_else(|| anyhow!("{what} must be a positive finite number"))
}

fn report(s: &Summary, height: Dyadic) -> bool {
    println!("units: {} planned, {} recorded, {} failed", s.units, s.recorded, s.failed.len());
    if !s.failed.is_empty() {
        println!("failed units: {:?}", s.failed);
    }
    match (&s.global, &s.stitch_error) {
        (Some(g), _) => println!("verified height: {}\nzeros: {}", g.height, g.zeros),
        (None, Some(e)) => println!("not stitched: {e}"),
        (None, None) => println!("not stitched"),
    }
    s.is_complete(height)
}

fn scan(from: f64, to: f64, step: Option<f64>, prec: u32, verbose: bool) -> Result<bool> {
    let lo = Dyadic::floor_f64(from, -20);
    let hi = Dyadic::ceil_f64(to, -20);
    let step = match step {
        Some(s) => dyadic(s, "step")?,
        None => default_step(lo, hi, &Context::new(prec))?,
    };
    let policy = EvalPolicy { ladder: vec![prec, 2 * prec, 4 * prec], ..EvalPolicy::default() };
    let mut ev = Evaluator::new(policy);
    let seq = scan_lattice(&Lattice::new(lo, hi, step, Dyadic::ZERO)?, &mut ev)?;
    if verbose {
        for (a, b) in seq.transitions() {
            println!("{a}\t{b}");
        }
    }
    println!(
        "[{lo}, {hi}) step {step}: {} points, {} sign changes, {} indeterminate, {} evaluations",
        seq.len(),
        seq.changes(),
        seq.indeterminates(),
        ev.evaluations()
    );
    Ok(seq.indeterminates() == 0)
}

fn consequences(height: f64, dbn_table: Option<PathBuf>, json: bool) -> Result<bool> {
    let mut rows = DBN_TABLE.to_vec();
    if let Some(p) = dbn_table {
        let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        rows.extend(parse_dbn_table(&text)?);
    }
    let r = consequence_report_with(height, &rows)?;
    if json {
        let v = serde_json::json!({
            "height": r.h,
            "x_max": r.x_max,
            "psi": [r.psi_range.0, r.psi_range.1],
            "chebyshev_theta": [r.cheb_theta_range.0, r.cheb_theta_range.1],
            "pi": [r.pi_range.0, r.pi_range.1],
            "dbn_bound": r.dbn_bound,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("H = {:e}", r.h);
        let bound = "sqrt(x) log^2(x) / (8 pi)";
        println!("|psi(x) - x|   <= {bound}  for {} < x <= {:.4e}", r.psi_range.0, r.psi_range.1);
        println!("|theta(x) - x| <= {bound}  for {} < x <= {:.4e}", r.cheb_theta_range.0, r.cheb_theta_range.1);
        println!("|pi(x) - li(x)| <= {bound}  for {} < x <= {:.4e}", r.pi_range.0, r.pi_range.1);
        match r.dbn_bound {
            Some(b) => println!("de Bruijn-Newman constant <= {b}"),
            None => println!("de Bruijn-Newman: no table row applies"),
        }
    }
    Ok(true)
}

fn main_inner(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Scan { from, to, step, prec, verbose } => {
            if !(from < to) {
                bail!("need from < to");
            }
            scan(from, to, step, prec, verbose)
        }
        Cmd::Run { height, unit_length, config, journal, workers } => {
            let config = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    RunConfig::parse(&text)?
                }
                None => RunConfig::default(),
            };
            let c = Campaign { height: dyadic(height, "height")?, unit_length: dyadic(unit_length, "unit length")?, config };
            let s = campaign::run(&journal, &c, workers.unwrap_or_else(default_workers))?;
            Ok(report(&s, c.height))
        }
        Cmd::Resume { journal, workers } => {
            let s = campaign::resume(&journal, workers.unwrap_or_else(default_workers))?;
            let h = Journal::read(&journal)?.header.height;
            Ok(report(&s, h))
        }
        Cmd::Certify { journal } => {
            let r = Journal::read(&journal)?;
            let c = Campaign { height: r.header.height, unit_length: r.header.unit_length, config: r.header.config };
            let s = summarize(&c, &r.certificates)?;
            Ok(report(&s, c.height))
        }
        Cmd::Consequences { height, dbn_table, json } => consequences(height, dbn_table, json),
        Cmd::Selftest => {
            let checks = selftest::run_all();
            for c in &checks {
                println!("{c}");
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
