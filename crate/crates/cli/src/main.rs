use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qzeta_cli::cases::{case_ids, Case, Check, Params};
use qzeta_cli::grid::{cross_product, parse_axis};
use qzeta_cli::literal::{parse_complex, parse_complex_list, parse_real_list};
use qzeta_cli::record::{write_records, Format};
use qzeta_cli::{exit_status, run_all};
use qzeta_core::{Complex64, TruncationPolicy};

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "qzeta", version, about = "Evaluate q-analogue multiple zeta functions and check identities between them")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output encoding
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write records here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized grids
    #[arg(long, default_value_t = 20_241_016, global = true)]
    seed: u64,
    /// Per-case pass tolerance, replacing the check's default
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Series stopping tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cap on outer series terms
    #[arg(long, global = true)]
    max_outer: Option<usize>,
    /// Consecutive small terms required before stopping
    #[arg(long, global = true)]
    stall_window: Option<usize>,
    /// Gauss-Legendre nodes per quadrature piece
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    /// Summand cap for interpolated sums
    #[arg(long, global = true)]
    n_max: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate zeta_q at an index
    Eval {
        /// Comma-separated complex literals, e.g. "1.5,2+0.5i"
        #[arg(long)]
        index: String,
        /// One or more q values, comma-separated
        #[arg(long)]
        q: String,
        /// Use the analytic continuation (depth 1 and 2)
        #[arg(long)]
        cont: bool,
    },
    /// Sum of zeta_q over admissible indices of weight k and depth r against zeta_q(k)
    SumFormula {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: String,
    },
    /// Interpolated depth-two sum against zeta_q(s)
    Theorem3 {
        #[arg(long)]
        s: String,
        #[arg(long)]
        q: String,
    },
    /// G^(0,b)(s) against zeta_q(s), or closed form against recursion with --prefix
    Theorem4 {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        s: String,
        #[arg(long)]
        q: String,
        /// Leading arguments s_1..s_a
        #[arg(long)]
        prefix: Option<String>,
    },
    /// F-series shift identity at cutoff D and chain depth d
    FIdentity {
        #[arg(long)]
        cutoff: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: String,
        #[arg(long)]
        q: String,
    },
    /// Standard lemma grids: telescoping, integral form, alpha-derivative, pointwise bounds
    Lemmas {
        #[arg(long, default_value = "0.3,0.5,0.8,0.9")]
        q: String,
        /// Comma-separated subset of lemma1,lemma2,derivative,bounds
        #[arg(long, default_value = "lemma1,lemma2,derivative,bounds")]
        which: String,
        #[arg(long, default_value_t = 20)]
        m1_max: u64,
        /// Random points for the bound scan
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
    /// Extrapolate zeta_q(index) to q = 1
    Limit {
        #[arg(long)]
        index: String,
        /// q values to extrapolate from (default: 1 - 2^-j, j = 3..10)
        #[arg(long)]
        q_grid: Option<String>,
        /// Compare with the extrapolation of this index instead of the classical value
        #[arg(long)]
        against: Option<String>,
    },
    /// Cross-product scan of one check over parameter grids
    Scan {
        #[arg(value_enum)]
        check: Check,
        /// Grid axis key=start:stop:count (repeatable)
        #[arg(long)]
        grid: Vec<String>,
        /// Fixed parameter key=value (repeatable)
        #[arg(long)]
        set: Vec<String>,
    },
}

fn policy(g: &Global) -> Result<TruncationPolicy, String> {
    let d = TruncationPolicy::default();
    let p = TruncationPolicy {
        tol: g.tol.unwrap_or(d.tol),
        max_outer: g.max_outer.unwrap_or(d.max_outer),
        stall_window: g.stall_window.unwrap_or(d.stall_window),
        quad_order: g.quad_order.unwrap_or(d.quad_order),
        n_max: g.n_max.unwrap_or(d.n_max),
        ..d
    };
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn for_each_q(check: Check, qs: &str, base: Params) -> Result<Vec<(Check, Params)>, String> {
    Ok(parse_real_list(qs)?
        .into_iter()
        .map(|q| (check, Params { q: Some(q), ..base.clone() }))
        .collect())
}

fn lemma_plan(qs: &str, which: &str, m1_max: u64, points: usize, seed: u64) -> Result<Vec<(Check, Params)>, String> {
    let c = Complex64::new;
    let mut plan = Vec::new();
    for part in which.split(',').map(str::trim) {
        match part {
            "lemma1" => {
                for m1 in 1..=m1_max {
                    plan.extend(for_each_q(Check::Lemma1, qs, Params { m1: Some(m1), ..Params::default() })?);
                }
            }
            "lemma2" => {
                for s in [c(3.5, 0.0), c(4.0, 0.0), c(5.0, 1.0)] {
                    for a in [2.0, 2.5, 3.0] {
                        let base = Params { s: Some(s), alpha: Some(c(a, 0.0)), ..Params::default() };
                        plan.extend(for_each_q(Check::Lemma2, qs, base)?);
                    }
                }
            }
            "derivative" => {
                for (s, a) in [
                    (c(2.5, 0.0), c(4.0, 0.0)),
                    (c(4.0, 0.0), c(2.5, 0.0)),
                    (c(1.5, 0.0), c(3.0, 0.0)),
                    (c(1.8, 0.0), c(2.5, 0.0)),
                    (c(1.3, 0.5), c(6.0, -1.0)),
                ] {
                    let base = Params { s: Some(s), alpha: Some(a), ..Params::default() };
                    plan.extend(for_each_q(Check::Derivative, qs, base)?);
                }
            }
            "bounds" => {
                for check in [Check::BoundsPlain, Check::BoundsLog] {
                    plan.push((check, Params { points: Some(points), seed: Some(seed), ..Params::default() }));
                }
            }
            other => return Err(format!("unknown lemma group '{other}'")),
        }
    }
    Ok(plan)
}

fn scan_plan(check: Check, grid: &[String], set: &[String], seed: u64) -> Result<Vec<(Check, Params)>, String> {
    let mut base = Params { seed: Some(seed), ..Params::default() };
    for item in set {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("--set '{item}' must look like key=value"))?;
        base.set_text(k.trim(), v)?;
    }
    let axes = grid.iter().map(|g| parse_axis(g)).collect::<Result<Vec<_>, _>>()?;
    cross_product(&axes)
        .into_iter()
        .map(|point| {
            let mut p = base.clone();
            for (k, v) in point {
                p.set_number(&k, v)?;
            }
            Ok((check, p))
        })
        .collect()
}

fn build(cli: &Cli) -> Result<(String, Vec<(Check, Params)>), String> {
    let g = &cli.global;
    let plan = match &cli.command {
        Command::Eval { index, q, cont } => {
            let base = Params { index: Some(parse_complex_list(index)?), cont: *cont, ..Params::default() };
            ("eval", for_each_q(Check::Eval, q, base)?)
        }
        Command::SumFormula { k, r, q } => {
            ("sum-formula", for_each_q(Check::SumFormula, q, Params { k: Some(*k), r: Some(*r), ..Params::default() })?)
        }
        Command::Theorem3 { s, q } => {
            ("theorem3", for_each_q(Check::Theorem3, q, Params { s: Some(parse_complex(s)?), ..Params::default() })?)
        }
        Command::Theorem4 { b, s, q, prefix } => {
            let base = Params {
                b: Some(*b),
                s: Some(parse_complex(s)?),
                prefix: prefix.as_deref().map(parse_complex_list).transpose()?,
                ..Params::default()
            };
            ("theorem4", for_each_q(Check::Theorem4, q, base)?)
        }
        Command::FIdentity { cutoff, d, s, q } => {
            let base = Params { cutoff: Some(*cutoff), d: Some(*d), s: Some(parse_complex(s)?), ..Params::default() };
            ("f-identity", for_each_q(Check::FIdentity, q, base)?)
        }
        Command::Lemmas { q, which, m1_max, points } => ("lemmas", lemma_plan(q, which, *m1_max, *points, g.seed)?),
        Command::Limit { index, q_grid, against } => {
            let p = Params {
                index: Some(parse_complex_list(index)?),
                q_grid: q_grid.as_deref().map(parse_real_list).transpose()?,
                against: against.as_deref().map(parse_complex_list).transpose()?,
                ..Params::default()
            };
            ("limit", vec![(Check::Limit, p)])
        }
        Command::Scan { check, grid, set } => ("scan", scan_plan(*check, grid, set, g.seed)?),
    };
    Ok((plan.0.to_string(), plan.1))
}

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("QZETA_MAX_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QZETA_MAX_THREADS must be a positive integer, got '{text}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    configure_threads()?;
    let policy = policy(&cli.global)?;
    let (prefix, plan) = build(&cli)?;
    let ids = case_ids(&prefix, plan.len());
    let cases: Vec<Case> = plan
        .into_iter()
        .zip(ids)
        .map(|((check, mut params), id)| {
            params.tolerance = cli.global.tolerance.or(params.tolerance);
            Case { id, check, params }
        })
        .collect();
    for c in &cases {
        c.validate()?;
    }
    let records = run_all(&cases, &policy);
    let sink: Box<dyn Write> = match &cli.global.output {
        Some(path) => Box::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    write_records(&records, cli.global.format, BufWriter::new(sink)).map_err(|e| e.to_string())?;
    Ok(exit_status(&records))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("qzeta: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
