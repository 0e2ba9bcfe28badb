//! Command-line front end for `hypercat`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 for
//! usage errors, infeasible requests and I/O failures.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use hypercat::asymptotics::{ratio_report, star_count_exact, star_sum_k2_check, StarParams};
use hypercat::closed_form::hypergraph_catalan_closed;
use hypercat::oracle::{brute_force_walks_bounded, oracle_by_trees};
use hypercat::series::{hypergraph_catalan_series, hypergraph_catalan_values, lagrange_extract};
use hypercat::verify::{Level, Routes};

/// Default cap on walk length for `--method walks`: `2kn ≤ 16`.
pub const DEFAULT_MAX_WALK_STEPS: u32 = 16;
/// `--method trees` enumerates Catalan(n) trees; past this it takes minutes.
pub const MAX_TREE_EDGES: u32 = 14;
/// `--method auto` only brute-forces walks up to this `kn`.
const AUTO_WALK_KN: u32 = 6;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "hypercat", version, about = "Exact hypergraph Catalan numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print one value c_n^(k).
    Compute {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Longest walk (2kn steps) the brute-force search will attempt.
        #[arg(long, default_value_t = DEFAULT_MAX_WALK_STEPS)]
        max_walk_steps: u32,
    },
    /// Table of c_n^(k) for n = 0..=N and every requested k.
    Table {
        #[arg(short, value_delimiter = ',', required = true, num_args = 1..)]
        k: Vec<u32>,
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-route verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
    /// Compare exact values with the leading-order asymptotics.
    Ratio {
        #[arg(short)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        ns: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tour counts on star-like trees, or the k = 2 star sum with --sum.
    Star {
        #[arg(short, default_value_t = 2)]
        k: u32,
        #[arg(short, value_delimiter = ',', required = true, num_args = 1..)]
        n: Vec<u32>,
        /// Degree-2 vertices; every valid m when omitted.
        #[arg(short)]
        m: Option<u32>,
        /// Report Σ_{m ≤ n^{1/3}} s_2(n,m)/s_2(n,0) against e^{3/2} instead.
        #[arg(long, conflicts_with_all = ["k", "m"])]
        sum: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Series,
    Lagrange,
    Trees,
    Walks,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl From<VerifyLevel> for Level {
    fn from(level: VerifyLevel) -> Self {
        match level {
            VerifyLevel::Quick => Level::Quick,
            VerifyLevel::Full => Level::Full,
        }
    }
}

#[derive(Serialize)]
struct ValueRow {
    k: String,
    n: String,
    c: String,
}

#[derive(Serialize)]
struct RatioRow {
    k: String,
    n: String,
    ratio: String,
    abs_delta: String,
}

#[derive(Serialize)]
struct StarRow {
    k: String,
    n: String,
    m: String,
    s: String,
}

#[derive(Serialize)]
struct StarSumRow {
    n: String,
    sum: String,
    target: String,
    ratio: String,
}

/// Computes `c_n^(k)` with the requested method, or explains why it will not.
pub fn compute(n: u32, k: u32, method: Method, max_walk_steps: u32) -> anyhow::Result<BigUint> {
    if k == 0 {
        bail!("k must be at least 1");
    }
    let kn = k.checked_mul(n).context("k·n overflows")?;
    let method = match method {
        Method::Auto if kn <= AUTO_WALK_KN => Method::Walks,
        Method::Auto => Method::Series,
        m => m,
    };
    Ok(match method {
        Method::Closed => hypergraph_catalan_closed(n, k),
        Method::Series => hypergraph_catalan_series(n, k),
        Method::Lagrange if n == 0 => BigUint::from(1u32),
        Method::Lagrange => lagrange_extract(n, k),
        Method::Trees => {
            if n > MAX_TREE_EDGES {
                bail!("--method trees enumerates every plane tree; n = {n} exceeds {MAX_TREE_EDGES}");
            }
            oracle_by_trees(n, k)
        }
        Method::Walks => brute_force_walks_bounded(n, k, max_walk_steps / 2)
            .map_err(|e| anyhow::anyhow!("{e}; raise --max-walk-steps or pick another method"))?,
        Method::Auto => unreachable!(),
    })
}

/// 12 significant digits, fixed-point when that stays readable.
pub fn significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-6..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

fn open_output(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(rows: &[T], format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let mut sink = open_output(out)?;
    match format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut sink);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, rows)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Runs the verification suite, writing one line per check and a summary.
/// Returns whether every check passed.
pub fn report_suite(level: Level, routes: &Routes, out: &mut impl Write) -> io::Result<bool> {
    let mut all = true;
    let mut count = 0;
    let mut passed = 0;
    for check in hypercat::verify::checks(level) {
        let outcome = check.run(routes);
        writeln!(out, "{outcome}")?;
        out.flush()?;
        count += 1;
        if outcome.passed {
            passed += 1;
        } else {
            all = false;
        }
    }
    writeln!(out, "{passed}/{count} checks passed")?;
    Ok(all)
}

/// Configures the global thread pool from `HYPERCAT_THREADS`, if set.
pub fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("HYPERCAT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("HYPERCAT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("thread pool already configured")?;
    Ok(())
}

/// Executes a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Compute {
            k,
            n,
            method,
            max_walk_steps,
        } => {
            if method == Method::Walks && max_walk_steps > DEFAULT_MAX_WALK_STEPS {
                eprintln!(
                    "warning: --max-walk-steps {max_walk_steps} exceeds the default {DEFAULT_MAX_WALK_STEPS}; \
                     the walk search grows super-exponentially"
                );
            }
            println!("{}", compute(n, k, method, max_walk_steps)?);
        }
        Command::Table { k, n, format, out } => {
            if let Some(&bad) = k.iter().find(|&&k| k == 0) {
                bail!("k must be at least 1, got {bad}");
            }
            let mut rows = Vec::new();
            for &k in &k {
                let values = hypergraph_catalan_values(k, n as usize + 1);
                rows.extend(values.into_iter().enumerate().map(|(n, c)| ValueRow {
                    k: k.to_string(),
                    n: n.to_string(),
                    c: c.to_string(),
                }));
            }
            emit(&rows, format, &out)?;
        }
        Command::Verify { level } => {
            let ok = report_suite(level.into(), &Routes::default(), &mut io::stdout().lock())?;
            if !ok {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Ratio { k, ns, format, out } => {
            if k == 0 {
                bail!("k must be at least 1");
            }
            let report = ratio_report(k, &ns)?;
            let rows: Vec<RatioRow> = report
                .rows
                .iter()
                .map(|r| RatioRow {
                    k: k.to_string(),
                    n: r.n.to_string(),
                    ratio: significant(r.ratio),
                    abs_delta: significant(r.abs_delta),
                })
                .collect();
            emit(&rows, format, &out)?;
        }
        Command::Star {
            k,
            n,
            m,
            sum,
            format,
            out,
        } => {
            if sum {
                let mut rows = Vec::new();
                for n in n {
                    let (total, target) = star_sum_k2_check(n)?;
                    rows.push(StarSumRow {
                        n: n.to_string(),
                        sum: significant(total),
                        target: significant(target),
                        ratio: significant(total / target),
                    });
                }
                emit(&rows, format, &out)?;
            } else {
                let mut rows = Vec::new();
                for n in n {
                    let ms = match m {
                        Some(m) => vec![m],
                        None => (0..=n.saturating_sub(3)).collect(),
                    };
                    for m in ms {
                        let s = star_count_exact(StarParams::new(n, m, k)?);
                        rows.push(StarRow {
                            k: k.to_string(),
                            n: n.to_string(),
                            m: m.to_string(),
                            s: s.to_string(),
                        });
                    }
                }
                emit(&rows, format, &out)?;
            }
        }
    }
    Ok(EXIT_OK)
}
