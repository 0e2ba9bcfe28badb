//! Cross-route verification suite shared by the command-line `verify`
//! command and the acceptance tests.
//!
//! Each check runs against a [`Routes`] table, so a test can swap one route
//! for a deliberately broken one and confirm the suite names the failure.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::asymptotics::{
    asymptotic_log_value, gunnells_log_value, ratio_report, rerooting_check, star_count_by_enumeration,
    star_count_exact, star_excess, StarParams,
};
use crate::closed_form::hypergraph_catalan_closed;
use crate::combinatorics::{catalan, Natural, Partitions};
use crate::error::Result;
use crate::oracle::{
    brute_force_walks_bounded, decompose_walk, for_each_walk, oracle_by_trees, reconstruct_walk, Walk,
};
use crate::series::{hypergraph_catalan_series, hypergraph_catalan_values, verify_functional_equation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// The independent ways of computing `c_n^(k)`.
#[derive(Clone, Copy)]
pub struct Routes {
    pub walks: fn(u32, u32) -> Result<Natural>,
    pub trees: fn(u32, u32) -> Natural,
    pub closed: fn(u32, u32) -> Natural,
    pub series: fn(u32, u32) -> Natural,
    /// `c_0 .. c_{count−1}` for one `k`.
    pub series_prefix: fn(u32, usize) -> Vec<Natural>,
}

fn walks_up_to_eight(n: u32, k: u32) -> Result<Natural> {
    brute_force_walks_bounded(n, k, 8)
}

impl Default for Routes {
    fn default() -> Self {
        Routes {
            walks: walks_up_to_eight,
            trees: oracle_by_trees,
            closed: hypergraph_catalan_closed,
            series: hypergraph_catalan_series,
            series_prefix: hypergraph_catalan_values,
        }
    }
}

/// Ratios `c_400^(k)` over the asymptotic formula, frozen from a validated run.
pub const FROZEN_RATIOS_400: [(u32, f64); 4] = [
    (1, 0.997_194_562_498_148_4),
    (2, 1.011_173_108_369_206_9),
    (3, 1.005_026_765_295_750_7),
    (4, 0.999_239_624_328_756_5),
];

pub const FROZEN_RATIO_TOLERANCE: f64 = 1e-9;

type CheckFn = fn(&Routes) -> std::result::Result<(), String>;

pub struct Check {
    pub name: &'static str,
    pub budget: Duration,
    run: CheckFn,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    /// Counterexample or budget overrun, empty on success.
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({:.2?})", self.name, self.elapsed)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

impl Check {
    pub fn run(&self, routes: &Routes) -> Outcome {
        let start = Instant::now();
        let result = (self.run)(routes);
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(()) if elapsed <= self.budget => (true, String::new()),
            Ok(()) => (false, format!("took {elapsed:.2?}, budget {:.2?}", self.budget)),
            Err(e) => (false, e),
        };
        Outcome {
            name: self.name,
            passed,
            detail,
            elapsed,
            budget: self.budget,
        }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn checks(level: Level) -> Vec<Check> {
    match level {
        Level::Quick => vec![
            Check {
                name: "triple agreement (kn <= 6)",
                budget: secs(30),
                run: |r| triple_agreement(r, 6, 6),
            },
            Check {
                name: "catalan specialization (n <= 50)",
                budget: secs(30),
                run: |r| catalan_pointwise(r, 50),
            },
            Check {
                name: "functional equation (order 5)",
                budget: secs(30),
                run: |_| functional_equation(5),
            },
            Check {
                name: "rerooting (n <= 8)",
                budget: secs(30),
                run: |_| rerooting(8),
            },
        ],
        Level::Full => vec![
            Check {
                name: "triple agreement (kn <= 8, k <= 4)",
                budget: secs(60),
                run: |r| triple_agreement(r, 8, 4),
            },
            Check {
                name: "catalan specialization (n <= 300)",
                budget: secs(10),
                run: |r| catalan_prefix(r, 300),
            },
            Check {
                name: "known small values",
                budget: secs(5),
                run: known_values,
            },
            Check {
                name: "functional equation (k <= 3, order 6)",
                budget: secs(30),
                run: |_| functional_equation(6),
            },
            Check {
                name: "star-like counts (n <= 8, k in {2,3})",
                budget: secs(60),
                run: |_| star_counts(8),
            },
            Check {
                name: "odd-k asymptotic identity",
                budget: secs(1),
                run: |_| odd_k_identity(),
            },
            Check {
                name: "asymptotic convergence (k <= 4, n <= 400)",
                budget: secs(2400),
                run: |_| convergence(),
            },
            Check {
                name: "star dominance (k = 3)",
                budget: secs(60),
                run: |_| star_dominance(),
            },
            Check {
                name: "rerooting (n <= 12)",
                budget: secs(60),
                run: |_| rerooting(12),
            },
            Check {
                name: "bijection round trip (kn <= 6)",
                budget: secs(30),
                run: |_| round_trip(6),
            },
        ],
    }
}

pub fn run_suite(level: Level, routes: &Routes) -> Vec<Outcome> {
    checks(level).iter().map(|c| c.run(routes)).collect()
}

fn triple_agreement(routes: &Routes, max_kn: u32, max_k: u32) -> std::result::Result<(), String> {
    for k in 1..=max_k.min(max_kn) {
        for n in 0..=max_kn / k {
            let walks = (routes.walks)(n, k).map_err(|e| e.to_string())?;
            let trees = (routes.trees)(n, k);
            let closed = (routes.closed)(n, k);
            let series = (routes.series)(n, k);
            if walks != trees || walks != closed || walks != series {
                return Err(format!(
                    "n={n} k={k}: walks={walks} trees={trees} closed={closed} series={series}"
                ));
            }
        }
    }
    Ok(())
}

fn catalan_pointwise(routes: &Routes, max_n: u32) -> std::result::Result<(), String> {
    for n in 0..=max_n {
        let expected = catalan(n);
        let closed = (routes.closed)(n, 1);
        let series = (routes.series)(n, 1);
        if closed != expected || series != expected {
            return Err(format!(
                "n={n}: catalan={expected} closed={closed} series={series}"
            ));
        }
    }
    Ok(())
}

fn catalan_prefix(routes: &Routes, max_n: u32) -> std::result::Result<(), String> {
    let values = (routes.series_prefix)(1, max_n as usize + 1);
    for (n, value) in values.iter().enumerate() {
        let expected = catalan(n as u32);
        if *value != expected {
            return Err(format!("n={n}: catalan={expected} series={value}"));
        }
    }
    if values.len() != max_n as usize + 1 {
        return Err(format!("series returned {} values", values.len()));
    }
    Ok(())
}

fn known_values(routes: &Routes) -> std::result::Result<(), String> {
    let mut cases = vec![(2, 2, 6u32), (3, 2, 57), (2, 3, 20)];
    cases.extend((1..=6).map(|k| (1, k, 1)));
    for (n, k, expected) in cases {
        let expected = Natural::from(expected);
        let walks = (routes.walks)(n, k).map_err(|e| e.to_string())?;
        let closed = (routes.closed)(n, k);
        if walks != expected || closed != expected {
            return Err(format!(
                "n={n} k={k}: expected {expected}, walks={walks} closed={closed}"
            ));
        }
    }
    Ok(())
}

fn functional_equation(order: usize) -> std::result::Result<(), String> {
    for k in 1..=3 {
        let report = verify_functional_equation(k, order);
        if let Some(m) = report.interior_mismatch {
            return Err(format!("k={k}: {m}"));
        }
    }
    Ok(())
}

fn star_counts(max_n: u32) -> std::result::Result<(), String> {
    for k in 2..=3 {
        for n in 3..=max_n {
            for m in 0..=n - 3 {
                let p = StarParams::new(n, m, k).map_err(|e| e.to_string())?;
                let exact = star_count_exact(p);
                let counted = star_count_by_enumeration(p);
                if exact != counted {
                    return Err(format!(
                        "n={n} m={m} k={k}: formula={exact} enumeration={counted}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn odd_k_identity() -> std::result::Result<(), String> {
    for k in [3, 5, 7] {
        for n in [1, 10, 100] {
            let g = gunnells_log_value(n, k).map_err(|e| e.to_string())?;
            let a = asymptotic_log_value(n, k);
            if (g - a).abs() >= 1e-10 {
                return Err(format!("n={n} k={k}: {g} vs {a}"));
            }
        }
    }
    Ok(())
}

fn convergence() -> std::result::Result<(), String> {
    for (k, frozen) in FROZEN_RATIOS_400 {
        let report = ratio_report(k, &[50, 100, 200, 400]).map_err(|e| e.to_string())?;
        if !report.strictly_converging() {
            let deltas: Vec<f64> = report.rows.iter().map(|r| r.abs_delta).collect();
            return Err(format!("k={k}: |ratio-1| not strictly decreasing: {deltas:?}"));
        }
        let last = report.rows.last().expect("four rows").ratio;
        if !(last > 0.5 && last < 2.0) {
            return Err(format!("k={k}: ratio at n=400 is {last}"));
        }
        if ((last - frozen) / frozen).abs() > FROZEN_RATIO_TOLERANCE {
            return Err(format!("k={k}: ratio at n=400 is {last}, frozen {frozen}"));
        }
    }
    Ok(())
}

fn star_dominance() -> std::result::Result<(), String> {
    let mut previous = None;
    for n in [6, 10, 14, 18] {
        let excess = star_excess(n, 3).map_err(|e| e.to_string())?;
        if let Some((pn, pe)) = &previous {
            if excess >= *pe {
                return Err(format!("excess at n={n} ({excess}) not below n={pn} ({pe})"));
            }
        }
        previous = Some((n, excess));
    }
    Ok(())
}

fn rerooting(max_n: u32) -> std::result::Result<(), String> {
    for n in 2..=max_n {
        for parts in Partitions::new(n - 1) {
            let m = parts.len() as u32;
            let mut counts = BTreeMap::new();
            for p in parts {
                *counts.entry(p).or_insert(0u32) += 1;
            }
            match rerooting_check(n, m, &counts) {
                Ok(true) => {}
                Ok(false) => return Err(format!("n={n} m={m} counts={counts:?}: LHS > RHS")),
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(())
}

fn round_trip(max_kn: u32) -> std::result::Result<(), String> {
    for k in 1..=max_kn {
        for n in 0..=max_kn / k {
            let mut failure = None;
            for_each_walk(n, k, max_kn, |path| {
                if failure.is_some() {
                    return;
                }
                let walk = Walk::new(path.to_vec()).expect("search yields canonical walks");
                let back = decompose_walk(&walk, k).and_then(|(tree, seqs)| reconstruct_walk(&tree, &seqs));
                match back {
                    Ok(w) if w == walk => {}
                    Ok(w) => failure = Some(format!("k={k}: {walk} came back as {w}")),
                    Err(e) => failure = Some(format!("k={k}: {walk}: {e}")),
                }
            })
            .map_err(|e| e.to_string())?;
            if let Some(f) = failure {
                return Err(f);
            }
        }
    }
    Ok(())
}
