//! Growth of `c_n^(k)`: log-space evaluation of the asymptotic formulas, exact
//! tour counts on star-like trees, and the rerooting inequality.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use libm::lgamma;
use num_traits::{ToPrimitive, Zero};

use crate::closed_form::departure_count;
use crate::combinatorics::{factorial, ratio, ExactRatio, Natural};
use crate::error::{Error, Result};
use crate::oracle::{enumerate_plane_trees, tours_on_tree};
use crate::series::lagrange_extract;

/// Natural log of an exact integer from its bit length and top 64 bits.
/// Relative error is below `1e-15` for every positive input.
pub fn ln_natural(x: &Natural) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * LN_2
}

fn ln_factorial(n: u32) -> f64 {
    lgamma(f64::from(n) + 1.0)
}

/// Natural log of the leading-order asymptotic formula for `c_n^(k)`:
///
/// - `k = 1`: `4^n / √(π n³)`
/// - `k = 2`: `2 √(e³ / (π n)) · 2^n · n!`
/// - `k ≥ 3`: `2 √(k / (2π n)^{k−1}) · (k^k / k!)^n · (n!)^{k−1}`
pub fn asymptotic_log_value(n: u32, k: u32) -> f64 {
    assert!(n >= 1 && k >= 1, "asymptotics need n ≥ 1, k ≥ 1");
    let nf = f64::from(n);
    let kf = f64::from(k);
    match k {
        1 => nf * 4f64.ln() - 0.5 * (PI.ln() + 3.0 * nf.ln()),
        2 => LN_2 + 0.5 * (3.0 - (PI * nf).ln()) + nf * LN_2 + ln_factorial(n),
        _ => {
            LN_2 + 0.5 * (kf.ln() - (kf - 1.0) * (2.0 * PI * nf).ln())
                + nf * (kf * kf.ln() - ln_factorial(k))
                + (kf - 1.0) * ln_factorial(n)
        }
    }
}

/// Natural log of Gunnells' conjectured form for odd `k ≥ 3`:
/// `2·C(2,2)C(4,2)⋯C(k−1,2) / (k^{(2k−3)/2} (π n)^{(k−1)/2}) · (k^k/k!)^{n+1} (n!)^{k−1}`.
///
/// The even-k branch of the conjecture is not well-formed and is rejected.
pub fn gunnells_log_value(n: u32, k: u32) -> Result<f64> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "Gunnells' form is only evaluated for odd k ≥ 3, got k = {k}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let nf = f64::from(n);
    let kf = f64::from(k);
    let binomials: f64 = (1..=(k - 1) / 2)
        .map(|j| {
            let e = f64::from(2 * j);
            (e * (e - 1.0) / 2.0).ln()
        })
        .sum();
    Ok(
        LN_2 + binomials - (2.0 * kf - 3.0) / 2.0 * kf.ln() - (kf - 1.0) / 2.0 * (PI * nf).ln()
            + (nf + 1.0) * (kf * kf.ln() - ln_factorial(k))
            + (kf - 1.0) * ln_factorial(n),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub n: u32,
    /// `ln c_n^(k)` from the exact value.
    pub log_exact: f64,
    pub log_asym: f64,
    /// `c_n^(k)` divided by the asymptotic formula.
    pub ratio: f64,
    /// `|ratio − 1|`.
    pub abs_delta: f64,
}

/// Exact-versus-asymptotic comparison for one `k`, rows sorted by `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub k: u32,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    /// Change of `|ratio − 1|` between consecutive rows.
    pub fn delta_steps(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[1].abs_delta - w[0].abs_delta)
            .collect()
    }

    /// True when `|ratio − 1|` strictly decreases along the rows.
    pub fn strictly_converging(&self) -> bool {
        self.delta_steps().iter().all(|&d| d < 0.0)
    }
}

/// Builds a [`RatioReport`] with exact values from Lagrange extraction.
pub fn ratio_report(k: u32, ns: &[u32]) -> Result<RatioReport> {
    if let Some(&bad) = ns.iter().find(|&&n| n == 0) {
        return Err(Error::Domain(format!("ratio rows need n ≥ 1, got {bad}")));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns
        .into_iter()
        .map(|n| {
            let log_exact = ln_natural(&lagrange_extract(n, k));
            let log_asym = asymptotic_log_value(n, k);
            let ratio = (log_exact - log_asym).exp();
            RatioRow {
                n,
                log_exact,
                log_asym,
                ratio,
                abs_delta: (ratio - 1.0).abs(),
            }
        })
        .collect();
    Ok(RatioReport { k, rows })
}

/// Parameters of a star-like tree: `n + 1` vertices, one vertex of degree
/// `n − m`, `m` vertices of degree 2 and `n − m` leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarParams {
    n: u32,
    m: u32,
    k: u32,
}

impl StarParams {
    /// Requires `k ≥ 2` and `n − m ≥ 3`. At `n − m = 2` the center cannot be
    /// told apart from the degree-2 vertices and the case split double counts.
    pub fn new(n: u32, m: u32, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("star counts need k ≥ 2, got {k}")));
        }
        if n < m + 3 {
            return Err(Error::Domain(format!(
                "star-like trees need n − m ≥ 3, got n = {n}, m = {m}"
            )));
        }
        Ok(StarParams { n, m, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// `s_k(n, m)`: k-tours over all rooted star-like trees with these parameters.
///
/// With `X = departure_count(n − m, k)` and `Y = departure_count(2, k)`,
/// `s = 2/m! · Y^m · (n−1)!/(n−m−1)! · X + 2/(m−1)! · Y^m · (n−1)!/(n−m)! · X`,
/// the second term present only for `m ≥ 1`.
pub fn star_count_exact(p: StarParams) -> Natural {
    let StarParams { n, m, k } = p;
    let x = departure_count(n - m, k);
    let ym = departure_count(2, k).pow(m);
    let common = Natural::from(2u32) * &ym * &x * factorial(n - 1);
    let mut s = ratio(common.clone(), factorial(m) * factorial(n - m - 1));
    if m >= 1 {
        s += ratio(common, factorial(m - 1) * factorial(n - m));
    }
    crate::combinatorics::expect_natural(&s, "star count")
}

/// `s_k(n, m)` by summing tours over every plane tree of the star-like shape.
pub fn star_count_by_enumeration(p: StarParams) -> Natural {
    let StarParams { n, m, k } = p;
    enumerate_plane_trees(n as usize + 1)
        .filter(|t| {
            let mut by_degree: BTreeMap<u32, u32> = BTreeMap::new();
            for v in 0..t.vertex_count() {
                *by_degree.entry(t.degree(v)).or_default() += 1;
            }
            let at = |d| by_degree.get(&d).copied().unwrap_or(0);
            at(n - m) == 1 && at(2) == m && at(1) == n - m && by_degree.len() == 1 + usize::from(m > 0) + 1
        })
        .map(|t| tours_on_tree(&t, k))
        .sum()
}

/// `s_k(n, m) / s_k(n, 0)`.
pub fn star_ratio(n: u32, m: u32, k: u32) -> Result<ExactRatio> {
    let s = star_count_exact(StarParams::new(n, m, k)?);
    let s0 = star_count_exact(StarParams::new(n, 0, k)?);
    Ok(ratio(s, s0))
}

/// `(Σ_{m ≤ ⌊n^{1/3}⌋} s_2(n, m) / s_2(n, 0), e^{3/2})`.
pub fn star_sum_k2_check(n: u32) -> Result<(f64, f64)> {
    if n < 4 {
        return Err(Error::Domain(format!("star sum needs n ≥ 4, got {n}")));
    }
    let top = integer_cube_root(n);
    let mut sum = ExactRatio::zero();
    for m in 0..=top {
        sum += star_ratio(n, m, 2)?;
    }
    Ok((sum.to_f64().expect("finite ratio"), 1.5f64.exp()))
}

fn integer_cube_root(n: u32) -> u32 {
    let mut r = (f64::from(n)).cbrt().round() as u32;
    while r.pow(3) > n {
        r -= 1;
    }
    while (r + 1).pow(3) <= n {
        r += 1;
    }
    r
}

/// `(c_n^(k) − s_k(n, 0)) / s_k(n, 0)`, exactly.
pub fn star_excess(n: u32, k: u32) -> Result<ExactRatio> {
    let s = star_count_exact(StarParams::new(n, 0, k)?);
    let c = lagrange_extract(n, k);
    Ok(ExactRatio::new((c.clone() - &s).into(), s.into()))
}

/// Both sides of the rerooting inequality.
///
/// `counts` lists the outdegrees `i ↦ n_i` of the `m` internal non-root
/// vertices of a tree with root degree 1, so `Σ n_i = m` and `Σ i·n_i = n − 1`.
/// The right side counts those trees, scaled by `m`:
/// `(m/n)·C(n; n−m, n_1, …)`. The left side counts the trees obtained by
/// promoting one vertex of outdegree `ℓ − 1` to a root of degree `ℓ`:
/// `Σ_{ℓ=2}^{n−m+1} (ℓ/n)·C(n; n−m+1, n_1, …, n_{ℓ−1} − 1, …)`.
pub fn rerooting_sides(n: u32, m: u32, counts: &BTreeMap<u32, u32>) -> Result<(ExactRatio, ExactRatio)> {
    if m < 1 || m + 1 > n {
        return Err(Error::Domain(format!("need 1 ≤ m ≤ n − 1, got n = {n}, m = {m}")));
    }
    if counts.contains_key(&0) {
        return Err(Error::Domain("counts are for outdegrees i ≥ 1".into()));
    }
    let parts: u32 = counts.values().sum();
    let weight: u32 = counts.iter().map(|(&i, &c)| i * c).sum();
    if parts != m || weight != n - 1 {
        return Err(Error::Domain(format!(
            "need Σ n_i = m = {m} and Σ i·n_i = n − 1 = {}, got {parts} and {weight}",
            n - 1
        )));
    }
    let count_factorials = |skip: Option<u32>| -> Natural {
        counts
            .iter()
            .map(|(&i, &c)| factorial(if Some(i) == skip { c - 1 } else { c }))
            .product()
    };
    let rhs = ratio(
        Natural::from(m) * factorial(n),
        Natural::from(n) * factorial(n - m) * count_factorials(None),
    );
    let mut lhs = ExactRatio::zero();
    for l in 2..=n - m + 1 {
        if counts.get(&(l - 1)).copied().unwrap_or(0) == 0 {
            continue;
        }
        lhs += ratio(
            Natural::from(l) * factorial(n),
            Natural::from(n) * factorial(n - m + 1) * count_factorials(Some(l - 1)),
        );
    }
    Ok((lhs, rhs))
}

/// Whether the rerooting inequality `LHS ≤ RHS` holds for these inputs.
pub fn rerooting_check(n: u32, m: u32, counts: &BTreeMap<u32, u32>) -> Result<bool> {
    let (lhs, rhs) = rerooting_sides(n, m, counts)?;
    Ok(lhs <= rhs)
}
