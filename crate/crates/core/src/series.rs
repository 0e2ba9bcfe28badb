//! Generating-function route to `c_n^(k)`.
//!
//! With `φ(u) = Σ_i C((i+1)k; k,…,k) u^i / (i+1)!` and
//! `H(u) = Σ_i C(ik; k,…,k) u^i / i!`, the series `A(z) = z·φ(A(z))` and
//! `C_k(z) = z·H(A(z))` satisfy `[z^{n+1}] C_k = c_n^(k)`. Lagrange inversion
//! gives the same coefficient as `(1/n) [u^{n-1}] H'(u) φ(u)^n`.
//!
//! Everything here is exact: coefficients are [`ExactRatio`]s even though the
//! extracted counts are integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::closed_form::root_degree_slice;
use crate::combinatorics::{block_multinomial, expect_natural, factorial, ratio, ExactRatio, Natural};
use crate::error::{Error, Result};

/// Power series `c_0 + c_1 z + … + c_N z^N` modulo `z^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExactRatio>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![ExactRatio::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ExactRatio::one();
        s
    }

    /// The series `z` (or zero at order 0).
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ExactRatio::one();
        }
        s
    }

    /// Takes ownership of `c_0 … c_N`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<ExactRatio>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> ExactRatio) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `[z^i]`; zero beyond the stored order is *not* implied, so this panics there.
    pub fn coeff(&self, i: usize) -> &ExactRatio {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ExactRatio] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the truncation order");
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, factor: &ExactRatio) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `z · self`, keeping the order (the top coefficient falls off).
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(ExactRatio::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        TruncatedSeries { coeffs }
    }

    /// Formal derivative. The result is known only to order `N − 1`.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        }
    }

    /// Numerators over the least common denominator of all coefficients.
    fn common_denominator(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| {
                if c.denom() == &lcm {
                    c.numer().clone()
                } else {
                    c.numer() * (&lcm / c.denom())
                }
            })
            .collect();
        (nums, lcm)
    }

    /// Truncated product. Runs as an integer convolution over common
    /// denominators, so integral series never pay for rational reduction.
    fn product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let (a, da) = self.common_denominator();
        let (b, db) = other.common_denominator();
        let den = da * db;
        let lead_a = a.iter().position(|x| !x.is_zero());
        let lead_b = b.iter().position(|x| !x.is_zero());
        let mut out = vec![BigInt::zero(); order + 1];
        if let (Some(la), Some(lb)) = (lead_a, lead_b) {
            for i in la..=order {
                if a[i].is_zero() {
                    continue;
                }
                for j in lb..=order - i {
                    if !b[j].is_zero() {
                        out[i + j] += &a[i] * &b[j];
                    }
                }
            }
        }
        TruncatedSeries {
            coeffs: out.into_iter().map(|n| ExactRatio::new(n, den.clone())).collect(),
        }
    }

    /// `self^e` by repeated squaring at this order.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(inner)`; requires `inner(0) = 0`. Horner evaluation.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(
            inner.coeffs[0].is_zero(),
            "composition needs an inner series without constant term"
        );
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        acc
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·z")?,
                _ => write!(f, "{c}·z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |i| &self.coeffs[i] + &rhs.coeffs[i])
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |i| &self.coeffs[i] - &rhs.coeffs[i])
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.product(rhs)
    }
}

/// Accumulates `Σ x_i·y_i`, keeping integral products out of rational
/// arithmetic.
#[derive(Default)]
struct DotAccumulator {
    integral: BigInt,
    rational: Option<ExactRatio>,
}

impl DotAccumulator {
    fn add_product(&mut self, x: &ExactRatio, y: &ExactRatio) {
        if x.is_zero() || y.is_zero() {
            return;
        }
        if x.is_integer() && y.is_integer() {
            self.integral += x.numer() * y.numer();
        } else {
            let term = x * y;
            match &mut self.rational {
                Some(acc) => *acc += term,
                None => self.rational = Some(term),
            }
        }
    }

    fn finish(self) -> ExactRatio {
        let int = ExactRatio::from_integer(self.integral);
        match self.rational {
            Some(r) => r + int,
            None => int,
        }
    }
}

/// `φ(u)` to order `N`: `[u^i] = C((i+1)k; k,…,k) / (i+1)!`.
pub fn phi_series(k: u32, order: usize) -> TruncatedSeries {
    assert!(k >= 1);
    TruncatedSeries::from_fn(order, |i| {
        let i = i as u32;
        ratio(block_multinomial(i + 1, k), factorial(i + 1))
    })
}

/// `H(u)` to order `N`: `[u^i] = C(ik; k,…,k) / i!`.
pub fn h_series(k: u32, order: usize) -> TruncatedSeries {
    assert!(k >= 1);
    TruncatedSeries::from_fn(order, |i| {
        let i = i as u32;
        ratio(block_multinomial(i, k), factorial(i))
    })
}

/// `A(z)` together with the table `[z^m] A^i` for `i, m ≤ N`.
struct FixedPoint {
    a: TruncatedSeries,
    /// `powers[i][m] = [z^m] A(z)^i`; zero for `m < i`.
    powers: Vec<Vec<ExactRatio>>,
}

impl FixedPoint {
    /// Coefficient recursion: `a_m = [z^{m−1}] φ(A)` only involves
    /// `a_1 … a_{m−1}`, after which row `m` of every power `A^i` is filled in.
    fn solve(k: u32, order: usize) -> Self {
        let phi = phi_series(k, order);
        let mut powers = vec![vec![ExactRatio::zero(); order + 1]; order + 1];
        powers[0][0] = ExactRatio::one();
        let mut a = vec![ExactRatio::zero(); order + 1];
        for m in 1..=order {
            let mut acc = DotAccumulator::default();
            for (i, row) in powers.iter().enumerate().take(m) {
                acc.add_product(phi.coeff(i), &row[m - 1]);
            }
            a[m] = acc.finish();
            powers[1][m] = a[m].clone();
            for i in 2..=m {
                let mut acc = DotAccumulator::default();
                for j in 1..=m + 1 - i {
                    acc.add_product(&a[j], &powers[i - 1][m - j]);
                }
                powers[i][m] = acc.finish();
            }
        }
        FixedPoint {
            a: TruncatedSeries::from_coeffs(a),
            powers,
        }
    }

    /// `[z^m] f(A)`, `m ≤ N`.
    fn compose_coeff(&self, f: &TruncatedSeries, m: usize) -> ExactRatio {
        let mut acc = DotAccumulator::default();
        for i in 0..=m.min(f.order()) {
            acc.add_product(f.coeff(i), &self.powers[i][m]);
        }
        acc.finish()
    }
}

/// The unique `A` with `A(0) = 0` and `A = z·φ(A)` modulo `z^{N+1}`.
pub fn solve_a(k: u32, order: usize) -> TruncatedSeries {
    FixedPoint::solve(k, order).a
}

/// `A − z·φ(A)`; identically zero for the output of [`solve_a`].
pub fn fixed_point_residual(k: u32, a: &TruncatedSeries) -> TruncatedSeries {
    let phi = phi_series(k, a.order());
    a - &phi.compose(a).shift()
}

/// `C_k(z) = z·H(A(z))` modulo `z^{N+1}`. Every coefficient `[z^{n+1}]`,
/// `n < N`, is asserted to be a positive integer.
pub fn ck_series(k: u32, order: usize) -> TruncatedSeries {
    let fp = FixedPoint::solve(k, order);
    let h = h_series(k, order);
    let c = TruncatedSeries::from_fn(order, |m| {
        if m == 0 {
            ExactRatio::zero()
        } else {
            fp.compose_coeff(&h, m - 1)
        }
    });
    for (m, coeff) in c.coeffs().iter().enumerate().skip(1) {
        assert!(
            coeff.is_integer() && coeff.is_positive(),
            "[z^{m}] C_{k}(z) = {coeff} is not a positive integer"
        );
    }
    c
}

/// `c_0^(k), …, c_{count−1}^(k)` read off a single [`ck_series`] pass.
pub fn hypergraph_catalan_values(k: u32, count: usize) -> Vec<Natural> {
    if count == 0 {
        return Vec::new();
    }
    ck_series(k, count)
        .coeffs()
        .iter()
        .skip(1)
        .map(|c| expect_natural(c, "series coefficient"))
        .collect()
}

/// `c_n^(k) = [z^{n+1}] C_k(z)`.
pub fn hypergraph_catalan_series(n: u32, k: u32) -> Natural {
    let c = ck_series(k, n as usize + 1);
    expect_natural(c.coeff(n as usize + 1), "series coefficient")
}

/// `(1/n) [u^{n−1}] H'(u) φ(u)^n`, with `φ^n` by repeated squaring at order `n − 1`.
pub fn lagrange_extract(n: u32, k: u32) -> Natural {
    assert!(n >= 1 && k >= 1, "Lagrange extraction needs n ≥ 1, k ≥ 1");
    let top = n as usize - 1;
    let phi_n = phi_series(k, top).pow(n);
    let h_prime = h_series(k, top + 1).derivative();
    let mut acc = DotAccumulator::default();
    for i in 0..=top {
        acc.add_product(h_prime.coeff(i), phi_n.coeff(top - i));
    }
    let value = acc.finish() / ExactRatio::from_integer(BigInt::from(n));
    expect_natural(&value, "Lagrange extraction")
}

/// `c^(k)_{j,n}`: k-tours on trees with `n + 1` vertices whose root has degree `j`.
pub fn root_degree_count(n: u32, j: u32, k: u32) -> Result<Natural> {
    if j == 0 || j > n {
        return Err(Error::Domain(format!("root degree {j} outside 1..={n}")));
    }
    Ok(root_degree_slice(n, j, k))
}

/// Bivariate series `Σ_b Σ_a c_{a,b} x^a z^b`, `b ≤ N`, `a ≤ x_degree`, with
/// exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    /// `coeffs[b][a]` is the coefficient of `x^a z^b`.
    coeffs: Vec<Vec<ExactRatio>>,
}

impl BiSeries {
    pub fn zero(z_order: usize, x_degree: usize) -> Self {
        BiSeries {
            coeffs: vec![vec![ExactRatio::zero(); x_degree + 1]; z_order + 1],
        }
    }

    pub fn z_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn x_degree(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, x_deg: usize, z_deg: usize) -> &ExactRatio {
        &self.coeffs[z_deg][x_deg]
    }

    pub fn set(&mut self, x_deg: usize, z_deg: usize, value: ExactRatio) {
        self.coeffs[z_deg][x_deg] = value;
    }

    /// `C_k(x, z) = Σ c^(k)_{j,n} x^{kj} / (kj)! · z^{n+1}` over `n < N`, with
    /// x-degrees above `x_degree` dropped.
    pub fn tour_generating_function(k: u32, z_order: usize, x_degree: usize) -> Self {
        let mut c = Self::zero(z_order, x_degree);
        if z_order >= 1 {
            c.set(0, 1, ExactRatio::one());
        }
        for n in 1..z_order as u32 {
            for j in 1..=n {
                let a = (k * j) as usize;
                if a > x_degree {
                    break;
                }
                let count = root_degree_slice(n, j, k);
                c.set(a, n as usize + 1, ratio(count, factorial(k * j)));
            }
        }
        c
    }

    /// True when every nonzero coefficient sits at an x-degree divisible by `k`.
    pub fn is_graded(&self, k: u32) -> bool {
        self.coeffs.iter().all(|row| {
            row.iter()
                .enumerate()
                .all(|(a, c)| c.is_zero() || a % k as usize == 0)
        })
    }
}

/// A coefficient of `x^a z^b` on both sides of the functional equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub x_degree: usize,
    pub z_degree: usize,
    pub lhs: ExactRatio,
    pub rhs: ExactRatio,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x^{} z^{}: lhs {} vs rhs {}",
            self.x_degree, self.z_degree, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug)]
pub struct FunctionalEquationReport {
    pub k: u32,
    pub order: usize,
    pub x_degree: usize,
    pub interior_checked: usize,
    pub boundary_checked: usize,
    /// First disagreement among fully determined monomials.
    pub interior_mismatch: Option<Monomial>,
    /// Disagreements caused by the x-degree truncation; tolerated.
    pub boundary_mismatches: Vec<Monomial>,
}

impl FunctionalEquationReport {
    pub fn passed(&self) -> bool {
        self.interior_mismatch.is_none()
    }
}

/// Checks `C_k(x,z) = z·exp((x^k/k!)·𝓛_{t=1}(t^{k−1}/(k−1)! · C_k(t,z)))` on all
/// monomials `x^a z^b`, `b ≤ N`, with `C_k` built from closed-form root-degree
/// counts.
pub fn verify_functional_equation(k: u32, order: usize) -> FunctionalEquationReport {
    verify_functional_equation_truncated(k, order, k as usize * order)
}

/// As [`verify_functional_equation`], but keeping only x-degrees up to
/// `x_degree`. Monomials whose value depends on discarded coefficients are
/// classified as boundary and reported separately.
pub fn verify_functional_equation_truncated(
    k: u32,
    order: usize,
    x_degree: usize,
) -> FunctionalEquationReport {
    assert!(k >= 1 && order >= 2, "need k ≥ 1 and N ≥ 2");
    let lhs = BiSeries::tour_generating_function(k, order, x_degree);
    check_functional_equation(k, &lhs)
}

/// Checks the functional equation for a caller-supplied `C_k(x, z)`.
pub fn check_functional_equation(k: u32, lhs: &BiSeries) -> FunctionalEquationReport {
    let ku = k as usize;
    let order = lhs.z_order();
    let x_degree = lhs.x_degree();

    // 𝓛_{t=1}(t^{k−1}/(k−1)! · C_k(t, z)) = Σ_b z^b Σ_a [x^a z^b] C · (a+k−1)!/(k−1)!.
    let kfact = factorial(k - 1);
    let laplace = TruncatedSeries::from_fn(order, |b| {
        let mut acc = ExactRatio::zero();
        for a in 0..=x_degree {
            let c = lhs.coeff(a, b);
            if !c.is_zero() {
                acc += c * ratio(factorial(a as u32 + k - 1), kfact.clone());
            }
        }
        acc
    });
    // [z^b] of the Laplace series is exact iff every root degree j ≤ b − 1 kept
    // its x^{kj} coefficient.
    let laplace_exact = |b: usize| b == 0 || ku * (b - 1) <= x_degree;

    // z·exp(x^k L / k!): [x^{ki} z^b] = [z^{b−1}] L^i / ((k!)^i i!).
    let mut rhs = BiSeries::zero(order, ku * order);
    let mut power = TruncatedSeries::one(order);
    for i in 0..=order {
        let norm = ratio(Natural::one(), factorial(k).pow(i as u32) * factorial(i as u32));
        for b in 1..=order {
            let v = power.coeff(b - 1) * &norm;
            rhs.set(ku * i, b, v);
        }
        power = &power * &laplace;
    }

    let mut report = FunctionalEquationReport {
        k,
        order,
        x_degree,
        interior_checked: 0,
        boundary_checked: 0,
        interior_mismatch: None,
        boundary_mismatches: Vec::new(),
    };
    for b in 0..=order {
        // [z^{b−1}] L^i touches Laplace coefficients of degree ≤ b − 1.
        let rhs_exact = b == 0 || (1..b).all(laplace_exact);
        for a in 0..=ku * order {
            let l = if a <= x_degree {
                lhs.coeff(a, b).clone()
            } else {
                ExactRatio::zero()
            };
            let r = rhs.coeff(a, b).clone();
            let interior = a <= x_degree && rhs_exact;
            let mismatch = (l != r).then_some(Monomial {
                x_degree: a,
                z_degree: b,
                lhs: l,
                rhs: r,
            });
            if interior {
                report.interior_checked += 1;
                if report.interior_mismatch.is_none() {
                    report.interior_mismatch = mismatch;
                }
            } else {
                report.boundary_checked += 1;
                report.boundary_mismatches.extend(mismatch);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::hypergraph_catalan_closed;
    use crate::combinatorics::catalan;
    use proptest::prelude::*;

    fn int(v: i64) -> ExactRatio {
        ExactRatio::from_integer(BigInt::from(v))
    }

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn phi_coefficients() {
        assert_eq!(ints(&phi_series(1, 6)), vec![1; 7]);
        assert_eq!(ints(&phi_series(2, 3)), vec![1, 3, 15, 105]);
        assert_eq!(phi_series(3, 0).coeff(0), &int(1));
    }

    #[test]
    fn h_coefficients() {
        for k in 1..=5 {
            assert_eq!(h_series(k, 2).coeff(0), &int(1));
        }
        assert_eq!(ints(&h_series(2, 3)), vec![1, 1, 3, 15]);
        assert_eq!(ints(&h_series(1, 6)), vec![1; 7]);
    }

    #[test]
    fn fixed_point_k2() {
        let a = solve_a(2, 3);
        assert_eq!(ints(&a), vec![0, 1, 3, 24]);
        for k in 1..=5 {
            assert_eq!(solve_a(k, 4).coeff(1), &int(1));
        }
    }

    #[test]
    fn fixed_point_residual_vanishes() {
        for k in 1..=4 {
            let a = solve_a(k, 12);
            assert!(fixed_point_residual(k, &a).is_zero(), "k = {k}");
        }
        let mut bad = solve_a(2, 6);
        bad.coeffs[4] += int(1);
        assert!(!fixed_point_residual(2, &bad).is_zero());
    }

    #[test]
    fn ck_coefficients() {
        for k in 1..=5 {
            assert_eq!(ck_series(k, 3).coeff(1), &int(1));
        }
        let c = ck_series(2, 4);
        assert_eq!(ints(&c)[2..], [1, 6, 57]);
        let values = hypergraph_catalan_values(1, 51);
        for (n, v) in values.iter().enumerate() {
            assert_eq!(v, &catalan(n as u32));
        }
    }

    #[test]
    fn lagrange_small() {
        for k in 1..=6 {
            assert_eq!(lagrange_extract(1, k), Natural::from(1u32));
        }
        assert_eq!(lagrange_extract(2, 2), Natural::from(6u32));
        assert_eq!(lagrange_extract(3, 3), hypergraph_catalan_closed(3, 3));
    }

    #[test]
    fn three_routes_agree() {
        for k in 1..=5 {
            let values = hypergraph_catalan_values(k, 31);
            for (n, v) in values.iter().enumerate().skip(1) {
                let n = n as u32;
                assert_eq!(v, &lagrange_extract(n, k), "lagrange n = {n}, k = {k}");
                assert_eq!(v, &hypergraph_catalan_closed(n, k), "closed n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn root_degree_counts() {
        assert_eq!(root_degree_count(2, 2, 2), Ok(Natural::from(3u32)));
        assert_eq!(root_degree_count(2, 1, 2), Ok(Natural::from(3u32)));
        for k in 1..=4 {
            assert_eq!(root_degree_count(1, 1, k), Ok(Natural::from(1u32)));
        }
        assert!(root_degree_count(3, 0, 2).is_err());
        assert!(root_degree_count(3, 4, 2).is_err());
        for n in 1..=10 {
            for k in 1..=3 {
                let total: Natural = (1..=n).map(|j| root_degree_count(n, j, k).unwrap()).sum();
                assert_eq!(total, hypergraph_catalan_closed(n, k));
            }
        }
    }

    #[test]
    fn functional_equation_holds() {
        for k in 1..=3 {
            let report = verify_functional_equation(k, 6);
            assert!(report.passed(), "k = {k}: {:?}", report.interior_mismatch);
            assert!(report.boundary_mismatches.is_empty());
            assert_eq!(report.boundary_checked, 0);
            assert!(report.interior_checked > 0);
        }
    }

    #[test]
    fn single_edge_monomial() {
        for k in 1..=4 {
            let c = BiSeries::tour_generating_function(k, 6, 6 * k as usize);
            let expected = ratio(Natural::one(), factorial(k));
            assert_eq!(c.coeff(k as usize, 2), &expected);
            assert!(c.is_graded(k));
        }
    }

    #[test]
    fn laplace_transform_of_tour_series_is_fixed_point() {
        // 𝓛(t^{k−1}/(k−1)! C_k(t, z)) is the same A(z) as the fixed point.
        for k in 1..=3 {
            let order = 7;
            let c = BiSeries::tour_generating_function(k, order, k as usize * order);
            let a = TruncatedSeries::from_fn(order - 1, |b| {
                (0..=c.x_degree())
                    .map(|x| c.coeff(x, b) * ratio(factorial(x as u32 + k - 1), factorial(k - 1)))
                    .sum()
            });
            assert_eq!(a, solve_a(k, order - 1), "k = {k}");
        }
    }

    #[test]
    fn truncated_x_degree_only_breaks_boundary() {
        let report = verify_functional_equation_truncated(2, 6, 6);
        assert!(report.passed(), "{:?}", report.interior_mismatch);
        assert!(report.boundary_checked > 0);
        assert!(!report.boundary_mismatches.is_empty());
    }

    #[test]
    fn corrupted_coefficient_is_caught() {
        let k = 2;
        let order = 5;
        let mut c = BiSeries::tour_generating_function(k, order, k as usize * order);
        let bumped = c.coeff(4, 4) + int(1);
        c.set(4, 4, bumped);
        let report = check_functional_equation(k, &c);
        let m = report.interior_mismatch.expect("mismatch expected");
        assert!(m.z_degree <= 5);
    }

    #[test]
    fn series_basics() {
        let one = TruncatedSeries::one(5);
        let z = TruncatedSeries::variable(5);
        let geo = TruncatedSeries::from_fn(5, |_| int(1));
        // (1 − z)·Σ z^i = 1.
        assert_eq!(&(&one - &z) * &geo, one);
        assert_eq!(
            geo.pow(2).coeffs(),
            TruncatedSeries::from_fn(5, |i| int(i as i64 + 1)).coeffs()
        );
        assert_eq!(geo.derivative().order(), 4);
        assert_eq!(geo.pow(0), one);
        assert!((&z + &(-&z)).is_zero());
        assert_eq!(z.shift().coeff(2), &int(1));
        assert_eq!(format!("{}", z.truncate(2)), "1·z + O(z^3)");
    }

    fn small_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-5i64..=5, 1i64..=4), order + 1).prop_map(|pairs| {
            TruncatedSeries::from_coeffs(
                pairs
                    .into_iter()
                    .map(|(n, d)| ExactRatio::new(BigInt::from(n), BigInt::from(d)))
                    .collect(),
            )
        })
    }

    fn without_constant(s: TruncatedSeries) -> TruncatedSeries {
        let mut c = s.coeffs().to_vec();
        c[0] = ExactRatio::zero();
        TruncatedSeries::from_coeffs(c)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplication_is_associative(s in small_series(10), t in small_series(10), u in small_series(10)) {
            prop_assert_eq!(&(&s * &t) * &u, &s * &(&t * &u));
        }

        #[test]
        fn multiplication_matches_naive(s in small_series(8), t in small_series(8)) {
            let naive = TruncatedSeries::from_fn(8, |r| (0..=r).map(|i| s.coeff(i) * t.coeff(r - i)).sum());
            prop_assert_eq!(&s * &t, naive);
        }

        #[test]
        fn composition_is_associative(
            f in small_series(10),
            g in small_series(10).prop_map(without_constant),
            h in small_series(10).prop_map(without_constant),
        ) {
            prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        }

        #[test]
        fn pow_matches_repeated_product(s in small_series(6), e in 0u32..6) {
            let mut expected = TruncatedSeries::one(6);
            for _ in 0..e {
                expected = &expected * &s;
            }
            prop_assert_eq!(s.pow(e), expected);
        }
    }
}
