//! Exact combinatorial primitives shared by every counting route.
//!
//! All counts are [`Natural`]s; intermediate rational weights are
//! [`ExactRatio`]s, which `num-rational` keeps in lowest terms with a positive
//! denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Arbitrary-precision rational in lowest terms.
pub type ExactRatio = BigRational;

fn factorial_table() -> &'static RwLock<Vec<Natural>> {
    static TABLE: OnceLock<RwLock<Vec<Natural>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Natural::one()]))
}

/// `n!`, memoized. The table grows on demand and is shared between threads.
pub fn factorial(n: u32) -> Natural {
    let idx = n as usize;
    {
        let table = factorial_table().read().expect("factorial table poisoned");
        if let Some(v) = table.get(idx) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().expect("factorial table poisoned");
    while table.len() <= idx {
        let next = table.last().unwrap() * Natural::from(table.len());
        table.push(next);
    }
    table[idx].clone()
}

/// Multinomial coefficient with `i` equal blocks of size `k`: `(ik)! / (k!)^i`.
pub fn block_multinomial(i: u32, k: u32) -> Natural {
    assert!(k >= 1, "block size must be positive");
    let (q, r) = factorial(i * k).div_rem(&factorial(k).pow(i));
    debug_assert!(r.is_zero());
    q
}

/// Binomial coefficient `C(n, r)`; zero when `r > n`.
pub fn binomial(n: u32, r: u32) -> Natural {
    if r > n {
        return Natural::zero();
    }
    factorial(n) / (factorial(r) * factorial(n - r))
}

/// The n-th Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> Natural {
    binomial(2 * n, n) / Natural::from(n + 1)
}

/// Converts an integral rational to a [`Natural`].
///
/// Panics if the value is negative or has a nontrivial denominator; callers use
/// this where integrality is a proven invariant.
pub(crate) fn expect_natural(value: &ExactRatio, what: &str) -> Natural {
    assert!(value.is_integer(), "{what}: expected an integer, got {value}");
    value
        .to_integer()
        .to_biguint()
        .unwrap_or_else(|| panic!("{what}: expected a nonnegative value, got {value}"))
}

pub(crate) fn ratio(num: Natural, den: Natural) -> ExactRatio {
    ExactRatio::new(BigInt::from(num), BigInt::from(den))
}

/// One element of the index set `T_n(ℓ)`: a root degree together with the
/// number of non-root vertices having each child count.
///
/// Only the counts for `i ≥ 1` are stored; the number of leaves `n_0` follows
/// from `Σ n_i = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeProfile {
    n: u32,
    root_degree: u32,
    counts: BTreeMap<u32, u32>,
}

impl DegreeProfile {
    /// Builds a profile from the nonzero counts `i ↦ n_i` for `i ≥ 1`.
    ///
    /// Zero entries are dropped. Fails unless `1 ≤ ℓ ≤ n`, `Σ_{i≥1} i·n_i = n − ℓ`
    /// and `Σ_{i≥1} n_i ≤ n`.
    pub fn new(n: u32, root_degree: u32, counts: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if root_degree == 0 || root_degree > n {
            return Err(Error::InvalidProfile(format!(
                "root degree {root_degree} outside 1..={n}"
            )));
        }
        let mut map = BTreeMap::new();
        for (i, c) in counts {
            if i == 0 {
                return Err(Error::InvalidProfile(
                    "n_0 is derived and must not be given".into(),
                ));
            }
            if c > 0 {
                *map.entry(i).or_insert(0) += c;
            }
        }
        let weighted: u64 = map.iter().map(|(&i, &c)| u64::from(i) * u64::from(c)).sum();
        let internal: u64 = map.values().map(|&c| u64::from(c)).sum();
        if weighted != u64::from(n - root_degree) {
            return Err(Error::InvalidProfile(format!(
                "Σ i·n_i = {weighted}, expected n − ℓ = {}",
                n - root_degree
            )));
        }
        if internal > u64::from(n) {
            return Err(Error::InvalidProfile(format!(
                "{internal} internal vertices exceed n = {n}"
            )));
        }
        Ok(DegreeProfile {
            n,
            root_degree,
            counts: map,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn root_degree(&self) -> u32 {
        self.root_degree
    }

    /// `n_i`, including the derived `n_0`.
    pub fn count(&self, i: u32) -> u32 {
        if i == 0 {
            self.leaves()
        } else {
            self.counts.get(&i).copied().unwrap_or(0)
        }
    }

    /// Number of non-root leaves, `n_0`.
    pub fn leaves(&self) -> u32 {
        self.n - self.counts.values().sum::<u32>()
    }

    /// Nonzero `(i, n_i)` pairs with `i ≥ 1`, ascending in `i`.
    pub fn internal_counts(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }
}

impl fmt::Display for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, ℓ={}, n_0={}", self.n, self.root_degree, self.leaves())?;
        for (i, c) in self.internal_counts() {
            write!(f, ", n_{i}={c}")?;
        }
        write!(f, ")")
    }
}

/// Integer partitions of `total` in reverse-lexicographic order, parts
/// nonincreasing. Yields the single empty partition for `total = 0`.
#[derive(Clone, Debug)]
pub struct Partitions {
    parts: Vec<u32>,
    done: bool,
}

impl Partitions {
    pub fn new(total: u32) -> Self {
        Partitions {
            parts: if total == 0 { Vec::new() } else { vec![total] },
            done: false,
        }
    }

    fn advance(&mut self) {
        let mut ones = 0;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            ones += 1;
        }
        let Some(last) = self.parts.last_mut() else {
            self.done = true;
            return;
        };
        *last -= 1;
        let cap = *last;
        let mut rest = ones + 1;
        while rest > 0 {
            let part = rest.min(cap);
            self.parts.push(part);
            rest -= part;
        }
    }
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let current = self.parts.clone();
        self.advance();
        Some(current)
    }
}

/// Streams `T_n(ℓ)`: one profile per partition of `n − ℓ`, where a part of
/// size `i` is a non-root vertex with `i` children.
pub fn iterate_profiles(n: u32, root_degree: u32) -> impl Iterator<Item = DegreeProfile> {
    assert!(
        (1..=n).contains(&root_degree),
        "root degree {root_degree} outside 1..={n}"
    );
    Partitions::new(n - root_degree).map(move |parts| {
        let mut counts = BTreeMap::new();
        for p in parts {
            *counts.entry(p).or_insert(0) += 1;
        }
        DegreeProfile {
            n,
            root_degree,
            counts,
        }
    })
}

/// Number of rooted plane trees with the given degree profile:
/// `(ℓ / n) · n! / (n_0! n_1! ⋯)`.
pub fn tree_count(profile: &DegreeProfile) -> Natural {
    let n = profile.n();
    let mut den = factorial(profile.leaves()) * Natural::from(n);
    for (_, c) in profile.internal_counts() {
        den *= factorial(c);
    }
    let num = factorial(n) * Natural::from(profile.root_degree());
    expect_natural(&ratio(num, den), "tree_count")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition_count(n: u32) -> u64 {
        let n = n as usize;
        let mut p = vec![0u64; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                p[total] += p[total - part];
            }
        }
        p[n]
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), Natural::from(1u32));
        assert_eq!(factorial(5), Natural::from(120u32));
        assert_eq!(factorial(20), Natural::from(2432902008176640000u64));
        let mut acc = Natural::one();
        for i in 1..=60u32 {
            acc *= i;
            assert_eq!(factorial(i), acc);
        }
    }

    #[test]
    fn block_multinomial_values() {
        assert_eq!(block_multinomial(0, 3), Natural::from(1u32));
        assert_eq!(block_multinomial(2, 2), Natural::from(6u32));
        assert_eq!(block_multinomial(3, 2), Natural::from(90u32));
        for i in 0..=6 {
            for k in 1..=5 {
                assert_eq!(block_multinomial(i, k) * factorial(k).pow(i), factorial(i * k));
            }
        }
    }

    #[test]
    fn catalan_values() {
        let expected = [1u32, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(catalan(n as u32), Natural::from(c));
        }
    }

    #[test]
    fn forced_profiles() {
        let p: Vec<_> = iterate_profiles(2, 2).collect();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].count(0), p[0].count(1)), (2, 0));

        let p: Vec<_> = iterate_profiles(2, 1).collect();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].count(0), p[0].count(1)), (1, 1));
    }

    #[test]
    fn profiles_of_n4_root1() {
        let got: Vec<Vec<(u32, u32)>> = iterate_profiles(4, 1)
            .map(|p| (0..4).map(|i| (i, p.count(i))).filter(|&(_, c)| c > 0).collect())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![(0, 3), (3, 1)],
                vec![(0, 2), (1, 1), (2, 1)],
                vec![(0, 1), (1, 3)],
            ]
        );
    }

    #[test]
    fn profile_stream_length_matches_partition_count() {
        for n in 1..=14 {
            for l in 1..=n {
                let profiles: Vec<_> = iterate_profiles(n, l).collect();
                assert_eq!(profiles.len() as u64, partition_count(n - l));
                for p in &profiles {
                    let total: u32 = (0..n).map(|i| p.count(i)).sum();
                    let weighted: u32 = (0..n).map(|i| i * p.count(i)).sum();
                    assert_eq!(total, n);
                    assert_eq!(weighted, n - l);
                    assert_eq!(DegreeProfile::new(n, l, p.internal_counts()).as_ref(), Ok(p));
                }
            }
        }
    }

    #[test]
    fn tree_count_examples() {
        let star = DegreeProfile::new(2, 2, []).unwrap();
        assert_eq!(tree_count(&star), Natural::from(1u32));
        let path = DegreeProfile::new(2, 1, [(1, 1)]).unwrap();
        assert_eq!(tree_count(&path), Natural::from(1u32));
        let p = DegreeProfile::new(3, 2, [(1, 1)]).unwrap();
        assert_eq!(p.leaves(), 2);
        assert_eq!(tree_count(&p), Natural::from(2u32));
    }

    #[test]
    fn tree_counts_sum_to_catalan() {
        for n in 1..=12 {
            let total: Natural = (1..=n)
                .flat_map(|l| iterate_profiles(n, l))
                .map(|p| tree_count(&p))
                .sum();
            assert_eq!(total, catalan(n), "n = {n}");
        }
    }

    #[test]
    fn invalid_profiles_rejected() {
        assert!(DegreeProfile::new(3, 0, []).is_err());
        assert!(DegreeProfile::new(3, 4, []).is_err());
        assert!(DegreeProfile::new(3, 1, [(1, 1)]).is_err());
        assert!(DegreeProfile::new(3, 1, [(0, 1), (2, 1)]).is_err());
    }

    #[test]
    fn factorial_table_is_thread_safe() {
        let handles: Vec<_> = (0..4)
            .map(|t| std::thread::spawn(move || factorial(200 + 50 * t)))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            let v = h.join().unwrap();
            assert_eq!(
                v,
                (1..=200 + 50 * t as u32).map(Natural::from).product::<Natural>()
            );
        }
    }
}
