//! Exact evaluation of `c_n^(k)` as a sum over root degrees and degree profiles.
//!
//! A k-tour on a rooted plane tree is determined by the order in which it leaves
//! each vertex. A vertex of degree `d` is left `kd` times, and the number of
//! admissible departure orders is the number of ways to split `kd` slots into
//! `d` unordered blocks of size `k`. Multiplying over vertices and weighting by
//! the number of plane trees sharing a degree profile gives the count.

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    block_multinomial, factorial, iterate_profiles, tree_count, DegreeProfile, Natural,
};

/// `(kd)! / ((k!)^d · d!)`: departure orders at a vertex of degree `d`.
pub fn departure_count(d: u32, k: u32) -> Natural {
    let (q, r) = block_multinomial(d, k).div_rem(&factorial(d));
    debug_assert!(r.is_zero());
    q
}

/// Number of k-tours on any one rooted plane tree with this profile.
pub fn tours_on_profile(profile: &DegreeProfile, k: u32) -> Natural {
    let mut tours = departure_count(profile.root_degree(), k);
    for (i, c) in profile.internal_counts() {
        tours *= departure_count(i + 1, k).pow(c);
    }
    tours
}

/// One summand: trees with this profile times tours per tree.
pub fn profile_contribution(profile: &DegreeProfile, k: u32) -> Natural {
    tree_count(profile) * tours_on_profile(profile, k)
}

/// Per-`(n, k)` tables shared by every summand of the profile sum.
struct SumContext {
    /// `departure[d]` for `d ≤ n + 1`.
    departure: Vec<Natural>,
    /// `(n − 1)!`, so that `tree_count = ℓ (n − 1)! / (n_0! n_1! ⋯)`.
    rooted_scale: Natural,
    n: u32,
}

impl SumContext {
    fn new(n: u32, k: u32) -> Self {
        SumContext {
            departure: (0..=n + 1).map(|d| departure_count(d, k)).collect(),
            rooted_scale: factorial(n - 1),
            n,
        }
    }

    /// Sums the contributions of all profiles in `T_n(ℓ)`.
    ///
    /// Partitions of `n − ℓ` are walked depth first with distinct part sizes in
    /// decreasing order; the tour product and factorial denominator of a common
    /// prefix are shared between its completions.
    fn slice(&self, root_degree: u32) -> Natural {
        let mut total = Natural::zero();
        self.descend(
            root_degree,
            self.n - root_degree,
            self.n - root_degree,
            0,
            &self.departure[root_degree as usize],
            &Natural::one(),
            &mut total,
        );
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        root_degree: u32,
        remaining: u32,
        max_part: u32,
        internal: u32,
        tours: &Natural,
        den: &Natural,
        total: &mut Natural,
    ) {
        if remaining == 0 {
            let leaves = self.n - internal;
            let (trees, r) = (&self.rooted_scale * root_degree).div_rem(&(den * factorial(leaves)));
            debug_assert!(r.is_zero(), "non-integral tree count");
            *total += trees * tours;
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            let weight = &self.departure[part as usize + 1];
            let mut tours = tours.clone();
            let mut den = den.clone();
            for mult in 1..=remaining / part {
                tours *= weight;
                den *= mult;
                self.descend(
                    root_degree,
                    remaining - mult * part,
                    part - 1,
                    internal + mult,
                    &tours,
                    &den,
                    total,
                );
            }
        }
    }
}

/// k-tours on trees with `n + 1` vertices whose root has degree `root_degree`.
pub(crate) fn root_degree_slice(n: u32, root_degree: u32, k: u32) -> Natural {
    assert!((1..=n).contains(&root_degree));
    SumContext::new(n, k).slice(root_degree)
}

/// `c_n^(k)` by the profile sum. `c_0^(k) = 1` (the empty tour).
pub fn hypergraph_catalan_closed(n: u32, k: u32) -> Natural {
    assert!(k >= 1, "k must be positive");
    if n == 0 {
        return Natural::one();
    }
    let ctx = SumContext::new(n, k);
    (1..=n)
        .into_par_iter()
        .map(|l| ctx.slice(l))
        .reduce(Natural::zero, |a, b| a + b)
}

/// The same sum evaluated one profile at a time through [`tree_count`] and
/// [`tours_on_profile`]. Exponentially slower; kept as a reference.
pub fn hypergraph_catalan_by_profiles(n: u32, k: u32) -> Natural {
    if n == 0 {
        return Natural::one();
    }
    (1..=n)
        .flat_map(|l| iterate_profiles(n, l))
        .map(|p| profile_contribution(&p, k))
        .sum()
}
