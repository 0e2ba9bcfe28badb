use hypercat::closed_form::{hypergraph_catalan_by_profiles, hypergraph_catalan_closed};
use hypercat::combinatorics::{block_multinomial, factorial, iterate_profiles, tree_count, Natural};
use hypercat::oracle::{brute_force_walks, oracle_by_trees};
use hypercat::series::{hypergraph_catalan_values, lagrange_extract};
use hypercat::verify::{run_suite, Level, Routes};
use proptest::prelude::*;

#[test]
fn closed_form_matches_series_to_moderate_n() {
    for (k, max_n) in [(1, 45), (2, 45), (3, 45), (4, 40), (5, 40)] {
        let series = hypergraph_catalan_values(k, max_n + 1);
        for (n, expected) in series.iter().enumerate() {
            assert_eq!(
                &hypergraph_catalan_closed(n as u32, k),
                expected,
                "n = {n}, k = {k}"
            );
        }
    }
}

#[test]
fn lagrange_matches_series_at_larger_n() {
    for k in 1..=4 {
        let series = hypergraph_catalan_values(k, 121);
        for n in [1, 2, 17, 64, 120] {
            assert_eq!(lagrange_extract(n, k), series[n as usize], "n = {n}, k = {k}");
        }
    }
}

#[test]
fn sequences_for_small_k() {
    let k2: Vec<u64> = hypergraph_catalan_values(2, 6)
        .iter()
        .map(|c| c.try_into().unwrap())
        .collect();
    assert_eq!(k2, [1, 1, 6, 57, 678, 9270]);
    let k3: Vec<u64> = hypergraph_catalan_values(3, 4)
        .iter()
        .map(|c| c.try_into().unwrap())
        .collect();
    assert_eq!(k3[..3], [1, 1, 20]);
    assert_eq!(Natural::from(k3[3]), oracle_by_trees(3, 3));
}

// Departure counts computed from a block multinomial that is off by i! for i ≥ 2.
fn closed_with_bad_multinomial(n: u32, k: u32) -> Natural {
    let departures = |d: u32| {
        let bm = block_multinomial(d, k) + if d >= 2 { factorial(d) } else { Natural::from(0u32) };
        bm / factorial(d)
    };
    if n == 0 {
        return Natural::from(1u32);
    }
    (1..=n)
        .flat_map(|l| iterate_profiles(n, l))
        .map(|p| {
            let mut tours = departures(p.root_degree());
            for (i, c) in p.internal_counts() {
                tours *= departures(i + 1).pow(c);
            }
            tree_count(&p) * tours
        })
        .sum()
}

#[test]
fn mutated_block_multinomial_fails_triple_agreement() {
    assert_ne!(
        closed_with_bad_multinomial(3, 2),
        hypergraph_catalan_by_profiles(3, 2)
    );
    let routes = Routes {
        closed: closed_with_bad_multinomial,
        ..Routes::default()
    };
    let outcomes = run_suite(Level::Quick, &routes);
    let triple = &outcomes[0];
    assert!(!triple.passed);
    assert!(triple.name.starts_with("triple agreement"));
    assert!(triple.detail.contains("n=2 k=1"), "{}", triple.detail);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn walks_trees_and_closed_agree(k in 1u32..=4, n in 0u32..=4) {
        prop_assume!(k * n <= 8);
        let closed = hypergraph_catalan_closed(n, k);
        prop_assert_eq!(&oracle_by_trees(n, k), &closed);
        prop_assert_eq!(&brute_force_walks(n, k).unwrap(), &closed);
    }

    #[test]
    fn values_grow_with_n_and_k(k in 1u32..=5, n in 2u32..=20) {
        let values = hypergraph_catalan_values(k, n as usize + 1);
        prop_assert!(values[n as usize] > values[n as usize - 1]);
        prop_assert!(hypergraph_catalan_closed(n, k + 1) > hypergraph_catalan_closed(n, k));
    }
}
