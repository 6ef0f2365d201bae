mod common;

use common::{adjacency, gcd_all, proper_divisors, subsets};
use icg::gcd_graph::{decompose_components, SymbolSet};
use icg::numtheory::totient;
use icg::{DivisorSet, GcdGraph};
use proptest::prelude::*;

fn ds(n: u64, d: &[u64]) -> DivisorSet {
    DivisorSet::new(n, d).unwrap()
}

#[test]
fn adjacency_matches_gcd_rule_and_is_transitive() {
    for n in 2..=60u64 {
        for d in subsets(n, 3) {
            let g = GcdGraph::build(&ds(n, &d)).unwrap();
            let reference = adjacency(n, &d);
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(g.adjacent(a, b), reference[a as usize][b as usize]);
                    assert_eq!(g.adjacent(a, b), g.adjacent(b, a));
                    for c in [1, n / 2, n - 1] {
                        assert_eq!(g.adjacent(a, b), g.adjacent((a + c) % n, (b + c) % n));
                    }
                }
                assert!(!g.adjacent(a, a));
            }
        }
    }
}

#[test]
fn every_vertex_has_the_predicted_degree() {
    for n in 2..=200u64 {
        for d in subsets(n, 2) {
            let set = ds(n, &d);
            let expected: u64 = d.iter().map(|&x| totient(n / x)).sum();
            let g = GcdGraph::build(&set).unwrap();
            assert!((0..n).all(|v| g.degree(v) as u64 == expected), "{set}");
            assert_eq!(set.degree(), expected);
        }
    }
}

#[test]
fn symbol_sets_are_symmetric() {
    for n in 2..=120u64 {
        for d in subsets(n, 2) {
            let s = SymbolSet::new(&ds(n, &d));
            for x in 1..n {
                assert_eq!(s.contains(x), s.contains(n - x));
            }
        }
    }
}

#[test]
fn component_count_is_gcd_of_divisors() {
    for n in 2..=200u64 {
        for d in subsets(n, 3) {
            let set = ds(n, &d);
            let g = GcdGraph::build(&set).unwrap();
            let found = g.union_find_components();
            assert_eq!(found.len() as u64, gcd_all(&d), "{set}");
            let dec = decompose_components(&set).unwrap();
            assert_eq!(dec.component_count, gcd_all(&d));
        }
    }
}

#[test]
fn components_are_isomorphic_to_the_quotient() {
    for n in 2..=120u64 {
        for d in subsets(n, 3) {
            let set = ds(n, &d);
            let dec = decompose_components(&set).unwrap();
            let g = dec.component_count;
            if g == 1 {
                continue;
            }
            let full = GcdGraph::build(&set).unwrap();
            let quotient = GcdGraph::build(&dec.quotient).unwrap();
            for (r, comp) in dec.components.iter().enumerate() {
                for &u in comp {
                    for &v in comp {
                        let (qu, qv) = ((u - r as u64) / g, (v - r as u64) / g);
                        assert_eq!(full.adjacent(u, v), quotient.adjacent(qu, qv));
                    }
                }
            }
        }
    }
}

#[test]
fn proper_divisor_listing_matches_reference() {
    for n in 2..=500u64 {
        assert_eq!(
            icg::numtheory::divisors_proper(n).unwrap(),
            proper_divisors(n)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_invariance_on_larger_graphs(n in 61u64..600, pick in any::<u64>(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let divs = proper_divisors(n);
        let chosen: Vec<u64> = divs
            .iter()
            .enumerate()
            .filter(|(i, _)| i == &((pick as usize) % divs.len()) || (pick >> (i % 64)) & 1 == 1)
            .map(|(_, &d)| d)
            .collect();
        let g = GcdGraph::build(&ds(n, &chosen)).unwrap();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.adjacent(a, b), g.adjacent((a + c) % n, (b + c) % n));
        prop_assert_eq!(g.adjacent(a, b), g.divisor_set().adjacent(a, b));
    }
}
