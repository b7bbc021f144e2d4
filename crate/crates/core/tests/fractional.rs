mod common;

use equiquot::fraciso::{fraciso_witness, fractionally_isomorphic, verify_fraciso_witness};
use equiquot::quotient::quotient;
use equiquot::refine::enumerate_equitable;
use equiquot::{Graph, Rational};
use proptest::prelude::*;

/// Coarsest quotient with absolute cell sizes, by brute force.
fn oracle(g: &Graph<Rational>) -> Vec<Rational> {
    let parts = enumerate_equitable(g.adj(), 8, 0.0).unwrap();
    let top = parts.iter().min_by_key(|p| p.len()).unwrap();
    let b = quotient(g.adj(), top, 0.0).unwrap();
    // Sizes relative to 1 keep them absolute.
    common::quotient_canon(&b.mat, &b.cell_sizes, 1)
}

#[test]
fn decision_matches_brute_force_on_small_graphs() {
    for n in 1..=6 {
        let graphs = common::connected_graphs(n);
        // Also a few disconnected graphs: unions of smaller connected ones.
        let keys: Vec<_> = graphs.iter().map(oracle).collect();
        for i in 0..graphs.len() {
            for j in i..graphs.len() {
                let iso = fractionally_isomorphic(graphs[i].adj(), graphs[j].adj(), 0.0).unwrap();
                assert_eq!(iso.isomorphic, keys[i] == keys[j], "n = {n}, pair ({i}, {j})");
                if iso.isomorphic {
                    let m = fraciso_witness(graphs[i].adj(), graphs[j].adj(), 0.0).unwrap();
                    assert!(verify_fraciso_witness(graphs[i].adj(), graphs[j].adj(), &m, 0.0).unwrap());
                }
            }
        }
    }
}

#[test]
fn regular_graphs_of_equal_degree_are_fractionally_isomorphic() {
    use equiquot::families::*;
    let c6 = cycle::<Rational>(6);
    let prism = circulant::<Rational>(6, &[1, 3]);
    let k33 = complete_bipartite::<Rational>(3, 3);
    assert!(fractionally_isomorphic(prism.adj(), k33.adj(), 0.0).unwrap().isomorphic);
    assert!(!fractionally_isomorphic(c6.adj(), k33.adj(), 0.0).unwrap().isomorphic);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isomorphic_graphs_are_fractionally_isomorphic(n in 1usize..=8, p in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::erdos_renyi(&mut rng, n, p);
        let perm = common::random_permutation(&mut rng, n);
        let h = g.relabeled(&perm).unwrap();
        let m = fraciso_witness(g.adj(), h.adj(), 0.0).unwrap();
        prop_assert!(verify_fraciso_witness(g.adj(), h.adj(), &m, 0.0).unwrap());
        let mf = m.to_f64();
        prop_assert!(verify_fraciso_witness(g.to_real().adj(), h.to_real().adj(), &mf, 1e-12).unwrap());
    }

    #[test]
    fn random_pairs_agree_with_brute_force(n in 2usize..=8, p in 0.0f64..1.0, q in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::erdos_renyi(&mut rng, n, p);
        let h = common::erdos_renyi(&mut rng, n, q);
        let iso = fractionally_isomorphic(g.adj(), h.adj(), 0.0).unwrap();
        prop_assert_eq!(iso.isomorphic, oracle(&g) == oracle(&h));
    }
}
