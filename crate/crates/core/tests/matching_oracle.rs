mod common;

use common::{brute_force, pairing_is_consistent, random_graph, symmetric};
use qsurf::decoder::matching::{min_weight_perfect_matching, DetectorGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check(g: &DetectorGraph) {
    let m = min_weight_perfect_matching(g).unwrap();
    assert_eq!(Some(m.total_weight), brute_force(g), "{g:?}");
    assert!(pairing_is_consistent(g, &m.pairs, m.total_weight), "{g:?} {m:?}");
}

#[test]
fn random_graphs_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..600 {
        check(&random_graph(&mut rng, case));
    }
}

#[test]
fn boundary_weights_of_zero_are_allowed() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let weights = symmetric(&mut rng, 4, 5);
        check(&DetectorGraph {
            weights,
            boundary: vec![Some(0); 4],
        });
    }
}

#[test]
fn ties_resolve_to_the_same_pairing_every_time() {
    let g = DetectorGraph::complete(vec![vec![1; 6]; 6]);
    let a = min_weight_perfect_matching(&g).unwrap();
    for _ in 0..10 {
        assert_eq!(min_weight_perfect_matching(&g).unwrap(), a);
    }
    assert_eq!(a.pairs, vec![(0, 1), (2, 3), (4, 5)]);
}
