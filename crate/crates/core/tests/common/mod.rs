#![allow(dead_code)]

use qsurf::decoder::matching::{DetectorGraph, NO_EDGE};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Minimum over all (m−1)!! perfect matchings of the full node set.
pub fn brute_force(g: &DetectorGraph) -> Option<u64> {
    fn go(g: &DetectorGraph, free: &mut Vec<usize>) -> Option<u64> {
        if free.is_empty() {
            return Some(0);
        }
        let a = free.remove(0);
        let mut best: Option<u64> = None;
        for idx in 0..free.len() {
            let b = free.remove(idx);
            let w = g.weight(a, b);
            if w != NO_EDGE {
                if let Some(rest) = go(g, free) {
                    let c = w as u64 + rest;
                    best = Some(best.map_or(c, |x| x.min(c)));
                }
            }
            free.insert(idx, b);
        }
        free.insert(0, a);
        best
    }
    go(g, &mut (0..g.node_count()).collect())
}

pub fn symmetric(rng: &mut ChaCha8Rng, k: usize, max_w: u32) -> Vec<Vec<u32>> {
    let mut w = vec![vec![0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let x = rng.gen_range(1..=max_w);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    w
}

/// Random graph with at most 10 nodes: plain complete graphs on even `m`,
/// or `k ≤ 5` real nodes each with its own boundary twin.
pub fn random_graph(rng: &mut ChaCha8Rng, case: usize) -> DetectorGraph {
    let max_w = if case % 2 == 0 { 3 } else { 40 };
    if case % 3 == 0 {
        let k = rng.gen_range(1..=5);
        let weights = symmetric(rng, k, max_w);
        let boundary = (0..k).map(|_| Some(rng.gen_range(0..=max_w))).collect();
        DetectorGraph { weights, boundary }
    } else {
        let m = 2 * rng.gen_range(1..=5);
        DetectorGraph::complete(symmetric(rng, m, max_w))
    }
}

/// Checks the pairing is perfect and its weight matches the total.
pub fn pairing_is_consistent(g: &DetectorGraph, pairs: &[(usize, usize)], total: u64) -> bool {
    let mut seen = vec![false; g.node_count()];
    let mut sum = 0u64;
    for &(a, b) in pairs {
        if a >= b || b >= seen.len() || seen[a] || seen[b] {
            return false;
        }
        seen[a] = true;
        seen[b] = true;
        sum += g.weight(a, b) as u64;
    }
    seen.iter().all(|&s| s) && sum == total
}
