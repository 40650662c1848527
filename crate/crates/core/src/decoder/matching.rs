//! Exact minimum-weight perfect matching on detector graphs.
//!
//! A detector graph has `k` real nodes (flagged ancillas) and, optionally, one
//! virtual node per real node standing for the nearest lattice boundary.
//! Virtual nodes are joined to each other at weight 0 and each one only to
//! its own real node, so any perfect matching is a choice, for every real
//! node, of either a real partner or its own boundary. The solver runs a
//! subset DP over the real nodes, which is exact for that structure and for
//! plain complete graphs (no virtual nodes).

use serde::Serialize;

use crate::error::{QecError, Result};

/// Largest number of real nodes the subset DP accepts.
pub const MAX_DETECTORS: usize = 24;

/// Unreachable edge weight.
pub const NO_EDGE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetectorGraph {
    /// Symmetric real-to-real weights; [`NO_EDGE`] for missing edges.
    pub weights: Vec<Vec<u32>>,
    /// Weight from each real node to its virtual twin, `None` if it has none.
    pub boundary: Vec<Option<u32>>,
}

impl DetectorGraph {
    pub fn complete(weights: Vec<Vec<u32>>) -> Self {
        let k = weights.len();
        DetectorGraph {
            weights,
            boundary: vec![None; k],
        }
    }

    pub fn real_count(&self) -> usize {
        self.weights.len()
    }

    /// Real plus virtual nodes.
    pub fn node_count(&self) -> usize {
        self.real_count() + self.boundary.iter().filter(|b| b.is_some()).count()
    }

    /// Index of the virtual twin of real node `i` in the full node list.
    /// Virtual nodes follow the real ones, in the order of their twins.
    pub fn virtual_of(&self, i: usize) -> Option<usize> {
        self.boundary[i]?;
        let before = self.boundary[..i].iter().filter(|b| b.is_some()).count();
        Some(self.real_count() + before)
    }

    /// Weight between any two nodes of the full graph.
    pub fn weight(&self, a: usize, b: usize) -> u32 {
        let k = self.real_count();
        let twin = |v: usize| (0..k).find(|&i| self.virtual_of(i) == Some(v));
        match (a < k, b < k) {
            (true, true) => self.weights[a][b],
            (false, false) => 0,
            (true, false) => match twin(b) {
                Some(i) if i == a => self.boundary[a].unwrap_or(NO_EDGE),
                _ => NO_EDGE,
            },
            (false, true) => self.weight(b, a),
        }
    }
}

/// A perfect matching of the full node list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// Node pairs `(a, b)` with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: u64,
}

#[derive(Clone, Copy)]
enum Choice {
    Pair(u8),
    Boundary,
}

/// Exact minimum-weight perfect matching.
///
/// Ties resolve toward the lexicographically least pairing: the lowest
/// unmatched real node tries real partners in ascending order before its
/// boundary, and only a strictly cheaper option replaces an earlier one.
pub fn min_weight_perfect_matching(graph: &DetectorGraph) -> Result<Matching> {
    let k = graph.real_count();
    if graph.boundary.len() != k || graph.weights.iter().any(|r| r.len() != k) {
        return Err(QecError::Invariant("malformed detector graph".into()));
    }
    if k > MAX_DETECTORS {
        return Err(QecError::DecoderCapExceeded { detectors: k });
    }
    if graph.node_count() % 2 == 1 {
        return Err(QecError::Invariant(format!(
            "detector graph has an odd node count ({})",
            graph.node_count()
        )));
    }
    const INF: u64 = u64::MAX;
    let full = (1usize << k) - 1;
    let mut cost = vec![INF; 1 << k];
    let mut choice = vec![Choice::Boundary; 1 << k];
    cost[0] = 0;
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = INF;
        let mut pick = Choice::Boundary;
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let w = graph.weights[i][j];
            let sub = cost[rest & !(1 << j)];
            if w != NO_EDGE && sub != INF && (w as u64) + sub < best {
                best = w as u64 + sub;
                pick = Choice::Pair(j as u8);
            }
        }
        if let Some(w) = graph.boundary[i] {
            let sub = cost[rest];
            if w != NO_EDGE && sub != INF && (w as u64) + sub < best {
                best = w as u64 + sub;
                pick = Choice::Boundary;
            }
        }
        cost[mask] = best;
        choice[mask] = pick;
    }
    if cost[full] == INF {
        return Err(QecError::Invariant("detector graph has no perfect matching".into()));
    }

    let mut pairs = Vec::with_capacity(graph.node_count() / 2);
    let mut free_virtual = Vec::new();
    let mut mask = full;
    let mut at_boundary = vec![false; k];
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        match choice[mask] {
            Choice::Pair(j) => {
                let j = j as usize;
                pairs.push((i, j));
                mask &= !(1 << i) & !(1 << j);
            }
            Choice::Boundary => {
                at_boundary[i] = true;
                mask &= !(1 << i);
            }
        }
    }
    for i in 0..k {
        if let Some(v) = graph.virtual_of(i) {
            if at_boundary[i] {
                pairs.push((i, v));
            } else {
                free_virtual.push(v);
            }
        }
    }
    for chunk in free_virtual.chunks(2) {
        pairs.push((chunk[0], chunk[1]));
    }
    pairs.sort_unstable();
    Ok(Matching {
        pairs,
        total_weight: cost[full],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes() {
        let g = DetectorGraph::complete(vec![vec![0, 5], vec![5, 0]]);
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.total_weight, 5);
    }

    #[test]
    fn four_nodes_unique_optimum() {
        // A B C D with AB=1 CD=1 and every other edge 2
        let w = vec![
            vec![0, 1, 2, 2],
            vec![1, 0, 2, 2],
            vec![2, 2, 0, 1],
            vec![2, 2, 1, 0],
        ];
        let m = min_weight_perfect_matching(&DetectorGraph::complete(w)).unwrap();
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(m.total_weight, 2);
    }

    #[test]
    fn odd_node_count_is_an_invariant_violation() {
        let g = DetectorGraph::complete(vec![vec![0; 3]; 3]);
        assert!(matches!(
            min_weight_perfect_matching(&g),
            Err(QecError::Invariant(_))
        ));
    }

    #[test]
    fn virtual_nodes_make_odd_sets_feasible() {
        let g = DetectorGraph {
            weights: vec![vec![0, 3, 1], vec![3, 0, 2], vec![1, 2, 0]],
            boundary: vec![Some(1), Some(1), Some(2)],
        };
        let m = min_weight_perfect_matching(&g).unwrap();
        // node 1 to its boundary (1) plus 0-2 (1)
        assert_eq!(m.total_weight, 2);
        assert_eq!(m.pairs, vec![(0, 2), (1, 4), (3, 5)]);
        assert_eq!(g.node_count(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let k = MAX_DETECTORS + 2;
        let g = DetectorGraph::complete(vec![vec![1; k]; k]);
        assert!(matches!(
            min_weight_perfect_matching(&g),
            Err(QecError::DecoderCapExceeded { .. })
        ));
    }
}
