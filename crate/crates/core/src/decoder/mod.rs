//! Minimum-weight perfect matching decoder for the planar code families.
//!
//! Decoding happens in the CSS frame: the syndrome of an error on an XZZX
//! code equals the syndrome of its Hadamard-conjugate on the underlying CSS
//! code, so the detector graphs are built from sites (X checks) and
//! plaquettes (Z checks) and the correction is conjugated back through the
//! code's Hadamard mask.
//!
//! Edge weights are qubit counts along shortest lattice paths. Shortest paths
//! come from a breadth-first search that expands incident qubits in
//! ascending index order, so the witness path of every edge is fixed.

pub mod matching;

use std::fmt;

use serde::Serialize;

use crate::codes::{AncillaKind, StabilizerCode};
use crate::error::{QecError, Result};
use crate::pauli::{bits, PauliOperator};

pub use matching::{min_weight_perfect_matching, DetectorGraph, Matching, MAX_DETECTORS, NO_EDGE};

/// One bit per generator, in generator order; a set bit is a −1 outcome.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: u64,
    len: usize,
}

impl Syndrome {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len > 64 || (len < 64 && bits >> len != 0) {
            return Err(QecError::InvalidArgument(format!(
                "syndrome bits exceed length {len}"
            )));
        }
        Ok(Syndrome { bits, len })
    }

    pub fn zero(len: usize) -> Self {
        Syndrome { bits: 0, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, g: usize) -> bool {
        self.bits >> g & 1 == 1
    }

    /// Flagged generator indices, ascending.
    pub fn flagged(&self) -> Vec<usize> {
        bits(self.bits).collect()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in 0..self.len {
            f.write_str(if self.get(g) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({self})")
    }
}

impl Serialize for Syndrome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Success,
    LogicalX,
    LogicalZ,
    LogicalY,
}

impl Outcome {
    pub fn is_failure(self) -> bool {
        self != Outcome::Success
    }
}

/// Shortest-path data for one check species.
#[derive(Clone, Debug)]
struct SpeciesGraph {
    kind: AncillaKind,
    /// Generator index of each check.
    checks: Vec<usize>,
    /// Generator index to local check index.
    local: Vec<Option<usize>>,
    dist: Vec<Vec<u32>>,
    path: Vec<Vec<u64>>,
    boundary_dist: Vec<Option<u32>>,
    boundary_path: Vec<u64>,
}

impl SpeciesGraph {
    /// `css` are the CSS-frame generators; the species' checks are those whose
    /// ancilla has type `kind`.
    fn build(code: &StabilizerCode, css: &[PauliOperator], kind: AncillaKind) -> Self {
        let n = code.n;
        let checks: Vec<usize> = code
            .geometry
            .ancillas
            .iter()
            .enumerate()
            .filter(|(_, a)| a.kind == kind)
            .map(|(g, _)| g)
            .collect();
        let mut local = vec![None; css.len()];
        for (l, &g) in checks.iter().enumerate() {
            local[g] = Some(l);
        }
        let support = |g: usize| css[g].support();
        // checks touching each qubit
        let mut on_qubit: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (l, &g) in checks.iter().enumerate() {
            for q in bits(support(g)) {
                on_qubit[q].push(l);
            }
        }
        // adjacency: (qubit, neighbour or boundary), ascending qubit
        let m = checks.len();
        let mut adj: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); m];
        for (q, ls) in on_qubit.iter().enumerate() {
            match ls.as_slice() {
                [a] => adj[*a].push((q, None)),
                [a, b] => {
                    adj[*a].push((q, Some(*b)));
                    adj[*b].push((q, Some(*a)));
                }
                _ => {}
            }
        }

        let mut dist = vec![vec![NO_EDGE; m]; m];
        let mut path = vec![vec![0u64; m]; m];
        let mut boundary_dist = vec![None; m];
        let mut boundary_path = vec![0u64; m];
        for s in 0..m {
            let mut seen = vec![false; m];
            let mut queue = std::collections::VecDeque::new();
            seen[s] = true;
            dist[s][s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = dist[s][u];
                let pu = path[s][u];
                for &(q, nb) in &adj[u] {
                    match nb {
                        None => {
                            if boundary_dist[s].is_none() {
                                boundary_dist[s] = Some(du + 1);
                                boundary_path[s] = pu | 1 << q;
                            }
                        }
                        Some(v) if !seen[v] => {
                            seen[v] = true;
                            dist[s][v] = du + 1;
                            path[s][v] = pu | 1 << q;
                            queue.push_back(v);
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        SpeciesGraph {
            kind,
            checks,
            local,
            dist,
            path,
            boundary_dist,
            boundary_path,
        }
    }

    fn detector_graph(&self, flagged: &[usize]) -> DetectorGraph {
        let weights = flagged
            .iter()
            .map(|&a| flagged.iter().map(|&b| self.dist[a][b]).collect())
            .collect();
        let boundary = flagged.iter().map(|&a| self.boundary_dist[a]).collect();
        DetectorGraph { weights, boundary }
    }

    /// Qubit mask of the chain implied by a matching.
    fn chain(&self, flagged: &[usize], m: &Matching) -> u64 {
        let k = flagged.len();
        m.pairs.iter().fold(0u64, |acc, &(a, b)| {
            if a < k && b < k {
                acc ^ self.path[flagged[a]][flagged[b]]
            } else if a < k {
                acc ^ self.boundary_path[flagged[a]]
            } else {
                acc
            }
        })
    }
}

/// Detector graph and matching for one species, for traces.
#[derive(Clone, Debug, Serialize)]
pub struct SpeciesTrace {
    pub species: AncillaKind,
    /// Ancilla labels of the flagged detectors (`A6`, ...).
    pub detectors: Vec<String>,
    pub graph: DetectorGraph,
    /// Witness path per real-real edge `(a, b, qubits)` with `a < b`.
    pub witness_paths: Vec<(usize, usize, Vec<usize>)>,
    /// Witness path to the boundary for each detector.
    pub boundary_paths: Vec<Vec<usize>>,
    pub matching: Matching,
    /// Correction chain contributed by this species, 0-based qubits.
    pub chain: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeTrace {
    pub code: String,
    pub syndrome: Syndrome,
    pub species: Vec<SpeciesTrace>,
    pub correction: PauliOperator,
}

/// Decoder over one immutable code. `decode` takes `&self`, so one instance
/// can serve any number of threads.
#[derive(Clone, Debug)]
pub struct MatchingDecoder {
    code: StabilizerCode,
    /// Syndrome bits flipped by an X (resp. Z) on each qubit.
    flip_x: Vec<u64>,
    flip_z: Vec<u64>,
    species: [SpeciesGraph; 2],
}

impl MatchingDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let m = code.generators.len();
        if m > 64 {
            return Err(QecError::TooManyQubits(m));
        }
        if code.geometry.ancillas.len() != m {
            return Err(QecError::InvalidArgument(
                "geometry does not list one ancilla per generator".into(),
            ));
        }
        let css = code.css_generators();
        for (g, (c, a)) in css.iter().zip(&code.geometry.ancillas).enumerate() {
            let pure = match a.kind {
                AncillaKind::Site => c.z_mask() == 0,
                AncillaKind::Plaquette => c.x_mask() == 0,
            };
            if !pure {
                return Err(QecError::InvalidArgument(format!(
                    "A{} is not a pure check in the CSS frame",
                    g + 1
                )));
            }
        }
        let n = code.n;
        let mut flip_x = vec![0u64; n];
        let mut flip_z = vec![0u64; n];
        for (g, gen) in code.generators.iter().enumerate() {
            for q in bits(gen.z_mask()) {
                flip_x[q] |= 1 << g;
            }
            for q in bits(gen.x_mask()) {
                flip_z[q] |= 1 << g;
            }
        }
        let species = [
            SpeciesGraph::build(code, &css, AncillaKind::Site),
            SpeciesGraph::build(code, &css, AncillaKind::Plaquette),
        ];
        Ok(MatchingDecoder {
            code: code.clone(),
            flip_x,
            flip_z,
            species,
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    fn check_error(&self, error: &PauliOperator) -> Result<()> {
        if error.n() != self.code.n {
            return Err(QecError::DimensionMismatch {
                expected: self.code.n,
                found: error.n(),
            });
        }
        Ok(())
    }

    pub fn extract_syndrome(&self, error: &PauliOperator) -> Result<Syndrome> {
        self.check_error(error)?;
        Ok(self.syndrome_unchecked(error))
    }

    #[inline]
    fn syndrome_unchecked(&self, error: &PauliOperator) -> Syndrome {
        let mut s = 0u64;
        for q in bits(error.x_mask()) {
            s ^= self.flip_x[q];
        }
        for q in bits(error.z_mask()) {
            s ^= self.flip_z[q];
        }
        Syndrome {
            bits: s,
            len: self.code.generators.len(),
        }
    }

    fn flagged_local(&self, sp: &SpeciesGraph, syndrome: &Syndrome) -> Vec<usize> {
        bits(syndrome.bits)
            .filter_map(|g| sp.local[g])
            .collect()
    }

    fn check_syndrome(&self, syndrome: &Syndrome) -> Result<()> {
        if syndrome.len != self.code.generators.len() {
            return Err(QecError::DimensionMismatch {
                expected: self.code.generators.len(),
                found: syndrome.len,
            });
        }
        Ok(())
    }

    /// Correction whose syndrome equals `syndrome`.
    pub fn decode(&self, syndrome: &Syndrome) -> Result<PauliOperator> {
        self.check_syndrome(syndrome)?;
        let mut x = 0u64;
        let mut z = 0u64;
        for sp in &self.species {
            let flagged = self.flagged_local(sp, syndrome);
            if flagged.is_empty() {
                continue;
            }
            let m = min_weight_perfect_matching(&sp.detector_graph(&flagged))?;
            let chain = sp.chain(&flagged, &m);
            match sp.kind {
                // X checks see Z errors
                AncillaKind::Site => z ^= chain,
                AncillaKind::Plaquette => x ^= chain,
            }
        }
        let css = PauliOperator::from_masks(self.code.n, x, z)?;
        Ok(css.hadamard(self.code.hadamard_mask))
    }

    /// [`decode`](Self::decode) with the detector graphs and matchings.
    pub fn decode_with_trace(&self, syndrome: &Syndrome) -> Result<DecodeTrace> {
        self.check_syndrome(syndrome)?;
        let mut species = Vec::new();
        let mut x = 0u64;
        let mut z = 0u64;
        for sp in &self.species {
            let flagged = self.flagged_local(sp, syndrome);
            let graph = sp.detector_graph(&flagged);
            let matching = min_weight_perfect_matching(&graph)?;
            let chain = sp.chain(&flagged, &matching);
            match sp.kind {
                AncillaKind::Site => z ^= chain,
                AncillaKind::Plaquette => x ^= chain,
            }
            let mut witness_paths = Vec::new();
            for a in 0..flagged.len() {
                for b in a + 1..flagged.len() {
                    let p = sp.path[flagged[a]][flagged[b]];
                    witness_paths.push((a, b, bits(p).collect()));
                }
            }
            species.push(SpeciesTrace {
                species: sp.kind,
                detectors: flagged
                    .iter()
                    .map(|&l| StabilizerCode::ancilla_label(sp.checks[l]))
                    .collect(),
                boundary_paths: flagged
                    .iter()
                    .map(|&l| bits(sp.boundary_path[l]).collect())
                    .collect(),
                graph,
                witness_paths,
                matching,
                chain: bits(chain).collect(),
            });
        }
        let correction =
            PauliOperator::from_masks(self.code.n, x, z)?.hadamard(self.code.hadamard_mask);
        Ok(DecodeTrace {
            code: self.code.name.clone(),
            syndrome: *syndrome,
            species,
            correction,
        })
    }

    /// Residual-coset test of `error · correction`.
    pub fn classify_failure(
        &self,
        error: &PauliOperator,
        correction: &PauliOperator,
    ) -> Result<Outcome> {
        self.check_error(error)?;
        self.check_error(correction)?;
        let residual = error.mul_unchecked(correction);
        if !self.syndrome_unchecked(&residual).is_trivial() {
            return Err(QecError::Invariant(
                "correction does not resolve the syndrome".into(),
            ));
        }
        Ok(self.residual_outcome(&residual))
    }

    #[inline]
    fn residual_outcome(&self, residual: &PauliOperator) -> Outcome {
        let flips_x = residual.anticommutes_unchecked(&self.code.logical_z);
        let flips_z = residual.anticommutes_unchecked(&self.code.logical_x);
        match (flips_x, flips_z) {
            (false, false) => Outcome::Success,
            (true, false) => Outcome::LogicalX,
            (false, true) => Outcome::LogicalZ,
            (true, true) => Outcome::LogicalY,
        }
    }

    /// Syndrome, decode and classify in one step.
    pub fn run(&self, error: &PauliOperator) -> Result<Outcome> {
        self.check_error(error)?;
        let s = self.syndrome_unchecked(error);
        let c = self.decode(&s)?;
        let residual = error.mul_unchecked(&c);
        debug_assert!(self.syndrome_unchecked(&residual).is_trivial());
        Ok(self.residual_outcome(&residual))
    }
}

/// Free-function form of [`MatchingDecoder::extract_syndrome`].
pub fn extract_syndrome(code: &StabilizerCode, error: &PauliOperator) -> Result<Syndrome> {
    MatchingDecoder::new(code)?.extract_syndrome(error)
}
