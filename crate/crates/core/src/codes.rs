//! Planar code families: surface, rotated surface and their XZZX variants.
//!
//! Qubits and ancillas are numbered row-major over the drawn layout. For the
//! surface code the drawing is the planar lattice itself: data qubits sit at
//! `(r, c)` with `r + c` even, sites (X checks) at even rows and plaquettes
//! (Z checks) at odd rows. Rotated codes are drawn as a 45° diamond, so
//! `D1` is the top vertex. Both numberings agree with the usual labels of
//! the `[[13,1,3]]` and `[[9,1,3]]` drawings (e.g. `Z7` on the 13-qubit code
//! flags `A6` and `A7`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};
use crate::pauli::{bits, Letter, PauliOperator, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Surface,
    RotatedSurface,
    Xzzx,
    RotatedXzzx,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Surface,
        Family::RotatedSurface,
        Family::Xzzx,
        Family::RotatedXzzx,
    ];

    pub fn is_rotated(self) -> bool {
        matches!(self, Family::RotatedSurface | Family::RotatedXzzx)
    }

    pub fn is_xzzx(self) -> bool {
        matches!(self, Family::Xzzx | Family::RotatedXzzx)
    }

    pub fn css_base(self) -> Family {
        match self {
            Family::Surface | Family::Xzzx => Family::Surface,
            Family::RotatedSurface | Family::RotatedXzzx => Family::RotatedSurface,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Surface => "surface",
            Family::RotatedSurface => "rotated",
            Family::Xzzx => "xzzx",
            Family::RotatedXzzx => "rotated-xzzx",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "surface" => Ok(Family::Surface),
            "rotated" | "rotated-surface" => Ok(Family::RotatedSurface),
            "xzzx" => Ok(Family::Xzzx),
            "rotated-xzzx" => Ok(Family::RotatedXzzx),
            _ => Err(QecError::UnknownFamily(s.to_string())),
        }
    }
}

/// Ancilla type in the CSS frame: sites measure X, plaquettes measure Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncillaKind {
    Site,
    Plaquette,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ancilla {
    pub kind: AncillaKind,
    /// Position in the drawn layout, `(row, column)`.
    pub coord: (i32, i32),
    /// Adjacent data qubits, ascending.
    pub qubits: Vec<usize>,
}

/// Boundary role of a data qubit: rough when it touches a single plaquette,
/// smooth when it touches a single site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRole {
    pub rough: bool,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    pub family: Family,
    pub d_x: usize,
    pub d_z: usize,
    pub qubit_coords: Vec<(i32, i32)>,
    pub ancillas: Vec<Ancilla>,
    pub boundary: Vec<BoundaryRole>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d_x: usize,
    pub d_z: usize,
    pub generators: Vec<PauliOperator>,
    pub logical_x: PauliOperator,
    pub logical_z: PauliOperator,
    #[serde(with = "mask_string")]
    pub hadamard_mask: u64,
    pub geometry: LatticeGeometry,
}

mod mask_string {
    use serde::{Deserialize, Deserializer, Serializer};

    // Bit string, qubit 0 leftmost. The width is recovered from the string.
    pub fn serialize<S: Serializer>(mask: &u64, s: S) -> Result<S::Ok, S::Error> {
        let width = 64 - mask.leading_zeros() as usize;
        let mut out = String::with_capacity(width);
        for q in 0..width {
            out.push(if mask >> q & 1 == 1 { '1' } else { '0' });
        }
        s.serialize_str(&out)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() > 64 {
            return Err(serde::de::Error::custom("mask longer than 64 bits"));
        }
        s.chars().enumerate().try_fold(0u64, |acc, (q, c)| match c {
            '0' => Ok(acc),
            '1' => Ok(acc | 1 << q),
            _ => Err(serde::de::Error::custom(format!("bad mask character {c:?}"))),
        })
    }
}

fn check_dims(d_x: usize, d_z: usize, n: usize) -> Result<()> {
    if d_x < 2 || d_z < 2 {
        return Err(QecError::BadDimensions { d_x, d_z });
    }
    if n > MAX_QUBITS {
        return Err(QecError::LatticeTooLarge {
            d_x,
            d_z,
            max_qubits: MAX_QUBITS,
        });
    }
    Ok(())
}

fn code_name(n: usize, d_x: usize, d_z: usize, family: Family) -> String {
    let d = if d_x == d_z {
        d_x.to_string()
    } else {
        format!("{d_x}/{d_z}")
    };
    format!("[[{n},1,{d}]] {family}")
}

/// Assembles a CSS code from the layout; generators follow ancilla order.
fn assemble(
    family: Family,
    d_x: usize,
    d_z: usize,
    qubit_coords: Vec<(i32, i32)>,
    mut ancillas: Vec<Ancilla>,
    logical_x: Vec<usize>,
    logical_z: Vec<usize>,
) -> StabilizerCode {
    let n = qubit_coords.len();
    ancillas.sort_by_key(|a| a.coord);
    let generators = ancillas
        .iter()
        .map(|a| {
            let letter = match a.kind {
                AncillaKind::Site => Letter::X,
                AncillaKind::Plaquette => Letter::Z,
            };
            PauliOperator::on(n, &a.qubits, letter)
        })
        .collect();
    let mut site_count = vec![0usize; n];
    let mut plaq_count = vec![0usize; n];
    for a in &ancillas {
        for &q in &a.qubits {
            match a.kind {
                AncillaKind::Site => site_count[q] += 1,
                AncillaKind::Plaquette => plaq_count[q] += 1,
            }
        }
    }
    let boundary = (0..n)
        .map(|q| BoundaryRole {
            rough: plaq_count[q] == 1,
            smooth: site_count[q] == 1,
        })
        .collect();
    StabilizerCode {
        name: code_name(n, d_x, d_z, family),
        n,
        k: 1,
        d_x,
        d_z,
        generators,
        logical_x: PauliOperator::on(n, &logical_x, Letter::X),
        logical_z: PauliOperator::on(n, &logical_z, Letter::Z),
        hadamard_mask: 0,
        geometry: LatticeGeometry {
            family,
            d_x,
            d_z,
            qubit_coords,
            ancillas,
            boundary,
        },
    }
}

/// Planar surface code on a `d_x` × `d_z` lattice.
///
/// There are `d_x` long rows of `d_z` qubits, so the horizontal Z chains have
/// length `d_z` and the vertical X chains length `d_x`.
pub fn build_surface(d_x: usize, d_z: usize) -> Result<StabilizerCode> {
    let n = d_x
        .checked_mul(d_z)
        .and_then(|a| a.checked_add((d_x.max(1) - 1) * (d_z.max(1) - 1)))
        .unwrap_or(usize::MAX);
    check_dims(d_x, d_z, n)?;
    let rows = 2 * d_x as i32 - 1;
    let cols = 2 * d_z as i32 - 1;

    let mut index = std::collections::HashMap::new();
    let mut coords = Vec::with_capacity(n);
    for r in 0..rows {
        for c in 0..cols {
            if (r + c) % 2 == 0 {
                index.insert((r, c), coords.len());
                coords.push((r, c));
            }
        }
    }
    debug_assert_eq!(coords.len(), n);

    let mut ancillas = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if (r + c) % 2 == 0 {
                continue;
            }
            let mut qubits: Vec<usize> = [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
                .iter()
                .filter_map(|p| index.get(p).copied())
                .collect();
            qubits.sort_unstable();
            let kind = if r % 2 == 0 {
                AncillaKind::Site
            } else {
                AncillaKind::Plaquette
            };
            ancillas.push(Ancilla {
                kind,
                coord: (r, c),
                qubits,
            });
        }
    }

    let top_row: Vec<usize> = (0..cols).step_by(2).map(|c| index[&(0, c)]).collect();
    let left_col: Vec<usize> = (0..rows).step_by(2).map(|r| index[&(r, 0)]).collect();
    Ok(assemble(
        Family::Surface,
        d_x,
        d_z,
        coords,
        ancillas,
        left_col,
        top_row,
    ))
}

/// Rotated surface code with `d_x · d_z` qubits.
///
/// Internally qubits live on a `d_z` × `d_x` grid `(u, v)`; Z chains run
/// along `u` and X chains along `v`. The face with lower-left corner `(u, v)`
/// is a plaquette when `u + v` is even and a site otherwise. Weight-2 faces
/// on the `u` edges are kept when they are plaquettes and on the `v` edges
/// when they are sites. The drawing places `(u, v)` at row `u + v`, column
/// `d_z - 1 - u + v`.
pub fn build_rotated(d_x: usize, d_z: usize) -> Result<StabilizerCode> {
    let n = d_x.checked_mul(d_z).unwrap_or(usize::MAX);
    check_dims(d_x, d_z, n)?;
    let (nu, nv) = (d_z as i32, d_x as i32);
    let draw = |u: i32, v: i32| (u + v, nu - 1 - u + v);

    let mut grid: Vec<(i32, i32)> = (0..nu)
        .flat_map(|u| (0..nv).map(move |v| (u, v)))
        .collect();
    grid.sort_by_key(|&(u, v)| draw(u, v));
    let mut index = std::collections::HashMap::new();
    let mut coords = Vec::with_capacity(n);
    for (q, &(u, v)) in grid.iter().enumerate() {
        index.insert((u, v), q);
        coords.push(draw(u, v));
    }

    let mut ancillas = Vec::new();
    for u in -1..nu {
        for v in -1..nv {
            let kind = if (u + v).rem_euclid(2) == 0 {
                AncillaKind::Plaquette
            } else {
                AncillaKind::Site
            };
            let mut qubits: Vec<usize> = [(u, v), (u + 1, v), (u, v + 1), (u + 1, v + 1)]
                .iter()
                .filter_map(|p| index.get(p).copied())
                .collect();
            let on_u_edge = u == -1 || u == nu - 1;
            let on_v_edge = v == -1 || v == nv - 1;
            let keep = match qubits.len() {
                4 => true,
                2 if on_u_edge => kind == AncillaKind::Plaquette,
                2 if on_v_edge => kind == AncillaKind::Site,
                _ => false,
            };
            if !keep {
                continue;
            }
            qubits.sort_unstable();
            let (r, c) = draw(u, v);
            ancillas.push(Ancilla {
                kind,
                coord: (r + 1, c),
                qubits,
            });
        }
    }

    let z_chain: Vec<usize> = (0..nu).map(|u| index[&(u, 0)]).collect();
    let x_chain: Vec<usize> = (0..nv).map(|v| index[&(0, v)]).collect();
    Ok(assemble(
        Family::RotatedSurface,
        d_x,
        d_z,
        coords,
        ancillas,
        x_chain,
        z_chain,
    ))
}

/// Qubits conjugated by Hadamard to turn a CSS layout into its XZZX variant:
/// every qubit on an odd row of the drawing. On the planar lattice this puts
/// X on the horizontal and Z on the vertical neighbours of every check; on
/// the rotated diamond it is the same set obtained by puncturing the planar
/// XZZX code (`D4, D5, D9, D10` of the 13-qubit code become `D2, D3, D7, D8`).
pub fn xzzx_mask(code: &StabilizerCode) -> u64 {
    code.geometry
        .qubit_coords
        .iter()
        .enumerate()
        .filter(|(_, &(r, _))| r % 2 == 1)
        .fold(0u64, |m, (q, _)| m | 1 << q)
}

/// Conjugates a CSS code by Hadamards on [`xzzx_mask`].
pub fn apply_xzzx(code: &StabilizerCode) -> Result<StabilizerCode> {
    if code.hadamard_mask != 0 || code.geometry.family.is_xzzx() {
        return Err(QecError::AlreadyXzzx);
    }
    let mask = xzzx_mask(code);
    let family = match code.geometry.family {
        Family::Surface => Family::Xzzx,
        _ => Family::RotatedXzzx,
    };
    // Hadamards on a rectangular rotated lattice let short chains of either
    // letter span the long side, so both declared distances collapse to the
    // shorter one.
    let (d_x, d_z) = if family == Family::RotatedXzzx {
        let d = code.d_x.min(code.d_z);
        (d, d)
    } else {
        (code.d_x, code.d_z)
    };
    let mut out = code.clone();
    out.generators = code.generators.iter().map(|g| g.hadamard(mask)).collect();
    out.logical_x = code.logical_x.hadamard(mask);
    out.logical_z = code.logical_z.hadamard(mask);
    out.hadamard_mask = mask;
    out.d_x = d_x;
    out.d_z = d_z;
    out.geometry.family = family;
    out.name = code_name(code.n, d_x, d_z, family);
    Ok(out)
}

/// Builds any family from lattice dimensions.
pub fn build(family: Family, d_x: usize, d_z: usize) -> Result<StabilizerCode> {
    match family {
        Family::Surface => build_surface(d_x, d_z),
        Family::RotatedSurface => build_rotated(d_x, d_z),
        Family::Xzzx => apply_xzzx(&build_surface(d_x, d_z)?),
        Family::RotatedXzzx => apply_xzzx(&build_rotated(d_x, d_z)?),
    }
}

/// The twelve codes of the reference error-class table, CSS block first.
pub fn table_codes() -> Vec<(Family, usize, usize)> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for (dx, dz) in [(3, 3), (3, 5), (5, 5)] {
            out.push((family, dx, dz));
        }
    }
    out
}

impl StabilizerCode {
    pub fn family(&self) -> Family {
        self.geometry.family
    }

    /// Label of ancilla `g` (`A1`, `A2`, ...).
    pub fn ancilla_label(g: usize) -> String {
        format!("A{}", g + 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("code serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Generators written in the CSS frame (mask undone).
    pub fn css_generators(&self) -> Vec<PauliOperator> {
        self.generators
            .iter()
            .map(|g| g.hadamard(self.hadamard_mask))
            .collect()
    }

    /// Number of data qubits `t`-correctable in the worst species.
    pub fn declared_t(&self) -> usize {
        (self.d_x.min(self.d_z) - 1) / 2
    }
}

/// Result of [`verify_code`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub generator_rank: usize,
    pub violations: Vec<String>,
    /// `(d, d_x, d_z)` from exhaustive logical search, when affordable.
    pub true_distances: Option<(usize, usize, usize)>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// GF(2) rank of Paulis viewed as `2n`-bit symplectic vectors.
pub fn symplectic_rank(ops: &[PauliOperator]) -> usize {
    let mut rows: Vec<u128> = ops
        .iter()
        .map(|p| p.x_mask() as u128 | (p.z_mask() as u128) << 64)
        .collect();
    let mut rank = 0;
    for bit in 0..128 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row >> bit & 1 == 1 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// Largest `n - k` for which [`verify_code`] runs the logical search.
pub const VERIFY_ENUMERATION_LIMIT: usize = 24;

/// Checks every structural invariant of a code and, for small codes, its
/// true distances. Problems are collected, never silently dropped.
pub fn verify_code(code: &StabilizerCode) -> VerifyReport {
    let mut v = Vec::new();
    let n = code.n;
    let gens = &code.generators;
    if gens.len() + code.k != n {
        v.push(format!("{} generators for n={n}, k={}", gens.len(), code.k));
    }
    if gens.iter().chain([&code.logical_x, &code.logical_z]).any(|g| g.n() != n) {
        v.push("operator width differs from n".to_string());
        return VerifyReport {
            violations: v,
            ..Default::default()
        };
    }
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if gens[a].anticommutes_unchecked(&gens[b]) {
                v.push(format!("generators A{} and A{} anticommute", a + 1, b + 1));
            }
        }
    }
    let rank = symplectic_rank(gens);
    if rank != gens.len() {
        v.push(format!("generators are dependent: rank {rank} of {}", gens.len()));
    }
    for (name, l) in [("logical_x", &code.logical_x), ("logical_z", &code.logical_z)] {
        for (g, gen) in gens.iter().enumerate() {
            if l.anticommutes_unchecked(gen) {
                v.push(format!("{name} anticommutes with A{}", g + 1));
            }
        }
    }
    if !code.logical_x.anticommutes_unchecked(&code.logical_z) {
        v.push("logical_x and logical_z commute".to_string());
    }
    let family = code.geometry.family;
    if family.is_xzzx() == (code.hadamard_mask == 0) {
        v.push(format!("hadamard mask inconsistent with family {family}"));
    }
    for (g, c) in code.css_generators().iter().enumerate() {
        let kind = code.geometry.ancillas.get(g).map(|a| a.kind);
        let ok = match kind {
            Some(AncillaKind::Site) => c.z_mask() == 0,
            Some(AncillaKind::Plaquette) => c.x_mask() == 0,
            None => false,
        };
        if !ok {
            v.push(format!("A{} does not match its ancilla type in the CSS frame", g + 1));
        }
        if let Some(a) = code.geometry.ancillas.get(g) {
            if c.support_indices() != a.qubits {
                v.push(format!("A{} support differs from its ancilla adjacency", g + 1));
            }
        }
    }
    if !family.is_xzzx() {
        if code.logical_x.weight() != code.d_x {
            v.push(format!(
                "logical_x weight {} differs from d_x={}",
                code.logical_x.weight(),
                code.d_x
            ));
        }
        if code.logical_z.weight() != code.d_z {
            v.push(format!(
                "logical_z weight {} differs from d_z={}",
                code.logical_z.weight(),
                code.d_z
            ));
        }
    }
    let expected_n = if family.is_rotated() {
        code.d_x * code.d_z
    } else {
        let (dx, dz) = (code.geometry.d_x, code.geometry.d_z);
        dx * dz + (dx - 1) * (dz - 1)
    };
    if family.is_rotated() {
        let (dx, dz) = (code.geometry.d_x, code.geometry.d_z);
        if n != dx * dz {
            v.push(format!("rotated lattice {dx}x{dz} should have {} qubits", dx * dz));
        }
    } else if n != expected_n {
        v.push(format!("surface lattice should have {expected_n} qubits"));
    }

    let mut true_distances = None;
    if v.is_empty() && n - code.k <= VERIFY_ENUMERATION_LIMIT {
        let d = crate::wepoly::true_distances(code).expect("within enumeration limit");
        true_distances = Some((d.d, d.d_x, d.d_z));
        if d.d_x != code.d_x || d.d_z != code.d_z {
            v.push(format!(
                "declared distances {}/{} differ from true {}/{}",
                code.d_x, code.d_z, d.d_x, d.d_z
            ));
        }
    }
    VerifyReport {
        generator_rank: rank,
        violations: v,
        true_distances,
    }
}

/// Indices of qubits in `mask`, 1-based, for messages.
pub fn qubit_labels(mask: u64) -> String {
    bits(mask)
        .map(|q| format!("D{}", q + 1))
        .collect::<Vec<_>>()
        .join(",")
}
