//! Weight enumerators of the stabilizer group, the normalizer and the
//! undetectable (logical) errors, by exhaustive coset enumeration, plus the
//! quantum MacWilliams transform used as an independent cross-check.

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::error::{QecError, Result};
use crate::pauli::PauliOperator;

/// Largest number of generators enumerated exhaustively.
pub const MAX_ENUMERATED_GENERATORS: usize = 24;

/// Coefficient lists indexed by weight `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEnumerator {
    pub n: usize,
    pub k: usize,
    /// Stabilizer group.
    pub a: Vec<u64>,
    /// Normalizer (stabilizer times all logical cosets).
    pub b: Vec<u64>,
    /// Undetectable errors, `b - a`.
    pub l: Vec<u64>,
}

impl WeightEnumerator {
    /// Smallest weight with a logical operator.
    pub fn min_logical_weight(&self) -> Option<usize> {
        self.l.iter().position(|&c| c > 0)
    }

    /// Nonzero `(w, L_w)` pairs.
    pub fn l_terms(&self) -> Vec<(usize, u64)> {
        nonzero_terms(&self.l)
    }

    /// `L(z)` rendered as `24z^3 + 192z^5 + ...`.
    pub fn l_polynomial(&self) -> String {
        render_polynomial(&self.l)
    }
}

pub fn nonzero_terms(coeffs: &[u64]) -> Vec<(usize, u64)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| (w, c))
        .collect()
}

pub fn render_polynomial(coeffs: &[u64]) -> String {
    let terms: Vec<String> = nonzero_terms(coeffs)
        .into_iter()
        .map(|(w, c)| match w {
            0 => c.to_string(),
            1 => format!("{c}z"),
            _ => format!("{c}z^{w}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Full output of the coset walk.
#[derive(Clone, Debug, Serialize)]
pub struct CosetEnumeration {
    pub enumerator: WeightEnumerator,
    /// Histograms of the cosets `S`, `X_L S`, `Z_L S`, `Y_L S`.
    pub cosets: [Vec<u64>; 4],
    /// Lightest nontrivial logical made only of X letters.
    pub min_pure_x: Option<usize>,
    /// Lightest nontrivial logical made only of Z letters.
    pub min_pure_z: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Distances {
    pub d: usize,
    pub d_x: usize,
    pub d_z: usize,
}

#[derive(Clone, Debug)]
struct Partial {
    cosets: [Vec<u64>; 4],
    min_pure_x: usize,
    min_pure_z: usize,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            cosets: std::array::from_fn(|_| vec![0; n + 1]),
            min_pure_x: usize::MAX,
            min_pure_z: usize::MAX,
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.cosets.iter_mut().zip(other.cosets.iter()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.min_pure_x = self.min_pure_x.min(other.min_pure_x);
        self.min_pure_z = self.min_pure_z.min(other.min_pure_z);
        self
    }

    #[inline]
    fn record(&mut self, s: &PauliOperator, reps: &[PauliOperator; 4]) {
        self.cosets[0][s.weight()] += 1;
        for (c, rep) in reps.iter().enumerate().skip(1) {
            let e = s.mul_unchecked(rep);
            let w = e.weight();
            self.cosets[c][w] += 1;
            if e.z_mask() == 0 {
                self.min_pure_x = self.min_pure_x.min(w);
            }
            if e.x_mask() == 0 {
                self.min_pure_z = self.min_pure_z.min(w);
            }
        }
    }
}

fn enumeration_budget(code: &StabilizerCode) -> Result<()> {
    let m = code.generators.len();
    if m > MAX_ENUMERATED_GENERATORS {
        return Err(QecError::BudgetExceeded {
            what: format!("coset enumeration of {}", code.name),
            cost: 4.0 * 2f64.powi(m as i32),
            budget: 4.0 * 2f64.powi(MAX_ENUMERATED_GENERATORS as i32),
        });
    }
    Ok(())
}

/// Walks every stabilizer element in Gray-code order (one multiply per
/// step) and histograms weights in each of the four logical cosets.
pub fn coset_enumerate(code: &StabilizerCode) -> Result<CosetEnumeration> {
    enumeration_budget(code)?;
    if code.k != 1 {
        return Err(QecError::InvalidArgument(format!(
            "coset enumeration supports k=1, code has k={}",
            code.k
        )));
    }
    let n = code.n;
    let gens = &code.generators;
    let m = gens.len();
    let id = PauliOperator::identity(n);
    let reps = [
        id,
        code.logical_x,
        code.logical_z,
        code.logical_x.mul_unchecked(&code.logical_z),
    ];

    // High generator bits fix a chunk; the low bits are Gray-walked.
    let high = m.min(8);
    let low = m - high;
    let partial = (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut s = id;
            for b in 0..high {
                if prefix >> b & 1 == 1 {
                    s = s.mul_unchecked(&gens[low + b]);
                }
            }
            let mut acc = Partial::new(n);
            acc.record(&s, &reps);
            for step in 1u64..1 << low {
                s = s.mul_unchecked(&gens[step.trailing_zeros() as usize]);
                acc.record(&s, &reps);
            }
            acc
        })
        .reduce(|| Partial::new(n), Partial::merge);

    let a = partial.cosets[0].clone();
    let l: Vec<u64> = (0..=n)
        .map(|w| partial.cosets[1..].iter().map(|c| c[w]).sum())
        .collect();
    let b = a.iter().zip(&l).map(|(x, y)| x + y).collect();
    let opt = |v: usize| (v != usize::MAX).then_some(v);
    Ok(CosetEnumeration {
        enumerator: WeightEnumerator {
            n,
            k: code.k,
            a,
            b,
            l,
        },
        cosets: partial.cosets,
        min_pure_x: opt(partial.min_pure_x),
        min_pure_z: opt(partial.min_pure_z),
    })
}

/// True distances: `d` over all nontrivial logicals, `d_x` (`d_z`) over the
/// nontrivial logicals built only from X (only from Z) letters.
///
/// For CSS codes the pure-letter minima coincide with the lightest element of
/// the `X_L` (`Z_L`) coset; for XZZX variants they measure how many
/// single-letter errors of one kind are needed to cause a logical fault.
pub fn true_distances(code: &StabilizerCode) -> Result<Distances> {
    let e = coset_enumerate(code)?;
    distances_from(&e)
}

pub fn distances_from(e: &CosetEnumeration) -> Result<Distances> {
    let d = e
        .enumerator
        .min_logical_weight()
        .ok_or_else(|| QecError::Invariant("code has no logical operators".into()))?;
    let missing = |s: &str| QecError::Invariant(format!("no pure-{s} logical operator"));
    Ok(Distances {
        d,
        d_x: e.min_pure_x.ok_or_else(|| missing("X"))?,
        d_z: e.min_pure_z.ok_or_else(|| missing("Z"))?,
    })
}

fn binomial_i128(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// Quantum MacWilliams transform `B(x,y) = 2^{k-n} A(x+3y, x-y)` with
/// `A(x,y) = Σ A_w x^{n-w} y^w`, evaluated in exact integers.
///
/// Returns the normalizer enumerator `B`. A non-integral or negative
/// coefficient means `A` is not the enumerator of a stabilizer group.
pub fn macwilliams_transform(a: &[u64], n: usize, k: usize) -> Result<Vec<u64>> {
    if a.len() != n + 1 {
        return Err(QecError::InvalidArgument(format!(
            "enumerator has {} coefficients, expected {}",
            a.len(),
            n + 1
        )));
    }
    if n < k || n - k > 126 {
        return Err(QecError::InvalidArgument("n - k out of range".into()));
    }
    let overflow = || QecError::Invariant("MacWilliams coefficient overflow".into());
    let pow3: Vec<i128> = (0..=n).map(|e| 3i128.pow(e as u32)).collect();
    let denom: i128 = 1i128 << (n - k);
    let mut out = Vec::with_capacity(n + 1);
    for w in 0..=n {
        let mut total: i128 = 0;
        for (u, &au) in a.iter().enumerate() {
            if au == 0 {
                continue;
            }
            // coefficient of y^w in (x+3y)^{n-u} (x-y)^u
            let mut kraw: i128 = 0;
            for s in 0..=w.min(u) {
                let r = w - s;
                if r > n - u {
                    continue;
                }
                let term = binomial_i128(n - u, r)
                    .checked_mul(pow3[r])
                    .and_then(|t| t.checked_mul(binomial_i128(u, s)))
                    .ok_or_else(overflow)?;
                kraw += if s % 2 == 0 { term } else { -term };
            }
            total = kraw
                .checked_mul(au as i128)
                .and_then(|t| t.checked_add(total))
                .ok_or_else(overflow)?;
        }
        if total % denom != 0 || total < 0 {
            return Err(QecError::Invariant(format!(
                "MacWilliams coefficient at weight {w} is {total}/{denom}, not a non-negative integer"
            )));
        }
        out.push((total / denom) as u64);
    }
    Ok(out)
}

/// Cross-checks enumeration against MacWilliams: returns `B` from the
/// transform of `A` after confirming it equals the enumerated normalizer.
pub fn macwilliams_check(we: &WeightEnumerator) -> Result<WeightEnumerator> {
    let b = macwilliams_transform(&we.a, we.n, we.k)?;
    let l: Vec<u64> = b
        .iter()
        .zip(&we.a)
        .map(|(x, y)| {
            x.checked_sub(*y)
                .ok_or_else(|| QecError::Invariant("B_w < A_w".into()))
        })
        .collect::<Result<_>>()?;
    Ok(WeightEnumerator {
        n: we.n,
        k: we.k,
        a: we.a.clone(),
        b,
        l,
    })
}

/// JSON document for `wepoly`.
pub fn to_json(code: &StabilizerCode, e: &CosetEnumeration, d: &Distances) -> serde_json::Value {
    let pairs = |v: &[u64]| -> Vec<[u64; 2]> {
        nonzero_terms(v).into_iter().map(|(w, c)| [w as u64, c]).collect()
    };
    serde_json::json!({
        "code": code.name,
        "L": pairs(&e.enumerator.l),
        "A": pairs(&e.enumerator.a),
        "B": pairs(&e.enumerator.b),
        "d": d.d,
        "d_x": d.d_x,
        "d_z": d.d_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build, Family};

    #[test]
    fn rotated_9_enumerator() {
        let c = build(Family::RotatedSurface, 3, 3).unwrap();
        let e = coset_enumerate(&c).unwrap().enumerator;
        assert_eq!(e.l_terms(), vec![(3, 24), (5, 192), (7, 408), (9, 144)]);
        assert_eq!(e.l_polynomial(), "24z^3 + 192z^5 + 408z^7 + 144z^9");
        assert_eq!(e.a[0], 1);
        assert_eq!(e.l.iter().sum::<u64>(), 3 << 8);
    }

    #[test]
    fn surface_13_enumerator() {
        let c = build(Family::Surface, 3, 3).unwrap();
        let e = coset_enumerate(&c).unwrap().enumerator;
        let expect = [6, 24, 75, 240, 648, 1440, 2538, 3216, 2634, 1224, 243];
        assert_eq!(&e.l[3..], &expect);
        assert_eq!(e.l.iter().sum::<u64>(), 12288);
    }

    #[test]
    fn hadamard_mask_preserves_histograms() {
        for (dx, dz) in [(3, 3), (3, 5)] {
            for (css, xz) in [
                (Family::Surface, Family::Xzzx),
                (Family::RotatedSurface, Family::RotatedXzzx),
            ] {
                let a = coset_enumerate(&build(css, dx, dz).unwrap()).unwrap();
                let b = coset_enumerate(&build(xz, dx, dz).unwrap()).unwrap();
                assert_eq!(a.enumerator, b.enumerator);
                assert_eq!(a.cosets, b.cosets);
            }
        }
    }

    #[test]
    fn macwilliams_matches_enumeration() {
        for f in Family::ALL {
            for (dx, dz) in [(2, 2), (3, 3), (3, 5)] {
                let c = build(f, dx, dz).unwrap();
                let e = coset_enumerate(&c).unwrap().enumerator;
                let m = macwilliams_check(&e).unwrap();
                assert_eq!(m.b, e.b, "{}", c.name);
                assert_eq!(m.b.iter().sum::<u64>(), 1 << (c.n + 1));
            }
        }
    }

    #[test]
    fn macwilliams_rejects_non_stabilizer() {
        // A single weight-1 element plus identity is not a valid k=1 stabilizer of n=3
        let bogus = vec![1, 1, 0, 0];
        assert!(macwilliams_transform(&bogus, 3, 1).is_err());
    }

    #[test]
    fn distances() {
        let d = |f, dx, dz| true_distances(&build(f, dx, dz).unwrap()).unwrap();
        let r = d(Family::RotatedSurface, 3, 5);
        assert_eq!((r.d, r.d_x, r.d_z), (3, 3, 5));
        let r = d(Family::RotatedXzzx, 3, 5);
        assert_eq!((r.d, r.d_x, r.d_z), (3, 3, 3));
        let r = d(Family::Surface, 3, 3);
        assert_eq!((r.d, r.d_x, r.d_z), (3, 3, 3));
    }

    #[test]
    fn budget_refusal() {
        let c = build(Family::Surface, 5, 5).unwrap();
        assert!(matches!(
            coset_enumerate(&c),
            Err(QecError::BudgetExceeded { .. })
        ));
    }
}
