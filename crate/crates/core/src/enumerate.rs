//! Exhaustive decoding of every weight-`j` Pauli pattern, tallied per error
//! class `(j, i, l)`.
//!
//! Patterns are visited with positions in lexicographic order and letters in
//! `X, Z, Y` order per position. Work is split into fixed index ranges and
//! merged by integer addition, so counts do not depend on the thread count.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::decoder::{DecodeTrace, MatchingDecoder, Outcome};
use crate::error::{QecError, Result};
use crate::pauli::{ErrorClass, Letter, PauliOperator};

/// Default cap on the number of decodes an enumeration may run.
pub const DEFAULT_DECODE_BUDGET: f64 = 5.0e6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub failures: u64,
    pub total: u64,
}

/// Non-correctable fractions `f_j(i, l)` with exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorClassTable {
    pub code: String,
    pub n: usize,
    pub j_max: usize,
    pub counts: BTreeMap<ErrorClass, ClassCount>,
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Number of weight-`j` patterns in class `(j, i, l)` on `n` qubits.
pub fn class_size(n: usize, c: ErrorClass) -> u64 {
    binomial(n, c.j) * binomial(c.j, c.i) * binomial(c.j - c.i, c.l)
}

/// All classes of weight `j`, in `(i, l)` order.
pub fn classes(j: usize) -> impl Iterator<Item = ErrorClass> {
    (0..=j).flat_map(move |i| (0..=j - i).map(move |l| ErrorClass::new(j, i, l)))
}

/// Decodes needed to enumerate weights `1..=j_max`.
pub fn enumeration_cost(n: usize, j_max: usize) -> f64 {
    (1..=j_max)
        .map(|j| binomial(n, j) as f64 * 3f64.powi(j as i32))
        .sum()
}

impl ErrorClassTable {
    pub fn get(&self, j: usize, i: usize, l: usize) -> Option<ClassCount> {
        self.counts.get(&ErrorClass::new(j, i, l)).copied()
    }

    pub fn fraction(&self, c: ErrorClass) -> Result<Ratio<i128>> {
        let cc = self.counts.get(&c).ok_or_else(|| {
            QecError::MissingClassData(format!("{} has no class {} (j={})", self.code, c, c.j))
        })?;
        Ok(Ratio::new(cc.failures as i128, cc.total as i128))
    }

    pub fn fraction_f64(&self, j: usize, i: usize, l: usize) -> Option<f64> {
        self.get(j, i, l)
            .map(|c| c.failures as f64 / c.total as f64)
    }

    pub fn covers(&self, j: usize) -> bool {
        j <= self.j_max
    }

    /// Total failing patterns of weight `j`.
    pub fn failures_at(&self, j: usize) -> u64 {
        self.counts
            .iter()
            .filter(|(c, _)| c.j == j)
            .map(|(_, v)| v.failures)
            .sum()
    }

    /// CSV rows `code,j,i,ell,class_label,failures,total,fraction`.
    pub fn to_csv(&self, with_header: bool) -> String {
        let mut out = String::new();
        if with_header {
            out.push_str("code,j,i,ell,class_label,failures,total,fraction\n");
        }
        for (c, v) in &self.counts {
            out.push_str(&format!(
                "\"{}\",{},{},{},{},{},{},{:.6}\n",
                self.code,
                c.j,
                c.i,
                c.l,
                c.label(),
                v.failures,
                v.total,
                v.failures as f64 / v.total as f64
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .counts
            .iter()
            .map(|(c, v)| {
                serde_json::json!({
                    "j": c.j, "i": c.i, "ell": c.l, "class_label": c.label(),
                    "failures": v.failures, "total": v.total,
                    "fraction": v.failures as f64 / v.total as f64,
                })
            })
            .collect();
        serde_json::json!({ "code": self.code, "n": self.n, "j_max": self.j_max, "classes": rows })
    }
}

/// Lexicographic `j`-subsets of `0..n`.
fn combinations(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, j) as usize);
    if j > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        out.push(idx.clone());
        let Some(p) = (0..j).rev().find(|&p| idx[p] != p + n - j) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..j {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

const LETTERS: [Letter; 3] = [Letter::X, Letter::Z, Letter::Y];

/// Pattern number `a` (base 3, first position most significant) on `positions`.
fn pattern(n: usize, positions: &[usize], mut a: usize) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for &q in positions.iter().rev() {
        p.set(q, LETTERS[a % 3]);
        a /= 3;
    }
    p
}

type Tally = BTreeMap<ErrorClass, u64>;

fn merge(mut a: Tally, b: Tally) -> Tally {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Decodes every pattern of weight `1..=j_max` and tabulates failures.
pub fn enumerate_classes(
    decoder: &MatchingDecoder,
    j_max: usize,
    budget: f64,
) -> Result<ErrorClassTable> {
    let code = decoder.code();
    let n = code.n;
    let cost = enumeration_cost(n, j_max);
    if cost > budget {
        return Err(QecError::BudgetExceeded {
            what: format!("class enumeration of {} up to j={j_max}", code.name),
            cost,
            budget,
        });
    }
    let mut counts = BTreeMap::new();
    for j in 0..=j_max.min(n) {
        for c in classes(j) {
            counts.insert(
                c,
                ClassCount {
                    failures: 0,
                    total: class_size(n, c),
                },
            );
        }
    }
    for j in 1..=j_max.min(n) {
        let combos = combinations(n, j);
        let per = 3usize.pow(j as u32);
        let tally = combos
            .par_chunks(64)
            .map(|chunk| -> Result<Tally> {
                let mut t = Tally::new();
                for positions in chunk {
                    for a in 0..per {
                        let e = pattern(n, positions, a);
                        if decoder.run(&e)?.is_failure() {
                            *t.entry(e.classify()).or_default() += 1;
                        }
                    }
                }
                Ok(t)
            })
            .try_reduce(Tally::new, |a, b| Ok(merge(a, b)))?;
        for (c, f) in tally {
            counts.get_mut(&c).expect("class present").failures += f;
        }
    }
    Ok(ErrorClassTable {
        code: code.name.clone(),
        n,
        j_max,
        counts,
    })
}

/// Convenience wrapper building the decoder.
pub fn enumerate_code(code: &StabilizerCode, j_max: usize) -> Result<ErrorClassTable> {
    enumerate_classes(&MatchingDecoder::new(code)?, j_max, DEFAULT_DECODE_BUDGET)
}

/// Single decode of `pattern` with its full trace.
pub fn spot_check(
    decoder: &MatchingDecoder,
    pattern: &PauliOperator,
) -> Result<(Outcome, DecodeTrace)> {
    let s = decoder.extract_syndrome(pattern)?;
    let trace = decoder.decode_with_trace(&s)?;
    let outcome = decoder.classify_failure(pattern, &trace.correction)?;
    Ok((outcome, trace))
}
