//! Logical error rate estimation by sampling an i.i.d. Pauli channel.
//!
//! Trial `k` draws from a ChaCha stream selected by `(seed, k)`, so counts are
//! the same whatever the thread count or chunking.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::ChannelModel;
use crate::decoder::{MatchingDecoder, Outcome};
use crate::error::{QecError, Result};
use crate::pauli::{Letter, PauliOperator};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

const CHUNK: u64 = 4096;

pub const TRIAL_HEADER: &str = "code,p,A,trials,failures,fx,fy,fz,p_hat,ci_lo,ci_hi,seed";

/// Draws one error: each qubit is X, Y, Z with `p_x`, `p_y`, `p_z`, else I.
pub fn sample_error<R: Rng + ?Sized>(ch: &ChannelModel, n: usize, rng: &mut R) -> PauliOperator {
    let mut e = PauliOperator::identity(n);
    if ch.p == 0.0 {
        return e;
    }
    for q in 0..n {
        let u: f64 = rng.gen();
        if u >= ch.p {
            continue;
        }
        let letter = if u < ch.p_x {
            Letter::X
        } else if u < ch.p_x + ch.p_y {
            Letter::Y
        } else {
            Letter::Z
        };
        e.set(q, letter);
    }
    e
}

/// RNG for trial `k` under `seed`.
pub fn trial_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Wilson score interval at 95%.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let ph = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = Z95 * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Trials needed for a relative half-width `rel` at a failure rate near `p_l`.
pub fn trials_for_precision(p_l: f64, rel: f64) -> f64 {
    Z95 * Z95 * (1.0 - p_l) / (rel * rel * p_l)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub code: String,
    pub channel: ChannelModel,
    pub trials: u64,
    pub failures: u64,
    pub fx: u64,
    pub fy: u64,
    pub fz: u64,
    /// Trials dropped because a species exceeded the matching cap.
    pub aborted: u64,
    pub p_hat: f64,
    pub ci: (f64, f64),
    pub seed: u64,
    pub runtime_s: f64,
}

impl TrialReport {
    pub fn csv_row(&self) -> String {
        format!(
            "\"{}\",{},{},{},{},{},{},{},{:.9e},{:.9e},{:.9e},{}",
            self.code,
            self.channel.p,
            self.channel.a_label(),
            self.trials,
            self.failures,
            self.fx,
            self.fy,
            self.fz,
            self.p_hat,
            self.ci.0,
            self.ci.1,
            self.seed
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    fx: u64,
    fy: u64,
    fz: u64,
    aborted: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            fx: self.fx + o.fx,
            fy: self.fy + o.fy,
            fz: self.fz + o.fz,
            aborted: self.aborted + o.aborted,
        }
    }
}

/// Runs `trials` sample-decode-classify rounds.
pub fn estimate(
    decoder: &MatchingDecoder,
    ch: &ChannelModel,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(QecError::InvalidArgument("at least one trial is needed".into()));
    }
    let start = Instant::now();
    let n = decoder.code().n;
    let chunks = trials.div_ceil(CHUNK);
    let t = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Tally> {
            let mut t = Tally::default();
            for k in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let e = sample_error(ch, n, &mut trial_rng(seed, k));
                match decoder.run(&e) {
                    Ok(Outcome::Success) => {}
                    Ok(Outcome::LogicalX) => t.fx += 1,
                    Ok(Outcome::LogicalY) => t.fy += 1,
                    Ok(Outcome::LogicalZ) => t.fz += 1,
                    Err(QecError::DecoderCapExceeded { .. }) => t.aborted += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.add(b)))?;
    let decoded = trials - t.aborted;
    let failures = t.fx + t.fy + t.fz;
    let p_hat = if decoded == 0 {
        0.0
    } else {
        failures as f64 / decoded as f64
    };
    Ok(TrialReport {
        code: decoder.code().name.clone(),
        channel: *ch,
        trials,
        failures,
        fx: t.fx,
        fy: t.fy,
        fz: t.fz,
        aborted: t.aborted,
        p_hat,
        ci: wilson_interval(failures, decoded),
        seed,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Asymmetry;
    use crate::codes::{build, Family};

    #[test]
    fn zero_noise_samples_identity() {
        let ch = ChannelModel::depolarizing(0.0).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..100 {
            assert!(sample_error(&ch, 13, &mut rng).is_identity());
        }
    }

    #[test]
    fn phase_flip_samples_only_z() {
        let ch = ChannelModel::new(0.3, Asymmetry::Infinite).unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..1000 {
            assert_eq!(sample_error(&ch, 9, &mut rng).x_mask(), 0);
        }
    }

    #[test]
    fn letter_frequencies() {
        let ch = ChannelModel::explicit(0.05, 0.02, 0.13).unwrap();
        let draws = 1_000_000u64;
        let mut counts = [0u64; 3];
        let mut rng = trial_rng(7, 0);
        for _ in 0..draws {
            let e = sample_error(&ch, 1, &mut rng);
            match e.letter(0) {
                Letter::X => counts[0] += 1,
                Letter::Y => counts[1] += 1,
                Letter::Z => counts[2] += 1,
                Letter::I => {}
            }
        }
        for (c, p) in counts.iter().zip([ch.p_x, ch.p_y, ch.p_z]) {
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - draws as f64 * p).abs() < 4.0 * sigma, "{c} vs {p}");
        }
    }

    #[test]
    fn wilson_contains_point_estimate() {
        for (f, n) in [(0, 10), (1, 10), (5, 1000), (1000, 1000)] {
            let (lo, hi) = wilson_interval(f, n);
            let ph = f as f64 / n as f64;
            assert!(lo <= ph && ph <= hi);
        }
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036_995).abs() < 1e-5);
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let code = build(Family::RotatedXzzx, 3, 3).unwrap();
        let dec = MatchingDecoder::new(&code).unwrap();
        let ch = ChannelModel::depolarizing(0.05).unwrap();
        let run = |w: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .unwrap()
                .install(|| estimate(&dec, &ch, 20_000, 11).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!((a.fx, a.fy, a.fz), (b.fx, b.fy, b.fz));
        assert!(a.failures > 0);
    }

    #[test]
    fn zero_noise_never_fails() {
        let code = build(Family::Surface, 3, 3).unwrap();
        let dec = MatchingDecoder::new(&code).unwrap();
        let r = estimate(&dec, &ChannelModel::depolarizing(0.0).unwrap(), 1000, 3).unwrap();
        assert_eq!(r.failures, 0);
        assert!(estimate(&dec, &r.channel, 0, 3).is_err());
    }
}
