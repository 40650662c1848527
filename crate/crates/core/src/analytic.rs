//! Closed-form logical error rates built from error-class tables.
//!
//! A weight-`j` channel error is corrected with probability
//!
//! ```text
//! β_j(A) = 1 − (A+2)^−j · Σ_i A^i Σ_l C(j,i) C(j−i,l) f_j(i,l)
//! ```
//!
//! and the logical error rate is `Σ_j C(n,j) p^j (1−p)^(n−j) (1 − β_j)`.
//! `β_j` is kept as an exact polynomial in `A` so rational constants compare
//! exactly.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::enumerate::{binomial, classes, ErrorClassTable};
use crate::error::{QecError, Result};
use crate::wepoly::{self, Distances, MAX_ENUMERATED_GENERATORS};

pub type Rational = Ratio<i128>;

/// Channel asymmetry `A = 2 p_Z / (p − p_Z)`; `Infinite` is the phase-flip limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Asymmetry {
    Finite(Rational),
    Infinite,
}

impl Asymmetry {
    pub const DEPOLARIZING: Asymmetry = Asymmetry::Finite(Ratio::new_raw(1, 1));

    pub fn from_integer(a: i128) -> Self {
        Asymmetry::Finite(Rational::from_integer(a))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Asymmetry::Finite(a) => ratio_f64(a),
            Asymmetry::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Asymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Asymmetry::Infinite => f.write_str("inf"),
            Asymmetry::Finite(a) if a.is_integer() => write!(f, "{}", a.numer()),
            Asymmetry::Finite(a) => write!(f, "{}", ratio_f64(*a)),
        }
    }
}

impl FromStr for Asymmetry {
    type Err = QecError;

    /// Accepts `inf` or a plain decimal such as `10` or `2.5`, parsed exactly.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Asymmetry::Infinite);
        }
        let bad = || QecError::BadChannel(format!("asymmetry {s:?} is not a decimal or `inf`"));
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
        Ok(Asymmetry::Finite(Rational::new(
            digits,
            10i128.pow(frac.len() as u32),
        )))
    }
}

impl Serialize for Asymmetry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// i.i.d. Pauli channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelModel {
    pub p: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    /// Set when the channel was given as `(p, A)`.
    pub asymmetry: Option<Asymmetry>,
}

impl ChannelModel {
    pub fn new(p: f64, a: Asymmetry) -> Result<Self> {
        check_probability(p)?;
        let (p_x, p_z) = match a {
            Asymmetry::Infinite => (0.0, p),
            Asymmetry::Finite(r) => {
                if r < Rational::from_integer(0) {
                    return Err(QecError::BadChannel(format!("negative asymmetry {a}")));
                }
                let a = ratio_f64(r);
                (p / (a + 2.0), a * p / (a + 2.0))
            }
        };
        Ok(ChannelModel {
            p,
            p_x,
            p_y: p_x,
            p_z,
            asymmetry: Some(a),
        })
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::new(p, Asymmetry::DEPOLARIZING)
    }

    pub fn explicit(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        for q in [p_x, p_y, p_z] {
            if !(q >= 0.0) {
                return Err(QecError::BadChannel(format!(
                    "probabilities must be non-negative, got ({p_x}, {p_y}, {p_z})"
                )));
            }
        }
        let p = p_x + p_y + p_z;
        check_probability(p)?;
        Ok(ChannelModel {
            p,
            p_x,
            p_y,
            p_z,
            asymmetry: None,
        })
    }

    /// Asymmetry label for output files.
    pub fn a_label(&self) -> String {
        match self.asymmetry {
            Some(a) => a.to_string(),
            None if self.p == self.p_z => "inf".into(),
            None => format!("{}", 2.0 * self.p_z / (self.p - self.p_z)),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(QecError::BadChannel(format!("p = {p} is outside [0, 1]")))
    }
}

/// `1 − β_j` as `Σ_i c_i A^i / (A+2)^j`, one entry per covered weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaProfile {
    pub code: String,
    pub n: usize,
    /// `numerators[j][i] = Σ_l C(j,i) C(j−i,l) f_j(i,l)`.
    pub numerators: Vec<Vec<Rational>>,
    /// Per weight, per `(i, l)`: `C(j,i) C(j−i,l) f_j(i,l)` for explicit channels.
    weighted: Vec<Vec<(usize, usize, Rational)>>,
}

impl BetaProfile {
    pub fn from_table(table: &ErrorClassTable) -> Result<Self> {
        let mut numerators = Vec::with_capacity(table.j_max + 1);
        let mut weighted = Vec::with_capacity(table.j_max + 1);
        let cnj = |j: usize| binomial(table.n, j) as i128;
        for j in 0..=table.j_max.min(table.n) {
            let mut num = vec![Rational::from_integer(0); j + 1];
            let mut w = Vec::new();
            for c in classes(j) {
                let cc = table.get(c.j, c.i, c.l).ok_or_else(|| {
                    QecError::MissingClassData(format!("{} lacks class {c}", table.code))
                })?;
                // C(j,i) C(j−i,l) f = failures / C(n,j)
                let term = Rational::new(cc.failures as i128, cnj(j));
                num[c.i] += term;
                w.push((c.i, c.l, term));
            }
            numerators.push(num);
            weighted.push(w);
        }
        Ok(BetaProfile {
            code: table.code.clone(),
            n: table.n,
            numerators,
            weighted,
        })
    }

    pub fn max_weight(&self) -> usize {
        self.numerators.len() - 1
    }

    fn numerator(&self, j: usize) -> Result<&[Rational]> {
        self.numerators.get(j).map(Vec::as_slice).ok_or_else(|| {
            QecError::MissingClassData(format!(
                "{} has class data up to weight {}, weight {j} needed",
                self.code,
                self.max_weight()
            ))
        })
    }

    /// Exact `β_j(A)`.
    pub fn beta(&self, j: usize, a: Asymmetry) -> Result<Rational> {
        let num = self.numerator(j)?;
        let one = Rational::from_integer(1);
        Ok(match a {
            Asymmetry::Infinite => one - num[j],
            Asymmetry::Finite(a) => {
                let mut acc = Rational::from_integer(0);
                let mut pow = one;
                for c in num {
                    acc += *c * pow;
                    pow *= a;
                }
                one - acc / pow_ratio(a + 2, j)
            }
        })
    }

    /// `β_j` for any channel, in floating point.
    pub fn beta_channel(&self, j: usize, ch: &ChannelModel) -> Result<f64> {
        if let Some(a) = ch.asymmetry {
            return self.beta(j, a).map(ratio_f64);
        }
        self.numerator(j)?;
        if ch.p == 0.0 {
            return Err(QecError::BadChannel("β_j is undefined at p = 0".into()));
        }
        let (zx, xx, yx) = (ch.p_z / ch.p, ch.p_x / ch.p, ch.p_y / ch.p);
        let fail: f64 = self.weighted[j]
            .iter()
            .map(|&(i, l, w)| {
                ratio_f64(w) * zx.powi(i as i32) * xx.powi(l as i32) * yx.powi((j - i - l) as i32)
            })
            .sum();
        Ok(1.0 - fail)
    }
}

fn pow_ratio(r: Rational, e: usize) -> Rational {
    (0..e).fold(Rational::from_integer(1), |acc, _| acc * r)
}

/// Correction radii and leading weights for the asymptotic expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Radii {
    pub t_x: usize,
    pub t_z: usize,
}

impl Radii {
    pub fn from_distances(d: &Distances) -> Self {
        Radii {
            t_x: (d.d_x - 1) / 2,
            t_z: (d.d_z - 1) / 2,
        }
    }

    pub fn t(&self) -> usize {
        self.t_x.min(self.t_z)
    }

    /// Weights contributing to the small-`p` expression: `t+1` for balanced
    /// radii, otherwise `e_g+1` and `e_g+e_Z+1`.
    pub fn leading_weights(&self) -> Vec<usize> {
        let e_g = self.t();
        let e_z = self.t_z.saturating_sub(e_g);
        if e_z == 0 {
            vec![e_g + 1]
        } else {
            vec![e_g + 1, e_g + e_z + 1]
        }
    }
}

/// Distances found by coset enumeration when feasible, declared ones otherwise.
pub fn verified_distances(code: &StabilizerCode) -> Result<Distances> {
    if code.generators.len() <= MAX_ENUMERATED_GENERATORS {
        wepoly::true_distances(code)
    } else {
        Ok(Distances {
            d: code.d_x.min(code.d_z),
            d_x: code.d_x,
            d_z: code.d_z,
        })
    }
}

fn binomial_pmf(n: usize, j: usize, p: f64) -> f64 {
    binomial(n, j) as f64 * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
}

/// Small-`p` logical error rate from the leading weights only.
pub fn p_logical_asymptotic(profile: &BetaProfile, radii: Radii, ch: &ChannelModel) -> Result<f64> {
    radii
        .leading_weights()
        .into_iter()
        .map(|j| {
            let b = profile.beta_channel(j, ch)?;
            Ok((1.0 - b) * binomial(profile.n, j) as f64 * ch.p.powi(j as i32))
        })
        .sum()
}

/// Exact `p^(t+1)` coefficient(s) of the asymptotic expression at asymmetry `a`.
pub fn asymptotic_coefficients(
    profile: &BetaProfile,
    radii: Radii,
    a: Asymmetry,
) -> Result<Vec<(usize, Rational)>> {
    radii
        .leading_weights()
        .into_iter()
        .map(|j| {
            let b = profile.beta(j, a)?;
            Ok((j, (Rational::from_integer(1) - b) * binomial(profile.n, j) as i128))
        })
        .collect()
}

/// Bracket on the full sum: weights up to `j_cut` use their `β_j`; the tail is
/// taken as fully corrected for the lower bound and fully failing for the upper.
pub fn p_logical_full(
    profile: &BetaProfile,
    radii: Radii,
    ch: &ChannelModel,
    j_cut: usize,
) -> Result<(f64, f64)> {
    if j_cut < radii.t() + 1 {
        return Err(QecError::InvalidArgument(format!(
            "j_cut = {j_cut} is below t+1 = {}",
            radii.t() + 1
        )));
    }
    let n = profile.n;
    let j_cut = j_cut.min(n);
    let mut lower = 0.0;
    for j in radii.t() + 1..=j_cut {
        if ch.p == 0.0 {
            break;
        }
        lower += binomial_pmf(n, j, ch.p) * (1.0 - profile.beta_channel(j, ch)?);
    }
    let tail: f64 = (j_cut + 1..=n).map(|j| binomial_pmf(n, j, ch.p)).sum();
    Ok((lower, lower + tail))
}

/// Bounded-distance decoder: every pattern above weight `t` fails.
pub fn bounded_distance_curve(n: usize, t: usize, p: f64) -> f64 {
    (t + 1..=n).map(|j| binomial_pmf(n, j, p)).sum()
}

/// Ratio of asymptotic error rates of two codes; above 1 favours the second.
pub fn compare_ratio(
    first: (&BetaProfile, Radii),
    second: (&BetaProfile, Radii),
    p: f64,
    a: Asymmetry,
) -> Result<f64> {
    let coef = |(prof, r): (&BetaProfile, Radii)| -> Result<(usize, Rational)> {
        let j = r.t() + 1;
        let b = prof.beta(j, a)?;
        Ok((j, (Rational::from_integer(1) - b) * binomial(prof.n, j) as i128))
    };
    let (j1, c1) = coef(first)?;
    let (j2, c2) = coef(second)?;
    if *c2.numer() == 0 {
        return Err(QecError::InvalidArgument(format!(
            "{} has a zero leading coefficient",
            second.0.code
        )));
    }
    Ok(ratio_f64(c1 / c2) * p.powi(j1 as i32 - j2 as i32))
}

/// One row of curve output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    #[serde(rename = "A")]
    pub a: String,
    pub code: String,
    pub value: f64,
    pub kind: &'static str,
}

pub const CURVE_HEADER: &str = "p,A,code,value,kind";

impl CurvePoint {
    pub fn csv_row(&self) -> String {
        format!("{},{},\"{}\",{:.9e},{}", self.p, self.a, self.code, self.value, self.kind)
    }
}

/// Asymptotic, bracket and bounded-distance values of one code on one channel.
pub fn curve_points(
    profile: &BetaProfile,
    radii: Radii,
    declared_t: usize,
    ch: &ChannelModel,
    j_cut: usize,
) -> Result<Vec<CurvePoint>> {
    let (lo, hi) = p_logical_full(profile, radii, ch, j_cut)?;
    let point = |value: f64, kind: &'static str| CurvePoint {
        p: ch.p,
        a: ch.a_label(),
        code: profile.code.clone(),
        value,
        kind,
    };
    Ok(vec![
        point(p_logical_asymptotic(profile, radii, ch)?, "asymptotic"),
        point(lo, "full_lower"),
        point(hi, "full_upper"),
        point(bounded_distance_curve(profile.n, declared_t, ch.p), "bounded_distance"),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build, Family};
    use crate::enumerate::enumerate_code;

    fn profile(f: Family, dx: usize, dz: usize, j: usize) -> BetaProfile {
        let code = build(f, dx, dz).unwrap();
        BetaProfile::from_table(&enumerate_code(&code, j).unwrap()).unwrap()
    }

    #[test]
    fn asymmetry_parsing() {
        assert_eq!("inf".parse::<Asymmetry>().unwrap(), Asymmetry::Infinite);
        assert_eq!("10".parse::<Asymmetry>().unwrap(), Asymmetry::from_integer(10));
        assert_eq!(
            "2.5".parse::<Asymmetry>().unwrap(),
            Asymmetry::Finite(Rational::new(5, 2))
        );
        for bad in ["", "-1", "abc", "1e3", "."] {
            assert!(bad.parse::<Asymmetry>().is_err(), "{bad}");
        }
        assert_eq!(Asymmetry::Finite(Rational::new(5, 2)).to_string(), "2.5");
    }

    #[test]
    fn channel_split() {
        let c = ChannelModel::depolarizing(0.03).unwrap();
        assert!((c.p_x - 0.01).abs() < 1e-15 && (c.p_z - 0.01).abs() < 1e-15);
        let c = ChannelModel::new(0.12, Asymmetry::from_integer(10)).unwrap();
        assert!((c.p_z - 0.1).abs() < 1e-15 && (c.p_y - 0.01).abs() < 1e-15);
        let c = ChannelModel::new(0.1, Asymmetry::Infinite).unwrap();
        assert_eq!((c.p_x, c.p_y, c.p_z), (0.0, 0.0, 0.1));
        assert!(ChannelModel::depolarizing(1.5).is_err());
        assert!(ChannelModel::explicit(0.1, -0.1, 0.0).is_err());
    }

    #[test]
    fn rotated_9_constants() {
        let prof = profile(Family::RotatedSurface, 3, 3, 2);
        assert_eq!(prof.beta(2, Asymmetry::DEPOLARIZING).unwrap(), Rational::new(5, 9));
        assert_eq!(prof.beta(2, Asymmetry::Infinite).unwrap(), Rational::new(1, 2));
        assert_eq!(prof.beta(1, Asymmetry::DEPOLARIZING).unwrap(), Rational::from_integer(1));
        let xz = profile(Family::RotatedXzzx, 3, 3, 2);
        assert_eq!(xz.beta(2, Asymmetry::Infinite).unwrap(), Rational::new(7, 9));
    }

    #[test]
    fn explicit_channel_matches_asymmetric_form() {
        let prof = profile(Family::Surface, 3, 3, 2);
        let a = ChannelModel::new(0.02, Asymmetry::from_integer(4)).unwrap();
        let e = ChannelModel::explicit(a.p_x, a.p_y, a.p_z).unwrap();
        let (ba, be) = (prof.beta_channel(2, &a).unwrap(), prof.beta_channel(2, &e).unwrap());
        assert!((ba - be).abs() < 1e-12);
    }

    #[test]
    fn large_a_approaches_phase_flip_limit() {
        let prof = profile(Family::Xzzx, 3, 3, 2);
        let lim = ratio_f64(prof.beta(2, Asymmetry::Infinite).unwrap());
        let big = ratio_f64(prof.beta(2, Asymmetry::from_integer(1_000_000)).unwrap());
        assert!((lim - big).abs() < 1e-5);
    }

    #[test]
    fn bracket_and_bounded_distance() {
        let prof = profile(Family::RotatedXzzx, 3, 3, 3);
        let r = Radii { t_x: 1, t_z: 1 };
        let ch = ChannelModel::depolarizing(0.0).unwrap();
        assert_eq!(p_logical_full(&prof, r, &ch, 2).unwrap(), (0.0, 0.0));
        assert!(p_logical_full(&prof, r, &ch, 1).is_err());
        let ch = ChannelModel::depolarizing(1e-2).unwrap();
        let (lo, hi) = p_logical_full(&prof, r, &ch, 3).unwrap();
        assert!(lo <= hi);
        let small = ChannelModel::depolarizing(1e-4).unwrap();
        let (slo, _) = p_logical_full(&prof, r, &small, 3).unwrap();
        let asy = p_logical_asymptotic(&prof, r, &small).unwrap();
        assert!((asy / slo - 1.0).abs() < 1e-2, "{slo} {asy}");
        let tail: f64 = (4..=9).map(|j| binomial_pmf(9, j, 1e-2)).sum();
        assert!((hi - lo - tail).abs() < 1e-15);
        let p: f64 = 0.01;
        let bd = 1.0 - (1.0 - p).powi(9) - 9.0 * p * (1.0 - p).powi(8);
        assert!((bounded_distance_curve(9, 1, p) - bd).abs() < 1e-15);
        assert!(bounded_distance_curve(9, 1, p) >= hi);
    }

    #[test]
    fn leading_weights() {
        assert_eq!(Radii { t_x: 1, t_z: 1 }.leading_weights(), vec![2]);
        assert_eq!(Radii { t_x: 1, t_z: 2 }.leading_weights(), vec![2, 3]);
        assert_eq!(Radii { t_x: 2, t_z: 1 }.leading_weights(), vec![2]);
    }

    #[test]
    fn ratio_with_itself_is_one() {
        let prof = profile(Family::Surface, 3, 3, 2);
        let r = Radii { t_x: 1, t_z: 1 };
        let v = compare_ratio((&prof, r), (&prof, r), 0.01, Asymmetry::from_integer(3)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }
}
