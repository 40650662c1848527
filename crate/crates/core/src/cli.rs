//! Command-line front end. Every command is a pure function of its arguments
//! and seed; outputs carry no timestamps or timings.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{
    self, Asymmetry, BetaProfile, ChannelModel, Radii, CURVE_HEADER,
};
use crate::codes::{self, verify_code, Family, StabilizerCode};
use crate::decoder::MatchingDecoder;
use crate::enumerate::{self, enumerate_classes, DEFAULT_DECODE_BUDGET};
use crate::error::{QecError, Result};
use crate::montecarlo::{self, TRIAL_HEADER};
use crate::pauli::PauliOperator;
use crate::wepoly;

#[derive(Parser, Debug)]
#[command(name = "qsurf", version, about = "Planar surface-code toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and verify a code, print its description.
    Build(Selector),
    /// Enumerate non-correctable fractions per error class.
    Classify(ClassifyArgs),
    /// Logical-operator weight enumerator and true distances.
    Wepoly(Selector),
    /// Analytic logical error rate curves.
    Curves(CurvesArgs),
    /// Monte Carlo estimate of the logical error rate.
    Simulate(SimulateArgs),
    /// Ratio of asymptotic error rates of two codes.
    Compare(CompareArgs),
    /// Decode one error pattern and print the full trace.
    Trace(TraceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Selector {
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub dx: Option<usize>,
    #[arg(long)]
    pub dz: Option<usize>,
    /// Code description JSON (as printed by `build`) instead of a family.
    #[arg(long, conflicts_with_all = ["family", "dx", "dz"])]
    pub code: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub selector: Selector,
    /// Run every code of the reference table.
    #[arg(long, conflicts_with_all = ["family", "dx", "dz", "code"])]
    pub all: bool,
    #[arg(long, default_value_t = 3)]
    pub jmax: usize,
    /// Largest number of decodes allowed per code.
    #[arg(long, default_value_t = DEFAULT_DECODE_BUDGET)]
    pub budget: f64,
}

#[derive(Args, Debug)]
pub struct Grid {
    /// Comma-separated physical error probabilities.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub p: Vec<f64>,
    /// Comma-separated asymmetries (decimal or `inf`).
    #[arg(long = "A", value_delimiter = ',', num_args = 0.., default_value = "1")]
    pub a: Vec<Asymmetry>,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub selector: Selector,
    /// Extra codes as `family:dx:dz`.
    #[arg(long = "with", value_delimiter = ',')]
    pub with: Vec<CodeSpec>,
    #[arg(long, conflicts_with_all = ["family", "dx", "dz", "code"])]
    pub all: bool,
    #[command(flatten)]
    pub grid: Grid,
    /// Highest weight with known class data; defaults to the leading weights.
    #[arg(long)]
    pub jcut: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub selector: Selector,
    #[command(flatten)]
    pub grid: Grid,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Report the trial count needed for this relative CI half-width.
    #[arg(long)]
    pub precision: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// First code, `family:dx:dz`.
    #[arg(long)]
    pub first: CodeSpec,
    /// Second code, `family:dx:dz`.
    #[arg(long)]
    pub second: CodeSpec,
    #[command(flatten)]
    pub grid: Grid,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub selector: Selector,
    /// Error pattern as a Pauli string, qubit 1 first.
    #[arg(long)]
    pub error: PauliOperator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub family: Family,
    pub d_x: usize,
    pub d_z: usize,
}

impl std::str::FromStr for CodeSpec {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| QecError::InvalidArgument(format!("bad dimension in {s:?}")))
        };
        match parts.as_slice() {
            [f, dx, dz] => Ok(CodeSpec {
                family: f.parse()?,
                d_x: num(dx)?,
                d_z: num(dz)?,
            }),
            _ => Err(QecError::InvalidArgument(format!(
                "code {s:?} is not of the form family:dx:dz"
            ))),
        }
    }
}

impl CodeSpec {
    fn build(&self) -> Result<StabilizerCode> {
        codes::build(self.family, self.d_x, self.d_z)
    }
}

impl Selector {
    fn is_empty(&self) -> bool {
        self.family.is_none() && self.dx.is_none() && self.dz.is_none() && self.code.is_none()
    }

    pub fn resolve(&self) -> Result<StabilizerCode> {
        if let Some(path) = &self.code {
            let text = fs::read_to_string(path).map_err(|e| {
                QecError::InvalidArgument(format!("cannot read {}: {e}", path.display()))
            })?;
            return StabilizerCode::from_json(&text)
                .map_err(|e| QecError::InvalidArgument(format!("bad code document: {e}")));
        }
        let family = self
            .family
            .ok_or_else(|| QecError::InvalidArgument("--family is required".into()))?;
        let d_x = self
            .dx
            .ok_or_else(|| QecError::InvalidArgument("--dx is required".into()))?;
        let d_z = self.dz.unwrap_or(d_x);
        codes::build(family, d_x, d_z)
    }
}

fn table_codes() -> Result<Vec<StabilizerCode>> {
    codes::table_codes()
        .into_iter()
        .map(|(f, dx, dz)| codes::build(f, dx, dz))
        .collect()
}

fn checked(code: StabilizerCode) -> Result<StabilizerCode> {
    let report = verify_code(&code);
    if report.is_ok() {
        Ok(code)
    } else {
        Err(QecError::Invariant(format!(
            "{} fails verification: {}",
            code.name,
            report.violations.join("; ")
        )))
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let text = match cli.workers {
        Some(0) => return Err(QecError::InvalidArgument("--workers must be positive".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| QecError::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| render(cli))?,
        None => render(cli)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| {
            QecError::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| QecError::InvalidArgument(format!("stdout: {e}")))
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// Runs the command and returns its output text.
pub fn render(cli: &Cli) -> Result<String> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Build(sel) => {
            let code = checked(sel.resolve()?)?;
            Ok(json_text(&code.to_json()))
        }
        Command::Classify(a) => classify(a, json),
        Command::Wepoly(sel) => {
            let code = sel.resolve()?;
            let e = wepoly::coset_enumerate(&code)?;
            let d = wepoly::distances_from(&e)?;
            Ok(json_text(&wepoly::to_json(&code, &e, &d)))
        }
        Command::Curves(a) => curves(a, json),
        Command::Simulate(a) => simulate(a, json),
        Command::Compare(a) => compare(a, json),
        Command::Trace(a) => {
            let code = a.selector.resolve()?;
            let dec = MatchingDecoder::new(&code)?;
            let (outcome, trace) = enumerate::spot_check(&dec, &a.error)?;
            Ok(json_text(&serde_json::json!({
                "error": a.error,
                "outcome": format!("{outcome:?}"),
                "trace": trace,
            })))
        }
    }
}

fn classify(a: &ClassifyArgs, json: bool) -> Result<String> {
    let codes = if a.all {
        table_codes()?
    } else {
        vec![a.selector.resolve()?]
    };
    let mut csv = String::new();
    let mut docs = Vec::new();
    for (k, code) in codes.iter().enumerate() {
        let dec = MatchingDecoder::new(code)?;
        let table = enumerate_classes(&dec, a.jmax, a.budget)?;
        if json {
            docs.push(table.to_json());
        } else {
            csv.push_str(&table.to_csv(k == 0));
        }
    }
    Ok(if json {
        json_text(&serde_json::Value::Array(docs))
    } else {
        csv
    })
}

struct Model {
    code: StabilizerCode,
    profile: BetaProfile,
    radii: Radii,
}

fn model(code: StabilizerCode, j_max: Option<usize>) -> Result<Model> {
    let radii = Radii::from_distances(&analytic::verified_distances(&code)?);
    let lead = *radii.leading_weights().iter().max().expect("non-empty");
    let j = j_max.unwrap_or(lead).max(lead);
    let dec = MatchingDecoder::new(&code)?;
    let table = enumerate_classes(&dec, j, DEFAULT_DECODE_BUDGET)?;
    Ok(Model {
        profile: BetaProfile::from_table(&table)?,
        code,
        radii,
    })
}

fn curves(a: &CurvesArgs, json: bool) -> Result<String> {
    let mut codes = if a.all {
        table_codes()?
    } else if a.selector.is_empty() {
        Vec::new()
    } else {
        vec![a.selector.resolve()?]
    };
    for s in &a.with {
        codes.push(s.build()?);
    }
    if codes.is_empty() && !a.grid.p.is_empty() {
        return Err(QecError::InvalidArgument("no code selected".into()));
    }
    let mut rows = Vec::new();
    if !a.grid.p.is_empty() {
        for code in codes {
            let m = model(code, a.jcut)?;
            let j_cut = m.profile.max_weight();
            for &asym in &a.grid.a {
                for &p in &a.grid.p {
                    let ch = ChannelModel::new(p, asym)?;
                    rows.extend(analytic::curve_points(
                        &m.profile,
                        m.radii,
                        m.code.declared_t(),
                        &ch,
                        j_cut,
                    )?);
                }
            }
        }
    }
    Ok(if json {
        json_text(&serde_json::to_value(&rows).expect("rows serialize"))
    } else {
        let mut s = format!("{CURVE_HEADER}\n");
        for r in &rows {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    })
}

fn simulate(a: &SimulateArgs, json: bool) -> Result<String> {
    let code = a.selector.resolve()?;
    let dec = MatchingDecoder::new(&code)?;
    let mut reports = Vec::new();
    for &asym in &a.grid.a {
        for &p in &a.grid.p {
            let ch = ChannelModel::new(p, asym)?;
            let r = montecarlo::estimate(&dec, &ch, a.trials, a.seed)?;
            if let Some(rel) = a.precision {
                if !(rel > 0.0) {
                    return Err(QecError::InvalidArgument("--precision must be positive".into()));
                }
                let need = if r.failures > 0 {
                    format!("{:.3e}", montecarlo::trials_for_precision(r.p_hat, rel))
                } else {
                    "unknown (no failures observed)".into()
                };
                eprintln!(
                    "{} p={} A={}: p_hat={:.3e}, trials for ±{:.0}%: {need}",
                    r.code,
                    p,
                    ch.a_label(),
                    r.p_hat,
                    rel * 100.0
                );
            }
            if r.aborted > 0 {
                eprintln!("warning: {} trials exceeded the matching cap", r.aborted);
            }
            reports.push(r);
        }
    }
    Ok(if json {
        let docs: Vec<_> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "code": r.code, "p": r.channel.p, "A": r.channel.a_label(),
                    "trials": r.trials, "failures": r.failures,
                    "fx": r.fx, "fy": r.fy, "fz": r.fz, "aborted": r.aborted,
                    "p_hat": r.p_hat, "ci_lo": r.ci.0, "ci_hi": r.ci.1, "seed": r.seed,
                })
            })
            .collect();
        json_text(&serde_json::Value::Array(docs))
    } else {
        let mut s = format!("{TRIAL_HEADER}\n");
        for r in &reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    })
}

fn compare(a: &CompareArgs, json: bool) -> Result<String> {
    let m1 = model(a.first.build()?, None)?;
    let m2 = model(a.second.build()?, None)?;
    let mut rows = Vec::new();
    for &asym in &a.grid.a {
        for &p in &a.grid.p {
            let r = analytic::compare_ratio((&m1.profile, m1.radii), (&m2.profile, m2.radii), p, asym)?;
            rows.push((p, asym, r));
        }
    }
    Ok(if json {
        let docs: Vec<_> = rows
            .iter()
            .map(|(p, asym, r)| {
                serde_json::json!({
                    "p": p, "A": asym, "first": m1.code.name, "second": m2.code.name, "r": r,
                })
            })
            .collect();
        json_text(&serde_json::Value::Array(docs))
    } else {
        let mut s = String::from("p,A,first,second,r\n");
        for (p, asym, r) in rows {
            s.push_str(&format!(
                "{p},{asym},\"{}\",\"{}\",{r:.6}\n",
                m1.code.name, m2.code.name
            ));
        }
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("qsurf").chain(args.iter().copied()))
            .map_err(|e| QecError::InvalidArgument(e.to_string()))?;
        render(&cli)
    }

    #[test]
    fn code_spec_parsing() {
        let s: CodeSpec = "rotated-xzzx:3:5".parse().unwrap();
        assert_eq!((s.family, s.d_x, s.d_z), (Family::RotatedXzzx, 3, 5));
        assert!("surface:3".parse::<CodeSpec>().is_err());
        assert!("torus:3:3".parse::<CodeSpec>().is_err());
    }

    #[test]
    fn build_rejects_small_lattice() {
        let e = out(&["build", "--family", "surface", "--dx", "1", "--dz", "3"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn empty_curve_grid_gives_header_only() {
        assert_eq!(out(&["curves"]).unwrap(), format!("{CURVE_HEADER}\n"));
    }

    #[test]
    fn classify_budget_refusal_exit_code() {
        let e = out(&[
            "classify", "--family", "surface", "--dx", "5", "--dz", "5", "--budget", "10",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
