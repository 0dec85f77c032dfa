use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gip_core::families::{lower_bound, lower_branch, upper_bound, FamilyKind, FamilySpec};
use gip_core::io::{covariance_from_json, covariance_to_json};
use gip_core::sampling::{
    random_state, sample_figure2, sample_figure3, stream_rng, DEFAULT_MAX_LOCAL,
};
use gip_core::{
    cross_validate, gip_closed_form, CovarianceMatrix, LocalInvariants, SampleRecord, StandardForm,
    PHYSICAL_TOL,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{csv_bytes, emit, json_bytes, round12};

/// Bad flags or file contents; maps to exit code 2.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InvalidInput(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
}

/// Settings shared by the batch commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("sample count must be at least 1"));
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid(format!(
                    "tolerance {name} = {tol} must be positive"
                )));
            }
        }
        Ok(())
    }

    fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

/// Where `ip` reads its state from.
pub enum StateSource {
    File(PathBuf),
    Standard(StandardForm),
}

impl StateSource {
    fn load(&self) -> Result<CovarianceMatrix> {
        match self {
            StateSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
                Ok(covariance_from_json(&text)?)
            }
            StateSource::Standard(sf) => {
                if !sf.is_finite() {
                    return Err(invalid("standard-form parameters must be finite"));
                }
                Ok(sf.to_covariance())
            }
        }
    }
}

#[derive(Serialize)]
struct InvariantsReport {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "D")]
    d: f64,
}

impl From<LocalInvariants> for InvariantsReport {
    fn from(i: LocalInvariants) -> Self {
        Self {
            a: i.A,
            b: i.B,
            c: i.C,
            d: i.D,
        }
    }
}

#[derive(Serialize)]
struct IpReport {
    value: f64,
    branch: &'static str,
    invariants: InvariantsReport,
    standard_form: StandardForm,
    log_negativity: f64,
    #[serde(rename = "n_bar_A")]
    n_bar_a: f64,
    nu_minus: f64,
    nu_plus: f64,
    nu_tilde: f64,
    separable: bool,
}

pub fn cmd_ip(source: &StateSource) -> Result<()> {
    let cm = source.load()?;
    cm.ensure_physical(PHYSICAL_TOL)?;
    let ip = gip_closed_form(&cm)?;
    let (nu_minus, nu_plus) = cm.symplectic_eigenvalues()?;
    let report = IpReport {
        value: ip.value,
        branch: ip.branch.as_str(),
        invariants: ip.invariants.into(),
        standard_form: cm.to_standard_form()?,
        log_negativity: cm.log_negativity()?,
        n_bar_a: cm.mean_photon_a(),
        nu_minus,
        nu_plus,
        nu_tilde: cm.pt_symplectic_eigenvalue()?,
        separable: cm.is_separable(PHYSICAL_TOL)?,
    };
    emit(None, &json_bytes(&report)?)
}

#[derive(Serialize)]
struct VerifySummary {
    seed: u64,
    n: usize,
    tol: f64,
    passed: usize,
    max_abs_diff: f64,
    worst_index: usize,
}

/// Cross-validates the closed form on random states. Returns whether every state passed.
pub fn cmd_verify(config: &RunConfig) -> Result<bool> {
    config.validate()?;
    let tol = config.tolerance("verify");
    let reports = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(config.seed, i);
            let sf = random_state(&mut rng, DEFAULT_MAX_LOCAL, DEFAULT_MAX_LOCAL)?;
            cross_validate(&sf.to_covariance(), tol)
        })
        .collect::<gip_core::Result<Vec<_>>>()?;
    let (worst_index, max_abs_diff) = reports
        .iter()
        .map(|r| r.abs_diff)
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let summary = VerifySummary {
        seed: config.seed,
        n: config.samples,
        tol,
        passed: reports.iter().filter(|r| r.pass).count(),
        max_abs_diff,
        worst_index,
    };
    emit(None, &json_bytes(&summary)?)?;
    Ok(summary.passed == summary.n)
}

#[derive(Serialize)]
struct Fig2Row {
    #[serde(rename = "n_bar_A")]
    n_bar_a: f64,
    #[serde(rename = "P_G")]
    p_g: f64,
    separable: bool,
    sql: f64,
    heisenberg: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Serialize)]
struct Fig3Row {
    #[serde(rename = "E_N")]
    e_n: f64,
    ratio: f64,
    nu_tilde: f64,
    lower: f64,
    upper: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// The emitted state is the 12-digit rounding of the sampled one, and every
/// column is recomputed from it, so rows re-validate from their own parameters.
fn quantize(record: &SampleRecord) -> Result<SampleRecord> {
    let sf = record.sf;
    let q = StandardForm::new(round12(sf.a), round12(sf.b), round12(sf.c), round12(sf.d));
    Ok(SampleRecord::from_standard_form(q)?)
}

pub fn cmd_sample(config: &RunConfig, figure: Figure) -> Result<()> {
    config.validate()?;
    let records = match figure {
        Figure::Fig2 => sample_figure2(config.seed, config.samples)?,
        Figure::Fig3 => sample_figure3(config.seed, config.samples)?,
    };
    let records = records.iter().map(quantize).collect::<Result<Vec<_>>>()?;
    let bytes = match figure {
        Figure::Fig2 => {
            let rows: Vec<Fig2Row> = records
                .iter()
                .map(|r| Fig2Row {
                    n_bar_a: round12(r.n_bar_a),
                    p_g: round12(r.p_g),
                    separable: r.separable,
                    sql: round12(r.n_bar_a),
                    heisenberg: round12(r.n_bar_a * (r.n_bar_a + 1.0)),
                    a: r.sf.a,
                    b: r.sf.b,
                    c: r.sf.c,
                    d: r.sf.d,
                })
                .collect();
            encode(&rows, config.format)?
        }
        Figure::Fig3 => {
            let rows = records
                .iter()
                .map(|r| {
                    let ratio = r
                        .ratio()
                        .context("entangled sample with zero mean photon number")?;
                    Ok(Fig3Row {
                        e_n: round12(r.log_negativity),
                        ratio: round12(ratio),
                        nu_tilde: round12(r.nu_tilde),
                        lower: round12(lower_bound(r.nu_tilde)),
                        upper: round12(upper_bound(r.nu_tilde)),
                        a: r.sf.a,
                        b: r.sf.b,
                        c: r.sf.c,
                        d: r.sf.d,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            encode(&rows, config.format)?
        }
    };
    emit(config.output_path.as_deref(), &bytes)
}

fn encode<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(rows),
        Format::Json => json_bytes(rows),
    }
}

#[derive(Serialize)]
struct BoundsRow {
    nu_tilde: f64,
    #[serde(rename = "E_N")]
    e_n: f64,
    upper: f64,
    lower: f64,
    branch: u8,
}

/// Boundary curves on `grid` evenly spaced points strictly inside `(0, 1)`.
pub fn cmd_bounds(grid: usize, out: Option<&Path>) -> Result<()> {
    if grid == 0 {
        return Err(invalid("grid must have at least one point"));
    }
    let rows: Vec<BoundsRow> = (1..=grid)
        .map(|i| {
            let nu = i as f64 / (grid + 1) as f64;
            BoundsRow {
                nu_tilde: round12(nu),
                e_n: round12(-nu.ln()),
                upper: round12(upper_bound(nu)),
                lower: round12(lower_bound(nu)),
                branch: lower_branch(nu).index(),
            }
        })
        .collect();
    emit(out, &csv_bytes(&rows)?)
}

pub fn parse_kind(s: &str) -> std::result::Result<FamilyKind, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|_| {
        let names: Vec<String> = FamilyKind::ALL
            .iter()
            .map(|k| {
                serde_json::to_value(k)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

pub fn cmd_family(kind: FamilyKind, params: Vec<f64>, out: Option<&Path>) -> Result<()> {
    let sf = FamilySpec { kind, params }.build()?;
    let mut json = covariance_to_json(&sf.to_covariance());
    json.push('\n');
    emit(out, json.as_bytes())
}
