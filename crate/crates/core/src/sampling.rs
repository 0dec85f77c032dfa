//! Random two-mode states for the scaling and boundary scatter plots.
//!
//! Record `i` of a run is drawn from ChaCha stream `i` of the run seed, so the
//! output depends only on `(seed, n)` and not on how the work is scheduled.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ip::gip_closed_form;
use crate::symplectic::{StandardForm, PHYSICAL_TOL};

/// Upper end of the uniform range for `a` and `b`.
pub const DEFAULT_MAX_LOCAL: f64 = 5.0;
const MAX_REJECTIONS: usize = 1_000_000;

/// One sampled state with the quantities plotted against each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sf: StandardForm,
    pub n_bar_a: f64,
    pub log_negativity: f64,
    pub nu_tilde: f64,
    pub p_g: f64,
    pub separable: bool,
}

impl SampleRecord {
    pub fn from_standard_form(sf: StandardForm) -> Result<Self> {
        let cm = sf.to_covariance();
        let p_g = gip_closed_form(&cm)?.value;
        Ok(Self {
            sf,
            n_bar_a: cm.mean_photon_a(),
            log_negativity: cm.log_negativity()?,
            nu_tilde: cm.pt_symplectic_eigenvalue()?,
            p_g,
            separable: cm.is_separable(PHYSICAL_TOL)?,
        })
    }

    /// `P_G / n_A`, `None` when `n_A = 0`.
    pub fn ratio(&self) -> Option<f64> {
        (self.n_bar_a > 0.0).then(|| self.p_g / self.n_bar_a)
    }
}

/// Draws a physical standard form: `a ~ U[1, a_max]`, `b ~ U[1, b_max]`,
/// `c ~ U[0, ((a^2 - 1)(b^2 - 1))^(1/4)]`, `d ~ U[-c, c]`, rejecting unphysical draws.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, a_max: f64, b_max: f64) -> Result<StandardForm> {
    if !(a_max > 1.0 && b_max > 1.0) {
        return Err(Error::InvalidInput(format!(
            "sampling ranges must exceed 1 (a_max = {a_max}, b_max = {b_max})"
        )));
    }
    for _ in 0..MAX_REJECTIONS {
        let a = rng.gen_range(1.0..=a_max);
        let b = rng.gen_range(1.0..=b_max);
        let envelope = ((a * a - 1.0) * (b * b - 1.0)).sqrt().sqrt();
        let c = rng.gen_range(0.0..=envelope);
        let d = if c > 0.0 { rng.gen_range(-c..=c) } else { 0.0 };
        let sf = StandardForm::new(a, b, c, d);
        if sf.to_covariance().is_physical(PHYSICAL_TOL) {
            return Ok(sf);
        }
    }
    Err(Error::Numerical(
        "rejection sampler exhausted its budget".into(),
    ))
}

/// Independent RNG stream `index` of `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sampling constraint for a scatter-plot run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFilter {
    Any,
    Entangled,
}

/// `n` records, record `i` drawn from stream `i` of `seed`, in index order.
pub fn sample_records(seed: u64, n: usize, filter: SampleFilter) -> Result<Vec<SampleRecord>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            for _ in 0..MAX_REJECTIONS {
                let sf = random_state(&mut rng, DEFAULT_MAX_LOCAL, DEFAULT_MAX_LOCAL)?;
                let record = SampleRecord::from_standard_form(sf)?;
                let keep = match filter {
                    SampleFilter::Any => true,
                    SampleFilter::Entangled => !record.separable && record.n_bar_a > 0.0,
                };
                if keep {
                    return Ok(record);
                }
            }
            Err(Error::Numerical(
                "no entangled state found within the rejection budget".into(),
            ))
        })
        .collect()
}

/// Separable and entangled states for the IP versus mean-photon-number plot.
pub fn sample_figure2(seed: u64, n: usize) -> Result<Vec<SampleRecord>> {
    sample_records(seed, n, SampleFilter::Any)
}

/// Entangled states only, for the IP-per-photon versus log-negativity plot.
pub fn sample_figure3(seed: u64, n: usize) -> Result<Vec<SampleRecord>> {
    sample_records(seed, n, SampleFilter::Entangled)
}
