//! Uhlmann fidelity between zero-mean two-mode Gaussian states and the quantum
//! Fisher information of the black-box family obtained from it.

use nalgebra::Matrix4;

use crate::blackbox::{apply_blackbox, BlackBoxParams};
use crate::error::{Error, Result};
use crate::symplectic::{CovarianceMatrix, SymplecticForm, PHYSICAL_TOL};

/// `|D - 1|` below which both states of a pair are treated as pure.
const PURE_PAIR_TOL: f64 = 1e-7;
/// `|D - 1|` below which a single state is pure to rounding accuracy.
const PURE_STATE_TOL: f64 = 1e-12;
const RADICAND_TOL: f64 = 1e-9;

/// Base finite-difference step in the black-box phase.
pub const QFI_BASE_STEP: f64 = 1e-3;
/// Step used when the Richardson correction at the base step is too large.
pub const QFI_RETRY_STEP: f64 = 1e-2;

/// Fidelity `F` (squared Uhlmann convention, `F(vac, thermal n) = 1/(n + 1)`).
///
/// Errors if either input fails the bona fide test.
pub fn fidelity(cm1: &CovarianceMatrix, cm2: &CovarianceMatrix) -> Result<f64> {
    cm1.ensure_physical(PHYSICAL_TOL)?;
    cm2.ensure_physical(PHYSICAL_TOL)?;
    fidelity_unchecked(cm1, cm2)
}

/// Marian two-mode fidelity with `Gamma = 16 det[Omega V1 Omega V2 - I/4]`, `V = sigma/2`.
///
/// When either state is pure the general expression takes the square root of a
/// quantity that vanishes identically; those cases use the exact pure-state
/// overlap `1/sqrt(det[(sigma1 + sigma2)/2])` instead.
pub(crate) fn fidelity_unchecked(cm1: &CovarianceMatrix, cm2: &CovarianceMatrix) -> Result<f64> {
    let (s1, s2) = (cm1.matrix(), cm2.matrix());
    let inv1 = cm1.local_invariants();
    let inv2 = cm2.local_invariants();
    let upsilon = ((s1 + s2) * 0.5).determinant();
    if upsilon.is_nan() || upsilon <= 0.0 {
        return Err(Error::Numerical(format!(
            "det[(sigma1 + sigma2)/2] = {upsilon}"
        )));
    }

    let (p1, p2) = ((inv1.D - 1.0).abs(), (inv2.D - 1.0).abs());
    let f = if p1 < PURE_PAIR_TOL && p2 < PURE_PAIR_TOL {
        // Normalized so F(sigma, sigma) = 1 holds exactly for near-pure pairs too.
        (inv1.D * inv2.D).sqrt().sqrt() / upsilon.sqrt()
    } else if p1 < PURE_STATE_TOL || p2 < PURE_STATE_TOL {
        1.0 / upsilon.sqrt()
    } else {
        marian(
            s1,
            s2,
            inv1.uncertainty_det(),
            inv2.uncertainty_det(),
            upsilon,
        )?
    };
    if !f.is_finite() {
        return Err(Error::Numerical("non-finite fidelity".into()));
    }
    Ok(f)
}

fn marian(s1: &Matrix4<f64>, s2: &Matrix4<f64>, u1: f64, u2: f64, upsilon: f64) -> Result<f64> {
    let omega = SymplecticForm::matrix();
    let quarter = Matrix4::identity() * 0.25;
    let gamma = 16.0 * (omega * (s1 * 0.5) * omega * (s2 * 0.5) - quarter).determinant();
    // det[(sigma + i Omega)/2] = det(sigma + i Omega)/16.
    let lambda = u1.max(0.0) * u2.max(0.0) / 16.0;
    if gamma < -RADICAND_TOL * upsilon {
        return Err(Error::Numerical(format!("Gamma = {gamma} is negative")));
    }
    let sum = gamma.max(0.0).sqrt() + lambda.sqrt();
    let radicand = sum * sum - upsilon;
    if radicand < -RADICAND_TOL * upsilon {
        return Err(Error::Numerical(format!(
            "fidelity radicand {radicand} is negative"
        )));
    }
    // 1/(s - sqrt(s^2 - U)) = (s + sqrt(s^2 - U))/U
    Ok((sum + radicand.max(0.0).sqrt()) / upsilon)
}

/// Finite-difference estimate of the quantum Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiEstimate {
    pub value: f64,
    /// Finite-difference step in the phase.
    pub step: f64,
    /// Magnitude of the Richardson correction.
    pub error_estimate: f64,
}

/// QFI of the family `phi -> apply_blackbox(cm, (phi, zeta, theta))`.
///
/// Uses `-2 d^2F/d eps^2` of `F(sigma^0, sigma^eps)`, which equals `F(sigma^phi, sigma^{phi+eps})`
/// for every base phase `phi`.
pub fn qfi(cm: &CovarianceMatrix, zeta: f64, theta: f64) -> Result<QfiEstimate> {
    qfi_at_phase(cm, 0.0, zeta, theta)
}

/// Same as [`qfi`] but differentiating around the base phase `phi0`.
pub fn qfi_at_phase(
    cm: &CovarianceMatrix,
    phi0: f64,
    zeta: f64,
    theta: f64,
) -> Result<QfiEstimate> {
    cm.ensure_physical(PHYSICAL_TOL)?;
    BlackBoxParams::new(phi0, zeta, theta)?;
    qfi_unchecked(cm, phi0, zeta, theta)
}

pub(crate) fn qfi_unchecked(
    cm: &CovarianceMatrix,
    phi0: f64,
    zeta: f64,
    theta: f64,
) -> Result<QfiEstimate> {
    let first = richardson(cm, phi0, zeta, theta, QFI_BASE_STEP)?;
    let est = if first.error_estimate > 1e-5 * first.value.abs().max(1.0) {
        let retry = richardson(cm, phi0, zeta, theta, QFI_RETRY_STEP)?;
        if retry.error_estimate < first.error_estimate {
            retry
        } else {
            first
        }
    } else {
        first
    };
    if !est.value.is_finite() || !est.error_estimate.is_finite() {
        return Err(Error::Numerical("non-finite QFI estimate".into()));
    }
    Ok(QfiEstimate {
        value: est.value.max(0.0),
        ..est
    })
}

fn richardson(
    cm: &CovarianceMatrix,
    phi0: f64,
    zeta: f64,
    theta: f64,
    step: f64,
) -> Result<QfiEstimate> {
    let at = |phi: f64| apply_blackbox(cm, &BlackBoxParams { phi, zeta, theta });
    let base = at(phi0);
    let second_difference = |eps: f64| -> Result<f64> {
        let plus = fidelity_unchecked(&base, &at(phi0 + eps))?;
        let minus = fidelity_unchecked(&base, &at(phi0 - eps))?;
        Ok(-2.0 * (plus + minus - 2.0) / (eps * eps))
    };
    let coarse = second_difference(step)?;
    let fine = second_difference(step / 2.0)?;
    let correction = (fine - coarse) / 3.0;
    Ok(QfiEstimate {
        value: fine + correction,
        step,
        error_estimate: correction.abs(),
    })
}
