//! Local Gaussian black-box dynamics on mode A.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::symplectic::{direct_sum, CovarianceMatrix};

/// Phase-space rotation by `phi`.
pub fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Single-mode squeezer `diag(zeta, 1/zeta)`.
pub fn squeeze(zeta: f64) -> Matrix2<f64> {
    Matrix2::new(zeta, 0.0, 0.0, 1.0 / zeta)
}

/// Parameters `(phi, zeta, theta)` of the local black box.
///
/// `theta` is stored reduced to `[0, pi)`: the black box is unchanged by `theta -> theta + pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackBoxParams {
    pub phi: f64,
    pub zeta: f64,
    pub theta: f64,
}

impl BlackBoxParams {
    pub fn new(phi: f64, zeta: f64, theta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "squeezing parameter {zeta} must be > 0"
            )));
        }
        if !phi.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidInput("non-finite black-box angle".into()));
        }
        Ok(Self {
            phi,
            zeta,
            theta: theta.rem_euclid(PI),
        })
    }
}

/// `T = R(theta)^T S(zeta) R(phi) S(zeta) R(theta)`.
pub fn blackbox_symplectic(p: &BlackBoxParams) -> Matrix2<f64> {
    let r_theta = rotation(p.theta);
    let s = squeeze(p.zeta);
    r_theta.transpose() * s * rotation(p.phi) * s * r_theta
}

/// `T = M^T R(phi) M` with the full Euler form `M = R(psi) S(zeta) R(theta)`.
///
/// The outer rotation `psi` commutes with `R(phi)` and drops out, so this agrees
/// with [`blackbox_symplectic`] for every `psi`.
pub fn blackbox_symplectic_euler(phi: f64, psi: f64, zeta: f64, theta: f64) -> Matrix2<f64> {
    let m = rotation(psi) * squeeze(zeta) * rotation(theta);
    m.transpose() * rotation(phi) * m
}

/// Covariance matrix after the black box: `(T ⊕ I) sigma (T ⊕ I)^T`.
pub fn apply_blackbox(cm: &CovarianceMatrix, p: &BlackBoxParams) -> CovarianceMatrix {
    cm.congruence(&direct_sum(&blackbox_symplectic(p), &Matrix2::identity()))
}
