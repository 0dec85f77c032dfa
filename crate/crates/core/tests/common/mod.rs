//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the fidelity or closed-form code paths it is used to
//! check: Fock-basis density matrices, the Gaussian SLD formula for the QFI, and
//! a Schur-based symplectic spectrum.

#![allow(dead_code)]

use gip_core::symplectic::{direct_sum, random_local_symplectic};
use gip_core::{rotation, squeeze, CovarianceMatrix, StandardForm, SymplecticForm};
use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, SymmetricEigen};
use rand::Rng;

/// Thermal-state photon distribution `n^k / (n + 1)^(k + 1)`, truncated to `dim` levels.
pub fn thermal_populations(n_bar: f64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|k| n_bar.powi(k as i32) / (n_bar + 1.0).powi(k as i32 + 1))
        .collect()
}

pub fn thermal_density(n_bar: f64, dim: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(thermal_populations(
        n_bar, dim,
    )))
}

/// Matrix of `a` in the truncated Fock basis.
pub fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(
        dim,
        dim,
        |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 },
    )
}

/// Single-mode squeezer `exp(r/2 (a^2 - a†^2))` in the truncated basis.
pub fn squeeze_operator(r: f64, dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    let ad = a.transpose();
    ((&a * &a - &ad * &ad) * (r / 2.0)).exp()
}

fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let root = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose()
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) tau sqrt(rho)))^2` of real density matrices.
pub fn fock_fidelity(rho: &DMatrix<f64>, tau: &DMatrix<f64>) -> f64 {
    let s = psd_sqrt(rho);
    let inner = &s * tau * &s;
    let inner = (&inner + inner.transpose()) * 0.5;
    let eig = SymmetricEigen::new(inner);
    eig.eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .sum::<f64>()
        .powi(2)
}

/// Fock amplitudes of the single-mode squeezed vacuum with parameter `r`.
pub fn squeezed_vacuum_amplitudes(r: f64, dim: usize) -> Vec<f64> {
    let mut psi = vec![0.0; dim];
    let mut c = 1.0 / r.cosh().sqrt();
    for n in 0..dim / 2 {
        if n > 0 {
            let k = 2 * n;
            c *= -r.tanh() * ((k * (k - 1)) as f64).sqrt() / k as f64;
        }
        psi[2 * n] = c;
    }
    psi
}

/// Photon-number distribution of mode A of the TMSV with `cosh 2r = a`.
pub fn tmsv_populations(a: f64, dim: usize) -> Vec<f64> {
    let lambda_sq = (a - 1.0) / (a + 1.0);
    (0..dim)
        .map(|n| (1.0 - lambda_sq) * lambda_sq.powi(n as i32))
        .collect()
}

/// Symplectic eigenvalues as the moduli of the spectrum of `Omega sigma` (Schur route).
pub fn schur_symplectic_eigenvalues(cm: &CovarianceMatrix) -> (f64, f64) {
    let m = SymplecticForm::matrix() * cm.matrix();
    let mut moduli: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    (moduli[0], moduli[3])
}

/// QFI of `phi -> (T(phi) ⊕ I) sigma (T(phi) ⊕ I)^T` at `phi = 0` from the Gaussian
/// SLD formula `1/2 vec(d sigma)^T (sigma ⊗ sigma - Omega ⊗ Omega)^{-1} vec(d sigma)`.
/// Only valid for mixed states (the 16×16 matrix is singular at purity).
pub fn sld_qfi(cm: &CovarianceMatrix, zeta: f64, theta: f64) -> f64 {
    let generator = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let r = rotation(theta);
    let s = squeeze(zeta);
    let t0 = direct_sum(&(r.transpose() * s * s * r), &Matrix2::zeros())
        + direct_sum(&Matrix2::zeros(), &Matrix2::identity());
    let dt = direct_sum(&(r.transpose() * s * generator * s * r), &Matrix2::zeros());
    let sigma = cm.matrix();
    let sigma0 = t0 * sigma * t0.transpose();
    let dsigma = dt * sigma * t0.transpose() + t0 * sigma * dt.transpose();
    let omega = SymplecticForm::matrix();
    let big: SMatrix<f64, 16, 16> = sigma0.kronecker(&sigma0) - omega.kronecker(&omega);
    let v = SMatrix::<f64, 16, 1>::from_iterator(dsigma.iter().copied());
    let solved = big
        .lu()
        .solve(&v)
        .expect("mixed state gives an invertible SLD system");
    0.5 * v.dot(&solved)
}

/// A random physical covariance matrix outside standard form.
pub fn random_physical<R: Rng>(rng: &mut R) -> CovarianceMatrix {
    let sf = gip_core::sampling::random_state(rng, 5.0, 5.0).unwrap();
    conjugate_randomly(rng, &sf.to_covariance())
}

pub fn conjugate_randomly<R: Rng>(rng: &mut R, cm: &CovarianceMatrix) -> CovarianceMatrix {
    let s_a = random_local_symplectic(rng);
    let s_b = random_local_symplectic(rng);
    cm.apply_local_symplectic(&s_a, &s_b).unwrap()
}

/// Product state `alpha ⊕ beta` built from random single-mode thermal squeezed states.
pub fn random_product<R: Rng>(rng: &mut R) -> CovarianceMatrix {
    let a = rng.gen_range(1.0..5.0);
    let b = rng.gen_range(1.0..5.0);
    let base = StandardForm::new(a, b, 0.0, 0.0).to_covariance();
    conjugate_randomly(rng, &base)
}

/// Random physical standard form with `d = -c` (`sign = -1`) or `d = +c` (`sign = 1`).
pub fn random_dc_state<R: Rng>(rng: &mut R, sign: f64) -> StandardForm {
    loop {
        let a: f64 = rng.gen_range(1.0..5.0);
        let b: f64 = rng.gen_range(1.0..5.0);
        let envelope = ((a * a - 1.0) * (b * b - 1.0)).sqrt().sqrt();
        let c = rng.gen_range(0.05 * envelope..envelope);
        let sf = StandardForm::new(a, b, c, sign * c);
        if sf.to_covariance().is_physical(1e-9) {
            return sf;
        }
    }
}

pub fn matrix_of(rows: [[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| rows[i][j])
}
