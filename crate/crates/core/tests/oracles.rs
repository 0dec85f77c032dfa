mod common;

use common::*;
use gip_core::blackbox::apply_blackbox;
use gip_core::sampling::stream_rng;
use gip_core::{fidelity, qfi, BlackBoxParams, CovarianceMatrix, StandardForm};
use nalgebra::DMatrix;

fn single_mode_with_vacuum(alpha: [[f64; 2]; 2]) -> CovarianceMatrix {
    CovarianceMatrix::from_rows([
        [alpha[0][0], alpha[0][1], 0.0, 0.0],
        [alpha[1][0], alpha[1][1], 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap()
}

#[test]
fn thermal_vs_vacuum_matches_fock() {
    let dim = 60;
    for n_bar in [0.25, 1.0, 3.0] {
        let fock = fock_fidelity(&thermal_density(n_bar, dim), &thermal_density(0.0, dim));
        let a = 2.0 * n_bar + 1.0;
        let gaussian = fidelity(
            &single_mode_with_vacuum([[a, 0.0], [0.0, a]]),
            &CovarianceMatrix::vacuum(),
        )
        .unwrap();
        assert!(
            (fock - gaussian).abs() < 1e-9,
            "n = {n_bar}: {fock} vs {gaussian}"
        );
        assert!((gaussian - 1.0 / (n_bar + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn thermal_vs_thermal_matches_fock() {
    let dim = 200;
    for (n1, n2) in [(0.5, 1.0), (2.0, 0.1), (1.5, 1.5)] {
        let fock = fock_fidelity(&thermal_density(n1, dim), &thermal_density(n2, dim));
        let (a1, a2) = (2.0 * n1 + 1.0, 2.0 * n2 + 1.0);
        let gaussian = fidelity(
            &single_mode_with_vacuum([[a1, 0.0], [0.0, a1]]),
            &single_mode_with_vacuum([[a2, 0.0], [0.0, a2]]),
        )
        .unwrap();
        assert!((fock - gaussian).abs() < 1e-9, "{fock} vs {gaussian}");
    }
}

#[test]
fn squeezed_vacuum_vs_vacuum_matches_fock() {
    let dim = 120;
    for r in [0.2f64, 0.6, 1.0] {
        let psi = squeezed_vacuum_amplitudes(r, dim);
        let fock = psi[0] * psi[0];
        let e = (2.0 * r).exp();
        let gaussian = fidelity(
            &single_mode_with_vacuum([[1.0 / e, 0.0], [0.0, e]]),
            &CovarianceMatrix::vacuum(),
        )
        .unwrap();
        assert!((fock - gaussian).abs() < 1e-12);
        assert!((gaussian - 1.0 / r.cosh()).abs() < 1e-12);
    }
}

#[test]
fn squeezed_thermal_vs_thermal_matches_fock() {
    // Non-commuting mixed pair: exercises the general (non-pure) fidelity branch.
    let dim = 90;
    let (n1, n2, r) = (0.5, 1.0, 0.3f64);
    let s = squeeze_operator(r, dim);
    let rho: DMatrix<f64> = &s * thermal_density(n1, dim) * s.transpose();
    let fock = fock_fidelity(&rho, &thermal_density(n2, dim));
    let (a1, a2) = (2.0 * n1 + 1.0, 2.0 * n2 + 1.0);
    let e = (2.0 * r).exp();
    let gaussian = fidelity(
        &single_mode_with_vacuum([[a1 / e, 0.0], [0.0, a1 * e]]),
        &single_mode_with_vacuum([[a2, 0.0], [0.0, a2]]),
    )
    .unwrap();
    assert!((fock - gaussian).abs() < 1e-8, "{fock} vs {gaussian}");
}

#[test]
fn rotated_tmsv_matches_fock_series() {
    let a = 2.0;
    let c = (a * a - 1.0f64).sqrt();
    let tmsv = StandardForm::new(a, a, c, -c).to_covariance();
    let populations = tmsv_populations(a, 400);
    for phi in [0.05f64, 0.1, 0.7] {
        // |<psi| e^{i phi n_A} |psi>|^2 = |sum_n p_n e^{i n phi}|^2
        let (re, im) = populations
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (n, p)| {
                (
                    re + p * (n as f64 * phi).cos(),
                    im + p * (n as f64 * phi).sin(),
                )
            });
        let fock = re * re + im * im;
        let rotated = apply_blackbox(&tmsv, &BlackBoxParams::new(phi, 1.0, 0.0).unwrap());
        let gaussian = fidelity(&tmsv, &rotated).unwrap();
        assert!(
            (fock - gaussian).abs() < 1e-12,
            "phi = {phi}: {fock} vs {gaussian}"
        );
    }
}

#[test]
fn tmsv_qfi_matches_photon_number_variance() {
    for a in [1.5, 2.0, 3.0] {
        let c = (a * a - 1.0f64).sqrt();
        let tmsv = StandardForm::new(a, a, c, -c).to_covariance();
        let p = tmsv_populations(a, 2000);
        let mean: f64 = p.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let second: f64 = p.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
        let expected = 4.0 * (second - mean * mean);
        let q = qfi(&tmsv, 1.0, 0.0).unwrap();
        assert!(
            (q.value - expected).abs() < 1e-4 * expected.max(1.0),
            "{a}: {q:?} vs {expected}"
        );
    }
}

#[test]
fn qfi_matches_sld_formula() {
    let mut rng = stream_rng(2024, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let cm = random_physical(&mut rng);
        let zeta = 2f64.powf(rand::Rng::gen_range(&mut rng, -2.0..2.0));
        let theta = rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::PI);
        let expected = sld_qfi(&cm, zeta, theta);
        let got = qfi(&cm, zeta, theta).unwrap().value;
        let dev = (got - expected).abs() / expected.max(1.0);
        worst = worst.max(dev);
    }
    assert!(worst < 1e-6, "worst relative deviation {worst}");
}

#[test]
fn qfi_spot_value_matches_sld_formula() {
    let cm = StandardForm::new(2.0, 3.0, 1.0, -1.0).to_covariance();
    assert!((sld_qfi(&cm, 1.0, 0.0) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn symplectic_eigenvalues_match_schur() {
    let mut rng = stream_rng(77, 0);
    for _ in 0..300 {
        let cm = random_physical(&mut rng);
        let (m, p) = cm.symplectic_eigenvalues().unwrap();
        let (m_ref, p_ref) = schur_symplectic_eigenvalues(&cm);
        assert!((m - m_ref).abs() < 1e-8 * p_ref && (p - p_ref).abs() < 1e-8 * p_ref);
    }
    let s = StandardForm::new(2.0, 3.0, 1.0, -1.0).to_covariance();
    let (m_ref, _) = schur_symplectic_eigenvalues(&s);
    assert!((m_ref - 1.7913).abs() < 1e-4);
}
