//! Worst-case QFI over the local Gaussian black boxes.
//!
//! A coarse grid over `(log2 zeta, theta)` locates the basin, then a
//! Nelder–Mead simplex polishes the minimum.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::fidelity::qfi_unchecked;
use crate::symplectic::{CovarianceMatrix, PHYSICAL_TOL};

pub const LOG2_ZETA_RANGE: f64 = 2.5;
pub const ZETA_GRID_POINTS: usize = 41;
pub const THETA_GRID_POINTS: usize = 37;
pub const REFINE_MAX_EVALS: usize = 200;

/// Minimum of the QFI over `(zeta, theta)` and where it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub zeta_opt: f64,
    /// In `[0, pi)`.
    pub theta_opt: f64,
    /// The minimizer sits on the edge of the `log2 zeta` search interval.
    pub boundary_warning: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once the simplex values spread less than this.
    pub f_tol: f64,
    /// Stop once every vertex is this close to the best one.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: REFINE_MAX_EVALS,
            f_tol: 1e-12,
            x_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Derivative-free simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// The objective may return `Err` or a non-finite value for points outside its
/// domain; such points are ranked as `+inf`.
pub fn nelder_mead<const N: usize, F>(
    mut f: F,
    start: [f64; N],
    steps: [f64; N],
    opts: &NelderMeadOptions,
) -> NelderMeadResult<N>
where
    F: FnMut(&[f64; N]) -> f64,
{
    let mut evals = 0;
    let mut eval = |x: &[f64; N], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, eval(&start, &mut evals)));
    for i in 0..N {
        let mut x = start;
        x[i] += steps[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let combine = |a: &[f64; N], b: &[f64; N], t: f64| -> [f64; N] {
        std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
    };

    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
        let (best, worst) = (simplex[0], simplex[N]);
        let spread = (worst.1 - best.1).abs();
        let size = simplex
            .iter()
            .flat_map(|(x, _)| x.iter().zip(best.0.iter()).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol || size <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid: [f64; N] =
            std::array::from_fn(|i| simplex[..N].iter().map(|(x, _)| x[i]).sum::<f64>() / N as f64);

        let reflected = combine(&centroid, &worst.0, -1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < best.1 {
            let expanded = combine(&centroid, &worst.0, -2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[N] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let x = combine(&centroid, &reflected, 0.5);
            (x, eval(&x, &mut evals))
        } else {
            let x = combine(&centroid, &worst.0, 0.5);
            (x, eval(&x, &mut evals))
        };
        if fc < worst.1.min(fr) {
            simplex[N] = (contracted, fc);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best.0, &vertex.0, 0.5);
            *vertex = (x, eval(&x, &mut evals));
        }
    }

    let (x, value) = simplex
        .into_iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .expect("simplex is non-empty");
    NelderMeadResult {
        x,
        value,
        evals,
        converged,
    }
}

/// Grid point ordering: by value, then smallest `theta`, then smallest `|log2 zeta|`.
fn grid_order(a: &(f64, f64, f64), b: &(f64, f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then(a.2.total_cmp(&b.2))
        .then(a.1.abs().total_cmp(&b.1.abs()))
}

/// The black box satisfies `T(zeta, theta + pi/2) = T(1/zeta, theta)`, so every
/// optimum has a twin. Reports the one with `theta` closest to `0 mod pi`.
fn canonical_argmin(log_zeta: f64, theta: f64) -> (f64, f64) {
    let theta = theta.rem_euclid(PI);
    if (FRAC_PI_4..3.0 * FRAC_PI_4).contains(&theta) {
        (-log_zeta, (theta - FRAC_PI_2).rem_euclid(PI))
    } else {
        (log_zeta, theta)
    }
}

/// Infimum of the QFI over `log2 zeta in [-2.5, 2.5]`, `theta in [0, pi)`.
pub fn worst_case_qfi(cm: &CovarianceMatrix) -> Result<WorstCase> {
    cm.ensure_physical(PHYSICAL_TOL)?;
    let objective = |log_zeta: f64, theta: f64| -> f64 {
        qfi_unchecked(cm, 0.0, 2f64.powf(log_zeta), theta)
            .map(|q| q.value)
            .unwrap_or(f64::INFINITY)
    };

    let zeta_step = 2.0 * LOG2_ZETA_RANGE / (ZETA_GRID_POINTS - 1) as f64;
    let theta_step = PI / THETA_GRID_POINTS as f64;
    let mut evaluations = 0;
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..ZETA_GRID_POINTS {
        let log_zeta = -LOG2_ZETA_RANGE + i as f64 * zeta_step;
        for j in 0..THETA_GRID_POINTS {
            let theta = j as f64 * theta_step;
            let value = objective(log_zeta, theta);
            evaluations += 1;
            if !value.is_finite() {
                continue;
            }
            let candidate = (value, log_zeta, theta);
            if best.is_none_or(|b| grid_order(&candidate, &b) == Ordering::Less) {
                best = Some(candidate);
            }
        }
    }
    let (grid_value, grid_log_zeta, grid_theta) =
        best.ok_or_else(|| Error::Optimizer("every grid evaluation was non-finite".into()))?;

    let refined = nelder_mead(
        |x: &[f64; 2]| {
            if x[0].abs() > LOG2_ZETA_RANGE {
                f64::INFINITY
            } else {
                objective(x[0], x[1])
            }
        },
        [grid_log_zeta, grid_theta],
        [
            if grid_log_zeta + zeta_step > LOG2_ZETA_RANGE {
                -zeta_step
            } else {
                zeta_step
            },
            theta_step,
        ],
        &NelderMeadOptions::default(),
    );
    evaluations += refined.evals;

    let (value, log_zeta, theta) = if refined.value < grid_value {
        (refined.value, refined.x[0], refined.x[1])
    } else {
        (grid_value, grid_log_zeta, grid_theta)
    };
    let (log_zeta, theta) = canonical_argmin(log_zeta, theta);
    Ok(WorstCase {
        value,
        zeta_opt: 2f64.powf(log_zeta),
        theta_opt: theta,
        boundary_warning: log_zeta.abs() >= LOG2_ZETA_RANGE - 1e-9,
        evaluations,
    })
}
