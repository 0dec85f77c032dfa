//! Two-mode covariance-matrix algebra.
//!
//! Quadratures are ordered `(q_A, p_A, q_B, p_B)` with `hbar = 1`, so the
//! vacuum has the identity as covariance matrix and a state is physical iff
//! `sigma + i Omega >= 0`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, SMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blackbox::{rotation, squeeze};
use crate::error::{Error, Result};

/// Default tolerance on the smallest symplectic eigenvalue when testing physicality.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Relative tolerance below which a negative discriminant is treated as rounding noise.
const DISCRIMINANT_TOL: f64 = 1e-9;

/// Relative size of `s^2 - 4p` below which the two roots are taken as equal.
/// Rounding of the entries alone produces discriminants of this size at a
/// degenerate spectrum, which would otherwise split the roots by ~1e-8.
const DEGENERACY_SNAP: f64 = 1e-13;

/// Tolerance on `det S = 1` for local symplectic transforms.
const SYMPLECTIC_DET_TOL: f64 = 1e-10;

/// The two-mode symplectic form `Omega = J ⊕ J` with `J = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticForm;

impl SymplecticForm {
    pub fn single_mode() -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, -1.0, 0.0)
    }

    pub fn matrix() -> Matrix4<f64> {
        let mut omega = Matrix4::zeros();
        omega
            .fixed_view_mut::<2, 2>(0, 0)
            .copy_from(&Self::single_mode());
        omega
            .fixed_view_mut::<2, 2>(2, 2)
            .copy_from(&Self::single_mode());
        omega
    }
}

/// Real symmetric 4×4 second-moment matrix of a zero-mean two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    sigma: Matrix4<f64>,
}

/// The four local symplectic invariants `A = det alpha`, `B = det beta`,
/// `C = det gamma`, `D = det sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LocalInvariants {
    pub A: f64,
    pub B: f64,
    pub C: f64,
    pub D: f64,
}

impl LocalInvariants {
    /// `Delta = A + B + 2C`, the symplectic-spectrum seminvariant.
    pub fn delta(&self) -> f64 {
        self.A + self.B + 2.0 * self.C
    }

    /// `H = A + B - 2C`, the same seminvariant of the partial transpose.
    pub fn delta_pt(&self) -> f64 {
        self.A + self.B - 2.0 * self.C
    }

    /// `det(sigma + i Omega) = (nu_-^2 - 1)(nu_+^2 - 1)`, zero for pure states.
    pub fn uncertainty_det(&self) -> f64 {
        1.0 + self.D - self.delta()
    }
}

/// Standard-form parameters: `alpha = diag(a, a)`, `beta = diag(b, b)`, `gamma = diag(c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl StandardForm {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn to_covariance(&self) -> CovarianceMatrix {
        let Self { a, b, c, d } = *self;
        CovarianceMatrix {
            sigma: Matrix4::new(
                a, 0.0, c, 0.0, //
                0.0, a, 0.0, d, //
                c, 0.0, b, 0.0, //
                0.0, d, 0.0, b,
            ),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

impl From<StandardForm> for CovarianceMatrix {
    fn from(sf: StandardForm) -> Self {
        sf.to_covariance()
    }
}

/// Outcome of the bona fide (uncertainty principle) test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonaFide {
    pub valid: bool,
    pub nu_minus: f64,
}

/// Smaller root of `x^2 - s x + p = 0` (as `x = nu^2`), computed without cancellation.
fn smaller_square_root(s: f64, p: f64, what: &str) -> Result<f64> {
    let disc = s * s - 4.0 * p;
    if disc < -DISCRIMINANT_TOL * s.abs().max(1.0).powi(2) {
        return Err(Error::Degenerate(format!(
            "{what}: discriminant {disc} is negative"
        )));
    }
    let root = if disc.abs() <= DEGENERACY_SNAP * s * s {
        0.0
    } else {
        disc.max(0.0).sqrt()
    };
    let larger = (s + root) / 2.0;
    if larger <= 0.0 {
        return Ok(0.0);
    }
    Ok(p.max(0.0) / larger)
}

impl CovarianceMatrix {
    /// Builds a covariance matrix, symmetrizing the input as `(M + M^T)/2`.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "covariance matrix has non-finite entries".into(),
            ));
        }
        Ok(Self {
            sigma: (m + m.transpose()) * 0.5,
        })
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn vacuum() -> Self {
        Self {
            sigma: Matrix4::identity(),
        }
    }

    /// Used internally for congruences that are symmetric by construction.
    pub(crate) fn from_symmetric(m: Matrix4<f64>) -> Self {
        Self {
            sigma: (m + m.transpose()) * 0.5,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.sigma
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.sigma[(i, j)]))
    }

    pub fn alpha(&self) -> Matrix2<f64> {
        self.sigma.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn beta(&self) -> Matrix2<f64> {
        self.sigma.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn gamma(&self) -> Matrix2<f64> {
        self.sigma.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn local_invariants(&self) -> LocalInvariants {
        LocalInvariants {
            A: self.alpha().determinant(),
            B: self.beta().determinant(),
            C: self.gamma().determinant(),
            D: self.sigma.determinant(),
        }
    }

    /// Symplectic eigenvalues `(nu_-, nu_+)` from the invariants `Delta` and `D`.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        let inv = self.local_invariants();
        let minus_sq = smaller_square_root(inv.delta(), inv.D, "symplectic spectrum")?;
        let plus_sq = inv.delta() - minus_sq;
        Ok((minus_sq.sqrt(), plus_sq.max(minus_sq).sqrt()))
    }

    /// Bona fide test `sigma + i Omega >= 0` within `tol`.
    ///
    /// Accepts when `nu_- >= 1 - tol`. At a degenerate symplectic spectrum (pure
    /// states) rounding of the entries moves `nu_-` by the square root of the
    /// rounding error, so a failing `nu_-` is re-checked on the smallest eigenvalue
    /// of `sigma + i Omega`, which stays well conditioned there. `nu_minus` is NaN
    /// when the symplectic spectrum is not real.
    pub fn validate_bona_fide(&self, tol: f64) -> Result<BonaFide> {
        let nu_minus = match self.symplectic_eigenvalues() {
            Ok((nu_minus, _)) => nu_minus,
            Err(Error::Degenerate(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        // The symplectic spectrum only certifies sigma + i Omega >= 0 when sigma > 0.
        let positive = self.matrix().cholesky().is_some();
        let valid =
            (positive && nu_minus >= 1.0 - tol) || self.min_uncertainty_eigenvalue() >= -tol;
        Ok(BonaFide { valid, nu_minus })
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.validate_bona_fide(tol).is_ok_and(|r| r.valid)
    }

    /// Returns `self` if physical within `tol`, otherwise an [`Error::Unphysical`].
    pub fn ensure_physical(&self, tol: f64) -> Result<&Self> {
        let report = self.validate_bona_fide(tol)?;
        if report.valid {
            Ok(self)
        } else {
            Err(Error::Unphysical {
                nu_minus: report.nu_minus,
                tol,
            })
        }
    }

    /// Smallest eigenvalue of the Hermitian matrix `sigma + i Omega`.
    ///
    /// Computed through the real symmetric embedding `[[sigma, -Omega], [Omega, sigma]]`,
    /// whose spectrum is that of `sigma + i Omega` with doubled multiplicities.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let omega = SymplecticForm::matrix();
        let mut embed = SMatrix::<f64, 8, 8>::zeros();
        embed.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.sigma);
        embed.fixed_view_mut::<4, 4>(4, 4).copy_from(&self.sigma);
        embed.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-omega));
        embed.fixed_view_mut::<4, 4>(4, 0).copy_from(&omega);
        SymmetricEigen::new(embed).eigenvalues.min()
    }

    /// Momentum flip on mode B: `P sigma P` with `P = diag(1, 1, 1, -1)`.
    pub fn partial_transpose_b(&self) -> Self {
        let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        Self::from_symmetric(p * self.sigma * p)
    }

    /// Smallest symplectic eigenvalue of the partial transpose.
    pub fn pt_symplectic_eigenvalue(&self) -> Result<f64> {
        let inv = self.local_invariants();
        Ok(smaller_square_root(inv.delta_pt(), inv.D, "partial-transpose spectrum")?.sqrt())
    }

    /// `E_N = max{0, -ln nu~}`.
    pub fn log_negativity(&self) -> Result<f64> {
        Ok((-self.pt_symplectic_eigenvalue()?.ln()).max(0.0))
    }

    /// PPT criterion, exact for 1×1-mode Gaussian states.
    pub fn is_separable(&self, tol: f64) -> Result<bool> {
        Ok(self.pt_symplectic_eigenvalue()? >= 1.0 - tol)
    }

    /// Mean photon number of mode A, `(tr alpha - 2)/4`.
    pub fn mean_photon_a(&self) -> f64 {
        (self.alpha().trace() - 2.0) / 4.0
    }

    /// Congruence by `S_A ⊕ S_B`.
    pub fn apply_local_symplectic(&self, s_a: &Matrix2<f64>, s_b: &Matrix2<f64>) -> Result<Self> {
        for (name, s) in [("S_A", s_a), ("S_B", s_b)] {
            let det = s.determinant();
            if !det.is_finite() || (det - 1.0).abs() > SYMPLECTIC_DET_TOL {
                return Err(Error::InvalidTransform(format!("det {name} = {det}")));
            }
        }
        Ok(self.congruence(&direct_sum(s_a, s_b)))
    }

    pub(crate) fn congruence(&self, s: &Matrix4<f64>) -> Self {
        Self::from_symmetric(s * self.sigma * s.transpose())
    }

    /// Pure-loss channel on mode B with transmissivity `eta`.
    pub fn apply_loss_b(&self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "transmissivity {eta} outside (0, 1]"
            )));
        }
        let x = direct_sum(&Matrix2::identity(), &(Matrix2::identity() * eta.sqrt()));
        let mut y = Matrix4::zeros();
        y[(2, 2)] = 1.0 - eta;
        y[(3, 3)] = 1.0 - eta;
        Ok(Self::from_symmetric(x * self.sigma * x.transpose() + y))
    }

    /// Exchanges the roles of modes A and B.
    pub fn swap_modes(&self) -> Self {
        let mut p = Matrix4::zeros();
        p[(0, 2)] = 1.0;
        p[(1, 3)] = 1.0;
        p[(2, 0)] = 1.0;
        p[(3, 1)] = 1.0;
        Self::from_symmetric(p * self.sigma * p.transpose())
    }

    /// Standard form recovered from the local invariants.
    ///
    /// `c^2` and `d^2` are the roots of `x^2 - S x + C^2` with
    /// `S = (AB + C^2 - D)/sqrt(AB)`; `d` carries the sign of `C`.
    pub fn to_standard_form(&self) -> Result<StandardForm> {
        let inv = self.local_invariants();
        if inv.A <= 0.0 || inv.B <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "local determinants must be positive (A = {}, B = {})",
                inv.A, inv.B
            )));
        }
        let a = inv.A.sqrt();
        let b = inv.B.sqrt();
        let s = (inv.A * inv.B + inv.C * inv.C - inv.D) / (a * b);
        let c2sq = inv.C * inv.C;
        let disc = s * s - 4.0 * c2sq;
        if disc < -DISCRIMINANT_TOL * s.abs().max(1.0).powi(2) {
            return Err(Error::Degenerate(format!(
                "inconsistent invariants: standard-form discriminant {disc}"
            )));
        }
        let larger = ((s + disc.max(0.0).sqrt()) / 2.0).max(0.0);
        let smaller = if larger > 0.0 { c2sq / larger } else { 0.0 };
        let c = larger.sqrt();
        let d = if inv.C == 0.0 {
            0.0
        } else {
            inv.C.signum() * smaller.sqrt()
        };
        Ok(StandardForm { a, b, c, d })
    }
}

pub fn direct_sum(s_a: &Matrix2<f64>, s_b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(s_a);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(s_b);
    s
}

/// Random single-mode symplectic `R(psi) S(zeta) R(theta)` (Euler form).
///
/// `psi`, `theta` are uniform on `[0, 2 pi)`, `log2 zeta` uniform on `[-1, 1]`.
pub fn random_local_symplectic<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<f64> {
    let psi = rng.gen_range(0.0..2.0 * PI);
    let theta = rng.gen_range(0.0..2.0 * PI);
    let zeta = 2f64.powf(rng.gen_range(-1.0..=1.0));
    rotation(psi) * squeeze(zeta) * rotation(theta)
}
