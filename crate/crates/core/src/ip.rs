//! Gaussian interferometric power: closed formula and its numerical cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::worst_case_qfi;
use crate::symplectic::{CovarianceMatrix, LocalInvariants, StandardForm, PHYSICAL_TOL};

/// `|D - 1|` below which the pure-state limit of the closed formula is used.
pub const PURE_TOL: f64 = 1e-7;
/// `|Y|` below which the closed formula is abandoned for the numerical infimum.
pub const SINGULAR_Y_TOL: f64 = 1e-9;
const RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IpBranch {
    General,
    Pure,
    SpecialDc,
    FallbackOracle,
}

impl IpBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            IpBranch::General => "general",
            IpBranch::Pure => "pure",
            IpBranch::SpecialDc => "special_dc",
            IpBranch::FallbackOracle => "fallback_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpResult {
    pub value: f64,
    pub branch: IpBranch,
    pub invariants: LocalInvariants,
}

/// The three auxiliary polynomials of the closed formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClosedFormTerms {
    pub fn new(inv: &LocalInvariants) -> Self {
        let LocalInvariants { A, B, C, D } = *inv;
        Self {
            x: (A + C) * (1.0 + B + C - D) - D * D,
            y: (D - 1.0) * (1.0 + A + B + 2.0 * C + D),
            z: (A + D) * (A * B - D) + C * (2.0 * A + C) * (1.0 + B),
        }
    }

    pub fn radicand(&self) -> f64 {
        self.x * self.x + self.y * self.z
    }

    /// `(X + sqrt(X^2 + YZ)) / (2Y)`, rearranged to avoid cancellation when `X < 0`.
    pub fn value(&self) -> Result<f64> {
        let Self { x, y, z } = *self;
        let radicand = self.radicand();
        if radicand < -RADICAND_TOL * x * x {
            return Err(Error::Numerical(format!(
                "closed-form radicand {radicand} is negative"
            )));
        }
        let root = radicand.max(0.0).sqrt();
        let value = if x >= 0.0 {
            (x + root) / (2.0 * y)
        } else {
            z / (2.0 * (root - x))
        };
        if !value.is_finite() {
            return Err(Error::Numerical("non-finite closed-form value".into()));
        }
        Ok(value.max(0.0))
    }
}

/// Closed-form Gaussian IP of mode A.
pub fn gip_closed_form(cm: &CovarianceMatrix) -> Result<IpResult> {
    cm.ensure_physical(PHYSICAL_TOL)?;
    let invariants = cm.local_invariants();
    if (invariants.D - 1.0).abs() < PURE_TOL {
        return Ok(IpResult {
            value: ((invariants.A - 1.0) / 4.0).max(0.0),
            branch: IpBranch::Pure,
            invariants,
        });
    }
    let terms = ClosedFormTerms::new(&invariants);
    if terms.y.abs() < SINGULAR_Y_TOL {
        let worst = worst_case_qfi(cm)?;
        return Ok(IpResult {
            value: worst.value / 4.0,
            branch: IpBranch::FallbackOracle,
            invariants,
        });
    }
    Ok(IpResult {
        value: terms.value()?,
        branch: IpBranch::General,
        invariants,
    })
}

/// Gaussian IP with the roles of the modes exchanged.
pub fn gip_closed_form_b(cm: &CovarianceMatrix) -> Result<IpResult> {
    gip_closed_form(&cm.swap_modes())
}

/// Closed form for standard-form states with `d = -c` or `d = +c`:
/// `c^2 / (2(ab - c^2 ± 1))`, `+` for `d = -c`.
pub fn gip_special(sf: &StandardForm, tol: f64) -> Result<f64> {
    let StandardForm { a, b, c, d } = *sf;
    let sign = if (d + c).abs() < tol {
        1.0
    } else if (d - c).abs() < tol {
        -1.0
    } else {
        return Err(Error::InvalidInput(format!(
            "d = {d} is neither -c nor +c (c = {c})"
        )));
    };
    let denominator = 2.0 * (a * b - c * c + sign);
    if denominator <= tol {
        return Err(Error::Degenerate(format!(
            "denominator {denominator} is not positive"
        )));
    }
    Ok(c * c / denominator)
}

/// Pure-state value `(a^2 - 1)/4 = n(n + 1)` with `n = (a - 1)/2`.
pub fn gip_pure(a: f64) -> f64 {
    (a * a - 1.0) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossValidation {
    pub closed: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

/// Compares the closed form with a quarter of the numerically minimized QFI.
pub fn cross_validate(cm: &CovarianceMatrix, tol: f64) -> Result<CrossValidation> {
    let closed = gip_closed_form(cm)?.value;
    let oracle = worst_case_qfi(cm)?.value / 4.0;
    let abs_diff = (closed - oracle).abs();
    Ok(CrossValidation {
        closed,
        oracle,
        abs_diff,
        pass: abs_diff <= tol * closed.max(1.0),
    })
}
