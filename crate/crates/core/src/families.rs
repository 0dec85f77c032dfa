//! Named two-mode state families, the extremal families of the IP-per-photon
//! versus entanglement plane, and the boundary curves they trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ip::gip_closed_form;
use crate::symplectic::{StandardForm, PHYSICAL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Tmsv,
    SqueezedThermal,
    MixedThermal,
    SeparableExtremal,
    EntangledStNu,
    UpperBoundary,
    LowerBranch1,
    LowerBranch2,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::Tmsv,
        FamilyKind::SqueezedThermal,
        FamilyKind::MixedThermal,
        FamilyKind::SeparableExtremal,
        FamilyKind::EntangledStNu,
        FamilyKind::UpperBoundary,
        FamilyKind::LowerBranch1,
        FamilyKind::LowerBranch2,
    ];

    /// Parameter names, in the order [`FamilySpec::params`] expects them.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            FamilyKind::Tmsv => &["a"],
            FamilyKind::SqueezedThermal | FamilyKind::MixedThermal => &["a", "b", "c"],
            FamilyKind::SeparableExtremal => &["a", "b"],
            FamilyKind::EntangledStNu => &["a", "b", "nu"],
            FamilyKind::UpperBoundary => &["nu", "b"],
            FamilyKind::LowerBranch1 | FamilyKind::LowerBranch2 => &["nu"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Vec<f64>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<StandardForm> {
        let names = self.kind.param_names();
        if self.params.len() != names.len() {
            return Err(Error::InvalidInput(format!(
                "{:?} takes {} parameter(s) ({}), got {}",
                self.kind,
                names.len(),
                names.join(", "),
                self.params.len()
            )));
        }
        let p = &self.params;
        match self.kind {
            FamilyKind::Tmsv => tmsv(p[0]),
            FamilyKind::SqueezedThermal => squeezed_thermal(p[0], p[1], p[2]),
            FamilyKind::MixedThermal => mixed_thermal(p[0], p[1], p[2]),
            FamilyKind::SeparableExtremal => separable_extremal(p[0], p[1]),
            FamilyKind::EntangledStNu => entangled_st_nu(p[0], p[1], p[2]),
            FamilyKind::UpperBoundary => upper_boundary_state(p[0], p[1]),
            FamilyKind::LowerBranch1 => lower_branch1_state(p[0]),
            FamilyKind::LowerBranch2 => lower_branch2_state(p[0]),
        }
    }
}

fn checked(sf: StandardForm) -> Result<StandardForm> {
    if !sf.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite standard form {sf:?}"
        )));
    }
    sf.to_covariance().ensure_physical(PHYSICAL_TOL)?;
    Ok(sf)
}

fn require_at_least_one(name: &str, x: f64) -> Result<()> {
    if x >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} = {x} must be >= 1")))
    }
}

fn require_unit_interval(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("nu = {nu} must lie in (0, 1)")))
    }
}

/// Two-mode squeezed vacuum `(a, a, sqrt(a^2 - 1), -sqrt(a^2 - 1))`.
pub fn tmsv(a: f64) -> Result<StandardForm> {
    require_at_least_one("a", a)?;
    let c = (a * a - 1.0).sqrt();
    checked(StandardForm::new(a, a, c, -c))
}

/// Squeezed thermal state, `d = -c`.
pub fn squeezed_thermal(a: f64, b: f64, c: f64) -> Result<StandardForm> {
    checked(StandardForm::new(a, b, c, -c))
}

/// Mixed thermal state, `d = c`.
pub fn mixed_thermal(a: f64, b: f64, c: f64) -> Result<StandardForm> {
    checked(StandardForm::new(a, b, c, c))
}

/// Separable mixed thermal state with `c = d = sqrt((a-1)(b-1))`; its IP tends to
/// the shot-noise value `n_A` as `b` grows.
pub fn separable_extremal(a: f64, b: f64) -> Result<StandardForm> {
    require_at_least_one("a", a)?;
    require_at_least_one("b", b)?;
    let c = ((a - 1.0) * (b - 1.0)).sqrt();
    checked(StandardForm::new(a, b, c, c))
}

/// Entangled squeezed thermal state with partial-transpose eigenvalue `nu`:
/// `-d = c = sqrt((a - nu)(b - nu))`.
pub fn entangled_st_nu(a: f64, b: f64, nu: f64) -> Result<StandardForm> {
    require_unit_interval(nu)?;
    require_at_least_one("a", a)?;
    require_at_least_one("b", b)?;
    let c = ((a - nu) * (b - nu)).sqrt();
    checked(StandardForm::new(a, b, c, -c))
}

/// IP per photon of [`entangled_st_nu`]:
/// `(a - nu)(b - nu) / ((a - 1)(a nu + b nu - nu^2 + 1))`.
pub fn st_nu_ratio(a: f64, b: f64, nu: f64) -> f64 {
    (a - nu) * (b - nu) / ((a - 1.0) * (a * nu + b * nu - nu * nu + 1.0))
}

/// Upper-boundary state at finite `b`, with `a = (1 + b - b nu + nu^2)/(1 + nu)`.
pub fn upper_boundary_state(nu: f64, b: f64) -> Result<StandardForm> {
    require_unit_interval(nu)?;
    let a = (1.0 + b - b * nu + nu * nu) / (1.0 + nu);
    entangled_st_nu(a, b, nu)
}

/// First lower-branch extremal state, valid for `nu_zero() < nu < 1`.
pub fn lower_branch1_state(nu: f64) -> Result<StandardForm> {
    require_unit_interval(nu)?;
    let a = ((2.0 * (nu + 1.0).powi(3)).sqrt() + 3.0 * nu + 1.0) / (1.0 - nu);
    let b = (2.0 * (nu + 1.0)).sqrt() + nu + 2.0;
    entangled_st_nu(a, b, nu)
}

/// Second lower branch: the pure TMSV whose partial transpose has eigenvalue `nu`,
/// `a = (1 + nu^2)/(2 nu)`.
pub fn lower_branch2_state(nu: f64) -> Result<StandardForm> {
    require_unit_interval(nu)?;
    tmsv((1.0 + nu * nu) / (2.0 * nu))
}

/// `(1 + nu)/(2 nu)`.
pub fn upper_bound(nu: f64) -> f64 {
    (1.0 + nu) / (2.0 * nu)
}

fn branch1_denominator(nu: f64) -> f64 {
    2.0 / (nu + 1.0) - 2.0 / (nu - 1.0) - 2.0 * 2f64.sqrt() / (nu + 1.0).sqrt() - 1.0
}

fn branch1_denominator_derivative(nu: f64) -> f64 {
    -2.0 / (nu + 1.0).powi(2) + 2.0 / (nu - 1.0).powi(2) + 2f64.sqrt() * (nu + 1.0).powf(-1.5)
}

pub fn lower_branch1_bound(nu: f64) -> f64 {
    1.0 / branch1_denominator(nu)
}

/// `(nu + 1)^2 / (4 nu)`, the IP per photon of every pure state.
pub fn lower_branch2_bound(nu: f64) -> f64 {
    (nu + 1.0).powi(2) / (4.0 * nu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerBranch {
    Branch1,
    Branch2,
}

impl LowerBranch {
    pub fn index(&self) -> u8 {
        match self {
            LowerBranch::Branch1 => 1,
            LowerBranch::Branch2 => 2,
        }
    }
}

pub fn lower_branch(nu: f64) -> LowerBranch {
    if nu > nu_zero() {
        LowerBranch::Branch1
    } else {
        LowerBranch::Branch2
    }
}

pub fn lower_bound(nu: f64) -> f64 {
    match lower_branch(nu) {
        LowerBranch::Branch1 => lower_branch1_bound(nu),
        LowerBranch::Branch2 => lower_branch2_bound(nu),
    }
}

fn newton(mut x: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, tol: f64) -> f64 {
    for _ in 0..100 {
        let step = f(x) / df(x);
        x -= step;
        if step.abs() <= tol * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// `nu^3 + nu^2 + 7 nu - 1`.
pub fn branch_point_cubic(nu: f64) -> f64 {
    ((nu + 1.0) * nu + 7.0) * nu - 1.0
}

/// Real root of [`branch_point_cubic`] (about 0.1397), where the two lower branches meet.
pub fn nu_zero() -> f64 {
    static ROOT: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *ROOT.get_or_init(|| {
        newton(
            0.14,
            branch_point_cubic,
            |nu| (3.0 * nu + 2.0) * nu + 7.0,
            1e-16,
        )
    })
}

/// Logarithmic negativity above which every state beats the shot-noise limit:
/// `-ln nu` at the point where the first lower branch equals one.
pub fn en_threshold() -> f64 {
    let nu = newton(
        (-1.135f64).exp(),
        |nu| branch1_denominator(nu) - 1.0,
        branch1_denominator_derivative,
        1e-16,
    );
    -nu.ln()
}

/// IP per mean photon of mode A (closed form), `None` when `n_A = 0`.
pub fn ip_per_photon(sf: &StandardForm) -> Result<Option<f64>> {
    let cm = sf.to_covariance();
    let n = cm.mean_photon_a();
    let p = gip_closed_form(&cm)?.value;
    Ok((n > 0.0).then(|| p / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::gip_special;
    use approx::assert_relative_eq;

    fn pt_nu(sf: &StandardForm) -> f64 {
        sf.to_covariance().pt_symplectic_eigenvalue().unwrap()
    }

    fn ratio(sf: &StandardForm) -> f64 {
        ip_per_photon(sf).unwrap().unwrap()
    }

    #[test]
    fn tmsv_examples() {
        assert_eq!(tmsv(1.0).unwrap(), StandardForm::new(1.0, 1.0, 0.0, 0.0));
        let t = tmsv(2.0).unwrap();
        assert_eq!(t.c, 3f64.sqrt());
        assert_eq!(t.d, -(3f64.sqrt()));
        assert_relative_eq!(pt_nu(&t), 2.0 - 3f64.sqrt(), epsilon = 1e-12);
        assert!(tmsv(0.5).is_err());
    }

    #[test]
    fn thermal_families() {
        assert_eq!(squeezed_thermal(2.0, 3.0, 1.0).unwrap().d, -1.0);
        assert_eq!(mixed_thermal(2.0, 3.0, 1.0).unwrap().d, 1.0);
        assert!(squeezed_thermal(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn separable_extremal_examples() {
        let s = separable_extremal(3.0, 101.0).unwrap();
        assert_relative_eq!(s.c, 200f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(ratio(&s), 200.0 / 204.0, epsilon = 1e-9);
        assert!((ratio(&separable_extremal(3.0, 1e4).unwrap()) - 1.0).abs() < 1e-3);
        let product = separable_extremal(1.0, 7.0).unwrap();
        assert_eq!(
            gip_closed_form(&product.to_covariance()).unwrap().value,
            0.0
        );
        assert_eq!(s.to_covariance().log_negativity().unwrap(), 0.0);
    }

    #[test]
    fn entangled_st_nu_hits_target() {
        for (a, b, nu) in [(3.0, 2.5, 0.4), (5.0, 5.0, 0.9), (2.0, 4.0, 0.7)] {
            let s = entangled_st_nu(a, b, nu).unwrap();
            assert_relative_eq!(pt_nu(&s), nu, epsilon = 1e-9);
            assert_relative_eq!(ratio(&s), st_nu_ratio(a, b, nu), epsilon = 1e-9);
        }
        assert!(entangled_st_nu(3.0, 3.0, 1.2).is_err());
    }

    #[test]
    fn upper_boundary_examples() {
        let s = upper_boundary_state(0.5, 1e3).unwrap();
        assert!((ratio(&s) - 1.5).abs() < 2e-2);
        assert!(ratio(&s) < 1.5);
        assert_relative_eq!(pt_nu(&s), 0.5, epsilon = 1e-9);
        assert_eq!(upper_bound(1.0), 1.0);
    }

    #[test]
    fn lower_branch1_examples() {
        let s = lower_branch1_state(0.14).unwrap();
        assert!(
            (s.a - 3.653).abs() < 1e-3 && (s.b - 3.650).abs() < 1e-3,
            "{s:?}"
        );
        assert!((ratio(&s) - 2.320).abs() < 1e-3);
        assert_relative_eq!(ratio(&s), lower_branch1_bound(0.14), epsilon = 1e-6);
        assert!((ratio(&lower_branch1_state(0.3214).unwrap()) - 1.0).abs() < 1e-3);
        assert!(lower_branch1_bound(0.999_999) < 1e-5);
    }

    #[test]
    fn lower_branch2_examples() {
        let s = lower_branch2_state(2.0 - 3f64.sqrt()).unwrap();
        assert_relative_eq!(s.a, 2.0, epsilon = 1e-12);
        assert_relative_eq!(ratio(&s), 1.5, epsilon = 1e-12);
        assert_relative_eq!(lower_branch2_bound(1.0), 1.0);
        let nu0 = nu_zero();
        assert!((lower_branch1_bound(nu0) - 2.32).abs() < 1e-2);
        assert!((lower_branch2_bound(nu0) - 2.32).abs() < 1e-2);
    }

    #[test]
    fn nu_zero_examples() {
        let nu0 = nu_zero();
        assert!((nu0 - 0.1397).abs() < 1e-3);
        assert!(branch_point_cubic(nu0).abs() < 1e-12);
        assert!(nu0 > 0.139 && nu0 < 0.140);
        assert!(branch_point_cubic(0.139) < 0.0 && branch_point_cubic(0.140) > 0.0);
    }

    #[test]
    fn en_threshold_examples() {
        let t = en_threshold();
        assert!((t - 1.135).abs() < 2e-3, "{t}");
        assert_relative_eq!(lower_branch1_bound((-t).exp()), 1.0, epsilon = 1e-6);
        // Branch 1 decreases in nu, so more entanglement gives a larger bound.
        assert!(lower_branch1_bound((-t).exp() - 1e-3) > 1.0);
        assert!(lower_branch1_bound((-t).exp() + 1e-3) < 1.0);
    }

    #[test]
    fn bounds_are_ordered_and_continuous() {
        let nu0 = nu_zero();
        assert!((lower_branch1_bound(nu0) - lower_branch2_bound(nu0)).abs() < 1e-6);
        for i in 1..200 {
            let nu = i as f64 / 200.0;
            assert!(lower_bound(nu) <= upper_bound(nu));
        }
    }

    #[test]
    fn family_spec_dispatch() {
        let s = FamilySpec {
            kind: FamilyKind::Tmsv,
            params: vec![2.0],
        }
        .build()
        .unwrap();
        assert_eq!(s, tmsv(2.0).unwrap());
        assert!(FamilySpec {
            kind: FamilyKind::UpperBoundary,
            params: vec![0.5],
        }
        .build()
        .is_err());
        for kind in FamilyKind::ALL {
            assert!(!kind.param_names().is_empty());
        }
    }

    #[test]
    fn special_formula_on_lower_branch_states() {
        let s = lower_branch1_state(0.5).unwrap();
        let n = (s.a - 1.0) / 2.0;
        assert_relative_eq!(
            gip_special(&s, 1e-9).unwrap() / n,
            lower_branch1_bound(0.5),
            epsilon = 1e-9
        );
    }
}
