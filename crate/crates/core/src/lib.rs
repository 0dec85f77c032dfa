//! Gaussian interferometric power of two-mode Gaussian states.
//!
//! The interferometric power is a quarter of the worst-case quantum Fisher
//! information a two-mode probe provides when an unknown local Gaussian phase
//! dynamics acts on mode A. [`gip_closed_form`] evaluates it from the four local
//! symplectic invariants; [`worst_case_qfi`] recomputes the same infimum
//! numerically from the Uhlmann fidelity, independent of the closed form.

pub mod blackbox;
pub mod error;
pub mod families;
pub mod fidelity;
pub mod io;
pub mod ip;
pub mod optimize;
pub mod sampling;
pub mod symplectic;

pub use blackbox::{apply_blackbox, blackbox_symplectic, rotation, squeeze, BlackBoxParams};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec};
pub use fidelity::{fidelity, qfi, qfi_at_phase, QfiEstimate};
pub use ip::{cross_validate, gip_closed_form, gip_closed_form_b, IpBranch, IpResult};
pub use optimize::{worst_case_qfi, WorstCase};
pub use sampling::SampleRecord;
pub use symplectic::{
    random_local_symplectic, BonaFide, CovarianceMatrix, LocalInvariants, StandardForm,
    SymplecticForm, PHYSICAL_TOL,
};
