//! JSON file formats for covariance matrices and standard forms.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symplectic::{CovarianceMatrix, StandardForm};

pub const ORDERING: &str = "qA,pA,qB,pB";

/// On-disk covariance matrix:
/// `{"ordering": "qA,pA,qB,pB", "hbar": 1, "sigma": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrixFile {
    pub ordering: String,
    #[serde(serialize_with = "integral_as_integer")]
    pub hbar: f64,
    pub sigma: [[f64; 4]; 4],
}

fn integral_as_integer<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        s.serialize_i64(*x as i64)
    } else {
        s.serialize_f64(*x)
    }
}

impl From<&CovarianceMatrix> for CovarianceMatrixFile {
    fn from(cm: &CovarianceMatrix) -> Self {
        Self {
            ordering: ORDERING.to_string(),
            hbar: 1.0,
            sigma: cm.rows(),
        }
    }
}

impl TryFrom<CovarianceMatrixFile> for CovarianceMatrix {
    type Error = Error;

    fn try_from(file: CovarianceMatrixFile) -> Result<Self> {
        if file.ordering.replace(' ', "") != ORDERING {
            return Err(Error::InvalidInput(format!(
                "unsupported quadrature ordering {:?}, expected {ORDERING:?}",
                file.ordering
            )));
        }
        if file.hbar != 1.0 {
            return Err(Error::InvalidInput(format!(
                "unsupported hbar {}, expected 1",
                file.hbar
            )));
        }
        CovarianceMatrix::from_rows(file.sigma)
    }
}

pub fn covariance_to_json(cm: &CovarianceMatrix) -> String {
    serde_json::to_string_pretty(&CovarianceMatrixFile::from(cm)).expect("plain data serializes")
}

pub fn covariance_from_json(text: &str) -> Result<CovarianceMatrix> {
    let file: CovarianceMatrixFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("covariance JSON: {e}")))?;
    file.try_into()
}

pub fn standard_form_to_json(sf: &StandardForm) -> String {
    serde_json::to_string(sf).expect("plain data serializes")
}

pub fn standard_form_from_json(text: &str) -> Result<StandardForm> {
    let sf: StandardForm = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("standard-form JSON: {e}")))?;
    if !sf.is_finite() {
        return Err(Error::InvalidInput(
            "standard form has non-finite entries".into(),
        ));
    }
    Ok(sf)
}
