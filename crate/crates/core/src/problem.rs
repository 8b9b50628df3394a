//! JSON problem documents.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "function": {"family": "poly", "coeffs": [0, 0, 1]},
//!   "omega": {"family": "lipschitz", "constant": 2},
//!   "constraints": {"n": 1, "entries": [{"k": 1, "upper": 0.5}]},
//!   "p0": [0, 0],
//!   "options": {"grid_eps": 1e-3, "delta": 0.1, "mode": "with_l", "seed": 0}
//! }
//! ```
//!
//! `omega` defaults to the function family's Lipschitz modulus, `p0` to the
//! zero polynomial projected into `K`, and every option has a default.
//! Unknown fields are rejected at every level.

use serde::{Deserialize, Serialize};

use crate::bounds::ModulusOfContinuity;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::modulus::{ApproximationInstance, ConstraintSet};
use crate::solver::{CertifyMode, CertifyOptions};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemOptions {
    pub grid_eps: f64,
    pub delta: f64,
    pub mode: CertifyMode,
    pub seed: u64,
    pub samples: usize,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        let c = CertifyOptions::default();
        Self {
            grid_eps: c.grid_eps,
            delta: 0.1,
            mode: CertifyMode::WithL,
            seed: c.seed,
            samples: c.samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema_version: u32,
    pub function: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<ModulusOfContinuity>,
    pub constraints: ConstraintSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<Vec<f64>>,
    #[serde(default)]
    pub options: ProblemOptions,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let o = &self.options;
        if !(o.grid_eps > 0.0 && o.grid_eps.is_finite()) {
            return Err(Error::Document(format!("options.grid_eps must be positive, got {}", o.grid_eps)));
        }
        if !(o.delta >= 0.0 && o.delta.is_finite()) {
            return Err(Error::Document(format!("options.delta must be nonnegative, got {}", o.delta)));
        }
        Ok(())
    }

    pub fn to_instance(&self) -> Result<ApproximationInstance> {
        let omega = self.omega.clone().unwrap_or_else(|| self.function.natural_modulus());
        let p0 = match &self.p0 {
            Some(p0) => p0.clone(),
            None => {
                let mut zero = vec![0.0; self.constraints.n() + 1];
                self.constraints.clamp(&mut zero);
                zero
            }
        };
        ApproximationInstance::new(self.function.clone(), omega, self.constraints.clone(), p0)
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            grid_eps: self.options.grid_eps,
            samples: self.options.samples,
            seed: self.options.seed,
        }
    }
}
