use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thermest_core::bounds::ThetaPoint;

use crate::{CliError, CliResult};

/// Displacement given either as `ζ` or as `(θ¹, θ²)`.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta1", "theta2"])]
    pub zeta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta1", "theta2"])]
    pub zeta_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
}

impl PointArgs {
    /// Field-wise override: values set on `self` win.
    pub fn or(self, other: PointArgs) -> PointArgs {
        let theta_given = self.theta1.is_some() || self.theta2.is_some();
        let zeta_given = self.zeta_re.is_some() || self.zeta_im.is_some();
        if theta_given {
            PointArgs {
                zeta_re: None,
                zeta_im: None,
                ..self
            }
        } else if zeta_given {
            PointArgs {
                theta1: None,
                theta2: None,
                ..self
            }
        } else {
            other
        }
    }

    pub fn zeta(&self, default: Complex64) -> CliResult<Complex64> {
        let zeta_given = self.zeta_re.is_some() || self.zeta_im.is_some();
        let theta_given = self.theta1.is_some() || self.theta2.is_some();
        match (zeta_given, theta_given) {
            (true, true) => Err(CliError::Usage(
                "give the displacement either as zeta or as theta, not both".into(),
            )),
            (true, false) => Ok(Complex64::new(
                self.zeta_re.unwrap_or(0.0),
                self.zeta_im.unwrap_or(0.0),
            )),
            (false, true) => {
                Ok(
                    ThetaPoint::new(self.theta1.unwrap_or(0.0), self.theta2.unwrap_or(0.0), 1.0)?
                        .zeta(),
                )
            }
            (false, false) => Ok(default),
        }
    }
}
