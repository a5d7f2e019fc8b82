//! Numerical tolerances.
//!
//! The underlying theory is exact; these are the slacks applied when the
//! same statements are checked in double precision.

use serde::{Deserialize, Serialize};

/// Squared-norm slack for unit vectors and orthonormal pairs.
pub const EPS_NORM: f64 = 1e-12;
/// Slack for phase congruences modulo 2π.
pub const EPS_PHASE: f64 = 1e-9;
/// Max-norm slack for `U*U - I` on a window.
pub const EPS_UNITARY: f64 = 1e-12;
/// Slack for comparing radial parameters.
pub const EPS_R: f64 = 1e-9;
/// Max-norm slack for gauge identities `e^{iλ} W U W* = U'` on a window.
pub const EPS_GAUGE: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub norm: f64,
    pub phase: f64,
    pub unitary: f64,
    pub r: f64,
    pub gauge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: EPS_NORM,
            phase: EPS_PHASE,
            unitary: EPS_UNITARY,
            r: EPS_R,
            gauge: EPS_GAUGE,
        }
    }
}

impl Tolerances {
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }
}
