use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::gauge::GaugeTransform;
use crate::phase::Phase;
use crate::tolerance::Tolerances;
use crate::walk::{C2Vector, WalkSpec};

use super::{canonicalize, CanonicalForm, WalkClass};

/// `Φ_{α,θ} = α e₁⁰ + e^{iθ} √(1-α²) e₂⁰`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalState {
    pub alpha: f64,
    pub theta: Phase,
}

impl CanonicalState {
    /// Strips the global phase of a unit vector so the `e₁` amplitude is
    /// real and nonnegative. `θ` is set to 0 when `α ∈ {0, 1}`.
    pub fn from_vector(v: &C2Vector, tol: &Tolerances) -> Self {
        let [x, y] = v.0;
        let alpha = x.norm();
        if alpha <= tol.norm {
            return CanonicalState { alpha: 0.0, theta: Phase::ZERO };
        }
        if y.norm() <= tol.norm {
            return CanonicalState { alpha: 1.0, theta: Phase::ZERO };
        }
        CanonicalState { alpha: alpha.min(1.0), theta: Phase::new(y.arg() - x.arg()) }
    }

    pub fn to_vector(&self) -> C2Vector {
        let beta = (1.0 - self.alpha * self.alpha).max(0.0).sqrt();
        C2Vector::new(self.alpha.into(), self.theta.cis() * beta)
    }

    pub fn approx_eq(&self, other: &CanonicalState, tol: &Tolerances) -> bool {
        (self.alpha - other.alpha).abs() <= tol.r && self.theta.approx_eq(other.theta, tol.phase)
    }
}

/// Canonicalizes a walk with an initial state `φ ∈ H₀`: the walk per its
/// class (or `class` when given), then the state through the same gauge.
pub fn canonicalize_with_state(
    spec: &WalkSpec,
    phi: &C2Vector,
    class: Option<WalkClass>,
    half_width: usize,
    tol: &Tolerances,
) -> Result<(CanonicalForm, CanonicalState, GaugeTransform)> {
    if !phi.is_finite() || !phi.is_unit(tol) {
        return Err(WalkError::NotUnitState { norm_sq: phi.norm_sq() });
    }
    let (form, gauge) = canonicalize(spec, class, half_width, tol)?;
    let state = CanonicalState::from_vector(&gauge.apply_to_state(phi), tol);
    Ok((form, state, gauge))
}
