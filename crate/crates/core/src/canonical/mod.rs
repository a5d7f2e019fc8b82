//! Canonical forms of walks and the gauges realizing them.
//!
//! Every canonicalizer returns the canonical parameters together with a
//! [`GaugeTransform`] `(λ, W)` such that `e^{iλ} W U W*` is the canonical
//! operator, and checks that identity on a window before returning.

mod general;
mod special;
mod state;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::gauge::GaugeTransform;
use crate::phase::Phase;
use crate::tolerance::Tolerances;
use crate::walk::{CoeffSite, WalkSpec};
use crate::window::build_window_operator;

pub use general::{canonicalize_general, derive_general_gauge, GaugeDerivation};
pub use special::{
    canonicalize_complete_two_phase, canonicalize_one_defect, canonicalize_ti,
    canonicalize_two_phase_defect,
};
pub use state::{canonicalize_with_state, CanonicalState};

/// Structural class of a walk, from most to least specific.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkClass {
    #[serde(rename = "TI")]
    Ti,
    OneDefect,
    CompleteTwoPhase,
    TwoPhaseDefect,
    General,
}

impl fmt::Display for WalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkClass::Ti => "TI",
            WalkClass::OneDefect => "OneDefect",
            WalkClass::CompleteTwoPhase => "CompleteTwoPhase",
            WalkClass::TwoPhaseDefect => "TwoPhaseDefect",
            WalkClass::General => "General",
        })
    }
}

impl std::str::FromStr for WalkClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "TI" | "ti" => WalkClass::Ti,
            "OneDefect" | "one-defect" => WalkClass::OneDefect,
            "CompleteTwoPhase" | "complete-two-phase" => WalkClass::CompleteTwoPhase,
            "TwoPhaseDefect" | "two-phase-defect" => WalkClass::TwoPhaseDefect,
            "General" | "general" => WalkClass::General,
            other => return Err(format!("unknown walk class '{other}'")),
        })
    }
}

/// True when the structural precondition of `class` holds for `spec`.
pub fn in_class(spec: &WalkSpec, class: WalkClass, tol: &Tolerances) -> bool {
    let exc = spec.effective_exceptions(tol);
    let tails_equal = spec.left_tail.approx_eq(&spec.right_tail, tol);
    let only_zero = exc.iter().all(|&n| n == 0);
    match class {
        WalkClass::Ti => exc.is_empty() && tails_equal,
        WalkClass::OneDefect => only_zero && tails_equal,
        WalkClass::CompleteTwoPhase => exc.is_empty(),
        WalkClass::TwoPhaseDefect => only_zero,
        WalkClass::General => true,
    }
}

pub fn classify(spec: &WalkSpec, tol: &Tolerances) -> WalkClass {
    [
        WalkClass::Ti,
        WalkClass::OneDefect,
        WalkClass::CompleteTwoPhase,
        WalkClass::TwoPhaseDefect,
    ]
    .into_iter()
    .find(|&c| in_class(spec, c, tol))
    .unwrap_or(WalkClass::General)
}

pub fn require_class(spec: &WalkSpec, class: WalkClass, tol: &Tolerances) -> Result<()> {
    if in_class(spec, class, tol) {
        Ok(())
    } else {
        Err(WalkError::NotInClass { expected: class })
    }
}

/// `U_{r,θ}`: general canonical form on a window, `θ₀ = θ₁ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalGeneral {
    /// Half-width `N` of the window `[-N, N]`.
    pub window: usize,
    pub r: BTreeMap<i64, f64>,
    pub theta: BTreeMap<i64, Phase>,
    /// `θ_n - θ_{n-1}` once `n` is left of every exception.
    pub left_slope: Phase,
    /// `θ_{n+1} - θ_n` once `n` is right of every exception.
    pub right_slope: Phase,
}

impl CanonicalGeneral {
    /// The canonical walk on the window. Sites outside the window repeat the
    /// edge sites and carry no meaning.
    pub fn window_spec(&self) -> Result<WalkSpec> {
        let sites: BTreeMap<i64, CoeffSite> = self
            .r
            .iter()
            .map(|(&n, &r)| general_site(r, self.theta[&n]).map(|s| (n, s)))
            .collect::<Result<_>>()?;
        let n = self.window as i64;
        Ok(WalkSpec { left_tail: sites[&-n], right_tail: sites[&n], exceptions: sites })
    }
}

/// `U_{r,μ}`: two-phase walk with one defect.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTwoPhaseDefect {
    pub r_plus: f64,
    pub r_minus: f64,
    pub r_0: f64,
    pub mu1: Phase,
    pub mu2: Phase,
    pub mu3: Phase,
}

/// `U_{r,σ}`: complete two-phase walk.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCompleteTwoPhase {
    pub r_plus: f64,
    pub r_minus: f64,
    pub sigma1: Phase,
    pub sigma2: Phase,
}

/// `U_{r,ν}`: one-dimensional walk with one defect.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalOneDefect {
    pub r_pm: f64,
    pub r_0: f64,
    pub nu1: Phase,
    pub nu2: Phase,
}

/// `U_r`: translation-invariant walk.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTI {
    pub r: f64,
}

/// Site of `U_{r,θ}`: `⟨r e₁ + e^{iθ} s e₂|` and `⟨-e^{-iθ} s e₁ + r e₂|`.
pub fn general_site(r: f64, theta: Phase) -> Result<CoeffSite> {
    let t = theta.value();
    CoeffSite::new(r, 0.0, t, PI - t, 0.0)
}

/// Site `⟨r e₁ + e^{iβ} s e₂|`, `⟨-e^{iγ} s e₁ + e^{i(β+γ)} r e₂|`, the shape
/// shared by every special canonical form.
pub fn special_site(r: f64, beta: Phase, gamma: Phase) -> Result<CoeffSite> {
    let (b, g) = (beta.value(), gamma.value());
    CoeffSite::new(r, 0.0, b, g + PI, b + g)
}

impl CanonicalTwoPhaseDefect {
    pub fn to_spec(&self) -> Result<WalkSpec> {
        Ok(WalkSpec::two_phase_defect(
            special_site(self.r_minus, Phase::ZERO, Phase::ZERO)?,
            special_site(self.r_plus, Phase::ZERO, self.mu3)?,
            special_site(self.r_0, self.mu1, self.mu2)?,
        ))
    }
}

impl CanonicalCompleteTwoPhase {
    pub fn to_spec(&self) -> Result<WalkSpec> {
        // on n ≤ -1: ⟨r e₁ + e^{iσ₂} s e₂|, ⟨-s e₁ + e^{iσ₂} r e₂|
        Ok(WalkSpec::new(
            special_site(self.r_minus, self.sigma2, Phase::ZERO)?,
            special_site(self.r_plus, Phase::ZERO, self.sigma1)?,
        ))
    }
}

impl CanonicalOneDefect {
    pub fn to_spec(&self) -> Result<WalkSpec> {
        let tail = special_site(self.r_pm, Phase::ZERO, Phase::ZERO)?;
        Ok(WalkSpec::two_phase_defect(tail, tail, special_site(self.r_0, self.nu1, self.nu2)?))
    }
}

impl CanonicalTI {
    pub fn to_spec(&self) -> Result<WalkSpec> {
        Ok(WalkSpec::translation_invariant(special_site(self.r, Phase::ZERO, Phase::ZERO)?))
    }
}

/// Any of the five canonical parameterizations. Serializes as
/// `{"class": ..., "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "params")]
pub enum CanonicalForm {
    General(CanonicalGeneral),
    TwoPhaseDefect(CanonicalTwoPhaseDefect),
    CompleteTwoPhase(CanonicalCompleteTwoPhase),
    OneDefect(CanonicalOneDefect),
    #[serde(rename = "TI")]
    Ti(CanonicalTI),
}

impl CanonicalForm {
    pub fn class(&self) -> WalkClass {
        match self {
            CanonicalForm::General(_) => WalkClass::General,
            CanonicalForm::TwoPhaseDefect(_) => WalkClass::TwoPhaseDefect,
            CanonicalForm::CompleteTwoPhase(_) => WalkClass::CompleteTwoPhase,
            CanonicalForm::OneDefect(_) => WalkClass::OneDefect,
            CanonicalForm::Ti(_) => WalkClass::Ti,
        }
    }

    /// The canonical operator as a walk (window-only for `General`).
    pub fn to_spec(&self) -> Result<WalkSpec> {
        match self {
            CanonicalForm::General(c) => c.window_spec(),
            CanonicalForm::TwoPhaseDefect(c) => c.to_spec(),
            CanonicalForm::CompleteTwoPhase(c) => c.to_spec(),
            CanonicalForm::OneDefect(c) => c.to_spec(),
            CanonicalForm::Ti(c) => c.to_spec(),
        }
    }

    /// All radial parameters.
    pub fn radii(&self) -> Vec<f64> {
        match self {
            CanonicalForm::General(c) => c.r.values().copied().collect(),
            CanonicalForm::TwoPhaseDefect(c) => vec![c.r_plus, c.r_minus, c.r_0],
            CanonicalForm::CompleteTwoPhase(c) => vec![c.r_plus, c.r_minus],
            CanonicalForm::OneDefect(c) => vec![c.r_pm, c.r_0],
            CanonicalForm::Ti(c) => vec![c.r],
        }
    }
}

/// Canonicalizes per `class`, or per [`classify`] when `class` is `None`.
/// `half_width` is only used by the general form.
pub fn canonicalize(
    spec: &WalkSpec,
    class: Option<WalkClass>,
    half_width: usize,
    tol: &Tolerances,
) -> Result<(CanonicalForm, GaugeTransform)> {
    let class = class.unwrap_or_else(|| classify(spec, tol));
    Ok(match class {
        WalkClass::General => {
            let (c, g) = canonicalize_general(spec, half_width, tol)?;
            (CanonicalForm::General(c), g)
        }
        WalkClass::TwoPhaseDefect => {
            let (c, g) = canonicalize_two_phase_defect(spec, tol)?;
            (CanonicalForm::TwoPhaseDefect(c), g)
        }
        WalkClass::CompleteTwoPhase => {
            let (c, g) = canonicalize_complete_two_phase(spec, tol)?;
            (CanonicalForm::CompleteTwoPhase(c), g)
        }
        WalkClass::OneDefect => {
            let (c, g) = canonicalize_one_defect(spec, tol)?;
            (CanonicalForm::OneDefect(c), g)
        }
        WalkClass::Ti => {
            let (c, g) = canonicalize_ti(spec, tol)?;
            (CanonicalForm::Ti(c), g)
        }
    })
}

/// Max-norm of `e^{iλ} W U W* - U_canon` on `[-N, N]`.
pub fn gauge_deviation(
    spec: &WalkSpec,
    gauge: &GaugeTransform,
    canonical: &WalkSpec,
    half_width: usize,
) -> Result<f64> {
    let lhs = gauge.apply_to_window(&build_window_operator(spec, half_width)?);
    let rhs = build_window_operator(canonical, half_width)?;
    Ok(lhs.max_abs_diff(&rhs))
}

pub(crate) fn verify(
    spec: &WalkSpec,
    gauge: &GaugeTransform,
    canonical: &WalkSpec,
    half_width: usize,
    tol: &Tolerances,
) -> Result<()> {
    let deviation = gauge_deviation(spec, gauge, canonical, half_width)?;
    if deviation <= tol.gauge {
        Ok(())
    } else {
        Err(WalkError::VerificationFailed { deviation, tolerance: tol.gauge })
    }
}
