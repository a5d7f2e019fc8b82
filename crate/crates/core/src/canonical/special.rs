//! Closed-form reductions for the four special classes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Result, WalkError};
use crate::gauge::{GaugeTransform, PhaseProfile};
use crate::phase::Phase;
use crate::tolerance::Tolerances;
use crate::walk::WalkSpec;

use super::{
    require_class, verify, CanonicalCompleteTwoPhase, CanonicalOneDefect, CanonicalTI,
    CanonicalTwoPhaseDefect, WalkClass,
};

fn verify_width(spec: &WalkSpec) -> usize {
    (spec.extent() as usize + 2).max(4)
}

/// Gauge with cell phases given by piecewise-affine closed forms, tabulated
/// on `[-2, 2]` (which contains every switch point) and extended with the
/// tail slopes.
fn piecewise_gauge<G, H>(ell: f64, g: G, h: H, left_step: f64, right_step: f64) -> GaugeTransform
where
    G: Fn(i64) -> f64,
    H: Fn(i64) -> f64,
{
    let explicit = (-2..=2).map(|n| (n, (g(n), h(n)))).collect::<BTreeMap<_, _>>();
    GaugeTransform::diagonal(
        Phase::new(ell),
        PhaseProfile::new(explicit, (left_step, left_step), (right_step, right_step)),
    )
}

/// Reduces a two-phase walk with one defect (left coin on `n ≤ -1`, right
/// coin on `n ≥ 1`, arbitrary site 0) to `U_{r,μ}`.
pub fn canonicalize_two_phase_defect(
    spec: &WalkSpec,
    tol: &Tolerances,
) -> Result<(CanonicalTwoPhaseDefect, GaugeTransform)> {
    require_class(spec, WalkClass::TwoPhaseDefect, tol)?;
    let (minus, plus, zero) = (spec.left_tail, spec.right_tail, spec.site(0));
    let (a_m, b_m, c_m) = (minus.a().value(), minus.b().value(), minus.c().value());
    let (a_p, b_p, c_p) = (plus.a().value(), plus.b().value(), plus.c().value());
    let (a_0, b_0, c_0) = (zero.a().value(), zero.b().value(), zero.c().value());

    let ell = (b_m + c_m + PI) / 2.0;
    let g = |n: i64| {
        let n = n as f64;
        if n >= 0.0 {
            n * (ell - a_p)
        } else {
            n * (ell - a_m) - a_m + a_0
        }
    };
    let h = |n: i64| {
        let n = n as f64;
        if n >= 1.0 {
            (n - 1.0) * (ell - a_p) - b_p + ell
        } else {
            (n - 1.0) * (ell - a_m) + c_m + a_0 - a_m - ell + PI
        }
    };

    // the s₀ coefficient of |e₂¹⟩⟨e₁⁰| after gauging is -e^{iμ₂} s₀
    let mu2 = c_0 - ell - h(1) + g(0) - PI;
    let c = CanonicalTwoPhaseDefect {
        r_plus: plus.r(),
        r_minus: minus.r(),
        r_0: zero.r(),
        mu1: Phase::new(b_0 - b_m),
        mu2: Phase::new(mu2),
        mu3: Phase::new(b_p - b_m + c_p - c_m),
    };
    let gauge = piecewise_gauge(ell, g, h, ell - a_m, ell - a_p);
    verify(spec, &gauge, &c.to_spec()?, verify_width(spec), tol)?;
    Ok((c, gauge))
}

/// Reduces a complete two-phase walk (left coin on `n ≤ -1`, right coin on
/// `n ≥ 0`) to `U_{r,σ}`.
pub fn canonicalize_complete_two_phase(
    spec: &WalkSpec,
    tol: &Tolerances,
) -> Result<(CanonicalCompleteTwoPhase, GaugeTransform)> {
    require_class(spec, WalkClass::CompleteTwoPhase, tol)?;
    let (minus, plus) = (spec.left_tail, spec.right_tail);
    let (a_m, b_m, c_m) = (minus.a().value(), minus.b().value(), minus.c().value());
    let (a_p, b_p, c_p) = (plus.a().value(), plus.b().value(), plus.c().value());

    let ell = (b_p + c_m + PI) / 2.0;
    let g = |n: i64| {
        let n = n as f64;
        if n >= 0.0 {
            n * (ell - a_p)
        } else {
            n * (ell - a_m) - a_m + a_p
        }
    };
    let h = |n: i64| {
        let n = n as f64;
        if n >= 1.0 {
            (n - 1.0) * (ell - a_p) - b_p + ell
        } else {
            (n - 1.0) * (ell - a_m) + c_m + a_p - a_m - ell + PI
        }
    };

    let c = CanonicalCompleteTwoPhase {
        r_plus: plus.r(),
        r_minus: minus.r(),
        sigma1: Phase::new(c_p - c_m),
        sigma2: Phase::new(b_m - b_p),
    };
    let gauge = piecewise_gauge(ell, g, h, ell - a_m, ell - a_p);
    verify(spec, &gauge, &c.to_spec()?, verify_width(spec), tol)?;
    Ok((c, gauge))
}

/// Reduces a walk with identical coins off site 0 to `U_{r,ν}`.
pub fn canonicalize_one_defect(
    spec: &WalkSpec,
    tol: &Tolerances,
) -> Result<(CanonicalOneDefect, GaugeTransform)> {
    require_class(spec, WalkClass::OneDefect, tol)?;
    let (mu, gauge) = canonicalize_two_phase_defect(spec, tol)?;
    if !mu.mu3.is_zero(tol.phase) {
        return Err(WalkError::InternalInconsistency(format!(
            "mu3 = {} should vanish for equal tails",
            mu.mu3
        )));
    }
    let c = CanonicalOneDefect { r_pm: mu.r_plus, r_0: mu.r_0, nu1: mu.mu1, nu2: mu.mu2 };
    verify(spec, &gauge, &c.to_spec()?, verify_width(spec), tol)?;
    Ok((c, gauge))
}

/// Reduces a translation-invariant walk to `U_r`.
pub fn canonicalize_ti(spec: &WalkSpec, tol: &Tolerances) -> Result<(CanonicalTI, GaugeTransform)> {
    require_class(spec, WalkClass::Ti, tol)?;
    let (mu, gauge) = canonicalize_two_phase_defect(spec, tol)?;
    for (name, m) in [("mu1", mu.mu1), ("mu2", mu.mu2), ("mu3", mu.mu3)] {
        if !m.is_zero(tol.phase) {
            return Err(WalkError::InternalInconsistency(format!(
                "{name} = {m} should vanish for a translation-invariant walk"
            )));
        }
    }
    let c = CanonicalTI { r: mu.r_0 };
    verify(spec, &gauge, &c.to_spec()?, verify_width(spec), tol)?;
    Ok((c, gauge))
}
