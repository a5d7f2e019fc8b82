use std::collections::BTreeMap;

use crate::error::{Result, WalkError};
use crate::gauge::{GaugeTransform, PhaseProfile};
use crate::phase::{wrap, Phase};
use crate::tolerance::Tolerances;
use crate::walk::WalkSpec;
use crate::window::MIN_WINDOW;

use super::{verify, CanonicalGeneral};

/// Phase sequences of the general reduction.
///
/// `g_0 = 0`, `g_{n-1} - g_n = a_n`; `h_0 = g_{-1} - b_0`,
/// `h_{n+1} - h_n = d_n`; `k_n = b_n - g_{n-1} + h_n`, so `k_0 = 0`.
/// All values are wrapped to `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeDerivation {
    pub g: BTreeMap<i64, f64>,
    pub h: BTreeMap<i64, f64>,
    pub k: BTreeMap<i64, f64>,
    /// `ℓ = k₁ / 2` with `k₁` taken in `[0, 2π)`.
    pub ell: f64,
}

impl GaugeDerivation {
    pub fn k1(&self) -> f64 {
        2.0 * self.ell
    }

    /// `θ_n = k_n - n k₁`.
    pub fn theta(&self, n: i64) -> f64 {
        wrap(self.k[&n] - n as f64 * self.k1())
    }
}

/// Runs the phase recursions outward from site 0 over `[-m-1, m+1]`, where
/// `m` is at least `half_width` and one past every exception.
pub fn derive_general_gauge(spec: &WalkSpec, half_width: usize) -> GaugeDerivation {
    let m = (half_width as i64).max(spec.extent() + 1);
    let (lo, hi) = (-m - 1, m + 1);
    let a = |n: i64| spec.site(n).a().value();
    let b = |n: i64| spec.site(n).b().value();
    let d = |n: i64| spec.site(n).d().value();

    let mut g = BTreeMap::from([(0, 0.0)]);
    for n in 1..=hi {
        g.insert(n, wrap(g[&(n - 1)] - a(n)));
    }
    for n in (lo..=-1).rev() {
        g.insert(n, wrap(g[&(n + 1)] + a(n + 1)));
    }

    let mut h = BTreeMap::from([(0, wrap(g[&-1] - b(0)))]);
    for n in 1..=hi {
        h.insert(n, wrap(h[&(n - 1)] + d(n - 1)));
    }
    for n in (lo..=-1).rev() {
        h.insert(n, wrap(h[&(n + 1)] - d(n)));
    }

    let k: BTreeMap<i64, f64> = (lo + 1..=hi).map(|n| (n, wrap(b(n) - g[&(n - 1)] + h[&n]))).collect();
    let ell = k[&1] / 2.0;
    GaugeDerivation { g, h, k, ell }
}

/// Reduces any walk to `U_{r,θ}` with `θ₀ = θ₁ = 0`, reporting `r` and `θ`
/// on `[-N, N]`.
pub fn canonicalize_general(
    spec: &WalkSpec,
    half_width: usize,
    tol: &Tolerances,
) -> Result<(CanonicalGeneral, GaugeTransform)> {
    if half_width < MIN_WINDOW {
        return Err(WalkError::WindowTooSmall { got: half_width, min: MIN_WINDOW });
    }
    let verify_width = half_width.max(spec.extent() as usize + 2);
    let der = derive_general_gauge(spec, verify_width);
    let k0 = der.k[&0];
    if !Phase::new(k0).is_zero(tol.phase) {
        return Err(WalkError::InternalInconsistency(format!("k_0 = {k0} is not 0 mod 2π")));
    }

    let n = half_width as i64;
    let ell = der.ell;
    let k1 = der.k1();
    let mut r = BTreeMap::new();
    let mut theta = BTreeMap::new();
    for site in -n..=n {
        r.insert(site, spec.site(site).r());
        let t = match site {
            0 | 1 => Phase::ZERO,
            _ => Phase::new(der.theta(site)),
        };
        theta.insert(site, t);
    }

    let right = spec.right_tail;
    let left = spec.left_tail;
    let c = CanonicalGeneral {
        window: half_width,
        r,
        theta,
        left_slope: Phase::new(left.a().value() + left.d().value() - k1),
        right_slope: Phase::new(right.a().value() + right.d().value() - k1),
    };

    // W = diag(e^{i(g_n + p_n)}, e^{i(h_n + q_n)}), p_n = nℓ, q_n = -nℓ
    let (lo, hi) = (*der.k.keys().next().unwrap(), *der.g.keys().next_back().unwrap());
    let explicit = (lo..=hi)
        .map(|s| {
            let p = s as f64 * ell;
            (s, (der.g[&s] + p, der.h[&s] - p))
        })
        .collect();
    let phases = PhaseProfile::new(
        explicit,
        (-left.a().value() + ell, left.d().value() - ell),
        (-right.a().value() + ell, right.d().value() - ell),
    );
    let gauge = GaugeTransform::diagonal(Phase::new(ell), phases);

    let target = if verify_width == half_width {
        c.clone()
    } else {
        canonical_on(&der, spec, verify_width)
    };
    verify(spec, &gauge, &target.window_spec()?, verify_width, tol)?;
    Ok((c, gauge))
}

fn canonical_on(der: &GaugeDerivation, spec: &WalkSpec, half_width: usize) -> CanonicalGeneral {
    let n = half_width as i64;
    CanonicalGeneral {
        window: half_width,
        r: (-n..=n).map(|s| (s, spec.site(s).r())).collect(),
        theta: (-n..=n)
            .map(|s| (s, if s == 0 || s == 1 { Phase::ZERO } else { Phase::new(der.theta(s)) }))
            .collect(),
        left_slope: Phase::ZERO,
        right_slope: Phase::ZERO,
    }
}
