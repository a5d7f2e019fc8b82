//! Gauge transformations `U ↦ e^{iλ} W U W*` with `W = ⊕ W_n`.

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::phase::{wrap, Phase};
use crate::walk::{C2Vector, CoeffSite, SiteFrames, WalkSpec};
use crate::window::WindowOperator;

/// Diagonal cell phases `W_n = diag(e^{iu_n}, e^{iv_n})`, given explicitly on
/// a contiguous range of sites and extended affinely beyond it.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseProfile {
    explicit: BTreeMap<i64, (f64, f64)>,
    /// `(u_{n+1} - u_n, v_{n+1} - v_n)` left of the explicit range.
    left_step: (f64, f64),
    /// `(u_{n+1} - u_n, v_{n+1} - v_n)` right of the explicit range.
    right_step: (f64, f64),
}

impl PhaseProfile {
    /// `explicit` must be nonempty and cover a contiguous range of sites.
    pub fn new(explicit: BTreeMap<i64, (f64, f64)>, left_step: (f64, f64), right_step: (f64, f64)) -> Self {
        assert!(!explicit.is_empty(), "phase profile needs at least one site");
        let lo = *explicit.keys().next().unwrap();
        let hi = *explicit.keys().next_back().unwrap();
        assert_eq!((hi - lo + 1) as usize, explicit.len(), "phase profile must be contiguous");
        PhaseProfile { explicit, left_step, right_step }
    }

    pub fn identity() -> Self {
        Self::affine(0.0, 0.0, 0.0, 0.0)
    }

    /// `u_n = u0 + n·du`, `v_n = v0 + n·dv`.
    pub fn affine(u0: f64, v0: f64, du: f64, dv: f64) -> Self {
        PhaseProfile {
            explicit: BTreeMap::from([(0, (u0, v0))]),
            left_step: (du, dv),
            right_step: (du, dv),
        }
    }

    pub fn range(&self) -> (i64, i64) {
        (*self.explicit.keys().next().unwrap(), *self.explicit.keys().next_back().unwrap())
    }

    /// `(u_n, v_n)`, both wrapped to `[0, 2π)`.
    pub fn at(&self, n: i64) -> (f64, f64) {
        let (lo, hi) = self.range();
        let (u, v) = if n < lo {
            let (u, v) = self.explicit[&lo];
            let k = (lo - n) as f64;
            (u - k * self.left_step.0, v - k * self.left_step.1)
        } else if n > hi {
            let (u, v) = self.explicit[&hi];
            let k = (n - hi) as f64;
            (u + k * self.right_step.0, v + k * self.right_step.1)
        } else {
            self.explicit[&n]
        };
        (wrap(u), wrap(v))
    }
}

/// A gauge transformation: global phase plus per-cell unitaries
/// `W_n = diag(e^{iu_n}, e^{iv_n}) · F_n`, where the optional frames `F_n`
/// rotate a vector-form walk into the standard gauge.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    pub global_phase: Phase,
    pub phases: PhaseProfile,
    pub frames: Option<SiteFrames>,
}

impl GaugeTransform {
    pub fn identity() -> Self {
        GaugeTransform { global_phase: Phase::ZERO, phases: PhaseProfile::identity(), frames: None }
    }

    pub fn diagonal(global_phase: Phase, phases: PhaseProfile) -> Self {
        GaugeTransform { global_phase, phases, frames: None }
    }

    /// Precomposes with the cell rotations of a vector-form walk.
    pub fn with_frames(mut self, frames: SiteFrames) -> Self {
        self.frames = Some(frames);
        self
    }

    pub fn is_diagonal(&self) -> bool {
        self.frames.is_none()
    }

    pub fn site_unitary(&self, n: i64) -> Matrix2<C64> {
        let (u, v) = self.phases.at(n);
        let diag = Matrix2::new(C64::cis(u), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::cis(v));
        match &self.frames {
            Some(f) => diag * f.frame(n),
            None => diag,
        }
    }

    /// Max deviation of `W_n* W_n` from the identity over `[-n, n]`.
    pub fn unitarity_deviation(&self, half_width: i64) -> f64 {
        (-half_width..=half_width)
            .map(|n| {
                let w = self.site_unitary(n);
                (w.adjoint() * w - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `e^{iλ} W U W*` on the same window.
    pub fn apply_to_window(&self, op: &WindowOperator) -> WindowOperator {
        let mut m = op.matrix() * self.global_phase.cis();
        for n in op.sites() {
            let i = op.index(n, 0);
            let w = self.site_unitary(n);
            let rows = w * m.fixed_rows::<2>(i);
            m.fixed_rows_mut::<2>(i).copy_from(&rows);
            let cols = m.fixed_columns::<2>(i) * w.adjoint();
            m.fixed_columns_mut::<2>(i).copy_from(&cols);
        }
        WindowOperator::from_matrix(op.half_width(), m)
    }

    /// `W_0 φ` for a state supported on site 0.
    pub fn apply_to_state(&self, phi: &C2Vector) -> C2Vector {
        phi.apply(&self.site_unitary(0))
    }

    /// Site data of the gauged walk on `range`. Only meaningful for diagonal
    /// gauges acting on standard-gauge walks.
    pub fn gauged_sites(&self, spec: &WalkSpec, lo: i64, hi: i64) -> BTreeMap<i64, CoeffSite> {
        debug_assert!(self.is_diagonal());
        let lambda = self.global_phase.value();
        (lo..=hi)
            .map(|n| {
                let (u_prev, _) = self.phases.at(n - 1);
                let (u, v) = self.phases.at(n);
                let (_, v_next) = self.phases.at(n + 1);
                (n, spec.site(n).gauged(lambda, u_prev, u, v, v_next))
            })
            .collect()
    }

    /// Window form `{"lambda", "u", "v"}` over `[-n, n]`.
    pub fn to_json_window(&self, half_width: i64) -> GaugeJson {
        let mut u = BTreeMap::new();
        let mut v = BTreeMap::new();
        for n in -half_width..=half_width {
            let (un, vn) = self.phases.at(n);
            u.insert(n, un);
            v.insert(n, vn);
        }
        let frames = self.frames.as_ref().map(|f| {
            (-half_width..=half_width)
                .map(|n| {
                    let m = f.frame(n);
                    (n, [[[m[(0, 0)].re, m[(0, 0)].im], [m[(0, 1)].re, m[(0, 1)].im]], [[m[(1, 0)].re, m[(1, 0)].im], [m[(1, 1)].re, m[(1, 1)].im]]])
                })
                .collect()
        });
        GaugeJson { lambda: self.global_phase.value(), u, v, frames }
    }
}

/// Serialized gauge over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeJson {
    pub lambda: f64,
    pub u: BTreeMap<i64, f64>,
    pub v: BTreeMap<i64, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<BTreeMap<i64, [[[f64; 2]; 2]; 2]>>,
}

/// A diagonal gauge with phases affine in `n`, equal slopes on both spins:
/// `u_n = x + nκ`, `v_n = y + nκ`. It maps every site to data that depends
/// only on the original site, so tails stay tails and every walk class is
/// preserved.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LinearGauge {
    pub lambda: f64,
    pub x: f64,
    pub y: f64,
    pub kappa: f64,
}

impl LinearGauge {
    pub fn apply_site(&self, s: &CoeffSite) -> CoeffSite {
        s.gauged(self.lambda, self.x - self.kappa, self.x, self.y, self.y + self.kappa)
    }

    pub fn apply_to_spec(&self, spec: &WalkSpec) -> WalkSpec {
        WalkSpec {
            left_tail: self.apply_site(&spec.left_tail),
            right_tail: self.apply_site(&spec.right_tail),
            exceptions: spec.exceptions.iter().map(|(&n, s)| (n, self.apply_site(s))).collect(),
        }
    }

    pub fn to_transform(&self) -> GaugeTransform {
        GaugeTransform::diagonal(Phase::new(self.lambda), PhaseProfile::affine(self.x, self.y, self.kappa, self.kappa))
    }
}
