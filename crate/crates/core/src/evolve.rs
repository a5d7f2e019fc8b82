//! Time evolution on finite windows and site distributions.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};
use crate::gauge::GaugeTransform;
use crate::tolerance::Tolerances;
use crate::walk::{C2Vector, WalkSpec};
use crate::window::{build_window_operator, WindowOperator};

/// A state on the sites `[-N, N]`, indexed like [`WindowOperator`].
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    half_width: usize,
    amplitudes: DVector<C64>,
}

impl LatticeState {
    /// `φ` placed on site 0.
    pub fn embed(half_width: usize, phi: &C2Vector) -> Self {
        let mut amplitudes = DVector::zeros(2 * (2 * half_width + 1));
        let i = 2 * half_width;
        amplitudes[i] = phi.0[0];
        amplitudes[i + 1] = phi.0[1];
        LatticeState { half_width, amplitudes }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn amplitude(&self, site: i64, spin: usize) -> C64 {
        let n = self.half_width as i64;
        if site.abs() > n {
            return C64::new(0.0, 0.0);
        }
        self.amplitudes[2 * (site + n) as usize + spin]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    fn step(&self, op: &WindowOperator) -> Self {
        LatticeState { half_width: self.half_width, amplitudes: op.matrix() * &self.amplitudes }
    }

    fn check_leakage(&self) -> Result<()> {
        let n = self.half_width as i64;
        for site in [-n, -n + 1, n - 1, n] {
            if (0..2).any(|s| self.amplitude(site, s) != C64::new(0.0, 0.0)) {
                return Err(WalkError::Leakage { site });
            }
        }
        Ok(())
    }
}

/// `P(n) = ‖P_n ξ‖²`.
pub type Distribution = BTreeMap<i64, f64>;

fn check_state(phi: &C2Vector, tol: &Tolerances) -> Result<()> {
    if phi.is_finite() && phi.is_unit(tol) {
        Ok(())
    } else {
        Err(WalkError::NotUnitState { norm_sq: phi.norm_sq() })
    }
}

/// States `U^t φ` for `t = 0..=t_max` on the window `N = t_max + 2`.
pub fn evolve_trajectory(spec: &WalkSpec, phi: &C2Vector, t_max: usize, tol: &Tolerances) -> Result<Vec<LatticeState>> {
    check_state(phi, tol)?;
    let half_width = t_max + 2;
    let op = build_window_operator(spec, half_width)?;
    let mut states = Vec::with_capacity(t_max + 1);
    let mut psi = LatticeState::embed(half_width, phi);
    for _ in 0..t_max {
        let next = psi.step(&op);
        states.push(psi);
        psi = next;
    }
    psi.check_leakage()?;
    states.push(psi);
    Ok(states)
}

/// `U^t φ` with `φ` on site 0.
pub fn evolve(spec: &WalkSpec, phi: &C2Vector, t: usize, tol: &Tolerances) -> Result<LatticeState> {
    Ok(evolve_trajectory(spec, phi, t, tol)?.pop().expect("trajectory is nonempty"))
}

pub fn distribution(state: &LatticeState) -> Distribution {
    let n = state.half_width as i64;
    (-n..=n)
        .map(|site| (site, state.amplitude(site, 0).norm_sqr() + state.amplitude(site, 1).norm_sqr()))
        .collect()
}

/// Largest `|P_A,t(n) - P_B,t(n)|` over `t ≤ t_max`, after checking that
/// `gauge` maps `(A, φ_A)` to `(B, φ_B)`.
pub fn check_distribution_invariance(
    spec_a: &WalkSpec,
    phi_a: &C2Vector,
    spec_b: &WalkSpec,
    phi_b: &C2Vector,
    gauge: &GaugeTransform,
    t_max: usize,
    tol: &Tolerances,
) -> Result<f64> {
    check_state(phi_a, tol)?;
    check_state(phi_b, tol)?;
    let half_width = t_max + 2;
    let lhs = gauge.apply_to_window(&build_window_operator(spec_a, half_width)?);
    let deviation = lhs.max_abs_diff(&build_window_operator(spec_b, half_width)?);
    if deviation > tol.gauge {
        return Err(WalkError::InvalidWitness { deviation });
    }
    // states are rays: W φ_A must equal φ_B up to a phase
    let overlap = phi_b.inner(&gauge.apply_to_state(phi_a)).norm();
    if (1.0 - overlap).abs() > tol.gauge {
        return Err(WalkError::InvalidWitness { deviation: 1.0 - overlap });
    }

    let ta = evolve_trajectory(spec_a, phi_a, t_max, tol)?;
    let tb = evolve_trajectory(spec_b, phi_b, t_max, tol)?;
    let mut worst = 0.0f64;
    for (sa, sb) in ta.iter().zip(&tb) {
        let (da, db) = (distribution(sa), distribution(sb));
        for (site, pa) in &da {
            worst = worst.max((pa - db[site]).abs());
        }
    }
    Ok(worst)
}

/// `%.17g`-style rendering: 17 significant digits, trailing zeros dropped.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..17).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// Writes `t,site,probability` rows, one per nonzero probability, sites
/// ascending within each `t`.
pub fn write_distribution_csv<W: Write>(out: &mut W, dists: &[Distribution]) -> std::io::Result<()> {
    writeln!(out, "t,site,probability")?;
    for (t, d) in dists.iter().enumerate() {
        for (site, p) in d {
            if *p != 0.0 {
                writeln!(out, "{t},{site},{}", format_g17(*p))?;
            }
        }
    }
    Ok(())
}
