//! Unitary equivalence: by canonical parameters, and by a direct search for
//! a diagonal gauge between two windows.
//!
//! The search writes `e^{iλ} W A W* = B` entry by entry. With
//! `W_n = diag(e^{iu_n}, e^{iv_n})` every nonzero entry gives a congruence
//!
//! ```text
//! ⟨e₁^{n-1}|·|e₁^n⟩:  u_n     - u_{n-1} - λ ≡ a'_n - a_n
//! ⟨e₁^{n-1}|·|e₂^n⟩:  v_n     - u_{n-1} - λ ≡ b'_n - b_n
//! ⟨e₂^{n+1}|·|e₁^n⟩:  u_n     - v_{n+1} - λ ≡ c'_n - c_n
//! ⟨e₂^{n+1}|·|e₂^n⟩:  v_n     - v_{n+1} - λ ≡ d'_n - d_n
//! ```
//!
//! i.e. an edge `x_j = x_i + λ + δ` in a graph on the `u`, `v` unknowns.
//! Spanning-tree propagation from `u₀ = 0` writes every unknown as
//! `c + mλ`; each remaining edge then reduces to `Kλ ≡ D (mod 2π)`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::canonical::{canonicalize, classify, CanonicalForm, WalkClass};
use crate::error::{Result, WalkError};
use crate::gauge::{GaugeTransform, PhaseProfile};
use crate::phase::{circ_dist, wrap, Phase};
use crate::tolerance::Tolerances;
use crate::walk::WalkSpec;
use crate::window::build_window_operator;

pub const MIN_SEARCH_WINDOW: usize = 3;
/// Grid size per free phase when enumerating degenerate solution families.
pub const FREE_PHASE_GRID: usize = 16;
/// Cap on enumerated witnesses.
pub const MAX_WITNESSES: usize = 4096;

/// `(λ, u, v)` with `W_n = diag(e^{iu_n}, e^{iv_n})` on a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub lambda: Phase,
    pub u: BTreeMap<i64, Phase>,
    pub v: BTreeMap<i64, Phase>,
}

impl EquivalenceWitness {
    pub fn identity(half_width: usize) -> Self {
        Self::linear(half_width, 0.0, 0.0)
    }

    /// `λ = π`, `W_n = (-1)ⁿ I`.
    pub fn alternating(half_width: usize) -> Self {
        Self::linear(half_width, std::f64::consts::PI, std::f64::consts::PI)
    }

    fn linear(half_width: usize, lambda: f64, step: f64) -> Self {
        let n = half_width as i64;
        let u: BTreeMap<_, _> = (-n..=n).map(|k| (k, Phase::new(k as f64 * step))).collect();
        EquivalenceWitness { lambda: Phase::new(lambda), v: u.clone(), u }
    }

    pub fn to_gauge(&self) -> GaugeTransform {
        let explicit = self.u.iter().map(|(&n, u)| (n, (u.value(), self.v[&n].value()))).collect();
        GaugeTransform::diagonal(self.lambda, PhaseProfile::new(explicit, (0.0, 0.0), (0.0, 0.0)))
    }

    /// The witness for `A → C` given `self: A → B` and `then: B → C`.
    pub fn compose(&self, then: &EquivalenceWitness) -> EquivalenceWitness {
        let add = |x: &BTreeMap<i64, Phase>, y: &BTreeMap<i64, Phase>| {
            x.iter().filter_map(|(n, p)| y.get(n).map(|q| (*n, *p + *q))).collect()
        };
        EquivalenceWitness {
            lambda: self.lambda + then.lambda,
            u: add(&self.u, &then.u),
            v: add(&self.v, &then.v),
        }
    }

    pub fn inverse(&self) -> EquivalenceWitness {
        let neg = |x: &BTreeMap<i64, Phase>| x.iter().map(|(n, p)| (*n, -*p)).collect();
        EquivalenceWitness { lambda: -self.lambda, u: neg(&self.u), v: neg(&self.v) }
    }

    pub fn half_width(&self) -> usize {
        self.u.keys().next_back().copied().unwrap_or(0) as usize
    }

    /// Max deviation of `e^{iλ} W A W*` from `B` on the witness window.
    pub fn deviation(&self, a: &WalkSpec, b: &WalkSpec) -> Result<f64> {
        let n = self.half_width();
        let lhs = self.to_gauge().apply_to_window(&build_window_operator(a, n)?);
        Ok(lhs.max_abs_diff(&build_window_operator(b, n)?))
    }

    pub fn approx_eq(&self, other: &EquivalenceWitness, eps: f64) -> bool {
        let same = |x: &BTreeMap<i64, Phase>, y: &BTreeMap<i64, Phase>| {
            x.len() == y.len() && x.iter().zip(y).all(|((n, p), (m, q))| n == m && p.approx_eq(*q, eps))
        };
        self.lambda.approx_eq(other.lambda, eps) && same(&self.u, &other.u) && same(&self.v, &other.v)
    }
}

/// Decides equivalence from canonical parameters. Both forms must have the
/// same class and strictly interior radii.
pub fn equivalent_params(c1: &CanonicalForm, c2: &CanonicalForm, tol: &Tolerances) -> Result<bool> {
    if c1.class() != c2.class() {
        return Err(WalkError::ClassMismatch(c1.class(), c2.class()));
    }
    let strict = |r: f64| r > tol.r && r < 1.0 - tol.r;
    if !c1.radii().into_iter().chain(c2.radii()).all(strict) {
        return Err(WalkError::DegenerateParameters);
    }
    let req = |x: f64, y: f64| (x - y).abs() <= tol.r;
    let peq = |x: Phase, y: Phase| x.approx_eq(y, tol.phase);
    Ok(match (c1, c2) {
        (CanonicalForm::General(x), CanonicalForm::General(y)) => {
            if x.window != y.window {
                return Err(WalkError::WindowMismatch);
            }
            x.r.iter().all(|(n, r)| req(*r, y.r[n])) && x.theta.iter().all(|(n, t)| peq(*t, y.theta[n]))
        }
        (CanonicalForm::TwoPhaseDefect(x), CanonicalForm::TwoPhaseDefect(y)) => {
            req(x.r_plus, y.r_plus)
                && req(x.r_minus, y.r_minus)
                && req(x.r_0, y.r_0)
                && peq(x.mu1, y.mu1)
                && peq(x.mu2, y.mu2)
                && peq(x.mu3, y.mu3)
        }
        (CanonicalForm::CompleteTwoPhase(x), CanonicalForm::CompleteTwoPhase(y)) => {
            req(x.r_plus, y.r_plus) && req(x.r_minus, y.r_minus) && peq(x.sigma1, y.sigma1) && peq(x.sigma2, y.sigma2)
        }
        (CanonicalForm::OneDefect(x), CanonicalForm::OneDefect(y)) => {
            req(x.r_pm, y.r_pm) && req(x.r_0, y.r_0) && peq(x.nu1, y.nu1) && peq(x.nu2, y.nu2)
        }
        (CanonicalForm::Ti(x), CanonicalForm::Ti(y)) => req(x.r, y.r),
        _ => unreachable!("classes already compared"),
    })
}

#[derive(Copy, Clone, Debug)]
struct Edge {
    from: usize,
    to: usize,
    delta: f64,
}

/// Congruence system `x_to - x_from - λ ≡ δ` on the unknowns of `[-N, N]`.
struct ConstraintSystem {
    half_width: i64,
    edges: Vec<Edge>,
}

impl ConstraintSystem {
    fn u(&self, n: i64) -> usize {
        2 * (n + self.half_width) as usize
    }

    fn v(&self, n: i64) -> usize {
        2 * (n + self.half_width) as usize + 1
    }

    fn nodes(&self) -> usize {
        2 * (2 * self.half_width as usize + 1)
    }

    /// `None` when the entry moduli differ, so no gauge can exist.
    fn build(a: &WalkSpec, b: &WalkSpec, half_width: usize, tol: &Tolerances) -> Option<Self> {
        let nw = half_width as i64;
        let mut sys = ConstraintSystem { half_width: nw, edges: Vec::new() };
        let present = |x: f64| x > tol.norm;
        for n in -nw..=nw {
            let (sa, sb) = (a.site(n), b.site(n));
            if (sa.r() - sb.r()).abs() > tol.r {
                return None;
            }
            let (r, s) = (sa.r(), sa.s());
            let da = (sb.a() - sa.a()).value();
            let db = (sb.b() - sa.b()).value();
            let dc = (sb.c() - sa.c()).value();
            let dd = (sb.d() - sa.d()).value();
            let mut push = |mag: f64, from: usize, to: usize, delta: f64| {
                if present(mag) {
                    sys.edges.push(Edge { from, to, delta });
                }
            };
            if n > -nw {
                let (u_prev, u, v) = (sys_u(nw, n - 1), sys_u(nw, n), sys_v(nw, n));
                push(r, u_prev, u, da);
                push(s, u_prev, v, db);
            }
            if n < nw {
                let (v_next, u, v) = (sys_v(nw, n + 1), sys_u(nw, n), sys_v(nw, n));
                push(s, v_next, u, dc);
                push(r, v_next, v, dd);
            }
        }
        Some(sys)
    }
}

fn sys_u(nw: i64, n: i64) -> usize {
    2 * (n + nw) as usize
}

fn sys_v(nw: i64, n: i64) -> usize {
    2 * (n + nw) as usize + 1
}

/// Solution structure of a constraint system.
struct Reduced {
    /// `x = c + mλ + offset[component]`.
    potential: Vec<(f64, i64)>,
    component: Vec<usize>,
    components: usize,
    /// Candidate `λ` values, or `None` when `λ` is unconstrained.
    lambdas: Option<Vec<f64>>,
}

impl ConstraintSystem {
    fn reduce(&self, tol: &Tolerances) -> Option<Reduced> {
        let n_nodes = self.nodes();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.from].push((e.to, k));
            adj[e.to].push((e.from, k));
        }
        let mut potential = vec![(0.0, 0i64); n_nodes];
        let mut component = vec![usize::MAX; n_nodes];
        let mut tree_edge = vec![false; self.edges.len()];
        let mut components = 0;

        // u₀ first, so it is the root of component 0 with potential 0
        let order = std::iter::once(self.u(0)).chain(0..n_nodes);
        for root in order {
            if component[root] != usize::MAX {
                continue;
            }
            component[root] = components;
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for &(j, k) in &adj[i] {
                    if component[j] != usize::MAX {
                        continue;
                    }
                    let e = self.edges[k];
                    let (c, m) = potential[i];
                    potential[j] = if e.from == i {
                        (c + e.delta, m + 1)
                    } else {
                        (c - e.delta, m - 1)
                    };
                    component[j] = components;
                    tree_edge[k] = true;
                    queue.push_back(j);
                }
            }
            components += 1;
        }

        // residual C + Kλ ≡ 0 for every non-tree edge
        let mut cycles = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if tree_edge[k] {
                continue;
            }
            let (ci, mi) = potential[e.from];
            let (cj, mj) = potential[e.to];
            cycles.push((cj - ci - e.delta, mj - mi - 1));
        }
        let holds = |lambda: f64| cycles.iter().all(|&(c, k)| circ_dist(c + k as f64 * lambda, 0.0) <= tol.phase);

        let lambdas = match cycles.iter().filter(|(_, k)| *k != 0).min_by_key(|(_, k)| k.abs()) {
            None => {
                if !holds(0.0) {
                    return None;
                }
                None
            }
            Some(&(c, k)) => {
                let kf = k as f64;
                let cands: Vec<f64> = (0..k.unsigned_abs())
                    .map(|j| wrap((-c + TAU * j as f64) / kf))
                    .filter(|&l| holds(l))
                    .collect();
                if cands.is_empty() {
                    return None;
                }
                Some(cands)
            }
        };
        Some(Reduced { potential, component, components, lambdas })
    }
}

impl Reduced {
    fn is_degenerate(&self) -> bool {
        self.lambdas.is_none() || self.components > 1
    }

    fn witness(&self, sys: &ConstraintSystem, lambda: f64, offsets: &[f64]) -> EquivalenceWitness {
        let value = |i: usize| {
            let (c, m) = self.potential[i];
            Phase::new(c + m as f64 * lambda + offsets[self.component[i]])
        };
        let nw = sys.half_width;
        EquivalenceWitness {
            lambda: Phase::new(lambda),
            u: (-nw..=nw).map(|n| (n, value(sys.u(n)))).collect(),
            v: (-nw..=nw).map(|n| (n, value(sys.v(n)))).collect(),
        }
    }
}

/// All diagonal gauges found between two windows.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFamily {
    pub witnesses: Vec<EquivalenceWitness>,
    /// Some phase (λ or a component offset) was left free and sampled on a
    /// grid. Absence of a witness is then not proof of inequivalence.
    pub degenerate: bool,
    pub truncated: bool,
}

fn check_window(half_width: usize) -> Result<()> {
    if half_width < MIN_SEARCH_WINDOW {
        Err(WalkError::WindowTooSmall { got: half_width, min: MIN_SEARCH_WINDOW })
    } else {
        Ok(())
    }
}

fn validated(w: EquivalenceWitness, a: &WalkSpec, b: &WalkSpec, tol: &Tolerances) -> Result<Option<EquivalenceWitness>> {
    Ok((w.deviation(a, b)? <= tol.gauge).then_some(w))
}

/// Looks for `(λ, u, v)` with `e^{iλ} W A W* = B` on `[-N, N]`, normalized
/// to `u₀ = 0`. Free phases are set to 0.
pub fn gauge_search(
    a: &WalkSpec,
    b: &WalkSpec,
    half_width: usize,
    tol: &Tolerances,
) -> Result<Option<EquivalenceWitness>> {
    check_window(half_width)?;
    let Some(sys) = ConstraintSystem::build(a, b, half_width, tol) else {
        return Ok(None);
    };
    let Some(red) = sys.reduce(tol) else {
        return Ok(None);
    };
    let offsets = vec![0.0; red.components];
    for &lambda in red.lambdas.as_deref().unwrap_or(&[0.0]) {
        if let Some(w) = validated(red.witness(&sys, lambda, &offsets), a, b, tol)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Enumerates every diagonal gauge between two windows. Phases left free
/// by the constraints are sampled on a [`FREE_PHASE_GRID`]-point grid, up
/// to `max` witnesses.
pub fn enumerate_witnesses(
    a: &WalkSpec,
    b: &WalkSpec,
    half_width: usize,
    max: usize,
    tol: &Tolerances,
) -> Result<WitnessFamily> {
    check_window(half_width)?;
    let empty = |degenerate| WitnessFamily { witnesses: Vec::new(), degenerate, truncated: false };
    let Some(sys) = ConstraintSystem::build(a, b, half_width, tol) else {
        return Ok(empty(false));
    };
    let Some(red) = sys.reduce(tol) else {
        return Ok(empty(false));
    };
    let grid: Vec<f64> = (0..FREE_PHASE_GRID).map(|j| TAU * j as f64 / FREE_PHASE_GRID as f64).collect();
    let lambdas = red.lambdas.clone().unwrap_or_else(|| grid.clone());

    let mut family = WitnessFamily { witnesses: Vec::new(), degenerate: red.is_degenerate(), truncated: false };
    // odometer over the offsets of components 1.. (component 0 holds u₀ = 0)
    let free = red.components - 1;
    'outer: for &lambda in &lambdas {
        let mut digits = vec![0usize; free];
        loop {
            if family.witnesses.len() >= max {
                family.truncated = true;
                break 'outer;
            }
            let offsets: Vec<f64> = std::iter::once(0.0).chain(digits.iter().map(|&d| grid[d])).collect();
            if let Some(w) = validated(red.witness(&sys, lambda, &offsets), a, b, tol)? {
                family.witnesses.push(w);
            }
            let mut i = 0;
            while i < free {
                digits[i] += 1;
                if digits[i] < FREE_PHASE_GRID {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == free {
                break;
            }
        }
    }
    Ok(family)
}

/// All `(λ, W)` with `e^{iλ} W U W* = U` on the window, for walks whose
/// radii are all strictly inside `(0, 1)`.
pub fn commutant(spec: &WalkSpec, half_width: usize, tol: &Tolerances) -> Result<Vec<EquivalenceWitness>> {
    check_window(half_width)?;
    if !spec.is_strict_on(half_width as i64, tol) {
        return Err(WalkError::DegenerateParameters);
    }
    let mut family = enumerate_witnesses(spec, spec, half_width, MAX_WITNESSES, tol)?;
    family.witnesses.sort_by(|x, y| x.lambda.partial_cmp(&y.lambda).unwrap());
    Ok(family.witnesses)
}

/// True when some radius on the window is 0 or 1 (within `tol.r`).
pub fn is_degenerate(spec: &WalkSpec, half_width: usize, tol: &Tolerances) -> bool {
    !spec.is_strict_on(half_width as i64, tol)
}

/// Decision of [`decide`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub equivalent: bool,
    pub method: &'static str,
    pub class: Option<WalkClass>,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquivalenceWitness>,
}

/// Decides equivalence of two walks on `[-N, N]`.
///
/// Strict walks of the same special class are compared by their class
/// parameters, any other strict pair by the general canonical form on the
/// window. Degenerate walks, or `force_oracle`, go to [`gauge_search`].
pub fn decide(
    a: &WalkSpec,
    b: &WalkSpec,
    half_width: usize,
    force_oracle: bool,
    tol: &Tolerances,
) -> Result<Verdict> {
    check_window(half_width)?;
    let degenerate = is_degenerate(a, half_width, tol) || is_degenerate(b, half_width, tol);
    if !force_oracle && !degenerate {
        let (ca, cb) = (classify(a, tol), classify(b, tol));
        let class = if ca == cb { ca } else { WalkClass::General };
        let (fa, _) = canonicalize(a, Some(class), half_width, tol)?;
        let (fb, _) = canonicalize(b, Some(class), half_width, tol)?;
        return Ok(Verdict {
            equivalent: equivalent_params(&fa, &fb, tol)?,
            method: "params",
            class: Some(class),
            degenerate: false,
            witness: None,
        });
    }
    let witness = gauge_search(a, b, half_width, tol)?;
    Ok(Verdict { equivalent: witness.is_some(), method: "oracle", class: None, degenerate, witness })
}
