#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use qw1d_core::canonical::WalkClass;
use qw1d_core::equivalence::EquivalenceWitness;
use qw1d_core::gauge::{GaugeTransform, LinearGauge, PhaseProfile};
use qw1d_core::{C2Vector, CoeffSite, Phase, WalkSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CLASSES: [WalkClass; 5] = [
    WalkClass::General,
    WalkClass::TwoPhaseDefect,
    WalkClass::CompleteTwoPhase,
    WalkClass::OneDefect,
    WalkClass::Ti,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn phase<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..TAU)
}

/// A site with `r` uniform in `[lo, hi)` and uniform phases.
pub fn site<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> CoeffSite {
    let r = rng.gen_range(lo..hi);
    CoeffSite::from_abc(r, phase(rng), phase(rng), phase(rng)).unwrap()
}

/// A random walk whose structure is exactly `class`, radii in `[lo, hi)`.
pub fn spec_of_class<R: Rng>(rng: &mut R, class: WalkClass, lo: f64, hi: f64) -> WalkSpec {
    let mut s = || site(rng, lo, hi);
    match class {
        WalkClass::Ti => WalkSpec::translation_invariant(s()),
        WalkClass::OneDefect => {
            let t = s();
            WalkSpec::two_phase_defect(t, t, s())
        }
        WalkClass::CompleteTwoPhase => WalkSpec::new(s(), s()),
        WalkClass::TwoPhaseDefect => WalkSpec::two_phase_defect(s(), s(), s()),
        WalkClass::General => {
            let mut spec = WalkSpec::new(s(), s()).with_site(2, s()).with_site(-3, s());
            for n in -3..=3 {
                if rng.gen_bool(0.5) {
                    spec = spec.with_site(n, site(rng, lo, hi));
                }
            }
            spec
        }
    }
}

/// Any valid walk, radii occasionally exactly 0 or 1.
pub fn any_spec<R: Rng>(rng: &mut R) -> WalkSpec {
    let class = CLASSES[rng.gen_range(0..CLASSES.len())];
    let mut spec = spec_of_class(rng, class, 0.0, 1.0);
    if rng.gen_bool(0.2) {
        let r = if rng.gen_bool(0.5) { 0.0 } else { 1.0 };
        let n = rng.gen_range(-4..=4);
        spec = spec.with_site(n, CoeffSite::from_abc(r, phase(rng), phase(rng), phase(rng)).unwrap());
    }
    spec
}

/// A unit vector; one time in five a basis vector times a phase.
pub fn state<R: Rng>(rng: &mut R) -> C2Vector {
    match rng.gen_range(0..10) {
        0 => C2Vector::e1().scale(C64::cis(phase(rng))),
        1 => C2Vector::e2().scale(C64::cis(phase(rng))),
        _ => {
            let alpha: f64 = rng.gen_range(0.0..1.0);
            let beta = (1.0 - alpha * alpha).sqrt();
            C2Vector::new(C64::from_polar(alpha, phase(rng)), C64::from_polar(beta, phase(rng)))
        }
    }
}

/// A diagonal gauge with independent random phases on `[-m, m]`.
pub fn random_gauge<R: Rng>(rng: &mut R, m: i64) -> GaugeTransform {
    let explicit = (-m..=m).map(|n| (n, (phase(rng), phase(rng)))).collect();
    GaugeTransform::diagonal(Phase::new(phase(rng)), PhaseProfile::new(explicit, (0.0, 0.0), (0.0, 0.0)))
}

pub fn random_linear_gauge<R: Rng>(rng: &mut R) -> LinearGauge {
    LinearGauge { lambda: phase(rng), x: phase(rng), y: phase(rng), kappa: phase(rng) }
}

/// A walk unitarily equivalent to `spec` and the gauge taking `spec` to it.
///
/// Special classes get a class-preserving linear gauge. `General` gets an
/// arbitrary diagonal gauge and the copy is exact on `[-n, n]` only.
pub fn gauged_copy<R: Rng>(rng: &mut R, spec: &WalkSpec, class: WalkClass, n: i64) -> (WalkSpec, GaugeTransform) {
    if class == WalkClass::General {
        let g = random_gauge(rng, n + 3);
        let exceptions = g.gauged_sites(spec, -n - 2, n + 2);
        let copy = WalkSpec { left_tail: spec.left_tail, right_tail: spec.right_tail, exceptions };
        (copy, g)
    } else {
        let lg = random_linear_gauge(rng);
        (lg.apply_to_spec(spec), lg.to_transform())
    }
}

/// Restriction of a diagonal gauge to `[-n, n]`.
pub fn witness_of(g: &GaugeTransform, n: i64) -> EquivalenceWitness {
    let (u, v) = (-n..=n)
        .map(|k| {
            let (a, b) = g.phases.at(k);
            ((k, Phase::new(a)), (k, Phase::new(b)))
        })
        .unzip();
    EquivalenceWitness { lambda: g.global_phase, u, v }
}
