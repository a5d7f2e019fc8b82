//! Site data of a one-dimensional two-state walk.
//!
//! A walk is the unitary
//! `U = Σ_n |ξ_{n-1,n}⟩⟨ζ_{n-1,n}| + |ξ_{n+1,n}⟩⟨ζ_{n+1,n}|`.
//! After rotating each cell so that `ξ_{n,n+1} ↦ e₁` and `ξ_{n,n-1} ↦ e₂`
//! (the standard gauge) the walk is
//!
//! ```text
//! U = Σ_n |e₁^{n-1}⟩⟨e^{ia_n} r_n e₁^n + e^{ib_n} s_n e₂^n|
//!       + |e₂^{n+1}⟩⟨e^{ic_n} s_n e₁^n + e^{id_n} r_n e₂^n|
//! ```
//!
//! with `s_n = √(1 - r_n²)` and `a_n - b_n ≡ c_n - d_n + π`. Phases live
//! inside bras, so the matrix entry carrying phase `a` is `e^{-ia}·r`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::phase::{circ_dist, Phase};
use crate::tolerance::Tolerances;

/// A vector in one cell `ℂ²`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct C2Vector(pub [C64; 2]);

impl C2Vector {
    pub fn new(x: C64, y: C64) -> Self {
        C2Vector([x, y])
    }

    pub fn e1() -> Self {
        C2Vector([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn e2() -> Self {
        C2Vector([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &C2Vector) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn is_unit(&self, tol: &Tolerances) -> bool {
        (self.norm_sq() - 1.0).abs() <= tol.norm
    }

    pub fn scale(&self, z: C64) -> Self {
        C2Vector([self.0[0] * z, self.0[1] * z])
    }

    pub fn add(&self, other: &C2Vector) -> Self {
        C2Vector([self.0[0] + other.0[0], self.0[1] + other.0[1]])
    }

    pub fn apply(&self, m: &Matrix2<C64>) -> Self {
        C2Vector([
            m[(0, 0)] * self.0[0] + m[(0, 1)] * self.0[1],
            m[(1, 0)] * self.0[0] + m[(1, 1)] * self.0[1],
        ])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// The four cell vectors of site `n`, all living in `H_n`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SiteVectors {
    /// `ξ_{n,n+1}`
    pub xi_right: C2Vector,
    /// `ξ_{n,n-1}`
    pub xi_left: C2Vector,
    /// `ζ_{n-1,n}`
    pub zeta_to_left: C2Vector,
    /// `ζ_{n+1,n}`
    pub zeta_to_right: C2Vector,
}

impl SiteVectors {
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let pair_dev = |x: &C2Vector, y: &C2Vector| {
            (x.norm_sq() - 1.0)
                .abs()
                .max((y.norm_sq() - 1.0).abs())
                .max(x.inner(y).norm())
        };
        for (which, v) in [
            ("xi_right", &self.xi_right),
            ("xi_left", &self.xi_left),
            ("zeta_to_left", &self.zeta_to_left),
            ("zeta_to_right", &self.zeta_to_right),
        ] {
            if !v.is_finite() {
                return Err(WalkError::NonFinite(which));
            }
        }
        let dev = pair_dev(&self.xi_right, &self.xi_left);
        if dev > tol.norm {
            return Err(WalkError::NonOrthonormal { which: "xi", deviation: dev });
        }
        let dev = pair_dev(&self.zeta_to_left, &self.zeta_to_right);
        if dev > tol.norm {
            return Err(WalkError::NonOrthonormal { which: "zeta", deviation: dev });
        }
        Ok(())
    }

    /// The cell rotation `|e₁⟩⟨ξ_{n,n+1}| + |e₂⟩⟨ξ_{n,n-1}|` taking this site
    /// to the standard gauge.
    pub fn frame(&self) -> Matrix2<C64> {
        let (x, y) = (&self.xi_right.0, &self.xi_left.0);
        Matrix2::new(x[0].conj(), x[1].conj(), y[0].conj(), y[1].conj())
    }
}

/// Standard-gauge coefficients of one site.
///
/// When `r ∈ {0, 1}` two of the phases multiply zero amplitudes. They are
/// then stored so that the phase constraint still holds exactly: for `r = 1`
/// `b = 0, c = a + d + π`; for `r = 0` `a = 0, d = b + c + π`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSite", into = "RawSite")]
pub struct CoeffSite {
    r: f64,
    a: Phase,
    b: Phase,
    c: Phase,
    d: Phase,
}

#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
struct RawSite {
    r: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<RawSite> for CoeffSite {
    type Error = WalkError;
    fn try_from(raw: RawSite) -> Result<Self> {
        CoeffSite::new(raw.r, raw.a, raw.b, raw.c, raw.d)
    }
}

impl From<CoeffSite> for RawSite {
    fn from(s: CoeffSite) -> Self {
        RawSite {
            r: s.r,
            a: s.a.value(),
            b: s.b.value(),
            c: s.c.value(),
            d: s.d.value(),
        }
    }
}

/// Residual of `a - b ≡ c - d + π`, measured on the unit circle.
pub fn constraint_residual(a: f64, b: f64, c: f64, d: f64) -> f64 {
    circ_dist(a - b, c - d + PI)
}

impl CoeffSite {
    pub fn new(r: f64, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new_with(r, a, b, c, d, &Tolerances::default())
    }

    pub fn new_with(r: f64, a: f64, b: f64, c: f64, d: f64, tol: &Tolerances) -> Result<Self> {
        if ![r, a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(WalkError::NonFinite("site coefficients"));
        }
        if !(-tol.norm..=1.0 + tol.norm).contains(&r) {
            return Err(WalkError::RadiusOutOfRange(r));
        }
        let r = r.clamp(0.0, 1.0);
        if r > 0.0 && r < 1.0 {
            let residual = constraint_residual(a, b, c, d);
            if residual > tol.phase {
                return Err(WalkError::PhaseConstraintViolation { residual });
            }
        }
        Ok(Self::normalized(r, a, b, c, d))
    }

    /// Builds a site without checking the phase constraint. The result is
    /// generally not unitary; this exists to exercise the unitarity check.
    pub fn new_unchecked(r: f64, a: f64, b: f64, c: f64, d: f64) -> Self {
        CoeffSite { r, a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    fn normalized(r: f64, a: f64, b: f64, c: f64, d: f64) -> Self {
        if r == 1.0 {
            CoeffSite { r, a: a.into(), b: Phase::ZERO, c: Phase::new(a + d + PI), d: d.into() }
        } else if r == 0.0 {
            CoeffSite { r, a: Phase::ZERO, b: b.into(), c: c.into(), d: Phase::new(b + c + PI) }
        } else {
            CoeffSite { r, a: a.into(), b: b.into(), c: c.into(), d: d.into() }
        }
    }

    /// A site from `(r, a, b, c)` with `d` fixed by the phase constraint.
    pub fn from_abc(r: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(r, a, b, c, c - a + b + PI)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        (1.0 - self.r * self.r).max(0.0).sqrt()
    }

    pub fn a(&self) -> Phase {
        self.a
    }
    pub fn b(&self) -> Phase {
        self.b
    }
    pub fn c(&self) -> Phase {
        self.c
    }
    pub fn d(&self) -> Phase {
        self.d
    }

    /// Matrix entries `[[⟨e₁^{n-1}|U|e₁^n⟩, ⟨e₁^{n-1}|U|e₂^n⟩], [⟨e₂^{n+1}|U|e₁^n⟩, ⟨e₂^{n+1}|U|e₂^n⟩]]`.
    pub fn entries(&self) -> [[C64; 2]; 2] {
        let (r, s) = (self.r, self.s());
        [
            [self.a.cis().conj() * r, self.b.cis().conj() * s],
            [self.c.cis().conj() * s, self.d.cis().conj() * r],
        ]
    }

    pub fn constraint_residual(&self) -> f64 {
        constraint_residual(self.a.value(), self.b.value(), self.c.value(), self.d.value())
    }

    pub fn is_strict(&self, tol: &Tolerances) -> bool {
        self.r > tol.r && self.r < 1.0 - tol.r
    }

    /// Equality of the operator data, phases modulo 2π.
    pub fn approx_eq(&self, other: &CoeffSite, tol: &Tolerances) -> bool {
        (self.r - other.r).abs() <= tol.norm
            && self.a.approx_eq(other.a, tol.phase)
            && self.b.approx_eq(other.b, tol.phase)
            && self.c.approx_eq(other.c, tol.phase)
            && self.d.approx_eq(other.d, tol.phase)
    }

    /// Site data after conjugation by `diag(e^{iu}, e^{iv})` cells and a
    /// global phase `λ`. `u_prev = u_{n-1}`, `u = u_n`, `v = v_n`,
    /// `v_next = v_{n+1}`.
    pub fn gauged(&self, lambda: f64, u_prev: f64, u: f64, v: f64, v_next: f64) -> CoeffSite {
        CoeffSite::normalized(
            self.r,
            self.a.value() - lambda - u_prev + u,
            self.b.value() - lambda - u_prev + v,
            self.c.value() - lambda - v_next + u,
            self.d.value() - lambda - v_next + v,
        )
    }
}

/// Converts one site's cell vectors to standard-gauge coefficients.
pub fn coeffs_from_vectors(sv: &SiteVectors, tol: &Tolerances) -> Result<CoeffSite> {
    sv.validate(tol)?;
    let za = sv.xi_right.inner(&sv.zeta_to_left);
    let zb = sv.xi_left.inner(&sv.zeta_to_left);
    let zc = sv.xi_right.inner(&sv.zeta_to_right);
    let zd = sv.xi_left.inner(&sv.zeta_to_right);

    let (a, b, c, d) = (
        Phase::arg_of(za).value(),
        Phase::arg_of(zb).value(),
        Phase::arg_of(zc).value(),
        Phase::arg_of(zd).value(),
    );
    if zb.norm() <= tol.norm {
        return CoeffSite::new_with(1.0, a, 0.0, 0.0, d, tol);
    }
    if za.norm() <= tol.norm {
        return CoeffSite::new_with(0.0, 0.0, b, c, 0.0, tol);
    }
    let r = za.norm().min(1.0);
    let s = (1.0 - r * r).sqrt();
    let residual = r * s * constraint_residual(a, b, c, d);
    if residual > tol.phase {
        return Err(WalkError::PhaseConstraintViolation { residual });
    }
    // absorb rounding into d so the constraint holds to machine precision
    CoeffSite::new_with(r, a, b, c, c - a + b + PI, tol)
}

/// An eventually constant walk in the standard gauge.
///
/// `site(n)` is `exceptions[n]` if present, otherwise `left_tail` for
/// `n ≤ -1` and `right_tail` for `n ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkSpec {
    pub left_tail: CoeffSite,
    pub right_tail: CoeffSite,
    #[serde(default)]
    pub exceptions: BTreeMap<i64, CoeffSite>,
}

impl WalkSpec {
    pub fn new(left_tail: CoeffSite, right_tail: CoeffSite) -> Self {
        WalkSpec { left_tail, right_tail, exceptions: BTreeMap::new() }
    }

    pub fn translation_invariant(site: CoeffSite) -> Self {
        Self::new(site, site)
    }

    /// Left coin on `n ≤ -1`, right coin on `n ≥ 1`, `defect` at `0`.
    pub fn two_phase_defect(left: CoeffSite, right: CoeffSite, defect: CoeffSite) -> Self {
        Self::new(left, right).with_site(0, defect)
    }

    pub fn with_site(mut self, n: i64, site: CoeffSite) -> Self {
        self.exceptions.insert(n, site);
        self
    }

    pub fn site(&self, n: i64) -> CoeffSite {
        match self.exceptions.get(&n) {
            Some(s) => *s,
            None if n < 0 => self.left_tail,
            None => self.right_tail,
        }
    }

    pub fn default_site(&self, n: i64) -> CoeffSite {
        if n < 0 {
            self.left_tail
        } else {
            self.right_tail
        }
    }

    /// Exception sites whose data differs from the tail they override.
    pub fn effective_exceptions(&self, tol: &Tolerances) -> Vec<i64> {
        self.exceptions
            .iter()
            .filter(|(&n, s)| !s.approx_eq(&self.default_site(n), tol))
            .map(|(&n, _)| n)
            .collect()
    }

    /// Largest `|n|` over the exceptions (0 when there are none).
    pub fn extent(&self) -> i64 {
        self.exceptions.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// True when every site in `[-n, n]` and both tails are strict.
    pub fn is_strict_on(&self, n: i64, tol: &Tolerances) -> bool {
        self.left_tail.is_strict(tol)
            && self.right_tail.is_strict(tol)
            && (-n..=n).all(|k| self.site(k).is_strict(tol))
            && self.exceptions.values().all(|s| s.is_strict(tol))
    }
}

/// Per-site cell rotations taking a vector-form walk to the standard gauge,
/// resolved with the same tail rule as [`WalkSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct SiteFrames {
    pub left_tail: Matrix2<C64>,
    pub right_tail: Matrix2<C64>,
    pub exceptions: BTreeMap<i64, Matrix2<C64>>,
}

impl SiteFrames {
    pub fn frame(&self, n: i64) -> Matrix2<C64> {
        match self.exceptions.get(&n) {
            Some(m) => *m,
            None if n < 0 => self.left_tail,
            None => self.right_tail,
        }
    }
}

/// A walk given by its cell vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorWalkSpec {
    pub left_tail: SiteVectors,
    pub right_tail: SiteVectors,
    pub exceptions: BTreeMap<i64, SiteVectors>,
}

impl VectorWalkSpec {
    pub fn site(&self, n: i64) -> SiteVectors {
        match self.exceptions.get(&n) {
            Some(s) => *s,
            None if n < 0 => self.left_tail,
            None => self.right_tail,
        }
    }

    /// Standard-gauge coefficients and the cell rotations that produce them.
    pub fn to_standard(&self, tol: &Tolerances) -> Result<(WalkSpec, SiteFrames)> {
        let spec = WalkSpec {
            left_tail: coeffs_from_vectors(&self.left_tail, tol)?,
            right_tail: coeffs_from_vectors(&self.right_tail, tol)?,
            exceptions: self
                .exceptions
                .iter()
                .map(|(&n, sv)| coeffs_from_vectors(sv, tol).map(|c| (n, c)))
                .collect::<Result<_>>()?,
        };
        let frames = SiteFrames {
            left_tail: self.left_tail.frame(),
            right_tail: self.right_tail.frame(),
            exceptions: self.exceptions.iter().map(|(&n, sv)| (n, sv.frame())).collect(),
        };
        Ok((spec, frames))
    }
}
