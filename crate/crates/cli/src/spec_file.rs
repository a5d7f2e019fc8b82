//! Walk specification files.
//!
//! Coefficient form:
//!
//! ```json
//! { "left_tail": {"r": 0.6, "a": 0.0, "b": 0.0, "c": 0.0, "d": 3.141592653589793},
//!   "right_tail": {...},
//!   "exceptions": {"0": {...}},
//!   "state": [[1.0, 0.0], [0.0, 0.0]] }
//! ```
//!
//! Vector form replaces each site by its four cell vectors, each an array of
//! two `[re, im]` pairs, under the keys `xi_right`, `xi_left`,
//! `zeta_to_left` and `zeta_to_right`. `exceptions` and `state` are optional
//! in both forms.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64 as C64;
use qw1d_core::walk::SiteFrames;
use qw1d_core::{C2Vector, CoeffSite, SiteVectors, Tolerances, VectorWalkSpec, WalkError, WalkSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

type Pair = [[f64; 2]; 2];
/// Left tail, right tail, exceptions, state.
type Sites<T> = (T, T, BTreeMap<i64, T>, Option<Pair>);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoeffs {
    r: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVectors {
    xi_right: Pair,
    xi_left: Pair,
    zeta_to_left: Pair,
    zeta_to_right: Pair,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile<S> {
    left_tail: S,
    right_tail: S,
    #[serde(default = "BTreeMap::new")]
    exceptions: BTreeMap<i64, S>,
    #[serde(default)]
    state: Option<Pair>,
}

/// A parsed and validated specification file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSpec {
    /// The walk in the standard gauge.
    pub spec: WalkSpec,
    /// Cell rotations to the standard gauge, for vector-form input.
    pub frames: Option<SiteFrames>,
    /// Initial state on site 0, as written in the file.
    pub state: Option<C2Vector>,
}

impl ParsedSpec {
    /// The initial state in the standard gauge.
    pub fn standard_state(&self, phi: &C2Vector) -> C2Vector {
        match &self.frames {
            Some(f) => phi.apply(&f.frame(0)),
            None => *phi,
        }
    }
}

fn vector(p: &Pair) -> C2Vector {
    C2Vector::new(C64::new(p[0][0], p[0][1]), C64::new(p[1][0], p[1][1]))
}

fn field_err(field: String) -> impl FnOnce(WalkError) -> CliError {
    move |source| CliError::Validation { field, source }
}

fn parse_as<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

fn is_vector_form(text: &str) -> Result<bool, CliError> {
    let v: serde_json::Value = parse_as(text)?;
    Ok(v.get("left_tail").and_then(|t| t.get("xi_right")).is_some())
}

fn map_sites<S, T>(
    raw: RawFile<S>,
    mut f: impl FnMut(&S, String) -> Result<T, CliError>,
) -> Result<Sites<T>, CliError> {
    let left = f(&raw.left_tail, "left_tail".into())?;
    let right = f(&raw.right_tail, "right_tail".into())?;
    let exceptions = raw
        .exceptions
        .iter()
        .map(|(&n, s)| f(s, format!("exceptions.{n}")).map(|t| (n, t)))
        .collect::<Result<_, _>>()?;
    Ok((left, right, exceptions, raw.state))
}

/// Parses a specification from JSON text.
pub fn parse_spec_str(text: &str, tol: &Tolerances) -> Result<ParsedSpec, CliError> {
    let (spec, frames, state) = if is_vector_form(text)? {
        let raw: RawFile<RawVectors> = parse_as(text)?;
        let (left_tail, right_tail, exceptions, state) = map_sites(raw, |s, field| {
            let sv = SiteVectors {
                xi_right: vector(&s.xi_right),
                xi_left: vector(&s.xi_left),
                zeta_to_left: vector(&s.zeta_to_left),
                zeta_to_right: vector(&s.zeta_to_right),
            };
            sv.validate(tol).map_err(field_err(field))?;
            Ok(sv)
        })?;
        let vws = VectorWalkSpec { left_tail, right_tail, exceptions };
        let (spec, frames) = vws.to_standard(tol).map_err(field_err("sites".into()))?;
        (spec, Some(frames), state)
    } else {
        let raw: RawFile<RawCoeffs> = parse_as(text)?;
        let (left_tail, right_tail, exceptions, state) = map_sites(raw, |s, field| {
            CoeffSite::new_with(s.r, s.a, s.b, s.c, s.d, tol).map_err(field_err(field))
        })?;
        (WalkSpec { left_tail, right_tail, exceptions }, None, state)
    };
    let state = match state {
        Some(p) => {
            let phi = vector(&p);
            if !phi.is_finite() || !phi.is_unit(tol) {
                return Err(CliError::Validation {
                    field: "state".into(),
                    source: WalkError::NotUnitState { norm_sq: phi.norm_sq() },
                });
            }
            Some(phi)
        }
        None => None,
    };
    Ok(ParsedSpec { spec, frames, state })
}

pub fn parse_spec_file(path: &Path, tol: &Tolerances) -> Result<ParsedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_spec_str(&text, tol)
}

/// Parses `"a+bi,c+di"` into a state on site 0.
pub fn parse_state(s: &str) -> Result<C2Vector, CliError> {
    let bad = |why: String| CliError::State(s.to_string(), why);
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y] = parts.as_slice() else {
        return Err(bad("expected two comma-separated complex numbers".into()));
    };
    let parse = |t: &str| t.parse::<C64>().map_err(|e| bad(format!("'{t}': {e}")));
    Ok(C2Vector::new(parse(x)?, parse(y)?))
}
