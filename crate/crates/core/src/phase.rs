use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An angle in radians, held in `[0, 2π)`.
#[derive(Copy, Clone, Default, PartialEq, PartialOrd)]
pub struct Phase(f64);

const SEAM: f64 = 8.0 * f64::EPSILON * TAU;

/// Reduce a real angle to `[0, 2π)`.
pub fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    // tiny negatives land on or just below 2π
    if y >= TAU - SEAM {
        0.0
    } else {
        // -0.0 % TAU is -0.0
        y + 0.0
    }
}

/// Circular distance `|e^{ix} - e^{iy}|`, which is free of the 2π seam.
pub fn circ_dist(x: f64, y: f64) -> f64 {
    (C64::cis(x) - C64::cis(y)).norm()
}

impl Phase {
    pub const ZERO: Phase = Phase(0.0);
    pub const PI: Phase = Phase(PI);

    pub fn new(x: f64) -> Self {
        Phase(wrap(x))
    }

    /// Argument of a complex number; zero for the origin.
    pub fn arg_of(z: C64) -> Self {
        if z == C64::new(0.0, 0.0) {
            Phase::ZERO
        } else {
            Phase::new(z.arg())
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn cis(self) -> C64 {
        C64::cis(self.0)
    }

    /// Equality modulo 2π within `eps`.
    pub fn approx_eq(self, other: Phase, eps: f64) -> bool {
        circ_dist(self.0, other.0) <= eps
    }

    pub fn is_zero(self, eps: f64) -> bool {
        self.approx_eq(Phase::ZERO, eps)
    }
}

impl From<f64> for Phase {
    fn from(x: f64) -> Self {
        Phase::new(x)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::new(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        if !x.is_finite() {
            return Err(serde::de::Error::custom("phase must be finite"));
        }
        Ok(Phase::new(x))
    }
}
