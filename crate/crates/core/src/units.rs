//! SI newtypes used across the model.
//!
//! All internal math runs in seconds, meters, kilograms and newtons. Hertz,
//! grams and gram-force exist only so values can cross interface boundaries
//! without losing track of what they measure.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Standard gravity used throughout the model, in m/s².
pub const GRAVITY: f64 = 9.81;

macro_rules! quantity {
    ($(#[$meta:meta])* $name:ident, $unit:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub f64);

        impl $name {
            pub const ZERO: Self = Self(0.0);

            #[inline]
            pub const fn new(value: f64) -> Self {
                Self(value)
            }

            #[inline]
            pub const fn value(self) -> f64 {
                self.0
            }

            #[inline]
            pub fn is_finite(self) -> bool {
                self.0.is_finite()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if let Some(p) = f.precision() {
                    write!(f, "{:.*} {}", p, self.0, $unit)
                } else {
                    write!(f, "{} {}", self.0, $unit)
                }
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self(self.0 + rhs.0)
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self(self.0 - rhs.0)
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            fn mul(self, rhs: f64) -> Self {
                Self(self.0 * rhs)
            }
        }

        impl Div<f64> for $name {
            type Output = Self;
            fn div(self, rhs: f64) -> Self {
                Self(self.0 / rhs)
            }
        }

        impl std::iter::Sum for $name {
            fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
                Self(iter.map(|q| q.0).sum())
            }
        }
    };
}

quantity!(Seconds, "s");
quantity!(Hertz, "Hz");
quantity!(Meters, "m");
quantity!(MetersPerSecond, "m/s");
quantity!(
    /// Acceleration in m/s².
    MetersPerSecondSquared,
    "m/s²"
);
quantity!(Grams, "g");
quantity!(Kilograms, "kg");
quantity!(Newtons, "N");
quantity!(
    /// Force expressed as the weight of a mass in grams under [`GRAVITY`].
    GramForce,
    "gf"
);
quantity!(Watts, "W");

impl Seconds {
    /// Reciprocal rate. A zero period maps to an infinite rate.
    #[inline]
    pub fn to_rate(self) -> Hertz {
        Hertz(1.0 / self.0)
    }
}

impl Hertz {
    #[inline]
    pub fn to_period(self) -> Seconds {
        Seconds(1.0 / self.0)
    }
}

impl Grams {
    #[inline]
    pub fn to_kilograms(self) -> Kilograms {
        Kilograms(self.0 / 1000.0)
    }
}

impl Kilograms {
    #[inline]
    pub fn to_grams(self) -> Grams {
        Grams(self.0 * 1000.0)
    }

    /// Weight of this mass under [`GRAVITY`].
    #[inline]
    pub fn weight(self) -> Newtons {
        Newtons(self.0 * GRAVITY)
    }
}

impl GramForce {
    /// 1 gf = 9.81 mN.
    #[inline]
    pub fn to_newtons(self) -> Newtons {
        Newtons(self.0 * GRAVITY / 1000.0)
    }
}

impl Newtons {
    #[inline]
    pub fn to_gram_force(self) -> GramForce {
        GramForce(self.0 * 1000.0 / GRAVITY)
    }
}
