//! The twelve admissible weight patterns of the integral family.
//!
//! A pattern `(l_1 ... l_k)` identifies the iterated integral with weight
//! `(t - tau)^{l_d}` attached to the d-th integration variable, counting from
//! the innermost one. Only the twelve combinations used by the one-step
//! schemes are representable.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightPattern {
    W0,
    W1,
    W2,
    W00,
    W01,
    W10,
    W000,
    W001,
    W010,
    W100,
    W0000,
    W00000,
}

use WeightPattern::*;

impl WeightPattern {
    pub const ALL: [WeightPattern; 12] = [
        W0, W1, W2, W00, W01, W10, W000, W001, W010, W100, W0000, W00000,
    ];

    /// Weight exponents, innermost integration variable first.
    pub fn weights(self) -> &'static [u32] {
        match self {
            W0 => &[0],
            W1 => &[1],
            W2 => &[2],
            W00 => &[0, 0],
            W01 => &[0, 1],
            W10 => &[1, 0],
            W000 => &[0, 0, 0],
            W001 => &[0, 0, 1],
            W010 => &[0, 1, 0],
            W100 => &[1, 0, 0],
            W0000 => &[0, 0, 0, 0],
            W00000 => &[0, 0, 0, 0, 0],
        }
    }

    /// Multiplicity `k` of the iterated integral.
    pub fn multiplicity(self) -> usize {
        self.weights().len()
    }

    pub fn weight_sum(self) -> u32 {
        self.weights().iter().sum()
    }

    /// Exponent of the step length in the scaled coefficient: `k/2 + sum l`.
    pub fn delta_exponent(self) -> f64 {
        self.multiplicity() as f64 / 2.0 + self.weight_sum() as f64
    }

    /// Patterns of multiplicity >= 3 are sampled through coefficient tables;
    /// multiplicities 1 and 2 have closed expansions.
    pub fn needs_table(self) -> bool {
        self.multiplicity() >= 3
    }

    /// Exact squared L2 norm of the weight kernel over the unit simplex
    /// `0 < u_1 < ... < u_k < 1`, i.e. the step-free part of `I_k`.
    pub fn l2_norm_sq_unit(self) -> BigRational {
        let mut value = BigRational::from_integer(BigInt::from(1));
        let mut exponent: u32 = 0;
        for &l in self.weights() {
            // integrating c * u^e * u^{2l} gives c/(e + 2l + 1) * u^{e+2l+1}
            exponent += 2 * l + 1;
            value /= BigRational::from_integer(BigInt::from(exponent));
        }
        value
    }

    /// `I_k = M{ I^2 }`: squared L2 norm of the kernel on a step of length
    /// `delta`.
    pub fn l2_norm_sq(self, delta: f64) -> f64 {
        let power = self.multiplicity() as u32 + 2 * self.weight_sum();
        crate::poly::ratio_to_f64(&self.l2_norm_sq_unit()) * delta.powi(power as i32)
    }

    pub fn label(self) -> &'static str {
        match self {
            W0 => "(0)",
            W1 => "(1)",
            W2 => "(2)",
            W00 => "(00)",
            W01 => "(01)",
            W10 => "(10)",
            W000 => "(000)",
            W001 => "(001)",
            W010 => "(010)",
            W100 => "(100)",
            W0000 => "(0000)",
            W00000 => "(00000)",
        }
    }
}

impl fmt::Display for WeightPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for WeightPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        for p in WeightPattern::ALL {
            if p.label().trim_matches(|c| c == '(' || c == ')') == trimmed {
                return Ok(p);
            }
        }
        Err(Error::InadmissiblePattern(s.to_string()))
    }
}

impl Serialize for WeightPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for WeightPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}
