//! Channel parameters and unit conventions.
//!
//! The channel is in standard form: unit-variance receiver noise, real
//! cross-gains, and per-user average power constraints.
//!
//! ```text
//! Y1 = X1 + h12 * X2 + Z1
//! Y2 = X2 + h21 * X1 + Z2
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Powers and cross-gains of a two-user Gaussian interference channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub p1: f64,
    pub p2: f64,
    pub h12: f64,
    pub h21: f64,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, h12: f64, h21: f64) -> Result<Self> {
        check_power("p1", p1)?;
        check_power("p2", p2)?;
        check_gain("h12", h12)?;
        check_gain("h21", h21)?;
        Ok(Self { p1, p2, h12, h21 })
    }

    pub fn is_symmetric(&self) -> bool {
        self.p1 == self.p2 && self.h12 == self.h21
    }

    /// Returns `(P, h)` for a symmetric channel.
    pub fn symmetric_parts(&self) -> Result<(f64, f64)> {
        if self.is_symmetric() {
            Ok((self.p1, self.h12))
        } else {
            Err(Error::Unsupported(format!(
                "symmetric channel required, got p1={} p2={} h12={} h21={}",
                self.p1, self.p2, self.h12, self.h21
            )))
        }
    }

    /// The same channel with both cross-gains negated.
    pub fn negated_gains(&self) -> Self {
        Self {
            h12: -self.h12,
            h21: -self.h21,
            ..*self
        }
    }

    /// Receiver 2's view of the channel: user indices swapped.
    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2,
            p2: self.p1,
            h12: self.h21,
            h21: self.h12,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        Self::new(self.p1, self.p2, self.h12, self.h21).map(|_| ())
    }
}

fn check_power(name: &'static str, p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("power must be finite, got {p}"),
        });
    }
    if p <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("power must be positive, got {p}"),
        });
    }
    Ok(())
}

fn check_gain(name: &'static str, h: f64) -> Result<()> {
    if h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("gain must be finite, got {h}"),
        })
    }
}

/// Symmetric channel: `p1 = p2 = p`, `h12 = h21 = h`.
pub fn make_symmetric(p: f64, h: f64) -> Result<ChannelParams> {
    ChannelParams::new(p, p, h, h)
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// An information rate in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);

    /// Wraps a value in bits. Rounding noise below zero is clamped to zero.
    pub fn from_bits(bits: f64) -> Self {
        Rate(if bits < 0.0 { 0.0 } else { bits })
    }

    pub fn from_nats(nats: f64) -> Self {
        Self::from_bits(nats / std::f64::consts::LN_2)
    }

    pub fn bits(self) -> f64 {
        self.0
    }
}

impl std::ops::Add for Rate {
    type Output = Rate;
    fn add(self, rhs: Rate) -> Rate {
        Rate(self.0 + rhs.0)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}
