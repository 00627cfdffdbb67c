//! Closed-form lower and upper bounds on the sum capacity.

use serde::Serialize;

use crate::channel::{ChannelParams, Rate};
use crate::error::Result;
use crate::gaussmi::genie_aided_sum_rate;
use crate::geometry::tangent_bound;
use crate::regime::{classify, construct_genie, RegimeKind, RegimeLabel};

/// Every bound computed for one channel. Absent fields are bounds that do
/// not apply to this channel, not zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub tin_lower: Rate,
    pub ortho_lower: Option<Rate>,
    pub onebit_upper: Option<Rate>,
    pub kramer_upper: Option<Rate>,
    pub tangent_upper: Option<Rate>,
    pub exact_capacity: Option<Rate>,
    /// Useful-genie bound evaluated through the joint covariance: the
    /// useful-and-smart genie in regime, the tangent genie above it.
    pub genie_upper: Option<Rate>,
    pub regime: RegimeLabel,
}

impl BoundSet {
    pub fn upper_bounds(&self) -> impl Iterator<Item = Rate> + '_ {
        [
            self.onebit_upper,
            self.kramer_upper,
            self.tangent_upper,
            self.genie_upper,
        ]
        .into_iter()
        .flatten()
    }

    pub fn min_upper(&self) -> Option<Rate> {
        self.upper_bounds()
            .min_by(|a, b| a.bits().total_cmp(&b.bits()))
    }

    /// Largest present lower bound. The orthogonal-signalling rate only
    /// counts when `include_ortho` is set.
    pub fn max_lower(&self, include_ortho: bool) -> Rate {
        match self.ortho_lower {
            Some(o) if include_ortho && o.bits() > self.tin_lower.bits() => o,
            _ => self.tin_lower,
        }
    }
}

/// Sum rate of single-user decoding with interference treated as noise.
pub fn tin_sum_rate(params: &ChannelParams) -> Rate {
    let ChannelParams { p1, p2, h12, h21 } = *params;
    let r1 = 0.5 * (1.0 + p1 / (1.0 + h12 * h12 * p2)).log2();
    let r2 = 0.5 * (1.0 + p2 / (1.0 + h21 * h21 * p1)).log2();
    Rate::from_bits(r1 + r2)
}

/// `log2(1 + 2P)`, symmetric channel only.
pub fn ortho_sum_rate(params: &ChannelParams) -> Result<Rate> {
    let (p, _) = params.symmetric_parts()?;
    Ok(Rate::from_bits((1.0 + 2.0 * p).log2()))
}

/// `log2(1 + h²P + P/(1 + h²P))`, symmetric channel only.
pub fn onebit_upper(params: &ChannelParams) -> Result<Rate> {
    let (p, h) = params.symmetric_parts()?;
    let i = h * h * p;
    Ok(Rate::from_bits((1.0 + i + p / (1.0 + i)).log2()))
}

/// One-sided (Z-channel) bound `½ log2(1 + P) + ½ log2(1 + P/(1 + h²P))`.
pub fn kramer_upper(params: &ChannelParams) -> Result<Rate> {
    let (p, h) = params.symmetric_parts()?;
    let free = 0.5 * (1.0 + p).log2();
    let interfered = 0.5 * (1.0 + p / (1.0 + h * h * p)).log2();
    Ok(Rate::from_bits(interfered + free))
}

/// Sum capacity when the low-interference condition holds.
pub fn exact_sum_capacity(params: &ChannelParams) -> Option<Rate> {
    (classify(params).kind == RegimeKind::LowInterferenceExact).then(|| tin_sum_rate(params))
}

pub fn all_bounds(params: &ChannelParams) -> Result<BoundSet> {
    params.validate()?;
    let regime = classify(params);
    let tin_lower = tin_sum_rate(params);
    let symmetric = params.is_symmetric();
    let in_regime = regime.kind == RegimeKind::LowInterferenceExact;

    let (ortho_lower, onebit, kramer) = if symmetric {
        (
            Some(ortho_sum_rate(params)?),
            Some(onebit_upper(params)?),
            Some(kramer_upper(params)?),
        )
    } else {
        (None, None, None)
    };

    let tangent = if symmetric && !in_regime {
        Some(tangent_bound(params)?)
    } else {
        None
    };

    let genie_upper = match (construct_genie(params), &tangent) {
        (Some(g), _) => Some(genie_aided_sum_rate(params, &g)?),
        (None, Some(t)) => Some(genie_aided_sum_rate(params, &t.genie(params)?)?),
        (None, None) => None,
    };

    Ok(BoundSet {
        tin_lower,
        ortho_lower,
        onebit_upper: onebit,
        kramer_upper: kramer,
        tangent_upper: tangent.map(|t| t.rate),
        exact_capacity: in_regime.then_some(tin_lower),
        genie_upper,
        regime,
    })
}
