//! Low-interference regime: the threshold conditions and the explicit
//! useful-and-smart genie that certifies them.
//!
//! The genie hands receiver 1 the side information `S1 = h21 (X1 + eta1 W1)`
//! and receiver 2 `S2 = h12 (X2 + eta2 W2)`, where `W_i` is a unit-variance
//! Gaussian with correlation `rho_i` to the receiver noise `Z_i`. On the
//! symmetric channel this is `S = h X + h eta W`.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};

/// Slack used when checking the usefulness inequalities.
pub const USEFUL_SLACK: f64 = 1e-12;

pub const SYMMETRIC_THRESHOLD: f64 = 0.5;
pub const ASYMMETRIC_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenieSpec {
    pub eta1: f64,
    pub rho1: f64,
    pub eta2: f64,
    pub rho2: f64,
}

impl GenieSpec {
    pub fn new(eta1: f64, rho1: f64, eta2: f64, rho2: f64) -> Result<Self> {
        for (name, eta) in [("eta1", eta1), ("eta2", eta2)] {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {eta}"),
                });
            }
        }
        for (name, rho) in [("rho1", rho1), ("rho2", rho2)] {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must lie in [0, 1], got {rho}"),
                });
            }
        }
        Ok(Self {
            eta1,
            rho1,
            eta2,
            rho2,
        })
    }

    /// The same `(eta, rho)` at both receivers.
    pub fn symmetric(eta: f64, rho: f64) -> Result<Self> {
        Self::new(eta, rho, eta, rho)
    }

    /// `|h21 eta1| - sqrt(1 - rho2^2)` and `|h12 eta2| - sqrt(1 - rho1^2)`.
    /// Both must be non-positive for the genie to be useful.
    pub fn useful_residuals(&self, params: &ChannelParams) -> (f64, f64) {
        (
            (params.h21 * self.eta1).abs() - (1.0 - self.rho2 * self.rho2).sqrt(),
            (params.h12 * self.eta2).abs() - (1.0 - self.rho1 * self.rho1).sqrt(),
        )
    }

    pub fn is_useful(&self, params: &ChannelParams) -> bool {
        let (r1, r2) = self.useful_residuals(params);
        r1 <= USEFUL_SLACK && r2 <= USEFUL_SLACK
    }

    /// Relative residuals of `eta1 rho1 = 1 + h12^2 P2` and
    /// `eta2 rho2 = 1 + h21^2 P1`.
    pub fn smart_residuals(&self, params: &ChannelParams) -> (f64, f64) {
        let t1 = 1.0 + params.h12 * params.h12 * params.p2;
        let t2 = 1.0 + params.h21 * params.h21 * params.p1;
        (
            (self.eta1 * self.rho1 - t1) / t1,
            (self.eta2 * self.rho2 - t2) / t2,
        )
    }

    pub fn is_smart(&self, params: &ChannelParams, rel_tol: f64) -> bool {
        let (r1, r2) = self.smart_residuals(params);
        r1.abs() <= rel_tol && r2.abs() <= rel_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    LowInterferenceExact,
    AboveThreshold,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::LowInterferenceExact => "low_interference_exact",
            RegimeKind::AboveThreshold => "above_threshold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub kind: RegimeKind,
    pub condition_value: f64,
    pub threshold: f64,
}

/// `|h + h^3 p|`, computed as `|h| (1 + h^2 p)`.
pub fn symmetric_condition_value(p: f64, h: f64) -> f64 {
    h.abs() * (1.0 + h * h * p)
}

pub fn symmetric_condition(p: f64, h: f64) -> bool {
    symmetric_condition_value(p, h) <= SYMMETRIC_THRESHOLD
}

/// The two cross terms `|h12 (1 + h21^2 P1)|` and `|h21 (1 + h12^2 P2)|`.
pub fn asym_terms(params: &ChannelParams) -> (f64, f64) {
    (
        params.h12.abs() * (1.0 + params.h21 * params.h21 * params.p1),
        params.h21.abs() * (1.0 + params.h12 * params.h12 * params.p2),
    )
}

pub fn asym_condition_value(params: &ChannelParams) -> f64 {
    let (a, b) = asym_terms(params);
    a + b
}

pub fn asym_condition(params: &ChannelParams) -> bool {
    asym_condition_value(params) <= ASYMMETRIC_THRESHOLD
}

pub fn classify(params: &ChannelParams) -> RegimeLabel {
    let (condition_value, threshold) = if params.is_symmetric() {
        (
            symmetric_condition_value(params.p1, params.h12),
            SYMMETRIC_THRESHOLD,
        )
    } else {
        (asym_condition_value(params), ASYMMETRIC_THRESHOLD)
    };
    let kind = if condition_value <= threshold {
        RegimeKind::LowInterferenceExact
    } else {
        RegimeKind::AboveThreshold
    };
    RegimeLabel {
        kind,
        condition_value,
        threshold,
    }
}

pub fn is_low_interference(params: &ChannelParams) -> bool {
    classify(params).kind == RegimeKind::LowInterferenceExact
}

/// Correlations certifying the asymmetric condition, with `rho1 = sin(phi)`,
/// `rho2 = cos(phi)` and `cos^2(phi)` at the midpoint of its feasible interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoChoice {
    pub rho1: f64,
    pub rho2: f64,
    pub phi: f64,
    pub cos2_lo: f64,
    pub cos2_hi: f64,
}

pub fn find_rhos(params: &ChannelParams) -> Option<RhoChoice> {
    let (a, b) = asym_terms(params);
    let (lo, hi) = (a, 1.0 - b);
    if !(a + b <= ASYMMETRIC_THRESHOLD) {
        return None;
    }
    // Written as 0.5 + (a - b)/2 so that a == b lands exactly on 1/2.
    let c = (0.5 + 0.5 * (a - b)).clamp(lo.min(hi), hi.max(lo));
    let rho2 = c.sqrt();
    let rho1 = (1.0 - c).sqrt();
    Some(RhoChoice {
        rho1,
        rho2,
        phi: rho1.atan2(rho2),
        cos2_lo: lo,
        cos2_hi: hi,
    })
}

/// Useful-and-smart genie for a channel in the low-interference regime.
///
/// Returns `None` above threshold, and also when either cross-gain is zero:
/// the side information then carries no signal and the regime is exact
/// without a genie.
pub fn construct_genie(params: &ChannelParams) -> Option<GenieSpec> {
    if params.h12 == 0.0 || params.h21 == 0.0 || !is_low_interference(params) {
        return None;
    }
    let rhos = find_rhos(params)?;
    let eta1 = (1.0 + params.h12 * params.h12 * params.p2) / rhos.rho1;
    let eta2 = (1.0 + params.h21 * params.h21 * params.p1) / rhos.rho2;
    Some(GenieSpec {
        eta1,
        rho1: rhos.rho1,
        eta2,
        rho2: rhos.rho2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_symmetric;
    use approx::assert_relative_eq;

    fn asym(p1: f64, p2: f64, h12: f64, h21: f64) -> ChannelParams {
        ChannelParams::new(p1, p2, h12, h21).unwrap()
    }

    #[test]
    fn symmetric_condition_examples() {
        assert!(symmetric_condition(10.0, 0.28));
        assert_relative_eq!(
            symmetric_condition_value(10.0, 0.28),
            0.49952,
            epsilon = 1e-12
        );
        assert!(!symmetric_condition(10.0, 0.29));
        assert_relative_eq!(
            symmetric_condition_value(10.0, 0.29),
            0.53389,
            epsilon = 1e-12
        );
        assert!(symmetric_condition(1e6, 0.0));
    }

    #[test]
    fn asym_condition_examples() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        assert_eq!(asym_condition(&c), symmetric_condition(10.0, 0.25));
        let c = asym(10.0, 10.0, 0.2, 0.1);
        assert!(asym_condition(&c));
        assert_relative_eq!(asym_condition_value(&c), 0.36, epsilon = 1e-12);
        let c = asym(10.0, 10.0, 0.5, 0.5);
        assert!(!asym_condition(&c));
        assert_relative_eq!(asym_condition_value(&c), 3.5, epsilon = 1e-12);
    }

    #[test]
    fn find_rhos_midpoint() {
        let r = find_rhos(&asym(10.0, 10.0, 0.2, 0.1)).unwrap();
        assert_relative_eq!(r.cos2_lo, 0.22, epsilon = 1e-12);
        assert_relative_eq!(r.cos2_hi, 0.86, epsilon = 1e-12);
        assert_relative_eq!(r.rho2, 0.54f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(r.rho1, 0.46f64.sqrt(), epsilon = 1e-12);
        // Both certificate inequalities.
        assert!(0.22 <= r.rho2 * (1.0 - r.rho1 * r.rho1).sqrt() + 1e-12);
        assert!(0.14 <= r.rho1 * (1.0 - r.rho2 * r.rho2).sqrt() + 1e-12);
        assert_relative_eq!(r.phi.cos(), r.rho2, epsilon = 1e-12);
    }

    #[test]
    fn find_rhos_boundary_point() {
        // p chosen so that |h + h^3 p| = 0.5 exactly for h = 0.25.
        let p = (0.5 / 0.25 - 1.0) / 0.0625;
        let c = make_symmetric(p, 0.25).unwrap();
        assert_eq!(symmetric_condition_value(p, 0.25), 0.5);
        let r = find_rhos(&c).unwrap();
        assert_eq!(r.cos2_lo, 0.5);
        assert_eq!(r.cos2_hi, 0.5);
        assert_eq!(r.rho1, 0.5f64.sqrt());
        assert_eq!(r.rho2, 0.5f64.sqrt());
    }

    #[test]
    fn find_rhos_zero_interference() {
        let r = find_rhos(&make_symmetric(10.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(r.rho2 * r.rho2, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn find_rhos_absent_above_threshold() {
        assert!(find_rhos(&asym(10.0, 10.0, 0.5, 0.5)).is_none());
    }

    #[test]
    fn construct_genie_symmetric_example() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let g = construct_genie(&c).unwrap();
        assert_eq!(g.eta1, g.eta2);
        assert_eq!(g.rho1, g.rho2);
        assert_relative_eq!(g.rho1, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(g.eta1, 1.625 * 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!((0.25 * g.eta1).abs(), 0.574524259714, epsilon = 1e-9);
        assert!(g.is_useful(&c));
        assert!(g.is_smart(&c, 1e-12));
    }

    #[test]
    fn construct_genie_absent_cases() {
        assert!(construct_genie(&make_symmetric(10.0, 0.29).unwrap()).is_none());
        let zero = make_symmetric(10.0, 0.0).unwrap();
        assert!(construct_genie(&zero).is_none());
        assert_eq!(classify(&zero).kind, RegimeKind::LowInterferenceExact);
        let one_sided = asym(10.0, 10.0, 0.5, 0.0);
        assert!(construct_genie(&one_sided).is_none());
        assert!(is_low_interference(&one_sided));
    }

    #[test]
    fn construct_genie_asymmetric_certifies() {
        let c = asym(10.0, 10.0, 0.2, 0.1);
        let g = construct_genie(&c).unwrap();
        assert!(g.is_useful(&c));
        assert!(g.is_smart(&c, 1e-12));
    }

    #[test]
    fn classify_examples() {
        let l = classify(&make_symmetric(10.0, 0.25).unwrap());
        assert_eq!(l.kind, RegimeKind::LowInterferenceExact);
        assert_relative_eq!(l.condition_value, 0.40625, epsilon = 1e-15);
        assert_eq!(l.threshold, 0.5);
        let l = classify(&make_symmetric(10.0, 1.0).unwrap());
        assert_eq!(l.kind, RegimeKind::AboveThreshold);
        assert_eq!(l.condition_value, 11.0);
        let l = classify(&asym(10.0, 10.0, 0.2, 0.1));
        assert_eq!(l.kind, RegimeKind::LowInterferenceExact);
        assert_relative_eq!(l.condition_value, 0.36, epsilon = 1e-12);
        assert_eq!(l.threshold, 1.0);
    }

    #[test]
    fn genie_spec_validation() {
        assert!(GenieSpec::new(0.0, 0.5, 1.0, 0.5).is_err());
        assert!(GenieSpec::new(1.0, 1.5, 1.0, 0.5).is_err());
        assert!(GenieSpec::new(1.0, 0.5, 1.0, -0.1).is_err());
        assert!(GenieSpec::new(1.0, 1.0, 1.0, 0.0).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn symmetric_and_asymmetric_conditions_agree(p in 0.01f64..1e3, h in -2.0f64..2.0) {
            let c = make_symmetric(p, h).unwrap();
            proptest::prop_assert_eq!(symmetric_condition(p, h), asym_condition(&c));
        }

        #[test]
        fn constructed_genie_is_certified(
            p1 in 0.1f64..100.0, p2 in 0.1f64..100.0,
            h12 in -1.0f64..1.0, h21 in -1.0f64..1.0,
        ) {
            let c = asym(p1, p2, h12, h21);
            match construct_genie(&c) {
                Some(g) => {
                    proptest::prop_assert!(g.is_useful(&c));
                    proptest::prop_assert!(g.is_smart(&c, 1e-12));
                }
                None => proptest::prop_assert!(!asym_condition(&c) || h12 == 0.0 || h21 == 0.0),
            }
        }
    }
}
