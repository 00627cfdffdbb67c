//! Polar picture of the symmetric genie.
//!
//! Receiver 1 sees two noisy copies of `X1`: the output `Y1` with noise
//! `h X2 + Z1` and the rescaled side information `S1/h` with noise `eta W1`.
//! Drawing each noise as a vector, `Q_Y = (sqrt(1 + h²P), 0)` and
//! `Q_S = (eta, theta)` in polar coordinates with
//! `cos(theta) = rho / sqrt(1 + h²P)`. The per-user rate is
//! `½ log2(1 + P/σ²)` where `σ` is the distance from the origin to the line
//! through `Q_Y` and `Q_S`.
//!
//! Useful genies fill the region `h²eta² + (1 + h²P) cos²theta <= 1`; smart
//! genies sit on the vertical line through `Q_Y`. When the two miss each
//! other, the best genie of this family is where the line through `Q_Y`
//! touches the region boundary.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::channel::{ChannelParams, Rate};
use crate::error::{Error, Result};
use crate::regime::{symmetric_condition, GenieSpec};

/// Coarse scan resolution for the tangent search.
pub const TANGENT_GRID_POINTS: usize = 4096;
/// Golden-section refinement stops once the bracket is narrower than this.
pub const TANGENT_THETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarGenie {
    pub eta: f64,
    pub theta: f64,
}

impl PolarGenie {
    pub fn cartesian(&self) -> (f64, f64) {
        (self.eta * self.theta.cos(), self.eta * self.theta.sin())
    }

    /// `h²eta² + (1 + h²P) cos²theta <= 1`.
    pub fn is_useful(&self, params: &ChannelParams) -> Result<bool> {
        let (p, h) = params.symmetric_parts()?;
        let c = self.theta.cos();
        Ok(h * h * self.eta * self.eta + (1.0 + h * h * p) * c * c <= 1.0 + 1e-12)
    }
}

/// `sqrt(1 + h²P)`, the length of the output noise vector.
fn output_noise_norm(p: f64, h: f64) -> f64 {
    (1.0 + h * h * p).sqrt()
}

/// Polar form of the receiver-1 genie `(eta1, rho1)` on a symmetric channel.
pub fn to_polar(genie: &GenieSpec, params: &ChannelParams) -> Result<PolarGenie> {
    let (p, h) = params.symmetric_parts()?;
    let a = output_noise_norm(p, h);
    let cos_theta = genie.rho1 / a;
    if cos_theta > 1.0 {
        return Err(Error::Precondition(format!(
            "rho {} exceeds sqrt(1 + h^2 P) = {a}",
            genie.rho1
        )));
    }
    Ok(PolarGenie {
        eta: genie.eta1,
        theta: cos_theta.acos(),
    })
}

/// Inverse of [`to_polar`]; the result is used at both receivers.
pub fn from_polar(polar: &PolarGenie, params: &ChannelParams) -> Result<GenieSpec> {
    let (p, h) = params.symmetric_parts()?;
    let rho = output_noise_norm(p, h) * polar.theta.cos();
    // Rounding at theta = pi/2 can leave a tiny negative cosine.
    let rho = if rho < 0.0 && rho > -1e-15 { 0.0 } else { rho };
    GenieSpec::symmetric(polar.eta, rho)
}

/// Distance from the origin to the line through `Q_Y` and `q_s`.
pub fn sigma_line(params: &ChannelParams, q_s: &PolarGenie) -> Result<f64> {
    let (p, h) = params.symmetric_parts()?;
    let a = output_noise_norm(p, h);
    let (x, y) = q_s.cartesian();
    let len = (x - a).hypot(y);
    if len <= 1e-14 * a.max(1.0) {
        return Err(Error::DegenerateLine);
    }
    Ok(a * y.abs() / len)
}

/// Per-user rate `½ log2(1 + P/σ²)`.
pub fn rate_from_sigma(p: f64, sigma: f64) -> Rate {
    Rate::from_bits(0.5 * (1.0 + p / (sigma * sigma)).log2())
}

/// Feasible angular range `[arccos(1/sqrt(1 + h²P)), pi/2]` of the boundary.
pub fn boundary_theta_range(params: &ChannelParams) -> Result<(f64, f64)> {
    let (p, h) = params.symmetric_parts()?;
    Ok(((1.0 / output_noise_norm(p, h)).acos(), FRAC_PI_2))
}

/// Radius of the useful-region boundary at angle `theta`.
pub fn useful_boundary(params: &ChannelParams, theta: f64) -> Result<f64> {
    let (p, h) = params.symmetric_parts()?;
    if h == 0.0 {
        return Err(Error::Unsupported(
            "the useful region is unbounded when h = 0".into(),
        ));
    }
    let c = theta.cos();
    let slack = 1.0 - (1.0 + h * h * p) * c * c;
    if slack < -1e-14 {
        return Err(Error::NoBoundary { theta });
    }
    Ok(slack.max(0.0).sqrt() / h.abs())
}

fn boundary_sigma(params: &ChannelParams, theta: f64) -> f64 {
    match useful_boundary(params, theta) {
        Ok(eta) if eta > 0.0 => sigma_line(params, &PolarGenie { eta, theta }).unwrap_or(0.0),
        _ => 0.0,
    }
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
pub(crate) fn golden_section_max(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        // The bracket stops shrinking once it is a few ulps wide.
        if x1 >= x2 && hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    let (x, fx) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    (x, fx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentBound {
    /// `log2(1 + P/σ²)`.
    pub rate: Rate,
    /// `log2(1 + P/(1 + h²P) (1 + 1/μ²))` with μ recovered from σ.
    pub slope_form_rate: Rate,
    pub sigma: f64,
    /// Magnitude of the tangent slope, from `σ² = (1 + h²P) μ²/(μ² + 1)`.
    pub mu: f64,
    /// Slope of the segment from `Q_Y` to the tangency point.
    pub geometric_slope: f64,
    pub tangency: PolarGenie,
    pub point: (f64, f64),
    /// Grid local maxima within 1e-9 of the best; more than one means the
    /// tangent is not unique.
    pub near_optimal_maxima: usize,
}

impl TangentBound {
    pub fn genie(&self, params: &ChannelParams) -> Result<GenieSpec> {
        from_polar(&self.tangency, params)
    }
}

/// Upper bound from the best boundary genie when the low-interference
/// condition fails on a symmetric channel.
pub fn tangent_bound(params: &ChannelParams) -> Result<TangentBound> {
    let (p, h) = params.symmetric_parts()?;
    if h == 0.0 || symmetric_condition(p, h) {
        return Err(Error::Precondition(format!(
            "tangent bound needs |h + h^3 P| > 0.5 (P = {p}, h = {h})"
        )));
    }
    let (lo, hi) = boundary_theta_range(params)?;
    let n = TANGENT_GRID_POINTS;
    let step = (hi - lo) / (n - 1) as f64;
    let thetas: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect();
    let sigmas: Vec<f64> = thetas.iter().map(|&t| boundary_sigma(params, t)).collect();

    // First maximum wins ties, i.e. the smallest theta.
    let best = (0..n).fold(0, |b, i| if sigmas[i] > sigmas[b] { i } else { b });
    let near_optimal_maxima = (0..n)
        .filter(|&i| {
            let left = i == 0 || sigmas[i] >= sigmas[i - 1];
            let right = i == n - 1 || sigmas[i] >= sigmas[i + 1];
            left && right && sigmas[i] >= sigmas[best] - 1e-9
        })
        .count();

    let a = thetas[best.saturating_sub(1)];
    let b = thetas[(best + 1).min(n - 1)];
    let (theta_ref, sigma_ref) =
        golden_section_max(|t| boundary_sigma(params, t), a, b, TANGENT_THETA_TOL);
    let (theta, sigma) = if sigma_ref >= sigmas[best] {
        (theta_ref, sigma_ref)
    } else {
        (thetas[best], sigmas[best])
    };

    let eta = useful_boundary(params, theta)?;
    let tangency = PolarGenie { eta, theta };
    let point = tangency.cartesian();
    let a2 = 1.0 + h * h * p;
    let mu2 = sigma * sigma / (a2 - sigma * sigma);
    let rate = Rate::from_bits((1.0 + p / (sigma * sigma)).log2());
    let slope_form_rate = Rate::from_bits((1.0 + p / a2 * (1.0 + 1.0 / mu2)).log2());
    Ok(TangentBound {
        rate,
        slope_form_rate,
        sigma,
        mu: mu2.sqrt(),
        geometric_slope: point.1 / (point.0 - a2.sqrt()),
        tangency,
        point,
        near_optimal_maxima,
    })
}

/// Largest signed distance, over `samples` boundary points, from the tangent
/// line to the far side of the origin, together with the smallest absolute
/// distance. A genuine tangent gives `(<= 0, ~0)`.
pub fn tangency_gap(
    params: &ChannelParams,
    tangent: &TangentBound,
    samples: usize,
) -> Result<(f64, f64)> {
    let (p, h) = params.symmetric_parts()?;
    let a = output_noise_norm(p, h);
    let (tx, ty) = tangent.point;
    let len = (tx - a).hypot(ty);
    // Unit normal pointing away from the origin.
    let (nx, ny) = (ty / len, (a - tx) / len);
    let (lo, hi) = boundary_theta_range(params)?;
    let mut worst_outside = f64::NEG_INFINITY;
    let mut closest = f64::INFINITY;
    for i in 0..samples {
        let theta = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let eta = useful_boundary(params, theta)?;
        let (x, y) = (eta * theta.cos(), eta * theta.sin());
        let d = nx * (x - a) + ny * y;
        worst_outside = worst_outside.max(d);
        closest = closest.min(d.abs());
    }
    Ok((worst_outside, closest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{onebit_upper, tin_sum_rate};
    use crate::channel::make_symmetric;
    use crate::regime::construct_genie;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polar_examples() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let g = GenieSpec::symmetric(3.0, 0.0).unwrap();
        assert_abs_diff_eq!(to_polar(&g, &c).unwrap().theta, FRAC_PI_2, epsilon = 1e-15);

        let g = construct_genie(&c).unwrap();
        let q = to_polar(&g, &c).unwrap();
        assert_abs_diff_eq!(q.theta.cos(), 0.5547001962252291, epsilon = 1e-12);
        // Smart genies sit on the vertical line through Q_Y.
        assert_abs_diff_eq!(q.cartesian().0, 1.625f64.sqrt(), epsilon = 1e-12);

        let back = from_polar(&q, &c).unwrap();
        assert_abs_diff_eq!(back.rho1, g.rho1, epsilon = 1e-12);
        assert_abs_diff_eq!(back.eta1, g.eta1, epsilon = 1e-12);
        assert!(to_polar(&g, &ChannelParams::new(10.0, 10.0, 0.2, 0.1).unwrap()).is_err());
    }

    #[test]
    fn sigma_on_vertical_line_is_output_norm() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let a = 1.625f64.sqrt();
        let q = PolarGenie {
            eta: a / 0.3f64.cos(),
            theta: 0.3,
        };
        let s = sigma_line(&c, &q).unwrap();
        assert_abs_diff_eq!(s, a, epsilon = 1e-12);
        assert_abs_diff_eq!(
            2.0 * rate_from_sigma(10.0, s).bits(),
            tin_sum_rate(&c).bits(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn sigma_at_axis_point_gives_onebit() {
        for h in [0.3, 0.5, 1.0] {
            let c = make_symmetric(10.0, h).unwrap();
            let s = sigma_line(
                &c,
                &PolarGenie {
                    eta: 1.0 / h,
                    theta: FRAC_PI_2,
                },
            )
            .unwrap();
            let a2 = 1.0 + h * h * 10.0;
            assert_abs_diff_eq!(s * s, a2 / (h * h * a2 + 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(
                2.0 * rate_from_sigma(10.0, s).bits(),
                onebit_upper(&c).unwrap().bits(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn sigma_degenerate_line() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let q = PolarGenie {
            eta: 1.625f64.sqrt(),
            theta: 0.0,
        };
        assert_eq!(sigma_line(&c, &q), Err(Error::DegenerateLine));
    }

    #[test]
    fn boundary_examples() {
        let c = make_symmetric(10.0, 0.5).unwrap();
        assert_abs_diff_eq!(
            useful_boundary(&c, FRAC_PI_2).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let (lo, _) = boundary_theta_range(&c).unwrap();
        assert_abs_diff_eq!(useful_boundary(&c, lo).unwrap(), 0.0, epsilon = 1e-6);
        let expect = ((1.0 - 3.5 * 1.2f64.cos().powi(2)) / 0.25).sqrt();
        assert_abs_diff_eq!(useful_boundary(&c, 1.2).unwrap(), expect, epsilon = 1e-14);
        assert!(matches!(
            useful_boundary(&c, 0.1),
            Err(Error::NoBoundary { .. })
        ));
        assert!(matches!(
            useful_boundary(&make_symmetric(10.0, 0.0).unwrap(), 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, fx) = golden_section_max(|t| -(t - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn tangent_bound_between_tin_and_onebit() {
        let c = make_symmetric(10.0, 0.5).unwrap();
        let t = tangent_bound(&c).unwrap();
        assert!(t.rate.bits() > tin_sum_rate(&c).bits());
        assert!(t.rate.bits() < onebit_upper(&c).unwrap().bits());
        assert_abs_diff_eq!(t.rate.bits(), t.slope_form_rate.bits(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            t.mu * t.mu,
            t.geometric_slope * t.geometric_slope,
            epsilon = 1e-6
        );
        assert_eq!(t.near_optimal_maxima, 1);
        let (outside, closest) = tangency_gap(&c, &t, 20001).unwrap();
        assert!(outside <= 1e-8, "{outside}");
        assert!(closest <= 1e-8, "{closest}");
    }

    #[test]
    fn tangent_bound_preconditions() {
        assert!(matches!(
            tangent_bound(&make_symmetric(10.0, 0.25).unwrap()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            tangent_bound(&make_symmetric(10.0, 0.0).unwrap()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            tangent_bound(&ChannelParams::new(10.0, 10.0, 0.5, 0.4).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn tangent_bound_large_gain_stays_above_tin() {
        let c = make_symmetric(10.0, 3.0).unwrap();
        assert!(tangent_bound(&c).unwrap().rate.bits() >= tin_sum_rate(&c).bits());
    }
}
