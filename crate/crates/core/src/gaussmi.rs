//! Mutual information between jointly Gaussian variables.
//!
//! Two independent routes are provided:
//!
//! * [`mi_det`] works on an explicit joint covariance and evaluates
//!   `½ log2(det Σ_obs / det Σ_obs|target)` through Cholesky log-determinants
//!   of the observation block and its Schur complement.
//! * [`mi_mmse`] treats the observations as `E_i = X + N_i` and finds the best
//!   unbiased linear combination `bᵀE` (`Σ b_i = 1`) by solving the KKT system
//!   of the constrained quadratic. The residual variance `σ²` gives
//!   `½ log2(1 + P/σ²)`.
//!
//! For Gaussian observations the linear MMSE estimate is a sufficient
//! statistic, so the two routes must agree.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::channel::{ChannelParams, Rate};
use crate::error::{Error, Result};
use crate::regime::GenieSpec;

/// Observation blocks with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;
const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

pub mod vars {
    pub const X1: &str = "X1";
    pub const X2: &str = "X2";
    pub const Z1: &str = "Z1";
    pub const Z2: &str = "Z2";
    pub const W1: &str = "W1";
    pub const W2: &str = "W2";
    pub const Y1: &str = "Y1";
    pub const Y2: &str = "Y2";
    pub const S1: &str = "S1";
    pub const S2: &str = "S2";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Receiver {
    One,
    Two,
}

impl Receiver {
    /// `(own input, output, side information)` names at this receiver.
    pub fn names(self) -> (&'static str, &'static str, &'static str) {
        match self {
            Receiver::One => (vars::X1, vars::Y1, vars::S1),
            Receiver::Two => (vars::X2, vars::Y2, vars::S2),
        }
    }
}

/// Zero-mean jointly Gaussian vector with named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVector {
    names: Vec<String>,
    cov: DMatrix<f64>,
}

impl GaussianVector {
    pub fn new(names: Vec<String>, cov: DMatrix<f64>) -> Result<Self> {
        let n = names.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::InvalidParameter {
                name: "cov",
                reason: format!(
                    "expected {n}x{n} matrix, got {}x{}",
                    cov.nrows(),
                    cov.ncols()
                ),
            });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidParameter {
                    name: "names",
                    reason: format!("duplicate name `{a}`"),
                });
            }
        }
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "cov",
                reason: "non-finite entry".into(),
            });
        }
        let scale = cov.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidParameter {
                        name: "cov",
                        reason: format!("not symmetric at ({i}, {j})"),
                    });
                }
            }
        }
        if n > 0 {
            let min_eig = cov.clone().symmetric_eigenvalues().min();
            if min_eig < -PSD_TOL * scale {
                return Err(Error::Internal(format!(
                    "covariance is indefinite (min eigenvalue {min_eig:e})"
                )));
            }
        }
        Ok(Self { names, cov })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn covariance(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.cov[(self.index(a)?, self.index(b)?)])
    }

    pub fn variance(&self, a: &str) -> Result<f64> {
        self.covariance(a, a)
    }

    /// Covariance block for the given coordinate lists.
    pub fn block(&self, rows: &[&str], cols: &[&str]) -> Result<DMatrix<f64>> {
        let ri = rows
            .iter()
            .map(|r| self.index(r))
            .collect::<Result<Vec<_>>>()?;
        let ci = cols
            .iter()
            .map(|c| self.index(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_fn(ri.len(), ci.len(), |i, j| {
            self.cov[(ri[i], ci[j])]
        }))
    }

    /// The vector with coordinate `name` multiplied by `factor`.
    pub fn scaled(&self, name: &str, factor: f64) -> Result<Self> {
        let k = self.index(name)?;
        let mut cov = self.cov.clone();
        cov.row_mut(k).scale_mut(factor);
        cov.column_mut(k).scale_mut(factor);
        Ok(Self {
            names: self.names.clone(),
            cov,
        })
    }
}

/// Joint law of `(X1, X2, Z1, Z2, Y1, Y2)` and, with a genie, also
/// `(W1, W2, S1, S2)` where `S1 = h21 (X1 + eta1 W1)`, `S2 = h12 (X2 + eta2 W2)`
/// and `E[W_i Z_i] = rho_i`.
pub fn assemble_joint(params: &ChannelParams, genie: Option<&GenieSpec>) -> Result<GaussianVector> {
    params.validate()?;
    let ChannelParams { p1, p2, h12, h21 } = *params;
    let (rho1, rho2) = genie.map_or((0.0, 0.0), |g| (g.rho1, g.rho2));
    if let Some(g) = genie {
        GenieSpec::new(g.eta1, g.rho1, g.eta2, g.rho2)?;
    }

    // Base coordinates: X1, X2, Z1, Z2, W1, W2.
    let mut base = DMatrix::<f64>::zeros(6, 6);
    base[(0, 0)] = p1;
    base[(1, 1)] = p2;
    for k in 2..6 {
        base[(k, k)] = 1.0;
    }
    base[(2, 4)] = rho1;
    base[(4, 2)] = rho1;
    base[(3, 5)] = rho2;
    base[(5, 3)] = rho2;

    let mut rows: Vec<(&str, [f64; 6])> = vec![
        (vars::X1, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        (vars::X2, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
        (vars::Z1, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
        (vars::Z2, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
    ];
    if genie.is_some() {
        rows.push((vars::W1, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0]));
        rows.push((vars::W2, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
    }
    rows.push((vars::Y1, [1.0, h12, 1.0, 0.0, 0.0, 0.0]));
    rows.push((vars::Y2, [h21, 1.0, 0.0, 1.0, 0.0, 0.0]));
    if let Some(g) = genie {
        rows.push((vars::S1, [h21, 0.0, 0.0, 0.0, h21 * g.eta1, 0.0]));
        rows.push((vars::S2, [0.0, h12, 0.0, 0.0, 0.0, h12 * g.eta2]));
    }

    let map = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i].1[j]);
    let cov = &map * &base * map.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianVector::new(rows.iter().map(|(n, _)| n.to_string()).collect(), cov)
}

fn log_det_spd(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::DegenerateObservation(format!("{what} is not positive definite")))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

fn check_conditioning(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let eig = m.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::DegenerateObservation(format!(
            "{what} is singular or ill-conditioned (eigenvalues {lo:e} .. {hi:e})"
        )));
    }
    Ok(())
}

/// `I(target; observed)` in bits via Gaussian entropy determinants.
pub fn mi_det(joint: &GaussianVector, target: &str, observed: &[&str]) -> Result<Rate> {
    if observed.is_empty() {
        return Ok(Rate::ZERO);
    }
    let obs = joint.block(observed, observed)?;
    check_conditioning(&obs, "observation covariance")?;
    let var_t = joint.variance(target)?;
    if !(var_t > 0.0) {
        return Err(Error::DegenerateObservation(format!(
            "target `{target}` has zero variance"
        )));
    }
    let cross = joint.block(observed, &[target])?;
    let cond = &obs - &cross * cross.transpose() / var_t;
    let cond = (&cond + cond.transpose()) * 0.5;
    let ld_obs = log_det_spd(&obs, "observation covariance")?;
    let ld_cond = log_det_spd(&cond, "conditional observation covariance")?;
    Ok(Rate::from_nats(0.5 * (ld_obs - ld_cond)))
}

/// Observations `E_i = X + N_i` of a common Gaussian signal.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyObservationSet {
    signal_variance: f64,
    noise_cov: DMatrix<f64>,
}

impl NoisyObservationSet {
    pub fn new(signal_variance: f64, noise_cov: DMatrix<f64>) -> Result<Self> {
        if !(signal_variance.is_finite() && signal_variance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "signal_variance",
                reason: format!("must be positive, got {signal_variance}"),
            });
        }
        let m = noise_cov.nrows();
        if m == 0 || noise_cov.ncols() != m {
            return Err(Error::InvalidParameter {
                name: "noise_cov",
                reason: "must be a non-empty square matrix".into(),
            });
        }
        let names = (0..m).map(|i| format!("N{i}")).collect();
        // Reuse the symmetry/PSD validation.
        GaussianVector::new(names, noise_cov.clone()).map_err(|e| match e {
            Error::Internal(msg) => Error::InvalidParameter {
                name: "noise_cov",
                reason: msg,
            },
            other => other,
        })?;
        Ok(Self {
            signal_variance,
            noise_cov,
        })
    }

    pub fn signal_variance(&self) -> f64 {
        self.signal_variance
    }

    pub fn noise_cov(&self) -> &DMatrix<f64> {
        &self.noise_cov
    }

    pub fn len(&self) -> usize {
        self.noise_cov.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rewrites `observed` as unbiased observations of `target` by dividing
    /// each by its regression coefficient on the target.
    pub fn from_joint(joint: &GaussianVector, target: &str, observed: &[&str]) -> Result<Self> {
        let p = joint.variance(target)?;
        let cross = joint.block(observed, &[target])?;
        let gains: Vec<f64> = cross.iter().map(|c| c / p).collect();
        if let Some(k) = gains.iter().position(|g| *g == 0.0) {
            return Err(Error::DegenerateObservation(format!(
                "`{}` is uncorrelated with `{target}`",
                observed[k]
            )));
        }
        let obs = joint.block(observed, observed)?;
        let m = observed.len();
        let noise = DMatrix::from_fn(m, m, |i, j| {
            (obs[(i, j)] - gains[i] * gains[j] * p) / (gains[i] * gains[j])
        });
        let noise = (&noise + noise.transpose()) * 0.5;
        Self::new(p, noise)
    }

    /// Observations at one receiver built straight from the channel model:
    /// `E1 = Y` with noise `h·X_other + Z`, and with a genie
    /// `E2 = S/h` with noise `eta W`.
    pub fn for_receiver(
        params: &ChannelParams,
        genie: Option<&GenieSpec>,
        receiver: Receiver,
    ) -> Result<Self> {
        let (p_own, p_other, h_in, h_out) = match receiver {
            Receiver::One => (params.p1, params.p2, params.h12, params.h21),
            Receiver::Two => (params.p2, params.p1, params.h21, params.h12),
        };
        let y_noise = 1.0 + h_in * h_in * p_other;
        let noise = match genie {
            None => DMatrix::from_element(1, 1, y_noise),
            Some(g) => {
                if h_out == 0.0 {
                    return Err(Error::DegenerateObservation(
                        "side information vanishes for a zero cross-gain".into(),
                    ));
                }
                let (eta, rho) = match receiver {
                    Receiver::One => (g.eta1, g.rho1),
                    Receiver::Two => (g.eta2, g.rho2),
                };
                DMatrix::from_row_slice(2, 2, &[y_noise, eta * rho, eta * rho, eta * eta])
            }
        };
        Self::new(p_own, noise)
    }
}

/// Residual variance `σ²` of the best unbiased combination and its weights.
pub fn mmse_combination(obs: &NoisyObservationSet) -> Result<(f64, DVector<f64>)> {
    let m = obs.len();
    let n = &obs.noise_cov;
    let mut kkt = DMatrix::<f64>::zeros(m + 1, m + 1);
    kkt.view_mut((0, 0), (m, m)).copy_from(n);
    for i in 0..m {
        kkt[(i, m)] = 1.0;
        kkt[(m, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(m + 1);
    rhs[m] = 1.0;
    let sol = kkt
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateObservation("singular constraint system".into()))?;
    let b = sol.rows(0, m).into_owned();
    let sigma2 = (b.transpose() * n * &b)[(0, 0)];
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::DegenerateObservation(format!(
            "combined noise variance {sigma2:e} is not positive"
        )));
    }
    Ok((sigma2, b))
}

/// `I(X; E)` in bits from the constrained least-squares residual.
pub fn mi_mmse(obs: &NoisyObservationSet) -> Result<Rate> {
    let (sigma2, _) = mmse_combination(obs)?;
    Ok(Rate::from_bits(
        0.5 * (1.0 + obs.signal_variance / sigma2).log2(),
    ))
}

/// `I(X; bᵀE)` for fixed weights with `Σ b_i = 1`.
pub fn mi_fixed_combination(obs: &NoisyObservationSet, b: &[f64]) -> Result<Rate> {
    if b.len() != obs.len() {
        return Err(Error::InvalidParameter {
            name: "b",
            reason: format!("expected {} weights", obs.len()),
        });
    }
    let total: f64 = b.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "b",
            reason: format!("weights sum to {total}, not 1"),
        });
    }
    let b = DVector::from_column_slice(b);
    let sigma2 = (b.transpose() * &obs.noise_cov * &b)[(0, 0)];
    if !(sigma2 > 0.0) {
        return Err(Error::DegenerateObservation(
            "combined noise variance is zero".into(),
        ));
    }
    Ok(Rate::from_bits(
        0.5 * (1.0 + obs.signal_variance / sigma2).log2(),
    ))
}

/// `I(X_i; S_i | Y_i)`: the information the side information adds on top of
/// the channel output. Zero exactly when the genie is smart.
pub fn cond_mi_smartcheck(
    params: &ChannelParams,
    genie: &GenieSpec,
    receiver: Receiver,
) -> Result<Rate> {
    let joint = assemble_joint(params, Some(genie))?;
    let (x, y, s) = receiver.names();
    let with = mi_det(&joint, x, &[y, s])?;
    let without = mi_det(&joint, x, &[y])?;
    Ok(Rate::from_bits(with.bits() - without.bits()))
}

/// Genie-aided upper bound `I(X1; Y1, S1) + I(X2; Y2, S2)`.
///
/// Only a useful genie yields a proven bound, so anything else is refused.
pub fn genie_aided_sum_rate(params: &ChannelParams, genie: &GenieSpec) -> Result<Rate> {
    if !genie.is_useful(params) {
        let (r1, r2) = genie.useful_residuals(params);
        return Err(Error::InvalidCertificate(format!(
            "genie is not useful (residuals {r1:e}, {r2:e})"
        )));
    }
    let joint = assemble_joint(params, Some(genie))?;
    let r1 = mi_det(&joint, vars::X1, &[vars::Y1, vars::S1])?;
    let r2 = mi_det(&joint, vars::X2, &[vars::Y2, vars::S2])?;
    Ok(r1 + r2)
}

/// `h(Y1 | S1)` in bits, from the closed form and from the joint covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyCheck {
    pub formula_bits: f64,
    pub covariance_bits: f64,
}

impl EntropyCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.formula_bits - self.covariance_bits).abs()
    }
}

fn gaussian_entropy_bits(variance: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * variance).log2()
}

/// Conditional differential entropy of the receiver-1 output given its side
/// information. The closed form is
/// `1 - rho1² + h12² P2 + P1 (rho1 - eta1)² / (P1 + eta1²)`
/// for the conditional variance.
pub fn cond_entropy_formula(params: &ChannelParams, genie: &GenieSpec) -> Result<EntropyCheck> {
    if params.h21 == 0.0 {
        return Err(Error::Precondition(
            "side information vanishes when h21 = 0".into(),
        ));
    }
    let ChannelParams { p1, p2, h12, .. } = *params;
    let (eta, rho) = (genie.eta1, genie.rho1);
    let formula_var =
        1.0 - rho * rho + h12 * h12 * p2 + p1 * (rho - eta) * (rho - eta) / (p1 + eta * eta);

    let joint = assemble_joint(params, Some(genie))?;
    let var_y = joint.variance(vars::Y1)?;
    let var_s = joint.variance(vars::S1)?;
    let cov_ys = joint.covariance(vars::Y1, vars::S1)?;
    let cond_var = var_y - cov_ys * cov_ys / var_s;

    Ok(EntropyCheck {
        formula_bits: gaussian_entropy_bits(formula_var),
        covariance_bits: gaussian_entropy_bits(cond_var),
    })
}
