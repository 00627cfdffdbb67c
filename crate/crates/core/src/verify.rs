//! Cross-checks between independent computational routes.
//!
//! Each suite draws seeded random instances, evaluates a quantity two ways
//! (or against a brute-force oracle) and records the worst residual. The
//! oracles in [`oracle`] share no code with the routes they check.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bounds::{all_bounds, kramer_upper, onebit_upper, tin_sum_rate};
use crate::channel::{make_symmetric, ChannelParams};
use crate::error::Result;
use crate::gaussmi::{
    assemble_joint, cond_entropy_formula, cond_mi_smartcheck, genie_aided_sum_rate, mi_det,
    mi_fixed_combination, mi_mmse, vars, GaussianVector, NoisyObservationSet, Receiver,
};
use crate::geometry::{rate_from_sigma, sigma_line, tangency_gap, tangent_bound, PolarGenie};
use crate::montecarlo::{covariance_stderr, empirical_mi, sample, GaussianStream};
use crate::regime::{
    asym_condition, asym_terms, construct_genie, find_rhos, symmetric_condition, GenieSpec,
};

pub const DEFAULT_SEED: u64 = 2008;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances per fuzzing suite. The regime-equivalence suite
    /// uses ten times as many.
    pub trials: usize,
    /// Count `log2(1 + 2P)` as a lower bound in the ordering check. It
    /// exceeds the upper bounds at small `h`, so strict runs fail there.
    pub strict: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest residual relative to its tolerance; at most 1 when passing.
    pub worst_ratio: f64,
    /// Residual and tolerance of the check that set `worst_ratio`.
    pub worst_residual: f64,
    pub worst_tolerance: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} {:<24} cases={:<7} failures={:<4}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failures,
        )?;
        if self.worst_tolerance > 0.0 {
            write!(
                f,
                " worst residual {:.3e} vs tolerance {:.1e}",
                self.worst_residual, self.worst_tolerance
            )?;
        }
        if let Some(first) = &self.first_failure {
            write!(f, "\n      first failure: {first}")?;
        }
        Ok(())
    }
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            report: SuiteReport {
                name,
                cases: 0,
                failures: 0,
                worst_ratio: f64::NEG_INFINITY,
                worst_residual: 0.0,
                worst_tolerance: 0.0,
                first_failure: None,
            },
        }
    }

    /// Records `residual <= tol`.
    fn within(&mut self, residual: f64, tol: f64, describe: impl FnOnce() -> String) {
        self.report.cases += 1;
        let ratio = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual / tol
        };
        if ratio > self.report.worst_ratio || self.report.worst_tolerance == 0.0 {
            self.report.worst_ratio = ratio;
            self.report.worst_residual = residual;
            self.report.worst_tolerance = tol;
        }
        if !(residual <= tol) {
            self.fail(describe);
        }
    }

    fn holds(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.fail(describe);
        }
    }

    fn result<T>(&mut self, r: Result<T>, describe: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.cases += 1;
                self.fail(|| format!("{}: {e}", describe()));
                None
            }
        }
    }

    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.report.failures += 1;
        if self.report.first_failure.is_none() {
            self.report.first_failure = Some(describe());
        }
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

/// Brute-force and closed-form references that do not reuse the code under test.
pub mod oracle {
    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Feasibility {
        Feasible,
        Infeasible,
        Unresolved,
    }

    /// Searches `(rho1, rho2) ∈ [0, 1]²` for a point with
    /// `rho2 sqrt(1 - rho1²) >= a` and `rho1 sqrt(1 - rho2²) >= b`.
    ///
    /// A 200x200 grid is scanned first. Cells whose corner bounds cannot reach
    /// `(a, b)` are discarded (the first function falls in `rho1` and rises in
    /// `rho2`, the second the other way round); the rest are quartered until a
    /// witness turns up or every cell is discarded.
    pub fn rho_feasibility(a: f64, b: f64) -> Feasibility {
        const GRID: usize = 200;
        const MAX_DEPTH: u32 = 48;
        let f1 = |r1: f64, r2: f64| r2 * (1.0 - r1 * r1).max(0.0).sqrt();
        let f2 = |r1: f64, r2: f64| r1 * (1.0 - r2 * r2).max(0.0).sqrt();
        let node = |i: usize| i as f64 / (GRID - 1) as f64;
        for i in 0..GRID {
            for j in 0..GRID {
                let (r1, r2) = (node(i), node(j));
                if f1(r1, r2) >= a && f2(r1, r2) >= b {
                    return Feasibility::Feasible;
                }
            }
        }
        let mut stack: Vec<(f64, f64, f64, f64, u32)> = Vec::new();
        for i in 0..GRID - 1 {
            for j in 0..GRID - 1 {
                stack.push((node(i), node(i + 1), node(j), node(j + 1), 0));
            }
        }
        let mut unresolved = false;
        while let Some((r1lo, r1hi, r2lo, r2hi, depth)) = stack.pop() {
            if f1(r1lo, r2hi) < a || f2(r1hi, r2lo) < b {
                continue;
            }
            let (m1, m2) = (0.5 * (r1lo + r1hi), 0.5 * (r2lo + r2hi));
            for (r1, r2) in [(m1, m2), (r1lo, r2hi), (r1hi, r2lo)] {
                if f1(r1, r2) >= a && f2(r1, r2) >= b {
                    return Feasibility::Feasible;
                }
            }
            if depth >= MAX_DEPTH {
                unresolved = true;
                continue;
            }
            stack.push((r1lo, m1, r2lo, m2, depth + 1));
            stack.push((m1, r1hi, r2lo, m2, depth + 1));
            stack.push((r1lo, m1, m2, r2hi, depth + 1));
            stack.push((m1, r1hi, m2, r2hi, depth + 1));
        }
        if unresolved {
            Feasibility::Unresolved
        } else {
            Feasibility::Infeasible
        }
    }

    /// Root of `h (1 + h² p) = 1/2` on `h >= 0` by bisection.
    pub fn symmetric_threshold(p: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * (1.0 + mid * mid * p) <= 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Best boundary-genie sum rate on a uniform `theta` grid. Each grid
    /// genie is scored with the 2x2 closed form
    /// `σ² = det N / (N11 + N22 - 2 N12)`.
    pub fn dense_tangent_rate(p: f64, h: f64, points: usize) -> f64 {
        let a2 = 1.0 + h * h * p;
        let lo = (1.0 / a2.sqrt()).acos();
        let hi = std::f64::consts::FRAC_PI_2;
        let mut best = f64::INFINITY;
        for k in 0..points {
            let theta = lo + (hi - lo) * k as f64 / (points - 1) as f64;
            let rho = a2.sqrt() * theta.cos();
            let eta2 = (1.0 - rho * rho).max(0.0) / (h * h);
            let cross = eta2.sqrt() * rho;
            let det = a2 * eta2 - cross * cross;
            let denom = a2 + eta2 - 2.0 * cross;
            if !(det > 0.0) || !(denom > 0.0) {
                continue;
            }
            let sigma2 = det / denom;
            best = best.min((1.0 + p / sigma2).log2());
        }
        best
    }

    /// Joint covariance of `(X, E_1, .., E_m)` for `E_i = X + N_i`.
    pub fn observation_joint(obs: &NoisyObservationSet) -> GaussianVector {
        let m = obs.len();
        let p = obs.signal_variance();
        let n = obs.noise_cov();
        let cov = DMatrix::from_fn(m + 1, m + 1, |i, j| match (i, j) {
            (0, _) | (_, 0) => p,
            _ => p + n[(i - 1, j - 1)],
        });
        let mut names = vec!["X".to_string()];
        names.extend((1..=m).map(|i| format!("E{i}")));
        GaussianVector::new(names, cov).expect("observation joint is PSD")
    }
}

fn log_uniform(s: &mut GaussianStream, lo: f64, hi: f64) -> f64 {
    (s.uniform_in(lo.ln(), hi.ln())).exp()
}

fn signed(s: &mut GaussianStream, magnitude: f64) -> f64 {
    if s.uniform() < 0.5 {
        -magnitude
    } else {
        magnitude
    }
}

fn random_channel(s: &mut GaussianStream) -> ChannelParams {
    let p1 = log_uniform(s, 0.1, 100.0);
    let p2 = log_uniform(s, 0.1, 100.0);
    let g12 = log_uniform(s, 1e-3, 1.0);
    let h12 = signed(s, g12);
    let g21 = log_uniform(s, 1e-3, 1.0);
    let h21 = signed(s, g21);
    ChannelParams::new(p1, p2, h12, h21).expect("valid draw")
}

/// Symmetric channel strictly inside the low-interference regime, h != 0.
pub fn random_symmetric_in_regime(s: &mut GaussianStream) -> ChannelParams {
    let p = s.uniform_in(0.1, 100.0);
    let mag = oracle::symmetric_threshold(p) * s.uniform();
    let h = signed(s, mag);
    make_symmetric(p, h).expect("valid draw")
}

/// Smallest genie noise scale drawn by the fuzzers. Below this the side
/// channel is nearly noiseless and the conditional variances lose digits to
/// cancellation.
pub const MIN_GENIE_ETA: f64 = 0.05;

/// Random genie satisfying the usefulness inequalities with room to spare.
fn random_useful_genie(s: &mut GaussianStream, params: &ChannelParams) -> GenieSpec {
    let rho1 = s.uniform_in(0.0, 0.99);
    let rho2 = s.uniform_in(0.0, 0.99);
    let cap1 = (1.0 - rho2 * rho2).sqrt() / params.h21.abs();
    let cap2 = (1.0 - rho1 * rho1).sqrt() / params.h12.abs();
    // cap >= sqrt(1 - 0.99²) / 2 > 0.07, so the floor is always attainable.
    let eta1 = log_uniform(s, MIN_GENIE_ETA, cap1.min(50.0));
    let eta2 = log_uniform(s, MIN_GENIE_ETA, cap2.min(50.0));
    GenieSpec::new(eta1, rho1, eta2, rho2).expect("valid draw")
}

pub fn rho_search_equivalence(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("rho_search_equivalence");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5245_4d32);
    for _ in 0..10 * cfg.trials {
        let c = random_channel(&mut s);
        let cond = asym_condition(&c);
        let rhos = find_rhos(&c);
        let (a, b) = asym_terms(&c);
        t.holds(rhos.is_some() == cond, || {
            format!("find_rhos disagrees with the sum condition for {c:?}")
        });
        let brute = oracle::rho_feasibility(a, b);
        let expected = if cond {
            oracle::Feasibility::Feasible
        } else {
            oracle::Feasibility::Infeasible
        };
        t.holds(brute == expected, || {
            format!("grid search says {brute:?}, sum condition says {cond} for {c:?}")
        });
        if let Some(r) = rhos {
            let v1 = a - r.rho2 * (1.0 - r.rho1 * r.rho1).sqrt();
            let v2 = b - r.rho1 * (1.0 - r.rho2 * r.rho2).sqrt();
            t.within(v1.max(v2), 1e-12, || {
                format!("chosen rhos violate the certificate for {c:?}: {r:?}")
            });
        }
        // Symmetric restriction of the same draw.
        let sym = make_symmetric(c.p1, c.h12).expect("valid");
        t.holds(
            symmetric_condition(sym.p1, sym.h12) == asym_condition(&sym),
            || format!("symmetric and asymmetric conditions disagree for {sym:?}"),
        );
    }
    t.finish()
}

pub fn symmetric_certificate(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("symmetric_certificate");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5448_4d31);
    for _ in 0..cfg.trials {
        let c = random_symmetric_in_regime(&mut s);
        let Some(g) = construct_genie(&c) else {
            t.holds(false, || format!("no genie constructed for {c:?}"));
            continue;
        };
        t.holds(g.is_useful(&c), || {
            format!("genie not useful for {c:?}: {g:?}")
        });
        let (s1, s2) = g.smart_residuals(&c);
        t.within(s1.abs().max(s2.abs()), 1e-12, || {
            format!("genie not smart for {c:?}: {g:?}")
        });
        t.holds(g.eta1 == g.eta2 && g.rho1 == g.rho2, || {
            format!("asymmetric genie on symmetric channel {c:?}")
        });
        if let Some(r) = t.result(genie_aided_sum_rate(&c, &g), || format!("{c:?}")) {
            let tin = tin_sum_rate(&c).bits();
            t.within((r.bits() - tin).abs(), 1e-9, || {
                format!("genie bound {r} != TIN {tin} for {c:?}")
            });
        }
    }
    t.finish()
}

pub fn smart_genie_equality(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("smart_genie_equality");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5448_4d31);
    for _ in 0..cfg.trials {
        let c = random_symmetric_in_regime(&mut s);
        let Some(g) = construct_genie(&c) else {
            t.holds(false, || format!("no genie constructed for {c:?}"));
            continue;
        };
        for rx in [Receiver::One, Receiver::Two] {
            if let Some(v) = t.result(cond_mi_smartcheck(&c, &g, rx), || format!("{c:?}")) {
                t.within(v.bits(), 1e-9, || {
                    format!("I(X;S|Y) = {} under the smart genie for {c:?}", v.bits())
                });
            }
        }
        let nudged = GenieSpec::symmetric(1.1 * g.eta1, g.rho1).expect("valid");
        if let Some(v) = t.result(cond_mi_smartcheck(&c, &nudged, Receiver::One), || {
            format!("{c:?}")
        }) {
            t.holds(v.bits() >= 1e-6, || {
                format!("I(X;S|Y) = {} with eta x1.1 for {c:?}", v.bits())
            });
        }
    }
    t.finish()
}

pub fn asymmetric_certificate(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("asymmetric_certificate");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5448_4d33);
    let mut found = 0;
    while found < cfg.trials {
        let c = random_channel(&mut s);
        if !asym_condition(&c) {
            continue;
        }
        found += 1;
        let Some(g) = construct_genie(&c) else {
            t.holds(false, || format!("no genie for {c:?}"));
            continue;
        };
        t.holds(g.is_useful(&c), || {
            format!("genie not useful for {c:?}: {g:?}")
        });
        let (s1, s2) = g.smart_residuals(&c);
        t.within(s1.abs().max(s2.abs()), 1e-12, || {
            format!("genie not smart for {c:?}")
        });
        if let Some(r) = t.result(genie_aided_sum_rate(&c, &g), || format!("{c:?}")) {
            let tin = tin_sum_rate(&c).bits();
            t.within((r.bits() - tin).abs(), 1e-9, || {
                format!("genie bound {r} != TIN {tin} for {c:?}")
            });
        }
    }
    t.finish()
}

fn random_observation_set(s: &mut GaussianStream) -> NoisyObservationSet {
    let m = 1 + (s.uniform() * 4.0) as usize;
    let a = DMatrix::from_fn(m, m, |_, _| s.standard_normal());
    let shift = s.uniform_in(0.05, 1.0);
    let noise = &a * a.transpose() + DMatrix::identity(m, m) * shift;
    let noise = (&noise + noise.transpose()) * 0.5;
    NoisyObservationSet::new(log_uniform(s, 0.1, 100.0), noise).expect("valid draw")
}

pub fn mmse_two_path(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("mmse_two_path");
    let mut s = GaussianStream::new(cfg.seed ^ 0x4c45_4d33);
    for _ in 0..cfg.trials {
        let obs = random_observation_set(&mut s);
        let joint = oracle::observation_joint(&obs);
        let names: Vec<String> = joint.names()[1..].to_vec();
        let observed: Vec<&str> = names.iter().map(String::as_str).collect();
        let det = t.result(mi_det(&joint, "X", &observed), || format!("{obs:?}"));
        let mmse = t.result(mi_mmse(&obs), || format!("{obs:?}"));
        if let (Some(d), Some(m)) = (det, mmse) {
            t.within((d.bits() - m.bits()).abs(), 1e-9, || {
                format!("det {d} vs mmse {m} for {obs:?}")
            });
            // Any fixed unbiased combination loses information.
            let mut b: Vec<f64> = (0..obs.len()).map(|_| s.standard_normal()).collect();
            let total: f64 = b.iter().sum();
            if total.abs() > 0.1 {
                b.iter_mut().for_each(|x| *x /= total);
                let fix = b.iter().take(obs.len() - 1).sum::<f64>();
                *b.last_mut().expect("m >= 1") = 1.0 - fix;
                if let Some(f) = t.result(mi_fixed_combination(&obs, &b), || format!("{obs:?}")) {
                    t.within(f.bits() - d.bits(), 1e-12, || {
                        format!("fixed weights beat the optimum for {obs:?}")
                    });
                }
            }
        }
    }
    t.finish()
}

/// `|mi_det(X; Y, S) - mi_mmse(E)|` at one receiver, with the determinant
/// route reading from `joint` and the MMSE route built from the model.
pub fn receiver_two_path_residual(
    joint: &GaussianVector,
    params: &ChannelParams,
    genie: &GenieSpec,
    receiver: Receiver,
) -> Result<f64> {
    let (x, y, s) = receiver.names();
    let det = mi_det(joint, x, &[y, s])?;
    let mmse = mi_mmse(&NoisyObservationSet::for_receiver(
        params,
        Some(genie),
        receiver,
    )?)?;
    Ok((det.bits() - mmse.bits()).abs())
}

pub fn receiver_two_path(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("receiver_two_path");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5258_3250);
    for k in 0..cfg.trials {
        let c = if k % 2 == 0 {
            let p = s.uniform_in(0.1, 100.0);
            let mag = s.uniform_in(0.01, 2.0);
            make_symmetric(p, signed(&mut s, mag)).expect("valid")
        } else {
            let p1 = s.uniform_in(0.1, 100.0);
            let p2 = s.uniform_in(0.1, 100.0);
            let m12 = s.uniform_in(0.01, 2.0);
            let m21 = s.uniform_in(0.01, 2.0);
            let (h12, h21) = (signed(&mut s, m12), signed(&mut s, m21));
            ChannelParams::new(p1, p2, h12, h21).expect("valid")
        };
        let g = random_useful_genie(&mut s, &c);
        let Some(joint) = t.result(assemble_joint(&c, Some(&g)), || format!("{c:?} {g:?}")) else {
            continue;
        };
        for rx in [Receiver::One, Receiver::Two] {
            let (x, y, side) = rx.names();
            if let Some(r) = t.result(receiver_two_path_residual(&joint, &c, &g, rx), || {
                format!("{c:?} {g:?}")
            }) {
                t.within(r, 1e-9, || {
                    format!("two-path mismatch {r:e} at {rx:?} for {c:?} {g:?}")
                });
            }
            let both = t.result(mi_det(&joint, x, &[y, side]), || format!("{c:?} {g:?}"));
            let out = t.result(mi_det(&joint, x, &[y]), || format!("{c:?} {g:?}"));
            let only_side = t.result(mi_det(&joint, x, &[side]), || format!("{c:?} {g:?}"));
            let cond = t.result(cond_mi_smartcheck(&c, &g, rx), || format!("{c:?} {g:?}"));
            if let (Some(both), Some(out), Some(only_side), Some(cond)) =
                (both, out, only_side, cond)
            {
                t.within(
                    (both.bits() - out.bits() - cond.bits()).abs(),
                    1e-12,
                    || format!("chain rule broken at {rx:?} for {c:?} {g:?}"),
                );
                t.within(out.bits() - both.bits(), 1e-10, || {
                    format!("dropping S raised MI for {c:?} {g:?}")
                });
                t.within(only_side.bits() - both.bits(), 1e-10, || {
                    format!("dropping Y raised MI for {c:?} {g:?}")
                });
                let factor = signed(&mut s, 1.0) * log_uniform(&mut s, 1e-2, 1e2);
                if let Some(scaled) = t.result(joint.scaled(side, factor), || format!("{c:?}")) {
                    if let Some(v) =
                        t.result(mi_det(&scaled, x, &[y, side]), || format!("{c:?} {g:?}"))
                    {
                        t.within((v.bits() - both.bits()).abs(), 1e-10, || {
                            format!("scaling {side} by {factor} changed MI for {c:?} {g:?}")
                        });
                    }
                }
            }
        }
    }
    t.finish()
}

pub fn entropy_closed_form(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("entropy_closed_form");
    let mut s = GaussianStream::new(cfg.seed ^ 0x454e_5452);
    for _ in 0..cfg.trials {
        let c = random_channel(&mut s);
        let g = random_useful_genie(&mut s, &c);
        if let Some(e) = t.result(cond_entropy_formula(&c, &g), || format!("{c:?} {g:?}")) {
            t.within(e.discrepancy(), 1e-9, || {
                format!("closed form {e:?} for {c:?} {g:?}")
            });
        }
    }
    t.finish()
}

pub fn onebit_recovery(_cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("onebit_recovery");
    for h in [0.3, 0.5, 0.8, 1.0] {
        let c = make_symmetric(10.0, h).expect("valid");
        let onebit = onebit_upper(&c).expect("symmetric").bits();
        let q = PolarGenie {
            eta: 1.0 / h,
            theta: std::f64::consts::FRAC_PI_2,
        };
        if let Some(sigma) = t.result(sigma_line(&c, &q), || format!("{c:?}")) {
            let via_sigma = 2.0 * rate_from_sigma(10.0, sigma).bits();
            t.within((via_sigma - onebit).abs(), 1e-9, || {
                format!("sigma route {via_sigma} vs {onebit} at h={h}")
            });
        }
        let g = GenieSpec::symmetric(1.0 / h, 0.0).expect("valid");
        if let Some(r) = t.result(genie_aided_sum_rate(&c, &g), || format!("{c:?}")) {
            t.within((r.bits() - onebit).abs(), 1e-9, || {
                format!("genie route {r} vs {onebit} at h={h}")
            });
        }
        if let Some(tb) = t.result(tangent_bound(&c), || format!("{c:?}")) {
            t.within(tb.rate.bits() - onebit, 1e-9, || {
                format!("tangent above One-Bit at h={h}")
            });
        }
    }
    t.finish()
}

pub fn tangent_optimizer(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("tangent_optimizer");
    let mut s = GaussianStream::new(cfg.seed ^ 0x5441_4e47);
    let mut cases = vec![(10.0, 0.5), (10.0, 1.0), (1.0, 1.5), (100.0, 0.2)];
    for _ in 0..4 {
        let p = log_uniform(&mut s, 0.1, 100.0);
        let h0 = oracle::symmetric_threshold(p);
        cases.push((p, h0 * s.uniform_in(1.05, 8.0)));
    }
    for (p, h) in cases {
        let c = make_symmetric(p, h).expect("valid");
        let Some(tb) = t.result(tangent_bound(&c), || format!("{c:?}")) else {
            continue;
        };
        let brute = oracle::dense_tangent_rate(p, h, 1_000_000);
        t.within((tb.rate.bits() - brute).abs(), 1e-8, || {
            format!("optimizer {} vs grid {brute} for {c:?}", tb.rate)
        });
        t.within(
            (tb.rate.bits() - tb.slope_form_rate.bits()).abs(),
            1e-12,
            || {
                format!(
                    "slope form {} vs sigma form {} for {c:?}",
                    tb.slope_form_rate, tb.rate
                )
            },
        );
        let slope_gap = (tb.geometric_slope.abs() - tb.mu).abs() / tb.mu;
        t.within(slope_gap, 1e-8, || {
            format!(
                "segment slope {} vs recovered mu {} for {c:?}",
                tb.geometric_slope, tb.mu
            )
        });
        t.holds(tb.near_optimal_maxima == 1, || {
            format!("{} near-optimal maxima for {c:?}", tb.near_optimal_maxima)
        });
        if let Some((outside, closest)) =
            t.result(tangency_gap(&c, &tb, 100_001), || format!("{c:?}"))
        {
            t.within(outside, 1e-8, || {
                format!("boundary crosses the tangent by {outside:e} for {c:?}")
            });
            t.within(closest, 1e-8, || {
                format!("tangent misses the boundary by {closest:e} for {c:?}")
            });
        }
        let tin = tin_sum_rate(&c).bits();
        t.within(tin - tb.rate.bits(), 1e-12, || {
            format!("tangent below TIN for {c:?}")
        });
        if let Some(g) = t.result(tb.genie(&c), || format!("{c:?}")) {
            if let Some(r) = t.result(genie_aided_sum_rate(&c, &g), || format!("{c:?}")) {
                t.within((r.bits() - tb.rate.bits()).abs(), 1e-9, || {
                    format!("tangent genie bound {r} for {c:?}")
                });
            }
        }
        // Every other boundary genie gives a weaker bound.
        let (lo, hi) = crate::geometry::boundary_theta_range(&c).expect("symmetric");
        for k in 1..=50 {
            let theta = lo + (hi - lo) * k as f64 / 50.0;
            let eta = crate::geometry::useful_boundary(&c, theta).expect("in range");
            let g = crate::geometry::from_polar(&PolarGenie { eta, theta }, &c).expect("valid");
            if let Some(r) = t.result(genie_aided_sum_rate(&c, &g), || {
                format!("{c:?} theta={theta}")
            }) {
                t.within(tb.rate.bits() - r.bits(), 1e-9, || {
                    format!("boundary genie at theta={theta} beats tangent for {c:?}")
                });
            }
        }
        // Lines through Q_Y never get further from the origin than Q_Y itself.
        let a = (1.0 + h * h * p).sqrt();
        for _ in 0..50 {
            let q = PolarGenie {
                eta: log_uniform(&mut s, 1e-3, 1e3),
                theta: s.uniform_in(0.0, std::f64::consts::PI),
            };
            if let Ok(sigma) = sigma_line(&c, &q) {
                t.within(sigma - a, 1e-12 * a, || {
                    format!("sigma {sigma} exceeds {a} for {c:?} {q:?}")
                });
            }
        }
    }
    // Continuity at the regime boundary.
    for p in [1.0, 10.0, 100.0] {
        let h = solve_condition_value(p, 0.5 + 1e-6);
        let c = make_symmetric(p, h).expect("valid");
        if let Some(tb) = t.result(tangent_bound(&c), || format!("{c:?}")) {
            let gap = tb.rate.bits() - tin_sum_rate(&c).bits();
            t.within(gap, 1e-3, || {
                format!("tangent {gap} above TIN just past threshold for {c:?}")
            });
        }
    }
    t.finish()
}

/// `h >= 0` with `h (1 + h² p) = target`, by bisection.
fn solve_condition_value(p: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, target.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * (1.0 + mid * mid * p) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

pub fn bounds_ordering(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("bounds_ordering");
    for p in [1.0, 10.0, 100.0] {
        for k in 0..=200 {
            let h = k as f64 * 0.01;
            let c = make_symmetric(p, h).expect("valid");
            let Some(b) = t.result(all_bounds(&c), || format!("{c:?}")) else {
                continue;
            };
            let lower = b.max_lower(cfg.strict).bits();
            if let Some(u) = b.min_upper() {
                t.within(lower - u.bits(), 1e-9, || {
                    format!("lower {lower} above upper {u} for {c:?}")
                });
            }
            if let Some(e) = b.exact_capacity {
                t.holds(e == b.tin_lower, || {
                    format!("exact capacity differs from TIN for {c:?}")
                });
                if let Some(g) = b.genie_upper {
                    t.within((g.bits() - b.tin_lower.bits()).abs(), 1e-9, || {
                        format!("genie bound not tight for {c:?}")
                    });
                }
            }
            if let (Some(tan), Some(one)) = (b.tangent_upper, b.onebit_upper) {
                if h <= 1.0 {
                    t.within(tan.bits() - one.bits(), 1e-9, || {
                        format!("tangent above One-Bit for {c:?}")
                    });
                }
            }
            let closed_form = (1.0 + p / (1.0 + h * h * p)).log2();
            t.holds(b.tin_lower.bits() == closed_form, || {
                format!("TIN differs from the symmetric formula for {c:?}")
            });
            if let Some(neg) = t.result(all_bounds(&c.negated_gains()), || format!("{c:?}")) {
                t.holds(neg == b, || {
                    format!("bounds depend on the sign of h for {c:?}")
                });
            }
            let asym_view = ChannelParams {
                p1: p,
                p2: p,
                h12: h,
                h21: h,
            };
            t.holds(
                asym_condition(&asym_view) == symmetric_condition(p, h),
                || format!("conditions disagree for {c:?}"),
            );
            // One-sided channel: exact capacity equals the Z-channel bound.
            if h <= 1.0 {
                let z = ChannelParams::new(p, p, h, 0.0).expect("valid");
                let kramer = kramer_upper(&c).expect("symmetric");
                let exact = crate::bounds::exact_sum_capacity(&z);
                t.holds(exact == Some(kramer), || {
                    format!("one-sided capacity {exact:?} vs Z bound {kramer} for {z:?}")
                });
            }
        }
    }
    t.finish()
}

/// One analytic/empirical mutual-information comparison.
#[derive(Debug, Clone)]
pub struct MonteCarloCase {
    pub label: &'static str,
    pub params: ChannelParams,
    pub genie: Option<GenieSpec>,
    pub target: &'static str,
    pub observed: Vec<&'static str>,
}

/// Cases checked by the Monte Carlo suite.
pub fn monte_carlo_cases() -> Vec<MonteCarloCase> {
    let awgn = make_symmetric(10.0, 0.0).expect("valid");
    let tin = make_symmetric(10.0, 0.25).expect("valid");
    let smart = construct_genie(&tin);
    let asym = ChannelParams::new(10.0, 5.0, 0.2, 0.1).expect("valid");
    let asym_genie = construct_genie(&asym);
    let above = make_symmetric(10.0, 0.5).expect("valid");
    let tangent = tangent_bound(&above).and_then(|t| t.genie(&above)).ok();
    let case = |label, params, genie, target, observed: &[&'static str]| MonteCarloCase {
        label,
        params,
        genie,
        target,
        observed: observed.to_vec(),
    };
    vec![
        case("awgn X1;Y1", awgn, None, vars::X1, &[vars::Y1]),
        case("tin X1;Y1", tin, None, vars::X1, &[vars::Y1]),
        case("tin X2;Y2", tin, None, vars::X2, &[vars::Y2]),
        case(
            "smart X1;Y1,S1",
            tin,
            smart,
            vars::X1,
            &[vars::Y1, vars::S1],
        ),
        case("smart X1;Y1", tin, smart, vars::X1, &[vars::Y1]),
        case(
            "asym X1;Y1,S1",
            asym,
            asym_genie,
            vars::X1,
            &[vars::Y1, vars::S1],
        ),
        case(
            "asym X2;Y2,S2",
            asym,
            asym_genie,
            vars::X2,
            &[vars::Y2, vars::S2],
        ),
        case(
            "tangent X1;Y1,S1",
            above,
            tangent,
            vars::X1,
            &[vars::Y1, vars::S1],
        ),
        case("tangent X1;S1", above, tangent, vars::X1, &[vars::S1]),
    ]
}

pub const MONTE_CARLO_N: usize = 1_000_000;

pub fn monte_carlo_oracle(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("monte_carlo_oracle");
    let mut smart_pair = Vec::new();
    for (k, case) in monte_carlo_cases().into_iter().enumerate() {
        let MonteCarloCase {
            label,
            params: c,
            genie: g,
            target,
            observed,
        } = case;
        let seed = cfg.seed.wrapping_add(k as u64);
        let Some(batch) = t.result(sample(&c, g.as_ref(), MONTE_CARLO_N, seed), || {
            label.to_string()
        }) else {
            continue;
        };
        let Some(joint) = t.result(assemble_joint(&c, g.as_ref()), || label.to_string()) else {
            continue;
        };
        let Some(analytic) = t.result(mi_det(&joint, target, &observed), || label.to_string())
        else {
            continue;
        };
        let Some(est) = t.result(empirical_mi(&batch, target, &observed), || {
            label.to_string()
        }) else {
            continue;
        };
        let z = (est.estimate.bits() - analytic.bits()).abs() / est.stderr;
        t.within(z, 3.0, || {
            format!(
                "{label}: empirical {} vs analytic {} ({z:.2} stderr, seed {seed}, {c:?})",
                est.estimate, analytic
            )
        });
        if label.starts_with("smart") {
            smart_pair.push(est);
        }
        if label == "smart X1;Y1,S1" {
            // Moment contract on the full joint.
            let names: Vec<&str> = joint.names().iter().map(String::as_str).collect();
            if let Some(emp) = t.result(batch.empirical_covariance(&names), || label.to_string()) {
                for a in &names {
                    for b in &names {
                        let diff = emp.covariance(a, b).expect("present")
                            - joint.covariance(a, b).expect("present");
                        let se = covariance_stderr(&joint, a, b, MONTE_CARLO_N).expect("present");
                        t.within(diff.abs() / se, 5.0, || {
                            format!("Cov({a},{b}) off by {diff:e} ({label}, seed {seed})")
                        });
                    }
                }
            }
            let var_y = emp_var(&batch, vars::Y1);
            let expected = 11.625;
            let se = expected * (2.0 / MONTE_CARLO_N as f64).sqrt();
            t.within((var_y - expected).abs() / se, 3.0, || {
                format!("Var(Y1) = {var_y} (seed {seed})")
            });
        }
    }
    if let [with, without] = smart_pair[..] {
        let diff = (with.estimate.bits() - without.estimate.bits()).abs();
        t.within(diff / with.stderr, 3.0, || {
            format!("side information moved the estimate by {diff:e}")
        });
    }
    t.finish()
}

fn emp_var(batch: &crate::montecarlo::SampleBatch, name: &str) -> f64 {
    batch
        .empirical_covariance(&[name])
        .and_then(|g| g.variance(name))
        .unwrap_or(f64::NAN)
}

pub const CONSISTENCY_TRIALS: usize = 100;
pub const CONSISTENCY_SIZES: [usize; 3] = [10_000, 100_000, 1_000_000];

/// Per sample size: fraction of trials within 3 stderr and mean |error|.
pub fn monte_carlo_consistency_stats(cfg: &VerifyConfig) -> Result<Vec<(usize, usize, f64)>> {
    let c = make_symmetric(10.0, 0.25)?;
    let g = construct_genie(&c);
    let joint = assemble_joint(&c, g.as_ref())?;
    let analytic = mi_det(&joint, vars::X1, &[vars::Y1, vars::S1])?.bits();
    let seeds: Vec<u64> = (0..CONSISTENCY_TRIALS as u64)
        .map(|k| cfg.seed.wrapping_mul(31).wrapping_add(1_000 + k))
        .collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(CONSISTENCY_TRIALS);
    let chunk = CONSISTENCY_TRIALS.div_ceil(workers);
    let mut out = Vec::new();
    for n in CONSISTENCY_SIZES {
        // Absolute error and stderr per trial, in seed order.
        let trials: Vec<(f64, f64)> = std::thread::scope(|s| {
            let handles: Vec<_> = seeds
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || {
                        part.iter()
                            .map(|&seed| {
                                let batch = sample(&c, g.as_ref(), n, seed)?;
                                let est = empirical_mi(&batch, vars::X1, &[vars::Y1, vars::S1])?;
                                Ok(((est.estimate.bits() - analytic).abs(), est.stderr))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            let mut all = Vec::with_capacity(CONSISTENCY_TRIALS);
            for h in handles {
                all.extend(h.join().map_err(|_| {
                    crate::error::Error::Internal("sampling worker panicked".into())
                })??);
            }
            Ok::<_, crate::error::Error>(all)
        })?;
        let covered = trials.iter().filter(|(err, se)| *err <= 3.0 * se).count();
        let mean = trials.iter().map(|(err, _)| err).sum::<f64>() / CONSISTENCY_TRIALS as f64;
        out.push((n, covered, mean));
    }
    Ok(out)
}

pub fn monte_carlo_consistency(cfg: &VerifyConfig) -> SuiteReport {
    let mut t = Tally::new("monte_carlo_consistency");
    if let Some(stats) = t.result(monte_carlo_consistency_stats(cfg), || {
        "sampling failed".into()
    }) {
        for &(n, covered, _) in &stats {
            t.holds(covered * 100 >= 95 * CONSISTENCY_TRIALS, || {
                format!("only {covered}/{CONSISTENCY_TRIALS} trials within 3 stderr at n={n}")
            });
        }
        for w in stats.windows(2) {
            t.holds(w[1].2 < w[0].2, || {
                format!(
                    "mean error did not shrink from n={} to n={}",
                    w[0].0, w[1].0
                )
            });
        }
    }
    t.finish()
}

pub type Suite = fn(&VerifyConfig) -> SuiteReport;

pub const SUITES: [(&str, Suite); 12] = [
    ("rho_search_equivalence", rho_search_equivalence),
    ("symmetric_certificate", symmetric_certificate),
    ("smart_genie_equality", smart_genie_equality),
    ("asymmetric_certificate", asymmetric_certificate),
    ("mmse_two_path", mmse_two_path),
    ("receiver_two_path", receiver_two_path),
    ("entropy_closed_form", entropy_closed_form),
    ("onebit_recovery", onebit_recovery),
    ("tangent_optimizer", tangent_optimizer),
    ("bounds_ordering", bounds_ordering),
    ("monte_carlo_oracle", monte_carlo_oracle),
    ("monte_carlo_consistency", monte_carlo_consistency),
];

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, suite)| suite(cfg)).collect()
}
