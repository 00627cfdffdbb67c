//! Seeded sampling from the channel law, used as an implementation-free
//! check on the covariance algebra.
//!
//! Generator: ChaCha20 seeded with `seed_from_u64(seed)`. Each 64-bit output
//! `u` becomes a uniform `((u >> 11) + 0.5) / 2^53` in the open interval
//! (0, 1). Gaussians come from the Box–Muller transform on consecutive
//! uniform pairs `(u1, u2)`: `r = sqrt(-2 ln u1)`, `r cos(2π u2)`,
//! `r sin(2π u2)`.
//!
//! Every row consumes six standard normals in the order
//! `X1, X2, Z1, Z2, U1, U2` (scaled by `sqrt(P_i)` for the inputs), whether
//! or not a genie is present. With a genie, `W_i = rho_i Z_i + sqrt(1 - rho_i²) U_i`
//! and `S1 = h21 (X1 + eta1 W1)`, `S2 = h12 (X2 + eta2 W2)`.

use std::io::Write;

use nalgebra::DMatrix;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::channel::{ChannelParams, Rate};
use crate::error::{Error, Result};
use crate::format;
use crate::gaussmi::{mi_det, vars, GaussianVector};
use crate::regime::GenieSpec;

pub const FOLDS: usize = 10;

/// Uniform and Gaussian draws from a seeded ChaCha20 stream.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (u1, u2) = (self.uniform(), self.uniform());
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * angle.sin());
        r * angle.cos()
    }
}

/// Columns sampled from the channel law.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub n: usize,
    pub seed: u64,
    pub params: ChannelParams,
    pub genie: Option<GenieSpec>,
    columns: Vec<(&'static str, Vec<f64>)>,
}

impl SampleBatch {
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c.as_slice())
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn column_names(&self) -> Vec<&'static str> {
        self.columns.iter().map(|(n, _)| *n).collect()
    }

    /// Dumps the batch as CSV with a header row and 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::Internal(format!("csv write failed: {e}"));
        w.write_record(self.column_names()).map_err(io)?;
        for i in 0..self.n {
            w.write_record(self.columns.iter().map(|(_, c)| format::full(c[i])))
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Internal(format!("csv flush failed: {e}")))
    }

    /// Sample covariance (mean removed, `n - 1` divisor) of rows `range`.
    fn covariance_of(
        &self,
        names: &[&str],
        range: std::ops::Range<usize>,
    ) -> Result<GaussianVector> {
        let cols = names
            .iter()
            .map(|n| self.column(n).map(|c| &c[range.clone()]))
            .collect::<Result<Vec<_>>>()?;
        let len = range.len();
        if len < 2 {
            return Err(Error::DegenerateBatch(format!(
                "{len} rows are too few for a covariance"
            )));
        }
        let means: Vec<f64> = cols
            .iter()
            .map(|c| c.iter().sum::<f64>() / len as f64)
            .collect();
        let k = names.len();
        let mut cov = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let s: f64 = cols[i]
                    .iter()
                    .zip(cols[j])
                    .map(|(a, b)| (a - means[i]) * (b - means[j]))
                    .sum();
                cov[(i, j)] = s / (len - 1) as f64;
                cov[(j, i)] = cov[(i, j)];
            }
        }
        GaussianVector::new(names.iter().map(|n| n.to_string()).collect(), cov)
            .map_err(|e| Error::DegenerateBatch(e.to_string()))
    }

    pub fn empirical_covariance(&self, names: &[&str]) -> Result<GaussianVector> {
        self.covariance_of(names, 0..self.n)
    }
}

pub fn sample(
    params: &ChannelParams,
    genie: Option<&GenieSpec>,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    params.validate()?;
    let ChannelParams { p1, p2, h12, h21 } = *params;
    let (s1, s2) = (p1.sqrt(), p2.sqrt());
    let mut stream = GaussianStream::new(seed);

    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    let mut z1 = Vec::with_capacity(n);
    let mut z2 = Vec::with_capacity(n);
    let mut u1 = Vec::with_capacity(n);
    let mut u2 = Vec::with_capacity(n);
    for _ in 0..n {
        x1.push(s1 * stream.standard_normal());
        x2.push(s2 * stream.standard_normal());
        z1.push(stream.standard_normal());
        z2.push(stream.standard_normal());
        u1.push(stream.standard_normal());
        u2.push(stream.standard_normal());
    }
    let y1: Vec<f64> = (0..n).map(|i| x1[i] + h12 * x2[i] + z1[i]).collect();
    let y2: Vec<f64> = (0..n).map(|i| x2[i] + h21 * x1[i] + z2[i]).collect();

    let mut columns = vec![
        (vars::X1, x1),
        (vars::X2, x2),
        (vars::Z1, z1),
        (vars::Z2, z2),
    ];
    if let Some(g) = genie {
        let g = GenieSpec::new(g.eta1, g.rho1, g.eta2, g.rho2)?;
        let (c1, c2) = (
            (1.0 - g.rho1 * g.rho1).sqrt(),
            (1.0 - g.rho2 * g.rho2).sqrt(),
        );
        let w1: Vec<f64> = (0..n)
            .map(|i| g.rho1 * columns[2].1[i] + c1 * u1[i])
            .collect();
        let w2: Vec<f64> = (0..n)
            .map(|i| g.rho2 * columns[3].1[i] + c2 * u2[i])
            .collect();
        let s1: Vec<f64> = (0..n)
            .map(|i| h21 * (columns[0].1[i] + g.eta1 * w1[i]))
            .collect();
        let s2: Vec<f64> = (0..n)
            .map(|i| h12 * (columns[1].1[i] + g.eta2 * w2[i]))
            .collect();
        columns.push((vars::W1, w1));
        columns.push((vars::W2, w2));
        columns.push((vars::Y1, y1));
        columns.push((vars::Y2, y2));
        columns.push((vars::S1, s1));
        columns.push((vars::S2, s2));
    } else {
        columns.push((vars::Y1, y1));
        columns.push((vars::Y2, y2));
    }
    Ok(SampleBatch {
        n,
        seed,
        params: *params,
        genie: genie.copied(),
        columns,
    })
}

/// Empirical mutual information and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub estimate: Rate,
    pub stderr: f64,
}

/// Plugs the sample covariance into the Gaussian closed form. The standard
/// error is the spread of the estimates over [`FOLDS`] contiguous folds
/// divided by `sqrt(FOLDS)`.
pub fn empirical_mi(batch: &SampleBatch, target: &str, observed: &[&str]) -> Result<MiEstimate> {
    if batch.n < 2 * FOLDS {
        return Err(Error::DegenerateBatch(format!(
            "need at least {} rows, got {}",
            2 * FOLDS,
            batch.n
        )));
    }
    let mut names = vec![target];
    names.extend_from_slice(observed);
    let degenerate = |e: Error| match e {
        Error::DegenerateObservation(m) => Error::DegenerateBatch(m),
        other => other,
    };
    let full = batch.covariance_of(&names, 0..batch.n)?;
    let estimate = mi_det(&full, target, observed).map_err(degenerate)?;

    let fold_len = batch.n / FOLDS;
    let mut folds = Vec::with_capacity(FOLDS);
    for k in 0..FOLDS {
        let end = if k == FOLDS - 1 {
            batch.n
        } else {
            (k + 1) * fold_len
        };
        let cov = batch.covariance_of(&names, k * fold_len..end)?;
        folds.push(mi_det(&cov, target, observed).map_err(degenerate)?.bits());
    }
    let mean = folds.iter().sum::<f64>() / FOLDS as f64;
    let var = folds.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (FOLDS - 1) as f64;
    Ok(MiEstimate {
        estimate,
        stderr: (var / FOLDS as f64).sqrt(),
    })
}

/// Standard error of a sample covariance entry for Gaussian data:
/// `sqrt((Σ_ii Σ_jj + Σ_ij²) / n)`.
pub fn covariance_stderr(analytic: &GaussianVector, a: &str, b: &str, n: usize) -> Result<f64> {
    let (vaa, vbb, vab) = (
        analytic.variance(a)?,
        analytic.variance(b)?,
        analytic.covariance(a, b)?,
    );
    Ok(((vaa * vbb + vab * vab) / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_symmetric;
    use crate::regime::construct_genie;

    #[test]
    fn same_seed_same_batch() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let g = construct_genie(&c).unwrap();
        assert_eq!(
            sample(&c, Some(&g), 500, 7).unwrap(),
            sample(&c, Some(&g), 500, 7).unwrap()
        );
        assert_ne!(
            sample(&c, Some(&g), 500, 7).unwrap(),
            sample(&c, Some(&g), 500, 8).unwrap()
        );
    }

    #[test]
    fn full_correlation_copies_noise() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let g = GenieSpec::symmetric(1.0, 1.0).unwrap();
        let b = sample(&c, Some(&g), 1000, 3).unwrap();
        assert_eq!(b.column(vars::W1).unwrap(), b.column(vars::Z1).unwrap());
        assert_eq!(b.column(vars::W2).unwrap(), b.column(vars::Z2).unwrap());
    }

    #[test]
    fn outputs_recompute_bit_exactly() {
        let c = ChannelParams::new(3.0, 7.0, 0.3, -0.2).unwrap();
        let g = GenieSpec::new(1.3, 0.4, 2.0, 0.6).unwrap();
        let b = sample(&c, Some(&g), 200, 11).unwrap();
        let col = |n| b.column(n).unwrap();
        for i in 0..b.n {
            assert_eq!(
                col(vars::Y1)[i],
                col(vars::X1)[i] + 0.3 * col(vars::X2)[i] + col(vars::Z1)[i]
            );
            assert_eq!(
                col(vars::Y2)[i],
                col(vars::X2)[i] + -0.2 * col(vars::X1)[i] + col(vars::Z2)[i]
            );
            assert_eq!(
                col(vars::S1)[i],
                -0.2 * (col(vars::X1)[i] + 1.3 * col(vars::W1)[i])
            );
            assert_eq!(
                col(vars::S2)[i],
                0.3 * (col(vars::X2)[i] + 2.0 * col(vars::W2)[i])
            );
        }
    }

    #[test]
    fn genie_does_not_change_shared_columns() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let g = construct_genie(&c).unwrap();
        let with = sample(&c, Some(&g), 100, 5).unwrap();
        let without = sample(&c, None, 100, 5).unwrap();
        for name in [vars::X1, vars::X2, vars::Z1, vars::Z2, vars::Y1, vars::Y2] {
            assert_eq!(with.column(name).unwrap(), without.column(name).unwrap());
        }
        assert!(without.column(vars::S1).is_err());
    }

    #[test]
    fn empty_and_tiny_batches() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        assert_eq!(sample(&c, None, 0, 1), Err(Error::EmptyBatch));
        let b = sample(&c, None, 5, 1).unwrap();
        assert!(matches!(
            empirical_mi(&b, vars::X1, &[vars::Y1]),
            Err(Error::DegenerateBatch(_))
        ));
    }

    #[test]
    fn zero_side_information_is_degenerate() {
        let c = ChannelParams::new(10.0, 10.0, 0.5, 0.0).unwrap();
        let g = GenieSpec::symmetric(1.0, 0.5).unwrap();
        let b = sample(&c, Some(&g), 1000, 1).unwrap();
        assert!(matches!(
            empirical_mi(&b, vars::X1, &[vars::Y1, vars::S1]),
            Err(Error::DegenerateBatch(_))
        ));
    }

    #[test]
    fn uniform_stays_open() {
        let mut s = GaussianStream::new(0);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let c = make_symmetric(10.0, 0.25).unwrap();
        let b = sample(&c, None, 3, 1).unwrap();
        let mut out = Vec::new();
        b.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "X1,X2,Z1,Z2,Y1,Y2");
        assert_eq!(lines.len(), 4);
        let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
        assert_eq!(first, b.column(vars::X1).unwrap()[0]);
    }
}
