//! Command-line front end. [`run`] does the work so it can be driven from
//! tests; the `gic` binary only forwards process arguments and streams.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{all_bounds, tin_sum_rate, BoundSet};
use crate::channel::{db_to_linear, ChannelParams, Rate};
use crate::error::{Error, Result};
use crate::format::{full, short};
use crate::gaussmi::genie_aided_sum_rate;
use crate::geometry::{tangent_bound, to_polar, TangentBound};
use crate::montecarlo::sample;
use crate::regime::{classify, construct_genie, GenieSpec, RegimeKind, RegimeLabel};
use crate::verify::{VerifyConfig, DEFAULT_SEED, DEFAULT_TRIALS, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gic",
    version,
    about = "Sum-capacity bounds for the two-user Gaussian interference channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every bound for one channel.
    Bounds(BoundsArgs),
    /// Tabulate the bounds over a grid of cross gains.
    Sweep(SweepArgs),
    /// Construct and check the low-interference genie.
    Genie(GenieArgs),
    /// Run the cross-oracle verification suites.
    Verify(VerifyArgs),
    /// Dump seeded channel samples as CSV.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Transmit power of both users, linear scale.
    #[arg(long, conflicts_with_all = ["p_db", "p1", "p2"])]
    pub p: Option<f64>,
    /// Transmit power of both users in dB.
    #[arg(long = "p-db", allow_negative_numbers = true, conflicts_with_all = ["p1", "p2"])]
    pub p_db: Option<f64>,
    #[arg(long, requires = "p2")]
    pub p1: Option<f64>,
    #[arg(long, requires = "p1")]
    pub p2: Option<f64>,
}

impl PowerArgs {
    fn resolve(&self) -> Result<(f64, f64)> {
        match (self.p, self.p_db, self.p1, self.p2) {
            (Some(p), None, None, None) => Ok((p, p)),
            (None, Some(db), None, None) => {
                let p = db_to_linear(db);
                Ok((p, p))
            }
            (None, None, Some(p1), Some(p2)) => Ok((p1, p2)),
            _ => Err(Error::InvalidParameter {
                name: "power",
                reason: "give exactly one of --p, --p-db or --p1/--p2".into(),
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct GainArgs {
    /// Cross gain of both links.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["h12", "h21"])]
    pub h: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "h21")]
    pub h12: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "h12")]
    pub h21: Option<f64>,
}

impl GainArgs {
    fn resolve(&self) -> Result<(f64, f64)> {
        match (self.h, self.h12, self.h21) {
            (Some(h), None, None) => Ok((h, h)),
            (None, Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidParameter {
                name: "gain",
                reason: "give --h or --h12/--h21".into(),
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[command(flatten)]
    pub power: PowerArgs,
    #[command(flatten)]
    pub gain: GainArgs,
}

impl ChannelArgs {
    fn params(&self) -> Result<ChannelParams> {
        let (p1, p2) = self.power.resolve()?;
        let (h12, h21) = self.gain.resolve()?;
        ChannelParams::new(p1, p2, h12, h21)
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub power: PowerArgs,
    #[arg(long = "h-from", allow_negative_numbers = true)]
    pub h_from: f64,
    #[arg(long = "h-to", allow_negative_numbers = true)]
    pub h_to: f64,
    #[arg(long = "h-step", allow_negative_numbers = true)]
    pub h_step: f64,
    /// Hold h21 fixed and sweep h12 only.
    #[arg(long, allow_negative_numbers = true)]
    pub h21: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: SweepFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GenieArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Also treat the orthogonal-signalling rate as a lower bound.
    #[arg(long)]
    pub strict: bool,
    /// Run only the named suites.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Leave out the genie side information.
    #[arg(long)]
    pub no_genie: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Genie(a) => cmd_genie(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sample(a) => cmd_sample(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidParameter { .. } => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Internal(format!("write failed: {e}"))
}

fn opt(r: Option<Rate>) -> String {
    r.map(|r| short(r.bits())).unwrap_or_else(|| "-".into())
}

fn describe_channel(c: &ChannelParams) -> String {
    format!("P1={} P2={} h12={} h21={}", c.p1, c.p2, c.h12, c.h21)
}

fn describe_regime(r: &RegimeLabel) -> String {
    let rel = if r.kind == RegimeKind::LowInterferenceExact {
        "<="
    } else {
        ">"
    };
    format!(
        "{} (condition {} {rel} {})",
        r.kind.as_str(),
        short(r.condition_value),
        short(r.threshold)
    )
}

#[derive(Serialize)]
struct BoundsReport<'a> {
    params: &'a ChannelParams,
    #[serde(flatten)]
    bounds: &'a BoundSet,
}

pub fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    let c = args.channel.params()?;
    let b = all_bounds(&c)?;
    match args.format {
        Format::Json => {
            let s = serde_json::to_string_pretty(&BoundsReport {
                params: &c,
                bounds: &b,
            })
            .map_err(|e| Error::Internal(e.to_string()))?;
            writeln!(out, "{s}").map_err(io_err)?;
        }
        Format::Text => {
            let rows = [
                ("channel", describe_channel(&c)),
                ("regime", describe_regime(&b.regime)),
                ("tin_lower", opt(Some(b.tin_lower))),
                ("ortho_lower", opt(b.ortho_lower)),
                ("onebit_upper", opt(b.onebit_upper)),
                ("kramer_upper", opt(b.kramer_upper)),
                ("tangent_upper", opt(b.tangent_upper)),
                ("genie_upper", opt(b.genie_upper)),
                ("exact_capacity", opt(b.exact_capacity)),
            ];
            for (k, v) in rows {
                writeln!(out, "{k:<16}{v}").map_err(io_err)?;
            }
            writeln!(out, "(rates are sum rates in bits per channel use)").map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

/// Grid points `from, from + step, ..` up to `to` inclusive, with a small
/// allowance so that a `to` hit up to rounding is kept.
pub fn sweep_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    let bad = |reason: &str| Error::InvalidParameter {
        name: "grid",
        reason: reason.into(),
    };
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(bad("grid bounds must be finite"));
    }
    if step <= 0.0 {
        return Err(bad("--h-step must be positive"));
    }
    if to < from {
        return Err(bad("--h-to is below --h-from"));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| from + k as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: ChannelParams,
    pub bounds: BoundSet,
}

pub fn sweep_rows(
    power: (f64, f64),
    grid: &[f64],
    fixed_h21: Option<f64>,
) -> Result<Vec<SweepRow>> {
    let params: Vec<ChannelParams> = grid
        .iter()
        .map(|&h| ChannelParams::new(power.0, power.1, h, fixed_h21.unwrap_or(h)))
        .collect::<Result<_>>()?;
    // Rows are independent; compute them in parallel and keep grid order.
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(params.len().max(1));
    let chunk = params.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = params
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|c| all_bounds(c).map(|bounds| SweepRow { params: *c, bounds }))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut rows = Vec::with_capacity(params.len());
        for h in handles {
            rows.extend(
                h.join()
                    .map_err(|_| Error::Internal("sweep worker panicked".into()))??,
            );
        }
        Ok(rows)
    })
}

const BOUND_COLUMNS: [&str; 8] = [
    "tin_lower",
    "ortho_lower",
    "onebit_upper",
    "kramer_upper",
    "tangent_upper",
    "exact_capacity",
    "regime",
    "genie_upper",
];

fn symmetric_sweep(power: (f64, f64), fixed_h21: Option<f64>) -> bool {
    power.0 == power.1 && fixed_h21.is_none()
}

pub fn write_sweep_csv(rows: &[SweepRow], symmetric: bool, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    let mut header: Vec<&str> = if symmetric {
        vec!["h", "p"]
    } else {
        vec!["h12", "h21", "p1", "p2"]
    };
    header.extend(BOUND_COLUMNS);
    w.write_record(&header).map_err(csv_err)?;
    let cell = |r: Option<Rate>| r.map(|r| full(r.bits())).unwrap_or_default();
    for row in rows {
        let c = &row.params;
        let b = &row.bounds;
        let mut rec: Vec<String> = if symmetric {
            vec![full(c.h12), full(c.p1)]
        } else {
            vec![full(c.h12), full(c.h21), full(c.p1), full(c.p2)]
        };
        rec.extend([
            cell(Some(b.tin_lower)),
            cell(b.ortho_lower),
            cell(b.onebit_upper),
            cell(b.kramer_upper),
            cell(b.tangent_upper),
            cell(b.exact_capacity),
            b.regime.kind.as_str().to_string(),
            cell(b.genie_upper),
        ]);
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h12: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p2: Option<f64>,
    tin_lower: Rate,
    ortho_lower: Option<Rate>,
    onebit_upper: Option<Rate>,
    kramer_upper: Option<Rate>,
    tangent_upper: Option<Rate>,
    exact_capacity: Option<Rate>,
    regime: RegimeKind,
    genie_upper: Option<Rate>,
}

pub fn write_sweep_json(rows: &[SweepRow], symmetric: bool, out: &mut dyn Write) -> Result<()> {
    let json: Vec<JsonRow> = rows
        .iter()
        .map(|r| {
            let (c, b) = (&r.params, &r.bounds);
            let (sym, asym) = (symmetric.then_some(()), (!symmetric).then_some(()));
            JsonRow {
                h: sym.map(|_| c.h12),
                p: sym.map(|_| c.p1),
                h12: asym.map(|_| c.h12),
                h21: asym.map(|_| c.h21),
                p1: asym.map(|_| c.p1),
                p2: asym.map(|_| c.p2),
                tin_lower: b.tin_lower,
                ortho_lower: b.ortho_lower,
                onebit_upper: b.onebit_upper,
                kramer_upper: b.kramer_upper,
                tangent_upper: b.tangent_upper,
                exact_capacity: b.exact_capacity,
                regime: b.regime.kind,
                genie_upper: b.genie_upper,
            }
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &json).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

fn with_output(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::InvalidParameter {
                name: "out",
                reason: format!("cannot create {}: {e}", p.display()),
            })?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(io_err)
        }
        None => f(out),
    }
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let power = args.power.resolve()?;
    let grid = sweep_grid(args.h_from, args.h_to, args.h_step)?;
    let rows = sweep_rows(power, &grid, args.h21)?;
    let symmetric = symmetric_sweep(power, args.h21);
    with_output(&args.out, out, |w| match args.format {
        SweepFormat::Csv => write_sweep_csv(&rows, symmetric, w),
        SweepFormat::Json => write_sweep_json(&rows, symmetric, w),
    })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct GenieReport {
    pub params: ChannelParams,
    pub regime: RegimeLabel,
    pub certificate: bool,
    pub genie: Option<GenieSpec>,
    pub polar_eta: Option<f64>,
    pub polar_theta: Option<f64>,
    pub useful_residuals: Option<(f64, f64)>,
    pub smart_residuals: Option<(f64, f64)>,
    pub genie_aided_sum_rate: Option<Rate>,
    pub tin_sum_rate: Rate,
    pub tangent_upper: Option<Rate>,
    pub note: Option<String>,
}

pub fn genie_report(c: &ChannelParams) -> Result<GenieReport> {
    let regime = classify(c);
    let mut report = GenieReport {
        params: *c,
        regime,
        certificate: false,
        genie: None,
        polar_eta: None,
        polar_theta: None,
        useful_residuals: None,
        smart_residuals: None,
        genie_aided_sum_rate: None,
        tin_sum_rate: tin_sum_rate(c),
        tangent_upper: None,
        note: None,
    };
    if c.h12 == 0.0 && c.h21 == 0.0 {
        report.note = Some("trivial regime, no genie needed".into());
        return Ok(report);
    }
    if let Some(g) = construct_genie(c) {
        report.certificate = true;
        report.genie = Some(g);
        if let Ok(q) = to_polar(&g, c) {
            report.polar_eta = Some(q.eta);
            report.polar_theta = Some(q.theta);
        }
        report.useful_residuals = Some(g.useful_residuals(c));
        report.smart_residuals = Some(g.smart_residuals(c));
        report.genie_aided_sum_rate = Some(genie_aided_sum_rate(c, &g)?);
        return Ok(report);
    }
    if regime.kind == RegimeKind::LowInterferenceExact {
        report.note = Some(
            "one cross gain is zero; treating interference as noise is optimal without a genie"
                .into(),
        );
        return Ok(report);
    }
    report.note = Some("no certificate: the low-interference condition fails".into());
    if let Ok(TangentBound { rate, .. }) = tangent_bound(c) {
        report.tangent_upper = Some(rate);
    }
    Ok(report)
}

fn pair(p: Option<(f64, f64)>) -> String {
    p.map(|(a, b)| format!("{} {}", short(a), short(b)))
        .unwrap_or_else(|| "-".into())
}

pub fn cmd_genie(args: &GenieArgs, out: &mut dyn Write) -> Result<i32> {
    let c = args.channel.params()?;
    let r = genie_report(&c)?;
    if args.format == Format::Json {
        let s = serde_json::to_string_pretty(&r).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(out, "{s}").map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    let mut lines = vec![
        ("channel", describe_channel(&c)),
        ("regime", describe_regime(&r.regime)),
    ];
    if let Some(note) = &r.note {
        lines.push(("status", note.clone()));
    }
    if let Some(g) = r.genie {
        lines.push(("status", "certificate found".into()));
        lines.push(("eta1 rho1", format!("{} {}", short(g.eta1), short(g.rho1))));
        lines.push(("eta2 rho2", format!("{} {}", short(g.eta2), short(g.rho2))));
        if let (Some(e), Some(t)) = (r.polar_eta, r.polar_theta) {
            lines.push(("polar eta theta", format!("{} {}", short(e), short(t))));
        }
        lines.push(("useful residual", pair(r.useful_residuals)));
        lines.push(("smart residual", pair(r.smart_residuals)));
        lines.push(("genie sum rate", opt(r.genie_aided_sum_rate)));
    }
    lines.push(("tin sum rate", opt(Some(r.tin_sum_rate))));
    if !r.certificate && r.regime.kind == RegimeKind::AboveThreshold {
        let t = r
            .tangent_upper
            .map(|t| short(t.bits()))
            .unwrap_or_else(|| "unavailable for asymmetric channels".into());
        lines.push(("tangent bound", t));
    }
    for (k, v) in lines {
        writeln!(out, "{k:<18}{v}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = VerifyConfig {
        seed: args.seed,
        trials: args.trials,
        strict: args.strict,
    };
    for name in &args.suites {
        if !SUITES.iter().any(|(n, _)| n == name) {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            return Err(Error::InvalidParameter {
                name: "suite",
                reason: format!("unknown suite {name}; known: {}", known.join(", ")),
            });
        }
    }
    writeln!(out, "verify seed={} trials={}", cfg.seed, cfg.trials).map_err(io_err)?;
    let start = Instant::now();
    let mut failed = 0;
    for (name, suite) in SUITES {
        if !args.suites.is_empty() && !args.suites.iter().any(|s| s == name) {
            continue;
        }
        let t0 = Instant::now();
        let report = suite(&cfg);
        writeln!(out, "{report} [{:.2}s]", t0.elapsed().as_secs_f64()).map_err(io_err)?;
        out.flush().map_err(io_err)?;
        if !report.passed() {
            failed += 1;
        }
    }
    let verdict = if failed == 0 {
        "all suites passed"
    } else {
        "FAILED"
    };
    writeln!(
        out,
        "{verdict}: {failed} failing suite(s) in {:.2}s",
        start.elapsed().as_secs_f64()
    )
    .map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_sample(args: &SampleArgs, out: &mut dyn Write) -> Result<i32> {
    let c = args.channel.params()?;
    let genie = if args.no_genie {
        None
    } else {
        construct_genie(&c).or_else(|| tangent_bound(&c).and_then(|t| t.genie(&c)).ok())
    };
    let batch = sample(&c, genie.as_ref(), args.n, args.seed)?;
    with_output(&args.out, out, |w| batch.write_csv(w))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("gic").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn grid_counts() {
        assert_eq!(sweep_grid(0.0, 1.0, 0.01).unwrap().len(), 101);
        assert_eq!(sweep_grid(0.0, 0.5, 2.0).unwrap(), vec![0.0]);
        assert!(sweep_grid(1.0, 0.0, 0.1).is_err());
        assert!(sweep_grid(0.0, 1.0, 0.0).is_err());
        assert!(sweep_grid(0.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn conflicting_power_flags_are_usage_errors() {
        let (code, _, err) = run_str(&["bounds", "--p", "10", "--p-db", "10", "--h", "0.2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cannot be used with"));
    }

    #[test]
    fn missing_power_is_usage_error() {
        assert_eq!(run_str(&["bounds", "--h", "0.2"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["bounds", "--p", "-1", "--h", "0.2"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn negative_gain_accepted() {
        let (code, out, _) = run_str(&["bounds", "--p", "10", "--h", "-0.25"]);
        assert_eq!(code, 0);
        assert!(out.contains("2.838"));
    }

    #[test]
    fn genie_text_variants() {
        let (_, out, _) = run_str(&["genie", "--p", "10", "--h", "0.25"]);
        assert!(out.contains("certificate found"), "{out}");
        let (_, out, _) = run_str(&["genie", "--p", "10", "--h", "1"]);
        assert!(
            out.contains("no certificate") && out.contains("tangent bound"),
            "{out}"
        );
        let (_, out, _) = run_str(&["genie", "--p", "10", "--h", "0"]);
        assert!(out.contains("trivial regime, no genie needed"), "{out}");
    }

    #[test]
    fn unknown_suite_rejected() {
        assert_eq!(run_str(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sweep"));
    }
}
