//! Command-line front end: simulate the stochastic oscillation models,
//! diagnose the mechanism behind a recorded channel, rank channels by
//! signature strength, and export spectra / kurtosis traces.
//!
//! Exit codes: 0 success; 2 input could not be read or parsed; 3 a
//! precondition failed (bad parameters, too little data, degenerate input);
//! 10 the diagnosis ran but was inconclusive (the report is still written).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use oscillodx::classifier::{
    bootstrap_kurtosis_ci, classify, monte_carlo_kurtosis, DiagnosisConfig, Verdict,
};
use oscillodx::io::{
    add_measurement_noise, read_record_csv, sha256_hex_of_file, write_record_csv,
    write_spectrum_csv, write_trace_csv, InputDigest, NoiseSpec, RunManifest,
};
use oscillodx::localize::rank_sources;
use oscillodx::models::{
    simulate, ForcedParams, LimitCycleParams, Model, OrnsteinUhlenbeckParams, SimConfig,
    WeaklyDampedParams,
};
use oscillodx::stats::{excess_kurtosis, moving_kurtosis, welch_psd, Taper, MIN_SEGMENT_LEN};
use oscillodx::{Error, MultiChannelRecord, Result};

/// Writes one line to stdout. A consumer that stops reading early
/// (`oscillodx ... | head`) closes the pipe; that ends the program quietly
/// with code 0 instead of panicking. Any other stdout failure is a real
/// I/O error.
fn print_line(args: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let res = out.write_fmt(args).and_then(|()| out.write_all(b"\n"));
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(3);
    }
}

/// `println!` that survives a closed stdout pipe; see [`print_line`].
macro_rules! outln {
    ($($arg:tt)*) => { print_line(format_args!($($arg)*)) };
}

#[derive(Parser)]
#[command(
    name = "oscillodx",
    version,
    about = "Simulate noisy planar oscillations and diagnose their mechanism",
    long_about = "Simulates three stochastic oscillation mechanisms (noise-driven damped \
                  ringing, a stochastic limit cycle, and a periodically forced mode) plus an \
                  Ornstein-Uhlenbeck null model, and analyzes recorded channels: excess \
                  kurtosis separates noise-sustained from self-sustained or driven rhythms, \
                  and the spectral linewidth separates a drive line from an intrinsically \
                  broadened one. Every file written gets a .manifest.json sidecar with the \
                  exact command, resolved parameters, and input digests."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a model and write the record as CSV
    Simulate(SimulateArgs),
    /// Classify the oscillation mechanism of one channel
    Diagnose(DiagnoseArgs),
    /// Rank channels by |excess kurtosis| to localize the source
    Locate(LocateArgs),
    /// Welch power spectral density of one channel
    Psd(PsdArgs),
    /// Excess kurtosis of one channel: point estimate or moving trace
    Kurtosis(KurtosisArgs),
    /// Kurtosis spread over many simulation replicates
    Montecarlo(MonteCarloArgs),
}

/// `t0:t1` time window, seconds.
#[derive(Debug, Clone, Copy)]
struct Window {
    start: f64,
    end: f64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected START:END, got {s:?}"))?;
        let start: f64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
        let end: f64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(format!("window must satisfy start < end, got {start}:{end}"));
        }
        Ok(Window { start, end })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    /// Damped linear mode kept ringing by noise
    WeaklyDamped,
    /// Self-sustained stochastic limit cycle
    LimitCycle,
    /// Damped mode under a periodic external drive
    Forced,
    /// Ornstein-Uhlenbeck relaxation channels (no oscillation)
    Ou,
}

/// Model selection plus per-model parameters. Flags that do not apply to the
/// chosen model are rejected rather than silently ignored.
#[derive(Args)]
struct ModelArgs {
    /// Mechanism to simulate
    #[arg(long, value_enum)]
    model: ModelKind,

    /// Damping rate γ (weakly-damped, forced) [default: 0.02 / 1.0]
    #[arg(long)]
    damping: Option<f64>,

    /// Natural angular frequency ω₀, rad/s (weakly-damped, forced)
    /// [default: 0.3π / 0.2π]
    #[arg(long)]
    natural_freq: Option<f64>,

    /// Growth rate γ of the limit cycle (sets the orbit radius √γ)
    /// [default: 0.01]
    #[arg(long)]
    growth_rate: Option<f64>,

    /// Angular frequency of the limit cycle, rad/s [default: 0.3π]
    #[arg(long)]
    frequency: Option<f64>,

    /// Drive amplitude F (forced) [default: 0.1]
    #[arg(long)]
    forcing_amp: Option<f64>,

    /// Drive angular frequency Ω, rad/s (forced) [default: 0.3π]
    #[arg(long)]
    forcing_freq: Option<f64>,

    /// Noise intensity σ (all models)
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,

    /// Relaxation rates, one per channel (ou), comma-separated
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    decay_rates: Vec<f64>,
}

impl ModelArgs {
    fn build(&self) -> Result<Model> {
        use std::f64::consts::PI;

        let reject_unused = |flags: &[(&str, bool)]| -> Result<()> {
            for (name, given) in flags {
                if *given {
                    return Err(Error::InvalidParameter(format!(
                        "--{name} does not apply to --model {}",
                        match self.model {
                            ModelKind::WeaklyDamped => "weakly-damped",
                            ModelKind::LimitCycle => "limit-cycle",
                            ModelKind::Forced => "forced",
                            ModelKind::Ou => "ou",
                        }
                    )));
                }
            }
            Ok(())
        };

        match self.model {
            ModelKind::WeaklyDamped => {
                reject_unused(&[
                    ("growth-rate", self.growth_rate.is_some()),
                    ("frequency", self.frequency.is_some()),
                    ("forcing-amp", self.forcing_amp.is_some()),
                    ("forcing-freq", self.forcing_freq.is_some()),
                ])?;
                Ok(Model::WeaklyDamped(WeaklyDampedParams {
                    damping: self.damping.unwrap_or(0.02),
                    natural_freq: self.natural_freq.unwrap_or(0.3 * PI),
                    noise_intensity: self.sigma,
                }))
            }
            ModelKind::LimitCycle => {
                reject_unused(&[
                    ("damping", self.damping.is_some()),
                    ("natural-freq", self.natural_freq.is_some()),
                    ("forcing-amp", self.forcing_amp.is_some()),
                    ("forcing-freq", self.forcing_freq.is_some()),
                ])?;
                Ok(Model::LimitCycle(LimitCycleParams {
                    growth_rate: self.growth_rate.unwrap_or(0.01),
                    frequency: self.frequency.unwrap_or(0.3 * PI),
                    noise_intensity: self.sigma,
                }))
            }
            ModelKind::Forced => {
                reject_unused(&[
                    ("growth-rate", self.growth_rate.is_some()),
                    ("frequency", self.frequency.is_some()),
                ])?;
                Ok(Model::Forced(ForcedParams {
                    damping: self.damping.unwrap_or(1.0),
                    natural_freq: self.natural_freq.unwrap_or(0.2 * PI),
                    forcing_amp: self.forcing_amp.unwrap_or(0.1),
                    forcing_freq: self.forcing_freq.unwrap_or(0.3 * PI),
                    noise_intensity: self.sigma,
                }))
            }
            ModelKind::Ou => {
                reject_unused(&[
                    ("damping", self.damping.is_some()),
                    ("natural-freq", self.natural_freq.is_some()),
                    ("growth-rate", self.growth_rate.is_some()),
                    ("frequency", self.frequency.is_some()),
                    ("forcing-amp", self.forcing_amp.is_some()),
                    ("forcing-freq", self.forcing_freq.is_some()),
                ])?;
                Ok(Model::OrnsteinUhlenbeck(OrnsteinUhlenbeckParams {
                    decay_rates: self.decay_rates.clone(),
                    noise_intensity: self.sigma,
                }))
            }
        }
    }
}

/// Integration grid, recording plan, and RNG identity.
#[derive(Args)]
struct SimArgs {
    /// Integration step, seconds
    #[arg(long, default_value_t = 0.01)]
    dt: f64,

    /// Recorded duration after burn-in, seconds
    #[arg(long, default_value_t = 600.0)]
    duration: f64,

    /// Transient discarded before recording, seconds
    #[arg(long, default_value_t = 100.0)]
    burn_in: f64,

    /// Keep every k-th integration step
    #[arg(long, default_value_t = 10)]
    stride: usize,

    /// RNG seed; same (seed, stream) → identical record
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// RNG stream, for independent replicates under one seed
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            dt: self.dt,
            duration: self.duration,
            burn_in: self.burn_in,
            stride: self.stride,
            seed: self.seed,
            stream: self.stream,
        }
    }
}

/// Shared input handling for the analysis commands: CSV in, optional time
/// window, optional synthetic sensor noise.
#[derive(Args)]
struct InputArgs {
    /// Input record: `time,<label>,...` CSV ('#' comments allowed)
    input: PathBuf,

    /// Restrict analysis to START:END seconds (applied before noise)
    #[arg(long)]
    window: Option<Window>,

    /// Add i.i.d. Gaussian sensor noise of this standard deviation
    #[arg(long, default_value_t = 0.0)]
    noise_std: f64,

    /// Seed for noise injection and bootstrap resampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputArgs {
    fn load(&self) -> Result<MultiChannelRecord> {
        let mut record = read_record_csv(&self.input)?;
        if let Some(w) = self.window {
            record = record.window(w.start, w.end)?;
        }
        add_measurement_noise(
            record,
            &NoiseSpec {
                std_dev: self.noise_std,
                seed: self.seed,
            },
        )
    }

    fn digest(&self) -> Result<InputDigest> {
        Ok(InputDigest {
            path: self.input.display().to_string(),
            sha256: sha256_hex_of_file(&self.input)?,
        })
    }

    fn params_json(&self) -> serde_json::Value {
        serde_json::json!({
            "window": self.window.map(|w| [w.start, w.end]),
            "noise_std": self.noise_std,
            "seed": self.seed,
        })
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    sim: SimArgs,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaperArg {
    Hann,
    Rectangular,
}

impl From<TaperArg> for Taper {
    fn from(t: TaperArg) -> Taper {
        match t {
            TaperArg::Hann => Taper::Hann,
            TaperArg::Rectangular => Taper::Rectangular,
        }
    }
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Channel to classify [default: first channel]
    #[arg(long)]
    channel: Option<String>,

    /// Gaussian band half-width: |kurtosis| below this reads as
    /// noise-sustained ringing
    #[arg(long, default_value_t = 0.45)]
    epsilon: f64,

    /// Lines broader than this many resolution bandwidths read as
    /// intrinsically broadened
    #[arg(long, default_value_t = 3.0)]
    bw_ratio_max: f64,

    /// Minimum peak-to-floor ratio (dB) to count as an oscillation
    #[arg(long, default_value_t = 10.0)]
    snr_min_db: f64,

    /// Bootstrap replicates for the kurtosis interval
    #[arg(long, default_value_t = 200)]
    bootstrap_reps: usize,

    /// Two-sided bootstrap confidence level
    #[arg(long, default_value_t = 0.90)]
    ci_level: f64,

    /// Welch segment length as a fraction of the record
    #[arg(long, default_value_t = 0.125)]
    segment_fraction: f64,

    /// Welch segment overlap fraction
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,

    /// Welch taper
    #[arg(long, value_enum, default_value_t = TaperArg::Hann)]
    taper: TaperArg,

    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LocateArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Rankings whose top |kurtosis| stays below this are flagged
    /// non-informative
    #[arg(long, default_value_t = 0.45)]
    epsilon: f64,

    /// Write the JSON ranking here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PsdArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Channel to analyze [default: first channel]
    #[arg(long)]
    channel: Option<String>,

    /// Welch segment length in samples (overrides --segment-fraction)
    #[arg(long)]
    segment_len: Option<usize>,

    /// Welch segment length as a fraction of the record
    #[arg(long, default_value_t = 0.125)]
    segment_fraction: f64,

    /// Welch segment overlap fraction
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,

    /// Welch taper
    #[arg(long, value_enum, default_value_t = TaperArg::Hann)]
    taper: TaperArg,

    /// Output CSV path (frequency_hz, psd columns)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KurtosisArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Channel to analyze [default: first channel]
    #[arg(long)]
    channel: Option<String>,

    /// Compute a moving trace with this window length (seconds) instead of
    /// a point estimate
    #[arg(long)]
    moving: Option<f64>,

    /// Hop between moving windows, seconds [default: window / 4]
    #[arg(long)]
    hop: Option<f64>,

    /// Bootstrap replicates for the point-estimate interval
    #[arg(long, default_value_t = 200)]
    bootstrap_reps: usize,

    /// Two-sided bootstrap confidence level
    #[arg(long, default_value_t = 0.90)]
    ci_level: f64,

    /// Point mode: write the JSON report here instead of stdout.
    /// Moving mode: write the trace CSV here (required).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    sim: SimArgs,

    /// Number of replicates (RNG streams stream..stream+runs)
    #[arg(long, default_value_t = 100)]
    runs: usize,

    /// Central interval level to report
    #[arg(long, default_value_t = 0.90)]
    interval_level: f64,

    /// Write the JSON summary here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct KurtosisReport {
    schema: &'static str,
    channel: String,
    window: [f64; 2],
    samples: usize,
    excess_kurtosis: f64,
    kurtosis_ci: [f64; 2],
    ci_level: f64,
    block_len: usize,
}

#[derive(Serialize)]
struct MonteCarloReport {
    schema: &'static str,
    model: Model,
    sim: SimConfig,
    runs: usize,
    interval_level: f64,
    lower: f64,
    upper: f64,
    values: Vec<f64>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_parse_error() {
                2
            } else {
                3
            }
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Simulate(args) => run_simulate(args),
        Command::Diagnose(args) => run_diagnose(args),
        Command::Locate(args) => run_locate(args),
        Command::Psd(args) => run_psd(args),
        Command::Kurtosis(args) => run_kurtosis(args),
        Command::Montecarlo(args) => run_montecarlo(args),
    }
}

/// Serializes `report` pretty-printed to `out`, or to stdout when `out` is
/// None. File outputs get a manifest sidecar; stdout gets none.
fn emit_json<T: Serialize>(
    report: &T,
    out: Option<&Path>,
    parameters: serde_json::Value,
    inputs: Vec<InputDigest>,
) -> Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    match out {
        None => {
            outln!("{json}");
        }
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))?;
            let manifest = RunManifest::new(parameters, inputs, &[path]);
            let mpath = manifest.write_beside(path)?;
            eprintln!("wrote {} and {}", path.display(), mpath.display());
        }
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<i32> {
    let model = args.model.build()?;
    let cfg = args.sim.config();
    let record = simulate(&model, &cfg)?;
    write_record_csv(&args.out, &record)?;

    let parameters = serde_json::json!({ "model": model, "sim": cfg });
    let manifest = RunManifest::new(parameters, Vec::new(), &[&args.out]);
    let mpath = manifest.write_beside(&args.out)?;

    let channels = record.channels();
    outln!(
        "wrote {} ({} channel(s) x {} samples, dt {} s) and {}",
        args.out.display(),
        channels.len(),
        channels[0].len(),
        channels[0].dt,
        mpath.display()
    );
    Ok(0)
}

/// First channel unless `--channel` picked one.
fn select_channel<'r>(
    record: &'r MultiChannelRecord,
    channel: Option<&str>,
) -> Result<&'r oscillodx::TimeSeries> {
    match channel {
        Some(label) => record.channel(label),
        None => Ok(&record.channels()[0]),
    }
}

fn run_diagnose(args: DiagnoseArgs) -> Result<i32> {
    let digest = args.input.digest()?;
    let record = args.input.load()?;
    let series = select_channel(&record, args.channel.as_deref())?;

    let cfg = DiagnosisConfig {
        kurtosis_epsilon: args.epsilon,
        spike_bw_ratio_max: args.bw_ratio_max,
        peak_snr_min_db: args.snr_min_db,
        bootstrap_reps: args.bootstrap_reps,
        ci_level: args.ci_level,
        bootstrap_seed: args.input.seed,
        segment_fraction: args.segment_fraction,
        overlap: args.overlap,
        taper: args.taper.into(),
        ..DiagnosisConfig::default()
    };
    let report = classify(series, &cfg)?;

    let mut parameters = args.input.params_json();
    parameters["channel"] = serde_json::json!(series.label);
    parameters["config"] = serde_json::to_value(&cfg)?;
    emit_json(&report, args.out.as_deref(), parameters, vec![digest])?;

    if args.out.is_some() {
        outln!(
            "{}: {} (excess kurtosis {:.4}, {:.0}% CI [{:.4}, {:.4}])",
            report.channel,
            report.verdict,
            report.excess_kurtosis,
            100.0 * report.ci_level,
            report.kurtosis_ci[0],
            report.kurtosis_ci[1]
        );
    }
    Ok(if report.verdict == Verdict::Inconclusive {
        10
    } else {
        0
    })
}

fn run_locate(args: LocateArgs) -> Result<i32> {
    let digest = args.input.digest()?;
    let record = args.input.load()?;
    let ranking = rank_sources(&record, args.epsilon)?;

    let mut parameters = args.input.params_json();
    parameters["epsilon"] = serde_json::json!(args.epsilon);
    emit_json(&ranking, args.out.as_deref(), parameters, vec![digest])?;

    if args.out.is_some() {
        for s in &ranking.scores {
            outln!(
                "{}. {}  |k| = {:.4} (k = {:.4})",
                s.rank, s.label, s.magnitude, s.excess_kurtosis
            );
        }
        if !ranking.informative {
            outln!("(no channel clears |k| >= {}; ranking is not informative)", args.epsilon);
        }
    }
    Ok(0)
}

fn run_psd(args: PsdArgs) -> Result<i32> {
    let digest = args.input.digest()?;
    let record = args.input.load()?;
    let series = select_channel(&record, args.channel.as_deref())?;

    let n = series.len();
    let segment_len = match args.segment_len {
        Some(len) => len,
        None => {
            ((n as f64 * args.segment_fraction).round() as usize).clamp(MIN_SEGMENT_LEN, n)
        }
    };
    let spectrum = welch_psd(series, segment_len, args.overlap, args.taper.into())?;
    write_spectrum_csv(&args.out, &spectrum)?;

    let mut parameters = args.input.params_json();
    parameters["channel"] = serde_json::json!(series.label);
    parameters["segment_len"] = serde_json::json!(segment_len);
    parameters["overlap"] = serde_json::json!(args.overlap);
    parameters["taper"] = serde_json::to_value(Taper::from(args.taper))?;
    let manifest = RunManifest::new(parameters, vec![digest], &[&args.out]);
    let mpath = manifest.write_beside(&args.out)?;

    outln!(
        "wrote {} ({} bins, resolution {:.6} Hz, {} segment(s)) and {}",
        args.out.display(),
        spectrum.freqs.len(),
        spectrum.resolution_bw,
        spectrum.segments,
        mpath.display()
    );
    Ok(0)
}

fn run_kurtosis(args: KurtosisArgs) -> Result<i32> {
    let digest = args.input.digest()?;
    let record = args.input.load()?;
    let series = select_channel(&record, args.channel.as_deref())?;

    match args.moving {
        Some(window_duration) => {
            let out = args.out.as_deref().ok_or_else(|| {
                Error::InvalidParameter("--moving mode writes a CSV trace; --out is required".into())
            })?;
            let hop = args.hop.unwrap_or(window_duration / 4.0);
            let trace = moving_kurtosis(series, window_duration, hop)?;
            write_trace_csv(out, &trace)?;

            let mut parameters = args.input.params_json();
            parameters["channel"] = serde_json::json!(series.label);
            parameters["moving"] = serde_json::json!(window_duration);
            parameters["hop"] = serde_json::json!(hop);
            let manifest = RunManifest::new(parameters, vec![digest], &[out]);
            let mpath = manifest.write_beside(out)?;
            outln!(
                "wrote {} ({} windows of {} s, hop {} s) and {}",
                out.display(),
                trace.values.len(),
                trace.window_duration,
                trace.hop,
                mpath.display()
            );
        }
        None => {
            if args.hop.is_some() {
                return Err(Error::InvalidParameter(
                    "--hop only applies together with --moving".into(),
                ));
            }
            let k = excess_kurtosis(&series.samples)?;
            let ci = bootstrap_kurtosis_ci(
                &series.samples,
                args.bootstrap_reps,
                args.ci_level,
                args.input.seed,
            )?;
            let report = KurtosisReport {
                schema: "kurtosis-report/v1",
                channel: series.label.clone(),
                window: [series.t0, series.time_at(series.len() - 1)],
                samples: series.len(),
                excess_kurtosis: k,
                kurtosis_ci: [ci.lower, ci.upper],
                ci_level: ci.level,
                block_len: ci.block_len,
            };
            let mut parameters = args.input.params_json();
            parameters["channel"] = serde_json::json!(series.label);
            parameters["bootstrap_reps"] = serde_json::json!(args.bootstrap_reps);
            parameters["ci_level"] = serde_json::json!(args.ci_level);
            emit_json(&report, args.out.as_deref(), parameters, vec![digest])?;
            if args.out.is_some() {
                outln!(
                    "{}: excess kurtosis {:.4} ({:.0}% CI [{:.4}, {:.4}], n = {})",
                    report.channel,
                    report.excess_kurtosis,
                    100.0 * report.ci_level,
                    report.kurtosis_ci[0],
                    report.kurtosis_ci[1],
                    report.samples
                );
            }
        }
    }
    Ok(0)
}

fn run_montecarlo(args: MonteCarloArgs) -> Result<i32> {
    let model = args.model.build()?;
    let cfg = args.sim.config();
    let summary = monte_carlo_kurtosis(&model, &cfg, args.runs, args.interval_level)?;

    let report = MonteCarloReport {
        schema: "montecarlo-report/v1",
        model: model.clone(),
        sim: cfg.clone(),
        runs: summary.runs,
        interval_level: summary.interval_level,
        lower: summary.lower,
        upper: summary.upper,
        values: summary.values,
    };
    let parameters = serde_json::json!({
        "model": model,
        "sim": cfg,
        "runs": args.runs,
        "interval_level": args.interval_level,
    });
    emit_json(&report, args.out.as_deref(), parameters, Vec::new())?;

    if args.out.is_some() {
        outln!(
            "{} runs: {:.0}% interval [{:.4}, {:.4}]",
            report.runs,
            100.0 * report.interval_level,
            report.lower,
            report.upper
        );
    }
    Ok(0)
}
