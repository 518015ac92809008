//! Command-line front end.
//!
//! Exit status: 0 on success, 2 when `detect` raises an alarm on any window,
//! 1 on usage or runtime errors. Every subcommand echoes its effective
//! configuration to stderr.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::attack::{AttackError, AttackKind, AttackName, AttackScenario};
use crate::detect::{
    calibrate_delta_threshold, judge_windows, retained_fraction, DetectError, Detector, DetectorConfig,
};
use crate::distortion::{inject, DistortedTrace, DistortionError, Epsilon, EpsilonChoice, DEFAULT_EPSILON_FRACTION};
use crate::eval::{required_samples, EvalError, Format, FpFnReport, Preset, SearchOptions, TablePlan, TraceSource};
use crate::pad::{generate_pad, load_pad, save_pad, PadError};
use crate::synth::{
    generate_gradual_trace, generate_solar_days, generate_uniform_trace, parse_kv, GradualModel, SolarModel,
};
use crate::trace::{delta_sequence, load_trace, trace_stats, write_values, ColumnSelector, SensorTrace, TraceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ALARM: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("input file {0} does not exist")]
    MissingInput(PathBuf),
    #[error("output directory for {0} does not exist")]
    MissingOutputDir(PathBuf),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Pad(#[from] PadError),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Parser)]
#[command(
    name = "microdistort",
    version,
    about = "Micro-distortion sensor authentication toolkit"
)]
struct Cli {
    /// Output table format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Tsv => Format::Tsv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum PresetArg {
    House,
    Solar,
    Uniform,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::House => Preset::House,
            PresetArg::Solar => Preset::Solar,
            PresetArg::Uniform => Preset::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModelArg {
    Uniform,
    Gradual,
    House,
    Solar,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum AlgoArg {
    Simple,
    Delta,
    Filtered,
}

impl From<AlgoArg> for Detector {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Simple => Detector::Simple,
            AlgoArg::Delta => Detector::Delta,
            AlgoArg::Filtered => Detector::Filtered,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum AttackArg {
    None,
    Eda,
    Rda,
    Flood,
}

impl From<AttackArg> for AttackName {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::None => AttackName::None,
            AttackArg::Eda => AttackName::Eda,
            AttackArg::Rda => AttackName::Rda,
            AttackArg::Flood => AttackName::Flood,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic trace as a one-column CSV.
    GenTrace(GenTraceArgs),
    /// Generate a one-time pad file.
    GenPad(GenPadArgs),
    /// Distort a trace with a pad.
    Inject(InjectArgs),
    /// Produce the stream an impersonator would send.
    Attack(AttackArgs),
    /// Judge a received stream window by window.
    Detect(DetectArgs),
    /// Derive Δ_th from attack-free history.
    Calibrate(CalibrateArgs),
    /// Monte Carlo FP/FN tables.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
struct TraceInput {
    /// CSV file with readings.
    #[arg(long)]
    trace: PathBuf,
    /// Column name or zero-based index.
    #[arg(long, default_value = "0")]
    column: ColumnSelector,
}

#[derive(Debug, Args)]
struct EpsilonArgs {
    /// Distortion magnitude in trace units.
    #[arg(long, conflicts_with = "epsilon_fraction")]
    epsilon: Option<f64>,
    /// Distortion as a fraction of the trace maximum (default 0.005).
    #[arg(long)]
    epsilon_fraction: Option<f64>,
}

impl EpsilonArgs {
    fn choice(&self) -> Option<EpsilonChoice> {
        match (self.epsilon, self.epsilon_fraction) {
            (Some(e), _) => Some(EpsilonChoice::Explicit(e)),
            (None, Some(f)) => Some(EpsilonChoice::Fraction(f)),
            (None, None) => None,
        }
    }

    fn resolve(&self, trace: &SensorTrace) -> Result<Epsilon, DistortionError> {
        self.choice().unwrap_or_default().resolve(&trace_stats(trace))
    }
}

#[derive(Debug, Args)]
struct GenTraceArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::House)]
    model: ModelArg,
    /// Readings to generate (days for the solar model).
    #[arg(long)]
    n: usize,
    /// key=value file overriding model parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    low: f64,
    #[arg(long, default_value_t = 1000.0)]
    high: f64,
    #[arg(long)]
    base_level: Option<f64>,
    #[arg(long)]
    dwell_ratio: Option<f64>,
    #[arg(long)]
    small_step_scale: Option<f64>,
    #[arg(long)]
    jump_scale: Option<f64>,
    #[arg(long)]
    floor: Option<f64>,
    #[arg(long)]
    ceiling: Option<f64>,
}

#[derive(Debug, Args)]
struct GenPadArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
struct InjectArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(long)]
    pad: PathBuf,
    #[command(flatten)]
    eps: EpsilonArgs,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(long, value_enum)]
    attack: AttackArg,
    #[command(flatten)]
    eps: EpsilonArgs,
    #[arg(long)]
    flood_amplitude: Option<f64>,
    /// Seed for the attacker's own randomness (defaults to --seed).
    #[arg(long)]
    attack_seed: Option<u64>,
    /// Pad for `--attack none`, which emits the genuine distorted stream.
    #[arg(long)]
    pad: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(long)]
    pad: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Filtered)]
    algo: AlgoArg,
    /// Parameter set supplying ε and Δ_th when not given explicitly.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[command(flatten)]
    eps: EpsilonArgs,
    #[arg(long)]
    delta_th: Option<f64>,
    /// Minimum retained S01 ∪ S10 count (default ⌈(n−1)/4⌉).
    #[arg(long)]
    min_count: Option<usize>,
    /// Window length; defaults to the whole stream.
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[command(flatten)]
    input: TraceInput,
    /// Fraction of historical |Δ| to keep below the threshold.
    #[arg(long, default_value_t = 0.99)]
    quantile: f64,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Reproduce a published table layout with its parameter set.
    #[arg(long, value_enum, alias = "preset")]
    table: Option<PresetArg>,
    /// Recorded trace to draw windows from instead of the synthetic stand-in.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    column: ColumnSelector,
    /// Keep windows inside consecutive segments of this many readings.
    #[arg(long)]
    segment_len: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Comma-separated window sizes.
    #[arg(long, value_delimiter = ',')]
    windows: Option<Vec<usize>>,
    #[arg(long, value_enum, value_delimiter = ',')]
    algo: Option<Vec<AlgoArg>>,
    #[arg(long, value_enum, value_delimiter = ',')]
    attack: Option<Vec<AttackArg>>,
    #[command(flatten)]
    eps: EpsilonArgs,
    #[arg(long)]
    delta_th: Option<f64>,
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long)]
    flood_amplitude: Option<f64>,
    #[arg(long, default_value_t = 0)]
    attack_seed: u64,
    /// Instead of a table, search the smallest window reaching this FP/FN rate.
    #[arg(long)]
    required_samples: Option<f64>,
}

/// Parse `args` (including the program name) and run the command.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn echo(line: impl AsRef<str>) {
    eprintln!("# {}", line.as_ref());
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::MissingInput(path.to_path_buf()))
    }
}

fn check_out(out: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(path) = out {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        if dir.is_some_and(|d| !d.is_dir()) {
            return Err(CliError::MissingOutputDir(path.clone()));
        }
    }
    Ok(())
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    check_out(&cli.out)?;
    let format: Format = cli.format.into();
    echo(format!(
        "seed={} format={:?} out={}",
        cli.seed,
        format,
        out_label(&cli.out)
    ));
    match &cli.command {
        Command::GenTrace(a) => gen_trace(a, &cli),
        Command::GenPad(a) => gen_pad(a, &cli),
        Command::Inject(a) => inject_cmd(a, &cli),
        Command::Attack(a) => attack_cmd(a, &cli),
        Command::Detect(a) => detect_cmd(a, &cli, format),
        Command::Calibrate(a) => calibrate_cmd(a, &cli, format),
        Command::Evaluate(a) => evaluate_cmd(a, &cli, format),
    }
}

fn out_label(out: &Option<PathBuf>) -> String {
    out.as_ref()
        .map_or_else(|| "stdout".to_string(), |p| p.display().to_string())
}

fn load(input: &TraceInput) -> Result<SensorTrace, CliError> {
    require_file(&input.trace)?;
    Ok(load_trace(&input.trace, &input.column)?)
}

fn gen_trace(a: &GenTraceArgs, cli: &Cli) -> Result<i32, CliError> {
    let kv = match &a.config {
        Some(path) => {
            require_file(path)?;
            parse_kv(&fs::read_to_string(path)?)?
        }
        None => Vec::new(),
    };
    let values = match a.model {
        ModelArg::Uniform => {
            if !kv.is_empty() {
                return Err(CliError::Usage(
                    "the uniform model takes --low/--high, not a config file".into(),
                ));
            }
            echo(format!("model=uniform low={} high={} n={}", a.low, a.high, a.n));
            generate_uniform_trace(a.low, a.high, a.n, cli.seed)?.into_values()
        }
        ModelArg::Gradual | ModelArg::House => {
            let mut m = GradualModel::HOUSE;
            for (k, v) in &kv {
                m.set(k, *v)?;
            }
            let flags = [
                ("base_level", a.base_level),
                ("dwell_ratio", a.dwell_ratio),
                ("small_step_scale", a.small_step_scale),
                ("jump_scale", a.jump_scale),
                ("floor", a.floor),
                ("ceiling", a.ceiling),
            ];
            for (k, v) in flags {
                if let Some(v) = v {
                    m.set(k, v)?;
                }
            }
            echo(format!(
                "model=gradual base_level={} dwell_ratio={} small_step_scale={} jump_scale={} floor={} ceiling={} n={}",
                m.base_level, m.dwell_ratio, m.small_step_scale, m.jump_scale, m.floor, m.ceiling, a.n
            ));
            generate_gradual_trace(&m, a.n, cli.seed)?.into_values()
        }
        ModelArg::Solar => {
            let mut m = SolarModel::PLANT;
            for (k, v) in &kv {
                m.set(k, *v)?;
            }
            echo(format!(
                "model=solar days={} points_per_day={} (use --segment-len {} when evaluating) {:?}",
                a.n,
                m.points_per_day(),
                m.points_per_day(),
                m
            ));
            generate_solar_days(&m, a.n, cli.seed)?
                .into_iter()
                .flat_map(SensorTrace::into_values)
                .collect()
        }
    };
    let mut out = open_out(&cli.out)?;
    write_values(&mut out, "value", &values)?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn gen_pad(a: &GenPadArgs, cli: &Cli) -> Result<i32, CliError> {
    echo(format!("n={}", a.n));
    let pad = generate_pad(a.n, cli.seed)?;
    match &cli.out {
        Some(path) => save_pad(&pad, path)?,
        None => io::stdout().lock().write_all(pad.to_text().as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn inject_cmd(a: &InjectArgs, cli: &Cli) -> Result<i32, CliError> {
    require_file(&a.pad)?;
    let trace = load(&a.input)?;
    let pad = load_pad(&a.pad)?;
    let eps = a.eps.resolve(&trace)?;
    echo(format!(
        "trace={} column={} pad={} epsilon={eps}",
        a.input.trace.display(),
        a.input.column,
        a.pad.display()
    ));
    let d = inject(&trace, &pad, eps)?;
    let mut out = open_out(&cli.out)?;
    write_values(&mut out, "value", d.values())?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn attack_cmd(a: &AttackArgs, cli: &Cli) -> Result<i32, CliError> {
    if let Some(p) = &a.pad {
        require_file(p)?;
    }
    if a.attack == AttackArg::None && a.pad.is_none() {
        return Err(CliError::Usage(
            "--attack none emits the genuine stream and needs --pad".into(),
        ));
    }
    if a.attack != AttackArg::None && a.pad.is_some() {
        return Err(CliError::Usage(
            "an attacker has no pad; --pad only goes with --attack none".into(),
        ));
    }
    if a.attack == AttackArg::Flood && a.flood_amplitude.is_none() {
        return Err(CliError::Usage("--attack flood needs --flood-amplitude".into()));
    }
    let trace = load(&a.input)?;
    let eps = a.eps.resolve(&trace)?;
    let seed = a.attack_seed.unwrap_or(cli.seed);
    let amplitude = a.flood_amplitude.unwrap_or(f64::NAN);
    let kind = AttackName::from(a.attack).with_params(eps, amplitude)?;
    echo(format!(
        "trace={} attack={} epsilon={eps} flood_amplitude={} attack_seed={seed}",
        a.input.trace.display(),
        kind,
        a.flood_amplitude.map_or("-".into(), |v| v.to_string())
    ));
    let stream = match AttackScenario::new(kind, seed)?.forge(&trace) {
        Some(forged) => forged,
        None => {
            let pad = load_pad(a.pad.as_ref().expect("checked above"))?;
            inject(&trace, &pad, eps)?
        }
    };
    let mut out = open_out(&cli.out)?;
    write_values(&mut out, "value", stream.values())?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn detect_cmd(a: &DetectArgs, cli: &Cli, format: Format) -> Result<i32, CliError> {
    require_file(&a.pad)?;
    let trace = load(&a.input)?;
    let pad = load_pad(&a.pad)?;
    let preset = a.preset.map(Preset::from);
    let eps = match (a.eps.choice(), preset) {
        (Some(c), _) => c.resolve(&trace_stats(&trace))?,
        (None, Some(p)) => p.epsilon(),
        (None, None) => EpsilonChoice::default().resolve(&trace_stats(&trace))?,
    };
    let delta_th = match (a.delta_th, preset) {
        (Some(v), _) => v,
        (None, Some(p)) => p.delta_threshold(),
        (None, None) if a.algo == AlgoArg::Filtered => {
            return Err(CliError::Usage("--algo filtered needs --delta-th or --preset".into()))
        }
        // unused by the unfiltered detectors
        (None, None) => f64::INFINITY,
    };
    let mut cfg = DetectorConfig::new(eps, delta_th)?;
    if let Some(m) = a.min_count {
        cfg = cfg.with_min_count(m)?;
    }
    let window = a.window.unwrap_or(trace.len());
    let detector = Detector::from(a.algo);
    echo(format!(
        "trace={} pad={} algo={} epsilon={} delta_th={} min_count={} window={} band=[{}, {}]",
        a.input.trace.display(),
        a.pad.display(),
        detector,
        eps,
        delta_th,
        cfg.min_count_for(window),
        window,
        cfg.band_low,
        cfg.band_high
    ));
    let stream = DistortedTrace::from_trace(trace);
    let verdicts = judge_windows(detector, &stream, &pad, &cfg, window)?;
    let sep = format.separator();
    let mut out = open_out(&cli.out)?;
    writeln!(
        out,
        "{}",
        ["window_index", "algo", "gauge", "retained_count", "alarm", "reason"].join(sep)
    )?;
    let mut any = false;
    for w in &verdicts {
        let v = w.verdict;
        any |= v.alarm;
        let cells = [
            w.index.to_string(),
            detector.label().to_string(),
            v.gauge.map(|g| g.to_string()).unwrap_or_default(),
            v.counts.retained().to_string(),
            v.alarm.to_string(),
            v.reason.label().to_string(),
        ];
        writeln!(out, "{}", cells.join(sep))?;
    }
    out.flush()?;
    Ok(if any { EXIT_ALARM } else { EXIT_OK })
}

fn calibrate_cmd(a: &CalibrateArgs, cli: &Cli, format: Format) -> Result<i32, CliError> {
    let trace = load(&a.input)?;
    let stats = trace_stats(&trace);
    echo(format!(
        "trace={} column={} quantile={}",
        a.input.trace.display(),
        a.input.column,
        a.quantile
    ));
    echo(format!("readings: {stats}"));
    if let Ok(d) = delta_sequence(&trace) {
        echo(format!("delta: {}", d.stats()));
        echo(format!("|delta|: {}", d.abs_stats()));
    }
    let c = calibrate_delta_threshold(&trace, a.quantile)?;
    let kept = retained_fraction(&trace, c.delta_threshold)?;
    let sep = format.separator();
    let mut out = open_out(&cli.out)?;
    writeln!(
        out,
        "{}",
        ["delta_th", "retain_quantile", "samples", "retained_fraction"].join(sep)
    )?;
    writeln!(
        out,
        "{}",
        [
            c.delta_threshold.to_string(),
            c.retain_quantile.to_string(),
            c.samples.to_string(),
            format!("{kept:.6}"),
        ]
        .join(sep)
    )?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn evaluate_cmd(a: &EvaluateArgs, cli: &Cli, format: Format) -> Result<i32, CliError> {
    if let Some(p) = &a.trace {
        require_file(p)?;
    }
    let preset = a.table.map(Preset::from);
    let source = match (&a.trace, preset) {
        (Some(path), _) => {
            let trace = load_trace(path, &a.column)?;
            TraceSource::Recorded {
                trace,
                segment_len: a.segment_len,
            }
        }
        (None, Some(p)) => p.synthetic_source(cli.seed)?,
        (None, None) => return Err(CliError::Usage("evaluate needs --table or --trace".into())),
    };
    let eps = match (a.eps.choice(), preset, &source) {
        (Some(EpsilonChoice::Explicit(e)), _, _) => Epsilon::new(e)?,
        (Some(c), _, TraceSource::Recorded { trace, .. }) => c.resolve(&trace_stats(trace))?,
        (None, Some(p), _) => p.epsilon(),
        (None, None, TraceSource::Recorded { trace, .. }) => {
            EpsilonChoice::Fraction(DEFAULT_EPSILON_FRACTION).resolve(&trace_stats(trace))?
        }
        _ => return Err(CliError::Usage("give --epsilon for this source".into())),
    };
    let delta_th = match (a.delta_th, preset) {
        (Some(v), _) => v,
        (None, Some(p)) => p.delta_threshold(),
        (None, None) => return Err(CliError::Usage("evaluate without --table needs --delta-th".into())),
    };
    let mut cfg = DetectorConfig::new(eps, delta_th)?;
    if let Some(m) = a.min_count {
        cfg = cfg.with_min_count(m)?;
    }
    let source = Arc::new(source);
    let detectors: Vec<Detector> = match &a.algo {
        Some(list) => list.iter().map(|&d| d.into()).collect(),
        None => Detector::ALL.to_vec(),
    };
    let source_label = a.trace.as_ref().map_or_else(
        || format!("synthetic {}", preset.map_or("-", Preset::label)),
        |p| p.display().to_string(),
    );

    if let Some(target) = a.required_samples {
        echo(format!(
            "mode=required-samples target={target} trials={} source={source_label} epsilon={eps} delta_th={delta_th} min_count={}",
            a.trials,
            a.min_count.map_or("auto".into(), |m| m.to_string())
        ));
        let opts = SearchOptions {
            trials: a.trials,
            master_seed: cli.seed,
            ..SearchOptions::default()
        };
        let sep = format.separator();
        let mut out = open_out(&cli.out)?;
        writeln!(
            out,
            "{}",
            ["detector", "n", "trials", "fp_pct", "fn_pct", "passed", "selected"].join(sep)
        )?;
        for d in detectors {
            let s = required_samples(d, &cfg, source.clone(), target, &opts)?;
            for g in &s.grid {
                let cells = [
                    d.label().to_string(),
                    g.n.to_string(),
                    s.trials.to_string(),
                    format!("{:.3}", 100.0 * g.fp_rate),
                    format!("{:.3}", 100.0 * g.fn_rate),
                    g.passed.to_string(),
                    (g.n == s.n).to_string(),
                ];
                writeln!(out, "{}", cells.join(sep))?;
            }
        }
        out.flush()?;
        return Ok(EXIT_OK);
    }

    let mut plan = match preset {
        Some(p) => TablePlan::for_preset(p, a.trials, cli.seed),
        None => TablePlan::for_preset(Preset::House, a.trials, cli.seed),
    };
    plan.detector_config = cfg;
    plan.detectors = detectors;
    plan.attack_seed = a.attack_seed;
    if let Some(w) = &a.windows {
        plan.windows = w.clone();
    } else if preset.is_none() {
        return Err(CliError::Usage("evaluate without --table needs --windows".into()));
    }
    if let Some(list) = &a.attack {
        if list.contains(&AttackArg::Flood) && a.flood_amplitude.is_none() {
            return Err(CliError::Usage("--attack flood needs --flood-amplitude".into()));
        }
        plan.attacks = list
            .iter()
            .map(|&k| AttackName::from(k).with_params(eps, a.flood_amplitude.unwrap_or(f64::NAN)))
            .collect::<Result<Vec<AttackKind>, _>>()?;
    } else {
        plan.attacks = vec![
            AttackKind::None,
            AttackKind::ExactDuplication,
            AttackKind::RandomDistortion { eps },
        ];
    }
    echo(format!(
        "mode=table table={} source={source_label} segment_len={} trials={} windows={:?} detectors={:?} attacks={:?} epsilon={eps} delta_th={delta_th} min_count={} band=[{}, {}] attack_seed={}",
        preset.map_or("-", Preset::label),
        match &*source {
            TraceSource::Recorded { segment_len: Some(s), .. } => s.to_string(),
            _ => "-".into(),
        },
        plan.trials,
        plan.windows,
        plan.detectors.iter().map(|d| d.label()).collect::<Vec<_>>(),
        plan.attacks.iter().map(|k| k.label()).collect::<Vec<_>>(),
        a.min_count.map_or("auto".into(), |m| m.to_string()),
        cfg.band_low,
        cfg.band_high,
        plan.attack_seed,
    ));
    let report: FpFnReport = plan.run(source)?;
    let mut out = open_out(&cli.out)?;
    report.write(&mut out, format)?;
    out.flush()?;
    Ok(EXIT_OK)
}
