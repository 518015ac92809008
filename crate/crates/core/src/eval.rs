//! Monte Carlo estimation of false-positive and false-negative rates.
//!
//! A trial draws one window of `n` readings from a [`TraceSource`], a fresh
//! pad for it, builds the received stream (genuinely distorted, or forged by
//! the attack under test) and asks the detector for a verdict. Every random
//! choice in trial `t` at window size `n` is seeded from
//! `derive_seed(master_seed, [n, t, ...])`, so reports do not depend on the
//! order or the degree of parallelism in which trials run.
//!
//! FP% comes only from runs without an attack; FN% only from attacked runs.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

use crate::attack::{AttackError, AttackKind, AttackScenario};
use crate::detect::{DetectError, Detector, DetectorConfig, Reason};
use crate::distortion::{inject_into, Epsilon};
use crate::pad::fill_pad_bits;
use crate::rng::{derive_seed, seeded_rng};
use crate::synth::{fill_uniform, generate_gradual_trace, generate_solar_days, GradualModel, SolarModel};
use crate::trace::{SensorTrace, TraceError};

/// Column header of report CSV files.
pub const REPORT_HEADER: [&str; 11] = [
    "detector",
    "attack",
    "n",
    "trials",
    "fp_pct",
    "fn_pct",
    "ci95",
    "epsilon",
    "delta_th",
    "min_count",
    "seed",
];

/// Seconds in the 72-day household recording the house preset stands in for.
pub const HOUSE_TRACE_LEN: usize = 72 * 86_400;
/// Days covered by the solar preset (1 May to 17 June).
pub const SOLAR_DAYS: usize = 48;

const STREAM_WINDOW: u64 = 1;
const STREAM_PAD: u64 = 2;
const STREAM_ATTACK: u64 = 3;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error("source cannot supply a window of {window} readings (longest usable run is {available})")]
    WindowTooLarge { window: usize, available: usize },
    #[error("window must hold at least {needed} readings for this detector, got {window}")]
    WindowTooSmall { window: usize, needed: usize },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("target rate must lie strictly between 0 and 1, got {0}")]
    InvalidTarget(f64),
    #[error("no window size up to {cap} reaches the target rate {target}")]
    Unreachable { cap: usize, target: f64 },
    #[error("unknown table preset {0:?} (expected house, solar or uniform)")]
    UnknownPreset(String),
}

/// Where trial windows come from.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    /// Windows at uniformly random offsets inside a recorded trace. With a
    /// `segment_len`, the trace is a concatenation of independent segments
    /// (e.g. one per day) and no window straddles a segment boundary.
    Recorded {
        trace: SensorTrace,
        segment_len: Option<usize>,
    },
    /// A fresh i.i.d. uniform window for every trial.
    Uniform { low: f64, high: f64 },
}

impl TraceSource {
    pub fn recorded(trace: SensorTrace) -> Self {
        TraceSource::Recorded {
            trace,
            segment_len: None,
        }
    }

    /// A long trace from the house-calibrated [`GradualModel`].
    pub fn house_synthetic(seed: u64) -> Result<Self, EvalError> {
        Ok(Self::recorded(generate_gradual_trace(
            &GradualModel::HOUSE,
            HOUSE_TRACE_LEN,
            seed,
        )?))
    }

    /// Daytime solar segments, 600 readings per day.
    pub fn solar_synthetic(seed: u64) -> Result<Self, EvalError> {
        let model = SolarModel::PLANT;
        let days = generate_solar_days(&model, SOLAR_DAYS, seed)?;
        let values = days.into_iter().flat_map(SensorTrace::into_values).collect();
        let trace = SensorTrace::new(values, std::time::Duration::from_secs(60), "kW")?;
        Ok(TraceSource::Recorded {
            trace,
            segment_len: Some(model.points_per_day()),
        })
    }

    /// Longest window the source can supply.
    pub fn max_window(&self) -> usize {
        match self {
            TraceSource::Recorded { trace, segment_len } => match segment_len {
                Some(s) => (*s).min(trace.len()),
                None => trace.len(),
            },
            TraceSource::Uniform { .. } => usize::MAX,
        }
    }

    fn check_window(&self, n: usize) -> Result<(), EvalError> {
        if let TraceSource::Uniform { low, high } = *self {
            if low.partial_cmp(&high) != Some(std::cmp::Ordering::Less) {
                return Err(TraceError::InvalidRange { low, high }.into());
            }
        }
        if n > self.max_window() || n == 0 {
            return Err(EvalError::WindowTooLarge {
                window: n,
                available: self.max_window(),
            });
        }
        Ok(())
    }

    /// Fill `out` with the `n`-reading window selected by `seed`.
    fn draw(&self, n: usize, seed: u64, out: &mut Vec<f64>) {
        match self {
            TraceSource::Recorded { trace, segment_len } => {
                let len = trace.len();
                let seg = segment_len.unwrap_or(len).min(len);
                let starts_per_seg = seg - n + 1;
                let mut rng = seeded_rng(seed);
                let start = if seg == len {
                    rng.random_range(0..starts_per_seg)
                } else {
                    // full segments only; a trailing partial segment is skipped
                    let segments = len / seg;
                    let pick = rng.random_range(0..segments * starts_per_seg);
                    (pick / starts_per_seg) * seg + pick % starts_per_seg
                };
                out.clear();
                out.extend_from_slice(&trace.values()[start..start + n]);
            }
            TraceSource::Uniform { low, high } => {
                out.resize(n, 0.0);
                fill_uniform(out, *low, *high, seed).expect("range checked before drawing");
            }
        }
    }
}

/// Everything one Monte Carlo run depends on.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub detector: Detector,
    pub detector_config: DetectorConfig,
    pub attack: AttackScenario,
    pub window: usize,
    pub trials: usize,
    pub source: Arc<TraceSource>,
    pub master_seed: u64,
}

impl TrialConfig {
    fn validate(&self) -> Result<(), EvalError> {
        if self.trials == 0 {
            return Err(EvalError::NoTrials);
        }
        let needed = self.detector.min_window();
        if self.window < needed {
            return Err(EvalError::WindowTooSmall {
                window: self.window,
                needed,
            });
        }
        self.detector_config.validate()?;
        self.source.check_window(self.window)
    }
}

/// Tallies of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Outcome {
    pub trials: usize,
    pub alarms: usize,
    /// Alarms raised because too few samples survived filtration.
    pub insufficient: usize,
}

impl Outcome {
    pub fn alarm_rate(&self) -> f64 {
        self.alarms as f64 / self.trials as f64
    }

    pub fn miss_rate(&self) -> f64 {
        1.0 - self.alarm_rate()
    }
}

fn run_one(cfg: &TrialConfig, trial: usize, buf: &mut TrialBuffers) -> (bool, bool) {
    let n = cfg.window;
    let base = derive_seed(cfg.master_seed, &[n as u64, trial as u64]);
    cfg.source.draw(n, derive_seed(base, &[STREAM_WINDOW]), &mut buf.window);
    buf.bits.clear();
    fill_pad_bits(&mut buf.bits, n, derive_seed(base, &[STREAM_PAD]));
    let attack_seed = derive_seed(base, &[STREAM_ATTACK, cfg.attack.seed]);
    if !cfg.attack.forge_into(&buf.window, attack_seed, &mut buf.stream) {
        inject_into(
            &buf.window,
            &buf.bits,
            cfg.detector_config.epsilon.value(),
            &mut buf.stream,
        );
    }
    let v = cfg.detector.judge_slices(&buf.stream, &buf.bits, &cfg.detector_config);
    (v.alarm, v.reason == Reason::InsufficientSamples)
}

#[derive(Default)]
struct TrialBuffers {
    window: Vec<f64>,
    bits: Vec<bool>,
    stream: Vec<f64>,
}

/// Run `cfg.trials` trials and count alarms.
pub fn simulate(cfg: &TrialConfig) -> Result<Outcome, EvalError> {
    cfg.validate()?;
    let (alarms, insufficient) = (0..cfg.trials)
        .into_par_iter()
        .map_init(TrialBuffers::default, |buf, t| {
            let (a, i) = run_one(cfg, t, buf);
            (a as usize, i as usize)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(Outcome {
        trials: cfg.trials,
        alarms,
        insufficient,
    })
}

/// One `(detector, attack, n)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub detector: Detector,
    pub attack: &'static str,
    pub n: usize,
    pub outcome: Outcome,
    /// Set for clean runs only.
    pub fp_pct: Option<f64>,
    /// Set for attacked runs only.
    pub fn_pct: Option<f64>,
    /// Normal-approximation 95% half-width of whichever rate is set, in percent.
    pub ci95: f64,
    pub epsilon: f64,
    pub delta_th: Option<f64>,
    pub min_count: Option<usize>,
    pub seed: u64,
}

impl ReportRow {
    /// The reported rate (FP or FN) in percent.
    pub fn pct(&self) -> f64 {
        self.fp_pct.or(self.fn_pct).expect("every row carries one rate")
    }
}

/// Rows of FP/FN percentages.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FpFnReport {
    pub rows: Vec<ReportRow>,
}

/// Output separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn separator(self) -> &'static str {
        match self {
            Format::Csv => ",",
            Format::Tsv => "\t",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format {other:?} (expected csv or tsv)")),
        }
    }
}

impl FpFnReport {
    pub fn extend(&mut self, other: FpFnReport) {
        self.rows.extend(other.rows);
    }

    pub fn find(&self, detector: Detector, attack: &str, n: usize) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.detector == detector && r.attack == attack && r.n == n)
    }

    pub fn write<W: Write>(&self, mut out: W, format: Format) -> io::Result<()> {
        let sep = format.separator();
        writeln!(out, "{}", REPORT_HEADER.join(sep))?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.rows {
            let cells = [
                r.detector.label().to_string(),
                r.attack.to_string(),
                r.n.to_string(),
                r.outcome.trials.to_string(),
                opt(r.fp_pct.map(|v| format!("{v:.3}"))),
                opt(r.fn_pct.map(|v| format!("{v:.3}"))),
                format!("{:.3}", r.ci95),
                r.epsilon.to_string(),
                opt(r.delta_th.map(|v| v.to_string())),
                opt(r.min_count.map(|v| v.to_string())),
                r.seed.to_string(),
            ];
            writeln!(out, "{}", cells.join(sep))?;
        }
        Ok(())
    }

    pub fn to_string_as(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, format).expect("writing to memory");
        String::from_utf8(buf).expect("report is UTF-8")
    }
}

impl fmt::Display for FpFnReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_as(Format::Csv))
    }
}

fn half_width_pct(p: f64, trials: usize) -> f64 {
    100.0 * 1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// One report row for `config`.
pub fn run_trials(config: &TrialConfig) -> Result<FpFnReport, EvalError> {
    let outcome = simulate(config)?;
    let attacked = config.attack.kind.is_attack();
    let p = if attacked {
        outcome.miss_rate()
    } else {
        outcome.alarm_rate()
    };
    let pct = 100.0 * p;
    let filtered = config.detector == Detector::Filtered;
    let row = ReportRow {
        detector: config.detector,
        attack: config.attack.kind.label(),
        n: config.window,
        outcome,
        fp_pct: (!attacked).then_some(pct),
        fn_pct: attacked.then_some(pct),
        ci95: half_width_pct(p, outcome.trials),
        epsilon: config.detector_config.epsilon.value(),
        delta_th: filtered.then_some(config.detector_config.delta_threshold),
        min_count: filtered.then(|| config.detector_config.min_count_for(config.window)),
        seed: config.master_seed,
    };
    Ok(FpFnReport { rows: vec![row] })
}

/// [`run_trials`] for each window size, in order.
pub fn sweep(config: &TrialConfig, windows: &[usize]) -> Result<FpFnReport, EvalError> {
    let mut report = FpFnReport::default();
    for &n in windows {
        let cfg = TrialConfig {
            window: n,
            ..config.clone()
        };
        report.extend(run_trials(&cfg)?);
    }
    Ok(report)
}

/// Knobs for [`required_samples`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub trials: usize,
    pub master_seed: u64,
    /// First window size tried; doubled until the target is met.
    pub start: usize,
    /// Give up beyond this window size.
    pub cap: usize,
    /// Bisection stops once the bracket is within this fraction of its
    /// upper end (or one reading).
    pub resolution: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            trials: 2000,
            master_seed: 0,
            start: 2,
            cap: 1 << 20,
            resolution: 0.01,
        }
    }
}

/// A window size measured during the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub fp_rate: f64,
    pub fn_rate: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSearch {
    /// Smallest passing window size found.
    pub n: usize,
    pub target_rate: f64,
    pub trials: usize,
    /// Every measured point in the order it was measured.
    pub grid: Vec<GridPoint>,
}

/// Smallest window size at which both the FP rate and the FN rate against
/// exact duplication are at or below `target_rate`, found by doubling from
/// `opts.start` and then bisecting the last failing/passing bracket.
pub fn required_samples(
    detector: Detector,
    detector_config: &DetectorConfig,
    source: Arc<TraceSource>,
    target_rate: f64,
    opts: &SearchOptions,
) -> Result<SampleSearch, EvalError> {
    if !(target_rate > 0.0 && target_rate < 1.0) {
        return Err(EvalError::InvalidTarget(target_rate));
    }
    let mut grid = Vec::new();
    let mut measure = |n: usize| -> Result<bool, EvalError> {
        let base = TrialConfig {
            detector,
            detector_config: *detector_config,
            attack: AttackScenario::new(AttackKind::None, 0)?,
            window: n,
            trials: opts.trials,
            source: source.clone(),
            master_seed: opts.master_seed,
        };
        let fp_rate = simulate(&base)?.alarm_rate();
        let attacked = TrialConfig {
            attack: AttackScenario::new(AttackKind::ExactDuplication, 0)?,
            ..base
        };
        let fn_rate = simulate(&attacked)?.miss_rate();
        let passed = fp_rate <= target_rate && fn_rate <= target_rate;
        grid.push(GridPoint {
            n,
            fp_rate,
            fn_rate,
            passed,
        });
        Ok(passed)
    };

    let mut lo = None;
    let mut hi = opts.start.max(detector.min_window());
    loop {
        if hi > opts.cap || hi > source.max_window() {
            return Err(EvalError::Unreachable {
                cap: opts.cap.min(source.max_window()),
                target: target_rate,
            });
        }
        if measure(hi)? {
            break;
        }
        lo = Some(hi);
        hi = hi.saturating_mul(2);
    }
    if let Some(mut lo) = lo {
        while hi - lo > ((hi as f64 * opts.resolution) as usize).max(1) {
            let mid = lo + (hi - lo) / 2;
            if measure(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(SampleSearch {
        n: hi,
        target_rate,
        trials: opts.trials,
        grid,
    })
}

/// Parameter sets for table reproduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Household mains at 1 Hz: ε = 40 W, Δ_th = 200 W.
    House,
    /// Daytime solar output per minute: ε = 7.5 kW, Δ_th = 30 kW.
    Solar,
    /// i.i.d. readings uniform over `[0, 1000]`: ε = 0.5% of the range,
    /// with Δ_th set to the whole range so filtration never triggers.
    Uniform,
}

pub const UNIFORM_RANGE: (f64, f64) = (0.0, 1000.0);

impl Preset {
    pub fn label(self) -> &'static str {
        match self {
            Preset::House => "house",
            Preset::Solar => "solar",
            Preset::Uniform => "uniform",
        }
    }

    pub fn epsilon(self) -> Epsilon {
        let v = match self {
            Preset::House => 40.0,
            Preset::Solar => 7.5,
            Preset::Uniform => 0.005 * (UNIFORM_RANGE.1 - UNIFORM_RANGE.0),
        };
        Epsilon::new(v).expect("preset epsilon is positive")
    }

    pub fn delta_threshold(self) -> f64 {
        match self {
            Preset::House => 200.0,
            Preset::Solar => 30.0,
            Preset::Uniform => UNIFORM_RANGE.1 - UNIFORM_RANGE.0,
        }
    }

    pub fn detector_config(self) -> DetectorConfig {
        DetectorConfig::new(self.epsilon(), self.delta_threshold()).expect("preset config is valid")
    }

    /// Window sizes of the published tables.
    pub fn windows(self) -> &'static [usize] {
        match self {
            Preset::House => &[30, 60, 90, 120, 150, 20_000, 40_000],
            Preset::Solar => &[30, 60, 90, 120, 600],
            Preset::Uniform => &[1_000, 10_000, 80_000, 140_000],
        }
    }

    /// The synthetic stand-in for the preset's data.
    pub fn synthetic_source(self, seed: u64) -> Result<TraceSource, EvalError> {
        match self {
            Preset::House => TraceSource::house_synthetic(seed),
            Preset::Solar => TraceSource::solar_synthetic(seed),
            Preset::Uniform => Ok(TraceSource::Uniform {
                low: UNIFORM_RANGE.0,
                high: UNIFORM_RANGE.1,
            }),
        }
    }
}

impl FromStr for Preset {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "house" => Ok(Preset::House),
            "solar" => Ok(Preset::Solar),
            "uniform" => Ok(Preset::Uniform),
            other => Err(EvalError::UnknownPreset(other.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A grid of runs: every detector against every attack at every window.
#[derive(Debug, Clone)]
pub struct TablePlan {
    pub detectors: Vec<Detector>,
    pub attacks: Vec<AttackKind>,
    pub windows: Vec<usize>,
    pub detector_config: DetectorConfig,
    pub trials: usize,
    pub master_seed: u64,
    /// Mixed into every attack seed.
    pub attack_seed: u64,
}

impl TablePlan {
    /// The three detectors against no attack, EDA and RDA, as in the
    /// published tables.
    pub fn for_preset(preset: Preset, trials: usize, master_seed: u64) -> Self {
        let cfg = preset.detector_config();
        Self {
            detectors: Detector::ALL.to_vec(),
            attacks: vec![
                AttackKind::None,
                AttackKind::ExactDuplication,
                AttackKind::RandomDistortion { eps: cfg.epsilon },
            ],
            windows: preset.windows().to_vec(),
            detector_config: cfg,
            trials,
            master_seed,
            attack_seed: 0,
        }
    }

    /// Rows ordered by detector, then window, then attack.
    pub fn run(&self, source: Arc<TraceSource>) -> Result<FpFnReport, EvalError> {
        let mut report = FpFnReport::default();
        for &detector in &self.detectors {
            for &n in &self.windows {
                for &kind in &self.attacks {
                    let cfg = TrialConfig {
                        detector,
                        detector_config: self.detector_config,
                        attack: AttackScenario::new(kind, self.attack_seed)?,
                        window: n,
                        trials: self.trials,
                        source: source.clone(),
                        master_seed: self.master_seed,
                    };
                    report.extend(run_trials(&cfg)?);
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    fn constant_source(len: usize) -> Arc<TraceSource> {
        Arc::new(TraceSource::recorded(
            SensorTrace::from_values(vec![250.0; len]).unwrap(),
        ))
    }

    fn config(detector: Detector, kind: AttackKind, n: usize, source: Arc<TraceSource>) -> TrialConfig {
        TrialConfig {
            detector,
            detector_config: DetectorConfig::new(eps(4.0), 20.0).unwrap(),
            attack: AttackScenario::new(kind, 0).unwrap(),
            window: n,
            trials: 500,
            source,
            master_seed: 9,
        }
    }

    #[test]
    fn constant_trace_never_false_alarms() {
        let src = constant_source(5_000);
        for n in [90, 120, 150] {
            let r = run_trials(&config(Detector::Filtered, AttackKind::None, n, src.clone())).unwrap();
            assert_eq!(r.rows[0].fp_pct, Some(0.0));
            assert_eq!(r.rows[0].fn_pct, None);
        }
    }

    #[test]
    fn constant_trace_always_catches_eda() {
        let src = constant_source(5_000);
        for n in [10, 30, 60] {
            for d in Detector::ALL {
                let r = run_trials(&config(d, AttackKind::ExactDuplication, n, src.clone())).unwrap();
                assert_eq!(r.rows[0].fn_pct, Some(0.0), "{d} n={n}");
                assert_eq!(r.rows[0].fp_pct, None);
            }
        }
    }

    #[test]
    fn sweep_rows_in_order() {
        let src = constant_source(1_000);
        let r = sweep(&config(Detector::Delta, AttackKind::None, 2, src), &[30, 60, 90]).unwrap();
        let ns: Vec<usize> = r.rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![30, 60, 90]);
        assert!(r.rows.iter().all(|r| r.fp_pct == Some(0.0)));
    }

    #[test]
    fn report_is_reproducible() {
        let src = Arc::new(TraceSource::Uniform { low: 0.0, high: 100.0 });
        let cfg = config(Detector::Simple, AttackKind::None, 200, src);
        let a = run_trials(&cfg).unwrap().to_string();
        let b = run_trials(&cfg).unwrap().to_string();
        assert_eq!(a, b);
        let other = run_trials(&TrialConfig { master_seed: 10, ..cfg }).unwrap().to_string();
        assert_ne!(a, other);
    }

    #[test]
    fn errors() {
        let src = constant_source(50);
        assert!(matches!(
            run_trials(&config(Detector::Delta, AttackKind::None, 51, src.clone())),
            Err(EvalError::WindowTooLarge { .. })
        ));
        assert!(matches!(
            run_trials(&config(Detector::Delta, AttackKind::None, 1, src.clone())),
            Err(EvalError::WindowTooSmall { .. })
        ));
        let mut cfg = config(Detector::Delta, AttackKind::None, 10, src.clone());
        cfg.trials = 0;
        assert!(matches!(run_trials(&cfg), Err(EvalError::NoTrials)));
        let dc = DetectorConfig::new(eps(4.0), 20.0).unwrap();
        assert!(matches!(
            required_samples(Detector::Delta, &dc, src, 1.5, &SearchOptions::default()),
            Err(EvalError::InvalidTarget(_))
        ));
    }

    #[test]
    fn segments_are_respected() {
        // two segments; any window crossing the boundary would see a jump
        let mut v = vec![0.0; 100];
        v.extend(vec![1000.0; 100]);
        let src = TraceSource::Recorded {
            trace: SensorTrace::from_values(v).unwrap(),
            segment_len: Some(100),
        };
        let mut out = Vec::new();
        for s in 0..2_000 {
            src.draw(40, s, &mut out);
            assert!(out.iter().all(|&x| x == out[0]));
        }
        assert!(src.check_window(101).is_err());
    }

    #[test]
    fn csv_layout() {
        let src = constant_source(100);
        let mut r = run_trials(&config(Detector::Filtered, AttackKind::None, 30, src.clone())).unwrap();
        r.extend(run_trials(&config(Detector::Simple, AttackKind::ExactDuplication, 30, src)).unwrap());
        let text = r.to_string_as(Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "detector,attack,n,trials,fp_pct,fn_pct,ci95,epsilon,delta_th,min_count,seed"
        );
        assert!(lines[1].starts_with("filtered,none,30,500,"));
        assert!(lines[1].ends_with(",4,20,8,9"), "{}", lines[1]);
        assert!(lines[2].starts_with("simple,eda,30,500,,0.000,"), "{}", lines[2]);
        let tsv = r.to_string_as(Format::Tsv);
        assert_eq!(tsv.lines().next().unwrap().split('\t').count(), 11);
    }

    #[test]
    fn constant_source_search_stops_at_small_n() {
        let dc = DetectorConfig::new(eps(4.0), 20.0).unwrap();
        let s = required_samples(
            Detector::Filtered,
            &dc,
            constant_source(10_000),
            0.01,
            &SearchOptions {
                trials: 1000,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        // only the minimum-count check can fail on a constant signal
        assert!(s.n <= 64, "{}", s.n);
        assert!(s.grid.last().is_some());
        assert!(s.grid.iter().any(|g| g.passed && g.n == s.n));
    }
}
