//! Attack detection from the received stream and the shared pad.
//!
//! Three detectors are provided:
//!
//! * **simple mean difference** compares the mean reading over slots with
//!   `k = 1` against slots with `k = 0`. Genuine streams give `2ε`, forged
//!   ones `0`. Accepts the band `[ε, 3ε]`.
//! * **Δ-mean difference** works on consecutive differences
//!   `Δ'[i] = d'[i+1] − d'[i]` and splits positions by the key pair
//!   `(k[i], k[i+1])`. Positions in `S01` carry `Δ[i] + 2ε`, those in `S10`
//!   carry `Δ[i] − 2ε`, so the gauge `μ01 − μ10` is `4ε` on genuine data
//!   and `0` for anyone who does not know the pad. Accepts `[2ε, 6ε]`.
//! * **filtered Δ-mean difference** first drops positions with
//!   `|Δ'[i]| > Δ_th`, raises an alarm when fewer than `m` positions of
//!   `S01 ∪ S10` survive, and otherwise applies the Δ-mean test to the rest.
//!
//! Indices here are zero-based: Δ position `i` pairs readings `i` and `i+1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::distortion::{DistortedTrace, Epsilon};
use crate::pad::SecretPad;
use crate::trace::{delta_sequence, SensorTrace};

/// Smallest history `calibrate_delta_threshold` accepts.
pub const MIN_CALIBRATION_HISTORY: usize = 100;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("readings ({readings}) and pad ({pad}) differ in length")]
    LengthMismatch { readings: usize, pad: usize },
    #[error("need at least {needed} readings, got {len}")]
    TooShort { len: usize, needed: usize },
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown detector {0:?} (expected simple, delta or filtered)")]
    UnknownDetector(String),
    #[error("calibration history has {len} readings, need at least {MIN_CALIBRATION_HISTORY}")]
    HistoryTooShort { len: usize },
    #[error("retain quantile must lie strictly between 0 and 1, got {0}")]
    InvalidQuantile(f64),
    #[error("calibrated threshold is zero; the history has no variation")]
    DegenerateCalibration,
}

/// Δ positions grouped by the key-bit pair `(k[i], k[i+1])`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionSets {
    pub s00: Vec<usize>,
    pub s01: Vec<usize>,
    pub s10: Vec<usize>,
    pub s11: Vec<usize>,
}

impl PartitionSets {
    /// The key pair a position was filed under, if it was filed at all.
    pub fn pair_of(&self, i: usize) -> Option<(bool, bool)> {
        let has = |s: &Vec<usize>| s.binary_search(&i).is_ok();
        if has(&self.s00) {
            Some((false, false))
        } else if has(&self.s01) {
            Some((false, true))
        } else if has(&self.s10) {
            Some((true, false))
        } else if has(&self.s11) {
            Some((true, true))
        } else {
            None
        }
    }
}

/// Partition the `n - 1` Δ positions of an `n`-reading window.
pub fn partition(pad: &SecretPad, n: usize) -> Result<PartitionSets, DetectError> {
    if n < 2 {
        return Err(DetectError::TooShort { len: n, needed: 2 });
    }
    if pad.len() < n {
        return Err(DetectError::LengthMismatch {
            readings: n,
            pad: pad.len(),
        });
    }
    let mut sets = PartitionSets::default();
    for (i, w) in pad.bits()[..n].windows(2).enumerate() {
        match (w[0], w[1]) {
            (false, false) => sets.s00.push(i),
            (false, true) => sets.s01.push(i),
            (true, false) => sets.s10.push(i),
            (true, true) => sets.s11.push(i),
        }
    }
    Ok(sets)
}

/// Parameters of the Δ detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub epsilon: Epsilon,
    /// Δ_th: positions with `|Δ'| > delta_threshold` are filtered out.
    pub delta_threshold: f64,
    /// m; `None` means `⌈(n − 1) / 4⌉` for an `n`-reading window.
    pub min_count: Option<usize>,
    pub band_low: f64,
    pub band_high: f64,
}

impl DetectorConfig {
    /// Band `[2ε, 6ε]` and the automatic minimum count.
    pub fn new(epsilon: Epsilon, delta_threshold: f64) -> Result<Self, DetectError> {
        let e = epsilon.value();
        let cfg = Self {
            epsilon,
            delta_threshold,
            min_count: None,
            band_low: 2.0 * e,
            band_high: 6.0 * e,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_min_count(mut self, m: usize) -> Result<Self, DetectError> {
        self.min_count = Some(m);
        self.validate()?;
        Ok(self)
    }

    pub fn with_band(mut self, low: f64, high: f64) -> Result<Self, DetectError> {
        self.band_low = low;
        self.band_high = high;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DetectError> {
        let bad = |m: String| Err(DetectError::InvalidConfig(m));
        if self.delta_threshold.is_nan() || self.delta_threshold <= 0.0 {
            return bad(format!(
                "delta threshold must be positive, got {}",
                self.delta_threshold
            ));
        }
        if self.band_low.partial_cmp(&self.band_high) != Some(std::cmp::Ordering::Less) {
            return bad(format!("band [{}, {}] is empty", self.band_low, self.band_high));
        }
        if self.min_count == Some(0) {
            return bad("min count must be at least 1".into());
        }
        Ok(())
    }

    /// The effective m for an `n`-reading window.
    pub fn min_count_for(&self, n: usize) -> usize {
        self.min_count.unwrap_or_else(|| default_min_count(n))
    }
}

/// `⌈(n − 1) / 4⌉`, at least 1: half the expected size of `S01 ∪ S10`.
pub fn default_min_count(n: usize) -> usize {
    n.saturating_sub(1).div_ceil(4).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    None,
    BandViolation,
    InsufficientSamples,
}

impl Reason {
    pub fn label(self) -> &'static str {
        match self {
            Reason::None => "none",
            Reason::BandViolation => "band-violation",
            Reason::InsufficientSamples => "insufficient-samples",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Samples that contributed to a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleCounts {
    /// Simple mean difference: readings with `k = 0` and `k = 1`.
    Halves { zeros: usize, ones: usize },
    /// Δ detectors: retained positions per set.
    Transitions {
        s00: usize,
        s01: usize,
        s10: usize,
        s11: usize,
    },
}

impl SampleCounts {
    /// Samples the gauge is computed from.
    pub fn retained(&self) -> usize {
        match *self {
            SampleCounts::Halves { zeros, ones } => zeros + ones,
            SampleCounts::Transitions { s01, s10, .. } => s01 + s10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub alarm: bool,
    pub reason: Reason,
    pub gauge: Option<f64>,
    pub counts: SampleCounts,
}

impl Verdict {
    fn insufficient(counts: SampleCounts) -> Self {
        Self {
            alarm: true,
            reason: Reason::InsufficientSamples,
            gauge: None,
            counts,
        }
    }

    fn banded(gauge: f64, low: f64, high: f64, counts: SampleCounts) -> Self {
        // boundary-inclusive; a NaN gauge is outside
        let inside = gauge >= low && gauge <= high;
        Self {
            alarm: !inside,
            reason: if inside { Reason::None } else { Reason::BandViolation },
            gauge: Some(gauge),
            counts,
        }
    }
}

/// The three detection algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    Simple,
    Delta,
    Filtered,
}

impl Detector {
    pub const ALL: [Detector; 3] = [Detector::Simple, Detector::Delta, Detector::Filtered];

    pub fn label(self) -> &'static str {
        match self {
            Detector::Simple => "simple",
            Detector::Delta => "delta",
            Detector::Filtered => "filtered",
        }
    }

    /// Smallest window the detector can judge.
    pub fn min_window(self) -> usize {
        match self {
            Detector::Simple => 1,
            Detector::Delta | Detector::Filtered => 2,
        }
    }

    /// Judge one window. `readings` and `pad` must have equal length.
    pub fn judge(
        self,
        readings: &DistortedTrace,
        pad: &SecretPad,
        cfg: &DetectorConfig,
    ) -> Result<Verdict, DetectError> {
        check_lengths(readings.len(), pad.len(), self.min_window())?;
        Ok(self.judge_slices(readings.values(), pad.bits(), cfg))
    }

    /// Unchecked slice form used by the harness; lengths must already agree.
    pub(crate) fn judge_slices(self, readings: &[f64], bits: &[bool], cfg: &DetectorConfig) -> Verdict {
        let e = cfg.epsilon.value();
        match self {
            Detector::Simple => simple_gauge(readings, bits, e, 3.0 * e),
            Detector::Delta => delta_gauge(readings, bits, cfg.band_low, cfg.band_high, None),
            Detector::Filtered => delta_gauge(
                readings,
                bits,
                cfg.band_low,
                cfg.band_high,
                Some((cfg.delta_threshold, cfg.min_count_for(readings.len()))),
            ),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Detector {
    type Err = DetectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(Detector::Simple),
            "delta" => Ok(Detector::Delta),
            "filtered" => Ok(Detector::Filtered),
            other => Err(DetectError::UnknownDetector(other.to_string())),
        }
    }
}

fn check_lengths(readings: usize, pad: usize, needed: usize) -> Result<(), DetectError> {
    if readings != pad {
        return Err(DetectError::LengthMismatch { readings, pad });
    }
    if readings < needed {
        return Err(DetectError::TooShort { len: readings, needed });
    }
    Ok(())
}

fn simple_gauge(readings: &[f64], bits: &[bool], low: f64, high: f64) -> Verdict {
    let (mut sum0, mut sum1, mut zeros, mut ones) = (0.0, 0.0, 0usize, 0usize);
    for (&d, &k) in readings.iter().zip(bits) {
        if k {
            sum1 += d;
            ones += 1;
        } else {
            sum0 += d;
            zeros += 1;
        }
    }
    let counts = SampleCounts::Halves { zeros, ones };
    if zeros == 0 || ones == 0 {
        return Verdict::insufficient(counts);
    }
    Verdict::banded(sum1 / ones as f64 - sum0 / zeros as f64, low, high, counts)
}

/// Shared body of the Δ detectors. `filter` is `(Δ_th, m)`.
fn delta_gauge(readings: &[f64], bits: &[bool], low: f64, high: f64, filter: Option<(f64, usize)>) -> Verdict {
    let mut sums = [0.0f64; 4];
    let mut counts = [0usize; 4];
    for (r, k) in readings.windows(2).zip(bits.windows(2)) {
        let dp = r[1] - r[0];
        if let Some((th, _)) = filter {
            if dp.abs() > th {
                continue;
            }
        }
        let set = (k[0] as usize) << 1 | k[1] as usize;
        sums[set] += dp;
        counts[set] += 1;
    }
    let [c00, c01, c10, c11] = counts;
    let tally = SampleCounts::Transitions {
        s00: c00,
        s01: c01,
        s10: c10,
        s11: c11,
    };
    if let Some((_, m)) = filter {
        if c01 + c10 < m {
            return Verdict::insufficient(tally);
        }
    }
    if c01 == 0 || c10 == 0 {
        return Verdict::insufficient(tally);
    }
    let gauge = sums[1] / c01 as f64 - sums[2] / c10 as f64;
    Verdict::banded(gauge, low, high, tally)
}

/// `mean(d' | k = 1) − mean(d' | k = 0)`, accepted inside `[ε, 3ε]`.
pub fn simple_mean_difference(
    readings: &DistortedTrace,
    pad: &SecretPad,
    eps: Epsilon,
) -> Result<Verdict, DetectError> {
    check_lengths(readings.len(), pad.len(), 1)?;
    let e = eps.value();
    Ok(simple_gauge(readings.values(), pad.bits(), e, 3.0 * e))
}

/// `μ01 − μ10` over all Δ' positions, accepted inside `[2ε, 6ε]`.
pub fn delta_mean_difference(readings: &DistortedTrace, pad: &SecretPad, eps: Epsilon) -> Result<Verdict, DetectError> {
    check_lengths(readings.len(), pad.len(), 2)?;
    let e = eps.value();
    Ok(delta_gauge(readings.values(), pad.bits(), 2.0 * e, 6.0 * e, None))
}

/// Filtration, minimum-count check, then the Δ-mean test on what is left.
pub fn filtered_delta_mean_difference(
    readings: &DistortedTrace,
    pad: &SecretPad,
    config: &DetectorConfig,
) -> Result<Verdict, DetectError> {
    Detector::Filtered.judge(readings, pad, config)
}

/// One verdict per tumbling window, tagged with its position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowVerdict {
    pub index: usize,
    pub start: usize,
    pub verdict: Verdict,
}

/// Judge consecutive non-overlapping windows of `window` readings. Window
/// `w` uses pad bits `w·window .. (w+1)·window`; a trailing partial window
/// is not judged.
pub fn judge_windows(
    detector: Detector,
    readings: &DistortedTrace,
    pad: &SecretPad,
    cfg: &DetectorConfig,
    window: usize,
) -> Result<Vec<WindowVerdict>, DetectError> {
    if window < detector.min_window() {
        return Err(DetectError::TooShort {
            len: window,
            needed: detector.min_window(),
        });
    }
    let full = readings.len() / window;
    if full == 0 {
        return Err(DetectError::TooShort {
            len: readings.len(),
            needed: window,
        });
    }
    let used = full * window;
    if pad.len() < used {
        return Err(DetectError::LengthMismatch {
            readings: used,
            pad: pad.len(),
        });
    }
    Ok((0..full)
        .map(|index| {
            let start = index * window;
            let r = &readings.values()[start..start + window];
            let k = &pad.bits()[start..start + window];
            WindowVerdict {
                index,
                start,
                verdict: detector.judge_slices(r, k, cfg),
            }
        })
        .collect())
}

/// Result of threshold calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub delta_threshold: f64,
    pub retain_quantile: f64,
    /// Number of `|Δ|` values the quantile was taken over.
    pub samples: usize,
}

/// Nearest-rank `retain_quantile` quantile of `|Δ|` over attack-free history.
pub fn calibrate_delta_threshold(history: &SensorTrace, retain_quantile: f64) -> Result<Calibration, DetectError> {
    if history.len() < MIN_CALIBRATION_HISTORY {
        return Err(DetectError::HistoryTooShort { len: history.len() });
    }
    if !(retain_quantile > 0.0 && retain_quantile < 1.0) {
        return Err(DetectError::InvalidQuantile(retain_quantile));
    }
    let mut abs: Vec<f64> = delta_sequence(history)
        .expect("history has at least two readings")
        .deltas()
        .iter()
        .map(|d| d.abs())
        .collect();
    abs.sort_by(f64::total_cmp);
    let rank = ((retain_quantile * abs.len() as f64).ceil() as usize).clamp(1, abs.len());
    let th = abs[rank - 1];
    if th <= 0.0 {
        return Err(DetectError::DegenerateCalibration);
    }
    Ok(Calibration {
        delta_threshold: th,
        retain_quantile,
        samples: abs.len(),
    })
}

/// Fraction of `|Δ|` in the history at or below `threshold`; the quantile
/// that would calibrate to roughly that threshold.
pub fn retained_fraction(history: &SensorTrace, threshold: f64) -> Result<f64, DetectError> {
    let deltas = delta_sequence(history).map_err(|_| DetectError::TooShort {
        len: history.len(),
        needed: 2,
    })?;
    let kept = deltas.deltas().iter().filter(|d| d.abs() <= threshold).count();
    Ok(kept as f64 / deltas.len() as f64)
}
