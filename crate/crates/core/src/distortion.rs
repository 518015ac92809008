//! Micro-distortion: shift each reading by `+ε` or `-ε` according to the pad.
//!
//! `d'[i] = d[i] + (2·k[i] − 1)·ε`, and the exact inverse
//! `d[i] = d'[i] − (2·k[i] − 1)·ε`. The distortion is never clamped, so a
//! reading of zero may come out negative.

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::pad::{PadError, SecretPad};
use crate::trace::{SensorTrace, TraceError, TraceStats};

/// Largest fraction of the operating range `choose_epsilon` accepts.
pub const MAX_EPSILON_FRACTION: f64 = 0.05;
/// Fraction used when none is given.
pub const DEFAULT_EPSILON_FRACTION: f64 = 0.005;

#[derive(Debug, Error)]
pub enum DistortionError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("epsilon fraction must lie in (0, {MAX_EPSILON_FRACTION}], got {0}")]
    InvalidFraction(f64),
    #[error("operating range must be positive, got max {0}")]
    NonPositiveRange(f64),
    #[error(transparent)]
    Pad(#[from] PadError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// Distortion magnitude, in trace units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, DistortionError> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(DistortionError::InvalidEpsilon(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `fraction × stats.max`, where the maximum of a calibration trace stands
/// in for the operating range.
pub fn choose_epsilon(stats: &TraceStats, fraction: f64) -> Result<Epsilon, DistortionError> {
    if !(fraction > 0.0 && fraction <= MAX_EPSILON_FRACTION) {
        return Err(DistortionError::InvalidFraction(fraction));
    }
    if stats.max.is_nan() || stats.max <= 0.0 {
        return Err(DistortionError::NonPositiveRange(stats.max));
    }
    Epsilon::new(fraction * stats.max)
}

/// How ε is picked: an explicit value wins over a range fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonChoice {
    Explicit(f64),
    Fraction(f64),
}

impl Default for EpsilonChoice {
    fn default() -> Self {
        EpsilonChoice::Fraction(DEFAULT_EPSILON_FRACTION)
    }
}

impl EpsilonChoice {
    pub fn resolve(self, stats: &TraceStats) -> Result<Epsilon, DistortionError> {
        match self {
            EpsilonChoice::Explicit(v) => Epsilon::new(v),
            EpsilonChoice::Fraction(f) => choose_epsilon(stats, f),
        }
    }
}

/// A received reading stream: either genuinely distorted or forged.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortedTrace {
    values: Vec<f64>,
    sample_period: Duration,
    unit_label: String,
}

impl DistortedTrace {
    /// Treat an arbitrary recorded stream as received readings.
    pub fn from_trace(trace: SensorTrace) -> Self {
        let sample_period = trace.sample_period();
        let unit_label = trace.unit_label().to_string();
        Self {
            values: trace.into_values(),
            sample_period,
            unit_label,
        }
    }

    pub(crate) fn like(source: &SensorTrace, values: Vec<f64>) -> Self {
        debug_assert_eq!(source.len(), values.len());
        Self {
            values,
            sample_period: source.sample_period(),
            unit_label: source.unit_label().to_string(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_period(&self) -> Duration {
        self.sample_period
    }

    pub fn unit_label(&self) -> &str {
        &self.unit_label
    }

    /// Readings `start..start + len`, or `None` when out of range.
    pub fn window(&self, start: usize, len: usize) -> Option<DistortedTrace> {
        let end = start.checked_add(len)?;
        let values = self.values.get(start..end)?.to_vec();
        Some(Self {
            values,
            sample_period: self.sample_period,
            unit_label: self.unit_label.clone(),
        })
    }
}

#[inline]
pub(crate) fn sign(bit: bool) -> f64 {
    if bit {
        1.0
    } else {
        -1.0
    }
}

/// Slice form of [`inject`]; `out` is overwritten.
pub(crate) fn inject_into(values: &[f64], bits: &[bool], eps: f64, out: &mut Vec<f64>) {
    out.clear();
    out.extend(values.iter().zip(bits).map(|(&d, &k)| d + sign(k) * eps));
}

pub fn inject(trace: &SensorTrace, pad: &SecretPad, eps: Epsilon) -> Result<DistortedTrace, DistortionError> {
    pad.ensure_covers(trace.len())?;
    let mut out = Vec::with_capacity(trace.len());
    inject_into(trace.values(), pad.bits(), eps.value(), &mut out);
    Ok(DistortedTrace::like(trace, out))
}

pub fn recover(distorted: &DistortedTrace, pad: &SecretPad, eps: Epsilon) -> Result<SensorTrace, DistortionError> {
    pad.ensure_covers(distorted.len())?;
    let values = distorted
        .values
        .iter()
        .zip(pad.bits())
        .map(|(&d, &k)| d - sign(k) * eps.value())
        .collect();
    Ok(SensorTrace::new(
        values,
        distorted.sample_period,
        distorted.unit_label.clone(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pad::generate_pad;
    use crate::synth::generate_uniform_trace;
    use proptest::prelude::*;

    fn trace(v: &[f64]) -> SensorTrace {
        SensorTrace::from_values(v.to_vec()).unwrap()
    }

    fn pad(bits: &[u8]) -> SecretPad {
        SecretPad::from_bits(bits).unwrap()
    }

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn inject_examples() {
        let d = inject(&trace(&[100.0, 100.0]), &pad(&[1, 0]), eps(40.0)).unwrap();
        assert_eq!(d.values(), &[140.0, 60.0]);
        let d = inject(&trace(&[0.0, 0.0, 0.0]), &pad(&[0, 0, 0]), eps(7.5)).unwrap();
        assert_eq!(d.values(), &[-7.5, -7.5, -7.5]);
    }

    #[test]
    fn recover_examples() {
        let d = DistortedTrace::from_trace(trace(&[140.0, 60.0]));
        assert_eq!(recover(&d, &pad(&[1, 0]), eps(40.0)).unwrap().values(), &[100.0, 100.0]);
        let d = DistortedTrace::from_trace(trace(&[-7.5]));
        assert_eq!(recover(&d, &pad(&[0]), eps(7.5)).unwrap().values(), &[0.0]);
    }

    #[test]
    fn short_pad_is_an_error() {
        let err = inject(&trace(&[1.0, 2.0, 3.0]), &pad(&[1, 0]), eps(1.0)).unwrap_err();
        assert!(matches!(
            err,
            DistortionError::Pad(PadError::TooShort { have: 2, need: 3 })
        ));
        let d = DistortedTrace::from_trace(trace(&[1.0, 2.0]));
        assert!(recover(&d, &pad(&[1]), eps(1.0)).is_err());
    }

    #[test]
    fn longer_pad_uses_prefix() {
        let d = inject(&trace(&[0.0]), &pad(&[1, 0, 0]), eps(2.0)).unwrap();
        assert_eq!(d.values(), &[2.0]);
    }

    #[test]
    fn epsilon_validation() {
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(-1.0).is_err());
        assert!(Epsilon::new(f64::INFINITY).is_err());
    }

    #[test]
    fn choose_epsilon_by_range() {
        let stats = TraceStats::of(&[0.0, 200.0]).unwrap();
        assert_eq!(choose_epsilon(&stats, 0.005).unwrap().value(), 1.0);
        assert!(matches!(
            choose_epsilon(&stats, 0.0),
            Err(DistortionError::InvalidFraction(_))
        ));
        assert!(matches!(
            choose_epsilon(&stats, 0.06),
            Err(DistortionError::InvalidFraction(_))
        ));
        let flat = TraceStats::of(&[0.0, 0.0]).unwrap();
        assert!(matches!(
            choose_epsilon(&flat, 0.005),
            Err(DistortionError::NonPositiveRange(_))
        ));
    }

    #[test]
    fn house_and_solar_epsilon() {
        let house = TraceStats::of(&[225.0, 775.0, 17206.0]).unwrap();
        let by_rule = choose_epsilon(&house, 0.005).unwrap().value();
        assert!((by_rule - 86.03).abs() < 1e-9);
        assert_eq!(EpsilonChoice::Explicit(40.0).resolve(&house).unwrap().value(), 40.0);
        let solar = TraceStats::of(&[0.0, 276.36, 1576.54]).unwrap();
        assert_eq!(EpsilonChoice::Explicit(7.5).resolve(&solar).unwrap().value(), 7.5);
    }

    #[test]
    fn zero_mean_distortion() {
        let n = 10_000;
        let t = generate_uniform_trace(0.0, 1000.0, n, 1).unwrap();
        let e = eps(5.0);
        let bound = 5.0 * e.value() / (n as f64).sqrt();
        for seed in 0..200 {
            let p = generate_pad(n, seed).unwrap();
            let d = inject(&t, &p, e).unwrap();
            let mean: f64 = d.values().iter().zip(t.values()).map(|(a, b)| a - b).sum::<f64>() / n as f64;
            assert!(mean.abs() <= bound, "seed {seed}: {mean}");
        }
    }

    #[test]
    fn round_trip_ten_thousand() {
        let t = generate_uniform_trace(-5e3, 5e3, 10_000, 21).unwrap();
        let p = generate_pad(10_000, 22).unwrap();
        let e = eps(37.25);
        let back = recover(&inject(&t, &p, e).unwrap(), &p, e).unwrap();
        let max_err = t
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-9);
    }

    proptest! {
        #[test]
        fn inject_recover_inverse(
            values in prop::collection::vec(-1e6f64..1e6, 1..200),
            seed in any::<u64>(),
            e in 1e-3f64..1e3,
        ) {
            let t = trace(&values);
            let p = generate_pad(values.len(), seed).unwrap();
            let e = eps(e);
            let d = inject(&t, &p, e).unwrap();
            prop_assert_eq!(d.len(), t.len());
            prop_assert_eq!(d.sample_period(), t.sample_period());
            for (a, b) in d.values().iter().zip(t.values()) {
                prop_assert!(((a - b).abs() - e.value()).abs() <= 1e-9 * b.abs().max(1.0));
            }
            let back = recover(&d, &p, e).unwrap();
            for (a, b) in back.values().iter().zip(t.values()) {
                prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }
    }
}
