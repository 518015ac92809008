//! Forged streams from an impersonator who knows the true readings but not
//! the pad. None of these functions take a [`SecretPad`](crate::pad::SecretPad).

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use thiserror::Error;

use crate::distortion::{sign, DistortedTrace, Epsilon};
use crate::rng::seeded_rng;
use crate::trace::SensorTrace;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("flood amplitude must be positive and finite, got {0}")]
    InvalidAmplitude(f64),
    #[error("unknown attack {0:?} (expected none, eda, rda or flood)")]
    UnknownKind(String),
}

/// Exact duplication: replay the true readings with no distortion.
pub fn eda(trace: &SensorTrace) -> DistortedTrace {
    DistortedTrace::like(trace, trace.values().to_vec())
}

/// Random distortion: add `±ε` with an independent fair coin per slot.
pub fn rda(trace: &SensorTrace, eps: Epsilon, seed: u64) -> DistortedTrace {
    let mut out = Vec::with_capacity(trace.len());
    rda_into(trace.values(), eps.value(), seed, &mut out);
    DistortedTrace::like(trace, out)
}

pub(crate) fn rda_into(values: &[f64], eps: f64, seed: u64, out: &mut Vec<f64>) {
    let mut rng = seeded_rng(seed);
    out.clear();
    for chunk in values.chunks(64) {
        let word: u64 = rng.random();
        out.extend(
            chunk
                .iter()
                .enumerate()
                .map(|(j, &d)| d + sign((word >> j) & 1 == 1) * eps),
        );
    }
}

/// Noise flood: add `uniform(-amplitude, amplitude)` to every slot.
pub fn noise_flood(trace: &SensorTrace, amplitude: f64, seed: u64) -> Result<DistortedTrace, AttackError> {
    let mut out = Vec::with_capacity(trace.len());
    flood_into(trace.values(), amplitude, seed, &mut out)?;
    Ok(DistortedTrace::like(trace, out))
}

pub(crate) fn flood_into(values: &[f64], amplitude: f64, seed: u64, out: &mut Vec<f64>) -> Result<(), AttackError> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(AttackError::InvalidAmplitude(amplitude));
    }
    let mut rng = seeded_rng(seed);
    out.clear();
    out.extend(values.iter().map(|&d| d + rng.random_range(-amplitude..=amplitude)));
    Ok(())
}

/// Which stream the defender receives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackKind {
    /// The genuine sensor.
    None,
    ExactDuplication,
    /// `±ε` guessing; the attacker is assumed to know ε.
    RandomDistortion {
        eps: Epsilon,
    },
    NoiseFlood {
        amplitude: f64,
    },
}

impl AttackKind {
    /// Short name used in reports and on the command line.
    pub fn label(&self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::ExactDuplication => "eda",
            AttackKind::RandomDistortion { .. } => "rda",
            AttackKind::NoiseFlood { .. } => "flood",
        }
    }

    pub fn is_attack(&self) -> bool {
        !matches!(self, AttackKind::None)
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Attack names without their parameters, as parsed from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackName {
    None,
    Eda,
    Rda,
    Flood,
}

impl FromStr for AttackName {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(AttackName::None),
            "eda" => Ok(AttackName::Eda),
            "rda" => Ok(AttackName::Rda),
            "flood" => Ok(AttackName::Flood),
            other => Err(AttackError::UnknownKind(other.to_string())),
        }
    }
}

impl AttackName {
    pub fn with_params(self, eps: Epsilon, flood_amplitude: f64) -> Result<AttackKind, AttackError> {
        Ok(match self {
            AttackName::None => AttackKind::None,
            AttackName::Eda => AttackKind::ExactDuplication,
            AttackName::Rda => AttackKind::RandomDistortion { eps },
            AttackName::Flood => {
                if !(flood_amplitude > 0.0 && flood_amplitude.is_finite()) {
                    return Err(AttackError::InvalidAmplitude(flood_amplitude));
                }
                AttackKind::NoiseFlood {
                    amplitude: flood_amplitude,
                }
            }
        })
    }
}

/// An attack together with the seed driving its randomness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackScenario {
    pub kind: AttackKind,
    pub seed: u64,
}

impl AttackScenario {
    pub fn new(kind: AttackKind, seed: u64) -> Result<Self, AttackError> {
        if let AttackKind::NoiseFlood { amplitude } = kind {
            if !(amplitude > 0.0 && amplitude.is_finite()) {
                return Err(AttackError::InvalidAmplitude(amplitude));
            }
        }
        Ok(Self { kind, seed })
    }

    /// The forged stream, or `None` when the scenario is the genuine sensor.
    pub fn forge(&self, trace: &SensorTrace) -> Option<DistortedTrace> {
        let mut out = Vec::with_capacity(trace.len());
        self.forge_into(trace.values(), self.seed, &mut out)
            .then(|| DistortedTrace::like(trace, out))
    }

    /// Slice form of [`forge`](Self::forge) with an explicit seed; returns
    /// `false` (and leaves `out` untouched) for [`AttackKind::None`].
    pub(crate) fn forge_into(&self, values: &[f64], seed: u64, out: &mut Vec<f64>) -> bool {
        match self.kind {
            AttackKind::None => return false,
            AttackKind::ExactDuplication => {
                out.clear();
                out.extend_from_slice(values);
            }
            AttackKind::RandomDistortion { eps } => rda_into(values, eps.value(), seed, out),
            AttackKind::NoiseFlood { amplitude } => {
                flood_into(values, amplitude, seed, out).expect("amplitude checked on construction")
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_gradual_trace, GradualModel};
    use crate::trace::delta_sequence;

    fn trace(v: &[f64]) -> SensorTrace {
        SensorTrace::from_values(v.to_vec()).unwrap()
    }

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn eda_is_identity() {
        assert_eq!(eda(&trace(&[100.0, 102.0])).values(), &[100.0, 102.0]);
        let c = trace(&[500.0; 50]);
        assert_eq!(eda(&c).values(), c.values());
    }

    #[test]
    fn rda_deviations_are_exactly_eps() {
        let d = rda(&trace(&[100.0, 100.0]), eps(40.0), 3);
        assert!(d.values().iter().all(|v| *v == 60.0 || *v == 140.0));

        let n = 10_000;
        let t = trace(&vec![0.0; n]);
        let d = rda(&t, eps(1.5), 8);
        assert!(d.values().iter().all(|v| v.abs() == 1.5));
        let up = d.values().iter().filter(|v| **v > 0.0).count() as f64 / n as f64;
        assert!((up - 0.5).abs() < 0.02, "{up}");
        assert_eq!(d, rda(&t, eps(1.5), 8));
        assert_ne!(d, rda(&t, eps(1.5), 9));
    }

    #[test]
    fn flood_bounded_and_deterministic() {
        let t = trace(&vec![10.0; 1000]);
        let d = noise_flood(&t, 0.5, 4).unwrap();
        assert!(d.values().iter().all(|v| (v - 10.0).abs() <= 0.5));
        assert_eq!(d, noise_flood(&t, 0.5, 4).unwrap());
        assert!(noise_flood(&t, 0.0, 4).is_err());
        assert!(noise_flood(&t, f64::NAN, 4).is_err());
    }

    #[test]
    fn tiny_flood_behaves_like_eda() {
        let t = trace(&[1.0, 2.0, 3.0]);
        let d = noise_flood(&t, 1e-12, 1).unwrap();
        for (a, b) in d.values().iter().zip(t.values()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn loud_flood_pushes_deltas_past_threshold() {
        let th = 200.0;
        let t = generate_gradual_trace(&GradualModel::HOUSE, 1_000_000, 17).unwrap();
        let d = noise_flood(&t, 10.0 * th, 18).unwrap();
        let forged = delta_sequence(&SensorTrace::from_values(d.values().to_vec()).unwrap()).unwrap();
        let over = forged.deltas().iter().filter(|x| x.abs() > th).count() as f64 / forged.len() as f64;
        assert!(over >= 0.90, "{over}");
    }

    #[test]
    fn scenario_forging() {
        let t = trace(&[1.0, 2.0]);
        assert!(AttackScenario::new(AttackKind::None, 0).unwrap().forge(&t).is_none());
        let s = AttackScenario::new(AttackKind::ExactDuplication, 0).unwrap();
        assert_eq!(s.forge(&t).unwrap().values(), t.values());
        assert!(AttackScenario::new(AttackKind::NoiseFlood { amplitude: -1.0 }, 0).is_err());
        let s = AttackScenario::new(AttackKind::RandomDistortion { eps: eps(2.0) }, 5).unwrap();
        assert_eq!(s.forge(&t).unwrap(), rda(&t, eps(2.0), 5));
    }

    #[test]
    fn names() {
        assert_eq!("rda".parse::<AttackName>().unwrap(), AttackName::Rda);
        assert!("replay".parse::<AttackName>().is_err());
        let k = AttackName::Flood.with_params(eps(1.0), 50.0).unwrap();
        assert_eq!(k.label(), "flood");
        assert!(AttackName::Flood.with_params(eps(1.0), 0.0).is_err());
        assert!(!AttackKind::None.is_attack());
    }
}
