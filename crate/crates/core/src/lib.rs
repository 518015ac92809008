//! Authenticate sensor streams by injecting a secret-keyed micro-distortion
//! and testing for it.
//!
//! A sensor and a defender share a one-time pad `k`. Each reading `d[i]` is
//! sent as `d[i] + ε` when `k[i] = 1` and `d[i] − ε` otherwise, with ε a
//! fraction of a percent of the operating range. Consumers use the readings
//! as they are. The defender checks that the pad's fingerprint is present;
//! an impersonator who crashed the sensor and replays or predicts its
//! readings cannot reproduce it without the pad.
//!
//! The main test works on consecutive differences rather than raw readings,
//! because in many plants readings change slowly most of the time:
//!
//! ```
//! use microdistort::prelude::*;
//!
//! let trace = SensorTrace::from_values(vec![1000.0; 60]).unwrap();
//! let pad = generate_pad(trace.len(), 7).unwrap();
//! let eps = Epsilon::new(40.0).unwrap();
//! let cfg = DetectorConfig::new(eps, 200.0).unwrap();
//!
//! let genuine = inject(&trace, &pad, eps).unwrap();
//! assert!(!filtered_delta_mean_difference(&genuine, &pad, &cfg).unwrap().alarm);
//!
//! let forged = eda(&trace);
//! assert!(filtered_delta_mean_difference(&forged, &pad, &cfg).unwrap().alarm);
//! ```
//!
//! [`eval`] estimates false-positive and false-negative rates by Monte Carlo
//! over synthetic or recorded traces; [`cli`] exposes everything as a
//! command-line tool.

pub mod attack;
pub mod cli;
pub mod detect;
pub mod distortion;
pub mod eval;
pub mod pad;
pub mod rng;
pub mod synth;
pub mod trace;

pub mod prelude {
    pub use crate::attack::{eda, noise_flood, rda, AttackKind, AttackScenario};
    pub use crate::detect::{
        calibrate_delta_threshold, delta_mean_difference, filtered_delta_mean_difference, partition,
        simple_mean_difference, Detector, DetectorConfig, Reason, Verdict,
    };
    pub use crate::distortion::{choose_epsilon, inject, recover, DistortedTrace, Epsilon};
    pub use crate::eval::{required_samples, run_trials, sweep, FpFnReport, Preset, TraceSource, TrialConfig};
    pub use crate::pad::{generate_pad, load_pad, save_pad, SecretPad};
    pub use crate::synth::{
        generate_gradual_trace, generate_solar_days, generate_uniform_trace, GradualModel, SolarModel,
    };
    pub use crate::trace::{delta_sequence, load_trace, trace_stats, ColumnSelector, SensorTrace, TraceStats};
}
