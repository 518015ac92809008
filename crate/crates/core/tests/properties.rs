use std::sync::Arc;

use microdistort::attack::AttackKind;
use microdistort::detect::{partition, DetectorConfig, Reason, SampleCounts};
use microdistort::eval::{simulate, Preset, TrialConfig};
use microdistort::prelude::*;
use proptest::prelude::*;

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_shift_follows_key_pairs(seed in any::<u64>(), n in 2usize..400, e in 0.01f64..100.0) {
        let trace = generate_uniform_trace(-500.0, 500.0, n, seed).unwrap();
        let pad = generate_pad(n, seed.wrapping_add(1)).unwrap();
        let d = delta_sequence(&trace).unwrap();
        let distorted = inject(&trace, &pad, eps(e)).unwrap();
        let dp = delta_sequence(&SensorTrace::from_values(distorted.values().to_vec()).unwrap()).unwrap();
        let sets = partition(&pad, n).unwrap();
        prop_assert_eq!(sets.s00.len() + sets.s01.len() + sets.s10.len() + sets.s11.len(), n - 1);
        for i in 0..n - 1 {
            let shift = dp.deltas()[i] - d.deltas()[i];
            let want = match sets.pair_of(i).unwrap() {
                (false, true) => 2.0 * e,
                (true, false) => -2.0 * e,
                _ => 0.0,
            };
            prop_assert!((shift - want).abs() < 1e-9);
        }
    }

    #[test]
    fn tighter_threshold_retains_fewer(seed in any::<u64>(), n in 10usize..300, a in 1.0f64..500.0, b in 1.0f64..500.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let trace = generate_gradual_trace(&GradualModel::HOUSE, n, seed).unwrap();
        let pad = generate_pad(n, seed ^ 7).unwrap();
        let stream = inject(&trace, &pad, eps(40.0)).unwrap();
        let retained = |th: f64| {
            let cfg = DetectorConfig::new(eps(40.0), th).unwrap().with_min_count(1).unwrap();
            match Detector::Filtered.judge(&stream, &pad, &cfg).unwrap().counts {
                SampleCounts::Transitions { s01, s10, .. } => s01 + s10,
                other => panic!("{other:?}"),
            }
        };
        prop_assert!(retained(lo) <= retained(hi));
    }

    #[test]
    fn insufficient_reason_matches_count(seed in any::<u64>(), n in 4usize..200, th in 1.0f64..300.0) {
        let trace = generate_gradual_trace(&GradualModel::HOUSE, n, seed).unwrap();
        let pad = generate_pad(n, seed ^ 3).unwrap();
        let stream = inject(&trace, &pad, eps(40.0)).unwrap();
        let cfg = DetectorConfig::new(eps(40.0), th).unwrap();
        let v = Detector::Filtered.judge(&stream, &pad, &cfg).unwrap();
        let short = v.counts.retained() < cfg.min_count_for(n);
        if short {
            prop_assert_eq!(v.reason, Reason::InsufficientSamples);
            prop_assert!(v.alarm);
        }
        prop_assert_eq!(v.alarm, v.reason != Reason::None);
    }
}

#[test]
fn pad_blind_guessing_centres_on_zero() {
    // an attacker's ±ε guesses are independent of the pad, so the gauge has mean 0
    let n = 200;
    let e = 40.0;
    let trace = SensorTrace::from_values(vec![500.0; n]).unwrap();
    let trials = 2000;
    let gauges: Vec<f64> = (0..trials)
        .filter_map(|t| {
            let pad = generate_pad(n, 1000 + t).unwrap();
            let forged = rda(&trace, eps(e), 5000 + t);
            delta_mean_difference(&forged, &pad, eps(e)).unwrap().gauge
        })
        .collect();
    let k = gauges.len() as f64;
    let mean = gauges.iter().sum::<f64>() / k;
    let var = gauges.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let se = (var / k).sqrt();
    assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn master_seed_changes_outcomes_but_not_between_runs() {
    let source = Arc::new(Preset::House.synthetic_source(8).unwrap());
    let cfg = |seed| TrialConfig {
        detector: Detector::Simple,
        detector_config: Preset::House.detector_config(),
        attack: AttackScenario::new(AttackKind::None, 0).unwrap(),
        window: 60,
        trials: 3000,
        source: source.clone(),
        master_seed: seed,
    };
    let a = simulate(&cfg(1)).unwrap();
    assert_eq!(a, simulate(&cfg(1)).unwrap());
    let others: Vec<_> = (2..6).map(|s| simulate(&cfg(s)).unwrap().alarms).collect();
    assert!(others.iter().any(|&x| x != a.alarms), "{others:?} vs {}", a.alarms);
}

#[test]
fn recovered_trace_matches_original() {
    let trace = generate_gradual_trace(&GradualModel::HOUSE, 5000, 2).unwrap();
    let pad = generate_pad(5000, 3).unwrap();
    let e = eps(40.0);
    let back = recover(&inject(&trace, &pad, e).unwrap(), &pad, e).unwrap();
    for (a, b) in back.values().iter().zip(trace.values()) {
        assert!((a - b).abs() < 1e-9);
    }
}
