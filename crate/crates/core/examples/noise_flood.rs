//! How filtration turns a noise flood into an insufficient-samples alarm as
//! the flood amplitude grows.

use std::sync::Arc;

use microdistort::eval::simulate;
use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preset = Preset::House;
    let source = Arc::new(preset.synthetic_source(1)?);
    println!("{:>10} {:>10} {:>14}", "amplitude", "detected%", "insufficient%");
    for amplitude in [50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0] {
        let cfg = TrialConfig {
            detector: Detector::Filtered,
            detector_config: preset.detector_config(),
            attack: AttackScenario::new(AttackKind::NoiseFlood { amplitude }, 3)?,
            window: 60,
            trials: 2000,
            source: source.clone(),
            master_seed: 4,
        };
        let o = simulate(&cfg)?;
        println!(
            "{amplitude:>10} {:>10.2} {:>14.2}",
            100.0 * o.alarm_rate(),
            100.0 * o.insufficient as f64 / o.trials as f64
        );
    }
    Ok(())
}
