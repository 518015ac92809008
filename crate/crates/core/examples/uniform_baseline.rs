//! Window size the simple-mean detector needs on i.i.d. uniform readings,
//! against the filtered Δ detector on the house trace. Takes a few minutes
//! in release mode.

use std::sync::Arc;

use microdistort::eval::SearchOptions;
use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SearchOptions {
        master_seed: 3,
        ..SearchOptions::default()
    };
    let uniform = Preset::Uniform;
    let source = Arc::new(uniform.synthetic_source(0)?);
    for target in [0.01, 0.001] {
        let s = required_samples(
            Detector::Simple,
            &uniform.detector_config(),
            source.clone(),
            target,
            &opts,
        )?;
        println!("uniform, simple, target {:.1}%: n = {}", 100.0 * target, s.n);
        for g in &s.grid {
            println!(
                "  n={:>7} fp={:.3}% fn={:.3}% {}",
                g.n,
                100.0 * g.fp_rate,
                100.0 * g.fn_rate,
                if g.passed { "ok" } else { "" }
            );
        }
    }

    let house = Preset::House;
    let source = Arc::new(house.synthetic_source(1)?);
    for d in [Detector::Filtered, Detector::Delta, Detector::Simple] {
        let s = required_samples(d, &house.detector_config(), source.clone(), 0.01, &opts)?;
        println!("house, {d}, target 1%: n = {}", s.n);
    }
    Ok(())
}
