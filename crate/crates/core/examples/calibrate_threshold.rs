//! Pick Δ_th from attack-free history and see what it costs in retained
//! samples.

use microdistort::detect::retained_fraction;
use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let history = generate_gradual_trace(&GradualModel::HOUSE, 7 * 86_400, 21)?;
    let d = delta_sequence(&history)?;
    println!("|delta| over a week: {}", d.abs_stats());
    for q in [0.9, 0.99, 0.999] {
        let c = calibrate_delta_threshold(&history, q)?;
        println!("keep {:>5.1}% -> delta_th {:>8.2}", 100.0 * q, c.delta_threshold);
    }
    for th in [50.0, 200.0, 1000.0] {
        println!(
            "delta_th {th:>6} keeps {:.3}%",
            100.0 * retained_fraction(&history, th)?
        );
    }
    Ok(())
}
