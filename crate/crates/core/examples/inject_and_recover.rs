//! Distort a household trace with a pad, show the first few readings, and
//! undo the distortion with the same pad.

use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trace = generate_gradual_trace(&GradualModel::HOUSE, 86_400, 1)?;
    let pad = generate_pad(trace.len(), 2)?;
    let stats = trace_stats(&trace);
    let eps = choose_epsilon(&stats, 0.005)?;
    println!("one day of readings: {stats}");
    println!("epsilon at 0.5% of the maximum: {eps} {}", trace.unit_label());

    let sent = inject(&trace, &pad, eps)?;
    println!("{:>5} {:>4} {:>12} {:>12}", "i", "k", "true", "sent");
    for i in 0..8 {
        println!(
            "{i:>5} {:>4} {:>12.3} {:>12.3}",
            pad.bits()[i] as u8,
            trace.values()[i],
            sent.values()[i]
        );
    }

    let back = recover(&sent, &pad, eps)?;
    let worst = back
        .values()
        .iter()
        .zip(trace.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("largest recovery error: {worst:e}");
    Ok(())
}
