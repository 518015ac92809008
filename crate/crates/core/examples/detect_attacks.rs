//! Run all three detectors on one window of the genuine stream and of each
//! impersonation strategy.

use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 120;
    let trace = generate_gradual_trace(&GradualModel::HOUSE, n, 11)?;
    let pad = generate_pad(n, 12)?;
    let eps = Epsilon::new(40.0)?;
    let cfg = DetectorConfig::new(eps, 200.0)?;

    let streams = [
        ("genuine", inject(&trace, &pad, eps)?),
        ("eda", eda(&trace)),
        ("rda", rda(&trace, eps, 13)),
        ("flood", noise_flood(&trace, 2000.0, 14)?),
    ];
    println!(
        "band [{}, {}], m = {}",
        cfg.band_low,
        cfg.band_high,
        cfg.min_count_for(n)
    );
    println!(
        "{:<8} {:<9} {:>10} {:>6}  reason",
        "stream", "detector", "gauge", "alarm"
    );
    for (name, stream) in &streams {
        for d in Detector::ALL {
            let v = d.judge(stream, &pad, &cfg)?;
            let gauge = v.gauge.map_or("-".to_string(), |g| format!("{g:.2}"));
            println!(
                "{name:<8} {:<9} {gauge:>10} {:>6}  {}",
                d.label(),
                v.alarm,
                v.reason.label()
            );
        }
    }
    Ok(())
}
