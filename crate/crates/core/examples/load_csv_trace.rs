//! Load a recorded trace from CSV and evaluate the detectors on it.
//!
//! ```text
//! cargo run --release --example load_csv_trace -- readings.csv mains 40 200
//! ```
//!
//! Without arguments a small synthetic CSV is written to a temporary file
//! first.

use std::sync::Arc;

use microdistort::eval::TablePlan;
use microdistort::prelude::*;
use microdistort::trace::write_values;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let demo = std::env::temp_dir().join("microdistort_demo.csv");
    let (path, column, eps, th) = match args.as_slice() {
        [path, column, eps, th] => (path.into(), column.parse()?, eps.parse()?, th.parse()?),
        [] => {
            let t = generate_gradual_trace(&GradualModel::HOUSE, 20_000, 5)?;
            write_values(std::fs::File::create(&demo)?, "mains", t.values())?;
            (demo.clone(), "mains".parse()?, 40.0, 200.0)
        }
        _ => return Err("usage: load_csv_trace [FILE COLUMN EPSILON DELTA_TH]".into()),
    };

    let trace = load_trace(&path, &column)?;
    println!(
        "{} readings from {}: {}",
        trace.len(),
        path.display(),
        trace_stats(&trace)
    );
    let mut plan = TablePlan::for_preset(Preset::House, 1000, 0);
    plan.detector_config = DetectorConfig::new(Epsilon::new(eps)?, th)?;
    plan.attacks = vec![
        AttackKind::None,
        AttackKind::ExactDuplication,
        AttackKind::RandomDistortion {
            eps: Epsilon::new(eps)?,
        },
    ];
    plan.windows = vec![30, 60, 150];
    print!("{}", plan.run(Arc::new(TraceSource::recorded(trace)))?);
    Ok(())
}
