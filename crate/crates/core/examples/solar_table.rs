//! FP/FN table for the solar preset on synthetic daytime segments.

use std::sync::Arc;

use microdistort::eval::TablePlan;
use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map_or(Ok(2000), |s| s.parse())?;
    let preset = Preset::Solar;
    let source = preset.synthetic_source(1)?;
    if let TraceSource::Recorded { trace, .. } = &source {
        eprintln!("readings: {}", trace_stats(trace));
        eprintln!("|delta|:  {}", delta_sequence(trace)?.abs_stats());
    }
    let report = TablePlan::for_preset(preset, trials, 1).run(Arc::new(source))?;
    print!("{report}");
    Ok(())
}
