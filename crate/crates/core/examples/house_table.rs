//! FP/FN table for the household preset on the synthetic house trace.
//!
//! `cargo run --release --example house_table -- 10000` for full precision.

use std::sync::Arc;

use microdistort::eval::TablePlan;
use microdistort::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map_or(Ok(2000), |s| s.parse())?;
    let preset = Preset::House;
    let source = Arc::new(preset.synthetic_source(1)?);
    let report = TablePlan::for_preset(preset, trials, 1).run(source)?;
    print!("{report}");
    Ok(())
}
