//! Synthetic trace generators.
//!
//! Three sources are provided: i.i.d. uniform readings, a two-regime random
//! walk ([`GradualModel`]) that dwells on small steps and occasionally jumps,
//! and a daytime solar output model ([`SolarModel`]). All of them are pure
//! functions of their parameters and seed.

use std::time::Duration;

use rand::Rng as _;
use rand_distr::{Distribution, Exp, Normal};

use crate::rng::seeded_rng;
use crate::trace::{SensorTrace, TraceError};

/// `n` i.i.d. readings uniform on `[low, high]`.
pub fn generate_uniform_trace(low: f64, high: f64, n: usize, seed: u64) -> Result<SensorTrace, TraceError> {
    let mut values = vec![0.0; n];
    fill_uniform(&mut values, low, high, seed)?;
    SensorTrace::from_values(values)
}

/// Fill `out` with uniform readings; same stream as [`generate_uniform_trace`].
pub fn fill_uniform(out: &mut [f64], low: f64, high: f64, seed: u64) -> Result<(), TraceError> {
    if !(low.is_finite() && high.is_finite() && low < high) {
        return Err(TraceError::InvalidRange { low, high });
    }
    if out.is_empty() {
        return Err(TraceError::ZeroCount);
    }
    let mut rng = seeded_rng(seed);
    for v in out.iter_mut() {
        *v = rng.random_range(low..=high);
    }
    Ok(())
}

/// Random walk mixing small Gaussian steps with rare exponential jumps.
///
/// With probability `dwell_ratio` a step is `N(0, small_step_scale²)`;
/// otherwise it is a jump whose size is exponential with mean `jump_scale`.
/// Jumps lean back toward `base_level` (an upward jump has probability
/// `1 / (1 + exp((x - base_level) / jump_scale))`), and every reading is
/// clamped to `[floor, ceiling]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradualModel {
    pub base_level: f64,
    pub dwell_ratio: f64,
    pub small_step_scale: f64,
    pub jump_scale: f64,
    pub floor: f64,
    pub ceiling: f64,
}

impl GradualModel {
    /// Household mains consumption at 1 Hz: a few watts of jitter, an
    /// appliance switching every four minutes or so.
    pub const HOUSE: GradualModel = GradualModel {
        base_level: 450.0,
        dwell_ratio: 0.996,
        small_step_scale: 4.5,
        jump_scale: 1000.0,
        floor: 225.0,
        ceiling: 17206.0,
    };

    pub fn validate(&self) -> Result<(), TraceError> {
        let bad = |msg: &str| Err(TraceError::InvalidModel(msg.to_string()));
        let all = [
            self.base_level,
            self.dwell_ratio,
            self.small_step_scale,
            self.jump_scale,
            self.floor,
            self.ceiling,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite");
        }
        if !(self.floor <= self.base_level && self.base_level <= self.ceiling) {
            return bad("need floor <= base_level <= ceiling");
        }
        if !(0.0..=1.0).contains(&self.dwell_ratio) {
            return bad("dwell_ratio must lie in [0, 1]");
        }
        if self.small_step_scale < 0.0 {
            return bad("small_step_scale must be non-negative");
        }
        if self.jump_scale <= self.small_step_scale {
            return bad("jump_scale must exceed small_step_scale");
        }
        Ok(())
    }

    /// Set one parameter from a `key=value` pair.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), TraceError> {
        let slot = match key {
            "base_level" => &mut self.base_level,
            "dwell_ratio" => &mut self.dwell_ratio,
            "small_step_scale" => &mut self.small_step_scale,
            "jump_scale" => &mut self.jump_scale,
            "floor" => &mut self.floor,
            "ceiling" => &mut self.ceiling,
            _ => return Err(TraceError::InvalidModel(format!("unknown key {key:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

pub fn generate_gradual_trace(model: &GradualModel, n: usize, seed: u64) -> Result<SensorTrace, TraceError> {
    model.validate()?;
    if n == 0 {
        return Err(TraceError::ZeroCount);
    }
    let mut rng = seeded_rng(seed);
    let small = Normal::new(0.0, model.small_step_scale).expect("validated scale");
    let jump = Exp::new(1.0 / model.jump_scale).expect("validated scale");
    let mut x = model.base_level;
    let mut values = Vec::with_capacity(n);
    values.push(x);
    for _ in 1..n {
        let step = if rng.random_bool(model.dwell_ratio) {
            small.sample(&mut rng)
        } else {
            let p_up = 1.0 / (1.0 + ((x - model.base_level) / model.jump_scale).exp());
            let size = jump.sample(&mut rng);
            if rng.random_bool(p_up) {
                size
            } else {
                -size
            }
        };
        x = (x + step).clamp(model.floor, model.ceiling);
        values.push(x);
    }
    SensorTrace::new(values, Duration::from_secs(1), "W")
}

/// Per-minute output of a solar plant, restricted to a daytime span.
///
/// Each day follows a clear-sky sine arch between `sunrise_hour` and
/// `sunset_hour`, scaled by a per-day clearness factor drawn from
/// `[min_clearness, 1]`. An AR(1) deviation (`ar_coeff`, innovation sd
/// `ar_noise`) rides on top, and passing clouds start with probability
/// `cloud_rate` per minute, shave off up to `cloud_depth` of the clear-sky
/// output and last a geometric number of minutes with mean `cloud_minutes`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarModel {
    pub peak: f64,
    pub sunrise_hour: f64,
    pub sunset_hour: f64,
    pub window_start_hour: f64,
    pub window_end_hour: f64,
    pub min_clearness: f64,
    pub ar_coeff: f64,
    pub ar_noise: f64,
    pub cloud_rate: f64,
    pub cloud_depth: f64,
    pub cloud_minutes: f64,
}

impl SolarModel {
    /// A ~1.5 MW plant sampled every minute from 8am to 6pm.
    pub const PLANT: SolarModel = SolarModel {
        peak: 1576.54,
        sunrise_hour: 6.75,
        sunset_hour: 19.25,
        window_start_hour: 8.0,
        window_end_hour: 18.0,
        min_clearness: 0.6,
        ar_coeff: 0.98,
        ar_noise: 2.5,
        cloud_rate: 0.004,
        cloud_depth: 0.05,
        cloud_minutes: 6.0,
    };

    /// Readings per day inside the daytime window.
    pub fn points_per_day(&self) -> usize {
        ((self.window_end_hour - self.window_start_hour) * 60.0).round() as usize
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        let bad = |msg: &str| Err(TraceError::InvalidModel(msg.to_string()));
        if !(self.peak > 0.0 && self.peak.is_finite()) {
            return bad("peak must be positive");
        }
        if !(0.0 <= self.sunrise_hour
            && self.sunrise_hour <= self.window_start_hour
            && self.window_start_hour < self.window_end_hour
            && self.window_end_hour <= self.sunset_hour
            && self.sunset_hour <= 24.0)
        {
            return bad("need sunrise <= window start < window end <= sunset within one day");
        }
        if !(0.0..=1.0).contains(&self.min_clearness)
            || !(0.0..1.0).contains(&self.ar_coeff)
            || !(0.0..=1.0).contains(&self.cloud_rate)
            || !(0.0..=1.0).contains(&self.cloud_depth)
        {
            return bad("min_clearness, cloud_rate, cloud_depth must lie in [0, 1] and ar_coeff in [0, 1)");
        }
        if !(self.ar_noise >= 0.0 && self.cloud_minutes >= 1.0) {
            return bad("ar_noise must be non-negative and cloud_minutes at least 1");
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), TraceError> {
        let slot = match key {
            "peak" => &mut self.peak,
            "sunrise_hour" => &mut self.sunrise_hour,
            "sunset_hour" => &mut self.sunset_hour,
            "window_start_hour" => &mut self.window_start_hour,
            "window_end_hour" => &mut self.window_end_hour,
            "min_clearness" => &mut self.min_clearness,
            "ar_coeff" => &mut self.ar_coeff,
            "ar_noise" => &mut self.ar_noise,
            "cloud_rate" => &mut self.cloud_rate,
            "cloud_depth" => &mut self.cloud_depth,
            "cloud_minutes" => &mut self.cloud_minutes,
            _ => return Err(TraceError::InvalidModel(format!("unknown key {key:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

/// Generate `days` daytime segments, each [`SolarModel::points_per_day`]
/// readings long, in kW.
pub fn generate_solar_days(model: &SolarModel, days: usize, seed: u64) -> Result<Vec<SensorTrace>, TraceError> {
    model.validate()?;
    if days == 0 {
        return Err(TraceError::ZeroCount);
    }
    let mut rng = seeded_rng(seed);
    let innovation = Normal::new(0.0, model.ar_noise).expect("validated sd");
    let stationary_sd = model.ar_noise / (1.0 - model.ar_coeff * model.ar_coeff).sqrt();
    let per_day = model.points_per_day();
    let daylight = model.sunset_hour - model.sunrise_hour;

    let mut out = Vec::with_capacity(days);
    for _ in 0..days {
        let clearness = rng.random_range(model.min_clearness..=1.0);
        let mut dev = Normal::new(0.0, stationary_sd.max(f64::MIN_POSITIVE))
            .expect("positive sd")
            .sample(&mut rng);
        let mut cloud_left = 0u32;
        let mut cloud_cut = 0.0;
        let mut values = Vec::with_capacity(per_day);
        for minute in 0..per_day {
            let hour = model.window_start_hour + minute as f64 / 60.0;
            let phase = std::f64::consts::PI * (hour - model.sunrise_hour) / daylight;
            let clear = model.peak * clearness * phase.sin().max(0.0);
            if cloud_left == 0 && rng.random_bool(model.cloud_rate) {
                cloud_cut = rng.random_range(0.0..=model.cloud_depth);
                cloud_left = 1;
                while rng.random_bool(1.0 - 1.0 / model.cloud_minutes) {
                    cloud_left += 1;
                }
            }
            let shade = if cloud_left > 0 {
                cloud_left -= 1;
                cloud_cut
            } else {
                0.0
            };
            dev = model.ar_coeff * dev + innovation.sample(&mut rng);
            values.push((clear * (1.0 - shade) + dev).max(0.0));
        }
        out.push(SensorTrace::new(values, Duration::from_secs(60), "kW")?);
    }
    Ok(out)
}

/// Parse `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, f64)>, TraceError> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| TraceError::InvalidModel(format!("line {}: expected key=value", lineno + 1)))?;
        let value = v
            .trim()
            .parse::<f64>()
            .map_err(|_| TraceError::InvalidModel(format!("line {}: {:?} is not a number", lineno + 1, v.trim())))?;
        pairs.push((k.trim().to_string(), value));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{delta_sequence, trace_stats};

    #[test]
    fn uniform_rejects_bad_range() {
        assert!(matches!(
            generate_uniform_trace(5.0, 5.0, 10, 1),
            Err(TraceError::InvalidRange { .. })
        ));
        assert!(matches!(
            generate_uniform_trace(0.0, 1.0, 0, 1),
            Err(TraceError::ZeroCount)
        ));
    }

    #[test]
    fn uniform_mean_and_determinism() {
        let t = generate_uniform_trace(0.0, 1.0, 100_000, 7).unwrap();
        assert!((trace_stats(&t).mean - 0.5).abs() < 0.01);
        assert!(t.values().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(t, generate_uniform_trace(0.0, 1.0, 100_000, 7).unwrap());
        assert_ne!(t, generate_uniform_trace(0.0, 1.0, 100_000, 8).unwrap());
    }

    #[test]
    fn degenerate_gradual_is_constant() {
        let m = GradualModel {
            dwell_ratio: 1.0,
            small_step_scale: 0.0,
            ..GradualModel::HOUSE
        };
        let t = generate_gradual_trace(&m, 500, 3).unwrap();
        assert!(t.values().iter().all(|&v| v == m.base_level));
    }

    #[test]
    fn dwelling_walk_has_small_steps() {
        let m = GradualModel {
            dwell_ratio: 1.0,
            small_step_scale: 3.0,
            ..GradualModel::HOUSE
        };
        let t = generate_gradual_trace(&m, 20_000, 11).unwrap();
        assert!(delta_sequence(&t).unwrap().abs_stats().median <= 3.0);
    }

    #[test]
    fn house_model_delta_profile() {
        let t = generate_gradual_trace(&GradualModel::HOUSE, 500_000, 5).unwrap();
        let d = delta_sequence(&t).unwrap().abs_stats();
        assert!((2.0..=4.0).contains(&d.median), "median |Δ| {}", d.median);
        assert!(d.max > 100.0 * d.median);
        let s = trace_stats(&t);
        assert!(s.min >= GradualModel::HOUSE.floor && s.max <= GradualModel::HOUSE.ceiling);
    }

    #[test]
    fn gradual_validation() {
        let mut m = GradualModel::HOUSE;
        m.dwell_ratio = 1.5;
        assert!(generate_gradual_trace(&m, 10, 0).is_err());
        let mut m = GradualModel::HOUSE;
        m.base_level = 100.0;
        assert!(m.validate().is_err());
        let mut m = GradualModel::HOUSE;
        m.jump_scale = 1.0;
        assert!(m.validate().is_err());
        assert!(generate_gradual_trace(&GradualModel::HOUSE, 0, 0).is_err());
    }

    #[test]
    fn solar_days_shape() {
        let days = generate_solar_days(&SolarModel::PLANT, 3, 2).unwrap();
        assert_eq!(days.len(), 3);
        for d in &days {
            assert_eq!(d.len(), 600);
            assert_eq!(d.sample_period(), Duration::from_secs(60));
            assert!(d
                .values()
                .iter()
                .all(|&v| (0.0..=SolarModel::PLANT.peak * 1.1).contains(&v)));
        }
        assert_eq!(days, generate_solar_days(&SolarModel::PLANT, 3, 2).unwrap());
    }

    #[test]
    fn kv_config() {
        let pairs = parse_kv("# house\nbase_level = 800\n\njump_scale=900 # W\n").unwrap();
        let mut m = GradualModel::HOUSE;
        for (k, v) in &pairs {
            m.set(k, *v).unwrap();
        }
        assert_eq!(m.base_level, 800.0);
        assert_eq!(m.jump_scale, 900.0);
        assert!(parse_kv("base_level\n").is_err());
        assert!(parse_kv("base_level=abc\n").is_err());
        assert!(m.set("nope", 1.0).is_err());
    }
}
