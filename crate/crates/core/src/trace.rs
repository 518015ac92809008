//! Sensor traces, their summary statistics and Δ-sequences.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("cannot open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: cannot parse {value:?} as a number")]
    NonNumeric { row: u64, value: String },
    #[error("row {row}: no cell at column {column}")]
    MissingCell { row: u64, column: usize },
    #[error("no column named {0:?} in header")]
    UnknownColumn(String),
    #[error("column contains no readings")]
    EmptyColumn,
    #[error("reading {index} is not finite")]
    NonFinite { index: usize },
    #[error("sample period must be positive")]
    ZeroPeriod,
    #[error("trace has {len} readings, need at least {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("invalid range: low {low} must be below high {high}")]
    InvalidRange { low: f64, high: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("count must be at least 1")]
    ZeroCount,
}

/// An ordered run of finite readings taken at a fixed sample period.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorTrace {
    values: Vec<f64>,
    sample_period: Duration,
    unit_label: String,
}

impl SensorTrace {
    pub fn new(values: Vec<f64>, sample_period: Duration, unit_label: impl Into<String>) -> Result<Self, TraceError> {
        if values.is_empty() {
            return Err(TraceError::EmptyColumn);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(TraceError::NonFinite { index });
        }
        if sample_period.is_zero() {
            return Err(TraceError::ZeroPeriod);
        }
        Ok(Self {
            values,
            sample_period,
            unit_label: unit_label.into(),
        })
    }

    /// A trace with a one second period and no unit label.
    pub fn from_values(values: Vec<f64>) -> Result<Self, TraceError> {
        Self::new(values, Duration::from_secs(1), "")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample_period(&self) -> Duration {
        self.sample_period
    }

    pub fn unit_label(&self) -> &str {
        &self.unit_label
    }

    /// Copy of readings `start..start + len` with the same period and unit.
    pub fn window(&self, start: usize, len: usize) -> Result<Self, TraceError> {
        let end = start.checked_add(len).filter(|&e| e <= self.len() && len > 0);
        match end {
            Some(end) => Ok(Self {
                values: self.values[start..end].to_vec(),
                sample_period: self.sample_period,
                unit_label: self.unit_label.clone(),
            }),
            None => Err(TraceError::TooShort {
                len: self.len().saturating_sub(start),
                needed: len.max(1),
            }),
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Consecutive differences of a trace: `deltas[i] = values[i + 1] - values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSequence {
    deltas: Vec<f64>,
}

impl DeltaSequence {
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Statistics of the signed differences.
    pub fn stats(&self) -> TraceStats {
        TraceStats::of(&self.deltas).expect("delta sequence is non-empty")
    }

    /// Statistics of `|Δ|`.
    pub fn abs_stats(&self) -> TraceStats {
        let abs: Vec<f64> = self.deltas.iter().map(|d| d.abs()).collect();
        TraceStats::of(&abs).expect("delta sequence is non-empty")
    }
}

/// Build the Δ-sequence of a trace with at least two readings.
pub fn delta_sequence(trace: &SensorTrace) -> Result<DeltaSequence, TraceError> {
    if trace.len() < 2 {
        return Err(TraceError::TooShort {
            len: trace.len(),
            needed: 2,
        });
    }
    Ok(DeltaSequence {
        deltas: trace.values.windows(2).map(|w| w[1] - w[0]).collect(),
    })
}

/// Max, min, mean and median of a set of readings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStats {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
}

impl TraceStats {
    /// `None` for an empty slice.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let (min, max) = (sorted[0], sorted[n - 1]);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        // summing in sorted order keeps the result independent of input order
        let mean = (sorted.iter().sum::<f64>() / n as f64).clamp(min, max);
        Some(Self { max, min, mean, median })
    }
}

impl fmt::Display for TraceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max {} min {} mean {:.4} median {}",
            self.max, self.min, self.mean, self.median
        )
    }
}

pub fn trace_stats(trace: &SensorTrace) -> TraceStats {
    TraceStats::of(&trace.values).expect("traces are never empty")
}

/// Which CSV column holds the readings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(0)
    }
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    /// Digits select by zero-based index, anything else by header name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

/// Load one column of a CSV file as a trace with a one second period.
pub fn load_trace(path: impl AsRef<Path>, column: &ColumnSelector) -> Result<SensorTrace, TraceError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| TraceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_trace(file, column)
}

/// Parse a trace from CSV text. A single header row is skipped when the
/// first row does not parse as a number; selecting by name requires one.
pub fn read_trace<R: Read>(reader: R, column: &ColumnSelector) -> Result<SensorTrace, TraceError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let mut values = Vec::new();

    let Some(first) = records.next().transpose()? else {
        return Err(TraceError::EmptyColumn);
    };
    let row_of = |rec: &csv::StringRecord| rec.position().map_or(0, |p| p.line());
    let idx = match column {
        ColumnSelector::Name(name) => first
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| TraceError::UnknownColumn(name.clone()))?,
        ColumnSelector::Index(i) => {
            let cell = first.get(*i).ok_or(TraceError::MissingCell {
                row: row_of(&first),
                column: *i,
            })?;
            if let Ok(v) = cell.parse::<f64>() {
                values.push(v);
            }
            *i
        }
    };

    for rec in records {
        let rec = rec?;
        let row = row_of(&rec);
        let cell = rec.get(idx).ok_or(TraceError::MissingCell { row, column: idx })?;
        let v = cell.parse::<f64>().map_err(|_| TraceError::NonNumeric {
            row,
            value: cell.to_string(),
        })?;
        if !v.is_finite() {
            return Err(TraceError::NonNumeric {
                row,
                value: cell.to_string(),
            });
        }
        values.push(v);
    }
    SensorTrace::from_values(values)
}

/// Write readings as a single-column CSV with a header.
pub fn write_values<W: std::io::Write>(mut out: W, header: &str, values: &[f64]) -> std::io::Result<()> {
    writeln!(out, "{header}")?;
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(v: &[f64]) -> SensorTrace {
        SensorTrace::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(SensorTrace::from_values(vec![]), Err(TraceError::EmptyColumn)));
        assert!(matches!(
            SensorTrace::from_values(vec![1.0, f64::NAN]),
            Err(TraceError::NonFinite { index: 1 })
        ));
        assert!(matches!(
            SensorTrace::new(vec![1.0], Duration::ZERO, "W"),
            Err(TraceError::ZeroPeriod)
        ));
    }

    #[test]
    fn stats_constant() {
        let s = trace_stats(&trace(&[5.0, 5.0, 5.0]));
        assert_eq!((s.max, s.min, s.mean, s.median), (5.0, 5.0, 5.0, 5.0));
    }

    #[test]
    fn stats_even_length() {
        let s = trace_stats(&trace(&[1.0, 2.0, 3.0, 10.0]));
        assert_eq!((s.max, s.min, s.mean, s.median), (10.0, 1.0, 4.0, 2.5));
    }

    #[test]
    fn deltas() {
        let d = |v: &[f64]| delta_sequence(&trace(v)).unwrap().deltas().to_vec();
        assert_eq!(d(&[100.0, 100.0, 100.0]), vec![0.0, 0.0]);
        assert_eq!(d(&[140.0, 60.0, 100.0]), vec![-80.0, 40.0]);
        assert_eq!(d(&[0.0, 5.0, 3.0, 3.0]), vec![5.0, -2.0, 0.0]);
        assert!(matches!(
            delta_sequence(&trace(&[1.0])),
            Err(TraceError::TooShort { len: 1, needed: 2 })
        ));
    }

    #[test]
    fn signed_and_abs_delta_stats() {
        let d = delta_sequence(&trace(&[0.0, 5.0, 3.0, 3.0])).unwrap();
        assert_eq!(d.stats().min, -2.0);
        assert_eq!(d.abs_stats().min, 0.0);
        assert_eq!(d.abs_stats().median, 2.0);
    }

    #[test]
    fn csv_with_header_by_name() {
        let t = read_trace("t,v\n0,100\n1,102\n".as_bytes(), &"v".parse().unwrap()).unwrap();
        assert_eq!(t.values(), &[100.0, 102.0]);
    }

    #[test]
    fn csv_header_skipped_by_index() {
        let t = read_trace("t,v\n0,100\n1,102\n".as_bytes(), &ColumnSelector::Index(1)).unwrap();
        assert_eq!(t.values(), &[100.0, 102.0]);
        let t = read_trace("7\n8\n".as_bytes(), &ColumnSelector::Index(0)).unwrap();
        assert_eq!(t.values(), &[7.0, 8.0]);
    }

    #[test]
    fn csv_blank_cell_names_row() {
        let err = read_trace("t,v\n0,100\n1,\n2,5\n".as_bytes(), &"v".parse().unwrap()).unwrap_err();
        match err {
            TraceError::NonNumeric { row, ref value } => {
                assert_eq!(row, 3);
                assert_eq!(value, "");
            }
            e => panic!("unexpected {e}"),
        }
        assert!(err.to_string().contains("row 3"));
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            read_trace("t,v\n".as_bytes(), &"v".parse().unwrap()),
            Err(TraceError::EmptyColumn)
        ));
        assert!(matches!(
            read_trace("t,v\n0,1\n".as_bytes(), &"w".parse().unwrap()),
            Err(TraceError::UnknownColumn(_))
        ));
        assert!(matches!(
            read_trace("0,1\n2\n".as_bytes(), &ColumnSelector::Index(1)),
            Err(TraceError::MissingCell { row: 2, column: 1 })
        ));
        assert!(matches!(
            load_trace("/nonexistent/trace.csv", &ColumnSelector::Index(0)),
            Err(TraceError::Io { .. })
        ));
    }

    #[test]
    fn window_bounds() {
        let t = trace(&[1.0, 2.0, 3.0]);
        assert_eq!(t.window(1, 2).unwrap().values(), &[2.0, 3.0]);
        assert!(t.window(2, 2).is_err());
        assert!(t.window(0, 0).is_err());
    }
}
