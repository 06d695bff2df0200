//! Append-only run records and their CSV / JSON-lines serialization.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "experiment,seed,task,L,q,observable,value,aux1,aux2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    Xi2,
    M2,
    S2,
    ShannonPe,
    Energy,
    /// `Σ_x |c_x|⁴`.
    Pe2,
    /// Exact `-log₂ 𝔼Ξ₂`.
    NegLog2Mean,
    /// Saddle-point `m(s)L + g(s)`.
    Asymptotic,
    /// `L·(exact - asymptotic)`.
    ScaledDifference,
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::Xi2 => "xi2",
            Observable::M2 => "m2",
            Observable::S2 => "s2",
            Observable::ShannonPe => "shannon_pe",
            Observable::Energy => "energy",
            Observable::Pe2 => "pe2",
            Observable::NegLog2Mean => "neg_log2_mean",
            Observable::Asymptotic => "asymptotic",
            Observable::ScaledDifference => "scaled_difference",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Observable::*;
        [Xi2, M2, S2, ShannonPe, Energy, Pe2, NegLog2Mean, Asymptotic, ScaledDifference]
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown observable '{s}'")))
    }
}

/// One value of one observable for one task.
///
/// `aux1` carries an integer tag (realization seed, eigenstate index, grid
/// index); `aux2` a real one (energy density, θ, s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub seed: u64,
    pub task: u64,
    pub n_qubits: usize,
    /// `None` for full-space (non-conserving) runs.
    pub charge: Option<i64>,
    pub observable: Observable,
    pub value: f64,
    pub aux1: Option<u64>,
    pub aux2: Option<f64>,
}

impl RunRecord {
    pub fn new(experiment: &str, seed: u64, task: u64, n_qubits: usize, charge: Option<i64>, observable: Observable, value: f64) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            task,
            n_qubits,
            charge,
            observable,
            value,
            aux1: None,
            aux2: None,
        }
    }

    pub fn with_aux(mut self, aux1: Option<u64>, aux2: Option<f64>) -> Self {
        self.aux1 = aux1;
        self.aux2 = aux2;
        self
    }
}

/// 17 significant digits, exponent form.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" | "jsonl" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

enum Sink<W: Write> {
    Csv(csv::Writer<W>),
    Json(W),
}

/// Streams records to CSV or JSON lines. The CSV header is written on creation,
/// so an empty run still produces a valid file.
pub struct RecordWriter<W: Write> {
    sink: Sink<W>,
    count: u64,
}

impl RecordWriter<BufWriter<File>> {
    /// Opens (truncates) `path`; call before any expensive work so a bad path fails fast.
    pub fn create(path: &Path, format: OutputFormat) -> Result<Self> {
        let file = File::create(path).map_err(|e| {
            Error::Config(format!("cannot open output '{}': {e}", path.display()))
        })?;
        Self::new(BufWriter::new(file), format)
    }
}

impl<W: Write> RecordWriter<W> {
    pub fn new(w: W, format: OutputFormat) -> Result<Self> {
        let sink = match format {
            OutputFormat::Csv => {
                let mut c = csv::WriterBuilder::new().has_headers(false).from_writer(w);
                c.write_record(CSV_HEADER.split(','))?;
                Sink::Csv(c)
            }
            OutputFormat::Json => Sink::Json(w),
        };
        Ok(Self { sink, count: 0 })
    }

    pub fn write(&mut self, r: &RunRecord) -> Result<()> {
        let opt_int = |v: Option<i64>| v.map(|x| x.to_string());
        let q = opt_int(r.charge);
        let aux1 = r.aux1.map(|x| x.to_string());
        let aux2 = r.aux2.map(format_float);
        match &mut self.sink {
            Sink::Csv(c) => {
                c.write_record([
                    r.experiment.as_str(),
                    &r.seed.to_string(),
                    &r.task.to_string(),
                    &r.n_qubits.to_string(),
                    q.as_deref().unwrap_or(""),
                    r.observable.name(),
                    &format_float(r.value),
                    aux1.as_deref().unwrap_or(""),
                    aux2.as_deref().unwrap_or(""),
                ])?;
            }
            Sink::Json(w) => {
                let num = |v: f64| if v.is_finite() { format_float(v) } else { "null".into() };
                let or_null = |v: Option<String>| v.unwrap_or_else(|| "null".into());
                writeln!(
                    w,
                    "{{\"experiment\":{},\"seed\":{},\"task\":{},\"L\":{},\"q\":{},\"observable\":\"{}\",\"value\":{},\"aux1\":{},\"aux2\":{}}}",
                    serde_json::to_string(&r.experiment).expect("string serialization"),
                    r.seed,
                    r.task,
                    r.n_qubits,
                    or_null(q),
                    r.observable.name(),
                    num(r.value),
                    or_null(aux1),
                    or_null(r.aux2.map(num)),
                )?;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn write_all(&mut self, records: &[RunRecord]) -> Result<()> {
        records.iter().try_for_each(|r| self.write(r))
    }

    /// Records written so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(self) -> Result<W> {
        match self.sink {
            Sink::Csv(c) => c.into_inner().map_err(|e| Error::Io(e.into_error())),
            Sink::Json(mut w) => {
                w.flush()?;
                Ok(w)
            }
        }
    }
}

/// Serializes records into an in-memory buffer.
pub fn records_to_bytes(records: &[RunRecord], format: OutputFormat) -> Result<Vec<u8>> {
    let mut w = RecordWriter::new(Vec::new(), format)?;
    w.write_all(records)?;
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<RunRecord> {
        vec![
            RunRecord::new("mean", 7, 0, 4, Some(0), Observable::Xi2, 0.1),
            RunRecord::new("mean", 7, 1, 4, None, Observable::M2, 2.0 / 3.0).with_aux(Some(12), Some(-0.25)),
        ]
    }

    #[test]
    fn empty_run_is_header_only() {
        let bytes = records_to_bytes(&[], OutputFormat::Csv).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), format!("{CSV_HEADER}\n"));
        assert!(records_to_bytes(&[], OutputFormat::Json).unwrap().is_empty());
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(records_to_bytes(&sample(), OutputFormat::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "mean,7,0,4,0,xi2,1.0000000000000001e-1,,");
        assert_eq!(lines[2], "mean,7,1,4,,m2,6.6666666666666663e-1,12,-2.5000000000000000e-1");
    }

    #[test]
    fn json_lines_parse_and_round_trip_values() {
        let text = String::from_utf8(records_to_bytes(&sample(), OutputFormat::Json).unwrap()).unwrap();
        let rows: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["aux1"], serde_json::Value::Null);
        assert_eq!(rows[1]["q"], serde_json::Value::Null);
        assert_eq!(rows[1]["value"].as_f64().unwrap(), 2.0 / 3.0);
        assert_eq!(rows[1]["aux1"].as_u64(), Some(12));
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 12345.678, -0.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!("pe2".parse::<Observable>().unwrap(), Observable::Pe2);
    }
}
