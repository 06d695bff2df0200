//! Experiment drivers, statistics and persistence.

mod config;
mod experiments;
mod records;
mod stats;

pub use config::{parse_frame, ExperimentConfig, ExperimentKind};
pub use experiments::*;
pub use records::{format_float, records_to_bytes, Observable, OutputFormat, RecordWriter, RunRecord, CSV_HEADER};
pub use stats::{fit_exponential, ks_test, tail_fraction, Histogram, SummaryStats};

use crate::error::{Error, Result};

/// Environment variable consulted when no thread count is given.
pub const THREADS_ENV: &str = "CHARGEMAGIC_THREADS";

/// `flag`, else `$CHARGEMAGIC_THREADS`, else the available parallelism.
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return if n == 0 { Err(Error::Config("thread count must be positive".into())) } else { Ok(n) };
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{THREADS_ENV}='{v}' is not a positive integer"))),
        };
    }
    Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs `f` inside a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Opens the output (if any) first, runs the experiment on the configured
/// number of workers and streams its records.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let threads = resolve_threads(cfg.threads)?;
    let mut writer = match &cfg.output {
        Some(p) => Some(RecordWriter::create(p, cfg.format)?),
        None => None,
    };
    let out = with_threads(threads, || run_experiment(cfg))??;
    if let Some(w) = writer.as_mut() {
        w.write_all(out.records())?;
    }
    if let Some(w) = writer {
        w.finish()?;
    }
    Ok(out)
}
