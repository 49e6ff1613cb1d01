//! Experiment runner: a catalog of named experiments, validated configs, and
//! execution on a sized worker pool with report output and exit codes.

mod catalog;
mod config;
mod experiments;

pub use catalog::{catalog, find, CatalogEntry, ParamKind, ParamSpec};
pub use config::{parse_kv, ExperimentConfig, OutputFormat, Params};
pub use experiments::{run_experiment, ROOT_STREAM};

use crate::error::{Error, Result};
use crate::report::{ExperimentReport, Verdict};

/// Environment variable naming the worker count.
pub const THREADS_ENV: &str = "SSILAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;

/// `--threads`, then `SSILAB_THREADS`, then the available parallelism.
pub fn worker_count(requested: Option<usize>) -> Result<usize> {
    if let Some(n) = requested {
        if n == 0 {
            return Err(Error::Config("threads must be positive".into()));
        }
        return Ok(n);
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        };
    }
    Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Validates the config and runs it on a dedicated pool.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let params = cfg.validate()?;
    let threads = worker_count(cfg.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_experiment(&params, cfg.seed))
}

pub fn render(report: &ExperimentReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => Ok(report.to_csv()),
    }
}

/// Exit code for a finished report.
pub fn verdict_exit_code(verdict: Verdict, strict: bool) -> i32 {
    match verdict {
        Verdict::Fail => EXIT_VERDICT,
        Verdict::Review if strict => EXIT_VERDICT,
        _ => EXIT_OK,
    }
}

pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_ERROR,
    }
}

/// Executes, writes the rendered report to `out` or stdout, and returns the
/// process exit code.
pub fn run_to_exit_code(cfg: &ExperimentConfig) -> i32 {
    let result = execute(cfg).and_then(|report| {
        let text = render(&report, cfg.format)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(report.verdict)
    });
    match result {
        Ok(v) => verdict_exit_code(v, cfg.strict),
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(verdict_exit_code(Verdict::Pass, true), 0);
        assert_eq!(verdict_exit_code(Verdict::Info, true), 0);
        assert_eq!(verdict_exit_code(Verdict::Review, false), 0);
        assert_eq!(verdict_exit_code(Verdict::Review, true), 2);
        assert_eq!(verdict_exit_code(Verdict::Fail, false), 2);
        assert_eq!(error_exit_code(&Error::Config("x".into())), 64);
        assert_eq!(error_exit_code(&Error::Parameter("x".into())), 1);
    }

    #[test]
    fn explicit_threads_win() {
        assert_eq!(worker_count(Some(3)).unwrap(), 3);
        assert!(worker_count(Some(0)).is_err());
    }

    #[test]
    fn report_independent_of_threads() {
        let mut c = ExperimentConfig::new("ssi-first-qubit").with_param("d", 2).with_param("trials", 400).with_seed(5);
        c.threads = Some(1);
        let a = render(&execute(&c).unwrap(), OutputFormat::Json).unwrap();
        c.threads = Some(3);
        let b = render(&execute(&c).unwrap(), OutputFormat::Json).unwrap();
        assert_eq!(a, b);
    }
}
