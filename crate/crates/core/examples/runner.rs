//! Running catalog experiments from configs and rendering reports.

use ssilab::cli::{catalog, execute, render, ExperimentConfig, OutputFormat};

pub fn main() -> ssilab::Result<()> {
    for e in catalog() {
        println!("{:<16} {}", e.name, e.anchor);
    }
    let cfg = ExperimentConfig::from_json(r#"{"experiment": "ssi-first-qubit", "params": {"d": 8, "trials": 2000}, "seed": 42}"#)?;
    let report = execute(&cfg)?;
    println!("{}", render(&report, OutputFormat::Json)?);
    let cfg = ExperimentConfig::new("distinct-types").with_param("d", 16).with_param("t", 3);
    print!("{}", render(&execute(&cfg)?, OutputFormat::Csv)?);
    match ExperimentConfig::new("bell").with_param("colour", 1).validate() {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
