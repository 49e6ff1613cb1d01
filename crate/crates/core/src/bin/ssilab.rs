use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssilab::cli::{catalog, parse_kv, run_to_exit_code, ExperimentConfig, OutputFormat, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "ssilab", version, about = "Simultaneous state indistinguishability laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shorthand for --param trials=N.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Exit nonzero on review verdicts too.
    #[arg(long)]
    strict: bool,
    /// Experiment parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List experiments and their parameters.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment from a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        strict: bool,
    },
    /// Run any catalog experiment by name.
    Exp {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// First-qubit advantage against the trace-distance ceiling.
    SsiBound(Common),
    /// Explicit attacks; --param attack=first_qubit|classical.
    SsiAttack(Common),
    /// Alternating optimization of a non-local strategy on Haar pairs.
    Seesaw(Common),
    /// Seesaw on orthogonal Bell states, with optional EPR ancillas.
    Bell(Common),
    /// Bell-pair attack against a Clifford-encoded secret.
    CliffordAttack(Common),
    /// Goldreich-Levin extraction against a synthetic adversary.
    GlExtract(Common),
    /// Correlated-sample reduction and its no-signalling checks.
    GlCorrelated(Common),
    /// Single-decryptor encryption: correctness and cloning game.
    Sde(Common),
    /// Unclonable encryption with quantum keys: correctness and cloning game.
    Ueq(Common),
    /// Conjugate-coding search game against explicit cloners.
    Weakue(Common),
    /// Secret-sharing reconstruction error rates.
    SecretShare(Common),
    /// Secret-sharing leakage advantage against its bound.
    SsLeakage(Common),
    /// Reduction-loss arithmetic and copy budget.
    BoundCalc(Common),
}

fn config_from(name: &str, c: Common) -> ssilab::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(name).with_seed(c.seed);
    for kv in &c.params {
        let (k, v) = parse_kv(kv)?;
        cfg.params.insert(k, v);
    }
    if let Some(t) = c.trials {
        cfg.params.insert("trials".into(), t.into());
    }
    if name == "ssi-attack" {
        let attack = cfg.params.remove("attack").and_then(|v| v.as_str().map(str::to_string));
        cfg.experiment = match attack.as_deref() {
            None | Some("first_qubit") => "ssi-first-qubit".into(),
            Some("classical") => "ssi-classical".into(),
            Some(other) => {
                return Err(ssilab::Error::Config(format!("unknown attack {other:?}; expected first_qubit or classical")))
            }
        };
    }
    cfg.threads = c.threads;
    cfg.out = c.out;
    cfg.format = OutputFormat::parse(&c.format)?;
    cfg.strict = c.strict;
    Ok(cfg)
}

fn list(json: bool) -> i32 {
    let entries = catalog();
    if json {
        match serde_json::to_string_pretty(&entries) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
        return 0;
    }
    for e in entries {
        println!("{:<16} [{}] {}", e.name, e.module, e.anchor);
        for p in e.params {
            println!("    {:<16} {:<6} default {:<12} {}", p.name, format!("{:?}", p.kind).to_lowercase(), p.default, p.help);
        }
    }
    0
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let cfg = match cli.command {
        Command::List { json } => return ExitCode::from(list(json) as u8),
        Command::Run { config, threads, strict } => std::fs::read_to_string(&config)
            .map_err(ssilab::Error::from)
            .and_then(|text| ExperimentConfig::from_json(&text))
            .map(|mut c| {
                c.threads = threads.or(c.threads);
                c.strict |= strict;
                c
            }),
        Command::Exp { name, common } => config_from(&name, common),
        Command::SsiBound(c) => config_from("ssi-bound", c),
        Command::SsiAttack(c) => config_from("ssi-attack", c),
        Command::Seesaw(c) => config_from("seesaw", c),
        Command::Bell(c) => config_from("bell", c),
        Command::CliffordAttack(c) => config_from("clifford-attack", c),
        Command::GlExtract(c) => config_from("gl-extract", c),
        Command::GlCorrelated(c) => config_from("gl-correlated", c),
        Command::Sde(c) => config_from("sde", c),
        Command::Ueq(c) => config_from("ueq", c),
        Command::Weakue(c) => config_from("weakue", c),
        Command::SecretShare(c) => config_from("ss-correctness", c),
        Command::SsLeakage(c) => config_from("ss-leakage", c),
        Command::BoundCalc(c) => config_from("bound-calc", c),
    };
    let code = match cfg {
        Ok(cfg) => run_to_exit_code(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            ssilab::cli::error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
