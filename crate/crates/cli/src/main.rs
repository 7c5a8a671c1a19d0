mod commands;
mod config;
mod report;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{Command, Emit, Format, LatticeCase, Model, PeriodCheck, RunConfig, Which};
use std::path::PathBuf;
use std::process::ExitCode;
use swk3::arith::{parse_q, Q};

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(name = "swk3", version, about = "Exact verification of K3 families built from Seiberg-Witten curves")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, visible_alias = "report")]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working precision in bits for the numerical checks.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Tolerance override for numerical checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(clap::Args, Default)]
struct Triple {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    a: Option<Q>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Q>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c: Option<Q>,
}

#[derive(Subcommand)]
enum Sub {
    /// Classify the singular fibers of one family.
    Family {
        #[arg(long)]
        model: Option<Model>,
        #[command(flatten)]
        params: Triple,
    },
    /// Pull a Seiberg-Witten surface back along u = p/r^2.
    Basechange {
        #[arg(long)]
        model: Option<Model>,
        #[command(flatten)]
        params: Triple,
        /// Accepted for compatibility; verification always runs.
        #[arg(long)]
        verify: bool,
    },
    /// Verify the 2-isogenies and their duals.
    Isogeny {
        #[arg(long)]
        which: Option<Which>,
        #[arg(long)]
        verify: bool,
    },
    /// Build the monodromy matrices and check the relations.
    Monodromy {
        #[arg(long)]
        verify_all: bool,
    },
    /// Sampled numerical checks of theta functions, periods and Yukawa couplings.
    Periods {
        #[arg(long)]
        check: Option<PeriodCheck>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Genus-two curve to K3 parameters.
    Kummer {
        /// Six comma-separated rationals.
        #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<Q>>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a0: Option<Q>,
        #[arg(long)]
        emit: Option<Emit>,
    },
    /// Discriminant groups, forms and overlattices.
    Lattice {
        #[arg(long)]
        case: Option<LatticeCase>,
        /// JSON integer matrix, used with `--case custom`.
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Run every verification criterion.
    VerifyPaper,
}

fn apply_triple(cfg: &mut RunConfig, t: Triple) {
    if let Some(a) = t.a {
        cfg.a = a;
    }
    if let Some(b) = t.b {
        cfg.b = b;
    }
    if let Some(c) = t.c {
        cfg.c = c;
    }
}

fn resolve(cli: Cli) -> Result<(RunConfig, Option<PathBuf>)> {
    let mut cfg = match &cli.config {
        Some(path) => config::ingest(path)?,
        None => {
            if cli.command.is_none() {
                anyhow::bail!("no command given; pass a subcommand or --config FILE");
            }
            RunConfig::default()
        }
    };
    if let Some(sub) = cli.command {
        match sub {
            Sub::Family { model, params } => {
                cfg.command = Command::Family;
                cfg.model = model.unwrap_or(cfg.model);
                apply_triple(&mut cfg, params);
            }
            Sub::Basechange { model, params, .. } => {
                cfg.command = Command::Basechange;
                cfg.model = model.unwrap_or(cfg.model);
                apply_triple(&mut cfg, params);
            }
            Sub::Isogeny { which, .. } => {
                cfg.command = Command::Isogeny;
                cfg.which = which.unwrap_or(cfg.which);
            }
            Sub::Monodromy { .. } => cfg.command = Command::Monodromy,
            Sub::Periods { check, samples } => {
                cfg.command = Command::Periods;
                cfg.check = check.unwrap_or(cfg.check);
                cfg.samples = samples.unwrap_or(cfg.samples);
            }
            Sub::Kummer { theta, a0, emit } => {
                cfg.command = Command::Kummer;
                if let Some(t) = theta {
                    cfg.theta = t;
                }
                if let Some(a0) = a0 {
                    cfg.a0 = a0;
                }
                cfg.emit = emit.unwrap_or(cfg.emit);
            }
            Sub::Lattice { case, gram } => {
                cfg.command = Command::Lattice;
                cfg.case = case.unwrap_or(cfg.case);
                if let Some(path) = gram {
                    cfg.gram = Some(config::read_gram(&path)?);
                }
            }
            Sub::VerifyPaper => cfg.command = Command::VerifyPaper,
        }
    }
    cfg.format = cli.format.unwrap_or(cfg.format);
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    cfg.precision = cli.precision.unwrap_or(cfg.precision);
    if cli.tol.is_some() {
        cfg.tol = cli.tol;
    }
    Ok((cfg, cli.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<bool> {
        let (cfg, out) = resolve(cli)?;
        let report = commands::run(&cfg)?;
        let text = match cfg.format {
            Format::Json => report.to_json(),
            Format::Table => report.to_table(),
        };
        match out {
            Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(report.passed)
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
