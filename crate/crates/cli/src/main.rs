use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcanon_cli::{cmd_canonical, cmd_crystal, cmd_descent, cmd_roots, cmd_verify, parse_config, CliError, CliResult, RunConfig};

#[derive(Parser)]
#[command(name = "qcanon", version, about = "PBW bases, canonical bases and crystals of U_q^- in types A, D, E")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Diagram type, e.g. A3, D4, E6.
    #[arg(long = "type", global = true)]
    diagram: Option<String>,
    /// Reduced word of w0, 1-based, e.g. 1,2,1.
    #[arg(long, global = true)]
    word: Option<String>,
    /// Largest weight height any computation may reach.
    #[arg(long, global = true)]
    max_height: Option<u32>,
    /// text, json, csv or dot.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Seed for sampled suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write data output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Suppress status messages.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Beta sequence and root vectors of a reduced word.
    Roots,
    /// Canonical basis elements of one weight.
    Canonical {
        /// Weight as coefficients of simple roots, e.g. 1,1.
        #[arg(long)]
        weight: String,
    },
    /// Crystal graph of B(infinity) up to a depth.
    Crystal {
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Canonical basis elements surviving in V(lambda).
    Descent {
        /// Highest weight as coefficients of fundamental weights.
        #[arg(long)]
        lambda: String,
    },
    /// Run verification suites.
    Verify {
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn build_config(c: &Common) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        for (k, v) in parse_config(&text)? {
            cfg.set(&k, &v)?;
        }
    }
    let flags = [
        ("type", c.diagram.clone()),
        ("word", c.word.clone()),
        ("max-height", c.max_height.map(|x| x.to_string())),
        ("format", c.format.clone()),
        ("seed", c.seed.map(|x| x.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if c.quiet {
        cfg.verbose = false;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<bool> {
    let cfg = build_config(&cli.common)?;
    let (out, ok) = match &cli.command {
        Command::Roots => (cmd_roots(&cfg)?, true),
        Command::Canonical { weight } => cmd_canonical(&cfg, weight)?,
        Command::Crystal { depth } => (cmd_crystal(&cfg, *depth)?, true),
        Command::Descent { lambda } => cmd_descent(&cfg, lambda)?,
        Command::Verify { suite } => cmd_verify(&cfg, suite)?,
    };
    match &cli.common.out {
        Some(path) => std::fs::write(path, out)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
