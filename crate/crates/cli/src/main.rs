use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use itt_core::bounds::compare;
use itt_core::diagnostics::Moment;
use itt_core::nondim::nondimensionalize;
use itt_core::runner::{parse_key_values, registry, report, run, RunConfig, CONFIG_KEYS, REGISTRY};
use itt_core::{Error, Result};

/// Pseudo-spectral simulator for the incompressible Toner-Tu equations.
#[derive(Parser)]
#[command(name = "itt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write its outputs to OUTPUT_DIR/LABEL.
    Run(ConfigArgs),
    /// List the registered runs, or print one as a configuration file.
    Registry { label: Option<String> },
    /// Write plot data and SVG charts for a finished run.
    Report { run_dir: PathBuf },
    /// Print the analytic bounds for a configuration's parameters.
    Bounds(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration file with `key = value` lines.
    config: Option<PathBuf>,
    /// Start from a registered run (A1-A8, F1-F7, B1-B3).
    #[arg(long)]
    registry: Option<String>,
    /// Override one key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Resume from a checkpoint file.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Use the registered resolution instead of the desk default.
    #[arg(long)]
    full_resolution: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut layers = Vec::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            layers.push(parse_key_values(&text)?);
        }
        let mut cli = Vec::new();
        if let Some(r) = &self.registry {
            cli.push(("registry".to_string(), r.clone()));
        }
        for s in &self.set {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{s}'")))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::Config(format!(
                    "unknown key '{k}'; accepted keys: {}",
                    CONFIG_KEYS.join(", ")
                )));
            }
            cli.push((k.to_string(), v.trim().to_string()));
        }
        if let Some(d) = &self.output_dir {
            cli.push(("output_dir".into(), d.display().to_string()));
        }
        if let Some(r) = &self.resume {
            cli.push(("resume".into(), r.display().to_string()));
        }
        if self.full_resolution {
            cli.push(("full_resolution".into(), "true".into()));
        }
        layers.push(cli);
        RunConfig::resolve(&layers)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.resolve()?;
            log::info!(
                "run {}: d = {}, N = {}, dt = {}, {} steps",
                cfg.label,
                cfg.dim,
                cfg.resolution(),
                cfg.dt,
                cfg.total_steps()
            );
            let summary = run(&cfg)?;
            println!("wrote {}", summary.run_dir.display());
            println!("steps: {}, max CFL: {:.4}", summary.steps, summary.max_cfl);
            for r in summary
                .reports
                .iter()
                .filter(|r| r.label.ends_with(":full"))
            {
                for id in ["H0", "H1", "L4", "P(1,1)", "Q(1,1)"] {
                    if let Some(row) = r.row(id) {
                        if let Some(ratio) = row.ratio {
                            println!("{}: {id} ratio {ratio:.4e} ({})", r.label, row.status);
                        }
                    }
                }
            }
        }
        Command::Registry { label: None } => {
            println!(
                "{:<6} {:>2} {:>6} {:>8} {:>8} {:>8} {:>6}",
                "label", "d", "N", "dt", "nu", "alpha", "beta"
            );
            for e in REGISTRY {
                println!(
                    "{:<6} {:>2} {:>6} {:>8} {:>8} {:>8} {:>6}",
                    e.label, e.dim, e.n, e.dt, e.nu, e.alpha, e.beta
                );
            }
        }
        Command::Registry { label: Some(label) } => {
            let e = registry(&label)?;
            let mut cfg = RunConfig::default();
            cfg.apply_registry(e.label)?;
            print!("{cfg}");
        }
        Command::Report { run_dir } => {
            let summary = report(&run_dir)?;
            println!(
                "wrote {} files to {}",
                summary.files.len(),
                summary.dir.display()
            );
            for t in &summary.trends {
                let trend = match (t.nonincreasing, t.nondecreasing) {
                    (true, true) => "constant",
                    (true, false) => "nonincreasing",
                    (false, true) => "nondecreasing",
                    (false, false) => "not monotone",
                };
                println!(
                    "<{}(n={},m)> with U0 '{}': {trend} in m",
                    t.letter, t.n, t.tag
                );
            }
        }
        Command::Bounds(args) => {
            let cfg = args.resolve()?;
            let moments = Moment::sweep(cfg.m_max);
            for &choice in &cfg.u0_modes {
                let p = nondimensionalize(&cfg.params, choice)?;
                let label = format!("{}:{}", cfg.label, choice.tag());
                let r = compare(
                    &label,
                    cfg.dim as u32,
                    0.0,
                    &BTreeMap::new(),
                    &p,
                    &cfg.bounds,
                    cfg.n_max,
                    &moments,
                );
                println!("{r}\n");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
