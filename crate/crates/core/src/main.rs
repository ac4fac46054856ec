use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fas_outage::harness::validate::run_checks;
use fas_outage::harness::{
    emit_csv, emit_plot, fig1_spec, fig2_spec, format_sig, parse_config, run_sweep, write_csv,
    ResultRow, SweepSpec,
};
use fas_outage::spatial::BetaPolicy;
use fas_outage::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fas",
    version,
    about = "Outage probability of multiuser fluid antenna systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single operating point.
    Op {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the grid described by a config file.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Outage versus SNR for (m1, m2) = (2, 4).
    Fig1 {
        /// Restrict to one user count instead of K in {4, 16, 32}.
        #[arg(long)]
        users: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Outage versus SNR for m1 in {2, 4}.
    Fig2 {
        #[arg(long)]
        users: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Statistical checks of the marginal and copula samplers.
    Validate {
        /// Samples per check.
        #[arg(long, default_value_t = 1_000_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Config override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_key_value)]
    set: Vec<(String, String)>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Run Monte Carlo alongside the closed form.
    #[arg(long, overrides_with = "no_mc")]
    mc: bool,
    #[arg(long, overrides_with = "mc")]
    no_mc: bool,
    #[arg(long)]
    policy: Option<BetaPolicy>,
}

#[derive(Args)]
struct PointArgs {
    /// Average SNR P/sigma^2 in dB.
    #[arg(long)]
    snr_db: Option<f64>,
    /// Aperture in wavelengths.
    #[arg(short = 'W', long = "aperture")]
    w: Option<f64>,
    /// Number of ports.
    #[arg(short = 'N', long = "ports")]
    n: Option<usize>,
    /// Number of users.
    #[arg(short = 'K', long = "users")]
    k: Option<usize>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    /// Sum-rate threshold in bit/s/Hz.
    #[arg(long)]
    r_th: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG destination.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn parse_key_value(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got '{s}'"))
}

impl CommonArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut out = self.set.clone();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        if let Some(s) = self.seed {
            push("seed", s.to_string());
        }
        if let Some(t) = self.trials {
            push("trials", t.to_string());
        }
        if self.mc {
            push("mc_enabled", "true".into());
        }
        if self.no_mc {
            push("mc_enabled", "false".into());
        }
        if let Some(p) = self.policy {
            push("policy", p.as_str().into());
        }
        out
    }

    fn spec(&self, extra: Vec<(String, String)>) -> Result<SweepSpec> {
        let text = match &self.config {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            None => String::new(),
        };
        let mut overrides = extra;
        overrides.extend(self.overrides());
        parse_config(&text, &overrides)
    }

    /// Applies command-line flags to a built-in spec.
    fn apply(&self, base: SweepSpec) -> Result<SweepSpec> {
        let mut spec = base;
        for (key, value) in self.overrides() {
            let one = parse_config("", &[(key.clone(), value)])?;
            match key.as_str() {
                "seed" => spec.seed = one.seed,
                "trials" => spec.trials = one.trials,
                "mc_enabled" => spec.mc_enabled = one.mc_enabled,
                "policy" => spec.policy = one.policy,
                other => {
                    return Err(Error::Config(format!(
                        "--set {other} is not supported for built-in figure specs"
                    )))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl PointArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        push("snr_db", self.snr_db.map(|v| v.to_string()));
        push("W_list", self.w.map(|v| v.to_string()));
        push("N_list", self.n.map(|v| v.to_string()));
        push("K_list", self.k.map(|v| v.to_string()));
        push("m1_list", self.m1.map(|v| v.to_string()));
        push("m2", self.m2.map(|v| v.to_string()));
        push("R_th", self.r_th.map(|v| v.to_string()));
        out
    }
}

fn write_outputs(rows: &[ResultRow], output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => {
            emit_csv(rows, path)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => write_csv(rows, std::io::stdout().lock())?,
    }
    if let Some(path) = &output.plot {
        plot(rows, path)?;
    }
    Ok(())
}

fn plot(rows: &[ResultRow], path: &Path) -> Result<()> {
    let summary = emit_plot(rows, path)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "wrote {} charts to {}",
        summary.charts.len(),
        path.display()
    );
    Ok(())
}

fn print_point(row: &ResultRow) {
    println!(
        "snr_db={} W={} N={} K={} m1={} m2={} policy={}",
        format_sig(row.snr_db),
        format_sig(row.w),
        row.n,
        row.k,
        format_sig(row.m1),
        format_sig(row.m2),
        row.policy
    );
    println!("op_closed  {}", format_sig(row.op_closed));
    if let (Some(mc), Some(se)) = (row.op_mc, row.mc_stderr) {
        println!("op_mc      {}", format_sig(mc));
        println!("mc_stderr  {}", format_sig(se));
        println!("trials     {} (seed {})", row.trials, row.seed);
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Op { point, common } => {
            let spec = common.spec(point.overrides())?;
            let rows = run_sweep(&spec)?;
            if rows.len() != 1 {
                return Err(Error::Config(format!(
                    "op expects a single operating point, the configuration gives {}",
                    rows.len()
                )));
            }
            print_point(&rows[0]);
        }
        Command::Sweep { common, output } => {
            let spec = common.spec(Vec::new())?;
            write_outputs(&run_sweep(&spec)?, &output)?;
        }
        Command::Fig1 {
            users,
            common,
            output,
        } => {
            let spec = common.apply(fig1_spec(users))?;
            write_outputs(&run_sweep(&spec)?, &output)?;
        }
        Command::Fig2 {
            users,
            common,
            output,
        } => {
            let spec = common.apply(fig2_spec(users))?;
            write_outputs(&run_sweep(&spec)?, &output)?;
        }
        Command::Validate { trials, seed } => {
            if trials < 2 {
                return Err(Error::Config("validate needs at least 2 samples".into()));
            }
            let outcomes = run_checks(trials, seed)?;
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} checks, {failed} failed", outcomes.len());
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
