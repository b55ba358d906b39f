use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pogroup::commands::{cmd_census, cmd_compare, cmd_figure, cmd_sigma, cmd_theorem_a, cmd_validate, Session};
use pogroup::figure::FigureFormat;
use pogroup::report::Report;
use pogroup::sigma::{Schedule, SigmaOptions, DEFAULT_BUDGET, DEFAULT_MARGIN};
use pogroup::Error;

/// Bi-invariant orders on nilpotent groups: censuses, half-space
/// connectivity and figures.
#[derive(Parser)]
#[command(name = "pogroup", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Specification file.
    #[arg(long)]
    spec: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Probe {
    /// Ball radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    radius: Option<Vec<usize>>,
    /// Path slacks, comma separated.
    #[arg(long, value_delimiter = ',')]
    slack: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: usize,
    /// Maximum number of ball vertices.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Directory for cached Cayley balls.
    #[arg(long, env = "POGROUP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

impl Probe {
    fn schedule(&self) -> Option<Schedule> {
        if self.radius.is_none() && self.slack.is_none() {
            return None;
        }
        let d = Schedule::default();
        Some(Schedule {
            radii: self.radius.clone().unwrap_or(d.radii),
            slacks: self.slack.clone().unwrap_or(d.slacks),
        })
    }

    fn options(&self) -> SigmaOptions {
        SigmaOptions {
            margin: self.margin,
            budget: self.budget,
            cache_dir: self.cache_dir.clone(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full archimedean orders of a group.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Half-space connectivity for an order.
    Sigma {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: String,
        #[command(flatten)]
        probe: Probe,
    },
    /// Compare two elements under an order.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: String,
        g: String,
        h: String,
    },
    /// Kernel finite generation against half-space connectivity.
    TheoremA {
        #[command(flatten)]
        common: Common,
        /// A hom, or an experiment naming one.
        #[arg(long)]
        target: String,
        #[arg(long)]
        bound: Option<i64>,
        #[command(flatten)]
        probe: Probe,
    },
    /// Cayley ball coloured by sign class.
    Figure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Parse and check a specification file.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let report = |common: &Common, r: Report| emit(&common.out, &r.to_json());
    match cli.cmd {
        Cmd::Census { common, group, bound } => {
            let s = Session::load(&common.spec)?;
            report(&common, cmd_census(&s, &group, bound)?)
        }
        Cmd::Sigma { common, order, probe } => {
            let s = Session::load(&common.spec)?;
            let sched = probe.schedule().unwrap_or_default();
            report(&common, cmd_sigma(&s, &order, &sched, &probe.options())?)
        }
        Cmd::Compare { common, order, g, h } => {
            let s = Session::load(&common.spec)?;
            report(&common, cmd_compare(&s, &order, &g, &h)?)
        }
        Cmd::TheoremA {
            common,
            target,
            bound,
            probe,
        } => {
            let s = Session::load(&common.spec)?;
            report(
                &common,
                cmd_theorem_a(&s, &target, probe.schedule(), bound, &probe.options())?,
            )
        }
        Cmd::Figure {
            common,
            order,
            radius,
            format,
        } => {
            let s = Session::load(&common.spec)?;
            let f = match format {
                Format::Dot => FigureFormat::Dot,
                Format::Svg => FigureFormat::Svg,
                Format::Json => FigureFormat::Json,
            };
            emit(&common.out, &cmd_figure(&s, &order, radius, f)?)
        }
        Cmd::Validate { common } => {
            let s = Session::load(&common.spec)?;
            report(&common, cmd_validate(&s)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pogroup: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
