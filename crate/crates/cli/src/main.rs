use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hexplore_cli::{render_trace, run_single, run_sweep, CliError, RunOptions};

#[derive(Parser)]
#[command(
    name = "hexplore",
    version,
    about = "Multi-drone exploration simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "HEXPLORE_OUT_DIR", default_value = "out")]
        out: PathBuf,
        /// Override the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write a per-tick trace.
        #[arg(long)]
        trace: bool,
        /// Print the map every N ticks (0 = never).
        #[arg(long, default_value_t = 0)]
        render_every: u64,
    },
    /// Run every combination of a sweep file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "HEXPLORE_OUT_DIR", default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Print maps from a recorded trace.
    RenderTrace {
        #[arg(long)]
        trace: PathBuf,
        /// Print every N ticks; 0 prints only the last one.
        #[arg(long, default_value_t = 0)]
        render_every: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result: Result<(), CliError> = match cli.command {
        Command::Run {
            config,
            out: out_dir,
            seed,
            trace,
            render_every,
        } => {
            let opts = RunOptions {
                config,
                out_dir,
                seed,
                trace,
                render_every,
            };
            run_single(&opts, &mut out).map(|m| {
                let _ = writeln!(
                    out,
                    "completed={} ticks={} avg_reexplored={} visit_variance={} total_distance={}",
                    m.completed,
                    m.completion_ticks,
                    m.avg_reexplored,
                    m.visit_variance,
                    m.total_distance
                );
            })
        }
        Command::Sweep {
            config,
            out: out_dir,
            parallelism,
        } => run_sweep(&config, &out_dir, parallelism, &mut std::io::stderr()).map(|r| {
            let _ = writeln!(
                out,
                "{} runs ({} failed), {} combinations skipped; results in {}",
                r.runs,
                r.failed,
                r.skipped,
                out_dir.display()
            );
        }),
        Command::RenderTrace {
            trace,
            render_every,
        } => render_trace(&trace, render_every, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
