//! Experiment runner around the simulator: single runs, sweeps, traces and
//! text rendering. The binary in `main.rs` is a thin wrapper over
//! [`run_single`], [`run_sweep`] and [`render_trace`].

pub mod config;
pub mod error;
pub mod render;
pub mod sweep;
pub mod trace;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use hexplore_core::{RunMetrics, Simulation};

pub use error::{CliError, Result};

/// File names written into the output directory.
pub const RUN_CONFIG_FILE: &str = "config.toml";
pub const RUN_METRICS_FILE: &str = "metrics.csv";
pub const RUN_TRACE_FILE: &str = "trace.jsonl";
pub const SWEEP_RESULTS_FILE: &str = "results.csv";
pub const SWEEP_SUMMARY_FILE: &str = "summary.csv";
pub const SWEEP_SKIPPED_FILE: &str = "skipped.csv";

pub struct RunOptions {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub trace: bool,
    /// Print the map every this many ticks; 0 disables.
    pub render_every: u64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn make_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Runs one configuration and writes its config echo, metrics row and,
/// when asked, its trace into the output directory.
pub fn run_single(opts: &RunOptions, console: &mut dyn Write) -> Result<RunMetrics> {
    let file = config::RunFile::load(&opts.config)?;
    let mut cfg = file.to_sim_config()?;
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    make_dir(&opts.out_dir)?;

    let mut sim = Simulation::new(cfg.clone())?;
    if opts.trace {
        sim.enable_trace();
    }
    while !sim.is_finished() {
        sim.step()?;
        if opts.render_every > 0 && sim.ticks() % opts.render_every == 0 {
            let drones: Vec<_> = sim.drones().iter().map(|d| d.pos).collect();
            let frame = render::render(sim.world(), sim.visit_counts(), &drones);
            writeln!(console, "tick {}\n{frame}", sim.ticks())
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
    }
    let metrics = sim.metrics();

    let path = opts.out_dir.join(RUN_CONFIG_FILE);
    fs::write(&path, config::echo(&cfg)).map_err(|e| CliError::io(&path, e))?;
    let path = opts.out_dir.join(RUN_METRICS_FILE);
    let job = sweep::Job {
        index: 0,
        config: cfg.clone(),
    };
    sweep::write_results(create(&path)?, &[job], &[Ok(metrics.clone())])?;
    if let Some(ticks) = sim.take_trace() {
        let path = opts.out_dir.join(RUN_TRACE_FILE);
        trace::write_trace(create(&path)?, &cfg, &ticks)?;
    }
    Ok(metrics)
}

pub struct SweepReport {
    pub runs: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// Expands a sweep file, runs every job and writes the results, summary
/// and skipped-combination tables. Failed runs are recorded in their row.
pub fn run_sweep(
    spec_path: &Path,
    out_dir: &Path,
    parallelism: usize,
    log: &mut dyn Write,
) -> Result<SweepReport> {
    let spec = sweep::SweepSpec::load(spec_path)?;
    let plan = spec.plan()?;
    for s in &plan.skipped {
        let _ = writeln!(log, "skipped {}: {}", s.combination, s.reason);
    }
    make_dir(out_dir)?;
    let outcomes = sweep::execute(&plan.jobs, parallelism)?;

    sweep::write_results(
        create(&out_dir.join(SWEEP_RESULTS_FILE))?,
        &plan.jobs,
        &outcomes,
    )?;
    sweep::write_summary(
        create(&out_dir.join(SWEEP_SUMMARY_FILE))?,
        &plan.jobs,
        &outcomes,
    )?;
    let mut w = csv::Writer::from_writer(create(&out_dir.join(SWEEP_SKIPPED_FILE))?);
    w.write_record(["combination", "reason"])?;
    for s in &plan.skipped {
        w.write_record([&s.combination, &s.reason])?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;

    Ok(SweepReport {
        runs: outcomes.len(),
        failed: outcomes.iter().filter(|o| o.is_err()).count(),
        skipped: plan.skipped.len(),
    })
}

/// Prints the map after every `every`-th tick of a trace file (and after
/// the last tick).
pub fn render_trace(path: &Path, every: u64, out: &mut dyn Write) -> Result<()> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let t = trace::read_trace(BufReader::new(file), &path.display().to_string())?;
    for (tick, frame) in trace::replay(&t, every)? {
        writeln!(out, "tick {tick}\n{frame}").map_err(|e| CliError::Output(e.to_string()))?;
    }
    Ok(())
}
