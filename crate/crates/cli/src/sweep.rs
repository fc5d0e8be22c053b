//! Parameter sweeps.
//!
//! A sweep file lists values per field; every combination is run
//! `seeds_per_cell` times with seeds `base_seed, base_seed + 1, ...`.
//!
//! ```toml
//! schema_version = 1
//! grid_sizes = [[40, 40], [60, 60]]
//! subarea_sizes = [[4, 4]]
//! drone_counts = [25, 50, 100]
//! strategies = ["PSO", "QRNN-SRC", "HRNN-SRC", "WHRNN-SRC"]
//! alphas = [4.0]
//! betas = [4.0]
//! src_radii = [10.0]
//! mtbfs = [0.0, 3.0]
//! # kinds = ["quad", "hex"]   defaults to each strategy's own grid
//! obstacle_fraction = 0.2
//! seeds_per_cell = 20
//! base_seed = 0
//! ```
//!
//! Combinations nest in the order the keys are listed above (grid size
//! outermost, then mtbf, then kind), then seed. Invalid combinations are skipped
//! with a reason.

use std::path::Path;

use hexplore_core::{
    aggregate, run, CommsConfig, CostParams, GridKind, RunMetrics, SimConfig, Strategy,
};
use itertools::iproduct;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{check_schema, parse_strategy};
use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub schema_version: u32,
    pub grid_sizes: Vec<(usize, usize)>,
    #[serde(default = "d_subareas")]
    pub subarea_sizes: Vec<(usize, usize)>,
    pub drone_counts: Vec<usize>,
    pub strategies: Vec<String>,
    #[serde(default = "d_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "d_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "d_radii")]
    pub src_radii: Vec<f64>,
    #[serde(default = "d_mtbfs")]
    pub mtbfs: Vec<f64>,
    #[serde(default)]
    pub kinds: Option<Vec<GridKind>>,
    #[serde(default = "d_fraction")]
    pub obstacle_fraction: f64,
    pub seeds_per_cell: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub max_ticks: Option<u64>,
}

fn d_subareas() -> Vec<(usize, usize)> {
    vec![(4, 4)]
}
fn d_alphas() -> Vec<f64> {
    vec![CostParams::default().alpha]
}
fn d_betas() -> Vec<f64> {
    vec![CostParams::default().beta]
}
fn d_radii() -> Vec<f64> {
    vec![CommsConfig::default().src_radius]
}
fn d_mtbfs() -> Vec<f64> {
    vec![0.0]
}
fn d_fraction() -> f64 {
    0.2
}

/// One run of a sweep. `index` is the row number in the results table.
#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub index: usize,
    pub config: SimConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Skipped {
    pub combination: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub jobs: Vec<Job>,
    pub skipped: Vec<Skipped>,
}

impl SweepSpec {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Expands the cartesian product into jobs, in deterministic order.
    pub fn plan(&self) -> Result<Plan> {
        check_schema(self.schema_version)?;
        let lists: [(&str, usize); 9] = [
            ("grid_sizes", self.grid_sizes.len()),
            ("subarea_sizes", self.subarea_sizes.len()),
            ("drone_counts", self.drone_counts.len()),
            ("strategies", self.strategies.len()),
            ("alphas", self.alphas.len()),
            ("betas", self.betas.len()),
            ("src_radii", self.src_radii.len()),
            ("mtbfs", self.mtbfs.len()),
            ("kinds", self.kinds.as_ref().map_or(1, Vec::len)),
        ];
        for (field, n) in lists {
            if n == 0 {
                return Err(CliError::invalid(field, "must list at least one value"));
            }
        }
        if self.seeds_per_cell == 0 {
            return Err(CliError::invalid("seeds_per_cell", "must be at least 1"));
        }
        let strategies = self
            .strategies
            .iter()
            .map(|s| parse_strategy(s))
            .collect::<Result<Vec<Strategy>>>()?;

        let mut plan = Plan {
            jobs: Vec::new(),
            skipped: Vec::new(),
        };
        let kinds = |strategy: Strategy| match &self.kinds {
            Some(k) => k.clone(),
            None => vec![strategy.required_kind()],
        };
        let combos = iproduct!(
            &self.grid_sizes,
            &self.subarea_sizes,
            &self.drone_counts,
            &strategies,
            &self.alphas,
            &self.betas,
            &self.src_radii,
            &self.mtbfs
        );
        for (&(height, width), &(sh, sw), &n, &strategy, &alpha, &beta, &radius, &mtbf) in combos {
            for kind in kinds(strategy) {
                let cfg = SimConfig {
                    height,
                    width,
                    kind,
                    subarea_height: sh,
                    subarea_width: sw,
                    n_drones: n,
                    obstacle_fraction: self.obstacle_fraction,
                    strategy,
                    params: CostParams { alpha, beta },
                    comms: CommsConfig {
                        src_radius: radius,
                        mtbf,
                    },
                    seed: self.base_seed,
                    max_ticks: self.max_ticks,
                };
                self.push(&mut plan, cfg);
            }
        }
        Ok(plan)
    }

    fn push(&self, plan: &mut Plan, cfg: SimConfig) {
        let invalid = if cfg.n_drones == 0 {
            Some("n_drones: must be at least 1".to_string())
        } else {
            cfg.validate().err().map(|e| match e {
                hexplore_core::Error::Config { field, reason } => format!("{field}: {reason}"),
                other => other.to_string(),
            })
        };
        if let Some(reason) = invalid {
            plan.skipped.push(Skipped {
                combination: describe(&cfg),
                reason,
            });
            return;
        }
        for k in 0..self.seeds_per_cell {
            let mut c = cfg.clone();
            c.seed = self.base_seed.wrapping_add(k);
            plan.jobs.push(Job {
                index: plan.jobs.len(),
                config: c,
            });
        }
    }
}

fn describe(cfg: &SimConfig) -> String {
    format!(
        "{}x{} {:?} sub {}x{} drones {} {} alpha {} beta {} radius {} mtbf {}",
        cfg.height,
        cfg.width,
        cfg.kind,
        cfg.subarea_height,
        cfg.subarea_width,
        cfg.n_drones,
        cfg.strategy,
        cfg.params.alpha,
        cfg.params.beta,
        cfg.comms.src_radius,
        cfg.comms.mtbf
    )
}

/// Runs every job on `parallelism` threads. Results come back in job order
/// whatever the thread count.
pub fn execute(jobs: &[Job], parallelism: usize) -> Result<Vec<hexplore_core::Result<RunMetrics>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CliError::Output(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(|j| run(&j.config)).collect()))
}

/// Results table columns, in order.
pub const RESULT_COLUMNS: [&str; 22] = [
    "run",
    "strategy",
    "kind",
    "height",
    "width",
    "subarea_height",
    "subarea_width",
    "n_drones",
    "obstacle_fraction",
    "alpha",
    "beta",
    "src_radius",
    "mtbf",
    "seed",
    "max_ticks",
    "completed",
    "completion_ticks",
    "avg_reexplored",
    "visit_variance",
    "total_distance",
    "final_coverage",
    "error",
];

fn config_fields(cfg: &SimConfig) -> Vec<String> {
    vec![
        cfg.strategy.name().to_string(),
        kind_name(cfg.kind).to_string(),
        cfg.height.to_string(),
        cfg.width.to_string(),
        cfg.subarea_height.to_string(),
        cfg.subarea_width.to_string(),
        cfg.n_drones.to_string(),
        cfg.obstacle_fraction.to_string(),
        cfg.params.alpha.to_string(),
        cfg.params.beta.to_string(),
        cfg.comms.src_radius.to_string(),
        cfg.comms.mtbf.to_string(),
    ]
}

fn kind_name(kind: GridKind) -> &'static str {
    match kind {
        GridKind::Quad => "quad",
        GridKind::Hex => "hex",
    }
}

/// One results row. Metric cells are empty when the run failed.
pub fn result_row(
    index: usize,
    cfg: &SimConfig,
    outcome: &hexplore_core::Result<RunMetrics>,
) -> Vec<String> {
    let mut row = vec![index.to_string()];
    row.extend(config_fields(cfg));
    row.push(cfg.seed.to_string());
    row.push(cfg.max_ticks.map_or(String::new(), |t| t.to_string()));
    match outcome {
        Ok(m) => {
            row.push(m.completed.to_string());
            row.push(m.completion_ticks.to_string());
            row.push(m.avg_reexplored.to_string());
            row.push(m.visit_variance.to_string());
            row.push(m.total_distance.to_string());
            row.push(m.coverage_curve.last().copied().unwrap_or(0.0).to_string());
            row.push(String::new());
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(String::new(), 6));
            row.push(e.to_string());
        }
    }
    row
}

pub fn write_results<W: std::io::Write>(
    out: W,
    jobs: &[Job],
    outcomes: &[hexplore_core::Result<RunMetrics>],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_COLUMNS)?;
    for (job, outcome) in jobs.iter().zip(outcomes) {
        w.write_record(result_row(job.index, &job.config, outcome))?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

const STATS: [&str; 7] = ["mean", "variance", "min", "q1", "median", "q3", "max"];
const METRICS: [&str; 4] = [
    "completion_ticks",
    "avg_reexplored",
    "visit_variance",
    "total_distance",
];

/// Summary table columns: the configuration, run counts, then
/// `<metric>_<stat>` for every metric and statistic.
pub fn summary_columns() -> Vec<String> {
    let mut cols: Vec<String> = RESULT_COLUMNS[1..13]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(["runs", "failed", "completed_fraction"].map(String::from));
    for m in METRICS {
        for s in STATS {
            cols.push(format!("{m}_{s}"));
        }
    }
    cols
}

/// One row per configuration (all seeds pooled), in first-appearance order.
/// Failed runs are counted but left out of the statistics.
pub fn write_summary<W: std::io::Write>(
    out: W,
    jobs: &[Job],
    outcomes: &[hexplore_core::Result<RunMetrics>],
) -> Result<()> {
    let mut groups: Vec<(Vec<String>, Vec<&hexplore_core::Result<RunMetrics>>)> = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        let key = config_fields(&job.config);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(outcome),
            None => groups.push((key, vec![outcome])),
        }
    }

    let mut w = csv::Writer::from_writer(out);
    w.write_record(summary_columns())?;
    for (key, outcomes) in groups {
        let ok: Vec<RunMetrics> = outcomes
            .iter()
            .filter_map(|o| o.as_ref().ok().cloned())
            .collect();
        let mut row = key;
        row.push(outcomes.len().to_string());
        row.push((outcomes.len() - ok.len()).to_string());
        match aggregate(&ok) {
            Ok(s) => {
                row.push(s.completed_fraction.to_string());
                for m in [
                    &s.completion_ticks,
                    &s.avg_reexplored,
                    &s.visit_variance,
                    &s.total_distance,
                ] {
                    for v in [m.mean, m.variance, m.min, m.q1, m.median, m.q3, m.max] {
                        row.push(v.to_string());
                    }
                }
            }
            Err(_) => row.extend(std::iter::repeat_n(
                String::new(),
                1 + METRICS.len() * STATS.len(),
            )),
        }
        w.write_record(row)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> SweepSpec {
        SweepSpec::parse(text, Path::new("sweep.toml")).unwrap()
    }

    #[test]
    fn two_counts_three_seeds_is_six_rows() {
        let s = spec(
            "schema_version = 1\ngrid_sizes = [[16, 16]]\ndrone_counts = [5, 10]\nstrategies = [\"QRNN-SRC\"]\nseeds_per_cell = 3\n",
        );
        let plan = s.plan().unwrap();
        assert_eq!(plan.jobs.len(), 6);
        assert!(plan.skipped.is_empty());
        let order: Vec<(usize, u64)> = plan
            .jobs
            .iter()
            .map(|j| (j.config.n_drones, j.config.seed))
            .collect();
        assert_eq!(order, [(5, 0), (5, 1), (5, 2), (10, 0), (10, 1), (10, 2)]);
    }

    #[test]
    fn incompatible_combinations_are_skipped() {
        let s = spec(
            "schema_version = 1\ngrid_sizes = [[40, 40], [60, 60]]\nsubarea_sizes = [[8, 8]]\ndrone_counts = [5]\nstrategies = [\"QRNN\", \"HRNN-SRC\"]\nkinds = [\"quad\", \"hex\"]\nseeds_per_cell = 2\n",
        );
        let plan = s.plan().unwrap();
        // 60 is not a multiple of 8, and each strategy only runs on one kind
        assert_eq!(plan.jobs.len(), 2 * 2);
        assert_eq!(plan.skipped.len(), 2 + 4);
        assert!(plan.skipped.iter().any(|k| k.reason.starts_with("subarea")));
        assert!(plan
            .skipped
            .iter()
            .any(|k| k.reason.starts_with("strategy")));
    }

    #[test]
    fn seven_drone_counts_twenty_seeds() {
        let s = spec(
            "schema_version = 1\ngrid_sizes = [[40, 40]]\ndrone_counts = [5, 10, 25, 50, 100, 150, 200]\nstrategies = [\"WHRNN-SRC\"]\nseeds_per_cell = 20\n",
        );
        assert_eq!(s.plan().unwrap().jobs.len(), 140);
    }

    #[test]
    fn empty_lists_and_zero_seeds_are_invalid() {
        let s = spec("schema_version = 1\ngrid_sizes = []\ndrone_counts = [5]\nstrategies = [\"PSO\"]\nseeds_per_cell = 1\n");
        assert!(matches!(s.plan(), Err(CliError::Invalid { field, .. }) if field == "grid_sizes"));
        let s = spec("schema_version = 1\ngrid_sizes = [[8, 8]]\ndrone_counts = [5]\nstrategies = [\"PSO\"]\nseeds_per_cell = 0\n");
        assert!(
            matches!(s.plan(), Err(CliError::Invalid { field, .. }) if field == "seeds_per_cell")
        );
    }

    #[test]
    fn failed_runs_keep_their_row() {
        let s = spec(
            "schema_version = 1\ngrid_sizes = [[16, 16]]\ndrone_counts = [4]\nstrategies = [\"PSO\"]\nseeds_per_cell = 1\n",
        );
        let plan = s.plan().unwrap();
        let outcomes = vec![Err(hexplore_core::Error::Domain("boom".into()))];
        let mut buf = Vec::new();
        write_results(&mut buf, &plan.jobs, &outcomes).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().nth(1).unwrap();
        assert!(last.ends_with(",,,,,,boom"), "{last}");
        assert_eq!(
            text.lines().next().unwrap().split(',').count(),
            RESULT_COLUMNS.len()
        );
    }
}
