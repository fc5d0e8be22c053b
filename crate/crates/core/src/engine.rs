//! Tick-synchronous simulation loop.
//!
//! Each tick runs, in order:
//! 1. radio states are sampled for every drone;
//! 2. short-range groups merge maps and the previous tick's target
//!    declarations are published over long range;
//! 3. every drone senses and marks its surroundings, then decides one move
//!    (subarea coverage in Exploration, target selection in Moving);
//! 4. moves are applied in drone-id order;
//! 5. drones declare the subarea they are covering or approaching.
//!
//! The run ends once every free cell has been visited, or at `max_ticks`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{Action, CellState, DroneState, LocalMap, Mode};
use crate::comms::{self, CommsConfig, RadioState, COMMS_STREAM};
use crate::coordination::{
    endgame_bidding, pso_target, select_target, CostParams, Declaration, RnnVariant,
    UnexploredWeights,
};
use crate::error::{Error, Result};
use crate::grid::{generate_environment, CellCoord, Geometry, GridKind, GridMap, SubareaId};
use crate::pathfind::{astar, distance_field, UNREACHABLE};

/// rng stream used for initial drone placement.
pub const PLACEMENT_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "PSO")]
    Pso,
    #[serde(rename = "QRNN")]
    Qrnn,
    #[serde(rename = "QRNN-SRC")]
    QrnnSrc,
    #[serde(rename = "HRNN-SRC")]
    HrnnSrc,
    #[serde(rename = "WHRNN-SRC")]
    WhrnnSrc,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Pso,
        Strategy::Qrnn,
        Strategy::QrnnSrc,
        Strategy::HrnnSrc,
        Strategy::WhrnnSrc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Pso => "PSO",
            Strategy::Qrnn => "QRNN",
            Strategy::QrnnSrc => "QRNN-SRC",
            Strategy::HrnnSrc => "HRNN-SRC",
            Strategy::WhrnnSrc => "WHRNN-SRC",
        }
    }

    pub fn required_kind(self) -> GridKind {
        match self {
            Strategy::Pso | Strategy::Qrnn | Strategy::QrnnSrc => GridKind::Quad,
            Strategy::HrnnSrc | Strategy::WhrnnSrc => GridKind::Hex,
        }
    }

    /// Whether nearby drones merge maps every tick.
    pub fn uses_src(self) -> bool {
        !matches!(self, Strategy::Pso | Strategy::Qrnn)
    }

    /// Whether the last cells are handed out by bidding.
    pub fn uses_bidding(self) -> bool {
        self == Strategy::WhrnnSrc
    }

    fn rnn_variant(self) -> Option<RnnVariant> {
        match self {
            Strategy::Pso => None,
            Strategy::WhrnnSrc => Some(RnnVariant::Weighted),
            _ => Some(RnnVariant::Plain),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config("strategy", format!("unknown strategy {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub height: usize,
    pub width: usize,
    pub kind: GridKind,
    pub subarea_height: usize,
    pub subarea_width: usize,
    pub n_drones: usize,
    pub obstacle_fraction: f64,
    pub strategy: Strategy,
    pub params: CostParams,
    pub comms: CommsConfig,
    pub seed: u64,
    /// Defaults to ten times the number of free cells.
    pub max_ticks: Option<u64>,
}

impl SimConfig {
    /// A config whose grid kind matches the strategy, with default
    /// parameters, 4x4 subareas and 20% obstacles.
    pub fn new(
        height: usize,
        width: usize,
        strategy: Strategy,
        n_drones: usize,
        seed: u64,
    ) -> Self {
        SimConfig {
            height,
            width,
            kind: strategy.required_kind(),
            subarea_height: 4,
            subarea_width: 4,
            n_drones,
            obstacle_fraction: 0.2,
            strategy,
            params: CostParams::default(),
            comms: CommsConfig::default(),
            seed,
            max_ticks: None,
        }
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(
            self.height,
            self.width,
            self.kind,
            self.subarea_height,
            self.subarea_width,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry()?;
        if self.kind != self.strategy.required_kind() {
            return Err(Error::config(
                "strategy",
                format!(
                    "{} runs on {:?} grids, not {:?}",
                    self.strategy,
                    self.strategy.required_kind(),
                    self.kind
                ),
            ));
        }
        if !(0.0..=0.5).contains(&self.obstacle_fraction) {
            return Err(Error::config("obstacle_fraction", "must lie in [0, 0.5]"));
        }
        if !(self.params.alpha >= 0.0) || !(self.params.beta >= 0.0) {
            return Err(Error::config(
                "params",
                "alpha and beta must be non-negative",
            ));
        }
        if !(self.comms.src_radius >= 0.0) || !(self.comms.mtbf >= 0.0) {
            return Err(Error::config(
                "comms",
                "src_radius and mtbf must be non-negative",
            ));
        }
        if self.max_ticks == Some(0) {
            return Err(Error::config("max_ticks", "must be positive"));
        }
        let cells = self.height * self.width;
        let obstacles = (self.obstacle_fraction * cells as f64).round() as usize;
        if self.n_drones > cells - obstacles {
            return Err(Error::config(
                "n_drones",
                format!(
                    "{} drones exceed {} free cells",
                    self.n_drones,
                    cells - obstacles
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub completion_ticks: u64,
    /// Mean over free cells of visits beyond the first.
    pub avg_reexplored: f64,
    /// Population variance of per-cell visit counts over free cells.
    pub visit_variance: f64,
    pub total_distance: u64,
    /// Fraction of free cells visited after each tick's sensing.
    pub coverage_curve: Vec<f64>,
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DroneSnapshot {
    pub id: usize,
    pub pos: CellCoord,
    pub mode: Mode,
    pub target: Option<SubareaId>,
    pub radio_up: bool,
}

/// State at the end of one tick, with the visits recorded during it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u64,
    pub drones: Vec<DroneSnapshot>,
    /// One entry per visit recorded this tick.
    pub visits: Vec<CellCoord>,
}

pub struct Simulation {
    cfg: SimConfig,
    world: GridMap,
    drones: Vec<DroneState>,
    visits: Vec<u32>,
    visited_free: usize,
    tick: u64,
    max_ticks: u64,
    comms_rng: ChaCha8Rng,
    coverage: Vec<f64>,
    completed: bool,
    finished: bool,
    trace: Option<Vec<TickRecord>>,
}

impl Simulation {
    /// Generates the world and places drones on distinct random free cells.
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let world = generate_environment(
            cfg.height,
            cfg.width,
            cfg.kind,
            (cfg.subarea_height, cfg.subarea_width),
            cfg.obstacle_fraction,
            cfg.seed,
        )?;
        let free: Vec<CellCoord> = world.free_cells().collect();
        if cfg.n_drones > free.len() {
            return Err(Error::config("n_drones", "more drones than free cells"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(PLACEMENT_STREAM);
        let positions: Vec<CellCoord> =
            rand::seq::index::sample(&mut rng, free.len(), cfg.n_drones)
                .into_iter()
                .map(|i| free[i])
                .collect();
        Self::with_world(cfg, world, &positions)
    }

    /// A simulation on a given world with drones at given cells.
    /// `cfg`'s grid fields must describe `world`; `n_drones` is ignored.
    pub fn with_world(mut cfg: SimConfig, world: GridMap, positions: &[CellCoord]) -> Result<Self> {
        cfg.n_drones = positions.len();
        if cfg.geometry()? != *world.geometry() {
            return Err(Error::config(
                "grid",
                "config does not describe the given world",
            ));
        }
        cfg.validate()?;
        let geometry = *world.geometry();
        for &p in positions {
            geometry.check(p)?;
            if world.is_obstacle(p) {
                return Err(Error::Blocked(p));
            }
        }
        let drones = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| DroneState::new(i, p, geometry))
            .collect();
        let max_ticks = cfg.max_ticks.unwrap_or(10 * world.free_count() as u64);
        let mut comms_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        comms_rng.set_stream(COMMS_STREAM);
        Ok(Simulation {
            visits: vec![0; geometry.cell_count()],
            visited_free: 0,
            tick: 0,
            max_ticks,
            comms_rng,
            coverage: Vec::new(),
            completed: false,
            finished: positions.is_empty(),
            trace: None,
            cfg,
            world,
            drones,
        })
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn take_trace(&mut self) -> Option<Vec<TickRecord>> {
        self.trace.take()
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn world(&self) -> &GridMap {
        &self.world
    }

    pub fn drones(&self) -> &[DroneState] {
        &self.drones
    }

    /// Mutable access for scripted scenarios.
    pub fn drones_mut(&mut self) -> &mut [DroneState] {
        &mut self.drones
    }

    /// World-level visit counts, row-major.
    pub fn visit_counts(&self) -> &[u32] {
        &self.visits
    }

    pub fn ticks(&self) -> u64 {
        self.tick
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn run_to_end(&mut self) -> Result<RunMetrics> {
        while !self.finished {
            self.step()?;
        }
        Ok(self.metrics())
    }

    /// Advances one tick. No-op once finished.
    pub fn step(&mut self) -> Result<()> {
        if self.finished {
            return Ok(());
        }
        self.tick += 1;
        self.sample_radios();
        self.communicate()?;
        let visits = self.sense()?;
        if self.visited_free == self.world.free_count() {
            self.completed = true;
            self.finished = true;
            self.record(visits);
            return Ok(());
        }
        let moves = self.decide()?;
        for (d, next) in self.drones.iter_mut().zip(moves) {
            if let Some(next) = next {
                debug_assert!(self.world.geometry().moves(d.pos).contains(&next));
                debug_assert!(!self.world.is_obstacle(next));
                d.move_to(next);
            }
        }
        let tick = self.tick;
        for d in &mut self.drones {
            let (subarea, distance) = match d.mode {
                Mode::Exploration => (Some(d.home_subarea()), 0),
                Mode::Moving => (d.target_cell.and(d.target_subarea), d.target_distance),
            };
            d.declared = subarea.map(|subarea| Declaration {
                subarea,
                since: tick.saturating_sub(d.commitment_age as u64),
                distance,
                drone: d.id,
            });
        }
        self.record(visits);
        if self.tick >= self.max_ticks {
            self.finished = true;
        }
        Ok(())
    }

    fn sample_radios(&mut self) {
        if !self.cfg.comms.failures_enabled() {
            return;
        }
        for d in &mut self.drones {
            d.radio_up = comms::sample_radio_state(&mut self.comms_rng, self.cfg.comms.mtbf)
                == RadioState::Up;
        }
    }

    fn communicate(&mut self) -> Result<()> {
        let groups = if self.cfg.strategy.uses_src() {
            let positions: Vec<CellCoord> = self.drones.iter().map(|d| d.pos).collect();
            let up: Vec<bool> = self.drones.iter().map(|d| d.radio_up).collect();
            comms::src_groups(
                self.world.geometry(),
                &positions,
                &up,
                self.cfg.comms.src_radius,
            )
        } else {
            Vec::new()
        };
        comms::exchange(&groups, &mut self.drones)?;
        Ok(())
    }

    fn sense(&mut self) -> Result<Vec<CellCoord>> {
        let mut recorded = Vec::new();
        for d in &mut self.drones {
            if d.sense_and_mark(&self.world)? {
                let i = self.world.geometry().index(d.pos);
                if self.visits[i] == 0 {
                    self.visited_free += 1;
                }
                self.visits[i] += 1;
                recorded.push(d.pos);
            }
        }
        self.coverage
            .push(self.visited_free as f64 / self.world.free_count() as f64);
        Ok(recorded)
    }

    fn record(&mut self, visits: Vec<CellCoord>) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TickRecord {
                tick: self.tick,
                drones: self
                    .drones
                    .iter()
                    .map(|d| DroneSnapshot {
                        id: d.id,
                        pos: d.pos,
                        mode: d.mode,
                        target: d.target_subarea,
                        radio_up: d.radio_up,
                    })
                    .collect(),
                visits,
            });
        }
    }

    /// Chooses every drone's next cell (`None` = stay).
    fn decide(&mut self) -> Result<Vec<Option<CellCoord>>> {
        let mut moves = vec![None; self.drones.len()];
        let mut moving = Vec::new();

        for (i, d) in self.drones.iter_mut().enumerate() {
            d.commitment_age = d.commitment_age.saturating_add(1);
            let here = d.local.geometry().subarea_of(d.pos);
            if d.mode == Mode::Moving
                && d.target_subarea == Some(here)
                && d.local.has_frontier_in(here)
            {
                d.mode = Mode::Exploration;
                d.target_cell = None;
            }
            if d.mode == Mode::Exploration {
                match d.exploration_step() {
                    Action::MoveTo(next) => {
                        moves[i] = Some(next);
                        continue;
                    }
                    Action::EnterMovingState => {
                        d.mode = Mode::Moving;
                        d.target_subarea = None;
                        d.target_cell = None;
                    }
                }
            }
            moving.push(i);
        }

        let fields = moving
            .iter()
            .map(|&i| distance_field(&self.drones[i].local, self.drones[i].pos))
            .collect::<Result<Vec<_>>>()?;

        let mut bids = BTreeMap::new();
        if self.cfg.strategy.uses_bidding() {
            bids = self.endgame(&moving, &fields);
        }

        let positions: Vec<CellCoord> = self.drones.iter().map(|d| d.pos).collect();
        for (&i, field) in moving.iter().zip(&fields) {
            let choice = match bids.get(&i) {
                Some(&assigned) => assigned,
                None => self.choose(i, field, &positions),
            };
            let d = &mut self.drones[i];
            match choice {
                Some(cell) => {
                    let s = d.local.geometry().subarea_of(cell);
                    if d.target_subarea != Some(s) {
                        d.target_subarea = Some(s);
                        d.commitment_age = 0;
                    }
                    d.target_cell = Some(cell);
                    let path = astar(&d.local, d.pos, cell)?
                        .ok_or_else(|| Error::Domain(format!("target {cell:?} unreachable")))?;
                    d.target_distance = path.cost;
                    moves[i] = Some(path.first_step()).filter(|&n| n != d.pos);
                }
                None => d.target_cell = None,
            }
        }
        Ok(moves)
    }

    /// Bidding over the last unexplored cells. Returns, for each drone taking
    /// part, either its assigned cell or `None` (halt). Empty when the
    /// endgame has not been reached.
    fn endgame(&self, moving: &[usize], fields: &[Vec<u32>]) -> BTreeMap<usize, Option<CellCoord>> {
        let bidders: Vec<usize> = (0..moving.len())
            .filter(|&k| self.drones[moving[k]].radio_up)
            .collect();
        if bidders.is_empty() {
            return BTreeMap::new();
        }
        let geometry = *self.world.geometry();
        let mut known = LocalMap::new(geometry);
        for &k in &bidders {
            known
                .merge_from(&self.drones[moving[k]].local)
                .expect("all drones share one geometry");
        }
        let cells: BTreeSet<CellCoord> = known
            .cells_in(CellState::Unexplored)
            .chain(known.cells_in(CellState::Frontier))
            .collect();
        if cells.is_empty() || cells.len() > bidders.len() {
            return BTreeMap::new();
        }
        let mut costs = BTreeMap::new();
        for &k in &bidders {
            for &c in &cells {
                let g = fields[k][geometry.index(c)];
                if g != UNREACHABLE {
                    costs.insert((moving[k], c), g);
                }
            }
        }
        let drones: BTreeSet<usize> = bidders.iter().map(|&k| moving[k]).collect();
        let assigned = endgame_bidding(&drones, &cells, &costs);
        drones
            .into_iter()
            .map(|d| (d, assigned.get(&d).copied()))
            .collect()
    }

    fn choose(&self, i: usize, field: &[u32], positions: &[CellCoord]) -> Option<CellCoord> {
        let d = &self.drones[i];
        let geometry = d.local.geometry();
        let candidates: Vec<(CellCoord, u32)> = field
            .iter()
            .enumerate()
            .filter(|&(j, &g)| {
                g != UNREACHABLE
                    && matches!(
                        d.local.state_at(j),
                        CellState::Unexplored | CellState::Frontier
                    )
            })
            .map(|(j, &g)| (geometry.coord(j), g))
            .collect();
        let p = &self.cfg.params;
        let picked = match self.cfg.strategy.rnn_variant() {
            None => {
                let companions: Vec<CellCoord> = positions
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &c)| c)
                    .collect();
                pso_target(d, &candidates, &companions, p)
            }
            Some(variant) => {
                let weights = UnexploredWeights::new(geometry, d.local.unexplored_weights());
                select_target(d, &candidates, &d.approach, &weights, variant, p)
            }
        };
        picked.map(|(c, _)| c)
    }

    pub fn metrics(&self) -> RunMetrics {
        let counts: Vec<f64> = self
            .world
            .free_cells()
            .map(|c| self.visits[self.world.geometry().index(c)] as f64)
            .collect();
        let n = counts.len().max(1) as f64;
        let reexplored = counts.iter().map(|&v| (v - 1.0).max(0.0)).sum::<f64>() / n;
        let mean = counts.iter().sum::<f64>() / n;
        let variance = counts.iter().map(|&v| (v - mean).powi(2)).sum::<f64>() / n;
        RunMetrics {
            completion_ticks: self.tick,
            avg_reexplored: reexplored,
            visit_variance: variance,
            total_distance: self.drones.iter().map(|d| d.distance_traveled).sum(),
            coverage_curve: self.coverage.clone(),
            completed: self.completed,
        }
    }
}

/// Generates the environment, places drones, and runs to completion or `max_ticks`.
pub fn run(cfg: &SimConfig) -> Result<RunMetrics> {
    Simulation::new(cfg.clone())?.run_to_end()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub completed_fraction: f64,
    pub completion_ticks: MetricSummary,
    pub avg_reexplored: MetricSummary,
    pub visit_variance: MetricSummary,
    pub total_distance: MetricSummary,
}

/// Linearly interpolated quantile of sorted data (`q` in `[0, 1]`).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(values: &[f64]) -> Result<MetricSummary> {
    if values.is_empty() {
        return Err(Error::Domain("cannot summarize an empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(MetricSummary {
        mean,
        variance,
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Descriptive statistics of each metric over a set of runs.
pub fn aggregate(runs: &[RunMetrics]) -> Result<Summary> {
    if runs.is_empty() {
        return Err(Error::Domain("cannot aggregate zero runs".into()));
    }
    let pick = |f: fn(&RunMetrics) -> f64| summarize(&runs.iter().map(f).collect::<Vec<_>>());
    Ok(Summary {
        runs: runs.len(),
        completed_fraction: runs.iter().filter(|r| r.completed).count() as f64 / runs.len() as f64,
        completion_ticks: pick(|r| r.completion_ticks as f64)?,
        avg_reexplored: pick(|r| r.avg_reexplored)?,
        visit_variance: pick(|r| r.visit_variance)?,
        total_distance: pick(|r| r.total_distance as f64)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metrics_with(avg: f64) -> RunMetrics {
        RunMetrics {
            completion_ticks: 10,
            avg_reexplored: avg,
            visit_variance: 0.5,
            total_distance: 40,
            coverage_curve: vec![1.0],
            completed: true,
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("ANTS".parse::<Strategy>().is_err());
    }

    #[test]
    fn strategy_kind_mismatch_is_rejected() {
        let mut cfg = SimConfig::new(40, 40, Strategy::HrnnSrc, 5, 1);
        cfg.kind = GridKind::Quad;
        assert!(matches!(
            cfg.validate(),
            Err(Error::Config {
                field: "strategy",
                ..
            })
        ));
    }

    #[test]
    fn too_many_drones_is_rejected() {
        let cfg = SimConfig::new(4, 4, Strategy::QrnnSrc, 14, 1);
        assert!(matches!(
            cfg.validate(),
            Err(Error::Config {
                field: "n_drones",
                ..
            })
        ));
    }

    #[test]
    fn forty_by_forty_has_1280_free_cells() {
        let sim = Simulation::new(SimConfig::new(40, 40, Strategy::QrnnSrc, 5, 3)).unwrap();
        assert_eq!(sim.world().free_count(), 1280);
    }

    #[test]
    fn zero_drones_terminate_immediately() {
        let mut cfg = SimConfig::new(8, 8, Strategy::QrnnSrc, 0, 1);
        cfg.obstacle_fraction = 0.0;
        let m = run(&cfg).unwrap();
        assert!(!m.completed);
        assert_eq!(m.completion_ticks, 0);
    }

    #[test]
    fn single_tick_does_not_complete() {
        let mut cfg = SimConfig::new(16, 16, Strategy::QrnnSrc, 3, 1);
        cfg.max_ticks = Some(1);
        let m = run(&cfg).unwrap();
        assert!(!m.completed);
        assert_eq!(m.completion_ticks, 1);
    }

    #[test]
    fn aggregate_single_run() {
        let s = aggregate(&[metrics_with(0.25)]).unwrap();
        assert_eq!(s.avg_reexplored.mean, 0.25);
        assert_eq!(s.avg_reexplored.variance, 0.0);
        assert_eq!(s.avg_reexplored.median, 0.25);
    }

    #[test]
    fn aggregate_two_runs_mean() {
        let s = aggregate(&[metrics_with(0.2), metrics_with(0.4)]).unwrap();
        assert!((s.avg_reexplored.mean - 0.3).abs() < 1e-15);
    }

    #[test]
    fn aggregate_empty_is_error() {
        assert!(aggregate(&[]).is_err());
    }
}
