//! Moving-state target selection.
//!
//! Reverse-nearest-neighbor costing charges a candidate cell for every drone
//! that declared its subarea on the previous tick; the weighted variant
//! discounts subareas by their unexplored fraction. The PSO-style baseline
//! charges for companions lying between the drone and the cell instead.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::agent::DroneState;
use crate::grid::{heuristic_distance, CellCoord, Geometry, SubareaId};

pub const DEFAULT_BETA: f64 = 4.0;

/// A drone's claim on a subarea, broadcast over long range.
///
/// Claims are ranked by `(since, distance, drone)`: whoever committed first
/// is ahead, then whoever is closer, then the lower id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Declaration {
    pub subarea: SubareaId,
    /// Tick at which the drone committed to `subarea`.
    pub since: u64,
    /// Path cost to the drone's target cell when declared; 0 while covering.
    pub distance: u32,
    pub drone: usize,
}

impl Declaration {
    pub fn rank(&self) -> (u64, u32, usize) {
        (self.since, self.distance, self.drone)
    }
}

/// Declarations made on the previous tick, tallied per subarea.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ApproachTable {
    cols: usize,
    counts: Vec<u32>,
    declarations: Vec<Declaration>,
}

impl ApproachTable {
    pub fn new(geometry: &Geometry) -> Self {
        ApproachTable {
            cols: geometry.subarea_cols(),
            counts: vec![0; geometry.subarea_count()],
            declarations: Vec::new(),
        }
    }

    fn slot(&self, s: SubareaId) -> usize {
        s.srow * self.cols + s.scol
    }

    /// Drones that declared `s`.
    pub fn count(&self, s: SubareaId) -> u32 {
        self.counts.get(self.slot(s)).copied().unwrap_or(0)
    }

    /// Drones that declared `s` with a claim ranked strictly ahead of `rank`.
    pub fn ahead_of(&self, s: SubareaId, rank: (u64, u32, usize)) -> u32 {
        self.declarations
            .iter()
            .filter(|d| d.subarea == s && d.rank() < rank)
            .count() as u32
    }

    pub fn add(&mut self, d: Declaration) {
        let i = self.slot(d.subarea);
        self.counts[i] += 1;
        self.declarations.push(d);
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubareaId, u32)> + '_ {
        let cols = self.cols.max(1);
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &n)| (SubareaId::new(i / cols, i % cols), n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            alpha: 4.0,
            beta: DEFAULT_BETA,
        }
    }
}

/// Cells not yet visited (and not known obstacles) per subarea.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnexploredWeights {
    cols: usize,
    w: Vec<u32>,
}

impl UnexploredWeights {
    pub fn new(geometry: &Geometry, w: Vec<u32>) -> Self {
        assert_eq!(w.len(), geometry.subarea_count());
        UnexploredWeights {
            cols: geometry.subarea_cols(),
            w,
        }
    }

    pub fn get(&self, s: SubareaId) -> u32 {
        self.w[s.srow * self.cols + s.scol]
    }
}

/// Which flavor of reverse-nearest-neighbor costing to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnnVariant {
    Plain,
    Weighted,
}

/// Drones approaching `s` that `d` has to yield to.
///
/// For the subarea `d` itself declared, only claims ranked ahead of its own
/// count (so never `d` itself). Any other subarea would be a new claim,
/// ranked behind every existing one, so all its declarations count.
pub fn approaching_others(d: &DroneState, s: SubareaId, approach: &ApproachTable) -> u32 {
    match d.approach_self {
        Some(own) if own.subarea == s => approach.ahead_of(s, own.rank()),
        _ => approach.count(s),
    }
}

/// `g + h + alpha * S`, where `S` counts the other drones that were
/// approaching the candidate's subarea on the previous tick and rank ahead
/// of `d` there.
pub fn rnn_cost(
    d: &DroneState,
    u: CellCoord,
    g_cost: u32,
    approach: &ApproachTable,
    p: &CostParams,
) -> f64 {
    let geometry = d.local.geometry();
    let h = heuristic_distance(d.pos, u, geometry.kind);
    let s = approaching_others(d, geometry.subarea_of(u), approach);
    (g_cost + h) as f64 + p.alpha * s as f64
}

/// `rnn_cost - beta * W / subarea_area`, `W` being the unexplored cell count
/// of the candidate's subarea.
pub fn weighted_rnn_cost(
    d: &DroneState,
    u: CellCoord,
    g_cost: u32,
    approach: &ApproachTable,
    weights: &UnexploredWeights,
    p: &CostParams,
    subarea_area: usize,
) -> f64 {
    let w = weights.get(d.local.geometry().subarea_of(u));
    rnn_cost(d, u, g_cost, approach, p) - p.beta * w as f64 / subarea_area as f64
}

fn argmin<'a>(
    candidates: impl Iterator<Item = &'a (CellCoord, u32)>,
    cost: impl Fn(CellCoord, u32) -> f64,
) -> Option<CellCoord> {
    let mut best: Option<(f64, CellCoord)> = None;
    for &(c, g) in candidates {
        let k = cost(c, g);
        let better = match best {
            None => true,
            Some((bk, bc)) => k < bk || (k == bk && c < bc),
        };
        if better {
            best = Some((k, c));
        }
    }
    best.map(|(_, c)| c)
}

/// Picks the cheapest candidate `(cell, path cost)` under RNN costing.
pub fn select_target(
    d: &DroneState,
    candidates: &[(CellCoord, u32)],
    approach: &ApproachTable,
    weights: &UnexploredWeights,
    variant: RnnVariant,
    p: &CostParams,
) -> Option<(CellCoord, SubareaId)> {
    let geometry = d.local.geometry();
    let area = geometry.subarea_area();
    let cell = argmin(candidates.iter(), |c, g| match variant {
        RnnVariant::Plain => rnn_cost(d, c, g, approach, p),
        RnnVariant::Weighted => weighted_rnn_cost(d, c, g, approach, weights, p, area),
    })?;
    Some((cell, geometry.subarea_of(cell)))
}

/// Companions inside the axis-aligned box spanned by `from` and `to`.
pub fn companions_between(from: CellCoord, to: CellCoord, companions: &[CellCoord]) -> u32 {
    let (r0, r1) = (from.row.min(to.row), from.row.max(to.row));
    let (c0, c1) = (from.col.min(to.col), from.col.max(to.col));
    companions
        .iter()
        .filter(|p| (r0..=r1).contains(&p.row) && (c0..=c1).contains(&p.col))
        .count() as u32
}

/// Baseline: cheapest candidate under `g + h + alpha * K`, `K` being the
/// number of companions in the direction of the cell.
pub fn pso_target(
    d: &DroneState,
    candidates: &[(CellCoord, u32)],
    companions: &[CellCoord],
    p: &CostParams,
) -> Option<(CellCoord, SubareaId)> {
    let geometry = d.local.geometry();
    let cell = argmin(candidates.iter(), |c, g| {
        let h = heuristic_distance(d.pos, c, geometry.kind);
        let k = companions_between(d.pos, c, companions);
        (g + h) as f64 + p.alpha * k as f64
    })?;
    Some((cell, geometry.subarea_of(cell)))
}

/// Greedy min-cost matching of drones to the last unexplored cells.
///
/// Repeatedly takes the cheapest remaining `(drone, cell)` pair, ties broken
/// by drone id and then row-major cell order. The result is then refined by
/// trading cells between two drones, or handing a cell to an idle drone,
/// whenever that lowers the total cost. Pairs absent from `costs` are
/// unreachable. Drones left without a cell are absent from the result.
pub fn endgame_bidding(
    drones: &BTreeSet<usize>,
    cells: &BTreeSet<CellCoord>,
    costs: &BTreeMap<(usize, CellCoord), u32>,
) -> BTreeMap<usize, CellCoord> {
    let mut bids: Vec<(u32, usize, CellCoord)> = costs
        .iter()
        .filter(|((d, c), _)| drones.contains(d) && cells.contains(c))
        .map(|(&(d, c), &k)| (k, d, c))
        .collect();
    bids.sort_unstable();

    let mut assigned = BTreeMap::new();
    let mut taken = BTreeSet::new();
    for (_, d, c) in bids {
        if assigned.contains_key(&d) || taken.contains(&c) {
            continue;
        }
        assigned.insert(d, c);
        taken.insert(c);
        if taken.len() == cells.len() {
            break;
        }
    }
    improve_by_swaps(drones, &mut assigned, costs);
    assigned
}

/// Pairwise exchanges until no single swap lowers the total. Each accepted
/// swap strictly decreases the total, so this terminates.
fn improve_by_swaps(
    drones: &BTreeSet<usize>,
    assigned: &mut BTreeMap<usize, CellCoord>,
    costs: &BTreeMap<(usize, CellCoord), u32>,
) {
    let cost = |d: usize, c: CellCoord| costs.get(&(d, c)).copied();
    let ids: Vec<usize> = drones.iter().copied().collect();
    loop {
        let mut improved = false;
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                let (ca, cb) = (assigned.get(&a).copied(), assigned.get(&b).copied());
                let now = ca
                    .map_or(Some(0), |c| cost(a, c))
                    .zip(cb.map_or(Some(0), |c| cost(b, c)));
                let swapped = cb
                    .map_or(Some(0), |c| cost(a, c))
                    .zip(ca.map_or(Some(0), |c| cost(b, c)));
                let (Some((n1, n2)), Some((s1, s2))) = (now, swapped) else {
                    continue;
                };
                if s1 + s2 < n1 + n2 {
                    match cb {
                        Some(c) => assigned.insert(a, c),
                        None => assigned.remove(&a),
                    };
                    match ca {
                        Some(c) => assigned.insert(b, c),
                        None => assigned.remove(&b),
                    };
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}
