//! Short-range map sharing, long-range target broadcasting and radio failures.
//!
//! Radio failures are memoryless: each tick a drone's radio is down with
//! probability `1 - exp(-1 / mtbf)`, so the time between failures is
//! exponential with mean `mtbf` ticks. A down radio neither sends nor
//! receives on either channel.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::DroneState;
use crate::coordination::ApproachTable;
use crate::error::{Error, Result};
use crate::grid::{CellCoord, Geometry};

/// rng stream used for radio failures.
pub const COMMS_STREAM: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommsConfig {
    /// Short-range radius, Euclidean, in cell units.
    pub src_radius: f64,
    /// Mean ticks between radio failures; 0 disables failures.
    pub mtbf: f64,
}

impl Default for CommsConfig {
    fn default() -> Self {
        CommsConfig {
            src_radius: 10.0,
            mtbf: 0.0,
        }
    }
}

impl CommsConfig {
    pub fn failures_enabled(&self) -> bool {
        self.mtbf > 0.0 && self.mtbf.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadioState {
    Up,
    Down,
}

/// Probability that the link has survived `t` ticks: `exp(-t / mtbf)`.
pub fn reliability(t: f64, mtbf: f64) -> Result<f64> {
    if !(mtbf > 0.0) {
        return Err(Error::Domain(format!("mtbf must be positive, got {mtbf}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    Ok((-t / mtbf).exp())
}

/// Per-tick failure probability `1 - R(1)`; zero when failures are off.
pub fn failure_probability(mtbf: f64) -> f64 {
    if mtbf > 0.0 && mtbf.is_finite() {
        -(-1.0 / mtbf).exp_m1()
    } else {
        0.0
    }
}

/// Draws one tick's radio state. Nothing is drawn when failures are off.
pub fn sample_radio_state(rng: &mut impl Rng, mtbf: f64) -> RadioState {
    let p = failure_probability(mtbf);
    if p > 0.0 && rng.gen::<f64>() < p {
        RadioState::Down
    } else {
        RadioState::Up
    }
}

/// Connected components of the short-range graph: two drones are linked
/// when both radios are up and their centers are within `radius`.
/// Components are ordered by their smallest member; members ascend.
pub fn src_groups(
    geometry: &Geometry,
    positions: &[CellCoord],
    radio_up: &[bool],
    radius: f64,
) -> Vec<Vec<usize>> {
    let n = positions.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        if !radio_up[i] {
            continue;
        }
        for j in i + 1..n {
            if radio_up[j] && geometry.euclidean(positions[i], positions[j]) <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// End-of-comms barrier for one tick.
///
/// Every multi-member group converges on the join of its members' maps.
/// The previous tick's declarations of all drones with a working radio are
/// tallied into a fresh approach table which those drones receive; drones
/// whose radio is down keep their stale copy. Returns the fresh table.
pub fn exchange(groups: &[Vec<usize>], drones: &mut [DroneState]) -> Result<ApproachTable> {
    for group in groups.iter().filter(|g| g.len() > 1) {
        let mut union = drones[group[0]].local.clone();
        for &i in &group[1..] {
            union.merge_from(&drones[i].local)?;
        }
        for &i in group {
            drones[i].local.copy_states_from(&union);
        }
    }

    let Some(first) = drones.first() else {
        return Ok(ApproachTable::default());
    };
    let mut table = ApproachTable::new(first.local.geometry());
    for d in drones.iter().filter(|d| d.radio_up) {
        if let Some(claim) = d.declared {
            table.add(claim);
        }
    }
    for d in drones.iter_mut().filter(|d| d.radio_up) {
        d.approach = table.clone();
        d.approach_self = d.declared;
    }
    Ok(table)
}
