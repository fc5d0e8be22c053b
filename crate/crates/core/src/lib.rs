//! Deterministic simulator for multi-drone area exploration.
//!
//! Drones cover their own subarea with a frontier-based controller and pick
//! the next subarea with reverse-nearest-neighbor costing, optionally
//! weighted by how much of each subarea is still unexplored. Square and
//! hexagonal grids are supported, as well as short-range map sharing,
//! long-range target broadcasts and random radio failures.

pub mod agent;
pub mod comms;
pub mod coordination;
pub mod engine;
pub mod error;
pub mod grid;
pub mod pathfind;

pub use agent::{merge_maps, Action, CellState, DroneState, LocalMap, Mode};
pub use comms::{reliability, sample_radio_state, src_groups, CommsConfig, RadioState};
pub use coordination::{
    endgame_bidding, pso_target, rnn_cost, select_target, weighted_rnn_cost, ApproachTable,
    CostParams, RnnVariant, UnexploredWeights,
};
pub use engine::{
    aggregate, run, RunMetrics, SimConfig, Simulation, Strategy, Summary, TickRecord,
};
pub use error::{Error, Result};
pub use grid::{
    generate_environment, heuristic_distance, CellCoord, Geometry, GridKind, GridMap, SubareaId,
};
pub use pathfind::{astar, nearest_frontier, Path};
