//! Per-drone belief state and the subarea-coverage controller.

use serde::{Deserialize, Serialize};

use crate::coordination::{ApproachTable, Declaration};
use crate::error::{Error, Result};
use crate::grid::{CellCoord, Geometry, GridMap, SubareaId};
use crate::pathfind::nearest_frontier;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellState {
    Unexplored,
    Obstacle,
    Visited,
    Frontier,
}

impl CellState {
    /// Position in the knowledge order `Unexplored < Frontier < {Visited, Obstacle}`.
    pub fn knowledge(self) -> u8 {
        match self {
            CellState::Unexplored => 0,
            CellState::Frontier => 1,
            CellState::Visited | CellState::Obstacle => 2,
        }
    }

    /// Least upper bound in the knowledge order. Visited and Obstacle never
    /// meet for a consistent world; Obstacle wins if they do.
    pub fn join(self, other: CellState) -> CellState {
        use CellState::*;
        match (self, other) {
            (Obstacle, _) | (_, Obstacle) => Obstacle,
            (a, b) if a.knowledge() >= b.knowledge() => a,
            (_, b) => b,
        }
    }

    /// Whether a belief may move from `self` to `next`. Knowledge only grows
    /// and the two terminal states never change. `Unexplored -> Visited` is
    /// legal: it happens on the spawn cell and through map exchange.
    pub fn can_become(self, next: CellState) -> bool {
        use CellState::*;
        match (self, next) {
            (a, b) if a == b => true,
            (Unexplored, _) => true,
            (Frontier, Visited) => true,
            _ => false,
        }
    }
}

/// A drone's cell-based memory of the world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMap {
    geometry: Geometry,
    states: Vec<CellState>,
    visits: Vec<u32>,
}

impl LocalMap {
    pub fn new(geometry: Geometry) -> Self {
        let n = geometry.cell_count();
        LocalMap {
            geometry,
            states: vec![CellState::Unexplored; n],
            visits: vec![0; n],
        }
    }

    #[inline]
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    #[inline]
    pub fn state(&self, c: CellCoord) -> CellState {
        self.states[self.geometry.index(c)]
    }

    #[inline]
    pub(crate) fn state_at(&self, index: usize) -> CellState {
        self.states[index]
    }

    pub fn states(&self) -> &[CellState] {
        &self.states
    }

    /// Overwrites a belief. Intended for scripted scenarios and tests; the
    /// simulation itself only changes beliefs through sensing and merging.
    pub fn set_state(&mut self, c: CellCoord, state: CellState) -> Result<()> {
        self.geometry.check(c)?;
        let i = self.geometry.index(c);
        self.states[i] = state;
        Ok(())
    }

    /// Visits this drone made to `c` itself.
    pub fn visits(&self, c: CellCoord) -> u32 {
        self.visits[self.geometry.index(c)]
    }

    #[inline]
    pub fn is_traversable(&self, c: CellCoord) -> bool {
        self.state(c) != CellState::Obstacle
    }

    pub fn cells_in(&self, state: CellState) -> impl Iterator<Item = CellCoord> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(move |(_, &s)| s == state)
            .map(|(i, _)| self.geometry.coord(i))
    }

    pub fn has_frontier_in(&self, s: SubareaId) -> bool {
        self.geometry
            .subarea_cells(s)
            .any(|c| self.state(c) == CellState::Frontier)
    }

    /// Per-subarea count of cells that are neither visited nor known
    /// obstacles, indexed by `Geometry::subarea_index`.
    pub fn unexplored_weights(&self) -> Vec<u32> {
        let g = &self.geometry;
        let mut w = vec![0u32; g.subarea_count()];
        for (i, s) in self.states.iter().enumerate() {
            if matches!(s, CellState::Unexplored | CellState::Frontier) {
                w[g.subarea_index(g.subarea_of(g.coord(i)))] += 1;
            }
        }
        w
    }

    /// Pointwise knowledge order: every cell here is at least as informed as in `other`.
    pub fn dominates(&self, other: &LocalMap) -> bool {
        self.geometry == other.geometry
            && self
                .states
                .iter()
                .zip(&other.states)
                .all(|(a, b)| a.knowledge() >= b.knowledge())
    }

    fn check_dims(&self, other: &LocalMap) -> Result<()> {
        let (a, b) = (&self.geometry, &other.geometry);
        if (a.height, a.width) != (b.height, b.width) {
            return Err(Error::DimensionMismatch(
                (a.height, a.width),
                (b.height, b.width),
            ));
        }
        Ok(())
    }

    /// Joins `other`'s states into this map. Own visit counts are untouched.
    pub fn merge_from(&mut self, other: &LocalMap) -> Result<()> {
        self.check_dims(other)?;
        for (mine, theirs) in self.states.iter_mut().zip(&other.states) {
            *mine = mine.join(*theirs);
        }
        Ok(())
    }

    /// Replaces the states with `other`'s, keeping own visit counts.
    pub(crate) fn copy_states_from(&mut self, other: &LocalMap) {
        self.states.copy_from_slice(&other.states);
    }
}

/// Per-cell join of two maps; the result keeps `a`'s visit counts.
pub fn merge_maps(a: &LocalMap, b: &LocalMap) -> Result<LocalMap> {
    let mut out = a.clone();
    out.merge_from(b)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Exploration,
    Moving,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    MoveTo(CellCoord),
    EnterMovingState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DroneState {
    pub id: usize,
    pub pos: CellCoord,
    pub mode: Mode,
    pub local: LocalMap,
    /// Subarea being covered (Exploration) or approached (Moving).
    pub target_subarea: Option<SubareaId>,
    /// Cell picked by the last Moving-state selection.
    pub target_cell: Option<CellCoord>,
    /// Ticks since `target_subarea` last changed.
    pub commitment_age: u32,
    pub distance_traveled: u64,
    pub radio_up: bool,
    /// Last approach table this drone received over long-range comms.
    pub approach: ApproachTable,
    /// This drone's own declaration as tallied in `approach`.
    pub approach_self: Option<Declaration>,
    /// Declaration made at the end of the last tick.
    pub declared: Option<Declaration>,
    /// Path cost to `target_cell` when it was picked.
    pub target_distance: u32,
    pending_visit: bool,
}

impl DroneState {
    pub fn new(id: usize, pos: CellCoord, geometry: Geometry) -> Self {
        DroneState {
            id,
            pos,
            mode: Mode::Exploration,
            local: LocalMap::new(geometry),
            target_subarea: Some(geometry.subarea_of(pos)),
            target_cell: None,
            commitment_age: 0,
            distance_traveled: 0,
            radio_up: true,
            approach: ApproachTable::new(&geometry),
            approach_self: None,
            declared: None,
            target_distance: 0,
            pending_visit: true,
        }
    }

    /// Subarea the Exploration state is covering.
    pub fn home_subarea(&self) -> SubareaId {
        self.target_subarea
            .unwrap_or_else(|| self.local.geometry().subarea_of(self.pos))
    }

    /// Steps to an adjacent cell. The next `sense_and_mark` records a visit.
    pub fn move_to(&mut self, next: CellCoord) {
        if next != self.pos {
            self.pos = next;
            self.distance_traveled += 1;
            self.pending_visit = true;
        }
    }

    /// Marks the current cell visited (counting a visit if the drone arrived
    /// since the last call) and classifies unexplored sensed neighbors as
    /// obstacles or frontier cells. Returns whether a visit was recorded.
    pub fn sense_and_mark(&mut self, world: &GridMap) -> Result<bool> {
        let g = *world.geometry();
        g.check(self.pos)?;
        if world.is_obstacle(self.pos) {
            return Err(Error::Blocked(self.pos));
        }
        let here = g.index(self.pos);
        self.local.states[here] = CellState::Visited;
        let visited = std::mem::take(&mut self.pending_visit);
        if visited {
            self.local.visits[here] += 1;
        }
        for n in g.senses(self.pos) {
            let i = g.index(n);
            if self.local.states[i] == CellState::Unexplored {
                self.local.states[i] = if world.is_obstacle(n) {
                    CellState::Obstacle
                } else {
                    CellState::Frontier
                };
            }
        }
        Ok(visited)
    }

    /// One decision of the subarea-coverage controller: an adjacent frontier
    /// of the home subarea in priority order, else the first step towards the
    /// nearest such frontier, else hand over to the Moving state.
    pub fn exploration_step(&self) -> Action {
        let g = self.local.geometry();
        let home = self.home_subarea();
        for n in g.moves(self.pos) {
            if self.local.state(n) == CellState::Frontier && g.subarea_of(n) == home {
                return Action::MoveTo(n);
            }
        }
        match nearest_frontier(&self.local, self.pos, Some(home)) {
            Some((_, path)) if path.cells.len() > 1 => Action::MoveTo(path.cells[1]),
            _ => Action::EnterMovingState,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridKind;

    fn world(
        h: usize,
        w: usize,
        kind: GridKind,
        sub: usize,
        obstacles: &[(usize, usize)],
    ) -> GridMap {
        let g = Geometry::new(h, w, kind, sub, sub).unwrap();
        GridMap::with_obstacles(g, obstacles.iter().map(|&p| p.into())).unwrap()
    }

    #[test]
    fn fresh_drone_marks_eight_frontiers_on_quad() {
        let w = world(10, 10, GridKind::Quad, 5, &[]);
        let mut d = DroneState::new(0, (5, 5).into(), *w.geometry());
        assert!(d.sense_and_mark(&w).unwrap());
        assert_eq!(d.local.state((5, 5).into()), CellState::Visited);
        assert_eq!(d.local.visits((5, 5).into()), 1);
        assert_eq!(d.local.cells_in(CellState::Frontier).count(), 8);
    }

    #[test]
    fn hex_drone_marks_six_frontiers() {
        let w = world(10, 10, GridKind::Hex, 5, &[]);
        let mut d = DroneState::new(0, (5, 5).into(), *w.geometry());
        d.sense_and_mark(&w).unwrap();
        assert_eq!(d.local.cells_in(CellState::Frontier).count(), 6);
    }

    #[test]
    fn reentering_counts_a_second_visit() {
        let w = world(6, 6, GridKind::Quad, 3, &[]);
        let mut d = DroneState::new(0, (2, 2).into(), *w.geometry());
        d.sense_and_mark(&w).unwrap();
        // staying put is not a visit
        assert!(!d.sense_and_mark(&w).unwrap());
        d.move_to((2, 3).into());
        d.sense_and_mark(&w).unwrap();
        d.move_to((2, 2).into());
        assert!(d.sense_and_mark(&w).unwrap());
        assert_eq!(d.local.visits((2, 2).into()), 2);
        assert_eq!(d.local.state((2, 2).into()), CellState::Visited);
        assert_eq!(d.distance_traveled, 2);
    }

    #[test]
    fn obstacle_neighbor_never_becomes_frontier() {
        let w = world(6, 6, GridKind::Quad, 3, &[(1, 2)]);
        let mut d = DroneState::new(0, (2, 2).into(), *w.geometry());
        d.sense_and_mark(&w).unwrap();
        assert_eq!(d.local.state((1, 2).into()), CellState::Obstacle);
    }

    #[test]
    fn sensing_on_an_obstacle_is_an_error() {
        let w = world(6, 6, GridKind::Quad, 3, &[(1, 2)]);
        let mut d = DroneState::new(0, (1, 2).into(), *w.geometry());
        assert_eq!(d.sense_and_mark(&w), Err(Error::Blocked((1, 2).into())));
    }

    #[test]
    fn exploration_prefers_north_over_east() {
        let w = world(10, 10, GridKind::Quad, 10, &[]);
        let mut d = DroneState::new(0, (5, 5).into(), *w.geometry());
        d.sense_and_mark(&w).unwrap();
        assert_eq!(d.exploration_step(), Action::MoveTo((4, 5).into()));
        // with North and South already visited, East comes next
        d.local
            .set_state((4, 5).into(), CellState::Visited)
            .unwrap();
        d.local
            .set_state((6, 5).into(), CellState::Visited)
            .unwrap();
        assert_eq!(d.exploration_step(), Action::MoveTo((5, 6).into()));
    }

    #[test]
    fn exploration_walks_to_nearest_frontier_in_subarea() {
        let w = world(8, 8, GridKind::Quad, 8, &[]);
        let mut d = DroneState::new(0, (4, 4).into(), *w.geometry());
        for c in w.geometry().cells() {
            d.local.set_state(c, CellState::Visited).unwrap();
        }
        // the only frontier is three steps north
        d.local
            .set_state((1, 4).into(), CellState::Frontier)
            .unwrap();
        assert_eq!(d.exploration_step(), Action::MoveTo((3, 4).into()));
    }

    #[test]
    fn exploration_ignores_frontiers_outside_home_subarea() {
        let w = world(8, 8, GridKind::Quad, 4, &[]);
        let mut d = DroneState::new(0, (1, 1).into(), *w.geometry());
        for c in w.geometry().cells() {
            d.local.set_state(c, CellState::Visited).unwrap();
        }
        d.local
            .set_state((1, 4).into(), CellState::Frontier)
            .unwrap();
        assert_eq!(d.exploration_step(), Action::EnterMovingState);
    }

    #[test]
    fn merge_prefers_more_informed_state() {
        let g = Geometry::new(4, 4, GridKind::Quad, 2, 2).unwrap();
        let mut a = LocalMap::new(g);
        let mut b = LocalMap::new(g);
        a.set_state((0, 0).into(), CellState::Visited).unwrap();
        b.set_state((0, 0).into(), CellState::Frontier).unwrap();
        b.set_state((3, 3).into(), CellState::Obstacle).unwrap();
        let m = merge_maps(&a, &b).unwrap();
        assert_eq!(m.state((0, 0).into()), CellState::Visited);
        assert_eq!(m.state((3, 3).into()), CellState::Obstacle);
        assert_eq!(merge_maps(&a, &a).unwrap(), a);
    }

    #[test]
    fn merge_keeps_own_visit_counts() {
        let w = world(4, 4, GridKind::Quad, 2, &[]);
        let mut a = DroneState::new(0, (0, 0).into(), *w.geometry());
        let mut b = DroneState::new(1, (3, 3).into(), *w.geometry());
        a.sense_and_mark(&w).unwrap();
        b.sense_and_mark(&w).unwrap();
        let m = merge_maps(&a.local, &b.local).unwrap();
        assert_eq!(m.state((3, 3).into()), CellState::Visited);
        assert_eq!(m.visits((3, 3).into()), 0);
        assert_eq!(m.visits((0, 0).into()), 1);
    }

    #[test]
    fn merge_rejects_dimension_mismatch() {
        let a = LocalMap::new(Geometry::new(4, 4, GridKind::Quad, 2, 2).unwrap());
        let b = LocalMap::new(Geometry::new(4, 6, GridKind::Quad, 2, 2).unwrap());
        assert!(matches!(
            merge_maps(&a, &b),
            Err(Error::DimensionMismatch(..))
        ));
    }

    #[test]
    fn transition_table() {
        use CellState::*;
        assert!(Unexplored.can_become(Frontier));
        assert!(Unexplored.can_become(Obstacle));
        assert!(Frontier.can_become(Visited));
        assert!(!Visited.can_become(Frontier));
        assert!(!Obstacle.can_become(Visited));
        assert!(!Frontier.can_become(Obstacle));
        assert!(!Frontier.can_become(Unexplored));
    }
}
