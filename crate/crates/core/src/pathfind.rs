//! Shortest paths over a drone's local map.
//!
//! Known obstacles are blocked; unexplored, frontier and visited cells are
//! all traversable. Every move costs one step.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::agent::{CellState, LocalMap};
use crate::error::{Error, Result};
use crate::grid::{heuristic_distance, CellCoord, SubareaId};

pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    /// Start to goal, both inclusive.
    pub cells: Vec<CellCoord>,
    pub cost: u32,
}

impl Path {
    pub fn start(&self) -> CellCoord {
        self.cells[0]
    }

    pub fn goal(&self) -> CellCoord {
        *self.cells.last().expect("paths are never empty")
    }

    /// Cell after the start, or the start itself for a zero-length path.
    pub fn first_step(&self) -> CellCoord {
        self.cells.get(1).copied().unwrap_or(self.cells[0])
    }
}

fn check_start(local: &LocalMap, start: CellCoord) -> Result<()> {
    local.geometry().check(start)?;
    if !local.is_traversable(start) {
        return Err(Error::Blocked(start));
    }
    Ok(())
}

/// Minimum-step path from `start` to `goal` under the current beliefs, using
/// the grid's admissible heuristic. Ties go to lower f, then lower h, then
/// row-major cell order.
pub fn astar(local: &LocalMap, start: CellCoord, goal: CellCoord) -> Result<Option<Path>> {
    let kind = local.geometry().kind;
    astar_with(local, start, goal, |c| heuristic_distance(c, goal, kind))
}

/// A* with a caller-supplied heuristic, which must be consistent.
pub fn astar_with(
    local: &LocalMap,
    start: CellCoord,
    goal: CellCoord,
    heuristic: impl Fn(CellCoord) -> u32,
) -> Result<Option<Path>> {
    check_start(local, start)?;
    let g = *local.geometry();
    g.check(goal)?;
    if !local.is_traversable(goal) {
        return Ok(None);
    }

    let n = g.cell_count();
    let mut best = vec![UNREACHABLE; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();

    let s = g.index(start);
    best[s] = 0;
    open.push(Reverse((heuristic(start), heuristic(start), s)));

    let goal_index = g.index(goal);
    while let Some(Reverse((_, _, i))) = open.pop() {
        if closed[i] {
            continue;
        }
        closed[i] = true;
        if i == goal_index {
            break;
        }
        let cost = best[i] + 1;
        for next in g.moves(g.coord(i)) {
            let j = g.index(next);
            if closed[j] || local.state_at(j) == CellState::Obstacle || cost >= best[j] {
                continue;
            }
            best[j] = cost;
            parent[j] = i;
            let h = heuristic(next);
            open.push(Reverse((cost + h, h, j)));
        }
    }

    if best[goal_index] == UNREACHABLE {
        return Ok(None);
    }
    let mut cells = vec![goal];
    let mut cur = goal_index;
    while cur != s {
        cur = parent[cur];
        cells.push(g.coord(cur));
    }
    cells.reverse();
    Ok(Some(Path {
        cost: best[goal_index],
        cells,
    }))
}

/// Step counts from `start` to every cell, `UNREACHABLE` where blocked off.
pub fn distance_field(local: &LocalMap, start: CellCoord) -> Result<Vec<u32>> {
    check_start(local, start)?;
    let g = local.geometry();
    let mut dist = vec![UNREACHABLE; g.cell_count()];
    dist[g.index(start)] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let d = dist[g.index(c)] + 1;
        for n in g.moves(c) {
            let j = g.index(n);
            if dist[j] == UNREACHABLE && local.state_at(j) != CellState::Obstacle {
                dist[j] = d;
                queue.push_back(n);
            }
        }
    }
    Ok(dist)
}

/// Closest frontier cell (optionally within one subarea) and a shortest path
/// to it. Equal-cost frontiers resolve in row-major order.
pub fn nearest_frontier(
    local: &LocalMap,
    pos: CellCoord,
    restrict: Option<SubareaId>,
) -> Option<(CellCoord, Path)> {
    let g = local.geometry();
    if check_start(local, pos).is_err() {
        return None;
    }
    if let Some(s) = restrict {
        if !local.has_frontier_in(s) {
            return None;
        }
    }
    let wanted = |c: CellCoord| {
        local.state(c) == CellState::Frontier && restrict.is_none_or(|s| g.subarea_of(c) == s)
    };

    let mut dist = vec![UNREACHABLE; g.cell_count()];
    dist[g.index(pos)] = 0;
    let mut layer = vec![pos];
    let mut found: Option<CellCoord> = None;
    while !layer.is_empty() {
        for &c in &layer {
            if wanted(c) && found.is_none_or(|f| c < f) {
                found = Some(c);
            }
        }
        if found.is_some() {
            break;
        }
        let mut next = Vec::new();
        for &c in &layer {
            let d = dist[g.index(c)] + 1;
            for n in g.moves(c) {
                let j = g.index(n);
                if dist[j] == UNREACHABLE && local.state_at(j) != CellState::Obstacle {
                    dist[j] = d;
                    next.push(n);
                }
            }
        }
        layer = next;
    }

    let target = found?;
    let path = astar(local, pos, target).ok().flatten()?;
    Some((target, path))
}
