//! Grid geometry for square ("quad") and hexagonal worlds.
//!
//! Both kinds share one rectangular `height x width` index space. Hexagonal
//! grids use odd-r offset coordinates: odd rows are shifted half a cell
//! towards +col, so neighbor deltas depend on row parity.
//!
//! Subareas are rectangular blocks of the index matrix for both kinds.

use std::collections::VecDeque;

use arrayvec::ArrayVec;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// rng stream used for obstacle placement.
pub const ENVIRONMENT_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
}

impl CellCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        CellCoord { row, col }
    }
}

impl From<(usize, usize)> for CellCoord {
    fn from((row, col): (usize, usize)) -> Self {
        CellCoord { row, col }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubareaId {
    pub srow: usize,
    pub scol: usize,
}

impl SubareaId {
    pub const fn new(srow: usize, scol: usize) -> Self {
        SubareaId { srow, scol }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Quad,
    Hex,
}

/// Up to 8 neighbors, in a fixed priority order.
pub type Neighbors = ArrayVec<CellCoord, 8>;

const QUAD_MOVES: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, 1), (0, -1)];
const QUAD_SENSING: [(isize, isize); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];
// E, NE, NW, W, SW, SE
const HEX_EVEN_ROW: [(isize, isize); 6] = [(0, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0)];
const HEX_ODD_ROW: [(isize, isize); 6] = [(0, 1), (-1, 1), (-1, 0), (0, -1), (1, 0), (1, 1)];

/// Shape of a world: dimensions, cell kind and subarea block size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub height: usize,
    pub width: usize,
    pub kind: GridKind,
    pub subarea_height: usize,
    pub subarea_width: usize,
}

impl Geometry {
    pub fn new(
        height: usize,
        width: usize,
        kind: GridKind,
        subarea_height: usize,
        subarea_width: usize,
    ) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::config("grid", "height and width must be positive"));
        }
        if subarea_height == 0 || subarea_width == 0 {
            return Err(Error::config(
                "subarea",
                "subarea dimensions must be positive",
            ));
        }
        if height % subarea_height != 0 || width % subarea_width != 0 {
            return Err(Error::config(
                "subarea",
                format!(
                    "subarea {subarea_height}x{subarea_width} does not divide grid {height}x{width}"
                ),
            ));
        }
        Ok(Geometry {
            height,
            width,
            kind,
            subarea_height,
            subarea_width,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn in_bounds(&self, c: CellCoord) -> bool {
        c.row < self.height && c.col < self.width
    }

    pub fn check(&self, c: CellCoord) -> Result<()> {
        if self.in_bounds(c) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                cell: c,
                height: self.height,
                width: self.width,
            })
        }
    }

    #[inline]
    pub fn index(&self, c: CellCoord) -> usize {
        c.row * self.width + c.col
    }

    #[inline]
    pub fn coord(&self, index: usize) -> CellCoord {
        CellCoord::new(index / self.width, index % self.width)
    }

    pub fn cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        (0..self.cell_count()).map(move |i| self.coord(i))
    }

    #[inline]
    fn offset_cells(&self, c: CellCoord, deltas: &[(isize, isize)]) -> Neighbors {
        let mut out = Neighbors::new();
        for &(dr, dc) in deltas {
            let r = c.row as isize + dr;
            let col = c.col as isize + dc;
            if r >= 0 && col >= 0 && (r as usize) < self.height && (col as usize) < self.width {
                out.push(CellCoord::new(r as usize, col as usize));
            }
        }
        out
    }

    fn hex_deltas(c: CellCoord) -> &'static [(isize, isize)] {
        if c.row % 2 == 0 {
            &HEX_EVEN_ROW
        } else {
            &HEX_ODD_ROW
        }
    }

    /// Movement neighbors without bounds checking of `c` itself.
    #[inline]
    pub(crate) fn moves(&self, c: CellCoord) -> Neighbors {
        match self.kind {
            GridKind::Quad => self.offset_cells(c, &QUAD_MOVES),
            GridKind::Hex => self.offset_cells(c, Self::hex_deltas(c)),
        }
    }

    #[inline]
    pub(crate) fn senses(&self, c: CellCoord) -> Neighbors {
        match self.kind {
            GridKind::Quad => self.offset_cells(c, &QUAD_SENSING),
            GridKind::Hex => self.offset_cells(c, Self::hex_deltas(c)),
        }
    }

    /// In-bounds movement neighbors in priority order: N, S, E, W for quad,
    /// E, NE, NW, W, SW, SE for hex. Obstacles are not filtered.
    pub fn movement_neighbors(&self, c: CellCoord) -> Result<Neighbors> {
        self.check(c)?;
        Ok(self.moves(c))
    }

    /// Cells covered by the drone's sensors: the 8-neighborhood on quad grids,
    /// the 6 movement neighbors on hex grids.
    pub fn sensing_neighbors(&self, c: CellCoord) -> Result<Neighbors> {
        self.check(c)?;
        Ok(self.senses(c))
    }

    pub fn subarea_rows(&self) -> usize {
        self.height / self.subarea_height
    }

    pub fn subarea_cols(&self) -> usize {
        self.width / self.subarea_width
    }

    pub fn subarea_count(&self) -> usize {
        self.subarea_rows() * self.subarea_cols()
    }

    pub fn subarea_area(&self) -> usize {
        self.subarea_height * self.subarea_width
    }

    #[inline]
    pub fn subarea_of(&self, c: CellCoord) -> SubareaId {
        SubareaId::new(c.row / self.subarea_height, c.col / self.subarea_width)
    }

    /// Dense row-major index of a subarea.
    #[inline]
    pub fn subarea_index(&self, s: SubareaId) -> usize {
        s.srow * self.subarea_cols() + s.scol
    }

    pub fn subarea_from_index(&self, index: usize) -> SubareaId {
        SubareaId::new(index / self.subarea_cols(), index % self.subarea_cols())
    }

    pub fn subarea_cells(&self, s: SubareaId) -> impl Iterator<Item = CellCoord> {
        let (r0, c0) = (s.srow * self.subarea_height, s.scol * self.subarea_width);
        let (h, w) = (self.subarea_height, self.subarea_width);
        (r0..r0 + h).flat_map(move |r| (c0..c0 + w).map(move |c| CellCoord::new(r, c)))
    }

    /// Cell center in cell units. Hex centers account for the odd-row shift
    /// and the sqrt(3)/2 row pitch so neighboring centers are 1 apart.
    pub fn cell_center(&self, c: CellCoord) -> (f64, f64) {
        match self.kind {
            GridKind::Quad => (c.col as f64, c.row as f64),
            GridKind::Hex => {
                let shift = if c.row % 2 == 1 { 0.5 } else { 0.0 };
                (c.col as f64 + shift, c.row as f64 * 3f64.sqrt() / 2.0)
            }
        }
    }

    pub fn euclidean(&self, a: CellCoord, b: CellCoord) -> f64 {
        let (ax, ay) = self.cell_center(a);
        let (bx, by) = self.cell_center(b);
        (ax - bx).hypot(ay - by)
    }
}

fn cube(c: CellCoord) -> (i64, i64, i64) {
    let row = c.row as i64;
    let x = c.col as i64 - (row - (row & 1)) / 2;
    let z = row;
    (x, -x - z, z)
}

/// Admissible step-count estimate between two cells: Manhattan distance on
/// quad grids, cube-coordinate distance on odd-r hex grids.
pub fn heuristic_distance(a: CellCoord, b: CellCoord, kind: GridKind) -> u32 {
    match kind {
        GridKind::Quad => (a.row.abs_diff(b.row) + a.col.abs_diff(b.col)) as u32,
        GridKind::Hex => {
            let (ax, ay, az) = cube(a);
            let (bx, by, bz) = cube(b);
            (ax - bx).abs().max((ay - by).abs()).max((az - bz).abs()) as u32
        }
    }
}

/// Ground-truth world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    geometry: Geometry,
    obstacles: Vec<bool>,
}

impl GridMap {
    /// An obstacle-free world.
    pub fn empty(geometry: Geometry) -> Self {
        GridMap {
            geometry,
            obstacles: vec![false; geometry.cell_count()],
        }
    }

    pub fn with_obstacles(
        geometry: Geometry,
        obstacles: impl IntoIterator<Item = CellCoord>,
    ) -> Result<Self> {
        let mut map = Self::empty(geometry);
        for c in obstacles {
            geometry.check(c)?;
            map.obstacles[geometry.index(c)] = true;
        }
        Ok(map)
    }

    #[inline]
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn height(&self) -> usize {
        self.geometry.height
    }

    pub fn width(&self) -> usize {
        self.geometry.width
    }

    pub fn kind(&self) -> GridKind {
        self.geometry.kind
    }

    #[inline]
    pub fn is_obstacle(&self, c: CellCoord) -> bool {
        self.obstacles[self.geometry.index(c)]
    }

    pub fn obstacles(&self) -> impl Iterator<Item = CellCoord> + '_ {
        self.obstacles
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(|(i, _)| self.geometry.coord(i))
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacles.iter().filter(|&&o| o).count()
    }

    pub fn free_cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        self.geometry.cells().filter(|&c| !self.is_obstacle(c))
    }

    pub fn free_count(&self) -> usize {
        self.geometry.cell_count() - self.obstacle_count()
    }

    pub fn movement_neighbors(&self, c: CellCoord) -> Result<Neighbors> {
        self.geometry.movement_neighbors(c)
    }

    pub fn sensing_neighbors(&self, c: CellCoord) -> Result<Neighbors> {
        self.geometry.sensing_neighbors(c)
    }

    pub fn subarea_of(&self, c: CellCoord) -> Result<SubareaId> {
        self.geometry.check(c)?;
        Ok(self.geometry.subarea_of(c))
    }

    /// True when the free cells form one component under movement adjacency.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.free_cells().next() else {
            return true;
        };
        let g = &self.geometry;
        let mut seen = vec![false; g.cell_count()];
        let mut queue = VecDeque::from([start]);
        seen[g.index(start)] = true;
        let mut reached = 1;
        while let Some(c) = queue.pop_front() {
            for n in g.moves(c) {
                let i = g.index(n);
                if !seen[i] && !self.obstacles[i] {
                    seen[i] = true;
                    reached += 1;
                    queue.push_back(n);
                }
            }
        }
        reached == self.free_count()
    }

    /// Whether turning free cell `c` into an obstacle keeps the remaining
    /// free cells connected, assuming they are connected now.
    fn can_block(&self, c: CellCoord, seen: &mut [u32], stamp: u32) -> bool {
        let g = &self.geometry;
        let free: Neighbors = g
            .moves(c)
            .into_iter()
            .filter(|&n| !self.is_obstacle(n))
            .collect();
        if free.len() <= 1 {
            return true;
        }
        let blocked = g.index(c);
        let mut pending: Vec<usize> = free[1..].iter().map(|&n| g.index(n)).collect();
        let mut queue = VecDeque::from([free[0]]);
        seen[g.index(free[0])] = stamp;
        while let Some(cur) = queue.pop_front() {
            for n in g.moves(cur) {
                let i = g.index(n);
                if i == blocked || self.obstacles[i] || seen[i] == stamp {
                    continue;
                }
                seen[i] = stamp;
                if let Some(p) = pending.iter().position(|&x| x == i) {
                    pending.swap_remove(p);
                    if pending.is_empty() {
                        return true;
                    }
                }
                queue.push_back(n);
            }
        }
        false
    }
}

/// Seeded random world with `round(obstacle_fraction * height * width)`
/// obstacles and a connected free space.
///
/// Cells are visited in a seeded random order and each one becomes an
/// obstacle unless that would split the free space. Fails if the shuffled
/// order runs out before the target count is reached.
pub fn generate_environment(
    height: usize,
    width: usize,
    kind: GridKind,
    subarea_dims: (usize, usize),
    obstacle_fraction: f64,
    seed: u64,
) -> Result<GridMap> {
    let geometry = Geometry::new(height, width, kind, subarea_dims.0, subarea_dims.1)?;
    if !(0.0..=0.5).contains(&obstacle_fraction) {
        return Err(Error::config(
            "obstacle_fraction",
            format!("{obstacle_fraction} is outside [0, 0.5]"),
        ));
    }
    let target = (obstacle_fraction * geometry.cell_count() as f64).round() as usize;
    let mut map = GridMap::empty(geometry);
    if target == 0 {
        return Ok(map);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ENVIRONMENT_STREAM);
    let mut order: Vec<usize> = (0..geometry.cell_count()).collect();
    order.shuffle(&mut rng);

    let mut seen = vec![0u32; geometry.cell_count()];
    let mut placed = 0;
    for (stamp, &i) in (1u32..).zip(order.iter()) {
        let c = geometry.coord(i);
        if map.can_block(c, &mut seen, stamp) {
            map.obstacles[i] = true;
            placed += 1;
            if placed == target {
                return Ok(map);
            }
        }
    }
    Err(Error::Generation(format!(
        "placed only {placed} of {target} obstacles without disconnecting free space"
    )))
}
