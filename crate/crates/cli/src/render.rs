//! Plain-text map rendering.
//!
//! Every cell is a two-character token: ` .` unvisited, ` #` obstacle,
//! ` D` one or more drones, otherwise the visit count right-aligned (`++`
//! from 100 on). Odd rows of a hex grid get one extra leading space so the
//! tokens sit between those of the rows above and below.

use std::fmt::Write;

use hexplore_core::{CellCoord, GridKind, GridMap};

pub const TOKEN_WIDTH: usize = 2;

pub fn cell_token(obstacle: bool, drone: bool, visits: u32) -> String {
    if obstacle {
        " #".into()
    } else if drone {
        " D".into()
    } else if visits == 0 {
        " .".into()
    } else if visits < 100 {
        format!("{visits:>2}")
    } else {
        "++".into()
    }
}

/// `visits` is row-major over the whole grid.
pub fn render(world: &GridMap, visits: &[u32], drones: &[CellCoord]) -> String {
    let g = world.geometry();
    let mut here = vec![false; g.cell_count()];
    for &d in drones {
        if g.in_bounds(d) {
            here[g.index(d)] = true;
        }
    }
    let mut out = String::with_capacity(g.cell_count() * TOKEN_WIDTH + 2 * g.height);
    for row in 0..g.height {
        if g.kind == GridKind::Hex && row % 2 == 1 {
            out.push(' ');
        }
        for col in 0..g.width {
            let c = CellCoord::new(row, col);
            let i = g.index(c);
            let _ = write!(
                out,
                "{}",
                cell_token(world.is_obstacle(c), here[i], visits[i])
            );
        }
        out.push('\n');
    }
    out
}
