//! Per-tick traces as JSON lines.
//!
//! The first line is `{"config": <run config>}`; every later line is one
//! tick record. The world is not stored: it is regenerated from the config,
//! which is deterministic.

use std::io::{BufRead, Write};

use hexplore_core::{GridMap, SimConfig, Simulation, TickRecord};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::render::render;

#[derive(Serialize, Deserialize)]
struct Header {
    config: SimConfig,
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("trace records always serialize")
}

pub fn write_trace<W: Write>(mut out: W, cfg: &SimConfig, ticks: &[TickRecord]) -> Result<()> {
    let io = |e: std::io::Error| CliError::Output(format!("writing trace: {e}"));
    let header = Header {
        config: cfg.clone(),
    };
    writeln!(out, "{}", json_line(&header)).map_err(io)?;
    for t in ticks {
        writeln!(out, "{}", json_line(t)).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub struct Trace {
    pub config: SimConfig,
    pub ticks: Vec<TickRecord>,
}

pub fn read_trace<R: BufRead>(input: R, name: &str) -> Result<Trace> {
    let bad = |line: usize, e: String| CliError::Parse {
        path: name.into(),
        message: format!("line {line}: {e}"),
    };
    let mut lines = input.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| bad(1, "empty trace".into()))?;
    let first = first.map_err(|e| bad(1, e.to_string()))?;
    let header: Header = serde_json::from_str(&first).map_err(|e| bad(1, e.to_string()))?;
    let mut ticks = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| bad(i + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        ticks.push(serde_json::from_str(&line).map_err(|e| bad(i + 1, e.to_string()))?);
    }
    Ok(Trace {
        config: header.config,
        ticks,
    })
}

/// Replays a trace and renders the map after every `every`-th tick and
/// after the last one. `every == 0` renders only the last tick.
pub fn replay(trace: &Trace, every: u64) -> Result<Vec<(u64, String)>> {
    let world: GridMap = Simulation::new(trace.config.clone())?.world().clone();
    let g = *world.geometry();
    let mut visits = vec![0u32; g.cell_count()];
    let mut frames = Vec::new();
    for (k, t) in trace.ticks.iter().enumerate() {
        for &c in &t.visits {
            g.check(c)?;
            visits[g.index(c)] += 1;
        }
        let last = k + 1 == trace.ticks.len();
        if last || (every > 0 && t.tick % every == 0) {
            let drones: Vec<_> = t.drones.iter().map(|d| d.pos).collect();
            frames.push((t.tick, render(&world, &visits, &drones)));
        }
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hexplore_core::Strategy;

    #[test]
    fn trace_round_trips_and_replays_to_the_final_counts() {
        let cfg = SimConfig::new(8, 8, Strategy::QrnnSrc, 3, 4);
        let mut sim = Simulation::new(cfg.clone()).unwrap();
        sim.enable_trace();
        sim.run_to_end().unwrap();
        let ticks = sim.take_trace().unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &cfg, &ticks).unwrap();
        let back = read_trace(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.config, cfg);
        assert_eq!(back.ticks, ticks);

        let frames = replay(&back, 0).unwrap();
        assert_eq!(frames.len(), 1);
        let drones: Vec<_> = sim.drones().iter().map(|d| d.pos).collect();
        assert_eq!(
            frames[0].1,
            render(sim.world(), sim.visit_counts(), &drones)
        );
        assert_eq!(replay(&back, 1).unwrap().len(), ticks.len());
    }

    #[test]
    fn garbage_is_a_parse_error_with_line() {
        let e = read_trace("{\"config\": 3}\n".as_bytes(), "t.jsonl")
            .err()
            .unwrap();
        assert!(e.to_string().contains("line 1"), "{e}");
        assert_eq!(e.exit_code(), 1);
    }
}
