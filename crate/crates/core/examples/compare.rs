//! Mean metrics of every strategy over 20 seeds.
//!
//! ```text
//! cargo run --release --example compare -- [size] [mtbf]
//! ```

use std::time::Instant;

use hexplore_core::{aggregate, run, SimConfig, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let size: usize = args.next().map_or(40, |s| s.parse().expect("size"));
    let mtbf: f64 = args.next().map_or(0.0, |s| s.parse().expect("mtbf"));
    for n in [25, 50, 100] {
        for s in Strategy::ALL {
            let t = Instant::now();
            let runs: Vec<_> = (0..20)
                .map(|seed| {
                    let mut cfg = SimConfig::new(size, size, s, n, seed);
                    cfg.comms.mtbf = mtbf;
                    run(&cfg).expect("valid config")
                })
                .collect();
            let a = aggregate(&runs).expect("20 runs");
            println!(
                "n={n:3} {:10} reexplored={:.3} variance={:.3} ticks={:.0} completed={:.2} ({:.1?})",
                s.name(),
                a.avg_reexplored.mean,
                a.visit_variance.mean,
                a.completion_ticks.mean,
                a.completed_fraction,
                t.elapsed()
            );
        }
    }
}
