//! Run configuration files.
//!
//! A run file is flat TOML. Every key except `schema_version`, `strategy`
//! and `seed` has a default:
//!
//! ```toml
//! schema_version = 1
//! strategy = "WHRNN-SRC"
//! seed = 7
//! height = 40
//! width = 40
//! subarea_height = 4
//! subarea_width = 4
//! n_drones = 25
//! obstacle_fraction = 0.2
//! alpha = 4.0
//! beta = 4.0
//! src_radius = 10.0
//! mtbf = 0.0
//! # kind = "hex"      defaults to the strategy's grid
//! # max_ticks = 5000  defaults to 10 x free cells
//! ```

use std::path::Path;

use hexplore_core::{CommsConfig, CostParams, GridKind, SimConfig, Strategy};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub schema_version: u32,
    pub strategy: String,
    pub seed: u64,
    #[serde(default = "d_size")]
    pub height: usize,
    #[serde(default = "d_size")]
    pub width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<GridKind>,
    #[serde(default = "d_sub")]
    pub subarea_height: usize,
    #[serde(default = "d_sub")]
    pub subarea_width: usize,
    #[serde(default = "d_drones")]
    pub n_drones: usize,
    #[serde(default = "d_fraction")]
    pub obstacle_fraction: f64,
    #[serde(default = "d_alpha")]
    pub alpha: f64,
    #[serde(default = "d_beta")]
    pub beta: f64,
    #[serde(default = "d_radius")]
    pub src_radius: f64,
    #[serde(default)]
    pub mtbf: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ticks: Option<u64>,
}

fn d_size() -> usize {
    40
}
fn d_sub() -> usize {
    4
}
fn d_drones() -> usize {
    25
}
fn d_fraction() -> f64 {
    0.2
}
fn d_alpha() -> f64 {
    CostParams::default().alpha
}
fn d_beta() -> f64 {
    CostParams::default().beta
}
fn d_radius() -> f64 {
    CommsConfig::default().src_radius
}

pub fn check_schema(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(CliError::invalid(
            "schema_version",
            format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        ));
    }
    Ok(())
}

pub fn parse_strategy(s: &str) -> Result<Strategy> {
    s.parse::<Strategy>().map_err(|_| {
        let names: Vec<&str> = Strategy::ALL.iter().map(|k| k.name()).collect();
        CliError::invalid(
            "strategy",
            format!("unknown {s:?}, expected one of {}", names.join(", ")),
        )
    })
}

impl RunFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Checks every field and builds the simulation config.
    pub fn to_sim_config(&self) -> Result<SimConfig> {
        check_schema(self.schema_version)?;
        let strategy = parse_strategy(&self.strategy)?;
        if self.n_drones == 0 {
            return Err(CliError::invalid("n_drones", "must be at least 1"));
        }
        let cfg = SimConfig {
            height: self.height,
            width: self.width,
            kind: self.kind.unwrap_or(strategy.required_kind()),
            subarea_height: self.subarea_height,
            subarea_width: self.subarea_width,
            n_drones: self.n_drones,
            obstacle_fraction: self.obstacle_fraction,
            strategy,
            params: CostParams {
                alpha: self.alpha,
                beta: self.beta,
            },
            comms: CommsConfig {
                src_radius: self.src_radius,
                mtbf: self.mtbf,
            },
            seed: self.seed,
            max_ticks: self.max_ticks,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_sim_config(cfg: &SimConfig) -> Self {
        RunFile {
            schema_version: SCHEMA_VERSION,
            strategy: cfg.strategy.name().to_string(),
            seed: cfg.seed,
            height: cfg.height,
            width: cfg.width,
            kind: Some(cfg.kind),
            subarea_height: cfg.subarea_height,
            subarea_width: cfg.subarea_width,
            n_drones: cfg.n_drones,
            obstacle_fraction: cfg.obstacle_fraction,
            alpha: cfg.params.alpha,
            beta: cfg.params.beta,
            src_radius: cfg.comms.src_radius,
            mtbf: cfg.comms.mtbf,
            max_ticks: cfg.max_ticks,
        }
    }
}

/// The config as a run file that parses back to the same `SimConfig`.
pub fn echo(cfg: &SimConfig) -> String {
    toml::to_string(&RunFile::from_sim_config(cfg)).expect("run files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunFile> {
        RunFile::parse(text, Path::new("test.toml"))
    }

    #[test]
    fn minimal_file_takes_defaults() {
        let f = parse("schema_version = 1\nstrategy = \"HRNN-SRC\"\nseed = 3\n").unwrap();
        let cfg = f.to_sim_config().unwrap();
        assert_eq!((cfg.height, cfg.width, cfg.n_drones), (40, 40, 25));
        assert_eq!(cfg.kind, GridKind::Hex);
        assert_eq!(cfg.params, CostParams::default());
    }

    #[test]
    fn indivisible_subarea_names_the_field() {
        let f = parse("schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nsubarea_height = 7\nsubarea_width = 7\n")
            .unwrap();
        match f.to_sim_config() {
            Err(CliError::Invalid { field, reason }) => {
                assert_eq!(field, "subarea");
                assert!(reason.contains("does not divide"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_parse_errors() {
        let e =
            parse("schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\ndrones = 4\n").unwrap_err();
        assert!(e.to_string().contains("drones"), "{e}");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn bad_values_name_their_field() {
        let cases = [
            (
                "schema_version = 2\nstrategy = \"QRNN\"\nseed = 1\n",
                "schema_version",
            ),
            (
                "schema_version = 1\nstrategy = \"ANT\"\nseed = 1\n",
                "strategy",
            ),
            (
                "schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nkind = \"hex\"\n",
                "strategy",
            ),
            (
                "schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nn_drones = 0\n",
                "n_drones",
            ),
            (
                "schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nobstacle_fraction = 0.7\n",
                "obstacle_fraction",
            ),
            (
                "schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nmax_ticks = 0\n",
                "max_ticks",
            ),
        ];
        for (text, field) in cases {
            match parse(text).unwrap().to_sim_config() {
                Err(CliError::Invalid { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = SimConfig::new(60, 60, Strategy::WhrnnSrc, 50, 99);
        cfg.params.alpha = 2.5;
        cfg.comms.mtbf = 3.0;
        cfg.max_ticks = Some(777);
        let text = echo(&cfg);
        let back = parse(&text).unwrap().to_sim_config().unwrap();
        assert_eq!(back, cfg);
        // and once more, byte for byte
        assert_eq!(echo(&back), text);
    }
}
