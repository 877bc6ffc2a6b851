//! JSON scenario documents.
//!
//! ```json
//! {
//!   "name": "city10",
//!   "world": {
//!     "bounds": {"min": [0, 0], "max": [200, 160]},
//!     "obstacles": [{"min": [20, 20], "max": [50, 50]}]
//!   },
//!   "route": {"waypoints": [[10, 10], [190, 10], [190, 150]]},
//!   "schedule": {"constant_speed": {"steps": 37, "start": 60, "length": 60, "speed": 8}},
//!   "points_per_instance": 24,
//!   "team_size": 6,
//!   "candidate_count": 512,
//!   "seed": 1,
//!   "resample_mode": "fixed",
//!   "sensor": {"fov_deg": 175, "max_range": null, "attenuation": "binary", "heading_policy": "sweep"},
//!   "heuristic": {"alpha": 1.0, "tau": 0.0001, "bool_tol": 0.0001, "max_iters": 50},
//!   "sampling_period": 1.0
//! }
//! ```
//!
//! `schedule` is one of `{"explicit": {"tail": [...], "head": [...]}}`,
//! `{"constant_speed": {"steps", "start", "length", "speed"}}` or
//! `{"full_route": {"steps"}}`. `name`, `resample_mode`, `heuristic`,
//! `sampling_period` and the sensor fields other than `fov_deg` are optional.
//! Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::candidates::ResampleMode;
use crate::coverage::SensorModel;
use crate::error::{Error, Result};
use crate::geometry::{Point2, World};
use crate::heuristic::HeuristicConfig;
use crate::route::{ParadeSchedule, RoutePath};
use crate::simulator::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteDef {
    pub waypoints: Vec<Point2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleDef {
    Explicit {
        tail: Vec<f64>,
        head: Vec<f64>,
    },
    ConstantSpeed {
        steps: usize,
        start: f64,
        length: f64,
        speed: f64,
    },
    FullRoute {
        steps: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub world: World,
    pub route: RouteDef,
    pub schedule: ScheduleDef,
    pub points_per_instance: usize,
    pub team_size: usize,
    pub candidate_count: usize,
    pub seed: u64,
    #[serde(default)]
    pub resample_mode: ResampleMode,
    pub sensor: SensorModel,
    #[serde(default)]
    pub heuristic: HeuristicConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_period: Option<f64>,
}

impl ScenarioFile {
    /// Resolves the schedule and validates the result.
    pub fn into_scenario(self) -> Result<Scenario> {
        let path = RoutePath::new(self.route.waypoints).map_err(|e| e.within("route"))?;
        let m = self.points_per_instance;
        let schedule = match self.schedule {
            ScheduleDef::Explicit { tail, head } => ParadeSchedule::new(tail, head, m),
            ScheduleDef::ConstantSpeed {
                steps,
                start,
                length,
                speed,
            } => {
                if !(start.is_finite()
                    && length.is_finite()
                    && length >= 0.0
                    && speed.is_finite()
                    && speed >= 0.0)
                {
                    return Err(Error::invalid(
                        "schedule.constant_speed",
                        "start, length and speed must be finite; length and speed nonnegative",
                    ));
                }
                ParadeSchedule::constant_speed(&path, steps, start, length, speed, m)
            }
            ScheduleDef::FullRoute { steps } => ParadeSchedule::full_route(&path, steps, m),
        };
        let scenario = Scenario {
            name: self.name,
            world: self.world,
            path,
            schedule,
            team_size: self.team_size,
            sensor: self.sensor,
            candidate_count: self.candidate_count,
            seed: self.seed,
            resample_mode: self.resample_mode,
            heuristic: self.heuristic,
            sampling_period: self.sampling_period,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

impl From<&Scenario> for ScenarioFile {
    /// Canonical document with the schedule written out explicitly.
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            name: s.name.clone(),
            world: s.world.clone(),
            route: RouteDef {
                waypoints: s.path.waypoints().to_vec(),
            },
            schedule: ScheduleDef::Explicit {
                tail: s.schedule.tail.clone(),
                head: s.schedule.head.clone(),
            },
            points_per_instance: s.schedule.points_per_instance,
            team_size: s.team_size,
            candidate_count: s.candidate_count,
            seed: s.seed,
            resample_mode: s.resample_mode,
            sensor: s.sensor,
            heuristic: s.heuristic,
            sampling_period: s.sampling_period,
        }
    }
}

impl Scenario {
    /// Hex SHA-256 of the canonical JSON document.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(&ScenarioFile::from(self)).expect("scenario serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }
}

/// Parses a scenario document; `origin` is used in error messages.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        field: e.path().to_string(),
        source: e.into_inner(),
    })?;
    file.into_scenario()
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "world": {"bounds": {"min": [0, 0], "max": [20, 20]},
                  "obstacles": [{"min": [8, 8], "max": [12, 12]}]},
        "route": {"waypoints": [[2, 2], [18, 2], [18, 18]]},
        "schedule": {"constant_speed": {"steps": 4, "start": 6, "length": 6, "speed": 3}},
        "points_per_instance": 5,
        "team_size": 2,
        "candidate_count": 10,
        "seed": 4,
        "sensor": {"fov_deg": 175}
    }"#;

    fn parse(text: &str) -> Result<Scenario> {
        parse_scenario(text, Path::new("test.json"))
    }

    #[test]
    fn parses_with_defaults() {
        let s = parse(TINY).unwrap();
        assert_eq!(s.step_count(), 4);
        assert_eq!(s.heuristic, HeuristicConfig::default());
        assert_eq!(s.resample_mode, ResampleMode::Fixed);
        assert_eq!(s.schedule.head, vec![6.0, 9.0, 12.0, 15.0]);
        assert_eq!(s.schedule.tail, vec![0.0, 3.0, 6.0, 9.0]);
    }

    #[test]
    fn round_trip_preserves_digest() {
        let s = parse(TINY).unwrap();
        let again = parse(&s.to_json()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.digest(), s.digest());
        assert_eq!(s.digest().len(), 64);
    }

    #[test]
    fn unknown_fields_are_named() {
        let text = TINY.replace("\"fov_deg\": 175", "\"fov_deg\": 175, \"zoom\": 2");
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let msg = err.to_string();
        assert!(msg.contains("zoom") && msg.contains("sensor"), "{msg}");
    }

    #[test]
    fn invariant_violations_name_fields() {
        let err = parse(&TINY.replace("\"team_size\": 2", "\"team_size\": 0")).unwrap_err();
        assert!(
            matches!(&err, Error::Invalid { field, .. } if field == "team_size"),
            "{err}"
        );

        let text = TINY.replace(
            r#"{"min": [8, 8], "max": [12, 12]}"#,
            r#"{"min": [8, 8], "max": [8, 8]}"#,
        );
        let err = parse(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Invalid { field, .. } if field == "world.obstacles[0]"),
            "{err}"
        );

        let text = TINY.replace("[18, 2], [18, 18]", "[18, 2], [18, 2]");
        let err = parse(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Invalid { field, .. } if field == "route.waypoints[2]"),
            "{err}"
        );
    }

    #[test]
    fn malformed_and_missing_are_distinguishable() {
        assert!(matches!(parse("{ not json"), Err(Error::Parse { .. })));
        assert!(matches!(
            load_scenario("/definitely/not/here.json"),
            Err(Error::Io { .. })
        ));
    }
}
