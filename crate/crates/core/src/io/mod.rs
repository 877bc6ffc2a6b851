//! Scenario files, result streams and SVG frames.

pub mod render;
pub mod results;
pub mod scenario;

pub use render::{frame_file_name, render_frame};
pub use results::{strip_timing, write_results, ResultLine};
pub use scenario::{load_scenario, parse_scenario, ScenarioFile};
