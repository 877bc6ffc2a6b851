//! SVG snapshot of one planning step.
//!
//! Layers, bottom to top: world bounds, obstacles, candidate positions,
//! sight lines, the route instance, guards. World `y` points up, so it is
//! flipped into SVG coordinates. Route points with zero coverage get the
//! `uncovered` class.

use std::fmt::Write;

use crate::coverage::coverage_column;
use crate::error::Result;
use crate::geometry::Point2;
use crate::route::RouteInstance;
use crate::simulator::{Scenario, StepRecord};

/// Width of the rendered image in pixels.
const IMAGE_WIDTH: f64 = 800.0;

const STYLE: &str = "\
.bounds{fill:#fafafa;stroke:#333;stroke-width:1}\
.obstacle{fill:#8c8c8c;stroke:#555;stroke-width:0.5}\
.candidate{fill:#9db4c8;fill-opacity:0.35}\
.sightline{stroke:#2c7bb6;stroke-width:0.6;stroke-opacity:0.45}\
.route{fill:none;stroke:#f29e38;stroke-width:2}\
.covered{fill:#f29e38;stroke:#7a4a0c;stroke-width:0.5}\
.uncovered{fill:#d7191c;stroke:#000;stroke-width:1}\
.guard{fill:#1a9641;stroke:#0b3d1b;stroke-width:1}\
.label{font:11px sans-serif;fill:#111}";

struct Frame {
    min: Point2,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, p: Point2) -> f64 {
        (p.x - self.min.x) * self.scale
    }

    fn y(&self, p: Point2) -> f64 {
        (self.max_y - p.y) * self.scale
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders step `rec` of scenario `s` over its route instance `inst`.
pub fn render_frame(s: &Scenario, rec: &StepRecord, inst: &RouteInstance) -> Result<String> {
    let b = s.world.bounds;
    let f = Frame {
        min: b.min,
        max_y: b.max.y,
        scale: IMAGE_WIDTH / b.width(),
    };
    let width = IMAGE_WIDTH;
    let height = b.height() * f.scale;
    let candidates = s.candidates_for_step(rec.step_index)?;

    let mut svg = String::new();
    // writes into a String cannot fail
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(svg, "<style>{STYLE}</style>");
    let _ = writeln!(
        svg,
        r#"<rect class="bounds" x="0" y="0" width="{width:.3}" height="{height:.3}"/>"#
    );

    svg.push_str("<g id=\"obstacles\">\n");
    for o in &s.world.obstacles {
        let top_left = Point2::new(o.min.x, o.max.y);
        let _ = writeln!(
            svg,
            r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            f.x(top_left),
            f.y(top_left),
            o.width() * f.scale,
            o.height() * f.scale
        );
    }
    svg.push_str("</g>\n<g id=\"candidates\">\n");
    for &c in &candidates.positions {
        let _ = writeln!(
            svg,
            r#"<circle class="candidate" cx="{:.3}" cy="{:.3}" r="1.5"/>"#,
            f.x(c),
            f.y(c)
        );
    }

    svg.push_str("</g>\n<g id=\"sightlines\">\n");
    for &g in &rec.selected_positions {
        let column = coverage_column(&s.world, g, inst, &s.sensor)?;
        for (p, c) in inst.points.iter().zip(column) {
            if c > 0.0 {
                let _ = writeln!(
                    svg,
                    r#"<line class="sightline" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    f.x(g),
                    f.y(g),
                    f.x(*p),
                    f.y(*p)
                );
            }
        }
    }

    svg.push_str("</g>\n<g id=\"route\">\n");
    let polyline: Vec<String> = inst
        .points
        .iter()
        .map(|p| format!("{:.3},{:.3}", f.x(*p), f.y(*p)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline class="route" points="{}"/>"#,
        polyline.join(" ")
    );
    for (j, p) in inst.points.iter().enumerate() {
        let covered = rec.point_coverage.get(j).copied().unwrap_or(0.0) > 0.0;
        let (class, r) = if covered {
            ("covered", 2.5)
        } else {
            ("uncovered", 3.5)
        };
        let _ = writeln!(
            svg,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{r}"/>"#,
            f.x(*p),
            f.y(*p)
        );
    }

    svg.push_str("</g>\n<g id=\"guards\">\n");
    for (robot, &g) in rec.robot_positions.iter().enumerate() {
        let (x, y) = (f.x(g), f.y(g));
        let _ = writeln!(
            svg,
            r#"<path class="guard" d="M {:.3} {:.3} L {:.3} {:.3} L {:.3} {:.3} Z"/>"#,
            x,
            y - 6.0,
            x - 5.0,
            y + 4.0,
            x + 5.0,
            y + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text class="label" x="{:.3}" y="{:.3}">{robot}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    svg.push_str("</g>\n");

    let title = match &s.name {
        Some(name) => format!("{} step {}", escape(name), rec.step_index),
        None => format!("step {}", rec.step_index),
    };
    let _ = writeln!(
        svg,
        r#"<text class="label" x="8" y="16">{title}  min coverage {}</text>"#,
        rec.t_boolean
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// File name of the frame for step `k`.
pub fn frame_file_name(k: usize) -> String {
    format!("frame_{k:04}.svg")
}
