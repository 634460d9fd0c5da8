//! Path plot as a standalone SVG document.

use std::fmt::Write;

use mfba::environment::{EnvironmentSpec, Point2};
use mfba::planner::{CycleRecord, Mode};

const PIXELS_PER_METRE: f64 = 50.0;
const MARGIN: f64 = 30.0;

struct Canvas {
    min: Point2,
    height_m: f64,
}

impl Canvas {
    fn x(&self, p: Point2) -> f64 {
        MARGIN + (p.x - self.min.x) * PIXELS_PER_METRE
    }

    // SVG's y axis points down.
    fn y(&self, p: Point2) -> f64 {
        MARGIN + (self.height_m - (p.y - self.min.y)) * PIXELS_PER_METRE
    }

    fn len(&self, metres: f64) -> f64 {
        metres * PIXELS_PER_METRE
    }
}

/// Cycles drawn with obstacle discs and the sensing circle: the first cycle of
/// every avoidance episode plus the final cycle.
pub fn snapshot_cycles(records: &[CycleRecord]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut previous = Mode::Start;
    for r in records {
        if r.mode == Mode::Avoid && previous != Mode::Avoid {
            out.push(r.cycle);
        }
        previous = r.mode;
    }
    if let Some(last) = records.last() {
        if out.last() != Some(&last.cycle) {
            out.push(last.cycle);
        }
    }
    out
}

pub fn render(
    env: &EnvironmentSpec,
    records: &[CycleRecord],
    sensing_range: f64,
    title: &str,
) -> String {
    let canvas = Canvas {
        min: env.bounds.min,
        height_m: env.bounds.height(),
    };
    let width = 2.0 * MARGIN + canvas.len(env.bounds.width());
    let height = 2.0 * MARGIN + canvas.len(env.bounds.height());
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="black"/>"#,
        MARGIN,
        MARGIN,
        canvas.len(env.bounds.width()),
        canvas.len(env.bounds.height())
    );

    // Obstacle trajectories over the mission.
    let end_time = records.last().map_or(0.0, |r| r.time);
    for o in &env.obstacles {
        let a = o.position_at(0.0);
        let b = o.position_at(end_time);
        let _ = writeln!(
            s,
            r#"<line class="obstacle-track" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-dasharray="4 3"/>"#,
            canvas.x(a),
            canvas.y(a),
            canvas.x(b),
            canvas.y(b)
        );
    }

    for cycle in snapshot_cycles(records) {
        let Some(r) = records.iter().find(|r| r.cycle == cycle) else {
            continue;
        };
        for (o, p) in env.obstacles.iter().zip(&r.obstacles) {
            let _ = writeln!(
                s,
                r#"<circle class="obstacle" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="red" fill-opacity="0.4"/>"#,
                canvas.x(*p),
                canvas.y(*p),
                canvas.len(o.radius)
            );
        }
        let _ = writeln!(
            s,
            r#"<circle class="sensing" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="magenta"/>"#,
            canvas.x(r.position),
            canvas.y(r.position),
            canvas.len(env.robot_radius + sensing_range)
        );
    }

    if !records.is_empty() {
        let points: Vec<String> = records
            .iter()
            .map(|r| format!("{:.2},{:.2}", canvas.x(r.position), canvas.y(r.position)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="path" points="{}" fill="none" stroke="blue" stroke-width="2"/>"#,
            points.join(" ")
        );
    }

    for (class, p, colour) in [("start", env.start, "green"), ("goal", env.goal, "black")] {
        let _ = writeln!(
            s,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="5" fill="{colour}"/>"#,
            canvas.x(p),
            canvas.y(p)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
