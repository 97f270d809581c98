//! Self-contained four-panel SVG: trajectories, commands, manifolds and the
//! angle error.

use std::fmt::Write as _;

use pursuit_core::simulator::SimulationTrace;

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 340.0;
const MARGIN: f64 = 56.0;
const MAX_POINTS: usize = 2000;
const COLORS: [&str; 3] = ["#d62728", "#1f77b4", "#2ca02c"];

struct Series {
    label: &'static str,
    points: Vec<(f64, f64)>,
}

struct Panel {
    title: &'static str,
    x_label: &'static str,
    y_label: &'static str,
    series: Vec<Series>,
    equal_axes: bool,
}

fn decimate(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let stride = points.len().div_ceil(MAX_POINTS).max(1);
    let last = points.last().copied();
    let mut out: Vec<_> = points.into_iter().step_by(stride).collect();
    if let (Some(l), Some(o)) = (last, out.last()) {
        if *o != l {
            out.push(l);
        }
    }
    out
}

fn bounds(panel: &Panel) -> Option<(f64, f64, f64, f64)> {
    let mut it = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|p| p.0.is_finite() && p.1.is_finite());
    let first = it.next()?;
    let (mut x0, mut x1, mut y0, mut y1) = (first.0, first.0, first.1, first.1);
    for p in it {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let pad = |lo: f64, hi: f64| {
        let span = hi - lo;
        let d = if span > 0.0 {
            0.05 * span
        } else {
            lo.abs().max(1.0) * 0.05
        };
        (lo - d, hi + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    if panel.equal_axes {
        let w = PANEL_W - 2.0 * MARGIN;
        let h = PANEL_H - 2.0 * MARGIN;
        let scale = ((x1 - x0) / w).max((y1 - y0) / h);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        return Some((
            cx - scale * w / 2.0,
            cx + scale * w / 2.0,
            cy - scale * h / 2.0,
            cy + scale * h / 2.0,
        ));
    }
    Some((x0, x1, y0, y1))
}

fn draw(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let _ = writeln!(out, r#"<g transform="translate({ox},{oy})">"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="white" stroke="black"/>"#,
        PANEL_W - 2.0 * MARGIN,
        PANEL_H - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        PANEL_W / 2.0,
        MARGIN - 12.0,
        panel.title
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        PANEL_W / 2.0,
        PANEL_H - 12.0,
        panel.x_label
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {})">{}</text>"#,
        PANEL_H / 2.0,
        PANEL_H / 2.0,
        panel.y_label
    );
    if let Some((x0, x1, y0, y1)) = bounds(panel) {
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (PANEL_W - 2.0 * MARGIN);
        let sy = |y: f64| PANEL_H - MARGIN - (y - y0) / (y1 - y0) * (PANEL_H - 2.0 * MARGIN);
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{}" text-anchor="middle" font-size="10">{:.3}</text>"#,
                sx(xv),
                PANEL_H - MARGIN + 14.0,
                xv
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="10">{:.3e}</text>"#,
                MARGIN - 4.0,
                sy(yv) + 3.0,
                yv
            );
        }
        for (k, s) in panel.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1)))
                .collect();
            if !pts.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            let ly = MARGIN + 14.0 + 14.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{ly}" font-size="11" fill="{color}">{}</text>"#,
                PANEL_W - MARGIN - 70.0,
                s.label
            );
        }
    }
    let _ = writeln!(out, "</g>");
}

fn series<F: Fn(&pursuit_core::simulator::TraceRow<f64>) -> Option<(f64, f64)>>(
    trace: &SimulationTrace<f64>,
    label: &'static str,
    f: F,
) -> Series {
    Series {
        label,
        points: decimate(trace.rows.iter().filter_map(f).collect()),
    }
}

/// Renders the trace as one SVG document.
pub fn render(trace: &SimulationTrace<f64>, title: &str) -> String {
    let panels = [
        Panel {
            title: "Trajectories",
            x_label: "x [m]",
            y_label: "y [m]",
            equal_axes: true,
            series: vec![
                series(trace, "pursuer", |r| {
                    Some((r.state.pursuer.x, r.state.pursuer.y))
                }),
                series(trace, "evader", |r| {
                    Some((r.state.evader.x, r.state.evader.y))
                }),
                series(trace, "defender", |r| {
                    Some((r.state.defender.x, r.state.defender.y))
                }),
            ],
        },
        Panel {
            title: "Lateral accelerations",
            x_label: "t [s]",
            y_label: "a [m/s^2]",
            equal_axes: false,
            series: vec![
                series(trace, "pursuer", |r| r.command.map(|c| (r.state.t, c.a_p))),
                series(trace, "evader", |r| r.command.map(|c| (r.state.t, c.a_e))),
                series(trace, "defender", |r| r.command.map(|c| (r.state.t, c.a_d))),
            ],
        },
        Panel {
            title: "Sliding manifolds",
            x_label: "t [s]",
            y_label: "S [rad/s]",
            equal_axes: false,
            series: vec![
                series(trace, "inner", |r| {
                    r.manifolds.map(|m| (r.state.t, m.s_inner))
                }),
                series(trace, "outer", |r| {
                    r.manifolds.map(|m| (r.state.t, m.s_outer))
                }),
                series(trace, "decoy", |r| {
                    r.manifolds.and_then(|m| m.s_e.map(|s| (r.state.t, s)))
                }),
            ],
        },
        Panel {
            title: "Angle error",
            x_label: "t [s]",
            y_label: "beta [deg]",
            equal_axes: false,
            series: vec![series(trace, "beta", |r| {
                Some((r.state.t, r.state.beta.to_degrees()))
            })],
        },
    ];
    let mut out = String::new();
    let (w, h) = (2.0 * PANEL_W, 2.0 * PANEL_H + 30.0);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="16">{} ({} at {:.3} s)</text>"#,
        PANEL_W,
        escape(title),
        trace.event.kind.name(),
        trace.event.t_f
    );
    for (i, panel) in panels.iter().enumerate() {
        draw(
            &mut out,
            panel,
            (i % 2) as f64 * PANEL_W,
            30.0 + (i / 2) as f64 * PANEL_H,
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
