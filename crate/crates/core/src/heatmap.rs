//! SVG heatmaps of node values on grid-shaped environments.
//!
//! Each panel is normalized on its own so its largest value gets the
//! brightest shade. An all-zero panel is drawn in the minimum shade. Output
//! depends only on the input, so the same panels always give the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dynamics::normalize_display;
use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, GraphKind, NodeId};

const CELL: usize = 24;
const GAP: usize = 16;
const TITLE: usize = 18;
const PER_ROW: usize = 5;

/// Shade stops from low to high.
const STOPS: [(u8, u8, u8); 3] = [(13, 8, 135), (204, 71, 120), (240, 249, 33)];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HeatmapPanel {
    pub title: String,
    /// One value per environment node, in node order.
    pub values: Vec<f64>,
    /// Drawn as a line through cell centers.
    pub path: Vec<NodeId>,
    /// Short labels placed on cells, e.g. `S` and `R`.
    pub marks: Vec<(NodeId, String)>,
}

/// Grid shape of an environment: lattices as they are, paths as one row.
pub fn grid_shape(env: &EnvironmentGraph) -> Result<(usize, usize)> {
    match env.kind() {
        GraphKind::Lattice { rows, cols } => Ok((*rows, *cols)),
        GraphKind::Path => Ok((1, env.node_count())),
        other => Err(CglError::Unsupported(format!(
            "heatmaps need a lattice or path environment, not {}; use CSV output instead",
            kind_name(other)
        ))),
    }
}

fn kind_name(kind: &GraphKind) -> &'static str {
    match kind {
        GraphKind::Path => "path",
        GraphKind::Lattice { .. } => "lattice",
        GraphKind::WattsStrogatz { .. } => "a Watts-Strogatz graph",
        GraphKind::Custom => "a custom graph",
    }
}

fn shade(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let scaled = t * (STOPS.len() - 1) as f64;
    let k = (scaled.floor() as usize).min(STOPS.len() - 2);
    let f = scaled - k as f64;
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(env: &EnvironmentGraph, panels: &[HeatmapPanel]) -> Result<String> {
    let (rows, cols) = grid_shape(env)?;
    if panels.is_empty() {
        return Err(CglError::InvalidParameter("heatmap needs at least one panel".into()));
    }
    let n = env.node_count();
    for p in panels {
        if p.values.len() != n {
            return Err(CglError::DimensionMismatch {
                expected: n,
                actual: p.values.len(),
            });
        }
        for &node in p.path.iter().chain(p.marks.iter().map(|(node, _)| node)) {
            env.check_node(node)?;
        }
    }

    let panel_w = cols * CELL;
    let panel_h = rows * CELL + TITLE;
    let across = panels.len().min(PER_ROW);
    let down = panels.len().div_ceil(PER_ROW);
    let width = across * panel_w + (across + 1) * GAP;
    let height = down * panel_h + (down + 1) * GAP;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(svg, r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##);
    for (k, panel) in panels.iter().enumerate() {
        let x0 = GAP + (k % PER_ROW) * (panel_w + GAP);
        let y0 = GAP + (k / PER_ROW) * (panel_h + GAP);
        let center = |node: NodeId| {
            let (r, c) = ((node - 1) / cols, (node - 1) % cols);
            (x0 + c * CELL + CELL / 2, y0 + TITLE + r * CELL + CELL / 2)
        };
        let _ = writeln!(svg, r#"<g id="panel-{k}">"#);
        let _ = writeln!(svg, r#"<text x="{x0}" y="{}">{}</text>"#, y0 + 12, escape(&panel.title));
        let norm = normalize_display(&panel.values);
        for (i, v) in norm.iter().enumerate() {
            let (r, c) = (i / cols, i % cols);
            let _ = writeln!(
                svg,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                x0 + c * CELL,
                y0 + TITLE + r * CELL,
                shade(*v)
            );
        }
        if panel.path.len() > 1 {
            let points: Vec<String> = panel
                .path
                .iter()
                .map(|&node| {
                    let (x, y) = center(node);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r##"<polyline points="{}" fill="none" stroke="#ffffff" stroke-width="2" stroke-opacity="0.8"/>"##,
                points.join(" ")
            );
        }
        for (node, label) in &panel.marks {
            let (x, y) = center(*node);
            let _ = writeln!(
                svg,
                r##"<text x="{x}" y="{}" text-anchor="middle" fill="#ffffff" font-weight="bold">{}</text>"##,
                y + 4,
                escape(label)
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_svg(env: &EnvironmentGraph, panels: &[HeatmapPanel], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_svg(env, panels)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lattice, generate_watts_strogatz};

    fn panel(values: Vec<f64>) -> HeatmapPanel {
        HeatmapPanel {
            title: "t".into(),
            values,
            ..Default::default()
        }
    }

    #[test]
    fn zero_grid_is_uniform_minimum() {
        let g = generate_lattice(3, 3).unwrap();
        let svg = render_svg(&g, &[panel(vec![0.0; 9])]).unwrap();
        assert_eq!(svg.matches(r##"fill="#0d0887""##).count(), 9);
    }

    #[test]
    fn brightest_cell_is_the_max() {
        let g = generate_lattice(2, 2).unwrap();
        let svg = render_svg(&g, &[panel(vec![0.1, 0.2, 0.0, 0.4])]).unwrap();
        assert_eq!(svg.matches(r##"fill="#f0f921""##).count(), 1);
        assert!(svg.contains(r##"x="40" y="58" width="24" height="24" fill="#f0f921""##));
    }

    #[test]
    fn deterministic_bytes() {
        let g = generate_lattice(4, 4).unwrap();
        let p = HeatmapPanel {
            title: "a<b".into(),
            values: (0..16).map(|i| i as f64).collect(),
            path: vec![1, 2, 6],
            marks: vec![(1, "S".into())],
        };
        let a = render_svg(&g, &[p.clone(), p.clone()]).unwrap();
        assert_eq!(a, render_svg(&g, &[p.clone(), p]).unwrap());
        assert!(a.contains("a&lt;b"));
    }

    #[test]
    fn rejects_non_grid_and_bad_lengths() {
        let ws = generate_watts_strogatz(20, 4, 0.5, 1).unwrap();
        let err = render_svg(&ws, &[panel(vec![0.0; 20])]).unwrap_err();
        assert!(err.to_string().contains("CSV"));
        let g = generate_lattice(2, 2).unwrap();
        assert!(render_svg(&g, &[panel(vec![0.0; 3])]).is_err());
        assert!(render_svg(&g, &[]).is_err());
    }
}
