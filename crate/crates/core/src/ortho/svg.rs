//! SVG output for grid drawings.

use super::realize::GridDrawing;
use std::fmt::Write;

pub const UNIT: i64 = 32;

/// Renders the drawing with y pointing up; `labels` are drawn next to vertices.
pub fn to_svg(dr: &GridDrawing, labels: &[String]) -> String {
    let max_x = dr.pos.iter().chain(dr.paths.iter().flatten()).map(|p| p.0).max().unwrap_or(0);
    let max_y = dr.pos.iter().chain(dr.paths.iter().flatten()).map(|p| p.1).max().unwrap_or(0);
    let pad = UNIT;
    let w = max_x * UNIT + 2 * pad;
    let h = max_y * UNIT + 2 * pad;
    let px = |p: (i64, i64)| (p.0 * UNIT + pad, (max_y - p.1) * UNIT + pad);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    for path in &dr.paths {
        let pts: Vec<String> = path.iter().map(|&p| {
            let (x, y) = px(p);
            format!("{x},{y}")
        }).collect();
        let _ = writeln!(s, r#"  <polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, pts.join(" "));
    }
    for (v, &p) in dr.pos.iter().enumerate() {
        let (x, y) = px(p);
        let _ = writeln!(s, r#"  <circle cx="{x}" cy="{y}" r="5" fill="white" stroke="black" stroke-width="2"/>"#);
        if let Some(l) = labels.get(v) {
            let _ = writeln!(s, r#"  <text x="{}" y="{}" font-size="12">{}</text>"#, x + 7, y - 7, escape(l));
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
