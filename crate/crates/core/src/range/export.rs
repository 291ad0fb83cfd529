//! CSV and SVG renderings of regions.

use std::fmt::Write;

use super::classify::{TupleClassification, TupleVerdict};
use super::geometry::ConvexRegion2D;

/// `x` with nine significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let s = format!("{:.8e}", x);
    let v: f64 = s.parse().expect("formatted float");
    let mut out = v.to_string();
    if out.contains('e') {
        return out;
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// `x1,x2` header, one vertex per line, counterclockwise.
pub fn region_csv(r: &ConvexRegion2D) -> String {
    let mut s = String::from("x1,x2\n");
    for v in &r.vertices {
        let _ = writeln!(s, "{},{}", format_sig(v[0]), format_sig(v[1]));
    }
    s
}

fn coords(r: &ConvexRegion2D) -> String {
    r.vertices
        .iter()
        .map(|v| format!("{:.4},{:.4}", v[0], 1.0 - v[1]))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Standalone SVG over `[0,1]²` (y axis pointing up): full range outlined,
/// separable range filled, classified tuples as markers.
pub fn region_svg(
    jnr: Option<&ConvexRegion2D>,
    jsnr: Option<&ConvexRegion2D>,
    tuples: &[TupleClassification],
) -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.0800 -0.0800 1.1600 1.1600\" width=\"600\" height=\"600\">\n");
    s.push_str("  <rect x=\"0.0000\" y=\"0.0000\" width=\"1.0000\" height=\"1.0000\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.0030\"/>\n");
    for t in [0.25, 0.5, 0.75] {
        let _ = writeln!(
            s,
            "  <line x1=\"{t:.4}\" y1=\"0.0000\" x2=\"{t:.4}\" y2=\"1.0000\" stroke=\"#eeeeee\" stroke-width=\"0.0020\"/>\n  <line x1=\"0.0000\" y1=\"{t:.4}\" x2=\"1.0000\" y2=\"{t:.4}\" stroke=\"#eeeeee\" stroke-width=\"0.0020\"/>"
        );
    }
    if let Some(r) = jsnr {
        let _ = writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"#7fb3d5\" fill-opacity=\"0.6\" stroke=\"#1f618d\" stroke-width=\"0.0040\"/>",
            coords(r)
        );
    }
    if let Some(r) = jnr {
        let _ = writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.0050\"/>",
            coords(r)
        );
    }
    for t in tuples {
        let color = match t.verdict {
            TupleVerdict::Detected => "#27ae60",
            TupleVerdict::Compatible => "#2c3e50",
            TupleVerdict::Infeasible => "#8e44ad",
        };
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"0.0120\" fill=\"{color}\"/>",
            t.tuple[0],
            1.0 - t.tuple[1]
        );
    }
    s.push_str("  <text x=\"0.0000\" y=\"1.0600\" font-size=\"0.0400\">x1</text>\n");
    s.push_str("  <text x=\"-0.0700\" y=\"0.0300\" font-size=\"0.0400\">x2</text>\n");
    s.push_str("</svg>\n");
    s
}
