//! SVG rendering of fibre dimensions over the (P1, P2) plane.

use std::fmt::Write;
use std::path::Path;

use num_traits::ToPrimitive;
use tautring::fiber::{FiberDimensionRecord, CSV_HEADER};

use crate::error::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const P1_RANGE: (f64, f64) = (-4.0, 4.0);
const P2_RANGE: (f64, f64) = (-3.0, 30.0);

fn to_f64(r: &tautring::Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses fibre records, skipping blank lines and a leading header.
pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<FiberDimensionRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || (i == 0 && line.trim() == CSV_HEADER) {
            continue;
        }
        let record = FiberDimensionRecord::parse_csv_row(line).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

fn sx(p1: f64) -> f64 {
    MARGIN + (p1 - P1_RANGE.0) / (P1_RANGE.1 - P1_RANGE.0) * (WIDTH - 2.0 * MARGIN)
}

fn sy(p2: f64) -> f64 {
    HEIGHT - MARGIN - (p2 - P2_RANGE.0) / (P2_RANGE.1 - P2_RANGE.0) * (HEIGHT - 2.0 * MARGIN)
}

/// Polyline pieces of `p2 = f(p1)` inside the viewport.
fn curve(f: impl Fn(f64) -> f64) -> Vec<String> {
    let mut pieces = Vec::new();
    let mut current = String::new();
    for i in 0..=320 {
        let p1 = P1_RANGE.0 + (P1_RANGE.1 - P1_RANGE.0) * i as f64 / 320.0;
        let p2 = f(p1);
        if (P2_RANGE.0..=P2_RANGE.1).contains(&p2) {
            let _ = write!(current, "{}{:.2},{:.2}", if current.is_empty() { "" } else { " " }, sx(p1), sy(p2));
        } else if !current.is_empty() {
            pieces.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
}

fn marker(out: &mut String, r: &FiberDimensionRecord) {
    let (x, y) = (sx(to_f64(&r.p1)), sy(to_f64(&r.p2)));
    let title = format!("<title>p1={} p2={} dim={}</title>", r.p1, r.p2, r.dimension);
    let _ = match r.dimension {
        3 => writeln!(
            out,
            r#"  <rect class="dim3" x="{:.2}" y="{:.2}" width="10" height="10">{title}</rect>"#,
            x - 5.0,
            y - 5.0
        ),
        1 => writeln!(out, r#"  <circle class="dim1" cx="{x:.2}" cy="{y:.2}" r="5">{title}</circle>"#),
        _ => writeln!(
            out,
            r#"  <polygon class="other" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}">{title}</polygon>"#,
            x,
            y - 6.0,
            x + 6.0,
            y,
            x,
            y + 6.0,
            x - 6.0,
            y
        ),
    };
}

/// The figure: axes, the curves `Â₂ = 0`, `L₂ = 1`, `L₂ = 0`, and one marker
/// per record (square for dimension 3, circle for 1, diamond otherwise).
pub fn render_svg(records: &[FiberDimensionRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    out.push_str(
        "  <style>polyline{fill:none;stroke-width:1.5} .ahat{stroke:#1f77b4} .l2one{stroke:#d62728} \
         .l2zero{stroke:#2ca02c;stroke-dasharray:4 3} .axis{stroke:#000} rect,circle,polygon{fill:#fff;stroke:#000} \
         text{font:12px sans-serif}</style>\n",
    );
    let _ = writeln!(
        out,
        r#"  <line class="axis" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        sx(P1_RANGE.0),
        sy(0.0),
        sx(P1_RANGE.1),
        sy(0.0)
    );
    let _ = writeln!(
        out,
        r#"  <line class="axis" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        sx(0.0),
        sy(P2_RANGE.0),
        sx(0.0),
        sy(P2_RANGE.1)
    );
    let _ = writeln!(out, r#"  <text x="{:.2}" y="{:.2}">P1</text>"#, WIDTH - MARGIN + 6.0, sy(0.0) + 4.0);
    let _ = writeln!(out, r#"  <text x="{:.2}" y="{:.2}">P2</text>"#, sx(0.0) - 8.0, MARGIN - 8.0);
    type Curve = (&'static str, &'static str, fn(f64) -> f64);
    let curves: [Curve; 3] = [
        ("ahat", "Â2 = 0", |p| 7.0 * p * p / 4.0),
        ("l2one", "L2 = 1", |p| (45.0 + p * p) / 7.0),
        ("l2zero", "L2 = 0", |p| p * p / 7.0),
    ];
    for (class, label, f) in curves {
        let _ = writeln!(out, r#"  <g class="{class}"><title>{label}</title>"#);
        for piece in curve(f) {
            let _ = writeln!(out, r#"    <polyline class="{class}" points="{piece}"/>"#);
        }
        out.push_str("  </g>\n");
    }
    for r in records {
        marker(&mut out, r);
    }
    out.push_str("</svg>\n");
    out
}
