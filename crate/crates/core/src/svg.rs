//! Minimal self-contained SVG stem chart of `|c_χ|` against frequency.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

/// Renders `(frequency, magnitude)` stems. Output is deterministic: fixed
/// precision, input order preserved.
pub fn stem_chart(stems: &[(f64, f64)], title: &str) -> String {
    let (lo, hi) = stems
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (x, _)| (a.min(*x), b.max(*x)));
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else if lo.is_finite() {
        (lo - 1.0, lo + 1.0)
    } else {
        (-1.0, 1.0)
    };
    let top = stems.iter().fold(0.0f64, |m, (_, y)| m.max(*y));
    let top = if top > 0.0 { top } else { 1.0 };
    let px = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - y / top * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let base = py(0.0);
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base:.2}" stroke="black"/>"#
    );
    for (x, label) in [(lo, lo), (hi, hi)] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label:.4}</text>"#,
            px(x),
            base + 16.0
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{MARGIN}" text-anchor="end">{top:.4e}</text>"#, MARGIN - 4.0);
    let _ = writeln!(s, r#"<g stroke="steelblue" fill="steelblue">"#);
    for (x, y) in stems {
        let (cx, cy) = (px(*x), py(*y));
        let _ = writeln!(s, r#"<line x1="{cx:.2}" y1="{base:.2}" x2="{cx:.2}" y2="{cy:.2}"/>"#);
        let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="2"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
