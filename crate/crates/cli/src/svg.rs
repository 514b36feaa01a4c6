//! Plain SVG rendering of region boundary polylines.
//!
//! Plot coordinates: t runs left to right and log₁₀(a) bottom to top inside
//! a `WIDTH × HEIGHT` viewBox with a `MARGIN` frame. Each region is one
//! closed `<path>` tracing `t_lo` upward and `t_hi` back down.

use std::fmt::Write as _;

use thinfd::domains::{BoundaryRow, RegionTag};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

fn color(tag: RegionTag) -> &'static str {
    match tag {
        RegionTag::ThinF1 | RegionTag::ClassicalF1 => "#4e79a7",
        RegionTag::ThinF2 | RegionTag::ClassicalF2 => "#f28e2b",
        RegionTag::ThinF3 => "#59a14f",
        RegionTag::ThinF4 => "#e15759",
    }
}

struct Frame {
    t: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        MARGIN + (t - self.t.0) / (self.t.1 - self.t.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, a: f64) -> f64 {
        HEIGHT - MARGIN - (a.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

pub fn render(rows: &[BoundaryRow<f64>], eps: f64, theta: f64) -> String {
    let fold = |f: fn(f64, f64) -> f64, init, g: &dyn Fn(&BoundaryRow<f64>) -> f64| rows.iter().map(g).fold(init, f);
    let t_min = fold(f64::min, f64::INFINITY, &|r| r.t_lo).min(-0.5);
    let t_max = fold(f64::max, f64::NEG_INFINITY, &|r| r.t_hi).max(0.5);
    let pad = 0.05 * (t_max - t_min);
    let y_lo = fold(f64::min, f64::INFINITY, &|r| r.a).log10();
    let y_hi = fold(f64::max, f64::NEG_INFINITY, &|r| r.a).log10();
    let frame = Frame { t: (t_min - pad, t_max + pad), y: (y_lo, y_hi.max(y_lo + 1e-9)) };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">thin fundamental set, ε = {eps:.6}, θ = {theta:.6}</text>"#,
        WIDTH / 2.0
    );
    axes(&mut s, &frame);

    let mut tags: Vec<RegionTag> = rows.iter().map(|r| r.region).collect();
    tags.dedup();
    for (i, tag) in tags.iter().enumerate() {
        let pts: Vec<&BoundaryRow<f64>> = rows.iter().filter(|r| r.region == *tag).collect();
        let mut d = String::new();
        for (j, r) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.3},{:.3} ", if j == 0 { "M" } else { "L" }, frame.x(r.t_lo), frame.y(r.a));
        }
        for r in pts.iter().rev() {
            let _ = write!(d, "L{:.3},{:.3} ", frame.x(r.t_hi), frame.y(r.a));
        }
        d.push('Z');
        let c = color(*tag);
        let _ =
            writeln!(s, r#"<path id="{tag}" d="{d}" fill="{c}" fill-opacity="0.25" stroke="{c}" stroke-width="1.5"/>"#);
        let ly = MARGIN + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="12" height="12" fill="{c}" fill-opacity="0.5"/><text x="{}" y="{}">{tag}</text>"#,
            WIDTH - MARGIN + 8.0,
            ly - 10.0,
            WIDTH - MARGIN + 24.0,
            ly
        );
    }
    cusps(&mut s, rows, &frame);
    s.push_str("</svg>\n");
    s
}

fn axes(s: &mut String, f: &Frame) {
    let (x0, x1) = (MARGIN, WIDTH - MARGIN);
    let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<g stroke="black" fill="none"><path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}"/></g>"#);
    let mut t = (f.t.0 * 4.0).ceil() / 4.0;
    while t <= f.t.1 {
        let x = f.x(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{y0}" x2="{x:.3}" y2="{}" stroke="black"/><text x="{x:.3}" y="{}" text-anchor="middle">{t}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
        t += 0.25;
    }
    let mut k = (f.y.0 * 4.0).ceil() / 4.0;
    while k <= f.y.1 + 1e-12 {
        let y = f.y(10f64.powf(k));
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.3}" x2="{x0}" y2="{y:.3}" stroke="black"/><text x="{}" y="{:.3}" text-anchor="end">{k}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
        k += 0.25;
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, (x0 + x1) / 2.0, HEIGHT - 25.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">log10(a)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn cusps(s: &mut String, rows: &[BoundaryRow<f64>], f: &Frame) {
    let mut mark = |r: &BoundaryRow<f64>, dy: f64, label: &str| {
        let (x, y) = (f.x(0.5 * (r.t_lo + r.t_hi)), f.y(r.a));
        let _ = writeln!(
            s,
            r#"<g class="cusp"><circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/><text x="{:.3}" y="{:.3}" text-anchor="start">{label}</text></g>"#,
            x + 8.0,
            y + dy
        );
    };
    if let Some(top) = rows.iter().filter(|r| r.region == RegionTag::ThinF4).max_by(|a, b| a.a.total_cmp(&b.a)) {
        mark(top, 14.0, "cusp a → ∞: |t| ≤ 1 − √(1 − a⁻⁴) ≈ a⁻⁴/2");
    }
    if let Some(bottom) = rows.iter().filter(|r| r.region == RegionTag::ThinF1).min_by(|a, b| a.a.total_cmp(&b.a)) {
        mark(bottom, -8.0, "cusp a → 0 (cut off)");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use thinfd::domains::{region_boundary_polyline, Epsilon};

    #[test]
    fn one_path_per_region_and_cusps() {
        let e = Epsilon::new(std::f64::consts::PI / 12.0).unwrap();
        let rows = region_boundary_polyline(&e, 0.1, 16).unwrap();
        let svg = render(&rows, e.value(), 0.1);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<path id=").count(), 4);
        assert_eq!(svg.matches(r#"class="cusp""#).count(), 2);
        assert!(!svg.contains("NaN"));
    }
}
