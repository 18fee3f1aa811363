//! Line charts of estimate against truncation size.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Ceiling {
    pub label: String,
    pub value: f64,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Sizes go on a log₂ axis.
pub fn convergence_plot(title: &str, series: &[Series], ceilings: &[Ceiling]) -> String {
    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0.max(1.0).log2())).collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(ceilings.iter().map(|c| c.value))
        .filter(|v| v.is_finite())
        .collect();
    let (mut x0, mut x1) = bounds(&xs);
    let (mut y0, mut y1) = bounds(&ys);
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let pad = ((y1 - y0) * 0.08).max(1e-3);
    y0 -= pad;
    y1 += pad;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let (ax, ay, bx) = (LEFT, H - BOTTOM, W - RIGHT);
    let _ = writeln!(
        s,
        r#"<path d="M{ax:.2} {:.2} L{ax:.2} {ay:.2} L{bx:.2} {ay:.2}" stroke="black" fill="none"/>"#,
        TOP
    );
    let (k0, k1) = (x0.ceil() as i64, x1.floor() as i64);
    for k in k0..=k1 {
        let x = sx(k as f64);
        let _ = writeln!(s, r#"<path d="M{x:.2} {ay:.2} L{x:.2} {:.2}" stroke="black"/>"#, ay + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, ay + 18.0, 1u64 << k.clamp(0, 62));
    }
    for i in 0..=4 {
        let v = y0 + (y1 - y0) * i as f64 / 4.0;
        let y = sy(v);
        let _ = writeln!(s, r#"<path d="M{:.2} {y:.2} L{ax:.2} {y:.2}" stroke="black"/>"#, ax - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.4}</text>"#, ax - 7.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">truncation size</text>"#, (ax + bx) / 2.0, H - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">estimate</text>"#,
        (TOP + ay) / 2.0,
        (TOP + ay) / 2.0
    );

    for c in ceilings {
        let y = sy(c.value);
        let _ = writeln!(s, r#"<path d="M{ax:.2} {y:.2} L{bx:.2} {y:.2}" stroke="gray" stroke-dasharray="6 4" fill="none"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="gray">{}</text>"#, bx + 6.0, y + 4.0, escape(&c.label));
    }
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (j, (x, y)) in ser.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if j == 0 { "M" } else { "L" }, sx(x.max(1.0).log2()), sy(*y));
        }
        let _ = writeln!(s, r#"<path d="{}" stroke="{color}" stroke-width="2" fill="none"/>"#, d.trim_end());
        for (x, y) in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(x.max(1.0).log2()), sy(*y));
        }
        let ly = TOP + 14.0 + 16.0 * (i + ceilings.len()) as f64 + 20.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}" fill="{color}">{}</text>"#, bx + 6.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 1.0);
    }
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_series_and_labeled_ceiling() {
        let s = convergence_plot(
            "hdis p=4",
            &[Series {
                label: "hdis".into(),
                points: vec![(512.0, 1.6), (1024.0, 1.7)],
            }],
            &[Ceiling {
                label: "cot(π/2p*) = 2.414214".into(),
                value: 2.414214,
            }],
        );
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("cot(π/2p*) = 2.414214"));
        assert!(s.contains(">512<") && s.contains(">1024<"));
        assert_eq!(s.matches("<circle").count(), 2);
    }
}
