//! Minimal SVG line charts with a logarithmic y axis.

use std::fmt::Write;

use crate::harness::{Aggregate, BenchmarkOutput};

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Line chart of positive y values on a log scale; nonpositive points are
/// dropped.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.1 > 0.0)
    };
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y.log10()) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for e in y0 as i32..=y1 as i32 {
        let y = sy(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let mut xs: Vec<f64> = pts().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for x in xs {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#,
            sx(x),
            TOP + ph + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.1 > 0.0)
            .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                path.join(" ")
            );
        }
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            LEFT + pw + 10.0,
            LEFT + pw + 30.0,
            LEFT + pw + 36.0,
            ly + 4.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One chart per process (and per dimension when several sample counts
/// are swept): the metric against `N`, or against `P` when `N` is fixed.
pub fn benchmark_charts(
    out: &BenchmarkOutput,
    metric: &str,
    pick: fn(&Aggregate) -> Option<(f64, f64)>,
) -> Vec<(String, String)> {
    let aggs = out.aggregate();
    let mut labels: Vec<&str> = Vec::new();
    for g in &out.grid {
        if !labels.contains(&g.label.as_str()) {
            labels.push(&g.label);
        }
    }
    let mut ns: Vec<usize> = out.grid.iter().map(|g| g.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut ps: Vec<usize> = out.grid.iter().map(|g| g.p).collect();
    ps.sort_unstable();
    ps.dedup();
    let by_n = ns.len() > 1;

    let mut charts = Vec::new();
    for (pi, label) in labels.iter().enumerate() {
        let groups: Vec<Option<usize>> = if by_n {
            ps.iter().map(|&p| Some(p)).collect()
        } else {
            vec![None]
        };
        for group in groups {
            let series: Vec<Series> = out
                .estimators
                .iter()
                .enumerate()
                .map(|(ei, e)| Series {
                    name: e.label.clone(),
                    points: aggs
                        .iter()
                        .filter(|a| a.estimator == ei)
                        .filter_map(|a| {
                            let g = &out.grid[a.grid];
                            if g.label != *label || group.is_some_and(|p| g.p != p) {
                                return None;
                            }
                            let x = if by_n { g.n } else { g.p } as f64;
                            pick(a).map(|(m, _)| (x, m))
                        })
                        .collect(),
                })
                .filter(|s| !s.points.is_empty())
                .collect();
            if series.is_empty() {
                continue;
            }
            let (file, title) = match group {
                Some(p) => (
                    format!("{metric}_process{pi}_P{p}.svg"),
                    format!("{label}, P = {p}"),
                ),
                None => (format!("{metric}_process{pi}.svg"), label.to_string()),
            };
            let x_label = if by_n { "N" } else { "P" };
            charts.push((file, line_chart(&title, x_label, metric, &series)));
        }
    }
    charts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series() {
        let s = line_chart(
            "t<1>",
            "N",
            "nmse",
            &[Series {
                name: "a".into(),
                points: vec![(1.0, 0.5), (2.0, 0.05), (3.0, 0.0)],
            }],
        );
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t&lt;1&gt;"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
