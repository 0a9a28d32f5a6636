//! Self-contained SVG line charts of one metric.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::record::{read_records, MetricRecord};
use super::RunnerError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One polyline per run id, in first-seen order.
fn series<'a>(records: &'a [MetricRecord], metric: &str) -> Vec<(&'a str, Vec<(f64, f64)>)> {
    let mut order: Vec<&str> = Vec::new();
    let mut points: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.metric == metric && r.value.is_finite()) {
        let entry = points.entry(r.run_id.as_str()).or_insert_with(|| {
            order.push(r.run_id.as_str());
            Vec::new()
        });
        entry.push((r.step as f64, r.value));
    }
    order
        .into_iter()
        .map(|id| {
            let mut p = points.remove(id).unwrap_or_default();
            p.sort_by(|a, b| a.0.total_cmp(&b.0));
            (id, p)
        })
        .collect()
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Renders `metric` from `records`; errors list the metrics that are present.
pub fn render_svg(records: &[MetricRecord], metric: &str) -> Result<String, RunnerError> {
    let lines = series(records, metric);
    if lines.iter().all(|(_, p)| p.is_empty()) {
        let available: std::collections::BTreeSet<&str> = records.iter().map(|r| r.metric.as_str()).collect();
        let listed = if available.is_empty() {
            "none (the file has no records)".to_string()
        } else {
            available.into_iter().collect::<Vec<_>>().join(", ")
        };
        return Err(RunnerError::Plot(format!("metric `{metric}` has no data; available metrics: {listed}")));
    }
    let all = lines.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = span(x0, x1);
    let (y0, y1) = span(y0, y1);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT} {TOP} V{} H{}" fill="none" stroke="black"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            trim(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            trim(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">step</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(metric)
    );
    for (k, (id, pts)) in lines.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            coords.join(" "),
            escape(id)
        );
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(id)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn trim(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Reads a metrics CSV and writes the chart of `metric` to `out`.
pub fn plot_csv(input: &Path, metric: &str, out: &Path) -> Result<(), RunnerError> {
    let file = std::fs::File::open(input).map_err(RunnerError::io(input))?;
    let records = read_records(std::io::BufReader::new(file))?;
    let svg = render_svg(&records, metric)?;
    std::fs::write(out, svg).map_err(RunnerError::io(out))
}
