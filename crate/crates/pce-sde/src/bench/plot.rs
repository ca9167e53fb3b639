//! Static SVG rendering of report CSVs.
//!
//! One plot per CSV: `param` on x, `value` on y, one polyline per
//! (method, metric) series. Error-style metrics (`eps_*`, `err_*`, `re_*`,
//! `se_*`, `q_se`) are drawn on a log10 y axis — convergence then reads as a
//! straight line — and the x axis switches to log10 when the parameter spans
//! two or more decades (sample-size and β grids). Rendering is fully
//! deterministic: fixed geometry, fixed palette, series in first-appearance
//! order.

use super::csv::CSV_HEADER;
use super::BenchError;
use std::fmt::Write as _;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 120.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Metrics plotted on a log y axis when every value is positive.
fn is_error_metric(metric: &str) -> bool {
    metric.starts_with("eps_")
        || metric.starts_with("err_")
        || metric.starts_with("re_")
        || metric.starts_with("se_")
        || metric == "q_se"
}

/// Marker/summary rows that carry no curve.
fn is_annotation_metric(metric: &str) -> bool {
    matches!(metric, "slope" | "failed" | "reflections")
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn parse_rows(csv: &str) -> Result<Vec<Series>, BenchError> {
    let mut lines = csv.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(BenchError::Csv {
                line: 1,
                reason: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(BenchError::Csv {
                line: 1,
                reason: "empty file".into(),
            })
        }
    }
    let mut series: Vec<Series> = Vec::new();
    for (index, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(BenchError::Csv {
                line: index + 1,
                reason: format!("expected 9 columns, got {}", fields.len()),
            });
        }
        let parse = |slot: usize, name: &str| -> Result<f64, BenchError> {
            fields[slot].parse::<f64>().map_err(|e| BenchError::Csv {
                line: index + 1,
                reason: format!("bad {name} {:?}: {e}", fields[slot]),
            })
        };
        let method = fields[3];
        let param = parse(4, "param")?;
        let metric = fields[5];
        let value = parse(6, "value")?;
        if is_annotation_metric(metric) || !value.is_finite() || !param.is_finite() {
            continue;
        }
        let label = format!("{method} {metric}");
        match series.iter_mut().find(|s| s.label == label) {
            Some(slot) => slot.points.push((param, value)),
            None => series.push(Series {
                label,
                points: vec![(param, value)],
            }),
        }
    }
    Ok(series)
}

/// Map a data value to a screen coordinate, optionally through log10.
struct Axis {
    log: bool,
    min: f64,
    max: f64,
    screen_start: f64,
    screen_end: f64,
}

impl Axis {
    fn transform(&self, value: f64) -> f64 {
        let v = if self.log { value.log10() } else { value };
        let lo = if self.log { self.min.log10() } else { self.min };
        let hi = if self.log { self.max.log10() } else { self.max };
        let fraction = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        self.screen_start + fraction * (self.screen_end - self.screen_start)
    }

    /// Tick positions in data space.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi).map(|d| 10f64.powi(d)).collect()
        } else {
            let span = self.max - self.min;
            if span <= 0.0 {
                return vec![self.min];
            }
            (0..=4)
                .map(|i| self.min + span * f64::from(i) / 4.0)
                .collect()
        }
    }
}

fn tick_label(value: f64, log: bool) -> String {
    if log {
        format!("{value:.0e}")
    } else {
        format!("{value:.4}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

/// Render the report CSV to a standalone SVG document.
pub fn render_svg(csv: &str, title: &str) -> Result<String, BenchError> {
    let series = parse_rows(csv)?;
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(BenchError::Csv {
            line: 1,
            reason: "no plottable rows".into(),
        });
    }

    let all_points = series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all_points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }

    // Log y when every series is an error metric with positive values.
    let log_y = series
        .iter()
        .all(|s| is_error_metric(s.label.split(' ').nth(1).unwrap_or("")))
        && y_min > 0.0;
    // Log x for wide positive parameter ranges (sample sizes, β grids).
    let log_x = x_min > 0.0 && x_max / x_min >= 100.0;
    if !log_y && y_min > 0.0 {
        y_min = 0.0; // anchor linear error-free axes at zero
    }

    let x_axis = Axis {
        log: log_x,
        min: x_min,
        max: x_max,
        screen_start: MARGIN_LEFT,
        screen_end: WIDTH - MARGIN_RIGHT,
    };
    let y_axis = Axis {
        log: log_y,
        min: y_min,
        max: y_max,
        screen_start: HEIGHT - MARGIN_BOTTOM,
        screen_end: MARGIN_TOP,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"13\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">{}</text>",
        WIDTH / 2.0,
        xml_escape(title)
    );

    // Grid and tick labels.
    for tick in x_axis.ticks() {
        let x = x_axis.transform(tick);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
            HEIGHT - MARGIN_BOTTOM,
            MARGIN_TOP
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            HEIGHT - MARGIN_BOTTOM + 22.0,
            tick_label(tick, log_x)
        );
    }
    for tick in y_axis.ticks() {
        let y = y_axis.transform(tick);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>",
            MARGIN_LEFT,
            WIDTH - MARGIN_RIGHT
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{y:.2}\" text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>",
            MARGIN_LEFT - 8.0,
            tick_label(tick, log_y)
        );
    }
    // Axes frame.
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{:.2}\" height=\"{:.2}\" \
         fill=\"none\" stroke=\"black\"/>",
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"middle\">param{}</text>",
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - MARGIN_BOTTOM + 44.0,
        if log_x { " (log)" } else { "" }
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{:.2}\" transform=\"rotate(-90 20 {:.2})\" text-anchor=\"middle\">value{}</text>",
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        if log_y { " (log)" } else { "" }
    );

    // Series polylines, markers, legend.
    for (rank, s) in series.iter().enumerate() {
        let color = PALETTE[rank % PALETTE.len()];
        let mut sorted = s.points.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> = sorted
            .iter()
            .filter(|&&(_, y)| !log_y || y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", x_axis.transform(x), y_axis.transform(y)))
            .collect();
        if path.len() >= 2 {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                path.join(" ")
            );
        }
        for coordinate in &path {
            let (x, y) = coordinate.split_once(',').expect("formatted pair");
            let _ = writeln!(
                svg,
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>"
            );
        }
        let legend_x = MARGIN_LEFT + 170.0 * (rank % 5) as f64;
        let legend_y = HEIGHT - 60.0 + 20.0 * (rank / 5) as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{legend_x:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>",
            legend_y - 10.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{legend_y:.2}\">{}</text>",
            legend_x + 18.0,
            xml_escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
