//! Minimal self-contained SVG plots: scatter, heatmap and line.

use std::fmt::Write as _;

use crate::CliError;

/// Heatmap colours saturate at `10^HEATMAP_LOG10_CAP`; larger resolvent norms
/// (including infinite ones at exact eigenvalues) share the top colour.
pub const HEATMAP_LOG10_CAP: f64 = 5.0;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Scatter,
    Heatmap,
    Line,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Heatmap only: colour by `log10(value)` clipped to `[0, HEATMAP_LOG10_CAP]`.
    pub log_color: bool,
    pub marker_radius: f64,
    pub title: String,
}

impl PlotSpec {
    pub fn new(kind: PlotKind, x_range: (f64, f64), y_range: (f64, f64), title: &str) -> Self {
        Self { kind, x_range, y_range, log_color: kind == PlotKind::Heatmap, marker_radius: 2.0, title: title.into() }
    }

    /// Ranges covering `points`, padded by 5 % (or 1 when degenerate).
    pub fn fitted(kind: PlotKind, points: &[(f64, f64)], title: &str) -> Self {
        let span = |v: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            if !lo.is_finite() {
                return (-1.0, 1.0);
            }
            let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
            (lo - pad, hi + pad)
        };
        let x = span(&mut points.iter().map(|p| p.0));
        let y = span(&mut points.iter().map(|p| p.1));
        Self::new(kind, x, y, title)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlotData {
    Points(Vec<(f64, f64)>),
    /// Row-major, row 0 at the bottom of the plot (smallest y).
    Grid { nx: usize, ny: usize, values: Vec<f64> },
    Line(Vec<(f64, f64)>),
}

impl PlotData {
    fn is_empty(&self) -> bool {
        match self {
            PlotData::Points(p) | PlotData::Line(p) => p.is_empty(),
            PlotData::Grid { nx, ny, values } => *nx == 0 || *ny == 0 || values.len() != nx * ny,
        }
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn ramp(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = if t.is_nan() { 1.0 } else { t.clamp(0.0, 1.0) };
    let s = t * (STOPS.len() - 1) as f64;
    let i = (s.floor() as usize).min(STOPS.len() - 2);
    let f = s - i as f64;
    let mix = |a: f64, b: f64| (a + (b - a) * f).round() as u8;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(spec: &PlotSpec, data: &PlotData) -> Result<String, CliError> {
    if data.is_empty() {
        return Err(CliError::Plot("nothing to plot".into()));
    }
    let finite = [spec.x_range.0, spec.x_range.1, spec.y_range.0, spec.y_range.1].iter().all(|v| v.is_finite());
    if !finite || spec.x_range.0 >= spec.x_range.1 || spec.y_range.0 >= spec.y_range.1 {
        return Err(CliError::Plot(format!("bad plot ranges {:?} {:?}", spec.x_range, spec.y_range)));
    }
    let fr = Frame { x: spec.x_range, y: spec.y_range };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&spec.title));

    match data {
        PlotData::Grid { nx, ny, values } => {
            let (w, h) = ((WIDTH - 2.0 * MARGIN) / *nx as f64, (HEIGHT - 2.0 * MARGIN) / *ny as f64);
            let (lo, hi) = values.iter().filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            for j in 0..*ny {
                for k in 0..*nx {
                    let v = values[j * nx + k];
                    let t = if spec.log_color {
                        if v.is_infinite() { 1.0 } else { v.max(1.0).log10() / HEATMAP_LOG10_CAP }
                    } else if hi > lo {
                        (v - lo) / (hi - lo)
                    } else {
                        0.0
                    };
                    let _ = writeln!(
                        s,
                        r#"<rect class="cell" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                        MARGIN + k as f64 * w,
                        HEIGHT - MARGIN - (j + 1) as f64 * h,
                        w,
                        h,
                        ramp(t)
                    );
                }
            }
        }
        PlotData::Points(points) => {
            for &(x, y) in points {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="{}" fill="black"/>"#,
                    fr.px(x),
                    fr.py(y),
                    spec.marker_radius
                );
            }
        }
        PlotData::Line(points) => {
            let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.3},{:.3}", fr.px(x), fr.py(y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="black" stroke-width="1" points="{}"/>"#, coords.join(" "));
        }
    }

    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (x, anchor) in [(spec.x_range.0, "start"), (spec.x_range.1, "end")] {
        let _ = writeln!(s, r#"<text x="{:.3}" y="{}" text-anchor="{anchor}" font-size="11">{x}</text>"#, fr.px(x), HEIGHT - MARGIN + 16.0);
    }
    for y in [spec.y_range.0, spec.y_range.1] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.3}" text-anchor="end" font-size="11">{y}</text>"#, MARGIN - 4.0, fr.py(y));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
