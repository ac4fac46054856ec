//! Static SVG charts of outage probability versus average SNR.
//!
//! One panel per `(K, m1)` pair, log-scale y axis, one curve per `(W, N)`:
//! closed form as a line, Monte Carlo (when present) as markers. Values below
//! the axis floor, including zero, are drawn on the floor and counted in the
//! panel annotation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::csv_out::format_sig;
use super::sweep::ResultRow;
use crate::error::{Error, Result};

const PANEL_W: f64 = 560.0;
const PANEL_H: f64 = 400.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const COLUMNS: usize = 3;

/// Highest allowed axis floor; the axis always covers [1e-6, 1].
const FLOOR_MAX_EXP: i32 = -6;
/// Lowest axis floor, so that vanishing outage does not flatten the chart.
const FLOOR_MIN_EXP: i32 = -12;

const PALETTE: [&str; 8] = [
    "#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSummary {
    pub k: usize,
    pub m1: f64,
    pub curves: usize,
    pub marker_curves: usize,
    /// Points (line or marker) drawn on the floor.
    pub floored: usize,
    pub floor_exp: i32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotSummary {
    pub charts: Vec<ChartSummary>,
    pub warnings: Vec<String>,
}

struct Curve<'a> {
    w: f64,
    n: usize,
    points: Vec<&'a ResultRow>,
}

struct Panel<'a> {
    k: usize,
    m1: f64,
    curves: Vec<Curve<'a>>,
}

fn group(rows: &[ResultRow]) -> Vec<Panel<'_>> {
    let mut panels: Vec<Panel> = Vec::new();
    for r in rows {
        let pi = match panels.iter().position(|p| p.k == r.k && p.m1 == r.m1) {
            Some(i) => i,
            None => {
                panels.push(Panel {
                    k: r.k,
                    m1: r.m1,
                    curves: Vec::new(),
                });
                panels.len() - 1
            }
        };
        let curves = &mut panels[pi].curves;
        match curves.iter_mut().find(|c| c.w == r.w && c.n == r.n) {
            Some(c) => c.points.push(r),
            None => curves.push(Curve {
                w: r.w,
                n: r.n,
                points: vec![r],
            }),
        }
    }
    for p in &mut panels {
        for c in &mut p.curves {
            c.points.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        }
    }
    panels
}

fn label(c: &Curve) -> String {
    if c.n == 1 {
        "SISO (N=1)".into()
    } else {
        format!("W={}, N={}", format_sig(c.w), c.n)
    }
}

/// Renders the chart set to SVG text.
pub fn render_svg(rows: &[ResultRow]) -> (String, PlotSummary) {
    let mut summary = PlotSummary::default();
    let mut panels = group(rows);
    for p in &mut panels {
        p.curves.retain(|c| {
            let keep = c.points.len() >= 2;
            if !keep {
                summary.warnings.push(format!(
                    "skipping {} at K={}, m1={}: fewer than two SNR points",
                    label(c),
                    p.k,
                    format_sig(p.m1)
                ));
            }
            keep
        });
    }
    panels.retain(|p| !p.curves.is_empty());

    let cols = panels.len().clamp(1, COLUMNS);
    let rows_n = panels.len().div_ceil(COLUMNS).max(1);
    let width = cols as f64 * PANEL_W;
    let height = rows_n as f64 * PANEL_H;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        let ox = (i % COLUMNS) as f64 * PANEL_W;
        let oy = (i / COLUMNS) as f64 * PANEL_H;
        summary.charts.push(draw_panel(&mut svg, p, ox, oy));
    }
    svg.push_str("</svg>\n");
    (svg, summary)
}

fn draw_panel(svg: &mut String, p: &Panel, ox: f64, oy: f64) -> ChartSummary {
    let (x_min, x_max) = p
        .curves
        .iter()
        .flat_map(|c| c.points.iter().map(|r| r.snr_db))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    let min_positive = p
        .curves
        .iter()
        .flat_map(|c| c.points.iter())
        .flat_map(|r| [Some(r.op_closed), r.op_mc])
        .flatten()
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let floor_exp = if min_positive.is_finite() {
        (min_positive.log10().floor() as i32).clamp(FLOOR_MIN_EXP, FLOOR_MAX_EXP)
    } else {
        FLOOR_MAX_EXP
    };
    let floor = 10f64.powi(floor_exp);

    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x0 = ox + MARGIN_L;
    let y0 = oy + MARGIN_T;
    let sx = |x: f64| x0 + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |v: f64| {
        let l = v.max(floor).min(1.0).log10();
        y0 + (l / floor_exp as f64) * plot_h
    };

    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">K = {}, m1 = {}</text>"#,
        x0 + plot_w / 2.0,
        oy + 22.0,
        p.k,
        format_sig(p.m1)
    );
    // decade grid and labels
    for e in floor_exp..=0 {
        let y = sy(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            x0 + plot_w,
            x0 - 6.0,
            y + 4.0
        );
    }
    for x in x_ticks(x_min, x_max) {
        let px = sx(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="#eeeeee"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            y0 + plot_h,
            y0 + plot_h + 16.0,
            format_sig(x)
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">average SNR (dB)</text>"#,
        x0 + plot_w / 2.0,
        y0 + plot_h + 38.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">outage probability</text>"#,
        ox + 18.0,
        y0 + plot_h / 2.0,
        ox + 18.0,
        y0 + plot_h / 2.0
    );

    let mut floored = 0;
    let mut marker_curves = 0;
    for (ci, c) in p.curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let dash = if c.w == p.curves[0].w || c.n == 1 {
            ""
        } else {
            r#" stroke-dasharray="6 3""#
        };
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|r| {
                if r.op_closed < floor {
                    floored += 1;
                }
                format!("{:.2},{:.2}", sx(r.snr_db), sy(r.op_closed))
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#,
            pts.join(" ")
        );
        let mut has_markers = false;
        for r in &c.points {
            if let Some(mc) = r.op_mc {
                has_markers = true;
                if mc < floor {
                    floored += 1;
                }
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}"/>"#,
                    sx(r.snr_db),
                    sy(mc)
                );
            }
        }
        marker_curves += has_markers as usize;

        let ly = y0 + 10.0 + ci as f64 * 16.0;
        let lx = x0 + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.6"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            label(c)
        );
    }
    if marker_curves > 0 {
        let ly = y0 + 10.0 + p.curves.len() as f64 * 16.0 + 6.0;
        let lx = x0 + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.1}" cy="{ly:.1}" r="3" fill="none" stroke="black"/><text x="{:.1}" y="{:.1}">Monte Carlo</text>"#,
            lx + 11.0,
            lx + 28.0,
            ly + 4.0
        );
    }
    if floored > 0 {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="gray">{floored} point(s) below 1e{floor_exp} drawn at the axis floor</text>"#,
            x0 + 4.0,
            y0 + plot_h - 6.0
        );
    }

    ChartSummary {
        k: p.k,
        m1: p.m1,
        curves: p.curves.len(),
        marker_curves,
        floored,
        floor_exp,
    }
}

fn x_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let step = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
        .into_iter()
        .find(|s| span / s <= 10.0)
        .unwrap_or(100.0);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|i| i as f64 * step).collect()
}

/// Writes the chart set to `path`.
pub fn emit_plot(rows: &[ResultRow], path: &Path) -> Result<PlotSummary> {
    let (svg, summary) = render_svg(rows);
    if summary.charts.is_empty() {
        return Err(Error::Config(
            "nothing to plot: every curve has fewer than two SNR points".into(),
        ));
    }
    fs::write(path, svg)?;
    Ok(summary)
}
