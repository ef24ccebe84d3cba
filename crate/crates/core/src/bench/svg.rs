//! Scatter plot of combined speedup per addressing mode, one panel per
//! (distribution, scheme) pair.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::sweep::{ReportRow, SpeedupReport};
use crate::error::ReportError;
use crate::hardware::{DistributionMode, EncodingScheme};

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_B: f64 = 70.0;
const MARGIN_T: f64 = 30.0;
const LEGEND_W: f64 = 160.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

type PanelKey = (DistributionMode, EncodingScheme);

fn panel(
    svg: &mut String,
    key: PanelKey,
    rows: &[&ReportRow],
    averages: &BTreeMap<usize, f64>,
    colors: &BTreeMap<&str, &str>,
    origin: (f64, f64),
) {
    let (ox, oy) = origin;
    let mut ms: Vec<(usize, String)> = rows.iter().map(|r| (r.m, r.label())).collect();
    ms.sort();
    ms.dedup();
    let y_max = rows
        .iter()
        .map(|r| r.combined_speedup)
        .fold(1.0_f64, f64::max)
        .ceil();
    let plot_w = PANEL_W - MARGIN_L - 10.0;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x_of = |m: usize| {
        let i = ms.iter().position(|(v, _)| *v == m).unwrap_or(0);
        ox + MARGIN_L + plot_w * (i as f64 + 0.5) / ms.len() as f64
    };
    let y_of = |v: f64| oy + MARGIN_T + plot_h * (1.0 - v / y_max);

    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{} / {}</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + 18.0,
        escape(key.1.name()),
        escape(key.0.name())
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#444"/>"##,
        ox + MARGIN_L,
        oy + MARGIN_T,
        plot_w,
        plot_h
    );
    for tick in 0..=4 {
        let v = y_max * f64::from(tick) / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{:.2}</text>"#,
            ox + MARGIN_L - 4.0,
            y_of(v) + 3.0,
            v
        );
    }
    for (m, label) in &ms {
        let x = x_of(*m);
        let y = oy + PANEL_H - MARGIN_B + 12.0;
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-size="9" text-anchor="end" transform="rotate(-45 {x:.1} {y:.1})">{}</text>"#,
            escape(label)
        );
    }
    for r in rows {
        let color = colors.get(r.benchmark.as_str()).copied().unwrap_or("#777");
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}" fill-opacity="0.8"/>"#,
            x_of(r.m),
            y_of(r.combined_speedup)
        );
    }
    for (&m, &avg) in averages {
        let _ = writeln!(
            svg,
            r##"<rect x="{:.1}" y="{:.1}" width="7" height="7" fill="#000"/>"##,
            x_of(m) - 3.5,
            y_of(avg) - 3.5
        );
    }
}

/// Renders the report as a standalone SVG document.
pub fn render_svg(report: &SpeedupReport) -> Result<String, ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut panels: BTreeMap<PanelKey, Vec<&ReportRow>> = BTreeMap::new();
    for r in &report.rows {
        panels.entry((r.dist, r.scheme)).or_default().push(r);
    }
    let mut averages: BTreeMap<PanelKey, BTreeMap<usize, f64>> = BTreeMap::new();
    for a in &report.averages {
        averages
            .entry((a.dist, a.scheme))
            .or_default()
            .insert(a.m, a.combined_speedup);
    }
    let mut names: Vec<&str> = report.rows.iter().map(|r| r.benchmark.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let colors: BTreeMap<&str, &str> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (*n, PALETTE[i % PALETTE.len()]))
        .collect();

    let cols = 2usize.min(panels.len());
    let rows_n = panels.len().div_ceil(cols);
    let width = PANEL_W * cols as f64 + LEGEND_W;
    let height = (PANEL_H * rows_n as f64).max(40.0 + 16.0 * (names.len() + 1) as f64);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let empty = BTreeMap::new();
    for (i, (key, rows)) in panels.iter().enumerate() {
        let origin = (PANEL_W * (i % cols) as f64, PANEL_H * (i / cols) as f64);
        panel(
            &mut svg,
            *key,
            rows,
            averages.get(key).unwrap_or(&empty),
            &colors,
            origin,
        );
    }
    let lx = PANEL_W * cols as f64 + 10.0;
    let _ = writeln!(
        svg,
        r#"<text x="{lx:.1}" y="30" font-size="12">combined speedup</text>"#
    );
    for (i, name) in names.iter().enumerate() {
        let y = 50.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            lx + 4.0,
            y - 4.0,
            colors[name],
            lx + 14.0,
            y,
            escape(name)
        );
    }
    let y = 50.0 + 16.0 * names.len() as f64;
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="8" height="8" fill="#000"/><text x="{:.1}" y="{y:.1}" font-size="11">average</text>"##,
        lx,
        y - 8.0,
        lx + 14.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
