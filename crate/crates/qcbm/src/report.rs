//! CSV tables and SVG charts.

use std::fmt::Write as _;
use std::path::Path;

use qcbm_core::analysis::ShotCounts;
use qcbm_core::train::StageReport;

use crate::{Error, Result};

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(Error::io(path))?;
    Ok(csv::Writer::from_writer(file))
}

/// One row per Adam step: `iteration, stage, kl, tvd_full`. The full
/// resolution TVD is only known at the end of a stage, so it fills the
/// stage's last row.
pub fn write_loss_csv(path: &Path, reports: &[StageReport]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["iteration", "stage", "kl", "tvd_full"])?;
    let mut iteration = 0usize;
    for r in reports {
        for (i, loss) in r.trace.iter().enumerate() {
            let tvd = if i + 1 == r.trace.len() { r.tvd_full.to_string() } else { String::new() };
            w.write_record([iteration.to_string(), r.stage.to_string(), loss.to_string(), tvd])?;
            iteration += 1;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_stage_csv(path: &Path, reports: &[StageReport]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["stage", "active_qubits", "iterations", "kl_stage", "tvd_full", "wall_time_s"])?;
    for r in reports {
        w.write_record([
            r.stage.to_string(),
            r.active_qubits.to_string(),
            r.trace.len().to_string(),
            r.kl_stage.to_string(),
            r.tvd_full.to_string(),
            r.wall_time_seconds.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `index, bitstring, count` for every observed outcome.
pub fn write_counts_csv(path: &Path, counts: &ShotCounts) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["index", "bitstring", "count"])?;
    let n = counts.num_qubits();
    for (&x, &c) in counts.counts() {
        w.write_record([x.to_string(), format!("{x:0n$b}"), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a header and rows of already formatted cells.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

const PALETTE: [&str; 4] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759"];

/// Grouped bar chart of values in `[0, 1]`, one group per label and one bar
/// per series.
pub fn bar_chart_svg(title: &str, labels: &[String], series: &[(&str, &[f64])]) -> String {
    let (width, height, margin) = (80.0 + 70.0 * labels.len() as f64, 320.0, 50.0);
    let plot_h = height - 2.0 * margin;
    let group_w = (width - 2.0 * margin) / labels.len().max(1) as f64;
    let bar_w = 0.8 * group_w / series.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, width / 2.0, escape(title));
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = margin + plot_h * (1.0 - tick);
        let _ = writeln!(svg, r##"<line x1="{margin}" x2="{}" y1="{y}" y2="{y}" stroke="#ddd"/>"##, width - margin);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{tick}</text>"#, margin - 4.0, y + 4.0);
    }
    for (g, label) in labels.iter().enumerate() {
        let x0 = margin + group_w * g as f64 + 0.1 * group_w;
        for (s, (_, values)) in series.iter().enumerate() {
            let v = values.get(g).copied().unwrap_or(0.0).clamp(0.0, 1.0);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + bar_w * s as f64,
                margin + plot_h * (1.0 - v),
                bar_w,
                plot_h * v,
                PALETTE[s % PALETTE.len()]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            x0 + 0.4 * group_w,
            height - margin + 16.0,
            escape(label)
        );
    }
    for (s, (name, _)) in series.iter().enumerate() {
        let x = margin + 110.0 * s as f64;
        let y = height - 12.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{}" width="10" height="10" fill="{}"/>"#,
            y - 9.0,
            PALETTE[s % PALETTE.len()]
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{y}">{}</text>"#, x + 14.0, escape(name));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_has_one_bar_per_value() {
        let labels = vec!["v1".to_string(), "h1".to_string(), "v2".to_string()];
        let svg = bar_chart_svg("P vs P*", &labels, &[("P", &[0.5, 0.5, 0.5]), ("P*", &[0.9, 0.1, 0.4])]);
        // Three value bars per series plus one legend swatch each.
        assert_eq!(svg.matches("<rect").count(), 8);
        assert!(svg.contains("P vs P*"));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
