//! Zero-dependency SVG plots: log-log convergence chart of `ε_j` and the
//! GH/SWIF bounds versus `j`.

use std::fmt::Write as _;

use nulldist_core::lab::ConvergenceReport;

const W: f64 = 760.0;
const H: f64 = 520.0;
const MARGIN: f64 = 64.0;
const COLORS: [&str; 3] = ["#1f6fb2", "#c23b22", "#3a7d44"];

fn log_map(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    let (l, h) = (lo.ln(), hi.ln());
    out_lo + (v.max(1e-300).ln() - l) / (h - l) * (out_hi - out_lo)
}

pub fn convergence_plot(report: &ConvergenceReport) -> String {
    let series: [(&str, Vec<(f64, f64)>); 3] = [
        (
            "eps_j",
            report.rows.iter().map(|r| (r.j as f64, r.eps_j)).collect(),
        ),
        (
            "gh_bound",
            report
                .rows
                .iter()
                .map(|r| (r.j as f64, r.gh_bound))
                .collect(),
        ),
        (
            "swif_bound",
            report
                .rows
                .iter()
                .map(|r| (r.j as f64, r.swif_bound))
                .collect(),
        ),
    ];
    let xs: Vec<f64> = series[0].1.iter().map(|p| p.0).collect();
    let mut ys: Vec<f64> = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .filter(|v| *v > 0.0)
        .collect();
    if ys.is_empty() {
        ys.push(1.0);
    }
    let (x_lo, x_hi) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min).max(1.0),
        xs.iter().cloned().fold(1.0, f64::max) * 1.05,
    );
    let y_lo = ys.iter().cloned().fold(f64::INFINITY, f64::min) * 0.8;
    let y_hi = ys.iter().cloned().fold(0.0, f64::max) * 1.25;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" xmlns="http://www.w3.org/2000/svg">"#
    );
    let _ = write!(
        svg,
        r#"<rect width="{W}" height="{H}" fill="white"/><text x="{}" y="24" font-family="monospace" font-size="16">{} convergence (log-log)</text>"#,
        MARGIN,
        report.family
    );
    // axes
    let _ = write!(
        svg,
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN,
        r = W - 16.0
    );
    let _ = write!(
        svg,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12">j</text>"#,
        W - 24.0,
        H - MARGIN + 28.0
    );
    // j tick marks
    for &x in &xs {
        let px = log_map(x, x_lo, x_hi, MARGIN, W - 16.0);
        let _ = write!(
            svg,
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#999"/><text x="{px}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
            H - MARGIN,
            H - MARGIN + 5.0,
            H - MARGIN + 18.0,
            x as u64
        );
    }
    for (idx, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut d = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            if *y <= 0.0 {
                continue;
            }
            let px = log_map(*x, x_lo, x_hi, MARGIN, W - 16.0);
            let py = log_map(*y, y_lo, y_hi, H - MARGIN, MARGIN);
            let _ = write!(d, "{}{px} {py}", if k == 0 { "M" } else { " L" });
        }
        let _ = write!(
            svg,
            r#"<path d="{d}" stroke="{color}" stroke-width="2" fill="none"/>"#
        );
        let ly = 44.0 + 18.0 * idx as f64;
        let _ = write!(
            svg,
            r#"<rect x="{}" y="{}" width="12" height="12" fill="{color}"/><text x="{}" y="{}" font-family="monospace" font-size="12">{label}</text>"#,
            W - 180.0,
            ly - 10.0,
            W - 160.0,
            ly
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_convergence_plot(
    path: &std::path::Path,
    report: &ConvergenceReport,
) -> Result<(), crate::CliError> {
    std::fs::write(path, convergence_plot(report))
        .map_err(|e| crate::CliError::input(format!("cannot write {}: {e}", path.display())))
}
