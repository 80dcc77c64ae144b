//! Minimal static SVG for regret-vs-log-time curves.

use std::fmt::Write;

use crate::sim::RunSummary;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub fn regret_plot(title: &str, summaries: &[RunSummary]) -> String {
    let rounds = summaries.iter().flat_map(|s| s.snapshot_rounds.iter().copied());
    let (x_min, x_max) = rounds.fold((u64::MAX, 1), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let (lx_min, lx_max) = ((x_min.max(1) as f64).log10(), (x_max.max(2) as f64).log10());
    let y_max = summaries.iter().flat_map(|s| s.per_snapshot_mean.iter().copied()).fold(0.0f64, f64::max).max(1e-9);
    let span = (lx_max - lx_min).max(1e-9);
    let px = |r: u64| PAD + (WIDTH - 2.0 * PAD) * ((r.max(1) as f64).log10() - lx_min) / span;
    let py = |v: f64| HEIGHT - PAD - (HEIGHT - 2.0 * PAD) * v / y_max;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        svg,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = HEIGHT - PAD,
        r = WIDTH - PAD
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">round (log scale)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y_max:.1}</text>"#, PAD - 4.0, PAD + 4.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">0</text>"#, PAD - 4.0, HEIGHT - PAD + 4.0);
    let mut decade = 10f64.powf(lx_min.ceil());
    while decade <= x_max as f64 {
        let x = px(decade as u64);
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{}" text-anchor="middle">{decade}</text>"#, HEIGHT - PAD + 16.0);
        decade *= 10.0;
    }
    for (k, s) in summaries.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = s
            .snapshot_rounds
            .iter()
            .zip(&s.per_snapshot_mean)
            .map(|(&r, &v)| format!("{:.2},{:.2}", px(r), py(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let name = s.config_echo.policy.kind.policy_name();
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            PAD + 8.0,
            PAD + 16.0 * (k as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
