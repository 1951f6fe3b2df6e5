//! Minimal SVG emission for traced ray polylines.

use expfan::rays::RaySample;

const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders one polyline per labelled sample group into a standalone SVG
/// document. Coordinates follow the complex plane (imaginary axis up).
pub fn render(groups: &[(String, Vec<RaySample>)], width: u32, height: u32) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (_, samples) in groups {
        for s in samples {
            min_x = min_x.min(s.re);
            max_x = max_x.max(s.re);
            min_y = min_y.min(s.im);
            max_y = max_y.max(s.im);
        }
    }
    if !min_x.is_finite() {
        (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad_x = 0.05 * (max_x - min_x).max(1e-9);
    let pad_y = 0.05 * (max_y - min_y).max(1e-9);
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;

    let sx = width as f64 / (max_x - min_x);
    let sy = height as f64 / (max_y - min_y);
    let to_px = |re: f64, im: f64| -> (f64, f64) {
        ((re - min_x) * sx, height as f64 - (im - min_y) * sy)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    ));
    for (i, (label, samples)) in groups.iter().enumerate() {
        if samples.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = samples
            .iter()
            .map(|s| {
                let (x, y) = to_px(s.re, s.im);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        let (lx, ly) = to_px(samples[samples.len() - 1].re, samples[samples.len() - 1].im);
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            lx + 4.0,
            ly,
            xml_escape(label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
