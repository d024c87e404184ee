//! Plot-data emission: per-frame CSV of (t, m, envelope, lobeId) and a
//! small self-contained SVG of waveform, envelope, and shaded lobes.

use super::{Envelope, Polarity, SegmentedFrame, Waveform};

/// CSV rows `t,m,envelope,lobeId` for external plotting.
pub fn plot_csv(w: &Waveform, env: &Envelope, seg: &SegmentedFrame) -> String {
    let mut out = String::from("t,m,envelope,lobeId\n");
    for (i, (&t, &m)) in w.times().iter().zip(w.values()).enumerate() {
        let lobe = seg
            .lobes
            .iter()
            .find(|l| {
                l.support
                    .map(|(lo, hi)| {
                        t >= lo && (t < hi || (t == hi && l.id == seg.lobes.last().unwrap().id))
                    })
                    .unwrap_or(false)
            })
            .map(|l| l.id.as_str())
            .unwrap_or("");
        out.push_str(&format!("{t},{m},{},{lobe}\n", env.values()[i]));
    }
    out
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 40.0;

/// Renders waveform + envelope + shaded lobes as standalone SVG.
pub fn plot_svg(w: &Waveform, env: &Envelope, seg: &SegmentedFrame) -> String {
    let (t0, t1) = (w.t_start(), w.t_end());
    let ymax = env
        .values()
        .iter()
        .chain(w.values())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1e-12)
        * 1.05;
    let x = |t: f64| MARGIN + (t - t0) / (t1 - t0) * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT / 2.0 - v / ymax * (HEIGHT / 2.0 - MARGIN / 2.0);

    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    svg.push_str(&format!(
        r#"<text x="{MARGIN}" y="16" font-family="monospace" font-size="12">frame {}</text>"#,
        seg.frame_id
    ));
    for lobe in &seg.lobes {
        if let Some((lo, hi)) = lobe.support {
            let fill = match lobe.polarity {
                Polarity::Positive => "#cfe3f7",
                Polarity::Negative => "#f7d4d4",
            };
            svg.push_str(&format!(
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" opacity="0.6"/>"#,
                x(lo),
                MARGIN / 2.0,
                x(hi) - x(lo),
                HEIGHT - MARGIN,
            ));
            svg.push_str(&format!(
                r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
                (x(lo) + x(hi)) / 2.0,
                MARGIN / 2.0 + 12.0,
                lobe.id
            ));
        }
    }
    svg.push_str(&format!(
        r##"<line x1="{MARGIN}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#999" stroke-width="1"/>"##,
        y(0.0),
        WIDTH - MARGIN
    ));
    svg.push_str(&polyline(w.times(), w.values(), &x, &y, "#1f5fa8", 1.5));
    svg.push_str(&polyline(w.times(), env.values(), &x, &y, "#c03030", 1.0));
    let neg_env: Vec<f64> = env.values().iter().map(|v| -v).collect();
    svg.push_str(&polyline(w.times(), &neg_env, &x, &y, "#c03030", 1.0));
    svg.push_str("</svg>\n");
    svg
}

fn polyline(
    ts: &[f64],
    vs: &[f64],
    x: &impl Fn(f64) -> f64,
    y: &impl Fn(f64) -> f64,
    color: &str,
    width: f64,
) -> String {
    let pts: Vec<String> = ts
        .iter()
        .zip(vs)
        .map(|(&t, &v)| format!("{:.2},{:.2}", x(t), y(v)))
        .collect();
    format!(
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
        pts.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{hilbert_envelope, segment_lobes, EnvelopeMode, Integrand};
    use std::f64::consts::PI;

    #[test]
    fn plot_outputs_cover_every_sample() {
        let w = Waveform::from_fn("f", 0.001, 200, |t| (2.0 * PI * 5.0 * t).sin()).unwrap();
        let env = hilbert_envelope(&w, EnvelopeMode::Analytic);
        let seg = segment_lobes(&w, &env, Integrand::Envelope).unwrap();
        let csv = plot_csv(&w, &env, &seg);
        assert_eq!(csv.lines().count(), 201); // header + one row per sample
        assert!(csv.starts_with("t,m,envelope,lobeId\n"));
        let svg = plot_svg(&w, &env, &seg);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
    }
}
