//! Minimal static SVG rendering for the reward envelope: a polyline over
//! frame index with the labeled-qualified stretches shaded behind it. Pure
//! string assembly — same inputs, same bytes.

use std::fmt::Write;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 16.0;
const MARGIN_BOTTOM: f64 = 44.0;

/// Renders the envelope chart. `values` holds one envelope value per frame
/// and `labels` the 0/1 ground truth used for shading; both share a length.
/// `amplitude` fixes the top of the value axis so charts of the same
/// configuration are comparable.
pub fn envelope_chart(labels: &[u8], values: &[f64], amplitude: f64) -> String {
    assert_eq!(labels.len(), values.len(), "labels and values must align");
    assert!(!values.is_empty(), "cannot chart an empty track");
    let n = values.len();

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let pad = 0.08 * (amplitude + 1.0);
    let (y_lo, y_hi) = (-1.0 - pad, amplitude + pad);

    let x = |i: usize| -> f64 {
        if n == 1 {
            MARGIN_LEFT + plot_w / 2.0
        } else {
            MARGIN_LEFT + plot_w * i as f64 / (n - 1) as f64
        }
    };
    let y = |v: f64| -> f64 { MARGIN_TOP + plot_h * (y_hi - v) / (y_hi - y_lo) };
    let half_step = if n == 1 { plot_w / 2.0 } else { plot_w / (n - 1) as f64 / 2.0 };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    // Shade each maximal run of qualified frames, half a frame-step wide on
    // both sides so a lone frame still shows as a band.
    let mut i = 0;
    while i < n {
        if labels[i] == 1 {
            let start = i;
            while i + 1 < n && labels[i + 1] == 1 {
                i += 1;
            }
            let x0 = (x(start) - half_step).max(MARGIN_LEFT);
            let x1 = (x(i) + half_step).min(MARGIN_LEFT + plot_w);
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
                 fill=\"#bfdbfe\" opacity=\"0.6\"/>",
                x0,
                MARGIN_TOP,
                x1 - x0,
                plot_h
            );
        }
        i += 1;
    }

    // Reference lines at the two distinguished values of the envelope.
    for v in [0.0, -1.0] {
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"#9ca3af\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>",
            MARGIN_LEFT,
            y(v),
            MARGIN_LEFT + plot_w,
            y(v)
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_LEFT,
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    );

    // Value ticks at floor, zero, and plateau.
    for v in [-1.0, 0.0, amplitude] {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{v}</text>",
            MARGIN_LEFT - 6.0,
            y(v) + 4.0
        );
    }
    // Frame ticks: first, last, and up to three evenly spaced between.
    let tick_count = 5.min(n);
    for k in 0..tick_count {
        let idx = if tick_count == 1 { 0 } else { k * (n - 1) / (tick_count - 1) };
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{idx}</text>",
            x(idx),
            MARGIN_TOP + plot_h + 16.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">frame</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    );

    let points: String = values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{:.2},{:.2}", x(i), y(v)))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(
        svg,
        "<polyline points=\"{points}\" fill=\"none\" stroke=\"#1d4ed8\" stroke-width=\"1.5\"/>"
    );
    svg.push_str("</svg>\n");
    svg
}
