//! Self-contained SVG plotting for spectrum curves: theory curves as
//! polylines (broken at empty levels), coarse-grained estimates as
//! markers. No external plotting toolchain.

use mfjump_core::SpectrumCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 44.0;

struct Frame {
    h_max: f64,
    d_max: f64,
}

impl Frame {
    fn x(&self, h: f64) -> f64 {
        MARGIN_L + (h / self.h_max) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, d: f64) -> f64 {
        HEIGHT - MARGIN_B - (d / self.d_max) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Figure with one theory curve and an optional coarse-grained overlay.
pub fn spectrum_svg(theory: &SpectrumCurve, coarse: Option<&SpectrumCurve>, title: &str) -> String {
    let mut h_max = 1.0_f64;
    for &(h, _) in theory.samples.iter().chain(coarse.iter().flat_map(|c| c.samples.iter())) {
        h_max = h_max.max(h);
    }
    let frame = Frame { h_max: h_max * 1.05, d_max: 1.1 };

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        MARGIN_L, title
    ));

    // axes
    let x0 = frame.x(0.0);
    let y0 = frame.y(0.0);
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(x0),
        fmt(y0),
        fmt(frame.x(frame.h_max)),
        fmt(y0)
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(x0),
        fmt(y0),
        fmt(x0),
        fmt(frame.y(frame.d_max))
    ));

    // ticks: h every 0.5, d every 0.25
    let mut h = 0.0;
    while h <= frame.h_max {
        let x = frame.x(h);
        s.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(y0),
            fmt(y0 + 4.0)
        ));
        s.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{h:.1}</text>\n",
            fmt(y0 + 18.0)
        ));
        h += 0.5;
    }
    let mut d = 0.0;
    while d <= 1.0 + 1e-9 {
        let y = frame.y(d);
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            fmt(x0 - 4.0),
            fmt(x0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{d:.2}</text>\n",
            fmt(x0 - 8.0),
            y + 4.0
        ));
        d += 0.25;
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">h</text>\n",
        fmt((x0 + frame.x(frame.h_max)) / 2.0),
        fmt(HEIGHT - 8.0)
    ));
    s.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">d</text>\n",
        fmt(frame.y(0.5))
    ));

    // theory polylines, one per defined run
    let mut run: Vec<String> = Vec::new();
    let flush = |run: &mut Vec<String>, out: &mut String| {
        if run.len() >= 2 {
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\"/>\n",
                run.join(" ")
            ));
        } else if run.len() == 1 {
            // isolated point: draw a dot so it is not lost
            let xy: Vec<&str> = run[0].split(',').collect();
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"1.5\" fill=\"#1f6feb\"/>\n",
                xy[0], xy[1]
            ));
        }
        run.clear();
    };
    for &(h, dval) in &theory.samples {
        match dval {
            Some(v) => run.push(format!("{},{}", fmt(frame.x(h)), fmt(frame.y(v)))),
            None => flush(&mut run, &mut s),
        }
    }
    flush(&mut run, &mut s);

    if let Some(curve) = coarse {
        for &(h, dval) in &curve.samples {
            if let Some(v) = dval {
                s.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"#d1242f\"/>\n",
                    fmt(frame.x(h)),
                    fmt(frame.y(v))
                ));
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
