//! Two-panel SVG: the domain plane on the left, the target plane on the right.
//!
//! Output depends only on the scene, so equal scenes give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::arith::to_f64;
use crate::fiber::{exceptional_set, CurveKind, Parity};
use crate::render::{Label, LabelGrid, Polyline, Window};

const PANEL: f64 = 500.0;
const MARGIN: f64 = 40.0;
const PREIMAGE_COLORS: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#e377c2", "#17becf", "#bcbd22",
];

#[derive(Debug, Clone)]
pub struct Scene {
    pub domain: Window,
    pub target: Window,
    /// C goes to the target panel, everything else to the domain panel.
    pub polylines: Vec<Polyline>,
    /// Odd-side cells of the domain, row-major, `cells`² entries.
    pub parity: Option<(u32, Vec<bool>)>,
    /// Classified target nodes.
    pub grid: Option<LabelGrid>,
}

struct Frame {
    left: f64,
    top: f64,
    bounds: (f64, f64, f64, f64),
}

impl Frame {
    fn new(index: usize, w: &Window) -> Self {
        Frame {
            left: MARGIN + index as f64 * (PANEL + MARGIN),
            top: MARGIN,
            bounds: w.bounds_f64(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.bounds;
        let px = self.left + (x - x0) / (x1 - x0) * PANEL;
        let py = self.top + (y1 - y) / (y1 - y0) * PANEL;
        // far-away points are clipped anyway; keep the text short
        (px.clamp(-1e6, 1e6), py.clamp(-1e6, 1e6))
    }
}

fn style(label: &Label) -> String {
    match label {
        Label::C => "stroke=\"#000000\" stroke-width=\"1.5\"".into(),
        Label::Preimage { index, .. } => {
            format!(
                "stroke=\"{}\" stroke-width=\"1.5\"",
                PREIMAGE_COLORS[index % PREIMAGE_COLORS.len()]
            )
        }
        Label::A1 => "stroke=\"#9467bd\" stroke-width=\"1\" stroke-dasharray=\"4 3\"".into(),
        Label::A2 => "stroke=\"#8c564b\" stroke-width=\"1\" stroke-dasharray=\"1 2\"".into(),
    }
}

fn grid_fill(kind: CurveKind, parity: Option<Parity>) -> &'static str {
    match (kind, parity) {
        (CurveKind::OffCurve, Some(Parity::Odd)) => "#c6dbef",
        (CurveKind::OffCurve, _) => "#f7f7f7",
        (CurveKind::OnCurveRegular, _) => "#000000",
        (CurveKind::Exceptional, _) => "#ff7f0e",
    }
}

fn path_data(frame: &Frame, pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (k, &(x, y)) in pts
        .iter()
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .enumerate()
    {
        let (px, py) = frame.map(x, y);
        let _ = write!(d, "{}{:.2} {:.2}", if k == 0 { "M" } else { " L" }, px, py);
    }
    d
}

fn write_clip(out: &mut String, id: &str, frame: &Frame) {
    let _ = writeln!(
        out,
        "<clipPath id=\"clip-{id}\"><rect x=\"{:.2}\" y=\"{:.2}\" width=\"{PANEL}\" height=\"{PANEL}\"/></clipPath>",
        frame.left, frame.top
    );
}

pub fn render_svg(scene: &Scene) -> String {
    let dom = Frame::new(0, &scene.domain);
    let tgt = Frame::new(1, &scene.target);
    let width = 2.0 * PANEL + 3.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<defs>");
    write_clip(&mut out, "domain", &dom);
    write_clip(&mut out, "target", &tgt);
    let _ = writeln!(out, "</defs>");
    for (id, frame, title) in [
        ("domain", &dom, "domain (x, y)"),
        ("target", &tgt, "target (a, b)"),
    ] {
        let _ = writeln!(out, "<g id=\"frame-{id}\">");
        let (x0, x1, y0, y1) = frame.bounds;
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"none\" stroke=\"#444444\"/>",
            frame.left, frame.top
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" font-family=\"sans-serif\">{title} [{x0}, {x1}] x [{y0}, {y1}]</text>",
            frame.left,
            frame.top - 12.0
        );
        let _ = writeln!(out, "</g>");
    }

    if let Some((cells, odd)) = &scene.parity {
        let _ = writeln!(
            out,
            "<g id=\"parity\" clip-path=\"url(#clip-domain)\" fill=\"#c6dbef\" stroke=\"none\">"
        );
        let side = PANEL / f64::from(*cells);
        // one rect per horizontal run of odd cells
        for j in 0..*cells {
            let row = &odd[(j * cells) as usize..((j + 1) * cells) as usize];
            let mut i = 0;
            while i < row.len() {
                if !row[i] {
                    i += 1;
                    continue;
                }
                let run = row[i..].iter().take_while(|&&b| b).count();
                let x = dom.left + i as f64 * side;
                let y = dom.top + PANEL - f64::from(j + 1) * side;
                let w = run as f64 * side;
                let _ = writeln!(
                    out,
                    "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{side:.2}\"/>"
                );
                i += run;
            }
        }
        let _ = writeln!(out, "</g>");
    }

    if let Some(grid) = &scene.grid {
        let n = grid.window.resolution;
        let side = PANEL / f64::from(n - 1);
        let _ = writeln!(
            out,
            "<g id=\"classification\" clip-path=\"url(#clip-target)\" stroke=\"none\">"
        );
        for j in 0..n {
            for i in 0..n {
                let r = grid.get(i, j);
                let (a, b) = grid.window.node(i, j);
                let (px, py) = tgt.map(to_f64(&a), to_f64(&b));
                let _ = writeln!(
                    out,
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{side:.2}\" height=\"{side:.2}\" fill=\"{}\"/>",
                    px - side / 2.0,
                    py - side / 2.0,
                    grid_fill(r.kind, r.parity)
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    // one layer per label, in first-appearance order
    let mut layers: Vec<&Label> = Vec::new();
    for p in &scene.polylines {
        if !layers.contains(&&p.label) {
            layers.push(&p.label);
        }
    }
    for label in layers {
        let (frame, clip) = if *label == Label::C {
            (&tgt, "target")
        } else {
            (&dom, "domain")
        };
        let _ = writeln!(
            out,
            "<g id=\"layer-{}\" clip-path=\"url(#clip-{clip})\" fill=\"none\" {}>",
            label.name(),
            style(label)
        );
        for p in scene.polylines.iter().filter(|p| p.label == *label) {
            let _ = writeln!(out, "<path d=\"{}\"/>", path_data(frame, &p.points));
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, "<g id=\"K\" fill=\"#ff7f0e\" stroke=\"#000000\">");
    for (a, b) in exceptional_set() {
        let (px, py) = tgt.map(to_f64(&a), to_f64(&b));
        let _ = writeln!(out, "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\"/>");
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

pub fn emit_svg(scene: &Scene, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg(scene))
}
