//! Plotting: samples of C, traced curves in the domain plane, classified
//! target grids, and CSV/SVG writers.
//!
//! Everything up to the final coordinates is decided exactly; floats only
//! appear in [`Polyline`] points and in the SVG text.

pub mod contour;
pub mod exact_sign;
pub mod svg;

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;

use crate::arith::{int, to_exact_string, to_f64, Rational};
use crate::fiber::{classify, phi, ClassifyResult, CurveKind};
use crate::system::PinchukSystem;
use contour::{seed_edges, trace_all, Edge, Lattice, SignField};
use exact_sign::{g_factor_signs, CurveSigns, PreimageSigns};

pub use svg::{emit_svg, render_svg, Scene};

/// Fine lattice cells per axis aimed for when tracing, independent of the
/// requested resolution.
pub const TRACE_CELLS: u32 = 8192;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("empty window: need x_min < x_max and y_min < y_max")]
    Empty,
    #[error("resolution must be at least 2, got {0}")]
    Resolution(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub x_min: Rational,
    pub y_min: Rational,
    pub x_max: Rational,
    pub y_max: Rational,
    /// Grid nodes per axis.
    pub resolution: u32,
}

impl Window {
    pub fn new(
        x_min: Rational,
        y_min: Rational,
        x_max: Rational,
        y_max: Rational,
        resolution: u32,
    ) -> Result<Self, WindowError> {
        if x_min >= x_max || y_min >= y_max {
            return Err(WindowError::Empty);
        }
        if resolution < 2 {
            return Err(WindowError::Resolution(resolution));
        }
        Ok(Window {
            x_min,
            y_min,
            x_max,
            y_max,
            resolution,
        })
    }

    /// [−10, 10]².
    pub fn default_domain(resolution: u32) -> Self {
        Window::new(int(-10), int(-10), int(10), int(10), resolution).unwrap()
    }

    /// a ∈ [−2, 10], b over the range of C for s ∈ [−3, 1] with a margin.
    pub fn default_target(resolution: u32) -> Self {
        let (b_lo, b_hi) = default_target_b_range();
        Window::new(int(-2), b_lo, int(10), b_hi, resolution).unwrap()
    }

    pub fn bounds_f64(&self) -> (f64, f64, f64, f64) {
        (
            to_f64(&self.x_min),
            to_f64(&self.x_max),
            to_f64(&self.y_min),
            to_f64(&self.y_max),
        )
    }

    /// Exact node (i, j), 0 ≤ i, j < resolution.
    pub fn node(&self, i: u32, j: u32) -> (Rational, Rational) {
        let steps = int(i64::from(self.resolution) - 1);
        let x = &self.x_min + (&self.x_max - &self.x_min) * int(i.into()) / &steps;
        let y = &self.y_min + (&self.y_max - &self.y_min) * int(j.into()) / &steps;
        (x, y)
    }
}

fn default_target_b_range() -> (Rational, Rational) {
    // C over s ∈ [−3, 1]; both ends sit at a = 3
    let samples = curve_samples(&int(-3), &int(1), 81);
    let mut lo = int(0);
    let mut hi = int(0);
    for (_, _, b) in samples {
        lo = lo.min(b.clone());
        hi = hi.max(b);
    }
    let margin = (&hi - &lo) / int(20);
    ((&lo - &margin).floor(), (&hi + &margin).ceil())
}

/// Part of C a preimage component is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arc {
    /// s < −1
    Left,
    /// −1 < s < 0
    Middle,
    /// s > 0
    Right,
}

impl Arc {
    pub fn label(self) -> &'static str {
        match self {
            Arc::Left => "s<-1",
            Arc::Middle => "-1<s<0",
            Arc::Right => "s>0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    C,
    Preimage { index: usize, arc: Option<Arc> },
    A1,
    A2,
}

impl Label {
    /// Short identifier used for SVG layer ids and CSV label columns.
    pub fn name(&self) -> String {
        match self {
            Label::C => "C".into(),
            Label::Preimage { index, .. } => format!("preimage-{index}"),
            Label::A1 => "A1".into(),
            Label::A2 => "A2".into(),
        }
    }

    pub fn is_preimage(&self) -> bool {
        matches!(self, Label::Preimage { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub label: Label,
}

/// n exact samples (s, phi1(s), phi2(s)) at uniform steps from s0 to s1.
pub fn curve_samples(
    s0: &Rational,
    s1: &Rational,
    n: usize,
) -> Vec<(Rational, Rational, Rational)> {
    assert!(s0 < s1 && n >= 2, "need s0 < s1 and n ≥ 2");
    let steps = int(n as i64 - 1);
    (0..n)
        .map(|k| {
            let s = s0 + (s1 - s0) * int(k as i64) / &steps;
            let (a, b) = phi(&s);
            (s, a, b)
        })
        .collect()
}

pub fn sample_curve(s0: &Rational, s1: &Rational, n: usize) -> Polyline {
    Polyline {
        points: curve_samples(s0, s1, n)
            .iter()
            .map(|(_, a, b)| (to_f64(a), to_f64(b)))
            .collect(),
        label: Label::C,
    }
}

/// One traced curve with the lattice edges it crosses.
#[derive(Debug, Clone)]
pub struct TracedCurve {
    pub label: Label,
    pub edges: Vec<Edge>,
    pub closed: bool,
    pub polyline: Polyline,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub lattice: Lattice,
    pub curves: Vec<TracedCurve>,
    /// Exact sign evaluations performed.
    pub evaluations: usize,
}

impl Trace {
    /// Exact endpoints of a lattice edge; the traced curve passes between them.
    pub fn edge_bracket(&self, e: Edge) -> ((Rational, Rational), (Rational, Rational)) {
        let ((i0, j0), (i1, j1)) = e.endpoints();
        (self.lattice.point(i0, j0), self.lattice.point(i1, j1))
    }
}

/// Trace lattice size for a window: a multiple of resolution − 1 with at
/// least [`TRACE_CELLS`] cells, so coarse grid lines are lattice lines.
pub fn trace_lattice(window: &Window) -> (Lattice, u32) {
    let coarse = window.resolution - 1;
    let stride = TRACE_CELLS.div_ceil(coarse).max(1);
    (
        Lattice {
            window: window.clone(),
            n: coarse * stride,
        },
        stride,
    )
}

/// Edge midpoints in plane coordinates, thinned so consecutive points are
/// at least one coarse pixel apart.
fn edges_to_points(lattice: &Lattice, edges: &[Edge], closed: bool) -> Vec<(f64, f64)> {
    let (x0, x1, y0, y1) = lattice.window.bounds_f64();
    let res = f64::from(lattice.window.resolution - 1);
    let (px, py) = ((x1 - x0) / res, (y1 - y0) / res);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut all: Vec<(f64, f64)> = edges
        .iter()
        .map(|e| {
            let (mi, mj) = e.midpoint();
            lattice.point_f64(mi, mj)
        })
        .collect();
    if closed {
        all.push(all[0]);
    }
    let last = all.len() - 1;
    for (k, p) in all.iter().enumerate() {
        let keep = match pts.last() {
            None => true,
            Some(q) => {
                k == last || ((p.0 - q.0) / px).abs() >= 1.0 || ((p.1 - q.1) / py).abs() >= 1.0
            }
        };
        if keep {
            pts.push(*p);
        }
    }
    if pts.len() < 2 {
        pts.push(all[last]);
    }
    pts
}

fn majority<K: Ord + Copy>(votes: &BTreeMap<K, usize>) -> Option<K> {
    votes.iter().max_by_key(|(_, n)| **n).map(|(k, _)| *k)
}

/// Arc whose parameter root changes sign across an edge of R∘F.
fn arc_vote(s0: &CurveSigns, s1: &CurveSigns) -> Option<Arc> {
    if (s0.minus < 0) != (s1.minus < 0) && s0.c >= 0 && s1.c >= 0 {
        Some(Arc::Left)
    } else if (s0.plus < 0) != (s1.plus < 0) && s0.c >= 0 && s1.c >= 0 {
        Some(if s0.a > 0 || s1.a > 0 {
            Arc::Right
        } else {
            Arc::Middle
        })
    } else {
        None
    }
}

/// F⁻¹(C) traced as the sign change set of R∘F, where R vanishes on C
/// (and at one isolated extra point, where it does not change sign).
/// Components are indexed in order of discovery.
pub fn trace_preimage(window: &Window) -> Trace {
    let (lattice, stride) = trace_lattice(window);
    let signs = PreimageSigns::new(&PinchukSystem::shared().phi2);
    let mut field = SignField::new(
        lattice.clone(),
        move |x: &BigInt, y: &BigInt, d: &BigInt| signs.at(x, y, d),
        |v: &CurveSigns| v.r,
    );
    let seeds = seed_edges(&mut field, stride);
    let pieces = trace_all(&mut field, &seeds);
    let mut curves = Vec::new();
    for (index, (edges, closed)) in pieces.into_iter().enumerate() {
        let mut votes = BTreeMap::new();
        for e in &edges {
            let ((i0, j0), (i1, j1)) = e.endpoints();
            if let Some(arc) = arc_vote(&field.value(i0, j0), &field.value(i1, j1)) {
                *votes.entry(arc).or_insert(0) += 1;
            }
        }
        let label = Label::Preimage {
            index,
            arc: majority(&votes),
        };
        let polyline = Polyline {
            points: edges_to_points(&lattice, &edges, closed),
            label: label.clone(),
        };
        curves.push(TracedCurve {
            label,
            edges,
            closed,
            polyline,
        });
    }
    Trace {
        lattice,
        curves,
        evaluations: field.evaluations(),
    }
}

pub fn preimage_curve(window: &Window) -> Vec<Polyline> {
    trace_preimage(window)
        .curves
        .into_iter()
        .map(|c| c.polyline)
        .collect()
}

/// Z(g) for g = f − h(h+1) = (xt+1)(t²+y). Each traced component is
/// labeled A1 or A2 by which factor changes sign across its edges.
pub fn trace_a_curves(window: &Window) -> Trace {
    let (lattice, stride) = trace_lattice(window);
    let mut field = SignField::new(lattice.clone(), g_factor_signs, |v: &(i8, i8)| v.0 * v.1);
    let seeds = seed_edges(&mut field, stride);
    let pieces = trace_all(&mut field, &seeds);
    let mut curves = Vec::new();
    for (edges, closed) in pieces {
        let (mut a1, mut a2) = (0usize, 0usize);
        for e in &edges {
            let ((i0, j0), (i1, j1)) = e.endpoints();
            let (v0, v1) = (field.value(i0, j0), field.value(i1, j1));
            if (v0.0 < 0) != (v1.0 < 0) {
                a1 += 1;
            }
            if (v0.1 < 0) != (v1.1 < 0) {
                a2 += 1;
            }
        }
        let label = if a1 >= a2 { Label::A1 } else { Label::A2 };
        let polyline = Polyline {
            points: edges_to_points(&lattice, &edges, closed),
            label: label.clone(),
        };
        curves.push(TracedCurve {
            label,
            edges,
            closed,
            polyline,
        });
    }
    Trace {
        lattice,
        curves,
        evaluations: field.evaluations(),
    }
}

/// Per-node classification of a target-plane window, row-major with row 0
/// at b = y_min.
#[derive(Debug, Clone)]
pub struct LabelGrid {
    pub window: Window,
    pub cells: Vec<ClassifyResult>,
}

impl LabelGrid {
    pub fn get(&self, i: u32, j: u32) -> &ClassifyResult {
        &self.cells[(j * self.window.resolution + i) as usize]
    }
}

pub fn classify_grid(window: &Window) -> LabelGrid {
    let n = window.resolution;
    let mut cells = Vec::with_capacity((n * n) as usize);
    for j in 0..n {
        for i in 0..n {
            let (a, b) = window.node(i, j);
            cells.push(classify(&a, &b));
        }
    }
    LabelGrid {
        window: window.clone(),
        cells,
    }
}

/// Label text for one classification, e.g. `OFF_CURVE_odd`.
pub fn result_label(r: &ClassifyResult) -> String {
    match (r.kind, r.parity) {
        (CurveKind::OffCurve, Some(p)) => format!("{}_{}", r.kind.label(), p.label()),
        _ => r.kind.label().to_string(),
    }
}

/// Sign of R∘F at the centre of each of `cells`² cells of a domain
/// window, row-major: true where the side parity is odd (R < 0).
pub fn parity_raster(window: &Window, cells: u32) -> Vec<bool> {
    let lattice = Lattice {
        window: window.clone(),
        n: cells,
    };
    let signs = PreimageSigns::new(&PinchukSystem::shared().phi2);
    let mut out = Vec::with_capacity((cells * cells) as usize);
    for j in 0..cells {
        for i in 0..cells {
            let (x, y, d) = lattice.doubled_integer_point(2 * i + 1, 2 * j + 1);
            out.push(signs.at(&x, &y, &d).r < 0);
        }
    }
    out
}

pub fn write_curve_csv<W: Write>(
    out: W,
    samples: &[(Rational, Rational, Rational)],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "a", "b"])?;
    for (s, a, b) in samples {
        w.write_record([to_exact_string(s), to_exact_string(a), to_exact_string(b)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid_csv<W: Write>(out: W, grid: &LabelGrid) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "label"])?;
    let n = grid.window.resolution;
    for j in 0..n {
        for i in 0..n {
            let (x, y) = grid.window.node(i, j);
            w.write_record([
                to_exact_string(&x),
                to_exact_string(&y),
                result_label(grid.get(i, j)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
