use pinchuk::arith::{int, rat, to_f64, Rational};
use pinchuk::fiber::{classify, CurveKind, Parity};
use pinchuk::render::contour::Edge;
use pinchuk::render::exact_sign::{common_form, g_factor_signs, PreimageSigns};
use pinchuk::render::*;
use pinchuk::system::PinchukSystem;

fn r_negative(signs: &PreimageSigns, p: &(Rational, Rational)) -> bool {
    let (x, y, d) = common_form(&p.0, &p.1);
    signs.at(&x, &y, &d).r < 0
}

/// Bisects the segment between two points of opposite "side" down to
/// `steps` halvings, exactly.
fn bisect(
    mut lo: (Rational, Rational),
    mut hi: (Rational, Rational),
    steps: usize,
    side: impl Fn(&(Rational, Rational)) -> bool,
) -> (Rational, Rational) {
    let s_lo = side(&lo);
    assert_ne!(s_lo, side(&hi));
    for _ in 0..steps {
        let mid = ((&lo.0 + &hi.0) / int(2), (&lo.1 + &hi.1) / int(2));
        if side(&mid) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[test]
fn curve_samples_hit_known_points() {
    let pl = sample_curve(&int(-3), &int(1), 5);
    assert_eq!(pl.label, Label::C);
    assert_eq!(pl.points.len(), 5);
    assert_eq!(pl.points[0], (3.0, 8406.0));
    assert_eq!(pl.points[4], (3.0, 3142.0));

    let start = sample_curve(&int(-1), &rat(-99, 100), 2);
    assert_eq!(start.points[0], (-1.0, 0.0));

    for (_, a, _) in curve_samples(&int(-7), &int(5), 97) {
        assert!(a >= int(-1));
    }
}

#[test]
fn window_validation() {
    assert!(Window::new(int(1), int(0), int(1), int(1), 4).is_err());
    assert!(Window::new(int(0), int(2), int(1), int(1), 4).is_err());
    assert_eq!(
        Window::new(int(0), int(0), int(1), int(1), 1),
        Err(WindowError::Resolution(1))
    );
    let w = Window::new(int(0), int(0), int(3), int(6), 4).unwrap();
    assert_eq!(w.node(3, 3), (int(3), int(6)));
    assert_eq!(w.node(1, 2), (int(1), int(4)));
}

#[test]
fn preimage_points_map_onto_c() {
    let window = Window::default_domain(64);
    let trace = trace_preimage(&window);
    assert_eq!(
        trace
            .curves
            .iter()
            .filter(|c| c.label.is_preimage())
            .count(),
        3
    );
    let sys = PinchukSystem::shared();
    let signs = PreimageSigns::new(&sys.phi2);
    for curve in &trace.curves {
        let arc = match curve.label {
            Label::Preimage { arc: Some(arc), .. } => arc,
            ref other => panic!("unexpected label {other:?}"),
        };
        assert!(curve.polyline.points.len() >= 2);
        for e in curve.edges.iter().step_by(701) {
            let (p0, p1) = trace.edge_bracket(*e);
            let z = bisect(p0, p1, 40, |p| r_negative(&signs, p));
            let (a, b) = PinchukSystem::apply_f(&z.0, &z.1);
            let (a, b) = (to_f64(&a), to_f64(&b));
            // the parameter on the labeled arc
            let root = (1.0 + a).max(0.0).sqrt();
            let s = match arc {
                Arc::Left => -1.0 - root,
                Arc::Middle | Arc::Right => -1.0 + root,
            };
            let s_rat = Rational::from_float(s).unwrap();
            let on_c = to_f64(&sys.phi2.eval(&s_rat));
            assert!(
                (on_c - b).abs() <= 1e-6 * (1.0 + b.abs()),
                "F(z) = ({a}, {b}) is off C (phi2 = {on_c}) on {arc:?}"
            );
            match arc {
                Arc::Left => assert!(s < -1.0),
                Arc::Middle => assert!((-1.0..=0.0).contains(&s)),
                Arc::Right => assert!(s >= 0.0),
            }
        }
    }
}

#[test]
fn a_curves_lie_in_f_zero() {
    let window = Window::default_domain(64);
    let trace = trace_a_curves(&window);
    let labels: Vec<_> = trace.curves.iter().map(|c| c.label.clone()).collect();
    assert!(labels.contains(&Label::A1) && labels.contains(&Label::A2));
    for curve in &trace.curves {
        for e in curve.edges.iter().step_by(997) {
            let (p0, p1) = trace.edge_bracket(*e);
            let z = bisect(p0, p1, 50, |p| {
                let (x, y, d) = common_form(&p.0, &p.1);
                let (m, s) = g_factor_signs(&x, &y, &d);
                m * s < 0
            });
            let (f, h) = PinchukSystem::fh(&z.0, &z.1);
            let (f, h) = (to_f64(&f), to_f64(&h));
            assert!(f.abs() < 1e-6, "f = {f} on {:?}", curve.label);
            match curve.label {
                Label::A1 => assert!(h.abs() < 1e-6, "h = {h} on A1"),
                Label::A2 => assert!((h + 1.0).abs() < 1e-6, "h = {h} on A2"),
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn classify_grid_matches_pointwise() {
    let w = Window::new(int(0), int(0), int(3), int(4000), 2).unwrap();
    let grid = classify_grid(&w);
    assert_eq!(grid.cells.len(), 4);
    assert_eq!(grid.get(0, 0).kind, CurveKind::Exceptional);
    assert_eq!(grid.get(1, 0).kind, CurveKind::OffCurve);
    assert_eq!(grid.get(1, 0).parity, Some(Parity::Even));
    assert_eq!(grid.get(1, 1).parity, Some(Parity::Odd));

    let w = Window::new(rat(-3, 2), int(-50), int(4), int(9000), 5).unwrap();
    let grid = classify_grid(&w);
    for j in 0..5 {
        for i in 0..5 {
            let (a, b) = w.node(i, j);
            assert_eq!(*grid.get(i, j), classify(&a, &b));
        }
    }
}

#[test]
fn csv_headers_and_exact_values() {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &curve_samples(&int(-3), &int(1), 3)).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "s,a,b");
    assert_eq!(lines[1], "-3/1,3/1,8406/1");
    assert_eq!(lines[3], "1/1,3/1,3142/1");

    let w = Window::new(int(0), int(0), int(3), int(4000), 2).unwrap();
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &classify_grid(&w)).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "x,y,label");
    assert_eq!(lines[1], "0/1,0/1,EXCEPTIONAL");
    assert_eq!(lines[2], "3/1,0/1,OFF_CURVE_even");
    assert_eq!(lines[4], "3/1,4000/1,OFF_CURVE_odd");
}

fn small_scene() -> Scene {
    let domain = Window::default_domain(32);
    let target = Window::default_target(8);
    let mut polylines = preimage_curve(&domain);
    polylines.extend(
        trace_a_curves(&domain)
            .curves
            .into_iter()
            .map(|c| c.polyline),
    );
    polylines.push(sample_curve(&int(-4), &int(2), 200));
    Scene {
        parity: Some((16, parity_raster(&domain, 16))),
        grid: Some(classify_grid(&target)),
        domain,
        target,
        polylines,
    }
}

#[test]
fn svg_is_well_formed_and_deterministic() {
    let scene = small_scene();
    let a = render_svg(&scene);
    let b = render_svg(&small_scene());
    assert_eq!(a, b);

    let doc = roxmltree::Document::parse(&a).expect("well-formed SVG");
    let paths = doc.descendants().filter(|n| n.has_tag_name("path")).count();
    assert_eq!(paths, scene.polylines.len());
    let circles = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .count();
    assert_eq!(circles, 2);
    let layer_ids: Vec<_> = doc
        .descendants()
        .filter_map(|n| n.attribute("id"))
        .filter(|id| id.starts_with("layer-"))
        .collect();
    assert_eq!(
        layer_ids,
        [
            "layer-preimage-0",
            "layer-preimage-1",
            "layer-preimage-2",
            "layer-A2",
            "layer-A1",
            "layer-C"
        ]
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plot.svg");
    emit_svg(&scene, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
}

#[test]
fn edge_endpoints_are_adjacent() {
    let trace = trace_preimage(&Window::default_domain(16));
    for curve in &trace.curves {
        for pair in curve.edges.windows(2) {
            let (a, b) = (pair[0].midpoint(), pair[1].midpoint());
            // consecutive crossed edges share a cell
            assert!(
                (a.0 - b.0).abs() <= 1.0 && (a.1 - b.1).abs() <= 1.0,
                "{pair:?}"
            );
            assert!(matches!(pair[0], Edge::H(..) | Edge::V(..)));
        }
    }
}
