//! `pinchuk`: command-line access to the exact toolkit.
//!
//! Rationals go in and come out as `num/den` strings. With `--json` every
//! command prints one JSON object with `"schema": 1`.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pinchuk::arith::{int, parse_rational, to_exact_string, Rational};
use pinchuk::elimination::{discriminant_uni, resultant_prs, resultant_sylvester};
use pinchuk::fiber::{self, ClassifyResult, CurveParam, FiberReport, PlanePoint, PreimageSource};
use pinchuk::interval::Interval;
use pinchuk::parse::parse_poly;
use pinchuk::render::{self, Scene, Window};
use pinchuk::roots::{count_real_roots, isolate_real_roots, refine, IsolatingInterval, Range};
use pinchuk::system::{ACurve, PinchukSystem};

const SCHEMA: u32 = 1;

/// `println!` that exits quietly once the reader has gone away (`| head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        let mut out = std::io::stdout().lock();
        if let Err(e) = writeln!(out, $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "pinchuk",
    version,
    about = "Exact computations for Pinchuk's planar map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and elimination cross-checks.
    Verify(OutputArgs),
    /// Real and complex fiber of F over a target point.
    Fiber {
        #[command(flatten)]
        point: PointArgs,
        /// Maximum width of preimage boxes.
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Position of a target point relative to the curve C.
    Classify {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// CSV samples (s, a, b) of the curve C.
    Curve {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        from: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        to: Rational,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        json: OutputArgs,
    },
    /// SVG of the domain plane (F⁻¹(C), A1, A2) and the target plane (C, K).
    Plot {
        /// Domain window x0 y0 x1 y1.
        #[arg(long, num_args = 4, value_parser = rational_arg, allow_hyphen_values = true,
              value_names = ["X0", "Y0", "X1", "Y1"])]
        window: Option<Vec<Rational>>,
        /// Target window a0 b0 a1 b1.
        #[arg(long, num_args = 4, value_parser = rational_arg, allow_hyphen_values = true,
              value_names = ["A0", "B0", "A1", "B1"])]
        target: Option<Vec<Rational>>,
        /// Contour grid nodes per axis.
        #[arg(long, default_value_t = 512)]
        resolution: u32,
        /// Classified target nodes per axis; 0 turns the classification off.
        #[arg(long, default_value_t = 64)]
        grid: u32,
        #[arg(long)]
        out: PathBuf,
        /// Also write the classified grid as CSV (x,y,label).
        #[arg(long)]
        grid_csv: Option<PathBuf>,
        #[command(flatten)]
        json: OutputArgs,
    },
    /// Real roots of a univariate polynomial.
    Sturm {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Refine isolating intervals to this width.
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Target point a b.
    #[arg(long, num_args = 2, value_parser = rational_arg, allow_hyphen_values = true,
          value_names = ["A", "B"], required = true)]
    point: Vec<Rational>,
}

#[derive(Args)]
struct OutputArgs {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn q(r: &Rational) -> String {
    to_exact_string(r)
}

fn interval_json(i: &Interval) -> Value {
    json!([q(&i.lo), q(&i.hi)])
}

fn isolating_json(iv: &IsolatingInterval) -> Value {
    match iv.exact_value() {
        Some(v) => json!({ "exact": q(v) }),
        None => json!({ "interval": [q(&iv.lo), q(&iv.hi)] }),
    }
}

fn point_json(p: &PlanePoint) -> Value {
    match p {
        PlanePoint::Exact(x, y) => json!({ "exact": [q(x), q(y)] }),
        PlanePoint::Enclosed(x, y) => json!({ "x": interval_json(x), "y": interval_json(y) }),
    }
}

fn curve_name(c: ACurve) -> &'static str {
    match c {
        ACurve::A1 => "A1",
        ACurve::A2 => "A2",
    }
}

fn isolating_text(iv: &IsolatingInterval) -> String {
    match iv.exact_value() {
        Some(v) => q(v),
        None => format!("({}, {})", q(&iv.lo), q(&iv.hi)),
    }
}

fn fiber_json(rep: &FiberReport, eps: &Rational) -> Value {
    let preimages: Vec<Value> = rep
        .preimages
        .iter()
        .map(|p| {
            let source = match &p.source {
                PreimageSource::Genuine(iv) => json!({ "kind": "genuine", "fbar": isolating_json(iv) }),
                PreimageSource::Boundary { curve, tbar } => {
                    json!({ "kind": "boundary", "curve": curve_name(*curve), "tbar": isolating_json(tbar) })
                }
            };
            json!({ "point": point_json(&p.point), "source": source })
        })
        .collect();
    json!({
        "real_count": rep.real_count,
        "complex_count": rep.complex_count,
        "genuine_count": rep.genuine_count(),
        "boundary_contribution": rep.boundary_contribution,
        "m0": rep.m0,
        "escaping_roots": rep.escaping.iter().map(isolating_json).collect::<Vec<_>>(),
        "preimages": preimages,
        "eps": q(eps),
    })
}

fn classify_json(r: &ClassifyResult) -> Value {
    let params: Vec<Value> = r
        .params
        .iter()
        .map(|p| match p {
            CurveParam::Exact(s) => json!({ "exact": q(s) }),
            CurveParam::Enclosed(iv) => isolating_json(iv),
        })
        .collect();
    json!({
        "kind": r.kind.label(),
        "parity": r.parity.map(|p| p.label()),
        "expected_fiber": r.kind.expected_fiber(),
        "params": params,
    })
}

fn report(command: &str, inputs: Value, results: Value, start: Instant) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "results": results,
        "elapsed_ms": start.elapsed().as_secs_f64() * 1000.0,
    })
}

fn print_json(v: &Value) {
    say!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

/// Suite entries: name, passed, detail.
fn verify_suite() -> Vec<(String, bool, String)> {
    let sys = PinchukSystem::shared();
    let mut out: Vec<(String, bool, String)> = sys
        .verify_identities()
        .checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect();
    // both resultant algorithms agree on W(·, a, b) against r
    for (a, b) in [(3, 0), (3, 3142), (0, 7), (-1, 2)] {
        let (a, b) = (int(a), int(b));
        let w = sys.elim.w_at(&a, &b);
        let r = sys.elim.r_at(&a);
        let prs = resultant_prs(w.coeffs(), r.coeffs());
        let syl = resultant_sylvester(w.coeffs(), r.coeffs());
        out.push((
            format!("elimination: res(W, r) by PRS = Sylvester at ({a}, {b})"),
            prs == syl,
            q(&prs),
        ));
    }
    let d = discriminant_uni(&sys.elim.w_at(&int(3), &int(3142))).map(|d| d != int(0));
    out.push((
        "elimination: D(3, 3142) != 0".into(),
        d == Ok(true),
        String::new(),
    ));
    let d0 = discriminant_uni(&sys.elim.w_at(&int(0), &int(5))).map(|d| d == int(0));
    out.push((
        "elimination: D(0, 5) = 0".into(),
        d0 == Ok(true),
        String::new(),
    ));
    out
}

fn window_from(v: &[Rational], resolution: u32) -> Result<Window, String> {
    Window::new(
        v[0].clone(),
        v[1].clone(),
        v[2].clone(),
        v[3].clone(),
        resolution,
    )
    .map_err(|e| e.to_string())
}

/// Variable of a single-variable polynomial text (`x` if none appears).
fn single_variable(text: &str) -> Result<String, String> {
    let mut names: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_alphanumeric() || ch == '_' {
            cur.push(ch);
        } else if !cur.is_empty() {
            if cur
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && !names.contains(&cur)
            {
                names.push(cur.clone());
            }
            cur.clear();
        }
    }
    match names.len() {
        0 => Ok("x".into()),
        1 => Ok(names.remove(0)),
        _ => Err(format!("expected one variable, found {}", names.join(", "))),
    }
}

enum Failure {
    Usage(String),
    Suite,
    Io(String),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let start = Instant::now();
    match cli.command {
        Command::Verify(out) => {
            let suite = verify_suite();
            let all = suite.iter().all(|c| c.1);
            if out.json {
                let checks: Vec<Value> = suite
                    .iter()
                    .map(|(n, p, d)| json!({ "name": n, "passed": p, "detail": d }))
                    .collect();
                print_json(&report(
                    "verify",
                    json!({}),
                    json!({ "passed": all, "checks": checks }),
                    start,
                ));
            } else {
                for (name, passed, detail) in &suite {
                    let mark = if *passed { "PASS" } else { "FAIL" };
                    if detail.is_empty() {
                        say!("{mark}  {name}");
                    } else {
                        say!("{mark}  {name}  [{detail}]");
                    }
                }
                say!(
                    "{} of {} checks passed",
                    suite.iter().filter(|c| c.1).count(),
                    suite.len()
                );
            }
            if !all {
                return Err(Failure::Suite);
            }
        }
        Command::Fiber { point, eps, out } => {
            let (a, b) = (&point.point[0], &point.point[1]);
            let eps = eps.unwrap_or_else(fiber::default_eps);
            if eps <= int(0) {
                return Err(Failure::Usage("--eps must be positive".into()));
            }
            let rep = fiber::real_fiber(a, b, &eps);
            if out.json {
                let inputs = json!({ "point": [q(a), q(b)], "eps": q(&eps) });
                print_json(&report("fiber", inputs, fiber_json(&rep, &eps), start));
            } else {
                say!("target ({}, {})", q(a), q(b));
                say!("real preimages: {}", rep.real_count);
                say!("complex preimages: {}", rep.complex_count);
                say!("multiplicity of fbar = 0 in W: {}", rep.m0);
                for iv in &rep.escaping {
                    say!("escaping root fbar = {}", isolating_text(iv));
                }
                for (k, p) in rep.preimages.iter().enumerate() {
                    let how = match &p.source {
                        PreimageSource::Genuine(iv) => format!("fbar = {}", isolating_text(iv)),
                        PreimageSource::Boundary { curve, tbar } => {
                            format!(
                                "on {} at tbar = {}",
                                curve_name(*curve),
                                isolating_text(tbar)
                            )
                        }
                    };
                    match &p.point {
                        PlanePoint::Exact(x, y) => say!("  #{k}: ({}, {})  {how}", q(x), q(y)),
                        PlanePoint::Enclosed(x, y) => say!(
                            "  #{k}: x in [{}, {}], y in [{}, {}]  {how}",
                            q(&x.lo),
                            q(&x.hi),
                            q(&y.lo),
                            q(&y.hi)
                        ),
                    }
                }
            }
        }
        Command::Classify { point, out } => {
            let (a, b) = (&point.point[0], &point.point[1]);
            let r = fiber::classify(a, b);
            if out.json {
                print_json(&report(
                    "classify",
                    json!({ "point": [q(a), q(b)] }),
                    classify_json(&r),
                    start,
                ));
            } else {
                match r.parity {
                    Some(p) => say!("{} ({} side)", r.kind.label(), p.label()),
                    None => say!("{}", r.kind.label()),
                }
                say!("expected fiber size: {}", r.kind.expected_fiber());
                for p in &r.params {
                    match p {
                        CurveParam::Exact(s) => say!("parameter s = {}", q(s)),
                        CurveParam::Enclosed(iv) => {
                            say!("parameter s in {}", isolating_text(iv))
                        }
                    }
                }
            }
        }
        Command::Curve {
            from,
            to,
            samples,
            out,
            json: j,
        } => {
            if from >= to || samples < 2 {
                return Err(Failure::Usage(
                    "need --from < --to and --samples >= 2".into(),
                ));
            }
            let rows = render::curve_samples(&from, &to, samples);
            match &out {
                Some(path) => {
                    let file = std::fs::File::create(path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    render::write_curve_csv(file, &rows).map_err(|e| Failure::Io(e.to_string()))?;
                }
                None if !j.json => {
                    render::write_curve_csv(std::io::stdout().lock(), &rows)
                        .map_err(|e| Failure::Io(e.to_string()))?;
                }
                None => {}
            }
            if j.json {
                let inputs = json!({ "from": q(&from), "to": q(&to), "samples": samples });
                let mut results = json!({ "samples": samples });
                match &out {
                    Some(path) => results["out"] = json!(path.display().to_string()),
                    None => {
                        let pts: Vec<Value> = rows
                            .iter()
                            .map(|(s, a, b)| json!([q(s), q(a), q(b)]))
                            .collect();
                        results["points"] = json!(pts);
                    }
                }
                print_json(&report("curve", inputs, results, start));
            }
        }
        Command::Plot {
            window,
            target,
            resolution,
            grid,
            out,
            grid_csv,
            json: j,
        } => {
            if resolution < 2 {
                return Err(Failure::Usage("--resolution must be at least 2".into()));
            }
            let domain = match &window {
                Some(v) => window_from(v, resolution).map_err(Failure::Usage)?,
                None => Window::default_domain(resolution),
            };
            if grid == 1 {
                return Err(Failure::Usage("--grid must be 0 or at least 2".into()));
            }
            let target_window = match &target {
                Some(v) => window_from(v, grid.max(2)).map_err(Failure::Usage)?,
                None => Window::default_target(grid.max(2)),
            };
            let pre = render::trace_preimage(&domain);
            let acurves = render::trace_a_curves(&domain);
            let mut polylines: Vec<_> = pre.curves.iter().map(|c| c.polyline.clone()).collect();
            polylines.extend(acurves.curves.iter().map(|c| c.polyline.clone()));
            // C over the parameters with a in the target strip
            let a_hi = target_window.x_max.clone().max(int(0));
            let reach = a_hi.ceil() + int(2);
            polylines.push(render::sample_curve(&(-&reach - int(1)), &reach, 2001));
            let cells = 128.min(resolution);
            let grid_labels = (grid >= 2).then(|| render::classify_grid(&target_window));
            let scene = Scene {
                parity: Some((cells, render::parity_raster(&domain, cells))),
                grid: grid_labels,
                domain: domain.clone(),
                target: target_window.clone(),
                polylines,
            };
            render::emit_svg(&scene, &out)
                .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
            if let (Some(path), Some(g)) = (&grid_csv, &scene.grid) {
                let file = std::fs::File::create(path)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                render::write_grid_csv(file, g).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let components: Vec<Value> = pre
                .curves
                .iter()
                .map(|c| {
                    let arc = match &c.label {
                        render::Label::Preimage { arc, .. } => arc.map(|a| a.label()),
                        _ => None,
                    };
                    json!({ "name": c.label.name(), "maps_to": arc, "closed": c.closed, "points": c.polyline.points.len() })
                })
                .collect();
            let a_counts =
                |l: render::Label| acurves.curves.iter().filter(|c| c.label == l).count();
            if j.json {
                let win = |w: &Window| json!([q(&w.x_min), q(&w.y_min), q(&w.x_max), q(&w.y_max)]);
                let inputs = json!({
                    "window": win(&domain),
                    "target": win(&target_window),
                    "resolution": resolution,
                    "grid": grid,
                });
                let results = json!({
                    "out": out.display().to_string(),
                    "preimage_components": components,
                    "a1_components": a_counts(render::Label::A1),
                    "a2_components": a_counts(render::Label::A2),
                });
                print_json(&report("plot", inputs, results, start));
            } else {
                say!("wrote {}", out.display());
                say!("F^-1(C) components: {}", pre.curves.len());
                for c in &pre.curves {
                    if let render::Label::Preimage { index, arc } = &c.label {
                        say!("  #{index} -> {}", arc.map(|a| a.label()).unwrap_or("?"));
                    }
                }
                say!("A1 components: {}", a_counts(render::Label::A1));
                say!("A2 components: {}", a_counts(render::Label::A2));
            }
        }
        Command::Sturm { poly, eps, out } => {
            let var = single_variable(&poly).map_err(Failure::Usage)?;
            let p =
                parse_poly(&poly, &[var.as_str()]).map_err(|e| Failure::Usage(e.to_string()))?;
            let p = p
                .to_univariate(&var)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if p.is_zero() {
                return Err(Failure::Usage(
                    "the zero polynomial has no isolated roots".into(),
                ));
            }
            if let Some(e) = &eps {
                if *e <= int(0) {
                    return Err(Failure::Usage("--eps must be positive".into()));
                }
            }
            let count = count_real_roots(&p, &Range::Whole);
            let ivs: Vec<IsolatingInterval> = isolate_real_roots(&p)
                .iter()
                .map(|iv| match &eps {
                    Some(e) => refine(iv, e),
                    None => iv.clone(),
                })
                .collect();
            if out.json {
                let inputs = json!({ "poly": poly, "variable": var });
                let results = json!({
                    "real_roots": count,
                    "roots": ivs.iter().map(isolating_json).collect::<Vec<_>>(),
                });
                print_json(&report("sturm", inputs, results, start));
            } else {
                say!("{} distinct real root(s) of {}", count, p.display_in(&var));
                for iv in &ivs {
                    say!("  {}", isolating_text(iv));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
