//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pinchuk::arith::{int, rat, Rational};
use pinchuk::elimination::{b_membership, gcd, is_squarefree, squarefree_part};
use pinchuk::fiber::*;
use pinchuk::render::*;
use pinchuk::roots::{count_real_roots, grid_root_scan, isolate_real_roots, Range};
use pinchuk::system::{g_map, psi, PinchukSystem};
use pinchuk::UniPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_BUDGET: Duration = Duration::from_secs(60);
const FIBER_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_OFF_CURVE: usize = 20;
const RANDOM_ON_CURVE: usize = 5;
const ROUND_TRIP_SAMPLES: usize = 100;
const JACOBIAN_STEPS: u32 = 100;
const MIN_PREIMAGE_COMPONENTS: usize = 3;
const ROOT_SUITE_SIZE: usize = 200;
const GRID_ORACLE_STEPS: u32 = 20_000;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let sys = PinchukSystem::build();
    let report = sys.verify_identities();
    let elapsed = start.elapsed();
    let failed: Vec<_> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    check(failed.is_empty(), format!("failed: {failed:?}"))?;
    check(
        sys.phi_symmetry_constant() == Some(int(-2)),
        "Φ₂ symmetry quotient is not a constant multiple",
    )?;
    check(elapsed < IDENTITY_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} identities exact, {elapsed:.2?} including expansion of q",
        report.checks.len()
    ))
}

fn timed_fiber(a: &Rational, b: &Rational, worst: &mut Duration) -> FiberReport {
    let start = Instant::now();
    let rep = real_fiber(a, b, &default_eps());
    *worst = (*worst).max(start.elapsed());
    rep
}

fn criterion_2() -> Outcome {
    let mut worst = Duration::ZERO;
    for (a, b, want) in [(3, 0, 2), (3, 4000, 2), (3, 3142, 1), (0, 0, 0), (-1, 0, 0)] {
        let rep = timed_fiber(&int(a), &int(b), &mut worst);
        check(
            rep.real_count == want,
            format!("real_fiber({a},{b}) = {}, want {want}", rep.real_count),
        )?;
    }
    let rep = timed_fiber(&int(3), &int(3142), &mut worst);
    let esc: Vec<_> = rep
        .escaping
        .iter()
        .filter_map(|iv| iv.exact_value().cloned())
        .collect();
    check(
        rep.escaping_roots() == 1 && esc == [int(2)],
        format!("escaping roots at (3,3142): {:?}", rep.escaping),
    )?;

    let mut r = rng(2);
    let mut off = 0;
    while off < RANDOM_OFF_CURVE {
        let (a, b) = (
            small_rational(&mut r, 60, 7),
            small_rational(&mut r, 9000, 5),
        );
        if !on_curve(&a, &b).is_empty() || is_exceptional(&a, &b) {
            continue;
        }
        let rep = timed_fiber(&a, &b, &mut worst);
        check(
            rep.real_count == 2,
            format!("off-curve ({a},{b}) has {} preimages", rep.real_count),
        )?;
        off += 1;
    }
    let mut on = 0;
    while on < RANDOM_ON_CURVE {
        let s = small_rational(&mut r, 20, 7);
        if s == int(0) || s == int(-1) {
            continue;
        }
        let (a, b) = phi(&s);
        if discriminant_at(&a, &b) == int(0) {
            continue;
        }
        let rep = timed_fiber(&a, &b, &mut worst);
        check(
            rep.real_count == 1,
            format!("Φ({s}) has {} preimages", rep.real_count),
        )?;
        on += 1;
    }
    check(
        worst < FIBER_BUDGET,
        format!("slowest fiber took {worst:?}"),
    )?;
    Ok(format!(
        "5 fixed targets, {RANDOM_OFF_CURVE} off-curve → 2, {RANDOM_ON_CURVE} on-curve → 1; escaping root f̄ = 2; slowest {worst:.2?}"
    ))
}

/// Distinct complex roots of W off B (genuine) and on the second branch of B.
fn genuine_and_escaping(a: &Rational, b: &Rational) -> (usize, usize) {
    let w = build_w(a, b);
    let rest = squarefree_part(&w.shift_down(w.trailing_zeros()));
    let esc = gcd(&rest, &PinchukSystem::shared().elim.r_at(a))
        .degree()
        .unwrap();
    (rest.degree().unwrap() - esc, esc)
}

fn criterion_3() -> Outcome {
    let (a, b) = (int(3), int(1));
    check(discriminant_at(&a, &b) != int(0), "(3,1) is not generic")?;
    check(
        complex_fiber_count(&a, &b) == 6,
        "complex count at (3,1) is not 6",
    )?;
    let mut r = rng(3);
    let mut bs = Vec::new();
    while bs.len() < 3 {
        let b = small_rational(&mut r, 500, 9);
        if b != int(0) {
            bs.push(b);
        }
    }
    for b in &bs {
        let count = complex_fiber_count(&int(0), b);
        let (genuine, _) = genuine_and_escaping(&int(0), b);
        check(
            count == 6 && genuine == 4,
            format!("(0,{b}): count {count}, genuine {genuine}"),
        )?;
    }
    let at_origin = complex_fiber_count(&int(0), &int(0));
    check(
        at_origin == 2,
        format!("complex count at (0,0) is {at_origin}"),
    )?;
    let shown: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
    Ok(format!(
        "6 at (3,1); 6 = 4 + 2 at (0,b) for b in {{{}}}; 2 at (0,0)",
        shown.join(", ")
    ))
}

fn criterion_4() -> Outcome {
    let d = discriminant_at(&int(3), &int(3142));
    check(d != int(0), "D(3,3142) = 0")?;
    let mut r = rng(4);
    for _ in 0..3 {
        let b = small_rational(&mut r, 5000, 11);
        check(
            discriminant_at(&int(0), &b) == int(0),
            format!("D(0,{b}) ≠ 0"),
        )?;
    }
    Ok("D(3,3142) ≠ 0; D(0,b) = 0 at 3 random b".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut n = 0;
    while n < ROUND_TRIP_SAMPLES {
        let (x, y) = (small_rational(&mut r, 40, 9), small_rational(&mut r, 40, 9));
        let (f, h) = PinchukSystem::fh(&x, &y);
        if f == int(0) {
            continue;
        }
        check(
            psi(&f, &h).ok() == Some((x.clone(), y.clone())),
            format!("ψ round trip at ({x},{y})"),
        )?;
        check(
            g_map(&f, &h).ok() == Some(PinchukSystem::apply_f(&x, &y)),
            format!("G∘(f,h) ≠ F at ({x},{y})"),
        )?;
        n += 1;
    }
    let mut m = 0;
    while m < ROUND_TRIP_SAMPLES {
        let (f, h) = (small_rational(&mut r, 40, 9), small_rational(&mut r, 40, 9));
        if b_membership(&f, &h).is_some() {
            continue;
        }
        let (a, b) = g_map(&f, &h).map_err(|e| e.to_string())?;
        check(
            build_w(&a, &b).eval(&f) == int(0),
            format!("W(f̄, G) ≠ 0 at ({f},{h})"),
        )?;
        m += 1;
    }
    Ok(format!("{n} ψ/G round trips, {m} W(f̄, G(f̄,h̄)) = 0"))
}

fn criterion_6() -> Outcome {
    let sys = PinchukSystem::shared();
    check(!sys.jac.is_zero(), "jac is the zero polynomial")?;
    let (min, nodes) = sys.jacobian_grid_min(&int(-5), &int(5), JACOBIAN_STEPS);
    check(min > int(0), format!("min jac on grid = {min}"))?;
    Ok(format!(
        "jac > 0 at all {nodes} nodes of [-5,5]² step 1/10 (min {min})"
    ))
}

fn criterion_7() -> Outcome {
    for (s, a, b) in [(1, 3, 3142), (-3, 3, 8406), (0, 0, 0), (-1, -1, 0)] {
        check(
            phi(&int(s)) == (int(a), int(b)),
            format!("Φ({s}) ≠ ({a},{b})"),
        )?;
    }
    let sing = singular_parameters();
    let exact: Vec<_> = sing
        .iter()
        .filter_map(|iv| iv.exact_value().cloned())
        .collect();
    check(
        sing.len() == 1 && exact == [int(-1)],
        format!("dΦ/ds zeros: {sing:?}"),
    )?;
    let (za, zb) = zariski_extra_point();
    check(
        za == rat(-104, 75),
        format!("extra point first coordinate {za}"),
    )?;
    Ok(format!(
        "Φ values exact; dΦ/ds = 0 only at s = -1; extra point ({za}, {zb})"
    ))
}

fn criterion_8() -> Outcome {
    let below = side_of_curve(&int(3), &int(0)).map_err(|e| e.to_string())?;
    let above = side_of_curve(&int(3), &int(4000)).map_err(|e| e.to_string())?;
    check(below != above, "(3,0) and (3,4000) on the same side")?;
    Ok(format!(
        "(3,0) {}, (3,4000) {}",
        below.label(),
        above.label()
    ))
}

fn criterion_9() -> Outcome {
    let mut counts = Vec::new();
    for res in [256, 512] {
        let trace = trace_preimage(&Window::default_domain(res));
        counts.push(
            trace
                .curves
                .iter()
                .filter(|c| c.label.is_preimage())
                .count(),
        );
    }
    check(
        counts[0] == counts[1],
        format!("component counts differ: {counts:?}"),
    )?;
    check(
        counts[0] >= MIN_PREIMAGE_COMPONENTS,
        format!("only {} components", counts[0]),
    )?;

    let scene = || {
        let domain = Window::default_domain(64);
        let target = Window::default_target(16);
        let mut polylines = preimage_curve(&domain);
        polylines.extend(
            trace_a_curves(&domain)
                .curves
                .into_iter()
                .map(|c| c.polyline),
        );
        polylines.push(sample_curve(&int(-4), &int(2), 400));
        Scene {
            parity: Some((32, parity_raster(&domain, 32))),
            grid: Some(classify_grid(&target)),
            domain,
            target,
            polylines,
        }
    };
    let s = scene();
    let first = render_svg(&s);
    let second = render_svg(&scene());
    check(first == second, "SVG output differs between runs")?;
    let doc =
        roxmltree::Document::parse(&first).map_err(|e| format!("SVG not well-formed: {e}"))?;
    let paths = doc.descendants().filter(|n| n.has_tag_name("path")).count();
    check(
        paths == s.polylines.len(),
        format!("{paths} paths for {} polylines", s.polylines.len()),
    )?;
    Ok(format!(
        "F⁻¹(C) components: {} at 256, {} at 512; SVG well-formed, {} bytes, byte-identical",
        counts[0],
        counts[1],
        first.len()
    ))
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut done = 0;
    let mut oracle_checked = 0;
    while done < ROOT_SUITE_SIZE {
        let deg = r.gen_range(1..=8);
        let coeffs: Vec<i64> = (0..=deg).map(|_| r.gen_range(-9..=9)).collect();
        let p = UniPoly::from_ints(&coeffs);
        if p.degree() != Some(deg) || !is_squarefree(&p) {
            continue;
        }
        let ivs = isolate_real_roots(&p);
        let sturm = count_real_roots(&p, &Range::Whole);
        check(
            ivs.len() == sturm,
            format!("{p}: {} intervals, Sturm {sturm}", ivs.len()),
        )?;
        check(
            ivs.iter().all(|iv| iv.certify()),
            format!("{p}: uncertified interval"),
        )?;
        if deg <= 4 {
            let m = p.cauchy_bound() + int(1);
            let scanned = grid_root_scan(&p, &-m.clone(), &m, GRID_ORACLE_STEPS);
            check(
                scanned == sturm,
                format!("{p}: grid scan {scanned}, Sturm {sturm}"),
            )?;
            oracle_checked += 1;
        }
        done += 1;
    }
    Ok(format!(
        "{done} square-free polynomials; grid oracle agreed on {oracle_checked} of degree ≤ 4"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("identity suite", criterion_1),
        ("real fiber counts", criterion_2),
        ("complex fiber counts", criterion_3),
        ("discriminant", criterion_4),
        ("inverse and factorization", criterion_5),
        ("jacobian grid", criterion_6),
        ("curve C facts", criterion_7),
        ("side structure", criterion_8),
        ("rendering", criterion_9),
        ("root isolation suite", criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2} ({name}): {detail} [{took:.1?}]",
                k + 1
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2} ({name}): {why} [{took:.1?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
