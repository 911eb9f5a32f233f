//! Fibers of F over rational targets, the curve C = Φ(ℝ), and the
//! classification of targets relative to C.

use num_traits::{One, Signed, Zero};

use crate::arith::{int, rat, rational_sqrt, Rational};
use crate::elimination::{discriminant_uni, gcd, squarefree_part};
use crate::interval::{eval_multi, Interval};
use crate::roots::{
    count_real_roots, isolate_real_roots, refine, sign_at_root, IsolatingInterval, Range,
};
use crate::system::{ACurve, PinchukSystem};
use crate::upoly::UniPoly;

/// Φ(s) = (s² + 2s, u(s² + s, s)).
pub fn phi(s: &Rational) -> (Rational, Rational) {
    let sys = PinchukSystem::shared();
    (sys.phi1.eval(s), sys.phi2.eval(s))
}

/// The two points of K, (−1, 0) and (0, 0).
pub fn exceptional_set() -> [(Rational, Rational); 2] {
    [(int(-1), int(0)), (int(0), int(0))]
}

pub fn is_exceptional(a: &Rational, b: &Rational) -> bool {
    exceptional_set().iter().any(|(ka, kb)| ka == a && kb == b)
}

/// W(f̄, a0, b0).
pub fn build_w(a: &Rational, b: &Rational) -> UniPoly {
    PinchukSystem::shared().elim.w_at(a, b)
}

/// D(a0, b0): discriminant of W(·, a0, b0) in f̄.
pub fn discriminant_at(a: &Rational, b: &Rational) -> Rational {
    discriminant_uni(&build_w(a, b)).expect("W has degree 6")
}

/// A point given exactly or by a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanePoint {
    Exact(Rational, Rational),
    Enclosed(Interval, Interval),
}

impl PlanePoint {
    pub fn boxes(&self) -> (Interval, Interval) {
        match self {
            PlanePoint::Exact(x, y) => (Interval::point(x.clone()), Interval::point(y.clone())),
            PlanePoint::Enclosed(x, y) => (x.clone(), y.clone()),
        }
    }

    pub fn center(&self) -> (Rational, Rational) {
        let (x, y) = self.boxes();
        (x.midpoint(), y.midpoint())
    }

    pub fn max_width(&self) -> Rational {
        let (x, y) = self.boxes();
        x.width().max(y.width())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreimageSource {
    /// A root f̄ of W off B; the point is ψ(f̄, a − f̄).
    Genuine(IsolatingInterval),
    /// f̄ = 0, on A₁ or A₂ at parameter t̄.
    Boundary {
        curve: ACurve,
        tbar: IsolatingInterval,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimage {
    pub point: PlanePoint,
    pub source: PreimageSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub a: Rational,
    pub b: Rational,
    pub real_count: usize,
    pub complex_count: usize,
    pub preimages: Vec<Preimage>,
    /// Real roots of W with f̄ = h̄(h̄+1) ≠ 0.
    pub escaping: Vec<IsolatingInterval>,
    /// 0 or 2.
    pub boundary_contribution: usize,
    /// Multiplicity of f̄ = 0 as a root of W.
    pub m0: usize,
    pub w: UniPoly,
}

impl FiberReport {
    pub fn escaping_roots(&self) -> usize {
        self.escaping.len()
    }

    pub fn genuine_count(&self) -> usize {
        self.real_count - self.boundary_contribution
    }
}

struct Reduced {
    w: UniPoly,
    m0: usize,
    /// Square-free part of W / f̄^m0.
    v: UniPoly,
    /// gcd(V, r): the roots on the second branch of B.
    g1: UniPoly,
}

fn reduce(a: &Rational, b: &Rational) -> Reduced {
    let sys = PinchukSystem::shared();
    let w = build_w(a, b);
    let m0 = w.trailing_zeros();
    let rest = w.shift_down(m0);
    let v = if rest.is_constant() {
        UniPoly::constant(Rational::one())
    } else {
        squarefree_part(&rest)
    };
    let g1 = gcd(&v, &sys.elim.r_at(a));
    Reduced { w, m0, v, g1 }
}

fn boundary_applies(a: &Rational) -> Option<ACurve> {
    if a.is_zero() {
        Some(ACurve::A1)
    } else if *a == int(-1) {
        Some(ACurve::A2)
    } else {
        None
    }
}

pub fn complex_fiber_count(a: &Rational, b: &Rational) -> usize {
    let red = reduce(a, b);
    let genuine = red.v.degree().unwrap() - red.g1.degree().unwrap();
    let boundary = if boundary_applies(a).is_some() && !b.is_zero() {
        2
    } else {
        0
    };
    genuine + boundary
}

/// ψ over an interval of f̄ with h̄ = a − f̄; `None` if a denominator
/// interval still contains zero.
fn psi_enclosure(a: &Rational, fbar: &Interval) -> Option<(Interval, Interval)> {
    let one = Interval::point(Rational::one());
    let hbar = &Interval::point(a.clone()) - fbar;
    let d = fbar - &(&hbar * &(&hbar + &one));
    let d2 = d.pow(2);
    let x = (&(&hbar + &one) * fbar).checked_div(&d2)?;
    let y = (&(fbar - &hbar.pow(2)) * &d2).checked_div(&fbar.pow(2))?;
    Some((x, y))
}

fn acurve_enclosure(curve: ACurve, t: &Interval) -> Option<(Interval, Interval)> {
    let one = Interval::point(Rational::one());
    match curve {
        ACurve::A1 => {
            let x = (-&one).checked_div(t)?;
            let y = -&(t * &(t + &one));
            Some((x, y))
        }
        ACurve::A2 => {
            let x = (-&(t + &one)).checked_div(&t.pow(2))?;
            Some((x, -&t.pow(2)))
        }
    }
}

/// Widens `iv` to the dyadic grid of step ≤ eps/4, keeping endpoints
/// short. A box of width ≤ eps/2 stays within eps.
fn round_out(iv: &Interval, eps: &Rational) -> Interval {
    let mut scale = Rational::one();
    while scale.recip() * int(4) > *eps {
        scale *= int(2);
    }
    Interval::new(
        (&iv.lo * &scale).floor() / &scale,
        (&iv.hi * &scale).ceil() / &scale,
    )
}

/// Refines `iv` until `enclose` gives boxes of width ≤ eps.
fn enclose_to_width<F>(
    iv: &IsolatingInterval,
    eps: &Rational,
    enclose: F,
) -> (IsolatingInterval, PlanePoint)
where
    F: Fn(&Interval) -> Option<(Interval, Interval)>,
{
    let mut width = eps.clone();
    loop {
        let fine = refine(iv, &width);
        if let Some((x, y)) = enclose(&fine.as_interval()) {
            if x.width().is_zero() && y.width().is_zero() {
                return (fine, PlanePoint::Exact(x.lo, y.lo));
            }
            if x.width() * int(2) <= *eps && y.width() * int(2) <= *eps {
                return (
                    fine,
                    PlanePoint::Enclosed(round_out(&x, eps), round_out(&y, eps)),
                );
            }
        }
        width /= int(1 << 8);
    }
}

/// Real fiber of F over (a, b) with preimage boxes of width ≤ eps.
pub fn real_fiber(a: &Rational, b: &Rational, eps: &Rational) -> FiberReport {
    assert!(eps.is_positive(), "eps must be positive");
    let red = reduce(a, b);
    let escaping = isolate_real_roots(&red.g1);
    let genuine_poly = red.v.exact_div(&red.g1).expect("gcd divides");
    let mut preimages = Vec::new();
    for iv in isolate_real_roots(&genuine_poly) {
        let (fine, point) = enclose_to_width(&iv, eps, |fb| psi_enclosure(a, fb));
        preimages.push(Preimage {
            point,
            source: PreimageSource::Genuine(fine),
        });
    }
    let mut boundary = 0;
    if let Some(curve) = boundary_applies(a) {
        if b.is_negative() {
            // t̄² = −b
            let tpoly = UniPoly::new(vec![b.clone(), Rational::zero(), Rational::one()]);
            let params = match rational_sqrt(&-b) {
                Some(r) => [-r.clone(), r]
                    .into_iter()
                    .map(|t| IsolatingInterval {
                        lo: t.clone(),
                        hi: t,
                        poly: tpoly.clone(),
                    })
                    .collect(),
                None => isolate_real_roots(&tpoly),
            };
            for iv in params {
                let (fine, point) = enclose_to_width(&iv, eps, |t| acurve_enclosure(curve, t));
                preimages.push(Preimage {
                    point,
                    source: PreimageSource::Boundary { curve, tbar: fine },
                });
                boundary += 1;
            }
        }
    }
    let complex_count = red.v.degree().unwrap() - red.g1.degree().unwrap()
        + if boundary_applies(a).is_some() && !b.is_zero() {
            2
        } else {
            0
        };
    FiberReport {
        a: a.clone(),
        b: b.clone(),
        real_count: preimages.len(),
        complex_count,
        preimages,
        escaping,
        boundary_contribution: boundary,
        m0: red.m0,
        w: red.w,
    }
}

/// Interval image of a preimage box under F; used to check enclosures.
pub fn image_box(point: &PlanePoint) -> (Interval, Interval) {
    let sys = PinchukSystem::shared();
    let (x, y) = point.boxes();
    let b = [x, y];
    (eval_multi(&sys.p, &b), eval_multi(&sys.q, &b))
}

/// A real parameter s with Φ(s) equal to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveParam {
    Exact(Rational),
    /// A root of s² + 2s − a.
    Enclosed(IsolatingInterval),
}

fn param_poly(a: &Rational) -> UniPoly {
    UniPoly::new(vec![-a.clone(), int(2), int(1)])
}

/// Real parameters s with Φ(s) = (a, b); empty when the target is off C.
pub fn on_curve(a: &Rational, b: &Rational) -> Vec<CurveParam> {
    if *a < int(-1) {
        return Vec::new();
    }
    let sys = PinchukSystem::shared();
    let disc = a + Rational::one();
    if let Some(r) = rational_sqrt(&disc) {
        let mut roots = vec![-Rational::one() - &r];
        if !r.is_zero() {
            roots.push(-Rational::one() + &r);
        }
        return roots
            .into_iter()
            .filter(|s| sys.phi2.eval(s) == *b)
            .map(CurveParam::Exact)
            .collect();
    }
    // s² + 2s − a is irreducible over ℚ: either both roots are shared with
    // phi2 − b or neither is
    let p = param_poly(a);
    let target = &sys.phi2 - &UniPoly::constant(b.clone());
    let g = gcd(&p, &target);
    if g.degree() == Some(2) {
        isolate_real_roots(&p)
            .into_iter()
            .map(CurveParam::Enclosed)
            .collect()
    } else {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("target lies on the curve C")]
pub struct OnCurveError;

/// Parity of the number of real parameters s (with multiplicity) of
/// s² + 2s = a that satisfy phi2(s) > b.
pub fn side_of_curve(a: &Rational, b: &Rational) -> Result<Parity, OnCurveError> {
    if !on_curve(a, b).is_empty() {
        return Err(OnCurveError);
    }
    let sys = PinchukSystem::shared();
    let above = if *a < int(-1) {
        0
    } else if *a == int(-1) {
        // double parameter s = −1
        if sys.phi2.eval(&int(-1)) > *b {
            2
        } else {
            0
        }
    } else {
        let target = &sys.phi2 - &UniPoly::constant(b.clone());
        isolate_real_roots(&param_poly(a))
            .iter()
            .filter(|iv| sign_at_root(&target, iv) > 0)
            .count()
    };
    Ok(if above % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    OnCurveRegular,
    Exceptional,
    OffCurve,
}

impl CurveKind {
    pub fn label(self) -> &'static str {
        match self {
            CurveKind::OnCurveRegular => "ON_CURVE_REGULAR",
            CurveKind::Exceptional => "EXCEPTIONAL",
            CurveKind::OffCurve => "OFF_CURVE",
        }
    }

    /// Fiber size predicted for this kind.
    pub fn expected_fiber(self) -> usize {
        match self {
            CurveKind::OnCurveRegular => 1,
            CurveKind::Exceptional => 0,
            CurveKind::OffCurve => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyResult {
    pub kind: CurveKind,
    pub parity: Option<Parity>,
    pub params: Vec<CurveParam>,
}

pub fn classify(a: &Rational, b: &Rational) -> ClassifyResult {
    if is_exceptional(a, b) {
        return ClassifyResult {
            kind: CurveKind::Exceptional,
            parity: None,
            params: on_curve(a, b),
        };
    }
    let params = on_curve(a, b);
    if !params.is_empty() {
        return ClassifyResult {
            kind: CurveKind::OnCurveRegular,
            parity: None,
            params,
        };
    }
    ClassifyResult {
        kind: CurveKind::OffCurve,
        parity: Some(side_of_curve(a, b).expect("checked off the curve")),
        params,
    }
}

/// The point added by the Zariski closure of C: (phi1, phi2) reduced modulo
/// 75s² + 150s + 104. Panics if either remainder is not constant.
pub fn zariski_extra_point() -> (Rational, Rational) {
    let sys = PinchukSystem::shared();
    let m = UniPoly::from_ints(&[104, 150, 75]);
    let r1 = sys.phi1.rem(&m);
    let r2 = sys.phi2.rem(&m);
    assert!(r1.is_constant(), "phi1 mod m not constant: {r1}");
    assert!(r2.is_constant(), "phi2 mod m not constant: {r2}");
    (r1.coeff(0), r2.coeff(0))
}

/// Distinct real zeros of dΦ/ds: the gcd of both components' derivatives.
pub fn singular_parameters() -> Vec<IsolatingInterval> {
    let sys = PinchukSystem::shared();
    let g = gcd(&sys.phi1.derivative(), &sys.phi2.derivative());
    isolate_real_roots(&g)
}

/// Exact real root count of W (distinct).
pub fn w_real_roots(a: &Rational, b: &Rational) -> usize {
    count_real_roots(&build_w(a, b), &Range::Whole)
}

/// 2⁻³⁰, the default enclosure width.
pub fn default_eps() -> Rational {
    rat(1, 1 << 30)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps() -> Rational {
        default_eps()
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(&int(1)), (int(3), int(3142)));
        assert_eq!(phi(&int(-3)), (int(3), int(8406)));
        assert_eq!(phi(&int(0)), (int(0), int(0)));
        assert_eq!(phi(&int(-1)), (int(-1), int(0)));
    }

    #[test]
    fn w_shape() {
        let w = build_w(&rat(17, 5), &int(-9));
        assert_eq!(w.degree(), Some(6));
        assert_eq!(w.leading(), rat(-197, 4));
        assert_eq!(w_real_roots(&int(3), &int(0)), 2);
        // W(f̄, 0, 0) = f̄⁴(−197/4 f̄² + 104 f̄ − 63)
        let w00 = build_w(&int(0), &int(0));
        assert_eq!(w00.trailing_zeros(), 4);
        assert_eq!(squarefree_part(&w00).degree(), Some(3));
    }

    #[test]
    fn theorem_counts() {
        let r = real_fiber(&int(3), &int(0), &eps());
        assert_eq!(r.real_count, 2);
        assert_eq!(r.escaping_roots(), 0);
        assert_eq!(real_fiber(&int(3), &int(4000), &eps()).real_count, 2);
        let on = real_fiber(&int(3), &int(3142), &eps());
        assert_eq!(on.real_count, 1);
        assert_eq!(on.escaping.len(), 1);
        assert_eq!(on.escaping[0].exact_value(), Some(&int(2)));
        let z = real_fiber(&int(0), &int(0), &eps());
        assert_eq!((z.real_count, z.m0), (0, 4));
        assert_eq!(real_fiber(&int(-1), &int(0), &eps()).real_count, 0);
    }

    #[test]
    fn boundary_points() {
        // (0, −4): t̄ = ±2 on A₁, exact
        let r = real_fiber(&int(0), &int(-4), &eps());
        assert_eq!(r.boundary_contribution, 2);
        assert_eq!(r.real_count, 2);
        let pts: Vec<_> = r.preimages.iter().map(|p| p.point.clone()).collect();
        assert!(pts.contains(&PlanePoint::Exact(rat(-1, 2), int(-6))));
        // (−1, −2): t̄ = ±√2 on A₂, enclosed
        let r = real_fiber(&int(-1), &int(-2), &eps());
        assert_eq!(r.boundary_contribution, 2);
        for p in &r.preimages {
            let (pa, pb) = image_box(&p.point);
            assert!(pa.contains(&int(-1)) && pb.contains(&int(-2)));
            assert!(p.point.max_width() <= eps());
        }
    }

    #[test]
    fn complex_counts() {
        assert_eq!(complex_fiber_count(&int(3), &int(1)), 6);
        assert_eq!(complex_fiber_count(&int(0), &int(7)), 6);
        assert_eq!(complex_fiber_count(&int(0), &int(0)), 2);
    }

    #[test]
    fn curve_membership_and_sides() {
        assert_eq!(
            on_curve(&int(3), &int(3142)),
            vec![CurveParam::Exact(int(1))]
        );
        assert!(on_curve(&int(3), &int(0)).is_empty());
        assert!(on_curve(&int(-5), &int(0)).is_empty());
        assert_eq!(side_of_curve(&int(3), &int(0)), Ok(Parity::Even));
        assert_eq!(side_of_curve(&int(3), &int(4000)), Ok(Parity::Odd));
        assert_eq!(side_of_curve(&int(-5), &int(0)), Ok(Parity::Even));
        assert_eq!(side_of_curve(&int(3), &int(3142)), Err(OnCurveError));
    }

    #[test]
    fn irrational_parameters() {
        // a = 1: s = −1 ± √2, irrational; Φ of neither is rational in b
        // unless b is the common value, which cannot happen for both
        let (a, b) = (int(1), int(5));
        assert!(on_curve(&a, &b).is_empty());
        assert!(side_of_curve(&a, &b).is_ok());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&int(0), &int(0)).kind, CurveKind::Exceptional);
        assert_eq!(
            classify(&int(3), &int(3142)).kind,
            CurveKind::OnCurveRegular
        );
        let c = classify(&int(3), &int(4000));
        assert_eq!((c.kind, c.parity), (CurveKind::OffCurve, Some(Parity::Odd)));
    }

    #[test]
    fn zariski_point() {
        let (za, zb) = zariski_extra_point();
        assert_eq!(za, rat(-104, 75));
        // computed value, not a published one
        assert_eq!(zb, rat(4156048, 421875));
        assert!(on_curve(&za, &zb).is_empty());
    }

    #[test]
    fn singular_parameter_is_minus_one() {
        let ivs = singular_parameters();
        assert_eq!(ivs.len(), 1);
        assert_eq!(ivs[0].exact_value(), Some(&int(-1)));
    }

    #[test]
    fn discriminants() {
        assert!(!discriminant_at(&int(3), &int(3142)).is_zero());
        assert!(discriminant_at(&int(0), &int(7)).is_zero());
    }
}
