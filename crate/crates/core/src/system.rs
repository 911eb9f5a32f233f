//! The polynomials t, h, f, p, q, u of the map, the identities they satisfy,
//! and the auxiliary maps ψ, G and the curves A₁, A₂.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::arith::{int, rat, Rational};
use crate::elimination::{b_membership, BFactor, EliminationData};
use crate::parse::parse_poly;
use crate::poly::MultiPoly;
use crate::upoly::UniPoly;

pub const XY: [&str; 2] = ["x", "y"];
pub const FH: [&str; 2] = ["f", "h"];

const U_TEXT: &str =
    "1/4*f*(75*f^3 + 300*f^2*h + 450*f*h^2 + 276*f^2 + 828*f*h + 48*h^2 + 364*f + 48*h)";

#[derive(Debug, Clone)]
pub struct PinchukSystem {
    pub t: MultiPoly,
    pub h: MultiPoly,
    pub f: MultiPoly,
    pub p: MultiPoly,
    pub q: MultiPoly,
    /// u(f, h), over the variables `f`, `h`.
    pub u: MultiPoly,
    pub jac: MultiPoly,
    /// f − h(h+1).
    pub g: MultiPoly,
    pub elim: EliminationData,
    /// s²+2s and u(s²+s, s).
    pub phi1: UniPoly,
    pub phi2: UniPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("f̄ = 0: point lies on B")]
    FbarZero,
    #[error("f̄ = h̄(h̄+1): point lies on B")]
    FbarEqualsHbarHbarPlusOne,
    #[error("curve parameter t̄ = 0 is excluded")]
    ZeroParameter,
}

impl From<BFactor> for DomainError {
    fn from(b: BFactor) -> Self {
        match b {
            BFactor::FbarZero => DomainError::FbarZero,
            BFactor::FbarEqualsHbarHbarPlusOne => DomainError::FbarEqualsHbarHbarPlusOne,
        }
    }
}

pub fn u_poly() -> MultiPoly {
    parse_poly(U_TEXT, &FH).unwrap()
}

/// u(f, h) at rationals.
pub fn u_value(f: &Rational, h: &Rational) -> Rational {
    let c = |n: i64| int(n);
    let inner = c(75) * f * f * f
        + c(300) * f * f * h
        + c(450) * f * h * h
        + c(276) * f * f
        + c(828) * f * h
        + c(48) * h * h
        + c(364) * f
        + c(48) * h;
    rat(1, 4) * f * inner
}

impl PinchukSystem {
    pub fn build() -> Self {
        let x = MultiPoly::var(&XY, "x").unwrap();
        let y = MultiPoly::var(&XY, "y").unwrap();
        let one = MultiPoly::constant(&XY, Rational::one());
        let t = &(&x * &y) - &one;
        let xt1 = &(&x * &t) + &one;
        let h = &t * &xt1;
        let f = &(&xt1 * &xt1) * &(&(&t * &t) + &y);
        let p = &f + &h;
        let u = u_poly();
        let u_xy = u
            .substitute(&[("f", &f), ("h", &h)])
            .unwrap()
            .with_vars(&XY)
            .unwrap();
        let six = MultiPoly::constant(&XY, int(6));
        let q = &(&(-&(&t * &t)) - &(&(&(&six * &t) * &h) * &(&h + &one))) + &u_xy;
        let jac = &(&p.partial_derivative("x").unwrap() * &q.partial_derivative("y").unwrap())
            - &(&p.partial_derivative("y").unwrap() * &q.partial_derivative("x").unwrap());
        let g = &f - &(&h * &(&h + &one));
        let elim = EliminationData::from_u(&u);

        let s = UniPoly::x();
        let phi1 = UniPoly::from_ints(&[0, 2, 1]);
        let s2s = UniPoly::from_ints(&[0, 1, 1]);
        let phi2 = uni_u(&u, &s2s, &s);

        let sys = PinchukSystem {
            t,
            h,
            f,
            p,
            q,
            u,
            jac,
            g,
            elim,
            phi1,
            phi2,
        };
        assert_eq!(sys.t.total_degree(), Some(2));
        assert_eq!(sys.h.total_degree(), Some(5));
        assert_eq!(sys.f.total_degree(), Some(10));
        assert_eq!(sys.p.total_degree(), Some(10));
        assert_eq!(sys.q.total_degree(), Some(40));
        assert_eq!(sys.g.total_degree(), Some(7));
        assert!(!sys.jac.is_zero());
        sys
    }

    /// Process-wide instance, built on first use.
    pub fn shared() -> &'static PinchukSystem {
        static SYSTEM: OnceLock<PinchukSystem> = OnceLock::new();
        SYSTEM.get_or_init(PinchukSystem::build)
    }

    /// (t, h, f) at a rational point.
    pub fn thf(x: &Rational, y: &Rational) -> (Rational, Rational, Rational) {
        let one = Rational::one();
        let t = x * y - &one;
        let xt1 = x * &t + &one;
        let h = &t * &xt1;
        let f = &xt1 * &xt1 * (&t * &t + y);
        (t, h, f)
    }

    /// F = (p, q) at a rational point.
    pub fn apply_f(x: &Rational, y: &Rational) -> (Rational, Rational) {
        let (t, h, f) = Self::thf(x, y);
        let p = &f + &h;
        let q = -(&t * &t) - int(6) * &t * &h * (&h + Rational::one()) + u_value(&f, &h);
        (p, q)
    }

    /// (f, h) at a rational point.
    pub fn fh(x: &Rational, y: &Rational) -> (Rational, Rational) {
        let (_, h, f) = Self::thf(x, y);
        (f, h)
    }

    pub fn jacobian_at(&self, x: &Rational, y: &Rational) -> Rational {
        self.jac.evaluate_slice(&[x.clone(), y.clone()])
    }

    /// Exact check of jac > 0 on the (n+1)×(n+1) grid of [lo, hi]²;
    /// returns the minimum value and the number of nodes.
    pub fn jacobian_grid_min(&self, lo: &Rational, hi: &Rational, n: u32) -> (Rational, usize) {
        let step = (hi - lo) / int(n.into());
        // jac = sum_k c_k(x) y^k; fix x, then Horner in y
        let cy = self.jac.coefficients_in("y").unwrap();
        let mut min: Option<Rational> = None;
        let mut nodes = 0;
        for i in 0..=n {
            let x = lo + &step * int(i.into());
            let slice = UniPoly::new(
                cy.iter()
                    .map(|c| c.evaluate_slice(std::slice::from_ref(&x)))
                    .collect(),
            );
            for j in 0..=n {
                let y = lo + &step * int(j.into());
                let v = slice.eval(&y);
                nodes += 1;
                if min.as_ref().is_none_or(|m| v < *m) {
                    min = Some(v);
                }
            }
        }
        (min.unwrap(), nodes)
    }
}

/// u(a(s), b(s)) as a univariate polynomial.
fn uni_u(u: &MultiPoly, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut out = UniPoly::zero();
    for (e, c) in u.terms() {
        let term = &(&a.pow(e[0]) * &b.pow(e[1])) * &UniPoly::constant(c.clone());
        out = &out + &term;
    }
    out
}

/// ψ(f̄, h̄): the unique (x, y) with f = f̄, h = h̄, off B.
pub fn psi(fbar: &Rational, hbar: &Rational) -> Result<(Rational, Rational), DomainError> {
    if let Some(b) = b_membership(fbar, hbar) {
        return Err(b.into());
    }
    let one = Rational::one();
    let d = fbar - hbar * (hbar + &one);
    let x = (hbar + &one) * fbar / (&d * &d);
    let y = (fbar - hbar * hbar) * &d * &d / (fbar * fbar);
    Ok((x, y))
}

/// G(f̄, h̄) = (f̄ + h̄, u(f̄,h̄) − h̄²(f̄−h̄(h̄+1))(f̄+(6f̄−h̄)(h̄+1))/f̄²).
pub fn g_map(fbar: &Rational, hbar: &Rational) -> Result<(Rational, Rational), DomainError> {
    if fbar.is_zero() {
        return Err(DomainError::FbarZero);
    }
    let one = Rational::one();
    let a = fbar + hbar;
    let tail = hbar
        * hbar
        * (fbar - hbar * (hbar + &one))
        * (fbar + (int(6) * fbar - hbar) * (hbar + &one))
        / (fbar * fbar);
    Ok((a, u_value(fbar, hbar) - tail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ACurve {
    A1,
    A2,
}

impl ACurve {
    /// (x, y) at parameter t̄ ≠ 0.
    pub fn point(self, tbar: &Rational) -> Result<(Rational, Rational), DomainError> {
        if tbar.is_zero() {
            return Err(DomainError::ZeroParameter);
        }
        let one = Rational::one();
        Ok(match self {
            ACurve::A1 => (-tbar.recip(), -(tbar * (tbar + &one))),
            ACurve::A2 => (-(tbar + &one) / (tbar * tbar), -(tbar * tbar)),
        })
    }

    /// x = num/den, y as polynomials in t̄.
    fn parametrization(self) -> (UniPoly, UniPoly, UniPoly) {
        match self {
            ACurve::A1 => (
                UniPoly::from_ints(&[-1]),
                UniPoly::from_ints(&[0, 1]),
                UniPoly::from_ints(&[0, -1, -1]),
            ),
            ACurve::A2 => (
                UniPoly::from_ints(&[-1, -1]),
                UniPoly::from_ints(&[0, 0, 1]),
                UniPoly::from_ints(&[0, 0, -1]),
            ),
        }
    }

    /// P(x(t̄), y(t̄)) · den(t̄)^k with k = deg_x P, as a polynomial in t̄,
    /// together with den^k.
    pub fn pull_back(self, poly: &MultiPoly) -> (UniPoly, UniPoly) {
        let (xn, xd, y) = self.parametrization();
        let k = poly.degree_in("x").unwrap().unwrap_or(0);
        let mut out = UniPoly::zero();
        for (e, c) in poly.terms() {
            let term = &(&(&xn.pow(e[0]) * &xd.pow(k - e[0])) * &y.pow(e[1]))
                * &UniPoly::constant(c.clone());
            out = &out + &term;
        }
        (out, xd.pow(k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Remainder on failure, or a computed value worth reporting.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_zero(name: &str, remainder: &MultiPoly) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        passed: remainder.is_zero(),
        detail: if remainder.is_zero() {
            String::new()
        } else {
            truncate(remainder.to_string())
        },
    }
}

fn check_zero_uni(name: &str, remainder: &UniPoly, var: &str) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        passed: remainder.is_zero(),
        detail: if remainder.is_zero() {
            String::new()
        } else {
            truncate(remainder.display_in(var))
        },
    }
}

fn truncate(s: String) -> String {
    if s.len() > 400 {
        format!(
            "{}...",
            &s[..s.char_indices().nth(400).map_or(s.len(), |(i, _)| i)]
        )
    } else {
        s
    }
}

impl PinchukSystem {
    /// Expands every identity to zero.
    pub fn verify_identities(&self) -> IdentityReport {
        let mut checks = Vec::new();
        let one = MultiPoly::constant(&XY, Rational::one());

        // (h − t) f = h²(h + 1)
        let lhs = &(&self.h - &self.t) * &self.f;
        let rhs = &(&self.h * &self.h) * &(&self.h + &one);
        checks.push(check_zero("a: (h-t)f = h^2(h+1)", &(&lhs - &rhs)));

        // Q(f, h, q) = 0
        let qfhq = self
            .elim
            .q
            .substitute(&[("fb", &self.f), ("hb", &self.h), ("qb", &self.q)])
            .unwrap()
            .with_vars(&XY)
            .unwrap();
        checks.push(check_zero("b: Q(f,h,q) = 0", &qfhq));

        // A-curves
        let tsq = UniPoly::from_ints(&[0, 0, 1]);
        for (curve, label, h_target) in [(ACurve::A1, "A1", 0i64), (ACurve::A2, "A2", -1)] {
            let (qa, den) = curve.pull_back(&self.q);
            checks.push(check_zero_uni(
                &format!("c: q o {label} = -t^2"),
                &(&qa + &(&tsq * &den)),
                "t",
            ));
            let (fa, _) = curve.pull_back(&self.f);
            checks.push(check_zero_uni(&format!("c: f o {label} = 0"), &fa, "t"));
            let (ha, den) = curve.pull_back(&self.h);
            let target = &den * &UniPoly::from_ints(&[h_target]);
            checks.push(check_zero_uni(
                &format!("c: h o {label} = {h_target}"),
                &(&ha - &target),
                "t",
            ));
        }

        checks.push(self.check_phi_symmetry());
        checks.extend(self.check_w());

        // Q(0, h̄, b) = h̄⁴(h̄+1)²
        let zero = MultiPoly::zero::<&str>(&[]);
        let q0 = self.elim.q.substitute(&[("fb", &zero)]).unwrap();
        let target = parse_poly("hb^4*(hb+1)^2", q0.vars()).unwrap();
        checks.push(check_zero("f: Q(0,hb,qb) = hb^4(hb+1)^2", &(&q0 - &target)));

        IdentityReport { checks }
    }

    /// The constant c with Φ₂(s) − Φ₂(−2−s) = c(75s²+150s+104)(s+1)³, or
    /// `None` if the division is not exact with a nonzero constant quotient.
    pub fn phi_symmetry_constant(&self) -> Option<Rational> {
        let reflect = UniPoly::from_ints(&[-2, -1]);
        let diff = &self.phi2 - &self.phi2.compose(&reflect);
        let m = UniPoly::from_ints(&[104, 150, 75]);
        let cube = UniPoly::from_ints(&[1, 1]).pow(3);
        let quot = diff.exact_div(&(&m * &cube))?;
        (quot.degree() == Some(0)).then(|| quot.coeff(0))
    }

    fn check_phi_symmetry(&self) -> IdentityCheck {
        let c = self.phi_symmetry_constant();
        IdentityCheck {
            name: "d: phi2(s) - phi2(-2-s) = c(75s^2+150s+104)(s+1)^3".into(),
            passed: c.is_some(),
            detail: c
                .map(|c| format!("c = {}", crate::arith::to_exact_string(&c)))
                .unwrap_or_default(),
        }
    }

    fn check_w(&self) -> Vec<IdentityCheck> {
        let cs = self.elim.w.coefficients_in("fb").unwrap();
        let lead = cs.last().unwrap();
        let lead_ok = cs.len() == 7 && lead.is_constant() && lead.constant_term() == rat(-197, 4);
        let first = IdentityCheck {
            name: "e: leading fb-coefficient of W = -197/4".into(),
            passed: lead_ok,
            detail: if lead_ok {
                String::new()
            } else {
                format!("degree {}, leading {}", cs.len() - 1, lead)
            },
        };
        let zero = MultiPoly::zero::<&str>(&[]);
        let w0 = self.elim.w.substitute(&[("a", &zero)]).unwrap();
        let target = parse_poly("fb^2*(-197/4*fb^4 + 104*fb^3 - 63*fb^2 + b)", w0.vars()).unwrap();
        let second = check_zero(
            "e: W(fb,0,b) = fb^2(-197/4 fb^4 + 104 fb^3 - 63 fb^2 + b)",
            &(&w0 - &target),
        );
        vec![first, second]
    }
}
