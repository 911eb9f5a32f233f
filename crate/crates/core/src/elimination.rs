//! GCD, square-free part, resultants and discriminants.
//!
//! Resultants use the subresultant PRS and work over any ring with exact
//! division ([`ExactRing`]), so the same code handles rational univariate
//! polynomials and polynomials whose coefficients are themselves
//! multivariate. A Bareiss-style determinant of the Sylvester matrix is kept
//! alongside as an independent check.

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::poly::{MultiPoly, PolyError};
use crate::upoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EliminationError {
    #[error("polynomial has degree {degree} in `{var}`, need at least {needed}")]
    DegenerateDegree {
        var: String,
        degree: usize,
        needed: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Commutative ring operations needed by the resultant code. `exact_div` is
/// only called when the quotient is known to exist.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn exact_div(&self, o: &Self) -> Self;

    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }

    fn pow(&self, n: usize) -> Self {
        let mut out = self.one_like();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

impl ExactRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(self.vars(), Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn exact_div(&self, o: &Self) -> Self {
        MultiPoly::exact_div(self, o).expect("subresultant division must be exact")
    }
}

fn trim<R: ExactRing>(mut p: Vec<R>) -> Vec<R> {
    while p.last().is_some_and(|c| c.is_zero_elem()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder: lc(b)^(deg a − deg b + 1) · a mod b.
fn pseudo_rem<R: ExactRing>(a: &[R], b: &[R]) -> Vec<R> {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut r: Vec<R> = a.to_vec();
    let mut steps = 0usize;
    let delta = a.len() - 1 - db;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lead = r.last().unwrap().clone();
        let mut next: Vec<R> = r.iter().map(|c| c.mul(&lc)).collect();
        for (j, bc) in b.iter().enumerate() {
            next[k + j] = next[k + j].sub(&lead.mul(bc));
        }
        next.pop();
        r = trim(next);
        steps += 1;
    }
    let extra = lc.pow(delta + 1 - steps);
    trim(r.into_iter().map(|c| c.mul(&extra)).collect())
}

/// Resultant of two coefficient vectors (lowest degree first), both of
/// positive degree. Subresultant PRS.
pub fn resultant_prs<R: ExactRing>(a: &[R], b: &[R]) -> R {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    assert!(
        a.len() >= 2 && b.len() >= 2,
        "resultant needs positive degrees"
    );
    let unit = a[0].one_like();
    let mut s = unit.clone();
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = s.neg();
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = unit.clone();
    let mut h = unit.clone();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = s.neg();
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return unit.zero_like();
        }
        a = b;
        let denom = g.mul(&h.pow(delta));
        b = r.iter().map(|c| c.exact_div(&denom)).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1))
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = b[0].clone();
            let val = lb.pow(da).exact_div(&h.pow(da - 1));
            return s.mul(&val);
        }
    }
}

/// Sylvester matrix of `a` (degree m) and `b` (degree n), (m+n)×(m+n).
pub fn sylvester_matrix<R: ExactRing>(a: &[R], b: &[R]) -> Vec<Vec<R>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let zero = a[0].zero_like();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_determinant<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    let one = m[0][0].one_like();
    let mut sign_flip = false;
    let mut prev = one.clone();
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return one.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

pub fn resultant_sylvester<R: ExactRing>(a: &[R], b: &[R]) -> R {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    assert!(
        a.len() >= 2 && b.len() >= 2,
        "resultant needs positive degrees"
    );
    bareiss_determinant(sylvester_matrix(&a, &b))
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(p: &UniPoly, q: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (p.monic(), q.monic());
    while !b.is_zero() {
        let r = a.rem(&b).monic();
        a = b;
        b = r;
    }
    a.monic()
}

/// p / gcd(p, p'), monic. Panics on the zero polynomial.
pub fn squarefree_part(p: &UniPoly) -> UniPoly {
    assert!(!p.is_zero(), "square-free part of zero");
    let g = gcd(p, &p.derivative());
    p.exact_div(&g).expect("gcd divides").monic()
}

pub fn is_squarefree(p: &UniPoly) -> bool {
    gcd(p, &p.derivative()).is_constant()
}

pub fn resultant_uni(p: &UniPoly, q: &UniPoly) -> Result<Rational, EliminationError> {
    for f in [p, q] {
        let d = f.degree().unwrap_or(0);
        if d == 0 {
            return Err(EliminationError::DegenerateDegree {
                var: "x".into(),
                degree: d,
                needed: 1,
            });
        }
    }
    Ok(resultant_prs(p.coeffs(), q.coeffs()))
}

/// disc(p) = (−1)^(n(n−1)/2) · res(p, p′) / lc(p).
pub fn discriminant_uni(p: &UniPoly) -> Result<Rational, EliminationError> {
    let n = p.degree().unwrap_or(0);
    if n < 2 {
        return Err(EliminationError::DegenerateDegree {
            var: "x".into(),
            degree: n,
            needed: 2,
        });
    }
    let r = resultant_prs(p.coeffs(), p.derivative().coeffs());
    let d = r / p.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Resultant with respect to `var`; the result lives over the other
/// variables, in their original order.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, EliminationError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VariableMismatch {
            left: p.vars().to_vec(),
            right: q.vars().to_vec(),
        }
        .into());
    }
    let pc = p.coefficients_in(var)?;
    let qc = q.coefficients_in(var)?;
    for (poly, cs) in [(p, &pc), (q, &qc)] {
        let d = poly.degree_in(var)?.unwrap_or(0) as usize;
        if d == 0 || cs.len() < 2 {
            return Err(EliminationError::DegenerateDegree {
                var: var.into(),
                degree: d,
                needed: 1,
            });
        }
    }
    Ok(resultant_prs(&pc, &qc))
}

/// Symbolic discriminant with respect to `var`, same convention as
/// [`discriminant_uni`].
pub fn discriminant(p: &MultiPoly, var: &str) -> Result<MultiPoly, EliminationError> {
    let n = p.degree_in(var)?.unwrap_or(0) as usize;
    if n < 2 {
        return Err(EliminationError::DegenerateDegree {
            var: var.into(),
            degree: n,
            needed: 2,
        });
    }
    let dp = p.partial_derivative(var)?;
    let res = resultant(p, &dp, var)?;
    let lc = p.coefficients_in(var)?.pop().unwrap();
    let d = res.exact_div(&lc)?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Which factor of f̄(f̄ − h̄(h̄+1)) vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BFactor {
    FbarZero,
    FbarEqualsHbarHbarPlusOne,
}

pub fn b_membership(fbar: &Rational, hbar: &Rational) -> Option<BFactor> {
    if fbar.is_zero() {
        Some(BFactor::FbarZero)
    } else if *fbar == hbar * (hbar + Rational::one()) {
        Some(BFactor::FbarEqualsHbarHbarPlusOne)
    } else {
        None
    }
}

/// Q(f̄,h̄,q̄), W(f̄,a,b) = Q(f̄,a−f̄,b) and r(f̄,a) = f̄ − (a−f̄)(a−f̄+1).
#[derive(Debug, Clone)]
pub struct EliminationData {
    pub q: MultiPoly,
    pub w: MultiPoly,
    pub r: MultiPoly,
}

pub const Q_VARS: [&str; 3] = ["fb", "hb", "qb"];
pub const W_VARS: [&str; 3] = ["fb", "a", "b"];

impl EliminationData {
    /// `u` is u(f,h) over the variables `["f", "h"]`.
    pub fn from_u(u: &MultiPoly) -> Self {
        let fb = MultiPoly::var(&Q_VARS, "fb").unwrap();
        let hb = MultiPoly::var(&Q_VARS, "hb").unwrap();
        let qb = MultiPoly::var(&Q_VARS, "qb").unwrap();
        let one = MultiPoly::constant(&Q_VARS, Rational::one());
        let six = MultiPoly::constant(&Q_VARS, Rational::from_integer(6.into()));
        let u_bar = u
            .substitute(&[("f", &fb), ("h", &hb)])
            .unwrap()
            .with_vars(&Q_VARS)
            .unwrap();
        let hh1 = &hb * &(&hb + &one);
        let q = &(&(&fb * &fb) * &(&qb - &u_bar))
            + &(&(&(&hb * &hb) * &(&fb - &hh1))
                * &(&fb + &(&(&(&six * &fb) - &hb) * &(&hb + &one))));

        let a = MultiPoly::var(&W_VARS, "a").unwrap();
        let fw = MultiPoly::var(&W_VARS, "fb").unwrap();
        let bw = MultiPoly::var(&W_VARS, "b").unwrap();
        let a_minus_f = &a - &fw;
        let w = q
            .substitute(&[("hb", &a_minus_f), ("qb", &bw)])
            .unwrap()
            .with_vars(&W_VARS)
            .unwrap();

        let r_vars = ["fb", "a"];
        let fr = MultiPoly::var(&r_vars, "fb").unwrap();
        let ar = MultiPoly::var(&r_vars, "a").unwrap();
        let one_r = MultiPoly::constant(&r_vars, Rational::one());
        let hr = &ar - &fr;
        let r = &fr - &(&hr * &(&hr + &one_r));
        EliminationData { q, w, r }
    }

    /// W at a rational target, as a polynomial in f̄.
    pub fn w_at(&self, a: &Rational, b: &Rational) -> UniPoly {
        let cs = self.w.coefficients_in("fb").unwrap();
        UniPoly::new(
            cs.iter()
                .map(|c| c.evaluate(&[("a", a.clone()), ("b", b.clone())]).unwrap())
                .collect(),
        )
    }

    /// r at a rational a, as a polynomial in f̄.
    pub fn r_at(&self, a: &Rational) -> UniPoly {
        let cs = self.r.coefficients_in("fb").unwrap();
        UniPoly::new(
            cs.iter()
                .map(|c| c.evaluate(&[("a", a.clone())]).unwrap())
                .collect(),
        )
    }
}
