//! Exact signs at rational points x = X/d, y = Y/d using integer arithmetic
//! only.
//!
//! With D = d¹⁰ every quantity of the map has an integer numerator:
//! t = T/d², xt+1 = M/d³, f = Fn/D, h = Hn/D, p = An/D, q = Qn/(4D⁴).
//! The curve test uses R(a, b) = Res_s(s²+2s−a, phi2(s)−b), which is the
//! product over both parameter roots s = −1 ± √(1+a) of phi2(s) − b.
//! Writing phi2(−1+w) = E(w²) + w·O(w²) and c = 1+a, α = E(c) − b, β = O(c):
//! R = α² − β²c, and the per-root factors are α ± β√c.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{common_denominator, Rational};
use crate::upoly::UniPoly;

fn sgn(v: &BigInt) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Signs of R∘F and of its two factors at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveSigns {
    /// sign of R(F(z)).
    pub r: i8,
    /// sign of phi2(s₊) − q with s₊ = −1 + √c; 0 if c < 0.
    pub plus: i8,
    /// sign of phi2(s₋) − q with s₋ = −1 − √c; 0 if c < 0.
    pub minus: i8,
    /// sign of p(z).
    pub a: i8,
    /// sign of c = 1 + p(z).
    pub c: i8,
}

#[derive(Debug, Clone)]
pub struct PreimageSigns {
    /// L·E and L·O with integer coefficients, lowest degree first.
    e: Vec<BigInt>,
    o: Vec<BigInt>,
    /// Common denominator of E, O and 1/4.
    l: BigInt,
}

fn split_even_odd(phi2: &UniPoly) -> (UniPoly, UniPoly) {
    let shifted = phi2.compose(&UniPoly::from_ints(&[-1, 1]));
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (k, c) in shifted.coeffs().iter().enumerate() {
        if k % 2 == 0 {
            even.push(c.clone());
        } else {
            odd.push(c.clone());
        }
    }
    (UniPoly::new(even), UniPoly::new(odd))
}

fn scale_to_ints(p: &UniPoly, l: &BigInt) -> Vec<BigInt> {
    p.coeffs()
        .iter()
        .map(|c| {
            let v = c * Rational::from_integer(l.clone());
            assert!(v.is_integer());
            v.to_integer()
        })
        .collect()
}

/// Σ cₖ·Cⁿᵏ·D^(deg−k): the homogenized value D^deg · P(Cn/D).
fn homogeneous(coeffs: &[BigInt], cn: &BigInt, d: &BigInt, deg: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut cpow = BigInt::one();
    let mut dpows = vec![BigInt::one()];
    for _ in 0..deg {
        let next = dpows.last().unwrap() * d;
        dpows.push(next);
    }
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            total += c * &cpow * &dpows[deg - k];
        }
        cpow *= cn;
    }
    total
}

impl PreimageSigns {
    pub fn new(phi2: &UniPoly) -> Self {
        let (e, o) = split_even_odd(phi2);
        let four = Rational::from_integer(4.into());
        let quarter = four.recip();
        let l = common_denominator(e.coeffs().iter().chain(o.coeffs()).chain([&quarter]));
        PreimageSigns {
            e: scale_to_ints(&e, &l),
            o: scale_to_ints(&o, &l),
            l,
        }
    }

    /// Degree used to homogenize E and O (the larger of the two).
    fn hom_degree(&self) -> usize {
        self.e.len().max(self.o.len()).saturating_sub(1)
    }

    pub fn at(&self, x_num: &BigInt, y_num: &BigInt, d: &BigInt) -> CurveSigns {
        let n = MapNumerators::new(x_num, y_num, d);
        let k = self.hom_degree();
        // c = Cn / D
        let cn = &n.an + &n.dd;
        // q = Qn / (4 D⁴); bring α, β to the common scale L·D^k
        // (k ≥ 4 is needed so that b's denominator clears)
        let k = k.max(4);
        let lq = (&self.l / BigInt::from(4)) * &n.qn * n.dd.pow((k - 4) as u32);
        let alpha = homogeneous(&self.e, &cn, &n.dd, k) - lq;
        let beta = homogeneous(&self.o, &cn, &n.dd, k);
        // R·(L D^k)² · D = D α² − β² Cn
        let a2 = &n.dd * &alpha * &alpha;
        let b2c = &beta * &beta * &cn;
        let r = sgn(&(&a2 - &b2c));
        let c_sign = sgn(&cn);
        let (plus, minus) = if c_sign < 0 {
            (0, 0)
        } else {
            let (sa, sb) = (sgn(&alpha), sgn(&beta));
            let cmp = a2.cmp(&b2c);
            (
                sign_of_sum_with_root(sa, sb, cmp, c_sign),
                sign_of_sum_with_root(sa, -sb, cmp, c_sign),
            )
        };
        CurveSigns {
            r,
            plus,
            minus,
            a: sgn(&n.an),
            c: c_sign,
        }
    }
}

/// Sign of u + v√c (c ≥ 0) from sign(u), sign(v), sign(c) and the
/// comparison of u² with v²c.
fn sign_of_sum_with_root(su: i8, sv: i8, cmp: Ordering, c_sign: i8) -> i8 {
    if c_sign == 0 || sv == 0 || su == sv {
        return if su != 0 {
            su
        } else if c_sign == 0 {
            0
        } else {
            sv
        };
    }
    if su == 0 {
        return sv;
    }
    match cmp {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => 0,
    }
}

/// Integer numerators of the map at (X/d, Y/d).
pub struct MapNumerators {
    pub tn: BigInt,
    pub fnum: BigInt,
    pub hn: BigInt,
    pub an: BigInt,
    pub qn: BigInt,
    /// D = d¹⁰.
    pub dd: BigInt,
    /// xt + 1 = M/d³.
    pub m: BigInt,
    /// t² + y = S/d⁴.
    pub s: BigInt,
}

impl MapNumerators {
    pub fn new(x: &BigInt, y: &BigInt, d: &BigInt) -> Self {
        let d2 = d * d;
        let d3 = &d2 * d;
        let t = x * y - &d2;
        let m = x * &t + &d3;
        let s = &t * &t + y * &d3;
        let dd = d3.pow(3) * d;
        let d5 = &d2 * &d3;
        let fnum = &m * &m * &s;
        let hn = &t * &m * &d5;
        let tn = &t * d2.pow(4);
        let an = &fnum + &hn;
        let f = &fnum;
        let h = &hn;
        let dd2 = &dd * &dd;
        let u = f
            * (BigInt::from(75) * f * f * f
                + BigInt::from(300) * f * f * h
                + BigInt::from(450) * f * h * h
                + BigInt::from(276) * f * f * &dd
                + BigInt::from(828) * f * h * &dd
                + BigInt::from(48) * h * h * &dd
                + BigInt::from(364) * f * &dd2
                + BigInt::from(48) * h * &dd2);
        let qn =
            -BigInt::from(4) * &dd2 * &tn * &tn - BigInt::from(24) * &dd * &tn * h * (h + &dd) + u;
        MapNumerators {
            tn,
            fnum,
            hn,
            an,
            qn,
            dd,
            m,
            s,
        }
    }
}

/// Signs of the two factors xt+1 and t²+y of g = f − h(h+1) at (X/d, Y/d);
/// d > 0.
pub fn g_factor_signs(x: &BigInt, y: &BigInt, d: &BigInt) -> (i8, i8) {
    let d2 = d * d;
    let d3 = &d2 * d;
    let t = x * y - &d2;
    let m = x * &t + &d3;
    let s = &t * &t + y * &d3;
    (sgn(&m), sgn(&s))
}

pub fn g_sign(x: &BigInt, y: &BigInt, d: &BigInt) -> i8 {
    let (m, s) = g_factor_signs(x, y, d);
    m * s
}

/// Integer coordinates of a rational point over a common positive
/// denominator.
pub fn common_form(x: &Rational, y: &Rational) -> (BigInt, BigInt, BigInt) {
    let d = x.denom().lcm(y.denom());
    let xn = x.numer() * (&d / x.denom());
    let yn = y.numer() * (&d / y.denom());
    (xn, yn, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, sign};
    use crate::elimination::resultant_prs;
    use crate::system::PinchukSystem;

    fn r_exact(a: &Rational, b: &Rational) -> Rational {
        let sys = PinchukSystem::shared();
        let p = UniPoly::new(vec![-a.clone(), int(2), int(1)]);
        let q = &sys.phi2 - &UniPoly::constant(b.clone());
        resultant_prs(p.coeffs(), q.coeffs())
    }

    #[test]
    fn matches_rational_evaluation() {
        let sys = PinchukSystem::shared();
        let ps = PreimageSigns::new(&sys.phi2);
        let pts = [
            (rat(1, 2), rat(-3, 7)),
            (int(1), int(3)),
            (rat(-7, 10), rat(-9, 4)),
            (rat(-29, 100), rat(-33, 100)),
            (rat(18, 25), rat(43, 100)),
            (int(-2), int(-1)),
            (rat(-1, 2), int(-6)),
            (rat(-19, 2), rat(-1, 10)),
        ];
        for (x, y) in pts {
            let (a, b) = PinchukSystem::apply_f(&x, &y);
            let (xn, yn, d) = common_form(&x, &y);
            let got = ps.at(&xn, &yn, &d);
            assert_eq!(got.r, sign(&r_exact(&a, &b)), "R sign at ({x}, {y})");
            assert_eq!(got.a, sign(&a));
            let n = MapNumerators::new(&xn, &yn, &d);
            let dd = Rational::from_integer(n.dd.clone());
            assert_eq!(Rational::from_integer(n.an.clone()) / &dd, a);
            assert_eq!(
                Rational::from_integer(n.qn.clone()) / (dd.pow(4) * int(4)),
                b
            );
            if a > int(-1) {
                let sys = PinchukSystem::shared();
                let target = &sys.phi2 - &UniPoly::constant(b.clone());
                let params = crate::roots::isolate_real_roots(&UniPoly::new(vec![
                    -a.clone(),
                    int(2),
                    int(1),
                ]));
                assert_eq!(got.minus, crate::roots::sign_at_root(&target, &params[0]));
                assert_eq!(got.plus, crate::roots::sign_at_root(&target, &params[1]));
            }
            // R < 0 exactly when the side parity is odd
            if got.r != 0 {
                let parity = crate::fiber::side_of_curve(&a, &b).unwrap();
                assert_eq!(got.r < 0, parity == crate::fiber::Parity::Odd);
            }
        }
    }

    #[test]
    fn even_odd_split() {
        let sys = PinchukSystem::shared();
        let (e, o) = split_even_odd(&sys.phi2);
        for s in [int(1), int(-3), rat(-1, 2), rat(1, 3)] {
            let w = &s + int(1);
            let c = &w * &w;
            assert_eq!(e.eval(&c) + &w * o.eval(&c), sys.phi2.eval(&s));
        }
    }

    #[test]
    fn sum_with_root() {
        // (u, v, c) with c a perfect square so the oracle is exact
        for (u, v, c) in [
            (3, -2, 4),
            (3, -1, 4),
            (-5, 2, 9),
            (0, 1, 4),
            (2, -1, 4),
            (-1, 0, 9),
            (4, 7, 0),
        ] {
            let root = crate::arith::rational_sqrt(&int(c)).unwrap();
            let want = sign(&(int(u) + int(v) * root));
            let cmp = (u * u).cmp(&(v * v * c));
            let got = sign_of_sum_with_root(sign(&int(u)), sign(&int(v)), cmp, sign(&int(c)));
            assert_eq!(got, want, "u={u} v={v} c={c}");
        }
    }

    #[test]
    fn g_sign_is_product_of_factors() {
        let sys = PinchukSystem::shared();
        for (x, y) in [
            (rat(1, 3), rat(5, 2)),
            (int(-2), int(-1)),
            (rat(-7, 4), rat(2, 9)),
        ] {
            let (xn, yn, d) = common_form(&x, &y);
            let g = sys.g.evaluate_slice(&[x.clone(), y.clone()]);
            assert_eq!(g_sign(&xn, &yn, &d), sign(&g));
        }
    }
}
