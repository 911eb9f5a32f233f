//! Closed intervals with rational endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::poly::MultiPoly;
use crate::upoly::UniPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// +1 / −1 when the whole interval has that sign, 0 otherwise.
    pub fn certain_sign(&self) -> i8 {
        if self.lo.is_positive() {
            1
        } else if self.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Interval::new(Rational::zero(), self.lo.abs().max(self.hi.abs()))
        }
    }

    pub fn pow(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(Rational::one());
        }
        let base = if n.is_multiple_of(2) {
            self.abs()
        } else {
            self.clone()
        };
        // x^n is monotone on `base` for odd n, and on the nonnegative abs for even n
        Interval::new(
            crate::arith::pow(&base.lo, n),
            crate::arith::pow(&base.hi, n),
        )
    }

    /// `None` if the divisor interval contains zero.
    pub fn checked_div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let inv = Interval::new(rhs.hi.recip(), rhs.lo.recip());
        Some(self * &inv)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul<&Rational> for &Interval {
    type Output = Interval;
    fn mul(self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }
}

/// Horner-form enclosure of `p` over `x`.
pub fn eval_uni(p: &UniPoly, x: &Interval) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for c in p.coeffs().iter().rev() {
        let prod = &acc * x;
        acc = Interval::new(&prod.lo + c, &prod.hi + c);
    }
    acc
}

/// Term-by-term enclosure of `p` over a box, given one interval per variable
/// in the polynomial's variable order.
pub fn eval_multi(p: &MultiPoly, boxes: &[Interval]) -> Interval {
    assert_eq!(boxes.len(), p.vars().len());
    let mut powers: Vec<Vec<Option<Interval>>> = vec![Vec::new(); boxes.len()];
    let mut acc = Interval::point(Rational::zero());
    for (e, c) in p.terms() {
        let mut term = Interval::point(c.clone());
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let slot = &mut powers[i];
            if slot.len() <= k as usize {
                slot.resize(k as usize + 1, None);
            }
            let pw = slot[k as usize]
                .get_or_insert_with(|| boxes[i].pow(k))
                .clone();
            term = &term * &pw;
        }
        acc = &acc + &term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn even_power_across_zero() {
        let x = Interval::new(int(-2), int(1));
        assert_eq!(x.pow(2), Interval::new(int(0), int(4)));
        assert_eq!(x.pow(3), Interval::new(int(-8), int(1)));
    }

    #[test]
    fn horner_encloses_values() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let x = Interval::new(rat(7, 5), rat(3, 2));
        let y = eval_uni(&p, &x);
        assert!(y.contains(&p.eval(&rat(7, 5))));
        assert!(y.contains(&p.eval(&rat(3, 2))));
        assert!(y.contains_zero());
        assert_eq!(
            eval_uni(&p, &Interval::new(int(2), int(3))).certain_sign(),
            1
        );
    }

    #[test]
    fn division_rejects_zero() {
        let a = Interval::new(int(1), int(2));
        assert!(a.checked_div(&Interval::new(int(-1), int(1))).is_none());
        assert_eq!(
            a.checked_div(&Interval::new(int(2), int(4))).unwrap(),
            Interval::new(rat(1, 4), int(1))
        );
    }
}
