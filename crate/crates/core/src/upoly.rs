//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{sign, Rational};

/// Coefficients lowest degree first; no trailing zeros, so the zero
/// polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    /// Sign as x → +∞ (`positive == true`) or x → −∞.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = sign(&self.leading());
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lc_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Quotient when `divisor` divides exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(Rational::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c.clone());
        }
        acc
    }

    /// Multiplicity of 0 as a root (number of vanishing low coefficients).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `x^k`; the low coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// 1 + max |cᵢ / cₙ|: every real root lies strictly inside (−M, M).
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mag_text = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match (k, mag.is_one()) {
                (0, _) => out.push_str(&mag_text),
                (1, true) => out.push_str(var),
                (1, false) => out.push_str(&format!("{mag_text}*{var}")),
                (_, true) => out.push_str(&format!("{var}^{k}")),
                (_, false) => out.push_str(&format!("{mag_text}*{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}
