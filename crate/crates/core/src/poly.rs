//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`MultiPoly`] carries its own ordered variable list; terms are stored
//! in a map from exponent vectors to nonzero coefficients, so the zero
//! polynomial is the empty map and structural equality is mathematical
//! equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::upoly::UniPoly;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("polynomial involves variables other than `{0}`")]
    NotUnivariate(String),
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, Rational>,
}

fn var_list<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl MultiPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        MultiPoly {
            vars: var_list(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let i = p.index_of(name)?;
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.terms.insert(e, Rational::one());
        Ok(p)
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates and
    /// dropping zeros. Panics if an exponent vector has the wrong length.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn with_same_vars(&self, terms: BTreeMap<Exponents, Rational>) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, name: &str) -> Result<Option<u32>, PolyError> {
        let i = self.index_of(name)?;
        Ok(self.terms.keys().map(|e| e[i]).max())
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.with_same_vars(BTreeMap::new()));
        }
        let mut acc: HashMap<Exponents, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(self.with_same_vars(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.with_same_vars(BTreeMap::new());
        }
        self.with_same_vars(self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = MultiPoly::constant(&self.vars, Rational::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Self, PolyError> {
        let i = self.index_of(name)?;
        let mut out = self.with_same_vars(BTreeMap::new());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[i].into()));
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger variable list. Every current
    /// variable that actually occurs must appear in `vars`.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Self, PolyError> {
        let target = var_list(vars);
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|e| e[i] > 0);
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None if used => return Err(PolyError::UnknownVariable(v.clone())),
                None => map.push(None),
            }
        }
        let mut out = MultiPoly {
            vars: target.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    e2[j] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Exact value at a point; every variable of the polynomial must be bound.
    /// Bindings for names outside the variable list are ignored.
    pub fn evaluate(&self, point: &[(&str, Rational)]) -> Result<Rational, PolyError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            let val = point
                .iter()
                .find(|(n, _)| *n == v)
                .map(|(_, r)| r.clone())
                .ok_or_else(|| PolyError::UnboundVariable(v.clone()))?;
            values.push(val);
        }
        Ok(self.evaluate_slice(&values))
    }

    /// Evaluation with values given in variable-list order.
    pub fn evaluate_slice(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.vars.len());
        let mut cache: Vec<Vec<Rational>> = values
            .iter()
            .map(|v| vec![Rational::one(), v.clone()])
            .collect();
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= k as usize {
                    let next = powers.last().unwrap() * &values[i];
                    powers.push(next);
                }
                term *= &powers[k as usize];
            }
            sum += term;
        }
        sum
    }

    /// Composes: each bound variable is replaced by its polynomial.
    ///
    /// The result lives over the unbound variables of `self` (in their
    /// original order) followed by the variables of the replacement
    /// polynomials that are not already present, in order of first
    /// appearance.
    pub fn substitute(&self, bindings: &[(&str, &MultiPoly)]) -> Result<MultiPoly, PolyError> {
        for (name, _) in bindings {
            self.index_of(name)?;
        }
        let bound: Vec<Option<&MultiPoly>> = self
            .vars
            .iter()
            .map(|v| bindings.iter().find(|(n, _)| *n == v).map(|(_, p)| *p))
            .collect();
        let mut out_vars: Vec<String> = self
            .vars
            .iter()
            .zip(&bound)
            .filter(|(_, b)| b.is_none())
            .map(|(v, _)| v.clone())
            .collect();
        for (_, p) in bindings {
            for v in p.vars.iter() {
                if !out_vars.contains(v) {
                    out_vars.push(v.clone());
                }
            }
        }
        // lift everything into the output ring
        let lifted: Vec<Option<MultiPoly>> = bound
            .iter()
            .map(|b| b.map(|p| p.with_vars(&out_vars)).transpose())
            .collect::<Result<_, _>>()?;
        let passthrough: Vec<Option<usize>> = self
            .vars
            .iter()
            .zip(&bound)
            .map(|(v, b)| match b {
                None => out_vars.iter().position(|o| o == v),
                Some(_) => None,
            })
            .collect();

        let mut power_cache: Vec<Vec<MultiPoly>> = lifted
            .iter()
            .map(|l| match l {
                Some(p) => vec![MultiPoly::constant(&out_vars, Rational::one()), p.clone()],
                None => Vec::new(),
            })
            .collect();
        let mut result = MultiPoly::zero(&out_vars);
        let result_vars = result.vars.clone();
        for (e, c) in &self.terms {
            let mut mono = vec![0u32; out_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = passthrough[i] {
                    mono[j] += k;
                }
            }
            let mut term = MultiPoly {
                vars: result_vars.clone(),
                terms: BTreeMap::from([(mono, c.clone())]),
            };
            for (i, &k) in e.iter().enumerate() {
                if k == 0 || lifted[i].is_none() {
                    continue;
                }
                let cache = &mut power_cache[i];
                while cache.len() <= k as usize {
                    let next = &(cache.last().unwrap().clone()) * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            result = &result + &term;
        }
        Ok(result)
    }

    /// Splits into coefficients of powers of `name` (index = power). The
    /// coefficients live over the remaining variables.
    pub fn coefficients_in(&self, name: &str) -> Result<Vec<MultiPoly>, PolyError> {
        let i = self.index_of(name)?;
        let rest: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let deg = self.degree_in(name)?.unwrap_or(0) as usize;
        let mut coeffs = vec![MultiPoly::zero(&rest); deg + 1];
        let rest_vars = coeffs[0].vars.clone();
        for c in coeffs.iter_mut() {
            c.vars = rest_vars.clone();
        }
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2.remove(i) as usize;
            coeffs[k].add_term(e2, c.clone());
        }
        Ok(coeffs)
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in): the variable
    /// `name` is inserted at position `index` of the coefficient ring.
    pub fn from_coefficients(coeffs: &[MultiPoly], name: &str, index: usize) -> MultiPoly {
        let base: Vec<String> = coeffs.first().map(|c| c.vars.to_vec()).unwrap_or_default();
        let mut vars = base.clone();
        vars.insert(index, name.to_string());
        let mut out = MultiPoly::zero(&vars);
        for (k, c) in coeffs.iter().enumerate() {
            assert_eq!(c.vars.as_ref(), base.as_slice());
            for (e, v) in &c.terms {
                let mut e2 = e.clone();
                e2.insert(index, k as u32);
                out.add_term(e2, v.clone());
            }
        }
        out
    }

    /// Univariate view; all other variables must be absent from every term.
    pub fn to_univariate(&self, name: &str) -> Result<UniPoly, PolyError> {
        let i = self.index_of(name)?;
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return Err(PolyError::NotUnivariate(name.to_string()));
            }
            let k = e[i] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_univariate<S: AsRef<str>>(
        p: &UniPoly,
        vars: &[S],
        name: &str,
    ) -> Result<Self, PolyError> {
        let mut out = Self::zero(vars);
        let i = out.index_of(name)?;
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; out.vars.len()];
            e[i] = k as u32;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `InexactDivision` when the
    /// divisor does not divide. Uses lexicographic leading terms.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(divisor)?;
        let (lead_e, lead_c) = divisor
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = self.with_same_vars(BTreeMap::new());
        while let Some((e, c)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return Err(PolyError::InexactDivision);
            }
            let qe: Exponents = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = c / &lead_c;
            let mono = MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(qe.clone(), qc.clone())]),
            };
            rem = &rem - &(&mono * divisor);
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Terms in graded-lex order: higher total degree first, ties broken by
    /// lexicographically larger exponent vectors first.
    pub fn graded_lex_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

fn fmt_coefficient(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.graded_lex_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                factors.push(fmt_coefficient(&mag));
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

// Operator forms panic on variable-list mismatch; use the `try_*` methods
// where the lists are not known to agree.
impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("MultiPoly + MultiPoly")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("MultiPoly - MultiPoly")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("MultiPoly * MultiPoly")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
