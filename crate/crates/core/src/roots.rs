//! Sturm sequences, real-root counting and isolation.

use num_traits::Zero;

use crate::arith::{simplest_between, Rational};
use crate::elimination::{gcd, squarefree_part};
use crate::interval::{eval_uni, Interval};
use crate::upoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootsError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not square-free (gcd with derivative: {0})")]
    NotSquareFree(String),
}

/// p₀ = p, p₁ = p′, pᵢ₊₁ = −rem(pᵢ₋₁, pᵢ), stopping at a nonzero constant.
pub fn sturm_sequence(p: &UniPoly) -> Result<Vec<UniPoly>, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let mut seq = vec![p.clone()];
    if p.is_constant() {
        return Ok(seq);
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = -&seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            let last = &seq[n - 1];
            if !last.is_constant() {
                return Err(RootsError::NotSquareFree(last.monic().to_string()));
            }
            return Ok(seq);
        }
        seq.push(r);
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut prev = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

pub fn variations_at(seq: &[UniPoly], x: &Rational) -> usize {
    variations(seq.iter().map(|p| p.sign_at(x)))
}

pub fn variations_at_infinity(seq: &[UniPoly], positive: bool) -> usize {
    variations(seq.iter().map(|p| p.sign_at_infinity(positive)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Range {
    Whole,
    /// Open interval (lo, hi).
    Open(Rational, Rational),
}

/// Distinct real roots in the range, for an already square-free `p` with
/// its Sturm sequence.
fn count_with(seq: &[UniPoly], range: &Range) -> usize {
    match range {
        Range::Whole => variations_at_infinity(seq, false) - variations_at_infinity(seq, true),
        Range::Open(lo, hi) => {
            if lo >= hi {
                return 0;
            }
            // V(lo) − V(hi) counts roots in (lo, hi]
            let n = variations_at(seq, lo) - variations_at(seq, hi);
            n - usize::from(seq[0].sign_at(hi) == 0)
        }
    }
}

/// Number of distinct real roots of `p` in `range`. Panics on zero.
pub fn count_real_roots(p: &UniPoly, range: &Range) -> usize {
    assert!(!p.is_zero(), "root count of the zero polynomial");
    if p.is_constant() {
        return 0;
    }
    let sf = squarefree_part(p);
    let seq = sturm_sequence(&sf).expect("square-free part");
    count_with(&seq, range)
}

/// An open interval holding exactly one root of a square-free `poly`, or a
/// degenerate `lo == hi` interval at an exact rational root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub poly: UniPoly,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// Checks the invariants: square-free poly, non-root endpoints, and a
    /// Sturm count of one (or an exact root).
    pub fn certify(&self) -> bool {
        if self.is_exact() {
            return self.poly.eval(&self.lo).is_zero();
        }
        let Ok(seq) = sturm_sequence(&self.poly) else {
            return false;
        };
        self.lo < self.hi
            && !self.poly.eval(&self.lo).is_zero()
            && !self.poly.eval(&self.hi).is_zero()
            && count_with(&seq, &Range::Open(self.lo.clone(), self.hi.clone())) == 1
    }

    /// Midpoint, or the exact value.
    pub fn approx(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }
}

/// Isolating intervals for the distinct real roots of `p`, in increasing
/// order. Works on the square-free part.
pub fn isolate_real_roots(p: &UniPoly) -> Vec<IsolatingInterval> {
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    let sf = squarefree_part(p);
    if sf.degree() == Some(1) {
        let root = -sf.coeff(0) / sf.coeff(1);
        return vec![IsolatingInterval {
            lo: root.clone(),
            hi: root,
            poly: sf,
        }];
    }
    let seq = sturm_sequence(&sf).expect("square-free part");
    let m = sf.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-m.clone(), m)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_with(&seq, &Range::Open(lo.clone(), hi.clone()));
        if n == 0 {
            continue;
        }
        // an endpoint may be a root found exactly by an earlier split; such
        // intervals are split again so emitted endpoints never vanish
        let clean_ends = !sf.eval(&lo).is_zero() && !sf.eval(&hi).is_zero();
        if n == 1 && clean_ends {
            // small-denominator rational roots come out exact
            let probe = simplest_between(&lo, &hi);
            if sf.eval(&probe).is_zero() {
                out.push(IsolatingInterval {
                    lo: probe.clone(),
                    hi: probe,
                    poly: sf.clone(),
                });
            } else {
                out.push(IsolatingInterval {
                    lo,
                    hi,
                    poly: sf.clone(),
                });
            }
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if sf.eval(&mid).is_zero() {
            out.push(IsolatingInterval {
                lo: mid.clone(),
                hi: mid.clone(),
                poly: sf.clone(),
            });
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// One bisection step; keeps the half holding the root.
fn bisect(iv: &IsolatingInterval) -> IsolatingInterval {
    let mid = iv.approx();
    let v = iv.poly.eval(&mid);
    if v.is_zero() {
        return IsolatingInterval {
            lo: mid.clone(),
            hi: mid,
            poly: iv.poly.clone(),
        };
    }
    let s_lo = iv.poly.sign_at(&iv.lo);
    if s_lo * crate::arith::sign(&v) < 0 {
        IsolatingInterval {
            lo: iv.lo.clone(),
            hi: mid,
            poly: iv.poly.clone(),
        }
    } else {
        IsolatingInterval {
            lo: mid,
            hi: iv.hi.clone(),
            poly: iv.poly.clone(),
        }
    }
}

/// Bisects until the width is at most `eps`. The endpoint signs differ for
/// a simple root, so sign comparison suffices after isolation.
pub fn refine(iv: &IsolatingInterval, eps: &Rational) -> IsolatingInterval {
    assert!(*eps > Rational::zero(), "refinement width must be positive");
    let mut cur = iv.clone();
    while !cur.is_exact() && cur.width() > *eps {
        cur = bisect(&cur);
    }
    cur
}

/// Sign of `q` at the root certified by `iv`.
pub fn sign_at_root(q: &UniPoly, iv: &IsolatingInterval) -> i8 {
    if let Some(r) = iv.exact_value() {
        return q.sign_at(r);
    }
    if q.is_zero() {
        return 0;
    }
    let g = gcd(q, &iv.poly);
    if !g.is_constant() {
        // g is square-free (it divides iv.poly); the root is shared iff g
        // has a root inside the interval
        let seq = sturm_sequence(&g).expect("divisor of a square-free polynomial");
        if count_with(&seq, &Range::Open(iv.lo.clone(), iv.hi.clone())) == 1 {
            return 0;
        }
    }
    let mut cur = iv.clone();
    loop {
        if let Some(r) = cur.exact_value() {
            return q.sign_at(r);
        }
        let s = eval_uni(q, &cur.as_interval()).certain_sign();
        if s != 0 {
            return s;
        }
        cur = bisect(&cur);
    }
}

/// Sign changes of `p` on the grid lo, lo+step, …, hi, skipping grid
/// points where p vanishes (which are counted as roots). A crude oracle for
/// tests.
pub fn grid_root_scan(p: &UniPoly, lo: &Rational, hi: &Rational, steps: u32) -> usize {
    let step = (hi - lo) / Rational::from_integer(steps.into());
    let mut count = 0;
    let mut prev = 0i8;
    let mut x = lo.clone();
    for _ in 0..=steps {
        let s = p.sign_at(&x);
        if s == 0 {
            count += 1;
            prev = 0;
        } else {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        x += &step;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn textbook_chain() {
        let seq = sturm_sequence(&up(&[-2, 0, 1])).unwrap();
        assert_eq!(seq, vec![up(&[-2, 0, 1]), up(&[0, 2]), up(&[2])]);
        assert!(matches!(
            sturm_sequence(&up(&[0, 0, 1])),
            Err(RootsError::NotSquareFree(_))
        ));
        assert_eq!(
            sturm_sequence(&UniPoly::zero()),
            Err(RootsError::ZeroPolynomial)
        );
    }

    #[test]
    fn counts() {
        assert_eq!(count_real_roots(&up(&[-2, 0, 1]), &Range::Whole), 2);
        let q = UniPoly::new(vec![int(-63), int(104), rat(-197, 4)]);
        assert_eq!(count_real_roots(&q, &Range::Whole), 0);
        // (x-1)^2 (x+2): two distinct roots
        assert_eq!(count_real_roots(&up(&[2, -3, 0, 1]), &Range::Whole), 2);
        // open interval excludes endpoints that are roots
        let p = up(&[0, -1, 0, 1]); // roots -1, 0, 1
        assert_eq!(count_real_roots(&p, &Range::Open(int(-1), int(1))), 1);
        assert_eq!(count_real_roots(&p, &Range::Open(int(-2), int(1))), 2);
        assert_eq!(count_real_roots(&p, &Range::Open(int(-2), int(2))), 3);
        assert_eq!(count_real_roots(&up(&[5]), &Range::Whole), 0);
    }

    #[test]
    fn sqrt_two() {
        let ivs = isolate_real_roots(&up(&[-2, 0, 1]));
        assert_eq!(ivs.len(), 2);
        let neg = refine(&ivs[0], &rat(1, 2));
        let pos = refine(&ivs[1], &rat(1, 2));
        assert!(neg.lo >= int(-2) && neg.hi <= int(-1));
        assert!(pos.lo >= int(1) && pos.hi <= int(2));
        assert!(ivs.iter().all(|iv| iv.certify()));
        let eps = rat(1, 1 << 30);
        let fine = refine(&ivs[1], &eps);
        assert!(fine.width() <= eps);
        assert!(fine.certify());
        assert!(fine.lo < rat(141421357, 100000000) && fine.hi > rat(141421356, 100000000));
        assert!(isolate_real_roots(&up(&[5])).is_empty());
    }

    #[test]
    fn rational_roots_are_exact() {
        // (2x - 3)(x^2 - 2)
        let p = &up(&[-3, 2]) * &up(&[-2, 0, 1]);
        let ivs = isolate_real_roots(&p);
        assert_eq!(ivs.len(), 3);
        assert_eq!(ivs[2].exact_value(), Some(&rat(3, 2)));
        assert!(!ivs[1].is_exact());
        let exact = refine(&ivs[2], &rat(1, 1000));
        assert_eq!(exact, ivs[2]);
    }

    #[test]
    fn signs_at_sqrt_two() {
        let ivs = isolate_real_roots(&up(&[-2, 0, 1]));
        let r = &ivs[1];
        assert_eq!(sign_at_root(&up(&[-1, 1]), r), 1);
        assert_eq!(sign_at_root(&up(&[-2, 0, 1]), r), 0);
        assert_eq!(sign_at_root(&up(&[-2, 1]), r), -1);
        // shares a factor with the poly but at the other root
        assert_eq!(sign_at_root(&(&up(&[-2, 0, 1]) * &up(&[0, 1])), &ivs[0]), 0);
        assert_eq!(sign_at_root(&up(&[0, 1]), &ivs[0]), -1);
    }

    #[test]
    fn grid_scan() {
        let p = up(&[0, -1, 0, 1]);
        assert_eq!(grid_root_scan(&p, &int(-3), &int(3), 600), 3);
    }
}
