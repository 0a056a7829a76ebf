//! Canonical polynomial-exponential form used for normalization.
//!
//! Every [`HoloExpr`] expands to a finite sum `sum c_k * m_k` where each
//! monomial `m_k` is `z1^a1 z2^a2 z3^a3 z4^a4 * exp(P_k)` and `P_k` is itself a
//! canonical form with no constant term (constants in exponents are folded
//! into the coefficient).
//!
//! Each coefficient carries the sum of the moduli of the contributions that
//! produced it. A coefficient whose modulus falls below
//! `NORMALIZE_REL_TOL * magnitude` is floating-point cancellation and is
//! dropped, so that `a*b*x - b*a*x` normalizes to zero regardless of
//! rounding order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{HoloExpr, VarId};

pub const NORMALIZE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Monomial {
    pub pows: [u32; 4],
    pub exp: Option<Box<Poly>>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            pows: [0; 4],
            exp: None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.pows.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.pows == [0; 4] && self.exp.is_none()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let pows = std::array::from_fn(|s| self.pows[s] + other.pows[s]);
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (Some(p), Some(q)) => {
                let sum = p.add(q);
                if sum.is_zero() {
                    None
                } else {
                    Some(Box::new(sum))
                }
            }
        };
        Monomial { pows, exp }
    }
}

// Higher total degree first, then lexicographically larger exponents, then
// pure monomials before exponential ones.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.pows.cmp(&self.pows))
            .then_with(|| match (&self.exp, &other.exp) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(p), Some(q)) => p.cmp(q),
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Monomial {}

#[derive(Debug, Clone, Copy)]
struct Term {
    coef: Complex64,
    mag: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Term>,
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut lhs = self.terms.iter();
        let mut rhs = other.terms.iter();
        loop {
            match (lhs.next(), rhs.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ta)), Some((mb, tb))) => {
                    let ord = ma.cmp(mb).then_with(|| cmp_complex(&ta.coef, &tb.coef));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.insert(Monomial::one(), c, c.norm());
        p.prune();
        p
    }

    pub fn var(v: VarId) -> Self {
        let mut pows = [0; 4];
        pows[v.slot()] = 1;
        let mut p = Self::zero();
        p.insert(Monomial { pows, exp: None }, Complex64::new(1.0, 0.0), 1.0);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(monomial, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Complex64)> {
        self.terms.iter().map(|(m, t)| (m, t.coef))
    }

    fn insert(&mut self, m: Monomial, coef: Complex64, mag: f64) {
        let t = self.terms.entry(m).or_insert(Term {
            coef: Complex64::new(0.0, 0.0),
            mag: 0.0,
        });
        t.coef += coef;
        t.mag += mag;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, t| {
            let n = t.coef.norm();
            n != 0.0 && n > NORMALIZE_REL_TOL * t.mag
        });
        for t in self.terms.values_mut() {
            // canonical zero sign
            t.coef = Complex64::new(t.coef.re + 0.0, t.coef.im + 0.0);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, t) in &other.terms {
            out.insert(m.clone(), t.coef, t.mag);
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for t in out.terms.values_mut() {
            t.coef = -t.coef;
        }
        out.prune();
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ta) in &self.terms {
            for (mb, tb) in &other.terms {
                out.insert(ma.mul(mb), ta.coef * tb.coef, ta.mag * tb.mag);
            }
        }
        out.prune();
        out
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut result = Poly::constant(Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn exp(&self) -> Poly {
        let mut rest = self.clone();
        let c0 = rest
            .terms
            .remove(&Monomial::one())
            .map(|t| t.coef)
            .unwrap_or_default();
        let scale = c0.exp();
        if rest.is_zero() {
            return Poly::constant(scale);
        }
        let mut out = Poly::zero();
        out.insert(
            Monomial {
                pows: [0; 4],
                exp: Some(Box::new(rest)),
            },
            scale,
            scale.norm(),
        );
        out
    }

    pub fn from_expr(e: &HoloExpr) -> Poly {
        match e {
            HoloExpr::Const(c) => Poly::constant(*c),
            HoloExpr::Var(v) => Poly::var(*v),
            HoloExpr::Add(a, b) => Poly::from_expr(a).add(&Poly::from_expr(b)),
            HoloExpr::Mul(a, b) => Poly::from_expr(a).mul(&Poly::from_expr(b)),
            HoloExpr::Neg(a) => Poly::from_expr(a).neg(),
            HoloExpr::Pow(a, n) => Poly::from_expr(a).pow(*n),
            HoloExpr::Exp(a) => Poly::from_expr(a).exp(),
        }
    }

    /// Canonical tree: a left-nested sum of terms in canonical order, each a
    /// left-nested product `coef * z1^a1 * ... * exp(..)`.
    pub fn to_expr(&self) -> HoloExpr {
        let mut terms = self.terms.iter().map(|(m, t)| term_expr(t.coef, m));
        let Some(first) = terms.next() else {
            return HoloExpr::zero();
        };
        terms.fold(first, |acc, t| HoloExpr::Add(Box::new(acc), Box::new(t)))
    }

    pub fn eval(&self, p: &[Complex64; 4]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, t)| {
                let mut v = t.coef;
                for s in 0..4 {
                    v *= p[s].powu(m.pows[s]);
                }
                if let Some(arg) = &m.exp {
                    v *= arg.eval(p).exp();
                }
                v
            })
            .sum()
    }
}

fn monomial_factors(m: &Monomial) -> Vec<HoloExpr> {
    let mut factors = Vec::new();
    for (s, &k) in m.pows.iter().enumerate() {
        let v = HoloExpr::Var(VarId::ALL[s]);
        match k {
            0 => {}
            1 => factors.push(v),
            k => factors.push(HoloExpr::Pow(Box::new(v), k)),
        }
    }
    if let Some(arg) = &m.exp {
        factors.push(HoloExpr::Exp(Box::new(arg.to_expr())));
    }
    factors
}

fn term_expr(coef: Complex64, m: &Monomial) -> HoloExpr {
    let one = Complex64::new(1.0, 0.0);
    let factors = monomial_factors(m);
    let mut it = factors.into_iter();
    let Some(first) = it.next() else {
        return HoloExpr::Const(coef);
    };
    let body = it.fold(first, |acc, f| HoloExpr::Mul(Box::new(acc), Box::new(f)));
    if coef == one {
        body
    } else if coef == -one {
        HoloExpr::Neg(Box::new(body))
    } else {
        HoloExpr::Mul(Box::new(HoloExpr::Const(coef)), Box::new(body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u8) -> HoloExpr {
        HoloExpr::v(i)
    }

    #[test]
    fn like_terms_collect() {
        let e = z(1) + z(1);
        assert_eq!(e.normalize(), HoloExpr::real(2.0) * z(1));
    }

    #[test]
    fn cancellation_reaches_literal_zero() {
        let a = Complex64::new(0.3, 0.7);
        let b = Complex64::new(-1.1, 0.9);
        let x = HoloExpr::constant(a) * (HoloExpr::constant(b) * z(2));
        let y = (HoloExpr::constant(b) * HoloExpr::constant(a)) * z(2);
        let r = (x - y).normalize();
        assert!(r.is_literal_zero(), "{r:?}");
    }

    #[test]
    fn expansion_is_canonical() {
        let lhs = (z(1) + z(2)).pow(2);
        let rhs = z(2).pow(2) + HoloExpr::real(2.0) * z(2) * z(1) + z(1) * z(1);
        assert!(lhs.normalized_eq(&rhs));
    }

    #[test]
    fn exponentials_merge() {
        let lhs = z(1).exp() * z(2).exp();
        let rhs = (z(2) + z(1)).exp();
        assert!(lhs.normalized_eq(&rhs));
        let cancel = z(3).exp() * (-z(3)).exp();
        assert_eq!(cancel.normalize(), HoloExpr::one());
    }

    #[test]
    fn exponent_constants_fold_out() {
        let e = (z(1) + HoloExpr::real(0.0)).exp();
        assert_eq!(e.normalize(), z(1).exp());
        assert_eq!(HoloExpr::zero().exp().normalize(), HoloExpr::one());
    }

    #[test]
    fn normalization_is_idempotent() {
        let e = (z(1) * HoloExpr::constant(Complex64::new(0.0, 2.0)) - z(4).pow(3))
            * (z(2) + z(1)).exp();
        let once = e.normalize();
        assert_eq!(once.normalize(), once);
    }

    #[test]
    fn canonical_order_puts_constants_last() {
        let e = HoloExpr::real(3.0) + z(2) + z(1).pow(2);
        let n = e.normalize();
        let expected = (z(1).pow(2) + z(2)) + HoloExpr::real(3.0);
        assert_eq!(n, expected);
    }

    #[test]
    fn poly_eval_matches_tree_eval() {
        let e = (z(1) - HoloExpr::constant(Complex64::new(0.5, -0.25)) * z(3)).pow(3)
            * (z(2) * z(4)).exp();
        let p = [
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.3, 0.4),
            Complex64::new(0.5, -0.6),
            Complex64::new(0.7, 0.05),
        ];
        assert!((e.eval(&p) - e.to_poly().eval(&p)).norm() < 1e-14);
    }
}
