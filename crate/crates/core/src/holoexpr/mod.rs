//! Entire functions of four complex variables as expression trees.
//!
//! Variables are `v1..v4`. Inside a Cartan-tagged function they stand for
//! `z1..z4`; inside a standard-tagged function for `t0..t3`.

mod normal;
mod oracle;

use std::fmt;
use std::ops;

use num_complex::Complex64;

pub use normal::{Monomial, Poly, NORMALIZE_REL_TOL};
pub use oracle::{cauchy_derivative, DEFAULT_ORACLE_N, DEFAULT_ORACLE_RADIUS};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u8);

impl VarId {
    pub const V1: VarId = VarId(1);
    pub const V2: VarId = VarId(2);
    pub const V3: VarId = VarId(3);
    pub const V4: VarId = VarId(4);
    pub const ALL: [VarId; 4] = [Self::V1, Self::V2, Self::V3, Self::V4];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=4).contains(&index) {
            Ok(VarId(index))
        } else {
            Err(Error::InvalidParameter(format!(
                "variable index {index} outside 1..4"
            )))
        }
    }

    /// 1-based index.
    pub fn index(self) -> u8 {
        self.0
    }

    /// 0-based slot, for indexing coordinate arrays.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type Point4 = [Complex64; 4];

#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Const(Complex64),
    Var(VarId),
    Add(Box<HoloExpr>, Box<HoloExpr>),
    Mul(Box<HoloExpr>, Box<HoloExpr>),
    Neg(Box<HoloExpr>),
    Pow(Box<HoloExpr>, u32),
    Exp(Box<HoloExpr>),
}

use HoloExpr::*;

impl HoloExpr {
    pub fn zero() -> Self {
        Const(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Const(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Const(c)
    }

    pub fn real(x: f64) -> Self {
        Const(Complex64::new(x, 0.0))
    }

    pub fn var(v: VarId) -> Self {
        Var(v)
    }

    /// `z_index` (or `t_{index-1}`), 1-based.
    pub fn v(index: u8) -> Self {
        Var(VarId::new(index).expect("variable index in 1..4"))
    }

    /// `constant + sum_s coeffs[s] * v_{s+1}`.
    pub fn linear(coeffs: [Complex64; 4], constant: Complex64) -> Self {
        let mut acc = Self::constant(constant);
        for (s, &a) in coeffs.iter().enumerate() {
            acc = acc + Self::constant(a) * Var(VarId::ALL[s]);
        }
        acc
    }

    pub fn pow(self, n: u32) -> Self {
        Pow(Box::new(self), n)
    }

    pub fn exp(self) -> Self {
        Exp(Box::new(self))
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self, Const(c) if *c == Complex64::new(0.0, 0.0))
    }

    fn is_literal_one(&self) -> bool {
        matches!(self, Const(c) if *c == Complex64::new(1.0, 0.0))
    }

    /// Sum that drops literal-zero operands; used to keep derived trees small.
    /// Constants are not folded here so that cancellation is always seen by
    /// the normalizer, which tracks operand magnitudes.
    pub fn sum(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (a, b) if a.is_literal_zero() => b,
            (a, b) if b.is_literal_zero() => a,
            (a, b) => Add(Box::new(a), Box::new(b)),
        }
    }

    /// Product that short-circuits literal zeros and ones.
    pub fn product(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (Const(x), Const(y)) => Const(x * y),
            (a, _) if a.is_literal_zero() => HoloExpr::zero(),
            (_, b) if b.is_literal_zero() => HoloExpr::zero(),
            (a, b) if a.is_literal_one() => b,
            (a, b) if b.is_literal_one() => a,
            (a, b) => Mul(Box::new(a), Box::new(b)),
        }
    }

    /// `c * e`, folding trivial coefficients.
    pub fn scaled(c: Complex64, e: HoloExpr) -> HoloExpr {
        Self::product(Const(c), e)
    }

    pub fn negated(e: HoloExpr) -> HoloExpr {
        match e {
            Const(x) => Const(-x),
            Neg(inner) => *inner,
            e => Neg(Box::new(e)),
        }
    }

    pub fn eval(&self, p: &Point4) -> Complex64 {
        match self {
            Const(c) => *c,
            Var(v) => p[v.slot()],
            Add(a, b) => a.eval(p) + b.eval(p),
            Mul(a, b) => a.eval(p) * b.eval(p),
            Neg(a) => -a.eval(p),
            Pow(a, n) => a.eval(p).powu(*n),
            Exp(a) => a.eval(p).exp(),
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Const(_) => false,
            Var(w) => *w == v,
            Add(a, b) | Mul(a, b) => a.contains_var(v) || b.contains_var(v),
            Neg(a) | Exp(a) => a.contains_var(v),
            Pow(a, n) => *n > 0 && a.contains_var(v),
        }
    }

    /// Exact symbolic partial derivative `d/dv`.
    pub fn diff(&self, v: VarId) -> HoloExpr {
        if !self.contains_var(v) {
            return HoloExpr::zero();
        }
        match self {
            Const(_) => HoloExpr::zero(),
            Var(w) => {
                if *w == v {
                    HoloExpr::one()
                } else {
                    HoloExpr::zero()
                }
            }
            Add(a, b) => Self::sum(a.diff(v), b.diff(v)),
            Mul(a, b) => Self::sum(
                Self::product(a.diff(v), (**b).clone()),
                Self::product((**a).clone(), b.diff(v)),
            ),
            Neg(a) => Self::negated(a.diff(v)),
            Pow(a, n) => match n {
                0 => HoloExpr::zero(),
                1 => a.diff(v),
                n => {
                    let base = if *n == 2 {
                        (**a).clone()
                    } else {
                        (**a).clone().pow(n - 1)
                    };
                    Self::product(
                        Self::scaled(Complex64::new(*n as f64, 0.0), base),
                        a.diff(v),
                    )
                }
            },
            Exp(a) => Self::product(a.diff(v), self.clone()),
        }
    }

    /// Simultaneous substitution of variables; unmapped variables are kept.
    pub fn substitute(&self, map: &Substitution) -> HoloExpr {
        match self {
            Const(c) => Const(*c),
            Var(v) => map.get(*v).cloned().unwrap_or(Var(*v)),
            Add(a, b) => Add(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Mul(a, b) => Mul(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Neg(a) => Neg(Box::new(a.substitute(map))),
            Pow(a, n) => Pow(Box::new(a.substitute(map)), *n),
            Exp(a) => Exp(Box::new(a.substitute(map))),
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_expr(self)
    }

    /// Canonical form: expanded, like terms collected, constants folded,
    /// cancelled terms dropped, exponentials merged per monomial.
    pub fn normalize(&self) -> HoloExpr {
        self.to_poly().to_expr()
    }

    pub fn is_zero(&self) -> bool {
        self.to_poly().is_zero()
    }

    /// Equal after normalization, up to the cancellation tolerance: the
    /// difference normalizes to zero.
    pub fn normalized_eq(&self, other: &HoloExpr) -> bool {
        self.to_poly().add(&other.to_poly().neg()).is_zero()
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Const(_) | Var(_) => 1,
            Add(a, b) | Mul(a, b) => 1 + a.size() + b.size(),
            Neg(a) | Pow(a, _) | Exp(a) => 1 + a.size(),
        }
    }
}

impl From<Complex64> for HoloExpr {
    fn from(c: Complex64) -> Self {
        Const(c)
    }
}

impl From<VarId> for HoloExpr {
    fn from(v: VarId) -> Self {
        Var(v)
    }
}

impl ops::Add for HoloExpr {
    type Output = HoloExpr;
    fn add(self, rhs: HoloExpr) -> HoloExpr {
        Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for HoloExpr {
    type Output = HoloExpr;
    fn sub(self, rhs: HoloExpr) -> HoloExpr {
        Add(Box::new(self), Box::new(Neg(Box::new(rhs))))
    }
}

impl ops::Mul for HoloExpr {
    type Output = HoloExpr;
    fn mul(self, rhs: HoloExpr) -> HoloExpr {
        Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for HoloExpr {
    type Output = HoloExpr;
    fn neg(self) -> HoloExpr {
        Neg(Box::new(self))
    }
}

/// A partial map `v_s -> expression`, applied simultaneously.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Substitution {
    targets: [Option<HoloExpr>; 4],
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(targets: [HoloExpr; 4]) -> Self {
        Self {
            targets: targets.map(Some),
        }
    }

    pub fn with(mut self, v: VarId, e: HoloExpr) -> Self {
        self.targets[v.slot()] = Some(e);
        self
    }

    pub fn get(&self, v: VarId) -> Option<&HoloExpr> {
        self.targets[v.slot()].as_ref()
    }

    /// The substitution equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &Substitution) -> Substitution {
        Substitution {
            targets: std::array::from_fn(|s| {
                let v = VarId::ALL[s];
                match &self.targets[s] {
                    Some(e) => Some(e.substitute(next)),
                    None => next.get(v).cloned(),
                }
            }),
        }
    }

    /// Image of a point: `q_s = eval(map(v_s), p)`.
    pub fn eval_point(&self, p: &Point4) -> Point4 {
        std::array::from_fn(|s| match &self.targets[s] {
            Some(e) => e.eval(p),
            None => p[s],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u8) -> HoloExpr {
        HoloExpr::v(i)
    }

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_basics() {
        let p = [cx(0.0, 2.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)];
        assert_eq!(HoloExpr::constant(cx(7.0, 2.0)).eval(&p), cx(7.0, 2.0));
        assert_eq!(z(1).pow(2).eval(&p), cx(-4.0, 0.0));
        assert_eq!(HoloExpr::zero().exp().eval(&p), cx(1.0, 0.0));
    }

    #[test]
    fn power_rule() {
        let d = z(1).pow(2).diff(VarId::V1);
        assert!(d.normalized_eq(&(HoloExpr::real(2.0) * z(1))));
    }

    #[test]
    fn independent_variable_derivative_is_literal_zero() {
        assert!(z(1).diff(VarId::V2).is_literal_zero());
    }

    #[test]
    fn chain_rule_through_exp() {
        let e = (z(1) * z(2)).exp();
        let d = e.diff(VarId::V1);
        assert!(d.normalized_eq(&(z(2) * (z(1) * z(2)).exp())));
    }

    #[test]
    fn pow_zero_is_constant() {
        assert!(z(3).pow(0).diff(VarId::V3).is_literal_zero());
        assert_eq!(z(3).pow(0).eval(&[cx(0.0, 0.0); 4]), cx(1.0, 0.0));
    }

    #[test]
    fn substitution_renames() {
        let s = Substitution::new().with(VarId::V1, z(2));
        assert_eq!(z(1).substitute(&s), z(2));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let s = Substitution::new()
            .with(VarId::V1, z(2))
            .with(VarId::V2, z(1));
        let got = (z(1) * z(2)).substitute(&s);
        assert_eq!(got, z(2) * z(1));
        assert!(!got.normalized_eq(&z(1).pow(2)));
    }

    #[test]
    fn unmapped_variables_pass_through() {
        let s = Substitution::new().with(VarId::V1, z(3));
        assert_eq!((z(1) + z(4)).substitute(&s), z(3) + z(4));
    }

    #[test]
    fn var_id_range() {
        assert!(VarId::new(0).is_err());
        assert!(VarId::new(5).is_err());
        assert_eq!(VarId::new(4).unwrap().slot(), 3);
    }
}
