//! Complex quaternions `H(C)` in the standard basis `{1, I, J, K}` and in
//! Cartan's idempotent basis `{e1, e2, e3, e4}`.
//!
//! The Cartan elements are
//!
//! ```text
//! e1 = (1 + iI)/2    e2 = (1 - iI)/2    e3 = (iJ - K)/2    e4 = (iJ + K)/2
//! ```
//!
//! with `1 = e1 + e2`, `I = -i e1 + i e2`, `J = -i e3 - i e4`, `K = e4 - e3`.
//! `e1`, `e2` are idempotent, `e3`, `e4` nilpotent, and the algebra is
//! non-commutative (`e1 e3 = e3` but `e3 e1 = 0`).
//!
//! Basis products are table lookups with unit coefficients, so every identity
//! of the multiplication tables holds exactly in floating point.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Absolute tolerance on coefficients for [`Biquaternion::approx_eq`].
pub const COEFF_TOL: f64 = 1e-12;

/// A basis matrix counts as singular when `|det| <= SINGULAR_TOL`.
pub const SINGULAR_TOL: f64 = 1e-12;

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const O: Complex64 = c(0.0, 0.0);
const ONE: Complex64 = c(1.0, 0.0);
const HALF: Complex64 = c(0.5, 0.0);
const IHALF: Complex64 = c(0.0, 0.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    /// `(1, I, J, K)`
    Standard,
    /// `(e1, e2, e3, e4)`
    Cartan,
}

impl BasisTag {
    pub fn name(self) -> &'static str {
        match self {
            BasisTag::Standard => "standard",
            BasisTag::Cartan => "cartan",
        }
    }

    pub fn other(self) -> BasisTag {
        match self {
            BasisTag::Standard => BasisTag::Cartan,
            BasisTag::Cartan => BasisTag::Standard,
        }
    }

    /// Names of the basis elements, in coefficient order.
    pub fn unit_names(self) -> [&'static str; 4] {
        match self {
            BasisTag::Standard => ["1", "I", "J", "K"],
            BasisTag::Cartan => ["e1", "e2", "e3", "e4"],
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BasisTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(BasisTag::Standard),
            "cartan" => Ok(BasisTag::Cartan),
            other => Err(Error::Schema(format!(
                "unknown basis `{other}` (expected \"standard\" or \"cartan\")"
            ))),
        }
    }
}

/// Product of two basis units: `Some((index, sign))` meaning `sign * unit[index]`,
/// or `None` when the product vanishes.
pub type UnitProduct = Option<(usize, i8)>;

/// `STANDARD_TABLE[a][b]` is `u_a * u_b` for `u = (1, I, J, K)`.
pub const STANDARD_TABLE: [[UnitProduct; 4]; 4] = [
    [Some((0, 1)), Some((1, 1)), Some((2, 1)), Some((3, 1))],
    [Some((1, 1)), Some((0, -1)), Some((3, 1)), Some((2, -1))],
    [Some((2, 1)), Some((3, -1)), Some((0, -1)), Some((1, 1))],
    [Some((3, 1)), Some((2, 1)), Some((1, -1)), Some((0, -1))],
];

/// `CARTAN_TABLE[a][b]` is `e_{a+1} * e_{b+1}`.
pub const CARTAN_TABLE: [[UnitProduct; 4]; 4] = [
    [Some((0, 1)), None, Some((2, 1)), None],
    [None, Some((1, 1)), None, Some((3, 1))],
    [None, Some((2, 1)), None, Some((0, 1))],
    [Some((3, 1)), None, Some((1, 1)), None],
];

pub fn unit_product(basis: BasisTag, a: usize, b: usize) -> UnitProduct {
    match basis {
        BasisTag::Standard => STANDARD_TABLE[a][b],
        BasisTag::Cartan => CARTAN_TABLE[a][b],
    }
}

/// Row `j` gives the Cartan coefficient `j` as a combination of standard
/// coefficients.
pub const STANDARD_TO_CARTAN: [[Complex64; 4]; 4] = [
    [ONE, c(0.0, -1.0), O, O],
    [ONE, c(0.0, 1.0), O, O],
    [O, O, c(0.0, -1.0), c(-1.0, 0.0)],
    [O, O, c(0.0, -1.0), ONE],
];

/// Row `j` gives the standard coefficient `j` as a combination of Cartan
/// coefficients.
pub const CARTAN_TO_STANDARD: [[Complex64; 4]; 4] = [
    [HALF, HALF, O, O],
    [IHALF, c(0.0, -0.5), O, O],
    [O, O, IHALF, IHALF],
    [O, O, c(-0.5, 0.0), HALF],
];

/// Coordinate-change matrix taking coefficients in `from` to coefficients in
/// `to`, or `None` when the bases coincide.
pub fn conversion_matrix(from: BasisTag, to: BasisTag) -> Option<&'static [[Complex64; 4]; 4]> {
    match (from, to) {
        (BasisTag::Standard, BasisTag::Cartan) => Some(&STANDARD_TO_CARTAN),
        (BasisTag::Cartan, BasisTag::Standard) => Some(&CARTAN_TO_STANDARD),
        _ => None,
    }
}

fn apply_matrix(m: &[[Complex64; 4]; 4], v: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|j| (0..4).map(|s| m[j][s] * v[s]).sum())
}

/// An element of `H(C)`, stored as four complex coefficients against the
/// basis named by `basis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquaternion {
    pub basis: BasisTag,
    pub c: [Complex64; 4],
}

impl Biquaternion {
    pub const fn new(basis: BasisTag, c: [Complex64; 4]) -> Self {
        Self { basis, c }
    }

    pub const fn standard(c: [Complex64; 4]) -> Self {
        Self::new(BasisTag::Standard, c)
    }

    pub const fn cartan(c: [Complex64; 4]) -> Self {
        Self::new(BasisTag::Cartan, c)
    }

    pub fn zero(basis: BasisTag) -> Self {
        Self::new(basis, [O; 4])
    }

    /// The multiplicative unit; `(1, 1, 0, 0)` in the Cartan basis.
    pub fn one(basis: BasisTag) -> Self {
        Self::scalar(basis, ONE)
    }

    /// The central element `lambda * 1`.
    pub fn scalar(basis: BasisTag, lambda: Complex64) -> Self {
        match basis {
            BasisTag::Standard => Self::standard([lambda, O, O, O]),
            BasisTag::Cartan => Self::cartan([lambda, lambda, O, O]),
        }
    }

    /// The basis unit with the given 0-based index.
    pub fn unit(basis: BasisTag, index: usize) -> Self {
        let mut c = [O; 4];
        c[index] = ONE;
        Self::new(basis, c)
    }

    pub fn e(index: usize) -> Self {
        assert!((1..=4).contains(&index), "Cartan units are e1..e4");
        Self::unit(BasisTag::Cartan, index - 1)
    }

    fn require_same_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis,
                found: other.basis,
            });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.require_same_basis(rhs)?;
        let mut out = [O; 4];
        for a in 0..4 {
            if self.c[a] == O {
                continue;
            }
            for b in 0..4 {
                if let Some((idx, sign)) = unit_product(self.basis, a, b) {
                    let p = self.c[a] * rhs.c[b];
                    if sign > 0 {
                        out[idx] += p;
                    } else {
                        out[idx] -= p;
                    }
                }
            }
        }
        Ok(Self::new(self.basis, out))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.require_same_basis(rhs)?;
        Ok(Self::new(
            self.basis,
            std::array::from_fn(|s| self.c[s] + rhs.c[s]),
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.require_same_basis(rhs)?;
        Ok(Self::new(
            self.basis,
            std::array::from_fn(|s| self.c[s] - rhs.c[s]),
        ))
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self::new(self.basis, self.c.map(|x| lambda * x))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.basis, self.c.map(|x| -x))
    }

    pub fn to_basis(&self, target: BasisTag) -> Self {
        match conversion_matrix(self.basis, target) {
            Some(m) => Self::new(target, apply_matrix(m, &self.c)),
            None => *self,
        }
    }

    pub fn to_cartan(&self) -> Self {
        self.to_basis(BasisTag::Cartan)
    }

    pub fn to_standard(&self) -> Self {
        self.to_basis(BasisTag::Standard)
    }

    /// Re-expresses a Cartan-tagged element against the basis `{i1..i4}`
    /// described by `m`.
    pub fn change_basis(&self, m: &BasisMatrix) -> Result<[Complex64; 4]> {
        if self.basis != BasisTag::Cartan {
            return Err(Error::BasisMismatch {
                expected: BasisTag::Cartan,
                found: self.basis,
            });
        }
        Ok(m.apply(&self.c))
    }

    /// Largest coefficient modulus in the element's own basis.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus of `self - other`, measured in `self`'s basis.
    pub fn distance(&self, other: &Self) -> f64 {
        let other = other.to_basis(self.basis);
        (0..4)
            .map(|s| (self.c[s] - other.c[s]).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn is_central(&self, tol: f64) -> bool {
        let s = self.to_standard();
        s.c[1..].iter().all(|x| x.norm() <= tol)
    }
}

impl fmt::Display for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.basis.unit_names();
        let mut first = true;
        for (coef, name) in self.c.iter().zip(names) {
            if *coef == O {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}{:+}i){}", coef.re, coef.im, name)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `[re, im]` on the wire; a bare number is read as a real.
#[derive(Debug, Clone, Copy, Serialize)]
pub(crate) struct ComplexPair(pub f64, pub f64);

impl<'de> Deserialize<'de> for ComplexPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Pair(f64, f64),
            Real(f64),
        }
        Ok(match Wire::deserialize(deserializer) {
            Ok(Wire::Pair(re, im)) => ComplexPair(re, im),
            Ok(Wire::Real(re)) => ComplexPair(re, 0.0),
            Err(_) => {
                return Err(serde::de::Error::custom(
                    "expected a complex number [re, im] or a real number",
                ))
            }
        })
    }
}

impl From<Complex64> for ComplexPair {
    fn from(z: Complex64) -> Self {
        ComplexPair(z.re, z.im)
    }
}

impl From<ComplexPair> for Complex64 {
    fn from(p: ComplexPair) -> Self {
        Complex64::new(p.0, p.1)
    }
}

#[derive(Serialize, Deserialize)]
struct BiquaternionRepr {
    basis: BasisTag,
    c: [ComplexPair; 4],
}

impl Serialize for Biquaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BiquaternionRepr {
            basis: self.basis,
            c: self.c.map(ComplexPair::from),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Biquaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BiquaternionRepr::deserialize(deserializer)?;
        Ok(Biquaternion::new(repr.basis, repr.c.map(Complex64::from)))
    }
}

/// Change of basis from Cartan's basis to another basis `{i1, i2, i3, i4}`.
///
/// Rows are kept in the order `k, m, n, r`:
///
/// ```text
/// e1 = k1 i1 + k2 i2 + k3 i3 + k4 i4
/// e2 = m1 i1 + ...
/// e3 = n1 i1 + ...
/// e4 = r1 i1 + ...
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisMatrix {
    rows: [[Complex64; 4]; 4],
}

impl BasisMatrix {
    pub fn new(rows: [[Complex64; 4]; 4]) -> Result<Self> {
        let det = determinant(&rows).norm();
        if det.is_nan() || det <= SINGULAR_TOL {
            return Err(Error::SingularMatrix { det });
        }
        Ok(Self { rows })
    }

    pub fn from_krmn(
        k: [Complex64; 4],
        m: [Complex64; 4],
        n: [Complex64; 4],
        r: [Complex64; 4],
    ) -> Result<Self> {
        Self::new([k, m, n, r])
    }

    pub fn identity() -> Self {
        Self {
            rows: std::array::from_fn(|j| std::array::from_fn(|a| if a == j { ONE } else { O })),
        }
    }

    /// The matrix whose target basis is `{1, I, J, K}`; its rows are the
    /// standard coefficients of `e1..e4`.
    pub fn cartan_to_standard() -> Self {
        Self {
            rows: [
                [HALF, IHALF, O, O],
                [HALF, c(0.0, -0.5), O, O],
                [O, O, IHALF, c(-0.5, 0.0)],
                [O, O, IHALF, HALF],
            ],
        }
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 4] {
        &self.rows
    }

    pub fn k(&self) -> &[Complex64; 4] {
        &self.rows[0]
    }

    pub fn m(&self) -> &[Complex64; 4] {
        &self.rows[1]
    }

    pub fn n(&self) -> &[Complex64; 4] {
        &self.rows[2]
    }

    pub fn r(&self) -> &[Complex64; 4] {
        &self.rows[3]
    }

    pub fn determinant(&self) -> Complex64 {
        determinant(&self.rows)
    }

    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.rows.map(|row| row.map(|x| lambda * x)))
    }

    /// The matrix expressing `{i1..i4}` back in terms of `{e1..e4}`.
    pub fn inverse(&self) -> Result<Self> {
        let inv = invert(&self.rows).ok_or(Error::SingularMatrix {
            det: self.determinant().norm(),
        })?;
        Self::new(inv)
    }

    /// Maps coefficients against `{e1..e4}` to coefficients against `{i1..i4}`.
    pub fn apply(&self, coeffs: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|a| (0..4).map(|j| coeffs[j] * self.rows[j][a]).sum())
    }
}

#[derive(Serialize, Deserialize)]
struct BasisMatrixRepr {
    k: [ComplexPair; 4],
    m: [ComplexPair; 4],
    n: [ComplexPair; 4],
    r: [ComplexPair; 4],
}

impl Serialize for BasisMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let row = |j: usize| self.rows[j].map(ComplexPair::from);
        BasisMatrixRepr {
            k: row(0),
            m: row(1),
            n: row(2),
            r: row(3),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BasisMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BasisMatrixRepr::deserialize(deserializer)?;
        let rows = [repr.k, repr.m, repr.n, repr.r].map(|row| row.map(Complex64::from));
        BasisMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

fn determinant(m: &[[Complex64; 4]; 4]) -> Complex64 {
    let mut a = *m;
    let mut det = ONE;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col] == O {
            return O;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
        }
    }
    det
}

fn invert(m: &[[Complex64; 4]; 4]) -> Option<[[Complex64; 4]; 4]> {
    let mut a = *m;
    let mut inv: [[Complex64; 4]; 4] =
        std::array::from_fn(|j| std::array::from_fn(|k| if j == k { ONE } else { O }));
    for col in 0..4 {
        let pivot = (col..4).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col] == O {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for k in 0..4 {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == O {
                continue;
            }
            for k in 0..4 {
                let (va, vi) = (a[col][k], inv[col][k]);
                a[row][k] -= factor * va;
                inv[row][k] -= factor * vi;
            }
        }
    }
    Some(inv)
}
