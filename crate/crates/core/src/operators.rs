//! Weighted Dirac operators and friends acting on `H(C)`-valued functions.
//!
//! With weights `psi_j = sum_s w_j[s] e_s` the left operator is
//! `sum_j psi_j d/dz_j` and the right operator is `sum_j (d/dz_j) psi_j`.
//! Expanded through the Cartan table, the left operator's components are
//!
//! ```text
//! e1: sum_j d_j(w_j[1] f1 + w_j[3] f4)     e2: sum_j d_j(w_j[2] f2 + w_j[4] f3)
//! e3: sum_j d_j(w_j[1] f3 + w_j[3] f2)     e4: sum_j d_j(w_j[2] f4 + w_j[4] f1)
//! ```
//!
//! and the right operator's are
//!
//! ```text
//! e1: sum_j d_j(w_j[1] f1 + w_j[4] f3)     e2: sum_j d_j(w_j[2] f2 + w_j[3] f4)
//! e3: sum_j d_j(w_j[3] f1 + w_j[2] f3)     e4: sum_j d_j(w_j[4] f2 + w_j[1] f4)
//! ```

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    conversion_matrix, unit_product, BasisMatrix, BasisTag, Biquaternion, ComplexPair, UnitProduct,
};
use crate::error::{Error, Result};
use crate::holoexpr::{cauchy_derivative, HoloExpr, Point4, Substitution, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Schema(format!(
                "unknown side `{other}` (expected \"left\" or \"right\")"
            ))),
        }
    }
}

/// The weights `(psi1, psi2, psi3, psi4)`, always held in the Cartan basis.
///
/// Their Cartan coefficients are the `alpha`, `beta`, `gamma`, `delta` of the
/// componentwise expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiWeights {
    psi: [Biquaternion; 4],
}

impl PsiWeights {
    /// Accepts weights in either basis; they are stored converted to Cartan.
    pub fn new(psi: [Biquaternion; 4]) -> Self {
        Self {
            psi: psi.map(|p| p.to_cartan()),
        }
    }

    pub fn from_cartan_coefficients(w: [[Complex64; 4]; 4]) -> Self {
        Self {
            psi: w.map(Biquaternion::cartan),
        }
    }

    /// `psi_j = e_j`: the plain Cartan-basis Dirac operator.
    pub fn cartan_units() -> Self {
        Self::new([1, 2, 3, 4].map(Biquaternion::e))
    }

    /// `(e2, e1, -e4, -e3)`, the Cauchy-Fueter operator in Cartan variables
    /// up to a factor 2.
    pub fn cauchy_fueter_cartan() -> Self {
        Self::new([
            Biquaternion::e(2),
            Biquaternion::e(1),
            Biquaternion::e(4).neg(),
            Biquaternion::e(3).neg(),
        ])
    }

    /// `(1, I, J, K)`.
    pub fn quaternion_units() -> Self {
        Self::new([0, 1, 2, 3].map(|k| Biquaternion::unit(BasisTag::Standard, k)))
    }

    pub fn psi(&self) -> &[Biquaternion; 4] {
        &self.psi
    }

    /// Cartan coefficient `s` (0-based) of weight `j` (0-based).
    pub fn w(&self, j: usize, s: usize) -> Complex64 {
        self.psi[j].c[s]
    }

    pub fn alpha(&self) -> [Complex64; 4] {
        self.psi[0].c
    }

    pub fn beta(&self) -> [Complex64; 4] {
        self.psi[1].c
    }

    pub fn gamma(&self) -> [Complex64; 4] {
        self.psi[2].c
    }

    pub fn delta(&self) -> [Complex64; 4] {
        self.psi[3].c
    }

    pub fn approx_eq(&self, other: &PsiWeights, tol: f64) -> bool {
        (0..4).all(|j| self.psi[j].approx_eq(&other.psi[j], tol))
    }

    pub fn to_basis(&self, basis: BasisTag) -> [Biquaternion; 4] {
        self.psi.map(|p| p.to_basis(basis))
    }
}

impl Serialize for PsiWeights {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.psi.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PsiWeights {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let psi = <[Biquaternion; 4]>::deserialize(deserializer)?;
        Ok(PsiWeights::new(psi))
    }
}

/// `f = sum_s f_s u_s` with holomorphic components `f_s` and units `u_s` of
/// the tagged basis. Component variables are `z1..z4` for Cartan functions and
/// `t0..t3` for standard ones.
#[derive(Debug, Clone, PartialEq)]
pub struct BqFunction {
    pub basis: BasisTag,
    pub f: [HoloExpr; 4],
}

impl BqFunction {
    pub fn new(basis: BasisTag, f: [HoloExpr; 4]) -> Self {
        Self { basis, f }
    }

    pub fn cartan(f: [HoloExpr; 4]) -> Self {
        Self::new(BasisTag::Cartan, f)
    }

    pub fn standard(f: [HoloExpr; 4]) -> Self {
        Self::new(BasisTag::Standard, f)
    }

    pub fn zero(basis: BasisTag) -> Self {
        Self::new(basis, std::array::from_fn(|_| HoloExpr::zero()))
    }

    pub fn constant(q: &Biquaternion) -> Self {
        Self::new(q.basis, q.c.map(HoloExpr::constant))
    }

    /// `g * u_index` for a scalar expression `g` and a 0-based unit index.
    pub fn along(basis: BasisTag, index: usize, g: HoloExpr) -> Self {
        let mut f = Self::zero(basis);
        f.f[index] = g;
        f
    }

    pub fn require(&self, basis: BasisTag) -> Result<()> {
        if self.basis != basis {
            return Err(Error::BasisMismatch {
                expected: basis,
                found: self.basis,
            });
        }
        Ok(())
    }

    pub fn eval(&self, p: &Point4) -> Biquaternion {
        Biquaternion::new(self.basis, std::array::from_fn(|s| self.f[s].eval(p)))
    }

    pub fn map(&self, mut op: impl FnMut(&HoloExpr) -> HoloExpr) -> Self {
        Self::new(self.basis, std::array::from_fn(|s| op(&self.f[s])))
    }

    pub fn diff(&self, v: VarId) -> Self {
        self.map(|e| e.diff(v))
    }

    pub fn substitute(&self, map: &Substitution) -> Self {
        self.map(|e| e.substitute(map))
    }

    pub fn normalize(&self) -> Self {
        self.map(HoloExpr::normalize)
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().all(HoloExpr::is_zero)
    }

    pub fn normalized_eq(&self, other: &BqFunction) -> bool {
        self.basis == other.basis && (0..4).all(|s| self.f[s].normalized_eq(&other.f[s]))
    }

    pub fn add(&self, other: &BqFunction) -> Result<Self> {
        self.require(other.basis)?;
        Ok(Self::new(
            self.basis,
            std::array::from_fn(|s| HoloExpr::sum(self.f[s].clone(), other.f[s].clone())),
        ))
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        self.map(|e| HoloExpr::scaled(lambda, e.clone()))
    }

    /// Re-expresses the coefficient vector in `target` without touching the
    /// variables of the components.
    pub fn with_coefficients_in(&self, target: BasisTag) -> Self {
        match conversion_matrix(self.basis, target) {
            None => self.clone(),
            Some(m) => Self::new(
                target,
                std::array::from_fn(|j| linear_combination(&m[j], &self.f)),
            ),
        }
    }

    /// `w * f` through the multiplication table of the shared basis.
    pub fn left_mul_const(&self, w: &Biquaternion) -> Result<Self> {
        self.require(w.basis)?;
        Ok(self.table_product(w, |a, b| unit_product(self.basis, a, b)))
    }

    /// `f * w` through the multiplication table of the shared basis.
    pub fn right_mul_const(&self, w: &Biquaternion) -> Result<Self> {
        self.require(w.basis)?;
        Ok(self.table_product(w, |a, b| unit_product(self.basis, b, a)))
    }

    // `product(a, b)` is the unit product for weight unit `a` and function
    // unit `b`, in whichever order the caller needs.
    fn table_product(
        &self,
        w: &Biquaternion,
        product: impl Fn(usize, usize) -> UnitProduct,
    ) -> Self {
        let mut out: [HoloExpr; 4] = std::array::from_fn(|_| HoloExpr::zero());
        for a in 0..4 {
            for b in 0..4 {
                let Some((idx, sign)) = product(a, b) else {
                    continue;
                };
                let wa = if sign > 0 { w.c[a] } else { -w.c[a] };
                if wa == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let term = HoloExpr::scaled(wa, self.f[b].clone());
                out[idx] = HoloExpr::sum(std::mem::replace(&mut out[idx], HoloExpr::zero()), term);
            }
        }
        Self::new(self.basis, out)
    }
}

fn linear_combination(row: &[Complex64; 4], f: &[HoloExpr; 4]) -> HoloExpr {
    row.iter().zip(f).fold(HoloExpr::zero(), |acc, (&c, e)| {
        if c == Complex64::new(0.0, 0.0) {
            acc
        } else {
            HoloExpr::sum(acc, HoloExpr::scaled(c, e.clone()))
        }
    })
}

/// `(weight a, function component fa, weight b, function component fb)` per
/// output component: `out = sum_j d_j(w_j[a] f[fa] + w_j[b] f[fb])`.
type Pattern = [(usize, usize, usize, usize); 4];

const LEFT_PATTERN: Pattern = [(0, 0, 2, 3), (1, 1, 3, 2), (0, 2, 2, 1), (1, 3, 3, 0)];
const RIGHT_PATTERN: Pattern = [(0, 0, 3, 2), (1, 1, 2, 3), (2, 0, 1, 2), (3, 1, 0, 3)];

fn expand_dirac(psi: &PsiWeights, f: &BqFunction, pattern: &Pattern) -> Result<BqFunction> {
    f.require(BasisTag::Cartan)?;
    let component = |&(a, fa, b, fb): &(usize, usize, usize, usize)| {
        VarId::ALL
            .iter()
            .enumerate()
            .fold(HoloExpr::zero(), |acc, (j, &v)| {
                let inner = HoloExpr::sum(
                    HoloExpr::scaled(psi.w(j, a), f.f[fa].clone()),
                    HoloExpr::scaled(psi.w(j, b), f.f[fb].clone()),
                );
                HoloExpr::sum(acc, inner.diff(v))
            })
    };
    Ok(BqFunction::cartan(std::array::from_fn(|c| {
        component(&pattern[c])
    })))
}

/// `sum_j psi_j df/dz_j`, expanded componentwise.
pub fn left_dirac(psi: &PsiWeights, f: &BqFunction) -> Result<BqFunction> {
    expand_dirac(psi, f, &LEFT_PATTERN)
}

/// `sum_j (df/dz_j) psi_j`, expanded componentwise.
pub fn right_dirac(psi: &PsiWeights, f: &BqFunction) -> Result<BqFunction> {
    expand_dirac(psi, f, &RIGHT_PATTERN)
}

pub fn dirac(psi: &PsiWeights, f: &BqFunction, side: Side) -> Result<BqFunction> {
    match side {
        Side::Left => left_dirac(psi, f),
        Side::Right => right_dirac(psi, f),
    }
}

/// Same operator as [`dirac`], computed by generic table multiplication
/// instead of the hard-coded expansion. Kept as a cross-check.
pub fn dirac_by_table(psi: &PsiWeights, f: &BqFunction, side: Side) -> Result<BqFunction> {
    f.require(BasisTag::Cartan)?;
    let mut acc = BqFunction::zero(BasisTag::Cartan);
    for (j, &v) in VarId::ALL.iter().enumerate() {
        let d = f.diff(v);
        let term = match side {
            Side::Left => d.left_mul_const(&psi.psi[j])?,
            Side::Right => d.right_mul_const(&psi.psi[j])?,
        };
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `df/dt0 + I df/dt1 + J df/dt2 + K df/dt3` for a standard-tagged `f`.
pub fn cauchy_fueter(f: &BqFunction) -> Result<BqFunction> {
    f.require(BasisTag::Standard)?;
    let mut acc = BqFunction::zero(BasisTag::Standard);
    for (j, &v) in VarId::ALL.iter().enumerate() {
        let unit = Biquaternion::unit(BasisTag::Standard, j);
        acc = acc.add(&f.diff(v).left_mul_const(&unit)?)?;
    }
    Ok(acc)
}

/// Componentwise `sum_s d^2 f / dv_s^2`.
pub fn laplacian(f: &BqFunction) -> BqFunction {
    f.map(|e| {
        VarId::ALL.iter().fold(HoloExpr::zero(), |acc, &v| {
            HoloExpr::sum(acc, e.diff(v).diff(v))
        })
    })
}

/// Weights induced on `z`-coordinates when the Cartan Dirac operator
/// `sum_j e_j d/dt_j` is rewritten through `z_s = t1 k_s + t2 m_s + t3 n_s + t4 r_s`:
///
/// ```text
/// psi_s = sum_a i_a (k_a k_s + m_a m_s + n_a n_s + r_a r_s)
/// ```
///
/// The sums give `psi_s` against `{i1..i4}`; the result is converted back to
/// the Cartan basis.
pub fn induced_psi(m: &BasisMatrix) -> Result<PsiWeights> {
    let back = m.inverse()?;
    let (k, mm, n, r) = (m.k(), m.m(), m.n(), m.r());
    let psi = std::array::from_fn(|s| {
        let in_target: [Complex64; 4] =
            std::array::from_fn(|a| k[a] * k[s] + mm[a] * mm[s] + n[a] * n[s] + r[a] * r[s]);
        Biquaternion::cartan(back.apply(&in_target))
    });
    Ok(PsiWeights { psi })
}

/// The linear map `z_s = t1 k_s + t2 m_s + t3 n_s + t4 r_s`, as a substitution
/// on the variables `v1..v4` (reading `v_j` as `t_j` on the right-hand side).
pub fn basis_change_variables(m: &BasisMatrix) -> Substitution {
    let rows = m.rows();
    Substitution::total(std::array::from_fn(|s| {
        HoloExpr::linear(
            std::array::from_fn(|j| rows[j][s]),
            Complex64::new(0.0, 0.0),
        )
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResidual {
    pub point: Point4,
    pub residual: Biquaternion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Largest residual coefficient modulus over all points, in the residual's basis.
    pub max_abs: f64,
    pub per_point: Vec<PointResidual>,
    /// The residual normalizes to the literal zero expression.
    pub symbolic_zero: bool,
}

impl ResidualReport {
    /// Evaluates an already-computed residual at every point. The
    /// normalized form is evaluated, so a symbolically zero residual
    /// reports exactly zero.
    pub fn from_residual(residual: &BqFunction, points: &[Point4]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("no sample points".into()));
        }
        let residual = residual.normalize();
        let symbolic_zero = residual.is_zero();
        let per_point: Vec<PointResidual> = points
            .par_iter()
            .map(|p| PointResidual {
                point: *p,
                residual: residual.eval(p),
            })
            .collect();
        let max_abs = per_point
            .iter()
            .map(|r| r.residual.max_abs())
            .fold(0.0, f64::max);
        Ok(Self {
            max_abs,
            per_point,
            symbolic_zero,
        })
    }
}

#[derive(Serialize)]
struct PointRepr {
    point: [ComplexPair; 4],
    residual: [ComplexPair; 4],
}

#[derive(Serialize)]
struct ReportRepr {
    symbolic_zero: bool,
    max_abs: f64,
    points: Vec<PointRepr>,
}

impl Serialize for ResidualReport {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ReportRepr {
            symbolic_zero: self.symbolic_zero,
            max_abs: self.max_abs,
            points: self
                .per_point
                .iter()
                .map(|r| PointRepr {
                    point: r.point.map(ComplexPair::from),
                    residual: r.residual.c.map(ComplexPair::from),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Applies the chosen Dirac operator symbolically and samples the residual.
pub fn residual_norm(
    psi: &PsiWeights,
    f: &BqFunction,
    side: Side,
    points: &[Point4],
) -> Result<ResidualReport> {
    let residual = dirac(psi, f, side)?;
    ResidualReport::from_residual(&residual, points)
}

/// Dirac operator at a single point with every partial derivative taken by
/// the Cauchy-integral oracle and the weights applied by plain biquaternion
/// multiplication.
pub fn dirac_oracle(
    psi: &PsiWeights,
    f: &BqFunction,
    side: Side,
    p: &Point4,
    radius: f64,
    n: usize,
) -> Result<Biquaternion> {
    f.require(BasisTag::Cartan)?;
    weighted_oracle(psi.psi(), f, side, p, radius, n)
}

/// `sum_j w_j d_j f` (or `sum_j d_j f w_j`) at `p` for weights in any basis;
/// the result is in `f`'s basis.
pub fn weighted_oracle(
    weights: &[Biquaternion; 4],
    f: &BqFunction,
    side: Side,
    p: &Point4,
    radius: f64,
    n: usize,
) -> Result<Biquaternion> {
    let mut acc = Biquaternion::zero(f.basis);
    for (j, &v) in VarId::ALL.iter().enumerate() {
        let mut d = [Complex64::new(0.0, 0.0); 4];
        for s in 0..4 {
            d[s] = cauchy_derivative(&f.f[s], v, p, radius, n)?;
        }
        let d = Biquaternion::new(f.basis, d);
        let w = weights[j].to_basis(f.basis);
        let term = match side {
            Side::Left => w.mul(&d)?,
            Side::Right => d.mul(&w)?,
        };
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `n` points drawn uniformly from the unit polydisc `|v_s| < 1`.
pub fn sample_points(seed: u64, n: usize) -> Vec<Point4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            std::array::from_fn(|_| {
                let r: f64 = rng.gen::<f64>().sqrt();
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, theta)
            })
        })
        .collect()
}
