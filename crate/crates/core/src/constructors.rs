//! Closed-form solution builders and the named weight families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{BasisTag, Biquaternion, ComplexPair};
use crate::error::{Error, Result};
use crate::holoexpr::{HoloExpr, Point4, Substitution, VarId};
use crate::operators::{BqFunction, PsiWeights, Side};

/// Degeneracy threshold for `|alpha1 alpha2 - alpha3 alpha4|`.
pub const DEGENERACY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn lin(c1: Complex64, c2: Complex64, c3: Complex64, c4: Complex64) -> HoloExpr {
    HoloExpr::linear([c1, c2, c3, c4], ZERO)
}

/// `z1 = t0 - i t1, z2 = t0 + i t1, z3 = -i t2 - t3, z4 = -i t2 + t3`,
/// mapping Cartan variables to expressions in standard variables.
pub fn cartan_vars_in_standard() -> Substitution {
    Substitution::total([
        lin(ONE, -I, ZERO, ZERO),
        lin(ONE, I, ZERO, ZERO),
        lin(ZERO, ZERO, -I, -ONE),
        lin(ZERO, ZERO, -I, ONE),
    ])
}

/// Inverse of [`cartan_vars_in_standard`]:
/// `t0 = (z1 + z2)/2, t1 = i(z1 - z2)/2, t2 = i(z3 + z4)/2, t3 = (z4 - z3)/2`.
pub fn standard_vars_in_cartan() -> Substitution {
    let h = 0.5 * ONE;
    let ih = 0.5 * I;
    Substitution::total([
        lin(h, h, ZERO, ZERO),
        lin(ih, -ih, ZERO, ZERO),
        lin(ZERO, ZERO, ih, ih),
        lin(ZERO, ZERO, -h, h),
    ])
}

/// Numeric `z(t)`.
pub fn z_of_t(t: &Point4) -> Point4 {
    cartan_vars_in_standard().eval_point(t)
}

/// Numeric `t(z)`.
pub fn t_of_z(z: &Point4) -> Point4 {
    standard_vars_in_cartan().eval_point(z)
}

/// Rewrites a function of `t` with standard coefficients as a function of
/// `z` with Cartan coefficients.
pub fn standard_to_cartan_vars(f: &BqFunction) -> Result<BqFunction> {
    f.require(BasisTag::Standard)?;
    Ok(f.with_coefficients_in(BasisTag::Cartan)
        .substitute(&standard_vars_in_cartan()))
}

/// Rewrites a function of `z` with Cartan coefficients as a function of `t`
/// with standard coefficients.
pub fn cartan_to_standard_vars(f: &BqFunction) -> Result<BqFunction> {
    f.require(BasisTag::Cartan)?;
    Ok(f.with_coefficients_in(BasisTag::Standard)
        .substitute(&cartan_vars_in_standard()))
}

/// Converts to the other coordinate system.
pub fn switch_coordinates(f: &BqFunction, target: BasisTag) -> BqFunction {
    match (f.basis, target) {
        (BasisTag::Standard, BasisTag::Cartan) => f
            .with_coefficients_in(BasisTag::Cartan)
            .substitute(&standard_vars_in_cartan()),
        (BasisTag::Cartan, BasisTag::Standard) => f
            .with_coefficients_in(BasisTag::Standard)
            .substitute(&cartan_vars_in_standard()),
        _ => f.clone(),
    }
}

fn forbid(function: &'static str, g: &HoloExpr, vars: &[VarId]) -> Result<()> {
    match vars.iter().find(|&&v| g.contains_var(v)) {
        Some(&var) => Err(Error::VariableViolation { function, var }),
        None => Ok(()),
    }
}

/// Solution of the Cauchy-Fueter equation in Cartan variables built from
/// `g1(z2, z3)` and `g2(z1, z4)`:
///
/// ```text
/// f = g1 e1 + g2 e2 + (z3 dg2/dz1 + z2 dg2/dz4) e3 + (z4 dg1/dz2 + z1 dg1/dz3) e4
/// ```
pub fn cf_solution(g1: &HoloExpr, g2: &HoloExpr) -> Result<BqFunction> {
    forbid("cf_solution g1", g1, &[VarId::V1, VarId::V4])?;
    forbid("cf_solution g2", g2, &[VarId::V2, VarId::V3])?;
    let (z1, z2, z3, z4) = (
        HoloExpr::v(1),
        HoloExpr::v(2),
        HoloExpr::v(3),
        HoloExpr::v(4),
    );
    let f3 = HoloExpr::sum(
        HoloExpr::product(z3, g2.diff(VarId::V1)),
        HoloExpr::product(z2, g2.diff(VarId::V4)),
    );
    let f4 = HoloExpr::sum(
        HoloExpr::product(z4, g1.diff(VarId::V2)),
        HoloExpr::product(z1, g1.diff(VarId::V3)),
    );
    Ok(BqFunction::cartan([g1.clone(), g2.clone(), f3, f4]))
}

/// Weights for the bicomplex Cauchy-Riemann analog `e2 df/dz1 = e1 df/dz2`
/// (left) or `df/dz1 e2 = df/dz2 e1` (right, used with the right operator).
/// Both sides use the same weights `psi = (e2, -e1, 0, 0)`; the side only
/// selects which operator a job applies.
pub fn bc_psi(_side: Side) -> PsiWeights {
    let zero = Biquaternion::zero(BasisTag::Cartan);
    PsiWeights::new([Biquaternion::e(2), Biquaternion::e(1).neg(), zero, zero])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialPsiParams {
    pub alpha: [Complex64; 4],
    pub lambda: Complex64,
    pub mu: Complex64,
    pub theta: Complex64,
    pub vartheta: Complex64,
    pub nu: Complex64,
    pub eta: Complex64,
}

impl SpecialPsiParams {
    /// `alpha1 alpha2 - alpha3 alpha4`, which must stay away from zero.
    pub fn gap(&self) -> Complex64 {
        let a = &self.alpha;
        a[0] * a[1] - a[2] * a[3]
    }

    pub fn validate(&self) -> Result<()> {
        let gap = self.gap();
        if gap.norm().is_nan() || gap.norm() <= DEGENERACY_TOL {
            return Err(Error::DegenerateParams { gap });
        }
        Ok(())
    }

    /// `(lambda z1 - z2, theta z1 - z3, nu z1 - z4)`, the arguments of `f1`, `f3`.
    pub fn tilde_zetas(&self) -> [HoloExpr; 3] {
        characteristic(self.lambda, self.theta, self.nu)
    }

    /// `(mu z1 - z2, vartheta z1 - z3, eta z1 - z4)`, the arguments of `f2`, `f4`.
    pub fn zetas(&self) -> [HoloExpr; 3] {
        characteristic(self.mu, self.vartheta, self.eta)
    }
}

/// Integrals `(a z1 - z2, b z1 - z3, c z1 - z4)` of `dz1/1 = dz2/a = dz3/b = dz4/c`.
pub fn characteristic(a: Complex64, b: Complex64, c: Complex64) -> [HoloExpr; 3] {
    [
        lin(a, -ONE, ZERO, ZERO),
        lin(b, ZERO, -ONE, ZERO),
        lin(c, ZERO, ZERO, -ONE),
    ]
}

/// `dg/dz1 + a dg/dz2 + b dg/dz3 + c dg/dz4`.
pub fn transport(g: &HoloExpr, a: Complex64, b: Complex64, c: Complex64) -> HoloExpr {
    let terms = [
        g.diff(VarId::V1),
        HoloExpr::scaled(a, g.diff(VarId::V2)),
        HoloExpr::scaled(b, g.diff(VarId::V3)),
        HoloExpr::scaled(c, g.diff(VarId::V4)),
    ];
    terms.into_iter().fold(HoloExpr::zero(), HoloExpr::sum)
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    alpha: [ComplexPair; 4],
    lambda: ComplexPair,
    mu: ComplexPair,
    theta: ComplexPair,
    vartheta: ComplexPair,
    nu: ComplexPair,
    eta: ComplexPair,
}

impl Serialize for SpecialPsiParams {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ParamsRepr {
            alpha: self.alpha.map(ComplexPair::from),
            lambda: self.lambda.into(),
            mu: self.mu.into(),
            theta: self.theta.into(),
            vartheta: self.vartheta.into(),
            nu: self.nu.into(),
            eta: self.eta.into(),
        }
        .serialize(serializer)
    }
}

/// Weights
///
/// ```text
/// psi1 = alpha1 e1 + alpha2 e2 + alpha3 e3 + alpha4 e4
/// psi2 = lambda alpha1 e1 + mu alpha2 e2 + mu alpha3 e3 + lambda alpha4 e4
/// psi3 = theta alpha1 e1 + vartheta alpha2 e2 + vartheta alpha3 e3 + theta alpha4 e4
/// psi4 = nu alpha1 e1 + eta alpha2 e2 + eta alpha3 e3 + nu alpha4 e4
/// ```
pub fn special_psi(p: &SpecialPsiParams) -> Result<PsiWeights> {
    p.validate()?;
    let a = p.alpha;
    let pattern = |x: Complex64, y: Complex64| [x * a[0], y * a[1], y * a[2], x * a[3]];
    Ok(PsiWeights::from_cartan_coefficients([
        a,
        pattern(p.lambda, p.mu),
        pattern(p.theta, p.vartheta),
        pattern(p.nu, p.eta),
    ]))
}

/// `f = g1(~zeta) e1 + g2(zeta) e2 + g3(~zeta) e3 + g4(zeta) e4`.
///
/// Each `g` is written in three slots `v1, v2, v3`; slot `i` receives the
/// `i`-th characteristic variable. `v4` must not appear.
pub fn special_solution(p: &SpecialPsiParams, g: &[HoloExpr; 4]) -> Result<BqFunction> {
    p.validate()?;
    for (idx, gi) in g.iter().enumerate() {
        forbid(SLOT_NAMES[idx], gi, &[VarId::V4])?;
    }
    let slots = |args: [HoloExpr; 3]| {
        let [a, b, c] = args;
        Substitution::new()
            .with(VarId::V1, a)
            .with(VarId::V2, b)
            .with(VarId::V3, c)
    };
    let tilde = slots(p.tilde_zetas());
    let plain = slots(p.zetas());
    Ok(BqFunction::cartan([
        g[0].substitute(&tilde),
        g[1].substitute(&plain),
        g[2].substitute(&tilde),
        g[3].substitute(&plain),
    ]))
}

const SLOT_NAMES: [&str; 4] = [
    "special_solution g1",
    "special_solution g2",
    "special_solution g3",
    "special_solution g4",
];
