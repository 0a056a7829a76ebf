//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use biquat::{BasisTag, Biquaternion, HoloExpr, VarId};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real and imaginary parts uniform in `[-1, 1)`.
pub fn complex(r: &mut ChaCha8Rng) -> Complex64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn biquaternion(r: &mut ChaCha8Rng, basis: BasisTag) -> Biquaternion {
    Biquaternion::new(basis, std::array::from_fn(|_| complex(r)))
}

/// A point in the unit polydisc.
pub fn point(r: &mut ChaCha8Rng) -> [Complex64; 4] {
    std::array::from_fn(|_| {
        let rad: f64 = r.gen::<f64>().sqrt();
        Complex64::from_polar(rad, r.gen_range(0.0..std::f64::consts::TAU))
    })
}

/// Random polynomial of total degree at most `degree` in the given
/// variables, built as an unnormalized tree of products and powers.
pub fn polynomial(r: &mut ChaCha8Rng, vars: &[VarId], degree: u32) -> HoloExpr {
    let terms = r.gen_range(1..=5);
    let mut acc = HoloExpr::zero();
    for _ in 0..terms {
        let mut mono = HoloExpr::constant(complex(r));
        let mut left = r.gen_range(0..=degree);
        while left > 0 && !vars.is_empty() {
            let v = vars[r.gen_range(0..vars.len())];
            let k = r.gen_range(1..=left);
            mono = mono * HoloExpr::var(v).pow(k);
            left -= k;
        }
        acc = acc + mono;
    }
    acc
}

/// `c * exp(a1 v1 + a2 v2 + a3 v3 + a4 v4 + b)`.
pub fn exp_linear(r: &mut ChaCha8Rng) -> HoloExpr {
    let coeffs = std::array::from_fn(|_| complex(r));
    HoloExpr::constant(complex(r)) * HoloExpr::linear(coeffs, complex(r)).exp()
}

/// Random expression tree over all node kinds, kept small enough that
/// normalization stays cheap.
pub fn tree(r: &mut ChaCha8Rng, depth: u32) -> HoloExpr {
    if depth == 0 || r.gen_bool(0.25) {
        return if r.gen_bool(0.5) {
            HoloExpr::var(VarId::ALL[r.gen_range(0..4)])
        } else {
            HoloExpr::Const(small_complex(r))
        };
    }
    let sub = |r: &mut ChaCha8Rng| Box::new(tree(r, depth - 1));
    match r.gen_range(0..6) {
        0 | 1 => HoloExpr::Add(sub(r), sub(r)),
        2 => HoloExpr::Mul(sub(r), sub(r)),
        3 => HoloExpr::Neg(sub(r)),
        4 => HoloExpr::Pow(sub(r), r.gen_range(0..=3)),
        _ => HoloExpr::Exp(Box::new(tree(r, depth.min(2) - 1))),
    }
}

/// Coefficients on a coarse grid, including exact zeros and negatives.
fn small_complex(r: &mut ChaCha8Rng) -> Complex64 {
    let pick = |r: &mut ChaCha8Rng| match r.gen_range(0..4) {
        0 => 0.0,
        1 => r.gen_range(-4..=4) as f64,
        2 => r.gen_range(-40..=40) as f64 / 8.0,
        _ => r.gen_range(-1.0..1.0),
    };
    c(pick(r), pick(r))
}
