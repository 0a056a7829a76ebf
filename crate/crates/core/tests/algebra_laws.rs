mod common;

use biquat::algebra::unit_product;
use biquat::{BasisMatrix, BasisTag, Biquaternion, Error};
use common::{biquaternion, c, complex, rng};
use nalgebra::Matrix4;
use num_complex::Complex64;
use proptest::prelude::*;

const BASES: [BasisTag; 2] = [BasisTag::Standard, BasisTag::Cartan];

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| c(re, im))
}

fn arb_biquaternion(basis: BasisTag) -> impl Strategy<Value = Biquaternion> {
    proptest::array::uniform4(arb_complex()).prop_map(move |c| Biquaternion::new(basis, c))
}

fn arb_basis() -> impl Strategy<Value = BasisTag> {
    prop_oneof![Just(BasisTag::Standard), Just(BasisTag::Cartan)]
}

proptest! {
    #[test]
    fn associativity(basis in arb_basis(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, x) = (biquaternion(&mut r, basis), biquaternion(&mut r, basis), biquaternion(&mut r, basis));
        let left = a.mul(&b).unwrap().mul(&x).unwrap();
        let right = a.mul(&b.mul(&x).unwrap()).unwrap();
        prop_assert!(left.distance(&right) <= 1e-12);
    }

    #[test]
    fn distributivity(a in arb_biquaternion(BasisTag::Cartan), b in arb_biquaternion(BasisTag::Cartan), x in arb_biquaternion(BasisTag::Cartan)) {
        let left = a.mul(&b.add(&x).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&x).unwrap()).unwrap();
        prop_assert!(left.distance(&right) <= 1e-12);
        let left = b.add(&x).unwrap().mul(&a).unwrap();
        let right = b.mul(&a).unwrap().add(&x.mul(&a).unwrap()).unwrap();
        prop_assert!(left.distance(&right) <= 1e-12);
    }

    #[test]
    fn conversion_is_a_homomorphism(a in arb_biquaternion(BasisTag::Standard), b in arb_biquaternion(BasisTag::Standard)) {
        let lhs = a.mul(&b).unwrap().to_cartan();
        let rhs = a.to_cartan().mul(&b.to_cartan()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn conversion_round_trip(a in arb_biquaternion(BasisTag::Cartan)) {
        prop_assert!(a.to_standard().to_cartan().distance(&a) <= 1e-14);
    }

    #[test]
    fn complex_scalars_are_central(lambda in arb_complex(), a in arb_biquaternion(BasisTag::Cartan)) {
        let s = Biquaternion::scalar(BasisTag::Cartan, lambda);
        prop_assert!(s.mul(&a).unwrap().distance(&a.mul(&s).unwrap()) <= 1e-12);
        prop_assert!(s.mul(&a).unwrap().distance(&a.scale(lambda)) <= 1e-12);
    }
}

#[test]
fn cartan_units_in_standard_coordinates() {
    let expected = [
        [c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.5), c(-0.5, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.5), c(0.5, 0.0)],
    ];
    for (idx, want) in expected.iter().enumerate() {
        let got = Biquaternion::e(idx + 1).to_standard();
        assert_eq!(&got.c, want, "e{}", idx + 1);
    }
}

#[test]
fn standard_units_in_cartan_coordinates() {
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let expected = [
        [one, one, zero, zero],
        [-i, i, zero, zero],
        [zero, zero, -i, -i],
        [zero, zero, -one, one],
    ];
    for (idx, want) in expected.iter().enumerate() {
        let got = Biquaternion::unit(BasisTag::Standard, idx).to_cartan();
        assert_eq!(&got.c, want, "unit {idx}");
    }
}

#[test]
fn idempotents_and_nilpotents() {
    for (idx, square) in [(1, Some(1)), (2, Some(2)), (3, None), (4, None)] {
        let e = Biquaternion::e(idx);
        let want = square.map_or(Biquaternion::zero(BasisTag::Cartan), Biquaternion::e);
        assert_eq!(e.mul(&e).unwrap(), want);
    }
    assert_eq!(
        Biquaternion::e(1).add(&Biquaternion::e(2)).unwrap(),
        Biquaternion::one(BasisTag::Cartan)
    );
}

#[test]
fn unit_tables_agree_with_conversion() {
    for basis in BASES {
        for a in 0..4 {
            for b in 0..4 {
                let direct = Biquaternion::unit(basis, a)
                    .mul(&Biquaternion::unit(basis, b))
                    .unwrap();
                let other = basis.other();
                let via = Biquaternion::unit(basis, a)
                    .to_basis(other)
                    .mul(&Biquaternion::unit(basis, b).to_basis(other))
                    .unwrap()
                    .to_basis(basis);
                assert!(direct.distance(&via) < 1e-15, "{basis} {a}{b}");
                let expect = match unit_product(basis, a, b) {
                    Some((k, sign)) => Biquaternion::unit(basis, k).scale(c(sign as f64, 0.0)),
                    None => Biquaternion::zero(basis),
                };
                assert_eq!(direct, expect);
            }
        }
    }
}

#[test]
fn mixed_bases_are_rejected() {
    let a = Biquaternion::e(1);
    let b = Biquaternion::one(BasisTag::Standard);
    assert!(matches!(a.mul(&b), Err(Error::BasisMismatch { .. })));
}

#[test]
fn cartan_to_standard_matrix_reproduces_to_standard() {
    let m = BasisMatrix::cartan_to_standard();
    let mut r = rng(7);
    for _ in 0..20 {
        let a = biquaternion(&mut r, BasisTag::Cartan);
        let via_matrix = a.change_basis(&m).unwrap();
        let direct = a.to_standard();
        for s in 0..4 {
            assert!((via_matrix[s] - direct.c[s]).norm() < 1e-14);
        }
    }
}

fn to_nalgebra(m: &BasisMatrix) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| m.rows()[i][j])
}

#[test]
fn inverse_matches_nalgebra() {
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 50 {
        let rows = std::array::from_fn(|_| std::array::from_fn(|_| complex(&mut r)));
        let Ok(m) = BasisMatrix::new(rows) else {
            continue;
        };
        let ours = to_nalgebra(&m.inverse().unwrap());
        let theirs = to_nalgebra(&m).try_inverse().unwrap();
        let scale = theirs.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for (x, y) in ours.iter().zip(theirs.iter()) {
            assert!((x - y).norm() <= 1e-10 * scale);
        }
        let det_ours = m.determinant();
        let det_theirs = to_nalgebra(&m).determinant();
        assert!((det_ours - det_theirs).norm() <= 1e-12 * det_theirs.norm().max(1.0));
        checked += 1;
    }
}

#[test]
fn basis_change_round_trip() {
    let mut r = rng(12);
    let m = BasisMatrix::new(std::array::from_fn(|_| {
        std::array::from_fn(|_| complex(&mut r))
    }))
    .unwrap();
    let back = m.inverse().unwrap();
    for _ in 0..20 {
        let a = biquaternion(&mut r, BasisTag::Cartan);
        let there = m.apply(&a.c);
        let again = back.apply(&there);
        for s in 0..4 {
            assert!((again[s] - a.c[s]).norm() < 1e-9);
        }
    }
}

#[test]
fn singular_matrix_is_rejected() {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let row = [one, one, zero, zero];
    let err =
        BasisMatrix::new([row, row, [zero, zero, one, zero], [zero, zero, zero, one]]).unwrap_err();
    assert!(matches!(err, Error::SingularMatrix { .. }));
}

#[test]
fn json_shape() {
    let q = Biquaternion::standard([c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(-0.5, 0.0)]);
    let text = serde_json::to_string(&q).unwrap();
    assert_eq!(
        text,
        r#"{"basis":"standard","c":[[1.0,0.0],[0.0,2.0],[0.0,0.0],[-0.5,0.0]]}"#
    );
    let back: Biquaternion = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);
}
