use proptest::prelude::*;
use spinfusion::gf::{FieldElement, FieldSpec, GfError};

fn specs() -> Vec<FieldSpec> {
    [(3, 1, 2), (5, 1, 2), (3, 2, 1), (7, 1, 1)]
        .into_iter()
        .map(|(p, m, t)| FieldSpec::build(p, m, t).unwrap())
        .collect()
}

fn element(f: &FieldSpec, level: usize, seed: u64) -> FieldElement {
    FieldElement(seed % f.size(level))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(which in 0usize..4, lvl in 0usize..3, a: u64, b: u64, c: u64) {
        let f = &specs()[which];
        let level = lvl.min(f.height());
        let (a, b, c) = (element(f, level, a), element(f, level, b), element(f, level, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.mul(a, b), f.mul_slow(a, b));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), FieldElement::ONE);
        }
        prop_assert!(f.contains(f.mul(a, b), level));
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism(which in 0usize..4, a: u64, b: u64) {
        let f = &specs()[which];
        let level = f.height();
        let (a, b) = (element(f, level, a), element(f, level, b));
        let q = f.q();
        prop_assert_eq!(f.frobenius(f.mul(a, b), q), f.mul(f.frobenius(a, q), f.frobenius(b, q)));
        prop_assert_eq!(f.frobenius(f.add(a, b), q), f.add(f.frobenius(a, q), f.frobenius(b, q)));
    }

    #[test]
    fn square_class_is_coset_invariant(x in 1u64..81, y in 1u64..81) {
        let f = FieldSpec::build(3, 2, 1).unwrap();
        let (x, y) = (FieldElement(x), FieldElement(y));
        prop_assert_eq!(f.is_square(f.mul(x, f.mul(y, y)), 1), f.is_square(x, 1));
    }

    #[test]
    fn sqrt_is_the_lesser_root(which in 0usize..4, a: u64) {
        let f = &specs()[which];
        let level = f.height();
        let a = element(f, level, a);
        let s = f.mul(a, a);
        let r = f.sqrt(s, level).unwrap();
        prop_assert_eq!(f.mul(r, r), s);
        prop_assert!(r.index() <= f.neg(r).index());
    }
}

#[test]
fn embedding_into_the_tower_is_a_homomorphism() {
    let small = FieldSpec::build(5, 1, 0).unwrap();
    let big = FieldSpec::build(5, 1, 2).unwrap();
    assert_eq!(big.size(2), 625);
    for a in small.elements(0) {
        for b in small.elements(0) {
            assert_eq!(small.mul(a, b), big.mul(a, b));
            assert_eq!(small.add(a, b), big.add(a, b));
        }
    }
    let mid = FieldSpec::build(5, 1, 1).unwrap();
    for a in mid.elements(1) {
        for b in mid.elements(1).step_by(7) {
            assert_eq!(mid.mul(a, b), big.mul(a, b));
        }
    }
}

#[test]
fn frobenius_fixes_exactly_the_base_field() {
    for (p, m, t) in [(3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1), (7, 1, 1)] {
        let f = FieldSpec::build(p, m, t).unwrap();
        let level = f.height();
        if f.size(level) > 6561 {
            continue;
        }
        let q = f.q();
        let fixed = f
            .elements(level)
            .filter(|&x| f.frobenius(x, q) == x)
            .count();
        assert_eq!(fixed as u64, q, "({p},{m},{t})");
        let iterated = f
            .elements(level)
            .all(|x| f.frobenius(f.frobenius(x, q), q) == f.pow(x, q * q));
        assert!(iterated);
    }
    let f9 = FieldSpec::build(3, 1, 1).unwrap();
    assert!(f9
        .elements(1)
        .all(|x| f9.frobenius(f9.frobenius(x, 3), 3) == x));
}

#[test]
fn half_the_units_are_squares() {
    for (p, m, t) in [(3, 1, 2), (5, 1, 2), (3, 2, 1), (7, 1, 1)] {
        let f = FieldSpec::build(p, m, t).unwrap();
        for level in 0..=f.height() {
            let size = f.size(level);
            if size > 625 {
                continue;
            }
            let squares = f
                .elements(level)
                .filter(|x| !x.is_zero() && f.is_square(*x, level))
                .count() as u64;
            assert_eq!(squares, (size - 1) / 2, "({p},{m},{t}) level {level}");
            assert!(!f.is_square(f.nonsquare(level), level));
        }
    }
}

#[test]
fn construction_examples() {
    let f = FieldSpec::build(3, 1, 1).unwrap();
    assert_eq!(f.tower_nonsquares()[0], FieldElement(2));
    assert!(!f.is_square(FieldElement(2), 0));
    assert_eq!(f.sqrt(FieldElement(2), 0), Err(GfError::NotASquare(0)));
    assert_eq!(f.sqrt(FieldElement::ONE, 0), Ok(FieldElement::ONE));
    assert!(f.is_square(FieldElement::ZERO, 0));
    assert_eq!(FieldSpec::build(3, 1, 0).unwrap().height(), 0);
    assert_eq!(FieldSpec::build(9, 1, 0).unwrap_err(), GfError::NonPrime(9));
    // deterministic construction
    assert_eq!(
        format!(
            "{:?}",
            FieldSpec::build(5, 1, 2).unwrap().tower_nonsquares()
        ),
        format!(
            "{:?}",
            FieldSpec::build(5, 1, 2).unwrap().tower_nonsquares()
        )
    );
}
