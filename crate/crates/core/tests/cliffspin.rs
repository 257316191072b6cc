use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinfusion::cliffspin::*;
use spinfusion::gf::{FieldElement, FieldSpec};
use spinfusion::linalg::{sl2_elements, Mat, M2};

type Fe = FieldElement;

fn diag_space(f: &Arc<FieldSpec>, d: &[i64]) -> Arc<QuadSpace> {
    let n = d.len();
    let mut g = Mat::zeros(n, n);
    for (i, &x) in d.iter().enumerate() {
        g.set(i, i, f.from_int(x));
    }
    QuadSpace::new(f.clone(), 0, g).unwrap()
}

fn random_element(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> CliffordElement {
    let f = space.field();
    let coeffs = (0..1 << space.dim()).map(|_| f.random(0, rng)).collect();
    CliffordElement::from_coeffs(space, coeffs).unwrap()
}

fn random_anisotropic(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    loop {
        let v: Vec<Fe> = (0..space.dim())
            .map(|_| space.field().random(0, rng))
            .collect();
        if !space.norm(&v).is_zero() {
            return v;
        }
    }
}

/// A random element of Ω as a product of an even number of reflections with square
/// total norm.
fn random_omega(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> OrthMatrix {
    let f = space.field().clone();
    loop {
        let k = 2 * rng.gen_range(1..=space.dim());
        let mut g = OrthMatrix::identity(space);
        let mut s = Fe::ONE;
        for _ in 0..k {
            let v = random_anisotropic(space, rng);
            s = f.mul(s, space.norm(&v));
            g = g.compose(&OrthMatrix::reflection(space, &v));
        }
        if f.is_square(s, 0) {
            return g;
        }
    }
}

fn spaces(q: u64) -> Vec<Arc<QuadSpace>> {
    let f = Arc::new(FieldSpec::build(q, 1, 0).unwrap());
    let iso = ExceptionalIsos::new(f.clone(), 0).unwrap();
    let v7 = QuadSpace::direct_sum(iso.v4(), iso.v3());
    vec![iso.v3().clone(), iso.v4().clone(), v7]
}

#[test]
fn monomial_relations() {
    let f = Arc::new(FieldSpec::build(5, 1, 0).unwrap());
    let v = diag_space(&f, &[1, 2, 3]);
    let e1 = CliffordElement::monomial(&v, 1);
    let e2 = CliffordElement::monomial(&v, 2);
    assert_eq!(
        e1.mul(&e1).unwrap(),
        CliffordElement::scalar(&v, f.from_int(1))
    );
    assert!(e1.mul(&e2).unwrap().add(&e2.mul(&e1).unwrap()).is_zero());
    let e12 = e1.mul(&e2).unwrap();
    assert_eq!(
        e12.mul(&e12).unwrap(),
        CliffordElement::scalar(&v, f.from_int(-2))
    );
    assert_eq!(e12.reversal(), e12.neg());
    let e123 = e12.mul(&CliffordElement::monomial(&v, 4)).unwrap();
    assert_eq!(e123.reversal(), e123.neg());
    assert_eq!(
        CliffordElement::one(&v).reversal(),
        CliffordElement::one(&v)
    );
}

#[test]
fn space_mismatch_is_reported() {
    let f = Arc::new(FieldSpec::build(3, 1, 0).unwrap());
    let a = diag_space(&f, &[1, 1]);
    let b = diag_space(&f, &[1, 1]);
    let x = CliffordElement::one(&a);
    let y = CliffordElement::one(&b);
    assert_eq!(x.mul(&y).unwrap_err(), CliffError::SpaceMismatch);
}

#[test]
fn associativity_and_reversal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3, 5] {
        for space in spaces(q) {
            for _ in 0..500 {
                let a = random_element(&space, &mut rng);
                let b = random_element(&space, &mut rng);
                let c = random_element(&space, &mut rng);
                let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
                let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
            }
            for _ in 0..100 {
                let a = random_element(&space, &mut rng);
                let b = random_element(&space, &mut rng);
                assert_eq!(
                    a.mul(&b).unwrap().reversal(),
                    b.reversal().mul(&a.reversal()).unwrap()
                );
            }
        }
    }
}

#[test]
fn reflection_factorization_examples() {
    let f = Arc::new(FieldSpec::build(3, 1, 0).unwrap());
    let v = diag_space(&f, &[1, 1]);
    assert!(OrthMatrix::identity(&v).reflect_factor().is_empty());
    let a = vec![f.from_int(1), f.from_int(1)];
    let r = OrthMatrix::reflection(&v, &a);
    let fac = r.reflect_factor();
    assert_eq!(fac.len(), 1);
    let replay = fac.iter().fold(OrthMatrix::identity(&v), |g, w| {
        g.compose(&OrthMatrix::reflection(&v, w))
    });
    assert_eq!(replay, r);
    let minus = OrthMatrix::new(&v, Mat::identity(2).scale(&f, f.from_int(-1))).unwrap();
    let fac = minus.reflect_factor();
    assert_eq!(fac.len(), 2);
    assert!(v.bilinear(&fac[0], &fac[1]).is_zero());
}

#[test]
fn spinor_norm_of_reflection_pairs() {
    let f = Arc::new(FieldSpec::build(3, 1, 0).unwrap());
    let v = diag_space(&f, &[1, 2, 1]);
    let one = vec![f.from_int(1), f.from_int(0), f.from_int(0)];
    let ns = vec![f.from_int(0), f.from_int(1), f.from_int(0)];
    let g = OrthMatrix::reflection(&v, &one).compose(&OrthMatrix::reflection(&v, &ns));
    assert_eq!(g.spinor_norm(), Ok(false));
    assert_eq!(OrthMatrix::identity(&v).spinor_norm(), Ok(true));
    assert_eq!(
        OrthMatrix::reflection(&v, &one).spinor_norm(),
        Err(CliffError::NotSpecialOrthogonal)
    );
}

#[test]
fn spinor_norm_is_multiplicative_and_factorization_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [3, 5] {
        let space = spaces(q).pop().unwrap();
        let f = space.field().clone();
        for _ in 0..200 {
            // Random SO elements as products of reflections whose norm product is known.
            let build = |rng: &mut ChaCha8Rng| {
                let mut g = OrthMatrix::identity(&space);
                let mut s = Fe::ONE;
                for _ in 0..2 * rng.gen_range(1..=4) {
                    let v = random_anisotropic(&space, rng);
                    s = f.mul(s, space.norm(&v));
                    g = g.compose(&OrthMatrix::reflection(&space, &v));
                }
                (g, f.is_square(s, 0))
            };
            let (g, sg) = build(&mut rng);
            let (h, sh) = build(&mut rng);
            assert_eq!(g.spinor_norm().unwrap(), sg);
            assert_eq!(g.compose(&h).spinor_norm().unwrap(), sg == sh);
        }
    }
}

#[test]
fn lift_round_trip_on_random_omega() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3, 5] {
        for space in spaces(q) {
            for _ in 0..100 {
                let g = random_omega(&space, &mut rng);
                let u = g.lift_to_spin().unwrap();
                assert_eq!(u.pi(), &g);
                assert_eq!(pi_action(u.element()).unwrap(), g);
                let one = CliffordElement::one(&space);
                assert_eq!(u.element().reversal().mul(u.element()).unwrap(), one);
                assert_eq!(pi_action(&u.element().neg()).unwrap(), g);
            }
        }
    }
}

#[test]
fn lift_of_minus_identity() {
    let f = Arc::new(FieldSpec::build(3, 1, 0).unwrap());
    for (dims, expect_one) in [(vec![1, 1, 1, 1], true), (vec![1, 1], false)] {
        let v = diag_space(&f, &dims);
        let n = dims.len();
        let minus = OrthMatrix::new(&v, Mat::identity(n).scale(&f, f.from_int(-1))).unwrap();
        let u = minus.lift_to_spin().unwrap();
        let sq = u.element().mul(u.element()).unwrap();
        let expected = if expect_one { Fe::ONE } else { f.from_int(-1) };
        assert_eq!(sq, CliffordElement::scalar(&v, expected));
    }
    let v = diag_space(&f, &[1, 1, 1]);
    assert_eq!(
        OrthMatrix::identity(&v).lift_to_spin().unwrap().element(),
        &CliffordElement::one(&v)
    );
}

#[test]
fn exceptional_lifts_are_homomorphisms() {
    for q in [3, 5] {
        let f = Arc::new(FieldSpec::build(q, 1, 0).unwrap());
        let iso = ExceptionalIsos::new(f.clone(), 0).unwrap();
        let sl = sl2_elements(&f, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for _ in 0..60 {
            let a = sl[rng.gen_range(0..sl.len())];
            let b = sl[rng.gen_range(0..sl.len())];
            let c = sl[rng.gen_range(0..sl.len())];
            let d = sl[rng.gen_range(0..sl.len())];
            let r3a = iso.rho3_tilde(&a).unwrap();
            let r3b = iso.rho3_tilde(&b).unwrap();
            assert_eq!(r3a.pi(), &iso.rho3(&a).unwrap());
            assert_eq!(
                r3a.mul(&r3b).element(),
                iso.rho3_tilde(&a.mul(&f, &b)).unwrap().element()
            );
            let r4 = iso.rho4_tilde(&a, &b).unwrap();
            assert_eq!(r4.pi(), &iso.rho4(&a, &b).unwrap());
            let r4b = iso.rho4_tilde(&c, &d).unwrap();
            let prod = iso.rho4_tilde(&a.mul(&f, &c), &b.mul(&f, &d)).unwrap();
            assert_eq!(r4.mul(&r4b).element(), prod.element());
            assert!(iso.rho3(&a).unwrap().in_omega());
            assert!(iso.rho4(&a, &b).unwrap().in_omega());
        }
        let minus = M2::identity().neg(&f);
        let id = M2::identity();
        assert!(iso.rho3(&minus).unwrap().is_identity());
        assert!(iso.rho4(&minus, &minus).unwrap().is_identity());
        assert_eq!(
            iso.rho3_tilde(&id).unwrap().element(),
            &CliffordElement::one(iso.v3())
        );
        let m1 = CliffordElement::scalar(iso.v4(), f.from_int(-1));
        assert_eq!(iso.rho4_tilde(&minus, &minus).unwrap().element(), &m1);
        // Kernels of the lifts are trivial, those of ρ are {±I} and {±(I,I)}.
        let k3 = sl
            .iter()
            .filter(|a| iso.rho3(a).unwrap().is_identity())
            .count();
        assert_eq!(k3, 2);
        let k3t = sl
            .iter()
            .filter(|a| iso.rho3_tilde(a).unwrap().element() == &CliffordElement::one(iso.v3()))
            .count();
        assert_eq!(k3t, 1);
        let k4 = sl
            .iter()
            .flat_map(|a| sl.iter().map(move |b| (a, b)))
            .filter(|(a, b)| iso.rho4(a, b).unwrap().is_identity())
            .count();
        assert_eq!(k4, 2);
        let nd = M2::new(f.from_int(1), Fe::ZERO, Fe::ZERO, f.from_int(2));
        assert_eq!(iso.rho3(&nd).unwrap_err(), CliffError::NotDetOne);
    }
}

fn closure_size(gens: &[Mat], f: &FieldSpec) -> usize {
    let n = gens[0].rows;
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![Mat::identity(n)];
    seen.insert(Mat::identity(n));
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(f, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

#[test]
fn rho_images_have_omega_orders() {
    let f = Arc::new(FieldSpec::build(3, 1, 0).unwrap());
    let iso = ExceptionalIsos::new(f.clone(), 0).unwrap();
    let sl = sl2_elements(&f, 0);
    let g3: Vec<Mat> = sl
        .iter()
        .map(|a| iso.rho3(a).unwrap().mat().clone())
        .collect();
    assert_eq!(closure_size(&g3, &f), 12);
    let g4: Vec<Mat> = sl
        .iter()
        .flat_map(|a| {
            [
                iso.rho4(a, &M2::identity()).unwrap(),
                iso.rho4(&M2::identity(), a).unwrap(),
            ]
        })
        .map(|m| m.mat().clone())
        .collect();
    assert_eq!(closure_size(&g4, &f), 288);
}

#[test]
fn commuting_lifts_follow_minus_part_determinant() {
    // x = −Id on a 4-dim square-discriminant summand W of V_7, α = α_W ⊕ α_⊥.
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for q in [3, 5] {
        let f = Arc::new(FieldSpec::build(q, 1, 0).unwrap());
        let iso = ExceptionalIsos::new(f.clone(), 0).unwrap();
        let v7 = QuadSpace::direct_sum(iso.v4(), iso.v3());
        let mut x = Mat::identity(7);
        for i in 0..4 {
            x.set(i, i, f.from_int(-1));
        }
        let x = OrthMatrix::new(&v7, x).unwrap();
        let xt = x.lift_to_spin().unwrap();
        let mut tested = [0, 0];
        while tested[0] + tested[1] < 50 {
            // random reflections inside either summand
            let mut alpha = OrthMatrix::identity(&v7);
            let mut det_minus = Fe::ONE;
            for _ in 0..rng.gen_range(1..6) {
                let mut v = vec![Fe::ZERO; 7];
                let minus_part = rng.gen_bool(0.5);
                let range = if minus_part { 0..4 } else { 4..7 };
                for i in range {
                    v[i] = f.random(0, &mut rng);
                }
                if v7.norm(&v).is_zero() {
                    continue;
                }
                if minus_part {
                    det_minus = f.neg(det_minus);
                }
                alpha = alpha.compose(&OrthMatrix::reflection(&v7, &v));
            }
            if !alpha.in_omega() {
                continue;
            }
            // conjugate the pair by a random Ω element to move off the standard split
            let g = random_omega(&v7, &mut rng);
            let gi = g.inverse();
            let xc = g.compose(&x).compose(&gi);
            let ac = g.compose(&alpha).compose(&gi);
            let a = ac.lift_to_spin().unwrap();
            let xl = if xc == x {
                xt.clone()
            } else {
                xc.lift_to_spin().unwrap()
            };
            let commute = a.mul(&xl).element() == xl.mul(&a).element();
            assert_eq!(commute, det_minus == Fe::ONE);
            tested[commute as usize] += 1;
        }
        assert!(tested[0] > 0 && tested[1] > 0);
    }
}

proptest! {
    #[test]
    fn clifford_product_is_bilinear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = spaces(5).remove(1);
        let a = random_element(&space, &mut rng);
        let b = random_element(&space, &mut rng);
        let c = random_element(&space, &mut rng);
        let lhs = a.mul(&b.add(&c)).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vector_squares_to_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = spaces(3).remove(2);
        let v: Vec<Fe> = (0..7).map(|_| space.field().random(0, &mut rng)).collect();
        let x = CliffordElement::vector(&space, &v);
        prop_assert_eq!(x.mul(&x).unwrap(), CliffordElement::scalar(&space, space.norm(&v)));
    }
}
