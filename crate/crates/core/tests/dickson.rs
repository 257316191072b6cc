use proptest::prelude::*;
use spinfusion::dickson::{
    dickson_all, dickson_inv, differential, gl22p_generators, gl31_generators, gl4_generators,
    group_order, subalgebra_member, verify_dickson_recursion, verify_in_a_bounded,
    verify_invariance, verify_pullback, verify_relations, verify_steenrod, DicksonError, GenExpr,
    LinMap, Membership, Mono, NamedGenerators, Poly2, KAPPA, MAX_VARS, RHO,
};

fn gens() -> NamedGenerators {
    NamedGenerators::build().unwrap()
}

fn linear_form(n: usize, mask: usize) -> Poly2 {
    (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .fold(Poly2::zero(n), |acc, i| acc.add(&Poly2::var(n, i)))
}

/// D_i as the elementary symmetric function e_{2^n − 2^{n−i}} of the nonzero linear
/// forms, computed by the usual recurrence instead of expanding the orbit product.
fn dickson_by_symmetric_functions(n: usize) -> Vec<Poly2> {
    let forms: Vec<Poly2> = (1..1usize << n).map(|m| linear_form(n, m)).collect();
    let mut e = vec![Poly2::zero(n); forms.len() + 1];
    e[0] = Poly2::one(n);
    for v in &forms {
        for k in (1..e.len()).rev() {
            e[k] = e[k].add(&v.mul(&e[k - 1]));
        }
    }
    (1..=n)
        .map(|i| e[(1 << n) - (1 << (n - i))].clone())
        .collect()
}

#[test]
fn dickson_invariants_match_symmetric_functions() {
    for n in 1..=4 {
        let d = dickson_all(n).unwrap();
        assert_eq!(d, dickson_by_symmetric_functions(n), "n = {n}");
        for (i, p) in d.iter().enumerate() {
            let want = (1u32 << n) - (1u32 << (n - i - 1));
            assert_eq!(p.homogeneous_degree(), Some(want));
        }
    }
}

#[test]
fn small_dickson_examples() {
    let x = Poly2::var(1, 0);
    assert_eq!(dickson_inv(1, 1).unwrap(), x);
    let [x, y] = <[Poly2; 2]>::try_from(Poly2::vars(2)).unwrap();
    let d1 = x.square().add(&x.mul(&y)).add(&y.square());
    let d2 = x.square().mul(&y).add(&x.mul(&y.square()));
    assert_eq!(dickson_inv(1, 2).unwrap(), d1);
    assert_eq!(dickson_inv(2, 2).unwrap(), d2);
    assert_eq!(dickson_inv(0, 2), Err(DicksonError::ArityOutOfRange));
    assert_eq!(dickson_inv(3, 2), Err(DicksonError::ArityOutOfRange));
    assert_eq!(dickson_all(MAX_VARS), Err(DicksonError::ArityOutOfRange));
    assert_eq!(dickson_inv(1, 5).unwrap().homogeneous_degree(), Some(16));
}

#[test]
fn named_generators_have_the_stated_degrees() {
    let g = gens();
    let deg = |ps: [Poly2; 4]| ps.map(|p| p.homogeneous_degree().unwrap());
    assert_eq!(deg(g.a()), [8, 12, 14, 15]);
    assert_eq!(deg(g.b()), [4, 6, 7, 8]);
    assert_eq!(deg(g.c()), [2, 3, 4, 4]);
    let [x, y, z, w] = <[Poly2; 4]>::try_from(Poly2::vars(4)).unwrap();
    let c4p = z.pow(4).add(&z.square().mul(&g.c2)).add(&z.mul(&g.c3));
    assert_eq!(g.c4p, c4p);
    // c4' + c4'' = ∏_{α ∈ ⟨x, y⟩} (z + w + α)
    let zw = z.add(&w);
    let prod = [Poly2::zero(4), x.clone(), y.clone(), x.add(&y)]
        .iter()
        .fold(Poly2::one(4), |acc, a| acc.mul(&zw.add(a)));
    assert_eq!(g.c4p.add(&g.c4pp), prod);
}

#[test]
fn identity_suites_hold() {
    let g = gens();
    for c in verify_relations(&g)
        .into_iter()
        .chain(verify_steenrod(&g))
        .chain(verify_dickson_recursion(4).unwrap())
    {
        assert!(c.holds, "{}", c.name);
    }
    assert_eq!(verify_relations(&g).len(), 8);
}

#[test]
fn steenrod_examples() {
    let g = gens();
    assert_eq!(g.c2.sq(1), g.c3);
    assert_eq!(g.c3.sq(2), g.c2.mul(&g.c3));
    assert_eq!(g.c4p.sq(2), g.c2.mul(&g.c4p));
    assert_eq!(g.c4p.sq(3), g.c3.mul(&g.c4p));
    assert_eq!(g.b8.add(&g.b4.square()).sq(4), g.a12);
}

#[test]
fn group_actions() {
    let g = gens();
    assert_eq!(group_order(&gl4_generators()), 20160);
    assert_eq!(group_order(&gl31_generators()), 1344);
    assert_eq!(group_order(&gl22p_generators()), 96);
    assert_eq!(group_order(&[KAPPA, RHO]), 6);
    let r = verify_invariance(&g);
    assert!(r.checks.iter().all(|c| c.holds));
    let transvection = LinMap([3, 2, 4, 8]);
    assert_eq!(transvection.act(&g.a8), g.a8);
    for p in g.a().iter().chain(&g.b()).chain(&g.c()) {
        assert_eq!(&LinMap::IDENTITY.act(p), p);
    }
    assert_eq!(KAPPA.act(&g.c2), g.c2);
    assert_eq!(KAPPA.act(&g.c3), g.c3);
    assert_eq!(KAPPA.act(&g.c4p), g.c4pp);
    assert_ne!(KAPPA.act(&g.b4), g.b4);
    let sum = g.c4p.add(&g.c4pp);
    let orbit: Vec<Poly2> = [g.c4p.clone(), g.c4pp.clone(), sum.clone()]
        .iter()
        .map(|p| RHO.act(p))
        .collect();
    let mut sorted = orbit.clone();
    sorted.sort();
    let mut want = vec![g.c4p.clone(), g.c4pp.clone(), sum];
    want.sort();
    assert_eq!(sorted, want);
}

#[test]
fn membership_examples() {
    let g = gens();
    let b = g.b();
    match subalgebra_member(&g.a8, &b).unwrap() {
        Membership::Member(e) => {
            assert_eq!(e.eval(&b, 4), g.a8);
            assert_eq!(e.render(&NamedGenerators::B_NAMES), "b8 + b4^2");
        }
        Membership::NotMember => panic!("a8 lies in the b-algebra"),
    }
    let x2 = Poly2::var(4, 0).square();
    assert_eq!(
        subalgebra_member(&x2, &g.c()).unwrap(),
        Membership::NotMember
    );
    assert_eq!(
        subalgebra_member(&Poly2::zero(4), &g.c()).unwrap(),
        Membership::Member(GenExpr { terms: vec![] })
    );
    let mixed = Poly2::var(4, 0).add(&x2);
    assert_eq!(
        subalgebra_member(&mixed, &g.c()),
        Err(DicksonError::NonHomogeneous)
    );
}

#[test]
fn in_a_and_pullback_in_bounded_degree() {
    let g = gens();
    let r = verify_in_a_bounded(&g, 20).unwrap();
    let nonzero: Vec<(u32, usize, [usize; 3])> = r
        .degrees
        .iter()
        .filter(|d| d.b_dimension > 0 && d.invariant_dimensions.iter().any(|&k| k > 0))
        .map(|d| (d.degree, d.b_dimension, d.invariant_dimensions))
        .collect();
    assert_eq!(
        nonzero,
        vec![
            (0, 1, [1, 0, 0]),
            (8, 2, [1, 1, 0]),
            (12, 3, [1, 0, 0]),
            (14, 3, [1, 0, 0]),
            (15, 2, [1, 0, 0]),
            (16, 4, [1, 1, 1]),
            (20, 6, [1, 1, 0]),
        ]
    );
    let p = verify_pullback(&g, 20, 1).unwrap();
    assert!(!p.degrees.is_empty());
}

#[test]
fn differentials() {
    let g = gens();
    let b = g.b();
    let sq = GenExpr {
        terms: vec![vec![2, 0, 0, 0]],
    };
    assert!(differential(&sq, &b).is_zero());
    let a15 = GenExpr {
        terms: vec![vec![0, 0, 1, 1]],
    };
    let d = differential(&a15, &b);
    assert_eq!(d.degree, 1);
    assert_eq!(d.terms.len(), 2);
    assert_eq!(d.terms[&vec![2]], g.b8);
    assert_eq!(d.terms[&vec![3]], g.b7);
}

#[test]
fn sparse_text_round_trip() {
    let g = gens();
    for p in g.a().iter().chain(&g.c()) {
        assert_eq!(&Poly2::from_sparse_text(4, &p.to_sparse_text()).unwrap(), p);
    }
    assert_eq!(g.c2.to_sparse_text(), "0 2 0 0\n1 1 0 0\n2 0 0 0\n");
}

fn poly(arity: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec(prop::array::uniform4(0u16..4), 0..6).prop_map(move |ms| {
        let terms: Vec<Mono> = ms
            .into_iter()
            .map(|e| {
                let mut m = [0; MAX_VARS];
                m[..4].copy_from_slice(&e);
                m
            })
            .collect();
        Poly2::from_terms(arity, terms)
    })
}

fn homogeneous_part(p: &Poly2) -> Poly2 {
    p.component(p.max_degree().unwrap_or(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cartan_formula(p in poly(4), q in poly(4), k in 0u32..10) {
        let lhs = p.mul(&q).sq(k);
        let rhs = (0..=k).fold(Poly2::zero(4), |acc, i| acc.add(&p.sq(i).mul(&q.sq(k - i))));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unstability(p in poly(4), extra in 1u32..5) {
        let h = homogeneous_part(&p);
        let d = h.homogeneous_degree().unwrap_or(0);
        prop_assert_eq!(h.sq(0), h.clone());
        prop_assert_eq!(h.sq(d), h.square());
        prop_assert!(h.sq(d + extra).is_zero());
    }

    #[test]
    fn invariance_is_stable_under_composition(i in 0usize..2, j in 0usize..2) {
        let g = gens();
        let gl = gl4_generators();
        let m = gl[i].compose(&gl[j]);
        prop_assert!(m.is_invertible());
        for a in g.a() {
            prop_assert_eq!(m.act(&a), a);
        }
    }
}
