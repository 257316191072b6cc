use std::collections::HashSet;

use num_bigint::BigUint;
use spinfusion::cliffspin::{spin7_order, two_part, CliffordElement};
use spinfusion::linalg::M2;
use spinfusion::spin7::{
    classify_elem_abelian, realize_isomorphism, sylow_generators, EType, Spin7Context, Spin7Error,
    SylowElement, SylowGroup, XcSolver,
};

fn ctx3() -> Spin7Context {
    Spin7Context::build(3, 1, 1).unwrap()
}

#[test]
fn context_matrices_and_tau() {
    let ctx = ctx3();
    let f = ctx.field();
    let (a, b) = (ctx.a(), ctx.b());
    assert_eq!(a.pow(f, 2), ctx.minus_i());
    assert_eq!(b.mul(f, &b), ctx.minus_i());
    assert_eq!(b.mul(f, &a).mul(f, &b.inv(f)), a.inv(f));
    assert_eq!(ctx.k(), 2);
    assert_eq!(ctx.x(), a);
    assert_eq!(ctx.y().mul(f, &ctx.y()), ctx.x());
    assert_eq!(ctx.z_root().mul(f, &ctx.z_root()), ctx.y());
    let t = ctx.tau().element();
    assert_eq!(t.mul(t).unwrap(), CliffordElement::one(ctx.v7()));
}

#[test]
fn z_is_minus_one_in_the_clifford_algebra() {
    let ctx = ctx3();
    assert_eq!(
        ctx.to_clifford(&ctx.z()),
        CliffordElement::one(ctx.v7()).neg()
    );
    // ω(−I, −I, −I) = 1
    let m = ctx.minus_i();
    assert_eq!(
        ctx.to_clifford(&SylowElement::raw([m, m, m], 0)),
        CliffordElement::one(ctx.v7())
    );
}

#[test]
fn omega_kernel_on_q8_cubed() {
    let ctx = ctx3();
    let f = ctx.field();
    let q8: Vec<M2> = {
        let (a, b) = (ctx.a(), ctx.b());
        let mut v = Vec::new();
        for i in 0..4 {
            for j in 0..2 {
                v.push(a.pow(f, i).mul(f, &b.pow(f, j)));
            }
        }
        v
    };
    let one = CliffordElement::one(ctx.v7());
    let mut kernel = 0;
    let mut images = HashSet::new();
    for x in &q8 {
        for y in &q8 {
            for w in &q8 {
                let c = ctx.to_clifford(&SylowElement::raw([*x, *y, *w], 0));
                if c == one {
                    kernel += 1;
                }
                images.insert(c.indices());
            }
        }
    }
    assert_eq!(kernel, 2);
    assert_eq!(images.len(), 256);
}

#[test]
fn clifford_conversion_respects_the_product_law() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    let els = s.elements();
    for i in (0..els.len()).step_by(37) {
        for j in (0..els.len()).step_by(53) {
            let (g, h) = (&els[i], &els[j]);
            let lhs = ctx.to_clifford(&ctx.mul(g, h));
            let rhs = ctx.to_clifford(g).mul(&ctx.to_clifford(h)).unwrap();
            assert_eq!(lhs, rhs, "{i} {j}");
        }
    }
}

#[test]
fn orth_image_matches_clifford_action() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    for g in s.elements().iter().step_by(31) {
        assert_eq!(ctx.to_spin(g).pi().mat(), &ctx.orth_image(g));
    }
}

#[test]
fn locate_inverts_the_conversion() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    for g in s.elements().iter().step_by(7) {
        assert_eq!(ctx.locate(&ctx.to_clifford(g)), Some(*g));
    }
    let h = ctx.h_elements(true, 1 << 20).unwrap();
    assert_eq!(h.len(), 27648);
    for g in h.iter().step_by(997) {
        assert_eq!(ctx.locate(&ctx.to_clifford(g)), Some(*g));
    }
}

#[test]
fn sylow_order_and_structure_at_3() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    assert_eq!(BigUint::from(s.order()), two_part(&spin7_order(3)));
    assert_eq!(s.order(), 1024);
    let g = s.group();
    let nm = s.named();
    // closure from generators gives the same set
    let closed = s.generate(&sylow_generators(&ctx)).unwrap();
    assert_eq!(closed.len(), 1024);
    assert_eq!(nm.s0.len(), 512);
    assert!(g.is_subgroup(&nm.s0));
    assert_eq!(g.normalizer(&s.all(), &nm.u).len(), 1024);
    assert_eq!(g.center(&s.all()).iter().collect::<Vec<_>>(), vec![0, nm.z]);
    assert_eq!(nm.r0.len(), 64);
    assert!(g.is_abelian(&nm.r0));
    assert_eq!(g.exponent(&nm.r0), 4);
    assert_eq!(nm.r1.len(), 128);
    let two_torsion: Vec<u32> = nm.r0.iter().filter(|&x| g.mul(x, x) == 0).collect();
    assert_eq!(two_torsion, nm.a1.iter().collect::<Vec<_>>());
    assert!(s.elements().iter().all(|e| ctx.order(e).is_power_of_two()));
    let e000 = s
        .standard_rank4(&ctx)
        .into_iter()
        .find(|(l, _)| *l == (false, 0, 0, 0))
        .unwrap()
        .1;
    assert_eq!(e000, nm.e_star);
}

#[test]
fn tau_swaps_coordinates_on_generators() {
    let ctx = ctx3();
    let tau = ctx.tau_elem();
    for g in sylow_generators(&ctx) {
        if g.eps == 1 {
            continue;
        }
        let lhs = ctx.to_clifford(&ctx.conj(&tau, &g));
        let rhs = ctx.to_clifford(&g.swapped());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn classification_of_standard_subgroups() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    for (l, e) in s.standard_rank4(&ctx) {
        let rep = classify_elem_abelian(&ctx, &s.subgroup_elements(&e)).unwrap();
        assert_eq!(rep.rank, 4);
        let want = if !l.0 && l.1 == l.2 {
            EType::I
        } else {
            EType::II
        };
        assert_eq!(rep.etype, want, "{l:?}");
        assert!(
            rep.eigenspaces
                .iter()
                .all(|e| e.dim == 1 || e.dim == 3 || e.dim == 0),
            "{l:?}"
        );
    }
    let a1 = classify_elem_abelian(&ctx, &s.subgroup_elements(&s.named().a1)).unwrap();
    let mut dims: Vec<usize> = a1.eigenspaces.iter().map(|e| e.dim).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2, 2, 2]);
    let bad = classify_elem_abelian(&ctx, &[ctx.identity(), ctx.z1()]);
    assert_eq!(bad.unwrap_err(), Spin7Error::MissingCenter);
}

#[test]
fn x_c_over_the_catalogue() {
    let ctx = ctx3();
    let s = SylowGroup::build(&ctx).unwrap();
    let solver = XcSolver::new(&ctx, &s);
    let cat = s.rank4_catalogue();
    println!("catalogue size {}", cat.len());
    for e in &cat {
        let red = solver.x_c(&ctx, &s, e).unwrap();
        let xi = s.index_of(&red.x_c).unwrap();
        assert!(e.contains(xi));
        for pick in 1..solver.choices(&ctx, &s, e) {
            assert_eq!(solver.x_c_via(&ctx, &s, e, pick).unwrap().x_c, red.x_c);
        }
        assert_eq!(s.group().centralizer(&s.all(), e), *e);
    }
}

#[test]
fn realize_simple_isomorphisms() {
    let ctx = ctx3();
    let (z, z1) = (ctx.z(), ctx.z1());
    let zz1 = ctx.mul(&z, &z1);
    let a = ctx.a_hat();
    let g = realize_isomorphism(&ctx, &[z, z1, a], &[z, zz1, a]).unwrap();
    for (x, y) in [(z1, zz1), (a, a), (z, z)] {
        assert_eq!(g.conjugate(&ctx.to_clifford(&x)), ctx.to_clifford(&y));
    }
    let id = realize_isomorphism(&ctx, &[z, z1], &[z, z1]).unwrap();
    assert_eq!(id.conjugate(&ctx.to_clifford(&z1)), ctx.to_clifford(&z1));
    let m = realize_isomorphism(&ctx, &[z, z1], &[z, a]).unwrap();
    assert_eq!(m.conjugate(&ctx.to_clifford(&z1)), ctx.to_clifford(&a));
}

#[test]
fn sylow_cache_round_trip_and_rejects_damaged_files() {
    use spinfusion::spin7::load_or_build;
    let ctx = ctx3();
    let dir = tempfile::tempdir().unwrap();
    let built = load_or_build(&ctx, Some(dir.path())).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let loaded = load_or_build(&ctx, Some(dir.path())).unwrap();
    assert_eq!(loaded.elements(), built.elements());
    // drop the last element: the loader must rebuild rather than trust the file
    let text = std::fs::read_to_string(&files[0]).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["elements"].as_array_mut().unwrap().pop();
    std::fs::write(&files[0], v.to_string()).unwrap();
    let rebuilt = load_or_build(&ctx, Some(dir.path())).unwrap();
    assert_eq!(rebuilt.elements(), built.elements());
    std::fs::write(&files[0], "not json").unwrap();
    assert_eq!(
        load_or_build(&ctx, Some(dir.path())).unwrap().elements(),
        built.elements()
    );
}
