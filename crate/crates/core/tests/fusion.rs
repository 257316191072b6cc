use std::collections::BTreeMap;
use std::sync::OnceLock;

use spinfusion::fusion::{
    centric_radical, check_gamma_preserves_fusion, check_gamma_structure,
    check_involution_criterion, check_involution_transitivity, check_rk3_identity,
    check_xc_equivariance, generate_fusion, replay_involution_certificate, u_chain_to_z,
    FusionError, FusionHandle, SmallFusion, WitnessStep,
};
use spinfusion::group::BitSet;
use spinfusion::spin7::{Spin7Context, SylowGroup};

fn handle() -> &'static FusionHandle {
    static H: OnceLock<FusionHandle> = OnceLock::new();
    H.get_or_init(|| {
        let ctx = Spin7Context::build(3, 1, 1).unwrap();
        let s = SylowGroup::build(&ctx).unwrap();
        generate_fusion(ctx, s).unwrap()
    })
}

#[test]
fn unit_search_accepts_five_and_rejects_one() {
    let r = handle().unit_report().unwrap();
    assert_eq!((r.k, r.modulus, r.delta1_order), (2, 8, 48));
    assert_eq!(r.accepted, vec![5]);
    let by_u: BTreeMap<u64, _> = r.candidates.iter().map(|c| (c.u, c)).collect();
    let one = by_u[&1];
    assert_eq!(
        (one.closure_order, one.center_order, one.quotient_simple),
        (86016, 0, false)
    );
    assert_eq!(one.gamma_matrix.0, [0, 3, 0, 1, 3, 0, 0, 2, 1]);
    let five = by_u[&5];
    assert_eq!(
        (five.closure_order, five.center_order, five.quotient_simple),
        (336, 2, true)
    );
    assert_eq!(five.gamma_matrix.0, [0, 3, 2, 1, 3, 2, 0, 2, 1]);
    // both candidates induce the same automorphism of A_1
    assert_eq!(one.gamma_on_a1, five.gamma_on_a1);
    assert_eq!(handle().gamma().u, 5);
}

#[test]
fn involution_certificate_replays_and_detects_tampering() {
    let h = handle();
    let cert = check_involution_transitivity(h).unwrap();
    assert_eq!(cert.witnesses.len(), 191);
    assert_eq!(h.involutions().len(), 191);
    replay_involution_certificate(h, &cert).unwrap();
    let mut hist = BTreeMap::new();
    for w in &cert.witnesses {
        *hist.entry(w.morphism.chain.len()).or_insert(0) += 1;
    }
    assert_eq!(hist, BTreeMap::from([(0, 1), (1, 1), (2, 16), (3, 173)]));

    let mut bad = cert.clone();
    let i = bad
        .witnesses
        .iter()
        .position(|w| w.morphism.chain.len() == 3)
        .unwrap();
    bad.witnesses[i].morphism.images[0] = h.ctx().z1();
    assert!(replay_involution_certificate(h, &bad).is_err());

    let mut missing = cert.clone();
    missing.witnesses.pop();
    assert!(replay_involution_certificate(h, &missing).is_err());
}

#[test]
fn involutions_in_u_reach_z_through_gamma() {
    let h = handle();
    let ctx = h.ctx();
    let cert = check_involution_transitivity(h).unwrap();
    for t in [ctx.z1(), ctx.mul(&ctx.z(), &ctx.z1())] {
        let w = cert.witnesses.iter().find(|w| w.t == t).unwrap();
        // Spin_7 conjugation fixes z, so γ̂_u has to appear
        let chain = &w.morphism.chain;
        assert!(chain
            .iter()
            .any(|s| matches!(s, WitnessStep::RestrictedAut { .. })));
        assert!(!chain
            .iter()
            .any(|s| matches!(s, WitnessStep::RealizedSpin { .. })));
        assert!(u_chain_to_z(h, &t).is_some());
        assert_eq!(w.morphism.images[0], ctx.z());
    }
}

#[test]
fn automorphism_orders_and_identities() {
    let r = check_rk3_identity(handle()).unwrap();
    r.verify().unwrap();
    assert_eq!(
        (r.aut_f_r0, r.aut_spin_r0, r.r0_z_stabilizer),
        (336, 48, 48)
    );
    assert_eq!((r.aut_f_r1, r.aut_spin_r1), (2688, 384));
    assert!(r.r0_equal && r.r1_equal);
    assert_eq!(r.elem_centralizer_subgroups, 8);
    assert_eq!(r.elem_centralizer.len(), 1);
    let c = &r.elem_centralizer[0];
    assert_eq!((c.aut_f_order, c.aut_spin_order), (1344, 96));
    assert!(c.centralizer_type_ii && c.aut_f_fixes_xc);
    assert!(c.spin_fixes_z_and_xc && c.stabilizer_equals_spin);
}

#[test]
fn gamma_structure() {
    let r = check_gamma_structure(handle()).unwrap();
    r.verify().unwrap();
    assert_eq!(r.gamma1_order, 768);
    assert_eq!(
        (r.z_stabilizer_order, r.inner_tau_order, r.normalizer_order),
        (256, 256, 256)
    );
    assert_eq!(r.u_orbit_of_z, 3);
}

#[test]
fn gamma_preserves_fusion_on_samples() {
    let r = check_gamma_preserves_fusion(handle(), 20, 7).unwrap();
    r.verify().unwrap();
    assert_eq!(r.samples.len(), 22);
    assert_eq!(
        r.case_counts,
        BTreeMap::from([('a', 4), ('b', 4), ('c', 14)])
    );
    assert_eq!(check_gamma_preserves_fusion(handle(), 20, 7).unwrap(), r);
}

#[test]
fn x_c_is_equivariant_on_the_catalogue() {
    let r = check_xc_equivariance(handle()).unwrap();
    assert_eq!((r.subgroups, r.checks), (40, 360));
    assert!(r.failures.is_empty(), "{:?}", r.failures);
}

#[test]
fn centralizer_witnesses_replay() {
    let h = handle();
    let p = check_involution_criterion(h).unwrap();
    assert_eq!(p.centralizer_maps.len(), 191);
    let g = h.s().group();
    let s = h.s();
    for w in p.centralizer_maps.iter().step_by(9) {
        h.replay(&w.morphism).unwrap();
        assert_eq!(w.morphism.domain[0], w.x);
        assert_eq!(w.morphism.images[0], h.ctx().z());
        let xi = s.index_of(&w.x).unwrap();
        let cent = g.centralizer(&s.all(), &BitSet::from_iter(s.order(), [xi]));
        assert_eq!(cent.len(), w.centralizer_order);
        assert_eq!(s.generate(&w.morphism.domain).unwrap(), cent);
    }
    let mut bad = p.centralizer_maps[5].morphism.clone();
    bad.images.swap(0, 1);
    assert_eq!(h.replay(&bad), Err(FusionError::ReplayMismatch));
}

#[test]
fn centric_and_radical_subgroups() {
    let h = handle();
    let nm = h.s().named();
    let s = centric_radical(h, &h.s().all(), 5000).unwrap();
    assert!(s.centric && s.radical);
    assert_eq!((s.aut_order, s.out_order), (512, 1));
    let r0 = centric_radical(h, &nm.r0, 5000).unwrap();
    assert!(r0.centric && !r0.radical);
    assert_eq!((r0.aut_order, r0.out_order), (336, 336));
    let r1 = centric_radical(h, &nm.r1, 5000).unwrap();
    assert!(r1.centric && r1.radical);
    assert_eq!((r1.aut_order, r1.out_order), (2688, 168));
    let z = BitSet::from_iter(h.s().order(), [0, nm.z]);
    assert!(!centric_radical(h, &z, 5000).unwrap().centric);
}

#[test]
fn small_systems_satisfy_both_tests() {
    let q8 = SmallFusion::sl2(3, 0).unwrap();
    assert_eq!(q8.s().len(), 8);
    assert_eq!((q8.subgroups().len(), q8.morphism_count()), (6, 32));
    let ax = q8.check_saturation_axioms().unwrap();
    assert_eq!((ax.fully_normalized, ax.extensions_checked), (6, 32));
    assert!(q8
        .check_involution_criterion(&q8.central_involutions())
        .passed());

    let q16 = SmallFusion::sl2(3, 1).unwrap();
    assert_eq!(q16.s().len(), 16);
    assert_eq!((q16.subgroups().len(), q16.morphism_count()), (11, 110));
    let ax = q16.check_saturation_axioms().unwrap();
    assert_eq!((ax.fully_normalized, ax.extensions_checked), (7, 70));
    assert!(q16
        .check_involution_criterion(&q16.central_involutions())
        .passed());

    let c2 = SmallFusion::trivial_c2();
    assert_eq!((c2.subgroups().len(), c2.morphism_count()), (2, 2));
    assert!(c2.check_saturation_axioms().is_ok());
    assert!(c2
        .check_involution_criterion(&c2.central_involutions())
        .passed());
}

#[test]
fn broken_control_fails_both_tests() {
    let f = SmallFusion::sl2(3, 0)
        .unwrap()
        .without_one_outer_automorphism()
        .unwrap();
    let err = f.check_saturation_axioms().unwrap_err();
    assert!(err.to_string().contains("not closed under composition"));
    let r = f.check_involution_criterion(&f.central_involutions());
    assert!(!r.passed());
    let c = r.conditions.iter().find(|c| c.condition == 'c').unwrap();
    assert!(!c.pass);
}
