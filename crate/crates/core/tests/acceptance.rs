//! The acceptance gate: nine criteria, one line each. Every check is exact, so the
//! only pinned tolerances are the wall-clock budgets.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use spinfusion::cert::Status;
use spinfusion::cliffspin::{odd_index_ratios, spin7_order, two_part};
use spinfusion::fusion::{
    check_involution_transitivity, check_rk3_identity, generate_fusion,
    replay_involution_certificate, FusionHandle, SmallFusion,
};
use spinfusion::spin7::{Spin7Context, SylowGroup};
use spinfusion::suites::{
    clifford_selftest, elemab_report, replay, run, sylow_report, RunConfig, Suite,
};

/// Exact arithmetic throughout: no numerical tolerance applies.
const TOLERANCE: u32 = 0;

fn report(n: u32, name: &str, budget: Duration, start: Instant, ok: bool, detail: String) {
    let elapsed = start.elapsed();
    let pass = ok && elapsed < budget;
    println!(
        "criterion {n} [{name}]: {} ({detail}; {:.2}s of {}s budget; tolerance {TOLERANCE})",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(pass, "criterion {n} failed");
}

fn handle() -> FusionHandle {
    let ctx = Spin7Context::build(3, 1, 1).unwrap();
    let s = SylowGroup::build(&ctx).unwrap();
    generate_fusion(ctx, s).unwrap()
}

#[test]
fn criterion_1_clifford_selftest() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [3, 5] {
        let r = clifford_selftest(q, 1, 100, 7).unwrap();
        let checks: usize = r.tallies.iter().map(|t| t.checks).sum();
        let failures: usize = r.tallies.iter().map(|t| t.failures).sum();
        ok &= r.passed();
        detail.push(format!("q={q}: {checks} checks, {failures} failures"));
    }
    report(
        1,
        "Clifford self-test",
        Duration::from_secs(60),
        start,
        ok,
        detail.join(", "),
    );
}

#[test]
fn criterion_2_sylow_construction() {
    let start = Instant::now();
    let ctx = Spin7Context::build(3, 1, 1).unwrap();
    let s = SylowGroup::build(&ctx).unwrap();
    let r = sylow_report(&ctx, &s);
    let ok = r.passed() && r.order == 1024 && BigUint::from(r.order) == two_part(&spin7_order(3));
    report(
        2,
        "Sylow construction",
        Duration::from_secs(120),
        start,
        ok,
        format!(
            "|S| = {}, closure {}, [S:S_0] = {}, R_0 order {} exponent {}",
            r.order, r.closure_from_generators, r.s0_index, r.r0_order, r.r0_exponent
        ),
    );
}

#[test]
fn criterion_3_elementary_abelian_classification() {
    let start = Instant::now();
    let h = handle();
    let r = elemab_report(&h).unwrap();
    let type_ii = r.entries.iter().filter(|e| e.type_ii).count();
    let ok = r.passed() && r.entries.len() == 40;
    report(
        3,
        "rank-4 classification and x_C",
        Duration::from_secs(600),
        start,
        ok,
        format!(
            "{} subgroups ({type_ii} type II), {} equivariance checks, {} failures",
            r.entries.len(),
            r.equivariance.checks,
            r.equivariance.failures.len()
        ),
    );
}

#[test]
fn criterion_4_unit_search() {
    let start = Instant::now();
    let config = RunConfig {
        suites: vec![Suite::FindU],
        ..RunConfig::default()
    };
    let first = run(&config).unwrap();
    let second = run(&config).unwrap();
    let rec = first.record("find-u.unit").unwrap();
    let w = &rec.witnesses;
    let rejected: BTreeMap<u64, u64> = w["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["accepted"] == false)
        .map(|c| {
            (
                c["u"].as_u64().unwrap(),
                c["closure_order"].as_u64().unwrap(),
            )
        })
        .collect();
    let accepted = w["accepted"].clone();
    let ok = rec.status == Status::Pass
        && first.to_json() == second.to_json()
        && accepted == serde_json::json!([5])
        && rejected == BTreeMap::from([(1, 86016)]);
    report(
        4,
        "unit search",
        Duration::from_secs(300),
        start,
        ok,
        format!("accepted {accepted} mod 8, rejected closures {rejected:?}"),
    );
}

#[test]
fn criterion_5_automorphisms_of_r0_and_r1() {
    let start = Instant::now();
    let h = handle();
    let r = check_rk3_identity(&h).unwrap();
    let ok = r.verify().is_ok()
        && r.aut_f_r0 == 336
        && r.r0_z_stabilizer == 48
        && r.r0_equal
        && r.r1_equal
        && !r.elem_centralizer.is_empty()
        && r.elem_centralizer.iter().all(|c| c.aut_f_fixes_xc);
    report(
        5,
        "Aut_F(R_0) and rank-3 identity",
        Duration::from_secs(600),
        start,
        ok,
        format!(
            "|Aut_F(R_0)| = {}, z-stabilizer {} = Aut_Spin(R_0) {}, R_1 equal {}, {} type-II subgroups fix x_C",
            r.aut_f_r0, r.r0_z_stabilizer, r.aut_spin_r0, r.r1_equal, r.elem_centralizer_subgroups
        ),
    );
}

#[test]
fn criterion_6_involution_transitivity() {
    let start = Instant::now();
    let h = handle();
    let cert = check_involution_transitivity(&h).unwrap();
    let direct = replay_involution_certificate(&h, &cert).is_ok();
    let involutions = h.involutions().len();
    drop(h);
    let full = run(&RunConfig {
        suites: vec![Suite::FusionCore],
        ..RunConfig::default()
    })
    .unwrap();
    let replayed = replay(&full, None).unwrap();
    let ok = direct
        && cert.witnesses.len() == involutions
        && involutions == 191
        && !full.has_failures()
        && replayed.passed();
    report(
        6,
        "involution transitivity",
        Duration::from_secs(600),
        start,
        ok,
        format!(
            "{} of {involutions} involutions witnessed, certificate replay {}",
            cert.witnesses.len(),
            replayed.passed()
        ),
    );
}

#[test]
fn criterion_7_small_saturation() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, f) in [
        ("Q8 in SL2(3)", SmallFusion::sl2(3, 0).unwrap()),
        ("Q16 in SL2(9)", SmallFusion::sl2(3, 1).unwrap()),
    ] {
        let axioms = f.check_saturation_axioms().is_ok();
        let criterion = f
            .check_involution_criterion(&f.central_involutions())
            .passed();
        ok &= axioms && criterion;
        detail.push(format!("{name}: axioms {axioms}, criterion {criterion}"));
    }
    let broken = SmallFusion::sl2(3, 0)
        .unwrap()
        .without_one_outer_automorphism()
        .unwrap();
    let axioms = broken.check_saturation_axioms().is_ok();
    let criterion = broken
        .check_involution_criterion(&broken.central_involutions())
        .passed();
    ok &= !axioms && !criterion;
    detail.push(format!(
        "broken control: axioms {axioms}, criterion {criterion}"
    ));
    report(
        7,
        "small saturation",
        Duration::from_secs(60),
        start,
        ok,
        detail.join(", "),
    );
}

#[test]
fn criterion_8_dickson_suite() {
    let start = Instant::now();
    let cert = run(&RunConfig {
        suites: vec![Suite::Dickson],
        max_degree: 20,
        ..RunConfig::default()
    })
    .unwrap();
    let passed = cert
        .records
        .iter()
        .filter(|r| r.status == Status::Pass)
        .count();
    let identities: usize = cert
        .records
        .iter()
        .filter_map(|r| match &r.witnesses {
            serde_json::Value::Array(a) => Some(a.len()),
            serde_json::Value::Object(o) => {
                o.get("checks").and_then(|c| c.as_array()).map(|c| c.len())
            }
            _ => None,
        })
        .sum();
    let ok = passed == cert.records.len() && cert.records.len() == 7;
    report(
        8,
        "Dickson identities",
        Duration::from_secs(300),
        start,
        ok,
        format!(
            "{passed}/{} claims pass, {identities} exact identities, membership to degree 20",
            cert.records.len()
        ),
    );
}

#[test]
fn criterion_9_odd_index_ratios() {
    let start = Instant::now();
    let mut rows = 0;
    let mut ok = true;
    for q in [3, 5, 7, 9] {
        for r in odd_index_ratios(q, 3) {
            rows += 1;
            ok &= r.passed();
        }
    }
    report(
        9,
        "odd index ratios",
        Duration::from_secs(5),
        start,
        ok,
        format!("{rows} ratios for q in {{3, 5, 7, 9}}, n <= 3"),
    );
}
