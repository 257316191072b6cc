//! Verification of the structural claims about the generated fusion system at
//! accessible scale. Every positive answer carries a replayable witness.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AutSources, FusionError, FusionHandle, FusionMorphism, NamedAut, WitnessStep};
use crate::cliffspin::SpinGroupElement;
use crate::group::{BitSet, Perm, PermGroup};
use crate::spin7::{classify_elem_abelian, realize_isomorphism, EType, SylowElement, XcSolver};

/// A witnessed morphism sending an involution to z.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvolutionWitness {
    pub t: SylowElement,
    pub morphism: FusionMorphism,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvolutionCertificate {
    pub witnesses: Vec<InvolutionWitness>,
}

/// A chain of γ̂_u steps carrying x ∈ U∖1 to z.
pub fn u_chain_to_z(h: &FusionHandle, x: &SylowElement) -> Option<Vec<WitnessStep>> {
    let u = h.gamma().u;
    let g = WitnessStep::RestrictedAut {
        aut: NamedAut::GammaU(u),
    };
    let gi = WitnessStep::RestrictedAut {
        aut: NamedAut::GammaUInv(u),
    };
    let z = h.ctx().z();
    [vec![], vec![g.clone()], vec![gi], vec![g.clone(), g]]
        .into_iter()
        .find(|chain| {
            h.morphism(vec![*x], chain.clone())
                .is_ok_and(|m| m.images == [z])
        })
}

/// For each element, the least element of its S-class and an s ∈ S with s·x·s⁻¹ equal to it.
fn s_class_reps(h: &FusionHandle, xs: &[u32]) -> Vec<(u32, u32, u32)> {
    let g = h.s().group();
    let n = h.s().order() as u32;
    xs.iter()
        .map(|&x| {
            let rep = (0..n).map(|s| g.conj(s, x)).min().unwrap();
            let s = (0..n).find(|&s| g.conj(s, x) == rep).unwrap();
            (x, rep, s)
        })
        .collect()
}

/// First step of the route to z: move t into U by an element of H⟨τ⟩, or by a
/// realized element of Spin_7(q^n) when no ambient element does.
fn into_u(h: &FusionHandle, t: &SylowElement) -> Result<Vec<WitnessStep>, FusionError> {
    let nm = h.s().named();
    let ti = h
        .s()
        .index_of(t)
        .ok_or(FusionError::Internal("involution outside S"))?;
    if nm.u.contains(ti) {
        return Ok(vec![]);
    }
    let target = BitSet::from_iter(h.s().order(), nm.u.iter().filter(|&x| x != 0 && x != nm.z));
    if let Some(g) = h.ambient_conjugator_into(&[*t], &target) {
        return Ok(vec![WitnessStep::ConjInGroup { g }]);
    }
    let ctx = h.ctx();
    let g = realize_isomorphism(ctx, &[ctx.z(), *t], &[ctx.z(), ctx.z1()])?;
    Ok(vec![WitnessStep::realized(&g)])
}

/// Builds a chain ⟨t⟩ → ⟨z⟩ for every involution t of S.
pub fn check_involution_transitivity(
    h: &FusionHandle,
) -> Result<InvolutionCertificate, FusionError> {
    let invs = h.involutions();
    let mut by_rep: BTreeMap<u32, Vec<WitnessStep>> = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    let z = h.ctx().z();
    for (t, rep, s) in s_class_reps(h, &invs) {
        if let std::collections::btree_map::Entry::Vacant(e) = by_rep.entry(rep) {
            let re = h.element(rep);
            let mut chain = into_u(h, &re)?;
            let y = h.morphism(vec![re], chain.clone())?.images[0];
            match u_chain_to_z(h, &y) {
                Some(rest) => chain.extend(rest),
                None => {
                    missing.push(format!("{rep}"));
                    continue;
                }
            }
            e.insert(chain);
        }
        let Some(tail) = by_rep.get(&rep) else {
            continue;
        };
        let mut chain = Vec::new();
        if t != rep {
            chain.push(WitnessStep::ConjInGroup { g: h.element(s) });
        }
        chain.extend(tail.iter().cloned());
        let te = h.element(t);
        let m = h.morphism(vec![te], chain)?;
        if m.images != [z] {
            missing.push(format!("{t}"));
            continue;
        }
        witnesses.push(InvolutionWitness { t: te, morphism: m });
    }
    if !missing.is_empty() {
        return Err(FusionError::Unwitnessed(missing.join(",")));
    }
    Ok(InvolutionCertificate { witnesses })
}

/// Replays every chain and checks that the certificate covers all involutions.
pub fn replay_involution_certificate(
    h: &FusionHandle,
    cert: &InvolutionCertificate,
) -> Result<(), FusionError> {
    let z = h.ctx().z();
    let want: HashSet<SylowElement> = h.involutions().into_iter().map(|i| h.element(i)).collect();
    let mut got = HashSet::new();
    for w in &cert.witnesses {
        if w.morphism.domain != [w.t] || w.morphism.images != [z] {
            return Err(FusionError::WitnessCorrupt(format!(
                "{:?} does not end at z",
                w.t
            )));
        }
        h.replay(&w.morphism)?;
        got.insert(w.t);
    }
    if got != want {
        return Err(FusionError::Unwitnessed(format!(
            "{} of {} involutions covered",
            got.len(),
            want.len()
        )));
    }
    Ok(())
}

/// Condition (b) witness: ψ on [x, generators of C_S(x)] with ψ(x) = z.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CentralizerWitness {
    pub x: SylowElement,
    pub centralizer_order: usize,
    pub morphism: FusionMorphism,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvolutionCriterion {
    pub transitivity: InvolutionCertificate,
    pub centralizer_maps: Vec<CentralizerWitness>,
    /// Saturation of C_F(z) = F_S(Spin_7(q^n)) is taken from the literature.
    pub saturation_note: String,
}

fn centralizer_to_s0(
    h: &FusionHandle,
    x: &SylowElement,
    dom: &[SylowElement],
) -> Result<Vec<WitnessStep>, FusionError> {
    let ctx = h.ctx();
    let nm = h.s().named();
    let xi = h
        .s()
        .index_of(x)
        .ok_or(FusionError::Internal("x outside S"))?;
    if nm.u.contains(xi) {
        return Ok(vec![]);
    }
    let g = realize_isomorphism(ctx, &[ctx.z(), *x], &[ctx.z(), ctx.z1()])?;
    let moved: Vec<SylowElement> = dom
        .iter()
        .map(|c| {
            ctx.locate(&g.conjugate(&ctx.to_clifford(c)))
                .ok_or(FusionError::Internal("centralizer image outside H⟨τ⟩"))
        })
        .collect::<Result<_, _>>()?;
    let s0 = &nm.s0;
    let hh = h
        .h_tau()
        .iter()
        .filter(|e| e.eps == 0)
        .find(|e| {
            moved.iter().all(|m| {
                h.s()
                    .index_of(&ctx.conj(e, m))
                    .is_some_and(|i| s0.contains(i))
            })
        })
        .ok_or_else(|| FusionError::Unwitnessed(format!("no H-conjugate of C_S({x:?}) in S_0")))?;
    let prod = ctx.to_clifford(hh).mul(g.element())?;
    Ok(vec![WitnessStep::realized(&SpinGroupElement::new(prod)?)])
}

/// Conditions (a) and (b) of the saturation criterion with X = {z}; (c) is trusted.
pub fn check_involution_criterion(h: &FusionHandle) -> Result<InvolutionCriterion, FusionError> {
    let transitivity = check_involution_transitivity(h)?;
    let g = h.s().group();
    let z = h.ctx().z();
    let all = h.s().all();
    let mut by_rep: BTreeMap<u32, Vec<WitnessStep>> = BTreeMap::new();
    let mut out = Vec::new();
    for (t, rep, s) in s_class_reps(h, &h.involutions()) {
        if let std::collections::btree_map::Entry::Vacant(e) = by_rep.entry(rep) {
            let re = h.element(rep);
            let c = g.centralizer(&all, &BitSet::from_iter(h.s().order(), [rep]));
            let mut dom = vec![re];
            dom.extend(h.generators_of(&c));
            let mut chain = centralizer_to_s0(h, &re, &dom)?;
            let y = h.morphism(vec![re], chain.clone())?.images[0];
            chain.extend(
                u_chain_to_z(h, &y)
                    .ok_or_else(|| FusionError::ConditionFailure(format!("(b) at {rep}")))?,
            );
            e.insert(chain);
        }
        let c = g.centralizer(&all, &BitSet::from_iter(h.s().order(), [t]));
        let te = h.element(t);
        let mut dom = vec![te];
        dom.extend(h.generators_of(&c));
        let mut chain = Vec::new();
        if t != rep {
            chain.push(WitnessStep::ConjInGroup { g: h.element(s) });
        }
        chain.extend(by_rep[&rep].iter().cloned());
        let m = h.morphism(dom, chain)?;
        if m.images[0] != z {
            return Err(FusionError::ConditionFailure(format!("(b) at {t}")));
        }
        out.push(CentralizerWitness {
            x: te,
            centralizer_order: c.len(),
            morphism: m,
        });
    }
    Ok(InvolutionCriterion {
        transitivity,
        centralizer_maps: out,
        saturation_note:
            "trusted: C_F(z) is the fusion system of Spin_7(q^n) over S, which is saturated".into(),
    })
}

/// One class representative: E ∋ U of rank 3, E ≰ R_0, with C_S(E) elementary
/// abelian of rank 4.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Rank3ElemCentralizer {
    pub e_generators: Vec<SylowElement>,
    pub class_size: usize,
    pub centralizer_type_ii: bool,
    pub x_c: SylowElement,
    pub aut_f_order: usize,
    pub aut_spin_order: usize,
    pub aut_f_fixes_xc: bool,
    pub spin_fixes_z_and_xc: bool,
    pub stabilizer_equals_spin: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Rk3Report {
    pub aut_f_r0: usize,
    pub aut_spin_r0: usize,
    pub r0_z_stabilizer: usize,
    pub r0_equal: bool,
    pub aut_f_r1: usize,
    pub aut_spin_r1: usize,
    pub r1_z_stabilizer: usize,
    pub r1_equal: bool,
    /// Rank-3 E ∋ U with C_S(E) elementary abelian of rank 4, and how many S-classes they form.
    pub elem_centralizer_subgroups: usize,
    pub elem_centralizer: Vec<Rank3ElemCentralizer>,
}

impl Rk3Report {
    pub fn verify(&self) -> Result<(), FusionError> {
        if !self.r0_equal {
            return Err(FusionError::IdentityFailure(
                "R_0 z-stabilizer differs from Aut_Spin(R_0)".into(),
            ));
        }
        if !self.r1_equal {
            return Err(FusionError::IdentityFailure(
                "R_1 z-stabilizer differs from Aut_Spin(R_1)".into(),
            ));
        }
        for c in &self.elem_centralizer {
            if !(c.aut_f_fixes_xc
                && c.spin_fixes_z_and_xc
                && c.stabilizer_equals_spin
                && c.centralizer_type_ii)
            {
                return Err(FusionError::IdentityFailure(format!(
                    "rank-3 subgroup at {:?}",
                    c.e_generators
                )));
            }
        }
        Ok(())
    }
}

/// Compares the z-stabilizer of Aut_F(P) with Aut_Spin(P) as sets of permutations.
fn stabilizer_identity(
    h: &FusionHandle,
    p: &BitSet,
) -> Result<(usize, usize, usize, bool), FusionError> {
    let f = h.aut_group(p, AutSources::ALL)?;
    let spin = h.aut_group(p, AutSources::SPIN)?;
    let stab = f.stabilizer(h.s().named().z);
    let equal = stab == spin.group.as_set();
    Ok((f.order(), spin.order(), stab.len(), equal))
}

pub fn check_rk3_identity(h: &FusionHandle) -> Result<Rk3Report, FusionError> {
    let nm = h.s().named().clone();
    let (aut_f_r0, aut_spin_r0, r0_z_stabilizer, r0_equal) = stabilizer_identity(h, &nm.r0)?;
    let (aut_f_r1, aut_spin_r1, r1_z_stabilizer, r1_equal) = stabilizer_identity(h, &nm.r1)?;
    let g = h.s().group();
    let all = h.s().all();
    let cu = g.centralizer(&all, &nm.u);
    let ugens = [nm.z, nm.z1];
    let mut rank3: Vec<BitSet> = Vec::new();
    let mut seen = HashSet::new();
    for e in g.involutions(&cu) {
        if nm.u.contains(e) {
            continue;
        }
        let sub = g.closure(&[ugens[0], ugens[1], e]);
        if sub.len() == 8 && seen.insert(sub.clone()) {
            rank3.push(sub);
        }
    }
    rank3.sort();
    let elem_centralizer: Vec<BitSet> = rank3
        .into_iter()
        .filter(|e| !e.is_subset(&nm.r0))
        .filter(|e| {
            let c = g.centralizer(&all, e);
            c.len() == 16 && g.is_elementary_abelian(&c)
        })
        .collect();
    let classes = g.conjugacy_classes_of_subgroups(&all, &elem_centralizer);
    let solver = XcSolver::new(h.ctx(), h.s());
    let mut reps = Vec::new();
    for class in &classes {
        let e = &elem_centralizer[class[0]];
        let c = g.centralizer(&all, e);
        let report = classify_elem_abelian(h.ctx(), &h.elements_of(&c))?;
        let xc = solver.x_c(h.ctx(), h.s(), &c)?.x_c;
        let xi = h
            .s()
            .index_of(&xc)
            .ok_or(FusionError::Internal("x_C outside S"))?;
        let f = h.aut_group(&c, AutSources::ALL)?;
        let spin = h.aut_group(&c, AutSources::SPIN)?;
        let pz = f.position(nm.z).unwrap();
        let px = f.position(xi).unwrap();
        let aut_f_fixes_xc = f.group.elements.iter().all(|p| p.apply(px) == px);
        let spin_fixes_z_and_xc = spin
            .group
            .elements
            .iter()
            .all(|p| p.apply(px) == px && p.apply(pz) == pz);
        let stabilizer_equals_spin = f.stabilizer(nm.z) == spin.group.as_set();
        reps.push(Rank3ElemCentralizer {
            e_generators: h.generators_of(e),
            class_size: class.len(),
            centralizer_type_ii: report.etype == EType::II,
            x_c: xc,
            aut_f_order: f.order(),
            aut_spin_order: spin.order(),
            aut_f_fixes_xc,
            spin_fixes_z_and_xc,
            stabilizer_equals_spin,
        });
    }
    Ok(Rk3Report {
        aut_f_r0,
        aut_spin_r0,
        r0_z_stabilizer,
        r0_equal,
        aut_f_r1,
        aut_spin_r1,
        r1_z_stabilizer,
        r1_equal,
        elem_centralizer_subgroups: elem_centralizer.len(),
        elem_centralizer: reps,
    })
}

/// The result of comparing c_h∘α with α∘c_g on generators of P for α = γ̂_u and δ̂_u.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PreservationSample {
    pub p_generators: Vec<SylowElement>,
    pub g: SylowElement,
    pub gamma_h: Option<SylowElement>,
    pub delta_h: Option<SylowElement>,
    /// 'a', 'b' for the constructive recipes, 'c' when only exhaustive search applies.
    pub case: char,
    pub case_h: Option<SylowElement>,
}

impl PreservationSample {
    pub fn passed(&self) -> bool {
        self.gamma_h.is_some()
            && self.delta_h.is_some()
            && (self.case == 'c' || self.case_h.is_some())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PreservationReport {
    pub samples: Vec<PreservationSample>,
    pub case_counts: BTreeMap<char, usize>,
}

impl PreservationReport {
    pub fn verify(&self) -> Result<(), FusionError> {
        match self.samples.iter().find(|s| !s.passed()) {
            Some(s) => Err(FusionError::PreservationFailure(format!(
                "P = {:?}, g = {:?}",
                s.p_generators, s.g
            ))),
            None => Ok(()),
        }
    }
}

fn commutes_on(
    h: &FusionHandle,
    aut: &dyn Fn(&SylowElement) -> Option<SylowElement>,
    gens: &[SylowElement],
    g: &SylowElement,
    cand: &SylowElement,
) -> bool {
    let ctx = h.ctx();
    gens.iter().all(|x| match (aut(x), aut(&ctx.conj(g, x))) {
        (Some(ax), Some(agx)) => ctx.conj(cand, &ax) == agx,
        _ => false,
    })
}

fn search_h(
    h: &FusionHandle,
    aut: &dyn Fn(&SylowElement) -> Option<SylowElement>,
    gens: &[SylowElement],
    g: &SylowElement,
) -> Option<SylowElement> {
    h.h_tau()
        .iter()
        .filter(|e| e.eps == 0)
        .find(|c| commutes_on(h, aut, gens, g, c))
        .copied()
}

/// Recipe (a): g = trp[X1, X2, X3] and P inside H_0 give h = trp[X1, X2, Y3] for some Y3.
fn case_a(
    h: &FusionHandle,
    delta: &dyn Fn(&SylowElement) -> Option<SylowElement>,
    gens: &[SylowElement],
    g: &SylowElement,
) -> Option<SylowElement> {
    let ctx = h.ctx();
    ctx.sl2()
        .into_iter()
        .map(|y3| ctx.trp(g.x[0], g.x[1], y3))
        .find(|c| commutes_on(h, delta, gens, g, c))
}

pub fn preservation_sample(
    h: &FusionHandle,
    gens: &[SylowElement],
    g: &SylowElement,
) -> PreservationSample {
    let ctx = h.ctx();
    let gd = h.gamma().clone();
    let gamma = |x: &SylowElement| gd.gamma_u(ctx, x);
    let delta = |x: &SylowElement| gd.delta(ctx, x);
    let gamma_h = search_h(h, &gamma, gens, g);
    let delta_h = search_h(h, &delta, gens, g);
    let in_h0 = |x: &SylowElement| x.eps == 0 && ctx.is_rational_coords(x);
    let (case, case_h) = if !gens.iter().all(in_h0) {
        ('c', None)
    } else if in_h0(g) {
        ('a', case_a(h, &delta, gens, g))
    } else {
        // g = g′·y with y = trp[Y, Y, Y]; h = h′·trp[Y, Y, Y^u] where h′ solves (a) for g′ on yPy⁻¹
        let yv = ctx.y();
        let y = ctx.trp(yv, yv, yv);
        let gp = ctx.mul(g, &ctx.inv(&y));
        let pp: Vec<SylowElement> = gens.iter().map(|x| ctx.conj(&y, x)).collect();
        let yu = ctx.trp(yv, yv, yv.pow(ctx.field(), gd.u));
        let hp = if pp.iter().all(in_h0) && in_h0(&gp) {
            case_a(h, &delta, &pp, &gp)
        } else {
            None
        };
        let hh = hp
            .map(|hp| ctx.mul(&hp, &yu))
            .filter(|c| commutes_on(h, &delta, gens, g, c));
        ('b', hh)
    };
    PreservationSample {
        p_generators: gens.to_vec(),
        g: *g,
        gamma_h,
        delta_h,
        case,
        case_h,
    }
}

/// Fixed examples (P = U, P = ⟨Â, B̂⟩) plus random pairs (P ≤ S_0 on one or two
/// generators, g ∈ H with gPg⁻¹ ≤ S_0).
pub fn check_gamma_preserves_fusion(
    h: &FusionHandle,
    sample_size: usize,
    seed: u64,
) -> Result<PreservationReport, FusionError> {
    let ctx = h.ctx();
    let nm = h.s().named();
    let s0 = &nm.s0;
    let hset: Vec<SylowElement> = h.h_tau().iter().filter(|e| e.eps == 0).copied().collect();
    let conjugators = |gens: &[SylowElement]| -> Vec<SylowElement> {
        hset.iter()
            .filter(|e| {
                gens.iter().all(|x| {
                    h.s()
                        .index_of(&ctx.conj(e, x))
                        .is_some_and(|i| s0.contains(i))
                })
            })
            .copied()
            .collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    let fixed = [vec![ctx.z(), ctx.z1()], vec![ctx.a_hat(), ctx.b_hat()]];
    for gens in fixed {
        let cands = conjugators(&gens);
        let g = *cands
            .choose(&mut rng)
            .ok_or(FusionError::Internal("no conjugator"))?;
        samples.push(preservation_sample(h, &gens, &g));
    }
    let s0v: Vec<u32> = s0.iter().collect();
    while samples.len() < sample_size + 2 {
        let k = rng.gen_range(1..=2);
        let gens: Vec<SylowElement> = (0..k)
            .map(|_| h.element(*s0v.choose(&mut rng).unwrap()))
            .collect();
        let cands = conjugators(&gens);
        let Some(g) = cands.choose(&mut rng) else {
            continue;
        };
        samples.push(preservation_sample(h, &gens, g));
    }
    let mut case_counts = BTreeMap::new();
    for s in &samples {
        *case_counts.entry(s.case).or_insert(0) += 1;
    }
    Ok(PreservationReport {
        samples,
        case_counts,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GammaStructureReport {
    pub gamma1_order: usize,
    pub z_stabilizer_order: usize,
    pub inner_tau_order: usize,
    pub normalizer_order: usize,
    pub stabilizer_equals_inner_tau: bool,
    pub inner_tau_equals_normalizer: bool,
    pub u_orbit_of_z: usize,
}

impl GammaStructureReport {
    pub fn verify(&self) -> Result<(), FusionError> {
        if !(self.stabilizer_equals_inner_tau && self.inner_tau_equals_normalizer) {
            return Err(FusionError::IdentityFailure("z-stabilizer of Γ".into()));
        }
        if self.u_orbit_of_z != 3 {
            return Err(FusionError::IdentityFailure(format!(
                "orbit of z in U has size {}",
                self.u_orbit_of_z
            )));
        }
        Ok(())
    }
}

/// Double inclusion {φ ∈ Γ : φ(z) = z} = ⟨Inn(S_0), c_τ⟩ = Aut_{N(U)}(S_0), and the
/// Γ-orbit of z.
pub fn check_gamma_structure(h: &FusionHandle) -> Result<GammaStructureReport, FusionError> {
    let ctx = h.ctx();
    let g1 = h.gamma1();
    let s0 = h.s0();
    let pos: HashMap<u32, u32> = s0.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let nm = h.s().named();
    let pz = pos[&nm.z];
    let stab: HashSet<Perm> = g1
        .group
        .elements
        .iter()
        .filter(|p| p.apply(pz) == pz)
        .cloned()
        .collect();
    let inner: Vec<Perm> = g1
        .generators
        .iter()
        .filter(|(w, _)| {
            !matches!(
                w,
                WitnessStep::RestrictedAut {
                    aut: NamedAut::GammaU(_)
                }
            )
        })
        .map(|(_, p)| p.clone())
        .collect();
    let inner_tau = PermGroup::generate(s0.len(), &inner, 1 << 16)
        .ok_or(FusionError::Internal("closure"))?
        .as_set();
    let s0_set = &nm.s0;
    let gens = h.generators_of(s0_set);
    let mut normalizer = HashSet::new();
    for e in h.h_tau() {
        if gens.iter().all(|x| {
            h.s()
                .index_of(&ctx.conj(e, x))
                .is_some_and(|i| s0_set.contains(i))
        }) {
            let p = Perm(
                s0.iter()
                    .map(|&x| pos[&h.s().index_of(&ctx.conj(e, h.s().element(x))).unwrap()])
                    .collect(),
            );
            normalizer.insert(p);
        }
    }
    let orbit: HashSet<u32> = g1.group.elements.iter().map(|p| p.apply(pz)).collect();
    Ok(GammaStructureReport {
        gamma1_order: g1.group.order(),
        z_stabilizer_order: stab.len(),
        inner_tau_order: inner_tau.len(),
        normalizer_order: normalizer.len(),
        stabilizer_equals_inner_tau: stab == inner_tau,
        inner_tau_equals_normalizer: inner_tau == normalizer,
        u_orbit_of_z: orbit.len(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct XcEquivarianceReport {
    pub subgroups: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// φ(x_C(E)) = x_C(φ(E)) for every generator φ of Γ_1 and every rank-4 E ∋ U.
pub fn check_xc_equivariance(h: &FusionHandle) -> Result<XcEquivarianceReport, FusionError> {
    let cat = h.s().rank4_catalogue();
    let solver = XcSolver::new(h.ctx(), h.s());
    let mut xc: HashMap<BitSet, u32> = HashMap::new();
    for e in &cat {
        let x = solver.x_c(h.ctx(), h.s(), e)?.x_c;
        xc.insert(
            e.clone(),
            h.s()
                .index_of(&x)
                .ok_or(FusionError::Internal("x_C outside S"))?,
        );
    }
    let s0 = h.s0();
    let pos: HashMap<u32, u32> = s0.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mut failures = Vec::new();
    let mut checks = 0;
    for (w, p) in &h.gamma1().generators {
        let img = |x: u32| s0[p.apply(pos[&x]) as usize];
        for e in &cat {
            let fe = BitSet::from_iter(h.s().order(), e.iter().map(img));
            checks += 1;
            match xc.get(&fe) {
                Some(&y) if y == img(xc[e]) => {}
                _ => failures.push(format!("{w:?} on {:?}", h.generators_of(e))),
            }
        }
    }
    Ok(XcEquivarianceReport {
        subgroups: cat.len(),
        checks,
        failures,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CentricRadical {
    pub centric: bool,
    pub radical: bool,
    pub conjugates_checked: usize,
    pub aut_order: usize,
    pub out_order: usize,
}

/// Known F-conjugates of P: closure under H⟨τ⟩-conjugation into S and Γ_1 on S_0.
fn known_conjugates(
    h: &FusionHandle,
    p: &BitSet,
    limit: usize,
) -> Result<Vec<BitSet>, FusionError> {
    let ctx = h.ctx();
    let s = h.s();
    let s0 = &s.named().s0;
    let s0v = h.s0();
    let pos: HashMap<u32, u32> = s0v
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u32))
        .collect();
    let mut seen: HashSet<BitSet> = HashSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        let gens = h.generators_of(&q);
        let mut next = Vec::new();
        for e in h.h_tau() {
            let imgs: Vec<SylowElement> = gens.iter().map(|x| ctx.conj(e, x)).collect();
            if let Some(set) = s.generate(&imgs) {
                next.push(set);
            }
        }
        if q.is_subset(s0) {
            for (_, perm) in &h.gamma1().generators {
                next.push(BitSet::from_iter(
                    s.order(),
                    q.iter().map(|x| s0v[perm.apply(pos[&x]) as usize]),
                ));
            }
        }
        for n in next {
            if seen.insert(n.clone()) {
                if seen.len() > limit {
                    return Err(FusionError::UnknownConjugates);
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Centric: C_S(P′) = Z(P′) over the known conjugates. Radical: O_2(Out_F(P)) = 1
/// with Aut_F(P) the closure of the witnessed generators.
pub fn centric_radical(
    h: &FusionHandle,
    p: &BitSet,
    limit: usize,
) -> Result<CentricRadical, FusionError> {
    let g = h.s().group();
    let all = h.s().all();
    let self_centric = |q: &BitSet| g.centralizer(&all, q) == g.center(q);
    let (centric, conjugates_checked) = if !self_centric(p) {
        (false, 1)
    } else {
        let conj = known_conjugates(h, p, limit)?;
        (conj.iter().all(self_centric), conj.len())
    };
    let aut = h.aut_group(p, AutSources::ALL)?;
    let fg = aut.group.to_fingroup();
    let pos: HashMap<u32, u32> = aut
        .elements
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u32))
        .collect();
    let mut inner = BitSet::new(aut.order());
    for x in p.iter() {
        let perm = Perm(aut.elements.iter().map(|&y| pos[&g.conj(x, y)]).collect());
        let i = aut
            .group
            .position(&perm)
            .ok_or(FusionError::Internal("inner automorphism missing"))?;
        inner.insert(i as u32);
    }
    let (out, _) = fg.quotient(&fg.all(), &inner);
    let o2 = out.largest_normal_p_subgroup(&out.all(), 2);
    Ok(CentricRadical {
        centric,
        radical: o2.len() == 1,
        conjugates_checked,
        aut_order: aut.order(),
        out_order: out.order(),
    })
}

/// Applies a named automorphism to every element of S_0 and checks it is an automorphism.
pub fn named_automorphism_holds(h: &FusionHandle, aut: NamedAut) -> bool {
    h.gamma().is_automorphism(h.ctx(), h.s(), aut)
}
