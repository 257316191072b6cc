//! The fusion system generated by Spin_7(q^n)-conjugation on S(q^n) and the
//! automorphism group Γ_n = ⟨Inn(S_0), c_τ, γ̂_u⟩ of S_0(q^n).

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use super::unit::{find_unit, SpinAutR0, UnitReport};
use super::{FusionError, FusionMorphism, GammaData, NamedAut, WitnessStep};
use crate::cliffspin::{CliffordElement, SpinGroupElement};
use crate::gf::FieldElement;
use crate::group::{perm_closure, BitSet, Perm, PermGroup};
use crate::spin7::{
    realize_isomorphism, sylow_generators, Spin7Context, SylowElement, SylowGroup, XcSolver,
};

/// Largest H(q^n)⟨τ⟩ that is enumerated for conjugation searches.
pub const H_TAU_LIMIT: usize = 1 << 17;

/// Γ_n as a permutation group on S_0, with a word in the generators for each element.
#[derive(Debug)]
pub struct Gamma1 {
    pub generators: Vec<(WitnessStep, Perm)>,
    pub group: PermGroup,
    words: Vec<Vec<usize>>,
}

impl Gamma1 {
    /// Witness chain for the i-th element (generators applied left to right).
    pub fn chain(&self, i: usize) -> Vec<WitnessStep> {
        self.words[i]
            .iter()
            .map(|&g| self.generators[g].0.clone())
            .collect()
    }
}

/// An automorphism group of a subgroup P ≤ S, as permutations of P's elements in
/// index order, with a witness for each generator.
#[derive(Debug)]
pub struct AutGroup {
    pub elements: Vec<u32>,
    pub generators: Vec<(FusionMorphism, Perm)>,
    pub group: PermGroup,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn position(&self, x: u32) -> Option<u32> {
        self.elements.binary_search(&x).ok().map(|i| i as u32)
    }

    /// Elements fixing x.
    pub fn stabilizer(&self, x: u32) -> HashSet<Perm> {
        let p = self.position(x).expect("element of the subgroup");
        self.group
            .elements
            .iter()
            .filter(|g| g.apply(p) == p)
            .cloned()
            .collect()
    }
}

/// Sources of automorphisms used by [`FusionHandle::aut_group`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutSources {
    pub ambient: bool,
    pub realized: bool,
    pub gamma: bool,
}

impl AutSources {
    pub const SPIN: AutSources = AutSources {
        ambient: true,
        realized: true,
        gamma: false,
    };
    pub const ALL: AutSources = AutSources {
        ambient: true,
        realized: true,
        gamma: true,
    };
}

pub struct FusionHandle {
    ctx: Spin7Context,
    s: SylowGroup,
    gamma: GammaData,
    h_tau: Vec<SylowElement>,
    unit: Option<UnitReport>,
    spin_r0: Option<SpinAutR0>,
    s0: Vec<u32>,
    gamma1: OnceLock<Gamma1>,
}

/// Finds u and bundles S(q^n), H(q^n)⟨τ⟩ and Γ_n, taking the least accepted u.
pub fn generate_fusion(ctx: Spin7Context, s: SylowGroup) -> Result<FusionHandle, FusionError> {
    let h_tau = ctx.h_elements(true, H_TAU_LIMIT)?;
    let (report, spin) = find_unit(&ctx, &s, &h_tau)?;
    let gamma = GammaData::new(&ctx, report.accepted[0])?;
    let mut h = FusionHandle::with_gamma(ctx, s, h_tau, gamma);
    h.unit = Some(report);
    h.spin_r0 = Some(spin);
    Ok(h)
}

fn spin_from_coeffs(ctx: &Spin7Context, coeffs: &[u64]) -> Result<SpinGroupElement, FusionError> {
    let u =
        CliffordElement::from_coeffs(ctx.v7(), coeffs.iter().map(|&c| FieldElement(c)).collect())?;
    Ok(SpinGroupElement::new(u)?)
}

impl FusionHandle {
    pub fn with_gamma(
        ctx: Spin7Context,
        s: SylowGroup,
        h_tau: Vec<SylowElement>,
        gamma: GammaData,
    ) -> FusionHandle {
        let s0 = s.named().s0.iter().collect();
        FusionHandle {
            ctx,
            s,
            gamma,
            h_tau,
            unit: None,
            spin_r0: None,
            s0,
            gamma1: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> &Spin7Context {
        &self.ctx
    }
    pub fn s(&self) -> &SylowGroup {
        &self.s
    }
    pub fn gamma(&self) -> &GammaData {
        &self.gamma
    }
    pub fn h_tau(&self) -> &[SylowElement] {
        &self.h_tau
    }
    pub fn unit_report(&self) -> Option<&UnitReport> {
        self.unit.as_ref()
    }
    pub fn s0(&self) -> &[u32] {
        &self.s0
    }

    pub fn element(&self, i: u32) -> SylowElement {
        *self.s.element(i)
    }

    pub fn elements_of(&self, set: &BitSet) -> Vec<SylowElement> {
        self.s.subgroup_elements(set)
    }

    pub fn generators_of(&self, set: &BitSet) -> Vec<SylowElement> {
        self.s
            .group()
            .generators(set)
            .into_iter()
            .map(|i| self.element(i))
            .collect()
    }

    pub fn morphism(
        &self,
        domain: Vec<SylowElement>,
        chain: Vec<WitnessStep>,
    ) -> Result<FusionMorphism, FusionError> {
        FusionMorphism::from_chain(&self.ctx, &self.s, &self.gamma, domain, chain)
    }

    pub fn replay(&self, m: &FusionMorphism) -> Result<(), FusionError> {
        m.replay(&self.ctx, &self.s, &self.gamma)
    }

    pub fn involutions(&self) -> Vec<u32> {
        self.s.group().involutions(&self.s.all())
    }

    /// The subgroup generated by the images of a morphism's domain.
    pub fn image_set(&self, m: &FusionMorphism) -> Option<BitSet> {
        self.s.generate(&m.images)
    }

    /// The permutation of `elements` (a subgroup, in index order) induced by a
    /// morphism from it onto itself.
    pub fn perm_of(&self, elements: &[u32], m: &FusionMorphism) -> Option<Perm> {
        let g = self.s.group();
        let gens: Vec<u32> = m
            .domain
            .iter()
            .map(|x| self.s.index_of(x))
            .collect::<Option<_>>()?;
        let imgs: Vec<u32> = m
            .images
            .iter()
            .map(|x| self.s.index_of(x))
            .collect::<Option<_>>()?;
        let map = g.extend_hom(&gens, &imgs)?;
        let pos: HashMap<u32, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        let mut out = Vec::with_capacity(elements.len());
        for x in elements {
            out.push(*pos.get(map.get(x)?)?);
        }
        let p = Perm(out);
        (p.0.iter().collect::<HashSet<_>>().len() == elements.len()).then_some(p)
    }

    /// First h ∈ H(q^n)⟨τ⟩ (index order) with h·gens·h⁻¹ ⊆ target.
    pub fn ambient_conjugator_into(
        &self,
        gens: &[SylowElement],
        target: &BitSet,
    ) -> Option<SylowElement> {
        self.h_tau.iter().copied().find(|h| {
            gens.iter().all(|x| {
                self.s
                    .index_of(&self.ctx.conj(h, x))
                    .is_some_and(|i| target.contains(i))
            })
        })
    }

    /// Γ_n on S_0, generated by conjugation by generators of S_0, c_τ and γ̂_u.
    pub fn gamma1(&self) -> &Gamma1 {
        self.gamma1.get_or_init(|| {
            let ctx = &self.ctx;
            let s0_pos: HashMap<u32, u32> = self
                .s0
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, i as u32))
                .collect();
            let mut generators = Vec::new();
            for g in sylow_generators(ctx).into_iter().filter(|g| g.eps == 0) {
                let p = Perm(
                    self.s0
                        .iter()
                        .map(|&x| {
                            s0_pos[&self.s.index_of(&ctx.conj(&g, self.s.element(x))).unwrap()]
                        })
                        .collect(),
                );
                generators.push((WitnessStep::ConjInGroup { g }, p));
            }
            for aut in [NamedAut::CTau, NamedAut::GammaU(self.gamma.u)] {
                let p = self
                    .gamma
                    .perm_on(ctx, &self.s, &self.s0, aut)
                    .expect("generator of Γ permutes S_0");
                generators.push((WitnessStep::RestrictedAut { aut }, p));
            }
            let n = self.s0.len();
            let id = Perm::identity(n);
            let mut index: HashMap<Perm, usize> = HashMap::from([(id.clone(), 0)]);
            let mut elements = vec![id];
            let mut words: Vec<Vec<usize>> = vec![vec![]];
            let mut queue = VecDeque::from([0usize]);
            while let Some(i) = queue.pop_front() {
                for (gi, (_, g)) in generators.iter().enumerate() {
                    let y = g.compose(&elements[i]);
                    if !index.contains_key(&y) {
                        let mut w = words[i].clone();
                        w.push(gi);
                        index.insert(y.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(y);
                        words.push(w);
                    }
                }
            }
            Gamma1 {
                generators,
                group: PermGroup::new(elements),
                words,
            }
        })
    }

    /// Image of a subset of S_0 under the i-th element of Γ_n.
    pub fn gamma1_image(&self, i: usize, set: &BitSet) -> Option<BitSet> {
        let g1 = self.gamma1();
        let pos: HashMap<u32, u32> = self
            .s0
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        let p = &g1.group.elements[i];
        let mut out = BitSet::new(self.s.order());
        for x in set.iter() {
            out.insert(self.s0[p.apply(*pos.get(&x)?) as usize]);
        }
        Some(out)
    }

    /// Witnessed generators of Aut(P) from the selected sources.
    pub fn aut_generators(
        &self,
        p: &BitSet,
        src: AutSources,
    ) -> Result<Vec<FusionMorphism>, FusionError> {
        let gens = self.generators_of(p);
        let mut out = Vec::new();
        if src.ambient {
            for h in &self.h_tau {
                if gens.iter().all(|x| {
                    self.s
                        .index_of(&self.ctx.conj(h, x))
                        .is_some_and(|i| p.contains(i))
                }) {
                    out.push(
                        self.morphism(gens.clone(), vec![WitnessStep::ConjInGroup { g: *h }])?,
                    );
                }
            }
        }
        if src.gamma && p.is_subset(&self.s.named().s0) {
            let g1 = self.gamma1();
            for i in 0..g1.group.order() {
                if self.gamma1_image(i, p).as_ref() == Some(p) {
                    out.push(self.morphism(gens.clone(), g1.chain(i))?);
                }
            }
        }
        if src.realized {
            out.extend(self.realized_automorphisms(p)?);
        }
        Ok(out)
    }

    /// Automorphisms of P realized by Spin_7(q^n)-conjugation: for elementary abelian
    /// P ∋ z of rank ≤ 3 all automorphisms fixing z are attempted, for rank 4 those
    /// fixing z and x_C(P), and for R_0, R_1 the lifts from A_1.
    pub fn realized_automorphisms(&self, p: &BitSet) -> Result<Vec<FusionMorphism>, FusionError> {
        let g = self.s.group();
        let nm = self.s.named();
        let ctx = &self.ctx;
        if *p == nm.r0 || *p == nm.r1 {
            let gens = self.generators_of(p);
            let spin = self.spin_r0()?;
            let mut out = Vec::new();
            for c in &spin.realized {
                let el = spin_from_coeffs(ctx, c)?;
                // compose with an element of R_1 so that the lift also preserves R_1
                for fix in self.r1_adjusters(&el, p)? {
                    let chain = match fix {
                        Some(y) => vec![
                            WitnessStep::RealizedSpin { coeffs: c.clone() },
                            WitnessStep::ConjInGroup { g: y },
                        ],
                        None => vec![WitnessStep::RealizedSpin { coeffs: c.clone() }],
                    };
                    if let Ok(m) = self.morphism(gens.clone(), chain) {
                        out.push(m);
                        break;
                    }
                }
            }
            return Ok(out);
        }
        if !g.is_elementary_abelian(p) || !p.contains(nm.z) {
            return Ok(vec![]);
        }
        let z = ctx.z();
        let rank = p.len().trailing_zeros() as usize;
        // a basis with z first
        let mut basis = vec![nm.z];
        let mut span = g.closure(&basis);
        for x in p.iter() {
            if !span.contains(x) {
                basis.push(x);
                span = g.closure(&basis);
            }
        }
        let fixed: Vec<u32> = if rank == 4 {
            let xc = XcSolver::new(ctx, &self.s);
            match xc.x_c(ctx, &self.s, p) {
                Ok(r) => {
                    let xi = self
                        .s
                        .index_of(&r.x_c)
                        .ok_or(FusionError::Internal("x_C outside S"))?;
                    if xi == 0 || xi == nm.z {
                        vec![nm.z]
                    } else {
                        // rebase so that x_C is the second basis element
                        basis = vec![nm.z, xi];
                        span = g.closure(&basis);
                        for x in p.iter() {
                            if !span.contains(x) {
                                basis.push(x);
                                span = g.closure(&basis);
                            }
                        }
                        vec![nm.z, xi]
                    }
                }
                Err(_) => return Ok(vec![]),
            }
        } else {
            vec![nm.z]
        };
        let elements: Vec<u32> = p.iter().collect();
        let src: Vec<SylowElement> = basis.iter().map(|&i| self.element(i)).collect();
        let free = &basis[fixed.len()..];
        let mut out: Vec<FusionMorphism> = Vec::new();
        let mut perms: Vec<Perm> = Vec::new();
        let mut closure: HashSet<Perm> = HashSet::from([Perm::identity(elements.len())]);
        // candidate images of the free basis elements, in index order
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        while let Some(partial) = stack.pop() {
            if partial.len() == free.len() {
                let mut imgs = fixed.clone();
                imgs.extend(&partial);
                if g.closure(&imgs).len() != p.len() {
                    continue;
                }
                let map = g
                    .extend_hom(&basis, &imgs)
                    .ok_or(FusionError::Internal("basis map"))?;
                let pos: HashMap<u32, u32> = elements
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (x, i as u32))
                    .collect();
                let perm = Perm(elements.iter().map(|x| pos[&map[x]]).collect());
                if closure.contains(&perm) {
                    continue;
                }
                let dst: Vec<SylowElement> = imgs.iter().map(|&i| self.element(i)).collect();
                if src[0] != z {
                    continue;
                }
                let Ok(el) = realize_isomorphism(ctx, &src, &dst) else {
                    continue;
                };
                let m = self.morphism(src.clone(), vec![WitnessStep::realized(&el)])?;
                out.push(m);
                perms.push(perm);
                closure = perm_closure(elements.len(), &perms, 1 << 16)
                    .ok_or(FusionError::Internal("closure"))?
                    .into_iter()
                    .collect();
                continue;
            }
            for x in p.iter().collect::<Vec<_>>().into_iter().rev() {
                if x != 0 && !partial.contains(&x) {
                    let mut nx = partial.clone();
                    nx.push(x);
                    stack.push(nx);
                }
            }
        }
        Ok(out)
    }

    /// For a realized element normalizing R_0, candidate corrections y ∈ R_0 (or none)
    /// so that c_y ∘ c_g also maps B̂ into R_1.
    fn r1_adjusters(
        &self,
        el: &SpinGroupElement,
        p: &BitSet,
    ) -> Result<Vec<Option<SylowElement>>, FusionError> {
        let nm = self.s.named();
        if *p == nm.r0 {
            return Ok(vec![None]);
        }
        let b = self
            .ctx
            .locate(&el.conjugate(&self.ctx.to_clifford(&self.ctx.b_hat())));
        let mut out = vec![None];
        if b.is_some() {
            out.extend(nm.r0.iter().map(|y| Some(self.element(y))));
        }
        Ok(out)
    }

    fn spin_r0(&self) -> Result<&SpinAutR0, FusionError> {
        self.spin_r0
            .as_ref()
            .ok_or(FusionError::Internal("unit search not run"))
    }

    /// The automorphism group of P generated by the witnessed generators.
    pub fn aut_group(&self, p: &BitSet, src: AutSources) -> Result<AutGroup, FusionError> {
        let elements: Vec<u32> = p.iter().collect();
        let mut generators = Vec::new();
        let mut seen = HashSet::new();
        for m in self.aut_generators(p, src)? {
            let perm = self
                .perm_of(&elements, &m)
                .ok_or(FusionError::Internal("generator is not an automorphism"))?;
            if !perm.is_identity() && seen.insert(perm.clone()) {
                generators.push((m, perm));
            }
        }
        let perms: Vec<Perm> = generators.iter().map(|(_, p)| p.clone()).collect();
        let group = PermGroup::generate(elements.len(), &perms, 1 << 20)
            .ok_or(FusionError::Internal("automorphism group too large"))?;
        Ok(AutGroup {
            elements,
            generators,
            group,
        })
    }

    /// A witnessed F-isomorphism P → Q, or None when the oracle finds none.
    pub fn iso_query(&self, p: &BitSet, q: &BitSet) -> Result<Option<FusionMorphism>, FusionError> {
        if p.len() != q.len() {
            return Ok(None);
        }
        let gens = self.generators_of(p);
        if p == q {
            return Ok(Some(FusionMorphism::identity(gens)));
        }
        if let Some(h) = self.ambient_conjugator_into(&gens, q) {
            return Ok(Some(
                self.morphism(gens, vec![WitnessStep::ConjInGroup { g: h }])?,
            ));
        }
        let s0 = &self.s.named().s0;
        if p.is_subset(s0) {
            for aut in [
                NamedAut::GammaU(self.gamma.u),
                NamedAut::GammaUInv(self.gamma.u),
            ] {
                let step = WitnessStep::RestrictedAut { aut };
                let m = self.morphism(gens.clone(), vec![step.clone()])?;
                let img = self
                    .image_set(&m)
                    .ok_or(FusionError::Internal("image outside S"))?;
                if img == *q {
                    return Ok(Some(m));
                }
                if let Some(h) = self.ambient_conjugator_into(&m.images, q) {
                    return Ok(Some(
                        self.morphism(gens, vec![step, WitnessStep::ConjInGroup { g: h }])?,
                    ));
                }
            }
        }
        let g = self.s.group();
        let nm = self.s.named();
        if g.is_elementary_abelian(p)
            && g.is_elementary_abelian(q)
            && p.contains(nm.z)
            && q.contains(nm.z)
            && p.len() <= 8
        {
            let mut basis = vec![nm.z];
            for x in p.iter() {
                if !g.closure(&basis).contains(x) {
                    basis.push(x);
                }
            }
            let src: Vec<SylowElement> = basis.iter().map(|&i| self.element(i)).collect();
            let cands: Vec<u32> = q.iter().filter(|&x| x != 0 && x != nm.z).collect();
            let mut pick = vec![nm.z];
            if let Some(m) = self.realize_search(&src, &cands, &mut pick, q)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    fn realize_search(
        &self,
        src: &[SylowElement],
        cands: &[u32],
        pick: &mut Vec<u32>,
        q: &BitSet,
    ) -> Result<Option<FusionMorphism>, FusionError> {
        if pick.len() == src.len() {
            if self.s.group().closure(pick).len() != q.len() {
                return Ok(None);
            }
            let dst: Vec<SylowElement> = pick.iter().map(|&i| self.element(i)).collect();
            return match realize_isomorphism(&self.ctx, src, &dst) {
                Ok(el) => Ok(self
                    .morphism(src.to_vec(), vec![WitnessStep::realized(&el)])
                    .ok()),
                Err(_) => Ok(None),
            };
        }
        for &c in cands {
            if pick.contains(&c) {
                continue;
            }
            pick.push(c);
            let r = self.realize_search(src, cands, pick, q)?;
            pick.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
}
