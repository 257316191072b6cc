//! Fully materialized fusion systems over small 2-groups: every morphism set is
//! listed, so the saturation axioms and the involution criterion can be decided
//! exhaustively.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::FusionError;
use crate::gf::FieldSpec;
use crate::group::{BitSet, FinGroup};
use crate::linalg::sl2_elements;

/// An injective homomorphism P → S, listed as the images of P's elements in index order.
pub type Hom = Vec<u32>;

pub struct SmallFusion {
    group: FinGroup,
    s: BitSet,
    subgroups: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
    homs: Vec<Vec<Hom>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub subgroups: usize,
    pub morphisms: usize,
    pub fully_normalized: usize,
    pub extensions_checked: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub condition: char,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CriterionReport {
    pub conditions: Vec<ConditionOutcome>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

fn elements(p: &BitSet) -> Vec<u32> {
    p.iter().collect()
}

impl SmallFusion {
    /// Builds a system from explicit morphism sets; homs[i] lists Hom_F(subgroups[i], S).
    fn new(group: FinGroup, s: BitSet, subgroups: Vec<BitSet>, homs: Vec<Vec<Hom>>) -> SmallFusion {
        let index = subgroups
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        SmallFusion {
            group,
            s,
            subgroups,
            index,
            homs,
        }
    }

    /// F_S(G) for a Sylow 2-subgroup S of G.
    pub fn from_group(group: FinGroup) -> SmallFusion {
        let s = group.sylow2();
        Self::from_group_over(group, s)
    }

    /// F_S(G) over a given 2-subgroup S.
    pub fn from_group_over(group: FinGroup, s: BitSet) -> SmallFusion {
        let subgroups = group.all_subgroups(&s);
        let mut homs = Vec::with_capacity(subgroups.len());
        for p in &subgroups {
            let els = elements(p);
            let mut seen: HashSet<Hom> = HashSet::new();
            let mut list = Vec::new();
            for g in 0..group.order() as u32 {
                let img: Hom = els.iter().map(|&x| group.conj(g, x)).collect();
                if img.iter().all(|&y| s.contains(y)) && seen.insert(img.clone()) {
                    list.push(img);
                }
            }
            list.sort();
            homs.push(list);
        }
        Self::new(group, s, subgroups, homs)
    }

    /// SL_2 over the field of order p^(2^level).
    pub fn sl2(p: u64, level: usize) -> Result<SmallFusion, FusionError> {
        let f = FieldSpec::build(p, 1, level as u32)
            .map_err(|_| FusionError::Internal("field construction"))?;
        let mut els = sl2_elements(&f, level);
        let id = crate::linalg::M2::identity();
        let pos = els
            .iter()
            .position(|x| *x == id)
            .ok_or(FusionError::Internal("identity missing"))?;
        els.swap(0, pos);
        let g = FinGroup::from_elements(&els, |a, b| a.mul(&f, b));
        Ok(Self::from_group(g))
    }

    /// The fusion system of S = C_2 over itself.
    pub fn trivial_c2() -> SmallFusion {
        let g = FinGroup::from_elements(&[0u8, 1], |a, b| a ^ b);
        let s = g.all();
        Self::from_group_over(g, s)
    }

    /// A copy of F_S(G) with one non-inner automorphism of S removed from Aut_F(S).
    pub fn without_one_outer_automorphism(&self) -> Option<SmallFusion> {
        let top = self.index[&self.s];
        let els = elements(&self.s);
        let inner: HashSet<Hom> = els
            .iter()
            .map(|&g| els.iter().map(|&x| self.group.conj(g, x)).collect())
            .collect();
        let drop = self.homs[top].iter().find(|h| !inner.contains(*h))?.clone();
        let mut homs = self.homs.clone();
        homs[top].retain(|h| *h != drop);
        Some(Self::new(
            self.group.clone(),
            self.s.clone(),
            self.subgroups.clone(),
            homs,
        ))
    }

    pub fn s(&self) -> &BitSet {
        &self.s
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn subgroups(&self) -> &[BitSet] {
        &self.subgroups
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().map(|h| h.len()).sum()
    }

    pub fn homs(&self, p: &BitSet) -> &[Hom] {
        &self.homs[self.index[p]]
    }

    fn image(&self, h: &Hom) -> BitSet {
        BitSet::from_iter(self.group.order(), h.iter().copied())
    }

    /// Aut_F(P) as maps of P's sorted element list.
    pub fn auts(&self, p: &BitSet) -> Vec<&Hom> {
        self.homs(p)
            .iter()
            .filter(|h| self.image(h) == *p)
            .collect()
    }

    fn aut_s(&self, p: &BitSet) -> HashSet<Hom> {
        let els = elements(p);
        let n = self.group.normalizer(&self.s, p);
        n.iter()
            .map(|g| els.iter().map(|&x| self.group.conj(g, x)).collect())
            .collect()
    }

    /// Subgroups F-isomorphic to P.
    pub fn conjugates(&self, p: &BitSet) -> Vec<BitSet> {
        let mut out: Vec<BitSet> = self.homs(p).iter().map(|h| self.image(h)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_fully_normalized(&self, p: &BitSet) -> bool {
        let n = self.group.normalizer(&self.s, p).len();
        self.conjugates(p)
            .iter()
            .all(|q| self.group.normalizer(&self.s, q).len() <= n)
    }

    pub fn is_fully_centralized(&self, p: &BitSet) -> bool {
        let c = self.group.centralizer(&self.s, p).len();
        self.conjugates(p)
            .iter()
            .all(|q| self.group.centralizer(&self.s, q).len() <= c)
    }

    /// Axioms (I) and (II) checked over every subgroup and every morphism.
    pub fn check_saturation_axioms(&self) -> Result<AxiomReport, FusionError> {
        let g = &self.group;
        let mut fully_normalized = 0;
        let mut extensions_checked = 0;
        for p in &self.subgroups {
            let els = elements(p);
            let pos: HashMap<u32, usize> = els.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let auts: HashSet<Hom> = self.auts(p).into_iter().cloned().collect();
            let compose = |a: &Hom, b: &Hom| -> Hom { b.iter().map(|y| a[pos[y]]).collect() };
            for a in &auts {
                for b in &auts {
                    if !auts.contains(&compose(a, b)) {
                        return Err(FusionError::AxiomFailure(format!(
                            "(I): Aut_F({els:?}) is not closed under composition"
                        )));
                    }
                }
            }
            if self.is_fully_normalized(p) {
                fully_normalized += 1;
                if !self.is_fully_centralized(p) {
                    return Err(FusionError::AxiomFailure(format!(
                        "(I): {els:?} fully normalized but not fully centralized"
                    )));
                }
                let aut_s = self.aut_s(p);
                let two_part = 1usize << auts.len().trailing_zeros();
                if !aut_s.is_subset(&auts) || aut_s.len() != two_part {
                    return Err(FusionError::AxiomFailure(format!(
                        "(I): |Aut_S({els:?})| = {} is not the 2-part of |Aut_F| = {}",
                        aut_s.len(),
                        auts.len()
                    )));
                }
            }
            let norm = g.normalizer(&self.s, p);
            for phi in self.homs(p) {
                let q = self.image(phi);
                if !self.is_fully_centralized(&q) {
                    continue;
                }
                extensions_checked += 1;
                let aut_s_q = self.aut_s(&q);
                let qels = elements(&q);
                let qpos: HashMap<u32, usize> =
                    qels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
                // φ c_g φ⁻¹ on Q, as a map of Q's sorted elements
                let mut nphi = vec![];
                for x in norm.iter() {
                    let mut m = vec![0u32; qels.len()];
                    for (i, &y) in els.iter().enumerate() {
                        m[qpos[&phi[i]]] = phi[pos[&g.conj(x, y)]];
                    }
                    if aut_s_q.contains(&m) {
                        nphi.push(x);
                    }
                }
                let n_phi = g.closure(&nphi);
                let extends = self.homs(&n_phi).iter().any(|psi| {
                    let npos: HashMap<u32, usize> =
                        n_phi.iter().enumerate().map(|(i, x)| (x, i)).collect();
                    els.iter().enumerate().all(|(i, x)| psi[npos[x]] == phi[i])
                });
                if !extends {
                    return Err(FusionError::AxiomFailure(format!(
                        "(II): {phi:?} on {els:?} does not extend to N_φ"
                    )));
                }
            }
        }
        Ok(AxiomReport {
            subgroups: self.subgroups.len(),
            morphisms: self.morphism_count(),
            fully_normalized,
            extensions_checked,
        })
    }

    /// C_F(x): morphisms ψ: Q → C_S(x) that are restrictions of some φ ∈ Hom_F(⟨x⟩Q, S)
    /// fixing x.
    pub fn centralizer_system(&self, x: u32) -> SmallFusion {
        let g = &self.group;
        let cs = g.centralizer(&self.s, &g.closure(&[x]));
        let subgroups: Vec<BitSet> = self
            .subgroups
            .iter()
            .filter(|q| q.is_subset(&cs))
            .cloned()
            .collect();
        let mut homs = Vec::new();
        for q in &subgroups {
            let qels = elements(q);
            let mut gens = g.generators(q);
            gens.push(x);
            let xq = g.closure(&gens);
            let xels = elements(&xq);
            let xpos: HashMap<u32, usize> = xels.iter().enumerate().map(|(i, &y)| (y, i)).collect();
            let mut set: HashSet<Hom> = HashSet::new();
            for phi in self.homs(&xq) {
                if phi[xpos[&x]] != x {
                    continue;
                }
                let r: Hom = qels.iter().map(|y| phi[xpos[y]]).collect();
                if r.iter().all(|&y| cs.contains(y)) {
                    set.insert(r);
                }
            }
            let mut list: Vec<Hom> = set.into_iter().collect();
            list.sort();
            homs.push(list);
        }
        Self::new(self.group.clone(), cs, subgroups, homs)
    }

    /// Conditions (a)–(c) of the involution criterion for a set X of involutions;
    /// (c) is decided by the axiom check on C_F(x).
    pub fn check_involution_criterion(&self, xs: &[u32]) -> CriterionReport {
        let g = &self.group;
        let invs = g.involutions(&self.s);
        let xset: HashSet<u32> = xs.iter().copied().collect();
        // F-conjugates of each involution
        let orbit = |t: u32| -> Vec<u32> {
            let c = g.closure(&[t]);
            let pos = elements(&c).iter().position(|&y| y == t).unwrap();
            self.homs(&c).iter().map(|h| h[pos]).collect()
        };
        let bad_a: Vec<u32> = invs
            .iter()
            .copied()
            .filter(|&t| !orbit(t).iter().any(|y| xset.contains(y)))
            .collect();
        let mut bad_b = Vec::new();
        for &t in &invs {
            let cx = g.centralizer(&self.s, &g.closure(&[t]));
            let cels = elements(&cx);
            let tpos = cels.iter().position(|&y| y == t).unwrap();
            for y in orbit(t).into_iter().filter(|y| xset.contains(y)) {
                let cy = g.centralizer(&self.s, &g.closure(&[y]));
                let ok = self
                    .homs(&cx)
                    .iter()
                    .any(|h| h[tpos] == y && h.iter().all(|&v| cy.contains(v)));
                if !ok {
                    bad_b.push((t, y));
                }
            }
        }
        let mut bad_c = Vec::new();
        for &x in xs {
            if let Err(e) = self.centralizer_system(x).check_saturation_axioms() {
                bad_c.push(format!("{x}: {e}"));
            }
        }
        let outcome = |c, bad: String, empty: bool| ConditionOutcome {
            condition: c,
            pass: empty,
            detail: bad,
        };
        CriterionReport {
            conditions: vec![
                outcome('a', format!("{bad_a:?}"), bad_a.is_empty()),
                outcome('b', format!("{bad_b:?}"), bad_b.is_empty()),
                outcome('c', bad_c.join("; "), bad_c.is_empty()),
            ],
        }
    }

    /// The involutions of Z(S).
    pub fn central_involutions(&self) -> Vec<u32> {
        self.group.involutions(&self.group.center(&self.s))
    }
}
