use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Spin7Context, Spin7Error};
use crate::gf::{FieldElement, FieldSpec};
use crate::group::{BitSet, FinGroup};
use crate::linalg::M2;

/// trp[X1, X2, X3]·τ^ε with the triple taken up to the common sign ±(I, I, I).
///
/// Normal form: the first nonzero entry c of X1 satisfies c ≤ −c in index order.
/// Products follow (h1, ε1)(h2, ε2) = (h1·σ^{ε1}(h2), ε1 ⊕ ε2), σ swapping X1 and X2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SylowElement {
    pub x: [M2; 3],
    pub eps: u8,
}

impl SylowElement {
    /// Without normalization.
    pub fn raw(x: [M2; 3], eps: u8) -> SylowElement {
        SylowElement { x, eps }
    }

    pub fn normalized(self, f: &FieldSpec) -> SylowElement {
        let c = self.x[0]
            .0
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .unwrap_or(FieldElement::ZERO);
        if f.neg(c) < c {
            SylowElement {
                x: self.x.map(|m| m.neg(f)),
                eps: self.eps,
            }
        } else {
            self
        }
    }

    pub fn mul(&self, f: &FieldSpec, o: &SylowElement) -> SylowElement {
        let h2 = if self.eps == 1 {
            [o.x[1], o.x[0], o.x[2]]
        } else {
            o.x
        };
        let x = [0, 1, 2].map(|i| self.x[i].mul(f, &h2[i]));
        SylowElement {
            x,
            eps: self.eps ^ o.eps,
        }
        .normalized(f)
    }

    pub fn inv(&self, f: &FieldSpec) -> SylowElement {
        let h = self.x.map(|m| m.inv(f));
        let x = if self.eps == 1 { [h[1], h[0], h[2]] } else { h };
        SylowElement { x, eps: self.eps }.normalized(f)
    }

    /// The coordinate swap σ applied to the triple.
    pub fn swapped(&self) -> SylowElement {
        SylowElement {
            x: [self.x[1], self.x[0], self.x[2]],
            eps: self.eps,
        }
    }

    pub fn indices(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .x
            .iter()
            .flat_map(|m| m.0.iter().map(|e| e.0))
            .collect();
        v.push(self.eps as u64);
        v
    }

    pub fn from_indices(v: &[u64]) -> Option<SylowElement> {
        if v.len() != 13 || v[12] > 1 {
            return None;
        }
        let m = |o: usize| M2([0, 1, 2, 3].map(|i| FieldElement(v[o + i])));
        Some(SylowElement {
            x: [m(0), m(4), m(8)],
            eps: v[12] as u8,
        })
    }
}

/// Largest |S| for which the multiplication table is built.
pub const TABLE_LIMIT: usize = 4096;

/// S(q^n) = S_0(q^n)⟨τ⟩ enumerated, with its multiplication table and named subgroups.
#[derive(Debug)]
pub struct SylowGroup {
    elements: Vec<SylowElement>,
    index: HashMap<SylowElement, u32>,
    group: FinGroup,
    named: Named,
}

/// Indices and subgroups fixed by the construction.
#[derive(Debug, Clone)]
pub struct Named {
    pub z: u32,
    pub z1: u32,
    pub a_hat: u32,
    pub b_hat: u32,
    pub tau: u32,
    pub u: BitSet,
    pub r0: BitSet,
    pub r1: BitSet,
    pub a1: BitSet,
    pub e_star: BitSet,
    pub s0: BitSet,
}

/// Labels of the standard rank-4 subgroups: (primed, i, j, k).
pub type StdLabel = (bool, u8, u8, u8);

pub fn label_name(l: &StdLabel) -> String {
    format!("E{}_{}{}{}", if l.0 { "'" } else { "" }, l.1, l.2, l.3)
}

/// Elements of S_0(q^n): Q(q^n)³ and Q(q^n)³·trp[Y, Y, Y], in normal form, sorted.
pub fn s0_elements(ctx: &Spin7Context) -> Vec<SylowElement> {
    let f = ctx.f();
    let q = ctx.q_elements();
    let y = ctx.y();
    let mut out = Vec::with_capacity(q.len().pow(3));
    for a in &q {
        for b in &q {
            for c in &q {
                for x in [[*a, *b, *c], [a.mul(f, &y), b.mul(f, &y), c.mul(f, &y)]] {
                    let g = SylowElement::raw(x, 0);
                    if g.normalized(f) == g {
                        out.push(g);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Generators of S: trp[X,I,I], trp[I,X,I], trp[I,I,X], the B's, trp[Y,Y,Y] and τ.
pub fn sylow_generators(ctx: &Spin7Context) -> Vec<SylowElement> {
    let (i, x, b, y) = (M2::identity(), ctx.x(), ctx.b(), ctx.y());
    vec![
        ctx.trp(x, i, i),
        ctx.trp(i, x, i),
        ctx.trp(i, i, x),
        ctx.trp(b, i, i),
        ctx.trp(i, b, i),
        ctx.trp(i, i, b),
        ctx.trp(y, y, y),
        ctx.tau_elem(),
    ]
}

impl SylowGroup {
    pub fn build(ctx: &Spin7Context) -> Result<SylowGroup, Spin7Error> {
        let s0 = s0_elements(ctx);
        let tau = ctx.tau_elem();
        let mut all: Vec<SylowElement> = s0.clone();
        all.extend(s0.iter().map(|g| ctx.mul(g, &tau)));
        Self::from_elements(ctx, all)
    }

    /// Builds the table from a precomputed element list (e.g. a cache).
    pub fn from_elements(
        ctx: &Spin7Context,
        mut all: Vec<SylowElement>,
    ) -> Result<SylowGroup, Spin7Error> {
        if all.len() > TABLE_LIMIT {
            return Err(Spin7Error::UnsupportedScale);
        }
        let id = ctx.identity();
        all.sort();
        all.dedup();
        let pos = all
            .iter()
            .position(|g| *g == id)
            .ok_or(Spin7Error::InvariantViolation("identity missing"))?;
        all.remove(pos);
        all.insert(0, id);
        let f = ctx.f();
        let group = FinGroup::try_from_elements(&all, |a, b| a.mul(f, b)).ok_or(
            Spin7Error::InvariantViolation("element list is not closed under multiplication"),
        )?;
        let index: HashMap<SylowElement, u32> = all
            .iter()
            .enumerate()
            .map(|(i, g)| (*g, i as u32))
            .collect();
        let n = all.len();
        let idx = |g: &SylowElement| {
            index
                .get(g)
                .copied()
                .ok_or(Spin7Error::InvariantViolation("named element outside S"))
        };
        let (z, z1, a_hat, b_hat, tau) = (
            idx(&ctx.z())?,
            idx(&ctx.z1())?,
            idx(&ctx.a_hat())?,
            idx(&ctx.b_hat())?,
            idx(&ctx.tau_elem())?,
        );
        let (i, x, y) = (M2::identity(), ctx.x(), ctx.y());
        let u = group.closure(&[z, z1]);
        let r0 = group.closure(&[
            idx(&ctx.trp(x, i, i))?,
            idx(&ctx.trp(i, x, i))?,
            idx(&ctx.trp(i, i, x))?,
            idx(&ctx.trp(y, y, y))?,
        ]);
        let mut r1g: Vec<u32> = r0.iter().collect();
        r1g.push(b_hat);
        let r1 = group.closure(&r1g);
        let a1 = group.closure(&[z, z1, a_hat]);
        let e_star = group.closure(&[z, z1, a_hat, b_hat]);
        let s0 = BitSet::from_iter(n, (0..n as u32).filter(|&g| all[g as usize].eps == 0));
        let named = Named {
            z,
            z1,
            a_hat,
            b_hat,
            tau,
            u,
            r0,
            r1,
            a1,
            e_star,
            s0,
        };
        Ok(SylowGroup {
            elements: all,
            index,
            group,
            named,
        })
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[SylowElement] {
        &self.elements
    }
    pub fn element(&self, i: u32) -> &SylowElement {
        &self.elements[i as usize]
    }
    pub fn index_of(&self, g: &SylowElement) -> Option<u32> {
        self.index.get(g).copied()
    }
    pub fn named(&self) -> &Named {
        &self.named
    }
    pub fn all(&self) -> BitSet {
        self.group.all()
    }

    /// Subgroup generated by the given elements, which must lie in S.
    pub fn generate(&self, gens: &[SylowElement]) -> Option<BitSet> {
        let idx: Option<Vec<u32>> = gens.iter().map(|g| self.index_of(g)).collect();
        Some(self.group.closure(&idx?))
    }

    pub fn subgroup_elements(&self, set: &BitSet) -> Vec<SylowElement> {
        set.iter().map(|i| self.elements[i as usize]).collect()
    }

    /// The image of a subset of S under a map on elements; None if it leaves S.
    pub fn map_set(
        &self,
        set: &BitSet,
        f: impl Fn(&SylowElement) -> SylowElement,
    ) -> Option<BitSet> {
        let mut out = BitSet::new(self.order());
        for i in set.iter() {
            out.insert(self.index_of(&f(&self.elements[i as usize]))?);
        }
        Some(out)
    }

    /// E_ijk = ⟨z, z_1, Â, trp[X^iB, X^jB, X^kB]⟩ and E'_ijk with X^iYB, for i, j, k ∈ {0, 1}.
    pub fn standard_rank4(&self, ctx: &Spin7Context) -> Vec<(StdLabel, BitSet)> {
        let f = ctx.f();
        let (x, y, b) = (ctx.x(), ctx.y(), ctx.b());
        let nm = &self.named;
        let mut out = Vec::new();
        for primed in [false, true] {
            for i in 0..2u8 {
                for j in 0..2u8 {
                    for k in 0..2u8 {
                        let coord = |e: u8| {
                            let base = if e == 1 { x } else { M2::identity() };
                            let base = if primed { base.mul(f, &y) } else { base };
                            base.mul(f, &b)
                        };
                        let w = ctx.trp(coord(i), coord(j), coord(k));
                        let wi = self.index_of(&w).expect("standard generator lies in S");
                        let set = self.group.closure(&[nm.z, nm.z1, nm.a_hat, wi]);
                        out.push(((primed, i, j, k), set));
                    }
                }
            }
        }
        out
    }

    /// Closed-form x_C of a standard subgroup: trp[(−I)^i, (−I)^j, (−I)^k], times Â if primed.
    pub fn standard_xc(&self, ctx: &Spin7Context, l: &StdLabel) -> SylowElement {
        let s = |e: u8| {
            if e == 1 {
                ctx.minus_i()
            } else {
                M2::identity()
            }
        };
        let base = ctx.trp(s(l.1), s(l.2), s(l.3));
        if l.0 {
            ctx.mul(&base, &ctx.a_hat())
        } else {
            base
        }
    }

    /// All elementary abelian subgroups of rank 4 containing U.
    pub fn rank4_catalogue(&self) -> Vec<BitSet> {
        let g = &self.group;
        let nm = &self.named;
        let invs: Vec<u32> = g
            .involutions(&nm.s0)
            .into_iter()
            .filter(|&t| !nm.u.contains(t))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for (ai, &a) in invs.iter().enumerate() {
            let ua = g.closure(&[nm.z, nm.z1, a]);
            if !g.is_elementary_abelian(&ua) {
                continue;
            }
            for &b in &invs[ai + 1..] {
                if ua.contains(b) || !g.commutes(a, b) || !g.commutes(b, nm.z1) {
                    continue;
                }
                let e = g.closure(&[nm.z, nm.z1, a, b]);
                if e.len() == 16 && g.is_elementary_abelian(&e) {
                    seen.insert(e);
                }
            }
        }
        seen.into_iter().collect()
    }
}
