use serde::Serialize;

use super::{label_name, Spin7Context, Spin7Error, StdLabel, SylowElement, SylowGroup};
use crate::gf::FieldElement;
use crate::group::BitSet;
use crate::linalg::{Mat, M2};

type Fe = FieldElement;

#[derive(Clone, Debug, Serialize)]
pub struct Eigenspace {
    /// Bit i set iff the i-th non-central basis element acts by −1.
    pub character: u32,
    pub dim: usize,
    pub disc_square: bool,
    #[serde(skip)]
    pub basis: Vec<Vec<Fe>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EType {
    I,
    II,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElemAbelianReport {
    pub elements: Vec<SylowElement>,
    pub rank: usize,
    /// z first, then a basis of the rest.
    pub basis: Vec<SylowElement>,
    pub eigenspaces: Vec<Eigenspace>,
    pub etype: EType,
    pub x_c: Option<SylowElement>,
    pub tag: Option<String>,
}

/// A basis of an elementary abelian group with z first; checks the group structure.
pub fn elem_basis(
    ctx: &Spin7Context,
    elements: &[SylowElement],
) -> Result<Vec<SylowElement>, Spin7Error> {
    let id = ctx.identity();
    let z = ctx.z();
    if !elements.contains(&z) {
        return Err(Spin7Error::MissingCenter);
    }
    for a in elements {
        if ctx.mul(a, a) != id {
            return Err(Spin7Error::NotElementaryAbelian);
        }
        for b in elements {
            if ctx.mul(a, b) != ctx.mul(b, a) {
                return Err(Spin7Error::NotElementaryAbelian);
            }
        }
    }
    let mut basis = vec![z];
    let mut span = vec![id, z];
    for e in elements {
        if span.contains(e) {
            continue;
        }
        let more: Vec<SylowElement> = span.iter().map(|s| ctx.mul(s, e)).collect();
        span.extend(more);
        basis.push(*e);
    }
    if span.len() != elements.len() || !span.iter().all(|s| elements.contains(s)) {
        return Err(Spin7Error::NotElementaryAbelian);
    }
    Ok(basis)
}

/// Nonzero simultaneous eigenspaces of the images of `gens` (commuting involutions).
pub fn eigenspaces(ctx: &Spin7Context, gens: &[SylowElement]) -> Vec<Eigenspace> {
    let f = ctx.f();
    let v7 = ctx.v7();
    let mats: Vec<Mat> = gens.iter().map(|g| ctx.orth_image(g)).collect();
    let mut out = Vec::new();
    for chi in 0..1u32 << gens.len() {
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (i, m) in mats.iter().enumerate() {
            let s = if chi >> i & 1 == 1 {
                f.neg(Fe::ONE)
            } else {
                Fe::ONE
            };
            let d = m.sub(f, &Mat::identity(7).scale(f, s));
            rows.extend((0..7).map(|r| d.row(r)));
        }
        let basis = if rows.is_empty() {
            (0..7)
                .map(|j| {
                    let mut e = vec![Fe::ZERO; 7];
                    e[j] = Fe::ONE;
                    e
                })
                .collect()
        } else {
            Mat::from_rows(&rows).nullspace(f)
        };
        if basis.is_empty() {
            continue;
        }
        let b = Mat::from_cols(&basis);
        let gram = b.transpose().mul(f, v7.gram()).mul(f, &b);
        let disc = gram.det(f);
        out.push(Eigenspace {
            character: chi,
            dim: basis.len(),
            disc_square: f.is_square(disc, ctx.level()),
            basis,
        });
    }
    out
}

/// Rank, eigenspace decomposition and type of an elementary abelian E ∋ z.
pub fn classify_elem_abelian(
    ctx: &Spin7Context,
    elements: &[SylowElement],
) -> Result<ElemAbelianReport, Spin7Error> {
    let basis = elem_basis(ctx, elements)?;
    let eig = eigenspaces(ctx, &basis[1..]);
    if eig.iter().map(|e| e.dim).sum::<usize>() != 7 {
        return Err(Spin7Error::InvariantViolation("eigenspaces do not span V"));
    }
    let etype = if eig.iter().all(|e| e.disc_square) {
        EType::I
    } else {
        EType::II
    };
    Ok(ElemAbelianReport {
        elements: elements.to_vec(),
        rank: basis.len(),
        basis,
        eigenspaces: eig,
        etype,
        x_c: None,
        tag: None,
    })
}

/// The outcome of reducing a rank-4 E ∋ U to standard form: c E c⁻¹ is the standard
/// subgroup `label`, with c ∈ H(q^n).
#[derive(Clone, Debug, Serialize)]
pub struct XcReduction {
    pub label: StdLabel,
    pub conjugator: SylowElement,
    pub x_c: SylowElement,
}

/// Reduces rank-4 subgroups of S containing U to the standard forms E_ijk, E'_ijk.
pub struct XcSolver {
    sl2: Vec<M2>,
    standards: Vec<(StdLabel, BitSet)>,
}

impl XcSolver {
    pub fn new(ctx: &Spin7Context, s: &SylowGroup) -> XcSolver {
        XcSolver {
            sl2: ctx.sl2(),
            standards: s.standard_rank4(ctx),
        }
    }

    pub fn standards(&self) -> &[(StdLabel, BitSet)] {
        &self.standards
    }

    pub fn x_c(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        e: &BitSet,
    ) -> Result<XcReduction, Spin7Error> {
        self.x_c_via(ctx, s, e, 0)
    }

    /// As `x_c`, starting from the `pick`-th element of E∖U with coordinates in SL_2(q^n).
    pub fn x_c_via(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        e: &BitSet,
        pick: usize,
    ) -> Result<XcReduction, Spin7Error> {
        let f = ctx.f();
        let g = s.group();
        let nm = s.named();
        if e.len() != 16 || !nm.u.is_subset(e) || !g.is_elementary_abelian(e) {
            return Err(Spin7Error::NotRankFour);
        }
        let rational: Vec<SylowElement> = e
            .iter()
            .filter(|&i| !nm.u.contains(i))
            .map(|i| *s.element(i))
            .filter(|x| x.eps == 0 && ctx.is_rational_coords(x))
            .collect();
        let gel = rational.get(pick).ok_or(Spin7Error::NoStandardForm)?;
        // Conjugate each coordinate (of order 4) to A.
        let a = ctx.a();
        let mut ms = [M2::identity(); 3];
        for (i, xi) in gel.x.iter().enumerate() {
            ms[i] = *self
                .sl2
                .iter()
                .find(|m| m.mul(f, xi).mul(f, &m.inv(f)) == a)
                .ok_or(Spin7Error::NoStandardForm)?;
        }
        let h = ctx.trp(ms[0], ms[1], ms[2]);
        let e1 = s
            .map_set(e, |x| ctx.conj(&h, x))
            .ok_or(Spin7Error::NoStandardForm)?;
        for r in nm.r0.iter() {
            let e2 = g.conjugate_set(r, &e1);
            if let Some((label, _)) = self.standards.iter().find(|(_, std)| *std == e2) {
                let c = ctx.mul(s.element(r), &h);
                let xs = s.standard_xc(ctx, label);
                let x_c = ctx.mul(&ctx.mul(&ctx.inv(&c), &xs), &c);
                return Ok(XcReduction {
                    label: *label,
                    conjugator: c,
                    x_c,
                });
            }
        }
        Err(Spin7Error::NoStandardForm)
    }

    /// Number of elements of E∖U usable as starting points.
    pub fn choices(&self, ctx: &Spin7Context, s: &SylowGroup, e: &BitSet) -> usize {
        let nm = s.named();
        e.iter()
            .filter(|&i| !nm.u.contains(i))
            .map(|i| s.element(i))
            .filter(|x| x.eps == 0 && ctx.is_rational_coords(x))
            .count()
    }

    /// Full report for a rank-4 E ∋ U in S.
    pub fn report(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        e: &BitSet,
    ) -> Result<ElemAbelianReport, Spin7Error> {
        let mut rep = classify_elem_abelian(ctx, &s.subgroup_elements(e))?;
        let red = self.x_c(ctx, s, e)?;
        rep.x_c = Some(red.x_c);
        rep.tag = Some(label_name(&red.label));
        Ok(rep)
    }
}
