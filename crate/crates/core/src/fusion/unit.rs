//! The unit u and the group ⟨Aut_Spin(R_0), γ_u⟩ ≤ GL_3(Z/2^k).
//!
//! R_0 ≅ (C_{2^k})³ has the basis r1 = trp[I, I, X], r2 = trp[X, I, I],
//! r3 = trp[Y, Y, Y], whose 2^{k−1}-th powers are z, z_1, Â. Automorphisms are
//! recorded as 3×3 matrices over Z/2^k whose columns are the coordinates of the
//! images of r1, r2, r3.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::{FusionError, GammaData};
use crate::group::{BitSet, FinGroup};
use crate::linalg::M2;
use crate::spin7::{realize_isomorphism, Spin7Context, SylowElement, SylowGroup};

/// A 3×3 matrix over Z/2^k, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat3(pub [u32; 9]);

impl Mat3 {
    pub fn identity() -> Mat3 {
        Mat3([1, 0, 0, 0, 1, 0, 0, 0, 1])
    }

    pub fn scalar(c: u32, m: u32) -> Mat3 {
        let c = c % m;
        Mat3([c, 0, 0, 0, c, 0, 0, 0, c])
    }

    pub fn mul(&self, o: &Mat3, m: u32) -> Mat3 {
        let mut r = [0u32; 9];
        for i in 0..3 {
            for j in 0..3 {
                let s: u32 = (0..3).map(|t| self.0[3 * i + t] * o.0[3 * t + j]).sum();
                r[3 * i + j] = s % m;
            }
        }
        Mat3(r)
    }

    pub fn reduce(&self, m: u32) -> Mat3 {
        Mat3(self.0.map(|x| x % m))
    }

    pub fn col(&self, j: usize) -> [u32; 3] {
        [self.0[j], self.0[3 + j], self.0[6 + j]]
    }
}

/// Closure of a set of matrices under multiplication, refusing above `limit`.
pub fn mat_closure(gens: &[Mat3], m: u32, limit: usize) -> Option<Vec<Mat3>> {
    let id = Mat3::identity().reduce(m);
    let mut seen = HashSet::from([id]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x, m);
            if seen.insert(y) {
                if out.len() >= limit {
                    return None;
                }
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    Some(out)
}

/// Coordinates on R_0 with respect to (r1, r2, r3).
pub struct R0Coords {
    pub modulus: u32,
    pub basis: [SylowElement; 3],
    to_coord: HashMap<u32, [u32; 3]>,
    from_coord: HashMap<[u32; 3], u32>,
}

impl R0Coords {
    pub fn new(ctx: &Spin7Context, s: &SylowGroup) -> Result<R0Coords, FusionError> {
        let (i, x, y) = (M2::identity(), ctx.x(), ctx.y());
        let basis = [ctx.trp(i, i, x), ctx.trp(x, i, i), ctx.trp(y, y, y)];
        let m = 1u32 << ctx.k();
        let g = s.group();
        let idx: Vec<u32> = basis
            .iter()
            .map(|b| s.index_of(b))
            .collect::<Option<_>>()
            .ok_or(FusionError::Internal("R_0 basis outside S"))?;
        let mut to_coord = HashMap::new();
        let mut from_coord = HashMap::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let e = g.mul(
                        g.mul(g.pow(idx[0], a as u64), g.pow(idx[1], b as u64)),
                        g.pow(idx[2], c as u64),
                    );
                    to_coord.insert(e, [a, b, c]);
                    from_coord.insert([a, b, c], e);
                }
            }
        }
        if to_coord.len() != (m * m * m) as usize
            || BitSet::from_iter(s.order(), to_coord.keys().copied()) != s.named().r0
        {
            return Err(FusionError::Internal("(r1, r2, r3) is not a basis of R_0"));
        }
        Ok(R0Coords {
            modulus: m,
            basis,
            to_coord,
            from_coord,
        })
    }

    pub fn coord(&self, e: u32) -> Option<[u32; 3]> {
        self.to_coord.get(&e).copied()
    }

    pub fn element(&self, c: [u32; 3]) -> u32 {
        self.from_coord[&c.map(|x| x % self.modulus)]
    }

    /// Matrix of a map on R_0 given by the images of the basis.
    pub fn matrix(&self, s: &SylowGroup, images: &[SylowElement; 3]) -> Option<Mat3> {
        let mut r = [0u32; 9];
        for (j, im) in images.iter().enumerate() {
            let c = self.coord(s.index_of(im)?)?;
            for i in 0..3 {
                r[3 * i + j] = c[i];
            }
        }
        Some(Mat3(r))
    }

    /// Matrix of a map on R_0 given on all elements of S.
    pub fn matrix_of(
        &self,
        s: &SylowGroup,
        f: impl Fn(&SylowElement) -> Option<SylowElement>,
    ) -> Option<Mat3> {
        let imgs = [f(&self.basis[0])?, f(&self.basis[1])?, f(&self.basis[2])?];
        self.matrix(s, &imgs)
    }
}

/// Generators of Aut_Spin(R_0): conjugations by elements of H(q^n)⟨τ⟩ normalizing
/// R_0, and realized lifts of the automorphisms of A_1 fixing z.
#[derive(Debug, Clone)]
pub struct SpinAutR0 {
    pub from_h: Vec<SylowElement>,
    /// Clifford coefficient indices of the realized elements.
    pub realized: Vec<Vec<u64>>,
    pub matrices: Vec<Mat3>,
}

/// The 24 automorphisms of A_1 = ⟨z, z_1, Â⟩ fixing z, as images of (z_1, Â).
pub fn a1_automorphisms_fixing_z(ctx: &Spin7Context) -> Vec<[SylowElement; 2]> {
    let (z, z1, ah) = (ctx.z(), ctx.z1(), ctx.a_hat());
    let span = |v: [bool; 3]| {
        let mut e = ctx.identity();
        for (b, g) in v.iter().zip([z, z1, ah]) {
            if *b {
                e = ctx.mul(&e, &g);
            }
        }
        e
    };
    let vecs: Vec<[bool; 3]> = (1..8u8)
        .map(|m| [m & 1 != 0, m & 2 != 0, m & 4 != 0])
        .collect();
    let mut out = Vec::new();
    for a in &vecs {
        for b in &vecs {
            // images of z1 and Â must span a complement of ⟨z⟩ together with z
            let det = {
                let m = [[true, a[0], b[0]], [false, a[1], b[1]], [false, a[2], b[2]]];
                (m[1][1] & m[2][2]) ^ (m[1][2] & m[2][1])
            };
            if det {
                out.push([span(*a), span(*b)]);
            }
        }
    }
    out
}

pub fn spin_aut_r0(
    ctx: &Spin7Context,
    s: &SylowGroup,
    coords: &R0Coords,
    h_tau: &[SylowElement],
) -> Result<SpinAutR0, FusionError> {
    let r0 = &s.named().r0;
    let in_r0 = |e: &SylowElement| s.index_of(e).is_some_and(|i| r0.contains(i));
    let mut seen = HashSet::new();
    let mut from_h = Vec::new();
    let mut matrices = Vec::new();
    for g in h_tau {
        let imgs = coords.basis.map(|b| ctx.conj(g, &b));
        if !imgs.iter().all(in_r0) {
            continue;
        }
        let mat = coords
            .matrix(s, &imgs)
            .ok_or(FusionError::Internal("image outside R_0"))?;
        if seen.insert(mat) {
            from_h.push(*g);
            matrices.push(mat);
        }
    }
    let (z, z1, ah) = (ctx.z(), ctx.z1(), ctx.a_hat());
    let mut realized = Vec::new();
    for [i1, i2] in a1_automorphisms_fixing_z(ctx) {
        let g = realize_isomorphism(ctx, &[z, z1, ah], &[z, i1, i2])?;
        let mut imgs = Vec::new();
        for b in &coords.basis {
            let y = ctx
                .locate(&g.conjugate(&ctx.to_clifford(b)))
                .ok_or(FusionError::Internal("realized element leaves H⟨τ⟩"))?;
            if !in_r0(&y) {
                return Err(FusionError::Internal(
                    "realized element does not normalize R_0",
                ));
            }
            imgs.push(y);
        }
        let mat = coords
            .matrix(s, &[imgs[0], imgs[1], imgs[2]])
            .ok_or(FusionError::Internal("image outside R_0"))?;
        if seen.insert(mat) {
            realized.push(g.element().indices());
            matrices.push(mat);
        }
    }
    Ok(SpinAutR0 {
        from_h,
        realized,
        matrices,
    })
}

/// Outcome for one candidate u.
#[derive(Debug, Clone, Serialize)]
pub struct UnitCandidate {
    pub u: u64,
    pub closure_order: usize,
    pub center_order: usize,
    pub quotient_simple: bool,
    pub accepted: bool,
    /// γ_u on R_0 and its reduction to A_1 (mod 2).
    pub gamma_matrix: Mat3,
    pub gamma_on_a1: Mat3,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitReport {
    pub k: u32,
    pub modulus: u64,
    pub delta1_order: usize,
    pub delta1_generators: usize,
    pub candidates: Vec<UnitCandidate>,
    pub accepted: Vec<u64>,
}

/// Largest closure examined; GL_3(Z/2^k) is finite but large for k ≥ 3.
pub const CLOSURE_LIMIT: usize = 1 << 22;

/// Whether a matrix group has order 336, center {±I} and simple central quotient
/// of order 168.
fn omega_structure(group: &[Mat3], m: u32) -> (usize, bool) {
    let fg = FinGroup::from_elements(group, |a, b| a.mul(b, m));
    let all = fg.all();
    let center = fg.center(&all);
    let (q, _) = fg.quotient(&all, &center);
    let simple = q.order() == 168 && q.is_simple(&q.all());
    (center.len(), simple)
}

/// Tries every u ≡ 1 (mod 4) modulo 2^{k+1}; accepts those for which
/// ⟨Aut_Spin(R_0), γ_u⟩ ≅ C_2 × GL_3(2) with center ⟨g ↦ g⁻¹⟩.
pub fn find_unit(
    ctx: &Spin7Context,
    s: &SylowGroup,
    h_tau: &[SylowElement],
) -> Result<(UnitReport, SpinAutR0), FusionError> {
    let coords = R0Coords::new(ctx, s)?;
    let m = coords.modulus;
    let spin = spin_aut_r0(ctx, s, &coords, h_tau)?;
    let delta1 = mat_closure(&spin.matrices, m, CLOSURE_LIMIT)
        .ok_or(FusionError::Internal("Δ_1 closure too large"))?;
    let modulus = 1u64 << (ctx.k() + 1);
    let minus = Mat3::scalar(m - 1, m);
    let mut candidates = Vec::new();
    for u in (1..modulus).step_by(4) {
        let gd = GammaData::new(ctx, u)?;
        let gm = coords
            .matrix_of(s, |x| gd.gamma_u(ctx, x))
            .ok_or(FusionError::Internal("γ_u does not preserve R_0"))?;
        let mut gens = spin.matrices.clone();
        gens.push(gm);
        let (order, center_order, simple) = match mat_closure(&gens, m, CLOSURE_LIMIT) {
            Some(cl) if cl.len() == 336 => {
                let (c, simple) = omega_structure(&cl, m);
                (cl.len(), c, simple && cl.contains(&minus))
            }
            Some(cl) => (cl.len(), 0, false),
            None => (CLOSURE_LIMIT, 0, false),
        };
        candidates.push(UnitCandidate {
            u,
            closure_order: order,
            center_order,
            quotient_simple: simple,
            accepted: order == 336 && center_order == 2 && simple,
            gamma_matrix: gm,
            gamma_on_a1: gm.reduce(2),
        });
    }
    let accepted: Vec<u64> = candidates
        .iter()
        .filter(|c| c.accepted)
        .map(|c| c.u)
        .collect();
    if accepted.is_empty() {
        return Err(FusionError::NoUnitFound);
    }
    let report = UnitReport {
        k: ctx.k(),
        modulus,
        delta1_order: delta1.len(),
        delta1_generators: spin.matrices.len(),
        candidates,
        accepted,
    };
    Ok((report, spin))
}
