//! Realizing isomorphisms between elementary abelian subgroups containing z by
//! conjugation in Spin_7(q^n).
//!
//! An isomorphism α: E → E′ fixing z is realized by an isometry carrying each
//! eigenspace V_χ(E) onto V_{χ∘α⁻¹}(E′). Eigenspaces of equal dimension and
//! discriminant class are matched through orthogonal bases normalized to values
//! (1, …, 1, δ). Determinant and spinor norm are corrected by reflections inside
//! target eigenspaces, and a remaining sign discrepancy e ↦ e·z on a character χ is
//! removed by the lift of −Id on a plane W ⊕ W′ with W ⊂ V_ψ and W′ ⊂ V_{ψχ}.

use super::{eigenspaces, Eigenspace, Spin7Context, Spin7Error, SylowElement};
use crate::cliffspin::{OrthMatrix, SpinGroupElement};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Mat;

type Fe = FieldElement;

fn axpy(f: &FieldSpec, a: Fe, x: &[Fe], b: Fe, y: &[Fe]) -> Vec<Fe> {
    x.iter()
        .zip(y)
        .map(|(&u, &v)| f.add(f.mul(a, u), f.mul(b, v)))
        .collect()
}

/// An orthogonal basis of span(`basis`) ⊂ V with values (1, …, 1, δ), δ = 1 when the
/// discriminant is a square and the least nonsquare otherwise.
pub fn canonical_basis(
    ctx: &Spin7Context,
    basis: &[Vec<Fe>],
) -> Result<Vec<(Vec<Fe>, Fe)>, Spin7Error> {
    let f = ctx.f();
    let v7 = ctx.v7();
    let level = ctx.level();
    // Gram–Schmidt.
    let mut rest: Vec<Vec<Fe>> = basis.to_vec();
    let mut orth: Vec<(Vec<Fe>, Fe)> = Vec::new();
    while !rest.is_empty() {
        let pos = match rest.iter().position(|w| !v7.norm(w).is_zero()) {
            Some(p) => p,
            None => {
                let (i, j) = (0..rest.len())
                    .flat_map(|i| (0..rest.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !v7.bilinear(&rest[i], &rest[j]).is_zero())
                    .ok_or(Spin7Error::IsometrySearchFailed)?;
                rest[i] = axpy(f, Fe::ONE, &rest[i], Fe::ONE, &rest[j]);
                i
            }
        };
        let e = rest.remove(pos);
        let d = v7.norm(&e);
        for w in rest.iter_mut() {
            let c = f.div(v7.bilinear(w, &e), d);
            *w = axpy(f, Fe::ONE, w, f.neg(c), &e);
        }
        orth.push((e, d));
    }
    // Pairwise (a, b) → (1, ab).
    for i in 0..orth.len().saturating_sub(1) {
        let (a, b) = (orth[i].1, orth[i + 1].1);
        let (x, y) = solve_conic(f, level, a, b, Fe::ONE)?;
        let (ei, ej) = (orth[i].0.clone(), orth[i + 1].0.clone());
        let v = axpy(f, x, &ei, y, &ej);
        let w = axpy(f, f.neg(f.mul(b, y)), &ei, f.mul(a, x), &ej);
        orth[i] = (v, Fe::ONE);
        orth[i + 1] = (w, f.mul(a, b));
    }
    if let Some(last) = orth.last_mut() {
        let d = last.1;
        let delta = if f.is_square(d, level) {
            Fe::ONE
        } else {
            f.nonsquare(level)
        };
        let s = f.sqrt(f.div(d, delta), level)?;
        last.0 = last.0.iter().map(|&c| f.div(c, s)).collect();
        last.1 = delta;
    }
    Ok(orth)
}

/// Least x (then y) with a x² + b y² = c.
fn solve_conic(f: &FieldSpec, level: usize, a: Fe, b: Fe, c: Fe) -> Result<(Fe, Fe), Spin7Error> {
    for x in f.elements(level) {
        let t = f.div(f.sub(c, f.mul(a, f.mul(x, x))), b);
        if f.is_square(t, level) {
            return Ok((x, f.sqrt(t, level)?));
        }
    }
    Err(Spin7Error::IsometrySearchFailed)
}

struct Decomp {
    spaces: Vec<Eigenspace>,
    canon: Vec<Vec<(Vec<Fe>, Fe)>>,
}

fn decompose(ctx: &Spin7Context, gens: &[SylowElement]) -> Result<Decomp, Spin7Error> {
    let spaces = eigenspaces(ctx, gens);
    let canon = spaces
        .iter()
        .map(|s| canonical_basis(ctx, &s.basis))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Decomp { spaces, canon })
}

/// Anisotropic vectors of an eigenspace used in corrections: the normalized basis and,
/// in dimension ≥ 2, one vector of nonsquare value.
fn correction_vectors(
    ctx: &Spin7Context,
    canon: &[(Vec<Fe>, Fe)],
) -> Result<Vec<(Vec<Fe>, Fe)>, Spin7Error> {
    let f = ctx.f();
    let mut out = canon.to_vec();
    if canon.len() >= 2 {
        let ns = f.nonsquare(ctx.level());
        let (e1, d1) = &canon[0];
        let (e2, d2) = &canon[1];
        let (x, y) = solve_conic(f, ctx.level(), *d1, *d2, ns)?;
        out.push((axpy(f, x, e1, y, e2), ns));
    }
    Ok(out)
}

/// An element g ∈ Spin_7(q^n) with g·src[i]·g⁻¹ = dst[i] for all i.
///
/// `src` and `dst` are bases of elementary abelian subgroups with src[0] = dst[0] = z.
pub fn realize_isomorphism(
    ctx: &Spin7Context,
    src: &[SylowElement],
    dst: &[SylowElement],
) -> Result<SpinGroupElement, Spin7Error> {
    let f = ctx.f();
    let v7 = ctx.v7();
    let z = ctx.z();
    if src.len() != dst.len() || src.first() != Some(&z) || dst.first() != Some(&z) {
        return Err(Spin7Error::NotRealizable("bases must start with z".into()));
    }
    let ds = decompose(ctx, &src[1..])?;
    let dd = decompose(ctx, &dst[1..])?;

    let mut cols_src = Vec::new();
    let mut cols_dst = Vec::new();
    for (s, cs) in ds.spaces.iter().zip(&ds.canon) {
        let j = dd
            .spaces
            .iter()
            .position(|t| t.character == s.character)
            .ok_or_else(|| {
                Spin7Error::NotRealizable(format!("no eigenspace for character {}", s.character))
            })?;
        let (t, ct) = (&dd.spaces[j], &dd.canon[j]);
        if t.dim != s.dim || t.disc_square != s.disc_square {
            return Err(Spin7Error::NotRealizable(format!(
                "eigenspace {} differs",
                s.character
            )));
        }
        for ((a, _), (b, _)) in cs.iter().zip(ct) {
            cols_src.push(a.clone());
            cols_dst.push(b.clone());
        }
    }
    if cols_src.len() != 7 {
        return Err(Spin7Error::NotRealizable("eigenspaces do not match".into()));
    }
    let bs = Mat::from_cols(&cols_src);
    let bd = Mat::from_cols(&cols_dst);
    let gbar = bd.mul(f, &bs.inverse(f).ok_or(Spin7Error::IsometrySearchFailed)?);
    let gbar = OrthMatrix::new(v7, gbar)?;

    // Reflections inside target eigenspaces commute with the target group.
    let mut cands: Vec<Vec<Fe>> = Vec::new();
    for c in &dd.canon {
        cands.extend(correction_vectors(ctx, c)?.into_iter().map(|(v, _)| v));
    }
    let mut fixes: Vec<Vec<usize>> = vec![vec![]];
    fixes.extend((0..cands.len()).map(|i| vec![i]));
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            fixes.push(vec![i, j]);
        }
    }
    let gfix = fixes
        .iter()
        .map(|fx| {
            fx.iter().fold(gbar.clone(), |acc, &i| {
                OrthMatrix::reflection(v7, &cands[i]).compose(&acc)
            })
        })
        .find(|g| g.in_omega())
        .ok_or_else(|| Spin7Error::NotRealizable("no determinant/spinor-norm correction".into()))?;
    let g = gfix.lift_to_spin()?;

    // Sign discrepancies: bit i − 1 set iff g src[i] g⁻¹ = dst[i]·z.
    let mut chi = 0u32;
    for i in 1..src.len() {
        let img = g.conjugate(&ctx.to_clifford(&src[i]));
        let want = ctx.to_clifford(&dst[i]);
        if img == want {
            continue;
        }
        if img.neg() == want {
            chi |= 1 << (i - 1);
        } else {
            return Err(Spin7Error::IsometrySearchFailed);
        }
    }
    if chi == 0 {
        return Ok(g);
    }
    let level = ctx.level();
    for (a, sa) in dd.spaces.iter().enumerate() {
        let Some(b) = dd
            .spaces
            .iter()
            .position(|t| t.character == sa.character ^ chi)
        else {
            continue;
        };
        let va = correction_vectors(ctx, &dd.canon[a])?;
        let vb = correction_vectors(ctx, &dd.canon[b])?;
        for (w, x) in &va {
            for (w2, y) in &vb {
                if !f.is_square(f.mul(*x, *y), level) {
                    continue;
                }
                let h = OrthMatrix::reflection(v7, w).compose(&OrthMatrix::reflection(v7, w2));
                let hg = h.lift_to_spin()?.mul(&g);
                let ok = src
                    .iter()
                    .zip(dst)
                    .all(|(s, d)| hg.conjugate(&ctx.to_clifford(s)) == ctx.to_clifford(d));
                if ok {
                    return Ok(hg);
                }
            }
        }
    }
    Err(Spin7Error::NotRealizable(
        "sign discrepancy cannot be removed".into(),
    ))
}
