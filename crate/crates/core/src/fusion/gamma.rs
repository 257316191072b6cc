use serde::{Deserialize, Serialize};

use super::FusionError;
use crate::group::Perm;
use crate::linalg::M2;
use crate::spin7::{Spin7Context, SylowElement, SylowGroup};

/// Named automorphisms of S_0(q^n) used as witness steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedAut {
    /// trp[X1, X2, X3] ↦ trp[X3, X1, X2].
    Gamma,
    GammaInv,
    /// trp[X1, X2, A′B^j] ↦ trp[X1, X2, A′^u B^j].
    Delta(u64),
    DeltaInv(u64),
    /// δ_u γ δ_u⁻¹.
    GammaU(u64),
    GammaUInv(u64),
    /// Conjugation by τ: swaps X1 and X2.
    CTau,
}

/// The extra automorphisms γ̂, δ̂_u, γ̂_u, c_τ of S_0(q^n) for a unit u mod 2^{k+1}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GammaData {
    pub u: u64,
    pub modulus: u64,
}

/// Inverse of an odd residue modulo a power of two.
pub fn inverse_mod(u: u64, m: u64) -> u64 {
    (1..m)
        .find(|&v| (u * v) % m == 1)
        .expect("odd residue is invertible")
}

impl GammaData {
    /// Requires u ≡ 1 (mod 4).
    pub fn new(ctx: &Spin7Context, u: u64) -> Result<GammaData, FusionError> {
        let modulus = 1u64 << (ctx.k() + 1);
        let u = u % modulus;
        if u % 4 != 1 {
            return Err(FusionError::BadUnit(u));
        }
        Ok(GammaData { u, modulus })
    }

    pub fn u_inv(&self) -> u64 {
        inverse_mod(self.u, self.modulus)
    }

    /// Writes X3 = A′B^j with A′ commuting with A, then raises A′ to the power e.
    fn twist(ctx: &Spin7Context, x3: &M2, e: u64) -> Option<M2> {
        let f = ctx.f();
        let a = ctx.a();
        let commutes = |m: &M2| m.mul(f, &a) == a.mul(f, m);
        if commutes(x3) {
            return Some(x3.pow(f, e));
        }
        let b = ctx.b();
        let ap = x3.mul(f, &b.inv(f));
        if !commutes(&ap) {
            return None;
        }
        Some(ap.pow(f, e).mul(f, &b))
    }

    pub fn delta_with(ctx: &Spin7Context, x: &SylowElement, e: u64) -> Option<SylowElement> {
        if x.eps != 0 {
            return None;
        }
        let x3 = Self::twist(ctx, &x.x[2], e)?;
        Some(ctx.trp(x.x[0], x.x[1], x3))
    }

    pub fn gamma(ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        (x.eps == 0).then(|| ctx.trp(x.x[2], x.x[0], x.x[1]))
    }

    pub fn gamma_inv(ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        (x.eps == 0).then(|| ctx.trp(x.x[1], x.x[2], x.x[0]))
    }

    pub fn c_tau(ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        (x.eps == 0).then(|| x.swapped().normalized(ctx.f()))
    }

    pub fn gamma_u_with(
        ctx: &Spin7Context,
        x: &SylowElement,
        u: u64,
        modulus: u64,
    ) -> Option<SylowElement> {
        let y = Self::delta_with(ctx, x, inverse_mod(u, modulus))?;
        Self::delta_with(ctx, &Self::gamma(ctx, &y)?, u)
    }

    pub fn gamma_u_inv_with(
        ctx: &Spin7Context,
        x: &SylowElement,
        u: u64,
        modulus: u64,
    ) -> Option<SylowElement> {
        let y = Self::delta_with(ctx, x, inverse_mod(u, modulus))?;
        Self::delta_with(ctx, &Self::gamma_inv(ctx, &y)?, u)
    }

    pub fn delta(&self, ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        Self::delta_with(ctx, x, self.u)
    }

    pub fn gamma_u(&self, ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        Self::gamma_u_with(ctx, x, self.u, self.modulus)
    }

    pub fn gamma_u_inv(&self, ctx: &Spin7Context, x: &SylowElement) -> Option<SylowElement> {
        Self::gamma_u_inv_with(ctx, x, self.u, self.modulus)
    }

    /// Applies a named automorphism; None outside S_0 or for a unit other than u.
    pub fn apply(
        &self,
        ctx: &Spin7Context,
        aut: NamedAut,
        x: &SylowElement,
    ) -> Option<SylowElement> {
        let m = self.modulus;
        match aut {
            NamedAut::Gamma => Self::gamma(ctx, x),
            NamedAut::GammaInv => Self::gamma_inv(ctx, x),
            NamedAut::Delta(u) => (u % m == self.u).then(|| Self::delta_with(ctx, x, u))?,
            NamedAut::DeltaInv(u) => {
                (u % m == self.u).then(|| Self::delta_with(ctx, x, inverse_mod(u, m)))?
            }
            NamedAut::GammaU(u) => (u % m == self.u).then(|| Self::gamma_u_with(ctx, x, u, m))?,
            NamedAut::GammaUInv(u) => {
                (u % m == self.u).then(|| Self::gamma_u_inv_with(ctx, x, u, m))?
            }
            NamedAut::CTau => Self::c_tau(ctx, x),
        }
    }

    /// The permutation of S_0 (as positions in `s0`) induced by a named automorphism,
    /// or None if it does not map S_0 bijectively onto itself.
    pub fn perm_on(
        &self,
        ctx: &Spin7Context,
        s: &SylowGroup,
        s0: &[u32],
        aut: NamedAut,
    ) -> Option<Perm> {
        let pos: std::collections::HashMap<u32, u32> =
            s0.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
        let mut img = Vec::with_capacity(s0.len());
        let mut seen = vec![false; s0.len()];
        for &g in s0 {
            let y = self.apply(ctx, aut, s.element(g))?;
            let p = *pos.get(&s.index_of(&y)?)?;
            if std::mem::replace(&mut seen[p as usize], true) {
                return None;
            }
            img.push(p);
        }
        Some(Perm(img))
    }

    /// Exhaustive check that a named map is an automorphism of S_0.
    pub fn is_automorphism(&self, ctx: &Spin7Context, s: &SylowGroup, aut: NamedAut) -> bool {
        let s0: Vec<u32> = s.named().s0.iter().collect();
        let Some(p) = self.perm_on(ctx, s, &s0, aut) else {
            return false;
        };
        let g = s.group();
        let pos: std::collections::HashMap<u32, usize> =
            s0.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let img = |x: u32| s0[p.apply(pos[&x] as u32) as usize];
        s0.iter().all(|&a| {
            s0.iter()
                .all(|&b| img(g.mul(a, b)) == g.mul(img(a), img(b)))
        })
    }
}
