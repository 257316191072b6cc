use std::sync::Arc;

use super::{CliffError, QuadSpace};
use crate::gf::FieldElement;

type Fe = FieldElement;

/// An element of the Clifford algebra C(V, b), as coefficients over the monomials
/// e_S = e_{s_1}⋯e_{s_k} (s_1 < ⋯ < s_k) in the orthogonal basis of V; the subset S is
/// the bit mask index.
#[derive(Clone, Debug)]
pub struct CliffordElement {
    space: Arc<QuadSpace>,
    coeffs: Vec<Fe>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && self.coeffs == other.coeffs
    }
}
impl Eq for CliffordElement {}

impl CliffordElement {
    pub fn zero(space: &Arc<QuadSpace>) -> Self {
        CliffordElement {
            space: space.clone(),
            coeffs: vec![Fe::ZERO; 1 << space.dim()],
        }
    }

    pub fn scalar(space: &Arc<QuadSpace>, c: Fe) -> Self {
        let mut e = Self::zero(space);
        e.coeffs[0] = c;
        e
    }

    pub fn one(space: &Arc<QuadSpace>) -> Self {
        Self::scalar(space, Fe::ONE)
    }

    /// The basis monomial e_S.
    pub fn monomial(space: &Arc<QuadSpace>, mask: usize) -> Self {
        let mut e = Self::zero(space);
        e.coeffs[mask] = Fe::ONE;
        e
    }

    pub fn from_coeffs(space: &Arc<QuadSpace>, coeffs: Vec<Fe>) -> Result<Self, CliffError> {
        if coeffs.len() != 1 << space.dim() {
            return Err(CliffError::Dimension(coeffs.len()));
        }
        Ok(CliffordElement {
            space: space.clone(),
            coeffs,
        })
    }

    /// A vector of V given in standard coordinates.
    pub fn vector(space: &Arc<QuadSpace>, v: &[Fe]) -> Self {
        let c = space.to_orthogonal(v);
        let mut e = Self::zero(space);
        for (i, x) in c.into_iter().enumerate() {
            e.coeffs[1 << i] = x;
        }
        e
    }

    pub fn space(&self) -> &Arc<QuadSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// If the element lies in V, its standard coordinates.
    pub fn as_vector(&self) -> Option<Vec<Fe>> {
        let n = self.space.dim();
        let mut c = vec![Fe::ZERO; n];
        for (mask, &x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if mask.count_ones() != 1 {
                return None;
            }
            c[mask.trailing_zeros() as usize] = x;
        }
        Some(self.space.from_orthogonal(&c))
    }

    /// Some(0) if even, Some(1) if odd, None if mixed. Zero counts as even.
    pub fn parity(&self) -> Option<u32> {
        let mut seen = None;
        for (mask, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                let p = mask.count_ones() % 2;
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CliffError> {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(CliffError::SpaceMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &**self.space.field();
        let mut out = vec![Fe::ZERO; self.coeffs.len()];
        let rhs: Vec<(usize, Fe)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect();
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(t, b) in &rhs {
                let c = f.mul(f.mul(a, b), self.space.mono(s, t));
                out[s ^ t] = f.add(out[s ^ t], c);
            }
        }
        CliffordElement {
            space: self.space.clone(),
            coeffs: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &**self.space.field();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        CliffordElement {
            space: self.space.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = &**self.space.field();
        CliffordElement {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = &**self.space.field();
        CliffordElement {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    /// The reversal J: e_{s_1}⋯e_{s_k} ↦ e_{s_k}⋯e_{s_1} = (−1)^{k(k−1)/2} e_S.
    pub fn reversal(&self) -> Self {
        let f = &**self.space.field();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                let k = mask.count_ones();
                if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                    f.neg(c)
                } else {
                    c
                }
            })
            .collect();
        CliffordElement {
            space: self.space.clone(),
            coeffs,
        }
    }

    /// The scalar u·J(u) when it is a scalar (true on the Clifford group).
    pub fn norm_scalar(&self) -> Option<Fe> {
        let n = self.mul_unchecked(&self.reversal());
        if n.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(n.coeffs[0])
        } else {
            None
        }
    }

    /// Inverse of a versor, J(u)/(u·J(u)).
    pub fn versor_inverse(&self) -> Option<Self> {
        let n = self.norm_scalar()?;
        if n.is_zero() {
            return None;
        }
        Some(self.reversal().scale(self.space.field().inv(n)))
    }

    /// Coefficient-lexicographic comparison by element index.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }

    pub fn indices(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    /// Copy into a larger algebra whose orthogonal basis contains this one's as the
    /// block starting at `offset`.
    pub fn embed(&self, target: &Arc<QuadSpace>, offset: usize) -> Self {
        let mut out = Self::zero(target);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs[mask << offset] = c;
            }
        }
        out
    }
}
