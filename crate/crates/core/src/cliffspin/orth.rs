use std::sync::Arc;

use super::{CliffError, CliffordElement, QuadSpace};
use crate::gf::FieldElement;
use crate::linalg::Mat;

type Fe = FieldElement;

/// An isometry of a quadratic space, in standard coordinates (columns are images of
/// the standard basis vectors).
#[derive(Clone, Debug)]
pub struct OrthMatrix {
    space: Arc<QuadSpace>,
    mat: Mat,
}

impl PartialEq for OrthMatrix {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && self.mat == other.mat
    }
}
impl Eq for OrthMatrix {}

impl OrthMatrix {
    pub fn new(space: &Arc<QuadSpace>, mat: Mat) -> Result<Self, CliffError> {
        if mat.rows != space.dim() || mat.cols != space.dim() || !space.preserves_form(&mat) {
            return Err(CliffError::NotOrthogonal);
        }
        Ok(OrthMatrix {
            space: space.clone(),
            mat,
        })
    }

    pub(crate) fn new_unchecked(space: &Arc<QuadSpace>, mat: Mat) -> Self {
        OrthMatrix {
            space: space.clone(),
            mat,
        }
    }

    pub fn identity(space: &Arc<QuadSpace>) -> Self {
        OrthMatrix {
            space: space.clone(),
            mat: Mat::identity(space.dim()),
        }
    }

    pub fn reflection(space: &Arc<QuadSpace>, v: &[Fe]) -> Self {
        OrthMatrix {
            space: space.clone(),
            mat: space.reflection(v),
        }
    }

    pub fn space(&self) -> &Arc<QuadSpace> {
        &self.space
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn compose(&self, other: &OrthMatrix) -> OrthMatrix {
        OrthMatrix {
            space: self.space.clone(),
            mat: self.mat.mul(self.space.field(), &other.mat),
        }
    }

    pub fn inverse(&self) -> OrthMatrix {
        // g^{-1} = G^{-1} g^T G for an isometry.
        let f = &**self.space.field();
        let g = self.space.gram();
        let ginv = g.inverse(f).expect("nonsingular form");
        OrthMatrix {
            space: self.space.clone(),
            mat: ginv.mul(f, &self.mat.transpose()).mul(f, g),
        }
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        self.mat.mul_vec(self.space.field(), v)
    }

    pub fn det(&self) -> Fe {
        self.mat.det(self.space.field())
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// Factors g as R_{v_1} ∘ ⋯ ∘ R_{v_k} with k ≤ 2·dim.
    ///
    /// Walks the orthogonal basis e_1, …, e_n. If the current map h moves e_i, the
    /// reflection in h(e_i) − e_i (when anisotropic) or the pair R_{e_i} R_{h(e_i)+e_i}
    /// makes the new map fix e_i; it then preserves the span of the remaining basis
    /// vectors.
    pub fn reflect_factor(&self) -> Vec<Vec<Fe>> {
        let space = &self.space;
        let f = &**space.field();
        let n = space.dim();
        let mut h = self.mat.clone();
        let mut out = Vec::new();
        for i in 0..n {
            let e = space.orthogonal_basis().col(i);
            let he = h.mul_vec(f, &e);
            if he == e {
                continue;
            }
            let diff: Vec<Fe> = he.iter().zip(&e).map(|(&a, &b)| f.sub(a, b)).collect();
            if !space.norm(&diff).is_zero() {
                h = space.reflection(&diff).mul(f, &h);
                out.push(diff);
            } else {
                let sum: Vec<Fe> = he.iter().zip(&e).map(|(&a, &b)| f.add(a, b)).collect();
                h = space.reflection(&sum).mul(f, &h);
                h = space.reflection(&e).mul(f, &h);
                out.push(sum);
                out.push(e);
            }
        }
        debug_assert!(h.is_identity());
        out
    }

    /// Class of the product of b(v_i) over a reflection factorization, for any isometry.
    pub fn spinor_class(&self) -> bool {
        let f = &**self.space.field();
        let prod = self
            .reflect_factor()
            .iter()
            .fold(Fe::ONE, |acc, v| f.mul(acc, self.space.norm(v)));
        f.is_square(prod, self.space.level())
    }

    /// The spinor norm of g ∈ SO as a square class (true = square).
    pub fn spinor_norm(&self) -> Result<bool, CliffError> {
        if self.det() != Fe::ONE {
            return Err(CliffError::NotSpecialOrthogonal);
        }
        Ok(self.spinor_class())
    }

    pub fn in_omega(&self) -> bool {
        self.det() == Fe::ONE && self.spinor_class()
    }

    /// One of the two lifts ±u ∈ Spin(V) with π(u) = g: the coefficient-lexicographically
    /// least.
    pub fn lift_to_spin(&self) -> Result<SpinGroupElement, CliffError> {
        if !self.in_omega() {
            return Err(CliffError::NotInOmega);
        }
        let space = &self.space;
        let f = &**space.field();
        let vs = self.reflect_factor();
        let mut u = CliffordElement::one(space);
        let mut s = Fe::ONE;
        for v in &vs {
            u = u.mul_unchecked(&CliffordElement::vector(space, v));
            s = f.mul(s, space.norm(v));
        }
        let r = f
            .sqrt(s, space.level())
            .map_err(|_| CliffError::NotInOmega)?;
        let u = u.scale(f.inv(r));
        let nu = u.neg();
        let u = if nu.lex_cmp(&u).is_lt() { nu } else { u };
        Ok(SpinGroupElement {
            u,
            pi: self.clone(),
        })
    }
}

/// An element of Spin(V, b) with its image in Ω(V, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinGroupElement {
    u: CliffordElement,
    pi: OrthMatrix,
}

impl SpinGroupElement {
    /// Validates u ∈ Spin: even, J(u)u = 1, and uVu⁻¹ = V.
    pub fn new(u: CliffordElement) -> Result<Self, CliffError> {
        if u.parity() != Some(0) {
            return Err(CliffError::NotSpin);
        }
        if u.reversal().mul_unchecked(&u) != CliffordElement::one(u.space()) {
            return Err(CliffError::NotSpin);
        }
        let pi = pi_action(&u).ok_or(CliffError::NotSpin)?;
        Ok(SpinGroupElement { u, pi })
    }

    pub fn one(space: &Arc<QuadSpace>) -> Self {
        SpinGroupElement {
            u: CliffordElement::one(space),
            pi: OrthMatrix::identity(space),
        }
    }

    pub fn element(&self) -> &CliffordElement {
        &self.u
    }

    pub fn pi(&self) -> &OrthMatrix {
        &self.pi
    }

    pub fn mul(&self, other: &Self) -> Self {
        SpinGroupElement {
            u: self.u.mul_unchecked(&other.u),
            pi: self.pi.compose(&other.pi),
        }
    }

    pub fn inverse(&self) -> Self {
        SpinGroupElement {
            u: self.u.reversal(),
            pi: self.pi.inverse(),
        }
    }

    pub fn neg(&self) -> Self {
        SpinGroupElement {
            u: self.u.neg(),
            pi: self.pi.clone(),
        }
    }

    /// g x g⁻¹ in the Clifford algebra.
    pub fn conjugate(&self, x: &CliffordElement) -> CliffordElement {
        self.u.mul_unchecked(x).mul_unchecked(&self.u.reversal())
    }
}

/// The twisted adjoint action v ↦ (−1)^{|u|} u v u⁻¹ of a homogeneous versor u;
/// None if u is not homogeneous, not invertible, or does not normalize V.
pub fn pi_action(u: &CliffordElement) -> Option<OrthMatrix> {
    let space = u.space();
    let n = space.dim();
    let parity = u.parity()?;
    let uinv = u.versor_inverse()?;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Fe::ZERO; n];
        e[j] = Fe::ONE;
        let v = CliffordElement::vector(space, &e);
        let mut w = u.mul_unchecked(&v).mul_unchecked(&uinv);
        if parity == 1 {
            w = w.neg();
        }
        cols.push(w.as_vector()?);
    }
    Some(OrthMatrix::new_unchecked(space, Mat::from_cols(&cols)))
}
