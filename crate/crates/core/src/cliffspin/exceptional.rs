//! The isomorphisms SL_2 → Spin_3 and SL_2 × SL_2 → Spin_4^+ on the spaces
//! (M_2^0, det) and (M_2, det).
//!
//! The lifts come from the algebra map f: M_2 → M_4, f(X) = [[0, X], [adj X, 0]].
//! Since f(X)² = det(X)·I it extends to C(M_2, det), and on the even part it is an
//! isomorphism onto block-diagonal matrices diag(P, Q) with the conjugation action
//! X ↦ P X Q⁻¹. Inverting this linear map gives the lifts; being algebra maps they
//! are homomorphisms with no sign choices.

use std::sync::Arc;

use super::{
    det_gram_m2, det_gram_m20, CliffError, CliffordElement, OrthMatrix, QuadSpace, SpinGroupElement,
};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{Mat, M2};

type Fe = FieldElement;

/// Coordinates (a, b, c, d) of a 2×2 matrix.
pub fn m2_coords(x: &M2) -> Vec<Fe> {
    x.0.to_vec()
}

pub fn m2_from_coords(v: &[Fe]) -> M2 {
    M2([v[0], v[1], v[2], v[3]])
}

/// Coordinates (e, f, g) of a trace-zero matrix [[e, f], [g, −e]].
pub fn m20_coords(x: &M2) -> Vec<Fe> {
    vec![x.0[0], x.0[1], x.0[2]]
}

pub fn m20_from_coords(f: &FieldSpec, v: &[Fe]) -> M2 {
    M2([v[0], v[1], v[2], f.neg(v[0])])
}

fn block4(f: &FieldSpec, x: &M2) -> Mat {
    let a = x.adj(f);
    let mut m = Mat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(i, 2 + j, x.0[2 * i + j]);
            m.set(2 + i, j, a.0[2 * i + j]);
        }
    }
    m
}

fn even_masks(n: usize) -> Vec<usize> {
    (0..1usize << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .collect()
}

/// The spaces V_3 = (M_2^0, det), V_4 = (M_2, det) and the lift maps.
#[derive(Debug)]
pub struct ExceptionalIsos {
    field: Arc<FieldSpec>,
    v3: Arc<QuadSpace>,
    v4: Arc<QuadSpace>,
    lift3: Mat,
    lift4: Mat,
}

impl ExceptionalIsos {
    pub fn new(field: Arc<FieldSpec>, level: usize) -> Result<Self, CliffError> {
        let f = &*field;
        let v3 = QuadSpace::new(field.clone(), level, det_gram_m20(f))?;
        let v4 = QuadSpace::new(field.clone(), level, det_gram_m2(f))?;

        let products = |space: &QuadSpace, as_matrix: &dyn Fn(&[Fe]) -> M2| -> Vec<Mat> {
            let n = space.dim();
            let gens: Vec<Mat> = (0..n)
                .map(|i| block4(f, &as_matrix(&space.orthogonal_basis().col(i))))
                .collect();
            even_masks(n)
                .into_iter()
                .map(|mask| {
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .fold(Mat::identity(4), |acc, i| acc.mul(f, &gens[i]))
                })
                .collect()
        };

        let p4 = products(&v4, &|v| m2_from_coords(v));
        let cols4: Vec<Vec<Fe>> = p4
            .iter()
            .map(|m| {
                let mut c = Vec::with_capacity(8);
                for (r0, c0) in [(0, 0), (2, 2)] {
                    for i in 0..2 {
                        for j in 0..2 {
                            c.push(m.get(r0 + i, c0 + j));
                        }
                    }
                }
                c
            })
            .collect();
        let lift4 = Mat::from_cols(&cols4)
            .inverse(f)
            .ok_or(CliffError::Singular)?;

        let p3 = products(&v3, &|v| m20_from_coords(f, v));
        let cols3: Vec<Vec<Fe>> = p3
            .iter()
            .map(|m| vec![m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)])
            .collect();
        let lift3 = Mat::from_cols(&cols3)
            .inverse(f)
            .ok_or(CliffError::Singular)?;

        Ok(ExceptionalIsos {
            field,
            v3,
            v4,
            lift3,
            lift4,
        })
    }

    pub fn v3(&self) -> &Arc<QuadSpace> {
        &self.v3
    }
    pub fn v4(&self) -> &Arc<QuadSpace> {
        &self.v4
    }

    fn check_det(&self, a: &M2) -> Result<(), CliffError> {
        if a.det(&self.field) != Fe::ONE {
            Err(CliffError::NotDetOne)
        } else {
            Ok(())
        }
    }

    /// X ↦ A X A⁻¹ on M_2^0.
    pub fn rho3(&self, a: &M2) -> Result<OrthMatrix, CliffError> {
        self.check_det(a)?;
        let f = &*self.field;
        let ainv = a.inv(f);
        let cols: Vec<Vec<Fe>> = (0..3)
            .map(|k| {
                let mut e = vec![Fe::ZERO; 3];
                e[k] = Fe::ONE;
                let x = m20_from_coords(f, &e);
                m20_coords(&a.mul(f, &x).mul(f, &ainv))
            })
            .collect();
        Ok(OrthMatrix::new_unchecked(&self.v3, Mat::from_cols(&cols)))
    }

    /// X ↦ A X B⁻¹ on M_2.
    pub fn rho4(&self, a: &M2, b: &M2) -> Result<OrthMatrix, CliffError> {
        self.check_det(a)?;
        self.check_det(b)?;
        let f = &*self.field;
        let binv = b.inv(f);
        let cols: Vec<Vec<Fe>> = (0..4)
            .map(|k| {
                let mut e = vec![Fe::ZERO; 4];
                e[k] = Fe::ONE;
                m2_coords(&a.mul(f, &m2_from_coords(&e)).mul(f, &binv))
            })
            .collect();
        Ok(OrthMatrix::new_unchecked(&self.v4, Mat::from_cols(&cols)))
    }

    /// Even Clifford element of C(V_3) corresponding to A (no det check).
    pub fn lift3_element(&self, a: &M2) -> CliffordElement {
        let c = self.lift3.mul_vec(&self.field, &a.0);
        let mut out = CliffordElement::zero(&self.v3);
        let mut coeffs = out.coeffs().to_vec();
        for (mask, x) in even_masks(3).into_iter().zip(c) {
            coeffs[mask] = x;
        }
        out = CliffordElement::from_coeffs(&self.v3, coeffs).expect("length");
        out
    }

    /// Even Clifford element of C(V_4) corresponding to (A, B) (no det check).
    pub fn lift4_element(&self, a: &M2, b: &M2) -> CliffordElement {
        let mut target = a.0.to_vec();
        target.extend_from_slice(&b.0);
        let c = self.lift4.mul_vec(&self.field, &target);
        let mut coeffs = vec![Fe::ZERO; 16];
        for (mask, x) in even_masks(4).into_iter().zip(c) {
            coeffs[mask] = x;
        }
        CliffordElement::from_coeffs(&self.v4, coeffs).expect("length")
    }

    pub fn rho3_tilde(&self, a: &M2) -> Result<SpinGroupElement, CliffError> {
        self.check_det(a)?;
        SpinGroupElement::new(self.lift3_element(a))
    }

    pub fn rho4_tilde(&self, a: &M2, b: &M2) -> Result<SpinGroupElement, CliffError> {
        self.check_det(a)?;
        self.check_det(b)?;
        SpinGroupElement::new(self.lift4_element(a, b))
    }
}
