use std::sync::Arc;

use super::CliffError;
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Mat;

type Fe = FieldElement;

/// A nondegenerate quadratic space (F^n, b) with b(v) = B(v, v) and B given by its
/// Gram matrix in standard coordinates.
#[derive(Debug)]
pub struct QuadSpace {
    field: Arc<FieldSpec>,
    level: usize,
    gram: Mat,
    /// Columns are the orthogonal basis vectors in standard coordinates.
    basis: Mat,
    basis_inv: Mat,
    diag: Vec<Fe>,
    /// `mono[s * 2^n + t]` is the scalar c with e_s·e_t = c·e_{s^t}.
    mono: Vec<Fe>,
}

impl QuadSpace {
    /// Builds the space and its orthogonal basis. The basis is produced by
    /// Gram–Schmidt over the standard basis, always taking the first remaining
    /// vector of nonzero norm; when every remaining vector is isotropic the first
    /// pair (i, j) with B(v_i, v_j) ≠ 0 is merged into v_i + v_j.
    pub fn new(
        field: Arc<FieldSpec>,
        level: usize,
        gram: Mat,
    ) -> Result<Arc<QuadSpace>, CliffError> {
        let n = gram.rows;
        if n == 0 || n > 8 || gram.cols != n {
            return Err(CliffError::Dimension(n));
        }
        for i in 0..n {
            for j in 0..n {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(CliffError::NotSymmetric);
                }
            }
        }
        if gram.det(&field).is_zero() {
            return Err(CliffError::Singular);
        }
        let f = &*field;
        let bil = |u: &[Fe], v: &[Fe]| -> Fe {
            let gv = gram.mul_vec(f, v);
            u.iter()
                .zip(&gv)
                .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        };
        let mut remaining: Vec<Vec<Fe>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Fe::ONE } else { Fe::ZERO })
                    .collect()
            })
            .collect();
        let mut basis = Vec::new();
        let mut diag = Vec::new();
        while !remaining.is_empty() {
            let idx = match remaining.iter().position(|v| !bil(v, v).is_zero()) {
                Some(i) => i,
                None => {
                    let (i, j) = (0..remaining.len())
                        .flat_map(|i| (i + 1..remaining.len()).map(move |j| (i, j)))
                        .find(|&(i, j)| !bil(&remaining[i], &remaining[j]).is_zero())
                        .ok_or(CliffError::Singular)?;
                    let sum: Vec<Fe> = remaining[i]
                        .iter()
                        .zip(&remaining[j])
                        .map(|(&a, &b)| f.add(a, b))
                        .collect();
                    remaining[i] = sum;
                    i
                }
            };
            let pivot = remaining.remove(idx);
            let d = bil(&pivot, &pivot);
            let dinv = f.inv(d);
            for v in remaining.iter_mut() {
                let c = f.mul(bil(v, &pivot), dinv);
                if !c.is_zero() {
                    for (x, &p) in v.iter_mut().zip(&pivot) {
                        *x = f.sub(*x, f.mul(c, p));
                    }
                }
            }
            basis.push(pivot);
            diag.push(d);
        }
        let basis = Mat::from_cols(&basis);
        Ok(Arc::new(Self::assemble(field, level, gram, basis, diag)))
    }

    fn assemble(
        field: Arc<FieldSpec>,
        level: usize,
        gram: Mat,
        basis: Mat,
        diag: Vec<Fe>,
    ) -> QuadSpace {
        let n = diag.len();
        let basis_inv = basis
            .inverse(&field)
            .expect("orthogonal basis is invertible");
        let size = 1usize << n;
        let mut mono = vec![Fe::ZERO; size * size];
        for s in 0..size {
            for t in 0..size {
                // Moving each e_j (j in t) left past the elements of s with larger index.
                let mut swaps = 0;
                for j in 0..n {
                    if t >> j & 1 == 1 {
                        swaps += (s >> (j + 1)).count_ones();
                    }
                }
                let mut c = Fe::ONE;
                for k in 0..n {
                    if (s & t) >> k & 1 == 1 {
                        c = field.mul(c, diag[k]);
                    }
                }
                if swaps % 2 == 1 {
                    c = field.neg(c);
                }
                mono[s * size + t] = c;
            }
        }
        QuadSpace {
            field,
            level,
            gram,
            basis,
            basis_inv,
            diag,
            mono,
        }
    }

    /// Orthogonal direct sum; the orthogonal basis is the concatenation of the two.
    pub fn direct_sum(a: &QuadSpace, b: &QuadSpace) -> Arc<QuadSpace> {
        assert!(Arc::ptr_eq(&a.field, &b.field));
        assert_eq!(a.level, b.level);
        let (na, nb) = (a.dim(), b.dim());
        let n = na + nb;
        let mut gram = Mat::zeros(n, n);
        let mut basis = Mat::zeros(n, n);
        for i in 0..na {
            for j in 0..na {
                gram.set(i, j, a.gram.get(i, j));
                basis.set(i, j, a.basis.get(i, j));
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                gram.set(na + i, na + j, b.gram.get(i, j));
                basis.set(na + i, na + j, b.basis.get(i, j));
            }
        }
        let mut diag = a.diag.clone();
        diag.extend_from_slice(&b.diag);
        Arc::new(Self::assemble(a.field.clone(), a.level, gram, basis, diag))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub fn level(&self) -> usize {
        self.level
    }
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
    pub fn gram(&self) -> &Mat {
        &self.gram
    }
    pub fn orthogonal_basis(&self) -> &Mat {
        &self.basis
    }
    pub fn diag(&self) -> &[Fe] {
        &self.diag
    }

    #[inline]
    pub(crate) fn mono(&self, s: usize, t: usize) -> Fe {
        self.mono[(s << self.dim()) | t]
    }

    pub fn bilinear(&self, u: &[Fe], v: &[Fe]) -> Fe {
        let f = &*self.field;
        let gv = self.gram.mul_vec(f, v);
        u.iter()
            .zip(&gv)
            .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub fn norm(&self, v: &[Fe]) -> Fe {
        self.bilinear(v, v)
    }

    /// Standard coordinates → coordinates in the orthogonal basis.
    pub fn to_orthogonal(&self, v: &[Fe]) -> Vec<Fe> {
        self.basis_inv.mul_vec(&self.field, v)
    }

    pub fn from_orthogonal(&self, c: &[Fe]) -> Vec<Fe> {
        self.basis.mul_vec(&self.field, c)
    }

    /// Determinant of the Gram matrix.
    pub fn discriminant(&self) -> Fe {
        self.gram.det(&self.field)
    }

    pub fn discriminant_is_square(&self) -> bool {
        self.field.is_square(self.discriminant(), self.level)
    }

    /// The reflection v ↦ v − 2B(v,a)/b(a)·a as a matrix in standard coordinates.
    pub fn reflection(&self, a: &[Fe]) -> Mat {
        let f = &*self.field;
        let n = self.dim();
        let ba = self.norm(a);
        assert!(!ba.is_zero(), "reflection in an isotropic vector");
        let two_over = f.div(f.from_int(2), ba);
        let ga = self.gram.mul_vec(f, a);
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                // column j is the image of e_j; B(e_j, a) = (G a)_j
                let c = f.mul(f.mul(two_over, ga[j]), a[i]);
                m.set(i, j, f.sub(m.get(i, j), c));
            }
        }
        m
    }

    /// M^T G M = G.
    pub fn preserves_form(&self, m: &Mat) -> bool {
        let f = &*self.field;
        m.transpose().mul(f, &self.gram).mul(f, m) == self.gram
    }
}

/// Gram matrix of det on M_2 in coordinates (a, b, c, d) for [[a, b], [c, d]].
pub fn det_gram_m2(f: &FieldSpec) -> Mat {
    let h = f.inv(f.from_int(2));
    let mh = f.neg(h);
    let z = Fe::ZERO;
    Mat::from_rows(&[
        vec![z, z, z, h],
        vec![z, z, mh, z],
        vec![z, mh, z, z],
        vec![h, z, z, z],
    ])
}

/// Gram matrix of det on trace-zero M_2 in coordinates (e, f, g) for [[e, f], [g, −e]].
pub fn det_gram_m20(f: &FieldSpec) -> Mat {
    let mh = f.neg(f.inv(f.from_int(2)));
    let m1 = f.neg(Fe::ONE);
    let z = Fe::ZERO;
    Mat::from_rows(&[vec![m1, z, z], vec![z, z, mh], vec![z, mh, z]])
}
