//! Dense matrices over a [`FieldSpec`], plus a compact 2×2 type for SL_2 work.

use crate::gf::{FieldElement, FieldSpec};
use serde::{Deserialize, Serialize};

type Fe = FieldElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Mat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_cols(cols: &[Vec<Fe>]) -> Mat {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Mat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Fe> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO })
            })
    }

    pub fn mul(&self, f: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Fe::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn add(&self, f: &FieldSpec, other: &Mat) -> Mat {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, f: &FieldSpec, other: &Mat) -> Mat {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, f: &FieldSpec, c: Fe) -> Mat {
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self, f: &FieldSpec) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(p, j), m.get(r, j));
                    m.set(p, j, b);
                    m.set(r, j, a);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let x = m.get(r, j);
                m.set(r, j, f.mul(x, inv));
            }
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if !factor.is_zero() {
                        for j in 0..m.cols {
                            let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right null space {v : M v = 0}, one vector per free column.
    pub fn nullspace(&self, f: &FieldSpec) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &FieldSpec) -> Fe {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Fe::ZERO;
            };
            if p != c {
                for j in 0..n {
                    let (a, b) = (m.get(p, j), m.get(c, j));
                    m.set(p, j, b);
                    m.set(c, j, a);
                }
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if !factor.is_zero() {
                    for j in c..n {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    /// Solves M x = b, returning one solution if any.
    pub fn solve(&self, f: &FieldSpec, b: &[Fe]) -> Option<Vec<Fe>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    pub fn indices(&self) -> Vec<u64> {
        self.data.iter().map(|x| x.0).collect()
    }
}

/// A 2×2 matrix [[a, b], [c, d]] stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct M2(pub [Fe; 4]);

impl M2 {
    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> M2 {
        M2([a, b, c, d])
    }

    pub fn identity() -> M2 {
        M2([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE])
    }

    pub fn zero() -> M2 {
        M2([Fe::ZERO; 4])
    }

    pub fn scalar(x: Fe) -> M2 {
        M2([x, Fe::ZERO, Fe::ZERO, x])
    }

    #[inline]
    pub fn mul(&self, f: &FieldSpec, o: &M2) -> M2 {
        let [a, b, c, d] = self.0;
        let [e, g, h, k] = o.0;
        M2([
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ])
    }

    pub fn add(&self, f: &FieldSpec, o: &M2) -> M2 {
        M2([0, 1, 2, 3].map(|i| f.add(self.0[i], o.0[i])))
    }

    pub fn sub(&self, f: &FieldSpec, o: &M2) -> M2 {
        M2([0, 1, 2, 3].map(|i| f.sub(self.0[i], o.0[i])))
    }

    pub fn scale(&self, f: &FieldSpec, x: Fe) -> M2 {
        M2(self.0.map(|e| f.mul(e, x)))
    }

    pub fn neg(&self, f: &FieldSpec) -> M2 {
        M2(self.0.map(|e| f.neg(e)))
    }

    pub fn det(&self, f: &FieldSpec) -> Fe {
        let [a, b, c, d] = self.0;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn trace(&self, f: &FieldSpec) -> Fe {
        f.add(self.0[0], self.0[3])
    }

    /// The adjugate [[d, −b], [−c, a]]; equals the inverse when det = 1.
    pub fn adj(&self, f: &FieldSpec) -> M2 {
        let [a, b, c, d] = self.0;
        M2([d, f.neg(b), f.neg(c), a])
    }

    pub fn inv(&self, f: &FieldSpec) -> M2 {
        let det = self.det(f);
        self.adj(f).scale(f, f.inv(det))
    }

    pub fn pow(&self, f: &FieldSpec, mut e: u64) -> M2 {
        let mut r = M2::identity();
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        r
    }

    /// Entrywise x ↦ x^Q.
    pub fn frobenius(&self, f: &FieldSpec, q: u64) -> M2 {
        M2(self.0.map(|e| f.frobenius(e, q)))
    }

    pub fn is_identity(&self) -> bool {
        *self == M2::identity()
    }

    pub fn to_mat(&self) -> Mat {
        Mat {
            rows: 2,
            cols: 2,
            data: self.0.to_vec(),
        }
    }

    pub fn from_mat(m: &Mat) -> M2 {
        assert!(m.rows == 2 && m.cols == 2);
        M2([m.data[0], m.data[1], m.data[2], m.data[3]])
    }

    /// Order of an invertible matrix (naive; the groups involved are small).
    pub fn order(&self, f: &FieldSpec) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while !x.is_identity() {
            x = x.mul(f, self);
            n += 1;
            assert!(n < 1 << 24, "matrix order search runaway");
        }
        n
    }

    pub fn in_level(&self, f: &FieldSpec, level: usize) -> bool {
        self.0.iter().all(|&e| f.contains(e, level))
    }
}

/// All elements of SL_2 over the given level, in index order of (a, b, c, d).
pub fn sl2_elements(f: &FieldSpec, level: usize) -> Vec<M2> {
    let els: Vec<Fe> = f.elements(level).collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                // ad − bc = 1 determines d when a ≠ 0.
                if !a.is_zero() {
                    let d = f.div(f.add(Fe::ONE, f.mul(b, c)), a);
                    out.push(M2([a, b, c, d]));
                } else if !b.is_zero() && !c.is_zero() && f.mul(b, c) == f.neg(Fe::ONE) {
                    for &d in &els {
                        out.push(M2([a, b, c, d]));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_orders() {
        let f = FieldSpec::build(3, 1, 1).unwrap();
        assert_eq!(sl2_elements(&f, 0).len(), 24);
        assert_eq!(sl2_elements(&f, 1).len(), 720);
        let f5 = FieldSpec::build(5, 1, 0).unwrap();
        assert_eq!(sl2_elements(&f5, 0).len(), 120);
    }

    #[test]
    fn inverse_and_det() {
        let f = FieldSpec::build(5, 1, 0).unwrap();
        let m = Mat::from_rows(&[
            vec![f.from_int(1), f.from_int(2), f.from_int(0)],
            vec![f.from_int(3), f.from_int(1), f.from_int(4)],
            vec![f.from_int(0), f.from_int(1), f.from_int(1)],
        ]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        // det = 1·(1−4) − 2·(3−0) = −9 ≡ 1 mod 5
        assert_eq!(m.det(&f), f.from_int(1));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldSpec::build(3, 1, 0).unwrap();
        let m = Mat::from_rows(&[
            vec![f.from_int(1), f.from_int(1), f.from_int(0), f.from_int(2)],
            vec![f.from_int(2), f.from_int(2), f.from_int(0), f.from_int(1)],
        ]);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 3);
        for v in ns {
            assert!(m.mul_vec(&f, &v).iter().all(|x| x.is_zero()));
        }
    }
}
