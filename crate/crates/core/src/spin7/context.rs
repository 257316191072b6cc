use std::sync::Arc;

use super::{Spin7Error, SylowElement};
use crate::cliffspin::{
    pi_action, CliffordElement, ExceptionalIsos, OrthMatrix, QuadSpace, SpinGroupElement,
};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{sl2_elements, Mat, M2};

type Fe = FieldElement;

/// The model V = M_2 ⊕ M_2^0 with b = det ⊕ det over F_{q^n}, together with the
/// fixed matrices A, B, X, Y, Z and the element τ.
///
/// Orthogonal basis vectors 0..4 of V come from M_2 and 4..7 from M_2^0, so
/// trp[A1, A2, A3] is the product of the two block lifts in the Clifford algebra.
#[derive(Debug)]
pub struct Spin7Context {
    field: Arc<FieldSpec>,
    n: u32,
    level: usize,
    iso: ExceptionalIsos,
    v7: Arc<QuadSpace>,
    a: M2,
    b: M2,
    x: M2,
    y: M2,
    zz: M2,
    k: u32,
    tau: SpinGroupElement,
    tau_bar: Mat,
}

/// Elements [[a, b], [−b, a]] of SL_2 at the given level: the centralizer of A.
fn torus(f: &FieldSpec, level: usize) -> Vec<M2> {
    let mut out = Vec::new();
    for a in f.elements(level) {
        let r = f.sub(Fe::ONE, f.mul(a, a));
        if let Ok(b) = f.sqrt(r, level) {
            out.push(M2::new(a, b, f.neg(b), a));
            if !b.is_zero() {
                out.push(M2::new(a, f.neg(b), b, a));
            }
        }
    }
    out.sort();
    out
}

/// Square roots of an element of the torus inside the torus at `level`, sorted.
fn torus_roots(f: &FieldSpec, target: &M2, level: usize) -> Vec<M2> {
    let [x0, x1, _, _] = target.0;
    let two = f.from_int(2);
    let mut out = Vec::new();
    for a in f.elements(level) {
        let cands: Vec<Fe> = if a.is_zero() {
            match f.sqrt(f.neg(x0), level) {
                Ok(b) => vec![b, f.neg(b)],
                Err(_) => vec![],
            }
        } else {
            vec![f.div(x1, f.mul(two, a))]
        };
        for b in cands {
            let m = M2::new(a, b, f.neg(b), a);
            if m.det(f) == Fe::ONE && m.mul(f, &m) == *target && !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

impl Spin7Context {
    /// Builds the context for F_{q^n}, q = p^m ∈ {3, 5, 7, 9} and n ∈ {1, 2}.
    pub fn build(p: u64, m: u32, n: u32) -> Result<Spin7Context, Spin7Error> {
        let q = p.checked_pow(m).ok_or(Spin7Error::UnsupportedScale)?;
        if ![3, 5, 7, 9].contains(&q) || !(n == 1 || n == 2) {
            return Err(Spin7Error::UnsupportedScale);
        }
        let level = n.trailing_zeros() as usize;
        let field = Arc::new(FieldSpec::build(p, m, level as u32 + 2)?);
        let f = &*field;
        let iso = ExceptionalIsos::new(field.clone(), level)?;
        let v7 = QuadSpace::direct_sum(iso.v4(), iso.v3());

        let one = Fe::ONE;
        let m1 = f.neg(one);
        let a = M2::new(Fe::ZERO, one, m1, Fe::ZERO);
        let minus_i = M2::scalar(m1);
        let ainv = a.inv(f);
        let b = sl2_elements(f, 0)
            .into_iter()
            .find(|b| b.mul(f, b) == minus_i && b.mul(f, &a).mul(f, &b.inv(f)) == ainv)
            .ok_or(Spin7Error::InvariantViolation("no B with ⟨A, B⟩ ≅ Q_8"))?;

        let two_power = |g: &M2| g.order(f).is_power_of_two();
        let c: Vec<M2> = torus(f, level).into_iter().filter(two_power).collect();
        let order = c.len() as u64;
        let k = order.trailing_zeros();
        if !order.is_power_of_two() || k < 2 {
            return Err(Spin7Error::InvariantViolation(
                "C(q^n) is not cyclic of order ≥ 4",
            ));
        }
        let x = *c
            .iter()
            .find(|g| g.order(f) == order && g.pow(f, 1 << (k - 2)) == a)
            .ok_or(Spin7Error::InvariantViolation(
                "no generator X of C(q^n) over A",
            ))?;
        let y = *torus_roots(f, &x, level + 1)
            .first()
            .ok_or(Spin7Error::InvariantViolation("no Y with Y² = X"))?;
        let zz = *torus_roots(f, &y, level + 2)
            .first()
            .ok_or(Spin7Error::InvariantViolation("no Z with Z² = Y"))?;

        // τ̄(X, Y) = (−adj X, −Y): (a, b, c, d) ↦ (−d, b, c, −a) and −Id on M_2^0.
        let mut tau_bar = Mat::zeros(7, 7);
        tau_bar.set(3, 0, m1);
        tau_bar.set(0, 3, m1);
        tau_bar.set(1, 1, one);
        tau_bar.set(2, 2, one);
        for i in 4..7 {
            tau_bar.set(i, i, m1);
        }
        let tau = OrthMatrix::new(&v7, tau_bar.clone())?.lift_to_spin()?;

        let ctx = Spin7Context {
            field,
            n,
            level,
            iso,
            v7,
            a,
            b,
            x,
            y,
            zz,
            k,
            tau,
            tau_bar,
        };
        ctx.verify()?;
        Ok(ctx)
    }

    fn verify(&self) -> Result<(), Spin7Error> {
        let f = self.f();
        let (a, b) = (&self.a, &self.b);
        let bad = |what| Err(Spin7Error::InvariantViolation(what));
        if !a.pow(f, 4).is_identity()
            || b.mul(f, b) != a.mul(f, a)
            || b.mul(f, a).mul(f, &b.inv(f)) != a.inv(f)
        {
            return bad("Q_8 relations for A, B");
        }
        let frob = self.qn();
        if self.y.frobenius(f, frob) != self.y.neg(f) {
            return bad("ψ(Y) = −Y");
        }
        let t = self.tau.element();
        if t.mul_unchecked(t) != CliffordElement::one(&self.v7) {
            return bad("τ² = 1");
        }
        let gens = [self.a, self.b, self.x];
        for (i, g) in gens.iter().enumerate() {
            let h = gens[(i + 1) % 3];
            let s = SylowElement::raw([*g, h, M2::identity()], 0);
            let lhs = self.tau.conjugate(&self.to_clifford(&s));
            let rhs = self.to_clifford(&SylowElement::raw([h, *g, M2::identity()], 0));
            if lhs != rhs {
                return bad("τ trp[A1, A2, A3] τ⁻¹ = trp[A2, A1, A3]");
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub(crate) fn f(&self) -> &FieldSpec {
        &self.field
    }
    pub fn q(&self) -> u64 {
        self.field.q()
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// q^n.
    pub fn qn(&self) -> u64 {
        self.field.size(self.level)
    }
    /// Tower level of F_{q^n}.
    pub fn level(&self) -> usize {
        self.level
    }
    /// |C(q^n)| = 2^k.
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn v7(&self) -> &Arc<QuadSpace> {
        &self.v7
    }
    pub fn isos(&self) -> &ExceptionalIsos {
        &self.iso
    }
    pub fn a(&self) -> M2 {
        self.a
    }
    pub fn b(&self) -> M2 {
        self.b
    }
    /// Generator of C(q^n) with X^{2^{k−2}} = A.
    pub fn x(&self) -> M2 {
        self.x
    }
    /// Y ∈ C(q^{2n}) with Y² = X.
    pub fn y(&self) -> M2 {
        self.y
    }
    /// Z ∈ C(q^{4n}) with Z² = Y.
    pub fn z_root(&self) -> M2 {
        self.zz
    }
    pub fn tau(&self) -> &SpinGroupElement {
        &self.tau
    }
    pub fn tau_bar(&self) -> &Mat {
        &self.tau_bar
    }

    /// Normal form of trp[X1, X2, X3]·τ^ε.
    pub fn elem(&self, x: [M2; 3], eps: u8) -> SylowElement {
        SylowElement::raw(x, eps).normalized(self.f())
    }

    pub fn trp(&self, x1: M2, x2: M2, x3: M2) -> SylowElement {
        self.elem([x1, x2, x3], 0)
    }

    pub fn identity(&self) -> SylowElement {
        self.trp(M2::identity(), M2::identity(), M2::identity())
    }

    pub fn minus_i(&self) -> M2 {
        M2::scalar(self.f().neg(Fe::ONE))
    }

    /// z = trp[I, I, −I].
    pub fn z(&self) -> SylowElement {
        self.trp(M2::identity(), M2::identity(), self.minus_i())
    }

    /// z_1 = trp[−I, I, I].
    pub fn z1(&self) -> SylowElement {
        self.trp(self.minus_i(), M2::identity(), M2::identity())
    }

    pub fn a_hat(&self) -> SylowElement {
        self.trp(self.a, self.a, self.a)
    }

    pub fn b_hat(&self) -> SylowElement {
        self.trp(self.b, self.b, self.b)
    }

    pub fn tau_elem(&self) -> SylowElement {
        self.elem([M2::identity(); 3], 1)
    }

    pub fn mul(&self, g: &SylowElement, h: &SylowElement) -> SylowElement {
        g.mul(self.f(), h)
    }

    pub fn inv(&self, g: &SylowElement) -> SylowElement {
        g.inv(self.f())
    }

    /// g x g⁻¹.
    pub fn conj(&self, g: &SylowElement, x: &SylowElement) -> SylowElement {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn pow(&self, g: &SylowElement, e: u64) -> SylowElement {
        (0..e).fold(self.identity(), |acc, _| self.mul(&acc, g))
    }

    pub fn order(&self, g: &SylowElement) -> u64 {
        let id = self.identity();
        let mut x = *g;
        let mut k = 1;
        while x != id {
            x = self.mul(&x, g);
            k += 1;
        }
        k
    }

    /// Whether every coordinate lies in SL_2(q^n).
    pub fn is_rational_coords(&self, g: &SylowElement) -> bool {
        g.x.iter().all(|m| m.in_level(self.f(), self.level))
    }

    /// Membership in H(q^n)⟨τ⟩: coordinates in SL_2(q^n), or all in SL_2(q^n)·Y.
    pub fn is_rational(&self, g: &SylowElement) -> bool {
        let f = self.f();
        if g.x.iter().any(|m| m.det(f) != Fe::ONE) {
            return false;
        }
        if self.is_rational_coords(g) {
            return true;
        }
        let q = self.qn();
        g.x.iter()
            .all(|m| m.in_level(f, self.level + 1) && m.frobenius(f, q) == m.neg(f))
    }

    /// The Clifford element trp[X1, X2, X3]·τ^ε.
    pub fn to_clifford(&self, g: &SylowElement) -> CliffordElement {
        let [x1, x2, x3] = g.x;
        let h = self
            .iso
            .lift4_element(&x1, &x2)
            .embed(&self.v7, 0)
            .mul_unchecked(&self.iso.lift3_element(&x3).embed(&self.v7, 4));
        if g.eps == 1 {
            h.mul_unchecked(self.tau.element())
        } else {
            h
        }
    }

    /// The spin group element of g.
    pub fn to_spin(&self, g: &SylowElement) -> SpinGroupElement {
        SpinGroupElement::new(self.to_clifford(g)).expect("triples lie in Spin")
    }

    /// π(g) on V in standard coordinates: (X, Y) ↦ (A1 X A2⁻¹, A3 Y A3⁻¹), then τ̄ first when ε = 1.
    pub fn orth_image(&self, g: &SylowElement) -> Mat {
        let f = self.f();
        let [a1, a2, a3] = g.x;
        let (a2i, a3i) = (a2.inv(f), a3.inv(f));
        let mut m = Mat::zeros(7, 7);
        for j in 0..4 {
            let mut e = [Fe::ZERO; 4];
            e[j] = Fe::ONE;
            let img = a1.mul(f, &M2(e)).mul(f, &a2i);
            for i in 0..4 {
                m.set(i, j, img.0[i]);
            }
        }
        for j in 0..3 {
            let mut e = [Fe::ZERO; 3];
            e[j] = Fe::ONE;
            let w = M2([e[0], e[1], e[2], f.neg(e[0])]);
            let img = a3.mul(f, &w).mul(f, &a3i);
            for i in 0..3 {
                m.set(4 + i, 4 + j, img.0[i]);
            }
        }
        if g.eps == 1 {
            m.mul(f, &self.tau_bar)
        } else {
            m
        }
    }

    /// Recovers (A1, A2) with L(W) = A1 W A2⁻¹ from the 4×4 matrix of L on M_2, up to a
    /// common sign.
    fn recover_pair(&self, l: &Mat) -> Option<(M2, M2)> {
        let f = self.f();
        let top = self.field.height();
        let img = |j: usize| M2([l.get(0, j), l.get(1, j), l.get(2, j), l.get(3, j)]);
        let (e11, e21) = (img(0), img(2));
        // L(E11) = a_1 n^T and L(E21) = a_2 n^T for the columns a_i of A1 and the first
        // row n of A2⁻¹.
        let c = (0..2).find(|&c| !e11.0[c].is_zero() || !e11.0[2 + c].is_zero())?;
        let mp = M2([e11.0[c], e21.0[c], e11.0[2 + c], e21.0[2 + c]]);
        let s = f.sqrt(mp.det(f), top).ok()?;
        if s.is_zero() {
            return None;
        }
        let a1 = mp.scale(f, f.inv(s));
        let li = M2([l.get(0, 0), l.get(1, 0), l.get(2, 0), l.get(3, 0)]).add(f, &img(3));
        let nmat = a1.inv(f).mul(f, &li);
        if nmat.det(f) != Fe::ONE {
            return None;
        }
        Some((a1, nmat.inv(f)))
    }

    /// Finds the H(q^n)⟨τ⟩ normal form of a Clifford element, if it lies there.
    pub fn locate(&self, u: &CliffordElement) -> Option<SylowElement> {
        let f = self.f();
        let pi = pi_action(u)?;
        let mut m = pi.mat().clone();
        for i in 0..7 {
            for j in 0..7 {
                if (i < 4) != (j < 4) && !m.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        let mut l = Mat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                l.set(i, j, m.get(i, j));
            }
        }
        let eps = if l.det(f) == Fe::ONE { 0 } else { 1 };
        if eps == 1 {
            m = m.mul(f, &self.tau_bar);
            for i in 0..4 {
                for j in 0..4 {
                    l.set(i, j, m.get(i, j));
                }
            }
        }
        let (a1, a2) = self.recover_pair(&l)?;
        // Conjugation on M_2^0, extended by I ↦ I to all of M_2.
        let mut k = Mat::zeros(4, 4);
        for j in 0..4 {
            let mut e = [Fe::ZERO; 4];
            e[j] = Fe::ONE;
            let w = M2(e);
            let tr = w.trace(f);
            let half = f.div(tr, f.from_int(2));
            let w0 = w.sub(f, &M2::scalar(half));
            let y = [
                m.get(4, 4),
                m.get(4, 5),
                m.get(4, 6),
                m.get(5, 4),
                m.get(5, 5),
                m.get(5, 6),
                m.get(6, 4),
                m.get(6, 5),
                m.get(6, 6),
            ];
            let coords = [w0.0[0], w0.0[1], w0.0[2]];
            let mut img = [Fe::ZERO; 3];
            for (i, slot) in img.iter_mut().enumerate() {
                for (jj, &c) in coords.iter().enumerate() {
                    *slot = f.add(*slot, f.mul(y[3 * i + jj], c));
                }
            }
            let out = M2([
                f.add(img[0], half),
                img[1],
                img[2],
                f.add(f.neg(img[0]), half),
            ]);
            for i in 0..4 {
                k.set(i, j, out.0[i]);
            }
        }
        let (a3, _) = self.recover_pair(&k)?;
        let cand = self.elem([a1, a2, a3], eps);
        let cu = self.to_clifford(&cand);
        if &cu == u {
            return Some(cand);
        }
        if cu.neg() == *u {
            return Some(self.mul(&cand, &self.z()));
        }
        None
    }

    /// All of SL_2(q^n), sorted.
    pub fn sl2(&self) -> Vec<M2> {
        sl2_elements(self.f(), self.level)
    }

    /// C(q^n) = ⟨X⟩ as the list X^0, X^1, …
    pub fn c_elements(&self) -> Vec<M2> {
        let f = self.f();
        (0..1u64 << self.k).map(|i| self.x.pow(f, i)).collect()
    }

    /// Q(q^n) = ⟨X, B⟩ as X^i B^j.
    pub fn q_elements(&self) -> Vec<M2> {
        let f = self.f();
        let mut out = self.c_elements();
        out.extend(self.c_elements().iter().map(|c| c.mul(f, &self.b)));
        out
    }

    /// Enumerates H(q^n) (or H(q^n)⟨τ⟩), refusing above `limit` elements.
    pub fn h_elements(
        &self,
        with_tau: bool,
        limit: usize,
    ) -> Result<Vec<SylowElement>, Spin7Error> {
        let sl = self.sl2();
        let size = sl.len().pow(3) * if with_tau { 2 } else { 1 };
        if size > limit {
            return Err(Spin7Error::UnsupportedScale);
        }
        let f = self.f();
        let mut out = Vec::with_capacity(size);
        let y = self.y;
        for eps in 0..if with_tau { 2 } else { 1 } {
            for a in &sl {
                for b in &sl {
                    for c in &sl {
                        let g = SylowElement::raw([*a, *b, *c], eps);
                        if g.normalized(f) == g {
                            out.push(g);
                        }
                        let gy = SylowElement::raw([a.mul(f, &y), b.mul(f, &y), c.mul(f, &y)], eps)
                            .normalized(f);
                        if gy == SylowElement::raw([a.mul(f, &y), b.mul(f, &y), c.mul(f, &y)], eps)
                        {
                            out.push(gy);
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}
