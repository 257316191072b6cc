//! Finite fields of odd characteristic, built as a tower of quadratic extensions
//! F_q = F_0 ⊂ F_1 ⊂ ... ⊂ F_t with |F_{i+1}| = |F_i|².
//!
//! Elements are stored as a single integer index: the base-p digits of the index
//! are the coefficients, level by level. A level-i element a + b·α (α² = the level-i
//! nonsquare) has index `idx(a) + idx(b)·|F_i|`, so embeddings between levels are the
//! identity on indices and the index order is the coefficient-lexicographic order
//! (most significant coefficient first).

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducibleFound(u32),
    #[error("element is not a square at level {0}")]
    NotASquare(usize),
    #[error("field of size {0}^(m·2^t) exceeds the supported index range")]
    ScaleExceeded(u64),
}

/// A field element, identified by its index in the tower (see module docs).
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest top-level field for which log/exp/Zech tables are built.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    t: u32,
    base_modulus: Vec<u64>,
    /// Least nonsquare of each level 0..=t; the first t of these generate the tower.
    nonsquares: Vec<FieldElement>,
    sizes: Vec<u64>,
    tables: Option<Tables>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomials over F_p as coefficient vectors, low degree first.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let b = trim(b.to_vec());
        let lead_inv = super::pow_mod(b[b.len() - 1], p - 2, p);
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    /// Monic polynomial with the given non-leading coefficients encoded as base-p digits.
    pub fn monic_from_index(mut idx: u64, deg: u32, p: u64) -> Vec<u64> {
        let mut c = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            c.push(idx % p);
            idx /= p;
        }
        c.push(1);
        c
    }

    /// Trial division by every monic polynomial of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = (f.len() - 1) as u32;
        for d in 1..=deg / 2 {
            for idx in 0..p.pow(d) {
                let g = monic_from_index(idx, d, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl FieldSpec {
    /// Builds F_{p^m} and `t` quadratic extensions on top of it.
    pub fn build(p: u64, m: u32, t: u32) -> Result<FieldSpec, GfError> {
        if p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(GfError::NonPrime(p));
        }
        let q = p.checked_pow(m).ok_or(GfError::ScaleExceeded(p))?;
        let mut sizes = vec![q];
        for _ in 0..t {
            let last = *sizes.last().unwrap();
            let next = last
                .checked_mul(last)
                .filter(|&s| s < (1u64 << 63))
                .ok_or(GfError::ScaleExceeded(p))?;
            sizes.push(next);
        }
        let base_modulus = (0..p.pow(m))
            .map(|idx| fp_poly::monic_from_index(idx, m, p))
            .find(|f| fp_poly::is_irreducible(f, p))
            .ok_or(GfError::NoIrreducibleFound(m))?;
        let mut spec = FieldSpec {
            p,
            m,
            t,
            base_modulus,
            nonsquares: Vec::new(),
            sizes,
            tables: None,
        };
        // Each nonsquare is found with the arithmetic of the levels below it, which is
        // all that the recursive multiplication needs at that point.
        for level in 0..=t as usize {
            let ns = (1..spec.sizes[level])
                .map(FieldElement)
                .find(|&x| !spec.euler_slow(x, level))
                .expect("every odd-order field has nonsquares");
            spec.nonsquares.push(ns);
        }
        if spec.sizes[t as usize] <= TABLE_LIMIT {
            spec.tables = Some(spec.build_tables());
        }
        Ok(spec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn height(&self) -> usize {
        self.t as usize
    }
    /// q = p^m, the size of the base level.
    pub fn q(&self) -> u64 {
        self.sizes[0]
    }
    pub fn base_modulus(&self) -> &[u64] {
        &self.base_modulus
    }
    /// Nonsquares whose square roots generate levels 1..=t.
    pub fn tower_nonsquares(&self) -> &[FieldElement] {
        &self.nonsquares[..self.t as usize]
    }
    /// The least nonsquare of the given level.
    pub fn nonsquare(&self, level: usize) -> FieldElement {
        self.nonsquares[level]
    }
    pub fn size(&self, level: usize) -> u64 {
        self.sizes[level]
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn contains(&self, x: FieldElement, level: usize) -> bool {
        x.0 < self.sizes[level]
    }

    /// Smallest level containing x.
    pub fn level_of(&self, x: FieldElement) -> usize {
        self.sizes
            .iter()
            .position(|&s| x.0 < s)
            .expect("element outside the tower")
    }

    pub fn elements(&self, level: usize) -> impl Iterator<Item = FieldElement> {
        (0..self.sizes[level]).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.sizes[level]))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.sizes[level]))
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u64)
    }

    /// Coefficients over F_p, least significant first.
    pub fn digits(&self, x: FieldElement, level: usize) -> Vec<u64> {
        let n = self.m as usize * (1 << level);
        let mut v = x.0;
        (0..n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// The two coefficients (a, b) of x = a + b·α over the level below.
    pub fn split(&self, x: FieldElement, level: usize) -> (FieldElement, FieldElement) {
        assert!(level >= 1);
        let s = self.sizes[level - 1];
        (FieldElement(x.0 % s), FieldElement(x.0 / s))
    }

    pub fn join(&self, a: FieldElement, b: FieldElement, level: usize) -> FieldElement {
        FieldElement(a.0 + b.0 * self.sizes[level - 1])
    }

    // ---- slow digit-level arithmetic; the reference for the tables ----

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u64, 1u64);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            if x > 0 || y > 0 {
                place *= self.p;
            }
        }
        FieldElement(out)
    }

    fn neg_slow(&self, a: FieldElement) -> FieldElement {
        let (mut x, mut out, mut place) = (a.0, 0u64, 1u64);
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            x /= self.p;
            if x > 0 {
                place *= self.p;
            }
        }
        FieldElement(out)
    }

    fn mul_base(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        let p = self.p;
        let da = self.digits(FieldElement(a), 0);
        let db = self.digits(FieldElement(b), 0);
        let mut prod = vec![0u64; 2 * m];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let f = &self.base_modulus;
        for k in (m..2 * m).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..=m {
                    prod[k - m + i] = (prod[k - m + i] + p * p - c * f[i] % p) % p;
                }
            }
        }
        prod[..m].iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    fn mul_slow_at(&self, a: FieldElement, b: FieldElement, level: usize) -> FieldElement {
        if level == 0 {
            return FieldElement(self.mul_base(a.0, b.0));
        }
        let (a0, a1) = self.split(a, level);
        let (b0, b1) = self.split(b, level);
        let ns = self.nonsquares[level - 1];
        let lo = self.mul_slow_at(a0, b0, level - 1);
        let hi = self.mul_slow_at(self.mul_slow_at(a1, b1, level - 1), ns, level - 1);
        let c0 = self.add_slow(lo, hi);
        let c1 = self.add_slow(
            self.mul_slow_at(a0, b1, level - 1),
            self.mul_slow_at(a1, b0, level - 1),
        );
        self.join(c0, c1, level)
    }

    /// Multiplication by the recursive tower formula, without tables.
    pub fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let level = self.level_of(FieldElement(a.0.max(b.0)));
        self.mul_slow_at(a, b, level)
    }

    fn pow_slow(&self, mut b: FieldElement, mut e: u64) -> FieldElement {
        let mut r = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    fn euler_slow(&self, x: FieldElement, level: usize) -> bool {
        x.is_zero() || self.pow_slow(x, (self.sizes[level] - 1) / 2) == FieldElement::ONE
    }

    fn build_tables(&self) -> Tables {
        let size = self.sizes[self.t as usize];
        let order = size - 1;
        let factors = prime_factors(order);
        let g = (2..size)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(g, order / r) != FieldElement::ONE)
            })
            .unwrap_or(FieldElement(1));
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NONE; size as usize];
        let mut x = FieldElement::ONE;
        for i in 0..order {
            exp.push(x.0 as u32);
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        let zech = (0..order)
            .map(|k| {
                let s = self.add_slow(FieldElement::ONE, FieldElement(exp[k as usize] as u64));
                log[s.0 as usize]
            })
            .collect();
        Tables { exp, log, zech }
    }

    // ---- public arithmetic ----

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = t.exp.len() as u64;
                let la = t.log[a.0 as usize] as u64;
                let lb = t.log[b.0 as usize] as u64;
                let z = t.zech[((lb + n - la) % n) as usize];
                if z == NONE {
                    FieldElement(0)
                } else {
                    FieldElement(t.exp[((la + z as u64) % n) as usize] as u64)
                }
            }
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 {
                    return a;
                }
                let n = t.exp.len() as u64;
                let la = t.log[a.0 as usize] as u64;
                FieldElement(t.exp[((la + n / 2) % n) as usize] as u64)
            }
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement(0);
                }
                let n = t.exp.len() as u64;
                let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                FieldElement(t.exp[(s % n) as usize] as u64)
            }
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u64;
                let la = t.log[a.0 as usize] as u64;
                FieldElement(t.exp[((n - la) % n) as usize] as u64)
            }
            None => {
                let level = self.level_of(a);
                self.pow(a, self.sizes[level] - 2)
            }
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, b: FieldElement, e: u64) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if b.is_zero() {
                    return if e == 0 { FieldElement::ONE } else { b };
                }
                let n = t.exp.len() as u128;
                let l = t.log[b.0 as usize] as u128 * (e as u128 % n) % n;
                FieldElement(t.exp[l as usize] as u64)
            }
            None => self.pow_slow(b, e),
        }
    }

    /// x ↦ x^Q. For Q a power of p this is a field automorphism.
    pub fn frobenius(&self, x: FieldElement, q_exp: u64) -> FieldElement {
        self.pow(x, q_exp)
    }

    /// Euler criterion in the level-`level` field. Zero counts as a square.
    pub fn is_square(&self, x: FieldElement, level: usize) -> bool {
        debug_assert!(self.contains(x, level));
        if x.is_zero() {
            return true;
        }
        self.pow(x, (self.sizes[level] - 1) / 2) == FieldElement::ONE
    }

    /// The lesser (in index order) of the two square roots of x in the level field.
    pub fn sqrt(&self, x: FieldElement, level: usize) -> Result<FieldElement, GfError> {
        if x.is_zero() {
            return Ok(x);
        }
        if !self.is_square(x, level) {
            return Err(GfError::NotASquare(level));
        }
        let r = match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[x.0 as usize] / 2) as usize] as u64),
            None => self.tonelli_shanks(x, level),
        };
        let s = self.neg(r);
        Ok(r.min(s))
    }

    /// Tonelli–Shanks in the level field, using the stored nonsquare.
    pub fn tonelli_shanks(&self, x: FieldElement, level: usize) -> FieldElement {
        let order = self.sizes[level] - 1;
        let s = order.trailing_zeros();
        let qodd = order >> s;
        let mut c = self.pow(self.nonsquares[level], qodd);
        let mut r = self.pow(x, qodd.div_ceil(2));
        let mut tt = self.pow(x, qodd);
        let mut mm = s;
        while tt != FieldElement::ONE {
            let mut i = 0;
            let mut t2 = tt;
            while t2 != FieldElement::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(mm - i - 1) {
                b = self.mul(b, b);
            }
            r = self.mul(r, b);
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            mm = i;
        }
        r
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElement) -> u64 {
        assert!(!x.is_zero());
        let level = self.level_of(x);
        let n = self.sizes[level] - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        ord
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_three() {
        let f = FieldSpec::build(3, 1, 1).unwrap();
        assert_eq!(f.tower_nonsquares(), &[FieldElement(2)]);
        assert!(!f.is_square(FieldElement(2), 0));
        assert!(f.is_square(FieldElement(2), 1));
        assert_eq!(f.size(1), 9);
    }

    #[test]
    fn height_zero_has_no_tower() {
        let f = FieldSpec::build(3, 1, 0).unwrap();
        assert!(f.tower_nonsquares().is_empty());
        assert_eq!(f.size(0), 3);
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(
            FieldSpec::build(2, 1, 0).unwrap_err(),
            GfError::EvenCharacteristic
        );
        assert_eq!(FieldSpec::build(9, 1, 0).unwrap_err(), GfError::NonPrime(9));
    }

    #[test]
    fn base_modulus_of_f9_is_least_irreducible() {
        // x² + 1 is the first monic quadratic over F_3 without roots.
        let f = FieldSpec::build(3, 2, 0).unwrap();
        assert_eq!(f.base_modulus(), &[1, 0, 1]);
    }

    #[test]
    fn frobenius_on_f9() {
        let f = FieldSpec::build(3, 1, 1).unwrap();
        let fixed = f.elements(1).filter(|&x| f.frobenius(x, 3) == x).count();
        assert_eq!(fixed, 3);
        for x in f.elements(1) {
            assert_eq!(f.frobenius(f.frobenius(x, 3), 3), x);
        }
    }

    #[test]
    fn sqrt_picks_lesser_root() {
        let f = FieldSpec::build(5, 1, 1).unwrap();
        let r = f.sqrt(FieldElement(4), 0).unwrap();
        assert_eq!(r, FieldElement(2));
        assert_eq!(f.sqrt(FieldElement(2), 0), Err(GfError::NotASquare(0)));
        assert_eq!(f.sqrt(FieldElement::ONE, 0).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn tables_agree_with_recursive_formula() {
        let f = FieldSpec::build(3, 1, 2).unwrap();
        for a in f.elements(2).step_by(7) {
            for b in f.elements(2).step_by(5) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn tonelli_shanks_matches_tables() {
        let f = FieldSpec::build(7, 1, 1).unwrap();
        for x in f.elements(1).skip(1) {
            if f.is_square(x, 1) {
                let r = f.tonelli_shanks(x, 1);
                assert_eq!(f.mul(r, r), x);
            }
        }
    }
}
