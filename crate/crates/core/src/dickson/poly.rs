//! Sparse polynomials over F_2 and the Steenrod squares acting on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::DicksonError;

/// Largest number of variables, including one auxiliary variable.
pub const MAX_VARS: usize = 6;

/// Exponent vector; entries past the arity are zero.
pub type Mono = [u16; MAX_VARS];

/// A polynomial over F_2: a sorted list of distinct monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly2 {
    arity: usize,
    terms: Vec<Mono>,
}

fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = *a;
    for i in 0..MAX_VARS {
        r[i] += b[i];
    }
    r
}

/// Sorts and cancels monomials in pairs.
fn normalize(mut v: Vec<Mono>) -> Vec<Mono> {
    v.sort_unstable();
    let mut out: Vec<Mono> = Vec::with_capacity(v.len());
    for m in v {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

impl Poly2 {
    pub fn zero(arity: usize) -> Poly2 {
        assert!(arity <= MAX_VARS);
        Poly2 {
            arity,
            terms: vec![],
        }
    }

    pub fn one(arity: usize) -> Poly2 {
        Poly2::monomial(arity, [0; MAX_VARS])
    }

    pub fn monomial(arity: usize, m: Mono) -> Poly2 {
        assert!(arity <= MAX_VARS && m[arity..].iter().all(|&e| e == 0));
        Poly2 {
            arity,
            terms: vec![m],
        }
    }

    pub fn var(arity: usize, i: usize) -> Poly2 {
        assert!(i < arity);
        let mut m = [0; MAX_VARS];
        m[i] = 1;
        Poly2::monomial(arity, m)
    }

    /// The variables x_0, …, x_{arity-1}.
    pub fn vars(arity: usize) -> Vec<Poly2> {
        (0..arity).map(|i| Poly2::var(arity, i)).collect()
    }

    pub fn from_terms(arity: usize, terms: Vec<Mono>) -> Poly2 {
        assert!(arity <= MAX_VARS && terms.iter().all(|m| m[arity..].iter().all(|&e| e == 0)));
        Poly2 {
            arity,
            terms: normalize(terms),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Mono] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, or None if zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = mono_degree(self.terms.first()?);
        self.terms.iter().all(|m| mono_degree(m) == d).then_some(d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(mono_degree).max()
    }

    /// The homogeneous component of degree d.
    pub fn component(&self, d: u32) -> Poly2 {
        Poly2 {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|m| mono_degree(m) == d)
                .copied()
                .collect(),
        }
    }

    pub fn add(&self, o: &Poly2) -> Poly2 {
        assert_eq!(self.arity, o.arity);
        let mut v = self.terms.clone();
        v.extend_from_slice(&o.terms);
        Poly2 {
            arity: self.arity,
            terms: normalize(v),
        }
    }

    pub fn mul(&self, o: &Poly2) -> Poly2 {
        assert_eq!(self.arity, o.arity);
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                v.push(mono_mul(a, b));
            }
        }
        Poly2 {
            arity: self.arity,
            terms: normalize(v),
        }
    }

    /// p² computed by doubling exponents (Frobenius).
    pub fn square(&self) -> Poly2 {
        Poly2 {
            arity: self.arity,
            terms: self.terms.iter().map(|m| m.map(|e| 2 * e)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::one(self.arity);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn product<'a>(arity: usize, it: impl IntoIterator<Item = &'a Poly2>) -> Poly2 {
        it.into_iter().fold(Poly2::one(arity), |acc, p| acc.mul(p))
    }

    /// Ring homomorphism x_i ↦ images[i] into a ring of arity `images[0].arity()`.
    pub fn substitute(&self, images: &[Poly2]) -> Poly2 {
        assert_eq!(images.len(), self.arity);
        let arity = images.first().map_or(0, |p| p.arity);
        // cache powers of each image
        let mut powers: Vec<Vec<Poly2>> = images
            .iter()
            .map(|p| vec![Poly2::one(arity), p.clone()])
            .collect();
        let mut acc: Vec<Mono> = Vec::new();
        for m in &self.terms {
            let mut t = Poly2::one(arity);
            for i in 0..self.arity {
                let e = m[i] as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            acc.extend(t.terms);
        }
        Poly2 {
            arity,
            terms: normalize(acc),
        }
    }

    /// Renames variables: x_i ↦ x_{map[i]} in a ring of the given arity.
    pub fn embed(&self, arity: usize, map: &[usize]) -> Poly2 {
        assert_eq!(map.len(), self.arity);
        let terms = self
            .terms
            .iter()
            .map(|m| {
                let mut r = [0; MAX_VARS];
                for i in 0..self.arity {
                    r[map[i]] += m[i];
                }
                r
            })
            .collect();
        Poly2::from_terms(arity, terms)
    }

    /// Coefficient of x_v^e, as a polynomial in the remaining variables (x_v set to 0).
    pub fn coefficient(&self, v: usize, e: u16) -> Poly2 {
        let terms = self
            .terms
            .iter()
            .filter(|m| m[v] == e)
            .map(|m| {
                let mut r = *m;
                r[v] = 0;
                r
            })
            .collect();
        Poly2 {
            arity: self.arity,
            terms,
        }
    }

    /// Drops trailing variables that do not occur.
    pub fn truncate_arity(&self, arity: usize) -> Result<Poly2, DicksonError> {
        if self
            .terms
            .iter()
            .any(|m| m[arity..].iter().any(|&e| e != 0))
        {
            return Err(DicksonError::ArityOutOfRange);
        }
        Ok(Poly2 {
            arity,
            terms: self.terms.clone(),
        })
    }

    /// Sq^k, from the total square Sq(x) = x + x² extended by the Cartan formula.
    pub fn sq(&self, k: u32) -> Poly2 {
        let mut out = Vec::new();
        for m in &self.terms {
            sq_mono(m, self.arity, 0, k, *m, &mut out);
        }
        Poly2 {
            arity: self.arity,
            terms: normalize(out),
        }
    }

    /// One exponent vector per line, sorted, entries separated by spaces.
    pub fn to_sparse_text(&self) -> String {
        let mut s = String::new();
        for m in &self.terms {
            let row: Vec<String> = m[..self.arity].iter().map(|e| e.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_sparse_text(arity: usize, text: &str) -> Option<Poly2> {
        let mut terms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let es: Vec<u16> = line
                .split_whitespace()
                .map(|t| t.parse().ok())
                .collect::<Option<_>>()?;
            if es.len() != arity {
                return None;
            }
            let mut m = [0; MAX_VARS];
            m[..arity].copy_from_slice(&es);
            terms.push(m);
        }
        Some(Poly2::from_terms(arity, terms))
    }
}

/// Sq^k(x^e) = Σ_{j1+…+jn = k} Π C(e_i, j_i) x_i^{e_i + j_i}; C(e, j) is odd iff j ⊆ e bitwise.
fn sq_mono(m: &Mono, arity: usize, i: usize, left: u32, cur: Mono, out: &mut Vec<Mono>) {
    if i == arity {
        if left == 0 {
            out.push(cur);
        }
        return;
    }
    let e = m[i] as u32;
    for j in 0..=left.min(e) {
        if j & !e == 0 {
            let mut c = cur;
            c[i] += j as u16;
            sq_mono(m, arity, i + 1, left - j, c, out);
        }
    }
}

const NAMES: [&str; MAX_VARS] = ["x", "y", "z", "w", "v", "t"];

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut any = false;
            for i in 0..self.arity {
                match m[i] {
                    0 => {}
                    1 => {
                        write!(f, "{}", NAMES[i])?;
                        any = true;
                    }
                    e => {
                        write!(f, "{}^{}", NAMES[i], e)?;
                        any = true;
                    }
                }
            }
            if !any {
                write!(f, "1")?;
            }
        }
        Ok(())
    }
}
