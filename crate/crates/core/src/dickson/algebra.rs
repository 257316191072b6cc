//! Membership in subalgebras generated by homogeneous polynomials, and the bounded
//! check that κ-invariant elements of 𝔅 lie in 𝔄.

use serde::Serialize;

use super::invariants::{NamedGenerators, KAPPA};
use super::linear::Echelon;
use super::poly::{Mono, Poly2};
use super::DicksonError;

/// A polynomial in named generators: a sum of exponent vectors over the generator list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenExpr {
    pub terms: Vec<Vec<u32>>,
}

impl GenExpr {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates the expression with the given generator values.
    pub fn eval(&self, gens: &[Poly2], arity: usize) -> Poly2 {
        let mut acc = Poly2::zero(arity);
        for t in &self.terms {
            let m = t
                .iter()
                .zip(gens)
                .fold(Poly2::one(arity), |p, (&e, g)| p.mul(&g.pow(e)));
            acc = acc.add(&m);
        }
        acc
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let f: Vec<String> = t
                    .iter()
                    .zip(names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, n)| {
                        if *e == 1 {
                            n.to_string()
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                if f.is_empty() {
                    "1".into()
                } else {
                    f.join(" ")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Member(GenExpr),
    NotMember,
}

/// Exponent vectors e with Σ e_i·degrees[i] = d.
pub fn weighted_monomials(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn go(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / degrees[i] {
            cur.push(e);
            go(degrees, i + 1, left - e * degrees[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, d, &mut Vec::new(), &mut out);
    out
}

/// The degrees of homogeneous generators.
pub fn degrees_of(gens: &[Poly2]) -> Result<Vec<u32>, DicksonError> {
    gens.iter()
        .map(|g| {
            g.homogeneous_degree()
                .filter(|&d| d > 0)
                .ok_or(DicksonError::NonHomogeneous)
        })
        .collect()
}

/// Values of all generator monomials of degree d, with their exponent vectors.
pub fn graded_basis(gens: &[Poly2], d: u32) -> Result<(Vec<Vec<u32>>, Vec<Poly2>), DicksonError> {
    let arity = gens.first().map_or(0, |g| g.arity());
    let degs = degrees_of(gens)?;
    let exps = weighted_monomials(&degs, d);
    let vals = exps
        .iter()
        .map(|e| {
            GenExpr {
                terms: vec![e.clone()],
            }
            .eval(gens, arity)
        })
        .collect();
    Ok((exps, vals))
}

/// Writes p as a polynomial in the generators, or certifies that no such expression
/// exists by solving the F_2-linear system in degree deg(p).
pub fn subalgebra_member(p: &Poly2, gens: &[Poly2]) -> Result<Membership, DicksonError> {
    if p.is_zero() {
        return Ok(Membership::Member(GenExpr { terms: vec![] }));
    }
    let d = p.homogeneous_degree().ok_or(DicksonError::NonHomogeneous)?;
    let (exps, vals) = graded_basis(gens, d)?;
    let rows: Vec<Vec<Mono>> = vals.iter().map(|v| v.terms().to_vec()).collect();
    let ech = Echelon::new(&rows);
    Ok(match ech.solve(p.terms()) {
        Some(idx) => Membership::Member(GenExpr {
            terms: idx.into_iter().map(|i| exps[i].clone()).collect(),
        }),
        None => Membership::NotMember,
    })
}

/// Counts for one degree of the bounded check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InADegree {
    pub degree: u32,
    pub b_dimension: usize,
    /// Dimension of {β : κ(β c4'^i) = β c4'^i} for i = 0, 1, 2.
    pub invariant_dimensions: [usize; 3],
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InAReport {
    pub max_degree: u32,
    pub degrees: Vec<InADegree>,
}

/// Basis (as index sets into `vals`) of {Σ λ_j vals[j] : f(Σ λ_j vals[j]) fixed by κ},
/// where f is multiplication by `mult`.
fn kappa_fixed(vals: &[Poly2], mult: &Poly2) -> Vec<Vec<usize>> {
    let rows: Vec<Vec<Mono>> = vals
        .iter()
        .map(|v| {
            let m = v.mul(mult);
            KAPPA.act(&m).add(&m).terms().to_vec()
        })
        .collect();
    Echelon::new(&rows).kernel().to_vec()
}

fn sum_of(vals: &[Poly2], idx: &[usize], arity: usize) -> Poly2 {
    idx.iter()
        .fold(Poly2::zero(arity), |acc, &i| acc.add(&vals[i]))
}

/// For every degree d ≤ max_degree: each β ∈ 𝔅_d with β·c4'^i κ-invariant (i ≤ 2)
/// equals β′·b8^i for some β′ ∈ 𝔄. The invariant subspace is computed as a kernel and
/// each of its basis vectors is tested.
pub fn verify_in_a_bounded(
    g: &NamedGenerators,
    max_degree: u32,
) -> Result<InAReport, DicksonError> {
    let b = g.b();
    let a = g.a();
    let mut degrees = Vec::new();
    for d in 0..=max_degree {
        let (_, vals) = graded_basis(&b, d)?;
        let mut dims = [0usize; 3];
        for i in 0..3u32 {
            let kernel = kappa_fixed(&vals, &g.c4p.pow(i));
            dims[i as usize] = kernel.len();
            let sub = 8 * i;
            let (_, avals) = if d >= sub {
                graded_basis(&a, d - sub)?
            } else {
                (vec![], vec![])
            };
            let b8i = g.b8.pow(i);
            let rows: Vec<Vec<Mono>> = avals.iter().map(|v| v.mul(&b8i).terms().to_vec()).collect();
            let ech = Echelon::new(&rows);
            for k in &kernel {
                let beta = sum_of(&vals, k, 4);
                if ech.solve(beta.terms()).is_none() {
                    return Err(DicksonError::MembershipFailure(format!(
                        "degree {d}, i = {i}: {beta}"
                    )));
                }
            }
        }
        degrees.push(InADegree {
            degree: d,
            b_dimension: vals.len(),
            invariant_dimensions: dims,
        });
    }
    Ok(InAReport {
        max_degree,
        degrees,
    })
}
