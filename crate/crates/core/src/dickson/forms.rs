//! Kähler differentials of the polynomial subalgebras 𝔄, 𝔅, ℭ over F_2.
//!
//! A form over generators g_1..g_m is a map from sorted index sets I to coefficients,
//! standing for Σ P_I dg_I. Coefficients are stored as polynomials in x, y, z, w.

use std::collections::BTreeMap;

use serde::Serialize;

use super::algebra::{graded_basis, subalgebra_member, GenExpr, Membership};
use super::invariants::{IdentityCheck, NamedGenerators, KAPPA};
use super::linear::Echelon;
use super::poly::{Mono, Poly2};
use super::DicksonError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffForm {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, Poly2>,
}

impl DiffForm {
    pub fn zero(degree: usize) -> DiffForm {
        DiffForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// P·dg_{i_1}⋯dg_{i_r}.
    pub fn term(coeff: Poly2, mut idx: Vec<usize>) -> DiffForm {
        idx.sort();
        let degree = idx.len();
        let mut f = DiffForm::zero(degree);
        if idx.windows(2).all(|w| w[0] != w[1]) && !coeff.is_zero() {
            f.terms.insert(idx, coeff);
        }
        f
    }

    pub fn add(&self, o: &DiffForm) -> DiffForm {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let s = terms.get(k).map_or(v.clone(), |p| p.add(v));
            if s.is_zero() {
                terms.remove(k);
            } else {
                terms.insert(k.clone(), s);
            }
        }
        DiffForm {
            degree: self.degree,
            terms,
        }
    }

    pub fn scale(&self, p: &Poly2) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (k, v) in &self.terms {
            out = out.add(&DiffForm::term(v.mul(p), k.clone()));
        }
        out
    }

    /// Exterior product; in characteristic 2 no signs occur and dg·dg = 0.
    pub fn wedge(&self, o: &DiffForm) -> DiffForm {
        let mut out = DiffForm::zero(self.degree + o.degree);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &o.terms {
                let mut idx = k1.clone();
                idx.extend(k2);
                out = out.add(&DiffForm::term(v1.mul(v2), idx));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sparse vector for linear algebra.
    fn keys(&self) -> Vec<(Vec<usize>, Mono)> {
        self.terms
            .iter()
            .flat_map(|(k, v)| v.terms().iter().map(move |m| (k.clone(), *m)))
            .collect()
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let d: Vec<String> = k.iter().map(|&i| format!("d{}", names[i])).collect();
                format!("({v}) {}", d.join(" "))
            })
            .collect();
        parts.join(" + ")
    }
}

/// d of a generator expression: Leibniz rule, so d(g^e) = e·g^{e-1} dg and squares vanish.
pub fn differential(expr: &GenExpr, gens: &[Poly2]) -> DiffForm {
    let arity = gens.first().map_or(4, |g| g.arity());
    let mut out = DiffForm::zero(1);
    for t in &expr.terms {
        for j in 0..t.len() {
            if t[j] % 2 == 0 {
                continue;
            }
            let mut e = t.clone();
            e[j] -= 1;
            let coeff = GenExpr { terms: vec![e] }.eval(gens, arity);
            out = out.add(&DiffForm::term(coeff, vec![j]));
        }
    }
    out
}

fn express(p: &Poly2, gens: &[Poly2]) -> Result<GenExpr, DicksonError> {
    match subalgebra_member(p, gens)? {
        Membership::Member(e) => Ok(e),
        Membership::NotMember => Err(DicksonError::IdentityFailure(format!(
            "{p} is not in the subalgebra"
        ))),
    }
}

/// d of each target written in the given generators.
pub fn differentials_in(targets: &[Poly2], gens: &[Poly2]) -> Result<Vec<DiffForm>, DicksonError> {
    targets
        .iter()
        .map(|t| Ok(differential(&express(t, gens)?, gens)))
        .collect()
}

/// da_8 = db_8, da_12 = b_4 db_8 + b_8 db_4, da_14 = b_6 db_8 + b_8 db_6,
/// da_15 = b_7 db_8 + b_8 db_7, and the corresponding formulas for db_i over ℭ.
pub fn verify_differential_identities(
    g: &NamedGenerators,
) -> Result<Vec<IdentityCheck>, DicksonError> {
    let b = g.b();
    let c = g.c();
    let da = differentials_in(&g.a(), &b)?;
    let db = differentials_in(&b, &c)?;
    let t = |p: &Poly2, i: usize| DiffForm::term(p.clone(), vec![i]);
    let one = Poly2::one(4);
    // indices: b4 = 0, b6 = 1, b7 = 2, b8 = 3; c2 = 0, c3 = 1, c4' = 2, c4'' = 3
    let want_a = [
        t(&one, 3),
        t(&g.b4, 3).add(&t(&g.b8, 0)),
        t(&g.b6, 3).add(&t(&g.b8, 1)),
        t(&g.b7, 3).add(&t(&g.b8, 2)),
    ];
    let want_b = [
        t(&one, 2),
        t(&g.c2, 2).add(&t(&g.c4p, 0)),
        t(&g.c3, 2).add(&t(&g.c4p, 1)),
        t(&g.c4pp, 2).add(&t(&g.c4p, 3)),
    ];
    let mut out = Vec::new();
    let an = NamedGenerators::A_NAMES;
    let bn = NamedGenerators::B_NAMES;
    for i in 0..4 {
        out.push(IdentityCheck {
            name: format!("d{} = {}", an[i], want_a[i].render(&bn)),
            holds: da[i] == want_a[i],
        });
    }
    for i in 0..4 {
        out.push(IdentityCheck {
            name: format!(
                "d{} = {}",
                bn[i],
                want_b[i].render(&NamedGenerators::C_NAMES)
            ),
            holds: db[i] == want_b[i],
        });
    }
    let sq = express(&g.b4.square(), &b)?;
    out.push(IdentityCheck {
        name: "d(b4^2) = 0".into(),
        holds: differential(&sq, &b).is_zero(),
    });
    Ok(out)
}

/// Index sets of size r in 0..4.
fn subsets(r: usize) -> Vec<Vec<usize>> {
    (0u32..16)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..4).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Applies κ to a form over ℭ: coefficients by z ↔ w, and dc4' ↔ dc4''.
fn kappa_form(f: &DiffForm) -> DiffForm {
    let swap = |i: usize| match i {
        2 => 3,
        3 => 2,
        i => i,
    };
    let mut out = DiffForm::zero(f.degree);
    for (k, v) in &f.terms {
        out = out.add(&DiffForm::term(
            KAPPA.act(v),
            k.iter().map(|&i| swap(i)).collect(),
        ));
    }
    out
}

/// Image in Ω^r_ℭ of the basis {m·dg_I} of Ω^r_R in total degree D, where dg_i are
/// the images of the generators' differentials.
fn image_basis(
    gens: &[Poly2],
    dg: &[DiffForm],
    r: usize,
    total: u32,
) -> Result<Vec<DiffForm>, DicksonError> {
    let degs: Vec<u32> = gens
        .iter()
        .map(|g| g.homogeneous_degree().unwrap())
        .collect();
    let mut out = Vec::new();
    for idx in subsets(r) {
        let dsum: u32 = idx.iter().map(|&i| degs[i]).sum();
        if dsum > total {
            continue;
        }
        let (_, vals) = graded_basis(gens, total - dsum)?;
        let wedge = idx
            .iter()
            .fold(DiffForm::term(Poly2::one(4), vec![]), |acc, &i| {
                acc.wedge(&dg[i])
            });
        for v in vals {
            out.push(wedge.scale(&v));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PullbackDegree {
    pub form_degree: usize,
    pub total_degree: u32,
    pub b_dimension: usize,
    pub kappa_invariant: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PullbackReport {
    pub max_degree: u32,
    pub max_form_degree: usize,
    pub degrees: Vec<PullbackDegree>,
}

/// In each form degree r ≤ max_r and total degree ≤ max_degree: Ω^r_𝔅 → Ω^r_ℭ is
/// injective, and every κ-invariant element of its image lies in the image of Ω^r_𝔄.
pub fn verify_pullback(
    g: &NamedGenerators,
    max_degree: u32,
    max_r: usize,
) -> Result<PullbackReport, DicksonError> {
    let a = g.a();
    let b = g.b();
    let c = g.c();
    let db = differentials_in(&b, &c)?;
    let da_b = differentials_in(&a, &b)?;
    // da_i as forms over ℭ: substitute db_j
    let da: Vec<DiffForm> = da_b
        .iter()
        .map(|f| {
            f.terms
                .iter()
                .fold(DiffForm::zero(1), |acc, (k, v)| acc.add(&db[k[0]].scale(v)))
        })
        .collect();
    let mut degrees = Vec::new();
    for r in 0..=max_r.min(4) {
        for total in 0..=max_degree {
            let bb = image_basis(&b, &db, r, total)?;
            if bb.is_empty() {
                continue;
            }
            let rows: Vec<Vec<(Vec<usize>, Mono)>> = bb.iter().map(|f| f.keys()).collect();
            let ech_b = Echelon::new(&rows);
            if ech_b.rank() != bb.len() {
                return Err(DicksonError::PullbackFailure(format!(
                    "Ω^{r}_B → Ω^{r}_C not injective in degree {total}"
                )));
            }
            let moved: Vec<Vec<(Vec<usize>, Mono)>> =
                bb.iter().map(|f| kappa_form(f).add(f).keys()).collect();
            let kernel = Echelon::new(&moved).kernel().to_vec();
            let aa = image_basis(&a, &da, r, total)?;
            let ech_a = Echelon::new(&aa.iter().map(|f| f.keys()).collect::<Vec<_>>());
            for k in &kernel {
                let omega = k.iter().fold(DiffForm::zero(r), |acc, &i| acc.add(&bb[i]));
                if ech_a.solve(&omega.keys()).is_none() {
                    return Err(DicksonError::PullbackFailure(format!(
                        "r = {r}, degree {total}: {}",
                        omega.render(&NamedGenerators::C_NAMES)
                    )));
                }
            }
            degrees.push(PullbackDegree {
                form_degree: r,
                total_degree: total,
                b_dimension: bb.len(),
                kappa_invariant: kernel.len(),
            });
        }
    }
    Ok(PullbackReport {
        max_degree,
        max_form_degree: max_r,
        degrees,
    })
}
