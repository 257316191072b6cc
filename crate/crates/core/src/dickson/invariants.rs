//! Dickson invariants, the named generators of the three invariant rings in
//! F_2[x, y, z, w], and the identities relating them.

use std::collections::HashSet;

use serde::Serialize;

use super::poly::{Poly2, MAX_VARS};
use super::DicksonError;

/// ∏_{α ∈ span(basis)} (w + α) for linear forms w, basis.
pub fn orbit_product(w: &Poly2, basis: &[Poly2]) -> Poly2 {
    let mut span = vec![Poly2::zero(w.arity())];
    for b in basis {
        let shifted: Vec<Poly2> = span.iter().map(|s| s.add(b)).collect();
        span.extend(shifted);
    }
    Poly2::product(
        w.arity(),
        span.iter().map(|a| w.add(a)).collect::<Vec<_>>().iter(),
    )
}

/// All Dickson invariants D_1, …, D_n of x_1, …, x_n, read off from the coefficients of
/// ∏_{v ∈ V_n}(t + v) = t^{2^n} + Σ_i D_i t^{2^{n-i}}.
pub fn dickson_all(n: usize) -> Result<Vec<Poly2>, DicksonError> {
    if n == 0 || n >= MAX_VARS {
        return Err(DicksonError::ArityOutOfRange);
    }
    let t = Poly2::var(n + 1, n);
    let basis: Vec<Poly2> = (0..n).map(|i| Poly2::var(n + 1, i)).collect();
    let prod = orbit_product(&t, &basis);
    (1..=n)
        .map(|i| prod.coefficient(n, 1 << (n - i)).truncate_arity(n))
        .collect()
}

/// D_i(x_1, …, x_n), of degree 2^n − 2^{n−i}.
pub fn dickson_inv(i: usize, n: usize) -> Result<Poly2, DicksonError> {
    if i == 0 || i > n {
        return Err(DicksonError::ArityOutOfRange);
    }
    Ok(dickson_all(n)?.swap_remove(i - 1))
}

/// D_i in the first k of the four variables x, y, z, w.
fn dickson4(i: usize, k: usize) -> Result<Poly2, DicksonError> {
    let map: Vec<usize> = (0..k).collect();
    Ok(dickson_inv(i, k)?.embed(4, &map))
}

/// The generators a_i of F_2[x,y,z,w]^{GL_4}, b_i of the invariants of the stabilizer of
/// ⟨x,y,z⟩, and c_i of the invariants of the group acting trivially modulo ⟨x,y⟩.
#[derive(Clone, Debug, Serialize)]
pub struct NamedGenerators {
    pub a8: Poly2,
    pub a12: Poly2,
    pub a14: Poly2,
    pub a15: Poly2,
    pub b4: Poly2,
    pub b6: Poly2,
    pub b7: Poly2,
    pub b8: Poly2,
    pub c2: Poly2,
    pub c3: Poly2,
    pub c4p: Poly2,
    pub c4pp: Poly2,
}

impl NamedGenerators {
    pub fn build() -> Result<NamedGenerators, DicksonError> {
        let [x, y, z, w] = <[Poly2; 4]>::try_from(Poly2::vars(4)).unwrap();
        Ok(NamedGenerators {
            a8: dickson4(1, 4)?,
            a12: dickson4(2, 4)?,
            a14: dickson4(3, 4)?,
            a15: dickson4(4, 4)?,
            b4: dickson4(1, 3)?,
            b6: dickson4(2, 3)?,
            b7: dickson4(3, 3)?,
            b8: orbit_product(&w, &[x.clone(), y.clone(), z.clone()]),
            c2: dickson4(1, 2)?,
            c3: dickson4(2, 2)?,
            c4p: orbit_product(&z, &[x.clone(), y.clone()]),
            c4pp: orbit_product(&w, &[x, y]),
        })
    }

    pub fn a(&self) -> [Poly2; 4] {
        [
            self.a8.clone(),
            self.a12.clone(),
            self.a14.clone(),
            self.a15.clone(),
        ]
    }

    pub fn b(&self) -> [Poly2; 4] {
        [
            self.b4.clone(),
            self.b6.clone(),
            self.b7.clone(),
            self.b8.clone(),
        ]
    }

    pub fn c(&self) -> [Poly2; 4] {
        [
            self.c2.clone(),
            self.c3.clone(),
            self.c4p.clone(),
            self.c4pp.clone(),
        ]
    }

    pub const A_NAMES: [&'static str; 4] = ["a8", "a12", "a14", "a15"];
    pub const B_NAMES: [&'static str; 4] = ["b4", "b6", "b7", "b8"];
    pub const C_NAMES: [&'static str; 4] = ["c2", "c3", "c4'", "c4''"];
}

/// Outcome of a named identity.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, lhs: &Poly2, rhs: &Poly2) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        holds: lhs == rhs,
    }
}

/// Fails with the first identity that does not hold.
pub fn require(
    checks: &[IdentityCheck],
    err: fn(String) -> DicksonError,
) -> Result<(), DicksonError> {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Err(err(c.name.clone())),
        None => Ok(()),
    }
}

/// The eight relations between the a, b and c generators.
pub fn verify_relations(g: &NamedGenerators) -> Vec<IdentityCheck> {
    vec![
        check("a8 = b8 + b4^2", &g.a8, &g.b8.add(&g.b4.square())),
        check(
            "a12 = b8 b4 + b6^2",
            &g.a12,
            &g.b8.mul(&g.b4).add(&g.b6.square()),
        ),
        check(
            "a14 = b8 b6 + b7^2",
            &g.a14,
            &g.b8.mul(&g.b6).add(&g.b7.square()),
        ),
        check("a15 = b8 b7", &g.a15, &g.b8.mul(&g.b7)),
        check("b4 = c4' + c2^2", &g.b4, &g.c4p.add(&g.c2.square())),
        check(
            "b6 = c2 c4' + c3^2",
            &g.b6,
            &g.c2.mul(&g.c4p).add(&g.c3.square()),
        ),
        check("b7 = c3 c4'", &g.b7, &g.c3.mul(&g.c4p)),
        check(
            "b8 = c4''(c4' + c4'')",
            &g.b8,
            &g.c4pp.mul(&g.c4p.add(&g.c4pp)),
        ),
    ]
}

/// Closed forms of the c generators and the Steenrod operations on them and on the
/// b and a generators.
pub fn verify_steenrod(g: &NamedGenerators) -> Vec<IdentityCheck> {
    let [x, y, z, w] = <[Poly2; 4]>::try_from(Poly2::vars(4)).unwrap();
    let zero = Poly2::zero(4);
    let zw = z.add(&w);
    let closed = |v: &Poly2| v.pow(4).add(&v.square().mul(&g.c2)).add(&v.mul(&g.c3));
    vec![
        check(
            "c2 = x^2 + xy + y^2",
            &g.c2,
            &x.square().add(&x.mul(&y)).add(&y.square()),
        ),
        check("c3 = xy(x + y)", &g.c3, &x.mul(&y).mul(&x.add(&y))),
        check("c4' = z^4 + z^2 c2 + z c3", &g.c4p, &closed(&z)),
        check("c4'' = w^4 + w^2 c2 + w c3", &g.c4pp, &closed(&w)),
        check(
            "c4' + c4'' = prod (z + w + α)",
            &g.c4p.add(&g.c4pp),
            &orbit_product(&zw, &[x.clone(), y.clone()]),
        ),
        check("c4' + c4'' closed form", &g.c4p.add(&g.c4pp), &closed(&zw)),
        check("Sq1 c2 = c3", &g.c2.sq(1), &g.c3),
        check("Sq1 c3 = 0", &g.c3.sq(1), &zero),
        check("Sq1 c4' = 0", &g.c4p.sq(1), &zero),
        check("Sq1 c4'' = 0", &g.c4pp.sq(1), &zero),
        check("Sq2 c3 = c2 c3", &g.c3.sq(2), &g.c2.mul(&g.c3)),
        check("Sq2 c4' = c2 c4'", &g.c4p.sq(2), &g.c2.mul(&g.c4p)),
        check("Sq3 c4' = c3 c4'", &g.c4p.sq(3), &g.c3.mul(&g.c4p)),
        check("Sq2 c4'' = c2 c4''", &g.c4pp.sq(2), &g.c2.mul(&g.c4pp)),
        check("Sq3 c4'' = c3 c4''", &g.c4pp.sq(3), &g.c3.mul(&g.c4pp)),
        check("b6 = Sq2 b4", &g.b4.sq(2), &g.b6),
        check("b7 = Sq1 b6", &g.b6.sq(1), &g.b7),
        check(
            "a12 = Sq4(b8 + b4^2)",
            &g.b8.add(&g.b4.square()).sq(4),
            &g.a12,
        ),
        check("a14 = Sq2 a12", &g.a12.sq(2), &g.a14),
        check("a15 = Sq1 a14", &g.a14.sq(1), &g.a15),
    ]
}

/// D_1(x_1..x_{n+1}) = ∏_{x ∈ V_n}(x_{n+1} + x) + D_1(x_1..x_n)²
///                   = x_{n+1}^{2^n} + Σ_i x_{n+1}^{2^{n-i}} D_i(x_1..x_n) + D_1(x_1..x_n)²,
/// for 1 ≤ n ≤ max_n.
pub fn verify_dickson_recursion(max_n: usize) -> Result<Vec<IdentityCheck>, DicksonError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let m = n + 1;
        let lower: Vec<usize> = (0..n).collect();
        let d_low: Vec<Poly2> = dickson_all(n)?.iter().map(|d| d.embed(m, &lower)).collect();
        let d1_high = dickson_inv(1, m)?;
        let top = Poly2::var(m, n);
        let basis: Vec<Poly2> = (0..n).map(|i| Poly2::var(m, i)).collect();
        let first = orbit_product(&top, &basis).add(&d_low[0].square());
        let mut second = top.pow(1 << n).add(&d_low[0].square());
        for (i, d) in d_low.iter().enumerate() {
            second = second.add(&top.pow(1 << (n - i - 1)).mul(d));
        }
        out.push(check(
            &format!("D1 recursion, n = {n}, product form"),
            &d1_high,
            &first,
        ));
        out.push(check(
            &format!("D1 recursion, n = {n}, expanded form"),
            &d1_high,
            &second,
        ));
    }
    Ok(out)
}

/// An element of GL_4(F_2) given by the images of x, y, z, w; row i is a bitmask of
/// the basis vectors occurring in the image of variable i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinMap(pub [u8; 4]);

impl LinMap {
    pub const IDENTITY: LinMap = LinMap([1, 2, 4, 8]);

    /// self ∘ o: first o, then self.
    pub fn compose(&self, o: &LinMap) -> LinMap {
        let apply = |v: u8| {
            (0..4)
                .filter(|&j| v >> j & 1 == 1)
                .fold(0, |acc, j| acc ^ self.0[j])
        };
        LinMap(o.0.map(apply))
    }

    /// The substitution p(x, y, z, w) ↦ p(g x, g y, g z, g w).
    pub fn act(&self, p: &Poly2) -> Poly2 {
        let vars = Poly2::vars(4);
        let images: Vec<Poly2> = self
            .0
            .iter()
            .map(|&m| {
                (0..4)
                    .filter(|&j| m >> j & 1 == 1)
                    .fold(Poly2::zero(4), |acc, j| acc.add(&vars[j]))
            })
            .collect();
        p.substitute(&images)
    }

    pub fn is_invertible(&self) -> bool {
        let mut seen = HashSet::new();
        for s in 0u8..16 {
            let v = (0..4)
                .filter(|&j| s >> j & 1 == 1)
                .fold(0, |acc, j| acc ^ self.0[j]);
            seen.insert(v);
        }
        seen.len() == 16
    }
}

/// Order of the group generated by the given maps.
pub fn group_order(gens: &[LinMap]) -> usize {
    let mut seen: HashSet<LinMap> = HashSet::from([LinMap::IDENTITY]);
    let mut frontier = vec![LinMap::IDENTITY];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let k = h.compose(&g);
            if seen.insert(k) {
                frontier.push(k);
            }
        }
    }
    seen.len()
}

const X: u8 = 1;
const Y: u8 = 2;
const Z: u8 = 4;
const W: u8 = 8;

/// Generators of GL_4(F_2): the transvection x ↦ x + y and the cycle x → y → z → w → x.
pub fn gl4_generators() -> Vec<LinMap> {
    vec![LinMap([X | Y, Y, Z, W]), LinMap([Y, Z, W, X])]
}

/// Generators of the stabilizer of ⟨x, y, z⟩ acting trivially on V/⟨x,y,z⟩.
pub fn gl31_generators() -> Vec<LinMap> {
    vec![
        LinMap([X | Y, Y, Z, W]),
        LinMap([Y, Z, X, W]),
        LinMap([X, Y, Z, W | X]),
    ]
}

/// Generators of the group preserving ⟨x, y⟩ and acting trivially modulo it.
pub fn gl22p_generators() -> Vec<LinMap> {
    vec![
        LinMap([X | Y, Y, Z, W]),
        LinMap([Y, X, Z, W]),
        LinMap([X, Y, Z | X, W]),
        LinMap([X, Y, Z, W | X]),
    ]
}

/// κ: z ↔ w, fixing x and y.
pub const KAPPA: LinMap = LinMap([X, Y, W, Z]);
/// z → w → z + w → z, fixing x and y.
pub const RHO: LinMap = LinMap([X, Y, W, Z | W]);

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InvarianceReport {
    pub group_orders: Vec<(String, usize)>,
    pub checks: Vec<IdentityCheck>,
}

/// Invariance of each generator family under generators of its group, the group
/// orders, and the Σ_3 action on the c generators.
pub fn verify_invariance(g: &NamedGenerators) -> InvarianceReport {
    let group_orders = vec![
        ("GL_4".to_string(), group_order(&gl4_generators())),
        ("GL^3_1".to_string(), group_order(&gl31_generators())),
        ("GL^2_2'".to_string(), group_order(&gl22p_generators())),
        ("Sigma_3".to_string(), group_order(&[KAPPA, RHO])),
    ];
    let mut checks = Vec::new();
    let families: [(&str, Vec<LinMap>, [Poly2; 4], [&str; 4]); 3] = [
        ("GL_4", gl4_generators(), g.a(), NamedGenerators::A_NAMES),
        ("GL^3_1", gl31_generators(), g.b(), NamedGenerators::B_NAMES),
        (
            "GL^2_2'",
            gl22p_generators(),
            g.c(),
            NamedGenerators::C_NAMES,
        ),
    ];
    for (group, gens, polys, names) in families {
        for (k, m) in gens.iter().enumerate() {
            for (p, name) in polys.iter().zip(names) {
                checks.push(check(
                    &format!("{group} generator {k} fixes {name}"),
                    &m.act(p),
                    p,
                ));
            }
        }
    }
    let triple = [g.c4p.clone(), g.c4pp.clone(), g.c4p.add(&g.c4pp)];
    for (label, m) in [("kappa", KAPPA), ("rho", RHO)] {
        checks.push(check(&format!("{label} fixes c2"), &m.act(&g.c2), &g.c2));
        checks.push(check(&format!("{label} fixes c3"), &m.act(&g.c3), &g.c3));
        let imgs: HashSet<Poly2> = triple.iter().map(|p| m.act(p)).collect();
        let holds = imgs == triple.iter().cloned().collect::<HashSet<_>>();
        checks.push(IdentityCheck {
            name: format!("{label} permutes {{c4', c4'', c4' + c4''}}"),
            holds,
        });
    }
    checks.push(check(
        "kappa sends c4' to c4''",
        &KAPPA.act(&g.c4p),
        &g.c4pp,
    ));
    InvarianceReport {
        group_orders,
        checks,
    }
}
