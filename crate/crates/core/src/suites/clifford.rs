//! Randomized self-test of the Clifford algebra, spinor norm, Spin lifts and the
//! exceptional isomorphisms ρ_3, ρ_4.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SuiteError;
use crate::cliffspin::{pi_action, CliffordElement, ExceptionalIsos, OrthMatrix, QuadSpace};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{sl2_elements, M2};

type Fe = FieldElement;

/// Number of checks of one kind and how many failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
}

impl Tally {
    fn new(name: impl Into<String>) -> Tally {
        Tally {
            name: name.into(),
            ..Tally::default()
        }
    }

    fn record(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordSelftest {
    pub q: u64,
    pub seed: u64,
    pub tallies: Vec<Tally>,
}

impl CliffordSelftest {
    pub fn passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failures == 0 && t.checks > 0)
    }
}

fn random_element(
    space: &Arc<QuadSpace>,
    rng: &mut ChaCha8Rng,
) -> Result<CliffordElement, SuiteError> {
    let f = space.field();
    let coeffs = (0..1 << space.dim())
        .map(|_| f.random(space.level(), rng))
        .collect();
    Ok(CliffordElement::from_coeffs(space, coeffs)?)
}

fn random_anisotropic(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    loop {
        let v: Vec<Fe> = (0..space.dim())
            .map(|_| space.field().random(space.level(), rng))
            .collect();
        if !space.norm(&v).is_zero() {
            return v;
        }
    }
}

/// A product of an even number of random reflections, with the class of the product
/// of their norms.
fn random_so(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> (OrthMatrix, bool) {
    let f = space.field().clone();
    let mut g = OrthMatrix::identity(space);
    let mut s = Fe::ONE;
    for _ in 0..2 * rng.gen_range(1..=space.dim()) {
        let v = random_anisotropic(space, rng);
        s = f.mul(s, space.norm(&v));
        g = g.compose(&OrthMatrix::reflection(space, &v));
    }
    (g, f.is_square(s, space.level()))
}

fn random_omega(space: &Arc<QuadSpace>, rng: &mut ChaCha8Rng) -> OrthMatrix {
    loop {
        let (g, square) = random_so(space, rng);
        if square {
            return g;
        }
    }
}

/// Runs the self-test over F_q, q = p^m, on V_3, V_4 and V_7 = V_4 ⊥ V_3, with
/// `samples` random instances of each check per space.
pub fn clifford_selftest(
    p: u64,
    m: u32,
    samples: usize,
    seed: u64,
) -> Result<CliffordSelftest, SuiteError> {
    let f = Arc::new(FieldSpec::build(p, m, 0)?);
    let q = f.size(0);
    let iso = ExceptionalIsos::new(f.clone(), 0)?;
    let spaces = [
        iso.v3().clone(),
        iso.v4().clone(),
        QuadSpace::direct_sum(iso.v4(), iso.v3()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = Tally::new("associativity");
    let mut anti = Tally::new("J(ab) = J(b)J(a)");
    let mut theta = Tally::new("spinor norm of reflection products");
    let mut factor = Tally::new("reflection factorization replays");
    let mut lift = Tally::new("pi(lift(g)) = g and J(u)u = 1");
    for space in &spaces {
        for _ in 0..samples {
            let (a, b, c) = (
                random_element(space, &mut rng)?,
                random_element(space, &mut rng)?,
                random_element(space, &mut rng)?,
            );
            assoc.record(a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?);
            anti.record(a.mul(&b)?.reversal() == b.reversal().mul(&a.reversal())?);
            let (g, square) = random_so(space, &mut rng);
            theta.record(g.spinor_norm()? == square);
            let replay = g
                .reflect_factor()
                .iter()
                .fold(OrthMatrix::identity(space), |h, v| {
                    h.compose(&OrthMatrix::reflection(space, v))
                });
            factor.record(replay == g);
            let w = random_omega(space, &mut rng);
            let u = w.lift_to_spin()?;
            let one = CliffordElement::one(space);
            lift.record(
                u.pi() == &w
                    && pi_action(u.element()).as_ref() == Some(&w)
                    && u.element().reversal().mul(u.element())? == one,
            );
        }
    }
    let mut hom = Tally::new("rho_3, rho_4 lifts are homomorphisms");
    let mut kernel = Tally::new("kernels of rho_3, rho_4 and their lifts");
    let sl = sl2_elements(&f, 0);
    for _ in 0..samples {
        let pick = |rng: &mut ChaCha8Rng| sl[rng.gen_range(0..sl.len())];
        let (a, b, c, d) = (
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
        );
        let r3 = iso.rho3_tilde(&a)?.mul(&iso.rho3_tilde(&b)?);
        hom.record(r3.element() == iso.rho3_tilde(&a.mul(&f, &b))?.element());
        let r4 = iso.rho4_tilde(&a, &b)?.mul(&iso.rho4_tilde(&c, &d)?);
        hom.record(r4.element() == iso.rho4_tilde(&a.mul(&f, &c), &b.mul(&f, &d))?.element());
        hom.record(iso.rho3(&a)?.in_omega() && iso.rho4(&a, &b)?.in_omega());
    }
    let one3 = CliffordElement::one(iso.v3());
    let mut k3 = 0;
    let mut k3t = 0;
    let mut img3 = HashSet::new();
    for a in &sl {
        let m = iso.rho3(a)?;
        k3 += usize::from(m.is_identity());
        k3t += usize::from(iso.rho3_tilde(a)?.element() == &one3);
        img3.insert(m.mat().clone());
    }
    kernel.record(k3 == 2);
    kernel.record(k3t == 1);
    let mut k4 = 0;
    let mut img4 = HashSet::new();
    for a in &sl {
        for b in &sl {
            let m = iso.rho4(a, b)?;
            k4 += usize::from(m.is_identity());
            img4.insert(m.mat().clone());
        }
    }
    kernel.record(k4 == 2);
    let minus = M2::identity().neg(&f);
    let m1 = CliffordElement::scalar(iso.v4(), f.from_int(-1));
    kernel.record(iso.rho4_tilde(&minus, &minus)?.element() == &m1);
    // |Ω_3(q)| = |PSL_2(q)| and |Ω_4^+(q)| = |SL_2(q)|²/2; the value sets of the
    // homomorphisms are the images
    let mut images = Tally::new("orders of rho_3, rho_4 images");
    images.record(img3.len() == sl.len() / 2);
    images.record(img4.len() == sl.len() * sl.len() / 2);
    Ok(CliffordSelftest {
        q,
        seed,
        tallies: vec![assoc, anti, theta, factor, lift, hom, kernel, images],
    })
}
