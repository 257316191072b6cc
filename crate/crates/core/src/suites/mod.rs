//! Verification suites, run from a configuration and recorded as a certificate.

mod clifford;
mod structure;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use clifford::{clifford_selftest, CliffordSelftest, Tally};
pub use structure::{elemab_report, sylow_report, ElemAbReport, Rank4Entry, SylowReport};

use crate::cert::{CertError, Certificate, ClaimRecord, Status};
use crate::cliffspin::{odd_index_ratios, CliffError};
use crate::dickson::{self, DicksonError, NamedGenerators};
use crate::fusion::{
    centric_radical, check_gamma_preserves_fusion, check_gamma_structure,
    check_involution_criterion, check_involution_transitivity, check_rk3_identity, generate_fusion,
    replay_involution_certificate, CentralizerWitness, FusionError, FusionHandle, GammaData,
    InvolutionCertificate, SmallFusion, H_TAU_LIMIT,
};
use crate::gf::GfError;
use crate::group::BitSet;
use crate::spin7::{cache_dir, load_or_build, Spin7Context, Spin7Error, SylowGroup};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Clifford(#[from] CliffError),
    #[error(transparent)]
    Spin7(#[from] Spin7Error),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Dickson(#[from] DicksonError),
    #[error(transparent)]
    Cert(#[from] CertError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CliffordSelftest,
    BuildSylow,
    ClassifyElemab,
    FindU,
    FusionCore,
    SaturationSmall,
    Dickson,
    Orders,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::CliffordSelftest,
        Suite::BuildSylow,
        Suite::ClassifyElemab,
        Suite::FindU,
        Suite::FusionCore,
        Suite::SaturationSmall,
        Suite::Dickson,
        Suite::Orders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CliffordSelftest => "clifford-selftest",
            Suite::BuildSylow => "build-sylow",
            Suite::ClassifyElemab => "classify-elemab",
            Suite::FindU => "find-u",
            Suite::FusionCore => "fusion-core",
            Suite::SaturationSmall => "saturation-small",
            Suite::Dickson => "dickson",
            Suite::Orders => "orders",
        }
    }

    /// Prefix shared by the claim ids the suite emits.
    fn claim_prefix(self) -> &'static str {
        match self {
            Suite::CliffordSelftest => "clifford.",
            Suite::BuildSylow => "sylow.",
            Suite::ClassifyElemab => "elemab.",
            Suite::FindU => "find-u.",
            Suite::FusionCore => "fusion.",
            Suite::SaturationSmall => "small.",
            Suite::Dickson => "dickson.",
            Suite::Orders => "orders.",
        }
    }

    fn of_claim(claim_id: &str) -> Option<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| claim_id.starts_with(s.claim_prefix()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Suite, SuiteError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| SuiteError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub q: u64,
    pub n: u32,
    pub suites: Vec<Suite>,
    /// Degree bound for the membership and pullback checks.
    pub max_degree: u32,
    /// Largest form degree in the pullback check.
    pub form_degree: usize,
    /// Random instances per check in the Clifford self-test.
    pub samples: usize,
    /// Random (P, g) pairs in the Γ-preservation check.
    pub gamma_samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            q: 3,
            n: 1,
            suites: Suite::ALL.to_vec(),
            max_degree: 20,
            form_degree: 4,
            samples: 100,
            gamma_samples: 20,
            seed: 7,
            cache_dir: None,
            timings: false,
        }
    }
}

/// Largest degree bound accepted for the polynomial checks.
pub const MAX_DEGREE_LIMIT: u32 = 30;

impl RunConfig {
    /// (p, m) with q = p^m; q must be one of 3, 5, 7, 9.
    pub fn field_params(&self) -> Result<(u64, u32), SuiteError> {
        let pm = match self.q {
            3 | 5 | 7 => (self.q, 1),
            9 => (3, 2),
            q => {
                return Err(SuiteError::Config(format!(
                    "q = {q} is not in {{3, 5, 7, 9}}"
                )))
            }
        };
        if self.n == 0 {
            return Err(SuiteError::Config("n must be positive".into()));
        }
        if self.max_degree > MAX_DEGREE_LIMIT {
            return Err(SuiteError::Config(format!(
                "max degree {} exceeds {MAX_DEGREE_LIMIT}",
                self.max_degree
            )));
        }
        if self.form_degree > 4 {
            return Err(SuiteError::Config("form degree is at most 4".into()));
        }
        if self.suites.is_empty() {
            return Err(SuiteError::Config("no suites selected".into()));
        }
        Ok(pm)
    }

    fn echo(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

enum State {
    Empty,
    Sylow(Box<(Spin7Context, SylowGroup)>),
    Fusion(Box<FusionHandle>),
}

/// Lazily built S(q^n) and fusion data shared between suites.
struct Session<'a> {
    config: &'a RunConfig,
    state: State,
}

impl<'a> Session<'a> {
    fn new(config: &'a RunConfig) -> Session<'a> {
        Session {
            config,
            state: State::Empty,
        }
    }

    fn build_sylow(&self) -> Result<(Spin7Context, SylowGroup), SuiteError> {
        let (p, m) = self.config.field_params()?;
        let ctx = Spin7Context::build(p, m, self.config.n)?;
        let dir = self.config.cache_dir.clone().or_else(cache_dir);
        let s = load_or_build(&ctx, dir.as_deref())?;
        Ok((ctx, s))
    }

    fn sylow(&mut self) -> Result<(&Spin7Context, &SylowGroup), SuiteError> {
        if matches!(self.state, State::Empty) {
            self.state = State::Sylow(Box::new(self.build_sylow()?));
        }
        match &self.state {
            State::Sylow(b) => Ok((&b.0, &b.1)),
            State::Fusion(h) => Ok((h.ctx(), h.s())),
            State::Empty => unreachable!(),
        }
    }

    fn fusion(&mut self) -> Result<&FusionHandle, SuiteError> {
        let state = std::mem::replace(&mut self.state, State::Empty);
        self.state = match state {
            State::Fusion(h) => State::Fusion(h),
            State::Sylow(b) => {
                let (ctx, s) = *b;
                State::Fusion(Box::new(generate_fusion(ctx, s)?))
            }
            State::Empty => {
                let (ctx, s) = self.build_sylow()?;
                State::Fusion(Box::new(generate_fusion(ctx, s)?))
            }
        };
        match &self.state {
            State::Fusion(h) => Ok(h),
            _ => unreachable!(),
        }
    }

    /// A handle for a recorded unit u, without repeating the unit search.
    fn fusion_with_unit(&mut self, u: u64) -> Result<FusionHandle, SuiteError> {
        let (ctx, s) = self.build_sylow()?;
        let h_tau = ctx.h_elements(true, H_TAU_LIMIT)?;
        let gamma = GammaData::new(&ctx, u)?;
        Ok(FusionHandle::with_gamma(ctx, s, h_tau, gamma))
    }
}

fn unknown_scale(e: &SuiteError) -> bool {
    matches!(
        e,
        SuiteError::Spin7(Spin7Error::UnsupportedScale)
            | SuiteError::Fusion(FusionError::Spin7(Spin7Error::UnsupportedScale))
            | SuiteError::Fusion(FusionError::UnknownConjugates)
    )
}

/// Runs one claim and records its status; errors become failures (or unknown when the
/// scale is out of reach).
fn claim(
    config: &RunConfig,
    id: &str,
    statement: &str,
    f: impl FnOnce() -> Result<(bool, Value), SuiteError>,
) -> ClaimRecord {
    let start = Instant::now();
    let (status, witnesses) = match f() {
        Ok((true, w)) => (Status::Pass, w),
        Ok((false, w)) => (Status::Fail, w),
        Err(e) => {
            let status = if unknown_scale(&e) {
                Status::Unknown
            } else {
                Status::Fail
            };
            (status, json!({ "error": e.to_string() }))
        }
    };
    ClaimRecord {
        claim_id: id.to_string(),
        statement: statement.to_string(),
        status,
        witnesses,
        wall_ms: config.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn suite_records(
    session: &mut Session,
    suite: Suite,
    wants: &dyn Fn(&str) -> bool,
) -> Vec<ClaimRecord> {
    let config = session.config;
    let mut out = Vec::new();
    let mut push = |r: ClaimRecord| out.push(r);
    match suite {
        Suite::CliffordSelftest => {
            push(claim(
                config,
                "clifford.selftest",
                "Clifford products associate, J is an antiautomorphism, the spinor norm of a reflection product is the class of the product of norms, lifts to Spin cover Ω, and ρ_3, ρ_4 lift to homomorphisms with the expected kernels and image orders",
                || {
                    let (p, m) = config.field_params()?;
                    let r = clifford_selftest(p, m, config.samples, config.seed)?;
                    Ok((r.passed(), to_value(&r)))
                },
            ));
        }
        Suite::BuildSylow => {
            let r = session.sylow().map(|(ctx, s)| sylow_report(ctx, s));
            push(claim(
                config,
                "sylow.structure",
                "S(q^n) has the 2-part of |Spin_7(q^n)| as order, is generated by its listed generators, contains S_0 with index 2, normalizes U, has R_0 ≅ (C_4)^3, and τ is an involution swapping coordinates",
                || {
                    let r = r?;
                    Ok((r.passed(), to_value(&r)))
                },
            ));
        }
        Suite::ClassifyElemab => {
            let r = session.fusion().and_then(elemab_report);
            push(claim(
                config,
                "elemab.rank4",
                "every rank-4 elementary abelian E ∋ U in S is H-conjugate to a standard E_ijk or E'_ijk, with the type and x_C given by the closed forms, and x_C is Γ_1-equivariant",
                || {
                    let r = r?;
                    Ok((r.passed(), to_value(&r)))
                },
            ));
        }
        Suite::FindU => {
            let r = session.fusion().and_then(|h| {
                h.unit_report()
                    .cloned()
                    .ok_or(SuiteError::Fusion(FusionError::NoUnitFound))
            });
            push(claim(
                config,
                "find-u.unit",
                "some u ≡ 1 (mod 4) gives ⟨Aut_Spin(R_0), γ_u⟩ of order 336 with center {±I} and simple central quotient; all candidates' closure orders are recorded",
                || {
                    let r = r?;
                    let ok = !r.accepted.is_empty()
                        && r.candidates.iter().filter(|c| c.accepted).all(|c| {
                            c.closure_order == 336 && c.center_order == 2 && c.quotient_simple
                        });
                    Ok((ok, to_value(&r)))
                },
            ));
        }
        Suite::FusionCore => {
            let h = match session.fusion() {
                Ok(h) => h,
                Err(e) => {
                    let msg = e.to_string();
                    for id in FUSION_CLAIMS {
                        if wants(id) {
                            push(claim(config, id, "fusion data unavailable", || {
                                Err(SuiteError::Config(msg.clone()))
                            }));
                        }
                    }
                    return out;
                }
            };
            fusion_records(config, h, wants, &mut push);
        }
        Suite::SaturationSmall => small_records(config, &mut push),
        Suite::Dickson => dickson_records(config, &mut push),
        Suite::Orders => {
            push(claim(
                config,
                "orders.odd-index",
                "the index ratios of orthogonal groups used to exclude odd-dimensional and nonsquare-discriminant irreducibles, and [Spin_7(q^n) : H(q^n)⟨τ⟩], are odd integers for n ≤ 3",
                || {
                    config.field_params()?;
                    let r = odd_index_ratios(config.q, 3);
                    Ok((r.iter().all(|x| x.passed()), to_value(&r)))
                },
            ));
        }
    }
    out.retain(|r| wants(&r.claim_id));
    out
}

const FUSION_CLAIMS: [&str; 7] = [
    "fusion.involution-transitivity",
    "fusion.rk3-identity",
    "fusion.gamma-structure",
    "fusion.gamma-preserves-fusion",
    "fusion.centralizers-to-z",
    "fusion.z-centralizer-saturated",
    "fusion.centric-radical",
];

fn fusion_records(
    config: &RunConfig,
    h: &FusionHandle,
    wants: &dyn Fn(&str) -> bool,
    push: &mut dyn FnMut(ClaimRecord),
) {
    let u = h.gamma().u;
    if wants(FUSION_CLAIMS[0]) {
        push(claim(
            config,
            FUSION_CLAIMS[0],
            "every involution of S is carried to z by a replayable composite of H⟨τ⟩-conjugations, Spin conjugations and γ̂_u",
            || {
                let c = check_involution_transitivity(h)?;
                replay_involution_certificate(h, &c)?;
                Ok((true, json!({ "u": u, "certificate": c })))
            },
        ));
    }
    if wants(FUSION_CLAIMS[1]) {
        push(claim(
            config,
            FUSION_CLAIMS[1],
            "Aut_F(R_0) has order 336 and its z-stabilizer is Aut_Spin(R_0); the same set equality holds for R_1; rank-3 subgroups E ∋ U outside R_0 with elementary abelian C_S(E) have automorphisms fixing x_C",
            || {
                let r = check_rk3_identity(h)?;
                let ok = r.verify().is_ok() && r.aut_f_r0 == 336 && r.r0_z_stabilizer == 48;
                Ok((ok, to_value(&r)))
            },
        ));
    }
    if wants(FUSION_CLAIMS[2]) {
        push(claim(
            config,
            FUSION_CLAIMS[2],
            "the z-stabilizer in Γ equals ⟨Inn(S_0), c_τ⟩ and Aut_{N(U)}(S_0), and z has orbit U∖1",
            || {
                let r = check_gamma_structure(h)?;
                Ok((r.verify().is_ok(), to_value(&r)))
            },
        ));
    }
    if wants(FUSION_CLAIMS[3]) {
        push(claim(
            config,
            FUSION_CLAIMS[3],
            "γ̂_u and δ̂_u carry Spin-fusion in S_0 to Spin-fusion on sampled pairs (P, g)",
            || {
                let r = check_gamma_preserves_fusion(h, config.gamma_samples, config.seed)?;
                Ok((
                    r.verify().is_ok(),
                    json!({ "seed": config.seed, "report": r }),
                ))
            },
        ));
    }
    let needs_criterion = wants(FUSION_CLAIMS[4]) || wants(FUSION_CLAIMS[5]);
    let criterion = needs_criterion.then(|| check_involution_criterion(h));
    if wants(FUSION_CLAIMS[4]) {
        let p = criterion.as_ref().expect("computed above");
        push(claim(
            config,
            FUSION_CLAIMS[4],
            "for every involution x there is a morphism C_S(x) → S of the fusion system sending x to z",
            || match p {
                Ok(p) => Ok((true, json!({ "u": u, "witnesses": p.centralizer_maps }))),
                Err(e) => Err(e.clone().into()),
            },
        ));
    }
    if wants(FUSION_CLAIMS[5]) {
        let p = criterion.as_ref().expect("computed above");
        let mut r = claim(
            config,
            FUSION_CLAIMS[5],
            "C_F(z) = F_S(Spin_7(q^n)) is saturated, as the fusion system of a finite group",
            || match p {
                Ok(p) => Ok((true, json!({ "reason": p.saturation_note }))),
                Err(e) => Err(e.clone().into()),
            },
        );
        if r.status == Status::Pass {
            r.status = Status::Trusted;
        }
        push(r);
    }
    if wants(FUSION_CLAIMS[6]) {
        push(claim(
            config,
            FUSION_CLAIMS[6],
            "S and R_1 are centric and radical, R_0 is centric but not radical, ⟨z⟩ is not centric",
            || {
                let nm = h.s().named();
                let z = BitSet::from_iter(h.s().order(), [0, nm.z]);
                let mut rows = Vec::new();
                let mut ok = true;
                for (name, p, centric, radical) in [
                    ("S", h.s().all(), true, true),
                    ("R_0", nm.r0.clone(), true, false),
                    ("R_1", nm.r1.clone(), true, true),
                    ("<z>", z, false, false),
                ] {
                    let r = centric_radical(h, &p, 5000)?;
                    ok &= r.centric == centric && (!centric || r.radical == radical);
                    rows.push(json!({ "subgroup": name, "result": r }));
                }
                Ok((ok, Value::Array(rows)))
            },
        ));
    }
}

type SmallBuilder = fn() -> Result<SmallFusion, FusionError>;

fn small_records(config: &RunConfig, push: &mut dyn FnMut(ClaimRecord)) {
    let systems: [(&str, &str, SmallBuilder); 3] = [
        ("small.sl2-3", "F_{Q_8}(SL_2(3))", || SmallFusion::sl2(3, 0)),
        ("small.sl2-9", "F_{Q_16}(SL_2(9))", || {
            SmallFusion::sl2(3, 1)
        }),
        ("small.c2", "F_{C_2}(C_2)", || Ok(SmallFusion::trivial_c2())),
    ];
    for (id, name, build) in systems {
        push(claim(
            config,
            id,
            &format!("{name} satisfies the saturation axioms and the involution criterion"),
            || {
                let f = build()?;
                let axioms = f.check_saturation_axioms();
                let criterion = f.check_involution_criterion(&f.central_involutions());
                let ok = axioms.is_ok() && criterion.passed();
                Ok((
                    ok,
                    json!({
                        "subgroups": f.subgroups().len(),
                        "morphisms": f.morphism_count(),
                        "axioms": axioms.map_err(|e| e.to_string()),
                        "criterion": criterion,
                    }),
                ))
            },
        ));
    }
    push(claim(
        config,
        "small.broken-control",
        "F_{Q_8}(SL_2(3)) with one outer automorphism of Q_8 removed fails both the axioms and the criterion",
        || {
            let f = SmallFusion::sl2(3, 0)?
                .without_one_outer_automorphism()
                .ok_or(SuiteError::Fusion(FusionError::Internal("no outer automorphism to remove")))?;
            let axioms = f.check_saturation_axioms();
            let criterion = f.check_involution_criterion(&f.central_involutions());
            Ok((
                axioms.is_err() && !criterion.passed(),
                json!({
                    "axioms": axioms.map_err(|e| e.to_string()),
                    "criterion": criterion,
                }),
            ))
        },
    ));
}

fn all_hold(checks: &[dickson::IdentityCheck]) -> bool {
    checks.iter().all(|c| c.holds)
}

fn dickson_records(config: &RunConfig, push: &mut dyn FnMut(ClaimRecord)) {
    let g = match NamedGenerators::build() {
        Ok(g) => g,
        Err(e) => {
            push(claim(
                config,
                "dickson.generators",
                "the named generators are defined",
                || Err(e.into()),
            ));
            return;
        }
    };
    push(claim(
        config,
        "dickson.relations",
        "the eight relations between the a, b and c generators hold exactly",
        || {
            let r = dickson::verify_relations(&g);
            Ok((all_hold(&r), to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.steenrod",
        "closed forms of the c generators and the Steenrod operations relating the generators hold exactly",
        || {
            let r = dickson::verify_steenrod(&g);
            Ok((all_hold(&r), to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.recursion",
        "∏_{v∈V_n}(t+v) = t^{2^n} + Σ D_i t^{2^{n−i}} and the Dickson recursion hold for n ≤ 4",
        || {
            let r = dickson::verify_dickson_recursion(4)?;
            Ok((all_hold(&r), to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.invariance",
        "the a, b and c generators are fixed by generators of GL_4(2), GL^3_1(2) and GL^2_2'(2), whose closures have orders 20160, 1344 and 96; Σ_3 permutes {c4', c4'', c4' + c4''}",
        || {
            let r = dickson::verify_invariance(&g);
            let orders: Vec<usize> = r.group_orders.iter().map(|(_, o)| *o).collect();
            Ok((all_hold(&r.checks) && orders == [20160, 1344, 96, 6], to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.in-a",
        "every β ∈ 𝔅 of bounded degree with β·c4'^i κ-invariant (i ≤ 2) lies in b8^i·𝔄",
        || {
            let r = dickson::verify_in_a_bounded(&g, config.max_degree)?;
            Ok((true, to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.differentials",
        "da_i in terms of db_j and db_i in terms of dc_j follow from the relations by the Leibniz rule",
        || {
            let r = dickson::verify_differential_identities(&g)?;
            Ok((all_hold(&r), to_value(&r)))
        },
    ));
    push(claim(
        config,
        "dickson.pullback",
        "Ω_𝔅 → Ω_ℭ is injective and every κ-invariant form in its image comes from Ω_𝔄, in bounded degree",
        || {
            let r = dickson::verify_pullback(&g, config.max_degree, config.form_degree)?;
            Ok((true, to_value(&r)))
        },
    ));
}

/// Runs the configured suites in order.
pub fn run(config: &RunConfig) -> Result<Certificate, SuiteError> {
    config.field_params()?;
    let mut session = Session::new(config);
    let suites: BTreeSet<Suite> = config.suites.iter().copied().collect();
    let mut records = Vec::new();
    for suite in Suite::ALL.into_iter().filter(|s| suites.contains(s)) {
        records.extend(suite_records(&mut session, suite, &|_| true));
    }
    Ok(Certificate::new(config.echo(), records))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub claim_id: String,
    pub recorded: Status,
    pub replayed: Status,
    /// "witness" when the stored witness was checked directly, "recompute" when the
    /// claim was recomputed and its witness compared.
    pub method: &'static str,
    pub reproduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub digest_ok: bool,
    pub outcomes: Vec<ReplayOutcome>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.digest_ok && self.outcomes.iter().all(|o| o.reproduced)
    }
}

type WitnessCheck = Box<dyn Fn(&FusionHandle) -> Result<(), SuiteError>>;

#[derive(Deserialize)]
struct InvolutionWitnessBlob {
    u: u64,
    certificate: InvolutionCertificate,
}

#[derive(Deserialize)]
struct CentralizerBlob {
    u: u64,
    witnesses: Vec<CentralizerWitness>,
}

fn blob<T: for<'de> Deserialize<'de>>(r: &ClaimRecord) -> Result<T, SuiteError> {
    serde_json::from_value(r.witnesses.clone())
        .map_err(|_| CertError::WitnessCorrupt(r.claim_id.clone()).into())
}

/// Checks a centralizer witness: the domain is x followed by generators of C_S(x), the
/// chain replays, and x goes to z.
fn replay_centralizer_witnesses(
    h: &FusionHandle,
    ws: &[CentralizerWitness],
) -> Result<(), SuiteError> {
    let s = h.s();
    let g = s.group();
    let z = h.ctx().z();
    let want: HashSet<u32> = h.involutions().into_iter().collect();
    let mut got = HashSet::new();
    for w in ws {
        let xi = s
            .index_of(&w.x)
            .ok_or(FusionError::WitnessCorrupt("x outside S".into()))?;
        let cent = g.centralizer(&s.all(), &BitSet::from_iter(s.order(), [xi]));
        let dom = s.generate(&w.morphism.domain);
        if w.morphism.domain.first() != Some(&w.x)
            || w.morphism.images.first() != Some(&z)
            || dom.as_ref() != Some(&cent)
            || cent.len() != w.centralizer_order
        {
            return Err(
                FusionError::WitnessCorrupt(format!("centralizer witness for {:?}", w.x)).into(),
            );
        }
        h.replay(&w.morphism)?;
        got.insert(xi);
    }
    if got != want {
        return Err(FusionError::Unwitnessed(format!(
            "{} of {} involutions",
            got.len(),
            want.len()
        ))
        .into());
    }
    Ok(())
}

/// Re-executes a certificate: witnessed fusion claims are replayed step by step without
/// any search, the others are recomputed from the recorded configuration and compared
/// with the stored witnesses.
pub fn replay(cert: &Certificate, cache: Option<PathBuf>) -> Result<ReplayReport, SuiteError> {
    cert.check_version()?;
    if cert.records.is_empty() {
        return Ok(ReplayReport {
            digest_ok: cert.digest_matches(),
            outcomes: vec![],
        });
    }
    let mut config: RunConfig = serde_json::from_value(cert.config.clone())
        .map_err(|_| CertError::WitnessCorrupt("config".into()))?;
    config.cache_dir = cache;
    config.field_params()?;
    let witnessed = ["fusion.involution-transitivity", "fusion.centralizers-to-z"];
    let mut session = Session::new(&config);
    let mut outcomes = Vec::new();
    let mut handle: Option<(u64, FusionHandle)> = None;
    for r in cert
        .records
        .iter()
        .filter(|r| witnessed.contains(&r.claim_id.as_str()))
    {
        let result: Result<(), SuiteError> = (|| {
            let (u, check): (u64, WitnessCheck) = if r.claim_id == witnessed[0] {
                let b: InvolutionWitnessBlob = blob(r)?;
                (
                    b.u,
                    Box::new(move |h| Ok(replay_involution_certificate(h, &b.certificate)?)),
                )
            } else {
                let b: CentralizerBlob = blob(r)?;
                (
                    b.u,
                    Box::new(move |h| replay_centralizer_witnesses(h, &b.witnesses)),
                )
            };
            if handle.as_ref().map(|(v, _)| *v) != Some(u) {
                handle = Some((u, session.fusion_with_unit(u)?));
            }
            check(&handle.as_ref().expect("set above").1)
        })();
        let replayed = match (&result, r.status) {
            (Ok(()), _) => Status::Pass,
            (Err(SuiteError::Cert(_)), _) => Status::Unknown,
            (Err(_), _) => Status::Fail,
        };
        outcomes.push(ReplayOutcome {
            claim_id: r.claim_id.clone(),
            recorded: r.status,
            replayed,
            method: "witness",
            reproduced: replayed == r.status,
        });
    }
    drop(handle);
    let rest: Vec<&ClaimRecord> = cert
        .records
        .iter()
        .filter(|r| !witnessed.contains(&r.claim_id.as_str()))
        .collect();
    let ids: HashSet<&str> = rest.iter().map(|r| r.claim_id.as_str()).collect();
    let suites: BTreeSet<Suite> = rest
        .iter()
        .filter_map(|r| Suite::of_claim(&r.claim_id))
        .collect();
    let mut fresh = Vec::new();
    for suite in suites {
        fresh.extend(suite_records(&mut session, suite, &|id| ids.contains(id)));
    }
    for r in rest {
        let again = fresh.iter().find(|x| x.claim_id == r.claim_id);
        let replayed = again.map_or(Status::Unknown, |x| x.status);
        let reproduced = again.is_some_and(|x| x.status == r.status && x.witnesses == r.witnesses);
        outcomes.push(ReplayOutcome {
            claim_id: r.claim_id.clone(),
            recorded: r.status,
            replayed,
            method: "recompute",
            reproduced,
        });
    }
    Ok(ReplayReport {
        digest_ok: cert.digest_matches(),
        outcomes,
    })
}
