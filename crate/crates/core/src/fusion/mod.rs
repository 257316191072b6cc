//! Fusion systems over S(q^n): the generating data, witnessed morphisms and the
//! saturation checks, plus a small brute-force engine for finite groups.

mod checks;
mod gamma;
mod handle;
mod morphism;
mod small;
mod unit;

use thiserror::Error;

use crate::cliffspin::CliffError;
use crate::spin7::Spin7Error;

pub use checks::*;
pub use gamma::{inverse_mod, GammaData, NamedAut};
pub use handle::{generate_fusion, AutGroup, AutSources, FusionHandle, Gamma1, H_TAU_LIMIT};
pub use morphism::{FusionMorphism, WitnessStep};
pub use small::*;
pub use unit::{
    a1_automorphisms_fixing_z, find_unit, mat_closure, Mat3, R0Coords, SpinAutR0, UnitCandidate,
    UnitReport, CLOSURE_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("u = {0} is not 1 mod 4")]
    BadUnit(u64),
    #[error("no unit u passes the order test")]
    NoUnitFound,
    #[error("internal error: {0}")]
    Internal(&'static str),
    #[error("witness rejected: {0}")]
    WitnessCorrupt(String),
    #[error("named automorphism applied outside S_0")]
    OutsideS0,
    #[error("replayed images differ from the stored images")]
    ReplayMismatch,
    #[error("no witness found for a required morphism: {0}")]
    Unwitnessed(String),
    #[error("saturation axiom failed: {0}")]
    AxiomFailure(String),
    #[error("condition failed: {0}")]
    ConditionFailure(String),
    #[error("identity failed: {0}")]
    IdentityFailure(String),
    #[error("gamma does not preserve fusion: {0}")]
    PreservationFailure(String),
    #[error("conjugacy class of the subgroup exceeds the search limit")]
    UnknownConjugates,
    #[error(transparent)]
    Spin7(#[from] Spin7Error),
    #[error(transparent)]
    Clifford(#[from] CliffError),
}
