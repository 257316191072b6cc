//! The 7-dimensional model of Spin_7(q^n): the map ω, the element τ, the Sylow
//! 2-subgroup S(q^n), elementary abelian subgroups and the invariant x_C.

mod cache;
mod context;
mod elemab;
mod realize;
mod sylow;

pub use cache::{cache_dir, load_or_build, CACHE_ENV};
pub use context::Spin7Context;
pub use elemab::{
    classify_elem_abelian, eigenspaces, elem_basis, EType, Eigenspace, ElemAbelianReport,
    XcReduction, XcSolver,
};
pub use realize::{canonical_basis, realize_isomorphism};
pub use sylow::{
    label_name, s0_elements, sylow_generators, Named, StdLabel, SylowElement, SylowGroup,
    TABLE_LIMIT,
};

use thiserror::Error;

use crate::cliffspin::CliffError;
use crate::gf::GfError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Spin7Error {
    #[error("parameters outside the supported range")]
    UnsupportedScale,
    #[error("construction invariant violated: {0}")]
    InvariantViolation(&'static str),
    #[error("subgroup is not elementary abelian")]
    NotElementaryAbelian,
    #[error("subgroup does not contain z")]
    MissingCenter,
    #[error("subgroup is not of rank 4 containing U")]
    NotRankFour,
    #[error("no H-conjugate in standard form")]
    NoStandardForm,
    #[error("automorphism not realizable: {0}")]
    NotRealizable(String),
    #[error("isometry search failed")]
    IsometrySearchFailed,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Clifford(#[from] CliffError),
}
