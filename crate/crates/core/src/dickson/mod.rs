//! F_2 polynomial algebra: Dickson invariants, Steenrod squares, invariance under
//! parabolic subgroups of GL_4(2), subalgebra membership and Kähler differentials.

mod algebra;
mod forms;
mod invariants;
mod linear;
mod poly;

pub use algebra::{
    degrees_of, graded_basis, subalgebra_member, verify_in_a_bounded, weighted_monomials, GenExpr,
    InADegree, InAReport, Membership,
};
pub use forms::{
    differential, differentials_in, verify_differential_identities, verify_pullback, DiffForm,
    PullbackDegree, PullbackReport,
};
pub use invariants::{
    dickson_all, dickson_inv, gl22p_generators, gl31_generators, gl4_generators, group_order,
    orbit_product, require, verify_dickson_recursion, verify_invariance, verify_relations,
    verify_steenrod, IdentityCheck, InvarianceReport, LinMap, NamedGenerators, KAPPA, RHO,
};
pub use linear::Echelon;
pub use poly::{Mono, Poly2, MAX_VARS};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DicksonError {
    #[error("arity out of range")]
    ArityOutOfRange,
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("relation fails: {0}")]
    RelationFailure(String),
    #[error("invariance fails: {0}")]
    InvarianceFailure(String),
    #[error("membership check fails: {0}")]
    MembershipFailure(String),
    #[error("identity fails: {0}")]
    IdentityFailure(String),
    #[error("pullback fails: {0}")]
    PullbackFailure(String),
}
