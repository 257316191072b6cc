//! Quadratic spaces, Clifford algebras, reflections, spinor norms and Spin lifts.

mod clifford;
mod exceptional;
mod orders;
mod orth;
mod quad;

pub use clifford::CliffordElement;
pub use exceptional::{m20_coords, m20_from_coords, m2_coords, m2_from_coords, ExceptionalIsos};
pub use orders::{
    exact_div, h_tau_order, is_odd, odd_index_ratios, orth_group_order, sl2_order,
    spin7_index_closed_form, spin7_order, two_part, OddRatio, OrthType,
};
pub use orth::{pi_action, OrthMatrix, SpinGroupElement};
pub use quad::{det_gram_m2, det_gram_m20, QuadSpace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffError {
    #[error("elements belong to different quadratic spaces")]
    SpaceMismatch,
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("bilinear form is singular")]
    Singular,
    #[error("matrix does not preserve the form")]
    NotOrthogonal,
    #[error("isometry has determinant −1")]
    NotSpecialOrthogonal,
    #[error("isometry is not in Ω (determinant or spinor norm)")]
    NotInOmega,
    #[error("element is not in Spin")]
    NotSpin,
    #[error("matrix does not have determinant 1")]
    NotDetOne,
}
