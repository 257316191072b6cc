//! Exact computations around the Solomon 2-local fusion systems over the Sylow
//! 2-subgroups of Spin_7(q), and the F_2 polynomial identities behind their
//! classifying spaces.
//!
//! * [`gf`]: finite fields as towers of quadratic extensions.
//! * [`cliffspin`]: quadratic spaces, Clifford algebras, spinor norms, Spin lifts.
//! * [`spin7`]: the 7-dimensional model, the Sylow subgroup, elementary abelian
//!   subgroups and their invariants.
//! * [`fusion`]: witnessed morphisms, saturation checks and the generating data.
//! * [`dickson`]: Dickson invariants, Steenrod squares and Kähler differentials.
//! * [`cert`] and [`suites`]: certificates and the verification suites run by the CLI.

pub mod cert;
pub mod cliffspin;
pub mod dickson;
pub mod fusion;
pub mod gf;
pub mod group;
pub mod linalg;
pub mod spin7;
pub mod suites;
