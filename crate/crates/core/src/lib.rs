//! The sandpile group of `G(p, ℓ, t)`, the Cayley graph on `F_q`,
//! `q = p^{(ℓ-1)t}`, whose connection set is the subgroup of index `ℓ` in
//! `F_q^×` (`p` primitive modulo the odd prime `ℓ`).
//!
//! Two independent routes are provided:
//!
//! * a closed-form pipeline built on base-`p` carry counting ([`carries`]) and,
//!   for `ℓ = 3`, a transfer-matrix recursion ([`ell3`]);
//! * a brute-force pipeline that builds the Cayley graph explicitly
//!   ([`field`], [`graph`]) and runs Smith normal form on its Laplacian
//!   ([`snf`]).
//!
//! [`galois`] contains the Galois-ring machinery (Teichmüller lifts, Jacobi
//! sums) used to check the carry/valuation correspondence and the
//! block-diagonal decomposition of the Laplacian. [`critgroup`] assembles and
//! reconciles everything.

pub mod arith;
pub mod carries;
pub mod critgroup;
pub mod ell3;
pub mod error;
pub mod field;
pub mod galois;
pub mod graph;
pub mod params;
pub mod snf;

pub use carries::PMultiplicities;
pub use critgroup::{critical_group, CriticalGroupResult, Method};
pub use error::{Error, Result};
pub use field::FieldTable;
pub use graph::IntMatrix;
pub use params::{Bounds, Params};
pub use snf::AbelianGroupDesc;
