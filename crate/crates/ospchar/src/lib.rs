//! Exact-arithmetic characters, branching functions, admissible weight sets
//! and fusion rings for the affine Lie (super)algebras of types C_n, B_n and
//! osp(1|2n), together with their principal W-algebras.
//!
//! Everything is computed over exact integers and rationals; floating point
//! never appears. The main entry points are:
//!
//! - [`rootdata`]: root systems, bilinear forms and the hyperoctahedral Weyl
//!   group in a single shared coordinate system,
//! - [`charseries`]: truncated formal characters (denominators, theta sums,
//!   Verma and Weyl-module characters, Drinfeld-Sokolov specialization),
//! - [`branching`]: branching coefficients, level duality and W-algebra
//!   module characters,
//! - [`admissible`]: admissible levels, admissible weight sets and the
//!   decomposition tables of the simple affine osp(1|2n) algebra,
//! - [`fusion`]: finite tensor products, affine (Kac-Walton) fusion and the
//!   product-form W-algebra fusion ring.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here can be called from concurrent workers without
//! coordination.

pub mod admissible;
pub mod branching;
pub mod charseries;
mod error;
pub mod fusion;
pub mod jsonio;
pub mod qseries;
pub mod report;
pub mod rootdata;

pub use error::{Error, Result};
