//! Tropical pair-of-pants data for degree-`d` surfaces in `CP³`.
//!
//! The crate builds the regular unimodular subdivision `T_v` of the
//! standard simplex `Δ_d` induced by a quadratic lifting function, its
//! dual tropical hypersurface `Π_v`, the pair-of-pants and K3 cell
//! bookkeeping, exact monomial identities for the theta coordinates of
//! the patchworking family, numerical amoeba and period checks, and the
//! closed-form surface invariants.

pub mod amoeba;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod pants;
pub mod patchwork;
pub mod subdivision;
pub mod tables;
pub mod tropical;

pub use error::{Error, Result};
