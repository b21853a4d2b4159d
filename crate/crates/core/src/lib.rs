//! Combinatorics and cohomology bookkeeping for rational affine hyperplane
//! arrangements.
//!
//! Everything here is exact: coefficients are arbitrary precision rationals
//! and homology is computed over the integers. The crate is `no_std` and only
//! needs `alloc`; file formats, reports and the command line driver live in
//! the `arrcoh` crate.
//!
//! The pipeline is
//!
//! 1. [`arrangement`]: validate input and build the intersection poset,
//! 2. [`invariants`]: Möbius function, characteristic and Poincaré
//!    polynomials and the β-invariants of the restrictions,
//! 3. [`nerve`]: the nerve of the hyperplane cover of the singular set and
//!    its integer homology (an independent oracle for β),
//! 4. [`chambers`]: real chamber enumeration (a second oracle for β),
//! 5. [`decomposition`]: the graded decomposition of the cohomology of the
//!    complement with group ring coefficients,
//! 6. [`verify`]: the cross-checks tying all of the above together.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod chambers;
pub mod decomposition;
mod error;
pub mod invariants;
pub mod linalg;
pub mod nerve;
pub mod polynomial;
pub mod rational;
pub mod verify;

pub use arrangement::{Arrangement, Flat, FlatId, Hyperplane, IntersectionPoset};
pub use decomposition::{GradedDecomposition, ModuleExpr};
pub use error::{Error, Result};
pub use linalg::{AffineSubspace, FlatRelation, RationalMatrix};
pub use polynomial::IntPolynomial;
pub use rational::Rational;

/// Resource limits shared by the poset builder and the oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest arrangement accepted by the poset builder.
    pub max_hyperplanes: usize,
    /// Largest arrangement handed to the nerve and chamber oracles.
    pub max_oracle_hyperplanes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_hyperplanes: 20,
            max_oracle_hyperplanes: 12,
        }
    }
}
