//! Perturbation bounds for positive matrix semigroups on finite weighted
//! measure spaces.
//!
//! Everything here is desk-scale dense linear algebra. A [`MeasureSpace`]
//! fixes strictly positive atom weights; [`Generator`]s are Metzler matrices
//! (nonnegative off-diagonal entries), exactly the matrices whose semigroup
//! `exp(tA)` maps nonnegative vectors to nonnegative vectors. A
//! [`PerturbationPair`] compares a perturbed semigroup against an
//! unperturbed one through three equivalent one-sided estimates — on the
//! semigroups themselves, on the generator gap, and on the resolvents —
//! with explicit constant propagation between them (see [`theorem`]).
//!
//! The [`zoo`] module builds the scenarios exercised by tests and by the
//! companion CLI: discrete 1-D Laplacians, jump-kernel perturbations,
//! bounded potentials, the Neumann/periodic boundary-condition pair whose
//! gap constant blows up with refinement, and seeded random Metzler
//! generators.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature routes scalar math through the standard library instead of
//! `libm`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod math;

pub mod error;
pub mod grid;
pub mod matrix;
pub mod measure;
pub mod semigroup;
pub mod theorem;
pub mod zoo;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use measure::{Func, MeasureSpace, Operator};
pub use semigroup::{Generator, PositivityCheck, SemigroupBound};
pub use theorem::{Condition, ConditionReport, Constants, PerturbationPair, Witness};
