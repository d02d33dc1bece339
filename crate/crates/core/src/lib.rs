//! Finite Galois-module machinery as exact decision procedures.
//!
//! The crate models a group acting on a finite abelian group by explicit
//! matrices and provides predicates (almost-fixed elements, ordinary
//! semistable structure), first cohomology, numerical semigroups, and
//! modular-arithmetic searches, together with theorem oracles that check
//! hypotheses on a concrete instance and assert the conclusion.

pub mod action;
pub mod almost_fixed;
pub mod arith;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod ffield;
pub mod group;
pub mod inertia;
pub mod lattice;
pub mod oracles;
pub mod search;
pub mod semigroup;
pub mod sweep;

pub use action::ActionGroup;
pub use error::{Error, Result};
pub use group::{quotient, Endomorphism, FinAbGroup, ModuleElement, Presentation, Quotient, Subgroup};
