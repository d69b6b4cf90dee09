//! Exact local uniformization of monomial Abhyankar places.
//!
//! Given a valued rational function field whose place is monomial in a
//! transcendence basis, and finitely many elements of the valuation ring,
//! the engine computes a regular chart in which each element is a unit times
//! a monomial in a regular parameter system, together with certificates that
//! are re-verified from scratch.

pub mod cli;
pub mod error;
pub mod funcfield;
pub mod inertial;
pub mod lattice;
pub mod monomialize;
pub mod ordered_group;
pub mod transforms;
pub mod valuation;
