//! Bi-invariant partial orders on finitely generated groups.
//!
//! Group arithmetic for free, free abelian and class-two nilpotent groups,
//! exact real quadratic-radical scalars, positive-cone order evaluators with
//! the pullback / pushforward / lexicographic / classification constructions,
//! censuses of full archimedean orders, and a coarse-connectivity checker
//! for order half-spaces in Cayley balls.

pub mod classify;
pub mod commands;
pub mod error;
pub mod field;
pub mod figure;
pub mod group;
pub mod lattice;
pub mod order;
pub mod report;
pub mod sigma;
pub mod spec;

pub use error::{Error, Result};
pub use field::AlgNum;
pub use group::{Element, Group, GroupRef, Hom, Subgroup};
