//! Constructive backbone of the generalised Kummer construction for flat
//! G2-orbifolds.
//!
//! The crate computes, with exact rational arithmetic wherever the underlying
//! mathematics is exact:
//!
//! - quaternion algebra, the flat G2 three-form, cross product and associator
//!   ([`quat`], [`g2form`]);
//! - the six Bieberbach group classes on `Im H`, their eligible mapping-torus
//!   axes and base orbifolds ([`bieberbach`]);
//! - flat G2-orbifolds `T^7/G`: singular sets, local models and extra
//!   symmetries ([`orbifold`]);
//! - Gibbons-Hawking data and the combinatorial deformation spaces of ALE
//!   spaces: root systems, Weyl groups, wall-avoiding fixed loci, invariant
//!   curve classes ([`ale`]);
//! - certified lower bounds for counts of associative submanifolds in the
//!   resolved manifolds ([`pipeline`]);
//! - a finite-dimensional spectral model for the translation-invariant
//!   operator estimate and the contraction step of the perturbation argument
//!   ([`fueter`]).
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//!
//! - `bieberbach_classes` - the six classes, torsion-freeness, base orbifolds
//! - `orbifold_singular_set` - the T^7/C2^3 orbifold and its twelve singular tori
//! - `weyl_fixed_loci` - wall-avoiding fixed loci in deformation spaces
//! - `gibbons_hawking` - potential, decay and hyperkahler-form diagnostics
//! - `count_associatives` - the shipped example catalogue and its counts
//! - `fueter_estimate` - the period-uniform estimate and the contraction solver
//! - `g2_algebra` - cross product and associator identities
//!
//! The `g2kummer` binary exposes the same functionality as subcommands
//! (`enumerate-bieberbach`, `singular-set`, `fixed-locus`, `verify-gh`,
//! `count-associatives`, `fueter-demo`, `list-examples`).

pub mod ale;
pub mod bieberbach;
pub mod fixtures;
pub mod fueter;
pub mod g2form;
pub mod linalg;
pub mod orbifold;
pub mod pipeline;
pub mod quat;
pub mod rat;
pub mod report;

pub use rat::{Rat, Q};
