//! Lifting obstructions for group actions on low-dimensional manifolds.
//!
//! This crate computes the invariants that decide whether a group action by
//! homeomorphisms homotopic to the identity lifts to the universal cover:
//!
//! - translation and rotation numbers of circle lifts, with certified
//!   intervals and the invariant-measure displacement integral;
//! - mean homological translation vectors of torus maps, via an explicit
//!   loop-closing construction over a triangulated model surface;
//! - abelianization and torsion tests for finitely presented groups
//!   (Smith normal form over arbitrary-precision integers);
//! - Deck-element obstructions of lifted relator words, correction search,
//!   and classification of the resulting central extension;
//! - an annulus simulator for iterated essential-circle images: regions
//!   swept by the x-axis, crossings with orientation, and the search for a
//!   translation-like element.
//!
//! A catalog of concrete actions (annulus shears, sine-perturbed twists,
//! the Baumslag-Solitar circle action, the Heisenberg nilmanifold, and the
//! real-projective-space involutions) ships with the crate; see the
//! `examples/` directory for one runnable walkthrough per capability, and
//! the `liftobs` binary for the command-line interface.

pub mod annulus;
pub mod catalog;
pub mod circle;
pub mod cli;
pub mod heisenberg;
pub mod homology;
pub mod intmat;
pub mod lifting;
pub mod maps;
pub mod scalar;
pub mod words;

pub use scalar::{ArithmeticMode, Point2, Point3, Scalar};
