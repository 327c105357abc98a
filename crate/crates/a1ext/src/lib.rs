//! Exact computational algebra over the subalgebra A(1) of the mod-2
//! Steenrod algebra.
//!
//! The crate provides, from the bottom up:
//! - [`gf2`]: bit-packed exact linear algebra over the two-element field;
//! - [`module`]: finite graded A(1)-modules (validation, suspension, tensor,
//!   dual, submodule, quotient, isomorphism testing);
//! - [`margolis`]: Q0/Q1 Margolis homology, the Wall freeness criterion, and
//!   the reduced-plus-free splitting of a finite module;
//! - [`poly`] and [`km2`]: the polynomial cohomology ring of the second mod-2
//!   Eilenberg-MacLane space with its Steenrod action, and every named module
//!   carved out of it (the weighted submodules `Mk`, the Joker `U`, `N`,
//!   `G_j`, `P_j`, tensor-and-reduce constructions, and the global splitting
//!   verifier);
//! - [`resolution`] and [`chart`]: minimal free resolutions over A(1), Ext
//!   charts in both variables, h0/h1 products, towers, v1^4-periodicity and
//!   filtration-shift checks;
//! - [`render`]: deterministic ASCII/SVG/JSON rendering of charts and module
//!   cell diagrams;
//! - [`verify`]: the named check suites run by the CLI.

pub mod chart;
pub mod gf2;
pub mod km2;
pub mod margolis;
pub mod module;
pub mod poly;
pub mod render;
pub mod resolution;
pub mod verify;
