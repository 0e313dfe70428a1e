//! Numerical laboratory for spectral gaps of random Riemannian covers of
//! hyperbolic surfaces.
//!
//! The crate is organised around one concrete family of examples: closed
//! orientable surfaces of genus g ≥ 2 with their curvature −1 metric, where
//! every quantity of interest (heat kernel, Green kernel, orbit growth,
//! fixed-point statistics of random permutation covers, operator norms of
//! group-ring elements) has a computable oracle.
//!
//! Module map:
//! - [`group`] — surface-group words, Dehn's algorithm, primitivity;
//! - [`hyp`] — upper half-plane geometry: isometries, distances, axes;
//! - [`model`] — a fixed Fuchsian realization per genus (Bolza at genus 2);
//! - [`kernels`] — heat/Green kernels on the hyperbolic plane plus the
//!   Gaussian and refined upper bounds as calibrated predicates;
//! - [`orbit`] — exhaustive orbit-ball enumeration and growth censuses;
//! - [`cover`] — uniform sampling of `Hom(Γ, Sₙ)`, fixed points, graph gaps;
//! - [`trace`] — truncated heat traces on covers and eigenvalue witnesses;
//! - [`strongconv`] — representation norms and the cutoff heat-operator
//!   experiment;
//! - [`rng`] — deterministic seed derivation for parallel Monte Carlo.

pub mod cover;
pub mod group;
pub mod hyp;
pub mod kernels;
pub mod model;
pub mod orbit;
pub mod rng;
pub mod strongconv;
pub mod trace;


pub use group::{Presentation, PrimitiveDecomposition, Word};
pub use hyp::{HPoint, Isometry};

pub use model::FuchsianModel;



