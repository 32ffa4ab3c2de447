//! Numerical exterior calculus for invariant contact structures on
//! principal circle bundles.
//!
//! The crate builds and verifies invariant contact forms on circle
//! bundles over model base manifolds (products of circles, intervals and
//! unit spheres). The total space is never materialized: an invariant
//! form is a pair (a, b) representing a + psi ^ b relative to a reference
//! connection, with the twisted differential (da + omega ^ b, -db), and
//! contactness reduces to a positivity sweep of a top-degree form over
//! oriented frames on the base.
//!
//! What it covers:
//!
//! - exterior calculus on ambient coefficients: wedge, d, frame
//!   evaluation, positivity sweeps, pullback cycle integration;
//! - the invariant pair calculus with curvature, gauge changes, Euler
//!   pairings, and the closed volume formula cross-checking the generic
//!   wedge path;
//! - dividing sets, the contact form they carry, symplectic pieces, and
//!   both weak-filling conditions;
//! - the existence pipeline: collar normalization, gauge alignment,
//!   profile-driven necks with a closed-form expansion oracle, global
//!   gluing with seam verification, and scaling of exact pieces;
//! - the open-book construction on N x T^2 and contactisations of ideal
//!   Liouville domains.
//!
//! # Examples
//!
//! One runnable example per capability (`cargo run --example <name>`):
//!
//! - `exterior_algebra` - forms, wedge, d, frames, sweeps
//! - `boothby_wang` - connection forms as contact forms; Euler pairings
//! - `dividing_sets` - zeros of u, boundary contact, symplectic pieces
//! - `existence_pipeline` - the full neck-and-gluing construction
//! - `bourgeois_torus` - the open-book form on S^3 x T^2
//! - `contactisation` - ideal Liouville domains and their boundary
//! - `gauge_paths` - gauge invariance and convex interpolation
//! - `scenario_files` - the JSON scenario runner
//!
//! A thin binary (`contact-bundles`) exposes the same machinery as
//! subcommands: `verify-contact`, `construct`, `bourgeois`, `euler`, and
//! `gallery`, with `--resolution-scale`, `--tol`, `--out`, `--jobs`.

pub mod bourgeois;
pub mod bundle;
pub mod cli;
pub mod construct;
pub mod curve;
pub mod cycle;
pub mod error;
pub mod expr;
pub mod field;
pub mod gallery;
pub mod form;
pub mod manifold;
pub mod profiles;
pub mod report;
pub mod scenario;
pub mod splitting;
pub mod sweep;
pub mod tolerances;

pub use bundle::{
    change_gauge, contact_check, decompose_alpha, euler_pairing, identity_check_lemma_volume,
    inv_d, inv_wedge, omega_volume, Bundle, BundleSpec, InvariantForm,
};
pub use curve::{CurveFn, PiecewisePoly, Poly};
pub use cycle::{integrate_cycle, Cycle2, CycleIntegral};
pub use error::{Error, Result};
pub use field::ScalarField;
pub use form::{tangential_max, BaseForm};
pub use manifold::{frame_at, Frame, Manifold, ModelFactor, ModelManifold};
pub use report::{CheckEntry, Report};
pub use sweep::{positivity_sweep, PositivityReport};
