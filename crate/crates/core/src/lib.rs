//! Combinatorial engine for pants decompositions of a fixed infinite-type
//! surface.
//!
//! The surface is the one-ended, infinite-genus model (a linear chain of
//! pants with one torus handle per link), carried by [`SurfaceModel`]
//! together with its base pants decomposition and a principal exhaustion
//! `S_0 ⊂ S_1 ⊂ …`.  On top of that chart the crate provides:
//!
//! * [`curve`] — isotopy classes of essential simple closed curves in
//!   finitely-supported intersection/twist coordinates, with restriction
//!   to subsurfaces and component tracing;
//! * [`decomposition`] — eventually-periodic pants decompositions, the
//!   elementary-move graph, and symmetric-difference/component tests;
//! * [`agreement`] — the five agreement relations and their fingerprint
//!   classes `B_n^i`;
//! * [`metric`] — the partial step distance, certified distance bounds,
//!   converging paths and limits on the vertex space;
//! * [`pspace`] — edge points, the basic open sets of the pants space,
//!   convergence certificates, separation and closure predicates;
//! * [`twist`] — commuting Dehn-twist profiles and their action;
//! * [`oracle`] — independent brute-force ground truth (curve tracing on
//!   flat models, Farey graphs, exhaustive small pants graphs);
//! * [`suite`] — the seeded property battery used by the CLI and the
//!   acceptance tests.
//!
//! All arithmetic on distances and edge parameters is exact rational.

pub mod agreement;
pub mod curve;
pub mod decomposition;
pub mod error;
pub mod metric;
pub mod model;
pub mod oracle;
pub mod pspace;
pub mod slope;
pub mod suite;
pub mod twist;

pub use agreement::{AgreementLevel, BallKey, MaxAgreement};
pub use curve::{ComponentKey, ComponentMultiset, Curve, RestrictionData};
pub use decomposition::{
    ElementaryMove, MoveSet, PantsDecomposition, SymmetricDifference, TailPattern,
};
pub use error::{Error, Result};
pub use metric::{DistBounds, Dhat, Rat};
pub use model::{CurveClass, CurveId, ExhaustionIndex, PantsId, Subsurface, SurfaceModel, WindowKind};
pub use pspace::PantsPoint;
pub use slope::Slope;
pub use twist::TwistProfile;
