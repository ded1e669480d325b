//! Vessel trajectory prediction for inland waterways.
//!
//! The crate builds discharge-conditioned density fields over a river-adapted
//! coordinate system (waterway kilometre, signed fairway-center offset) and
//! feeds them, together with vessel kinematics, into a transformer
//! encoder-decoder that predicts bivariate-Gaussian position distributions.
//! Non-learned baselines and an ADE/FDE evaluation harness share the same
//! rollout semantics, and a synthetic traffic generator provides ground truth
//! for end-to-end verification.
//!
//! Pipeline stages, in dependency order:
//!
//! 1. [`synth`] — synthetic river geometry, traffic, and gauge series;
//! 2. [`ingest`] — trip splitting, 1-minute resampling, river-coordinate
//!    annotation, and sequence sampling;
//! 3. [`gmm`] — univariate Gaussian mixtures with BIC grid search;
//! 4. [`context`] — spline-interpolated density fields and lookup dictionaries;
//! 5. [`predictor`] — the sequence model, its training loop, and inference;
//! 6. [`baselines`] / [`eval`] — reference predictors and displacement metrics;
//! 7. [`pipeline`] — file-based orchestration used by the `fairway` binary.

pub mod baselines;
pub mod context;
pub mod eval;
pub mod geometry;
pub mod gmm;
pub mod ingest;
pub mod nn;
pub mod pipeline;
pub mod predictor;
pub mod spline;
pub mod synth;

pub use geometry::{Direction, Lane, PlanePoint, RiverCoord, RiverGeometry};
