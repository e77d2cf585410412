//! Exact tools for the lonely runner problem.
//!
//! Given nonzero integer velocities `v₁,…,vₙ`, the gap of loneliness is
//! `δ(v) = max_{t ∈ R/Z} min_i ‖t vᵢ‖`. The crate computes it exactly, models
//! Bohr sets `{t : ‖t vᵢ‖ ≤ δᵢ}` as unions of arcs with rational endpoints,
//! counts multiplicities of generalised arithmetic progressions, runs
//! checkpointed exhaustive searches, and builds checkable certificates.
//!
//! All quantities are exact rationals; nothing here uses floating point.

pub mod bohr;
pub mod circle;
pub mod constructions;
pub mod error;
pub mod gap;
pub mod progression;
pub mod rational;
pub mod search;

pub use bohr::{bohr_measure, build_bohr, covering_check, kernel_petal, sunflower_check, BohrSpec};
pub use circle::CircleIntervalSet;
pub use error::{Error, Result};
pub use gap::{compute_delta, moments, multiplicity_f, probe_time, GapResult, VelocityTuple};
pub use progression::{dilate, is_t_proper, lod_ratio, multiplicity, Progression};
pub use rational::{circle_norm, CirclePoint, Rational};
pub use search::{enumerate_canonical, find_extremisers, run_search, verify_bound, SearchSpec};
