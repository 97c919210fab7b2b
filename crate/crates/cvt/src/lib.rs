//! A 3D centroidal-Voronoi-tessellation laboratory.
//!
//! The crate computes the quantization energy `E(Y) = Σ_k ∫_{V_k} |x − y_k|² dx`
//! of point configurations over the unit cube or the unit flat torus, runs
//! Lloyd-type optimization, evaluates lattice quantizers (SC/BCC/FCC), audits
//! tessellations against the geometric-complexity bounds `Γ₁…Γ₅`, `N★` and the
//! energy floor `τ`, and minimizes the second moment `G(a, m)` over convex
//! polytopes with at most `m` faces.
//!
//! Everything is built on an exact convex-polytope kernel ([`geom`]): cells are
//! obtained by half-space clipping and all moments are closed-form tetrahedral
//! integrals, so the only error anywhere is floating-point roundoff.
//!
//! Per-cell work is data-parallel (rayon, behind the default `parallel`
//! feature) with a sequential fallback; all reductions run in generator index
//! order with compensated summation, so results are bit-identical regardless
//! of the worker count.

pub mod bounds;
mod exec;
pub mod geom;
pub mod gfunc;
pub mod lattice;
pub mod lloyd;
pub mod rng;
pub mod voronoi;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),
    #[error("operation requires a nonempty polytope")]
    EmptyPolytope,
    #[error("duplicate generators at indices {0} and {1}")]
    DuplicateGenerators(usize, usize),
    #[error("generator {0} lies outside the domain")]
    OutOfDomain(usize),
    #[error("index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operation requires at least {needed} generators, got {got}")]
    TooFewGenerators { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("security radius grew past the domain half-diagonal for cell {0}")]
    SecurityRadius(usize),
    #[error("query point is not strictly interior to the polytope")]
    PointNotInterior,
    #[error("half-space intersection unbounded in all {0} restarts")]
    Unbounded(usize),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a float with 17 significant digits, enough to round-trip f64.
///
/// Used for every CSV/JSON number the CLI emits so that output files are
/// byte-identical for identical inputs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
