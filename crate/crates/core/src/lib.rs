//! Node generation with a prescribed nearest-neighbor distance function.
//!
//! The engine produces discrete point configurations inside a compact support
//! `Ω ⊂ [0,1]^d` whose separation `Δ(x)` (distance from each node to its
//! nearest neighbor) tracks a user-supplied radial density `ρ(x)`. It works in
//! two phases:
//!
//! 1. **Stratified quasi-Monte Carlo layout** ([`layout`]): the unit cube is
//!    split into voxels, each voxel near `Ω` is filled with a rescaled
//!    elementary configuration (irrational lattice or periodic Riesz
//!    minimizer, [`qmc`]) sized by the tabulated inverse of the mean
//!    separation, then sparse regions are saturated with voxel centers and
//!    out-of-domain nodes removed.
//! 2. **Repel iterations** ([`repel`]): truncated weighted Riesz-energy
//!    gradient descent over the K nearest neighbors of each node, with domain
//!    projection or pullback and optional pinned boundary sets.
//!
//! [`analysis`] computes separation statistics and hole-radius estimates;
//! [`rbffd`] builds RBF-FD weight systems and runs the stencil conditioning
//! comparison across node families; [`pipeline`] wires the full run behind a
//! single config. File formats live in [`io`].

pub mod analysis;
pub mod domain;
pub mod error;
pub mod geom;
pub mod io;
pub mod layout;
pub mod pipeline;
pub mod qmc;
pub mod rbffd;
pub mod repel;
pub mod spatial;

mod parallel;

pub use error::{Error, Result};
pub use geom::Points;
pub use repel::NodeSet;
