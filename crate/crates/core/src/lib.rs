//! Exact empirical multivariate lower cone quantiles and Tukey depth
//! regions.
//!
//! The lower `C`-quantile of a point cloud `X` at level `p` is the
//! intersection over all `w` in the dual cone `C+` of the halfspaces
//! `w^T z >= q(w^T X)`, where `q` is the empirical lower quantile of the
//! projected sample. This crate computes a finite, irredundant
//! description of that set by solving the geometric dual of a vector
//! linear program with a dual Benson outer approximation, entirely in
//! rational arithmetic. Tukey depth regions are obtained by lifting the
//! data one dimension up and using the orthant as ordering cone.
//!
//! Module map:
//!
//! * [`scalar`], [`data`], [`cone`]: exact scalars, point clouds, levels, cones.
//! * [`univariate`]: scalar quantiles, the check loss `phi` and the greedy
//!   scalarization oracle.
//! * [`lp`]: exact bounded-variable simplex, used as a reference oracle.
//! * [`polyhedra`]: double description, redundancy removal, set equality.
//! * [`vlp`]: the dual Benson solver.
//! * [`quantile`]: regions, lifting, membership and depth.
//! * [`oracle`]: brute-force verifiers independent of the solver.

pub mod cone;
pub mod data;
mod dd;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod polyhedra;
pub mod quantile;
pub mod scalar;
pub mod univariate;
pub mod vlp;

pub use cone::{make_dual_basis, validate_cone, Cone, DualConeBasis};
pub use data::{project_data, DataCloud, QuantileLevel};
pub use error::{Error, Result};
pub use polyhedra::{Halfspace, Hyperplane, Polyhedron};
pub use quantile::{quantile_region, tukey_depth, tukey_region, QuantileRegion, RegionSpec};
pub use scalar::{parse_rational, Rational};
pub use vlp::{benson_dual_solve, DualSolution};
