//! Certified numerics for slices of the Takagi graph and planar self-affine sets.
//!
//! The crate is organized around a pruned depth-first census engine: cylinders
//! of an affine iterated function system are enclosed in convex hulls, hulls are
//! classified against lines and strips with explicit slack, and every reported
//! count comes in a certified `definite <= true <= possible` sandwich.
//!
//! Modules:
//! - [`linalg2`]: exact-formula 2x2 linear algebra, the projective line, cones.
//! - [`wordspace`]: finite words over `{1,..,N}` and the pruned tree walk.
//! - [`affine_ifs`]: cylinder maps and hulls, domination, Furstenberg direction
//!   enclosures, the neighborhood-count probe, singular-value pressure.
//! - [`takagi`]: the Takagi function, its IFS, closed-form word matrices and
//!   derived constants.
//! - [`slicer`]: slice censuses, Minkowski slope estimates, bad-word tallies.
//! - [`measure`]: strip masses of the lifted length measure and the
//!   dimension-conservation diagnostics.
//! - [`tangent`]: blow-up point clouds and Hausdorff distances.

pub mod affine_ifs;
mod error;
pub mod linalg2;
pub mod measure;
pub mod slicer;
pub mod takagi;
pub mod tangent;
pub mod wordspace;

pub use error::{Error, Result};
