//! Coupled phase maps on the 2-torus.
//!
//! The crate covers the ring map `G` and the line map `F`, their fixed
//! points, the piecewise-linear Lyapunov functions `V`, `U` and the
//! quadratic candidate `𝓛`, a rigorous interval certifier for the sign
//! lemmas, the dihedral symmetries and invariant segments, and basin
//! statistics on grids.

pub mod basins;
pub mod certifier;
pub mod error;
pub mod fixed_points;
pub mod io;
pub mod lyapunov;
pub mod region;
pub mod symmetry;
pub mod torus;

pub use error::{Error, Result};
pub use fixed_points::{FixedPointKind, FixedPointRecord};
pub use region::RegionId;
pub use torus::{LiftPoint, MapFamily, MapSpec, Perturbation, TorusPoint};
