//! Dunkl kernel `E_k(x,y)` and its homogeneous components `E_m(x,y)` for the
//! dihedral group `D_n` with a constant complex multiplicity `k`.
//!
//! Four evaluation paths cross-check each other:
//!
//! - [`polyalg`]: symbolic intertwining operator on bivariate polynomials (slow oracle),
//! - [`recurrence`]: vectorised degree recurrence on the group orbit,
//! - [`series`]: power-series solution of a 2×2 differential system and its generating function,
//! - [`kernel`]: certified component sums and a contour/time integral for `E_k`.

pub mod cli;
pub mod dihedral;
pub mod error;
pub mod kernel;
pub mod metrics;
pub mod polyalg;
pub mod quadrature;
pub mod recurrence;
pub mod series;

pub use dihedral::{pairing, DihedralGroup, GroupElement, OrbitPairings, PlanePoint, C64};
pub use error::{DunklError, Result};
pub use kernel::{delta_effective, ek_integral, ek_series, ek_sigma_closed, DeltaConstant, KernelMethod, KernelResult};
pub use polyalg::{ParameterK, Poly2};
pub use recurrence::em_sequence;
