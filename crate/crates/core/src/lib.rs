//! Reeb action spectra, symplectic capacity bounds and periodic orbits for the
//! regularized rotating Kepler problem and Hill's lunar problem.
//!
//! The crate is organized bottom-up:
//!
//! - [`hamiltonians`]: the three Hamiltonians, their vector fields, critical
//!   values and Hill regions.
//! - [`moser`]: the regularization charts and the fiber radial functions of
//!   the regularized energy hypersurfaces.
//! - [`rkp_spectrum`]: the complete action spectrum and Conley–Zehnder indices
//!   of the rotating Kepler problem.
//! - [`inclusions`]: inclusion thresholds between the two families of
//!   Liouville domains and their fiberwise numerical verification.
//! - [`capacity`]: capacity values of the rotating Kepler domains and the
//!   resulting bounds and spectral-gap intervals for Hill's lunar problem.
//! - [`hill_orbits`]: symmetric periodic orbits by shooting, their actions and
//!   the comparison against the capacity intervals.
//! - [`systolic`]: contact volume and systolic ratio of the rotating Kepler
//!   energy hypersurfaces.
//!
//! Energies are parametrized by `c > 0`; the level set under study is always
//! `H = -c`.

// `!(x >= lo)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod cubic;
pub mod error;
pub mod hamiltonians;
pub mod hill_orbits;
pub mod inclusions;
pub mod integrator;
pub mod moser;
pub mod quadrature;
pub mod rkp_spectrum;
pub mod systolic;

pub use error::{Error, Result};
pub use hamiltonians::{EnergyParam, KeplerIntegrals, PhaseState, ProblemKind};
pub use inclusions::{DomainSpec, InclusionReport};
pub use capacity::{CapacityInterval, OrbitClassLabel};
pub use hill_orbits::{PeriodicOrbit, ShootingConfig};
pub use rkp_spectrum::{CircularRootPair, Family, SpectrumEntry, SpectrumFamily, TorusOrbit};
pub use systolic::{VolumeMethod, VolumeResult};

/// `3^(4/3) / 2`, the critical energy parameter of Hill's lunar problem.
pub fn hill_critical() -> f64 {
    3f64.powf(4.0 / 3.0) / 2.0
}

/// `3^(-2/3)`, the shift between Hill and rotating Kepler levels.
pub fn hill_shift() -> f64 {
    3f64.powf(-2.0 / 3.0)
}

/// `2^(2/3)`, the death energy of the Hekuba orbit.
pub fn hekuba() -> f64 {
    2f64.powf(2.0 / 3.0)
}
