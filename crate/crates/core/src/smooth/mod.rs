//! Numerical volumes for a catalog of smooth transformation groupoids.
//!
//! Measures are unsigned densities throughout. Singular orbits are declared
//! by each model and excluded from orbit-space densities.

pub mod adjoint;
pub mod catalog;
mod group;
mod model;
pub mod poisson;
mod volume;

pub use adjoint::{
    adjoint_orbit_density, su2_cartan, weyl_integration_check, CartanData, OrbitDensity, RootData,
    TestFunction, WeylReport,
};
pub use catalog::{run_example, CatalogOutput, Params, MODEL_NAMES};
pub use group::{quaternion_rotate, GroupElement, GroupKind, GroupModel};
pub use model::{
    ActionKind, ActionModel, Chart, Density, DensityMode, OrbitChart, ParamFn, PointFn,
};
pub use poisson::{
    symplectic_bk_volume, Coefficient, PoissonFamilyModel, SymplecticModel,
};
pub use volume::{Comparison, InvarianceReport};
