//! Periodic lattice discretisation of matter, Higgs and gauge fields.

pub mod density;
pub mod fields;
pub mod grid;
pub mod ops;
pub mod study;

pub use density::{
    density_registry, higgs_density, klein_gordon_density, total_action, yang_mills_density, Configuration,
    DensityParams, LagrangianDensity,
};
pub use fields::{FieldStrength, GaugeField, GaugeTransformField, MultipletField};
pub use grid::{Grid, Metric};
pub use ops::{covariant_derivative, field_strength, gauge_transform_gauge, gauge_transform_matter};
pub use study::{covariance_convergence, quadratic_expansion_check};
