//! Lagrangian densities and the discrete action.
//!
//! Indices are raised with the grid metric. Algebra contractions use the
//! Euclidean product on generator coefficients, which is the invariant scalar
//! product when the generators are orthonormal with couplings folded in.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Result, SsbError};
use crate::higgs::Potential;
use crate::lie::{realify, GeneratorSet};
use crate::registry::{Named, Registry};

use super::fields::{FieldStrength, GaugeField, MultipletField};
use super::grid::Grid;
use super::ops::{covariant_derivative, field_strength};

/// `-1/4 sum_{mu,nu} eta^{mu mu} eta^{nu nu} |F_{mu nu}|^2`.
pub fn yang_mills_density(grid: &Grid, f: &FieldStrength) -> Vec<f64> {
    let dim = grid.dim();
    (0..f.len())
        .map(|s| {
            let mut acc = 0.0;
            for mu in 0..dim {
                for nu in 0..dim {
                    let x = f.at(s, mu, nu);
                    acc += grid.eta(mu) * grid.eta(nu) * x.dot(x);
                }
            }
            -0.25 * acc
        })
        .collect()
}

fn kinetic(gs: &GeneratorSet, grid: &Grid, a: &GaugeField, psi: &MultipletField) -> Result<Vec<f64>> {
    let mut out = vec![0.0; grid.len()];
    for mu in 0..grid.dim() {
        let d = covariant_derivative(gs, grid, a, psi, mu)?;
        let eta = grid.eta(mu);
        for (acc, v) in out.iter_mut().zip(d.values()) {
            *acc += eta * v.norm_squared();
        }
    }
    Ok(out)
}

/// `sum_mu eta^{mu mu} |nabla_mu psi|^2 - m^2 |psi|^2`.
pub fn klein_gordon_density(
    gs: &GeneratorSet,
    grid: &Grid,
    a: &GaugeField,
    psi: &MultipletField,
    mass: f64,
) -> Result<Vec<f64>> {
    let mut out = kinetic(gs, grid, a, psi)?;
    for (acc, v) in out.iter_mut().zip(psi.values()) {
        *acc -= mass * mass * v.norm_squared();
    }
    Ok(out)
}

/// `sum_mu eta^{mu mu} |nabla_mu phi|^2 - V(phi)`.
pub fn higgs_density(
    gs: &GeneratorSet,
    grid: &Grid,
    a: &GaugeField,
    phi: &MultipletField,
    potential: &dyn Potential,
) -> Result<Vec<f64>> {
    let mut out = kinetic(gs, grid, a, phi)?;
    for (acc, v) in out.iter_mut().zip(phi.values()) {
        *acc -= potential.value(&realify(v));
    }
    Ok(out)
}

/// Fields a density may read. Absent fields make the densities that need them fail.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub grid: Grid,
    pub gauge: GaugeField,
    pub matter: Option<MultipletField>,
    pub higgs: Option<MultipletField>,
}

pub trait LagrangianDensity: Named + Send + Sync {
    fn density(&self, gs: &GeneratorSet, config: &Configuration) -> Result<Vec<f64>>;
}

pub struct YangMills;

impl Named for YangMills {
    fn name(&self) -> &str {
        "yang-mills"
    }
}

impl LagrangianDensity for YangMills {
    fn density(&self, gs: &GeneratorSet, config: &Configuration) -> Result<Vec<f64>> {
        let f = field_strength(gs, &config.grid, &config.gauge)?;
        Ok(yang_mills_density(&config.grid, &f))
    }
}

pub struct KleinGordon {
    pub mass: f64,
}

impl Named for KleinGordon {
    fn name(&self) -> &str {
        "klein-gordon"
    }
}

impl LagrangianDensity for KleinGordon {
    fn density(&self, gs: &GeneratorSet, config: &Configuration) -> Result<Vec<f64>> {
        let psi = config
            .matter
            .as_ref()
            .ok_or_else(|| SsbError::invalid("configuration", "klein-gordon density needs a matter field"))?;
        klein_gordon_density(gs, &config.grid, &config.gauge, psi, self.mass)
    }
}

pub struct HiggsDensity {
    pub potential: Arc<dyn Potential>,
}

impl Named for HiggsDensity {
    fn name(&self) -> &str {
        "higgs"
    }
}

impl LagrangianDensity for HiggsDensity {
    fn density(&self, gs: &GeneratorSet, config: &Configuration) -> Result<Vec<f64>> {
        let phi = config
            .higgs
            .as_ref()
            .ok_or_else(|| SsbError::invalid("configuration", "higgs density needs a Higgs field"))?;
        higgs_density(gs, &config.grid, &config.gauge, phi, self.potential.as_ref())
    }
}

/// Parameters a density kind may need when it is built by name.
#[derive(Clone, Default)]
pub struct DensityParams {
    pub mass: f64,
    pub potential: Option<Arc<dyn Potential>>,
}

pub trait DensityKind: Named + Send + Sync {
    fn build(&self, params: &DensityParams) -> Result<Arc<dyn LagrangianDensity>>;
}

struct Kind {
    name: &'static str,
    build: fn(&DensityParams) -> Result<Arc<dyn LagrangianDensity>>,
}

impl Named for Kind {
    fn name(&self) -> &str {
        self.name
    }
}

impl DensityKind for Kind {
    fn build(&self, params: &DensityParams) -> Result<Arc<dyn LagrangianDensity>> {
        (self.build)(params)
    }
}

pub fn density_registry() -> Registry<dyn DensityKind> {
    let mut reg: Registry<dyn DensityKind> = Registry::new("Lagrangian density");
    reg.register(Arc::new(Kind {
        name: "yang-mills",
        build: |_| Ok(Arc::new(YangMills)),
    }));
    reg.register(Arc::new(Kind {
        name: "klein-gordon",
        build: |p| Ok(Arc::new(KleinGordon { mass: p.mass })),
    }));
    reg.register(Arc::new(Kind {
        name: "higgs",
        build: |p| {
            let potential = p
                .potential
                .clone()
                .ok_or_else(|| SsbError::invalid("higgs density", "a potential is required"))?;
            Ok(Arc::new(HiggsDensity { potential }))
        },
    }));
    reg
}

/// Pairwise summation; the split points depend only on the length, so the
/// result is reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `h^D` times the summed densities.
pub fn total_action(
    gs: &GeneratorSet,
    config: &Configuration,
    densities: &[&dyn LagrangianDensity],
) -> Result<f64> {
    let mut total = vec![0.0; config.grid.len()];
    for d in densities {
        for (acc, x) in total.iter_mut().zip(d.density(gs, config)?) {
            *acc += x;
        }
    }
    Ok(config.grid.cell_volume() * pairwise_sum(&total))
}

/// Named densities summed per site, for callers that select them at runtime.
pub fn densities_by_name(
    names: &[&str],
    params: &DensityParams,
) -> Result<BTreeMap<String, Arc<dyn LagrangianDensity>>> {
    let reg = density_registry();
    names
        .iter()
        .map(|n| Ok((n.to_string(), reg.get(n)?.build(params)?)))
        .collect()
}
