//! Numerical studies on smooth periodic data: gauge-covariance convergence
//! orders, exact invariance under constant gauge transformations, and the
//! cubic scaling of the remainder of the quadratic Lagrangian.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::breaking::{decompose_shift, quadratic_lagrangian, SpectrumResult};
use crate::error::{Result, SsbError};
use crate::higgs::{HiggsModel, Potential};
use crate::lie::{realify, unrealify, AlgebraElement, GeneratorSet};
use crate::linalg::{c, frobenius, re_inner, CVec, RVec};

use super::density::{higgs_density, klein_gordon_density, yang_mills_density};
use super::fields::{GaugeField, GaugeTransformField, MultipletField};
use super::grid::{Grid, Metric};
use super::ops::{covariant_derivative, curl, field_strength, gauge_transform_gauge, gauge_transform_matter};

/// A constant plus two unit-wavenumber Fourier modes along random axes of the unit torus.
#[derive(Clone, Debug)]
pub struct SmoothScalar {
    offset: f64,
    modes: Vec<(Vec<f64>, f64, f64)>,
}

impl SmoothScalar {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, amplitude: f64) -> Self {
        let modes = (0..2)
            .map(|_| {
                let mut k = vec![0.0; dim];
                k[rng.random_range(0..dim)] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let amp = amplitude * rng.random_range(-1.0..1.0);
                (k, amp, rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        SmoothScalar {
            offset: amplitude * rng.random_range(-1.0..1.0),
            modes,
        }
    }

    /// Value at `u`, given in units of the period (each coordinate in `[0, 1)`).
    pub fn eval(&self, u: &[f64]) -> f64 {
        self.offset
            + self
                .modes
                .iter()
                .map(|(k, a, p)| a * (2.0 * PI * k.iter().zip(u).map(|(k, x)| k * x).sum::<f64>() + p).sin())
                .sum::<f64>()
    }
}

fn unit_coords(grid: &Grid, site: usize) -> Vec<f64> {
    grid.coords(site)
        .iter()
        .zip(grid.shape())
        .map(|(&c, &n)| c as f64 / n as f64)
        .collect()
}

fn smooth_set(rng: &mut ChaCha8Rng, count: usize, dim: usize, amplitude: f64) -> Vec<SmoothScalar> {
    (0..count).map(|_| SmoothScalar::random(rng, dim, amplitude)).collect()
}

/// Smooth random test data, independent of the grid resolution.
#[derive(Clone, Debug)]
pub struct SmoothData {
    sigma: Vec<SmoothScalar>,
    gauge: Vec<Vec<SmoothScalar>>,
    matter: Vec<SmoothScalar>,
    higgs: Vec<SmoothScalar>,
}

impl SmoothData {
    pub fn random(gs: &GeneratorSet, dim: usize, seed: u64, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SmoothData {
            sigma: smooth_set(&mut rng, gs.r(), dim, amplitude),
            gauge: (0..dim).map(|_| smooth_set(&mut rng, gs.r(), dim, amplitude)).collect(),
            matter: smooth_set(&mut rng, 2 * gs.n(), dim, amplitude),
            higgs: smooth_set(&mut rng, 2 * gs.n(), dim, amplitude),
        }
    }

    fn algebra(set: &[SmoothScalar], u: &[f64]) -> AlgebraElement {
        AlgebraElement::new(RVec::from_iterator(set.len(), set.iter().map(|s| s.eval(u))))
    }

    fn multiplet(set: &[SmoothScalar], u: &[f64], base: Option<&CVec>) -> CVec {
        let v = unrealify(&RVec::from_iterator(set.len(), set.iter().map(|s| s.eval(u))));
        match base {
            Some(b) => b + v,
            None => v,
        }
    }

    pub fn sigma(&self, gs: &GeneratorSet, grid: &Grid) -> Result<GaugeTransformField> {
        let mats = (0..grid.len())
            .map(|s| gs.exponentiate(&Self::algebra(&self.sigma, &unit_coords(grid, s))))
            .collect::<Result<Vec<_>>>()?;
        GaugeTransformField::new(gs.n(), mats)
    }

    pub fn gauge(&self, gs: &GeneratorSet, grid: &Grid) -> Result<GaugeField> {
        GaugeField::from_fn(grid, gs.r(), |s, mu| Self::algebra(&self.gauge[mu], &unit_coords(grid, s)))
    }

    pub fn matter(&self, gs: &GeneratorSet, grid: &Grid) -> Result<MultipletField> {
        MultipletField::from_fn(grid, gs.n(), |s| Self::multiplet(&self.matter, &unit_coords(grid, s), None))
    }

    pub fn higgs(&self, gs: &GeneratorSet, grid: &Grid, base: &CVec) -> Result<MultipletField> {
        MultipletField::from_fn(grid, gs.n(), |s| {
            Self::multiplet(&self.higgs, &unit_coords(grid, s), Some(base))
        })
    }
}

/// Errors of one configuration under one gauge transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceErrors {
    /// `max |nabla'(sigma psi) - sigma nabla psi|`.
    pub derivative: f64,
    /// `max |F' - sigma F sigma^-1|` (Frobenius, as matrices).
    pub field_strength: f64,
    /// `max |L(transformed) - L(original)|` per density name.
    pub densities: BTreeMap<String, f64>,
    pub projection_defect: f64,
}

impl CovarianceErrors {
    pub fn all(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        [
            (DERIVATIVE_KEY.to_string(), self.derivative),
            (FIELD_STRENGTH_KEY.to_string(), self.field_strength),
        ]
        .into_iter()
        .chain(self.densities.iter().map(|(k, v)| (format!("density:{k}"), *v)))
    }
}

/// Sites whose coordinates are all multiples of `stride`.
fn sampled_sites(grid: &Grid, stride: usize) -> Vec<usize> {
    (0..grid.len())
        .filter(|&s| grid.coords(s).iter().all(|c| c % stride == 0))
        .collect()
}

fn max_abs_diff(sites: &[usize], a: &[f64], b: &[f64]) -> f64 {
    sites.iter().map(|&s| (a[s] - b[s]).abs()).fold(0.0, f64::max)
}

pub const KG_TEST_MASS: f64 = 1.0;
/// Amplitude of the smooth test data; small enough that 16 points per period
/// are already in the asymptotic regime.
pub const STUDY_AMPLITUDE: f64 = 0.1;

/// Compares the original and `sigma`-transformed configuration on `grid`,
/// measuring on the sites whose coordinates are multiples of `stride` (the
/// points shared with a grid `stride` times coarser).
#[allow(clippy::too_many_arguments)]
pub fn covariance_errors(
    gs: &GeneratorSet,
    potential: &dyn Potential,
    grid: &Grid,
    sigma: &GaugeTransformField,
    a: &GaugeField,
    psi: &MultipletField,
    phi: &MultipletField,
    stride: usize,
) -> Result<CovarianceErrors> {
    let sites = sampled_sites(grid, stride.max(1));
    let transformed = gauge_transform_gauge(gs, grid, sigma, a)?;
    let a2 = &transformed.field;
    let psi2 = gauge_transform_matter(grid, sigma, psi)?;
    let phi2 = gauge_transform_matter(grid, sigma, phi)?;

    let mut derivative = 0.0f64;
    for mu in 0..grid.dim() {
        let lhs = covariant_derivative(gs, grid, a2, &psi2, mu)?;
        let rhs = gauge_transform_matter(grid, sigma, &covariant_derivative(gs, grid, a, psi, mu)?)?;
        for &s in &sites {
            derivative = derivative.max((lhs.at(s) - rhs.at(s)).norm());
        }
    }

    let f1 = field_strength(gs, grid, a)?;
    let f2 = field_strength(gs, grid, a2)?;
    let mut fs = 0.0f64;
    for &s in &sites {
        let u = sigma.at(s);
        for mu in 0..grid.dim() {
            for nu in mu + 1..grid.dim() {
                let conj = u * gs.matrix(f1.at(s, mu, nu))? * u.adjoint();
                fs = fs.max(frobenius(&(gs.matrix(f2.at(s, mu, nu))? - conj)));
            }
        }
    }

    let mut densities = BTreeMap::new();
    densities.insert(
        "yang-mills".to_string(),
        max_abs_diff(&sites, &yang_mills_density(grid, &f1), &yang_mills_density(grid, &f2)),
    );
    densities.insert(
        "klein-gordon".to_string(),
        max_abs_diff(
            &sites,
            &klein_gordon_density(gs, grid, a, psi, KG_TEST_MASS)?,
            &klein_gordon_density(gs, grid, a2, &psi2, KG_TEST_MASS)?,
        ),
    );
    densities.insert(
        "higgs".to_string(),
        max_abs_diff(
            &sites,
            &higgs_density(gs, grid, a, phi, potential)?,
            &higgs_density(gs, grid, a2, &phi2, potential)?,
        ),
    );
    Ok(CovarianceErrors {
        derivative,
        field_strength: fs,
        densities,
        projection_defect: transformed.projection_defect,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub sizes: Vec<usize>,
    pub errors: Vec<CovarianceErrors>,
    /// `log2(e(N) / e(2N))` per quantity, one entry per refinement.
    pub orders: BTreeMap<String, Vec<f64>>,
}

pub const DERIVATIVE_KEY: &str = "covariant-derivative";
pub const FIELD_STRENGTH_KEY: &str = "field-strength";

impl ConvergenceStudy {
    /// All measured orders, densities included, lie in `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.orders.values().flatten().all(|&p| p >= lo && p <= hi)
    }

    /// Orders of the covariant-derivative and field-strength defects.
    pub fn covariance_orders(&self) -> Vec<f64> {
        [DERIVATIVE_KEY, FIELD_STRENGTH_KEY]
            .iter()
            .flat_map(|k| self.orders.get(*k).cloned().unwrap_or_default())
            .collect()
    }
}

/// Runs the covariance comparison on `N^dim` grids of unit period for each
/// `N` in `sizes` (each the double of the previous), with the same smooth data.
/// Errors are measured on the points of the coarsest grid, so every refinement
/// compares the same physical points.
pub fn covariance_convergence(
    gs: &GeneratorSet,
    potential: &dyn Potential,
    dim: usize,
    sizes: &[usize],
    metric: Metric,
    seed: u64,
) -> Result<ConvergenceStudy> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(SsbError::invalid("grid sizes", "need at least two sizes, each double the previous"));
    }
    let data = SmoothData::random(gs, dim, seed, STUDY_AMPLITUDE);
    let base = CVec::from_element(gs.n(), c(0.5, 0.0));
    let mut errors = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let stride = n / sizes[0];
        let grid = Grid::new(vec![n; dim], 1.0 / n as f64, metric)?;
        errors.push(covariance_errors(
            gs,
            potential,
            &grid,
            &data.sigma(gs, &grid)?,
            &data.gauge(gs, &grid)?,
            &data.matter(gs, &grid)?,
            &data.higgs(gs, &grid, &base)?,
            stride,
        )?);
    }
    let mut orders: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for pair in errors.windows(2) {
        for ((name, coarse), (_, fine)) in pair[0].all().zip(pair[1].all()) {
            orders.entry(name).or_default().push((coarse / fine).log2());
        }
    }
    Ok(ConvergenceStudy {
        sizes: sizes.to_vec(),
        errors,
        orders,
    })
}

/// Largest density change under a constant gauge transformation `exp(X)`.
pub fn constant_gauge_invariance(
    gs: &GeneratorSet,
    potential: &dyn Potential,
    grid: &Grid,
    x: &AlgebraElement,
    seed: u64,
) -> Result<f64> {
    let data = SmoothData::random(gs, grid.dim(), seed, STUDY_AMPLITUDE);
    let sigma = GaugeTransformField::constant(grid, &gs.exponentiate(x)?)?;
    let base = CVec::from_element(gs.n(), c(0.5, 0.0));
    let errs = covariance_errors(
        gs,
        potential,
        grid,
        &sigma,
        &data.gauge(gs, grid)?,
        &data.matter(gs, grid)?,
        &data.higgs(gs, grid, &base)?,
        1,
    )?;
    Ok(errs.densities.values().cloned().fold(0.0, f64::max))
}

/// Perturbation around the vacuum: Higgs shift in unitary gauge plus a gauge field.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub dphi: MultipletField,
    pub a: GaugeField,
}

/// Smooth random perturbation whose Higgs part lies along the `f_j` only.
pub fn unitary_perturbation(
    gs: &GeneratorSet,
    spec: &SpectrumResult,
    grid: &Grid,
    seed: u64,
) -> Result<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = smooth_set(&mut rng, spec.ortho_basis.len(), grid.dim(), 0.5);
    let gauge: Vec<Vec<SmoothScalar>> = (0..grid.dim()).map(|_| smooth_set(&mut rng, gs.r(), grid.dim(), 0.5)).collect();
    let dim2 = 2 * gs.n();
    let dphi = MultipletField::from_fn(grid, gs.n(), |s| {
        let u = unit_coords(grid, s);
        let mut x = RVec::zeros(dim2);
        for (f, e) in spec.ortho_basis.iter().zip(&eta) {
            x.axpy(e.eval(&u) / SQRT_2, f, 1.0);
        }
        unrealify(&x)
    })?;
    let a = GaugeField::from_fn(grid, gs.r(), |s, mu| {
        let u = unit_coords(grid, s);
        AlgebraElement::new(RVec::from_iterator(gs.r(), gauge[mu].iter().map(|g| g.eval(&u))))
    })?;
    Ok(Perturbation { dphi, a })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticCheck {
    pub eps: f64,
    /// `max |L(v0 + eps dPhi, eps a) - (L2 - V(v0))|`.
    pub remainder: f64,
    /// `max |sum_mu eta^{mu mu} 2 Re<D_mu dPhi, a_mu v0>|`, zero in unitary gauge.
    pub cross_term: f64,
}

fn scalar_diff(grid: &Grid, values: &[f64], site: usize, mu: usize) -> f64 {
    (values[grid.shift(site, mu, 1)] - values[grid.shift(site, mu, -1)]) / (2.0 * grid.h())
}

/// Full Higgs plus Yang-Mills density at `(v0 + eps dPhi, eps a)` against the
/// quadratic Lagrangian assembled from the spectrum's coefficient tables.
pub fn quadratic_expansion_check(
    model: &HiggsModel,
    spec: &SpectrumResult,
    grid: &Grid,
    pert: &Perturbation,
    eps: f64,
) -> Result<QuadraticCheck> {
    let gs = &model.gens;
    let v0 = &spec.vacuum;
    pert.dphi.check_grid(grid)?;
    pert.a.check_grid(grid)?;
    for s in 0..grid.len() {
        let shifted = v0 + pert.dphi.at(s);
        let goldstone = decompose_shift(spec, &shifted, v0)?.max_goldstone();
        if goldstone > 1e-10 * (1.0 + pert.dphi.at(s).norm()) {
            return Err(SsbError::AtSite {
                site: grid.coords(s),
                source: Box::new(SsbError::NotUnitaryGauge { defect: goldstone }),
            });
        }
    }
    let report = quadratic_lagrangian(spec, model);

    // Full Lagrangian.
    let phi = MultipletField::from_fn(grid, gs.n(), |s| v0 + pert.dphi.at(s) * c(eps, 0.0))?;
    let a = pert.a.scaled(eps);
    let mut full = higgs_density(gs, grid, &a, &phi, model.potential.as_ref())?;
    let ym = yang_mills_density(grid, &field_strength(gs, grid, &a)?);
    for (x, y) in full.iter_mut().zip(ym) {
        *x += y;
    }

    // Quadratic model, per unit eps^2.
    let etas: Vec<Vec<f64>> = report
        .higgs
        .iter()
        .map(|t| {
            pert.dphi
                .values()
                .iter()
                .map(|v| SQRT_2 * t.direction.dot(&realify(v)))
                .collect()
        })
        .collect();
    let mut all_alphas: Vec<&AlgebraElement> = report.broken.iter().map(|b| &b.generator).collect();
    all_alphas.extend(report.unbroken.iter());
    let dim = grid.dim();
    let mut remainder = 0.0f64;
    let mut cross_term = 0.0f64;
    for s in 0..grid.len() {
        let mut q = 0.0;
        for (t, eta) in report.higgs.iter().zip(&etas) {
            let kin: f64 = (0..dim).map(|mu| grid.eta(mu) * scalar_diff(grid, eta, s, mu).powi(2)).sum();
            q += 0.5 * kin - 0.5 * t.mass_squared * eta[s] * eta[s];
        }
        for mu in 0..dim {
            let a_mu = pert.a.at(s, mu);
            let mass: f64 = report
                .broken
                .iter()
                .map(|b| 0.5 * b.mass * b.mass * b.generator.dot(a_mu).powi(2))
                .sum();
            q += grid.eta(mu) * mass;
        }
        let mut ym = 0.0;
        for mu in 0..dim {
            for nu in 0..dim {
                if mu == nu {
                    continue;
                }
                let k = curl(grid, &pert.a, s, mu, nu);
                let sq: f64 = all_alphas.iter().map(|al| al.coeffs().dot(&k).powi(2)).sum();
                ym += grid.eta(mu) * grid.eta(nu) * sq;
            }
        }
        q -= 0.25 * ym;
        let model_value = eps * eps * q - report.constant;
        remainder = remainder.max((full[s] - model_value).abs());

        let mut cross = 0.0;
        for mu in 0..dim {
            let d = (pert.dphi.at(grid.shift(s, mu, 1)) - pert.dphi.at(grid.shift(s, mu, -1))) / c(2.0 * grid.h(), 0.0);
            cross += grid.eta(mu) * 2.0 * re_inner(&d, &gs.act(pert.a.at(s, mu), v0)?);
        }
        cross_term = cross_term.max(cross.abs());
    }
    Ok(QuadraticCheck {
        eps,
        remainder,
        cross_term,
    })
}

/// `remainder(eps) / remainder(eps / 2)`; close to 8 when the remainder is cubic.
pub fn cubic_remainder_ratio(
    model: &HiggsModel,
    spec: &SpectrumResult,
    grid: &Grid,
    pert: &Perturbation,
    eps: f64,
) -> Result<(f64, QuadraticCheck, QuadraticCheck)> {
    let big = quadratic_expansion_check(model, spec, grid, pert, eps)?;
    let small = quadratic_expansion_check(model, spec, grid, pert, eps / 2.0)?;
    Ok((big.remainder / small.remainder, big, small))
}
