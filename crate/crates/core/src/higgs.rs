//! Higgs sector: invariant potentials, vacuum finding, invariance sampling.
//!
//! Potentials act on the realified multiplet space `R^{2n}`. The quartic family
//! `V(v) = -mu/2 |v|^2 + lambda/2 |v|^4` is built in with analytic derivatives;
//! other potentials plug in through [`CustomPotential`], whose derivatives default
//! to central finite differences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SsbError};
use crate::lie::{random_multiplet, realify, unrealify, GeneratorSet};
use crate::linalg::{sym_eigen_sorted, CVec, RMat, RVec};
use crate::registry::{Named, Registry};

pub const DEFAULT_TOL_VAC: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;

pub trait Potential: Named + Send + Sync {
    fn value(&self, x: &RVec) -> f64;

    fn gradient(&self, x: &RVec) -> RVec {
        fd_gradient(&|y| self.value(y), x)
    }

    fn hessian(&self, x: &RVec) -> RMat {
        fd_jacobian(&|y| self.gradient(y), x)
    }
}

impl fmt::Debug for dyn Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({})", self.name())
    }
}

fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Central-difference gradient of a scalar function.
pub fn fd_gradient(f: &dyn Fn(&RVec) -> f64, x: &RVec) -> RVec {
    let mut g = RVec::zeros(x.len());
    let mut y = x.clone();
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        y[i] = x[i] + h;
        let fp = f(&y);
        y[i] = x[i] - h;
        let fm = f(&y);
        y[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Central-difference Jacobian of a vector function, symmetrised.
pub fn fd_jacobian(f: &dyn Fn(&RVec) -> RVec, x: &RVec) -> RMat {
    let n = x.len();
    let mut jac = RMat::zeros(n, n);
    let mut y = x.clone();
    for j in 0..n {
        let h = fd_step(x[j]);
        y[j] = x[j] + h;
        let fp = f(&y);
        y[j] = x[j] - h;
        let fm = f(&y);
        y[j] = x[j];
        jac.set_column(j, &((fp - fm) / (2.0 * h)));
    }
    (&jac + jac.transpose()) * 0.5
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticPotential {
    pub mu: f64,
    pub lambda: f64,
}

impl QuarticPotential {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(SsbError::invalid("mu", format!("must be positive, got {mu}")));
        }
        if !(lambda > 0.0) {
            return Err(SsbError::invalid("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(QuarticPotential { mu, lambda })
    }

    /// Radius of the vacuum sphere, `sqrt(mu / 2 lambda)`.
    pub fn vacuum_norm(&self) -> f64 {
        (self.mu / (2.0 * self.lambda)).sqrt()
    }
}

impl Named for QuarticPotential {
    fn name(&self) -> &str {
        "quartic"
    }
}

impl Potential for QuarticPotential {
    fn value(&self, x: &RVec) -> f64 {
        let s = x.norm_squared();
        -0.5 * self.mu * s + 0.5 * self.lambda * s * s
    }

    fn gradient(&self, x: &RVec) -> RVec {
        x * (-self.mu + 2.0 * self.lambda * x.norm_squared())
    }

    fn hessian(&self, x: &RVec) -> RMat {
        let n = x.len();
        RMat::identity(n, n) * (-self.mu + 2.0 * self.lambda * x.norm_squared())
            + (x * x.transpose()) * (4.0 * self.lambda)
    }
}

type ValueFn = dyn Fn(&RVec) -> f64 + Send + Sync;
type GradFn = dyn Fn(&RVec) -> RVec + Send + Sync;
type HessFn = dyn Fn(&RVec) -> RMat + Send + Sync;

/// User-supplied potential given as a (value, gradient, Hessian) triple; missing
/// derivatives fall back to finite differences.
pub struct CustomPotential {
    name: String,
    value: Box<ValueFn>,
    gradient: Option<Box<GradFn>>,
    hessian: Option<Box<HessFn>>,
}

impl CustomPotential {
    pub fn new(name: impl Into<String>, value: impl Fn(&RVec) -> f64 + Send + Sync + 'static) -> Self {
        CustomPotential {
            name: name.into(),
            value: Box::new(value),
            gradient: None,
            hessian: None,
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&RVec) -> RVec + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(&RVec) -> RMat + Send + Sync + 'static) -> Self {
        self.hessian = Some(Box::new(h));
        self
    }
}

impl Named for CustomPotential {
    fn name(&self) -> &str {
        &self.name
    }
}

impl Potential for CustomPotential {
    fn value(&self, x: &RVec) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &RVec) -> RVec {
        match &self.gradient {
            Some(g) => g(x),
            None => fd_gradient(&|y| (self.value)(y), x),
        }
    }

    fn hessian(&self, x: &RVec) -> RMat {
        match &self.hessian {
            Some(h) => h(x),
            None => fd_jacobian(&|y| self.gradient(y), x),
        }
    }
}

/// Builds a potential from named real parameters (the `[potential]` section).
pub trait PotentialKind: Named + Send + Sync {
    fn build(&self, params: &BTreeMap<String, f64>) -> Result<Arc<dyn Potential>>;
}

pub struct QuarticKind;

impl Named for QuarticKind {
    fn name(&self) -> &str {
        "quartic"
    }
}

impl PotentialKind for QuarticKind {
    fn build(&self, params: &BTreeMap<String, f64>) -> Result<Arc<dyn Potential>> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| SsbError::invalid(key, "required by the quartic potential"))
        };
        for key in params.keys() {
            if key != "mu" && key != "lambda" {
                return Err(SsbError::invalid(key.as_str(), "unknown quartic potential parameter"));
            }
        }
        Ok(Arc::new(QuarticPotential::new(get("mu")?, get("lambda")?)?))
    }
}

pub fn potential_registry() -> Registry<dyn PotentialKind> {
    let mut reg: Registry<dyn PotentialKind> = Registry::new("potential kind");
    reg.register(Arc::new(QuarticKind));
    reg
}

pub fn potential_value(p: &dyn Potential, v: &CVec) -> f64 {
    p.value(&realify(v))
}

pub fn potential_gradient(p: &dyn Potential, v: &CVec) -> RVec {
    p.gradient(&realify(v))
}

pub fn potential_hessian(p: &dyn Potential, v: &CVec) -> RMat {
    p.hessian(&realify(v))
}

#[derive(Clone)]
pub struct HiggsModel {
    pub gens: GeneratorSet,
    pub potential: Arc<dyn Potential>,
    vacuum: Option<CVec>,
}

impl fmt::Debug for HiggsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HiggsModel")
            .field("n", &self.gens.n())
            .field("r", &self.gens.r())
            .field("potential", &self.potential.name())
            .field("vacuum", &self.vacuum)
            .finish()
    }
}

/// Vacuum diagnostics: gradient norm and smallest Hessian eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VacuumCheck {
    pub gradient_norm: f64,
    pub min_hessian_eigenvalue: f64,
    pub is_vacuum: bool,
}

impl HiggsModel {
    pub fn new(gens: GeneratorSet, potential: Arc<dyn Potential>) -> Self {
        HiggsModel {
            gens,
            potential,
            vacuum: None,
        }
    }

    /// Pins a vacuum after verifying it is a critical point with PSD Hessian.
    pub fn with_vacuum(mut self, v: CVec, tol: f64) -> Result<Self> {
        if v.len() != self.gens.n() {
            return Err(SsbError::dimension("vacuum vector", self.gens.n(), v.len()));
        }
        let check = self.check_vacuum(&v, tol);
        if !check.is_vacuum {
            return Err(SsbError::Rejected(format!(
                "vector is not a vacuum: |grad V| = {:.3e}, min Hessian eigenvalue = {:.3e}",
                check.gradient_norm, check.min_hessian_eigenvalue
            )));
        }
        self.vacuum = Some(v);
        Ok(self)
    }

    pub fn vacuum(&self) -> Option<&CVec> {
        self.vacuum.as_ref()
    }

    pub fn check_vacuum(&self, v: &CVec, tol: f64) -> VacuumCheck {
        let x = realify(v);
        let gradient_norm = self.potential.gradient(&x).norm();
        let hess = self.potential.hessian(&x);
        let scale = hess.amax().max(1.0);
        let (eigs, _) = sym_eigen_sorted(&hess);
        let min_eig = eigs.first().copied().unwrap_or(0.0);
        VacuumCheck {
            gradient_norm,
            min_hessian_eigenvalue: min_eig,
            is_vacuum: gradient_norm < tol && min_eig > -tol * scale,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VacuumOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for VacuumOptions {
    fn default() -> Self {
        VacuumOptions {
            tol: DEFAULT_TOL_VAC,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VacuumSolution {
    pub vacuum: CVec,
    pub iterations: usize,
    pub gradient_norm: f64,
}

/// Damped Newton on the realified space with a backtracking line search. Flat
/// directions (the orbit of the gauge group) are handled with a pseudo-inverse;
/// on an indefinite Hessian the step falls back to steepest descent.
pub fn find_vacuum(model: &HiggsModel, seed: &CVec, opts: VacuumOptions) -> Result<VacuumSolution> {
    let n = model.gens.n();
    if seed.len() != n {
        return Err(SsbError::dimension("vacuum seed", n, seed.len()));
    }
    if seed.iter().all(|z| z.norm() == 0.0) {
        return Err(SsbError::Rejected(
            "vacuum seed must be nonzero (the origin is a stationary point)".into(),
        ));
    }
    let pot = model.potential.as_ref();
    let mut x = realify(seed);
    let mut value = pot.value(&x);

    for iter in 0..opts.max_iter {
        let grad = pot.gradient(&x);
        let gnorm = grad.norm();
        if gnorm < opts.tol {
            let candidate = unrealify(&x);
            if model.check_vacuum(&candidate, opts.tol).is_vacuum {
                return Ok(VacuumSolution {
                    vacuum: candidate,
                    iterations: iter,
                    gradient_norm: gnorm,
                });
            }
            // Critical point that is not a minimum: kick along the most negative
            // curvature direction.
            let (eigs, vecs) = sym_eigen_sorted(&pot.hessian(&x));
            if eigs[0] < 0.0 {
                let dir = vecs.column(0).into_owned();
                x += dir * (1e-3 * x.norm().max(1.0));
                value = pot.value(&x);
                continue;
            }
        }

        let hess = pot.hessian(&x);
        let (eigs, vecs) = sym_eigen_sorted(&hess);
        let scale = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1e-300);
        let mut step = if eigs[0] < -1e-12 * scale {
            -&grad
        } else {
            // Pseudo-inverse Newton step.
            let mut s = RVec::zeros(x.len());
            for (k, &lam) in eigs.iter().enumerate() {
                if lam > 1e-10 * scale {
                    let u = vecs.column(k);
                    s.axpy(-u.dot(&grad) / lam, &u, 1.0);
                }
            }
            s
        };
        if step.dot(&grad) >= 0.0 || step.norm() == 0.0 {
            step = -&grad;
        }

        let slope = step.dot(&grad);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &x + &step * t;
            let trial_value = pot.value(&trial);
            if trial_value <= value + 1e-4 * t * slope {
                x = trial;
                value = trial_value;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No further decrease representable in floating point; accept if the
            // gradient already sits at roundoff level.
            let candidate = unrealify(&x);
            let check = model.check_vacuum(&candidate, opts.tol);
            if check.is_vacuum {
                return Ok(VacuumSolution {
                    vacuum: candidate,
                    iterations: iter + 1,
                    gradient_norm: check.gradient_norm,
                });
            }
            return Err(SsbError::NoConvergence {
                iterations: iter + 1,
                residual: gnorm,
                last: x.iter().copied().collect(),
            });
        }
    }
    let gnorm = pot.gradient(&x).norm();
    let candidate = unrealify(&x);
    if gnorm < opts.tol && model.check_vacuum(&candidate, opts.tol).is_vacuum {
        return Ok(VacuumSolution {
            vacuum: candidate,
            iterations: opts.max_iter,
            gradient_norm: gnorm,
        });
    }
    Err(SsbError::NoConvergence {
        iterations: opts.max_iter,
        residual: gnorm,
        last: x.iter().copied().collect(),
    })
}

/// Largest `|V(exp(X) v) - V(v)|` over deterministic random samples.
///
/// Sample `k` draws its algebra element and vector from seeds derived from
/// `(seed, k)`, so the result does not depend on evaluation order.
pub fn check_potential_invariance(
    model: &HiggsModel,
    samples: usize,
    seed: u64,
    scale: f64,
) -> Result<f64> {
    if samples == 0 {
        return Err(SsbError::invalid("samples", "at least one sample is required"));
    }
    let mut worst = 0.0f64;
    for k in 0..samples as u64 {
        let sub = seed.wrapping_mul(0x1000_0000_01b3).wrapping_add(k);
        let x = model.gens.random_element(sub, scale);
        let v = random_multiplet(model.gens.n(), sub);
        let u = model.gens.exponentiate(&x)?;
        let moved = &u * &v;
        let d = (potential_value(model.potential.as_ref(), &moved)
            - potential_value(model.potential.as_ref(), &v))
        .abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMat};

    fn doublet_model(mu: f64, lambda: f64) -> HiggsModel {
        let h = 0.5;
        let g = 2.0;
        let gp = 1.0;
        let gens = vec![
            CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, g * h), c(0.0, g * h), c(0.0, 0.0)]),
            CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(g * h, 0.0), c(-g * h, 0.0), c(0.0, 0.0)]),
            CMat::from_row_slice(2, 2, &[c(0.0, g * h), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -g * h)]),
            CMat::from_row_slice(2, 2, &[c(0.0, gp * h), c(0.0, 0.0), c(0.0, 0.0), c(0.0, gp * h)]),
        ];
        HiggsModel::new(
            GeneratorSet::new(gens, vec![]).unwrap(),
            Arc::new(QuarticPotential::new(mu, lambda).unwrap()),
        )
    }

    fn cv(entries: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(entries.len(), entries.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn potential_value_examples() {
        let p = QuarticPotential::new(2.0, 1.0).unwrap();
        assert_eq!(potential_value(&p, &cv(&[(0.0, 0.0), (1.0, 0.0)])), -0.5);
        assert_eq!(potential_value(&p, &cv(&[(0.0, 0.0), (0.0, 0.0)])), 0.0);
        assert_eq!(
            potential_value(&p, &cv(&[(1.0, 0.0), (0.0, 0.0)])),
            potential_value(&p, &cv(&[(0.0, 0.0), (1.0, 0.0)]))
        );
    }

    #[test]
    fn parameters_must_be_positive() {
        assert!(QuarticPotential::new(0.0, 1.0).is_err());
        assert!(QuarticPotential::new(1.0, -1.0).is_err());
        assert!(QuarticPotential::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn gradient_vanishes_on_the_vacuum_sphere() {
        let p = QuarticPotential::new(2.0, 1.0).unwrap();
        let r = p.vacuum_norm();
        let v = cv(&[(0.6 * r, 0.0), (0.0, 0.8 * r)]);
        assert!(potential_gradient(&p, &v).norm() < 1e-15);
    }

    #[test]
    fn vacuum_hessian_has_single_eigenvalue_two_mu() {
        let p = QuarticPotential::new(2.0, 1.0).unwrap();
        let hess = potential_hessian(&p, &cv(&[(0.0, 0.0), (1.0, 0.0)]));
        let (eigs, vecs) = sym_eigen_sorted(&hess);
        assert!(eigs[..3].iter().all(|e| e.abs() < 1e-14));
        assert!((eigs[3] - 4.0).abs() < 1e-14);
        // Eigenvector along the realified vacuum direction (x3).
        assert!((vecs[(2, 3)].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let p = QuarticPotential::new(1.3, 0.7).unwrap();
        for seed in 0..50 {
            let x = realify(&random_multiplet(2, seed));
            let g = p.gradient(&x);
            let g_fd = fd_gradient(&|y| p.value(y), &x);
            assert!((&g - &g_fd).norm() <= 1e-6 * g.norm().max(1.0));
            let h = p.hessian(&x);
            let h_fd = fd_jacobian(&|y| p.gradient(y), &x);
            assert!((&h - &h_fd).norm() <= 1e-6 * h.norm().max(1.0));
        }
    }

    #[test]
    fn find_vacuum_examples() {
        let model = doublet_model(2.0, 1.0);
        let sol = find_vacuum(&model, &cv(&[(0.1, 0.0), (0.3, 0.0)]), VacuumOptions::default()).unwrap();
        assert!((sol.vacuum.norm() - 1.0).abs() < 1e-10);

        let on_sphere = cv(&[(0.6, 0.0), (0.0, 0.8)]);
        let sol = find_vacuum(&model, &on_sphere, VacuumOptions::default()).unwrap();
        assert!((&sol.vacuum - &on_sphere).norm() < 1e-9);
        assert_eq!(sol.iterations, 0);

        let model8 = doublet_model(8.0, 1.0);
        for seed in 0..5 {
            let s = random_multiplet(2, seed) * c(10.0, 0.0);
            let sol = find_vacuum(&model8, &s, VacuumOptions::default()).unwrap();
            assert!((sol.vacuum.norm() - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_seed_is_rejected() {
        let model = doublet_model(2.0, 1.0);
        assert!(matches!(
            find_vacuum(&model, &CVec::zeros(2), VacuumOptions::default()),
            Err(SsbError::Rejected(_))
        ));
    }

    #[test]
    fn non_convergence_carries_last_iterate() {
        let model = doublet_model(2.0, 1.0);
        let opts = VacuumOptions { tol: 1e-9, max_iter: 1 };
        match find_vacuum(&model, &cv(&[(1e-6, 0.0), (0.0, 0.0)]), opts) {
            Err(SsbError::NoConvergence { last, iterations, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(last.len(), 4);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn pinned_vacuum_is_verified() {
        let model = doublet_model(2.0, 1.0);
        assert!(model.clone().with_vacuum(cv(&[(0.0, 0.0), (1.0, 0.0)]), 1e-9).is_ok());
        assert!(model.clone().with_vacuum(cv(&[(0.0, 0.0), (0.5, 0.0)]), 1e-9).is_err());
        assert!(model.with_vacuum(CVec::zeros(3), 1e-9).is_err());
    }

    #[test]
    fn invariance_sampling() {
        let model = doublet_model(2.0, 1.0);
        assert!(check_potential_invariance(&model, 100, 7, 2.0).unwrap() < 1e-9);
        assert_eq!(check_potential_invariance(&model, 10, 7, 0.0).unwrap(), 0.0);
        assert!(check_potential_invariance(&model, 0, 7, 1.0).is_err());

        // v^dagger D v with D = diag(1, 3) is not SU(2) invariant.
        let skewed = CustomPotential::new("diagonal", |x: &RVec| {
            x[0] * x[0] + x[1] * x[1] + 3.0 * (x[2] * x[2] + x[3] * x[3])
        });
        let bad = HiggsModel::new(model.gens.clone(), Arc::new(skewed));
        assert!(check_potential_invariance(&bad, 100, 7, 2.0).unwrap() > 0.01);
    }

    #[test]
    fn custom_potential_defaults_to_finite_differences() {
        let quartic = QuarticPotential::new(2.0, 1.0).unwrap();
        let custom = CustomPotential::new("q", move |x: &RVec| quartic.value(x));
        let x = realify(&random_multiplet(2, 11));
        assert!((custom.gradient(&x) - quartic.gradient(&x)).norm() < 1e-7);
        assert!((custom.hessian(&x) - quartic.hessian(&x)).norm() < 1e-4);
    }

    #[test]
    fn registry_builds_quartic() {
        let reg = potential_registry();
        let mut params = BTreeMap::new();
        params.insert("mu".to_string(), 2.0);
        params.insert("lambda".to_string(), 1.0);
        let p = reg.get("quartic").unwrap().build(&params).unwrap();
        assert_eq!(p.name(), "quartic");
        params.insert("kappa".to_string(), 1.0);
        assert!(reg.get("quartic").unwrap().build(&params).is_err());
        assert!(reg.get("sextic").is_err());
    }
}
