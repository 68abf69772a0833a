//! Unitary gauge: rotating a Higgs value so that its Goldstone components vanish.
//!
//! The point solver maximises `f(U) = Re<U phi, v0>` over group elements generated
//! by the broken directions. Its gradient along a broken generator `a_j` is
//! `-s_j(U phi)` (minus the fiber derivative) and its Hessian is the symmetrised
//! broken Hessian, so stationary points are exactly the unitary-gauge points and
//! Newton's method on `f` is Newton's method on `s = 0` with a merit function
//! that stays well behaved where the Jacobian of `s` is singular.

use crate::breaking::{decompose_shift, SpectrumResult};
use crate::error::{Result, SsbError};
use crate::expm::{MatrixExponential, Pade13};
use crate::lattice::{GaugeTransformField, Grid, MultipletField};
use crate::lie::{AlgebraElement, GeneratorSet};
use crate::linalg::{re_inner, sym_eigen_sorted, CMat, CVec, RMat, RVec};

pub const DEFAULT_TOL_UG: f64 = 1e-10;
pub const DEFAULT_MAX_ITER_UG: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberDerivative {
    pub s: RVec,
}

impl FiberDerivative {
    pub fn norm(&self) -> f64 {
        self.s.norm()
    }
}

/// `s_i = Re<phi, gens[i] v0>`.
pub fn fiber_derivative(gs: &GeneratorSet, v0: &CVec, phi: &CVec) -> Result<FiberDerivative> {
    if v0.len() != gs.n() || phi.len() != gs.n() {
        return Err(SsbError::dimension("Higgs value", gs.n(), phi.len().min(v0.len())));
    }
    let s = RVec::from_iterator(gs.r(), gs.generators().iter().map(|g| re_inner(phi, &(g * v0))));
    Ok(FiberDerivative { s })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoldstoneCheck {
    pub vanishes: bool,
    /// `max |xi_i|`.
    pub defect: f64,
}

pub fn goldstone_vanish_check(spec: &SpectrumResult, v0: &CVec, phi: &CVec, tol: f64) -> Result<GoldstoneCheck> {
    let defect = decompose_shift(spec, phi, v0)?.max_goldstone();
    Ok(GoldstoneCheck {
        vanishes: defect < tol,
        defect,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrokenHessianMatrix {
    /// Symmetrised `B_ij = Re<g phi, a_i a_j v0>`.
    pub b: RMat,
    /// Largest `|B_ij - B_ji|` before symmetrisation.
    pub asymmetry: f64,
}

fn broken_hessian_at(v0: &CVec, w: &CVec, broken: &[CMat]) -> BrokenHessianMatrix {
    let d = broken.len();
    let mut raw = RMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            raw[(i, j)] = re_inner(w, &(&broken[i] * (&broken[j] * v0)));
        }
    }
    let asymmetry = (&raw - raw.transpose()).amax();
    BrokenHessianMatrix {
        b: (&raw + raw.transpose()) * 0.5,
        asymmetry,
    }
}

pub fn broken_hessian(
    gs: &GeneratorSet,
    v0: &CVec,
    phi: &CVec,
    g_elem: &CMat,
    broken_basis: &[AlgebraElement],
) -> Result<BrokenHessianMatrix> {
    if g_elem.nrows() != gs.n() || g_elem.ncols() != gs.n() {
        return Err(SsbError::dimension("group element", gs.n(), g_elem.nrows()));
    }
    let mats = broken_basis.iter().map(|a| gs.matrix(a)).collect::<Result<Vec<_>>>()?;
    let w = g_elem * phi;
    let h = broken_hessian_at(v0, &w, &mats);
    if h.asymmetry > 1e-10 * (1.0 + h.b.amax()) {
        log::warn!(
            "broken Hessian asymmetry {:.3e}: evaluation point is not in the unitary set",
            h.asymmetry
        );
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug)]
pub struct UnitaryGaugeOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for UnitaryGaugeOptions {
    fn default() -> Self {
        UnitaryGaugeOptions {
            tol: DEFAULT_TOL_UG,
            max_iter: DEFAULT_MAX_ITER_UG,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGaugeSolution {
    /// Unitary `U`, a product of exponentials of broken generators (times the
    /// warm start, if one was given).
    pub u: CMat,
    pub transformed: CVec,
    pub iterations: usize,
    pub goldstone_defect: f64,
}

struct Solver<'a> {
    v0: &'a CVec,
    spec: &'a SpectrumResult,
    phi: &'a CVec,
    broken: Vec<CMat>,
    /// Largest spectral norm among the broken matrices; bounds rotation speed.
    rate: f64,
    gs: &'a GeneratorSet,
}

impl Solver<'_> {
    fn f(&self, u: &CMat) -> f64 {
        re_inner(&(u * self.phi), self.v0)
    }

    fn gradient(&self, w: &CVec) -> RVec {
        RVec::from_iterator(self.broken.len(), self.broken.iter().map(|a| -re_inner(w, &(a * self.v0))))
    }

    fn defect(&self, w: &CVec) -> Result<f64> {
        Ok(decompose_shift(self.spec, w, self.v0)?.max_goldstone())
    }

    fn step(&self, u: &CMat, delta: &RVec) -> CMat {
        let mut x = CMat::zeros(self.gs.n(), self.gs.n());
        for (a, t) in self.broken.iter().zip(delta.iter()) {
            x += a * crate::linalg::c(*t, 0.0);
        }
        Pade13.expm(&x) * u
    }

    /// Backtracking on `f` from the full step `delta`; `None` if no increase is found.
    fn search(&self, u: &CMat, f0: f64, slope: f64, delta: &RVec) -> Option<CMat> {
        let mut t = 1.0;
        for _ in 0..40 {
            let cand = self.step(u, &(delta * t));
            let f1 = self.f(&cand);
            if f1 >= f0 + 1e-4 * t * slope && f1 > f0 - 1e-15 * f0.abs().max(1.0) {
                return Some(cand);
            }
            t *= 0.5;
        }
        None
    }
}

fn spectral_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Rotates `phi` into unitary gauge. `warm` seeds the iteration with a previous
/// solution (used by the field sweep).
pub fn solve_unitary_gauge_point_from(
    gs: &GeneratorSet,
    v0: &CVec,
    spec: &SpectrumResult,
    phi: &CVec,
    warm: Option<&CMat>,
    opts: UnitaryGaugeOptions,
) -> Result<UnitaryGaugeSolution> {
    if phi.len() != gs.n() {
        return Err(SsbError::dimension("Higgs value", gs.n(), phi.len()));
    }
    let phi_norm = phi.norm();
    if phi_norm == 0.0 {
        return Err(SsbError::Rejected("Higgs value is zero; no unitary gauge exists there".into()));
    }
    let broken = spec
        .broken_basis
        .iter()
        .map(|a| gs.matrix(a))
        .collect::<Result<Vec<_>>>()?;
    let rate = broken.iter().map(spectral_norm).fold(0.0, f64::max);
    let solver = Solver {
        v0,
        spec,
        phi,
        broken,
        rate,
        gs,
    };
    let n = gs.n();
    let mut u = warm.cloned().unwrap_or_else(|| CMat::identity(n, n));
    let scale = phi_norm.max(1.0);
    let target = opts.tol * scale;
    let d = solver.broken.len();

    for iter in 0..=opts.max_iter {
        let w = &u * phi;
        let defect = solver.defect(&w)?;
        let f0 = solver.f(&u);
        let aligned = f0 >= 0.0 || d == 0;
        if defect < target && aligned {
            // One polishing step when it helps; Newton is quadratic here.
            let mut best = (u.clone(), defect);
            if d > 0 && defect > 0.0 {
                let h = broken_hessian_at(v0, &w, &solver.broken).b;
                if let Some(inv) = h.clone().try_inverse() {
                    let cand = solver.step(&u, &(-(inv * solver.gradient(&w))));
                    let dc = solver.defect(&(&cand * phi))?;
                    if dc < defect {
                        best = (cand, dc);
                    }
                }
            }
            let transformed = &best.0 * phi;
            return Ok(UnitaryGaugeSolution {
                u: best.0,
                transformed,
                iterations: iter,
                goldstone_defect: best.1,
            });
        }
        if iter == opts.max_iter {
            return Err(SsbError::NoConvergence {
                iterations: opts.max_iter,
                residual: defect,
                last: crate::lie::realify(&w).iter().cloned().collect(),
            });
        }

        let grad = solver.gradient(&w);
        let h = broken_hessian_at(v0, &w, &solver.broken).b;
        let (eigs, vecs) = sym_eigen_sorted(&h);
        let smallest = eigs.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
        let max_step = std::f64::consts::FRAC_PI_2 / solver.rate.max(f64::MIN_POSITIVE);

        let mut next = None;
        let negative_definite = eigs.last().is_some_and(|&l| l < -1e-12 * scale);
        if negative_definite {
            // Newton step on f: delta = -H^{-1} grad.
            let mut delta = RVec::zeros(d);
            for (k, &l) in eigs.iter().enumerate() {
                let q = vecs.column(k);
                delta -= q * (q.dot(&grad) / l);
            }
            if delta.norm() > max_step {
                delta *= max_step / delta.norm();
            }
            next = solver.search(&u, f0, grad.dot(&delta), &delta);
        }
        if next.is_none() && grad.norm() > 0.0 {
            let curvature = eigs.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(f64::MIN_POSITIVE);
            let mut delta = &grad / curvature;
            if delta.norm() > max_step {
                delta *= max_step / delta.norm();
            }
            next = solver.search(&u, f0, grad.dot(&delta), &delta);
        }
        if next.is_none() && !aligned {
            // Stationary but anti-aligned: leave along the direction of largest curvature.
            let q: RVec = vecs.column(d - 1).into();
            let mut best: Option<(CMat, f64)> = None;
            for sign in [1.0, -1.0] {
                let mut t = 2.0 * max_step;
                for _ in 0..40 {
                    let cand = solver.step(&u, &(&q * (sign * t)));
                    let f1 = solver.f(&cand);
                    if f1 > f0 + 1e-12 * scale {
                        if best.as_ref().is_none_or(|b| f1 > b.1) {
                            best = Some((cand, f1));
                        }
                        break;
                    }
                    t *= 0.5;
                }
            }
            next = best.map(|b| b.0);
        }
        match next {
            Some(cand) => u = cand,
            None => return Err(SsbError::DegeneratePoint { smallest }),
        }
    }
    unreachable!("loop returns on its last iteration")
}

pub fn solve_unitary_gauge_point(
    gs: &GeneratorSet,
    v0: &CVec,
    spec: &SpectrumResult,
    phi: &CVec,
    opts: UnitaryGaugeOptions,
) -> Result<UnitaryGaugeSolution> {
    solve_unitary_gauge_point_from(gs, v0, spec, phi, None, opts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGaugeField {
    pub sigma: GaugeTransformField,
    pub transformed: MultipletField,
    /// Largest Goldstone component left anywhere on the grid.
    pub max_goldstone: f64,
}

/// Site whose solution seeds `site` in a lexicographic sweep: the neighbour one
/// step back along the last axis with a nonzero coordinate.
fn warm_neighbour(grid: &Grid, site: usize) -> Option<usize> {
    let coords = grid.coords(site);
    (0..grid.dim()).rev().find(|&mu| coords[mu] > 0).map(|mu| grid.shift(site, mu, -1))
}

/// Pointwise unitary gauge over a grid, swept lexicographically with warm starts.
pub fn apply_unitary_gauge_field(
    gs: &GeneratorSet,
    v0: &CVec,
    spec: &SpectrumResult,
    grid: &Grid,
    phi: &MultipletField,
    opts: UnitaryGaugeOptions,
) -> Result<UnitaryGaugeField> {
    if phi.len() != grid.len() {
        return Err(SsbError::dimension("Higgs field sites", grid.len(), phi.len()));
    }
    let mut us: Vec<CMat> = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    let mut max_goldstone = 0.0f64;
    for site in 0..grid.len() {
        let warm = warm_neighbour(grid, site).map(|k| &us[k]);
        let sol = solve_unitary_gauge_point_from(gs, v0, spec, phi.at(site), warm, opts)
            .or_else(|e| match (warm, &e) {
                (Some(_), SsbError::NoConvergence { .. } | SsbError::DegeneratePoint { .. }) => {
                    solve_unitary_gauge_point(gs, v0, spec, phi.at(site), opts)
                }
                _ => Err(e),
            })
            .map_err(|e| SsbError::AtSite {
                site: grid.coords(site),
                source: Box::new(e),
            })?;
        max_goldstone = max_goldstone.max(sol.goldstone_defect);
        values.push(sol.transformed);
        us.push(sol.u);
    }
    Ok(UnitaryGaugeField {
        sigma: GaugeTransformField::new(gs.n(), us)?,
        transformed: MultipletField::new(gs.n(), values)?,
        max_goldstone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breaking::{compute_spectrum, SpectrumOptions};
    use crate::higgs::{HiggsModel, QuarticPotential};
    use crate::lie::random_multiplet;
    use crate::linalg::{c, unitarity_defect};
    use std::sync::Arc;

    fn ew() -> (HiggsModel, CVec, SpectrumResult) {
        let (g, gp, h) = (2.0, 1.0, 0.5);
        let z = c(0.0, 0.0);
        let gens = vec![
            CMat::from_row_slice(2, 2, &[z, c(0.0, g * h), c(0.0, g * h), z]),
            CMat::from_row_slice(2, 2, &[z, c(g * h, 0.0), c(-g * h, 0.0), z]),
            CMat::from_row_slice(2, 2, &[c(0.0, g * h), z, z, c(0.0, -g * h)]),
            CMat::from_row_slice(2, 2, &[c(0.0, gp * h), z, z, c(0.0, gp * h)]),
        ];
        let model = HiggsModel::new(
            GeneratorSet::new(gens, vec![]).unwrap(),
            Arc::new(QuarticPotential::new(2.0, 1.0).unwrap()),
        );
        let v0 = CVec::from_vec(vec![z, c(1.0, 0.0)]);
        let spec = compute_spectrum(&model, &v0, SpectrumOptions::default()).unwrap();
        (model, v0, spec)
    }

    fn cv(a: (f64, f64), b: (f64, f64)) -> CVec {
        CVec::from_vec(vec![c(a.0, a.1), c(b.0, b.1)])
    }

    #[test]
    fn fiber_derivative_examples() {
        let (model, v0, _) = ew();
        let s = fiber_derivative(&model.gens, &v0, &cv((0.0, 0.0), (0.7, 0.0))).unwrap();
        assert_eq!(s.norm(), 0.0);
        assert_eq!(fiber_derivative(&model.gens, &v0, &v0).unwrap().norm(), 0.0);
        let s = fiber_derivative(&model.gens, &v0, &cv((0.3, 0.0), (0.0, 0.0))).unwrap().s;
        assert!((s[1] - 0.3).abs() < 1e-15);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[2], 0.0);
        assert_eq!(s[3], 0.0);
    }

    #[test]
    fn goldstone_check_examples() {
        let (_, v0, spec) = ew();
        let on_line = cv((0.0, 0.0), (3.0, 0.0));
        assert!(goldstone_vanish_check(&spec, &v0, &on_line, 1e-10).unwrap().vanishes);
        let probe = &v0 + crate::lie::unrealify(&spec.orbit_basis[0]);
        let chk = goldstone_vanish_check(&spec, &v0, &probe, 1e-10).unwrap();
        assert!(!chk.vanishes);
        assert!((chk.defect - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn broken_hessian_at_unitary_point_is_negative_definite() {
        let (model, v0, spec) = ew();
        let id = CMat::identity(2, 2);
        let b = broken_hessian(&model.gens, &v0, &cv((0.0, 0.0), (0.8, 0.0)), &id, &spec.broken_basis).unwrap();
        assert!(b.asymmetry < 1e-10);
        let (eigs, _) = sym_eigen_sorted(&b.b);
        assert!(eigs.iter().all(|&l| l < -1e-3));
        let zero = broken_hessian(&model.gens, &v0, &cv((0.0, 0.0), (0.0, 0.0)), &id, &spec.broken_basis).unwrap();
        assert_eq!(zero.b.amax(), 0.0);
    }

    #[test]
    fn rotates_first_component_into_vacuum_line() {
        let (model, v0, spec) = ew();
        let c0 = 0.6;
        let sol =
            solve_unitary_gauge_point(&model.gens, &v0, &spec, &cv((c0, 0.0), (0.0, 0.0)), Default::default())
                .unwrap();
        assert!(sol.goldstone_defect < 1e-10);
        assert!((&sol.transformed - cv((0.0, 0.0), (c0, 0.0))).norm() < 1e-10);
        assert!(unitarity_defect(&sol.u) < 1e-12);
    }

    #[test]
    fn already_unitary_is_accepted_immediately() {
        let (model, v0, spec) = ew();
        let sol =
            solve_unitary_gauge_point(&model.gens, &v0, &spec, &cv((0.0, 0.0), (2.0, 0.0)), Default::default())
                .unwrap();
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.u, CMat::identity(2, 2));
    }

    #[test]
    fn zero_value_is_rejected() {
        let (model, v0, spec) = ew();
        let r = solve_unitary_gauge_point(&model.gens, &v0, &spec, &cv((0.0, 0.0), (0.0, 0.0)), Default::default());
        assert!(matches!(r, Err(SsbError::Rejected(_))));
    }

    #[test]
    fn random_points_and_antipode() {
        let (model, v0, spec) = ew();
        let mut points: Vec<CVec> = (0..100).map(|s| random_multiplet(2, 1000 + s)).collect();
        points.push(cv((0.0, 0.0), (-1.5, 0.0)));
        for phi in points {
            let sol = solve_unitary_gauge_point(&model.gens, &v0, &spec, &phi, Default::default()).unwrap();
            let target = cv((0.0, 0.0), (phi.norm(), 0.0));
            assert!((&sol.transformed - target).norm() < 1e-8, "{phi}");
            assert!((sol.transformed.norm() - phi.norm()).abs() < 1e-12);
            let again =
                solve_unitary_gauge_point(&model.gens, &v0, &spec, &sol.transformed, Default::default()).unwrap();
            assert!((again.u - CMat::identity(2, 2)).norm() < 1e-10);
        }
    }

    #[test]
    fn field_sweep() {
        use crate::lattice::Metric;
        let (model, v0, spec) = ew();
        let grid = Grid::new(vec![6, 5], 0.2, Metric::Euclidean).unwrap();
        let constant = MultipletField::constant(&grid, &cv((0.3, 0.4), (0.5, -0.1)));
        let out = apply_unitary_gauge_field(&model.gens, &v0, &spec, &grid, &constant, Default::default()).unwrap();
        let first = out.sigma.at(0).clone();
        assert!(out.sigma.values().iter().all(|u| (u - &first).norm() < 1e-9));

        let smooth = MultipletField::from_fn(&grid, 2, |s| {
            let x = grid.position(s);
            cv((0.2 * x[0].sin(), 0.1 * x[1]), (1.0 + 0.1 * x[0] * x[1], 0.05))
        })
        .unwrap();
        let out = apply_unitary_gauge_field(&model.gens, &v0, &spec, &grid, &smooth, Default::default()).unwrap();
        assert!(out.max_goldstone < 1e-8);

        let mut vals = smooth.values().to_vec();
        vals[grid.index(&[2, 3])] = cv((0.0, 0.0), (0.0, 0.0));
        let holed = MultipletField::new(2, vals).unwrap();
        match apply_unitary_gauge_field(&model.gens, &v0, &spec, &grid, &holed, Default::default()) {
            Err(SsbError::AtSite { site, .. }) => assert_eq!(site, vec![2, 3]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
