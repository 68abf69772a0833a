//! Gauge transformations, covariant derivatives and field strength with
//! periodic second-order central differences.

use num_complex::Complex64;

use crate::error::{Result, SsbError};
use crate::lie::{AlgebraElement, GeneratorSet, DEFAULT_TOL_ALG};
use crate::linalg::{frobenius, CMat, CVec, RVec};

use super::fields::{FieldStrength, GaugeField, GaugeTransformField, MultipletField};
use super::grid::Grid;

fn check_mu(grid: &Grid, mu: usize) -> Result<()> {
    if mu >= grid.dim() {
        return Err(SsbError::invalid("direction", format!("{mu} is out of range for a {}-dimensional grid", grid.dim())));
    }
    Ok(())
}

fn diff_vec(grid: &Grid, values: &[CVec], site: usize, mu: usize) -> CVec {
    let fwd = &values[grid.shift(site, mu, 1)];
    let bwd = &values[grid.shift(site, mu, -1)];
    (fwd - bwd).unscale(2.0 * grid.h())
}

fn diff_mat(grid: &Grid, values: &[CMat], site: usize, mu: usize) -> CMat {
    let fwd = &values[grid.shift(site, mu, 1)];
    let bwd = &values[grid.shift(site, mu, -1)];
    (fwd - bwd).unscale(2.0 * grid.h())
}

fn diff_coeffs(grid: &Grid, a: &GaugeField, site: usize, nu: usize, mu: usize) -> RVec {
    let fwd = a.at(grid.shift(site, mu, 1), nu).coeffs();
    let bwd = a.at(grid.shift(site, mu, -1), nu).coeffs();
    (fwd - bwd) / (2.0 * grid.h())
}

/// Central-difference `d_mu` of a multiplet field.
pub fn partial(grid: &Grid, psi: &MultipletField, mu: usize) -> Result<MultipletField> {
    psi.check_grid(grid)?;
    check_mu(grid, mu)?;
    let values = (0..grid.len()).map(|s| diff_vec(grid, psi.values(), s, mu)).collect();
    MultipletField::new(psi.n(), values)
}

/// `(sigma . psi)(x) = sigma(x) psi(x)`.
pub fn gauge_transform_matter(grid: &Grid, sigma: &GaugeTransformField, psi: &MultipletField) -> Result<MultipletField> {
    sigma.check_grid(grid)?;
    psi.check_grid(grid)?;
    if sigma.n() != psi.n() {
        return Err(SsbError::dimension("gauge transformation vs multiplet", psi.n(), sigma.n()));
    }
    let values = sigma.values().iter().zip(psi.values()).map(|(u, v)| u * v).collect();
    MultipletField::new(psi.n(), values)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformedGauge {
    pub field: GaugeField,
    /// Largest Frobenius residual of the projection onto the generator span.
    pub projection_defect: f64,
    pub tol: f64,
}

/// Third-difference estimate of `max |d^3 sigma|`, the scale of the O(h^2)
/// error that pushes `(D sigma) sigma^-1` off the algebra.
fn third_derivative_scale(grid: &Grid, sigma: &GaugeTransformField) -> f64 {
    let h3 = 2.0 * grid.h().powi(3);
    let mut worst = 0.0f64;
    for site in 0..grid.len() {
        for mu in 0..grid.dim() {
            let p2 = sigma.at(grid.shift(site, mu, 2));
            let p1 = sigma.at(grid.shift(site, mu, 1));
            let m1 = sigma.at(grid.shift(site, mu, -1));
            let m2 = sigma.at(grid.shift(site, mu, -2));
            let d3 = (p2 - p1 * Complex64::new(2.0, 0.0) + m1 * Complex64::new(2.0, 0.0) - m2).unscale(h3);
            worst = worst.max(frobenius(&d3));
        }
    }
    worst
}

/// Default projection tolerance: `1e-6 (1 + max|A|) + (h^2 / 3) max|d^3 sigma|`,
/// twice the leading truncation error of the central difference.
pub fn projection_tolerance(grid: &Grid, sigma: &GaugeTransformField, a: &GaugeField) -> f64 {
    1e-6 * (1.0 + a.max_norm()) + grid.h().powi(2) / 3.0 * third_derivative_scale(grid, sigma)
}

/// `A'_mu = sigma A_mu sigma^-1 - (D_mu sigma) sigma^-1`, projected onto the generators.
pub fn gauge_transform_gauge(
    gs: &GeneratorSet,
    grid: &Grid,
    sigma: &GaugeTransformField,
    a: &GaugeField,
) -> Result<TransformedGauge> {
    let tol = projection_tolerance(grid, sigma, a);
    gauge_transform_gauge_with_tol(gs, grid, sigma, a, tol)
}

pub fn gauge_transform_gauge_with_tol(
    gs: &GeneratorSet,
    grid: &Grid,
    sigma: &GaugeTransformField,
    a: &GaugeField,
    tol: f64,
) -> Result<TransformedGauge> {
    sigma.check_grid(grid)?;
    a.check_grid(grid)?;
    if sigma.n() != gs.n() {
        return Err(SsbError::dimension("gauge transformation", gs.n(), sigma.n()));
    }
    let mut defect = 0.0f64;
    let mut values = Vec::with_capacity(grid.len());
    for site in 0..grid.len() {
        let u = sigma.at(site);
        let u_inv = u.adjoint();
        let mut row = Vec::with_capacity(grid.dim());
        for mu in 0..grid.dim() {
            let conj = u * gs.matrix(a.at(site, mu))? * &u_inv;
            let m = conj - diff_mat(grid, sigma.values(), site, mu) * &u_inv;
            let (x, d) = gs.project(&m);
            defect = defect.max(d);
            row.push(x);
        }
        values.push(row);
    }
    if defect > tol {
        return Err(SsbError::NotAlgebraValued { defect, tol });
    }
    Ok(TransformedGauge {
        field: GaugeField::new(gs.r(), grid.dim(), values)?,
        projection_defect: defect,
        tol,
    })
}

/// `D_mu psi + A_mu . psi`.
pub fn covariant_derivative(
    gs: &GeneratorSet,
    grid: &Grid,
    a: &GaugeField,
    psi: &MultipletField,
    mu: usize,
) -> Result<MultipletField> {
    a.check_grid(grid)?;
    psi.check_grid(grid)?;
    check_mu(grid, mu)?;
    let mut values = Vec::with_capacity(grid.len());
    for site in 0..grid.len() {
        values.push(diff_vec(grid, psi.values(), site, mu) + gs.act(a.at(site, mu), psi.at(site))?);
    }
    MultipletField::new(psi.n(), values)
}

/// Discrete curl `D_mu A_nu - D_nu A_mu` in coefficients.
pub fn curl(grid: &Grid, a: &GaugeField, site: usize, mu: usize, nu: usize) -> RVec {
    diff_coeffs(grid, a, site, nu, mu) - diff_coeffs(grid, a, site, mu, nu)
}

/// `F_{mu nu} = D_mu A_nu - D_nu A_mu + [A_mu, A_nu]`.
pub fn field_strength(gs: &GeneratorSet, grid: &Grid, a: &GaugeField) -> Result<FieldStrength> {
    a.check_grid(grid)?;
    if a.r() != gs.r() {
        return Err(SsbError::dimension("gauge field coefficients", gs.r(), a.r()));
    }
    if gs.closure_defect() > DEFAULT_TOL_ALG {
        return Err(SsbError::ClosureFailure {
            defect: gs.closure_defect(),
        });
    }
    let dim = grid.dim();
    let mut values = Vec::with_capacity(grid.len());
    for site in 0..grid.len() {
        let mut f = vec![AlgebraElement::zero(gs.r()); dim * dim];
        for mu in 0..dim {
            for nu in mu + 1..dim {
                let bracket = gs.bracket(a.at(site, mu), a.at(site, nu));
                let val = AlgebraElement::new(curl(grid, a, site, mu, nu) + bracket.coeffs());
                f[nu * dim + mu] = val.scaled(-1.0);
                f[mu * dim + nu] = val;
            }
        }
        values.push(f);
    }
    Ok(FieldStrength { dim, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::element;
    use crate::linalg::c;
    use crate::lattice::grid::Metric;

    fn u1() -> GeneratorSet {
        GeneratorSet::new(vec![CMat::from_element(1, 1, c(0.0, 1.0))], vec![]).unwrap()
    }

    fn su2() -> GeneratorSet {
        let z = c(0.0, 0.0);
        let h = 0.5;
        GeneratorSet::new(
            vec![
                CMat::from_row_slice(2, 2, &[z, c(0.0, h), c(0.0, h), z]),
                CMat::from_row_slice(2, 2, &[z, c(h, 0.0), c(-h, 0.0), z]),
                CMat::from_row_slice(2, 2, &[c(0.0, h), z, z, c(0.0, -h)]),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn identity_transform_is_exact() {
        let gs = su2();
        let grid = Grid::new(vec![6, 5], 0.3, Metric::Euclidean).unwrap();
        let a = GaugeField::from_fn(&grid, 3, |s, mu| element(&[s as f64 * 0.01, mu as f64, -0.2])).unwrap();
        let out = gauge_transform_gauge(&gs, &grid, &GaugeTransformField::identity(&grid, 2), &a).unwrap();
        assert!(out.field.max_distance(&a) < 1e-15);
        let zero = GaugeField::zeros(&grid, 3);
        let u = gs.exponentiate(&element(&[0.3, -0.7, 1.1])).unwrap();
        let sigma = GaugeTransformField::constant(&grid, &u).unwrap();
        let out = gauge_transform_gauge(&gs, &grid, &sigma, &zero).unwrap();
        assert!(out.field.max_norm() < 1e-15);
    }

    #[test]
    fn abelian_transform_matches_analytic_derivative() {
        let gs = u1();
        let mut errors = Vec::new();
        for n in [16usize, 32] {
            let h = 1.0 / n as f64;
            let grid = Grid::new(vec![n], h, Metric::Euclidean).unwrap();
            let k = 2.0 * std::f64::consts::PI;
            let phase = |x: f64| 0.4 * (k * x).sin();
            let sigma = GaugeTransformField::from_fn(&grid, 1, |s| {
                CMat::from_element(1, 1, Complex64::from_polar(1.0, phase(grid.position(s)[0])))
            })
            .unwrap();
            let a = GaugeField::from_fn(&grid, 1, |_, _| element(&[0.25])).unwrap();
            let out = gauge_transform_gauge(&gs, &grid, &sigma, &a).unwrap();
            // A' = A - i d(phi): coefficient of i is 0.25 - phi'.
            let err = (0..grid.len())
                .map(|s| {
                    let x = grid.position(s)[0];
                    (out.field.at(s, 0).coeffs()[0] - (0.25 - 0.4 * k * (k * x).cos())).abs()
                })
                .fold(0.0, f64::max);
            errors.push(err);
        }
        let order = (errors[0] / errors[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn non_group_sigma_is_rejected() {
        // diag(e^{i phi}, 1) is unitary but outside the su(2) image.
        let gs = su2();
        let grid = Grid::new(vec![8], 0.125, Metric::Euclidean).unwrap();
        let sigma = GaugeTransformField::from_fn(&grid, 2, |s| {
            let phi = (2.0 * std::f64::consts::PI * grid.position(s)[0]).sin();
            CMat::from_diagonal(&CVec::from_vec(vec![Complex64::from_polar(1.0, phi), c(1.0, 0.0)]))
        })
        .unwrap();
        let r = gauge_transform_gauge(&gs, &grid, &sigma, &GaugeField::zeros(&grid, 3));
        assert!(matches!(r, Err(SsbError::NotAlgebraValued { .. })));
    }

    #[test]
    fn covariant_derivative_examples() {
        let gs = su2();
        let grid = Grid::new(vec![8, 8], 0.25, Metric::Euclidean).unwrap();
        let v = CVec::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.5)]);
        let psi = MultipletField::constant(&grid, &v);
        let zero = GaugeField::zeros(&grid, 3);
        let d = covariant_derivative(&gs, &grid, &zero, &psi, 1).unwrap();
        assert!(d.values().iter().all(|x| x.norm() == 0.0));

        let x = element(&[0.4, 0.0, -1.0]);
        let a = GaugeField::from_fn(&grid, 3, |_, _| x.clone()).unwrap();
        let d = covariant_derivative(&gs, &grid, &a, &psi, 0).unwrap();
        let expected = gs.act(&x, &v).unwrap();
        assert!(d.values().iter().all(|y| (y - &expected).norm() < 1e-15));
        assert!(covariant_derivative(&gs, &grid, &a, &psi, 2).is_err());
    }

    #[test]
    fn sine_derivative_is_second_order() {
        let gs = su2();
        let v = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, -1.0)]);
        let mut errs = Vec::new();
        for n in [16usize, 32, 64] {
            let grid = Grid::new(vec![n], 1.0 / n as f64, Metric::Euclidean).unwrap();
            let k = 2.0 * std::f64::consts::PI;
            let psi = MultipletField::from_fn(&grid, 2, |s| &v * c((k * grid.position(s)[0]).sin(), 0.0)).unwrap();
            let d = covariant_derivative(&gs, &grid, &GaugeField::zeros(&grid, 3), &psi, 0).unwrap();
            let err = (0..grid.len())
                .map(|s| (d.at(s) - &v * c(k * (k * grid.position(s)[0]).cos(), 0.0)).norm())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 2.0).abs() < 0.05, "{order}");
        }
    }

    #[test]
    fn field_strength_examples() {
        let grid = Grid::new(vec![5, 5, 4], 0.2, Metric::Euclidean).unwrap();
        let ab = u1();
        let a = GaugeField::from_fn(&grid, 1, |_, mu| element(&[mu as f64 + 0.5])).unwrap();
        let f = field_strength(&ab, &grid, &a).unwrap();
        assert!((0..grid.len()).all(|s| f.at(s, 0, 1).norm() == 0.0));

        let gs = su2();
        let x = element(&[1.0, 0.0, 0.0]);
        let y = element(&[0.0, 1.0, 0.0]);
        let a = GaugeField::from_fn(&grid, 3, |_, mu| if mu == 0 { x.clone() } else { y.clone() }).unwrap();
        let f = field_strength(&gs, &grid, &a).unwrap();
        let expected = gs.bracket(&x, &y);
        for s in 0..grid.len() {
            assert!(f.at(s, 0, 1).sub(&expected).norm() < 1e-15);
            assert!(f.at(s, 1, 0).add(f.at(s, 0, 1)).norm() == 0.0);
            assert_eq!(f.at(s, 2, 2).norm(), 0.0);
        }
    }
}
