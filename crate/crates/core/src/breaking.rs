//! Symmetry-breaking spectrum.
//!
//! Around a vacuum `v0`, the map `X -> X.v0` from the algebra into the realified
//! multiplet space decides everything: its kernel is the unbroken subalgebra, its
//! image is the tangent space `W` of the orbit through `v0`, and the Gram matrix
//! of its image vectors is the gauge-boson mass form
//! `m(A, B) = Re<A.v0, B.v0>`. Masses follow from `m(a_i, a_i) = M_i^2 / 2` for the
//! broken generators and from `Hess V = 2 m_f^2` on the orthogonal complement of `W`.
//!
//! Rank decisions use a relative singular-value cutoff ([`DEFAULT_TOL_RANK`]).
//! Degenerate clusters get a canonical basis (see [`crate::linalg::canonical_basis`])
//! so that output is deterministic.

use crate::error::{Result, SsbError};
use crate::higgs::{potential_hessian, potential_value, HiggsModel};
use crate::lie::{realify, unrealify, AlgebraElement, GeneratorSet};
use crate::linalg::{canonical_basis, eigen_clusters, rank_split, sym_eigen_sorted, CVec, RMat, RVec};

pub const DEFAULT_TOL_RANK: f64 = 1e-8;
/// Relative eigenvalue gap below which eigenvectors are treated as one multiplet.
pub const CLUSTER_GAP: f64 = 1e-8;
pub const PSD_TOL: f64 = 1e-10;

/// Symmetric bilinear form on the algebra, in the generator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MassForm {
    matrix: RMat,
}

impl MassForm {
    /// Wraps an externally supplied matrix; must be square and symmetric to 1e-12.
    pub fn from_matrix(matrix: RMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(SsbError::dimension("mass form columns", matrix.nrows(), matrix.ncols()));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * matrix.amax().max(1.0) {
            return Err(SsbError::invalid("mass form", format!("not symmetric (defect {asym:.3e})")));
        }
        Ok(MassForm { matrix })
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn eval(&self, a: &AlgebraElement, b: &AlgebraElement) -> f64 {
        a.coeffs().dot(&(&self.matrix * b.coeffs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        sym_eigen_sorted(&self.matrix).0.first().copied().unwrap_or(0.0)
    }
}

/// Columns `realify(gens[i] . v0)`: the orbit map as a real `2n x r` matrix.
pub fn orbit_map(gs: &GeneratorSet, v0: &CVec) -> Result<RMat> {
    if v0.len() != gs.n() {
        return Err(SsbError::dimension("vacuum vector", gs.n(), v0.len()));
    }
    let mut m = RMat::zeros(2 * gs.n(), gs.r());
    for (i, g) in gs.generators().iter().enumerate() {
        m.set_column(i, &realify(&(g * v0)));
    }
    Ok(m)
}

/// `m_ij = Re<gens[i] v0, gens[j] v0>`.
pub fn mass_form(gs: &GeneratorSet, v0: &CVec) -> Result<MassForm> {
    let map = orbit_map(gs, v0)?;
    let r = gs.r();
    let mut matrix = RMat::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let val = map.column(i).dot(&map.column(j));
            matrix[(i, j)] = val;
            matrix[(j, i)] = val;
        }
    }
    Ok(MassForm { matrix })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerSplit {
    /// Orthonormal basis of the unbroken subalgebra.
    pub unbroken: Vec<AlgebraElement>,
    /// Orthonormal basis of its orthogonal complement.
    pub broken: Vec<AlgebraElement>,
    pub singular_values: Vec<f64>,
}

impl StabilizerSplit {
    pub fn d(&self) -> usize {
        self.broken.len()
    }
}

pub fn stabilizer_split(gs: &GeneratorSet, v0: &CVec, tol_rank: f64) -> Result<StabilizerSplit> {
    let map = orbit_map(gs, v0)?;
    let split = rank_split(&map, tol_rank);
    let unbroken: Vec<AlgebraElement> = canonical_basis(&split.kernel)
        .into_iter()
        .map(AlgebraElement::new)
        .collect();
    // Complement of the kernel inside R^r.
    let complement = rank_split(&split.kernel.transpose(), tol_rank).kernel;
    let broken = if split.kernel.ncols() == 0 {
        canonical_basis(&RMat::identity(gs.r(), gs.r()))
    } else {
        canonical_basis(&complement)
    };
    Ok(StabilizerSplit {
        unbroken,
        broken: broken.into_iter().map(AlgebraElement::new).collect(),
        singular_values: split.singular_values,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BosonSpectrum {
    /// Broken generators diagonalising the mass form, by descending mass.
    pub broken: Vec<AlgebraElement>,
    pub broken_masses: Vec<f64>,
    pub unbroken: Vec<AlgebraElement>,
}

impl BosonSpectrum {
    /// The `d` broken masses followed by `r - d` zeros.
    pub fn all_masses(&self) -> Vec<f64> {
        let mut out = self.broken_masses.clone();
        out.extend(std::iter::repeat_n(0.0, self.unbroken.len()));
        out
    }
}

/// Diagonalises the mass form on the broken subspace; `M_i = sqrt(2 m(a_i, a_i))`.
pub fn boson_spectrum(mf: &MassForm, split: &StabilizerSplit) -> Result<BosonSpectrum> {
    let r = mf.matrix.nrows();
    let min_eig = mf.min_eigenvalue();
    if min_eig < -PSD_TOL * mf.matrix.amax().max(1.0) {
        return Err(SsbError::NotPsd { min_eigenvalue: min_eig });
    }
    let d = split.broken.len();
    let mut unbroken = split.unbroken.clone();
    if d == 0 {
        return Ok(BosonSpectrum {
            broken: Vec::new(),
            broken_masses: Vec::new(),
            unbroken,
        });
    }
    let mut basis = RMat::zeros(r, d);
    for (j, a) in split.broken.iter().enumerate() {
        if a.dim() != r {
            return Err(SsbError::dimension("broken generator", r, a.dim()));
        }
        basis.set_column(j, a.coeffs());
    }
    let restricted = basis.transpose() * &mf.matrix * &basis;
    let (eigs, vecs) = sym_eigen_sorted(&restricted);
    let eig_max = eigs.last().copied().unwrap_or(0.0).max(0.0);
    let zero_cut = DEFAULT_TOL_RANK * DEFAULT_TOL_RANK * eig_max;

    let mut broken: Vec<(AlgebraElement, f64)> = Vec::with_capacity(d);
    let mut merged: Vec<RVec> = Vec::new();
    // Descending mass: walk clusters from the top of the ascending list.
    for cluster in eigen_clusters(&eigs, CLUSTER_GAP).into_iter().rev() {
        let cols = RMat::from_columns(
            &cluster
                .clone()
                .map(|k| &basis * vecs.column(k))
                .collect::<Vec<RVec>>(),
        );
        let canon = canonical_basis(&cols);
        if eigs[cluster.end - 1] <= zero_cut {
            merged.extend(canon);
            continue;
        }
        for v in canon {
            let a = AlgebraElement::new(v);
            let mass = (2.0 * mf.eval(&a, &a)).max(0.0).sqrt();
            broken.push((a, mass));
        }
    }
    if !merged.is_empty() {
        let mut all: Vec<RVec> = unbroken.iter().map(|a| a.coeffs().clone()).collect();
        all.extend(merged);
        unbroken = canonical_basis(&RMat::from_columns(&all))
            .into_iter()
            .map(AlgebraElement::new)
            .collect();
    }
    Ok(BosonSpectrum {
        broken_masses: broken.iter().map(|(_, m)| *m).collect(),
        broken: broken.into_iter().map(|(a, _)| a).collect(),
        unbroken,
    })
}

/// Orbit-tangent / orthogonal split of the realified multiplet space with the
/// Hessian diagonalised on the orthogonal part. No vacuum checks.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDecomposition {
    /// Orthonormal basis `e_i` of `W = span{realify(gens[i] v0)}`.
    pub e: Vec<RVec>,
    /// Orthonormal Hessian eigenvectors `f_j` spanning `W^perp`.
    pub f: Vec<RVec>,
    /// Hessian eigenvalues on the `f_j` (`2 m_f^2`).
    pub f_eigenvalues: Vec<f64>,
    /// Largest `|e_i^T H e_j|`.
    pub orbit_hessian_defect: f64,
}

pub fn orbit_decomposition(
    gs: &GeneratorSet,
    v0: &CVec,
    hessian: &RMat,
    tol_rank: f64,
) -> Result<OrbitDecomposition> {
    let map = orbit_map(gs, v0)?;
    let dim = map.nrows();
    if hessian.nrows() != dim || hessian.ncols() != dim {
        return Err(SsbError::dimension("Hessian", dim, hessian.nrows()));
    }
    let split = rank_split(&map, tol_rank);
    let e = canonical_basis(&split.range);

    let mut orbit_hessian_defect = 0.0f64;
    for a in &e {
        for b in &e {
            orbit_hessian_defect = orbit_hessian_defect.max(a.dot(&(hessian * b)).abs());
        }
    }

    let complement = if e.is_empty() {
        RMat::identity(dim, dim)
    } else {
        rank_split(&split.range.transpose(), tol_rank).kernel
    };
    let q = complement.transpose() * hessian * &complement;
    let (eigs, vecs) = sym_eigen_sorted(&q);
    let mut f = Vec::with_capacity(eigs.len());
    let mut f_eigenvalues = Vec::with_capacity(eigs.len());
    for cluster in eigen_clusters(&eigs, CLUSTER_GAP).into_iter().rev() {
        let cols = RMat::from_columns(
            &cluster
                .clone()
                .map(|k| &complement * vecs.column(k))
                .collect::<Vec<RVec>>(),
        );
        for v in canonical_basis(&cols) {
            f_eigenvalues.push(v.dot(&(hessian * &v)));
            f.push(v);
        }
    }
    Ok(OrbitDecomposition {
        e,
        f,
        f_eigenvalues,
        orbit_hessian_defect,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSplit {
    pub e: Vec<RVec>,
    pub f: Vec<RVec>,
    pub higgs_masses: Vec<f64>,
}

/// Like [`orbit_decomposition`] but requires `v0` to be a minimum: the Hessian must
/// vanish on `W` and be positive semidefinite on `W^perp` (both to `tol`, relative to
/// the Hessian scale).
pub fn orbit_split(gs: &GeneratorSet, v0: &CVec, hessian: &RMat, tol: f64) -> Result<OrbitSplit> {
    let dec = orbit_decomposition(gs, v0, hessian, DEFAULT_TOL_RANK)?;
    let scale = hessian.amax().max(1.0);
    if dec.orbit_hessian_defect > tol * scale {
        return Err(SsbError::InconsistentVacuum {
            defect: dec.orbit_hessian_defect,
        });
    }
    if let Some(&worst) = dec
        .f_eigenvalues
        .iter()
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
    {
        if worst < -tol * scale {
            return Err(SsbError::NotAMinimum { eigenvalue: worst });
        }
    }
    Ok(OrbitSplit {
        higgs_masses: dec.f_eigenvalues.iter().map(|&l| (l.max(0.0) / 2.0).sqrt()).collect(),
        e: dec.e,
        f: dec.f,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub vacuum: CVec,
    pub unbroken_basis: Vec<AlgebraElement>,
    pub broken_basis: Vec<AlgebraElement>,
    /// `d` broken masses (descending) followed by `r - d` zeros.
    pub boson_masses: Vec<f64>,
    pub d: usize,
    pub orbit_basis: Vec<RVec>,
    pub ortho_basis: Vec<RVec>,
    /// Hessian eigenvalue / 2 on each `f_j`; negative away from a minimum.
    pub higgs_mass_squared: Vec<f64>,
    pub higgs_masses: Vec<f64>,
    pub mass_form: MassForm,
    /// False only in the unbroken limit `v0 = 0`, which is a stationary point but
    /// not a minimum of the potential.
    pub is_vacuum: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    pub tol_rank: f64,
    /// Tolerance for the vacuum consistency checks on the Hessian.
    pub tol_vac: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol_rank: DEFAULT_TOL_RANK,
            tol_vac: 1e-8,
        }
    }
}

/// Full spectrum at `v0`. A nonzero `v0` must be a minimum (errors from
/// [`orbit_split`] propagate); `v0 = 0` yields the unbroken limit with
/// `is_vacuum = false` and the (negative) curvature of the potential at the origin.
pub fn compute_spectrum(model: &HiggsModel, v0: &CVec, opts: SpectrumOptions) -> Result<SpectrumResult> {
    let gs = &model.gens;
    let hessian = potential_hessian(model.potential.as_ref(), v0);
    let mf = mass_form(gs, v0)?;
    let split = stabilizer_split(gs, v0, opts.tol_rank)?;
    let bosons = boson_spectrum(&mf, &split)?;
    let is_zero = v0.iter().all(|z| z.norm() == 0.0);

    let (orbit_basis, ortho_basis, eigenvalues, is_vacuum) = if is_zero {
        let dec = orbit_decomposition(gs, v0, &hessian, opts.tol_rank)?;
        let vacuum = model.check_vacuum(v0, opts.tol_vac).is_vacuum;
        (dec.e, dec.f, dec.f_eigenvalues, vacuum)
    } else {
        let split = orbit_split(gs, v0, &hessian, opts.tol_vac)?;
        let eigs = split
            .f
            .iter()
            .map(|f| f.dot(&(&hessian * f)))
            .collect::<Vec<_>>();
        (split.e, split.f, eigs, true)
    };
    let higgs_mass_squared: Vec<f64> = eigenvalues.iter().map(|l| l / 2.0).collect();
    let higgs_masses = higgs_mass_squared.iter().map(|m2| m2.max(0.0).sqrt()).collect();

    Ok(SpectrumResult {
        vacuum: v0.clone(),
        d: bosons.broken.len(),
        boson_masses: bosons.all_masses(),
        unbroken_basis: bosons.unbroken,
        broken_basis: bosons.broken,
        orbit_basis,
        ortho_basis,
        higgs_mass_squared,
        higgs_masses,
        mass_form: mf,
        is_vacuum,
    })
}

/// Goldstone (`xi`) and Higgs (`eta`) coordinates of a shifted Higgs value.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftDecomposition {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl ShiftDecomposition {
    /// `dPhi = (1/sqrt 2)(sum xi_i e_i + sum eta_j f_j)`.
    pub fn reconstruct(&self, spec: &SpectrumResult) -> CVec {
        let dim = 2 * spec.vacuum.len();
        let mut x = RVec::zeros(dim);
        for (xi, e) in self.xi.iter().zip(&spec.orbit_basis) {
            x.axpy(*xi, e, 1.0);
        }
        for (eta, f) in self.eta.iter().zip(&spec.ortho_basis) {
            x.axpy(*eta, f, 1.0);
        }
        unrealify(&(x / std::f64::consts::SQRT_2))
    }

    pub fn max_goldstone(&self) -> f64 {
        self.xi.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn decompose_shift(spec: &SpectrumResult, phi: &CVec, v0: &CVec) -> Result<ShiftDecomposition> {
    if phi.len() != v0.len() {
        return Err(SsbError::dimension("Higgs value", v0.len(), phi.len()));
    }
    let delta = realify(&(phi - v0));
    let s2 = std::f64::consts::SQRT_2;
    Ok(ShiftDecomposition {
        xi: spec.orbit_basis.iter().map(|e| s2 * e.dot(&delta)).collect(),
        eta: spec.ortho_basis.iter().map(|f| s2 * f.dot(&delta)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarTerm {
    pub direction: RVec,
    pub mass_squared: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorTerm {
    pub generator: AlgebraElement,
    pub mass: f64,
}

/// Coefficient tables of the free Lagrangian in unitary gauge:
/// Klein-Gordon terms for the Higgs bosons, massive broken bosons, massless
/// unbroken bosons. The constant `V(v0)` is kept apart.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticReport {
    pub constant: f64,
    pub higgs: Vec<ScalarTerm>,
    pub broken: Vec<VectorTerm>,
    pub unbroken: Vec<AlgebraElement>,
    pub vacuum_guard: Option<String>,
}

pub fn quadratic_lagrangian(spec: &SpectrumResult, model: &HiggsModel) -> QuadraticReport {
    let higgs = spec
        .ortho_basis
        .iter()
        .zip(&spec.higgs_mass_squared)
        .map(|(f, &m2)| ScalarTerm {
            direction: f.clone(),
            mass_squared: m2,
            mass: m2.max(0.0).sqrt(),
        })
        .collect();
    let broken = spec
        .broken_basis
        .iter()
        .zip(&spec.boson_masses)
        .map(|(a, &m)| VectorTerm {
            generator: a.clone(),
            mass: m,
        })
        .collect();
    let vacuum_guard = if spec.is_vacuum {
        None
    } else {
        Some(format!(
            "not a vacuum: {} complex scalars with negative mass squared at the symmetric point",
            spec.vacuum.len()
        ))
    };
    QuadraticReport {
        constant: potential_value(model.potential.as_ref(), &spec.vacuum),
        higgs,
        broken,
        unbroken: spec.unbroken_basis.clone(),
        vacuum_guard,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::higgs::QuarticPotential;
    use crate::linalg::{c, CMat};
    use std::sync::Arc;

    fn ew_gens(g: f64, gp: f64) -> GeneratorSet {
        let h = 0.5;
        let z = c(0.0, 0.0);
        GeneratorSet::new(
            vec![
                CMat::from_row_slice(2, 2, &[z, c(0.0, g * h), c(0.0, g * h), z]),
                CMat::from_row_slice(2, 2, &[z, c(g * h, 0.0), c(-g * h, 0.0), z]),
                CMat::from_row_slice(2, 2, &[c(0.0, g * h), z, z, c(0.0, -g * h)]),
                CMat::from_row_slice(2, 2, &[c(0.0, gp * h), z, z, c(0.0, gp * h)]),
            ],
            vec![],
        )
        .unwrap()
    }

    fn ew_model() -> HiggsModel {
        HiggsModel::new(ew_gens(2.0, 1.0), Arc::new(QuarticPotential::new(2.0, 1.0).unwrap()))
    }

    fn v0(norm: f64) -> CVec {
        CVec::from_vec(vec![c(0.0, 0.0), c(norm, 0.0)])
    }

    #[test]
    fn electroweak_mass_form_matches_closed_form() {
        let mf = mass_form(&ew_gens(2.0, 1.0), &v0(1.0)).unwrap();
        let expected = RMat::from_row_slice(
            4,
            4,
            &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -0.5, 0.0, 0.0, -0.5, 0.25],
        );
        assert!((mf.matrix() - expected).amax() < 1e-15);
        let zero = mass_form(&ew_gens(2.0, 1.0), &v0(0.0)).unwrap();
        assert_eq!(zero.matrix().amax(), 0.0);
    }

    #[test]
    fn stabilizer_is_the_photon_direction() {
        let (g, gp) = (2.0, 1.0);
        let split = stabilizer_split(&ew_gens(g, gp), &v0(1.0), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(split.d(), 3);
        assert_eq!(split.unbroken.len(), 1);
        let norm = (g * g + gp * gp).sqrt();
        let alpha4 = AlgebraElement::from_slice(&[0.0, 0.0, gp / norm, g / norm]);
        assert!((split.unbroken[0].dot(&alpha4).abs() - 1.0).abs() < 1e-12);

        let all = stabilizer_split(&ew_gens(g, gp), &v0(0.0), DEFAULT_TOL_RANK).unwrap();
        assert_eq!((all.d(), all.unbroken.len()), (0, 4));

        let u1 = GeneratorSet::new(vec![CMat::from_element(1, 1, c(0.0, 1.0))], vec![]).unwrap();
        let s = stabilizer_split(&u1, &CVec::from_element(1, c(1.0, 0.0)), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(s.d(), 1);
    }

    #[test]
    fn electroweak_boson_masses() {
        let gs = ew_gens(2.0, 1.0);
        let mf = mass_form(&gs, &v0(1.0)).unwrap();
        let split = stabilizer_split(&gs, &v0(1.0), DEFAULT_TOL_RANK).unwrap();
        let spec = boson_spectrum(&mf, &split).unwrap();
        let expected = [2.5f64.sqrt(), 2f64.sqrt(), 2f64.sqrt(), 0.0];
        for (m, e) in spec.all_masses().iter().zip(expected) {
            assert!((m - e).abs() < 1e-12, "{m} vs {e}");
        }
        // The W pair comes out as beta_1, beta_2.
        assert!((spec.broken[1].coeffs() - RVec::from_vec(vec![1.0, 0.0, 0.0, 0.0])).amax() < 1e-12);
        assert!((spec.broken[2].coeffs() - RVec::from_vec(vec![0.0, 1.0, 0.0, 0.0])).amax() < 1e-12);
    }

    #[test]
    fn zero_mass_form_gives_massless_bosons() {
        let gs = ew_gens(2.0, 1.0);
        let mf = mass_form(&gs, &v0(0.0)).unwrap();
        let split = stabilizer_split(&gs, &v0(0.0), DEFAULT_TOL_RANK).unwrap();
        let spec = boson_spectrum(&mf, &split).unwrap();
        assert_eq!(spec.all_masses(), vec![0.0; 4]);
    }

    #[test]
    fn indefinite_mass_form_is_rejected() {
        let mf = MassForm::from_matrix(RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
        let split = StabilizerSplit {
            unbroken: vec![],
            broken: vec![AlgebraElement::basis(2, 0), AlgebraElement::basis(2, 1)],
            singular_values: vec![],
        };
        assert!(matches!(boson_spectrum(&mf, &split), Err(SsbError::NotPsd { .. })));
    }

    #[test]
    fn orbit_split_electroweak() {
        let model = ew_model();
        let h = potential_hessian(model.potential.as_ref(), &v0(1.0));
        let split = orbit_split(&model.gens, &v0(1.0), &h, 1e-8).unwrap();
        let unit = |k: usize| {
            let mut v = RVec::zeros(4);
            v[k] = 1.0;
            v
        };
        let close = |a: &[RVec], b: &[RVec]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).amax() < 1e-14)
        };
        assert!(close(&split.e, &[unit(0), unit(1), unit(3)]));
        assert!(close(&split.f, &[unit(2)]));
        assert!((split.higgs_masses[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orbit_split_rejects_non_vacua() {
        let model = ew_model();
        let off = v0(2.0);
        let h = potential_hessian(model.potential.as_ref(), &off);
        assert!(matches!(
            orbit_split(&model.gens, &off, &h, 1e-8),
            Err(SsbError::InconsistentVacuum { .. })
        ));
        let flipped = -h.clone();
        assert!(orbit_split(&model.gens, &v0(1.0), &flipped, 1e-8).is_err());
    }

    #[test]
    fn spectrum_and_shift_decomposition() {
        let model = ew_model();
        let spec = compute_spectrum(&model, &v0(1.0), SpectrumOptions::default()).unwrap();
        assert_eq!(spec.d, 3);
        assert_eq!(spec.higgs_masses.len(), 1);

        let zero = decompose_shift(&spec, &v0(1.0), &v0(1.0)).unwrap();
        assert!(zero.xi.iter().chain(&zero.eta).all(|x| *x == 0.0));

        let probe = v0(1.0) + unrealify(&spec.orbit_basis[0]) / c(std::f64::consts::SQRT_2, 0.0);
        let dec = decompose_shift(&spec, &probe, &v0(1.0)).unwrap();
        assert!((dec.xi[0] - 1.0).abs() < 1e-15 && dec.xi[1].abs() < 1e-15 && dec.eta[0].abs() < 1e-15);

        let phi = crate::lie::random_multiplet(2, 9);
        let dec = decompose_shift(&spec, &phi, &v0(1.0)).unwrap();
        let back = dec.reconstruct(&spec) + v0(1.0);
        assert!((back - phi).norm() < 1e-12);
    }

    #[test]
    fn quadratic_report_electroweak_and_symmetric_point() {
        let model = ew_model();
        let spec = compute_spectrum(&model, &v0(1.0), SpectrumOptions::default()).unwrap();
        let rep = quadratic_lagrangian(&spec, &model);
        assert!(rep.vacuum_guard.is_none());
        assert_eq!(rep.higgs.len(), 1);
        assert!((rep.higgs[0].mass - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.broken.len(), 3);
        assert_eq!(rep.unbroken.len(), 1);
        assert!((rep.constant + 0.5).abs() < 1e-15);

        let sym = compute_spectrum(&model, &v0(0.0), SpectrumOptions::default()).unwrap();
        let rep = quadratic_lagrangian(&sym, &model);
        assert!(rep.vacuum_guard.is_some());
        assert!(rep.broken.is_empty());
        assert_eq!(rep.higgs.len(), 4);
        assert!(rep.higgs.iter().all(|t| t.mass_squared < 0.0));
    }
}
