//! SU(2) x U(1) preset: the Higgs doublet, its spectrum in closed form, the
//! Weinberg rotation and the charge operators.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::chiral::Representation;
use crate::error::{Result, SsbError};
use crate::higgs::{HiggsModel, QuarticPotential, DEFAULT_TOL_VAC};
use crate::lie::{AlgebraElement, FactorLabel, GeneratorSet};
use crate::linalg::{c, frobenius, CMat, CVec, RMat};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElectroweakParams {
    pub g: f64,
    pub gp: f64,
    pub mu: f64,
    pub lambda: f64,
}

impl Default for ElectroweakParams {
    /// `g = 2, g' = 1, mu = 2, lambda = 1`, which puts the vacuum at unit norm.
    fn default() -> Self {
        ElectroweakParams {
            g: 2.0,
            gp: 1.0,
            mu: 2.0,
            lambda: 1.0,
        }
    }
}

impl ElectroweakParams {
    pub fn new(g: f64, gp: f64, mu: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("g'", gp), ("mu", mu), ("lambda", lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SsbError::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(ElectroweakParams { g, gp, mu, lambda })
    }

    pub fn vacuum_norm(&self) -> f64 {
        (self.mu / (2.0 * self.lambda)).sqrt()
    }
}

fn pauli(l: usize) -> CMat {
    let (z, o) = (c(0.0, 0.0), c(1.0, 0.0));
    match l {
        1 => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMat::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        3 => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!("Pauli index is 1, 2 or 3"),
    }
}

/// Doublet with hypercharge action `i y g'/2`: `y = +1` for the Higgs field,
/// `y = -1` for the left-handed lepton doublet.
fn doublet_generators(p: &ElectroweakParams, y: f64) -> Vec<CMat> {
    let mut gens: Vec<CMat> = (1..=3).map(|l| pauli(l) * c(0.0, p.g / 2.0)).collect();
    gens.push(CMat::identity(2, 2) * c(0.0, y * p.gp / 2.0));
    gens
}

/// `beta_l = g i sigma_l / 2`, `beta_4 = g' i / 2` on C^2.
pub fn generators(p: &ElectroweakParams) -> GeneratorSet {
    GeneratorSet::new(
        doublet_generators(p, 1.0),
        vec![
            FactorLabel {
                label: "su2".into(),
                coupling: p.g,
                generators: vec![0, 1, 2],
            },
            FactorLabel {
                label: "u1".into(),
                coupling: p.gp,
                generators: vec![3],
            },
        ],
    )
    .expect("fixed electroweak generators are well formed")
}

pub fn vacuum(p: &ElectroweakParams) -> CVec {
    CVec::from_vec(vec![c(0.0, 0.0), c(p.vacuum_norm(), 0.0)])
}

pub fn build_model(p: &ElectroweakParams) -> Result<HiggsModel> {
    let potential = QuarticPotential::new(p.mu, p.lambda)?;
    HiggsModel::new(generators(p), Arc::new(potential)).with_vacuum(vacuum(p), DEFAULT_TOL_VAC)
}

pub fn higgs_doublet(p: &ElectroweakParams) -> Representation {
    Representation::new(doublet_generators(p, 1.0)).expect("skew-Hermitian by construction")
}

pub fn left_lepton_doublet(p: &ElectroweakParams) -> Representation {
    Representation::new(doublet_generators(p, -1.0)).expect("skew-Hermitian by construction")
}

/// Right-handed electron: su(2) acts trivially, `beta_4 -> -i g'`.
pub fn right_electron(p: &ElectroweakParams) -> Representation {
    let mut gens = vec![CMat::zeros(1, 1); 3];
    gens.push(CMat::from_element(1, 1, c(0.0, -p.gp)));
    Representation::new(gens).expect("skew-Hermitian by construction")
}

pub fn weinberg_angle(p: &ElectroweakParams) -> f64 {
    (p.gp / p.g).atan()
}

pub fn elementary_charge(p: &ElectroweakParams) -> f64 {
    p.g * p.gp / (p.g * p.g + p.gp * p.gp).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BosonMasses {
    pub m_w: f64,
    pub m_z: f64,
    pub m_gamma: f64,
    pub m_h: f64,
}

pub fn boson_mass_predictions(p: &ElectroweakParams) -> BosonMasses {
    let v = p.vacuum_norm();
    BosonMasses {
        m_w: v * p.g / SQRT_2,
        m_z: v * (p.g * p.g + p.gp * p.gp).sqrt() / SQRT_2,
        m_gamma: 0.0,
        m_h: p.mu.sqrt(),
    }
}

/// `(|v0|^2 / 4) [[g^2,0,0,0],[0,g^2,0,0],[0,0,g^2,-g g'],[0,0,-g g',g'^2]]`.
pub fn closed_form_mass_form(g: f64, gp: f64, v_norm: f64) -> RMat {
    let s = v_norm * v_norm / 4.0;
    RMat::from_row_slice(
        4,
        4,
        &[
            g * g,
            0.0,
            0.0,
            0.0,
            0.0,
            g * g,
            0.0,
            0.0,
            0.0,
            0.0,
            g * g,
            -g * gp,
            0.0,
            0.0,
            -g * gp,
            gp * gp,
        ],
    ) * s
}

/// `alpha_1 = beta_1`, `alpha_2 = beta_2`, `alpha_3 = (g beta_3 - g' beta_4)/N`,
/// `alpha_4 = (g' beta_3 + g beta_4)/N` with `N = sqrt(g^2 + g'^2)`.
pub fn alpha_basis(p: &ElectroweakParams) -> [AlgebraElement; 4] {
    let n = (p.g * p.g + p.gp * p.gp).sqrt();
    [
        AlgebraElement::from_slice(&[1.0, 0.0, 0.0, 0.0]),
        AlgebraElement::from_slice(&[0.0, 1.0, 0.0, 0.0]),
        AlgebraElement::from_slice(&[0.0, 0.0, p.g / n, -p.gp / n]),
        AlgebraElement::from_slice(&[0.0, 0.0, p.gp / n, p.g / n]),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChargeOperators {
    /// `T_1, T_2, T_3`.
    pub t: [CMat; 3],
    pub t3: CMat,
    pub y: CMat,
    pub q: CMat,
    pub t_plus: CMat,
    pub t_minus: CMat,
    /// `(T_3, Y, Q)` eigenvalues on a common eigenbasis, sorted by `Q` then `T_3`, descending.
    pub eigenvalues: Vec<(f64, f64, f64)>,
    pub commutator_defect: f64,
}

/// `T_l = R(beta_l) / (i g)`, `Y = 2 R(beta_4) / (i g')`, `Q = T_3 + Y / 2`.
pub fn charge_operators(rep: &Representation, p: &ElectroweakParams) -> Result<ChargeOperators> {
    if rep.r() != 4 {
        return Err(SsbError::dimension("electroweak representation generators", 4, rep.r()));
    }
    let gens = rep.generators();
    let ig = c(0.0, p.g);
    let t = [&gens[0] / ig, &gens[1] / ig, &gens[2] / ig];
    let y = &gens[3] * c(2.0, 0.0) / c(0.0, p.gp);
    let t3 = t[2].clone();
    let q = &t3 + &y * c(0.5, 0.0);
    let commutator_defect = frobenius(&(&t3 * &y - &y * &t3));
    let scale = 1.0 + frobenius(&t3) * frobenius(&y);
    if commutator_defect > 1e-12 * scale {
        return Err(SsbError::NonCommuting {
            defect: commutator_defect,
        });
    }
    let i = c(0.0, 1.0);
    let t_plus = &t[0] - &t[1] * i;
    let t_minus = &t[0] + &t[1] * i;

    // A generic real combination separates joint eigenspaces.
    let probe = &t3 + &y * c(std::f64::consts::FRAC_1_PI + 0.5, 0.0);
    let herm = (&probe + probe.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let rayleigh = |m: &CMat, v: &CVec| -> f64 { v.dotc(&(m * v)).re };
    let mut eigenvalues: Vec<(f64, f64, f64)> = eig
        .eigenvectors
        .column_iter()
        .map(|col| {
            let v: CVec = col.into();
            (rayleigh(&t3, &v), rayleigh(&y, &v), rayleigh(&q, &v))
        })
        .collect();
    eigenvalues.sort_by(|a, b| b.2.total_cmp(&a.2).then(b.0.total_cmp(&a.0)));
    Ok(ChargeOperators {
        t,
        t3,
        y,
        q,
        t_plus,
        t_minus,
        eigenvalues,
        commutator_defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeDecomposition {
    pub w_plus: Complex64,
    pub w_minus: Complex64,
    pub z0: f64,
    pub photon: f64,
}

/// `W+- = (A^1 +- i A^2)/sqrt 2`, `Z = cos A^3 - sin A^4`, `gamma = sin A^3 + cos A^4`.
pub fn decompose_gauge_field(a: [f64; 4], p: &ElectroweakParams) -> GaugeDecomposition {
    let th = weinberg_angle(p);
    let (s, co) = th.sin_cos();
    GaugeDecomposition {
        w_plus: c(a[0], a[1]) / SQRT_2,
        w_minus: c(a[0], -a[1]) / SQRT_2,
        z0: co * a[2] - s * a[3],
        photon: s * a[2] + co * a[3],
    }
}

impl GaugeDecomposition {
    pub fn reconstruct(&self, p: &ElectroweakParams) -> [f64; 4] {
        let (s, co) = weinberg_angle(p).sin_cos();
        let a1 = ((self.w_plus + self.w_minus) / SQRT_2).re;
        let a2 = ((self.w_plus - self.w_minus) / c(0.0, SQRT_2)).re;
        [a1, a2, co * self.z0 + s * self.photon, -s * self.z0 + co * self.photon]
    }

    pub fn norm_squared(&self) -> f64 {
        self.w_plus.norm_sqr() + self.w_minus.norm_sqr() + self.z0 * self.z0 + self.photon * self.photon
    }
}
