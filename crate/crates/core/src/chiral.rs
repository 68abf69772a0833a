//! Fermion mass forms and Yukawa couplings.
//!
//! A mass form between two representations is a complex-linear equivariant map
//! `K: V_R -> V_L`; its space is the null space of the stacked commutation
//! system `R_L(X) K - K R_R(X) = 0`. Yukawa couplings are invariant tensors
//! `tau` on three multiplet spaces, one of them possibly conjugated.

use num_complex::Complex64;

use crate::error::{Result, SsbError};
use crate::lie::{GeneratorSet, DEFAULT_TOL_ALG};
use crate::linalg::{c, complex_null_space, frobenius, CMat, CVec};

pub const NULL_SPACE_TOL: f64 = 1e-8;

/// Images of the `r` abstract algebra basis elements on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    dim: usize,
    gens: Vec<CMat>,
}

impl Representation {
    pub fn new(gens: Vec<CMat>) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| SsbError::invalid("representation", "at least one generator is required"))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(SsbError::invalid("representation", "dimension must be at least 1"));
        }
        for g in &gens {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(SsbError::dimension("representation matrix", dim, g.nrows().max(g.ncols())));
            }
            let skew = frobenius(&(g + g.adjoint()));
            if skew > DEFAULT_TOL_ALG * (1.0 + frobenius(g)) {
                return Err(SsbError::invalid(
                    "representation",
                    format!("generator is not skew-Hermitian (defect {skew:.3e})"),
                ));
            }
        }
        Ok(Representation { dim, gens })
    }

    pub fn from_generator_set(gs: &GeneratorSet) -> Result<Self> {
        Self::new(gs.generators().to_vec())
    }

    pub fn trivial(r: usize, dim: usize) -> Result<Self> {
        Self::new(vec![CMat::zeros(dim, dim); r])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.gens
    }

    /// Induced action on the conjugate space: `conj(R(X))`.
    pub fn conjugate(&self) -> Self {
        Representation {
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.map(|z| z.conj())).collect(),
        }
    }

    /// `U R(X) U^-1` for a unitary `U`.
    pub fn conjugated_by(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(SsbError::dimension("change of basis", self.dim, u.nrows()));
        }
        Ok(Representation {
            dim: self.dim,
            gens: self.gens.iter().map(|g| u * g * u.adjoint()).collect(),
        })
    }

    pub fn act(&self, i: usize, v: &CVec) -> CVec {
        &self.gens[i] * v
    }
}

/// Spin-`(dim - 1)/2` irrep of su(2) with generators `i J_x, i J_y, i J_z`.
pub fn su2_irrep(dim: usize) -> Result<Representation> {
    if dim == 0 {
        return Err(SsbError::invalid("su(2) irrep", "dimension must be at least 1"));
    }
    let j = (dim as f64 - 1.0) / 2.0;
    let m = |k: usize| j - k as f64;
    let mut jp = CMat::zeros(dim, dim);
    for k in 1..dim {
        // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, basis ordered m = j, j-1, ...
        let mk = m(k);
        jp[(k - 1, k)] = c((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5, 0.0);
    let jy = (&jp - &jm) * c(0.0, -0.5);
    let jz = CMat::from_diagonal(&CVec::from_iterator(dim, (0..dim).map(|k| c(m(k), 0.0))));
    let i = c(0.0, 1.0);
    Representation::new(vec![jx * i, jy * i, jz * i])
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerBasis {
    /// `dim_L x dim_R` matrices, Frobenius-normalised.
    pub basis: Vec<CMat>,
    /// Largest `|R_L K - K R_R|` over basis elements and generators.
    pub residual: f64,
}

impl IntertwinerBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Fixes the global phase so the largest-magnitude entry is real and positive.
fn fix_phase(k: &mut CMat) {
    let mut best = Complex64::new(0.0, 0.0);
    for z in k.iter() {
        if z.norm() > best.norm() + 1e-12 {
            best = *z;
        }
    }
    if best.norm() > 0.0 {
        let phase = best.conj() / best.norm();
        *k *= phase;
    }
}

pub fn intertwiner_basis(rep_l: &Representation, rep_r: &Representation) -> Result<IntertwinerBasis> {
    if rep_l.r() != rep_r.r() {
        return Err(SsbError::dimension("representation generator count", rep_l.r(), rep_r.r()));
    }
    let (dl, dr) = (rep_l.dim, rep_r.dim);
    let size = dl * dr;
    let mut system = CMat::zeros(rep_l.r() * size, size);
    let il = CMat::identity(dl, dl);
    let ir = CMat::identity(dr, dr);
    for (i, (gl, gr)) in rep_l.gens.iter().zip(&rep_r.gens).enumerate() {
        // vec(A K) = (I kron A) vec K, vec(K B) = (B^T kron I) vec K, column-major.
        let block = ir.kronecker(gl) - gr.transpose().kronecker(&il);
        system.view_mut((i * size, 0), (size, size)).copy_from(&block);
    }
    let null = complex_null_space(&system, NULL_SPACE_TOL);
    let mut basis = Vec::with_capacity(null.ncols());
    let mut residual = 0.0f64;
    for col in null.column_iter() {
        let mut k = CMat::from_column_slice(dl, dr, col.as_slice());
        fix_phase(&mut k);
        for (gl, gr) in rep_l.gens.iter().zip(&rep_r.gens) {
            residual = residual.max(frobenius(&(gl * &k - &k * gr)));
        }
        basis.push(k);
    }
    Ok(IntertwinerBasis { basis, residual })
}

pub fn mass_form_exists(rep_l: &Representation, rep_r: &Representation) -> Result<bool> {
    Ok(intertwiner_basis(rep_l, rep_r)?.dimension() > 0)
}

/// Complex trilinear form `sum tau_abc x_a y_b z_c`, where a conjugated slot
/// receives the conjugate of its multiplet vector.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleProduct {
    shape: [usize; 3],
    data: Vec<Complex64>,
    conjugate: [bool; 3],
}

impl TripleProduct {
    /// `data` is row-major over `(a, b, c)`.
    pub fn new(shape: [usize; 3], data: Vec<Complex64>, conjugate: [bool; 3]) -> Result<Self> {
        let len: usize = shape.iter().product();
        if shape.contains(&0) {
            return Err(SsbError::invalid("triple product", "every slot needs dimension at least 1"));
        }
        if data.len() != len {
            return Err(SsbError::dimension("triple product entries", len, data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SsbError::invalid("triple product", "non-finite entry"));
        }
        Ok(TripleProduct { shape, data, conjugate })
    }

    pub fn zeros(shape: [usize; 3], conjugate: [bool; 3]) -> Result<Self> {
        Self::new(shape, vec![Complex64::new(0.0, 0.0); shape.iter().product()], conjugate)
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn conjugate_flags(&self) -> [bool; 3] {
        self.conjugate
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn offset(&self, a: usize, b: usize, cc: usize) -> usize {
        (a * self.shape[1] + b) * self.shape[2] + cc
    }

    pub fn get(&self, a: usize, b: usize, cc: usize) -> Complex64 {
        self.data[self.offset(a, b, cc)]
    }

    pub fn set(&mut self, a: usize, b: usize, cc: usize, value: Complex64) {
        let k = self.offset(a, b, cc);
        self.data[k] = value;
    }

    /// Evaluates the form on multiplet vectors (conjugating where flagged).
    pub fn contract(&self, x: &CVec, y: &CVec, z: &CVec) -> Result<Complex64> {
        for (slot, v) in [x, y, z].into_iter().enumerate() {
            if v.len() != self.shape[slot] {
                return Err(SsbError::dimension(format!("triple product slot {slot}"), self.shape[slot], v.len()));
            }
        }
        let pick = |slot: usize, v: &CVec| -> CVec {
            if self.conjugate[slot] {
                v.map(|z| z.conj())
            } else {
                v.clone()
            }
        };
        let (x, y, z) = (pick(0, x), pick(1, y), pick(2, z));
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..self.shape[0] {
            for b in 0..self.shape[1] {
                for cc in 0..self.shape[2] {
                    acc += self.get(a, b, cc) * x[a] * y[b] * z[cc];
                }
            }
        }
        Ok(acc)
    }
}

/// `max_i |delta_i tau|_F`, where `delta_i tau` is the summed infinitesimal action
/// of generator `i` on all three slots. Conjugated slots use `conj(R)`.
pub fn triple_invariance_defect(
    tau: &TripleProduct,
    rep_a: &Representation,
    rep_b: &Representation,
    rep_c: &Representation,
) -> Result<f64> {
    let reps = [rep_a, rep_b, rep_c];
    for (slot, rep) in reps.iter().enumerate() {
        if rep.dim() != tau.shape[slot] {
            return Err(SsbError::dimension(format!("triple product slot {slot}"), tau.shape[slot], rep.dim()));
        }
    }
    if rep_b.r() != rep_a.r() || rep_c.r() != rep_a.r() {
        return Err(SsbError::dimension("representation generator count", rep_a.r(), rep_b.r().max(rep_c.r())));
    }
    let acting: Vec<Representation> = reps
        .iter()
        .zip(tau.conjugate)
        .map(|(rep, conj)| if conj { rep.conjugate() } else { (*rep).clone() })
        .collect();
    let [da, db, dc] = tau.shape;
    let mut worst = 0.0f64;
    for i in 0..rep_a.r() {
        let (ra, rb, rc) = (&acting[0].gens[i], &acting[1].gens[i], &acting[2].gens[i]);
        let mut sq = 0.0;
        for a in 0..da {
            for b in 0..db {
                for cc in 0..dc {
                    let mut d = Complex64::new(0.0, 0.0);
                    for k in 0..da {
                        d += ra[(k, a)] * tau.get(k, b, cc);
                    }
                    for k in 0..db {
                        d += rb[(k, b)] * tau.get(a, k, cc);
                    }
                    for k in 0..dc {
                        d += rc[(k, cc)] * tau.get(a, b, k);
                    }
                    sq += d.norm_sqr();
                }
            }
        }
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

/// `(v_A bar, v_B, v_C) -> v_A bar . v_B v_C` on doublet x doublet x singlet.
pub fn electroweak_yukawa_tensor() -> TripleProduct {
    let mut tau = TripleProduct::zeros([2, 2, 1], [true, false, false]).expect("fixed shape");
    tau.set(0, 0, 0, c(1.0, 0.0));
    tau.set(1, 1, 0, c(1.0, 0.0));
    tau
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionMasses {
    /// `g_Y sum_b tau_abc v0_b` with the Higgs slot removed: rows follow the
    /// first remaining slot, columns the second.
    pub mass_matrix: CMat,
    /// `|row|` per row: the mass of the fermion in that component.
    pub row_masses: Vec<f64>,
    /// Singular values of the mass matrix, descending.
    pub dirac_masses: Vec<f64>,
}

/// Substitutes the vacuum into the Higgs slot.
pub fn fermion_mass_after_breaking(
    tau: &TripleProduct,
    v0: &CVec,
    g_y: f64,
    higgs_slot: usize,
) -> Result<FermionMasses> {
    if higgs_slot > 2 {
        return Err(SsbError::invalid("Higgs slot", format!("{higgs_slot} is not 0, 1 or 2")));
    }
    if v0.len() != tau.shape[higgs_slot] {
        return Err(SsbError::dimension("vacuum vs Higgs slot", tau.shape[higgs_slot], v0.len()));
    }
    let v = if tau.conjugate[higgs_slot] {
        v0.map(|z| z.conj())
    } else {
        v0.clone()
    };
    let rest: Vec<usize> = (0..3).filter(|&s| s != higgs_slot).collect();
    let (rows, cols) = (tau.shape[rest[0]], tau.shape[rest[1]]);
    let mut m = CMat::zeros(rows, cols);
    let mut idx = [0usize; 3];
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, vb) in v.iter().enumerate() {
                idx[rest[0]] = i;
                idx[rest[1]] = j;
                idx[higgs_slot] = b;
                acc += tau.get(idx[0], idx[1], idx[2]) * vb;
            }
            m[(i, j)] = acc * g_y;
        }
    }
    let row_masses = m.row_iter().map(|r| r.norm()).collect();
    let mut dirac_masses: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    dirac_masses.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(FermionMasses {
        mass_matrix: m,
        row_masses,
        dirac_masses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u1_charge(q: f64) -> Representation {
        Representation::new(vec![CMat::from_element(1, 1, c(0.0, q))]).unwrap()
    }

    #[test]
    fn schur_for_su2_irreps() {
        for dim in 1..=4 {
            let rep = su2_irrep(dim).unwrap();
            let basis = intertwiner_basis(&rep, &rep).unwrap();
            assert_eq!(basis.dimension(), 1, "dim {dim}");
            assert!(basis.residual < 1e-10);
        }
        assert_eq!(intertwiner_basis(&su2_irrep(2).unwrap(), &su2_irrep(3).unwrap()).unwrap().dimension(), 0);
    }

    #[test]
    fn su2_irreps_satisfy_commutation_relations() {
        for dim in 1..=4 {
            let rep = su2_irrep(dim).unwrap();
            let g = rep.generators();
            // [iJx, iJy] = i (i Jz) * i = -Jz ... i.e. [X1, X2] = -X3 in this basis.
            let comm = &g[0] * &g[1] - &g[1] * &g[0];
            assert!(frobenius(&(comm + &g[2])) < 1e-12);
        }
    }

    #[test]
    fn trivial_reps_have_unit_intertwiner() {
        let t = Representation::trivial(1, 1).unwrap();
        let b = intertwiner_basis(&t, &t).unwrap();
        assert_eq!(b.dimension(), 1);
        assert!((b.basis[0][(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn distinct_u1_charges_forbid_mass_forms() {
        assert!(!mass_form_exists(&u1_charge(1.0), &u1_charge(-0.5)).unwrap());
        assert!(mass_form_exists(&u1_charge(0.7), &u1_charge(0.7)).unwrap());
    }

    #[test]
    fn isomorphic_copy_keeps_dimension() {
        let rep = su2_irrep(3).unwrap();
        let herm_gen = {
            let m = CMat::from_fn(3, 3, |i, j| c((i * j) as f64 * 0.2, i as f64 - j as f64));
            (&m - m.adjoint()) * c(0.5, 0.0)
        };
        let unitary = crate::expm::default_method().expm(&herm_gen);
        let copy = rep.conjugated_by(&unitary).unwrap();
        assert_eq!(intertwiner_basis(&rep, &copy).unwrap().dimension(), 1);
    }

    #[test]
    fn yukawa_tensor_entries_and_contraction() {
        let tau = electroweak_yukawa_tensor();
        assert_eq!(tau.get(0, 0, 0), c(1.0, 0.0));
        assert_eq!(tau.get(1, 1, 0), c(1.0, 0.0));
        assert_eq!(tau.get(0, 1, 0), c(0.0, 0.0));
        let e = CVec::from_vec(vec![c(0.3, 0.2), c(-0.1, 0.5)]);
        let phi = CVec::from_vec(vec![c(1.0, -1.0), c(0.25, 0.0)]);
        let er = CVec::from_element(1, c(0.0, 2.0));
        let direct = (e[0].conj() * phi[0] + e[1].conj() * phi[1]) * er[0];
        assert!((tau.contract(&e, &phi, &er).unwrap() - direct).norm() < 1e-15);
        let zero = TripleProduct::zeros([2, 2, 1], [true, false, false]).unwrap();
        let t = Representation::trivial(1, 2).unwrap();
        let s = Representation::trivial(1, 1).unwrap();
        assert_eq!(triple_invariance_defect(&zero, &t, &t, &s).unwrap(), 0.0);
    }

    #[test]
    fn fermion_masses_follow_vacuum_direction() {
        let tau = electroweak_yukawa_tensor();
        let v0 = CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let m = fermion_mass_after_breaking(&tau, &v0, 0.5, 1).unwrap();
        assert_eq!(m.row_masses, vec![0.0, 0.5]);
        assert_eq!(fermion_mass_after_breaking(&tau, &v0, 0.0, 1).unwrap().row_masses, vec![0.0, 0.0]);
        let rotated = CVec::from_vec(vec![c(0.8, 0.0), c(0.0, 0.0)]);
        let m = fermion_mass_after_breaking(&tau, &rotated, 0.5, 1).unwrap();
        assert!((m.row_masses[0] - 0.4).abs() < 1e-15 && m.row_masses[1] == 0.0);
    }
}
