//! Gauge Lie algebra acting on a multiplet space.
//!
//! The algebra is represented concretely by its action on `C^n`: a list of `r`
//! skew-Hermitian `n x n` matrices. Coupling constants are folded into these
//! matrices and the list is taken to be orthonormal, so the scalar product on the
//! algebra is the Euclidean product of coefficient vectors.
//!
//! Complex vectors are realified with the interleaved layout
//! `(Re v1, Im v1, Re v2, Im v2, ...)`.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SsbError};
use crate::expm::{self, MatrixExponential};
use crate::linalg::{frobenius, re_frobenius_inner, CMat, CVec, RMat, RVec};

pub const DEFAULT_TOL_ALG: f64 = 1e-10;

/// Coordinates of a Lie-algebra element in the generator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement(RVec);

impl AlgebraElement {
    pub fn new(coeffs: RVec) -> Self {
        AlgebraElement(coeffs)
    }

    pub fn from_slice(coeffs: &[f64]) -> Self {
        AlgebraElement(RVec::from_column_slice(coeffs))
    }

    pub fn zero(r: usize) -> Self {
        AlgebraElement(RVec::zeros(r))
    }

    /// The `i`-th generator itself.
    pub fn basis(r: usize, i: usize) -> Self {
        let mut v = RVec::zeros(r);
        v[i] = 1.0;
        AlgebraElement(v)
    }

    pub fn coeffs(&self) -> &RVec {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The algebra scalar product (Euclidean on coefficients).
    pub fn dot(&self, other: &AlgebraElement) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        AlgebraElement(&self.0 * s)
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        AlgebraElement(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Self {
        AlgebraElement(&self.0 - &other.0)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:.6}")?;
        }
        write!(f, "]")
    }
}

/// Metadata: which generators belong to which simple or U(1) factor.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorLabel {
    pub label: String,
    pub coupling: f64,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub skew_defect: f64,
    pub closure_defect: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    n: usize,
    gens: Vec<CMat>,
    factors: Vec<FactorLabel>,
    gram_pinv: RMat,
    /// `structure[i * r + j]` holds the coefficients of `[gens[i], gens[j]]`.
    structure: Vec<RVec>,
    closure_defect: f64,
}

impl GeneratorSet {
    /// Checks only structure (shapes, factor metadata). Skew-Hermiticity and
    /// closure are reported by [`GeneratorSet::validate`], not enforced here.
    pub fn new(gens: Vec<CMat>, factors: Vec<FactorLabel>) -> Result<Self> {
        let r = gens.len();
        if r == 0 {
            return Err(SsbError::invalid("generators", "at least one generator is required"));
        }
        let n = gens[0].nrows();
        if n == 0 {
            return Err(SsbError::invalid("generators", "multiplet dimension must be at least 1"));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.nrows() != n {
                return Err(SsbError::dimension(format!("generator {i} rows"), n, g.nrows()));
            }
            if g.ncols() != n {
                return Err(SsbError::dimension(format!("generator {i} columns"), n, g.ncols()));
            }
        }
        let mut seen = vec![false; r];
        for f in &factors {
            if !(f.coupling > 0.0) {
                return Err(SsbError::invalid(
                    format!("factor `{}` coupling", f.label),
                    format!("must be positive, got {}", f.coupling),
                ));
            }
            for &k in &f.generators {
                if k >= r {
                    return Err(SsbError::invalid(
                        format!("factor `{}`", f.label),
                        format!("generator index {k} out of range (r = {r})"),
                    ));
                }
                if seen[k] {
                    return Err(SsbError::invalid(
                        format!("factor `{}`", f.label),
                        format!("generator {k} already belongs to another factor"),
                    ));
                }
                seen[k] = true;
            }
        }
        if !factors.is_empty() && seen.iter().any(|s| !s) {
            return Err(SsbError::invalid("factors", "factor labels must partition the generators"));
        }

        let gram = RMat::from_fn(r, r, |i, j| re_frobenius_inner(&gens[i], &gens[j]));
        let gram_pinv = gram
            .clone()
            .pseudo_inverse(1e-12 * gram.amax().max(1e-300))
            .map_err(|e| SsbError::invalid("generators", e.to_string()))?;

        let mut set = GeneratorSet {
            n,
            gens,
            factors,
            gram_pinv,
            structure: Vec::with_capacity(r * r),
            closure_defect: 0.0,
        };
        let mut structure = Vec::with_capacity(r * r);
        let mut closure = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let comm = &set.gens[i] * &set.gens[j] - &set.gens[j] * &set.gens[i];
                let (coeffs, defect) = set.project(&comm);
                closure = closure.max(defect);
                structure.push(coeffs.0);
            }
        }
        set.structure = structure;
        set.closure_defect = closure;
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &CMat {
        &self.gens[i]
    }

    pub fn factors(&self) -> &[FactorLabel] {
        &self.factors
    }

    pub fn closure_defect(&self) -> f64 {
        self.closure_defect
    }

    /// Skew-Hermiticity defect and closure defect against `tol`.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let skew_defect = self
            .gens
            .iter()
            .map(|g| frobenius(&(g + g.adjoint())))
            .fold(0.0, f64::max);
        ValidationReport {
            skew_defect,
            closure_defect: self.closure_defect,
            tol,
            passed: skew_defect < tol && self.closure_defect < tol,
        }
    }

    fn check_element(&self, x: &AlgebraElement) -> Result<()> {
        if x.dim() != self.r() {
            return Err(SsbError::dimension("algebra element", self.r(), x.dim()));
        }
        Ok(())
    }

    /// The matrix `sum_i x_i gens[i]`.
    pub fn matrix(&self, x: &AlgebraElement) -> Result<CMat> {
        self.check_element(x)?;
        let mut m = CMat::zeros(self.n, self.n);
        for (g, &coef) in self.gens.iter().zip(x.coeffs().iter()) {
            if coef != 0.0 {
                m += g * Complex64::new(coef, 0.0);
            }
        }
        Ok(m)
    }

    /// Least-squares projection of an arbitrary matrix onto the real span of the
    /// generators. Returns the coefficients and the Frobenius norm of the residual.
    pub fn project(&self, m: &CMat) -> (AlgebraElement, f64) {
        let b = RVec::from_iterator(self.r(), self.gens.iter().map(|g| re_frobenius_inner(g, m)));
        let coeffs = &self.gram_pinv * b;
        let mut recon = CMat::zeros(self.n, self.n);
        for (g, &coef) in self.gens.iter().zip(coeffs.iter()) {
            recon += g * Complex64::new(coef, 0.0);
        }
        let defect = frobenius(&(m - recon));
        (AlgebraElement(coeffs), defect)
    }

    /// Bracket in coefficient form via the precomputed structure constants.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let r = self.r();
        let mut out = RVec::zeros(r);
        for i in 0..r {
            let xi = x.0[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..r {
                let yj = y.0[j];
                if yj != 0.0 {
                    out.axpy(xi * yj, &self.structure[i * r + j], 1.0);
                }
            }
        }
        AlgebraElement(out)
    }

    /// Action of an algebra element on a multiplet vector.
    pub fn act(&self, x: &AlgebraElement, v: &CVec) -> Result<CVec> {
        self.check_element(x)?;
        if v.len() != self.n {
            return Err(SsbError::dimension("multiplet vector", self.n, v.len()));
        }
        let mut out = CVec::zeros(self.n);
        for (g, &coef) in self.gens.iter().zip(x.coeffs().iter()) {
            if coef != 0.0 {
                out += (g * v) * Complex64::new(coef, 0.0);
            }
        }
        Ok(out)
    }

    pub fn exponentiate(&self, x: &AlgebraElement) -> Result<CMat> {
        self.exponentiate_with(expm::Pade13, x)
    }

    pub fn exponentiate_with<M: MatrixExponential>(
        &self,
        method: M,
        x: &AlgebraElement,
    ) -> Result<CMat> {
        Ok(method.expm(&self.matrix(x)?))
    }

    /// `gens[i]` as a real-linear map on the realified space; antisymmetric when
    /// the generator is skew-Hermitian.
    pub fn real_action_matrix(&self, i: usize) -> RMat {
        complex_to_real_matrix(&self.gens[i])
    }

    /// Matrix `C` with `u gens[j] u^-1 = sum_i C[i][j] gens[i]`, plus the largest
    /// projection residual (nonzero only when `u` is outside the represented group).
    pub fn adjoint_matrix(&self, u: &CMat) -> (RMat, f64) {
        let r = self.r();
        let u_inv = u.adjoint();
        let mut c = RMat::zeros(r, r);
        let mut defect = 0.0f64;
        for j in 0..r {
            let conj = u * &self.gens[j] * &u_inv;
            let (coeffs, d) = self.project(&conj);
            defect = defect.max(d);
            c.set_column(j, coeffs.coeffs());
        }
        (c, defect)
    }

    /// Deterministic pseudo-random element with coefficients uniform in `[-scale, scale]`.
    pub fn random_element(&self, seed: u64, scale: f64) -> AlgebraElement {
        random_algebra_element(self.r(), seed, scale)
    }
}

pub fn random_algebra_element(r: usize, seed: u64, scale: f64) -> AlgebraElement {
    if scale == 0.0 {
        return AlgebraElement::zero(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AlgebraElement(RVec::from_fn(r, |_, _| scale * rng.random_range(-1.0..=1.0)))
}

/// Deterministic pseudo-random multiplet vector with entries in the unit square.
pub fn random_multiplet(n: usize, seed: u64) -> CVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    CVec::from_fn(n, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    })
}

pub fn realify(v: &CVec) -> RVec {
    let mut out = RVec::zeros(2 * v.len());
    for (k, z) in v.iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
    out
}

pub fn unrealify(x: &RVec) -> CVec {
    assert!(x.len().is_multiple_of(2), "realified vector must have even length");
    CVec::from_fn(x.len() / 2, |k, _| Complex64::new(x[2 * k], x[2 * k + 1]))
}

/// Real `2n x 2n` matrix of a complex-linear map under the interleaved layout.
pub fn complex_to_real_matrix(m: &CMat) -> RMat {
    let (rows, cols) = m.shape();
    let mut out = RMat::zeros(2 * rows, 2 * cols);
    for p in 0..rows {
        for q in 0..cols {
            let z = m[(p, q)];
            out[(2 * p, 2 * q)] = z.re;
            out[(2 * p, 2 * q + 1)] = -z.im;
            out[(2 * p + 1, 2 * q)] = z.im;
            out[(2 * p + 1, 2 * q + 1)] = z.re;
        }
    }
    out
}

/// Coefficient vector helper for callers that hold a plain slice.
pub fn element(coeffs: &[f64]) -> AlgebraElement {
    AlgebraElement(DVector::from_column_slice(coeffs))
}
