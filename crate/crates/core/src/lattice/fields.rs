use crate::error::{Result, SsbError};
use crate::lie::AlgebraElement;
use crate::linalg::{unitarity_defect, CMat, CVec};

use super::grid::Grid;

/// Complex `n`-vector per site.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipletField {
    n: usize,
    values: Vec<CVec>,
}

impl MultipletField {
    pub fn new(n: usize, values: Vec<CVec>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.len() != n) {
            return Err(SsbError::dimension("multiplet field value", n, v.len()));
        }
        if values.iter().any(|v| v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(SsbError::invalid("multiplet field", "non-finite value"));
        }
        Ok(MultipletField { n, values })
    }

    pub fn from_fn(grid: &Grid, n: usize, f: impl FnMut(usize) -> CVec) -> Result<Self> {
        Self::new(n, (0..grid.len()).map(f).collect())
    }

    pub fn constant(grid: &Grid, v: &CVec) -> Self {
        MultipletField {
            n: v.len(),
            values: vec![v.clone(); grid.len()],
        }
    }

    pub fn zeros(grid: &Grid, n: usize) -> Self {
        Self::constant(grid, &CVec::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[CVec] {
        &self.values
    }

    pub fn at(&self, site: usize) -> &CVec {
        &self.values[site]
    }

    pub fn max_distance(&self, other: &MultipletField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.values.len() != grid.len() {
            return Err(SsbError::dimension("multiplet field sites", grid.len(), self.values.len()));
        }
        Ok(())
    }
}

/// Algebra-valued one-form: `values[site][mu]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    r: usize,
    dim: usize,
    values: Vec<Vec<AlgebraElement>>,
}

impl GaugeField {
    pub fn new(r: usize, dim: usize, values: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        for site in &values {
            if site.len() != dim {
                return Err(SsbError::dimension("gauge field directions", dim, site.len()));
            }
            if let Some(a) = site.iter().find(|a| a.dim() != r) {
                return Err(SsbError::dimension("gauge field coefficients", r, a.dim()));
            }
            if site.iter().any(|a| a.coeffs().iter().any(|x| !x.is_finite())) {
                return Err(SsbError::invalid("gauge field", "non-finite coefficient"));
            }
        }
        Ok(GaugeField { r, dim, values })
    }

    pub fn from_fn(grid: &Grid, r: usize, mut f: impl FnMut(usize, usize) -> AlgebraElement) -> Result<Self> {
        let dim = grid.dim();
        Self::new(
            r,
            dim,
            (0..grid.len()).map(|s| (0..dim).map(|mu| f(s, mu)).collect()).collect(),
        )
    }

    pub fn zeros(grid: &Grid, r: usize) -> Self {
        GaugeField {
            r,
            dim: grid.dim(),
            values: vec![vec![AlgebraElement::zero(r); grid.dim()]; grid.len()],
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, site: usize, mu: usize) -> &AlgebraElement {
        &self.values[site][mu]
    }

    pub fn scaled(&self, s: f64) -> Self {
        GaugeField {
            r: self.r,
            dim: self.dim,
            values: self
                .values
                .iter()
                .map(|site| site.iter().map(|a| a.scaled(s)).collect())
                .collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().flatten().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_distance(&self, other: &GaugeField) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| a.sub(b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.values.len() != grid.len() || self.dim != grid.dim() {
            return Err(SsbError::dimension("gauge field sites", grid.len(), self.values.len()));
        }
        Ok(())
    }
}

/// Unitary `n x n` matrix per site.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransformField {
    n: usize,
    values: Vec<CMat>,
}

pub const UNITARITY_TOL: f64 = 1e-10;

impl GaugeTransformField {
    pub fn new(n: usize, values: Vec<CMat>) -> Result<Self> {
        for (site, u) in values.iter().enumerate() {
            if u.nrows() != n || u.ncols() != n {
                return Err(SsbError::dimension("gauge transformation", n, u.nrows()));
            }
            let defect = unitarity_defect(u);
            if !(defect <= UNITARITY_TOL) {
                return Err(SsbError::AtSite {
                    site: vec![site],
                    source: Box::new(SsbError::invalid(
                        "gauge transformation",
                        format!("not unitary (defect {defect:.3e})"),
                    )),
                });
            }
        }
        Ok(GaugeTransformField { n, values })
    }

    pub fn from_fn(grid: &Grid, n: usize, f: impl FnMut(usize) -> CMat) -> Result<Self> {
        Self::new(n, (0..grid.len()).map(f).collect())
    }

    pub fn constant(grid: &Grid, u: &CMat) -> Result<Self> {
        Self::new(u.nrows(), vec![u.clone(); grid.len()])
    }

    pub fn identity(grid: &Grid, n: usize) -> Self {
        GaugeTransformField {
            n,
            values: vec![CMat::identity(n, n); grid.len()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn at(&self, site: usize) -> &CMat {
        &self.values[site]
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.values.len() != grid.len() {
            return Err(SsbError::dimension("gauge transformation sites", grid.len(), self.values.len()));
        }
        Ok(())
    }
}

/// `F_{mu nu}` per site, stored as `values[site][mu * dim + nu]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldStrength {
    pub(crate) dim: usize,
    pub(crate) values: Vec<Vec<AlgebraElement>>,
}

impl FieldStrength {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, site: usize, mu: usize, nu: usize) -> &AlgebraElement {
        &self.values[site][mu * self.dim + nu]
    }
}
