use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SsbError};

pub const MIN_EXTENT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// `diag(+, -, ..., -)`, direction 0 timelike.
    Lorentzian,
}

impl Metric {
    pub fn eta(self, mu: usize) -> f64 {
        match self {
            Metric::Euclidean => 1.0,
            Metric::Lorentzian if mu == 0 => 1.0,
            Metric::Lorentzian => -1.0,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Metric::Euclidean => 0,
            Metric::Lorentzian => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Metric::Euclidean),
            1 => Ok(Metric::Lorentzian),
            other => Err(SsbError::invalid("metric", format!("unknown code {other}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Lorentzian => "lorentzian",
        })
    }
}

impl FromStr for Metric {
    type Err = SsbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "lorentzian" => Ok(Metric::Lorentzian),
            other => Err(SsbError::invalid(
                "metric",
                format!("`{other}` (expected euclidean or lorentzian)"),
            )),
        }
    }
}

/// Periodic hypercubic grid, row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    shape: Vec<usize>,
    strides: Vec<usize>,
    h: f64,
    metric: Metric,
}

impl Grid {
    pub fn new(shape: Vec<usize>, h: f64, metric: Metric) -> Result<Self> {
        if shape.is_empty() {
            return Err(SsbError::invalid("grid shape", "at least one direction is required"));
        }
        if let Some(&bad) = shape.iter().find(|&&e| e < MIN_EXTENT) {
            return Err(SsbError::invalid(
                "grid shape",
                format!("extent {bad} is below the minimum {MIN_EXTENT}"),
            ));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(SsbError::invalid("grid spacing", format!("{h} is not a positive number")));
        }
        let mut strides = vec![1; shape.len()];
        for mu in (0..shape.len() - 1).rev() {
            strides[mu] = strides[mu + 1] * shape[mu + 1];
        }
        Ok(Grid {
            shape,
            strides,
            h,
            metric,
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn eta(&self, mu: usize) -> f64 {
        self.metric.eta(mu)
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical period along `mu`.
    pub fn period(&self, mu: usize) -> f64 {
        self.shape[mu] as f64 * self.h
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect()
    }

    pub fn position(&self, idx: usize) -> Vec<f64> {
        self.coords(idx).iter().map(|&c| c as f64 * self.h).collect()
    }

    /// Periodic neighbour `steps` sites away along `mu`.
    pub fn shift(&self, idx: usize, mu: usize, steps: isize) -> usize {
        let extent = self.shape[mu] as isize;
        let c = ((idx / self.strides[mu]) % self.shape[mu]) as isize;
        let moved = (c + steps).rem_euclid(extent);
        (idx as isize + (moved - c) * self.strides[mu] as isize) as usize
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim() as i32)
    }
}
