//! Matrix exponential strategies.
//!
//! Two interchangeable methods are registered: `pade13` (scaling and squaring with
//! the degree-13 Padé approximant, Higham 2005) and `taylor` (scaling and squaring
//! with a truncated Taylor series). `pade13` is the default used by the Lie-algebra
//! layer; `taylor` exists as an independent cross-check.

use std::sync::Arc;

use num_complex::Complex64;

use crate::linalg::CMat;
use crate::registry::{Named, Registry};

pub trait MatrixExponential: Named + Send + Sync {
    fn expm(&self, a: &CMat) -> CMat;
}

fn one_norm(a: &CMat) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn square_repeatedly(mut m: CMat, times: u32) -> CMat {
    for _ in 0..times {
        m = &m * &m;
    }
    m
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Pade13;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

impl Named for Pade13 {
    fn name(&self) -> &str {
        "pade13"
    }
}

impl MatrixExponential for Pade13 {
    fn expm(&self, a: &CMat) -> CMat {
        let n = a.nrows();
        if n == 0 {
            return CMat::zeros(0, 0);
        }
        let norm = one_norm(a);
        let s = if norm > THETA13 {
            (norm / THETA13).log2().ceil().max(0.0) as u32
        } else {
            0
        };
        let a = a.unscale(2f64.powi(s as i32));
        let b = |k: usize| Complex64::new(PADE13[k], 0.0);
        let ident = CMat::identity(n, n);
        let a2 = &a * &a;
        let a4 = &a2 * &a2;
        let a6 = &a2 * &a4;

        let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
        let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1));
        let inner_v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
        let v = inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);

        let p = &v + &u;
        let q = &v - &u;
        let r = q.lu().solve(&p).expect("Padé denominator is nonsingular for scaled input");
        square_repeatedly(r, s)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Taylor;

impl Named for Taylor {
    fn name(&self) -> &str {
        "taylor"
    }
}

impl MatrixExponential for Taylor {
    fn expm(&self, a: &CMat) -> CMat {
        let n = a.nrows();
        let norm = one_norm(a);
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = a.unscale(2f64.powi(s as i32));
        let mut sum = CMat::identity(n, n);
        let mut term = CMat::identity(n, n);
        for k in 1..40 {
            term = (&term * &a).unscale(k as f64);
            sum += &term;
            if one_norm(&term) <= 1e-18 * one_norm(&sum) {
                break;
            }
        }
        square_repeatedly(sum, s)
    }
}

pub fn default_method() -> Arc<dyn MatrixExponential> {
    Arc::new(Pade13)
}

pub fn registry() -> Registry<dyn MatrixExponential> {
    let mut reg: Registry<dyn MatrixExponential> = Registry::new("matrix exponential");
    reg.register(Arc::new(Pade13));
    reg.register(Arc::new(Taylor));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, frobenius, unitarity_defect};

    fn skew(seed: u64, n: usize, scale: f64) -> CMat {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMat::from_fn(n, n, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&m - m.adjoint()) * c(0.5 * scale, 0.0)
    }

    #[test]
    fn methods_agree_and_stay_unitary() {
        for seed in 0..10 {
            let a = skew(seed, 3, 4.0);
            let p = Pade13.expm(&a);
            let t = Taylor.expm(&a);
            assert!(frobenius(&(&p - &t)) < 1e-12);
            assert!(unitarity_defect(&p) < 1e-12);
        }
    }

    #[test]
    fn scalar_phase() {
        let a = CMat::from_element(1, 1, c(0.0, std::f64::consts::PI));
        let e = Pade13.expm(&a);
        assert!((e[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_is_exact() {
        // exp([[0,1],[0,0]]) = [[1,1],[0,1]].
        let a = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        for method in registry().iter() {
            let e = method.expm(&a);
            assert!((e[(0, 1)] - c(1.0, 0.0)).norm() < 1e-14, "{}", method.name());
            assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        }
    }
}
