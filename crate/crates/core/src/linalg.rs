//! Small dense linear-algebra helpers shared by the physics modules.
//!
//! Everything here works on `nalgebra` dynamic matrices. Rank decisions use a
//! relative singular-value cutoff; the cutoff is always passed in explicitly.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real part of the Hermitian product `v†w`.
pub fn re_inner(v: &CVec, w: &CVec) -> f64 {
    v.iter().zip(w.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Real part of `tr(A†B)`, the Euclidean product of matrices viewed as real vectors.
pub fn re_frobenius_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    frobenius(&(u.adjoint() * u - CMat::identity(n, n)))
}

/// Eigendecomposition of a real symmetric matrix with eigenvalues sorted ascending.
pub fn sym_eigen_sorted(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), RMat::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = RMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// Range/kernel split of a real `m x n` matrix by singular-value thresholding.
#[derive(Clone, Debug)]
pub struct RankSplit {
    /// Orthonormal basis of the column space (m x rank).
    pub range: RMat,
    /// Orthonormal basis of the kernel (n x (n - rank)).
    pub kernel: RMat,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

/// Columns whose singular value is below `rel_tol * sigma_max` count as kernel.
/// A zero matrix has rank 0 and the full space as kernel.
pub fn rank_split(a: &RMat, rel_tol: f64) -> RankSplit {
    let (m, n) = a.shape();
    // Pad rows so that the SVD returns a complete V factor; padded rows are zero and
    // do not change the kernel.
    let p = m.max(n);
    let mut padded = RMat::zeros(p, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(true, true);
    let u = svd.u.expect("U requested");
    let v_t = svd.v_t.expect("V requested");
    let sigma = svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * sigma_max;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap_or(Ordering::Equal));

    let rank = if sigma_max == 0.0 {
        0
    } else {
        order.iter().filter(|&&k| sigma[k] > cutoff).count()
    }
    .min(m.min(n));

    let mut range = RMat::zeros(m, rank);
    for (col, &k) in order.iter().take(rank).enumerate() {
        range.set_column(col, &u.column(k).rows(0, m));
    }
    let kernel_vecs: Vec<RVec> = order
        .iter()
        .skip(rank)
        .map(|&k| v_t.row(k).transpose())
        .collect();
    let kernel = orthonormalize(&kernel_vecs, n, n - rank);

    RankSplit {
        range,
        kernel,
        singular_values: order.iter().take(m.min(n)).map(|&k| sigma[k]).collect(),
        rank,
    }
}

/// Gram-Schmidt with re-orthogonalisation; keeps at most `want` vectors.
fn orthonormalize(vectors: &[RVec], dim: usize, want: usize) -> RMat {
    let mut basis: Vec<RVec> = Vec::with_capacity(want);
    for v in vectors {
        if basis.len() == want {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dot(&w);
                w.axpy(-proj, b, 1.0);
            }
        }
        let norm = w.norm();
        if norm > 1e-8 {
            basis.push(w / norm);
        }
    }
    let mut out = RMat::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Deterministic orthonormal basis of the column span of `q` (assumed orthonormal).
///
/// Standard basis vectors are projected onto the subspace and orthogonalised in
/// greedy pivot order (largest residual first, lowest index on ties). Each vector is
/// sign-fixed so its first significant entry is positive, and the result is sorted
/// in descending lexicographic order. The output therefore depends only on the
/// subspace, not on the eigensolver's internal choice of basis.
pub fn canonical_basis(q: &RMat) -> Vec<RVec> {
    let (dim, k) = q.shape();
    if k == 0 {
        return Vec::new();
    }
    let projector = q * q.transpose();
    let mut candidates: Vec<RVec> = (0..dim).map(|i| projector.column(i).into_owned()).collect();
    let mut basis: Vec<RVec> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut best = None;
        let mut best_norm = 0.0;
        for (idx, cand) in candidates.iter().enumerate() {
            let norm = cand.norm();
            if norm > best_norm * (1.0 + 1e-9) {
                best_norm = norm;
                best = Some(idx);
            }
        }
        let Some(idx) = best else { break };
        if best_norm < 1e-10 {
            break;
        }
        let mut v = candidates[idx].clone() / best_norm;
        for b in &basis {
            let proj = b.dot(&v);
            v.axpy(-proj, b, 1.0);
        }
        v /= v.norm();
        for cand in candidates.iter_mut() {
            let proj = v.dot(cand);
            cand.axpy(-proj, &v, 1.0);
        }
        candidates[idx].fill(0.0);
        basis.push(v);
    }
    for v in basis.iter_mut() {
        sign_normalize(v);
    }
    basis.sort_by(lex_cmp_desc);
    basis
}

pub fn sign_normalize(v: &mut RVec) {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9 * scale.max(1e-300)) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Descending lexicographic comparison with a small tolerance on each entry.
pub fn lex_cmp_desc(a: &RVec, b: &RVec) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x - y).abs() > 1e-10 {
            return y.partial_cmp(x).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Groups ascending eigenvalues into clusters whose neighbours differ by less than
/// `gap` (relative to the spectral scale). Returns index ranges into the sorted list.
pub fn eigen_clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[i - 1]).abs() > gap * scale {
            if start < i {
                clusters.push(start..i);
            }
            start = i;
        }
    }
    clusters
}

/// Complex null space of `a` (m x n, m >= 1): singular values below
/// `rel_tol * sigma_max` count as zero. Returns an orthonormal basis (n x k).
pub fn complex_null_space(a: &CMat, rel_tol: f64) -> CMat {
    let (m, n) = a.shape();
    let p = m.max(n);
    let mut padded = CMat::zeros(p, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("V requested");
    let sigma = svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let kernel_rows: Vec<usize> = (0..n)
        .filter(|&k| sigma_max == 0.0 || sigma[k] <= rel_tol * sigma_max)
        .collect();
    let mut vecs: Vec<CVec> = Vec::new();
    for k in kernel_rows {
        // Row k of V^H is the conjugate of the k-th right singular vector.
        let mut w: CVec = v_t.row(k).adjoint();
        for _ in 0..2 {
            for b in &vecs {
                let proj = b.dotc(&w);
                w.axpy(-proj, b, Complex64::new(1.0, 0.0));
            }
        }
        let norm = w.norm();
        if norm > 1e-8 {
            vecs.push(w.unscale(norm));
        }
    }
    let mut out = CMat::zeros(n, vecs.len());
    for (j, v) in vecs.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_split_of_wide_matrix_returns_full_kernel() {
        // 1 x 3 matrix [1, 1, 0]: rank 1, kernel dimension 2.
        let a = RMat::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let split = rank_split(&a, 1e-8);
        assert_eq!(split.rank, 1);
        assert_eq!(split.kernel.ncols(), 2);
        for col in split.kernel.column_iter() {
            assert!((&a * col).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_split_zero_matrix() {
        let split = rank_split(&RMat::zeros(4, 2), 1e-8);
        assert_eq!(split.rank, 0);
        assert_eq!(split.kernel.ncols(), 2);
        assert_eq!(split.range.ncols(), 0);
    }

    #[test]
    fn canonical_basis_recovers_coordinate_axes() {
        // A rotated basis of span{e0, e1} in R^3.
        let s = 0.5f64.sqrt();
        let q = RMat::from_column_slice(3, 2, &[s, s, 0.0, -s, s, 0.0]);
        let basis = canonical_basis(&q);
        assert_eq!(basis.len(), 2);
        assert!((&basis[0] - RVec::from_vec(vec![1.0, 0.0, 0.0])).norm() < 1e-12);
        assert!((&basis[1] - RVec::from_vec(vec![0.0, 1.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn clusters_split_on_gaps() {
        let clusters = eigen_clusters(&[0.0, 1.0, 1.0 + 1e-12, 2.0], 1e-8);
        assert_eq!(clusters, vec![0..1, 1..3, 3..4]);
    }

    #[test]
    fn complex_null_space_of_commutator_system() {
        // Null space of [[1, -1]] over C is spanned by (1, 1)/sqrt(2).
        let a = CMat::from_row_slice(1, 2, &[c(1.0, 0.0), c(-1.0, 0.0)]);
        let ns = complex_null_space(&a, 1e-8);
        assert_eq!(ns.ncols(), 1);
        assert!((ns[(0, 0)] - ns[(1, 0)]).norm() < 1e-12);
    }
}
