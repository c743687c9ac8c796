//! Dense complex linear algebra helpers shared by the operator layer.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Smallest singular value; +∞ for an empty matrix (min over the empty set).
pub fn sigma_min(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Largest singular value (the operator 2-norm); 0 for an empty matrix.
pub fn sigma_max(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest and largest singular values in one decomposition.
pub fn sigma_extremes(m: &CMatrix) -> (f64, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (f64::INFINITY, 0.0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sv.iter().cloned().fold(0.0, f64::max);
    (lo, hi)
}

/// Orthonormal basis of the kernel: right singular vectors whose singular
/// value is ≤ rel_tol·σ_max. Returns a (ncols × kernel_dim) matrix.
pub fn kernel_basis(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let ncols = m.ncols();
    if ncols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(ncols, ncols);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("svd v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax;
    let mut cols: Vec<usize> = Vec::new();
    // v_t has min(nrows, ncols) rows; columns of V beyond that index pair
    // with implicit zero singular values and also belong to the kernel.
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= cut {
            cols.push(i);
        }
    }
    let rank_rows = v_t.nrows();
    let v = v_t.adjoint();
    let mut basis: Vec<CVector> = cols.iter().map(|&i| v.column(i).into_owned()).collect();
    if rank_rows < ncols {
        // complete V to a unitary to recover the trailing kernel directions
        let extra = complete_orthonormal(&v, ncols - rank_rows);
        basis.extend(extra);
    }
    from_columns(ncols, &basis)
}

/// Orthonormal basis of the column space: left singular vectors with singular
/// value > rel_tol·σ_max. Returns a (nrows × rank) matrix.
pub fn image_basis(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax;
    let cols: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cut)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    from_columns(m.nrows(), &cols)
}

/// ‖v − P_S v‖ where S is spanned by the orthonormal columns of `basis`.
pub fn distance_to_span(basis: &CMatrix, v: &CVector) -> f64 {
    if basis.ncols() == 0 {
        return v.norm();
    }
    let coeffs = basis.adjoint() * v;
    (v - basis * coeffs).norm()
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let dim = m.nrows();
    if dim == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors_cols: Vec<CVector> = order
        .iter()
        .map(|&i| se.eigenvectors.column(i).into_owned())
        .collect();
    (values, from_columns(dim, &vectors_cols))
}

/// Eigenvalue signature of a Hermitian matrix: counts of eigenvalues above,
/// below, and within ±tol·max|λ| of zero.
pub fn signature_of(m: &CMatrix, rel_tol: f64) -> (usize, usize, usize) {
    let (values, _) = hermitian_eigen(m);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let cut = rel_tol * scale;
    let mut sig = (0usize, 0usize, 0usize);
    for v in values {
        if v > cut {
            sig.0 += 1;
        } else if v < -cut {
            sig.1 += 1;
        } else {
            sig.2 += 1;
        }
    }
    sig
}

/// Solves a square system A x = b via SVD (tolerant of mild conditioning).
pub fn solve(a: &CMatrix, b: &CVector) -> Option<CVector> {
    if a.nrows() == 0 {
        return Some(CVector::zeros(a.ncols()));
    }
    a.clone().svd(true, true).solve(b, 0.0).ok()
}

/// Least-squares solution of A x ≈ b.
pub fn lstsq(a: &CMatrix, b: &CVector) -> CVector {
    if a.ncols() == 0 {
        return CVector::zeros(0);
    }
    if a.nrows() == 0 {
        return CVector::zeros(a.ncols());
    }
    a.clone()
        .svd(true, true)
        .solve(b, 0.0)
        .expect("svd least squares")
}

fn from_columns(nrows: usize, cols: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Extends the orthonormal columns of `v` by `count` further orthonormal
/// directions (Gram-Schmidt against coordinate vectors).
fn complete_orthonormal(v: &CMatrix, count: usize) -> Vec<CVector> {
    let dim = v.nrows();
    let mut have: Vec<CVector> = (0..v.ncols()).map(|j| v.column(j).into_owned()).collect();
    let mut fresh = Vec::new();
    for i in 0..dim {
        if fresh.len() == count {
            break;
        }
        let mut cand = CVector::zeros(dim);
        cand[i] = Complex64::new(1.0, 0.0);
        for b in &have {
            let proj = b.dotc(&cand);
            cand -= b * proj;
        }
        let nrm = cand.norm();
        if nrm > 1e-8 {
            cand /= Complex64::new(nrm, 0.0);
            have.push(cand.clone());
            fresh.push(cand);
        }
    }
    fresh
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_of_rank_one() {
        // rows: [1 i; 1 i] has rank 1, kernel spanned by (i, −1)/√2 up to phase
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)]);
        let k = kernel_basis(&m, 1e-9);
        assert_eq!(k.ncols(), 1);
        assert!((&m * k.column(0)).norm() < 1e-12);
        assert!((k.column(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_of_wide_matrix_includes_trailing_directions() {
        // 1×3 matrix: kernel has dimension 2
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let k = kernel_basis(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        for j in 0..2 {
            assert!((&m * k.column(j)).norm() < 1e-12);
        }
        // orthonormal
        let g = k.adjoint() * &k;
        assert!((g - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn signature_counts() {
        let m = CMatrix::identity(3, 3);
        assert_eq!(signature_of(&m, 1e-9), (3, 0, 0));
        let z = CMatrix::zeros(4, 4);
        assert_eq!(signature_of(&z, 1e-9), (0, 0, 4));
        let mixed = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(2.0, 0.0),
            c(-1.0, 0.0),
            c(1e-14, 0.0),
        ]));
        assert_eq!(signature_of(&mixed, 1e-9), (1, 1, 1));
    }

    #[test]
    fn sigma_extremes_on_diag() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(3.0, 0.0), c(0.5, 0.0)]));
        let (lo, hi) = sigma_extremes(&m);
        assert!((lo - 0.5).abs() < 1e-12);
        assert!((hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn distance_to_span_basics() {
        let e1 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let basis = CMatrix::from_columns(&[e1.clone()]);
        let v = CVector::from_vec(vec![c(3.0, 0.0), c(4.0, 0.0)]);
        assert!((distance_to_span(&basis, &v) - 4.0).abs() < 1e-12);
        assert!((distance_to_span(&CMatrix::zeros(2, 0), &v) - 5.0).abs() < 1e-12);
    }
}
