//! Dense symmetric-eigen and SVD kernels shared by the checkers.
//!
//! Rank policy: a singular value is treated as zero below
//! `rank_tol * sigma_max`; an eigenvalue of a restricted form below
//! `rank_tol * max(1, |lambda|_max)` (restricted forms of a nonexpansive
//! pairing are bounded by one, so the absolute anchor is safe). Range
//! tests compare the null-space component of the right-hand side against
//! `rank_tol * max(1, |rhs|)`.

use nalgebra::{DMatrix, DVector};

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Largest `|m[i][j] - m[j][i]|` together with its position.
pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> (usize, usize, f64) {
    let n = m.nrows();
    let (mut row, mut col, mut worst) = (0, 0, 0.0_f64);
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (m[(i, j)] - m[(j, i)]).abs();
            if gap > worst {
                (row, col, worst) = (i, j, gap);
            }
        }
    }
    (row, col, worst)
}

/// Eigenpairs of a symmetric matrix, sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricEig {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub(crate) fn symmetric_eig(h: &DMatrix<f64>) -> SymmetricEig {
    let k = h.nrows();
    if k == 0 {
        return SymmetricEig {
            values: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(k, |i, _| eig.eigenvalues[order[i]]);
    let cols: Vec<_> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    SymmetricEig {
        values,
        vectors: DMatrix::from_columns(&cols),
    }
}

pub(crate) fn spectral_norm_symmetric(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    symmetric_eig(m).values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

/// Orthonormal basis for the column space of `m`. Columns whose singular
/// value falls below `rank_tol * sigma_max` are dropped.
pub(crate) fn column_space_basis(m: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = nalgebra::linalg::SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, s| a.max(*s));
    if sigma_max == 0.0 {
        return DMatrix::zeros(n, 0);
    }
    let cutoff = rank_tol * sigma_max;
    let kept: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cutoff)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if kept.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&kept)
}

/// Orthonormal basis of the orthogonal complement of an orthonormal
/// `basis` inside R^n: the top `n - k` eigenvectors of `I - B B^T`.
pub(crate) fn complement_basis(basis: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let k = basis.ncols();
    if k == 0 {
        return DMatrix::identity(n, n);
    }
    if k >= n {
        return DMatrix::zeros(n, 0);
    }
    let projector = DMatrix::identity(n, n) - basis * basis.transpose();
    let eig = symmetric_eig(&symmetrize(&projector));
    // Ascending order: the complement directions (eigenvalue near one) sit
    // in the last n - k columns.
    let cols: Vec<_> = (k..n).map(|i| eig.vectors.column(i).into_owned()).collect();
    DMatrix::from_columns(&cols)
}

/// Cached eigendecomposition of a symmetric matrix, exposing a
/// pseudoinverse solve with an explicit range test and a shifted solve.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricSolver {
    eig: SymmetricEig,
    cutoff: f64,
    rank_tol: f64,
}

impl SymmetricSolver {
    pub(crate) fn new(h: &DMatrix<f64>, rank_tol: f64) -> Self {
        let eig = symmetric_eig(h);
        let lambda_max = eig.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        SymmetricSolver {
            eig,
            cutoff: rank_tol * lambda_max.max(1.0),
            rank_tol,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.eig.values.len()
    }

    /// `Some((H^+ u, u . H^+ u / 2))` when `u` lies in the range of `H`;
    /// `None` when its null-space component exceeds
    /// `rank_tol * max(1, |u|)`.
    pub(crate) fn pinv_solve(&self, u: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
        let k = self.dim();
        if k == 0 {
            return Some((DVector::zeros(0), 0.0));
        }
        let coords = self.eig.vectors.tr_mul(u);
        let mut null_mass = 0.0;
        let mut scaled = DVector::zeros(k);
        let mut quad = 0.0;
        for i in 0..k {
            if self.eig.values[i].abs() <= self.cutoff {
                null_mass += coords[i] * coords[i];
            } else {
                scaled[i] = coords[i] / self.eig.values[i];
                quad += coords[i] * scaled[i];
            }
        }
        if null_mass.sqrt() > self.rank_tol * u.norm().max(1.0) {
            return None;
        }
        Some((&self.eig.vectors * scaled, 0.5 * quad))
    }

    /// `(H + shift I)^{-1} u`; `shift` must clear the most negative
    /// eigenvalue.
    pub(crate) fn shifted_solve(&self, u: &DVector<f64>, shift: f64) -> DVector<f64> {
        let k = self.dim();
        if k == 0 {
            return DVector::zeros(0);
        }
        let coords = self.eig.vectors.tr_mul(u);
        let scaled = DVector::from_fn(k, |i, _| coords[i] / (self.eig.values[i] + shift));
        &self.eig.vectors * scaled
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eig_sorted_ascending() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 3.0]);
        let eig = symmetric_eig(&h);
        assert!(eig.values[0] < eig.values[1]);
        assert!((eig.values[0] - (-1.0)).abs() < 1e-12);
        assert!((eig.values[1] - 4.0).abs() < 1e-12);
        let residual = &h * eig.vectors.column(0) - eig.vectors.column(0) * eig.values[0];
        assert!(residual.norm() < 1e-12);
    }

    #[test]
    fn span_basis_is_orthonormal_and_rank_aware() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0],
        );
        let b = column_space_basis(&m, 1e-10);
        assert_eq!(b.ncols(), 1);
        let gram = b.tr_mul(&b);
        assert!((gram[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complement_has_exact_codimension() {
        let b = column_space_basis(
            &DMatrix::from_row_slice(3, 1, &[1.0, 1.0, 0.0]),
            1e-10,
        );
        let c = complement_basis(&b, 3);
        assert_eq!(c.ncols(), 2);
        assert!(b.tr_mul(&c).norm() < 1e-12);
        let gram = c.tr_mul(&c) - DMatrix::identity(2, 2);
        assert!(gram.norm() < 1e-12);
    }

    #[test]
    fn pinv_solve_detects_out_of_range() {
        // Rank-one H = diag(2, 0).
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let solver = SymmetricSolver::new(&h, 1e-10);
        let in_range = DVector::from_vec(vec![4.0, 0.0]);
        let (t, quad) = solver.pinv_solve(&in_range).expect("in range");
        assert!((t[0] - 2.0).abs() < 1e-12);
        assert!((quad - 4.0).abs() < 1e-12);
        assert!(solver.pinv_solve(&DVector::from_vec(vec![0.0, 1.0])).is_none());
    }

    #[test]
    fn near_zero_form_is_all_null() {
        let h = DMatrix::from_row_slice(1, 1, &[1e-15]);
        let solver = SymmetricSolver::new(&h, 1e-10);
        assert!(solver.pinv_solve(&DVector::from_vec(vec![1.0])).is_none());
        let (_, quad) = solver.pinv_solve(&DVector::from_vec(vec![1e-12])).unwrap();
        assert_eq!(quad, 0.0);
    }

    #[test]
    fn shifted_solve_matches_direct_inverse() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let solver = SymmetricSolver::new(&h, 1e-10);
        let u = DVector::from_vec(vec![1.0, -2.0]);
        let t = solver.shifted_solve(&u, 1.0);
        let residual = (&h + DMatrix::identity(2, 2)) * &t - u;
        assert!(residual.norm() < 1e-12);
    }
}
