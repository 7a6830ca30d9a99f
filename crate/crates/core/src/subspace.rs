//! Closed subspaces of `R^n` as orthonormal bases, their polars, and
//! affine translates.
//!
//! The polar of a subspace under a self-dual pairing coincides with the
//! orthogonal complement of its coordinate realization, so the polar is
//! computed as a complement and inherits the ambient dimension exactly:
//! `dim A + dim A^0 = n` always holds here by construction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SnlError};

/// Singular values below `DEFAULT_RANK_TOL * sigma_max` are treated as
/// zero when a spanning set is orthonormalized.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Default tolerance for membership tests, relative to `max(1, |v|)`.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<f64>,
    rank_tol: f64,
}

impl Subspace {
    /// Orthonormalizes a spanning set. Near-dependent directions are
    /// dropped at `rank_tol` (relative to the largest singular value).
    pub fn span(vectors: &[DVector<f64>], rank_tol: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(SnlError::InvalidArgument(
                "cannot infer the ambient dimension from an empty spanning set".into(),
            ));
        }
        if rank_tol <= 0.0 || rank_tol.is_nan() {
            return Err(SnlError::InvalidArgument(format!(
                "rank tolerance must be positive, got {rank_tol}"
            )));
        }
        let n = vectors[0].len();
        if n == 0 {
            return Err(SnlError::InvalidArgument(
                "spanning vectors must have dimension at least 1".into(),
            ));
        }
        for v in vectors {
            if v.len() != n {
                return Err(SnlError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let m = DMatrix::from_columns(vectors);
        let basis = crate::linalg::column_space_basis(&m, rank_tol);
        Ok(Subspace {
            ambient_dim: n,
            basis,
            rank_tol,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    /// Wraps columns that are already orthonormal (checked in debug
    /// builds only; callers guarantee it).
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>, rank_tol: f64) -> Self {
        debug_assert!({
            let k = basis.ncols();
            (basis.tr_mul(&basis) - DMatrix::identity(k, k)).norm() < 1e-8
        });
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
            rank_tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace (number of basis columns).
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Orthonormal basis, one column per dimension.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|i| self.basis.column(i).into_owned()).collect()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(v)?;
        Ok(&self.basis * self.basis.tr_mul(v))
    }

    /// Whether `|v - proj v| <= tol * max(1, |v|)`.
    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> Result<bool> {
        let residual = v - self.project(v)?;
        Ok(residual.norm() <= tol * v.norm().max(1.0))
    }

    /// The polar subspace: annihilator of `A` in the dual coordinates,
    /// realized as the orthogonal complement. `dim A^0 = n - dim A`.
    pub fn polar(&self) -> Subspace {
        let basis = crate::linalg::complement_basis(&self.basis, self.ambient_dim);
        Subspace {
            ambient_dim: self.ambient_dim,
            basis,
            rank_tol: self.rank_tol,
        }
    }

    /// The affine translate `C = A - d`.
    pub fn shift(&self, d: DVector<f64>) -> Result<AffineSet> {
        self.check_dim(&d)?;
        Ok(AffineSet {
            direction: self.clone(),
            shift: d,
        })
    }

    /// Mutual containment of basis vectors at `tol`.
    pub fn same_subspace(&self, other: &Subspace, tol: f64) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        (0..self.dim()).all(|i| {
            other
                .contains(&self.basis.column(i).into_owned(), tol)
                .unwrap_or(false)
        })
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(SnlError::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Affine set `C = A - d` for a subspace `A` and a shift vector `d`.
#[derive(Debug, Clone)]
pub struct AffineSet {
    direction: Subspace,
    shift: DVector<f64>,
}

impl AffineSet {
    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    /// The `d` in `C = A - d`.
    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    /// Whether `c + d` lies in the direction subspace.
    pub fn contains(&self, c: &DVector<f64>, tol: f64) -> Result<bool> {
        self.direction.contains(&(c + &self.shift), tol)
    }

    /// The member `B t - d` for coordinates `t` in the direction basis.
    pub fn point(&self, t: &DVector<f64>) -> Result<DVector<f64>> {
        if t.len() != self.direction.dim() {
            return Err(SnlError::DimensionMismatch {
                expected: self.direction.dim(),
                got: t.len(),
            });
        }
        Ok(self.direction.basis() * t - &self.shift)
    }

    /// The member of `C` nearest the origin: `proj_A(d) - d`.
    pub fn nearest_to_origin(&self) -> DVector<f64> {
        self.direction.project(&self.shift).expect("shift has ambient dim") - &self.shift
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec3(a: f64, b: f64, c: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b, c])
    }

    #[test]
    fn span_drops_dependent_directions() {
        let a = Subspace::span(
            &[vec3(1.0, 0.0, 1.0), vec3(2.0, 0.0, 2.0), vec3(0.0, 1.0, 0.0)],
            DEFAULT_RANK_TOL,
        )
        .unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&vec3(3.0, -4.0, 3.0), 1e-9).unwrap());
        assert!(!a.contains(&vec3(1.0, 0.0, 0.0), 1e-9).unwrap());
    }

    #[test]
    fn zero_subspace_contains_only_zero() {
        let z = Subspace::span(&[vec3(0.0, 0.0, 0.0)], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.contains(&vec3(0.0, 0.0, 0.0), 1e-9).unwrap());
        assert!(!z.contains(&vec3(1e-3, 0.0, 0.0), 1e-9).unwrap());
        assert_eq!(z.polar().dim(), 3);
    }

    #[test]
    fn polar_dimensions_are_complementary() {
        let a = Subspace::span(&[vec3(1.0, 1.0, 0.0), vec3(0.0, 0.0, 2.0)], 1e-10).unwrap();
        let polar = a.polar();
        assert_eq!(a.dim() + polar.dim(), 3);
        // Every polar basis vector annihilates A.
        assert!(a.basis().tr_mul(polar.basis()).norm() < 1e-12);
        assert!(a.polar().polar().same_subspace(&a, 1e-9));
    }

    #[test]
    fn mismatched_spanning_lengths_error() {
        let bad = Subspace::span(
            &[vec3(1.0, 0.0, 0.0), DVector::from_vec(vec![1.0, 2.0])],
            1e-10,
        );
        assert!(matches!(
            bad,
            Err(SnlError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn affine_shift_membership_and_anchor() {
        let a = Subspace::span(&[vec3(1.0, 1.0, 0.0)], 1e-10).unwrap();
        let c = a.shift(vec3(0.0, 0.0, 1.0)).unwrap();
        // (1, 1, -1) + d = (1, 1, 0) is in A.
        assert!(c.contains(&vec3(1.0, 1.0, -1.0), 1e-9).unwrap());
        assert!(!c.contains(&vec3(1.0, 1.0, 0.0), 1e-9).unwrap());
        let anchor = c.nearest_to_origin();
        assert!((anchor - vec3(0.0, 0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn nearest_point_solves_the_projection_problem() {
        let a = Subspace::span(&[vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0)], 1e-10).unwrap();
        let d = vec3(3.0, -2.0, 5.0);
        let c = a.shift(d.clone()).unwrap();
        let anchor = c.nearest_to_origin();
        assert!(c.contains(&anchor, 1e-9).unwrap());
        // Any other member is at least as far from the origin.
        let other = c.point(&DVector::from_vec(vec![7.0, -1.0])).unwrap();
        assert!(anchor.norm() <= other.norm() + 1e-12);
    }

    #[test]
    fn full_and_zero_are_mutual_polars() {
        let f = Subspace::full(4);
        assert_eq!(f.polar().dim(), 0);
        assert_eq!(Subspace::zero(4).polar().dim(), 4);
    }
}
