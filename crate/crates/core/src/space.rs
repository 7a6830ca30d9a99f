//! Finite-dimensional spaces with a symmetric nonexpansive pairing.
//!
//! A space is `R^n` together with a symmetric matrix `L` of spectral norm
//! at most one, inducing the quadratic form `q(b) = <b, L b> / 2`. When
//! `L` is additionally an involution (`L L = I`), the same matrix defines
//! a pairing of the identical kind on the dual side and the space is
//! self-dual; checks that move between a subspace and its polar require
//! this. The `(x, x*)` product pairing used for monotone relations is the
//! block-swap involution, for which `q` is the bilinear coupling
//! `<x, x*>`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SnlError};
use crate::report::{CheckReport, Status, Witness};

/// Default validation tolerance for symmetry, the nonexpansive bound, and
/// involution detection.
pub const DEFAULT_SPACE_TOL: f64 = 1e-9;

/// Residual bound enforced by [`SnlSpace::validate_dual`].
pub const DUAL_IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SnlSpace {
    dim: usize,
    l: DMatrix<f64>,
    l_dual: Option<DMatrix<f64>>,
    tol: f64,
    product_dim: Option<usize>,
}

impl SnlSpace {
    /// Validates `l` (square, symmetric within `tol`, spectral norm at
    /// most `1 + tol`) and detects whether it is an involution, in which
    /// case the dual pairing is available.
    pub fn new(l: DMatrix<f64>, tol: f64) -> Result<Self> {
        if l.nrows() != l.ncols() {
            return Err(SnlError::InvalidArgument(format!(
                "pairing matrix must be square, got {}x{}",
                l.nrows(),
                l.ncols()
            )));
        }
        let n = l.nrows();
        if n == 0 {
            return Err(SnlError::InvalidArgument(
                "pairing matrix must have dimension at least 1".into(),
            ));
        }
        if tol <= 0.0 || tol.is_nan() {
            return Err(SnlError::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let (row, col, asym) = crate::linalg::max_asymmetry(&l);
        if asym > tol * crate::linalg::max_abs(&l).max(1.0) {
            return Err(SnlError::NotSymmetric {
                row,
                col,
                max_asymmetry: asym,
            });
        }
        let l = crate::linalg::symmetrize(&l);
        let norm = crate::linalg::spectral_norm_symmetric(&l);
        if norm > 1.0 + tol {
            return Err(SnlError::NormExceedsOne { norm, tol });
        }
        let involution_gap =
            crate::linalg::max_abs(&(&l * &l - DMatrix::identity(n, n)));
        let l_dual = (involution_gap <= tol).then(|| l.clone());
        Ok(SnlSpace {
            dim: n,
            l,
            l_dual,
            tol,
            product_dim: None,
        })
    }

    /// The `(x, x*)` pairing on `R^d x R^d`: block-swap matrix, for which
    /// `q(x, x*) = <x, x*>`. Always self-dual.
    pub fn product(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(SnlError::InvalidArgument(
                "product pairing needs dimension at least 1".into(),
            ));
        }
        let n = 2 * d;
        let mut l = DMatrix::zeros(n, n);
        for i in 0..d {
            l[(i, d + i)] = 1.0;
            l[(d + i, i)] = 1.0;
        }
        Ok(SnlSpace {
            dim: n,
            l_dual: Some(l.clone()),
            l,
            tol: DEFAULT_SPACE_TOL,
            product_dim: Some(d),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn has_dual(&self) -> bool {
        self.l_dual.is_some()
    }

    pub fn dual_matrix(&self) -> Result<&DMatrix<f64>> {
        self.l_dual.as_ref().ok_or(SnlError::NoDual)
    }

    /// Underlying dimension `d` when this space carries the `(x, x*)`
    /// product pairing.
    pub fn product_dim(&self) -> Option<usize> {
        self.product_dim
    }

    /// The dual space: same ambient dimension, pairing `L~`. Involutions
    /// are self-dual, so this swaps the two (equal) matrices.
    pub fn dual(&self) -> Result<SnlSpace> {
        let l_dual = self.dual_matrix()?.clone();
        Ok(SnlSpace {
            dim: self.dim,
            l: l_dual,
            l_dual: Some(self.l.clone()),
            tol: self.tol,
            product_dim: self.product_dim,
        })
    }

    /// The space with pairing `-L` (positive and negative swap roles).
    pub fn negated(&self) -> SnlSpace {
        SnlSpace {
            dim: self.dim,
            l: -&self.l,
            l_dual: self.l_dual.as_ref().map(|m| -m),
            tol: self.tol,
            product_dim: None,
        }
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(SnlError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `L b`.
    pub fn apply(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(b)?;
        Ok(&self.l * b)
    }

    /// `q(b) = <b, L b> / 2`.
    pub fn q(&self, b: &DVector<f64>) -> Result<f64> {
        self.check_dim(b)?;
        Ok(0.5 * b.dot(&(&self.l * b)))
    }

    /// `<b, L c>`, the symmetric pairing polarizing `q`.
    pub fn pairing(&self, b: &DVector<f64>, c: &DVector<f64>) -> Result<f64> {
        self.check_dim(b)?;
        self.check_dim(c)?;
        Ok(b.dot(&(&self.l * c)))
    }

    /// `q~(b*) = <b*, L~ b*> / 2` on the dual side.
    pub fn q_dual(&self, bstar: &DVector<f64>) -> Result<f64> {
        self.check_dim(bstar)?;
        let l_dual = self.dual_matrix()?;
        Ok(0.5 * bstar.dot(&(l_dual * bstar)))
    }

    /// The normalized duality map of a Hilbert-space realization is the
    /// identity; kept explicit so call sites mark where an abstract
    /// duality map would act.
    pub fn duality_map(&self, c: &DVector<f64>) -> DVector<f64> {
        c.clone()
    }

    /// Samples random vectors and checks the identities tying `q`, `q~`,
    /// and `L` together: the shift identity
    /// `q~(b* + L b) = q~(b*) + <b, b*> + q(b)`, the pullback
    /// `q~(L b) = q(b)`, the isometry `|L b| = |b|`, and coercivity of
    /// `q~ + |.|^2 / 2`. Residuals are relative to the sample scale;
    /// the verdict uses [`DUAL_IDENTITY_TOL`].
    pub fn validate_dual(&self, samples: usize, seed: u64) -> Result<CheckReport> {
        if self.l_dual.is_none() {
            return Err(SnlError::NoDual);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = StandardNormal;
        let mut draw = |n: usize| {
            DVector::from_fn(n, |_, _| -> f64 { normal.sample(&mut rng) })
        };
        let mut worst_shift = 0.0_f64;
        let mut worst_pullback = 0.0_f64;
        let mut worst_isometry = 0.0_f64;
        let mut worst_coercivity = 0.0_f64;
        let mut worst_pair: Option<(DVector<f64>, DVector<f64>)> = None;
        let mut worst_score = -1.0;
        for _ in 0..samples.max(1) {
            let b = draw(self.dim);
            let bstar = draw(self.dim);
            let lb = self.apply(&b)?;
            let scale = (b.norm_squared() + bstar.norm_squared()).max(1.0);
            let shift = (self.q_dual(&(&bstar + &lb))?
                - self.q_dual(&bstar)?
                - b.dot(&bstar)
                - self.q(&b)?)
                .abs()
                / scale;
            let pullback =
                (self.q_dual(&lb)? - self.q(&b)?).abs() / b.norm_squared().max(1.0);
            let isometry = (lb.norm() - b.norm()).abs() / b.norm().max(1.0);
            let coercivity = (-(self.q_dual(&bstar)? + 0.5 * bstar.norm_squared()))
                .max(0.0)
                / bstar.norm_squared().max(1.0);
            let score = shift.max(pullback).max(isometry).max(coercivity);
            if score > worst_score {
                worst_score = score;
                worst_pair = Some((b.clone(), bstar.clone()));
            }
            worst_shift = worst_shift.max(shift);
            worst_pullback = worst_pullback.max(pullback);
            worst_isometry = worst_isometry.max(isometry);
            worst_coercivity = worst_coercivity.max(coercivity);
        }
        let ok = worst_shift <= DUAL_IDENTITY_TOL
            && worst_pullback <= DUAL_IDENTITY_TOL
            && worst_isometry <= DUAL_IDENTITY_TOL
            && worst_coercivity <= DUAL_IDENTITY_TOL;
        let status = if ok { Status::Pass } else { Status::Fail };
        let mut report = CheckReport::new(status, "dual-identities", DUAL_IDENTITY_TOL)
            .with("shift_identity_residual", worst_shift)
            .with("pullback_residual", worst_pullback)
            .with("isometry_residual", worst_isometry)
            .with("coercivity_violation", worst_coercivity)
            .with("samples", samples.max(1) as f64);
        if !ok {
            if let Some((b, bstar)) = worst_pair {
                report = report.with_witness(Witness::Pair(b, bstar));
            }
        }
        Ok(report)
    }
}
