//! Random test-instance generators with known ground truth.
//!
//! The involution spaces built here split into an exact `+1/-1`
//! eigenbasis, so positive and negative parts are known by
//! construction. Graphs of strict contractions from the `+1` part to
//! the `-1` part are maximally positive with a uniform margin (the
//! restricted form is bounded below by `(1 - c^2)/2` on unit vectors,
//! where `c` is the contraction factor), which keeps every sampled
//! verdict far from the decision threshold. Proper subspaces of such
//! graphs are positive and certifiably non-maximal.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::space::{SnlSpace, DEFAULT_SPACE_TOL};
use crate::subspace::{Subspace, DEFAULT_RANK_TOL};

pub fn standard_normal_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

pub fn standard_normal_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the
/// sign convention fixed by the diagonal of R.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = nalgebra::linalg::QR::new(standard_normal_matrix(n, n, rng));
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// An involution pairing together with its exact eigenspace split.
#[derive(Debug, Clone)]
pub struct InvolutionInstance {
    pub space: SnlSpace,
    /// Orthonormal basis of the `+1` eigenspace (where `q = |.|^2 / 2`).
    pub plus: Subspace,
    /// Orthonormal basis of the `-1` eigenspace (where `q = -|.|^2 / 2`).
    pub minus: Subspace,
}

/// Random involution space `Q D Q^T` with `plus_dim` eigenvalues `+1`.
pub fn involution_instance<R: Rng + ?Sized>(
    n: usize,
    plus_dim: usize,
    rng: &mut R,
) -> InvolutionInstance {
    assert!(n >= 1 && plus_dim <= n);
    let q = random_orthogonal(n, rng);
    let d = DVector::from_fn(n, |i, _| if i < plus_dim { 1.0 } else { -1.0 });
    let l = &q * DMatrix::from_diagonal(&d) * q.transpose();
    let space = SnlSpace::new(l, DEFAULT_SPACE_TOL)
        .expect("orthogonal conjugation of a sign matrix is a valid pairing");
    let plus = Subspace::from_orthonormal(q.columns(0, plus_dim).into_owned(), DEFAULT_RANK_TOL);
    let minus = Subspace::from_orthonormal(
        q.columns(plus_dim, n - plus_dim).into_owned(),
        DEFAULT_RANK_TOL,
    );
    InvolutionInstance { space, plus, minus }
}

/// Random linear map from the `+1` part to the `-1` part with spectral
/// norm exactly `sigma` (when both parts are nontrivial).
pub fn random_contraction<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    sigma: f64,
    rng: &mut R,
) -> DMatrix<f64> {
    if rows == 0 || cols == 0 {
        return DMatrix::zeros(rows, cols);
    }
    let g = standard_normal_matrix(rows, cols, rng);
    let top = nalgebra::linalg::SVD::new(g.clone(), false, false)
        .singular_values
        .iter()
        .fold(0.0_f64, |a, s| a.max(*s));
    if top == 0.0 {
        return DMatrix::zeros(rows, cols);
    }
    g * (sigma / top)
}

/// Graph `{ u + T u : u in plus }` of a map `T: plus -> minus`, in
/// ambient coordinates. For `|T| = c < 1` this subspace is maximally
/// positive with margin `(1 - c^2)/2`.
pub fn contraction_graph(inst: &InvolutionInstance, t: &DMatrix<f64>) -> Subspace {
    let p = inst.plus.dim();
    assert_eq!(t.ncols(), p);
    assert_eq!(t.nrows(), inst.minus.dim());
    if p == 0 {
        return Subspace::zero(inst.space.dim());
    }
    let lifted = inst.plus.basis() + inst.minus.basis() * t;
    let columns: Vec<DVector<f64>> =
        (0..p).map(|j| lifted.column(j).into_owned()).collect();
    Subspace::span(&columns, DEFAULT_RANK_TOL).expect("graph columns are independent")
}

/// Random maximally positive subspace: the graph of a contraction with
/// `sigma` drawn from `[0.3, max_sigma]`.
pub fn random_maximal_positive<R: Rng + ?Sized>(
    inst: &InvolutionInstance,
    max_sigma: f64,
    rng: &mut R,
) -> Subspace {
    let sigma = if max_sigma > 0.3 {
        rng.random_range(0.3..max_sigma)
    } else {
        max_sigma
    };
    let t = random_contraction(inst.minus.dim(), inst.plus.dim(), sigma, rng);
    contraction_graph(inst, &t)
}

/// Random `k`-dimensional subspace of `of` (requires `k < dim of`),
/// spanned by Gaussian combinations of the basis.
pub fn proper_subspace<R: Rng + ?Sized>(of: &Subspace, k: usize, rng: &mut R) -> Subspace {
    assert!(k < of.dim());
    if k == 0 {
        return Subspace::zero(of.ambient_dim());
    }
    let coefficients = standard_normal_matrix(of.dim(), k, rng);
    let spanning = of.basis() * coefficients;
    let columns: Vec<DVector<f64>> =
        (0..k).map(|j| spanning.column(j).into_owned()).collect();
    Subspace::span(&columns, DEFAULT_RANK_TOL).expect("Gaussian combinations are independent")
}

/// Random matrix `M` with `M + M^T` positive semidefinite, so that the
/// relation `{(x, M x)}` is (maximally) monotone: a normalized Gram
/// symmetric part plus an arbitrary skew part.
pub fn random_monotone_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = standard_normal_matrix(d, d, rng);
    let sym = &g * g.transpose() / d as f64;
    let a = standard_normal_matrix(d, d, rng);
    let skew = (&a - a.transpose()) * 0.5;
    sym + skew
}
