//! Named example spaces, lines, and the helix point sets used by the
//! CLI fixtures and the acceptance suite.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn identity_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

pub fn neg_identity_matrix(n: usize) -> DMatrix<f64> {
    -DMatrix::identity(n, n)
}

/// Swap of the first two coordinates, third fixed: the pairing behind
/// the helix examples. `q(b) = b1 b2 + b3^2 / 2`.
pub fn swap3_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
}

/// The 3-cycle permutation matrix. Deliberately not symmetric: feeding
/// it to the space constructor must be rejected.
pub fn cyclic3_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0])
}

/// Direction of the line R(1, -1, 2): positive for the swap pairing
/// (q = 1 on the direction) but nowhere near maximal.
pub fn line_1m12_direction() -> DVector<f64> {
    DVector::from_vec(vec![1.0, -1.0, 2.0])
}

/// Point of the pitch-`lambda` helix `(cos t, sin t, lambda t)`.
pub fn helix_point(theta: f64, lambda: f64) -> DVector<f64> {
    DVector::from_vec(vec![theta.cos(), theta.sin(), lambda * theta])
}

/// Pairwise form value `q(h(theta) - h(phi))` for the swap pairing,
/// computed componentwise so scans over many pairs stay allocation-free.
/// Equals `2 lambda^2 s^2 - 2 sin(theta + phi) sin^2 s` at
/// `s = (theta - phi) / 2`; nonnegative for every pair iff
/// `lambda >= 1`.
pub fn helix_pair_q(theta: f64, phi: f64, lambda: f64) -> f64 {
    let d1 = theta.cos() - phi.cos();
    let d2 = theta.sin() - phi.sin();
    let d3 = lambda * (theta - phi);
    d1 * d2 + 0.5 * d3 * d3
}

/// Outcome of a pairwise scan: the smallest form value seen and where.
#[derive(Debug, Clone, Copy)]
pub struct HelixScan {
    pub min_q: f64,
    pub theta: f64,
    pub phi: f64,
    pub pairs: usize,
}

/// Scans `pairs` jittered-grid samples of `(theta, phi)` in
/// `[-theta_max, theta_max]^2` and returns the minimal pairwise form
/// value. The grid guarantees coverage; the seeded jitter guarantees
/// the scan is not blind to off-grid behavior while staying
/// reproducible.
pub fn helix_min_pairwise_q(
    lambda: f64,
    pairs: usize,
    theta_max: f64,
    seed: u64,
) -> HelixScan {
    let pairs = pairs.max(1);
    let grid = (pairs as f64).sqrt().ceil() as usize;
    let cell = 2.0 * theta_max / grid as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = HelixScan {
        min_q: f64::MAX,
        theta: 0.0,
        phi: 0.0,
        pairs,
    };
    for i in 0..pairs {
        let theta = -theta_max + ((i / grid) as f64 + rng.random::<f64>()) * cell;
        let phi = -theta_max + ((i % grid) as f64 + rng.random::<f64>()) * cell;
        let q = helix_pair_q(theta, phi, lambda);
        if q < best.min_q {
            best.min_q = q;
            best.theta = theta;
            best.phi = phi;
        }
    }
    best
}

/// A certified violating pair on a scaled helix.
#[derive(Debug, Clone, Copy)]
pub struct HelixWitness {
    pub theta: f64,
    pub phi: f64,
    pub q: f64,
}

/// Threshold a pair must beat to count as a violation certificate.
pub const HELIX_WITNESS_MARGIN: f64 = -1e-6;

/// Deterministic search for a pair with `q(h(theta) - h(phi)) < -1e-6`:
/// a coarse grid over `[-theta_max, theta_max]^2` followed by local
/// refinement around the best cell. Returns `None` when no violation
/// exists at that margin (in particular for `lambda >= 1`).
pub fn scaled_helix_witness(lambda: f64, theta_max: f64) -> Option<HelixWitness> {
    let mut center = (0.0_f64, 0.0_f64);
    let mut radius = theta_max;
    let mut best = HelixWitness {
        theta: 0.0,
        phi: 0.0,
        q: f64::MAX,
    };
    for round in 0..5 {
        let steps = if round == 0 { 200 } else { 40 };
        for i in 0..=steps {
            let theta = center.0 - radius + 2.0 * radius * i as f64 / steps as f64;
            for j in 0..=steps {
                let phi = center.1 - radius + 2.0 * radius * j as f64 / steps as f64;
                let q = helix_pair_q(theta, phi, lambda);
                if q < best.q {
                    best = HelixWitness { theta, phi, q };
                }
            }
        }
        center = (best.theta, best.phi);
        radius /= 10.0;
    }
    (best.q < HELIX_WITNESS_MARGIN).then_some(best)
}
