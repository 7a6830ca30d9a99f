//! Certified positivity and maximality checks for subspaces.
//!
//! A subspace `A` with orthonormal basis `B` is L-positive exactly when
//! the restricted form `H = B^T L B` is positive semidefinite, so every
//! verdict here reduces to eigenvalue bounds on `H` at an explicit
//! tolerance. Maximality is decided through the polar: a closed
//! L-positive subspace is maximally L-positive precisely when its polar
//! is negative for the dual pairing (rule `Thm7.2a` in the catalog), and
//! symmetrically for maximal negativity (`Cor5.5`). The sampling
//! extension oracle decides the same question from the primal side
//! without ever touching the dual pairing; the two routes are kept
//! independent on purpose so they can cross-check each other.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SnlError};
use crate::report::{CheckReport, ExtReal, Status, Witness};
use crate::space::SnlSpace;
use crate::subspace::Subspace;

/// Default tolerance for eigenvalue-based verdicts, relative to
/// `max(1, |lambda|_max)` of the restricted form.
pub const DEFAULT_CHECK_TOL: f64 = 1e-8;

/// Restricted form `B^T L B` of the pairing on the subspace.
pub(crate) fn restricted_form(space: &SnlSpace, a: &Subspace) -> Result<DMatrix<f64>> {
    if a.ambient_dim() != space.dim() {
        return Err(SnlError::DimensionMismatch {
            expected: space.dim(),
            got: a.ambient_dim(),
        });
    }
    let lb = space.matrix() * a.basis();
    Ok(crate::linalg::symmetrize(&a.basis().tr_mul(&lb)))
}

fn eig_report(
    space: &SnlSpace,
    a: &Subspace,
    tol: f64,
    negative_side: bool,
    criterion: &str,
) -> Result<CheckReport> {
    let h = restricted_form(space, a)?;
    let k = h.nrows();
    if k == 0 {
        return Ok(CheckReport::new(Status::Pass, criterion, tol).with("restricted_dim", 0.0));
    }
    let eig = crate::linalg::symmetric_eig(&h);
    let min_eig = eig.values[0];
    let max_eig = eig.values[k - 1];
    let scale = min_eig.abs().max(max_eig.abs()).max(1.0);
    let (ok, bad_index, bad_value) = if negative_side {
        (max_eig <= tol * scale, k - 1, max_eig)
    } else {
        (min_eig >= -tol * scale, 0, min_eig)
    };
    let mut report = CheckReport::new(
        if ok { Status::Pass } else { Status::Fail },
        criterion,
        tol,
    )
    .with("restricted_dim", k as f64)
    .with("min_eig", min_eig)
    .with("max_eig", max_eig);
    if !ok {
        let witness = a.basis() * eig.vectors.column(bad_index);
        report = report
            .with("witness_q", 0.5 * bad_value)
            .with_witness(Witness::Vector(witness));
    }
    Ok(report)
}

/// Whether `q >= 0` on `A`: the restricted form has `min_eig >= -tol`
/// (relative). A `Fail` report carries a unit witness with `q < 0`.
pub fn is_positive(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<CheckReport> {
    eig_report(space, a, tol, false, "Def2.2")
}

/// Whether `q <= 0` on `A` (mirror of [`is_positive`]).
pub fn is_negative(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<CheckReport> {
    eig_report(space, a, tol, true, "Def2.2")
}

pub(crate) fn require_positive(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<()> {
    let report = is_positive(space, a, tol)?;
    if !report.passed() {
        return Err(SnlError::NotPositive {
            witness_q: report.evidence_value("witness_q").unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn require_negative(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<()> {
    let report = is_negative(space, a, tol)?;
    if !report.passed() {
        return Err(SnlError::NotNegative {
            witness_q: report.evidence_value("witness_q").unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Maximality of an L-positive subspace, decided through the polar: `A`
/// is maximally L-positive iff `A^0` is negative for the dual pairing.
/// A `Fail` witness is a polar direction with positive dual form.
pub fn is_maximally_positive(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<CheckReport> {
    let dual = space.dual()?;
    require_positive(space, a, tol)?;
    let polar = a.polar();
    let inner = is_negative(&dual, &polar, tol)?;
    let mut report = CheckReport::new(inner.status, "Thm7.2a", tol)
        .with("subspace_dim", a.dim() as f64)
        .with("polar_dim", polar.dim() as f64);
    for (key, value) in &inner.evidence {
        if key != "restricted_dim" {
            report = report.with(&format!("polar_{key}"), *value);
        }
    }
    report.witness = inner.witness;
    Ok(report)
}

/// Mirror statement: an L-negative subspace is maximally L-negative iff
/// its polar is positive for the dual pairing.
pub fn is_maximally_negative(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<CheckReport> {
    let dual = space.dual()?;
    require_negative(space, a, tol)?;
    let polar = a.polar();
    let inner = is_positive(&dual, &polar, tol)?;
    let mut report = CheckReport::new(inner.status, "Cor5.5", tol)
        .with("subspace_dim", a.dim() as f64)
        .with("polar_dim", polar.dim() as f64);
    for (key, value) in &inner.evidence {
        if key != "restricted_dim" {
            report = report.with(&format!("polar_{key}"), *value);
        }
    }
    report.witness = inner.witness;
    Ok(report)
}

/// `inf { q(a + d) : a in A }` for an L-positive `A`, in closed form:
/// with `g = B^T L d` this is `q(d) - g . H^+ g / 2` when `g` lies in
/// the range of `H`, and unbounded below otherwise.
pub fn inf_q_over(space: &SnlSpace, a: &Subspace, d: &DVector<f64>) -> Result<ExtReal> {
    require_positive(space, a, DEFAULT_CHECK_TOL)?;
    if d.len() != space.dim() {
        return Err(SnlError::DimensionMismatch {
            expected: space.dim(),
            got: d.len(),
        });
    }
    if a.dim() == 0 {
        return Ok(ExtReal::Finite(space.q(d)?));
    }
    let h = restricted_form(space, a)?;
    let solver = crate::linalg::SymmetricSolver::new(&h, a.rank_tol());
    let g = a.basis().tr_mul(&space.apply(d)?);
    match solver.pinv_solve(&g) {
        Some((_, quad)) => Ok(ExtReal::Finite(space.q(d)? - quad)),
        None => Ok(ExtReal::NegInf),
    }
}

/// Searches for a direction `d` outside `A` whose span extends `A` to a
/// strictly larger L-positive subspace, which certifies that `A` is not
/// maximal. Candidates are random directions and perturbations of points
/// near `A`; each is reduced to its unit-normalized component orthogonal
/// to `A` (the extension property only depends on that component, and
/// normalizing keeps the acceptance threshold scale-free). Returns
/// `None` when the trial budget is exhausted: sampling cannot certify
/// maximality, only refute it.
pub fn extension_oracle(
    space: &SnlSpace,
    a: &Subspace,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<DVector<f64>>> {
    require_positive(space, a, tol.max(DEFAULT_CHECK_TOL))?;
    let n = space.dim();
    let k = a.dim();
    if k == n {
        return Ok(None);
    }
    let h = restricted_form(space, a)?;
    let solver = crate::linalg::SymmetricSolver::new(&h, a.rank_tol());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let draw = |len: usize, rng: &mut ChaCha8Rng| {
        DVector::from_fn(len, |_, _| -> f64 { normal.sample(rng) })
    };
    for trial in 0..trials {
        let candidate = if trial % 2 == 1 && k > 0 {
            a.basis() * draw(k, &mut rng) + 0.1 * draw(n, &mut rng)
        } else {
            draw(n, &mut rng)
        };
        let ortho = &candidate - a.project(&candidate)?;
        let norm = ortho.norm();
        if norm <= 1e-12 * candidate.norm().max(1.0) {
            continue;
        }
        let d = ortho / norm;
        let g = a.basis().tr_mul(&space.apply(&d)?);
        let value = match solver.pinv_solve(&g) {
            Some((_, quad)) => space.q(&d)? - quad,
            None => continue,
        };
        if value >= -tol {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Double-polar consistency for an L-positive subspace: `A^00` must
/// equal `A` and be positive for the original pairing.
pub fn bidual_positivity_check(space: &SnlSpace, a: &Subspace, tol: f64) -> Result<CheckReport> {
    space.dual_matrix()?;
    require_positive(space, a, tol)?;
    let double_polar = a.polar().polar();
    let matches = a.same_subspace(&double_polar, tol.max(crate::subspace::DEFAULT_MEMBERSHIP_TOL));
    let inner = is_positive(space, &double_polar, tol)?;
    let ok = matches && inner.passed();
    let mut report = CheckReport::new(
        if ok { Status::Pass } else { Status::Fail },
        "eq28",
        tol,
    )
    .with("double_polar_matches", if matches { 1.0 } else { 0.0 })
    .with("double_polar_dim", double_polar.dim() as f64);
    for (key, value) in &inner.evidence {
        if key != "restricted_dim" {
            report = report.with(&format!("double_polar_{key}"), *value);
        }
    }
    if !ok {
        report.witness = inner.witness.or_else(|| {
            (0..double_polar.dim())
                .map(|i| double_polar.basis().column(i).into_owned())
                .find(|v| !a.contains(v, tol.max(1e-9)).unwrap_or(true))
                .map(Witness::Vector)
        });
    }
    Ok(report)
}
