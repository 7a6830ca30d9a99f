//! Quadratic convex functions supported on affine translates of an
//! L-positive subspace, in closed form.
//!
//! For `C = A - d` with `A` L-positive, the two function kinds are
//!
//! * kind `Q`: `q` restricted to `C` (plus infinity elsewhere), convex
//!   because the restricted form `H = B^T L B` is positive semidefinite;
//! * kind `P`: `q + |.|^2 / 2` restricted to `C`, which is 1-strongly
//!   convex (the Hessian on coordinates is `H + I`).
//!
//! Every operation reduces to the eigendecomposition of `H`: conjugates
//! are pseudoinverse quadratics with an explicit range test (out of
//! range means the supremum is infinite), minimization of kind `P` is a
//! nonsingular shifted solve, and subdifferentials are affine sets
//! `gradient + A^0`. The `br_refine` step turns an epsilon-subgradient
//! pair of a kind-`P` function into an exact subgradient pair nearby,
//! with the displacement bound `|b1 - b0| <= sqrt(2) eta` coming from
//! strong convexity.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SnlError};
use crate::linalg::SymmetricSolver;
use crate::positivity::require_positive;
use crate::report::ExtReal;
use crate::space::SnlSpace;
use crate::subspace::{AffineSet, Subspace, DEFAULT_MEMBERSHIP_TOL};

/// Base quadratic: `Q` is the pairing form `q`, `P` is `q + |.|^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Q,
    P,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Q => "Q",
            Kind::P => "P",
        }
    }
}

/// Slack added to the `gap <= eta^2` precondition test, relative to the
/// magnitude of the function values involved.
const GAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct QuadraticOnAffine {
    space: SnlSpace,
    affine: AffineSet,
    kind: Kind,
    polar: Subspace,
    solver: SymmetricSolver,
    /// `B^T L d`.
    g: DVector<f64>,
    /// `B^T d`.
    bt_d: DVector<f64>,
    q_d: f64,
    membership_tol: f64,
}

impl QuadraticOnAffine {
    /// Builds the kind-`kind` quadratic supported on `C = A - d`.
    /// Requires `A` L-positive so that both kinds are convex.
    pub fn new(space: &SnlSpace, a: &Subspace, d: DVector<f64>, kind: Kind) -> Result<Self> {
        if d.len() != space.dim() {
            return Err(SnlError::DimensionMismatch {
                expected: space.dim(),
                got: d.len(),
            });
        }
        require_positive(space, a, crate::positivity::DEFAULT_CHECK_TOL)?;
        let h = crate::positivity::restricted_form(space, a)?;
        let solver = SymmetricSolver::new(&h, a.rank_tol());
        let g = a.basis().tr_mul(&space.apply(&d)?);
        let bt_d = a.basis().tr_mul(&d);
        let q_d = space.q(&d)?;
        Ok(QuadraticOnAffine {
            space: space.clone(),
            polar: a.polar(),
            affine: a.shift(d)?,
            kind,
            solver,
            g,
            bt_d,
            q_d,
            membership_tol: DEFAULT_MEMBERSHIP_TOL,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn space(&self) -> &SnlSpace {
        &self.space
    }

    pub fn domain(&self) -> &AffineSet {
        &self.affine
    }

    fn base_value(&self, b: &DVector<f64>) -> Result<f64> {
        let q = self.space.q(b)?;
        Ok(match self.kind {
            Kind::Q => q,
            Kind::P => q + 0.5 * b.norm_squared(),
        })
    }

    /// Function value; plus infinity outside the affine domain.
    pub fn eval(&self, b: &DVector<f64>) -> Result<ExtReal> {
        if !self.affine.contains(b, self.membership_tol)? {
            return Ok(ExtReal::PosInf);
        }
        Ok(ExtReal::Finite(self.base_value(b)?))
    }

    /// Fenchel conjugate of a kind-`Q` function, in closed form: with
    /// `u = B^T b* + g`, the value is `u . H^+ u / 2 - <d, b*> - q(d)`
    /// when `u` lies in the range of `H`, and plus infinity otherwise.
    pub fn conjugate(&self, bstar: &DVector<f64>) -> Result<ExtReal> {
        if self.kind != Kind::Q {
            return Err(SnlError::WrongKind {
                expected: "Q",
                got: self.kind.name(),
            });
        }
        if bstar.len() != self.space.dim() {
            return Err(SnlError::DimensionMismatch {
                expected: self.space.dim(),
                got: bstar.len(),
            });
        }
        let u = self.affine.direction().basis().tr_mul(bstar) + &self.g;
        match self.solver.pinv_solve(&u) {
            Some((_, quad)) => Ok(ExtReal::Finite(
                quad - self.affine.shift().dot(bstar) - self.q_d,
            )),
            None => Ok(ExtReal::PosInf),
        }
    }

    /// Subdifferential at `b`: empty off the domain, otherwise the
    /// affine set `gradient(b) + A^0` where the gradient is `L b` for
    /// kind `Q` and `L b + b` for kind `P`.
    pub fn subdifferential(&self, b: &DVector<f64>) -> Result<SubgradientSet> {
        if !self.affine.contains(b, self.membership_tol)? {
            return Ok(SubgradientSet::Empty);
        }
        let lb = self.space.apply(b)?;
        let anchor = match self.kind {
            Kind::Q => lb,
            Kind::P => lb + b,
        };
        Ok(SubgradientSet::Affine {
            anchor,
            directions: self.polar.clone(),
        })
    }

    /// Minimum of `f - <., tilt>` over the domain, with its (unique for
    /// kind `P`) minimizer.
    fn minimize_tilted(&self, tilt: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        debug_assert_eq!(self.kind, Kind::P);
        let basis = self.affine.direction().basis();
        let u = &self.g + &self.bt_d + basis.tr_mul(tilt);
        let t = self.solver.shifted_solve(&u, 1.0);
        let d = self.affine.shift();
        let constant = self.q_d + 0.5 * d.norm_squared() + d.dot(tilt);
        let value = constant - 0.5 * u.dot(&t);
        Ok((value, basis * t - d))
    }

    /// Global minimum and minimizer of a kind-`P` function. Strong
    /// convexity makes the minimizer unique and the infimum attained.
    pub fn infimum(&self) -> Result<(f64, DVector<f64>)> {
        if self.kind != Kind::P {
            return Err(SnlError::WrongKind {
                expected: "P",
                got: self.kind.name(),
            });
        }
        self.minimize_tilted(&DVector::zeros(self.space.dim()))
    }

    /// Turns an epsilon-subgradient pair of a kind-`P` function into an
    /// exact one: given `b0` in the domain and `b0*` with duality gap
    /// `f(b0) + f*(b0*) - <b0, b0*> <= eta^2`, returns the exact pair
    /// `(b1, b0*)` where `b1` minimizes `f - <., b0*>`. Strong convexity
    /// bounds the displacement by `sqrt(2) eta`.
    pub fn refine(
        &self,
        b0: &DVector<f64>,
        b0star: &DVector<f64>,
        eta: f64,
    ) -> Result<Refinement> {
        if self.kind != Kind::P {
            return Err(SnlError::WrongKind {
                expected: "P",
                got: self.kind.name(),
            });
        }
        if eta <= 0.0 || eta.is_nan() {
            return Err(SnlError::InvalidArgument(format!(
                "eta must be positive, got {eta}"
            )));
        }
        if b0star.len() != self.space.dim() {
            return Err(SnlError::DimensionMismatch {
                expected: self.space.dim(),
                got: b0star.len(),
            });
        }
        let bound = eta * eta;
        let f_b0 = match self.eval(b0)? {
            ExtReal::Finite(v) => v,
            _ => {
                return Err(SnlError::PreconditionViolated {
                    gap: f64::INFINITY,
                    bound,
                });
            }
        };
        let (min_tilted, b1) = self.minimize_tilted(b0star)?;
        let conj = -min_tilted;
        let gap = f_b0 + conj - b0.dot(b0star);
        if gap > bound + GAP_SLACK * (f_b0.abs() + conj.abs()).max(1.0) {
            return Err(SnlError::PreconditionViolated { gap, bound });
        }
        let f_b1 = self.base_value(&b1)?;
        let residual = (f_b1 + conj - b1.dot(b0star)).abs();
        let step_norm = (&b1 - b0).norm();
        Ok(Refinement {
            b1,
            b1star: b0star.clone(),
            gap: gap.max(0.0),
            step_norm,
            step_bound: std::f64::consts::SQRT_2 * eta,
            subgradient_residual: residual,
        })
    }
}

/// Subdifferential of a quadratic-on-affine function: either empty (off
/// the domain) or an affine set `anchor + directions`.
#[derive(Debug, Clone)]
pub enum SubgradientSet {
    Empty,
    Affine {
        anchor: DVector<f64>,
        directions: Subspace,
    },
}

impl SubgradientSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, SubgradientSet::Empty)
    }

    /// The member `anchor + directions . t`.
    pub fn point(&self, t: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            SubgradientSet::Empty => None,
            SubgradientSet::Affine { anchor, directions } => {
                Some(anchor + directions.basis() * t)
            }
        }
    }
}

/// Result of [`QuadraticOnAffine::refine`].
#[derive(Debug, Clone)]
pub struct Refinement {
    pub b1: DVector<f64>,
    pub b1star: DVector<f64>,
    /// The verified duality gap of the input pair (clamped at zero).
    pub gap: f64,
    pub step_norm: f64,
    /// `sqrt(2) eta`, the guaranteed bound on `step_norm`.
    pub step_bound: f64,
    /// `|f(b1) + f*(b1*) - <b1, b1*>|`; zero exactly when `b1*` is a
    /// subgradient at `b1`.
    pub subgradient_residual: f64,
}

/// Joint evaluation of the four equivalent descriptions of maximality
/// of an L-positive subspace `A` (rule `Cor5.4`):
///
/// * `polar_negative`: `A^0` is negative for the dual pairing;
/// * `global_bound`: `q~(d*) - (q on A)*(d*) <= 0` for all `d*`,
///   evaluated on a random sweep plus a deterministic battery;
/// * `polar_bound`: the same bound restricted to `d*` in `A^0`;
/// * `maximal`: the polar criterion verdict itself.
///
/// The two sampled conditions include every eigendirection of the dual
/// form restricted to `A^0`, which is where a violation must show up
/// when `polar_negative` fails, so on clean instances the sampled
/// verdicts agree with the exact ones deterministically.
#[derive(Debug, Clone)]
pub struct PatternAssessment {
    pub polar_negative: bool,
    pub global_bound: bool,
    pub polar_bound: bool,
    pub maximal: bool,
    /// Whether the four verdicts fit the implication pattern
    /// `polar_negative == global_bound == polar_bound` and
    /// `polar_negative => maximal`.
    pub pattern_holds: bool,
    /// Largest finite sweep value of `q~(d*) - (q on A)*(d*)` with its
    /// argument.
    pub worst: Option<(f64, DVector<f64>)>,
    /// Polar direction with positive dual form, when one exists.
    pub polar_witness: Option<DVector<f64>>,
    pub samples: usize,
}

/// Runs the four-way maximality pattern assessment at tolerance `tol`
/// with `samples` random sweep directions per condition.
pub fn maximality_pattern(
    space: &SnlSpace,
    a: &Subspace,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<PatternAssessment> {
    let dual = space.dual()?;
    require_positive(space, a, tol)?;
    let n = space.dim();
    let f = QuadraticOnAffine::new(space, a, DVector::zeros(n), Kind::Q)?;
    let polar = a.polar();

    let value = |dstar: &DVector<f64>| -> Result<ExtReal> {
        Ok(match f.conjugate(dstar)? {
            ExtReal::Finite(c) => ExtReal::Finite(space.q_dual(dstar)? - c),
            _ => ExtReal::NegInf,
        })
    };
    let mut worst: Option<(f64, DVector<f64>)> = None;
    let mut sweep = |directions: &[DVector<f64>]| -> Result<bool> {
        let mut ok = true;
        for dstar in directions {
            if let ExtReal::Finite(v) = value(dstar)? {
                if worst.as_ref().is_none_or(|(w, _)| v > *w) {
                    worst = Some((v, dstar.clone()));
                }
                if v > tol * dstar.norm_squared().max(1.0) {
                    ok = false;
                }
            }
        }
        Ok(ok)
    };

    // Deterministic battery: polar basis plus all eigendirections of the
    // dual form restricted to the polar.
    let mut polar_battery: Vec<DVector<f64>> = polar.basis_vectors();
    if polar.dim() > 0 {
        let hd = crate::positivity::restricted_form(&dual, &polar)?;
        let eig = crate::linalg::symmetric_eig(&hd);
        for i in 0..polar.dim() {
            polar_battery.push(polar.basis() * eig.vectors.column(i));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let draw = |len: usize, rng: &mut ChaCha8Rng| {
        DVector::from_fn(len, |_, _| -> f64 { normal.sample(rng) })
    };

    let mut global_directions: Vec<DVector<f64>> = (0..n)
        .map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 }))
        .collect();
    global_directions.extend(polar_battery.iter().cloned());
    for _ in 0..samples {
        global_directions.push(draw(n, &mut rng));
    }
    let global_bound = sweep(&global_directions)?;

    let mut polar_directions = polar_battery;
    for _ in 0..samples {
        if polar.dim() > 0 {
            polar_directions.push(polar.basis() * draw(polar.dim(), &mut rng));
        }
    }
    let polar_bound = sweep(&polar_directions)?;

    let negativity = crate::positivity::is_negative(&dual, &polar, tol)?;
    let polar_negative = negativity.passed();
    let polar_witness = match negativity.witness {
        Some(crate::report::Witness::Vector(w)) => Some(w),
        _ => None,
    };
    let maximal = crate::positivity::is_maximally_positive(space, a, tol)?.passed();

    let pattern_holds = polar_negative == global_bound
        && global_bound == polar_bound
        && (!polar_negative || maximal);
    Ok(PatternAssessment {
        polar_negative,
        global_bound,
        polar_bound,
        maximal,
        pattern_holds,
        worst,
        polar_witness,
        samples,
    })
}
