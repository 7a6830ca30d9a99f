//! Monotone linear relations as graph subspaces of the `(x, x*)`
//! product pairing.
//!
//! A linear relation on `R^d` is a subspace of `R^d x R^d`; it is
//! monotone exactly when its graph is positive for the product pairing,
//! and maximally monotone exactly when the graph is maximally positive.
//! The adjoint relation is `rho(G^0)` where `rho` flips the sign of the
//! second component, and the classical four-way equivalence ties
//! maximality of `A`, monotonicity and maximality of `A*`, and the
//! type-NI property of `A` together (rule `Cor7.3`).

use nalgebra::{DMatrix, DVector};

use crate::convex::{maximality_pattern, Kind, QuadraticOnAffine};
use crate::error::{Result, SnlError};
use crate::positivity::{is_maximally_positive, is_positive, DEFAULT_CHECK_TOL};
use crate::report::{CheckReport, ExtReal, Status, Witness};
use crate::space::SnlSpace;
use crate::subspace::{Subspace, DEFAULT_RANK_TOL};

/// Random sweep size used by the sampled type-NI conditions when the
/// caller does not choose one.
pub const DEFAULT_SWEEP_SAMPLES: usize = 200;

const DEFAULT_SWEEP_SEED: u64 = 17;

#[derive(Debug, Clone)]
pub struct LinearRelation {
    edim: usize,
    graph: Subspace,
}

impl LinearRelation {
    /// The relation `{(x, M x)}` for a square matrix `M`.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(SnlError::InvalidArgument(format!(
                "relation matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let d = m.nrows();
        let columns: Vec<DVector<f64>> = (0..d)
            .map(|j| {
                DVector::from_fn(2 * d, |i, _| {
                    if i < d {
                        if i == j { 1.0 } else { 0.0 }
                    } else {
                        m[(i - d, j)]
                    }
                })
            })
            .collect();
        Ok(LinearRelation {
            edim: d,
            graph: Subspace::span(&columns, DEFAULT_RANK_TOL)?,
        })
    }

    /// Wraps an arbitrary graph subspace; the ambient dimension must
    /// split evenly into `(x, x*)` components.
    pub fn from_graph(graph: Subspace) -> Result<Self> {
        let n = graph.ambient_dim();
        if !n.is_multiple_of(2) || n == 0 {
            return Err(SnlError::OddDimension { dim: n });
        }
        Ok(LinearRelation { edim: n / 2, graph })
    }

    pub fn edim(&self) -> usize {
        self.edim
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    /// The product-pairing space the graph lives in.
    pub fn space(&self) -> SnlSpace {
        SnlSpace::product(self.edim).expect("edim >= 1")
    }

    /// Monotonicity is positivity of the graph for the product pairing:
    /// a `Fail` witness is a graph pair `(x, x*)` with `<x, x*> < 0`.
    pub fn is_monotone(&self, tol: f64) -> Result<CheckReport> {
        let inner = is_positive(&self.space(), &self.graph, tol)?;
        let mut report = CheckReport::new(inner.status, "Lem3.4", tol);
        report.evidence = inner.evidence;
        report.witness = inner.witness.map(|w| self.split_witness(w));
        Ok(report)
    }

    /// Maximal monotonicity via the polar criterion on the graph.
    pub fn is_maximally_monotone(&self, tol: f64) -> Result<CheckReport> {
        let inner = self.require_monotone_then(tol, |space, graph| {
            is_maximally_positive(space, graph, tol)
        })?;
        let mut report = inner.clone();
        report.witness = inner.witness.map(|w| self.split_witness(w));
        Ok(report)
    }

    fn require_monotone_then<T>(
        &self,
        tol: f64,
        op: impl FnOnce(&SnlSpace, &Subspace) -> Result<T>,
    ) -> Result<T> {
        let space = self.space();
        let mono = is_positive(&space, &self.graph, tol)?;
        if !mono.passed() {
            return Err(SnlError::NotMonotone {
                witness_q: mono.evidence_value("witness_q").unwrap_or(f64::NAN),
            });
        }
        op(&space, &self.graph)
    }

    /// The adjoint relation `rho(G^0)`. Its graph coordinates read as
    /// `(y*, y**)` (dual component first): a pair is adjoint to the
    /// relation exactly when `<a, y*> = <a*, y**>` for every graph pair
    /// `(a, a*)`. Monotonicity and maximality of the adjoint are still
    /// plain graph positivity questions because the product pairing is
    /// self-dual.
    pub fn adjoint(&self) -> LinearRelation {
        let flipped = rho(&self.graph.polar()).expect("graph ambient dim is even");
        LinearRelation {
            edim: self.edim,
            graph: flipped,
        }
    }

    /// `inf { <x - y, x* - y*> : (y, y*) in G }` at the point `dstar`
    /// read as `(x, x*)`, in closed form through the conjugate of the
    /// graph restriction of the pairing form. Finite or minus infinity.
    pub fn ni_infimum(&self, dstar: &DVector<f64>) -> Result<ExtReal> {
        self.require_monotone_then(DEFAULT_CHECK_TOL, |space, graph| {
            let f = QuadraticOnAffine::new(space, graph, DVector::zeros(2 * self.edim), Kind::Q)?;
            Ok(match f.conjugate(dstar)? {
                ExtReal::Finite(c) => ExtReal::Finite(space.q_dual(dstar)? - c),
                _ => ExtReal::NegInf,
            })
        })
    }

    /// Type-NI verdict with default sweep parameters.
    pub fn is_type_ni(&self, tol: f64) -> Result<CheckReport> {
        self.is_type_ni_sampled(tol, DEFAULT_SWEEP_SAMPLES, DEFAULT_SWEEP_SEED)
    }

    /// A monotone relation is type NI when its NI infimum is nonpositive
    /// everywhere. The verdict comes from the four-way maximality
    /// pattern of the graph; the sampled conditions cross-check the
    /// exact polar one, and any disagreement between the four (which
    /// clean data never produces) is itself a `Fail` with the offending
    /// direction as witness.
    pub fn is_type_ni_sampled(
        &self,
        tol: f64,
        samples: usize,
        seed: u64,
    ) -> Result<CheckReport> {
        let pattern = self.require_monotone_then(tol, |space, graph| {
            maximality_pattern(space, graph, tol, samples, seed)
        })?;
        let all = pattern.polar_negative
            && pattern.global_bound
            && pattern.polar_bound
            && pattern.maximal;
        let status = if all && pattern.pattern_holds {
            Status::Pass
        } else {
            Status::Fail
        };
        let mut report = CheckReport::new(status, "Cor5.4", tol)
            .with("polar_negative", pattern.polar_negative.into())
            .with("global_bound_sampled", pattern.global_bound.into())
            .with("polar_bound_sampled", pattern.polar_bound.into())
            .with("maximal", pattern.maximal.into())
            .with("pattern_consistent", pattern.pattern_holds.into())
            .with("samples", pattern.samples as f64);
        if let Some((value, dstar)) = &pattern.worst {
            report = report.with("worst_infimum", *value);
            if status != Status::Pass && *value > 0.0 {
                report = report.with_witness(self.split_witness(Witness::Vector(dstar.clone())));
            }
        }
        if report.witness.is_none() {
            if let Some(w) = pattern.polar_witness {
                if status != Status::Pass {
                    report = report.with_witness(self.split_witness(Witness::Vector(w)));
                }
            }
        }
        Ok(report)
    }

    /// Four-way equivalence: maximality of `A`, monotonicity of `A*`,
    /// maximality of `A*`, and type NI of `A` must agree. `Pass` means
    /// the truth table is constant (all true or all false).
    pub fn brezis_browder_check(&self, tol: f64) -> Result<CheckReport> {
        self.brezis_browder_sampled(tol, DEFAULT_SWEEP_SAMPLES, DEFAULT_SWEEP_SEED)
    }

    pub fn brezis_browder_sampled(
        &self,
        tol: f64,
        samples: usize,
        seed: u64,
    ) -> Result<CheckReport> {
        let space = self.space();
        let maximal = self
            .require_monotone_then(tol, |space, graph| {
                is_maximally_positive(space, graph, tol)
            })?;
        let adjoint = self.adjoint();
        let adjoint_mono = is_positive(&space, adjoint.graph(), tol)?;
        let adjoint_maximal = if adjoint_mono.passed() {
            Some(is_maximally_positive(&space, adjoint.graph(), tol)?)
        } else {
            None
        };
        let ni = self.is_type_ni_sampled(tol, samples, seed)?;

        let flags = [
            maximal.passed(),
            adjoint_mono.passed(),
            adjoint_maximal.as_ref().is_some_and(|r| r.passed()),
            ni.passed(),
        ];
        let status = if flags.iter().all(|&f| f) || flags.iter().all(|&f| !f) {
            Status::Pass
        } else {
            Status::Fail
        };
        let mut report = CheckReport::new(status, "Cor7.3", tol)
            .with("maximal", flags[0].into())
            .with("adjoint_monotone", flags[1].into())
            .with("adjoint_maximal", flags[2].into())
            .with("type_ni", flags[3].into());
        if status == Status::Fail {
            report.witness = adjoint_mono
                .witness
                .or(maximal.witness)
                .or(adjoint_maximal.and_then(|r| r.witness))
                .or(ni.witness)
                .map(|w| self.split_witness(w));
        }
        Ok(report)
    }

    /// Splits a product-space witness vector into its `(x, x*)` pair.
    fn split_witness(&self, witness: Witness) -> Witness {
        match witness {
            Witness::Vector(v) if v.len() == 2 * self.edim => {
                let x = v.rows(0, self.edim).into_owned();
                let xstar = v.rows(self.edim, self.edim).into_owned();
                Witness::Pair(x, xstar)
            }
            other => other,
        }
    }
}

/// Sign flip of the second component: `rho(x, x*) = (x, -x*)`. An
/// isometric involution of the product space reversing the sign of the
/// pairing form.
pub fn rho(s: &Subspace) -> Result<Subspace> {
    let n = s.ambient_dim();
    if !n.is_multiple_of(2) || n == 0 {
        return Err(SnlError::OddDimension { dim: n });
    }
    let d = n / 2;
    let mut basis = s.basis().clone();
    for j in 0..basis.ncols() {
        for i in d..n {
            basis[(i, j)] = -basis[(i, j)];
        }
    }
    Ok(Subspace::from_orthonormal(basis, s.rank_tol()))
}

/// Constructive density of the product space for the dual pairing: for
/// any `dstar = (y*, y**)` the point `d = (0, y* + y**)` satisfies
/// `q~(dstar - L d) + |dstar - L d|^2 / 2 = 0`. Returns `d` and that
/// defect, which vanishes up to roundoff.
pub fn pdense_witness(
    space: &SnlSpace,
    dstar: &DVector<f64>,
) -> Result<(DVector<f64>, f64)> {
    let d = space.product_dim().ok_or(SnlError::NotProductSpace)?;
    if dstar.len() != 2 * d {
        return Err(SnlError::DimensionMismatch {
            expected: 2 * d,
            got: dstar.len(),
        });
    }
    let ystar = dstar.rows(0, d).into_owned();
    let ystarstar = dstar.rows(d, d).into_owned();
    let mut witness = DVector::zeros(2 * d);
    for i in 0..d {
        witness[d + i] = ystar[i] + ystarstar[i];
    }
    let residual = dstar - space.apply(&witness)?;
    let value = space.q_dual(&residual)? + 0.5 * residual.norm_squared();
    Ok((witness, value))
}
