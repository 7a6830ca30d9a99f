//! One handler per subcommand: load the instance, run the library call,
//! shape the result into a [`ReportFile`].
//!
//! Criterion identifiers on reports are either the decision-rule ids the
//! library checks emit (`Def2.2`, `Thm7.2a`, ...) or, for pure
//! computations, a descriptive id naming the formula applied.

use snlkit_core::positivity::{
    extension_oracle, is_maximally_negative, is_maximally_positive, is_negative, is_positive,
    DEFAULT_CHECK_TOL,
};
use snlkit_core::convex::{Kind, QuadraticOnAffine, SubgradientSet};
use snlkit_core::fixtures::{
    cyclic3_matrix, helix_min_pairwise_q, helix_point, identity_matrix, line_1m12_direction,
    neg_identity_matrix, scaled_helix_witness, swap3_matrix,
};
use snlkit_core::relations::{LinearRelation, DEFAULT_SWEEP_SAMPLES};
use snlkit_core::{SnlError, SnlSpace, Status, Subspace};

use crate::error::CliError;
use crate::instance::{matrix_rows, InstanceFile, MatrixSpec, ProductSpec, SpaceSpec};
use crate::report::ReportFile;

/// Scan minimum below this (in absolute value) still counts as zero.
const HELIX_SCAN_TOL: f64 = 1e-12;

/// Flag values shared by the instance-driven commands; `None` falls back
/// to the instance file and then to the per-command default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub samples: Option<usize>,
}

impl Overrides {
    fn tol(&self, inst: &InstanceFile, default: f64) -> f64 {
        self.tol.or(inst.tol).unwrap_or(default)
    }

    fn seed(&self, inst: &InstanceFile) -> u64 {
        self.seed.or(inst.seed).unwrap_or(0)
    }

    fn trials(&self, inst: &InstanceFile, default: usize) -> usize {
        self.trials.or(inst.trials).unwrap_or(default)
    }

    fn samples(&self, inst: &InstanceFile, default: usize) -> usize {
        self.samples.or(inst.samples).unwrap_or(default)
    }
}

fn space_and_subspace(inst: &InstanceFile) -> Result<(SnlSpace, Subspace), CliError> {
    let space = inst.build_space()?;
    let sub = inst.build_subspace(&space)?;
    Ok((space, sub))
}

fn relation_from(inst: &InstanceFile) -> Result<(SnlSpace, LinearRelation), CliError> {
    let space = inst.build_space()?;
    if space.product_dim().is_none() {
        return Err(CliError::Validation(SnlError::NotProductSpace));
    }
    let graph = inst.build_subspace(&space)?;
    let relation = LinearRelation::from_graph(graph)?;
    Ok((space, relation))
}

pub fn check_positive(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let check = is_positive(&space, &sub, o.tol(inst, DEFAULT_CHECK_TOL))?;
    Ok(ReportFile::from_check(
        "check-positive",
        &check,
        None,
        "direction",
        ("left", "right"),
    ))
}

pub fn check_negative(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let check = is_negative(&space, &sub, o.tol(inst, DEFAULT_CHECK_TOL))?;
    Ok(ReportFile::from_check(
        "check-negative",
        &check,
        None,
        "direction",
        ("left", "right"),
    ))
}

pub fn check_maximal(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let check = is_maximally_positive(&space, &sub, o.tol(inst, DEFAULT_CHECK_TOL))?;
    Ok(ReportFile::from_check(
        "check-maximal",
        &check,
        None,
        "polar_direction",
        ("left", "right"),
    ))
}

pub fn check_maximal_negative(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let check = is_maximally_negative(&space, &sub, o.tol(inst, DEFAULT_CHECK_TOL))?;
    Ok(ReportFile::from_check(
        "check-maximal-negative",
        &check,
        None,
        "polar_direction",
        ("left", "right"),
    ))
}

pub fn polar(inst: &InstanceFile) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let polar = sub.polar();
    let mut report = ReportFile::new("polar", Status::Pass, "orthogonal-complement", None);
    report
        .number("ambient_dim", space.dim() as f64)
        .number("subspace_dim", sub.dim() as f64)
        .number("polar_dim", polar.dim() as f64);
    push_basis(&mut report, &polar);
    Ok(report)
}

pub fn adjoint(inst: &InstanceFile) -> Result<ReportFile, CliError> {
    let (_, relation) = relation_from(inst)?;
    let adj = relation.adjoint();
    let mut report = ReportFile::new("adjoint", Status::Pass, "negated-polar-graph", None);
    report
        .number("edim", relation.edim() as f64)
        .number("graph_dim", relation.graph().dim() as f64)
        .number("adjoint_dim", adj.graph().dim() as f64);
    push_basis(&mut report, adj.graph());
    Ok(report)
}

pub fn conjugate(inst: &InstanceFile) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let d = inst.shift_or_zero(space.dim())?;
    let bstar = inst.bstar(space.dim())?;
    let f = QuadraticOnAffine::new(&space, &sub, d, Kind::Q)?;
    let value = f.conjugate(&bstar)?;
    let mut report = ReportFile::new("conjugate", Status::Pass, "restricted-form-conjugate", None);
    report
        .number("ambient_dim", space.dim() as f64)
        .number("domain_dim", sub.dim() as f64)
        .ext_real("value", value);
    Ok(report)
}

pub fn subdiff(inst: &InstanceFile, kind: Kind) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let d = inst.shift_or_zero(space.dim())?;
    let b = inst.b(space.dim())?;
    let f = QuadraticOnAffine::new(&space, &sub, d, kind)?;
    let set = f.subdifferential(&b)?;
    let mut report = ReportFile::new("subdiff", Status::Pass, "pairing-plus-polar", None);
    report.number("ambient_dim", space.dim() as f64);
    match set {
        SubgradientSet::Empty => {
            report.number("empty", 1.0);
        }
        SubgradientSet::Affine { anchor, directions } => {
            report
                .number("empty", 0.0)
                .number("directions_dim", directions.dim() as f64)
                .vector("anchor", &anchor);
            push_basis(&mut report, &directions);
        }
    }
    Ok(report)
}

pub fn inf_pc(inst: &InstanceFile) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let d = inst.shift_or_zero(space.dim())?;
    let f = QuadraticOnAffine::new(&space, &sub, d, Kind::P)?;
    let (value, argmin) = f.infimum()?;
    let mut report = ReportFile::new("inf-pc", Status::Pass, "strongly-convex-minimum", None);
    report
        .number("ambient_dim", space.dim() as f64)
        .number("domain_dim", sub.dim() as f64)
        .number("value", value)
        .vector("argmin", &argmin);
    Ok(report)
}

pub fn br_refine(inst: &InstanceFile, eta: f64) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let d = inst.shift_or_zero(space.dim())?;
    let b0 = inst.b(space.dim())?;
    let b0star = inst.bstar(space.dim())?;
    let f = QuadraticOnAffine::new(&space, &sub, d, Kind::P)?;
    let refined = f.refine(&b0, &b0star, eta)?;
    let mut report = ReportFile::new("br-refine", Status::Pass, "exact-pair-from-gap", None);
    report
        .number("eta", eta)
        .number("gap", refined.gap)
        .number("step_norm", refined.step_norm)
        .number("step_bound", refined.step_bound)
        .number("subgradient_residual", refined.subgradient_residual)
        .vector("b1", &refined.b1)
        .vector("b1star", &refined.b1star);
    Ok(report)
}

pub fn ni_check(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (_, relation) = relation_from(inst)?;
    let check = relation.is_type_ni_sampled(
        o.tol(inst, DEFAULT_CHECK_TOL),
        o.samples(inst, DEFAULT_SWEEP_SAMPLES),
        o.seed(inst),
    )?;
    Ok(ReportFile::from_check(
        "ni-check",
        &check,
        Some(o.seed(inst)),
        "dstar",
        ("ystar", "ystarstar"),
    ))
}

pub fn bb_check(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (_, relation) = relation_from(inst)?;
    let check = relation.brezis_browder_sampled(
        o.tol(inst, DEFAULT_CHECK_TOL),
        o.samples(inst, DEFAULT_SWEEP_SAMPLES),
        o.seed(inst),
    )?;
    Ok(ReportFile::from_check(
        "bb-check",
        &check,
        Some(o.seed(inst)),
        "witness",
        ("left", "right"),
    ))
}

pub fn validate_dual(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let space = inst.build_space()?;
    let check = space.validate_dual(o.samples(inst, 100), o.seed(inst))?;
    Ok(ReportFile::from_check(
        "validate-dual",
        &check,
        Some(o.seed(inst)),
        "sample",
        ("b", "bstar"),
    ))
}

pub fn oracle(inst: &InstanceFile, o: &Overrides) -> Result<ReportFile, CliError> {
    let (space, sub) = space_and_subspace(inst)?;
    let tol = o.tol(inst, 1e-9);
    let trials = o.trials(inst, 10_000);
    let seed = o.seed(inst);
    let found = extension_oracle(&space, &sub, trials, seed, tol)?;
    match found {
        Some(direction) => {
            // Re-validate: the extended span must still be positive.
            let mut dirs = sub.basis_vectors();
            dirs.push(direction.clone());
            let extended = Subspace::span(&dirs, sub.rank_tol())?;
            let recheck = is_positive(&space, &extended, tol.max(DEFAULT_CHECK_TOL))?;
            let mut report =
                ReportFile::new("oracle", Status::Fail, "extension-search", Some(seed));
            report
                .number("trials", trials as f64)
                .number("subspace_dim", sub.dim() as f64)
                .number("extended_dim", extended.dim() as f64)
                .number(
                    "extended_min_eig",
                    recheck.evidence_value("min_eig").unwrap_or(f64::NAN),
                )
                .push_witness("extension_direction", &direction);
            Ok(report)
        }
        None => {
            let mut report =
                ReportFile::new("oracle", Status::Inconclusive, "extension-search", Some(seed));
            report
                .number("trials", trials as f64)
                .number("subspace_dim", sub.dim() as f64)
                .number("ambient_dim", space.dim() as f64);
            Ok(report)
        }
    }
}

/// Options for `fixtures`; which ones apply depends on the fixture name.
#[derive(Debug, Clone)]
pub struct FixtureOptions {
    pub dim: Option<usize>,
    pub lambda: Option<f64>,
    pub samples: Option<usize>,
    pub theta_max: Option<f64>,
    pub seed: Option<u64>,
}

/// Output of `fixtures`: matrix fixtures emit instance files, the helix
/// harness emits a report (with the exit code its verdict implies).
pub enum FixtureOutput {
    Instance(String),
    Report(ReportFile),
}

pub fn fixtures(name: &str, opts: &FixtureOptions) -> Result<FixtureOutput, CliError> {
    let instance = |space: SpaceSpec| InstanceFile {
        space,
        ..InstanceFile::default()
    };
    let matrix_space = |m| {
        SpaceSpec::Matrix(MatrixSpec {
            matrix: matrix_rows(&m),
            tol: None,
        })
    };
    match name {
        "identity" => {
            let n = opts.dim.unwrap_or(3);
            Ok(FixtureOutput::Instance(
                instance(matrix_space(identity_matrix(n))).to_json(),
            ))
        }
        "negidentity" => {
            let n = opts.dim.unwrap_or(3);
            Ok(FixtureOutput::Instance(
                instance(matrix_space(neg_identity_matrix(n))).to_json(),
            ))
        }
        "swap3" => Ok(FixtureOutput::Instance(
            instance(matrix_space(swap3_matrix())).to_json(),
        )),
        "cyclic3" => Ok(FixtureOutput::Instance(
            instance(matrix_space(cyclic3_matrix())).to_json(),
        )),
        "product" => {
            let d = opts.dim.unwrap_or(1);
            Ok(FixtureOutput::Instance(
                instance(SpaceSpec::Product(ProductSpec { product: d })).to_json(),
            ))
        }
        "line-1m12" => {
            let mut inst = instance(matrix_space(swap3_matrix()));
            let dir = line_1m12_direction();
            inst.basis = Some(vec![dir.iter().copied().collect()]);
            Ok(FixtureOutput::Instance(inst.to_json()))
        }
        "helix" => Ok(FixtureOutput::Report(helix_report(
            "helix",
            opts.lambda.unwrap_or(1.0),
            opts.samples.unwrap_or(1_000_000),
            opts.theta_max.unwrap_or(20.0),
            opts.seed.unwrap_or(0),
        )?)),
        "scaled-helix" => Ok(FixtureOutput::Report(helix_report(
            "scaled-helix",
            opts.lambda.unwrap_or(0.9),
            opts.samples.unwrap_or(100_000),
            opts.theta_max.unwrap_or(20.0),
            opts.seed.unwrap_or(0),
        )?)),
        other => Err(CliError::UnknownFixture(other.to_string())),
    }
}

/// Pairwise-positivity harness for the helix curve: a randomized scan
/// plus a deterministic violation search, with every reported witness
/// re-validated through the pairing itself.
fn helix_report(
    command: &str,
    lambda: f64,
    samples: usize,
    theta_max: f64,
    seed: u64,
) -> Result<ReportFile, CliError> {
    if theta_max <= 0.0 || theta_max.is_nan() {
        return Err(CliError::command(format!(
            "theta-max must be positive, got {theta_max}"
        )));
    }
    let scan = helix_min_pairwise_q(lambda, samples, theta_max, seed);
    let witness = scaled_helix_witness(lambda, theta_max);
    let space = SnlSpace::new(swap3_matrix(), snlkit_core::space::DEFAULT_SPACE_TOL)?;

    let status = if witness.is_some() || scan.min_q < -HELIX_SCAN_TOL {
        Status::Fail
    } else {
        Status::Pass
    };
    let mut report = ReportFile::new(command, status, "pairwise-positivity", Some(seed));
    report
        .number("lambda", lambda)
        .number("theta_max", theta_max)
        .number("pairs", scan.pairs as f64)
        .number("scan_min_q", scan.min_q)
        .number("scan_theta", scan.theta)
        .number("scan_phi", scan.phi)
        .number("tolerance", HELIX_SCAN_TOL);
    let (theta, phi) = match &witness {
        Some(w) => {
            report.number("witness_q", w.q);
            (w.theta, w.phi)
        }
        None => (scan.theta, scan.phi),
    };
    if status == Status::Fail {
        let a = helix_point(theta, lambda);
        let b = helix_point(phi, lambda);
        let checked = space.q(&(&a - &b))?;
        report
            .number("witness_theta", theta)
            .number("witness_phi", phi)
            .number("witness_q_checked", checked)
            .push_witness("point_a", &a)
            .push_witness("point_b", &b);
    }
    Ok(report)
}

fn push_basis(report: &mut ReportFile, sub: &Subspace) {
    for (i, v) in sub.basis_vectors().iter().enumerate() {
        report.vector(&format!("basis_{i:02}"), v);
    }
}
