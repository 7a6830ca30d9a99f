//! Check outcomes with enough evidence to re-derive the verdict.

use nalgebra::DVector;

/// Verdict of a certified check. `Inconclusive` is reserved for sampling
/// procedures that exhausted their budget without deciding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

/// Concrete object certifying a `Fail`: a vector violating the checked
/// inequality, or a pair when the violation lives in a product pairing.
#[derive(Debug, Clone)]
pub enum Witness {
    Vector(DVector<f64>),
    Pair(DVector<f64>, DVector<f64>),
}

/// Outcome of a check: the verdict, the identifier of the decision rule
/// applied (see the rule catalog in the crate docs), named scalar
/// evidence, an optional witness, and the tolerance the verdict used.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub status: Status,
    pub criterion: String,
    pub evidence: Vec<(String, f64)>,
    pub witness: Option<Witness>,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn new(status: Status, criterion: &str, tolerance: f64) -> Self {
        CheckReport {
            status,
            criterion: criterion.to_owned(),
            evidence: Vec::new(),
            witness: None,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.evidence.push((key.to_owned(), value));
        self
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn evidence_value(&self, key: &str) -> Option<f64> {
        self.evidence
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
    }
}

/// Extended real line with explicit infinities. Solvers only ever
/// produce finite floats; unboundedness is carried by the variants, so
/// IEEE infinities never enter the arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::Finite(v)
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}
