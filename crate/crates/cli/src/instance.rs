//! On-disk problem description: a space, an optional subspace, and optional
//! query data.
//!
//! The same file format feeds every command; each command reads the fields it
//! needs and rejects files that are missing them, naming the absent field.

use serde::{Deserialize, Serialize};
use snlkit_core::nalgebra::{DMatrix, DVector};
use snlkit_core::{SnlSpace, Subspace};

use crate::error::CliError;

/// How to build the pairing: either an explicit symmetric matrix or the
/// block-swap product structure of a given half-dimension.
///
/// Exactly one of the two forms must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Matrix(MatrixSpec),
    Product(ProductSpec),
}

/// Explicit pairing matrix, row-major, with an optional construction
/// tolerance (defaults to the library default when absent).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Product space of half-dimension `product` (ambient dimension doubles).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub product: usize,
}

/// A complete problem instance as stored on disk.
///
/// `basis` rows span the subspace under test; `shift` translates it into an
/// affine set where a command calls for one. `b`, `bstar`, and `dstar` are
/// query points. The scalar fields are per-instance defaults that
/// command-line flags override.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bstar: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dstar: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Default for SpaceSpec {
    fn default() -> Self {
        SpaceSpec::Product(ProductSpec { product: 1 })
    }
}

impl InstanceFile {
    /// Read and parse an instance from `path`.
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let inst: InstanceFile = serde_json::from_str(&text)?;
        Ok(inst)
    }

    /// Serialize with stable formatting (pretty, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Construct the pairing space described by `space`.
    pub fn build_space(&self) -> Result<SnlSpace, CliError> {
        match &self.space {
            SpaceSpec::Matrix(spec) => {
                let rows = spec.matrix.len();
                if rows == 0 {
                    return Err(CliError::command("space matrix must not be empty"));
                }
                let cols = spec.matrix[0].len();
                if spec.matrix.iter().any(|r| r.len() != cols) {
                    return Err(CliError::command(
                        "space matrix rows must all have the same length",
                    ));
                }
                let m = DMatrix::from_fn(rows, cols, |i, j| spec.matrix[i][j]);
                let tol = spec.tol.unwrap_or(snlkit_core::space::DEFAULT_SPACE_TOL);
                Ok(SnlSpace::new(m, tol)?)
            }
            SpaceSpec::Product(spec) => Ok(SnlSpace::product(spec.product)?),
        }
    }

    /// Span the subspace from the `basis` rows; errors if the field is absent.
    pub fn build_subspace(&self, space: &SnlSpace) -> Result<Subspace, CliError> {
        let rows = self
            .basis
            .as_ref()
            .ok_or_else(|| CliError::command("this command requires a `basis` field"))?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != space.dim() {
                return Err(CliError::command(format!(
                    "basis row {i} has length {}, expected {}",
                    row.len(),
                    space.dim()
                )));
            }
        }
        let dirs: Vec<DVector<f64>> = rows
            .iter()
            .map(|r| DVector::from_column_slice(r))
            .collect();
        Ok(Subspace::span(
            &dirs,
            snlkit_core::subspace::DEFAULT_RANK_TOL,
        )?)
    }

    /// The affine shift, defaulting to the origin when absent.
    pub fn shift_or_zero(&self, dim: usize) -> Result<DVector<f64>, CliError> {
        match &self.shift {
            Some(v) => Ok(named_vector("shift", v, dim)?),
            None => Ok(DVector::zeros(dim)),
        }
    }

    /// Required query point `b`.
    pub fn b(&self, dim: usize) -> Result<DVector<f64>, CliError> {
        require_vector("b", self.b.as_ref(), dim)
    }

    /// Required query point `bstar`.
    pub fn bstar(&self, dim: usize) -> Result<DVector<f64>, CliError> {
        require_vector("bstar", self.bstar.as_ref(), dim)
    }
}

fn require_vector(
    name: &str,
    field: Option<&Vec<f64>>,
    dim: usize,
) -> Result<DVector<f64>, CliError> {
    let v = field
        .ok_or_else(|| CliError::command(format!("this command requires a `{name}` field")))?;
    named_vector(name, v, dim)
}

fn named_vector(name: &str, v: &[f64], dim: usize) -> Result<DVector<f64>, CliError> {
    if v.len() != dim {
        return Err(CliError::command(format!(
            "field `{name}` has length {}, expected {dim}",
            v.len()
        )));
    }
    Ok(DVector::from_column_slice(v))
}

/// Render a matrix as row-major nested lists for instance files.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
