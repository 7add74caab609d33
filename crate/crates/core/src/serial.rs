//! JSON interchange for models, sequences, duals and operators.
//!
//! Complex matrices are split into `re` and `im` arrays of columns.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::hilbert::{Grid, HilbertModel, Subspace};
use crate::linalg::{c64, CMat};
use crate::opmodel::OperatorModel;
use crate::seqops::FrameSequence;
use crate::weakframes::{DualSequence, Producer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub label: String,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
}

impl From<&HilbertModel> for ModelJson {
    fn from(m: &HilbertModel) -> Self {
        Self { label: m.label().to_string(), weights: m.weights().to_vec(), grid: m.grid() }
    }
}

impl ModelJson {
    pub fn to_model(&self) -> Result<HilbertModel> {
        let m = HilbertModel::new(self.weights.clone(), self.label.clone())?;
        Ok(match self.grid {
            Some(g) => m.with_grid(g),
            None => m,
        })
    }
}

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMat> for MatrixJson {
    fn from(m: &CMat) -> Self {
        let col = |j: usize, f: fn(&c64) -> f64| (0..m.nrows()).map(|i| f(&m[(i, j)])).collect();
        Self {
            rows: m.nrows(),
            re: (0..m.ncols()).map(|j| col(j, |z| z.re)).collect(),
            im: (0..m.ncols()).map(|j| col(j, |z| z.im)).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.re.len() != self.im.len() {
            return Err(FrameError::InvalidDimension { expected: self.re.len(), got: self.im.len() });
        }
        for (r, i) in self.re.iter().zip(&self.im) {
            if r.len() != self.rows || i.len() != self.rows {
                return Err(FrameError::InvalidDimension { expected: self.rows, got: r.len().min(i.len()) });
            }
        }
        Ok(Mat::from_fn(self.rows, self.re.len(), |i, j| c64::new(self.re[j][i], self.im[j][i])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub model: ModelJson,
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub labels: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(i64, i64)>>,
    pub vectors: MatrixJson,
}

impl From<&FrameSequence> for SequenceJson {
    fn from(s: &FrameSequence) -> Self {
        Self {
            model: s.model().into(),
            dim: s.model().dim(),
            n: s.len(),
            labels: s.labels().to_vec(),
            pairs: s.pairs().map(|p| p.to_vec()),
            vectors: s.vectors().into(),
        }
    }
}

impl SequenceJson {
    pub fn to_sequence(&self) -> Result<FrameSequence> {
        let model = self.model.to_model()?;
        if model.dim() != self.dim {
            return Err(FrameError::InvalidDimension { expected: self.dim, got: model.dim() });
        }
        let v = self.vectors.to_matrix()?;
        if v.ncols() != self.n {
            return Err(FrameError::InvalidDimension { expected: self.n, got: v.ncols() });
        }
        let seq = FrameSequence::new(model, v, self.labels.clone())?;
        match &self.pairs {
            Some(p) => seq.with_pairs(p.clone()),
            None => Ok(seq),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualJson {
    #[serde(flatten)]
    pub sequence: SequenceJson,
    pub producer: Producer,
    /// Absent for user-supplied duals.
    pub certificate_residual: Option<f64>,
    #[serde(default)]
    pub graph_space: bool,
}

impl From<&DualSequence> for DualJson {
    fn from(d: &DualSequence) -> Self {
        Self {
            sequence: (&d.vectors).into(),
            producer: d.producer,
            certificate_residual: d.certificate_residual.is_finite().then_some(d.certificate_residual),
            graph_space: d.graph_space,
        }
    }
}

impl DualJson {
    pub fn to_dual(&self) -> Result<DualSequence> {
        Ok(DualSequence {
            vectors: self.sequence.to_sequence()?,
            producer: self.producer,
            certificate_residual: self.certificate_residual.unwrap_or(f64::NAN),
            graph_space: self.graph_space,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub name: String,
    pub input: ModelJson,
    pub output: ModelJson,
    pub matrix: MatrixJson,
    /// Orthonormal basis of `D(A)`; absent when the domain is everything.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_basis: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint_domain_basis: Option<MatrixJson>,
}

fn basis_json(s: &Subspace) -> Option<MatrixJson> {
    (!s.is_full()).then(|| (&s.basis()).into())
}

fn subspace(model: &HilbertModel, b: &Option<MatrixJson>) -> Result<Subspace> {
    match b {
        None => Ok(Subspace::full(model)),
        Some(m) => Subspace::from_orthonormal(model, m.to_matrix()?),
    }
}

impl From<&OperatorModel> for OperatorJson {
    fn from(a: &OperatorModel) -> Self {
        Self {
            name: a.name().to_string(),
            input: a.input_model().into(),
            output: a.output_model().into(),
            matrix: a.matrix().into(),
            domain_basis: basis_json(a.domain()),
            adjoint_domain_basis: basis_json(a.adjoint_domain()),
        }
    }
}

impl OperatorJson {
    pub fn to_operator(&self) -> Result<OperatorModel> {
        let input = self.input.to_model()?;
        let output = self.output.to_model()?;
        let a = OperatorModel::from_matrix(&input, &output, self.matrix.to_matrix()?, self.name.clone())?;
        let dom = subspace(&input, &self.domain_basis)?;
        let adom = subspace(&output, &self.adjoint_domain_basis)?;
        a.with_domain(dom)?.with_adjoint_domain(adom)
    }
}

pub fn sequence_to_json(s: &FrameSequence) -> Result<String> {
    serde_json::to_string(&SequenceJson::from(s)).map_err(|e| FrameError::Numerical(e.to_string()))
}

pub fn sequence_from_json(text: &str) -> Result<FrameSequence> {
    let j: SequenceJson =
        serde_json::from_str(text).map_err(|e| FrameError::InvalidParameter(format!("sequence JSON: {e}")))?;
    j.to_sequence()
}

pub fn dual_to_json(d: &DualSequence) -> Result<String> {
    serde_json::to_string(&DualJson::from(d)).map_err(|e| FrameError::Numerical(e.to_string()))
}

pub fn dual_from_json(text: &str) -> Result<DualSequence> {
    let j: DualJson =
        serde_json::from_str(text).map_err(|e| FrameError::InvalidParameter(format!("dual JSON: {e}")))?;
    j.to_dual()
}

pub fn operator_to_json(a: &OperatorModel) -> Result<String> {
    serde_json::to_string(&OperatorJson::from(a)).map_err(|e| FrameError::Numerical(e.to_string()))
}

pub fn operator_from_json(text: &str) -> Result<OperatorModel> {
    let j: OperatorJson =
        serde_json::from_str(text).map_err(|e| FrameError::InvalidParameter(format!("operator JSON: {e}")))?;
    j.to_operator()
}
