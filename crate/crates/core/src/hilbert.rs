//! Finite-dimensional Hilbert-space models.
//!
//! A [`HilbertModel`] is `Cⁿ` with a diagonal quadrature weight, so
//! `⟨f, g⟩ = Σ wᵢ fᵢ conj(gᵢ)`. Vectors and matrices are stored in *sample*
//! coordinates; numerical kernels run on whitened copies (`√w ⊙ f`), where
//! the weighted inner product becomes the Euclidean one.

use faer::{Col, Mat, MatRef, Scale};
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg::{c64, creal, CMat, CVec};
use crate::opmodel::OperatorModel;

/// Relative distance to a subspace below which a vector counts as a member.
pub const DOMAIN_TOL: f64 = 1e-8;

/// Uniform sample positions `xᵢ = start + i·step`. A closed grid carries
/// both endpoints of its interval; an open one treats the right endpoint as
/// the periodic image of the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    #[serde(default)]
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertModel {
    dim: usize,
    weights: Vec<f64>,
    label: String,
    grid: Option<Grid>,
}

impl HilbertModel {
    pub fn new(weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(FrameError::InvalidParameter("model dimension must be positive".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(FrameError::InvalidParameter(format!("weight {w} is not strictly positive")));
        }
        Ok(Self {
            dim: weights.len(),
            weights,
            label: label.into(),
            grid: None,
        })
    }

    /// Truncated `ℓ²` with unit weights.
    pub fn l2(dim: usize) -> Self {
        Self {
            dim,
            weights: vec![1.0; dim],
            label: format!("l2 truncation N={dim}"),
            grid: None,
        }
    }

    /// `L²(lo, hi)` sampled at `d` uniform points `lo + i·h`, `h = (hi-lo)/d`,
    /// each carrying weight `h`. The right endpoint is the periodic image of
    /// the left one.
    pub fn interval(lo: f64, hi: f64, d: usize) -> Result<Self> {
        if !(hi > lo) || d == 0 {
            return Err(FrameError::InvalidParameter(format!("bad interval [{lo}, {hi}) with {d} points")));
        }
        let step = (hi - lo) / d as f64;
        Ok(Self {
            dim: d,
            weights: vec![step; d],
            label: format!("L2({lo},{hi}) uniform grid d={d}"),
            grid: Some(Grid { start: lo, step, closed: false }),
        })
    }

    /// `L²(lo, hi)` on the `d + 1` points `lo + i·h`, `h = (hi-lo)/d`, with
    /// trapezoid weights (`h/2` at both endpoints).
    pub fn interval_closed(lo: f64, hi: f64, d: usize) -> Result<Self> {
        if !(hi > lo) || d == 0 {
            return Err(FrameError::InvalidParameter(format!("bad interval [{lo}, {hi}] with {d} cells")));
        }
        let step = (hi - lo) / d as f64;
        let mut weights = vec![step; d + 1];
        weights[0] = step / 2.0;
        weights[d] = step / 2.0;
        Ok(Self {
            dim: d + 1,
            weights,
            label: format!("L2({lo},{hi}) trapezoid grid d={d}"),
            grid: Some(Grid { start: lo, step, closed: true }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> Option<Grid> {
        self.grid
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Sample positions; plain indices when the model carries no grid.
    pub fn points(&self) -> Vec<f64> {
        match self.grid {
            Some(g) => (0..self.dim).map(|i| g.start + g.step * i as f64).collect(),
            None => (0..self.dim).map(|i| i as f64).collect(),
        }
    }

    /// Length of the modeled interval, if gridded.
    pub fn window_length(&self) -> Option<f64> {
        self.grid.map(|g| {
            let cells = if g.closed { self.dim - 1 } else { self.dim };
            g.step * cells as f64
        })
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(FrameError::InvalidDimension { expected: self.dim, got: len });
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    pub fn whiten(&self, f: &CVec) -> CVec {
        Col::from_fn(self.dim, |i| f[i] * self.weights[i].sqrt())
    }

    pub fn unwhiten(&self, f: &CVec) -> CVec {
        Col::from_fn(self.dim, |i| f[i] / self.weights[i].sqrt())
    }

    /// Whiten every column (rows indexed by this model).
    pub fn whiten_rows(&self, m: MatRef<'_, c64>) -> CMat {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * self.weights[i].sqrt())
    }

    pub fn unwhiten_rows(&self, m: MatRef<'_, c64>) -> CMat {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] / self.weights[i].sqrt())
    }

    /// Right-multiply by `W^{-1/2}` (columns indexed by this model).
    pub fn whiten_cols_inverse(&self, m: MatRef<'_, c64>) -> CMat {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] / self.weights[j].sqrt())
    }

    /// Right-multiply by `W^{1/2}`.
    pub fn scale_cols_sqrt(&self, m: MatRef<'_, c64>) -> CMat {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * self.weights[j].sqrt())
    }

    /// `i`-th coordinate vector normalized in this model.
    pub fn unit_vector(&self, i: usize) -> CVec {
        let s = 1.0 / self.weights[i].sqrt();
        Col::from_fn(self.dim, |k| if k == i { creal(s) } else { creal(0.0) })
    }

    pub fn sample(&self, f: impl Fn(f64) -> c64) -> CVec {
        let pts = self.points();
        Col::from_fn(self.dim, |i| f(pts[i]))
    }

    pub fn sample_real(&self, f: impl Fn(f64) -> f64) -> CVec {
        self.sample(|x| creal(f(x)))
    }
}

/// `Σ wᵢ fᵢ conj(gᵢ)`.
pub fn inner(model: &HilbertModel, f: &CVec, g: &CVec) -> Result<c64> {
    model.check_len(f.nrows())?;
    model.check_len(g.nrows())?;
    Ok(inner_unchecked(model, f, g))
}

pub(crate) fn inner_unchecked(model: &HilbertModel, f: &CVec, g: &CVec) -> c64 {
    let mut acc = creal(0.0);
    for i in 0..model.dim {
        acc += f[i] * g[i].conj() * model.weights[i];
    }
    acc
}

pub fn norm(model: &HilbertModel, f: &CVec) -> Result<f64> {
    Ok(inner(model, f, f)?.re.max(0.0).sqrt())
}

/// Graph inner product `⟨f,g⟩ + ⟨Af,Ag⟩` on `D(A)`.
pub fn graph_inner(a: &OperatorModel, f: &CVec, g: &CVec) -> Result<c64> {
    let model = a.input_model();
    model.check_len(f.nrows())?;
    model.check_len(g.nrows())?;
    for v in [f, g] {
        let violation = a.domain().violation(v);
        if violation > DOMAIN_TOL {
            return Err(FrameError::DomainViolation { violation });
        }
    }
    let af = a.apply_matrix(f);
    let ag = a.apply_matrix(g);
    Ok(inner_unchecked(model, f, g) + inner_unchecked(a.output_model(), &af, &ag))
}

pub fn graph_norm(a: &OperatorModel, f: &CVec) -> Result<f64> {
    Ok(graph_inner(a, f, f)?.re.max(0.0).sqrt())
}

/// A subspace of a model, carried as a weighted-orthonormal basis.
/// `basis == None` encodes the whole space without materializing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: HilbertModel,
    basis: Option<CMat>,
}

impl Subspace {
    pub fn full(model: &HilbertModel) -> Self {
        Self { ambient: model.clone(), basis: None }
    }

    /// Wrap a basis that is already orthonormal for the model inner product.
    pub fn from_orthonormal(model: &HilbertModel, basis: CMat) -> Result<Self> {
        model.check_len(basis.nrows())?;
        let wb = model.whiten_rows(basis.as_ref());
        let gram = wb.adjoint() * &wb;
        let r = basis.ncols();
        let defect = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| (gram[(i, j)] - if i == j { creal(1.0) } else { creal(0.0) }).norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(FrameError::InvalidParameter(format!("basis not orthonormal (defect {defect:.2e})")));
        }
        if r == model.dim() {
            return Ok(Self::full(model));
        }
        Ok(Self { ambient: model.clone(), basis: Some(basis) })
    }

    /// Span of the listed coordinate axes.
    pub fn coordinate(model: &HilbertModel, axes: &[usize]) -> Result<Self> {
        if axes.len() == model.dim() {
            return Ok(Self::full(model));
        }
        let cols: Vec<CVec> = axes
            .iter()
            .map(|&i| {
                if i >= model.dim() {
                    Err(FrameError::InvalidIndex { index: i, len: model.dim() })
                } else {
                    Ok(model.unit_vector(i))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            ambient: model.clone(),
            basis: Some(crate::linalg::mat_from_cols(model.dim(), &cols)),
        })
    }

    pub fn ambient(&self) -> &HilbertModel {
        &self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.basis.is_none()
    }

    pub fn dim(&self) -> usize {
        self.basis.as_ref().map_or(self.ambient.dim(), |b| b.ncols())
    }

    /// Basis in sample coordinates (identity scaled by `W^{-1/2}` when full).
    pub fn basis(&self) -> CMat {
        match &self.basis {
            Some(b) => b.clone(),
            None => {
                let d = self.ambient.dim();
                let w = self.ambient.weights();
                Mat::from_fn(d, d, |i, j| if i == j { creal(1.0 / w[i].sqrt()) } else { creal(0.0) })
            }
        }
    }

    /// Euclidean-orthonormal basis in whitened coordinates.
    pub fn whitened_basis(&self) -> CMat {
        match &self.basis {
            Some(b) => self.ambient.whiten_rows(b.as_ref()),
            None => Mat::identity(self.ambient.dim(), self.ambient.dim()),
        }
    }

    pub fn project(&self, f: &CVec) -> CVec {
        match &self.basis {
            None => f.clone(),
            Some(b) => {
                let q = self.ambient.whiten_rows(b.as_ref());
                let wf = self.ambient.whiten(f);
                let coeff = q.adjoint() * &wf;
                self.ambient.unwhiten(&(&q * &coeff))
            }
        }
    }

    /// Column-wise orthogonal projection.
    pub fn project_cols(&self, m: &CMat) -> CMat {
        match &self.basis {
            None => m.clone(),
            Some(b) => {
                let q = self.ambient.whiten_rows(b.as_ref());
                let wm = self.ambient.whiten_rows(m.as_ref());
                self.ambient.unwhiten_rows((&q * (q.adjoint() * &wm)).as_ref())
            }
        }
    }

    /// `‖f − Pf‖ / ‖f‖` (zero for the zero vector).
    pub fn violation(&self, f: &CVec) -> f64 {
        if self.basis.is_none() {
            return 0.0;
        }
        let nf = inner_unchecked(&self.ambient, f, f).re.sqrt();
        if nf == 0.0 {
            return 0.0;
        }
        let r = f - self.project(f);
        inner_unchecked(&self.ambient, &r, &r).re.sqrt() / nf
    }

    pub fn contains(&self, f: &CVec) -> bool {
        self.violation(f) <= DOMAIN_TOL
    }
}

/// Gram–Schmidt (with one re-orthogonalization pass) in the model inner
/// product. Columns whose remainder falls below `1e-10` of their original
/// norm are dropped.
pub fn orthonormalize(vectors: MatRef<'_, c64>, model: &HilbertModel) -> Result<Subspace> {
    model.check_len(vectors.nrows())?;
    let w = model.whiten_rows(vectors);
    let mut kept: Vec<CVec> = Vec::new();
    for j in 0..w.ncols() {
        let mut v: CVec = w.col(j).to_owned();
        let original = v.norm_l2();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &kept {
                let c = q.adjoint() * &v;
                v -= q * Scale(c);
            }
        }
        let n = v.norm_l2();
        if n < 1e-10 * original {
            continue;
        }
        v *= Scale(creal(1.0 / n));
        kept.push(v);
    }
    if kept.is_empty() {
        return Err(FrameError::EmptySpan);
    }
    let q = crate::linalg::mat_from_cols(model.dim(), &kept);
    let basis = model.unwhiten_rows(q.as_ref());
    Ok(Subspace { ambient: model.clone(), basis: Some(basis) })
}
