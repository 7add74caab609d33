//! Linear operators between Hilbert models, with explicit domains.
//!
//! An [`OperatorModel`] stores its matrix in sample coordinates together
//! with the subspace `D(A)` on which it is trusted and the subspace `D(A*)`
//! on which its adjoint acts. Closed-but-unbounded operators such as `-i d/dx`
//! on `H¹(0,1)` are represented by their discretization plus these two
//! subspaces; the boundary behavior lives in the subspaces.

use faer::Mat;

use crate::error::{FrameError, Result};
use crate::hilbert::{HilbertModel, Subspace, DOMAIN_TOL};
use crate::linalg::{self, c64, creal, CMat, CVec, RCOND};
use crate::seqops::{self, FrameSequence};
use crate::weakframes;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorModel {
    input: HilbertModel,
    output: HilbertModel,
    matrix: CMat,
    domain: Subspace,
    adjoint_domain: Subspace,
    name: String,
}

impl OperatorModel {
    pub fn from_matrix(
        input: &HilbertModel,
        output: &HilbertModel,
        matrix: CMat,
        name: impl Into<String>,
    ) -> Result<Self> {
        output.check_len(matrix.nrows())?;
        input.check_len(matrix.ncols())?;
        Ok(Self {
            input: input.clone(),
            output: output.clone(),
            matrix,
            domain: Subspace::full(input),
            adjoint_domain: Subspace::full(output),
            name: name.into(),
        })
    }

    pub fn identity(model: &HilbertModel) -> Self {
        let d = model.dim();
        Self::from_matrix(model, model, Mat::identity(d, d), "identity").expect("square")
    }

    pub fn zero(input: &HilbertModel, output: &HilbertModel) -> Self {
        Self::from_matrix(input, output, Mat::zeros(output.dim(), input.dim()), "zero").expect("shape")
    }

    pub fn diagonal(model: &HilbertModel, entries: &[f64]) -> Self {
        let c: Vec<c64> = entries.iter().map(|&x| creal(x)).collect();
        Self::diagonal_complex(model, &c)
    }

    pub fn diagonal_complex(model: &HilbertModel, entries: &[c64]) -> Self {
        let d = model.dim();
        assert_eq!(entries.len(), d, "diagonal length must match model dimension");
        let m = Mat::from_fn(d, d, |i, j| if i == j { entries[i] } else { creal(0.0) });
        Self::from_matrix(model, model, m, "diagonal").expect("square")
    }

    pub fn with_domain(mut self, domain: Subspace) -> Result<Self> {
        if domain.ambient() != &self.input {
            return Err(FrameError::InvalidParameter("domain lives in a different model".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn with_adjoint_domain(mut self, domain: Subspace) -> Result<Self> {
        if domain.ambient() != &self.output {
            return Err(FrameError::InvalidParameter("adjoint domain lives in a different model".into()));
        }
        self.adjoint_domain = domain;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn input_model(&self) -> &HilbertModel {
        &self.input
    }

    pub fn output_model(&self) -> &HilbertModel {
        &self.output
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn adjoint_domain(&self) -> &Subspace {
        &self.adjoint_domain
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Plain matrix action, no domain bookkeeping.
    pub fn apply_matrix(&self, f: &CVec) -> CVec {
        &self.matrix * f
    }

    /// Apply to a vector of `D(A)`.
    pub fn apply(&self, f: &CVec) -> Result<CVec> {
        self.input.check_len(f.nrows())?;
        let violation = self.domain.violation(f);
        if violation > DOMAIN_TOL {
            return Err(FrameError::DomainViolation { violation });
        }
        Ok(self.apply_matrix(f))
    }

    /// `A(Pf)` with `P` the projection onto `D(A)`, plus the relative
    /// distance of `f` from the domain.
    pub fn apply_projected(&self, f: &CVec) -> Result<(CVec, f64)> {
        self.input.check_len(f.nrows())?;
        let violation = self.domain.violation(f);
        Ok((self.apply_matrix(&self.domain.project(f)), violation))
    }

    /// Matrix in whitened coordinates, `W_out^{1/2} M W_in^{-1/2}`.
    pub fn whitened(&self) -> CMat {
        let wo = self.output.weights();
        let wi = self.input.weights();
        Mat::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| {
            self.matrix[(i, j)] * (wo[i].sqrt() / wi[j].sqrt())
        })
    }

    /// Whitened matrix composed with an orthonormal basis of `D(A)`.
    pub fn whitened_on_domain(&self) -> CMat {
        let m = self.whitened();
        if self.domain.is_full() {
            m
        } else {
            &m * self.domain.whitened_basis()
        }
    }

    pub fn op_norm(&self) -> Result<f64> {
        linalg::op_norm(self.whitened_on_domain().as_ref())
    }

    /// Hilbert-adjoint `W_in⁻¹ Mᴴ W_out`, acting on the declared `D(A*)`.
    pub fn adjoint(&self) -> OperatorModel {
        let wo = self.output.weights();
        let wi = self.input.weights();
        let m = Mat::from_fn(self.matrix.ncols(), self.matrix.nrows(), |i, j| {
            self.matrix[(j, i)].conj() * (wo[j] / wi[i])
        });
        OperatorModel {
            input: self.output.clone(),
            output: self.input.clone(),
            matrix: m,
            domain: self.adjoint_domain.clone(),
            adjoint_domain: self.domain.clone(),
            name: adjoint_name(&self.name),
        }
    }

    pub fn compose(&self, inner: &OperatorModel) -> Result<OperatorModel> {
        if inner.output != self.input {
            return Err(FrameError::InvalidParameter("composition across different models".into()));
        }
        let m = &self.matrix * &inner.matrix;
        Ok(OperatorModel {
            input: inner.input.clone(),
            output: self.output.clone(),
            matrix: m,
            domain: inner.domain.clone(),
            adjoint_domain: Subspace::full(&self.output),
            name: format!("{}∘{}", self.name, inner.name),
        })
    }
}

fn adjoint_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

/// Moore–Penrose inverse of `A` restricted to its domain.
pub fn pseudo_inverse(op: &OperatorModel) -> Result<OperatorModel> {
    pseudo_inverse_with(op, RCOND)
}

pub fn pseudo_inverse_with(op: &OperatorModel, rcond: f64) -> Result<OperatorModel> {
    let b = op.whitened_on_domain();
    let p = linalg::pinv(b.as_ref(), rcond)?;
    let full = if op.domain.is_full() { p } else { op.domain.whitened_basis() * &p };
    let m = op.output.scale_cols_sqrt(op.input.unwhiten_rows(full.as_ref()).as_ref());
    OperatorModel::from_matrix(&op.output, &op.input, m, format!("{}†", op.name))
}

/// `A♯ : H → H_A`, the adjoint of `A` seen as a bounded map from the graph
/// space. Solves `(I + A*A) x = A*h` on `D(A)`.
pub fn graph_adjoint(op: &OperatorModel) -> Result<OperatorModel> {
    let b = op.whitened_on_domain();
    let r = b.ncols();
    let mut h = b.adjoint() * &b;
    for i in 0..r {
        h[(i, i)] += creal(1.0);
    }
    let rhs: CMat = b.adjoint().to_owned();
    let z = linalg::hpd_solve(h.as_ref(), rhs.as_ref())?;
    let full = if op.domain.is_full() { z } else { op.domain.whitened_basis() * &z };
    let m = op.output.scale_cols_sqrt(op.input.unwhiten_rows(full.as_ref()).as_ref());
    Ok(OperatorModel::from_matrix(&op.output, &op.input, m, format!("{}♯", op.name))?
        .with_adjoint_domain(op.domain.clone())?)
}

/// Finite-difference realizations of first-order differential operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffVariant {
    /// `-i d/dx` on `H¹(a,b)`; adjoint domain `H¹₀(a,b)`.
    MinusIDdxH1,
    /// `-i d/dx` on `H¹₀(a,b)`; adjoint domain `H¹(a,b)`.
    MinusIDdxH10,
    /// `d/dx` on `H¹(a,b)`; adjoint domain `H¹₀(a,b)`.
    DdxH1,
    /// `-i d/dx` on a periodic window, central stencil of the given even order.
    MinusIDdxPeriodic { order: usize },
    /// `d/dx` on a periodic window.
    DdxPeriodic { order: usize },
}

impl DiffVariant {
    pub fn name(&self) -> &'static str {
        match self {
            DiffVariant::MinusIDdxH1 => "minus_i_ddx_H1",
            DiffVariant::MinusIDdxH10 => "minus_i_ddx_H10",
            DiffVariant::DdxH1 => "ddx_H1",
            DiffVariant::MinusIDdxPeriodic { .. } => "minus_i_ddx_periodic",
            DiffVariant::DdxPeriodic { .. } => "ddx_periodic",
        }
    }
}

pub const MIN_GRID_POINTS: usize = 16;

/// Default stencil order for the periodic window model.
pub const PERIODIC_ORDER: usize = 8;

/// Differentiation matrix on a uniform grid model.
///
/// Interval variants need a closed trapezoid grid and use the second-order
/// summation-by-parts stencil: central in the interior, one-sided first
/// order at the endpoints. With trapezoid weights this makes the weighted
/// adjoint of the `H¹` operator coincide with the `H¹₀` operator on
/// functions vanishing at both ends.
pub fn diff_operator(grid: &HilbertModel, variant: DiffVariant) -> Result<OperatorModel> {
    let d = grid.dim();
    if d < MIN_GRID_POINTS {
        return Err(FrameError::GridTooCoarse { points: d, required: MIN_GRID_POINTS });
    }
    let (real, scale) = match variant {
        DiffVariant::MinusIDdxH1 | DiffVariant::MinusIDdxH10 | DiffVariant::MinusIDdxPeriodic { .. } => {
            (sbp_or_periodic(grid, variant)?, c64::new(0.0, -1.0))
        }
        DiffVariant::DdxH1 | DiffVariant::DdxPeriodic { .. } => (sbp_or_periodic(grid, variant)?, creal(1.0)),
    };
    let m = Mat::from_fn(d, d, |i, j| real[(i, j)] * scale);
    let op = OperatorModel::from_matrix(grid, grid, m, variant.name())?;
    let dirichlet = || Subspace::coordinate(grid, &(1..d - 1).collect::<Vec<_>>());
    match variant {
        DiffVariant::MinusIDdxH1 | DiffVariant::DdxH1 => op.with_adjoint_domain(dirichlet()?),
        DiffVariant::MinusIDdxH10 => op.with_domain(dirichlet()?),
        _ => Ok(op),
    }
}

fn sbp_or_periodic(grid: &HilbertModel, variant: DiffVariant) -> Result<CMat> {
    let d = grid.dim();
    let w = grid.weights();
    match variant {
        DiffVariant::MinusIDdxPeriodic { order } | DiffVariant::DdxPeriodic { order } => {
            if !grid.is_uniform() {
                return Err(FrameError::InvalidParameter("periodic stencil needs uniform weights".into()));
            }
            let h = grid.grid().map(|g| g.step).unwrap_or(w[0]);
            let coeffs = central_coefficients(order)?;
            if 2 * coeffs.len() >= d {
                return Err(FrameError::GridTooCoarse { points: d, required: 2 * coeffs.len() + 1 });
            }
            let mut m = Mat::<c64>::zeros(d, d);
            for i in 0..d {
                for (k, c) in coeffs.iter().enumerate() {
                    let k = k + 1;
                    m[(i, (i + k) % d)] += creal(c / h);
                    m[(i, (i + d - k) % d)] -= creal(c / h);
                }
            }
            Ok(m)
        }
        _ => {
            let h = w[1];
            let trapezoid = (1..d - 1).all(|i| (w[i] - h).abs() <= 1e-12 * h)
                && (w[0] - h / 2.0).abs() <= 1e-12 * h
                && (w[d - 1] - h / 2.0).abs() <= 1e-12 * h;
            if !trapezoid {
                return Err(FrameError::InvalidParameter(
                    "interval derivatives need a closed trapezoid grid".into(),
                ));
            }
            let mut m = Mat::<c64>::zeros(d, d);
            m[(0, 0)] = creal(-1.0 / h);
            m[(0, 1)] = creal(1.0 / h);
            for i in 1..d - 1 {
                m[(i, i + 1)] = creal(0.5 / h);
                m[(i, i - 1)] = creal(-0.5 / h);
            }
            m[(d - 1, d - 2)] = creal(-1.0 / h);
            m[(d - 1, d - 1)] = creal(1.0 / h);
            Ok(m)
        }
    }
}

/// Weights `c_k`, `k = 1..=p`, of the order-`2p` central first derivative
/// `f'(x) ≈ Σ c_k (f(x+kh) − f(x−kh)) / h`.
pub fn central_coefficients(order: usize) -> Result<Vec<f64>> {
    if order == 0 || order % 2 == 1 || order > 16 {
        return Err(FrameError::InvalidParameter(format!("stencil order {order} must be even and at most 16")));
    }
    let p = order / 2;
    let fact = |n: usize| (1..=n).map(|x| x as f64).product::<f64>();
    Ok((1..=p)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * fact(p) * fact(p) / (k as f64 * fact(p - k) * fact(p + k))
        })
        .collect())
}

/// The folding multiplier: on cell `k` it copies `α_k f` from the first half
/// cell `[2k, 2k+1)` onto both halves `[2k, 2k+2)`.
pub fn block_multiplier(alphas: &[c64], cells: usize, pts_per_cell: usize) -> Result<OperatorModel> {
    if alphas.len() != cells || cells == 0 || pts_per_cell == 0 {
        return Err(FrameError::InvalidParameter(format!(
            "{} multipliers for {cells} cells of {pts_per_cell} points",
            alphas.len()
        )));
    }
    let model = HilbertModel::interval(0.0, 2.0 * cells as f64, 2 * cells * pts_per_cell)?;
    let d = model.dim();
    let p = pts_per_cell;
    let mut m = Mat::<c64>::zeros(d, d);
    for (k, &a) in alphas.iter().enumerate() {
        for i in 0..p {
            let src = 2 * k * p + i;
            m[(src, src)] = a;
            m[(src + p, src)] = a;
        }
    }
    OperatorModel::from_matrix(&model, &model, m, "block_multiplier")
}

/// Indices of the first half of every cell in a [`block_multiplier`] grid.
pub fn first_half_indices(cells: usize, pts_per_cell: usize) -> Vec<usize> {
    (0..cells)
        .flat_map(|k| (0..pts_per_cell).map(move |i| 2 * k * pts_per_cell + i))
        .collect()
}

/// A nested family of truncated `(A_N, {g_n})` pairs.
pub struct TruncationFamily {
    pub name: String,
    pub sizes: Vec<usize>,
    generator: Box<dyn Fn(usize) -> Result<(OperatorModel, FrameSequence)> + Send + Sync>,
}

impl std::fmt::Debug for TruncationFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncationFamily")
            .field("name", &self.name)
            .field("sizes", &self.sizes)
            .finish()
    }
}

impl TruncationFamily {
    pub fn new(
        name: impl Into<String>,
        sizes: Vec<usize>,
        generator: impl Fn(usize) -> Result<(OperatorModel, FrameSequence)> + Send + Sync + 'static,
    ) -> Result<Self> {
        if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
            return Err(FrameError::InvalidParameter("sizes must be positive and increasing".into()));
        }
        Ok(Self { name: name.into(), sizes, generator: Box::new(generator) })
    }

    /// `A_N = diag(1..N)` with `g_n = n·e_n = A e_n`.
    pub fn parseval_diagonal(sizes: Vec<usize>) -> Result<Self> {
        Self::new("parseval_diagonal", sizes, |n| {
            let model = HilbertModel::l2(n);
            let diag: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let a = OperatorModel::diagonal(&model, &diag).with_name("diag(1..N)");
            let seq = FrameSequence::new(model.clone(), a.matrix().clone(), (1..=n as i64).collect())?;
            Ok((a, seq))
        })
    }

    pub fn generate(&self, n: usize) -> Result<(OperatorModel, FrameSequence)> {
        (self.generator)(n)
    }
}

/// Quantities that can be tracked along a truncation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// `λ_max(S)`.
    BesselBound,
    /// Optimal weak lower constant against `A*` on `D(A*)`.
    WeakAlpha,
    /// `λ_min(S)`.
    FrameAlpha,
    /// `min ‖T f‖² / ‖A f‖²` over `D(A)` for the constructed weak dual
    /// `{t_n}`; tends to zero when `A` is unbounded.
    DualAlpha,
}

impl std::str::FromStr for Probe {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bessel_bound" => Ok(Probe::BesselBound),
            "weak_alpha" => Ok(Probe::WeakAlpha),
            "frame_alpha" => Ok(Probe::FrameAlpha),
            "dual_alpha" => Ok(Probe::DualAlpha),
            other => Err(FrameError::InvalidProbe(other.to_string())),
        }
    }
}

impl Probe {
    pub fn name(&self) -> &'static str {
        match self {
            Probe::BesselBound => "bessel_bound",
            Probe::WeakAlpha => "weak_alpha",
            Probe::FrameAlpha => "frame_alpha",
            Probe::DualAlpha => "dual_alpha",
        }
    }

    fn eval(&self, a: &OperatorModel, seq: &FrameSequence) -> Result<f64> {
        match self {
            Probe::BesselBound => Ok(seqops::frame_bounds(seq)?.beta),
            Probe::FrameAlpha => Ok(seqops::frame_bounds(seq)?.alpha),
            Probe::WeakAlpha => Ok(weakframes::weak_aframe_bound(seq, a)?.alpha),
            Probe::DualAlpha => {
                let dual = weakframes::weak_a_dual(seq, a)?;
                weakframes::dual_lower_ratio(&dual.vectors, a)
            }
        }
    }
}

/// Evaluate `probe` at every size of the family, in order.
pub fn truncation_trajectory(family: &TruncationFamily, probe: &str) -> Result<Vec<(usize, f64)>> {
    let probe: Probe = probe.parse()?;
    family
        .sizes
        .iter()
        .map(|&n| {
            let (a, seq) = family.generate(n)?;
            Ok((n, probe.eval(&a, &seq)?))
        })
        .collect()
}
