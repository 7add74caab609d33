//! Thin layer over `faer` for the dense complex kernels the frame
//! machinery needs: thin SVD, Moore–Penrose pseudo-inverse, Hermitian
//! eigendecomposition, range bases, and the reduced lower-bound pencil.
//!
//! Everything here works in *Euclidean* coordinates. Callers whiten
//! weighted vectors first (see [`crate::hilbert::HilbertModel::whiten`]).

use faer::linalg::solvers::Solve;
use faer::{Col, Mat, MatRef, Scale, Side};

use crate::error::{FrameError, Result};

pub use faer::c64;

pub type CMat = Mat<c64>;
pub type CVec = Col<c64>;

/// Singular values at or below `RCOND · σ_max` are treated as zero.
pub const RCOND: f64 = 1e-10;

/// Relative leakage of an operator into the kernel of the analysis side
/// above which the lower pencil bound is declared zero.
pub const LEAK_TOL: f64 = 1e-8;

pub fn czero() -> c64 {
    c64::new(0.0, 0.0)
}

pub fn creal(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// Thin SVD `a = U diag(s) Vᴴ`, singular values non-increasing.
pub struct ThinSvd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl ThinSvd {
    pub fn new(a: MatRef<'_, c64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            let k = 0;
            return Ok(Self {
                u: Mat::zeros(a.nrows(), k),
                s: Vec::new(),
                v: Mat::zeros(a.ncols(), k),
            });
        }
        let svd = a
            .thin_svd()
            .map_err(|e| FrameError::Numerical(format!("svd: {e:?}")))?;
        let s = svd.S().column_vector().iter().map(|x| x.re).collect();
        Ok(Self {
            u: svd.U().to_owned(),
            s,
            v: svd.V().to_owned(),
        })
    }

    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rcond · σ_max`.
    pub fn rank(&self, rcond: f64) -> usize {
        let cut = rcond * self.sigma_max();
        self.s.iter().take_while(|&&x| x > cut && x > 0.0).count()
    }
}

/// Moore–Penrose pseudo-inverse with relative singular-value cutoff.
pub fn pinv(a: MatRef<'_, c64>, rcond: f64) -> Result<CMat> {
    let svd = ThinSvd::new(a)?;
    let r = svd.rank(rcond);
    let (m, n) = (a.nrows(), a.ncols());
    if r == 0 {
        return Ok(Mat::zeros(n, m));
    }
    let vs = Mat::from_fn(n, r, |i, j| svd.v[(i, j)] / svd.s[j]);
    Ok(&vs * svd.u.get(.., 0..r).adjoint())
}

/// Eigendecomposition of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let h = hermitian_part(a);
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| FrameError::Numerical(format!("eigen: {e:?}")))?;
    let vals = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    hermitian_part(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| FrameError::Numerical(format!("eigen: {e:?}")))
}

fn hermitian_part(a: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Orthonormal basis (columns) of the range of `a`.
pub fn range_basis(a: MatRef<'_, c64>, rcond: f64) -> Result<CMat> {
    let svd = ThinSvd::new(a)?;
    let r = svd.rank(rcond);
    Ok(svd.u.get(.., 0..r).to_owned())
}

/// Solve `h x = b` for Hermitian positive definite `h`.
pub fn hpd_solve(h: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Result<CMat> {
    let llt = hermitian_part(h)
        .llt(Side::Lower)
        .map_err(|e| FrameError::Numerical(format!("cholesky: {e:?}")))?;
    Ok(llt.solve(b))
}

/// Cholesky factor `L` of a Hermitian positive definite matrix.
pub fn cholesky_lower(h: MatRef<'_, c64>) -> Result<CMat> {
    let llt = hermitian_part(h)
        .llt(Side::Lower)
        .map_err(|e| FrameError::Numerical(format!("cholesky: {e:?}")))?;
    Ok(llt.L().to_owned())
}

pub fn fro_norm(a: MatRef<'_, c64>) -> f64 {
    a.norm_l2()
}

/// Spectral norm.
pub fn op_norm(a: MatRef<'_, c64>) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let s = a
        .singular_values()
        .map_err(|e| FrameError::Numerical(format!("svd: {e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

pub fn col_norm(v: &CVec) -> f64 {
    v.norm_l2()
}

pub fn col_of(a: MatRef<'_, c64>, j: usize) -> CVec {
    a.col(j).to_owned()
}

pub fn mat_from_cols(rows: usize, cols: &[CVec]) -> CMat {
    Mat::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Outcome of the reduced lower-bound pencil.
#[derive(Debug, Clone)]
pub enum PencilBound {
    /// `G` vanishes: the lower inequality is void.
    Degenerate,
    /// `G` does not vanish on `ker F`, so no positive constant works.
    Leaking { leakage: f64 },
    /// Optimal constant together with a unit minimizer.
    Bound { alpha: f64, minimizer: CVec },
}

impl PencilBound {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            PencilBound::Degenerate => None,
            PencilBound::Leaking { .. } => Some(0.0),
            PencilBound::Bound { alpha, .. } => Some(*alpha),
        }
    }
}

/// Largest `α` with `‖F y‖² ≥ α ‖G y‖²` for every `y`.
///
/// The infimum of `‖Fy‖²/‖Gy‖²` ranges over all `y` with `Gy ≠ 0`, so
/// components in `ker G` are free to lower the numerator. The computation
/// splits the space as `R(Fᴴ) ⊕ ker F`: if `G` is nonzero on `ker F` the
/// bound is zero, otherwise it is `1/σ_max(G V_F Σ_F⁻¹)²` on `R(Fᴴ)`.
pub fn lower_pencil_bound(f: MatRef<'_, c64>, g: MatRef<'_, c64>) -> Result<PencilBound> {
    assert_eq!(f.ncols(), g.ncols(), "pencil sides act on different spaces");
    let g_norm = fro_norm(g);
    if g_norm == 0.0 || g.nrows() == 0 {
        return Ok(PencilBound::Degenerate);
    }
    let fsvd = ThinSvd::new(f)?;
    let s = fsvd.rank(RCOND);
    let z = fsvd.v.get(.., 0..s);
    let gz = g * z;
    let leak = g - &gz * z.adjoint();
    let leakage = fro_norm(leak.as_ref()) / g_norm;
    if s == 0 || leakage > LEAK_TOL {
        return Ok(PencilBound::Leaking { leakage });
    }
    let b = Mat::from_fn(gz.nrows(), s, |i, j| gz[(i, j)] / fsvd.s[j]);
    let bsvd = ThinSvd::new(b.as_ref())?;
    let smax = bsvd.sigma_max();
    if smax == 0.0 {
        return Ok(PencilBound::Degenerate);
    }
    let v1 = bsvd.v.col(0);
    let y = Col::from_fn(s, |j| v1[j] / fsvd.s[j]);
    let mut x = z * &y;
    let nx = x.norm_l2();
    x *= Scale(creal(1.0 / nx));
    Ok(PencilBound::Bound {
        alpha: 1.0 / (smax * smax),
        minimizer: x,
    })
}
