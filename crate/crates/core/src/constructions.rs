//! Named systems and operators: exponentials on `(0,1)`, Gabor, wavelet and
//! translation systems on a periodic window, the Paley–Wiener quarter band,
//! the difference sequence and Riesz-basis multipliers.

use std::f64::consts::PI;

use faer::{Col, Mat};
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::hilbert::{HilbertModel, Subspace};
use crate::linalg::{self, c64, creal, CMat, CVec};
use crate::opmodel::{block_multiplier, diff_operator, DiffVariant, OperatorModel, PERIODIC_ORDER};
use crate::sampling::random_matrix;
use crate::seqops::FrameSequence;

/// `-r..=r`.
pub fn range_labels(r: usize) -> Vec<i64> {
    let r = r as i64;
    (-r..=r).collect()
}

/// `count` consecutive labels centred at zero, `[-count/2, count - count/2)`.
pub fn symmetric_labels(count: usize) -> Vec<i64> {
    let lo = -((count / 2) as i64);
    (lo..lo + count as i64).collect()
}

/// Labels of a full exponential system on a grid of `cells` intervals.
pub fn full_exponential_labels(b: f64, cells: usize) -> Vec<i64> {
    symmetric_labels((cells as f64 / b).round() as usize)
}

/// Columns `e_{nb}(x) = e^{2πinbx}`, or `2πnb·e_{nb}` when `scaled`.
pub fn exponential_system(b: f64, labels: &[i64], grid: &HilbertModel, scaled: bool) -> Result<FrameSequence> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(FrameError::InvalidParameter(format!("b = {b} outside (0, 1]")));
    }
    if labels.is_empty() {
        return Err(FrameError::InvalidParameter("empty label range".into()));
    }
    let x = grid.points();
    let m = Mat::from_fn(grid.dim(), labels.len(), |i, j| {
        let w = 2.0 * PI * labels[j] as f64 * b;
        let e = c64::cis(w * x[i]);
        if scaled {
            e * w
        } else {
            e
        }
    });
    FrameSequence::new(grid.clone(), m, labels.to_vec())
}

/// `A = -i d/dx` with domain `H¹(0,1)` on a closed grid with `cells`
/// intervals; `D(A*)` is the Dirichlet subspace.
pub fn exm1_operator(cells: usize) -> Result<OperatorModel> {
    diff_operator(&HilbertModel::interval_closed(0.0, 1.0, cells)?, DiffVariant::MinusIDdxH1)
}

/// The pair `({2πnb·e_{nb}}, {b·e_{nb}})`: the image of the exponential frame
/// under `A` and the canonical dual of that frame.
pub fn exm1_pair(b: f64, labels: &[i64], a: &OperatorModel) -> Result<(FrameSequence, FrameSequence)> {
    let grid = a.output_model();
    let g = exponential_system(b, labels, grid, true)?;
    let e = exponential_system(b, labels, grid, false)?;
    let t = e.scaled(&vec![creal(b); labels.len()])?;
    Ok((g, t))
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (4.0 - 1.0 / (x * (1.0 - x))).exp()
    }
}

fn sample_cols(grid: &HilbertModel, fs: &[&dyn Fn(f64) -> c64]) -> CMat {
    let cols: Vec<CVec> = fs.iter().map(|f| grid.sample(f)).collect();
    linalg::mat_from_cols(grid.dim(), &cols)
}

/// Smooth members of `H¹₀(0,1)`, one per column.
pub fn dirichlet_probes(grid: &HilbertModel) -> CMat {
    sample_cols(
        grid,
        &[
            &|x| creal(bump(x)),
            &|x| creal(bump(x) * (2.0 * PI * x).cos()),
            &|x| creal(x.powi(4) * (1.0 - x).powi(4) * x.exp()),
            &|x| creal((PI * x).sin().powi(4)),
            &|x| creal((PI * x).sin().powi(2) * x.exp()),
        ],
    )
}

/// Smooth members of `H¹(0,1)` without boundary conditions.
pub fn interval_probes(grid: &HilbertModel) -> CMat {
    sample_cols(
        grid,
        &[&|x| creal(x), &|x| creal(x * x), &|x| creal(x.exp()), &|x| c64::new((3.0 * x).cos(), x.sin())],
    )
}

/// Gaussian-windowed smooth functions on a window centred at 0.
pub fn window_probes(grid: &HilbertModel) -> CMat {
    sample_cols(
        grid,
        &[
            &|x| creal((-PI * x * x / 4.0).exp()),
            &|x| creal((-PI * x * x / 4.0).exp() * x.cos()),
            &|x| c64::cis(0.5 * x) * (-PI * (x - 1.0).powi(2) / 2.0).exp(),
            &|x| creal((-PI * x * x / 8.0).exp() * (1.0 + x).sin()),
        ],
    )
}

/// `A = -i d/dx` on a periodic window, self-adjoint in the model.
pub fn exm2_operator(grid: &HilbertModel) -> Result<OperatorModel> {
    diff_operator(grid, DiffVariant::MinusIDdxPeriodic { order: PERIODIC_ORDER })
}

/// Lattice parameters of `{M_{bn} T_{am} g}` over the listed `m` and `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaborSpec {
    pub a: f64,
    pub b: f64,
    pub translations: Vec<i64>,
    pub modulations: Vec<i64>,
}

impl GaborSpec {
    pub fn symmetric(a: f64, b: f64, m_range: usize, n_range: usize) -> Self {
        Self { a, b, translations: range_labels(m_range), modulations: range_labels(n_range) }
    }

    pub fn len(&self) -> usize {
        self.translations.len() * self.modulations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn periodic_grid(grid: &HilbertModel) -> Result<(f64, f64, f64)> {
    match grid.grid() {
        Some(g) if !g.closed && grid.is_uniform() => {
            let len = g.step * grid.dim() as f64;
            Ok((g.start, g.step, len))
        }
        _ => Err(FrameError::GridMismatch("a uniform periodic window grid is required".into())),
    }
}

fn integer_ratio(x: f64, what: &str) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() > 1e-9 * x.abs().max(1.0) {
        return Err(FrameError::GridMismatch(format!("{what} = {x} is not an integer")));
    }
    Ok(r as i64)
}

fn shift_periodic(v: &CVec, s: i64) -> CVec {
    let d = v.nrows() as i64;
    Col::from_fn(v.nrows(), |j| v[(j as i64 - s).rem_euclid(d) as usize])
}

fn lattice_steps(spec: &GaborSpec, grid: &HilbertModel) -> Result<(i64, Vec<f64>)> {
    if !(spec.a > 0.0 && spec.b > 0.0) {
        return Err(FrameError::InvalidParameter("lattice constants must be positive".into()));
    }
    if spec.is_empty() {
        return Err(FrameError::InvalidParameter("empty Gabor index range".into()));
    }
    let (_, h, len) = periodic_grid(grid)?;
    let step = integer_ratio(spec.a / h, "a / h")?;
    integer_ratio(spec.b * len, "b · window length")?;
    Ok((step, grid.points()))
}

fn gabor_columns(
    window: &CVec,
    spec: &GaborSpec,
    grid: &HilbertModel,
    column: impl Fn(&CVec, i64, usize, f64) -> c64,
) -> Result<FrameSequence> {
    grid.check_len(window.nrows())?;
    let (step, x) = lattice_steps(spec, grid)?;
    let d = grid.dim();
    let mut m = Mat::<c64>::zeros(d, spec.len());
    let mut pairs = Vec::with_capacity(spec.len());
    let mut k = 0;
    for &tm in &spec.translations {
        let shifted = shift_periodic(window, step * tm);
        for &mn in &spec.modulations {
            let freq = spec.b * mn as f64;
            for i in 0..d {
                m[(i, k)] = c64::cis(2.0 * PI * freq * x[i]) * column(&shifted, mn, i, freq);
            }
            pairs.push((tm, mn));
            k += 1;
        }
    }
    FrameSequence::new(grid.clone(), m, (0..k as i64).collect())?.with_pairs(pairs)
}

/// `{M_{bn} T_{am} g}` with periodic translation on the window.
///
/// ```
/// use opframe::{constructions, seqops, HilbertModel};
///
/// let grid = HilbertModel::interval(-4.0, 4.0, 64)?;
/// let g = grid.sample_real(constructions::gaussian);
/// let spec = constructions::GaborSpec::symmetric(0.5, 0.5, 8, 8);
/// let seq = constructions::gabor_system(&g, &spec, &grid)?;
/// let bounds = seqops::frame_bounds(&seq)?;
/// assert!(bounds.alpha > 0.0 && bounds.beta >= bounds.alpha);
/// # Ok::<(), opframe::FrameError>(())
/// ```
pub fn gabor_system(window: &CVec, spec: &GaborSpec, grid: &HilbertModel) -> Result<FrameSequence> {
    gabor_columns(window, spec, grid, |g, _, i, _| g[i])
}

/// `{2πbn·M_{bn}T_{am}g − i·M_{bn}T_{am}g′}`, the image of the Gabor system
/// under `-i d/dx`.
pub fn gabor_derivative_system(
    window: &CVec,
    window_derivative: &CVec,
    spec: &GaborSpec,
    grid: &HilbertModel,
) -> Result<FrameSequence> {
    grid.check_len(window.nrows())?;
    let (step, _) = lattice_steps(spec, grid)?;
    let di = |m: i64| shift_periodic(window_derivative, step * m);
    let shifted: Vec<CVec> = spec.translations.iter().map(|&m| di(m)).collect();
    let index = |tm: i64| spec.translations.iter().position(|&t| t == tm).unwrap();
    let plain = gabor_system(window, spec, grid)?;
    let x = grid.points();
    let mut m = plain.vectors().clone();
    for (k, &(tm, mn)) in plain.pairs().unwrap().iter().enumerate() {
        let freq = spec.b * mn as f64;
        let gp = &shifted[index(tm)];
        for i in 0..grid.dim() {
            m[(i, k)] = m[(i, k)] * (2.0 * PI * freq) - c64::new(0.0, 1.0) * c64::cis(2.0 * PI * freq * x[i]) * gp[i];
        }
    }
    plain.with_vectors(grid.clone(), m)
}

/// `{T_{cn} φ}` over the listed shifts.
pub fn translation_system(window: &CVec, c: f64, shifts: &[i64], grid: &HilbertModel) -> Result<FrameSequence> {
    let (_, _, len) = periodic_grid(grid)?;
    let spec = GaborSpec { a: c, b: 1.0 / len, translations: shifts.to_vec(), modulations: vec![0] };
    gabor_system(window, &spec, grid)
}

/// Scales `m` and shifts `n` of `{a^{−m/2} φ(a^{−m}x − nb)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub a: f64,
    pub b: f64,
    pub scales: Vec<i64>,
    pub shifts: Vec<i64>,
}

impl WaveletSpec {
    pub fn symmetric(a: f64, b: f64, m_range: usize, n_range: usize) -> Self {
        Self { a, b, scales: range_labels(m_range), shifts: range_labels(n_range) }
    }
}

fn wavelet_columns(
    f: &dyn Fn(f64) -> f64,
    support: (f64, f64),
    spec: &WaveletSpec,
    grid: &HilbertModel,
    power: f64,
) -> Result<FrameSequence> {
    if !(spec.a > 1.0 && spec.b > 0.0) {
        return Err(FrameError::InvalidParameter("wavelet needs a > 1 and b > 0".into()));
    }
    let (lo, _, len) = periodic_grid(grid)?;
    let hi = lo + len;
    let x = grid.points();
    let n = spec.scales.len() * spec.shifts.len();
    if n == 0 {
        return Err(FrameError::InvalidParameter("empty wavelet index range".into()));
    }
    let mut m = Mat::<c64>::zeros(grid.dim(), n);
    let mut pairs = Vec::with_capacity(n);
    let mut k = 0;
    for &sm in &spec.scales {
        let s = spec.a.powi(sm as i32);
        for &sn in &spec.shifts {
            let (l, r) = (s * (support.0 + sn as f64 * spec.b), s * (support.1 + sn as f64 * spec.b));
            if l < lo || r > hi {
                return Err(FrameError::WindowOverflow(format!(
                    "atom (m={sm}, n={sn}) occupies [{l}, {r}] outside [{lo}, {hi})"
                )));
            }
            let amp = s.powf(-power);
            for i in 0..grid.dim() {
                m[(i, k)] = creal(amp * f(x[i] / s - sn as f64 * spec.b));
            }
            pairs.push((sm, sn));
            k += 1;
        }
    }
    FrameSequence::new(grid.clone(), m, (0..k as i64).collect())?.with_pairs(pairs)
}

/// `{a^{−m/2} φ(a^{−m}x − nb)}`; every atom must stay inside the window.
pub fn wavelet_system(
    mother: &dyn Fn(f64) -> f64,
    support: (f64, f64),
    spec: &WaveletSpec,
    grid: &HilbertModel,
) -> Result<FrameSequence> {
    wavelet_columns(mother, support, spec, grid, 0.5)
}

/// `{a^{−3m/2} φ′(a^{−m}x − nb)}`, the image of the wavelet system under `d/dx`.
pub fn wavelet_derivative_system(
    mother_derivative: &dyn Fn(f64) -> f64,
    support: (f64, f64),
    spec: &WaveletSpec,
    grid: &HilbertModel,
) -> Result<FrameSequence> {
    wavelet_columns(mother_derivative, support, spec, grid, 1.5)
}

pub fn gaussian(x: f64) -> f64 {
    (-PI * x * x).exp()
}

pub fn gaussian_derivative(x: f64) -> f64 {
    -2.0 * PI * x * gaussian(x)
}

/// Hat function smoothed by a unit box: the quadratic B-spline centred at 0,
/// supported on `[-3/2, 3/2]`.
pub fn smoothed_hat(x: f64) -> f64 {
    let t = x + 1.5;
    if t <= 0.0 || t >= 3.0 {
        0.0
    } else if t < 1.0 {
        t * t / 2.0
    } else if t < 2.0 {
        (-2.0 * t * t + 6.0 * t - 3.0) / 2.0
    } else {
        (3.0 - t) * (3.0 - t) / 2.0
    }
}

pub fn smoothed_hat_derivative(x: f64) -> f64 {
    let t = x + 1.5;
    if t <= 0.0 || t >= 3.0 {
        0.0
    } else if t < 1.0 {
        t
    } else if t < 2.0 {
        3.0 - 2.0 * t
    } else {
        t - 3.0
    }
}

pub const SMOOTHED_HAT_SUPPORT: (f64, f64) = (-1.5, 1.5);

/// Window of the not-a-frame Gabor example: a profile on `[0, 2)`, zero elsewhere.
pub fn cell_window(profile: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    move |x| if (0.0..2.0).contains(&x) { profile(x) } else { 0.0 }
}

/// `1 + cos(πx)/2` on `[0, 2)`.
pub fn not_frame_profile(x: f64) -> f64 {
    1.0 + 0.5 * (PI * x).cos()
}

/// `1 + cos(2πx)/2` on `[0, 2)`: equal on both halves of the cell.
pub fn periodic_profile(x: f64) -> f64 {
    1.0 + 0.5 * (2.0 * PI * x).cos()
}

/// The folding multiplier over `alphas.len()` cells together with
/// `G(g, 2, 1) = {e^{2πimx} g(x − 2n)}`, `|m| ≤ m_range`.
pub fn not_frame_example(
    alphas: &[c64],
    pts_per_unit: usize,
    m_range: usize,
    profile: impl Fn(f64) -> f64,
) -> Result<(OperatorModel, FrameSequence)> {
    let a = block_multiplier(alphas, alphas.len(), pts_per_unit)?;
    let grid = a.output_model().clone();
    let window = grid.sample_real(cell_window(profile));
    let spec = GaborSpec {
        a: 2.0,
        b: 1.0,
        translations: (0..alphas.len() as i64).collect(),
        modulations: range_labels(m_range),
    };
    Ok((a, gabor_system(&window, &spec, &grid)?))
}

/// Decay profile of `φ̂` on `1/4 ≤ |γ| < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    #[default]
    Linear,
    RaisedCosine,
}

impl Taper {
    /// `φ̂(γ)`: one on `|γ| < 1/4`, the taper up to `1/2`, zero beyond.
    pub fn profile(self, gamma: f64) -> f64 {
        let g = gamma.abs();
        if g < 0.25 {
            1.0
        } else if g >= 0.5 {
            0.0
        } else {
            match self {
                Taper::Linear => 2.0 - 4.0 * g,
                Taper::RaisedCosine => (2.0 * PI * (g - 0.25)).cos().powi(2),
            }
        }
    }
}

/// Pieces of the Paley–Wiener quarter-band example.
#[derive(Debug, Clone)]
pub struct PwExample {
    /// `φ_n = φ(· − n)` for every integer `n` of the window.
    pub phi: FrameSequence,
    /// `ψ_n`, the inverse transform of `e^{−2πinγ}` restricted to `[−1/4, 1/4)`.
    pub psi: FrameSequence,
    /// Orthogonal projection onto the discrete band `[−1/4, 1/4)`.
    pub projection: OperatorModel,
    pub closed_form: ClosedFormGap,
}

/// Largest gap between the computed `ψ_0` and two closed forms, relative to
/// `max |ψ_0|`: the printed `4 sin(πx/2)/(πx)` (value 1 at 0) and the
/// inverse transform `sin(πx/2)/(πx)` (value 1/2 at 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormGap {
    pub printed: f64,
    pub transform: f64,
}

fn band_kernel(d: usize, lo: f64, len: f64, spectrum: impl Fn(i64) -> f64) -> Vec<c64> {
    let mut buf: Vec<c64> = (0..d)
        .map(|j| {
            let k = if j < d / 2 { j as i64 } else { j as i64 - d as i64 };
            let amp = spectrum(k);
            if amp == 0.0 {
                creal(0.0)
            } else {
                c64::cis(2.0 * PI * k as f64 * lo / len) * (amp / len)
            }
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(d).process(&mut buf);
    buf
}

/// The Paley–Wiener example on a periodic window `[lo, lo + L)`. Needs a
/// power-of-two number of points, integer `lo`, `1/h` and `L/4`.
pub fn pw_example(grid: &HilbertModel, taper: Taper) -> Result<PwExample> {
    let (lo, h, len) = periodic_grid(grid)?;
    let d = grid.dim();
    if !d.is_power_of_two() {
        return Err(FrameError::GridMismatch(format!("{d} points is not a power of two")));
    }
    let per_unit = integer_ratio(1.0 / h, "1 / h")? as usize;
    integer_ratio(lo, "window start")?;
    let quarter = integer_ratio(len / 4.0, "window length / 4")?;
    let units = 4 * quarter as usize;
    let in_band = |k: i64| -quarter <= k && k < quarter;

    let phi0 = band_kernel(d, lo, len, |k| taper.profile(k as f64 / len));
    let psi0 = band_kernel(d, lo, len, |k| if in_band(k) { 1.0 } else { 0.0 });
    let first = lo as i64;
    let labels: Vec<i64> = (first..first + units as i64).collect();
    let shift = |v: &[c64], n: i64| {
        let s = n * per_unit as i64;
        Col::from_fn(d, |j| v[(j as i64 - s).rem_euclid(d as i64) as usize])
    };
    let phis: Vec<CVec> = labels.iter().map(|&n| shift(&phi0, n)).collect();
    let psis: Vec<CVec> = labels.iter().map(|&n| shift(&psi0, n)).collect();
    let phi = FrameSequence::new(grid.clone(), linalg::mat_from_cols(d, &phis), labels.clone())?;
    let psi = FrameSequence::new(grid.clone(), linalg::mat_from_cols(d, &psis), labels)?;

    let mut c = vec![creal(0.0); d];
    for k in -quarter..quarter {
        c[k.rem_euclid(d as i64) as usize] = creal(1.0 / d as f64);
    }
    FftPlanner::new().plan_fft_inverse(d).process(&mut c);
    let p = Mat::from_fn(d, d, |i, j| c[(i + d - j) % d]);
    let projection = OperatorModel::from_matrix(grid, grid, p, "P")?;

    let x = grid.points();
    let scale = psi0.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let gap = |f: &dyn Fn(f64) -> f64| {
        x.iter().zip(&psi0).map(|(&t, v)| (creal(f(t)) - v).norm()).fold(0.0, f64::max) / scale
    };
    let sinc_half = |t: f64| if t == 0.0 { 0.5 } else { (PI * t / 2.0).sin() / (PI * t) };
    let closed_form = ClosedFormGap {
        printed: gap(&|t| if t == 0.0 { 1.0 } else { 4.0 * (PI * t / 2.0).sin() / (PI * t) }),
        transform: gap(&sinc_half),
    };
    Ok(PwExample { phi, psi, projection, closed_form })
}

/// Random signal with spectrum inside `[−1/4, 1/4)` on a [`pw_example`] grid.
pub fn band_limited_signal(rng: &mut impl Rng, grid: &HilbertModel) -> Result<CVec> {
    let (_, _, len) = periodic_grid(grid)?;
    let d = grid.dim();
    let quarter = integer_ratio(len / 4.0, "window length / 4")?;
    let coeffs = random_matrix(rng, 2 * quarter as usize, 1);
    let mut buf = vec![creal(0.0); d];
    for (i, k) in (-quarter..quarter).enumerate() {
        buf[k.rem_euclid(d as i64) as usize] = coeffs[(i, 0)];
    }
    FftPlanner::new().plan_fft_inverse(d).process(&mut buf);
    Ok(Col::from_fn(d, |j| buf[j]))
}

/// `g_1 = e_1`, `g_n = n(e_n − e_{n−1})` in `Cᵈ`.
pub fn difference_sequence(d: usize) -> Result<FrameSequence> {
    if d < 2 {
        return Err(FrameError::InvalidParameter(format!("difference sequence needs d >= 2, got {d}")));
    }
    let mut m = Mat::<c64>::zeros(d, d);
    m[(0, 0)] = creal(1.0);
    for n in 1..d {
        let w = (n + 1) as f64;
        m[(n, n)] = creal(w);
        m[(n - 1, n)] = creal(-w);
    }
    FrameSequence::new(HilbertModel::l2(d), m, (1..=d as i64).collect())
}

/// `A e_n = g_n` for the difference sequence, with `D(A*) = {u : u_d = 0}`.
pub fn difference_operator(d: usize) -> Result<OperatorModel> {
    let g = difference_sequence(d)?;
    let model = g.model().clone();
    let adom = Subspace::coordinate(&model, &(0..d - 1).collect::<Vec<_>>())?;
    OperatorModel::from_matrix(&model, &model, g.vectors().clone(), "difference")?.with_adjoint_domain(adom)
}

/// Tolerance on `max |⟨φ_i, ψ_j⟩ − δ_ij|`.
pub const BIORTHOGONAL_TOL: f64 = 1e-8;

/// `Hf = Σ α_n ⟨f, ψ_n⟩ φ_n` for biorthogonal `{φ_n}`, `{ψ_n}`.
pub fn riesz_multiplier(phis: &FrameSequence, psis: &FrameSequence, alphas: &[c64]) -> Result<OperatorModel> {
    if phis.model() != psis.model() {
        return Err(FrameError::InvalidParameter("bases live in different models".into()));
    }
    let n = phis.len();
    if psis.len() != n || alphas.len() != n {
        return Err(FrameError::InvalidDimension { expected: n, got: psis.len().min(alphas.len()) });
    }
    let cross = psis.whitened().adjoint() * phis.whitened();
    let defect = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (cross[(j, i)] - creal(if i == j { 1.0 } else { 0.0 })).norm())
        .fold(0.0, f64::max);
    if defect > BIORTHOGONAL_TOL {
        return Err(FrameError::NotBiorthogonal { defect });
    }
    let model = phis.model();
    let scaled = Mat::from_fn(model.dim(), n, |i, k| phis.vectors()[(i, k)] * alphas[k]);
    let w = model.weights();
    let psiw = Mat::from_fn(n, model.dim(), |k, j| psis.vectors()[(j, k)].conj() * w[j]);
    OperatorModel::from_matrix(model, model, &scaled * &psiw, "H")
}

/// `{α_n φ_n}`.
pub fn multiplier_sequence(phis: &FrameSequence, alphas: &[c64]) -> Result<FrameSequence> {
    phis.scaled(alphas)
}

/// Random Riesz basis of `ℓ²_d` with singular values in `[1, cond]`, and its
/// biorthogonal dual.
pub fn random_riesz_pair(rng: &mut impl Rng, d: usize, cond: f64) -> Result<(FrameSequence, FrameSequence)> {
    let model = HilbertModel::l2(d);
    let q1 = linalg::ThinSvd::new(random_matrix(rng, d, d).as_ref())?.u;
    let q2 = linalg::ThinSvd::new(random_matrix(rng, d, d).as_ref())?.u;
    let s: Vec<f64> = (0..d)
        .map(|i| if d == 1 { 1.0 } else { 1.0 + (cond - 1.0) * i as f64 / (d - 1) as f64 })
        .collect();
    let phi = Mat::from_fn(d, d, |i, j| q1[(i, j)] * s[j]) * q2.adjoint();
    let psi = Mat::from_fn(d, d, |i, j| q1[(i, j)] / s[j]) * q2.adjoint();
    Ok((FrameSequence::from_columns(model.clone(), phi)?, FrameSequence::from_columns(model, psi)?))
}

/// Largest column error of `B` against `D·A`, relative to the column of `B`.
pub fn column_relative_error(expected: &CMat, actual: &CMat) -> f64 {
    let err = expected - actual;
    (0..expected.ncols())
        .filter_map(|j| {
            let n = expected.col(j).norm_l2();
            (n > 0.0).then(|| err.col(j).norm_l2() / n)
        })
        .fold(0.0, f64::max)
}
