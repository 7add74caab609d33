use serde::{Deserialize, Serialize};

use crate::constructions::{self as cons, GaborSpec, Taper, WaveletSpec};
use crate::error::Result;
use crate::hilbert::HilbertModel;
use crate::linalg::{c64, creal, CMat, CVec};
use crate::opmodel::{diff_operator, DiffVariant, OperatorModel, PERIODIC_ORDER};
use crate::sampling::seeded;
use crate::seqops::{span_dual, FrameSequence};

use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSpec {
    /// `-r..=r`.
    Range(usize),
    /// `count` labels centred at zero.
    Count(usize),
    /// Every distinct frequency the grid resolves.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// Endpoints included, trapezoid weights.
    #[default]
    Closed,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Gaussian,
    SmoothedHat,
}

impl WindowKind {
    fn eval(self, x: f64) -> f64 {
        match self {
            WindowKind::Gaussian => cons::gaussian(x),
            WindowKind::SmoothedHat => cons::smoothed_hat(x),
        }
    }

    fn derivative(self) -> fn(f64) -> f64 {
        match self {
            WindowKind::Gaussian => cons::gaussian_derivative,
            WindowKind::SmoothedHat => cons::smoothed_hat_derivative,
        }
    }
}

/// Profile of the cell window on `[0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CellProfile {
    /// `1 + cos(πx)/2`.
    #[default]
    Cosine,
    /// `1 + cos(2πx)/2`, equal on both halves.
    Periodic,
}

impl CellProfile {
    fn profile(self) -> fn(f64) -> f64 {
        match self {
            CellProfile::Cosine => cons::not_frame_profile,
            CellProfile::Periodic => cons::periodic_profile,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotherKind {
    SmoothedHat,
}

fn default_true() -> bool {
    true
}

fn default_signals() -> usize {
    20
}

fn default_cond() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    /// `{2πnb·e_{nb}}` (or `{e_{nb}}` unscaled) on `(0,1)`; the companion
    /// dual is `{b·e_{nb}}`.
    Exponential {
        b: f64,
        cells: usize,
        labels: LabelSpec,
        #[serde(default)]
        grid: GridKind,
        #[serde(default = "default_true")]
        scaled: bool,
    },
    Gabor {
        window: WindowKind,
        a: f64,
        b: f64,
        m_range: usize,
        n_range: usize,
        lo: f64,
        hi: f64,
        points: usize,
    },
    /// Image of a Gabor system under `-i d/dx`; the companion dual is the
    /// canonical dual of the Gabor system on its span.
    GaborDerivative {
        window: WindowKind,
        a: f64,
        b: f64,
        m_range: usize,
        n_range: usize,
        lo: f64,
        hi: f64,
        points: usize,
    },
    Wavelet {
        mother: MotherKind,
        a: f64,
        b: f64,
        m_range: usize,
        n_range: usize,
        lo: f64,
        hi: f64,
        points: usize,
    },
    WaveletDerivative {
        mother: MotherKind,
        a: f64,
        b: f64,
        m_range: usize,
        n_range: usize,
        lo: f64,
        hi: f64,
        points: usize,
    },
    Translation {
        window: WindowKind,
        c: f64,
        range: usize,
        lo: f64,
        hi: f64,
        points: usize,
    },
    PwQuarter {
        lo: f64,
        hi: f64,
        points: usize,
        #[serde(default)]
        taper: Taper,
        #[serde(default = "default_signals")]
        signals: usize,
    },
    Difference {
        d: usize,
    },
    /// `{α_n φ_n}` for a random Riesz basis with `α_n = n·e^{in}`; the
    /// companion dual is the biorthogonal basis.
    Multiplier {
        d: usize,
        #[serde(default = "default_cond")]
        cond: f64,
    },
    /// `G(g, 2, 1)` against the folding multiplier; `alphas` as `[re, im]`.
    NotFrame {
        alphas: Vec<(f64, f64)>,
        pts_per_unit: usize,
        m_range: usize,
        #[serde(default)]
        profile: CellProfile,
    },
    /// `A_N = diag(1..N)`, `g_n = n·e_n`, companion `t_n = e_n`.
    ParsevalDiagonal {
        #[serde(default)]
        n: Option<usize>,
    },
}

impl Construction {
    pub fn generator(&self) -> &'static str {
        match self {
            Construction::Exponential { .. } => "exponential",
            Construction::Gabor { .. } => "gabor",
            Construction::GaborDerivative { .. } => "gabor_derivative",
            Construction::Wavelet { .. } => "wavelet",
            Construction::WaveletDerivative { .. } => "wavelet_derivative",
            Construction::Translation { .. } => "translation",
            Construction::PwQuarter { .. } => "pw_quarter",
            Construction::Difference { .. } => "difference",
            Construction::Multiplier { .. } => "multiplier",
            Construction::NotFrame { .. } => "not_frame",
            Construction::ParsevalDiagonal { .. } => "parseval_diagonal",
        }
    }

    pub(super) fn validate(&self) -> std::result::Result<(), String> {
        let positive = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(format!("{what} must be positive, got {x}"))
            }
        };
        match self {
            Construction::Exponential { b, cells, .. } => {
                positive(*b, "b")?;
                if *b > 1.0 || *cells == 0 {
                    return Err("exponential needs b in (0, 1] and cells > 0".into());
                }
            }
            Construction::Gabor { a, b, lo, hi, points, .. }
            | Construction::GaborDerivative { a, b, lo, hi, points, .. } => {
                positive(*a, "a")?;
                positive(*b, "b")?;
                positive(hi - lo, "window length")?;
                if *points == 0 {
                    return Err("points must be positive".into());
                }
            }
            Construction::Wavelet { a, b, lo, hi, points, .. }
            | Construction::WaveletDerivative { a, b, lo, hi, points, .. } => {
                positive(*b, "b")?;
                positive(hi - lo, "window length")?;
                if !(*a > 1.0) || *points == 0 {
                    return Err("wavelet needs a > 1 and points > 0".into());
                }
            }
            Construction::Translation { c, lo, hi, points, .. } => {
                positive(*c, "c")?;
                positive(hi - lo, "window length")?;
                if *points == 0 {
                    return Err("points must be positive".into());
                }
            }
            Construction::PwQuarter { lo, hi, points, .. } => {
                positive(hi - lo, "window length")?;
                if *points == 0 {
                    return Err("points must be positive".into());
                }
            }
            Construction::Difference { d } => {
                if *d < 2 {
                    return Err("difference needs d >= 2".into());
                }
            }
            Construction::Multiplier { d, cond } => {
                if *d == 0 || !(*cond >= 1.0) {
                    return Err("multiplier needs d > 0 and cond >= 1".into());
                }
            }
            Construction::NotFrame { alphas, pts_per_unit, .. } => {
                if alphas.is_empty() || *pts_per_unit == 0 {
                    return Err("not_frame needs at least one alpha and pts_per_unit > 0".into());
                }
            }
            Construction::ParsevalDiagonal { n } => {
                if *n == Some(0) {
                    return Err("parseval_diagonal needs n > 0".into());
                }
            }
        }
        Ok(())
    }

    /// The same construction at truncation `n`.
    fn at_size(&self, n: usize) -> Construction {
        let mut c = self.clone();
        match &mut c {
            Construction::Exponential { labels, .. } => *labels = LabelSpec::Range(n),
            Construction::Gabor { m_range, n_range, .. } | Construction::GaborDerivative { m_range, n_range, .. } => {
                *m_range = n;
                *n_range = n;
            }
            Construction::Wavelet { n_range, .. } | Construction::WaveletDerivative { n_range, .. } => *n_range = n,
            Construction::Translation { range, .. } => *range = n,
            Construction::PwQuarter { .. } => {}
            Construction::Difference { d } => *d = n,
            Construction::Multiplier { d, .. } => *d = n,
            Construction::NotFrame { m_range, .. } => *m_range = n,
            Construction::ParsevalDiagonal { n: size } => *size = Some(n),
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    /// The operator the construction is paired with.
    #[default]
    Default,
    Identity,
    /// `-i d/dx`: `H¹` on a closed grid, order-8 periodic on a window.
    Derivative,
    /// `d/dx` with the same domain conventions.
    Ddx,
}

impl OperatorSpec {
    pub(super) fn validate_for(&self, c: &Construction) -> std::result::Result<(), String> {
        let gridded = matches!(
            c,
            Construction::Exponential { .. }
                | Construction::Gabor { .. }
                | Construction::GaborDerivative { .. }
                | Construction::Wavelet { .. }
                | Construction::WaveletDerivative { .. }
                | Construction::Translation { .. }
                | Construction::PwQuarter { .. }
        );
        match self {
            OperatorSpec::Derivative | OperatorSpec::Ddx if !gridded => {
                Err(format!("operator {self:?} needs a gridded construction, not `{}`", c.generator()))
            }
            _ => Ok(()),
        }
    }
}

/// Everything a check may need, built once per truncation.
#[derive(Debug, Clone)]
pub struct Setting {
    pub seq: FrameSequence,
    pub op: Option<OperatorModel>,
    /// Companion dual `{t_n}` for weak identities.
    pub dual: Option<FrameSequence>,
    /// System before the operator was applied, for derivative checks.
    pub base: Option<FrameSequence>,
    /// A larger label set for lower-bound checks.
    pub alpha_seq: Option<FrameSequence>,
    pub psi: Option<FrameSequence>,
    pub h_probes: Option<CMat>,
    pub u_probes: Option<CMat>,
    pub signals: Vec<CVec>,
    /// Coefficients for partial-sum and strong-expansion checks.
    pub coefficients: Option<CVec>,
    pub closed_form_gap: Option<f64>,
    pub notes: Vec<String>,
}

impl Setting {
    fn plain(seq: FrameSequence, op: Option<OperatorModel>) -> Self {
        Self {
            seq,
            op,
            dual: None,
            base: None,
            alpha_seq: None,
            psi: None,
            h_probes: None,
            u_probes: None,
            signals: Vec::new(),
            coefficients: None,
            closed_form_gap: None,
            notes: Vec::new(),
        }
    }

    pub fn build(
        c: &Construction,
        op: &OperatorSpec,
        seed: u64,
        size: Option<usize>,
    ) -> std::result::Result<Self, ScenarioError> {
        let c = match size {
            Some(n) => c.at_size(n),
            None => c.clone(),
        };
        let mut s = build_default(&c, seed)?;
        let grid = s.seq.model().clone();
        let chosen = match op {
            OperatorSpec::Default => s.op.take(),
            OperatorSpec::Identity => Some(OperatorModel::identity(&grid)),
            OperatorSpec::Derivative => Some(derivative_on(&grid, false)?),
            OperatorSpec::Ddx => Some(derivative_on(&grid, true)?),
        };
        s.op = chosen;
        Ok(s)
    }
}

fn derivative_on(grid: &HilbertModel, plain: bool) -> Result<OperatorModel> {
    let closed = grid.grid().map(|g| g.closed).unwrap_or(false);
    let variant = match (closed, plain) {
        (true, false) => DiffVariant::MinusIDdxH1,
        (true, true) => DiffVariant::DdxH1,
        (false, false) => DiffVariant::MinusIDdxPeriodic { order: PERIODIC_ORDER },
        (false, true) => DiffVariant::DdxPeriodic { order: PERIODIC_ORDER },
    };
    diff_operator(grid, variant)
}

fn labels_for(spec: LabelSpec, b: f64, cells: usize) -> Vec<i64> {
    match spec {
        LabelSpec::Range(r) => cons::range_labels(r),
        LabelSpec::Count(n) => cons::symmetric_labels(n),
        LabelSpec::Full => cons::full_exponential_labels(b, cells),
    }
}

fn build_default(c: &Construction, seed: u64) -> Result<Setting> {
    Ok(match c {
        &Construction::Exponential { b, cells, labels, grid, scaled } => {
            let model = match grid {
                GridKind::Closed => HilbertModel::interval_closed(0.0, 1.0, cells)?,
                GridKind::Periodic => HilbertModel::interval(0.0, 1.0, cells)?,
            };
            let op = derivative_on(&model, false)?;
            let labels = labels_for(labels, b, cells);
            let seq = cons::exponential_system(b, &labels, &model, scaled)?;
            let plain = cons::exponential_system(b, &labels, &model, false)?;
            let full = cons::full_exponential_labels(b, cells);
            let mut s = Setting::plain(seq, Some(op));
            s.dual = Some(plain.scaled(&vec![creal(b); labels.len()])?);
            s.base = Some(plain);
            s.alpha_seq = Some(cons::exponential_system(b, &full, &model, scaled)?);
            if grid == GridKind::Closed {
                s.u_probes = Some(cons::dirichlet_probes(&model));
                s.h_probes = Some(cons::interval_probes(&model));
            }
            s.notes.push(format!(
                "lower bounds use the full label set ({} labels); expansions use {} labels",
                full.len(),
                labels.len()
            ));
            s
        }
        &Construction::Gabor { window, a, b, m_range, n_range, lo, hi, points } => {
            let grid = HilbertModel::interval(lo, hi, points)?;
            let g = grid.sample_real(|x| window.eval(x));
            let seq = cons::gabor_system(&g, &GaborSpec::symmetric(a, b, m_range, n_range), &grid)?;
            let mut s = Setting::plain(seq.clone(), Some(derivative_on(&grid, false)?));
            s.base = Some(seq);
            s.u_probes = Some(cons::window_probes(&grid));
            s
        }
        &Construction::GaborDerivative { window, a, b, m_range, n_range, lo, hi, points } => {
            let grid = HilbertModel::interval(lo, hi, points)?;
            let g = grid.sample_real(|x| window.eval(x));
            let gp = grid.sample_real(window.derivative());
            let spec = GaborSpec::symmetric(a, b, m_range, n_range);
            let base = cons::gabor_system(&g, &spec, &grid)?;
            let seq = cons::gabor_derivative_system(&g, &gp, &spec, &grid)?;
            let mut s = Setting::plain(seq, Some(derivative_on(&grid, false)?));
            s.dual = Some(span_dual(&base)?);
            s.base = Some(base);
            s.u_probes = Some(cons::window_probes(&grid));
            s.h_probes = s.u_probes.clone();
            s
        }
        Construction::Wavelet { mother, a, b, m_range, n_range, lo, hi, points }
        | Construction::WaveletDerivative { mother, a, b, m_range, n_range, lo, hi, points } => {
            let MotherKind::SmoothedHat = mother;
            let grid = HilbertModel::interval(*lo, *hi, *points)?;
            let spec = WaveletSpec::symmetric(*a, *b, *m_range, *n_range);
            let support = cons::SMOOTHED_HAT_SUPPORT;
            let base = cons::wavelet_system(&cons::smoothed_hat, support, &spec, &grid)?;
            let op = derivative_on(&grid, true)?;
            if matches!(c, Construction::Wavelet { .. }) {
                let mut s = Setting::plain(base.clone(), Some(op));
                s.base = Some(base);
                s
            } else {
                let seq = cons::wavelet_derivative_system(&cons::smoothed_hat_derivative, support, &spec, &grid)?;
                let mut s = Setting::plain(seq, Some(op));
                s.dual = Some(span_dual(&base)?);
                s.h_probes = Some(base.vectors().clone());
                s.u_probes = Some(cons::window_probes(&grid));
                s.base = Some(base);
                s
            }
        }
        &Construction::Translation { window, c, range, lo, hi, points } => {
            let grid = HilbertModel::interval(lo, hi, points)?;
            let g = grid.sample_real(|x| window.eval(x));
            let seq = cons::translation_system(&g, c, &cons::range_labels(range), &grid)?;
            let mut s = Setting::plain(seq.clone(), Some(derivative_on(&grid, false)?));
            s.base = Some(seq);
            s
        }
        &Construction::PwQuarter { lo, hi, points, taper, signals } => {
            let grid = HilbertModel::interval(lo, hi, points)?;
            let pw = cons::pw_example(&grid, taper)?;
            let mut rng = seeded(seed);
            let mut s = Setting::plain(pw.phi, Some(pw.projection));
            s.signals = (0..signals).map(|_| cons::band_limited_signal(&mut rng, &grid)).collect::<Result<_>>()?;
            s.psi = Some(pw.psi);
            s.closed_form_gap = Some(pw.closed_form.printed);
            s.notes.push(format!(
                "psi_0 against the printed closed form 4 sin(pi x/2)/(pi x): relative gap {:.3e}; \
                 against sin(pi x/2)/(pi x): {:.3e}",
                pw.closed_form.printed, pw.closed_form.transform
            ));
            s
        }
        &Construction::Difference { d } => {
            let seq = cons::difference_sequence(d)?;
            let model = seq.model().clone();
            let mut s = Setting::plain(seq, Some(cons::difference_operator(d)?));
            s.dual = Some(FrameSequence::from_columns(model, faer::Mat::identity(d, d))?);
            s.coefficients = Some(faer::Col::from_fn(d, |k| creal(1.0 / (k + 1) as f64)));
            s
        }
        &Construction::Multiplier { d, cond } => {
            let mut rng = seeded(seed);
            let (phi, psi) = cons::random_riesz_pair(&mut rng, d, cond)?;
            let alphas: Vec<c64> = (1..=d).map(|n| c64::cis(n as f64) * n as f64).collect();
            let h = cons::riesz_multiplier(&phi, &psi, &alphas)?;
            let mut s = Setting::plain(cons::multiplier_sequence(&phi, &alphas)?, Some(h));
            s.dual = Some(psi);
            s.base = Some(phi);
            s
        }
        Construction::NotFrame { alphas, pts_per_unit, m_range, profile } => {
            let alphas: Vec<c64> = alphas.iter().map(|&(re, im)| c64::new(re, im)).collect();
            let (a, g) = cons::not_frame_example(&alphas, *pts_per_unit, *m_range, profile.profile())?;
            Setting::plain(g, Some(a))
        }
        &Construction::ParsevalDiagonal { n } => {
            let n = n.unwrap_or(8);
            let model = HilbertModel::l2(n);
            let diag: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let a = OperatorModel::diagonal(&model, &diag).with_name("diag(1..N)");
            let seq = FrameSequence::new(model.clone(), a.matrix().clone(), (1..=n as i64).collect())?;
            let mut s = Setting::plain(seq, Some(a));
            s.dual = Some(FrameSequence::from_columns(model, faer::Mat::identity(n, n))?);
            s
        }
    })
}
