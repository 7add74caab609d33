use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat};
use crate::opmodel::OperatorModel;
use crate::seqops::{self, FrameBounds, FrameSequence};
use crate::{constructions, relframes, weakframes};

use super::report::BoundsRecord;
use super::setting::Setting;

/// Random probes drawn per subspace when a setting supplies none.
const TRIALS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// `λ_min(S)`.
    FrameAlpha,
    /// `λ_max(S)`.
    FrameBeta,
    /// `λ_min(S) / λ_max(S)`.
    FrameRatio,
    BesselBound,
    /// Lower K-frame constant with `K` the scenario operator.
    KframeAlpha,
    /// Leakage of `R(K)` out of `R(D)`.
    RangeInclusion,
    GraphAlpha,
    GraphDualResidual,
    KDualResidual,
    WeakAlpha,
    WeakDualResidual,
    FactorizationResidual,
    /// Weak identity for the companion dual (or the constructed one).
    WeakDuality,
    AdjointDecomposition,
    InterchangeResidual,
    StrongExpansion,
    DualLowerRatio,
    PartialSumIdentity,
    ReconstructionError,
    PsiBandLeak,
    DerivativeMatch,
    SelfAdjointDefect,
    PsiClosedFormGap,
}

impl CheckName {
    pub const ALL: [CheckName; 23] = [
        CheckName::FrameAlpha,
        CheckName::FrameBeta,
        CheckName::FrameRatio,
        CheckName::BesselBound,
        CheckName::KframeAlpha,
        CheckName::RangeInclusion,
        CheckName::GraphAlpha,
        CheckName::GraphDualResidual,
        CheckName::KDualResidual,
        CheckName::WeakAlpha,
        CheckName::WeakDualResidual,
        CheckName::FactorizationResidual,
        CheckName::WeakDuality,
        CheckName::AdjointDecomposition,
        CheckName::InterchangeResidual,
        CheckName::StrongExpansion,
        CheckName::DualLowerRatio,
        CheckName::PartialSumIdentity,
        CheckName::ReconstructionError,
        CheckName::PsiBandLeak,
        CheckName::DerivativeMatch,
        CheckName::SelfAdjointDefect,
        CheckName::PsiClosedFormGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::FrameAlpha => "frame_alpha",
            CheckName::FrameBeta => "frame_beta",
            CheckName::FrameRatio => "frame_ratio",
            CheckName::BesselBound => "bessel_bound",
            CheckName::KframeAlpha => "kframe_alpha",
            CheckName::RangeInclusion => "range_inclusion",
            CheckName::GraphAlpha => "graph_alpha",
            CheckName::GraphDualResidual => "graph_dual_residual",
            CheckName::KDualResidual => "k_dual_residual",
            CheckName::WeakAlpha => "weak_alpha",
            CheckName::WeakDualResidual => "weak_dual_residual",
            CheckName::FactorizationResidual => "factorization_residual",
            CheckName::WeakDuality => "weak_duality",
            CheckName::AdjointDecomposition => "adjoint_decomposition",
            CheckName::InterchangeResidual => "interchange_residual",
            CheckName::StrongExpansion => "strong_expansion",
            CheckName::DualLowerRatio => "dual_lower_ratio",
            CheckName::PartialSumIdentity => "partial_sum_identity",
            CheckName::ReconstructionError => "reconstruction_error",
            CheckName::PsiBandLeak => "psi_band_leak",
            CheckName::DerivativeMatch => "derivative_match",
            CheckName::SelfAdjointDefect => "self_adjoint_defect",
            CheckName::PsiClosedFormGap => "psi_closed_form_gap",
        }
    }

    fn default_bound(self) -> Bound {
        use CheckName::*;
        match self {
            FrameAlpha | KframeAlpha | GraphAlpha | WeakAlpha | StrongExpansion | DualLowerRatio => Bound::AtLeast,
            FrameBeta | BesselBound | PsiClosedFormGap => Bound::Report,
            _ => Bound::AtMost,
        }
    }
}

/// How a measured value is judged against `tolerance` and `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value ≤ tolerance`.
    AtMost,
    /// `value ≥ tolerance`.
    AtLeast,
    /// `|value − target| ≤ tolerance`.
    Equals,
    /// Strictly decreasing along the sizes; only for trajectories.
    Decreasing,
    /// Recorded, never failing.
    Report,
}

impl Bound {
    /// Whether `value` passes with `tolerance` scaled by `scale`.
    pub fn accepts(self, value: f64, tolerance: f64, target: f64, scale: f64) -> bool {
        if !value.is_finite() {
            return self == Bound::Report;
        }
        match self {
            Bound::AtMost => value <= tolerance * scale,
            Bound::AtLeast => value >= tolerance / scale,
            Bound::Equals => (value - target).abs() <= tolerance * scale,
            Bound::Decreasing | Bound::Report => true,
        }
    }
}

/// Divide by or multiply with `N²` before judging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalize {
    #[default]
    None,
    N2,
    InvN2,
}

impl Normalize {
    pub fn apply(self, x: f64, n: usize) -> f64 {
        let n2 = (n as f64).powi(2);
        match self {
            Normalize::None => x,
            Normalize::N2 => x / n2,
            Normalize::InvN2 => x * n2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub check: CheckName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default)]
    pub over_sizes: bool,
    #[serde(default)]
    pub normalize: Normalize,
}

impl CheckSpec {
    pub fn bound(&self) -> Bound {
        self.bound.unwrap_or_else(|| self.check.default_bound())
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(0.0)
    }

    pub fn target(&self) -> f64 {
        self.target.unwrap_or(0.0)
    }

    pub(super) fn validate(&self) -> Result<(), String> {
        let name = self.check.name();
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(format!("check `{name}`: tolerance must be a non-negative number, got {t}"));
            }
        }
        match self.bound() {
            Bound::AtMost | Bound::AtLeast if self.tolerance.is_none() => {
                Err(format!("check `{name}` needs a tolerance"))
            }
            Bound::Equals if self.tolerance.is_none() || self.target.is_none() => {
                Err(format!("check `{name}` with bound `equals` needs a tolerance and a target"))
            }
            Bound::Decreasing if !self.over_sizes => {
                Err(format!("check `{name}`: bound `decreasing` needs over_sizes"))
            }
            _ => Ok(()),
        }
    }
}

fn operator(s: &Setting) -> Result<&OperatorModel, String> {
    s.op.as_ref().ok_or_else(|| "construction has no operator".to_string())
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("construction provides no {what}"))
}

fn record(out: &mut Vec<BoundsRecord>, check: CheckName, b: FrameBounds) -> FrameBounds {
    out.push(BoundsRecord { check: check.name().to_string(), kind: b.kind, alpha: b.alpha, beta: b.beta });
    b
}

/// The companion dual when the construction has one, else the constructed weak dual.
fn weak_dual(s: &Setting, a: &OperatorModel) -> crate::Result<FrameSequence> {
    match &s.dual {
        Some(d) => Ok(d.clone()),
        None => Ok(weakframes::weak_a_dual(&s.seq, a)?.vectors),
    }
}

fn adjoint_probes(s: &Setting, a: &OperatorModel, seed: u64) -> CMat {
    let dom = a.adjoint_domain();
    match &s.u_probes {
        Some(u) => dom.project_cols(u),
        None => weakframes::probe_set(dom, TRIALS, seed ^ 0x75),
    }
}

/// Measure `spec.check` on `s`. Bounds computed along the way are appended
/// to `bounds`.
pub fn evaluate(spec: &CheckSpec, s: &Setting, seed: u64, bounds: &mut Vec<BoundsRecord>) -> Result<f64, String> {
    evaluate_inner(spec.check, s, seed, bounds).map_err(|e| e.to_string())
}

fn evaluate_inner(
    check: CheckName,
    s: &Setting,
    seed: u64,
    bounds: &mut Vec<BoundsRecord>,
) -> std::result::Result<f64, Box<dyn std::error::Error>> {
    use CheckName::*;
    let seq = &s.seq;
    Ok(match check {
        FrameAlpha => record(bounds, check, seqops::frame_bounds(seq)?).alpha,
        FrameBeta => record(bounds, check, seqops::frame_bounds(seq)?).beta,
        FrameRatio => record(bounds, check, seqops::frame_bounds(seq)?).ratio(),
        BesselBound => weakframes::bessel_bound(seq)?,
        KframeAlpha => record(bounds, check, relframes::kframe_bounds(seq, operator(s)?)?).alpha,
        RangeInclusion => relframes::range_inclusion(operator(s)?, seq)?.1,
        GraphAlpha => record(bounds, check, relframes::aframe_bounds_graph(seq, operator(s)?)?).alpha,
        GraphDualResidual => relframes::a_dual_graph(seq, operator(s)?)?.certificate_residual,
        KDualResidual => relframes::k_dual(seq, operator(s)?)?.certificate_residual,
        WeakAlpha => {
            let target = s.alpha_seq.as_ref().unwrap_or(seq);
            record(bounds, check, weakframes::weak_aframe_bound(target, operator(s)?)?).alpha
        }
        WeakDualResidual => weakframes::weak_a_dual(seq, operator(s)?)?.certificate_residual,
        FactorizationResidual => weakframes::weak_factorization(seq, operator(s)?)?.residual,
        WeakDuality => {
            let a = operator(s)?;
            let dual = weak_dual(s, a)?;
            match (&s.h_probes, &s.u_probes) {
                (Some(h), Some(u)) => {
                    let hs = a.domain().project_cols(h);
                    let us = a.adjoint_domain().project_cols(u);
                    weakframes::verify_weak_duality_on(seq, &dual, a, &hs, &us)?
                }
                _ => weakframes::verify_weak_duality_seeded(seq, &dual, a, TRIALS, seed)?,
            }
        }
        AdjointDecomposition => {
            let a = operator(s)?;
            let dual = weak_dual(s, a)?;
            let us = adjoint_probes(s, a, seed);
            let mut worst: f64 = 0.0;
            for j in 0..us.ncols() {
                let u = linalg::col_of(us.as_ref(), j);
                if linalg::col_norm(&u) > 0.0 {
                    worst = worst.max(weakframes::adjoint_decomposition(seq, &dual, a, &u)?.1);
                }
            }
            worst
        }
        InterchangeResidual => {
            let a = operator(s)?;
            weakframes::interchange_dual(seq, &weak_dual(s, a)?, a)?.certificate_residual
        }
        StrongExpansion => {
            let a = operator(s)?;
            let f = need(&s.coefficients, "test vector")?;
            weakframes::strong_expansion_residual(seq, &weak_dual(s, a)?, a, f)?
        }
        DualLowerRatio => {
            let a = operator(s)?;
            weakframes::dual_lower_ratio(&weak_dual(s, a)?, a)?
        }
        PartialSumIdentity => {
            let c = need(&s.coefficients, "coefficients")?;
            let model = seq.model();
            let mut worst: f64 = 0.0;
            for n in 1..=seq.len().min(model.dim()) {
                let p = seqops::partial_synthesis(seq, c, n)?;
                let e = &p - &model.unit_vector(n - 1);
                worst = worst.max(e.norm_max());
            }
            worst
        }
        ReconstructionError => {
            let psi = need(&s.psi, "dual for reconstruction")?;
            if s.signals.is_empty() {
                return Err("construction provides no signals".into());
            }
            let mut worst: f64 = 0.0;
            for f in &s.signals {
                worst = worst.max(seqops::reconstruct(seq, psi, f)?.1);
            }
            worst
        }
        PsiBandLeak => {
            let psi = need(&s.psi, "psi sequence")?;
            let p = operator(s)?;
            let v = psi.vectors();
            constructions::column_relative_error(v, &(p.matrix() * v))
        }
        DerivativeMatch => {
            let base = need(&s.base, "base system")?;
            let a = operator(s)?;
            constructions::column_relative_error(seq.vectors(), &(a.matrix() * base.vectors()))
        }
        SelfAdjointDefect => {
            let a = operator(s)?;
            let w = a.whitened();
            let defect = linalg::op_norm((&w - w.adjoint()).as_ref())?;
            let scale = linalg::op_norm(w.as_ref())?;
            if scale > 0.0 {
                defect / scale
            } else {
                defect
            }
        }
        PsiClosedFormGap => *need(&s.closed_form_gap, "closed form")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip_through_serde() {
        for c in CheckName::ALL {
            let text = serde_json::to_string(&c).unwrap();
            assert_eq!(text, format!("\"{}\"", c.name()));
            assert_eq!(serde_json::from_str::<CheckName>(&text).unwrap(), c);
        }
    }

    #[test]
    fn bounds_scale_in_the_lenient_direction() {
        assert!(!Bound::AtMost.accepts(2e-8, 1e-8, 0.0, 1.0));
        assert!(Bound::AtMost.accepts(2e-8, 1e-8, 0.0, 10.0));
        assert!(!Bound::AtLeast.accepts(0.5, 1.0, 0.0, 1.0));
        assert!(Bound::AtLeast.accepts(0.5, 1.0, 0.0, 2.0));
        assert!(Bound::Equals.accepts(1.0 + 1e-11, 1e-10, 1.0, 1.0));
        assert!(!Bound::AtMost.accepts(f64::NAN, 1.0, 0.0, 1.0));
        assert!(Bound::Report.accepts(f64::NAN, 0.0, 0.0, 1.0));
    }

    #[test]
    fn missing_tolerance_is_rejected() {
        let spec: CheckSpec = serde_json::from_str(r#"{"check":"weak_duality"}"#).unwrap();
        assert!(spec.validate().is_err());
        let spec: CheckSpec = serde_json::from_str(r#"{"check":"bessel_bound"}"#).unwrap();
        assert!(spec.validate().is_ok());
    }
}
