//! Weak A-frames: lower bounds on `D(A*)`, weak A-duals, the strong
//! decomposition of `A*`, interchange duals and the synthesis factorization.
//!
//! Everything is assembled in orthonormal coordinates of the two domain
//! subspaces. With `Q` a basis of `D(A*)`, `P` one of `D(A)` and `B = GᴴQ`
//! the analysis operator restricted to `D(A*)`, the weak identity
//! `⟨Ah, u⟩ = Σ ⟨h, t_n⟩⟨g_n, u⟩` reads `QᴴAP = Bᴴ M P` with `t_n = Mᴴe_n`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::hilbert::{inner_unchecked, Subspace};
use crate::linalg::{self, PencilBound, CMat, CVec, RCOND};
use crate::opmodel::{pseudo_inverse, OperatorModel};
use crate::sampling::{random_matrix, seeded};
use crate::seqops::{BoundKind, FrameBounds, FrameSequence, FRAME_TOL};

/// Relative residual above which a factorization through `Bᴴ` is rejected.
pub const FACTOR_TOL: f64 = 1e-8;

/// Which construction produced a [`DualSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Producer {
    WeakADualThm,
    KDualThm,
    InterchangeThm,
    Canonical,
    User,
}

/// A companion family together with the residual that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSequence {
    pub vectors: FrameSequence,
    pub producer: Producer,
    pub certificate_residual: f64,
    /// Vectors are meant to be paired through the graph inner product.
    pub graph_space: bool,
}

impl DualSequence {
    pub fn user(vectors: FrameSequence) -> Self {
        Self { vectors, producer: Producer::User, certificate_residual: f64::NAN, graph_space: false }
    }
}

fn check_sequence_model(seq: &FrameSequence, a: &OperatorModel) -> Result<()> {
    if seq.model() != a.output_model() {
        return Err(FrameError::InvalidParameter(format!(
            "sequence lives in `{}` but the operator maps into `{}`",
            seq.model().label(),
            a.output_model().label()
        )));
    }
    Ok(())
}

fn restrict_rows(sub: &Subspace, m: CMat) -> CMat {
    if sub.is_full() {
        m
    } else {
        sub.whitened_basis().adjoint() * &m
    }
}

fn restrict_cols(m: CMat, sub: &Subspace) -> CMat {
    if sub.is_full() {
        m
    } else {
        &m * sub.whitened_basis()
    }
}

/// Optimal `α` in `α‖A*f‖² ≤ Σ|⟨f, g_n⟩|²` over `D(A*)`; `β` is the largest
/// value of the series on unit vectors of `D(A*)`.
pub fn weak_aframe_bound(seq: &FrameSequence, a: &OperatorModel) -> Result<FrameBounds> {
    check_sequence_model(seq, a)?;
    let dom = a.adjoint_domain();
    let b = restrict_cols(seq.whitened().adjoint().to_owned(), dom);
    let astar = restrict_cols(a.whitened().adjoint().to_owned(), dom);
    let pencil = linalg::lower_pencil_bound(b.as_ref(), astar.as_ref())?;
    let beta = linalg::ThinSvd::new(b.as_ref())?.sigma_max().powi(2);
    let alpha = match pencil {
        PencilBound::Degenerate => return Err(FrameError::DegenerateOperator),
        other => other.alpha().unwrap_or(0.0),
    };
    let kind = if alpha > FRAME_TOL { BoundKind::WeakAFrame } else { BoundKind::BesselOnly };
    Ok(FrameBounds { alpha, beta, kind })
}

/// Minimum-norm solution of `QᴴAP = BᴴM` and its relative residual.
#[derive(Debug, Clone)]
pub struct WeakFactorization {
    /// `M` in whitened coordinates (`N × dim_in`), zero on `D(A)^⊥`.
    pub m: CMat,
    pub residual: f64,
}

pub fn weak_factorization(seq: &FrameSequence, a: &OperatorModel) -> Result<WeakFactorization> {
    check_sequence_model(seq, a)?;
    let b = restrict_cols(seq.whitened().adjoint().to_owned(), a.adjoint_domain());
    let target = restrict_rows(a.adjoint_domain(), a.whitened_on_domain());
    let tn = linalg::fro_norm(target.as_ref());
    if tn == 0.0 {
        return Err(FrameError::DegenerateOperator);
    }
    let bstar: CMat = b.adjoint().to_owned();
    let x = linalg::pinv(bstar.as_ref(), RCOND)? * &target;
    let residual = linalg::fro_norm((&bstar * &x - &target).as_ref()) / tn;
    let m = if a.domain().is_full() { x } else { &x * a.domain().whitened_basis().adjoint() };
    Ok(WeakFactorization { m, residual })
}

/// Bessel weak A-dual `t_n = Mᴴ e_n` from the minimum-norm factorization.
pub fn weak_a_dual(seq: &FrameSequence, a: &OperatorModel) -> Result<DualSequence> {
    let fac = weak_factorization(seq, a)?;
    if fac.residual > FACTOR_TOL {
        return Err(FrameError::FactorizationFailed { residual: fac.residual });
    }
    let t: CMat = fac.m.adjoint().to_owned();
    let model = a.input_model().clone();
    let vectors = seq.with_vectors(model.clone(), model.unwhiten_rows(t.as_ref()))?;
    let certificate_residual = verify_weak_duality(seq, &vectors, a, 16)?;
    Ok(DualSequence { vectors, producer: Producer::WeakADualThm, certificate_residual, graph_space: false })
}

/// Test vectors: a basis of `sub` plus `trials` random members.
pub fn probe_set(sub: &Subspace, trials: usize, seed: u64) -> CMat {
    let basis = sub.basis();
    if trials == 0 {
        return basis;
    }
    let mut rng = seeded(seed);
    let coeffs = random_matrix(&mut rng, basis.ncols(), trials);
    let random = &basis * &coeffs;
    let mut out = Mat::zeros(basis.nrows(), basis.ncols() + trials);
    out.get_mut(.., 0..basis.ncols()).copy_from(&basis);
    out.get_mut(.., basis.ncols()..).copy_from(&random);
    out
}

/// Small absolute floor added to `‖Ah‖‖u‖` in the weak residual, scaled by
/// `‖h‖‖u‖` so that vectors in `ker A` do not divide by zero.
pub const WEAK_EPS: f64 = 1e-12;

/// `max |⟨Ah,u⟩ − Σ⟨h,t_n⟩⟨g_n,u⟩| / (‖Ah‖‖u‖ + ε‖h‖‖u‖)` over the bases of
/// `D(A)`, `D(A*)`, `trials` random members of each, and the projections
/// of every `Ah` onto `D(A*)`.
pub fn verify_weak_duality(
    seq: &FrameSequence,
    dual: &FrameSequence,
    a: &OperatorModel,
    trials: usize,
) -> Result<f64> {
    verify_weak_duality_seeded(seq, dual, a, trials, 0)
}

/// [`verify_weak_duality`] with the random probes drawn from `seed`.
pub fn verify_weak_duality_seeded(
    seq: &FrameSequence,
    dual: &FrameSequence,
    a: &OperatorModel,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let hs = probe_set(a.domain(), trials, seed ^ 0x68);
    let base = probe_set(a.adjoint_domain(), trials, seed ^ 0x75);
    let aligned = a.adjoint_domain().project_cols(&(a.matrix() * &hs));
    let mut us = Mat::zeros(base.nrows(), base.ncols() + aligned.ncols());
    us.get_mut(.., 0..base.ncols()).copy_from(&base);
    us.get_mut(.., base.ncols()..).copy_from(&aligned);
    verify_weak_duality_on(seq, dual, a, &hs, &us)
}

/// Weak residual on explicit probe vectors (columns of `hs` in `D(A)`,
/// columns of `us` in `D(A*)`).
pub fn verify_weak_duality_on(
    seq: &FrameSequence,
    dual: &FrameSequence,
    a: &OperatorModel,
    hs: &CMat,
    us: &CMat,
) -> Result<f64> {
    check_sequence_model(seq, a)?;
    let (hin, hout) = (a.input_model(), a.output_model());
    if dual.model() != hin {
        return Err(FrameError::InvalidParameter("dual must live in the operator's input model".into()));
    }
    if dual.len() != seq.len() {
        return Err(FrameError::InvalidDimension { expected: seq.len(), got: dual.len() });
    }
    hin.check_len(hs.nrows())?;
    hout.check_len(us.nrows())?;
    let wh = hin.whiten_rows(hs.as_ref());
    let wu = hout.whiten_rows(us.as_ref());
    let ah = a.whitened() * &wh;
    let lhs = wu.adjoint() * &ah;
    let coeff_h = dual.whitened().adjoint() * &wh;
    let coeff_u = wu.adjoint() * seq.whitened();
    let rhs = &coeff_u * &coeff_h;
    let mut worst: f64 = 0.0;
    for j in 0..hs.ncols() {
        let nah = ah.col(j).norm_l2();
        let nh = wh.col(j).norm_l2();
        for i in 0..us.ncols() {
            let nu = wu.col(i).norm_l2();
            let denom = nah * nu + WEAK_EPS * nh * nu;
            if denom == 0.0 {
                continue;
            }
            worst = worst.max((lhs[(i, j)] - rhs[(i, j)]).norm() / denom);
        }
    }
    Ok(worst)
}

/// `Σ ⟨u, g_n⟩ t_n` and its relative distance from `A*u`.
pub fn adjoint_decomposition(
    seq: &FrameSequence,
    dual: &FrameSequence,
    a: &OperatorModel,
    u: &CVec,
) -> Result<(CVec, f64)> {
    check_sequence_model(seq, a)?;
    a.output_model().check_len(u.nrows())?;
    let violation = a.adjoint_domain().violation(u);
    if violation > crate::hilbert::DOMAIN_TOL {
        return Err(FrameError::DomainViolation { violation });
    }
    let c = crate::seqops::analysis(seq, u)?;
    let value = crate::seqops::synthesis(dual, &c)?;
    let target = a.adjoint().apply_matrix(u);
    let err = &value - &target;
    let model = a.input_model();
    let nt = inner_unchecked(model, &target, &target).re.sqrt();
    let ne = inner_unchecked(model, &err, &err).re.sqrt();
    Ok((value, if nt > 0.0 { ne / nt } else { ne }))
}

/// Distance of the partial sums `s_n = Σ_{k≤n} ⟨f, t_k⟩ g_k` from the part
/// of `Af` seen by `D(A*)`, minimized over `n`. A strong expansion of `A`
/// would drive this to zero; the weak identity alone does not.
pub fn strong_expansion_residual(
    seq: &FrameSequence,
    dual: &FrameSequence,
    a: &OperatorModel,
    f: &CVec,
) -> Result<f64> {
    check_sequence_model(seq, a)?;
    let c = crate::seqops::analysis(dual, f)?;
    let target = a.adjoint_domain().project(&a.apply(f)?);
    let model = a.output_model();
    let mut partial = CVec::zeros(model.dim());
    let mut best = f64::INFINITY;
    for n in 0..seq.len() {
        partial += seq.vectors().col(n) * faer::Scale(c[n]);
        let e = &partial - &target;
        best = best.min(inner_unchecked(model, &e, &e).re.sqrt());
    }
    Ok(best)
}

/// Surjectivity threshold on the smallest singular value of `A|D(A)`.
pub const SURJECTIVE_TOL: f64 = 1e-8;

/// `h_n = (A†)* t_n`, certified on a basis of `D(A*)` by
/// `max ‖u − Σ⟨u, g_n⟩ h_n‖ / ‖u‖`.
pub fn interchange_dual(seq: &FrameSequence, dual: &FrameSequence, a: &OperatorModel) -> Result<DualSequence> {
    check_sequence_model(seq, a)?;
    if dual.model() != a.input_model() || dual.len() != seq.len() {
        return Err(FrameError::InvalidParameter("dual does not match the operator and sequence".into()));
    }
    let restricted = a.whitened_on_domain();
    let svd = linalg::ThinSvd::new(restricted.as_ref())?;
    let dout = a.output_model().dim();
    let sigma_min = if svd.s.len() >= dout { svd.s[dout - 1] } else { 0.0 };
    if sigma_min <= SURJECTIVE_TOL {
        return Err(FrameError::NotSurjective { sigma_min });
    }
    let pinv_adj = pseudo_inverse(a)?.adjoint();
    let h = pinv_adj.matrix() * dual.vectors();
    let hseq = seq.with_vectors(a.output_model().clone(), h)?;
    let certificate_residual = interchange_residual(seq, &hseq, a.adjoint_domain())?;
    Ok(DualSequence { vectors: hseq, producer: Producer::InterchangeThm, certificate_residual, graph_space: false })
}

/// `max ‖u − Σ⟨u, g_n⟩h_n‖ / ‖u‖` over a basis of `sub`.
pub fn interchange_residual(seq: &FrameSequence, h: &FrameSequence, sub: &Subspace) -> Result<f64> {
    let basis = sub.whitened_basis();
    let g = seq.whitened();
    let hw = h.whitened();
    let recon = &hw * (g.adjoint() * &basis);
    let err = recon - &basis;
    Ok((0..basis.ncols())
        .map(|j| err.col(j).norm_l2() / basis.col(j).norm_l2())
        .fold(0.0, f64::max))
}

/// `A = RQ` with `R = Bᴴ` and `Q = M`, read on `D(A) × D(A*)`.
#[derive(Debug, Clone)]
pub struct SynthesisFactorization {
    pub r: OperatorModel,
    pub q: OperatorModel,
    pub residual: f64,
}

pub fn factorize_synthesis(seq: &FrameSequence, a: &OperatorModel) -> Result<SynthesisFactorization> {
    let bounds = weak_aframe_bound(seq, a)?;
    if bounds.alpha <= FRAME_TOL {
        return Err(FrameError::FactorizationFailed { residual: 1.0 });
    }
    let fac = weak_factorization(seq, a)?;
    if fac.residual > FACTOR_TOL {
        return Err(FrameError::FactorizationFailed { residual: fac.residual });
    }
    let n = seq.len();
    let coeffs = crate::hilbert::HilbertModel::l2(n).with_label(format!("l2 coefficients N={n}"));
    let (hin, hout) = (a.input_model(), a.output_model());
    let dom = a.adjoint_domain();
    let r_matrix = if dom.is_full() {
        seq.vectors().clone()
    } else {
        let q = dom.whitened_basis();
        hout.unwhiten_rows((&q * (q.adjoint() * seq.whitened())).as_ref())
    };
    let r = OperatorModel::from_matrix(&coeffs, hout, r_matrix, "B*")?;
    let q = OperatorModel::from_matrix(hin, &coeffs, hin.scale_cols_sqrt(fac.m.as_ref()), "M")?;
    Ok(SynthesisFactorization { r, q, residual: fac.residual })
}

/// `min Σ|⟨f, t_n⟩|² / ‖Af‖²` over `f ∈ D(A)`. For unbounded `A` this
/// tends to zero along truncations even though `{t_n}` stays Bessel.
pub fn dual_lower_ratio(dual: &FrameSequence, a: &OperatorModel) -> Result<f64> {
    let dom = a.domain();
    let f = restrict_cols(dual.whitened().adjoint().to_owned(), dom);
    let g = a.whitened_on_domain();
    match linalg::lower_pencil_bound(f.as_ref(), g.as_ref())? {
        PencilBound::Degenerate => Err(FrameError::DegenerateOperator),
        other => Ok(other.alpha().unwrap_or(0.0)),
    }
}

/// Upper Bessel bound of a sequence, `λ_max(S)`.
pub fn bessel_bound(seq: &FrameSequence) -> Result<f64> {
    Ok(linalg::ThinSvd::new(seq.whitened().as_ref())?.sigma_max().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{orthonormalize, HilbertModel};
    use crate::linalg::{c64, creal};
    use crate::sampling::{random_vector, seeded};
    use crate::seqops::{analysis, canonical_dual, frame_bounds};
    use proptest::prelude::*;

    fn diag_instance(n: usize) -> (OperatorModel, FrameSequence) {
        let model = HilbertModel::l2(n);
        let a = OperatorModel::diagonal(&model, &(1..=n).map(|k| k as f64).collect::<Vec<_>>());
        let seq = FrameSequence::from_columns(model, a.matrix().clone()).unwrap();
        (a, seq)
    }

    /// Random `A` with a random proper `D(A*)` and `g_n = A f_n` for a frame `{f_n}`.
    fn image_of_frame(seed: u64, d: usize, n: usize) -> (OperatorModel, FrameSequence, FrameSequence) {
        let mut rng = seeded(seed);
        let model = HilbertModel::new((0..d).map(|i| 0.5 + 0.1 * i as f64).collect(), "w").unwrap();
        let adom = orthonormalize(random_matrix(&mut rng, d, d - 1).as_ref(), &model).unwrap();
        let a = OperatorModel::from_matrix(&model, &model, random_matrix(&mut rng, d, d), "a")
            .unwrap()
            .with_adjoint_domain(adom)
            .unwrap();
        let f = FrameSequence::from_columns(model.clone(), random_matrix(&mut rng, d, n)).unwrap();
        let g = FrameSequence::from_columns(model, a.matrix() * f.vectors()).unwrap();
        (a, g, f)
    }

    #[test]
    fn parseval_weak_bound_is_one() {
        for n in [3, 8, 20] {
            let (a, seq) = diag_instance(n);
            let b = weak_aframe_bound(&seq, &a).unwrap();
            assert!((b.alpha - 1.0).abs() <= 1e-10);
            assert_eq!(b.kind, BoundKind::WeakAFrame);
        }
    }

    #[test]
    fn frame_image_bound_lies_between_frame_bounds() {
        let (a, g, f) = image_of_frame(3, 6, 9);
        let fb = frame_bounds(&f).unwrap();
        let wb = weak_aframe_bound(&g, &a).unwrap();
        assert!(wb.alpha >= fb.alpha * (1.0 - 1e-9) && wb.alpha <= fb.beta * (1.0 + 1e-9));
    }

    #[test]
    fn zero_operator_is_degenerate() {
        let model = HilbertModel::l2(3);
        let a = OperatorModel::zero(&model, &model);
        let seq = FrameSequence::from_columns(model, Mat::identity(3, 3)).unwrap();
        assert_eq!(weak_aframe_bound(&seq, &a).unwrap_err(), FrameError::DegenerateOperator);
    }

    #[test]
    fn dual_of_orthonormal_image_is_the_basis() {
        let (a, seq) = diag_instance(6);
        let dual = weak_a_dual(&seq, &a).unwrap();
        assert!((dual.vectors.vectors() - Mat::<c64>::identity(6, 6)).norm_max() <= 1e-9);
        assert!(dual.certificate_residual <= 1e-8);
        assert_eq!(dual.producer, Producer::WeakADualThm);
    }

    #[test]
    fn dual_of_frame_image_certifies_and_so_does_any_dual_frame() {
        let (a, g, f) = image_of_frame(17, 5, 8);
        let dual = weak_a_dual(&g, &a).unwrap();
        assert!(dual.certificate_residual <= 1e-8);
        let canonical = canonical_dual(&f).unwrap();
        assert!(verify_weak_duality(&g, &canonical, &a, 20).unwrap() <= 1e-8);
    }

    #[test]
    fn zeroed_dual_is_detected() {
        let (a, g, f) = image_of_frame(5, 5, 7);
        let zero = f.with_vectors(f.model().clone(), Mat::zeros(5, 7)).err();
        assert_eq!(zero, Some(FrameError::EmptySpan));
        let tiny = f.scaled(&vec![creal(1e-30); 7]).unwrap();
        let r = verify_weak_duality(&g, &tiny, &a, 10).unwrap();
        assert!(r > 0.9 && r <= 1.0 + 1e-9, "residual {r}");
    }

    #[test]
    fn factorization_fails_when_lower_bound_fails() {
        let mut rng = seeded(2);
        let model = HilbertModel::l2(5);
        let a = OperatorModel::from_matrix(&model, &model, random_matrix(&mut rng, 5, 5), "a").unwrap();
        let seq = FrameSequence::from_columns(model, random_matrix(&mut rng, 5, 3)).unwrap();
        assert_eq!(weak_aframe_bound(&seq, &a).unwrap().kind, BoundKind::BesselOnly);
        assert!(matches!(weak_a_dual(&seq, &a), Err(FrameError::FactorizationFailed { .. })));
        assert!(matches!(factorize_synthesis(&seq, &a), Err(FrameError::FactorizationFailed { .. })));
    }

    #[test]
    fn adjoint_decomposition_of_diagonal() {
        let (a, seq) = diag_instance(4);
        let dual = weak_a_dual(&seq, &a).unwrap();
        let u = HilbertModel::l2(4).unit_vector(2);
        let (v, r) = adjoint_decomposition(&seq, &dual.vectors, &a, &u).unwrap();
        assert!((v[2] - creal(3.0)).norm() <= 1e-12 && r <= 1e-12);
    }

    #[test]
    fn adjoint_decomposition_checks_domain() {
        let (a, g, f) = image_of_frame(8, 4, 6);
        let dual = canonical_dual(&f).unwrap();
        let q = a.adjoint_domain().basis();
        let mut rng = seeded(1);
        let outside = random_vector(&mut rng, 4);
        let inside = &q * random_vector(&mut rng, 3);
        assert!(matches!(
            adjoint_decomposition(&g, &dual, &a, &outside),
            Err(FrameError::DomainViolation { .. })
        ));
        let (_, r) = adjoint_decomposition(&g, &dual, &a, &inside).unwrap();
        assert!(r <= 1e-8);
    }

    #[test]
    fn interchange_examples() {
        let model = HilbertModel::l2(4);
        let mut rng = seeded(31);
        let f = FrameSequence::from_columns(model.clone(), random_matrix(&mut rng, 4, 7)).unwrap();
        let id = OperatorModel::identity(&model);
        let dual = canonical_dual(&f).unwrap();
        let h = interchange_dual(&f, &dual, &id).unwrap();
        assert!((h.vectors.vectors() - dual.vectors()).norm_max() <= 1e-12);
        assert!(h.certificate_residual <= 1e-9);

        let (a, seq) = diag_instance(5);
        let t = weak_a_dual(&seq, &a).unwrap();
        let h = interchange_dual(&seq, &t.vectors, &a).unwrap();
        for n in 0..5 {
            let want = 1.0 / (n + 1) as f64;
            assert!((h.vectors.vectors()[(n, n)] - creal(want)).norm() <= 1e-12);
        }
        assert!(h.certificate_residual <= 1e-12);
    }

    #[test]
    fn interchange_requires_surjectivity() {
        let model = HilbertModel::l2(3);
        let a = OperatorModel::diagonal(&model, &[1.0, 2.0, 0.0]);
        let seq = FrameSequence::from_columns(model.clone(), Mat::identity(3, 3)).unwrap();
        let dual = DualSequence::user(seq.clone());
        assert!(matches!(
            interchange_dual(&seq, &dual.vectors, &a),
            Err(FrameError::NotSurjective { .. })
        ));
    }

    #[test]
    fn synthesis_factorization_of_orthonormal_image() {
        let (a, seq) = diag_instance(5);
        let f = factorize_synthesis(&seq, &a).unwrap();
        assert!(f.residual <= 1e-10);
        assert!((f.r.matrix() - seq.vectors()).norm_max() == 0.0);
        let e = HilbertModel::l2(5).unit_vector(3);
        let coeffs = f.q.apply_matrix(&e);
        let want = analysis(&FrameSequence::from_columns(HilbertModel::l2(5), Mat::identity(5, 5)).unwrap(), &e)
            .unwrap();
        assert!((coeffs - want).norm_max() <= 1e-12);
    }

    #[test]
    fn synthesis_factorization_random_instance() {
        let (a, g, _) = image_of_frame(77, 8, 11);
        let f = factorize_synthesis(&g, &a).unwrap();
        assert!(f.residual <= 1e-8);
    }

    #[test]
    fn dual_ratio_collapses_like_inverse_square() {
        for n in [4, 8, 16] {
            let (a, seq) = diag_instance(n);
            let t = weak_a_dual(&seq, &a).unwrap();
            let r = dual_lower_ratio(&t.vectors, &a).unwrap();
            assert!((r - 1.0 / (n * n) as f64).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn strong_residual_bounded_by_weak(seed in any::<u64>(), d in 2usize..8, extra in 0usize..4) {
            let (a, g, _) = image_of_frame(seed, d, d + extra);
            let dual = weak_a_dual(&g, &a).unwrap();
            let weak = verify_weak_duality(&g, &dual.vectors, &a, 8).unwrap();
            let mut rng = seeded(seed.wrapping_add(1));
            let u = a.adjoint_domain().project(&random_vector(&mut rng, d));
            let (_, strong) = adjoint_decomposition(&g, &dual.vectors, &a, &u).unwrap();
            prop_assert!(strong <= weak + 1e-10 || strong <= 1e-9, "strong {} weak {}", strong, weak);
        }

        #[test]
        fn weak_bound_ignores_ordering(seed in any::<u64>(), d in 2usize..7, extra in 0usize..4) {
            let (a, g, _) = image_of_frame(seed, d, d + extra);
            let n = g.len();
            let perm: Vec<usize> = (0..n).map(|k| (k * 5 + 3) % n).collect();
            prop_assume!({ let mut p = perm.clone(); p.sort(); p.dedup(); p.len() == n });
            let x = weak_aframe_bound(&g, &a).unwrap().alpha;
            let y = weak_aframe_bound(&g.permuted(&perm).unwrap(), &a).unwrap().alpha;
            prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
        }
    }
}
