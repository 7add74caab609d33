//! K-frames relative to a bounded `K : J → H`, and A-frames measured in
//! the graph norm of a closed `A`.

use crate::error::{FrameError, Result};
use crate::linalg::{self, CMat, PencilBound, RCOND};
use crate::opmodel::OperatorModel;
use crate::seqops::{BoundKind, FrameBounds, FrameSequence, FRAME_TOL};
use crate::weakframes::{probe_set, DualSequence, Producer};

/// Relative residual above which `R(K) ⊆ R(D)` is declared false.
pub const RANGE_TOL: f64 = 1e-8;

/// Random test vectors added to the basis in certificates.
pub const CERT_TRIALS: usize = 100;

fn check_target(seq: &FrameSequence, k: &OperatorModel) -> Result<()> {
    if seq.model() != k.output_model() {
        return Err(FrameError::InvalidParameter(format!(
            "operator maps into `{}` but the sequence lives in `{}`",
            k.output_model().label(),
            seq.model().label()
        )));
    }
    Ok(())
}

fn bounds_from_pencil(pencil: PencilBound, beta: f64, kind: BoundKind) -> Result<FrameBounds> {
    let alpha = match pencil {
        PencilBound::Degenerate => return Err(FrameError::DegenerateOperator),
        other => other.alpha().unwrap_or(0.0),
    };
    let kind = if alpha > FRAME_TOL { kind } else { BoundKind::BesselOnly };
    Ok(FrameBounds { alpha, beta, kind })
}

/// Optimal `α, β` in `α‖K*f‖² ≤ Σ|⟨f, g_n⟩|² ≤ β‖f‖²`.
pub fn kframe_bounds(seq: &FrameSequence, k: &OperatorModel) -> Result<FrameBounds> {
    check_target(seq, k)?;
    let g = seq.whitened();
    let kstar: CMat = k.whitened_on_domain().adjoint().to_owned();
    let analysis: CMat = g.adjoint().to_owned();
    let pencil = linalg::lower_pencil_bound(analysis.as_ref(), kstar.as_ref())?;
    let beta = linalg::ThinSvd::new(g.as_ref())?.sigma_max().powi(2);
    bounds_from_pencil(pencil, beta, BoundKind::KFrame)
}

/// Largest relative residual of a column of `K` after projection onto
/// `R(D)`, and whether it passes [`RANGE_TOL`].
pub fn range_inclusion(k: &OperatorModel, seq: &FrameSequence) -> Result<(bool, f64)> {
    check_target(seq, k)?;
    let residual = column_leakage(&seq.whitened(), &k.whitened_on_domain())?;
    Ok((residual <= RANGE_TOL, residual))
}

fn column_leakage(d: &CMat, k: &CMat) -> Result<f64> {
    let u = linalg::range_basis(d.as_ref(), RCOND)?;
    let rest = k - &u * (u.adjoint() * k);
    let mut worst: f64 = 0.0;
    for j in 0..k.ncols() {
        let n = k.col(j).norm_l2();
        if n > 0.0 {
            worst = worst.max(rest.col(j).norm_l2() / n);
        }
    }
    Ok(worst)
}

/// Minimum-norm factor `M = D†K` and the K-dual `k_n = M*e_n` in `J`.
pub fn k_dual(seq: &FrameSequence, k: &OperatorModel) -> Result<DualSequence> {
    let bounds = kframe_bounds(seq, k)?;
    let (included, residual) = range_inclusion(k, seq)?;
    if !included {
        return Err(FrameError::RangeNotIncluded { residual });
    }
    if bounds.alpha <= FRAME_TOL {
        return Err(FrameError::NotAFrame { alpha: bounds.alpha });
    }
    let m = k_factor(seq, k)?;
    let j = k.input_model();
    let mh: CMat = m.adjoint().to_owned();
    let kvecs = j.unwhiten_rows(mh.as_ref());
    let vectors = seq.with_vectors(j.clone(), kvecs)?;
    let certificate_residual = k_expansion_residual(seq, &vectors, k, CERT_TRIALS)?;
    Ok(DualSequence { vectors, producer: Producer::KDualThm, certificate_residual, graph_space: false })
}

/// `D†K` in whitened coordinates (`N × dim J`).
pub fn k_factor(seq: &FrameSequence, k: &OperatorModel) -> Result<CMat> {
    check_target(seq, k)?;
    let khat = k.whitened();
    Ok(linalg::pinv(seq.whitened().as_ref(), RCOND)? * &khat)
}

/// `max ‖Kf − Σ⟨f, k_n⟩_J g_n‖ / ‖Kf‖` over a basis of `D(K)` and
/// `trials` random members.
pub fn k_expansion_residual(
    seq: &FrameSequence,
    kvecs: &FrameSequence,
    k: &OperatorModel,
    trials: usize,
) -> Result<f64> {
    check_target(seq, k)?;
    if kvecs.model() != k.input_model() || kvecs.len() != seq.len() {
        return Err(FrameError::InvalidParameter("companion does not match the operator".into()));
    }
    let probes = k.input_model().whiten_rows(probe_set(k.domain(), trials, 0x6b).as_ref());
    let lhs = k.whitened() * &probes;
    let rhs = seq.whitened() * (kvecs.whitened().adjoint() * &probes);
    Ok(worst_relative(&lhs, &rhs))
}

fn worst_relative(lhs: &CMat, rhs: &CMat) -> f64 {
    let err = lhs - rhs;
    let norms: Vec<f64> = (0..lhs.ncols()).map(|j| lhs.col(j).norm_l2()).collect();
    let floor = 1e-12 * norms.iter().cloned().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (j, &n) in norms.iter().enumerate() {
        if n > floor {
            worst = worst.max(err.col(j).norm_l2() / n);
        }
    }
    worst
}

/// Empirical bounds of a K-dual `{k_n} ⊂ J` against `K`, i.e. the optimal
/// constants in `α‖Kf‖² ≤ Σ|⟨f, k_n⟩|² ≤ β‖f‖²` over `f ∈ J`.
pub fn companion_bounds(kvecs: &FrameSequence, k: &OperatorModel) -> Result<FrameBounds> {
    kframe_bounds(kvecs, &k.adjoint())
}

/// Graph-space pieces: `B = ÂQ̂` on `D(A)` and the Cholesky factor of `I + BᴴB`.
struct GraphParts {
    b: CMat,
    chol: CMat,
}

fn graph_parts(a: &OperatorModel) -> Result<GraphParts> {
    let b = a.whitened_on_domain();
    let r = b.ncols();
    let mut h = b.adjoint() * &b;
    for i in 0..r {
        h[(i, i)] += linalg::creal(1.0);
    }
    let chol = linalg::cholesky_lower(h.as_ref())?;
    Ok(GraphParts { b, chol })
}

/// Optimal `α, β` in `α‖A♯f‖²_A ≤ Σ|⟨f, g_n⟩|² ≤ β‖f‖²`, where `A♯` is the
/// adjoint of `A` viewed as a bounded map out of the graph space `H_A`.
pub fn aframe_bounds_graph(seq: &FrameSequence, a: &OperatorModel) -> Result<FrameBounds> {
    check_target(seq, a)?;
    let parts = graph_parts(a)?;
    // ‖A♯f‖²_A = ‖L⁻¹Bᴴ f‖² with LLᴴ = I + BᴴB.
    let bh: CMat = parts.b.adjoint().to_owned();
    let g = solve_lower(&parts.chol, &bh);
    let analysis: CMat = seq.whitened().adjoint().to_owned();
    let pencil = linalg::lower_pencil_bound(analysis.as_ref(), g.as_ref())?;
    let beta = linalg::ThinSvd::new(seq.whitened().as_ref())?.sigma_max().powi(2);
    bounds_from_pencil(pencil, beta, BoundKind::GraphAFrame)
}

fn solve_lower(l: &CMat, rhs: &CMat) -> CMat {
    let mut x = rhs.clone();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l.as_ref(), x.as_mut(), faer::Par::Seq);
    x
}

/// A-dual in the graph space: `Af = Σ⟨f, k_n⟩_A g_n` for `f ∈ D(A)`.
pub fn a_dual_graph(seq: &FrameSequence, a: &OperatorModel) -> Result<DualSequence> {
    let bounds = aframe_bounds_graph(seq, a)?;
    let d = seq.whitened();
    let parts = graph_parts(a)?;
    let residual = column_leakage(&d, &parts.b)?;
    if residual > RANGE_TOL {
        return Err(FrameError::RangeNotIncluded { residual });
    }
    if bounds.alpha <= FRAME_TOL {
        return Err(FrameError::NotAFrame { alpha: bounds.alpha });
    }
    let m = linalg::pinv(d.as_ref(), RCOND)? * &parts.b;
    let mh: CMat = m.adjoint().to_owned();
    let mut h = parts.b.adjoint() * &parts.b;
    for i in 0..h.nrows() {
        h[(i, i)] += linalg::creal(1.0);
    }
    let kappa = linalg::hpd_solve(h.as_ref(), mh.as_ref())?;
    let full = if a.domain().is_full() { kappa } else { a.domain().whitened_basis() * &kappa };
    let input = a.input_model();
    let vectors = seq.with_vectors(input.clone(), input.unwhiten_rows(full.as_ref()))?;
    let certificate_residual = graph_expansion_residual(seq, &vectors, a, CERT_TRIALS)?;
    Ok(DualSequence { vectors, producer: Producer::KDualThm, certificate_residual, graph_space: true })
}

/// `max ‖Af − Σ⟨f, k_n⟩_A g_n‖ / ‖Af‖` over a basis of `D(A)` and `trials`
/// random members, with `⟨f, k⟩_A = ⟨f, k⟩ + ⟨Af, Ak⟩`.
pub fn graph_expansion_residual(
    seq: &FrameSequence,
    kvecs: &FrameSequence,
    a: &OperatorModel,
    trials: usize,
) -> Result<f64> {
    check_target(seq, a)?;
    if kvecs.model() != a.input_model() || kvecs.len() != seq.len() {
        return Err(FrameError::InvalidParameter("companion does not match the operator".into()));
    }
    let violation = (0..kvecs.len())
        .map(|n| a.domain().violation(&kvecs.column(n)))
        .fold(0.0, f64::max);
    if violation > crate::hilbert::DOMAIN_TOL {
        return Err(FrameError::DomainViolation { violation });
    }
    let probes = a.input_model().whiten_rows(probe_set(a.domain(), trials, 0x61).as_ref());
    let ahat = a.whitened();
    let khat = kvecs.whitened();
    let af = &ahat * &probes;
    let ak = &ahat * &khat;
    let coeffs = khat.adjoint() * &probes + ak.adjoint() * &af;
    let rhs = seq.whitened() * coeffs;
    Ok(worst_relative(&af, &rhs))
}

/// Matrix `D·D†K` residual used to cross-check [`range_inclusion`].
pub fn factorization_defect(k: &OperatorModel, seq: &FrameSequence) -> Result<f64> {
    let khat = k.whitened();
    let m = k_factor(seq, k)?;
    let nk = linalg::fro_norm(khat.as_ref());
    let defect = linalg::op_norm((seq.whitened() * m - &khat).as_ref())?;
    Ok(if nk > 0.0 { defect / linalg::op_norm(khat.as_ref())? } else { defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;
    use crate::hilbert::HilbertModel;
    use crate::linalg::creal;
    use crate::sampling::{random_matrix, random_vector, seeded};
    use crate::seqops::{canonical_dual, frame_bounds};
    use proptest::prelude::*;

    fn real(rows: &[&[f64]]) -> CMat {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| creal(rows[i][j]))
    }

    fn seq(model: &HilbertModel, m: CMat) -> FrameSequence {
        FrameSequence::from_columns(model.clone(), m).unwrap()
    }

    #[test]
    fn projection_onto_first_axis() {
        let m = HilbertModel::l2(2);
        let k = OperatorModel::from_matrix(&m, &m, real(&[&[1.0, 0.0], &[0.0, 0.0]]), "P").unwrap();
        let s = seq(&m, real(&[&[1.0], &[0.0]]));
        let b = kframe_bounds(&s, &k).unwrap();
        assert!((b.alpha - 1.0).abs() < 1e-12 && (b.beta - 1.0).abs() < 1e-12);
        assert_eq!(b.kind, BoundKind::KFrame);
    }

    #[test]
    fn diagonal_k_against_basis() {
        let m = HilbertModel::l2(2);
        let k = OperatorModel::diagonal(&m, &[1.0, 2.0]);
        let b = kframe_bounds(&seq(&m, Mat::identity(2, 2)), &k).unwrap();
        assert!((b.alpha - 0.25).abs() < 1e-12 && (b.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_k_is_degenerate() {
        let m = HilbertModel::l2(3);
        let k = OperatorModel::zero(&m, &m);
        assert_eq!(kframe_bounds(&seq(&m, Mat::identity(3, 3)), &k), Err(FrameError::DegenerateOperator));
        assert!(matches!(k_dual(&seq(&m, Mat::identity(3, 3)), &k), Err(FrameError::DegenerateOperator)));
    }

    #[test]
    fn kernel_mixing_forces_zero() {
        // S = [[1,1],[1,1]] annihilates (1,-1), where K* = e1ᵀ does not vanish.
        let m = HilbertModel::l2(2);
        let j = HilbertModel::l2(1);
        let k = OperatorModel::from_matrix(&j, &m, real(&[&[1.0], &[0.0]]), "K").unwrap();
        let s = seq(&m, real(&[&[1.0], &[1.0]]));
        let b = kframe_bounds(&s, &k).unwrap();
        assert_eq!(b.alpha, 0.0);
        assert_eq!(b.kind, BoundKind::BesselOnly);
        assert!(!range_inclusion(&k, &s).unwrap().0);
    }

    #[test]
    fn range_inclusion_examples() {
        let m = HilbertModel::l2(2);
        let id = OperatorModel::identity(&m);
        let (ok, r) = range_inclusion(&id, &seq(&m, real(&[&[1.0], &[0.0]]))).unwrap();
        assert!(!ok && (r - 1.0).abs() < 1e-12);
        let mut rng = seeded(4);
        let spanning = seq(&m, random_matrix(&mut rng, 2, 5));
        let k = OperatorModel::from_matrix(&m, &m, random_matrix(&mut rng, 2, 2), "K").unwrap();
        assert!(range_inclusion(&k, &spanning).unwrap().0);
    }

    #[test]
    fn k_dual_of_frame_and_alternative() {
        let mut rng = seeded(12);
        let h = HilbertModel::new(vec![0.5, 1.0, 2.0, 0.25], "w").unwrap();
        let j = HilbertModel::l2(3);
        let k = OperatorModel::from_matrix(&j, &h, random_matrix(&mut rng, 4, 3), "K").unwrap();
        let s = seq(&h, random_matrix(&mut rng, 4, 7));
        let dual = k_dual(&s, &k).unwrap();
        assert!(dual.certificate_residual <= 1e-9);
        let v = canonical_dual(&s).unwrap();
        let alt = v.with_vectors(j.clone(), k.adjoint().matrix() * v.vectors()).unwrap();
        assert!(k_expansion_residual(&s, &alt, &k, 50).unwrap() <= 1e-9);
    }

    #[test]
    fn k_dual_of_image_frame() {
        let mut rng = seeded(99);
        let j = HilbertModel::l2(3);
        let h = HilbertModel::l2(5);
        let k = OperatorModel::from_matrix(&j, &h, random_matrix(&mut rng, 5, 3), "K").unwrap();
        let f = seq(&j, random_matrix(&mut rng, 3, 6));
        let g = seq(&h, k.matrix() * f.vectors());
        let dual = k_dual(&g, &k).unwrap();
        assert!(dual.certificate_residual <= 1e-9);
        let any = canonical_dual(&f).unwrap();
        assert!(k_expansion_residual(&g, &any, &k, 50).unwrap() <= 1e-9);
        let m = k_factor(&g, &k).unwrap();
        let bessel = frame_bounds(&dual.vectors).unwrap().beta;
        let mm = linalg::op_norm(m.as_ref()).unwrap().powi(2);
        assert!((bessel - mm).abs() <= 1e-10 * mm.max(1.0));
    }

    #[test]
    fn k_dual_rejects_missing_range() {
        let m = HilbertModel::l2(3);
        let k = OperatorModel::identity(&m);
        let s = seq(&m, real(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]));
        assert!(matches!(k_dual(&s, &k), Err(FrameError::RangeNotIncluded { .. })));
    }

    #[test]
    fn graph_bounds_against_dense_oracle() {
        // A = diag(1, 2), seq = basis: ‖A♯f‖²_A = Σ a²/(1+a²)|f|², so α = min (1+a²)/a².
        let m = HilbertModel::l2(2);
        let a = OperatorModel::diagonal(&m, &[1.0, 2.0]);
        let b = aframe_bounds_graph(&seq(&m, Mat::identity(2, 2)), &a).unwrap();
        assert!((b.alpha - 1.25).abs() <= 1e-10);
        assert_eq!(b.kind, BoundKind::GraphAFrame);
        let kb = kframe_bounds(&seq(&m, Mat::identity(2, 2)), &a).unwrap();
        assert!((kb.alpha - 0.25).abs() <= 1e-10);
    }

    #[test]
    fn graph_dual_of_basis() {
        let n = 6;
        let m = HilbertModel::l2(n);
        let entries: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let a = OperatorModel::diagonal(&m, &entries);
        let s = seq(&m, Mat::identity(n, n));
        assert!(aframe_bounds_graph(&s, &a).unwrap().alpha > 0.0);
        let dual = a_dual_graph(&s, &a).unwrap();
        assert!(dual.graph_space);
        for (k, &x) in entries.iter().enumerate() {
            assert!((dual.vectors.vectors()[(k, k)] - creal(x / (1.0 + x * x))).norm() <= 1e-12);
        }
        assert!(dual.certificate_residual <= 1e-12);
    }

    #[test]
    fn graph_dual_respects_domain() {
        let mut rng = seeded(8);
        let m = HilbertModel::l2(6);
        let dom = crate::hilbert::orthonormalize(random_matrix(&mut rng, 6, 4).as_ref(), &m).unwrap();
        let a = OperatorModel::from_matrix(&m, &m, random_matrix(&mut rng, 6, 6), "A")
            .unwrap()
            .with_domain(dom)
            .unwrap();
        let s = seq(&m, random_matrix(&mut rng, 6, 9));
        let dual = a_dual_graph(&s, &a).unwrap();
        assert!(dual.certificate_residual <= 1e-9);
        for n in 0..9 {
            assert!(a.domain().contains(&dual.vectors.column(n)));
        }
    }

    #[test]
    fn oracle_upper_bounds_alpha() {
        let mut rng = seeded(1234);
        let m = HilbertModel::l2(3);
        let k = OperatorModel::from_matrix(&m, &m, random_matrix(&mut rng, 3, 3), "K").unwrap();
        let s = seq(&m, random_matrix(&mut rng, 3, 4));
        let alpha = kframe_bounds(&s, &k).unwrap().alpha;
        let kstar = k.adjoint();
        let mut best = f64::INFINITY;
        for _ in 0..20000 {
            let f = random_vector(&mut rng, 3);
            let num = crate::seqops::coefficient_energy(&s, &f).unwrap();
            let den = kstar.apply_matrix(&f).squared_norm_l2();
            best = best.min(num / den);
        }
        assert!(alpha <= best * (1.0 + 1e-12) && best <= 1.02 * alpha, "{alpha} vs {best}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn kframe_equivalence(seed in any::<u64>(), d in 2usize..9, dj in 1usize..6, extra in 0usize..6) {
            let mut rng = seeded(seed);
            let h = HilbertModel::l2(d);
            let j = HilbertModel::l2(dj);
            let rank = 1 + (seed as usize) % d;
            let k = OperatorModel::from_matrix(&j, &h, random_matrix(&mut rng, d, dj), "K").unwrap();
            let cols = if seed % 3 == 0 { rank } else { rank + extra };
            let s = seq(&h, random_matrix(&mut rng, d, cols));
            let bounds = kframe_bounds(&s, &k).unwrap();
            match k_dual(&s, &k) {
                Ok(dual) => {
                    prop_assert!(dual.certificate_residual <= 1e-8);
                    prop_assert!(bounds.alpha > 0.0);
                }
                Err(_) => prop_assert!(bounds.alpha <= FRAME_TOL),
            }
            if bounds.alpha > FRAME_TOL {
                prop_assert!(k_dual(&s, &k).is_ok());
            }
        }

        #[test]
        fn range_inclusion_matches_factorization(seed in any::<u64>(), d in 2usize..8, cols in 1usize..10) {
            let mut rng = seeded(seed);
            let h = HilbertModel::l2(d);
            let k = OperatorModel::from_matrix(&h, &h, random_matrix(&mut rng, d, d), "K").unwrap();
            let s = seq(&h, random_matrix(&mut rng, d, cols));
            let (ok, _) = range_inclusion(&k, &s).unwrap();
            let defect = factorization_defect(&k, &s).unwrap();
            prop_assert_eq!(ok, defect <= 1e-8);
        }
    }
}
