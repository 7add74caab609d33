//! Analysis, synthesis, frame and Gram operators of a finite sequence.

use faer::{Col, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::hilbert::{inner_unchecked, HilbertModel};
use crate::linalg::{self, c64, CMat, CVec};
use crate::opmodel::OperatorModel;

/// `λ_min(S) / λ_max(S)` at or below this counts as "not a frame".
pub const FRAME_TOL: f64 = 1e-8;

/// A finite family `{g_n}` stored as the columns of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    model: HilbertModel,
    vectors: CMat,
    labels: Vec<i64>,
    pairs: Option<Vec<(i64, i64)>>,
}

impl FrameSequence {
    pub fn new(model: HilbertModel, vectors: CMat, labels: Vec<i64>) -> Result<Self> {
        model.check_len(vectors.nrows())?;
        let n = vectors.ncols();
        if n == 0 {
            return Err(FrameError::InvalidParameter("a sequence needs at least one vector".into()));
        }
        if labels.len() != n {
            return Err(FrameError::InvalidDimension { expected: n, got: labels.len() });
        }
        let mut any_nonzero = false;
        for j in 0..n {
            for i in 0..vectors.nrows() {
                let z = vectors[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(FrameError::InvalidParameter(format!("vector {j} has a non-finite entry")));
                }
                any_nonzero |= z.re != 0.0 || z.im != 0.0;
            }
        }
        if !any_nonzero {
            return Err(FrameError::EmptySpan);
        }
        Ok(Self { model, vectors, labels, pairs: None })
    }

    /// Labels `1..=N`.
    pub fn from_columns(model: HilbertModel, vectors: CMat) -> Result<Self> {
        let n = vectors.ncols() as i64;
        Self::new(model, vectors, (1..=n).collect())
    }

    /// Record a two-index labeling of a flattened `ℤ²` system.
    pub fn with_pairs(mut self, pairs: Vec<(i64, i64)>) -> Result<Self> {
        if pairs.len() != self.len() {
            return Err(FrameError::InvalidDimension { expected: self.len(), got: pairs.len() });
        }
        self.pairs = Some(pairs);
        Ok(self)
    }

    pub fn model(&self) -> &HilbertModel {
        &self.model
    }

    pub fn vectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn pairs(&self) -> Option<&[(i64, i64)]> {
        self.pairs.as_deref()
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, n: usize) -> CVec {
        self.vectors.col(n).to_owned()
    }

    /// `W^{1/2} G`: columns in whitened coordinates.
    pub fn whitened(&self) -> CMat {
        self.model.whiten_rows(self.vectors.as_ref())
    }

    /// Multiply every `g_n` by `c_n`.
    pub fn scaled(&self, coeffs: &[c64]) -> Result<Self> {
        if coeffs.len() != self.len() {
            return Err(FrameError::InvalidDimension { expected: self.len(), got: coeffs.len() });
        }
        let v = Mat::from_fn(self.vectors.nrows(), self.len(), |i, j| self.vectors[(i, j)] * coeffs[j]);
        let mut out = Self::new(self.model.clone(), v, self.labels.clone())?;
        out.pairs = self.pairs.clone();
        Ok(out)
    }

    /// Reorder columns: position `k` of the result holds column `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(FrameError::InvalidParameter("not a permutation".into()));
            }
        }
        if perm.len() != n {
            return Err(FrameError::InvalidDimension { expected: n, got: perm.len() });
        }
        let v = Mat::from_fn(self.vectors.nrows(), n, |i, k| self.vectors[(i, perm[k])]);
        let labels = perm.iter().map(|&p| self.labels[p]).collect();
        let mut out = Self::new(self.model.clone(), v, labels)?;
        out.pairs = self.pairs.as_ref().map(|p| perm.iter().map(|&k| p[k]).collect());
        Ok(out)
    }

    /// Same labels, new vectors in `model`.
    pub fn with_vectors(&self, model: HilbertModel, vectors: CMat) -> Result<Self> {
        let mut out = Self::new(model, vectors, self.labels.clone())?;
        out.pairs = self.pairs.clone();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Frame,
    BesselOnly,
    KFrame,
    WeakAFrame,
    GraphAFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub alpha: f64,
    pub beta: f64,
    pub kind: BoundKind,
}

impl FrameBounds {
    pub fn ratio(&self) -> f64 {
        if self.beta > 0.0 {
            self.alpha / self.beta
        } else {
            0.0
        }
    }
}

/// `(⟨f, g_n⟩)_n`.
pub fn analysis(seq: &FrameSequence, f: &CVec) -> Result<CVec> {
    seq.model.check_len(f.nrows())?;
    let wf = Col::from_fn(f.nrows(), |i| f[i] * seq.model.weights()[i]);
    Ok(seq.vectors.adjoint() * &wf)
}

/// `Σ c_n g_n`.
pub fn synthesis(seq: &FrameSequence, c: &CVec) -> Result<CVec> {
    if c.nrows() != seq.len() {
        return Err(FrameError::InvalidDimension { expected: seq.len(), got: c.nrows() });
    }
    Ok(&seq.vectors * c)
}

/// `S = DC`, as an operator on the sequence's model.
pub fn frame_operator(seq: &FrameSequence) -> OperatorModel {
    let w = seq.model.weights();
    let gw = Mat::from_fn(seq.len(), seq.model.dim(), |n, i| seq.vectors[(i, n)].conj() * w[i]);
    let s = &seq.vectors * gw;
    OperatorModel::from_matrix(&seq.model, &seq.model, s, "S").expect("square")
}

/// `⟨g_m, g_n⟩` arranged as `Gᴴ W G`.
pub fn gram(seq: &FrameSequence) -> CMat {
    let g = seq.whitened();
    g.adjoint() * &g
}

/// Eigenvalues of the frame operator, ascending.
pub fn frame_spectrum(seq: &FrameSequence) -> Result<Vec<f64>> {
    let d = seq.model.dim();
    let n = seq.len();
    let g = seq.whitened();
    if n < d {
        // Nonzero spectra of GGᴴ and GᴴG agree; pad the kernel with zeros.
        let small = linalg::hermitian_eigenvalues((g.adjoint() * &g).as_ref())?;
        let mut all = vec![0.0; d - n];
        all.extend(small.into_iter().map(|x| x.max(0.0)));
        Ok(all)
    } else {
        linalg::hermitian_eigenvalues((&g * g.adjoint()).as_ref())
    }
}

pub fn frame_bounds(seq: &FrameSequence) -> Result<FrameBounds> {
    frame_bounds_with(seq, FRAME_TOL)
}

/// Optimal frame bounds `λ_min(S)`, `λ_max(S)`; `tol` is relative to `β`.
pub fn frame_bounds_with(seq: &FrameSequence, tol: f64) -> Result<FrameBounds> {
    let spec = frame_spectrum(seq)?;
    let alpha = spec.first().copied().unwrap_or(0.0).max(0.0);
    let beta = spec.last().copied().unwrap_or(0.0).max(0.0);
    let kind = if beta > 0.0 && alpha > tol * beta { BoundKind::Frame } else { BoundKind::BesselOnly };
    Ok(FrameBounds { alpha, beta, kind })
}

/// Unit eigenvectors of `S` attaining `α` and `β`.
pub fn extremal_vectors(seq: &FrameSequence) -> Result<(CVec, CVec)> {
    let g = seq.whitened();
    let (_, v) = linalg::hermitian_eigen((&g * g.adjoint()).as_ref())?;
    let d = v.ncols();
    let lo = seq.model.unwhiten(&v.col(0).to_owned());
    let hi = seq.model.unwhiten(&v.col(d - 1).to_owned());
    Ok((lo, hi))
}

/// `Σ |⟨f, g_n⟩|²`.
pub fn coefficient_energy(seq: &FrameSequence, f: &CVec) -> Result<f64> {
    Ok(analysis(seq, f)?.squared_norm_l2())
}

/// `{S⁻¹ g_n}`.
pub fn canonical_dual(seq: &FrameSequence) -> Result<FrameSequence> {
    let b = frame_bounds(seq)?;
    if b.kind != BoundKind::Frame {
        return Err(FrameError::NotAFrame { alpha: b.alpha });
    }
    let g = seq.whitened();
    let s = &g * g.adjoint();
    let h = linalg::hpd_solve(s.as_ref(), g.as_ref())?;
    seq.with_vectors(seq.model.clone(), seq.model.unwhiten_rows(h.as_ref()))
}

/// `{S† g_n}`: the canonical dual of `{g_n}` as a frame for its span.
pub fn span_dual(seq: &FrameSequence) -> Result<FrameSequence> {
    let p = linalg::pinv(seq.whitened().as_ref(), linalg::RCOND)?;
    let t: CMat = p.adjoint().to_owned();
    seq.with_vectors(seq.model.clone(), seq.model.unwhiten_rows(t.as_ref()))
}

/// `Σ ⟨f, h_n⟩ g_n` and its relative distance from `f`.
pub fn reconstruct(seq: &FrameSequence, dual: &FrameSequence, f: &CVec) -> Result<(CVec, f64)> {
    if dual.len() != seq.len() {
        return Err(FrameError::InvalidDimension { expected: seq.len(), got: dual.len() });
    }
    if dual.model != seq.model {
        return Err(FrameError::InvalidParameter("sequence and dual live in different models".into()));
    }
    let r = synthesis(seq, &analysis(dual, f)?)?;
    let err = &r - f;
    let nf = inner_unchecked(&seq.model, f, f).re.sqrt();
    let ne = inner_unchecked(&seq.model, &err, &err).re.sqrt();
    Ok((r, if nf > 0.0 { ne / nf } else { ne }))
}

/// `Σ_{k ≤ upto} c_k g_k` (1-based `upto`).
pub fn partial_synthesis(seq: &FrameSequence, c: &CVec, upto: usize) -> Result<CVec> {
    if c.nrows() != seq.len() {
        return Err(FrameError::InvalidDimension { expected: seq.len(), got: c.nrows() });
    }
    if upto == 0 || upto > seq.len() {
        return Err(FrameError::InvalidIndex { index: upto, len: seq.len() });
    }
    let head = seq.vectors.get(.., 0..upto);
    Ok(head * c.get(0..upto))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::inner;
    use crate::linalg::creal;
    use crate::sampling::{random_matrix, random_vector, seeded};
    use proptest::prelude::*;

    fn real_cols(d: usize, cols: &[&[f64]]) -> CMat {
        Mat::from_fn(d, cols.len(), |i, j| creal(cols[j][i]))
    }

    fn basis(d: usize) -> FrameSequence {
        FrameSequence::from_columns(HilbertModel::l2(d), Mat::identity(d, d)).unwrap()
    }

    fn doubled() -> FrameSequence {
        let v = real_cols(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        FrameSequence::from_columns(HilbertModel::l2(2), v).unwrap()
    }

    fn cvec(xs: &[f64]) -> CVec {
        Col::from_fn(xs.len(), |i| creal(xs[i]))
    }

    fn random_seq(seed: u64, d: usize, n: usize) -> FrameSequence {
        let mut rng = seeded(seed);
        FrameSequence::from_columns(HilbertModel::l2(d), random_matrix(&mut rng, d, n)).unwrap()
    }

    #[test]
    fn analysis_examples() {
        assert_eq!(analysis(&basis(3), &cvec(&[1.0, 2.0, 3.0])).unwrap(), cvec(&[1.0, 2.0, 3.0]));
        let f = Col::from_fn(2, |i| [c64::new(0.5, 1.0), c64::new(-2.0, 0.25)][i]);
        let c = analysis(&doubled(), &f).unwrap();
        assert_eq!((c[0], c[1], c[2]), (f[0], f[0], f[1]));
    }

    #[test]
    fn analysis_dimension_mismatch() {
        assert_eq!(
            analysis(&basis(3), &cvec(&[1.0])).unwrap_err(),
            FrameError::InvalidDimension { expected: 3, got: 1 }
        );
        assert!(synthesis(&basis(3), &cvec(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn synthesis_examples() {
        assert_eq!(synthesis(&basis(3), &cvec(&[1.0, 2.0, 3.0])).unwrap(), cvec(&[1.0, 2.0, 3.0]));
        assert_eq!(synthesis(&basis(3), &cvec(&[0.0; 3])).unwrap(), cvec(&[0.0; 3]));
    }

    #[test]
    fn synthesis_matches_loop() {
        let mut rng = seeded(4);
        let seq = random_seq(4, 8, 16);
        let c = random_vector(&mut rng, 16);
        let fast = synthesis(&seq, &c).unwrap();
        for i in 0..8 {
            let mut acc = creal(0.0);
            for n in 0..16 {
                acc += c[n] * seq.vectors()[(i, n)];
            }
            assert!((acc - fast[i]).norm() <= 1e-12);
        }
    }

    #[test]
    fn frame_operator_examples() {
        let s = frame_operator(&basis(3));
        assert_eq!(s.matrix(), &Mat::<c64>::identity(3, 3));
        let s = frame_operator(&doubled());
        assert_eq!(s.matrix(), &real_cols(2, &[&[2.0, 0.0], &[0.0, 1.0]]));
    }

    #[test]
    fn frame_operator_is_analysis_then_synthesis() {
        let model = HilbertModel::new(vec![0.5, 1.0, 2.0, 0.7], "w").unwrap();
        let mut rng = seeded(8);
        let seq = FrameSequence::from_columns(model.clone(), random_matrix(&mut rng, 4, 6)).unwrap();
        let s = frame_operator(&seq);
        for i in 0..4 {
            let e = model.unit_vector(i);
            let via = synthesis(&seq, &analysis(&seq, &e).unwrap()).unwrap();
            assert!((s.apply_matrix(&e) - via).norm_max() <= 1e-12);
        }
    }

    #[test]
    fn bounds_examples() {
        let b = frame_bounds(&basis(3)).unwrap();
        assert_eq!((b.alpha, b.beta, b.kind), (1.0, 1.0, BoundKind::Frame));
        let b = frame_bounds(&doubled()).unwrap();
        assert!((b.alpha - 1.0).abs() < 1e-15 && (b.beta - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mercedes_benz_is_tight() {
        let angles = [90.0f64, 210.0, 330.0];
        let v = Mat::from_fn(2, 3, |i, j| {
            let t = angles[j].to_radians();
            creal(if i == 0 { t.cos() } else { t.sin() })
        });
        let b = frame_bounds(&FrameSequence::from_columns(HilbertModel::l2(2), v).unwrap()).unwrap();
        assert!((b.alpha - 1.5).abs() <= 1e-10 && (b.beta - 1.5).abs() <= 1e-10);
    }

    #[test]
    fn canonical_dual_examples() {
        let d = canonical_dual(&basis(3)).unwrap();
        assert!((d.vectors() - basis(3).vectors()).norm_max() < 1e-15);
        let d = canonical_dual(&doubled()).unwrap();
        let want = real_cols(2, &[&[0.5, 0.0], &[0.5, 0.0], &[0.0, 1.0]]);
        assert!((d.vectors() - &want).norm_max() < 1e-15);
    }

    #[test]
    fn canonical_dual_rejects_non_frames() {
        let v = real_cols(2, &[&[1.0, 0.0]]);
        let seq = FrameSequence::from_columns(HilbertModel::l2(2), v).unwrap();
        assert!(matches!(canonical_dual(&seq), Err(FrameError::NotAFrame { .. })));
    }

    #[test]
    fn reconstruct_examples() {
        let (_, r) = reconstruct(&basis(4), &basis(4), &cvec(&[1.0, -2.0, 0.5, 3.0])).unwrap();
        assert!(r <= 1e-14);
        let model = HilbertModel::new(vec![0.1, 0.2, 0.3], "w").unwrap();
        let mut rng = seeded(12);
        let seq = FrameSequence::from_columns(model, random_matrix(&mut rng, 3, 7)).unwrap();
        let dual = canonical_dual(&seq).unwrap();
        let (_, r) = reconstruct(&seq, &dual, &random_vector(&mut rng, 3)).unwrap();
        assert!(r <= 1e-8);
        assert!(reconstruct(&seq, &basis(3), &random_vector(&mut rng, 3)).is_err());
    }

    #[test]
    fn partial_synthesis_edges() {
        let seq = random_seq(2, 3, 5);
        let c = cvec(&[2.0, 1.0, 0.0, -1.0, 4.0]);
        let first = partial_synthesis(&seq, &c, 1).unwrap();
        assert!((first - seq.column(0) * faer::Scale(creal(2.0))).norm_max() < 1e-15);
        assert_eq!(partial_synthesis(&seq, &c, 5).unwrap(), synthesis(&seq, &c).unwrap());
        assert_eq!(partial_synthesis(&seq, &c, 0).unwrap_err(), FrameError::InvalidIndex { index: 0, len: 5 });
        assert_eq!(partial_synthesis(&seq, &c, 6).unwrap_err(), FrameError::InvalidIndex { index: 6, len: 5 });
    }

    #[test]
    fn empty_or_degenerate_sequences_rejected() {
        assert!(FrameSequence::from_columns(HilbertModel::l2(2), Mat::zeros(2, 0)).is_err());
        assert_eq!(
            FrameSequence::from_columns(HilbertModel::l2(2), Mat::zeros(2, 3)).unwrap_err(),
            FrameError::EmptySpan
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn analysis_is_adjoint_of_synthesis(seed in any::<u64>(), d in 1usize..10, n in 1usize..14) {
            let mut rng = seeded(seed);
            let weights: Vec<f64> = (0..d).map(|i| 0.25 + (i as f64 * 0.37) % 2.0).collect();
            let model = HilbertModel::new(weights, "w").unwrap();
            let seq = FrameSequence::from_columns(model.clone(), random_matrix(&mut rng, d, n)).unwrap();
            let f = random_vector(&mut rng, d);
            let c = random_vector(&mut rng, n);
            let lhs = (c.adjoint() * analysis(&seq, &f).unwrap()).conj();
            let lhs = c64::new(lhs.re, -lhs.im);
            let rhs = inner(&model, &f, &synthesis(&seq, &c).unwrap()).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn bounds_are_attained(seed in any::<u64>(), d in 1usize..8, extra in 0usize..6) {
            let seq = random_seq(seed, d, d + extra);
            let b = frame_bounds(&seq).unwrap();
            let (lo, hi) = extremal_vectors(&seq).unwrap();
            prop_assert!((coefficient_energy(&seq, &lo).unwrap() - b.alpha).abs() <= 1e-10 * b.beta.max(1.0));
            prop_assert!((coefficient_energy(&seq, &hi).unwrap() - b.beta).abs() <= 1e-10 * b.beta.max(1.0));
            prop_assert!(b.alpha <= b.beta + 1e-12);
        }

        #[test]
        fn gram_and_frame_spectra_agree(seed in any::<u64>(), d in 1usize..8, n in 1usize..12) {
            let seq = random_seq(seed, d, n);
            let mut g = linalg::hermitian_eigenvalues(gram(&seq).as_ref()).unwrap();
            let s = frame_operator(&seq);
            let mut f = linalg::hermitian_eigenvalues(s.whitened().as_ref()).unwrap();
            let scale = f.last().copied().unwrap_or(1.0).max(1.0);
            g.retain(|x| *x > 1e-9 * scale);
            f.retain(|x| *x > 1e-9 * scale);
            prop_assert_eq!(g.len(), f.len());
            for (a, b) in g.iter().zip(&f) {
                prop_assert!((a - b).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn double_dual_returns_sequence(seed in any::<u64>(), d in 1usize..7, extra in 0usize..5) {
            let seq = random_seq(seed, d, d + extra);
            prop_assume!(frame_bounds(&seq).unwrap().ratio() > 1e-3);
            let back = canonical_dual(&canonical_dual(&seq).unwrap()).unwrap();
            prop_assert!((back.vectors() - seq.vectors()).norm_max() <= 1e-8 * seq.vectors().norm_max());
        }

        #[test]
        fn bounds_ignore_ordering(seed in any::<u64>(), d in 1usize..7, n in 1usize..10) {
            let seq = random_seq(seed, d, n);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.reverse();
            perm.rotate_left((seed % n as u64) as usize);
            let a = frame_bounds(&seq).unwrap();
            let b = frame_bounds(&seq.permuted(&perm).unwrap()).unwrap();
            prop_assert!((a.alpha - b.alpha).abs() <= 1e-10 * a.beta.max(1.0));
            prop_assert!((a.beta - b.beta).abs() <= 1e-10 * a.beta.max(1.0));
        }
    }
}
