#![allow(dead_code)]

use faer::Mat;
use opframe::hilbert::{orthonormalize, HilbertModel};
use opframe::linalg::{self, c64, CMat};
use opframe::sampling::random_matrix;
use opframe::{FrameSequence, OperatorModel};
use rand::Rng;

/// `Cᵈ` with weights drawn from `[0.25, 4)`.
pub fn weighted_model(rng: &mut impl Rng, d: usize) -> HilbertModel {
    let w = (0..d).map(|_| 0.25 * 16f64.powf(rng.gen::<f64>())).collect();
    HilbertModel::new(w, "weighted").unwrap()
}

/// Random `rows × cols` matrix of the given rank.
pub fn rank_matrix(rng: &mut impl Rng, rows: usize, cols: usize, rank: usize) -> CMat {
    if rank == 0 {
        return Mat::zeros(rows, cols);
    }
    random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols)
}

pub fn seq(model: &HilbertModel, m: CMat) -> FrameSequence {
    FrameSequence::from_columns(model.clone(), m).unwrap()
}

/// Remove from every column of `m` its component along `v`, in the inner
/// product of `model`.
pub fn orthogonal_to(model: &HilbertModel, m: &CMat, v: &opframe::linalg::CVec) -> CMat {
    let vw = model.whiten(v);
    let nv = vw.norm_l2();
    let vw = Mat::from_fn(vw.nrows(), 1, |i, _| vw[i] / nv);
    let mw = model.whiten_rows(m.as_ref());
    let proj = &vw * (vw.adjoint() * &mw);
    model.unwhiten_rows((&mw - proj).as_ref())
}

/// Random operator on `model` whose adjoint domain is a random hyperplane
/// when `restrict` is set.
pub fn random_operator(rng: &mut impl Rng, model: &HilbertModel, rank: usize, restrict: bool) -> OperatorModel {
    let d = model.dim();
    let a = OperatorModel::from_matrix(model, model, rank_matrix(rng, d, d, rank), "A").unwrap();
    if restrict && d > 1 {
        let adom = orthonormalize(random_matrix(rng, d, d - 1).as_ref(), model).unwrap();
        a.with_adjoint_domain(adom).unwrap()
    } else {
        a
    }
}

pub fn op_norm(m: &CMat) -> f64 {
    linalg::op_norm(m.as_ref()).unwrap()
}

/// `‖x − y‖ / scale`, falling back to the absolute gap when `scale` vanishes.
pub fn rel_gap(x: &CMat, y: &CMat, scale: f64) -> f64 {
    let gap = op_norm(&(x - y));
    if scale > 0.0 {
        gap / scale
    } else {
        gap
    }
}

pub fn cis(theta: f64) -> c64 {
    c64::cis(theta)
}
