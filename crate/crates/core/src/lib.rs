//! Frames, K-frames, A-frames and weak A-frames on finite-dimensional
//! Hilbert-space models.
//!
//! A [`hilbert::HilbertModel`] is `Cᵈ` with a positive diagonal weight, so
//! that sampled functions on a grid carry the quadrature inner product.
//! Sequences live in [`seqops::FrameSequence`], operators (with explicit
//! domains for their unbounded originals) in [`opmodel::OperatorModel`].

pub mod constructions;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod opmodel;
pub mod relframes;
pub mod sampling;
pub mod scenario;
pub mod seqops;
pub mod serial;
pub mod weakframes;

pub use error::{FrameError, Result};
pub use hilbert::{HilbertModel, Subspace};
pub use opmodel::OperatorModel;
pub use seqops::{BoundKind, FrameBounds, FrameSequence};
pub use weakframes::{DualSequence, Producer};
