//! Exact projective linear algebra and multiview-variety invariants for
//! camera and center arrangements.
//!
//! All arithmetic is over exact rationals. Generic choices are realized by
//! seeded integer sampling, so every result is reproducible from its seed.

pub mod arrangement;
pub mod camera;
pub mod linalg;
pub mod sample;
pub mod subspace;
pub mod triangulation;
pub mod verify;

pub use arrangement::{
    analyze, AnalysisReport, AnalyzeOptions, ArrangementError, Caps, CenterArrangement, Partition,
};
pub use camera::{BackProjectedPlane, CameraError, CameraMatrix, ImagePlane};
pub use linalg::{Matrix, Scalar};
pub use sample::{sample_subspace, Sampler};
pub use subspace::{join_many, meet_many, Dim, Subspace};
pub use triangulation::{ImageTuple, Scene, TriangulationError};

/// Crate version, embedded in CLI outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
