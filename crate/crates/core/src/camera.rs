//! Camera matrices and the dictionary between image `k`-planes and
//! back-projected planes through the center.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::sample::Sampler;
use crate::subspace::{matrix_from_strings, matrix_to_strings, Dim, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CameraError {
    #[error("camera matrix is {rows}x{cols}; need rows <= cols")]
    TooManyRows { rows: usize, cols: usize },
    #[error("camera matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("the plane meets the camera center")]
    CenterCollision,
    #[error("subspace does not contain the camera center")]
    NotThroughCenter,
    #[error("expected a subspace of P^{expected}, got P^{found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("feature dimension {k} is not in 0..={max}")]
    InvalidFeatureDim { k: Dim, max: Dim },
}

/// A full-rank `(h+1)×(N+1)` matrix, inducing `P^N ⇢ P^h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CameraMatrix {
    matrix: Matrix,
    center: Subspace,
}

/// A `k`-plane in the image space `P^h`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImagePlane(pub Subspace);

impl ImagePlane {
    pub fn k(&self) -> Dim {
        self.0.dim()
    }

    pub fn plane(&self) -> &Subspace {
        &self.0
    }
}

/// The preimage plane `H` of an image plane; always contains the center.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BackProjectedPlane {
    pub plane: Subspace,
    /// Index of the camera in its scene, when known.
    pub source: Option<usize>,
}

impl CameraMatrix {
    pub fn new(matrix: Matrix) -> Result<Self, CameraError> {
        let (rows, cols) = (matrix.rows(), matrix.cols());
        if rows == 0 || rows > cols {
            return Err(CameraError::TooManyRows { rows, cols });
        }
        let rank = matrix.rank();
        if rank != rows {
            return Err(CameraError::RankDeficient { rank, rows });
        }
        let center = Subspace::span(cols - 1, &matrix.kernel());
        Ok(CameraMatrix { matrix, center })
    }

    /// A random full-rank camera `P^ambient ⇢ P^h`.
    pub fn sample(sampler: &mut Sampler, h: usize, ambient: usize) -> Self {
        let m = sampler.full_rank_matrix(h + 1, ambient + 1);
        Self::new(m).expect("sampled matrix has full rank")
    }

    /// A random camera whose center is exactly `center`.
    pub fn sample_with_center(sampler: &mut Sampler, center: &Subspace) -> Self {
        let ambient = center.ambient();
        if center.is_empty() {
            return Self::sample(sampler, ambient, ambient);
        }
        // Rows are random combinations of the forms vanishing on the center.
        let forms = center.annihilator();
        let m = sampler
            .full_rank_matrix(forms.rows(), forms.rows())
            .mul(&forms);
        Self::new(m).expect("invertible combination of independent forms")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Image dimension `h`.
    pub fn h(&self) -> usize {
        self.matrix.rows() - 1
    }

    /// World dimension `N`.
    pub fn ambient(&self) -> usize {
        self.matrix.cols() - 1
    }

    pub fn center(&self) -> &Subspace {
        &self.center
    }

    /// `C·P`, defined when `P` misses the center.
    pub fn project(&self, p: &Subspace) -> Result<ImagePlane, CameraError> {
        self.check_world(p)?;
        if !self.center.is_disjoint(p) {
            return Err(CameraError::CenterCollision);
        }
        Ok(ImagePlane(p.map(&self.matrix)))
    }

    /// `H(p) = {X : C·X ∈ p}`, computed as the kernel of `Q·C` where the rows
    /// of `Q` cut out `p`.
    pub fn back_project(&self, p: &ImagePlane) -> Result<BackProjectedPlane, CameraError> {
        if p.0.ambient() != self.h() {
            return Err(CameraError::AmbientMismatch {
                expected: self.h(),
                found: p.0.ambient(),
            });
        }
        let k = p.k();
        if k < 0 {
            return Err(CameraError::InvalidFeatureDim {
                k,
                max: self.h() as Dim,
            });
        }
        let plane = if p.0.is_full() {
            Subspace::full(self.ambient())
        } else {
            let q = p.0.annihilator();
            Subspace::span(self.ambient(), &q.mul(&self.matrix).kernel())
        };
        Ok(BackProjectedPlane {
            plane,
            source: None,
        })
    }

    /// `C(H)` for a plane `H` through the center; inverse of [`back_project`].
    ///
    /// [`back_project`]: CameraMatrix::back_project
    pub fn project_backplane(&self, h: &Subspace) -> Result<ImagePlane, CameraError> {
        self.check_world(h)?;
        if !h.contains(&self.center) || h.dim() <= self.center.dim() {
            return Err(CameraError::NotThroughCenter);
        }
        Ok(ImagePlane(h.map(&self.matrix)))
    }

    /// Checks `dim c = N-h-1` and `dim H = dim c + k + 1` on a sampled
    /// back-projected plane.
    pub fn multiview_identities_check(&self, k: Dim, seed: u64) -> bool {
        let n = self.ambient() as Dim;
        let h = self.h() as Dim;
        if !(0..=h).contains(&k) {
            return false;
        }
        if self.center.dim() != n - h - 1 {
            return false;
        }
        let mut s = Sampler::new(seed, 0);
        let Some(p) = s.subspace_avoiding(self.ambient(), k, std::slice::from_ref(&self.center))
        else {
            return false;
        };
        let Ok(img) = self.project(&p) else {
            return false;
        };
        match self.back_project(&img) {
            Ok(bp) => {
                bp.plane.dim() == n - h + k
                    && bp.plane.dim() == self.center.dim() + k + 1
                    && bp.plane.contains(&self.center)
            }
            Err(_) => false,
        }
    }

    fn check_world(&self, s: &Subspace) -> Result<(), CameraError> {
        if s.ambient() != self.ambient() {
            return Err(CameraError::AmbientMismatch {
                expected: self.ambient(),
                found: s.ambient(),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CameraRepr {
    h: usize,
    #[serde(rename = "N")]
    ambient: usize,
    matrix: Vec<Vec<String>>,
}

impl Serialize for CameraMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CameraRepr {
            h: self.h(),
            ambient: self.ambient(),
            matrix: matrix_to_strings(&self.matrix),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CameraMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CameraRepr::deserialize(deserializer)?;
        if repr.matrix.len() != repr.h + 1 {
            return Err(D::Error::custom(format!(
                "matrix: expected {} rows for h = {}, found {}",
                repr.h + 1,
                repr.h,
                repr.matrix.len()
            )));
        }
        let m = matrix_from_strings(&repr.matrix, repr.ambient + 1, "matrix")
            .map_err(D::Error::custom)?;
        CameraMatrix::new(m).map_err(|e| D::Error::custom(format!("matrix: {e}")))
    }
}
