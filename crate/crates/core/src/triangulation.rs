//! Projecting world `k`-planes to image tuples and recovering them exactly.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arrangement::{mask_indices, ArrangementError, CenterArrangement};
use crate::camera::{CameraError, CameraMatrix, ImagePlane};
use crate::sample::Sampler;
use crate::subspace::{meet_many, Dim, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("a scene needs at least one camera")]
    NoCameras,
    #[error("feature dimension k = {0} is negative")]
    NegativeK(Dim),
    #[error("camera {camera} maps from P^{found}, scene is P^{expected}")]
    AmbientMismatch {
        camera: usize,
        expected: usize,
        found: usize,
    },
    #[error("camera {camera} has a {dim}-dimensional center; at most {max} allowed for k-planes")]
    CenterTooLarge { camera: usize, dim: Dim, max: Dim },
    #[error("world plane has dimension {found}, expected {expected}")]
    WorldDim { expected: Dim, found: Dim },
    #[error("world plane meets the center of camera {camera}")]
    CenterCollision { camera: usize },
    #[error("tuple has {found} planes for {expected} cameras")]
    ArityMismatch { expected: usize, found: usize },
    #[error("plane {camera} lives in P^{found}, camera images are P^{expected}")]
    ImageAmbient {
        camera: usize,
        expected: usize,
        found: usize,
    },
    #[error("plane {camera} has dimension {found}, expected {expected}")]
    ImageDim {
        camera: usize,
        expected: Dim,
        found: Dim,
    },
    #[error("back-projected planes meet in dimension {dim} > k: not enough constraints")]
    UnderDetermined { dim: Dim },
    #[error("back-projected planes meet in dimension {dim} < k: tuple is off the multiview variety")]
    Inconsistent { dim: Dim },
    #[error("camera {camera}: {source}")]
    Camera {
        camera: usize,
        #[source]
        source: CameraError,
    },
}

/// Cameras `C_1, …, C_n` sharing a world `P^N`, imaging `k`-planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    ambient: usize,
    k: Dim,
    cameras: Vec<CameraMatrix>,
}

/// One image `k`-plane per camera.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageTuple {
    pub planes: Vec<ImagePlane>,
}

/// Which of the defining constraint families a tuple satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    /// Every back-projected plane contains its center.
    pub centers_ok: bool,
    /// `dim H_I ≥ dim c_I + k + 1` for all `I` with `c_I ≠ ∅`.
    pub v_ok: bool,
    /// `dim H_[n] ≥ k`.
    pub h_ok: bool,
}

impl Scene {
    pub fn new(ambient: usize, k: Dim, cameras: Vec<CameraMatrix>) -> Result<Self, TriangulationError> {
        if cameras.is_empty() {
            return Err(TriangulationError::NoCameras);
        }
        if k < 0 {
            return Err(TriangulationError::NegativeK(k));
        }
        let max = ambient as Dim - k - 1;
        for (camera, c) in cameras.iter().enumerate() {
            if c.ambient() != ambient {
                return Err(TriangulationError::AmbientMismatch {
                    camera,
                    expected: ambient,
                    found: c.ambient(),
                });
            }
            let dim = c.center().dim();
            if dim > max {
                return Err(TriangulationError::CenterTooLarge { camera, dim, max });
            }
        }
        Ok(Scene {
            ambient,
            k,
            cameras,
        })
    }

    /// Random cameras `P^ambient ⇢ P^{h_i}`.
    pub fn sample(
        sampler: &mut Sampler,
        ambient: usize,
        k: Dim,
        h_list: &[usize],
    ) -> Result<Self, TriangulationError> {
        let cameras = h_list
            .iter()
            .map(|&h| CameraMatrix::sample(sampler, h, ambient))
            .collect();
        Scene::new(ambient, k, cameras)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn k(&self) -> Dim {
        self.k
    }

    pub fn cameras(&self) -> &[CameraMatrix] {
        &self.cameras
    }

    pub fn arrangement(&self) -> Result<CenterArrangement, ArrangementError> {
        let centers = self.cameras.iter().map(|c| c.center().clone()).collect();
        CenterArrangement::new(self.ambient, centers)
    }

    /// `P ↦ (C_1·P, …, C_n·P)`.
    pub fn synthesize(&self, p: &Subspace) -> Result<ImageTuple, TriangulationError> {
        if p.dim() != self.k || p.ambient() != self.ambient {
            return Err(TriangulationError::WorldDim {
                expected: self.k,
                found: p.dim(),
            });
        }
        let planes = self
            .cameras
            .iter()
            .enumerate()
            .map(|(camera, c)| match c.project(p) {
                Ok(img) => Ok(img),
                Err(CameraError::CenterCollision) => {
                    Err(TriangulationError::CenterCollision { camera })
                }
                Err(source) => Err(TriangulationError::Camera { camera, source }),
            })
            .collect::<Result<_, _>>()?;
        Ok(ImageTuple { planes })
    }

    /// Validates arity, then per-camera image dimensions, then back-projects.
    pub fn back_project(&self, t: &ImageTuple) -> Result<Vec<Subspace>, TriangulationError> {
        if t.planes.len() != self.cameras.len() {
            return Err(TriangulationError::ArityMismatch {
                expected: self.cameras.len(),
                found: t.planes.len(),
            });
        }
        for (camera, (c, p)) in self.cameras.iter().zip(&t.planes).enumerate() {
            if p.plane().ambient() != c.h() {
                return Err(TriangulationError::ImageAmbient {
                    camera,
                    expected: c.h(),
                    found: p.plane().ambient(),
                });
            }
            if p.k() != self.k {
                return Err(TriangulationError::ImageDim {
                    camera,
                    expected: self.k,
                    found: p.k(),
                });
            }
        }
        self.cameras
            .iter()
            .zip(&t.planes)
            .enumerate()
            .map(|(camera, (c, p))| {
                c.back_project(p)
                    .map(|b| b.plane)
                    .map_err(|source| TriangulationError::Camera { camera, source })
            })
            .collect()
    }

    /// `H_[n]`, returned only when it is a `k`-plane.
    pub fn triangulate(&self, t: &ImageTuple) -> Result<Subspace, TriangulationError> {
        let h = meet_many(&self.back_project(t)?);
        let dim = h.dim();
        match dim.cmp(&self.k) {
            std::cmp::Ordering::Equal => Ok(h),
            std::cmp::Ordering::Greater => Err(TriangulationError::UnderDetermined { dim }),
            std::cmp::Ordering::Less => Err(TriangulationError::Inconsistent { dim }),
        }
    }

    pub fn constraint_membership(&self, t: &ImageTuple) -> Result<Membership, TriangulationError> {
        let hs = self.back_project(t)?;
        let centers_ok = self
            .cameras
            .iter()
            .zip(&hs)
            .all(|(c, h)| h.contains(c.center()));
        let arr = self.arrangement().expect("scene cameras share the ambient space");
        let v_ok = (1..=arr.full_mask()).all(|mask| {
            let d = arr.dim_meet(mask);
            if d < 0 {
                return true;
            }
            let sel: Vec<Subspace> = mask_indices(mask).iter().map(|&i| hs[i].clone()).collect();
            meet_many(&sel).dim() > d + self.k
        });
        let h_ok = meet_many(&hs).dim() >= self.k;
        Ok(Membership {
            centers_ok,
            v_ok,
            h_ok,
        })
    }

    /// True iff `dim(c_i ∧ H_[n]) + k + 1 ≤ dim H_[n]` for every camera.
    pub fn in_image(&self, t: &ImageTuple) -> Result<bool, TriangulationError> {
        let h = meet_many(&self.back_project(t)?);
        Ok(self
            .cameras
            .iter()
            .all(|c| c.center().meet(&h).dim() + self.k < h.dim()))
    }
}

#[derive(Serialize)]
struct SceneOut<'a> {
    #[serde(rename = "N")]
    ambient: usize,
    k: Dim,
    cameras: &'a [CameraMatrix],
}

#[derive(Deserialize)]
struct SceneIn {
    #[serde(rename = "N")]
    ambient: usize,
    k: Dim,
    cameras: Vec<CameraMatrix>,
}

impl Serialize for Scene {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SceneOut {
            ambient: self.ambient,
            k: self.k,
            cameras: &self.cameras,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scene {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SceneIn::deserialize(deserializer)?;
        Scene::new(raw.ambient, raw.k, raw.cameras).map_err(D::Error::custom)
    }
}
