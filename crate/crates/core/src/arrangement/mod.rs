//! Center arrangements and their invariants.
//!
//! Subsets `I ⊆ [n]` are encoded as bitmasks over the center indices
//! (0-based). `dim c_I` for every nonempty `I` is computed once at
//! construction and cached in the arrangement's lattice table.

mod feasibility;
mod invariants;
mod partition;
mod report;
mod upsilon;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::subspace::{Dim, Subspace};

pub use feasibility::{dim_via_feasibility, Feasibility};
pub use invariants::{
    dim_multiview, ell_closed_form, ell_pseudo_disjoint, ell_sampled, ell_two_view,
    is_proper, is_pseudo_disjoint, is_triangulable, multiview_ambient_dim, PseudoDisjointness,
};
pub use partition::{bell_number, Partition, RestrictedGrowth};
pub use report::{analyze, AnalysisReport, AnalyzeOptions, CrossCheck, UpsilonReport, MIN_ORACLE_TRIALS};
pub use upsilon::{certifies, schubert_locus_dim, tau, upsilon, Upsilon, UpsilonMode, UpsilonTag};

/// Largest arrangement accepted; the lattice table has `2^n` entries.
pub const MAX_CENTERS: usize = 16;

/// Enumeration budgets for the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest `n` for set-partition enumeration.
    pub partitions: usize,
    /// Largest `n` for the exhaustive `M_{c,k}(h)` search.
    pub feasibility: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            partitions: 12,
            feasibility: 6,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("an arrangement needs at least one center")]
    NoCenters,
    #[error("{n} centers exceed the supported maximum of {max}")]
    TooManyCenters { n: usize, max: usize },
    #[error("center {index} lives in P^{found}, expected P^{expected}")]
    AmbientMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("k = {k} is outside 0..={max} (need dim c_i <= N-k-1 for every center)")]
    InvalidK { k: Dim, max: Dim },
    #[error("partition enumeration over {n} centers exceeds the cap of {cap}")]
    PartitionBudgetExceeded { n: usize, cap: usize },
    #[error("feasibility search over {n} centers exceeds the cap of {cap}")]
    FeasibilityBudgetExceeded { n: usize, cap: usize },
    #[error("expected exactly {expected} centers, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("no center-avoiding {k}-plane found after {attempts} draws")]
    SamplingExhausted { k: Dim, attempts: usize },
    #[error("arrangement is not pseudo-disjoint; violated by I = {violating:?}")]
    NotPseudoDisjoint { violating: Vec<usize> },
    #[error("cross-check `{check}` failed: {expected} vs {found}")]
    Inconsistent {
        check: String,
        expected: Dim,
        found: Dim,
        report: Box<AnalysisReport>,
    },
}

/// Ordered centers `c_1, …, c_n` in a common `P^N`, with the cached
/// intersection lattice `{dim c_I}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterArrangement {
    ambient: usize,
    centers: Vec<Subspace>,
    lattice: Vec<Dim>,
    generic: bool,
}

impl CenterArrangement {
    pub fn new(ambient: usize, centers: Vec<Subspace>) -> Result<Self, ArrangementError> {
        if centers.is_empty() {
            return Err(ArrangementError::NoCenters);
        }
        if centers.len() > MAX_CENTERS {
            return Err(ArrangementError::TooManyCenters {
                n: centers.len(),
                max: MAX_CENTERS,
            });
        }
        for (index, c) in centers.iter().enumerate() {
            if c.ambient() != ambient {
                return Err(ArrangementError::AmbientMismatch {
                    index,
                    expected: ambient,
                    found: c.ambient(),
                });
            }
        }
        let lattice = build_lattice(ambient, &centers);
        Ok(CenterArrangement {
            ambient,
            centers,
            lattice,
            generic: false,
        })
    }

    /// Marks the arrangement as sampled generically. Only then does
    /// [`upsilon`] with [`UpsilonMode::Generic`] return an exact value.
    pub fn assume_generic(mut self) -> Self {
        self.generic = true;
        self
    }

    pub fn is_generic(&self) -> bool {
        self.generic
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[Subspace] {
        &self.centers
    }

    /// `dim c_I` for a nonempty subset mask.
    pub fn dim_meet(&self, mask: u32) -> Dim {
        debug_assert!(mask != 0 && (mask as usize) < self.lattice.len());
        self.lattice[mask as usize]
    }

    /// Mask of all centers.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n()) - 1) as u32
    }

    /// `h_i = N - dim c_i - 1`, the image dimension of a camera with center `c_i`.
    pub fn h_list(&self) -> Vec<Dim> {
        self.centers
            .iter()
            .map(|c| self.ambient as Dim - c.dim() - 1)
            .collect()
    }

    /// Largest admissible feature dimension, `N - 1 - max dim c_i`.
    pub fn max_k(&self) -> Dim {
        let max_dim = self.centers.iter().map(Subspace::dim).max().unwrap_or(-1);
        self.ambient as Dim - 1 - max_dim
    }

    pub fn check_k(&self, k: Dim) -> Result<(), ArrangementError> {
        let max = self.max_k();
        if k < 0 || k > max {
            return Err(ArrangementError::InvalidK { k, max });
        }
        Ok(())
    }

    /// The same arrangement with `c` appended.
    pub fn with_center(&self, c: Subspace) -> Result<Self, ArrangementError> {
        let mut centers = self.centers.clone();
        centers.push(c);
        CenterArrangement::new(self.ambient, centers)
    }

    /// Sub-arrangement on the centers selected by `mask`.
    pub fn restrict(&self, mask: u32) -> Result<Self, ArrangementError> {
        let centers = mask_indices(mask)
            .into_iter()
            .map(|i| self.centers[i].clone())
            .collect();
        CenterArrangement::new(self.ambient, centers)
    }
}

fn build_lattice(ambient: usize, centers: &[Subspace]) -> Vec<Dim> {
    let n = centers.len();
    let mut spaces: Vec<Subspace> = Vec::with_capacity(1 << n);
    spaces.push(Subspace::full(ambient));
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = if rest == 0 {
            centers[low].clone()
        } else if spaces[rest].is_empty() {
            Subspace::empty(ambient)
        } else {
            spaces[rest].meet(&centers[low])
        };
        spaces.push(s);
    }
    let mut dims: Vec<Dim> = spaces.iter().map(Subspace::dim).collect();
    dims[0] = ambient as Dim;
    dims
}

/// Indices of the set bits, ascending.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

#[derive(Serialize)]
struct LatticeEntry {
    subset: Vec<usize>,
    dim: Dim,
}

#[derive(Serialize)]
struct ArrangementOut<'a> {
    #[serde(rename = "N")]
    ambient: usize,
    centers: &'a [Subspace],
    generic: bool,
    lattice: Vec<LatticeEntry>,
}

#[derive(Deserialize)]
struct ArrangementIn {
    #[serde(rename = "N")]
    ambient: usize,
    centers: Vec<Subspace>,
    #[serde(default)]
    generic: bool,
}

impl Serialize for CenterArrangement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let lattice = (1..=self.full_mask())
            .map(|m| LatticeEntry {
                subset: mask_indices(m),
                dim: self.dim_meet(m),
            })
            .collect();
        ArrangementOut {
            ambient: self.ambient,
            centers: &self.centers,
            generic: self.generic,
            lattice,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CenterArrangement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ArrangementIn::deserialize(deserializer)?;
        let arr = CenterArrangement::new(raw.ambient, raw.centers)
            .map_err(|e| D::Error::custom(format!("centers: {e}")))?;
        Ok(if raw.generic { arr.assume_generic() } else { arr })
    }
}
