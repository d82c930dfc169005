//! ℓ_{c,k} in its several forms, pseudo-disjointness, triangulability,
//! properness and the multiview dimension.

use serde::{Deserialize, Serialize};

use super::partition::{Partition, RestrictedGrowth};
use super::{mask_indices, ArrangementError, Caps, CenterArrangement};
use crate::sample::{Sampler, MAX_REDRAWS};
use crate::subspace::{meet_many, Dim, Subspace};

/// ℓ_{c,k} as `N + max_λ Σ_{I∈λ} (dim c_I - (N-k-1))`, with the first
/// partition (in restricted-growth order) attaining the maximum.
pub fn ell_closed_form(
    arr: &CenterArrangement,
    k: Dim,
    caps: &Caps,
) -> Result<(Dim, Partition), ArrangementError> {
    arr.check_k(k)?;
    let n = arr.n();
    if n > caps.partitions {
        return Err(ArrangementError::PartitionBudgetExceeded {
            n,
            cap: caps.partitions,
        });
    }
    let big_n = arr.ambient() as Dim;
    let offset = big_n - k - 1;
    let mut best: Option<(Dim, Vec<usize>)> = None;
    let mut masks = vec![0u32; n];
    let mut rgs = RestrictedGrowth::new(n);
    while let Some(a) = rgs.next_rgs() {
        masks.iter_mut().for_each(|m| *m = 0);
        let mut blocks = 0;
        for (i, &b) in a.iter().enumerate() {
            masks[b] |= 1 << i;
            blocks = blocks.max(b + 1);
        }
        let score: Dim = masks[..blocks]
            .iter()
            .map(|&m| arr.dim_meet(m) - offset)
            .sum();
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, a.to_vec()));
        }
    }
    let (score, a) = best.expect("n >= 1 has at least one partition");
    Ok((big_n + score, Partition::from_rgs(&a)))
}

/// ℓ_{c,k} for exactly two centers:
/// `max{dim c_1∧c_2 + k + 1, dim c_1 + dim c_2 + 2k + 2 - N}`.
pub fn ell_two_view(arr: &CenterArrangement, k: Dim) -> Result<Dim, ArrangementError> {
    if arr.n() != 2 {
        return Err(ArrangementError::WrongArity {
            expected: 2,
            found: arr.n(),
        });
    }
    arr.check_k(k)?;
    let d1 = arr.dim_meet(0b01);
    let d2 = arr.dim_meet(0b10);
    let d12 = arr.dim_meet(0b11);
    Ok((d12 + k + 1).max(d1 + d2 + 2 * k + 2 - arr.ambient() as Dim))
}

/// Sampled oracle for ℓ_{c,k}: the smallest `dim ∧_i (c_i ∨ P)` seen over
/// `trials` center-avoiding k-planes. Trial `t` uses stream `t` of `seed`.
pub fn ell_sampled(
    arr: &CenterArrangement,
    k: Dim,
    trials: usize,
    seed: u64,
) -> Result<Dim, ArrangementError> {
    arr.check_k(k)?;
    let mut best = Dim::MAX;
    for t in 0..trials.max(1) {
        let p = Sampler::new(seed, t as u64)
            .subspace_avoiding(arr.ambient(), k, arr.centers())
            .ok_or(ArrangementError::SamplingExhausted {
                k,
                attempts: MAX_REDRAWS,
            })?;
        best = best.min(back_projected_meet(arr, &p).dim());
    }
    Ok(best)
}

/// `H_[n] = ∧_i (c_i ∨ P)`.
pub(crate) fn back_projected_meet(arr: &CenterArrangement, p: &Subspace) -> Subspace {
    let joins: Vec<Subspace> = arr.centers().iter().map(|c| c.join(p)).collect();
    meet_many(&joins)
}

/// Outcome of the pseudo-disjointness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoDisjointness {
    pub holds: bool,
    /// First violating index set (0-based), in ascending bitmask order.
    pub violating: Option<Vec<usize>>,
}

/// Checks `Σ_{i∈I} dim c_i ≥ (|I|-1)(N-k-1) + dim c_I` for every nonempty
/// `I` with `c_I ≠ ∅`.
pub fn is_pseudo_disjoint(arr: &CenterArrangement, k: Dim) -> PseudoDisjointness {
    let offset = arr.ambient() as Dim - k - 1;
    let singles: Vec<Dim> = (0..arr.n()).map(|i| arr.dim_meet(1 << i)).collect();
    for mask in 1..=arr.full_mask() {
        let d = arr.dim_meet(mask);
        if d < 0 {
            continue;
        }
        let size = mask.count_ones() as Dim;
        let lhs: Dim = mask_indices(mask).iter().map(|&i| singles[i]).sum();
        if lhs < (size - 1) * offset + d {
            return PseudoDisjointness {
                holds: false,
                violating: Some(mask_indices(mask)),
            };
        }
    }
    PseudoDisjointness {
        holds: true,
        violating: None,
    }
}

/// `Σ_i (h_i - k)`.
pub(crate) fn excess_sum(arr: &CenterArrangement, k: Dim) -> Dim {
    arr.h_list().iter().map(|h| h - k).sum()
}

/// ℓ_{c,k} for pseudo-disjoint arrangements: `max{k, N - Σ(h_i - k)}`.
pub fn ell_pseudo_disjoint(arr: &CenterArrangement, k: Dim) -> Result<Dim, ArrangementError> {
    arr.check_k(k)?;
    let pd = is_pseudo_disjoint(arr, k);
    if let Some(violating) = pd.violating {
        return Err(ArrangementError::NotPseudoDisjoint { violating });
    }
    Ok(k.max(arr.ambient() as Dim - excess_sum(arr, k)))
}

pub fn is_triangulable(
    arr: &CenterArrangement,
    k: Dim,
    caps: &Caps,
) -> Result<bool, ArrangementError> {
    Ok(ell_closed_form(arr, k, caps)?.0 == k)
}

/// `dim M_{c,k} = (k+1)(N - ℓ_{c,k})`.
pub fn dim_multiview(arr: &CenterArrangement, k: Dim, caps: &Caps) -> Result<Dim, ArrangementError> {
    let (ell, _) = ell_closed_form(arr, k, caps)?;
    Ok((k + 1) * (arr.ambient() as Dim - ell))
}

/// Dimension of the product of Grassmannians `Π_i Gr(k, P^{h_i})` in which
/// the multiview variety sits: `Σ_i (k+1)(h_i - k)`.
pub fn multiview_ambient_dim(arr: &CenterArrangement, k: Dim) -> Dim {
    (k + 1) * excess_sum(arr, k)
}

/// `M_{c,k} ⊊ P_{c,k}`. Non-proper exactly when the arrangement is
/// pseudo-disjoint and `N - Σ(h_i - k) ≥ k`.
pub fn is_proper(arr: &CenterArrangement, k: Dim) -> bool {
    let pd = is_pseudo_disjoint(arr, k).holds;
    !(pd && arr.ambient() as Dim - excess_sum(arr, k) >= k)
}
