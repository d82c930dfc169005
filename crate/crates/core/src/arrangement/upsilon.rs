//! τ, Schubert-locus dimensions and υ_{c,k}.

use serde::{Deserialize, Serialize};

use super::invariants::back_projected_meet;
use super::{ArrangementError, CenterArrangement};
use crate::sample::Sampler;
use crate::subspace::{Dim, Subspace};

/// Largest integer `s ≥ 0` with `s² - (N-1-S)s ≤ N + kS`, where
/// `S = Σ(h_i - k)`. Exact integer search; no floating point.
pub fn tau(big_n: Dim, h_list: &[Dim], k: Dim) -> Dim {
    let s_sum: Dim = h_list.iter().map(|h| h - k).sum();
    let lin = big_n - 1 - s_sum;
    let rhs = big_n + k * s_sum;
    let fits = |s: i128| s * s - lin as i128 * s <= rhs as i128;
    let mut s: i128 = 0;
    while fits(s + 1) {
        s += 1;
    }
    s as Dim
}

/// `max{-1, (s+1)(N-s) - (s-k)·Σ(h_i - k)}`.
pub fn schubert_locus_dim(big_n: Dim, h_list: &[Dim], k: Dim, s: Dim) -> Dim {
    let s_sum: Dim = h_list.iter().map(|h| h - k).sum();
    ((s + 1) * (big_n - s) - (s - k) * s_sum).max(-1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpsilonMode {
    /// Closed form; the caller vouches that the centers were sampled generically.
    Generic,
    /// Certified lower bound from an explicit candidate family.
    Search { seed: u64, trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpsilonTag {
    #[serde(rename = "exact-generic")]
    ExactGeneric,
    #[serde(rename = "lower-bound")]
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Upsilon {
    pub value: Dim,
    pub tag: UpsilonTag,
    /// For lower bounds: a subspace `V` of dimension `value` meeting every
    /// center in at least `dim V - k - 1` dimensions.
    pub witness: Option<Subspace>,
}

/// `dim(V ∧ c_i) ≥ dim V - k - 1` for every center, and `V ≠ ∅`.
pub fn certifies(arr: &CenterArrangement, k: Dim, v: &Subspace) -> bool {
    !v.is_empty()
        && arr
            .centers()
            .iter()
            .all(|c| v.meet(c).dim() >= v.dim() - k - 1)
}

/// Largest `|J|` enumerated exhaustively by the search; above this many
/// centers only `|J| ≤ 2` is tried.
const FULL_SUBSET_LIMIT: usize = 10;

pub fn upsilon(
    arr: &CenterArrangement,
    k: Dim,
    mode: UpsilonMode,
) -> Result<Upsilon, ArrangementError> {
    arr.check_k(k)?;
    let cap = arr.centers().iter().map(|c| c.dim() + k + 1).min().unwrap();
    match mode {
        UpsilonMode::Generic => {
            let t = tau(arr.ambient() as Dim, &arr.h_list(), k);
            Ok(Upsilon {
                value: t.min(cap),
                tag: UpsilonTag::ExactGeneric,
                witness: None,
            })
        }
        UpsilonMode::Search { seed, trials } => search(arr, k, cap, seed, trials.max(1)),
    }
}

fn search(
    arr: &CenterArrangement,
    k: Dim,
    cap: Dim,
    seed: u64,
    trials: usize,
) -> Result<Upsilon, ArrangementError> {
    let ambient = arr.ambient();
    let mut sampler = Sampler::new(seed, 0);
    let mut best: Option<Subspace> = None;
    let consider = |v: Subspace, best: &mut Option<Subspace>| {
        if best.as_ref().is_none_or(|b| v.dim() > b.dim()) && certifies(arr, k, &v) {
            *best = Some(v);
        }
    };

    // H_[n] for generic P already certifies at dimension ℓ.
    for _ in 0..trials {
        if let Some(p) = sampler.subspace_avoiding(ambient, k, arr.centers()) {
            consider(back_projected_meet(arr, &p), &mut best);
        }
    }

    let n = arr.n();
    let joins = center_joins(arr);
    for mask in 0..=arr.full_mask() {
        if n > FULL_SUBSET_LIMIT && mask.count_ones() > 2 {
            continue;
        }
        let base = &joins[mask as usize];
        if base.dim() > cap {
            continue;
        }
        for p in -1..=k {
            let reps = if p < 0 { 1 } else { trials };
            for _ in 0..reps {
                let v = if p < 0 {
                    base.clone()
                } else {
                    base.join(&sampler.subspace(ambient, p))
                };
                if v.dim() <= cap {
                    consider(v, &mut best);
                }
            }
        }
    }

    match best {
        Some(v) => Ok(Upsilon {
            value: v.dim(),
            tag: UpsilonTag::LowerBound,
            witness: Some(v),
        }),
        None => Err(ArrangementError::SamplingExhausted {
            k,
            attempts: trials,
        }),
    }
}

/// `∨_{i∈J} c_i` for every mask `J` (the empty mask gives `∅`).
fn center_joins(arr: &CenterArrangement) -> Vec<Subspace> {
    let ambient = arr.ambient();
    let mut out = vec![Subspace::empty(ambient)];
    for mask in 1..=arr.full_mask() as usize {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let j = out[rest].join(&arr.centers()[low]);
        out.push(j);
    }
    out
}
