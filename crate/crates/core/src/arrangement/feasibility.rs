//! `max { h : M_{c,k}(h) ≠ ∅ }` by exhaustive branch-and-bound.
//!
//! `M_{c,k}(h)` is the set of `m ∈ ℕ^n` with `Σ m_i = h` and
//! `Σ_{i∈I} m_i ≤ (k+1)(N - dim c_I - k - 1)` for every nonempty `I`.

use serde::{Deserialize, Serialize};

use super::{ArrangementError, Caps, CenterArrangement};
use crate::subspace::Dim;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub h_max: Dim,
    /// An `m` attaining `h_max`.
    pub witness: Vec<Dim>,
}

pub fn dim_via_feasibility(
    arr: &CenterArrangement,
    k: Dim,
    caps: &Caps,
) -> Result<Feasibility, ArrangementError> {
    arr.check_k(k)?;
    let n = arr.n();
    if n > caps.feasibility {
        return Err(ArrangementError::FeasibilityBudgetExceeded {
            n,
            cap: caps.feasibility,
        });
    }
    let big_n = arr.ambient() as Dim;
    let bound: Vec<Dim> = (0..=arr.full_mask())
        .map(|m| {
            if m == 0 {
                0
            } else {
                (k + 1) * (big_n - arr.dim_meet(m) - k - 1)
            }
        })
        .collect();
    let mut search = Search {
        n,
        bound: &bound,
        sums: vec![0; bound.len()],
        m: vec![0; n],
        best: -1,
        best_m: vec![0; n],
    };
    search.descend(0, 0);
    Ok(Feasibility {
        h_max: search.best,
        witness: search.best_m,
    })
}

struct Search<'a> {
    n: usize,
    bound: &'a [Dim],
    /// `sums[I] = Σ_{i∈I} m_i` for masks over the already-fixed prefix.
    sums: Vec<Dim>,
    m: Vec<Dim>,
    best: Dim,
    best_m: Vec<Dim>,
}

impl Search<'_> {
    fn descend(&mut self, j: usize, total: Dim) {
        if j == self.n {
            if total > self.best {
                self.best = total;
                self.best_m.clone_from(&self.m);
            }
            return;
        }
        let bit = 1usize << j;
        // Largest m_j allowed by every mask whose top bit is j.
        let mut cap = Dim::MAX;
        for rest in 0..bit {
            cap = cap.min(self.bound[rest | bit] - self.sums[rest]);
        }
        if cap < 0 {
            return;
        }
        // Optimistic completion: each later index at most its singleton bound.
        let tail: Dim = (j + 1..self.n).map(|i| self.bound[1 << i]).sum();
        for v in (0..=cap).rev() {
            if total + v + tail <= self.best {
                break;
            }
            self.m[j] = v;
            for rest in 0..bit {
                self.sums[rest | bit] = self.sums[rest] + v;
            }
            self.descend(j + 1, total + v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::Subspace;

    #[test]
    fn two_points_and_single_point() {
        let c = Caps::default();
        let a = CenterArrangement::new(
            3,
            vec![Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[3])],
        )
        .unwrap();
        let f = dim_via_feasibility(&a, 0, &c).unwrap();
        assert_eq!(f.h_max, 3);
        assert_eq!(f.witness.iter().sum::<Dim>(), 3);
        assert!(f.witness.iter().all(|&x| (0..=2).contains(&x)));

        let one = CenterArrangement::new(3, vec![Subspace::coordinate(3, &[0])]).unwrap();
        let f = dim_via_feasibility(&one, 0, &c).unwrap();
        assert_eq!((f.h_max, f.witness), (2, vec![2]));
    }

    #[test]
    fn witness_satisfies_every_constraint() {
        let l = |c: &[usize]| Subspace::coordinate(4, c);
        let a = CenterArrangement::new(4, vec![l(&[0, 1]), l(&[0, 2]), l(&[3]), l(&[0, 1])]).unwrap();
        for k in 0..=a.max_k() {
            let f = dim_via_feasibility(&a, k, &Caps::default()).unwrap();
            for mask in 1..=a.full_mask() {
                let s: Dim = (0..4).filter(|i| mask & (1 << i) != 0).map(|i| f.witness[i]).sum();
                assert!(s <= (k + 1) * (4 - a.dim_meet(mask) - k - 1));
            }
            assert_eq!(f.witness.iter().sum::<Dim>(), f.h_max);
        }
    }

    #[test]
    fn cap_enforced() {
        let a = CenterArrangement::new(2, vec![Subspace::coordinate(2, &[0]); 3]).unwrap();
        let tight = Caps { partitions: 12, feasibility: 2 };
        assert_eq!(
            dim_via_feasibility(&a, 0, &tight),
            Err(ArrangementError::FeasibilityBudgetExceeded { n: 3, cap: 2 })
        );
    }
}
