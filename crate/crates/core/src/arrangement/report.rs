//! One-shot analysis of an arrangement with internal cross-checks.

use serde::{Deserialize, Serialize};

use super::feasibility::{dim_via_feasibility, Feasibility};
use super::invariants::{
    ell_closed_form, ell_pseudo_disjoint, ell_sampled, is_proper, is_pseudo_disjoint,
    multiview_ambient_dim,
};
use super::partition::Partition;
use super::upsilon::{tau, upsilon, UpsilonMode, UpsilonTag};
use super::{ArrangementError, Caps, CenterArrangement};
use crate::subspace::{Dim, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub seed: u64,
    /// Trials for the sampled ℓ oracle (raised to at least 10).
    pub trials: usize,
    pub caps: Caps,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            seed: 0,
            trials: 10,
            caps: Caps::default(),
        }
    }
}

/// Minimum number of sampled-ℓ trials used by [`analyze`].
pub const MIN_ORACLE_TRIALS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonReport {
    pub value: Dim,
    pub tag: UpsilonTag,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub expected: Dim,
    pub found: Dim,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(rename = "N")]
    pub ambient: usize,
    pub n: usize,
    pub k: Dim,
    pub h: Vec<Dim>,
    pub ell: Dim,
    pub ell_witness: Partition,
    pub ell_sampled: Dim,
    /// Present only for pseudo-disjoint arrangements.
    pub ell_pseudo_disjoint: Option<Dim>,
    #[serde(rename = "dim_M")]
    pub dim_m: Dim,
    /// `dim P_{c,k}`.
    #[serde(rename = "dim_P")]
    pub dim_p: Dim,
    /// `None` when `n` is above the feasibility cap.
    #[serde(rename = "dim_M_feasibility")]
    pub dim_m_feasibility: Option<Feasibility>,
    pub pseudo_disjoint: bool,
    pub pseudo_disjoint_violating: Option<Vec<usize>>,
    pub triangulable: bool,
    pub proper: bool,
    pub tau: Dim,
    pub upsilon: UpsilonReport,
    /// `υ = k`; `None` when only a lower bound `≤ k` is known.
    pub super_triangulable: Option<bool>,
    pub cross_checks: Vec<CrossCheck>,
}

/// Computes every invariant and cross-checks ℓ against the sampled oracle
/// and `dim M` against the feasibility search. Disagreement yields
/// [`ArrangementError::Inconsistent`] carrying the full report.
///
/// υ is evaluated by the closed form when the arrangement is flagged as
/// generically sampled and by candidate search otherwise.
pub fn analyze(
    arr: &CenterArrangement,
    k: Dim,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, ArrangementError> {
    let caps = &opts.caps;
    let big_n = arr.ambient() as Dim;
    let (ell, ell_witness) = ell_closed_form(arr, k, caps)?;
    let trials = opts.trials.max(MIN_ORACLE_TRIALS);
    let sampled = ell_sampled(arr, k, trials, opts.seed)?;
    let dim_m = (k + 1) * (big_n - ell);

    let feas = if arr.n() <= caps.feasibility {
        Some(dim_via_feasibility(arr, k, caps)?)
    } else {
        None
    };

    let pd = is_pseudo_disjoint(arr, k);
    let ell_pd = if pd.holds {
        Some(ell_pseudo_disjoint(arr, k)?)
    } else {
        None
    };

    let h = arr.h_list();
    let mode = if arr.is_generic() {
        UpsilonMode::Generic
    } else {
        UpsilonMode::Search {
            seed: opts.seed,
            trials: 4,
        }
    };
    let ups = upsilon(arr, k, mode)?;
    let super_triangulable = match ups.tag {
        UpsilonTag::ExactGeneric => Some(ups.value == k),
        UpsilonTag::LowerBound if ups.value > k => Some(false),
        UpsilonTag::LowerBound => None,
    };

    let mut checks = vec![CrossCheck {
        name: "ell_closed_form vs ell_sampled".into(),
        expected: ell,
        found: sampled,
        agree: ell == sampled,
    }];
    if let Some(f) = &feas {
        checks.push(CrossCheck {
            name: "dim_multiview vs dim_via_feasibility".into(),
            expected: dim_m,
            found: f.h_max,
            agree: dim_m == f.h_max,
        });
    }
    if let Some(v) = ell_pd {
        checks.push(CrossCheck {
            name: "ell_closed_form vs ell_pseudo_disjoint".into(),
            expected: ell,
            found: v,
            agree: ell == v,
        });
    }

    let report = AnalysisReport {
        ambient: arr.ambient(),
        n: arr.n(),
        k,
        h,
        ell,
        ell_witness,
        ell_sampled: sampled,
        ell_pseudo_disjoint: ell_pd,
        dim_m,
        dim_p: multiview_ambient_dim(arr, k),
        dim_m_feasibility: feas,
        pseudo_disjoint: pd.holds,
        pseudo_disjoint_violating: pd.violating,
        triangulable: ell == k,
        proper: is_proper(arr, k),
        tau: tau(big_n, &arr.h_list(), k),
        upsilon: UpsilonReport {
            value: ups.value,
            tag: ups.tag,
            witness: ups.witness,
        },
        super_triangulable,
        cross_checks: checks,
    };

    if let Some(bad) = report.cross_checks.iter().find(|c| !c.agree) {
        return Err(ArrangementError::Inconsistent {
            check: bad.name.clone(),
            expected: bad.expected,
            found: bad.found,
            report: Box::new(report.clone()),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_two_camera_setup() {
        let a = CenterArrangement::new(
            3,
            vec![Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[3])],
        )
        .unwrap();
        let r = analyze(&a, 0, &AnalyzeOptions::default()).unwrap();
        assert_eq!((r.ell, r.dim_m), (0, 3));
        assert!(r.triangulable && r.pseudo_disjoint && r.proper);
        assert_eq!(r.dim_p, 4);
    }

    #[test]
    fn single_point_center() {
        let a = CenterArrangement::new(3, vec![Subspace::coordinate(3, &[0])]).unwrap();
        let r = analyze(&a, 0, &AnalyzeOptions::default()).unwrap();
        assert_eq!((r.ell, r.dim_m), (1, 2));
        assert!(!r.triangulable && r.pseudo_disjoint && !r.proper);
        assert_eq!(r.upsilon.value, 1);
        assert_eq!(r.super_triangulable, Some(false));
    }

    #[test]
    fn coincident_points_in_plane() {
        let a = CenterArrangement::new(2, vec![Subspace::coordinate(2, &[0]); 2]).unwrap();
        let r = analyze(&a, 0, &AnalyzeOptions::default()).unwrap();
        assert!(!r.pseudo_disjoint && r.proper);
        assert_eq!(r.pseudo_disjoint_violating, Some(vec![0, 1]));
        assert_eq!(r.ell_pseudo_disjoint, None);
    }

    #[test]
    fn report_serializes_with_named_fields() {
        let a = CenterArrangement::new(3, vec![Subspace::coordinate(3, &[0, 1])]).unwrap();
        let r = analyze(&a, 0, &AnalyzeOptions::default()).unwrap();
        let js = serde_json::to_value(&r).unwrap();
        for key in ["N", "ell", "ell_witness", "dim_M", "dim_M_feasibility", "tau", "upsilon", "proper"] {
            assert!(js.get(key).is_some(), "missing {key}");
        }
        assert_eq!(js["upsilon"]["tag"], "lower-bound");
    }
}
