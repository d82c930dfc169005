//! Randomized oracle sweeps and the catalogue of worked examples.
//!
//! Every case is generated from `(seed, case index)` alone, so a failing
//! case can be replayed from its serialized instance or from its index.

use serde::{Deserialize, Serialize};

use crate::arrangement::{
    dim_multiview, dim_via_feasibility, ell_closed_form, ell_pseudo_disjoint, ell_sampled,
    ell_two_view, is_proper, is_pseudo_disjoint, is_triangulable, multiview_ambient_dim, tau,
    upsilon, ArrangementError, Caps, CenterArrangement, UpsilonMode, UpsilonTag,
};
use crate::sample::Sampler;
use crate::subspace::{Dim, Subspace};

/// Trials used for the sampled ℓ oracle inside sweeps.
pub const ORACLE_TRIALS: usize = 10;

/// How centers of a random instance relate to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Generic,
    SharedCore,
    Coincident,
    Nested,
    Coplanar,
}

const KINDS: [InstanceKind; 5] = [
    InstanceKind::Generic,
    InstanceKind::SharedCore,
    InstanceKind::Coincident,
    InstanceKind::Nested,
    InstanceKind::Coplanar,
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub k: Dim,
    pub arrangement: CenterArrangement,
}

/// SplitMix64 step; derives independent seeds for sub-tasks.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random arrangement in `P^N` with `2 ≤ N ≤ max_ambient` (or `N = max_ambient`
/// when that is below 2) and `1 ≤ n ≤ max_centers`, plus an admissible `k`.
pub fn random_instance(s: &mut Sampler, max_ambient: usize, max_centers: usize) -> Instance {
    let kind = KINDS[s.range(0, KINDS.len() as i64 - 1) as usize];
    random_instance_of(s, kind, max_ambient, max_centers)
}

pub fn random_instance_of(
    s: &mut Sampler,
    kind: InstanceKind,
    max_ambient: usize,
    max_centers: usize,
) -> Instance {
    let max_ambient = max_ambient.max(1) as i64;
    let big_n = s.range(max_ambient.min(2), max_ambient) as usize;
    let n = s.range(1, max_centers.max(1) as i64) as usize;
    let k = s.range(0, big_n as i64 - 1);
    let top = big_n as Dim - k - 1; // largest center dimension allowed
    let dim = |s: &mut Sampler, lo: Dim| -> Dim {
        if lo < 0 && s.chance(0.05) {
            -1
        } else {
            s.range(lo.max(0), top)
        }
    };
    let centers: Vec<Subspace> = match kind {
        InstanceKind::Generic => (0..n)
            .map(|_| {
                let d = dim(s, -1);
                s.subspace(big_n, d)
            })
            .collect(),
        InstanceKind::SharedCore => {
            let d0 = s.range(0, top);
            let core = s.subspace(big_n, d0);
            (0..n)
                .map(|_| {
                    let d = dim(s, core.dim());
                    s.subspace_through(&core, d)
                })
                .collect()
        }
        InstanceKind::Coincident => {
            let mut out: Vec<Subspace> = Vec::with_capacity(n);
            for _ in 0..n {
                if !out.is_empty() && s.chance(0.5) {
                    let j = s.range(0, out.len() as i64 - 1) as usize;
                    out.push(out[j].clone());
                } else {
                    let d = dim(s, 0);
                    out.push(s.subspace(big_n, d));
                }
            }
            out
        }
        InstanceKind::Nested => {
            let mut cur = s.subspace(big_n, top);
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let d = s.range(0, cur.dim());
                cur = s.subspace_inside(&cur, d);
                out.push(cur.clone());
            }
            out
        }
        InstanceKind::Coplanar => {
            let dh = s.range(0, big_n as Dim - 1);
            let host = s.subspace(big_n, dh);
            let hi = host.dim().min(top);
            (0..n)
                .map(|_| {
                    let d = s.range(0, hi);
                    s.subspace_inside(&host, d)
                })
                .collect()
        }
    };
    let arrangement = CenterArrangement::new(big_n, centers).expect("generated centers share P^N");
    Instance {
        kind,
        k,
        arrangement,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub expected: String,
    pub found: String,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub runs: usize,
    pub failures: Vec<Failure>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub cases: usize,
    pub max_ambient: usize,
    pub max_centers: usize,
    pub checks: Vec<CheckSummary>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }
}

pub const CHECK_NAMES: [&str; 9] = [
    "ell_closed_form = ell_sampled",
    "ell_two_view = ell_closed_form",
    "dim_via_feasibility = (k+1)(N-ell)",
    "pseudo-disjoint => ell = max{k, N-sum(h_i-k)}",
    "k <= ell <= min dim c_i + k + 1",
    "appending a center never raises ell",
    "proper <=> dim M != dim P",
    "ell <= upsilon lower bound <= min dim c_i + k + 1",
    "tau table",
];

struct Recorder {
    checks: Vec<CheckSummary>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            checks: CHECK_NAMES
                .iter()
                .map(|n| CheckSummary {
                    name: (*n).to_string(),
                    runs: 0,
                    failures: Vec::new(),
                })
                .collect(),
        }
    }

    fn record<T: PartialEq + std::fmt::Debug>(
        &mut self,
        check: usize,
        case: usize,
        inst: &Instance,
        expected: T,
        found: T,
    ) {
        let c = &mut self.checks[check];
        c.runs += 1;
        if expected != found {
            c.failures.push(Failure {
                case,
                expected: format!("{expected:?}"),
                found: format!("{found:?}"),
                instance: inst.clone(),
            });
        }
    }

    fn error(&mut self, check: usize, case: usize, inst: &Instance, err: ArrangementError) {
        let c = &mut self.checks[check];
        c.runs += 1;
        c.failures.push(Failure {
            case,
            expected: "a value".into(),
            found: format!("error: {err}"),
            instance: inst.clone(),
        });
    }
}

/// Runs every cross-check pair on `cases` random instances.
pub fn sweep(
    cases: usize,
    max_ambient: usize,
    max_centers: usize,
    seed: u64,
    caps: &Caps,
) -> SweepReport {
    let mut rec = Recorder::new();
    for case in 0..cases {
        let mut s = Sampler::new(seed, case as u64);
        let inst = random_instance(&mut s, max_ambient, max_centers);
        check_instance(&mut rec, case, &inst, &mut s, derive_seed(seed, case as u64), caps);
    }
    if cases > 0 {
        let dummy = Instance {
            kind: InstanceKind::Generic,
            k: 0,
            arrangement: CenterArrangement::new(3, vec![Subspace::coordinate(3, &[0])]).unwrap(),
        };
        for (big_n, h, k, want) in TAU_TABLE {
            rec.record(8, 0, &dummy, want, tau(big_n, &h, k));
        }
    }
    SweepReport {
        seed,
        cases,
        max_ambient,
        max_centers,
        checks: rec.checks,
    }
}

/// `(N, h_list, k, τ)` constants from the worked examples.
const TAU_TABLE: [(Dim, [Dim; 1], Dim, Dim); 4] =
    [(4, [3], 0, 2), (9, [8], 0, 3), (16, [15], 0, 4), (3, [2], 1, 2)];

fn check_instance(
    rec: &mut Recorder,
    case: usize,
    inst: &Instance,
    s: &mut Sampler,
    oracle_seed: u64,
    caps: &Caps,
) {
    let arr = &inst.arrangement;
    let k = inst.k;
    let big_n = arr.ambient() as Dim;
    let (ell, _) = match ell_closed_form(arr, k, caps) {
        Ok(v) => v,
        Err(e) => {
            rec.error(0, case, inst, e);
            return;
        }
    };
    let min_cap = arr.centers().iter().map(|c| c.dim() + k + 1).min().unwrap();

    match ell_sampled(arr, k, ORACLE_TRIALS, oracle_seed) {
        Ok(v) => rec.record(0, case, inst, ell, v),
        Err(e) => rec.error(0, case, inst, e),
    }

    // Two-view form on the first two centers (the instance itself when n = 2).
    if arr.n() >= 2 {
        let pair = arr.restrict(0b11).unwrap();
        match (ell_two_view(&pair, k), ell_closed_form(&pair, k, caps)) {
            (Ok(a), Ok((b, _))) => rec.record(1, case, inst, b, a),
            (Err(e), _) | (_, Err(e)) => rec.error(1, case, inst, e),
        }
    }

    if arr.n() <= caps.feasibility {
        match dim_via_feasibility(arr, k, caps) {
            Ok(f) => rec.record(2, case, inst, (k + 1) * (big_n - ell), f.h_max),
            Err(e) => rec.error(2, case, inst, e),
        }
    }

    if is_pseudo_disjoint(arr, k).holds {
        match ell_pseudo_disjoint(arr, k) {
            Ok(v) => rec.record(3, case, inst, ell, v),
            Err(e) => rec.error(3, case, inst, e),
        }
    }

    rec.record(4, case, inst, true, k <= ell && ell <= min_cap);

    // Extension by a center of admissible dimension.
    let d = s.range(-1, big_n - k - 1);
    let extra = s.subspace(arr.ambient(), d);
    if let Ok(bigger) = arr.with_center(extra) {
        match ell_closed_form(&bigger, k, caps) {
            Ok((e2, _)) => rec.record(5, case, inst, true, e2 <= ell),
            Err(ArrangementError::PartitionBudgetExceeded { .. }) => {}
            Err(e) => rec.error(5, case, inst, e),
        }
    }

    match dim_multiview(arr, k, caps) {
        Ok(dm) => rec.record(
            6,
            case,
            inst,
            is_proper(arr, k),
            dm != multiview_ambient_dim(arr, k),
        ),
        Err(e) => rec.error(6, case, inst, e),
    }

    match upsilon(arr, k, UpsilonMode::Search { seed: oracle_seed, trials: 2 }) {
        Ok(u) => rec.record(
            7,
            case,
            inst,
            true,
            u.tag == UpsilonTag::LowerBound && ell <= u.value && u.value <= min_cap,
        ),
        Err(e) => rec.error(7, case, inst, e),
    }
}

/// A worked example with its expected and computed outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
}

fn outcome<T: PartialEq + std::fmt::Debug>(name: &str, expected: T, found: T) -> ExampleOutcome {
    ExampleOutcome {
        name: name.to_string(),
        passed: expected == found,
        expected: format!("{expected:?}"),
        found: format!("{found:?}"),
    }
}

fn pt(ambient: usize, i: usize) -> Subspace {
    Subspace::coordinate(ambient, &[i])
}

/// Named explicit arrangements used by the worked examples.
pub fn example_arrangements() -> Vec<(&'static str, CenterArrangement)> {
    let l = |c: &[usize]| Subspace::coordinate(3, c);
    let mk = |n: usize, cs: Vec<Subspace>| CenterArrangement::new(n, cs).unwrap();
    vec![
        ("two_lines_p3", mk(3, vec![l(&[0, 1]), l(&[2, 3])])),
        ("two_points_p3", mk(3, vec![pt(3, 0), pt(3, 3)])),
        ("coincident_p2", mk(2, vec![pt(2, 0), pt(2, 0)])),
        ("distinct_points_p2", mk(2, vec![pt(2, 0), pt(2, 1)])),
        ("meeting_lines_p3", mk(3, vec![l(&[0, 1]), l(&[0, 2])])),
        (
            "collinear_points_p3",
            mk(
                3,
                vec![
                    pt(3, 0),
                    pt(3, 1),
                    Subspace::span_i64(3, &[vec![1, 1, 0, 0]]),
                ],
            ),
        ),
        ("single_point_p3", mk(3, vec![pt(3, 0)])),
    ]
}

fn example(name: &str) -> CenterArrangement {
    example_arrangements()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| a)
        .expect("known example")
}

/// `n` sampled point centers in `P^ambient`, flagged as generic.
pub fn generic_points(ambient: usize, n: usize, seed: u64) -> CenterArrangement {
    let mut s = Sampler::new(seed, n as u64);
    let centers = (0..n).map(|_| s.subspace(ambient, 0)).collect();
    CenterArrangement::new(ambient, centers)
        .unwrap()
        .assume_generic()
}

/// Replays every worked example with a definite expected value.
pub fn paper_examples(caps: &Caps) -> Vec<ExampleOutcome> {
    let ell = |a: &CenterArrangement, k: Dim| ell_closed_form(a, k, caps).map(|x| x.0).ok();
    let tri = |a: &CenterArrangement, k: Dim| is_triangulable(a, k, caps).ok();
    let ups = |a: &CenterArrangement, k: Dim, mode| upsilon(a, k, mode).map(|u| u.value).ok();

    let two_lines = example("two_lines_p3");
    let two_points = example("two_points_p3");
    let coincident = example("coincident_p2");
    let distinct = example("distinct_points_p2");
    let meeting = example("meeting_lines_p3");
    let collinear = example("collinear_points_p3");
    let single = example("single_point_p3");

    let mut out = vec![
        outcome("two lines in P^3, k=0: ell", Some(1), ell(&two_lines, 0)),
        outcome("two lines in P^3, k=0: not triangulable", Some(false), tri(&two_lines, 0)),
        outcome(
            "two lines in P^3, k=0: sampled ell",
            Some(1),
            ell_sampled(&two_lines, 0, 20, 1).ok(),
        ),
        outcome("two points in P^3, k=1: ell", Some(1), ell(&two_points, 1)),
        outcome("two points in P^3, k=1: triangulable", Some(true), tri(&two_points, 1)),
        outcome("two points in P^3, k=0: ell", Some(0), ell(&two_points, 0)),
        outcome(
            "two points in P^3, k=1: two-view ell",
            Some(1),
            ell_two_view(&two_points, 1).ok(),
        ),
        outcome(
            "two points in P^3, k=0: dim M",
            Some(3),
            dim_multiview(&two_points, 0, caps).ok(),
        ),
        outcome(
            "two points in P^3, k=1: dim M",
            Some(4),
            dim_multiview(&two_points, 1, caps).ok(),
        ),
        outcome(
            "coincident points in P^2, k=0: pseudo-disjoint",
            false,
            is_pseudo_disjoint(&coincident, 0).holds,
        ),
        outcome(
            "distinct points in P^2, k=0: pseudo-disjoint",
            true,
            is_pseudo_disjoint(&distinct, 0).holds,
        ),
        outcome(
            "lines meeting in a point in P^3, k=0: pseudo-disjoint",
            true,
            is_pseudo_disjoint(&meeting, 0).holds,
        ),
        outcome(
            "lines meeting in a point in P^3, k=0: two-view ell",
            Some(1),
            ell_two_view(&meeting, 0).ok(),
        ),
        outcome("two points in P^3, k=1: not proper (M = P)", false, is_proper(&two_points, 1)),
        outcome("two points in P^3, k=0: proper (M strictly in P)", true, is_proper(&two_points, 0)),
        outcome(
            "single point in P^3, k=0: ell",
            Some(1),
            ell(&single, 0),
        ),
        outcome(
            "three collinear points in P^3, k=0: upsilon lower bound",
            Some(1),
            ups(&collinear, 0, UpsilonMode::Search { seed: 0, trials: 4 }),
        ),
    ];

    for (k, n, want) in [
        (0, 1, 1),
        (0, 2, 1),
        (0, 3, 0),
        (0, 4, 0),
        (1, 1, 2),
        (1, 2, 2),
        (1, 3, 2),
        (1, 4, 1),
        (1, 5, 1),
    ] {
        let arr = generic_points(3, n, 7);
        out.push(outcome(
            &format!("{n} generic points in P^3, k={k}: upsilon"),
            Some(want),
            ups(&arr, k, UpsilonMode::Generic),
        ));
    }

    for big_n in [4usize, 9, 16] {
        let root = (1..).take_while(|r: &Dim| r * r <= big_n as Dim).last().unwrap();
        let arr = CenterArrangement::new(big_n, vec![pt(big_n, 0)]).unwrap();
        out.push(outcome(
            &format!("single point in P^{big_n}, k=0: tau"),
            root,
            tau(big_n as Dim, &arr.h_list(), 0),
        ));
        out.push(outcome(
            &format!("single point in P^{big_n}, k=0: upsilon"),
            Some(1),
            ups(&arr.clone().assume_generic(), 0, UpsilonMode::Generic),
        ));
        out.push(outcome(
            &format!("single point in P^{big_n}, k=0: upsilon by search"),
            Some(1),
            ups(&arr, 0, UpsilonMode::Search { seed: 0, trials: 2 }),
        ));
    }

    out.push(outcome("tau(3; 2,2,2; 0)", 0, tau(3, &[2, 2, 2], 0)));
    out.push(outcome("tau(3; 2,2; 1)", 2, tau(3, &[2, 2], 1)));
    out
}
