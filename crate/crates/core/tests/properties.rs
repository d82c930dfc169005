use proptest::prelude::*;

use mvv_core::arrangement::{
    dim_multiview, ell_closed_form, ell_pseudo_disjoint, ell_two_view, is_proper,
    is_pseudo_disjoint, multiview_ambient_dim, schubert_locus_dim, tau, upsilon, Caps,
    CenterArrangement, UpsilonMode,
};
use mvv_core::linalg::Matrix;
use mvv_core::sample::Sampler;
use mvv_core::subspace::{meet_many, Dim, Subspace};
use mvv_core::verify::random_instance;

fn caps() -> Caps {
    Caps::default()
}

fn instance(seed: u64, max_n: usize, max_c: usize) -> (CenterArrangement, Dim) {
    let inst = random_instance(&mut Sampler::new(seed, 0), max_n, max_c);
    (inst.arrangement, inst.k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_ignores_row_order(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..7) {
        let mut s = Sampler::with_bound(seed, 0, 3);
        let m = s.matrix(rows, cols);
        let mut perm: Vec<Vec<_>> = m.to_rows();
        perm.reverse();
        perm.rotate_left(seed as usize % rows);
        let p = Matrix::from_rows(cols, perm);
        prop_assert_eq!(m.rank(), p.rank());
        prop_assert_eq!(m.rank(), m.rref().0.rows());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn span_is_canonical(seed in any::<u64>(), n in 1usize..6) {
        let mut s = Sampler::new(seed, 0);
        let d = s.range(0, n as i64);
        let v = s.subspace(n, d);
        // A random invertible recombination of the basis spans the same space.
        let k = v.basis().rows();
        let mix = s.full_rank_matrix(k, k);
        prop_assert_eq!(Subspace::span(n, &mix.mul(v.basis())), v);
    }

    #[test]
    fn meet_join_dimension_law(seed in any::<u64>(), n in 1usize..6) {
        let mut s = Sampler::new(seed, 0);
        let core_d = s.range(-1, n as i64);
        let core = s.subspace(n, core_d);
        let dv = s.range(core_d, n as i64);
        let dw = s.range(core_d, n as i64);
        let v = s.subspace_through(&core, dv);
        let w = s.subspace_through(&core, dw);
        prop_assert_eq!(v.meet(&w).dim() + v.join(&w).dim(), v.dim() + w.dim());
        prop_assert!(v.join(&w).contains(&v) && v.contains(&v.meet(&w)));
        prop_assert_eq!(v.meet(&v), v.clone());
        prop_assert_eq!(v.join(&Subspace::empty(n)), v);
    }

    #[test]
    fn meet_many_is_order_free(seed in any::<u64>(), n in 1usize..5, count in 1usize..5) {
        let mut s = Sampler::new(seed, 0);
        let mut spaces: Vec<Subspace> = (0..count).map(|_| {
            let d = s.range(n as i64 - 2, n as i64).max(-1);
            s.subspace(n, d)
        }).collect();
        let a = meet_many(&spaces);
        spaces.reverse();
        prop_assert_eq!(meet_many(&spaces), a);
    }

    #[test]
    fn dual_complement_is_disjoint_complement(seed in any::<u64>(), n in 1usize..6) {
        let mut s = Sampler::new(seed, 0);
        let d = s.range(-1, n as i64 - 1);
        let v = s.subspace(n, d);
        let vs = v.dual_complement(seed);
        prop_assert_eq!(vs.dim(), n as Dim - d - 1);
        prop_assert!(vs.is_disjoint(&v));
        prop_assert_eq!(vs.clone(), v.dual_complement(seed));
        prop_assert!(v.join(&vs).is_full());
    }

    #[test]
    fn subspace_json_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let mut s = Sampler::new(seed, 0);
        let d = s.range(-1, n as i64);
        let v = s.subspace(n, d);
        let js = serde_json::to_string(&v).unwrap();
        let back: Subspace = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(back, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ell_bounds(seed in any::<u64>()) {
        let (arr, k) = instance(seed, 5, 4);
        let (ell, part) = ell_closed_form(&arr, k, &caps()).unwrap();
        let cap = arr.centers().iter().map(|c| c.dim() + k + 1).min().unwrap();
        prop_assert!(part.is_partition_of(arr.n()));
        prop_assert!(k <= ell && ell <= cap);
        let full = arr.dim_meet(arr.full_mask());
        prop_assert!(ell > full + k);
    }

    #[test]
    fn two_view_matches_closed_form(seed in any::<u64>()) {
        let (arr, k) = instance(seed, 6, 2);
        if arr.n() == 2 {
            prop_assert_eq!(ell_two_view(&arr, k).unwrap(), ell_closed_form(&arr, k, &caps()).unwrap().0);
        }
    }

    #[test]
    fn pseudo_disjoint_formula(seed in any::<u64>()) {
        let (arr, k) = instance(seed, 5, 4);
        if is_pseudo_disjoint(&arr, k).holds {
            prop_assert_eq!(ell_pseudo_disjoint(&arr, k).unwrap(), ell_closed_form(&arr, k, &caps()).unwrap().0);
        }
    }

    #[test]
    fn properness_matches_dimension_gap(seed in any::<u64>()) {
        let (arr, k) = instance(seed, 5, 4);
        let dm = dim_multiview(&arr, k, &caps()).unwrap();
        prop_assert_eq!(is_proper(&arr, k), dm != multiview_ambient_dim(&arr, k));
        prop_assert!(dm <= multiview_ambient_dim(&arr, k));
    }

    #[test]
    fn extension_never_raises_ell(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, 1);
        let (arr, k) = instance(seed, 5, 3);
        let d = s.range(-1, arr.ambient() as i64 - k - 1);
        let bigger = arr.with_center(s.subspace(arr.ambient(), d)).unwrap();
        prop_assert!(ell_closed_form(&bigger, k, &caps()).unwrap().0 <= ell_closed_form(&arr, k, &caps()).unwrap().0);
    }

    #[test]
    fn upsilon_lower_bound_is_bracketed(seed in any::<u64>()) {
        let (arr, k) = instance(seed, 4, 3);
        let ell = ell_closed_form(&arr, k, &caps()).unwrap().0;
        let cap = arr.centers().iter().map(|c| c.dim() + k + 1).min().unwrap();
        let u = upsilon(&arr, k, UpsilonMode::Search { seed, trials: 2 }).unwrap();
        prop_assert!(ell <= u.value && u.value <= cap);
        let w = u.witness.unwrap();
        prop_assert_eq!(w.dim(), u.value);
    }

    #[test]
    fn tau_is_last_nonempty_schubert_locus(big_n in 1i64..20, k in 0i64..5, hs in proptest::collection::vec(0i64..20, 1..6)) {
        prop_assume!(k < big_n);
        let hs: Vec<Dim> = hs.into_iter().map(|h| k + h % (big_n - k + 1)).collect();
        let t = tau(big_n, &hs, k);
        prop_assert!(schubert_locus_dim(big_n, &hs, k, t) >= 0);
        prop_assert!(schubert_locus_dim(big_n, &hs, k, t + 1) < 0);
    }
}
