mod common;

use common::*;
use entrolab_core::duality::*;
use entrolab_core::entropy::{cotrajectory, trajectory, Budget, CoSystem, FiniteSystem, TrSystem, WindowSystem};
use entrolab_core::finab::{enumerate_subgroups, groups_of_order, FinAbGroup, Homomorphism, Subgroup, SubgroupTable};
use entrolab_core::window::{BandedEndo, IndexSet, ShiftKind, Window, WindowGroup};
use proptest::prelude::*;

fn groups_upto(n: u64) -> Vec<FinAbGroup<i64>> {
    (1..=n).flat_map(groups_of_order::<i64>).collect()
}

/// A pair of groups whose moduli are not in invariant form.
fn odd_pairs() -> Vec<(FinAbGroup<i64>, FinAbGroup<i64>)> {
    [(vec![6], vec![4]), (vec![2, 4], vec![12]), (vec![3, 2], vec![6, 2]), (vec![9], vec![3, 3]), (vec![4, 4], vec![2, 8])]
        .into_iter()
        .map(|(a, b)| (FinAbGroup::new(a).unwrap(), FinAbGroup::new(b).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// `⟨φx, χ⟩ = ⟨x, φ^χ⟩` exhaustively, and `φ^^ = φ`.
    #[test]
    fn duals_are_adjoint_and_involutive(pi in 0usize..5, swap in any::<bool>(), raw in prop::collection::vec(0i64..64, 8)) {
        let (a, b) = odd_pairs()[pi].clone();
        let (src, dst) = if swap { (b, a) } else { (a, b) };
        let phi = valid_hom(&src, &dst, &raw);
        let dual = dual_hom(&phi);
        prop_assert_eq!(dual.source(), phi.target());
        prop_assert!(is_adjoint(&phi, &dual));
        prop_assert_eq!(dual_hom(&dual), phi);
    }

    /// `(φ^{-n}(H))^⊥ = φ^^n(H^⊥)` for `n ≤ 4`.
    #[test]
    fn preimages_dualize_to_images(gi in 0usize..40, raw in prop::collection::vec(0i64..64, 16), hraw in raw_vectors(3)) {
        let all = groups_upto(36);
        let g = &all[gi % all.len()];
        let phi = valid_hom(g, g, &hraw.iter().flatten().chain(&raw).cloned().collect::<Vec<_>>());
        let dual = dual_hom(&phi);
        let h = span(g, &hraw);
        let (mut pre, mut img) = (h.clone(), annihilator(&h));
        for _ in 0..=4 {
            prop_assert_eq!(annihilator(&pre), img.clone());
            pre = Subgroup::preimage(&phi, &pre).unwrap();
            img = Subgroup::image(&dual, &img).unwrap();
        }
    }

    /// The local bridge identity `|C_n(φ, N)| = |T_n(φ^, N^⊥)|` with
    /// `B_n^⊥ = T_n`, for banded maps of windows.
    #[test]
    fn window_local_identity(base in 0usize..2, two in any::<bool>(), shift in -1i64..=1, hw in 0usize..=1, period in 1usize..=2,
                             seed in prop::collection::vec(0usize..64, 6), lo in 0i64..2, width in 1usize..=2, raw in raw_vectors(2)) {
        let g = WindowGroup::product(small_bases()[base].clone(), index_set(two)).unwrap();
        let phi = banded(&g, shift, hw, period, &seed);
        let dual = window_dual(&phi).unwrap();
        let reach = 8;
        prop_assert!(is_window_adjoint(&phi, &dual, &Window::new(-reach, reach)));
        let n = window_subgroup(&g, lo, width, &raw);
        let (co, tr) = (WindowSystem::new(&phi), WindowSystem::new(&dual));
        let f = window_subgroup_dual(&n).unwrap();
        let (mut b, mut t) = (n.clone(), f.clone());
        for _ in 0..5 {
            prop_assert_eq!(co.index(&b), tr.order(&t));
            let d = window_subgroup_dual(&b).unwrap();
            prop_assert!(d.is_subgroup_of(&t) && t.is_subgroup_of(&d));
            b = co.pull(&n, &b).unwrap();
            t = tr.push(&f, &t).unwrap();
        }
    }
}

#[test]
fn annihilator_lattice_is_anti_isomorphic() {
    for g in groups_upto(24) {
        let table = SubgroupTable::new(&g, 256).unwrap();
        let ann: Vec<_> = table.subgroups().iter().map(|s| table.id_of(&annihilator(s))).collect();
        let pairing = CharacterPairing::new(&g);
        assert_eq!(pairing.dual_order(), g.order());
        assert!(pairing.is_nondegenerate(256).unwrap());
        let mut seen = vec![false; table.len()];
        for a in table.ids() {
            let s = table.get(a);
            assert!(order_duality_holds(s));
            assert_eq!(&co_annihilator(&annihilator(s)), s);
            assert!(!std::mem::replace(&mut seen[ann[a.0 as usize].0 as usize], true), "annihilator not injective");
            for b in table.ids() {
                let (pa, pb) = (ann[a.0 as usize], ann[b.0 as usize]);
                assert_eq!(ann[table.join(a, b).0 as usize], table.meet(pa, pb));
                assert_eq!(ann[table.meet(a, b).0 as usize], table.join(pa, pb));
                assert_eq!(table.is_subset(a, b), table.is_subset(pb, pa));
            }
        }
    }
}

#[test]
fn finite_local_identity() {
    let budget = Budget::default();
    for g in groups_upto(16) {
        let subs = enumerate_subgroups(&g, 256).unwrap();
        let homs = Homomorphism::enumerate(&g, &g);
        for phi in homs.iter().step_by(homs.len().div_ceil(20)) {
            let dual = dual_hom(phi);
            let (co, tr) = (FiniteSystem::new(phi).unwrap(), FiniteSystem::new(&dual).unwrap());
            for n in &subs {
                let (v, t) = cotrajectory(&co, n, &budget).unwrap();
                let (w, u) = trajectory(&tr, &annihilator(n), &budget).unwrap();
                assert!(v.is_zero() && w.is_zero());
                for (a, b) in t.steps.iter().zip(&u.steps) {
                    assert_eq!(a.size, b.size);
                    assert_eq!(annihilator(&a.subgroup), b.subgroup);
                }
            }
        }
    }
}

#[test]
fn examples() {
    let z4 = FinAbGroup::new(vec![4i64]).unwrap();
    let mu2 = Homomorphism::scalar(&z4, 2);
    assert_eq!(dual_hom(&mu2), mu2);
    assert_eq!(dual_hom(&Homomorphism::identity(&z4)), Homomorphism::identity(&z4));
    let a = annihilator(&Subgroup::multiples(&z4, &2));
    assert_eq!(a.order(), 2);
    assert_eq!(a, Subgroup::multiples(&z4, &2));
    assert!(annihilator(&Subgroup::trivial(&z4)).is_whole());
    assert!(annihilator(&Subgroup::whole(&z4)).is_trivial());

    for k in small_bases() {
        let n = WindowGroup::direct_sum(k.clone(), IndexSet::Naturals).unwrap();
        let z = WindowGroup::direct_sum(k.clone(), IndexSet::Integers).unwrap();
        let dual_of = |g: &WindowGroup<i64>, kind| window_dual(&BandedEndo::shift_map(&g.with_flavor(entrolab_core::window::Flavor::Product), kind, 1).unwrap()).unwrap();
        assert_eq!(dual_of(&n, ShiftKind::Right), BandedEndo::shift_map(&n, ShiftKind::Left, 1).unwrap());
        assert_eq!(dual_of(&n, ShiftKind::Left), BandedEndo::shift_map(&n, ShiftKind::Right, 1).unwrap());
        assert_eq!(dual_of(&z, ShiftKind::TwoSided), BandedEndo::shift_map(&z, ShiftKind::TwoSided, 1).unwrap().inverse().unwrap());
    }
}
