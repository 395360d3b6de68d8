mod common;

use common::*;
use entrolab_core::entropy::{cotrajectory, trajectory, Budget, CoSystem, EntropyValue, Mode, TrSystem, WindowSystem};
use entrolab_core::window::{BandedEndo, FactorialSign, FiniteSupport, KernelRuleSubgroup, ShiftKind, SparseElement, Window, WindowGroup, WindowSubgroup};
use entrolab_core::BigInt;
use entrolab_core::finab::{FinAbGroup, Homomorphism};
use entrolab_core::scalar::IntScalar;
use proptest::prelude::*;

fn sparse(g: &WindowGroup<i64>, lo: i64, vals: &[Vec<i64>]) -> SparseElement<i64> {
    let r = g.base().rank();
    let entries = vals
        .iter()
        .enumerate()
        .map(|(p, v)| (BigInt::from(lo + p as i64), g.base().reduce(&v.iter().cycle().take(r).cloned().collect::<Vec<_>>()).into_coords()))
        .filter(|(i, _)| g.has_index(i))
        .collect();
    g.sparse(entries).unwrap()
}

fn translation<T: IntScalar>(g: &WindowGroup<T>, s: i64) -> BandedEndo<T> {
    BandedEndo::new(g, s, 0, vec![vec![Homomorphism::identity(g.base())]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// `x ∈ φ^{-1}(N)` exactly when `φx ∈ N`, for banded maps and random
    /// window subgroups, against direct evaluation.
    #[test]
    fn preimage_matches_evaluation(
        base in 0usize..4, two in any::<bool>(), product in any::<bool>(),
        shift in -2i64..=2, hw in 0usize..=1, period in 1usize..=2, seed in prop::collection::vec(0usize..64, 6),
        lo in 0i64..3, width in 1usize..=3, raw in raw_vectors(3),
        xs in prop::collection::vec(prop::collection::vec(prop::collection::vec(0i64..4, 2), 12), 24),
    ) {
        let k = small_bases()[base].clone();
        let i = index_set(two);
        let g = if product { WindowGroup::product(k, i).unwrap() } else { WindowGroup::direct_sum(k, i).unwrap() };
        let phi = banded(&g, shift, hw, period, &seed);
        let n = window_subgroup(&g, lo, width, &raw);
        let pre = phi.preimage_window(&n).unwrap();
        for vals in &xs {
            let x = sparse(&g, -4, vals);
            prop_assert_eq!(pre.contains(&x), n.contains(&phi.apply(&x)));
        }
    }

    /// `φ(F)` is exactly the set of images, checked on a spanning set.
    #[test]
    fn image_contains_images(
        base in 0usize..4, two in any::<bool>(), shift in -2i64..=2, hw in 0usize..=1,
        seed in prop::collection::vec(0usize..64, 6), lo in 0i64..3, width in 1usize..=3, raw in raw_vectors(3),
    ) {
        let g = WindowGroup::direct_sum(small_bases()[base].clone(), index_set(two)).unwrap();
        let phi = banded(&g, shift, hw, 1, &seed);
        let w = g.clip(Window::new(lo, lo + width as i64));
        let f = FiniteSupport::new(&g, w, span(&g.block(&w), &raw)).unwrap();
        let img = phi.image(&f).unwrap();
        let r = g.base().rank();
        for s in f.section().generators() {
            let vals: Vec<Vec<i64>> = s.coords().chunks(r).map(|c| c.to_vec()).collect();
            let x = sparse(&g, f.window().lo(), &vals);
            prop_assert!(f.contains(&x));
            prop_assert!(img.contains(&phi.apply(&x)));
        }
        prop_assert!(img.order() <= f.order());
    }

    /// `φ^{-1}(N)` for every shift kind against a materialized truncation:
    /// every `x` supported in `[-1, 6)` is tested, which covers all
    /// coordinates either side reads. The preimage index divides `|K|^len`.
    #[test]
    fn shift_preimage_on_truncations(base in 0usize..4, kind in 0usize..4, lo in 0i64..4, width in 1usize..=2, raw in raw_vectors(2)) {
        let kind = ShiftKind::ALL[kind];
        let g = WindowGroup::direct_sum(small_bases()[base].clone(), kind.index_set()).unwrap();
        let phi = BandedEndo::shift_map(&g, kind, 1).unwrap();
        let n = window_subgroup(&g, lo, width, &raw);
        let pre = phi.preimage_window(&n).unwrap();
        let cap = g.base().order().pow(n.window().len() as u32);
        prop_assert_eq!(cap % pre.index(), 0);
        let trunc = g.clip(Window::new(-1, 6));
        let block = g.block(&trunc);
        let r = g.base().rank();
        for v in block.elements() {
            let entries = trunc.indices().enumerate().map(|(p, i)| (BigInt::from(i), v.coords()[p * r..(p + 1) * r].to_vec())).collect();
            let x = g.sparse(entries).unwrap();
            prop_assert_eq!(pre.contains(&x), n.contains(&phi.apply(&x)));
        }
    }

    /// The kernel rule defines a subgroup: `h` is additive.
    #[test]
    fn kernel_rule_is_additive(
        p in prop::sample::select(vec![2i64, 3, 5]), m in 1usize..=4, plus in any::<bool>(),
        a in prop::collection::vec((0usize..40, 0i64..5), 0..8), b in prop::collection::vec((0usize..40, 0i64..5), 0..8),
    ) {
        let g = WindowGroup::direct_sum(entrolab_core::finab::FinAbGroup::cyclic(p).unwrap(), entrolab_core::window::IndexSet::Naturals).unwrap();
        let sign = if plus { FactorialSign::Plus } else { FactorialSign::Minus };
        let rule = KernelRuleSubgroup::standard(&g, m, sign).unwrap();
        // indices near the tail positions, where the rule is nontrivial
        let pos = |t: usize| -> BigInt {
            let j = t % m + 1;
            let lvl = t / (2 * m) + 1;
            let base = rule.tail_position(j, lvl);
            if t % 2 == 0 { base } else { BigInt::from(t) }
        };
        let make = |v: &[(usize, i64)]| g.sparse(v.iter().map(|&(t, c)| (pos(t), vec![c % p])).collect()).unwrap_or_else(|_| SparseElement::zero());
        let (x, y) = (make(&a), make(&b));
        let sum = x.add(g.base(), &y);
        let hx = rule.apply(&x);
        let hy = rule.apply(&y);
        prop_assert_eq!(rule.apply(&sum), rule.target().add(&hx, &hy));
        prop_assert_eq!(rule.contains(&x.neg(g.base())), rule.contains(&x));
        if rule.contains(&x) && rule.contains(&y) {
            prop_assert!(rule.contains(&sum));
        }
    }

    /// The two-sided shift is a bijection of `K^(Z)` with the inverse shift as inverse.
    #[test]
    fn two_sided_shift_is_bijective(
        base in 0usize..4, power in 1u32..=3, vals in prop::collection::vec(prop::collection::vec(0i64..4, 2), 0..10), lo in -6i64..6,
    ) {
        let g = WindowGroup::direct_sum(small_bases()[base].clone(), entrolab_core::window::IndexSet::Integers).unwrap();
        let phi = BandedEndo::shift_map(&g, ShiftKind::TwoSided, power).unwrap();
        let inv = phi.inverse().unwrap();
        let x = sparse(&g, lo, &vals);
        prop_assert_eq!(inv.apply(&phi.apply(&x)), x.clone());
        prop_assert_eq!(phi.apply(&inv.apply(&x)), x.clone());
        prop_assert_eq!(phi.apply(&x).is_zero(), x.is_zero());
        prop_assert_eq!(inv, BandedEndo::shift_map(&g, ShiftKind::TwoSidedInverse, power).unwrap());
    }

    /// The proven value of the edge-state rule agrees with plain iteration
    /// far past the point where the proof fired.
    #[test]
    fn edge_rule_is_sound(
        base in 0usize..4, two in any::<bool>(), product in any::<bool>(), k in 1i64..=3, negative in any::<bool>(),
        lo in 0i64..3, width in 1usize..=4, raw in raw_vectors(4),
    ) {
        let kset = index_set(two);
        let s = if negative { -k } else { k };
        // twenty steps of a width-4 window overflow i64 indices
        let small = small_bases()[base].clone();
        let kbase = FinAbGroup::new(small.moduli().iter().map(|&m| BigInt::from(m)).collect()).unwrap();
        let g = if product { WindowGroup::product(kbase.clone(), kset).unwrap() } else { WindowGroup::direct_sum(kbase.clone(), kset).unwrap() };
        let phi = translation(&g, s);
        let sys = WindowSystem::new(&phi);
        let w = g.clip(Window::new(lo, lo + width as i64));
        let section = span(&small.power(w.len()), &raw).convert::<BigInt>().unwrap();
        let n = WindowSubgroup::new(&g, w, section.clone()).unwrap();
        let (v, trace) = cotrajectory(&sys, &n, &Budget::default()).unwrap();
        let EntropyValue::Exact { alpha, mode: Mode::Proven } = v else { return Err(TestCaseError::fail(format!("not proven: {v}"))) };
        prop_assert!(trace.is_consistent());
        let mut b = n.clone();
        for _ in 1..20 {
            b = sys.pull(&n, &b).unwrap();
        }
        let next = sys.pull(&n, &b).unwrap();
        prop_assert_eq!(sys.index(&next) / sys.index(&b), alpha);

        let d = WindowGroup::direct_sum(kbase, kset).unwrap();
        let f = FiniteSupport::new(&d, w, section).unwrap();
        let dsys = WindowSystem::new(&translation(&d, s));
        let (tv, _) = trajectory(&dsys, &f, &Budget::default()).unwrap();
        let EntropyValue::Exact { alpha: ta, mode: Mode::Proven } = tv else { return Err(TestCaseError::fail(format!("trajectory not proven: {tv}"))) };
        let mut t = f.clone();
        for _ in 1..20 {
            t = dsys.push(&f, &t).unwrap();
        }
        let tn = dsys.push(&f, &t).unwrap();
        prop_assert_eq!(dsys.order(&tn) / dsys.order(&t), ta);
    }
}
