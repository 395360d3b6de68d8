mod common;

use std::collections::BTreeSet;

use entrolab_core::finab::{enumerate_subgroups, groups_of_order, FinAbGroup, GroupElement, Homomorphism, Subgroup};
use num_integer::Integer;
use proptest::prelude::*;

type Set = BTreeSet<Vec<i64>>;

/// Ambients of order at most 64, including moduli lists not in invariant form.
fn ambients() -> Vec<FinAbGroup<i64>> {
    let mut out: Vec<FinAbGroup<i64>> = [vec![12], vec![4, 2], vec![2, 4], vec![6, 4], vec![3, 4], vec![2, 3, 5], vec![8, 8], vec![2, 2, 2, 2, 2, 2], vec![9, 3], vec![1, 7]]
        .into_iter()
        .map(|m| FinAbGroup::new(m).unwrap())
        .collect();
    out.extend(groups_of_order::<i64>(16));
    out
}

fn closure(g: &FinAbGroup<i64>, gens: &[GroupElement<i64>]) -> Set {
    let mut set: Set = BTreeSet::from([g.zero().into_coords()]);
    let mut frontier = vec![g.zero()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.add(&x, s);
            if set.insert(y.coords().to_vec()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn elements_of(s: &Subgroup<i64>) -> Set {
    closure(s.ambient(), &s.generators())
}

fn pick(g: &FinAbGroup<i64>, raw: &[Vec<i64>]) -> Vec<GroupElement<i64>> {
    raw.iter().map(|v| g.reduce(&v.iter().cycle().take(g.rank()).cloned().collect::<Vec<_>>())).collect()
}

fn raw_gens() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..64, 6), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattice_operations_match_element_sets(gi in 0usize..15, a in raw_gens(), b in raw_gens(), hraw in prop::collection::vec(0i64..64, 36)) {
        let all = ambients();
        let g = &all[gi % all.len()];
        let (ga, gb) = (pick(g, &a), pick(g, &b));
        let h1 = Subgroup::from_generators(g, &ga).unwrap();
        let h2 = Subgroup::from_generators(g, &gb).unwrap();
        let (s1, s2) = (closure(g, &ga), closure(g, &gb));
        prop_assert_eq!(&elements_of(&h1), &s1);
        prop_assert_eq!(h1.order() as usize, s1.len());
        prop_assert_eq!(h1.index() * h1.order(), g.order());

        let meet: Set = s1.intersection(&s2).cloned().collect();
        prop_assert_eq!(elements_of(&h1.intersect(&h2).unwrap()), meet);
        let join = closure(g, &[ga.clone(), gb.clone()].concat());
        prop_assert_eq!(elements_of(&h1.sum(&h2).unwrap()), join);
        prop_assert!(h1.intersect(&h2).unwrap().index() <= h1.index() * h2.index());

        let phi = common::valid_hom(g, g, &hraw);
        let pre: Set = g.elements().filter(|x| s2.contains(phi.apply(x).coords())).map(|x| x.into_coords()).collect();
        prop_assert_eq!(elements_of(&Subgroup::preimage(&phi, &h2).unwrap()), pre);
        let img: Set = h1.elements().iter().map(|x| phi.apply(x).into_coords()).collect();
        prop_assert_eq!(elements_of(&Subgroup::image(&phi, &h1).unwrap()), img);
    }

    /// Any generating set of the same element set gives the identical value.
    #[test]
    fn canonical_form_is_unique(gi in 0usize..15, a in raw_gens(), mult in prop::collection::vec(0i64..9, 8)) {
        let all = ambients();
        let g = &all[gi % all.len()];
        let ga = pick(g, &a);
        let h = Subgroup::from_generators(g, &ga).unwrap();
        // a different generating set: multiples and sums of the old ones, plus the old ones reversed
        let mut other: Vec<GroupElement<i64>> = ga.iter().rev().cloned().collect();
        for (i, x) in ga.iter().enumerate() {
            let y = g.scale(&mult[i % 8], x);
            other.push(g.add(&y, &ga[(i + 1) % ga.len()]));
        }
        prop_assert_eq!(Subgroup::from_generators(g, &other).unwrap(), h.clone());
        prop_assert_eq!(Subgroup::from_generators(g, &h.generators()).unwrap(), h);
    }

    /// The invariant factors of `G/H`, against counts of `{x : dx ∈ H}`.
    #[test]
    fn quotient_invariants_match_torsion_counts(gi in 0usize..15, a in raw_gens()) {
        let all = ambients();
        let g = &all[gi % all.len()];
        let h = Subgroup::from_generators(g, &pick(g, &a)).unwrap();
        let inv = h.quotient_invariants();
        prop_assert_eq!(inv.iter().product::<i64>(), h.index());
        prop_assert!(inv.iter().all(|&d| d > 1));
        for w in inv.windows(2) {
            prop_assert!(w[1] % w[0] == 0);
        }
        let set = elements_of(&h);
        for d in 1..=g.exponent() {
            let killed = g.elements().filter(|x| set.contains(g.scale(&d, x).coords())).count() / set.len();
            let expect: i64 = inv.iter().map(|q| q.gcd(&d)).product();
            prop_assert_eq!(killed as i64, expect, "d = {}", d);
        }
    }
}

#[test]
fn enumeration_is_exhaustive_and_lagrange_holds() {
    for n in 1..=32u64 {
        for g in groups_of_order::<i64>(n) {
            let subs = enumerate_subgroups(&g, 256).unwrap();
            let mut sets: BTreeSet<Set> = BTreeSet::new();
            for s in &subs {
                assert_eq!(s.index() * s.order(), g.order());
                assert!(sets.insert(elements_of(s)), "duplicate subgroup in {:?}", g.moduli());
            }
            // every cyclic and two-generated subgroup appears
            let elems: Vec<_> = g.elements().collect();
            for x in &elems {
                for y in elems.iter().step_by(3) {
                    assert!(sets.contains(&closure(&g, &[x.clone(), y.clone()])));
                }
            }
        }
    }
}

#[test]
fn examples() {
    let z12 = FinAbGroup::new(vec![12i64]).unwrap();
    let h = Subgroup::from_generators(&z12, &[z12.element(vec![4]).unwrap()]).unwrap();
    assert_eq!((h.order(), h.index()), (3, 4));
    let (two, three) = (Subgroup::multiples(&z12, &2), Subgroup::multiples(&z12, &3));
    assert_eq!(two.intersect(&three).unwrap(), Subgroup::multiples(&z12, &6));
    assert!(two.sum(&three).unwrap().is_whole());
    let g = FinAbGroup::new(vec![4i64, 2]).unwrap();
    let h = Subgroup::from_generators(&g, &[g.element(vec![2, 0]).unwrap()]).unwrap();
    assert_eq!(h.index(), 4);
    assert_eq!(h.quotient_invariants(), vec![2, 2]);
    assert!(Subgroup::whole(&g).quotient_invariants().is_empty());
    assert_eq!(Subgroup::trivial(&g).quotient_invariants(), vec![2, 4]);
    assert_eq!(Subgroup::from_generators(&g, &[]).unwrap().index(), 8);

    let z8 = FinAbGroup::new(vec![8i64]).unwrap();
    let mu2 = Homomorphism::scalar(&z8, 2);
    let four = Subgroup::from_generators(&z8, &[z8.element(vec![4]).unwrap()]).unwrap();
    assert_eq!(Subgroup::preimage(&mu2, &four).unwrap(), Subgroup::multiples(&z8, &2));
    assert_eq!(Subgroup::image(&mu2, &Subgroup::whole(&z8)).unwrap(), Subgroup::multiples(&z8, &2));
    assert!(Subgroup::image(&Homomorphism::zero(&z8, &z8), &Subgroup::whole(&z8)).unwrap().is_trivial());

    let counts: Vec<usize> = [vec![4i64], vec![2, 2], vec![7]]
        .into_iter()
        .map(|m| enumerate_subgroups(&FinAbGroup::new(m).unwrap(), 256).unwrap().len())
        .collect();
    assert_eq!(counts, [3, 5, 2]);
    assert!(enumerate_subgroups(&FinAbGroup::new(vec![2i64; 9]).unwrap(), 256).is_err());
}
