use super::*;
use crate::finab::FinAbGroup;
use crate::linalg::Matrix;
use crate::window::{IndexSet, LatticeGroup, Sublattice};

fn product(moduli: Vec<i64>, i: IndexSet) -> crate::window::WindowGroup<i64> {
    crate::window::WindowGroup::product(FinAbGroup::new(moduli).unwrap(), i).unwrap()
}

#[test]
fn shift_table_product_topology() {
    let budget = Budget::default();
    for moduli in [vec![2], vec![3], vec![4], vec![2, 2]] {
        let order = moduli.iter().product::<i64>() as u64;
        for kind in ShiftKind::ALL {
            let g = product(moduli.clone(), kind.index_set());
            let phi = BandedEndo::shift_map(&g, kind, 1).unwrap();
            let tau = TopologyBase::product(&g, budget.base_prefix);
            let r = h_top_linear(&phi, &tau, &budget).unwrap();
            let expect = if kind == ShiftKind::Right { 1 } else { order };
            assert!(r.value.is_exactly(expect) && r.value.is_proven(), "{moduli:?} {kind:?}: {}", r.value);
        }
    }
}

#[test]
fn left_shift_cotrajectory_is_basic() {
    let g = product(vec![2], IndexSet::Naturals);
    let left = BandedEndo::shift_map(&g, ShiftKind::Left, 1).unwrap();
    let sys = WindowSystem::new(&left);
    for m in 1..=4 {
        let (v, t) = cotrajectory(&sys, &WindowSubgroup::basic(&g, m), &Budget { max_steps: 6, ..Budget::default() }).unwrap();
        assert!(v.is_exactly(2));
        for s in &t.steps {
            assert_eq!(s.subgroup, WindowSubgroup::basic(&g, m + s.n - 1));
        }
        assert!(t.is_consistent());
    }
}

#[test]
fn finite_values_are_zero() {
    let g = FinAbGroup::new(vec![2i64, 4]).unwrap();
    let phi = Endomorphism::Finite(Homomorphism::endomorphism(g.clone(), Matrix::from_rows(vec![vec![1, 1], vec![0, 3]])).unwrap());
    let tau = TopologyBase::profinite(&Carrier::Finite(g), 256).unwrap();
    let r = ent_star_tau(&phi, &tau, &Budget::default()).unwrap();
    assert!(r.value.is_zero());
    assert_eq!(r.members.len(), tau.members().len());
    assert!(ent_algebraic(&phi, &Budget::default()).unwrap().value.is_zero());
}

#[test]
fn doubling_on_z_is_zero() {
    let z = LatticeGroup::new(1).unwrap();
    let mu2 = LatticeEndo::scalar(z, 2i64);
    let sys = LatticeSystem::new(&mu2);
    for m in 1..=40i64 {
        let (v, _) = cotrajectory(&sys, &Sublattice::multiples(z, &m).unwrap(), &Budget::default()).unwrap();
        assert!(v.is_zero() && v.is_proven());
    }
}

#[test]
fn trajectories_of_shifts() {
    let budget = Budget::default();
    for kind in ShiftKind::ALL {
        let g = crate::window::WindowGroup::direct_sum(FinAbGroup::cyclic(3i64).unwrap(), kind.index_set()).unwrap();
        let phi = Endomorphism::Window(BandedEndo::shift_map(&g, kind, 1).unwrap());
        let r = ent_algebraic(&phi, &budget).unwrap();
        let expect = if kind == ShiftKind::Left { 1 } else { 3 };
        assert!(r.value.is_exactly(expect), "{kind:?}: {}", r.value);
    }
}

#[test]
fn profinite_shifts_are_infinite() {
    let budget = Budget { base_prefix: 3, cert_levels: 2, ..Budget::default() };
    let g = crate::window::WindowGroup::direct_sum(FinAbGroup::cyclic(2i64).unwrap(), IndexSet::Naturals).unwrap();
    let tau = TopologyBase::profinite(&Carrier::Window(g.clone()), budget.base_prefix).unwrap();
    let phi = Endomorphism::Window(BandedEndo::shift_map(&g, ShiftKind::Right, 1).unwrap());
    let r = ent_star_tau(&phi, &tau, &budget).unwrap();
    let EntropyValue::Infinite { certificates } = &r.value else { panic!("expected infinity, got {}", r.value) };
    assert_eq!(certificates.len(), 2);
    assert!(certificates.iter().all(|c| c.verify().is_ok()));
    let id = Endomorphism::Window(BandedEndo::identity(&g));
    assert!(ent_star_tau(&id, &tau, &budget).unwrap().value.is_zero());
}

#[test]
fn budget_exhaustion_is_a_lower_bound() {
    let g = product(vec![2], IndexSet::Naturals);
    // a non-translation: x_j ↦ x_j + x_{j+1}, whose windows grow without a proof rule
    let base = g.base().clone();
    let c = vec![vec![Homomorphism::zero(&base, &base), Homomorphism::identity(&base), Homomorphism::identity(&base)]];
    let phi = BandedEndo::new(&g, 0, 1, c).unwrap();
    let (v, t) = cotrajectory(&WindowSystem::new(&phi), &WindowSubgroup::basic(&g, 2), &Budget { max_steps: 3, confirm_window: 8, ..Budget::default() }).unwrap();
    assert_eq!(v.kind(), "at_least");
    assert_eq!(t.steps.len(), 3);
    let (h, _) = cotrajectory(&WindowSystem::new(&phi), &WindowSubgroup::basic(&g, 2), &Budget::default()).unwrap();
    assert_eq!(h, EntropyValue::Exact { alpha: BigUint::from(2u32), mode: Mode::Heuristic });
}

#[test]
fn parallel_map_keeps_order() {
    let items: Vec<u32> = (0..37).collect();
    assert_eq!(parallel_map(&items, 4, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
}

#[test]
fn value_arithmetic() {
    let a = EntropyValue::proven(BigUint::from(2u32));
    let b = EntropyValue::proven(BigUint::from(3u32));
    assert!(a.add(&b).is_exactly(6));
    assert!(a.scale(3).is_exactly(8));
    assert!(EntropyValue::zero().is_zero());
}
