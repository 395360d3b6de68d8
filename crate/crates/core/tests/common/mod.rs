#![allow(dead_code)]

use entrolab_core::finab::{FinAbGroup, Homomorphism, Subgroup};
use entrolab_core::window::{BandedEndo, IndexSet, Window, WindowGroup, WindowSubgroup};
use proptest::prelude::*;

/// The base groups the window suites range over, all of order at most 4.
pub fn small_bases() -> Vec<FinAbGroup<i64>> {
    vec![vec![2], vec![3], vec![4], vec![2, 2]].into_iter().map(|m| FinAbGroup::new(m).unwrap()).collect()
}

/// A subgroup of `g` generated by raw coordinate vectors, reduced first.
pub fn span(g: &FinAbGroup<i64>, raw: &[Vec<i64>]) -> Subgroup<i64> {
    let gens: Vec<_> = raw.iter().map(|v| g.reduce(&v.iter().cycle().take(g.rank()).cloned().collect::<Vec<_>>())).collect();
    Subgroup::from_generators(g, &gens).unwrap()
}

pub fn raw_vectors(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..12, 1..=24), 0..=max)
}

/// A window subgroup with window `[lo, lo + width)` and a random section.
pub fn window_subgroup(g: &WindowGroup<i64>, lo: i64, width: usize, raw: &[Vec<i64>]) -> WindowSubgroup<i64> {
    let w = g.clip(Window::new(lo, lo + width as i64));
    WindowSubgroup::new(g, w, span(&g.block(&w), raw)).unwrap()
}

/// A banded map from a coefficient seed: every coefficient is one of the
/// endomorphisms of the base, in enumeration order.
pub fn banded(g: &WindowGroup<i64>, shift: i64, half_width: usize, period: usize, seed: &[usize]) -> BandedEndo<i64> {
    let homs = Homomorphism::enumerate(g.base(), g.base());
    let mut it = seed.iter().cycle();
    let coefficients = (0..period).map(|_| (0..2 * half_width + 1).map(|_| homs[*it.next().unwrap() % homs.len()].clone()).collect()).collect();
    BandedEndo::new(g, shift, half_width, coefficients).unwrap()
}

pub fn index_set(two_sided: bool) -> IndexSet {
    if two_sided {
        IndexSet::Integers
    } else {
        IndexSet::Naturals
    }
}

/// A valid homomorphism from raw entries: entry `(j, i)` is a multiple of
/// `k_j / gcd(k_j, m_i)`.
pub fn valid_hom(src: &FinAbGroup<i64>, dst: &FinAbGroup<i64>, raw: &[i64]) -> Homomorphism<i64> {
    use entrolab_core::linalg::Matrix;
    use num_integer::Integer;
    let mut a = Matrix::zeros(dst.rank(), src.rank());
    let mut it = raw.iter().cycle();
    for (j, k) in dst.moduli().iter().enumerate() {
        for (i, m) in src.moduli().iter().enumerate() {
            a.set(j, i, (it.next().unwrap() * (k / k.gcd(m))).mod_floor(k));
        }
    }
    Homomorphism::new(src.clone(), dst.clone(), a).unwrap()
}
