use super::{FinAbGroup, Homomorphism, Subgroup};
use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// Largest group order representable by [`ElementSet`].
pub const BITSET_ORDER_BOUND: usize = 64;

/// A subset of a group of order at most 64, one bit per element code.
pub type ElementSet = u64;

/// A group of order ≤ 64 with an explicit addition table. Subgroups are
/// bitsets of element codes, homomorphisms are code tables. This is the
/// backend of the exhaustive suites, where lattice arithmetic per
/// endomorphism would dominate the run time.
#[derive(Clone, Debug)]
pub struct ElementTable {
    order: usize,
    add: Vec<u8>,
}

impl ElementTable {
    pub fn new<T: IntScalar>(group: &FinAbGroup<T>) -> Result<Self> {
        let order = group
            .order_usize()
            .filter(|&n| n <= BITSET_ORDER_BOUND)
            .ok_or_else(|| Error::OrderBoundExceeded {
                order: group.order().to_string(),
                bound: BITSET_ORDER_BOUND.to_string(),
            })?;
        let elems: Vec<_> = group.elements().collect();
        let mut add = vec![0u8; order * order];
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                add[a * order + b] = group.encode(&group.add(x, y)) as u8;
            }
        }
        Ok(ElementTable { order, add })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn whole(&self) -> ElementSet {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn trivial(&self) -> ElementSet {
        1
    }

    pub fn mask<T: IntScalar>(&self, s: &Subgroup<T>) -> ElementSet {
        s.elements().iter().fold(0, |m, x| m | (1u64 << s.ambient().encode(x)))
    }

    /// `codes[x] = phi(x)` for every element code `x`.
    pub fn tabulate<T: IntScalar>(&self, phi: &Homomorphism<T>) -> Vec<u8> {
        let g = phi.source();
        let h = phi.target();
        g.elements().map(|x| h.encode(&phi.apply(&x)) as u8).collect()
    }

    pub fn preimage(&self, codes: &[u8], s: ElementSet) -> ElementSet {
        codes
            .iter()
            .enumerate()
            .filter(|(_, &y)| s >> y & 1 == 1)
            .fold(0, |m, (x, _)| m | (1u64 << x))
    }

    pub fn image(&self, codes: &[u8], s: ElementSet) -> ElementSet {
        bits(s).fold(0, |m, x| m | (1u64 << codes[x]))
    }

    pub fn sum(&self, a: ElementSet, b: ElementSet) -> ElementSet {
        let mut out = 0;
        for x in bits(a) {
            for y in bits(b) {
                out |= 1u64 << self.add[x * self.order + y];
            }
        }
        out
    }

    pub fn size(s: ElementSet) -> u32 {
        s.count_ones()
    }
}

fn bits(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_ops_match_lattice_ops() {
        let g = FinAbGroup::<i64>::new(vec![4, 2]).unwrap();
        let t = ElementTable::new(&g).unwrap();
        let subs = super::super::enumerate_subgroups(&g, 64).unwrap();
        let phi = Homomorphism::endomorphism(g.clone(), crate::linalg::Matrix::from_rows(vec![vec![1, 2], vec![1, 1]]))
            .unwrap();
        let codes = t.tabulate(&phi);
        for a in &subs {
            assert_eq!(t.preimage(&codes, t.mask(a)), t.mask(&Subgroup::preimage(&phi, a).unwrap()));
            assert_eq!(t.image(&codes, t.mask(a)), t.mask(&Subgroup::image(&phi, a).unwrap()));
            for b in &subs {
                assert_eq!(t.sum(t.mask(a), t.mask(b)), t.mask(&a.sum(b).unwrap()));
                assert_eq!(t.mask(a) & t.mask(b), t.mask(&a.intersect(b).unwrap()));
            }
        }
        assert_eq!(t.whole(), t.mask(&Subgroup::whole(&g)));
    }

    #[test]
    fn oversized_group_rejected() {
        let g = FinAbGroup::<i64>::new(vec![5, 13]).unwrap();
        assert!(matches!(ElementTable::new(&g), Err(Error::OrderBoundExceeded { .. })));
    }
}
