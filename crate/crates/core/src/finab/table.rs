use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;

use super::{enumerate_subgroups, FinAbGroup, Subgroup};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::{to_biguint, IntScalar};

/// Position of a subgroup inside a [`SubgroupTable`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubgroupId(pub u32);

/// The complete subgroup lattice of a small finite group, with memoized
/// meets and joins. Exhaustive suites run thousands of endomorphisms over
/// the same group; the table lets them share every lattice operation that
/// does not depend on the endomorphism.
pub struct SubgroupTable<T: IntScalar> {
    group: FinAbGroup<T>,
    subgroups: Vec<Subgroup<T>>,
    ids: HashMap<Matrix<T>, SubgroupId>,
    indices: Vec<BigUint>,
    meets: Vec<OnceLock<SubgroupId>>,
    joins: Vec<OnceLock<SubgroupId>>,
}

impl<T: IntScalar> SubgroupTable<T> {
    pub fn new(group: &FinAbGroup<T>, bound: usize) -> Result<Self> {
        let subgroups = enumerate_subgroups(group, bound)?;
        let n = subgroups.len();
        let ids = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.lattice().clone(), SubgroupId(i as u32)))
            .collect();
        let indices = subgroups.iter().map(|s| to_biguint(&s.index())).collect();
        Ok(SubgroupTable {
            group: group.clone(),
            subgroups,
            ids,
            indices,
            meets: (0..n * n).map(|_| OnceLock::new()).collect(),
            joins: (0..n * n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn group(&self) -> &FinAbGroup<T> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup<T>] {
        &self.subgroups
    }

    pub fn ids(&self) -> impl Iterator<Item = SubgroupId> {
        (0..self.subgroups.len() as u32).map(SubgroupId)
    }

    pub fn get(&self, id: SubgroupId) -> &Subgroup<T> {
        &self.subgroups[id.0 as usize]
    }

    /// Looks up a subgroup of the table's group. Panics if it is foreign,
    /// which would mean the table is incomplete.
    pub fn id_of(&self, s: &Subgroup<T>) -> SubgroupId {
        *self.ids.get(s.lattice()).expect("subgroup missing from complete table")
    }

    pub fn index(&self, id: SubgroupId) -> &BigUint {
        &self.indices[id.0 as usize]
    }

    pub fn meet(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let n = self.subgroups.len();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        *self.meets[lo.0 as usize * n + hi.0 as usize].get_or_init(|| {
            let m = self.get(lo).intersect(self.get(hi)).expect("same ambient");
            self.id_of(&m)
        })
    }

    pub fn join(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let n = self.subgroups.len();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        *self.joins[lo.0 as usize * n + hi.0 as usize].get_or_init(|| {
            let j = self.get(lo).sum(self.get(hi)).expect("same ambient");
            self.id_of(&j)
        })
    }

    pub fn is_subset(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.meet(a, b) == a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_meets_and_joins() {
        let g = FinAbGroup::<i64>::new(vec![2, 4]).unwrap();
        let t = SubgroupTable::new(&g, 256).unwrap();
        let whole = t.id_of(&Subgroup::whole(&g));
        let triv = t.id_of(&Subgroup::trivial(&g));
        for a in t.ids() {
            assert_eq!(t.meet(a, whole), a);
            assert_eq!(t.join(a, triv), a);
            assert!(t.is_subset(triv, a));
        }
        assert_eq!(t.index(whole), &BigUint::from(1u32));
    }
}
