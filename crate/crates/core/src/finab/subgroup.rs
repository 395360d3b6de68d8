use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;

use super::{FinAbGroup, GroupElement, Homomorphism};
use crate::error::{Error, Result};
use crate::linalg::{hnf_mod, smith_normal_form, solve_lower, Matrix};
use crate::scalar::{from_usize, to_big, IntScalar};

/// Groups larger than this are refused by [`enumerate_subgroups`].
pub const DEFAULT_ORDER_BOUND: usize = 256;

/// A subgroup of a finite abelian group, stored as the column HNF of its
/// preimage lattice in `Z^r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup<T = BigInt> {
    ambient: FinAbGroup<T>,
    lattice: Matrix<T>,
}

impl<T: IntScalar> Subgroup<T> {
    pub(crate) fn from_lattice_gens(ambient: &FinAbGroup<T>, gens: &[Vec<T>]) -> Self {
        Subgroup { ambient: ambient.clone(), lattice: hnf_mod(gens, ambient.moduli()) }
    }

    pub fn from_generators(ambient: &FinAbGroup<T>, gens: &[GroupElement<T>]) -> Result<Self> {
        if gens.iter().any(|g| !ambient.contains(g)) {
            return Err(Error::AmbientMismatch);
        }
        let cols: Vec<Vec<T>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Ok(Self::from_lattice_gens(ambient, &cols))
    }

    pub fn whole(ambient: &FinAbGroup<T>) -> Self {
        Subgroup { ambient: ambient.clone(), lattice: Matrix::identity(ambient.rank()) }
    }

    pub fn trivial(ambient: &FinAbGroup<T>) -> Self {
        Subgroup { ambient: ambient.clone(), lattice: Matrix::diagonal_matrix(ambient.moduli()) }
    }

    /// `k·G`.
    pub fn multiples(ambient: &FinAbGroup<T>, k: &T) -> Self {
        let gens: Vec<Vec<T>> = (0..ambient.rank())
            .map(|i| {
                let mut v = vec![T::zero(); ambient.rank()];
                v[i] = k.clone();
                v
            })
            .collect();
        Self::from_lattice_gens(ambient, &gens)
    }

    pub fn ambient(&self) -> &FinAbGroup<T> {
        &self.ambient
    }

    /// The canonical lattice basis (columns).
    pub fn lattice(&self) -> &Matrix<T> {
        &self.lattice
    }

    /// `[G : H]`, the determinant of the lattice basis.
    pub fn index(&self) -> T {
        self.lattice.diagonal().into_iter().fold(T::one(), |a, d| a * d)
    }

    pub fn order(&self) -> T {
        self.ambient.order() / self.index()
    }

    pub fn is_whole(&self) -> bool {
        self.index().is_one()
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    pub fn contains(&self, x: &GroupElement<T>) -> bool {
        self.ambient.contains(x) && solve_lower(&self.lattice, x.coords()).is_some()
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.lattice.columns().iter().all(|c| solve_lower(&other.lattice, c).is_some())
    }

    /// Nonzero lattice columns reduced into the group; they generate the subgroup.
    pub fn generators(&self) -> Vec<GroupElement<T>> {
        let mut out: Vec<GroupElement<T>> = self
            .lattice
            .columns()
            .iter()
            .map(|c| self.ambient.reduce(c))
            .filter(|g| !g.is_zero())
            .collect();
        out.dedup();
        out
    }

    /// `self ⊕ other` inside the direct sum of the two ambients.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, r2) = (self.ambient.rank(), other.ambient.rank());
        let mut gens = Vec::with_capacity(r1 + r2);
        for c in self.lattice.columns() {
            let mut v = c;
            v.extend(std::iter::repeat(T::zero()).take(r2));
            gens.push(v);
        }
        for c in other.lattice.columns() {
            let mut v = vec![T::zero(); r1];
            v.extend(c);
            gens.push(v);
        }
        Self::from_lattice_gens(&self.ambient.direct_sum(&other.ambient), &gens)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut gens = self.lattice.columns();
        gens.extend(other.lattice.columns());
        Ok(Self::from_lattice_gens(&self.ambient, &gens))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let r = self.ambient.rank();
        // {(a + b, a) : a ∈ L1, b ∈ L2} meets {top = 0} in {0} × (L1 ∩ L2).
        let mut gens = Vec::with_capacity(2 * r);
        for c in self.lattice.columns() {
            let mut v = c.clone();
            v.extend(c);
            gens.push(v);
        }
        for c in other.lattice.columns() {
            let mut v = c;
            v.extend(std::iter::repeat(T::zero()).take(r));
            gens.push(v);
        }
        let mut moduli = self.ambient.moduli().to_vec();
        moduli.extend(self.ambient.moduli().iter().cloned());
        Ok(Subgroup { ambient: self.ambient.clone(), lattice: lower_block(&hnf_mod(&gens, &moduli), r) })
    }

    /// `{x ∈ source : phi(x) ∈ target_sub}`.
    pub fn preimage(phi: &Homomorphism<T>, target_sub: &Self) -> Result<Self> {
        if target_sub.ambient != *phi.target() {
            return Err(Error::AmbientMismatch);
        }
        let (q, r) = (phi.target().rank(), phi.source().rank());
        // {(A x + s, x)} meets {top = 0} in {0} × A^{-1}(L_S).
        let mut gens = Vec::with_capacity(r + q);
        for i in 0..r {
            let mut v = phi.matrix().column(i);
            v.extend((0..r).map(|k| if k == i { T::one() } else { T::zero() }));
            gens.push(v);
        }
        for c in target_sub.lattice.columns() {
            let mut v = c;
            v.extend(std::iter::repeat(T::zero()).take(r));
            gens.push(v);
        }
        let mut moduli = phi.target().moduli().to_vec();
        moduli.extend(phi.source().moduli().iter().cloned());
        let full = hnf_mod(&gens, &moduli);
        Ok(Subgroup { ambient: phi.source().clone(), lattice: lower_block(&full, r) })
    }

    pub fn image(phi: &Homomorphism<T>, source_sub: &Self) -> Result<Self> {
        if source_sub.ambient != *phi.source() {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<Vec<T>> =
            source_sub.lattice.columns().iter().map(|c| phi.matrix().mul_vec(c)).collect();
        Ok(Self::from_lattice_gens(phi.target(), &gens))
    }

    /// Invariant factors of `G / H` as a divisibility chain, units dropped.
    pub fn quotient_invariants(&self) -> Vec<T> {
        smith_normal_form(&self.lattice)
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    /// Explicit element list. Oracle use only.
    pub fn elements(&self) -> Vec<GroupElement<T>> {
        self.ambient.elements().filter(|x| self.contains(x)).collect()
    }

    /// The same subgroup over another scalar type.
    pub fn convert<U: IntScalar>(&self) -> Result<Subgroup<U>> {
        let conv = |x: &T| crate::scalar::from_big::<U>(to_big(x));
        let moduli = self.ambient.moduli().iter().map(conv).collect::<Result<Vec<U>>>()?;
        let ambient = FinAbGroup::new(moduli)?;
        let mut data = Vec::new();
        for row in self.lattice.to_rows() {
            for x in row {
                data.push(conv(&x)?);
            }
        }
        Ok(Subgroup { ambient, lattice: Matrix::from_vec(self.lattice.rows(), self.lattice.cols(), data) })
    }
}

/// Bottom-right `r × r` block of a square matrix.
fn lower_block<T: IntScalar>(full: &Matrix<T>, r: usize) -> Matrix<T> {
    let off = full.rows() - r;
    let mut out = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            out.set(i, j, full.get(off + i, off + j).clone());
        }
    }
    out
}

/// Every subgroup of `group`, each once, sorted by index then lattice entries.
pub fn enumerate_subgroups<T: IntScalar>(group: &FinAbGroup<T>, bound: usize) -> Result<Vec<Subgroup<T>>> {
    let order = group.order();
    if order > from_usize::<T>(bound) {
        return Err(Error::OrderBoundExceeded { order: order.to_string(), bound: bound.to_string() });
    }
    let mut cyclic: Vec<Subgroup<T>> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for x in group.elements() {
        let c = Subgroup::from_lattice_gens(group, &[x.into_coords()]);
        if seen_cyclic.insert(c.lattice.clone()) {
            cyclic.push(c);
        }
    }
    let start = Subgroup::trivial(group);
    let mut seen = HashSet::new();
    seen.insert(start.lattice.clone());
    let mut all = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let joined = h.sum(c).expect("same ambient");
            if seen.insert(joined.lattice.clone()) {
                all.push(joined.clone());
                queue.push_back(joined);
            }
        }
    }
    all.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.lattice.cmp(&b.lattice)));
    Ok(all)
}
