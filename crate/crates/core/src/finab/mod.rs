//! Finite abelian groups `Z(m_1) ⊕ ... ⊕ Z(m_r)`, their elements,
//! homomorphisms and subgroups.
//!
//! Subgroups are integer lattices `L` with `diag(m)·Z^r ⊆ L ⊆ Z^r`, stored in
//! column Hermite normal form, so every set operation is a lattice operation
//! and equal subgroups have bit-identical representations.

mod bits;
mod hom;
mod quotient;
mod subgroup;
mod table;

pub use bits::{ElementSet, ElementTable, BITSET_ORDER_BOUND};
pub use hom::Homomorphism;
pub use quotient::{QuotientMap, SubgroupEmbedding};
pub use subgroup::{enumerate_subgroups, Subgroup, DEFAULT_ORDER_BOUND};
pub use table::{SubgroupId, SubgroupTable};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Matrix};
use crate::scalar::IntScalar;

/// `Z(m_1) ⊕ ... ⊕ Z(m_r)` in the order the moduli were given.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FinAbGroup<T = BigInt> {
    moduli: Vec<T>,
}

/// An element of a [`FinAbGroup`], coordinate `i` reduced into `[0, m_i)`.
///
/// Elements do not carry their ambient group; every operation goes through
/// the group that owns them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement<T = BigInt> {
    coords: Vec<T>,
}

impl<T: IntScalar> GroupElement<T> {
    /// Wraps coordinates that are already reduced for their group.
    pub(crate) fn from_coords(coords: Vec<T>) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl<T: IntScalar> FinAbGroup<T> {
    pub fn new(moduli: Vec<T>) -> Result<Self> {
        if let Some(bad) = moduli.iter().find(|m| !m.is_positive()) {
            return Err(Error::InvalidModulus(bad.to_string()));
        }
        Ok(FinAbGroup { moduli })
    }

    pub fn cyclic(n: T) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The group with no coordinates.
    pub fn trivial() -> Self {
        FinAbGroup { moduli: Vec::new() }
    }

    pub fn moduli(&self) -> &[T] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> T {
        self.moduli.iter().fold(T::one(), |acc, m| acc * m.clone())
    }

    pub fn exponent(&self) -> T {
        self.moduli.iter().fold(T::one(), |acc, m| acc.lcm(m))
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(One::is_one)
    }

    /// `self^k`, coordinates laid out block after block.
    pub fn power(&self, k: usize) -> Self {
        let mut moduli = Vec::with_capacity(self.rank() * k);
        for _ in 0..k {
            moduli.extend(self.moduli.iter().cloned());
        }
        FinAbGroup { moduli }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut moduli = self.moduli.clone();
        moduli.extend(other.moduli.iter().cloned());
        FinAbGroup { moduli }
    }

    /// Invariant factors `d_1 | d_2 | ...` (all `> 1`) of the group.
    pub fn invariant_factors(&self) -> Vec<T> {
        let s = smith_normal_form(&Matrix::diagonal_matrix(&self.moduli));
        s.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }

    pub fn zero(&self) -> GroupElement<T> {
        GroupElement { coords: vec![T::zero(); self.rank()] }
    }

    /// Validates already-reduced coordinates.
    pub fn element(&self, coords: Vec<T>) -> Result<GroupElement<T>> {
        if coords.len() != self.rank() {
            return Err(Error::AmbientMismatch);
        }
        for (c, m) in coords.iter().zip(&self.moduli) {
            if c.is_negative() || c >= m {
                return Err(Error::InvalidElement(format!("coordinate {c} outside [0, {m})")));
            }
        }
        Ok(GroupElement { coords })
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn reduce(&self, coords: &[T]) -> GroupElement<T> {
        assert_eq!(coords.len(), self.rank(), "coordinate count mismatch");
        GroupElement {
            coords: coords.iter().zip(&self.moduli).map(|(c, m)| c.mod_floor(m)).collect(),
        }
    }

    pub fn contains(&self, x: &GroupElement<T>) -> bool {
        x.coords.len() == self.rank()
            && x.coords.iter().zip(&self.moduli).all(|(c, m)| !c.is_negative() && c < m)
    }

    pub fn basis(&self, i: usize) -> GroupElement<T> {
        let mut coords = vec![T::zero(); self.rank()];
        coords[i] = T::one().mod_floor(&self.moduli[i]);
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement<T>, b: &GroupElement<T>) -> GroupElement<T> {
        let sum: Vec<T> = a.coords.iter().zip(&b.coords).map(|(x, y)| x.clone() + y.clone()).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &GroupElement<T>) -> GroupElement<T> {
        let n: Vec<T> = a.coords.iter().map(|x| -x.clone()).collect();
        self.reduce(&n)
    }

    pub fn scale(&self, k: &T, a: &GroupElement<T>) -> GroupElement<T> {
        let s: Vec<T> = a.coords.iter().map(|x| k.clone() * x.clone()).collect();
        self.reduce(&s)
    }

    /// Order as a `usize`, if it fits. Used by the enumeration oracles.
    pub fn order_usize(&self) -> Option<usize> {
        self.order().to_usize()
    }

    /// Mixed-radix code of an element; inverse of [`FinAbGroup::decode`].
    pub fn encode(&self, x: &GroupElement<T>) -> usize {
        let mut code = 0usize;
        for (c, m) in x.coords.iter().zip(&self.moduli) {
            code = code * m.to_usize().expect("small modulus") + c.to_usize().expect("small coordinate");
        }
        code
    }

    pub fn decode(&self, mut code: usize) -> GroupElement<T> {
        let mut coords = vec![T::zero(); self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i].to_usize().expect("small modulus");
            coords[i] = T::from_usize(code % m).expect("small coordinate");
            code /= m;
        }
        GroupElement { coords }
    }

    /// All elements in code order. Intended for small groups only.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement<T>> + '_ {
        let n = self.order_usize().expect("group too large to enumerate");
        (0..n).map(move |c| self.decode(c))
    }
}

/// One representative `Z(d_1) ⊕ ... ⊕ Z(d_k)`, `d_1 | ... | d_k`, of each
/// isomorphism class of abelian groups of order `n ≥ 1`.
pub fn groups_of_order<T: IntScalar>(n: u64) -> Vec<FinAbGroup<T>> {
    fn chains(n: u64, divisor_of: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        // factors are chosen largest first, each dividing the previous one
        if n == 1 {
            out.push(acc.iter().rev().copied().collect());
            return;
        }
        for d in (2..=n.min(divisor_of)).rev() {
            if n % d == 0 && divisor_of % d == 0 && leaves_room(n / d, d) {
                acc.push(d);
                chains(n / d, d, acc, out);
                acc.pop();
            }
        }
    }
    // the rest must split into factors that each divide d
    fn leaves_room(rest: u64, d: u64) -> bool {
        let mut r = rest;
        let mut g = gcd(r, d);
        while r > 1 && g > 1 {
            r /= g;
            g = gcd(r, d);
        }
        r == 1
    }
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let mut out = Vec::new();
    chains(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out.into_iter().map(|f| FinAbGroup { moduli: f.into_iter().map(|d| crate::scalar::from_usize(d as usize)).collect() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_moduli() {
        assert!(FinAbGroup::<i64>::new(vec![2, 0]).is_err());
        assert!(FinAbGroup::<i64>::new(vec![-3]).is_err());
    }

    #[test]
    fn invariant_factors_merge_coprime_parts() {
        let g = FinAbGroup::<i64>::new(vec![2, 3, 4]).unwrap();
        assert_eq!(g.invariant_factors(), vec![2, 12]);
        assert_eq!(g.order(), 24);
        assert_eq!(g.exponent(), 12);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let g = FinAbGroup::<i64>::new(vec![4, 3]).unwrap();
        for (i, x) in g.elements().enumerate() {
            assert_eq!(g.encode(&x), i);
        }
    }

    #[test]
    fn element_validation() {
        let g = FinAbGroup::<i64>::new(vec![4, 2]).unwrap();
        assert!(g.element(vec![3, 1]).is_ok());
        assert!(g.element(vec![4, 0]).is_err());
        assert_eq!(g.element(vec![1]), Err(Error::AmbientMismatch));
    }

    #[test]
    fn isomorphism_classes() {
        // partition counts of the exponents: 16 = 2^4, 36 = 2^2 3^2, 12 = 2^2 3
        let counts: Vec<usize> = [1u64, 2, 8, 12, 16, 36].iter().map(|&n| groups_of_order::<i64>(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 2, 5, 4]);
        for g in groups_of_order::<i64>(72) {
            assert_eq!(g.order(), 72);
            assert_eq!(g.invariant_factors(), g.moduli().to_vec());
        }
    }
}
