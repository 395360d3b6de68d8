//! Infinite but finitely described groups.
//!
//! * `Z^n` with its full-rank sublattices ([`LatticeGroup`], [`Sublattice`]).
//! * Direct sums `K^(I)` and products `K^I` over a finite group `K`, with
//!   `I = N` or `I = Z` ([`WindowGroup`]). Their finite-index subgroups are
//!   window subgroups, which constrain finitely many coordinates, and
//!   kernel-rule subgroups, the kernel of a map `K^(N) → K^m` whose columns
//!   sit at factorial positions.
//!
//! Coordinates of sparse elements are arbitrary-precision integers because
//! the factorial positions overflow 64 bits quickly. Windows used by the
//! subgroup calculus are small and use `i64` bounds.

mod endo;
pub mod factorial;
mod kernel_rule;
mod lattice;
mod subgroup;

pub use endo::{BandedEndo, ShiftKind};
pub use kernel_rule::{factorial_floor, FactorialSign, KernelRuleSubgroup};
pub use lattice::{enumerate_sublattices, LatticeEndo, LatticeGroup, Sublattice};
pub use subgroup::{FiniteSupport, WindowSubgroup};
pub(crate) use subgroup::{project_section, supported_section};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::finab::{FinAbGroup, GroupElement};
use crate::scalar::IntScalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum IndexSet {
    Naturals,
    Integers,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Flavor {
    DirectSum,
    Product,
}

/// A half-open interval `[lo, hi)` of coordinate indices. Empty windows are
/// normalized to `[0, 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        if hi <= lo {
            Window::EMPTY
        } else {
            Window { lo, hi }
        }
    }

    pub const EMPTY: Window = Window { lo: 0, hi: 0 };

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i < self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Window {
        match (self.is_empty(), other.is_empty()) {
            (true, _) => *other,
            (_, true) => *self,
            _ => Window::new(self.lo.min(other.lo), self.hi.max(other.hi)),
        }
    }

    pub fn translate(&self, t: i64) -> Window {
        if self.is_empty() {
            *self
        } else {
            Window::new(self.lo + t, self.hi + t)
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..self.hi
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// `K^(I)` or `K^I` for a nontrivial finite abelian group `K`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WindowGroup<T: IntScalar = BigInt> {
    base: FinAbGroup<T>,
    index_set: IndexSet,
    flavor: Flavor,
}

impl<T: IntScalar> WindowGroup<T> {
    pub fn new(base: FinAbGroup<T>, index_set: IndexSet, flavor: Flavor) -> Result<Self> {
        if base.is_trivial() {
            return Err(Error::InvalidInput("window groups need a nontrivial base group".into()));
        }
        Ok(WindowGroup { base, index_set, flavor })
    }

    pub fn direct_sum(base: FinAbGroup<T>, index_set: IndexSet) -> Result<Self> {
        Self::new(base, index_set, Flavor::DirectSum)
    }

    pub fn product(base: FinAbGroup<T>, index_set: IndexSet) -> Result<Self> {
        Self::new(base, index_set, Flavor::Product)
    }

    pub fn base(&self) -> &FinAbGroup<T> {
        &self.base
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The same index set and base with the other flavor.
    pub fn with_flavor(&self, flavor: Flavor) -> Self {
        WindowGroup { flavor, ..self.clone() }
    }

    /// `K^W`, block `p` holding coordinate `W.lo + p`.
    pub fn block(&self, w: &Window) -> FinAbGroup<T> {
        self.base.power(w.len())
    }

    /// `w ∩ I`.
    pub fn clip(&self, w: Window) -> Window {
        match self.index_set {
            IndexSet::Integers => w,
            IndexSet::Naturals => Window::new(w.lo.max(0), w.hi),
        }
    }

    pub fn has_index(&self, i: &BigInt) -> bool {
        self.index_set == IndexSet::Integers || !i.is_negative()
    }

    /// The standard window `[0, m)` on `N`, `[-m, m)` on `Z`.
    pub fn standard_window(&self, m: usize) -> Window {
        let m = m as i64;
        match self.index_set {
            IndexSet::Naturals => Window::new(0, m),
            IndexSet::Integers => Window::new(-m, m),
        }
    }

    /// Builds a sparse element, validating indices and coordinates and
    /// dropping zero entries.
    pub fn sparse(&self, entries: Vec<(BigInt, Vec<T>)>) -> Result<SparseElement<T>> {
        let mut out = SparseElement::zero();
        for (i, v) in entries {
            if !self.has_index(&i) {
                return Err(Error::InvalidElement(format!("index {i} is outside the index set")));
            }
            let x = self.base.element(v)?;
            out.add_at(&self.base, i, &x);
        }
        Ok(out)
    }

    /// `x` placed at coordinate `i`.
    pub fn basis_at(&self, i: BigInt, x: &GroupElement<T>) -> Result<SparseElement<T>> {
        self.sparse(vec![(i, x.coords().to_vec())])
    }

    /// The dense restriction of `x` to `w`, flattened into `K^W`.
    pub fn restrict(&self, x: &SparseElement<T>, w: &Window) -> GroupElement<T> {
        let r = self.base.rank();
        let mut coords = vec![T::zero(); w.len() * r];
        for (i, v) in x.entries() {
            if let Some(p) = position(w, i) {
                coords[p * r..(p + 1) * r].clone_from_slice(v.coords());
            }
        }
        GroupElement::from_coords(coords)
    }
}

fn position(w: &Window, i: &BigInt) -> Option<usize> {
    let i: i64 = i.try_into().ok()?;
    w.contains(i).then(|| (i - w.lo) as usize)
}

/// A finitely supported element of `K^(I)`; `entries` never holds zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparseElement<T: IntScalar = BigInt> {
    entries: BTreeMap<BigInt, GroupElement<T>>,
}

impl<T: IntScalar> SparseElement<T> {
    pub fn zero() -> Self {
        SparseElement { entries: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BigInt, &GroupElement<T>)> {
        self.entries.iter()
    }

    pub fn get(&self, i: &BigInt) -> Option<&GroupElement<T>> {
        self.entries.get(i)
    }

    pub fn support(&self) -> impl Iterator<Item = &BigInt> {
        self.entries.keys()
    }

    pub(crate) fn add_at(&mut self, base: &FinAbGroup<T>, i: BigInt, x: &GroupElement<T>) {
        let sum = match self.entries.get(&i) {
            Some(y) => base.add(x, y),
            None => x.clone(),
        };
        if sum.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, sum);
        }
    }

    pub fn add(&self, base: &FinAbGroup<T>, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, x) in &other.entries {
            out.add_at(base, i.clone(), x);
        }
        out
    }

    pub fn neg(&self, base: &FinAbGroup<T>) -> Self {
        SparseElement { entries: self.entries.iter().map(|(i, x)| (i.clone(), base.neg(x))).collect() }
    }

    pub fn scale(&self, base: &FinAbGroup<T>, k: &T) -> Self {
        let mut out = Self::zero();
        for (i, x) in &self.entries {
            out.add_at(base, i.clone(), &base.scale(k, x));
        }
        out
    }
}
