//! Linear totally bounded topologies, represented by a base of finite-index
//! subgroups.
//!
//! The adjoint entropy of an endomorphism with respect to a topology depends
//! only on the family of open finite-index subgroups, and a downward-cofinal
//! subfamily already attains the supremum because `H*` is antitone in the
//! subgroup. So a topology here *is* an enumerated cofinal family; linear and
//! Bohr modifications of a topology are never materialized.

use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::finab::{enumerate_subgroups, FinAbGroup, QuotientMap, Subgroup};
use crate::scalar::{from_usize, to_biguint, IntScalar};
use crate::window::{enumerate_sublattices, LatticeGroup, Sublattice, WindowGroup, WindowSubgroup};

/// The group a topology lives on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Carrier<T: IntScalar = BigInt> {
    Finite(FinAbGroup<T>),
    Lattice(LatticeGroup),
    Window(WindowGroup<T>),
}

impl<T: IntScalar> Carrier<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Carrier::Finite(_))
    }

    pub fn whole(&self) -> OpenSubgroup<T> {
        match self {
            Carrier::Finite(g) => OpenSubgroup::Finite(Subgroup::whole(g)),
            Carrier::Lattice(l) => OpenSubgroup::Lattice(Sublattice::whole(*l)),
            Carrier::Window(w) => OpenSubgroup::Window(WindowSubgroup::whole(w)),
        }
    }
}

/// A finite-index subgroup of a [`Carrier`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum OpenSubgroup<T: IntScalar = BigInt> {
    Finite(Subgroup<T>),
    Lattice(Sublattice<T>),
    Window(WindowSubgroup<T>),
}

impl<T: IntScalar> OpenSubgroup<T> {
    pub fn index(&self) -> BigUint {
        match self {
            OpenSubgroup::Finite(s) => to_biguint(&s.index()),
            OpenSubgroup::Lattice(l) => to_biguint(&l.index()),
            OpenSubgroup::Window(w) => to_biguint(&w.index()),
        }
    }

    pub fn lives_on(&self, carrier: &Carrier<T>) -> bool {
        match (self, carrier) {
            (OpenSubgroup::Finite(s), Carrier::Finite(g)) => s.ambient() == g,
            (OpenSubgroup::Lattice(l), Carrier::Lattice(g)) => l.group() == *g,
            (OpenSubgroup::Window(w), Carrier::Window(g)) => w.ambient() == g,
            _ => false,
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (OpenSubgroup::Finite(a), OpenSubgroup::Finite(b)) => Ok(OpenSubgroup::Finite(a.intersect(b)?)),
            (OpenSubgroup::Lattice(a), OpenSubgroup::Lattice(b)) => Ok(OpenSubgroup::Lattice(a.intersect(b)?)),
            (OpenSubgroup::Window(a), OpenSubgroup::Window(b)) => Ok(OpenSubgroup::Window(a.intersect(b)?)),
            _ => Err(Error::AmbientMismatch),
        }
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        match (self, other) {
            (OpenSubgroup::Finite(a), OpenSubgroup::Finite(b)) => a.is_subgroup_of(b),
            (OpenSubgroup::Lattice(a), OpenSubgroup::Lattice(b)) => a.is_subgroup_of(b),
            (OpenSubgroup::Window(a), OpenSubgroup::Window(b)) => a.is_subgroup_of(b),
            _ => false,
        }
    }
}

impl<T: IntScalar> fmt::Display for OpenSubgroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSubgroup::Finite(s) => {
                let gens: Vec<Vec<String>> =
                    s.generators().iter().map(|g| g.coords().iter().map(|c| c.to_string()).collect()).collect();
                write!(f, "subgroup{gens:?} of index {}", s.index())
            }
            OpenSubgroup::Lattice(l) => write!(f, "sublattice {:?} of index {}", l.basis().to_rows(), l.index()),
            OpenSubgroup::Window(w) => write!(f, "window {:?} section of index {}", w.window(), w.index()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TopologyKind {
    Profinite,
    Natural,
    Product,
    Explicit,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Profinite => "profinite",
            TopologyKind::Natural => "natural",
            TopologyKind::Product => "product",
            TopologyKind::Explicit => "explicit",
        }
    }
}

/// A downward-cofinal family of open finite-index subgroups, in
/// nondecreasing index order where the kind allows it.
///
/// `exhaustive` means the members are every open finite-index subgroup, or
/// at least a family whose suprema and intersections are final.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TopologyBase<T: IntScalar = BigInt> {
    carrier: Carrier<T>,
    kind: TopologyKind,
    members: Vec<OpenSubgroup<T>>,
    exhaustive: bool,
}

impl<T: IntScalar> TopologyBase<T> {
    /// All finite-index subgroups: every subgroup of a finite group of order
    /// at most `budget`, every sublattice of index at most `budget`. On a
    /// window direct sum the enumerable part is the window family; entropy
    /// computations add the kernel-rule certificates.
    pub fn profinite(carrier: &Carrier<T>, budget: usize) -> Result<Self> {
        let (members, exhaustive) = match carrier {
            Carrier::Finite(g) => (enumerate_subgroups(g, budget)?.into_iter().map(OpenSubgroup::Finite).collect(), true),
            Carrier::Lattice(l) => (enumerate_sublattices(*l, budget).into_iter().map(OpenSubgroup::Lattice).collect(), false),
            Carrier::Window(w) => (window_family(w, budget), false),
        };
        Ok(TopologyBase { carrier: carrier.clone(), kind: TopologyKind::Profinite, members, exhaustive })
    }

    /// `{mG : m = 1, ..., prefix}`; on a finite group the values of `m` up to
    /// the exponent already give every member.
    pub fn natural(carrier: &Carrier<T>, prefix: usize) -> Result<Self> {
        let (members, exhaustive) = match carrier {
            Carrier::Finite(g) => {
                let e = g.exponent().to_usize().ok_or_else(|| Error::ScalarOverflow(g.exponent().to_string()))?;
                let mut out: Vec<OpenSubgroup<T>> = Vec::new();
                for m in 1..=e.max(prefix) {
                    let s = OpenSubgroup::Finite(Subgroup::multiples(g, &from_usize(m)));
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
                out.sort_by_key(|s| s.index());
                (out, true)
            }
            Carrier::Lattice(l) => {
                let members = (1..=prefix)
                    .map(|m| Sublattice::multiples(*l, &from_usize(m)).map(OpenSubgroup::Lattice))
                    .collect::<Result<_>>()?;
                (members, false)
            }
            Carrier::Window(_) => {
                return Err(Error::InvalidInput("mK^(I) has infinite index unless mK = K; use the product base".into()))
            }
        };
        Ok(TopologyBase { carrier: carrier.clone(), kind: TopologyKind::Natural, members, exhaustive })
    }

    /// `N_m`, zero on the standard window of size `m`, for `m = 0..=prefix`.
    pub fn product(group: &WindowGroup<T>, prefix: usize) -> Self {
        TopologyBase {
            carrier: Carrier::Window(group.clone()),
            kind: TopologyKind::Product,
            members: window_family(group, prefix),
            exhaustive: false,
        }
    }

    /// A user-supplied family. It must live on `carrier`, be nonempty and be
    /// cofinal within itself.
    pub fn explicit(carrier: &Carrier<T>, members: Vec<OpenSubgroup<T>>, exhaustive: bool) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("an explicit base needs at least one member".into()));
        }
        if members.iter().any(|m| !m.lives_on(carrier)) {
            return Err(Error::AmbientMismatch);
        }
        let base = TopologyBase { carrier: carrier.clone(), kind: TopologyKind::Explicit, members, exhaustive };
        if !base.check_cofinal()? {
            return Err(Error::InvalidInput("explicit base is not closed under intersection up to cofinality".into()));
        }
        Ok(base)
    }

    /// The coarsest topology: only the whole group is open.
    pub fn indiscrete(carrier: &Carrier<T>) -> Self {
        TopologyBase { carrier: carrier.clone(), kind: TopologyKind::Explicit, members: vec![carrier.whole()], exhaustive: true }
    }

    pub fn carrier(&self) -> &Carrier<T> {
        &self.carrier
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn members(&self) -> &[OpenSubgroup<T>] {
        &self.members
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    /// The first `len` members as a base of the same kind.
    pub fn prefix(&self, len: usize) -> Self {
        let exhaustive = self.exhaustive && len >= self.members.len();
        TopologyBase { members: self.members.iter().take(len.max(1)).cloned().collect(), exhaustive, ..self.clone() }
    }

    /// Whether every pairwise intersection of members contains a member.
    pub fn check_cofinal(&self) -> Result<bool> {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let ab = a.intersect(b)?;
                if !self.members.iter().any(|c| c.is_subgroup_of(&ab)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `G^1_τ`, the intersection of all open subgroups.
    ///
    /// Exact for exhaustive bases and for the profinite, natural and product
    /// families on infinite carriers, whose members intersect to zero.
    /// Otherwise the intersection of the first `prefix_len` members is an
    /// upper bound, provided it stopped shrinking before the last member.
    pub fn residual_subgroup(&self, prefix_len: usize) -> Result<ResidualReport<T>> {
        let infinite = !self.carrier.is_finite();
        if infinite && self.kind != TopologyKind::Explicit {
            return Ok(ResidualReport { subgroup: ResidualSubgroup::Zero, exact: true });
        }
        let take = if self.exhaustive { self.members.len() } else { prefix_len.min(self.members.len()) };
        let mut acc = self.members[0].clone();
        let mut last_change = 0;
        for (i, m) in self.members.iter().enumerate().take(take).skip(1) {
            let next = acc.intersect(m)?;
            if next != acc {
                last_change = i;
            }
            acc = next;
        }
        if !self.exhaustive && take > 1 && last_change + 1 == take {
            return Err(Error::NoStabilization(take));
        }
        let subgroup = match acc {
            OpenSubgroup::Finite(s) => ResidualSubgroup::Finite(s),
            OpenSubgroup::Lattice(l) => ResidualSubgroup::Lattice(l),
            OpenSubgroup::Window(w) => ResidualSubgroup::Window(w),
        };
        Ok(ResidualReport { subgroup, exact: self.exhaustive })
    }

    /// The quotient topology on `G/H` for `H ⊆ G^1_τ`: the images of the
    /// members. Only for finite carriers.
    pub fn quotient_base(&self, q: &QuotientMap<T>) -> Result<Self> {
        if !matches!(&self.carrier, Carrier::Finite(g) if g == q.kernel().ambient()) {
            return Err(Error::AmbientMismatch);
        }
        let mut members: Vec<OpenSubgroup<T>> = Vec::new();
        for m in &self.members {
            let OpenSubgroup::Finite(s) = m else { unreachable!("finite carrier") };
            if !q.kernel().is_subgroup_of(s) {
                return Err(Error::InvalidInput("the kernel must lie in every member".into()));
            }
            let image = OpenSubgroup::Finite(q.project_subgroup(s)?);
            if !members.contains(&image) {
                members.push(image);
            }
        }
        Ok(TopologyBase { carrier: Carrier::Finite(q.quotient().clone()), kind: self.kind, members, exhaustive: self.exhaustive })
    }
}

fn window_family<T: IntScalar>(group: &WindowGroup<T>, prefix: usize) -> Vec<OpenSubgroup<T>> {
    (0..=prefix).map(|m| OpenSubgroup::Window(WindowSubgroup::basic(group, m))).collect()
}

/// `G^1_τ`; `Zero` is the trivial subgroup of an infinite carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ResidualSubgroup<T: IntScalar = BigInt> {
    Finite(Subgroup<T>),
    Lattice(Sublattice<T>),
    Window(WindowSubgroup<T>),
    Zero,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidualReport<T: IntScalar = BigInt> {
    pub subgroup: ResidualSubgroup<T>,
    /// False when `subgroup` is only an upper bound from a finite prefix.
    pub exact: bool,
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::IndexSet;

    fn z(n: i64) -> FinAbGroup<i64> {
        FinAbGroup::cyclic(n).unwrap()
    }

    #[test]
    fn profinite_bases() {
        let b = TopologyBase::profinite(&Carrier::Finite(z(4)), 256).unwrap();
        assert_eq!(b.members().len(), 3);
        assert!(b.is_exhaustive());
        let l1 = Carrier::<i64>::Lattice(LatticeGroup::new(1).unwrap());
        let b = TopologyBase::profinite(&l1, 4).unwrap();
        assert_eq!(b.members().iter().map(|m| m.index()).collect::<Vec<_>>(), [1u32, 2, 3, 4].map(BigUint::from));
        let l2 = Carrier::<i64>::Lattice(LatticeGroup::new(2).unwrap());
        assert_eq!(TopologyBase::profinite(&l2, 2).unwrap().members().len(), 4);
    }

    #[test]
    fn natural_bases() {
        let b = TopologyBase::natural(&Carrier::Finite(z(6)), 1).unwrap();
        assert_eq!(b.members().iter().map(|m| m.index()).collect::<Vec<_>>(), [1u32, 2, 3, 6].map(BigUint::from));
        let b = TopologyBase::natural(&Carrier::Finite(z(5)), 10).unwrap();
        assert_eq!(b.members().len(), 2);
        let w = WindowGroup::direct_sum(z(2), IndexSet::Naturals).unwrap();
        assert!(TopologyBase::natural(&Carrier::Window(w), 3).is_err());
    }

    #[test]
    fn product_base_indices() {
        let w = WindowGroup::direct_sum(z(2), IndexSet::Naturals).unwrap();
        let b = TopologyBase::product(&w, 3);
        assert_eq!(b.members().iter().map(|m| m.index()).collect::<Vec<_>>(), [1u32, 2, 4, 8].map(BigUint::from));
        let wz = WindowGroup::direct_sum(z(3), IndexSet::Integers).unwrap();
        let bz = TopologyBase::product(&wz, 2);
        let OpenSubgroup::Window(n2) = &bz.members()[2] else { panic!() };
        assert_eq!(n2.window(), crate::window::Window::new(-2, 2));
        assert!(b.check_cofinal().unwrap());
    }

    #[test]
    fn residuals() {
        let g = Carrier::Finite(z(12));
        let r = TopologyBase::profinite(&g, 256).unwrap().residual_subgroup(100).unwrap();
        assert!(r.exact);
        assert!(matches!(r.subgroup, ResidualSubgroup::Finite(ref s) if s.is_trivial()));

        let zc = Carrier::<i64>::Lattice(LatticeGroup::new(1).unwrap());
        let r = TopologyBase::profinite(&zc, 10).unwrap().residual_subgroup(10).unwrap();
        assert_eq!(r, ResidualReport { subgroup: ResidualSubgroup::Zero, exact: true });

        let r = TopologyBase::indiscrete(&zc).residual_subgroup(10).unwrap();
        assert!(r.exact);
        assert!(matches!(r.subgroup, ResidualSubgroup::Lattice(ref l) if l.index() == 1));
    }

    #[test]
    fn explicit_bases_are_validated() {
        let zc = Carrier::<i64>::Lattice(LatticeGroup::new(1).unwrap());
        let l = |m: i64| OpenSubgroup::Lattice(Sublattice::multiples(LatticeGroup::new(1).unwrap(), &m).unwrap());
        assert!(TopologyBase::explicit(&zc, vec![l(2), l(3)], false).is_err());
        assert!(TopologyBase::explicit(&zc, vec![l(2), l(3), l(6)], false).is_ok());
        let b = TopologyBase::explicit(&zc, vec![l(2), l(4), l(8)], false).unwrap();
        // descending at the last listed member: no stabilization claim
        assert!(matches!(b.residual_subgroup(3), Err(Error::NoStabilization(3))));
        let b = TopologyBase::explicit(&zc, vec![l(2), l(4), l(4)], false).unwrap();
        let r = b.residual_subgroup(3).unwrap();
        assert!(!r.exact);
    }
}
