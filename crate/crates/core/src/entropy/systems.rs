//! The dynamical systems the cotrajectory and trajectory engines iterate.
//!
//! A system exposes one step of the recurrence and a *state*: a value that
//! determines both the next state and the current ratio. Whenever a state
//! recurs the ratio sequence is periodic from its first occurrence, and a
//! periodic nonincreasing sequence is constant, which is what proven mode
//! rests on.

use std::hash::Hash;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::finab::{ElementSet, ElementTable, Homomorphism, Subgroup};
use crate::scalar::{to_biguint, IntScalar};
use crate::window::{project_section, supported_section, BandedEndo, FiniteSupport, IndexSet, LatticeEndo, Sublattice, Window, WindowSubgroup};

/// A short human-readable rendering for traces.
pub trait Describe {
    fn describe(&self) -> String;
}

impl<T: IntScalar> Describe for Subgroup<T> {
    fn describe(&self) -> String {
        let gens: Vec<Vec<String>> = self.generators().iter().map(|g| g.coords().iter().map(|c| c.to_string()).collect()).collect();
        format!("<{}>", gens.iter().map(|g| format!("({})", g.join(","))).collect::<Vec<_>>().join(", "))
    }
}

impl<T: IntScalar> Describe for Sublattice<T> {
    fn describe(&self) -> String {
        let cols: Vec<String> = self.basis().columns().iter().map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        format!("<{}>", cols.join(", "))
    }
}

impl<T: IntScalar> Describe for WindowSubgroup<T> {
    fn describe(&self) -> String {
        if self.is_whole() {
            return "whole".into();
        }
        format!("{:?}:{}", self.window(), self.section().describe())
    }
}

impl<T: IntScalar> Describe for FiniteSupport<T> {
    fn describe(&self) -> String {
        if self.is_trivial() {
            return "0".into();
        }
        format!("{:?}:{}", self.window(), self.section().describe())
    }
}

impl Describe for ElementSet {
    fn describe(&self) -> String {
        format!("{self:#x}")
    }
}

impl<A: Describe, B: Describe> Describe for (A, B) {
    fn describe(&self) -> String {
        format!("{} x {}", self.0.describe(), self.1.describe())
    }
}

/// One step `B ↦ N ∩ φ^{-1}(B)` of a cotrajectory.
pub trait CoSystem: Sync {
    type Sub: Clone + Eq + Hash + Send + Sync + Describe;
    type Key: Clone + Eq + Hash + Send;

    fn index(&self, s: &Self::Sub) -> BigUint;

    fn pull(&self, n: &Self::Sub, b: &Self::Sub) -> Result<Self::Sub>;

    /// A state of `B_step` determining `α_step` and the next state.
    fn state(&self, n: &Self::Sub, b: &Self::Sub, step: usize) -> Result<Self::Key>;

    /// Whether states are guaranteed to recur, so iteration should go on
    /// until they do rather than stop at a heuristic plateau.
    fn provable(&self) -> bool;

    /// An integer `U` with `α ≤ U` for every open subgroup.
    fn alpha_bound(&self) -> BigUint;
}

/// One step `T ↦ F + φ(T)` of a trajectory.
pub trait TrSystem: Sync {
    type Fin: Clone + Eq + Hash + Send + Sync + Describe;
    type Key: Clone + Eq + Hash + Send;

    fn order(&self, f: &Self::Fin) -> BigUint;

    fn push(&self, f: &Self::Fin, t: &Self::Fin) -> Result<Self::Fin>;

    fn state(&self, f: &Self::Fin, t: &Self::Fin, step: usize) -> Result<Self::Key>;

    fn provable(&self) -> bool;

    /// An integer `U` with `|T_{n+1}|/|T_n| ≤ U` eventually, for every `F`.
    fn alpha_bound(&self) -> BigUint;
}

/// An endomorphism of a finite group, on the lattice representation.
#[derive(Clone, Debug)]
pub struct FiniteSystem<T: IntScalar = BigInt> {
    phi: Homomorphism<T>,
}

impl<T: IntScalar> FiniteSystem<T> {
    pub fn new(phi: &Homomorphism<T>) -> Result<Self> {
        if !phi.is_endomorphism() {
            return Err(Error::InvalidHomomorphism("entropy needs an endomorphism".into()));
        }
        Ok(FiniteSystem { phi: phi.clone() })
    }

    pub fn phi(&self) -> &Homomorphism<T> {
        &self.phi
    }
}

impl<T: IntScalar> CoSystem for FiniteSystem<T> {
    type Sub = Subgroup<T>;
    type Key = Subgroup<T>;

    fn index(&self, s: &Subgroup<T>) -> BigUint {
        to_biguint(&s.index())
    }

    fn pull(&self, n: &Subgroup<T>, b: &Subgroup<T>) -> Result<Subgroup<T>> {
        n.intersect(&Subgroup::preimage(&self.phi, b)?)
    }

    fn state(&self, _n: &Subgroup<T>, b: &Subgroup<T>, _step: usize) -> Result<Subgroup<T>> {
        Ok(b.clone())
    }

    fn provable(&self) -> bool {
        true
    }

    fn alpha_bound(&self) -> BigUint {
        BigUint::from(1u32)
    }
}

impl<T: IntScalar> TrSystem for FiniteSystem<T> {
    type Fin = Subgroup<T>;
    type Key = Subgroup<T>;

    fn order(&self, f: &Subgroup<T>) -> BigUint {
        to_biguint(&f.order())
    }

    fn push(&self, f: &Subgroup<T>, t: &Subgroup<T>) -> Result<Subgroup<T>> {
        f.sum(&Subgroup::image(&self.phi, t)?)
    }

    fn state(&self, _f: &Subgroup<T>, t: &Subgroup<T>, _step: usize) -> Result<Subgroup<T>> {
        Ok(t.clone())
    }

    fn provable(&self) -> bool {
        true
    }

    fn alpha_bound(&self) -> BigUint {
        BigUint::from(1u32)
    }
}

/// An endomorphism of a group of order at most 64 on element bitsets.
#[derive(Clone, Debug)]
pub struct BitsetSystem {
    table: ElementTable,
    codes: Vec<u8>,
}

impl BitsetSystem {
    pub fn new<T: IntScalar>(table: &ElementTable, phi: &Homomorphism<T>) -> Self {
        BitsetSystem { table: table.clone(), codes: table.tabulate(phi) }
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }
}

impl CoSystem for BitsetSystem {
    type Sub = ElementSet;
    type Key = ElementSet;

    fn index(&self, s: &ElementSet) -> BigUint {
        BigUint::from(self.table.order() as u32 / ElementTable::size(*s))
    }

    fn pull(&self, n: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
        Ok(n & self.table.preimage(&self.codes, *b))
    }

    fn state(&self, _n: &ElementSet, b: &ElementSet, _step: usize) -> Result<ElementSet> {
        Ok(*b)
    }

    fn provable(&self) -> bool {
        true
    }

    fn alpha_bound(&self) -> BigUint {
        BigUint::from(1u32)
    }
}

impl TrSystem for BitsetSystem {
    type Fin = ElementSet;
    type Key = ElementSet;

    fn order(&self, f: &ElementSet) -> BigUint {
        BigUint::from(ElementTable::size(*f))
    }

    fn push(&self, f: &ElementSet, t: &ElementSet) -> Result<ElementSet> {
        Ok(self.table.sum(*f, self.table.image(&self.codes, *t)))
    }

    fn state(&self, _f: &ElementSet, t: &ElementSet, _step: usize) -> Result<ElementSet> {
        Ok(*t)
    }

    fn provable(&self) -> bool {
        true
    }

    fn alpha_bound(&self) -> BigUint {
        BigUint::from(1u32)
    }
}

/// An endomorphism of `Z^n`. Every finite-index `N` contains `dZ^n`, which
/// every matrix preserves, so cotrajectories live in a finite lattice.
#[derive(Clone, Debug)]
pub struct LatticeSystem<T: IntScalar = BigInt> {
    phi: LatticeEndo<T>,
}

impl<T: IntScalar> LatticeSystem<T> {
    pub fn new(phi: &LatticeEndo<T>) -> Self {
        LatticeSystem { phi: phi.clone() }
    }
}

impl<T: IntScalar> CoSystem for LatticeSystem<T> {
    type Sub = Sublattice<T>;
    type Key = Sublattice<T>;

    fn index(&self, s: &Sublattice<T>) -> BigUint {
        to_biguint(&s.index())
    }

    fn pull(&self, n: &Sublattice<T>, b: &Sublattice<T>) -> Result<Sublattice<T>> {
        n.intersect(&Sublattice::preimage(&self.phi, b)?)
    }

    fn state(&self, _n: &Sublattice<T>, b: &Sublattice<T>, _step: usize) -> Result<Sublattice<T>> {
        Ok(b.clone())
    }

    fn provable(&self) -> bool {
        true
    }

    fn alpha_bound(&self) -> BigUint {
        BigUint::from(1u32)
    }
}

/// The state of a window cotrajectory or trajectory.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum WindowKey<T: IntScalar, S> {
    /// The section seen through the anchored end of the nominal window.
    Edge(Subgroup<T>),
    /// The whole current subgroup.
    Whole(S),
}

/// A banded endomorphism of `K^(I)` or `K^I`.
///
/// For a translation by `k ≠ 0` whose windows grow away from the boundary
/// of the index set, everything the next step sees lies in the `w - k`
/// coordinates at the anchored end of the window, `w` being the width of the
/// initial subgroup's window; that slice is the state. Otherwise windows
/// stay inside a bounded interval and the whole subgroup is the state.
#[derive(Clone, Debug)]
pub struct WindowSystem<T: IntScalar = BigInt> {
    phi: BandedEndo<T>,
}

impl<T: IntScalar> WindowSystem<T> {
    pub fn new(phi: &BandedEndo<T>) -> Self {
        WindowSystem { phi: phi.clone() }
    }

    pub fn phi(&self) -> &BandedEndo<T> {
        &self.phi
    }

    /// `k > 0` and the step direction (`+1` grows to the right) when the
    /// slice rule applies to windows moving by `delta` per step.
    fn slice_rule(&self, delta: i64) -> Option<i64> {
        self.phi.pure_translation()?;
        match (delta, self.phi.group().index_set()) {
            (0, _) => None,
            (d, IndexSet::Integers) => Some(d),
            (d, IndexSet::Naturals) if d > 0 => Some(d),
            _ => None,
        }
    }

    /// `(nominal window of step, anchored slice)` for an initial window.
    fn windows(w0: Window, d: i64, step: usize) -> (Window, Window) {
        let k = d.abs();
        let w = w0.len() as i64;
        let grow = (step as i64 - 1) * k;
        if d > 0 {
            (Window::new(w0.lo(), w0.hi() + grow), Window::new(w0.lo(), w0.lo() + w - k))
        } else {
            (Window::new(w0.lo() - grow, w0.hi()), Window::new(w0.lo() + k, w0.hi()))
        }
    }

    fn bound(&self, growth: u64) -> BigUint {
        num_traits::pow(to_biguint(&self.phi.group().base().order()), growth as usize)
    }
}

impl<T: IntScalar> CoSystem for WindowSystem<T> {
    type Sub = WindowSubgroup<T>;
    type Key = WindowKey<T, WindowSubgroup<T>>;

    fn index(&self, s: &WindowSubgroup<T>) -> BigUint {
        to_biguint(&s.index())
    }

    fn pull(&self, n: &WindowSubgroup<T>, b: &WindowSubgroup<T>) -> Result<WindowSubgroup<T>> {
        n.intersect(&self.phi.preimage_window(b)?)
    }

    fn state(&self, n: &WindowSubgroup<T>, b: &WindowSubgroup<T>, step: usize) -> Result<Self::Key> {
        // φ^{-1} moves windows by -s
        match self.slice_rule(-self.phi.shift()) {
            Some(d) if !n.is_whole() => {
                let (nominal, slice) = Self::windows(n.window(), d, step);
                let base = self.phi.group().base();
                let section = b.section_on(&nominal)?;
                let edge = if slice.is_empty() { Subgroup::whole(&base.power(0)) } else { project_section(base, &section, &nominal, &slice) };
                Ok(WindowKey::Edge(edge))
            }
            _ => Ok(WindowKey::Whole(b.clone())),
        }
    }

    fn provable(&self) -> bool {
        self.phi.pure_translation().is_some() || self.phi.cotrajectory_growth() == 0
    }

    fn alpha_bound(&self) -> BigUint {
        self.bound(self.phi.cotrajectory_growth())
    }
}

impl<T: IntScalar> TrSystem for WindowSystem<T> {
    type Fin = FiniteSupport<T>;
    type Key = WindowKey<T, FiniteSupport<T>>;

    fn order(&self, f: &FiniteSupport<T>) -> BigUint {
        to_biguint(&f.order())
    }

    fn push(&self, f: &FiniteSupport<T>, t: &FiniteSupport<T>) -> Result<FiniteSupport<T>> {
        f.sum(&self.phi.image(t)?)
    }

    fn state(&self, f: &FiniteSupport<T>, t: &FiniteSupport<T>, step: usize) -> Result<Self::Key> {
        match self.slice_rule(self.phi.shift()) {
            Some(d) if !f.is_trivial() => {
                let (nominal, slice) = Self::windows(f.window(), d, step);
                let base = self.phi.group().base();
                let section = t.section_on(&nominal)?;
                let edge = if slice.is_empty() { Subgroup::whole(&base.power(0)) } else { supported_section(base, &section, &nominal, &slice) };
                Ok(WindowKey::Edge(edge))
            }
            _ => Ok(WindowKey::Whole(t.clone())),
        }
    }

    fn provable(&self) -> bool {
        self.phi.pure_translation().is_some() || self.phi.trajectory_growth() == 0
    }

    fn alpha_bound(&self) -> BigUint {
        self.bound(self.phi.trajectory_growth())
    }
}

/// `φ_1 × φ_2` on `G_1 × G_2`, acting on pairs `N_1 × N_2`.
#[derive(Clone, Debug)]
pub struct ProductSystem<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: CoSystem, B: CoSystem> CoSystem for ProductSystem<A, B> {
    type Sub = (A::Sub, B::Sub);
    type Key = (A::Key, B::Key);

    fn index(&self, s: &Self::Sub) -> BigUint {
        self.first.index(&s.0) * self.second.index(&s.1)
    }

    fn pull(&self, n: &Self::Sub, b: &Self::Sub) -> Result<Self::Sub> {
        Ok((self.first.pull(&n.0, &b.0)?, self.second.pull(&n.1, &b.1)?))
    }

    fn state(&self, n: &Self::Sub, b: &Self::Sub, step: usize) -> Result<Self::Key> {
        Ok((self.first.state(&n.0, &b.0, step)?, self.second.state(&n.1, &b.1, step)?))
    }

    fn provable(&self) -> bool {
        self.first.provable() && self.second.provable()
    }

    fn alpha_bound(&self) -> BigUint {
        self.first.alpha_bound() * self.second.alpha_bound()
    }
}
