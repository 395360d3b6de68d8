use num_bigint::BigInt;

use super::{Flavor, SparseElement, Window, WindowGroup};
use crate::error::{Error, Result};
use crate::finab::{FinAbGroup, GroupElement, Homomorphism, Subgroup};
use crate::linalg::Matrix;
use crate::scalar::IntScalar;

/// The coordinate projection `K^from → K^to`; requires `to ⊆ from`.
pub(crate) fn projection<T: IntScalar>(base: &FinAbGroup<T>, from: &Window, to: &Window) -> Homomorphism<T> {
    debug_assert!(from.contains_window(to));
    let r = base.rank();
    let mut m = Matrix::zeros(to.len() * r, from.len() * r);
    for p in 0..to.len() {
        let q = (to.lo() - from.lo()) as usize + p;
        for c in 0..r {
            m.set(p * r + c, q * r + c, T::one());
        }
    }
    Homomorphism::new(base.power(from.len()), base.power(to.len()), m).expect("projections are homomorphisms")
}

/// Zero-padding inclusion `K^from → K^to`; requires `from ⊆ to`.
pub(crate) fn inclusion<T: IntScalar>(base: &FinAbGroup<T>, from: &Window, to: &Window) -> Homomorphism<T> {
    debug_assert!(to.contains_window(from));
    let r = base.rank();
    let mut m = Matrix::zeros(to.len() * r, from.len() * r);
    for p in 0..from.len() {
        let q = (from.lo() - to.lo()) as usize + p;
        for c in 0..r {
            m.set(q * r + c, p * r + c, T::one());
        }
    }
    Homomorphism::new(base.power(from.len()), base.power(to.len()), m).expect("inclusions are homomorphisms")
}

/// `s` read on the larger window `to`, unconstrained on the new coordinates.
pub fn pad_free<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, from: &Window, to: &Window) -> Subgroup<T> {
    if from == to {
        return s.clone();
    }
    Subgroup::preimage(&projection(base, to, from), s).expect("matching ambients")
}

/// `s` embedded in the larger window `to`, zero on the new coordinates.
pub fn pad_zero<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, from: &Window, to: &Window) -> Subgroup<T> {
    if from == to {
        return s.clone();
    }
    Subgroup::image(&inclusion(base, from, to), s).expect("matching ambients")
}

/// The image of `s ≤ K^from` under projection onto `to ⊆ from`.
pub fn project_section<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, from: &Window, to: &Window) -> Subgroup<T> {
    if from == to {
        return s.clone();
    }
    Subgroup::image(&projection(base, from, to), s).expect("matching ambients")
}

/// The elements of `s ≤ K^from` supported in `to ⊆ from`, as a subgroup of `K^to`.
pub fn supported_section<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, from: &Window, to: &Window) -> Subgroup<T> {
    if from == to {
        return s.clone();
    }
    let inc = inclusion(base, to, from);
    Subgroup::preimage(&inc, s).expect("matching ambients")
}

fn block_is_free<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, w: usize, p: usize) -> bool {
    let r = base.rank();
    (0..r).all(|c| {
        let mut v = vec![T::zero(); w * r];
        v[p * r + c] = T::one();
        s.contains(&s.ambient().reduce(&v))
    })
}

fn block_is_zero<T: IntScalar>(base: &FinAbGroup<T>, s: &Subgroup<T>, p: usize) -> bool {
    let r = base.rank();
    s.generators().iter().all(|g| g.coords()[p * r..(p + 1) * r].iter().all(|x| x.is_zero()))
}

/// `{x : x|W ∈ S}` for a window `W` and a subgroup `S ≤ K^W`.
///
/// Canonical: no end block of `W` is unconstrained, so equal subgroups
/// have equal representations. The whole group has the empty window.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WindowSubgroup<T: IntScalar = BigInt> {
    ambient: WindowGroup<T>,
    window: Window,
    section: Subgroup<T>,
}

impl<T: IntScalar> WindowSubgroup<T> {
    pub fn new(ambient: &WindowGroup<T>, window: Window, section: Subgroup<T>) -> Result<Self> {
        if ambient.clip(window) != window {
            return Err(Error::InvalidInput(format!("window {window:?} leaves the index set")));
        }
        if *section.ambient() != ambient.block(&window) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::canonical(ambient, window, section))
    }

    fn canonical(ambient: &WindowGroup<T>, mut window: Window, mut section: Subgroup<T>) -> Self {
        let base = ambient.base();
        while !window.is_empty() && block_is_free(base, &section, window.len(), window.len() - 1) {
            let to = Window::new(window.lo(), window.hi() - 1);
            section = project_section(base, &section, &window, &to);
            window = to;
        }
        while !window.is_empty() && block_is_free(base, &section, window.len(), 0) {
            let to = Window::new(window.lo() + 1, window.hi());
            section = project_section(base, &section, &window, &to);
            window = to;
        }
        if window.is_empty() {
            section = Subgroup::whole(&base.power(0));
        }
        WindowSubgroup { ambient: ambient.clone(), window, section }
    }

    pub fn whole(ambient: &WindowGroup<T>) -> Self {
        WindowSubgroup { ambient: ambient.clone(), window: Window::EMPTY, section: Subgroup::whole(&ambient.base().power(0)) }
    }

    /// The standard basic open subgroup: zero on the standard window of size `m`.
    pub fn basic(ambient: &WindowGroup<T>, m: usize) -> Self {
        let w = ambient.standard_window(m);
        Self::canonical(ambient, w, Subgroup::trivial(&ambient.block(&w)))
    }

    /// Zero on `w`.
    pub fn vanishing_on(ambient: &WindowGroup<T>, w: Window) -> Result<Self> {
        Self::new(ambient, w, Subgroup::trivial(&ambient.block(&w)))
    }

    pub fn ambient(&self) -> &WindowGroup<T> {
        &self.ambient
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn section(&self) -> &Subgroup<T> {
        &self.section
    }

    pub fn index(&self) -> T {
        self.section.index()
    }

    pub fn is_whole(&self) -> bool {
        self.window.is_empty()
    }

    /// The section read on a window containing this subgroup's window.
    pub fn section_on(&self, w: &Window) -> Result<Subgroup<T>> {
        if !w.contains_window(&self.window) {
            return Err(Error::InvalidInput(format!("window {w:?} does not contain {:?}", self.window)));
        }
        if self.window.is_empty() {
            return Ok(Subgroup::whole(&self.ambient.block(w)));
        }
        Ok(pad_free(self.ambient.base(), &self.section, &self.window, w))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let w = self.window.hull(&other.window);
        let s = self.section_on(&w)?.intersect(&other.section_on(&w)?)?;
        Ok(Self::canonical(&self.ambient, w, s))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let w = self.window.hull(&other.window);
        let s = self.section_on(&w)?.sum(&other.section_on(&w)?)?;
        Ok(Self::canonical(&self.ambient, w, s))
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let w = self.window.hull(&other.window);
        match (self.section_on(&w), other.section_on(&w)) {
            (Ok(a), Ok(b)) => a.is_subgroup_of(&b),
            _ => false,
        }
    }

    pub fn contains(&self, x: &SparseElement<T>) -> bool {
        self.section.contains(&self.ambient.restrict(x, &self.window))
    }

    /// Membership of any element whose restriction to `w ⊇ window` is `x`.
    /// This is how elements of the product flavor are tested.
    pub fn contains_restriction(&self, w: &Window, x: &GroupElement<T>) -> Result<bool> {
        Ok(self.section_on(w)?.contains(x))
    }
}

/// The finite subgroup of `K^(I)` of elements supported in `W` whose
/// restriction lies in `S ≤ K^W`. Canonical: no end block is identically
/// zero; the trivial subgroup has the empty window.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteSupport<T: IntScalar = BigInt> {
    ambient: WindowGroup<T>,
    window: Window,
    section: Subgroup<T>,
}

impl<T: IntScalar> FiniteSupport<T> {
    pub fn new(ambient: &WindowGroup<T>, window: Window, section: Subgroup<T>) -> Result<Self> {
        if ambient.flavor() != Flavor::DirectSum {
            return Err(Error::InvalidInput("finite subgroups live in the direct sum".into()));
        }
        if ambient.clip(window) != window {
            return Err(Error::InvalidInput(format!("window {window:?} leaves the index set")));
        }
        if *section.ambient() != ambient.block(&window) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::canonical(ambient, window, section))
    }

    fn canonical(ambient: &WindowGroup<T>, mut window: Window, mut section: Subgroup<T>) -> Self {
        let base = ambient.base();
        while !window.is_empty() && block_is_zero(base, &section, window.len() - 1) {
            let to = Window::new(window.lo(), window.hi() - 1);
            section = project_section(base, &section, &window, &to);
            window = to;
        }
        while !window.is_empty() && block_is_zero(base, &section, 0) {
            let to = Window::new(window.lo() + 1, window.hi());
            section = project_section(base, &section, &window, &to);
            window = to;
        }
        if window.is_empty() {
            section = Subgroup::whole(&base.power(0));
        }
        FiniteSupport { ambient: ambient.clone(), window, section }
    }

    pub fn trivial(ambient: &WindowGroup<T>) -> Self {
        FiniteSupport { ambient: ambient.clone(), window: Window::EMPTY, section: Subgroup::whole(&ambient.base().power(0)) }
    }

    /// `K^W`.
    pub fn full(ambient: &WindowGroup<T>, w: Window) -> Result<Self> {
        Self::new(ambient, w, Subgroup::whole(&ambient.block(&w)))
    }

    /// `K^W` on the standard window of size `m`.
    pub fn standard(ambient: &WindowGroup<T>, m: usize) -> Result<Self> {
        Self::full(ambient, ambient.standard_window(m))
    }

    pub fn ambient(&self) -> &WindowGroup<T> {
        &self.ambient
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn section(&self) -> &Subgroup<T> {
        &self.section
    }

    pub fn order(&self) -> T {
        self.section.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.window.is_empty()
    }

    /// The section read on a window containing this subgroup's window.
    pub fn section_on(&self, w: &Window) -> Result<Subgroup<T>> {
        if !w.contains_window(&self.window) {
            return Err(Error::InvalidInput(format!("window {w:?} does not contain {:?}", self.window)));
        }
        if self.window.is_empty() {
            return Ok(Subgroup::trivial(&self.ambient.block(w)));
        }
        Ok(pad_zero(self.ambient.base(), &self.section, &self.window, w))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let w = self.window.hull(&other.window);
        let s = self.section_on(&w)?.sum(&other.section_on(&w)?)?;
        Ok(Self::canonical(&self.ambient, w, s))
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let w = self.window.hull(&other.window);
        match (self.section_on(&w), other.section_on(&w)) {
            (Ok(a), Ok(b)) => a.is_subgroup_of(&b),
            _ => false,
        }
    }

    pub fn contains(&self, x: &SparseElement<T>) -> bool {
        let inside = x.support().all(|i| i64::try_from(i).map(|i| self.window.contains(i)).unwrap_or(false));
        inside && self.section.contains(&self.ambient.restrict(x, &self.window))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::IndexSet;

    fn k2() -> WindowGroup<i64> {
        WindowGroup::direct_sum(FinAbGroup::cyclic(2).unwrap(), IndexSet::Naturals).unwrap()
    }

    #[test]
    fn trimming_drops_free_blocks() {
        let g = k2();
        let w = Window::new(0, 3);
        // x_1 = 0, coordinates 0 and 2 free
        let s = Subgroup::from_generators(
            &g.block(&w),
            &[g.block(&w).element(vec![1, 0, 0]).unwrap(), g.block(&w).element(vec![0, 0, 1]).unwrap()],
        )
        .unwrap();
        let n = WindowSubgroup::new(&g, w, s).unwrap();
        assert_eq!(n.window(), Window::new(1, 2));
        assert_eq!(n.index(), 2);
        assert_eq!(n, WindowSubgroup::vanishing_on(&g, Window::new(1, 2)).unwrap());
    }

    #[test]
    fn basic_subgroups_nest() {
        let g = k2();
        let n3 = WindowSubgroup::basic(&g, 3);
        let n1 = WindowSubgroup::basic(&g, 1);
        assert_eq!(n3.index(), 8);
        assert!(n3.is_subgroup_of(&n1));
        assert!(!n1.is_subgroup_of(&n3));
        assert_eq!(n1.intersect(&n3).unwrap(), n3);
        assert_eq!(n1.sum(&n3).unwrap(), n1);
        assert!(WindowSubgroup::basic(&g, 0).is_whole());
    }

    #[test]
    fn finite_support_trims_zero_blocks() {
        let g = k2();
        let w = Window::new(0, 4);
        let s = Subgroup::from_generators(&g.block(&w), &[g.block(&w).element(vec![0, 1, 1, 0]).unwrap()]).unwrap();
        let f = FiniteSupport::new(&g, w, s).unwrap();
        assert_eq!(f.window(), Window::new(1, 3));
        assert_eq!(f.order(), 2);
        let full = FiniteSupport::full(&g, Window::new(0, 4)).unwrap();
        assert!(f.is_subgroup_of(&full));
        assert_eq!(f.sum(&full).unwrap(), full);
    }
}
