use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::subgroup::{FiniteSupport, WindowSubgroup};
use super::{IndexSet, SparseElement, Window, WindowGroup};
use crate::error::{Error, Result};
use crate::finab::{Homomorphism, Subgroup};
use crate::linalg::Matrix;
use crate::scalar::IntScalar;

/// The Bernoulli shifts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ShiftKind {
    /// `(x_0, x_1, ...) ↦ (0, x_0, x_1, ...)` on `N`.
    Right,
    /// `(x_0, x_1, ...) ↦ (x_1, x_2, ...)` on `N`.
    Left,
    /// `(x_n) ↦ (x_{n-1})` on `Z`.
    TwoSided,
    /// `(x_n) ↦ (x_{n+1})` on `Z`.
    TwoSidedInverse,
}

impl ShiftKind {
    pub const ALL: [ShiftKind; 4] = [ShiftKind::Right, ShiftKind::Left, ShiftKind::TwoSided, ShiftKind::TwoSidedInverse];

    pub fn name(self) -> &'static str {
        match self {
            ShiftKind::Right => "right",
            ShiftKind::Left => "left",
            ShiftKind::TwoSided => "two_sided",
            ShiftKind::TwoSidedInverse => "two_sided_inverse",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn index_set(self) -> IndexSet {
        match self {
            ShiftKind::Right | ShiftKind::Left => IndexSet::Naturals,
            ShiftKind::TwoSided | ShiftKind::TwoSidedInverse => IndexSet::Integers,
        }
    }

    /// The offset `s` in `(φx)_j = x_{j-s}`.
    pub fn offset(self) -> i64 {
        match self {
            ShiftKind::Right | ShiftKind::TwoSided => 1,
            ShiftKind::Left | ShiftKind::TwoSidedInverse => -1,
        }
    }
}

/// A banded endomorphism of `K^(I)` (or `K^I`):
///
/// `(φx)_j = Σ_{d=-b}^{b} c[j mod P][d + b](x_{j - s + d})`,
///
/// with coordinates outside `I` read as zero. The coefficient pattern is
/// periodic with period `P`, so preimages of window subgroups stay window
/// subgroups whose windows move by at most `|s| + b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BandedEndo<T: IntScalar = BigInt> {
    group: WindowGroup<T>,
    shift: i64,
    half_width: usize,
    coefficients: Vec<Vec<Homomorphism<T>>>,
}

impl<T: IntScalar> BandedEndo<T> {
    pub fn new(group: &WindowGroup<T>, shift: i64, half_width: usize, coefficients: Vec<Vec<Homomorphism<T>>>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::UnsupportedBandPattern("empty coefficient pattern".into()));
        }
        for row in &coefficients {
            if row.len() != 2 * half_width + 1 {
                return Err(Error::UnsupportedBandPattern(format!(
                    "each residue needs {} coefficients, got {}",
                    2 * half_width + 1,
                    row.len()
                )));
            }
            if row.iter().any(|c| c.source() != group.base() || c.target() != group.base()) {
                return Err(Error::AmbientMismatch);
            }
        }
        Ok(BandedEndo { group: group.clone(), shift, half_width, coefficients })
    }

    fn translation(group: &WindowGroup<T>, shift: i64) -> Self {
        BandedEndo { group: group.clone(), shift, half_width: 0, coefficients: vec![vec![Homomorphism::identity(group.base())]] }
    }

    /// `kind^power`.
    pub fn shift_map(group: &WindowGroup<T>, kind: ShiftKind, power: u32) -> Result<Self> {
        if group.index_set() != kind.index_set() {
            return Err(Error::InvalidInput(format!("the {} shift needs index set {:?}", kind.name(), kind.index_set())));
        }
        Ok(Self::translation(group, kind.offset() * i64::from(power)))
    }

    pub fn identity(group: &WindowGroup<T>) -> Self {
        Self::translation(group, 0)
    }

    pub fn zero(group: &WindowGroup<T>) -> Self {
        Self::diagonal(group, Homomorphism::zero(group.base(), group.base()))
    }

    /// `c` applied in every coordinate.
    pub fn diagonal(group: &WindowGroup<T>, c: Homomorphism<T>) -> Self {
        BandedEndo { group: group.clone(), shift: 0, half_width: 0, coefficients: vec![vec![c]] }
    }

    pub fn group(&self) -> &WindowGroup<T> {
        &self.group
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn period(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Vec<Homomorphism<T>>] {
        &self.coefficients
    }

    /// `c[j mod P][d + b]`.
    pub fn coefficient(&self, j: i64, d: i64) -> &Homomorphism<T> {
        let p = self.coefficients.len() as i64;
        &self.coefficients[j.mod_floor(&p) as usize][(d + self.half_width as i64) as usize]
    }

    fn coefficient_big(&self, j: &BigInt, d: i64) -> &Homomorphism<T> {
        let p = BigInt::from(self.coefficients.len());
        let r = j.mod_floor(&p).to_usize().expect("residue fits");
        &self.coefficients[r][(d + self.half_width as i64) as usize]
    }

    /// `Some(s)` when `φ` is `x ↦ (x_{j-s})_j`.
    pub fn pure_translation(&self) -> Option<i64> {
        let pure = self.half_width == 0 && self.coefficients.iter().all(|row| row[0].is_identity());
        pure.then_some(self.shift)
    }

    pub fn is_identity(&self) -> bool {
        self.pure_translation() == Some(0)
    }

    /// The shift kind and power, when `φ` is a power of a Bernoulli shift.
    pub fn shift_kind(&self) -> Option<(ShiftKind, u32)> {
        let s = self.pure_translation()?;
        if s == 0 {
            return None;
        }
        let kind = ShiftKind::ALL.into_iter().find(|k| k.index_set() == self.group.index_set() && k.offset().signum() == s.signum())?;
        Some((kind, s.unsigned_abs() as u32))
    }

    /// `φ^k`. Supported for translations and for coordinatewise maps, the
    /// families whose powers stay banded up to the boundary of `N`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if let Some(s) = self.pure_translation() {
            return Ok(Self::translation(&self.group, s * i64::from(k)));
        }
        if self.shift == 0 && self.half_width == 0 {
            let coefficients = self.coefficients.iter().map(|row| row[0].pow(k).map(|c| vec![c])).collect::<Result<_>>()?;
            return Ok(BandedEndo { coefficients, ..self.clone() });
        }
        Err(Error::UnsupportedBandPattern("powers are defined for translations and coordinatewise maps".into()))
    }

    /// The inverse of a translation of `K^(Z)`.
    pub fn inverse(&self) -> Result<Self> {
        match self.pure_translation() {
            Some(s) if self.group.index_set() == IndexSet::Integers => Ok(Self::translation(&self.group, -s)),
            _ => Err(Error::UnsupportedBandPattern("only translations of the two-sided index set are invertible here".into())),
        }
    }

    pub fn apply(&self, x: &SparseElement<T>) -> SparseElement<T> {
        let base = self.group.base();
        let b = self.half_width as i64;
        let mut out = SparseElement::zero();
        for (k, v) in x.entries() {
            for d in -b..=b {
                // x_k feeds output j with j - s + d = k
                let j = k + BigInt::from(self.shift - d);
                if !self.group.has_index(&j) {
                    continue;
                }
                let y = self.coefficient_big(&j, d).apply(v);
                if !y.is_zero() {
                    out.add_at(base, j, &y);
                }
            }
        }
        out
    }

    /// The coordinates `(φx)|target` depends on.
    pub fn dependency_window(&self, target: &Window) -> Window {
        if target.is_empty() {
            return Window::EMPTY;
        }
        let b = self.half_width as i64;
        self.group.clip(Window::new(target.lo() - self.shift - b, target.hi() - self.shift + b))
    }

    /// The coordinates `φ(x)` can occupy when `x` is supported in `source`.
    pub fn image_window(&self, source: &Window) -> Window {
        if source.is_empty() {
            return Window::EMPTY;
        }
        let b = self.half_width as i64;
        self.group.clip(Window::new(source.lo() + self.shift - b, source.hi() + self.shift + b))
    }

    /// The map `K^source → K^target`, `x ↦ (φx)|target` for `x` supported in `source`.
    pub fn local_map(&self, target: &Window, source: &Window) -> Homomorphism<T> {
        let base = self.group.base();
        let r = base.rank();
        let b = self.half_width as i64;
        let mut m = Matrix::zeros(target.len() * r, source.len() * r);
        for (p, j) in target.indices().enumerate() {
            for d in -b..=b {
                let k = j - self.shift + d;
                if !source.contains(k) {
                    continue;
                }
                let q = (k - source.lo()) as usize;
                let c = self.coefficient(j, d).matrix();
                for a in 0..r {
                    for e in 0..r {
                        m.set(p * r + a, q * r + e, c.get(a, e).clone());
                    }
                }
            }
        }
        Homomorphism::new(base.power(source.len()), base.power(target.len()), m).expect("block maps of endomorphisms are homomorphisms")
    }

    /// `φ^{-1}(N)`, again a window subgroup.
    pub fn preimage_window(&self, n: &WindowSubgroup<T>) -> Result<WindowSubgroup<T>> {
        // one banded map acts on both flavors
        if n.ambient().base() != self.group.base() || n.ambient().index_set() != self.group.index_set() {
            return Err(Error::AmbientMismatch);
        }
        let w = n.window();
        let src = self.dependency_window(&w);
        if n.is_whole() || src.is_empty() {
            return Ok(WindowSubgroup::whole(n.ambient()));
        }
        let s = Subgroup::preimage(&self.local_map(&w, &src), n.section())?;
        WindowSubgroup::new(n.ambient(), src, s)
    }

    /// `φ(F)` for a finite subgroup of the direct sum.
    pub fn image(&self, f: &FiniteSupport<T>) -> Result<FiniteSupport<T>> {
        if f.ambient() != &self.group {
            return Err(Error::AmbientMismatch);
        }
        let w = f.window();
        let dst = self.image_window(&w);
        if f.is_trivial() || dst.is_empty() {
            return Ok(FiniteSupport::trivial(f.ambient()));
        }
        let s = Subgroup::image(&self.local_map(&dst, &w), f.section())?;
        FiniteSupport::new(f.ambient(), dst, s)
    }

    /// New coordinates per step of a cotrajectory, asymptotically. Windows
    /// move by `-(s + b)` on the left and `b - s` on the right; on `N` the
    /// left end is bounded below, so only the right end contributes.
    pub fn cotrajectory_growth(&self) -> u64 {
        let b = self.half_width as i64;
        let right = (b - self.shift).max(0);
        let left = match self.group.index_set() {
            IndexSet::Naturals => 0,
            IndexSet::Integers => (self.shift + b).max(0),
        };
        (left + right) as u64
    }

    /// New coordinates per step of a trajectory, asymptotically.
    pub fn trajectory_growth(&self) -> u64 {
        let b = self.half_width as i64;
        let right = (self.shift + b).max(0);
        let left = match self.group.index_set() {
            IndexSet::Naturals => 0,
            IndexSet::Integers => (b - self.shift).max(0),
        };
        (left + right) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finab::FinAbGroup;

    fn group(n: i64, i: IndexSet) -> WindowGroup<i64> {
        WindowGroup::direct_sum(FinAbGroup::cyclic(n).unwrap(), i).unwrap()
    }

    fn e(g: &WindowGroup<i64>, i: i64) -> SparseElement<i64> {
        g.sparse(vec![(BigInt::from(i), vec![1])]).unwrap()
    }

    #[test]
    fn shift_values() {
        let g = group(2, IndexSet::Naturals);
        let right = BandedEndo::shift_map(&g, ShiftKind::Right, 1).unwrap();
        let left = BandedEndo::shift_map(&g, ShiftKind::Left, 1).unwrap();
        assert_eq!(right.apply(&e(&g, 0)), e(&g, 1));
        assert!(left.apply(&e(&g, 0)).is_zero());
        assert_eq!(left.apply(&e(&g, 5)), e(&g, 4));
        let z = group(3, IndexSet::Integers);
        let two = BandedEndo::shift_map(&z, ShiftKind::TwoSided, 1).unwrap();
        assert_eq!(two.apply(&e(&z, -3)), e(&z, -2));
        assert_eq!(two.inverse().unwrap().apply(&two.apply(&e(&z, 7))), e(&z, 7));
        assert!(BandedEndo::shift_map(&z, ShiftKind::Right, 1).is_err());
    }

    #[test]
    fn preimages_of_basic_subgroups() {
        let g = group(2, IndexSet::Naturals);
        let left = BandedEndo::shift_map(&g, ShiftKind::Left, 1).unwrap();
        let right = BandedEndo::shift_map(&g, ShiftKind::Right, 1).unwrap();
        for m in 1..5 {
            let n = WindowSubgroup::basic(&g, m);
            // left⁻¹(N_m) = zero on [1, m+1), which contains N_{m+1}
            let pre = left.preimage_window(&n).unwrap();
            assert_eq!(pre, WindowSubgroup::vanishing_on(&g, Window::new(1, m as i64 + 1)).unwrap());
            assert_eq!(pre.intersect(&n).unwrap(), WindowSubgroup::basic(&g, m + 1));
            // right⁻¹(N_m) = N_{m-1}
            assert_eq!(right.preimage_window(&n).unwrap(), WindowSubgroup::basic(&g, m - 1));
        }
    }

    #[test]
    fn images_of_full_windows() {
        let g = group(2, IndexSet::Naturals);
        let left = BandedEndo::shift_map(&g, ShiftKind::Left, 1).unwrap();
        let f = FiniteSupport::full(&g, Window::new(0, 1)).unwrap();
        assert!(left.image(&f).unwrap().is_trivial());
        let right = BandedEndo::shift_map(&g, ShiftKind::Right, 2).unwrap();
        assert_eq!(right.image(&f).unwrap(), FiniteSupport::full(&g, Window::new(2, 3)).unwrap());
    }

    #[test]
    fn growth_bounds() {
        let n = group(2, IndexSet::Naturals);
        let z = group(2, IndexSet::Integers);
        let right = BandedEndo::shift_map(&n, ShiftKind::Right, 1).unwrap();
        let left = BandedEndo::shift_map(&n, ShiftKind::Left, 1).unwrap();
        let two = BandedEndo::shift_map(&z, ShiftKind::TwoSided, 3).unwrap();
        assert_eq!((right.cotrajectory_growth(), right.trajectory_growth()), (0, 1));
        assert_eq!((left.cotrajectory_growth(), left.trajectory_growth()), (1, 0));
        assert_eq!((two.cotrajectory_growth(), two.trajectory_growth()), (3, 3));
    }
}
