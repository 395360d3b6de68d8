use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::finab::{FinAbGroup, Homomorphism, Subgroup};
use crate::linalg::{hnf_mod, solve_lower, Matrix};
use crate::scalar::{from_usize, IntScalar};

/// `Z^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticeGroup {
    rank: usize,
}

impl LatticeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("lattice rank must be positive".into()));
        }
        Ok(LatticeGroup { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// An endomorphism of `Z^n`, any integer `n × n` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeEndo<T: IntScalar = BigInt> {
    group: LatticeGroup,
    matrix: Matrix<T>,
}

impl<T: IntScalar> LatticeEndo<T> {
    pub fn new(group: LatticeGroup, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows() != group.rank || matrix.cols() != group.rank {
            return Err(Error::InvalidHomomorphism(format!("expected a {0}x{0} matrix", group.rank)));
        }
        Ok(LatticeEndo { group, matrix })
    }

    pub fn identity(group: LatticeGroup) -> Self {
        LatticeEndo { group, matrix: Matrix::identity(group.rank) }
    }

    pub fn scalar(group: LatticeGroup, k: T) -> Self {
        LatticeEndo { group, matrix: Matrix::diagonal_matrix(&vec![k; group.rank]) }
    }

    pub fn group(&self) -> LatticeGroup {
        self.group
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(LatticeEndo { group: self.group, matrix: self.matrix.mul(&other.matrix) })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.group);
        for _ in 0..k {
            acc = self.compose(&acc).expect("same group");
        }
        acc
    }

    /// The induced endomorphism of `(Z/d)^n`.
    fn reduced(&self, d: &T) -> Homomorphism<T> {
        let g = FinAbGroup::new(vec![d.clone(); self.group.rank]).expect("positive modulus");
        Homomorphism::endomorphism(g, self.matrix.clone()).expect("every matrix acts on (Z/d)^n")
    }
}

/// A full-rank sublattice of `Z^n` in column Hermite normal form.
///
/// Every operation runs in `(Z/d)^n` for a multiple `d` of the index, which
/// is exact because `L ⊇ dZ^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sublattice<T: IntScalar = BigInt> {
    group: LatticeGroup,
    basis: Matrix<T>,
}

impl<T: IntScalar> Sublattice<T> {
    /// The sublattice spanned by `gens`; rejects spans of lower rank.
    pub fn from_generators(group: LatticeGroup, gens: &[Vec<T>]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != group.rank) {
            return Err(Error::AmbientMismatch);
        }
        if gens.is_empty() {
            return Err(Error::InvalidInput("a finite-index sublattice needs generators".into()));
        }
        let h = crate::linalg::hermite_normal_form(&Matrix::from_columns(group.rank, gens));
        if h.rank < group.rank {
            return Err(Error::InvalidInput("generators span a sublattice of infinite index".into()));
        }
        let cols: Vec<Vec<T>> = (0..group.rank).map(|j| h.h.column(j)).collect();
        let d = cols.iter().enumerate().fold(T::one(), |a, (j, c)| a * c[j].abs());
        Ok(Self::reduce(group, &cols, &d))
    }

    fn reduce(group: LatticeGroup, gens: &[Vec<T>], d: &T) -> Self {
        Sublattice { group, basis: hnf_mod(gens, &vec![d.clone(); group.rank]) }
    }

    pub fn whole(group: LatticeGroup) -> Self {
        Sublattice { group, basis: Matrix::identity(group.rank) }
    }

    /// `mZ^n`.
    pub fn multiples(group: LatticeGroup, m: &T) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::InvalidInput("multiples need a positive factor".into()));
        }
        Ok(Sublattice { group, basis: Matrix::diagonal_matrix(&vec![m.clone(); group.rank]) })
    }

    pub fn group(&self) -> LatticeGroup {
        self.group
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    /// `[Z^n : L] = det L`.
    pub fn index(&self) -> T {
        self.basis.diagonal().into_iter().fold(T::one(), |a, d| a * d)
    }

    fn as_subgroup(&self, d: &T) -> Subgroup<T> {
        let g = FinAbGroup::new(vec![d.clone(); self.group.rank]).expect("positive modulus");
        Subgroup::from_generators(&g, &self.basis.columns().iter().map(|c| g.reduce(c)).collect::<Vec<_>>())
            .expect("reduced generators lie in the group")
    }

    fn from_subgroup(group: LatticeGroup, s: &Subgroup<T>) -> Self {
        Sublattice { group, basis: s.lattice().clone() }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        v.len() == self.group.rank && solve_lower(&self.basis, v).is_some()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.group == other.group && self.basis.columns().iter().all(|c| other.contains(c))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        let d = self.index().lcm(&other.index());
        let s = self.as_subgroup(&d).intersect(&other.as_subgroup(&d))?;
        Ok(Self::from_subgroup(self.group, &s))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        let mut gens = self.basis.columns();
        gens.extend(other.basis.columns());
        Ok(Self::reduce(self.group, &gens, &self.index()))
    }

    /// `A^{-1}(L) = {x : Ax ∈ L}`, which contains `dZ^n` for `d = [Z^n : L]`.
    pub fn preimage(phi: &LatticeEndo<T>, l: &Self) -> Result<Self> {
        if phi.group != l.group {
            return Err(Error::AmbientMismatch);
        }
        let d = l.index();
        let s = Subgroup::preimage(&phi.reduced(&d), &l.as_subgroup(&d))?;
        Ok(Self::from_subgroup(l.group, &s))
    }
}

/// Every sublattice of `Z^n` of index at most `max_index`, ordered by index
/// and then by basis.
pub fn enumerate_sublattices<T: IntScalar>(group: LatticeGroup, max_index: usize) -> Vec<Sublattice<T>> {
    let n = group.rank;
    let mut out = Vec::new();
    let mut diag = vec![1usize; n];
    fill_diagonals(n, 0, max_index, &mut diag, &mut |d| {
        // lower triangular H, H[i][j] ∈ [0, d_i) for j < i
        let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let mut vals = vec![0usize; free.len()];
        loop {
            let mut h = Matrix::zeros(n, n);
            for i in 0..n {
                h.set(i, i, from_usize::<T>(d[i]));
            }
            for (k, &(i, j)) in free.iter().enumerate() {
                h.set(i, j, from_usize::<T>(vals[k]));
            }
            out.push(Sublattice { group, basis: h });
            let mut k = free.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                vals[k] += 1;
                if vals[k] < d[free[k].0] {
                    break;
                }
                vals[k] = 0;
            }
        }
    });
    out.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.basis.cmp(&b.basis)));
    out
}

fn fill_diagonals(n: usize, i: usize, budget: usize, diag: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if i == n {
        emit(diag);
        return;
    }
    for d in 1..=budget {
        diag[i] = d;
        fill_diagonals(n, i + 1, budget / d, diag, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn sublattice_counts() {
        let z1 = LatticeGroup::new(1).unwrap();
        let z2 = LatticeGroup::new(2).unwrap();
        let l1: Vec<Sublattice<i64>> = enumerate_sublattices(z1, 4);
        assert_eq!(l1.iter().map(|l| l.index()).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let l2: Vec<Sublattice<i64>> = enumerate_sublattices(z2, 2);
        assert_eq!(l2.len(), 4);
        assert_eq!(l2.iter().filter(|l| l.index() == 2).count(), 3);
        assert_eq!(enumerate_sublattices::<i64>(z2, 1), vec![Sublattice::whole(z2)]);
    }

    #[test]
    fn doubling_on_z() {
        let z = LatticeGroup::new(1).unwrap();
        let mu2 = LatticeEndo::scalar(z, 2i64);
        for m in 1..=12i64 {
            let l = Sublattice::multiples(z, &m).unwrap();
            let pre = Sublattice::preimage(&mu2, &l).unwrap();
            let expect = Sublattice::multiples(z, &(m / m.gcd(&2))).unwrap();
            assert_eq!(pre, expect);
            assert!(l.is_subgroup_of(&pre));
        }
    }

    #[test]
    fn lattice_meet_and_join() {
        let z2 = LatticeGroup::new(2).unwrap();
        let a = Sublattice::from_generators(z2, &[vec![2i64, 0], vec![0, 1]]).unwrap();
        let b = Sublattice::from_generators(z2, &[vec![1i64, 0], vec![0, 3]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap().index(), 6);
        assert_eq!(a.sum(&b).unwrap(), Sublattice::whole(z2));
        let c = Sublattice::from_generators(z2, &[vec![2i64, 0], vec![0, 3], vec![1, 1]]).unwrap();
        assert_eq!(c.index(), 1);
        assert!(Sublattice::from_generators(z2, &[vec![1i64, 1]]).is_err());
    }
}
