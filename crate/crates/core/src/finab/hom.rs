use num_bigint::BigInt;

use super::{FinAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::IntScalar;

/// A homomorphism `Z(m_1) ⊕ ... ⊕ Z(m_r) → Z(k_1) ⊕ ... ⊕ Z(k_q)` given by a
/// `q × r` integer matrix, entry `(j, i)` reduced modulo `k_j`.
///
/// Validity: `k_j | m_i · A_ji`, so a generator of order `m_i` lands on an
/// element killed by `m_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Homomorphism<T = BigInt> {
    source: FinAbGroup<T>,
    target: FinAbGroup<T>,
    matrix: Matrix<T>,
}

impl<T: IntScalar> Homomorphism<T> {
    pub fn new(source: FinAbGroup<T>, target: FinAbGroup<T>, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::InvalidHomomorphism(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let mut reduced = matrix;
        for j in 0..target.rank() {
            let k = &target.moduli()[j];
            for i in 0..source.rank() {
                let a = reduced.get(j, i).mod_floor(k);
                let m = &source.moduli()[i];
                if !(m.clone() * a.clone()).is_multiple_of(k) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "entry ({j},{i}) = {a}: {k} does not divide {m}·{a}"
                    )));
                }
                reduced.set(j, i, a);
            }
        }
        Ok(Homomorphism { source, target, matrix: reduced })
    }

    pub fn endomorphism(group: FinAbGroup<T>, matrix: Matrix<T>) -> Result<Self> {
        Self::new(group.clone(), group, matrix)
    }

    pub fn identity(group: &FinAbGroup<T>) -> Self {
        Self::scalar(group, T::one())
    }

    pub fn zero(source: &FinAbGroup<T>, target: &FinAbGroup<T>) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.rank(), source.rank()),
        }
    }

    /// Multiplication by `k`.
    pub fn scalar(group: &FinAbGroup<T>, k: T) -> Self {
        let diag: Vec<T> = group.moduli().iter().map(|m| k.mod_floor(m)).collect();
        Homomorphism {
            source: group.clone(),
            target: group.clone(),
            matrix: Matrix::diagonal_matrix(&diag),
        }
    }

    pub fn source(&self) -> &FinAbGroup<T> {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup<T> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &GroupElement<T>) -> GroupElement<T> {
        self.target.reduce(&self.matrix.mul_vec(x.coords()))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::AmbientMismatch);
        }
        Self::new(other.source.clone(), self.target.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_endomorphism() {
            return Err(Error::AmbientMismatch);
        }
        let mut acc = Self::identity(&self.source);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// `self × other` on the direct sum of sources.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = (self.matrix.rows(), self.matrix.cols());
        let (r2, c2) = (other.matrix.rows(), other.matrix.cols());
        let mut m = Matrix::zeros(r1 + r2, c1 + c2);
        for i in 0..r1 {
            for j in 0..c1 {
                m.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        for i in 0..r2 {
            for j in 0..c2 {
                m.set(r1 + i, c1 + j, other.matrix.get(i, j).clone());
            }
        }
        Homomorphism {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            matrix: m,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism()
            && (0..self.matrix.rows()).all(|j| {
                (0..self.matrix.cols()).all(|i| {
                    let expect = if i == j { T::one().mod_floor(&self.target.moduli()[j]) } else { T::zero() };
                    *self.matrix.get(j, i) == expect
                })
            })
    }

    /// Every homomorphism `source → target`, in lexicographic matrix order.
    /// Only meant for small groups.
    pub fn enumerate(source: &FinAbGroup<T>, target: &FinAbGroup<T>) -> Vec<Self> {
        // admissible values for entry (j, i): multiples of k_j / gcd(k_j, m_i)
        let mut choices: Vec<Vec<T>> = Vec::new();
        for k in target.moduli() {
            for m in source.moduli() {
                let step = k.clone() / k.gcd(m);
                let mut vals = Vec::new();
                let mut v = T::zero();
                while &v < k {
                    vals.push(v.clone());
                    v = v + step.clone();
                }
                choices.push(vals);
            }
        }
        let (q, r) = (target.rank(), source.rank());
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let data: Vec<T> = idx.iter().zip(&choices).map(|(&t, c)| c[t].clone()).collect();
            out.push(Homomorphism {
                source: source.clone(),
                target: target.clone(),
                matrix: Matrix::from_vec(q, r, data),
            });
            let mut pos = choices.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_congruence() {
        let z2 = FinAbGroup::<i64>::cyclic(2).unwrap();
        let z4 = FinAbGroup::<i64>::cyclic(4).unwrap();
        // Z(2) -> Z(4): 1 ↦ 2 is fine, 1 ↦ 1 is not
        assert!(Homomorphism::new(z2.clone(), z4.clone(), Matrix::from_rows(vec![vec![2]])).is_ok());
        assert!(Homomorphism::new(z2.clone(), z4.clone(), Matrix::from_rows(vec![vec![1]])).is_err());
        // Z(4) -> Z(2): reduction is always fine
        assert!(Homomorphism::new(z4, z2, Matrix::from_rows(vec![vec![1]])).is_ok());
    }

    #[test]
    fn hom_counts_match_gcd_formula() {
        let g = FinAbGroup::<i64>::new(vec![4, 2]).unwrap();
        // |End(Z4 ⊕ Z2)| = gcd(4,4)·gcd(4,2)·gcd(2,4)·gcd(2,2) = 32
        assert_eq!(Homomorphism::enumerate(&g, &g).len(), 32);
        let z6 = FinAbGroup::<i64>::cyclic(6).unwrap();
        let z4 = FinAbGroup::<i64>::cyclic(4).unwrap();
        assert_eq!(Homomorphism::enumerate(&z6, &z4).len(), 2);
    }

    #[test]
    fn powers_and_composition() {
        let g = FinAbGroup::<i64>::cyclic(8).unwrap();
        let mu2 = Homomorphism::scalar(&g, 2);
        assert!(mu2.pow(3).unwrap().is_zero());
        assert!(mu2.pow(0).unwrap().is_identity());
        let x = g.element(vec![3]).unwrap();
        assert_eq!(mu2.apply(&x).coords(), &[6]);
    }
}
