
use super::{FinAbGroup, GroupElement, Homomorphism, Subgroup};
use crate::error::{Error, Result};
use crate::linalg::{inverse_unimodular, smith_normal_form, solve_lower, Matrix};
use crate::scalar::IntScalar;

/// The projection `G → G/H`, with `G/H` presented by its Smith invariants.
#[derive(Clone, Debug)]
pub struct QuotientMap<T: IntScalar> {
    kernel: Subgroup<T>,
    quotient: FinAbGroup<T>,
    projection: Homomorphism<T>,
    lifts: Vec<Vec<T>>,
}

impl<T: IntScalar> QuotientMap<T> {
    pub fn new(kernel: &Subgroup<T>) -> Result<Self> {
        let ambient = kernel.ambient();
        let snf = smith_normal_form(kernel.lattice());
        let diag = snf.d.diagonal();
        let keep: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
        let quotient = FinAbGroup::new(keep.iter().map(|&i| diag[i].clone()).collect())?;
        let rows: Vec<Vec<T>> = keep.iter().map(|&i| snf.u.row(i).to_vec()).collect();
        let p = if rows.is_empty() { Matrix::zeros(0, ambient.rank()) } else { Matrix::from_rows(rows) };
        let projection = Homomorphism::new(ambient.clone(), quotient.clone(), p)?;
        let uinv = inverse_unimodular(&snf.u).expect("smith transform is unimodular");
        let lifts = keep.iter().map(|&i| uinv.column(i)).collect();
        Ok(QuotientMap { kernel: kernel.clone(), quotient, projection, lifts })
    }

    pub fn kernel(&self) -> &Subgroup<T> {
        &self.kernel
    }

    pub fn quotient(&self) -> &FinAbGroup<T> {
        &self.quotient
    }

    pub fn projection(&self) -> &Homomorphism<T> {
        &self.projection
    }

    pub fn project(&self, x: &GroupElement<T>) -> GroupElement<T> {
        self.projection.apply(x)
    }

    pub fn project_subgroup(&self, n: &Subgroup<T>) -> Result<Subgroup<T>> {
        Subgroup::image(&self.projection, n)
    }

    /// The endomorphism of `G/H` induced by `phi`; requires `phi(H) ⊆ H`.
    pub fn induced(&self, phi: &Homomorphism<T>) -> Result<Homomorphism<T>> {
        if !phi.is_endomorphism() || phi.source() != self.kernel.ambient() {
            return Err(Error::AmbientMismatch);
        }
        if !Subgroup::image(phi, &self.kernel)?.is_subgroup_of(&self.kernel) {
            return Err(Error::InvalidHomomorphism("kernel is not invariant".into()));
        }
        let cols: Vec<Vec<T>> = self
            .lifts
            .iter()
            .map(|l| self.projection.matrix().mul_vec(&phi.matrix().mul_vec(l)))
            .collect();
        let m = Matrix::from_columns(self.quotient.rank(), &cols);
        Homomorphism::endomorphism(self.quotient.clone(), m)
    }
}

/// A subgroup `H ≤ G` presented as a group in its own right, with the
/// inclusion `H → G`.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding<T: IntScalar> {
    sub: Subgroup<T>,
    group: FinAbGroup<T>,
    inclusion: Homomorphism<T>,
    transform: Matrix<T>,
    keep: Vec<usize>,
}

impl<T: IntScalar> SubgroupEmbedding<T> {
    pub fn new(sub: &Subgroup<T>) -> Result<Self> {
        let ambient = sub.ambient();
        let r = ambient.rank();
        let l = sub.lattice();
        // H ≅ Z^r / (L^{-1} D) Z^r via y ↦ L y
        let cols: Vec<Vec<T>> = (0..r)
            .map(|i| {
                let mut v = vec![T::zero(); r];
                v[i] = ambient.moduli()[i].clone();
                solve_lower(l, &v).expect("lattice contains the moduli lattice")
            })
            .collect();
        let relations = Matrix::from_columns(r, &cols);
        let snf = smith_normal_form(&relations);
        let diag = snf.d.diagonal();
        let keep: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
        let group = FinAbGroup::new(keep.iter().map(|&i| diag[i].clone()).collect())?;
        let uinv = inverse_unimodular(&snf.u).expect("smith transform is unimodular");
        let inc_cols: Vec<Vec<T>> = keep.iter().map(|&i| l.mul_vec(&uinv.column(i))).collect();
        let inclusion = Homomorphism::new(group.clone(), ambient.clone(), Matrix::from_columns(r, &inc_cols))?;
        Ok(SubgroupEmbedding { sub: sub.clone(), group, inclusion, transform: snf.u, keep })
    }

    pub fn subgroup(&self) -> &Subgroup<T> {
        &self.sub
    }

    pub fn group(&self) -> &FinAbGroup<T> {
        &self.group
    }

    pub fn inclusion(&self) -> &Homomorphism<T> {
        &self.inclusion
    }

    fn coords_of_lattice_vector(&self, v: &[T]) -> Option<GroupElement<T>> {
        let y = solve_lower(self.sub.lattice(), v)?;
        let z = self.transform.mul_vec(&y);
        let picked: Vec<T> = self.keep.iter().map(|&i| z[i].clone()).collect();
        Some(self.group.reduce(&picked))
    }

    /// Coordinates in the presented group of an element of `H`.
    pub fn coordinates(&self, x: &GroupElement<T>) -> Result<GroupElement<T>> {
        if !self.sub.contains(x) {
            return Err(Error::InvalidElement("element is not in the subgroup".into()));
        }
        Ok(self.coords_of_lattice_vector(x.coords()).expect("member of the lattice"))
    }

    /// `phi` restricted to `H`; requires `phi(H) ⊆ H`.
    pub fn restrict(&self, phi: &Homomorphism<T>) -> Result<Homomorphism<T>> {
        if !phi.is_endomorphism() || phi.source() != self.sub.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let mut cols = Vec::with_capacity(self.group.rank());
        for c in self.inclusion.matrix().columns() {
            let image = phi.matrix().mul_vec(&c);
            let coords = self
                .coords_of_lattice_vector(&image)
                .ok_or_else(|| Error::InvalidHomomorphism("subgroup is not invariant".into()))?;
            cols.push(coords.into_coords());
        }
        Homomorphism::endomorphism(self.group.clone(), Matrix::from_columns(self.group.rank(), &cols))
    }

    /// A subgroup of `G` contained in `H`, expressed in the presented group.
    pub fn pull(&self, s: &Subgroup<T>) -> Result<Subgroup<T>> {
        if !s.is_subgroup_of(&self.sub) {
            return Err(Error::AmbientMismatch);
        }
        let gens = s
            .generators()
            .iter()
            .map(|g| self.coordinates(g))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::from_generators(&self.group, &gens)
    }

    pub fn push(&self, s: &Subgroup<T>) -> Result<Subgroup<T>> {
        Subgroup::image(&self.inclusion, s)
    }
}
