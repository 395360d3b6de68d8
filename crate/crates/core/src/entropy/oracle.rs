//! Brute-force oracles for cotrajectory sizes, independent of the
//! preimage machinery the engines use.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::finab::{FinAbGroup, GroupElement, Homomorphism, QuotientMap, Subgroup};
use crate::linalg::Matrix;
use crate::scalar::{to_biguint, IntScalar};
use crate::window::{BandedEndo, Window, WindowGroup, WindowSubgroup};

/// Largest model the oracles enumerate.
pub const DEFAULT_TRUNCATION_BOUND: u64 = 1 << 20;

fn check_size<T: IntScalar>(g: &FinAbGroup<T>, bound: u64) -> Result<()> {
    let order = to_biguint(&g.order());
    if order > BigUint::from(bound) {
        return Err(Error::TruncationTooLarge { size: order.to_string(), bound: bound.to_string() });
    }
    Ok(())
}

/// `|C_n|`: the number of distinct signatures `(ψ^k x + C)_{k<n}` over
/// `x ∈ G`, i.e. the index of `∩_{k<n} ψ^{-k}(C)`.
pub fn cover_oracle<T: IntScalar>(psi: &Homomorphism<T>, c: &Subgroup<T>, n: usize, bound: u64) -> Result<BigUint> {
    if !psi.is_endomorphism() || psi.source() != c.ambient() {
        return Err(Error::AmbientMismatch);
    }
    check_size(psi.source(), bound)?;
    let q = QuotientMap::new(c)?;
    let mut seen: HashSet<Vec<GroupElement<T>>> = HashSet::new();
    for x in psi.source().elements() {
        let mut sig = Vec::with_capacity(n);
        let mut y = x;
        for _ in 0..n {
            sig.push(q.project(&y));
            y = psi.apply(&y);
        }
        seen.insert(sig);
    }
    Ok(BigUint::from(seen.len()))
}

/// `|C_n|` for a window subgroup `C = {x : x|W ∈ S}`, by enumerating
/// `K^V`, where `V` holds every coordinate `(ψ^k x)|W` reads for `k < n`.
pub fn cover_oracle_window<T: IntScalar>(psi: &BandedEndo<T>, c: &WindowSubgroup<T>, n: usize, bound: u64) -> Result<BigUint> {
    let g = psi.group();
    if c.ambient().base() != g.base() || c.ambient().index_set() != g.index_set() {
        return Err(Error::AmbientMismatch);
    }
    if c.is_whole() || n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let w = c.window();
    let mut d = w;
    let mut v = w;
    for _ in 1..n {
        d = psi.dependency_window(&d);
        v = v.hull(&d);
    }
    let block = g.block(&v);
    check_size(&block, bound)?;
    let q = QuotientMap::new(c.section())?;
    let r = g.base().rank();
    let mut seen: HashSet<Vec<GroupElement<T>>> = HashSet::new();
    for x in block.elements() {
        let entries = v.indices().enumerate().map(|(p, i)| (BigInt::from(i), x.coords()[p * r..(p + 1) * r].to_vec())).collect();
        let mut y = g.sparse(entries)?;
        let mut sig = Vec::with_capacity(n);
        for _ in 0..n {
            sig.push(q.project(&g.restrict(&y, &w)));
            y = psi.apply(&y);
        }
        seen.insert(sig);
    }
    Ok(BigUint::from(seen.len()))
}

/// `|C_1|, ..., |C_{n_max}|` for a translation `ψ` by `s`, computed as
/// `[K^V : ∩_{k<n} M_k^{-1}(S)]` with `M_k : K^V → K^W` the restriction of
/// `ψ^k`, built by indexing alone.
pub fn truncated_product_sizes<T: IntScalar>(psi: &BandedEndo<T>, c: &WindowSubgroup<T>, n_max: usize) -> Result<Vec<BigUint>> {
    let s = psi.pure_translation().ok_or_else(|| Error::UnsupportedBandPattern("truncated products need a translation".into()))?;
    let g = psi.group();
    if c.is_whole() {
        return Ok(vec![BigUint::from(1u32); n_max]);
    }
    let w = c.window();
    // (ψ^k x)_j = x_{j - ks}
    let mut v = w;
    for k in 0..n_max as i64 {
        v = v.hull(&g.clip(w.translate(-k * s)));
    }
    let base = g.base();
    let whole = Subgroup::whole(&g.block(&v));
    let mut acc = whole;
    let mut out = Vec::with_capacity(n_max);
    for k in 0..n_max as i64 {
        let m = translation_matrix(g, base, &v, &w, k * s);
        acc = acc.intersect(&Subgroup::preimage(&m, c.section())?)?;
        out.push(to_biguint(&acc.index()));
    }
    Ok(out)
}

fn translation_matrix<T: IntScalar>(g: &WindowGroup<T>, base: &FinAbGroup<T>, v: &Window, w: &Window, t: i64) -> Homomorphism<T> {
    let r = base.rank();
    let mut m = Matrix::zeros(w.len() * r, v.len() * r);
    for (p, j) in w.indices().enumerate() {
        let src = j - t;
        if !g.has_index(&BigInt::from(src)) || !v.contains(src) {
            continue;
        }
        let q = (src - v.lo()) as usize;
        for a in 0..r {
            m.set(p * r + a, q * r + a, T::one());
        }
    }
    Homomorphism::new(base.power(v.len()), base.power(w.len()), m).expect("coordinate maps are homomorphisms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::{IndexSet, ShiftKind};

    #[test]
    fn finite_oracle_counts_cells() {
        let g = FinAbGroup::new(vec![4i64]).unwrap();
        let c = Subgroup::multiples(&g, &2);
        assert_eq!(cover_oracle(&Homomorphism::identity(&g), &c, 3, 1 << 10).unwrap(), BigUint::from(2u32));
        assert_eq!(cover_oracle(&Homomorphism::zero(&g, &g), &c, 3, 1 << 10).unwrap(), BigUint::from(2u32));
        assert!(cover_oracle(&Homomorphism::identity(&g), &c, 3, 2).is_err());
    }

    #[test]
    fn left_shift_cells_grow() {
        let g = WindowGroup::product(FinAbGroup::cyclic(2i64).unwrap(), IndexSet::Naturals).unwrap();
        let left = BandedEndo::shift_map(&g, ShiftKind::Left, 1).unwrap();
        let n2 = WindowSubgroup::basic(&g, 2);
        for n in 1..=5 {
            let expect = BigUint::from(1u32 << (n + 1));
            assert_eq!(cover_oracle_window(&left, &n2, n, 1 << 12).unwrap(), expect);
            assert_eq!(truncated_product_sizes(&left, &n2, n).unwrap()[n - 1], expect);
        }
    }
}
