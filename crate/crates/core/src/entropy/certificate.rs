//! Bernoulli certificates: explicit lower bounds `H*(φ, N) ≥ log p^m` for a
//! Bernoulli shift `φ` of `Z(p)^(I)` and the kernel-rule subgroup `N` of
//! index `p^m`, showing `ent*` of the profinite topology is infinite.
//!
//! At level `n` the witnesses `e_{(mn + j - 1)!}`, `j = 1..=m`, lie in
//! `B_n = ∩_{k<n} φ^{-k}(N)`, and `φ^n` moves them onto the tail positions
//! of distinct slots, so their span meets `B_{n+1}` trivially and
//! `[B_n : B_{n+1}] ≥ p^m`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::finab::FinAbGroup;
use crate::window::{factorial::factorial, BandedEndo, FactorialSign, KernelRuleSubgroup, ShiftKind, SparseElement, WindowGroup};

/// Largest `q` tried for a corrected witness `e_w - e_q`.
pub const CERTIFICATE_SEARCH_LIMIT: u64 = 200;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateLevel {
    pub n: usize,
    /// Sparse witnesses, `(index, coefficient mod p)`.
    pub witnesses: Vec<Vec<(BigInt, u64)>>,
    /// Whether a witness had to be corrected off the head.
    pub corrected: bool,
    pub combinations_checked: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BernoulliCertificate {
    pub p: u64,
    pub m: usize,
    pub shift: ShiftKind,
    pub sign: FactorialSign,
    pub levels: Vec<CertificateLevel>,
    /// `p^m`.
    pub alpha_lower: BigUint,
}

/// The kernel-rule sign matching a shift: positions move up under the right
/// shifts, so their tails sit just above the factorials.
pub fn sign_for(kind: ShiftKind) -> FactorialSign {
    match kind {
        ShiftKind::Right | ShiftKind::TwoSided => FactorialSign::Plus,
        ShiftKind::Left | ShiftKind::TwoSidedInverse => FactorialSign::Minus,
    }
}

struct Setup {
    group: WindowGroup<BigInt>,
    phi: BandedEndo<BigInt>,
    rule: KernelRuleSubgroup<BigInt>,
}

impl Setup {
    fn new(p: u64, m: usize, kind: ShiftKind) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::InvalidInput(format!("certificates need a prime, got {p}")));
        }
        let group = WindowGroup::direct_sum(FinAbGroup::cyclic(BigInt::from(p))?, kind.index_set())?;
        let phi = BandedEndo::shift_map(&group, kind, 1)?;
        let rule = KernelRuleSubgroup::standard(&group, m, sign_for(kind))?;
        Ok(Setup { group, phi, rule })
    }

    fn element(&self, w: &[(BigInt, u64)]) -> Result<SparseElement<BigInt>> {
        self.group.sparse(w.iter().map(|(i, c)| (i.clone(), vec![BigInt::from(*c)])).collect())
    }

    /// `x ∈ B_n`.
    fn in_b(&self, x: &SparseElement<BigInt>, n: usize) -> bool {
        let mut y = x.clone();
        for _ in 0..n {
            if !self.rule.contains(&y) {
                return false;
            }
            y = self.phi.apply(&y);
        }
        true
    }

    /// Every witness in `B_n` and every nonzero combination outside `B_{n+1}`.
    fn check_level(&self, p: u64, witnesses: &[SparseElement<BigInt>], n: usize) -> Option<u64> {
        if !witnesses.iter().all(|w| self.in_b(w, n)) {
            return None;
        }
        let base = self.group.base();
        let mut checked = 0u64;
        let mut coeffs = vec![0u64; witnesses.len()];
        loop {
            let mut i = 0;
            while i < coeffs.len() && coeffs[i] == p - 1 {
                coeffs[i] = 0;
                i += 1;
            }
            if i == coeffs.len() {
                return Some(checked);
            }
            coeffs[i] += 1;
            let c = witnesses.iter().zip(&coeffs).fold(SparseElement::zero(), |acc, (w, &a)| acc.add(base, &w.scale(base, &BigInt::from(a))));
            // already in B_n, so outside B_{n+1} iff h(φ^n c) ≠ 0
            let mut y = c;
            for _ in 0..n {
                y = self.phi.apply(&y);
            }
            if self.rule.contains(&y) {
                return None;
            }
            checked += 1;
        }
    }
}

/// Certifies `[B_n : B_{n+1}] ≥ p^m` for `n = 1..=levels`.
///
/// A witness at a head position is replaced by the first `e_w - e_q`,
/// `q ≤ CERTIFICATE_SEARCH_LIMIT`, that makes the level check pass.
pub fn bernoulli_certificate(p: u64, m: usize, levels: usize, kind: ShiftKind) -> Result<BernoulliCertificate> {
    let setup = Setup::new(p, m, kind)?;
    let mut out = Vec::with_capacity(levels);
    for n in 1..=levels {
        let mut witnesses: Vec<Vec<(BigInt, u64)>> = (1..=m).map(|j| vec![(factorial(m * n + j - 1), 1)]).collect();
        let mut corrected = false;
        for j in 0..m {
            let e = setup.element(&witnesses[j])?;
            if setup.in_b(&e, n) {
                continue;
            }
            let w = witnesses[j][0].0.clone();
            let fix = (0..=CERTIFICATE_SEARCH_LIMIT).map(BigInt::from).filter(|q| *q != w && setup.group.has_index(q)).find(|q| {
                let trial = vec![(w.clone(), 1), (q.clone(), p - 1)];
                setup.element(&trial).map(|x| setup.in_b(&x, n)).unwrap_or(false)
            });
            match fix {
                Some(q) => {
                    witnesses[j] = vec![(w, 1), (q, p - 1)];
                    corrected = true;
                }
                None => return Err(Error::VerificationFailed(format!("no corrected witness for slot {} at level {n}", j + 1))),
            }
        }
        let elems = witnesses.iter().map(|w| setup.element(w)).collect::<Result<Vec<_>>>()?;
        let checked = setup
            .check_level(p, &elems, n)
            .ok_or_else(|| Error::VerificationFailed(format!("level {n} of the m = {m} certificate fails")))?;
        out.push(CertificateLevel { n, witnesses, corrected, combinations_checked: checked });
    }
    let alpha_lower = num_traits::pow(BigUint::from(p), m);
    Ok(BernoulliCertificate { p, m, shift: kind, sign: sign_for(kind), levels: out, alpha_lower })
}

impl BernoulliCertificate {
    /// Rechecks every level from the stored witnesses alone.
    pub fn verify(&self) -> Result<()> {
        if self.sign != sign_for(self.shift) || self.alpha_lower != num_traits::pow(BigUint::from(self.p), self.m) {
            return Err(Error::VerificationFailed("certificate header is inconsistent".into()));
        }
        let setup = Setup::new(self.p, self.m, self.shift)?;
        let expect = self.p.checked_pow(self.m as u32).map(|x| x - 1);
        for level in &self.levels {
            if level.witnesses.len() != self.m {
                return Err(Error::VerificationFailed(format!("level {} needs {} witnesses", level.n, self.m)));
            }
            let elems = level.witnesses.iter().map(|w| setup.element(w)).collect::<Result<Vec<_>>>()?;
            let checked = setup.check_level(self.p, &elems, level.n);
            if checked.is_none() || checked != expect || checked != Some(level.combinations_checked) {
                return Err(Error::VerificationFailed(format!("level {} does not verify", level.n)));
            }
        }
        Ok(())
    }
}

/// `p^{r_{n+1} - r_n}`, where `r_k` is the GF(p) rank of the constraints
/// cutting `B_k` out of `K^{[0, L)}`, `L` past every witness of the level.
///
/// This is `[B_n ∩ K^{[0,L)} : B_{n+1} ∩ K^{[0,L)}]`, which the witnesses
/// bound below by `p^m`; it never touches the sparse shift machinery.
pub fn truncation_rank_bound(cert: &BernoulliCertificate, level: &CertificateLevel) -> Result<BigUint> {
    let setup = Setup::new(cert.p, cert.m, cert.shift)?;
    let n = level.n;
    let top = level.witnesses.iter().flatten().map(|(i, _)| i.clone()).max().unwrap_or_default();
    let l = top + BigInt::from(n + 2);
    let r_n = constraint_rank(&setup, cert, n, &l);
    let r_next = constraint_rank(&setup, cert, n + 1, &l);
    Ok(num_traits::pow(BigUint::from(cert.p), r_next - r_n))
}

/// Every position `h` can send to a nonzero slot and that `φ^k` can reach
/// from `[0, l)` for some `k < levels`.
fn candidate_positions(setup: &Setup, cert: &BernoulliCertificate, limit: &BigInt) -> Vec<(BigInt, usize)> {
    let mut out: Vec<(BigInt, usize)> = Vec::new();
    let mut push = |pos: BigInt| {
        if let Some(s) = setup.rule.column(&pos) {
            out.push((pos, s));
        }
    };
    for i in 1..=cert.m {
        push(BigInt::from(i));
    }
    for j in 1..=cert.m {
        for lvl in 1.. {
            let pos = setup.rule.tail_position(j, lvl);
            if &pos > limit {
                break;
            }
            push(pos);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn constraint_rank(setup: &Setup, cert: &BernoulliCertificate, levels: usize, l: &BigInt) -> usize {
    let limit = l + BigInt::from(levels);
    let positions = candidate_positions(setup, cert, &limit);
    let up = cert.shift.offset() > 0;
    let mut rows: Vec<BTreeMap<BigInt, u64>> = Vec::new();
    for k in 0..levels {
        let kb = BigInt::from(k);
        for slot in 0..cert.m {
            // (φ^k x)_pos = x_{pos - k} for the right shifts, x_{pos + k} for the left
            let row: BTreeMap<BigInt, u64> = positions
                .iter()
                .filter(|(_, s)| *s == slot)
                .map(|(pos, _)| if up { pos - &kb } else { pos + &kb })
                .filter(|i| !i.is_negative() && i < l)
                .map(|i| (i, 1))
                .collect();
            rows.push(row);
        }
    }
    sparse_rank(rows, cert.p)
}

/// Rank over GF(p) of sparse rows keyed by column.
fn sparse_rank(rows: Vec<BTreeMap<BigInt, u64>>, p: u64) -> usize {
    let mut pivots: BTreeMap<BigInt, BTreeMap<BigInt, u64>> = BTreeMap::new();
    for mut row in rows {
        row.retain(|_, v| *v % p != 0);
        loop {
            let Some((col, &lead)) = row.iter().next().map(|(c, v)| (c.clone(), v)) else { break };
            let Some(piv) = pivots.get(&col) else {
                let inv = mod_inverse(lead, p);
                let normalized = row.into_iter().map(|(c, v)| (c, v * inv % p)).collect();
                pivots.insert(col, normalized);
                break;
            };
            for (c, v) in piv {
                let e = row.entry(c.clone()).or_insert(0);
                *e = (*e + (p - lead) * v) % p;
                if *e == 0 {
                    row.remove(c);
                }
            }
        }
    }
    pivots.len()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    BigUint::from(a).modpow(&BigUint::from(p - 2), &BigUint::from(p)).to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn head_witness_is_corrected() {
        let plus = bernoulli_certificate(2, 2, 2, ShiftKind::Right).unwrap();
        assert!(plus.levels[0].corrected);
        assert_eq!(plus.levels[0].witnesses[0], vec![(BigInt::from(2), 1), (BigInt::from(7), 1)]);
        let minus = bernoulli_certificate(2, 2, 2, ShiftKind::Left).unwrap();
        assert_eq!(minus.levels[0].witnesses[0], vec![(BigInt::from(2), 1), (BigInt::from(5), 1)]);
        assert!(!plus.levels[1].corrected);
        plus.verify().unwrap();
        minus.verify().unwrap();
    }

    #[test]
    fn rank_bound_agrees() {
        for kind in ShiftKind::ALL {
            let c = bernoulli_certificate(3, 3, 3, kind).unwrap();
            for level in &c.levels {
                assert!(truncation_rank_bound(&c, level).unwrap() >= c.alpha_lower);
            }
        }
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = bernoulli_certificate(2, 3, 2, ShiftKind::Left).unwrap();
        c.levels[1].witnesses[0] = vec![(BigInt::from(1), 1)];
        assert!(c.verify().is_err());
        assert!(bernoulli_certificate(4, 2, 1, ShiftKind::Left).is_err());
    }
}
