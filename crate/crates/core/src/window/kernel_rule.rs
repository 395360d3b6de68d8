use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::factorial::factorial;
use super::{Flavor, SparseElement, WindowGroup};
use crate::error::{Error, Result};
use crate::finab::{FinAbGroup, GroupElement};
use crate::scalar::IntScalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FactorialSign {
    /// Tail positions `(mn + j - 1)! + n`.
    Plus,
    /// Tail positions `(mn + j - 1)! - n`.
    Minus,
}

impl FactorialSign {
    pub fn name(self) -> &'static str {
        match self {
            FactorialSign::Plus => "plus",
            FactorialSign::Minus => "minus",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "plus" => Some(FactorialSign::Plus),
            "minus" => Some(FactorialSign::Minus),
            _ => None,
        }
    }
}

/// `ker h` for `h : K^(I) → K^m`, where each coordinate `i` is sent to one
/// slot of `K^m` or to zero:
///
/// * indices `1..=m` go to slots `1..=m` (the head),
/// * the tail position `(mn + j - 1)! ± n`, `n ≥ 1`, goes to slot `j`,
/// * every other index, including all `i ≤ 0`, goes to zero,
/// * a finite exception list overrides all of the above.
///
/// Head beats tail when both claim an index. Slots are 0-based in the API.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelRuleSubgroup<T: IntScalar = BigInt> {
    ambient: WindowGroup<T>,
    m: usize,
    sign: FactorialSign,
    exceptions: BTreeMap<BigInt, Option<usize>>,
}

impl<T: IntScalar> KernelRuleSubgroup<T> {
    pub fn new(ambient: &WindowGroup<T>, m: usize, sign: FactorialSign, exceptions: BTreeMap<BigInt, Option<usize>>) -> Result<Self> {
        if ambient.flavor() != Flavor::DirectSum {
            return Err(Error::InvalidInput("kernel-rule subgroups live in the direct sum".into()));
        }
        if m == 0 {
            return Err(Error::InvalidInput("kernel-rule subgroups need m ≥ 1".into()));
        }
        if exceptions.values().flatten().any(|&s| s >= m) {
            return Err(Error::InvalidInput(format!("exception slots must be below {m}")));
        }
        Ok(KernelRuleSubgroup { ambient: ambient.clone(), m, sign, exceptions })
    }

    pub fn standard(ambient: &WindowGroup<T>, m: usize, sign: FactorialSign) -> Result<Self> {
        Self::new(ambient, m, sign, BTreeMap::new())
    }

    pub fn ambient(&self) -> &WindowGroup<T> {
        &self.ambient
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sign(&self) -> FactorialSign {
        self.sign
    }

    pub fn exceptions(&self) -> &BTreeMap<BigInt, Option<usize>> {
        &self.exceptions
    }

    /// `F = K^m`.
    pub fn target(&self) -> FinAbGroup<T> {
        self.ambient.base().power(self.m)
    }

    /// `[K^(I) : ker h] = |h(K^(I))| = |K|^m`; every slot is hit by the tail.
    pub fn index(&self) -> T {
        num_traits::pow(self.ambient.base().order(), self.m)
    }

    /// The position `(mn + j - 1)! ± n` of slot `j` (1-based) at level `n ≥ 1`.
    pub fn tail_position(&self, j: usize, n: usize) -> BigInt {
        let f = factorial(self.m * n + j - 1);
        match self.sign {
            FactorialSign::Plus => f + BigInt::from(n),
            FactorialSign::Minus => f - BigInt::from(n),
        }
    }

    /// The slot coordinate `i` is sent to, by exact factorial inversion.
    pub fn column(&self, i: &BigInt) -> Option<usize> {
        if let Some(&s) = self.exceptions.get(i) {
            return s;
        }
        if !i.is_positive() {
            return None;
        }
        if let Some(k) = i.to_usize().filter(|&k| k <= self.m) {
            return Some(k - 1);
        }
        let m = self.m;
        let mut t = m;
        loop {
            let f = factorial(t);
            match self.sign {
                FactorialSign::Plus => {
                    if &f >= i {
                        return None;
                    }
                    let n = i - &f;
                    if n == BigInt::from(t / m) {
                        return Some(t - m * (t / m));
                    }
                }
                FactorialSign::Minus => {
                    if f > i + BigInt::from(t) {
                        return None;
                    }
                    if &f > i {
                        let n = &f - i;
                        if n == BigInt::from(t / m) {
                            return Some(t - m * (t / m));
                        }
                    }
                }
            }
            t += 1;
        }
    }

    /// `h(x) ∈ K^m`.
    pub fn apply(&self, x: &SparseElement<T>) -> GroupElement<T> {
        let r = self.ambient.base().rank();
        let target = self.target();
        let mut acc = vec![T::zero(); self.m * r];
        for (i, v) in x.entries() {
            if let Some(s) = self.column(i) {
                for c in 0..r {
                    acc[s * r + c] = acc[s * r + c].clone() + v.coords()[c].clone();
                }
            }
        }
        target.reduce(&acc)
    }

    pub fn contains(&self, x: &SparseElement<T>) -> bool {
        self.apply(x).is_zero()
    }

    /// The canonical basis vector `e_i` with the generator `e` of `K`.
    pub fn unit(&self, i: BigInt) -> SparseElement<T> {
        let mut v = vec![T::zero(); self.ambient.base().rank()];
        v[0] = T::one();
        self.ambient.sparse(vec![(i, v)]).expect("unit vectors are valid")
    }
}

/// `t` with `t! ≤ i < (t + 1)!`, for `i ≥ 1`.
pub fn factorial_floor(i: &BigInt) -> usize {
    let mut t = 1;
    while factorial(t + 1) <= *i {
        t += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::IndexSet;

    fn zp(p: i64) -> WindowGroup<i64> {
        WindowGroup::direct_sum(FinAbGroup::cyclic(p).unwrap(), IndexSet::Naturals).unwrap()
    }

    #[test]
    fn columns_follow_the_rule() {
        let n2 = KernelRuleSubgroup::standard(&zp(2), 2, FactorialSign::Plus).unwrap();
        assert_eq!(n2.column(&BigInt::from(1)), Some(0));
        assert_eq!(n2.column(&BigInt::from(2)), Some(1));
        assert_eq!(n2.column(&BigInt::from(0)), None);
        // 2! + 1 = 3 and 3! + 1 = 7 at level 1; 4! + 2 = 26 and 5! + 2 = 122 at level 2
        assert_eq!(n2.column(&BigInt::from(3)), Some(0));
        assert_eq!(n2.column(&BigInt::from(7)), Some(1));
        assert_eq!(n2.column(&BigInt::from(26)), Some(0));
        assert_eq!(n2.column(&BigInt::from(122)), Some(1));
        for i in [4, 5, 6, 8, 24, 25, 27, 120, 121, 123] {
            assert_eq!(n2.column(&BigInt::from(i)), None, "index {i}");
        }
        let minus = KernelRuleSubgroup::standard(&zp(2), 2, FactorialSign::Minus).unwrap();
        // 3! - 1 = 5, 4! - 2 = 22, 5! - 2 = 118
        assert_eq!(minus.column(&BigInt::from(5)), Some(1));
        assert_eq!(minus.column(&BigInt::from(22)), Some(0));
        assert_eq!(minus.column(&BigInt::from(118)), Some(1));
        assert_eq!(minus.column(&BigInt::from(23)), None);
    }

    #[test]
    fn tail_positions_invert() {
        for sign in [FactorialSign::Plus, FactorialSign::Minus] {
            for m in 2..=5 {
                let n = KernelRuleSubgroup::standard(&zp(3), m, sign).unwrap();
                for level in 1..=6 {
                    for j in 1..=m {
                        let i = n.tail_position(j, level);
                        if i > BigInt::from(m) {
                            assert_eq!(n.column(&i), Some(j - 1), "m={m} n={level} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let g = zp(2);
        let n2 = KernelRuleSubgroup::standard(&g, 2, FactorialSign::Plus).unwrap();
        for level in 1..=5 {
            let pos = factorial(2 * level) + BigInt::from(level);
            let x = n2.unit(pos).add(g.base(), &n2.unit(BigInt::from(1)).neg(g.base()));
            assert!(n2.contains(&x));
        }
        assert!(!n2.contains(&n2.unit(BigInt::from(1))));
        assert!(!n2.contains(&n2.unit(BigInt::from(2))));
        assert!(n2.contains(&SparseElement::zero()));
        assert_eq!(n2.index(), 4);
    }

    #[test]
    fn exceptions_override() {
        let g = zp(2);
        let mut ex = BTreeMap::new();
        ex.insert(BigInt::from(3), None);
        ex.insert(BigInt::from(4), Some(1));
        let n = KernelRuleSubgroup::new(&g, 2, FactorialSign::Plus, ex).unwrap();
        assert_eq!(n.column(&BigInt::from(3)), None);
        assert_eq!(n.column(&BigInt::from(4)), Some(1));
        let mut bad = BTreeMap::new();
        bad.insert(BigInt::from(9), Some(2));
        assert!(KernelRuleSubgroup::new(&g, 2, FactorialSign::Plus, bad).is_err());
    }

    #[test]
    fn factorial_floor_brackets() {
        assert_eq!(factorial_floor(&BigInt::from(1)), 1);
        assert_eq!(factorial_floor(&BigInt::from(6)), 3);
        assert_eq!(factorial_floor(&BigInt::from(23)), 3);
        assert_eq!(factorial_floor(&factorial(29)), 29);
    }
}
