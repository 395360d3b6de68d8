//! Factorials with a process-wide cache that only ever grows.

use std::sync::RwLock;

use num_bigint::BigInt;

static CACHE: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `n!`.
pub fn factorial(n: usize) -> BigInt {
    if let Some(f) = CACHE.read().expect("factorial cache poisoned").get(n) {
        return f.clone();
    }
    let mut cache = CACHE.write().expect("factorial cache poisoned");
    if cache.is_empty() {
        cache.push(BigInt::from(1));
    }
    while cache.len() <= n {
        let k = cache.len();
        let next = &cache[k - 1] * BigInt::from(k);
        cache.push(next);
    }
    cache[n].clone()
}
