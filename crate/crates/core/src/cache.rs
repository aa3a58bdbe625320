//! Shared memoization helper.
//!
//! Caches are keyed maps behind a mutex. The lock is released while the
//! value is computed, so nested cache lookups cannot deadlock; if two
//! threads race, the first insert wins and the duplicate is discarded
//! (every cached computation is pure, so both results are identical).

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

pub fn memo<K, V, F>(cache: &Mutex<HashMap<K, V>>, key: K, compute: F) -> V
where
    K: Eq + Hash + Clone,
    V: Clone,
    F: FnOnce() -> V,
{
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let value = compute();
    let mut map = cache.lock().unwrap();
    map.entry(key).or_insert(value).clone()
}

#[cfg(test)]
mod tests {
    use crate::bases::star_complements;
    use crate::diffops::{operator_matrix, OpKind};
    use crate::helmholtz::decompose;
    use crate::poly::HomVecPoly;

    #[test]
    fn caches_are_safe_under_concurrent_first_use() {
        // hammer the shared caches from many threads at once; every thread
        // must observe identical values
        let results: Vec<_> = std::thread::scope(|scope| {
            (0..8)
                .map(|_| {
                    scope.spawn(|| {
                        let m = operator_matrix(OpKind::Curl, 5);
                        let (sol_star, irr_star) = star_complements(4);
                        let t = decompose(&HomVecPoly::unit(4, 2, 7));
                        (m, sol_star.len(), irr_star.len(), t)
                    })
                })
                .collect::<Vec<_>>()
                .into_iter()
                .map(|h| h.join().unwrap())
                .collect()
        });
        let first = &results[0];
        for r in &results[1..] {
            assert_eq!(r.0.matrix, first.0.matrix);
            assert_eq!((r.1, r.2), (first.1, first.2));
            assert_eq!(r.3, first.3);
        }
    }
}
