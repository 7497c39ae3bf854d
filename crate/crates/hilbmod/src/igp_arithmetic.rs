//! Prime coverage by Kronecker symbols: for a set `S` of integers, a prime
//! `p` is covered when some `s` in `S` has `(s/p) = -1`.

use rayon::prelude::*;

use crate::class_numbers::kronecker;

/// A finite set of nonzero integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantSet {
    pub values: Vec<i64>,
}

impl DiscriminantSet {
    pub fn new(values: Vec<i64>) -> Self {
        DiscriminantSet { values }
    }

    /// Discriminants of the rational and K3-type Hilbert modular surfaces used
    /// for the regular realizations.
    pub fn surfaces() -> Self {
        DiscriminantSet::new(vec![5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 56, 57, 69, 105])
    }

    /// Primes up to 41 other than 31.
    pub fn small_primes() -> Self {
        DiscriminantSet::new(vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 37, 41])
    }

    /// The criteria behind the earlier bound for two-dimensional realizations.
    pub fn legacy() -> Self {
        DiscriminantSet::new(vec![5, 2, 3, -3, -7])
    }
}

pub fn covered(p: u64, s: &DiscriminantSet) -> bool {
    s.values.iter().any(|&x| kronecker(x, p as i64) == Ok(-1))
}

/// Primes up to `bound` by a simple sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut is = vec![true; n + 1];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Smallest prime `p <= bound` not covered by `s`. Primes dividing an element
/// of `s` are skipped: their symbols vanish rather than decide coverage.
pub fn first_uncovered_prime(s: &DiscriminantSet, bound: u64) -> Option<u64> {
    primes_up_to(bound)
        .par_iter()
        .copied()
        .filter(|&p| s.values.iter().all(|&x| x.unsigned_abs() % p != 0))
        .find_first(|&p| !covered(p, s))
}

/// Exponent vector over F2 of the square class of `x`, indexed by `-1` then
/// the primes in `basis`.
fn square_class_vector(x: i64, basis: &[u64]) -> Vec<u8> {
    let mut v = vec![u8::from(x < 0)];
    let mut r = x.unsigned_abs();
    for &p in basis {
        let mut e = 0u8;
        while r.is_multiple_of(p) {
            r /= p;
            e ^= 1;
        }
        v.push(e);
    }
    debug_assert_eq!(r, 1, "prime basis does not cover {x}");
    v
}

fn f2_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] == 1 {
                let pivot = rows[rank].clone();
                for (a, b) in rows[i].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `s1` and `s2` generate the same subgroup of `Q*/Q*^2`.
pub fn square_class_group_equal(s1: &DiscriminantSet, s2: &DiscriminantSet) -> bool {
    let max = s1.values.iter().chain(&s2.values).map(|x| x.unsigned_abs()).max().unwrap_or(1);
    let basis: Vec<u64> = primes_up_to(max.max(2));
    let v1: Vec<Vec<u8>> = s1.values.iter().map(|&x| square_class_vector(x, &basis)).collect();
    let v2: Vec<Vec<u8>> = s2.values.iter().map(|&x| square_class_vector(x, &basis)).collect();
    let r1 = f2_rank(v1.clone());
    let r2 = f2_rank(v2.clone());
    let r12 = f2_rank(v1.into_iter().chain(v2).collect());
    r1 == r12 && r2 == r12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(covered(3, &DiscriminantSet::surfaces()));
        assert!(covered(2, &DiscriminantSet::small_primes()));
        assert_eq!(first_uncovered_prime(&DiscriminantSet::new(vec![2]), 20), Some(7));
    }

    #[test]
    fn square_classes() {
        assert!(square_class_group_equal(&DiscriminantSet::new(vec![8]), &DiscriminantSet::new(vec![2])));
        assert!(!square_class_group_equal(&DiscriminantSet::new(vec![5]), &DiscriminantSet::new(vec![3])));
        assert!(square_class_group_equal(&DiscriminantSet::surfaces(), &DiscriminantSet::small_primes()));
    }
}
