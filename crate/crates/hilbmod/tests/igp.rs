use std::time::{Duration, Instant};

use hilbmod::class_numbers::kronecker;
use hilbmod::igp_arithmetic::{covered, first_uncovered_prime, primes_up_to, square_class_group_equal, DiscriminantSet};

const BOUND: u64 = 4_000_000;

#[test]
fn first_prime_left_uncovered_by_small_primes() {
    let t = Instant::now();
    let l = DiscriminantSet::small_primes();
    let p = first_uncovered_prime(&l, BOUND);
    assert!(t.elapsed() < Duration::from_secs(30), "{:?}", t.elapsed());
    assert_eq!(p, Some(3_267_289));
}

/// Every symbol at 3,267,289 is 0 or +1, so it is uncovered; the scan finds
/// an earlier prime with the same property.
#[test]
fn symbols_at_the_stated_bound() {
    let p = 3_267_289i64;
    for &l in &DiscriminantSet::small_primes().values {
        assert!(matches!(kronecker(l, p).unwrap(), 0 | 1), "({l}/{p})");
    }
    let mut with_minus_one = DiscriminantSet::small_primes();
    with_minus_one.values.push(-1);
    assert_eq!(first_uncovered_prime(&with_minus_one, BOUND), Some(3_267_289));
    assert_eq!(first_uncovered_prime(&DiscriminantSet::small_primes(), BOUND), Some(366_791));
}

#[test]
fn surfaces_cover_every_prime_to_41() {
    let d = DiscriminantSet::surfaces();
    for p in primes_up_to(41) {
        assert!(covered(p, &d), "p={p}");
    }
}

#[test]
fn surfaces_and_small_primes_generate_the_same_square_classes() {
    let (d, l) = (DiscriminantSet::surfaces(), DiscriminantSet::small_primes());
    assert!(square_class_group_equal(&d, &l));
    for p in primes_up_to(100_000) {
        assert_eq!(covered(p, &d), covered(p, &l), "p={p}");
    }
}

#[test]
fn legacy_criteria_bound() {
    assert_eq!(first_uncovered_prime(&DiscriminantSet::legacy(), BOUND), Some(1_009));
}
