mod common;

use hilbmod::class_numbers::{hurwitz_h, kronecker};
use hilbmod::field_arith::Q;
use proptest::prelude::*;

use common::check_class_numbers;

#[test]
fn weighted_class_numbers_match_brute_force() {
    check_class_numbers(500).unwrap();
}

/// `sum_t H(4n - t^2) = 2 sigma(n) - sum_{d | n} min(d, n/d)` with `H(0) = -1/12`.
#[test]
fn hurwitz_class_number_relation() {
    for n in 1..=125i64 {
        let mut lhs = Q::from_integer(0);
        let t_max = (1..).take_while(|t| t * t <= 4 * n).last().unwrap_or(0);
        for t in -t_max..=t_max {
            let k = 4 * n - t * t;
            lhs += if k == 0 { Q::new(-1, 12) } else { hurwitz_h(k).unwrap() };
        }
        let divisors: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
        let sigma: i64 = divisors.iter().sum();
        let mins: i64 = divisors.iter().map(|&d| d.min(n / d)).sum();
        assert_eq!(lhs, Q::from_integer(i128::from(2 * sigma - mins)), "n={n}");
    }
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[test]
fn kronecker_is_euler_criterion_at_odd_primes() {
    for p in (3..=1000).filter(|&p| is_prime(p)) {
        for a in -60..=60 {
            let e = pow_mod(a, (p - 1) / 2, p);
            let legendre = match e {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(kronecker(a, p).unwrap(), legendre, "({a}/{p})");
        }
    }
}

proptest! {
    #[test]
    fn kronecker_multiplicative_in_both_arguments(a in -500i64..500, b in -500i64..500, n in 1i64..500, k in 1i64..500) {
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(kronecker(a * b, n).unwrap(), kronecker(a, n).unwrap() * kronecker(b, n).unwrap());
        prop_assert_eq!(kronecker(a, n * k).unwrap(), kronecker(a, n).unwrap() * kronecker(a, k).unwrap());
    }
}
