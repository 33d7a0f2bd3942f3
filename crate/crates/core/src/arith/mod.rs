//! Exact arithmetic: rationals, univariate polynomials over the rationals,
//! cyclotomic fields and factored characteristic polynomials.

mod cyclo;
mod factored;
mod upoly;

pub use cyclo::{CycloElement, CycloField};
pub use factored::{Factor, FactorKind, FactoredPoly};
pub use upoly::{cyclotomic_poly, UniPoly};

use num_bigint::BigInt;
use num_integer::Integer;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64
}

/// Multiplicative order of exp(2 pi i k / d).
pub fn root_order(k: u64, d: u64) -> u64 {
    d / k.gcd(&d)
}

/// `Some((p, s))` when `n = p^s` with `p` prime and `s >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|p| n % p == 0)?;
    let mut rest = n;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(5), Some((5, 1)));
    }

    #[test]
    fn orders_and_binomials() {
        assert_eq!(root_order(3, 12), 4);
        assert_eq!(root_order(4, 12), 3);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(60, 2), 1770);
        assert_eq!(binomial(2, 3), 0);
    }
}
