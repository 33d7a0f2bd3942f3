//! Rank modulo a prime `p = 1 (mod m)`, with `zeta_m` sent to an `m`-th
//! root of unity in `F_p`. The result is a lower bound for the rank over
//! Q(zeta_m).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{CycloElement, Rational};

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime field `F_p` with a primitive `m`-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularField {
    pub p: u64,
    pub root: u64,
    pub order: u64,
}

impl ModularField {
    /// Primes `p = 1 (mod m)` above `2^61`, in increasing order.
    pub fn candidates(m: u64) -> impl Iterator<Item = ModularField> {
        let start = (1u64 << 61) / m * m + 1;
        (0u64..)
            .map(move |i| start + i * m)
            .filter(|&p| is_prime_u64(p))
            .map(move |p| {
                let exps: Vec<u64> = prime_factors(m).into_iter().map(|q| m / q).collect();
                let root = (2u64..)
                    .map(|g| pow_mod(g, (p - 1) / m, p))
                    .find(|&w| exps.iter().all(|&e| pow_mod(w, e, p) != 1))
                    .expect("F_p* is cyclic");
                ModularField { p, root, order: m }
            })
    }

    fn reduce_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("reduced below p")
    }

    fn reduce_rational(&self, c: &Rational) -> Option<u64> {
        let den = self.reduce_int(c.denom());
        if den == 0 {
            return None;
        }
        Some(mul_mod(
            self.reduce_int(c.numer()),
            pow_mod(den, self.p - 2, self.p),
            self.p,
        ))
    }

    /// Image of a field element; `None` when a denominator vanishes mod `p`.
    pub fn reduce(&self, x: &CycloElement) -> Option<u64> {
        let mut acc = 0;
        let mut w = 1;
        for c in x.coeffs() {
            if !c.is_zero() {
                acc = (acc + mul_mod(self.reduce_rational(c)?, w, self.p)) % self.p;
            }
            w = mul_mod(w, self.root, self.p);
        }
        Some(acc)
    }

    /// Gaussian elimination over `F_p`.
    pub fn rank(&self, mut m: Vec<Vec<u64>>) -> usize {
        let p = self.p;
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, piv);
            let inv = pow_mod(m[r][c], p - 2, p);
            for x in &mut m[r][c..cols] {
                *x = mul_mod(*x, inv, p);
            }
            let (head, tail) = m.split_at_mut(r + 1);
            let pr = &head[r];
            for row in tail.iter_mut() {
                let f = row[c];
                if f != 0 {
                    for j in c..cols {
                        row[j] = (row[j] + p - mul_mod(f, pr[j], p)) % p;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

/// Rank lower bound from the first suitable prime; `None` if every tried
/// prime divides some denominator.
pub fn modular_rank(order: u64, m: &[Vec<CycloElement>]) -> Option<usize> {
    for field in ModularField::candidates(order).take(8) {
        let reduced: Option<Vec<Vec<u64>>> = m
            .iter()
            .map(|row| row.iter().map(|x| field.reduce(x)).collect())
            .collect();
        if let Some(rows) = reduced {
            return Some(field.rank(rows));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64(561));
    }

    #[test]
    fn root_has_exact_order() {
        for m in [1u64, 3, 4, 5, 12] {
            let f = ModularField::candidates(m).next().unwrap();
            assert_eq!((f.p - 1) % m, 0);
            assert_eq!(pow_mod(f.root, m, f.p), 1);
            for e in 1..m {
                assert_ne!(pow_mod(f.root, e, f.p), 1, "m = {m}, e = {e}");
            }
        }
    }
}
