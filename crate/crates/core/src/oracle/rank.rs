use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{CycloElement, Rational};

/// Scalars supporting fraction-free elimination.
pub trait BareissScalar: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// `self / other`, known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl BareissScalar for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "inexact Bareiss division");
        q
    }
}

impl BareissScalar for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl BareissScalar for CycloElement {
    fn is_zero(&self) -> bool {
        CycloElement::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.checked_div(other).expect("nonzero Bareiss pivot")
    }
}

/// Rank by Bareiss fraction-free elimination. Columns without a pivot are
/// skipped, which keeps every intermediate entry a minor of the input.
pub fn bareiss_rank<T: BareissScalar>(mut m: Vec<Vec<T>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev: Option<T> = None;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let mut v = piv.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                if let Some(d) = &prev {
                    v = v.div_exact(d);
                }
                row[j] = v;
            }
            row[c] = lead.sub(&lead);
        }
        prev = Some(piv.clone());
        r += 1;
    }
    r
}

/// Rank of a rational matrix: rows are cleared of denominators, then
/// eliminated over the integers.
pub fn rational_rank(m: &[Vec<Rational>]) -> usize {
    let ints = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * Rational::from(l.clone())).to_integer())
                .collect()
        })
        .collect();
    bareiss_rank::<BigInt>(ints)
}
