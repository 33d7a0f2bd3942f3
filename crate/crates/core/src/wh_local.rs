//! Local invariants of isolated weighted homogeneous singularities and of
//! their `d`-th suspensions `g(y) + t^d`.
//!
//! Everything here is combinatorial: a singularity enters only through its
//! weighted homogeneity type `(w_1, ..., w_n; e)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, gcd_u64, lcm_u64, FactoredPoly, Rational};
use crate::error::{Error, Result};

/// Weighted homogeneity type `(w_1, ..., w_n; e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WHType {
    weights: Vec<u64>,
    degree: u64,
}

impl WHType {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::OutOfRange(format!(
                "weights must be nonempty and positive, got {weights:?}"
            )));
        }
        let max_w = *weights.iter().max().expect("nonempty");
        if degree < max_w {
            return Err(Error::OutOfRange(format!(
                "degree {degree} below the largest weight {max_w}"
            )));
        }
        Ok(WHType { weights, degree })
    }

    /// The homogeneous type `(1, 1; m)` of `m` distinct lines through a point.
    pub fn ordinary(m: u64) -> Self {
        WHType {
            weights: vec![1, 1],
            degree: m,
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }
}

impl fmt::Display for WHType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "({};{})", w.join(","), self.degree)
    }
}

/// Local model of a singular point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SingularityKind {
    /// `m` distinct lines through a point.
    OrdinaryMultiple(u64),
    /// `y_1^a + y_2^b`.
    Brieskorn(u64, u64),
    GeneralWH(WHType),
}

impl SingularityKind {
    pub fn wh_type(&self) -> WHType {
        match self {
            SingularityKind::OrdinaryMultiple(m) => WHType::ordinary(*m),
            SingularityKind::Brieskorn(a, b) => {
                let l = lcm_u64(*a, *b);
                WHType {
                    weights: vec![l / a, l / b],
                    degree: l,
                }
            }
            SingularityKind::GeneralWH(g) => g.clone(),
        }
    }

    /// Multiplicity of the point when the kind is a line-arrangement point.
    pub fn line_multiplicity(&self) -> Option<u64> {
        match self {
            SingularityKind::OrdinaryMultiple(m) => Some(*m),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SingularityKind::OrdinaryMultiple(m) => format!("ordinary {m}-fold point"),
            SingularityKind::Brieskorn(a, b) => format!("y1^{a}+y2^{b}"),
            SingularityKind::GeneralWH(g) => format!("weighted homogeneous {g}"),
        }
    }
}

/// Characteristic polynomial of the local monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMonodromy {
    pub alexander: FactoredPoly,
    pub eigenvalue_orders: BTreeSet<u64>,
}

/// `(gcd(e, d), lcm(e, d))`
pub fn gamma_mu(e: u64, d: u64) -> (u64, u64) {
    (gcd_u64(e, d), lcm_u64(e, d))
}

/// Type of the suspension `g(y) + t^d` together with the scaling data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suspension {
    /// `(d1 w_1, ..., d1 w_n, e1; lcm(e, d))`, the last weight belonging to `t`.
    pub wh_type: WHType,
    pub d1: u64,
    pub e1: u64,
    pub gamma: u64,
}

impl Suspension {
    /// Weights of the `y` variables only.
    pub fn y_weights(&self) -> &[u64] {
        &self.wh_type.weights[..self.wh_type.weights.len() - 1]
    }

    /// Weighted degree selecting the monomial basis `A_k`; may be negative.
    pub fn basis_degree(&self, k: u64) -> i64 {
        let y_sum: u64 = self.y_weights().iter().sum();
        self.wh_type.degree as i64 - y_sum as i64 - (self.e1 * k) as i64
    }
}

pub fn suspension_type(g: &WHType, d: u64) -> Suspension {
    let (gamma, mu) = gamma_mu(g.degree, d);
    let d1 = d / gamma;
    let e1 = g.degree / gamma;
    let mut weights: Vec<u64> = g.weights.iter().map(|w| d1 * w).collect();
    weights.push(e1);
    Suspension {
        wh_type: WHType {
            weights,
            degree: mu,
        },
        d1,
        e1,
        gamma,
    }
}

/// All exponent vectors `alpha >= 0` with `sum alpha_j * weights_j = target`,
/// in decreasing lexicographic order.
pub fn weighted_monomials(weights: &[u64], target: i64) -> Vec<Vec<u64>> {
    fn rec(weights: &[u64], target: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        match weights {
            [] => {
                if target == 0 {
                    out.push(prefix.clone());
                }
            }
            [w, rest @ ..] => {
                for a in (0..=target / w).rev() {
                    prefix.push(a);
                    rec(rest, target - a * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    if target >= 0 {
        rec(weights, target as u64, &mut Vec::new(), &mut out);
    }
    out
}

fn min_s_exceeding(weights: &[u64], bound: i64) -> u64 {
    if bound < 0 {
        return 0;
    }
    weights
        .iter()
        .map(|&w| bound as u64 / w + 1)
        .max()
        .unwrap_or(0)
}

/// Smallest `s >= 0` with `s w_j > e - sum w` for every `j`.
pub fn a_absolute(g: &WHType) -> u64 {
    min_s_exceeding(&g.weights, g.degree as i64 - g.weight_sum() as i64)
}

/// Smallest `s >= 0` with `s d1 w_j` exceeding the `A_k` degree for every `j`.
pub fn a_suspension(g: &WHType, d: u64, k: u64) -> u64 {
    let s = suspension_type(g, d);
    min_s_exceeding(s.y_weights(), s.basis_degree(k))
}

/// The monomial basis `A_k` of the suspension for character `k`.
pub fn basis_a_k(g: &WHType, d: u64, k: u64) -> Vec<Vec<u64>> {
    let s = suspension_type(g, d);
    weighted_monomials(s.y_weights(), s.basis_degree(k))
}

/// The `k` in `1..=d` whose basis `A_k` is nonempty.
pub fn nontrivial_k(g: &WHType, d: u64) -> BTreeSet<u64> {
    let s = suspension_type(g, d);
    (1..=d)
        .filter(|&k| !weighted_monomials(s.y_weights(), s.basis_degree(k)).is_empty())
        .collect()
}

/// `prod_j (e - w_j) / w_j`
pub fn milnor_number(g: &WHType) -> Result<u64> {
    let value = g.weights.iter().fold(Rational::one(), |acc, &w| {
        acc * Rational::new((g.degree as i64 - w as i64).into(), (w as i64).into())
    });
    if !value.is_integer() {
        return Err(Error::NonIntegral(g.to_string()));
    }
    value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::NonIntegral(g.to_string()))
}

/// Local Alexander polynomial of an ordinary multiple point or a Brieskorn
/// curve singularity.
pub fn local_alexander(kind: &SingularityKind) -> Result<LocalMonodromy> {
    match kind {
        SingularityKind::Brieskorn(a, b) => brieskorn_monodromy(*a, *b),
        SingularityKind::OrdinaryMultiple(m) => {
            if *m < 2 {
                return Err(Error::OutOfRange(format!("multiplicity {m} < 2")));
            }
            let mut alexander = FactoredPoly::new();
            alexander.push_power_minus_one(*m, *m - 2);
            alexander.push_cyclotomic(1, 1);
            let orders = if *m == 2 {
                BTreeSet::from([1])
            } else {
                divisors(*m).into_iter().collect()
            };
            Ok(LocalMonodromy {
                alexander,
                eigenvalue_orders: orders,
            })
        }
        SingularityKind::GeneralWH(g) => Err(Error::Unsupported(format!(
            "local Alexander polynomial of general type {g}"
        ))),
    }
}

/// Eigenvalues `zeta_a^i zeta_b^j` for `1 <= i < a`, `1 <= j < b`, grouped
/// into cyclotomic factors.
fn brieskorn_monodromy(a: u64, b: u64) -> Result<LocalMonodromy> {
    if a < 2 || b < 2 {
        return Err(Error::OutOfRange(format!(
            "Brieskorn exponents ({a}, {b}) must be >= 2"
        )));
    }
    let l = lcm_u64(a, b);
    // Each eigenvalue is exp(2 pi i r / l) with r = i l/a + j l/b mod l.
    let mut residue_count: BTreeMap<u64, u64> = BTreeMap::new();
    for i in 1..a {
        for j in 1..b {
            let r = (i * (l / a) + j * (l / b)) % l;
            *residue_count.entry(r).or_insert(0) += 1;
        }
    }
    let mut per_order: BTreeMap<u64, BTreeMap<u64, u64>> = BTreeMap::new();
    for (&r, &c) in &residue_count {
        let order = l / gcd_u64(r, l);
        per_order.entry(order).or_default().insert(r, c);
    }
    let mut alexander = FactoredPoly::new();
    for (&order, residues) in &per_order {
        let counts: BTreeSet<u64> = residues.values().copied().collect();
        if residues.len() as u64 != euler_phi(order) || counts.len() != 1 {
            return Err(Error::InvariantViolation(format!(
                "eigenvalues of order {order} of y1^{a}+y2^{b} do not form full Galois orbits"
            )));
        }
        alexander.push_cyclotomic(order, *counts.iter().next().expect("nonempty"));
    }
    Ok(LocalMonodromy {
        alexander,
        eigenvalue_orders: per_order.keys().copied().collect(),
    })
}

/// Keeps exactly the coefficients whose exponent has weighted degree `e - sum w`.
pub fn project_to_basis<T: Clone>(
    coeffs: &BTreeMap<Vec<u64>, T>,
    g: &WHType,
) -> BTreeMap<Vec<u64>, T> {
    let target = g.degree as i64 - g.weight_sum() as i64;
    coeffs
        .iter()
        .filter(|(alpha, _)| {
            alpha.len() == g.weights.len()
                && alpha
                    .iter()
                    .zip(&g.weights)
                    .map(|(a, w)| (a * w) as i64)
                    .sum::<i64>()
                    == target
        })
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(m: u64) -> WHType {
        WHType::ordinary(m)
    }

    #[test]
    fn gamma_mu_values() {
        assert_eq!(gamma_mu(3, 9), (3, 9));
        assert_eq!(gamma_mu(5, 15), (5, 15));
        assert_eq!(gamma_mu(4, 6), (2, 12));
    }

    #[test]
    fn suspension_types() {
        for m in 1..8 {
            let s = suspension_type(&ord(3), 3 * m);
            assert_eq!(s.wh_type, WHType::new(vec![m, m, 1], 3 * m).unwrap());
        }
        for (m, q) in [(4, 3), (5, 6), (3, 2)] {
            let s = suspension_type(&ord(m), q * m);
            assert_eq!(s.wh_type, WHType::new(vec![q, q, 1], q * m).unwrap());
        }
        let s = suspension_type(&ord(6), 15);
        assert_eq!((s.d1, s.e1, s.gamma), (5, 2, 3));
        assert_eq!(s.wh_type, WHType::new(vec![5, 5, 2], 30).unwrap());
    }

    #[test]
    fn weighted_monomial_enumeration() {
        assert_eq!(
            weighted_monomials(&[3, 3], 6),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert!(weighted_monomials(&[3, 3], 5).is_empty());
        assert!(weighted_monomials(&[3, 3], -1).is_empty());
        for m in 3..10u64 {
            for q in 1..5u64 {
                for k1 in 1..=m {
                    let target = (q * (m - 2)) as i64 - (q * k1) as i64;
                    let n = weighted_monomials(&[q, q], target).len() as u64;
                    let expected = if k1 <= m - 2 { m - 1 - k1 } else { 0 };
                    assert_eq!(n, expected, "m={m} q={q} k1={k1}");
                }
            }
        }
        for m in 2..10i64 {
            for k in 1..=m {
                let n = weighted_monomials(&[m as u64, m as u64], m - k).len();
                assert_eq!(n, usize::from(k == m));
            }
        }
    }

    #[test]
    fn absolute_a() {
        for m in 2..12 {
            assert_eq!(a_absolute(&ord(m)), m - 1);
        }
        assert_eq!(a_absolute(&ord(3)), 2);
        assert_eq!(a_absolute(&WHType::new(vec![1, 2], 6).unwrap()), 4);
    }

    #[test]
    fn suspension_a_examples() {
        for m in 1..10 {
            assert_eq!(a_suspension(&ord(3), 3 * m, m), 1);
        }
        for m in 3..10 {
            for q in 1..6 {
                for k1 in 1..=m - 2 {
                    assert_eq!(a_suspension(&ord(m), q * m, q * k1), m - k1 - 1);
                }
            }
        }
    }

    #[test]
    fn nontrivial_characters() {
        for m in 1..8 {
            assert_eq!(nontrivial_k(&ord(3), 3 * m), BTreeSet::from([m]));
        }
        assert_eq!(nontrivial_k(&ord(4), 12), BTreeSet::from([3, 6]));
        for d in (1..40).step_by(2) {
            assert!(nontrivial_k(&ord(2), d).is_empty());
        }
        // The closed-form range k1 < gcd(m, d) overshoots here: k1 = 4 gives
        // an empty basis.
        assert_eq!(nontrivial_k(&ord(5), 15), BTreeSet::from([3, 6, 9]));
        assert_eq!(a_suspension(&ord(5), 15, 12), 0);
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(milnor_number(&ord(3)).unwrap(), 4);
        assert_eq!(milnor_number(&ord(2)).unwrap(), 1);
        for m in 2..12 {
            assert_eq!(milnor_number(&ord(m)).unwrap(), (m - 1) * (m - 1));
        }
        let bad = WHType::new(vec![2, 3], 4).unwrap();
        assert!(matches!(milnor_number(&bad), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn local_alexander_small_cases() {
        let two = local_alexander(&SingularityKind::OrdinaryMultiple(2)).unwrap();
        assert!(two
            .alexander
            .same_polynomial(&FactoredPoly::from_cyclotomic(&[(1, 1)])));
        assert_eq!(two.eigenvalue_orders, BTreeSet::from([1]));

        let three = local_alexander(&SingularityKind::OrdinaryMultiple(3)).unwrap();
        assert!(three
            .alexander
            .same_polynomial(&FactoredPoly::from_cyclotomic(&[(1, 2), (3, 1)])));
        assert_eq!(three.alexander.degree(), 4);
        assert_eq!(three.eigenvalue_orders, BTreeSet::from([1, 3]));

        let b33 = local_alexander(&SingularityKind::Brieskorn(3, 3)).unwrap();
        assert!(b33.alexander.same_polynomial(&three.alexander));
        let b22 = local_alexander(&SingularityKind::Brieskorn(2, 2)).unwrap();
        assert!(b22.alexander.same_polynomial(&two.alexander));

        assert!(matches!(
            local_alexander(&SingularityKind::GeneralWH(ord(4))),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cusp_monodromy() {
        // y1^2 + y2^3: eigenvalues are the primitive sixth roots of unity.
        let cusp = local_alexander(&SingularityKind::Brieskorn(2, 3)).unwrap();
        assert!(cusp
            .alexander
            .same_polynomial(&FactoredPoly::from_cyclotomic(&[(6, 1)])));
        assert_eq!(
            SingularityKind::Brieskorn(2, 3).wh_type(),
            WHType::new(vec![3, 2], 6).unwrap()
        );
    }

    #[test]
    fn projection_onto_basis() {
        let f = crate::arith::CycloField::new(1).unwrap();
        let input: BTreeMap<Vec<u64>, _> = [
            (vec![0, 0], f.from_int(5)),
            (vec![1, 0], f.from_int(2)),
            (vec![0, 1], f.from_int(-1)),
            (vec![2, 0], f.from_int(7)),
        ]
        .into_iter()
        .collect();
        let kept = project_to_basis(&input, &ord(3));
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[&vec![1, 0]], f.from_int(2));
        assert_eq!(kept[&vec![0, 1]], f.from_int(-1));

        let no_constant: BTreeMap<Vec<u64>, _> = input
            .into_iter()
            .filter(|(a, _)| a != &vec![0, 0])
            .collect();
        assert!(project_to_basis(&no_constant, &ord(2)).is_empty());
    }

    #[test]
    fn high_powers_of_the_maximal_ideal_are_dropped() {
        for g in [
            ord(3),
            ord(5),
            WHType::new(vec![1, 2], 6).unwrap(),
            WHType::new(vec![2, 3], 12).unwrap(),
        ] {
            let a = a_absolute(&g);
            let input: BTreeMap<Vec<u64>, i32> = (0..=a + 3)
                .flat_map(|i| (0..=a + 3).map(move |j| vec![i, j]))
                .filter(|v| v[0] + v[1] >= a)
                .map(|v| (v, 1))
                .collect();
            assert!(project_to_basis(&input, &g).is_empty(), "{g}");
        }
    }
}
