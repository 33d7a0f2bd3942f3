//! Evaluation of plane forms of degree `N` to jets at fat points, and exact
//! rank tests of the resulting map.
//!
//! A full-rank evaluation matrix certifies that the character's part of the
//! cohomology vanishes. A deficient one proves nothing.

mod modular;
mod rank;

pub use modular::{is_prime_u64, modular_rank, ModularField};
pub use rank::{bareiss_rank, rational_rank, BareissScalar};

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::arith::{binomial, ratio, CycloElement, CycloField, Rational};
use crate::arrangement::SingularityProfile;
use crate::engine::entry_terms;
use crate::error::{Error, Result};
use crate::par;

/// A point with a jet order: functions modulo `m^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetTarget {
    pub point: Vec<CycloElement>,
    pub order: u64,
}

impl JetTarget {
    pub fn new(point: Vec<CycloElement>, order: u64) -> Result<Self> {
        if point.len() != 2 {
            return Err(Error::OutOfRange(format!(
                "jet target needs 2 coordinates, got {}",
                point.len()
            )));
        }
        if order == 0 {
            return Err(Error::OutOfRange("jet order must be at least 1".into()));
        }
        Ok(JetTarget { point, order })
    }

    /// `C(order + 1, 2)`
    pub fn jet_dim(&self) -> u64 {
        binomial(self.order + 1, 2)
    }
}

/// Exponents `(a_1, a_2)` with `a_1 + a_2 <= n`, by degree, then by
/// decreasing `a_1`.
pub fn monomials_up_to(n: u64) -> Vec<[u64; 2]> {
    (0..=n)
        .flat_map(|deg| (0..=deg).rev().map(move |a1| [a1, deg - a1]))
        .collect()
}

/// Matrix of the map from polynomials of degree `<= N` in the chart
/// coordinates to the direct sum of jet spaces.
#[derive(Clone, Debug)]
pub struct EvalMatrix {
    pub degree: u64,
    /// `(target index, jet exponent beta)` for each row.
    pub row_index: Vec<(usize, [u64; 2])>,
    /// Monomial exponent for each column.
    pub columns: Vec<[u64; 2]>,
    pub rows: Vec<Vec<CycloElement>>,
}

impl EvalMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// One row per line, entries in z-syntax separated by spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(CycloElement::to_z_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Entry `((i, beta), alpha)` is the coefficient of `(y - b_i)^beta` in the
/// Taylor expansion of `y^alpha` at `b_i`:
/// `C(a_1, b_1) C(a_2, b_2) b_{i1}^(a_1 - b_1) b_{i2}^(a_2 - b_2)`.
pub fn build_eval_matrix(n: u64, targets: &[JetTarget]) -> Result<EvalMatrix> {
    let mut seen = BTreeSet::new();
    for t in targets {
        if t.point.len() != 2 || t.order == 0 {
            return Err(Error::OutOfRange("malformed jet target".into()));
        }
        if t.point[0].order() != targets[0].point[0].order()
            || t.point[1].order() != t.point[0].order()
        {
            return Err(Error::OrderMismatch(
                targets[0].point[0].order(),
                t.point[1].order(),
            ));
        }
        if !seen.insert(t.point.clone()) {
            let text: Vec<String> = t.point.iter().map(CycloElement::to_z_string).collect();
            return Err(Error::DuplicatePoint(format!("({})", text.join(", "))));
        }
    }
    let columns = monomials_up_to(n);
    let row_index: Vec<(usize, [u64; 2])> = targets
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            monomials_up_to(t.order - 1)
                .into_iter()
                .map(move |b| (i, b))
        })
        .collect();
    let powers: Vec<[Vec<CycloElement>; 2]> = targets
        .iter()
        .map(|t| {
            [0, 1].map(|c| {
                let b = &t.point[c];
                let mut acc = vec![b.field().one()];
                for _ in 0..n {
                    let next = acc.last().expect("nonempty") * b;
                    acc.push(next);
                }
                acc
            })
        })
        .collect();
    let cols: Vec<Vec<CycloElement>> = par::map_slice(&columns, |alpha| {
        row_index
            .iter()
            .map(|&(i, beta)| {
                let field = targets[i].point[0].field();
                if alpha[0] < beta[0] || alpha[1] < beta[1] {
                    return field.zero();
                }
                let c = binomial(alpha[0], beta[0]) * binomial(alpha[1], beta[1]);
                let v = &powers[i][0][(alpha[0] - beta[0]) as usize]
                    * &powers[i][1][(alpha[1] - beta[1]) as usize];
                v.scale(&Rational::from_integer(c.into()))
            })
            .collect()
    });
    let rows = (0..row_index.len())
        .map(|r| cols.iter().map(|col| col[r].clone()).collect())
        .collect();
    Ok(EvalMatrix {
        degree: n,
        row_index,
        columns,
        rows,
    })
}

/// Exact rank over Q(zeta_m). Rational matrices are eliminated over the
/// integers. Otherwise a modular rank equal to `min(rows, cols)` is exact,
/// since reduction never raises the rank; only deficient cases fall back to
/// Bareiss over the field.
pub fn exact_rank(m: &EvalMatrix) -> usize {
    rank_of_rows(&m.rows)
}

pub fn rank_of_rows(rows: &[Vec<CycloElement>]) -> usize {
    let rational: Option<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.as_rational().cloned()).collect())
        .collect();
    match rational {
        Some(q) => rational_rank(&q),
        None => {
            let full = rows.len().min(rows.first().map_or(0, Vec::len));
            let order = rows.iter().flatten().next().map_or(1, CycloElement::order);
            match modular_rank(order, rows) {
                Some(r) if r == full => r,
                _ => bareiss_rank(rows.to_vec()),
            }
        }
    }
}

/// Outcome of an oracle run for one character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub k: u64,
    #[serde(rename = "N")]
    pub n: i64,
    pub target_dim: u64,
    pub columns: u64,
    /// Exact rank; absent when it was not needed.
    pub rank: Option<u64>,
    /// Rank modulo a prime, a lower bound for `rank`.
    pub modular_rank: Option<u64>,
    pub certified: bool,
}

/// Jet targets for character `k`: every point of every entry in `I_k`,
/// at order `a(g, k)`.
pub fn character_targets(profile: &SingularityProfile, k: u64) -> Result<Vec<JetTarget>> {
    let profile = profile.canonical();
    let mut targets = Vec::new();
    for term in entry_terms(&profile, k)? {
        if term.basis_size == 0 {
            continue;
        }
        let points = profile.entries[term.entry]
            .points
            .as_ref()
            .ok_or(Error::MissingCoordinates)?;
        for p in points {
            targets.push(JetTarget::new(p.clone(), term.a)?);
        }
    }
    Ok(targets)
}

/// Certified iff the evaluation map of degree `N = d - n - 1 - k` forms onto
/// the jets at the points of `I_k` is surjective.
pub fn certify_vanishing(profile: &SingularityProfile, k: u64) -> Result<OracleOutcome> {
    let d = profile.curve_degree;
    let n = d as i64 - profile.ambient_n as i64 - 1 - k as i64;
    let targets = character_targets(profile, k)?;
    let target_dim: u64 = targets.iter().map(JetTarget::jet_dim).sum();
    let columns = if n < 0 { 0 } else { binomial(n as u64 + 2, 2) };
    let mut outcome = OracleOutcome {
        k,
        n,
        target_dim,
        columns,
        rank: None,
        modular_rank: None,
        certified: target_dim == 0,
    };
    if target_dim == 0 || n < 0 || columns < target_dim {
        return Ok(outcome);
    }
    let m = build_eval_matrix(n as u64, &targets)?;
    let order = targets[0].point[0].order();
    outcome.modular_rank = modular_rank(order, &m.rows).map(|r| r as u64);
    let rank = exact_rank(&m) as u64;
    outcome.rank = Some(rank);
    outcome.certified = rank == target_dim;
    Ok(outcome)
}

/// Ranks at `N = sum a - 1` and `N = sum a - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationReport {
    pub sum_a: u64,
    pub target_dim: u64,
    pub rank_at_bound: u64,
    /// `(rank, columns)` one degree below the bound, when that degree is >= 0.
    pub below_bound: Option<(u64, u64)>,
}

impl InterpolationReport {
    pub fn deficient_below(&self) -> Option<bool> {
        self.below_bound.map(|(r, _)| r < self.target_dim)
    }
}

/// Checks that evaluation is surjective at `N = sum a - 1`; a deficient rank
/// there is reported as [`Error::SoundnessViolation`].
pub fn check_interpolation_bound(targets: &[JetTarget]) -> Result<InterpolationReport> {
    let sum_a: u64 = targets.iter().map(|t| t.order).sum();
    let target_dim: u64 = targets.iter().map(JetTarget::jet_dim).sum();
    if sum_a == 0 {
        return Ok(InterpolationReport {
            sum_a,
            target_dim,
            rank_at_bound: 0,
            below_bound: None,
        });
    }
    let at = exact_rank(&build_eval_matrix(sum_a - 1, targets)?) as u64;
    if at != target_dim {
        return Err(Error::SoundnessViolation(format!(
            "evaluation at N = {} has rank {at} < {target_dim}",
            sum_a - 1
        )));
    }
    let below_bound = if sum_a >= 2 {
        let m = build_eval_matrix(sum_a - 2, targets)?;
        Some((exact_rank(&m) as u64, m.n_cols() as u64))
    } else {
        None
    };
    Ok(InterpolationReport {
        sum_a,
        target_dim,
        rank_at_bound: at,
        below_bound,
    })
}

/// Distinct rational points (1 to `max_points`) with orders in
/// `1..=max_order`, over Q = Q(zeta_1).
pub fn random_configuration<R: Rng>(
    rng: &mut R,
    max_points: usize,
    max_order: u64,
) -> Vec<JetTarget> {
    let field = CycloField::new(1).expect("Q");
    let count = rng.gen_range(1..=max_points);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let point: Vec<CycloElement> = (0..2)
            .map(|_| field.from_rational(ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))))
            .collect();
        if seen.insert(point.clone()) {
            out.push(JetTarget {
                point,
                order: rng.gen_range(1..=max_order),
            });
        }
    }
    out
}

/// Three collinear rational points `(0,0), (1,1), (2,2)` with the given orders.
pub fn collinear_targets(orders: [u64; 3]) -> Vec<JetTarget> {
    let field: Arc<CycloField> = CycloField::new(1).expect("Q");
    orders
        .iter()
        .enumerate()
        .map(|(i, &order)| JetTarget {
            point: vec![field.from_int(i as i64), field.from_int(i as i64)],
            order,
        })
        .collect()
}
