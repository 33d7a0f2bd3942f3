//! Per-character vanishing decisions for the first Milnor monodromy of a
//! plane curve, and their pairing into eigenvalue exclusions.
//!
//! Character `k` of the suspension group corresponds to the eigenvalue
//! `exp(2 pi i k / d)`. A character is excluded when
//! `N = d - n - 1 - k >= sum_{i in I_k} a(g_i, k) - 1`, where `I_k` runs over
//! the singular points whose basis `A_k` is nonempty.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::Value;

use crate::arith::{gcd_u64, root_order};
use crate::arrangement::SingularityProfile;
use crate::error::{Error, Result};
use crate::oracle::{certify_vanishing, OracleOutcome};
use crate::par;
use crate::wh_local::{a_suspension, basis_a_k, local_alexander, suspension_type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Status {
    ExcludedByDivisibility,
    ExcludedByBound,
    ExcludedByOracle,
    NotExcluded,
}

impl Status {
    pub fn is_excluded(self) -> bool {
        self != Status::NotExcluded
    }
}

/// Contribution of one profile entry to character `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryTerm {
    pub entry: usize,
    pub kind: String,
    pub count: u64,
    pub a: u64,
    /// `|A_k|`; the entry belongs to `I_k` iff this is positive.
    pub basis_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterVerdict {
    pub k: u64,
    pub status: Status,
    #[serde(rename = "N")]
    pub n: i64,
    /// `sum count * a` over the entries of `I_k`.
    pub sum_a: u64,
    #[serde(rename = "I_k")]
    pub i_k: Vec<EntryTerm>,
    /// `a(g, k)` for every entry, in entry order.
    pub a_values: Vec<u64>,
    pub evidence: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
}

impl CharacterVerdict {
    pub fn bound_holds(&self) -> bool {
        self.n >= self.sum_a as i64 - 1
    }
}

/// An eigenvalue exclusion or presence taken from outside the criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImportedFact {
    /// Order of the roots of unity concerned.
    pub order: u64,
    pub ks: Vec<u64>,
    pub effect: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntrySummary {
    pub index: usize,
    pub kind: String,
    pub count: u64,
    pub eigenvalue_orders: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub degree: u64,
    pub ambient_n: u64,
    pub entries: Vec<EntrySummary>,
    /// Dimension of the eigenvalue-1 part, `d - 1`.
    pub identity_multiplicity: u64,
    pub verdicts: Vec<CharacterVerdict>,
    /// `k` in `1..d` with both `k` and `d - k` excluded.
    pub h1_excluded: Vec<u64>,
    /// `0` and every `k` not in `h1_excluded`.
    pub h1_candidates: Vec<u64>,
    pub imported_facts: Vec<ImportedFact>,
}

impl AnalysisReport {
    pub fn verdict(&self, k: u64) -> Option<&CharacterVerdict> {
        self.verdicts.get((k as usize).checked_sub(1)?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable report")
    }
}

/// `I_k` data for every entry of `profile`, in entry order.
pub fn entry_terms(profile: &SingularityProfile, k: u64) -> Result<Vec<EntryTerm>> {
    let d = profile.curve_degree;
    if k == 0 || k > d {
        return Err(Error::OutOfRange(format!("character {k} outside 1..={d}")));
    }
    Ok(profile
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let g = e.kind.wh_type();
            EntryTerm {
                entry: i,
                kind: e.kind.label(),
                count: e.count,
                a: a_suspension(&g, d, k),
                basis_size: basis_a_k(&g, d, k).len(),
            }
        })
        .collect())
}

/// The `k` in `1..d` whose eigenvalue is a root of some local Alexander polynomial.
pub fn divisibility_candidates(profile: &SingularityProfile) -> Result<BTreeSet<u64>> {
    let orders = local_orders(profile)?;
    let d = profile.curve_degree;
    Ok((1..d)
        .filter(|&k| orders.contains(&root_order(k, d)))
        .collect())
}

fn local_orders(profile: &SingularityProfile) -> Result<BTreeSet<u64>> {
    let mut orders = BTreeSet::new();
    for e in &profile.entries {
        orders.extend(local_alexander(&e.kind)?.eigenvalue_orders);
    }
    Ok(orders)
}

/// Verdict for a single character.
pub fn analyze_character(
    profile: &SingularityProfile,
    k: u64,
    use_oracle: bool,
) -> Result<CharacterVerdict> {
    let profile = profile.canonical();
    check_inputs(&profile, use_oracle)?;
    let d = profile.curve_degree;
    if k == 0 || k >= d {
        return Err(Error::OutOfRange(format!("character {k} outside 1..{d}")));
    }
    let orders = local_orders(&profile)?;
    verdict(&profile, &orders, k, use_oracle)
}

/// Verdicts for `k = 1..d-1`, paired into eigenvalue exclusions.
pub fn analyze_h1(profile: &SingularityProfile, use_oracle: bool) -> Result<AnalysisReport> {
    let profile = profile.canonical();
    check_inputs(&profile, use_oracle)?;
    if profile.ambient_n != 2 {
        return Err(Error::Unsupported(format!(
            "h1 analysis needs a plane curve (ambient_n = 2), got {}",
            profile.ambient_n
        )));
    }
    let d = profile.curve_degree;
    let orders = local_orders(&profile)?;
    let verdicts = par::map_range(d.saturating_sub(1) as usize, |i| {
        verdict(&profile, &orders, i as u64 + 1, use_oracle)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let excluded = |k: u64| verdicts[k as usize - 1].status.is_excluded();
    let h1_excluded: Vec<u64> = (1..d).filter(|&k| excluded(k) && excluded(d - k)).collect();
    let h1_candidates: Vec<u64> = std::iter::once(0)
        .chain((1..d).filter(|k| !h1_excluded.contains(k)))
        .collect();
    let entries = profile
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(EntrySummary {
                index: i,
                kind: e.kind.label(),
                count: e.count,
                eigenvalue_orders: local_alexander(&e.kind)?
                    .eigenvalue_orders
                    .into_iter()
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalysisReport {
        degree: d,
        ambient_n: profile.ambient_n,
        entries,
        identity_multiplicity: d - 1,
        verdicts,
        h1_excluded,
        h1_candidates,
        imported_facts: Vec::new(),
    })
}

fn check_inputs(profile: &SingularityProfile, use_oracle: bool) -> Result<()> {
    profile.validate()?;
    if use_oracle && !profile.has_coordinates() {
        return Err(Error::MissingCoordinates);
    }
    Ok(())
}

fn verdict(
    profile: &SingularityProfile,
    orders: &BTreeSet<u64>,
    k: u64,
    use_oracle: bool,
) -> Result<CharacterVerdict> {
    let d = profile.curve_degree;
    let n = d as i64 - profile.ambient_n as i64 - 1 - k as i64;
    let terms = entry_terms(profile, k)?;
    let a_values = terms.iter().map(|t| t.a).collect();
    let i_k: Vec<EntryTerm> = terms.into_iter().filter(|t| t.basis_size > 0).collect();
    let sum_a: u64 = i_k.iter().map(|t| t.count * t.a).sum();
    let mut evidence = Vec::new();
    let order = root_order(k, d);
    evidence.push(format!(
        "exp(2 pi i {k}/{d}) has order {order}; local eigenvalue orders {:?}",
        orders
    ));
    evidence.push(format!(
        "I_k ranges over singular-point entries; {} of {} entries have nonempty A_k",
        i_k.len(),
        profile.entries.len()
    ));
    evidence.extend(enumeration_notes(profile, k));
    let mut out = CharacterVerdict {
        k,
        status: Status::NotExcluded,
        n,
        sum_a,
        i_k,
        a_values,
        evidence,
        oracle: None,
    };
    if !orders.contains(&order) {
        out.status = Status::ExcludedByDivisibility;
        out.evidence
            .push(format!("order {order} is not a local eigenvalue order"));
        return Ok(out);
    }
    if out.bound_holds() {
        out.status = Status::ExcludedByBound;
        out.evidence.push(if out.i_k.is_empty() {
            format!("I_k is empty: the target is zero (N = {n})")
        } else {
            format!("N = {n} >= sum_a - 1 = {}", sum_a as i64 - 1)
        });
        return Ok(out);
    }
    out.evidence.push(format!(
        "bound fails: N = {n} < sum_a - 1 = {}",
        sum_a as i64 - 1
    ));
    if use_oracle {
        let outcome = certify_vanishing(profile, k)?;
        out.evidence.push(match outcome.rank {
            Some(r) => format!(
                "evaluation rank {r} of {} jet conditions",
                outcome.target_dim
            ),
            None => format!(
                "evaluation not run: {} columns for {} jet conditions",
                outcome.columns, outcome.target_dim
            ),
        });
        if outcome.certified {
            out.status = Status::ExcludedByOracle;
        }
        out.oracle = Some(outcome);
    }
    Ok(out)
}

/// Notes where the closed-form nontrivial range for ordinary points
/// (`k = k1 d1`, `1 <= k1 < gcd(m, d)`) disagrees with enumeration of `A_k`.
fn enumeration_notes(profile: &SingularityProfile, k: u64) -> Vec<String> {
    let d = profile.curve_degree;
    let mut notes = Vec::new();
    for e in &profile.entries {
        let Some(m) = e.kind.line_multiplicity() else {
            continue;
        };
        let s = suspension_type(&e.kind.wh_type(), d);
        if k % s.d1 != 0 {
            continue;
        }
        let k1 = k / s.d1;
        if k1 >= 1 && k1 < gcd_u64(m, d) && basis_a_k(&e.kind.wh_type(), d, k).is_empty() {
            notes.push(format!(
                "{}: k = {k1}*{} with {k1} < gcd({m}, {d}), but A_k is empty by enumeration",
                e.kind.label(),
                s.d1
            ));
        }
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin_profile, Family};

    fn family(m: u64, n: u64) -> SingularityProfile {
        Family::Monomial { m, n }.profile().unwrap()
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(
            divisibility_candidates(&family(3, 3)).unwrap(),
            BTreeSet::from([3, 6])
        );
        assert_eq!(
            divisibility_candidates(&family(4, 3)).unwrap(),
            BTreeSet::from([3, 4, 6, 8, 9])
        );
        assert_eq!(
            divisibility_candidates(&builtin_profile("G23").unwrap()).unwrap(),
            BTreeSet::from([3, 5, 6, 9, 10, 12])
        );
    }

    #[test]
    fn a443_candidates() {
        let r = analyze_h1(&family(4, 3), false).unwrap();
        assert_eq!(r.h1_candidates, vec![0, 4, 8]);
        assert_eq!(r.identity_multiplicity, 11);
    }

    #[test]
    fn a333_candidates() {
        let r = analyze_h1(&family(3, 3), false).unwrap();
        assert_eq!(r.h1_candidates, vec![0, 3, 6]);
    }

    #[test]
    fn g31_k10_bound_fails() {
        let v = analyze_character(&builtin_profile("G31").unwrap(), 10, false).unwrap();
        assert_eq!(v.status, Status::NotExcluded);
        assert_eq!(v.n, 47);
        assert_eq!(v.sum_a, 120);
        assert_eq!(v.i_k.len(), 1);
        assert_eq!((v.i_k[0].count, v.i_k[0].a), (30, 4));
    }

    #[test]
    fn oracle_needs_coordinates() {
        assert_eq!(
            analyze_h1(&family(3, 3), true).unwrap_err(),
            Error::MissingCoordinates
        );
    }

    #[test]
    fn report_is_symmetric() {
        for (m, n) in [(2, 3), (3, 3), (5, 3), (2, 4), (3, 4)] {
            let r = analyze_h1(&family(m, n), false).unwrap();
            let d = r.degree;
            for &k in &r.h1_excluded {
                assert!(r.h1_excluded.contains(&(d - k)));
            }
            for v in &r.verdicts {
                if v.status == Status::ExcludedByBound {
                    assert!(v.n >= v.sum_a as i64 - 1);
                }
            }
        }
    }
}
