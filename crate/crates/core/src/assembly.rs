//! Assembly of the characteristic polynomial of `h^1` from criterion
//! verdicts, closed-form answers and imported prime-power rules, with an
//! Euler-characteristic consistency check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{binomial, divisors, prime_power, root_order, FactoredPoly, UniPoly};
use crate::arrangement::{Family, SingularityProfile};
use crate::engine::{analyze_h1, AnalysisReport, ImportedFact};
use crate::error::{Error, Result};

/// A closed-form answer with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyRule {
    pub family: Family,
    pub answer: FactoredPoly,
    pub source: String,
}

fn check_family(family: &Family) -> Result<()> {
    let ok = match *family {
        Family::Monomial { m, n } => (m >= 2 && n >= 3) || (m == 1 && n >= 4),
        Family::FullMonomial { m, n } => m >= 2 && n >= 3,
        Family::Exceptional { j } => (23..=37).contains(&j),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("no arrangement family {family}")))
    }
}

/// The closed-form answer for `family`.
pub fn rule(family: &Family) -> Result<MonodromyRule> {
    check_family(family)?;
    let mut answer = FactoredPoly::new();
    let source = match *family {
        Family::Monomial { m, n } => {
            let q = binomial(n, 2);
            answer.push_cyclotomic(1, q * m - 1);
            match n {
                3 => {
                    answer.push_cyclotomic(3, if m % 3 == 0 { 2 } else { 1 });
                    "closed form for A(m,m,3): cubic roots with multiplicity 2 iff 3 | m"
                }
                4 => {
                    answer.push_cyclotomic(3, 1);
                    "closed form for A(m,m,4): cubic roots with multiplicity 1"
                }
                _ => "closed form for A(m,m,n), n > 4: h1 is the identity",
            }
        }
        Family::FullMonomial { m, n } => {
            let q = binomial(n, 2);
            answer.push_cyclotomic(1, q * m + n - 1);
            if n == 3 && m % 3 == 1 {
                answer.push_cyclotomic(3, 1);
            }
            if n == 3 {
                "closed form for A(m,1,3): cubic roots iff m = 1 mod 3"
            } else {
                "closed form for A(m,1,n), n > 3: h1 is the identity"
            }
        }
        Family::Exceptional { j: 31 } => {
            return Err(Error::Unresolved(
                "G31: the vanishing criterion is inconclusive and no closed form is available"
                    .into(),
            ))
        }
        Family::Exceptional { j: 25 } => {
            answer.push_cyclotomic(1, 9);
            answer.push_power_minus_one(4, 2);
            "Hessian arrangement (G25): known monodromy (t-1)^9 (t^4-1)^2"
        }
        Family::Exceptional { j } => {
            let d = family.degree().expect("exceptional degree");
            answer.push_cyclotomic(1, d - 1);
            if j == 23 {
                "G23: imported prime-power rule leaves h1 = identity"
            } else {
                "exceptional group: imported prime-power rule leaves h1 = identity"
            }
        }
    };
    Ok(MonodromyRule {
        family: *family,
        answer,
        source: source.to_string(),
    })
}

pub fn known_answer(family: &Family) -> Result<FactoredPoly> {
    rule(family).map(|r| r.answer)
}

/// Source of an imported exclusion of eigenvalues of the given order, if any.
///
/// The imported rules only speak about prime-power orders `p^s`.
pub fn imported_exclusion(family: &Family, order: u64) -> Option<&'static str> {
    let (p, _) = prime_power(order)?;
    match *family {
        Family::Monomial { n: 3, .. } if p != 3 => {
            Some("prime-power rule for A(m,m,3): orders p^s occur only for p = 3")
        }
        Family::Monomial { n, .. } if n > 3 && !(p == 3 && n == 4) => {
            Some("prime-power rule for A(m,m,n), n > 3: orders p^s occur only for p = 3, n = 4")
        }
        Family::FullMonomial { m, n } if !(p == 3 && n == 3 && m % 3 == 1) => Some(
            "prime-power rule for A(m,1,n): orders p^s occur only for p = 3, n = 3, m = 1 mod 3",
        ),
        Family::Exceptional { j } if j != 25 && j != 31 => {
            Some("prime-power rule for exceptional groups other than G25, G31: no orders p^s occur")
        }
        _ => None,
    }
}

/// Euler-characteristic bookkeeping `Delta^0 Delta^2 / Delta^1 = (t^d - 1)^chi(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiReport {
    pub chi_v: i64,
    pub chi_u: i64,
    pub mu_total: u64,
    pub delta1: FactoredPoly,
    pub delta2: FactoredPoly,
    /// Whether the quotient was also checked by polynomial division.
    pub division_checked: bool,
    pub consistent: bool,
}

impl ChiReport {
    pub fn to_json(&self) -> Value {
        json!({
            "chi_V": self.chi_v,
            "chi_U": self.chi_u,
            "mu_total": self.mu_total,
            "delta1": self.delta1.to_text(),
            "delta2_degree": self.delta2.degree(),
            "delta2": self.delta2.to_text(),
            "division_checked": self.division_checked,
            "consistent": self.consistent,
        })
    }
}

/// Largest `Delta^2` degree for which the quotient is also verified by
/// expanding and dividing.
pub const DIVISION_CHECK_MAX_DEGREE: u64 = 600;

fn int_poly(p: &UniPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| c.to_integer()).collect()
}

/// Schoolbook product, skipping zero coefficients of `b`.
fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
        for (i, x) in a.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Integer expansion, one factor at a time.
fn int_expand(f: &FactoredPoly) -> Result<Vec<BigInt>> {
    let mut acc = vec![BigInt::from(1)];
    for factor in f.factors() {
        if factor.poly.coeffs().iter().any(|c| !c.is_integer()) {
            return Err(Error::NonPolynomial(
                "factor with non-integral coefficients".into(),
            ));
        }
        let p = int_poly(&factor.poly);
        for _ in 0..factor.multiplicity {
            acc = int_mul(&acc, &p);
        }
    }
    Ok(acc)
}

/// `chi(U) = 3 - chi(V)` with `chi(V) = 3d - d^2 + sum mu_p`, and `Delta^2`
/// derived from `delta1`. Fails with [`Error::NonPolynomial`] when the
/// quotient is not a polynomial.
pub fn euler_chi_u(profile: &SingularityProfile, delta1: &FactoredPoly) -> Result<ChiReport> {
    if profile.ambient_n != 2 {
        return Err(Error::Unsupported("Euler check needs a plane curve".into()));
    }
    let d = profile.curve_degree as i64;
    let mu_total = profile.total_milnor()?;
    let chi_v = 3 * d - d * d + mu_total as i64;
    let chi_u = 3 - chi_v;
    let mults = delta1
        .cyclotomic_multiplicities()
        .ok_or_else(|| Error::NonPolynomial("Delta^1 has a non-cyclotomic factor".into()))?;
    let mut delta2_mults: BTreeMap<u64, i64> = BTreeMap::new();
    for e in divisors(d as u64) {
        *delta2_mults.entry(e).or_insert(0) += chi_u;
    }
    for (&e, &k) in &mults {
        *delta2_mults.entry(e).or_insert(0) += k as i64;
    }
    *delta2_mults.entry(1).or_insert(0) -= 1;
    if let Some((e, k)) = delta2_mults.iter().find(|(_, &k)| k < 0) {
        return Err(Error::NonPolynomial(format!(
            "Phi_{e} would have multiplicity {k} in Delta^2 (chi(U) = {chi_u})"
        )));
    }
    let pairs: Vec<(u64, u64)> = delta2_mults
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&e, &k)| (e, k as u64))
        .collect();
    let delta2 = FactoredPoly::from_cyclotomic(&pairs);
    let degree_ok = 1 - delta1.degree() as i64 + delta2.degree() as i64 == d * chi_u;
    let division_checked = delta2.degree() <= DIVISION_CHECK_MAX_DEGREE;
    let mut division_ok = true;
    if division_checked {
        let t_d = int_poly(&UniPoly::t_pow_minus_one(d as usize));
        let mut lhs = int_mul(
            &int_expand(&delta2)?,
            &int_poly(&UniPoly::t_pow_minus_one(1)),
        );
        let mut rhs = int_expand(delta1)?;
        for _ in 0..chi_u.unsigned_abs() {
            if chi_u >= 0 {
                rhs = int_mul(&rhs, &t_d);
            } else {
                lhs = int_mul(&lhs, &t_d);
            }
        }
        division_ok = lhs == rhs;
    }
    if !division_ok {
        return Err(Error::NonPolynomial(
            "expanded quotient does not match".into(),
        ));
    }
    Ok(ChiReport {
        chi_v,
        chi_u,
        mu_total,
        delta1: delta1.clone(),
        delta2,
        division_checked,
        consistent: degree_ok && division_ok,
    })
}

/// How one character's eigenvalue was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KResolution {
    pub k: u64,
    pub order: u64,
    pub resolution: String,
}

/// An eigenvalue orbit whose multiplicity is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placeholder {
    pub order: u64,
    pub ks: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    /// The known part of the characteristic polynomial.
    pub delta: FactoredPoly,
    pub resolved: bool,
    pub placeholders: Vec<Placeholder>,
    pub per_k: Vec<KResolution>,
    pub imported_facts: Vec<ImportedFact>,
    pub source: Option<String>,
    pub chi: Option<ChiReport>,
}

impl Assembly {
    /// `(t-1)^14 (t^2+t+1)^1`, with unknown orbits appended as `Phi_e^?`.
    pub fn to_text(&self) -> String {
        let mut text = self.delta.to_text();
        for p in &self.placeholders {
            text.push_str(&format!(" [Phi_{}^?]", p.order));
        }
        text
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.to_text(),
            "resolved": self.resolved,
            "factors": self.delta.cyclotomic_multiplicities().map(|m| {
                m.into_iter().map(|(e, k)| json!({"cyclotomic": e, "multiplicity": k})).collect::<Vec<_>>()
            }),
            "expanded": self.delta.expand().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "placeholders": self.placeholders,
            "per_k": self.per_k,
            "source": self.source,
            "euler": self.chi.as_ref().map(ChiReport::to_json),
        })
    }
}

/// Combines a report with the closed form and imported rules of the
/// profile's family, when known.
///
/// Every eigenvalue asserted by a closed form must be a criterion
/// candidate; otherwise the result is [`Error::SoundnessViolation`].
pub fn assemble(profile: &SingularityProfile, report: &AnalysisReport) -> Result<Assembly> {
    let d = report.degree;
    let rule = match profile.family {
        Some(f) => match rule(&f) {
            Ok(r) => Some(r),
            Err(Error::Unresolved(_)) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    if rule.is_none() && !profile.is_line_arrangement() {
        return Err(Error::Unsupported(
            "assembly without a closed form needs a line-arrangement profile".into(),
        ));
    }
    let present: BTreeMap<u64, u64> = match &rule {
        Some(r) => r
            .answer
            .cyclotomic_multiplicities()
            .expect("rules are cyclotomic")
            .into_iter()
            .filter(|&(e, _)| e > 1)
            .collect(),
        None => BTreeMap::new(),
    };
    if let Some(r) = &rule {
        let ones = r
            .answer
            .cyclotomic_multiplicities()
            .expect("cyclotomic")
            .get(&1)
            .copied();
        if ones != Some(d - 1) {
            return Err(Error::SoundnessViolation(format!(
                "closed form for {} has (t-1)-exponent {ones:?}, expected {}",
                r.family,
                d - 1
            )));
        }
    }
    for &e in present.keys() {
        if d % e != 0 {
            return Err(Error::SoundnessViolation(format!(
                "order {e} does not divide d = {d}"
            )));
        }
        for k in (1..d).filter(|&k| root_order(k, d) == e) {
            if report.h1_excluded.contains(&k) {
                return Err(Error::SoundnessViolation(format!(
                    "closed form asserts an eigenvalue of order {e}, but k = {k} was excluded"
                )));
            }
        }
    }

    let mut per_k = Vec::new();
    let mut unresolved: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut imported: BTreeMap<(u64, String, String), Vec<u64>> = BTreeMap::new();
    for k in 1..d {
        let order = root_order(k, d);
        let resolution = if report.h1_excluded.contains(&k) {
            let v = &report.verdicts[k as usize - 1];
            let w = &report.verdicts[(d - k) as usize - 1];
            format!("excluded by criterion ({:?}, {:?})", v.status, w.status)
        } else if let Some(mult) = present.get(&order) {
            let effect = format!("present with multiplicity {mult}");
            let src = rule.as_ref().expect("present implies rule").source.clone();
            imported
                .entry((order, effect.clone(), src))
                .or_default()
                .push(k);
            effect
        } else if let Some(src) = profile.family.and_then(|f| imported_exclusion(&f, order)) {
            imported
                .entry((order, "excluded".into(), src.to_string()))
                .or_default()
                .push(k);
            "excluded by imported prime-power rule".to_string()
        } else if let Some(r) = &rule {
            imported
                .entry((order, "excluded".into(), r.source.clone()))
                .or_default()
                .push(k);
            "excluded by closed form".to_string()
        } else {
            unresolved.entry(order).or_default().push(k);
            "unresolved".to_string()
        };
        per_k.push(KResolution {
            k,
            order,
            resolution,
        });
    }
    let imported_facts = imported
        .into_iter()
        .map(|((order, effect, source), ks)| ImportedFact {
            order,
            ks,
            effect,
            source,
        })
        .collect();
    let placeholders: Vec<Placeholder> = unresolved
        .into_iter()
        .map(|(order, ks)| Placeholder { order, ks })
        .collect();
    let delta = match &rule {
        Some(r) => r.answer.clone(),
        None => FactoredPoly::from_cyclotomic(&[(1, d - 1)]),
    };
    let resolved = placeholders.is_empty();
    let chi = if resolved {
        Some(euler_chi_u(profile, &delta)?)
    } else {
        None
    };
    Ok(Assembly {
        delta,
        resolved,
        placeholders,
        per_k,
        imported_facts,
        source: rule.map(|r| r.source),
        chi,
    })
}

/// Analysis followed by assembly; the report's imported facts are filled in.
pub fn analyze_and_assemble(
    profile: &SingularityProfile,
    use_oracle: bool,
) -> Result<(AnalysisReport, Assembly)> {
    let mut report = analyze_h1(profile, use_oracle)?;
    let assembly = assemble(profile, &report)?;
    report.imported_facts = assembly.imported_facts.clone();
    Ok((report, assembly))
}
