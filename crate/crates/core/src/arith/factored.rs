use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{cyclotomic_poly, divisors, UniPoly};

/// How a factor of a [`FactoredPoly`] is known to decompose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    /// Phi_n, irreducible over Q.
    Cyclotomic(u64),
    /// `t^j - 1`, kept as a composite for presentation.
    PowerMinusOne(u64),
    /// Monic, with no known cyclotomic decomposition.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: UniPoly,
    pub kind: FactorKind,
    pub multiplicity: u64,
}

/// A polynomial kept as a product of monic factors with multiplicities.
///
/// Two factored polynomials may list different factors and still be equal;
/// use [`FactoredPoly::same_polynomial`] for the canonical comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredPoly {
    factors: Vec<Factor>,
}

impl FactoredPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// Product of `Phi_n^mult` over the given `(n, mult)` pairs.
    pub fn from_cyclotomic(indices: &[(u64, u64)]) -> Self {
        let mut f = Self::new();
        for &(n, mult) in indices {
            f.push_cyclotomic(n, mult);
        }
        f
    }

    pub fn push_cyclotomic(&mut self, n: u64, multiplicity: u64) {
        self.factors.push(Factor {
            poly: cyclotomic_poly(n),
            kind: FactorKind::Cyclotomic(n),
            multiplicity,
        });
    }

    /// Appends `(t^j - 1)^multiplicity`.
    pub fn push_power_minus_one(&mut self, j: u64, multiplicity: u64) {
        self.factors.push(Factor {
            poly: UniPoly::t_pow_minus_one(j as usize),
            kind: FactorKind::PowerMinusOne(j),
            multiplicity,
        });
    }

    /// Appends an arbitrary factor; it is made monic first.
    pub fn push_other(&mut self, poly: &UniPoly, multiplicity: u64) {
        self.factors.push(Factor {
            poly: poly.monic(),
            kind: FactorKind::Other,
            multiplicity,
        });
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| f.multiplicity * f.poly.degree().unwrap_or(0) as u64)
            .sum()
    }

    pub fn expand(&self) -> UniPoly {
        self.factors.iter().fold(UniPoly::one(), |acc, f| {
            &acc * &f.poly.pow(f.multiplicity as u32)
        })
    }

    /// Multiset union; expands to the product of the two expansions.
    pub fn union(&self, other: &FactoredPoly) -> FactoredPoly {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FactoredPoly { factors }
    }

    pub fn same_polynomial(&self, other: &FactoredPoly) -> bool {
        self.expand() == other.expand()
    }

    /// Multiplicity of each `Phi_n`, splitting composite `t^j - 1` factors.
    /// `None` when a factor of kind [`FactorKind::Other`] is present.
    pub fn cyclotomic_multiplicities(&self) -> Option<BTreeMap<u64, u64>> {
        let mut out = BTreeMap::new();
        for f in &self.factors {
            match f.kind {
                FactorKind::Cyclotomic(n) => *out.entry(n).or_insert(0) += f.multiplicity,
                FactorKind::PowerMinusOne(j) => {
                    for d in divisors(j) {
                        *out.entry(d).or_insert(0) += f.multiplicity;
                    }
                }
                FactorKind::Other => return None,
            }
        }
        out.retain(|_, m| *m > 0);
        Some(out)
    }

    /// Canonical cyclotomic form: one `Phi_n` factor per index, increasing `n`.
    pub fn to_cyclotomic_form(&self) -> Option<FactoredPoly> {
        let mults = self.cyclotomic_multiplicities()?;
        let pairs: Vec<(u64, u64)> = mults.into_iter().collect();
        Some(Self::from_cyclotomic(&pairs))
    }

    /// Text form, e.g. `(t-1)^14 (t^2+t+1)^1`; factors with multiplicity 0 are skipped.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|f| f.multiplicity > 0)
            .map(|f| format!("({})^{}", f.poly, f.multiplicity))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
