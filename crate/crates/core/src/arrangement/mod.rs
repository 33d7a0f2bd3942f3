//! Central hyperplane arrangements over Q(zeta_m) and the plane-curve
//! singularity profiles of their generic 3-dimensional sections.

mod flats;
mod planar;
mod profile;

pub use flats::{rank2_flats, rref, Flat2};
pub use planar::{flat_point, planar_points, planar_points_auto, planar_points_in_chart, Chart};
pub use profile::{
    builtin_profile, profile_from_file, section_profile, ProfileEntry, SingularityProfile,
};

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{binomial, CycloElement, CycloField};
use crate::error::{Error, Result};

/// The 15 reflecting lines of the icosahedral group (G23) over Q(zeta_5).
pub const G23_H3_ARRANGEMENT: &str = include_str!("../../data/g23_h3.arr");

/// A linear form, normalized so that its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    covector: Vec<CycloElement>,
    label: String,
}

impl Hyperplane {
    pub fn new(covector: Vec<CycloElement>, label: impl Into<String>) -> Result<Self> {
        let lead = covector
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvariantViolation("zero covector".into()))?;
        let inv = lead.invert()?;
        let covector = covector
            .iter()
            .map(|c| c.checked_mul(&inv))
            .collect::<Result<_>>()?;
        Ok(Hyperplane {
            covector,
            label: label.into(),
        })
    }

    pub fn covector(&self) -> &[CycloElement] {
        &self.covector
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, point: &[CycloElement]) -> CycloElement {
        let zero = self.covector[0].field().zero();
        self.covector
            .iter()
            .zip(point)
            .fold(zero, |acc, (a, x)| &acc + &(a * x))
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    field: Arc<CycloField>,
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(field: Arc<CycloField>, dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.covector.len() != dim {
                return Err(Error::InvariantViolation(format!(
                    "hyperplane {i} has {} coefficients, expected {dim}",
                    h.covector.len()
                )));
            }
            if h.covector.iter().any(|c| c.order() != field.order()) {
                return Err(Error::OrderMismatch(field.order(), h.covector[0].order()));
            }
            if !seen.insert(h.covector.clone()) {
                return Err(Error::InvariantViolation(format!(
                    "hyperplane {i} ({}) is proportional to an earlier one",
                    h.label
                )));
            }
        }
        Ok(Arrangement {
            field,
            dim,
            hyperplanes,
        })
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn field_order(&self) -> u64 {
        self.field.order()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// Same hyperplanes in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let hs = order.iter().map(|&i| self.hyperplanes[i].clone()).collect();
        Arrangement::new(Arc::clone(&self.field), self.dim, hs)
    }

    /// Parses the text format: `cyclo <m>`, `dim <n>`, then one hyperplane
    /// per line as `n` whitespace-separated field elements in z-syntax.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

        let mut header = |key: &str| -> Result<u64> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, 0, format!("missing '{key}' line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(Error::parse(no, 1, format!("expected '{key} <integer>'")));
            }
            let value = parts.next().and_then(|v| v.parse().ok()).ok_or_else(|| {
                Error::parse(no, key.len() + 2, format!("expected integer after '{key}'"))
            })?;
            if parts.next().is_some() {
                return Err(Error::parse(no, 1, "trailing tokens"));
            }
            Ok(value)
        };
        let m = header("cyclo")?;
        let n = header("dim")? as usize;
        if m == 0 || n == 0 {
            return Err(Error::OutOfRange("cyclo and dim must be positive".into()));
        }
        let field = CycloField::new(m)?;
        let mut hyperplanes = Vec::new();
        for (no, line) in lines {
            let mut covector = Vec::with_capacity(n);
            for (col, token) in token_columns(line) {
                let e = field.parse(token).map_err(|e| match e {
                    Error::Parse {
                        column, message, ..
                    } => Error::parse(no, col + column - 1, message),
                    other => other,
                })?;
                covector.push(e);
            }
            if covector.len() != n {
                return Err(Error::parse(
                    no,
                    1,
                    format!("expected {n} field elements, found {}", covector.len()),
                ));
            }
            let label = format!("H{}", hyperplanes.len());
            hyperplanes.push(Hyperplane::new(covector, label).map_err(|e| match e {
                Error::InvariantViolation(msg) => Error::parse(no, 1, msg),
                other => other,
            })?);
        }
        Arrangement::new(field, n, hyperplanes)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_text(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cyclo {}\ndim {}\n", self.field.order(), self.dim);
        for h in &self.hyperplanes {
            let row: Vec<String> = h.covector.iter().map(CycloElement::to_z_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn token_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

/// `x_i - zeta^a x_j` for `0 <= i < j < n`, `0 <= a < m`.
pub fn build_monomial(m: u64, n: usize) -> Result<Arrangement> {
    if !((m >= 2 && n >= 3) || (m == 1 && n >= 4)) {
        return Err(Error::OutOfRange(format!(
            "monomial arrangement needs (m >= 2, n >= 3) or (m = 1, n >= 4); got m = {m}, n = {n}"
        )));
    }
    let field = CycloField::new(m)?;
    let hyperplanes = monomial_hyperplanes(&field, m, n)?;
    Arrangement::new(field, n, hyperplanes)
}

/// The monomial hyperplanes together with the coordinate hyperplanes `x_k`.
pub fn build_full_monomial(m: u64, n: usize) -> Result<Arrangement> {
    if m < 2 || n < 3 {
        return Err(Error::OutOfRange(format!(
            "full monomial arrangement needs m >= 2, n >= 3; got m = {m}, n = {n}"
        )));
    }
    let field = CycloField::new(m)?;
    let mut hyperplanes = monomial_hyperplanes(&field, m, n)?;
    for k in 0..n {
        let mut cov = vec![field.zero(); n];
        cov[k] = field.one();
        hyperplanes.push(Hyperplane::new(cov, format!("x{k}"))?);
    }
    Arrangement::new(field, n, hyperplanes)
}

fn monomial_hyperplanes(field: &Arc<CycloField>, m: u64, n: usize) -> Result<Vec<Hyperplane>> {
    let mut out = Vec::with_capacity(binomial(n as u64, 2) as usize * m as usize);
    for i in 0..n {
        for j in i + 1..n {
            for a in 0..m {
                let mut cov = vec![field.zero(); n];
                cov[i] = field.one();
                cov[j] = field.zeta_pow(a as i64).neg();
                out.push(Hyperplane::new(cov, format!("x{i}-z^{a}*x{j}"))?);
            }
        }
    }
    Ok(out)
}

/// Arrangement families with closed-form answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// A(m, m, n)
    Monomial { m: u64, n: u64 },
    /// A(m, 1, n)
    FullMonomial { m: u64, n: u64 },
    /// Exceptional reflection group G_j, 23 <= j <= 37.
    Exceptional { j: u64 },
}

impl Family {
    /// Number of lines of the generic plane section.
    pub fn degree(&self) -> Option<u64> {
        match *self {
            Family::Monomial { m, n } => Some(binomial(n, 2) * m),
            Family::FullMonomial { m, n } => Some(binomial(n, 2) * m + n),
            Family::Exceptional { j } => exceptional_hyperplane_count(j),
        }
    }

    pub fn arrangement(&self) -> Result<Arrangement> {
        match *self {
            Family::Monomial { m, n } => build_monomial(m, n as usize),
            Family::FullMonomial { m, n } => build_full_monomial(m, n as usize),
            Family::Exceptional { j } => Err(Error::Unsupported(format!(
                "no hyperplane coordinates are built in for G{j}; supply an arrangement file"
            ))),
        }
    }

    /// Singularity profile of the generic plane section.
    pub fn profile(&self) -> Result<SingularityProfile> {
        match *self {
            Family::Exceptional { j } => builtin_profile(&format!("G{j}")),
            _ => {
                let a = self.arrangement()?;
                let mut p = section_profile(&a);
                p.label = Some(self.to_string());
                p.family = Some(*self);
                Ok(p)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Monomial { m, n } => write!(f, "A({m},{m},{n})"),
            Family::FullMonomial { m, n } => write!(f, "A({m},1,{n})"),
            Family::Exceptional { j } => write!(f, "G{j}"),
        }
    }
}

/// Number of reflecting hyperplanes of the exceptional group G_j
/// (sum of the codegrees plus the rank).
pub fn exceptional_hyperplane_count(j: u64) -> Option<u64> {
    Some(match j {
        23 => 15,
        24 => 21,
        25 => 12,
        26 => 21,
        27 => 45,
        28 => 24,
        29 => 40,
        30 => 60,
        31 => 60,
        32 => 40,
        33 => 45,
        34 => 126,
        35 => 36,
        36 => 63,
        37 => 120,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(build_monomial(2, 3).unwrap().len(), 6);
        assert_eq!(build_monomial(3, 3).unwrap().len(), 9);
        assert_eq!(build_monomial(1, 4).unwrap().len(), 6);
        assert_eq!(build_full_monomial(2, 3).unwrap().len(), 9);
        assert_eq!(build_full_monomial(3, 3).unwrap().len(), 12);
        assert_eq!(build_full_monomial(4, 3).unwrap().len(), 15);
        assert!(matches!(build_monomial(1, 3), Err(Error::OutOfRange(_))));
        assert!(matches!(build_monomial(3, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(
            build_full_monomial(1, 3),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn m2_monomial_is_x_i_plus_minus_x_j() {
        let a = build_monomial(2, 3).unwrap();
        let texts: BTreeSet<String> = a
            .hyperplanes()
            .iter()
            .map(|h| {
                h.covector()
                    .iter()
                    .map(|c| c.to_z_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let expected: BTreeSet<String> = ["1 -1 0", "1 1 0", "1 0 -1", "1 0 1", "0 1 -1", "0 1 1"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(texts, expected);
    }

    #[test]
    fn text_round_trip() {
        let a = build_full_monomial(3, 3).unwrap();
        let b = Arrangement::from_text(&a.to_text()).unwrap();
        assert_eq!(a.hyperplanes().len(), b.hyperplanes().len());
        for (x, y) in a.hyperplanes().iter().zip(b.hyperplanes()) {
            assert_eq!(x.covector(), y.covector());
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = Arrangement::from_text("cyclo 3\ndim 3\n1 z 0\n1 0 z^\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                column: 7,
                message: "expected exponent".into()
            }
        );
        let err = Arrangement::from_text("cyclo 3\ndim 3\n1 z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Arrangement::from_text("dim 3\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 1,
                column: 1,
                ..
            }
        ));
        let err = Arrangement::from_text("cyclo 3\ndim 3\n1 z 0\n2 2*z 0\n").unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
    }

    #[test]
    fn g23_lines_match_builtin_profile() {
        let a = Arrangement::from_text(G23_H3_ARRANGEMENT).unwrap();
        assert_eq!(a.len(), 15);
        let section = section_profile(&a);
        let builtin = builtin_profile("G23").unwrap();
        assert_eq!(section.multiplicity_counts(), builtin.multiplicity_counts());
        let (points, _) = planar_points_auto(&a, 0).unwrap();
        assert_eq!(points.multiplicity_counts(), builtin.multiplicity_counts());
    }

    #[test]
    fn exceptional_degrees() {
        assert_eq!(Family::Exceptional { j: 23 }.degree(), Some(15));
        assert_eq!(Family::Exceptional { j: 31 }.degree(), Some(60));
        assert_eq!(Family::Monomial { m: 4, n: 6 }.degree(), Some(60));
        assert_eq!(Family::FullMonomial { m: 4, n: 3 }.degree(), Some(15));
    }
}
