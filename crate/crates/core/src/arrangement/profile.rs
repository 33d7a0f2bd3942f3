use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{rank2_flats, Arrangement, Family};
use crate::arith::{binomial, CycloElement, CycloField};
use crate::error::{Error, Result};
use crate::wh_local::{milnor_number, SingularityKind, WHType};

/// `count` singular points of the same local type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub count: u64,
    pub kind: SingularityKind,
    /// Affine coordinates `(y_1, y_2)`, one pair per point.
    pub points: Option<Vec<Vec<CycloElement>>>,
}

/// Degree and singularities of a projective plane curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityProfile {
    pub curve_degree: u64,
    pub ambient_n: u64,
    pub entries: Vec<ProfileEntry>,
    /// Field of the coordinates, present when any entry has points.
    pub field: Option<Arc<CycloField>>,
    pub label: Option<String>,
    pub citation: Option<String>,
    pub family: Option<Family>,
}

impl SingularityProfile {
    pub fn new(curve_degree: u64, entries: Vec<ProfileEntry>) -> Self {
        SingularityProfile {
            curve_degree,
            ambient_n: 2,
            entries,
            field: None,
            label: None,
            citation: None,
            family: None,
        }
    }

    pub fn has_coordinates(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.points.is_some())
    }

    pub fn point_count(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// `sum_p mu_p` over all singular points.
    pub fn total_milnor(&self) -> Result<u64> {
        self.entries
            .iter()
            .map(|e| Ok(e.count * milnor_number(&e.kind.wh_type())?))
            .sum()
    }

    /// Multiplicity -> number of points, for profiles of line arrangements.
    pub fn multiplicity_counts(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            if let Some(m) = e.kind.line_multiplicity() {
                *out.entry(m).or_insert(0) += e.count;
            }
        }
        out
    }

    pub fn is_line_arrangement(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.kind.line_multiplicity().is_some())
    }

    /// Entries sorted by kind, with equal kinds merged.
    pub fn canonical(&self) -> SingularityProfile {
        let mut merged: BTreeMap<SingularityKind, ProfileEntry> = BTreeMap::new();
        for e in &self.entries {
            match merged.get_mut(&e.kind) {
                None => {
                    merged.insert(e.kind.clone(), e.clone());
                }
                Some(acc) => {
                    acc.count += e.count;
                    acc.points = match (acc.points.take(), &e.points) {
                        (Some(mut a), Some(b)) => {
                            a.extend(b.iter().cloned());
                            Some(a)
                        }
                        _ => None,
                    };
                }
            }
        }
        SingularityProfile {
            entries: merged.into_values().collect(),
            ..self.clone()
        }
    }

    /// Structural checks, plus the pair-count identity
    /// `sum count * C(mult, 2) = C(d, 2)` when every point is ordinary.
    pub fn validate(&self) -> Result<()> {
        if self.curve_degree == 0 {
            return Err(Error::InvariantViolation(
                "curve degree must be positive".into(),
            ));
        }
        for e in &self.entries {
            if e.count == 0 {
                return Err(Error::InvariantViolation(format!(
                    "zero count for {}",
                    e.kind.label()
                )));
            }
            if let SingularityKind::OrdinaryMultiple(m) = e.kind {
                if m < 2 || m > self.curve_degree {
                    return Err(Error::InvariantViolation(format!(
                        "ordinary {m}-fold point on a curve of degree {}",
                        self.curve_degree
                    )));
                }
            }
            if let Some(points) = &e.points {
                if points.len() as u64 != e.count {
                    return Err(Error::InvariantViolation(format!(
                        "{} lists {} points for count {}",
                        e.kind.label(),
                        points.len(),
                        e.count
                    )));
                }
                if points.iter().any(|p| p.len() != 2) {
                    return Err(Error::InvariantViolation(
                        "points need two affine coordinates".into(),
                    ));
                }
            }
        }
        if self.is_line_arrangement() {
            let pairs: u64 = self
                .entries
                .iter()
                .map(|e| e.count * binomial(e.kind.line_multiplicity().expect("ordinary"), 2))
                .sum();
            let expected = binomial(self.curve_degree, 2);
            if pairs != expected {
                return Err(Error::InvariantViolation(format!(
                    "pair count {pairs} differs from C({}, 2) = {expected}",
                    self.curve_degree
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let singularities: Vec<Value> = self
            .entries
            .iter()
            .map(|e| json!({ "count": e.count, "kind": KindJson::from(&e.kind) }))
            .collect();
        let mut out = json!({
            "degree": self.curve_degree,
            "ambient_n": self.ambient_n,
            "singularities": singularities,
        });
        let obj = out.as_object_mut().expect("object");
        if let (Some(field), true) = (&self.field, self.has_coordinates()) {
            let points: Vec<Vec<Vec<String>>> = self
                .entries
                .iter()
                .map(|e| {
                    e.points
                        .as_ref()
                        .expect("coordinates present")
                        .iter()
                        .map(|p| p.iter().map(CycloElement::to_z_string).collect())
                        .collect()
                })
                .collect();
            obj.insert(
                "coordinates".into(),
                json!({ "cyclo": field.order(), "points": points }),
            );
        }
        if let Some(label) = &self.label {
            obj.insert("label".into(), json!(label));
        }
        if let Some(citation) = &self.citation {
            obj.insert("citation".into(), json!(citation));
        }
        if let Some(family) = &self.family {
            obj.insert(
                "family".into(),
                serde_json::to_value(family).expect("serializable"),
            );
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProfileJson = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.singularities.len());
        for s in &raw.singularities {
            entries.push(ProfileEntry {
                count: s.count,
                kind: s.kind.to_kind()?,
                points: None,
            });
        }
        let mut field = None;
        if let Some(coords) = raw.coordinates {
            let f = CycloField::new(coords.cyclo)?;
            if coords.points.len() != entries.len() {
                return Err(Error::InvariantViolation(format!(
                    "coordinates list {} groups for {} singularity entries",
                    coords.points.len(),
                    entries.len()
                )));
            }
            for (entry, group) in entries.iter_mut().zip(coords.points) {
                let pts = group
                    .iter()
                    .map(|p| p.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                entry.points = Some(pts);
            }
            field = Some(f);
        }
        let profile = SingularityProfile {
            curve_degree: raw.degree,
            ambient_n: raw.ambient_n.unwrap_or(2),
            entries,
            field,
            label: raw.label,
            citation: raw.citation,
            family: raw.family,
        };
        profile.validate()?;
        Ok(profile)
    }
}

/// Profile of the generic plane section: one ordinary point per rank-2 flat.
pub fn section_profile(a: &Arrangement) -> SingularityProfile {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for f in rank2_flats(a) {
        *counts.entry(f.multiplicity() as u64).or_insert(0) += 1;
    }
    let entries = counts
        .into_iter()
        .map(|(m, count)| ProfileEntry {
            count,
            kind: SingularityKind::OrdinaryMultiple(m),
            points: None,
        })
        .collect();
    SingularityProfile::new(a.len() as u64, entries)
}

pub fn profile_from_file(path: impl AsRef<Path>) -> Result<SingularityProfile> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    SingularityProfile::from_json(&text)
}

/// Built-in profiles of exceptional reflection arrangements, by name
/// (`G23`, `G31`, optionally prefixed with `builtin:`).
pub fn builtin_profile(name: &str) -> Result<SingularityProfile> {
    let key = name.strip_prefix("builtin:").unwrap_or(name);
    let (j, d, counts, citation): (u64, u64, &[(u64, u64)], &str) = match key {
        "G23" => (
            23,
            15,
            &[(2, 15), (3, 10), (5, 6)],
            "Orlik-Terao, Arrangements of Hyperplanes, Table C.4 (H3)",
        ),
        "G31" => (
            31,
            60,
            &[(2, 360), (3, 320), (6, 30)],
            "Orlik-Terao, Arrangements of Hyperplanes, Table C.12",
        ),
        _ => {
            return Err(Error::Unsupported(format!(
                "no built-in profile named '{key}' (available: G23, G31)"
            )))
        }
    };
    let entries = counts
        .iter()
        .map(|&(m, count)| ProfileEntry {
            count,
            kind: SingularityKind::OrdinaryMultiple(m),
            points: None,
        })
        .collect();
    let profile = SingularityProfile {
        label: Some(key.to_string()),
        citation: Some(citation.to_string()),
        family: Some(Family::Exceptional { j }),
        ..SingularityProfile::new(d, entries)
    };
    profile.validate()?;
    Ok(profile)
}

#[derive(Deserialize)]
struct ProfileJson {
    degree: u64,
    ambient_n: Option<u64>,
    singularities: Vec<EntryJson>,
    coordinates: Option<CoordinatesJson>,
    label: Option<String>,
    citation: Option<String>,
    family: Option<Family>,
}

#[derive(Deserialize)]
struct EntryJson {
    count: u64,
    kind: KindJson,
}

#[derive(Deserialize)]
struct CoordinatesJson {
    cyclo: u64,
    points: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindJson {
    Ordinary(u64),
    Brieskorn([u64; 2]),
    Weighted { weights: Vec<u64>, degree: u64 },
}

impl KindJson {
    fn to_kind(&self) -> Result<SingularityKind> {
        Ok(match self {
            KindJson::Ordinary(m) => SingularityKind::OrdinaryMultiple(*m),
            KindJson::Brieskorn([a, b]) => SingularityKind::Brieskorn(*a, *b),
            KindJson::Weighted { weights, degree } => {
                SingularityKind::GeneralWH(WHType::new(weights.clone(), *degree)?)
            }
        })
    }
}

impl From<&SingularityKind> for KindJson {
    fn from(kind: &SingularityKind) -> Self {
        match kind {
            SingularityKind::OrdinaryMultiple(m) => KindJson::Ordinary(*m),
            SingularityKind::Brieskorn(a, b) => KindJson::Brieskorn([*a, *b]),
            SingularityKind::GeneralWH(g) => KindJson::Weighted {
                weights: g.weights().to_vec(),
                degree: g.degree(),
            },
        }
    }
}
