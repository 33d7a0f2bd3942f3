use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{rank2_flats, Arrangement, Flat2, ProfileEntry, SingularityProfile};
use crate::arith::{ratio, CycloElement, Rational};
use crate::error::{Error, Result};
use crate::wh_local::SingularityKind;

/// Affine chart `{l = 1}` of the projective plane, where `l` is a rational
/// linear form with `form[pivot] != 0`.
///
/// Affine coordinates are `y = (x_i / l(x))` for `i != pivot`, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    form: Vec<Rational>,
    pivot: usize,
}

impl Chart {
    /// The chart `x_i != 0`.
    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut form = vec![Rational::zero(); dim];
        form[i] = Rational::one();
        Chart { form, pivot: i }
    }

    /// `l = x_pivot + sum_{i != pivot} c_i x_i`.
    pub fn sheared(pivot: usize, form: Vec<Rational>) -> Result<Self> {
        if pivot >= form.len() || !form[pivot].is_one() {
            return Err(Error::OutOfRange(
                "shear form must have coefficient 1 at the pivot".into(),
            ));
        }
        Ok(Chart { form, pivot })
    }

    pub fn form(&self) -> &[Rational] {
        &self.form
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    fn level(&self, p: &[CycloElement]) -> CycloElement {
        let zero = p[0].field().zero();
        self.form
            .iter()
            .zip(p)
            .fold(zero, |acc, (c, x)| &acc + &x.scale(c))
    }

    /// Affine coordinates of a projective point; `None` when it lies at infinity.
    pub fn affine(&self, p: &[CycloElement]) -> Option<Vec<CycloElement>> {
        let l = self.level(p);
        let inv = l.invert().ok()?;
        Some(
            (0..p.len())
                .filter(|&i| i != self.pivot)
                .map(|i| &p[i] * &inv)
                .collect(),
        )
    }

    /// The homogeneous representative with `l = 1` of an affine point.
    pub fn lift(&self, y: &[CycloElement]) -> Vec<CycloElement> {
        let field = y[0].field();
        let mut x = Vec::with_capacity(y.len() + 1);
        let mut rest = field.one();
        let mut it = y.iter();
        for i in 0..self.form.len() {
            if i == self.pivot {
                x.push(field.zero());
            } else {
                let yi = it.next().expect("affine dimension").clone();
                rest = &rest - &yi.scale(&self.form[i]);
                x.push(yi);
            }
        }
        x[self.pivot] = rest;
        x
    }
}

/// The projective point cut out by a rank-2 flat in a 3-dimensional space.
pub fn flat_point(flat: &Flat2) -> Result<Vec<CycloElement>> {
    let rows = &flat.basis;
    if rows.len() != 2 || rows[0].len() != 3 {
        return Err(Error::Unsupported(
            "planar points need rank-2 flats in dimension 3".into(),
        ));
    }
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| {
            r.iter()
                .position(|c| !c.is_zero())
                .expect("nonzero echelon row")
        })
        .collect();
    let free = (0..3)
        .find(|c| !pivots.contains(c))
        .expect("one free column");
    let field = rows[0][0].field();
    let mut p = vec![field.zero(); 3];
    p[free] = field.one();
    for (row, &piv) in rows.iter().zip(&pivots) {
        p[piv] = row[free].neg();
    }
    Ok(p)
}

/// Singular points of a line arrangement in the coordinate chart `x_i != 0`.
pub fn planar_points(a: &Arrangement, chart_index: usize) -> Result<SingularityProfile> {
    if chart_index >= a.dim() {
        return Err(Error::OutOfRange(format!(
            "chart index {chart_index} >= {}",
            a.dim()
        )));
    }
    planar_points_in_chart(a, &Chart::coordinate(chart_index, a.dim()))
}

/// Singular points with exact affine coordinates in the given chart.
///
/// The result is checked against the flats: every member line vanishes at
/// its point and no other line does.
pub fn planar_points_in_chart(a: &Arrangement, chart: &Chart) -> Result<SingularityProfile> {
    if a.dim() != 3 {
        return Err(Error::Unsupported(format!(
            "planar points need a line arrangement (dim 3), got dim {}",
            a.dim()
        )));
    }
    if chart.form.len() != 3 {
        return Err(Error::OutOfRange(
            "chart form must have 3 coefficients".into(),
        ));
    }
    let flats = rank2_flats(a);
    let mut by_mult: BTreeMap<usize, Vec<Vec<CycloElement>>> = BTreeMap::new();
    for flat in &flats {
        let p = flat_point(flat)?;
        let y = chart.affine(&p).ok_or_else(|| {
            let text: Vec<String> = p.iter().map(CycloElement::to_z_string).collect();
            Error::ChartHitsSingularity(format!("({})", text.join(" : ")))
        })?;
        let x = chart.lift(&y);
        for (i, h) in a.hyperplanes().iter().enumerate() {
            let on_line = h.evaluate(&x).is_zero();
            if on_line != flat.members.binary_search(&i).is_ok() {
                return Err(Error::InvariantViolation(format!(
                    "line {} disagrees with the flat at affine point {:?}",
                    h.label(),
                    y
                )));
            }
        }
        by_mult.entry(flat.multiplicity()).or_default().push(y);
    }
    let entries = by_mult
        .into_iter()
        .map(|(m, points)| ProfileEntry {
            count: points.len() as u64,
            kind: SingularityKind::OrdinaryMultiple(m as u64),
            points: Some(points),
        })
        .collect();
    let profile = SingularityProfile {
        field: Some(a.field().clone()),
        ..SingularityProfile::new(a.len() as u64, entries)
    };
    profile.validate()?;
    Ok(profile)
}

/// Tries the coordinate charts first, then seeded random rational shears,
/// until no singular point lies at infinity.
pub fn planar_points_auto(a: &Arrangement, seed: u64) -> Result<(SingularityProfile, Chart)> {
    for i in 0..a.dim() {
        let chart = Chart::coordinate(i, a.dim());
        match planar_points_in_chart(a, &chart) {
            Ok(p) => return Ok((p, chart)),
            Err(Error::ChartHitsSingularity(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..64 {
        let form: Vec<Rational> = (0..a.dim())
            .map(|i| {
                if i == 0 {
                    Rational::one()
                } else {
                    ratio(rng.gen_range(-7..=7), rng.gen_range(1..=5))
                }
            })
            .collect();
        let chart = Chart::sheared(0, form)?;
        match planar_points_in_chart(a, &chart) {
            Ok(p) => return Ok((p, chart)),
            Err(e @ Error::ChartHitsSingularity(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_monomial, section_profile};

    #[test]
    fn a223_node_at_origin() {
        let a = build_monomial(2, 3).unwrap();
        let flats = rank2_flats(&a);
        let node = flats
            .iter()
            .find(|f| {
                let p = flat_point(f).unwrap();
                p[1].is_zero() && p[2].is_zero()
            })
            .unwrap();
        assert_eq!(node.multiplicity(), 2);
        let y = Chart::coordinate(0, 3)
            .affine(&flat_point(node).unwrap())
            .unwrap();
        assert!(y.iter().all(CycloElement::is_zero));
    }

    #[test]
    fn a223_chart_x0_hits_a_point_at_infinity() {
        let a = build_monomial(2, 3).unwrap();
        assert!(matches!(
            planar_points(&a, 0),
            Err(Error::ChartHitsSingularity(_))
        ));
        let (p, chart) = planar_points_auto(&a, 7).unwrap();
        assert_ne!(chart, Chart::coordinate(0, 3));
        assert_eq!(
            p.multiplicity_counts(),
            section_profile(&a).multiplicity_counts()
        );
    }

    #[test]
    fn a333_has_twelve_points_nine_on_the_cube_root_grid() {
        let a = build_monomial(3, 3).unwrap();
        let (p, chart) = planar_points_auto(&a, 1).unwrap();
        assert_eq!(p.point_count(), 12);
        let triples = p
            .entries
            .iter()
            .find(|e| e.kind == SingularityKind::OrdinaryMultiple(3))
            .unwrap();
        assert_eq!(triples.count, 12);
        let mut ratios = std::collections::BTreeSet::new();
        for y in triples.points.as_ref().unwrap() {
            let x = chart.lift(y);
            if x.iter().any(CycloElement::is_zero) {
                continue;
            }
            let inv = x[0].invert().unwrap();
            let (r1, r2) = (&x[1] * &inv, &x[2] * &inv);
            assert!(r1.pow(3).is_one() && r2.pow(3).is_one());
            ratios.insert((r1, r2));
        }
        assert_eq!(ratios.len(), 9);
    }

    #[test]
    fn lift_inverts_affine() {
        let a = build_monomial(3, 3).unwrap();
        let f = a.field();
        let chart = Chart::sheared(0, vec![Rational::one(), ratio(2, 3), ratio(-1, 2)]).unwrap();
        let p = vec![f.one(), f.zeta_pow(1), f.from_int(5)];
        let y = chart.affine(&p).unwrap();
        let x = chart.lift(&y);
        let back = chart.affine(&x).unwrap();
        assert_eq!(y, back);
    }
}
