use std::collections::{BTreeMap, BTreeSet};

use super::Arrangement;
use crate::arith::CycloElement;
use crate::par;

/// A codimension-2 flat with the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat2 {
    /// Reduced row echelon form of any two member covectors.
    pub basis: Vec<Vec<CycloElement>>,
    /// Sorted indices of all hyperplanes containing the flat.
    pub members: Vec<usize>,
}

impl Flat2 {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Reduced row echelon form; zero rows are dropped.
pub fn rref(rows: &[Vec<CycloElement>]) -> Vec<Vec<CycloElement>> {
    let mut m: Vec<Vec<CycloElement>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].invert().expect("pivot is nonzero");
        m[r] = m[r].iter().map(|x| x * &inv).collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                m[i] = m[i].iter().zip(&m[r]).map(|(a, b)| a - &(&f * b)).collect();
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// All rank-2 flats, sorted by their canonical basis.
///
/// The pair intersections are computed in parallel; grouping is a sequential
/// merge into an ordered map, so the result does not depend on the thread
/// count or on the order of the hyperplanes (up to index relabeling).
pub fn rank2_flats(a: &Arrangement) -> Vec<Flat2> {
    let hs = a.hyperplanes();
    let n = hs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let keys = par::map_slice(&pairs, |&(i, j)| {
        rref(&[hs[i].covector().to_vec(), hs[j].covector().to_vec()])
    });
    let mut groups: BTreeMap<Vec<Vec<CycloElement>>, BTreeSet<usize>> = BTreeMap::new();
    for (key, &(i, j)) in keys.into_iter().zip(&pairs) {
        let members = groups.entry(key).or_default();
        members.insert(i);
        members.insert(j);
    }
    groups
        .into_iter()
        .map(|(basis, members)| Flat2 {
            basis,
            members: members.into_iter().collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use crate::arrangement::{build_full_monomial, build_monomial};

    fn multiplicity_counts(flats: &[Flat2]) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in flats {
            *out.entry(f.multiplicity()).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn a223_has_three_nodes_and_four_triple_points() {
        let flats = rank2_flats(&build_monomial(2, 3).unwrap());
        assert_eq!(
            multiplicity_counts(&flats),
            BTreeMap::from([(2, 3), (3, 4)])
        );
    }

    #[test]
    fn a413_flat_counts() {
        let a = build_full_monomial(4, 3).unwrap();
        let flats = rank2_flats(&a);
        assert_eq!(
            multiplicity_counts(&flats),
            BTreeMap::from([(2, 12), (3, 16), (6, 3)])
        );
        let pairs: u64 = flats
            .iter()
            .map(|f| binomial(f.members.len() as u64, 2))
            .sum();
        assert_eq!(pairs, binomial(15, 2));
    }

    #[test]
    fn rref_is_canonical() {
        let a = build_monomial(3, 3).unwrap();
        let hs = a.hyperplanes();
        let x = rref(&[hs[0].covector().to_vec(), hs[4].covector().to_vec()]);
        let y = rref(&[hs[4].covector().to_vec(), hs[0].covector().to_vec()]);
        assert_eq!(x, y);
        assert_eq!(x.len(), 2);
    }
}
