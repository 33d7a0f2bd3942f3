use std::collections::BTreeMap;
use std::sync::Arc;

use monogauge::arith::{ratio, CycloElement, CycloField, FactoredPoly};
use monogauge::arrangement::{build_full_monomial, build_monomial, rank2_flats, Family};
use monogauge::assembly::known_answer;
use monogauge::engine::analyze_h1;
use monogauge::oracle::{bareiss_rank, rank_of_rows, rational_rank};
use monogauge::wh_local::{a_suspension, basis_a_k, suspension_type, WHType};
use proptest::prelude::*;

fn field(order: u64) -> Arc<CycloField> {
    CycloField::new(order).unwrap()
}

fn element(f: &Arc<CycloField>, coeffs: &[(i64, i64)]) -> CycloElement {
    let mut x = f.zero();
    for (i, &(n, d)) in coeffs.iter().enumerate() {
        let term = f.zeta_pow(i as i64).scale(&ratio(n, d));
        x = x.checked_add(&term).unwrap();
    }
    x
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..6)
}

fn orders() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 3, 4, 5, 7, 8, 12])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclo_inverse(order in orders(), c in coeffs()) {
        let f = field(order);
        let x = element(&f, &c);
        prop_assume!(!x.is_zero());
        let inv = x.invert().unwrap();
        prop_assert!(x.checked_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn z_syntax_round_trip(order in orders(), c in coeffs()) {
        let f = field(order);
        let x = element(&f, &c);
        prop_assert_eq!(f.parse(&x.to_z_string()).unwrap(), x);
    }

    #[test]
    fn expand_is_multiplicative(
        a in prop::collection::vec((1u64..13, 1u64..4), 0..4),
        b in prop::collection::vec((1u64..13, 1u64..4), 0..4),
    ) {
        let fa = FactoredPoly::from_cyclotomic(&a);
        let fb = FactoredPoly::from_cyclotomic(&b);
        prop_assert_eq!(fa.union(&fb).expand(), &fa.expand() * &fb.expand());
        prop_assert_eq!(fa.union(&fb).degree(), fa.degree() + fb.degree());
    }

    #[test]
    fn rational_rank_invariant_under_permutation_and_scaling(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..6),
        scale in prop::collection::vec(prop::sample::select(vec![-3i64, -1, 2, 5]), 6),
        rot in 0usize..6,
    ) {
        let m: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect();
        let mut p: Vec<Vec<_>> = m
            .iter()
            .zip(&scale)
            .map(|(r, &s)| r.iter().map(|x| x * ratio(s, 1)).collect())
            .collect();
        let len = p.len();
        p.rotate_left(rot % len);
        prop_assert_eq!(rational_rank(&m), rational_rank(&p));
    }

    #[test]
    fn cyclotomic_rank_matches_bareiss(
        order in prop::sample::select(vec![3u64, 4, 5]),
        entries in prop::collection::vec(coeffs(), 12),
        dup in any::<bool>(),
    ) {
        let f = field(order);
        let mut rows: Vec<Vec<CycloElement>> = entries
            .chunks(4)
            .map(|ch| ch.iter().map(|c| element(&f, c)).collect())
            .collect();
        if dup {
            let combo: Vec<_> = rows[0]
                .iter()
                .zip(&rows[1])
                .map(|(x, y)| x.checked_add(&y.checked_mul(&f.zeta_pow(1)).unwrap()).unwrap())
                .collect();
            rows.push(combo);
        }
        prop_assert_eq!(rank_of_rows(&rows), bareiss_rank(rows.clone()));
    }

    #[test]
    fn flats_independent_of_line_order(m in 2u64..=4, n in 3usize..=4, full in any::<bool>(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let a = if full { build_full_monomial(m, n).unwrap() } else { build_monomial(m, n).unwrap() };
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let b = a.permuted(&order).unwrap();
        let counts = |fl: &[monogauge::arrangement::Flat2]| {
            let mut c = BTreeMap::new();
            for f in fl {
                *c.entry(f.multiplicity()).or_insert(0) += 1;
            }
            c
        };
        prop_assert_eq!(counts(&rank2_flats(&a)), counts(&rank2_flats(&b)));
    }

    #[test]
    fn a_bounds_the_basis(w1 in 1u64..5, w2 in 1u64..5, mult in 2u64..6, d in 1u64..30, k in 1u64..30) {
        let g = WHType::new(vec![w1, w2], w1 * w2 * mult).unwrap();
        let k = (k - 1) % d + 1;
        let a = a_suspension(&g, d, k);
        let s = suspension_type(&g, d);
        let deg = s.basis_degree(k);
        // Brute force: least s with s d1 w_j > deg for all j.
        let brute = (0u64..).find(|&t| s.y_weights().iter().all(|&w| (t * w) as i64 > deg)).unwrap();
        prop_assert_eq!(a, brute);
        for alpha in basis_a_k(&g, d, k) {
            prop_assert!(alpha.iter().all(|&x| x < a));
        }
        prop_assert_eq!(a == 0, deg < 0);
    }

    #[test]
    fn engine_never_excludes_a_known_eigenvalue(m in 2u64..=6, n in 3u64..=4, full in any::<bool>()) {
        let f = if full { Family::FullMonomial { m, n } } else { Family::Monomial { m, n } };
        let report = analyze_h1(&f.profile().unwrap(), false).unwrap();
        let d = report.degree;
        let present = known_answer(&f).unwrap().cyclotomic_multiplicities().unwrap();
        for &k in &report.h1_excluded {
            let order = d / monogauge::arith::gcd_u64(k, d);
            prop_assert!(!present.contains_key(&order), "k = {} excluded in {}", k, f);
            prop_assert!(report.h1_excluded.contains(&(d - k)));
        }
    }
}
