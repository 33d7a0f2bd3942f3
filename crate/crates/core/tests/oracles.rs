//! Derived quantities checked against independent computations.

use std::collections::BTreeMap;

use monogauge::arith::{binomial, UniPoly};
use monogauge::arrangement::{builtin_profile, Family};
use monogauge::assembly::{euler_chi_u, known_answer};
use monogauge::wh_local::{local_alexander, SingularityKind};

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn root(k: u64, m: u64) -> C {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        C(t.cos(), t.sin())
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
    fn div(self, o: C) -> C {
        let n = o.0 * o.0 + o.1 * o.1;
        C(
            (self.0 * o.0 + self.1 * o.1) / n,
            (self.1 * o.0 - self.0 * o.1) / n,
        )
    }
}

/// Lines of A(m,m,3) (plus coordinate lines for A(m,1,3)) as complex covectors.
fn lines(m: u64, full: bool) -> Vec<[C; 3]> {
    let zero = C(0.0, 0.0);
    let one = C(1.0, 0.0);
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for a in 0..m {
            let mut v = [zero; 3];
            v[i] = one;
            let z = C::root(a, m);
            v[j] = C(-z.0, -z.1);
            out.push(v);
        }
    }
    if full {
        for i in 0..3 {
            let mut v = [zero; 3];
            v[i] = one;
            out.push(v);
        }
    }
    out
}

/// Multiplicities of intersection points, found by clustering normalized
/// cross products in floating point.
fn float_point_counts(ls: &[[C; 3]]) -> BTreeMap<usize, usize> {
    let mut points: Vec<([C; 3], Vec<usize>)> = Vec::new();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let (a, b) = (ls[i], ls[j]);
            let mut p = [
                a[1].mul(b[2]).sub(a[2].mul(b[1])),
                a[2].mul(b[0]).sub(a[0].mul(b[2])),
                a[0].mul(b[1]).sub(a[1].mul(b[0])),
            ];
            let max = p.iter().map(|c| c.abs()).fold(0.0, f64::max);
            let piv = (0..3).find(|&t| p[t].abs() > 1e-6 * max).unwrap();
            let s = p[piv];
            for c in &mut p {
                *c = c.div(s);
            }
            let near = |q: &[C; 3]| (0..3).all(|t| q[t].sub(p[t]).abs() < 1e-9);
            match points.iter_mut().find(|(q, _)| near(q)) {
                Some((_, members)) => {
                    for l in [i, j] {
                        if !members.contains(&l) {
                            members.push(l);
                        }
                    }
                }
                None => points.push((p, vec![i, j])),
            }
        }
    }
    let mut counts = BTreeMap::new();
    for (_, members) in points {
        *counts.entry(members.len()).or_insert(0) += 1;
    }
    counts
}

#[test]
fn point_counts_agree_with_floating_point_intersections() {
    for m in 2..=7u64 {
        for full in [false, true] {
            let f = if full {
                Family::FullMonomial { m, n: 3 }
            } else {
                Family::Monomial { m, n: 3 }
            };
            let exact: BTreeMap<usize, usize> = f
                .profile()
                .unwrap()
                .multiplicity_counts()
                .into_iter()
                .map(|(k, v)| (k as usize, v as usize))
                .collect();
            assert_eq!(exact, float_point_counts(&lines(m, full)), "{f}");
        }
    }
}

/// `chi(P^2 minus C) = 3 - (2d - sum_p (m_p - 1))` for a line arrangement.
#[test]
fn euler_characteristic_from_line_counting() {
    let mut families: Vec<Family> = (2..=8).map(|m| Family::Monomial { m, n: 3 }).collect();
    families.extend((2..=5).map(|m| Family::FullMonomial { m, n: 3 }));
    families.extend((2..=3).map(|m| Family::Monomial { m, n: 4 }));
    for f in families {
        let p = f.profile().unwrap();
        let d = p.curve_degree as i64;
        let drop: i64 = p
            .multiplicity_counts()
            .iter()
            .map(|(&mult, &c)| (mult as i64 - 1) * c as i64)
            .sum();
        let r = euler_chi_u(&p, &known_answer(&f).unwrap()).unwrap();
        assert_eq!(r.chi_u, 3 - (2 * d - drop), "{f}");
    }
    let g23 = builtin_profile("G23").unwrap();
    let r = euler_chi_u(&g23, &known_answer(&Family::Exceptional { j: 23 }).unwrap()).unwrap();
    assert_eq!(r.chi_u, 3 - (2 * 15 - (15 + 2 * 10 + 4 * 6)));
}

/// An ordinary m-fold point has Alexander polynomial `(t-1)(t^m-1)^(m-2)`.
#[test]
fn local_alexander_closed_form() {
    for m in 2..=9u64 {
        let got = local_alexander(&SingularityKind::OrdinaryMultiple(m)).unwrap();
        let expected =
            &UniPoly::t_pow_minus_one(1) * &UniPoly::t_pow_minus_one(m as usize).pow(m as u32 - 2);
        assert_eq!(got.alexander.expand(), expected, "m = {m}");
    }
}

/// Pair counting on A(m,m,n): every pair of lines meets exactly once.
#[test]
fn pair_count_identity() {
    for m in 2..=5u64 {
        for n in 3..=5u64 {
            let p = Family::Monomial { m, n }.profile().unwrap();
            let pairs: u64 = p
                .multiplicity_counts()
                .iter()
                .map(|(&mult, &c)| c * binomial(mult, 2))
                .sum();
            assert_eq!(pairs, binomial(binomial(n, 2) * m, 2));
        }
    }
}
