//! Values stated in the literature, transcribed as literals.

use monogauge::arrangement::{builtin_profile, Family};
use monogauge::assembly::{analyze_and_assemble, known_answer};
use monogauge::engine::analyze_character;

#[test]
fn g23_singularities() {
    let p = builtin_profile("G23").unwrap();
    assert_eq!(p.curve_degree, 15);
    let c = p.multiplicity_counts();
    assert_eq!((c[&2], c[&3], c[&5]), (15, 10, 6));
}

#[test]
fn g31_singularities_and_bound() {
    let p = builtin_profile("G31").unwrap();
    assert_eq!(p.curve_degree, 60);
    let c = p.multiplicity_counts();
    assert_eq!((c[&2], c[&3], c[&6]), (360, 320, 30));
    let v = analyze_character(&p, 10, false).unwrap();
    let six = p
        .canonical()
        .entries
        .iter()
        .position(|e| e.kind.line_multiplicity() == Some(6))
        .unwrap();
    assert_eq!(v.a_values[six], 4);
    assert_eq!(v.n, 60 - 3 - 10);
    assert_eq!(v.sum_a as i64 - 1, 30 * 4 - 1);
}

#[test]
fn g25_hessian() {
    let a = known_answer(&Family::Exceptional { j: 25 }).unwrap();
    assert_eq!(a.to_text(), "(t-1)^9 (t^4-1)^2");
}

#[test]
fn monomial_n3_statement() {
    for (m, text) in [
        (4u64, "(t-1)^11 (t^2+t+1)^1"),
        (6, "(t-1)^17 (t^2+t+1)^2"),
        (9, "(t-1)^26 (t^2+t+1)^2"),
    ] {
        let (_, asm) =
            analyze_and_assemble(&Family::Monomial { m, n: 3 }.profile().unwrap(), false).unwrap();
        assert_eq!(asm.to_text(), text);
    }
}

#[test]
fn monomial_counts() {
    // n_m = C(n,2), n_3 = C(n,3) m^2, n_2 = C(n,2) C(n-2,2) m^2 / 2
    let p = Family::Monomial { m: 5, n: 5 }.profile().unwrap();
    let c = p.multiplicity_counts();
    assert_eq!((c[&5], c[&3], c[&2]), (10, 250, 375));
}
