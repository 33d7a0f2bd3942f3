use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{cyclotomic_poly, rat, Rational, UniPoly};
use crate::error::{Error, Result};

/// The cyclotomic field Q(zeta_m), presented as Q[t] / Phi_m(t).
#[derive(Debug)]
pub struct CycloField {
    order: u64,
    modulus: UniPoly,
    degree: usize,
    // t^j mod Phi_m for j in degree..2*degree-1, as coefficient vectors.
    high_powers: Vec<Vec<Rational>>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

impl CycloField {
    pub fn new(order: u64) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::OutOfRange(
                "cyclotomic field order must be >= 1".into(),
            ));
        }
        let modulus = cyclotomic_poly(order);
        let degree = modulus
            .degree()
            .expect("cyclotomic polynomial is nonconstant");
        let mut high_powers = Vec::new();
        for j in degree..(2 * degree).saturating_sub(1) {
            let (_, r) = UniPoly::monomial(Rational::one(), j)
                .div_rem(&modulus)
                .expect("nonzero modulus");
            let mut v = r.coeffs().to_vec();
            v.resize(degree, Rational::zero());
            high_powers.push(v);
        }
        Ok(Arc::new(CycloField {
            order,
            modulus,
            degree,
            high_powers,
        }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of the field over Q, i.e. phi(m).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        CycloElement {
            field: Arc::clone(self),
            coeffs: vec![Rational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, c: Rational) -> CycloElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloElement {
        self.from_rational(rat(n))
    }

    /// zeta^a for any integer exponent.
    pub fn zeta_pow(self: &Arc<Self>, a: i64) -> CycloElement {
        let e = a.rem_euclid(self.order as i64) as usize;
        self.reduce_poly(&UniPoly::monomial(Rational::one(), e))
    }

    /// Reduces an arbitrary polynomial in zeta to canonical form.
    pub fn reduce_poly(self: &Arc<Self>, p: &UniPoly) -> CycloElement {
        let (_, r) = p.div_rem(&self.modulus).expect("nonzero modulus");
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree, Rational::zero());
        CycloElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// Element from its canonical power-basis coefficients.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<Rational>) -> Result<CycloElement> {
        if coeffs.len() != self.degree {
            return Err(Error::InvariantViolation(format!(
                "expected {} coefficients for Q(zeta_{}), got {}",
                self.degree,
                self.order,
                coeffs.len()
            )));
        }
        Ok(CycloElement {
            field: Arc::clone(self),
            coeffs,
        })
    }

    /// Parses an expression such as `1 - z^2` or `-1/2*z+3`, with `z = zeta_m`.
    /// Errors carry a 1-based column; the line is reported as 1.
    pub fn parse(self: &Arc<Self>, text: &str) -> Result<CycloElement> {
        let terms = parse_terms(text).map_err(|(col, msg)| Error::parse(1, col, msg))?;
        let mut acc = vec![Rational::zero(); self.order as usize];
        for (c, e) in terms {
            acc[(e % self.order) as usize] += c;
        }
        Ok(self.reduce_poly(&UniPoly::new(acc)))
    }
}

/// An element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi(m)-1).
#[derive(Clone)]
pub struct CycloElement {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl CycloElement {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &CycloElement) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::OrderMismatch(self.field.order, other.field.order));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> CycloElement {
        CycloElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> CycloElement {
        CycloElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplicative inverse via the extended gcd with Phi_m.
    pub fn invert(&self) -> Result<CycloElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(r.recip()));
        }
        let (g, s, _) = UniPoly::ext_gcd(&self.to_poly(), &self.field.modulus);
        debug_assert_eq!(g, UniPoly::one(), "Phi_m is irreducible");
        Ok(self.field.reduce_poly(&s))
    }

    pub fn checked_div(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.invert()?))
    }

    pub fn pow(&self, mut e: u64) -> CycloElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn zip_with(&self, other: &CycloElement, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        CycloElement {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &CycloElement) -> CycloElement {
        let deg = self.field.degree;
        if deg == 1 {
            return CycloElement {
                field: Arc::clone(&self.field),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut prod = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let (low, high) = prod.split_at_mut(deg);
        for (c, row) in high.iter().zip(&self.field.high_powers) {
            if c.is_zero() {
                continue;
            }
            for (l, r) in low.iter_mut().zip(row) {
                if !r.is_zero() {
                    *l += c * r;
                }
            }
        }
        prod.truncate(deg);
        CycloElement {
            field: Arc::clone(&self.field),
            coeffs: prod,
        }
    }

    /// Canonical text in z-syntax without whitespace, e.g. `1-z^2`.
    pub fn to_z_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if i == 0 {
                out.push_str(&abs.to_string());
                continue;
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push('z');
            if i > 1 {
                out.push('^');
                out.push_str(&i.to_string());
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElement {}

impl Hash for CycloElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for CycloElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .order
            .cmp(&other.field.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.to_z_string(), self.field.order)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_z_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &CycloElement {
            type Output = CycloElement;
            /// Panics on mixed field orders; use the `checked_*` form to get an error instead.
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                self.$checked(rhs)
                    .expect("cyclotomic field orders must agree")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

// Grammar: term (('+'|'-') term)*, term = [coeff ['*']] ['z' ['^' int]],
// coeff = int ['/' int]. Whitespace is ignored.
fn parse_terms(text: &str) -> std::result::Result<Vec<(Rational, u64)>, (usize, String)> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (text[..i].chars().count() + 1, c))
        .collect();
    if chars.is_empty() {
        return Err((1, "empty field element".into()));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    let end_col = text.chars().count() + 1;
    let col_at = |p: usize| chars.get(p).map(|c| c.0).unwrap_or(end_col);

    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
            *pos += 1;
        }
        (start != *pos).then(|| {
            chars[start..*pos]
                .iter()
                .map(|c| c.1)
                .collect::<String>()
                .parse()
                .expect("digits")
        })
    };

    loop {
        let mut sign = BigInt::one();
        if pos < chars.len() && (chars[pos].1 == '+' || chars[pos].1 == '-') {
            if chars[pos].1 == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if !terms.is_empty() {
            return Err((col_at(pos), "expected '+' or '-'".into()));
        }
        let term_col = col_at(pos);
        let mut coeff: Option<Rational> = None;
        if let Some(num) = read_int(&mut pos) {
            let mut c = Rational::from_integer(num);
            if pos < chars.len() && chars[pos].1 == '/' {
                pos += 1;
                let den =
                    read_int(&mut pos).ok_or((col_at(pos), "expected denominator".to_string()))?;
                if den.is_zero() {
                    return Err((col_at(pos), "zero denominator".into()));
                }
                c /= Rational::from_integer(den);
            }
            coeff = Some(c);
            if pos < chars.len() && chars[pos].1 == '*' {
                pos += 1;
                if pos >= chars.len() || chars[pos].1 != 'z' {
                    return Err((col_at(pos), "expected 'z' after '*'".into()));
                }
            }
        }
        let mut exp = 0u64;
        if pos < chars.len() && chars[pos].1 == 'z' {
            pos += 1;
            exp = 1;
            if pos < chars.len() && chars[pos].1 == '^' {
                pos += 1;
                let e = read_int(&mut pos).ok_or((col_at(pos), "expected exponent".to_string()))?;
                exp = e
                    .try_into()
                    .map_err(|_| (col_at(pos), "exponent too large".to_string()))?;
            }
        } else if coeff.is_none() {
            return Err((term_col, "expected a coefficient or 'z'".into()));
        }
        let c = coeff.unwrap_or_else(Rational::one) * Rational::from_integer(sign);
        terms.push((c, exp));
        if pos >= chars.len() {
            break;
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let f = CycloField::new(4).unwrap();
        let z = f.zeta_pow(1);
        let sq = &z * &z;
        assert_eq!(sq.coeffs(), &[rat(-1), rat(0)]);
    }

    #[test]
    fn order3_inverse_of_one_plus_zeta() {
        let f = CycloField::new(3).unwrap();
        let a = f.parse("1 + z").unwrap();
        assert_eq!(&a * &f.one(), a);
        let inv = a.invert().unwrap();
        assert_eq!(inv, f.parse("-z").unwrap());
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn order5_inverse_of_one_minus_zeta() {
        let f = CycloField::new(5).unwrap();
        let a = f.parse("1-z").unwrap();
        let e = a.invert().unwrap();
        // Oracle: (1 - z) * e = 1 checked by multiplication.
        assert!((&a * &e).is_one());
        // 1/(1-z) = -(1/5)(z^3 + 2z^2 + 3z + 4) in the power basis mod Phi_5,
        // i.e. (4 + 3z + 2z^2 + z^3)/5.
        assert_eq!(
            e.coeffs(),
            &[ratio(4, 5), ratio(3, 5), ratio(2, 5), ratio(1, 5)]
        );
    }

    #[test]
    fn errors() {
        let f3 = CycloField::new(3).unwrap();
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f3.zero().invert().unwrap_err(), Error::DivisionByZero);
        assert_eq!(
            f3.one().checked_add(&f4.one()).unwrap_err(),
            Error::OrderMismatch(3, 4)
        );
        assert!(matches!(f3.parse("1 + "), Err(Error::Parse { .. })));
        assert!(matches!(f3.parse("x"), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(
            f3.parse("2z3"),
            Err(Error::Parse { column: 3, .. })
        ));
    }

    #[test]
    fn parse_and_format() {
        let f = CycloField::new(5).unwrap();
        let golden = f.parse("1 + z + z^4").unwrap();
        // z^4 = -1 - z - z^2 - z^3
        assert_eq!(golden.to_z_string(), "-z^2-z^3");
        assert_eq!(f.parse("-1/2*z + 3").unwrap().to_z_string(), "3-1/2*z");
        assert_eq!(f.parse("2z^2").unwrap().to_z_string(), "2*z^2");
        assert_eq!(f.parse("z^5").unwrap(), f.one());
        assert_eq!(f.zero().to_z_string(), "0");
        // golden ratio squared = golden + 1
        assert_eq!(&golden * &golden, &golden + &f.one());
    }
}
