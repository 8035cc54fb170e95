//! Sparse Laurent polynomials with rational coefficients in single-letter
//! commutative indeterminates.
//!
//! Every value is kept canonical: no zero coefficient and no zero exponent is
//! ever stored, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A single lowercase ASCII letter. Ordered alphabetically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u8);

impl Variable {
    pub fn new(name: char) -> Result<Self> {
        if name.is_ascii_lowercase() {
            Ok(Variable(name as u8))
        } else {
            Err(Error::InvalidVariable(name))
        }
    }

    pub fn name(self) -> char {
        self.0 as char
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A Laurent monomial `x1^e1 ... xk^ek` with nonzero signed exponents.
///
/// The `Ord` impl is the canonical term order used everywhere terms are
/// listed: higher total degree first, then, scanning variables
/// alphabetically, the larger exponent first. So `a^2 c` precedes `a b^2`,
/// and `a b` precedes `b^2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exponents: BTreeMap<Variable, i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Variable, e: i64) -> Self {
        let mut exponents = BTreeMap::new();
        if e != 0 {
            exponents.insert(v, e);
        }
        Monomial { exponents }
    }

    /// Multiplies the given powers together; repeated variables are merged.
    pub fn from_powers<I: IntoIterator<Item = (Variable, i64)>>(powers: I) -> Result<Self> {
        let mut m = Monomial::one();
        for (v, e) in powers {
            m = m.mul(&Monomial::var_pow(v, e))?;
        }
        Ok(m)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, v: Variable) -> i64 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (Variable, i64)> + '_ {
        self.exponents.iter().map(|(&v, &e)| (v, e))
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.exponents.keys().copied()
    }

    pub fn total_degree(&self) -> i128 {
        self.exponents.values().map(|&e| e as i128).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut exponents = self.exponents.clone();
        for (&v, &e) in &other.exponents {
            let slot = exponents.entry(v).or_insert(0);
            *slot = slot.checked_add(e).ok_or(Error::ExponentOverflow)?;
            if *slot == 0 {
                exponents.remove(&v);
            }
        }
        Ok(Monomial { exponents })
    }

    pub fn pow(&self, k: i64) -> Result<Monomial> {
        if k == 0 {
            return Ok(Monomial::one());
        }
        let exponents = self
            .exponents
            .iter()
            .map(|(&v, &e)| e.checked_mul(k).map(|e| (v, e)).ok_or(Error::ExponentOverflow))
            .collect::<Result<_>>()?;
        Ok(Monomial { exponents })
    }

    /// Shifts the exponent of `v` by `delta`, dropping it if it reaches zero.
    pub fn shift(&self, v: Variable, delta: i64) -> Result<Monomial> {
        self.mul(&Monomial::var_pow(v, delta))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| {
                let vars: BTreeSet<Variable> =
                    self.variables().chain(other.variables()).collect();
                for v in vars {
                    match other.exponent(v).cmp(&self.exponent(v)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a b^2 c^-1`; the unit monomial prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.powers().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.exponents.len()))?;
        for (v, e) in self.powers() {
            map.serialize_entry(&v.name().to_string(), &e)?;
        }
        map.end()
    }
}

/// A formal function: a finite sum of rational multiples of Laurent monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn var(v: Variable) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Sums the given terms, merging equal monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The lone term, if there is exactly one.
    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }

    /// Coefficient of `m`, or zero when absent.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Multiplies every term by `c * m`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero());
        }
        let mut terms = BTreeMap::new();
        for (tm, tc) in &self.terms {
            terms.insert(tm.mul(m)?, tc * c);
        }
        Ok(Polynomial { terms })
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n)?, c * d);
            }
        }
        Ok(out)
    }

    /// `self^k`. Negative `k` is only defined for a single nonzero term.
    pub fn pow(&self, k: i64) -> Result<Polynomial> {
        if k < 0 {
            return match self.terms.len() {
                0 => Err(Error::DivisionByZero),
                1 => {
                    let (m, c) = self.terms.iter().next().unwrap();
                    Ok(Polynomial::term(c.pow(k)?, m.pow(k)?))
                }
                _ => Err(Error::NegativePowerOfNonMonomial),
            };
        }
        if let Some((m, c)) = self.single_term() {
            return Ok(Polynomial::term(c.pow(k)?, m.pow(k)?));
        }
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Canonical rendering; see the `Display` impl.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serialization is infallible")
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<BigInt> for Polynomial {
    fn from(n: BigInt) -> Self {
        Polynomial::constant(Rational::from_integer(n))
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Self {
        Polynomial::var(v)
    }
}

/// Terms in canonical order joined by ` + ` / ` - `. A coefficient of 1 is
/// omitted except on the unit monomial; the zero polynomial prints as `0`.
/// The output parses back to the same value.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// `[{"coeff": "p/q", "monomial": {"a": 1, ...}}, ...]` in canonical order.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: String,
            monomial: &'a Monomial,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&Term {
                coeff: c.to_fraction_string(),
                monomial: m,
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: char) -> Variable {
        Variable::new(c).unwrap()
    }

    fn mono(powers: &[(char, i64)]) -> Monomial {
        Monomial::from_powers(powers.iter().map(|&(c, e)| (v(c), e))).unwrap()
    }

    fn poly(terms: &[(i64, &[(char, i64)])]) -> Polynomial {
        Polynomial::from_terms(terms.iter().map(|&(c, m)| (mono(m), Rational::from(c))))
    }

    #[test]
    fn variable_validation() {
        assert!(Variable::new('a').is_ok());
        assert!(Variable::new('z').is_ok());
        assert_eq!(Variable::new('A'), Err(Error::InvalidVariable('A')));
        assert_eq!(Variable::new('1'), Err(Error::InvalidVariable('1')));
    }

    #[test]
    fn zero_exponents_are_normalized_away() {
        let m = mono(&[('a', 2), ('b', 1), ('a', -2)]);
        assert_eq!(m, mono(&[('b', 1)]));
        assert_eq!(Monomial::var_pow(v('a'), 0), Monomial::one());
    }

    #[test]
    fn addition_cancels_and_merges() {
        let s = poly(&[(1, &[('a', 1)]), (1, &[('b', 1)])]);
        let d = poly(&[(1, &[('a', 1)]), (-1, &[('b', 1)])]);
        assert_eq!(s.add(&d), poly(&[(2, &[('a', 1)])]));
        assert_eq!(s.add(&Polynomial::zero()), s);

        let u = poly(&[(1, &[('a', 1), ('b', 1)]), (1, &[('b', 2)])]);
        let w = poly(&[(1, &[('a', 1), ('b', 1)])]);
        assert_eq!(u.add(&w).to_string(), "2 a b + b^2");
    }

    #[test]
    fn multiplication() {
        let a_plus_b = poly(&[(1, &[('a', 1)]), (1, &[('b', 1)])]);
        let b = poly(&[(1, &[('b', 1)])]);
        assert_eq!(a_plus_b.mul(&b).unwrap().to_string(), "a b + b^2");

        let a = poly(&[(1, &[('a', 1)])]);
        let a_inv = poly(&[(1, &[('a', -1)])]);
        assert_eq!(a.mul(&a_inv).unwrap(), Polynomial::one());

        let a_minus_b = poly(&[(1, &[('a', 1)]), (-1, &[('b', 1)])]);
        assert_eq!(a_minus_b.mul(&a_plus_b).unwrap().to_string(), "a^2 - b^2");
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let big = Polynomial::term(Rational::one(), Monomial::var_pow(v('a'), i64::MAX));
        let a = Polynomial::var(v('a'));
        assert_eq!(big.mul(&a), Err(Error::ExponentOverflow));
        assert_eq!(big.pow(2), Err(Error::ExponentOverflow));
        let low = Polynomial::term(Rational::one(), Monomial::var_pow(v('a'), i64::MIN));
        assert_eq!(low.pow(-1), Err(Error::ExponentOverflow));
    }

    #[test]
    fn powers() {
        let a_plus_b = poly(&[(1, &[('a', 1)]), (1, &[('b', 1)])]);
        assert_eq!(a_plus_b.pow(2).unwrap().to_string(), "a^2 + 2 a b + b^2");
        assert_eq!(a_plus_b.pow(0).unwrap(), Polynomial::one());
        assert_eq!(a_plus_b.pow(-1), Err(Error::NegativePowerOfNonMonomial));
        assert_eq!(Polynomial::zero().pow(-1), Err(Error::DivisionByZero));
        assert_eq!(Polynomial::zero().pow(0).unwrap(), Polynomial::one());
        assert_eq!(Polynomial::zero().pow(3).unwrap(), Polynomial::zero());

        let a = Polynomial::var(v('a'));
        assert_eq!(a.pow(-1).unwrap().to_string(), "a^-1");
        let t = Polynomial::term(Rational::new(2, 3).unwrap(), mono(&[('a', 2), ('b', -1)]));
        assert_eq!(t.pow(-2).unwrap().to_string(), "9/4 a^-4 b^2");
    }

    #[test]
    fn coefficient_lookup() {
        let u = poly(&[(1, &[('b', 2)]), (2, &[('a', 1), ('b', 1)])]);
        assert_eq!(u.coeff(&mono(&[('a', 1), ('b', 1)])), Rational::from(2));
        assert_eq!(u.coeff(&mono(&[('a', 3)])), Rational::zero());
    }

    #[test]
    fn canonical_text_is_insertion_order_independent() {
        assert_eq!(Polynomial::zero().to_string(), "0");
        let x = poly(&[(1, &[('a', 1), ('b', 2)]), (1, &[('a', 2), ('c', 1)])]);
        let y = poly(&[(1, &[('a', 2), ('c', 1)]), (1, &[('a', 1), ('b', 2)])]);
        assert_eq!(x.to_string(), y.to_string());
        assert_eq!(x.to_string(), "a^2 c + a b^2");
        let z = poly(&[(1, &[('b', 2)]), (2, &[('a', 1), ('b', 1)])]);
        assert_eq!(z.to_string(), "2 a b + b^2");
    }

    #[test]
    fn rendering_of_signs_and_units() {
        let u = poly(&[(-1, &[('a', 1)]), (3, &[]), (-1, &[])]);
        assert_eq!(u.to_string(), "-a + 2");
        assert_eq!(poly(&[(-1, &[])]).to_string(), "-1");
        let h = Polynomial::term(Rational::new(-3, 2).unwrap(), mono(&[('a', 1)]));
        assert_eq!(h.to_string(), "-3/2 a");
        assert_eq!(poly(&[(3, &[('a', 1)]), (-2, &[('b', 1)])]).to_string(), "3 a - 2 b");
    }

    #[test]
    fn order_puts_negative_degrees_last() {
        let u = poly(&[(1, &[('a', -1)]), (1, &[]), (1, &[('b', 1)])]);
        assert_eq!(u.to_string(), "b + 1 + a^-1");
    }

    #[test]
    fn json_rendering() {
        let u = poly(&[(1, &[('b', 2)]), (2, &[('a', 1), ('b', 1)])]);
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            r#"[{"coeff":"2/1","monomial":{"a":1,"b":1}},{"coeff":"1/1","monomial":{"b":2}}]"#
        );
        assert_eq!(serde_json::to_string(&Polynomial::zero()).unwrap(), "[]");
        assert_eq!(
            serde_json::to_string(&Polynomial::one()).unwrap(),
            r#"[{"coeff":"1/1","monomial":{}}]"#
        );
    }
}
