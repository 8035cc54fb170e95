//! Seeded generators for random polynomials and grammars.
//!
//! All generators take the RNG by reference so a single seed reproduces a
//! whole sequence of draws. `ChaCha8Rng` is used throughout because its
//! output stream is stable across platforms and crate versions.

use std::ops::RangeInclusive;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grammar::{Grammar, MatrixGrammar};
use crate::poly::{Monomial, Polynomial, Variable};
use crate::rational::Rational;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random polynomial.
#[derive(Clone, Debug)]
pub struct PolyShape {
    pub vars: Vec<Variable>,
    pub terms: RangeInclusive<usize>,
    pub exponents: RangeInclusive<i64>,
    /// Nonzero integers are drawn from this range.
    pub coeffs: RangeInclusive<i64>,
}

impl PolyShape {
    pub fn new(vars: &str, terms: RangeInclusive<usize>, exponents: RangeInclusive<i64>, coeffs: RangeInclusive<i64>) -> Self {
        PolyShape {
            vars: letters(vars),
            terms,
            exponents,
            coeffs,
        }
    }
}

pub fn letters(s: &str) -> Vec<Variable> {
    s.chars()
        .map(|c| Variable::new(c).expect("generator alphabet is lowercase"))
        .collect()
}

pub fn nonzero_in<R: Rng>(rng: &mut R, range: RangeInclusive<i64>) -> i64 {
    assert!(*range.start() != 0 || *range.end() != 0);
    loop {
        let c = rng.random_range(range.clone());
        if c != 0 {
            return c;
        }
    }
}

pub fn random_monomial<R: Rng>(rng: &mut R, vars: &[Variable], exponents: RangeInclusive<i64>) -> Monomial {
    Monomial::from_powers(vars.iter().map(|&v| (v, rng.random_range(exponents.clone()))))
        .expect("small exponents cannot overflow")
}

/// May come out with fewer terms than drawn (or zero) when monomials collide.
pub fn random_poly<R: Rng>(rng: &mut R, shape: &PolyShape) -> Polynomial {
    let n = rng.random_range(shape.terms.clone());
    Polynomial::from_terms((0..n).map(|_| {
        let m = random_monomial(rng, &shape.vars, shape.exponents.clone());
        (m, Rational::from(nonzero_in(rng, shape.coeffs.clone())))
    }))
}

/// Like [`random_poly`] but retries until the result is nonzero.
pub fn random_nonzero_poly<R: Rng>(rng: &mut R, shape: &PolyShape) -> Polynomial {
    loop {
        let p = random_poly(rng, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A single nonzero term.
pub fn random_term<R: Rng>(rng: &mut R, shape: &PolyShape) -> Polynomial {
    let m = random_monomial(rng, &shape.vars, shape.exponents.clone());
    Polynomial::term(Rational::from(nonzero_in(rng, shape.coeffs.clone())), m)
}

/// `p/q` with `p` from `numers` and `q` in `1..=max_denom`.
pub fn random_rational<R: Rng>(rng: &mut R, numers: RangeInclusive<i64>, max_denom: i64) -> Rational {
    let p = rng.random_range(numers);
    let q = rng.random_range(1..=max_denom);
    Rational::new(p, q).expect("positive denominator")
}

/// Each letter of `lhs` receives a production with probability `p_rule`;
/// bodies follow `body`.
pub fn random_grammar<R: Rng>(rng: &mut R, lhs: &[Variable], p_rule: f64, body: &PolyShape) -> Grammar {
    let mut g = Grammar::new();
    for &v in lhs {
        if rng.random_bool(p_rule) {
            g.insert(v, random_poly(rng, body)).expect("letters are distinct");
        }
    }
    g
}

pub fn random_matrix_grammar<R: Rng>(
    rng: &mut R,
    arity: RangeInclusive<usize>,
    lhs: &[Variable],
    p_rule: f64,
    body: &PolyShape,
) -> MatrixGrammar {
    let n = rng.random_range(arity);
    MatrixGrammar::new((0..n.max(1)).map(|_| random_grammar(rng, lhs, p_rule, body)).collect())
        .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let shape = PolyShape::new("abc", 1..=4, -3..=3, -9..=9);
        let mut r1 = rng_from_seed(42);
        let mut r2 = rng_from_seed(42);
        for _ in 0..20 {
            assert_eq!(random_poly(&mut r1, &shape), random_poly(&mut r2, &shape));
        }
    }

    #[test]
    fn terms_are_single_and_nonzero() {
        let shape = PolyShape::new("ab", 1..=1, -2..=2, -3..=3);
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            assert!(random_term(&mut rng, &shape).single_term().is_some());
            assert!(!random_nonzero_poly(&mut rng, &shape).is_zero());
        }
    }
}
