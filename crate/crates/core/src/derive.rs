//! The formal derivative operator of a grammar and its iterates.
//!
//! `D` acts on a Laurent monomial `c x1^e1 ... xk^ek` as
//! `c * sum_j e_j x_j^(e_j - 1) D(x_j) prod_{i != j} x_i^e_i`, with `D(x)`
//! the production body of `x` or zero for a constant. Extending by linearity
//! gives the sum, product and integer power rules at once.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, MatrixGrammar};
use crate::poly::Polynomial;
use crate::rational::Rational;

pub fn derive(g: &Grammar, u: &Polynomial) -> Result<Polynomial> {
    let mut contributions = Vec::new();
    for (m, c) in u.terms() {
        for (x, e) in m.powers() {
            let Some(body) = g.production(x) else {
                continue;
            };
            let rest = m.shift(x, -1)?;
            let coeff = c * &Rational::from(e);
            for (bm, bc) in body.terms() {
                contributions.push((bm.mul(&rest)?, bc * &coeff));
            }
        }
    }
    Ok(Polynomial::from_terms(contributions))
}

/// `D^n(u)`; `D^0(u) = u`.
pub fn derive_n(g: &Grammar, u: &Polynomial, n: usize) -> Result<Polynomial> {
    let mut cur = u.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = derive(g, &cur)?;
    }
    Ok(cur)
}

/// `D_i(u)` for the `i`-th (1-based) sub-grammar.
pub fn derive_indexed(mg: &MatrixGrammar, i: usize, u: &Polynomial) -> Result<Polynomial> {
    derive(mg.get(i)?, u)
}

/// A composite operator `D_{i1 i2 ... ik} = D_i1 ∘ D_i2 ∘ ... ∘ D_ik`.
/// The rightmost index is applied first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OperatorWord {
    indices: Vec<usize>,
}

impl OperatorWord {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyWord);
        }
        if indices.contains(&0) {
            return Err(Error::Domain("sub-grammar indices start at 1".into()));
        }
        Ok(OperatorWord { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self` followed by `other`, i.e. the composition `self ∘ other`.
    pub fn concat(&self, other: &OperatorWord) -> OperatorWord {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        OperatorWord { indices }
    }

    /// Checks every index against the arity of `mg`.
    pub fn check(&self, mg: &MatrixGrammar) -> Result<()> {
        for &i in &self.indices {
            mg.get(i)?;
        }
        Ok(())
    }
}

/// Digit strings (`12` is `D_12`) or comma-separated indices (`1,12`).
impl FromStr for OperatorWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Syntax {
            pos: 0,
            msg: format!("invalid operator word {s:?}: {msg}"),
        };
        let indices = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad("expected an index")))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| bad("expected digits"))
                })
                .collect::<Result<Vec<_>>>()?
        };
        OperatorWord::new(indices)
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.indices.iter().any(|&i| i > 9) { "," } else { "" };
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

pub fn derive_word(mg: &MatrixGrammar, w: &OperatorWord, u: &Polynomial) -> Result<Polynomial> {
    w.check(mg)?;
    let mut cur = u.clone();
    for &i in w.indices.iter().rev() {
        cur = derive(mg.get(i)?, &cur)?;
    }
    Ok(cur)
}

/// `D_w^n(u)`; `D_w^0(u) = u`.
pub fn derive_word_pow(
    mg: &MatrixGrammar,
    w: &OperatorWord,
    n: usize,
    u: &Polynomial,
) -> Result<Polynomial> {
    w.check(mg)?;
    let mut cur = u.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = derive_word(mg, w, &cur)?;
    }
    Ok(cur)
}
