//! Context-free grammars in the substitution-rule sense: each letter maps to
//! the formal function it is replaced by. Letters without a rule are
//! constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::parse;
use crate::poly::{Polynomial, Variable};

#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Grammar {
    productions: BTreeMap<Variable, Polynomial>,
}

impl Grammar {
    pub fn new() -> Self {
        Grammar::default()
    }

    /// Fails on a second production for the same letter.
    pub fn from_productions<I>(productions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Variable, Polynomial)>,
    {
        let mut g = Grammar::new();
        for (v, body) in productions {
            g.insert(v, body)?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, v: Variable, body: Polynomial) -> Result<()> {
        if self.productions.contains_key(&v) {
            return Err(Error::DuplicateProduction(v));
        }
        self.productions.insert(v, body);
        Ok(())
    }

    pub fn production(&self, v: Variable) -> Option<&Polynomial> {
        self.productions.get(&v)
    }

    pub fn productions(&self) -> impl Iterator<Item = (Variable, &Polynomial)> {
        self.productions.iter().map(|(&v, p)| (v, p))
    }

    pub fn len(&self) -> usize {
        self.productions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }

    /// The members of `vars` that have no production here.
    pub fn constants_of<'a, I>(&self, vars: I) -> BTreeSet<Variable>
    where
        I: IntoIterator<Item = &'a Variable>,
    {
        vars.into_iter()
            .filter(|v| !self.productions.contains_key(v))
            .copied()
            .collect()
    }
}

/// `a -> a + b; b -> b`; the empty grammar prints as nothing.
impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, body)) in self.productions.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v} -> {body}")?;
        }
        Ok(())
    }
}

/// An ordered, nonempty family of grammars `g_1, ..., g_n`. Indices are
/// 1-based throughout the public API.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixGrammar {
    subgrammars: Vec<Grammar>,
}

impl MatrixGrammar {
    pub fn new(subgrammars: Vec<Grammar>) -> Result<Self> {
        if subgrammars.is_empty() {
            return Err(Error::EmptyMatrixGrammar);
        }
        Ok(MatrixGrammar { subgrammars })
    }

    pub fn single(g: Grammar) -> Self {
        MatrixGrammar { subgrammars: vec![g] }
    }

    pub fn len(&self) -> usize {
        self.subgrammars.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> Result<&Grammar> {
        index
            .checked_sub(1)
            .and_then(|i| self.subgrammars.get(i))
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.subgrammars.len(),
            })
    }

    pub fn subgrammars(&self) -> &[Grammar] {
        &self.subgrammars
    }

    /// The sole grammar of a length-1 family.
    pub fn as_single(&self) -> Option<&Grammar> {
        match self.subgrammars.as_slice() {
            [g] => Some(g),
            _ => None,
        }
    }
}

impl From<Grammar> for MatrixGrammar {
    fn from(g: Grammar) -> Self {
        MatrixGrammar::single(g)
    }
}

impl fmt::Display for MatrixGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.as_single() {
            if !g.is_empty() {
                return write!(f, "{g}");
            }
        }
        for (i, g) in self.subgrammars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{g}]")?;
        }
        Ok(())
    }
}

impl FromStr for MatrixGrammar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_grammar(s)
    }
}
