//! Formal derivative operators of context-free and matrix grammars.
//!
//! A grammar maps letters to formal functions (here: Laurent polynomials with
//! rational coefficients); its derivative operator `D` replaces each letter
//! by its production and extends by linearity and the product rule. Letters
//! without a production are constants.
//!
//! ```
//! use formalgram::{derive, parse_expr, parse_grammar};
//!
//! let mg = parse_grammar("a -> a + b; b -> b").unwrap();
//! let g = mg.as_single().unwrap();
//! let d = derive(g, &parse_expr("ab").unwrap()).unwrap();
//! assert_eq!(d.to_string(), "2 a b + b^2");
//! ```

pub mod derive;
pub mod error;
pub mod grammar;
pub mod numbers;
pub mod parse;
pub mod poly;
pub mod random;
pub mod rational;
pub mod verify;

pub use derive::{derive, derive_indexed, derive_n, derive_word, derive_word_pow, OperatorWord};
pub use error::{Error, Result};
pub use grammar::{Grammar, MatrixGrammar};
pub use numbers::{binomial, multifactorial, rising_product};
pub use parse::{parse_expr, parse_grammar};
pub use poly::{Monomial, Polynomial, Variable};
pub use rational::Rational;
pub use verify::{Case, Report};
