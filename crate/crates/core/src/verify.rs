//! Verification suites: each one evaluates the derivative engine on concrete
//! parameters and compares the result with a closed form, case by case.
//!
//! Comparisons are structural equality of canonical values. Every case
//! stores both sides as canonical text so a failure can be diffed directly.
//! Suites that draw random inputs derive one sub-seed per case up front, so
//! cases can be evaluated in parallel while the report stays deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::derive::{derive, derive_n, derive_word, derive_word_pow, OperatorWord};
use crate::error::Result;
use crate::grammar::{Grammar, MatrixGrammar};
use crate::numbers::{binomial, multifactorial, rising_product};
use crate::parse::{parse_expr, parse_grammar};
use crate::poly::{Monomial, Polynomial, Variable};
use crate::random::{self, PolyShape};
use crate::rational::Rational;

/// Default boxes for the closed-form suites: `(m_max, n_max, r_max)`.
pub const DEFAULT_M_MAX: i64 = 6;
pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_R_MAX: i64 = 5;

/// Exponents `0..=LEMMA_SAMPLE_MAX` are sampled for the two-letter
/// monomials of the matrix-grammar lemma.
pub const LEMMA_SAMPLE_MAX: i64 = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub params: Value,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Case {
    pub fn polys(params: Value, lhs: Result<Polynomial>, rhs: Result<Polynomial>) -> Case {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => Case {
                params,
                pass: l == r,
                lhs: l.to_string(),
                rhs: r.to_string(),
            },
            (l, r) => Case {
                params,
                lhs: l.map_or_else(|e| format!("error: {e}"), |p| p.to_string()),
                rhs: r.map_or_else(|e| format!("error: {e}"), |p| p.to_string()),
                pass: false,
            },
        }
    }

    pub fn ints(params: Value, lhs: &BigInt, rhs: &BigInt) -> Case {
        Case {
            params,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
        }
    }

    /// A boolean fact that is expected to hold.
    pub fn holds(params: Value, fact: bool) -> Case {
        Case {
            params,
            lhs: fact.to_string(),
            rhs: "true".to_owned(),
            pass: fact,
        }
    }

    /// Recorded when a suite cannot even evaluate one side.
    pub fn error(params: Value, err: impl fmt::Display) -> Case {
        Case {
            params,
            lhs: format!("error: {err}"),
            rhs: String::new(),
            pass: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<Case>,
}

impl Report {
    pub fn new(suite: impl Into<String>, cases: Vec<Case>) -> Report {
        let passed = cases.iter().filter(|c| c.pass).count();
        Report {
            suite: suite.into(),
            failed: cases.len() - passed,
            passed,
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Folds `other`'s cases into this report, keeping this suite name.
    pub fn extend(&mut self, other: Report) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.cases.extend(other.cases);
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialization is infallible")
    }
}

fn params_text(params: &Value) -> String {
    match params {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s:?}"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.cases {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let op = if c.pass { "==" } else { "!=" };
            writeln!(f, "{tag} {}: {} {op} {}", params_text(&c.params), c.lhs, c.rhs)?;
        }
        write!(f, "passed {} failed {}", self.passed, self.failed)
    }
}

fn letter(c: char) -> Variable {
    Variable::new(c).expect("lowercase letter")
}

fn power(c: char, e: i64) -> Polynomial {
    Polynomial::term(Rational::one(), Monomial::var_pow(letter(c), e))
}

fn scaled(k: BigInt, m: Monomial) -> Polynomial {
    Polynomial::term(Rational::from_integer(k), m)
}

fn single(text: &str) -> Grammar {
    parse_grammar(text)
        .ok()
        .and_then(|mg| mg.as_single().cloned())
        .expect("built-in grammar text is valid")
}

/// `{a -> a^(r+1)}`.
fn power_grammar(r: i64) -> Grammar {
    Grammar::from_productions([(letter('a'), power('a', r + 1))]).expect("one production")
}

/// `D^k(u)` for `k = 0..=n`.
fn derivative_ladder(g: &Grammar, u: &Polynomial, n: usize) -> Result<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(u.clone());
    for k in 0..n {
        let next = derive(g, &out[k])?;
        out.push(next);
    }
    Ok(out)
}

/// `sum_k C(n, k) D^k(u) D^(n-k)(v)` from precomputed ladders.
fn leibniz_rhs(du: &[Polynomial], dv: &[Polynomial], n: usize) -> Result<Polynomial> {
    let mut acc = Polynomial::zero();
    for k in 0..=n {
        let c = Rational::from_integer(binomial(n as u64, k as i64));
        acc = acc.add(&du[k].mul(&dv[n - k])?.scale(&c));
    }
    Ok(acc)
}

/// Leibniz's formula `D^n(uv) = sum_k C(n,k) D^k(u) D^(n-k)(v)` for
/// `n = 0..=n_max`.
pub fn verify_leibniz(g: &Grammar, u: &Polynomial, v: &Polynomial, n_max: usize) -> Result<Report> {
    let du = derivative_ladder(g, u, n_max)?;
    let dv = derivative_ladder(g, v, n_max)?;
    let duv = derivative_ladder(g, &u.mul(v)?, n_max)?;
    let cases = (0..=n_max)
        .map(|n| {
            Case::polys(
                json!({ "n": n }),
                Ok(duv[n].clone()),
                leibniz_rhs(&du, &dv, n),
            )
        })
        .collect();
    Ok(Report::new("leibniz", cases))
}

/// Replays the grammatical proofs of `sum_k C(n,k) = 2^n` and
/// `sum_k (-1)^k C(n,k) = 0` under `{a -> a}`.
///
/// `sum` cases compare the coefficient of `a^2` in `D^n(a^2)` against the
/// binomial sum, whose value must also be `2^n`. `alternating` cases
/// (`n >= 1`) compare the Leibniz expansion of `D^n(a a^-1)` against
/// `D^n(1) = 0`.
pub fn verify_binomial_sums(n_max: usize) -> Report {
    let g = single("a -> a");
    let a = power('a', 1);
    let a2 = power('a', 2);
    let a_inv = power('a', -1);
    let a2_mono = Monomial::var_pow(letter('a'), 2);

    let ladders = (|| -> Result<_> {
        Ok((
            derivative_ladder(&g, &a, n_max)?,
            derivative_ladder(&g, &a2, n_max)?,
            derivative_ladder(&g, &a_inv, n_max)?,
            derivative_ladder(&g, &a.mul(&a_inv)?, n_max)?,
        ))
    })();
    let (da, da2, da_inv, dunit) = match ladders {
        Ok(l) => l,
        Err(e) => return Report::new("binomial-sums", vec![Case::error(json!({}), e)]),
    };

    let mut cases = Vec::new();
    for (n, d) in da2.iter().enumerate() {
        let params = json!({ "kind": "sum", "n": n });
        let engine = d.coeff(&a2_mono);
        let sum: BigInt = (0..=n as i64).map(|k| binomial(n as u64, k)).sum();
        let pow = BigInt::one() << n;
        let rhs = if sum == pow {
            sum.to_string()
        } else {
            format!("{sum} (2^{n} = {pow})")
        };
        let lhs = engine.to_string();
        cases.push(Case {
            params,
            pass: lhs == rhs,
            lhs,
            rhs,
        });
    }
    for (n, d) in dunit.iter().enumerate().skip(1) {
        let params = json!({ "kind": "alternating", "n": n });
        cases.push(Case::polys(params, leibniz_rhs(&da, &da_inv, n), Ok(d.clone())));
    }
    Report::new("binomial-sums", cases)
}

/// `D^n(a^m) = m^n a^m` under `{a -> a}` for `|m| <= m_max`, and
/// `D^n(a^m) = rising_product(m, n, r) a^(m + n r)` under `{a -> a^(r+1)}`
/// for `1 <= m <= m_max`, `1 <= r <= r_max`.
pub fn verify_closed_forms(m_max: i64, n_max: usize, r_max: i64) -> Report {
    let mut cases = Vec::new();
    let identity = single("a -> a");
    for m in -m_max..=m_max {
        for n in 0..=n_max {
            let params = json!({ "grammar": "a -> a", "m": m, "n": n });
            let lhs = derive_n(&identity, &power('a', m), n);
            let rhs = scaled(BigInt::from(m).pow(n as u32), Monomial::var_pow(letter('a'), m));
            cases.push(Case::polys(params, lhs, Ok(rhs)));
        }
    }
    for r in 1..=r_max {
        let g = power_grammar(r);
        let grammar_text = g.to_string();
        for m in 1..=m_max {
            for n in 0..=n_max {
                let params = json!({ "grammar": grammar_text, "m": m, "n": n, "r": r });
                let lhs = derive_n(&g, &power('a', m), n);
                let rhs = rising_product(m, n as u64, r).map(|k| {
                    scaled(k, Monomial::var_pow(letter('a'), m + n as i64 * r))
                });
                cases.push(Case::polys(params, lhs, rhs));
            }
        }
    }
    Report::new("closed-forms", cases)
}

/// The multifactorial identity behind `D^n(a^(2m))` under `{a -> a^(r+1)}`,
/// in cleared-denominator form
/// `rp(2m, n, r) = sum_k C(n,k) rp(m, k, r) rp(m, n-k, r)`, plus an engine
/// cross-check of `D^n(a^(2m))` and both corollaries for `n <= n_max`.
pub fn verify_multifactorial_identity(m_max: i64, n_max: usize, r_max: i64) -> Report {
    let mut cases = Vec::new();
    for r in 1..=r_max {
        let g = power_grammar(r);
        for m in 1..=m_max {
            let rp: Vec<BigInt> = (0..=n_max as u64)
                .map(|k| rising_product(m, k, r).expect("r >= 1"))
                .collect();
            for n in 0..=n_max {
                let lhs = rising_product(2 * m, n as u64, r).expect("r >= 1");
                let rhs: BigInt = (0..=n)
                    .map(|k| binomial(n as u64, k as i64) * &rp[k] * &rp[n - k])
                    .sum();
                cases.push(Case::ints(
                    json!({ "kind": "identity", "m": m, "n": n, "r": r }),
                    &lhs,
                    &rhs,
                ));
                let engine = derive_n(&g, &power('a', 2 * m), n);
                let closed = scaled(lhs, Monomial::var_pow(letter('a'), 2 * m + n as i64 * r));
                cases.push(Case::polys(
                    json!({ "kind": "engine", "m": m, "n": n, "r": r }),
                    engine,
                    Ok(closed),
                ));
            }
        }
    }
    let mut report = Report::new("multifactorial-identity", cases);
    report.extend(verify_corollaries(n_max, r_max));
    report
}

/// `((n+1)r)!_r = r sum_k C(n,k) (kr)!_r ((n-k)r)!_r` for `r <= r_max`, and
/// `(2n)!! = sum_k C(n,k) (2(n-k)-1)!! (2k-1)!!`, each for `n <= n_max`.
pub fn verify_corollaries(n_max: usize, r_max: i64) -> Report {
    let mf = |n: i64, r: i64| multifactorial(n, r).expect("within the defined range");
    let mut cases = Vec::new();
    for r in 1..=r_max {
        for n in 0..=n_max as i64 {
            let lhs = mf((n + 1) * r, r);
            let sum: BigInt = (0..=n)
                .map(|k| binomial(n as u64, k) * mf(k * r, r) * mf((n - k) * r, r))
                .sum();
            cases.push(Case::ints(
                json!({ "kind": "corollary-multifactorial", "n": n, "r": r }),
                &lhs,
                &(sum * r),
            ));
        }
    }
    for n in 0..=n_max as i64 {
        let lhs = mf(2 * n, 2);
        let rhs: BigInt = (0..=n)
            .map(|k| binomial(n as u64, k) * mf(2 * (n - k) - 1, 2) * mf(2 * k - 1, 2))
            .sum();
        cases.push(Case::ints(
            json!({ "kind": "corollary-double-factorial", "n": n }),
            &lhs,
            &rhs,
        ));
        let ratio = rising_product(2, n as u64, 2).expect("r >= 1");
        cases.push(Case::ints(
            json!({ "kind": "double-factorial-ratio", "n": n }),
            &ratio,
            &lhs,
        ));
    }
    Report::new("corollaries", cases)
}

/// `[a -> a; b -> b], [a -> a^r b; b -> a^(r-1) b^2]`.
pub fn multifactorial_matrix_grammar(r: i64) -> MatrixGrammar {
    let (a, b) = (letter('a'), letter('b'));
    let g1 = Grammar::from_productions([(a, power('a', 1)), (b, power('b', 1))])
        .expect("distinct letters");
    let mono = |ea: i64, eb: i64| {
        Polynomial::term(
            Rational::one(),
            Monomial::from_powers([(a, ea), (b, eb)]).expect("small exponents"),
        )
    };
    let g2 = Grammar::from_productions([(a, mono(r, 1)), (b, mono(r - 1, 2))])
        .expect("distinct letters");
    MatrixGrammar::new(vec![g1, g2]).expect("nonempty")
}

/// The matrix-grammar lemma (`D_1`, `D_2` on `a^m b^n`) and the four closed
/// forms for `D_12^n`, `D_21^n` applied to `a` and `b`.
pub fn verify_matrix_closed_forms(n_max: usize, r_max: i64) -> Report {
    let (a, b) = (letter('a'), letter('b'));
    let ab = |ea: i64, eb: i64| Monomial::from_powers([(a, ea), (b, eb)]).expect("small exponents");
    let w12: OperatorWord = "12".parse().expect("valid word");
    let w21: OperatorWord = "21".parse().expect("valid word");
    let mut cases = Vec::new();
    for r in 1..=r_max {
        let mg = multifactorial_matrix_grammar(r);
        for m in 0..=LEMMA_SAMPLE_MAX {
            for n in 0..=LEMMA_SAMPLE_MAX {
                let u = Polynomial::term(Rational::one(), ab(m, n));
                let k = BigInt::from(m + n);
                cases.push(Case::polys(
                    json!({ "kind": "lemma-d1", "m": m, "n": n, "r": r }),
                    mg.get(1).and_then(|g| derive(g, &u)),
                    Ok(scaled(k.clone(), ab(m, n))),
                ));
                cases.push(Case::polys(
                    json!({ "kind": "lemma-d2", "m": m, "n": n, "r": r }),
                    mg.get(2).and_then(|g| derive(g, &u)),
                    Ok(scaled(k, ab(m + r - 1, n + 1))),
                ));
            }
        }
        let mf = |n: i64| multifactorial(n, r).expect("within the defined range");
        for n in 0..=n_max as i64 {
            // (nr+1)!_r ((n-1)r+1)!_r and ((n-1)r+1)!_r^2
            let mixed = mf(n * r + 1) * mf((n - 1) * r + 1);
            let squared = mf((n - 1) * r + 1).pow(2);
            let forms = [
                ("d12-a", &w12, a, mixed.clone(), ab(n * r - (n - 1), n)),
                ("d21-a", &w21, a, squared.clone(), ab(n * r - (n - 1), n)),
                ("d12-b", &w12, b, mixed, ab(n * r - n, n + 1)),
                ("d21-b", &w21, b, squared, ab(n * r - n, n + 1)),
            ];
            for (kind, word, start, coeff, mono) in forms {
                cases.push(Case::polys(
                    json!({ "kind": kind, "n": n, "r": r }),
                    derive_word_pow(&mg, word, n as usize, &Polynomial::var(start)),
                    Ok(scaled(coeff, mono)),
                ));
            }
        }
    }
    Report::new("matrix-closed-forms", cases)
}

/// Checks "`D(a^2) = D(b^2) = D(ab)` implies `D(a) = D(b) = 0`" for one grammar.
fn nonexistence_case(mut params: Value, g: &Grammar) -> Case {
    let eval = || -> Result<[Polynomial; 5]> {
        Ok([
            derive(g, &parse_expr("a^2")?)?,
            derive(g, &parse_expr("b^2")?)?,
            derive(g, &parse_expr("ab")?)?,
            derive(g, &power('a', 1))?,
            derive(g, &power('b', 1))?,
        ])
    };
    let [da2, db2, dab, da, db] = match eval() {
        Ok(v) => v,
        Err(e) => return Case::error(params, e),
    };
    let antecedent = da2 == db2 && db2 == dab;
    if let Value::Object(map) = &mut params {
        map.insert("grammar".into(), json!(g.to_string()));
        map.insert("antecedent".into(), json!(antecedent));
        map.insert("d_a2".into(), json!(da2.to_string()));
        map.insert("d_b2".into(), json!(db2.to_string()));
        map.insert("d_ab".into(), json!(dab.to_string()));
    }
    if antecedent {
        let lhs = format!("D(a) = {da}; D(b) = {db}");
        let rhs = "D(a) = 0; D(b) = 0".to_owned();
        Case {
            params,
            pass: lhs == rhs,
            lhs,
            rhs,
        }
    } else {
        Case {
            params,
            lhs: "vacuous".into(),
            rhs: "vacuous".into(),
            pass: true,
        }
    }
}

/// Random grammar over `{a, b}` for the nonexistence harness: each letter
/// gets 0 to 3 terms `c a^i b^j` with `i, j >= 0`, `i + j <= 3` and
/// `c` in `[-3, 3]`. Zero terms means the letter is a constant.
pub fn random_nonexistence_grammar<R: Rng>(rng: &mut R) -> Grammar {
    const MONOMIALS: [(i64, i64); 10] = [
        (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3),
    ];
    let mut g = Grammar::new();
    for v in [letter('a'), letter('b')] {
        let n_terms = rng.random_range(0..=3);
        if n_terms == 0 {
            continue;
        }
        let body = Polynomial::from_terms((0..n_terms).map(|_| {
            let (i, j) = MONOMIALS[rng.random_range(0..MONOMIALS.len())];
            let m = Monomial::from_powers([(letter('a'), i), (letter('b'), j)])
                .expect("small exponents");
            (m, Rational::from(rng.random_range(-3..=3)))
        }));
        g.insert(v, body).expect("distinct letters");
    }
    g
}

/// Falsification harness for the nonexistence of a grammar with
/// `D(a^2) = D(b^2) = D(ab)` and `D(a), D(b)` nonzero. Besides `trials`
/// random grammars it replays two near misses and the empty grammar.
pub fn verify_nonexistence(trials: usize, seed: u64) -> Report {
    let mut cases = Vec::new();

    let near1 = single("a -> ab; b -> a^2");
    let near2 = single("a -> ab; b -> 2ab - b^2");
    let d = |g: &Grammar, s: &str| parse_expr(s).and_then(|u| derive(g, &u));
    let target = parse_expr("2a^2 b");
    let fixed = |name: &str, what: &str| json!({ "fixed": name, "check": what });

    cases.push(Case::polys(fixed("near-miss-1", "D(a^2)"), d(&near1, "a^2"), target.clone()));
    cases.push(Case::polys(fixed("near-miss-1", "D(b^2)"), d(&near1, "b^2"), target.clone()));
    cases.push(Case::holds(
        fixed("near-miss-1", "D(ab) != 2 a^2 b"),
        d(&near1, "ab").ok() != target.clone().ok(),
    ));
    cases.push(Case::holds(
        fixed("near-miss-1", "D(a) != D(b)"),
        d(&near1, "a").ok() != d(&near1, "b").ok(),
    ));
    cases.push(Case::polys(fixed("near-miss-2", "D(ab)"), d(&near2, "ab"), target.clone()));
    cases.push(Case::polys(fixed("near-miss-2", "D(a^2)"), d(&near2, "a^2"), target.clone()));
    cases.push(Case::holds(
        fixed("near-miss-2", "D(b^2) != 2 a^2 b"),
        d(&near2, "b^2").ok() != target.clone().ok(),
    ));
    cases.push(Case::holds(
        fixed("near-miss-2", "D(a) != D(b)"),
        d(&near2, "a").ok() != d(&near2, "b").ok(),
    ));
    cases.push(nonexistence_case(fixed("near-miss-1", "implication"), &near1));
    cases.push(nonexistence_case(fixed("near-miss-2", "implication"), &near2));
    cases.push(nonexistence_case(fixed("empty", "implication"), &Grammar::new()));

    let mut rng = random::rng_from_seed(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
    let random_cases: Vec<Case> = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &s)| {
            let g = random_nonexistence_grammar(&mut random::rng_from_seed(s));
            nonexistence_case(json!({ "trial": trial }), &g)
        })
        .collect();
    cases.extend(random_cases);
    Report::new("nonexistence", cases)
}

/// The calculus rules checked by [`verify_calculus_rules`], in report order.
pub const CALCULUS_RULES: [&str; 9] = [
    "linearity",
    "power-rule-monomial",
    "power-rule-polynomial",
    "quotient-rule",
    "product-rule-4",
    "leibniz",
    "zero-power",
    "stabilization",
    "word-composition",
];

struct Shapes {
    grammar_lhs: Vec<Variable>,
    body: PolyShape,
    poly: PolyShape,
    term: PolyShape,
    constants: PolyShape,
}

impl Shapes {
    fn new() -> Self {
        Shapes {
            grammar_lhs: random::letters("abc"),
            body: PolyShape::new("abc", 1..=3, -1..=2, -3..=3),
            poly: PolyShape::new("abc", 1..=3, -2..=2, -5..=5),
            term: PolyShape::new("abc", 1..=1, -3..=3, -5..=5),
            constants: PolyShape::new("de", 1..=2, -2..=2, -5..=5),
        }
    }

    fn grammar<R: Rng>(&self, rng: &mut R) -> Grammar {
        random::random_grammar(rng, &self.grammar_lhs, 0.8, &self.body)
    }
}

fn calculus_case(rule: &str, trial: usize, seed: u64, shapes: &Shapes) -> Case {
    let rng = &mut random::rng_from_seed(seed);
    let g = shapes.grammar(rng);
    let mut params = json!({ "rule": rule, "trial": trial, "grammar": g.to_string() });
    let mut note = |k: &str, v: String| {
        if let Value::Object(map) = &mut params {
            map.insert(k.to_owned(), Value::String(v));
        }
    };
    let d = |u: &Polynomial| derive(&g, u);

    let (lhs, rhs): (Result<Polynomial>, Result<Polynomial>) = match rule {
        "linearity" => {
            let u = random::random_poly(rng, &shapes.poly);
            let v = random::random_poly(rng, &shapes.poly);
            let alpha = random::random_rational(rng, -9..=9, 9);
            let beta = random::random_rational(rng, -9..=9, 9);
            note("u", u.to_string());
            note("v", v.to_string());
            note("alpha", alpha.to_string());
            note("beta", beta.to_string());
            let lhs = d(&u.scale(&alpha).add(&v.scale(&beta)));
            let rhs = (|| Ok(d(&u)?.scale(&alpha).add(&d(&v)?.scale(&beta))))();
            (lhs, rhs)
        }
        "power-rule-monomial" | "power-rule-polynomial" => {
            let (v, n) = if rule == "power-rule-monomial" {
                (random::random_term(rng, &shapes.term), rng.random_range(-4..=4))
            } else {
                let shape = PolyShape { terms: 2..=3, ..shapes.poly.clone() };
                (random::random_nonzero_poly(rng, &shape), rng.random_range(0..=4))
            };
            note("v", v.to_string());
            note("n", n.to_string());
            let lhs = v.pow(n).and_then(|p| d(&p));
            let rhs = (|| {
                if n == 0 {
                    return Ok(Polynomial::zero());
                }
                Ok(v.pow(n - 1)?.mul(&d(&v)?)?.scale(&Rational::from(n)))
            })();
            (lhs, rhs)
        }
        "quotient-rule" => {
            let u = random::random_poly(rng, &shapes.poly);
            let v = random::random_term(rng, &shapes.term);
            note("u", u.to_string());
            note("v", v.to_string());
            let lhs = v.pow(-1).and_then(|vi| d(&u.mul(&vi)?));
            let rhs = (|| {
                let num = d(&u)?.mul(&v)?.sub(&u.mul(&d(&v)?)?);
                num.mul(&v.pow(-2)?)
            })();
            (lhs, rhs)
        }
        "product-rule-4" => {
            let us: Vec<Polynomial> = (0..4).map(|_| random::random_poly(rng, &shapes.poly)).collect();
            note("factors", us.iter().map(|u| format!("({u})")).collect::<Vec<_>>().join(" "));
            let lhs = us
                .iter()
                .try_fold(Polynomial::one(), |acc, u| acc.mul(u))
                .and_then(|p| d(&p));
            let rhs = (|| {
                let mut acc = Polynomial::zero();
                for j in 0..us.len() {
                    let mut t = d(&us[j])?;
                    for (i, u) in us.iter().enumerate() {
                        if i != j {
                            t = t.mul(u)?;
                        }
                    }
                    acc = acc.add(&t);
                }
                Ok(acc)
            })();
            (lhs, rhs)
        }
        "leibniz" => {
            let u = random::random_poly(rng, &shapes.poly);
            let v = random::random_poly(rng, &shapes.poly);
            let n: usize = rng.random_range(0..=4);
            note("u", u.to_string());
            note("v", v.to_string());
            note("n", n.to_string());
            let lhs = u.mul(&v).and_then(|uv| derive_n(&g, &uv, n));
            let rhs = (|| {
                let du = derivative_ladder(&g, &u, n)?;
                let dv = derivative_ladder(&g, &v, n)?;
                leibniz_rhs(&du, &dv, n)
            })();
            (lhs, rhs)
        }
        "zero-power" => {
            let x = shapes.grammar_lhs[rng.random_range(0..shapes.grammar_lhs.len())];
            note("x", x.to_string());
            (Polynomial::var(x).pow(0).and_then(|p| d(&p)), Ok(Polynomial::zero()))
        }
        "stabilization" => {
            let k: usize = rng.random_range(0..=3);
            let u = random::random_poly(rng, &shapes.poly);
            let v = if rng.random_bool(0.5) {
                u.add(&random::random_nonzero_poly(rng, &shapes.constants))
            } else {
                random::random_poly(rng, &shapes.poly)
            };
            note("u", u.to_string());
            note("v", v.to_string());
            note("k", k.to_string());
            let equal_at_k = match (derive_n(&g, &u, k), derive_n(&g, &v, k)) {
                (Ok(x), Ok(y)) => x == y,
                (Err(e), _) | (_, Err(e)) => return Case::error(params, e),
            };
            note("equal_at_k", equal_at_k.to_string());
            if !equal_at_k {
                return Case {
                    params,
                    lhs: "vacuous".into(),
                    rhs: "vacuous".into(),
                    pass: true,
                };
            }
            (derive_n(&g, &u, k + 1), derive_n(&g, &v, k + 1))
        }
        "word-composition" => {
            let mg = random::random_matrix_grammar(rng, 2..=3, &shapes.grammar_lhs, 0.8, &shapes.body);
            let len = rng.random_range(2..=4);
            let indices: Vec<usize> = (0..len).map(|_| rng.random_range(1..=mg.len())).collect();
            let split = rng.random_range(1..len);
            let u = random::random_poly(rng, &shapes.poly);
            let w1 = OperatorWord::new(indices[..split].to_vec()).expect("nonempty");
            let w2 = OperatorWord::new(indices[split..].to_vec()).expect("nonempty");
            note("grammar", mg.to_string());
            note("word", w1.concat(&w2).to_string());
            note("split", split.to_string());
            note("u", u.to_string());
            let lhs = derive_word(&mg, &w1.concat(&w2), &u);
            let rhs = derive_word(&mg, &w2, &u).and_then(|x| derive_word(&mg, &w1, &x));
            (lhs, rhs)
        }
        other => unreachable!("unknown rule {other}"),
    };
    Case::polys(params, lhs, rhs)
}

/// Randomized checks of the calculus rules of the derivative operator,
/// `trials` cases per rule, plus the fixed stabilization counterexample.
pub fn verify_calculus_rules(trials: usize, seed: u64) -> Report {
    let shapes = Shapes::new();
    let mut rng = random::rng_from_seed(seed);
    let jobs: Vec<(&str, usize, u64)> = CALCULUS_RULES
        .iter()
        .flat_map(|&rule| (0..trials).map(move |t| (rule, t)))
        .map(|(rule, t)| (rule, t, rng.next_u64()))
        .collect();
    let mut cases: Vec<Case> = jobs
        .par_iter()
        .map(|&(rule, trial, s)| calculus_case(rule, trial, s, &shapes))
        .collect();

    let g = single("a -> ab; b -> ac; c -> b^2 + ac - bc");
    for k in 2..=4usize {
        let params = json!({ "rule": "stabilization", "fixed": "counterexample", "k": k });
        let (a, b) = (power('a', 1), power('b', 1));
        match (derive_n(&g, &a, k), derive_n(&g, &b, k)) {
            (Ok(x), Ok(y)) if x == y => {
                cases.push(Case::polys(params, derive_n(&g, &a, k + 1), derive_n(&g, &b, k + 1)))
            }
            (Ok(x), Ok(y)) => cases.push(Case::polys(params, Ok(x), Ok(y))),
            (Err(e), _) | (_, Err(e)) => cases.push(Case::error(params, e)),
        }
    }
    Report::new("calculus-rules", cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grammar(s: &str) -> Grammar {
        single(s)
    }

    #[test]
    fn leibniz_examples() {
        let a = power('a', 1);
        let r = verify_leibniz(&grammar("a -> a"), &a, &a, 6).unwrap();
        assert_eq!((r.passed, r.failed), (7, 0));

        let b = power('b', 1);
        let r = verify_leibniz(&grammar("a -> a + b; b -> b"), &a, &b, 4).unwrap();
        assert_eq!((r.passed, r.failed), (5, 0));

        let r = verify_leibniz(&grammar("a -> a"), &a, &b, 0).unwrap();
        assert_eq!(r.cases.len(), 1);
        assert!(r.cases[0].pass);
        assert_eq!(r.cases[0].lhs, "a b");
    }

    #[test]
    fn binomial_sums_boundaries() {
        let r = verify_binomial_sums(5);
        assert!(r.all_passed());
        assert_eq!(r.cases.len(), 6 + 5);
        assert_eq!(r.cases[0].lhs, "1");
        assert_eq!(r.cases[5].lhs, "32");
        assert_eq!(r.cases[6].lhs, "0");
        assert_eq!(verify_binomial_sums(0).cases.len(), 1);
    }

    #[test]
    fn smallest_multifactorial_identity_case() {
        let r = verify_multifactorial_identity(1, 1, 2);
        let case = r
            .cases
            .iter()
            .find(|c| c.params == json!({ "kind": "identity", "m": 1, "n": 1, "r": 2 }))
            .unwrap();
        assert_eq!((case.lhs.as_str(), case.rhs.as_str()), ("2", "2"));
        assert!(r.all_passed());
    }

    #[test]
    fn closed_form_examples() {
        let r = verify_closed_forms(2, 3, 2);
        let find = |p: Value| r.cases.iter().find(|c| c.params == p).unwrap().clone();
        assert_eq!(find(json!({ "grammar": "a -> a", "m": 2, "n": 3 })).lhs, "8 a^2");
        assert_eq!(
            find(json!({ "grammar": "a -> a^3", "m": 1, "n": 3, "r": 2 })).lhs,
            "15 a^7"
        );
        assert!(r.all_passed());
        let r = verify_closed_forms(1, 4, 1);
        assert!(r
            .cases
            .iter()
            .any(|c| c.params == json!({ "grammar": "a -> a^2", "m": 1, "n": 4, "r": 1 })
                && c.lhs == "24 a^5"));
    }

    #[test]
    fn matrix_closed_form_small_cases() {
        let r = verify_matrix_closed_forms(1, 2);
        assert!(r.all_passed());
        let find = |kind: &str, n: i64, r_: i64| {
            r.cases
                .iter()
                .find(|c| c.params == json!({ "kind": kind, "n": n, "r": r_ }))
                .unwrap()
                .lhs
                .clone()
        };
        assert_eq!(find("d12-a", 1, 2), "3 a^2 b");
        assert_eq!(find("d21-a", 1, 2), "a^2 b");
        assert_eq!(find("d12-a", 0, 2), "a");
        assert_eq!(find("d21-b", 0, 1), "b");
    }

    #[test]
    fn nonexistence_fixed_cases() {
        let r = verify_nonexistence(0, 0);
        assert!(r.all_passed(), "{r}");
        let empty = r.cases.iter().find(|c| c.params["fixed"] == "empty").unwrap();
        assert_eq!(empty.params["antecedent"], json!(true));
        assert_eq!(empty.lhs, "D(a) = 0; D(b) = 0");
        let near1 = r
            .cases
            .iter()
            .find(|c| c.params["fixed"] == "near-miss-1" && c.params["check"] == "implication")
            .unwrap();
        assert_eq!(near1.params["d_ab"], json!("a^3 + a b^2"));
        assert_eq!(near1.lhs, "vacuous");
    }

    #[test]
    fn nonexistence_is_deterministic() {
        assert_eq!(verify_nonexistence(50, 9), verify_nonexistence(50, 9));
        assert_ne!(verify_nonexistence(50, 9), verify_nonexistence(50, 10));
    }

    #[test]
    fn calculus_rules_small_run() {
        let r = verify_calculus_rules(10, 3);
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.cases.len(), 10 * CALCULUS_RULES.len() + 3);
        assert_eq!(r, verify_calculus_rules(10, 3));
    }

    #[test]
    fn report_counts_and_text() {
        let r = Report::new(
            "demo",
            vec![
                Case::ints(json!({ "n": 1 }), &BigInt::from(2), &BigInt::from(2)),
                Case::ints(json!({ "n": 2 }), &BigInt::from(4), &BigInt::from(5)),
            ],
        );
        assert_eq!((r.passed, r.failed), (1, 1));
        assert_eq!(
            r.to_string(),
            "suite demo\nPASS n=1: 2 == 2\nFAIL n=2: 4 != 5\npassed 1 failed 1"
        );
        let json = r.to_json();
        assert_eq!(json["cases"][1]["pass"], json!(false));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"suite":"demo","passed":1,"failed":1,"cases":[{"params":{"n":1},"lhs":"2","rhs":"2","pass":true},{"params":{"n":2},"lhs":"4","rhs":"5","pass":false}]}"#
        );
    }

    #[test]
    fn failing_computation_is_a_failed_case() {
        let c = Case::polys(json!({}), Err(crate::Error::ExponentOverflow), Ok(Polynomial::zero()));
        assert!(!c.pass);
        assert_eq!(c.lhs, "error: exponent overflow");
    }

}
