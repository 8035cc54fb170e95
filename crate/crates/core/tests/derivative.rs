use formalgram::{
    binomial, derive, derive_n, derive_word, parse_expr, parse_grammar, Grammar, MatrixGrammar,
    Monomial, OperatorWord, Polynomial, Rational, Variable,
};
use proptest::prelude::*;

fn v(c: char) -> Variable {
    Variable::new(c).unwrap()
}

fn p(s: &str) -> Polynomial {
    parse_expr(s).unwrap()
}

fn grammar(s: &str) -> Grammar {
    parse_grammar(s).unwrap().as_single().unwrap().clone()
}

fn poly_over(vars: &'static str, max_terms: usize, exps: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec((-5i64..=5, prop::collection::vec(exps, n)), 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().map(|(c, es)| {
            let m = Monomial::from_powers(vars.chars().zip(es).map(|(x, e)| (v(x), e))).unwrap();
            (m, Rational::from(c))
        }))
    })
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_over("abc", 3, -2..=2)
}

fn single_term() -> impl Strategy<Value = Polynomial> {
    ((1i64..=5), any::<bool>(), prop::collection::vec(-3i64..=3, 3)).prop_map(|(c, neg, es)| {
        let c = if neg { -c } else { c };
        let m = Monomial::from_powers("abc".chars().zip(es).map(|(x, e)| (v(x), e))).unwrap();
        Polynomial::term(Rational::from(c), m)
    })
}

/// Each of a, b, c optionally gets a body with up to 3 terms.
fn grammar_strategy() -> impl Strategy<Value = Grammar> {
    prop::collection::vec(prop::option::of(poly_over("abc", 3, -1..=2)), 3).prop_map(|bodies| {
        Grammar::from_productions(
            "abc".chars().zip(bodies).filter_map(|(x, b)| b.map(|b| (v(x), b))),
        )
        .unwrap()
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    ((-9i64..=9), (1i64..=9)).prop_map(|(a, b)| Rational::new(a, b).unwrap())
}

/// Brute-force oracle for the derivative of a product: expand each factor's
/// derivative against the others, term by term.
fn product_rule_oracle(g: &Grammar, factors: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for j in 0..factors.len() {
        let mut t = derive(g, &factors[j]).unwrap();
        for (i, f) in factors.iter().enumerate() {
            if i != j {
                t = t.mul(f).unwrap();
            }
        }
        acc = acc.add(&t);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn linearity(g in grammar_strategy(), u in poly(), w in poly(), alpha in rational(), beta in rational()) {
        let lhs = derive(&g, &u.scale(&alpha).add(&w.scale(&beta))).unwrap();
        let rhs = derive(&g, &u).unwrap().scale(&alpha).add(&derive(&g, &w).unwrap().scale(&beta));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_rule_on_terms(g in grammar_strategy(), t in single_term(), n in -4i64..=4) {
        let lhs = derive(&g, &t.pow(n).unwrap()).unwrap();
        let rhs = if n == 0 {
            Polynomial::zero()
        } else {
            t.pow(n - 1).unwrap().mul(&derive(&g, &t).unwrap()).unwrap().scale(&Rational::from(n))
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_rule_on_sums(g in grammar_strategy(), u in poly(), n in 1i64..=4) {
        let lhs = derive(&g, &u.pow(n).unwrap()).unwrap();
        let rhs = u.pow(n - 1).unwrap().mul(&derive(&g, &u).unwrap()).unwrap().scale(&Rational::from(n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_rule(g in grammar_strategy(), u in poly(), t in single_term()) {
        let lhs = derive(&g, &u.mul(&t.pow(-1).unwrap()).unwrap()).unwrap();
        let num = derive(&g, &u).unwrap().mul(&t).unwrap().sub(&u.mul(&derive(&g, &t).unwrap()).unwrap());
        let rhs = num.mul(&t.pow(-2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_rule_four_factors(g in grammar_strategy(), fs in prop::collection::vec(poly_over("abc", 2, -1..=2), 4)) {
        let prod = fs.iter().fold(Polynomial::one(), |acc, f| acc.mul(f).unwrap());
        prop_assert_eq!(derive(&g, &prod).unwrap(), product_rule_oracle(&g, &fs));
    }

    #[test]
    fn leibniz(g in grammar_strategy(), u in poly_over("abc", 2, -1..=2), w in poly_over("abc", 2, -1..=2), n in 0usize..=4) {
        let lhs = derive_n(&g, &u.mul(&w).unwrap(), n).unwrap();
        let mut rhs = Polynomial::zero();
        for k in 0..=n {
            let c = Rational::from_integer(binomial(n as u64, k as i64));
            let t = derive_n(&g, &u, k).unwrap().mul(&derive_n(&g, &w, n - k).unwrap()).unwrap();
            rhs = rhs.add(&t.scale(&c));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zeroth_power_has_zero_derivative(g in grammar_strategy(), x in prop::sample::select(vec!['a', 'b', 'c', 'd'])) {
        let one = Polynomial::var(v(x)).pow(0).unwrap();
        prop_assert!(derive(&g, &one).unwrap().is_zero());
    }

    #[test]
    fn stabilization(g in grammar_strategy(), u in poly(), w in poly_over("de", 2, -2..=2), k in 1usize..=3) {
        // Adding a function of constant letters leaves every D^k, k >= 1, unchanged.
        let u2 = u.add(&w);
        let dk = derive_n(&g, &u, k).unwrap();
        prop_assert_eq!(&dk, &derive_n(&g, &u2, k).unwrap());
        prop_assert_eq!(derive_n(&g, &u, k + 1).unwrap(), derive_n(&g, &u2, k + 1).unwrap());
    }

    #[test]
    fn word_composition(
        gs in prop::collection::vec(grammar_strategy(), 2..=3),
        raw in prop::collection::vec(0usize..3, 2..=4),
        split in 1usize..4,
        u in poly(),
    ) {
        let mg = MatrixGrammar::new(gs).unwrap();
        let idx: Vec<usize> = raw.iter().map(|i| i % mg.len() + 1).collect();
        let split = split.min(idx.len() - 1);
        let w1 = OperatorWord::new(idx[..split].to_vec()).unwrap();
        let w2 = OperatorWord::new(idx[split..].to_vec()).unwrap();
        let whole = derive_word(&mg, &w1.concat(&w2), &u).unwrap();
        let nested = derive_word(&mg, &w1, &derive_word(&mg, &w2, &u).unwrap()).unwrap();
        prop_assert_eq!(whole, nested);
    }

    #[test]
    fn derive_is_insertion_order_independent(g in grammar_strategy(), u in poly()) {
        let mut terms: Vec<(Monomial, Rational)> = u.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.reverse();
        let u2 = Polynomial::from_terms(terms);
        prop_assert_eq!(derive(&g, &u).unwrap(), derive(&g, &u2).unwrap());
    }
}

#[test]
fn counterexample_grammar_stabilizes() {
    let g = grammar("a -> ab; b -> ac; c -> b^2 + ac - bc");
    assert_ne!(derive(&g, &p("a")).unwrap(), derive(&g, &p("b")).unwrap());
    for n in 2..=5 {
        assert_eq!(derive_n(&g, &p("a"), n).unwrap(), derive_n(&g, &p("b"), n).unwrap());
    }
}

#[test]
fn noncommuting_words() {
    let mg = parse_grammar("[a->a+b; b->b],[a->a; b->a-b]").unwrap();
    let d12 = derive_word(&mg, &"12".parse().unwrap(), &p("a+b")).unwrap();
    let d21 = derive_word(&mg, &"21".parse().unwrap(), &p("a+b")).unwrap();
    assert_eq!(d12.to_string(), "2 a + b");
    assert_eq!(d21.to_string(), "3 a - 2 b");
    assert_ne!(d12, d21);
}

#[test]
fn identity_grammar_on_negative_powers() {
    let g = grammar("a -> a");
    for n in 0..6 {
        let expected = if n % 2 == 0 { p("a^-1") } else { p("-a^-1") };
        assert_eq!(derive_n(&g, &p("a^-1"), n).unwrap(), expected);
    }
}
