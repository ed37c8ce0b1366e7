use epirisk::applications::liquidity_frame;
use epirisk::formula::{evaluate, parse, print};
use epirisk::modal::{self, refine, RefinementKind};
use epirisk::{AlgebraPackage, Error, Formula, Frame, Proposition, Relation};
use proptest::prelude::*;

const G: AlgebraPackage = AlgebraPackage::GODEL;

fn ast(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["p", "q", "r", "risk_2", "A"]).prop_map(Formula::atom);
    leaf.prop_recursive(depth, 64, 2, |inner| {
        let std = prop::sample::select(vec!["K", "B", "B1", "M"]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (std.clone(), inner.clone()).prop_map(|(s, a)| Formula::nec(s, a)),
            (std.clone(), inner.clone()).prop_map(|(s, a)| Formula::dia(s, a)),
            (std, inner.clone()).prop_map(|(s, a)| Formula::dual(s, a)),
            inner.prop_map(Formula::audit),
        ]
    })
}

fn boolean_ast() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom);
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn truth(f: &Formula, val: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => val(a),
        Formula::Not(a) => !truth(a, val),
        Formula::And(a, b) => truth(a, val) && truth(b, val),
        Formula::Or(a, b) => truth(a, val) || truth(b, val),
        other => panic!("not Boolean: {other}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(f in ast(6)) {
        prop_assume!(f.depth() <= 6);
        let text = print(&f);
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn boolean_fragment_matches_truth_tables(f in boolean_ast()) {
        for n in 1..=3usize {
            let mut frame = Frame::with_world_count(n).unwrap();
            frame.add_relation("K", Relation::universal(n)).unwrap();
            for code in 0u32..(1 << (3 * n)) {
                let bit = |atom: usize, w: usize| code >> (atom * n + w) & 1 == 1;
                let mut fr = frame.clone();
                for (i, name) in ["p", "q", "r"].iter().enumerate() {
                    let p = Proposition::indicator(n, |w| bit(i, w));
                    fr.add_proposition(*name, p).unwrap();
                }
                for pkg in AlgebraPackage::all() {
                    let got = evaluate(&f, &fr, pkg).unwrap();
                    for w in 0..n {
                        let val = |a: &str| bit(["p", "q", "r"].iter().position(|x| *x == a).unwrap(), w);
                        let want = if truth(&f, &val) { 1.0 } else { 0.0 };
                        prop_assert_eq!(got.values()[w], want);
                    }
                }
            }
        }
    }
}

#[test]
fn evaluation_agrees_with_operator_calls_on_liquidity() {
    let f = liquidity_frame();
    let r = f.proposition("r").unwrap();
    for pkg in AlgebraPackage::all() {
        let eval = |s: &str| evaluate(&parse(s).unwrap(), &f, pkg).unwrap();
        assert_eq!(eval("[K]r"), modal::box_op(&f, "K", r, pkg).unwrap());
        assert_eq!(eval("<K>r"), modal::diamond(&f, "K", r, pkg).unwrap());
        assert_eq!(eval("~[K]r"), modal::dual(&f, "K", r, pkg).unwrap());
        assert_eq!(eval("r & ![K]r"), refine(&f, r, &RefinementKind::moore("K"), pkg).unwrap());
        assert_eq!(eval("r & [K]!r"), refine(&f, r, &RefinementKind::anti("K"), pkg).unwrap());
    }
    let dual = evaluate(&parse("~[K]r").unwrap(), &f, G).unwrap();
    assert!((dual.values()[0] - 0.9).abs() < 1e-12);
}

#[test]
fn precedence_and_modal_binding() {
    assert_eq!(
        parse("!p & q | r").unwrap(),
        Formula::or(Formula::and(Formula::not(Formula::atom("p")), Formula::atom("q")), Formula::atom("r"))
    );
    assert_eq!(
        parse("[K]p & q").unwrap(),
        Formula::and(Formula::nec("K", Formula::atom("p")), Formula::atom("q"))
    );
    assert_eq!(print(&parse("p & (q | r)").unwrap()), "p & (q | r)");
    assert_eq!(print(&parse("(p & q) & r").unwrap()), "p & q & r");
    assert_eq!(parse("A(p & ![K]p)").unwrap(), Formula::audit(Formula::moore("p", "K")));
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse("p & & q").unwrap_err();
    assert_eq!((e.position, e.expected.as_str()), (4, "operand"));
    let e = parse("r & &").unwrap_err();
    assert_eq!(e.position, 4);
    assert!(parse("p q").is_err());
    assert!(parse("[K p").is_err());
    assert!(parse("").is_err());
}

#[test]
fn unknown_names_are_errors() {
    let f = liquidity_frame();
    assert!(matches!(evaluate(&parse("[Z]r").unwrap(), &f, G), Err(Error::UnknownStandard(_))));
    assert!(matches!(evaluate(&parse("s").unwrap(), &f, G), Err(Error::UnknownProposition(_))));
}
