use super::*;
use crate::checker::Checker;
use crate::lang::{Agent, BasicVar, Vocabulary};
use crate::model::{build_numbers_game, EpistemicModel};
use crate::syntax::{parse_formula, parse_model, parse_term};

fn p(name: &str) -> Formula {
    Formula::pred(name, vec![])
}

fn pq_vocab() -> Vocabulary {
    let mut v = Vocabulary::with_agents(&["a", "b", "d"]);
    v.add_predicate("p", 0).unwrap();
    v.add_predicate("q", 0).unwrap();
    v
}

/// Three agents over four states with two variables, used as a semantic
/// reference for individual steps.
fn small_model() -> EpistemicModel {
    parse_model(
        "\
agents: a, b, d
domain: 0..2
var x@a
var y@b
fun f/1 = table { (0) -> 1, (1) -> 2, default -> 0 }
state s0 { x = 0, y = 0 }
state s1 { x = 0, y = 1 }
state s2 { x = 1, y = 1 }
state s3 { x = 2, y = 0 }
rel a: partition { {s0, s1}, {s2}, {s3} }
rel b: partition { {s0, s3}, {s1, s2} }
rel d: partition { {s0, s1, s2}, {s3} }
",
    )
    .unwrap()
}

fn assert_same_everywhere(m: &EpistemicModel, lhs: &Expr, rhs: &Expr) {
    let ck = Checker::new();
    match (lhs, rhs) {
        (Expr::Formula(a), Expr::Formula(b)) => {
            assert_eq!(ck.extension(m, a).unwrap(), ck.extension(m, b).unwrap(), "{a}  vs  {b}")
        }
        (Expr::Term(a), Expr::Term(b)) => {
            assert_eq!(ck.term_values(m, a).unwrap(), ck.term_values(m, b).unwrap(), "{a}  vs  {b}")
        }
        _ => panic!("mixed step"),
    }
}

#[test]
fn static_input_is_untouched() {
    let phi = parse_formula("K{a} (p & ~q)", &pq_vocab()).unwrap();
    let r = reduce_formula(&phi);
    assert_eq!(r.value, phi);
    assert!(r.steps.is_empty());
    let e = Event::new([p("p")], [(Agent::new("a"), Group::of(&["a", "b"]))], []);
    let r = reduce_event(&e);
    assert_eq!(r.value, e);
    assert!(r.steps.is_empty());
}

#[test]
fn dynamic_precondition_becomes_implication() {
    let inner = Formula::after(Event::announcement(p("q")), p("p"));
    let e = Event::announcement(inner);
    let r = reduce_event(&e);
    assert_eq!(r.value, Event::announcement(Formula::not(Formula::and(p("q"), Formula::not(p("p"))))));
    assert_eq!(r.steps.len(), 1);
    assert_eq!(r.steps[0].rule, Rule::AtomicChange);
    assert_eq!(r.steps[0].path, vec![0]);
}

#[test]
fn dynamic_post_term_becomes_guarded_variable() {
    let v = BasicVar::new("v", "a");
    let post = Term::after(Event::announcement(p("q")), Term::Var(v.clone()));
    let e = Event::new([], [], [(v.clone(), post)]);
    let r = reduce_event(&e);
    assert_eq!(r.value.post_of(&v), Term::ite(Term::Var(v), p("q"), Term::undef()));
    assert_eq!(r.steps[0].rule, Rule::ChangeOfBasicValues);
}

#[test]
fn constants_are_guarded_by_the_precondition() {
    let x = Term::after(Event::announcement(p("q")), Term::constant("c"));
    let r = reduce_term(&x);
    assert_eq!(r.value, Term::ite(Term::constant("c"), p("q"), Term::undef()));
    assert!(r.is_static());
    assert_eq!(r.steps.len(), 1);
    assert_eq!(r.steps[0].rule, Rule::PreservationOfConstants);
}

#[test]
fn knowledge_after_announcement() {
    let phi = parse_formula("[!(q)] K{a} p", &pq_vocab()).unwrap();
    let r = reduce_formula(&phi);
    let expected = Formula::not(Formula::and(
        p("q"),
        Formula::not(Formula::know(
            Group::of(&["a"]),
            Formula::not(Formula::and(p("q"), Formula::not(p("p")))),
        )),
    ));
    assert_eq!(r.value, expected);
    let rules: Vec<Rule> = r.steps.iter().map(|s| s.rule).collect();
    assert_eq!(rules, vec![Rule::KnowledgeUpdate, Rule::AtomicChange]);
    assert_eq!(r.steps[1].path, vec![0, 1, 0, 0]);
}

#[test]
fn common_knowledge_after_sharing() {
    let phi = parse_formula("[!(a:d)] C{{a},{b}} p", &pq_vocab()).unwrap();
    let r = reduce_formula(&phi);
    assert!(r.is_static());
    let sg = Supergroup::new([Group::of(&["a", "d"]), Group::of(&["b"])]).unwrap();
    assert_eq!(simplify_formula(&r.value), Formula::common(sg, derived::top(), p("p")));
}

#[test]
fn hypothetical_value_after_sharing_matches_checker() {
    let m = build_numbers_game(4).unwrap();
    let voc = m.vocab().clone();
    let x = parse_term("after(!(a:d), desc(nb@b, {a}, lt(nd@d, nb@b)))", &voc).unwrap();
    let r = reduce_term(&x);
    assert!(r.is_static());
    let top = r.steps.first().unwrap();
    assert_eq!(top.rule, Rule::ChangeOfHypotheticalValues);
    let Expr::Term(Term::Ite(inner, _, _)) = &top.after else {
        panic!("guarded shape expected")
    };
    assert!(matches!(&**inner, Term::Desc(_, g, _) if *g == Group::of(&["a", "d"])));
    assert_same_everywhere(&m, &Expr::Term(x), &Expr::Term(r.value));
}

#[test]
fn every_step_is_an_equivalence_and_decreases() {
    let m = small_model();
    let voc = m.vocab().clone();
    let formulas = [
        "[!(x@a = 0)] K{b} (y@b = 1)",
        "[!(a:b)] C{{a},{d}|x@a != 2} (f(x@a) = 1)",
        "[!(b:a, y@b := f(y@b))] ~K{a,d} (y@b = if x@a = 0 then 1 else 0)",
        "[!(a:d)] [!(K{a} x@a)] (desc(x@a, {b}, y@b = 1) = 1)",
        "<!(x@a != 2)> (after(!(d:b), desc(y@b, {d}, top)) = y@b)",
        "[event { pre [!(d:a)] K{d} x@a; access d -> {a,d} }] (x@a = 1 & K{d} x@a)",
    ];
    for src in formulas {
        let phi = parse_formula(src, &voc).unwrap();
        let r = reduce_formula(&phi);
        assert!(r.is_static(), "{src}");
        assert!(!r.steps.is_empty(), "{src}");
        for step in &r.steps {
            assert!(step.decreases(), "{step}");
            assert_same_everywhere(&m, &step.before, &step.after);
        }
        assert_same_everywhere(&m, &Expr::Formula(phi.clone()), &Expr::Formula(r.value.clone()));
        let simple = simplify_formula(&r.value);
        assert_same_everywhere(&m, &Expr::Formula(phi), &Expr::Formula(simple));
    }
}

#[test]
fn step_lines_parse_back() {
    let m = small_model();
    let voc = m.vocab().clone();
    let phi = parse_formula("[!(a:b, x@a = 0)] K{a} (after(!(y@b := f(y@b)), f(y@b)) = x@a)", &voc).unwrap();
    let r = reduce_formula(&phi);
    for step in &r.steps {
        let line = step.to_string();
        assert_eq!(parse_step(&line, &voc).unwrap(), *step, "{line}");
    }
    assert!(matches!(parse_step("nonsense", &voc), Err(StepParseError::Shape)));
    assert!(matches!(
        parse_step("frobnicate @ . : top ==> top", &voc),
        Err(StepParseError::UnknownRule(_))
    ));
}

#[test]
fn simplify_cleans_constants() {
    let voc = small_model().vocab().clone();
    let phi = parse_formula("[!(a:d)] K{a} (x@a = x@a)", &voc).unwrap();
    assert_eq!(simplify_formula(&reduce_formula(&phi).value), derived::top());
    assert_eq!(simplify_formula(&Formula::not(Formula::not(p("p")))), p("p"));
    assert_eq!(simplify_formula(&Formula::and(p("p"), derived::bot())), derived::bot());
}
