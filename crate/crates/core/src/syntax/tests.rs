use super::*;
use crate::lang::{derived, Agent, BasicVar, Group, Supergroup};
use crate::model::build_numbers_game;

fn voc() -> Vocabulary {
    let mut v = Vocabulary::with_agents(&["a", "b", "d"]);
    for (n, o) in [("x", "a"), ("y", "b"), ("nb", "b"), ("nd", "d")] {
        v.add_var(BasicVar::new(n, o)).unwrap();
    }
    v.add_constant("2").unwrap();
    v.add_predicate("p", 0).unwrap();
    v.add_predicate("q", 0).unwrap();
    v.add_predicate("theta", 0).unwrap();
    v.add_predicate("phi", 0).unwrap();
    v.add_predicate("r", 1).unwrap();
    v.add_predicate("lt", 2).unwrap();
    v.add_predicate("leq", 2).unwrap();
    v.add_function("f", 1).unwrap();
    v.add_function("plus", 2).unwrap();
    v
}

fn f(src: &str) -> Formula {
    parse_formula(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn t(src: &str) -> Term {
    parse_term(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn e(src: &str) -> Event {
    parse_event(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn p(name: &str) -> Formula {
    Formula::pred(name, vec![])
}

#[test]
fn knowledge_atom() {
    assert_eq!(
        f("K{a} (nb@b = 2)"),
        Formula::know(Group::of(&["a"]), Formula::eq(Term::var("nb", "b"), Term::constant("2")))
    );
}

#[test]
fn conditional_common_knowledge() {
    let sg = Supergroup::new([Group::of(&["a"]), Group::of(&["b"])]).unwrap();
    assert_eq!(f("C{{a},{b}|theta} phi"), Formula::common(sg.clone(), p("theta"), p("phi")));
    assert_eq!(f("C{a,b} phi"), Formula::common(sg, derived::top(), p("phi")));
}

#[test]
fn event_diamond() {
    let ev = Event::announcement(p("q"));
    assert_eq!(f("<!(q)> p"), derived::diamond(&ev, p("p")));
    assert_eq!(f("<!(q)> p"), Formula::not(Formula::after(ev, Formula::not(p("p")))));
}

#[test]
fn term_forms() {
    assert_eq!(
        t("desc(nb@b, {a,d}, top)"),
        Term::desc(Term::var("nb", "b"), Group::of(&["a", "d"]), derived::top())
    );
    assert_eq!(t("if phi then x@a else y@b"), Term::ite(Term::var("x", "a"), p("phi"), Term::var("y", "b")));
    assert_eq!(
        t("after(!(a:d), nb@b)"),
        Term::after(Event::share(Agent::new("a"), Agent::new("d")), Term::var("nb", "b"))
    );
    assert_eq!(t("?(p)"), derived::test(p("p")));
}

#[test]
fn event_sugar() {
    assert_eq!(e("!(a:d)"), Event::share(Agent::new("a"), Agent::new("d")));
    let knows_nb = derived::know_value(&Group::of(&["a"]), &derived::top(), &Term::var("nb", "b"));
    assert_eq!(e("!( ~K{a} nb@b )"), Event::announcement(Formula::not(knows_nb)));
    assert_eq!(e("!()"), Event::trivial());
    assert_eq!(e("!(x@a := 2)"), Event::assign(BasicVar::new("x", "a"), Term::constant("2")));
    assert_eq!(e("event { }"), Event::trivial());
    let full = e("event { pre p, q; access a -> {a,b}; set x@a := 2 }");
    assert_eq!(full.preconditions().len(), 2);
    assert_eq!(full.access_of(&Agent::new("a")), Group::of(&["a", "b"]));
    assert_eq!(full.post_of(&BasicVar::new("x", "a")), Term::constant("2"));
}

#[test]
fn precedence() {
    let (a, b, c) = (p("p"), p("q"), p("phi"));
    assert_eq!(f("p & q | phi"), derived::or(Formula::and(a.clone(), b.clone()), c.clone()));
    assert_eq!(
        f("p -> q -> phi"),
        derived::implies(a.clone(), derived::implies(b.clone(), c.clone()))
    );
    assert_eq!(f("~p & q"), Formula::and(Formula::not(a.clone()), b.clone()));
    assert_eq!(f("K{a} p & q"), Formula::and(Formula::know(Group::of(&["a"]), a.clone()), b.clone()));
    assert_eq!(f("p <-> q"), derived::iff(a, b));
}

#[test]
fn comparisons() {
    let (x, y) = (Term::var("x", "a"), Term::var("y", "b"));
    assert_eq!(f("x@a != y@b"), derived::neq(x.clone(), y.clone()));
    assert_eq!(f("x@a < y@b"), Formula::pred("lt", vec![x.clone(), y.clone()]));
    assert_eq!(f("x@a >= y@b"), Formula::pred("leq", vec![y.clone(), x.clone()]));
    assert_eq!(f("undefined(x@a)"), derived::undefined(x.clone()));
    assert_eq!(f("defined(x@a, y@b)"), derived::defined_all([x, y]));
}

#[test]
fn knowledge_of_values() {
    let x = Term::var("x", "a");
    let a = Group::of(&["a"]);
    assert_eq!(f("K{a} x@a"), derived::know_value(&a, &derived::top(), &x));
    assert_eq!(f("Kv{a|p} x@a"), derived::know_value(&a, &p("p"), &x));
    let y = Term::var("y", "b");
    assert_eq!(
        f("Kv{a} (x@a, y@b)"),
        derived::know_values(&a, &derived::top(), &[x.clone(), y.clone()])
    );
    let sg = Supergroup::singletons(&Group::of(&["a", "b"]));
    assert_eq!(f("Cv{a,b} x@a"), derived::common_values(&sg, &derived::top(), &[x]));
}

#[test]
fn diagnostics_point_at_the_problem() {
    let err = parse_formula("K{a} (x@a = )", &voc()).unwrap_err();
    let d = &err.diagnostics[0];
    assert_eq!(d.pos, Pos { line: 1, col: 13 });
    let err = parse_formula("p &\n  zz(x@a)", &voc()).unwrap_err();
    assert_eq!(err.diagnostics[0].pos, Pos { line: 2, col: 3 });
    assert!(err.to_string().contains("unknown predicate `zz`"), "{err}");
    let err = parse_formula("K{z} p", &voc()).unwrap_err();
    assert!(err.to_string().contains("unknown agent `z`"), "{err}");
    let err = parse_formula("r(x@a, x@a)", &voc()).unwrap_err();
    assert!(err.to_string().contains("expects 1"), "{err}");
}

#[test]
fn open_mode_collects_symbols() {
    let (phi, v) = parse_formula_open("K{a,c} (g(x@b) = 3) & s", &Vocabulary::new()).unwrap();
    assert!(v.has_agent(&Agent::new("c")));
    assert!(v.has_var(&BasicVar::new("x", "b")));
    assert_eq!(v.function_arity("g"), Some(1));
    assert_eq!(v.predicate_arity("s"), Some(0));
    assert!(v.has_constant("3"));
    assert_eq!(parse_formula(&phi.to_string(), &v).unwrap(), phi);
    assert!(parse_formula_open("s & s(1)", &Vocabulary::new()).is_err());
}

#[test]
fn printing_round_trips() {
    let sources = [
        "K{a} (x@a = 2)",
        "C{{a},{b}|theta} phi",
        "C{a,b} phi",
        "C{{a,b},{d}|p | q} ~phi",
        "<!(q)> p",
        "[!(a:d)] K{a} (nd@d = nd@d)",
        "~K{a} nb@b",
        "Kv{a|p} x@a",
        "<K{a,b}> (p & q)",
        "p -> q -> phi",
        "(p -> q) -> phi",
        "p & (q & phi)",
        "p | q & phi",
        "~(p | q)",
        "~~p",
        "x@a != undef",
        "(if p then x@a else 2) = f(y@b)",
        "desc(x@a, {a,b}, p) < plus(?(q), after(!(x@a := 2), x@a))",
        "[event { access a -> {b} }] top",
        "[!(a:d, b:a, p, x@a := f(x@a))] bot",
        "leq(x@a, 2) & r(if q then 2 else 0)",
    ];
    for src in sources {
        let phi = f(src);
        let printed = phi.to_string();
        assert_eq!(f(&printed), phi, "{src} printed as {printed}");
    }
}

#[test]
fn printing_uses_short_forms() {
    assert_eq!(e("!(a:d)").to_string(), "!(a:d)");
    assert_eq!(f("C{a,b|top} p").to_string(), "C{a,b} p");
    assert_eq!(f("top & ~top").to_string(), "top & bot");
    assert_eq!(e("!(x@a := 2)").to_string(), "!(x@a := 2)");
    assert_eq!(f("~K{a} nb@b").to_string(), "~Kv{a} nb@b");
    assert_eq!(
        f("[event { access a -> {b} }] top").to_string(),
        "[event { access a -> {b} }] top"
    );
}

#[test]
fn model_files_round_trip() {
    let src = "\
# a small model
agents: a, b
domain: {red, blue, U}
var x@a
var y@b
const c = blue
fun f/1 = table { (red) -> blue, default -> U }
pred p/1 = table { (red) }
state s1 { x = red, y = red }
state s2 { x@a = blue, y = red }
rel a: partition { {s1}, {s2} }
rel b: universal
";
    let m = parse_model(src).unwrap();
    assert_eq!(m.num_states(), 2);
    assert_eq!(m.fom().constant("0"), Some(0));
    assert_eq!(m.fom().constant("1"), Some(1));
    assert_eq!(m.fom().constant("c"), Some(1));
    assert_eq!(m.fom().apply("f", &[0]), Some(1));
    assert_eq!(m.fom().apply("f", &[2]), Some(2));
    let printed = print_model(&m);
    let again = parse_model(&printed).unwrap();
    assert_eq!(print_model(&again), printed);
    assert_eq!(again.relations(), m.relations());
    assert_eq!(again.fom(), m.fom());
    assert_eq!(**again.vocab(), **m.vocab());
}

#[test]
fn numbers_game_file_round_trips() {
    let m = build_numbers_game(3).unwrap();
    let text = print_model(&m);
    assert!(text.contains("domain: 0..3"));
    assert_eq!(text.matches("\nstate ").count(), 16);
    let again = parse_model(&text).unwrap();
    assert_eq!(again.num_states(), 16);
    assert_eq!(again.relations(), m.relations());
    assert_eq!(again.fom(), m.fom());
    assert_eq!(**again.vocab(), **m.vocab());
}

#[test]
fn model_file_errors() {
    let missing = "agents: a\ndomain: 0..1\nvar x@a\nstate s { }\nrel a: universal\n";
    let err = parse_model(missing).unwrap_err();
    assert!(err.to_string().contains("gives no value"), "{err}");
    let bad_rel = "agents: a\ndomain: 0..1\nstate s { }\nstate t { }\nrel a: partition { {s} }\n";
    let err = parse_model(bad_rel).unwrap_err();
    assert_eq!(err.diagnostics[0].pos.line, 5);
    let unknown = "agents: a\ndomain: 0..1\nstate s { }\nrel a: partition { {s, w} }\n";
    let err = parse_model(unknown).unwrap_err();
    assert_eq!(err.diagnostics[0].pos, Pos { line: 4, col: 24 });
}

#[test]
fn scenario_scripts() {
    let src = "\
# the first two moves
model numbers-game 4
apply !(a:d)
assert top at all
assert ~K{a} nb@b at s1_2_1
";
    let (script, model) = parse_scenario(src, None).unwrap();
    assert_eq!(script.model, ModelSource::NumbersGame(4));
    assert_eq!(script.steps.len(), 3);
    assert_eq!(model.num_states(), 25);
    assert!(matches!(&script.steps[2], Step::Assert { target: StepTarget::State(s), line: 5, .. } if s == "s1_2_1"));
    let err = parse_scenario("model numbers-game 4\nassert K{a} (zz = 1) at all\n", None).unwrap_err();
    assert_eq!(err.diagnostics[0].pos, Pos { line: 2, col: 14 });
}
