//! Axiom and theorem instances shared by the integration tests.
#![allow(dead_code)]

use dlkv::gen::test_vocabulary;
use dlkv::lang::derived::{
    conj, defined, diamond, implies, iff, know_cond, know_value, know_values, possible,
};
use dlkv::lang::{agents_of_formula, agents_of_term, Event, Formula, Group, Supergroup, Term, Vocabulary};
use dlkv::syntax::{parse_event, parse_formula, parse_term};

pub fn voc() -> Vocabulary {
    test_vocabulary()
}

pub fn f(src: &str) -> Formula {
    parse_formula(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn t(src: &str) -> Term {
    parse_term(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn ev(src: &str) -> Event {
    parse_event(src, &voc()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn g(names: &[&str]) -> Group {
    Group::of(names)
}

/// The material one instance of every schema is built from.
pub struct Material {
    pub phi: Formula,
    pub psi: Formula,
    pub theta: Formula,
    pub x: Term,
    pub y: Term,
    pub c: Term,
    pub a: Group,
    pub b: Group,
    pub sg: Supergroup,
    /// A formula and a term located within `a`.
    pub local_phi: Formula,
    pub local_x: Term,
}

pub fn materials() -> Vec<Material> {
    vec![
        Material {
            phi: f("p"),
            psi: f("x@a = 0"),
            theta: f("top"),
            x: t("x@a"),
            y: t("y@b"),
            c: t("0"),
            a: g(&["a"]),
            b: g(&["a", "b"]),
            sg: Supergroup::new([g(&["a"]), g(&["b"])]).unwrap(),
            local_phi: f("x@a = 0"),
            local_x: t("f(x@a)"),
        },
        Material {
            phi: f("y@b = 1"),
            psi: f("P(x@a)"),
            theta: f("p"),
            x: t("y@b"),
            y: t("f(x@a)"),
            c: t("1"),
            a: g(&["b"]),
            b: g(&["a", "b"]),
            sg: Supergroup::new([g(&["a", "b"])]).unwrap(),
            local_phi: f("K{b} (y@b = 1)"),
            local_x: t("y@b"),
        },
        Material {
            phi: f("K{a} p"),
            psi: f("x@a != y@b"),
            theta: f("x@a = 0"),
            x: t("f(y@b)"),
            y: t("0"),
            c: t("undef"),
            a: g(&["a", "b"]),
            b: g(&["a", "b"]),
            sg: Supergroup::new([g(&["a"]), g(&["a", "b"])]).unwrap(),
            local_phi: f("x@a = y@b"),
            local_x: t("if p then x@a else y@b"),
        },
    ]
}

pub struct Schema {
    pub group: &'static str,
    pub name: &'static str,
    pub instances: Vec<Formula>,
}

fn schema(group: &'static str, name: &'static str, build: impl Fn(&Material) -> Formula) -> Schema {
    Schema { group, name, instances: materials().iter().map(build).collect() }
}

fn desc(x: &Term, a: &Group, phi: &Formula) -> Term {
    Term::desc(x.clone(), a.clone(), phi.clone())
}

fn eq(x: Term, y: Term) -> Formula {
    Formula::eq(x, y)
}

fn not(phi: Formula) -> Formula {
    Formula::not(phi)
}

fn and(phi: Formula, psi: Formula) -> Formula {
    Formula::and(phi, psi)
}

/// Every schema of the static axiom groups and the listed theorems.
pub fn static_schemas() -> Vec<Schema> {
    let k = |a: &Group, phi: Formula| Formula::know(a.clone(), phi);
    let c = |m: &Material, phi: Formula| Formula::common(m.sg.clone(), m.theta.clone(), phi);
    let every_k = |m: &Material, phi: &Formula| {
        conj(m.sg.groups().map(|a| know_cond(a, &m.theta, phi.clone())))
    };
    vec![
        schema("I", "Propositional-1", |m| implies(m.phi.clone(), implies(m.psi.clone(), m.phi.clone()))),
        schema("I", "Propositional-2", |m| {
            let (p, q, r) = (&m.phi, &m.psi, &m.theta);
            implies(
                implies(p.clone(), implies(q.clone(), r.clone())),
                implies(implies(p.clone(), q.clone()), implies(p.clone(), r.clone())),
            )
        }),
        schema("I", "Propositional-3", |m| {
            implies(implies(not(m.phi.clone()), not(m.psi.clone())), implies(m.psi.clone(), m.phi.clone()))
        }),
        schema("II", "Reflexivity", |m| eq(m.x.clone(), m.x.clone())),
        schema("II", "Indiscernability", |m| {
            let p = |x: &Term| Formula::pred("P", vec![x.clone()]);
            implies(eq(m.x.clone(), m.y.clone()), iff(p(&m.x), p(&m.y)))
        }),
        schema("II", "Functionality", |m| {
            let fx = |x: &Term| Term::app("f", vec![x.clone()]);
            implies(eq(m.x.clone(), m.y.clone()), eq(fx(&m.x), fx(&m.y)))
        }),
        schema("II", "Definition by Cases", |m| {
            let ite = Term::ite(m.x.clone(), m.phi.clone(), m.y.clone());
            and(
                implies(m.phi.clone(), eq(ite.clone(), m.x.clone())),
                implies(not(m.phi.clone()), eq(ite, m.y.clone())),
            )
        }),
        schema("III", "Necessitation", |m| k(&m.a, implies(m.phi.clone(), m.phi.clone()))),
        schema("III", "Distribution", |m| {
            implies(
                k(&m.a, implies(m.phi.clone(), m.psi.clone())),
                implies(k(&m.a, m.phi.clone()), k(&m.a, m.psi.clone())),
            )
        }),
        schema("III", "Veracity", |m| implies(k(&m.a, m.phi.clone()), m.phi.clone())),
        schema("III", "Positive Introspection", |m| {
            implies(k(&m.a, m.phi.clone()), k(&m.a, k(&m.a, m.phi.clone())))
        }),
        schema("III", "Negative Introspection", |m| {
            implies(not(k(&m.a, m.phi.clone())), k(&m.a, not(k(&m.a, m.phi.clone()))))
        }),
        schema("III", "Group-Monotonicity", |m| implies(k(&m.a, m.phi.clone()), k(&m.b, m.phi.clone()))),
        schema("IV", "C-Necessitation", |m| c(m, implies(m.phi.clone(), m.phi.clone()))),
        schema("IV", "C-Distribution", |m| {
            implies(
                c(m, implies(m.phi.clone(), m.psi.clone())),
                implies(c(m, m.phi.clone()), c(m, m.psi.clone())),
            )
        }),
        schema("IV", "Fixed Point", |m| {
            let cp = c(m, m.phi.clone());
            implies(cp.clone(), and(m.phi.clone(), every_k(m, &cp)))
        }),
        schema("IV", "Induction", |m| {
            implies(
                c(m, implies(m.phi.clone(), every_k(m, &m.phi))),
                implies(m.phi.clone(), c(m, m.phi.clone())),
            )
        }),
        schema("V", "Non-vacuous Knowledge of Values", |m| {
            implies(
                defined(desc(&m.x, &m.a, &m.phi)),
                and(know_value(&m.a, &m.phi, &m.x), possible(&m.a, m.phi.clone())),
            )
        }),
        schema("V", "Knowledge of Constants and Local Variables", |m| {
            let agent = m.a.agents().next().unwrap().clone();
            let own = Group::singleton(agent.clone());
            let var = Term::var(if agent.name() == "a" { "x" } else { "y" }, agent.name());
            and(know_value(&own, &f("top"), &m.c), know_value(&own, &f("top"), &var))
        }),
        schema("V", "Knowledge of Hypothetical Values", |m| {
            know_value(&m.a, &f("top"), &desc(&m.x, &m.a, &m.phi))
        }),
        schema("V", "Knowledge of Predicates", |m| {
            let xs = [m.x.clone(), m.y.clone()];
            let p = Formula::pred("=", xs.to_vec());
            let q = Formula::pred("P", vec![m.x.clone()]);
            and(
                implies(know_values(&m.a, &f("top"), &xs), implies(p.clone(), k(&m.a, p))),
                implies(know_values(&m.a, &f("top"), &xs[..1]), implies(q.clone(), k(&m.a, q))),
            )
        }),
        schema("V", "Knowledge of Functions", |m| {
            implies(
                know_values(&m.a, &m.phi, &[m.x.clone()]),
                know_value(&m.a, &m.phi, &Term::app("f", vec![m.x.clone()])),
            )
        }),
        schema("V", "Known Equality", |m| {
            implies(
                know_cond(&m.a, &m.theta, eq(m.x.clone(), m.y.clone())),
                implies(know_value(&m.a, &m.theta, &m.x), know_value(&m.a, &m.theta, &m.y)),
            )
        }),
        schema("V", "Anti-Monotonicity", |m| {
            implies(
                k(&m.a, implies(m.phi.clone(), m.theta.clone())),
                implies(know_value(&m.a, &m.theta, &m.x), know_value(&m.a, &m.phi, &m.x)),
            )
        }),
        schema("Th", "Strong Introspection", |m| {
            let a = location_group(&agents_of_formula(&m.local_phi).unwrap());
            implies(m.local_phi.clone(), k(&a, m.local_phi.clone()))
        }),
        schema("Th", "Term Introspection", |m| {
            let a = location_group(&agents_of_term(&m.local_x).unwrap());
            know_value(&a, &f("top"), &m.local_x)
        }),
        schema("Th", "Explicit Value Introspection", |m| {
            let a = location_group(&agents_of_term(&m.local_x).unwrap());
            implies(possible(&a, m.phi.clone()), eq(desc(&m.local_x, &a, &m.phi), m.local_x.clone()))
        }),
        schema("Th", "Conditional Knowledge", |m| {
            iff(know_cond(&m.a, &m.phi, m.psi.clone()), k(&m.a, implies(m.phi.clone(), m.psi.clone())))
        }),
        schema("Th", "Non-Vacuous Knowledge", |m| {
            implies(
                possible(&m.a, m.phi.clone()),
                iff(know_value(&m.a, &m.phi, &m.x), defined(desc(&m.x, &m.a, &m.phi))),
            )
        }),
        schema("Th", "True Conditional Value", |m| {
            let d = desc(&m.x, &m.a, &m.phi);
            implies(and(defined(d.clone()), m.phi.clone()), eq(d, m.x.clone()))
        }),
        schema("Th", "Known Conditional Equality", |m| {
            implies(
                k(&m.a, implies(m.phi.clone(), eq(m.x.clone(), m.y.clone()))),
                eq(desc(&m.x, &m.a, &m.phi), desc(&m.y, &m.a, &m.phi)),
            )
        }),
        schema("Th", "Defined Conditional Value", |m| {
            // The side condition asks for `y` located within `A`.
            let a = m.a.union(&location_group(&agents_of_term(&m.local_x).unwrap()));
            let y = &m.local_x;
            implies(
                conj([
                    k(&a, implies(m.phi.clone(), eq(m.x.clone(), y.clone()))),
                    m.phi.clone(),
                    defined(m.x.clone()),
                ]),
                defined(desc(&m.x, &a, &m.phi)),
            )
        }),
    ]
}

/// The smallest group containing a location set, or `{a}` if it is empty.
fn location_group(agents: &dlkv::lang::LocationSet) -> Group {
    Group::new(agents.iter().cloned()).unwrap_or_else(|_| g(&["a"]))
}

/// One instance of a dynamic axiom.
pub enum DynamicInstance {
    /// `lhs ↔ rhs`, with `lhs` of the form `[e]…`.
    Equivalence { lhs: Formula, rhs: Formula },
    /// `pre → lhs = rhs`, with `lhs` of the form `e(…)`.
    TermEquation { pre: Formula, lhs: Term, rhs: Term },
    /// A formula that must be valid.
    Valid(Formula),
}

impl DynamicInstance {
    /// The axiom instance as a single formula.
    pub fn formula(&self) -> Formula {
        match self {
            DynamicInstance::Equivalence { lhs, rhs } => iff(lhs.clone(), rhs.clone()),
            DynamicInstance::TermEquation { pre, lhs, rhs } => {
                implies(pre.clone(), Formula::eq(lhs.clone(), rhs.clone()))
            }
            DynamicInstance::Valid(phi) => phi.clone(),
        }
    }
}

pub struct DynamicSchema {
    pub group: &'static str,
    pub name: &'static str,
    pub instances: Vec<DynamicInstance>,
}

pub fn events() -> Vec<Event> {
    vec![
        ev("!(p)"),
        ev("!(a:b)"),
        ev("!(x@a := f(x@a))"),
        ev("!(~K{b} (x@a = 0), b:a, y@b := 0)"),
    ]
}

fn dyn_schema(
    group: &'static str,
    name: &'static str,
    build: impl Fn(&Event, &Material) -> DynamicInstance,
) -> DynamicSchema {
    let instances = events()
        .iter()
        .zip(materials().iter().cycle().take(4))
        .map(|(e, m)| build(e, m))
        .collect();
    DynamicSchema { group, name, instances }
}

pub fn dynamic_schemas() -> Vec<DynamicSchema> {
    use DynamicInstance::*;
    let after = |e: &Event, phi: Formula| Formula::after(e.clone(), phi);
    let apply = |e: &Event, x: Term| Term::after(e.clone(), x);
    vec![
        dyn_schema("VI", "[e]-Necessitation", |e, m| Valid(after(e, implies(m.phi.clone(), m.phi.clone())))),
        dyn_schema("VI", "[e]-Distribution", |e, m| {
            Valid(implies(
                after(e, implies(m.phi.clone(), m.psi.clone())),
                implies(after(e, m.phi.clone()), after(e, m.psi.clone())),
            ))
        }),
        dyn_schema("VI", "Atomic Change", |e, m| Equivalence {
            lhs: after(e, Formula::pred("P", vec![m.x.clone()])),
            rhs: implies(e.precondition(), Formula::pred("P", vec![apply(e, m.x.clone())])),
        }),
        dyn_schema("VI", "Partial Functionality", |e, m| Equivalence {
            lhs: after(e, not(m.phi.clone())),
            rhs: implies(e.precondition(), not(after(e, m.phi.clone()))),
        }),
        dyn_schema("VI", "Knowledge Update", |e, m| Equivalence {
            lhs: after(e, Formula::know(m.a.clone(), m.psi.clone())),
            rhs: implies(
                e.precondition(),
                Formula::know(dlkv::lang::extend_access(e, &m.a), after(e, m.psi.clone())),
            ),
        }),
        dyn_schema("VI", "C-Update", |e, m| Equivalence {
            lhs: after(e, Formula::common(m.sg.clone(), m.theta.clone(), m.psi.clone())),
            rhs: implies(
                e.precondition(),
                Formula::common(
                    dlkv::lang::extend_access_super(e, &m.sg),
                    diamond(e, m.theta.clone()),
                    after(e, m.psi.clone()),
                ),
            ),
        }),
        dyn_schema("VII", "Survival of Value", |e, m| {
            Valid(implies(defined(apply(e, m.x.clone())), e.precondition()))
        }),
        dyn_schema("VII", "Preservation of Constants", |e, m| TermEquation {
            pre: e.precondition(),
            lhs: apply(e, m.c.clone()),
            rhs: m.c.clone(),
        }),
        dyn_schema("VII", "Change of Basic Values", |e, _| {
            let v = dlkv::lang::BasicVar::new("x", "a");
            TermEquation { pre: e.precondition(), lhs: apply(e, Term::Var(v.clone())), rhs: e.post_of(&v) }
        }),
        dyn_schema("VII", "Change of Disjunctive Terms", |e, m| TermEquation {
            pre: e.precondition(),
            lhs: apply(e, Term::ite(m.x.clone(), m.phi.clone(), m.y.clone())),
            rhs: Term::ite(apply(e, m.x.clone()), diamond(e, m.phi.clone()), apply(e, m.y.clone())),
        }),
        dyn_schema("VII", "Change of Functional Terms", |e, m| TermEquation {
            pre: e.precondition(),
            lhs: apply(e, Term::app("f", vec![m.x.clone()])),
            rhs: Term::app("f", vec![apply(e, m.x.clone())]),
        }),
        dyn_schema("VII", "Change of Hypothetical Values", |e, m| TermEquation {
            pre: e.precondition(),
            lhs: apply(e, desc(&m.x, &m.a, &m.phi)),
            rhs: Term::desc(apply(e, m.x.clone()), dlkv::lang::extend_access(e, &m.a), diamond(e, m.phi.clone())),
        }),
    ]
}
