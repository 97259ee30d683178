//! Rewriting dynamic expressions into static ones.
//!
//! Reduction is innermost-first: an event is reduced before it is applied,
//! the expression it is applied to is reduced next, and only then is the now
//! static event pushed through the now static expression one constructor at
//! a time. Every pushed result is guarded by the reduced precondition `ρ`,
//! which is computed once per event.
//!
//! Each push is recorded as a [`ReductionStep`]. Paths address the
//! expression being rewritten as it stands when the step fires; children are
//! numbered in constructor order (`x|_φ y` is `x, φ, y`; `x_A^φ` is `x, φ`;
//! `C^θ φ` is `θ, φ`; `[e]φ` and `e(x)` are `e, φ`), and the children of an
//! event are its preconditions followed by its post terms, in the order they
//! had before the event was reduced.

mod simplify;
mod steplog;

use crate::lang::{derived, Event, Formula, Group, Supergroup, Term};

pub use simplify::{simplify_formula, simplify_term};
pub use steplog::{parse_step, StepParseError};

/// The rewrite applied by one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    AtomicChange,
    PartialFunctionality,
    Conjunction,
    KnowledgeUpdate,
    CommonUpdate,
    PreservationOfConstants,
    ChangeOfBasicValues,
    ChangeOfDisjunctiveTerms,
    ChangeOfFunctionalTerms,
    ChangeOfHypotheticalValues,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::AtomicChange,
        Rule::PartialFunctionality,
        Rule::Conjunction,
        Rule::KnowledgeUpdate,
        Rule::CommonUpdate,
        Rule::PreservationOfConstants,
        Rule::ChangeOfBasicValues,
        Rule::ChangeOfDisjunctiveTerms,
        Rule::ChangeOfFunctionalTerms,
        Rule::ChangeOfHypotheticalValues,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AtomicChange => "atomic-change",
            Rule::PartialFunctionality => "partial-functionality",
            Rule::Conjunction => "conjunction",
            Rule::KnowledgeUpdate => "knowledge-update",
            Rule::CommonUpdate => "common-update",
            Rule::PreservationOfConstants => "preservation-of-constants",
            Rule::ChangeOfBasicValues => "change-of-basic-values",
            Rule::ChangeOfDisjunctiveTerms => "change-of-disjunctive-terms",
            Rule::ChangeOfFunctionalTerms => "change-of-functional-terms",
            Rule::ChangeOfHypotheticalValues => "change-of-hypothetical-values",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    /// Whether the rule rewrites a term `e(x)` rather than a formula `[e]φ`.
    pub fn on_terms(self) -> bool {
        matches!(
            self,
            Rule::PreservationOfConstants
                | Rule::ChangeOfBasicValues
                | Rule::ChangeOfDisjunctiveTerms
                | Rule::ChangeOfFunctionalTerms
                | Rule::ChangeOfHypotheticalValues
        )
    }
}

/// A formula or a term, as rewritten by a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Formula(Formula),
    Term(Term),
}

impl Expr {
    /// Sizes of the expressions that events are applied to.
    fn dynamic_bodies(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self {
            Expr::Formula(f) => bodies_formula(f, &mut out),
            Expr::Term(t) => bodies_term(t, &mut out),
        }
        out
    }
}

fn bodies_formula(f: &Formula, out: &mut Vec<usize>) {
    match f {
        Formula::Pred(_, args) => args.iter().for_each(|a| bodies_term(a, out)),
        Formula::Not(p) | Formula::Know(_, p) => bodies_formula(p, out),
        Formula::And(p, q) | Formula::Common(_, p, q) => {
            bodies_formula(p, out);
            bodies_formula(q, out);
        }
        Formula::After(e, p) => {
            out.push(p.size());
            bodies_event(e, out);
            bodies_formula(p, out);
        }
    }
}

fn bodies_term(t: &Term, out: &mut Vec<usize>) {
    match t {
        Term::Const(_) | Term::Var(_) => {}
        Term::Ite(x, c, y) => {
            bodies_term(x, out);
            bodies_formula(c, out);
            bodies_term(y, out);
        }
        Term::App(_, args) => args.iter().for_each(|a| bodies_term(a, out)),
        Term::Desc(x, _, c) => {
            bodies_term(x, out);
            bodies_formula(c, out);
        }
        Term::After(e, x) => {
            out.push(x.size());
            bodies_event(e, out);
            bodies_term(x, out);
        }
    }
}

fn bodies_event(e: &Event, out: &mut Vec<usize>) {
    e.preconditions().iter().for_each(|f| bodies_formula(f, out));
    e.post_entries().values().for_each(|t| bodies_term(t, out));
}

/// One application of a rewrite rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub before: Expr,
    pub after: Expr,
}

impl ReductionStep {
    /// Every event in `after` is applied to something strictly smaller than
    /// what the rewritten event was applied to.
    pub fn decreases(&self) -> bool {
        let Some(&bound) = self.before.dynamic_bodies().first() else {
            return false;
        };
        self.after.dynamic_bodies().iter().all(|&n| n < bound)
    }
}

/// A reduced expression together with the steps that produced it.
#[derive(Clone, Debug)]
pub struct Reduced<T> {
    pub value: T,
    pub steps: Vec<ReductionStep>,
}

/// Expressions whose dynamic constructors can be detected by a scan.
pub trait Static {
    fn is_static(&self) -> bool;
}

impl Static for Formula {
    fn is_static(&self) -> bool {
        Formula::is_static(self)
    }
}

impl Static for Term {
    fn is_static(&self) -> bool {
        Term::is_static(self)
    }
}

impl Static for Event {
    fn is_static(&self) -> bool {
        Event::is_static(self)
    }
}

impl<T: Static> Reduced<T> {
    /// Scans the result for remaining dynamic constructors.
    pub fn is_static(&self) -> bool {
        self.value.is_static()
    }
}

pub fn reduce_formula(phi: &Formula) -> Reduced<Formula> {
    let mut rw = Rewriter::logging();
    let value = rw.formula(phi, &mut Vec::new());
    Reduced { value, steps: rw.log.unwrap_or_default() }
}

pub fn reduce_term(x: &Term) -> Reduced<Term> {
    let mut rw = Rewriter::logging();
    let value = rw.term(x, &mut Vec::new());
    Reduced { value, steps: rw.log.unwrap_or_default() }
}

pub fn reduce_event(e: &Event) -> Reduced<Event> {
    let mut rw = Rewriter::logging();
    let value = rw.event(e, &mut Vec::new());
    Reduced { value, steps: rw.log.unwrap_or_default() }
}

/// [`reduce_formula`] without the step log.
pub fn static_formula(phi: &Formula) -> Formula {
    Rewriter { log: None }.formula(phi, &mut Vec::new())
}

/// [`reduce_term`] without the step log.
pub fn static_term(x: &Term) -> Term {
    Rewriter { log: None }.term(x, &mut Vec::new())
}

/// `e(A)`: everyone whose data some member of `A` reads after `e`.
pub fn event_group(e: &Event, group: &Group) -> Group {
    group
        .agents()
        .map(|a| e.access_of(a))
        .reduce(|g, h| g.union(&h))
        .expect("groups are non-empty")
}

/// `e[𝔄]`.
pub fn event_supergroup(e: &Event, sg: &Supergroup) -> Supergroup {
    Supergroup::new(sg.groups().map(|g| event_group(e, g))).expect("supergroups are non-empty")
}

/// `x|_ρ↑`: `x` where `ρ` holds, undefined elsewhere.
fn guard(x: Term, rho: &Formula) -> Term {
    Term::ite(x, rho.clone(), Term::undef())
}

struct Rewriter {
    log: Option<Vec<ReductionStep>>,
}

fn at<R>(path: &mut Vec<usize>, steps: &[usize], f: impl FnOnce(&mut Vec<usize>) -> R) -> R {
    let n = path.len();
    path.extend_from_slice(steps);
    let r = f(path);
    path.truncate(n);
    r
}

impl Rewriter {
    fn logging() -> Self {
        Rewriter { log: Some(Vec::new()) }
    }

    fn record(&mut self, rule: Rule, path: &[usize], before: impl FnOnce() -> Expr, after: impl FnOnce() -> Expr) {
        if let Some(log) = &mut self.log {
            log.push(ReductionStep {
                rule,
                path: path.to_vec(),
                before: before(),
                after: after(),
            });
        }
    }

    fn formula(&mut self, phi: &Formula, path: &mut Vec<usize>) -> Formula {
        if phi.is_static() {
            return phi.clone();
        }
        match phi {
            Formula::Pred(p, args) => Formula::Pred(p.clone(), self.terms(args, path, 0)),
            Formula::Not(q) => Formula::not(at(path, &[0], |p| self.formula(q, p))),
            Formula::And(a, b) => {
                let a = at(path, &[0], |p| self.formula(a, p));
                let b = at(path, &[1], |p| self.formula(b, p));
                Formula::and(a, b)
            }
            Formula::Know(g, q) => Formula::know(g.clone(), at(path, &[0], |p| self.formula(q, p))),
            Formula::Common(sg, c, q) => {
                let c = at(path, &[0], |p| self.formula(c, p));
                let q = at(path, &[1], |p| self.formula(q, p));
                Formula::common(sg.clone(), c, q)
            }
            Formula::After(e, q) => {
                let e = at(path, &[0], |p| self.event(e, p));
                let q = at(path, &[1], |p| self.formula(q, p));
                let rho = e.precondition();
                self.push_formula(&e, &rho, &q, path)
            }
        }
    }

    fn terms(&mut self, xs: &[Term], path: &mut Vec<usize>, offset: usize) -> Vec<Term> {
        xs.iter()
            .enumerate()
            .map(|(i, x)| at(path, &[offset + i], |p| self.term(x, p)))
            .collect()
    }

    fn term(&mut self, x: &Term, path: &mut Vec<usize>) -> Term {
        if x.is_static() {
            return x.clone();
        }
        match x {
            Term::Const(_) | Term::Var(_) => x.clone(),
            Term::Ite(y, c, z) => {
                let y = at(path, &[0], |p| self.term(y, p));
                let c = at(path, &[1], |p| self.formula(c, p));
                let z = at(path, &[2], |p| self.term(z, p));
                Term::ite(y, c, z)
            }
            Term::App(f, args) => Term::App(f.clone(), self.terms(args, path, 0)),
            Term::Desc(y, g, c) => {
                let y = at(path, &[0], |p| self.term(y, p));
                let c = at(path, &[1], |p| self.formula(c, p));
                Term::desc(y, g.clone(), c)
            }
            Term::After(e, y) => {
                let e = at(path, &[0], |p| self.event(e, p));
                let y = at(path, &[1], |p| self.term(y, p));
                let rho = e.precondition();
                self.push_term(&e, &rho, &y, path)
            }
        }
    }

    fn event(&mut self, e: &Event, path: &mut Vec<usize>) -> Event {
        if e.is_static() {
            return e.clone();
        }
        let npre = e.preconditions().len();
        let pre: Vec<Formula> = e
            .preconditions()
            .iter()
            .enumerate()
            .map(|(i, f)| at(path, &[i], |p| self.formula(f, p)))
            .collect();
        let post: Vec<_> = e
            .post_entries()
            .iter()
            .enumerate()
            .map(|(i, (v, t))| (v.clone(), at(path, &[npre + i], |p| self.term(t, p))))
            .collect();
        Event::new(pre, e.access_entries().clone(), post)
    }

    /// `[e]φ` for static `e` and `φ`.
    fn push_formula(&mut self, e: &Event, rho: &Formula, phi: &Formula, path: &mut Vec<usize>) -> Formula {
        let box_of = |q: &Formula| Formula::after(e.clone(), q.clone());
        let before = || Expr::Formula(box_of(phi));
        match phi {
            Formula::Pred(p, args) => {
                self.record(Rule::AtomicChange, path, before, || {
                    let args = args.iter().map(|a| Term::after(e.clone(), a.clone())).collect();
                    Expr::Formula(derived::implies(rho.clone(), Formula::pred(p.clone(), args)))
                });
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| at(path, &[0, 1, 0, i], |p| self.push_term(e, rho, a, p)))
                    .collect();
                derived::implies(rho.clone(), Formula::Pred(p.clone(), args))
            }
            Formula::Not(q) => {
                self.record(Rule::PartialFunctionality, path, before, || {
                    Expr::Formula(derived::implies(rho.clone(), Formula::not(box_of(q))))
                });
                let q = at(path, &[0, 1, 0, 0], |p| self.push_formula(e, rho, q, p));
                derived::implies(rho.clone(), Formula::not(q))
            }
            Formula::And(a, b) => {
                self.record(Rule::Conjunction, path, before, || {
                    Expr::Formula(Formula::and(box_of(a), box_of(b)))
                });
                let a = at(path, &[0], |p| self.push_formula(e, rho, a, p));
                let b = at(path, &[1], |p| self.push_formula(e, rho, b, p));
                Formula::and(a, b)
            }
            Formula::Know(g, q) => {
                let eg = event_group(e, g);
                self.record(Rule::KnowledgeUpdate, path, before, || {
                    Expr::Formula(derived::implies(rho.clone(), Formula::know(eg.clone(), box_of(q))))
                });
                let q = at(path, &[0, 1, 0, 0], |p| self.push_formula(e, rho, q, p));
                derived::implies(rho.clone(), Formula::know(eg, q))
            }
            Formula::Common(sg, c, q) => {
                let esg = event_supergroup(e, sg);
                self.record(Rule::CommonUpdate, path, before, || {
                    let cond = Formula::and(rho.clone(), box_of(c));
                    Expr::Formula(derived::implies(rho.clone(), Formula::common(esg.clone(), cond, box_of(q))))
                });
                let c = at(path, &[0, 1, 0, 0, 1], |p| self.push_formula(e, rho, c, p));
                let q = at(path, &[0, 1, 0, 1], |p| self.push_formula(e, rho, q, p));
                derived::implies(rho.clone(), Formula::common(esg, Formula::and(rho.clone(), c), q))
            }
            Formula::After(..) => unreachable!("pushed expressions are static"),
        }
    }

    /// `e(x)` for static `e` and `x`.
    fn push_term(&mut self, e: &Event, rho: &Formula, x: &Term, path: &mut Vec<usize>) -> Term {
        let app = |y: &Term| Term::after(e.clone(), y.clone());
        let box_of = |q: &Formula| Formula::after(e.clone(), q.clone());
        let before = || Expr::Term(app(x));
        match x {
            Term::Const(_) => {
                let out = guard(x.clone(), rho);
                self.record(Rule::PreservationOfConstants, path, before, || Expr::Term(out.clone()));
                out
            }
            Term::Var(v) => {
                let out = guard(e.post_of(v), rho);
                self.record(Rule::ChangeOfBasicValues, path, before, || Expr::Term(out.clone()));
                out
            }
            Term::Ite(y, c, z) => {
                self.record(Rule::ChangeOfDisjunctiveTerms, path, before, || {
                    let cond = Formula::and(rho.clone(), box_of(c));
                    Expr::Term(guard(Term::ite(app(y), cond, app(z)), rho))
                });
                let y = at(path, &[0, 0], |p| self.push_term(e, rho, y, p));
                let c = at(path, &[0, 1, 1], |p| self.push_formula(e, rho, c, p));
                let z = at(path, &[0, 2], |p| self.push_term(e, rho, z, p));
                guard(Term::ite(y, Formula::and(rho.clone(), c), z), rho)
            }
            Term::App(f, args) => {
                self.record(Rule::ChangeOfFunctionalTerms, path, before, || {
                    Expr::Term(guard(Term::app(f.clone(), args.iter().map(app).collect()), rho))
                });
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| at(path, &[0, i], |p| self.push_term(e, rho, a, p)))
                    .collect();
                guard(Term::App(f.clone(), args), rho)
            }
            Term::Desc(y, g, c) => {
                let eg = event_group(e, g);
                self.record(Rule::ChangeOfHypotheticalValues, path, before, || {
                    let cond = Formula::and(rho.clone(), box_of(c));
                    Expr::Term(guard(Term::desc(app(y), eg.clone(), cond), rho))
                });
                let y = at(path, &[0, 0], |p| self.push_term(e, rho, y, p));
                let c = at(path, &[0, 1, 1], |p| self.push_formula(e, rho, c, p));
                guard(Term::desc(y, eg, Formula::and(rho.clone(), c)), rho)
            }
            Term::After(..) => unreachable!("pushed expressions are static"),
        }
    }
}

#[cfg(test)]
mod tests;
