//! Surface syntax: the primitive grammar plus every abbreviation.
//!
//! The parser produces these trees; [`SFormula::normalize`] expands them into
//! the primitive core. [`SFormula::lift`] embeds a primitive tree unchanged,
//! so normalizing a lifted tree gives back the same tree.

use super::{derived, Agent, BasicVar, Event, Formula, Group, Supergroup, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum STerm {
    Const(String),
    Var(BasicVar),
    Ite(Box<STerm>, Box<SFormula>, Box<STerm>),
    App(String, Vec<STerm>),
    Desc(Box<STerm>, Group, Box<SFormula>),
    After(Box<SEvent>, Box<STerm>),
    /// `?_φ`.
    Test(Box<SFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SFormula {
    Pred(String, Vec<STerm>),
    Top,
    Bot,
    Not(Box<SFormula>),
    And(Box<SFormula>, Box<SFormula>),
    Or(Box<SFormula>, Box<SFormula>),
    Implies(Box<SFormula>, Box<SFormula>),
    Iff(Box<SFormula>, Box<SFormula>),
    /// `K_A φ` or `K_A^θ φ`.
    Know(Group, Option<Box<SFormula>>, Box<SFormula>),
    /// `⟨K_A⟩φ` or `⟨K_A^θ⟩φ`.
    Possible(Group, Option<Box<SFormula>>, Box<SFormula>),
    /// `K_A^θ x̄`.
    KnowValue(Group, Option<Box<SFormula>>, Vec<STerm>),
    /// `C_𝔄^θ φ`; a missing condition is `⊤`.
    Common(Supergroup, Option<Box<SFormula>>, Box<SFormula>),
    /// `⟨C_𝔄^θ⟩φ`.
    PossibleCommon(Supergroup, Option<Box<SFormula>>, Box<SFormula>),
    /// `C_𝔄^θ x̄`.
    CommonValue(Supergroup, Option<Box<SFormula>>, Vec<STerm>),
    Box(Box<SEvent>, Box<SFormula>),
    Diamond(Box<SEvent>, Box<SFormula>),
    /// `x̄↓`.
    Defined(Vec<STerm>),
    /// `x↑`.
    Undefined(Box<STerm>),
}

/// An event written either in full or through one of the sugar forms.
///
/// `know_assigned` asks normalization to add `K_a t` to the preconditions for
/// every assignment `v_a := t`, as the assignment sugar does.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SEvent {
    pub pre: Vec<SFormula>,
    pub access: Vec<(Agent, Group)>,
    pub post: Vec<(BasicVar, STerm)>,
    pub know_assigned: bool,
}

impl STerm {
    pub fn normalize(&self) -> Term {
        match self {
            STerm::Const(c) => Term::Const(c.clone()),
            STerm::Var(v) => Term::Var(v.clone()),
            STerm::Ite(x, c, y) => Term::ite(x.normalize(), c.normalize(), y.normalize()),
            STerm::App(f, args) => Term::App(f.clone(), args.iter().map(STerm::normalize).collect()),
            STerm::Desc(x, g, c) => Term::desc(x.normalize(), g.clone(), c.normalize()),
            STerm::After(e, x) => Term::after(e.normalize(), x.normalize()),
            STerm::Test(c) => derived::test(c.normalize()),
        }
    }

    pub fn lift(t: &Term) -> STerm {
        match t {
            Term::Const(c) => STerm::Const(c.clone()),
            Term::Var(v) => STerm::Var(v.clone()),
            Term::Ite(x, c, y) => STerm::Ite(
                Box::new(STerm::lift(x)),
                Box::new(SFormula::lift(c)),
                Box::new(STerm::lift(y)),
            ),
            Term::App(f, args) => STerm::App(f.clone(), args.iter().map(STerm::lift).collect()),
            Term::Desc(x, g, c) => {
                STerm::Desc(Box::new(STerm::lift(x)), g.clone(), Box::new(SFormula::lift(c)))
            }
            Term::After(e, x) => STerm::After(Box::new(SEvent::lift(e)), Box::new(STerm::lift(x))),
        }
    }
}

fn cond(theta: &Option<Box<SFormula>>) -> Formula {
    theta.as_ref().map_or_else(derived::top, |t| t.normalize())
}

impl SFormula {
    pub fn normalize(&self) -> Formula {
        match self {
            SFormula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(STerm::normalize).collect())
            }
            SFormula::Top => derived::top(),
            SFormula::Bot => derived::bot(),
            SFormula::Not(p) => Formula::not(p.normalize()),
            SFormula::And(p, q) => Formula::and(p.normalize(), q.normalize()),
            SFormula::Or(p, q) => derived::or(p.normalize(), q.normalize()),
            SFormula::Implies(p, q) => derived::implies(p.normalize(), q.normalize()),
            SFormula::Iff(p, q) => derived::iff(p.normalize(), q.normalize()),
            SFormula::Know(g, None, p) => Formula::know(g.clone(), p.normalize()),
            SFormula::Know(g, Some(t), p) => derived::know_cond(g, &t.normalize(), p.normalize()),
            SFormula::Possible(g, None, p) => derived::possible(g, p.normalize()),
            SFormula::Possible(g, Some(t), p) => {
                derived::possible_cond(g, &t.normalize(), p.normalize())
            }
            SFormula::KnowValue(g, t, xs) => {
                let xs: Vec<Term> = xs.iter().map(STerm::normalize).collect();
                derived::know_values(g, &cond(t), &xs)
            }
            SFormula::Common(sg, t, p) => Formula::common(sg.clone(), cond(t), p.normalize()),
            SFormula::PossibleCommon(sg, t, p) => {
                derived::possible_common(sg, &cond(t), p.normalize())
            }
            SFormula::CommonValue(sg, t, xs) => {
                let xs: Vec<Term> = xs.iter().map(STerm::normalize).collect();
                derived::common_values(sg, &cond(t), &xs)
            }
            SFormula::Box(e, p) => Formula::after(e.normalize(), p.normalize()),
            SFormula::Diamond(e, p) => derived::diamond(&e.normalize(), p.normalize()),
            SFormula::Defined(xs) => derived::defined_all(xs.iter().map(STerm::normalize)),
            SFormula::Undefined(x) => derived::undefined(x.normalize()),
        }
    }

    pub fn lift(phi: &Formula) -> SFormula {
        match phi {
            Formula::Pred(p, args) => SFormula::Pred(p.clone(), args.iter().map(STerm::lift).collect()),
            Formula::Not(p) => SFormula::Not(Box::new(SFormula::lift(p))),
            Formula::And(p, q) => {
                SFormula::And(Box::new(SFormula::lift(p)), Box::new(SFormula::lift(q)))
            }
            Formula::Know(g, p) => SFormula::Know(g.clone(), None, Box::new(SFormula::lift(p))),
            Formula::Common(sg, c, p) => SFormula::Common(
                sg.clone(),
                Some(Box::new(SFormula::lift(c))),
                Box::new(SFormula::lift(p)),
            ),
            Formula::After(e, p) => {
                SFormula::Box(Box::new(SEvent::lift(e)), Box::new(SFormula::lift(p)))
            }
        }
    }

    /// Whether the tree uses only primitive constructors.
    pub fn is_primitive(&self) -> bool {
        match self {
            SFormula::Pred(_, args) => args.iter().all(STerm::is_primitive),
            SFormula::Not(p) => p.is_primitive(),
            SFormula::And(p, q) => p.is_primitive() && q.is_primitive(),
            SFormula::Know(_, None, p) => p.is_primitive(),
            SFormula::Common(_, Some(c), p) => c.is_primitive() && p.is_primitive(),
            SFormula::Box(e, p) => e.is_primitive() && p.is_primitive(),
            _ => false,
        }
    }
}

impl STerm {
    pub fn is_primitive(&self) -> bool {
        match self {
            STerm::Const(_) | STerm::Var(_) => true,
            STerm::Ite(x, c, y) => x.is_primitive() && c.is_primitive() && y.is_primitive(),
            STerm::App(_, args) => args.iter().all(STerm::is_primitive),
            STerm::Desc(x, _, c) => x.is_primitive() && c.is_primitive(),
            STerm::After(e, x) => e.is_primitive() && x.is_primitive(),
            STerm::Test(_) => false,
        }
    }
}

impl SEvent {
    pub fn normalize(&self) -> Event {
        let post: Vec<(BasicVar, Term)> = self
            .post
            .iter()
            .map(|(v, t)| (v.clone(), t.normalize()))
            .collect();
        let mut pre: Vec<Formula> = self.pre.iter().map(SFormula::normalize).collect();
        if self.know_assigned {
            for (v, t) in &post {
                if !matches!(t, Term::Var(w) if w == v) {
                    let owner = Group::singleton(v.owner.clone());
                    pre.push(derived::know_value(&owner, &derived::top(), t));
                }
            }
        }
        Event::new(pre, self.access.clone(), post)
    }

    pub fn lift(e: &Event) -> SEvent {
        SEvent {
            pre: e.preconditions().iter().map(SFormula::lift).collect(),
            access: e
                .access_entries()
                .iter()
                .map(|(a, g)| (a.clone(), g.clone()))
                .collect(),
            post: e
                .post_entries()
                .iter()
                .map(|(v, t)| (v.clone(), STerm::lift(t)))
                .collect(),
            know_assigned: false,
        }
    }

    fn is_primitive(&self) -> bool {
        !self.know_assigned
            && self.pre.iter().all(SFormula::is_primitive)
            && self.post.iter().all(|(_, t)| t.is_primitive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> SFormula {
        SFormula::Pred("p".into(), vec![])
    }

    #[test]
    fn normalize_is_idempotent_through_lift() {
        let s = SFormula::Implies(
            Box::new(SFormula::KnowValue(Group::of(&["a"]), Some(Box::new(p())), vec![
                STerm::Var(BasicVar::new("x", "a")),
            ])),
            Box::new(SFormula::Diamond(Box::new(SEvent::default()), Box::new(SFormula::Top))),
        );
        let once = s.normalize();
        let lifted = SFormula::lift(&once);
        assert!(lifted.is_primitive());
        assert_eq!(lifted.normalize(), once);
    }

    #[test]
    fn assignment_sugar_adds_knowledge_precondition() {
        let v = BasicVar::new("x", "a");
        let e = SEvent {
            post: vec![(v.clone(), STerm::Const("1".into()))],
            know_assigned: true,
            ..SEvent::default()
        };
        assert_eq!(e.normalize(), Event::assign(v, Term::constant("1")));
    }
}
