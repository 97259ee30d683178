//! Abstract syntax of the logic: agents, groups, terms, formulas and events.
//!
//! Terms, formulas and events are mutually recursive. Only the primitive
//! constructors are stored; every abbreviation (⊤, →, K_A x, ⟨e⟩, …) is a
//! function in [`derived`] that builds the primitive tree directly.

pub mod derived;
mod event;
mod location;
pub mod surface;
mod vocab;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use event::{extend_access, extend_access_super, validate_event, EventViolation};
pub use location::{agents_of_formula, agents_of_term, LocationError, LocationSet};
pub use vocab::{VocabError, Vocabulary};

/// Name of the improper constant denoting the undefined value.
pub const UNDEF: &str = "undef";
/// Name of the logical constant 0.
pub const ZERO: &str = "0";
/// Name of the logical constant 1.
pub const ONE: &str = "1";
/// Name of the equality predicate.
pub const EQ: &str = "=";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Self {
        Agent(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite, non-empty set of agents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(BTreeSet<Agent>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("groups must be non-empty")]
pub struct EmptyGroup;

impl Group {
    pub fn new(agents: impl IntoIterator<Item = Agent>) -> Result<Self, EmptyGroup> {
        let set: BTreeSet<Agent> = agents.into_iter().collect();
        if set.is_empty() {
            Err(EmptyGroup)
        } else {
            Ok(Group(set))
        }
    }

    /// Convenience constructor from agent names; panics on an empty list.
    pub fn of(names: &[&str]) -> Self {
        Group::new(names.iter().map(|n| Agent::new(*n))).expect("non-empty group")
    }

    pub fn singleton(agent: Agent) -> Self {
        Group(BTreeSet::from([agent]))
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Agent> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, agent: &Agent) -> bool {
        self.0.contains(agent)
    }

    pub fn is_subset(&self, other: &Group) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Group) -> Group {
        Group(self.0.union(&other.0).cloned().collect())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// A finite, non-empty set of groups.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Supergroup(BTreeSet<Group>);

impl Supergroup {
    pub fn new(groups: impl IntoIterator<Item = Group>) -> Result<Self, EmptyGroup> {
        let set: BTreeSet<Group> = groups.into_iter().collect();
        if set.is_empty() {
            Err(EmptyGroup)
        } else {
            Ok(Supergroup(set))
        }
    }

    /// The supergroup `{{a} : a ∈ A}` of singletons.
    pub fn singletons(group: &Group) -> Self {
        Supergroup(group.agents().cloned().map(Group::singleton).collect())
    }

    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_singletons(&self) -> bool {
        self.0.iter().all(|g| g.len() == 1)
    }

    /// Union of all member groups.
    pub fn agents(&self) -> BTreeSet<Agent> {
        self.0.iter().flat_map(|g| g.agents().cloned()).collect()
    }
}

/// A basic local variable `name` located at agent `owner`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicVar {
    pub name: String,
    pub owner: Agent,
}

impl BasicVar {
    pub fn new(name: impl Into<String>, owner: impl Into<String>) -> Self {
        BasicVar {
            name: name.into(),
            owner: Agent::new(owner),
        }
    }
}

impl fmt::Display for BasicVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.owner)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(BasicVar),
    /// `x|_φ y`: `then` if the condition holds, otherwise `other`.
    Ite(Box<Term>, Box<Formula>, Box<Term>),
    App(String, Vec<Term>),
    /// `x_A^φ`: the hypothetical value of `x` for group `A` under condition `φ`.
    Desc(Box<Term>, Group, Box<Formula>),
    /// `e(x)`: the value of `x` after event `e`.
    After(Box<Event>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Know(Group, Box<Formula>),
    /// `C_𝔄^θ φ` stored as (supergroup, condition θ, body φ).
    Common(Supergroup, Box<Formula>, Box<Formula>),
    /// `[e]φ`.
    After(Box<Event>, Box<Formula>),
}

/// A semi-public event `!Φ/σ`.
///
/// Trivial components are not stored: an agent without an access entry reads
/// only her own database, and a variable without a post entry keeps its value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Event {
    pre: BTreeSet<Formula>,
    access: BTreeMap<Agent, Group>,
    post: BTreeMap<BasicVar, Term>,
}

impl Event {
    pub fn new(
        pre: impl IntoIterator<Item = Formula>,
        access: impl IntoIterator<Item = (Agent, Group)>,
        post: impl IntoIterator<Item = (BasicVar, Term)>,
    ) -> Self {
        let access = access
            .into_iter()
            .filter(|(a, g)| !(g.len() == 1 && g.contains(a)))
            .collect();
        let post = post
            .into_iter()
            .filter(|(v, t)| !matches!(t, Term::Var(w) if w == v))
            .collect();
        Event {
            pre: pre.into_iter().collect(),
            access,
            post,
        }
    }

    /// `!()`: nothing happens.
    pub fn trivial() -> Self {
        Event::default()
    }

    /// `!(φ)`: public announcement of `φ`.
    pub fn announcement(phi: Formula) -> Self {
        Event::new([phi], [], [])
    }

    /// `!(a:b)`: agent `a` gains access to `b`'s database.
    pub fn share(reader: Agent, source: Agent) -> Self {
        let group = Group::new([reader.clone(), source]).expect("non-empty");
        Event::new([], [(reader, group)], [])
    }

    /// `!(v := t)`, together with the required precondition `K_owner t`.
    pub fn assign(var: BasicVar, value: Term) -> Self {
        let know = derived::know_value(
            &Group::singleton(var.owner.clone()),
            &derived::top(),
            &value,
        );
        Event::new([know], [], [(var, value)])
    }

    pub fn preconditions(&self) -> &BTreeSet<Formula> {
        &self.pre
    }

    pub fn access_entries(&self) -> &BTreeMap<Agent, Group> {
        &self.access
    }

    pub fn post_entries(&self) -> &BTreeMap<BasicVar, Term> {
        &self.post
    }

    /// `pre_e = ⋀Φ` (⊤ when Φ is empty), folded in set order.
    pub fn precondition(&self) -> Formula {
        derived::conj(self.pre.iter().cloned())
    }

    /// `e(a)`.
    pub fn access_of(&self, agent: &Agent) -> Group {
        self.access
            .get(agent)
            .cloned()
            .unwrap_or_else(|| Group::singleton(agent.clone()))
    }

    /// `post_e(v)`.
    pub fn post_of(&self, var: &BasicVar) -> Term {
        self.post
            .get(var)
            .cloned()
            .unwrap_or_else(|| Term::Var(var.clone()))
    }

    pub fn is_trivial(&self) -> bool {
        self.pre.is_empty() && self.access.is_empty() && self.post.is_empty()
    }

    /// Rebuilds the event with every precondition and post term mapped.
    pub fn map_parts<E>(
        &self,
        mut on_formula: impl FnMut(&Formula) -> Result<Formula, E>,
        mut on_term: impl FnMut(&Term) -> Result<Term, E>,
    ) -> Result<Event, E> {
        let pre = self
            .pre
            .iter()
            .map(&mut on_formula)
            .collect::<Result<Vec<_>, E>>()?;
        let post = self
            .post
            .iter()
            .map(|(v, t)| Ok((v.clone(), on_term(t)?)))
            .collect::<Result<Vec<_>, E>>()?;
        Ok(Event::new(pre, self.access.clone(), post))
    }
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn var(name: &str, owner: &str) -> Self {
        Term::Var(BasicVar::new(name, owner))
    }

    pub fn undef() -> Self {
        Term::Const(UNDEF.to_string())
    }

    pub fn ite(then: Term, cond: Formula, other: Term) -> Self {
        Term::Ite(Box::new(then), Box::new(cond), Box::new(other))
    }

    pub fn app(fun: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(fun.into(), args)
    }

    pub fn desc(base: Term, group: Group, cond: Formula) -> Self {
        Term::Desc(Box::new(base), group, Box::new(cond))
    }

    pub fn after(event: Event, base: Term) -> Self {
        Term::After(Box::new(event), Box::new(base))
    }

    /// True when no event operator occurs anywhere inside.
    pub fn is_static(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => true,
            Term::Ite(x, c, y) => x.is_static() && c.is_static() && y.is_static(),
            Term::App(_, args) => args.iter().all(Term::is_static),
            Term::Desc(x, _, c) => x.is_static() && c.is_static(),
            Term::After(..) => false,
        }
    }

    /// Number of constructor nodes, counting nested formulas and events.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 1,
            Term::Ite(x, c, y) => 1 + x.size() + c.size() + y.size(),
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Desc(x, _, c) => 1 + x.size() + c.size(),
            Term::After(e, x) => 1 + e.size() + x.size(),
        }
    }
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn eq(x: Term, y: Term) -> Self {
        Formula::Pred(EQ.to_string(), vec![x, y])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Self {
        Formula::Not(Box::new(phi))
    }

    pub fn and(phi: Formula, psi: Formula) -> Self {
        Formula::And(Box::new(phi), Box::new(psi))
    }

    pub fn know(group: Group, phi: Formula) -> Self {
        Formula::Know(group, Box::new(phi))
    }

    pub fn common(supergroup: Supergroup, cond: Formula, body: Formula) -> Self {
        Formula::Common(supergroup, Box::new(cond), Box::new(body))
    }

    pub fn after(event: Event, phi: Formula) -> Self {
        Formula::After(Box::new(event), Box::new(phi))
    }

    pub fn is_static(&self) -> bool {
        match self {
            Formula::Pred(_, args) => args.iter().all(Term::is_static),
            Formula::Not(p) => p.is_static(),
            Formula::And(p, q) => p.is_static() && q.is_static(),
            Formula::Know(_, p) => p.is_static(),
            Formula::Common(_, c, p) => c.is_static() && p.is_static(),
            Formula::After(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Pred(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Not(p) => 1 + p.size(),
            Formula::And(p, q) => 1 + p.size() + q.size(),
            Formula::Know(_, p) => 1 + p.size(),
            Formula::Common(_, c, p) => 1 + c.size() + p.size(),
            Formula::After(e, p) => 1 + e.size() + p.size(),
        }
    }

    /// Single negation `∼φ`: strips one outer negation or adds one.
    pub fn single_negation(&self) -> Formula {
        match self {
            Formula::Not(p) => (**p).clone(),
            other => Formula::not(other.clone()),
        }
    }
}

impl Event {
    pub fn size(&self) -> usize {
        1 + self.pre.iter().map(Formula::size).sum::<usize>()
            + self.post.values().map(Term::size).sum::<usize>()
    }

    pub fn is_static(&self) -> bool {
        self.pre.iter().all(Formula::is_static) && self.post.values().all(Term::is_static)
    }
}
