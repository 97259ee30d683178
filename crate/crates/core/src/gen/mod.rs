//! Random and exhaustive generation of models and expressions, used by the
//! property suites and by `dlkv gen`.

mod search;

pub use search::{find_witness, for_each_model, SearchBounds, Witness};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lang::{derived, Agent, BasicVar, Event, Formula, Group, Supergroup, Term, Vocabulary, UNDEF};
use crate::model::{EpistemicModel, FirstOrderModel, FunInterp, Partition, PredInterp, Value};

/// Name of the `i`-th defined domain value in generated models.
pub fn value_name(i: usize) -> String {
    format!("d{i}")
}

/// Domain of `defined` values followed by the undefined value `U`.
pub fn domain(defined: usize) -> Vec<String> {
    let mut d: Vec<String> = (0..defined).map(value_name).collect();
    d.push("U".into());
    d
}

/// Size bounds for random models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    pub max_states: usize,
    /// Number of defined domain values; the undefined value comes on top.
    pub defined: usize,
}

/// Every `n`-tuple over `0..d`, in lexicographic order.
pub(crate) fn tuples(d: usize, n: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Constants the generated model must interpret besides `undef`.
pub(crate) fn free_constants(voc: &Vocabulary) -> Vec<String> {
    voc.constants().iter().filter(|c| *c != UNDEF).cloned().collect()
}

/// A uniformly random first-order structure over `voc`.
pub fn random_fom<R: Rng>(voc: &Vocabulary, defined: usize, rng: &mut R) -> FirstOrderModel {
    let dom = domain(defined);
    let d = dom.len();
    let mut fom = FirstOrderModel::new(dom, defined).expect("well-formed domain");
    for c in free_constants(voc) {
        fom.set_constant(c, rng.gen_range(0..d)).expect("value in domain");
    }
    for (p, &n) in voc.predicates() {
        if p == crate::lang::EQ {
            continue;
        }
        let table: BTreeSet<Vec<Value>> = tuples(d, n).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        fom.set_predicate(p.clone(), n, PredInterp::Table(table)).expect("arity matches");
    }
    for (f, &n) in voc.functions() {
        let table: BTreeMap<Vec<Value>, Value> = tuples(d, n).into_iter().map(|t| (t, rng.gen_range(0..d))).collect();
        fom.set_function(f.clone(), n, FunInterp::Table(table)).expect("total table");
    }
    fom
}

/// A random model respecting that agents know their own variables: each
/// variable is constant on the classes of its owner.
pub fn random_model<R: Rng>(voc: &Vocabulary, shape: ModelShape, rng: &mut R) -> EpistemicModel {
    let fom = random_fom(voc, shape.defined, rng);
    let n = rng.gen_range(1..=shape.max_states.max(1));
    let d = fom.domain().len();
    let mut relations = BTreeMap::new();
    for a in voc.agents() {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        relations.insert(a.clone(), Partition::from_key(n, |s| labels[s]));
    }
    let vars: Vec<BasicVar> = voc.vars().iter().cloned().collect();
    let mut valuation = vec![vec![0; vars.len()]; n];
    for (i, v) in vars.iter().enumerate() {
        let part = &relations[&v.owner];
        for block in part.blocks() {
            // Undefined values are rarer, so that most terms denote something.
            let value = if rng.gen_bool(0.15) { d - 1 } else { rng.gen_range(0..d - 1) };
            for &s in block {
                valuation[s][i] = value;
            }
        }
    }
    EpistemicModel::new(
        Arc::new(voc.clone()),
        Arc::new(fom),
        (0..n).map(|s| format!("s{s}")).collect(),
        relations,
        valuation,
    )
    .expect("generated model is well-formed")
}

/// Knobs for random expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExprShape {
    /// Maximum nesting of connectives, modalities and term constructors.
    pub depth: usize,
    /// Whether `[e]` and `e(x)` may occur.
    pub dynamic: bool,
    /// Whether hypothetical values `x_A^φ` may occur.
    pub desc: bool,
    /// Whether `C` may occur.
    pub common: bool,
}

impl ExprShape {
    pub fn static_(depth: usize) -> Self {
        ExprShape { depth, dynamic: false, desc: true, common: true }
    }

    pub fn dynamic(depth: usize) -> Self {
        ExprShape { depth, dynamic: true, desc: true, common: true }
    }
}

/// Random expressions over a fixed vocabulary.
pub struct ExprGen<'a> {
    voc: &'a Vocabulary,
    agents: Vec<Agent>,
    shape: ExprShape,
}

impl<'a> ExprGen<'a> {
    pub fn new(voc: &'a Vocabulary, shape: ExprShape) -> Self {
        let agents = voc.agents().iter().cloned().collect();
        ExprGen { voc, agents, shape }
    }

    pub fn group<R: Rng>(&self, rng: &mut R) -> Group {
        loop {
            let picked: Vec<Agent> = self.agents.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            if let Ok(g) = Group::new(picked) {
                return g;
            }
        }
    }

    pub fn supergroup<R: Rng>(&self, rng: &mut R) -> Supergroup {
        let n = rng.gen_range(1..=2);
        Supergroup::new((0..n).map(|_| self.group(rng))).expect("non-empty")
    }

    fn leaf_term<R: Rng>(&self, rng: &mut R) -> Term {
        let vars: Vec<&BasicVar> = self.voc.vars().iter().collect();
        if !vars.is_empty() && rng.gen_bool(0.6) {
            Term::Var((*vars.choose(rng).expect("non-empty")).clone())
        } else {
            let consts: Vec<&String> = self.voc.constants().iter().collect();
            Term::constant(consts.choose(rng).expect("undef is always declared").as_str())
        }
    }

    pub fn term<R: Rng>(&self, depth: usize, rng: &mut R) -> Term {
        if depth == 0 || rng.gen_bool(0.4) {
            return self.leaf_term(rng);
        }
        let funs: Vec<(&String, &usize)> = self.voc.functions().iter().collect();
        loop {
            match rng.gen_range(0..4) {
                0 => {
                    return Term::ite(self.term(depth - 1, rng), self.formula(depth - 1, rng), self.term(depth - 1, rng))
                }
                1 if !funs.is_empty() => {
                    let (f, &n) = funs.choose(rng).expect("non-empty");
                    return Term::app(f.as_str(), (0..n).map(|_| self.term(depth - 1, rng)).collect());
                }
                2 if self.shape.desc => {
                    return Term::desc(self.term(depth - 1, rng), self.group(rng), self.formula(depth - 1, rng))
                }
                3 if self.shape.dynamic => return Term::after(self.event(depth - 1, rng), self.term(depth - 1, rng)),
                _ => {}
            }
        }
    }

    fn atom<R: Rng>(&self, depth: usize, rng: &mut R) -> Formula {
        let preds: Vec<(&String, &usize)> = self.voc.predicates().iter().collect();
        let (p, &n) = preds.choose(rng).expect("`=` is always declared");
        let depth = depth.saturating_sub(1);
        Formula::pred(p.as_str(), (0..n).map(|_| self.term(depth, rng)).collect())
    }

    pub fn formula<R: Rng>(&self, depth: usize, rng: &mut R) -> Formula {
        if depth == 0 || rng.gen_bool(0.25) {
            return self.atom(depth, rng);
        }
        let d = depth - 1;
        loop {
            match rng.gen_range(0..6) {
                0 => return Formula::not(self.formula(d, rng)),
                1 => return Formula::and(self.formula(d, rng), self.formula(d, rng)),
                2 => return Formula::know(self.group(rng), self.formula(d, rng)),
                3 if self.shape.common => {
                    let cond = if rng.gen_bool(0.5) { derived::top() } else { self.formula(d, rng) };
                    return Formula::common(self.supergroup(rng), cond, self.formula(d, rng));
                }
                4 if self.shape.dynamic => return Formula::after(self.event(d, rng), self.formula(d, rng)),
                5 => return self.atom(depth, rng),
                _ => {}
            }
        }
    }

    /// A random event satisfying the well-formedness constraints: every
    /// agent keeps her own access, and every assignment comes with the
    /// owner's knowledge of the assigned value as a precondition.
    pub fn event<R: Rng>(&self, depth: usize, rng: &mut R) -> Event {
        let mut pre: Vec<Formula> = (0..rng.gen_range(0..=1)).map(|_| self.formula(depth, rng)).collect();
        let mut access = Vec::new();
        for a in &self.agents {
            if rng.gen_bool(0.3) {
                access.push((a.clone(), self.group(rng).union(&Group::singleton(a.clone()))));
            }
        }
        let mut post = Vec::new();
        for v in self.voc.vars() {
            if rng.gen_bool(0.25) {
                let t = self.term(depth, rng);
                pre.push(derived::know_value(&Group::singleton(v.owner.clone()), &derived::top(), &t));
                post.push((v.clone(), t));
            }
        }
        Event::new(pre, access, post)
    }
}

/// The vocabulary used by the property suites: agents `a`, `b`; variables
/// `x@a`, `y@b`; a nullary and a unary predicate and a unary function.
pub fn test_vocabulary() -> Vocabulary {
    let mut voc = Vocabulary::with_agents(&["a", "b"]);
    voc.add_var(BasicVar::new("x", "a")).expect("agent declared");
    voc.add_var(BasicVar::new("y", "b")).expect("agent declared");
    voc.add_predicate("p", 0).expect("fresh");
    voc.add_predicate("P", 1).expect("fresh");
    voc.add_function("f", 1).expect("fresh");
    voc
}
