//! The closure `Σ(φ₀)` of a static formula and its restricted vocabulary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::lang::{agents_of_formula, agents_of_term, derived, Agent, Formula, Group, Term, EQ};

use super::DecideError;

/// The rules that add formulas to a closure, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosureRule {
    Root,
    Subformula,
    SingleNegation,
    GroupMonotonicity,
    KnownAntecedent,
    CaseCondition,
    HypotheticalValue,
    Atoms,
    CommonUnfolding,
}

impl ClosureRule {
    pub fn name(self) -> &'static str {
        match self {
            ClosureRule::Root => "root",
            ClosureRule::Subformula => "subformula",
            ClosureRule::SingleNegation => "single-negation",
            ClosureRule::GroupMonotonicity => "group-monotonicity",
            ClosureRule::KnownAntecedent => "known-antecedent",
            ClosureRule::CaseCondition => "case-condition",
            ClosureRule::HypotheticalValue => "hypothetical-value",
            ClosureRule::Atoms => "atoms",
            ClosureRule::CommonUnfolding => "common-unfolding",
        }
    }
}

/// `Σ(φ₀)`, with `Var_Σ` and the restricted vocabulary.
#[derive(Clone, Debug)]
pub struct Closure {
    root: Formula,
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
    terms: Vec<Term>,
    term_index: HashMap<Term, usize>,
    agents: BTreeSet<Agent>,
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
    counts: BTreeMap<ClosureRule, usize>,
}

impl Closure {
    pub fn root(&self) -> &Formula {
        &self.root
    }

    /// The formulas of `Σ` in the order they were added.
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn index_of(&self, phi: &Formula) -> Option<usize> {
        self.index.get(phi).copied()
    }

    pub fn contains(&self, phi: &Formula) -> bool {
        self.index.contains_key(phi)
    }

    /// `Var_Σ`.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn has_term(&self, t: &Term) -> bool {
        self.term_index.contains_key(t)
    }

    /// `𝒜_Σ`.
    pub fn agents(&self) -> &BTreeSet<Agent> {
        &self.agents
    }

    /// `Pred_Σ` with arities; always contains `=`.
    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    /// `Funct_Σ` with arities.
    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    /// How many formulas each rule contributed.
    pub fn rule_counts(&self) -> &BTreeMap<ClosureRule, usize> {
        &self.counts
    }

    /// Every non-empty subset of `𝒜_Σ`, smallest first.
    pub fn groups(&self) -> Vec<Group> {
        let agents: Vec<&Agent> = self.agents.iter().collect();
        let mut out: Vec<Group> = (1u64..(1 << agents.len()))
            .map(|mask| {
                Group::new(
                    agents
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, a)| (*a).clone()),
                )
                .expect("non-empty mask")
            })
            .collect();
        out.sort_by_key(|g| (g.len(), g.clone()));
        out
    }
}

struct Builder {
    cl: Closure,
    cap: usize,
    pending: Vec<usize>,
}

impl Builder {
    fn add(&mut self, phi: Formula, rule: ClosureRule) -> Result<(), DecideError> {
        if self.cl.index.contains_key(&phi) {
            return Ok(());
        }
        if self.cl.formulas.len() >= self.cap {
            *self.cl.counts.entry(rule).or_default() += 1;
            return Err(DecideError::ClosureCap {
                cap: self.cap,
                counts: self
                    .cl
                    .counts
                    .iter()
                    .map(|(r, n)| (r.name().to_string(), *n))
                    .collect(),
            });
        }
        let i = self.cl.formulas.len();
        self.cl.index.insert(phi.clone(), i);
        self.cl.formulas.push(phi);
        *self.cl.counts.entry(rule).or_default() += 1;
        self.pending.push(i);
        Ok(())
    }

    fn add_term(&mut self, t: &Term, found: &mut Vec<Formula>) {
        if self.cl.term_index.contains_key(t) {
            return;
        }
        self.cl.term_index.insert(t.clone(), self.cl.terms.len());
        self.cl.terms.push(t.clone());
        match t {
            Term::Const(_) => {}
            Term::Var(v) => {
                self.cl.agents.insert(v.owner.clone());
            }
            Term::Ite(x, c, y) => {
                self.add_term(x, found);
                self.add_term(y, found);
                found.push((**c).clone());
            }
            Term::App(f, args) => {
                self.cl.functions.insert(f.clone(), args.len());
                args.iter().for_each(|a| self.add_term(a, found));
            }
            Term::Desc(x, g, c) => {
                self.cl.agents.extend(g.agents().cloned());
                self.add_term(x, found);
                found.push((**c).clone());
            }
            Term::After(..) => unreachable!("closures are built from static formulas"),
        }
    }

    /// Applies the rules that look at a single formula.
    fn local(&mut self, i: usize) -> Result<(), DecideError> {
        let phi = self.cl.formulas[i].clone();
        self.add(phi.single_negation(), ClosureRule::SingleNegation)?;
        match &phi {
            Formula::Pred(p, args) => {
                self.cl.predicates.insert(p.clone(), args.len());
                let mut conds = Vec::new();
                args.iter().for_each(|a| self.add_term(a, &mut conds));
                for c in conds {
                    self.add(c, ClosureRule::CaseCondition)?;
                }
            }
            Formula::Not(p) => self.add((**p).clone(), ClosureRule::Subformula)?,
            Formula::And(p, q) => {
                self.add((**p).clone(), ClosureRule::Subformula)?;
                self.add((**q).clone(), ClosureRule::Subformula)?;
            }
            Formula::Know(g, p) => {
                self.cl.agents.extend(g.agents().cloned());
                self.add((**p).clone(), ClosureRule::Subformula)?;
                if let Formula::Not(inner) = &**p {
                    if let Formula::And(ante, _) = &**inner {
                        self.add(Formula::know(g.clone(), (**ante).clone()), ClosureRule::KnownAntecedent)?;
                    }
                }
            }
            Formula::Common(sg, c, p) => {
                self.cl.agents.extend(sg.agents());
                self.add((**c).clone(), ClosureRule::Subformula)?;
                self.add((**p).clone(), ClosureRule::Subformula)?;
                for g in sg.groups() {
                    self.add(derived::know_cond(g, c, phi.clone()), ClosureRule::CommonUnfolding)?;
                }
            }
            Formula::After(..) => return Err(DecideError::NotStatic),
        }
        Ok(())
    }

    /// Applies the rules that range over all of `Var_Σ`, `Pred_Σ` or `𝒜_Σ`.
    fn global(&mut self) -> Result<(), DecideError> {
        let groups = self.cl.groups();
        let knows: Vec<Formula> = self
            .cl
            .formulas
            .iter()
            .filter_map(|f| match f {
                Formula::Know(_, p) => Some((**p).clone()),
                _ => None,
            })
            .collect();
        for p in knows {
            for g in &groups {
                self.add(Formula::know(g.clone(), p.clone()), ClosureRule::GroupMonotonicity)?;
            }
        }
        let terms = self.cl.terms.clone();
        for t in &terms {
            if let Term::Desc(x, g, c) = t {
                let c = (**c).clone();
                self.add(c.clone(), ClosureRule::HypotheticalValue)?;
                self.add(derived::possible(g, c.clone()), ClosureRule::HypotheticalValue)?;
                self.add(derived::know_value(g, &c, x), ClosureRule::HypotheticalValue)?;
                for y in &terms {
                    for z in &terms {
                        let eq = Formula::eq(y.clone(), z.clone());
                        self.add(
                            derived::know_cond(g, &c, eq.clone()),
                            ClosureRule::HypotheticalValue,
                        )?;
                        self.add(
                            derived::possible(g, Formula::and(c.clone(), Formula::not(eq))),
                            ClosureRule::HypotheticalValue,
                        )?;
                    }
                }
            }
        }
        let preds: Vec<(String, usize)> = self.cl.predicates.iter().map(|(p, n)| (p.clone(), *n)).collect();
        for (p, n) in preds {
            for tuple in tuples(&terms, n) {
                self.add(Formula::pred(p.clone(), tuple.clone()), ClosureRule::Atoms)?;
                self.add(derived::defined_all(tuple), ClosureRule::Atoms)?;
            }
        }
        Ok(())
    }
}

fn tuples(terms: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                terms.iter().map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Saturates `{φ₀}` under the closure rules, failing once more than `cap`
/// formulas would be needed.
pub fn build_closure(root: &Formula, cap: usize) -> Result<Closure, DecideError> {
    if !root.is_static() {
        return Err(DecideError::NotStatic);
    }
    let mut b = Builder {
        cl: Closure {
            root: root.clone(),
            formulas: Vec::new(),
            index: HashMap::new(),
            terms: Vec::new(),
            term_index: HashMap::new(),
            agents: BTreeSet::new(),
            predicates: BTreeMap::from([(EQ.to_string(), 2)]),
            functions: BTreeMap::new(),
            counts: BTreeMap::new(),
        },
        cap,
        pending: Vec::new(),
    };
    b.add_term(&Term::undef(), &mut Vec::new());
    b.add(root.clone(), ClosureRule::Root)?;
    loop {
        while let Some(i) = b.pending.pop() {
            b.local(i)?;
        }
        let before = b.cl.formulas.len();
        b.global()?;
        if b.cl.formulas.len() == before && b.pending.is_empty() {
            break;
        }
    }
    debug_assert!(b.cl.formulas.iter().all(|f| {
        agents_of_formula(f).is_ok_and(|a| a.is_subset(&b.cl.agents))
    }));
    debug_assert!(b.cl.terms.iter().all(|t| agents_of_term(t).is_ok()));
    Ok(b.cl)
}
