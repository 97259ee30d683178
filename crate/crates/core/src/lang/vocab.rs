use std::collections::{BTreeMap, BTreeSet};

use super::{Agent, BasicVar, Event, Formula, Group, Supergroup, Term, EQ, ONE, UNDEF, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VocabError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` is already declared with a different arity")]
    Redeclared(String),
    #[error("`{0}` is declared as more than one kind of symbol")]
    NameClash(String),
}

/// Symbols available to terms, formulas and events.
///
/// The constants `0`, `1`, `undef` and the binary predicate `=` are always
/// present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    agents: BTreeSet<Agent>,
    constants: BTreeSet<String>,
    vars: BTreeSet<BasicVar>,
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary {
            agents: BTreeSet::new(),
            constants: [ZERO, ONE, UNDEF].iter().map(|c| c.to_string()).collect(),
            vars: BTreeSet::new(),
            predicates: BTreeMap::from([(EQ.to_string(), 2)]),
            functions: BTreeMap::new(),
        }
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_agents(names: &[&str]) -> Self {
        let mut v = Self::new();
        for n in names {
            v.add_agent(Agent::new(*n));
        }
        v
    }

    pub fn add_agent(&mut self, agent: Agent) {
        self.agents.insert(agent);
    }

    pub fn add_constant(&mut self, name: impl Into<String>) -> Result<(), VocabError> {
        let name = name.into();
        if self.functions.contains_key(&name) {
            return Err(VocabError::NameClash(name));
        }
        self.constants.insert(name);
        Ok(())
    }

    pub fn add_var(&mut self, var: BasicVar) -> Result<(), VocabError> {
        if !self.agents.contains(&var.owner) {
            return Err(VocabError::UnknownAgent(var.owner.to_string()));
        }
        self.vars.insert(var);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, arity: usize) -> Result<(), VocabError> {
        Self::declare(&mut self.predicates, name.into(), arity)
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<(), VocabError> {
        let name = name.into();
        if self.constants.contains(&name) {
            return Err(VocabError::NameClash(name));
        }
        Self::declare(&mut self.functions, name, arity)
    }

    fn declare(table: &mut BTreeMap<String, usize>, name: String, arity: usize) -> Result<(), VocabError> {
        match table.get(&name) {
            Some(&a) if a != arity => Err(VocabError::Redeclared(name)),
            _ => {
                table.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn agents(&self) -> &BTreeSet<Agent> {
        &self.agents
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    pub fn vars(&self) -> &BTreeSet<BasicVar> {
        &self.vars
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    pub fn has_agent(&self, a: &Agent) -> bool {
        self.agents.contains(a)
    }

    pub fn has_constant(&self, c: &str) -> bool {
        self.constants.contains(c)
    }

    pub fn has_var(&self, v: &BasicVar) -> bool {
        self.vars.contains(v)
    }

    pub fn predicate_arity(&self, p: &str) -> Option<usize> {
        self.predicates.get(p).copied()
    }

    pub fn function_arity(&self, f: &str) -> Option<usize> {
        self.functions.get(f).copied()
    }

    /// Variables owned by `agent`.
    pub fn vars_of<'a>(&'a self, agent: &'a Agent) -> impl Iterator<Item = &'a BasicVar> + 'a {
        self.vars.iter().filter(move |v| &v.owner == agent)
    }

    pub fn check_group(&self, g: &Group) -> Result<(), VocabError> {
        for a in g.agents() {
            if !self.has_agent(a) {
                return Err(VocabError::UnknownAgent(a.to_string()));
            }
        }
        Ok(())
    }

    fn check_supergroup(&self, sg: &Supergroup) -> Result<(), VocabError> {
        sg.groups().try_for_each(|g| self.check_group(g))
    }

    pub fn check_term(&self, t: &Term) -> Result<(), VocabError> {
        match t {
            Term::Const(c) => {
                if self.has_constant(c) {
                    Ok(())
                } else {
                    Err(VocabError::UnknownConstant(c.clone()))
                }
            }
            Term::Var(v) => {
                if self.has_var(v) {
                    Ok(())
                } else {
                    Err(VocabError::UnknownVariable(v.to_string()))
                }
            }
            Term::Ite(x, c, y) => {
                self.check_term(x)?;
                self.check_formula(c)?;
                self.check_term(y)
            }
            Term::App(f, args) => {
                let arity = self
                    .function_arity(f)
                    .ok_or_else(|| VocabError::UnknownFunction(f.clone()))?;
                if arity != args.len() {
                    return Err(VocabError::ArityMismatch {
                        symbol: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Term::Desc(x, g, c) => {
                self.check_term(x)?;
                self.check_group(g)?;
                self.check_formula(c)
            }
            Term::After(e, x) => {
                self.check_event(e)?;
                self.check_term(x)
            }
        }
    }

    pub fn check_formula(&self, phi: &Formula) -> Result<(), VocabError> {
        match phi {
            Formula::Pred(p, args) => {
                let arity = self
                    .predicate_arity(p)
                    .ok_or_else(|| VocabError::UnknownPredicate(p.clone()))?;
                if arity != args.len() {
                    return Err(VocabError::ArityMismatch {
                        symbol: p.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Formula::Not(p) => self.check_formula(p),
            Formula::And(p, q) => {
                self.check_formula(p)?;
                self.check_formula(q)
            }
            Formula::Know(g, p) => {
                self.check_group(g)?;
                self.check_formula(p)
            }
            Formula::Common(sg, c, p) => {
                self.check_supergroup(sg)?;
                self.check_formula(c)?;
                self.check_formula(p)
            }
            Formula::After(e, p) => {
                self.check_event(e)?;
                self.check_formula(p)
            }
        }
    }

    pub fn check_event(&self, e: &Event) -> Result<(), VocabError> {
        e.preconditions().iter().try_for_each(|f| self.check_formula(f))?;
        for (a, g) in e.access_entries() {
            if !self.has_agent(a) {
                return Err(VocabError::UnknownAgent(a.to_string()));
            }
            self.check_group(g)?;
        }
        for (v, t) in e.post_entries() {
            if !self.has_var(v) {
                return Err(VocabError::UnknownVariable(v.to_string()));
            }
            self.check_term(t)?;
        }
        Ok(())
    }
}
