//! Finite epistemic data models.

mod fom;
mod numbers;
mod partition;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

pub use fom::{FirstOrderModel, FunInterp, PredInterp, Value};
pub use numbers::{build_numbers_game, numbers_game_vocabulary};
pub use partition::Partition;

use crate::lang::{Agent, BasicVar, Group, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("the domain has no undefined value")]
    NoUndefined,
    #[error("the domain lists a value twice")]
    DuplicateValue,
    #[error("unknown domain value `{0}`")]
    UnknownValue(String),
    #[error("`undef` always denotes the undefined value")]
    UndefRedefined,
    #[error("equality is builtin and cannot be redefined")]
    EqualityRedefined,
    #[error("function table for `{0}` is not total")]
    PartialFunction(String),
    #[error("predicate table for `{0}` has a tuple of the wrong shape")]
    BadPredicate(String),
    #[error("`{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("agent `{0}` has no accessibility relation")]
    MissingRelation(String),
    #[error("relation of `{0}` does not partition the states")]
    BadRelation(String),
    #[error("state `{state}` gives no value to `{var}`")]
    MissingValue { state: String, var: String },
    #[error("state name `{0}` is used twice")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("numbers game needs a bound of at least 2, got {0}")]
    BoundTooSmall(u64),
}

/// A failure of "agents know their own data".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnDataViolation {
    pub agent: Agent,
    pub var: BasicVar,
    pub states: (String, String),
}

impl fmt::Display for OwnDataViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cannot tell {} from {} but {} differs",
            self.agent, self.states.0, self.states.1, self.var
        )
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// States with per-agent partitions and a valuation of the basic variables.
pub struct EpistemicModel {
    id: u64,
    vocab: Arc<Vocabulary>,
    fom: Arc<FirstOrderModel>,
    states: Vec<String>,
    vars: Vec<BasicVar>,
    var_index: HashMap<BasicVar, usize>,
    relations: BTreeMap<Agent, Partition>,
    valuation: Vec<Vec<Value>>,
    group_cache: Mutex<HashMap<Group, Arc<Partition>>>,
}

impl fmt::Debug for EpistemicModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EpistemicModel")
            .field("id", &self.id)
            .field("states", &self.states)
            .field("relations", &self.relations)
            .field("valuation", &self.valuation)
            .finish()
    }
}

impl Clone for EpistemicModel {
    fn clone(&self) -> Self {
        EpistemicModel {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            vocab: self.vocab.clone(),
            fom: self.fom.clone(),
            states: self.states.clone(),
            vars: self.vars.clone(),
            var_index: self.var_index.clone(),
            relations: self.relations.clone(),
            valuation: self.valuation.clone(),
            group_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl EpistemicModel {
    /// Assembles a model.
    ///
    /// `valuation[s][i]` is the value at state `s` of the `i`-th basic variable
    /// of the vocabulary in its sorted order. Every agent needs a relation.
    pub fn new(
        vocab: Arc<Vocabulary>,
        fom: Arc<FirstOrderModel>,
        states: Vec<String>,
        relations: BTreeMap<Agent, Partition>,
        valuation: Vec<Vec<Value>>,
    ) -> Result<Self, ModelError> {
        fom.check_covers(&vocab)?;
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        for a in vocab.agents() {
            match relations.get(a) {
                None => return Err(ModelError::MissingRelation(a.to_string())),
                Some(p) if p.len() != states.len() => {
                    return Err(ModelError::BadRelation(a.to_string()))
                }
                Some(_) => {}
            }
        }
        if let Some(a) = relations.keys().find(|a| !vocab.has_agent(a)) {
            return Err(ModelError::UnknownAgent(a.to_string()));
        }
        let vars: Vec<BasicVar> = vocab.vars().iter().cloned().collect();
        if valuation.len() != states.len() {
            return Err(ModelError::MissingValue {
                state: "?".into(),
                var: "?".into(),
            });
        }
        for (s, row) in valuation.iter().enumerate() {
            if row.len() != vars.len() {
                let var = vars.get(row.len()).map_or("?".into(), |v| v.to_string());
                return Err(ModelError::MissingValue {
                    state: states[s].clone(),
                    var,
                });
            }
            if let Some(&v) = row.iter().find(|&&v| v >= fom.domain().len()) {
                return Err(ModelError::UnknownValue(v.to_string()));
            }
        }
        let var_index = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Ok(EpistemicModel {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            vocab,
            fom,
            states,
            vars,
            var_index,
            relations,
            valuation,
            group_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Identity of this model object, distinct for every constructed model.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn fom(&self) -> &Arc<FirstOrderModel> {
        &self.fom
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_named(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Basic variables in valuation order.
    pub fn vars(&self) -> &[BasicVar] {
        &self.vars
    }

    pub fn relations(&self) -> &BTreeMap<Agent, Partition> {
        &self.relations
    }

    pub fn relation(&self, a: &Agent) -> Option<&Partition> {
        self.relations.get(a)
    }

    pub fn valuation_row(&self, s: usize) -> &[Value] {
        &self.valuation[s]
    }

    pub fn value(&self, s: usize, v: &BasicVar) -> Option<Value> {
        self.var_index.get(v).map(|&i| self.valuation[s][i])
    }

    /// `∼_A`: the intersection of the members' relations.
    pub fn group_rel(&self, group: &Group) -> Result<Arc<Partition>, ModelError> {
        if let Some(p) = self.group_cache.lock().expect("cache lock").get(group) {
            return Ok(p.clone());
        }
        let mut agents = group.agents();
        let first = agents.next().expect("non-empty group");
        let mut p = self
            .relations
            .get(first)
            .ok_or_else(|| ModelError::UnknownAgent(first.to_string()))?
            .clone();
        for a in agents {
            let q = self
                .relations
                .get(a)
                .ok_or_else(|| ModelError::UnknownAgent(a.to_string()))?;
            p = p.intersect(q);
        }
        let p = Arc::new(p);
        self.group_cache
            .lock()
            .expect("cache lock")
            .insert(group.clone(), p.clone());
        Ok(p)
    }

    /// Keeps the states in `kept` (increasing) with new relations and valuation.
    pub(crate) fn derive(
        &self,
        kept: &[usize],
        relations: BTreeMap<Agent, Partition>,
        valuation: Vec<Vec<Value>>,
    ) -> EpistemicModel {
        EpistemicModel {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            vocab: self.vocab.clone(),
            fom: self.fom.clone(),
            states: kept.iter().map(|&s| self.states[s].clone()).collect(),
            vars: self.vars.clone(),
            var_index: self.var_index.clone(),
            relations,
            valuation,
            group_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Valuation as `name=value` pairs, for reports.
    pub fn describe_state(&self, s: usize) -> String {
        let vals: Vec<String> = self
            .vars
            .iter()
            .zip(&self.valuation[s])
            .map(|(v, &d)| format!("{v}={}", self.fom.value_name(d)))
            .collect();
        format!("{} {{{}}}", self.states[s], vals.join(", "))
    }
}

/// Lists every pair of states an agent confuses although they differ on one
/// of the agent's own variables.
pub fn validate_model(m: &EpistemicModel) -> Vec<OwnDataViolation> {
    let mut out = Vec::new();
    for (agent, part) in &m.relations {
        let owned: Vec<(usize, &BasicVar)> = m
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| &v.owner == agent)
            .collect();
        for block in part.blocks() {
            let rep = block[0];
            for &w in &block[1..] {
                for &(i, v) in &owned {
                    if m.valuation[rep][i] != m.valuation[w][i] {
                        out.push(OwnDataViolation {
                            agent: agent.clone(),
                            var: v.clone(),
                            states: (m.states[rep].clone(), m.states[w].clone()),
                        });
                    }
                }
            }
        }
    }
    out
}
