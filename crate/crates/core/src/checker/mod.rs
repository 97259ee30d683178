//! Truth of formulas and values of terms at the states of a model, and the
//! models produced by events.
//!
//! Everything is computed one model at a time: a formula is evaluated to its
//! extension (one truth value per state) and a term to one value per state.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::lang::{
    extend_access, validate_event, Event, EventViolation, Formula, Term, VocabError,
};
use crate::model::{validate_model, EpistemicModel, ModelError, Partition, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Vocabulary(#[from] VocabError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("state index {0} is out of range")]
    NoSuchState(usize),
    #[error("ill-formed event: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidEvent(Vec<EventViolation>),
}

/// How an updated model relates to its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateTrace {
    /// Parent index of each surviving state, increasing.
    pub kept: Vec<usize>,
}

impl UpdateTrace {
    /// Index in the updated model of parent state `s`, if it survived.
    pub fn image(&self, s: usize) -> Option<usize> {
        self.kept.binary_search(&s).ok()
    }
}

type Updated = (Arc<EpistemicModel>, Arc<UpdateTrace>);

/// Evaluator with a memo of event updates, keyed by model identity and event.
#[derive(Default)]
pub struct Checker {
    updates: Mutex<HashMap<(u64, Event), Updated>>,
}

impl Checker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized updates.
    pub fn memo_len(&self) -> usize {
        self.updates.lock().expect("memo lock").len()
    }

    /// Truth value of `phi` at every state.
    pub fn extension(&self, m: &EpistemicModel, phi: &Formula) -> Result<Vec<bool>, CheckError> {
        m.vocab().check_formula(phi)?;
        self.ext(m, phi)
    }

    /// Value of `x` at every state.
    pub fn term_values(&self, m: &EpistemicModel, x: &Term) -> Result<Vec<Value>, CheckError> {
        m.vocab().check_term(x)?;
        self.vals(m, x)
    }

    pub fn check(&self, m: &EpistemicModel, s: usize, phi: &Formula) -> Result<bool, CheckError> {
        if s >= m.num_states() {
            return Err(CheckError::NoSuchState(s));
        }
        Ok(self.extension(m, phi)?[s])
    }

    pub fn eval(&self, m: &EpistemicModel, s: usize, x: &Term) -> Result<Value, CheckError> {
        if s >= m.num_states() {
            return Err(CheckError::NoSuchState(s));
        }
        Ok(self.term_values(m, x)?[s])
    }

    /// States where `phi` holds, in increasing order.
    pub fn check_everywhere(&self, m: &EpistemicModel, phi: &Formula) -> Result<Vec<usize>, CheckError> {
        let ext = self.extension(m, phi)?;
        Ok((0..ext.len()).filter(|&s| ext[s]).collect())
    }

    /// The model after `e`, together with the map back to the parent.
    pub fn update(&self, m: &EpistemicModel, e: &Event) -> Result<Updated, CheckError> {
        let key = (m.id(), e.clone());
        if let Some(hit) = self.updates.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let violations = validate_event(e, m.vocab());
        if !violations.is_empty() {
            return Err(CheckError::InvalidEvent(violations));
        }
        let pre = self.ext(m, &e.precondition())?;
        let kept: Vec<usize> = (0..m.num_states()).filter(|&s| pre[s]).collect();
        let mut relations = BTreeMap::new();
        for a in m.vocab().agents() {
            let access = extend_access(e, &crate::lang::Group::singleton(a.clone()));
            relations.insert(a.clone(), m.group_rel(&access)?.restrict(&kept));
        }
        let mut columns = Vec::with_capacity(m.vars().len());
        for v in m.vars() {
            columns.push(self.vals(m, &e.post_of(v))?);
        }
        let valuation = kept
            .iter()
            .map(|&s| columns.iter().map(|col| col[s]).collect())
            .collect();
        let next = m.derive(&kept, relations, valuation);
        let broken = validate_model(&next);
        assert!(
            broken.is_empty(),
            "update by a well-formed event broke own-data knowledge: {}",
            broken[0]
        );
        let out = (Arc::new(next), Arc::new(UpdateTrace { kept }));
        self.updates
            .lock()
            .expect("memo lock")
            .insert(key, out.clone());
        Ok(out)
    }

    fn ext(&self, m: &EpistemicModel, phi: &Formula) -> Result<Vec<bool>, CheckError> {
        let n = m.num_states();
        Ok(match phi {
            Formula::Pred(p, args) => {
                let cols = args
                    .iter()
                    .map(|a| self.vals(m, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut tuple = vec![0; args.len()];
                (0..n)
                    .map(|s| {
                        for (slot, col) in tuple.iter_mut().zip(&cols) {
                            *slot = col[s];
                        }
                        m.fom().holds(p, &tuple).expect("vocabulary checked")
                    })
                    .collect()
            }
            Formula::Not(p) => self.ext(m, p)?.into_iter().map(|b| !b).collect(),
            Formula::And(p, q) => {
                let p = self.ext(m, p)?;
                let q = self.ext(m, q)?;
                p.iter().zip(&q).map(|(a, b)| *a && *b).collect()
            }
            Formula::Know(g, p) => {
                let body = self.ext(m, p)?;
                let rel = m.group_rel(g)?;
                let block_ok: Vec<bool> = rel
                    .blocks()
                    .iter()
                    .map(|b| b.iter().all(|&w| body[w]))
                    .collect();
                (0..n).map(|s| block_ok[rel.block_index(s)]).collect()
            }
            Formula::Common(sg, c, p) => {
                let cond = self.ext(m, c)?;
                let body = self.ext(m, p)?;
                let rels = sg
                    .groups()
                    .map(|g| m.group_rel(g))
                    .collect::<Result<Vec<_>, _>>()?;
                common(&rels, &cond, &body)
            }
            Formula::After(e, p) => {
                let (next, trace) = self.update(m, e)?;
                let body = self.ext(&next, p)?;
                (0..n)
                    .map(|s| trace.image(s).map_or(true, |t| body[t]))
                    .collect()
            }
        })
    }

    fn vals(&self, m: &EpistemicModel, x: &Term) -> Result<Vec<Value>, CheckError> {
        let n = m.num_states();
        let fom = m.fom();
        Ok(match x {
            Term::Const(c) => vec![fom.constant(c).expect("vocabulary checked"); n],
            Term::Var(v) => (0..n)
                .map(|s| m.value(s, v).expect("vocabulary checked"))
                .collect(),
            Term::Ite(a, c, b) => {
                let cond = self.ext(m, c)?;
                let a = self.vals(m, a)?;
                let b = self.vals(m, b)?;
                (0..n).map(|s| if cond[s] { a[s] } else { b[s] }).collect()
            }
            Term::App(f, args) => {
                let cols = args
                    .iter()
                    .map(|a| self.vals(m, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut tuple = vec![0; args.len()];
                (0..n)
                    .map(|s| {
                        for (slot, col) in tuple.iter_mut().zip(&cols) {
                            *slot = col[s];
                        }
                        fom.apply(f, &tuple).expect("vocabulary checked")
                    })
                    .collect()
            }
            Term::Desc(base, g, c) => {
                let cond = self.ext(m, c)?;
                let base = self.vals(m, base)?;
                let rel = m.group_rel(g)?;
                let per_block: Vec<Value> = rel
                    .blocks()
                    .iter()
                    .map(|b| hypothetical(b, &cond, &base, fom.undef()))
                    .collect();
                (0..n).map(|s| per_block[rel.block_index(s)]).collect()
            }
            Term::After(e, base) => {
                let (next, trace) = self.update(m, e)?;
                let inner = self.vals(&next, base)?;
                (0..n)
                    .map(|s| trace.image(s).map_or(fom.undef(), |t| inner[t]))
                    .collect()
            }
        })
    }
}

/// The common value of `base` over the `cond`-states of a block, or undefined
/// when there is none or more than one.
fn hypothetical(block: &[usize], cond: &[bool], base: &[Value], undef: Value) -> Value {
    let mut found = None;
    for &w in block.iter().filter(|&&w| cond[w]) {
        match found {
            None => found = Some(base[w]),
            Some(v) if v != base[w] => return undef,
            Some(_) => {}
        }
    }
    found.unwrap_or(undef)
}

/// Conditional common knowledge over the given group relations.
///
/// Condition states that share a block of some relation are linked; a state
/// satisfies the modality when the body holds there and in every component
/// reachable in one step from it.
fn common(rels: &[Arc<Partition>], cond: &[bool], body: &[bool]) -> Vec<bool> {
    let n = cond.len();
    let mut uf = UnionFind::new(n);
    for rel in rels {
        for b in rel.blocks() {
            let mut members = b.iter().copied().filter(|&w| cond[w]);
            if let Some(first) = members.next() {
                for w in members {
                    uf.union(first, w);
                }
            }
        }
    }
    let mut bad = vec![false; n];
    for w in 0..n {
        if cond[w] && !body[w] {
            let r = uf.find(w);
            bad[r] = true;
        }
    }
    let block_bad: Vec<Vec<bool>> = rels
        .iter()
        .map(|rel| {
            rel.blocks()
                .iter()
                .map(|b| b.iter().any(|&w| cond[w] && bad[uf.find_const(w)]))
                .collect()
        })
        .collect();
    (0..n)
        .map(|s| {
            body[s]
                && rels
                    .iter()
                    .zip(&block_bad)
                    .all(|(rel, bb)| !bb[rel.block_index(s)])
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// `s ⊨ φ` with a fresh checker.
pub fn check_formula(m: &EpistemicModel, s: usize, phi: &Formula) -> Result<bool, CheckError> {
    Checker::new().check(m, s, phi)
}

/// `s(x)` with a fresh checker.
pub fn eval_term(m: &EpistemicModel, s: usize, x: &Term) -> Result<Value, CheckError> {
    Checker::new().eval(m, s, x)
}

/// `e(M)` with a fresh checker.
pub fn update(m: &EpistemicModel, e: &Event) -> Result<Updated, CheckError> {
    Checker::new().update(m, e)
}

/// States where `phi` holds, with a fresh checker.
pub fn check_everywhere(m: &EpistemicModel, phi: &Formula) -> Result<Vec<usize>, CheckError> {
    Checker::new().check_everywhere(m, phi)
}
