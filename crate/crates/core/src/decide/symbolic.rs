//! Quasi-model elimination over sets of types held as BDDs.
//!
//! "Some surviving type related to `Δ` by `∼_A` has property P" is the
//! existential projection of `S ∧ P` onto the variables `A` can see, since
//! `∼_A` is agreement on exactly those variables.

use biodivine_lib_bdd::{Bdd, BddValuation, BddVariable, BddVariableSet};

use super::types::{Lit, SigmaType, TypeSpace};
use super::DecideError;

/// Types removed in one round, per obligation that removed them.
#[derive(Clone, Debug)]
pub struct Round {
    pub round: usize,
    /// Variable of the `K` or `C` formula, and the number of types removed.
    pub removed: Vec<(usize, String)>,
}

pub struct Symbolic<'a> {
    space: &'a TypeSpace,
    vars: BddVariableSet,
    hidden: Vec<Vec<BddVariable>>,
}

pub struct Fixpoint {
    pub types: Bdd,
    pub survivors: Bdd,
    pub rounds: Vec<Round>,
}

impl<'a> Symbolic<'a> {
    pub fn new(space: &'a TypeSpace) -> Result<Self, DecideError> {
        let n = space.num_vars();
        let count = u16::try_from(n).map_err(|_| DecideError::TooManyVariables(n))?;
        let vars = BddVariableSet::new_anonymous(count);
        let hidden = (0..space.groups().len())
            .map(|g| {
                (0..n)
                    .filter(|&v| !space.visible(v, g))
                    .map(BddVariable::from_index)
                    .collect()
            })
            .collect();
        Ok(Symbolic { space, vars, hidden })
    }

    pub fn lit(&self, l: Lit) -> Bdd {
        self.vars.mk_literal(BddVariable::from_index(l.var), l.positive)
    }

    /// The set of all Σ-types.
    pub fn types(&self) -> Bdd {
        let n = self.space.num_vars();
        let mut by_last: Vec<Vec<Bdd>> = vec![Vec::new(); n.max(1)];
        for c in self.space.clauses() {
            let last = c.lits.iter().map(|l| l.var).max().expect("non-empty clause");
            let disj = c
                .lits
                .iter()
                .fold(self.vars.mk_false(), |acc, &l| acc.or(&self.lit(l)));
            by_last[last].push(disj);
        }
        let mut out = self.vars.mk_true();
        for group in by_last {
            for c in group {
                out = out.and(&c);
            }
        }
        out
    }

    /// Types in `set` with some `∼_A`-related type in `target`.
    fn sees(&self, group: usize, target: &Bdd) -> Bdd {
        target.exists(&self.hidden[group])
    }

    /// Types in `s` with a `θ`-chain inside `s` to a type without `body`.
    fn reaches(&self, s: &Bdd, groups: &[usize], cond: Lit, body: Lit) -> Bdd {
        let mut reach = s.and(&self.lit(body.negate()));
        let steps = s.and(&self.lit(cond));
        loop {
            let mut next = reach.clone();
            for &g in groups {
                next = next.or(&self.sees(g, &steps.and(&reach)).and(s));
            }
            if next == reach {
                return reach;
            }
            reach = next;
        }
    }

    /// Greatest set of types meeting every `K` and `C` obligation.
    pub fn fixpoint(&self) -> Fixpoint {
        let types = self.types();
        let mut s = types.clone();
        let mut rounds = Vec::new();
        for round in 1.. {
            let start = s.clone();
            let mut removed = Vec::new();
            for k in self.space.know_obligations() {
                let witness = self.sees(k.group, &s.and(&self.lit(k.body.negate())));
                let ok = self.lit(Lit { var: k.know, positive: true }).or(&witness);
                let bad = s.and_not(&ok);
                if !bad.is_false() {
                    removed.push((k.know, bad.exact_cardinality().to_string()));
                    s = s.and(&ok);
                }
            }
            for c in self.space.common_obligations() {
                let reach = self.reaches(&s, &c.groups, c.cond, c.body);
                let ok = self.lit(Lit { var: c.common, positive: true }).or(&reach);
                let bad = s.and_not(&ok);
                if !bad.is_false() {
                    removed.push((c.common, bad.exact_cardinality().to_string()));
                    s = s.and(&ok);
                }
            }
            if s == start {
                break;
            }
            rounds.push(Round { round, removed });
        }
        Fixpoint { types, survivors: s, rounds }
    }

    pub fn to_type(&self, v: &BddValuation) -> SigmaType {
        SigmaType { bits: v.clone().into_vector() }
    }

    pub fn to_valuation(&self, t: &SigmaType) -> BddValuation {
        BddValuation::new(t.bits.clone())
    }
}
