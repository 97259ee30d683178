//! Σ-types as truth assignments, the local conditions they must meet, and
//! the accessibility relations between them.
//!
//! A type is determined by which non-negated formulas of `Σ` it contains:
//! since `Σ` is closed under single negation, `¬ψ ∈ Δ` exactly when
//! `ψ ∉ Δ`, which is the first type condition. The remaining conditions are
//! clauses over these truth values.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::lang::{agents_of_formula, agents_of_term, derived, Agent, Formula, Group, Term};

use super::closure::Closure;
use super::DecideError;

/// A variable (a non-negated formula of `Σ`) with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn negate(self) -> Lit {
        Lit { var: self.var, positive: !self.positive }
    }
}

/// The type condition a clause comes from, numbered as in the definition
/// of types.
pub type Condition = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub condition: Condition,
    pub lits: Vec<Lit>,
}

/// `K_A ψ`: a type without it needs an `A`-related type without `ψ`.
#[derive(Clone, Debug)]
pub struct KnowObligation {
    pub know: usize,
    pub group: usize,
    pub body: Lit,
}

/// `C_𝔄^θ φ`: a type without it needs a `θ`-chain to a type without `φ`.
#[derive(Clone, Debug)]
pub struct CommonObligation {
    pub common: usize,
    pub groups: Vec<usize>,
    pub cond: Lit,
    pub body: Lit,
}

/// The propositional encoding of the types over a closure.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    closure: Closure,
    /// Closure index of the formula behind each variable.
    var_formula: Vec<usize>,
    /// Literal of each closure formula.
    lit_of: Vec<Lit>,
    var_agents: Vec<BTreeSet<Agent>>,
    groups: Vec<Group>,
    clauses: Vec<Clause>,
    knows: Vec<KnowObligation>,
    commons: Vec<CommonObligation>,
}

/// A Σ-type, as the truth values of the variables of a [`TypeSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaType {
    pub bits: Vec<bool>,
}

impl SigmaType {
    pub fn holds(&self, lit: Lit) -> bool {
        self.bits[lit.var] == lit.positive
    }
}

impl TypeSpace {
    pub fn new(closure: Closure) -> Result<TypeSpace, DecideError> {
        let n = closure.len();
        // Variables are the non-negated formulas, smallest first.
        let mut positive: Vec<usize> = (0..n)
            .filter(|&i| !matches!(closure.formulas()[i], Formula::Not(_)))
            .collect();
        positive.sort_by_key(|&i| (closure.formulas()[i].size(), i));
        let mut var_of = vec![usize::MAX; n];
        for (v, &i) in positive.iter().enumerate() {
            var_of[i] = v;
        }
        let lit_of = (0..n)
            .map(|i| {
                let mut f = &closure.formulas()[i];
                let mut positive = true;
                while let Formula::Not(inner) = f {
                    f = inner;
                    positive = !positive;
                }
                let idx = closure.index_of(f).expect("closed under subformulas");
                Lit { var: var_of[idx], positive }
            })
            .collect();
        let var_agents = positive
            .iter()
            .map(|&i| agents_of_formula(&closure.formulas()[i]).map_err(|_| DecideError::NotStatic))
            .collect::<Result<_, _>>()?;
        let groups = closure.groups();
        let mut space = TypeSpace {
            closure,
            var_formula: positive,
            lit_of,
            var_agents,
            groups,
            clauses: Vec::new(),
            knows: Vec::new(),
            commons: Vec::new(),
        };
        space.build_conditions();
        Ok(space)
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn num_vars(&self) -> usize {
        self.var_formula.len()
    }

    pub fn var_formula(&self, var: usize) -> &Formula {
        &self.closure.formulas()[self.var_formula[var]]
    }

    pub fn var_agents(&self, var: usize) -> &BTreeSet<Agent> {
        &self.var_agents[var]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group_index(&self, g: &Group) -> Option<usize> {
        self.groups.iter().position(|h| h == g)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn know_obligations(&self) -> &[KnowObligation] {
        &self.knows
    }

    pub fn common_obligations(&self) -> &[CommonObligation] {
        &self.commons
    }

    /// The literal of a formula of `Σ`.
    pub fn lit(&self, phi: &Formula) -> Option<Lit> {
        self.closure.index_of(phi).map(|i| self.lit_of[i])
    }

    fn must(&self, phi: &Formula) -> Lit {
        self.lit(phi)
            .unwrap_or_else(|| panic!("closure is missing `{phi}`"))
    }

    /// Whether `var` is fixed along `∼_A` for the group at `group`.
    pub fn visible(&self, var: usize, group: usize) -> bool {
        self.var_agents[var].is_subset(self.groups[group].as_set())
    }

    /// `Δ ∼_A Δ′`: agreement on every formula whose agents lie within `A`.
    pub fn related(&self, t: &SigmaType, u: &SigmaType, group: usize) -> bool {
        (0..self.num_vars()).all(|v| !self.visible(v, group) || t.bits[v] == u.bits[v])
    }

    /// The members of a type, in closure order.
    pub fn members(&self, t: &SigmaType) -> Vec<&Formula> {
        (0..self.closure.len())
            .filter(|&i| t.holds(self.lit_of[i]))
            .map(|i| &self.closure.formulas()[i])
            .collect()
    }

    pub fn contains(&self, t: &SigmaType, phi: &Formula) -> Option<bool> {
        self.lit(phi).map(|l| t.holds(l))
    }

    /// Whether a truth assignment meets every type condition.
    pub fn is_type(&self, t: &SigmaType) -> bool {
        self.clauses.iter().all(|c| c.lits.iter().any(|&l| t.holds(l)))
    }

    fn clause(&mut self, condition: Condition, lits: Vec<Lit>) {
        self.clauses.push(Clause { condition, lits });
    }

    fn build_conditions(&mut self) {
        let formulas = self.closure.formulas().to_vec();
        let terms = self.closure.terms().to_vec();
        let eq = |x: &Term, y: &Term| Formula::eq(x.clone(), y.clone());

        for phi in &formulas {
            match phi {
                // 2: conjunction.
                Formula::And(a, b) => {
                    let (c, a, b) = (self.must(phi), self.must(a), self.must(b));
                    self.clause(2, vec![c.negate(), a]);
                    self.clause(2, vec![c.negate(), b]);
                    self.clause(2, vec![c, a.negate(), b.negate()]);
                }
                // 4: substitution of equals, one position at a time.
                Formula::Pred(p, args) => {
                    let atom = self.must(phi);
                    for (i, x) in args.iter().enumerate() {
                        for y in &terms {
                            if y == x {
                                continue;
                            }
                            let mut moved = args.clone();
                            moved[i] = y.clone();
                            let target = self.must(&Formula::pred(p.clone(), moved));
                            let same = self.must(&eq(x, y));
                            self.clause(4, vec![same.negate(), atom.negate(), target]);
                        }
                    }
                }
                // 7: veracity, plus the obligation behind (**).
                Formula::Know(g, body) => {
                    let (k, b) = (self.must(phi), self.must(body));
                    self.clause(7, vec![k.negate(), b]);
                    let group = self.group_index(g).expect("groups of Σ are over 𝒜_Σ");
                    self.knows.push(KnowObligation { know: k.var, group, body: b });
                }
                // 13: fixed point, plus the obligation behind (***).
                Formula::Common(sg, cond, body) => {
                    let (c, b) = (self.must(phi), self.must(body));
                    self.clause(13, vec![c.negate(), b]);
                    let mut groups = Vec::new();
                    for g in sg.groups() {
                        let unfold = self.must(&derived::know_cond(g, cond, phi.clone()));
                        self.clause(13, vec![c.negate(), unfold]);
                        groups.push(self.group_index(g).expect("groups of Σ are over 𝒜_Σ"));
                    }
                    let cond = self.must(cond);
                    self.commons.push(CommonObligation { common: c.var, groups, cond, body: b });
                }
                Formula::Not(_) | Formula::After(..) => {}
            }
        }

        for x in &terms {
            // 3: reflexivity.
            let refl = self.must(&eq(x, x));
            self.clause(3, vec![refl]);
            match x {
                // 5: functionality.
                Term::App(f, xs) => {
                    for y in &terms {
                        let Term::App(g, ys) = y else { continue };
                        if g != f || y == x {
                            continue;
                        }
                        let mut lits: Vec<Lit> = xs
                            .iter()
                            .zip(ys)
                            .filter(|(a, b)| a != b)
                            .map(|(a, b)| self.must(&eq(a, b)).negate())
                            .collect();
                        lits.push(self.must(&eq(x, y)));
                        self.clause(5, lits);
                    }
                }
                // 6: definition by cases.
                Term::Ite(then, cond, other) => {
                    let c = self.must(cond);
                    let first = self.must(&eq(x, then));
                    let second = self.must(&eq(x, other));
                    self.clause(6, vec![c.negate(), first]);
                    self.clause(6, vec![c, second]);
                }
                Term::Desc(base, g, cond) => self.desc_conditions(x, base, g, cond, &terms),
                Term::Const(_) | Term::Var(_) => {}
                Term::After(..) => unreachable!("closures are static"),
            }
        }
    }

    fn desc_conditions(&mut self, hyp: &Term, x: &Term, g: &Group, cond: &Formula, terms: &[Term]) {
        let eq = |a: &Term, b: &Term| Formula::eq(a.clone(), b.clone());
        let undef = Term::undef();
        let hyp_undef = self.must(&eq(hyp, &undef));
        let c = self.must(cond);
        // 8: a defined hypothetical value is known and has a witness.
        let knows = self.must(&derived::know_value(g, cond, x));
        let possible = self.must(&derived::possible(g, cond.clone()));
        self.clause(8, vec![hyp_undef, knows]);
        self.clause(8, vec![hyp_undef, possible]);
        // 9: where the condition holds, a defined hypothetical value is the value.
        let actual = self.must(&eq(x, hyp));
        self.clause(9, vec![c.negate(), hyp_undef, actual]);
        for y in terms {
            // 10: known equality under the condition transfers to hypothetical values.
            if let Term::Desc(y_base, h, y_cond) = y {
                if h == g && **y_cond == *cond {
                    let known = self.must(&derived::know_cond(g, cond, eq(x, y_base)));
                    let same = self.must(&eq(hyp, y));
                    self.clause(10, vec![known.negate(), same]);
                }
            }
            // 10 with 11 for constants `c` whose `c_A^φ` is not in Var_Σ:
            // a value known to be `c` under φ makes `x_A^φ` either `c` or `↑`.
            if let Term::Const(_) = y {
                let known = self.must(&derived::know_cond(g, cond, eq(x, y)));
                let is_c = self.must(&eq(hyp, y));
                self.clause(10, vec![known.negate(), is_c, hyp_undef]);
            }
            // 12: an undefined hypothetical value with a defined witness has a
            // differing witness for every value fixed within the group.
            let fixed = agents_of_term(y).is_ok_and(|a| a.is_subset(g.as_set()));
            if fixed {
                let x_undef = self.must(&eq(x, &undef));
                let differs = self.must(&derived::possible(
                    g,
                    Formula::and(cond.clone(), Formula::not(eq(x, y))),
                ));
                self.clause(12, vec![hyp_undef.negate(), c.negate(), x_undef, differs]);
            }
        }
        // 11: the hypothetical value of a constant is the constant or undefined.
        if let Term::Const(_) = x {
            let is_c = self.must(&eq(hyp, x));
            self.clause(11, vec![is_c, hyp_undef]);
        }
    }

    /// Calls `visit` on every Σ-type, backtracking over the variables in
    /// order and pruning as soon as a clause is fully assigned and false.
    pub fn for_each_type(&self, mut visit: impl FnMut(&SigmaType) -> ControlFlow<()>) {
        let n = self.num_vars();
        // Clauses are checked at their last variable.
        let mut at_last: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, c) in self.clauses.iter().enumerate() {
            let last = c.lits.iter().map(|l| l.var).max().expect("non-empty clause");
            at_last[last].push(i);
        }
        let mut bits = vec![false; n];
        // Candidate values still to try at each depth.
        let mut options: Vec<Vec<bool>> = Vec::with_capacity(n);
        let allowed = |bits: &mut Vec<bool>, v: usize| -> Vec<bool> {
            let mut ok = Vec::with_capacity(2);
            for value in [false, true] {
                bits[v] = value;
                let fine = at_last[v].iter().all(|&ci| {
                    self.clauses[ci].lits.iter().any(|l| bits[l.var] == l.positive)
                });
                if fine {
                    ok.push(value);
                }
            }
            ok
        };
        if n == 0 {
            let _ = visit(&SigmaType { bits });
            return;
        }
        options.push(allowed(&mut bits, 0));
        while !options.is_empty() {
            let depth = options.len() - 1;
            let Some(value) = options[depth].pop() else {
                options.pop();
                continue;
            };
            bits[depth] = value;
            if depth + 1 == n {
                if visit(&SigmaType { bits: bits.clone() }).is_break() {
                    return;
                }
            } else {
                let next = allowed(&mut bits, depth + 1);
                options.push(next);
            }
        }
    }

    /// All Σ-types, or `None` once more than `limit` have been found.
    pub fn enumerate_types(&self, limit: usize) -> Option<Vec<SigmaType>> {
        let mut out = Vec::new();
        let mut overflow = false;
        self.for_each_type(|t| {
            if out.len() == limit {
                overflow = true;
                return ControlFlow::Break(());
            }
            out.push(t.clone());
            ControlFlow::Continue(())
        });
        (!overflow).then_some(out)
    }
}

/// `Δ ∼_A Δ′` for a group given by value.
pub fn type_rel(space: &TypeSpace, t: &SigmaType, u: &SigmaType, group: &Group) -> bool {
    (0..space.num_vars()).all(|v| !space.var_agents(v).is_subset(group.as_set()) || t.bits[v] == u.bits[v])
}
