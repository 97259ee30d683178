//! Satisfiability and validity.
//!
//! A static formula `φ₀` is satisfiable exactly when some quasi-model over
//! its closure `Σ(φ₀)` contains a type with `φ₀`. The largest quasi-model is
//! computed by eliminating types with unmet `K` or `C` obligations until
//! nothing changes. Dynamic formulas are reduced to static ones first.
//!
//! Two routes compute the elimination: [`symbolic`] over BDDs, which is the
//! one used by [`decide_sat`], and [`explicit`] over enumerated types, which
//! is only feasible for small closures and serves as a cross-check.

pub mod closure;
pub mod explicit;
pub mod symbolic;
pub mod types;

use crate::lang::Formula;
use crate::reducer::static_formula;

pub use closure::{build_closure, Closure, ClosureRule};
pub use types::{type_rel, Lit, SigmaType, TypeSpace};

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("closures are built from static formulas only")]
    NotStatic,
    #[error("closure exceeds {cap} formulas (added per rule: {})", .counts.iter().map(|(r, n)| format!("{r}={n}")).collect::<Vec<_>>().join(", "))]
    ClosureCap { cap: usize, counts: Vec<(String, usize)> },
    #[error("{0} closure formulas are too many for the symbolic encoding")]
    TooManyVariables(usize),
}

impl DecideError {
    /// Whether the failure is a resource limit rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        !matches!(self, DecideError::NotStatic)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub closure_cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { closure_cap: DEFAULT_CLOSURE_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A surviving type containing the formula, listed by its members.
    Sat { witness: Vec<Formula> },
    /// Nothing survives with the formula; the elimination log says why.
    Unsat { log: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub closure_size: usize,
    pub terms: usize,
    pub variables: usize,
    pub clauses: usize,
    pub types: String,
    pub survivors: String,
    pub rounds: usize,
}

#[derive(Clone, Debug)]
pub struct Decision {
    /// The static formula the procedure ran on.
    pub decided: Formula,
    pub verdict: Verdict,
    pub stats: Stats,
}

impl Decision {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat { .. })
    }
}

/// Builds the closure and type space of a static formula.
pub fn type_space(phi: &Formula, opts: &DecideOptions) -> Result<TypeSpace, DecideError> {
    TypeSpace::new(build_closure(phi, opts.closure_cap)?)
}

fn decide_static(phi: Formula, opts: &DecideOptions) -> Result<Decision, DecideError> {
    let space = type_space(&phi, opts)?;
    let sym = symbolic::Symbolic::new(&space)?;
    let fix = sym.fixpoint();
    let root = space.lit(&phi).expect("the root is in its closure");
    let with_root = fix.survivors.and(&sym.lit(root));
    let stats = Stats {
        closure_size: space.closure().len(),
        terms: space.closure().terms().len(),
        variables: space.num_vars(),
        clauses: space.clauses().len(),
        types: fix.types.exact_cardinality().to_string(),
        survivors: fix.survivors.exact_cardinality().to_string(),
        rounds: fix.rounds.len(),
    };
    let verdict = match with_root.sat_witness() {
        Some(v) => Verdict::Sat {
            witness: space.members(&sym.to_type(&v)).into_iter().cloned().collect(),
        },
        None => {
            let mut log = vec![format!("{} types over {} formulas", stats.types, stats.closure_size)];
            for r in &fix.rounds {
                for (var, n) in &r.removed {
                    let f = space.var_formula(*var);
                    log.push(format!("round {}: {n} types lack a witness for ~({f})", r.round));
                }
            }
            log.push(format!("{} types survive, none containing the formula", stats.survivors));
            Verdict::Unsat { log }
        }
    };
    Ok(Decision { decided: phi, verdict, stats })
}

/// Decides satisfiability, reducing dynamic input first.
pub fn decide_sat(phi: &Formula, opts: &DecideOptions) -> Result<Decision, DecideError> {
    decide_static(static_formula(phi), opts)
}

/// Decides validity as unsatisfiability of the negation; the returned
/// decision is about `¬φ`, so `φ` is valid exactly when it is UNSAT.
pub fn decide_valid(phi: &Formula, opts: &DecideOptions) -> Result<Decision, DecideError> {
    decide_static(Formula::not(static_formula(phi)), opts)
}

/// Satisfiability by explicit enumeration and elimination, or `None` when
/// the closure has more than `limit` types.
pub fn decide_sat_explicit(phi: &Formula, opts: &DecideOptions, limit: usize) -> Result<Option<bool>, DecideError> {
    let phi = static_formula(phi);
    let space = type_space(&phi, opts)?;
    let Some(types) = space.enumerate_types(limit) else {
        return Ok(None);
    };
    let (alive, _) = explicit::quasi_fixpoint(&space, &types);
    let root = space.lit(&phi).expect("the root is in its closure");
    Ok(Some(types.iter().zip(&alive).any(|(t, &a)| a && t.holds(root))))
}
