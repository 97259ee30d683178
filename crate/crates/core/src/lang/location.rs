use std::collections::BTreeSet;

use super::{Agent, Formula, Term};

/// The agents an expression depends on.
pub type LocationSet = BTreeSet<Agent>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocationError {
    #[error("agent locations are only defined for static expressions")]
    Dynamic,
}

/// `𝒜(x)` for a static term.
///
/// A case term also depends on the agents of its condition, and a
/// hypothetical value `x_A^φ` depends on exactly `A`.
pub fn agents_of_term(t: &Term) -> Result<LocationSet, LocationError> {
    let mut out = LocationSet::new();
    collect_term(t, &mut out)?;
    Ok(out)
}

/// `𝒜(φ)` for a static formula.
///
/// `K_A φ` depends on exactly `A`; `C_𝔄^θ φ` on the union of `𝔄` together
/// with the agents of `φ` (θ is evaluated along chains, not at the state).
pub fn agents_of_formula(phi: &Formula) -> Result<LocationSet, LocationError> {
    let mut out = LocationSet::new();
    collect_formula(phi, &mut out)?;
    Ok(out)
}

fn collect_term(t: &Term, out: &mut LocationSet) -> Result<(), LocationError> {
    match t {
        Term::Const(_) => Ok(()),
        Term::Var(v) => {
            out.insert(v.owner.clone());
            Ok(())
        }
        Term::Ite(x, c, y) => {
            collect_term(x, out)?;
            collect_formula(c, out)?;
            collect_term(y, out)
        }
        Term::App(_, args) => args.iter().try_for_each(|a| collect_term(a, out)),
        Term::Desc(x, g, c) => {
            if !x.is_static() || !c.is_static() {
                return Err(LocationError::Dynamic);
            }
            out.extend(g.agents().cloned());
            Ok(())
        }
        Term::After(..) => Err(LocationError::Dynamic),
    }
}

fn collect_formula(phi: &Formula, out: &mut LocationSet) -> Result<(), LocationError> {
    match phi {
        Formula::Pred(_, args) => args.iter().try_for_each(|a| collect_term(a, out)),
        Formula::Not(p) => collect_formula(p, out),
        Formula::And(p, q) => {
            collect_formula(p, out)?;
            collect_formula(q, out)
        }
        Formula::Know(g, p) => {
            if !p.is_static() {
                return Err(LocationError::Dynamic);
            }
            out.extend(g.agents().cloned());
            Ok(())
        }
        Formula::Common(sg, c, p) => {
            if !c.is_static() {
                return Err(LocationError::Dynamic);
            }
            out.extend(sg.agents());
            collect_formula(p, out)
        }
        Formula::After(..) => Err(LocationError::Dynamic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{derived, Event, Group};

    fn set(names: &[&str]) -> LocationSet {
        names.iter().map(|n| Agent::new(*n)).collect()
    }

    #[test]
    fn basic_cases() {
        assert_eq!(agents_of_term(&Term::var("nd", "d")).unwrap(), set(&["d"]));
        assert_eq!(agents_of_term(&Term::constant("0")).unwrap(), set(&[]));
        let desc = Term::desc(
            Term::var("x", "c"),
            Group::of(&["a", "b"]),
            Formula::eq(Term::var("y", "d"), Term::constant("0")),
        );
        assert_eq!(agents_of_term(&desc).unwrap(), set(&["a", "b"]));
    }

    #[test]
    fn case_term_includes_condition() {
        let t = Term::ite(
            Term::constant("0"),
            Formula::eq(Term::var("y", "b"), Term::constant("1")),
            Term::var("x", "a"),
        );
        assert_eq!(agents_of_term(&t).unwrap(), set(&["a", "b"]));
    }

    #[test]
    fn dynamic_is_rejected() {
        let t = Term::after(Event::trivial(), Term::constant("0"));
        assert_eq!(agents_of_term(&t), Err(LocationError::Dynamic));
        let f = derived::diamond(&Event::trivial(), derived::top());
        assert_eq!(agents_of_formula(&f), Err(LocationError::Dynamic));
    }
}
