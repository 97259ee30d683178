//! Cosmetic clean-up of reduced output: `⊤`/`⊥` propagation, double
//! negation, and `x = x` for syntactically equal sides. Events are left as
//! they are, since their required preconditions are matched structurally.

use crate::lang::{derived, Formula, Term, EQ};

fn is_bot(f: &Formula) -> bool {
    matches!(f, Formula::Not(p) if derived::is_top(p))
}

pub fn simplify_formula(phi: &Formula) -> Formula {
    match phi {
        Formula::Pred(p, args) => {
            let args: Vec<Term> = args.iter().map(simplify_term).collect();
            if p == EQ && args.len() == 2 && args[0] == args[1] {
                derived::top()
            } else {
                Formula::Pred(p.clone(), args)
            }
        }
        Formula::Not(q) => match simplify_formula(q) {
            Formula::Not(r) => *r,
            q => Formula::not(q),
        },
        Formula::And(a, b) => {
            let (a, b) = (simplify_formula(a), simplify_formula(b));
            if derived::is_top(&a) {
                b
            } else if derived::is_top(&b) || a == b {
                a
            } else if is_bot(&a) || is_bot(&b) {
                derived::bot()
            } else {
                Formula::and(a, b)
            }
        }
        Formula::Know(g, q) => {
            let q = simplify_formula(q);
            if derived::is_top(&q) {
                q
            } else {
                Formula::know(g.clone(), q)
            }
        }
        Formula::Common(sg, c, q) => {
            let (c, q) = (simplify_formula(c), simplify_formula(q));
            if derived::is_top(&q) {
                q
            } else {
                Formula::common(sg.clone(), c, q)
            }
        }
        Formula::After(e, q) => Formula::after((**e).clone(), simplify_formula(q)),
    }
}

pub fn simplify_term(x: &Term) -> Term {
    match x {
        Term::Const(_) | Term::Var(_) => x.clone(),
        Term::Ite(y, c, z) => {
            let (y, c, z) = (simplify_term(y), simplify_formula(c), simplify_term(z));
            if derived::is_top(&c) || y == z {
                y
            } else if is_bot(&c) {
                z
            } else {
                Term::ite(y, c, z)
            }
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(simplify_term).collect()),
        Term::Desc(y, g, c) => Term::desc(simplify_term(y), g.clone(), simplify_formula(c)),
        Term::After(e, y) => Term::after((**e).clone(), simplify_term(y)),
    }
}
