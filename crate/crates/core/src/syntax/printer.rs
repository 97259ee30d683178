//! Printing of primitive trees in the surface syntax.
//!
//! Abbreviations are recognized and printed in their short form whenever the
//! short form parses back to the same tree.

use std::fmt::{self, Display, Formatter, Write};

use crate::lang::{derived, Event, Formula, Group, Supergroup, Term, EQ, ONE, UNDEF, ZERO};

const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        formula(f, self, 0)
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        term(f, self)
    }
}

impl Display for Event {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        event(f, self)
    }
}

impl Display for Supergroup {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        supergroup_body(f, self)?;
        f.write_char('}')
    }
}

fn supergroup_body(f: &mut Formatter<'_>, sg: &Supergroup) -> fmt::Result {
    if sg.is_singletons() {
        let names: Vec<String> = sg.agents().iter().map(|a| a.to_string()).collect();
        f.write_str(&names.join(","))
    } else {
        let groups: Vec<String> = sg.groups().map(|g| g.to_string()).collect();
        f.write_str(&groups.join(","))
    }
}

fn agents(g: &Group) -> String {
    g.agents().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

fn condition(f: &mut Formatter<'_>, theta: &Formula) -> fmt::Result {
    if !derived::is_top(theta) {
        write!(f, "|{theta}")?;
    }
    Ok(())
}

/// `K_A(θ → x = x_A^θ)` viewed as `(A, θ, x)`.
fn as_know_value(g: &Group, body: &Formula) -> Option<(Formula, Term)> {
    let Formula::Not(inner) = body else { return None };
    let Formula::And(theta, neg) = &**inner else { return None };
    let Formula::Not(eq) = &**neg else { return None };
    let Formula::Pred(p, args) = &**eq else { return None };
    if p != EQ {
        return None;
    }
    let Term::Desc(base, g2, theta2) = &args[1] else { return None };
    (**base == args[0] && g2 == g && theta2 == theta).then(|| ((**theta).clone(), args[0].clone()))
}

fn paren(f: &mut Formatter<'_>, open: bool, body: impl FnOnce(&mut Formatter<'_>) -> fmt::Result) -> fmt::Result {
    if open {
        f.write_char('(')?;
    }
    body(f)?;
    if open {
        f.write_char(')')?;
    }
    Ok(())
}

fn formula(f: &mut Formatter<'_>, phi: &Formula, ctx: u8) -> fmt::Result {
    if derived::is_top(phi) {
        return f.write_str("top");
    }
    match phi {
        Formula::Pred(p, args) => predicate(f, p, args),
        Formula::Not(inner) => match &**inner {
            i if derived::is_top(i) => f.write_str("bot"),
            Formula::Pred(p, args) if p == EQ => {
                operand(f, &args[0])?;
                f.write_str(" != ")?;
                operand(f, &args[1])
            }
            Formula::And(l, r) => match (&**l, &**r) {
                (Formula::Not(l), Formula::Not(r)) => paren(f, ctx > OR, |f| {
                    formula(f, l, OR)?;
                    f.write_str(" | ")?;
                    formula(f, r, OR + 1)
                }),
                (l, Formula::Not(r)) => paren(f, ctx > IMP, |f| {
                    formula(f, l, IMP + 1)?;
                    f.write_str(" -> ")?;
                    formula(f, r, IMP)
                }),
                _ => {
                    f.write_char('~')?;
                    formula(f, inner, UNARY)
                }
            },
            Formula::Know(g, body) => match &**body {
                Formula::Not(b) if as_know_value(g, body).is_none() => {
                    write!(f, "<K{{{}}}> ", agents(g))?;
                    formula(f, b, UNARY)
                }
                _ => {
                    f.write_char('~')?;
                    formula(f, inner, UNARY)
                }
            },
            Formula::After(e, body) => match &**body {
                Formula::Not(b) => {
                    write!(f, "<{e}> ")?;
                    formula(f, b, UNARY)
                }
                _ => {
                    f.write_char('~')?;
                    formula(f, inner, UNARY)
                }
            },
            _ => {
                f.write_char('~')?;
                formula(f, inner, UNARY)
            }
        },
        Formula::And(l, r) => paren(f, ctx > AND, |f| {
            formula(f, l, AND)?;
            f.write_str(" & ")?;
            formula(f, r, AND + 1)
        }),
        Formula::Know(g, body) => {
            if let Some((theta, x)) = as_know_value(g, body) {
                write!(f, "Kv{{{}", agents(g))?;
                condition(f, &theta)?;
                f.write_str("} ")?;
                return term(f, &x);
            }
            write!(f, "K{{{}}} ", agents(g))?;
            formula(f, body, UNARY)
        }
        Formula::Common(sg, theta, body) => {
            f.write_str("C{")?;
            supergroup_body(f, sg)?;
            condition(f, theta)?;
            f.write_str("} ")?;
            formula(f, body, UNARY)
        }
        Formula::After(e, body) => {
            write!(f, "[{e}] ")?;
            formula(f, body, UNARY)
        }
    }
}

fn predicate(f: &mut Formatter<'_>, p: &str, args: &[Term]) -> fmt::Result {
    let infix = match (p, args.len()) {
        (EQ, 2) => Some("="),
        ("lt", 2) => Some("<"),
        ("leq", 2) => Some("<="),
        _ => None,
    };
    if let Some(op) = infix {
        operand(f, &args[0])?;
        write!(f, " {op} ")?;
        return operand(f, &args[1]);
    }
    f.write_str(p)?;
    if !args.is_empty() {
        arguments(f, args)?;
    }
    Ok(())
}

fn arguments(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        term(f, a)?;
    }
    f.write_char(')')
}

/// A term on either side of a comparison; case terms are bracketed.
fn operand(f: &mut Formatter<'_>, t: &Term) -> fmt::Result {
    let bracket = matches!(t, Term::Ite(..)) && as_test(t).is_none();
    paren(f, bracket, |f| term(f, t))
}

fn as_test(t: &Term) -> Option<&Formula> {
    match t {
        Term::Ite(x, c, y)
            if matches!(&**x, Term::Const(one) if one == ONE)
                && matches!(&**y, Term::Const(zero) if zero == ZERO) =>
        {
            Some(c)
        }
        _ => None,
    }
}

fn term(f: &mut Formatter<'_>, t: &Term) -> fmt::Result {
    if let Some(c) = as_test(t) {
        return write!(f, "?({c})");
    }
    match t {
        Term::Const(c) if c == UNDEF => f.write_str("undef"),
        Term::Const(c) => f.write_str(c),
        Term::Var(v) => write!(f, "{v}"),
        Term::Ite(x, c, y) => {
            write!(f, "if {c} then ")?;
            term(f, x)?;
            f.write_str(" else ")?;
            term(f, y)
        }
        Term::App(name, args) => {
            f.write_str(name)?;
            arguments(f, args)
        }
        Term::Desc(x, g, c) => {
            f.write_str("desc(")?;
            term(f, x)?;
            write!(f, ", {g}, {c})")
        }
        Term::After(e, x) => {
            write!(f, "after({e}, ")?;
            term(f, x)?;
            f.write_char(')')
        }
    }
}

/// The items of the `!(…)` form, when it reproduces `e` exactly.
fn sugar_items(e: &Event) -> Option<Vec<String>> {
    let mut items = Vec::new();
    for (a, g) in e.access_entries() {
        if !g.contains(a) {
            return None;
        }
        for d in g.agents().filter(|d| *d != a) {
            items.push(format!("{a}:{d}"));
        }
    }
    let top = derived::top();
    let required: Vec<Formula> = e
        .post_entries()
        .iter()
        .map(|(v, t)| derived::know_value(&Group::singleton(v.owner.clone()), &top, t))
        .collect();
    if !required.iter().all(|r| e.preconditions().contains(r)) {
        return None;
    }
    for phi in e.preconditions().iter().filter(|p| !required.contains(p)) {
        items.push(phi.to_string());
    }
    for (v, t) in e.post_entries() {
        items.push(format!("{v} := {t}"));
    }
    Some(items)
}

fn event(f: &mut Formatter<'_>, e: &Event) -> fmt::Result {
    if let Some(items) = sugar_items(e) {
        return write!(f, "!({})", items.join(", "));
    }
    f.write_str("event {")?;
    let mut clauses = Vec::new();
    if !e.preconditions().is_empty() {
        let pre: Vec<String> = e.preconditions().iter().map(|p| p.to_string()).collect();
        clauses.push(format!(" pre {}", pre.join(", ")));
    }
    if !e.access_entries().is_empty() {
        let acc: Vec<String> = e
            .access_entries()
            .iter()
            .map(|(a, g)| format!("{a} -> {g}"))
            .collect();
        clauses.push(format!(" access {}", acc.join(", ")));
    }
    if !e.post_entries().is_empty() {
        let set: Vec<String> = e
            .post_entries()
            .iter()
            .map(|(v, t)| format!("{v} := {t}"))
            .collect();
        clauses.push(format!(" set {}", set.join(", ")));
    }
    f.write_str(&clauses.join(";"))?;
    f.write_str(" }")
}
