//! Concrete syntax: parsing and printing of expressions, model files and
//! scenario scripts.
//!
//! Expressions are parsed either against a fixed vocabulary (every symbol
//! must be declared) or in open mode, where the vocabulary is read off the
//! expression and returned alongside it.

mod lexer;
mod model_file;
mod parser;
mod printer;
mod script;

use std::fmt;

pub use model_file::{parse_model, print_model};
pub use parser::KEYWORDS;
pub use script::{parse_scenario, ModelSource, ScenarioScript, Step, StepTarget};

use crate::lang::surface::{SEvent, SFormula, STerm};
use crate::lang::{Event, Formula, Term, VocabError, Vocabulary, EQ};

use parser::{PResult, Parser};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}", .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ParseError {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseError {
    pub(crate) fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            diagnostics: vec![ParseDiagnostic {
                pos,
                message: message.into(),
                expected: Vec::new(),
            }],
        }
    }

    /// Shifts every position by a line offset and, on the first line, a column offset.
    pub(crate) fn shifted(mut self, line: usize, col: usize) -> Self {
        for d in &mut self.diagnostics {
            if d.pos.line == 1 {
                d.pos.col += col;
            }
            d.pos.line += line;
        }
        self
    }
}

impl From<ParseDiagnostic> for ParseError {
    fn from(d: ParseDiagnostic) -> Self {
        ParseError {
            diagnostics: vec![d],
        }
    }
}

fn run<T>(
    src: &str,
    voc: Option<&Vocabulary>,
    f: impl FnOnce(&mut Parser) -> PResult<T>,
) -> Result<T, ParseError> {
    let toks = lexer::tokenize(src)?;
    let mut p = Parser::new(toks, voc);
    let out = f(&mut p).and_then(|v| p.end().map(|_| v));
    out.map_err(|_| p.diagnostic().into())
}

fn checked<T>(value: T, voc: &Vocabulary, check: impl Fn(&Vocabulary, &T) -> Result<(), VocabError>) -> Result<T, ParseError> {
    check(voc, &value).map_err(|e| ParseError::at(Pos { line: 1, col: 1 }, e.to_string()))?;
    Ok(value)
}

/// Parses a formula whose symbols must all be declared in `voc`.
pub fn parse_formula(src: &str, voc: &Vocabulary) -> Result<Formula, ParseError> {
    let f = run(src, Some(voc), |p| p.formula())?.normalize();
    checked(f, voc, |v, f| v.check_formula(f))
}

pub fn parse_term(src: &str, voc: &Vocabulary) -> Result<Term, ParseError> {
    let t = run(src, Some(voc), |p| p.term())?.normalize();
    checked(t, voc, |v, t| v.check_term(t))
}

pub fn parse_event(src: &str, voc: &Vocabulary) -> Result<Event, ParseError> {
    let e = run(src, Some(voc), |p| p.event())?.normalize();
    checked(e, voc, |v, e| v.check_event(e))
}

/// Parses without declarations, extending `base` with every symbol used.
pub fn parse_formula_open(src: &str, base: &Vocabulary) -> Result<(Formula, Vocabulary), ParseError> {
    let f = run(src, None, |p| p.formula())?.normalize();
    let mut voc = base.clone();
    infer_formula(&mut voc, &f).map_err(|e| ParseError::at(Pos { line: 1, col: 1 }, e.to_string()))?;
    Ok((f, voc))
}

pub fn parse_term_open(src: &str, base: &Vocabulary) -> Result<(Term, Vocabulary), ParseError> {
    let t = run(src, None, |p| p.term())?.normalize();
    let mut voc = base.clone();
    infer_term(&mut voc, &t).map_err(|e| ParseError::at(Pos { line: 1, col: 1 }, e.to_string()))?;
    Ok((t, voc))
}

pub fn parse_event_open(src: &str, base: &Vocabulary) -> Result<(Event, Vocabulary), ParseError> {
    let e = run(src, None, |p| p.event())?.normalize();
    let mut voc = base.clone();
    infer_event(&mut voc, &e).map_err(|e| ParseError::at(Pos { line: 1, col: 1 }, e.to_string()))?;
    Ok((e, voc))
}

/// Parses to the surface tree, keeping abbreviations.
pub fn parse_surface_formula(src: &str, voc: Option<&Vocabulary>) -> Result<SFormula, ParseError> {
    run(src, voc, |p| p.formula())
}

pub fn parse_surface_term(src: &str, voc: Option<&Vocabulary>) -> Result<STerm, ParseError> {
    run(src, voc, |p| p.term())
}

pub fn parse_surface_event(src: &str, voc: Option<&Vocabulary>) -> Result<SEvent, ParseError> {
    run(src, voc, |p| p.event())
}

/// Adds every symbol of `phi` to `voc`.
pub fn infer_formula(voc: &mut Vocabulary, phi: &Formula) -> Result<(), VocabError> {
    match phi {
        Formula::Pred(p, args) => {
            if p != EQ {
                voc.add_predicate(p.clone(), args.len())?;
            }
            args.iter().try_for_each(|a| infer_term(voc, a))
        }
        Formula::Not(p) => infer_formula(voc, p),
        Formula::And(p, q) => {
            infer_formula(voc, p)?;
            infer_formula(voc, q)
        }
        Formula::Know(g, p) => {
            g.agents().for_each(|a| voc.add_agent(a.clone()));
            infer_formula(voc, p)
        }
        Formula::Common(sg, c, p) => {
            sg.agents().into_iter().for_each(|a| voc.add_agent(a));
            infer_formula(voc, c)?;
            infer_formula(voc, p)
        }
        Formula::After(e, p) => {
            infer_event(voc, e)?;
            infer_formula(voc, p)
        }
    }
}

pub fn infer_term(voc: &mut Vocabulary, t: &Term) -> Result<(), VocabError> {
    match t {
        Term::Const(c) => voc.add_constant(c.clone()),
        Term::Var(v) => {
            voc.add_agent(v.owner.clone());
            voc.add_var(v.clone())
        }
        Term::Ite(x, c, y) => {
            infer_term(voc, x)?;
            infer_formula(voc, c)?;
            infer_term(voc, y)
        }
        Term::App(f, args) => {
            voc.add_function(f.clone(), args.len())?;
            args.iter().try_for_each(|a| infer_term(voc, a))
        }
        Term::Desc(x, g, c) => {
            g.agents().for_each(|a| voc.add_agent(a.clone()));
            infer_term(voc, x)?;
            infer_formula(voc, c)
        }
        Term::After(e, x) => {
            infer_event(voc, e)?;
            infer_term(voc, x)
        }
    }
}

pub fn infer_event(voc: &mut Vocabulary, e: &Event) -> Result<(), VocabError> {
    for phi in e.preconditions() {
        infer_formula(voc, phi)?;
    }
    for (a, g) in e.access_entries() {
        voc.add_agent(a.clone());
        g.agents().for_each(|b| voc.add_agent(b.clone()));
    }
    for (v, t) in e.post_entries() {
        voc.add_agent(v.owner.clone());
        voc.add_var(v.clone())?;
        infer_term(voc, t)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
