//! Backtracking recursive descent over the token stream.
//!
//! Every failed alternative records what it expected at the token where it
//! stopped; the diagnostic reported to the user is the one that got furthest.

use std::collections::BTreeMap;

use crate::lang::surface::{SEvent, SFormula, STerm};
use crate::lang::{Agent, BasicVar, Group, Supergroup, Vocabulary, EQ, UNDEF};

use super::lexer::{Tok, Token};
use super::ParseDiagnostic;

pub const KEYWORDS: &[&str] = &[
    "top", "bot", "undef", "if", "then", "else", "desc", "after", "K", "Kv", "C", "Cv", "event",
    "pre", "access", "set", "defined", "undefined",
];

#[derive(Debug)]
pub struct Fail;

pub type PResult<T> = Result<T, Fail>;

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    /// `None` parses without a vocabulary; symbols are collected afterwards.
    voc: Option<&'a Vocabulary>,
    best: Option<(usize, Vec<String>, Option<String>)>,
}

impl<'a> Parser<'a> {
    pub fn new(toks: Vec<Token>, voc: Option<&'a Vocabulary>) -> Self {
        Parser {
            toks,
            pos: 0,
            voc,
            best: None,
        }
    }

    pub fn diagnostic(&self) -> ParseDiagnostic {
        let (idx, expected, message) = match &self.best {
            Some((i, e, m)) => (*i, e.clone(), m.clone()),
            None => (self.pos, Vec::new(), None),
        };
        let tok = &self.toks[idx.min(self.toks.len() - 1)];
        let message = message.unwrap_or_else(|| format!("unexpected {}", tok.tok));
        let mut expected = expected;
        expected.sort();
        expected.dedup();
        ParseDiagnostic {
            pos: tok.pos,
            message,
            expected,
        }
    }

    fn record(&mut self, expected: Option<&str>, message: Option<String>) {
        let idx = self.pos;
        match &mut self.best {
            Some((i, e, m)) if *i == idx => {
                if let Some(x) = expected {
                    e.push(x.to_string());
                }
                // Later alternatives are the fallbacks, so their message is the more telling one.
                if message.is_some() {
                    *m = message;
                }
            }
            Some((i, _, _)) if *i > idx => {}
            _ => {
                self.best = Some((idx, expected.into_iter().map(str::to_string).collect(), message));
            }
        }
    }

    fn expected<T>(&mut self, what: &str) -> PResult<T> {
        self.record(Some(what), None);
        Err(Fail)
    }

    fn reject<T>(&mut self, message: String) -> PResult<T> {
        self.record(None, Some(message));
        Err(Fail)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.expected(&format!("`{s}`"))
        }
    }

    fn word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.expected(&format!("`{w}`"))
        }
    }

    /// Runs `f`, rewinding to the current position if it fails.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> Option<T> {
        let save = self.pos;
        match f(self) {
            Ok(v) => Some(v),
            Err(Fail) => {
                self.pos = save;
                None
            }
        }
    }

    pub fn end(&mut self) -> PResult<()> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.expected("end of input")
        }
    }

    /// An identifier that is not a keyword.
    fn name(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.expected(what),
        }
    }

    fn agent(&mut self) -> PResult<Agent> {
        let name = self.name("agent")?;
        if let Some(v) = self.voc {
            if !v.has_agent(&Agent::new(&name)) {
                self.pos -= 1;
                return self.reject(format!("unknown agent `{name}`"));
            }
        }
        Ok(Agent::new(name))
    }

    fn agent_list(&mut self) -> PResult<Vec<Agent>> {
        let mut out = vec![self.agent()?];
        while self.eat_sym(",") {
            out.push(self.agent()?);
        }
        Ok(out)
    }

    pub fn group(&mut self) -> PResult<Group> {
        self.sym("{")?;
        let agents = self.agent_list()?;
        self.sym("}")?;
        Ok(Group::new(agents).expect("non-empty"))
    }

    fn condition(&mut self) -> PResult<Option<Box<SFormula>>> {
        if self.eat_sym("|") {
            Ok(Some(Box::new(self.formula()?)))
        } else {
            Ok(None)
        }
    }

    /// `{a,b|θ}`.
    fn group_spec(&mut self) -> PResult<(Group, Option<Box<SFormula>>)> {
        self.sym("{")?;
        let agents = self.agent_list()?;
        let cond = self.condition()?;
        self.sym("}")?;
        Ok((Group::new(agents).expect("non-empty"), cond))
    }

    /// `{{a},{b,c}|θ}` or the flat `{a,b|θ}` for singleton groups.
    fn supergroup_spec(&mut self) -> PResult<(Supergroup, Option<Box<SFormula>>)> {
        self.sym("{")?;
        let sg = if self.is_sym("{") {
            let mut groups = vec![self.group()?];
            while self.eat_sym(",") {
                groups.push(self.group()?);
            }
            Supergroup::new(groups).expect("non-empty")
        } else {
            let agents = self.agent_list()?;
            Supergroup::singletons(&Group::new(agents).expect("non-empty"))
        };
        let cond = self.condition()?;
        self.sym("}")?;
        Ok((sg, cond))
    }

    pub fn formula(&mut self) -> PResult<SFormula> {
        let mut lhs = self.implication()?;
        while self.eat_sym("<->") {
            let rhs = self.implication()?;
            lhs = SFormula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<SFormula> {
        let lhs = self.disjunction()?;
        if self.eat_sym("->") {
            let rhs = self.implication()?;
            return Ok(SFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<SFormula> {
        let mut lhs = self.conjunction()?;
        while self.eat_sym("|") {
            let rhs = self.conjunction()?;
            lhs = SFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<SFormula> {
        let mut lhs = self.unary()?;
        while self.eat_sym("&") {
            let rhs = self.unary()?;
            lhs = SFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<SFormula> {
        if self.eat_sym("~") {
            return Ok(SFormula::Not(Box::new(self.unary()?)));
        }
        if self.eat_word("K") {
            let (g, cond) = self.group_spec()?;
            if let Some(body) = self.attempt(|p| p.unary()) {
                return Ok(SFormula::Know(g, cond, Box::new(body)));
            }
            let xs = self.term_tuple()?;
            return Ok(SFormula::KnowValue(g, cond, xs));
        }
        if self.eat_word("Kv") {
            let (g, cond) = self.group_spec()?;
            let xs = self.term_tuple()?;
            return Ok(SFormula::KnowValue(g, cond, xs));
        }
        if self.eat_word("C") {
            let (sg, cond) = self.supergroup_spec()?;
            if let Some(body) = self.attempt(|p| p.unary()) {
                return Ok(SFormula::Common(sg, cond, Box::new(body)));
            }
            let xs = self.term_tuple()?;
            return Ok(SFormula::CommonValue(sg, cond, xs));
        }
        if self.eat_word("Cv") {
            let (sg, cond) = self.supergroup_spec()?;
            let xs = self.term_tuple()?;
            return Ok(SFormula::CommonValue(sg, cond, xs));
        }
        if self.eat_sym("[") {
            let e = self.event()?;
            self.sym("]")?;
            let body = self.unary()?;
            return Ok(SFormula::Box(Box::new(e), Box::new(body)));
        }
        if self.is_sym("<") {
            if let Some(f) = self.attempt(|p| p.diamond()) {
                return Ok(f);
            }
        }
        self.atom()
    }

    fn diamond(&mut self) -> PResult<SFormula> {
        self.sym("<")?;
        if self.eat_word("K") {
            let (g, cond) = self.group_spec()?;
            self.sym(">")?;
            let body = self.unary()?;
            return Ok(SFormula::Possible(g, cond, Box::new(body)));
        }
        if self.eat_word("C") {
            let (sg, cond) = self.supergroup_spec()?;
            self.sym(">")?;
            let body = self.unary()?;
            return Ok(SFormula::PossibleCommon(sg, cond, Box::new(body)));
        }
        let e = self.event()?;
        self.sym(">")?;
        let body = self.unary()?;
        Ok(SFormula::Diamond(Box::new(e), Box::new(body)))
    }

    /// A single term, or a parenthesized tuple of two or more.
    fn term_tuple(&mut self) -> PResult<Vec<STerm>> {
        if self.is_sym("(") {
            let tuple = self.attempt(|p| {
                p.sym("(")?;
                let mut xs = vec![p.term()?];
                p.sym(",")?;
                xs.push(p.term()?);
                while p.eat_sym(",") {
                    xs.push(p.term()?);
                }
                p.sym(")")?;
                Ok(xs)
            });
            if let Some(xs) = tuple {
                return Ok(xs);
            }
        }
        Ok(vec![self.term()?])
    }

    fn atom(&mut self) -> PResult<SFormula> {
        if self.eat_word("top") {
            return Ok(SFormula::Top);
        }
        if self.eat_word("bot") {
            return Ok(SFormula::Bot);
        }
        if self.eat_word("defined") {
            self.sym("(")?;
            let xs = self.terms()?;
            self.sym(")")?;
            return Ok(SFormula::Defined(xs));
        }
        if self.eat_word("undefined") {
            self.sym("(")?;
            let x = self.term()?;
            self.sym(")")?;
            return Ok(SFormula::Undefined(Box::new(x)));
        }
        if let Some(f) = self.attempt(|p| p.comparison()) {
            return Ok(f);
        }
        if self.is_sym("(") {
            if let Some(f) = self.attempt(|p| {
                p.sym("(")?;
                let f = p.formula()?;
                p.sym(")")?;
                Ok(f)
            }) {
                return Ok(f);
            }
        }
        self.predicate()
    }

    fn comparison(&mut self) -> PResult<SFormula> {
        let lhs = self.term()?;
        let (op, swap, negate) = match self.peek() {
            Tok::Sym("=") => (EQ, false, false),
            Tok::Sym("!=") => (EQ, false, true),
            Tok::Sym("<") => ("lt", false, false),
            Tok::Sym("<=") => ("leq", false, false),
            Tok::Sym(">") => ("lt", true, false),
            Tok::Sym(">=") => ("leq", true, false),
            _ => return self.expected("comparison operator"),
        };
        if op != EQ {
            self.check_predicate(op, 2)?;
        }
        self.pos += 1;
        let rhs = self.term()?;
        let args = if swap { vec![rhs, lhs] } else { vec![lhs, rhs] };
        let atom = SFormula::Pred(op.to_string(), args);
        Ok(if negate {
            SFormula::Not(Box::new(atom))
        } else {
            atom
        })
    }

    fn check_predicate(&mut self, name: &str, arity: usize) -> PResult<()> {
        if let Some(v) = self.voc {
            match v.predicate_arity(name) {
                None => return self.reject(format!("unknown predicate `{name}`")),
                Some(n) if n != arity => {
                    return self.reject(format!("`{name}` expects {n} argument(s), found {arity}"))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn predicate(&mut self) -> PResult<SFormula> {
        let start = self.pos;
        let name = self.name("formula")?;
        if self.is_sym("@") {
            // `x@a` is a variable, never a proposition.
            return self.expected("formula");
        }
        let args = if self.is_sym("(") {
            self.sym("(")?;
            let args = if self.is_sym(")") { Vec::new() } else { self.terms()? };
            self.sym(")")?;
            args
        } else {
            Vec::new()
        };
        let end = self.pos;
        self.pos = start;
        self.check_predicate(&name, args.len())?;
        self.pos = end;
        Ok(SFormula::Pred(name, args))
    }

    fn terms(&mut self) -> PResult<Vec<STerm>> {
        let mut out = vec![self.term()?];
        while self.eat_sym(",") {
            out.push(self.term()?);
        }
        Ok(out)
    }

    pub fn term(&mut self) -> PResult<STerm> {
        if self.eat_word("if") {
            let cond = self.formula()?;
            self.word("then")?;
            let then = self.term()?;
            self.word("else")?;
            let other = self.term()?;
            return Ok(STerm::Ite(Box::new(then), Box::new(cond), Box::new(other)));
        }
        if self.eat_word("desc") {
            self.sym("(")?;
            let base = self.term()?;
            self.sym(",")?;
            let g = self.group()?;
            self.sym(",")?;
            let cond = self.formula()?;
            self.sym(")")?;
            return Ok(STerm::Desc(Box::new(base), g, Box::new(cond)));
        }
        if self.eat_word("after") {
            self.sym("(")?;
            let e = self.event()?;
            self.sym(",")?;
            let base = self.term()?;
            self.sym(")")?;
            return Ok(STerm::After(Box::new(e), Box::new(base)));
        }
        if self.eat_sym("?") {
            self.sym("(")?;
            let cond = self.formula()?;
            self.sym(")")?;
            return Ok(STerm::Test(Box::new(cond)));
        }
        if self.eat_word("undef") {
            return Ok(STerm::Const(UNDEF.to_string()));
        }
        if self.eat_sym("(") {
            let t = self.term()?;
            self.sym(")")?;
            return Ok(t);
        }
        let start = self.pos;
        let name = match self.peek().clone() {
            Tok::Num(n) => {
                self.pos += 1;
                n
            }
            _ => self.name("term")?,
        };
        if self.is_sym("@") && matches!(self.toks[start].tok, Tok::Ident(_)) {
            self.pos += 1;
            let owner_at = self.pos;
            let owner = self.name("agent")?;
            let var = BasicVar::new(name, owner);
            if let Some(v) = self.voc {
                if !v.has_var(&var) {
                    self.pos = owner_at;
                    return self.reject(format!("unknown variable `{var}`"));
                }
            }
            return Ok(STerm::Var(var));
        }
        if self.is_sym("(") && matches!(self.toks[start].tok, Tok::Ident(_)) {
            self.pos += 1;
            let args = if self.is_sym(")") { Vec::new() } else { self.terms()? };
            self.sym(")")?;
            if let Some(v) = self.voc {
                let end = self.pos;
                self.pos = start;
                match v.function_arity(&name) {
                    None => return self.reject(format!("unknown function `{name}`")),
                    Some(n) if n != args.len() => {
                        return self.reject(format!(
                            "`{name}` expects {n} argument(s), found {}",
                            args.len()
                        ))
                    }
                    Some(_) => {}
                }
                self.pos = end;
            }
            return Ok(STerm::App(name, args));
        }
        if let Some(v) = self.voc {
            if !v.has_constant(&name) {
                self.pos = start;
                return self.reject(format!("unknown constant `{name}`"));
            }
        }
        Ok(STerm::Const(name))
    }

    pub fn event(&mut self) -> PResult<SEvent> {
        if self.eat_word("event") {
            return self.full_event();
        }
        self.sym("!")?;
        self.sym("(")?;
        let mut e = SEvent {
            know_assigned: true,
            ..SEvent::default()
        };
        let mut shares: BTreeMap<Agent, Vec<Agent>> = BTreeMap::new();
        if !self.eat_sym(")") {
            loop {
                if let Some((a, d)) = self.attempt(|p| {
                    let a = p.agent()?;
                    p.sym(":")?;
                    let d = p.agent()?;
                    Ok((a, d))
                }) {
                    shares.entry(a.clone()).or_insert_with(|| vec![a]).push(d);
                } else if let Some((v, t)) = self.attempt(|p| p.assignment()) {
                    e.post.push((v, t));
                } else {
                    e.pre.push(self.formula()?);
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.sym(")")?;
        }
        e.access = shares
            .into_iter()
            .map(|(a, g)| (a, Group::new(g).expect("non-empty")))
            .collect();
        Ok(e)
    }

    fn assignment(&mut self) -> PResult<(BasicVar, STerm)> {
        let var = match self.term()? {
            STerm::Var(v) => v,
            _ => return self.expected("basic variable"),
        };
        self.sym(":=")?;
        let t = self.term()?;
        Ok((var, t))
    }

    /// `event { pre φ, ψ; access a -> {a,b}; set v@a := t }`, clauses in any order.
    fn full_event(&mut self) -> PResult<SEvent> {
        self.sym("{")?;
        let mut e = SEvent::default();
        loop {
            if self.eat_word("pre") {
                e.pre.push(self.formula()?);
                while self.eat_sym(",") {
                    e.pre.push(self.formula()?);
                }
            } else if self.eat_word("access") {
                loop {
                    let a = self.agent()?;
                    self.sym("->")?;
                    let g = self.group()?;
                    e.access.push((a, g));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            } else if self.eat_word("set") {
                loop {
                    e.post.push(self.assignment()?);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            } else {
                self.sym("}")?;
                return Ok(e);
            }
            if !self.eat_sym(";") {
                self.sym("}")?;
                return Ok(e);
            }
        }
    }
}
