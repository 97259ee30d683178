//! Model files.
//!
//! ```text
//! agents: a, b
//! domain: 0..2                 # values 0, 1, 2 and the undefined value U
//! var x@a
//! const c = 2
//! fun f/1 = table { (0) -> 1, default -> U }
//! fun plus/2 = saturating-add
//! pred lt/2 = builtin
//! pred p/1 = table { (0), (2) }
//! state s1 { x = 0 }
//! state s2 { x@a = 1 }
//! rel a: partition { {s1}, {s2} }
//! rel b: universal
//! ```
//!
//! Every non-undefined value is also a constant of the same name. When the
//! domain has no value named `0` (or `1`), that constant denotes the first
//! (second) value unless declared with `const`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::Arc;

use crate::lang::{Agent, BasicVar, Vocabulary, ONE, UNDEF, ZERO};
use crate::model::{EpistemicModel, FirstOrderModel, FunInterp, Partition, PredInterp, Value};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, Pos, KEYWORDS};

/// Name of the undefined value in model files.
pub const UNDEF_VALUE: &str = "U";

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

type R<T> = Result<T, ParseError>;

impl Cursor {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].pos
    }

    fn fail<T>(&self, expected: &str) -> R<T> {
        Err(ParseError::at(
            self.here(),
            format!("unexpected {}, expected {expected}", self.peek()),
        ))
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> R<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(t) if t == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, w: &str) -> R<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.fail(&format!("`{w}`"))
        }
    }

    fn ident(&mut self) -> R<(String, Pos)> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok((s, pos))
            }
            _ => self.fail("a name"),
        }
    }

    /// A domain value: a name or a numeral.
    fn value(&mut self) -> R<(String, Pos)> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Num(s) => {
                self.pos += 1;
                Ok((s, pos))
            }
            _ => self.fail("a value"),
        }
    }

    fn number(&mut self) -> R<u64> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.pos += 1;
                s.parse().map_err(|_| ParseError::at(self.toks[self.pos - 1].pos, "number too large"))
            }
            _ => self.fail("a number"),
        }
    }

    fn comma_list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> R<T>) -> R<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.eat(",");
        }
    }
}

enum FunSpec {
    Table(Vec<(Vec<(String, Pos)>, (String, Pos))>, Option<(String, Pos)>),
    SaturatingAdd,
}

enum PredSpec {
    Table(Vec<Vec<(String, Pos)>>),
    Builtin(Pos),
}

enum RelSpec {
    Partition(Vec<Vec<(String, Pos)>>),
    Universal,
    Discrete,
}

#[derive(Default)]
struct Decls {
    agents: Vec<(String, Pos)>,
    domain: Option<(Vec<String>, Pos)>,
    vars: Vec<(String, String, Pos)>,
    consts: Vec<((String, Pos), (String, Pos))>,
    funs: Vec<((String, Pos), usize, FunSpec)>,
    preds: Vec<((String, Pos), usize, PredSpec)>,
    states: Vec<((String, Pos), Vec<((String, Option<String>, Pos), (String, Pos))>)>,
    rels: Vec<((String, Pos), RelSpec)>,
}

fn read_decls(c: &mut Cursor) -> R<Decls> {
    let mut d = Decls::default();
    loop {
        let start = c.here();
        if matches!(c.peek(), Tok::Eof) {
            return Ok(d);
        }
        if c.eat_word("agents") {
            c.sym(":")?;
            d.agents.push(c.ident()?);
            while c.eat(",") {
                d.agents.push(c.ident()?);
            }
        } else if c.eat_word("domain") {
            c.sym(":")?;
            if d.domain.is_some() {
                return Err(ParseError::at(start, "domain declared twice"));
            }
            let values = if c.eat("{") {
                c.comma_list("}", |c| Ok(c.value()?.0))?
            } else {
                let lo = c.number()?;
                c.sym("..")?;
                let hi = c.number()?;
                if hi < lo {
                    return Err(ParseError::at(start, "empty range"));
                }
                (lo..=hi).map(|i| i.to_string()).collect()
            };
            d.domain = Some((values, start));
        } else if c.eat_word("var") {
            let (name, pos) = c.ident()?;
            c.sym("@")?;
            let (owner, _) = c.ident()?;
            d.vars.push((name, owner, pos));
        } else if c.eat_word("const") {
            let name = c.value()?;
            c.sym("=")?;
            d.consts.push((name, c.value()?));
        } else if c.eat_word("fun") || c.eat_word("pred") {
            let is_fun = matches!(&c.toks[c.pos - 1].tok, Tok::Ident(w) if w == "fun");
            let name = c.ident()?;
            c.sym("/")?;
            let arity = c.number()? as usize;
            c.sym("=")?;
            if is_fun {
                let spec = if c.eat_word("saturating") {
                    c.sym("-")?;
                    c.word("add")?;
                    FunSpec::SaturatingAdd
                } else {
                    c.word("table")?;
                    c.sym("{")?;
                    let mut rows = Vec::new();
                    let mut default = None;
                    while !c.eat("}") {
                        if c.eat_word("default") {
                            c.sym("->")?;
                            default = Some(c.value()?);
                        } else {
                            c.sym("(")?;
                            let args = c.comma_list(")", |c| c.value())?;
                            c.sym("->")?;
                            rows.push((args, c.value()?));
                        }
                        c.eat(",");
                    }
                    FunSpec::Table(rows, default)
                };
                d.funs.push((name, arity, spec));
            } else {
                let spec = if matches!(c.peek(), Tok::Ident(w) if w == "builtin") {
                    let pos = c.here();
                    c.pos += 1;
                    PredSpec::Builtin(pos)
                } else {
                    c.word("table")?;
                    c.sym("{")?;
                    let mut rows = Vec::new();
                    while !c.eat("}") {
                        c.sym("(")?;
                        rows.push(c.comma_list(")", |c| c.value())?);
                        c.eat(",");
                    }
                    PredSpec::Table(rows)
                };
                d.preds.push((name, arity, spec));
            }
        } else if c.eat_word("state") {
            let name = c.ident()?;
            c.sym("{")?;
            let assigns = c.comma_list("}", |c| {
                let (var, pos) = c.ident()?;
                let owner = if c.eat("@") { Some(c.ident()?.0) } else { None };
                c.sym("=")?;
                Ok(((var, owner, pos), c.value()?))
            })?;
            d.states.push((name, assigns));
        } else if c.eat_word("rel") {
            let agent = c.ident()?;
            c.sym(":")?;
            let spec = if c.eat_word("universal") {
                RelSpec::Universal
            } else if c.eat_word("discrete") {
                RelSpec::Discrete
            } else {
                c.word("partition")?;
                c.sym("{")?;
                RelSpec::Partition(c.comma_list("}", |c| {
                    c.sym("{")?;
                    c.comma_list("}", |c| c.ident())
                })?)
            };
            d.rels.push((agent, spec));
        } else {
            return c.fail("a declaration (agents, domain, var, const, fun, pred, state, rel)");
        }
    }
}

/// Parses a model file into its vocabulary and model.
pub fn parse_model(src: &str) -> Result<EpistemicModel, ParseError> {
    let toks = tokenize(src)?;
    let mut c = Cursor { toks, pos: 0 };
    let d = read_decls(&mut c)?;
    build(d)
}

fn build(d: Decls) -> R<EpistemicModel> {
    let origin = Pos { line: 1, col: 1 };
    let err = |pos: Pos, e: &dyn std::fmt::Display| ParseError::at(pos, e.to_string());

    let mut voc = Vocabulary::new();
    for (a, _) in &d.agents {
        voc.add_agent(Agent::new(a));
    }
    let (mut values, dom_pos) = d
        .domain
        .ok_or_else(|| ParseError::at(origin, "missing `domain:` declaration"))?;
    if !values.iter().any(|v| v == UNDEF_VALUE) {
        values.push(UNDEF_VALUE.to_string());
    }
    if let Some(k) = values.iter().find(|v| KEYWORDS.contains(&v.as_str()) || v.as_str() == UNDEF) {
        return Err(ParseError::at(dom_pos, format!("`{k}` is reserved and cannot be a value")));
    }
    let undef = values.iter().position(|v| v == UNDEF_VALUE).expect("added above");
    let mut fom = FirstOrderModel::new(values.clone(), undef).map_err(|e| err(dom_pos, &e))?;
    let proper: Vec<Value> = (0..values.len()).filter(|&i| i != undef).collect();
    for &i in &proper {
        voc.add_constant(values[i].clone()).map_err(|e| err(dom_pos, &e))?;
    }
    let lookup = |(name, pos): &(String, Pos)| -> R<Value> {
        values
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ParseError::at(*pos, format!("unknown value `{name}`")))
    };
    for (k, name) in [(0, ZERO), (1, ONE)] {
        if fom.constant(name).is_none() {
            let v = *proper.get(k).or(proper.first()).unwrap_or(&undef);
            fom.set_constant(name, v).map_err(|e| err(dom_pos, &e))?;
        }
    }
    for (name, value) in &d.consts {
        let v = lookup(value)?;
        voc.add_constant(name.0.clone()).map_err(|e| err(name.1, &e))?;
        fom.set_constant(name.0.clone(), v).map_err(|e| err(name.1, &e))?;
    }
    for (name, owner, pos) in &d.vars {
        voc.add_var(BasicVar::new(name, owner)).map_err(|e| err(*pos, &e))?;
    }
    for (name, arity, spec) in &d.funs {
        let interp = match spec {
            FunSpec::SaturatingAdd => FunInterp::SaturatingAdd,
            FunSpec::Table(rows, default) => {
                let mut table = BTreeMap::new();
                for (args, out) in rows {
                    if args.len() != *arity {
                        return Err(ParseError::at(name.1, format!("row of wrong length in `{}`", name.0)));
                    }
                    let args = args.iter().map(lookup).collect::<R<Vec<_>>>()?;
                    table.insert(args, lookup(out)?);
                }
                if let Some(def) = default {
                    let def = lookup(def)?;
                    for args in tuples(values.len(), *arity) {
                        table.entry(args).or_insert(def);
                    }
                }
                FunInterp::Table(table)
            }
        };
        voc.add_function(name.0.clone(), *arity).map_err(|e| err(name.1, &e))?;
        fom.set_function(name.0.clone(), *arity, interp).map_err(|e| err(name.1, &e))?;
    }
    for (name, arity, spec) in &d.preds {
        let interp = match spec {
            PredSpec::Builtin(pos) => match (name.0.as_str(), arity) {
                ("lt", 2) => PredInterp::Less,
                ("leq", 2) => PredInterp::LessEq,
                _ => return Err(ParseError::at(*pos, format!("no builtin for `{}/{arity}`", name.0))),
            },
            PredSpec::Table(rows) => {
                let mut set = BTreeSet::new();
                for row in rows {
                    if row.len() != *arity {
                        return Err(ParseError::at(name.1, format!("row of wrong length in `{}`", name.0)));
                    }
                    set.insert(row.iter().map(lookup).collect::<R<Vec<_>>>()?);
                }
                PredInterp::Table(set)
            }
        };
        voc.add_predicate(name.0.clone(), *arity).map_err(|e| err(name.1, &e))?;
        fom.set_predicate(name.0.clone(), *arity, interp).map_err(|e| err(name.1, &e))?;
    }

    let vars: Vec<BasicVar> = voc.vars().iter().cloned().collect();
    let mut names = Vec::new();
    let mut valuation = Vec::new();
    for ((sname, spos), assigns) in &d.states {
        if names.contains(sname) {
            return Err(ParseError::at(*spos, format!("state `{sname}` declared twice")));
        }
        let mut row: Vec<Option<Value>> = vec![None; vars.len()];
        for ((var, owner, pos), value) in assigns {
            let matching: Vec<usize> = (0..vars.len())
                .filter(|&i| vars[i].name == *var && owner.as_ref().is_none_or(|o| vars[i].owner.name() == o))
                .collect();
            let i = match matching.as_slice() {
                [i] => *i,
                [] => return Err(ParseError::at(*pos, format!("unknown variable `{var}`"))),
                _ => return Err(ParseError::at(*pos, format!("ambiguous variable `{var}`; add its owner"))),
            };
            row[i] = Some(lookup(value)?);
        }
        let row = row
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ParseError::at(*spos, format!("state `{sname}` gives no value to `{}`", vars[i]))))
            .collect::<R<Vec<_>>>()?;
        names.push(sname.clone());
        valuation.push(row);
    }
    let n = names.len();
    let mut relations = BTreeMap::new();
    for ((agent, apos), spec) in &d.rels {
        let part = match spec {
            RelSpec::Universal => Partition::universal(n),
            RelSpec::Discrete => Partition::discrete(n),
            RelSpec::Partition(blocks) => {
                let blocks = blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|(s, p)| {
                                names
                                    .iter()
                                    .position(|x| x == s)
                                    .ok_or_else(|| ParseError::at(*p, format!("unknown state `{s}`")))
                            })
                            .collect::<R<Vec<_>>>()
                    })
                    .collect::<R<Vec<_>>>()?;
                Partition::from_blocks(n, &blocks).ok_or_else(|| {
                    ParseError::at(*apos, format!("relation of `{agent}` must list every state exactly once"))
                })?
            }
        };
        if relations.insert(Agent::new(agent), part).is_some() {
            return Err(ParseError::at(*apos, format!("relation of `{agent}` declared twice")));
        }
    }
    EpistemicModel::new(Arc::new(voc), Arc::new(fom), names, relations, valuation)
        .map_err(|e| ParseError::at(origin, e.to_string()))
}

/// All tuples over `0..n` of the given length, in lexicographic order.
fn tuples(n: usize, len: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Writes a model in the model-file format; parsing the output gives back an
/// equivalent model.
pub fn print_model(m: &EpistemicModel) -> String {
    let fom = m.fom();
    let voc = m.vocab();
    let mut out = String::new();
    let agents: Vec<String> = voc.agents().iter().map(|a| a.to_string()).collect();
    writeln!(out, "agents: {}", agents.join(", ")).unwrap();
    let dom = fom.domain();
    let proper: Vec<&String> = dom.iter().enumerate().filter(|&(i, _)| i != fom.undef()).map(|(_, v)| v).collect();
    let is_range = dom[fom.undef()] == UNDEF_VALUE
        && fom.undef() == dom.len() - 1
        && !proper.is_empty()
        && proper.iter().enumerate().all(|(i, v)| **v == (i as u64 + first_num(&proper)).to_string());
    if is_range {
        writeln!(out, "domain: {}..{}", proper[0], proper[proper.len() - 1]).unwrap();
    } else {
        let all: Vec<&str> = dom.iter().map(String::as_str).collect();
        writeln!(out, "domain: {{{}}}", all.join(", ")).unwrap();
    }
    for v in voc.vars() {
        writeln!(out, "var {v}").unwrap();
    }
    for (name, &v) in fom.constants() {
        let same_named = fom.value_named(name) == Some(v) && v != fom.undef();
        if name == UNDEF || same_named {
            continue;
        }
        let k = if name == ZERO { Some(0) } else if name == ONE { Some(1) } else { None };
        if let Some(k) = k {
            let proper_idx: Vec<Value> = (0..dom.len()).filter(|&i| i != fom.undef()).collect();
            let default = *proper_idx.get(k).or(proper_idx.first()).unwrap_or(&fom.undef());
            if fom.value_named(name).is_none() && v == default {
                continue;
            }
        }
        writeln!(out, "const {name} = {}", fom.value_name(v)).unwrap();
    }
    for (name, (arity, interp)) in fom.functions() {
        match interp {
            FunInterp::SaturatingAdd => writeln!(out, "fun {name}/{arity} = saturating-add").unwrap(),
            FunInterp::Table(t) => {
                let rows: Vec<String> = t
                    .iter()
                    .map(|(args, &v)| {
                        let args: Vec<&str> = args.iter().map(|&a| fom.value_name(a)).collect();
                        format!("({}) -> {}", args.join(", "), fom.value_name(v))
                    })
                    .collect();
                writeln!(out, "fun {name}/{arity} = table {{ {} }}", rows.join(", ")).unwrap();
            }
        }
    }
    for (name, (arity, interp)) in fom.predicates() {
        match interp {
            PredInterp::Less | PredInterp::LessEq => {
                writeln!(out, "pred {name}/{arity} = builtin").unwrap()
            }
            PredInterp::Table(t) => {
                let rows: Vec<String> = t
                    .iter()
                    .map(|args| {
                        let args: Vec<&str> = args.iter().map(|&a| fom.value_name(a)).collect();
                        format!("({})", args.join(", "))
                    })
                    .collect();
                writeln!(out, "pred {name}/{arity} = table {{ {} }}", rows.join(", ")).unwrap();
            }
        }
    }
    for s in 0..m.num_states() {
        let vals: Vec<String> = m
            .vars()
            .iter()
            .zip(m.valuation_row(s))
            .map(|(v, &d)| format!("{v} = {}", fom.value_name(d)))
            .collect();
        writeln!(out, "state {} {{ {} }}", m.state_name(s), vals.join(", ")).unwrap();
    }
    for (a, part) in m.relations() {
        if part.num_blocks() == 1 {
            writeln!(out, "rel {a}: universal").unwrap();
            continue;
        }
        let blocks: Vec<String> = part
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&s| m.state_name(s)).collect();
                format!("{{{}}}", names.join(", "))
            })
            .collect();
        writeln!(out, "rel {a}: partition {{ {} }}", blocks.join(", ")).unwrap();
    }
    out
}

fn first_num(proper: &[&String]) -> u64 {
    proper[0].parse().unwrap_or(u64::MAX / 2)
}
