//! Scenario scripts.
//!
//! ```text
//! model numbers-game 12        # or: model path/to/file.model
//! apply !(a:d)
//! assert K{a} (nd@d = 1) at s1_2_1
//! assert top at all
//! ```
//!
//! The `model` line comes first; the remaining lines are parsed against the
//! vocabulary of that model.

use std::path::{Path, PathBuf};

use crate::lang::{Event, Formula};
use crate::model::{build_numbers_game, EpistemicModel};

use super::lexer::{tokenize, Tok};
use super::{parse_event, parse_formula, parse_model, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSource {
    File(PathBuf),
    NumbersGame(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepTarget {
    All,
    State(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Apply { event: Event, line: usize },
    Assert { formula: Formula, target: StepTarget, line: usize },
}

impl Step {
    pub fn line(&self) -> usize {
        match self {
            Step::Apply { line, .. } | Step::Assert { line, .. } => *line,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioScript {
    pub model: ModelSource,
    pub steps: Vec<Step>,
}

/// Byte offset of a 1-based character column.
fn byte_at(line: &str, col: usize) -> usize {
    line.char_indices().nth(col - 1).map_or(line.len(), |(i, _)| i)
}

/// Parses a script and loads its model; model paths are relative to `base_dir`.
pub fn parse_scenario(src: &str, base_dir: Option<&Path>) -> Result<(ScenarioScript, EpistemicModel), ParseError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let (model_line, text) = lines
        .next()
        .ok_or_else(|| ParseError::at(Pos { line: 1, col: 1 }, "missing `model` line"))?;
    let here = |col: usize| Pos { line: model_line, col };
    let content = text.split('#').next().unwrap_or("").trim();
    let rest = content
        .strip_prefix("model")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| ParseError::at(here(1), "the first line must be `model <file>` or `model numbers-game <max>`"))?
        .trim();
    let (source, model) = if let Some(max) = rest.strip_prefix("numbers-game") {
        let max: u64 = max
            .trim()
            .parse()
            .map_err(|_| ParseError::at(here(1), "expected a bound after `numbers-game`"))?;
        let m = build_numbers_game(max).map_err(|e| ParseError::at(here(1), e.to_string()))?;
        (ModelSource::NumbersGame(max), m)
    } else {
        let rel = PathBuf::from(rest);
        let path = match base_dir {
            Some(dir) if rel.is_relative() => dir.join(&rel),
            _ => rel.clone(),
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ParseError::at(here(1), format!("cannot read `{}`: {e}", path.display())))?;
        let m = parse_model(&text).map_err(|e| {
            ParseError::at(here(1), format!("in model file `{}`: {e}", path.display()))
        })?;
        (ModelSource::File(rel), m)
    };
    let voc = model.vocab().clone();
    let mut steps = Vec::new();
    for (line_no, line) in lines {
        let code = line.split('#').next().unwrap_or("");
        let toks = tokenize(code).map_err(|d| ParseError::from(d).shifted(line_no - 1, 0))?;
        let first = &toks[0];
        let word = match &first.tok {
            Tok::Ident(w) => w.as_str(),
            _ => "",
        };
        let body_col = toks.get(1).map_or(code.len() + 1, |t| t.pos.col);
        match word {
            "apply" => {
                let body = &code[byte_at(code, body_col)..];
                let event = parse_event(body, &voc).map_err(|e| e.shifted(line_no - 1, body_col - 1))?;
                steps.push(Step::Apply { event, line: line_no });
            }
            "assert" => {
                let n = toks.len();
                let ok = n >= 5
                    && matches!(&toks[n - 3].tok, Tok::Ident(w) if w == "at")
                    && matches!(&toks[n - 2].tok, Tok::Ident(_) | Tok::Num(_));
                if !ok {
                    return Err(ParseError::at(
                        Pos { line: line_no, col: first.pos.col },
                        "expected `assert <formula> at <state|all>`",
                    ));
                }
                let target = match &toks[n - 2].tok {
                    Tok::Ident(w) if w == "all" => StepTarget::All,
                    Tok::Ident(w) | Tok::Num(w) => StepTarget::State(w.clone()),
                    _ => unreachable!(),
                };
                let at_col = toks[n - 3].pos.col;
                let body = &code[byte_at(code, body_col)..byte_at(code, at_col)];
                let formula = parse_formula(body, &voc).map_err(|e| e.shifted(line_no - 1, body_col - 1))?;
                steps.push(Step::Assert { formula, target, line: line_no });
            }
            _ => {
                return Err(ParseError::at(
                    Pos { line: line_no, col: first.pos.col },
                    "expected `apply` or `assert`",
                ))
            }
        }
    }
    Ok((ScenarioScript { model: source, steps }, model))
}
