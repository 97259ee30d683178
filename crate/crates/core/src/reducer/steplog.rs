//! Text form of reduction steps: `rule @ path : before ==> after`, where
//! `path` is a dot-separated list of child indices and `.` is the root.

use std::fmt;

use crate::lang::Vocabulary;
use crate::syntax::{parse_formula_open, parse_term_open, ParseError};

use super::{Expr, ReductionStep, Rule};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Formula(x) => x.fmt(f),
            Expr::Term(x) => x.fmt(f),
        }
    }
}

fn path_text(path: &[usize]) -> String {
    if path.is_empty() {
        ".".to_string()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {} : {} ==> {}",
            self.rule.name(),
            path_text(&self.path),
            self.before,
            self.after
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StepParseError {
    #[error("expected `rule @ path : before ==> after`")]
    Shape,
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("bad path `{0}`")]
    Path(String),
    #[error("{side}: {source}")]
    Expr {
        side: &'static str,
        #[source]
        source: ParseError,
    },
}

/// Parses one step-log line; symbols missing from `voc` are inferred.
pub fn parse_step(line: &str, voc: &Vocabulary) -> Result<ReductionStep, StepParseError> {
    let (rule, rest) = line.split_once(" @ ").ok_or(StepParseError::Shape)?;
    let (path, rest) = rest.split_once(" : ").ok_or(StepParseError::Shape)?;
    let (before, after) = rest.split_once(" ==> ").ok_or(StepParseError::Shape)?;
    let rule = Rule::from_name(rule.trim()).ok_or_else(|| StepParseError::UnknownRule(rule.trim().to_string()))?;
    let path = match path.trim() {
        "." => Vec::new(),
        p => p
            .split('.')
            .map(|i| i.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| StepParseError::Path(p.to_string()))?,
    };
    let expr = |side: &'static str, src: &str| -> Result<Expr, StepParseError> {
        let wrap = |source| StepParseError::Expr { side, source };
        if rule.on_terms() {
            parse_term_open(src, voc).map(|(t, _)| Expr::Term(t)).map_err(wrap)
        } else {
            parse_formula_open(src, voc).map(|(f, _)| Expr::Formula(f)).map_err(wrap)
        }
    };
    Ok(ReductionStep {
        rule,
        path,
        before: expr("before", before)?,
        after: expr("after", after)?,
    })
}
