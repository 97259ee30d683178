//! Running scenario scripts.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::checker::{CheckError, Checker};
use crate::lang::{Event, Formula};
use crate::model::EpistemicModel;
use crate::syntax::{ScenarioScript, Step, StepTarget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Applied {
        event: Event,
        before: usize,
        after: usize,
    },
    Asserted {
        formula: Formula,
        target: StepTarget,
        /// States where the formula is false, by name.
        failing: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub line: usize,
    pub outcome: Outcome,
    pub elapsed: Option<Duration>,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        match &self.outcome {
            Outcome::Applied { .. } => true,
            Outcome::Asserted { failing, .. } => failing.is_empty(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub initial_states: usize,
    pub steps: Vec<StepReport>,
    pub final_model: Arc<EpistemicModel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    /// One `key=value` record per line.
    Kv,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.steps.iter().filter(|s| !s.passed()).count()
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        let m = &self.final_model;
        match format {
            ReportFormat::Text => {
                let _ = writeln!(out, "initial model: {} states", self.initial_states);
                for (i, s) in self.steps.iter().enumerate() {
                    let n = i + 1;
                    match &s.outcome {
                        Outcome::Applied { event, before, after } => {
                            let _ = write!(out, "step {n} (line {}): apply {event}: {before} -> {after} states", s.line);
                        }
                        Outcome::Asserted { formula, target, failing } => {
                            let verdict = if failing.is_empty() { "ok" } else { "FAILED" };
                            let _ = write!(out, "step {n} (line {}): assert {formula} at {}: {verdict}", s.line, target_name(target));
                            if !failing.is_empty() {
                                let _ = write!(out, " (false at {})", failing.join(", "));
                            }
                        }
                    }
                    if let Some(d) = s.elapsed {
                        let _ = write!(out, " [{:.3} ms]", d.as_secs_f64() * 1e3);
                    }
                    out.push('\n');
                }
                let _ = writeln!(out, "final model: {} states", m.num_states());
                for st in 0..m.num_states().min(20) {
                    let _ = writeln!(out, "  {}", m.describe_state(st));
                }
                if m.num_states() > 20 {
                    let _ = writeln!(out, "  ... {} more", m.num_states() - 20);
                }
                let _ = writeln!(out, "assertions failed: {}", self.failures());
            }
            ReportFormat::Kv => {
                let _ = writeln!(out, "initial_states={}", self.initial_states);
                for (i, s) in self.steps.iter().enumerate() {
                    let _ = write!(out, "step={} line={}", i + 1, s.line);
                    match &s.outcome {
                        Outcome::Applied { before, after, .. } => {
                            let _ = write!(out, " kind=apply before={before} after={after}");
                        }
                        Outcome::Asserted { target, failing, .. } => {
                            let _ = write!(
                                out,
                                " kind=assert target={} passed={} failing={}",
                                target_name(target),
                                failing.is_empty(),
                                failing.join(",")
                            );
                        }
                    }
                    if let Some(d) = s.elapsed {
                        let _ = write!(out, " micros={}", d.as_micros());
                    }
                    out.push('\n');
                }
                let _ = writeln!(out, "final_states={}", m.num_states());
                let _ = writeln!(out, "failures={}", self.failures());
            }
        }
        out
    }
}

fn target_name(t: &StepTarget) -> &str {
    match t {
        StepTarget::All => "all",
        StepTarget::State(s) => s,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {source}")]
    Check { line: usize, source: CheckError },
    #[error("line {line}: no state named `{state}` in the current model")]
    UnknownState { line: usize, state: String },
}

/// Runs every step in order. Failed assertions are reported, not fatal.
pub fn run_scenario(script: &ScenarioScript, model: EpistemicModel, timing: bool) -> Result<RunReport, ScenarioError> {
    let checker = Checker::new();
    let initial_states = model.num_states();
    let mut current = Arc::new(model);
    let mut steps = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        let start = Instant::now();
        let line = step.line();
        let outcome = match step {
            Step::Apply { event, .. } => {
                let before = current.num_states();
                let (next, _) = checker
                    .update(&current, event)
                    .map_err(|source| ScenarioError::Check { line, source })?;
                current = next;
                Outcome::Applied { event: event.clone(), before, after: current.num_states() }
            }
            Step::Assert { formula, target, .. } => {
                let ext = checker
                    .extension(&current, formula)
                    .map_err(|source| ScenarioError::Check { line, source })?;
                let states: Vec<usize> = match target {
                    StepTarget::All => (0..current.num_states()).collect(),
                    StepTarget::State(name) => vec![current
                        .state_named(name)
                        .ok_or_else(|| ScenarioError::UnknownState { line, state: name.clone() })?],
                };
                let failing = states
                    .into_iter()
                    .filter(|&s| !ext[s])
                    .map(|s| current.state_name(s).to_string())
                    .collect();
                Outcome::Asserted { formula: formula.clone(), target: target.clone(), failing }
            }
        };
        steps.push(StepReport { line, outcome, elapsed: timing.then(|| start.elapsed()) });
    }
    Ok(RunReport { initial_states, steps, final_model: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_scenario;

    fn run(src: &str) -> RunReport {
        let (script, model) = parse_scenario(src, None).unwrap();
        run_scenario(&script, model, false).unwrap()
    }

    #[test]
    fn empty_script_keeps_the_model() {
        let r = run("model numbers-game 3\n");
        assert!(r.steps.is_empty());
        assert_eq!(r.initial_states, 16);
        assert_eq!(r.final_model.num_states(), 16);
    }

    #[test]
    fn announcements_shrink_and_failures_are_listed() {
        let r = run("model numbers-game 3\nassert top at all\napply !(nd@d = 1)\nassert nd@d = 0 at all\n");
        assert_eq!(r.steps.len(), 3);
        let Outcome::Applied { before, after, .. } = r.steps[1].outcome else { panic!() };
        assert!(after < before);
        assert!(r.steps[0].passed());
        assert!(!r.steps[2].passed());
        assert_eq!(r.failures(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let src = "model numbers-game 4\napply !(a:d)\nassert top at all\n";
        for format in [ReportFormat::Text, ReportFormat::Kv] {
            assert_eq!(run(src).render(format), run(src).render(format));
        }
        assert!(run(src).render(ReportFormat::Kv).contains("kind=apply"));
    }
}
