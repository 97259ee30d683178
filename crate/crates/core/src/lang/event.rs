use std::fmt;

use super::{derived, Agent, BasicVar, Event, Group, Supergroup, VocabError, Vocabulary};

/// A broken well-formedness constraint of an event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventViolation {
    /// The agent's access set does not contain the agent herself.
    LosesOwnAccess(Agent),
    /// A reassigned variable whose new value the owner is not required to know.
    UnannouncedAssignment(BasicVar),
    /// The event mentions a symbol outside the vocabulary.
    Vocabulary(VocabError),
}

impl fmt::Display for EventViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventViolation::LosesOwnAccess(a) => write!(f, "{a} ∉ σ({a})"),
            EventViolation::UnannouncedAssignment(v) => {
                write!(f, "K_{} σ({v}) ∉ Φ", v.owner)
            }
            EventViolation::Vocabulary(e) => write!(f, "{e}"),
        }
    }
}

/// Lists every violated constraint; an empty list means the event is valid.
pub fn validate_event(e: &Event, voc: &Vocabulary) -> Vec<EventViolation> {
    let mut out = Vec::new();
    if let Err(err) = voc.check_event(e) {
        out.push(EventViolation::Vocabulary(err));
    }
    for (a, g) in e.access_entries() {
        if !g.contains(a) {
            out.push(EventViolation::LosesOwnAccess(a.clone()));
        }
    }
    let top = derived::top();
    for (v, t) in e.post_entries() {
        let owner = Group::singleton(v.owner.clone());
        let required = derived::know_value(&owner, &top, t);
        if !e.preconditions().contains(&required) {
            out.push(EventViolation::UnannouncedAssignment(v.clone()));
        }
    }
    out
}

/// `e(A) := ⋃_{a∈A} e(a)`.
pub fn extend_access(e: &Event, group: &Group) -> Group {
    let mut out = e.access_of(group.agents().next().expect("non-empty group"));
    for a in group.agents().skip(1) {
        out = out.union(&e.access_of(a));
    }
    out
}

/// `e[𝔄] := {e(A) : A ∈ 𝔄}`.
pub fn extend_access_super(e: &Event, sg: &Supergroup) -> Supergroup {
    Supergroup::new(sg.groups().map(|g| extend_access(e, g))).expect("non-empty supergroup")
}
