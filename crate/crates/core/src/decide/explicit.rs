//! Quasi-model elimination over an explicit list of types.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::types::{SigmaType, TypeSpace};

/// Why a type was removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// `K_A ψ ∉ Δ` but no surviving `A`-related type lacks `ψ`.
    Know { know: usize },
    /// `C_𝔄^θ φ ∉ Δ` but no surviving `θ`-chain reaches a type lacking `φ`.
    Common { common: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub round: usize,
    pub removed: usize,
    pub reason: Reason,
}

/// The first obligation `types[t]` fails among the survivors, if any.
fn violation(space: &TypeSpace, types: &[SigmaType], alive: &[bool], t: usize) -> Option<Reason> {
    let me = &types[t];
    let peers = |group: usize| {
        (0..types.len()).filter(move |&u| alive[u] && space.related(me, &types[u], group))
    };
    for k in space.know_obligations() {
        if !me.bits[k.know] && !peers(k.group).any(|u| !types[u].holds(k.body)) {
            return Some(Reason::Know { know: k.know });
        }
    }
    for c in space.common_obligations() {
        if me.bits[c.common] {
            continue;
        }
        // Breadth-first over θ-types reachable through the groups of 𝔄.
        let mut seen = vec![false; types.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        let mut found = false;
        while let Some(s) = queue.pop_front() {
            if !types[s].holds(c.body) {
                found = true;
                break;
            }
            for &g in &c.groups {
                for u in 0..types.len() {
                    if alive[u] && !seen[u] && types[u].holds(c.cond) && space.related(&types[s], &types[u], g) {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        if !found {
            return Some(Reason::Common { common: c.common });
        }
    }
    None
}

/// Removes, round by round, every type with an unmet obligation, until
/// none is left. Returns the survivor flags and the log.
pub fn quasi_fixpoint(space: &TypeSpace, types: &[SigmaType]) -> (Vec<bool>, Vec<Elimination>) {
    let mut alive = vec![true; types.len()];
    let mut log = Vec::new();
    for round in 1.. {
        let dead: Vec<(usize, Reason)> = (0..types.len())
            .filter(|&t| alive[t])
            .filter_map(|t| violation(space, types, &alive, t).map(|r| (t, r)))
            .collect();
        if dead.is_empty() {
            break;
        }
        for (t, reason) in dead {
            alive[t] = false;
            log.push(Elimination { round, removed: t, reason });
        }
    }
    (alive, log)
}

/// The same fixpoint, removing one violating type at a time, chosen by
/// scanning the survivors in a fresh random order each time.
pub fn quasi_fixpoint_random<R: Rng>(space: &TypeSpace, types: &[SigmaType], rng: &mut R) -> Vec<bool> {
    let mut alive = vec![true; types.len()];
    let mut order: Vec<usize> = (0..types.len()).collect();
    loop {
        order.shuffle(rng);
        let victim = order
            .iter()
            .copied()
            .find(|&t| alive[t] && violation(space, types, &alive, t).is_some());
        match victim {
            Some(t) => alive[t] = false,
            None => return alive,
        }
    }
}
