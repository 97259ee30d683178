//! Exhaustive enumeration of small models.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::checker::{CheckError, Checker};
use crate::lang::{Agent, BasicVar, Formula, Vocabulary, EQ};
use crate::model::{EpistemicModel, FirstOrderModel, FunInterp, Partition, PredInterp};

use super::{domain, free_constants, tuples};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_states: usize,
    /// Number of defined domain values; the undefined value comes on top.
    pub defined: usize,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub model: EpistemicModel,
    pub state: usize,
}

/// Advances a mixed-radix counter; false once it wraps around.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// One interpretation choice with its number of alternatives.
enum Slot {
    Constant(String),
    Predicate(String, Vec<Vec<usize>>),
    Function(String, usize, Vec<Vec<usize>>),
}

fn structures(voc: &Vocabulary, defined: usize, mut visit: impl FnMut(FirstOrderModel) -> ControlFlow<()>) -> ControlFlow<()> {
    let d = defined + 1;
    let mut slots = Vec::new();
    let mut radix = Vec::new();
    for c in free_constants(voc) {
        slots.push(Slot::Constant(c));
        radix.push(d);
    }
    for (p, &n) in voc.predicates() {
        if p != EQ {
            let rows = tuples(d, n);
            radix.push(1usize << rows.len());
            slots.push(Slot::Predicate(p.clone(), rows));
        }
    }
    for (f, &n) in voc.functions() {
        let rows = tuples(d, n);
        radix.push(d.pow(rows.len() as u32));
        slots.push(Slot::Function(f.clone(), n, rows));
    }
    let mut digits = vec![0; slots.len()];
    loop {
        let mut fom = FirstOrderModel::new(domain(defined), defined).expect("well-formed domain");
        for (slot, &digit) in slots.iter().zip(&digits) {
            match slot {
                Slot::Constant(c) => fom.set_constant(c.clone(), digit).expect("value in domain"),
                Slot::Predicate(p, rows) => {
                    let table: BTreeSet<Vec<usize>> = rows
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| digit >> i & 1 == 1)
                        .map(|(_, r)| r.clone())
                        .collect();
                    fom.set_predicate(p.clone(), rows.first().map_or(0, Vec::len), PredInterp::Table(table))
                        .expect("arity matches")
                }
                Slot::Function(f, n, rows) => {
                    let mut code = digit;
                    let table: BTreeMap<Vec<usize>, usize> = rows
                        .iter()
                        .map(|r| {
                            let v = code % d;
                            code /= d;
                            (r.clone(), v)
                        })
                        .collect();
                    fom.set_function(f.clone(), *n, FunInterp::Table(table)).expect("total table")
                }
            }
        }
        visit(fom)?;
        if !advance(&mut digits, &radix) {
            return ControlFlow::Continue(());
        }
    }
}

/// Visits every model over `voc` within the bounds in which each agent's
/// variables are constant on her classes. Models with the same shape but
/// differently named states are visited once.
pub fn for_each_model(
    voc: &Vocabulary,
    bounds: SearchBounds,
    mut visit: impl FnMut(&EpistemicModel) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let vocab = Arc::new(voc.clone());
    let agents: Vec<Agent> = voc.agents().iter().cloned().collect();
    let vars: Vec<BasicVar> = voc.vars().iter().cloned().collect();
    let d = bounds.defined + 1;
    structures(voc, bounds.defined, |fom| {
        let fom = Arc::new(fom);
        for n in 1..=bounds.max_states {
            let parts: Vec<Partition> = set_partitions(n)
                .into_iter()
                .map(|labels| Partition::from_key(n, |s| labels[s]))
                .collect();
            let mut choice = vec![0; agents.len()];
            let part_radix = vec![parts.len(); agents.len()];
            loop {
                let relations: BTreeMap<Agent, Partition> = agents
                    .iter()
                    .zip(&choice)
                    .map(|(a, &i)| (a.clone(), parts[i].clone()))
                    .collect();
                // One value per variable and class of its owner.
                let cells: Vec<(usize, &[usize])> = vars
                    .iter()
                    .enumerate()
                    .flat_map(|(i, v)| relations[&v.owner].blocks().iter().map(move |b| (i, b.as_slice())))
                    .collect();
                let mut values = vec![0; cells.len()];
                let value_radix = vec![d; cells.len()];
                loop {
                    let mut valuation = vec![vec![0; vars.len()]; n];
                    for (&(i, block), &v) in cells.iter().zip(&values) {
                        for &s in block {
                            valuation[s][i] = v;
                        }
                    }
                    let m = EpistemicModel::new(
                        vocab.clone(),
                        fom.clone(),
                        (0..n).map(|s| format!("s{s}")).collect(),
                        relations.clone(),
                        valuation,
                    )
                    .expect("enumerated model is well-formed");
                    visit(&m)?;
                    if !advance(&mut values, &value_radix) {
                        break;
                    }
                }
                if !advance(&mut choice, &part_radix) {
                    break;
                }
            }
        }
        ControlFlow::Continue(())
    })
}

/// The first enumerated model and state satisfying `phi`, if any.
pub fn find_witness(phi: &Formula, voc: &Vocabulary, bounds: SearchBounds) -> Result<Option<Witness>, CheckError> {
    let mut found = None;
    let mut error = None;
    let _ = for_each_model(voc, bounds, |m| match Checker::new().extension(m, phi) {
        Ok(ext) => match ext.iter().position(|&b| b) {
            Some(state) => {
                found = Some(Witness { model: m.clone(), state });
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        },
        Err(e) => {
            error = Some(e);
            ControlFlow::Break(())
        }
    });
    match error {
        Some(e) => Err(e),
        None => Ok(found),
    }
}
