use std::collections::BTreeMap;
use std::sync::Arc;

use crate::lang::{Agent, BasicVar, Vocabulary};

use super::{EpistemicModel, FirstOrderModel, FunInterp, ModelError, Partition, PredInterp};

/// Agents `a, b, d, e`; variables `na@a, nb@b, nd@d`; numerals `0..=max`;
/// `plus/2`, `lt/2`, `leq/2`.
pub fn numbers_game_vocabulary(max: u64) -> Vocabulary {
    let mut voc = Vocabulary::with_agents(&["a", "b", "d", "e"]);
    for (name, owner) in [("na", "a"), ("nb", "b"), ("nd", "d")] {
        voc.add_var(BasicVar::new(name, owner)).expect("owner declared");
    }
    for i in 0..=max {
        voc.add_constant(i.to_string()).expect("fresh constant");
    }
    voc.add_function("plus", 2).expect("fresh function");
    voc.add_predicate("lt", 2).expect("fresh predicate");
    voc.add_predicate("leq", 2).expect("fresh predicate");
    voc
}

/// The initial model of the numbers game over `0..=max`.
///
/// States are the triples `(na, nb, nd)` with `na = nb + nd` or
/// `nb = na + nd`, in lexicographic order and named `s<na>_<nb>_<nd>`. Each of
/// `a, b, d` sees exactly her own number; `e` sees nothing.
pub fn build_numbers_game(max: u64) -> Result<EpistemicModel, ModelError> {
    if max < 2 {
        return Err(ModelError::BoundTooSmall(max));
    }
    let voc = numbers_game_vocabulary(max);
    let mut domain: Vec<String> = (0..=max).map(|i| i.to_string()).collect();
    domain.push("U".into());
    let mut fom = FirstOrderModel::new(domain, max as usize + 1)?;
    fom.set_function("plus", 2, FunInterp::SaturatingAdd)?;
    fom.set_predicate("lt", 2, PredInterp::Less)?;
    fom.set_predicate("leq", 2, PredInterp::LessEq)?;

    let mut triples = Vec::new();
    for na in 0..=max {
        for nb in 0..=max {
            for nd in 0..=max {
                if na == nb + nd || nb == na + nd {
                    triples.push([na as usize, nb as usize, nd as usize]);
                }
            }
        }
    }
    let n = triples.len();
    let names = triples
        .iter()
        .map(|[a, b, d]| format!("s{a}_{b}_{d}"))
        .collect();
    // Valuation columns follow the sorted variable order: na, nb, nd.
    let valuation: Vec<Vec<usize>> = triples.iter().map(|t| t.to_vec()).collect();
    let relations = BTreeMap::from([
        (Agent::new("a"), Partition::from_key(n, |s| triples[s][0])),
        (Agent::new("b"), Partition::from_key(n, |s| triples[s][1])),
        (Agent::new("d"), Partition::from_key(n, |s| triples[s][2])),
        (Agent::new("e"), Partition::universal(n)),
    ]);
    EpistemicModel::new(Arc::new(voc), Arc::new(fom), names, relations, valuation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Group;
    use crate::model::validate_model;

    /// Independent count: triples in `[0,max]³` satisfying either sum equation.
    fn brute_count(max: u64) -> usize {
        let mut n = 0;
        for a in 0..=max {
            for b in 0..=max {
                for d in 0..=max {
                    if a == b + d || b == a + d {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn state_counts() {
        assert_eq!(build_numbers_game(3).unwrap().num_states(), 16);
        for max in 2..=8 {
            assert_eq!(build_numbers_game(max).unwrap().num_states(), brute_count(max));
            assert_eq!(brute_count(max), ((max + 1) * (max + 1)) as usize);
        }
    }

    #[test]
    fn contains_expected_states() {
        let m = build_numbers_game(2).unwrap();
        assert!(m.state_named("s1_2_1").is_some());
        assert!(m.state_named("s0_0_0").is_some());
        assert!(build_numbers_game(1).is_err());
    }

    #[test]
    fn always_valid() {
        for max in 2..=12 {
            assert!(validate_model(&build_numbers_game(max).unwrap()).is_empty());
        }
    }

    #[test]
    fn joint_relation_of_a_and_d() {
        let m = build_numbers_game(4).unwrap();
        let ad = m.group_rel(&Group::of(&["a", "d"])).unwrap();
        let na = BasicVar::new("na", "a");
        let nd = BasicVar::new("nd", "d");
        let key = |s| (m.value(s, &na), m.value(s, &nd));
        for s in 0..m.num_states() {
            for w in 0..m.num_states() {
                assert_eq!(ad.related(s, w), key(s) == key(w));
            }
        }
        let a = m.group_rel(&Group::of(&["a"])).unwrap();
        assert!(ad.refines(&a));
        assert_eq!(&*a, m.relation(&Agent::new("a")).unwrap());
    }
}
