//! Property suites over random models and expressions. Each case draws a
//! seed and builds its model and expressions from it.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use dlkv::checker::Checker;
use dlkv::decide::{decide_sat, DecideOptions};
use dlkv::gen::{random_model, test_vocabulary, ExprGen, ExprShape, ModelShape};
use dlkv::lang::{agents_of_formula, agents_of_term, derived, Formula, Group, Term, Vocabulary};
use dlkv::model::{validate_model, EpistemicModel};
use dlkv::reducer::{reduce_formula, reduce_term, simplify_formula};
use dlkv::syntax::{parse_event, parse_formula, parse_term};

fn setup(seed: u64, states: usize) -> (StdRng, Vocabulary, EpistemicModel) {
    let mut rng = StdRng::seed_from_u64(seed);
    let voc = test_vocabulary();
    let m = random_model(&voc, ModelShape { max_states: states, defined: 2 }, &mut rng);
    (rng, voc, m)
}

fn group_over(voc: &Vocabulary, rng: &mut StdRng) -> Group {
    ExprGen::new(voc, ExprShape::static_(0)).group(rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_expressions_parse_back(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let voc = test_vocabulary();
        let gen = ExprGen::new(&voc, ExprShape::dynamic(3));
        let phi = gen.formula(3, &mut rng);
        prop_assert_eq!(parse_formula(&phi.to_string(), &voc).unwrap(), phi);
        let x = gen.term(3, &mut rng);
        prop_assert_eq!(parse_term(&x.to_string(), &voc).unwrap(), x);
        let e = gen.event(2, &mut rng);
        prop_assert_eq!(parse_event(&e.to_string(), &voc).unwrap(), e);
    }

    #[test]
    fn reduction_is_static_and_truth_preserving(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 4);
        let gen = ExprGen::new(&voc, ExprShape::dynamic(3));
        let phi = gen.formula(3, &mut rng);
        let x = gen.term(2, &mut rng);
        let (rphi, rx) = (reduce_formula(&phi), reduce_term(&x));
        prop_assert!(rphi.is_static() && rx.is_static());
        prop_assert!(rphi.steps.iter().all(|s| s.decreases()));
        let c = Checker::new();
        prop_assert_eq!(c.extension(&m, &phi).unwrap(), c.extension(&m, &rphi.value).unwrap());
        prop_assert_eq!(c.term_values(&m, &x).unwrap(), c.term_values(&m, &rx.value).unwrap());
        prop_assert_eq!(
            c.extension(&m, &rphi.value).unwrap(),
            c.extension(&m, &simplify_formula(&rphi.value)).unwrap()
        );
    }

    #[test]
    fn indistinguishable_states_agree_on_local_expressions(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 4);
        let group = group_over(&voc, &mut rng);
        let gen = ExprGen::new(&voc, ExprShape::static_(3));
        let phi = gen.formula(3, &mut rng);
        let x = gen.term(3, &mut rng);
        let s = rng.gen_range(0..m.num_states());
        let w = *m.group_rel(&group).unwrap().block(s).choose(&mut rng).unwrap();
        let c = Checker::new();
        let inside = |set: dlkv::lang::LocationSet| set.iter().all(|a| group.contains(a));
        if inside(agents_of_formula(&phi).unwrap()) {
            prop_assert_eq!(c.check(&m, s, &phi).unwrap(), c.check(&m, w, &phi).unwrap());
        }
        if inside(agents_of_term(&x).unwrap()) {
            prop_assert_eq!(c.eval(&m, s, &x).unwrap(), c.eval(&m, w, &x).unwrap());
        }
    }

    #[test]
    fn updates_keep_own_data(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 5);
        let e = ExprGen::new(&voc, ExprShape::dynamic(2)).event(2, &mut rng);
        let (next, _) = Checker::new().update(&m, &e).unwrap();
        prop_assert!(validate_model(&next).is_empty());
    }

    #[test]
    fn diamond_is_precondition_and_box(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 4);
        let gen = ExprGen::new(&voc, ExprShape::dynamic(2));
        let e = gen.event(1, &mut rng);
        let theta = gen.formula(2, &mut rng);
        let lhs = derived::diamond(&e, theta.clone());
        let rhs = Formula::and(e.precondition(), Formula::after(e, theta));
        let c = Checker::new();
        prop_assert_eq!(c.extension(&m, &lhs).unwrap(), c.extension(&m, &rhs).unwrap());
    }

    #[test]
    fn defined_hypothetical_values_are_known_and_possible(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 4);
        let gen = ExprGen::new(&voc, ExprShape::static_(2));
        let group = group_over(&voc, &mut rng);
        let x = gen.term(1, &mut rng);
        let phi = gen.formula(2, &mut rng);
        let c = Checker::new();
        let rel = m.group_rel(&group).unwrap();
        for s in 0..m.num_states() {
            if c.eval(&m, s, &Term::desc(x.clone(), group.clone(), phi.clone())).unwrap() == m.fom().undef() {
                continue;
            }
            prop_assert!(rel.block(s).iter().any(|&w| c.check(&m, w, &phi).unwrap()));
            prop_assert!(c.check(&m, s, &derived::know_value(&group, &phi, &x)).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn formulas_true_somewhere_are_satisfiable(seed in any::<u64>()) {
        let (mut rng, voc, m) = setup(seed, 3);
        let shape = ExprShape { depth: 2, dynamic: false, desc: false, common: true };
        let phi = ExprGen::new(&voc, shape).formula(2, &mut rng);
        let ext = Checker::new().extension(&m, &phi).unwrap();
        match decide_sat(&phi, &DecideOptions::default()) {
            Ok(d) => {
                if ext.iter().any(|&b| b) {
                    prop_assert!(d.is_sat(), "{} holds in\n{:?}", phi, m);
                }
            }
            Err(e) => prop_assert!(e.is_resource_limit(), "{}", e),
        }
    }
}
