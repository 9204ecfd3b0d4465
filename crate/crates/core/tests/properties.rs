mod common;

use common::{flips, moves, Oracle};
use gcpnet::flip::{classify_outcome, dominance_classes, dominance_search, find_cycle};
use gcpnet::gen;
use gcpnet::io::{parse_gcp, parse_outcome, parse_strips, serialize_gcp, serialize_strips};
use gcpnet::strips::{find_action_cycle, plan_exists};
use gcpnet::Limits;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcp_text_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let net = gen::random_gcp_net(&mut gen::rng(seed), n, 8);
        let text = serialize_gcp(&net);
        let back = parse_gcp(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(serialize_gcp(&back), text.clone());
        let spaced = text.replace(':', " : ").replace('>', "  >  ").replace('\n', "  \n\n");
        prop_assert_eq!(parse_gcp(&spaced).unwrap(), net);
    }

    #[test]
    fn strips_text_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let inst = gen::random_strips(&mut gen::rng(seed), n, 4, false);
        let text = serialize_strips(&inst);
        let back = parse_strips(&text).unwrap();
        prop_assert_eq!(serialize_strips(&back), text);
        prop_assert_eq!(back.action_set(), inst.action_set());
    }

    #[test]
    fn outcome_text_round_trip(index in any::<u64>(), n in 1usize..=8) {
        let vars = gen::var_names(n);
        let o = gcpnet::logic::Outcome::from_index(n, index & ((1 << n) - 1));
        prop_assert_eq!(parse_outcome(&vars.outcome_string(&o), &vars).unwrap(), o);
    }

    #[test]
    fn dominance_matches_oracle(seed in any::<u64>(), n in 1usize..=4) {
        let lim = Limits::default();
        let net = gen::random_gcp_net(&mut gen::rng(seed), n, 8);
        let o = Oracle::of_net(&net);
        let classes = dominance_classes(&net, &lim).unwrap();
        for a in o.outcomes() {
            for b in o.outcomes() {
                let s = dominance_search(&net, &a, &b, &lim).unwrap();
                prop_assert_eq!(s.witness.is_some(), o.dom(&a, &b));
                prop_assert_eq!(classes.dominates(&a, &b), o.dom(&a, &b));
                if let Some(w) = s.witness {
                    prop_assert_eq!(w.first(), Some(&a));
                    prop_assert_eq!(w.last(), Some(&b));
                    for step in w.windows(2) {
                        prop_assert!(flips(&net, &step[0]).contains(&step[1]));
                    }
                }
            }
        }
        prop_assert_eq!(classes.num_classes(), o.classes().len());
    }

    #[test]
    fn consistency_and_flags_match_oracle(seed in any::<u64>(), n in 1usize..=4) {
        let lim = Limits::default();
        let net = gen::random_conjunctive_net(&mut gen::rng(seed), n, 8);
        let o = Oracle::of_net(&net);
        let cycle = find_cycle(&net, &lim).unwrap().witness;
        prop_assert_eq!(cycle.is_none(), o.is_consistent());
        if let Some(c) = cycle {
            prop_assert_eq!(c.first(), c.last());
            for step in c.windows(2) {
                prop_assert!(flips(&net, &step[0]).contains(&step[1]));
            }
        }
        if o.is_consistent() {
            prop_assert!(net.is_locally_consistent(&lim).unwrap());
        }
        for a in o.outcomes() {
            let f = classify_outcome(&net, &a, &lim).unwrap();
            prop_assert_eq!(f.weakly_non_dominated, o.weakly_non_dominated(&a));
            prop_assert_eq!(f.non_dominated, o.non_dominated(&a));
            prop_assert_eq!(f.dominating, o.dominating(&a));
            prop_assert_eq!(f.strongly_dominating, o.strongly_dominating(&a));
        }
    }

    #[test]
    fn planning_matches_oracle(seed in any::<u64>(), n in 1usize..=4) {
        let lim = Limits::default();
        let inst = gen::random_strips(&mut gen::rng(seed), n, 4, false);
        let o = Oracle::of_actions(inst.action_set());
        let found = plan_exists(&inst, &lim).unwrap().witness;
        if inst.initial() != inst.goal() {
            prop_assert_eq!(found.is_some(), o.dom(&inst.initial(), &inst.goal()));
        }
        let cycle = find_action_cycle(inst.action_set(), &lim).unwrap().witness;
        prop_assert_eq!(cycle.is_none(), o.is_consistent());
        if let Some(c) = cycle {
            prop_assert_eq!(c.states.first(), c.states.last());
            for step in c.states.windows(2) {
                prop_assert!(moves(inst.action_set(), &step[0]).contains(&step[1]));
            }
        }
    }
}
