use std::collections::{BTreeMap, BTreeSet};

use nested_backdoor::oracle::brute_force_count;
use nested_backdoor::solve::count_with_backdoor;
use nested_backdoor::{
    build_incidence, count_nested, find_obstruction, is_nested, solve, verify_deletion,
    verify_strong, Assignment, Clause, CnfFormula, Literal, SearchMode, SolveOptions, Variable,
};
use proptest::prelude::*;

fn formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let clause = prop::collection::btree_map(1..=n, any::<bool>(), 1..=4);
        prop::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
            let clauses = cs
                .into_iter()
                .map(|c: BTreeMap<u32, bool>| {
                    Clause::new(c.into_iter().map(|(v, s)| Literal::new(Variable(v), s))).unwrap()
                })
                .collect();
            CnfFormula::new((1..=n).map(Variable), clauses)
        })
    })
}

fn subset(f: &CnfFormula, mask: u32) -> BTreeSet<Variable> {
    f.variables()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nested_is_closed_under_assignment(f in formula(8, 10), mask in any::<u32>(), bits in any::<u32>()) {
        prop_assume!(is_nested(&f));
        let tau: Assignment = subset(&f, mask)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, bits >> i & 1 == 1))
            .collect();
        prop_assert!(is_nested(&f.reduce(&tau)));
    }

    #[test]
    fn nested_counts_match_the_oracle(f in formula(9, 12)) {
        prop_assume!(is_nested(&f));
        prop_assert_eq!(count_nested(&f).unwrap(), brute_force_count(&f).unwrap());
    }

    #[test]
    fn obstructions_only_in_non_nested_formulas(f in formula(8, 12)) {
        if find_obstruction(&build_incidence(&f, false)).is_some() {
            prop_assert!(!is_nested(&f));
        }
    }

    #[test]
    fn deletion_backdoors_are_strong(f in formula(7, 10), mask in any::<u32>()) {
        let b = subset(&f, mask);
        if verify_deletion(&f, &b) {
            prop_assert!(verify_strong(&f, &b).unwrap());
        }
    }

    #[test]
    fn supersets_of_backdoors_keep_the_count(f in formula(8, 10), extra in any::<u32>()) {
        let Some(found) = solve::obtain_backdoor(&f, &SolveOptions::default()).unwrap() else {
            return Ok(());
        };
        let mut b = found.variables.clone();
        b.extend(subset(&f, extra & 0b111));
        prop_assert!(verify_strong(&f, &b).unwrap());
        prop_assert_eq!(count_with_backdoor(&f, &b).unwrap(), brute_force_count(&f).unwrap());
    }

    #[test]
    fn every_mode_counts_exactly(f in formula(10, 12)) {
        let expected = brute_force_count(&f).unwrap();
        for mode in [SearchMode::Branching, SearchMode::Exact, SearchMode::Approx] {
            let options = SolveOptions { count: true, mode, ..SolveOptions::default() };
            let report = solve(&f, &options).unwrap();
            if let Some(n) = report.count {
                prop_assert_eq!(&n, &expected, "{:?}", mode);
            }
        }
    }
}
