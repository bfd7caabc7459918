use proptest::prelude::*;

use epsilon_core::ars::{
    check_klop_theorem, fuzz_sweep, reachable_set, search_hypothesis_necessity, DenseArs, FiniteArs, Node, Rel,
};
use epsilon_core::exec::Exec;
use epsilon_core::strategy::all_derivations;
use epsilon_core::textio::parse_formula;

fn system(max_nodes: u32) -> impl Strategy<Value = FiniteArs> {
    (1..=max_nodes).prop_flat_map(|n| {
        let edge = (0..n, 0..n);
        (
            Just(n),
            prop::collection::vec(edge.clone(), 0..=(2 * n as usize)),
            prop::collection::vec(edge, 0..=(2 * n as usize)),
        )
            .prop_map(|(n, r0, r1)| FiniteArs::with_edges(n, &r0, &r1).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dense_and_set_checkers_agree(sys in system(6)) {
        let dense = DenseArs::from_finite(&sys).unwrap();
        let reports = dense.check_all();
        let mut valid = 0;
        for a in 0..sys.size() {
            for ap in 0..sys.size() {
                let general = check_klop_theorem(&sys, a, ap);
                let fast = reports.iter().find(|r| r.a == a && r.a_prime == ap);
                match (general, fast) {
                    (Ok(g), Some(d)) => {
                        valid += 1;
                        prop_assert_eq!(g.conditions(), d.conditions);
                        prop_assert_eq!(g.bound, d.bound);
                        prop_assert_eq!(g.conclusion_well_founded, d.conclusion);
                        prop_assert!(g.is_consistent());
                    }
                    (Err(_), None) => {}
                    (g, d) => prop_assert!(false, "disagree on ({a}, {ap}): {g:?} / {d:?}\n{sys}"),
                }
            }
        }
        prop_assert_eq!(valid, reports.len());
    }

    #[test]
    fn text_format_round_trips(sys in system(8)) {
        prop_assert_eq!(FiniteArs::parse(&sys.to_text()).unwrap(), sys);
    }

    #[test]
    fn empty_r0_specializes(sys in system(6)) {
        let only_r1 = FiniteArs::with_edges(
            sys.size(),
            &[],
            &sys.r1().iter().copied().collect::<Vec<_>>(),
        ).unwrap();
        for a in 0..only_r1.size() {
            for ap in 0..only_r1.size() {
                if let Ok(r) = check_klop_theorem(&only_r1, a, ap) {
                    prop_assert!(r.cond1 && r.cond4);
                }
            }
        }
    }
}

#[test]
fn fuzzed_systems_up_to_eight_nodes() {
    let s = fuzz_sweep(42, 200_000, 5, 8, Exec::default());
    assert_eq!(s.violations, 0, "{:?}", s.first_violation);
    assert!(s.all_conditions_hold() > 1000);
}

#[test]
fn every_dropped_condition_matters() {
    let found = search_hypothesis_necessity(5, 3, 20_000).unwrap();
    assert!(found[15].is_none());
    for (mask, w) in found.iter().enumerate().take(15) {
        let w = w.as_ref().unwrap_or_else(|| panic!("no witness for subset {mask:04b}"));
        // Re-check the witness with the set-based checker.
        let sys = FiniteArs::parse(&w.system).unwrap();
        let r = check_klop_theorem(&sys, w.a, w.a_prime).unwrap();
        assert_eq!(r.conditions(), w.conditions);
        assert!(!r.conclusion_well_founded);
    }
}

#[test]
fn r0_cycle_reaching_a_normal_form() {
    // 0 →₀ 0 and 0 →₀ 1: only condition 1 fails.
    let sys = FiniteArs::parse("2\n0 0 0\n0 0 1\n").unwrap();
    let r = check_klop_theorem(&sys, 0, 1).unwrap();
    assert_eq!(r.conditions(), [false, true, true, true]);
    assert!(!r.conclusion_well_founded);
    // With a →₁ exit instead, the →₀ peak at 1 cannot be closed either.
    let sys = FiniteArs::parse("3\n0 0 1\n0 1 0\n1 1 2\n").unwrap();
    let r = check_klop_theorem(&sys, 0, 2).unwrap();
    assert_eq!(r.conditions(), [false, true, true, false]);
}

#[test]
fn exported_vacuous_pair() {
    let f = parse_formula("exists x. Q & exists y. Q").unwrap();
    let g = all_derivations(&f, 100).unwrap();
    let (sys, start, nf) = FiniteArs::from_reduction_graph(&g);
    assert!(sys.r1().is_empty());
    assert_eq!(sys.r0().len(), 4);
    let r = check_klop_theorem(&sys, start, nf.unwrap()).unwrap();
    assert!(r.all_conditions() && r.conclusion_well_founded);
    assert_eq!(r.bound, Some(0));
    let all: Vec<Node> = reachable_set(&sys, start).unwrap().into_iter().collect();
    assert_eq!(all, vec![0, 1, 2, 3]);
}

#[test]
fn exported_nested_pair_uses_both_relations() {
    let f = parse_formula("exists x. exists y. R(x, y)").unwrap();
    let g = all_derivations(&f, 100).unwrap();
    let (sys, start, nf) = FiniteArs::from_reduction_graph(&g);
    assert!(sys.r0().is_empty());
    let r = check_klop_theorem(&sys, start, nf.unwrap()).unwrap();
    assert!(r.all_conditions() && r.conclusion_well_founded);
    assert_eq!(r.bound, Some(4));
    let mut d = DenseArs::new(sys.size() as usize);
    for &(u, v) in sys.r1() {
        d.add(Rel::One, u as usize, v as usize);
    }
    assert_eq!(d.check(start, nf.unwrap()).unwrap().bound, Some(4));
}
