mod common;

use common::*;
use proptest::prelude::*;
use sigma_kit::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ld_is_multiplicative(case in shift_case()) {
        let g = case.build();
        prop_assert!(ld_multiplicative(&g).is_ok(), "{:?}", ld_multiplicative(&g));
    }

    #[test]
    fn frobenius_chain_is_monotone(case in shift_case()) {
        let g = case.build();
        prop_assert!(frobenius_monotone(&g).is_ok(), "{:?}", frobenius_monotone(&g));
    }

    #[test]
    fn higher_block_keeps_invariants(case in shift_case()) {
        let g = case.build();
        let outcome = higher_block_invariant(&g);
        prop_assert!(outcome.is_ok(), "{:?}", outcome);
    }

    #[test]
    fn infinitesimal_shifts_are_connected(case in shift_case()) {
        let g = case.build();
        prop_assert!(infinitesimal_is_connected(&g).is_ok(), "{:?}", infinitesimal_is_connected(&g));
    }

    #[test]
    fn decompositions_verify(case in shift_case()) {
        let g = case.build();
        let rep = decompose(&g).unwrap();
        prop_assert!(verify_series(&g, &rep).unwrap().is_empty());
        let product: usize = rep.factors.iter().map(|f| f.order()).product();
        prop_assert_eq!(product, g.limit_degree());
        prop_assert!(rep.factors.iter().all(|f| is_simple(&std::sync::Arc::new(f.clone()))));
    }

    #[test]
    fn oracle_agrees_on_random_shifts(case in shift_case()) {
        let g = case.build();
        let result = oracle_check("random", &g, g.window_len() + 2);
        prop_assume!(!matches!(result, Err(Error::SizeLimit { .. })));
        let report = result.unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn fixture_text_round_trips(case in shift_case()) {
        let g = case.build();
        let gens: Vec<String> = g
            .window()
            .iter()
            .map(|b| format!("({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let names = ["kind = cyclic\norder = 2", "kind = cyclic\norder = 3", "kind = cyclic\norder = 4", "kind = klein4"];
        let text = format!(
            "[group h]\n{}\n\n[shift s]\nalphabet = h\nwindow_len = {}\ngenerators = {}\n",
            names[case.alphabet.min(3)],
            g.window_len(),
            gens.join("; ")
        );
        let fx = parse_fixture(&text, &Limits::default()).unwrap();
        let again = parse_fixture(&fx.to_text(), &Limits::default()).unwrap();
        prop_assert_eq!(fx.to_text(), again.to_text());
        prop_assert_eq!(fx.shift("s").unwrap().compare(&g).unwrap(), Comparison::Equal);
    }
}

#[test]
fn properties_hold_on_bundled_fixtures() {
    for (name, g) in bundled_shifts(&Limits::default()) {
        if let Err(m) = all_properties(&g) {
            panic!("{name}: {m}");
        }
    }
}
