use std::sync::{Arc, OnceLock};

use monoid_ca::analysis::{
    bicyclic_in_ca_monoid, bicyclic_nonsurjectivity_demo, ca_status, surjunctivity_sweep, NonSurjectivity,
    SweepOptions,
};
use monoid_ca::ca::left_inverse_ca;
use monoid_ca::monoid::{enumerate_monoid_tables, Element};
use monoid_ca::{CellularAutomaton, Configuration, FiniteMonoid, MonoidHandle, Report};
use proptest::prelude::*;

const CAP: u64 = 1 << 16;

fn small_monoids() -> &'static [Arc<FiniteMonoid>] {
    static CELL: OnceLock<Vec<Arc<FiniteMonoid>>> = OnceLock::new();
    CELL.get_or_init(|| (1..=3).flat_map(|n| enumerate_monoid_tables(n).unwrap()).map(Arc::new).collect())
}

fn memory_of(n: usize, mask: u32) -> Vec<usize> {
    let mask = (mask & ((1 << n) - 1)).max(1);
    (0..n).filter(|&e| mask >> e & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sweep_is_thread_independent(i in 0..small_monoids().len(), mask in any::<u32>(), threads in 2usize..6) {
        let m = &small_monoids()[i];
        let memory = memory_of(m.size(), mask);
        let one = SweepOptions { threads: Some(1), ..SweepOptions::default() };
        let many = SweepOptions { threads: Some(threads), ..SweepOptions::default() };
        let a = surjunctivity_sweep(m, 2, &memory, &one).unwrap();
        let b = surjunctivity_sweep(m, 2, &memory, &many).unwrap();
        prop_assert_eq!(a.to_report().to_text(), b.to_report().to_text());
        prop_assert!(a.holds());
        prop_assert_eq!(a.injective, a.bijective);
        prop_assert_eq!(a.surjective, a.bijective);
    }

    #[test]
    fn sampled_sweep_is_reproducible(i in 0..small_monoids().len(), seed in any::<u64>(), threads in 1usize..5) {
        let m = &small_monoids()[i];
        let memory: Vec<usize> = (0..m.size()).collect();
        let base = SweepOptions { sample: Some((seed, 64)), threads: Some(1), ..SweepOptions::default() };
        let other = SweepOptions { threads: Some(threads), ..base.clone() };
        let a = surjunctivity_sweep(m, 3, &memory, &base).unwrap();
        let b = surjunctivity_sweep(m, 3, &memory, &other).unwrap();
        prop_assert_eq!(a.examined, 64);
        prop_assert_eq!(a.to_report().to_text(), b.to_report().to_text());
    }

    #[test]
    fn sweep_counts_match_per_rule_status(i in 0..small_monoids().len(), mask in any::<u32>()) {
        let m = &small_monoids()[i];
        let memory = memory_of(m.size(), mask);
        let sweep = surjunctivity_sweep(m, 2, &memory, &SweepOptions::default()).unwrap();
        let h = MonoidHandle::Finite(m.clone());
        let elems: Vec<Element> = memory.iter().map(|&e| Element::Index(e)).collect();
        let mut injective = 0;
        for r in 0u64..1 << (1u64 << memory.len()) {
            let rule: Vec<u32> = (0..1usize << memory.len()).map(|j| (r >> j & 1) as u32).collect();
            let tau = CellularAutomaton::new(h.clone(), 2, elems.clone(), rule).unwrap();
            injective += ca_status(&tau, CAP).unwrap().injective as u64;
        }
        prop_assert_eq!(sweep.injective, injective);
    }

    #[test]
    fn report_round_trip(
        entries in proptest::collection::vec(("[a-z_]{1,8}", "[ -~]{0,20}"), 0..8),
        witnesses in proptest::collection::vec(("[a-z0-9 ]{0,10}", proptest::collection::vec("[a-z0-9 ]{0,10}", 0..4)), 0..3),
    ) {
        let mut r = Report::new("test");
        for (k, v) in &entries {
            if k != "witness" {
                r.push(k, v.trim());
            }
        }
        for (label, body) in &witnesses {
            let lines: Vec<String> = body.iter().map(|l| l.trim().to_string()).filter(|l| !l.is_empty() && l != "end").collect();
            r.witness(label.trim(), lines.join("\n"));
        }
        prop_assert_eq!(Report::from_text(&r.to_text()).unwrap(), r);
    }
}

/// On a finite monoid a left inverse always replays and the CA is then
/// bijective, so the bicyclic certificate never appears.
#[test]
fn left_inverse_certificates_replay() {
    for m in small_monoids() {
        let h = MonoidHandle::Finite(m.clone());
        let n = m.size();
        let memory: Vec<Element> = (0..n.min(2)).map(Element::Index).collect();
        for r in 0u64..1 << (1u64 << memory.len()) {
            let rule: Vec<u32> = (0..1usize << memory.len()).map(|j| (r >> j & 1) as u32).collect();
            let tau = CellularAutomaton::new(h.clone(), 2, memory.clone(), rule).unwrap();
            assert!(bicyclic_in_ca_monoid(&tau, CAP).unwrap().is_none());
            if let Ok(sigma) = left_inverse_ca(&tau, CAP) {
                for code in 0..1u64 << n {
                    let x = Configuration::from_code(code, n, 2);
                    assert_eq!(sigma.apply(&tau.apply(&x).unwrap()).unwrap(), x);
                }
                assert!(ca_status(&tau, CAP).unwrap().surjective);
            }
        }
    }
}

#[test]
fn bicyclic_demo_is_consistent_across_depths() {
    let mut previous: Option<Vec<Element>> = None;
    for d in 1..=3 {
        let demo = bicyclic_nonsurjectivity_demo(2, d, CAP).unwrap();
        assert!(demo.holds());
        assert_eq!(demo.recovered_window, demo.window);
        if let Some(prev) = &previous {
            assert!(prev.iter().all(|e| demo.window.contains(e)));
        }
        let w = demo.witness.as_ref().unwrap();
        let NonSurjectivity::ImageConstraint { y, .. } = &w.inequality else {
            panic!("expected an image constraint");
        };
        // The witness separates 1 from qp.
        assert_eq!(y.get(&w_elem(0, 0)), Some(0));
        assert_eq!(y.get(&w_elem(1, 1)), Some(1));
        let report = Report::from_text(&demo.to_report().to_text()).unwrap();
        assert_eq!(report.get("no_preimage"), Some("true"));
        previous = Some(demo.window.clone());
    }
    let unary = bicyclic_nonsurjectivity_demo(1, 2, CAP).unwrap();
    assert!(unary.holds() && unary.witness.is_none());
}

fn w_elem(a: u64, b: u64) -> Element {
    Element::Bicyclic(monoid_ca::monoid::BicyclicElement::new(a, b))
}
