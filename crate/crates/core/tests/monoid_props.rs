mod common;

use std::sync::{Arc, OnceLock};

use monoid_ca::monoid::{enumerate_monoid_tables, BicyclicElement, Element};
use monoid_ca::{FiniteMonoid, MonoidHandle};
use proptest::prelude::*;

fn small_monoids() -> &'static [Arc<FiniteMonoid>] {
    static CELL: OnceLock<Vec<Arc<FiniteMonoid>>> = OnceLock::new();
    CELL.get_or_init(|| (1..=4).flat_map(|n| enumerate_monoid_tables(n).unwrap()).map(Arc::new).collect())
}

fn monoid_strategy() -> impl Strategy<Value = Arc<FiniteMonoid>> {
    (0..small_monoids().len()).prop_map(|i| small_monoids()[i].clone())
}

proptest! {
    #[test]
    fn corrupted_tables_rejected_or_still_monoids(m in monoid_strategy(), cell in 0usize..16, v in 0usize..4) {
        let n = m.size();
        let cell = cell % (n * n);
        let v = v % n;
        let mut table = m.table().to_vec();
        table[cell] = v;
        let accepted = FiniteMonoid::from_flat(n, m.identity(), table.clone()).is_ok();
        let mul = |a: usize, b: usize| table[a * n + b];
        let e = m.identity();
        let valid = (0..n).all(|a| mul(e, a) == a && mul(a, e) == a)
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))));
        prop_assert_eq!(accepted, valid);
    }

    #[test]
    fn bicyclic_matches_rewriting(a in 0u64..40, b in 0u64..40, c in 0u64..40, d in 0u64..40) {
        let (x, y) = (BicyclicElement::new(a, b), BicyclicElement::new(c, d));
        prop_assert_eq!(x * y, common::bicyclic_by_rewriting(x, y));
    }

    #[test]
    fn bicyclic_is_associative(v in proptest::collection::vec(0u64..20, 6)) {
        let x = BicyclicElement::new(v[0], v[1]);
        let y = BicyclicElement::new(v[2], v[3]);
        let z = BicyclicElement::new(v[4], v[5]);
        prop_assert_eq!((x * y) * z, x * (y * z));
    }

    #[test]
    fn left_divisors_match_search(a in 0u64..5, b in 0u64..5, c in 0u64..5, d in 0u64..5) {
        let h = MonoidHandle::Bicyclic;
        let s = Element::Bicyclic(BicyclicElement::new(a, b));
        let t = Element::Bicyclic(BicyclicElement::new(c, d));
        let mut got = h.left_divisors(&s, &t).unwrap();
        got.sort();
        // Any m with s·m = t has both coordinates bounded by a+b+c+d.
        let bound = a + b + c + d + 1;
        let mut want = Vec::new();
        for x in 0..=bound {
            for y in 0..=bound {
                let m = Element::Bicyclic(BicyclicElement::new(x, y));
                if h.multiply(&s, &m).unwrap() == t {
                    want.push(m);
                }
            }
        }
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn opposite_is_involutive(m in monoid_strategy()) {
        prop_assert_eq!(m.opposite().opposite(), (*m).clone());
    }

    #[test]
    fn classification_flags_consistent(m in monoid_strategy(), x in 0usize..4) {
        let x = x % m.size();
        let c = m.classify(x).unwrap();
        prop_assert_eq!(c.invertible, c.left_invertible && c.right_invertible);
        if c.invertible {
            prop_assert!(c.left_cancellable && c.right_cancellable);
        }
    }

    #[test]
    fn text_round_trip(m in monoid_strategy()) {
        prop_assert_eq!(FiniteMonoid::from_text(&m.to_text()).unwrap(), (*m).clone());
    }

    #[test]
    fn closure_is_smallest_submonoid(m in monoid_strategy(), mask in 0u32..16) {
        let gens: Vec<usize> = (0..m.size()).filter(|&i| mask >> i & 1 == 1).collect();
        let closure = m.submonoid_closure(&gens).unwrap();
        prop_assert!(m.is_submonoid(&closure));
        // Every submonoid containing the generators contains the closure.
        for sub in 0u32..1 << m.size() {
            let members: Vec<usize> = (0..m.size()).filter(|&i| sub >> i & 1 == 1).collect();
            if m.is_submonoid(&members) && gens.iter().all(|g| members.contains(g)) {
                prop_assert!(closure.iter().all(|c| members.contains(c)));
            }
        }
    }
}

#[test]
fn no_bicyclic_pair_in_finite_monoids() {
    for n in 1..=4 {
        for m in enumerate_monoid_tables(n).unwrap() {
            assert_eq!(m.find_bicyclic_pair(), None, "{:?}", m.table());
        }
    }
    for (name, m) in common::curated_monoids() {
        assert_eq!(m.find_bicyclic_pair(), None, "{name}");
    }
    assert!(MonoidHandle::Bicyclic.find_bicyclic_pair().is_some());
}

#[test]
fn free_monoid_word_cap() {
    let f = MonoidHandle::free(2).unwrap();
    let a = f.parse_element("ab").unwrap();
    assert_eq!(f.format_element(&f.multiply(&a, &a).unwrap()), "abab");
    let long = f.parse_element(&"a".repeat(32)).unwrap();
    assert!(f.multiply(&long, &a).is_err());
}
