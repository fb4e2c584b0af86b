//! Independent brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use monoid_ca::monoid::BicyclicElement;
use monoid_ca::FiniteMonoid;

/// All `(identity, table)` pairs of size `n` by scanning every `n^(n²)` table.
pub fn brute_force_monoids(n: usize) -> BTreeSet<(usize, Vec<usize>)> {
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    let mut out = BTreeSet::new();
    let mut t = vec![0usize; cells];
    for code in 0..total {
        let mut c = code;
        for v in t.iter_mut() {
            *v = (c % n as u64) as usize;
            c /= n as u64;
        }
        let mul = |a: usize, b: usize| t[a * n + b];
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))));
        if !assoc {
            continue;
        }
        for e in 0..n {
            if (0..n).all(|a| mul(e, a) == a && mul(a, e) == a) {
                out.insert((e, t.clone()));
            }
        }
    }
    out
}

/// Same set as [`brute_force_monoids`], scanning only tables whose row and
/// column at the chosen identity are already the identity map.
pub fn monoids_with_forced_identity(n: usize) -> BTreeSet<(usize, Vec<usize>)> {
    let mut out = BTreeSet::new();
    for e in 0..n {
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != e && b != e)
            .collect();
        let total = (n as u64).pow(free.len() as u32);
        let mut t = vec![0usize; n * n];
        for a in 0..n {
            t[e * n + a] = a;
            t[a * n + e] = a;
        }
        for code in 0..total {
            let mut c = code;
            for &(a, b) in &free {
                t[a * n + b] = (c % n as u64) as usize;
                c /= n as u64;
            }
            let mul = |a: usize, b: usize| t[a * n + b];
            if (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c))))) {
                out.insert((e, t.clone()));
            }
        }
    }
    out
}

/// Restricted growth strings: every set partition of `0..n`.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            go(i + 1, n, cur, max.max(c), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

/// Congruences by filtering all partitions for two-sided compatibility.
pub fn congruences_by_filtering(m: &FiniteMonoid) -> Vec<Vec<usize>> {
    let n = m.size();
    set_partitions(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    p[a] != p[b]
                        || (0..n).all(|u| p[m.mul(u, a)] == p[m.mul(u, b)] && p[m.mul(a, u)] == p[m.mul(b, u)])
                })
            })
        })
        .collect()
}

/// Configurations (as symbol vectors) constant on each class of `labels`.
pub fn inv_by_filtering(labels: &[usize], k: u32) -> BTreeSet<Vec<u32>> {
    all_configs(labels.len(), k)
        .into_iter()
        .filter(|x| {
            (0..labels.len()).all(|a| (0..labels.len()).all(|b| labels[a] != labels[b] || x[a] == x[b]))
        })
        .collect()
}

pub fn all_configs(n: usize, k: u32) -> Vec<Vec<u32>> {
    let total = (k as u64).pow(n as u32);
    (0..total)
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = (c % k as u64) as u32;
                    c /= k as u64;
                    d
                })
                .collect()
        })
        .collect()
}

/// Bicyclic product by rewriting `pq -> 1` on the word `q^a p^b q^c p^d`.
pub fn bicyclic_by_rewriting(x: BicyclicElement, y: BicyclicElement) -> BicyclicElement {
    let mut word: Vec<char> = std::iter::repeat_n('q', x.a as usize)
        .chain(std::iter::repeat_n('p', x.b as usize))
        .chain(std::iter::repeat_n('q', y.a as usize))
        .chain(std::iter::repeat_n('p', y.b as usize))
        .collect();
    while let Some(i) = word.windows(2).position(|w| w == ['p', 'q']) {
        word.drain(i..i + 2);
    }
    let a = word.iter().take_while(|&&c| c == 'q').count();
    assert!(word[a..].iter().all(|&c| c == 'p'), "not in normal form");
    BicyclicElement::new(a as u64, (word.len() - a) as u64)
}

/// Whether a local rule on `r` coordinates depends only on the coordinates in `keep`.
pub fn factors_through(rule: &[u32], k: u32, r: usize, keep: &[usize]) -> bool {
    let tuples = all_configs(r, k);
    let code = |t: &[u32]| t.iter().fold(0usize, |acc, &s| acc * k as usize + s as usize);
    let mut seen = std::collections::HashMap::new();
    for t in &tuples {
        let key: Vec<u32> = keep.iter().map(|&i| t[i]).collect();
        let v = rule[code(t)];
        if *seen.entry(key).or_insert(v) != v {
            return false;
        }
    }
    true
}

/// Smallest coordinate subset the rule factors through, by trying all subsets.
pub fn minimal_coordinates(rule: &[u32], k: u32, r: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut working = Vec::new();
    for mask in 0..1u32 << r {
        let keep: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
        if factors_through(rule, k, r, &keep) {
            working.push(keep.clone());
            if best.as_ref().is_none_or(|b| keep.len() < b.len()) {
                best = Some(keep);
            }
        }
    }
    let best = best.expect("full set always works");
    // The minimum must be contained in every working subset.
    for w in &working {
        assert!(best.iter().all(|i| w.contains(i)), "minimal memory not unique");
    }
    best
}

/// Number of distinct images of `f` over all configurations.
pub fn image_size(n: usize, k: u32, f: impl Fn(&[u32]) -> Vec<u32>) -> (usize, usize) {
    let configs = all_configs(n, k);
    let images: HashSet<Vec<u32>> = configs.iter().map(|x| f(x)).collect();
    (configs.len(), images.len())
}

/// A few named monoids of sizes 1 through 5.
pub fn curated_monoids() -> Vec<(String, FiniteMonoid)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push((format!("cyclic:{n}"), FiniteMonoid::cyclic(n).unwrap()));
    }
    out.push(("semilattice".into(), FiniteMonoid::two_element_semilattice()));
    out.push(("flip-flop".into(), FiniteMonoid::flip_flop()));
    out.push(("map:2".into(), FiniteMonoid::map_monoid(2).unwrap()));
    for n in 3..=5 {
        // Chain under max, identity 0.
        let rows = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        out.push((format!("chain:{n}"), FiniteMonoid::new(0, rows).unwrap()));
        // Null semigroup with adjoined identity: 0 identity, everything else multiplies to 1.
        let rows = (0..n)
            .map(|a| (0..n).map(|b| if a == 0 { b } else if b == 0 { a } else { 1 }).collect())
            .collect();
        out.push((format!("null:{n}"), FiniteMonoid::new(0, rows).unwrap()));
        // Left-zero semigroup with adjoined identity.
        let rows = (0..n).map(|a| (0..n).map(|b| if a == 0 { b } else { a }).collect()).collect();
        out.push((format!("left-zero:{n}"), FiniteMonoid::new(0, rows).unwrap()));
    }
    // Z2 x Z2 as the Klein group.
    let rows = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    out.push(("klein".into(), FiniteMonoid::new(0, rows).unwrap()));
    out
}
