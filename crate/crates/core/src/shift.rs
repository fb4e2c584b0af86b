//! Configurations over monoids and the shift action `(m x)(m') = x(m' m)`.
//!
//! Configurations over a finite monoid are also handled as packed codes:
//! the base-`k` integer with `x(0)` as least significant digit. For `k = 2`
//! this is plain bit packing. Sets of configurations are sorted code
//! vectors, so set equality is vector equality.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::monoid::{Element, FiniteMonoid, MonoidHandle, MonoidMorphism, MorphismMap};
use crate::text::{join, parse_num, parse_nums, LineReader};

/// Default cap on `k^|M|` for exhaustive configuration scans.
pub const DEFAULT_CONFIG_CAP: u64 = 1 << 24;

/// Largest finite quotient built for free-monoid approximation.
const MAX_TRUNCATED_SIZE: usize = 1024;

/// `k^n`, or a cap error when it exceeds `cap`.
pub fn config_count(n: usize, k: u32, cap: u64) -> Result<u64> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total *= k as u128;
        if total > cap as u128 {
            return Err(Error::cap("configuration count", (k as u128).pow(n as u32), cap as u128));
        }
    }
    Ok(total as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    alphabet: u32,
    symbols: Vec<u32>,
}

impl Configuration {
    pub fn new(alphabet: u32, symbols: Vec<u32>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidConfiguration("alphabet must be non-empty".into()));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::InvalidConfiguration(format!(
                "symbol {s} outside alphabet of size {alphabet}"
            )));
        }
        Ok(Configuration { alphabet, symbols })
    }

    pub fn constant(size: usize, alphabet: u32, symbol: u32) -> Result<Self> {
        Configuration::new(alphabet, vec![symbol; size])
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, m: usize) -> u32 {
        self.symbols[m]
    }

    /// Packed base-`k` code; `x(0)` is the least significant digit.
    pub fn code(&self) -> u64 {
        let k = self.alphabet as u64;
        self.symbols
            .iter()
            .rev()
            .fold(0u64, |acc, &s| acc * k + s as u64)
    }

    pub fn from_code(code: u64, size: usize, alphabet: u32) -> Self {
        let k = alphabet as u64;
        let mut c = code;
        let symbols = (0..size)
            .map(|_| {
                let s = (c % k) as u32;
                c /= k;
                s
            })
            .collect();
        Configuration { alphabet, symbols }
    }

    fn check_monoid(&self, m: &FiniteMonoid) -> Result<()> {
        if self.symbols.len() != m.size() {
            return Err(Error::MonoidMismatch(format!(
                "configuration has {} cells, monoid has {} elements",
                self.symbols.len(),
                m.size()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!("config v1\nalphabet {}\n{}\n", self.alphabet, join(&self.symbols))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut r = LineReader::new(text);
        r.expect("config v1")?;
        let (no, rest) = r.keyed("alphabet")?;
        let alphabet: u32 = parse_num(no, rest)?;
        let (no, line) = r.next_line()?;
        let symbols = parse_nums(no, line)?;
        r.finish()?;
        Configuration::new(alphabet, symbols).map_err(|e| Error::parse(no, e.to_string()))
    }
}

/// Sorted, deduplicated set of packed configurations over one monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConfigSet {
    size: usize,
    alphabet: u32,
    codes: Vec<u64>,
}

impl ConfigSet {
    pub fn from_codes(size: usize, alphabet: u32, mut codes: Vec<u64>) -> Self {
        codes.sort_unstable();
        codes.dedup();
        ConfigSet {
            size,
            alphabet,
            codes,
        }
    }

    pub fn from_configs<'a>(
        size: usize,
        alphabet: u32,
        configs: impl IntoIterator<Item = &'a Configuration>,
    ) -> Self {
        Self::from_codes(size, alphabet, configs.into_iter().map(|c| c.code()).collect())
    }

    pub fn all(size: usize, alphabet: u32, cap: u64) -> Result<Self> {
        let total = config_count(size, alphabet, cap)?;
        Ok(ConfigSet {
            size,
            alphabet,
            codes: (0..total).collect(),
        })
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn contains(&self, x: &Configuration) -> bool {
        self.codes.binary_search(&x.code()).is_ok()
    }

    pub fn is_subset(&self, other: &ConfigSet) -> bool {
        self.codes
            .iter()
            .all(|c| other.codes.binary_search(c).is_ok())
    }

    pub fn union(&self, other: &ConfigSet) -> ConfigSet {
        let mut codes = self.codes.clone();
        codes.extend_from_slice(&other.codes);
        ConfigSet::from_codes(self.size, self.alphabet, codes)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.codes
            .iter()
            .map(|&c| Configuration::from_code(c, self.size, self.alphabet))
    }
}

/// `m x`, i.e. `(m x)(m') = x(m' m)`.
pub fn shift(monoid: &FiniteMonoid, m: usize, x: &Configuration) -> Result<Configuration> {
    monoid.check(m)?;
    x.check_monoid(monoid)?;
    let symbols = (0..monoid.size())
        .map(|mp| x.symbols[monoid.mul(mp, m)])
        .collect();
    Ok(Configuration {
        alphabet: x.alphabet,
        symbols,
    })
}

/// Partition of `M` by `m ~ m'` iff `m x = m' x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerRelation {
    pub class_of: Vec<usize>,
    pub num_classes: usize,
}

impl StabilizerRelation {
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }
}

pub fn orbit_and_stabilizer(
    monoid: &FiniteMonoid,
    x: &Configuration,
) -> Result<(ConfigSet, StabilizerRelation)> {
    x.check_monoid(monoid)?;
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    let mut class_of = Vec::with_capacity(monoid.size());
    for m in 0..monoid.size() {
        let code = shift(monoid, m, x)?.code();
        let next = seen.len();
        class_of.push(*seen.entry(code).or_insert(next));
    }
    let orbit = ConfigSet::from_codes(monoid.size(), x.alphabet, seen.keys().copied().collect());
    let num_classes = seen.len();
    Ok((orbit, StabilizerRelation { class_of, num_classes }))
}

/// Configurations constant on every class of `γ`.
pub fn inv_gamma(gamma: &Congruence, alphabet: u32, cap: u64) -> Result<ConfigSet> {
    let n = gamma.monoid().size();
    if alphabet == 0 {
        return Err(Error::InvalidArgument("alphabet must be non-empty".into()));
    }
    let count = config_count(gamma.num_classes(), alphabet, cap)?;
    let codes = (0..count)
        .map(|c| {
            let per_class = Configuration::from_code(c, gamma.num_classes(), alphabet);
            let symbols = gamma.class_of().iter().map(|&k| per_class.symbols[k]).collect();
            Configuration { alphabet, symbols }.code()
        })
        .collect();
    Ok(ConfigSet::from_codes(n, alphabet, codes))
}

/// Configurations with a finite orbit, found by computing every orbit.
pub fn periodic_points(monoid: &FiniteMonoid, alphabet: u32, cap: u64) -> Result<ConfigSet> {
    let all = ConfigSet::all(monoid.size(), alphabet, cap)?;
    let mut codes = Vec::with_capacity(all.len());
    for x in all.iter() {
        let (orbit, _) = orbit_and_stabilizer(monoid, &x)?;
        if orbit.len() <= monoid.size() {
            codes.push(x.code());
        }
    }
    Ok(ConfigSet::from_codes(monoid.size(), alphabet, codes))
}

/// `∪ Inv(γ)` over the given congruences.
pub fn union_of_inv(congruences: &[Congruence], alphabet: u32, cap: u64) -> Result<ConfigSet> {
    let first = congruences
        .first()
        .ok_or_else(|| Error::InvalidArgument("no congruences".into()))?;
    let mut acc = ConfigSet::from_codes(first.monoid().size(), alphabet, Vec::new());
    for g in congruences {
        acc = acc.union(&inv_gamma(g, alphabet, cap)?);
    }
    Ok(acc)
}

/// Whether `Y` and `Z` agree on the window `F` in the Hausdorff-Bourbaki
/// sense: every `y` matches some `z` on `F` and vice versa.
pub fn window_hb_agree(y: &ConfigSet, z: &ConfigSet, window: &[usize]) -> Result<bool> {
    if y.size != z.size || y.alphabet != z.alphabet {
        return Err(Error::MonoidMismatch("configuration sets over different spaces".into()));
    }
    if let Some(&bad) = window.iter().find(|&&m| m >= y.size) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            size: y.size,
        });
    }
    let restrict = |s: &ConfigSet| -> BTreeSet<Vec<u32>> {
        s.iter()
            .map(|x| window.iter().map(|&m| x.symbols[m]).collect())
            .collect()
    };
    Ok(restrict(y) == restrict(z))
}

/// A configuration known only on a finite window of an arbitrary monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowConfiguration {
    monoid: MonoidHandle,
    alphabet: u32,
    values: BTreeMap<Element, u32>,
}

impl WindowConfiguration {
    pub fn new(
        monoid: MonoidHandle,
        alphabet: u32,
        values: impl IntoIterator<Item = (Element, u32)>,
    ) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidConfiguration("alphabet must be non-empty".into()));
        }
        let mut map = BTreeMap::new();
        for (e, s) in values {
            monoid.check(&e)?;
            if s >= alphabet {
                return Err(Error::InvalidConfiguration(format!(
                    "symbol {s} outside alphabet of size {alphabet}"
                )));
            }
            if map.insert(e, s).is_some() {
                return Err(Error::InvalidConfiguration("duplicate window element".into()));
            }
        }
        Ok(WindowConfiguration {
            monoid,
            alphabet,
            values: map,
        })
    }

    pub fn monoid(&self) -> &MonoidHandle {
        &self.monoid
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn window(&self) -> impl Iterator<Item = &Element> {
        self.values.keys()
    }

    pub fn values(&self) -> &BTreeMap<Element, u32> {
        &self.values
    }

    pub fn get(&self, e: &Element) -> Option<u32> {
        self.values.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Whether `self` and `other` coincide on `window`.
    pub fn agrees_on<'a>(
        &self,
        other: &WindowConfiguration,
        window: impl IntoIterator<Item = &'a Element>,
    ) -> bool {
        window
            .into_iter()
            .all(|e| self.get(e).is_some() && self.get(e) == other.get(e))
    }

    /// Restriction to a sub-window; elements outside the domain are an error.
    pub fn restrict<'a>(&self, window: impl IntoIterator<Item = &'a Element>) -> Result<Self> {
        let values = window
            .into_iter()
            .map(|e| {
                self.get(e)
                    .map(|s| (e.clone(), s))
                    .ok_or_else(|| Error::InvalidConfiguration("element outside window".into()))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(WindowConfiguration {
            monoid: self.monoid.clone(),
            alphabet: self.alphabet,
            values,
        })
    }

    pub fn to_text(&self) -> String {
        let window = join(self.values.keys().map(|e| self.monoid.format_element(e)));
        let symbols = join(self.values.values());
        let sep = |s: &str| if s.is_empty() { String::new() } else { format!(" {s}") };
        if self.values.is_empty() {
            format!("config v1\nalphabet {}\nwindow\n", self.alphabet)
        } else {
            format!(
                "config v1\nalphabet {}\nwindow{}\n{}\n",
                self.alphabet,
                sep(&window),
                symbols
            )
        }
    }

    pub fn from_text(monoid: MonoidHandle, text: &str) -> Result<Self> {
        let mut r = LineReader::new(text);
        r.expect("config v1")?;
        let (no, rest) = r.keyed("alphabet")?;
        let alphabet: u32 = parse_num(no, rest)?;
        let (no, rest) = r.keyed("window")?;
        let elements = rest
            .split_whitespace()
            .map(|t| monoid.parse_element(t).map_err(|e| Error::parse(no, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let symbols: Vec<u32> = if elements.is_empty() {
            Vec::new()
        } else {
            let (no2, line) = r.next_line()?;
            let s = parse_nums(no2, line)?;
            if s.len() != elements.len() {
                return Err(Error::parse(no2, "symbol count differs from window size"));
            }
            s
        };
        r.finish()?;
        WindowConfiguration::new(monoid, alphabet, elements.into_iter().zip(symbols))
            .map_err(|e| Error::parse(no, e.to_string()))
    }
}

/// Either kind of configuration file, dispatched on the `window` line.
pub fn is_window_text(text: &str) -> bool {
    text.lines().any(|l| crate::text::strip_key(l.trim(), "window").is_some())
}

/// A morphism onto a finite monoid, injective on the window, and a
/// configuration `z` on the target with `z ∘ φ = x` on the window.
#[derive(Clone, Debug)]
pub struct PeriodicApproximation {
    pub morphism: MonoidMorphism,
    pub z: Configuration,
}

impl PeriodicApproximation {
    /// Value of the periodic pullback `z ∘ φ` at `m`.
    pub fn pullback(&self, m: &Element) -> Result<u32> {
        Ok(self.z.get(self.morphism.apply(m)?))
    }
}

/// Words of length at most `max_len` plus an absorbing zero; products longer
/// than `max_len` collapse to zero. Returns the monoid and the word list
/// (index `i < words.len()` is `words[i]`, the last index is zero).
fn truncated_free_monoid(generators: u8, max_len: usize) -> Result<(FiniteMonoid, Vec<Vec<u8>>)> {
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..generators {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
        if words.len() + 1 > MAX_TRUNCATED_SIZE {
            return Err(Error::cap(
                "truncated free monoid size",
                words.len() as u128 + 1,
                MAX_TRUNCATED_SIZE as u128,
            ));
        }
    }
    let index: BTreeMap<&Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = words.len() + 1;
    let zero = n - 1;
    let mut table = vec![zero; n * n];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.len() + v.len() <= max_len {
                let mut w = u.clone();
                w.extend_from_slice(v);
                table[i * n + j] = index[&w];
            }
        }
    }
    Ok((FiniteMonoid::from_flat(n, 0, table)?, words))
}

/// Builds a periodic configuration agreeing with `x` on its window.
///
/// For `nat-add` (and one-generator free monoids) the quotient is `Z/n` with
/// `n = 1 + max(F)`; for larger free monoids it is the truncation at the
/// longest window word.
pub fn periodic_approximation(x: &WindowConfiguration) -> Result<PeriodicApproximation> {
    let k = x.alphabet;
    let exponent = |e: &Element| -> Option<u64> {
        match e {
            Element::Nat(n) => Some(*n),
            Element::Word(w) => Some(w.len() as u64),
            _ => None,
        }
    };
    let (morphism, target) = match x.monoid() {
        MonoidHandle::NatAdd | MonoidHandle::Free { generators: 1, .. } => {
            let n = x.window().filter_map(exponent).max().unwrap_or(0) as usize + 1;
            let target = Arc::new(FiniteMonoid::cyclic(n)?);
            let map = match x.monoid() {
                MonoidHandle::NatAdd => MorphismMap::One(1 % n),
                _ => MorphismMap::Generators(vec![1 % n]),
            };
            (MonoidMorphism::new(x.monoid().clone(), target.clone(), map)?, target)
        }
        MonoidHandle::Free { generators, .. } => {
            let len = x.window().filter_map(exponent).max().unwrap_or(0) as usize;
            let (m, words) = truncated_free_monoid(*generators, len)?;
            let gens = (0..*generators)
                .map(|g| if len == 0 { words.len() } else { 1 + g as usize })
                .collect();
            let target = Arc::new(m);
            (
                MonoidMorphism::new(x.monoid().clone(), target.clone(), MorphismMap::Generators(gens))?,
                target,
            )
        }
        MonoidHandle::Finite(m) => {
            let target = m.clone();
            let map = MorphismMap::Table((0..m.size()).collect());
            (MonoidMorphism::new(x.monoid().clone(), target.clone(), map)?, target)
        }
        MonoidHandle::Bicyclic => {
            return Err(Error::Unsupported(
                "the bicyclic monoid has no finite quotient separating its elements".into(),
            ))
        }
    };
    let mut symbols = vec![0; target.size()];
    for (e, &s) in x.values() {
        symbols[morphism.apply(e)?] = s;
    }
    let z = Configuration::new(k, symbols)?;
    let approx = PeriodicApproximation { morphism, z };
    for (e, &s) in x.values() {
        debug_assert_eq!(approx.pullback(e)?, s);
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::enumerate_congruences;

    fn z(n: usize) -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::cyclic(n).unwrap())
    }

    fn cfg(k: u32, s: &[u32]) -> Configuration {
        Configuration::new(k, s.to_vec()).unwrap()
    }

    #[test]
    fn shift_examples() {
        let m = z(3);
        assert_eq!(shift(&m, 1, &cfg(3, &[0, 1, 2])).unwrap(), cfg(3, &[1, 2, 0]));
        let x = cfg(2, &[1, 0, 1]);
        assert_eq!(shift(&m, 0, &x).unwrap(), x);
        let c = cfg(2, &[1, 1, 1]);
        for g in 0..3 {
            assert_eq!(shift(&m, g, &c).unwrap(), c);
        }
    }

    #[test]
    fn orbit_examples() {
        let (orbit, rho) = orbit_and_stabilizer(&z(3), &cfg(2, &[1, 1, 1])).unwrap();
        assert_eq!(orbit.len(), 1);
        assert_eq!(rho.num_classes, 1);
        let (orbit, rho) = orbit_and_stabilizer(&z(3), &cfg(3, &[0, 1, 2])).unwrap();
        assert_eq!(orbit.len(), 3);
        assert_eq!(rho.class_of, vec![0, 1, 2]);
        let (orbit, rho) = orbit_and_stabilizer(&z(4), &cfg(2, &[0, 1, 0, 1])).unwrap();
        assert_eq!(orbit.len(), 2);
        assert!(rho.related(0, 2));
    }

    #[test]
    fn inv_gamma_examples() {
        let g = Congruence::closure(z(4), &[(0, 2)]).unwrap();
        let inv = inv_gamma(&g, 2, DEFAULT_CONFIG_CAP).unwrap();
        let expected: Vec<Configuration> = [[0, 0, 0, 0], [0, 1, 0, 1], [1, 0, 1, 0], [1, 1, 1, 1]]
            .iter()
            .map(|s| cfg(2, s))
            .collect();
        assert_eq!(inv, ConfigSet::from_configs(4, 2, &expected));
        let d = Congruence::diagonal(z(4));
        assert_eq!(inv_gamma(&d, 2, DEFAULT_CONFIG_CAP).unwrap().len(), 16);
        let f = Congruence::full(z(4));
        assert_eq!(inv_gamma(&f, 3, DEFAULT_CONFIG_CAP).unwrap().len(), 3);
    }

    #[test]
    fn periodic_examples() {
        let m = z(4);
        let per = periodic_points(&m, 2, DEFAULT_CONFIG_CAP).unwrap();
        assert_eq!(per.len(), 16);
        let congs = enumerate_congruences(&m, 8).unwrap();
        assert_eq!(union_of_inv(&congs, 2, DEFAULT_CONFIG_CAP).unwrap(), per);
    }

    #[test]
    fn hb_agreement_examples() {
        let m = z(4);
        let consts = inv_gamma(&Congruence::full(m.clone()), 2, DEFAULT_CONFIG_CAP).unwrap();
        let all = inv_gamma(&Congruence::diagonal(m.clone()), 2, DEFAULT_CONFIG_CAP).unwrap();
        assert!(window_hb_agree(&all, &all, &[0, 1, 2]).unwrap());
        assert!(window_hb_agree(&consts, &all, &[0]).unwrap());
        assert!(!window_hb_agree(&consts, &all, &[0, 1]).unwrap());
    }

    #[test]
    fn periodic_approximation_nat() {
        let x = WindowConfiguration::new(
            MonoidHandle::NatAdd,
            2,
            [(Element::Nat(0), 1), (Element::Nat(1), 0), (Element::Nat(2), 1)],
        )
        .unwrap();
        let a = periodic_approximation(&x).unwrap();
        assert_eq!(**a.morphism.target(), FiniteMonoid::cyclic(3).unwrap());
        assert_eq!(a.z, cfg(2, &[1, 0, 1]));
        for n in 0..12u64 {
            assert_eq!(
                a.pullback(&Element::Nat(n)).unwrap(),
                a.pullback(&Element::Nat(n + 3)).unwrap()
            );
        }

        let single = WindowConfiguration::new(MonoidHandle::NatAdd, 2, [(Element::Nat(0), 1)]).unwrap();
        let a = periodic_approximation(&single).unwrap();
        assert_eq!(a.morphism.target().size(), 1);
        assert_eq!(a.z, cfg(2, &[1]));
    }

    #[test]
    fn periodic_approximation_free() {
        let f1 = MonoidHandle::free(1).unwrap();
        let w = |s: &str| f1.parse_element(s).unwrap();
        let x = WindowConfiguration::new(f1.clone(), 2, [(w("1"), 0), (w("a"), 1), (w("aa"), 1)])
            .unwrap();
        let a = periodic_approximation(&x).unwrap();
        assert_eq!(**a.morphism.target(), FiniteMonoid::cyclic(3).unwrap());
        assert_eq!(a.z, cfg(2, &[0, 1, 1]));

        let f2 = MonoidHandle::free(2).unwrap();
        let w2 = |s: &str| f2.parse_element(s).unwrap();
        let window = ["1", "a", "b", "ab", "ba", "bb"];
        let x = WindowConfiguration::new(
            f2.clone(),
            3,
            window.iter().enumerate().map(|(i, s)| (w2(s), (i % 3) as u32)),
        )
        .unwrap();
        let a = periodic_approximation(&x).unwrap();
        for (e, &s) in x.values() {
            assert_eq!(a.pullback(e).unwrap(), s);
        }
        let images: BTreeSet<usize> = x.window().map(|e| a.morphism.apply(e).unwrap()).collect();
        assert_eq!(images.len(), window.len());
    }

    #[test]
    fn bicyclic_has_no_approximation() {
        let x = WindowConfiguration::new(MonoidHandle::Bicyclic, 2, []).unwrap();
        assert!(periodic_approximation(&x).is_err());
    }

    #[test]
    fn window_text_round_trip() {
        let b = MonoidHandle::Bicyclic;
        let x = WindowConfiguration::new(
            b.clone(),
            2,
            [
                (b.parse_element("0,0").unwrap(), 0),
                (b.parse_element("1,1").unwrap(), 1),
            ],
        )
        .unwrap();
        let t = x.to_text();
        assert!(is_window_text(&t));
        assert_eq!(WindowConfiguration::from_text(b.clone(), &t).unwrap(), x);
        let empty = WindowConfiguration::new(b.clone(), 2, []).unwrap();
        assert_eq!(WindowConfiguration::from_text(b, &empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn config_text() {
        let x = cfg(3, &[0, 2, 1]);
        assert_eq!(Configuration::from_text(&x.to_text()).unwrap(), x);
        assert!(!is_window_text(&x.to_text()));
        assert!(Configuration::from_text("config v1\nalphabet 2\n0 2\n").is_err());
    }
}
