//! Congruence relations on finite monoids.
//!
//! A congruence is stored as a canonical partition: `class_of[i]` is the
//! class of element `i`, and classes are numbered in order of their first
//! member, so two equal congruences have identical vectors.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::{FiniteMonoid, MonoidMorphism};
use crate::text::{join, parse_num, parse_nums, LineReader};

/// Default cap on monoid size for congruence enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct Congruence {
    monoid: Arc<FiniteMonoid>,
    class_of: Vec<usize>,
    num_classes: usize,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.class_of == other.class_of
            && (Arc::ptr_eq(&self.monoid, &other.monoid) || self.monoid == other.monoid)
    }
}

impl Eq for Congruence {}

impl std::hash::Hash for Congruence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.class_of.hash(state);
    }
}

/// Renumbers labels by order of first appearance.
fn canonicalize(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let class_of: Vec<usize> = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (class_of, map.len())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl Congruence {
    /// Builds a congruence from arbitrary class labels, checking compatibility.
    pub fn from_labels(monoid: Arc<FiniteMonoid>, labels: &[usize]) -> Result<Self> {
        if labels.len() != monoid.size() {
            return Err(Error::InvalidCongruence(format!(
                "expected {} labels, found {}",
                monoid.size(),
                labels.len()
            )));
        }
        let (class_of, num_classes) = canonicalize(labels);
        let c = Congruence {
            monoid,
            class_of,
            num_classes,
        };
        if let Some((a, b)) = c.compatibility_failure() {
            return Err(Error::InvalidCongruence(format!(
                "pair ({a}, {b}) is related but its translates are not"
            )));
        }
        Ok(c)
    }

    fn compatibility_failure(&self) -> Option<(usize, usize)> {
        let m = &self.monoid;
        let n = m.size();
        // Checking each element against its class representative suffices.
        let mut rep = vec![usize::MAX; self.num_classes];
        for i in 0..n {
            if rep[self.class_of[i]] == usize::MAX {
                rep[self.class_of[i]] = i;
            }
        }
        for i in 0..n {
            let r = rep[self.class_of[i]];
            if r == i {
                continue;
            }
            for u in 0..n {
                if !self.related(m.mul(u, i), m.mul(u, r)) || !self.related(m.mul(i, u), m.mul(r, u)) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    pub fn diagonal(monoid: Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        Congruence {
            monoid,
            class_of: (0..n).collect(),
            num_classes: n,
        }
    }

    pub fn full(monoid: Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        Congruence {
            monoid,
            class_of: vec![0; n],
            num_classes: 1,
        }
    }

    /// Smallest congruence containing `pairs`.
    pub fn closure(monoid: Arc<FiniteMonoid>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = monoid.size();
        let mut uf = UnionFind::new(n);
        let mut queue = VecDeque::new();
        for &(a, b) in pairs {
            monoid.check(a)?;
            monoid.check(b)?;
            if uf.union(a, b) {
                queue.push_back((a, b));
            }
        }
        Self::saturate(&monoid, &mut uf, queue);
        let labels: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        let (class_of, num_classes) = canonicalize(&labels);
        Ok(Congruence {
            monoid,
            class_of,
            num_classes,
        })
    }

    // Every merged pair is translated on both sides; the final relation is
    // the equivalence closure of the merged pairs, hence compatible.
    fn saturate(m: &FiniteMonoid, uf: &mut UnionFind, mut queue: VecDeque<(usize, usize)>) {
        let n = m.size();
        while let Some((a, b)) = queue.pop_front() {
            for u in 0..n {
                let (x, y) = (m.mul(u, a), m.mul(u, b));
                if uf.union(x, y) {
                    queue.push_back((x, y));
                }
                let (x, y) = (m.mul(a, u), m.mul(b, u));
                if uf.union(x, y) {
                    queue.push_back((x, y));
                }
            }
        }
    }

    /// Smallest congruence containing both.
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        self.same_monoid(other)?;
        let pairs: Vec<(usize, usize)> = self
            .generating_pairs()
            .into_iter()
            .chain(other.generating_pairs())
            .collect();
        Congruence::closure(self.monoid.clone(), &pairs)
    }

    /// Partition meet, i.e. intersection of relations.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.same_monoid(other)?;
        let labels: Vec<usize> = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|(&a, &b)| a * other.num_classes + b)
            .collect();
        let (class_of, num_classes) = canonicalize(&labels);
        let c = Congruence {
            monoid: self.monoid.clone(),
            class_of,
            num_classes,
        };
        assert!(
            c.compatibility_failure().is_none(),
            "meet of congruences must be a congruence"
        );
        Ok(c)
    }

    fn same_monoid(&self, other: &Congruence) -> Result<()> {
        if Arc::ptr_eq(&self.monoid, &other.monoid) || self.monoid == other.monoid {
            Ok(())
        } else {
            Err(Error::MonoidMismatch("congruences over different monoids".into()))
        }
    }

    /// Pairs `(i, rep(i))` whose equivalence closure is this relation.
    pub fn generating_pairs(&self) -> Vec<(usize, usize)> {
        let mut rep = vec![usize::MAX; self.num_classes];
        let mut out = Vec::new();
        for (i, &c) in self.class_of.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = i;
            } else {
                out.push((rep[c], i));
            }
        }
        out
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn is_diagonal(&self) -> bool {
        self.num_classes == self.monoid.size()
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn is_contained_in(&self, other: &Congruence) -> bool {
        let n = self.class_of.len();
        (0..n).all(|i| (0..n).all(|j| !self.related(i, j) || other.related(i, j)))
    }

    /// The quotient monoid `M/γ` (element `c` is class `c`) and the projection.
    pub fn quotient(&self) -> (FiniteMonoid, Vec<usize>) {
        let m = &self.monoid;
        let reps: Vec<usize> = self.classes().iter().map(|c| c[0]).collect();
        let k = self.num_classes;
        let table = reps
            .iter()
            .flat_map(|&a| reps.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.class_of[m.mul(a, b)])
            .collect();
        let q = FiniteMonoid::from_flat(k, self.class_of[m.identity()], table)
            .expect("quotient by a congruence is a monoid");
        (q, self.class_of.clone())
    }

    /// `{(m, m') : φ(m) = φ(m')}` for a finite-source morphism.
    pub fn kernel(phi: &MonoidMorphism) -> Result<Congruence> {
        let src = phi.source().finite()?;
        let monoid = Arc::new(src.clone());
        let labels: Vec<usize> = (0..src.size())
            .map(|i| phi.apply(&crate::monoid::Element::Index(i)))
            .collect::<Result<_>>()?;
        let (class_of, num_classes) = canonicalize(&labels);
        Ok(Congruence {
            monoid,
            class_of,
            num_classes,
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "congruence v1\nmonoid-size {}\nclasses {}\nclass_of {}\n",
            self.monoid.size(),
            self.num_classes,
            join(&self.class_of)
        )
    }

    pub fn from_text(monoid: Arc<FiniteMonoid>, text: &str) -> Result<Self> {
        let mut r = LineReader::new(text);
        r.expect("congruence v1")?;
        let (no, rest) = r.keyed("monoid-size")?;
        let size: usize = parse_num(no, rest)?;
        if size != monoid.size() {
            return Err(Error::parse(no, format!("monoid has size {}", monoid.size())));
        }
        let (no, rest) = r.keyed("classes")?;
        let classes: usize = parse_num(no, rest)?;
        let (no, rest) = r.keyed("class_of")?;
        let labels: Vec<usize> = parse_nums(no, rest)?;
        r.finish()?;
        if labels.len() != size || labels.iter().any(|&l| l >= classes) {
            return Err(Error::parse(no, "class_of has wrong length or range"));
        }
        let c = Congruence::from_labels(monoid, &labels)?;
        if c.class_of != labels || c.num_classes != classes {
            return Err(Error::parse(no, "class_of is not in canonical form"));
        }
        Ok(c)
    }
}

fn sort_canonical(list: &mut [Congruence]) {
    list.sort_by(|a, b| {
        b.num_classes
            .cmp(&a.num_classes)
            .then_with(|| a.class_of.cmp(&b.class_of))
    });
}

/// All congruences of `monoid`, sorted by (classes descending, `class_of`).
///
/// Generated from the diagonal by joining principal congruences until no
/// new congruence appears.
pub fn enumerate_congruences(monoid: &Arc<FiniteMonoid>, cap: usize) -> Result<Vec<Congruence>> {
    let n = monoid.size();
    if n > cap {
        return Err(Error::cap("congruence enumeration monoid size", n as u128, cap as u128));
    }
    let mut principal: Vec<Congruence> = Vec::new();
    let mut seen_principal = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = Congruence::closure(monoid.clone(), &[(a, b)])?;
            if seen_principal.insert(c.class_of.clone()) {
                principal.push(c);
            }
        }
    }
    let diag = Congruence::diagonal(monoid.clone());
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(diag.class_of.clone());
    let mut all = vec![diag.clone()];
    let mut queue = VecDeque::from([diag]);
    while let Some(c) = queue.pop_front() {
        for p in &principal {
            if p.is_contained_in(&c) {
                continue;
            }
            let j = c.join(p)?;
            if seen.insert(j.class_of.clone()) {
                all.push(j.clone());
                queue.push_back(j);
            }
        }
    }
    sort_canonical(&mut all);
    Ok(all)
}

/// Whether `γ₁ ∩ F = γ₂ ∩ F` for the pair window `F`.
pub fn marked_window_agree(
    g1: &Congruence,
    g2: &Congruence,
    window: &[(usize, usize)],
) -> Result<bool> {
    g1.same_monoid(g2)?;
    for &(a, b) in window {
        g1.monoid.check(a)?;
        g1.monoid.check(b)?;
    }
    Ok(window
        .iter()
        .all(|&(a, b)| g1.related(a, b) == g2.related(a, b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualProperty {
    Finite,
    CancellativeCommutative,
}

impl ResidualProperty {
    pub fn holds_for(self, m: &FiniteMonoid) -> bool {
        match self {
            ResidualProperty::Finite => true,
            ResidualProperty::CancellativeCommutative => {
                let p = m.predicates();
                p.commutative && p.cancellative()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidualProperty::Finite => "finite",
            ResidualProperty::CancellativeCommutative => "cancellative_commutative",
        }
    }
}

impl std::str::FromStr for ResidualProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite" => Ok(ResidualProperty::Finite),
            "cancellative_commutative" => Ok(ResidualProperty::CancellativeCommutative),
            _ => Err(Error::InvalidArgument(format!("unknown property `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResidualCheck {
    pub holds: bool,
    /// Meet of all congruences whose quotient has the property.
    pub meet: Congruence,
    /// A subfamily of qualifying congruences whose meet equals `meet`.
    pub witness_family: Vec<Congruence>,
    pub qualifying: usize,
}

/// Residually-P test: the meet of all congruences with P-quotients is `Δ`.
pub fn residually_check(
    monoid: &Arc<FiniteMonoid>,
    property: ResidualProperty,
    cap: usize,
) -> Result<ResidualCheck> {
    let all = enumerate_congruences(monoid, cap)?;
    let qualifying: Vec<&Congruence> = all
        .iter()
        .filter(|c| property.holds_for(&c.quotient().0))
        .collect();
    let full = Congruence::full(monoid.clone());
    let mut meet = full.clone();
    for c in &qualifying {
        meet = meet.meet(c)?;
    }
    // Greedy: finest first, keep a congruence only if it refines the running meet.
    let mut running = full;
    let mut witness_family = Vec::new();
    for c in &qualifying {
        if running == meet {
            break;
        }
        let next = running.meet(c)?;
        if next != running {
            running = next;
            witness_family.push((*c).clone());
        }
    }
    debug_assert_eq!(running, meet);
    Ok(ResidualCheck {
        holds: meet.is_diagonal(),
        meet,
        witness_family,
        qualifying: qualifying.len(),
    })
}

/// Distinct elements appearing in `pairs` (helper for windows).
pub fn pair_support(pairs: &[(usize, usize)]) -> BTreeSet<usize> {
    pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{MonoidHandle, MorphismMap};

    fn z(n: usize) -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::cyclic(n).unwrap())
    }

    fn semilattice() -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::two_element_semilattice())
    }

    #[test]
    fn closure_examples() {
        let c = Congruence::closure(z(4), &[(0, 2)]).unwrap();
        assert_eq!(c.classes(), vec![vec![0, 2], vec![1, 3]]);
        assert!(Congruence::closure(z(4), &[]).unwrap().is_diagonal());
        assert_eq!(
            Congruence::closure(semilattice(), &[(0, 1)]).unwrap().num_classes(),
            1
        );
    }

    #[test]
    fn enumeration_examples() {
        let list = enumerate_congruences(&z(4), DEFAULT_ENUMERATION_CAP).unwrap();
        let classes: Vec<_> = list.iter().map(|c| c.class_of().to_vec()).collect();
        assert_eq!(
            classes,
            vec![vec![0, 1, 2, 3], vec![0, 1, 0, 1], vec![0, 0, 0, 0]]
        );
        assert_eq!(
            enumerate_congruences(&semilattice(), 8).unwrap().len(),
            2
        );
        let trivial = Arc::new(FiniteMonoid::trivial());
        assert_eq!(enumerate_congruences(&trivial, 8).unwrap().len(), 1);
        assert!(enumerate_congruences(&z(9), 8).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn quotient_examples() {
        let g = Congruence::closure(z(4), &[(0, 2)]).unwrap();
        let (q, proj) = g.quotient();
        assert_eq!(q, FiniteMonoid::cyclic(2).unwrap());
        assert_eq!(proj, vec![0, 1, 0, 1]);
        let (q, _) = Congruence::diagonal(z(4)).quotient();
        assert_eq!(q, *z(4));
        let (q, _) = Congruence::full(z(4)).quotient();
        assert_eq!(q, FiniteMonoid::trivial());
    }

    #[test]
    fn kernel_examples() {
        let z3h: MonoidHandle = (*z(3)).clone().into();
        let id = MonoidMorphism::new(z3h, z(3), MorphismMap::Table(vec![0, 1, 2])).unwrap();
        assert!(Congruence::kernel(&id).unwrap().is_diagonal());
        let to_trivial = MonoidMorphism::new(
            (*semilattice()).clone().into(),
            Arc::new(FiniteMonoid::trivial()),
            MorphismMap::Table(vec![0, 0]),
        )
        .unwrap();
        assert_eq!(Congruence::kernel(&to_trivial).unwrap().num_classes(), 1);
        let mod2 = MonoidMorphism::new(
            (*z(4)).clone().into(),
            z(2),
            MorphismMap::Table(vec![0, 1, 0, 1]),
        )
        .unwrap();
        assert_eq!(
            Congruence::kernel(&mod2).unwrap().classes(),
            vec![vec![0, 2], vec![1, 3]]
        );
    }

    #[test]
    fn window_agreement_examples() {
        let d = Congruence::diagonal(z(4));
        let g = Congruence::closure(z(4), &[(0, 2)]).unwrap();
        assert!(marked_window_agree(&g, &g, &[(0, 2), (1, 3)]).unwrap());
        assert!(!marked_window_agree(&d, &g, &[(0, 2)]).unwrap());
        assert!(marked_window_agree(&d, &g, &[(0, 1)]).unwrap());
    }

    #[test]
    fn residual_examples() {
        let r = residually_check(&semilattice(), ResidualProperty::Finite, 8).unwrap();
        assert!(r.holds);
        let r = residually_check(&z(4), ResidualProperty::CancellativeCommutative, 8).unwrap();
        assert!(r.holds);
        assert_eq!(r.witness_family.len(), 1);
        assert!(r.witness_family[0].is_diagonal());
        let r = residually_check(&semilattice(), ResidualProperty::CancellativeCommutative, 8)
            .unwrap();
        assert!(!r.holds);
        assert_eq!(r.qualifying, 1);
        assert_eq!(r.meet.num_classes(), 1);
    }

    #[test]
    fn invalid_labels_rejected() {
        // {0,1} merged in Z4 forces everything together.
        assert!(Congruence::from_labels(z(4), &[0, 0, 1, 2]).is_err());
        assert!(Congruence::from_labels(z(4), &[0, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Congruence::closure(z(4), &[(0, 2)]).unwrap();
        let t = g.to_text();
        assert_eq!(Congruence::from_text(z(4), &t).unwrap(), g);
        assert!(Congruence::from_text(z(3), &t).is_err());
    }
}
