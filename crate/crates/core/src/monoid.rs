//! Monoids: finite ones given by Cayley tables, and the built-in infinite
//! monoids (bicyclic, free, additive naturals) with closed-form arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::text::{join, parse_nums, LineReader};

/// Default cap on the length of free-monoid words.
pub const DEFAULT_MAX_WORD_LEN: usize = 32;

/// A finite monoid stored as a dense Cayley table over `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    table: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ElementClass {
    /// `L_m` injective: `m x = m y` implies `x = y`.
    pub left_cancellable: bool,
    /// `R_m` injective.
    pub right_cancellable: bool,
    /// `R_m` surjective, i.e. some `x` has `x m = 1`.
    pub left_invertible: bool,
    /// `L_m` surjective, i.e. some `x` has `m x = 1`.
    pub right_invertible: bool,
    pub invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonoidPredicates {
    pub commutative: bool,
    pub left_cancellative: bool,
    pub right_cancellative: bool,
    pub is_group: bool,
}

impl MonoidPredicates {
    pub fn cancellative(&self) -> bool {
        self.left_cancellative && self.right_cancellative
    }
}

impl FiniteMonoid {
    /// Builds a monoid from table rows, validating identity and associativity.
    pub fn new(identity: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        Self::from_flat(size, identity, rows.into_iter().flatten().collect())
    }

    /// Builds a monoid from a row-major table of `size * size` entries.
    pub fn from_flat(size: usize, identity: usize, table: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidTable("size must be positive".into()));
        }
        if table.len() != size * size {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                size * size,
                table.len()
            )));
        }
        if identity >= size {
            return Err(Error::InvalidTable(format!(
                "identity {identity} out of range for size {size}"
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= size) {
            return Err(Error::InvalidTable(format!(
                "entry {bad} out of range for size {size}"
            )));
        }
        let m = FiniteMonoid {
            size,
            identity,
            table,
        };
        for i in 0..size {
            if m.mul(identity, i) != i || m.mul(i, identity) != i {
                return Err(Error::InvalidTable(format!(
                    "{identity} is not a two-sided identity (fails at {i})"
                )));
            }
        }
        if let Some((i, j, k)) = m.associativity_failure() {
            return Err(Error::InvalidTable(format!(
                "not associative: ({i}*{j})*{k} != {i}*({j}*{k})"
            )));
        }
        Ok(m)
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(i, j);
                for k in 0..n {
                    if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            size: 1,
            identity: 0,
            table: vec![0],
        }
    }

    /// The cyclic group `Z/n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic order must be positive".into()));
        }
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i + j) % n))
            .collect();
        Ok(FiniteMonoid {
            size: n,
            identity: 0,
            table,
        })
    }

    /// The symmetric monoid `Map(X)` with `|X| = n` under composition.
    ///
    /// A map `f` is indexed by the base-`n` number `f(0) f(1) ... f(n-1)`
    /// (most significant first), and `f * g = f ∘ g`.
    pub fn map_monoid(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::InvalidArgument(format!(
                "map:{n} unsupported (need 1 <= n <= 5)"
            )));
        }
        let size = n.pow(n as u32);
        let decode = |idx: usize| -> Vec<usize> {
            let mut f = vec![0; n];
            let mut r = idx;
            for slot in f.iter_mut().rev() {
                *slot = r % n;
                r /= n;
            }
            f
        };
        let encode = |f: &[usize]| f.iter().fold(0, |acc, &v| acc * n + v);
        let maps: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let identity = encode(&(0..n).collect::<Vec<_>>());
        let mut table = Vec::with_capacity(size * size);
        for f in &maps {
            for g in &maps {
                let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                table.push(encode(&fg));
            }
        }
        Ok(FiniteMonoid {
            size,
            identity,
            table,
        })
    }

    /// `{1, a}` with `a * a = a`.
    pub fn two_element_semilattice() -> Self {
        FiniteMonoid {
            size: 2,
            identity: 0,
            table: vec![0, 1, 1, 1],
        }
    }

    /// The flip-flop monoid `{1, a, b}` where `x y = y` for `x, y` in `{a, b}`.
    pub fn flip_flop() -> Self {
        FiniteMonoid {
            size: 3,
            identity: 0,
            table: vec![0, 1, 2, 1, 1, 2, 2, 1, 2],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Row-major Cayley table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Unchecked product; panics if an index is out of range.
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.size + j]
    }

    pub fn multiply(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.mul(i, j))
    }

    pub fn check(&self, i: usize) -> Result<()> {
        if i < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: i,
                size: self.size,
            })
        }
    }

    pub fn opposite(&self) -> FiniteMonoid {
        let n = self.size;
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.mul(j, i))
            .collect();
        FiniteMonoid {
            size: n,
            identity: self.identity,
            table,
        }
    }

    pub fn classify(&self, m: usize) -> Result<ElementClass> {
        self.check(m)?;
        let n = self.size;
        let mut left_image = vec![false; n];
        let mut right_image = vec![false; n];
        for x in 0..n {
            left_image[self.mul(m, x)] = true;
            right_image[self.mul(x, m)] = true;
        }
        // On a finite set a self-map is injective iff it is surjective.
        let left_cancellable = left_image.iter().all(|&b| b);
        let right_cancellable = right_image.iter().all(|&b| b);
        let right_invertible = left_image[self.identity];
        let left_invertible = right_image[self.identity];
        Ok(ElementClass {
            left_cancellable,
            right_cancellable,
            left_invertible,
            right_invertible,
            invertible: left_invertible && right_invertible,
        })
    }

    /// Searches for `s, t` with `s t = 1 != t s`.
    pub fn find_bicyclic_pair(&self) -> Option<(usize, usize)> {
        let one = self.identity;
        (0..self.size)
            .flat_map(|s| (0..self.size).map(move |t| (s, t)))
            .find(|&(s, t)| self.mul(s, t) == one && self.mul(t, s) != one)
    }

    /// Smallest submonoid containing `gens`, as a sorted element list.
    pub fn submonoid_closure(&self, gens: &[usize]) -> Result<Vec<usize>> {
        for &g in gens {
            self.check(g)?;
        }
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(self.identity);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(members.into_iter().collect())
    }

    pub fn is_submonoid(&self, members: &[usize]) -> bool {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        set.iter().all(|&x| x < self.size)
            && set.contains(&self.identity)
            && set
                .iter()
                .all(|&x| set.iter().all(|&y| set.contains(&self.mul(x, y))))
    }

    pub fn predicates(&self) -> MonoidPredicates {
        let n = self.size;
        let commutative =
            (0..n).all(|i| (0..n).all(|j| self.mul(i, j) == self.mul(j, i)));
        let classes: Vec<ElementClass> =
            (0..n).map(|m| self.classify(m).expect("in range")).collect();
        MonoidPredicates {
            commutative,
            left_cancellative: classes.iter().all(|c| c.left_cancellable),
            right_cancellative: classes.iter().all(|c| c.right_cancellable),
            is_group: classes.iter().all(|c| c.invertible),
        }
    }

    /// Relabels elements so that the new index of `old` is `perm[old]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteMonoid> {
        let n = self.size;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
        }
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[perm[i] * n + perm[j]] = perm[self.mul(i, j)];
            }
        }
        Ok(FiniteMonoid {
            size: n,
            identity: perm[self.identity],
            table,
        })
    }

    /// The submonoid on `members` (sorted, closed, containing the identity),
    /// relabeled so that `members[i]` becomes `i`.
    pub fn submonoid(&self, members: &[usize]) -> Result<FiniteMonoid> {
        if !members.windows(2).all(|w| w[0] < w[1]) || !self.is_submonoid(members) {
            return Err(Error::InvalidArgument(
                "members do not form a submonoid".into(),
            ));
        }
        let pos = |x: usize| members.binary_search(&x).expect("closed");
        let size = members.len();
        let table = members
            .iter()
            .flat_map(|&x| members.iter().map(move |&y| (x, y)))
            .map(|(x, y)| pos(self.mul(x, y)))
            .collect();
        Ok(FiniteMonoid {
            size,
            identity: pos(self.identity),
            table,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "monoid v1\nsize {}\nidentity {}\ntable\n",
            self.size, self.identity
        );
        for row in self.table.chunks(self.size) {
            out.push_str(&join(row));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut r = LineReader::new(text);
        r.expect("monoid v1")?;
        let (no, rest) = r.keyed("size")?;
        let size: usize = crate::text::parse_num(no, rest)?;
        let (no, rest) = r.keyed("identity")?;
        let identity: usize = crate::text::parse_num(no, rest)?;
        r.expect("table")?;
        let mut table = Vec::with_capacity(size * size);
        for _ in 0..size {
            let (no, line) = r.next_line()?;
            let row: Vec<usize> = parse_nums(no, line)?;
            if row.len() != size {
                return Err(Error::parse(no, format!("expected {size} entries")));
            }
            if let Some(bad) = row.iter().find(|&&v| v >= size) {
                return Err(Error::parse(no, format!("index {bad} out of range")));
            }
            table.extend(row);
        }
        r.finish()?;
        FiniteMonoid::from_flat(size, identity, table)
    }
}

/// Every valid Cayley table on `0..n` (any identity position), in
/// lexicographic order of (identity, table).
pub fn enumerate_monoid_tables(n: usize) -> Result<Vec<FiniteMonoid>> {
    if n == 0 || n > 4 {
        return Err(Error::cap("table enumeration size", n as u128, 4));
    }
    let mut out = Vec::new();
    for e in 0..n {
        let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
        let cells: Vec<(usize, usize)> = others
            .iter()
            .flat_map(|&i| others.iter().map(move |&j| (i, j)))
            .collect();
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            table[e * n + i] = i;
            table[i * n + e] = i;
        }
        let total = n.pow(cells.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &(i, j) in cells.iter().rev() {
                table[i * n + j] = c % n;
                c /= n;
            }
            let m = FiniteMonoid {
                size: n,
                identity: e,
                table: table.clone(),
            };
            if m.associativity_failure().is_none() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// An element `q^a p^b` of the bicyclic monoid `<p, q | pq = 1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BicyclicElement {
    pub a: u64,
    pub b: u64,
}

impl BicyclicElement {
    pub const ONE: BicyclicElement = BicyclicElement { a: 0, b: 0 };
    pub const P: BicyclicElement = BicyclicElement { a: 0, b: 1 };
    pub const Q: BicyclicElement = BicyclicElement { a: 1, b: 0 };

    pub fn new(a: u64, b: u64) -> Self {
        BicyclicElement { a, b }
    }

}

impl std::ops::Mul for BicyclicElement {
    type Output = BicyclicElement;

    fn mul(self, rhs: BicyclicElement) -> BicyclicElement {
        let (a, b, c, d) = (self.a, self.b, rhs.a, rhs.b);
        if b >= c {
            BicyclicElement::new(a, b - c + d)
        } else {
            BicyclicElement::new(a + c - b, d)
        }
    }
}

impl fmt::Display for BicyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// Element of any supported monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Index(usize),
    Bicyclic(BicyclicElement),
    /// Free-monoid word as a sequence of generator indices.
    Word(Vec<u8>),
    Nat(u64),
}

impl Element {
    pub fn index(&self) -> Option<usize> {
        match self {
            Element::Index(i) => Some(*i),
            _ => None,
        }
    }
}

/// A monoid the engine can compute in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidHandle {
    Finite(Arc<FiniteMonoid>),
    Bicyclic,
    Free { generators: u8, max_len: usize },
    NatAdd,
}

impl From<FiniteMonoid> for MonoidHandle {
    fn from(m: FiniteMonoid) -> Self {
        MonoidHandle::Finite(Arc::new(m))
    }
}

impl fmt::Display for MonoidHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidHandle::Finite(m) => write!(f, "finite:{}", m.size()),
            MonoidHandle::Bicyclic => write!(f, "bicyclic"),
            MonoidHandle::Free { generators, .. } => write!(f, "free:{generators}"),
            MonoidHandle::NatAdd => write!(f, "nat-add"),
        }
    }
}

impl MonoidHandle {
    pub fn free(generators: u8) -> Result<Self> {
        if generators == 0 || generators > 26 {
            return Err(Error::InvalidArgument(format!(
                "free monoid needs 1..=26 generators, got {generators}"
            )));
        }
        Ok(MonoidHandle::Free {
            generators,
            max_len: DEFAULT_MAX_WORD_LEN,
        })
    }

    /// Expands a built-in name: `bicyclic`, `nat-add`, `free:n`, `cyclic:n`,
    /// `map:n`, `flip-flop`.
    pub fn builtin(name: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown built-in monoid `{name}`"));
        let arg = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match name {
            "bicyclic" => Ok(MonoidHandle::Bicyclic),
            "nat-add" => Ok(MonoidHandle::NatAdd),
            "flip-flop" => Ok(FiniteMonoid::flip_flop().into()),
            _ => {
                let (kind, n) = name.split_once(':').ok_or_else(bad)?;
                match kind {
                    "free" => {
                        let g = arg(n)?;
                        MonoidHandle::free(u8::try_from(g).map_err(|_| bad())?)
                    }
                    "cyclic" => Ok(FiniteMonoid::cyclic(arg(n)?)?.into()),
                    "map" => Ok(FiniteMonoid::map_monoid(arg(n)?)?.into()),
                    _ => Err(bad()),
                }
            }
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMonoid> {
        match self {
            MonoidHandle::Finite(m) => Some(m),
            _ => None,
        }
    }

    pub fn finite(&self) -> Result<&FiniteMonoid> {
        self.as_finite()
            .ok_or_else(|| Error::Unsupported(format!("operation needs a finite monoid, got {self}")))
    }

    pub fn identity(&self) -> Element {
        match self {
            MonoidHandle::Finite(m) => Element::Index(m.identity()),
            MonoidHandle::Bicyclic => Element::Bicyclic(BicyclicElement::ONE),
            MonoidHandle::Free { .. } => Element::Word(Vec::new()),
            MonoidHandle::NatAdd => Element::Nat(0),
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (MonoidHandle::Finite(m), Element::Index(i)) => m.check(*i),
            (MonoidHandle::Bicyclic, Element::Bicyclic(_)) => Ok(()),
            (MonoidHandle::NatAdd, Element::Nat(_)) => Ok(()),
            (
                MonoidHandle::Free {
                    generators,
                    max_len,
                },
                Element::Word(w),
            ) => {
                if w.len() > *max_len {
                    Err(Error::WordTooLong {
                        len: w.len(),
                        max: *max_len,
                    })
                } else if w.iter().any(|g| g >= generators) {
                    Err(Error::ForeignElement(self.format_element(x)))
                } else {
                    Ok(())
                }
            }
            _ => Err(Error::ForeignElement(format!("{x:?}"))),
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (MonoidHandle::Finite(m), Element::Index(i), Element::Index(j)) => {
                Element::Index(m.mul(*i, *j))
            }
            (MonoidHandle::Bicyclic, Element::Bicyclic(u), Element::Bicyclic(v)) => {
                Element::Bicyclic(*u * *v)
            }
            (MonoidHandle::NatAdd, Element::Nat(u), Element::Nat(v)) => Element::Nat(
                u.checked_add(*v)
                    .ok_or_else(|| Error::InvalidArgument("natural number overflow".into()))?,
            ),
            (MonoidHandle::Free { max_len, .. }, Element::Word(u), Element::Word(v)) => {
                let len = u.len() + v.len();
                if len > *max_len {
                    return Err(Error::WordTooLong { len, max: *max_len });
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                Element::Word(w)
            }
            _ => unreachable!("checked above"),
        })
    }

    /// All `m` with `s * m = t`.
    pub fn left_divisors(&self, s: &Element, t: &Element) -> Result<Vec<Element>> {
        self.check(s)?;
        self.check(t)?;
        Ok(match (self, s, t) {
            (MonoidHandle::Finite(fm), Element::Index(s), Element::Index(t)) => (0..fm.size())
                .filter(|&m| fm.mul(*s, m) == *t)
                .map(Element::Index)
                .collect(),
            (MonoidHandle::Bicyclic, Element::Bicyclic(s), Element::Bicyclic(t)) => {
                let (a, b, e, f) = (s.a, s.b, t.a, t.b);
                let mut out = Vec::new();
                // case c <= b: product is (a, b - c + d)
                if a == e {
                    for c in b.saturating_sub(f)..=b {
                        out.push(Element::Bicyclic(BicyclicElement::new(c, f + c - b)));
                    }
                }
                // case c > b: product is (a + c - b, d)
                if e > a {
                    out.push(Element::Bicyclic(BicyclicElement::new(e - a + b, f)));
                }
                out
            }
            (MonoidHandle::NatAdd, Element::Nat(s), Element::Nat(t)) => {
                t.checked_sub(*s).map(Element::Nat).into_iter().collect()
            }
            (MonoidHandle::Free { .. }, Element::Word(s), Element::Word(t)) => t
                .strip_prefix(s.as_slice())
                .map(|rest| Element::Word(rest.to_vec()))
                .into_iter()
                .collect(),
            _ => unreachable!("checked above"),
        })
    }

    pub fn classify(&self, x: &Element) -> Result<ElementClass> {
        self.check(x)?;
        Ok(match (self, x) {
            (MonoidHandle::Finite(m), Element::Index(i)) => m.classify(*i)?,
            (MonoidHandle::Bicyclic, Element::Bicyclic(e)) => {
                let right_invertible = e.a == 0;
                let left_invertible = e.b == 0;
                ElementClass {
                    left_cancellable: e.b == 0,
                    right_cancellable: e.a == 0,
                    left_invertible,
                    right_invertible,
                    invertible: left_invertible && right_invertible,
                }
            }
            (MonoidHandle::NatAdd, Element::Nat(n)) => ElementClass {
                left_cancellable: true,
                right_cancellable: true,
                left_invertible: *n == 0,
                right_invertible: *n == 0,
                invertible: *n == 0,
            },
            (MonoidHandle::Free { .. }, Element::Word(w)) => ElementClass {
                left_cancellable: true,
                right_cancellable: true,
                left_invertible: w.is_empty(),
                right_invertible: w.is_empty(),
                invertible: w.is_empty(),
            },
            _ => unreachable!("checked above"),
        })
    }

    /// Returns `(s, t)` with `s t = 1 != t s` when such a pair exists.
    pub fn find_bicyclic_pair(&self) -> Option<(Element, Element)> {
        match self {
            MonoidHandle::Finite(m) => m
                .find_bicyclic_pair()
                .map(|(s, t)| (Element::Index(s), Element::Index(t))),
            MonoidHandle::Bicyclic => Some((
                Element::Bicyclic(BicyclicElement::P),
                Element::Bicyclic(BicyclicElement::Q),
            )),
            MonoidHandle::Free { .. } | MonoidHandle::NatAdd => None,
        }
    }

    pub fn format_element(&self, x: &Element) -> String {
        match x {
            Element::Index(i) => i.to_string(),
            Element::Bicyclic(e) => e.to_string(),
            Element::Nat(n) => n.to_string(),
            Element::Word(w) if w.is_empty() => "1".to_string(),
            Element::Word(w) => w.iter().map(|&g| (b'a' + g) as char).collect(),
        }
    }

    pub fn parse_element(&self, token: &str) -> Result<Element> {
        let bad = || Error::ForeignElement(token.to_string());
        let x = match self {
            MonoidHandle::Finite(_) => Element::Index(token.parse().map_err(|_| bad())?),
            MonoidHandle::NatAdd => Element::Nat(token.parse().map_err(|_| bad())?),
            MonoidHandle::Bicyclic => {
                let (a, b) = token.split_once(',').ok_or_else(bad)?;
                Element::Bicyclic(BicyclicElement::new(
                    a.parse().map_err(|_| bad())?,
                    b.parse().map_err(|_| bad())?,
                ))
            }
            MonoidHandle::Free { .. } => {
                if token == "1" {
                    Element::Word(Vec::new())
                } else if token.bytes().all(|c| c.is_ascii_lowercase()) {
                    Element::Word(token.bytes().map(|c| c - b'a').collect())
                } else {
                    return Err(bad());
                }
            }
        };
        self.check(&x)?;
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismMap {
    /// Image of every element of a finite source.
    Table(Vec<usize>),
    /// Images of the free generators.
    Generators(Vec<usize>),
    /// Image of `1` in the additive naturals.
    One(usize),
}

/// A monoid morphism into a finite monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMorphism {
    source: MonoidHandle,
    target: Arc<FiniteMonoid>,
    map: MorphismMap,
}

impl MonoidMorphism {
    /// Validates the data; finite sources are checked exhaustively.
    pub fn new(source: MonoidHandle, target: Arc<FiniteMonoid>, map: MorphismMap) -> Result<Self> {
        let n = target.size();
        let in_range = |v: &usize| *v < n;
        match (&source, &map) {
            (MonoidHandle::Finite(src), MorphismMap::Table(t)) => {
                if t.len() != src.size() || !t.iter().all(in_range) {
                    return Err(Error::InvalidMorphism("table has wrong shape".into()));
                }
                if t[src.identity()] != target.identity() {
                    return Err(Error::InvalidMorphism("identity not preserved".into()));
                }
                for i in 0..src.size() {
                    for j in 0..src.size() {
                        if t[src.mul(i, j)] != target.mul(t[i], t[j]) {
                            return Err(Error::InvalidMorphism(format!(
                                "product of {i} and {j} not preserved"
                            )));
                        }
                    }
                }
            }
            (MonoidHandle::Free { generators, .. }, MorphismMap::Generators(g)) => {
                if g.len() != *generators as usize || !g.iter().all(in_range) {
                    return Err(Error::InvalidMorphism("generator images have wrong shape".into()));
                }
            }
            (MonoidHandle::NatAdd, MorphismMap::One(x)) => {
                if !in_range(x) {
                    return Err(Error::InvalidMorphism("image of 1 out of range".into()));
                }
            }
            _ => {
                return Err(Error::InvalidMorphism(format!(
                    "map kind does not fit source {source}"
                )))
            }
        }
        Ok(MonoidMorphism {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &MonoidHandle {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteMonoid> {
        &self.target
    }

    pub fn map(&self) -> &MorphismMap {
        &self.map
    }

    pub fn apply(&self, x: &Element) -> Result<usize> {
        self.source.check(x)?;
        let t = &self.target;
        Ok(match (&self.map, x) {
            (MorphismMap::Table(tab), Element::Index(i)) => tab[*i],
            (MorphismMap::Generators(g), Element::Word(w)) => w
                .iter()
                .fold(t.identity(), |acc, &gen| t.mul(acc, g[gen as usize])),
            (MorphismMap::One(one), Element::Nat(n)) => {
                pow(t, *one, *n)
            }
            _ => return Err(Error::ForeignElement(format!("{x:?}"))),
        })
    }
}

/// `x^e` by repeated squaring.
pub fn pow(m: &FiniteMonoid, x: usize, mut e: u64) -> usize {
    let mut acc = m.identity();
    let mut base = x;
    while e > 0 {
        if e & 1 == 1 {
            acc = m.mul(acc, base);
        }
        base = m.mul(base, base);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const ID: usize = 1;
    const SWAP: usize = 2;
    const C0: usize = 0;
    const C1: usize = 3;

    fn map2() -> FiniteMonoid {
        FiniteMonoid::map_monoid(2).unwrap()
    }

    #[test]
    fn map2_layout() {
        let m = map2();
        assert_eq!(m.identity(), ID);
        assert_eq!(m.mul(SWAP, SWAP), ID);
        // const0 ∘ swap = const0, swap ∘ const0 = const1
        assert_eq!(m.mul(C0, SWAP), C0);
        assert_eq!(m.mul(SWAP, C0), C1);
    }

    #[test]
    fn bicyclic_products() {
        let p = BicyclicElement::P;
        let q = BicyclicElement::Q;
        assert_eq!(p * q, BicyclicElement::ONE);
        assert_eq!(q * p, BicyclicElement::new(1, 1));
        assert_eq!(
            BicyclicElement::new(2, 3) * BicyclicElement::new(1, 4),
            BicyclicElement::new(2, 6)
        );
    }

    #[test]
    fn opposite_examples() {
        let s = FiniteMonoid::two_element_semilattice();
        assert_eq!(s.opposite(), s);
        let z3 = FiniteMonoid::cyclic(3).unwrap();
        assert_eq!(z3.opposite(), z3);
        let m = map2();
        let op = m.opposite();
        assert_eq!(op.mul(C0, SWAP), m.mul(SWAP, C0));
        assert_eq!(op.mul(SWAP, C0), m.mul(C0, SWAP));
        assert_ne!(op, m);
        assert_eq!(op.opposite(), m);
    }

    #[test]
    fn classify_examples() {
        let z3 = FiniteMonoid::cyclic(3).unwrap();
        let c = z3.classify(1).unwrap();
        assert!(c.left_cancellable && c.right_cancellable && c.invertible);
        assert!(c.left_invertible && c.right_invertible);
        assert_eq!(map2().classify(C0).unwrap(), ElementClass::default());

        let b = MonoidHandle::Bicyclic;
        let p = b.classify(&Element::Bicyclic(BicyclicElement::P)).unwrap();
        assert!(p.right_invertible && !p.left_invertible && !p.invertible);
        assert!(p.right_cancellable && !p.left_cancellable);
    }

    #[test]
    fn bicyclic_pairs() {
        assert_eq!(
            MonoidHandle::Bicyclic.find_bicyclic_pair(),
            Some((
                Element::Bicyclic(BicyclicElement::P),
                Element::Bicyclic(BicyclicElement::Q)
            ))
        );
        assert_eq!(FiniteMonoid::cyclic(4).unwrap().find_bicyclic_pair(), None);
        assert_eq!(map2().find_bicyclic_pair(), None);
        assert_eq!(MonoidHandle::NatAdd.find_bicyclic_pair(), None);
    }

    #[test]
    fn closure_examples() {
        let z4 = FiniteMonoid::cyclic(4).unwrap();
        assert_eq!(z4.submonoid_closure(&[2]).unwrap(), vec![0, 2]);
        assert_eq!(map2().submonoid_closure(&[SWAP]).unwrap(), vec![ID, SWAP]);
        assert_eq!(z4.submonoid_closure(&[]).unwrap(), vec![0]);
        assert!(z4.submonoid_closure(&[7]).is_err());
    }

    #[test]
    fn predicate_examples() {
        let z3 = FiniteMonoid::cyclic(3).unwrap().predicates();
        assert!(z3.commutative && z3.cancellative() && z3.is_group);
        let s = FiniteMonoid::two_element_semilattice().predicates();
        assert!(s.commutative && !s.cancellative() && !s.is_group);
        let m = map2().predicates();
        assert!(!m.commutative && !m.left_cancellative && !m.right_cancellative);
    }

    #[test]
    fn text_round_trip_and_rejections() {
        let m = map2();
        assert_eq!(FiniteMonoid::from_text(&m.to_text()).unwrap(), m);
        assert!(FiniteMonoid::from_text("monoid v2\nsize 1\nidentity 0\ntable\n0\n").is_err());
        assert!(FiniteMonoid::from_text("monoid v1\nsize 2\nidentity 0\ntable\n0 1\n1 2\n").is_err());
        // wrong identity
        assert!(FiniteMonoid::from_text("monoid v1\nsize 2\nidentity 1\ntable\n0 1\n1 0\n").is_err());
        let nonassoc = "monoid v1\nsize 3\nidentity 0\ntable\n0 1 2\n1 2 2\n2 1 1\n";
        assert!(matches!(
            FiniteMonoid::from_text(nonassoc),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn left_divisors_bicyclic() {
        let b = MonoidHandle::Bicyclic;
        let bc = |a, b| Element::Bicyclic(BicyclicElement::new(a, b));
        for s in [bc(0, 1), bc(1, 0), bc(2, 1), bc(1, 3)] {
            for t in [bc(0, 0), bc(0, 2), bc(1, 1), bc(3, 2)] {
                let got = b.left_divisors(&s, &t).unwrap();
                let mut brute = Vec::new();
                for c in 0..8 {
                    for d in 0..8 {
                        if b.multiply(&s, &bc(c, d)).unwrap() == t {
                            brute.push(bc(c, d));
                        }
                    }
                }
                let mut got_sorted = got.clone();
                got_sorted.sort();
                assert_eq!(got_sorted, brute, "s={s:?} t={t:?}");
            }
        }
    }

    #[test]
    fn free_words_capped() {
        let f = MonoidHandle::Free {
            generators: 2,
            max_len: 3,
        };
        let w = |s: &str| f.parse_element(s).unwrap();
        assert_eq!(f.multiply(&w("ab"), &w("b")).unwrap(), w("abb"));
        assert!(matches!(
            f.multiply(&w("ab"), &w("ab")),
            Err(Error::WordTooLong { len: 4, max: 3 })
        ));
        assert!(f.parse_element("c").is_err());
        assert_eq!(f.format_element(&f.identity()), "1");
    }

    #[test]
    fn builtins() {
        for name in ["bicyclic", "nat-add", "free:2", "cyclic:5", "map:3", "flip-flop"] {
            MonoidHandle::builtin(name).unwrap();
        }
        assert!(MonoidHandle::builtin("cyclic:x").is_err());
        assert!(MonoidHandle::builtin("dihedral:3").is_err());
        assert_eq!(
            MonoidHandle::builtin("map:2").unwrap().finite().unwrap().size(),
            4
        );
    }

    #[test]
    fn morphisms() {
        let z4: MonoidHandle = FiniteMonoid::cyclic(4).unwrap().into();
        let z2 = Arc::new(FiniteMonoid::cyclic(2).unwrap());
        let ok = MonoidMorphism::new(z4.clone(), z2.clone(), MorphismMap::Table(vec![0, 1, 0, 1]));
        assert!(ok.is_ok());
        let bad = MonoidMorphism::new(z4, z2.clone(), MorphismMap::Table(vec![0, 1, 1, 1]));
        assert!(bad.is_err());
        let z3 = Arc::new(FiniteMonoid::cyclic(3).unwrap());
        let phi = MonoidMorphism::new(MonoidHandle::NatAdd, z3, MorphismMap::One(1)).unwrap();
        assert_eq!(phi.apply(&Element::Nat(7)).unwrap(), 1);
    }

    #[test]
    fn table_enumeration_small_counts() {
        assert_eq!(enumerate_monoid_tables(1).unwrap().len(), 1);
        // {1,a}: a*a in {1, a} -> Z2 and the semilattice, for each identity choice.
        assert_eq!(enumerate_monoid_tables(2).unwrap().len(), 4);
    }
}
