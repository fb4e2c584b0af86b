//! Cellular automata over monoids.
//!
//! A cellular automaton is a finite memory set `S = (s_0, ..., s_{r-1})` and a
//! local rule `μ: A^S -> A`, acting by `τ(x)(m) = μ(s ↦ x(s m))`. The rule is
//! a table indexed by the base-`k` code of `(y(s_0), ..., y(s_{r-1}))` with
//! `s_0` most significant. Memory sets are kept sorted, so two automata with
//! the same memory set and local rule compare equal.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::monoid::{BicyclicElement, Element, FiniteMonoid, MonoidHandle};
use crate::shift::{config_count, Configuration, WindowConfiguration};
use crate::text::{join, parse_num, parse_nums, LineReader};

/// Cap on the number of rule-table entries `k^|S|`.
pub const MAX_RULE_TABLE: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularAutomaton {
    monoid: MonoidHandle,
    alphabet: u32,
    memory: Vec<Element>,
    rule: Vec<u32>,
}

fn table_len(alphabet: u32, radius: usize) -> Result<usize> {
    config_count(radius, alphabet, MAX_RULE_TABLE).map(|n| n as usize)
}

/// Base-`k` digits of `code`, most significant first.
pub fn decode_tuple(code: usize, alphabet: u32, radius: usize) -> Vec<u32> {
    let k = alphabet as usize;
    let mut out = vec![0; radius];
    let mut c = code;
    for slot in out.iter_mut().rev() {
        *slot = (c % k) as u32;
        c /= k;
    }
    out
}

pub fn encode_tuple(tuple: &[u32], alphabet: u32) -> usize {
    tuple
        .iter()
        .fold(0usize, |acc, &s| acc * alphabet as usize + s as usize)
}

/// Precomputed `s_i * m` for a finite monoid, shared across rules.
#[derive(Clone, Debug)]
pub struct NeighborTable {
    size: usize,
    radius: usize,
    cells: Vec<usize>,
}

impl NeighborTable {
    pub fn new(monoid: &FiniteMonoid, memory: &[usize]) -> Self {
        let size = monoid.size();
        let radius = memory.len();
        let mut cells = Vec::with_capacity(size * radius);
        for m in 0..size {
            for &s in memory {
                cells.push(monoid.mul(s, m));
            }
        }
        NeighborTable { size, radius, cells }
    }

    #[inline]
    pub fn apply(&self, rule: &[u32], alphabet: u32, input: &[u32], out: &mut [u32]) {
        let k = alphabet as usize;
        for (m, slot) in out.iter_mut().enumerate().take(self.size) {
            let nb = &self.cells[m * self.radius..(m + 1) * self.radius];
            let code = nb.iter().fold(0usize, |acc, &c| acc * k + input[c] as usize);
            *slot = rule[code];
        }
    }
}

/// Windowed evaluation of one automaton on a fixed input window: the output
/// window and, for each output cell, the input positions of `s_i m`.
#[derive(Clone, Debug)]
pub struct WindowPlan {
    pub input: Vec<Element>,
    pub output: Vec<Element>,
    positions: Vec<usize>,
    radius: usize,
}

impl WindowPlan {
    /// `input` must be sorted and duplicate-free. With an empty memory the
    /// output window is the input window.
    pub fn new(ca: &CellularAutomaton, input: &[Element]) -> Result<Self> {
        if !input.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("window must be sorted without duplicates".into()));
        }
        let radius = ca.memory.len();
        let Some(first) = ca.memory.first() else {
            return Ok(WindowPlan {
                input: input.to_vec(),
                output: input.to_vec(),
                positions: Vec::new(),
                radius,
            });
        };
        let mut candidates = BTreeSet::new();
        for f in input {
            candidates.extend(ca.monoid.left_divisors(first, f)?);
        }
        let mut output = Vec::new();
        let mut positions = Vec::new();
        'cand: for m in candidates {
            let mut row = Vec::with_capacity(radius);
            for s in &ca.memory {
                let sm = match ca.monoid.multiply(s, &m) {
                    Ok(v) => v,
                    Err(Error::WordTooLong { .. }) => continue 'cand,
                    Err(e) => return Err(e),
                };
                match input.binary_search(&sm) {
                    Ok(p) => row.push(p),
                    Err(_) => continue 'cand,
                }
            }
            output.push(m);
            positions.extend(row);
        }
        Ok(WindowPlan {
            input: input.to_vec(),
            output,
            positions,
            radius,
        })
    }

    /// `symbols[i]` is the value at `input[i]`; returns values on `output`.
    pub fn apply(&self, rule: &[u32], alphabet: u32, symbols: &[u32]) -> Vec<u32> {
        if self.radius == 0 {
            return vec![rule[0]; self.output.len()];
        }
        let k = alphabet as usize;
        self.positions
            .chunks(self.radius)
            .map(|row| rule[row.iter().fold(0usize, |acc, &p| acc * k + symbols[p] as usize)])
            .collect()
    }
}

impl CellularAutomaton {
    /// Validates a memory set in canonical (strictly increasing) order and a
    /// total rule table.
    pub fn new(
        monoid: MonoidHandle,
        alphabet: u32,
        memory: Vec<Element>,
        rule: Vec<u32>,
    ) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidAutomaton("alphabet must be non-empty".into()));
        }
        for s in &memory {
            monoid.check(s)?;
        }
        if !memory.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidAutomaton(
                "memory must be strictly increasing (canonical order, no duplicates)".into(),
            ));
        }
        let len = table_len(alphabet, memory.len())?;
        if rule.len() != len {
            return Err(Error::InvalidAutomaton(format!(
                "rule table has {} entries, expected {len}",
                rule.len()
            )));
        }
        if let Some(s) = rule.iter().find(|&&s| s >= alphabet) {
            return Err(Error::InvalidAutomaton(format!("rule symbol {s} outside alphabet")));
        }
        Ok(CellularAutomaton {
            monoid,
            alphabet,
            memory,
            rule,
        })
    }

    /// Builds the rule from a closure receiving the tuple in the order of
    /// `memory` as given; the memory is then sorted canonically.
    pub fn from_fn(
        monoid: MonoidHandle,
        alphabet: u32,
        memory: Vec<Element>,
        mut f: impl FnMut(&[u32]) -> u32,
    ) -> Result<Self> {
        let mut order: Vec<usize> = (0..memory.len()).collect();
        order.sort_by(|&a, &b| memory[a].cmp(&memory[b]));
        let sorted: Vec<Element> = order.iter().map(|&i| memory[i].clone()).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAutomaton("duplicate memory element".into()));
        }
        let r = memory.len();
        let len = table_len(alphabet, r)?;
        let mut given = vec![0u32; r];
        let rule = (0..len)
            .map(|code| {
                let tuple = decode_tuple(code, alphabet, r);
                for (pos, &orig) in order.iter().enumerate() {
                    given[orig] = tuple[pos];
                }
                f(&given)
            })
            .collect();
        CellularAutomaton::new(monoid, alphabet, sorted, rule)
    }

    pub fn identity(monoid: MonoidHandle, alphabet: u32) -> Result<Self> {
        let one = monoid.identity();
        CellularAutomaton::from_fn(monoid, alphabet, vec![one], |y| y[0])
    }

    /// `x ↦ x ∘ L_m`, memory `{m}`.
    pub fn shift_by(monoid: MonoidHandle, alphabet: u32, m: Element) -> Result<Self> {
        CellularAutomaton::from_fn(monoid, alphabet, vec![m], |y| y[0])
    }

    /// `x ↦ f ∘ x` for a symbol map `f`.
    pub fn cellwise(monoid: MonoidHandle, alphabet: u32, f: &[u32]) -> Result<Self> {
        if f.len() != alphabet as usize {
            return Err(Error::InvalidArgument("symbol map has wrong length".into()));
        }
        let one = monoid.identity();
        CellularAutomaton::from_fn(monoid, alphabet, vec![one], |y| f[y[0] as usize])
    }

    pub fn constant(monoid: MonoidHandle, alphabet: u32, symbol: u32) -> Result<Self> {
        CellularAutomaton::new(monoid, alphabet, Vec::new(), vec![symbol])
    }

    /// Majority rule over `S_0` on `{0, 1}`, with ties resolved by `x(m)`.
    pub fn majority(monoid: MonoidHandle, neighborhood: Vec<Element>) -> Result<Self> {
        let one = monoid.identity();
        let s0: BTreeSet<Element> = neighborhood.into_iter().collect();
        let mut memory: Vec<Element> = s0.iter().cloned().collect();
        let one_pos = match memory.iter().position(|e| *e == one) {
            Some(p) => p,
            None => {
                memory.push(one);
                memory.len() - 1
            }
        };
        let in_s0: Vec<bool> = memory.iter().map(|e| s0.contains(e)).collect();
        let half2 = s0.len() as u32;
        CellularAutomaton::from_fn(monoid, 2, memory, move |y| {
            let sum: u32 = y.iter().zip(&in_s0).filter(|(_, &b)| b).map(|(v, _)| *v).sum();
            match (2 * sum).cmp(&half2) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Equal => y[one_pos],
                std::cmp::Ordering::Less => 0,
            }
        })
    }

    pub fn monoid(&self) -> &MonoidHandle {
        &self.monoid
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn memory(&self) -> &[Element] {
        &self.memory
    }

    pub fn rule(&self) -> &[u32] {
        &self.rule
    }

    pub fn local(&self, tuple: &[u32]) -> u32 {
        self.rule[encode_tuple(tuple, self.alphabet)]
    }

    fn memory_indices(&self) -> Result<Vec<usize>> {
        self.monoid.finite()?;
        Ok(self.memory.iter().map(|e| e.index().expect("finite memory")).collect())
    }

    pub fn neighbor_table(&self) -> Result<NeighborTable> {
        let m = self.monoid.finite()?;
        Ok(NeighborTable::new(m, &self.memory_indices()?))
    }

    fn check_config(&self, x: &Configuration) -> Result<()> {
        if x.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet,
                found: x.alphabet(),
            });
        }
        let n = self.monoid.finite()?.size();
        if x.len() != n {
            return Err(Error::MonoidMismatch(format!(
                "configuration has {} cells, monoid has {n} elements",
                x.len()
            )));
        }
        Ok(())
    }

    /// `τ(x)(m) = μ(x(s_0 m), ..., x(s_{r-1} m))` over a finite monoid.
    pub fn apply(&self, x: &Configuration) -> Result<Configuration> {
        self.check_config(x)?;
        let table = self.neighbor_table()?;
        let mut out = vec![0; x.len()];
        table.apply(&self.rule, self.alphabet, x.symbols(), &mut out);
        Configuration::new(self.alphabet, out)
    }

    /// Evaluates on the largest window where every `s m` is known.
    ///
    /// With an empty memory the automaton is constant and the output window
    /// is the input window.
    pub fn apply_windowed(&self, x: &WindowConfiguration) -> Result<WindowConfiguration> {
        if x.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet,
                found: x.alphabet(),
            });
        }
        if *x.monoid() != self.monoid {
            return Err(Error::MonoidMismatch("window over a different monoid".into()));
        }
        let input: Vec<Element> = x.window().cloned().collect();
        let plan = WindowPlan::new(self, &input)?;
        let symbols: Vec<u32> = x.values().values().copied().collect();
        let out = plan.apply(&self.rule, self.alphabet, &symbols);
        WindowConfiguration::new(self.monoid.clone(), self.alphabet, plan.output.into_iter().zip(out))
    }

    fn check_compatible(&self, other: &CellularAutomaton) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet,
                found: other.alphabet,
            });
        }
        if self.monoid != other.monoid {
            return Err(Error::MonoidMismatch("automata over different monoids".into()));
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first. Memory is the product set
    /// `S_other S_self`.
    pub fn compose(&self, other: &CellularAutomaton) -> Result<CellularAutomaton> {
        self.check_compatible(other)?;
        let (s1, s2) = (&self.memory, &other.memory);
        let mut product = BTreeSet::new();
        let mut pos_of = Vec::with_capacity(s1.len());
        for a in s1 {
            let mut row = Vec::with_capacity(s2.len());
            for b in s2 {
                let ba = self.monoid.multiply(b, a)?;
                product.insert(ba.clone());
                row.push(ba);
            }
            pos_of.push(row);
        }
        let memory: Vec<Element> = product.into_iter().collect();
        let index: BTreeMap<&Element, usize> =
            memory.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let pos: Vec<Vec<usize>> = pos_of
            .iter()
            .map(|row| row.iter().map(|e| index[e]).collect())
            .collect();
        let k = self.alphabet;
        let mut inner = vec![0u32; s2.len()];
        let mut outer = vec![0u32; s1.len()];
        CellularAutomaton::from_fn(self.monoid.clone(), k, memory.clone(), |y| {
            for (i, row) in pos.iter().enumerate() {
                for (j, &p) in row.iter().enumerate() {
                    inner[j] = y[p];
                }
                outer[i] = other.local(&inner);
            }
            self.local(&outer)
        })
    }

    /// Memory coordinates on which the local rule actually depends.
    pub fn essential_coordinates(&self) -> Vec<usize> {
        let r = self.memory.len();
        let k = self.alphabet as usize;
        let mut weight = 1usize;
        let mut weights = vec![0; r];
        for i in (0..r).rev() {
            weights[i] = weight;
            weight *= k;
        }
        (0..r)
            .filter(|&i| {
                let w = weights[i];
                (0..self.rule.len()).any(|code| {
                    let digit = (code / w) % k;
                    digit == 0 && (1..k).any(|d| self.rule[code + d * w] != self.rule[code])
                })
            })
            .collect()
    }

    /// The same automaton on its unique minimal memory set.
    pub fn minimal_memory(&self) -> Result<CellularAutomaton> {
        let keep = self.essential_coordinates();
        let memory: Vec<Element> = keep.iter().map(|&i| self.memory[i].clone()).collect();
        let r = self.memory.len();
        let mut full = vec![0u32; r];
        CellularAutomaton::from_fn(self.monoid.clone(), self.alphabet, memory, |y| {
            for (j, &i) in keep.iter().enumerate() {
                full[i] = y[j];
            }
            self.local(&full)
        })
    }

    /// Re-expresses the automaton on a larger memory set.
    pub fn with_memory(&self, superset: Vec<Element>) -> Result<CellularAutomaton> {
        let positions: Vec<usize> = self
            .memory
            .iter()
            .map(|s| {
                superset
                    .iter()
                    .position(|e| e == s)
                    .ok_or_else(|| Error::InvalidArgument("not a superset of the memory".into()))
            })
            .collect::<Result<_>>()?;
        let mut tuple = vec![0u32; self.memory.len()];
        CellularAutomaton::from_fn(self.monoid.clone(), self.alphabet, superset, |y| {
            for (i, &p) in positions.iter().enumerate() {
                tuple[i] = y[p];
            }
            self.local(&tuple)
        })
    }

    /// Pointwise equality on every configuration of a finite monoid.
    pub fn pointwise_eq(&self, other: &CellularAutomaton, cap: u64) -> Result<bool> {
        self.check_compatible(other)?;
        let n = self.monoid.finite()?.size();
        let total = config_count(n, self.alphabet, cap)?;
        let (t1, t2) = (self.neighbor_table()?, other.neighbor_table()?);
        let mut a = vec![0; n];
        let mut b = vec![0; n];
        for code in 0..total {
            let x = Configuration::from_code(code, n, self.alphabet);
            t1.apply(&self.rule, self.alphabet, x.symbols(), &mut a);
            t2.apply(&other.rule, other.alphabet, x.symbols(), &mut b);
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "ca v1\nalphabet {}\nmemory{}\nrule\n",
            self.alphabet,
            self.memory
                .iter()
                .map(|e| format!(" {}", self.monoid.format_element(e)))
                .collect::<String>()
        );
        let r = self.memory.len();
        for (code, sym) in self.rule.iter().enumerate() {
            let tuple = decode_tuple(code, self.alphabet, r);
            if r == 0 {
                out.push_str(&format!("-> {sym}\n"));
            } else {
                out.push_str(&format!("{} -> {sym}\n", join(&tuple)));
            }
        }
        out
    }

    pub fn from_text(monoid: MonoidHandle, text: &str) -> Result<Self> {
        let mut r = LineReader::new(text);
        r.expect("ca v1")?;
        let (no, rest) = r.keyed("alphabet")?;
        let alphabet: u32 = parse_num(no, rest)?;
        if alphabet == 0 {
            return Err(Error::parse(no, "alphabet must be non-empty"));
        }
        let (no, rest) = r.keyed("memory")?;
        let memory = rest
            .split_whitespace()
            .map(|t| monoid.parse_element(t).map_err(|e| Error::parse(no, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if !memory.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::parse(no, "memory must be sorted without duplicates"));
        }
        r.expect("rule")?;
        let len = table_len(alphabet, memory.len())?;
        let mut rule: Vec<Option<u32>> = vec![None; len];
        for _ in 0..len {
            let (no, line) = r.next_line()?;
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(no, "expected `tuple -> symbol`"))?;
            let tuple: Vec<u32> = parse_nums(no, lhs)?;
            let sym: u32 = parse_num(no, rhs.trim())?;
            if tuple.len() != memory.len() || tuple.iter().any(|&s| s >= alphabet) {
                return Err(Error::parse(no, "malformed tuple"));
            }
            if sym >= alphabet {
                return Err(Error::parse(no, format!("symbol {sym} outside alphabet")));
            }
            let slot = &mut rule[encode_tuple(&tuple, alphabet)];
            if slot.replace(sym).is_some() {
                return Err(Error::parse(no, "duplicated tuple"));
            }
        }
        r.finish()?;
        let rule: Vec<u32> = rule
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::parse(0, "incomplete rule table"))?;
        CellularAutomaton::new(monoid, alphabet, memory, rule)
    }
}

/// A submonoid `N ⊆ M` together with the identification of `N` as a monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubmonoidContext {
    /// `members` sorted; element `i` of `sub` is `members[i]`.
    Finite {
        ambient: Arc<FiniteMonoid>,
        members: Vec<usize>,
        sub: Arc<FiniteMonoid>,
    },
    /// `<p>` inside the bicyclic monoid, identified with `(N, +)` via `p^n ↦ n`.
    BicyclicP,
}

impl SubmonoidContext {
    pub fn finite(ambient: Arc<FiniteMonoid>, members: &[usize]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let sub = Arc::new(ambient.submonoid(&members)?);
        Ok(SubmonoidContext::Finite {
            ambient,
            members,
            sub,
        })
    }

    pub fn generated(ambient: Arc<FiniteMonoid>, generators: &[usize]) -> Result<Self> {
        let members = ambient.submonoid_closure(generators)?;
        SubmonoidContext::finite(ambient, &members)
    }

    pub fn ambient(&self) -> MonoidHandle {
        match self {
            SubmonoidContext::Finite { ambient, .. } => MonoidHandle::Finite(ambient.clone()),
            SubmonoidContext::BicyclicP => MonoidHandle::Bicyclic,
        }
    }

    pub fn sub(&self) -> MonoidHandle {
        match self {
            SubmonoidContext::Finite { sub, .. } => MonoidHandle::Finite(sub.clone()),
            SubmonoidContext::BicyclicP => MonoidHandle::NatAdd,
        }
    }

    pub fn to_ambient(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (SubmonoidContext::Finite { members, .. }, Element::Index(i)) => members
                .get(*i)
                .map(|&m| Element::Index(m))
                .ok_or(Error::ElementOutOfRange {
                    element: *i,
                    size: members.len(),
                }),
            (SubmonoidContext::BicyclicP, Element::Nat(n)) => {
                Ok(Element::Bicyclic(BicyclicElement::new(0, *n)))
            }
            _ => Err(Error::ForeignElement(format!("{x:?}"))),
        }
    }

    /// `None` when `x` lies outside `N`.
    pub fn from_ambient(&self, x: &Element) -> Option<Element> {
        match (self, x) {
            (SubmonoidContext::Finite { members, .. }, Element::Index(i)) => {
                members.binary_search(i).ok().map(Element::Index)
            }
            (SubmonoidContext::BicyclicP, Element::Bicyclic(b)) if b.a == 0 => {
                Some(Element::Nat(b.b))
            }
            _ => None,
        }
    }
}

/// `τ_N`: requires the minimal memory of `τ` to lie in `N`.
pub fn restrict(tau: &CellularAutomaton, ctx: &SubmonoidContext) -> Result<CellularAutomaton> {
    if *tau.monoid() != ctx.ambient() {
        return Err(Error::MonoidMismatch("automaton is not over the ambient monoid".into()));
    }
    let source = if tau.memory.iter().all(|s| ctx.from_ambient(s).is_some()) {
        tau.clone()
    } else {
        tau.minimal_memory()?
    };
    let memory = source
        .memory
        .iter()
        .map(|s| ctx.from_ambient(s).ok_or(Error::MemoryNotContained))
        .collect::<Result<Vec<_>>>()?;
    CellularAutomaton::from_fn(ctx.sub(), tau.alphabet, memory, |y| source.local(y))
}

/// `σ^M`: same memory and rule, read in the ambient monoid.
pub fn induce(sigma: &CellularAutomaton, ctx: &SubmonoidContext) -> Result<CellularAutomaton> {
    if *sigma.monoid() != ctx.sub() {
        return Err(Error::MonoidMismatch("automaton is not over the submonoid".into()));
    }
    let memory = sigma
        .memory
        .iter()
        .map(|s| ctx.to_ambient(s))
        .collect::<Result<Vec<_>>>()?;
    CellularAutomaton::from_fn(ctx.ambient(), sigma.alphabet, memory, |y| sigma.local(y))
}

fn check_over(tau: &CellularAutomaton, gamma: &Congruence) -> Result<()> {
    match tau.monoid() {
        MonoidHandle::Finite(m) if **m == **gamma.monoid() => Ok(()),
        _ => Err(Error::MonoidMismatch("congruence is over a different monoid".into())),
    }
}

/// The automaton induced on `M/γ`: memory `π(S)`, rule `μ ∘ π'`.
pub fn quotient_ca(tau: &CellularAutomaton, gamma: &Congruence) -> Result<CellularAutomaton> {
    check_over(tau, gamma)?;
    let (quotient, proj) = gamma.quotient();
    let classes: Vec<usize> = tau.memory_indices()?.iter().map(|&s| proj[s]).collect();
    let image: Vec<usize> = classes.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pos: Vec<usize> = classes
        .iter()
        .map(|c| image.binary_search(c).expect("in image"))
        .collect();
    let mut tuple = vec![0u32; classes.len()];
    CellularAutomaton::from_fn(
        quotient.into(),
        tau.alphabet,
        image.iter().map(|&c| Element::Index(c)).collect(),
        |z| {
            for (i, &p) in pos.iter().enumerate() {
                tuple[i] = z[p];
            }
            tau.local(&tuple)
        },
    )
}

/// A preimage of `σ` under the quotient map, using the smallest element of
/// each memory class as transversal.
pub fn lift_ca(sigma: &CellularAutomaton, gamma: &Congruence) -> Result<CellularAutomaton> {
    let (quotient, _) = gamma.quotient();
    match sigma.monoid() {
        MonoidHandle::Finite(q) if **q == quotient => {}
        _ => return Err(Error::MonoidMismatch("automaton is not over M/γ".into())),
    }
    let classes = gamma.classes();
    let memory: Vec<Element> = sigma
        .memory_indices()?
        .iter()
        .map(|&c| Element::Index(classes[c][0]))
        .collect();
    CellularAutomaton::from_fn(
        MonoidHandle::Finite(gamma.monoid().clone()),
        sigma.alphabet,
        memory,
        |y| sigma.local(y),
    )
}

/// For injective `τ` over a finite monoid, `σ` with memory `M` and
/// `σ ∘ τ = Id`. Patterns outside the image of `τ` map to symbol 0.
pub fn left_inverse_ca(tau: &CellularAutomaton, cap: u64) -> Result<CellularAutomaton> {
    let m = tau.monoid.finite()?;
    let n = m.size();
    let k = tau.alphabet;
    let total = config_count(n, k, cap.min(MAX_RULE_TABLE))?;
    let table = tau.neighbor_table()?;
    let mut rule: Vec<Option<u32>> = vec![None; total as usize];
    let mut image = vec![0u32; n];
    for code in 0..total {
        let x = Configuration::from_code(code, n, k);
        table.apply(&tau.rule, k, x.symbols(), &mut image);
        // Memory is (0, 1, ..., n-1) so the tuple is the image itself.
        let slot = &mut rule[encode_tuple(&image, k)];
        if slot.is_some() {
            return Err(Error::NotInjective);
        }
        *slot = Some(x.get(m.identity()));
    }
    let memory = (0..n).map(Element::Index).collect();
    CellularAutomaton::new(
        tau.monoid.clone(),
        k,
        memory,
        rule.into_iter().map(|s| s.unwrap_or(0)).collect(),
    )
}

/// Every configuration's image, as packed codes indexed by input code.
pub fn image_codes(tau: &CellularAutomaton, cap: u64) -> Result<Vec<u64>> {
    let n = tau.monoid.finite()?.size();
    let total = config_count(n, tau.alphabet, cap)?;
    let table = tau.neighbor_table()?;
    let mut out = vec![0u32; n];
    Ok((0..total)
        .map(|code| {
            let x = Configuration::from_code(code, n, tau.alphabet);
            table.apply(&tau.rule, tau.alphabet, x.symbols(), &mut out);
            Configuration::new(tau.alphabet, out.clone())
                .expect("rule symbols in range")
                .code()
        })
        .collect())
}
