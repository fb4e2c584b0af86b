//! Decision procedures and experiment drivers: injectivity and surjectivity
//! over finite monoids, exhaustive surjunctivity sweeps, left inverses as
//! bicyclic witnesses, and window-scale certificates over infinite monoids.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ca::{left_inverse_ca, restrict, CellularAutomaton, NeighborTable, SubmonoidContext, WindowPlan};
use crate::congruence::{enumerate_congruences, Congruence};
use crate::error::{Error, Result};
use crate::monoid::{BicyclicElement, Element, FiniteMonoid, MonoidHandle};
use crate::report::Report;
use crate::shift::{
    config_count, inv_gamma, periodic_points, union_of_inv, window_hb_agree, ConfigSet, Configuration,
    WindowConfiguration, DEFAULT_CONFIG_CAP,
};
use crate::text::join;

/// Default cap on the number of rule tables in an exhaustive sweep.
pub const DEFAULT_RULE_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CAStatus {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
    /// Two distinct configurations with the same image, smallest codes first.
    pub collision: Option<(Configuration, Configuration)>,
    /// The smallest configuration outside the image.
    pub garden_of_eden: Option<Configuration>,
}

/// Image scan of one rule; reuses its buffers across rules.
struct Scanner {
    k: u32,
    total: u64,
    seen: Vec<u64>,
    input: Vec<u32>,
    output: Vec<u32>,
}

struct RawStatus {
    injective: bool,
    image_size: u64,
    collision_image: Option<u64>,
}

impl Scanner {
    fn new(n: usize, k: u32, total: u64) -> Self {
        Scanner {
            k,
            total,
            seen: vec![0; total.div_ceil(64) as usize],
            input: vec![0; n],
            output: vec![0; n],
        }
    }

    fn image_code(&self) -> u64 {
        let k = self.k as u64;
        self.output.iter().rev().fold(0u64, |acc, &s| acc * k + s as u64)
    }

    fn step_input(&mut self) {
        for s in self.input.iter_mut() {
            *s += 1;
            if *s < self.k {
                return;
            }
            *s = 0;
        }
    }

    fn scan(&mut self, table: &NeighborTable, rule: &[u32]) -> RawStatus {
        self.seen.iter_mut().for_each(|w| *w = 0);
        self.input.iter_mut().for_each(|s| *s = 0);
        let mut image_size = 0;
        let mut collision_image = None;
        for _ in 0..self.total {
            table.apply(rule, self.k, &self.input, &mut self.output);
            let img = self.image_code();
            let (w, b) = ((img / 64) as usize, img % 64);
            if self.seen[w] >> b & 1 == 1 {
                collision_image.get_or_insert(img);
            } else {
                self.seen[w] |= 1 << b;
                image_size += 1;
            }
            self.step_input();
        }
        RawStatus {
            injective: collision_image.is_none(),
            image_size,
            collision_image,
        }
    }

    fn first_missing(&self) -> Option<u64> {
        (0..self.total).find(|&c| self.seen[(c / 64) as usize] >> (c % 64) & 1 == 0)
    }

    fn preimages(&mut self, table: &NeighborTable, rule: &[u32], image: u64) -> Vec<u64> {
        self.input.iter_mut().for_each(|s| *s = 0);
        let mut out = Vec::new();
        for code in 0..self.total {
            table.apply(rule, self.k, &self.input, &mut self.output);
            if self.image_code() == image {
                out.push(code);
                if out.len() == 2 {
                    break;
                }
            }
            self.step_input();
        }
        out
    }
}

/// Exhaustive injectivity and surjectivity over a finite monoid.
pub fn ca_status(tau: &CellularAutomaton, cap: u64) -> Result<CAStatus> {
    let m = tau.monoid().finite()?;
    let (n, k) = (m.size(), tau.alphabet());
    let total = config_count(n, k, cap)?;
    let table = tau.neighbor_table()?;
    let mut scanner = Scanner::new(n, k, total);
    let raw = scanner.scan(&table, tau.rule());
    let surjective = raw.image_size == total;
    let garden_of_eden = if surjective {
        None
    } else {
        scanner.first_missing().map(|c| Configuration::from_code(c, n, k))
    };
    let collision = raw.collision_image.map(|img| {
        let pre = scanner.preimages(&table, tau.rule(), img);
        (
            Configuration::from_code(pre[0], n, k),
            Configuration::from_code(pre[1], n, k),
        )
    });
    Ok(CAStatus {
        injective: raw.injective,
        surjective,
        bijective: raw.injective && surjective,
        collision,
        garden_of_eden,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub rule_cap: u64,
    pub config_cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// `(seed, samples)`: evaluate seeded random rule tables instead of
    /// enumerating all of them.
    pub sample: Option<(u64, u64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            rule_cap: DEFAULT_RULE_CAP,
            config_cap: DEFAULT_CONFIG_CAP,
            threads: None,
            sample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Rule index in exhaustive mode, sample number in sampled mode.
    pub index: u64,
    pub rule: Vec<u32>,
    pub garden_of_eden: Configuration,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub monoid: String,
    pub monoid_size: usize,
    pub alphabet: u32,
    pub memory: Vec<usize>,
    /// `k^(k^|S|)`, or `None` if it exceeds `u128`.
    pub total_rules: Option<u128>,
    pub mode: SweepMode,
    pub examined: u64,
    pub injective: u64,
    pub surjective: u64,
    pub bijective: u64,
    pub violations: Vec<Violation>,
    pub elapsed: Duration,
    pub threads: usize,
}

impl SweepReport {
    /// Machine serialization; runtime statistics are left out so that equal
    /// sweeps serialize identically.
    pub fn to_report(&self) -> Report {
        let mut r = Report::new("sweep-surjunctive");
        r.push("monoid", &self.monoid)
            .push("monoid_size", self.monoid_size)
            .push("alphabet", self.alphabet)
            .push("memory", join(&self.memory))
            .push(
                "total_rules",
                self.total_rules.map_or_else(|| "overflow".to_string(), |t| t.to_string()),
            );
        match self.mode {
            SweepMode::Exhaustive => {
                r.push("mode", "exhaustive").push("rule_range", format!("0 {}", self.examined));
            }
            SweepMode::Sampled { seed, samples } => {
                r.push("mode", "sampled").push("seed", seed).push("samples", samples);
            }
        }
        r.push("examined", self.examined)
            .push("injective", self.injective)
            .push("surjective", self.surjective)
            .push("bijective", self.bijective)
            .push("violations", self.violations.len());
        for v in &self.violations {
            r.witness(
                format!("violation {} rule {}", v.index, join(&v.rule)),
                v.garden_of_eden.to_text(),
            );
        }
        r
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `k^(k^r)` when it fits in `u128`.
pub fn rule_count(alphabet: u32, radius: usize) -> Option<u128> {
    let entries = (alphabet as u128).checked_pow(u32::try_from(radius).ok()?)?;
    (alphabet as u128).checked_pow(u32::try_from(entries).ok()?)
}

fn rule_from_index(mut index: u64, alphabet: u32, len: usize) -> Vec<u32> {
    let k = alphabet as u64;
    (0..len)
        .map(|_| {
            let d = (index % k) as u32;
            index /= k;
            d
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    examined: u64,
    injective: u64,
    surjective: u64,
    bijective: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.examined += other.examined;
        self.injective += other.injective;
        self.surjective += other.surjective;
        self.bijective += other.bijective;
        self.violations.extend(other.violations);
        self
    }
}

/// Rule index, with the drawn table in sampled mode.
type RuleJob = (u64, Option<Vec<u32>>);

/// Every rule table over `memory` (or a seeded sample) checked for
/// injective-but-not-surjective behaviour.
pub fn surjunctivity_sweep(
    monoid: &FiniteMonoid,
    alphabet: u32,
    memory: &[usize],
    options: &SweepOptions,
) -> Result<SweepReport> {
    let start = Instant::now();
    if alphabet == 0 {
        return Err(Error::InvalidArgument("alphabet must be non-empty".into()));
    }
    let mut memory = memory.to_vec();
    for &s in &memory {
        monoid.check(s)?;
    }
    memory.sort_unstable();
    memory.dedup();
    let n = monoid.size();
    let total_configs = config_count(n, alphabet, options.config_cap)?;
    let table_len = config_count(memory.len(), alphabet, crate::ca::MAX_RULE_TABLE)? as usize;
    let total_rules = rule_count(alphabet, memory.len());
    let (mode, rules): (SweepMode, Vec<RuleJob>) = match options.sample {
        None => {
            let count = match total_rules {
                Some(t) if t <= options.rule_cap as u128 => t as u64,
                _ => {
                    return Err(Error::cap(
                        "rule tables",
                        total_rules.unwrap_or(u128::MAX),
                        options.rule_cap as u128,
                    ))
                }
            };
            (SweepMode::Exhaustive, (0..count).map(|i| (i, None)).collect())
        }
        Some((seed, samples)) => {
            if samples > options.rule_cap {
                return Err(Error::cap("sampled rule tables", samples as u128, options.rule_cap as u128));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rules = (0..samples)
                .map(|i| {
                    let rule = (0..table_len).map(|_| rng.gen_range(0..alphabet)).collect();
                    (i, Some(rule))
                })
                .collect();
            (SweepMode::Sampled { seed, samples }, rules)
        }
    };
    let table = NeighborTable::new(monoid, &memory);
    let run = || {
        rules
            .par_iter()
            .fold(
                || (Scanner::new(n, alphabet, total_configs), Tally::default()),
                |(mut scanner, mut tally), (index, sampled)| {
                    let rule = sampled
                        .clone()
                        .unwrap_or_else(|| rule_from_index(*index, alphabet, table_len));
                    let raw = scanner.scan(&table, &rule);
                    let surjective = raw.image_size == total_configs;
                    tally.examined += 1;
                    tally.injective += raw.injective as u64;
                    tally.surjective += surjective as u64;
                    tally.bijective += (raw.injective && surjective) as u64;
                    if raw.injective && !surjective {
                        let goe = scanner.first_missing().expect("non-surjective");
                        tally.violations.push(Violation {
                            index: *index,
                            rule,
                            garden_of_eden: Configuration::from_code(goe, n, alphabet),
                        });
                    }
                    (scanner, tally)
                },
            )
            .map(|(_, t)| t)
            .reduce(Tally::default, Tally::merge)
    };
    let (mut tally, threads) = match options.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            (pool.install(run), t.max(1))
        }
        None => (run(), rayon::current_num_threads()),
    };
    tally.violations.sort_by_key(|v| v.index);
    Ok(SweepReport {
        monoid: describe(monoid),
        monoid_size: n,
        alphabet,
        memory,
        total_rules,
        mode,
        examined: tally.examined,
        injective: tally.injective,
        surjective: tally.surjective,
        bijective: tally.bijective,
        violations: tally.violations,
        elapsed: start.elapsed(),
        threads,
    })
}

/// Compact one-line description of a finite monoid.
pub fn describe(monoid: &FiniteMonoid) -> String {
    format!(
        "finite size {} identity {} table {}",
        monoid.size(),
        monoid.identity(),
        join(monoid.table())
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSurjectivity {
    /// A configuration outside the image, so `τ(σ(x)) ≠ x`.
    Configuration(Configuration),
    /// Every image takes equal values at `m1` and `m2`; `y` does not and has
    /// no preimage, checked over `candidates` input windows.
    ImageConstraint {
        m1: Element,
        m2: Element,
        y: WindowConfiguration,
        candidates: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicyclicWitness {
    pub tau: CellularAutomaton,
    pub sigma: CellularAutomaton,
    /// Number of (window) configurations on which `σ ∘ τ = Id` was checked.
    pub equality_checked: u64,
    pub inequality: NonSurjectivity,
}

/// `Some` exactly when `τ` is injective and not surjective; over a finite
/// monoid this never happens.
pub fn bicyclic_in_ca_monoid(tau: &CellularAutomaton, cap: u64) -> Result<Option<BicyclicWitness>> {
    let status = ca_status(tau, cap)?;
    if !status.injective || status.surjective {
        return Ok(None);
    }
    let sigma = left_inverse_ca(tau, cap)?;
    let n = tau.monoid().finite()?.size();
    let total = config_count(n, tau.alphabet(), cap)?;
    for code in 0..total {
        let x = Configuration::from_code(code, n, tau.alphabet());
        if sigma.apply(&tau.apply(&x)?)? != x {
            return Err(Error::InvalidAutomaton("left inverse failed to replay".into()));
        }
    }
    let goe = status.garden_of_eden.expect("non-surjective");
    Ok(Some(BicyclicWitness {
        tau: tau.clone(),
        sigma,
        equality_checked: total,
        inequality: NonSurjectivity::Configuration(goe),
    }))
}

fn bc(a: u64, b: u64) -> Element {
    Element::Bicyclic(BicyclicElement::new(a, b))
}

/// `F_d = {q^a p^b : a + b ≤ d}` in canonical order.
pub fn bicyclic_window(depth: u64) -> Vec<Element> {
    let mut w: Vec<Element> = (0..=depth)
        .flat_map(|a| (0..=depth - a).map(move |b| bc(a, b)))
        .collect();
    w.sort();
    w
}

/// Enumerates every assignment of `k` symbols to `len` cells, first cell
/// fastest, and stops early when `f` returns `false`.
fn for_each_assignment(len: usize, k: u32, cap: u64, mut f: impl FnMut(&[u32]) -> bool) -> Result<u64> {
    let total = config_count(len, k, cap)?;
    let mut x = vec![0u32; len];
    for i in 0..total {
        if !f(&x) {
            return Ok(i + 1);
        }
        for s in x.iter_mut() {
            *s += 1;
            if *s < k {
                break;
            }
            *s = 0;
        }
    }
    Ok(total)
}

/// Checks that no configuration is mapped by `τ` onto `y` on the window of
/// `y`, by enumerating every input on `S·window(y)`. Returns the number of
/// candidates examined, or `None` if a preimage exists.
pub fn verify_no_preimage(tau: &CellularAutomaton, y: &WindowConfiguration, cap: u64) -> Result<Option<u64>> {
    if *y.monoid() != *tau.monoid() || y.alphabet() != tau.alphabet() {
        return Err(Error::MonoidMismatch("witness does not match the automaton".into()));
    }
    let mut domain = BTreeSet::new();
    for w in y.window() {
        for s in tau.memory() {
            domain.insert(tau.monoid().multiply(s, w)?);
        }
    }
    let domain: Vec<Element> = domain.into_iter().collect();
    let plan = WindowPlan::new(tau, &domain)?;
    let targets: Vec<(usize, u32)> = y
        .values()
        .iter()
        .map(|(m, &v)| {
            plan.output
                .binary_search(m)
                .map(|p| (p, v))
                .map_err(|_| Error::InvalidArgument("window not covered by the input domain".into()))
        })
        .collect::<Result<_>>()?;
    let mut found = false;
    let checked = for_each_assignment(domain.len(), tau.alphabet(), cap, |x| {
        let out = plan.apply(tau.rule(), tau.alphabet(), x);
        found = targets.iter().all(|&(p, v)| out[p] == v);
        !found
    })?;
    Ok(if found { None } else { Some(checked) })
}

#[derive(Clone, Debug)]
pub struct BicyclicDemo {
    pub alphabet: u32,
    pub depth: u64,
    pub window: Vec<Element>,
    pub tau: CellularAutomaton,
    pub sigma: CellularAutomaton,
    /// `σ ∘ τ` computed symbolically.
    pub composed_is_identity: bool,
    pub checked: u64,
    pub left_inverse_holds: bool,
    /// Window on which `σ(τ(x))` was compared with `x`.
    pub recovered_window: Vec<Element>,
    pub witness: Option<BicyclicWitness>,
}

impl BicyclicDemo {
    pub fn holds(&self) -> bool {
        self.composed_is_identity && self.left_inverse_holds && (self.alphabet < 2 || self.witness.is_some())
    }

    pub fn to_report(&self) -> Report {
        let b = MonoidHandle::Bicyclic;
        let fmt = |w: &[Element]| join(w.iter().map(|e| b.format_element(e)));
        let mut r = Report::new("demo-bicyclic");
        r.push("monoid", "bicyclic")
            .push("alphabet", self.alphabet)
            .push("depth", self.depth)
            .push("window_size", self.window.len())
            .push("tau_memory", fmt(self.tau.memory()))
            .push("sigma_memory", fmt(self.sigma.memory()))
            .push("composed_is_identity", self.composed_is_identity)
            .push("left_inverse_checked", self.checked)
            .push("left_inverse_holds", self.left_inverse_holds)
            .push("recovered_window_size", self.recovered_window.len())
            .push("witness_found", self.witness.is_some());
        if let Some(w) = &self.witness {
            if let NonSurjectivity::ImageConstraint { m1, m2, y, candidates } = &w.inequality {
                r.push("constraint", format!("{} {}", b.format_element(m1), b.format_element(m2)))
                    .push("no_preimage_candidates", candidates)
                    .push("no_preimage", true);
                r.witness("image-constraint", y.to_text());
            }
        }
        r
    }
}

/// Checks `σ_q ∘ τ_p = Id` on every configuration of `F_d`, and exhibits a
/// window configuration with `y(1) ≠ y(qp)` that has no `τ_p`-preimage.
pub fn bicyclic_nonsurjectivity_demo(alphabet: u32, depth: u64, cap: u64) -> Result<BicyclicDemo> {
    if alphabet == 0 || depth == 0 {
        return Err(Error::InvalidArgument("alphabet and depth must be positive".into()));
    }
    let b = MonoidHandle::Bicyclic;
    let tau = CellularAutomaton::shift_by(b.clone(), alphabet, bc(0, 1))?;
    let sigma = CellularAutomaton::shift_by(b.clone(), alphabet, bc(1, 0))?;
    let composed_is_identity = sigma.compose(&tau)? == CellularAutomaton::identity(b.clone(), alphabet)?;
    let window = bicyclic_window(depth);
    let p1 = WindowPlan::new(&tau, &window)?;
    let p2 = WindowPlan::new(&sigma, &p1.output)?;
    let back: Vec<usize> = p2
        .output
        .iter()
        .map(|m| window.binary_search(m))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument("recovered cell outside the window".into()))?;
    let mut holds = true;
    let checked = for_each_assignment(window.len(), alphabet, cap, |x| {
        let y = p1.apply(tau.rule(), alphabet, x);
        let z = p2.apply(sigma.rule(), alphabet, &y);
        holds = back.iter().zip(&z).all(|(&i, &v)| x[i] == v);
        holds
    })?;
    let witness = if alphabet >= 2 {
        let (one, qp) = (bc(0, 0), bc(1, 1));
        let mut values: Vec<(Element, u32)> = window.iter().map(|m| (m.clone(), 0)).collect();
        match values.iter_mut().find(|(m, _)| *m == qp) {
            Some(slot) => slot.1 = 1,
            None => values.push((qp.clone(), 1)),
        }
        let y = WindowConfiguration::new(b, alphabet, values)?;
        let candidates = verify_no_preimage(&tau, &y, cap)?
            .ok_or_else(|| Error::InvalidAutomaton("image constraint witness has a preimage".into()))?;
        Some(BicyclicWitness {
            tau: tau.clone(),
            sigma: sigma.clone(),
            equality_checked: checked,
            inequality: NonSurjectivity::ImageConstraint {
                m1: one,
                m2: qp,
                y,
                candidates,
            },
        })
    } else {
        None
    };
    Ok(BicyclicDemo {
        alphabet,
        depth,
        window,
        tau,
        sigma,
        composed_is_identity,
        checked,
        left_inverse_holds: holds,
        recovered_window: p2.output,
        witness,
    })
}

/// The bicyclic shift `τ_p` and its restriction to `<p> ≅ (N, +)` checked
/// at window depth `d`.
#[derive(Clone, Debug)]
pub struct RestrictionCounterexample {
    pub alphabet: u32,
    pub depth: u64,
    pub tau: CellularAutomaton,
    pub restricted: CellularAutomaton,
    /// `τ` injective: left inverse replayed on `F_d`.
    pub tau_injective: bool,
    /// `τ_N` surjective: every `y` on `{0..d}` has an explicit preimage.
    pub restricted_surjective: bool,
    pub surjectivity_checked: u64,
    /// `τ_N` not injective: two inputs differing only at 0 with equal images.
    pub restricted_collision: Option<(WindowConfiguration, WindowConfiguration)>,
    /// `τ` not surjective.
    pub tau_witness: Option<WindowConfiguration>,
}

impl RestrictionCounterexample {
    pub fn holds(&self) -> bool {
        self.tau_injective
            && self.restricted_surjective
            && self.restricted_collision.is_some()
            && self.tau_witness.is_some()
    }
}

pub fn restriction_counterexample(alphabet: u32, depth: u64, cap: u64) -> Result<RestrictionCounterexample> {
    let demo = bicyclic_nonsurjectivity_demo(alphabet, depth, cap)?;
    let ctx = SubmonoidContext::BicyclicP;
    let restricted = restrict(&demo.tau, &ctx)?;
    let nat = ctx.sub();
    let k = alphabet;
    let big: Vec<Element> = (0..=depth + 1).map(Element::Nat).collect();
    let plan = WindowPlan::new(&restricted, &big)?;
    let mut surjective = true;
    let checked = for_each_assignment(depth as usize + 1, k, cap, |y| {
        let mut z = vec![0u32; big.len()];
        z[1..].copy_from_slice(y);
        let out = plan.apply(restricted.rule(), k, &z);
        surjective = out.len() > depth as usize && out[..y.len()] == *y;
        surjective
    })?;
    let collision = if k >= 2 {
        let small: Vec<(Element, u32)> = (0..=depth).map(|n| (Element::Nat(n), 0)).collect();
        let z1 = WindowConfiguration::new(nat.clone(), k, small.clone())?;
        let mut flipped = small;
        flipped[0].1 = 1;
        let z2 = WindowConfiguration::new(nat, k, flipped)?;
        let equal = restricted.apply_windowed(&z1)? == restricted.apply_windowed(&z2)?;
        equal.then_some((z1, z2))
    } else {
        None
    };
    let tau_witness = demo.witness.as_ref().and_then(|w| match &w.inequality {
        NonSurjectivity::ImageConstraint { y, .. } => Some(y.clone()),
        NonSurjectivity::Configuration(_) => None,
    });
    Ok(RestrictionCounterexample {
        alphabet,
        depth,
        tau: demo.tau.clone(),
        restricted,
        tau_injective: demo.composed_is_identity && demo.left_inverse_holds,
        restricted_surjective: surjective,
        surjectivity_checked: checked,
        restricted_collision: collision,
        tau_witness,
    })
}

/// Which rules the residual pipeline runs over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleFamily {
    /// Every rule with a one-element memory `{s}`, for every `s`.
    SingleCoordinate,
    /// Every rule on the given memory.
    Memory(Vec<usize>),
    /// Seeded random rules on the given memory.
    Sampled { memory: Vec<usize>, seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualPipeline {
    pub alphabet: u32,
    pub congruences: usize,
    pub per_size: usize,
    pub per_equals_union: bool,
    pub rules: u64,
    pub injective_rules: u64,
    /// `τ(Inv(γ)) ⊆ Inv(γ)` checks and their failures.
    pub inclusion_checks: u64,
    pub inclusion_failures: u64,
    /// `τ(Inv(γ)) = Inv(γ)` checks for injective `τ` and their failures.
    pub equality_checks: u64,
    pub equality_failures: u64,
    /// `(τ, γ)` pairs with non-injective `τ` that still map onto `Inv(γ)`.
    pub noninjective_onto: u64,
    /// Injective rules checked for `τ(Per) = Per`.
    pub per_preserved: bool,
}

impl ResidualPipeline {
    pub fn holds(&self) -> bool {
        self.per_equals_union && self.inclusion_failures == 0 && self.equality_failures == 0 && self.per_preserved
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("demo-residual");
        r.push("alphabet", self.alphabet)
            .push("congruences", self.congruences)
            .push("per_size", self.per_size)
            .push("per_equals_union_inv", self.per_equals_union)
            .push("rules", self.rules)
            .push("injective_rules", self.injective_rules)
            .push("inclusion_checks", self.inclusion_checks)
            .push("inclusion_failures", self.inclusion_failures)
            .push("equality_checks", self.equality_checks)
            .push("equality_failures", self.equality_failures)
            .push("noninjective_onto", self.noninjective_onto)
            .push("per_preserved", self.per_preserved);
        r
    }
}

fn family_rules(
    n: usize,
    k: u32,
    family: &RuleFamily,
    rule_cap: u64,
) -> Result<Vec<(Vec<usize>, Vec<u32>)>> {
    let exhaustive = |memory: &[usize]| -> Result<Vec<(Vec<usize>, Vec<u32>)>> {
        let len = config_count(memory.len(), k, crate::ca::MAX_RULE_TABLE)? as usize;
        let count = rule_count(k, memory.len())
            .filter(|&t| t <= rule_cap as u128)
            .ok_or_else(|| {
                Error::cap(
                    "rule tables",
                    rule_count(k, memory.len()).unwrap_or(u128::MAX),
                    rule_cap as u128,
                )
            })? as u64;
        Ok((0..count).map(|i| (memory.to_vec(), rule_from_index(i, k, len))).collect())
    };
    let canonical = |memory: &[usize]| -> Result<Vec<usize>> {
        let mut m = memory.to_vec();
        m.sort_unstable();
        m.dedup();
        match m.iter().find(|&&s| s >= n) {
            Some(&s) => Err(Error::ElementOutOfRange { element: s, size: n }),
            None => Ok(m),
        }
    };
    match family {
        RuleFamily::SingleCoordinate => {
            let mut out = Vec::new();
            for s in 0..n {
                out.extend(exhaustive(&[s])?);
            }
            Ok(out)
        }
        RuleFamily::Memory(memory) => exhaustive(&canonical(memory)?),
        RuleFamily::Sampled { memory, seed, samples } => {
            let memory = canonical(memory)?;
            if *samples > rule_cap {
                return Err(Error::cap("sampled rule tables", *samples as u128, rule_cap as u128));
            }
            let len = config_count(memory.len(), k, crate::ca::MAX_RULE_TABLE)? as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*samples)
                .map(|_| (memory.clone(), (0..len).map(|_| rng.gen_range(0..k)).collect()))
                .collect())
        }
    }
}

/// Checks `Per = ∪ Inv(γ)`, `τ(Inv(γ)) ⊆ Inv(γ)` for every rule in the
/// family, and `τ(Inv(γ)) = Inv(γ)` (hence `τ(Per) = Per`) for injective ones.
pub fn residual_surjunctivity_pipeline(
    monoid: &Arc<FiniteMonoid>,
    alphabet: u32,
    family: &RuleFamily,
    rule_cap: u64,
    config_cap: u64,
) -> Result<ResidualPipeline> {
    let n = monoid.size();
    let congs = enumerate_congruences(monoid, crate::congruence::DEFAULT_ENUMERATION_CAP)?;
    let invs: Vec<ConfigSet> = congs
        .iter()
        .map(|g| inv_gamma(g, alphabet, config_cap))
        .collect::<Result<_>>()?;
    let per = periodic_points(monoid, alphabet, config_cap)?;
    let per_equals_union = union_of_inv(&congs, alphabet, config_cap)? == per;
    let rules = family_rules(n, alphabet, family, rule_cap)?;
    let handle = MonoidHandle::Finite(monoid.clone());
    let mut out = ResidualPipeline {
        alphabet,
        congruences: congs.len(),
        per_size: per.len(),
        per_equals_union,
        rules: rules.len() as u64,
        injective_rules: 0,
        inclusion_checks: 0,
        inclusion_failures: 0,
        equality_checks: 0,
        equality_failures: 0,
        noninjective_onto: 0,
        per_preserved: true,
    };
    for (memory, rule) in rules {
        let tau = CellularAutomaton::new(
            handle.clone(),
            alphabet,
            memory.into_iter().map(Element::Index).collect(),
            rule,
        )?;
        let images = crate::ca::image_codes(&tau, config_cap)?;
        let injective = images.iter().collect::<BTreeSet<_>>().len() == images.len();
        out.injective_rules += injective as u64;
        for inv in &invs {
            let image = ConfigSet::from_codes(n, alphabet, inv.codes().iter().map(|&c| images[c as usize]).collect());
            out.inclusion_checks += 1;
            if !image.is_subset(inv) {
                out.inclusion_failures += 1;
            }
            let onto = image == *inv;
            if injective {
                out.equality_checks += 1;
                if !onto {
                    out.equality_failures += 1;
                }
            } else if onto {
                out.noninjective_onto += 1;
            }
        }
        if injective {
            let image = ConfigSet::from_codes(n, alphabet, per.codes().iter().map(|&c| images[c as usize]).collect());
            out.per_preserved &= image == per;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePairRow {
    pub first: usize,
    pub second: usize,
    /// Pairs `(a, b)`, `a < b`, on which the two congruences agree.
    pub agreeing_pairs: usize,
    /// Greedy element window `E` (index order) with `γ₁ ∩ E² = γ₂ ∩ E²`.
    pub greedy_window: Vec<usize>,
    pub inv_agree_on_greedy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLimitReport {
    pub alphabet: u32,
    pub congruences: Vec<Congruence>,
    pub psi_injective: bool,
    /// Distinct congruences with equal `Inv` sets.
    pub psi_collisions: Vec<(usize, usize)>,
    pub rows: Vec<CongruencePairRow>,
    pub windows_checked: u64,
    /// `(γ₁, γ₂, E)` where congruence agreement on `E²` and window agreement
    /// of the `Inv` sets on `E` differ.
    pub correlation_failures: Vec<(usize, usize, Vec<usize>)>,
}

impl MarkedLimitReport {
    /// The correlation and injectivity need at least two symbols.
    pub fn hypothesis_met(&self) -> bool {
        self.alphabet >= 2
    }

    pub fn holds(&self) -> bool {
        self.psi_injective && self.correlation_failures.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("demo-marked-limit");
        r.push("alphabet", self.alphabet)
            .push("congruences", self.congruences.len())
            .push("psi_injective", self.psi_injective)
            .push("psi_collisions", self.psi_collisions.len())
            .push("alphabet_hypothesis", if self.hypothesis_met() { "met" } else { "violated" })
            .push("pairs", self.rows.len())
            .push("windows_checked", self.windows_checked)
            .push("correlation_failures", self.correlation_failures.len());
        for row in &self.rows {
            r.push(
                "pair",
                format!(
                    "{} {} agreeing_pairs {} window [{}] inv_agree {}",
                    row.first,
                    row.second,
                    row.agreeing_pairs,
                    join(&row.greedy_window),
                    row.inv_agree_on_greedy
                ),
            );
        }
        r
    }
}

fn agree_on_square(g1: &Congruence, g2: &Congruence, window: &[usize]) -> bool {
    window
        .iter()
        .all(|&a| window.iter().all(|&b| g1.related(a, b) == g2.related(a, b)))
}

/// Tabulates agreement of congruences on pair windows against
/// window agreement of their `Inv` sets, over every congruence pair and
/// every element window.
pub fn marked_limit_demo(monoid: &Arc<FiniteMonoid>, alphabet: u32, config_cap: u64) -> Result<MarkedLimitReport> {
    let n = monoid.size();
    let congs = enumerate_congruences(monoid, crate::congruence::DEFAULT_ENUMERATION_CAP)?;
    let invs: Vec<ConfigSet> = congs
        .iter()
        .map(|g| inv_gamma(g, alphabet, config_cap))
        .collect::<Result<_>>()?;
    let mut psi_collisions = Vec::new();
    let mut rows = Vec::new();
    let mut correlation_failures = Vec::new();
    let mut windows_checked = 0;
    let subsets: Vec<Vec<usize>> = (0..1u64 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    for i in 0..congs.len() {
        for j in i..congs.len() {
            let (g1, g2) = (&congs[i], &congs[j]);
            if i != j && invs[i] == invs[j] {
                psi_collisions.push((i, j));
            }
            let agreeing_pairs = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| g1.related(a, b) == g2.related(a, b))
                .count();
            let mut greedy = Vec::new();
            for m in 0..n {
                greedy.push(m);
                if !agree_on_square(g1, g2, &greedy) {
                    greedy.pop();
                }
            }
            let inv_agree_on_greedy = window_hb_agree(&invs[i], &invs[j], &greedy)?;
            for e in &subsets {
                windows_checked += 1;
                if agree_on_square(g1, g2, e) != window_hb_agree(&invs[i], &invs[j], e)? {
                    correlation_failures.push((i, j, e.clone()));
                }
            }
            rows.push(CongruencePairRow {
                first: i,
                second: j,
                agreeing_pairs,
                greedy_window: greedy,
                inv_agree_on_greedy,
            });
        }
    }
    Ok(MarkedLimitReport {
        alphabet,
        psi_injective: psi_collisions.is_empty(),
        congruences: congs,
        psi_collisions,
        rows,
        windows_checked,
        correlation_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::cyclic(n).unwrap())
    }

    fn h(m: &Arc<FiniteMonoid>) -> MonoidHandle {
        MonoidHandle::Finite(m.clone())
    }

    #[test]
    fn status_examples() {
        let m = z(3);
        let id = CellularAutomaton::identity(h(&m), 2).unwrap();
        let s = ca_status(&id, DEFAULT_CONFIG_CAP).unwrap();
        assert!(s.injective && s.surjective && s.bijective);
        assert!(s.collision.is_none() && s.garden_of_eden.is_none());

        let c = CellularAutomaton::constant(h(&m), 2, 0).unwrap();
        let s = ca_status(&c, DEFAULT_CONFIG_CAP).unwrap();
        assert!(!s.injective && !s.surjective && !s.bijective);
        let (a, b) = s.collision.unwrap();
        assert_ne!(a, b);
        assert_eq!(c.apply(&a).unwrap(), c.apply(&b).unwrap());
        // Smallest configuration not equal to 000.
        assert_eq!(s.garden_of_eden.unwrap().symbols(), &[1, 0, 0]);

        let sh = CellularAutomaton::shift_by(h(&m), 2, Element::Index(1)).unwrap();
        assert!(ca_status(&sh, DEFAULT_CONFIG_CAP).unwrap().bijective);
        assert!(ca_status(&sh, 4).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn sweep_examples() {
        let opts = SweepOptions::default();
        for (m, total) in [
            (FiniteMonoid::cyclic(2).unwrap(), 16u128),
            (FiniteMonoid::two_element_semilattice(), 16),
            (FiniteMonoid::cyclic(3).unwrap(), 256),
        ] {
            let all: Vec<usize> = (0..m.size()).collect();
            let r = surjunctivity_sweep(&m, 2, &all, &opts).unwrap();
            assert_eq!(r.total_rules, Some(total));
            assert_eq!(r.examined as u128, total);
            assert!(r.violations.is_empty());
            assert!(r.injective <= r.surjective);
            assert_eq!(r.injective, r.bijective);
        }
    }

    #[test]
    fn sweep_counts_z2() {
        // Over Z2 with S = M, k = 2 the bijective rules: identity, shift, and
        // their complements.
        let m = FiniteMonoid::cyclic(2).unwrap();
        let r = surjunctivity_sweep(&m, 2, &[0, 1], &SweepOptions::default()).unwrap();
        assert_eq!(r.bijective, 4);
    }

    #[test]
    fn sweep_is_thread_independent() {
        let m = FiniteMonoid::cyclic(3).unwrap();
        let base = SweepOptions::default();
        let one = surjunctivity_sweep(&m, 2, &[0, 1, 2], &SweepOptions { threads: Some(1), ..base.clone() })
            .unwrap()
            .to_report()
            .to_text();
        let four = surjunctivity_sweep(&m, 2, &[0, 1, 2], &SweepOptions { threads: Some(4), ..base })
            .unwrap()
            .to_report()
            .to_text();
        assert_eq!(one, four);
    }

    #[test]
    fn sweep_caps_and_sampling() {
        let m = FiniteMonoid::cyclic(3).unwrap();
        let tight = SweepOptions {
            rule_cap: 100,
            ..SweepOptions::default()
        };
        assert!(surjunctivity_sweep(&m, 2, &[0, 1, 2], &tight).unwrap_err().is_cap_exceeded());
        let sampled = SweepOptions {
            sample: Some((7, 50)),
            ..tight
        };
        let a = surjunctivity_sweep(&m, 2, &[0, 1, 2], &sampled).unwrap();
        let b = surjunctivity_sweep(&m, 2, &[0, 1, 2], &sampled).unwrap();
        assert_eq!(a.examined, 50);
        assert_eq!(a.to_report(), b.to_report());
        assert_eq!(a.to_report().get("seed"), Some("7"));
    }

    #[test]
    fn no_bicyclic_witness_over_finite_monoids() {
        let m = z(3);
        for idx in 0..256u64 {
            let rule = rule_from_index(idx, 2, 8);
            let t = CellularAutomaton::new(h(&m), 2, (0..3).map(Element::Index).collect(), rule).unwrap();
            assert!(bicyclic_in_ca_monoid(&t, DEFAULT_CONFIG_CAP).unwrap().is_none());
        }
    }

    #[test]
    fn bicyclic_demo_examples() {
        let d1 = bicyclic_nonsurjectivity_demo(2, 1, DEFAULT_CONFIG_CAP).unwrap();
        assert!(d1.holds());
        let w = d1.witness.as_ref().unwrap();
        let NonSurjectivity::ImageConstraint { y, .. } = &w.inequality else {
            panic!("expected an image constraint");
        };
        assert_eq!(y.get(&bc(0, 0)), Some(0));
        assert_eq!(y.get(&bc(1, 1)), Some(1));
        assert!(verify_no_preimage(&d1.tau, y, DEFAULT_CONFIG_CAP).unwrap().is_some());

        let d2 = bicyclic_nonsurjectivity_demo(2, 2, DEFAULT_CONFIG_CAP).unwrap();
        assert_eq!(d2.window.len(), 6);
        assert_eq!(d2.checked, 64);
        assert!(d2.left_inverse_holds);

        let d = bicyclic_nonsurjectivity_demo(1, 2, DEFAULT_CONFIG_CAP).unwrap();
        assert!(d.witness.is_none());
        assert!(d.holds());
    }

    #[test]
    fn preimage_found_when_constraint_respected() {
        let tau = CellularAutomaton::shift_by(MonoidHandle::Bicyclic, 2, bc(0, 1)).unwrap();
        let y = WindowConfiguration::new(MonoidHandle::Bicyclic, 2, [(bc(0, 0), 1), (bc(1, 1), 1)]).unwrap();
        assert_eq!(verify_no_preimage(&tau, &y, DEFAULT_CONFIG_CAP).unwrap(), None);
    }

    #[test]
    fn restriction_counterexample_holds() {
        for d in 1..=3 {
            let r = restriction_counterexample(2, d, DEFAULT_CONFIG_CAP).unwrap();
            assert!(r.holds(), "depth {d}");
            assert_eq!(r.surjectivity_checked, 1 << (d + 1));
        }
    }

    #[test]
    fn residual_examples() {
        let r = residual_surjunctivity_pipeline(&z(4), 2, &RuleFamily::SingleCoordinate, DEFAULT_RULE_CAP, DEFAULT_CONFIG_CAP)
            .unwrap();
        assert_eq!(r.rules, 16);
        // Per cell: identity or complement, on each of the 4 coordinates.
        assert_eq!(r.injective_rules, 8);
        assert!(r.holds());
        assert_eq!(r.congruences, 3);
    }

    #[test]
    fn marked_limit_examples() {
        let r = marked_limit_demo(&z(4), 2, DEFAULT_CONFIG_CAP).unwrap();
        assert!(r.holds());
        assert_eq!(r.rows.len(), 6);
        let r1 = marked_limit_demo(&z(4), 1, DEFAULT_CONFIG_CAP).unwrap();
        assert!(!r1.psi_injective);
        assert!(!r1.hypothesis_met());
    }

    #[test]
    fn marked_limit_z4_windows() {
        let m = z(4);
        let d = Congruence::diagonal(m.clone());
        let g = Congruence::closure(m.clone(), &[(0, 2)]).unwrap();
        let (a, b) = (inv_gamma(&d, 2, 1 << 10).unwrap(), inv_gamma(&g, 2, 1 << 10).unwrap());
        assert_ne!(a, b);
        assert!(window_hb_agree(&a, &b, &[0]).unwrap());
        assert!(window_hb_agree(&a, &b, &[0, 1]).unwrap());
        assert!(!window_hb_agree(&a, &b, &[0, 2]).unwrap());
        assert!(window_hb_agree(&b, &b, &[0, 1, 2, 3]).unwrap());
    }
}
