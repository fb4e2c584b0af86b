//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage or parse error, 2 property violation,
//! 3 cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    bicyclic_nonsurjectivity_demo, ca_status, marked_limit_demo, residual_surjunctivity_pipeline,
    restriction_counterexample, surjunctivity_sweep, verify_no_preimage, RuleFamily,
    SweepOptions, DEFAULT_RULE_CAP,
};
use crate::ca::{induce, left_inverse_ca, lift_ca, quotient_ca, restrict, CellularAutomaton, SubmonoidContext};
use crate::congruence::{enumerate_congruences, residually_check, Congruence, ResidualProperty, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::monoid::{BicyclicElement, Element, FiniteMonoid, MonoidHandle};
use crate::report::Report;
use crate::shift::{is_window_text, Configuration, WindowConfiguration, DEFAULT_CONFIG_CAP};
use crate::text::join;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "monoid-ca", version, about = "Cellular automata over monoids")]
struct Cli {
    /// Output format: `text` for people, `lines` for the machine format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Args, Debug, Clone)]
struct MonoidArg {
    /// Built-in name (bicyclic, nat-add, free:N, cyclic:N, map:N, flip-flop) or monoid file.
    #[arg(long)]
    monoid: String,
}

#[derive(Args, Debug, Clone)]
struct Caps {
    /// Maximum number of configurations k^|M| scanned.
    #[arg(long, default_value_t = DEFAULT_CONFIG_CAP)]
    config_cap: u64,
    /// Maximum number of rule tables enumerated.
    #[arg(long, default_value_t = DEFAULT_RULE_CAP)]
    rule_cap: u64,
}

#[derive(Args, Debug, Clone)]
struct SubmonoidArg {
    /// Elements of the submonoid N (must be closed).
    #[arg(long, num_args = 1.., conflicts_with = "generators")]
    submonoid: Vec<String>,
    /// Generators of the submonoid N; for the bicyclic monoid only `p` is supported.
    #[arg(long, num_args = 1..)]
    generators: Vec<String>,
}

#[derive(Args, Debug, Clone)]
struct CongruenceArg {
    /// Congruence file.
    #[arg(long, conflicts_with = "pairs")]
    congruence: Option<PathBuf>,
    /// Generating pairs `a:b`; the congruence is their closure.
    #[arg(long, num_args = 1..)]
    pairs: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size, predicates and element classification of a monoid.
    MonoInfo {
        #[command(flatten)]
        monoid: MonoidArg,
        /// Classify only these elements.
        #[arg(long, num_args = 1..)]
        element: Vec<String>,
    },
    /// All congruences of a finite monoid, optionally with a residual check.
    MonoCongruences {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        size_cap: usize,
        /// Residual property to test: finite or cancellative_commutative.
        #[arg(long)]
        residual: Option<String>,
    },
    /// Apply an automaton to a configuration (full or windowed).
    CaApply {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Compose two automata: the result applies the second, then the first.
    CaCompose {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long, num_args = 2, required = true)]
        ca: Vec<PathBuf>,
        /// Check pointwise against sequential application (finite monoids).
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Re-express an automaton on its minimal memory set.
    CaMinimize {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
    },
    /// Injectivity and surjectivity by exhaustive scan.
    CaStatus {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
        /// Replay the collision and garden-of-eden witnesses.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Restrict an automaton over M to a submonoid N.
    CaRestrict {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
        #[command(flatten)]
        sub: SubmonoidArg,
    },
    /// Induce an automaton over a submonoid N to the ambient monoid M.
    CaInduce {
        /// The ambient monoid M.
        #[command(flatten)]
        monoid: MonoidArg,
        /// Automaton over N.
        #[arg(long)]
        ca: PathBuf,
        #[command(flatten)]
        sub: SubmonoidArg,
    },
    /// The induced automaton on a quotient monoid M/γ.
    CaQuotient {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
        #[command(flatten)]
        congruence: CongruenceArg,
        /// Also write the quotient monoid to this file.
        #[arg(long)]
        quotient_monoid: Option<PathBuf>,
        /// Check that lifting and re-quotienting returns the same automaton.
        #[arg(long)]
        verify: bool,
    },
    /// A left inverse of an injective automaton over a finite monoid.
    CaLeftInverse {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        ca: PathBuf,
        /// Replay σ∘τ = Id on every configuration.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Check every rule table for injective but non-surjective behaviour.
    SweepSurjunctive {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        alphabet: u32,
        /// `all` or a list of elements.
        #[arg(long, num_args = 1.., default_value = "all")]
        memory: Vec<String>,
        #[arg(long)]
        threads: Option<usize>,
        /// Seed for sampled sweeps; requires --samples.
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Left-inverse and image-constraint certificates over the bicyclic monoid.
    DemoBicyclic {
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        depth: u64,
        /// Re-parse the emitted witness and re-check it has no preimage.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_CONFIG_CAP)]
        config_cap: u64,
    },
    /// The bicyclic shift and its restriction to the submonoid generated by p.
    DemoRestriction {
        #[arg(long, default_value_t = 2)]
        alphabet: u32,
        #[arg(long)]
        depth: u64,
        #[arg(long, default_value_t = DEFAULT_CONFIG_CAP)]
        config_cap: u64,
    },
    /// Per = ∪ Inv(γ) and invariance of each Inv(γ) under a rule family.
    DemoResidual {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        alphabet: u32,
        /// Memory set for the rule family; default is every one-element memory.
        #[arg(long, num_args = 1..)]
        memory: Vec<String>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Congruence window agreement against window agreement of Inv sets.
    DemoMarkedLimit {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long)]
        alphabet: u32,
        #[arg(long, default_value_t = DEFAULT_CONFIG_CAP)]
        config_cap: u64,
    },
}

/// Output of a command before formatting.
enum Output {
    /// An object in its own text format.
    Object(String),
    /// A report; extra lines are shown in text mode only.
    Report { report: Report, extra: Vec<(String, String)> },
}

struct Outcome {
    output: Output,
    violation: bool,
}

impl Outcome {
    fn object(text: String) -> Self {
        Outcome {
            output: Output::Object(text),
            violation: false,
        }
    }

    fn report(report: Report, violation: bool) -> Self {
        Outcome {
            output: Output::Report {
                report,
                extra: Vec::new(),
            },
            violation,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_monoid(spec: &str) -> Result<MonoidHandle> {
    match MonoidHandle::builtin(spec) {
        Ok(m) => Ok(m),
        Err(builtin_err) => {
            let path = Path::new(spec);
            if path.exists() {
                Ok(FiniteMonoid::from_text(&read(path)?)?.into())
            } else {
                Err(builtin_err)
            }
        }
    }
}

fn load_finite(spec: &str) -> Result<Arc<FiniteMonoid>> {
    match load_monoid(spec)? {
        MonoidHandle::Finite(m) => Ok(m),
        other => Err(Error::Unsupported(format!("`{other}` is not a finite monoid"))),
    }
}

fn load_ca(monoid: &MonoidHandle, path: &Path) -> Result<CellularAutomaton> {
    CellularAutomaton::from_text(monoid.clone(), &read(path)?)
}

fn tokens(values: &[String]) -> Vec<&str> {
    values.iter().flat_map(|v| v.split_whitespace()).collect()
}

fn parse_elements(monoid: &MonoidHandle, values: &[String]) -> Result<Vec<Element>> {
    tokens(values).into_iter().map(|t| monoid.parse_element(t)).collect()
}

fn parse_indices(monoid: &FiniteMonoid, values: &[String]) -> Result<Vec<usize>> {
    tokens(values)
        .into_iter()
        .map(|t| {
            let i: usize = t
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("invalid element `{t}`")))?;
            monoid.check(i)?;
            Ok(i)
        })
        .collect()
}

fn submonoid_context(monoid: &MonoidHandle, sub: &SubmonoidArg) -> Result<SubmonoidContext> {
    match monoid {
        MonoidHandle::Finite(m) => {
            if !sub.submonoid.is_empty() {
                SubmonoidContext::finite(m.clone(), &parse_indices(m, &sub.submonoid)?)
            } else if !sub.generators.is_empty() {
                SubmonoidContext::generated(m.clone(), &parse_indices(m, &sub.generators)?)
            } else {
                Err(Error::InvalidArgument("--submonoid or --generators is required".into()))
            }
        }
        MonoidHandle::Bicyclic => {
            let gens = tokens(&sub.generators);
            if sub.submonoid.is_empty() && matches!(gens.as_slice(), ["p"] | ["0,1"]) {
                Ok(SubmonoidContext::BicyclicP)
            } else {
                Err(Error::Unsupported("only `--generators p` is supported for the bicyclic monoid".into()))
            }
        }
        other => Err(Error::Unsupported(format!("submonoids of `{other}`"))),
    }
}

fn load_congruence(monoid: &Arc<FiniteMonoid>, arg: &CongruenceArg) -> Result<Congruence> {
    if let Some(path) = &arg.congruence {
        return Congruence::from_text(monoid.clone(), &read(path)?);
    }
    if arg.pairs.is_empty() {
        return Err(Error::InvalidArgument("--congruence or --pairs is required".into()));
    }
    let pairs = tokens(&arg.pairs)
        .into_iter()
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("pair `{t}` is not `a:b`")))?;
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("invalid element `{s}`")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Congruence::closure(monoid.clone(), &pairs)
}

fn mono_info(monoid: &MonoidHandle, elements: &[String]) -> Result<Outcome> {
    let mut r = Report::new("mono-info");
    r.push("monoid", monoid);
    let targets: Vec<Element> = if !elements.is_empty() {
        parse_elements(monoid, elements)?
    } else if let Some(m) = monoid.as_finite() {
        (0..m.size()).map(Element::Index).collect()
    } else {
        vec![monoid.identity()]
    };
    if let Some(m) = monoid.as_finite() {
        let p = m.predicates();
        r.push("size", m.size())
            .push("identity", m.identity())
            .push("commutative", p.commutative)
            .push("left_cancellative", p.left_cancellative)
            .push("right_cancellative", p.right_cancellative)
            .push("group", p.is_group);
    }
    match monoid.find_bicyclic_pair() {
        Some((a, b)) => r.push(
            "bicyclic_pair",
            format!("{} {}", monoid.format_element(&a), monoid.format_element(&b)),
        ),
        None => r.push("bicyclic_pair", "none"),
    };
    for e in &targets {
        let c = monoid.classify(e)?;
        r.push(
            "element",
            format!(
                "{} left_cancellable {} right_cancellable {} left_invertible {} right_invertible {} invertible {}",
                monoid.format_element(e),
                c.left_cancellable,
                c.right_cancellable,
                c.left_invertible,
                c.right_invertible,
                c.invertible
            ),
        );
    }
    Ok(Outcome::report(r, false))
}

fn mono_congruences(spec: &str, size_cap: usize, residual: Option<&str>) -> Result<Outcome> {
    let m = load_finite(spec)?;
    let all = enumerate_congruences(&m, size_cap)?;
    let mut r = Report::new("mono-congruences");
    r.push("monoid_size", m.size()).push("congruences", all.len());
    let mut violation = false;
    if let Some(p) = residual {
        let property: ResidualProperty = p.parse()?;
        let check = residually_check(&m, property, size_cap)?;
        r.push("residual_property", property.name())
            .push("residual_holds", check.holds)
            .push("qualifying", check.qualifying)
            .push("meet_classes", check.meet.num_classes())
            .push("witness_family", check.witness_family.len());
        violation = !check.holds;
    }
    for (i, c) in all.iter().enumerate() {
        r.witness(format!("congruence {i}"), c.to_text());
    }
    Ok(Outcome::report(r, violation))
}

fn ca_apply(monoid: &MonoidHandle, ca: &Path, config: &Path) -> Result<Outcome> {
    let tau = load_ca(monoid, ca)?;
    let text = read(config)?;
    if is_window_text(&text) {
        let x = WindowConfiguration::from_text(monoid.clone(), &text)?;
        Ok(Outcome::object(tau.apply_windowed(&x)?.to_text()))
    } else {
        let x = Configuration::from_text(&text)?;
        Ok(Outcome::object(tau.apply(&x)?.to_text()))
    }
}

fn status_report(tau: &CellularAutomaton, verify: bool, cap: u64) -> Result<Outcome> {
    let s = ca_status(tau, cap)?;
    let mut r = Report::new("ca-status");
    r.push("alphabet", tau.alphabet())
        .push("memory", join(tau.memory().iter().map(|e| tau.monoid().format_element(e))))
        .push("injective", s.injective)
        .push("surjective", s.surjective)
        .push("bijective", s.bijective);
    let mut violation = false;
    if verify {
        let collision_ok = match &s.collision {
            Some((a, b)) => a != b && tau.apply(a)? == tau.apply(b)?,
            None => true,
        };
        let goe_ok = s.garden_of_eden.is_none() || !s.surjective;
        r.push("witnesses_verified", collision_ok && goe_ok);
        violation = !(collision_ok && goe_ok);
    }
    if let Some((a, b)) = &s.collision {
        r.witness("collision first", a.to_text());
        r.witness("collision second", b.to_text());
    }
    if let Some(g) = &s.garden_of_eden {
        r.witness("garden-of-eden", g.to_text());
    }
    Ok(Outcome::report(r, violation))
}

fn sweep(
    spec: &str,
    alphabet: u32,
    memory: &[String],
    threads: Option<usize>,
    sample: Option<(u64, u64)>,
    caps: &Caps,
) -> Result<Outcome> {
    let m = load_finite(spec)?;
    let memory = if tokens(memory) == ["all"] {
        (0..m.size()).collect()
    } else {
        parse_indices(&m, memory)?
    };
    let opts = SweepOptions {
        rule_cap: caps.rule_cap,
        config_cap: caps.config_cap,
        threads,
        sample,
    };
    let s = surjunctivity_sweep(&m, alphabet, &memory, &opts)?;
    let extra = vec![
        ("elapsed_ms".to_string(), format!("{:.3}", s.elapsed.as_secs_f64() * 1000.0)),
        ("threads".to_string(), s.threads.to_string()),
    ];
    Ok(Outcome {
        violation: !s.holds(),
        output: Output::Report {
            report: s.to_report(),
            extra,
        },
    })
}

fn demo_bicyclic(alphabet: u32, depth: u64, verify: bool, cap: u64) -> Result<Outcome> {
    let demo = bicyclic_nonsurjectivity_demo(alphabet, depth, cap)?;
    let mut report = demo.to_report();
    let mut ok = demo.holds();
    if verify {
        // Replay from the serialized form, not from the in-memory witness.
        let parsed = Report::from_text(&report.to_text())?;
        let replayed = match parsed.witnesses().first() {
            Some(w) => {
                let y = WindowConfiguration::from_text(MonoidHandle::Bicyclic, &w.body)?;
                let (one, qp) = (
                    Element::Bicyclic(BicyclicElement::ONE),
                    Element::Bicyclic(BicyclicElement::new(1, 1)),
                );
                y.get(&one) != y.get(&qp) && verify_no_preimage(&demo.tau, &y, cap)?.is_some()
            }
            None => alphabet < 2,
        };
        report.push("verified", replayed);
        ok &= replayed;
    }
    Ok(Outcome::report(report, !ok))
}

fn demo_restriction(alphabet: u32, depth: u64, cap: u64) -> Result<Outcome> {
    let r = restriction_counterexample(alphabet, depth, cap)?;
    let mut report = Report::new("demo-restriction");
    report
        .push("alphabet", r.alphabet)
        .push("depth", r.depth)
        .push(
            "restricted_memory",
            join(r.restricted.memory().iter().map(|e| r.restricted.monoid().format_element(e))),
        )
        .push("tau_injective", r.tau_injective)
        .push("restricted_surjective", r.restricted_surjective)
        .push("surjectivity_checked", r.surjectivity_checked)
        .push("restricted_non_injective", r.restricted_collision.is_some())
        .push("tau_non_surjective", r.tau_witness.is_some());
    if let Some((a, b)) = &r.restricted_collision {
        report.witness("restricted-collision first", a.to_text());
        report.witness("restricted-collision second", b.to_text());
    }
    if let Some(y) = &r.tau_witness {
        report.witness("image-constraint", y.to_text());
    }
    let expected = alphabet < 2 || r.holds();
    Ok(Outcome::report(report, !expected))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::MonoInfo { monoid, element } => mono_info(&load_monoid(&monoid.monoid)?, element),
        Command::MonoCongruences {
            monoid,
            size_cap,
            residual,
        } => mono_congruences(&monoid.monoid, *size_cap, residual.as_deref()),
        Command::CaApply { monoid, ca, config } => ca_apply(&load_monoid(&monoid.monoid)?, ca, config),
        Command::CaCompose {
            monoid,
            ca,
            verify,
            caps,
        } => {
            let m = load_monoid(&monoid.monoid)?;
            let (t1, t2) = (load_ca(&m, &ca[0])?, load_ca(&m, &ca[1])?);
            let c = t1.compose(&t2)?;
            if *verify {
                let seq = sequential_matches(&c, &t1, &t2, caps.config_cap)?;
                if !seq {
                    let mut r = Report::new("ca-compose");
                    r.push("verified", false);
                    return Ok(Outcome::report(r, true));
                }
            }
            Ok(Outcome::object(c.to_text()))
        }
        Command::CaMinimize { monoid, ca } => {
            let m = load_monoid(&monoid.monoid)?;
            Ok(Outcome::object(load_ca(&m, ca)?.minimal_memory()?.to_text()))
        }
        Command::CaStatus {
            monoid,
            ca,
            verify,
            caps,
        } => {
            let m = load_monoid(&monoid.monoid)?;
            status_report(&load_ca(&m, ca)?, *verify, caps.config_cap)
        }
        Command::CaRestrict { monoid, ca, sub } => {
            let m = load_monoid(&monoid.monoid)?;
            let ctx = submonoid_context(&m, sub)?;
            Ok(Outcome::object(restrict(&load_ca(&m, ca)?, &ctx)?.to_text()))
        }
        Command::CaInduce { monoid, ca, sub } => {
            let m = load_monoid(&monoid.monoid)?;
            let ctx = submonoid_context(&m, sub)?;
            let sigma = load_ca(&ctx.sub(), ca)?;
            Ok(Outcome::object(induce(&sigma, &ctx)?.to_text()))
        }
        Command::CaQuotient {
            monoid,
            ca,
            congruence,
            quotient_monoid,
            verify,
        } => {
            let m = load_finite(&monoid.monoid)?;
            let gamma = load_congruence(&m, congruence)?;
            let tau = load_ca(&MonoidHandle::Finite(m.clone()), ca)?;
            let q = quotient_ca(&tau, &gamma)?;
            if let Some(path) = quotient_monoid {
                write_file(path, &gamma.quotient().0.to_text())?;
            }
            if *verify && quotient_ca(&lift_ca(&q, &gamma)?, &gamma)? != q {
                let mut r = Report::new("ca-quotient");
                r.push("verified", false);
                return Ok(Outcome::report(r, true));
            }
            Ok(Outcome::object(q.to_text()))
        }
        Command::CaLeftInverse {
            monoid,
            ca,
            verify,
            caps,
        } => {
            let m = load_monoid(&monoid.monoid)?;
            let tau = load_ca(&m, ca)?;
            match left_inverse_ca(&tau, caps.config_cap) {
                Ok(sigma) => {
                    if *verify {
                        let id = CellularAutomaton::identity(m.clone(), tau.alphabet())?;
                        if !sigma.compose(&tau)?.pointwise_eq(&id, caps.config_cap)? {
                            let mut r = Report::new("ca-left-inverse");
                            r.push("verified", false);
                            return Ok(Outcome::report(r, true));
                        }
                    }
                    Ok(Outcome::object(sigma.to_text()))
                }
                Err(Error::NotInjective) => {
                    let mut out = status_report(&tau, false, caps.config_cap)?;
                    if let Output::Report { report, .. } = &mut out.output {
                        report.push("left_inverse", "none");
                    }
                    out.violation = true;
                    Ok(out)
                }
                Err(e) => Err(e),
            }
        }
        Command::SweepSurjunctive {
            monoid,
            alphabet,
            memory,
            threads,
            seed,
            samples,
            caps,
        } => sweep(
            &monoid.monoid,
            *alphabet,
            memory,
            *threads,
            seed.zip(*samples),
            caps,
        ),
        Command::DemoBicyclic {
            alphabet,
            depth,
            verify,
            config_cap,
        } => demo_bicyclic(*alphabet, *depth, *verify, *config_cap),
        Command::DemoRestriction {
            alphabet,
            depth,
            config_cap,
        } => demo_restriction(*alphabet, *depth, *config_cap),
        Command::DemoResidual {
            monoid,
            alphabet,
            memory,
            seed,
            samples,
            caps,
        } => {
            let m = load_finite(&monoid.monoid)?;
            let family = match (memory.is_empty(), seed.zip(*samples)) {
                (true, None) => RuleFamily::SingleCoordinate,
                (true, Some(_)) => {
                    return Err(Error::InvalidArgument("sampling requires --memory".into()))
                }
                (false, None) => RuleFamily::Memory(parse_indices(&m, memory)?),
                (false, Some((seed, samples))) => RuleFamily::Sampled {
                    memory: parse_indices(&m, memory)?,
                    seed,
                    samples,
                },
            };
            let p = residual_surjunctivity_pipeline(&m, *alphabet, &family, caps.rule_cap, caps.config_cap)?;
            let mut report = p.to_report();
            if let RuleFamily::Sampled { seed, samples, .. } = family {
                report.push("seed", seed).push("samples", samples);
            }
            Ok(Outcome::report(report, !p.holds()))
        }
        Command::DemoMarkedLimit {
            monoid,
            alphabet,
            config_cap,
        } => {
            let m = load_finite(&monoid.monoid)?;
            let r = marked_limit_demo(&m, *alphabet, *config_cap)?;
            Ok(Outcome::report(r.to_report(), r.hypothesis_met() && !r.holds()))
        }
    }
}

fn sequential_matches(
    c: &CellularAutomaton,
    t1: &CellularAutomaton,
    t2: &CellularAutomaton,
    cap: u64,
) -> Result<bool> {
    let n = c.monoid().finite()?.size();
    let total = crate::shift::config_count(n, c.alphabet(), cap)?;
    for code in 0..total {
        let x = Configuration::from_code(code, n, c.alphabet());
        if c.apply(&x)? != t1.apply(&t2.apply(&x)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn render(output: &Output, format: Format) -> String {
    match (output, format) {
        (Output::Object(text), _) => text.clone(),
        (Output::Report { report, .. }, Format::Lines) => report.to_text(),
        (Output::Report { report, extra }, Format::Text) => {
            let width = report
                .entries()
                .iter()
                .map(|(k, _)| k.len())
                .chain(extra.iter().map(|(k, _)| k.len()))
                .max()
                .unwrap_or(0);
            let mut out = String::new();
            for (k, v) in report.entries().iter().chain(extra) {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
            for w in report.witnesses() {
                out.push_str(&format!("\n[{}]\n", w.label));
                for line in w.body.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            out
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_cap_exceeded() {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = render(&outcome.output, cli.format);
            let written = match &cli.output {
                Some(path) => write_file(path, &text),
                None => stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Error::InvalidArgument(e.to_string())),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if outcome.violation {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
