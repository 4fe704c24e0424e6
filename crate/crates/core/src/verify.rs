//! Batch property verification over seeded random instances.
//!
//! Each property draws instances from its own stream (see
//! [`crate::generate::instance_rng`]); stream ids are derived from the
//! property name, so adding properties never perturbs existing streams.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ass::{
    irreducible_decomposition, renumber, AssociatedPrimes, DecompositionCache, Permutation,
};
use crate::betti::{
    betti_table_with, reg_oracle, reg_stable_ek, OracleBudget, RankRoute, COEFFICIENTS,
};
use crate::borel::{
    borel_closure, is_borel_type_exchange, is_borel_type_star, is_stable, is_stable_exhaustive,
    is_strongly_stable, stability_witness, stability_witness_refutes, witness_refutes,
};
use crate::chain::{build_chain, check_formula2, reg_via_chain};
use crate::error::{Error, Result};
use crate::generate::{
    generate, generate_borel_parts, instance_rng, random_monomial, random_permutation, GenParams,
    InstanceKind,
};
use crate::ideal::MonomialIdeal;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::parse::{ideal_from_json, ideal_to_file_string, ideal_to_json, parse_ideal};
use crate::regularity::{check_sum_bound, min_stable_truncation, reg_artinian, reg_via_truncation};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Checked instances wanted per property (skips do not count).
    pub count: usize,
    pub params: GenParams,
    /// Property names to run; empty means all.
    pub properties: Vec<String>,
    /// Overrides the instance kinds of single-ideal properties.
    pub kind: Option<InstanceKind>,
    pub budget: OracleBudget,
    /// Stop after `count * attempt_factor` draws even if too few were checked.
    pub attempt_factor: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            count: 200,
            params: GenParams::default(),
            properties: Vec::new(),
            kind: None,
            budget: OracleBudget::default(),
            attempt_factor: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The oracle refused the instance.
    Skipped(String),
    /// The instance does not meet the property's hypothesis.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Need {
    Any,
    BorelType,
    Artinian,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Single(&'static [InstanceKind]),
    /// An ideal and a random monomial ideal in the same ring.
    Pair(&'static [InstanceKind]),
    /// Two or three Borel type ideals in one ring.
    Parts,
    /// A Borel type ideal with its variables shuffled.
    Scrambled(&'static [InstanceKind]),
}

type Check = fn(&[MonomialIdeal], &Ctx) -> Result<Outcome>;

pub struct Property {
    pub name: &'static str,
    pub description: &'static str,
    shape: Shape,
    need: Need,
    check: Check,
}

struct Ctx {
    budget: OracleBudget,
    cache: Mutex<DecompositionCache>,
}

impl Ctx {
    fn new(budget: OracleBudget) -> Self {
        Ctx {
            budget,
            cache: Mutex::new(DecompositionCache::new()),
        }
    }

    fn oracle(&self, ideal: &MonomialIdeal) -> Result<Option<u32>> {
        match reg_oracle(ideal, &self.budget) {
            Ok(v) => Ok(Some(v)),
            Err(Error::OracleInfeasible(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn associated_primes(&self, ideal: &MonomialIdeal) -> Result<AssociatedPrimes> {
        self.cache
            .lock()
            .expect("cache lock")
            .associated_primes(ideal)
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($arg)*)));
        }
    };
}

macro_rules! oracle_or_skip {
    ($ctx:expr, $ideal:expr) => {
        match $ctx.oracle($ideal)? {
            Some(v) => v,
            None => {
                return Ok(Outcome::Skipped(format!(
                    "oracle infeasible for {}",
                    $ideal
                )))
            }
        }
    };
}

const ANY: &[InstanceKind] = &[
    InstanceKind::RandomMonomial,
    InstanceKind::BorelClosure,
    InstanceKind::Artinian,
    InstanceKind::BorelTypeFiltered,
    InstanceKind::SumOfBorelType,
];
const BOREL: &[InstanceKind] = &InstanceKind::BOREL_TYPE;
const ARTINIAN: &[InstanceKind] = &[InstanceKind::Artinian];
const RANDOM: &[InstanceKind] = &[InstanceKind::RandomMonomial];
const MIXED: &[InstanceKind] = &[
    InstanceKind::RandomMonomial,
    InstanceKind::BorelTypeFiltered,
];

/// Every property, in report order.
pub fn properties() -> &'static [Property] {
    PROPERTIES
}

static PROPERTIES: &[Property] = &[
    Property {
        name: "monomial-arithmetic",
        description: "lcm is the least common multiple, colon generators reconstruct, max_var of products",
        shape: Shape::Single(RANDOM),
        need: Need::Any,
        check: check_monomial_arithmetic,
    },
    Property {
        name: "minimalize-roundtrip",
        description: "adding multiples of generators and re-minimalizing returns the ideal",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_minimalize_roundtrip,
    },
    Property {
        name: "intersect-membership",
        description: "u in I∩J iff u in I and u in J, exhaustively up to deg I + deg J",
        shape: Shape::Pair(ANY),
        need: Need::Any,
        check: check_intersect_membership,
    },
    Property {
        name: "saturation-two-ways",
        description: "exponent dropping equals iterated colons by x_j; degrees never increase",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_saturation_two_ways,
    },
    Property {
        name: "prefix-saturation-artinian",
        description: "artinian ideals saturate to the ring",
        shape: Shape::Single(ARTINIAN),
        need: Need::Artinian,
        check: check_prefix_saturation_artinian,
    },
    Property {
        name: "truncate-compose",
        description: "truncating at e and then at e' >= e is truncating at e'",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_truncate_compose,
    },
    Property {
        name: "truncate-hilbert",
        description: "HF of a truncation agrees with HF of the ideal from degree e on, and is full below",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_truncate_hilbert,
    },
    Property {
        name: "borel-characterizations",
        description: "saturation and exchange characterizations of Borel type agree",
        shape: Shape::Single(MIXED),
        need: Need::Any,
        check: check_borel_characterizations,
    },
    Property {
        name: "borel-implications",
        description: "strongly stable => stable => Borel type; generator-level stability equals the all-monomial check",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_borel_implications,
    },
    Property {
        name: "borel-sum-closure",
        description: "sums of Borel type ideals are of Borel type",
        shape: Shape::Parts,
        need: Need::BorelType,
        check: check_borel_sum_closure,
    },
    Property {
        name: "borel-witness-soundness",
        description: "every failure witness replays to a counterexample",
        shape: Shape::Single(RANDOM),
        need: Need::Any,
        check: check_witness_soundness,
    },
    Property {
        name: "borel-closure-fixpoint",
        description: "the Borel closure is strongly stable and closing it again changes nothing",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_closure_fixpoint,
    },
    Property {
        name: "chain-shape",
        description: "r <= n, n_l strictly decreasing, J_l strictly inside J_l^sat, ring changes invert",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_chain_shape,
    },
    Property {
        name: "chain-monotone",
        description: "reg(I_1) <= reg(I_0) along the chain",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_chain_monotone,
    },
    Property {
        name: "chain-hilbert-identity",
        description: "Hilbert function identity for I_(l+1)/I_l at every stage and every d <= reg + 3",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_chain_hilbert_identity,
    },
    Property {
        name: "chain-artinian",
        description: "artinian chains have one stage and the chain formula is s(S/I) + 1",
        shape: Shape::Single(ARTINIAN),
        need: Need::Artinian,
        check: check_chain_artinian,
    },
    Property {
        name: "regularity-bound",
        description: "deg(I) <= reg(I) <= n(deg(I) - 1) + 1 for Borel type ideals",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_regularity_bound,
    },
    Property {
        name: "triple-agreement",
        description: "chain formula, minimal stable truncation and Betti oracle give the same regularity",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_triple_agreement,
    },
    Property {
        name: "stable-above-reg",
        description: "I_{>=e} is stable for every e from reg(I) to the bound + 2",
        shape: Shape::Single(BOREL),
        need: Need::BorelType,
        check: check_stable_above_reg,
    },
    Property {
        name: "stable-truncation-bounds-reg",
        description: "a stable truncation at e >= deg(I) bounds the oracle regularity by e",
        shape: Shape::Single(MIXED),
        need: Need::Any,
        check: check_stable_truncation_bound,
    },
    Property {
        name: "extension-invariance",
        description: "stability of I_{>=e} is unchanged by adjoining a variable, for e >= deg(I)",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_extension_invariance,
    },
    Property {
        name: "artinian-regularity",
        description: "artinian: s(S/I) + 1 equals the oracle and I_{>=e} = S_{>=e} for e >= reg",
        shape: Shape::Single(ARTINIAN),
        need: Need::Artinian,
        check: check_artinian_regularity,
    },
    Property {
        name: "oracle-permutation-invariance",
        description: "oracle regularity does not depend on the variable order",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_oracle_permutation,
    },
    Property {
        name: "sum-regularity-bound",
        description: "reg of a sum of Borel type ideals is at most the largest part regularity",
        shape: Shape::Parts,
        need: Need::BorelType,
        check: check_sum_regularity_bound,
    },
    Property {
        name: "ordered-ass-route",
        description: "scrambled Borel type ideals have totally ordered Ass, renumber to Borel type and keep their regularity",
        shape: Shape::Scrambled(BOREL),
        need: Need::BorelType,
        check: check_ordered_ass_route,
    },
    Property {
        name: "ass-reintersection",
        description: "irreducible components intersect back to I and agree on membership",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_ass_reintersection,
    },
    Property {
        name: "ass-permutation",
        description: "associated primes move with a renumbering of the variables",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_ass_permutation,
    },
    Property {
        name: "oracle-self-consistency",
        description: "boundary squares vanish, Euler characteristics match, beta_0 counts generators, rank routes agree, reg >= deg",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_oracle_self_consistency,
    },
    Property {
        name: "oracle-stable-ek",
        description: "stable ideals have oracle regularity deg(I)",
        shape: Shape::Single(&[InstanceKind::BorelClosure]),
        need: Need::Any,
        check: check_oracle_stable_ek,
    },
    Property {
        name: "serialization-round-trip",
        description: "ideal files and JSON re-parse to equal ideals",
        shape: Shape::Single(ANY),
        need: Need::Any,
        check: check_serialization,
    },
];

pub fn find_property(name: &str) -> Result<&'static Property> {
    PROPERTIES
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProperty(name.to_string()))
}

fn fnv1a(name: &str) -> u32 {
    name.bytes().fold(0x811c_9dc5u32, |h, b| {
        (h ^ b as u32).wrapping_mul(0x0100_0193)
    })
}

/// Stream id of instance `index` of `property`.
pub fn stream_id(property: &str, index: usize) -> u64 {
    ((fnv1a(property) as u64) << 32) | index as u64
}

fn shape_kinds(shape: Shape) -> Option<&'static [InstanceKind]> {
    match shape {
        Shape::Single(k) | Shape::Pair(k) | Shape::Scrambled(k) => Some(k),
        Shape::Parts => None,
    }
}

fn kind_satisfies(kind: InstanceKind, need: Need) -> bool {
    match need {
        Need::Any => true,
        Need::BorelType => kind.is_borel_type(),
        Need::Artinian => kind == InstanceKind::Artinian,
    }
}

fn draw(
    property: &Property,
    config: &VerifyConfig,
    index: usize,
) -> Result<(Option<InstanceKind>, Vec<MonomialIdeal>)> {
    let mut rng = instance_rng(config.seed, stream_id(property.name, index));
    let params = &config.params;
    let pick = |kinds: &'static [InstanceKind]| config.kind.unwrap_or(kinds[index % kinds.len()]);
    match property.shape {
        Shape::Single(kinds) => {
            let kind = pick(kinds);
            Ok((Some(kind), vec![generate(kind, params, &mut rng)?]))
        }
        Shape::Pair(kinds) => {
            let kind = pick(kinds);
            let first = generate(kind, params, &mut rng)?;
            let n = first.nvars();
            let k = rng.random_range(1..=3);
            let gens: Vec<Monomial> = (0..k)
                .map(|_| random_monomial(n, n, params.deg_range.clone(), &mut rng))
                .collect();
            let second = MonomialIdeal::minimalize(first.ring().clone(), gens);
            Ok((Some(kind), vec![first, second]))
        }
        Shape::Parts => Ok((None, generate_borel_parts(params, &mut rng)?)),
        Shape::Scrambled(kinds) => {
            let kind = pick(kinds);
            let base = generate(kind, params, &mut rng)?;
            let perm = random_permutation(base.nvars(), &mut rng);
            Ok((Some(kind), vec![renumber(&base, &perm)?]))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureDump {
    pub property: String,
    pub instance: usize,
    pub kind: Option<InstanceKind>,
    /// Instance ideals in the ideal file format.
    pub files: Vec<String>,
    pub message: String,
    /// Command that re-runs the check on the dumped files.
    pub replay: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub description: String,
    pub attempts: usize,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub not_applicable: usize,
    pub failures: Vec<FailureDump>,
}

impl PropertyReport {
    /// Every checked instance passed and at least `wanted` were checked.
    pub fn satisfied(&self, wanted: usize) -> bool {
        self.failed == 0 && self.checked >= wanted
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub count: usize,
    pub n_range: RangeInclusive<usize>,
    pub deg_range: RangeInclusive<u32>,
    pub kind: Option<InstanceKind>,
    pub coefficients: &'static str,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.properties.iter().map(|p| p.failed).sum()
    }

    /// No failures and every property reached its instance count.
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.satisfied(self.count))
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn selected(config: &VerifyConfig) -> Result<Vec<&'static Property>> {
    let props: Vec<&'static Property> = if config.properties.is_empty() {
        PROPERTIES.iter().collect()
    } else {
        config
            .properties
            .iter()
            .map(|n| find_property(n))
            .collect::<Result<_>>()?
    };
    if let Some(kind) = config.kind {
        for p in &props {
            if shape_kinds(p.shape).is_some() && !kind_satisfies(kind, p.need) {
                return Err(Error::Config(format!(
                    "property {} needs {:?} instances; kind {kind} does not provide them",
                    p.name, p.need
                )));
            }
        }
    }
    Ok(props)
}

fn run_check(property: &Property, instance: &[MonomialIdeal], ctx: &Ctx) -> Outcome {
    match (property.check)(instance, ctx) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::Fail(format!("error: {e}")),
    }
}

fn replay_command(property: &str, files: usize) -> String {
    let names: Vec<String> = (0..files).map(|k| format!("instance-{k}.txt")).collect();
    format!(
        "borelreg verify --property {property} --replay {}",
        names.join(" ")
    )
}

const BATCH: usize = 32;

fn run_property(property: &Property, config: &VerifyConfig, ctx: &Ctx) -> PropertyReport {
    let cap = config
        .count
        .saturating_mul(config.attempt_factor)
        .max(config.count);
    let mut report = PropertyReport {
        name: property.name.to_string(),
        description: property.description.to_string(),
        attempts: 0,
        checked: 0,
        passed: 0,
        failed: 0,
        skipped: 0,
        not_applicable: 0,
        failures: Vec::new(),
    };
    let mut start = 0;
    'outer: while report.checked < config.count && start < cap {
        let end = (start + BATCH).min(cap);
        let results: Vec<(usize, Option<InstanceKind>, Vec<MonomialIdeal>, Outcome)> = (start..end)
            .into_par_iter()
            .map(|index| match draw(property, config, index) {
                Ok((kind, instance)) => {
                    let outcome = run_check(property, &instance, ctx);
                    (index, kind, instance, outcome)
                }
                Err(e) => (
                    index,
                    None,
                    Vec::new(),
                    Outcome::Fail(format!("generator: {e}")),
                ),
            })
            .collect();
        for (index, kind, instance, outcome) in results {
            report.attempts += 1;
            match outcome {
                Outcome::Pass => {
                    report.checked += 1;
                    report.passed += 1;
                }
                Outcome::Fail(message) => {
                    report.checked += 1;
                    report.failed += 1;
                    report.failures.push(FailureDump {
                        property: property.name.to_string(),
                        instance: index,
                        kind,
                        files: instance.iter().map(ideal_to_file_string).collect(),
                        message,
                        replay: replay_command(property.name, instance.len()),
                    });
                }
                Outcome::Skipped(_) => report.skipped += 1,
                Outcome::NotApplicable => report.not_applicable += 1,
            }
            if report.checked >= config.count {
                break 'outer;
            }
        }
        start = end;
    }
    report
}

/// Runs the selected properties.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    config.params.validate()?;
    if config.count == 0 {
        return Err(Error::Config("count must be positive".into()));
    }
    let props = selected(config)?;
    let ctx = Ctx::new(config.budget);
    let properties = props
        .iter()
        .map(|p| run_property(p, config, &ctx))
        .collect();
    Ok(VerifyReport {
        seed: config.seed,
        count: config.count,
        n_range: config.params.n_range.clone(),
        deg_range: config.params.deg_range.clone(),
        kind: config.kind,
        coefficients: COEFFICIENTS,
        properties,
    })
}

/// Runs one property on a given instance, e.g. one read back from a
/// failure dump.
pub fn replay(
    property: &str,
    instance: &[MonomialIdeal],
    budget: &OracleBudget,
) -> Result<Outcome> {
    let p = find_property(property)?;
    let expected = match p.shape {
        Shape::Single(_) | Shape::Scrambled(_) => 1..=1,
        Shape::Pair(_) => 2..=2,
        Shape::Parts => 1..=usize::MAX,
    };
    if !expected.contains(&instance.len()) {
        return Err(Error::Config(format!(
            "property {property} takes {expected:?} ideal files, got {}",
            instance.len()
        )));
    }
    let ctx = Ctx::new(*budget);
    Ok(run_check(p, instance, &ctx))
}

// ---------------------------------------------------------------------------
// checks

fn single(instance: &[MonomialIdeal]) -> &MonomialIdeal {
    &instance[0]
}

fn all_monomials_up_to(nvars: usize, max_degree: u32) -> impl Iterator<Item = Monomial> {
    (0..=max_degree).flat_map(move |d| monomials_of_degree(nvars, d))
}

fn check_monomial_arithmetic(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let gens = ideal.gens();
    let n = ideal.nvars();
    for u in gens {
        for v in gens {
            let l = u.lcm(v);
            ensure!(
                u.divides(&l) && v.divides(&l),
                "lcm({u:?}, {v:?}) = {l:?} is not a multiple"
            );
            for w in all_monomials_up_to(n, l.degree()) {
                ensure!(
                    !(u.divides(&w) && v.divides(&w)) || l.divides(&w),
                    "common multiple {w:?} of {u:?}, {v:?} is not a multiple of lcm {l:?}"
                );
            }
            ensure!(
                (u.colon_gen(v).mul(v) == *u) == v.divides(u),
                "colon_gen({u:?}, {v:?}) does not reconstruct"
            );
            ensure!(
                u.mul(v).max_var() == u.max_var().max(v.max_var()),
                "max_var of {u:?} * {v:?}"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_minimalize_roundtrip(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let n = ideal.nvars();
    let mut gens: Vec<Monomial> = ideal.gens().to_vec();
    for (k, g) in ideal.gens().iter().enumerate() {
        let w = Monomial::pure_power(n, k % n + 1, 1 + (k as u32 % 2));
        gens.push(g.mul(&w));
        gens.push(g.mul(&g.clone()));
    }
    let again = MonomialIdeal::minimalize(ideal.ring().clone(), gens);
    ensure!(
        &again == ideal,
        "re-minimalizing {ideal} with multiples gave {again}"
    );
    Ok(Outcome::Pass)
}

fn check_intersect_membership(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let (i, j) = (&instance[0], &instance[1]);
    let meet = i.intersect(j);
    for u in all_monomials_up_to(i.nvars(), i.degree() + j.degree()) {
        ensure!(
            meet.contains(&u) == (i.contains(&u) && j.contains(&u)),
            "membership of {u:?} in {meet} = {i} ∩ {j}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_saturation_two_ways(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    for j in 1..=ideal.nvars() {
        let a = ideal.saturate_variable(j)?;
        let b = ideal.saturate_variable_by_colons(j)?;
        ensure!(
            a == b,
            "(I : x{j}^inf) of {ideal}: dropping gives {a}, colons give {b}"
        );
        ensure!(
            a.degree() <= ideal.degree(),
            "saturation raised the degree of {ideal}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_prefix_saturation_artinian(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if !ideal.is_artinian() {
        return Ok(Outcome::NotApplicable);
    }
    let sat = ideal.saturate_prefix_prime(ideal.nvars())?;
    ensure!(sat.is_improper(), "artinian {ideal} saturates to {sat}");
    Ok(Outcome::Pass)
}

fn check_truncate_compose(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let top = ideal.degree() + 3;
    for e in 0..=top {
        let once = ideal.truncate(e);
        for e2 in e..=top {
            let twice = once.truncate(e2);
            let direct = ideal.truncate(e2);
            ensure!(
                twice == direct,
                "truncate({e}) then truncate({e2}) of {ideal}: {twice} vs {direct}"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_truncate_hilbert(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    truncate_hilbert_with(single(instance), MonomialIdeal::truncate)
}

fn truncate_hilbert_with(
    ideal: &MonomialIdeal,
    truncate: impl Fn(&MonomialIdeal, u32) -> MonomialIdeal,
) -> Result<Outcome> {
    let n = ideal.nvars();
    for e in 0..=ideal.degree() + 2 {
        let t = truncate(ideal, e);
        for d in 0..=e + 3 {
            let expected = if d >= e {
                ideal.hilbert_quotient(d)
            } else {
                crate::monomial::count_of_degree(n, d)
            };
            ensure!(
                t.hilbert_quotient(d) == expected,
                "HF(S/I_>={e}, {d}) = {} but expected {expected} for {ideal}",
                t.hilbert_quotient(d)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_borel_characterizations(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let star = is_borel_type_star(ideal)?;
    let exchange = is_borel_type_exchange(ideal)?;
    ensure!(
        star.verdict == exchange.verdict,
        "{ideal}: saturation form says {} ({:?}), exchange form says {} ({:?})",
        star.verdict,
        star.witness,
        exchange.verdict,
        exchange.witness
    );
    Ok(Outcome::Pass)
}

fn check_borel_implications(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let strongly = is_strongly_stable(ideal)?;
    let stable = is_stable(ideal)?;
    let borel = is_borel_type_star(ideal)?.verdict;
    ensure!(
        !strongly || stable,
        "{ideal} is strongly stable but not stable"
    );
    ensure!(!stable || borel, "{ideal} is stable but not of Borel type");
    let exhaustive = is_stable_exhaustive(ideal, ideal.degree() + 2)?;
    ensure!(
        stable == exhaustive,
        "{ideal}: generator check says stable={stable}, all-monomial check says {exhaustive}"
    );
    Ok(Outcome::Pass)
}

fn check_borel_sum_closure(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    for part in instance {
        if !is_borel_type_star(part)?.verdict {
            return Ok(Outcome::NotApplicable);
        }
    }
    let sum = instance[1..]
        .iter()
        .fold(instance[0].clone(), |a, p| a.sum(p));
    let evidence = is_borel_type_star(&sum)?;
    ensure!(
        evidence.verdict,
        "sum {sum} of Borel type parts fails: {:?}",
        evidence.witness
    );
    Ok(Outcome::Pass)
}

fn check_witness_soundness(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let mut exercised = false;
    for evidence in [is_borel_type_star(ideal)?, is_borel_type_exchange(ideal)?] {
        if let Some(w) = evidence.witness {
            exercised = true;
            ensure!(
                witness_refutes(ideal, &w)?,
                "witness {w} does not refute {ideal}"
            );
        }
    }
    if let Some(w) = stability_witness(ideal)? {
        exercised = true;
        ensure!(
            stability_witness_refutes(ideal, &w),
            "stability witness {w} does not refute {ideal}"
        );
    }
    Ok(if exercised {
        Outcome::Pass
    } else {
        Outcome::NotApplicable
    })
}

fn check_closure_fixpoint(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let closure = borel_closure(ideal.ring().clone(), ideal.gens());
    ensure!(
        is_strongly_stable(&closure)?,
        "closure {closure} is not strongly stable"
    );
    ensure!(
        closure.contains_ideal(ideal),
        "closure {closure} misses {ideal}"
    );
    let again = borel_closure(closure.ring().clone(), closure.gens());
    ensure!(
        again == closure,
        "closure is not idempotent: {closure} then {again}"
    );
    Ok(Outcome::Pass)
}

/// `deg(I) <= reg <= n(deg(I) - 1) + 1`, checked in every Borel type suite.
fn bound_violation(ideal: &MonomialIdeal, reg: u32) -> Option<Outcome> {
    let bound = ideal.regularity_bound();
    (reg > bound || reg < ideal.degree()).then(|| {
        Outcome::Fail(format!(
            "{ideal}: reg {reg} outside [deg, n(deg-1)+1] = [{}, {bound}]",
            ideal.degree()
        ))
    })
}

macro_rules! ensure_bound {
    ($ideal:expr, $reg:expr) => {
        if let Some(o) = bound_violation($ideal, $reg) {
            return Ok(o);
        }
    };
}

fn require_borel(ideal: &MonomialIdeal) -> Result<Option<Outcome>> {
    Ok((!is_borel_type_star(ideal)?.verdict).then_some(Outcome::NotApplicable))
}

fn check_chain_shape(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    let chain = build_chain(ideal)?;
    let n = ideal.nvars();
    ensure!(
        chain.len() <= n,
        "chain of {ideal} has length {} > {n}",
        chain.len()
    );
    ensure!(
        chain.stages[0].ideal == *ideal,
        "chain does not start at the input"
    );
    for (l, stage) in chain.stages.iter().enumerate() {
        ensure!(
            stage.n_l == stage.ideal.max_var(),
            "stage {l}: n_l is not m(I_l)"
        );
        if l > 0 {
            ensure!(
                chain.stages[l - 1].n_l > stage.n_l,
                "stage {l}: n_l does not decrease"
            );
        }
        ensure!(
            stage.j == stage.ideal.restrict_ring(stage.n_l)?,
            "stage {l}: J_l != restriction"
        );
        ensure!(
            stage.j.extend_ring(n - stage.n_l) == stage.ideal,
            "stage {l}: extension of J_l != I_l"
        );
        ensure!(
            stage.j_sat.contains_ideal(&stage.j) && stage.j_sat != stage.j,
            "stage {l}: J_l = {} is not strictly inside J_sat = {}",
            stage.j,
            stage.j_sat
        );
        let next = chain.next_ideal(l);
        ensure!(
            stage.ideal.saturate_variable(stage.n_l)? == next,
            "stage {l}: I_(l+1) is not (I_l : x_n_l^inf)"
        );
        ensure!(
            stage.s_value.top().is_some(),
            "stage {l}: zero module on Borel type input"
        );
    }
    Ok(Outcome::Pass)
}

fn check_chain_monotone(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    let chain = build_chain(ideal)?;
    if chain.len() < 2 {
        return Ok(Outcome::NotApplicable);
    }
    let r0 = reg_via_chain(ideal)?;
    let r1 = reg_via_chain(&chain.stages[1].ideal)?;
    ensure!(r1 <= r0, "reg(I_1) = {r1} > reg(I_0) = {r0} for {ideal}");
    Ok(Outcome::Pass)
}

fn check_chain_hilbert_identity(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    let chain = build_chain(ideal)?;
    let reg = chain.formula_regularity()?;
    ensure_bound!(ideal, reg);
    let report = check_formula2(&chain, reg + 3);
    if let Some(row) = report.failures().next() {
        return Ok(Outcome::Fail(format!(
            "{ideal}: stage {} degree {}: lhs {} rhs {}",
            row.stage, row.degree, row.lhs, row.rhs
        )));
    }
    Ok(Outcome::Pass)
}

fn check_chain_artinian(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if !ideal.is_artinian() {
        return Ok(Outcome::NotApplicable);
    }
    let chain = build_chain(ideal)?;
    ensure!(
        chain.len() == 1,
        "artinian {ideal} has chain length {}",
        chain.len()
    );
    let a = reg_artinian(ideal)?;
    let c = chain.formula_regularity()?;
    ensure!(a == c, "{ideal}: reg_artinian {a}, chain {c}");
    ensure_bound!(ideal, c);
    Ok(Outcome::Pass)
}

fn check_regularity_bound(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    ensure_bound!(ideal, reg_via_chain(ideal)?);
    Ok(Outcome::Pass)
}

fn check_triple_agreement(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    let oracle = oracle_or_skip!(ctx, ideal);
    let chain = reg_via_chain(ideal)?;
    let truncation = reg_via_truncation(ideal)?;
    ensure_bound!(ideal, chain);
    ensure!(
        chain == truncation && truncation == oracle,
        "{ideal}: chain {chain}, truncation {truncation}, oracle {oracle}"
    );
    if is_stable(ideal)? {
        let ek = reg_stable_ek(ideal)?;
        ensure!(
            ek == oracle,
            "{ideal}: stable, deg {ek} but oracle {oracle}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_stable_above_reg(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if let Some(o) = require_borel(ideal)? {
        return Ok(o);
    }
    let reg = reg_via_chain(ideal)?;
    ensure_bound!(ideal, reg);
    for e in reg..=ideal.regularity_bound() + 2 {
        let t = ideal.truncate(e);
        if let Some(w) = stability_witness(&t)? {
            return Ok(Outcome::Fail(format!(
                "{ideal}: reg {reg}, I_>={e} unstable: {w}"
            )));
        }
    }
    Ok(Outcome::Pass)
}

fn check_stable_truncation_bound(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let Some(e) = min_stable_truncation(ideal, ideal.degree(), ideal.regularity_bound())? else {
        return Ok(Outcome::NotApplicable);
    };
    let oracle = oracle_or_skip!(ctx, ideal);
    ensure!(
        oracle <= e,
        "{ideal}: I_>={e} stable but oracle regularity is {oracle}"
    );
    Ok(Outcome::Pass)
}

fn check_extension_invariance(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let extended = ideal.extend_ring(1);
    for e in ideal.degree()..=ideal.regularity_bound() {
        let a = is_stable(&ideal.truncate(e))?;
        let b = is_stable(&extended.truncate(e))?;
        ensure!(
            a == b,
            "{ideal}: I_>={e} stable={a}, after adjoining a variable stable={b}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_artinian_regularity(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if !ideal.is_artinian() {
        return Ok(Outcome::NotApplicable);
    }
    let reg = reg_artinian(ideal)?;
    ensure_bound!(ideal, reg);
    let unit = MonomialIdeal::unit(ideal.ring().clone());
    for e in reg..=reg + 2 {
        let t = ideal.truncate(e);
        let full = unit.truncate(e);
        ensure!(t == full, "{ideal}: I_>={e} = {t} is not S_>={e}");
    }
    let oracle = oracle_or_skip!(ctx, ideal);
    ensure!(reg == oracle, "{ideal}: s(S/I)+1 = {reg}, oracle {oracle}");
    Ok(Outcome::Pass)
}

fn check_oracle_permutation(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let before = oracle_or_skip!(ctx, ideal);
    let n = ideal.nvars();
    // deterministic family of permutations: reversal and a rotation
    let reversed = Permutation::new((1..=n).rev().collect())?;
    let rotated = Permutation::new((1..=n).map(|i| i % n + 1).collect())?;
    for perm in [reversed, rotated] {
        let moved = renumber(ideal, &perm)?;
        let after = oracle_or_skip!(ctx, &moved);
        ensure!(
            before == after,
            "{ideal}: oracle {before}, renumbered by [{perm}] {after}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_sum_regularity_bound(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    for part in instance {
        if !is_borel_type_star(part)?.verdict {
            return Ok(Outcome::NotApplicable);
        }
    }
    let report = check_sum_bound(instance)?;
    for (part, &reg) in instance.iter().zip(&report.part_regularities) {
        ensure_bound!(part, reg);
    }
    if let Some(reg) = report.sum_regularity {
        let sum = instance[1..]
            .iter()
            .fold(instance[0].clone(), |a, p| a.sum(p));
        ensure_bound!(&sum, reg);
    }
    ensure!(
        report.holds(),
        "parts {:?}: {report:?}",
        instance.iter().map(|p| p.to_string()).collect::<Vec<_>>()
    );
    Ok(Outcome::Pass)
}

fn check_ordered_ass_route(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let ass = ctx.associated_primes(ideal)?;
    ensure!(
        ass.totally_ordered,
        "{ideal}: associated primes {:?} not totally ordered",
        ass.primes
    );
    let perm = ass
        .renumbering
        .expect("totally ordered primes carry a renumbering");
    let renumbered = renumber(ideal, &perm)?;
    let moved: BTreeSet<Vec<usize>> = ass.primes.iter().map(|p| perm.apply_to_set(p)).collect();
    for p in &moved {
        ensure!(
            p.iter().copied().eq(1..=p.len()),
            "{ideal}: renumbering [{perm}] sends a prime to {p:?}"
        );
    }
    let evidence = is_borel_type_star(&renumbered)?;
    ensure!(
        evidence.verdict,
        "{ideal} renumbered to {renumbered} is not of Borel type: {:?}",
        evidence.witness
    );
    let oracle = oracle_or_skip!(ctx, ideal);
    let chain = reg_via_chain(&renumbered)?;
    let truncation = reg_via_truncation(&renumbered)?;
    ensure_bound!(&renumbered, chain);
    ensure!(
        chain == oracle && truncation == oracle,
        "{ideal}: renumbered chain {chain}, truncation {truncation}, oracle on the original {oracle}"
    );
    Ok(Outcome::Pass)
}

fn check_ass_reintersection(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let comps = irreducible_decomposition(ideal)?;
    for c in &comps {
        ensure!(
            c.ideal.gens().iter().all(|g| g.pure_power_var().is_some()),
            "component {} is not irreducible",
            c.ideal
        );
    }
    let rebuilt = comps
        .iter()
        .map(|c| c.ideal.clone())
        .reduce(|a, b| a.intersect(&b))
        .expect("nonempty");
    ensure!(
        &rebuilt == ideal,
        "{ideal}: components intersect to {rebuilt}"
    );
    for k in 0..comps.len() {
        if comps.len() == 1 {
            break;
        }
        let rest = comps
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != k)
            .map(|(_, c)| c.ideal.clone())
            .reduce(|a, b| a.intersect(&b))
            .expect("nonempty");
        ensure!(
            &rest != ideal,
            "{ideal}: component {} is redundant",
            comps[k].ideal
        );
    }
    for u in all_monomials_up_to(ideal.nvars(), ideal.degree() + 2) {
        ensure!(
            ideal.contains(&u) == comps.iter().all(|c| c.ideal.contains(&u)),
            "{ideal}: membership of {u:?} disagrees with the components"
        );
    }
    Ok(Outcome::Pass)
}

fn check_ass_permutation(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let n = ideal.nvars();
    let perm = Permutation::new((1..=n).map(|i| i % n + 1).collect())?;
    let before = ctx.associated_primes(ideal)?;
    let after = ctx.associated_primes(&renumber(ideal, &perm)?)?;
    let expected: BTreeSet<Vec<usize>> =
        before.primes.iter().map(|p| perm.apply_to_set(p)).collect();
    let got: BTreeSet<Vec<usize>> = after.primes.iter().cloned().collect();
    ensure!(
        expected == got,
        "{ideal}: primes {:?} moved by [{perm}] give {got:?}",
        before.primes
    );
    ensure!(
        before.totally_ordered == after.totally_ordered,
        "{ideal}: total order not preserved by renumbering"
    );
    Ok(Outcome::Pass)
}

fn check_oracle_self_consistency(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    // betti_table_with fails loudly on ∂∘∂ ≠ 0, Euler mismatch or a wrong β_0
    let table = match betti_table_with(ideal, &ctx.budget, RankRoute::FractionFree) {
        Ok(t) => t,
        Err(Error::OracleInfeasible(m)) => return Ok(Outcome::Skipped(m)),
        Err(e) => return Ok(Outcome::Fail(format!("{ideal}: {e}"))),
    };
    let rational = betti_table_with(ideal, &ctx.budget, RankRoute::RationalGauss)?;
    ensure!(
        table == rational,
        "{ideal}: fraction-free and rational tables differ"
    );
    let graded = table.graded();
    for d in ideal.min_degree()..=ideal.degree() {
        let gens = ideal.gens().iter().filter(|g| g.degree() == d).count() as u64;
        let beta = graded.get(&(0, d)).copied().unwrap_or(0);
        ensure!(
            gens == beta,
            "{ideal}: beta_0,{d} = {beta} but {gens} generators"
        );
    }
    let reg = table.regularity().expect("nonzero ideal");
    ensure!(reg >= ideal.degree(), "{ideal}: oracle reg {reg} below deg");
    Ok(Outcome::Pass)
}

fn check_oracle_stable_ek(instance: &[MonomialIdeal], ctx: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    if !is_stable(ideal)? {
        return Ok(Outcome::NotApplicable);
    }
    let oracle = oracle_or_skip!(ctx, ideal);
    let ek = reg_stable_ek(ideal)?;
    ensure!(
        oracle == ek && ek == ideal.degree(),
        "{ideal}: oracle {oracle}, EK {ek}"
    );
    Ok(Outcome::Pass)
}

fn check_serialization(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
    let ideal = single(instance);
    let text = ideal_to_file_string(ideal);
    let back = parse_ideal(&text)?;
    ensure!(&back == ideal, "file round trip of {ideal} gave {back}");
    let json = ideal_to_json(ideal);
    let reparsed: serde_json::Value =
        serde_json::from_str(&json.to_string()).map_err(|e| Error::Internal(e.to_string()))?;
    let back = ideal_from_json(&reparsed)?;
    ensure!(&back == ideal, "JSON round trip of {ideal} gave {back}");
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(properties: &[&str], count: usize) -> VerifyConfig {
        VerifyConfig {
            count,
            properties: properties.iter().map(|s| s.to_string()).collect(),
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn property_names_are_unique() {
        let names: BTreeSet<_> = PROPERTIES.iter().map(|p| p.name).collect();
        assert_eq!(names.len(), PROPERTIES.len());
    }

    #[test]
    fn unknown_property_rejected() {
        assert!(matches!(
            run_verify(&small_config(&["nope"], 1)),
            Err(Error::UnknownProperty(_))
        ));
    }

    #[test]
    fn incompatible_kind_rejected() {
        let config = VerifyConfig {
            kind: Some(InstanceKind::RandomMonomial),
            ..small_config(&["stable-above-reg"], 5)
        };
        assert!(matches!(run_verify(&config), Err(Error::Config(_))));
    }

    #[test]
    fn stable_above_reg_on_artinian_kind() {
        let config = VerifyConfig {
            kind: Some(InstanceKind::Artinian),
            ..small_config(&["stable-above-reg", "artinian-regularity"], 20)
        };
        let report = run_verify(&config).unwrap();
        assert!(report.ok(), "{report:#?}");
    }

    #[test]
    fn reports_are_deterministic() {
        let config = small_config(&["borel-characterizations", "triple-agreement"], 25);
        let a = serde_json::to_string(&run_verify(&config).unwrap()).unwrap();
        let b = serde_json::to_string(&run_verify(&config).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn instance_draws_are_reproducible() {
        let p = find_property("ordered-ass-route").unwrap();
        let config = VerifyConfig::default();
        for index in [0, 7, 31] {
            assert_eq!(
                draw(p, &config, index).unwrap().1,
                draw(p, &config, index).unwrap().1
            );
        }
    }

    #[test]
    fn replay_runs_a_single_instance() {
        let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1]]);
        let out = replay(
            "triple-agreement",
            std::slice::from_ref(&i),
            &OracleBudget::default(),
        )
        .unwrap();
        assert_eq!(out, Outcome::Pass);
        assert!(replay("intersect-membership", &[i], &OracleBudget::default()).is_err());
    }

    fn broken_truncate(ideal: &MonomialIdeal, e: u32) -> MonomialIdeal {
        // forgets the generators already above degree e
        let kept: Vec<Monomial> = ideal
            .truncate(e)
            .gens()
            .iter()
            .filter(|g| g.degree() == e)
            .cloned()
            .collect();
        MonomialIdeal::minimalize(ideal.ring().clone(), kept)
    }

    fn tampered_check(instance: &[MonomialIdeal], _: &Ctx) -> Result<Outcome> {
        truncate_hilbert_with(single(instance), broken_truncate)
    }

    #[test]
    fn tampered_truncation_is_caught_with_a_replayable_dump() {
        let tampered = Property {
            name: "truncate-hilbert",
            description: "",
            shape: Shape::Single(ANY),
            need: Need::Any,
            check: tampered_check,
        };
        let config = VerifyConfig {
            count: 50,
            ..VerifyConfig::default()
        };
        let report = run_property(&tampered, &config, &Ctx::new(config.budget));
        assert!(report.failed > 0);
        let dump = &report.failures[0];
        assert_eq!(
            dump.replay,
            "borelreg verify --property truncate-hilbert --replay instance-0.txt"
        );
        let ideal = parse_ideal(&dump.files[0]).unwrap();
        // the dumped instance fails the tampered check and passes the real one
        assert!(matches!(
            tampered_check(std::slice::from_ref(&ideal), &Ctx::new(config.budget)).unwrap(),
            Outcome::Fail(_)
        ));
        assert_eq!(
            replay("truncate-hilbert", &[ideal], &config.budget).unwrap(),
            Outcome::Pass
        );
    }

    #[test]
    fn failures_carry_replay_dumps() {
        let dump = replay_command("extension-invariance", 2);
        assert_eq!(dump, "borelreg verify --property extension-invariance --replay instance-0.txt instance-1.txt");
    }
}
