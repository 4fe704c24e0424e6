//! Seeded random instances.
//!
//! Every instance stream comes from ChaCha8 (rand_chacha), keyed by
//! `ChaCha8Rng::seed_from_u64(seed)` and split with `set_stream(stream)`,
//! so instance `k` of a run can be regenerated on its own and independent
//! streams can be consumed in parallel.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ass::Permutation;
use crate::borel::{borel_closure, is_borel_type_star, is_strongly_stable};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{Monomial, RingContext};

pub type InstanceRng = ChaCha8Rng;

/// Random source for stream `stream` of the run keyed by `seed`.
pub fn instance_rng(seed: u64, stream: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Strongly stable: the Borel closure of one or two random monomials.
    BorelClosure,
    /// A pure power of every variable plus a few random monomials.
    Artinian,
    /// One to four random monomials, no predicate.
    RandomMonomial,
    /// Structured random candidates kept only if they are of Borel type.
    BorelTypeFiltered,
    /// Sum of two or three Borel type instances.
    SumOfBorelType,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 5] = [
        InstanceKind::BorelClosure,
        InstanceKind::Artinian,
        InstanceKind::RandomMonomial,
        InstanceKind::BorelTypeFiltered,
        InstanceKind::SumOfBorelType,
    ];

    pub const BOREL_TYPE: [InstanceKind; 4] = [
        InstanceKind::BorelClosure,
        InstanceKind::Artinian,
        InstanceKind::BorelTypeFiltered,
        InstanceKind::SumOfBorelType,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::BorelClosure => "borel_closure",
            InstanceKind::Artinian => "artinian",
            InstanceKind::RandomMonomial => "random_monomial",
            InstanceKind::BorelTypeFiltered => "borel_type_filtered",
            InstanceKind::SumOfBorelType => "sum_of_borel_type",
        }
    }

    pub fn is_borel_type(self) -> bool {
        self != InstanceKind::RandomMonomial
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown instance kind `{s}`")))
    }
}

/// Variable count and generator degree ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub n_range: RangeInclusive<usize>,
    pub deg_range: RangeInclusive<u32>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_range: 2..=4,
            deg_range: 1..=4,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_range.is_empty() || *self.n_range.start() == 0 {
            return Err(Error::Config(format!(
                "bad variable range {:?}",
                self.n_range
            )));
        }
        if self.deg_range.is_empty() || *self.deg_range.start() == 0 {
            return Err(Error::Config(format!(
                "bad degree range {:?}",
                self.deg_range
            )));
        }
        Ok(())
    }

    fn ring(&self, rng: &mut InstanceRng) -> Arc<RingContext> {
        let n = rng.random_range(self.n_range.clone());
        Arc::new(RingContext::new(n).expect("n >= 1"))
    }
}

/// Retry budget for rejection sampling.
const MAX_RETRIES: usize = 1000;

/// Random monomial of degree in `degrees`, supported on `x_1..x_vars`.
pub fn random_monomial(
    nvars: usize,
    vars: usize,
    degrees: RangeInclusive<u32>,
    rng: &mut InstanceRng,
) -> Monomial {
    let d = rng.random_range(degrees);
    let support_size = rng.random_range(1..=vars.min(d as usize));
    let mut pool: Vec<usize> = (1..=vars).collect();
    pool.shuffle(rng);
    let chosen = &pool[..support_size];
    let mut exps = vec![0u32; nvars];
    for &v in chosen {
        exps[v - 1] = 1;
    }
    for _ in 0..d as usize - support_size {
        let v = chosen[rng.random_range(0..support_size)];
        exps[v - 1] += 1;
    }
    Monomial::new(exps)
}

fn random_monomials(
    ring: &Arc<RingContext>,
    vars: usize,
    count: RangeInclusive<usize>,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> Vec<Monomial> {
    let k = rng.random_range(count);
    (0..k)
        .map(|_| random_monomial(ring.nvars(), vars, params.deg_range.clone(), rng))
        .collect()
}

fn closure_instance(
    ring: Arc<RingContext>,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> MonomialIdeal {
    let n = ring.nvars();
    let seed = random_monomials(&ring, n, 1..=2, params, rng);
    borel_closure(ring, &seed)
}

/// Pure powers of `x_1..x_vars` plus up to two random monomials in those
/// variables.
fn prefix_artinian(
    ring: &Arc<RingContext>,
    vars: usize,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> MonomialIdeal {
    let n = ring.nvars();
    let top = *params.deg_range.end();
    let mut gens: Vec<Monomial> = (1..=vars)
        .map(|i| Monomial::pure_power(n, i, rng.random_range(1..=top)))
        .collect();
    gens.extend(random_monomials(ring, vars, 0..=2, params, rng));
    MonomialIdeal::minimalize(ring.clone(), gens)
}

fn filtered_instance(
    ring: Arc<RingContext>,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> Result<MonomialIdeal> {
    let n = ring.nvars();
    for _ in 0..MAX_RETRIES {
        let vars = rng.random_range(1..=n);
        let mut candidate = prefix_artinian(&ring, vars, params, rng);
        if rng.random_bool(0.5) {
            candidate = candidate.sum(&closure_instance(ring.clone(), params, rng));
        }
        let extra_vars = rng.random_range(vars..=n);
        let extra = random_monomials(&ring, extra_vars, 0..=2, params, rng);
        candidate = candidate.sum(&MonomialIdeal::minimalize(ring.clone(), extra));
        if candidate.is_proper_nonzero() && is_borel_type_star(&candidate)?.verdict {
            return Ok(candidate);
        }
    }
    Err(Error::Config(format!(
        "no Borel type candidate within {MAX_RETRIES} retries"
    )))
}

fn borel_part(
    ring: Arc<RingContext>,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> Result<MonomialIdeal> {
    match rng.random_range(0..3) {
        0 => Ok(closure_instance(ring, params, rng)),
        1 => {
            let n = ring.nvars();
            Ok(prefix_artinian(&ring, n, params, rng))
        }
        _ => filtered_instance(ring, params, rng),
    }
}

/// Two or three Borel type ideals in one ring.
pub fn generate_borel_parts(
    params: &GenParams,
    rng: &mut InstanceRng,
) -> Result<Vec<MonomialIdeal>> {
    params.validate()?;
    let ring = params.ring(rng);
    let count = rng.random_range(2..=3);
    (0..count)
        .map(|_| borel_part(ring.clone(), params, rng))
        .collect()
}

fn check(kind: InstanceKind, ideal: &MonomialIdeal, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "generated {kind} instance {ideal} fails its predicate"
        )))
    }
}

pub fn generate(
    kind: InstanceKind,
    params: &GenParams,
    rng: &mut InstanceRng,
) -> Result<MonomialIdeal> {
    params.validate()?;
    let ideal = match kind {
        InstanceKind::BorelClosure => {
            let ring = params.ring(rng);
            let ideal = closure_instance(ring, params, rng);
            check(kind, &ideal, is_strongly_stable(&ideal)?)?;
            ideal
        }
        InstanceKind::Artinian => {
            let ring = params.ring(rng);
            let n = ring.nvars();
            let ideal = prefix_artinian(&ring, n, params, rng);
            check(kind, &ideal, ideal.is_artinian())?;
            ideal
        }
        InstanceKind::RandomMonomial => {
            let ring = params.ring(rng);
            let n = ring.nvars();
            let gens = random_monomials(&ring, n, 1..=4, params, rng);
            MonomialIdeal::minimalize(ring, gens)
        }
        InstanceKind::BorelTypeFiltered => {
            let ring = params.ring(rng);
            filtered_instance(ring, params, rng)?
        }
        InstanceKind::SumOfBorelType => {
            let parts = generate_borel_parts(params, rng)?;
            let sum = parts[1..].iter().fold(parts[0].clone(), |a, p| a.sum(p));
            check(kind, &sum, is_borel_type_star(&sum)?.verdict)?;
            sum
        }
    };
    if kind.is_borel_type() {
        check(kind, &ideal, is_borel_type_star(&ideal)?.verdict)?;
    }
    check(
        kind,
        &ideal,
        ideal.is_proper_nonzero() && ideal.degree() <= *params.deg_range.end(),
    )?;
    Ok(ideal)
}

pub fn random_permutation(n: usize, rng: &mut InstanceRng) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_satisfy_predicates() {
        let params = GenParams::default();
        for (s, kind) in InstanceKind::ALL.into_iter().enumerate() {
            let mut rng = instance_rng(7, s as u64);
            for _ in 0..30 {
                let i = generate(kind, &params, &mut rng).unwrap();
                assert!(i.is_proper_nonzero());
                assert!(params.n_range.contains(&i.nvars()));
                assert!(i.degree() <= 4);
                if kind.is_borel_type() {
                    assert!(is_borel_type_star(&i).unwrap().verdict, "{kind}: {i}");
                }
                if kind == InstanceKind::Artinian {
                    assert!(i.is_artinian());
                }
                if kind == InstanceKind::BorelClosure {
                    assert!(is_strongly_stable(&i).unwrap());
                }
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let params = GenParams::default();
        let a: Vec<_> = (0..5)
            .map(|k| {
                generate(
                    InstanceKind::BorelTypeFiltered,
                    &params,
                    &mut instance_rng(3, k),
                )
                .unwrap()
            })
            .collect();
        let b: Vec<_> = (0..5)
            .rev()
            .map(|k| {
                generate(
                    InstanceKind::BorelTypeFiltered,
                    &params,
                    &mut instance_rng(3, k),
                )
                .unwrap()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn artinian_two_variables_exponents() {
        let ring = Arc::new(RingContext::new(2).unwrap());
        let i = MonomialIdeal::minimalize(
            ring,
            [Monomial::pure_power(2, 1, 2), Monomial::pure_power(2, 2, 3)],
        );
        assert_eq!(i, MonomialIdeal::from_exponents(2, &[&[2, 0], &[0, 3]]));
        assert!(i.is_artinian());
    }

    #[test]
    fn kind_names_parse() {
        for k in InstanceKind::ALL {
            assert_eq!(k.name().parse::<InstanceKind>().unwrap(), k);
        }
        assert_eq!(
            "borel-closure".parse::<InstanceKind>().unwrap(),
            InstanceKind::BorelClosure
        );
        assert!("nope".parse::<InstanceKind>().is_err());
    }

    #[test]
    fn bad_ranges_rejected() {
        let params = GenParams {
            n_range: 0..=2,
            deg_range: 1..=2,
        };
        assert!(generate(InstanceKind::Artinian, &params, &mut instance_rng(0, 0)).is_err());
    }
}
