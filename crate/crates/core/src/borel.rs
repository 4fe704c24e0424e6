//! Stable, strongly stable and Borel type (weakly stable) ideals.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::ideal::MonomialIdeal;
use crate::monomial::{monomials_of_degree, Monomial, RingContext};

/// Why an ideal fails to be of Borel type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BorelWitness {
    /// `(I : x_j^∞) ≠ (I : (x_1, ..., x_j)^∞)`.
    Saturation { j: usize },
    /// `g / x_i^q ∉ (I : x_j^∞)` for a minimal generator `g`.
    Exchange {
        generator: String,
        #[serde(skip)]
        monomial: Monomial,
        i: usize,
        q: u32,
        j: usize,
    },
}

impl fmt::Display for BorelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorelWitness::Saturation { j } => {
                write!(f, "(I : x{j}^inf) != (I : (x1..x{j})^inf) at j={j}")
            }
            BorelWitness::Exchange {
                generator, i, q, j, ..
            } => write!(
                f,
                "no power of x{j} moves {generator}/x{i}^{q} into I (u={generator}, i={i}, q={q}, j={j})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorelTypeEvidence {
    pub verdict: bool,
    pub witness: Option<BorelWitness>,
}

impl BorelTypeEvidence {
    fn pass() -> Self {
        BorelTypeEvidence {
            verdict: true,
            witness: None,
        }
    }

    fn fail(witness: BorelWitness) -> Self {
        BorelTypeEvidence {
            verdict: false,
            witness: Some(witness),
        }
    }
}

/// A generator `g` and index `i < m(g)` with `x_i·g/x_{m(g)} ∉ I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityWitness {
    pub generator: String,
    #[serde(skip)]
    pub monomial: Monomial,
    pub i: usize,
}

impl fmt::Display for StabilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x{}*{}/x{} is not in I",
            self.i,
            self.generator,
            self.monomial.max_var()
        )
    }
}

fn stable_move(u: &Monomial, i: usize) -> Monomial {
    let m = u.max_var();
    u.div_var(m, 1).expect("x_m divides u").mul_var(i)
}

/// First violation of the stable exchange `x_i·u/x_{m(u)} ∈ I`, checked on
/// minimal generators. `None` means the ideal is stable.
pub fn stability_witness(ideal: &MonomialIdeal) -> Result<Option<StabilityWitness>> {
    ideal.require_proper_nonzero("is_stable")?;
    for g in ideal.gens() {
        for i in 1..g.max_var() {
            if !ideal.contains(&stable_move(g, i)) {
                return Ok(Some(StabilityWitness {
                    generator: g.display(ideal.ring()).to_string(),
                    monomial: g.clone(),
                    i,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_stable(ideal: &MonomialIdeal) -> Result<bool> {
    Ok(stability_witness(ideal)?.is_none())
}

/// Stability checked on every monomial of `I` up to `max_degree`, not only
/// on the generators.
pub fn is_stable_exhaustive(ideal: &MonomialIdeal, max_degree: u32) -> Result<bool> {
    ideal.require_proper_nonzero("is_stable_exhaustive")?;
    for d in 1..=max_degree {
        for u in monomials_of_degree(ideal.nvars(), d) {
            if ideal.contains(&u) && (1..u.max_var()).any(|i| !ideal.contains(&stable_move(&u, i)))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_strongly_stable(ideal: &MonomialIdeal) -> Result<bool> {
    ideal.require_proper_nonzero("is_strongly_stable")?;
    Ok(ideal.gens().iter().all(|g| {
        g.support().all(|i| {
            (1..i).all(|j| {
                let moved = g.div_var(i, 1).expect("x_i divides g").mul_var(j);
                ideal.contains(&moved)
            })
        })
    }))
}

/// Borel type via `(I : x_j^∞) = (I : (x_1, ..., x_j)^∞)` for every `j`.
pub fn is_borel_type_star(ideal: &MonomialIdeal) -> Result<BorelTypeEvidence> {
    ideal.require_proper_nonzero("is_borel_type_star")?;
    for j in 1..=ideal.nvars() {
        if ideal.saturate_variable(j)? != ideal.saturate_prefix_prime(j)? {
            return Ok(BorelTypeEvidence::fail(BorelWitness::Saturation { j }));
        }
    }
    Ok(BorelTypeEvidence::pass())
}

/// Borel type via the exchange condition: for `u ∈ I`, `j < i` and
/// `x_i^q | u` some `x_j^t·u/x_i^q` lies in `I`.
///
/// Only minimal generators are tested. For `u = g·w` split `q = q1 + q2` with
/// `x_i^{q1} | g` and `x_i^{q2} | w`; if `q1 > 0` the generator case puts
/// `g/x_i^{q1}` in `(I : x_j^∞)` and so its multiple `u/x_i^q`, and if
/// `q1 = 0` then `u/x_i^q` is a multiple of `g ∈ I`. The existential over `t`
/// is the membership `g/x_i^q ∈ (I : x_j^∞)`.
pub fn is_borel_type_exchange(ideal: &MonomialIdeal) -> Result<BorelTypeEvidence> {
    ideal.require_proper_nonzero("is_borel_type_exchange")?;
    let saturations = (1..=ideal.nvars())
        .map(|j| ideal.saturate_variable(j))
        .collect::<Result<Vec<_>>>()?;
    for g in ideal.gens() {
        for i in g.support() {
            for q in (1..=g.exponent(i)).rev() {
                let lowered = g.div_var(i, q).expect("x_i^q divides g");
                for j in 1..i {
                    if !saturations[j - 1].contains(&lowered) {
                        return Ok(BorelTypeEvidence::fail(BorelWitness::Exchange {
                            generator: g.display(ideal.ring()).to_string(),
                            monomial: g.clone(),
                            i,
                            q,
                            j,
                        }));
                    }
                }
            }
        }
    }
    Ok(BorelTypeEvidence::pass())
}

/// Replays a witness through the ideal operations; true when it really
/// refutes the Borel type property of `ideal`.
pub fn witness_refutes(ideal: &MonomialIdeal, witness: &BorelWitness) -> Result<bool> {
    match witness {
        BorelWitness::Saturation { j } => {
            Ok(ideal.saturate_variable(*j)? != ideal.saturate_prefix_prime(*j)?)
        }
        BorelWitness::Exchange {
            monomial, i, q, j, ..
        } => {
            if !ideal.contains(monomial) || j >= i {
                return Ok(false);
            }
            let Some(lowered) = monomial.div_var(*i, *q) else {
                return Ok(false);
            };
            Ok(*q > 0 && !ideal.saturate_variable(*j)?.contains(&lowered))
        }
    }
}

/// Replays a stability witness.
pub fn stability_witness_refutes(ideal: &MonomialIdeal, witness: &StabilityWitness) -> bool {
    let u = &witness.monomial;
    ideal.contains(u) && witness.i < u.max_var() && !ideal.contains(&stable_move(u, witness.i))
}

/// Smallest strongly stable ideal containing `seed`.
pub fn borel_closure(ring: Arc<RingContext>, seed: &[Monomial]) -> MonomialIdeal {
    let mut closed: BTreeSet<Monomial> = BTreeSet::new();
    let mut frontier: Vec<Monomial> = seed.to_vec();
    while let Some(u) = frontier.pop() {
        if !closed.insert(u.clone()) {
            continue;
        }
        for i in u.support().collect::<Vec<_>>() {
            for j in 1..i {
                let moved = u.div_var(i, 1).expect("x_i divides u").mul_var(j);
                if !closed.contains(&moved) {
                    frontier.push(moved);
                }
            }
        }
    }
    MonomialIdeal::minimalize(ring, closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens)
    }

    #[test]
    fn stable_examples() {
        assert!(is_stable(&ideal(2, &[&[2, 0], &[1, 1]])).unwrap());
        let w = stability_witness(&ideal(2, &[&[0, 2]])).unwrap().unwrap();
        assert_eq!((w.generator.as_str(), w.i), ("x2^2", 1));
        assert!(is_stable(&ideal(2, &[&[1, 0]])).unwrap());
        assert!(is_stable(&ideal(2, &[])).is_err());
    }

    #[test]
    fn strongly_stable_examples() {
        assert!(is_strongly_stable(&ideal(2, &[&[2, 0], &[1, 1]])).unwrap());
        assert!(!is_strongly_stable(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap());
        assert!(is_strongly_stable(&ideal(2, &[&[1, 0]])).unwrap());
    }

    #[test]
    fn star_examples() {
        assert!(
            is_borel_type_star(&ideal(2, &[&[2, 0], &[1, 1]]))
                .unwrap()
                .verdict
        );
        let e = is_borel_type_star(&ideal(2, &[&[0, 2]])).unwrap();
        assert_eq!(e.witness, Some(BorelWitness::Saturation { j: 2 }));
        assert!(
            is_borel_type_star(&ideal(2, &[&[2, 0], &[0, 3]]))
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn exchange_examples() {
        assert!(
            is_borel_type_exchange(&ideal(2, &[&[2, 0], &[1, 1]]))
                .unwrap()
                .verdict
        );
        let e = is_borel_type_exchange(&ideal(2, &[&[0, 2]])).unwrap();
        match e.witness.unwrap() {
            BorelWitness::Exchange {
                generator, i, j, q, ..
            } => {
                assert_eq!((generator.as_str(), i, q, j), ("x2^2", 2, 2, 1));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(
            is_borel_type_exchange(&ideal(3, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[1, 1, 0]]))
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn witnesses_replay() {
        let i = ideal(2, &[&[0, 2]]);
        for e in [
            is_borel_type_star(&i).unwrap(),
            is_borel_type_exchange(&i).unwrap(),
        ] {
            assert!(witness_refutes(&i, &e.witness.unwrap()).unwrap());
        }
        let s = stability_witness(&i).unwrap().unwrap();
        assert!(stability_witness_refutes(&i, &s));
    }

    #[test]
    fn closure_examples() {
        let ring = Arc::new(RingContext::new(2).unwrap());
        let c = borel_closure(ring.clone(), &[Monomial::new(vec![1, 1])]);
        assert_eq!(c, ideal(2, &[&[2, 0], &[1, 1]]));
        let c = borel_closure(ring.clone(), &[Monomial::new(vec![0, 2])]);
        assert_eq!(c, ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        let c = borel_closure(ring, &[Monomial::new(vec![3, 0])]);
        assert_eq!(c, ideal(2, &[&[3, 0]]));
        assert!(is_strongly_stable(&c).unwrap());
    }
}
