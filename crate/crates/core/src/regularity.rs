//! Castelnuovo-Mumford regularity by minimal stable truncation, by the
//! artinian shortcut, by the chain formula and by the Betti oracle, with a
//! dispatcher that cross-checks whatever it runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::ass::{associated_primes, renumber};
use crate::betti::{reg_oracle, OracleBudget, COEFFICIENTS};
use crate::borel::{is_borel_type_star, is_stable};
use crate::chain::{build_chain, reg_via_chain};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Chain,
    Truncation,
    Artinian,
    Oracle,
    Renumbered,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Chain => "chain",
            Method::Truncation => "truncation",
            Method::Artinian => "artinian",
            Method::Oracle => "oracle",
            Method::Renumbered => "renumbered",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub value: u32,
    pub method: Method,
    /// Value found by every method that ran.
    pub agreement: BTreeMap<Method, u32>,
    /// `n * (deg(I) - 1) + 1`.
    pub bound: u32,
    /// Present when the Betti oracle contributed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<&'static str>,
}

fn require_borel_type(ideal: &MonomialIdeal) -> Result<()> {
    match is_borel_type_star(ideal)?.witness {
        Some(w) => Err(Error::NotBorelType(w)),
        None => Ok(()),
    }
}

/// Least `e` in `[lo, hi]` with `I_{≥e}` stable, by upward linear search.
pub fn min_stable_truncation(ideal: &MonomialIdeal, lo: u32, hi: u32) -> Result<Option<u32>> {
    ideal.require_proper_nonzero("min_stable_truncation")?;
    for e in lo..=hi {
        if is_stable(&ideal.truncate(e))? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// `reg(I) = min { e ≥ deg(I) : I_{≥e} is stable }` for Borel type `I`.
///
/// The minimum starts at `deg(I)`: below that a stable ideal with
/// generators in several degrees would report a value under its regularity.
pub fn reg_via_truncation(ideal: &MonomialIdeal) -> Result<u32> {
    ideal.require_proper_nonzero("reg_via_truncation")?;
    require_borel_type(ideal)?;
    let bound = ideal.regularity_bound();
    min_stable_truncation(ideal, ideal.degree(), bound)?.ok_or_else(|| {
        Error::Internal(format!(
            "no stable truncation of the Borel type ideal {ideal} in degrees {}..={bound}",
            ideal.degree()
        ))
    })
}

/// `reg(I) = s(S/I) + 1` for artinian `I`.
pub fn reg_artinian(ideal: &MonomialIdeal) -> Result<u32> {
    ideal.require_proper_nonzero("reg_artinian")?;
    if let Some(i) = ideal.first_missing_pure_power() {
        return Err(Error::NotArtinian(i));
    }
    let bound = ideal.regularity_bound();
    if ideal.hilbert_quotient(bound) > 0 {
        return Err(Error::Internal(format!(
            "S/I is nonzero in degree {bound} for artinian {ideal}"
        )));
    }
    let top = (0..bound)
        .rev()
        .find(|&d| ideal.hilbert_quotient(d) > 0)
        .expect("HF(S/I, 0) = 1 for a proper ideal");
    Ok(top + 1)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AutoOptions {
    pub budget: OracleBudget,
    /// Also run the Betti oracle when it is feasible.
    pub confirm_with_oracle: bool,
}

fn settle(
    ideal: &MonomialIdeal,
    method: Method,
    agreement: BTreeMap<Method, u32>,
) -> Result<RegularityReport> {
    let mut values = agreement.values();
    let value = *values.next().expect("at least one method ran");
    if agreement.values().any(|&v| v != value) {
        let mut dump = format!("regularity methods disagree on {ideal}: {agreement:?}");
        if let Ok(chain) = build_chain(ideal) {
            for s in &chain.stages {
                dump.push_str(&format!(
                    "\n  stage {}: n_l={} J={} J_sat={} s={:?}",
                    s.index, s.n_l, s.j, s.j_sat, s.s_value
                ));
            }
        }
        let bound = ideal.regularity_bound();
        for e in ideal.degree()..=bound {
            if let Ok(Some(w)) = crate::borel::stability_witness(&ideal.truncate(e)) {
                dump.push_str(&format!("\n  I_>={e} unstable: {w}"));
            }
        }
        if let Ok(table) = crate::betti::betti_table(ideal, &OracleBudget::default()) {
            dump.push('\n');
            dump.push_str(&table.to_macaulay_string());
        }
        return Err(Error::Internal(dump));
    }
    let coefficients = agreement
        .contains_key(&Method::Oracle)
        .then_some(COEFFICIENTS);
    Ok(RegularityReport {
        value,
        method,
        agreement,
        bound: ideal.regularity_bound(),
        coefficients,
    })
}

fn maybe_oracle(
    ideal: &MonomialIdeal,
    options: &AutoOptions,
    agreement: &mut BTreeMap<Method, u32>,
) -> Result<()> {
    if options.confirm_with_oracle {
        match reg_oracle(ideal, &options.budget) {
            Ok(v) => {
                agreement.insert(Method::Oracle, v);
            }
            Err(Error::OracleInfeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Picks the strongest applicable route:
/// artinian, then Borel type (chain and truncation), then totally ordered
/// associated primes (renumber and use the Borel type routes), and the
/// Betti oracle for everything else.
pub fn reg_auto(ideal: &MonomialIdeal, options: &AutoOptions) -> Result<RegularityReport> {
    ideal.require_proper_nonzero("reg_auto")?;
    let mut agreement = BTreeMap::new();
    if ideal.is_artinian() {
        agreement.insert(Method::Artinian, reg_artinian(ideal)?);
        agreement.insert(Method::Chain, reg_via_chain(ideal)?);
        maybe_oracle(ideal, options, &mut agreement)?;
        return settle(ideal, Method::Artinian, agreement);
    }
    if is_borel_type_star(ideal)?.verdict {
        agreement.insert(Method::Chain, reg_via_chain(ideal)?);
        agreement.insert(Method::Truncation, reg_via_truncation(ideal)?);
        maybe_oracle(ideal, options, &mut agreement)?;
        return settle(ideal, Method::Chain, agreement);
    }
    let ass = associated_primes(ideal)?;
    if let Some(perm) = &ass.renumbering {
        let renumbered = renumber(ideal, perm)?;
        if let Some(w) = is_borel_type_star(&renumbered)?.witness {
            return Err(Error::Internal(format!(
                "{ideal} has totally ordered associated primes but its renumbering {renumbered} is not of Borel type: {w}"
            )));
        }
        agreement.insert(Method::Chain, reg_via_chain(&renumbered)?);
        agreement.insert(Method::Truncation, reg_via_truncation(&renumbered)?);
        maybe_oracle(ideal, options, &mut agreement)?;
        return settle(ideal, Method::Renumbered, agreement);
    }
    agreement.insert(Method::Oracle, reg_oracle(ideal, &options.budget)?);
    settle(ideal, Method::Oracle, agreement)
}

/// Runs exactly one method.
pub fn reg_with_method(
    ideal: &MonomialIdeal,
    method: Method,
    budget: &OracleBudget,
) -> Result<RegularityReport> {
    ideal.require_proper_nonzero("reg_with_method")?;
    let value = match method {
        Method::Chain => reg_via_chain(ideal)?,
        Method::Truncation => reg_via_truncation(ideal)?,
        Method::Artinian => reg_artinian(ideal)?,
        Method::Oracle => reg_oracle(ideal, budget)?,
        Method::Renumbered => {
            let ass = associated_primes(ideal)?;
            let perm = ass.renumbering.ok_or_else(|| {
                Error::Config(format!(
                    "associated primes of {ideal} are not totally ordered"
                ))
            })?;
            reg_via_chain(&renumber(ideal, &perm)?)?
        }
    };
    settle(ideal, method, BTreeMap::from([(method, value)]))
}

/// Outcome of checking `reg(I_1 + ... + I_m) ≤ max reg(I_k)`.
#[derive(Clone, Debug, Serialize)]
pub struct SumBoundReport {
    pub part_regularities: Vec<u32>,
    pub sum: Vec<String>,
    pub sum_borel_type: bool,
    pub sum_regularity: Option<u32>,
    pub max_part_regularity: u32,
    pub bound_holds: bool,
    /// `(Σ I_k)_{≥e} = Σ (I_k)_{≥e}` at `e = max reg(I_k)`.
    pub truncation_decomposes: bool,
    pub truncation_stable: bool,
}

impl SumBoundReport {
    pub fn holds(&self) -> bool {
        self.sum_borel_type
            && self.bound_holds
            && self.truncation_decomposes
            && self.truncation_stable
    }
}

fn borel_regularity(ideal: &MonomialIdeal) -> Result<u32> {
    let chain = reg_via_chain(ideal)?;
    let truncation = reg_via_truncation(ideal)?;
    if chain != truncation {
        return Err(Error::Internal(format!(
            "chain gives {chain} but truncation gives {truncation} for {ideal}"
        )));
    }
    Ok(chain)
}

pub fn check_sum_bound(parts: &[MonomialIdeal]) -> Result<SumBoundReport> {
    let Some(first) = parts.first() else {
        return Err(Error::Config(
            "check_sum_bound needs at least one part".into(),
        ));
    };
    let part_regularities = parts
        .iter()
        .map(|p| {
            p.require_proper_nonzero("check_sum_bound")?;
            require_borel_type(p)?;
            borel_regularity(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = parts[1..].iter().fold(first.clone(), |acc, p| acc.sum(p));
    let sum_borel_type = is_borel_type_star(&sum)?.verdict;
    let sum_regularity = if sum_borel_type {
        Some(borel_regularity(&sum)?)
    } else {
        None
    };
    let e = *part_regularities.iter().max().expect("nonempty");
    let truncated_sum = sum.truncate(e);
    let sum_of_truncations = parts[1..]
        .iter()
        .fold(first.truncate(e), |acc, p| acc.sum(&p.truncate(e)));
    Ok(SumBoundReport {
        part_regularities,
        sum: sum.gen_strings(),
        sum_borel_type,
        sum_regularity,
        max_part_regularity: e,
        bound_holds: sum_regularity.is_some_and(|r| r <= e),
        truncation_decomposes: truncated_sum == sum_of_truncations,
        truncation_stable: is_stable(&truncated_sum)?,
    })
}
