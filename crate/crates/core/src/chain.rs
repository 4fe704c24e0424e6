//! The sequential chain `I = I_0 ⊂ I_1 ⊂ ... ⊂ I_r = S` of a monomial ideal,
//! where `I_{l+1} = (I_l : x_{n_l}^∞)` and `n_l = m(I_l)`.

use serde::Serialize;

use crate::borel::is_borel_type_star;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::binomial;

/// Top nonzero degree of the finite length module `J_sat / J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SValue {
    Top(u32),
    /// `J_sat = J`.
    ZeroModule,
}

impl SValue {
    pub fn top(self) -> Option<u32> {
        match self {
            SValue::Top(s) => Some(s),
            SValue::ZeroModule => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainStage {
    pub index: usize,
    /// `I_l` in the full ring.
    pub ideal: MonomialIdeal,
    /// `n_l = m(I_l)`.
    pub n_l: usize,
    /// `J_l`: the generators of `I_l` in `K[x_1, ..., x_{n_l}]`.
    pub j: MonomialIdeal,
    /// Saturation of `J_l` by the maximal ideal of `K[x_1, ..., x_{n_l}]`.
    pub j_sat: MonomialIdeal,
    pub s_value: SValue,
}

#[derive(Clone, Debug)]
pub struct SequentialChain {
    pub stages: Vec<ChainStage>,
    /// Whether the input passed the Borel type test; when it did, each
    /// `J_sat` was computed two ways and cross-checked.
    pub borel_type: bool,
    /// Degree ceiling used when scanning for s-values.
    pub degree_ceiling: u32,
}

impl SequentialChain {
    /// Chain length `r`.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn input(&self) -> &MonomialIdeal {
        &self.stages[0].ideal
    }

    /// `I_{l+1}`; the improper ideal after the last stage.
    pub fn next_ideal(&self, l: usize) -> MonomialIdeal {
        match self.stages.get(l + 1) {
            Some(stage) => stage.ideal.clone(),
            None => MonomialIdeal::unit(self.input().ring().clone()),
        }
    }

    /// `max_l s(J_l^sat / J_l) + 1`, skipping zero-module stages.
    pub fn formula_regularity(&self) -> Result<u32> {
        self.stages
            .iter()
            .filter_map(|s| s.s_value.top())
            .max()
            .map(|s| s + 1)
            .ok_or_else(|| {
                Error::Internal(format!(
                    "every chain stage of {} is a zero module",
                    self.input()
                ))
            })
    }
}

/// Degree ceiling that provably bounds `s(J^sat / J)` for any monomial `J`:
/// a monomial in `J^sat \ J` has every exponent below the largest exponent
/// of that variable in `G(J)`.
fn box_ceiling(j: &MonomialIdeal) -> u32 {
    j.exponent_box().iter().map(|&m| m.saturating_sub(1)).sum()
}

/// Largest `d ≤ ceiling` where `HF(S/J, d) > HF(S/J_sat, d)`, scanning down.
pub fn stage_s_value(stage: &ChainStage, ceiling: u32) -> Result<SValue> {
    s_value(&stage.j, &stage.j_sat, ceiling)
}

fn s_value(j: &MonomialIdeal, j_sat: &MonomialIdeal, ceiling: u32) -> Result<SValue> {
    if j == j_sat {
        return Ok(SValue::ZeroModule);
    }
    if ceiling < j.degree() {
        return Err(Error::Internal(format!(
            "degree ceiling {ceiling} is below the generator degree of {j}"
        )));
    }
    for d in (0..=ceiling).rev() {
        if j.hilbert_quotient(d) > j_sat.hilbert_quotient(d) {
            return Ok(SValue::Top(d));
        }
    }
    Err(Error::Internal(format!(
        "{j} differs from its saturation {j_sat} but no degree <= {ceiling} shows it"
    )))
}

pub fn build_chain(ideal: &MonomialIdeal) -> Result<SequentialChain> {
    ideal.require_proper_nonzero("build_chain")?;
    let borel_type = is_borel_type_star(ideal)?.verdict;
    let bound = ideal.regularity_bound();
    let mut stages = Vec::new();
    let mut current = ideal.clone();
    let mut ceiling_used = 0;
    loop {
        let n_l = current.max_var();
        let next = current.saturate_variable(n_l)?;
        let j = current.restrict_ring(n_l)?;
        let direct = j.saturate_prefix_prime(n_l)?;
        let j_sat = if borel_type {
            // J_l^sat = I_{l+1} ∩ S_l
            let restricted = next.restrict_ring(n_l)?;
            if restricted != direct {
                return Err(Error::Internal(format!(
                    "stage {}: I_(l+1) restricted gives {restricted}, direct saturation gives {direct}",
                    stages.len()
                )));
            }
            if restricted == j {
                return Err(Error::Internal(format!(
                    "stage {}: saturation of {j} is not strict on Borel type input",
                    stages.len()
                )));
            }
            restricted
        } else {
            direct
        };
        let ceiling = if borel_type {
            bound
        } else {
            box_ceiling(&j).max(j.degree())
        };
        ceiling_used = ceiling_used.max(ceiling);
        let s_value = s_value(&j, &j_sat, ceiling)?;
        stages.push(ChainStage {
            index: stages.len(),
            ideal: current,
            n_l,
            j,
            j_sat,
            s_value,
        });
        if next.is_improper() {
            break;
        }
        current = next;
    }
    debug_assert!(stages.windows(2).all(|w| w[0].n_l > w[1].n_l));
    Ok(SequentialChain {
        stages,
        borel_type,
        degree_ceiling: ceiling_used,
    })
}

/// Regularity of a Borel type ideal from the chain formula.
pub fn reg_via_chain(ideal: &MonomialIdeal) -> Result<u32> {
    ideal.require_proper_nonzero("reg_via_chain")?;
    let evidence = is_borel_type_star(ideal)?;
    if let Some(w) = evidence.witness {
        return Err(Error::NotBorelType(w));
    }
    build_chain(ideal)?.formula_regularity()
}

#[derive(Clone, Debug, Serialize)]
pub struct Formula2Row {
    pub stage: usize,
    pub degree: u32,
    pub lhs: i64,
    pub rhs: i64,
}

impl Formula2Row {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Formula2Report {
    pub rows: Vec<Formula2Row>,
}

impl Formula2Report {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(Formula2Row::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Formula2Row> {
        self.rows.iter().filter(|r| !r.holds())
    }
}

/// Hilbert function form of `I_{l+1}/I_l ≅ (J_l^sat/J_l)[x_{n_l+1}, ..., x_n]`:
///
/// `HF(S/I_l, d) − HF(S/I_{l+1}, d) = Σ_k q_l(k)·C(d−k+e−1, e−1)` with
/// `e = n − n_l` and `q_l(k) = HF(S_l/J_l, k) − HF(S_l/J_l^sat, k)`.
pub fn check_formula2(chain: &SequentialChain, d_max: u32) -> Formula2Report {
    let n = chain.input().nvars();
    let mut rows = Vec::new();
    for (l, stage) in chain.stages.iter().enumerate() {
        let next = chain.next_ideal(l);
        let extra = (n - stage.n_l) as u64;
        let q: Vec<i64> = (0..=d_max)
            .map(|k| stage.j.hilbert_quotient(k) as i64 - stage.j_sat.hilbert_quotient(k) as i64)
            .collect();
        for d in 0..=d_max {
            let lhs = stage.ideal.hilbert_quotient(d) as i64 - next.hilbert_quotient(d) as i64;
            let rhs = (0..=d)
                .map(|k| {
                    let weight = if extra == 0 {
                        u64::from(d == k)
                    } else {
                        binomial((d - k) as u64 + extra - 1, extra - 1)
                    };
                    q[k as usize] * weight as i64
                })
                .sum();
            rows.push(Formula2Row {
                stage: l,
                degree: d,
                lhs,
                rhs,
            });
        }
    }
    Formula2Report { rows }
}
