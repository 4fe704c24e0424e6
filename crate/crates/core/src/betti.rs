//! Multigraded Betti numbers of a monomial ideal from upper Koszul
//! simplicial complexes, with rational coefficients.
//!
//! For a multidegree `a`, `K^a(I)` is the complex on `supp(a)` whose faces
//! are the sets `F` with `a / x_F ∈ I`, and `β_{i,a}(I) = dim H̃_{i-1}(K^a; Q)`.
//! Only multidegrees in the lcm lattice of `G(I)` can carry Betti numbers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::env;

use rayon::prelude::*;
use serde::Serialize;

use crate::borel::is_stable;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::linalg::{rank_fraction_free, rank_gauss, Matrix};
use crate::monomial::Monomial;
use crate::{Integer, OracleInt, Rational};

/// Coefficient field label attached to every oracle output.
pub const COEFFICIENTS: &str = "QQ";

pub const ENV_MAX_GENERATORS: &str = "BORELREG_ORACLE_MAX_GENS";
pub const ENV_MAX_LATTICE: &str = "BORELREG_ORACLE_MAX_LATTICE";

/// Size limits beyond which the oracle refuses to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    pub max_generators: usize,
    pub max_lattice: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_generators: 20,
            max_lattice: 50_000,
        }
    }
}

impl OracleBudget {
    /// Defaults overridden by `BORELREG_ORACLE_MAX_GENS` and
    /// `BORELREG_ORACLE_MAX_LATTICE` when set.
    pub fn from_env() -> Result<Self> {
        let mut budget = Self::default();
        if let Some(v) = read_env(ENV_MAX_GENERATORS)? {
            budget.max_generators = v;
        }
        if let Some(v) = read_env(ENV_MAX_LATTICE)? {
            budget.max_lattice = v;
        }
        Ok(budget)
    }
}

fn read_env(key: &str) -> Result<Option<usize>> {
    match env::var(key) {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|_| {
                Error::Config(format!("{key} must be a non-negative integer, got `{v}`"))
            })
        }
        Err(_) => Ok(None),
    }
}

/// Which exact rank computation backs the homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RankRoute {
    /// Fraction-free elimination over `i64`, widened to big integers on overflow.
    #[default]
    FractionFree,
    /// Gauss-Jordan over big rationals.
    RationalGauss,
}

/// Distinct lcms of nonempty subsets of `G(I)`.
pub fn lcm_lattice(ideal: &MonomialIdeal, budget: &OracleBudget) -> Result<Vec<Monomial>> {
    ideal.require_proper_nonzero("lcm_lattice")?;
    let gens = ideal.gens();
    if gens.len() > budget.max_generators {
        return Err(Error::OracleInfeasible(format!(
            "{} generators exceed the cap of {}",
            gens.len(),
            budget.max_generators
        )));
    }
    // closing the generator set under lcm with single generators reaches
    // every subset lcm
    let mut lattice: BTreeSet<Monomial> = gens.iter().cloned().collect();
    let mut frontier: Vec<Monomial> = gens.to_vec();
    while let Some(u) = frontier.pop() {
        for g in gens {
            let l = u.lcm(g);
            if lattice.insert(l.clone()) {
                if lattice.len() > budget.max_lattice {
                    return Err(Error::OracleInfeasible(format!(
                        "lcm lattice exceeds {} elements",
                        budget.max_lattice
                    )));
                }
                frontier.push(l);
            }
        }
    }
    Ok(lattice.into_iter().collect())
}

/// Reduced homology of one upper Koszul complex.
#[derive(Clone, Debug)]
pub struct SimplicialComplexHomology {
    pub multidegree: Monomial,
    /// Variables of `supp(a)`, 1-based.
    pub vertices: Vec<usize>,
    /// `faces[s]` lists the faces with `s` vertices as bitmasks over `vertices`.
    pub faces: Vec<Vec<u32>>,
    /// `boundary_ranks[s]` is the rank of the map from `s`-vertex faces to
    /// `(s-1)`-vertex faces (entry 0 is always 0).
    pub boundary_ranks: Vec<usize>,
    /// `reduced_betti[s] = dim H̃_{s-1}`, so index 0 is `H̃_{-1}`.
    pub reduced_betti: Vec<u64>,
    pub boundary_squares_vanish: bool,
}

impl SimplicialComplexHomology {
    /// `Σ_s (-1)^s · #faces with s vertices`, the negated reduced Euler
    /// characteristic.
    pub fn face_alternating_sum(&self) -> i64 {
        alternating(self.faces.iter().map(|f| f.len() as u64))
    }

    /// `Σ_i (-1)^i β_{i,a}`.
    pub fn betti_alternating_sum(&self) -> i64 {
        alternating(self.reduced_betti.iter().copied())
    }

    pub fn euler_consistent(&self) -> bool {
        self.face_alternating_sum() == self.betti_alternating_sum()
    }

    /// `β_{i,a}`.
    pub fn betti(&self, i: usize) -> u64 {
        self.reduced_betti.get(i).copied().unwrap_or(0)
    }
}

fn alternating(values: impl Iterator<Item = u64>) -> i64 {
    values
        .enumerate()
        .map(|(s, v)| if s % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

/// Boundary map from `s`-vertex faces to `(s-1)`-vertex faces, as signed
/// entries `(row, col, ±1)`.
fn boundary_entries(upper: &[u32], lower: &[u32]) -> Vec<(usize, usize, i8)> {
    let index: HashMap<u32, usize> = lower.iter().enumerate().map(|(k, &f)| (f, k)).collect();
    let mut entries = Vec::new();
    for (col, &face) in upper.iter().enumerate() {
        let mut position = 0;
        for bit in 0..32 {
            if face & (1 << bit) == 0 {
                continue;
            }
            let sign = if position % 2 == 0 { 1 } else { -1 };
            let row = index[&(face & !(1 << bit))];
            entries.push((row, col, sign));
            position += 1;
        }
    }
    entries
}

fn boundary_ranks_over<T>(
    faces: &[Vec<u32>],
    rank: impl Fn(&Matrix<T>) -> Option<usize>,
) -> Option<(Vec<usize>, bool)>
where
    T: num_traits::Num + Clone,
{
    let maps: Vec<Matrix<T>> = (1..faces.len())
        .map(|s| {
            let entries = boundary_entries(&faces[s], &faces[s - 1]);
            Matrix::from_signs(faces[s - 1].len(), faces[s].len(), &entries)
        })
        .collect();
    let squares_vanish = maps.windows(2).all(|w| w[0].mul(&w[1]).is_zero());
    let mut ranks = vec![0];
    for m in &maps {
        ranks.push(rank(m)?);
    }
    Some((ranks, squares_vanish))
}

pub fn upper_koszul_complex(ideal: &MonomialIdeal, a: &Monomial) -> SimplicialComplexHomology {
    upper_koszul_complex_with(ideal, a, RankRoute::default())
}

pub fn upper_koszul_complex_with(
    ideal: &MonomialIdeal,
    a: &Monomial,
    route: RankRoute,
) -> SimplicialComplexHomology {
    let vertices: Vec<usize> = a.support().collect();
    let v = vertices.len();
    let mut faces: Vec<Vec<u32>> = vec![Vec::new(); v + 1];
    for mask in 0u32..(1 << v) {
        let mut u = a.clone();
        for (bit, &var) in vertices.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                u = u.div_var(var, 1).expect("vertex in support");
            }
        }
        if ideal.contains(&u) {
            faces[mask.count_ones() as usize].push(mask);
        }
    }
    // the empty face exists iff a ∈ I; drop trailing empty dimensions
    while faces.last().is_some_and(Vec::is_empty) {
        faces.pop();
    }

    let (boundary_ranks, boundary_squares_vanish) = match route {
        RankRoute::FractionFree => boundary_ranks_over::<OracleInt>(&faces, rank_fraction_free)
            .or_else(|| boundary_ranks_over::<Integer>(&faces, rank_fraction_free))
            .expect("big integers do not overflow"),
        RankRoute::RationalGauss => {
            boundary_ranks_over::<Rational>(&faces, |m| Some(rank_gauss(m))).expect("total")
        }
    };

    let reduced_betti = (0..faces.len())
        .map(|s| {
            let out = boundary_ranks[s];
            let incoming = boundary_ranks.get(s + 1).copied().unwrap_or(0);
            (faces[s].len() - out - incoming) as u64
        })
        .collect();

    SimplicialComplexHomology {
        multidegree: a.clone(),
        vertices,
        faces,
        boundary_ranks,
        reduced_betti,
        boundary_squares_vanish,
    }
}

/// Nonzero multigraded Betti numbers `β_{i,a}` of the module `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub nvars: usize,
    pub entries: BTreeMap<(usize, Monomial), u64>,
    /// Number of Koszul complexes evaluated.
    pub complexes: usize,
}

impl BettiTable {
    /// `β_{i,j} = Σ_{|a| = j} β_{i,a}`, keyed by `(i, j)`.
    pub fn graded(&self) -> BTreeMap<(usize, u32), u64> {
        let mut out = BTreeMap::new();
        for ((i, a), &b) in &self.entries {
            *out.entry((*i, a.degree())).or_insert(0) += b;
        }
        out
    }

    /// `max { j - i : β_{i,j} ≠ 0 }`.
    pub fn regularity(&self) -> Option<u32> {
        self.entries
            .keys()
            .map(|(i, a)| a.degree() as i64 - *i as i64)
            .max()
            .map(|r| r as u32)
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|(i, _)| *i).max()
    }

    /// Macaulay-style layout: columns are `i`, rows are `j - i`.
    pub fn to_macaulay_string(&self) -> String {
        let graded = self.graded();
        if graded.is_empty() {
            return String::from("(empty)\n");
        }
        let pd = self.projective_dimension().unwrap_or(0);
        let rows: BTreeSet<i64> = graded.keys().map(|(i, j)| *j as i64 - *i as i64).collect();
        let cell = |i: usize, r: i64| -> String {
            let j = r + i as i64;
            match graded.get(&(i, j as u32)) {
                Some(b) if j >= 0 => b.to_string(),
                _ => ".".to_string(),
            }
        };
        let totals: Vec<u64> = (0..=pd)
            .map(|i| {
                graded
                    .iter()
                    .filter(|((k, _), _)| *k == i)
                    .map(|(_, b)| b)
                    .sum()
            })
            .collect();
        let width = graded
            .values()
            .chain(totals.iter())
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max((pd).to_string().len());
        let label = rows
            .iter()
            .map(|r| r.to_string().len() + 1)
            .max()
            .unwrap_or(1)
            .max(6);
        let mut out = String::new();
        out.push_str(&format!("{:>label$}", ""));
        for i in 0..=pd {
            out.push_str(&format!(" {i:>width$}"));
        }
        out.push('\n');
        out.push_str(&format!("{:>label$}", "total:"));
        for t in &totals {
            out.push_str(&format!(" {t:>width$}"));
        }
        out.push('\n');
        for r in rows {
            out.push_str(&format!("{:>label$}", format!("{r}:")));
            for i in 0..=pd {
                out.push_str(&format!(" {:>width$}", cell(i, r)));
            }
            out.push('\n');
        }
        out
    }
}

/// Counters for the self-checks run alongside the table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleChecks {
    pub complexes: usize,
    pub boundary_squares_vanish: usize,
    pub euler_consistent: usize,
}

pub fn betti_table(ideal: &MonomialIdeal, budget: &OracleBudget) -> Result<BettiTable> {
    betti_table_with(ideal, budget, RankRoute::default())
}

/// Betti table with every complex checked for `∂∘∂ = 0`, Euler
/// characteristic consistency and the generator count in homological
/// degree 0. Any failed check is an [`Error::Internal`].
pub fn betti_table_with(
    ideal: &MonomialIdeal,
    budget: &OracleBudget,
    route: RankRoute,
) -> Result<BettiTable> {
    let lattice = lcm_lattice(ideal, budget)?;
    let complexes: Vec<SimplicialComplexHomology> = lattice
        .par_iter()
        .map(|a| upper_koszul_complex_with(ideal, a, route))
        .collect();
    let mut entries = BTreeMap::new();
    for c in &complexes {
        if !c.boundary_squares_vanish {
            return Err(Error::Internal(format!(
                "boundary of boundary is nonzero in K^{:?}",
                c.multidegree
            )));
        }
        if !c.euler_consistent() {
            return Err(Error::Internal(format!(
                "Euler characteristic mismatch in K^{:?}",
                c.multidegree
            )));
        }
        for (i, &b) in c.reduced_betti.iter().enumerate() {
            if b > 0 {
                entries.insert((i, c.multidegree.clone()), b);
            }
        }
    }
    let table = BettiTable {
        nvars: ideal.nvars(),
        entries,
        complexes: complexes.len(),
    };
    for g in ideal.gens() {
        if table.entries.get(&(0, g.clone())) != Some(&1) {
            return Err(Error::Internal(format!("beta_0 misses generator {g:?}")));
        }
    }
    let zero_count = table.entries.keys().filter(|(i, _)| *i == 0).count();
    if zero_count != ideal.gens().len() {
        return Err(Error::Internal(format!(
            "beta_0 has {zero_count} entries for {} generators",
            ideal.gens().len()
        )));
    }
    Ok(table)
}

/// Regularity of `I` from its Betti table.
pub fn reg_oracle(ideal: &MonomialIdeal, budget: &OracleBudget) -> Result<u32> {
    let table = betti_table(ideal, budget)?;
    table
        .regularity()
        .ok_or_else(|| Error::Internal(format!("empty Betti table for {ideal}")))
}

/// Regularity of a stable ideal, `deg(I)`, read off the Eliahou-Kervaire
/// resolution.
pub fn reg_stable_ek(ideal: &MonomialIdeal) -> Result<u32> {
    ideal.require_proper_nonzero("reg_stable_ek")?;
    if let Some(w) = crate::borel::stability_witness(ideal)? {
        return Err(Error::NotStable(w.to_string()));
    }
    debug_assert!(is_stable(ideal)?);
    Ok(ideal.degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens)
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn lattice_examples() {
        let b = OracleBudget::default();
        assert_eq!(
            lcm_lattice(&ideal(2, &[&[1, 0], &[0, 1]]), &b).unwrap(),
            vec![mono(&[1, 0]), mono(&[0, 1]), mono(&[1, 1])]
        );
        let l = lcm_lattice(&ideal(2, &[&[2, 0], &[1, 1]]), &b).unwrap();
        assert_eq!(l, vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[2, 1])]);
        assert_eq!(
            lcm_lattice(&ideal(3, &[&[1, 2, 0]]), &b).unwrap(),
            vec![mono(&[1, 2, 0])]
        );
        let tiny = OracleBudget {
            max_generators: 1,
            max_lattice: 10,
        };
        assert!(matches!(
            lcm_lattice(&ideal(2, &[&[1, 0], &[0, 1]]), &tiny),
            Err(Error::OracleInfeasible(_))
        ));
    }

    #[test]
    fn koszul_examples() {
        let i = ideal(2, &[&[1, 0], &[0, 1]]);
        let k = upper_koszul_complex(&i, &mono(&[1, 1]));
        assert_eq!(k.faces, vec![vec![0], vec![0b01, 0b10]]);
        assert_eq!(k.betti(1), 1);
        assert_eq!(k.betti(0), 0);

        let g = mono(&[2, 1]);
        let k = upper_koszul_complex(&ideal(2, &[&[2, 1]]), &g);
        assert_eq!(k.faces, vec![vec![0]]);
        assert_eq!(k.betti(0), 1);

        let ci = ideal(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(upper_koszul_complex(&ci, &mono(&[2, 3])).betti(1), 1);
    }

    #[test]
    fn table_examples() {
        let b = OracleBudget::default();
        let t = betti_table(&ideal(2, &[&[1, 0], &[0, 1]]), &b).unwrap();
        let g = t.graded();
        assert_eq!(g, BTreeMap::from([((0, 1), 2), ((1, 2), 1)]));
        assert_eq!(t.regularity(), Some(1));

        let t = betti_table(&ideal(2, &[&[2, 0], &[0, 3]]), &b).unwrap();
        assert_eq!(
            t.graded(),
            BTreeMap::from([((0, 2), 1), ((0, 3), 1), ((1, 5), 1)])
        );
        assert_eq!(t.regularity(), Some(4));

        assert_eq!(reg_oracle(&ideal(2, &[&[1, 1]]), &b).unwrap(), 2);
    }

    #[test]
    fn rank_routes_give_same_tables() {
        let b = OracleBudget::default();
        for i in [
            ideal(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0], &[1, 0, 1]]),
            ideal(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
            ideal(
                4,
                &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]],
            ),
        ] {
            assert_eq!(
                betti_table_with(&i, &b, RankRoute::FractionFree).unwrap(),
                betti_table_with(&i, &b, RankRoute::RationalGauss).unwrap()
            );
        }
    }

    #[test]
    fn four_cycle_edge_ideal() {
        // edge ideal of the 4-cycle: Betti numbers 4, 4, 1 in degrees 2, 3, 4
        let i = ideal(
            4,
            &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]],
        );
        let t = betti_table(&i, &OracleBudget::default()).unwrap();
        assert_eq!(
            t.graded(),
            BTreeMap::from([((0, 2), 4), ((1, 3), 4), ((2, 4), 1)])
        );
        assert_eq!(t.regularity(), Some(2));
    }

    #[test]
    fn stable_ek_examples() {
        assert_eq!(reg_stable_ek(&ideal(2, &[&[2, 0], &[1, 1]])).unwrap(), 2);
        assert_eq!(reg_stable_ek(&ideal(2, &[&[1, 0]])).unwrap(), 1);
        let t = ideal(2, &[&[2, 0], &[0, 3]]).truncate(4);
        assert_eq!(reg_stable_ek(&t).unwrap(), 4);
        assert!(matches!(
            reg_stable_ek(&ideal(2, &[&[0, 2]])),
            Err(Error::NotStable(_))
        ));
    }

    #[test]
    fn macaulay_layout() {
        let t = betti_table(&ideal(2, &[&[1, 0], &[0, 1]]), &OracleBudget::default()).unwrap();
        let s = t.to_macaulay_string();
        assert_eq!(s, "       0 1\ntotal: 2 1\n    1: 2 1\n");
    }
}
