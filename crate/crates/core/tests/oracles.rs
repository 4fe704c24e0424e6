//! Library results against independent brute-force computations.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use borelreg::betti::{betti_table, reg_oracle, OracleBudget};
use borelreg::borel::{borel_closure, is_borel_type_exchange, is_borel_type_star, is_stable};
use borelreg::chain::reg_via_chain;
use borelreg::regularity::{reg_artinian, reg_via_truncation};
use borelreg::{Monomial, MonomialIdeal, RingContext};

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Membership by divisibility against every generator, no sorting tricks.
fn member(gens: &[Vec<u32>], u: &[u32]) -> bool {
    gens.iter().any(|g| divides(g, u))
}

fn all_exps(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=d)
        .flat_map(|a| {
            all_exps(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

fn raw_gens(ideal: &MonomialIdeal) -> Vec<Vec<u32>> {
    ideal
        .gens()
        .iter()
        .map(|g| g.exponents().to_vec())
        .collect()
}

fn brute_hf(gens: &[Vec<u32>], n: usize, d: u32) -> u64 {
    all_exps(n, d).iter().filter(|u| !member(gens, u)).count() as u64
}

/// `u ∈ (I : (x_1..x_j)^∞)` iff `u·w ∈ I` for every degree-K monomial `w`
/// in the first `j` variables, with K past every exponent in I.
fn brute_in_prefix_saturation(gens: &[Vec<u32>], n: usize, j: usize, u: &[u32]) -> bool {
    let k: u32 = gens.iter().flatten().sum::<u32>() + 1;
    all_exps(j, k).iter().all(|w| {
        let mut v = u.to_vec();
        for (i, e) in w.iter().enumerate() {
            v[i] += e;
        }
        debug_assert_eq!(v.len(), n);
        member(gens, &v)
    })
}

fn brute_in_var_saturation(gens: &[Vec<u32>], j: usize, u: &[u32]) -> bool {
    let k: u32 = gens.iter().map(|g| g[j - 1]).max().unwrap_or(0);
    let mut v = u.to_vec();
    v[j - 1] += k;
    member(gens, &v)
}

fn brute_borel_type(gens: &[Vec<u32>], n: usize) -> bool {
    let top: u32 = gens
        .iter()
        .map(|g| g.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    (1..=n).all(|j| {
        (0..=top).all(|d| {
            all_exps(n, d).iter().all(|u| {
                brute_in_var_saturation(gens, j, u) == brute_in_prefix_saturation(gens, n, j, u)
            })
        })
    })
}

fn ideal_strategy(max_n: usize, max_deg: u32) -> impl Strategy<Value = MonomialIdeal> {
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..=max_deg, n), 1..4).prop_filter_map(
            "nonunit generators",
            move |gens| {
                let gens: Vec<Monomial> = gens
                    .into_iter()
                    .filter(|e| e.iter().sum::<u32>() > 0)
                    .map(Monomial::new)
                    .collect();
                if gens.is_empty() {
                    return None;
                }
                Some(MonomialIdeal::minimalize(
                    Arc::new(RingContext::new(n).unwrap()),
                    gens,
                ))
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn hilbert_function_matches_enumeration(ideal in ideal_strategy(4, 3)) {
        let gens = raw_gens(&ideal);
        for d in 0..=ideal.degree() + 2 {
            prop_assert_eq!(ideal.hilbert_quotient(d), brute_hf(&gens, ideal.nvars(), d));
        }
    }

    #[test]
    fn borel_type_matches_brute_saturation(ideal in ideal_strategy(3, 2)) {
        let expected = brute_borel_type(&raw_gens(&ideal), ideal.nvars());
        prop_assert_eq!(is_borel_type_star(&ideal).unwrap().verdict, expected);
        prop_assert_eq!(is_borel_type_exchange(&ideal).unwrap().verdict, expected);
    }

    #[test]
    fn truncation_matches_enumeration(ideal in ideal_strategy(3, 3), e in 0u32..6) {
        let gens = raw_gens(&ideal);
        let t = raw_gens(&ideal.truncate(e));
        for d in 0..=e + 3 {
            for u in all_exps(ideal.nvars(), d) {
                prop_assert_eq!(member(&t, &u), d >= e && member(&gens, &u));
            }
        }
    }

    #[test]
    fn stable_ideals_have_eliahou_kervaire_betti_numbers(
        n in 2usize..=4,
        seeds in proptest::collection::vec(proptest::collection::vec(0u32..=2, 4), 1..3),
    ) {
        // graded Betti numbers of a stable ideal: β_{i,i+d} = Σ_{deg g = d} C(m(g) - 1, i)
        let ring = Arc::new(RingContext::new(n).unwrap());
        let seed: Vec<Monomial> = seeds
            .into_iter()
            .map(|e| Monomial::new(e[..n].to_vec()))
            .filter(|m| !m.is_one())
            .collect();
        prop_assume!(!seed.is_empty());
        let ideal = borel_closure(ring, &seed);
        prop_assert!(is_stable(&ideal).unwrap());
        let table = betti_table(&ideal, &OracleBudget::default());
        prop_assume!(!matches!(table, Err(borelreg::Error::OracleInfeasible(_))));
        let table = table.unwrap();
        let mut expected: BTreeMap<(usize, u32), u64> = BTreeMap::new();
        for g in ideal.gens() {
            let m = g.max_var() as u64;
            for i in 0..m {
                *expected.entry((i as usize, g.degree() + i as u32)).or_insert(0) +=
                    borelreg::monomial::binomial(m - 1, i);
            }
        }
        prop_assert_eq!(table.graded(), expected);
    }

    #[test]
    fn artinian_regularity_is_top_socle_degree_plus_one(
        n in 2usize..=3,
        powers in proptest::collection::vec(1u32..=4, 3),
        extra in proptest::collection::vec(proptest::collection::vec(0u32..=3, 3), 0..3),
    ) {
        let mut gens: Vec<Monomial> = (0..n)
            .map(|i| Monomial::pure_power(n, i + 1, powers[i]))
            .collect();
        gens.extend(extra.into_iter().map(|e| Monomial::new(e[..n].to_vec())).filter(|m| !m.is_one()));
        let ideal = MonomialIdeal::minimalize(Arc::new(RingContext::new(n).unwrap()), gens);
        let raw = raw_gens(&ideal);
        let top = (0..).take_while(|&d| brute_hf(&raw, n, d) > 0).last().unwrap();
        prop_assert_eq!(reg_artinian(&ideal).unwrap(), top + 1);
        prop_assert_eq!(reg_via_chain(&ideal).unwrap(), top + 1);
        prop_assert_eq!(reg_oracle(&ideal, &OracleBudget::default()).unwrap(), top + 1);
    }
}

#[test]
fn worked_regularities() {
    let cases: &[(usize, &[&[u32]], u32)] = &[
        (2, &[&[2, 0], &[1, 1]], 2),
        (2, &[&[2, 0], &[0, 3]], 4),
        (3, &[&[1, 0, 0], &[0, 1, 0]], 1),
        (3, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]], 2),
        (2, &[&[3, 0], &[1, 1]], 3),
    ];
    for &(n, gens, reg) in cases {
        let ideal = MonomialIdeal::from_exponents(n, gens);
        assert_eq!(reg_via_chain(&ideal).unwrap(), reg, "{ideal}");
        assert_eq!(reg_via_truncation(&ideal).unwrap(), reg, "{ideal}");
        assert_eq!(
            reg_oracle(&ideal, &OracleBudget::default()).unwrap(),
            reg,
            "{ideal}"
        );
    }
}

#[test]
fn negative_control_has_no_stable_truncation() {
    let ideal = MonomialIdeal::from_exponents(2, &[&[0, 2]]);
    assert_eq!(reg_oracle(&ideal, &OracleBudget::default()).unwrap(), 2);
    for e in 0..=ideal.regularity_bound() + 5 {
        assert!(!is_stable(&ideal.truncate(e)).unwrap(), "e = {e}");
    }
}
