//! Exponent-vector monomials and the polynomial ring they live in.
//!
//! Variables are numbered from 1, so `x1` has index 1 and the index 0 is
//! reserved for "no variable" (the value of [`Monomial::max_var`] on the unit
//! monomial).

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::Exponent;

/// Number of variables of a polynomial ring together with display names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
}

impl RingContext {
    /// Ring in `n` variables named `x1..xn`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_names((1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidRing(
                "a ring needs at least one variable".into(),
            ));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!(
                    "duplicate variable name `{name}`"
                )));
            }
        }
        Ok(RingContext { names })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of the variable with 1-based index `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i - 1]
    }

    /// 1-based index of the variable called `name`.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|p| p + 1)
    }

    /// The ring with `extra` new variables appended after the existing ones.
    pub fn extended(&self, extra: usize) -> RingContext {
        let mut names = self.names.clone();
        let mut next = self.nvars() + 1;
        for _ in 0..extra {
            let mut candidate = format!("x{next}");
            while names.contains(&candidate) {
                next += 1;
                candidate = format!("x{next}");
            }
            names.push(candidate);
            next += 1;
        }
        RingContext { names }
    }

    /// The subring on the first `m` variables.
    pub fn restricted(&self, m: usize) -> Result<RingContext> {
        if m == 0 || m > self.nvars() {
            return Err(Error::VariableOutOfRange {
                index: m,
                nvars: self.nvars(),
            });
        }
        Ok(RingContext {
            names: self.names[..m].to_vec(),
        })
    }
}

/// A monomial `x1^a1 * ... * xn^an`, stored as its exponent vector.
///
/// Monomials are ordered by total degree first and then by the exponent
/// vector in descending lexicographic order, so `x1^2 < x1*x2 < x2^2 < x1^3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<Exponent>,
}

impl Monomial {
    pub fn new(exps: Vec<Exponent>) -> Self {
        assert!(!exps.is_empty(), "monomial needs at least one variable");
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    /// The variable `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::pure_power(nvars, i, 1)
    }

    pub fn pure_power(nvars: usize, i: usize, power: Exponent) -> Self {
        assert!((1..=nvars).contains(&i), "variable x{i} out of range");
        let mut exps = vec![0; nvars];
        exps[i - 1] = power;
        Self::new(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    /// Exponent of the variable with 1-based index `i`.
    pub fn exponent(&self, i: usize) -> Exponent {
        self.exps[i - 1]
    }

    pub fn degree(&self) -> u32 {
        self.exps
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .expect("monomial degree overflow")
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Largest index of a variable dividing the monomial; 0 for the unit.
    pub fn max_var(&self) -> usize {
        self.exps.iter().rposition(|&e| e > 0).map_or(0, |p| p + 1)
    }

    /// 1-based indices of the variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(p, _)| p + 1)
    }

    /// `Some(i)` when the monomial is `x_i^a` with `a > 0`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut support = self.support();
        match (support.next(), support.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }

    fn check_same_ring(&self, other: &Monomial) {
        assert_eq!(
            self.nvars(),
            other.nvars(),
            "monomials from rings of different size"
        );
    }

    fn zip_with(&self, other: &Monomial, f: impl Fn(Exponent, Exponent) -> Exponent) -> Monomial {
        self.check_same_ring(other);
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.check_same_ring(other);
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, Exponent::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, Exponent::min)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.checked_add(b).expect("exponent overflow"))
    }

    /// Generator of the colon ideal `(self) : (other)`, i.e. `self / gcd(self, other)`.
    pub fn colon_gen(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, Exponent::saturating_sub)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| self.colon_gen(other))
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i - 1] = exps[i - 1].checked_add(1).expect("exponent overflow");
        Monomial::new(exps)
    }

    pub fn div_var(&self, i: usize, power: Exponent) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        exps[i - 1] = exps[i - 1].checked_sub(power)?;
        Some(Monomial::new(exps))
    }

    /// The same monomial with the exponent of `x_i` set to zero.
    pub fn drop_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i - 1] = 0;
        Monomial::new(exps)
    }

    /// Re-embed in a ring with `nvars` variables, padding or cutting zeros.
    ///
    /// Panics when a cut coordinate is nonzero.
    pub(crate) fn resized(&self, nvars: usize) -> Monomial {
        let mut exps = self.exps.clone();
        if nvars < exps.len() {
            assert!(exps[nvars..].iter().all(|&e| e == 0));
        }
        exps.resize(nvars, 0);
        Monomial::new(exps)
    }

    pub fn display<'a>(&'a self, ring: &'a RingContext) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ring }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exps)
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    ring: &'a RingContext,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for i in self.mono.support() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.ring.name(i))?;
            let e = self.mono.exponent(i);
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of total degree `degree` in `nvars` variables, largest
/// first in descending lexicographic order (`x1^d`, ..., `xn^d`).
pub fn monomials_of_degree(nvars: usize, degree: u32) -> DegreeMonomials {
    assert!(nvars >= 1);
    let mut first = vec![0; nvars];
    first[0] = degree;
    DegreeMonomials { next: Some(first) }
}

pub struct DegreeMonomials {
    next: Option<Vec<Exponent>>,
}

impl Iterator for DegreeMonomials {
    type Item = Monomial;

    fn next(&mut self) -> Option<Monomial> {
        let current = self.next.take()?;
        let n = current.len();
        // The successor moves one unit out of the last nonzero slot before the
        // final coordinate and gathers the tail into the slot right after it.
        if let Some(i) = current[..n - 1].iter().rposition(|&e| e > 0) {
            let mut succ = current.clone();
            let tail: Exponent = succ[i + 1..].iter().sum();
            succ[i] -= 1;
            for e in &mut succ[i + 1..] {
                *e = 0;
            }
            succ[i + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(Monomial::new(current))
    }
}

/// Number of monomials of degree `degree` in `nvars` variables.
pub fn count_of_degree(nvars: usize, degree: u32) -> u64 {
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        acc.checked_mul(n - i).expect("binomial overflow") / (i + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exponent]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn max_var_examples() {
        assert_eq!(m(&[2, 0, 1]).max_var(), 3);
        assert_eq!(Monomial::one(3).max_var(), 0);
        assert_eq!(m(&[0, 1, 0, 0]).max_var(), 2);
    }

    #[test]
    fn divides_examples() {
        assert!(m(&[1, 0]).divides(&m(&[2, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[1, 1])));
        let u = m(&[3, 1]);
        assert!(u.divides(&u));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(m(&[2, 0]).lcm(&m(&[1, 1])), m(&[2, 1]));
        let u = m(&[1, 4]);
        assert_eq!(u.lcm(&Monomial::one(2)), u);
        assert_eq!(m(&[1, 0]).lcm(&m(&[1, 0])), m(&[1, 0]));
    }

    #[test]
    fn colon_gen_examples() {
        assert_eq!(m(&[2, 1, 0]).colon_gen(&m(&[0, 2, 0])), m(&[2, 0, 0]));
        assert_eq!(m(&[1, 1, 0]).colon_gen(&m(&[0, 0, 1])), m(&[1, 1, 0]));
        let u = m(&[2, 3, 1]);
        assert!(u.colon_gen(&u).is_one());
    }

    #[test]
    #[should_panic(expected = "different size")]
    fn ring_mismatch_panics() {
        m(&[1, 0]).divides(&m(&[1, 0, 0]));
    }

    #[test]
    fn ordering_is_degree_then_descending_lex() {
        let mut v = vec![m(&[0, 2]), m(&[3, 0]), m(&[1, 1]), m(&[2, 0]), m(&[1, 0])];
        v.sort();
        assert_eq!(
            v,
            vec![m(&[1, 0]), m(&[2, 0]), m(&[1, 1]), m(&[0, 2]), m(&[3, 0])]
        );
    }

    #[test]
    fn degree_enumeration_counts() {
        for n in 1..=4 {
            for d in 0..=6 {
                let all: Vec<_> = monomials_of_degree(n, d).collect();
                assert_eq!(all.len() as u64, count_of_degree(n, d));
                assert!(all.iter().all(|u| u.degree() == d));
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn display_uses_grammar() {
        let ring = RingContext::new(3).unwrap();
        assert_eq!(m(&[2, 0, 1]).display(&ring).to_string(), "x1^2*x3");
        assert_eq!(Monomial::one(3).display(&ring).to_string(), "1");
    }

    #[test]
    fn ring_names_validated() {
        assert!(RingContext::new(0).is_err());
        assert!(RingContext::with_names(vec!["a".into(), "a".into()]).is_err());
        assert!(RingContext::with_names(vec!["".into()]).is_err());
        let r = RingContext::new(2).unwrap().extended(2);
        assert_eq!(r.names(), &["x1", "x2", "x3", "x4"]);
        assert_eq!(r.restricted(1).unwrap().names(), &["x1"]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mono(n: usize) -> impl Strategy<Value = Monomial> {
            proptest::collection::vec(0u32..4, n).prop_map(Monomial::new)
        }

        fn pair() -> impl Strategy<Value = (Monomial, Monomial)> {
            (1usize..4).prop_flat_map(|n| (mono(n), mono(n)))
        }

        proptest! {
            #[test]
            fn lcm_is_least_common_multiple((u, v) in pair()) {
                let l = u.lcm(&v);
                prop_assert!(u.divides(&l) && v.divides(&l));
                // every common multiple inside the exponent box is a multiple of l
                let bound = l.degree();
                for d in 0..=bound {
                    for w in monomials_of_degree(u.nvars(), d) {
                        if u.divides(&w) && v.divides(&w) {
                            prop_assert!(l.divides(&w));
                        }
                    }
                }
            }

            #[test]
            fn colon_gen_reconstructs((u, v) in pair()) {
                let rebuilt = u.colon_gen(&v).mul(&v) == u;
                prop_assert_eq!(rebuilt, v.divides(&u));
            }

            #[test]
            fn max_var_of_product((u, v) in pair()) {
                prop_assert_eq!(u.mul(&v).max_var(), u.max_var().max(v.max_var()));
            }
        }
    }
}
