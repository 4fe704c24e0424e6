//! Associated primes of `S/I` through irreducible decomposition, and the
//! variable renumbering that turns a totally ordered `Ass(S/I)` into
//! prefix primes `(x_1, ..., x_r)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;

/// An irreducible monomial ideal `(x_{i1}^{a1}, ..., x_{ik}^{ak})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleComponent {
    pub ideal: MonomialIdeal,
    /// Variables of the radical, 1-based and increasing.
    pub support: Vec<usize>,
}

impl IrreducibleComponent {
    fn new(ideal: MonomialIdeal) -> Self {
        let support = ideal
            .gens()
            .iter()
            .map(|g| {
                g.pure_power_var()
                    .expect("irreducible components have pure power generators")
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        IrreducibleComponent { ideal, support }
    }
}

/// A permutation of the variables, stored as one-line images:
/// `images[i - 1]` is the new index of `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let distinct: BTreeSet<_> = images.iter().copied().collect();
        if distinct.len() != n || images.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidPermutation(n));
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &i)| p + 1 == i)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (p, &i) in self.images.iter().enumerate() {
            inv[i - 1] = p + 1;
        }
        Permutation { images: inv }
    }

    pub fn apply_to_set(&self, vars: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = vars.iter().map(|&v| self.image(v)).collect();
        out.sort_unstable();
        out
    }

    pub fn apply_to_monomial(&self, u: &Monomial) -> Monomial {
        let mut exps = vec![0; u.nvars()];
        for (p, &e) in u.exponents().iter().enumerate() {
            exps[self.images[p] - 1] = e;
        }
        Monomial::new(exps)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Moves the exponent of `x_i` to `x_{perm(i)}` in every generator.
pub fn renumber(ideal: &MonomialIdeal, perm: &Permutation) -> Result<MonomialIdeal> {
    if perm.len() != ideal.nvars() {
        return Err(Error::InvalidPermutation(ideal.nvars()));
    }
    if !ideal.is_proper_nonzero() {
        return Ok(ideal.clone());
    }
    let out = MonomialIdeal::minimalize(
        ideal.ring().clone(),
        ideal.gens().iter().map(|g| perm.apply_to_monomial(g)),
    );
    assert_eq!(
        out.gens().len(),
        ideal.gens().len(),
        "renumbering changed minimality"
    );
    Ok(out)
}

/// Irredundant irreducible decomposition `I = ∩ Q_k`.
///
/// Splits at the first mixed generator `g = x_i^a·v` (in the canonical
/// generator order, `i` the smallest variable of `g`) via
/// `I = (I + (x_i^a)) ∩ (I + (v))` until all generators are pure powers.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    ideal.require_proper_nonzero("irreducible_decomposition")?;
    let ring = ideal.ring().clone();
    let n = ideal.nvars();
    let mut stack = vec![ideal.clone()];
    let mut leaves: Vec<MonomialIdeal> = Vec::new();
    while let Some(k) = stack.pop() {
        let mixed = k.gens().iter().find(|g| g.pure_power_var().is_none());
        match mixed {
            None => {
                if !leaves.contains(&k) {
                    leaves.push(k);
                }
            }
            Some(g) => {
                let i = g.support().next().expect("mixed generator has support");
                let power = Monomial::pure_power(n, i, g.exponent(i));
                let rest = g.div(&power).expect("x_i^a divides g");
                let left = k.sum(&MonomialIdeal::minimalize(ring.clone(), [power]));
                let right = k.sum(&MonomialIdeal::minimalize(ring.clone(), [rest]));
                stack.push(right);
                stack.push(left);
            }
        }
    }

    // a component containing another is redundant
    let mut comps: Vec<MonomialIdeal> = leaves
        .iter()
        .filter(|c| !leaves.iter().any(|d| d != *c && c.contains_ideal(d)))
        .cloned()
        .collect();
    // then drop any component containing the intersection of the rest
    let mut k = 0;
    while k < comps.len() {
        let others = comps
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != k)
            .map(|(_, c)| c.clone())
            .reduce(|a, b| a.intersect(&b));
        match others {
            Some(rest) if comps[k].contains_ideal(&rest) => {
                comps.remove(k);
            }
            _ => k += 1,
        }
    }

    let rebuilt = comps
        .iter()
        .cloned()
        .reduce(|a, b| a.intersect(&b))
        .expect("a proper ideal has a component");
    if &rebuilt != ideal {
        return Err(Error::Internal(format!(
            "components of {ideal} intersect to {rebuilt}"
        )));
    }

    let mut out: Vec<IrreducibleComponent> =
        comps.into_iter().map(IrreducibleComponent::new).collect();
    out.sort_by(|a, b| {
        a.support
            .len()
            .cmp(&b.support.len())
            .then_with(|| a.support.cmp(&b.support))
            .then_with(|| a.ideal.gens().cmp(b.ideal.gens()))
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedPrimes {
    /// Distinct supports of the irreducible components, smallest first.
    pub primes: Vec<Vec<usize>>,
    pub totally_ordered: bool,
    /// Sends every prime to a prefix `{x_1, ..., x_r}`; present when
    /// `totally_ordered`.
    pub renumbering: Option<Permutation>,
}

pub fn associated_primes(ideal: &MonomialIdeal) -> Result<AssociatedPrimes> {
    let comps = irreducible_decomposition(ideal)?;
    Ok(primes_from_components(&comps, ideal.nvars()))
}

pub fn primes_from_components(comps: &[IrreducibleComponent], nvars: usize) -> AssociatedPrimes {
    let distinct: BTreeSet<Vec<usize>> = comps.iter().map(|c| c.support.clone()).collect();
    let mut primes: Vec<Vec<usize>> = distinct.into_iter().collect();
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let totally_ordered = primes
        .windows(2)
        .all(|w| w[0].iter().all(|v| w[1].contains(v)));
    let renumbering = totally_ordered.then(|| {
        let mut order: Vec<usize> = Vec::with_capacity(nvars);
        for p in &primes {
            for &v in p {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        for v in 1..=nvars {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let mut images = vec![0; nvars];
        for (pos, &v) in order.iter().enumerate() {
            images[v - 1] = pos + 1;
        }
        Permutation { images }
    });
    AssociatedPrimes {
        primes,
        totally_ordered,
        renumbering,
    }
}

/// Serializable view of [`AssociatedPrimes`] with variable names.
#[derive(Clone, Debug, Serialize)]
pub struct AssReport {
    pub primes: Vec<Vec<String>>,
    pub totally_ordered: bool,
    pub renumbering: Option<String>,
    pub components: Vec<Vec<String>>,
}

impl AssReport {
    pub fn new(ideal: &MonomialIdeal, comps: &[IrreducibleComponent]) -> Self {
        let ass = primes_from_components(comps, ideal.nvars());
        let ring = ideal.ring();
        AssReport {
            primes: ass
                .primes
                .iter()
                .map(|p| p.iter().map(|&v| ring.name(v).to_string()).collect())
                .collect(),
            totally_ordered: ass.totally_ordered,
            renumbering: ass.renumbering.map(|p| p.to_string()),
            components: comps.iter().map(|c| c.ideal.gen_strings()).collect(),
        }
    }
}

/// Memoized decompositions, keyed by ideal.
#[derive(Default)]
pub struct DecompositionCache {
    entries: HashMap<MonomialIdeal, Vec<IrreducibleComponent>>,
}

impl DecompositionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn decompose(&mut self, ideal: &MonomialIdeal) -> Result<&[IrreducibleComponent]> {
        if !self.entries.contains_key(ideal) {
            let comps = irreducible_decomposition(ideal)?;
            self.entries.insert(ideal.clone(), comps);
        }
        Ok(&self.entries[ideal])
    }

    pub fn associated_primes(&mut self, ideal: &MonomialIdeal) -> Result<AssociatedPrimes> {
        let n = ideal.nvars();
        Ok(primes_from_components(self.decompose(ideal)?, n))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
