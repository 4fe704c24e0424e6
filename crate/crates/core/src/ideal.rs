//! Monomial ideals as canonical minimal generating sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{count_of_degree, monomials_of_degree, Monomial, RingContext};

/// A monomial ideal, stored as its sorted minimal generating set `G(I)`.
///
/// Two ideals in the same ring are equal exactly when their values compare
/// equal. The improper ideal `S` carries a flag and an empty generator list;
/// the zero ideal has neither.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    ring: Arc<RingContext>,
    gens: Vec<Monomial>,
    improper: bool,
}

impl MonomialIdeal {
    /// Canonical ideal generated by `gens`.
    pub fn minimalize(ring: Arc<RingContext>, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut gens: Vec<Monomial> = gens.into_iter().collect();
        for g in &gens {
            assert_eq!(g.nvars(), ring.nvars(), "generator from a different ring");
        }
        if gens.iter().any(Monomial::is_one) {
            return Self::unit(ring);
        }
        gens.sort();
        gens.dedup();
        // after sorting by degree, only earlier entries can divide later ones
        let mut minimal: Vec<Monomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !minimal
                .iter()
                .any(|h| h.degree() < g.degree() && h.divides(&g))
            {
                minimal.push(g);
            }
        }
        MonomialIdeal {
            ring,
            gens: minimal,
            improper: false,
        }
    }

    /// Builds from a list already known to be minimal.
    fn from_minimal(ring: Arc<RingContext>, mut gens: Vec<Monomial>) -> Self {
        gens.sort();
        debug_assert!(gens.windows(2).all(|w| w[0] != w[1]));
        MonomialIdeal {
            ring,
            gens,
            improper: false,
        }
    }

    pub fn zero(ring: Arc<RingContext>) -> Self {
        MonomialIdeal {
            ring,
            gens: Vec::new(),
            improper: false,
        }
    }

    /// The improper ideal `S`.
    pub fn unit(ring: Arc<RingContext>) -> Self {
        MonomialIdeal {
            ring,
            gens: Vec::new(),
            improper: true,
        }
    }

    /// Convenience constructor from raw exponent vectors in `x1..xn`.
    pub fn from_exponents(nvars: usize, gens: &[&[u32]]) -> Self {
        let ring = Arc::new(RingContext::new(nvars).expect("nvars >= 1"));
        Self::minimalize(ring, gens.iter().map(|e| Monomial::new(e.to_vec())))
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        !self.improper && self.gens.is_empty()
    }

    pub fn is_improper(&self) -> bool {
        self.improper
    }

    pub fn is_proper_nonzero(&self) -> bool {
        !self.improper && !self.gens.is_empty()
    }

    pub(crate) fn require_proper_nonzero(&self, op: &'static str) -> Result<()> {
        if self.is_proper_nonzero() {
            Ok(())
        } else {
            Err(Error::ImproperOrZero { op })
        }
    }

    /// `deg(I)`: the largest degree of a minimal generator (0 for `S` and `0`).
    pub fn degree(&self) -> u32 {
        self.gens.last().map_or(0, Monomial::degree)
    }

    pub fn min_degree(&self) -> u32 {
        self.gens.first().map_or(0, Monomial::degree)
    }

    /// `m(I)`: the largest variable index occurring in a minimal generator.
    pub fn max_var(&self) -> usize {
        self.gens.iter().map(Monomial::max_var).max().unwrap_or(0)
    }

    /// `n * (deg(I) - 1) + 1`, the regularity ceiling for Borel type ideals.
    pub fn regularity_bound(&self) -> u32 {
        let n = self.nvars() as u32;
        n * self.degree().saturating_sub(1) + 1
    }

    /// Componentwise maximum of the generator exponents.
    pub fn exponent_box(&self) -> Vec<u32> {
        let mut maxima = vec![0; self.nvars()];
        for g in &self.gens {
            for (m, &e) in maxima.iter_mut().zip(g.exponents()) {
                *m = (*m).max(e);
            }
        }
        maxima
    }

    /// True when every variable has a pure power among the generators.
    pub fn is_artinian(&self) -> bool {
        self.first_missing_pure_power().is_none() && self.is_proper_nonzero()
    }

    /// First variable with no pure power among the generators.
    pub fn first_missing_pure_power(&self) -> Option<usize> {
        let mut have = vec![false; self.nvars()];
        for g in &self.gens {
            if let Some(i) = g.pure_power_var() {
                have[i - 1] = true;
            }
        }
        have.iter().position(|&h| !h).map(|p| p + 1)
    }

    fn check_ring(&self, other: &MonomialIdeal) {
        assert_eq!(self.ring, other.ring, "ideals from different rings");
    }

    pub fn contains(&self, u: &Monomial) -> bool {
        assert_eq!(u.nvars(), self.nvars(), "monomial from a different ring");
        if self.improper {
            return true;
        }
        let d = u.degree();
        let lower = self.gens.partition_point(|g| g.degree() < d);
        if self.gens[..lower].iter().any(|g| g.divides(u)) {
            return true;
        }
        // a generator of the same degree divides u only if it equals u
        let upper = self.gens.partition_point(|g| g.degree() <= d);
        self.gens[lower..upper].binary_search(u).is_ok()
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        self.check_ring(other);
        if other.improper {
            return self.improper;
        }
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.check_ring(other);
        if self.improper || other.improper {
            return Self::unit(self.ring.clone());
        }
        Self::minimalize(
            self.ring.clone(),
            self.gens.iter().chain(&other.gens).cloned(),
        )
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.check_ring(other);
        if self.improper {
            return other.clone();
        }
        if other.improper {
            return self.clone();
        }
        let lcms = self
            .gens
            .iter()
            .flat_map(|u| other.gens.iter().map(move |v| u.lcm(v)));
        Self::minimalize(self.ring.clone(), lcms)
    }

    /// `(I : v)`.
    pub fn colon_by_monomial(&self, v: &Monomial) -> MonomialIdeal {
        assert_eq!(v.nvars(), self.nvars(), "monomial from a different ring");
        if self.improper {
            return self.clone();
        }
        Self::minimalize(self.ring.clone(), self.gens.iter().map(|g| g.colon_gen(v)))
    }

    fn check_var(&self, j: usize) -> Result<()> {
        if (1..=self.nvars()).contains(&j) {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                index: j,
                nvars: self.nvars(),
            })
        }
    }

    /// `(I : x_j^∞)`, obtained by deleting `x_j` from every generator.
    pub fn saturate_variable(&self, j: usize) -> Result<MonomialIdeal> {
        self.require_proper_nonzero("saturate_variable")?;
        self.check_var(j)?;
        let sat = Self::minimalize(self.ring.clone(), self.gens.iter().map(|g| g.drop_var(j)));
        assert!(sat.degree() <= self.degree());
        Ok(sat)
    }

    /// `(I : x_j^∞)` as the fixpoint of repeated colons by `x_j`.
    ///
    /// Independent of [`saturate_variable`](Self::saturate_variable); the two
    /// are cross-checked in tests and by the verify harness.
    pub fn saturate_variable_by_colons(&self, j: usize) -> Result<MonomialIdeal> {
        self.require_proper_nonzero("saturate_variable_by_colons")?;
        self.check_var(j)?;
        let xj = Monomial::var(self.nvars(), j);
        let mut current = self.clone();
        loop {
            let next = current.colon_by_monomial(&xj);
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// `(I : (x_1, ..., x_j)^∞)` by iterating `K ← ∩_{k ≤ j} (K : x_k)`.
    pub fn saturate_prefix_prime(&self, j: usize) -> Result<MonomialIdeal> {
        self.require_proper_nonzero("saturate_prefix_prime")?;
        self.check_var(j)?;
        let n = self.nvars();
        let bound = self.exponent_box();
        let mut current = self.clone();
        loop {
            let next = (1..=j)
                .map(|k| current.colon_by_monomial(&Monomial::var(n, k)))
                .reduce(|acc, c| acc.intersect(&c))
                .expect("j >= 1");
            // colons and lcms never leave the exponent box of I, which holds
            // finitely many ideals, so the ascending iteration terminates
            assert!(next.gens.iter().all(|g| g
                .exponents()
                .iter()
                .zip(&bound)
                .all(|(e, b)| e <= b)));
            if next == current {
                return Ok(current);
            }
            debug_assert!(next.contains_ideal(&current));
            current = next;
        }
    }

    /// `I_{≥e}`: the ideal generated by the elements of `I` of degree at least `e`.
    pub fn truncate(&self, e: u32) -> MonomialIdeal {
        if self.is_zero() {
            return self.clone();
        }
        if self.improper {
            if e == 0 {
                return self.clone();
            }
            return Self::from_minimal(
                self.ring.clone(),
                monomials_of_degree(self.nvars(), e).collect(),
            );
        }
        if e <= self.min_degree() {
            return self.clone();
        }
        // Degree-e multiples of low generators are pairwise incomparable, and
        // none divides a minimal generator of larger degree, so the union is
        // already minimal.
        let mut out: BTreeSet<Monomial> = BTreeSet::new();
        for g in &self.gens {
            let d = g.degree();
            if d >= e {
                out.insert(g.clone());
            } else {
                out.extend(monomials_of_degree(self.nvars(), e - d).map(|w| g.mul(&w)));
            }
        }
        Self::from_minimal(self.ring.clone(), out.into_iter().collect())
    }

    /// Number of monomials of degree `d` outside the ideal, i.e. `HF(S/I, d)`.
    pub fn hilbert_quotient(&self, d: u32) -> u64 {
        if self.improper {
            return 0;
        }
        if self.gens.is_empty() {
            return count_of_degree(self.nvars(), d);
        }
        monomials_of_degree(self.nvars(), d)
            .filter(|u| !self.contains(u))
            .count() as u64
    }

    /// The extension `I·S[x_{n+1}, ..., x_{n+extra}]`.
    pub fn extend_ring(&self, extra: usize) -> MonomialIdeal {
        let ring = Arc::new(self.ring.extended(extra));
        let n = ring.nvars();
        MonomialIdeal {
            gens: self.gens.iter().map(|g| g.resized(n)).collect(),
            improper: self.improper,
            ring,
        }
    }

    /// The ideal generated by `G(I)` in `K[x_1, ..., x_m]`.
    pub fn restrict_ring(&self, m: usize) -> Result<MonomialIdeal> {
        let ring = Arc::new(self.ring.restricted(m)?);
        if let Some(g) = self.gens.iter().find(|g| g.max_var() > m) {
            return Err(Error::SupportBeyond {
                target: m,
                generator: g.display(&self.ring).to_string(),
                max_var: g.max_var(),
            });
        }
        Ok(MonomialIdeal {
            gens: self.gens.iter().map(|g| g.resized(m)).collect(),
            improper: self.improper,
            ring,
        })
    }

    /// Generators rendered in the monomial grammar.
    pub fn gen_strings(&self) -> Vec<String> {
        if self.improper {
            return vec!["1".to_string()];
        }
        self.gens
            .iter()
            .map(|g| g.display(&self.ring).to_string())
            .collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("(0)");
        }
        write!(f, "({})", self.gen_strings().join(", "))
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal[{}]{}", self.nvars(), self)
    }
}
