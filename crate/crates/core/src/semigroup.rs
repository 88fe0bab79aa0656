//! Frobenius numbers and nonnegative integer representations.
//!
//! Three independent routes to the Frobenius number are provided:
//! the closed form for two generators, a shortest-path computation of the
//! Apéry set modulo the smallest generator, and a reduction engine that
//! factors common divisors out of all-but-one generator and drops
//! generators that the others already represent.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus for which an Apéry table is allocated.
pub const MAX_RESIDUE_TABLE: u64 = 1 << 28;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of a slice; 0 for the empty slice.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |acc, &x| gcd(acc, x))
}

/// Deterministic trial division; plenty for the prime tuples used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A finite set of positive integers, stored sorted without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GeneratorSet {
    generators: Vec<u64>,
}

impl GeneratorSet {
    /// Sorts and deduplicates; rejects zero and the empty set.
    pub fn new(generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut generators: Vec<u64> = generators.into_iter().collect();
        if generators.is_empty() {
            return Err(Error::InvalidGenerators("empty generator set".into()));
        }
        if generators.contains(&0) {
            return Err(Error::InvalidGenerators("generators must be >= 1".into()));
        }
        generators.sort_unstable();
        generators.dedup();
        Ok(GeneratorSet { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn min(&self) -> u64 {
        self.generators[0]
    }

    pub fn max(&self) -> u64 {
        *self.generators.last().unwrap()
    }

    pub fn gcd(&self) -> u64 {
        gcd_all(&self.generators)
    }

    /// A Frobenius query needs at least two generators, all at least 2,
    /// with gcd 1.
    pub fn check_frobenius_valid(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::InvalidGenerators(format!(
                "need at least two distinct generators, got {:?}",
                self.generators
            )));
        }
        if self.min() < 2 {
            return Err(Error::InvalidGenerators("generators must be >= 2".into()));
        }
        match self.gcd() {
            1 => Ok(()),
            g => Err(Error::NonCoprime { gcd: g }),
        }
    }

    pub fn is_frobenius_valid(&self) -> bool {
        self.check_frobenius_valid().is_ok()
    }
}

impl TryFrom<Vec<u64>> for GeneratorSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        GeneratorSet::new(v)
    }
}

impl From<GeneratorSet> for Vec<u64> {
    fn from(s: GeneratorSet) -> Self {
        s.generators
    }
}

/// Nonnegative coefficients over a [`GeneratorSet`], in the set's
/// ascending generator order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub coefficients: Vec<u64>,
    pub target: u64,
}

impl Representation {
    /// Recomputes the dot product with `set`; `None` on overflow or length mismatch.
    pub fn evaluate(&self, set: &GeneratorSet) -> Option<u64> {
        if self.coefficients.len() != set.len() {
            return None;
        }
        self.coefficients
            .iter()
            .zip(set.generators())
            .try_fold(0u64, |acc, (&c, &s)| acc.checked_add(c.checked_mul(s)?))
    }
}

/// Smallest representable integer in each residue class modulo the
/// smallest generator. Generators must be sorted, unique, with gcd 1.
#[derive(Debug, Clone)]
struct AperyTable {
    modulus: u64,
    least: Vec<u64>,
}

impl AperyTable {
    fn compute(gens: &[u64]) -> Result<Self> {
        let modulus = gens[0];
        if modulus > MAX_RESIDUE_TABLE {
            return Err(Error::InvalidGenerators(format!(
                "smallest generator {modulus} exceeds the residue table limit {MAX_RESIDUE_TABLE}"
            )));
        }
        let m = modulus as usize;
        let mut least = vec![u64::MAX; m];
        least[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((dist, r))) = heap.pop() {
            if dist > least[r] {
                continue;
            }
            for &s in &gens[1..] {
                let next = dist.checked_add(s).ok_or(Error::Overflow)?;
                let slot = ((r as u64 + s % modulus) % modulus) as usize;
                if next < least[slot] {
                    least[slot] = next;
                    heap.push(Reverse((next, slot)));
                }
            }
        }
        if least.contains(&u64::MAX) {
            // only reachable when the caller forgot to divide out the gcd
            return Err(Error::NonCoprime { gcd: gcd_all(gens) });
        }
        Ok(AperyTable { modulus, least })
    }

    fn contains(&self, x: u64) -> bool {
        self.least[(x % self.modulus) as usize] <= x
    }
}

/// Representability tables for every prefix `s_1 < … < s_j` of a sorted
/// generator list. Prefixes need not be coprime; each one is stored as
/// its gcd times a coprime Apéry table.
#[derive(Debug, Clone)]
struct PrefixTables {
    gens: Vec<u64>,
    prefixes: Vec<(u64, AperyTable)>,
}

impl PrefixTables {
    fn new(gens: &[u64]) -> Result<Self> {
        let mut prefixes = Vec::with_capacity(gens.len());
        for j in 1..=gens.len() {
            let d = gcd_all(&gens[..j]);
            let reduced: Vec<u64> = gens[..j].iter().map(|&s| s / d).collect();
            prefixes.push((d, AperyTable::compute(&reduced)?));
        }
        Ok(PrefixTables {
            gens: gens.to_vec(),
            prefixes,
        })
    }

    /// Is `x` representable over the first `len` generators?
    fn prefix_contains(&self, len: usize, x: u64) -> bool {
        let (d, table) = &self.prefixes[len - 1];
        x.is_multiple_of(*d) && table.contains(x / d)
    }

    fn contains(&self, x: u64) -> bool {
        self.prefix_contains(self.gens.len(), x)
    }

    /// Lexicographically greatest coefficient vector read from the largest
    /// generator downwards.
    fn represent(&self, target: u64) -> Option<Vec<u64>> {
        let k = self.gens.len();
        if !self.contains(target) {
            return None;
        }
        let smallest = self.gens[0];
        let mut coefficients = vec![0u64; k];
        let mut rem = target;
        for i in (1..k).rev() {
            let s = self.gens[i];
            let (d, table) = &self.prefixes[i - 1];
            let cmax = rem / s;
            // x(c) = rem - c*s keeps its residue mod `smallest` when c moves
            // by multiples of `smallest`; scan one representative per class.
            let mut best: Option<u64> = None;
            for t in 0..smallest.min(cmax + 1) {
                let c_top = cmax - t;
                if best.is_some_and(|b| b >= c_top) {
                    break;
                }
                let x_top = rem - c_top * s;
                if !x_top.is_multiple_of(*d) {
                    continue;
                }
                let reduced = x_top / d;
                let need = table.least[(reduced % table.modulus) as usize];
                let c = if need <= reduced {
                    c_top
                } else {
                    // each step of `smallest` in c adds s*smallest/d to the reduced value
                    let step = (s as u128) * (table.modulus as u128);
                    let deficit = (need - reduced) as u128;
                    let u = deficit.div_ceil(step);
                    let drop = u * smallest as u128;
                    if drop > c_top as u128 {
                        continue;
                    }
                    c_top - drop as u64
                };
                if best.is_none_or(|b| c > b) {
                    best = Some(c);
                }
            }
            let c = best.expect("prefix invariant guarantees a feasible coefficient");
            coefficients[i] = c;
            rem -= c * s;
        }
        debug_assert_eq!(rem % smallest, 0);
        coefficients[0] = rem / smallest;
        Some(coefficients)
    }
}

/// Closed form for two coprime generators: `s1*s2 - s1 - s2`.
pub fn frobenius_pair(s1: u64, s2: u64) -> Result<u64> {
    if s1 < 2 || s2 < 2 {
        return Err(Error::InvalidGenerators("generators must be >= 2".into()));
    }
    let g = gcd(s1, s2);
    if g != 1 {
        return Err(Error::NonCoprime { gcd: g });
    }
    s1.checked_mul(s2)
        .and_then(|p| p.checked_sub(s1))
        .and_then(|p| p.checked_sub(s2))
        .ok_or(Error::Overflow)
}

/// Largest integer not representable over `set`, via the Apéry set modulo
/// the smallest generator.
pub fn frobenius_general(set: &GeneratorSet) -> Result<u64> {
    set.check_frobenius_valid()?;
    let table = AperyTable::compute(set.generators())?;
    let max = *table.least.iter().max().unwrap();
    Ok(max - table.modulus)
}

/// Frobenius number by repeated common-factor extraction and removal of
/// redundant generators, falling back to [`frobenius_general`] on cores
/// where neither applies.
pub fn reduce_brauer_shockley(set: &GeneratorSet) -> Result<u64> {
    set.check_frobenius_valid()?;
    let g = reduce_rec(set.generators().to_vec())?;
    u64::try_from(g).map_err(|_| Error::Overflow)
}

// Works on raw lists; a set containing 1 has Frobenius number -1.
fn reduce_rec(mut gens: Vec<u64>) -> Result<i128> {
    gens.sort_unstable();
    gens.dedup();
    if gens[0] == 1 {
        return Ok(-1);
    }

    // Drop any generator the remaining ones already represent, largest first.
    let mut i = gens.len();
    while i > 0 && gens.len() > 2 {
        i -= 1;
        let others: Vec<u64> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &s)| s)
            .collect();
        if PrefixTables::new(&others)?.contains(gens[i]) {
            gens.remove(i);
            i = gens.len();
        }
    }

    if gens.len() == 2 {
        return Ok(frobenius_pair(gens[0], gens[1])? as i128);
    }

    for i in 0..gens.len() {
        let s = gens[i];
        let others: Vec<u64> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let d = gcd_all(&others);
        if d > 1 {
            let mut inner: Vec<u64> = others.iter().map(|&x| x / d).collect();
            inner.push(s);
            let g_inner = reduce_rec(inner)?;
            let d = d as i128;
            return d
                .checked_mul(g_inner)
                .and_then(|v| v.checked_add((d - 1).checked_mul(s as i128)?))
                .ok_or(Error::Overflow);
        }
    }

    let core = GeneratorSet::new(gens)?;
    Ok(frobenius_general(&core)? as i128)
}

/// Representation of `target` over `set`, or `None` when `target` is not
/// representable.
///
/// Among all representations the one returned is lexicographically
/// greatest when coefficients are read from the largest generator down:
/// as many copies of the largest generator as possible, then of the next
/// one, and so on. Any set of positive generators is accepted; gcd and
/// size restrictions only matter for Frobenius queries.
pub fn represent(target: u64, set: &GeneratorSet) -> Result<Option<Representation>> {
    let tables = PrefixTables::new(set.generators())?;
    Ok(tables.represent(target).map(|coefficients| Representation {
        coefficients,
        target,
    }))
}

/// Reusable representation oracle over a fixed generator set.
#[derive(Debug, Clone)]
pub struct Representer {
    set: GeneratorSet,
    tables: PrefixTables,
}

impl Representer {
    pub fn new(set: GeneratorSet) -> Result<Self> {
        let tables = PrefixTables::new(set.generators())?;
        Ok(Representer { set, tables })
    }

    pub fn set(&self) -> &GeneratorSet {
        &self.set
    }

    pub fn contains(&self, target: u64) -> bool {
        self.tables.contains(target)
    }

    pub fn represent(&self, target: u64) -> Option<Representation> {
        self.tables
            .represent(target)
            .map(|coefficients| Representation {
                coefficients,
                target,
            })
    }
}

/// `true` when `target` is a nonnegative combination of `gens` (any
/// positive integers, duplicates allowed).
pub fn is_representable(target: u64, gens: &[u64]) -> Result<bool> {
    let set = GeneratorSet::new(gens.iter().copied())?;
    Ok(PrefixTables::new(set.generators())?.contains(target))
}

/// `n * prod(p) - sum(prod(p) / p_i)` for `n + 1` ascending primes: the
/// Frobenius number of the products of all primes but one.
pub fn closed_form_primes(primes: &[u64]) -> Result<u64> {
    if primes.len() < 2 {
        return Err(Error::InvalidGenerators("need at least two primes".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGenerators(
            "primes must be strictly increasing".into(),
        ));
    }
    let product = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(Error::Overflow)?;
    let n = (primes.len() - 1) as u64;
    let sum = primes
        .iter()
        .try_fold(0u64, |acc, &p| acc.checked_add(product / p))
        .ok_or(Error::Overflow)?;
    n.checked_mul(product)
        .and_then(|v| v.checked_sub(sum))
        .ok_or(Error::Overflow)
}

/// The generators `{prod(p) / p_i}` whose Frobenius number
/// [`closed_form_primes`] evaluates.
pub fn prime_quotients(primes: &[u64]) -> Result<Vec<u64>> {
    let product = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(Error::Overflow)?;
    Ok(primes.iter().map(|&p| product / p).collect())
}
