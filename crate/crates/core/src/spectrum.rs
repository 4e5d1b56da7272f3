//! Finite tables of trusted primes and supports relative to them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::module::PresentedModule;
use crate::poly::PolyRing;

/// A subset of a prime table, as a bit set over entry indices.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct PrimeSet(pub u64);

impl PrimeSet {
    pub const EMPTY: PrimeSet = PrimeSet(0);

    pub fn singleton(i: usize) -> PrimeSet {
        PrimeSet(1 << i)
    }

    pub fn full(n: usize) -> PrimeSet {
        if n == 64 {
            PrimeSet(u64::MAX)
        } else {
            PrimeSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: PrimeSet) -> PrimeSet {
        PrimeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PrimeSet) -> PrimeSet {
        PrimeSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: PrimeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

impl FromIterator<usize> for PrimeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PrimeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Named prime ideals with their containment order and dimensions.
/// Primality itself is trusted.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    ring: PolyRing,
    names: Vec<String>,
    ideals: Vec<Ideal>,
    /// `leq[i][j]` iff `p_i ⊆ p_j`.
    leq: Vec<Vec<bool>>,
    dims: Vec<i64>,
}

pub const MAX_TABLE: usize = 64;

impl PrimeTable {
    pub fn new(ring: &PolyRing, entries: Vec<(String, Ideal)>) -> Result<PrimeTable> {
        if entries.len() > MAX_TABLE {
            return Err(Error::InvalidTable(format!("more than {MAX_TABLE} primes")));
        }
        let mut names = Vec::new();
        let mut ideals = Vec::new();
        for (name, ideal) in entries {
            if name.is_empty() {
                return Err(Error::InvalidTable("empty prime name".into()));
            }
            if names.contains(&name) {
                return Err(Error::InvalidTable(format!(
                    "duplicate prime name {name:?}"
                )));
            }
            if ideal.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if ideal.is_unit()? {
                return Err(Error::InvalidTable(format!("{name} is the unit ideal")));
            }
            names.push(name);
            ideals.push(ideal);
        }
        let n = ideals.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = i == j || ideals[j].contains(&ideals[i])?;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidTable(format!(
                        "{} and {} are the same ideal",
                        names[i], names[j]
                    )));
                }
            }
        }
        let dims = ideals
            .iter()
            .map(|p| p.dimension())
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] && i != j && dims[i] < dims[j] {
                    return Err(Error::InvalidTable(format!(
                        "{} ⊆ {} but dim R/{} < dim R/{}",
                        names[i], names[j], names[i], names[j]
                    )));
                }
            }
        }
        Ok(PrimeTable {
            ring: ring.clone(),
            names,
            ideals,
            leq,
            dims,
        })
    }

    /// Convenience constructor from generator strings.
    pub fn parse(ring: &PolyRing, entries: &[(&str, &[&str])]) -> Result<PrimeTable> {
        let parsed = entries
            .iter()
            .map(|(name, gens)| Ok((name.to_string(), Ideal::parse(ring, gens)?)))
            .collect::<Result<Vec<_>>>()?;
        PrimeTable::new(ring, parsed)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn ideal(&self, i: usize) -> &Ideal {
        &self.ideals[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn prime(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidTable(format!("no prime named {name:?}")))
    }

    /// `p_i ⊆ p_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn dim(&self, i: usize) -> i64 {
        self.dims[i]
    }

    /// Maximal ideals are exactly the entries with `dim R/p = 0`.
    pub fn is_maximal(&self, i: usize) -> bool {
        self.dims[i] == 0
    }

    pub fn all(&self) -> PrimeSet {
        PrimeSet::full(self.len())
    }

    /// `{q | p_i ⊆ q}`.
    pub fn v_of(&self, i: usize) -> PrimeSet {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    /// Entries of `s` with no strictly smaller entry of `s`.
    pub fn minimal_in(&self, s: PrimeSet) -> PrimeSet {
        s.iter()
            .filter(|&i| !s.iter().any(|j| j != i && self.leq[j][i]))
            .collect()
    }

    pub fn is_up_closed(&self, s: PrimeSet) -> bool {
        s.iter().all(|i| self.v_of(i).is_subset(s))
    }

    pub fn up_closure(&self, s: PrimeSet) -> PrimeSet {
        s.iter()
            .fold(PrimeSet::EMPTY, |acc, i| acc.union(self.v_of(i)))
    }

    /// Every up-closed subset, in increasing numeric order of the bit set.
    pub fn up_sets(&self) -> Vec<PrimeSet> {
        assert!(self.len() <= 20, "up-set enumeration is for small tables");
        (0..(1u64 << self.len()))
            .map(PrimeSet)
            .filter(|&s| self.is_up_closed(s))
            .collect()
    }

    pub fn format_set(&self, s: PrimeSet) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|i| self.names[i].clone()).collect();
        v.sort();
        v
    }

    /// Support of a module with annihilator already computed.
    pub fn support_of_annihilator(&self, ann: &Ideal) -> Result<PrimeSet> {
        let mut out = PrimeSet::EMPTY;
        for i in 0..self.len() {
            if self.ideals[i].contains(ann)? {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `{p | Ann M ⊆ p}`.
    pub fn module_support(&self, m: &PresentedModule) -> Result<PrimeSet> {
        if m.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if m.is_zero_module()? {
            return Ok(PrimeSet::EMPTY);
        }
        self.support_of_annihilator(&m.annihilator()?)
    }
}

impl fmt::Display for PrimeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .names
            .iter()
            .zip(&self.ideals)
            .map(|(n, p)| format!("{n} = {p}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `p ∈ Supp M`, decided as `Ann M ⊆ p`.
pub fn supp_member(m: &PresentedModule, table: &PrimeTable, p: usize) -> Result<bool> {
    if m.ring() != table.ring() {
        return Err(Error::RingMismatch);
    }
    if m.is_zero_module()? {
        return Ok(false);
    }
    table.ideal(p).contains(&m.annihilator()?)
}

/// Degreewise support of the homology over the table.
pub fn supp_complex(c: &FreeComplex, table: &PrimeTable) -> Result<BTreeMap<i64, PrimeSet>> {
    if c.ring() != table.ring() {
        return Err(Error::RingMismatch);
    }
    let mut out = BTreeMap::new();
    for n in c.lo()..=c.hi() {
        let s = table.module_support(&c.homology(n)?)?;
        debug_assert!(table.is_up_closed(s));
        out.insert(n, s);
    }
    Ok(out)
}

/// Per-call memo of homology supports keyed by connected component.
#[derive(Default)]
pub struct SupportCache {
    memo: HashMap<FreeComplex, BTreeMap<i64, PrimeSet>>,
}

impl SupportCache {
    pub fn new() -> SupportCache {
        SupportCache::default()
    }

    /// Same as [`supp_complex`], computed component by component.
    pub fn supp_complex(
        &mut self,
        c: &FreeComplex,
        table: &PrimeTable,
    ) -> Result<BTreeMap<i64, PrimeSet>> {
        let mut out: BTreeMap<i64, PrimeSet> = BTreeMap::new();
        for piece in c.components() {
            if piece.is_zero() {
                continue;
            }
            let offset = piece.lo();
            let key = piece.shift(-offset);
            let supp = match self.memo.get(&key) {
                Some(s) => s.clone(),
                None => {
                    let s = supp_complex(&key, table)?;
                    self.memo.insert(key, s.clone());
                    s
                }
            };
            for (n, s) in supp {
                let e = out.entry(n + offset).or_default();
                *e = e.union(s);
            }
        }
        Ok(out)
    }
}
