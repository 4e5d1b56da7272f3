//! Perversity functions over a prime table, the invariant φ and the generator S(f).
//!
//! On the class generated by a set of complexes, φ(n) is the union of the
//! supports of all `H_i` with `i ≤ n`: suspension closure gives the lower
//! bound, and the vanishing of `Supp H_i(X)` for `i ≤ n` on every object the
//! class can reach gives the upper bound.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::module::PresentedModule;
use crate::spectrum::{PrimeSet, PrimeTable, SupportCache};

/// A monotone function `Z -> up-sets of the table`, stored on a window.
///
/// Below the window the value is `∅`; above it the value is constant.
#[derive(Clone, Debug)]
pub struct PerversityFunction {
    table: Arc<PrimeTable>,
    lo: i64,
    values: Vec<PrimeSet>,
}

impl PerversityFunction {
    pub fn new(
        table: &Arc<PrimeTable>,
        lo: i64,
        values: Vec<PrimeSet>,
    ) -> Result<PerversityFunction> {
        let full = table.all();
        for (k, &v) in values.iter().enumerate() {
            let n = lo + k as i64;
            if !v.is_subset(full) {
                return Err(Error::InvalidPerversity(format!(
                    "value at {n} names primes outside the table"
                )));
            }
            if !table.is_up_closed(v) {
                return Err(Error::InvalidPerversity(format!(
                    "value at {n} is not closed under specialization"
                )));
            }
            if k > 0 && !values[k - 1].is_subset(v) {
                return Err(Error::InvalidPerversity(format!(
                    "not monotone between {} and {n}",
                    n - 1
                )));
            }
        }
        Ok(PerversityFunction {
            table: table.clone(),
            lo,
            values,
        })
    }

    /// The function that is `∅` everywhere.
    pub fn empty(table: &Arc<PrimeTable>) -> PerversityFunction {
        PerversityFunction {
            table: table.clone(),
            lo: 0,
            values: Vec::new(),
        }
    }

    pub fn table(&self) -> &Arc<PrimeTable> {
        &self.table
    }

    /// `None` for the empty function.
    pub fn window(&self) -> Option<(i64, i64)> {
        if self.values.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.values.len() as i64 - 1))
        }
    }

    pub fn values(&self) -> &[PrimeSet] {
        &self.values
    }

    pub fn value(&self, n: i64) -> PrimeSet {
        if self.values.is_empty() || n < self.lo {
            return PrimeSet::EMPTY;
        }
        let k = ((n - self.lo) as usize).min(self.values.len() - 1);
        self.values[k]
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    /// Smallest window describing the same function.
    pub fn canonical(&self) -> PerversityFunction {
        let mut a = 0;
        while a < self.values.len() && self.values[a].is_empty() {
            a += 1;
        }
        let mut b = self.values.len();
        while b > a + 1 && self.values[b - 1] == self.values[b - 2] {
            b -= 1;
        }
        if a == self.values.len() {
            return PerversityFunction::empty(&self.table);
        }
        PerversityFunction {
            table: self.table.clone(),
            lo: self.lo + a as i64,
            values: self.values[a..b].to_vec(),
        }
    }

    /// Degrees where `self` and `other` can differ, with one degree of margin.
    fn comparison_range(&self, other: &PerversityFunction) -> Option<(i64, i64)> {
        match (self.window(), other.window()) {
            (None, None) => None,
            (Some(w), None) | (None, Some(w)) => Some((w.0 - 1, w.1 + 1)),
            (Some(a), Some(b)) => Some((a.0.min(b.0) - 1, a.1.max(b.1) + 1)),
        }
    }

    /// First degree where the two functions differ.
    pub fn first_difference(&self, other: &PerversityFunction) -> Option<i64> {
        let (a, b) = self.comparison_range(other)?;
        (a..=b).find(|&n| self.value(n) != other.value(n))
    }

    /// `self(n) ⊆ other(n)` for all `n`.
    pub fn le(&self, other: &PerversityFunction) -> bool {
        match self.comparison_range(other) {
            None => true,
            Some((a, b)) => (a..=b).all(|n| self.value(n).is_subset(other.value(n))),
        }
    }

    pub fn to_serial(&self, table_name: &str) -> SerialPerversity {
        let values = self
            .window()
            .map(|(a, b)| {
                (a..=b)
                    .map(|n| (n, self.table.format_set(self.value(n))))
                    .collect()
            })
            .unwrap_or_default();
        SerialPerversity {
            table: table_name.to_string(),
            window: self.window(),
            values,
        }
    }

    pub fn from_serial(
        table: &Arc<PrimeTable>,
        s: &SerialPerversity,
    ) -> Result<PerversityFunction> {
        let Some((a, b)) = s.window else {
            if !s.values.is_empty() {
                return Err(Error::InvalidPerversity(
                    "values given for an empty window".into(),
                ));
            }
            return Ok(PerversityFunction::empty(table));
        };
        if b < a {
            return Err(Error::InvalidPerversity(format!(
                "window [{a}, {b}] is empty"
            )));
        }
        if let Some(n) = s.values.keys().find(|&&n| n < a || n > b) {
            return Err(Error::InvalidPerversity(format!(
                "degree {n} outside the window"
            )));
        }
        let mut values = Vec::new();
        for n in a..=b {
            let mut v = PrimeSet::EMPTY;
            for name in s.values.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
                let i = table
                    .index_of(name)
                    .ok_or_else(|| Error::InvalidPerversity(format!("unknown prime {name:?}")))?;
                v.insert(i);
            }
            values.push(v);
        }
        PerversityFunction::new(table, a, values)
    }
}

impl PartialEq for PerversityFunction {
    fn eq(&self, other: &PerversityFunction) -> bool {
        self.table.names() == other.table.names() && self.first_difference(other).is_none()
    }
}

impl fmt::Display for PerversityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.window() {
            None => write!(f, "∅"),
            Some((a, b)) => {
                let parts: Vec<String> = (a..=b)
                    .map(|n| {
                        format!(
                            "{n}: {{{}}}",
                            self.table.format_set(self.value(n)).join(", ")
                        )
                    })
                    .collect();
                write!(f, "{}", parts.join("; "))
            }
        }
    }
}

/// Serialized form: table name, window and the prime names per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialPerversity {
    pub table: String,
    pub window: Option<(i64, i64)>,
    pub values: BTreeMap<i64, Vec<String>>,
}

/// `φ(n) = ∪_{i ≤ n} ∪_M Supp H_i(M)` over the table.
pub fn phi(objects: &[FreeComplex], table: &Arc<PrimeTable>) -> Result<PerversityFunction> {
    phi_with(&mut SupportCache::new(), objects, table)
}

pub fn phi_with(
    cache: &mut SupportCache,
    objects: &[FreeComplex],
    table: &Arc<PrimeTable>,
) -> Result<PerversityFunction> {
    let mut degreewise: BTreeMap<i64, PrimeSet> = BTreeMap::new();
    for c in objects {
        if c.ring() != table.ring() {
            return Err(Error::RingMismatch);
        }
        for (n, s) in cache.supp_complex(c, table)? {
            if !s.is_empty() {
                let e = degreewise.entry(n).or_default();
                *e = e.union(s);
            }
        }
    }
    let (Some(&lo), Some(&hi)) = (degreewise.keys().next(), degreewise.keys().next_back()) else {
        return Ok(PerversityFunction::empty(table));
    };
    let mut acc = PrimeSet::EMPTY;
    let values = (lo..=hi)
        .map(|n| {
            acc = acc.union(degreewise.get(&n).copied().unwrap_or_default());
            acc
        })
        .collect();
    PerversityFunction::new(table, lo, values)
}

/// The complex `⊕_n ⊕_{p ∈ f(n)} Σⁿ R/p`, with the summands listed.
#[derive(Clone, Debug)]
pub struct Generator {
    pub complex: FreeComplex,
    /// `(degree, prime index)` per summand, in the order they were summed.
    pub summands: Vec<(i64, usize)>,
    /// The constant part of the function above its window was left out.
    pub tail_omitted: bool,
}

/// Builds generators, resolving each `R/p` once.
pub struct GeneratorBuilder {
    table: Arc<PrimeTable>,
    resolutions: HashMap<usize, FreeComplex>,
}

impl GeneratorBuilder {
    pub fn new(table: &Arc<PrimeTable>) -> GeneratorBuilder {
        GeneratorBuilder {
            table: table.clone(),
            resolutions: HashMap::new(),
        }
    }

    /// A free resolution of `R/p` in degree 0.
    pub fn residue(&mut self, p: usize) -> Result<FreeComplex> {
        if let Some(c) = self.resolutions.get(&p) {
            return Ok(c.clone());
        }
        let ring = self.table.ring();
        let res = PresentedModule::quotient(self.table.ideal(p)).free_resolution(ring.nvars())?;
        self.resolutions.insert(p, res.complex.clone());
        Ok(res.complex)
    }

    /// `⊕_n ⊕_{p ∈ sets[n]} Σⁿ R/p`; the sets need not be monotone.
    pub fn from_sets(&mut self, sets: &BTreeMap<i64, PrimeSet>) -> Result<Generator> {
        let mut parts = Vec::new();
        let mut summands = Vec::new();
        for (&n, s) in sets {
            for p in s.iter() {
                parts.push(self.residue(p)?.shift(n));
                summands.push((n, p));
            }
        }
        let refs: Vec<&FreeComplex> = parts.iter().collect();
        let complex = if refs.is_empty() {
            FreeComplex::zero(self.table.ring())
        } else {
            FreeComplex::direct_sum(self.table.ring(), &refs)?
        };
        Ok(Generator {
            complex,
            summands,
            tail_omitted: false,
        })
    }

    pub fn build(&mut self, f: &PerversityFunction) -> Result<Generator> {
        check_table(f, &self.table)?;
        let sets: BTreeMap<i64, PrimeSet> = match f.window() {
            None => BTreeMap::new(),
            Some((a, b)) => (a..=b).map(|n| (n, f.value(n))).collect(),
        };
        let mut g = self.from_sets(&sets)?;
        g.tail_omitted = !f.is_empty();
        Ok(g)
    }
}

fn check_table(f: &PerversityFunction, table: &Arc<PrimeTable>) -> Result<()> {
    if !Arc::ptr_eq(f.table(), table) && f.table().names() != table.names() {
        return Err(Error::InvalidPerversity(
            "function belongs to a different table".into(),
        ));
    }
    Ok(())
}

/// `S(f)`.
pub fn build_s(f: &PerversityFunction) -> Result<Generator> {
    GeneratorBuilder::new(f.table()).build(f)
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub degree: i64,
    pub expected: Vec<String>,
    pub found: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub passed: bool,
    pub summands: usize,
    pub discrepancy: Option<Discrepancy>,
}

/// Checks `φ(S(f)) = f`.
pub fn roundtrip_check(f: &PerversityFunction) -> Result<RoundtripReport> {
    let mut builder = GeneratorBuilder::new(f.table());
    roundtrip_with(&mut builder, &mut SupportCache::new(), f)
}

pub fn roundtrip_with(
    builder: &mut GeneratorBuilder,
    cache: &mut SupportCache,
    f: &PerversityFunction,
) -> Result<RoundtripReport> {
    let g = builder.build(f)?;
    let back = phi_with(cache, &[g.complex], f.table())?;
    let table = f.table();
    let discrepancy = f.first_difference(&back).map(|n| Discrepancy {
        degree: n,
        expected: table.format_set(f.value(n)),
        found: table.format_set(back.value(n)),
    });
    Ok(RoundtripReport {
        passed: discrepancy.is_none(),
        summands: g.summands.len(),
        discrepancy,
    })
}

/// Every valid function with window `[lo, lo + len - 1]`.
///
/// Any function whose window has length at most `len` is equal to exactly
/// one of these after translation.
pub fn enumerate(table: &Arc<PrimeTable>, lo: i64, len: usize) -> Vec<PerversityFunction> {
    let ups = table.up_sets();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(len);
    fn go(
        table: &Arc<PrimeTable>,
        ups: &[PrimeSet],
        lo: i64,
        len: usize,
        seq: &mut Vec<PrimeSet>,
        out: &mut Vec<PerversityFunction>,
    ) {
        if seq.len() == len {
            out.push(PerversityFunction {
                table: table.clone(),
                lo,
                values: seq.clone(),
            });
            return;
        }
        let prev = seq.last().copied().unwrap_or_default();
        for &u in ups {
            if prev.is_subset(u) {
                seq.push(u);
                go(table, ups, lo, len, seq, out);
                seq.pop();
            }
        }
    }
    go(table, &ups, lo, len, &mut seq, &mut out);
    out
}
