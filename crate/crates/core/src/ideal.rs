//! Ideals with lazily cached reduced Gröbner bases.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, reduce, GroebnerOptions, Vector};
use crate::poly::{Poly, PolyRing};
use crate::solve::Lifting;

#[derive(Debug, Default)]
struct Cache {
    gb: OnceLock<Result<Vec<Poly>>>,
}

/// An ideal given by generators. Clones share the cached basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<Poly>,
    cache: Arc<Cache>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Colon,
}

impl Ideal {
    pub fn new(ring: &PolyRing, gens: Vec<Poly>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Arc::default(),
        }
    }

    pub fn parse(ring: &PolyRing, gens: &[&str]) -> Result<Ideal> {
        let polys = gens
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, polys))
    }

    pub fn zero(ring: &PolyRing) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &PolyRing) -> Ideal {
        Ideal::new(ring, vec![ring.one()])
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// Reduced Gröbner basis (monic, sorted by descending leading term).
    pub fn groebner(&self) -> Result<&[Poly]> {
        self.cache
            .gb
            .get_or_init(|| compute_gb(&self.gens, GroebnerOptions::default()))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    /// Uncached computation with an explicit pair budget.
    pub fn groebner_with(&self, opts: GroebnerOptions) -> Result<Vec<Poly>> {
        compute_gb(&self.gens, opts)
    }

    fn basis_vectors(&self) -> Result<Vec<Vector>> {
        Ok(self
            .groebner()?
            .iter()
            .map(|g| Vector::from_polys([g]))
            .collect())
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        self.check_poly(f)?;
        let r = reduce(&Vector::from_polys([f]), &self.basis_vectors()?);
        Ok(r.to_polys(1).pop().unwrap())
    }

    pub fn contains_poly(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        let basis = self.basis_vectors()?;
        Ok(other
            .gens
            .iter()
            .all(|g| reduce(&Vector::from_polys([g]), &basis).is_zero()))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(|g| g.is_unit()))
    }

    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.is_unit()?)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Equality as ideals: identical reduced bases.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.groebner()? == other.groebner()?)
    }

    pub fn op(&self, other: &Ideal, kind: IdealOp) -> Result<Ideal> {
        match kind {
            IdealOp::Sum => self.sum(other),
            IdealOp::Product => self.product(other),
            IdealOp::Colon => self.colon(other),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Ideal::new(&self.ring, gens))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)))
            .collect();
        Ok(Ideal::new(&self.ring, gens))
    }

    /// `(self : f) = { r | r f ∈ self }`.
    pub fn quotient_by(&self, f: &Poly) -> Result<Ideal> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        // relations r*f + sum c_i g_i = 0; the r-components form the colon ideal
        let mut cols = vec![vec![f.clone()]];
        cols.extend(self.gens.iter().map(|g| vec![g.clone()]));
        let l = Lifting::new(
            &cols,
            1,
            self.ring.nvars(),
            self.ring.field(),
            GroebnerOptions::default(),
        )?;
        let gens = l.syzygies().into_iter().map(|s| s[0].clone()).collect();
        Ok(Ideal::new(&self.ring, gens).reduced()?)
    }

    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            acc = acc.intersect(&self.quotient_by(g)?)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        // kernel of R -> R/I ⊕ R/J through the columns (1,1), (g,0), (0,h)
        let one = self.ring.one();
        let zero = Poly::zero();
        let mut cols = vec![vec![one.clone(), one]];
        cols.extend(self.gens.iter().map(|g| vec![g.clone(), zero.clone()]));
        cols.extend(other.gens.iter().map(|h| vec![zero.clone(), h.clone()]));
        let l = Lifting::new(
            &cols,
            2,
            self.ring.nvars(),
            self.ring.field(),
            GroebnerOptions::default(),
        )?;
        let gens = l.syzygies().into_iter().map(|s| s[0].clone()).collect();
        Ok(Ideal::new(&self.ring, gens).reduced()?)
    }

    /// The same ideal generated by its reduced Gröbner basis.
    pub fn reduced(&self) -> Result<Ideal> {
        let gb = self.groebner()?.to_vec();
        let out = Ideal::new(&self.ring, gb.clone());
        let _ = out.cache.gb.set(Ok(gb));
        Ok(out)
    }

    /// Krull dimension of `R/I`: the largest set of variables no leading
    /// monomial of the reduced basis is supported in. `-1` for the unit ideal.
    pub fn dimension(&self) -> Result<i64> {
        let gb = self.groebner()?;
        let n = self.ring.nvars();
        let leads: Vec<u64> = gb
            .iter()
            .map(|g| {
                g.leading()
                    .unwrap()
                    .0
                    .support()
                    .fold(0u64, |acc, i| acc | (1 << i))
            })
            .collect();
        let mut best: i64 = -1;
        for subset in 0u64..(1u64 << n) {
            let size = subset.count_ones() as i64;
            if size <= best {
                continue;
            }
            // independent iff no leading monomial uses only variables in the subset
            if leads.iter().all(|&l| l & !subset != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn check_poly(&self, f: &Poly) -> Result<()> {
        let n = self.ring.nvars();
        let field = self.ring.field();
        if f.terms()
            .iter()
            .any(|(m, c)| m.nvars() != n || c.field() != field)
        {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }
}

fn compute_gb(gens: &[Poly], opts: GroebnerOptions) -> Result<Vec<Poly>> {
    let vs: Vec<Vector> = gens.iter().map(|g| Vector::from_polys([g])).collect();
    Ok(groebner_basis(&vs, opts)?
        .into_iter()
        .map(|v| v.to_polys(1).pop().unwrap())
        .collect())
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.ring.format(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}
