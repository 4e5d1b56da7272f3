//! Koszul complexes as iterated cones, and the constructions living on them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{check_homotopy, cone, ChainMap, FreeComplex, Homotopy};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linsys::HomotopySystem;
use crate::matrix::RingMatrix;
use crate::module::{lifting, relative_syzygies};
use crate::poly::{Poly, PolyRing};
use crate::spectrum::PrimeTable;

/// Generators `x_1..x_k` with exponents `n_1..n_k`, describing
/// `K(x_1^{n_1}, ..., x_k^{n_k})`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulSpec {
    ring: PolyRing,
    generators: Vec<Poly>,
    powers: Vec<u32>,
}

impl KoszulSpec {
    pub fn new(ring: &PolyRing, generators: Vec<Poly>, powers: Vec<u32>) -> Result<KoszulSpec> {
        if generators.is_empty() {
            return Err(Error::Precondition(
                "a Koszul complex needs at least one generator".into(),
            ));
        }
        if generators.len() != powers.len() {
            return Err(Error::Precondition(format!(
                "{} generators but {} powers",
                generators.len(),
                powers.len()
            )));
        }
        if let Some(i) = generators.iter().position(|g| g.is_zero()) {
            return Err(Error::Precondition(format!("generator {i} is zero")));
        }
        if powers.iter().any(|&p| p == 0) {
            return Err(Error::Precondition("powers must be positive".into()));
        }
        Ok(KoszulSpec {
            ring: ring.clone(),
            generators,
            powers,
        })
    }

    /// All powers one.
    pub fn plain(ring: &PolyRing, generators: Vec<Poly>) -> Result<KoszulSpec> {
        let k = generators.len();
        KoszulSpec::new(ring, generators, vec![1; k])
    }

    pub fn of_ideal(ideal: &Ideal) -> Result<KoszulSpec> {
        KoszulSpec::plain(ideal.ring(), ideal.generators().to_vec())
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn powers(&self) -> &[u32] {
        &self.powers
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `x_j^{n_j}`.
    pub fn element(&self, j: usize) -> Poly {
        self.generators[j].pow(self.powers[j], &self.ring)
    }
}

/// `cone(c · id_K)`.
pub fn koszul_step(k: &FreeComplex, c: &Poly) -> Result<FreeComplex> {
    cone(&ChainMap::identity(k).scale(c))
}

/// `K(0) = R` and `K(j) = cone(x_j^{n_j}: K(j-1) -> K(j-1))`.
pub fn koszul(spec: &KoszulSpec) -> Result<FreeComplex> {
    let mut k = FreeComplex::free(&spec.ring, 0, 1);
    for j in 0..spec.len() {
        k = koszul_step(&k, &spec.element(j))?;
    }
    Ok(k)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeAnnihilation {
    pub degree: i64,
    /// Whether `x_j^{n_j}` kills `H_degree`, per generator.
    pub killed: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilationReport {
    pub degrees: Vec<DegreeAnnihilation>,
    pub passed: bool,
}

/// Checks that each `x_j^{n_j}` kills every `H_i(M ⊗ K(spec))`.
pub fn check_annihilation(m: &FreeComplex, spec: &KoszulSpec) -> Result<AnnihilationReport> {
    if m.ring() != spec.ring() {
        return Err(Error::RingMismatch);
    }
    let t = m.tensor(&koszul(spec)?)?;
    let mut degrees = Vec::new();
    for n in t.lo()..=t.hi() {
        let h = t.homology(n)?;
        let killed = (0..spec.len())
            .map(|j| h.is_annihilated_by(&spec.element(j)))
            .collect::<Result<Vec<_>>>()?;
        degrees.push(DegreeAnnihilation { degree: n, killed });
    }
    let passed = degrees.iter().all(|d| d.killed.iter().all(|&k| k));
    Ok(AnnihilationReport { degrees, passed })
}

pub const DEFAULT_POWER_BUDGET: u32 = 16;

/// A null-homotopy of `x^power · f`.
#[derive(Clone, Debug)]
pub struct PowerWitness {
    pub power: u32,
    pub homotopy: Homotopy,
    /// Exponent reached by the degreewise filtration induction.
    pub induction_bound: u32,
}

/// Least `l ≤ budget` with `x^l f ≃ 0`, with a homotopy.
///
/// The induction over the brutal filtration of the source gives a first
/// witness; the global linear solve then confirms no smaller power works.
pub fn annihilator_power(f: &ChainMap, x: &Poly, budget: u32) -> Result<PowerWitness> {
    let ring = f.ring().clone();
    if x.is_unit() {
        return Err(Error::Precondition("x must be a nonunit".into()));
    }
    let (src, tgt) = (f.source(), f.target());
    for n in tgt.lo()..=tgt.hi() {
        let h = tgt.homology(n)?;
        if !h.is_annihilated_by(&x.pow(budget, &ring))? {
            return Err(Error::Precondition(format!(
                "H_{n} of the target is not killed by x^{budget}"
            )));
        }
    }

    let mut h: BTreeMap<i64, RingMatrix> = BTreeMap::new();
    let mut total = 0u32;
    for i in src.lo()..=src.hi() {
        if src.rank(i) == 0 {
            continue;
        }
        let prev = h
            .get(&(i - 1))
            .cloned()
            .unwrap_or_else(|| RingMatrix::zeros(&ring, tgt.rank(i), src.rank(i - 1)));
        let g = f
            .component(i)
            .scale(&x.pow(total, &ring))
            .sub(&prev.mul(&src.d(i))?)?;
        let (b, hi) = boundary_power(&g, tgt, i, x, budget)?;
        if b > 0 {
            let xb = x.pow(b, &ring);
            for m in h.values_mut() {
                *m = m.scale(&xb);
            }
        }
        total += b;
        if total > budget {
            return Err(Error::Budget(format!("power budget {budget} exhausted")));
        }
        h.insert(i, hi);
    }
    let induction = Homotopy::new(src, tgt, h)?;
    let xl = |l: u32| x.pow(l, &ring);
    debug_assert!(check_homotopy(
        &f.scale(&xl(total)),
        &ChainMap::zero(src, tgt),
        &induction
    )?);

    if total == 0 {
        return Ok(PowerWitness {
            power: 0,
            homotopy: induction,
            induction_bound: 0,
        });
    }
    let system = HomotopySystem::new(src, tgt)?;
    for l in 0..total {
        if let Some(hom) = system.null_homotopy(f, Some(&xl(l)))? {
            return Ok(PowerWitness {
                power: l,
                homotopy: hom,
                induction_bound: total,
            });
        }
    }
    Ok(PowerWitness {
        power: total,
        homotopy: induction,
        induction_bound: total,
    })
}

/// Least `b` with `x^b g = d_{i+1} h`, and such an `h`.
fn boundary_power(
    g: &RingMatrix,
    tgt: &FreeComplex,
    i: i64,
    x: &Poly,
    budget: u32,
) -> Result<(u32, RingMatrix)> {
    let ring = tgt.ring().clone();
    let rows = tgt.rank(i + 1);
    if g.is_zero() {
        return Ok((0, RingMatrix::zeros(&ring, rows, g.cols())));
    }
    let d = tgt.d(i + 1);
    let l = if rows > 0 { Some(lifting(&d)?) } else { None };
    let mut xb = ring.one();
    for b in 0..=budget {
        let target = g.scale(&xb);
        if target.is_zero() {
            return Ok((b, RingMatrix::zeros(&ring, rows, g.cols())));
        }
        if let Some(l) = &l {
            let sols: Option<Vec<Vec<Poly>>> = (0..target.cols())
                .map(|j| l.solve(&target.column(j)))
                .collect();
            if let Some(cols) = sols {
                return Ok((b, RingMatrix::from_columns(&ring, rows, &cols)?));
            }
        }
        xb = xb.mul(x);
    }
    Err(Error::Budget(format!(
        "no power of x up to {budget} bounds the cycles in degree {i}"
    )))
}

/// A map `Σ^n K'(p) -> M` that is nonzero at `p`.
#[derive(Clone, Debug)]
pub struct MinsuppMap {
    pub map: ChainMap,
    pub powers: Vec<u32>,
    /// Product of the multipliers outside `p` applied while extending.
    pub multiplier: Poly,
    /// Index of the chosen cycle among the generators of `H_n(M)`.
    pub cycle_index: usize,
    /// `H_n` of the map is nonzero and its image has annihilator inside `p`.
    pub postcondition: bool,
}

/// Builds a map from `Σ^n K(x_1^{n_1}, ..., x_k^{n_k})` into `M` by extending
/// a cycle through one cone at a time. At each step the exponent is the least
/// `l` with `x_j^l f` killed by something outside `p`, and `f` is rescaled by
/// such an element so the extension exists globally.
pub fn minsupp_map(
    m: &FreeComplex,
    table: &PrimeTable,
    p: usize,
    n: i64,
    budget: u32,
) -> Result<MinsuppMap> {
    let ring = m.ring().clone();
    let prime = table.ideal(p).clone();
    let supports = crate::spectrum::supp_complex(m, table)?;
    let supp_n = supports.get(&n).copied().unwrap_or_default();
    if !supp_n.contains(p) {
        return Err(Error::Precondition(format!(
            "{} is not in Supp H_{n}",
            table.name(p)
        )));
    }
    let all = supports
        .values()
        .fold(Default::default(), |a: crate::spectrum::PrimeSet, &s| {
            a.union(s)
        });
    if !table.minimal_in(all).contains(p) {
        return Err(Error::Precondition(format!(
            "{} is not minimal in Supp M",
            table.name(p)
        )));
    }

    let mm = m.shift(-n);
    let data = mm.homology_data(0)?;
    let d1 = mm.d(1);
    let mut chosen = None;
    for j in 0..data.cycles.cols() {
        let z = data.cycles.select_columns(&[j]);
        let rel = relative_syzygies(&z, &d1)?;
        let ann = Ideal::new(
            &ring,
            (0..rel.cols()).map(|c| rel.get(0, c).clone()).collect(),
        );
        if !ann.is_unit()? && prime.contains(&ann)? {
            chosen = Some((j, z));
            break;
        }
    }
    let (cycle_index, z) = chosen
        .ok_or_else(|| Error::Precondition("no cycle class with annihilator inside p".into()))?;

    let mut k = FreeComplex::free(&ring, 0, 1);
    let mut comps = BTreeMap::new();
    comps.insert(0, z);
    let mut f = ChainMap::new(&k, &mm, comps)?;
    let mut powers = Vec::new();
    let mut multiplier = ring.one();
    for x in prime.generators() {
        let system = HomotopySystem::new(&k, &mm)?;
        let ann = system.annihilator(&f)?;
        let mut found = None;
        let mut xl = x.clone();
        for l in 1..=budget {
            let colon = ann.quotient_by(&xl)?;
            if let Some(s) = outside(&colon, &prime)? {
                found = Some((l, s, xl.clone()));
                break;
            }
            xl = xl.mul(x);
        }
        let (l, s, xl) =
            found.ok_or_else(|| Error::Budget(format!("power budget {budget} exhausted")))?;
        f = f.scale(&s);
        multiplier = multiplier.mul(&s);
        let h = system
            .null_homotopy(&f, Some(&xl))?
            .ok_or_else(|| Error::NoSolution("extension homotopy".into()))?;
        let next = koszul_step(&k, &xl)?;
        let mut comps = BTreeMap::new();
        for deg in next.lo()..=next.hi() {
            let (a, b) = (k.rank(deg - 1), k.rank(deg));
            if mm.rank(deg) == 0 || a + b == 0 {
                continue;
            }
            let mut c = RingMatrix::zeros(&ring, mm.rank(deg), a + b);
            c.paste(0, 0, &h.component(deg - 1).neg());
            c.paste(0, a, &f.component(deg));
            comps.insert(deg, c);
        }
        f = ChainMap::new(&next, &mm, comps)?;
        k = next;
        powers.push(l);
    }
    let map = f.shift(n);
    let hm = map.homology_map(n)?;
    let postcondition = !hm.is_zero_map()? && prime.contains(&hm.image_annihilator()?)?;
    Ok(MinsuppMap {
        map,
        powers,
        multiplier,
        cycle_index,
        postcondition,
    })
}

/// `1` when the ideal is the unit ideal, else its first basis element outside `p`.
pub(crate) fn outside(ideal: &Ideal, p: &Ideal) -> Result<Option<Poly>> {
    if ideal.is_unit()? {
        return Ok(Some(ideal.ring().one()));
    }
    for g in ideal.groebner()? {
        if !p.contains_poly(g)? {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}
