//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nullity_core::{
    ChainMap, Coeff, FreeComplex, Monomial, Poly, PolyRing, PresentedModule, RingMatrix,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------- generators

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u16>> {
    if nvars == 1 {
        return vec![vec![d as u16]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - a) {
            rest.insert(0, a as u16);
            out.push(rest);
        }
    }
    out
}

pub fn monomial_poly(r: &PolyRing, exps: &[u16], c: i64) -> Poly {
    Poly::monomial(Monomial::from_exponents(exps), r.field().from_i64(c))
}

/// Homogeneous of degree `d` with small integer coefficients, never zero.
pub fn rand_homogeneous(g: &mut ChaCha8Rng, r: &PolyRing, d: u32) -> Poly {
    let monos = monomials_of_degree(r.nvars(), d);
    loop {
        let mut p = Poly::zero();
        for m in &monos {
            if g.gen_bool(0.6) {
                let c = g.gen_range(-3..=3);
                if c != 0 {
                    p = p.add(&monomial_poly(r, m, c));
                }
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Degree at most `d`, possibly zero when `allow_zero`.
pub fn rand_poly(g: &mut ChaCha8Rng, r: &PolyRing, d: u32, allow_zero: bool) -> Poly {
    loop {
        let mut p = Poly::zero();
        for k in 0..=d {
            for m in monomials_of_degree(r.nvars(), k) {
                if g.gen_bool(0.35) {
                    let c = g.gen_range(-3..=3);
                    if c != 0 {
                        p = p.add(&monomial_poly(r, &m, c));
                    }
                }
            }
        }
        if allow_zero || !p.is_zero() {
            return p;
        }
    }
}

/// A complex with basis weights making every differential homogeneous
/// (all weights zero for ungraded instances).
#[derive(Clone, Debug)]
pub struct Instance {
    pub complex: FreeComplex,
    pub weights: BTreeMap<i64, Vec<u32>>,
    /// Base change applied in each degree, `new = U · old`.
    pub base: BTreeMap<i64, (RingMatrix, RingMatrix)>,
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub lo: i64,
    pub len: i64,
    pub max_rank: usize,
    pub max_degree: u32,
    pub graded: bool,
    pub base_changes: usize,
    pub base_degree: u32,
}

impl Default for Shape {
    fn default() -> Shape {
        Shape {
            lo: 0,
            len: 3,
            max_rank: 3,
            max_degree: 2,
            graded: false,
            base_changes: 2,
            base_degree: 1,
        }
    }
}

struct Builder {
    ranks: BTreeMap<i64, usize>,
    weights: BTreeMap<i64, Vec<u32>>,
    // (degree of source, row, col, entry)
    entries: Vec<(i64, usize, usize, Poly)>,
}

impl Builder {
    fn add_basis(&mut self, n: i64, w: u32) -> usize {
        let r = self.ranks.entry(n).or_insert(0);
        *r += 1;
        self.weights.entry(n).or_default().push(w);
        *r - 1
    }
}

fn piece_poly(g: &mut ChaCha8Rng, r: &PolyRing, s: &Shape) -> Poly {
    let d = g.gen_range(0..=s.max_degree);
    if s.graded {
        rand_homogeneous(g, r, d.max(1))
    } else {
        rand_poly(g, r, d, false)
    }
}

/// Direct sum of elementary pieces, then a unimodular base change in every degree.
pub fn random_instance(g: &mut ChaCha8Rng, r: &PolyRing, s: Shape) -> Instance {
    let hi = s.lo + s.len - 1;
    let mut b = Builder {
        ranks: BTreeMap::new(),
        weights: BTreeMap::new(),
        entries: Vec::new(),
    };
    let count = |b: &Builder, n: i64| b.ranks.get(&n).copied().unwrap_or(0);
    let tries = g.gen_range(1..=2 * s.max_rank as i64 * s.len.max(1)) as usize;
    for _ in 0..tries {
        let kind = g.gen_range(0..10);
        let n = g.gen_range(s.lo..=hi);
        let w = if s.graded { g.gen_range(0..=1) } else { 0 };
        if kind < 3 {
            if count(&b, n) < s.max_rank {
                b.add_basis(n, w);
            }
        } else if kind < 8 || r.nvars() == 1 {
            if n > s.lo && count(&b, n) < s.max_rank && count(&b, n - 1) < s.max_rank {
                let f = piece_poly(g, r, &s);
                let df = f.total_degree().unwrap_or(0);
                let bot = b.add_basis(n - 1, w);
                let top = b.add_basis(n, w + if s.graded { df } else { 0 });
                b.entries.push((n, bot, top, f));
            }
        } else if n >= s.lo + 2
            && count(&b, n) < s.max_rank
            && count(&b, n - 1) + 1 < s.max_rank
            && count(&b, n - 2) < s.max_rank
        {
            let f = piece_poly(g, r, &s);
            let h = piece_poly(g, r, &s);
            let (df, dh) = if s.graded {
                (f.total_degree().unwrap(), h.total_degree().unwrap())
            } else {
                (0, 0)
            };
            let bot = b.add_basis(n - 2, w);
            let m1 = b.add_basis(n - 1, w + df);
            let m2 = b.add_basis(n - 1, w + dh);
            let top = b.add_basis(n, w + df + dh);
            b.entries.push((n - 1, bot, m1, f.clone()));
            b.entries.push((n - 1, bot, m2, h.clone()));
            b.entries.push((n, m1, top, h));
            b.entries.push((n, m2, top, f.neg()));
        }
    }
    let ranks: Vec<usize> = (s.lo..=hi).map(|n| count(&b, n)).collect();
    let mut diffs: BTreeMap<i64, RingMatrix> = BTreeMap::new();
    for n in s.lo + 1..=hi {
        diffs.insert(n, RingMatrix::zeros(r, count(&b, n - 1), count(&b, n)));
    }
    for (n, i, j, p) in &b.entries {
        let m = diffs.get_mut(n).unwrap();
        let v = m.get(*i, *j).add(p);
        m.set(*i, *j, v);
    }

    // unimodular base changes
    let mut base = BTreeMap::new();
    for n in s.lo..=hi {
        let ws = b.weights.get(&n).cloned().unwrap_or_default();
        let (u, uinv) = random_unimodular(g, r, &ws, s.base_changes, s.graded, s.base_degree);
        base.insert(n, (u, uinv));
    }
    for n in s.lo + 1..=hi {
        let d = &diffs[&n];
        let nd = base[&(n - 1)].0.mul(d).unwrap().mul(&base[&n].1).unwrap();
        diffs.insert(n, nd);
    }
    let complex = FreeComplex::from_map(r, s.lo, ranks, &diffs).unwrap();
    complex.validate().unwrap();
    Instance {
        complex,
        weights: b.weights,
        base,
    }
}

/// A product of elementary matrices and its inverse. In the graded case
/// entry `(i, j)` has degree `w_j - w_i`.
pub fn random_unimodular(
    g: &mut ChaCha8Rng,
    r: &PolyRing,
    ws: &[u32],
    steps: usize,
    graded: bool,
    degree: u32,
) -> (RingMatrix, RingMatrix) {
    let k = ws.len();
    let mut u = RingMatrix::identity(r, k);
    let mut uinv = RingMatrix::identity(r, k);
    if k < 2 {
        return (u, uinv);
    }
    for _ in 0..steps {
        let i = g.gen_range(0..k);
        let mut j = g.gen_range(0..k);
        while j == i {
            j = g.gen_range(0..k);
        }
        let c = if graded {
            if ws[j] < ws[i] {
                continue;
            }
            rand_homogeneous(g, r, ws[j] - ws[i])
        } else {
            rand_poly(g, r, degree, false)
        };
        let mut e = RingMatrix::identity(r, k);
        e.set(i, j, c.clone());
        let mut einv = RingMatrix::identity(r, k);
        einv.set(i, j, c.neg());
        u = e.mul(&u).unwrap();
        uinv = uinv.mul(&einv).unwrap();
    }
    (u, uinv)
}

/// `f: X -> Y` with `Y` a base-changed `X ⊕ Z`, `f = c · inclusion + d h + h d`.
pub fn random_chain_map(g: &mut ChaCha8Rng, r: &PolyRing, s: Shape) -> ChainMap {
    let x = random_instance(g, r, s);
    let z = random_instance(
        g,
        r,
        Shape {
            base_changes: 0,
            ..s
        },
    );
    let x0 = &x.complex;
    let sum = FreeComplex::direct_sum(r, &[x0, &z.complex]).unwrap();
    let mut base = BTreeMap::new();
    for n in sum.lo()..=sum.hi() {
        let ws = vec![0; sum.rank(n)];
        base.insert(
            n,
            random_unimodular(g, r, &ws, s.base_changes, false, s.base_degree),
        );
    }
    let mut diffs = BTreeMap::new();
    for n in sum.lo() + 1..=sum.hi() {
        diffs.insert(
            n,
            base[&(n - 1)]
                .0
                .mul(&sum.d(n))
                .unwrap()
                .mul(&base[&n].1)
                .unwrap(),
        );
    }
    let ranks: Vec<usize> = (sum.lo()..=sum.hi()).map(|n| sum.rank(n)).collect();
    let y = FreeComplex::from_map(r, sum.lo(), ranks, &diffs).unwrap();
    let c = rand_poly(g, r, 1, false);
    let mut comps = BTreeMap::new();
    for n in x0.lo()..=x0.hi() {
        if x0.rank(n) == 0 || y.rank(n) == 0 {
            continue;
        }
        let incl = RingMatrix::identity(r, x0.rank(n))
            .vstack(&RingMatrix::zeros(r, z.complex.rank(n), x0.rank(n)))
            .unwrap()
            .scale(&c);
        comps.insert(n, base[&n].0.mul(&incl).unwrap());
    }
    let f = ChainMap::new(x0, &y, comps).unwrap();
    let mut hcomps = BTreeMap::new();
    for n in x0.lo()..=x0.hi() {
        let (rows, cols) = (y.rank(n + 1), x0.rank(n));
        if rows == 0 || cols == 0 || !g.gen_bool(0.5) {
            continue;
        }
        let mut m = RingMatrix::zeros(r, rows, cols);
        m.set(
            g.gen_range(0..rows),
            g.gen_range(0..cols),
            rand_poly(g, r, 1, false),
        );
        hcomps.insert(n, m);
    }
    let h = nullity_core::Homotopy::new(x0, &y, hcomps).unwrap();
    let dh = ChainMap::new(
        x0,
        &y,
        (x0.lo()..=x0.hi())
            .map(|n| {
                let a = y.d(n + 1).mul(&h.component(n)).unwrap();
                let b = h.component(n - 1).mul(&x0.d(n)).unwrap();
                (n, a.add(&b).unwrap())
            })
            .collect(),
    )
    .unwrap();
    f.add(&dh).unwrap()
}

/// Random element of `nodes` with its index.
pub fn pick<'a, T>(g: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(g).unwrap()
}

// ----------------------------------------------- univariate elementary divisors

/// Dense polynomial over Q, coefficient `k` of `x^k`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct UPoly(pub Vec<BigRational>);

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn from_poly(p: &Poly) -> UPoly {
        let mut v: Vec<BigRational> = Vec::new();
        for (m, c) in p.terms() {
            let e = m.exponents()[0] as usize;
            if v.len() <= e {
                v.resize(e + 1, BigRational::zero());
            }
            let Coeff::Q(c) = c else {
                panic!("rational coefficients expected")
            };
            v[e] = c.clone();
        }
        UPoly(v).trim()
    }

    fn trim(mut self) -> UPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.0.last().unwrap().clone();
        UPoly(self.0.iter().map(|c| c / &lc).collect())
    }

    fn sub_scaled_shift(&self, other: &UPoly, c: &BigRational, shift: usize) -> UPoly {
        let mut v = self.0.clone();
        if v.len() < other.0.len() + shift {
            v.resize(other.0.len() + shift, BigRational::zero());
        }
        for (k, a) in other.0.iter().enumerate() {
            v[k + shift] = &v[k + shift] - a * c;
        }
        UPoly(v).trim()
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] = &v[i + j] + a * b;
            }
        }
        UPoly(v).trim()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let get = |p: &UPoly, k: usize| p.0.get(k).cloned().unwrap_or_else(BigRational::zero);
        UPoly((0..n).map(|k| get(self, k) + get(other, k)).collect()).trim()
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    /// `(quotient, remainder)`.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        let mut r = self.clone();
        let mut qv = vec![BigRational::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        let lc = d.0.last().unwrap().clone();
        while !r.is_zero() && r.0.len() >= d.0.len() {
            let shift = r.0.len() - d.0.len();
            let c = r.0.last().unwrap() / &lc;
            qv[shift] = c.clone();
            r = r.sub_scaled_shift(d, &c, shift);
        }
        (UPoly(qv).trim(), r)
    }
}

/// Invariant factors (monic, nonzero) of a matrix over Q[x].
pub fn invariant_factors(m: &[Vec<UPoly>]) -> Vec<UPoly> {
    let mut a: Vec<Vec<UPoly>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of least degree in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].degree() < a[bi][bj].degree())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (qt, rem) = a[i][t].divrem(&a[t][t]);
                for j in t..cols {
                    let v = a[i][j].add(&qt.mul(&a[t][j]).neg());
                    a[i][j] = v;
                }
                debug_assert_eq!(a[i][t], rem);
                if !rem.is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (qt, rem) = a[t][j].divrem(&a[t][t]);
                for i in t..rows {
                    let v = a[i][j].add(&qt.mul(&a[i][t]).neg());
                    a[i][j] = v;
                }
                if !rem.is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut fixed = false;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].divrem(&a[t][t]).1.is_zero() {
                        for k in t..cols {
                            let v = a[t][k].add(&a[i][k]);
                            a[t][k] = v;
                        }
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        out.push(a[t][t].monic());
        t += 1;
    }
    out
}

pub fn to_upoly_matrix(m: &RingMatrix) -> Vec<Vec<UPoly>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| UPoly::from_poly(m.get(i, j)))
                .collect()
        })
        .collect()
}

/// Free rank and non-unit invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PidModule {
    pub free_rank: usize,
    pub torsion: Vec<UPoly>,
}

fn torsion_of(factors: Vec<UPoly>) -> Vec<UPoly> {
    let mut t: Vec<UPoly> = factors.into_iter().filter(|f| f.degree() > 0).collect();
    t.sort();
    t
}

/// `H_n` of a complex over Q[x] from the elementary divisors of the differentials.
pub fn homology_oracle(c: &FreeComplex, n: i64) -> PidModule {
    let dn = invariant_factors(&to_upoly_matrix(&c.d(n)));
    let dn1 = invariant_factors(&to_upoly_matrix(&c.d(n + 1)));
    PidModule {
        free_rank: c.rank(n) - dn.len() - dn1.len(),
        torsion: torsion_of(dn1),
    }
}

/// The same data read off a presentation.
pub fn presentation_invariants(m: &PresentedModule) -> PidModule {
    let f = invariant_factors(&to_upoly_matrix(m.relations()));
    PidModule {
        free_rank: m.num_generators() - f.len(),
        torsion: torsion_of(f),
    }
}

// ------------------------------------------------- graded dense linear algebra

/// Rank of a dense rational matrix.
pub fn rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, |r| r.len());
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::one() / &rows[rank][c];
        for k in c..cols {
            rows[rank][k] = &rows[rank][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..cols {
                    let v = &rows[rank][k] * &f;
                    rows[i][k] = &rows[i][k] - v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn coeff_q(c: &Coeff) -> BigRational {
    match c {
        Coeff::Q(q) => q.clone(),
        Coeff::Fp(v, _) => q(*v as i64),
    }
}

/// Rank in degree `t` of the map `⊕_j R(-wc_j) -> ⊕_i R(-wr_i)` given by `m`.
pub fn graded_rank(r: &PolyRing, m: &RingMatrix, wr: &[u32], wc: &[u32], t: u32) -> usize {
    let nv = r.nvars();
    let mut row_index: BTreeMap<(usize, Vec<u16>), usize> = BTreeMap::new();
    for (i, &w) in wr.iter().enumerate() {
        if w <= t {
            for mono in monomials_of_degree(nv, t - w) {
                let k = row_index.len();
                row_index.insert((i, mono), k);
            }
        }
    }
    let mut columns = Vec::new();
    for (j, &w) in wc.iter().enumerate() {
        if w > t {
            continue;
        }
        for mono in monomials_of_degree(nv, t - w) {
            let mut col = vec![BigRational::zero(); row_index.len()];
            let mm = Monomial::from_exponents(&mono);
            for i in 0..m.rows() {
                for (e, c) in m.get(i, j).terms() {
                    let prod = e.mul(&mm);
                    let key = (i, prod.exponents().to_vec());
                    let k = *row_index
                        .get(&key)
                        .expect("matrix entry is not homogeneous of the expected degree");
                    col[k] = &col[k] + coeff_q(c);
                }
            }
            columns.push(col);
        }
    }
    rank_q(columns)
}

pub fn free_dim(r: &PolyRing, ws: &[u32], t: u32) -> usize {
    ws.iter()
        .filter(|&&w| w <= t)
        .map(|&w| monomials_of_degree(r.nvars(), t - w).len())
        .sum()
}

/// `dim_Q H_n(C)_t` by dense linear algebra on the monomial basis.
pub fn graded_homology_oracle(inst: &Instance, n: i64, t: u32) -> usize {
    let c = &inst.complex;
    let r = c.ring();
    let w = |k: i64| inst.weights.get(&k).cloned().unwrap_or_default();
    let zn = free_dim(r, &w(n), t) - graded_rank(r, &c.d(n), &w(n - 1), &w(n), t);
    zn - graded_rank(r, &c.d(n + 1), &w(n), &w(n + 1), t)
}

/// Degree of a homogeneous vector in the twisted free module, `None` for zero.
pub fn vector_weight(v: &[Poly], ws: &[u32]) -> Option<u32> {
    let mut out = None;
    for (i, p) in v.iter().enumerate() {
        for (m, _) in p.terms() {
            let d = m.degree() + ws[i];
            match out {
                None => out = Some(d),
                Some(e) => assert_eq!(e, d, "vector is not homogeneous"),
            }
        }
    }
    out
}

/// `dim_Q H_n(C)_t` read off the engine's presentation.
pub fn graded_homology_engine(inst: &Instance, n: i64, t: u32) -> usize {
    let c = &inst.complex;
    let r = c.ring();
    let ws = inst.weights.get(&n).cloned().unwrap_or_default();
    let data = c.homology_data(n).unwrap();
    let gens: Vec<u32> = (0..data.cycles.cols())
        .map(|j| vector_weight(&data.cycles.column(j), &ws).expect("zero cycle generator"))
        .collect();
    let rel = data.module.relations();
    let kept: Vec<usize> = (0..rel.cols())
        .filter(|&j| rel.column(j).iter().any(|p| !p.is_zero()))
        .collect();
    let rel = rel.select_columns(&kept);
    let rw: Vec<u32> = (0..rel.cols())
        .map(|j| vector_weight(&rel.column(j), &gens).unwrap())
        .collect();
    free_dim(r, &gens, t) - graded_rank(r, &rel, &gens, &rw, t)
}

pub fn weight_map(inst: &Instance, n: i64) -> Vec<u32> {
    inst.weights.get(&n).cloned().unwrap_or_default()
}
