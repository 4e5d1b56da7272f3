//! Linear systems over `R` whose unknowns and equations are matrix blocks.
//!
//! A term `(e, u, A, B)` adds `A X_u B` to equation block `e`; entries are
//! flattened column-major, so each unknown entry becomes one column of the
//! system matrix.

use std::collections::BTreeMap;

use crate::complex::{ChainMap, FreeComplex, Homotopy};
use crate::error::{Error, Result};
use crate::groebner::GroebnerOptions;
use crate::ideal::Ideal;
use crate::matrix::RingMatrix;
use crate::poly::{Poly, PolyRing};
use crate::solve::Lifting;

struct Term {
    eq: usize,
    unk: usize,
    left: Option<RingMatrix>,
    right: Option<RingMatrix>,
}

pub struct BlockSystem {
    ring: PolyRing,
    unknowns: Vec<(usize, usize)>,
    equations: Vec<(usize, usize)>,
    terms: Vec<Term>,
}

impl BlockSystem {
    pub fn new(ring: &PolyRing) -> BlockSystem {
        BlockSystem {
            ring: ring.clone(),
            unknowns: Vec::new(),
            equations: Vec::new(),
            terms: Vec::new(),
        }
    }

    pub fn add_unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.unknowns.push((rows, cols));
        self.unknowns.len() - 1
    }

    pub fn add_equation(&mut self, rows: usize, cols: usize) -> usize {
        self.equations.push((rows, cols));
        self.equations.len() - 1
    }

    /// Adds `left * X_unk * right` to equation `eq`; `None` stands for an identity.
    pub fn add_term(
        &mut self,
        eq: usize,
        unk: usize,
        left: Option<RingMatrix>,
        right: Option<RingMatrix>,
    ) -> Result<()> {
        let (er, ec) = self.equations[eq];
        let (ur, uc) = self.unknowns[unk];
        let lr = left.as_ref().map_or((ur, ur), |m| (m.rows(), m.cols()));
        let rr = right.as_ref().map_or((uc, uc), |m| (m.rows(), m.cols()));
        if lr != (er, ur) || rr != (uc, ec) {
            return Err(Error::Shape(format!(
                "term of shape {lr:?} X {rr:?} for unknown {ur}x{uc} and equation {er}x{ec}"
            )));
        }
        self.terms.push(Term {
            eq,
            unk,
            left,
            right,
        });
        Ok(())
    }

    fn offsets(shapes: &[(usize, usize)]) -> (Vec<usize>, usize) {
        let mut out = Vec::with_capacity(shapes.len());
        let mut acc = 0;
        for &(r, c) in shapes {
            out.push(acc);
            acc += r * c;
        }
        (out, acc)
    }

    fn columns(&self) -> (Vec<Vec<Poly>>, usize) {
        let (uoff, utotal) = BlockSystem::offsets(&self.unknowns);
        let (eoff, etotal) = BlockSystem::offsets(&self.equations);
        let mut cols = vec![vec![Poly::zero(); etotal]; utotal];
        for t in &self.terms {
            let (ur, uc) = self.unknowns[t.unk];
            let (er, ec) = self.equations[t.eq];
            for b in 0..uc {
                for a in 0..ur {
                    let col = &mut cols[uoff[t.unk] + a + b * ur];
                    for j in 0..ec {
                        let rb = match &t.right {
                            Some(m) => m.get(b, j).clone(),
                            None if b == j => self.ring.one(),
                            None => continue,
                        };
                        if rb.is_zero() {
                            continue;
                        }
                        for i in 0..er {
                            let la = match &t.left {
                                Some(m) => m.get(i, a).clone(),
                                None if i == a => self.ring.one(),
                                None => continue,
                            };
                            if la.is_zero() {
                                continue;
                            }
                            let idx = eoff[t.eq] + i + j * er;
                            col[idx] = col[idx].add(&la.mul(&rb));
                        }
                    }
                }
            }
        }
        (cols, etotal)
    }

    /// Compiles the system matrix once for repeated solves.
    pub fn compile(&self) -> Result<CompiledSystem> {
        let (cols, etotal) = self.columns();
        let nonzero: Vec<usize> = (0..cols.len())
            .filter(|&j| cols[j].iter().any(|p| !p.is_zero()))
            .collect();
        let kept: Vec<Vec<Poly>> = nonzero.iter().map(|&j| cols[j].clone()).collect();
        let lifting = Lifting::new(
            &kept,
            etotal,
            self.ring.nvars(),
            self.ring.field(),
            GroebnerOptions::default(),
        )?;
        Ok(CompiledSystem {
            ring: self.ring.clone(),
            unknowns: self.unknowns.clone(),
            equations: self.equations.clone(),
            etotal,
            utotal: cols.len(),
            nonzero,
            kept,
            lifting,
        })
    }
}

pub struct CompiledSystem {
    ring: PolyRing,
    unknowns: Vec<(usize, usize)>,
    equations: Vec<(usize, usize)>,
    etotal: usize,
    utotal: usize,
    nonzero: Vec<usize>,
    kept: Vec<Vec<Poly>>,
    lifting: Lifting,
}

impl CompiledSystem {
    fn flatten(&self, rhs: &[RingMatrix]) -> Result<Vec<Poly>> {
        if rhs.len() != self.equations.len() {
            return Err(Error::Shape(format!(
                "{} right-hand blocks for {} equations",
                rhs.len(),
                self.equations.len()
            )));
        }
        let mut out = Vec::with_capacity(self.etotal);
        for (m, &(r, c)) in rhs.iter().zip(&self.equations) {
            if (m.rows(), m.cols()) != (r, c) {
                return Err(Error::Shape("right-hand block shape".into()));
            }
            for j in 0..c {
                for i in 0..r {
                    out.push(m.get(i, j).clone());
                }
            }
        }
        Ok(out)
    }

    fn unflatten(&self, v: &[Poly]) -> Vec<RingMatrix> {
        let mut full = vec![Poly::zero(); self.utotal];
        for (k, &j) in self.nonzero.iter().enumerate() {
            full[j] = v[k].clone();
        }
        let mut out = Vec::new();
        let mut pos = 0;
        for &(r, c) in &self.unknowns {
            let mut m = RingMatrix::zeros(&self.ring, r, c);
            for j in 0..c {
                for i in 0..r {
                    m.set(i, j, full[pos].clone());
                    pos += 1;
                }
            }
            out.push(m);
        }
        out
    }

    /// Unknown blocks solving the system, if any.
    pub fn solve(&self, rhs: &[RingMatrix]) -> Result<Option<Vec<RingMatrix>>> {
        let b = self.flatten(rhs)?;
        if b.iter().all(|p| p.is_zero()) {
            return Ok(Some(
                self.unflatten(&vec![Poly::zero(); self.nonzero.len()]),
            ));
        }
        if self.kept.is_empty() {
            return Ok(None);
        }
        Ok(self.lifting.solve(&b).map(|v| self.unflatten(&v)))
    }

    /// `{s ∈ R | the system with right-hand side s * rhs is solvable}`.
    pub fn multiplier_ideal(&self, rhs: &[RingMatrix]) -> Result<Ideal> {
        let b = self.flatten(rhs)?;
        if b.iter().all(|p| p.is_zero()) {
            return Ok(Ideal::unit(&self.ring));
        }
        let mut cols = vec![b];
        cols.extend(self.kept.iter().cloned());
        let l = Lifting::new(
            &cols,
            self.etotal,
            self.ring.nvars(),
            self.ring.field(),
            GroebnerOptions::default(),
        )?;
        let gens = l.syzygies().into_iter().map(|s| s[0].clone()).collect();
        Ideal::new(&self.ring, gens).reduced()
    }
}

/// The operator `h ↦ d h + h d` on homotopies `src -> tgt`, compiled for
/// repeated null-homotopy questions.
pub struct HomotopySystem {
    src: FreeComplex,
    tgt: FreeComplex,
    unknown_degrees: Vec<i64>,
    equation_degrees: Vec<i64>,
    system: CompiledSystem,
}

impl HomotopySystem {
    pub fn new(src: &FreeComplex, tgt: &FreeComplex) -> Result<HomotopySystem> {
        let ring = src.ring().clone();
        let mut sys = BlockSystem::new(&ring);
        let degrees: Vec<i64> = (src.lo()..=src.hi()).filter(|&n| src.rank(n) > 0).collect();
        let mut unknown_degrees = Vec::new();
        let mut unk = BTreeMap::new();
        for &n in &degrees {
            if tgt.rank(n + 1) > 0 {
                unk.insert(n, sys.add_unknown(tgt.rank(n + 1), src.rank(n)));
                unknown_degrees.push(n);
            }
        }
        let mut equation_degrees = Vec::new();
        for &n in &degrees {
            if tgt.rank(n) == 0 {
                continue;
            }
            let e = sys.add_equation(tgt.rank(n), src.rank(n));
            equation_degrees.push(n);
            if let Some(&u) = unk.get(&n) {
                sys.add_term(e, u, Some(tgt.d(n + 1)), None)?;
            }
            if let Some(&u) = unk.get(&(n - 1)) {
                sys.add_term(e, u, None, Some(src.d(n)))?;
            }
        }
        Ok(HomotopySystem {
            src: src.clone(),
            tgt: tgt.clone(),
            unknown_degrees,
            equation_degrees,
            system: sys.compile()?,
        })
    }

    fn rhs(&self, f: &ChainMap, scale: Option<&Poly>) -> Vec<RingMatrix> {
        self.equation_degrees
            .iter()
            .map(|&n| {
                let m = f.component(n);
                match scale {
                    Some(c) => m.scale(c),
                    None => m,
                }
            })
            .collect()
    }

    /// Some `h` with `c f = d h + h d`.
    pub fn null_homotopy(&self, f: &ChainMap, c: Option<&Poly>) -> Result<Option<Homotopy>> {
        let Some(sol) = self.system.solve(&self.rhs(f, c))? else {
            return Ok(None);
        };
        let comps = self.unknown_degrees.iter().copied().zip(sol).collect();
        Ok(Some(Homotopy::new(&self.src, &self.tgt, comps)?))
    }

    /// `{s | s f ≃ 0}`.
    pub fn annihilator(&self, f: &ChainMap) -> Result<Ideal> {
        self.system.multiplier_ideal(&self.rhs(f, None))
    }
}
