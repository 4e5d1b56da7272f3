//! Finitely presented modules `coker(A: R^cols -> R^rows)` and maps between them.

use std::sync::{Arc, OnceLock};

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::groebner::GroebnerOptions;
use crate::ideal::Ideal;
use crate::matrix::RingMatrix;
use crate::poly::{Poly, PolyRing};
use crate::solve::{ImageBasis, Lifting};

/// Generators of `{v | A v = 0}` as the columns of a `cols x s` matrix.
pub fn syzygies(a: &RingMatrix) -> Result<RingMatrix> {
    let ring = a.ring();
    if a.cols() == 0 {
        return Ok(RingMatrix::zeros(ring, 0, 0));
    }
    if a.is_zero() {
        return Ok(RingMatrix::identity(ring, a.cols()));
    }
    let l = lifting(a)?;
    RingMatrix::from_columns(ring, a.cols(), &l.syzygies())
}

pub(crate) fn lifting(a: &RingMatrix) -> Result<Lifting> {
    Lifting::new(
        &a.columns(),
        a.rows(),
        a.ring().nvars(),
        a.ring().field(),
        GroebnerOptions::default(),
    )
}

/// First `k` components of the syzygies of `[B | A]`, where `B` has `k`
/// columns: the coefficient vectors `u` with `B u ∈ im A`.
pub fn relative_syzygies(b: &RingMatrix, a: &RingMatrix) -> Result<RingMatrix> {
    let k = b.cols();
    let syz = syzygies(&b.hstack(a)?)?;
    Ok(drop_zero_columns(&syz.submatrix(0..k, 0..syz.cols())))
}

pub(crate) fn drop_zero_columns(m: &RingMatrix) -> RingMatrix {
    let keep: Vec<usize> = (0..m.cols())
        .filter(|&j| (0..m.rows()).any(|i| !m.get(i, j).is_zero()))
        .collect();
    m.select_columns(&keep)
}

#[derive(Debug, Default)]
struct ModuleCache {
    image: OnceLock<Result<ImageBasis>>,
}

/// The module `R^rows / im A`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    relations: RingMatrix,
    cache: Arc<ModuleCache>,
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl PresentedModule {
    pub fn new(relations: RingMatrix) -> PresentedModule {
        PresentedModule {
            relations,
            cache: Arc::default(),
        }
    }

    pub fn free(ring: &PolyRing, rank: usize) -> PresentedModule {
        PresentedModule::new(RingMatrix::zeros(ring, rank, 0))
    }

    pub fn zero(ring: &PolyRing) -> PresentedModule {
        PresentedModule::free(ring, 0)
    }

    /// `R / I`.
    pub fn quotient(ideal: &Ideal) -> PresentedModule {
        let gens = ideal.generators().to_vec();
        let n = gens.len();
        PresentedModule::new(
            RingMatrix::from_entries(ideal.ring(), 1, n, gens).expect("one row of generators"),
        )
    }

    pub fn ring(&self) -> &PolyRing {
        self.relations.ring()
    }

    pub fn num_generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &RingMatrix {
        &self.relations
    }

    fn image(&self) -> Result<&ImageBasis> {
        self.cache
            .image
            .get_or_init(|| {
                ImageBasis::new(
                    &self.relations.columns(),
                    self.relations.rows(),
                    GroebnerOptions::default(),
                )
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Whether the coefficient vector `v` represents zero in the module.
    pub fn is_zero_element(&self, v: &[Poly]) -> Result<bool> {
        if v.len() != self.num_generators() {
            return Err(Error::Shape(format!(
                "element with {} coordinates in a module with {} generators",
                v.len(),
                self.num_generators()
            )));
        }
        if v.iter().all(|p| p.is_zero()) {
            return Ok(true);
        }
        Ok(self.image()?.contains(v))
    }

    /// Canonical representative of the class of `v`.
    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        Ok(self.image()?.normal_form(v))
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        if self.num_generators() == 0 {
            return Ok(true);
        }
        Ok(self.image()?.is_everything())
    }

    /// Whether `x` kills every generator.
    pub fn is_annihilated_by(&self, x: &Poly) -> Result<bool> {
        let n = self.num_generators();
        for i in 0..n {
            let mut v = vec![Poly::zero(); n];
            v[i] = x.clone();
            if !self.is_zero_element(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Ann M`, the intersection of the colon ideals `(im A : e_i)`.
    pub fn annihilator(&self) -> Result<Ideal> {
        let ring = self.ring();
        let n = self.num_generators();
        let units: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut v = vec![Poly::zero(); n];
                v[i] = ring.one();
                v
            })
            .collect();
        self.annihilator_of(&units)
    }

    /// Annihilator of the submodule generated by the given elements.
    pub fn annihilator_of(&self, elements: &[Vec<Poly>]) -> Result<Ideal> {
        let ring = self.ring();
        let mut acc = Ideal::unit(ring);
        for v in elements {
            if self.is_zero_element(v)? {
                continue;
            }
            let col =
                RingMatrix::from_columns(ring, self.num_generators(), std::slice::from_ref(v))?;
            let rel = relative_syzygies(&col, &self.relations)?;
            let gens = (0..rel.cols()).map(|j| rel.get(0, j).clone()).collect();
            acc = acc.intersect(&Ideal::new(ring, gens))?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Direct sum presentation.
    pub fn direct_sum(ring: &PolyRing, parts: &[&PresentedModule]) -> PresentedModule {
        let blocks: Vec<&RingMatrix> = parts.iter().map(|p| &p.relations).collect();
        PresentedModule::new(RingMatrix::block_diag(ring, &blocks))
    }

    /// A free resolution with the Hilbert syzygy bound checked on its length.
    pub fn free_resolution(&self, max_len: usize) -> Result<Resolution> {
        free_resolution(self, max_len)
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    source: PresentedModule,
    target: PresentedModule,
    matrix: RingMatrix,
}

impl ModuleMap {
    /// Checks that the relations of the source land in the relation module of the target.
    pub fn new(
        source: PresentedModule,
        target: PresentedModule,
        matrix: RingMatrix,
    ) -> Result<ModuleMap> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(Error::Shape(format!(
                "{}x{} matrix for a map from {} to {} generators",
                matrix.rows(),
                matrix.cols(),
                source.num_generators(),
                target.num_generators()
            )));
        }
        let image = matrix.mul(source.relations())?;
        for j in 0..image.cols() {
            if !target.is_zero_element(&image.column(j))? {
                return Err(Error::InvalidMap(format!(
                    "relation {j} of the source is not sent to zero"
                )));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &PresentedModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: RingMatrix::identity(m.ring(), m.num_generators()),
        }
    }

    pub fn zero(source: &PresentedModule, target: &PresentedModule) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: RingMatrix::zeros(
                source.ring(),
                target.num_generators(),
                source.num_generators(),
            ),
        }
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.target.num_generators() != other.source.num_generators() {
            return Err(Error::Shape("maps are not composable".into()));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        for j in 0..self.matrix.cols() {
            if !self.target.is_zero_element(&self.matrix.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The kernel together with its generators written in source coordinates.
    pub fn kernel(&self) -> Result<Kernel> {
        let gens = relative_syzygies(&self.matrix, self.target.relations())?;
        let ring = self.source.ring();
        let gens = if gens.cols() == 0 {
            RingMatrix::zeros(ring, self.source.num_generators(), 0)
        } else {
            gens
        };
        let rel = relative_syzygies(&gens, self.source.relations())?;
        let rel = if rel.rows() != gens.cols() {
            RingMatrix::zeros(ring, gens.cols(), 0)
        } else {
            rel
        };
        Ok(Kernel {
            module: PresentedModule::new(rel),
            generators: gens,
        })
    }

    pub fn cokernel(&self) -> Result<PresentedModule> {
        Ok(PresentedModule::new(
            self.matrix.hstack(self.target.relations())?,
        ))
    }

    pub fn kernel_cokernel(&self) -> Result<(PresentedModule, PresentedModule)> {
        Ok((self.kernel()?.module, self.cokernel()?))
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_zero_module()? && self.kernel()?.module.is_zero_module()?)
    }

    /// Annihilator of the image submodule of the target.
    pub fn image_annihilator(&self) -> Result<Ideal> {
        self.target.annihilator_of(&self.matrix.columns())
    }
}

/// Kernel of a module map: a presented module and the source coordinates of
/// its generators.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub module: PresentedModule,
    pub generators: RingMatrix,
}

/// Exactness of `M --f--> N --g--> P` at `N`: `g f = 0` and `ker g ⊆ im f`.
pub fn is_exact(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    if f.target.num_generators() != g.source.num_generators() {
        return Err(Error::Shape("maps are not composable".into()));
    }
    if !f.then(g)?.is_zero_map()? {
        return Ok(false);
    }
    let ker = g.kernel()?.generators;
    let image = PresentedModule::new(f.matrix.hstack(f.target.relations())?);
    for j in 0..ker.cols() {
        if !image.is_zero_element(&ker.column(j))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A free resolution `F` of `M` with the matrix of the isomorphism
/// `H_0(F) -> M` on generators.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: FreeComplex,
    pub augmentation: RingMatrix,
}

/// Iterated syzygies, each stage pruned of redundant generators and unit
/// entries so the length stays within the number of variables.
pub fn free_resolution(m: &PresentedModule, max_len: usize) -> Result<Resolution> {
    let ring = m.ring().clone();
    let nvars = ring.nvars();
    if max_len < nvars {
        return Err(Error::Precondition(format!(
            "max_len {max_len} is below the number of variables {nvars}"
        )));
    }
    let mut augmentation = RingMatrix::identity(&ring, m.num_generators());
    let mut diffs: Vec<RingMatrix> = vec![remove_redundant_columns(m.relations())?];
    let mut k = 0;
    loop {
        // prune unit entries in diffs[k]
        while let Some((i, j)) = find_unit_entry(&diffs[k]) {
            let d = diffs[k].clone();
            let u = d.get(i, j).clone();
            let inv = ring.constant(u.leading().unwrap().1.inv());
            let mut next = RingMatrix::zeros(&ring, d.rows() - 1, d.cols() - 1);
            let rows: Vec<usize> = (0..d.rows()).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..d.cols()).filter(|&c| c != j).collect();
            for (oi, &r) in rows.iter().enumerate() {
                let factor = d.get(r, j).mul(&inv);
                for (oj, &c) in cols.iter().enumerate() {
                    next.set(oi, oj, d.get(r, c).sub(&factor.mul(d.get(i, c))));
                }
            }
            diffs[k] = next;
            if k == 0 {
                augmentation = augmentation.select_columns(&rows);
            } else {
                diffs[k - 1] = diffs[k - 1].select_columns(&rows);
            }
        }
        diffs[k] = remove_redundant_columns(&diffs[k])?;
        if diffs[k].cols() == 0 {
            diffs.pop();
            break;
        }
        if k + 1 > max_len + 1 {
            break;
        }
        let syz = drop_zero_columns(&syzygies(&diffs[k])?);
        diffs.push(syz);
        k += 1;
    }
    let len = diffs.len();
    if len > nvars {
        return Err(Error::LengthBound(format!(
            "resolution of length {len} over {nvars} variables"
        )));
    }
    let mut ranks = vec![augmentation.cols()];
    for d in &diffs {
        ranks.push(d.cols());
    }
    let complex = FreeComplex::new(&ring, 0, ranks, diffs)?;
    Ok(Resolution {
        complex,
        augmentation,
    })
}

fn find_unit_entry(m: &RingMatrix) -> Option<(usize, usize)> {
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            if m.get(i, j).is_unit() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Greedily drops columns lying in the span of the remaining ones.
fn remove_redundant_columns(m: &RingMatrix) -> Result<RingMatrix> {
    let mut m = drop_zero_columns(m);
    let mut j = 0;
    while j < m.cols() && m.cols() > 1 {
        let rest: Vec<usize> = (0..m.cols()).filter(|&c| c != j).collect();
        let others = m.select_columns(&rest);
        let basis = ImageBasis::new(&others.columns(), m.rows(), GroebnerOptions::default())?;
        if basis.contains(&m.column(j)) {
            m = others;
        } else {
            j += 1;
        }
    }
    Ok(m)
}
