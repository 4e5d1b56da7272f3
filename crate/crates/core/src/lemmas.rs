//! Instance verifiers: each checks one implication on concrete data.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::certify::{check_certificate, Certificate};
use crate::complex::{comparison_map, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::koszul::{koszul, outside, KoszulSpec};
use crate::linsys::BlockSystem;
use crate::matrix::RingMatrix;
use crate::module::{lifting, PresentedModule};
use crate::perversity::GeneratorBuilder;
use crate::spectrum::{supp_complex, supp_member, PrimeSet, PrimeTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// The hypothesis does not hold, so nothing was checked.
    Vacuous,
    Fail,
    PreconditionFailed,
    /// No prime of the table could serve as a witness.
    TableInsufficient,
    /// Outside the representable range; reported, not checked.
    Unchecked,
}

impl Status {
    /// Whether the instance is consistent with the lemma.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Vacuous | Status::Unchecked)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instance: String,
    pub status: Status,
    pub detail: String,
    pub witness: BTreeMap<String, String>,
}

impl LemmaReport {
    fn new(
        lemma: &str,
        instance: String,
        status: Status,
        detail: impl Into<String>,
    ) -> LemmaReport {
        LemmaReport {
            lemma: lemma.to_string(),
            instance,
            status,
            detail: detail.into(),
            witness: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> LemmaReport {
        self.witness.insert(key.to_string(), value.to_string());
        self
    }
}

fn spec_of(table: &PrimeTable, p: usize) -> Result<KoszulSpec> {
    KoszulSpec::of_ideal(table.ideal(p))
}

fn residue(table: &PrimeTable, p: usize) -> Result<FreeComplex> {
    Ok(PresentedModule::quotient(table.ideal(p))
        .free_resolution(table.ring().nvars())?
        .complex)
}

/// If `H_i(M ⊗ R/m) = 0` for `n - k ≤ i ≤ n`, then `H_n(M ⊗ K(m)) = 0` and
/// `Ann H_n(M) ⊄ m`.
pub fn verify_transit(
    m: &FreeComplex,
    table: &PrimeTable,
    max: usize,
    n: i64,
) -> Result<LemmaReport> {
    let instance = format!("m = {}, n = {n}", table.name(max));
    if !table.is_maximal(max) {
        return Err(Error::Precondition(format!(
            "{} is not maximal",
            table.name(max)
        )));
    }
    let spec = spec_of(table, max)?;
    let k = spec.len() as i64;
    let mk = m.tensor(&residue(table, max)?)?;
    for i in n - k..=n {
        if !mk.homology(i)?.is_zero_module()? {
            return Ok(LemmaReport::new(
                "transit",
                instance,
                Status::Vacuous,
                format!("H_{i}(M ⊗ R/m) ≠ 0"),
            ));
        }
    }
    let koszul_vanishes = m.tensor(&koszul(&spec)?)?.homology(n)?.is_zero_module()?;
    let h = m.homology(n)?;
    let local_vanishes = h.is_zero_module()? || !table.ideal(max).contains(&h.annihilator()?)?;
    let status = if koszul_vanishes && local_vanishes {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(LemmaReport::new(
        "transit",
        instance,
        status,
        format!("H_n(M ⊗ K(m)) = 0: {koszul_vanishes}; Ann H_n(M) ⊄ m: {local_vanishes}"),
    ))
}

/// Finds `p ∈ Supp H_n(M)` with `p ∈ Supp H_n(M ⊗ K(p))`.
pub fn verify_localcase(m: &FreeComplex, n: i64, table: &PrimeTable) -> Result<LemmaReport> {
    let instance = format!("n = {n}");
    let h = m.homology(n)?;
    if h.is_zero_module()? {
        return Ok(LemmaReport::new(
            "localcase",
            instance,
            Status::PreconditionFailed,
            format!("H_{n}(M) = 0"),
        ));
    }
    let supp = table.module_support(&h)?;
    if supp.is_empty() {
        return Ok(LemmaReport::new(
            "localcase",
            instance,
            Status::TableInsufficient,
            "no table prime lies in Supp H_n(M)",
        ));
    }
    for p in supp.iter() {
        let mk = m.tensor(&koszul(&spec_of(table, p)?)?)?;
        if supp_member(&mk.homology(n)?, table, p)? {
            return Ok(LemmaReport::new(
                "localcase",
                instance,
                Status::Pass,
                "p ∈ Supp H_n(M ⊗ K(p))",
            )
            .with("prime", table.name(p)));
        }
    }
    Ok(LemmaReport::new(
        "localcase",
        instance,
        Status::Fail,
        "no prime of Supp H_n(M) survives in H_n(M ⊗ K(p))",
    ))
}

/// For maximal `p ∈ Supp H_n(M)`: some `H_{n-i}(M ⊗ R/p) ≠ 0` with
/// `0 ≤ i ≤ k`, and the transported cellular certificate for `M < M ⊗ R/p` checks.
pub fn verify_killkp(m: &FreeComplex, table: &PrimeTable, p: usize, n: i64) -> Result<LemmaReport> {
    let instance = format!("p = {}, n = {n}", table.name(p));
    if !table.is_maximal(p) {
        return Ok(LemmaReport::new(
            "killkp",
            instance,
            Status::PreconditionFailed,
            "p is not maximal",
        ));
    }
    if !supp_member(&m.homology(n)?, table, p)? {
        return Ok(LemmaReport::new(
            "killkp",
            instance,
            Status::PreconditionFailed,
            "p ∉ Supp H_n(M)",
        ));
    }
    let res = residue(table, p)?;
    let k = table.ideal(p).generators().len() as i64;
    let mp = m.tensor(&res)?;
    let mut found = None;
    for i in 0..=k {
        if !mp.homology(n - i)?.is_zero_module()? {
            found = Some(i);
            break;
        }
    }
    let Some(i) = found else {
        return Ok(LemmaReport::new(
            "killkp",
            instance,
            Status::Fail,
            "H_{n-i}(M ⊗ R/p) = 0 for all 0 ≤ i ≤ k",
        ));
    };
    let cert = crate::certify::tensor_certificate(&crate::certify::cellular_certificate(&res)?, m)?;
    let unit = FreeComplex::free(m.ring(), 0, 1);
    let check = check_certificate(&cert, &unit.tensor(m)?)?;
    let status = if check.accepted() {
        Status::Pass
    } else {
        Status::Fail
    };
    let detail = match &check.rejection {
        None => format!("H_{}(M ⊗ R/p) ≠ 0; certificate accepted", n - i),
        Some(r) => format!("certificate rejected: {r}"),
    };
    Ok(LemmaReport::new("killkp", instance, status, detail)
        .with("i", i)
        .with("certificate_nodes", cert.nodes.len()))
}

/// The constructed map of [`thereismap`].
#[derive(Clone, Debug)]
pub struct ThereIsMap {
    /// `M -> Σⁿ Q` with `Q` a resolution of `H_n(M)`.
    pub map: ChainMap,
    /// Element outside `p` by which the truncation projection was scaled.
    pub multiplier: crate::poly::Poly,
    pub kernel_ok: bool,
    pub cokernel_ok: bool,
}

/// Builds `F: M -> Σⁿ Q` agreeing up to homotopy with `s · π ∘ g⁻¹` on
/// `τ≥n M`, with `π` the projection to `Σⁿ H_n(M)` and `s ∉ p`.
pub fn thereismap(m: &FreeComplex, table: &PrimeTable, p: usize, n: i64) -> Result<ThereIsMap> {
    let ring = m.ring().clone();
    let prime = table.ideal(p);
    let supports = supp_complex(m, table)?;
    if !supports.get(&n).copied().unwrap_or_default().contains(p) {
        return Err(Error::Precondition(format!(
            "{} ∉ Supp H_{n}(M)",
            table.name(p)
        )));
    }
    if let Some((i, _)) = supports.iter().find(|(&i, s)| i < n && s.contains(p)) {
        return Err(Error::Precondition(format!(
            "{} ∈ Supp H_{i}(M)",
            table.name(p)
        )));
    }
    let (t, g) = m.truncate_ge(n)?;
    let hd = m.homology_data(n)?;
    let q = hd.module.free_resolution(ring.nvars())?;
    let sq = q.complex.shift(n);

    // T_n in terms of the generators of H_n(M)
    let gn = g.component(n);
    let coeffs = if hd.cycles.is_identity() {
        gn
    } else {
        let l = lifting(&hd.cycles)?;
        let cols = (0..gn.cols())
            .map(|j| {
                l.solve(&gn.column(j))
                    .ok_or_else(|| Error::InvalidMap("truncation leaves the cycles".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        RingMatrix::from_columns(&ring, hd.cycles.cols(), &cols)?
    };
    let q0 = q.complex.rank(0);
    let l = lifting(&q.augmentation.hstack(hd.module.relations())?)?;
    let cols = (0..coeffs.cols())
        .map(|j| {
            l.solve(&coeffs.column(j))
                .map(|v| v[..q0].to_vec())
                .ok_or_else(|| Error::InvalidMap("class outside the resolution image".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let pi_n = RingMatrix::from_columns(&ring, q0, &cols)?;
    let pi = comparison_map(&t, &sq, n, &pi_n)?;

    let mut sys = BlockSystem::new(&ring);
    let (lo, hi) = (m.lo().min(sq.lo()), m.hi().max(sq.hi()).max(t.hi()));
    let mut fu = BTreeMap::new();
    let mut hu = BTreeMap::new();
    for k in lo..=hi {
        if m.rank(k) > 0 && sq.rank(k) > 0 {
            fu.insert(k, sys.add_unknown(sq.rank(k), m.rank(k)));
        }
        if t.rank(k) > 0 && sq.rank(k + 1) > 0 {
            hu.insert(k, sys.add_unknown(sq.rank(k + 1), t.rank(k)));
        }
    }
    let mut rhs = Vec::new();
    for k in lo..=hi + 1 {
        if sq.rank(k - 1) > 0 && m.rank(k) > 0 {
            let e = sys.add_equation(sq.rank(k - 1), m.rank(k));
            if let Some(&u) = fu.get(&k) {
                sys.add_term(e, u, Some(sq.d(k)), None)?;
            }
            if let Some(&u) = fu.get(&(k - 1)) {
                sys.add_term(e, u, None, Some(m.d(k).neg()))?;
            }
            rhs.push(RingMatrix::zeros(&ring, sq.rank(k - 1), m.rank(k)));
        }
        if sq.rank(k) > 0 && t.rank(k) > 0 {
            let e = sys.add_equation(sq.rank(k), t.rank(k));
            if let Some(&u) = fu.get(&k) {
                sys.add_term(e, u, None, Some(g.component(k)))?;
            }
            if let Some(&u) = hu.get(&k) {
                sys.add_term(e, u, Some(sq.d(k + 1).neg()), None)?;
            }
            if let Some(&u) = hu.get(&(k - 1)) {
                sys.add_term(e, u, None, Some(t.d(k).neg()))?;
            }
            rhs.push(pi.component(k));
        }
    }
    let compiled = sys.compile()?;
    let j = compiled.multiplier_ideal(&rhs)?;
    let s = outside(&j, prime)?
        .ok_or_else(|| Error::NoSolution("every multiplier lies in p".into()))?;
    let scaled: Vec<RingMatrix> = rhs.iter().map(|b| b.scale(&s)).collect();
    let sol = compiled
        .solve(&scaled)?
        .ok_or_else(|| Error::NoSolution("multiplier does not solve the system".into()))?;
    let comps = fu.iter().map(|(&k, &u)| (k, sol[u].clone())).collect();
    let map = ChainMap::new(m, &sq, comps)?;
    let hn = map.homology_map(n)?;
    let (ker, coker) = hn.kernel_cokernel()?;
    let kernel_ok = !prime.contains(&ker.annihilator()?)?;
    let cokernel_ok = !prime.contains(&coker.annihilator()?)?;
    Ok(ThereIsMap {
        map,
        multiplier: s,
        kernel_ok,
        cokernel_ok,
    })
}

pub fn verify_thereismap(
    m: &FreeComplex,
    table: &PrimeTable,
    p: usize,
    n: i64,
) -> Result<LemmaReport> {
    let instance = format!("p = {}, n = {n}", table.name(p));
    let built = match thereismap(m, table, p, n) {
        Ok(b) => b,
        Err(Error::Precondition(msg)) => {
            return Ok(LemmaReport::new(
                "thereismap",
                instance,
                Status::PreconditionFailed,
                msg,
            ));
        }
        Err(e) => return Err(e),
    };
    let status = if built.kernel_ok && built.cokernel_ok {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(LemmaReport::new(
        "thereismap",
        instance,
        status,
        format!(
            "Ann ker H_n(f) ⊄ p: {}; Ann coker H_n(f) ⊄ p: {}",
            built.kernel_ok, built.cokernel_ok
        ),
    )
    .with("multiplier", m.ring().format(&built.multiplier)))
}

/// Checks a certificate for `⊕_i ⊕_{p ∈ Supp H_i(M)} Σⁱ R/p < M`.
pub fn verify_genkilling(
    m: &FreeComplex,
    table: &Arc<PrimeTable>,
    cert: &Certificate,
) -> Result<LemmaReport> {
    let supports: BTreeMap<i64, PrimeSet> = supp_complex(m, table)?
        .into_iter()
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let g = GeneratorBuilder::new(table).from_sets(&supports)?;
    let report = check_certificate(cert, &g.complex)?;
    let instance = format!("{} summands", g.summands.len());
    let (status, detail) = match (&report.rejection, &report.root_complex) {
        (Some(r), _) => (Status::Fail, format!("certificate rejected: {r}")),
        (None, Some(root))
            if root == &m.trimmed() || cert.claim.as_ref().is_some_and(|c| &c.complex == m) =>
        {
            (Status::Pass, "certificate accepted".to_string())
        }
        (None, _) => (Status::Fail, "certificate does not end at M".to_string()),
    };
    Ok(LemmaReport::new("genkilling", instance, status, detail))
}

/// Checks a certificate for `Σ^{dim R/q} R/q` from `⊕_{q' ∈ V(p), q' maximal} R/q'`.
pub fn verify_kil_ringdim(
    p: usize,
    q: usize,
    table: &Arc<PrimeTable>,
    cert: &Certificate,
) -> Result<LemmaReport> {
    let instance = format!("p = {}, q = {}", table.name(p), table.name(q));
    if !table.leq(p, q) {
        return Ok(LemmaReport::new(
            "kil",
            instance,
            Status::PreconditionFailed,
            "q ∉ V(p)",
        ));
    }
    if !table.is_maximal(q) {
        return Ok(LemmaReport::new(
            "kil",
            instance,
            Status::Unchecked,
            "q is not maximal; k(q) is not finitely generated",
        ));
    }
    let mut builder = GeneratorBuilder::new(table);
    let mut sets = BTreeMap::new();
    let maximal: PrimeSet = table
        .v_of(p)
        .iter()
        .filter(|&i| table.is_maximal(i))
        .collect();
    sets.insert(0, maximal);
    let e = builder.from_sets(&sets)?.complex;
    let dim = table.ideal(q).dimension()?;
    let target = builder.residue(q)?.shift(dim);
    let report = check_certificate(cert, &e)?;
    let (status, detail) = match (&report.rejection, &report.root_complex) {
        (Some(r), _) => (Status::Fail, format!("certificate rejected: {r}")),
        (None, Some(root))
            if root == &target || cert.claim.as_ref().is_some_and(|c| c.complex == target) =>
        {
            (Status::Pass, "certificate accepted".to_string())
        }
        (None, _) => (
            Status::Fail,
            "certificate does not end at Σ^d R/q".to_string(),
        ),
    };
    Ok(LemmaReport::new("kil", instance, status, detail).with("dim", dim))
}

/// Checks a certificate for `M < Σⁿ R/p` at a maximal `p ∈ Supp H_n(M)`.
pub fn verify_crucial(
    m: &FreeComplex,
    table: &PrimeTable,
    p: usize,
    n: i64,
    cert: &Certificate,
) -> Result<LemmaReport> {
    let instance = format!("p = {}, n = {n}", table.name(p));
    if !table.is_maximal(p) {
        return Ok(LemmaReport::new(
            "crucial",
            instance,
            Status::Unchecked,
            "p is not maximal",
        ));
    }
    if !supp_member(&m.homology(n)?, table, p)? {
        return Ok(LemmaReport::new(
            "crucial",
            instance,
            Status::PreconditionFailed,
            "p ∉ Supp H_n(M)",
        ));
    }
    let target = residue(table, p)?.shift(n);
    let report = check_certificate(cert, m)?;
    let (status, detail) = match (&report.rejection, &report.root_complex) {
        (Some(r), _) => (Status::Fail, format!("certificate rejected: {r}")),
        (None, Some(root))
            if root == &target || cert.claim.as_ref().is_some_and(|c| c.complex == target) =>
        {
            (Status::Pass, "certificate accepted".to_string())
        }
        (None, _) => (
            Status::Fail,
            "certificate does not end at Σⁿ R/p".to_string(),
        ),
    };
    Ok(LemmaReport::new("crucial", instance, status, detail))
}
