//! The workbench file: a TOML document of named rings, tables, modules,
//! complexes, maps, homotopies, perversity functions and certificates.
//!
//! Loading resolves every reference and validates every object; errors carry
//! the line and column of the offending value. Serializing writes the
//! canonical form, with every complex spelled out explicitly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::Deserialize;
use toml::Spanned;

use nullity_core::certify::Claim;
use nullity_core::koszul::KoszulSpec;
use nullity_core::{
    koszul, Certificate, ChainMap, Error as CoreError, Field, FreeComplex, Homotopy, Ideal, Node,
    PerversityFunction, PolyRing, PresentedModule, PrimeSet, PrimeTable, RingMatrix, Witness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadErrorKind {
    Syntax,
    UnresolvedReference,
    Invariant,
}

impl LoadErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LoadErrorKind::Syntax => "syntax",
            LoadErrorKind::UnresolvedReference => "unresolved-reference",
            LoadErrorKind::Invariant => "invariant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadError {
    pub kind: LoadErrorKind,
    pub message: String,
    /// One-based line and column.
    pub location: Option<(usize, usize)>,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((l, c)) => write!(
                f,
                "line {l}, column {c}: {}: {}",
                self.kind.as_str(),
                self.message
            ),
            None => write!(f, "{}: {}", self.kind.as_str(), self.message),
        }
    }
}

impl std::error::Error for LoadError {}

type Load<T> = Result<T, LoadError>;

// --------------------------------------------------------------- raw layer

type RawMatrix = Vec<Vec<Spanned<String>>>;
type RawComponents = BTreeMap<String, Spanned<RawMatrix>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    ring: Spanned<RawRing>,
    #[serde(default)]
    tables: BTreeMap<String, Spanned<BTreeMap<String, Vec<Spanned<String>>>>>,
    #[serde(default)]
    modules: BTreeMap<String, Spanned<RawModule>>,
    #[serde(default)]
    complexes: BTreeMap<String, Spanned<RawComplex>>,
    #[serde(default)]
    maps: BTreeMap<String, Spanned<RawMap>>,
    #[serde(default)]
    homotopies: BTreeMap<String, Spanned<RawHomotopy>>,
    #[serde(default)]
    perversity: BTreeMap<String, Spanned<RawPerversity>>,
    #[serde(default)]
    certificates: BTreeMap<String, Spanned<RawCertificate>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    #[serde(default = "default_field")]
    field: Spanned<String>,
    vars: Vec<String>,
}

fn default_field() -> Spanned<String> {
    Spanned::new(0..0, "QQ".to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    generators: usize,
    relations: Option<Spanned<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    lo: Option<i64>,
    ranks: Option<Vec<usize>>,
    d: Option<RawComponents>,
    koszul: Option<Vec<Spanned<String>>>,
    powers: Option<Vec<u32>>,
    resolution: Option<Spanned<String>>,
    residue: Option<Vec<Spanned<String>>>,
    sum: Option<Vec<Spanned<String>>>,
    tensor: Option<Vec<Spanned<String>>>,
    shift: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source: Option<Spanned<String>>,
    target: Option<Spanned<String>>,
    components: Option<RawComponents>,
    identity: Option<Spanned<String>>,
    scale: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHomotopy {
    source: Spanned<String>,
    target: Spanned<String>,
    #[serde(default)]
    components: RawComponents,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPerversity {
    table: Spanned<String>,
    #[serde(default)]
    lo: i64,
    values: Vec<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    root: String,
    claim: Option<Spanned<String>>,
    claim_witness: Option<Spanned<RawWitness>>,
    nodes: BTreeMap<String, Spanned<RawNode>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWitness {
    map: Spanned<String>,
    direction: Spanned<String>,
    reference: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    kind: Spanned<String>,
    complex: Option<Spanned<String>>,
    witness: Option<Spanned<RawWitness>>,
    node: Option<String>,
    shift: Option<i64>,
    nodes: Option<Vec<String>>,
    x: Option<String>,
    y: Option<Spanned<String>>,
    map: Option<Spanned<String>>,
    cone_witness: Option<Spanned<RawWitness>>,
    z: Option<String>,
    target: Option<Spanned<String>>,
    section: Option<Spanned<String>>,
    retraction: Option<Spanned<String>>,
    homotopy: Option<Spanned<String>>,
}

// ------------------------------------------------------------ loaded layer

#[derive(Clone, Debug)]
pub struct Workbench {
    pub ring: PolyRing,
    pub tables: BTreeMap<String, Arc<PrimeTable>>,
    pub modules: BTreeMap<String, PresentedModule>,
    pub complexes: BTreeMap<String, FreeComplex>,
    pub maps: BTreeMap<String, ChainMap>,
    pub homotopies: BTreeMap<String, Homotopy>,
    /// Each with the name of its table.
    pub perversity: BTreeMap<String, (String, PerversityFunction)>,
    pub certificates: BTreeMap<String, Certificate>,
}

impl Workbench {
    pub fn new(ring: &PolyRing) -> Workbench {
        Workbench {
            ring: ring.clone(),
            tables: BTreeMap::new(),
            modules: BTreeMap::new(),
            complexes: BTreeMap::new(),
            maps: BTreeMap::new(),
            homotopies: BTreeMap::new(),
            perversity: BTreeMap::new(),
            certificates: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Load<Workbench> {
        let raw: RawFile = toml::from_str(text).map_err(|e| LoadError {
            kind: LoadErrorKind::Syntax,
            message: e.message().to_string(),
            location: e.span().map(|s| line_col(text, s.start)),
        })?;
        Loader::new(text).load(raw)
    }

    fn lookup<'a, T>(
        &'a self,
        section: &str,
        items: &'a BTreeMap<String, T>,
        name: &str,
    ) -> Load<&'a T> {
        items.get(name).ok_or_else(|| LoadError {
            kind: LoadErrorKind::UnresolvedReference,
            message: format!("no {section} named {name:?}"),
            location: None,
        })
    }

    pub fn table(&self, name: &str) -> Load<&Arc<PrimeTable>> {
        self.lookup("table", &self.tables, name)
    }

    pub fn complex(&self, name: &str) -> Load<&FreeComplex> {
        self.lookup("complex", &self.complexes, name)
    }

    pub fn map(&self, name: &str) -> Load<&ChainMap> {
        self.lookup("map", &self.maps, name)
    }

    pub fn module(&self, name: &str) -> Load<&PresentedModule> {
        self.lookup("module", &self.modules, name)
    }

    pub fn perversity_function(&self, name: &str) -> Load<&(String, PerversityFunction)> {
        self.lookup("perversity function", &self.perversity, name)
    }

    pub fn certificate(&self, name: &str) -> Load<&Certificate> {
        self.lookup("certificate", &self.certificates, name)
    }

    /// A fresh name in a section, derived from `base`.
    fn fresh<T>(items: &BTreeMap<String, T>, base: &str) -> String {
        if !items.contains_key(base) {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}.{k}"))
            .find(|n| !items.contains_key(n))
            .unwrap()
    }

    /// Adds a complex unless an equal one is present; returns its name.
    pub fn intern_complex(&mut self, base: &str, c: &FreeComplex) -> String {
        if let Some((n, _)) = self.complexes.iter().find(|(_, d)| *d == c) {
            return n.clone();
        }
        let name = Self::fresh(&self.complexes, base);
        self.complexes.insert(name.clone(), c.clone());
        name
    }

    pub fn intern_map(&mut self, base: &str, f: &ChainMap) -> String {
        if let Some((n, _)) = self.maps.iter().find(|(_, g)| *g == f) {
            return n.clone();
        }
        let name = Self::fresh(&self.maps, base);
        self.maps.insert(name.clone(), f.clone());
        name
    }

    pub fn intern_homotopy(&mut self, base: &str, h: &Homotopy) -> String {
        if let Some((n, _)) = self.homotopies.iter().find(|(_, g)| *g == h) {
            return n.clone();
        }
        let name = Self::fresh(&self.homotopies, base);
        self.homotopies.insert(name.clone(), h.clone());
        name
    }

    /// The canonical TOML text.
    pub fn to_toml(&self) -> String {
        let mut wb = self.clone();
        let mut certs = toml::Table::new();
        for (name, c) in &self.certificates {
            certs.insert(
                name.clone(),
                toml::Value::Table(wb.certificate_value(name, c)),
            );
        }
        let ends: Vec<(String, FreeComplex)> = wb
            .maps
            .iter()
            .flat_map(|(n, f)| {
                [
                    (format!("{n}.source"), f.source().clone()),
                    (format!("{n}.target"), f.target().clone()),
                ]
            })
            .chain(wb.homotopies.iter().flat_map(|(n, h)| {
                [
                    (format!("{n}.source"), h.source().clone()),
                    (format!("{n}.target"), h.target().clone()),
                ]
            }))
            .collect();
        for (n, c) in ends {
            wb.intern_complex(&n, &c);
        }
        let mut root = toml::Table::new();
        let mut ring = toml::Table::new();
        ring.insert("field".into(), self.ring.field().to_string().into());
        ring.insert(
            "vars".into(),
            toml::Value::Array(self.ring.vars().iter().map(|v| v.clone().into()).collect()),
        );
        root.insert("ring".into(), ring.into());
        let r = &wb.ring;
        let section = |items: BTreeMap<String, toml::Value>| -> toml::Value {
            toml::Value::Table(items.into_iter().collect())
        };
        if !wb.tables.is_empty() {
            root.insert(
                "tables".into(),
                section(
                    wb.tables
                        .iter()
                        .map(|(n, t)| {
                            let entries = (0..t.len())
                                .map(|i| {
                                    let gens = t
                                        .ideal(i)
                                        .generators()
                                        .iter()
                                        .map(|g| r.format(g).into())
                                        .collect();
                                    (t.name(i).to_string(), toml::Value::Array(gens))
                                })
                                .collect();
                            (n.clone(), toml::Value::Table(entries))
                        })
                        .collect(),
                ),
            );
        }
        if !wb.modules.is_empty() {
            root.insert(
                "modules".into(),
                section(
                    wb.modules
                        .iter()
                        .map(|(n, m)| {
                            let mut t = toml::Table::new();
                            t.insert("generators".into(), (m.num_generators() as i64).into());
                            if m.relations().cols() > 0 {
                                t.insert("relations".into(), matrix_value(m.relations()));
                            }
                            (n.clone(), t.into())
                        })
                        .collect(),
                ),
            );
        }
        if !wb.complexes.is_empty() {
            root.insert(
                "complexes".into(),
                section(
                    wb.complexes
                        .iter()
                        .map(|(n, c)| (n.clone(), complex_value(c).into()))
                        .collect(),
                ),
            );
        }
        let named = |c: &FreeComplex| -> String {
            wb.complexes
                .iter()
                .find(|(_, d)| *d == c)
                .map(|(n, _)| n.clone())
                .expect("interned")
        };
        if !wb.maps.is_empty() {
            root.insert(
                "maps".into(),
                section(
                    wb.maps
                        .iter()
                        .map(|(n, f)| {
                            let mut t = toml::Table::new();
                            t.insert("source".into(), named(f.source()).into());
                            t.insert("target".into(), named(f.target()).into());
                            t.insert("components".into(), components_value(f.components()).into());
                            (n.clone(), t.into())
                        })
                        .collect(),
                ),
            );
        }
        if !wb.homotopies.is_empty() {
            root.insert(
                "homotopies".into(),
                section(
                    wb.homotopies
                        .iter()
                        .map(|(n, h)| {
                            let mut t = toml::Table::new();
                            t.insert("source".into(), named(h.source()).into());
                            t.insert("target".into(), named(h.target()).into());
                            t.insert("components".into(), components_value(h.components()).into());
                            (n.clone(), t.into())
                        })
                        .collect(),
                ),
            );
        }
        if !wb.perversity.is_empty() {
            root.insert(
                "perversity".into(),
                section(
                    wb.perversity
                        .iter()
                        .map(|(n, (table, f))| {
                            let mut t = toml::Table::new();
                            t.insert("table".into(), table.clone().into());
                            let (lo, values) = match f.window() {
                                None => (0, Vec::new()),
                                Some((a, b)) => (
                                    a,
                                    (a..=b)
                                        .map(|k| {
                                            toml::Value::Array(
                                                f.table()
                                                    .format_set(f.value(k))
                                                    .into_iter()
                                                    .map(Into::into)
                                                    .collect(),
                                            )
                                        })
                                        .collect(),
                                ),
                            };
                            t.insert("lo".into(), lo.into());
                            t.insert("values".into(), toml::Value::Array(values));
                            (n.clone(), t.into())
                        })
                        .collect(),
                ),
            );
        }
        if !certs.is_empty() {
            root.insert("certificates".into(), certs.into());
        }
        toml::to_string(&root).expect("tables serialize")
    }

    fn witness_value(
        &mut self,
        base: &str,
        w: &Witness,
        reference: Option<&Option<String>>,
    ) -> toml::Table {
        let mut t = toml::Table::new();
        let f = w.map();
        self.intern_complex(&format!("{base}.source"), f.source());
        self.intern_complex(&format!("{base}.target"), f.target());
        t.insert("map".into(), self.intern_map(base, f).into());
        let dir = match w {
            Witness::Forward(_) => "forward",
            Witness::Backward(_) => "backward",
        };
        t.insert("direction".into(), dir.into());
        if let Some(Some(r)) = reference {
            t.insert("reference".into(), r.clone().into());
        }
        t
    }

    fn certificate_value(&mut self, name: &str, c: &Certificate) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("root".into(), c.root.clone().into());
        if let Some(claim) = &c.claim {
            t.insert(
                "claim".into(),
                self.intern_complex(&format!("{name}.claim"), &claim.complex)
                    .into(),
            );
            if let Some(w) = &claim.witness {
                let w = self.witness_value(&format!("{name}.claim"), w, None);
                t.insert("claim_witness".into(), w.into());
            }
        }
        let mut nodes = toml::Table::new();
        for (node_name, node) in &c.nodes {
            let base = format!("{name}.{node_name}");
            let mut n = toml::Table::new();
            n.insert("kind".into(), node.kind().into());
            match node {
                Node::Generator { complex, witness } => {
                    n.insert("complex".into(), self.intern_complex(&base, complex).into());
                    if let Some((r, w)) = witness {
                        let w = self.witness_value(&format!("{base}.witness"), w, Some(r));
                        n.insert("witness".into(), w.into());
                    }
                }
                Node::Suspend { node, shift } => {
                    n.insert("node".into(), node.clone().into());
                    n.insert("shift".into(), (*shift).into());
                }
                Node::Sum { nodes } => {
                    n.insert(
                        "nodes".into(),
                        toml::Value::Array(nodes.iter().map(|s| s.clone().into()).collect()),
                    );
                }
                Node::Extend {
                    x,
                    y,
                    map,
                    cone_witness,
                    z,
                } => {
                    n.insert("x".into(), x.clone().into());
                    n.insert(
                        "y".into(),
                        self.intern_complex(&format!("{base}.y"), y).into(),
                    );
                    self.intern_complex(&format!("{base}.x"), map.source());
                    n.insert(
                        "map".into(),
                        self.intern_map(&format!("{base}.map"), map).into(),
                    );
                    let w = self.witness_value(&format!("{base}.cone"), cone_witness, None);
                    n.insert("cone_witness".into(), w.into());
                    n.insert("z".into(), z.clone().into());
                }
                Node::Replace {
                    node,
                    target,
                    witness,
                } => {
                    n.insert("node".into(), node.clone().into());
                    n.insert(
                        "target".into(),
                        self.intern_complex(&format!("{base}.target"), target)
                            .into(),
                    );
                    let w = self.witness_value(&format!("{base}.witness"), witness, None);
                    n.insert("witness".into(), w.into());
                }
                Node::Retract {
                    node,
                    target,
                    section,
                    retraction,
                    homotopy,
                } => {
                    n.insert("node".into(), node.clone().into());
                    n.insert(
                        "target".into(),
                        self.intern_complex(&format!("{base}.target"), target)
                            .into(),
                    );
                    self.intern_complex(&format!("{base}.source"), section.target());
                    n.insert(
                        "section".into(),
                        self.intern_map(&format!("{base}.section"), section).into(),
                    );
                    n.insert(
                        "retraction".into(),
                        self.intern_map(&format!("{base}.retraction"), retraction)
                            .into(),
                    );
                    n.insert(
                        "homotopy".into(),
                        self.intern_homotopy(&format!("{base}.homotopy"), homotopy)
                            .into(),
                    );
                }
            }
            nodes.insert(node_name.clone(), n.into());
        }
        t.insert("nodes".into(), nodes.into());
        t
    }
}

fn matrix_value(m: &RingMatrix) -> toml::Value {
    toml::Value::Array(
        m.to_strings()
            .into_iter()
            .map(|row| toml::Value::Array(row.into_iter().map(Into::into).collect()))
            .collect(),
    )
}

fn components_value(comps: &BTreeMap<i64, RingMatrix>) -> toml::Table {
    comps
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n.to_string(), matrix_value(m)))
        .collect()
}

fn complex_value(c: &FreeComplex) -> toml::Table {
    let mut t = toml::Table::new();
    t.insert("lo".into(), c.lo().into());
    t.insert(
        "ranks".into(),
        toml::Value::Array(c.ranks().iter().map(|&r| (r as i64).into()).collect()),
    );
    let d: toml::Table = (c.lo() + 1..=c.hi())
        .map(|n| (n, c.d(n)))
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n.to_string(), matrix_value(&m)))
        .collect();
    if !d.is_empty() {
        t.insert("d".into(), d.into());
    }
    t
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

// ------------------------------------------------------------------ loader

enum State {
    Loading,
    Done(FreeComplex),
}

struct Loader<'a> {
    text: &'a str,
    states: BTreeMap<String, State>,
}

impl<'a> Loader<'a> {
    fn new(text: &'a str) -> Loader<'a> {
        Loader {
            text,
            states: BTreeMap::new(),
        }
    }

    fn err(
        &self,
        kind: LoadErrorKind,
        span: Option<Range<usize>>,
        message: impl Into<String>,
    ) -> LoadError {
        LoadError {
            kind,
            message: message.into(),
            location: span
                .filter(|s| s.end > 0)
                .map(|s| line_col(self.text, s.start)),
        }
    }

    fn invariant(&self, span: Range<usize>, message: impl Into<String>) -> LoadError {
        self.err(LoadErrorKind::Invariant, Some(span), message)
    }

    fn core(&self, span: Range<usize>, what: &str, e: CoreError) -> LoadError {
        self.invariant(span, format!("{what}: {e}"))
    }

    fn unresolved(&self, s: &Spanned<String>, section: &str) -> LoadError {
        self.err(
            LoadErrorKind::UnresolvedReference,
            Some(s.span()),
            format!("no {section} named {:?}", s.get_ref()),
        )
    }

    fn poly(&self, ring: &PolyRing, s: &Spanned<String>) -> Load<nullity_core::Poly> {
        ring.parse(s.get_ref()).map_err(|e| {
            let start = match &e {
                CoreError::Parse { offset, .. } => s.span().start + 1 + offset,
                _ => s.span().start,
            };
            self.err(
                LoadErrorKind::Syntax,
                Some(start..start + 1),
                format!("polynomial {:?}: {e}", s.get_ref()),
            )
        })
    }

    fn polys(&self, ring: &PolyRing, items: &[Spanned<String>]) -> Load<Vec<nullity_core::Poly>> {
        items.iter().map(|s| self.poly(ring, s)).collect()
    }

    /// A `rows x cols` matrix; an empty list stands for any matrix with a zero dimension.
    fn matrix(
        &self,
        ring: &PolyRing,
        raw: &Spanned<RawMatrix>,
        rows: usize,
        cols: usize,
        what: &str,
    ) -> Load<RingMatrix> {
        let m = raw.get_ref();
        let degenerate = rows == 0 || cols == 0;
        if degenerate && (m.is_empty() || m.iter().all(|r| r.is_empty())) {
            if !m.is_empty() && m.len() != rows {
                return Err(self.invariant(
                    raw.span(),
                    format!("{what}: {} rows, expected {rows}", m.len()),
                ));
            }
            return Ok(RingMatrix::zeros(ring, rows, cols));
        }
        if m.len() != rows {
            return Err(self.invariant(
                raw.span(),
                format!("{what}: {} rows, expected {rows}", m.len()),
            ));
        }
        let mut out = Vec::with_capacity(rows);
        for row in m {
            if row.len() != cols {
                return Err(self.invariant(
                    raw.span(),
                    format!("{what}: a row has {} entries, expected {cols}", row.len()),
                ));
            }
            out.push(self.polys(ring, row)?);
        }
        RingMatrix::from_rows(ring, out).map_err(|e| self.core(raw.span(), what, e))
    }

    fn degree_key(&self, key: &str, span: Range<usize>) -> Load<i64> {
        key.trim().parse().map_err(|_| {
            self.err(
                LoadErrorKind::Syntax,
                Some(span),
                format!("degree key {key:?} is not an integer"),
            )
        })
    }

    fn load(mut self, raw: RawFile) -> Load<Workbench> {
        let rspan = raw.ring.span();
        let rr = raw.ring.get_ref();
        let field = parse_field(rr.field.get_ref()).ok_or_else(|| {
            self.invariant(
                rr.field.span(),
                format!("unknown field {:?}", rr.field.get_ref()),
            )
        })?;
        let ring = PolyRing::new(field, &rr.vars).map_err(|e| self.core(rspan, "ring", e))?;
        let mut wb = Workbench::new(&ring);

        for (name, t) in &raw.tables {
            let mut entries = Vec::new();
            for (p, gens) in t.get_ref() {
                entries.push((p.clone(), Ideal::new(&ring, self.polys(&ring, gens)?)));
            }
            let table = PrimeTable::new(&ring, entries)
                .map_err(|e| self.core(t.span(), &format!("table {name}"), e))?;
            wb.tables.insert(name.clone(), Arc::new(table));
        }

        for (name, m) in &raw.modules {
            let rm = m.get_ref();
            let rel = match &rm.relations {
                None => RingMatrix::zeros(&ring, rm.generators, 0),
                Some(rel) => {
                    let cols = rel.get_ref().first().map_or(0, |r| r.len());
                    self.matrix(&ring, rel, rm.generators, cols, &format!("module {name}"))?
                }
            };
            wb.modules.insert(name.clone(), PresentedModule::new(rel));
        }

        for name in raw.complexes.keys() {
            self.complex(&raw, &wb, name, None)?;
        }
        for (name, state) in std::mem::take(&mut self.states) {
            if let State::Done(c) = state {
                wb.complexes.insert(name, c);
            }
        }

        let complex_ref = |s: &Spanned<String>, wb: &Workbench| -> Load<FreeComplex> {
            wb.complexes
                .get(s.get_ref())
                .cloned()
                .ok_or_else(|| self.unresolved(s, "complex"))
        };

        for (name, m) in &raw.maps {
            let rm = m.get_ref();
            let what = format!("map {name}");
            let f = match (&rm.identity, &rm.source, &rm.target, &rm.components) {
                (Some(c), None, None, None) => ChainMap::identity(&complex_ref(c, &wb)?),
                (None, Some(s), Some(t), comps) => {
                    let (src, tgt) = (complex_ref(s, &wb)?, complex_ref(t, &wb)?);
                    let mut out = BTreeMap::new();
                    for (key, mat) in comps.iter().flatten() {
                        let n = self.degree_key(key, mat.span())?;
                        out.insert(
                            n,
                            self.matrix(
                                &ring,
                                mat,
                                tgt.rank(n),
                                src.rank(n),
                                &format!("{what} degree {n}"),
                            )?,
                        );
                    }
                    ChainMap::unchecked(&src, &tgt, out)
                        .map_err(|e| self.core(m.span(), &what, e))?
                }
                _ => {
                    return Err(self.invariant(
                        m.span(),
                        format!("{what}: give either identity or source and target"),
                    ));
                }
            };
            let f = match &rm.scale {
                Some(s) => f.scale(&self.poly(&ring, s)?),
                None => f,
            };
            wb.maps.insert(name.clone(), f);
        }

        for (name, h) in &raw.homotopies {
            let rh = h.get_ref();
            let (src, tgt) = (complex_ref(&rh.source, &wb)?, complex_ref(&rh.target, &wb)?);
            let mut out = BTreeMap::new();
            for (key, mat) in &rh.components {
                let n = self.degree_key(key, mat.span())?;
                out.insert(
                    n,
                    self.matrix(
                        &ring,
                        mat,
                        tgt.rank(n + 1),
                        src.rank(n),
                        &format!("homotopy {name} degree {n}"),
                    )?,
                );
            }
            let hom = Homotopy::new(&src, &tgt, out)
                .map_err(|e| self.core(h.span(), &format!("homotopy {name}"), e))?;
            wb.homotopies.insert(name.clone(), hom);
        }

        for (name, p) in &raw.perversity {
            let rp = p.get_ref();
            let table = wb
                .tables
                .get(rp.table.get_ref())
                .ok_or_else(|| self.unresolved(&rp.table, "table"))?;
            let mut values = Vec::new();
            for set in &rp.values {
                let mut s = PrimeSet::EMPTY;
                for prime in set {
                    let i = table
                        .index_of(prime.get_ref())
                        .ok_or_else(|| self.unresolved(prime, "prime"))?;
                    s.insert(i);
                }
                values.push(s);
            }
            let f = if values.is_empty() {
                PerversityFunction::empty(table)
            } else {
                PerversityFunction::new(table, rp.lo, values)
                    .map_err(|e| self.core(p.span(), &format!("perversity function {name}"), e))?
            };
            wb.perversity
                .insert(name.clone(), (rp.table.get_ref().clone(), f));
        }

        for (name, c) in &raw.certificates {
            let cert = self.certificate(&wb, name, c)?;
            wb.certificates.insert(name.clone(), cert);
        }
        Ok(wb)
    }

    fn complex(
        &mut self,
        raw: &RawFile,
        wb: &Workbench,
        name: &str,
        from: Option<&Spanned<String>>,
    ) -> Load<FreeComplex> {
        match self.states.get(name) {
            Some(State::Done(c)) => return Ok(c.clone()),
            Some(State::Loading) => {
                return Err(self.invariant(
                    from.map_or(0..0, |s| s.span()),
                    format!("complex {name} is defined in terms of itself"),
                ))
            }
            None => {}
        }
        let Some(entry) = raw.complexes.get(name) else {
            let s = from.expect("top-level names exist");
            return Err(self.unresolved(s, "complex"));
        };
        self.states.insert(name.to_string(), State::Loading);
        let span = entry.span();
        let c = entry.get_ref();
        let ring = &wb.ring;
        let what = format!("complex {name}");
        let kinds = [
            c.ranks.is_some(),
            c.koszul.is_some(),
            c.resolution.is_some(),
            c.residue.is_some(),
            c.sum.is_some(),
            c.tensor.is_some(),
        ];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(self.invariant(
                span,
                format!(
                    "{what}: give exactly one of ranks, koszul, resolution, residue, sum, tensor"
                ),
            ));
        }
        if (c.lo.is_some() || c.d.is_some()) && c.ranks.is_none() {
            return Err(self.invariant(span, format!("{what}: lo and d need ranks")));
        }
        if c.powers.is_some() && c.koszul.is_none() {
            return Err(self.invariant(span, format!("{what}: powers need koszul")));
        }
        let built = if let Some(ranks) = &c.ranks {
            let lo = c.lo.unwrap_or(0);
            let hi = lo + ranks.len() as i64 - 1;
            let mut diffs = BTreeMap::new();
            for (key, mat) in c.d.iter().flatten() {
                let n = self.degree_key(key, mat.span())?;
                if n <= lo || n > hi {
                    return Err(self
                        .invariant(mat.span(), format!("{what}: d_{n} lies outside the window")));
                }
                let k = (n - lo) as usize;
                diffs.insert(
                    n,
                    self.matrix(ring, mat, ranks[k - 1], ranks[k], &format!("{what} d_{n}"))?,
                );
            }
            let diffs = (lo + 1..=hi)
                .map(|n| {
                    let k = (n - lo) as usize;
                    diffs
                        .remove(&n)
                        .unwrap_or_else(|| RingMatrix::zeros(ring, ranks[k - 1], ranks[k]))
                })
                .collect();
            let cx = FreeComplex::new(ring, lo, ranks.clone(), diffs)
                .map_err(|e| self.core(span.clone(), &what, e))?;
            if let Some(v) = cx.check() {
                return Err(self.invariant(span, format!("{what}: {v}")));
            }
            cx
        } else if let Some(gens) = &c.koszul {
            let gens = self.polys(ring, gens)?;
            let powers = c.powers.clone().unwrap_or_else(|| vec![1; gens.len()]);
            let spec = KoszulSpec::new(ring, gens, powers)
                .map_err(|e| self.core(span.clone(), &what, e))?;
            koszul(&spec).map_err(|e| self.core(span.clone(), &what, e))?
        } else if let Some(m) = &c.resolution {
            let module = wb
                .modules
                .get(m.get_ref())
                .ok_or_else(|| self.unresolved(m, "module"))?;
            module
                .free_resolution(ring.nvars())
                .map_err(|e| self.core(span.clone(), &what, e))?
                .complex
        } else if let Some(gens) = &c.residue {
            let ideal = Ideal::new(ring, self.polys(ring, gens)?);
            PresentedModule::quotient(&ideal)
                .free_resolution(ring.nvars())
                .map_err(|e| self.core(span.clone(), &what, e))?
                .complex
        } else {
            let parts_raw = c.sum.as_ref().or(c.tensor.as_ref()).unwrap();
            let mut parts = Vec::new();
            for p in parts_raw {
                parts.push(self.complex(raw, wb, p.get_ref(), Some(p))?);
            }
            if c.sum.is_some() {
                let refs: Vec<&FreeComplex> = parts.iter().collect();
                FreeComplex::direct_sum(ring, &refs)
                    .map_err(|e| self.core(span.clone(), &what, e))?
            } else {
                let mut acc = FreeComplex::free(ring, 0, 1);
                for p in &parts {
                    acc = acc
                        .tensor(p)
                        .map_err(|e| self.core(span.clone(), &what, e))?;
                }
                acc
            }
        };
        let built = match c.shift {
            Some(s) => built.shift(s),
            None => built,
        };
        self.states
            .insert(name.to_string(), State::Done(built.clone()));
        Ok(built)
    }

    fn witness(&self, wb: &Workbench, w: &Spanned<RawWitness>) -> Load<Witness> {
        let rw = w.get_ref();
        let f = wb
            .maps
            .get(rw.map.get_ref())
            .ok_or_else(|| self.unresolved(&rw.map, "map"))?
            .clone();
        match rw.direction.get_ref().as_str() {
            "forward" => Ok(Witness::Forward(f)),
            "backward" => Ok(Witness::Backward(f)),
            other => Err(self.invariant(
                rw.direction.span(),
                format!("direction {other:?} is neither forward nor backward"),
            )),
        }
    }

    fn certificate(
        &self,
        wb: &Workbench,
        name: &str,
        c: &Spanned<RawCertificate>,
    ) -> Load<Certificate> {
        let rc = c.get_ref();
        let mut cert = Certificate::new(&wb.ring, &rc.root);
        let complex = |s: &Spanned<String>| -> Load<FreeComplex> {
            wb.complexes
                .get(s.get_ref())
                .cloned()
                .ok_or_else(|| self.unresolved(s, "complex"))
        };
        let map = |s: &Spanned<String>| -> Load<ChainMap> {
            wb.maps
                .get(s.get_ref())
                .cloned()
                .ok_or_else(|| self.unresolved(s, "map"))
        };
        for (node_name, n) in &rc.nodes {
            let rn = n.get_ref();
            let kind = rn.kind.get_ref().as_str();
            let missing = |field: &str| {
                self.invariant(
                    n.span(),
                    format!("certificate {name}, node {node_name}: {kind} needs {field}"),
                )
            };
            let allowed: &[&str] = match kind {
                "generator" => &["complex", "witness"],
                "suspend" => &["node", "shift"],
                "sum" => &["nodes"],
                "extend" => &["x", "y", "map", "cone_witness", "z"],
                "replace" => &["node", "target", "witness"],
                "retract" => &["node", "target", "section", "retraction", "homotopy"],
                other => {
                    return Err(
                        self.invariant(rn.kind.span(), format!("unknown node kind {other:?}"))
                    );
                }
            };
            let present = [
                ("complex", rn.complex.is_some()),
                ("witness", rn.witness.is_some()),
                ("node", rn.node.is_some()),
                ("shift", rn.shift.is_some()),
                ("nodes", rn.nodes.is_some()),
                ("x", rn.x.is_some()),
                ("y", rn.y.is_some()),
                ("map", rn.map.is_some()),
                ("cone_witness", rn.cone_witness.is_some()),
                ("z", rn.z.is_some()),
                ("target", rn.target.is_some()),
                ("section", rn.section.is_some()),
                ("retraction", rn.retraction.is_some()),
                ("homotopy", rn.homotopy.is_some()),
            ];
            if let Some((extra, _)) = present.iter().find(|(f, p)| *p && !allowed.contains(f)) {
                return Err(self.invariant(
                    n.span(),
                    format!("certificate {name}, node {node_name}: {kind} takes no {extra}"),
                ));
            }
            let node = match kind {
                "generator" => Node::Generator {
                    complex: complex(rn.complex.as_ref().ok_or_else(|| missing("complex"))?)?,
                    witness: match &rn.witness {
                        None => None,
                        Some(w) => Some((w.get_ref().reference.clone(), self.witness(wb, w)?)),
                    },
                },
                "suspend" => Node::Suspend {
                    node: rn.node.clone().ok_or_else(|| missing("node"))?,
                    shift: rn.shift.ok_or_else(|| missing("shift"))?,
                },
                "sum" => Node::Sum {
                    nodes: rn.nodes.clone().ok_or_else(|| missing("nodes"))?,
                },
                "extend" => Node::Extend {
                    x: rn.x.clone().ok_or_else(|| missing("x"))?,
                    y: complex(rn.y.as_ref().ok_or_else(|| missing("y"))?)?,
                    map: map(rn.map.as_ref().ok_or_else(|| missing("map"))?)?,
                    cone_witness: self.witness(
                        wb,
                        rn.cone_witness
                            .as_ref()
                            .ok_or_else(|| missing("cone_witness"))?,
                    )?,
                    z: rn.z.clone().ok_or_else(|| missing("z"))?,
                },
                "replace" => Node::Replace {
                    node: rn.node.clone().ok_or_else(|| missing("node"))?,
                    target: complex(rn.target.as_ref().ok_or_else(|| missing("target"))?)?,
                    witness: self
                        .witness(wb, rn.witness.as_ref().ok_or_else(|| missing("witness"))?)?,
                },
                _ => {
                    let h = rn.homotopy.as_ref().ok_or_else(|| missing("homotopy"))?;
                    Node::Retract {
                        node: rn.node.clone().ok_or_else(|| missing("node"))?,
                        target: complex(rn.target.as_ref().ok_or_else(|| missing("target"))?)?,
                        section: map(rn.section.as_ref().ok_or_else(|| missing("section"))?)?,
                        retraction: map(rn
                            .retraction
                            .as_ref()
                            .ok_or_else(|| missing("retraction"))?)?,
                        homotopy: wb
                            .homotopies
                            .get(h.get_ref())
                            .cloned()
                            .ok_or_else(|| self.unresolved(h, "homotopy"))?,
                    }
                }
            };
            cert.push(node_name.clone(), node);
        }
        if let Some(claim) = &rc.claim {
            cert.claim = Some(Claim {
                complex: complex(claim)?,
                witness: match &rc.claim_witness {
                    None => None,
                    Some(w) => Some(self.witness(wb, w)?),
                },
            });
        } else if let Some(w) = &rc.claim_witness {
            return Err(self.invariant(
                w.span(),
                format!("certificate {name}: claim_witness without claim"),
            ));
        }
        Ok(cert)
    }
}

fn parse_field(s: &str) -> Option<Field> {
    let s = s.trim();
    if matches!(s, "QQ" | "Q") {
        return Some(Field::Rationals);
    }
    let inner = s.strip_prefix("GF(")?.strip_suffix(')')?;
    Field::prime(inner.trim().parse().ok()?).ok()
}
