//! Certificates for `E < F`: a DAG of closure steps, each checked locally.
//!
//! A node admits a complex into the class generated by `E`. Generators are
//! `E` itself or quasi-isomorphic copies of admitted complexes; the other
//! nodes apply positive suspension, finite sums, extensions along cones,
//! quasi-isomorphic replacement, and retracts. Every witness is supplied; the
//! checker never searches.
//!
//! `EXTEND(x, y, f, w, z)` reads the triangle `X -f-> Y -> cone(f) -> ΣX`
//! with `w` a quasi-isomorphism between `cone(f)` and `Z`: with `X` and `Z`
//! admitted, `Y` is. Triangles presented in another rotation must first be
//! brought to this one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::complex::{check_homotopy, cone, ChainMap, FreeComplex, Homotopy};
use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::poly::PolyRing;

/// A quasi-isomorphism in one of the two directions.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// From the node's complex to the other one.
    Forward(ChainMap),
    /// From the other complex to the node's.
    Backward(ChainMap),
}

impl Witness {
    pub fn map(&self) -> &ChainMap {
        match self {
            Witness::Forward(f) | Witness::Backward(f) => f,
        }
    }

    fn with_map(&self, f: ChainMap) -> Witness {
        match self {
            Witness::Forward(_) => Witness::Forward(f),
            Witness::Backward(_) => Witness::Backward(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// `complex` is `E`, or is quasi-isomorphic to `E` (reference `None`) or
    /// to an earlier node.
    Generator {
        complex: FreeComplex,
        witness: Option<(Option<String>, Witness)>,
    },
    Suspend {
        node: String,
        shift: i64,
    },
    Sum {
        nodes: Vec<String>,
    },
    Extend {
        x: String,
        y: FreeComplex,
        map: ChainMap,
        cone_witness: Witness,
        z: String,
    },
    Replace {
        node: String,
        target: FreeComplex,
        witness: Witness,
    },
    /// `retraction ∘ section ≃ id_target` via `homotopy`.
    Retract {
        node: String,
        target: FreeComplex,
        section: ChainMap,
        retraction: ChainMap,
        homotopy: Homotopy,
    },
}

impl Node {
    pub fn kind(&self) -> &'static str {
        match self {
            Node::Generator { .. } => "generator",
            Node::Suspend { .. } => "suspend",
            Node::Sum { .. } => "sum",
            Node::Extend { .. } => "extend",
            Node::Replace { .. } => "replace",
            Node::Retract { .. } => "retract",
        }
    }

    pub fn references(&self) -> Vec<&str> {
        match self {
            Node::Generator { witness, .. } => witness
                .as_ref()
                .and_then(|(r, _)| r.as_deref())
                .into_iter()
                .collect(),
            Node::Suspend { node, .. }
            | Node::Replace { node, .. }
            | Node::Retract { node, .. } => vec![node],
            Node::Sum { nodes } => nodes.iter().map(|s| s.as_str()).collect(),
            Node::Extend { x, z, .. } => vec![x, z],
        }
    }
}

/// The complex the root is claimed to equal, with a witness unless equal on the nose.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub complex: FreeComplex,
    /// From the root's complex to the claimed one, or back.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub ring: PolyRing,
    pub nodes: Vec<(String, Node)>,
    pub root: String,
    pub claim: Option<Claim>,
}

impl Certificate {
    pub fn new(ring: &PolyRing, root: &str) -> Certificate {
        Certificate {
            ring: ring.clone(),
            nodes: Vec::new(),
            root: root.to_string(),
            claim: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, node: Node) -> &mut Certificate {
        self.nodes.push((name.into(), node));
        self
    }

    pub fn node(&self, name: &str) -> Option<&Node> {
        self.nodes.iter().find(|(n, _)| n == name).map(|(_, n)| n)
    }

    pub fn node_mut(&mut self, name: &str) -> Option<&mut Node> {
        self.nodes
            .iter_mut()
            .find(|(n, _)| n == name)
            .map(|(_, n)| n)
    }

    pub fn with_claim(mut self, complex: FreeComplex, witness: Option<Witness>) -> Certificate {
        self.claim = Some(Claim { complex, witness });
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectKind {
    UnknownNode,
    DuplicateNode,
    Cycle,
    NegativeSuspension,
    BadWitness,
    NotQuasiIso,
    ComplexMismatch,
    RingMismatch,
    NotGenerator,
    HomotopyFails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub node: String,
    pub kind: RejectKind,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: {}", self.node, self.reason)
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub rejection: Option<Rejection>,
    /// Nodes in the order they were admitted.
    pub admitted: Vec<String>,
    /// Complex of the root, when accepted.
    pub root_complex: Option<FreeComplex>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.rejection.is_none()
    }
}

fn reject(node: &str, kind: RejectKind, reason: impl Into<String>) -> Rejection {
    Rejection {
        node: node.to_string(),
        kind,
        reason: reason.into(),
    }
}

/// Checks that `w` is a quasi-isomorphism between `own` and `other`.
fn check_witness(
    node: &str,
    w: &Witness,
    own: &FreeComplex,
    other: &FreeComplex,
) -> Result<Option<Rejection>> {
    let (from, to) = match w {
        Witness::Forward(_) => (own, other),
        Witness::Backward(_) => (other, own),
    };
    let f = w.map();
    if f.ring() != own.ring() {
        return Ok(Some(reject(
            node,
            RejectKind::RingMismatch,
            "witness over another ring",
        )));
    }
    if f.source() != from || f.target() != to {
        return Ok(Some(reject(
            node,
            RejectKind::BadWitness,
            "witness does not run between the expected complexes",
        )));
    }
    if let Some(n) = f.first_noncommuting_degree()? {
        return Ok(Some(reject(
            node,
            RejectKind::BadWitness,
            format!("witness is not a chain map in degree {n}"),
        )));
    }
    if !f.is_quasi_iso()? {
        return Ok(Some(reject(
            node,
            RejectKind::NotQuasiIso,
            "witness is not a quasi-isomorphism",
        )));
    }
    Ok(None)
}

/// Topological order of the nodes reachable from the root, or the first
/// structural defect.
fn order(c: &Certificate) -> std::result::Result<Vec<usize>, Rejection> {
    let mut index = HashMap::new();
    for (i, (name, _)) in c.nodes.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(reject(name, RejectKind::DuplicateNode, "name used twice"));
        }
    }
    let Some(&root) = index.get(c.root.as_str()) else {
        return Err(reject(
            &c.root,
            RejectKind::UnknownNode,
            "root is not a node",
        ));
    };
    // 0 unvisited, 1 on the stack, 2 done
    let mut state = vec![0u8; c.nodes.len()];
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    state[root] = 1;
    while let Some(&mut (i, ref mut k)) = stack.last_mut() {
        let refs = c.nodes[i].1.references();
        if *k < refs.len() {
            let r = refs[*k];
            *k += 1;
            let Some(&j) = index.get(r) else {
                return Err(reject(
                    &c.nodes[i].0,
                    RejectKind::UnknownNode,
                    format!("refers to unknown node {r:?}"),
                ));
            };
            match state[j] {
                0 => {
                    state[j] = 1;
                    stack.push((j, 0));
                }
                1 => {
                    return Err(reject(
                        &c.nodes[i].0,
                        RejectKind::Cycle,
                        format!("cycle through {r:?}"),
                    ));
                }
                _ => {}
            }
        } else {
            state[i] = 2;
            out.push(i);
            stack.pop();
        }
    }
    Ok(out)
}

/// Accepts iff every node reachable from the root validates and the root
/// matches the claim.
pub fn check_certificate(c: &Certificate, e: &FreeComplex) -> Result<CheckReport> {
    let mut report = CheckReport {
        rejection: None,
        admitted: Vec::new(),
        root_complex: None,
    };
    if e.ring() != &c.ring {
        report.rejection = Some(reject(
            &c.root,
            RejectKind::RingMismatch,
            "generator over another ring",
        ));
        return Ok(report);
    }
    let order = match order(c) {
        Ok(o) => o,
        Err(r) => {
            report.rejection = Some(r);
            return Ok(report);
        }
    };
    let mut admitted: BTreeMap<&str, FreeComplex> = BTreeMap::new();
    for i in order {
        let (name, node) = (&c.nodes[i].0, &c.nodes[i].1);
        match admit(name, node, e, &admitted, &c.ring)? {
            Ok(cx) => {
                admitted.insert(name, cx);
                report.admitted.push(name.clone());
            }
            Err(r) => {
                report.rejection = Some(r);
                return Ok(report);
            }
        }
    }
    let root = admitted[c.root.as_str()].clone();
    if let Some(claim) = &c.claim {
        let bad = match &claim.witness {
            None if claim.complex != root => Some(reject(
                &c.root,
                RejectKind::ComplexMismatch,
                "root complex differs from the claimed complex",
            )),
            None => None,
            Some(w) => check_witness(&c.root, w, &root, &claim.complex)?,
        };
        if bad.is_some() {
            report.rejection = bad;
            return Ok(report);
        }
    }
    report.root_complex = Some(root);
    Ok(report)
}

fn admit(
    name: &str,
    node: &Node,
    e: &FreeComplex,
    admitted: &BTreeMap<&str, FreeComplex>,
    ring: &PolyRing,
) -> Result<std::result::Result<FreeComplex, Rejection>> {
    let ring_ok = |c: &FreeComplex| c.ring() == ring;
    let invalid = |c: &FreeComplex| {
        c.check().map(|v| {
            reject(
                name,
                RejectKind::ComplexMismatch,
                format!("complex is invalid: {v}"),
            )
        })
    };
    Ok(match node {
        Node::Generator { complex, witness } => {
            if !ring_ok(complex) {
                return Ok(Err(reject(
                    name,
                    RejectKind::RingMismatch,
                    "complex over another ring",
                )));
            }
            if let Some(r) = invalid(complex) {
                return Ok(Err(r));
            }
            match witness {
                None if complex == e => Ok(complex.clone()),
                None => Err(reject(
                    name,
                    RejectKind::NotGenerator,
                    "complex is not the generator",
                )),
                Some((reference, w)) => {
                    let other = match reference {
                        None => e,
                        Some(r) => &admitted[r.as_str()],
                    };
                    match check_witness(name, w, complex, other)? {
                        None => Ok(complex.clone()),
                        Some(r) => Err(r),
                    }
                }
            }
        }
        Node::Suspend { node, shift } => {
            if *shift < 1 {
                Err(reject(
                    name,
                    RejectKind::NegativeSuspension,
                    format!("suspension by {shift}; only positive shifts are allowed"),
                ))
            } else {
                Ok(admitted[node.as_str()].shift(*shift))
            }
        }
        Node::Sum { nodes } => {
            let parts: Vec<&FreeComplex> = nodes.iter().map(|n| &admitted[n.as_str()]).collect();
            Ok(FreeComplex::direct_sum(ring, &parts)?)
        }
        Node::Extend {
            x,
            y,
            map,
            cone_witness,
            z,
        } => {
            if !ring_ok(y) || map.ring() != ring {
                return Ok(Err(reject(
                    name,
                    RejectKind::RingMismatch,
                    "data over another ring",
                )));
            }
            if let Some(r) = invalid(y) {
                return Ok(Err(r));
            }
            if map.source() != &admitted[x.as_str()] || map.target() != y {
                return Ok(Err(reject(
                    name,
                    RejectKind::BadWitness,
                    "map does not run from x to y",
                )));
            }
            if let Some(n) = map.first_noncommuting_degree()? {
                return Ok(Err(reject(
                    name,
                    RejectKind::BadWitness,
                    format!("map is not a chain map in degree {n}"),
                )));
            }
            let cn = cone(map)?;
            match check_witness(name, cone_witness, &cn, &admitted[z.as_str()])? {
                None => Ok(y.clone()),
                Some(r) => Err(r),
            }
        }
        Node::Replace {
            node,
            target,
            witness,
        } => {
            if !ring_ok(target) {
                return Ok(Err(reject(
                    name,
                    RejectKind::RingMismatch,
                    "complex over another ring",
                )));
            }
            if let Some(r) = invalid(target) {
                return Ok(Err(r));
            }
            match check_witness(name, witness, &admitted[node.as_str()], target)? {
                None => Ok(target.clone()),
                Some(r) => Err(r),
            }
        }
        Node::Retract {
            node,
            target,
            section,
            retraction,
            homotopy,
        } => {
            if !ring_ok(target) {
                return Ok(Err(reject(
                    name,
                    RejectKind::RingMismatch,
                    "complex over another ring",
                )));
            }
            if let Some(r) = invalid(target) {
                return Ok(Err(r));
            }
            let big = &admitted[node.as_str()];
            if section.source() != target || section.target() != big {
                return Ok(Err(reject(
                    name,
                    RejectKind::BadWitness,
                    "section does not run from target to node",
                )));
            }
            if retraction.source() != big || retraction.target() != target {
                return Ok(Err(reject(
                    name,
                    RejectKind::BadWitness,
                    "retraction does not run from node to target",
                )));
            }
            for (what, f) in [("section", section), ("retraction", retraction)] {
                if let Some(n) = f.first_noncommuting_degree()? {
                    return Ok(Err(reject(
                        name,
                        RejectKind::BadWitness,
                        format!("{what} is not a chain map in degree {n}"),
                    )));
                }
            }
            if homotopy.source() != target || homotopy.target() != target {
                return Ok(Err(reject(
                    name,
                    RejectKind::BadWitness,
                    "homotopy has the wrong shape",
                )));
            }
            let rs = section.then(retraction)?;
            if check_homotopy(&rs, &ChainMap::identity(target), homotopy)? {
                Ok(target.clone())
            } else {
                Err(reject(
                    name,
                    RejectKind::HomotopyFails,
                    "retraction ∘ section is not homotopic to the identity",
                ))
            }
        }
    })
}

/// The brutal-filtration certificate for `R < M`, `M` concentrated in degrees ≥ 0.
pub fn cellular_certificate(m: &FreeComplex) -> Result<Certificate> {
    let ring = m.ring().clone();
    let m = m.trimmed();
    if m.is_zero() {
        let mut c = Certificate::new(&ring, "empty");
        c.push("empty", Node::Sum { nodes: Vec::new() });
        return Ok(c.with_claim(m, None));
    }
    if m.lo() < 0 {
        return Err(Error::Precondition(format!(
            "complex starts in degree {} < 0",
            m.lo()
        )));
    }
    let unit = FreeComplex::free(&ring, 0, 1);
    let mut c = Certificate::new(&ring, "R");
    c.push(
        "R",
        Node::Generator {
            complex: unit,
            witness: None,
        },
    );

    // `R^r` in degree `j`
    let cell = |c: &mut Certificate, j: i64, r: usize| -> String {
        let mut name = "R".to_string();
        if r > 1 {
            name = format!("sum{j}");
            c.push(
                &name,
                Node::Sum {
                    nodes: vec!["R".into(); r],
                },
            );
        }
        if j > 0 {
            let s = format!("cell{j}");
            c.push(
                &s,
                Node::Suspend {
                    node: name,
                    shift: j,
                },
            );
            name = s;
        }
        name
    };

    let mut prev: Option<(String, FreeComplex)> = None;
    for j in m.lo()..=m.hi() {
        let r = m.rank(j);
        if r == 0 {
            continue;
        }
        let z = cell(&mut c, j, r);
        let Some((xname, x)) = prev.take() else {
            prev = Some((z, m.brutal_le(j)));
            continue;
        };
        let y = m.brutal_le(j);
        let incl = ChainMap::from_fn(&x, &y, |n| Ok(RingMatrix::identity(&ring, x.rank(n))))?;
        let cn = cone(&incl)?;
        let target = FreeComplex::free(&ring, j, r);
        let mut comps = BTreeMap::new();
        let mut proj = RingMatrix::zeros(&ring, r, cn.rank(j));
        proj.paste(0, x.rank(j - 1), &RingMatrix::identity(&ring, r));
        comps.insert(j, proj);
        let w = ChainMap::new(&cn, &target, comps)?;
        let name = format!("F{j}");
        c.push(
            &name,
            Node::Extend {
                x: xname,
                y: y.clone(),
                map: incl,
                cone_witness: Witness::Forward(w),
                z,
            },
        );
        prev = Some((name, y));
    }
    c.root = prev.map(|p| p.0).unwrap_or_else(|| "R".into());
    Ok(c.with_claim(m, None))
}

/// `⊕_i (X_i ⊗ M) -> (⊕_i X_i) ⊗ M`, a permutation in each degree.
pub fn sum_tensor_comparison(parts: &[&FreeComplex], m: &FreeComplex) -> Result<ChainMap> {
    let ring = m.ring().clone();
    let tensored: Vec<FreeComplex> = parts.iter().map(|x| x.tensor(m)).collect::<Result<_>>()?;
    let trefs: Vec<&FreeComplex> = tensored.iter().collect();
    let src = FreeComplex::direct_sum(&ring, &trefs)?;
    let sum = FreeComplex::direct_sum(&ring, parts)?;
    let tgt = sum.tensor(m)?;
    let mut comps = BTreeMap::new();
    for n in src.lo()..=src.hi() {
        if src.rank(n) == 0 {
            continue;
        }
        let tb = FreeComplex::tensor_blocks(&sum, m, n);
        let mut perm = Vec::with_capacity(src.rank(n));
        for (i, x) in parts.iter().enumerate() {
            for (p, _, cp, dq) in FreeComplex::tensor_blocks(x, m, n) {
                let (_, toff, _, _) = *tb
                    .iter()
                    .find(|t| t.0 == p)
                    .expect("block present in the sum");
                let before: usize = parts[..i].iter().map(|y| y.rank(p)).sum();
                for a in 0..cp {
                    for b in 0..dq {
                        perm.push(toff + (before + a) * dq + b);
                    }
                }
            }
        }
        comps.insert(n, RingMatrix::permutation(&ring, &perm));
    }
    ChainMap::new(&src, &tgt, comps)
}

/// `cone(f ⊗ 1) -> cone(f) ⊗ M`, a permutation in each degree.
pub fn cone_tensor_comparison(f: &ChainMap, m: &FreeComplex) -> Result<ChainMap> {
    let ring = m.ring().clone();
    let (x, y) = (f.source(), f.target());
    let src = cone(&f.tensor_right(m)?)?;
    let cf = cone(f)?;
    let tgt = cf.tensor(m)?;
    let xm = x.tensor(m)?;
    let mut comps = BTreeMap::new();
    for n in src.lo()..=src.hi() {
        if src.rank(n) == 0 {
            continue;
        }
        let tb = FreeComplex::tensor_blocks(&cf, m, n);
        let find = |p: i64| {
            tb.iter()
                .find(|t| t.0 == p)
                .expect("block present in the cone")
                .1
        };
        let mut perm = Vec::with_capacity(src.rank(n));
        for (p, _, cp, dq) in FreeComplex::tensor_blocks(x, m, n - 1) {
            let toff = find(p + 1);
            for a in 0..cp {
                for b in 0..dq {
                    perm.push(toff + a * dq + b);
                }
            }
        }
        debug_assert_eq!(perm.len(), xm.rank(n - 1));
        for (p, _, cp, dq) in FreeComplex::tensor_blocks(y, m, n) {
            let toff = find(p);
            for a in 0..cp {
                for b in 0..dq {
                    perm.push(toff + (x.rank(p - 1) + a) * dq + b);
                }
            }
        }
        comps.insert(n, RingMatrix::permutation(&ring, &perm));
    }
    ChainMap::new(&src, &tgt, comps)
}

/// Inverse of a degreewise permutation map.
fn invert_permutation(f: &ChainMap) -> Result<ChainMap> {
    let comps = f
        .components()
        .iter()
        .map(|(&n, m)| (n, m.transpose()))
        .collect();
    ChainMap::new(f.target(), f.source(), comps)
}

fn tensor_witness(w: &Witness, m: &FreeComplex) -> Result<Witness> {
    Ok(w.with_map(w.map().tensor_right(m)?))
}

/// Transports a certificate for `E < F` to one for `E ⊗ M < F ⊗ M`.
///
/// Each node's complex becomes its tensor with `M` exactly; sums and cones,
/// which only agree up to reordering of the basis, get comparison maps.
pub fn tensor_certificate(c: &Certificate, m: &FreeComplex) -> Result<Certificate> {
    if m.ring() != &c.ring {
        return Err(Error::RingMismatch);
    }
    let order = order(c).map_err(|r| Error::Precondition(format!("malformed certificate: {r}")))?;
    let mut complexes: HashMap<&str, FreeComplex> = HashMap::new();
    let mut out = Certificate::new(&c.ring, &c.root);
    for i in order {
        let (name, node) = (&c.nodes[i].0, &c.nodes[i].1);
        let original = match node {
            Node::Generator { complex, witness } => {
                let witness = match witness {
                    None => None,
                    Some((r, w)) => Some((r.clone(), tensor_witness(w, m)?)),
                };
                out.push(
                    name,
                    Node::Generator {
                        complex: complex.tensor(m)?,
                        witness,
                    },
                );
                complex.clone()
            }
            Node::Suspend { node, shift } => {
                out.push(
                    name,
                    Node::Suspend {
                        node: node.clone(),
                        shift: *shift,
                    },
                );
                complexes[node.as_str()].shift(*shift)
            }
            Node::Sum { nodes } => {
                let parts: Vec<&FreeComplex> =
                    nodes.iter().map(|n| &complexes[n.as_str()]).collect();
                let sum = FreeComplex::direct_sum(&c.ring, &parts)?;
                let inner = format!("{name}.parts");
                out.push(
                    &inner,
                    Node::Sum {
                        nodes: nodes.clone(),
                    },
                );
                out.push(
                    name,
                    Node::Replace {
                        node: inner,
                        target: sum.tensor(m)?,
                        witness: Witness::Forward(sum_tensor_comparison(&parts, m)?),
                    },
                );
                sum
            }
            Node::Extend {
                x,
                y,
                map,
                cone_witness,
                z,
            } => {
                let perm = cone_tensor_comparison(map, m)?;
                let w = cone_witness.map().tensor_right(m)?;
                let cone_witness = match cone_witness {
                    Witness::Forward(_) => Witness::Forward(perm.then(&w)?),
                    Witness::Backward(_) => Witness::Backward(w.then(&invert_permutation(&perm)?)?),
                };
                out.push(
                    name,
                    Node::Extend {
                        x: x.clone(),
                        y: y.tensor(m)?,
                        map: map.tensor_right(m)?,
                        cone_witness,
                        z: z.clone(),
                    },
                );
                y.clone()
            }
            Node::Replace {
                node,
                target,
                witness,
            } => {
                out.push(
                    name,
                    Node::Replace {
                        node: node.clone(),
                        target: target.tensor(m)?,
                        witness: tensor_witness(witness, m)?,
                    },
                );
                target.clone()
            }
            Node::Retract {
                node,
                target,
                section,
                retraction,
                homotopy,
            } => {
                out.push(
                    name,
                    Node::Retract {
                        node: node.clone(),
                        target: target.tensor(m)?,
                        section: section.tensor_right(m)?,
                        retraction: retraction.tensor_right(m)?,
                        homotopy: homotopy.tensor_right(m)?,
                    },
                );
                target.clone()
            }
        };
        complexes.insert(name, original);
    }
    if let Some(claim) = &c.claim {
        let witness = match &claim.witness {
            None => None,
            Some(w) => Some(tensor_witness(w, m)?),
        };
        out.claim = Some(Claim {
            complex: claim.complex.tensor(m)?,
            witness,
        });
    }
    Ok(out)
}

/// Checks `c` against `e` first and transports it only when accepted.
pub fn tensor_checked(c: &Certificate, e: &FreeComplex, m: &FreeComplex) -> Result<Certificate> {
    let report = check_certificate(c, e)?;
    if let Some(r) = report.rejection {
        return Err(Error::Precondition(format!("certificate rejected: {r}")));
    }
    tensor_certificate(c, m)
}
