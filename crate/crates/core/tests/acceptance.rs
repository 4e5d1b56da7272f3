//! The ten acceptance criteria, one line each, with their time limits.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use common::*;
use nullity_core::certify::{
    cellular_certificate, check_certificate, tensor_certificate, Certificate, Node, Witness,
};
use nullity_core::complex::{cone_inclusion, cone_projection};
use nullity_core::corpus;
use nullity_core::koszul::{
    annihilator_power, check_annihilation, koszul, minsupp_map, KoszulSpec,
};
use nullity_core::lemmas::{verify_transit, Status};
use nullity_core::module::is_exact;
use nullity_core::perversity::{
    enumerate, phi, roundtrip_with, GeneratorBuilder, PerversityFunction,
};
use nullity_core::spectrum::{supp_complex, PrimeSet, PrimeTable, SupportCache};
use nullity_core::{
    check_homotopy, ChainMap, FreeComplex, HomotopySystem, Ideal, PolyRing, RingMatrix,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Koszul annihilation
fn koszul_annihilation() -> Outcome {
    let r = corpus::ring_xy();
    let mut g = rng(1);
    let mut degrees = 0;
    for case in 0..100 {
        let m = loop {
            let inst = random_instance(
                &mut g,
                &r,
                Shape {
                    lo: 0,
                    len: 3,
                    max_rank: 3,
                    max_degree: 2,
                    base_changes: 2,
                    base_degree: 1,
                    graded: false,
                },
            );
            if inst.complex.max_entry_degree() <= 2 {
                break inst.complex;
            }
        };
        let k = g.gen_range(1..=2);
        let gens: Vec<_> = (0..k).map(|_| rand_poly(&mut g, &r, 2, false)).collect();
        let powers: Vec<u32> = (0..k).map(|_| g.gen_range(1..=2)).collect();
        let spec = KoszulSpec::new(&r, gens, powers).map_err(|e| e.to_string())?;
        let rep = check_annihilation(&m, &spec).map_err(|e| e.to_string())?;
        ensure(rep.passed, || format!("case {case}: {:?}", rep.degrees))?;
        degrees += rep.degrees.len();
    }
    Ok(format!("100 pairs, {degrees} degrees checked"))
}

// 2. Koszul support
fn koszul_support() -> Outcome {
    let r = corpus::ring_xy();
    let tables = [
        corpus::axes_table(&r).unwrap(),
        corpus::points_table(&r).unwrap(),
        corpus::lines_table(&r).unwrap(),
    ];
    let mut primes = 0;
    for t in &tables {
        for p in 0..t.len() {
            let k = koszul(&KoszulSpec::of_ideal(t.ideal(p)).unwrap()).unwrap();
            let supp = supp_complex(&k, t)
                .unwrap()
                .values()
                .fold(PrimeSet::EMPTY, |a, &s| a.union(s));
            ensure(supp == t.v_of(p), || {
                format!(
                    "K({}) has support {:?}, expected {:?}",
                    t.name(p),
                    t.format_set(supp),
                    t.format_set(t.v_of(p))
                )
            })?;
            primes += 1;
        }
    }
    Ok(format!("{primes} primes over tables of sizes 3, 5, 6"))
}

// 3. Classification round trip
fn round_trip() -> Outcome {
    let r = corpus::ring_xy();
    let mut total = 0;
    for t in [
        corpus::chain_table(&r).unwrap(),
        corpus::five_table(&r).unwrap(),
    ] {
        let t = Arc::new(t);
        let mut builder = GeneratorBuilder::new(&t);
        let mut cache = SupportCache::new();
        for len in 1..=4 {
            for f in enumerate(&t, 0, len) {
                let rep =
                    roundtrip_with(&mut builder, &mut cache, &f).map_err(|e| e.to_string())?;
                ensure(rep.passed, || format!("{f}: {:?}", rep.discrepancy))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} functions (windows of length 1 to 4)"))
}

// 4. Homology oracle equivalence
fn homology_oracles() -> Outcome {
    let r1 = corpus::ring_x();
    let mut g = rng(4);
    let mut checked = 0;
    for case in 0..500 {
        let inst = random_instance(
            &mut g,
            &r1,
            Shape {
                lo: -1,
                len: 4,
                max_rank: 3,
                max_degree: 2,
                base_changes: 3,
                base_degree: 1,
                graded: false,
            },
        );
        let c = &inst.complex;
        for n in c.lo()..=c.hi() {
            let h = c.homology(n).map_err(|e| e.to_string())?;
            let ours = presentation_invariants(&h);
            let oracle = homology_oracle(c, n);
            ensure(ours == oracle, || {
                format!("Q[x] case {case}, H_{n}: {ours:?} vs {oracle:?}")
            })?;
            checked += 1;
        }
    }
    let r2 = corpus::ring_xy();
    let mut graded = 0;
    for case in 0..200 {
        let inst = random_instance(
            &mut g,
            &r2,
            Shape {
                lo: 0,
                len: 3,
                max_rank: 3,
                max_degree: 2,
                base_changes: 2,
                base_degree: 1,
                graded: true,
            },
        );
        let c = &inst.complex;
        for n in c.lo()..=c.hi() {
            for t in 0..=6 {
                let ours = graded_homology_engine(&inst, n, t);
                let oracle = graded_homology_oracle(&inst, n, t);
                ensure(ours == oracle, || {
                    format!("Q[x,y] case {case}, dim H_{n} in degree {t}: {ours} vs {oracle}")
                })?;
                graded += 1;
            }
        }
    }
    Ok(format!(
        "{checked} univariate homology modules, {graded} graded dimensions"
    ))
}

// 5. Cone exactness
fn cone_exactness() -> Outcome {
    let mut g = rng(5);
    let rings = [corpus::ring_x(), corpus::ring_xy()];
    let mut spots = 0;
    for case in 0..200 {
        let r = &rings[case % 2];
        let f = random_chain_map(
            &mut g,
            r,
            Shape {
                lo: 0,
                len: 3,
                max_rank: 2,
                max_degree: 1,
                base_changes: 1,
                base_degree: if case % 2 == 0 { 1 } else { 0 },
                graded: false,
            },
        );
        let i = cone_inclusion(&f).map_err(|e| e.to_string())?;
        let p = cone_projection(&f).map_err(|e| e.to_string())?;
        let sf = f.shift(1);
        let (lo, hi) = (
            f.source().lo().min(f.target().lo()),
            f.source().hi().max(f.target().hi()) + 1,
        );
        for n in lo..=hi {
            let maps = [&f, &i, &p, &sf];
            let h: Vec<_> = maps
                .iter()
                .map(|m| m.homology_map(n))
                .collect::<nullity_core::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            for k in 0..3 {
                let ok = is_exact(&h[k], &h[k + 1]).map_err(|e| e.to_string())?;
                ensure(ok, || {
                    format!("case {case}: not exact at position {k} of degree {n}")
                })?;
                spots += 1;
            }
        }
    }
    Ok(format!("200 maps, exact at {spots} positions"))
}

// 6. Annihilator powers
fn annihilator_powers() -> Outcome {
    let mut g = rng(6);
    let r = corpus::ring_xy();
    let elements = ["x", "y", "x + y", "x - 1"];
    let mut hist = BTreeMap::new();
    let mut by_homology = 0;
    let mut by_system = 0;
    let mut case = 0;
    while case < 50 {
        let x = r.p(pick(&mut g, &elements));
        let a = g.gen_range(1..=2);
        let m = random_instance(
            &mut g,
            &r,
            Shape {
                lo: 0,
                len: 2,
                max_rank: 2,
                max_degree: 1,
                base_changes: 1,
                base_degree: 0,
                graded: false,
            },
        )
        .complex;
        let kx = koszul(&KoszulSpec::new(&r, vec![x.clone()], vec![a]).unwrap()).unwrap();
        let y = m.tensor(&kx).unwrap();
        if y.lo() > y.hi() {
            continue;
        }
        let f = if case % 2 == 0 {
            // free source with zero differential: a choice of cycles
            let n = g.gen_range(y.lo()..=y.hi());
            let z = y.cycles(n).unwrap();
            if z.cols() == 0 {
                continue;
            }
            let k = g.gen_range(1..=2);
            let coeffs = RingMatrix::from_columns(
                &r,
                z.cols(),
                &(0..k)
                    .map(|_| {
                        (0..z.cols())
                            .map(|_| rand_poly(&mut g, &r, 1, true))
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let src = FreeComplex::free(&r, n, k);
            let mut comps = BTreeMap::new();
            comps.insert(n, z.mul(&coeffs).unwrap());
            ChainMap::new(&src, &y, comps).unwrap()
        } else {
            ChainMap::identity(&y).scale(&rand_poly(&mut g, &r, 1, false))
        };
        let w = annihilator_power(&f, &x, 8).map_err(|e| format!("case {case}: {e}"))?;
        let xl = x.pow(w.power, &r);
        let zero = ChainMap::zero(f.source(), f.target());
        ensure(
            check_homotopy(&f.scale(&xl), &zero, &w.homotopy).unwrap(),
            || format!("case {case}: witness at power {} does not check", w.power),
        )?;
        if w.power > 0 {
            let prev = f.scale(&x.pow(w.power - 1, &r));
            // a nonzero map on homology rules out any null-homotopy
            let mut nonzero = false;
            for n in prev.window().0..=prev.window().1 {
                if !prev.homology_map(n).unwrap().is_zero_map().unwrap() {
                    nonzero = true;
                    break;
                }
            }
            if nonzero {
                by_homology += 1;
            }
            let sys = HomotopySystem::new(f.source(), f.target()).unwrap();
            ensure(sys.null_homotopy(&prev, None).unwrap().is_none(), || {
                format!("case {case}: a witness exists at power {}", w.power - 1)
            })?;
            by_system += 1;
        }
        *hist.entry(w.power).or_insert(0) += 1;
        case += 1;
    }
    Ok(format!(
        "powers {hist:?}; no witness below the power by the linear system in {by_system} cases, {by_homology} of them also by a nonzero map on homology"
    ))
}

// 7. Constructive maps from Koszul complexes
fn minsupp_instances() -> Vec<(FreeComplex, Arc<PrimeTable>, usize, i64)> {
    let r1 = corpus::ring_x();
    let t1 = Arc::new(
        PrimeTable::parse(
            &r1,
            &[
                ("x", &["x"]),
                ("x-1", &["x - 1"]),
                ("x+1", &["x + 1"]),
                ("x2+1", &["x^2 + 1"]),
            ],
        )
        .unwrap(),
    );
    let r2 = corpus::ring_xy();
    let t2 = Arc::new(corpus::lines_table(&r2).unwrap());
    let res = |r: &PolyRing, gens: &[&str]| corpus::residue(r, gens).unwrap();
    let sum = |r: &PolyRing, parts: &[&FreeComplex]| FreeComplex::direct_sum(r, parts).unwrap();

    let mut objects: Vec<(FreeComplex, &Arc<PrimeTable>)> = Vec::new();
    for gens in [
        "x",
        "x^2",
        "x^3",
        "x^2 - x",
        "x^3 - x^2",
        "x^2 + 1",
        "x^3 + x",
        "x^2 - 1",
        "x^4 - 1",
    ] {
        objects.push((res(&r1, &[gens]), &t1));
    }
    objects.push((res(&r1, &["x^2"]).shift(2), &t1));
    objects.push((
        sum(&r1, &[&res(&r1, &["x"]), &res(&r1, &["x^2 - 1"]).shift(1)]),
        &t1,
    ));
    for gens in [
        &["x", "y"][..],
        &["x^2", "y"],
        &["x^2", "x*y", "y^2"],
        &["x"],
        &["x*y"],
        &["x^2", "x*y"],
        &["x^2 - x*y"],
        &["x - 1", "y^2"],
        &["y", "x^2 - x"],
    ] {
        objects.push((res(&r2, gens), &t2));
    }
    objects.push((res(&r2, &["x - 1", "y"]).shift(2), &t2));
    objects.push((
        sum(&r2, &[&res(&r2, &["x"]), &res(&r2, &["y"]).shift(1)]),
        &t2,
    ));
    objects.push((
        koszul(&KoszulSpec::new(&r2, vec![r2.p("x"), r2.p("y")], vec![2, 1]).unwrap()).unwrap(),
        &t2,
    ));

    let mut out = Vec::new();
    for (m, t) in objects {
        let supp = supp_complex(&m, t).unwrap();
        let all = supp.values().fold(PrimeSet::EMPTY, |a, &s| a.union(s));
        let minimal = t.minimal_in(all);
        for (&n, s) in &supp {
            for p in s.intersection(minimal).iter() {
                out.push((m.clone(), t.clone(), p, n));
            }
        }
    }
    out
}

fn minsupp_maps() -> Outcome {
    let instances = minsupp_instances();
    ensure(instances.len() >= 30, || {
        format!("only {} curated instances", instances.len())
    })?;
    for (k, (m, t, p, n)) in instances.iter().take(30).enumerate() {
        let built = minsupp_map(m, t, *p, *n, 16).map_err(|e| format!("instance {k}: {e}"))?;
        let prime = t.ideal(*p);
        let spec =
            KoszulSpec::new(m.ring(), prime.generators().to_vec(), built.powers.clone()).unwrap();
        let source = koszul(&spec).unwrap().shift(*n);
        ensure(built.map.source() == &source, || {
            format!("instance {k}: source is not Σⁿ K'")
        })?;
        let hn = built.map.homology_map(*n).unwrap();
        ensure(!hn.is_zero_map().unwrap(), || {
            format!("instance {k}: H_n of the map vanishes")
        })?;
        let ann = hn.image_annihilator().unwrap();
        ensure(prime.contains(&ann).unwrap(), || {
            format!(
                "instance {k}: image vanishes after localizing at {}",
                t.name(*p)
            )
        })?;
    }
    Ok(format!("30 of {} curated instances", instances.len()))
}

// 8. Certificates
fn corrupt_map(f: &ChainMap) -> Option<ChainMap> {
    let (&n, m) = f
        .components()
        .iter()
        .find(|(_, m)| m.rows() > 0 && m.cols() > 0)?;
    let mut comps = f.components().clone();
    let mut m = m.clone();
    let v = m.get(0, 0).add(&m.ring().one());
    m.set(0, 0, v);
    comps.insert(n, m);
    ChainMap::unchecked(f.source(), f.target(), comps).ok()
}

fn zero_witness(w: &Witness) -> Witness {
    let f = w.map();
    let z = ChainMap::zero(f.source(), f.target());
    match w {
        Witness::Forward(_) => Witness::Forward(z),
        Witness::Backward(_) => Witness::Backward(z),
    }
}

/// Single corruptions, each of which must be rejected.
fn mutations(c: &Certificate) -> Vec<(String, Certificate)> {
    let mut out = Vec::new();
    for (name, node) in &c.nodes {
        let mut variants: Vec<(&str, Node)> = Vec::new();
        match node {
            Node::Generator {
                complex,
                witness: None,
            } => {
                variants.push((
                    "shifted generator",
                    Node::Generator {
                        complex: complex.shift(1),
                        witness: None,
                    },
                ));
            }
            Node::Generator {
                complex,
                witness: Some((r, w)),
            } => {
                variants.push((
                    "zero witness",
                    Node::Generator {
                        complex: complex.clone(),
                        witness: Some((r.clone(), zero_witness(w))),
                    },
                ));
            }
            Node::Suspend { node, .. } => {
                variants.push((
                    "zero suspension",
                    Node::Suspend {
                        node: node.clone(),
                        shift: 0,
                    },
                ));
                variants.push((
                    "negative suspension",
                    Node::Suspend {
                        node: node.clone(),
                        shift: -1,
                    },
                ));
            }
            Node::Sum { nodes } if !nodes.is_empty() => {
                variants.push((
                    "dropped summand",
                    Node::Sum {
                        nodes: nodes[1..].to_vec(),
                    },
                ));
            }
            Node::Sum { .. } => {}
            Node::Extend {
                x,
                y,
                map,
                cone_witness,
                z,
            } => {
                if let Some(bad) = corrupt_map(map) {
                    variants.push((
                        "map entry",
                        Node::Extend {
                            x: x.clone(),
                            y: y.clone(),
                            map: bad,
                            cone_witness: cone_witness.clone(),
                            z: z.clone(),
                        },
                    ));
                }
                variants.push((
                    "zero cone witness",
                    Node::Extend {
                        x: x.clone(),
                        y: y.clone(),
                        map: map.clone(),
                        cone_witness: zero_witness(cone_witness),
                        z: z.clone(),
                    },
                ));
            }
            Node::Replace {
                node,
                target,
                witness,
            } => {
                variants.push((
                    "zero witness",
                    Node::Replace {
                        node: node.clone(),
                        target: target.clone(),
                        witness: zero_witness(witness),
                    },
                ));
            }
            Node::Retract {
                node,
                target,
                section,
                retraction,
                ..
            } => {
                variants.push((
                    "zero homotopy",
                    Node::Retract {
                        node: node.clone(),
                        target: target.clone(),
                        section: section.clone(),
                        retraction: ChainMap::zero(retraction.source(), retraction.target()),
                        homotopy: nullity_core::Homotopy::zero(target, target),
                    },
                ));
            }
        }
        for (what, v) in variants {
            let mut m = c.clone();
            *m.node_mut(name).unwrap() = v;
            out.push((format!("{name}: {what}"), m));
        }
    }
    out
}

fn accept_and_reject(
    label: &str,
    c: &Certificate,
    e: &FreeComplex,
    mutated: &mut usize,
) -> Result<(), String> {
    let rep = check_certificate(c, e).map_err(|er| er.to_string())?;
    ensure(rep.accepted(), || {
        format!("{label}: rejected: {:?}", rep.rejection)
    })?;
    for (what, m) in mutations(c) {
        let rep = check_certificate(&m, e).map_err(|er| er.to_string())?;
        ensure(!rep.accepted(), || {
            format!("{label}: corruption {what} accepted")
        })?;
        *mutated += 1;
    }
    Ok(())
}

fn certificates() -> Outcome {
    let mut mutated = 0;
    let mut accepted = 0;
    for cur in corpus::curated_certificates().unwrap() {
        accept_and_reject(cur.name, &cur.certificate, &cur.generator, &mut mutated)?;
        accepted += 1;
    }
    let mut g = rng(8);
    let rings = [corpus::ring_x(), corpus::ring_xy()];
    let mut cellular = Vec::new();
    for k in 0..100 {
        let r = &rings[k % 2];
        let m = random_instance(
            &mut g,
            r,
            Shape {
                lo: 0,
                len: 3,
                max_rank: 3,
                max_degree: 2,
                base_changes: 2,
                base_degree: 1,
                graded: false,
            },
        )
        .complex;
        let c = cellular_certificate(&m).map_err(|e| e.to_string())?;
        let unit = FreeComplex::free(r, 0, 1);
        accept_and_reject(&format!("cellular {k}"), &c, &unit, &mut mutated)?;
        accepted += 1;
        cellular.push((k % 2, c));
    }
    // transport along ⊗ N
    for (k, (ri, c)) in cellular.iter().enumerate().take(20) {
        let r = &rings[*ri];
        let n = loop {
            let n = random_instance(
                &mut g,
                r,
                Shape {
                    lo: 0,
                    len: 2,
                    max_rank: 2,
                    max_degree: 1,
                    base_changes: 1,
                    base_degree: 0,
                    graded: false,
                },
            )
            .complex;
            if !n.is_zero() {
                break n;
            }
        };
        let t = tensor_certificate(c, &n).map_err(|e| e.to_string())?;
        let e = FreeComplex::free(r, 0, 1).tensor(&n).unwrap();
        accept_and_reject(&format!("transported cellular {k}"), &t, &e, &mut mutated)?;
        accepted += 1;
    }
    for cur in corpus::curated_certificates().unwrap() {
        let r = cur.generator.ring().clone();
        let n = corpus::residue(&r, &["x"]).unwrap().shift(1);
        let t = tensor_certificate(&cur.certificate, &n).map_err(|e| e.to_string())?;
        let e = cur.generator.tensor(&n).unwrap();
        accept_and_reject(&format!("transported {}", cur.name), &t, &e, &mut mutated)?;
        accepted += 1;
    }
    Ok(format!(
        "{accepted} certificates accepted, {mutated} corruptions rejected"
    ))
}

// 9. Transit corpus
fn transit() -> Outcome {
    let r = corpus::ring_xy();
    let points: Vec<(i64, i64)> = (-1..=2)
        .flat_map(|a| (-1..=2).map(move |b| (a, b)))
        .collect();
    let names: Vec<String> = points.iter().map(|(a, b)| format!("({a},{b})")).collect();
    let gens: Vec<[String; 2]> = points
        .iter()
        .map(|(a, b)| [format!("x - ({a})"), format!("y - ({b})")])
        .collect();
    let entries: Vec<(String, Ideal)> = names
        .iter()
        .zip(&gens)
        .map(|(n, g)| {
            (
                n.clone(),
                Ideal::parse(&r, &[g[0].as_str(), g[1].as_str()]).unwrap(),
            )
        })
        .collect();
    let t = PrimeTable::new(&r, entries).unwrap();
    let mut g = rng(9);
    let (mut pass, mut vacuous) = (0, 0);
    for case in 0..300 {
        let m = random_instance(
            &mut g,
            &r,
            Shape {
                lo: 0,
                len: 3,
                max_rank: 2,
                max_degree: 2,
                base_changes: 1,
                base_degree: 1,
                graded: false,
            },
        )
        .complex;
        let p = g.gen_range(0..t.len());
        let n = g.gen_range(m.lo()..=m.hi());
        let rep = verify_transit(&m, &t, p, n).map_err(|e| e.to_string())?;
        match rep.status {
            Status::Pass => pass += 1,
            Status::Vacuous => vacuous += 1,
            s => return Err(format!("case {case}: {s:?}: {}", rep.detail)),
        }
    }
    Ok(format!(
        "{pass} non-vacuous passes, {vacuous} vacuous, 0 counterexamples"
    ))
}

// 10. φ well-formedness
fn phi_well_formed() -> Outcome {
    let r = corpus::ring_xy();
    let t = Arc::new(corpus::five_table(&r).unwrap());
    let mut g = rng(10);
    let shape = Shape {
        lo: -1,
        len: 3,
        max_rank: 2,
        max_degree: 2,
        base_changes: 1,
        base_degree: 1,
        graded: false,
    };
    for case in 0..200 {
        let k = g.gen_range(1..=3);
        let objects: Vec<FreeComplex> = (0..k)
            .map(|_| random_instance(&mut g, &r, shape).complex)
            .collect();
        let f = phi(&objects, &t).map_err(|e| e.to_string())?;
        if let Some((a, b)) = f.window() {
            for n in a - 1..=b + 1 {
                ensure(t.is_up_closed(f.value(n)), || {
                    format!("case {case}: φ({n}) not up-closed")
                })?;
                ensure(f.value(n).is_subset(f.value(n + 1)), || {
                    format!("case {case}: φ not monotone at {n}")
                })?;
            }
        }
        PerversityFunction::new(&t, f.window().map_or(0, |w| w.0), f.values().to_vec())
            .map_err(|e| format!("case {case}: {e}"))?;
        let mut more = objects.clone();
        more.push(random_instance(&mut g, &r, shape).complex);
        let f2 = phi(&more, &t).map_err(|e| e.to_string())?;
        ensure(f.le(&f2), || {
            format!("case {case}: adding a generator shrank φ")
        })?;
    }
    Ok("200 sets".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("Koszul annihilation", 60, koszul_annihilation),
        ("Koszul support", 10, koszul_support),
        ("classification round trip", 300, round_trip),
        ("homology oracle equivalence", 180, homology_oracles),
        ("cone exactness", 120, cone_exactness),
        ("annihilator power witness", 120, annihilator_powers),
        ("constructive Koszul maps", 60, minsupp_maps),
        ("certificate suite", 120, certificates),
        ("transit corpus", 180, transit),
        ("phi well-formedness", 60, phi_well_formed),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} [{name}] {:.1}s / {limit}s: {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
