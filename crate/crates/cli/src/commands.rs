//! Subcommands and their JSON reports.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nullity_core::certify::tensor_certificate;
use nullity_core::complex::cone;
use nullity_core::koszul::{
    annihilator_power, check_annihilation, koszul, minsupp_map, KoszulSpec, DEFAULT_POWER_BUDGET,
};
use nullity_core::lemmas::{
    verify_crucial, verify_genkilling, verify_kil_ringdim, verify_killkp, verify_localcase,
    verify_thereismap, verify_transit, LemmaReport, Status,
};
use nullity_core::perversity::{roundtrip_check, GeneratorBuilder};
use nullity_core::{
    cellular_certificate, check_certificate, phi, supp_complex, Certificate, ChainMap,
    Error as CoreError, FreeComplex, PolyRing, PresentedModule, PrimeTable, RingMatrix,
};

use crate::workbench::{LoadError, LoadErrorKind, Workbench};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "nullity",
    version,
    about = "Exact workbench for Koszul complexes, supports, perversity functions and killing certificates"
)]
pub struct Cli {
    /// Workbench file.
    #[arg(long, short, global = true)]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load the file and report its contents, prime orders and dimensions.
    Validate,
    /// Print the canonical form of the file.
    Format,
    /// Homology modules of a complex.
    Homology {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: Option<i64>,
    },
    /// A Koszul complex, optionally checking that it kills the homology of `M ⊗ K`.
    Koszul {
        #[command(flatten)]
        spec: SpecArgs,
        /// Check annihilation of `H(M ⊗ K)` for this complex.
        #[arg(long)]
        check: Option<String>,
    },
    /// Tensor product of two complexes.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Mapping cone of a chain map.
    Cone {
        #[arg(long)]
        map: String,
    },
    /// Free replacement of `τ≥n C` with its comparison map.
    Truncate {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: i64,
    },
    /// Homology supports per degree.
    Supp {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        table: String,
    },
    /// The perversity function of a set of complexes.
    Phi {
        #[arg(long)]
        table: String,
        #[arg(long, value_delimiter = ',', required = true)]
        complexes: Vec<String>,
    },
    /// The canonical generator of a perversity function.
    BuildS {
        #[arg(long)]
        pf: String,
    },
    /// Checks that the perversity function of the generator is the function itself.
    Roundtrip {
        #[arg(long)]
        pf: String,
    },
    /// Checks a certificate against a generator.
    CheckCert {
        #[arg(long)]
        cert: String,
        #[arg(long)]
        generator: String,
    },
    /// The cellular certificate of a connective complex from `R`.
    CellularCert {
        #[arg(long)]
        complex: String,
        /// Transport the certificate along `- ⊗ N`.
        #[arg(long)]
        tensor: Option<String>,
        /// Write a workbench file holding the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance verifiers.
    Verify {
        #[command(subcommand)]
        lemma: Lemma,
    },
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    /// Generators, comma separated.
    #[arg(long, value_delimiter = ',')]
    gens: Vec<String>,
    /// Take the generators of a table prime.
    #[arg(long, requires = "prime")]
    table: Option<String>,
    #[arg(long, requires = "table")]
    prime: Option<String>,
    #[arg(long, value_delimiter = ',')]
    powers: Vec<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    #[arg(long)]
    complex: String,
    #[arg(long)]
    table: String,
    #[arg(long)]
    prime: String,
    #[arg(long)]
    degree: i64,
}

#[derive(Subcommand, Debug)]
pub enum Lemma {
    /// Vanishing of `H_n(M ⊗ R/m)` near `n` forces `H_n(M ⊗ K(m)) = 0` and `H_n(M)_m = 0`.
    Transit(Instance),
    /// Some `p ∈ Supp H_n(M)` survives in `H_n(M ⊗ K(p))`.
    Localcase {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        table: String,
        #[arg(long)]
        degree: i64,
    },
    /// Nonvanishing of some `H_{n-i}(M ⊗ R/p)` at a maximal `p ∈ Supp H_n(M)`.
    Killkp(Instance),
    /// A map `τ≥n M -> Σⁿ R/p` whose `H_n` has kernel and cokernel vanishing at `p`.
    Thereismap(Instance),
    /// A certificate from the supports generator to `M`.
    Genkilling {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        table: String,
        #[arg(long)]
        cert: String,
    },
    /// A certificate from the residue fields over `V(p)` to `Σ^{dim R/q} R/q`.
    Kil {
        #[arg(long)]
        table: String,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        cert: String,
    },
    /// A certificate from `M` to `Σⁿ R/p`.
    Crucial {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        cert: String,
    },
    /// Every `x_j^{n_j}` kills `H(M ⊗ K)`.
    Annihilation {
        #[arg(long)]
        complex: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Least `l` with `x^l f` null-homotopic, with the homotopy.
    Homologyann {
        #[arg(long)]
        map: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = DEFAULT_POWER_BUDGET)]
        budget: u32,
    },
    /// A map `Σⁿ K'(p) -> M` nonzero on `H_n` at `p`.
    Minsupp {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = DEFAULT_POWER_BUDGET)]
        budget: u32,
    },
}

/// A report and the exit code it maps to.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
    /// Text printed instead of the report, for `format`.
    pub text: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Load(LoadError),
    Core(CoreError),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Failure {
        Failure::Load(e)
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn report(&self, command: &str) -> Value {
        let error = match self {
            Failure::Usage(m) => json!({ "kind": "usage", "message": m }),
            Failure::Load(e) => {
                let mut v = json!({ "kind": e.kind.as_str(), "message": e.message });
                if let Some((l, c)) = e.location {
                    v["line"] = json!(l);
                    v["column"] = json!(c);
                }
                v
            }
            Failure::Core(e) => json!({ "kind": "computation", "message": e.to_string() }),
        };
        let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "status": "error", "error": error });
        if let Some(lemma) = command.strip_prefix("verify ") {
            v["command"] = json!("verify");
            v["lemma"] = json!(lemma);
        }
        v
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Load(e) => e.to_string(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Run = Result<Outcome, Failure>;

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::Format => "format".into(),
            Command::Homology { .. } => "homology".into(),
            Command::Koszul { .. } => "koszul".into(),
            Command::Tensor { .. } => "tensor".into(),
            Command::Cone { .. } => "cone".into(),
            Command::Truncate { .. } => "truncate".into(),
            Command::Supp { .. } => "supp".into(),
            Command::Phi { .. } => "phi".into(),
            Command::BuildS { .. } => "build-s".into(),
            Command::Roundtrip { .. } => "roundtrip".into(),
            Command::CheckCert { .. } => "check-cert".into(),
            Command::CellularCert { .. } => "cellular-cert".into(),
            Command::Verify { lemma } => format!("verify {}", lemma.name()),
        }
    }
}

impl Lemma {
    fn name(&self) -> &'static str {
        match self {
            Lemma::Transit(_) => "transit",
            Lemma::Localcase { .. } => "localcase",
            Lemma::Killkp(_) => "killkp",
            Lemma::Thereismap(_) => "thereismap",
            Lemma::Genkilling { .. } => "genkilling",
            Lemma::Kil { .. } => "kil",
            Lemma::Crucial { .. } => "crucial",
            Lemma::Annihilation { .. } => "annihilation",
            Lemma::Homologyann { .. } => "homologyann",
            Lemma::Minsupp { .. } => "minsupp",
        }
    }
}

fn report(command: &str, status: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "status": status });
    if let Value::Object(m) = body {
        for (k, x) in m {
            v[k] = x;
        }
    }
    v
}

fn computed(command: &str, body: Value) -> Run {
    Ok(Outcome {
        report: report(command, "computed", body),
        code: 0,
        text: None,
    })
}

fn checked(command: &str, passed: bool, body: Value) -> Run {
    Ok(Outcome {
        report: report(command, if passed { "pass" } else { "fail" }, body),
        code: if passed { 0 } else { 1 },
        text: None,
    })
}

pub fn status_code(s: Status) -> i32 {
    if s.is_ok() {
        0
    } else {
        1
    }
}

fn lemma_outcome(r: LemmaReport) -> Run {
    let code = status_code(r.status);
    let status = serde_json::to_value(r.status).expect("status serializes");
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "lemma": r.lemma,
        "instance": r.instance,
        "status": status,
        "detail": r.detail,
    });
    if !r.witness.is_empty() {
        v["witness"] = json!(r.witness);
    }
    Ok(Outcome {
        report: v,
        code,
        text: None,
    })
}

fn matrix_json(m: &RingMatrix) -> Value {
    json!(m.to_strings())
}

pub fn complex_json(c: &FreeComplex) -> Value {
    let d: BTreeMap<String, Value> = (c.lo() + 1..=c.hi())
        .map(|n| (n.to_string(), matrix_json(&c.d(n))))
        .collect();
    json!({ "lo": c.lo(), "hi": c.hi(), "ranks": c.ranks(), "d": d })
}

fn map_json(f: &ChainMap) -> Value {
    let comps: BTreeMap<String, Value> = f
        .components()
        .iter()
        .map(|(n, m)| (n.to_string(), matrix_json(m)))
        .collect();
    json!({ "source": complex_json(f.source()), "target": complex_json(f.target()), "components": comps })
}

fn module_json(r: &PolyRing, m: &PresentedModule) -> Result<Value, CoreError> {
    let ann = m.annihilator()?;
    Ok(json!({
        "generators": m.num_generators(),
        "relations": matrix_json(m.relations()),
        "zero": m.is_zero_module()?,
        "annihilator": ann.groebner()?.iter().map(|g| r.format(g)).collect::<Vec<_>>(),
    }))
}

fn spec_from(wb: &Workbench, a: &SpecArgs) -> Result<KoszulSpec, Failure> {
    let gens = match (&a.table, &a.prime, a.gens.is_empty()) {
        (Some(t), Some(p), true) => {
            let table = wb.table(t)?;
            let i = prime_index(table, p)?;
            table.ideal(i).generators().to_vec()
        }
        (None, None, false) => a
            .gens
            .iter()
            .map(|g| wb.ring.parse(g))
            .collect::<Result<Vec<_>, _>>()?,
        _ => {
            return Err(Failure::Usage(
                "give either --gens or --table with --prime".into(),
            ))
        }
    };
    let powers = if a.powers.is_empty() {
        vec![1; gens.len()]
    } else {
        a.powers.clone()
    };
    Ok(KoszulSpec::new(&wb.ring, gens, powers)?)
}

fn prime_index(table: &PrimeTable, name: &str) -> Result<usize, Failure> {
    table.index_of(name).ok_or_else(|| {
        Failure::Load(LoadError {
            kind: LoadErrorKind::UnresolvedReference,
            message: format!("no prime named {name:?}"),
            location: None,
        })
    })
}

fn cert_json(c: &Certificate) -> Value {
    let kinds: BTreeMap<String, &str> = c
        .nodes
        .iter()
        .map(|(n, node)| (n.clone(), node.kind()))
        .collect();
    json!({ "root": c.root, "nodes": kinds })
}

pub fn execute(cli: &Cli, wb: Option<&Workbench>) -> Run {
    let name = cli.command.name();
    let wb = wb.ok_or_else(|| Failure::Usage("--file is required".into()))?;
    let r = &wb.ring;
    match &cli.command {
        Command::Validate => {
            let tables: BTreeMap<&String, Value> = wb
                .tables
                .iter()
                .map(|(n, t)| {
                    let primes: Vec<Value> = (0..t.len())
                        .map(|i| {
                            json!({
                                "name": t.name(i),
                                "generators": t.ideal(i).generators().iter().map(|g| r.format(g)).collect::<Vec<_>>(),
                                "dim": t.dim(i),
                                "maximal": t.is_maximal(i),
                                "contained_in": t.format_set(t.v_of(i)),
                            })
                        })
                        .collect();
                    (n, json!(primes))
                })
                .collect();
            let windows: BTreeMap<&String, Value> = wb
                .complexes
                .iter()
                .map(|(n, c)| (n, json!({ "lo": c.lo(), "ranks": c.ranks() })))
                .collect();
            computed(
                "validate",
                json!({
                    "ring": r.to_string(),
                    "tables": tables,
                    "modules": wb.modules.keys().collect::<Vec<_>>(),
                    "complexes": windows,
                    "maps": wb.maps.keys().collect::<Vec<_>>(),
                    "homotopies": wb.homotopies.keys().collect::<Vec<_>>(),
                    "perversity": wb.perversity.keys().collect::<Vec<_>>(),
                    "certificates": wb.certificates.keys().collect::<Vec<_>>(),
                }),
            )
        }
        Command::Format => Ok(Outcome {
            report: report("format", "computed", json!({})),
            code: 0,
            text: Some(wb.to_toml()),
        }),
        Command::Homology { complex, degree } => {
            let c = wb.complex(complex)?;
            let degrees: Vec<i64> = match degree {
                Some(n) => vec![*n],
                None => (c.lo()..=c.hi()).collect(),
            };
            let mut out = Vec::new();
            for n in degrees {
                let mut v = module_json(r, &c.homology(n)?)?;
                v["degree"] = json!(n);
                out.push(v);
            }
            computed(&name, json!({ "complex": complex, "homology": out }))
        }
        Command::Koszul { spec, check } => {
            let spec = spec_from(wb, spec)?;
            let k = koszul(&spec)?;
            let body = json!({
                "generators": spec.generators().iter().map(|g| r.format(g)).collect::<Vec<_>>(),
                "powers": spec.powers(),
                "complex": complex_json(&k),
            });
            match check {
                None => computed(&name, body),
                Some(m) => {
                    let rep = check_annihilation(wb.complex(m)?, &spec)?;
                    let mut body = body;
                    body["annihilation"] = json!(rep);
                    checked(&name, rep.passed, body)
                }
            }
        }
        Command::Tensor { left, right } => {
            let t = wb.complex(left)?.tensor(wb.complex(right)?)?;
            computed(&name, json!({ "complex": complex_json(&t) }))
        }
        Command::Cone { map } => {
            let f = wb.map(map)?;
            if let Some(n) = f.first_noncommuting_degree()? {
                return Err(Failure::Core(CoreError::InvalidMap(format!(
                    "map {map}: d f ≠ f d in degree {n}"
                ))));
            }
            computed(&name, json!({ "complex": complex_json(&cone(f)?) }))
        }
        Command::Truncate { complex, degree } => {
            let (t, eps) = wb.complex(complex)?.truncate_ge(*degree)?;
            computed(
                &name,
                json!({ "complex": complex_json(&t), "comparison": map_json(&eps) }),
            )
        }
        Command::Supp { complex, table } => {
            let t = wb.table(table)?;
            let supp = supp_complex(wb.complex(complex)?, t)?;
            let degrees: BTreeMap<String, Vec<String>> = supp
                .iter()
                .map(|(n, s)| (n.to_string(), t.format_set(*s)))
                .collect();
            computed(
                &name,
                json!({ "complex": complex, "table": table, "support": degrees }),
            )
        }
        Command::Phi { table, complexes } => {
            let t = wb.table(table)?;
            let objects = complexes
                .iter()
                .map(|c| wb.complex(c).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let f = phi(&objects, t)?;
            computed(&name, json!({ "perversity": f.to_serial(table) }))
        }
        Command::BuildS { pf } => {
            let (table, f) = wb.perversity_function(pf)?;
            let g = GeneratorBuilder::new(f.table()).build(f)?;
            let summands: Vec<Value> = g
                .summands
                .iter()
                .map(|(n, p)| json!({ "degree": n, "prime": f.table().name(*p) }))
                .collect();
            computed(
                &name,
                json!({
                    "table": table,
                    "summands": summands,
                    "tail_omitted": g.tail_omitted,
                    "complex": complex_json(&g.complex),
                }),
            )
        }
        Command::Roundtrip { pf } => {
            let (_, f) = wb.perversity_function(pf)?;
            let rep = roundtrip_check(f)?;
            checked(
                &name,
                rep.passed,
                json!({ "function": pf, "roundtrip": rep }),
            )
        }
        Command::CheckCert { cert, generator } => {
            let c = wb.certificate(cert)?;
            let e = wb.complex(generator)?;
            let rep = check_certificate(c, e)?;
            let mut body =
                json!({ "certificate": cert, "generator": generator, "admitted": rep.admitted });
            if let Some(rej) = &rep.rejection {
                body["rejection"] = json!(rej);
            }
            checked(&name, rep.accepted(), body)
        }
        Command::CellularCert {
            complex,
            tensor,
            out,
        } => {
            let m = wb.complex(complex)?;
            let mut c = cellular_certificate(m)?;
            let mut generator = FreeComplex::free(r, 0, 1);
            if let Some(n) = tensor {
                let n = wb.complex(n)?;
                c = tensor_certificate(&c, n)?;
                generator = generator.tensor(n)?;
            }
            let rep = check_certificate(&c, &generator)?;
            let mut body = json!({ "complex": complex, "certificate": cert_json(&c) });
            if let Some(path) = out {
                let mut file = Workbench::new(r);
                file.intern_complex("generator", &generator);
                file.intern_complex(complex, m);
                file.certificates.insert("cellular".into(), c.clone());
                std::fs::write(path, file.to_toml())
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                body["written"] = json!(path.display().to_string());
            }
            if let Some(rej) = &rep.rejection {
                body["rejection"] = json!(rej);
            }
            checked(&name, rep.accepted(), body)
        }
        Command::Verify { lemma } => verify(wb, lemma),
    }
}

fn instance<'a>(
    wb: &'a Workbench,
    i: &Instance,
) -> Result<(&'a FreeComplex, &'a Arc<PrimeTable>, usize), Failure> {
    let t = wb.table(&i.table)?;
    Ok((wb.complex(&i.complex)?, t, prime_index(t, &i.prime)?))
}

fn precondition(lemma: &str, instance: String, e: CoreError) -> Run {
    match e {
        CoreError::Precondition(msg) => lemma_outcome(LemmaReport {
            lemma: lemma.into(),
            instance,
            status: Status::PreconditionFailed,
            detail: msg,
            witness: BTreeMap::new(),
        }),
        e => Err(Failure::Core(e)),
    }
}

fn verify(wb: &Workbench, lemma: &Lemma) -> Run {
    let r = &wb.ring;
    match lemma {
        Lemma::Transit(i) => {
            let (m, t, p) = instance(wb, i)?;
            match verify_transit(m, t, p, i.degree) {
                Ok(rep) => lemma_outcome(rep),
                Err(e) => precondition("transit", format!("m = {}, n = {}", i.prime, i.degree), e),
            }
        }
        Lemma::Localcase {
            complex,
            table,
            degree,
        } => lemma_outcome(verify_localcase(
            wb.complex(complex)?,
            *degree,
            wb.table(table)?,
        )?),
        Lemma::Killkp(i) => {
            let (m, t, p) = instance(wb, i)?;
            lemma_outcome(verify_killkp(m, t, p, i.degree)?)
        }
        Lemma::Thereismap(i) => {
            let (m, t, p) = instance(wb, i)?;
            lemma_outcome(verify_thereismap(m, t, p, i.degree)?)
        }
        Lemma::Genkilling {
            complex,
            table,
            cert,
        } => lemma_outcome(verify_genkilling(
            wb.complex(complex)?,
            wb.table(table)?,
            wb.certificate(cert)?,
        )?),
        Lemma::Kil {
            table,
            prime,
            q,
            cert,
        } => {
            let t = wb.table(table)?;
            let (p, q) = (prime_index(t, prime)?, prime_index(t, q)?);
            lemma_outcome(verify_kil_ringdim(p, q, t, wb.certificate(cert)?)?)
        }
        Lemma::Crucial { instance: i, cert } => {
            let (m, t, p) = instance(wb, i)?;
            lemma_outcome(verify_crucial(m, t, p, i.degree, wb.certificate(cert)?)?)
        }
        Lemma::Annihilation { complex, spec } => {
            let spec = spec_from(wb, spec)?;
            let rep = check_annihilation(wb.complex(complex)?, &spec)?;
            let mut out = LemmaReport {
                lemma: "annihilation".into(),
                instance: format!(
                    "K({})",
                    spec.generators()
                        .iter()
                        .map(|g| r.format(g))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                status: if rep.passed {
                    Status::Pass
                } else {
                    Status::Fail
                },
                detail: format!("{} degrees checked", rep.degrees.len()),
                witness: BTreeMap::new(),
            };
            if let Some(d) = rep.degrees.iter().find(|d| d.killed.iter().any(|k| !k)) {
                out.witness.insert("degree".into(), d.degree.to_string());
            }
            lemma_outcome(out)
        }
        Lemma::Homologyann {
            map,
            element,
            budget,
        } => {
            let f = wb.map(map)?;
            let x = r.parse(element)?;
            let instance = format!("f = {map}, x = {element}");
            match annihilator_power(f, &x, *budget) {
                Ok(w) => {
                    let mut witness = BTreeMap::new();
                    witness.insert("power".to_string(), w.power.to_string());
                    witness.insert("induction_bound".to_string(), w.induction_bound.to_string());
                    lemma_outcome(LemmaReport {
                        lemma: "homologyann".into(),
                        instance,
                        status: Status::Pass,
                        detail: format!(
                            "x^{} f is null-homotopic and no smaller power is",
                            w.power
                        ),
                        witness,
                    })
                }
                Err(e) => precondition("homologyann", instance, e),
            }
        }
        Lemma::Minsupp {
            instance: i,
            budget,
        } => {
            let (m, t, p) = instance(wb, i)?;
            let inst = format!("p = {}, n = {}", i.prime, i.degree);
            match minsupp_map(m, t, p, i.degree, *budget) {
                Ok(built) => {
                    let mut witness = BTreeMap::new();
                    witness.insert(
                        "powers".to_string(),
                        built
                            .powers
                            .iter()
                            .map(|k| k.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    witness.insert("multiplier".to_string(), r.format(&built.multiplier));
                    witness.insert("cycle".to_string(), built.cycle_index.to_string());
                    lemma_outcome(LemmaReport {
                        lemma: "minsupp".into(),
                        instance: inst,
                        status: if built.postcondition {
                            Status::Pass
                        } else {
                            Status::Fail
                        },
                        detail: "H_n of the map is nonzero with image supported at p".into(),
                        witness,
                    })
                }
                Err(e) => precondition("minsupp", inst, e),
            }
        }
    }
}

/// Parses arguments, loads the file and runs; never panics on bad input.
pub fn run<I, T>(args: I) -> (Option<String>, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (None, e.to_string(), code);
        }
    };
    let name = cli.command.name();
    let loaded = match &cli.file {
        None => None,
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match Workbench::parse(&text) {
                Ok(wb) => Some(wb),
                Err(e) => {
                    let f = Failure::Load(e);
                    return (Some(pretty(&f.report(&name))), f.message(), 2);
                }
            },
            Err(e) => {
                let f = Failure::Usage(format!("cannot read {}: {e}", path.display()));
                return (Some(pretty(&f.report(&name))), f.message(), 2);
            }
        },
    };
    match execute(&cli, loaded.as_ref()) {
        Ok(o) => (
            Some(o.text.unwrap_or_else(|| pretty(&o.report))),
            String::new(),
            o.code,
        ),
        Err(f) => (Some(pretty(&f.report(&name))), f.message(), 2),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}
