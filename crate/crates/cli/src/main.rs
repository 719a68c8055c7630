//! `contraction`: command-line front end to the contraction library.
//!
//! Exit codes: 0 success, 1 condition false (not a member, obstructed lift,
//! failed alignment or self-test), 2 unreadable or malformed input, 3 a
//! precondition of the computation failed, 4 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use contraction::artin::{RingDescriptor, RingElement, RingSpec};
use contraction::battery;
use contraction::contract::{self, CurveModel, LiftOutcome, TowerLift};
use contraction::laurent::random_automorphism;
use contraction::scenario::{DifferentialFile, JetFile, ScenarioFile};
use contraction::singular;
use contraction::tropical::{
    check_central_alignment, is_radially_aligned, lambda, semistable_modification, to_dot, RadialAlignment,
    TropicalCurve, VertexId,
};
use contraction::Error;

const EXIT_FALSE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Largest jet order tried when stabilizing the delta invariant.
const MAX_JET_ORDER: usize = 12;

#[derive(Parser)]
#[command(
    name = "contraction",
    version,
    about = "Residues over artinian rings and genus-one contractions"
)]
struct Cli {
    /// Print machine-readable JSON (sorted keys) instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = battery::DEFAULT_SEED)]
    seed: u64,
    /// Jet order override for scenario commands.
    #[arg(long, global = true)]
    jet_order: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a ring: a bare ring spec or any file with a "ring" field.
    Ring { file: PathBuf },
    /// Residue of a differential file.
    Residue {
        file: PathBuf,
        /// Pull back along this many random automorphisms and compare residues.
        #[arg(long, value_name = "K")]
        check_invariance: Option<usize>,
    },
    /// Radial alignment of a curve, or central alignment around a vertex.
    Align {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<VertexId>,
    },
    /// Semistable modification at the circle through a vertex.
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        vertex: VertexId,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Layer table of the circle through a vertex.
    Layers {
        file: PathBuf,
        #[arg(long)]
        vertex: VertexId,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Whether a jet satisfies the residue condition.
    Contract { scenario: PathBuf, jet: PathBuf },
    /// Lift a jet up the tower of the scenario's ring.
    Lift {
        scenario: PathBuf,
        jet: PathBuf,
        /// Target level; defaults to the top of the tower.
        #[arg(long)]
        to: Option<usize>,
    },
    /// Invariants and class of the contracted singularity.
    Singularity { scenario: PathBuf },
    /// Run the acceptance battery.
    Selftest {
        /// Run only this criterion.
        #[arg(long)]
        only: Option<usize>,
        /// Also check that these scenario files load.
        #[arg(long, value_name = "FILE")]
        scenario: Vec<PathBuf>,
    },
}

/// A finished command: its report and exit status.
struct Outcome {
    report: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(report: Value, text: impl Into<String>) -> Self {
        Self {
            report,
            text: text.into(),
            code: 0,
        }
    }

    fn verdict(holds: bool, report: Value, text: impl Into<String>) -> Self {
        Self {
            report,
            text: text.into(),
            code: if holds { 0 } else { EXIT_FALSE },
        }
    }
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(..) | Failure::Lib(Error::Parse(_)) => EXIT_PARSE,
            Failure::Lib(_) => EXIT_PRECONDITION,
        }
    }

    fn kind(&self) -> &'static str {
        match self.code() {
            EXIT_PARSE => "parse",
            _ => "precondition",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn parse_value(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()).into())
}

fn elem(a: &RingElement) -> Value {
    Value::String(a.to_string())
}

fn load_curve(path: &Path) -> Result<TropicalCurve, Failure> {
    Ok(TropicalCurve::from_json(&read(path)?)?)
}

fn load_model(path: &Path, jet_order: Option<usize>) -> Result<CurveModel, Failure> {
    let mut file = ScenarioFile::parse(&read(path)?)?;
    if let Some(n) = jet_order {
        file.jet_order = n;
    }
    Ok(file.model()?)
}

/// The scenario model at the jet's level, and the jet.
fn load_jet(model: &CurveModel, path: &Path) -> Result<(CurveModel, contract::JetFunction, usize), Failure> {
    let file = JetFile::parse(&read(path)?)?;
    let level = file.level.unwrap_or(model.tower_height());
    if level > model.tower_height() {
        return Err(Error::PreconditionFailed(format!(
            "jet level {level} exceeds the tower height {}",
            model.tower_height()
        ))
        .into());
    }
    let at = model.at_level(level)?;
    let jet = file.jet(&at)?;
    Ok((at, jet, level))
}

fn cmd_ring(file: &Path) -> CmdResult {
    let v = parse_value(&read(file)?)?;
    let spec_value = match v.get("ring") {
        Some(r) => r.clone(),
        None => v,
    };
    let spec: RingSpec = serde_json::from_value(spec_value).map_err(|e| Error::Parse(e.to_string()))?;
    let ring = RingDescriptor::from_spec(&spec)?;
    let field = ring.field();
    let basis: Vec<String> = ring
        .basis()
        .iter()
        .map(|m| RingElement::monomial(&ring, m, field.one()).to_string())
        .collect();
    let tower: Vec<usize> = (0..ring.nilpotency_bound()).map(|n| ring.truncation(n).dim()).collect();
    let report = json!({
        "field": serde_json::to_value(&spec.field).expect("field spec"),
        "vars": ring.vars(),
        "dim": ring.dim(),
        "basis": basis,
        "nilpotency_bound": ring.nilpotency_bound(),
        "tower_dims": tower,
    });
    let text = format!(
        "dim {} over {:?}, basis [{}], m^{} = 0, tower dims {:?}",
        ring.dim(),
        field,
        basis.join(", "),
        ring.nilpotency_bound(),
        tower
    );
    Ok(Outcome::ok(report, text))
}

fn cmd_residue(file: &Path, trials: Option<usize>, seed: u64) -> CmdResult {
    let omega = DifferentialFile::parse(&read(file)?)?.differential()?;
    let res = omega.residue()?;
    let Some(k) = trials else {
        return Ok(Outcome::ok(json!({ "residue": elem(&res) }), format!("residue {res}")));
    };
    let ring = omega.coefficient().ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = true;
    for _ in 0..k {
        let phi = random_automorphism(&ring, &mut rng, 2, 3);
        let pulled = omega.pullback_to(&phi, 0)?;
        agree &= pulled.residue()? == res;
    }
    let text = format!(
        "residue {res}; {} after {k} automorphisms",
        if agree { "invariant" } else { "NOT invariant" }
    );
    Ok(Outcome::verdict(agree, json!({ "agree": agree, "trials": k }), text))
}

fn cmd_align(file: &Path, vertex: Option<VertexId>) -> CmdResult {
    let curve = load_curve(file)?;
    let Some(v) = vertex else {
        return Ok(match is_radially_aligned(&curve)? {
            RadialAlignment::Aligned => Outcome::ok(json!({ "aligned": true }), "radially aligned"),
            RadialAlignment::Incomparable(a, b) => Outcome::verdict(
                false,
                json!({ "aligned": false, "incomparable": [a, b] }),
                format!("not radially aligned: lambda({a}) and lambda({b}) are incomparable"),
            ),
        });
    };
    match check_central_alignment(&curve, v) {
        Ok(rep) => {
            let text = format!(
                "centrally aligned around vertex {v}: {} layers, t = {}",
                rep.layers.len(),
                rep.product
            );
            Ok(Outcome::ok(json!({ "aligned": true, "report": rep }), text))
        }
        Err(Error::NotRadiallyAligned(a, b)) => Ok(Outcome::verdict(
            false,
            json!({ "aligned": false, "incomparable": [a, b] }),
            format!("not radially aligned: lambda({a}) and lambda({b}) are incomparable"),
        )),
        Err(Error::NotStable(u)) => Ok(Outcome::verdict(
            false,
            json!({ "aligned": false, "unstable": u }),
            format!("interior of the circle is not stable at vertex {u}"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_subdivide(file: &Path, vertex: VertexId, dot: Option<&Path>) -> CmdResult {
    let curve = load_curve(file)?;
    let lam = lambda(&curve)?;
    let delta = lam
        .values
        .get(&vertex)
        .ok_or_else(|| Error::InvalidCurve(format!("no vertex {vertex}")))?;
    let sub = semistable_modification(&curve, delta)?;
    if let Some(path) = dot {
        let lam = lambda(&sub.curve)?;
        write(path, &to_dot(&sub.curve, Some(&lam), Some(&sub.provenance)))?;
    }
    let text = format!("{} vertices inserted", sub.inserted());
    Ok(Outcome::ok(
        json!({ "inserted": sub.inserted(), "subdivision": sub }),
        text,
    ))
}

fn cmd_layers(file: &Path, vertex: VertexId, dot: Option<&Path>) -> CmdResult {
    let curve = load_curve(file)?;
    let rep = check_central_alignment(&curve, vertex)?;
    if let Some(path) = dot {
        let lam = rep.modified_lambda()?;
        write(
            path,
            &to_dot(&rep.modification.curve, Some(&lam), Some(&rep.modification.provenance)),
        )?;
    }
    let mut text = String::new();
    for l in &rep.layers {
        let names: Vec<String> = l
            .vertices
            .iter()
            .map(
                |&v| match rep.modification.curve.vertex(v).and_then(|x| x.name.clone()) {
                    Some(n) => n,
                    None => v.to_string(),
                },
            )
            .collect();
        text.push_str(&format!(
            "L{} at {}: [{}]{}\n",
            l.index,
            l.level,
            names.join(", "),
            l.parameter.as_ref().map(|p| format!(" via {p}")).unwrap_or_default()
        ));
    }
    text.push_str(&format!("t = {}", rep.product));
    let layers: Vec<Value> = rep
        .layers
        .iter()
        .map(|l| serde_json::to_value(l).expect("layer"))
        .collect();
    Ok(Outcome::ok(
        json!({
            "layers": layers,
            "parameters": rep.parameters,
            "product": rep.product,
            "outer_nodes": rep.outer_nodes,
            "trivial": rep.trivial,
        }),
        text,
    ))
}

fn cmd_contract(scenario: &Path, jet: &Path, jet_order: Option<usize>) -> CmdResult {
    let top = load_model(scenario, jet_order)?;
    let (model, f, _) = load_jet(&top, jet)?;
    let res = contract::res_m(&model, &f)?;
    if res.is_zero() {
        return Ok(Outcome::ok(json!({ "member": true }), "member"));
    }
    let report = json!({
        "member": false,
        "payload": elem(&res.payload),
        "twist": res.twist,
    });
    Ok(Outcome::verdict(
        false,
        report,
        format!("not a member: residue payload {}", res.payload),
    ))
}

fn cmd_lift(scenario: &Path, jet: &Path, to: Option<usize>, jet_order: Option<usize>) -> CmdResult {
    let top = load_model(scenario, jet_order)?;
    let (_, f, from) = load_jet(&top, jet)?;
    let to = to.unwrap_or(top.tower_height());
    match contract::lift_through(&top, &f, from, to)? {
        TowerLift::Lifted(jets) => {
            let model = top.at_level(to)?;
            let last = jets.last().expect("nonempty");
            let file = JetFile::from_jet(&model, last, Some(to));
            Ok(Outcome::ok(
                json!({ "lifted": true, "level": to, "jet": file }),
                format!("lifted from level {from} to level {to}"),
            ))
        }
        TowerLift::Obstructed { level, outcome } => {
            let LiftOutcome::Obstruction { residue, core_residue } = outcome else {
                return Err(Error::PreconditionFailed("lift stopped without an obstruction".into()).into());
            };
            let report = json!({
                "lifted": false,
                "level": level,
                "payload": elem(&residue.payload),
                "twist": residue.twist,
                "core_residue": elem(&core_residue),
            });
            let text = format!("obstructed at level {level}: residue payload {}", residue.payload);
            Ok(Outcome::verdict(false, report, text))
        }
    }
}

fn cmd_singularity(scenario: &Path, jet_order: Option<usize>) -> CmdResult {
    let model = load_model(scenario, None)?.at_level(0)?;
    let start = jet_order.unwrap_or(2);
    let p = contract::contraction_ring(&model, start)?.stabilize(jet_order.unwrap_or(MAX_JET_ORDER).max(start))?;
    let rep = singular::report(&p)?;
    let text = format!(
        "{} branches, delta {}, genus {}: {} (stable at jet order {})",
        rep.m, rep.delta, rep.genus, rep.class, rep.jet_order
    );
    Ok(Outcome::ok(serde_json::to_value(&rep).expect("report"), text))
}

fn cmd_selftest(only: Option<usize>, scenarios: &[PathBuf], seed: u64) -> CmdResult {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for path in scenarios {
        let loaded = load_model(path, None);
        let error = loaded.as_ref().err().map(|e| e.to_string());
        ok &= error.is_none();
        text.push_str(&match &error {
            None => format!("[PASS] scenario {}\n", path.display()),
            Some(e) => format!("[FAIL] scenario {}: {e}\n", path.display()),
        });
        rows.push(json!({ "scenario": path.display().to_string(), "passed": error.is_none(), "failure": error }));
    }
    let reports = match only {
        Some(id) => {
            vec![battery::run(id, seed).ok_or_else(|| Error::PreconditionFailed(format!("no criterion {id}")))?]
        }
        None => battery::run_all(seed),
    };
    for r in &reports {
        ok &= r.passed();
        text.push_str(&format!("{r}\n"));
        rows.push(json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed(),
            "checks": r.checks,
            "seconds": r.elapsed.as_secs_f64(),
            "limit": r.limit.as_secs(),
            "failure": r.failure,
        }));
    }
    let passed = rows.iter().filter(|r| r["passed"] == true).count();
    text.push_str(&format!("{passed}/{} passed", rows.len()));
    Ok(Outcome::verdict(
        ok,
        json!({ "passed": ok, "seed": seed, "results": rows }),
        text,
    ))
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Ring { file } => cmd_ring(file),
        Command::Residue { file, check_invariance } => cmd_residue(file, *check_invariance, cli.seed),
        Command::Align { file, vertex } => cmd_align(file, *vertex),
        Command::Subdivide { file, vertex, dot } => cmd_subdivide(file, *vertex, dot.as_deref()),
        Command::Layers { file, vertex, dot } => cmd_layers(file, *vertex, dot.as_deref()),
        Command::Contract { scenario, jet } => cmd_contract(scenario, jet, cli.jet_order),
        Command::Lift { scenario, jet, to } => cmd_lift(scenario, jet, *to, cli.jet_order),
        Command::Singularity { scenario } => cmd_singularity(scenario, cli.jet_order),
        Command::Selftest { only, scenario } => cmd_selftest(*only, scenario, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match std::panic::catch_unwind(|| dispatch(&cli)) {
        Ok(r) => r,
        Err(_) => return ExitCode::from(EXIT_INTERNAL),
    };
    match result {
        Ok(out) => {
            if json {
                println!("{}", out.report);
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
