//! Command-line front end.
//!
//! Every subcommand prints one line per check and can write a JSON
//! [`RunReport`] (`--report`). Exit codes: 0 when every check passes, 1 when
//! a violation is found, 2 for usage and input errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catalog::{
    self, group_algebra_support_map, group_powerset_quantale, matrix_support_map,
    omega_support_map, rel_quantale, CatalogError, FiniteGroupoid, SupportMap,
};
use crate::format::{
    lattice_from_doc, map_from_doc, map_to_doc, quantale_from_doc, quantale_to_doc,
    write_json, FormatError, LatticeDoc, MapDoc, QuantaleDoc, RelationDoc,
};
use crate::freeprod::{
    ContextError, PullbackContext, Side, Word, DEFAULT_TRUNCATION,
};
use crate::nucleus::{nucleus_from_relation, quotient, RelationPresentation};
use crate::openness::{
    check_fr1, check_fr1_right, check_fr2, check_locale_meet_lemma, check_semiopen, check_wos,
    fr1_holds, fr1_right_holds, fr2_holds, OpennessError, SemiopenError,
};
use crate::quantale::{
    check_laws_sampled, hom_fails_at, is_surjective, validate_hom, Axiom, CheckConfig,
    EffectiveQuantale, FiniteInvQuantale, FiniteMap, HomLaw, QuantaleMap, Surjectivity,
};
use crate::suplattice::FiniteSupLattice;
use crate::tensor::{is_order_iso, swap_iso, unit_iso, TensorLattice};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "quantic", version, about = "Checks Frobenius conditions and pullback stability for maps of involutive quantales")]
pub struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a JSON run report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate lattice, quantale, map or relation files.
    Validate { paths: Vec<PathBuf> },
    /// Run semiopenness, FR1, FR2 and related checks on a map.
    CheckMap(CheckMapArgs),
    /// Quotient a quantale by the nucleus generated by a relation.
    Quotient {
        quantale: PathBuf,
        relation: PathBuf,
        /// Where to write the quotient quantale (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor product of lattices: element count and isomorphism checks.
    Tensor {
        /// Lattice files.
        lattices: Vec<PathBuf>,
        /// Built-in factors: omega, chain:N, powerset:N, m3, n5.
        #[arg(long)]
        builtin: Vec<String>,
    },
    /// Verify the pullback equations for `p: Q → X` along `f: Y → X`.
    PullbackVerify {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Flank letter budget for relation instances.
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
        /// Skip the hypothesis check on `p` (negative controls).
        #[arg(long)]
        unchecked: bool,
        /// Number of unit-chain traces kept in the report.
        #[arg(long, default_value_t = 32)]
        trace_limit: usize,
    },
    /// Materialize a catalog example or run its property suite.
    Example {
        /// rel, group, omega-support, locale, group-algebra-finite,
        /// regular-z2, rel-diagonal, matrix-max, group-algebra.
        name: String,
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay the witnesses recorded in a run report.
    ReportVerify { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct CheckMapArgs {
    /// Map file.
    pub map: Option<PathBuf>,
    /// Built-in map instead of a file, e.g. matrix-support:2,
    /// group-algebra:s3, omega-support:z2, discrete-to-point.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub semiopen: bool,
    #[arg(long)]
    pub fr1: bool,
    #[arg(long)]
    pub fr2: bool,
    #[arg(long)]
    pub surjective: bool,
    /// Unit criterion for surjectivity of weakly open maps.
    #[arg(long)]
    pub wos: bool,
    /// FR2 forces binary meets to be preserved (locales only).
    #[arg(long)]
    pub locale_meet: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Openness(#[from] OpennessError),
    #[error(transparent)]
    Context(#[from] ContextError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Data that makes a failed check replayable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A quantale law fails; `part` is "source" or "target" for map files.
    Law {
        input: usize,
        part: Option<String>,
        axiom: Axiom,
        elements: Vec<usize>,
    },
    Hom {
        input: usize,
        law: HomLaw,
        elements: Vec<Value>,
    },
    Adjunction { input: usize, a: Value, x: Value },
    Fr1 { input: usize, a: Value, x: Value },
    Fr1Right { input: usize, a: Value, x: Value },
    Fr2 { input: usize, a: Value, x: Value, b: Value },
    NotSurjective { input: usize, elements: Vec<Value> },
    LocaleMeet { input: usize, a: Value, b: Value },
    HRespect {
        left: Word,
        right: Word,
        left_h: usize,
        right_h: usize,
    },
    UnitChain { word: Word },
    BeckChevalley { a: usize },
    OneSided { word: Word, y: usize, side: Side },
    Shape { u: Word, y: usize, v: Word },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witness: None,
            coverage: None,
            note: None,
        }
    }

    fn witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    fn coverage(mut self, c: impl Serialize) -> Self {
        self.coverage = Some(serde_json::to_value(c).expect("serializable"));
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    fn skipped(name: impl Into<String>, why: &str) -> Self {
        CheckRecord {
            verdict: Verdict::Skipped,
            ..CheckRecord::new(name, true).note(why)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRef {
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
}

/// Machine-readable result of one invocation. Everything except
/// `elapsed_ms` is a function of the inputs and the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputRef>,
    pub outputs: Vec<InputRef>,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub details: Value,
    pub elapsed_ms: u64,
}

impl RunReport {
    fn new(command: &str, seed: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            details: Value::Null,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn file_input(role: &str, path: &Path) -> Result<(InputRef, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok((
        InputRef {
            role: role.to_string(),
            path: Some(path.display().to_string()),
            sha256: Some(sha256_hex(&bytes)),
            builtin: None,
        },
        bytes,
    ))
}

fn parse<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, CliError> {
    Ok(serde_json::from_slice(bytes).map_err(FormatError::from)?)
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn from_value<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("bad witness element: {e}")))
}

/// Parses the arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(report) => {
            let code = i32::from(!report.passed());
            if let Some(path) = &cli.report {
                if let Err(e) = write_json(path, &report) {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn std::io::Write) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let cfg = CheckConfig::with_seed(cli.seed);
    let mut report = match &cli.command {
        Command::Validate { paths } => cmd_validate(paths, &cfg)?,
        Command::CheckMap(args) => cmd_check_map(args, &cfg)?,
        Command::Quotient {
            quantale,
            relation,
            out: dest,
        } => cmd_quotient(quantale, relation, dest.as_deref(), out)?,
        Command::Tensor { lattices, builtin } => cmd_tensor(lattices, builtin)?,
        Command::PullbackVerify {
            p,
            f,
            maxlen,
            truncation,
            unchecked,
            trace_limit,
        } => cmd_pullback_verify(p, f, *maxlen, *truncation, *unchecked, *trace_limit, &cfg)?,
        Command::Example { name, params, out: dest } => {
            cmd_example(name, params, dest.as_deref(), &cfg, out)?
        }
        Command::ReportVerify { path } => cmd_report_verify(path, &cfg)?,
    };
    report.seed = cli.seed;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    for c in &report.checks {
        let verdict = match c.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "skipped",
        };
        let _ = write!(out, "{}: {verdict}", c.name);
        if let Some(w) = &c.witness {
            let _ = write!(out, " witness={}", serde_json::to_string(w).expect("serializable"));
        }
        if let Some(n) = &c.note {
            let _ = write!(out, " ({n})");
        }
        let _ = writeln!(out);
    }
    Ok(report)
}

enum Doc {
    Lattice(LatticeDoc),
    Quantale(QuantaleDoc),
    Map(MapDoc),
    Relation(RelationDoc),
}

fn classify(bytes: &[u8]) -> Result<Doc, CliError> {
    let v: Value = parse(bytes)?;
    let has = |k: &str| v.get(k).is_some();
    let doc = if has("source") {
        Doc::Map(from_json(v)?)
    } else if has("mult") {
        Doc::Quantale(from_json(v)?)
    } else if has("elements") {
        Doc::Lattice(from_json(v)?)
    } else if has("pairs") {
        Doc::Relation(from_json(v)?)
    } else {
        return Err(CliError::Usage("unrecognized document".into()));
    };
    Ok(doc)
}

fn from_json<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    Ok(serde_json::from_value(v).map_err(FormatError::from)?)
}

fn law_record(name: String, input: usize, part: Option<&str>, q: &FiniteInvQuantale) -> CheckRecord {
    let v = q.validate();
    CheckRecord::new(name, v.is_ok()).witness(v.err().map(|v| Witness::Law {
        input,
        part: part.map(str::to_string),
        axiom: v.axiom,
        elements: v.witness,
    }))
}

fn cmd_validate(paths: &[PathBuf], cfg: &CheckConfig) -> Result<RunReport, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage("validate needs at least one file".into()));
    }
    let mut report = RunReport::new("validate", cfg.seed);
    for (i, path) in paths.iter().enumerate() {
        let (input, bytes) = file_input(&format!("input{i}"), path)?;
        report.inputs.push(input);
        let label = path.display();
        match classify(&bytes)? {
            Doc::Lattice(doc) => {
                lattice_from_doc(&doc)?;
                report.checks.push(CheckRecord::new(format!("{label}: lattice"), true));
            }
            Doc::Relation(doc) => {
                report.checks.push(
                    CheckRecord::new(format!("{label}: relation"), true)
                        .note(format!("{} pairs; indices are checked against a quantale by `quotient`", doc.pairs.len())),
                );
            }
            Doc::Quantale(doc) => {
                let q = quantale_from_doc(&doc)?;
                report.checks.push(law_record(format!("{label}: quantale laws"), i, None, &q));
            }
            Doc::Map(doc) => {
                let p = map_from_doc(&doc)?;
                let source_ok = p.source().validate().is_ok();
                let target_ok = p.target().validate().is_ok();
                report.checks.push(law_record(format!("{label}: source laws"), i, Some("source"), p.source()));
                report.checks.push(law_record(format!("{label}: target laws"), i, Some("target"), p.target()));
                if !(source_ok && target_ok) {
                    report.checks.push(CheckRecord::skipped(format!("{label}: homomorphism"), "carrier laws fail"));
                    continue;
                }
                let hom = validate_hom(&p, cfg);
                let ok = hom.is_ok();
                report.checks.push(
                    CheckRecord::new(format!("{label}: homomorphism"), ok).witness(hom.err().map(|h| Witness::Hom {
                        input: i,
                        law: h.law,
                        elements: h.witness.iter().map(value).collect(),
                    })),
                );
                if ok && p.has_direct_image() {
                    report.checks.push(semiopen_record(format!("{label}: direct image adjunction"), &p, i, cfg).0);
                }
            }
        }
    }
    Ok(report)
}

fn semiopen_record<Q, X>(name: String, p: &QuantaleMap<Q, X>, input: usize, cfg: &CheckConfig) -> (CheckRecord, Option<QuantaleMap<Q, X>>)
where
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
{
    match check_semiopen(p, cfg) {
        Ok((map, cov)) => (CheckRecord::new(name, true).coverage(cov), Some(map)),
        Err(SemiopenError::NoLeftAdjoint(w)) => (
            CheckRecord::new(name, false).witness(Some(Witness::Adjunction {
                input,
                a: value(&w.a),
                x: value(&w.x),
            })),
            None,
        ),
        Err(SemiopenError::InvolutionNotPreserved(a)) => (
            CheckRecord::new(name, false).note(format!("direct image does not preserve the involution at {}", value(&a))),
            None,
        ),
        Err(SemiopenError::MissingDirectImage) => (
            CheckRecord::skipped(name, "no direct image and the source is not finite"),
            None,
        ),
    }
}

enum BuiltinMap {
    Finite(FiniteMap),
    Support(SupportMap),
}

fn parse_group(name: &str) -> Result<FiniteGroupoid, CliError> {
    match name {
        "s3" => Ok(FiniteGroupoid::symmetric3()),
        _ => name
            .strip_prefix('z')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(FiniteGroupoid::cyclic)
            .ok_or_else(|| CliError::Usage(format!("unknown group {name:?}; use zN or s3"))),
    }
}

fn parse_size(s: &str) -> Result<usize, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("expected a number, got {s:?}")))
}

/// Diagonal inclusion `Rel(2) → Ω` with `p*(1) = Δ`: a homomorphism
/// without a left adjoint.
fn rel_diagonal() -> Result<FiniteMap, CliError> {
    let rel = Arc::new(rel_quantale(2)?);
    let omega = Arc::new(FiniteInvQuantale::omega());
    Ok(FiniteMap::from_table(rel, omega, vec![0, 0b1001]).expect("two entries"))
}

fn finite_builtin(name: &str) -> Result<Option<FiniteMap>, CliError> {
    use catalog::locale;
    let (head, arg) = name.split_once(':').map_or((name, None), |(h, a)| (h, Some(a)));
    let map = match head {
        "omega-support" => {
            let g = parse_group(arg.unwrap_or("z2"))?;
            omega_support_map(Arc::new(group_powerset_quantale(&g)?))?
        }
        "discrete-to-point" => locale::discrete_two_to_point(),
        "sierpinski-closed-point" => locale::sierpinski_closed_point(),
        "open-inclusion" => locale::open_inclusion(),
        "group-algebra-finite" => catalog::finite_group_algebra_support()?,
        "regular-z2" => catalog::regular_representation_z2(),
        "rel-diagonal" => rel_diagonal()?,
        _ => return Ok(None),
    };
    Ok(Some(map))
}

fn builtin_map(name: &str) -> Result<BuiltinMap, CliError> {
    if let Some(m) = finite_builtin(name)? {
        return Ok(BuiltinMap::Finite(m));
    }
    let (head, arg) = name.split_once(':').map_or((name, None), |(h, a)| (h, Some(a)));
    match head {
        "matrix-support" => Ok(BuiltinMap::Support(matrix_support_map(parse_size(arg.unwrap_or("2"))?))),
        "group-algebra" => Ok(BuiltinMap::Support(group_algebra_support_map(parse_group(arg.unwrap_or("z2"))?)?)),
        _ => Err(CliError::Usage(format!("unknown built-in map {name:?}"))),
    }
}

struct Selection {
    semiopen: bool,
    fr1: bool,
    fr2: bool,
    surjective: bool,
    wos: bool,
    locale_meet: bool,
}

impl Selection {
    fn from_args(a: &CheckMapArgs) -> Self {
        let none = !(a.semiopen || a.fr1 || a.fr2 || a.surjective || a.wos || a.locale_meet);
        Selection {
            semiopen: a.semiopen || none,
            fr1: a.fr1 || none,
            fr2: a.fr2 || none,
            surjective: a.surjective || none,
            wos: a.wos,
            locale_meet: a.locale_meet,
        }
    }
}

fn run_map_checks<Q, X>(p: &QuantaleMap<Q, X>, sel: &Selection, input: usize, cfg: &CheckConfig) -> Result<Vec<CheckRecord>, CliError>
where
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
{
    let mut checks = Vec::new();
    let (semi, map) = semiopen_record("semiopen".into(), p, input, cfg);
    let map = match map {
        Some(m) => m,
        None if semi.verdict == Verdict::Skipped => return Err(OpennessError::MissingDirectImage.into()),
        None => {
            checks.push(semi);
            for (on, name) in [(sel.fr1, "fr1"), (sel.fr2, "fr2"), (sel.wos, "wos"), (sel.locale_meet, "locale_meet")] {
                if on {
                    checks.push(CheckRecord::skipped(name, "p* has no left adjoint"));
                }
            }
            if sel.surjective {
                checks.push(surjective_record(p, input, cfg));
            }
            return Ok(checks);
        }
    };
    if sel.semiopen {
        checks.push(semi);
    }
    if sel.fr1 {
        let c = check_fr1(&map, cfg)?;
        checks.push(
            CheckRecord::new("fr1", c.passed())
                .coverage(&c.coverage)
                .witness(c.witness.map(|w| Witness::Fr1 { input, a: value(&w.a), x: value(&w.x) })),
        );
        let c = check_fr1_right(&map, cfg)?;
        checks.push(
            CheckRecord::new("fr1_right", c.passed())
                .coverage(&c.coverage)
                .witness(c.witness.map(|w| Witness::Fr1Right { input, a: value(&w.a), x: value(&w.x) })),
        );
    }
    if sel.fr2 {
        let c = check_fr2(&map, cfg)?;
        checks.push(CheckRecord::new("fr2", c.passed()).coverage(&c.coverage).witness(c.witness.map(|w| {
            Witness::Fr2 {
                input,
                a: value(&w.a),
                x: value(&w.x),
                b: value(&w.b),
            }
        })));
    }
    if sel.surjective {
        checks.push(surjective_record(&map, input, cfg));
    }
    if sel.wos {
        let r = check_wos(&map, cfg)?;
        checks.push(CheckRecord::new("wos", r.holds).coverage(&r));
    }
    if sel.locale_meet {
        let r = check_locale_meet_lemma(&map, cfg)?;
        let witness = r.meet_witness.as_ref().filter(|_| !r.holds).map(|(a, b)| Witness::LocaleMeet {
            input,
            a: value(a),
            b: value(b),
        });
        checks.push(CheckRecord::new("locale_meet", r.holds).coverage(&r).witness(witness));
    }
    Ok(checks)
}

fn surjective_record<Q: EffectiveQuantale, X: EffectiveQuantale>(p: &QuantaleMap<Q, X>, input: usize, cfg: &CheckConfig) -> CheckRecord {
    match is_surjective(p, cfg) {
        Surjectivity::Surjective { route } => CheckRecord::new("surjective", true).coverage(route),
        Surjectivity::NotSurjective { route, witness } => CheckRecord::new("surjective", false)
            .coverage(route)
            .witness(Some(Witness::NotSurjective {
                input,
                elements: witness.iter().map(value).collect(),
            })),
        Surjectivity::Undecided { seed, samples } => {
            CheckRecord::skipped("surjective", &format!("undecided on {samples} samples with seed {seed}"))
        }
    }
}

fn map_input(args: &CheckMapArgs) -> Result<(InputRef, BuiltinMap), CliError> {
    match (&args.map, &args.builtin) {
        (Some(path), None) => {
            let (input, bytes) = file_input("map", path)?;
            let doc: MapDoc = parse(&bytes)?;
            Ok((input, BuiltinMap::Finite(map_from_doc(&doc)?)))
        }
        (None, Some(name)) => Ok((
            InputRef {
                role: "map".into(),
                path: None,
                sha256: None,
                builtin: Some(name.clone()),
            },
            builtin_map(name)?,
        )),
        _ => Err(CliError::Usage("give exactly one of a map file or --builtin".into())),
    }
}

fn cmd_check_map(args: &CheckMapArgs, cfg: &CheckConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("check-map", cfg.seed);
    let (input, map) = map_input(args)?;
    report.inputs.push(input);
    let sel = Selection::from_args(args);
    report.checks = match &map {
        BuiltinMap::Finite(p) => run_map_checks(p, &sel, 0, cfg)?,
        BuiltinMap::Support(p) => run_map_checks(p, &sel, 0, cfg)?,
    };
    Ok(report)
}

fn emit<T: Serialize>(dest: Option<&Path>, role: &str, doc: &T, report: &mut RunReport, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).map_err(FormatError::from)? + "\n";
    match dest {
        Some(path) => {
            write_json(path, doc)?;
            report.outputs.push(InputRef {
                role: role.into(),
                path: Some(path.display().to_string()),
                sha256: Some(sha256_hex(text.as_bytes())),
                builtin: None,
            });
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn cmd_quotient(qpath: &Path, rpath: &Path, dest: Option<&Path>, out: &mut dyn std::io::Write) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("quotient", 0);
    let (qin, qbytes) = file_input("quantale", qpath)?;
    let (rin, rbytes) = file_input("relation", rpath)?;
    report.inputs = vec![qin, rin];
    let q = Arc::new(quantale_from_doc(&parse(&qbytes)?)?);
    let laws = law_record("quantale laws".into(), 0, None, &q);
    let ok = laws.verdict == Verdict::Pass;
    report.checks.push(laws);
    if !ok {
        return Ok(report);
    }
    let rel: RelationDoc = parse(&rbytes)?;
    let pres = RelationPresentation::new(q, rel.pairs.iter().map(|&[r, s]| (r, s)).collect())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let j = nucleus_from_relation(&pres).map_err(|e| CliError::Usage(e.to_string()))?;
    let quot = quotient(&j);
    report.checks.push(
        CheckRecord::new("quotient laws", quot.quantale().validate().is_ok())
            .note(format!("{} elements", quot.quantale().size())),
    );
    report.details = serde_json::json!({
        "nucleus": j.values(),
        "closed": quot.closed(),
    });
    emit(dest, "quotient", &quantale_to_doc(quot.quantale()), &mut report, out)?;
    Ok(report)
}

fn builtin_lattice(name: &str) -> Result<FiniteSupLattice, CliError> {
    let (head, arg) = name.split_once(':').map_or((name, None), |(h, a)| (h, Some(a)));
    match (head, arg) {
        ("omega", None) => Ok(FiniteSupLattice::omega()),
        ("m3", None) => Ok(FiniteSupLattice::diamond()),
        ("n5", None) => Ok(FiniteSupLattice::pentagon()),
        ("chain", Some(n)) => Ok(FiniteSupLattice::chain(parse_size(n)?.max(1))),
        ("powerset", Some(n)) => {
            let n = parse_size(n)?;
            if n > 4 {
                return Err(CliError::Usage("powerset factors are limited to 4 points".into()));
            }
            Ok(FiniteSupLattice::powerset(n as u32))
        }
        _ => Err(CliError::Usage(format!("unknown lattice {name:?}"))),
    }
}

fn cmd_tensor(paths: &[PathBuf], builtins: &[String]) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("tensor", 0);
    let mut factors = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        let (input, bytes) = file_input(&format!("factor{i}"), path)?;
        report.inputs.push(input);
        factors.push(Arc::new(lattice_from_doc(&parse(&bytes)?)?));
    }
    for name in builtins {
        report.inputs.push(InputRef {
            role: format!("factor{}", factors.len()),
            path: None,
            sha256: None,
            builtin: Some(name.clone()),
        });
        factors.push(Arc::new(builtin_lattice(name)?));
    }
    let t = TensorLattice::new(factors.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let n = t.elements().map_err(|e| CliError::Usage(e.to_string()))?.len();
    report.checks.push(CheckRecord::new("enumerate", true).note(format!("{n} elements")));
    report.details = serde_json::json!({ "elements": n, "grid": t.grid() });
    if factors.len() == 2 {
        let lm = t.lattice().map_err(|e| CliError::Usage(e.to_string()))?;
        let ml_t = TensorLattice::new(vec![factors[1].clone(), factors[0].clone()])
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let ml = ml_t.lattice().map_err(|e| CliError::Usage(e.to_string()))?;
        let swap = swap_iso(&t, &ml_t).map_err(|e| CliError::Usage(e.to_string()))?;
        report.checks.push(CheckRecord::new("L⊗M ≅ M⊗L", is_order_iso(&lm, &ml, &swap)));
        if factors[0].size() == 2 {
            let iso = unit_iso(&t).map_err(|e| CliError::Usage(e.to_string()))?;
            report.checks.push(CheckRecord::new("Ω⊗L ≅ L", is_order_iso(&lm, &factors[1], &iso)));
        }
    }
    Ok(report)
}

fn load_map(role: &str, path: &Path) -> Result<(InputRef, FiniteMap), CliError> {
    let (input, bytes) = file_input(role, path)?;
    Ok((input, map_from_doc(&parse(&bytes)?)?))
}

fn cmd_pullback_verify(
    ppath: &Path,
    fpath: &Path,
    maxlen: usize,
    truncation: usize,
    unchecked: bool,
    trace_limit: usize,
    cfg: &CheckConfig,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("pullback-verify", cfg.seed);
    let (pin, p) = load_map("p", ppath)?;
    let (fin, f) = load_map("f", fpath)?;
    report.inputs = vec![pin, fin];
    let ctx = if unchecked {
        PullbackContext::unchecked(&p, &f, truncation)?
    } else {
        PullbackContext::new(&p, &f, truncation, cfg)?
    };
    pullback_checks(&ctx, maxlen, trace_limit, &mut report);
    Ok(report)
}

/// Runs the four pullback verifiers and records one check per family and
/// per Frobenius shape.
pub fn pullback_checks(ctx: &PullbackContext, maxlen: usize, trace_limit: usize, report: &mut RunReport) {
    let h = ctx.verify_h_respects(maxlen);
    for fam in &h.families {
        let witness = h
            .first_failure
            .as_ref()
            .filter(|f| f.instance.family == fam.family)
            .map(|f| Witness::HRespect {
                left: f.instance.left.clone(),
                right: f.instance.right.clone(),
                left_h: f.left_h,
                right_h: f.right_h,
            });
        report.checks.push(
            CheckRecord::new(format!("h_respects/{:?}", fam.family), fam.failures == 0)
                .witness(witness)
                .note(format!(
                    "{} instances, {} failures, hypothesis {:?}",
                    fam.instances, fam.failures, fam.hypothesis
                )),
        );
    }
    let adj = ctx.verify_adjunction_on_words(maxlen, trace_limit);
    let mut c = CheckRecord::new("adjunction", adj.passed()).note(format!(
        "counit on {} letters, unit chains for {} words ({} steps)",
        adj.counit_checked, adj.words_checked, adj.steps
    ));
    if let Some(f) = adj.failures.first() {
        let word = match f {
            crate::freeprod::ChainFailure::NotBelowRaised { word }
            | crate::freeprod::ChainFailure::StepMismatch { word, .. }
            | crate::freeprod::ChainFailure::StepChangesH { word, .. }
            | crate::freeprod::ChainFailure::WrongResult { word, .. } => word.clone(),
        };
        c = c.witness(Some(Witness::UnitChain { word }));
    }
    report.checks.push(c);
    let bc = ctx.verify_beck_chevalley();
    report.checks.push(
        CheckRecord::new("beck_chevalley", bc.passed())
            .witness(bc.failure.as_ref().map(|f| Witness::BeckChevalley { a: f.a }))
            .note(format!("{} elements", bc.checked)),
    );
    let fr = ctx.verify_pullback_frobenius(maxlen);
    report.checks.push(
        CheckRecord::new("frobenius/one_sided", fr.one_sided.failures == 0)
            .witness(fr.one_sided.first_failure.as_ref().map(|(w, y, side)| Witness::OneSided {
                word: w.clone(),
                y: *y,
                side: *side,
            }))
            .note(format!("{} products", fr.one_sided.checked)),
    );
    for s in &fr.shapes {
        report.checks.push(
            CheckRecord::new(format!("frobenius/{}", s.shape), s.failures == 0 && s.instances > 0)
                .witness(s.first_failure.as_ref().map(|(u, y, v)| Witness::Shape {
                    u: u.clone(),
                    y: *y,
                    v: v.clone(),
                }))
                .note(format!("{} instances", s.instances)),
        );
    }
    report.details = serde_json::json!({
        "maxlen": maxlen,
        "hypotheses": ctx.hypotheses(),
        "h_respects": h,
        "adjunction": adj,
        "beck_chevalley": bc,
        "frobenius": fr,
    });
}

fn effective_suite(p: &SupportMap, claims_fr2: bool, cfg: &CheckConfig) -> Result<Vec<CheckRecord>, CliError> {
    let mut checks = Vec::new();
    let laws = check_laws_sampled(&**p.source(), cfg);
    checks.push(CheckRecord::new("source laws (sampled)", laws.is_ok()).note(match &laws {
        Ok(cov) => format!("{cov:?}"),
        Err(v) => v.to_string(),
    }));
    let hom = validate_hom(p, cfg);
    checks.push(CheckRecord::new("homomorphism", hom.is_ok()).witness(hom.err().map(|h| Witness::Hom {
        input: 0,
        law: h.law,
        elements: h.witness.iter().map(value).collect(),
    })));
    let sel = Selection {
        semiopen: true,
        fr1: true,
        fr2: false,
        surjective: true,
        wos: false,
        locale_meet: false,
    };
    checks.extend(run_map_checks(p, &sel, 0, cfg)?);
    let c = check_fr2(p, cfg)?;
    let found = !c.passed();
    let name = if claims_fr2 { "fr2" } else { "fr2 fails" };
    checks.push(
        CheckRecord::new(name, found != claims_fr2)
            .coverage(&c.coverage)
            .witness(c.witness.map(|w| Witness::Fr2 {
                input: 0,
                a: value(&w.a),
                x: value(&w.x),
                b: value(&w.b),
            })),
    );
    Ok(checks)
}

fn cmd_example(name: &str, params: &[String], dest: Option<&Path>, cfg: &CheckConfig, out: &mut dyn std::io::Write) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("example", cfg.seed);
    let arg = params.first().map(String::as_str);
    let builtin = |spec: String| InputRef {
        role: "example".into(),
        path: None,
        sha256: None,
        builtin: Some(spec),
    };
    match name {
        "rel" => {
            let n = parse_size(arg.unwrap_or("2"))?;
            let q = rel_quantale(n)?;
            report.inputs.push(builtin(format!("rel:{n}")));
            report.checks.push(law_record("laws".into(), 0, None, &q));
            emit(dest, "quantale", &quantale_to_doc(&q), &mut report, out)?;
        }
        "group" => {
            let g = arg.unwrap_or("z2");
            let q = group_powerset_quantale(&parse_group(g)?)?;
            report.inputs.push(builtin(format!("group:{g}")));
            report.checks.push(law_record("laws".into(), 0, None, &q));
            emit(dest, "quantale", &quantale_to_doc(&q), &mut report, out)?;
        }
        "locale" => {
            let which = arg.unwrap_or("discrete-to-point");
            let map = match which {
                "discrete-to-point" | "sierpinski-closed-point" | "open-inclusion" => finite_builtin(which)?.expect("known"),
                _ => return Err(CliError::Usage(format!("unknown locale map {which:?}"))),
            };
            report.inputs.push(builtin(which.to_string()));
            emit(dest, "map", &map_to_doc(&map), &mut report, out)?;
        }
        "omega-support" | "group-algebra-finite" | "regular-z2" | "rel-diagonal" => {
            let spec = match (name, arg) {
                ("omega-support", Some(g)) => format!("omega-support:{g}"),
                _ => name.to_string(),
            };
            let map = finite_builtin(&spec)?.expect("known");
            report.inputs.push(builtin(spec));
            emit(dest, "map", &map_to_doc(&map), &mut report, out)?;
        }
        "matrix-max" => {
            let n = parse_size(arg.unwrap_or("2"))?;
            report.inputs.push(builtin(format!("matrix-support:{n}")));
            report.checks = effective_suite(&matrix_support_map(n), true, cfg)?;
        }
        "group-algebra" => {
            let g = arg.unwrap_or("z2");
            report.inputs.push(builtin(format!("group-algebra:{g}")));
            report.checks = effective_suite(&group_algebra_support_map(parse_group(g)?)?, false, cfg)?;
        }
        _ => return Err(CliError::Usage(format!("unknown example {name:?}"))),
    }
    Ok(report)
}

/// Loaded form of a report input.
enum Loaded {
    Quantale(FiniteInvQuantale),
    Map(BuiltinMap),
    Other,
}

fn load_input(input: &InputRef) -> Result<Loaded, CliError> {
    if let Some(name) = &input.builtin {
        if input.role == "map" || input.role == "example" {
            return match builtin_map(name) {
                Ok(m) => Ok(Loaded::Map(m)),
                Err(_) => Ok(Loaded::Other),
            };
        }
        return Ok(Loaded::Other);
    }
    let path = input
        .path
        .as_ref()
        .ok_or_else(|| CliError::Usage("input has neither path nor builtin".into()))?;
    let (fresh, bytes) = file_input(&input.role, Path::new(path))?;
    if fresh.sha256 != input.sha256 {
        return Err(CliError::Usage(format!("{path}: digest differs from the report")));
    }
    Ok(match classify(&bytes)? {
        Doc::Quantale(d) => Loaded::Quantale(quantale_from_doc(&d)?),
        Doc::Map(d) => Loaded::Map(BuiltinMap::Finite(map_from_doc(&d)?)),
        _ => Loaded::Other,
    })
}

/// `true` when the witness still exhibits the violation.
fn replay_map<Q, X>(p: &QuantaleMap<Q, X>, w: &Witness, cfg: &CheckConfig) -> Result<bool, CliError>
where
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
    Q::Elem: DeserializeOwned,
    X::Elem: DeserializeOwned,
{
    let with_direct = || -> Result<QuantaleMap<Q, X>, CliError> {
        check_semiopen(p, cfg)
            .map(|(m, _)| m)
            .map_err(|_| CliError::Usage("witness needs a direct image, but the map has none".into()))
    };
    Ok(match w {
        Witness::Hom { law, elements, .. } => {
            let els: Vec<X::Elem> = elements.iter().map(from_value).collect::<Result<_, _>>()?;
            hom_fails_at(p, *law, &els)
        }
        Witness::Adjunction { a, x, .. } => {
            let (a, x): (Q::Elem, X::Elem) = (from_value(a)?, from_value(x)?);
            let (q, t) = (p.source(), p.target());
            let candidate = match p.direct_image(&a) {
                Some(d) => d,
                None => {
                    let xs = t
                        .elements()
                        .ok_or_else(|| CliError::Usage("target not enumerable".into()))?;
                    let above: Vec<&X::Elem> = xs.iter().filter(|e| q.leq(&a, &p.inverse_image(e))).collect();
                    let lower: Vec<X::Elem> = xs
                        .iter()
                        .filter(|y| above.iter().all(|s| t.leq(y, s)))
                        .cloned()
                        .collect();
                    t.join(&lower)
                }
            };
            t.leq(&candidate, &x) != q.leq(&a, &p.inverse_image(&x))
        }
        Witness::Fr1 { a, x, .. } => !fr1_holds(&with_direct()?, &from_value(a)?, &from_value(x)?)?,
        Witness::Fr1Right { a, x, .. } => !fr1_right_holds(&with_direct()?, &from_value(a)?, &from_value(x)?)?,
        Witness::Fr2 { a, x, b, .. } => {
            !fr2_holds(&with_direct()?, &from_value(a)?, &from_value(x)?, &from_value(b)?)?
        }
        Witness::NotSurjective { elements, .. } => {
            let els: Vec<X::Elem> = elements.iter().map(from_value).collect::<Result<_, _>>()?;
            match (p.direct_fn(), els.as_slice()) {
                (Some(d), [x]) => d(&p.inverse_image(x)) != *x,
                (None, [x, y]) => x != y && p.inverse_image(x) == p.inverse_image(y),
                _ => false,
            }
        }
        Witness::LocaleMeet { a, b, .. } => {
            let m = with_direct()?;
            let (a, b): (Q::Elem, Q::Elem) = (from_value(a)?, from_value(b)?);
            let (q, t) = (m.source(), m.target());
            let d = |e: &Q::Elem| m.direct_image(e).expect("installed");
            d(&q.mul(&a, &b)) != t.mul(&d(&a), &d(&b))
        }
        _ => return Err(CliError::Usage("witness kind does not apply to a map".into())),
    })
}

fn cmd_report_verify(path: &Path, cfg: &CheckConfig) -> Result<RunReport, CliError> {
    let (input, bytes) = file_input("report", path)?;
    let old: RunReport = parse(&bytes)?;
    if old.schema_version != SCHEMA_VERSION {
        return Err(CliError::Usage(format!("unsupported schema version {}", old.schema_version)));
    }
    let mut report = RunReport::new("report-verify", old.seed);
    report.inputs.push(input);
    let cfg = CheckConfig { seed: old.seed, ..*cfg };
    let loaded: Vec<Loaded> = old.inputs.iter().map(load_input).collect::<Result<_, _>>()?;
    let ctx = if old.command == "pullback-verify" {
        match (&loaded.first(), &loaded.get(1)) {
            (Some(Loaded::Map(BuiltinMap::Finite(p))), Some(Loaded::Map(BuiltinMap::Finite(f)))) => {
                Some(PullbackContext::unchecked(p, f, DEFAULT_TRUNCATION)?)
            }
            _ => return Err(CliError::Usage("pullback report inputs are not map files".into())),
        }
    } else {
        None
    };
    let mut replayed = 0;
    for c in &old.checks {
        let Some(w) = &c.witness else { continue };
        let holds = match (w, &ctx) {
            (Witness::Law { input, part, axiom, elements }, _) => {
                let q = match (loaded.get(*input), part.as_deref()) {
                    (Some(Loaded::Quantale(q)), None) => q,
                    (Some(Loaded::Map(BuiltinMap::Finite(m))), Some("source")) => &**m.source(),
                    (Some(Loaded::Map(BuiltinMap::Finite(m))), Some("target")) => &**m.target(),
                    _ => return Err(CliError::Usage(format!("{}: law witness without a quantale", c.name))),
                };
                q.fails_at(*axiom, elements)
            }
            (Witness::HRespect { left, right, left_h, right_h }, Some(ctx)) => {
                ctx.h_word(left) == *left_h && ctx.h_word(right) == *right_h && left_h != right_h
            }
            (Witness::UnitChain { word }, Some(ctx)) => ctx.unit_chain(word).is_err(),
            (Witness::BeckChevalley { a }, Some(ctx)) => {
                ctx.h_word(&Word::q(*a)) != ctx.f_star(ctx.p_shriek(*a))
            }
            (Witness::OneSided { word, y, side }, Some(ctx)) => {
                let (fp, yq) = (ctx.free_product(), ctx.y());
                let hw = ctx.h_word(word);
                match side {
                    Side::Right => ctx.h_word(&fp.word_multiply(word, &Word::y(*y))) != yq.mul(hw, *y),
                    Side::Left => ctx.h_word(&fp.word_multiply(&Word::y(*y), word)) != yq.mul(*y, hw),
                }
            }
            (Witness::Shape { u, y, v }, Some(ctx)) => {
                let fp = ctx.free_product();
                let yq = ctx.y();
                let w = fp.word_multiply(&fp.word_multiply(u, &Word::y(*y)), v);
                ctx.h_word(&w) != yq.mul(yq.mul(ctx.h_word(u), *y), ctx.h_word(v))
            }
            (w, _) => {
                let input = match w {
                    Witness::Hom { input, .. }
                    | Witness::Adjunction { input, .. }
                    | Witness::Fr1 { input, .. }
                    | Witness::Fr1Right { input, .. }
                    | Witness::Fr2 { input, .. }
                    | Witness::NotSurjective { input, .. }
                    | Witness::LocaleMeet { input, .. } => *input,
                    _ => return Err(CliError::Usage(format!("{}: witness needs pullback inputs", c.name))),
                };
                match loaded.get(input) {
                    Some(Loaded::Map(BuiltinMap::Finite(m))) => replay_map(m, w, &cfg)?,
                    Some(Loaded::Map(BuiltinMap::Support(m))) => replay_map(m, w, &cfg)?,
                    _ => return Err(CliError::Usage(format!("{}: witness input is not a map", c.name))),
                }
            }
        };
        replayed += 1;
        report.checks.push(CheckRecord::new(format!("replay {}", c.name), holds));
    }
    report.details = serde_json::json!({
        "replayed": replayed,
        "passes_not_replayed": old.checks.iter().filter(|c| c.witness.is_none()).count(),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("quantic").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn builtin_checks() {
        let (code, text) = run_capture(&["check-map", "--builtin", "matrix-support:2", "--fr2"]);
        assert_eq!(code, 0, "{text}");
        let (code, text) = run_capture(&["check-map", "--builtin", "group-algebra:z2", "--fr2"]);
        assert_eq!(code, 1);
        assert!(text.contains("fr2: FAIL"));
        let (code, _) = run_capture(&["check-map", "--builtin", "nonsense"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn group_parsing() {
        assert_eq!(parse_group("z3").unwrap().size(), 3);
        assert_eq!(parse_group("s3").unwrap().size(), 6);
        assert!(parse_group("q8").is_err());
    }
}
