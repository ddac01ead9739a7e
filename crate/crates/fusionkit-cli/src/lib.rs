//! Command-line front end: fusion products, classical tensor products,
//! fusion tables, character evaluation, transport matrices, braiding
//! coefficients, and cross-method verification suites, all with
//! machine-readable JSON output.
//!
//! Output conventions: complex numbers are two-element arrays `[re, im]`,
//! rationals are `"p/q"` strings, signatures are comma-separated strings
//! like `"2,1,0"`. JSON object keys are emitted in sorted order, so
//! identical invocations produce byte-identical output. Exit codes:
//! 0 success, 1 argument error, 2 permissibility error, 3 numerical error.

use clap::{Parser, Subcommand};
use fusionkit::braiding::{
    abelian_coefficients, braid_matrix, braid_numeric, kz_parameters, vanishing_report, BraidCase,
    BraidContext,
};
use fusionkit::fusionring::{fuse, fuse_numeric, fuse_numeric_with_residual, fusion_table};
use fusionkit::numerics::{CMat, ODE_RTOL_DEFAULT};
use fusionkit::symchar::{eval_character, tensor_decompose, TensorDecomposition};
use fusionkit::transport::{
    chi_p, chi_resolvent, random_problem, transport_formula, transport_numeric, Spectral,
    TransportProblem,
};
use fusionkit::{Error, LevelContext, Signature};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

/// Outcome classes, mapped one-to-one onto process exit codes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    ArgumentError,
    PermissibilityError,
    NumericalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ArgumentError => 1,
            Status::PermissibilityError => 2,
            Status::NumericalError => 3,
        }
    }
}

/// Result of one invocation: a status, the JSON payload (null unless the
/// status is `Ok`), and human-readable diagnostics for stderr.
#[derive(Clone, Debug)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

struct CmdError {
    status: Status,
    message: String,
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotPermissible { .. } => Status::PermissibilityError,
            Error::InvalidSignature(_)
            | Error::RankMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::Domain(_) => Status::ArgumentError,
            Error::DegenerateSpectrum { .. } | Error::Numerical(_) | Error::Internal(_) => {
                Status::NumericalError
            }
        };
        CmdError { status, message: e.to_string() }
    }
}

fn arg_err(message: impl Into<String>) -> CmdError {
    CmdError { status: Status::ArgumentError, message: message.into() }
}

#[derive(Parser)]
#[command(name = "fusionkit", version, about = "Fusion rings, transport matrices, and braiding coefficients of level-restricted SU(N)")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Emit an indented human-readable rendering instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FuseMethod {
    /// Decompose classically, then fold into the permissible alcove.
    Folding,
    /// Evaluate characters on the distinguished point set and solve.
    Verlinde,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fusion product of two permissible signatures.
    Fuse {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: i64,
        /// First signature, comma-separated (e.g. 1,0).
        #[arg(long)]
        f: String,
        /// Second signature.
        #[arg(long)]
        g: String,
        /// Computation method.
        #[arg(long, value_enum, default_value_t = FuseMethod::Folding)]
        method: FuseMethod,
    },
    /// Classical tensor product decomposition (no level truncation).
    Tensor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Full fusion table over all permissible pairs.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: i64,
        /// Write the table JSON to this file instead of stdout only.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an irreducible character at a diagonal point.
    Character {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: String,
        /// Colon-separated complex entries, each as re,im (e.g. 2,0:3,0).
        #[arg(long)]
        at: String,
    },
    /// Transport matrix of a rank-one ODE problem.
    Transport {
        /// JSON file with {"dim", "A", "v", "phi", "alpha", "beta"}.
        #[arg(long, conflicts_with = "random")]
        problem: Option<PathBuf>,
        /// Generate a seeded random problem in general position.
        #[arg(long)]
        random: bool,
        /// Dimension for --random (1..=8).
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Seed for --random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also integrate the ODE numerically and report the residual.
        #[arg(long)]
        verify: bool,
    },
    /// Braiding coefficients for one of the channel configurations A-D.
    Braid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: i64,
        /// Configuration: A (vector vs dual around --g), B (vector vs
        /// vector, --f to --h, two channels), C (abelian, --f with covers
        /// --g and --g1), D (abelian, --f to --h, one channel).
        #[arg(long)]
        case: String,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        h: Option<String>,
        /// Cross-check against numerical ODE integration.
        #[arg(long)]
        verify: bool,
    },
    /// Cross-method verification suites with pass/fail counts.
    Verify {
        /// One of: fusion, transport, braiding, all.
        #[arg(long)]
        suite: String,
        /// Restrict the fusion suite to a single rank.
        #[arg(long)]
        n: Option<usize>,
        /// Restrict the fusion suite to a single level.
        #[arg(long)]
        level: Option<i64>,
        /// Number of random problems for the transport suite.
        #[arg(long, default_value_t = 50)]
        problems: usize,
    },
}

/// Run one invocation. `argv` includes the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return CommandResult {
                    status: Status::Ok,
                    payload: Value::String(e.to_string()),
                    diagnostics: Vec::new(),
                };
            }
            return CommandResult {
                status: Status::ArgumentError,
                payload: Value::Null,
                diagnostics: vec![e.to_string()],
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(payload) => {
            CommandResult { status: Status::Ok, payload, diagnostics: Vec::new() }
        }
        Err(e) => CommandResult {
            status: e.status,
            payload: Value::Null,
            diagnostics: vec![e.message],
        },
    }
}

fn dispatch(cmd: Cmd) -> Result<Value, CmdError> {
    match cmd {
        Cmd::Fuse { n, level, f, g, method } => cmd_fuse(n, level, &f, &g, method),
        Cmd::Tensor { n, f, g } => cmd_tensor(n, &f, &g),
        Cmd::Table { n, level, out } => cmd_table(n, level, out.as_deref()),
        Cmd::Character { n, f, at } => cmd_character(n, &f, &at),
        Cmd::Transport { problem, random, dim, seed, verify } => {
            cmd_transport(problem.as_deref(), random, dim, seed, verify)
        }
        Cmd::Braid { n, level, case, f, g, g1, h, verify } => {
            cmd_braid(n, level, &case, f.as_deref(), g.as_deref(), g1.as_deref(), h.as_deref(), verify)
        }
        Cmd::Verify { suite, n, level, problems } => cmd_verify(&suite, n, level, problems),
    }
}

// ---------------------------------------------------------------- parsing

fn parse_sig(s: &str) -> Result<Signature, CmdError> {
    s.parse::<Signature>().map_err(CmdError::from)
}

fn parse_sig_rank(s: &str, n: usize) -> Result<Signature, CmdError> {
    let sig = parse_sig(s)?;
    if sig.rank() != n {
        return Err(arg_err(format!("signature {sig} has rank {}, expected {n}", sig.rank())));
    }
    Ok(sig)
}

/// Colon-separated complex entries, each `re,im`.
fn parse_points(s: &str) -> Result<Vec<Complex64>, CmdError> {
    s.split(':')
        .map(|part| {
            let fields: Vec<&str> = part.split(',').collect();
            if fields.len() != 2 {
                return Err(arg_err(format!("complex entry `{part}` must be re,im")));
            }
            let re: f64 =
                fields[0].trim().parse().map_err(|_| arg_err(format!("bad real part `{}`", fields[0])))?;
            let im: f64 =
                fields[1].trim().parse().map_err(|_| arg_err(format!("bad imaginary part `{}`", fields[1])))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

// ------------------------------------------------------------- rendering

fn cjson(z: Complex64) -> Value {
    // collapse IEEE negative zero so exact-zero entries read as plain 0.0
    let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
    json!([clean(z.re), clean(z.im)])
}

fn cvec_json(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| cjson(z)).collect())
}

fn mat_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| cjson(m[(i, j)])).collect()))
            .collect(),
    )
}

fn ratio_json(r: Ratio<i64>) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn dec_json(dec: &TensorDecomposition) -> Value {
    let mut obj = Map::new();
    for (h, &m) in dec.terms() {
        obj.insert(h.to_string(), json!(m));
    }
    Value::Object(obj)
}

/// Indented human-readable rendering of a JSON payload (the `--text` mode).
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out.trim_end().to_string()
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    v if is_scalar_like(v) => {
                        out.push_str(&format!("{pad}{k}: {}\n", inline(v)))
                    }
                    v => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::String(s) => out.push_str(&format!("{pad}- {s}\n")),
                    v if is_scalar_like(v) => out.push_str(&format!("{pad}- {}\n", inline(v))),
                    v => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(v, indent + 1, out);
                    }
                }
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{s}\n")),
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !matches!(x, Value::Array(_) | Value::Object(_))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        // quoted inside arrays so comma-separated entries stay unambiguous
        Value::String(s) => format!("{s:?}"),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

// -------------------------------------------------------------- commands

fn cmd_fuse(n: usize, level: i64, f: &str, g: &str, method: FuseMethod) -> Result<Value, CmdError> {
    let ctx = LevelContext::new(n, level)?;
    let f = parse_sig_rank(f, n)?;
    let g = parse_sig_rank(g, n)?;
    let (name, dec, residual) = match method {
        FuseMethod::Folding => ("folding", fuse(&f, &g, &ctx)?, 0.0),
        FuseMethod::Verlinde => {
            let (dec, residual) = fuse_numeric_with_residual(&f, &g, &ctx)?;
            ("verlinde", dec, residual)
        }
    };
    Ok(json!({ "method": name, "residual": residual, "result": dec_json(&dec) }))
}

fn cmd_tensor(n: usize, f: &str, g: &str) -> Result<Value, CmdError> {
    let f = parse_sig_rank(f, n)?;
    let g = parse_sig_rank(g, n)?;
    let dec = tensor_decompose(&f, &g)?;
    Ok(json!({ "result": dec_json(&dec) }))
}

fn cmd_table(n: usize, level: i64, out: Option<&std::path::Path>) -> Result<Value, CmdError> {
    let ctx = LevelContext::new(n, level)?;
    let table = fusion_table(&ctx)?;
    let mut entries: Map<String, Value> = Map::new();
    for ((f, g), dec) in &table {
        let inner = entries
            .entry(f.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        inner
            .as_object_mut()
            .expect("entries are objects")
            .insert(g.to_string(), dec_json(dec));
    }
    let payload = json!({ "entries": entries, "level": level, "n": n });
    if let Some(path) = out {
        let body = serde_json::to_string(&payload).expect("serializable");
        std::fs::write(path, body)
            .map_err(|e| arg_err(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(payload)
}

/// Fusion table keyed by unordered pair (lexicographically smaller factor
/// first), each value the multiset of constituents with multiplicities.
pub type FusionTable = BTreeMap<(Signature, Signature), BTreeMap<Signature, i64>>;

/// Parse a `table` payload back into the in-memory form: pairs are stored
/// once with the lexicographically smaller factor first.
pub fn parse_table(payload: &Value) -> Result<FusionTable, String> {
    let entries = payload
        .get("entries")
        .and_then(Value::as_object)
        .ok_or("missing entries object")?;
    let mut table = BTreeMap::new();
    for (fs, inner) in entries {
        let f: Signature = fs.parse().map_err(|e: Error| e.to_string())?;
        let inner = inner.as_object().ok_or("inner value is not an object")?;
        for (gs, decv) in inner {
            let g: Signature = gs.parse().map_err(|e: Error| e.to_string())?;
            let decv = decv.as_object().ok_or("decomposition is not an object")?;
            let mut dec = BTreeMap::new();
            for (hs, mv) in decv {
                let h: Signature = hs.parse().map_err(|e: Error| e.to_string())?;
                let m = mv.as_i64().ok_or("multiplicity is not an integer")?;
                dec.insert(h, m);
            }
            table.insert((f.clone(), g), dec);
        }
    }
    Ok(table)
}

fn cmd_character(n: usize, f: &str, at: &str) -> Result<Value, CmdError> {
    let f = parse_sig_rank(f, n)?;
    let z = parse_points(at)?;
    if z.len() != n {
        return Err(arg_err(format!("expected {n} evaluation entries, got {}", z.len())));
    }
    let value = eval_character(&f, &z)?;
    Ok(json!({ "result": cjson(value) }))
}

// -------------------------------------------------------------- transport

/// On-disk problem description; complex numbers as `[re, im]`, the matrix
/// as a row-major flat list of `dim * dim` entries.
#[derive(Serialize, Deserialize)]
struct ProblemJson {
    dim: usize,
    #[serde(rename = "A")]
    a: Vec<[f64; 2]>,
    v: Vec<[f64; 2]>,
    phi: Vec<[f64; 2]>,
    alpha: [f64; 2],
    beta: [f64; 2],
}

fn c_of(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl ProblemJson {
    fn to_problem(&self) -> Result<TransportProblem, CmdError> {
        let d = self.dim;
        if self.a.len() != d * d {
            return Err(arg_err(format!("A must have {} entries, got {}", d * d, self.a.len())));
        }
        if self.v.len() != d || self.phi.len() != d {
            return Err(arg_err("v and phi must have dim entries".to_string()));
        }
        let a = CMat::from_fn(d, d, |i, j| c_of(self.a[i * d + j]));
        let v: Vec<Complex64> = self.v.iter().map(|&p| c_of(p)).collect();
        let phi: Vec<Complex64> = self.phi.iter().map(|&p| c_of(p)).collect();
        Ok(TransportProblem::new(a, v, phi, c_of(self.alpha), c_of(self.beta))?)
    }

    fn from_problem(p: &TransportProblem) -> Self {
        let d = p.dim();
        let mut a = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                a.push(pair_of(p.a[(i, j)]));
            }
        }
        ProblemJson {
            dim: d,
            a,
            v: p.v.iter().map(|&z| pair_of(z)).collect(),
            phi: p.phi.iter().map(|&z| pair_of(z)).collect(),
            alpha: pair_of(p.alpha),
            beta: pair_of(p.beta),
        }
    }
}

fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

fn cmd_transport(
    problem: Option<&std::path::Path>,
    random: bool,
    dim: usize,
    seed: u64,
    verify: bool,
) -> Result<Value, CmdError> {
    let p = if random {
        random_problem(dim, seed)?
    } else {
        let path = problem.ok_or_else(|| arg_err("pass --problem FILE or --random"))?;
        let body = std::fs::read_to_string(path)
            .map_err(|e| arg_err(format!("cannot read {}: {e}", path.display())))?;
        let parsed: ProblemJson = serde_json::from_str(&body)
            .map_err(|e| arg_err(format!("bad problem JSON: {e}")))?;
        parsed.to_problem()?
    };
    let s = p.spectral()?;
    let cf = transport_formula(&p, &s);
    let mut obj = Map::new();
    obj.insert("c_formula".into(), mat_json(&cf));
    obj.insert("lambda".into(), cvec_json(&s.lambda));
    obj.insert("mu".into(), cvec_json(&s.mu));
    if random {
        obj.insert(
            "problem".into(),
            serde_json::to_value(ProblemJson::from_problem(&p)).expect("serializable"),
        );
    }
    if verify {
        let cn = transport_numeric(&p)?;
        obj.insert("c_numeric".into(), mat_json(&cn));
        obj.insert("max_residual".into(), json!(max_abs_diff(&cf, &cn)));
    }
    Ok(Value::Object(obj))
}

// ---------------------------------------------------------------- braid

fn require(opt: Option<&str>, flag: &str, case: &str) -> Result<Signature, CmdError> {
    parse_sig(opt.ok_or_else(|| arg_err(format!("case {case} requires --{flag}")))?)
}

fn forbid(opt: Option<&str>, flag: &str, case: &str) -> Result<(), CmdError> {
    if opt.is_some() {
        return Err(arg_err(format!("case {case} does not take --{flag}")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_braid(
    n: usize,
    level: i64,
    case: &str,
    f: Option<&str>,
    g: Option<&str>,
    g1: Option<&str>,
    h: Option<&str>,
    verify: bool,
) -> Result<Value, CmdError> {
    let ctx = LevelContext::new(n, level)?;
    let case_tag = case.to_ascii_uppercase();
    let case = match case_tag.as_str() {
        "A" => {
            forbid(f, "f", "A")?;
            forbid(g1, "g1", "A")?;
            forbid(h, "h", "A")?;
            BraidCase::A { g: require(g, "g", "A")? }
        }
        "B" => {
            forbid(g, "g", "B")?;
            forbid(g1, "g1", "B")?;
            BraidCase::B { f: require(f, "f", "B")?, h: require(h, "h", "B")? }
        }
        "C" => {
            forbid(h, "h", "C")?;
            BraidCase::C {
                f: require(f, "f", "C")?,
                g: require(g, "g", "C")?,
                g1: require(g1, "g1", "C")?,
            }
        }
        "D" => {
            forbid(g, "g", "D")?;
            forbid(g1, "g1", "D")?;
            BraidCase::D { f: require(f, "f", "D")?, h: require(h, "h", "D")? }
        }
        other => return Err(arg_err(format!("unknown case `{other}`; expected A, B, C, or D"))),
    };
    let abelian = matches!(case, BraidCase::C { .. } | BraidCase::D { .. });
    let bc = BraidContext::new(ctx, case)?;
    let p = kz_parameters(&bc)?;
    let co = braid_matrix(&bc)?;

    let mut zeros = Vec::new();
    for i in 0..co.channels_in.len() {
        for j in 0..co.channels_out.len() {
            let c = co.matrix[(i, j)];
            if c.re == 0.0 && c.im == 0.0 {
                zeros.push(json!([i, j]));
            }
        }
    }

    let mut obj = Map::new();
    if abelian {
        obj.insert("abelian".into(), cjson(abelian_coefficients(&bc)?));
    }
    obj.insert("alpha".into(), ratio_json(p.alpha));
    obj.insert(
        "anomalies".into(),
        Value::Array(
            p.anomalies
                .iter()
                .map(|row| Value::Array(row.iter().map(|&r| ratio_json(r)).collect()))
                .collect(),
        ),
    );
    obj.insert("beta".into(), ratio_json(p.beta));
    obj.insert(
        "channels".into(),
        json!({
            "in": p.channels_in.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "in_permissible": p.in_permissible,
            "out": p.channels_out.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "out_permissible": p.out_permissible,
        }),
    );
    obj.insert(
        "lambdas".into(),
        Value::Array(p.lambdas.iter().map(|&r| ratio_json(r)).collect()),
    );
    obj.insert("matrix".into(), mat_json(&co.matrix));
    obj.insert("mus".into(), Value::Array(p.mus.iter().map(|&r| ratio_json(r)).collect()));
    obj.insert("zeros".into(), Value::Array(zeros));
    if verify {
        let numeric = braid_numeric(&p, cli_rtol())?;
        obj.insert("numeric_max_error".into(), json!(max_abs_diff(&co.matrix, &numeric)));
    }
    Ok(Value::Object(obj))
}

fn cli_rtol() -> f64 {
    std::env::var("FUSIONKIT_RTOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(ODE_RTOL_DEFAULT)
}

// --------------------------------------------------------------- verify

fn cmd_verify(
    suite: &str,
    n: Option<usize>,
    level: Option<i64>,
    problems: usize,
) -> Result<Value, CmdError> {
    match suite {
        "fusion" => suite_fusion(n, level),
        "transport" => suite_transport(problems),
        "braiding" => suite_braiding(),
        "all" => {
            let fusion = suite_fusion(n, level)?;
            let transport = suite_transport(problems)?;
            let braiding = suite_braiding()?;
            let pass = [&fusion, &transport, &braiding]
                .iter()
                .all(|v| v.get("pass").and_then(Value::as_bool) == Some(true));
            Ok(json!({
                "braiding": braiding,
                "fusion": fusion,
                "pass": pass,
                "transport": transport,
            }))
        }
        other => Err(arg_err(format!(
            "unknown suite `{other}`; expected fusion, transport, braiding, or all"
        ))),
    }
}

const FUSION_SWEEP: [(usize, i64); 9] =
    [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)];

/// Dual-method fusion sweep: folding vs numerical character solve on
/// every ordered permissible pair.
fn suite_fusion(n: Option<usize>, level: Option<i64>) -> Result<Value, CmdError> {
    let contexts: Vec<(usize, i64)> = match (n, level) {
        (Some(n), Some(level)) => vec![(n, level)],
        (None, None) => FUSION_SWEEP.to_vec(),
        _ => return Err(arg_err("pass both --n and --level, or neither")),
    };
    let mut pairs = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for &(n, level) in &contexts {
        let ctx = LevelContext::new(n, level)?;
        let sigs = ctx.enumerate_permissible();
        for f in &sigs {
            for g in &sigs {
                pairs += 1;
                let folded = fuse(f, g, &ctx)?;
                let solved = fuse_numeric(f, g, &ctx)?;
                if folded.terms() != solved.terms() {
                    failures.push(format!("rank {n} level {level}: {f} x {g}"));
                }
            }
        }
    }
    let mut obj = Map::new();
    if !failures.is_empty() {
        obj.insert("failures".into(), json!(failures));
    }
    obj.insert("pairs_checked".into(), json!(pairs));
    obj.insert("pass".into(), json!(failures.is_empty()));
    Ok(Value::Object(obj))
}

const TRANSPORT_REL_TOL: f64 = 1e-5;
const TRACE_TOL: f64 = 1e-10;
const CHI_TOL: f64 = 1e-9;

/// Dual-method transport sweep over seeded random problems: closed
/// formula vs ODE integration, the trace identity, dual evaluations of
/// the characteristic function, and its inversion under problem reversal.
fn suite_transport(problems: usize) -> Result<Value, CmdError> {
    let mut max_rel = 0.0f64;
    let mut failures: Vec<String> = Vec::new();
    for s in 0..problems as u64 {
        let dim = (s % 5) as usize + 1;
        let p = random_problem(dim, s)?;
        let sp = p.spectral()?;
        let cf = transport_formula(&p, &sp);
        let cn = transport_numeric(&p)?;
        let mut rel = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let denom = 1.0 + cf[(i, j)].norm();
                rel = rel.max((cf[(i, j)] - cn[(i, j)]).norm() / denom);
            }
        }
        max_rel = max_rel.max(rel);
        if rel > TRANSPORT_REL_TOL {
            failures.push(format!("seed {s}: formula vs integration error {rel:.3e}"));
        }
        if let Some(msg) = check_identities(&p, &sp, s) {
            failures.push(msg);
        }
    }
    let mut obj = Map::new();
    if !failures.is_empty() {
        obj.insert("failures".into(), json!(failures));
    }
    obj.insert("max_relative_error".into(), json!(max_rel));
    obj.insert("pass".into(), json!(failures.is_empty()));
    obj.insert("problems_checked".into(), json!(problems));
    Ok(Value::Object(obj))
}

fn check_identities(p: &TransportProblem, sp: &Spectral, seed: u64) -> Option<String> {
    // trace identity: sum(lambda) - sum(mu) = trace(B)
    let tr = p.b_matrix().trace();
    let sum_l: Complex64 = sp.lambda.iter().sum();
    let sum_m: Complex64 = sp.mu.iter().sum();
    if (sum_l - sum_m - tr).norm() > TRACE_TOL {
        return Some(format!("seed {seed}: trace identity violated"));
    }
    // characteristic function: resolvent vs eigenvalue product at 20 points
    for k in 0..20 {
        let t = Complex64::new(1.5 + 0.37 * k as f64, 0.8 - 0.23 * k as f64);
        match chi_p(p, sp, t) {
            Ok((res, prod)) => {
                if (res - prod).norm() > CHI_TOL * (1.0 + prod.norm()) {
                    return Some(format!("seed {seed}: characteristic function mismatch at {t}"));
                }
            }
            Err(e) => return Some(format!("seed {seed}: {e}")),
        }
    }
    // inversion under reversal (alpha never enters the characteristic
    // function, so compare through the alpha = 0 representative)
    let zero = Complex64::new(0.0, 0.0);
    let basic = TransportProblem::new(p.a.clone(), p.v.clone(), p.phi.clone(), zero, p.beta);
    let basic = match basic {
        Ok(b) => b,
        Err(e) => return Some(format!("seed {seed}: {e}")),
    };
    let reversed = TransportProblem::new(
        basic.b_matrix().sub(&basic.a),
        basic.v.clone(),
        basic.phi.clone(),
        zero,
        basic.beta,
    );
    let reversed = match reversed {
        Ok(r) => r,
        Err(e) => return Some(format!("seed {seed}: {e}")),
    };
    for t in [Complex64::new(1.7, 0.3), Complex64::new(-0.8, -1.2)] {
        let lhs = chi_resolvent(&reversed, t);
        let rhs = chi_resolvent(&basic, -t);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let inv = Complex64::new(1.0, 0.0) / r;
                if (l - inv).norm() > CHI_TOL * (1.0 + inv.norm()) {
                    return Some(format!("seed {seed}: inversion identity violated at {t}"));
                }
            }
            _ => return Some(format!("seed {seed}: characteristic function failed at {t}")),
        }
    }
    None
}

const BRAID_NUMERIC_TOL: f64 = 1e-6;
const VANISHING_SWEEP: [(usize, i64); 5] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];

/// Braiding suite: exhaustive vanishing sweeps plus numerical ODE
/// cross-checks of representative exchange matrices.
fn suite_braiding() -> Result<Value, CmdError> {
    let mut failures: Vec<String> = Vec::new();
    let mut contexts = 0usize;
    let mut entries = 0usize;
    let mut zeros = 0usize;
    for &(n, level) in &VANISHING_SWEEP {
        let ctx = LevelContext::new(n, level)?;
        let report = vanishing_report(&ctx)?;
        contexts += report.contexts_checked;
        entries += report.entries_checked;
        zeros += report.zero_entries;
        for c in report.counterexamples {
            failures.push(format!("rank {n} level {level}: {c}"));
        }
    }

    let mut numeric_max = 0.0f64;
    let sig = |v: &[i64]| Signature::new(v.to_vec()).expect("static signature");
    let numeric_cases = [
        (LevelContext::new(2, 2)?, BraidCase::A { g: sig(&[1, 0]) }),
        (LevelContext::new(2, 2)?, BraidCase::B { f: sig(&[1, 0]), h: sig(&[2, 1]) }),
        (LevelContext::new(3, 2)?, BraidCase::A { g: sig(&[1, 0, 0]) }),
        (LevelContext::new(3, 2)?, BraidCase::B { f: sig(&[1, 0, 0]), h: sig(&[2, 1, 0]) }),
    ];
    for (ctx, case) in numeric_cases {
        let bc = BraidContext::new(ctx, case)?;
        let p = kz_parameters(&bc)?;
        let co = braid_matrix(&bc)?;
        let numeric = braid_numeric(&p, cli_rtol())?;
        for i in 0..p.lambdas.len() {
            for j in 0..p.mus.len() {
                let denom = 1.0 + co.matrix[(i, j)].norm();
                let rel = (co.matrix[(i, j)] - numeric[(i, j)]).norm() / denom;
                numeric_max = numeric_max.max(rel);
                if rel > BRAID_NUMERIC_TOL {
                    failures.push(format!(
                        "numeric cross-check ({i},{j}) error {rel:.3e} at rank {} level {}",
                        bc.level.n(),
                        bc.level.level()
                    ));
                }
            }
        }
    }

    let mut obj = Map::new();
    obj.insert("contexts_checked".into(), json!(contexts));
    obj.insert("entries_checked".into(), json!(entries));
    if !failures.is_empty() {
        obj.insert("failures".into(), json!(failures));
    }
    obj.insert("numeric_max_relative_error".into(), json!(numeric_max));
    obj.insert("pass".into(), json!(failures.is_empty()));
    obj.insert("zero_entries".into(), json!(zeros));
    Ok(Value::Object(obj))
}
