//! `qkgw` command-line front end.
//!
//! Every command emits one JSON document `{"metadata": …, "result": …}` or a
//! derived text rendering. Exit codes: 0 success, 1 computational or
//! verification failure, 2 usage error.

mod config;
mod render;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ifunctions::{
    i_complete_intersection, i_toric_fibration, j_product, GeometrySpec, ToricFibrationSpec,
};
use crate::invariants::{gram_matrix, invariants_from_minus, InvariantRow};
use crate::operators::{self, CheckResult};
use crate::qring::{split_polarization, QFunction};
use crate::series::{NovikovSeries, Truncation};
use crate::Error;

pub use config::JobConfig;

#[derive(Parser, Debug)]
#[command(
    name = "qkgw",
    version,
    about = "Exact quantum K-theory I-functions and invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// J-function of a projective space (or a product via --config).
    Jfun(GeomArgs),
    /// I-function of a complete intersection.
    Ifun(GeomArgs),
    /// Degree-one one-point invariants of a complete intersection.
    Invariants(InvariantsArgs),
    /// I-function of a toric fibration.
    Toric(GeomArgs),
    /// Splits every coefficient of a series document into 𝒦₊ ⊕ 𝒦₋.
    Split(SplitArgs),
    /// Runs the operator identity suites.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// JSON job configuration; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GeomArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dimension of the ambient projective space.
    #[arg(long = "N")]
    pub n: Option<u32>,
    /// Hypersurface degrees, e.g. `5` or `2,2`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub degrees: Option<Vec<i64>>,
    /// Maximum Novikov degree.
    #[arg(long)]
    pub trunc: Option<i64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub geom: GeomArgs,
    /// An `ifun` or `split` document to read the degree-one coefficient from.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SplitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Series document produced by `jfun`, `ifun` or `toric`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suites: gamma, em, mobius, poles, toric, lefschetz-equiv, all.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    /// Root orders for the pole suites.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u64>>,
    /// x-degree / z-order for the series identities.
    #[arg(long)]
    pub order: Option<usize>,
}

/// A failed invocation and its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

fn compute(op: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::InvalidSpec(_) | Error::Parse(_) => CliError::Usage(format!("{op}: {e}")),
        _ => CliError::Failure(format!("{op}: {e}")),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub ring: Vec<u32>,
    pub truncation: Truncation,
    pub truncation_policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySpec>,
}

impl Metadata {
    fn new(
        command: &str,
        ring: Vec<u32>,
        truncation: Truncation,
        geometry: Option<GeometrySpec>,
    ) -> Self {
        Metadata {
            tool: "qkgw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            ring,
            truncation,
            truncation_policy: "hard per-variable bound; degrees outside the window are dropped"
                .into(),
            geometry,
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    metadata: &'a Metadata,
    result: &'a T,
}

/// Rendered output of a successful command, plus whether every check passed.
pub struct Output {
    pub body: String,
    pub ok: bool,
}

fn emit<T: Serialize>(
    meta: &Metadata,
    result: &T,
    format: Format,
    text: impl FnOnce() -> String,
) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Document {
                metadata: meta,
                result,
            })
            .map_err(|e| CliError::Failure(format!("serialize: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => Ok(text()),
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::Usage(format!("{}: malformed JSON: {e}", path.display())))
}

fn parse_doc(path: &Path) -> Result<(Metadata, Value), CliError> {
    let mut v = read_json(path)?;
    let meta = v
        .get("metadata")
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("{}: missing metadata block", path.display())))?;
    let meta: Metadata = serde_json::from_value(meta)
        .map_err(|e| CliError::Usage(format!("{}: bad metadata: {e}", path.display())))?;
    let result = v
        .get_mut("result")
        .map(Value::take)
        .ok_or_else(|| CliError::Usage(format!("{}: missing result", path.display())))?;
    Ok((meta, result))
}

fn geometry_from(
    args: &GeomArgs,
    cfg: &JobConfig,
    default_trunc: i64,
) -> Result<GeometrySpec, CliError> {
    let trunc = args.trunc.or(cfg.trunc);
    if let Some(mut g) = cfg.geometry.clone() {
        if args.n.is_some() || args.degrees.is_some() {
            return Err(CliError::Usage(
                "give either --N/--degrees or a config geometry, not both".into(),
            ));
        }
        if let Some(t) = trunc {
            g.trunc = t;
        }
        return Ok(g);
    }
    let n = args
        .n
        .or(cfg.n)
        .ok_or_else(|| CliError::Usage("missing --N (or a geometry in --config)".into()))?;
    let degrees = args
        .degrees
        .clone()
        .or_else(|| cfg.degrees.clone())
        .unwrap_or_default();
    Ok(GeometrySpec::projective(
        n,
        &degrees,
        trunc.unwrap_or(default_trunc),
    ))
}

fn series_output(
    command: &str,
    s: &NovikovSeries,
    geometry: Option<GeometrySpec>,
    format: Format,
) -> Result<String, CliError> {
    let meta = Metadata::new(
        command,
        s.spec().orders().to_vec(),
        s.truncation().clone(),
        geometry,
    );
    emit(&meta, s, format, || render::series_text(&meta, s))
}

fn run_jfun(args: &GeomArgs, cfg: &JobConfig, format: Format) -> Result<String, CliError> {
    let g = geometry_from(args, cfg, 3)?;
    if !g.bundles.is_empty() {
        return Err(CliError::Usage("jfun takes no --degrees; use ifun".into()));
    }
    let s = j_product(&g.ambient, g.trunc).map_err(compute("jfun"))?;
    series_output("jfun", &s, Some(g), format)
}

fn run_ifun(args: &GeomArgs, cfg: &JobConfig, format: Format) -> Result<String, CliError> {
    let g = geometry_from(args, cfg, 3)?;
    let s = i_complete_intersection(&g).map_err(compute("ifun"))?;
    series_output("ifun", &s, Some(g), format)
}

fn run_toric(args: &GeomArgs, cfg: &JobConfig, format: Format) -> Result<String, CliError> {
    let spec = match (&cfg.toric, args.n.or(cfg.n)) {
        (Some(t), None) => t.clone(),
        (None, Some(n)) => {
            let d = args.trunc.or(cfg.trunc).unwrap_or(3);
            ToricFibrationSpec::over_point(vec![vec![1; n as usize + 1]], vec![n + 1], vec![(0, d)])
                .map_err(compute("toric"))?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --N or a toric config, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "toric needs --N or a \"toric\" entry in --config".into(),
            ))
        }
    };
    let s = i_toric_fibration(&spec).map_err(compute("toric"))?;
    series_output("toric", &s, None, format)
}

#[derive(Serialize)]
struct SplitEntry {
    degree: Vec<i64>,
    plus: crate::qring::LaurentPoly,
    minus: QFunction,
}

#[derive(Serialize)]
struct SplitResult {
    coeffs: Vec<SplitEntry>,
}

fn run_split(args: &SplitArgs, cfg: &JobConfig, format: Format) -> Result<String, CliError> {
    let input = args
        .input
        .clone()
        .or_else(|| cfg.input.clone())
        .ok_or_else(|| CliError::Usage("split needs --input".into()))?;
    let (meta, result) = parse_doc(&input)?;
    let s: NovikovSeries = serde_json::from_value(result)
        .map_err(|e| CliError::Usage(format!("{}: not a series document: {e}", input.display())))?;
    let mut coeffs = Vec::new();
    for (d, f) in s.iter() {
        let (plus, minus) = split_polarization(f).map_err(compute("split_polarization"))?;
        coeffs.push(SplitEntry {
            degree: d.clone(),
            plus,
            minus,
        });
    }
    let out_meta = Metadata::new("split", meta.ring, meta.truncation, meta.geometry);
    let res = SplitResult { coeffs };
    emit(&out_meta, &res, format, || {
        render::split_text(&out_meta, &res.coeffs)
    })
}

#[derive(Serialize)]
struct InvariantsResult {
    rows: Vec<InvariantRow>,
    gram: Vec<Vec<String>>,
}

/// Degree-one `𝒦₋` part from an `ifun` or `split` document.
fn minus_from_doc(path: &Path) -> Result<(GeometrySpec, QFunction), CliError> {
    let (meta, result) = parse_doc(path)?;
    let g = meta
        .geometry
        .ok_or_else(|| CliError::Usage(format!("{}: metadata has no geometry", path.display())))?;
    let bad = |m: String| CliError::Usage(format!("{}: {m}", path.display()));
    match meta.command.as_str() {
        "split" => {
            let entries = result
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("split result has no coeffs".into()))?;
            for e in entries {
                if e.get("degree") == Some(&serde_json::json!([1])) {
                    let minus = e
                        .get("minus")
                        .cloned()
                        .ok_or_else(|| bad("entry without minus".into()))?;
                    let f: QFunction =
                        serde_json::from_value(minus).map_err(|e| bad(e.to_string()))?;
                    return Ok((g, f));
                }
            }
            Err(bad("no degree-1 coefficient".into()))
        }
        "ifun" | "jfun" => {
            let s: NovikovSeries =
                serde_json::from_value(result).map_err(|e| bad(e.to_string()))?;
            if !s.in_bounds(&[1]) {
                return Err(bad("series is truncated below degree 1".into()));
            }
            let (_, minus) =
                split_polarization(&s.get(&[1])).map_err(compute("split_polarization"))?;
            Ok((g, minus))
        }
        other => Err(bad(format!(
            "cannot read invariants from a `{other}` document"
        ))),
    }
}

fn run_invariants(
    args: &InvariantsArgs,
    cfg: &JobConfig,
    format: Format,
) -> Result<String, CliError> {
    let (g, minus) = match args.input.clone().or_else(|| cfg.input.clone()) {
        Some(p) => {
            if args.geom.n.is_some() || args.geom.degrees.is_some() {
                return Err(CliError::Usage("--input already fixes the geometry".into()));
            }
            minus_from_doc(&p)?
        }
        None => {
            let g = geometry_from(&args.geom, cfg, 1)?;
            g.validate().map_err(compute("invariants"))?;
            if g.trunc < 1 {
                return Err(CliError::Usage("invariants need --trunc ≥ 1".into()));
            }
            let s = i_complete_intersection(&g).map_err(compute("ifun"))?;
            let (_, minus) =
                split_polarization(&s.get(&[1])).map_err(compute("split_polarization"))?;
            (g, minus)
        }
    };
    if g.ambient.len() != 1 {
        return Err(CliError::Usage(
            "invariants support a single projective ambient factor".into(),
        ));
    }
    let n = g.ambient[0];
    let degrees: Vec<i64> = g.bundles.iter().map(|b| b[0]).collect();
    let rows = invariants_from_minus(n, &degrees, &minus).map_err(compute("invariants"))?;
    let gram = gram_matrix(n, &degrees)
        .map_err(compute("gram_matrix"))?
        .iter()
        .map(|r| r.iter().map(crate::exactnum::rational::to_string).collect())
        .collect();
    let meta = Metadata::new("invariants", vec![n + 1], vec![(0, g.trunc)], Some(g));
    let res = InvariantsResult { rows, gram };
    emit(&meta, &res, format, || {
        render::invariants_text(&meta, &res.rows)
    })
}

pub const SUITES: [&str; 6] = ["gamma", "em", "mobius", "poles", "toric", "lefschetz-equiv"];

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    checks: Vec<CheckResult>,
}

fn run_verify(args: &VerifyArgs, cfg: &JobConfig, format: Format) -> Result<Output, CliError> {
    let requested = args
        .suite
        .clone()
        .or_else(|| cfg.suite.clone())
        .unwrap_or_else(|| vec!["all".into()]);
    let mut suites: Vec<&str> = Vec::new();
    for s in &requested {
        if s == "all" {
            suites.extend(SUITES);
        } else if let Some(&known) = SUITES.iter().find(|k| *k == s) {
            suites.push(known);
        } else {
            return Err(CliError::Usage(format!(
                "unknown suite `{s}`; expected one of {} or all",
                SUITES.join(", ")
            )));
        }
    }
    suites.dedup();
    let ks = args
        .k
        .clone()
        .or_else(|| cfg.k.clone())
        .unwrap_or_else(|| vec![1, 2, 3, 4]);
    if ks.contains(&0) {
        return Err(CliError::Usage("root orders must be positive".into()));
    }
    let order = args.order.or(cfg.order).unwrap_or(8);
    let mut checks = Vec::new();
    for s in SUITES.iter().filter(|s| suites.contains(s)) {
        checks.extend(match *s {
            "gamma" => operators::suite_gamma(order),
            "em" => operators::suite_em(order),
            "mobius" => operators::suite_mobius(24, 100, 0x5eed),
            "poles" => operators::suite_poles(&ks),
            "toric" => operators::suite_toric(3),
            _ => operators::suite_lefschetz(3),
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    let meta = Metadata::new("verify", vec![1], vec![(0, order as i64)], None);
    let res = VerifyResult { passed, checks };
    let body = emit(&meta, &res, format, || render::verify_text(&res.checks))?;
    Ok(Output { body, ok: passed })
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Jfun(a) | Command::Ifun(a) | Command::Toric(a) => &a.common,
        Command::Invariants(a) => &a.geom.common,
        Command::Split(a) => &a.common,
        Command::Verify(a) => &a.common,
    }
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Jfun(_) => "jfun",
        Command::Ifun(_) => "ifun",
        Command::Invariants(_) => "invariants",
        Command::Toric(_) => "toric",
        Command::Split(_) => "split",
        Command::Verify(_) => "verify",
    }
}

/// Runs a parsed command and returns its rendered output.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let common = common_of(&cli.command);
    let cfg = match &common.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    if let Some(c) = &cfg.command {
        if c != name_of(&cli.command) {
            return Err(CliError::Usage(format!(
                "config is for `{c}` but `{}` was invoked",
                name_of(&cli.command)
            )));
        }
    }
    let format = common.format.or(cfg.format).unwrap_or_default();
    let body = |r: Result<String, CliError>| r.map(|body| Output { body, ok: true });
    let out = match &cli.command {
        Command::Jfun(a) => body(run_jfun(a, &cfg, format)),
        Command::Ifun(a) => body(run_ifun(a, &cfg, format)),
        Command::Toric(a) => body(run_toric(a, &cfg, format)),
        Command::Split(a) => body(run_split(a, &cfg, format)),
        Command::Invariants(a) => body(run_invariants(a, &cfg, format)),
        Command::Verify(a) => run_verify(a, &cfg, format),
    }?;
    if let Some(path) = common.out.clone().or_else(|| cfg.out.clone()) {
        std::fs::write(&path, &out.body)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
        return Ok(Output {
            body: String::new(),
            ok: out.ok,
        });
    }
    Ok(out)
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.body);
            if out.ok {
                0
            } else {
                eprintln!("verification failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
