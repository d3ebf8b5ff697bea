//! The `anosov` command line.
//!
//! Every invocation writes `manifest.json` into its output directory, even
//! when it fails. The manifest records the arguments needed to run the
//! command again and the SHA-256 of every file it produced, so
//! `anosov replay <manifest>` can rerun it and compare digests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use anosov_core::certify::{self, CertifyError, Verdict};
use anosov_core::linalg::DEFAULT_TOL;
use anosov_core::obstruct::{certify_with_assumptions, sample_limit_set, ObstructError};
use anosov_core::reproduce::{reproduce, ReproduceError};
use anosov_core::reps::named::NAMES;
use anosov_core::reps::{build_named, NamedBuild, RepError, RepSpec};
use anosov_core::words::{Presentation, Word};

pub const MANIFEST: &str = "manifest.json";
pub const REPLAY_REPORT: &str = "replay.json";
pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_DEFECT_TOL: f64 = 1e-6;

/// Exit statuses.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INDETERMINATE: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "anosov", version, about = "Build representations, certify non-limits, and run finite-scale diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Construction parameter, `key=value`; repeatable.
    #[arg(long = "param", value_name = "K=V", value_parser = parse_param)]
    params: Vec<(String, f64)>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Relative classification tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Word-ball radius: the domination radius for builds, the profile
    /// radius for diagnostics.
    #[arg(long)]
    radius: Option<usize>,

    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Where a representation comes from: a named build, or files.
#[derive(Debug, Args, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["name", "rep"])))]
struct Source {
    #[arg(long)]
    name: Option<String>,

    /// RepSpec JSON.
    #[arg(long)]
    rep: Option<PathBuf>,

    /// Presentation JSON; defaults to the free group on the rep's alphabet.
    #[arg(long, requires = "rep")]
    presentation: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a named construction: rep.json, presentation.json, construction.json.
    Build {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Certify that witnesses obstruct limits of Anosov representations.
    Obstruct {
        #[command(flatten)]
        source: Source,
        /// Witness word; repeatable. Named builds default to their own.
        #[arg(long = "witness")]
        witnesses: Vec<String>,
        /// Exterior index; repeatable. Defaults to the build's request or 1..=dim/2.
        #[arg(long = "index")]
        indices: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Singular-value gap or quasi-isometry profile over a word ball.
    #[command(group(ArgGroup::new("statistic").required(true).args(["gap", "qi"])))]
    Diagnose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        gap: Option<usize>,
        #[arg(long)]
        qi: bool,
        #[arg(long, default_value_t = certify::DEFAULT_SLOPE_THRESHOLD)]
        slope_threshold: f64,
        #[arg(long, default_value_t = certify::DEFAULT_MAX_WORDS)]
        max_words: u128,
        #[command(flatten)]
        common: Common,
    },
    /// Build a named construction and check its goldens and certificate.
    Reproduce {
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sample attracting points of a tensor build and their rank-one defect.
    Limitset {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_DEFECT_TOL)]
        defect_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun a manifest and compare output digests.
    Replay {
        manifest: PathBuf,
        /// Defaults to `replay/` next to the manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, found `{s}`"))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(format!("empty key in `{s}`"));
    }
    let v: f64 = v.trim().parse().map_err(|_| format!("value of `{k}` is not a number: `{v}`"))?;
    Ok((k.to_string(), v))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("gate violated: {0}")]
    Gate(String),
    #[error("search failed: {0}")]
    Search(String),
    #[error("numerically indeterminate: {0}")]
    Indeterminate(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Gate(_) | CliError::Io(_) => exit::INPUT,
            CliError::Search(_) => exit::FAIL,
            CliError::Indeterminate(_) => exit::INDETERMINATE,
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Gate { .. } => CliError::Gate(e.to_string()),
            RepError::Search(_) => CliError::Search(e.to_string()),
            RepError::Linalg(_) => CliError::Indeterminate(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ObstructError> for CliError {
    fn from(e: ObstructError) -> Self {
        match e {
            ObstructError::SearchFailed { .. } => CliError::Search(e.to_string()),
            ObstructError::Numerical(_) | ObstructError::Linalg(_) | ObstructError::Sampling { .. } => {
                CliError::Indeterminate(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ReproduceError> for CliError {
    fn from(e: ReproduceError) -> Self {
        match e {
            ReproduceError::Rep(e) => e.into(),
            ReproduceError::Obstruct(e) => e.into(),
            ReproduceError::Linalg(e) => CliError::Indeterminate(e.to_string()),
            ReproduceError::Word(e) => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    /// Arguments as given, program name excluded.
    pub command_line: Vec<String>,
    /// The same arguments with input paths made absolute and `--out`
    /// removed; what `replay` runs.
    pub replay_args: Vec<String>,
    pub subcommand: String,
    pub construction: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub inputs: Vec<FileDigest>,
    /// Paths relative to the output directory, `manifest.json` excluded.
    pub outputs: Vec<FileDigest>,
    pub exit_code: i32,
    pub message: Option<String>,
}

impl RunManifest {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("manifest: {e}")))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// What a command produced before it finished or failed.
#[derive(Default)]
struct Run {
    construction: Option<String>,
    params: BTreeMap<String, f64>,
    seed: Option<u64>,
    tolerances: BTreeMap<String, f64>,
    inputs: Vec<FileDigest>,
    outputs: Vec<(String, Vec<u8>)>,
    summary: Vec<String>,
}

impl Run {
    fn emit(&mut self, name: &str, text: String) {
        self.outputs.push((name.to_string(), text.into_bytes()));
    }

    fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(FileDigest { path: absolute(path).display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    fn note(&mut self, line: String) {
        self.summary.push(line);
    }
}

fn absolute(p: &Path) -> PathBuf {
    fs::canonicalize(p).unwrap_or_else(|_| std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf()))
}

fn params_of(common: &Common, radius_param: bool) -> BTreeMap<String, f64> {
    let mut params: BTreeMap<String, f64> = common.params.iter().cloned().collect();
    if radius_param {
        if let Some(r) = common.radius {
            params.entry("radius".into()).or_insert(r as f64);
        }
    }
    params
}

fn named(run: &mut Run, name: &str, common: &Common, radius_param: bool) -> Result<NamedBuild, CliError> {
    let params = params_of(common, radius_param);
    run.construction = Some(name.to_string());
    run.params = params.clone();
    run.seed = Some(common.seed);
    if !NAMES.contains(&name) {
        return Err(CliError::Input(format!("unknown construction `{name}`; known: {}", NAMES.join(", "))));
    }
    let b = build_named(name, &params, common.seed)?;
    run.params = b.manifest.params.clone();
    Ok(b)
}

struct Loaded {
    rep: RepSpec,
    presentation: Presentation,
    build: Option<NamedBuild>,
}

fn load(run: &mut Run, source: &Source, common: &Common) -> Result<Loaded, CliError> {
    if let Some(name) = &source.name {
        let b = named(run, name, common, false)?;
        return Ok(Loaded { rep: b.rep.clone(), presentation: b.presentation.clone(), build: Some(b) });
    }
    let path = source.rep.as_ref().expect("clap requires a source");
    let rep = RepSpec::from_json(&run.read_input(path)?)?;
    run.construction = Some(rep.provenance.name.clone());
    run.params = rep.provenance.params.clone();
    let presentation = match &source.presentation {
        Some(p) => Presentation::from_json(&run.read_input(p)?).map_err(|e| CliError::Input(e.to_string()))?,
        None => Presentation::free(rep.alphabet().clone()),
    };
    Ok(Loaded { rep, presentation, build: None })
}

fn cmd_build(run: &mut Run, name: &str, common: &Common) -> Result<i32, CliError> {
    run.tolerances.insert("tol".into(), common.tol);
    let b = named(run, name, common, true)?;
    run.emit("rep.json", b.rep.to_json());
    run.emit("presentation.json", b.presentation.to_json());
    run.emit("construction.json", b.manifest_json());
    run.note(format!("{name}: {}x{} over {}", b.rep.dim(), b.rep.dim(), b.manifest.presentation));
    Ok(exit::PASS)
}

fn cmd_obstruct(run: &mut Run, source: &Source, witnesses: &[String], indices: &[usize], common: &Common) -> Result<i32, CliError> {
    run.tolerances.insert("tol".into(), common.tol);
    let l = load(run, source, common)?;
    let words: Vec<Word> = if witnesses.is_empty() {
        l.build.as_ref().map(|b| b.witnesses.clone()).unwrap_or_default()
    } else {
        witnesses.iter().map(|w| l.presentation.alphabet.parse(w)).collect::<Result<_, _>>().map_err(|e| CliError::Input(e.to_string()))?
    };
    if words.is_empty() {
        return Err(CliError::Input("no witnesses supplied".into()));
    }
    let indices: Vec<usize> = if !indices.is_empty() {
        indices.to_vec()
    } else if let Some(b) = &l.build {
        b.manifest.requested_indices.clone()
    } else {
        (1..=l.rep.dim() / 2).collect()
    };
    let assumptions = match &l.build {
        Some(b) => b.manifest.assumptions.clone(),
        None => anosov_core::obstruct::certificate::DEFAULT_ASSUMPTIONS.map(String::from).to_vec(),
    };
    let cert = certify_with_assumptions(&l.rep, &words, &indices, &l.presentation, common.tol, &assumptions)?;
    run.emit("certificate.json", cert.to_json());
    run.note(format!("covered {:?}, uncovered {:?}", cert.covered(), cert.uncovered));
    Ok(if cert.uncovered.is_empty() {
        exit::PASS
    } else if cert.uncovered.iter().any(|i| cert.indeterminate.iter().any(|(j, _)| j == i)) {
        exit::INDETERMINATE
    } else {
        exit::FAIL
    })
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => exit::PASS,
        Verdict::Fail => exit::FAIL,
        Verdict::Inconclusive => exit::INDETERMINATE,
    }
}

fn cmd_diagnose(
    run: &mut Run,
    source: &Source,
    gap: Option<usize>,
    slope_threshold: f64,
    max_words: u128,
    common: &Common,
) -> Result<i32, CliError> {
    run.tolerances.insert("slope_threshold".into(), slope_threshold);
    let l = load(run, source, common)?;
    let radius = common.radius.unwrap_or_else(|| certify::default_radius(l.rep.free_surrogate().dim()));
    let (json, csv, verdict) = match gap {
        Some(i) => {
            let p = certify::gap_profile_with_budget(&l.rep, i, radius, slope_threshold, max_words)?;
            run.note(format!("gap index {i}, radius {}: {:?} ({})", p.radius, p.verdict, p.label));
            (serde_json::to_string_pretty(&p).expect("plain document"), p.to_csv(), p.verdict)
        }
        None => {
            let p = certify::qi_profile_with_budget(&l.rep, radius, slope_threshold, max_words)?;
            run.note(format!("qi, radius {}: {:?} ({})", p.radius, p.verdict, p.label));
            (serde_json::to_string_pretty(&p).expect("plain document"), p.to_csv(), p.verdict)
        }
    };
    run.emit("profile.csv", csv);
    run.emit("profile.json", json);
    Ok(verdict_code(verdict))
}

fn cmd_reproduce(run: &mut Run, id: &str, common: &Common) -> Result<i32, CliError> {
    run.tolerances.insert("tol".into(), common.tol);
    let b = named(run, id, common, true)?;
    let report = reproduce(&b, common.tol)?;
    run.emit("rep.json", b.rep.to_json());
    run.emit("construction.json", b.manifest_json());
    run.emit("report.json", serde_json::to_string_pretty(&report).expect("plain document"));
    for g in &report.goldens {
        run.note(format!("{} {}: {}", if g.passes { "PASS" } else { "FAIL" }, g.claim, g.detail));
    }
    run.note(format!("certificate covers {:?}, uncovered {:?}", report.certificate.covered(), report.certificate.uncovered));
    Ok(if report.passes {
        exit::PASS
    } else if report.indeterminate {
        exit::INDETERMINATE
    } else {
        exit::FAIL
    })
}

fn cmd_limitset(run: &mut Run, source: &Source, samples: usize, defect_tol: f64, common: &Common) -> Result<i32, CliError> {
    run.tolerances.insert("defect_tol".into(), defect_tol);
    let l = load(run, source, common)?;
    run.seed = Some(common.seed);
    let report = sample_limit_set(&l.rep, samples, common.seed)?;
    run.emit("limitset.csv", report.to_csv());
    run.emit("limitset.json", serde_json::to_string_pretty(&report).expect("plain document"));
    run.note(format!("{} points, max rank-one defect {:e}", report.points.len(), report.max_rank_defect));
    Ok(if report.max_rank_defect < defect_tol { exit::PASS } else { exit::FAIL })
}

/// Drop `--out` and make input paths absolute.
fn replay_args(args: &[String]) -> Vec<String> {
    const PATHS: [&str; 2] = ["--rep", "--presentation"];
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        if PATHS.contains(&a.as_str()) {
            out.push(a.clone());
            if let Some(p) = it.next() {
                out.push(absolute(Path::new(p)).display().to_string());
            }
            continue;
        }
        if let Some((flag, p)) = a.split_once('=').filter(|(f, _)| PATHS.contains(f)) {
            out.push(format!("{flag}={}", absolute(Path::new(p)).display()));
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn write_outputs(dir: &Path, run: &Run, args: &[String], subcommand: &str, code: i32, message: Option<String>) -> Result<RunManifest, CliError> {
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    for (name, bytes) in &run.outputs {
        fs::write(dir.join(name), bytes)?;
        outputs.push(FileDigest { path: name.clone(), sha256: sha256_hex(bytes) });
    }
    let m = RunManifest {
        tool: "anosov".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command_line: args.to_vec(),
        replay_args: replay_args(args),
        subcommand: subcommand.into(),
        construction: run.construction.clone(),
        params: run.params.clone(),
        seed: run.seed,
        tolerances: run.tolerances.clone(),
        inputs: run.inputs.clone(),
        outputs,
        exit_code: code,
        message,
    };
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&m).expect("plain document"))?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub manifest: String,
    pub identical: bool,
    pub exit_code_matches: bool,
    pub inputs_unchanged: bool,
    pub mismatches: Vec<String>,
}

fn cmd_replay(manifest: &Path, out: Option<&Path>) -> i32 {
    let text = match fs::read_to_string(manifest) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", manifest.display());
            return exit::INPUT;
        }
    };
    let m = match RunManifest::from_json(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::INPUT;
        }
    };
    if m.subcommand == "replay" {
        eprintln!("error: a replay manifest cannot itself be replayed");
        return exit::INPUT;
    }
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| manifest.parent().unwrap_or(Path::new(".")).join("replay"));
    let mut mismatches = Vec::new();
    for input in &m.inputs {
        match fs::read(&input.path) {
            Ok(b) if sha256_hex(&b) == input.sha256 => {}
            Ok(_) => mismatches.push(format!("input {} changed", input.path)),
            Err(e) => mismatches.push(format!("input {}: {e}", input.path)),
        }
    }
    let inputs_unchanged = mismatches.is_empty();
    let mut args = m.replay_args.clone();
    args.push("--out".into());
    args.push(dir.display().to_string());
    let code = if inputs_unchanged { run(std::iter::once(OsString::from("anosov")).chain(args.into_iter().map(OsString::from))) } else { exit::INPUT };
    let fresh = fs::read_to_string(dir.join(MANIFEST)).ok().and_then(|t| RunManifest::from_json(&t).ok());
    let exit_code_matches = code == m.exit_code;
    if inputs_unchanged {
        match &fresh {
            Some(f) if f.outputs == m.outputs => {}
            Some(f) => {
                for o in &m.outputs {
                    match f.outputs.iter().find(|g| g.path == o.path) {
                        Some(g) if g.sha256 == o.sha256 => {}
                        Some(g) => mismatches.push(format!("{}: {} != {}", o.path, g.sha256, o.sha256)),
                        None => mismatches.push(format!("{}: not produced", o.path)),
                    }
                }
                for g in &f.outputs {
                    if !m.outputs.iter().any(|o| o.path == g.path) {
                        mismatches.push(format!("{}: not in the original run", g.path));
                    }
                }
            }
            None => mismatches.push("replayed run wrote no manifest".into()),
        }
        if !exit_code_matches {
            mismatches.push(format!("exit code {code} != {}", m.exit_code));
        }
    }
    let report = ReplayReport {
        manifest: absolute(manifest).display().to_string(),
        identical: mismatches.is_empty(),
        exit_code_matches,
        inputs_unchanged,
        mismatches,
    };
    let _ = fs::create_dir_all(&dir);
    let _ = fs::write(dir.join(REPLAY_REPORT), serde_json::to_string_pretty(&report).expect("plain document"));
    for line in &report.mismatches {
        println!("mismatch: {line}");
    }
    println!("{} {} output digests", if report.identical { "IDENTICAL" } else { "DIFFERENT" }, m.outputs.len());
    if !inputs_unchanged {
        exit::INPUT
    } else if report.identical {
        exit::PASS
    } else {
        exit::FAIL
    }
}

/// Run the command line `argv` (program name first) and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::PASS };
            let _ = e.print();
            return code;
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut r = Run::default();
    let (sub, out, result) = match &cli.command {
        Command::Replay { manifest, out } => return cmd_replay(manifest, out.as_deref()),
        Command::Build { name, common } => ("build", &common.out, cmd_build(&mut r, name, common)),
        Command::Obstruct { source, witnesses, indices, common } => {
            ("obstruct", &common.out, cmd_obstruct(&mut r, source, witnesses, indices, common))
        }
        Command::Diagnose { source, gap, qi: _, slope_threshold, max_words, common } => {
            ("diagnose", &common.out, cmd_diagnose(&mut r, source, *gap, *slope_threshold, *max_words, common))
        }
        Command::Reproduce { id, common } => ("reproduce", &common.out, cmd_reproduce(&mut r, id, common)),
        Command::Limitset { source, samples, defect_tol, common } => {
            ("limitset", &common.out, cmd_limitset(&mut r, source, *samples, *defect_tol, common))
        }
    };
    let (code, message) = match result {
        Ok(c) => (c, None),
        Err(e) => {
            eprintln!("error: {e}");
            (e.code(), Some(e.to_string()))
        }
    };
    for line in &r.summary {
        println!("{line}");
    }
    match write_outputs(out, &r, &args, sub, code, message) {
        Ok(_) => code,
        Err(e) => {
            eprintln!("error: writing {}: {e}", out.display());
            exit::INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("x=2").unwrap(), ("x".into(), 2.0));
        assert_eq!(parse_param(" s = -3 ").unwrap(), ("s".into(), -3.0));
        assert!(parse_param("x").is_err());
        assert!(parse_param("=1").is_err());
        assert!(parse_param("x=two").is_err());
    }

    #[test]
    fn replay_args_drop_out() {
        let a: Vec<String> = ["build", "--name", "n", "--out", "d", "--seed", "3", "--out=e"].map(String::from).to_vec();
        assert_eq!(replay_args(&a), ["build", "--name", "n", "--seed", "3"].map(String::from).to_vec());
        let b: Vec<String> = ["obstruct", "--rep", "/abs/rep.json"].map(String::from).to_vec();
        assert_eq!(replay_args(&b)[2], "/abs/rep.json");
    }
}
