//! Commands behind the `qcanon` binary. Each returns the text written to the
//! data stream; status goes to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use qcanon::canonical::{canonical_basis, is_bar_invariant};
use qcanon::crystal::{crystal_graph, descent_report};
use qcanon::rootsystem::{parse_int_vec, DynkinDiagram, ReducedWord};
use qcanon::suites::{run_suite, SuiteConfig, SuiteReport, SUITES};
use qcanon::{CanonicalBasis, HighestWeight, PbwBasis, QuantumGroup};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qcanon::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(qcanon::Error::Domain(_) | qcanon::Error::HeightBound { .. }) => 2,
            CliError::Core(qcanon::Error::Internal(_)) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            _ => Err(CliError::Usage(format!("unknown format {s}; use text, json, csv or dot"))),
        }
    }
}

/// Settings shared by all commands; built from a config file, then flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub diagram: String,
    pub word: Option<String>,
    pub max_height: u32,
    pub format: Option<Format>,
    pub seed: u64,
    pub samples: usize,
    pub word_cap: usize,
    pub full_rank_limit: usize,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            diagram: "A2".into(),
            word: None,
            max_height: qcanon::uqminus::DEFAULT_HEIGHT_BOUND,
            format: None,
            seed: 0,
            samples: 20,
            word_cap: 16,
            full_rank_limit: qcanon::pbw::DEFAULT_FULL_RANK_LIMIT,
            verbose: true,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment. Returns unknown keys as an error.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse {v:?}")))
}

impl RunConfig {
    /// Applies one setting by name (config keys match long flag names).
    pub fn set(&mut self, key: &str, v: &str) -> CliResult<()> {
        match key {
            "type" => self.diagram = v.to_string(),
            "word" => self.word = Some(v.to_string()),
            "max-height" => self.max_height = parse_num(key, v)?,
            "format" => self.format = Some(v.parse()?),
            "seed" => self.seed = parse_num(key, v)?,
            "samples" => self.samples = parse_num(key, v)?,
            "word-cap" => self.word_cap = parse_num(key, v)?,
            "full-rank-limit" => self.full_rank_limit = parse_num(key, v)?,
            "quiet" => self.verbose = !parse_num::<bool>(key, v)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key}"))),
        }
        Ok(())
    }

    pub fn diagram(&self) -> CliResult<DynkinDiagram> {
        Ok(DynkinDiagram::parse(&self.diagram)?)
    }

    pub fn reduced_word(&self, d: &DynkinDiagram) -> CliResult<ReducedWord> {
        match &self.word {
            Some(w) => Ok(d.full_word(d.parse_word(w)?.letters().to_vec())?),
            None => Ok(d.default_word()),
        }
    }

    fn validate(&self) -> CliResult<()> {
        if self.max_height < 1 {
            return Err(CliError::Usage("max-height must be at least 1".into()));
        }
        Ok(())
    }

    fn status(&self, msg: &str) {
        if self.verbose {
            eprintln!("{msg}");
        }
    }

    fn group(&self, d: &DynkinDiagram, at_least: u32) -> Arc<QuantumGroup> {
        Arc::new(QuantumGroup::new(d.clone(), self.max_height.max(at_least)))
    }

    fn pbw(&self, qg: &Arc<QuantumGroup>, w: ReducedWord) -> CliResult<Arc<PbwBasis>> {
        Ok(Arc::new(PbwBasis::with_rank_limit(qg.clone(), w, self.full_rank_limit)?))
    }
}

fn top_root_height(d: &DynkinDiagram) -> u32 {
    d.positive_roots().iter().map(|r| r.height() as u32).max().unwrap_or(1)
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

#[derive(Serialize)]
struct RootRow {
    k: usize,
    letter: usize,
    beta: Vec<i32>,
    root: String,
    vector: qcanon::UMinusElement,
    text: String,
}

/// Beta sequence and root-vector table of the configured word.
pub fn cmd_roots(cfg: &RunConfig) -> CliResult<String> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    let w = cfg.reduced_word(&d)?;
    let qg = cfg.group(&d, top_root_height(&d));
    cfg.status(&format!("root vectors of {w} in type {d}"));
    let pbw = cfg.pbw(&qg, w.clone())?;
    let table = pbw.root_vectors();
    let rows: Vec<RootRow> = table
        .betas
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let v = table.element(k);
            RootRow { k: k + 1, letter: w.letters()[k] + 1, beta: b.0.clone(), root: b.to_string(), text: v.to_string(), vector: v }
        })
        .collect();
    Ok(match cfg.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&serde_json::json!({ "type": d.to_string(), "word": w.one_based(), "roots": rows })),
        Format::Csv => {
            let mut s = String::from("k,letter,beta,root_vector\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.k, r.letter, csv_field(&r.root), csv_field(&r.text));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{}\t{}\t{}", r.k, r.root, r.text);
            }
            s
        }
        Format::Dot => return Err(CliError::Usage("roots has no dot output".into())),
    })
}

#[derive(Serialize)]
struct CanonicalRow<'a> {
    #[serde(flatten)]
    element: &'a qcanon::CanonicalElement,
    bar_invariant: bool,
}

/// Canonical basis of one weight. The flag is false when some element fails
/// the bar-invariance check.
pub fn cmd_canonical(cfg: &RunConfig, weight: &str) -> CliResult<(String, bool)> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    let w = cfg.reduced_word(&d)?;
    let nu = parse_int_vec(weight)?;
    if nu.len() != d.rank() || nu.iter().any(|&x| x < 0) {
        return Err(CliError::Usage(format!("weight {weight} must have {} nonnegative entries", d.rank())));
    }
    let h = nu.iter().sum::<i32>() as u32;
    if h > cfg.max_height {
        return Err(qcanon::Error::HeightBound { height: h, bound: cfg.max_height }.into());
    }
    let qg = cfg.group(&d, top_root_height(&d));
    cfg.status(&format!("canonical basis of weight {nu:?} for {w}"));
    let pbw = cfg.pbw(&qg, w)?;
    let basis = canonical_basis(&pbw, &nu)?;
    let mut rows = Vec::new();
    for b in &basis {
        rows.push(CanonicalRow { element: b, bar_invariant: is_bar_invariant(&pbw, b)? });
    }
    let ok = rows.iter().all(|r| r.bar_invariant);
    let out = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("data,pbw_coordinates,bar_invariant,element\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    csv_field(&r.element.data.to_string()),
                    csv_field(&coords_text(r.element)),
                    r.bar_invariant,
                    csv_field(&r.element.element.to_string())
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}",
                    r.element.data,
                    coords_text(r.element),
                    if r.bar_invariant { "bar-invariant" } else { "NOT bar-invariant" },
                    r.element.element
                );
            }
            s
        }
        Format::Dot => return Err(CliError::Usage("canonical has no dot output".into())),
    };
    Ok((out, ok))
}

fn coords_text(b: &qcanon::CanonicalElement) -> String {
    let parts: Vec<String> = b
        .coords
        .iter()
        .map(|(a, c)| {
            let a: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            format!("({}): {c}", a.join(","))
        })
        .collect();
    format!("{{{}}}", parts.join("; "))
}

/// The crystal graph up to a depth, as DOT (default) or JSON.
pub fn cmd_crystal(cfg: &RunConfig, depth: u32) -> CliResult<String> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    let w = cfg.reduced_word(&d)?;
    if depth > cfg.max_height {
        return Err(qcanon::Error::HeightBound { height: depth, bound: cfg.max_height }.into());
    }
    cfg.status(&format!("crystal graph of depth {depth} for {w}"));
    let g = crystal_graph(&d, &w, depth)?;
    cfg.status(&format!("vertices per depth: {:?}", g.depth_counts()));
    Ok(match cfg.format.unwrap_or(Format::Dot) {
        Format::Dot => g.to_dot(),
        Format::Json => to_json(&serde_json::json!({
            "word": w.one_based(),
            "depth_counts": g.depth_counts(),
            "vertices": g.vertices,
            "edges": g.edges,
        })),
        Format::Csv => {
            let mut s = String::from("source,target,i\n");
            for (x, y, i) in &g.edges {
                let _ = writeln!(s, "{},{},{i}", csv_field(&g.vertices[*x].data.to_string()), csv_field(&g.vertices[*y].data.to_string()));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in &g.vertices {
                let _ = writeln!(s, "{}\t{}", v.depth, v.data);
            }
            s
        }
    })
}

/// Descent of the canonical basis to `V_lambda`, as CSV (default) or JSON.
pub fn cmd_descent(cfg: &RunConfig, lambda: &str) -> CliResult<(String, bool)> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    let w = cfg.reduced_word(&d)?;
    let lam = HighestWeight::parse(&d, lambda)?;
    let qg = cfg.group(&d, top_root_height(&d));
    cfg.status(&format!("descent to V{:?} using {w}", lam.c));
    let cb = CanonicalBasis::new(cfg.pbw(&qg, w)?);
    let r = descent_report(&cb, &lam)?;
    cfg.status(&format!("{} survivors, Weyl dimension {}", r.total, r.weyl_dimension));
    let out = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&r),
        Format::Csv | Format::Text => r.to_csv(),
        Format::Dot => return Err(CliError::Usage("descent has no dot output".into())),
    };
    Ok((out, r.passed()))
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    suites: Vec<SuiteReport>,
}

/// Runs the named suites (comma-separated, or `all`). The flag is true iff every suite passes.
pub fn cmd_verify(cfg: &RunConfig, suites: &str) -> CliResult<(String, bool)> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    let names: Vec<&str> = if suites == "all" { SUITES.to_vec() } else { suites.split(',').map(str::trim).collect() };
    if let Some(bad) = names.iter().find(|s| !SUITES.contains(s)) {
        return Err(CliError::Usage(format!("unknown suite {bad}; known: {}", SUITES.join(", "))));
    }
    let mut sc = SuiteConfig::new(d.clone());
    sc.word = match &cfg.word {
        Some(_) => Some(cfg.reduced_word(&d)?),
        None => None,
    };
    sc.max_height = cfg.max_height;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples;
    sc.word_cap = cfg.word_cap;
    sc.full_rank_limit = cfg.full_rank_limit;
    sc.verbose = cfg.verbose;
    let mut reports = Vec::new();
    for name in names {
        let r = run_suite(name, &sc)?;
        cfg.status(&format!(
            "{name}: {} ({} checks, {} warnings)",
            if r.passed() { "pass" } else { "FAIL" },
            r.checks,
            r.warnings.len()
        ));
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    Ok((to_json(&VerifyOutput { passed, suites: reports }), passed))
}
