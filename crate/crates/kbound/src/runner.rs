//! Command execution: load graphs, evaluate the requested methods, compare
//! against the exact oracles, and emit report rows.

use crate::formats::{self, GraphFormat, ParseError};
use crate::poly::PolySpec;
use crate::report::{write_document, BatchSummary, OutputFormat, ReportRow};
use kbound_core::bounds::{self, BoundError, Certificate, Tolerances};
use kbound_core::exact::{self, ExactError, Witness};
use kbound_core::graph::{line_graph, Graph};
use kbound_core::lp::LpError;
use kbound_core::spectral::{Polynomial, SpectralError, SymMatrix};
use serde::Serialize;
use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// A failure with its exit code; rendered as a structured JSON record on
/// stderr by `main`.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError {
            code: EXIT_INPUT,
            kind: "input",
            message,
            graph: None,
        }
    }

    fn for_graph(mut self, id: &str) -> Self {
        self.graph = Some(id.to_string());
        self
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::input(e.to_string())
    }
}

fn classify_bound_error(e: &BoundError) -> (i32, &'static str) {
    match e {
        BoundError::Lp(LpError::DimensionMismatch { .. }) => (EXIT_INPUT, "input"),
        BoundError::Lp(_) => (EXIT_SOLVER, "solver"),
        BoundError::Spectral(SpectralError::NonConvergence { .. }) => (EXIT_SOLVER, "solver"),
        BoundError::Graph(_) => (EXIT_INPUT, "input"),
        BoundError::Exact(ExactError::TooLarge { .. }) => (EXIT_PRECONDITION, "precondition"),
        BoundError::Exact(_) => (EXIT_INPUT, "input"),
        BoundError::DiagonalLength { .. } => (EXIT_INPUT, "input"),
        _ => (EXIT_PRECONDITION, "precondition"),
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        let (code, kind) = classify_bound_error(&e);
        CliError {
            code,
            kind,
            message: e.to_string(),
            graph: None,
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        let (code, kind) = match e {
            ExactError::TooLarge { .. } => (EXIT_PRECONDITION, "precondition"),
            _ => (EXIT_INPUT, "input"),
        };
        CliError {
            code,
            kind,
            message: e.to_string(),
            graph: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Bound,
    Exact,
    Compare,
    Batch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodSel {
    Framework,
    EigenPoly,
    OptLp,
    Ratio,
    Minor,
    Laplacian,
    MinRank,
    Theta,
    WalkRatio,
    ChiK,
    ChiKPrime,
}

impl MethodSel {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSel::Framework => "framework",
            MethodSel::EigenPoly => "eigenpoly",
            MethodSel::OptLp => "optlp",
            MethodSel::Ratio => "ratio",
            MethodSel::Minor => "minor",
            MethodSel::Laplacian => "laplacian",
            MethodSel::MinRank => "minrank",
            MethodSel::Theta => "theta",
            MethodSel::WalkRatio => "walkratio",
            MethodSel::ChiK => "chik",
            MethodSel::ChiKPrime => "chikprime",
        }
    }

    /// Output rows are ordered by input graph, then method name.
    pub fn parse_list(spec: &str) -> Result<Vec<MethodSel>, String> {
        let mut out = Vec::new();
        for name in spec.split(',') {
            let m = match name.trim() {
                "framework" => MethodSel::Framework,
                "eigenpoly" => MethodSel::EigenPoly,
                "optlp" => MethodSel::OptLp,
                "ratio" => MethodSel::Ratio,
                "minor" => MethodSel::Minor,
                "laplacian" => MethodSel::Laplacian,
                "minrank" => MethodSel::MinRank,
                "theta" => MethodSel::Theta,
                "walkratio" => MethodSel::WalkRatio,
                "chik" => MethodSel::ChiK,
                "chikprime" => MethodSel::ChiKPrime,
                other => return Err(format!("unknown method '{other}'")),
            };
            out.push(m);
        }
        if out.is_empty() {
            return Err("method list is empty".into());
        }
        out.sort_by_key(|m| m.name());
        out.dedup();
        Ok(out)
    }

    /// Methods that upper-bound alpha_k and therefore compare against it.
    fn bounds_alpha(&self) -> bool {
        !matches!(
            self,
            MethodSel::Theta | MethodSel::WalkRatio | MethodSel::ChiK | MethodSel::ChiKPrime
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactQuantity {
    Alpha,
    Chi,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagSpec {
    Ones,
    Values(Vec<u64>),
}

impl DiagSpec {
    fn resolve(&self, n: usize) -> Result<Vec<u64>, CliError> {
        match self {
            DiagSpec::Ones => Ok(vec![1; n]),
            DiagSpec::Values(v) => {
                if v.len() != n {
                    return Err(CliError::input(format!(
                        "--diag has {} entries, graph has {n} vertices",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    pub format: Option<GraphFormat>,
    pub k: usize,
    pub methods: Vec<MethodSel>,
    pub poly: PolySpec,
    pub params: HashMap<char, f64>,
    pub field: u64,
    pub diag: DiagSpec,
    pub field_poly: Vec<u64>,
    pub tol: Tolerances,
    pub budget: u64,
    pub quantity: ExactQuantity,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

fn certificate_digest(cert: &Certificate) -> String {
    match cert {
        Certificate::Polynomial(p) => format!("p={}", short_poly(p)),
        Certificate::Pair(pair) => format!("pair(n={};k={})", pair.matrix.order(), pair.k),
        Certificate::None => "-".into(),
    }
}

fn short_poly(p: &Polynomial) -> String {
    let parts: Vec<String> = p
        .coefficients()
        .iter()
        .map(|c| format!("{}", (c * 1e6).round() / 1e6))
        .collect();
    format!("[{}]", parts.join(";"))
}

fn witness_digest(witness: &Witness) -> String {
    match witness {
        Witness::Set(s) => {
            let parts: Vec<String> = s.iter().map(usize::to_string).collect();
            format!("set={{{}}}", parts.join(";"))
        }
        Witness::Coloring(classes) => {
            let parts: Vec<String> = classes
                .iter()
                .map(|c| {
                    let inner: Vec<String> = c.iter().map(usize::to_string).collect();
                    format!("{{{}}}", inner.join(";"))
                })
                .collect();
            format!("classes={}", parts.join(";"))
        }
    }
}

/// Lazily computed oracle values shared across the methods of one graph.
struct OracleCache {
    alpha: Option<(u64, bool)>,
    chi: Option<(u64, bool)>,
    chi_prime: Option<(u64, bool)>,
}

impl OracleCache {
    fn new() -> Self {
        OracleCache {
            alpha: None,
            chi: None,
            chi_prime: None,
        }
    }

    fn alpha(&mut self, g: &Graph, k: usize, budget: u64) -> Result<(u64, bool), CliError> {
        if let Some(v) = self.alpha {
            return Ok(v);
        }
        let r = exact::exact_alpha_k(g, k, budget)?;
        let v = (r.value as u64, r.exhausted);
        self.alpha = Some(v);
        Ok(v)
    }

    fn chi(&mut self, g: &Graph, k: usize, budget: u64) -> Result<(u64, bool), CliError> {
        if let Some(v) = self.chi {
            return Ok(v);
        }
        let r = exact::exact_chi_k(g, k, budget)?;
        let v = (r.value as u64, r.exhausted);
        self.chi = Some(v);
        Ok(v)
    }

    fn chi_prime(&mut self, g: &Graph, k: usize, budget: u64) -> Result<(u64, bool), CliError> {
        if let Some(v) = self.chi_prime {
            return Ok(v);
        }
        let line = line_graph(g).map_err(|e| CliError::from(BoundError::Graph(e)))?;
        let r = exact::exact_chi_k(&line, k, budget)?;
        let v = (r.value as u64, r.exhausted);
        self.chi_prime = Some(v);
        Ok(v)
    }
}

fn attach_exact(row: &mut ReportRow, exact: (u64, bool), upper: bool) {
    let (value, exhausted) = exact;
    row.exact = Some(value);
    row.exhausted = Some(exhausted);
    if !exhausted {
        if let Some(int) = row.integer_bound {
            row.gap = Some(if upper {
                int as i64 - value as i64
            } else {
                value as i64 - int as i64
            });
        }
    }
}

/// Evaluates one method on one graph; `with_exact` adds the oracle column.
fn method_row(
    g: &Graph,
    id: &str,
    method: MethodSel,
    cfg: &RunConfig,
    cache: &mut OracleCache,
    with_exact: bool,
) -> Result<ReportRow, CliError> {
    let start = Instant::now();
    let k = cfg.k;
    let needs_poly = matches!(
        method,
        MethodSel::Framework
            | MethodSel::EigenPoly
            | MethodSel::Ratio
            | MethodSel::Theta
            | MethodSel::ChiK
            | MethodSel::ChiKPrime
    );
    let poly = if needs_poly {
        Some(
            cfg.poly
                .resolve(g, k, &cfg.tol, &cfg.params)
                .map_err(CliError::input)?,
        )
    } else {
        None
    };

    let mut row = ReportRow {
        graph: id.to_string(),
        n: g.order(),
        m: g.edge_count(),
        k,
        method: String::new(),
        bound: f64::NAN,
        integer_bound: None,
        exact: None,
        exhausted: None,
        gap: None,
        certificate: "-".into(),
        wall_ms: 0.0,
    };

    match method {
        MethodSel::Framework => {
            let p = poly.as_ref().expect("framework needs a polynomial");
            let m = kbound_core::spectral::matrix_polynomial(&SymMatrix::adjacency(g), p);
            let pair = bounds::MatrixVectorPair::new(g, m, vec![1.0; g.order()], k, &cfg.tol);
            let report = bounds::framework_bound(g, &pair)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::EigenPoly => {
            let p = poly.as_ref().expect("eigenpoly needs a polynomial");
            let a = SymMatrix::adjacency(g);
            let report = bounds::eigenvector_polynomial_bound(g, &a, 0, k, p, &cfg.tol)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::OptLp => {
            let report = bounds::optimal_polynomial_bound(g, k, &cfg.tol)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::Ratio => {
            let p = poly.as_ref().expect("ratio needs a polynomial");
            let report = bounds::ratio_type_bound(g, k, p, &cfg.tol)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::Minor => {
            let report = bounds::minor_polynomial_bound(g, k, &cfg.tol)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::Laplacian => {
            let report = bounds::laplacian_kpower_bound(g, k)?;
            row.method = report.method.tag().into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_bound);
            row.certificate = certificate_digest(&report.certificate);
        }
        MethodSel::MinRank => {
            let diag = cfg.diag.resolve(g.order())?;
            let rank = bounds::min_rank_bound(g, k, cfg.field, &diag, &cfg.field_poly)?;
            row.method = "minrank".into();
            row.bound = rank as f64;
            row.integer_bound = Some(rank as u64);
            let coeffs: Vec<String> = cfg.field_poly.iter().map(u64::to_string).collect();
            row.certificate = format!("gf{};p=[{}]", cfg.field, coeffs.join(";"));
        }
        MethodSel::Theta => {
            let p = poly.as_ref().expect("theta needs a polynomial");
            let report = bounds::theta_lower_bound(g, k, p, &cfg.tol)?;
            row.method = "theta".into();
            row.bound = report.value;
            row.certificate = format!(
                "{}({});p={}",
                report.target,
                report.graph_description(),
                short_poly(&report.certificate)
            );
        }
        MethodSel::WalkRatio => {
            let report = bounds::walk_ratio_bound(g, k)?;
            row.method = "walkratio".into();
            row.bound = report.value;
            row.certificate = format!(
                "{}({});p={}",
                report.target,
                report.graph_description(),
                short_poly(&report.certificate)
            );
        }
        MethodSel::ChiK => {
            let p = poly.as_ref().expect("chik needs a polynomial");
            let report = bounds::chi_k_lower_bound(g, k, p, &cfg.tol)?;
            row.method = "chik".into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_lower);
            row.certificate = format!(
                "p={};via_alpha={}",
                short_poly(&report.certificate),
                report
                    .alpha_route
                    .map_or("-".into(), |v| format!("{:.4}", v))
            );
            if with_exact {
                let exact = cache.chi(g, k, cfg.budget)?;
                attach_exact(&mut row, exact, false);
            }
        }
        MethodSel::ChiKPrime => {
            let p = poly.as_ref().expect("chikprime needs a polynomial");
            let report = bounds::chi_k_prime_lower_bound(g, k, p, &cfg.tol)?;
            row.method = "chikprime".into();
            row.bound = report.value;
            row.integer_bound = Some(report.integer_lower);
            row.certificate = format!("p={}", short_poly(&report.certificate));
            if with_exact {
                let exact = cache.chi_prime(g, k, cfg.budget)?;
                attach_exact(&mut row, exact, false);
            }
        }
    }

    if with_exact && method.bounds_alpha() {
        let exact = cache.alpha(g, k, cfg.budget)?;
        attach_exact(&mut row, exact, true);
    }
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

fn exact_rows(g: &Graph, id: &str, cfg: &RunConfig) -> Result<Vec<ReportRow>, CliError> {
    let mut rows = Vec::new();
    let quantities: &[ExactQuantity] = match cfg.quantity {
        ExactQuantity::Both => &[ExactQuantity::Alpha, ExactQuantity::Chi],
        ref q => std::slice::from_ref(q),
    };
    for q in quantities {
        let start = Instant::now();
        let (method, result) = match q {
            ExactQuantity::Alpha => ("exact_alpha", exact::exact_alpha_k(g, cfg.k, cfg.budget)?),
            ExactQuantity::Chi => ("exact_chi", exact::exact_chi_k(g, cfg.k, cfg.budget)?),
            ExactQuantity::Both => unreachable!(),
        };
        rows.push(ReportRow {
            graph: id.to_string(),
            n: g.order(),
            m: g.edge_count(),
            k: cfg.k,
            method: method.into(),
            bound: result.value as f64,
            integer_bound: Some(result.value as u64),
            exact: Some(result.value as u64),
            exhausted: Some(result.exhausted),
            gap: None,
            certificate: witness_digest(&result.witness),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}

fn graph_rows(g: &Graph, id: &str, cfg: &RunConfig) -> Result<Vec<ReportRow>, CliError> {
    let mut cache = OracleCache::new();
    let with_exact = matches!(cfg.command, CommandKind::Compare | CommandKind::Batch);
    match cfg.command {
        CommandKind::Exact => exact_rows(g, id, cfg),
        _ => cfg
            .methods
            .iter()
            .map(|&m| method_row(g, id, m, cfg, &mut cache, with_exact))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.for_graph(id)),
    }
}

fn load_single(cfg: &RunConfig) -> Result<Graph, CliError> {
    let bytes = fs::read(&cfg.input)
        .map_err(|e| CliError::input(format!("{}: {e}", cfg.input.display())))?;
    let format = cfg
        .format
        .or_else(|| GraphFormat::from_path(&cfg.input))
        .ok_or_else(|| {
            CliError::input(format!(
                "cannot infer format of {} (use --format)",
                cfg.input.display()
            ))
        })?;
    Ok(formats::parse_graph(&bytes, format)?)
}

fn graph_id(cfg: &RunConfig) -> String {
    cfg.input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into())
}

/// Runs the configured command; report rows go to `out` (stdout or the
/// `--out` file), and the error (if any) is returned for `main` to render.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match cfg.command {
        CommandKind::Batch => run_batch(cfg, out),
        _ => {
            let g = load_single(cfg)?;
            let rows = graph_rows(&g, &graph_id(cfg), cfg)?;
            write_document(out, cfg.output, &rows, None)
                .map_err(|e| CliError::input(format!("write failed: {e}")))
        }
    }
}

fn run_batch(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = fs::read(&cfg.input)
        .map_err(|e| CliError::input(format!("{}: {e}", cfg.input.display())))?;
    let graphs = formats::parse_graph6_corpus(&bytes)?;
    let stem = graph_id(cfg);
    let jobs = cfg
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(usize::from)
                .unwrap_or(1)
        })
        .max(1);

    let results = parallel_map(graphs.len(), jobs, |i| {
        graph_rows(&graphs[i], &format!("{stem}:{i}"), cfg)
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => failures.push(e),
        }
    }
    let summary = BatchSummary::from_rows(graphs.len(), failures.len(), &rows);
    // Partial results are flushed even when some graphs failed.
    write_document(out, cfg.output, &rows, Some(&summary))
        .map_err(|e| CliError::input(format!("write failed: {e}")))?;
    out.flush().ok();
    match failures.into_iter().next() {
        Some(first) => Err(first),
        None => Ok(()),
    }
}

/// Maps `f` over `0..count` with a bounded worker pool, preserving order.
fn parallel_map<T, F>(count: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(count.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let value = f(i);
                results.lock().expect("worker poisoned")[i] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .expect("pool finished")
        .into_iter()
        .map(|v| v.expect("every index computed"))
        .collect()
}
