//! Command-line front end for `bcm-core`.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process. Exit codes: 0 success, 1 validation mismatch, 2 usage or
//! configuration error, 3 solver or capacity error.

pub mod args;
pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bcm_core::analysis::{self, SweepError};
use bcm_core::simulator::{self, SimConfig, SimError};
use bcm_core::{fcfs_chain, reference};
use bcm_core::{
    solve, AnalyticOptions, ChainError, Discipline, ModelParams, RawParams, ServiceSpec,
    SolveMethod,
};
use clap::{CommandFactory, Parser};
use rayon::prelude::*;
use thiserror::Error;

use args::{Cli, Command, FigureArgs, SimulateArgs, SolveArgs, ValidateArgs};
use config::{ConfigFile, Resolver};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BCM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("output failed: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn chain_error(e: ChainError) -> CliError {
    CliError::Solver(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    if let Some(cfg) = &config {
        let keys = known_keys(cli.command.name());
        cfg.check_keys(cli.command.name(), keys.iter().map(String::as_str))?;
    }
    let r = Resolver::new(config.as_ref());
    configure_threads()?;
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, r, out),
        Command::ValidateTables(a) => cmd_validate_tables(a, r, out, err),
        Command::FigureData(a) => cmd_figure_data(a, r, out),
        Command::Simulate(a) => cmd_simulate(a, r, out),
    }
}

/// Long flags of `command`, which double as configuration keys.
fn known_keys(command: &str) -> Vec<String> {
    let root = Cli::command();
    root.find_subcommand(command)
        .map(|c| {
            c.get_arguments()
                .filter_map(|a| a.get_long())
                .filter(|l| !matches!(*l, "config" | "help" | "version"))
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_default()
}

/// Sizes the global rayon pool from `BCM_THREADS`. The pool can be sized
/// once per process; later calls only validate the variable.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{v}`"
        ))
    })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMethod {
    Analytic,
    Simulated,
}

impl RecordMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordMethod::Analytic => "analytic",
            RecordMethod::Simulated => "simulated",
        }
    }
}

/// One solved or simulated operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub discipline: Discipline,
    pub method: RecordMethod,
    pub n: usize,
    pub lambda: f64,
    /// Empty when the service is not exponential.
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub p: f64,
    pub anbc: f64,
    pub anpec: f64,
    pub utilization: f64,
    pub ci_halfwidth: Option<f64>,
    pub seed: Option<u64>,
}

impl RunRecord {
    pub const HEADER: [&'static str; 12] = [
        "discipline",
        "method",
        "n",
        "lambda",
        "mu1",
        "mu2",
        "p",
        "anbc",
        "anpec",
        "utilization",
        "ci_halfwidth",
        "seed",
    ];

    pub fn fields(&self) -> [String; 12] {
        [
            self.discipline.to_string(),
            self.method.as_str().to_string(),
            self.n.to_string(),
            num(self.lambda),
            opt_num(self.mu1),
            opt_num(self.mu2),
            num(self.p),
            num(self.anbc),
            num(self.anpec),
            num(self.utilization),
            opt_num(self.ci_halfwidth),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

fn sorted_dedup<T: PartialOrd + Copy>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));
    v.dedup();
    v
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{key} must be finite, got {v}")))
    }
}

fn analytic_options(method: Option<SolveMethod>) -> AnalyticOptions {
    AnalyticOptions {
        method,
        ..AnalyticOptions::default()
    }
}

pub fn cmd_solve(a: &SolveArgs, r: Resolver, out: &mut dyn Write) -> Result<(), CliError> {
    let disciplines = sorted_dedup(r.list("discipline", &a.discipline, &[Discipline::Priority])?);
    let ns = sorted_dedup(r.list("n", &a.n, &[4usize])?);
    let lambdas = r.list("lambda", &a.lambda, &[0.001])?;
    for &l in &lambdas {
        finite("lambda", l)?;
    }
    let lambdas = sorted_dedup(lambdas);
    let mu1 = r.get("mu1", &a.mu1, 0.1)?;
    let mu2 = r.get("mu2", &a.mu2, 0.01)?;
    let p = r.get("p", &a.p, 0.8)?;
    let opts = analytic_options(r.opt("method", &a.method)?);

    let mut points = Vec::new();
    for &d in &disciplines {
        for &n in &ns {
            for &lambda in &lambdas {
                let params = ModelParams::new(RawParams::exponential(n, lambda, mu1, mu2, p))
                    .map_err(usage)?;
                points.push((d, params));
            }
        }
    }
    let records = points
        .par_iter()
        .map(|(d, params)| {
            let s = solve(params, *d, &opts)?;
            Ok(RunRecord {
                discipline: *d,
                method: RecordMethod::Analytic,
                n: params.n_processors(),
                lambda: params.think_rate(),
                mu1: Some(mu1),
                mu2: Some(mu2),
                p,
                anbc: s.anbc,
                anpec: s.anpec(),
                utilization: s.utilization(),
                ci_halfwidth: None,
                seed: None,
            })
        })
        .collect::<Result<Vec<_>, ChainError>>()
        .map_err(chain_error)?;

    let mut w = csv::Writer::from_writer(out);
    w.write_record(RunRecord::HEADER)?;
    for rec in &records {
        w.write_record(rec.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// One compared cell of the validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCell {
    pub table: &'static str,
    pub n: usize,
    pub mu2: f64,
    pub lambda: f64,
    /// `fcfs`, `priority` or `pct`.
    pub quantity: &'static str,
    pub reference: f64,
    pub computed: f64,
    /// Relative for ANBC cells, absolute percentage points for `pct`.
    pub error: f64,
    pub tolerance: f64,
}

impl ValidationCell {
    pub const HEADER: [&'static str; 10] = [
        "table",
        "n",
        "mu2",
        "lambda",
        "quantity",
        "reference",
        "computed",
        "error",
        "tolerance",
        "within",
    ];

    pub fn within(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// Recomputes every published cell. Errors only on solver failure.
pub fn validation_cells(
    anbc_tolerance: f64,
    pct_tolerance: f64,
    opts: &AnalyticOptions,
) -> Result<Vec<ValidationCell>, ChainError> {
    let rows = reference::rows();
    let solved = rows
        .par_iter()
        .map(|row| {
            let params =
                ModelParams::exponential(row.n, row.lambda, reference::MU1, row.mu2, reference::P);
            let f = solve(&params, Discipline::Fcfs, opts)?.anbc;
            let q = solve(&params, Discipline::Priority, opts)?.anbc;
            Ok((f, q))
        })
        .collect::<Result<Vec<_>, ChainError>>()?;
    let mut cells = Vec::with_capacity(3 * rows.len());
    for (row, (f, q)) in rows.iter().zip(solved) {
        let cell = |quantity, reference: f64, computed: f64, error, tolerance| ValidationCell {
            table: row.table,
            n: row.n,
            mu2: row.mu2,
            lambda: row.lambda,
            quantity,
            reference,
            computed,
            error,
            tolerance,
        };
        let rel = |c: f64, r: f64| (c - r).abs() / r.abs();
        cells.push(cell(
            "fcfs",
            row.anbc_fcfs,
            f,
            rel(f, row.anbc_fcfs),
            anbc_tolerance,
        ));
        cells.push(cell(
            "priority",
            row.anbc_priority,
            q,
            rel(q, row.anbc_priority),
            anbc_tolerance,
        ));
        let pct = (q - f) / f * 100.0;
        cells.push(cell(
            "pct",
            row.pct_difference,
            pct,
            (pct - row.pct_difference).abs(),
            pct_tolerance,
        ));
    }
    Ok(cells)
}

pub fn cmd_validate_tables(
    a: &ValidateArgs,
    r: Resolver,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let tol: f64 = r.get("tolerance", &a.tolerance, 1e-4)?;
    let pct_tol: f64 = r.get("pct-tolerance", &a.pct_tolerance, 1e-3)?;
    for (key, v) in [("tolerance", tol), ("pct-tolerance", pct_tol)] {
        if v.is_nan() || v < 0.0 {
            return Err(CliError::Usage(format!(
                "--{key} must be non-negative, got {v}"
            )));
        }
    }
    let opts = analytic_options(r.opt("method", &a.method)?);
    let cells = validation_cells(tol, pct_tol, &opts).map_err(chain_error)?;

    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(ValidationCell::HEADER)?;
    for c in &cells {
        w.write_record([
            c.table.to_string(),
            c.n.to_string(),
            num(c.mu2),
            num(c.lambda),
            c.quantity.to_string(),
            num(c.reference),
            num(c.computed),
            num(c.error),
            num(c.tolerance),
            c.within().to_string(),
        ])?;
    }
    w.flush()?;
    drop(w);

    let max_of = |pct: bool| {
        cells
            .iter()
            .filter(|c| (c.quantity == "pct") == pct)
            .map(|c| c.error)
            .fold(0.0f64, f64::max)
    };
    let failed = cells.iter().filter(|c| !c.within()).count();
    writeln!(err, "note: {}", reference::MU2_NORMALIZATION_NOTE)?;
    writeln!(
        err,
        "max relative ANBC error: {:e} (tolerance {:e})",
        max_of(false),
        tol
    )?;
    writeln!(
        err,
        "max absolute % difference error: {:e} (tolerance {:e})",
        max_of(true),
        pct_tol
    )?;
    writeln!(err, "cells outside tolerance: {failed} of {}", cells.len())?;
    if failed > 0 {
        return Err(CliError::Mismatch(format!(
            "{failed} cells exceed tolerance"
        )));
    }
    Ok(())
}

/// Output file stem for one figure panel.
pub fn figure_stem(discipline: Discipline, p: f64, mu2: f64) -> String {
    format!("anpec_{discipline}_p{}_mu2-{}", num(p), num(mu2))
}

pub fn cmd_figure_data(a: &FigureArgs, r: Resolver, out: &mut dyn Write) -> Result<(), CliError> {
    let ps: Vec<f64> = r.list("p-list", &a.p_list, &[0.8, 0.9])?;
    let mu2s: Vec<f64> = r.list("mu2-list", &a.mu2_list, &[0.01, 0.0066666667])?;
    let default_lambdas: Vec<f64> = (1..=10).map(|k| f64::from(k) / 1000.0).collect();
    let lambdas = r.list("lambda-list", &a.lambda_list, &default_lambdas)?;
    let n_max: usize = r.get("n-max", &a.n_max, 12)?;
    let discipline: Discipline = r.get("discipline", &a.discipline, Discipline::Priority)?;
    let mu1 = r.get("mu1", &a.mu1, 0.1)?;
    let out_dir = PathBuf::from(r.get("out-dir", &a.out_dir, ".".to_string())?);
    let svg = r.flag("svg", a.svg)?;

    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && (**l).is_finite())) {
        return Err(CliError::Usage(format!(
            "--lambda-list: think rates must be > 0, got {l}"
        )));
    }
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Usage(format!(
            "--p-list: probabilities must lie in [0, 1], got {p}"
        )));
    }
    if let Some(m) = mu2s.iter().find(|m| !(**m > 0.0 && (**m).is_finite())) {
        return Err(CliError::Usage(format!(
            "--mu2-list: rates must be > 0, got {m}"
        )));
    }
    if n_max < 2 {
        return Err(CliError::Usage(format!(
            "--n-max must be at least 2, got {n_max}"
        )));
    }
    let lambdas = sorted_dedup(lambdas);
    let opts = AnalyticOptions::default();

    if discipline == Discipline::Fcfs {
        let probe = ModelParams::new(RawParams::exponential(
            n_max, lambdas[0], mu1, mu2s[0], ps[0],
        ))
        .map_err(usage)?;
        if let Err(e) = fcfs_chain::build_with_cap(&probe, opts.fcfs_state_cap) {
            return Err(match e {
                ChainError::StateSpaceCapExceeded { cap, .. } => CliError::Solver(format!(
                    "the FCFS chain for N = {n_max} has more than {cap} states; lower --n-max (at most 10 with the default cap)"
                )),
                other => chain_error(other),
            });
        }
    }

    let mut panels = Vec::new();
    for &p in &ps {
        for &mu2 in &mu2s {
            for &lambda in &lambdas {
                let base = ModelParams::new(RawParams::exponential(1, lambda, mu1, mu2, p))
                    .map_err(usage)?;
                panels.push((p, mu2, base));
            }
        }
    }
    let curves = panels
        .par_iter()
        .map(|(_, _, base)| analysis::anpec_curve(base, discipline, n_max, &opts))
        .collect::<Result<Vec<_>, SweepError>>()
        .map_err(|e| match e {
            SweepError::Chain(ChainError::StateSpaceCapExceeded { .. }) => {
                CliError::Solver(format!("{e}; lower --n-max"))
            }
            other => CliError::Solver(other.to_string()),
        })?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
    for (group, chunk) in curves.chunks(lambdas.len()).enumerate() {
        let (p, mu2) = (ps[group / mu2s.len()], mu2s[group % mu2s.len()]);
        let stem = figure_stem(discipline, p, mu2);
        let csv_path = out_dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&csv_path)?;
        w.write_record(["n", "lambda", "anpec"])?;
        for n in 1..=n_max {
            for curve in chunk {
                let (_, anpec) = curve.points[n - 1];
                w.write_record([n.to_string(), num(curve.lambda), num(anpec)])?;
            }
        }
        w.flush()?;
        writeln!(out, "{}", csv_path.display())?;
        if svg {
            let series: Vec<svg::Series> = chunk
                .iter()
                .map(|c| svg::Series {
                    label: format!("lambda = {}", num(c.lambda)),
                    points: c.points.iter().map(|&(n, y)| (n as f64, y)).collect(),
                })
                .collect();
            let title = format!("{discipline}: p = {}, mu2 = {}", num(p), num(mu2));
            let svg_path = out_dir.join(format!("{stem}.svg"));
            write_file(&svg_path, &svg::anpec_chart(&title, &series))?;
            writeln!(out, "{}", svg_path.display())?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub const SIMULATION_HEADER: [&str; 15] = [
    "discipline",
    "n",
    "lambda",
    "p",
    "dist1",
    "dist2",
    "metric",
    "mean",
    "ci_halfwidth",
    "ci_lower",
    "ci_upper",
    "ci_level",
    "replications",
    "seed",
    "analytic",
];

pub fn cmd_simulate(a: &SimulateArgs, r: Resolver, out: &mut dyn Write) -> Result<(), CliError> {
    let disciplines = sorted_dedup(r.list("discipline", &a.discipline, &[Discipline::Priority])?);
    let n: usize = r.get("n", &a.n, 4)?;
    let lambda = r.get("lambda", &a.lambda, 0.001)?;
    let p = r.get("p", &a.p, 0.8)?;
    let mu1 = r.get("mu1", &a.mu1, 0.1)?;
    let mu2 = r.get("mu2", &a.mu2, 0.01)?;
    let dist1: ServiceSpec = r.get("dist1", &a.dist1, ServiceSpec::exponential(mu1))?;
    let dist2: ServiceSpec = r.get("dist2", &a.dist2, ServiceSpec::exponential(mu2))?;
    let horizon = r.get("horizon", &a.horizon, simulator::DEFAULT_HORIZON)?;
    let warmup = r.get("warmup", &a.warmup, simulator::DEFAULT_WARMUP)?;
    let reps = r.get("reps", &a.reps, simulator::DEFAULT_REPLICATIONS)?;
    let seed = r.get("seed", &a.seed, simulator::DEFAULT_SEED)?;
    let ci = r.get("ci", &a.ci, simulator::DEFAULT_CI_LEVEL)?;
    let record = r.flag("record", a.record)?;

    let params = ModelParams::new(RawParams {
        n_processors: n,
        think_rate: lambda,
        resume_prob: p,
        blocking_service: dist1.clone(),
        writeback_service: dist2.clone(),
    })
    .map_err(usage)?;
    let configs: Vec<SimConfig> = disciplines
        .iter()
        .map(|&d| {
            let c = SimConfig {
                params: params.clone(),
                discipline: d,
                horizon,
                warmup,
                replications: reps,
                base_seed: seed,
                ci_level: ci,
            };
            c.validate().map(|()| c).map_err(usage)
        })
        .collect::<Result<_, _>>()?;

    let mut w = csv::Writer::from_writer(out);
    if record {
        w.write_record(RunRecord::HEADER)?;
    } else {
        w.write_record(SIMULATION_HEADER)?;
    }
    for config in &configs {
        let agg = simulator::run(config).map_err(|e| match e {
            SimError::InvalidConfig(_) => usage(e),
            SimError::InvariantViolation { .. } => CliError::Solver(e.to_string()),
        })?;
        if record {
            let rec = RunRecord {
                discipline: config.discipline,
                method: RecordMethod::Simulated,
                n,
                lambda,
                mu1: dist1.exponential_rate(),
                mu2: dist2.exponential_rate(),
                p,
                anbc: agg.anbc.mean,
                anpec: n as f64 - agg.anbc.mean,
                utilization: agg.utilization.mean,
                ci_halfwidth: Some(agg.anbc.half_width),
                seed: Some(seed),
            };
            w.write_record(rec.fields())?;
            continue;
        }
        let analytic = analytic_counterpart(&params, config.discipline)?;
        for (metric, est) in agg.metrics() {
            let exact = analytic.as_ref().and_then(|s| match metric {
                "anbc" => Some(s.anbc),
                "anpec" => Some(s.anpec()),
                "utilization" => Some(s.utilization()),
                _ => None,
            });
            w.write_record([
                config.discipline.to_string(),
                n.to_string(),
                num(lambda),
                num(p),
                dist1.to_string(),
                dist2.to_string(),
                metric.to_string(),
                num(est.mean),
                num(est.half_width),
                num(est.lower()),
                num(est.upper()),
                num(ci),
                est.replications.to_string(),
                seed.to_string(),
                opt_num(exact),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Chain solution for exponential services, `None` when no chain applies.
fn analytic_counterpart(
    params: &ModelParams,
    discipline: Discipline,
) -> Result<Option<bcm_core::AnalyticSolution>, CliError> {
    match solve(params, discipline, &AnalyticOptions::default()) {
        Ok(s) => Ok(Some(s)),
        Err(
            ChainError::NonExponentialService(_)
            | ChainError::StateSpaceCapExceeded { .. }
            | ChainError::TooManyProcessors { .. },
        ) => Ok(None),
        Err(e) => Err(chain_error(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("bcm").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn every_value_flag_is_a_config_key() {
        let keys = known_keys("simulate");
        for k in ["dist1", "dist2", "horizon", "reps", "record"] {
            assert!(keys.iter().any(|x| x == k), "{k}");
        }
        assert!(!keys.iter().any(|x| x == "config"));
        assert!(known_keys("figure-data").iter().any(|x| x == "p-list"));
    }

    #[test]
    fn run_record_fields_line_up() {
        let rec = RunRecord {
            discipline: Discipline::Fcfs,
            method: RecordMethod::Analytic,
            n: 4,
            lambda: 0.001,
            mu1: Some(0.1),
            mu2: Some(0.01),
            p: 0.8,
            anbc: 0.5,
            anpec: 3.5,
            utilization: 0.25,
            ci_halfwidth: None,
            seed: None,
        };
        let f = rec.fields();
        assert_eq!(f.len(), RunRecord::HEADER.len());
        assert_eq!(f[0], "fcfs");
        assert_eq!(f[1], "analytic");
        assert_eq!(f[10], "");
        assert_eq!(f[11], "");
    }

    #[test]
    fn number_formatting_round_trips() {
        for x in [0.07344077, 1.0 / 150.0, 1e-12, 3.5717155171234567] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn solve_rejects_zero_processors() {
        let (code, out, err) = run_str(&["solve", "--n", "0"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("processors"), "{err}");
    }

    #[test]
    fn solve_sweep_is_sorted() {
        let (code, out, _) = run_str(&[
            "solve",
            "--discipline",
            "priority,fcfs",
            "--n",
            "3,2",
            "--lambda",
            "0.002,0.001",
        ]);
        assert_eq!(code, 0);
        let keys: Vec<(String, String, String)> = out
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[0].into(), f[2].into(), f[3].into())
            })
            .collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(keys[0], ("fcfs".into(), "2".into(), "0.001".into()));
        assert_eq!(keys[1], ("fcfs".into(), "2".into(), "0.002".into()));
        assert_eq!(keys[7], ("priority".into(), "3".into(), "0.002".into()));
    }

    #[test]
    fn bad_method_is_usage_error() {
        assert_eq!(run_str(&["solve", "--method", "magic"]).0, 2);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("validate-tables"));
    }
}
