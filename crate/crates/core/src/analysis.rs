//! Derived metrics and discipline comparisons.

use thiserror::Error;

use crate::analytic::{solve, AnalyticOptions, ChainError};
use crate::model::{Discipline, ModelParams};
use crate::simulator::{Estimate, SimAggregate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("ANBC {anbc} outside [0, {n}]")]
    OutOfRangeAnbc { n: usize, anbc: f64 },
    #[error("percentage difference undefined for a zero FCFS ANBC")]
    DivisionByZero,
    #[error("saturation needs at least two curve points, got {0}")]
    TooFewPoints(usize),
    #[error("curve points must have consecutive N (found {prev} then {next})")]
    NonConsecutive { prev: usize, next: usize },
    #[error("aggregates were simulated with different model parameters")]
    MismatchedParams,
    #[error("expected an FCFS and a priority aggregate, got {fcfs} and {priority}")]
    MismatchedDisciplines {
        fcfs: Discipline,
        priority: Discipline,
    },
}

/// Default per-processor ANPEC gain below which a curve counts as saturated.
pub const DEFAULT_SATURATION_EPSILON: f64 = 0.05;

/// Average number of processors engaged in computation.
pub fn anpec(n: usize, anbc: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=n as f64).contains(&anbc) {
        return Err(AnalysisError::OutOfRangeAnbc { n, anbc });
    }
    Ok(n as f64 - anbc)
}

/// `(priority − fcfs) / fcfs × 100`.
pub fn pct_difference(anbc_fcfs: f64, anbc_priority: f64) -> Result<f64, AnalysisError> {
    if anbc_fcfs == 0.0 {
        return Err(AnalysisError::DivisionByZero);
    }
    Ok((anbc_priority - anbc_fcfs) / anbc_fcfs * 100.0)
}

/// One line of a FCFS/priority comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub lambda: f64,
    pub anbc_fcfs: f64,
    pub anbc_priority: f64,
    pub pct_difference: f64,
}

impl ComparisonRow {
    pub fn new(lambda: f64, anbc_fcfs: f64, anbc_priority: f64) -> Result<Self, AnalysisError> {
        Ok(ComparisonRow {
            lambda,
            anbc_fcfs,
            anbc_priority,
            pct_difference: pct_difference(anbc_fcfs, anbc_priority)?,
        })
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Params(#[from] crate::model::ValidationError),
}

/// Solves both disciplines for every λ with the other parameters of `base`.
pub fn comparison_rows(
    base: &ModelParams,
    lambdas: &[f64],
    opts: &AnalyticOptions,
) -> Result<Vec<ComparisonRow>, SweepError> {
    lambdas
        .iter()
        .map(|&lambda| {
            let params = base.with_think_rate(lambda)?;
            let fcfs = solve(&params, Discipline::Fcfs, opts)?.anbc;
            let prio = solve(&params, Discipline::Priority, opts)?.anbc;
            Ok(ComparisonRow::new(lambda, fcfs, prio)?)
        })
        .collect()
}

/// ANPEC as a function of N for fixed (λ, p, μ2, discipline).
#[derive(Debug, Clone, PartialEq)]
pub struct AnpecCurve {
    pub lambda: f64,
    pub p: f64,
    pub mu2: f64,
    pub discipline: Discipline,
    pub points: Vec<(usize, f64)>,
}

impl AnpecCurve {
    pub fn marginal_gain(&self, n: usize) -> Option<f64> {
        let at = |k| self.points.iter().find(|(m, _)| *m == k).map(|(_, a)| *a);
        Some(at(n)? - at(n.checked_sub(1)?)?)
    }
}

/// Solves `base` for N = 1..=n_max under `discipline`.
pub fn anpec_curve(
    base: &ModelParams,
    discipline: Discipline,
    n_max: usize,
    opts: &AnalyticOptions,
) -> Result<AnpecCurve, SweepError> {
    let (_, mu2) = base
        .exponential_rates()
        .ok_or_else(|| ChainError::NonExponentialService(base.writeback_service().to_string()))?;
    let points = (1..=n_max)
        .map(|n| {
            let params = base.with_n(n)?;
            let s = solve(&params, discipline, opts)?;
            Ok((n, anpec(n, s.anbc)?))
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(AnpecCurve {
        lambda: base.think_rate(),
        p: base.resume_prob(),
        mu2,
        discipline,
        points,
    })
}

/// Smallest N whose ANPEC gain over N − 1 is below `epsilon`.
pub fn saturation_point(curve: &AnpecCurve, epsilon: f64) -> Result<Option<usize>, AnalysisError> {
    if curve.points.len() < 2 {
        return Err(AnalysisError::TooFewPoints(curve.points.len()));
    }
    for pair in curve.points.windows(2) {
        let ((prev_n, prev), (n, value)) = (pair[0], pair[1]);
        if n != prev_n + 1 {
            return Err(AnalysisError::NonConsecutive {
                prev: prev_n,
                next: n,
            });
        }
        if value - prev < epsilon {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Stationary blocked-count distribution of the finite-source single-server
/// queue with exponential think and service times:
/// `π_k ∝ N! / (N − k)! · (λ / μ)^k`.
pub fn machine_repairman_distribution(n: usize, lambda: f64, mu: f64) -> Vec<f64> {
    let rho = lambda / mu;
    let mut weights = Vec::with_capacity(n + 1);
    let mut w = 1.0;
    weights.push(w);
    for k in 1..=n {
        w *= (n - k + 1) as f64 * rho;
        weights.push(w);
    }
    let total: f64 = weights.iter().sum();
    weights.iter().map(|x| x / total).collect()
}

/// Side-by-side wait estimates for one request class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitComparison {
    pub class: &'static str,
    pub fcfs: Estimate,
    pub priority: Estimate,
    /// `fcfs.mean − priority.mean`
    pub difference: f64,
    /// `sqrt(h_fcfs² + h_priority²)`
    pub difference_half_width: f64,
}

/// Mean waits of both disciplines at one parameter point. Purely descriptive.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub params: ModelParams,
    pub ci_level: f64,
    pub replications: usize,
    pub rows: [WaitComparison; 3],
    pub anbc_fcfs: Estimate,
    pub anbc_priority: Estimate,
}

pub fn conservation_report(
    fcfs: &SimAggregate,
    priority: &SimAggregate,
) -> Result<ConservationReport, AnalysisError> {
    if fcfs.config.discipline != Discipline::Fcfs
        || priority.config.discipline != Discipline::Priority
    {
        return Err(AnalysisError::MismatchedDisciplines {
            fcfs: fcfs.config.discipline,
            priority: priority.config.discipline,
        });
    }
    if fcfs.config.params != priority.config.params {
        return Err(AnalysisError::MismatchedParams);
    }
    let row = |class, a: Estimate, b: Estimate| WaitComparison {
        class,
        fcfs: a,
        priority: b,
        difference: a.mean - b.mean,
        difference_half_width: a.half_width.hypot(b.half_width),
    };
    Ok(ConservationReport {
        params: fcfs.config.params.clone(),
        ci_level: fcfs.config.ci_level,
        replications: fcfs.config.replications.min(priority.config.replications),
        rows: [
            row(
                "blocking",
                fcfs.mean_wait_blocking,
                priority.mean_wait_blocking,
            ),
            row(
                "writeback",
                fcfs.mean_wait_writeback,
                priority.mean_wait_writeback,
            ),
            row(
                "overall",
                fcfs.mean_wait_overall,
                priority.mean_wait_overall,
            ),
        ],
        anbc_fcfs: fcfs.anbc,
        anbc_priority: priority.anbc,
    })
}
