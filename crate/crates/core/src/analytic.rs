//! One entry point for solving either discipline's chain and reading off the
//! metrics of interest.

use thiserror::Error;

use crate::ctmc::{self, CtmcError, SolveMethod, SolverOptions, StationaryDistribution};
use crate::fcfs_chain;
use crate::model::{Discipline, ModelParams};
use crate::priority_chain;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("analytical chains need exponential service times (got {0})")]
    NonExponentialService(String),
    #[error("state space reached {reached} states, above the cap of {cap}; lower N")]
    StateSpaceCapExceeded { reached: usize, cap: usize },
    #[error("N = {n} exceeds the supported maximum of {cap}")]
    TooManyProcessors { n: usize, cap: usize },
    #[error("model invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Ctmc(#[from] CtmcError),
}

pub(crate) fn exponential_rates(params: &ModelParams) -> Result<(f64, f64), ChainError> {
    params.exponential_rates().ok_or_else(|| {
        ChainError::NonExponentialService(format!(
            "f1 = {}, f2 = {}",
            params.blocking_service(),
            params.writeback_service()
        ))
    })
}

/// Cut-equation residuals of a solved chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowBalance {
    /// `|λ (N − ANBC) − μ1 P(blocking service)|`
    pub request_flow: f64,
    /// `|q μ1 P(blocking service) − μ2 P(write-back service)|`
    pub writeback_flow: f64,
}

impl FlowBalance {
    pub fn compute(
        params: &ModelParams,
        anbc: f64,
        p_blocking: f64,
        p_writeback: f64,
    ) -> Result<Self, ChainError> {
        let (mu1, mu2) = exponential_rates(params)?;
        let n = params.n_processors() as f64;
        Ok(FlowBalance {
            request_flow: (params.think_rate() * (n - anbc) - mu1 * p_blocking).abs(),
            writeback_flow: (params.writeback_prob() * mu1 * p_blocking - mu2 * p_writeback).abs(),
        })
    }

    pub fn max(&self) -> f64 {
        self.request_flow.max(self.writeback_flow)
    }
}

/// Chains with at least this many processors default to the iterative solver
/// under FCFS.
pub const FCFS_ITERATIVE_FROM: usize = 5;

pub fn default_method(discipline: Discipline, n: usize) -> SolveMethod {
    match discipline {
        Discipline::Priority => SolveMethod::Direct,
        Discipline::Fcfs if n >= FCFS_ITERATIVE_FROM => SolveMethod::Iterative,
        Discipline::Fcfs => SolveMethod::Direct,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticOptions {
    /// `None` picks [`default_method`].
    pub method: Option<SolveMethod>,
    pub solver: SolverOptions,
    pub fcfs_state_cap: usize,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        AnalyticOptions {
            method: None,
            solver: SolverOptions::default(),
            fcfs_state_cap: fcfs_chain::DEFAULT_STATE_CAP,
        }
    }
}

impl AnalyticOptions {
    pub fn with_method(method: SolveMethod) -> Self {
        AnalyticOptions {
            method: Some(method),
            ..Self::default()
        }
    }
}

/// Equilibrium metrics of one model instance under one discipline.
#[derive(Debug, Clone)]
pub struct AnalyticSolution {
    pub params: ModelParams,
    pub discipline: Discipline,
    pub anbc: f64,
    /// Probability the bus serves a blocking request.
    pub p_blocking: f64,
    /// Probability the bus serves a write-back.
    pub p_writeback: f64,
    /// `P(k processors blocked)` for `k = 0..=N`.
    pub blocked_distribution: Vec<f64>,
    pub flow: FlowBalance,
    pub stationary: StationaryDistribution,
    pub n_states: usize,
}

impl AnalyticSolution {
    pub fn anpec(&self) -> f64 {
        self.params.n_processors() as f64 - self.anbc
    }

    pub fn utilization(&self) -> f64 {
        self.p_blocking + self.p_writeback
    }

    pub fn method(&self) -> SolveMethod {
        self.stationary.method()
    }
}

fn distribution_of(n: usize, probs: &[f64], blocked: impl Iterator<Item = usize>) -> Vec<f64> {
    let mut dist = vec![0.0; n + 1];
    for (p, k) in probs.iter().zip(blocked) {
        dist[k] += p;
    }
    dist
}

pub fn solve(
    params: &ModelParams,
    discipline: Discipline,
    opts: &AnalyticOptions,
) -> Result<AnalyticSolution, ChainError> {
    let n = params.n_processors();
    let method = opts.method.unwrap_or_else(|| default_method(discipline, n));
    let (anbc, p_blocking, p_writeback, blocked_distribution, stationary) = match discipline {
        Discipline::Priority => {
            let chain = priority_chain::build(params)?;
            let pi = ctmc::stationary(&chain.generator()?, method, &opts.solver)?;
            let (b, w) = priority_chain::service_probabilities(&pi, &chain);
            let dist = distribution_of(
                n,
                pi.probs(),
                chain.states.iter().map(|s| s.blocked(chain.owner)),
            );
            (priority_chain::anbc(&pi, &chain), b, w, dist, pi)
        }
        Discipline::Fcfs => {
            let chain = fcfs_chain::build_with_cap(params, opts.fcfs_state_cap)?;
            let pi = ctmc::stationary(&chain.generator, method, &opts.solver)?;
            let (b, w) = fcfs_chain::service_probabilities(&pi, &chain);
            let dist = distribution_of(n, pi.probs(), chain.states.iter().map(|s| s.blocking()));
            (fcfs_chain::anbc(&pi, &chain), b, w, dist, pi)
        }
    };
    let flow = FlowBalance::compute(params, anbc, p_blocking, p_writeback)?;
    Ok(AnalyticSolution {
        params: params.clone(),
        discipline,
        anbc,
        p_blocking,
        p_writeback,
        blocked_distribution,
        flow,
        n_states: stationary.len(),
        stationary,
    })
}
