//! Markov chain for the priority discipline: a write-back generated at the
//! end of a blocking request takes the bus immediately, ahead of the queue.
//!
//! With exponential services the queue of blocked processors is fully
//! described by its length, so the chain has `1 + N + (N + 1) = 2N + 2`
//! states in the default reading where the write-back owner goes back to
//! computing. [`WritebackOwner::Held`] keeps the owner stalled until its
//! write-back finishes instead, which yields `2N + 1` states.

use crate::analytic::{exponential_rates, ChainError, FlowBalance};
use crate::ctmc::{assemble, CtmcError, Generator, StateSpace, StationaryDistribution};
use crate::model::ModelParams;

/// What the processor that generated a write-back does while it is served.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WritebackOwner {
    /// The owner resumes computing and may block again behind its own write-back.
    #[default]
    Computing,
    /// The owner stays blocked until its write-back completes.
    Held,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PriorityState {
    /// Bus idle, every processor computing.
    Idle,
    /// A blocking request is in service; `blocked` counts it and those queued.
    ServingBlocking { blocked: usize },
    /// A write-back is in service with `waiting` blocked processors queued.
    ServingWriteback { waiting: usize },
}

impl PriorityState {
    /// Processors stalled on a blocking request.
    pub fn blocked(self, owner: WritebackOwner) -> usize {
        match self {
            PriorityState::Idle => 0,
            PriorityState::ServingBlocking { blocked } => blocked,
            PriorityState::ServingWriteback { waiting } => match owner {
                WritebackOwner::Computing => waiting,
                WritebackOwner::Held => waiting + 1,
            },
        }
    }
}

/// State space and transition list of the priority chain.
#[derive(Debug, Clone)]
pub struct PriorityChain {
    pub owner: WritebackOwner,
    pub states: StateSpace<PriorityState>,
    pub transitions: Vec<(PriorityState, PriorityState, f64)>,
}

impl PriorityChain {
    pub fn generator(&self) -> Result<Generator, CtmcError> {
        assemble(&self.states, self.transitions.iter().copied())
    }
}

/// Builds the default chain (write-back owner computing).
pub fn build(params: &ModelParams) -> Result<PriorityChain, ChainError> {
    build_with_owner(params, WritebackOwner::Computing)
}

pub fn build_with_owner(
    params: &ModelParams,
    owner: WritebackOwner,
) -> Result<PriorityChain, ChainError> {
    use PriorityState::*;

    let (mu1, mu2) = exponential_rates(params)?;
    let n = params.n_processors();
    let lambda = params.think_rate();
    let p = params.resume_prob();
    let q = params.writeback_prob();
    // Highest queue length behind a write-back.
    let max_waiting = match owner {
        WritebackOwner::Computing => n,
        WritebackOwner::Held => n - 1,
    };

    let mut states = StateSpace::new();
    states.insert(Idle);
    for k in 1..=n {
        states.insert(ServingBlocking { blocked: k });
    }
    for j in 0..=max_waiting {
        states.insert(ServingWriteback { waiting: j });
    }

    let mut transitions = Vec::with_capacity(5 * n + 2);
    let mut push = |from, to, rate: f64| {
        if rate > 0.0 {
            transitions.push((from, to, rate));
        }
    };
    push(Idle, ServingBlocking { blocked: 1 }, n as f64 * lambda);
    for k in 1..=n {
        let here = ServingBlocking { blocked: k };
        if k < n {
            push(
                here,
                ServingBlocking { blocked: k + 1 },
                (n - k) as f64 * lambda,
            );
        }
        let after = if k > 1 {
            ServingBlocking { blocked: k - 1 }
        } else {
            Idle
        };
        push(here, after, p * mu1);
        push(here, ServingWriteback { waiting: k - 1 }, q * mu1);
    }
    for j in 0..=max_waiting {
        let here = ServingWriteback { waiting: j };
        let thinkers = match owner {
            WritebackOwner::Computing => n - j,
            WritebackOwner::Held => n - 1 - j,
        };
        if thinkers > 0 {
            push(
                here,
                ServingWriteback { waiting: j + 1 },
                thinkers as f64 * lambda,
            );
        }
        let after = if j > 0 {
            ServingBlocking { blocked: j }
        } else {
            Idle
        };
        push(here, after, mu2);
    }

    Ok(PriorityChain {
        owner,
        states,
        transitions,
    })
}

/// Number of states the builder produces for `n` processors.
pub fn state_count(n: usize, owner: WritebackOwner) -> usize {
    match owner {
        WritebackOwner::Computing => 2 * n + 2,
        WritebackOwner::Held => 2 * n + 1,
    }
}

/// Average number of blocked processors.
pub fn anbc(pi: &StationaryDistribution, chain: &PriorityChain) -> f64 {
    crate::ctmc::expect(pi, &chain.states, |s| s.blocked(chain.owner) as f64)
}

/// Probabilities of the bus serving a blocking request and a write-back.
pub fn service_probabilities(pi: &StationaryDistribution, chain: &PriorityChain) -> (f64, f64) {
    let mut blocking = 0.0;
    let mut writeback = 0.0;
    for (p, s) in pi.probs().iter().zip(chain.states.states()) {
        match s {
            PriorityState::ServingBlocking { .. } => blocking += p,
            PriorityState::ServingWriteback { .. } => writeback += p,
            PriorityState::Idle => {}
        }
    }
    (blocking, writeback)
}

pub fn flow_balance_residuals(
    pi: &StationaryDistribution,
    chain: &PriorityChain,
    params: &ModelParams,
) -> Result<FlowBalance, ChainError> {
    let (blocking, writeback) = service_probabilities(pi, chain);
    FlowBalance::compute(params, anbc(pi, chain), blocking, writeback)
}
