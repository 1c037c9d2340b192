//! Markov chain for the FCFS discipline: write-backs join the tail of the
//! single bus queue, so the state must record the exact interleaving of
//! blocking requests and write-backs.
//!
//! The state space is the breadth-first closure from the empty queue. Its size
//! grows roughly 3.4x per added processor.

use std::collections::VecDeque;
use std::fmt;

use crate::analytic::{exponential_rates, ChainError};
use crate::ctmc::{Generator, StateSpace, StationaryDistribution};
use crate::model::ModelParams;

/// Longest queue representable by [`QueueState`].
pub const MAX_QUEUE_LEN: usize = 64;

/// Default limit on the number of reachable states (the full space for N = 10).
pub const DEFAULT_STATE_CAP: usize = 208_011;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Request {
    Blocking,
    Writeback,
}

/// Bus queue contents, head first. The head is in service.
///
/// Encoded as a length plus a bit pattern where bit `i` is set when position
/// `i` holds a write-back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueueState {
    len: u8,
    bits: u64,
}

impl QueueState {
    pub const EMPTY: QueueState = QueueState { len: 0, bits: 0 };

    pub fn from_requests(requests: &[Request]) -> Self {
        requests.iter().fold(Self::EMPTY, |s, &r| s.push_back(r))
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn writebacks(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn blocking(self) -> usize {
        self.len() - self.writebacks()
    }

    pub fn head(self) -> Option<Request> {
        (self.len > 0).then(|| self.at(0))
    }

    fn at(self, i: usize) -> Request {
        if self.bits >> i & 1 == 1 {
            Request::Writeback
        } else {
            Request::Blocking
        }
    }

    pub fn requests(self) -> impl Iterator<Item = Request> {
        (0..self.len()).map(move |i| self.at(i))
    }

    /// Panics if the queue is already [`MAX_QUEUE_LEN`] long.
    pub fn push_back(self, r: Request) -> Self {
        assert!(self.len() < MAX_QUEUE_LEN, "queue encoding overflow");
        let bit = match r {
            Request::Writeback => 1u64 << self.len,
            Request::Blocking => 0,
        };
        QueueState {
            len: self.len + 1,
            bits: self.bits | bit,
        }
    }

    pub fn pop_front(self) -> Self {
        match self.len {
            0 => self,
            _ => QueueState {
                len: self.len - 1,
                bits: self.bits >> 1,
            },
        }
    }
}

impl fmt::Display for QueueState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.requests().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(match r {
                Request::Blocking => "B",
                Request::Writeback => "W",
            })?;
        }
        f.write_str("]")
    }
}

/// Outgoing transitions of `s`.
pub fn transitions(
    s: QueueState,
    params: &ModelParams,
) -> Result<Vec<(QueueState, f64)>, ChainError> {
    let (mu1, mu2) = exponential_rates(params)?;
    let n = params.n_processors();
    let mut out = Vec::with_capacity(3);
    let blocked = s.blocking();
    if blocked < n {
        out.push((
            s.push_back(Request::Blocking),
            (n - blocked) as f64 * params.think_rate(),
        ));
    }
    match s.head() {
        Some(Request::Blocking) => {
            let rest = s.pop_front();
            let p = params.resume_prob();
            let q = params.writeback_prob();
            if p > 0.0 {
                out.push((rest, p * mu1));
            }
            if q > 0.0 {
                out.push((rest.push_back(Request::Writeback), q * mu1));
            }
        }
        Some(Request::Writeback) => out.push((s.pop_front(), mu2)),
        None => {}
    }
    Ok(out)
}

/// State space and generator of the FCFS chain. State 0 is the empty queue.
#[derive(Debug, Clone)]
pub struct FcfsChain {
    pub states: StateSpace<QueueState>,
    pub generator: Generator,
}

pub fn reachable(params: &ModelParams) -> Result<StateSpace<QueueState>, ChainError> {
    Ok(build_with_cap(params, DEFAULT_STATE_CAP)?.states)
}

pub fn build(params: &ModelParams) -> Result<FcfsChain, ChainError> {
    build_with_cap(params, DEFAULT_STATE_CAP)
}

/// Breadth-first closure from the empty queue, failing once more than
/// `max_states` states have been discovered.
pub fn build_with_cap(params: &ModelParams, max_states: usize) -> Result<FcfsChain, ChainError> {
    exponential_rates(params)?;
    let n = params.n_processors();
    if 2 * n > MAX_QUEUE_LEN {
        return Err(ChainError::TooManyProcessors {
            n,
            cap: MAX_QUEUE_LEN / 2,
        });
    }

    let mut states = StateSpace::new();
    let mut edges = Vec::new();
    let mut frontier = VecDeque::new();
    states.insert(QueueState::EMPTY);
    frontier.push_back(QueueState::EMPTY);
    while let Some(s) = frontier.pop_front() {
        let from = states.index_of(&s).expect("discovered state");
        for (target, rate) in transitions(s, params)? {
            if target.writebacks() > n || target.blocking() > n {
                return Err(ChainError::InvariantViolation(format!(
                    "state {target} exceeds N = {n} requests of one class"
                )));
            }
            let (to, fresh) = states.insert(target);
            if fresh {
                if states.len() > max_states {
                    return Err(ChainError::StateSpaceCapExceeded {
                        reached: states.len(),
                        cap: max_states,
                    });
                }
                frontier.push_back(target);
            }
            edges.push((from, to, rate));
        }
    }
    let generator = Generator::from_indexed(states.len(), edges)?;
    Ok(FcfsChain { states, generator })
}

pub fn state_count(params: &ModelParams) -> Result<usize, ChainError> {
    Ok(reachable(params)?.len())
}

/// Expected number of blocking requests in the queue.
pub fn anbc(pi: &StationaryDistribution, chain: &FcfsChain) -> f64 {
    crate::ctmc::expect(pi, &chain.states, |s| s.blocking() as f64)
}

/// Probabilities of the head being a blocking request and a write-back.
pub fn service_probabilities(pi: &StationaryDistribution, chain: &FcfsChain) -> (f64, f64) {
    let mut blocking = 0.0;
    let mut writeback = 0.0;
    for (p, s) in pi.probs().iter().zip(chain.states.states()) {
        match s.head() {
            Some(Request::Blocking) => blocking += p,
            Some(Request::Writeback) => writeback += p,
            None => {}
        }
    }
    (blocking, writeback)
}
