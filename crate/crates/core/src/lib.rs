//! Closed queueing-network models of a shared-bus multiprocessor with private
//! caches.
//!
//! Processors alternate exponential think phases with blocking coherence
//! requests served by a single bus. A completed request generates a
//! non-blocking write-back with probability `q = 1 - p`. Two bus disciplines
//! are modelled:
//!
//! * FCFS: write-backs join the tail of the bus queue ([`fcfs_chain`]).
//! * Priority: a write-back holds the bus right after its parent request
//!   ([`priority_chain`]).
//!
//! Both are solved exactly as continuous-time Markov chains ([`ctmc`],
//! [`analytic`]) and simulated with general service distributions
//! ([`simulator`]).

pub mod analysis;
pub mod analytic;
pub mod ctmc;
pub mod fcfs_chain;
pub mod model;
pub mod priority_chain;
pub mod reference;
pub mod simulator;

pub use analytic::{solve, AnalyticOptions, AnalyticSolution, ChainError, FlowBalance};
pub use ctmc::{SolveMethod, SolverOptions};
pub use model::{Discipline, ModelParams, ParseServiceError, RawParams, ServiceSpec};
