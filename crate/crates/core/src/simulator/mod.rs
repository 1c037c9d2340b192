//! Discrete-event simulation of the bus under either discipline.
//!
//! Each replication starts with every processor computing and an idle bus.
//! Statistics are time-weighted over `[warmup, horizon]`; waits are measured
//! from enqueue to service start and recorded when the request completes
//! inside the window. Replications are independent and aggregated with
//! Student-t intervals.
//!
//! The engine checks two invariants on every event and fails the replication
//! if either breaks: the bus never idles while requests are queued, and no
//! processor ever has more than one blocking request or more than one
//! write-back outstanding.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::fcfs_chain::Request;
use crate::model::{Discipline, ModelParams};

pub mod rng;
pub mod stats;

pub use rng::sample;
pub use stats::{estimate, Estimate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("replication {replication} violated an invariant at t = {time}: {detail}")]
    InvariantViolation {
        replication: usize,
        time: f64,
        detail: String,
    },
}

pub const DEFAULT_HORIZON: f64 = 2e6;
pub const DEFAULT_WARMUP: f64 = 1e5;
pub const DEFAULT_REPLICATIONS: usize = 20;
pub const DEFAULT_CI_LEVEL: f64 = 0.99;
pub const DEFAULT_SEED: u64 = 20_090_501;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub discipline: Discipline,
    pub horizon: f64,
    /// Initial time discarded from every statistic.
    pub warmup: f64,
    pub replications: usize,
    pub base_seed: u64,
    pub ci_level: f64,
}

impl SimConfig {
    /// Config with the default horizon, warmup, replication count, seed and
    /// confidence level.
    pub fn new(params: ModelParams, discipline: Discipline) -> Self {
        SimConfig {
            params,
            discipline,
            horizon: DEFAULT_HORIZON,
            warmup: DEFAULT_WARMUP,
            replications: DEFAULT_REPLICATIONS,
            base_seed: DEFAULT_SEED,
            ci_level: DEFAULT_CI_LEVEL,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!(
                "horizon must be positive and finite, got {}",
                self.horizon
            ));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.horizon) {
            return bad(format!(
                "warmup must lie in [0, horizon), got {} with horizon {}",
                self.warmup, self.horizon
            ));
        }
        if self.replications < 2 {
            return bad(format!(
                "need at least 2 replications, got {}",
                self.replications
            ));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return bad(format!(
                "confidence level must lie in (0, 1), got {}",
                self.ci_level
            ));
        }
        Ok(())
    }

    fn window(&self) -> f64 {
        self.horizon - self.warmup
    }
}

/// Estimates from one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    /// Time-average number of blocked processors (ANBC estimate).
    pub time_avg_blocked: f64,
    /// Fraction of time the bus is busy.
    pub time_avg_busy: f64,
    pub mean_wait_blocking: f64,
    pub mean_wait_writeback: f64,
    pub mean_wait_overall: f64,
    /// Largest single write-back wait observed in the window.
    pub max_wait_writeback: f64,
    pub blocking_completions: u64,
    pub writeback_completions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogEvent {
    ThinkEnd { processor: usize },
    ServiceStart { request: Request, processor: usize },
    ServiceEnd { request: Request, processor: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEntry {
    pub time: f64,
    pub event: LogEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    ThinkEnd(usize),
    ServiceEnd,
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    // Reversed so the max-heap pops the earliest (time, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    request: Request,
    owner: usize,
    enqueued: f64,
    service: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Processor {
    blocked: bool,
    writeback_outstanding: bool,
}

#[derive(Debug, Default)]
struct Totals {
    blocked_area: f64,
    busy_area: f64,
    wait_blocking: f64,
    wait_writeback: f64,
    max_wait_writeback: f64,
    blocking_completions: u64,
    writeback_completions: u64,
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    replication: usize,
    streams: Vec<ChaCha8Rng>,
    calendar: BinaryHeap<Scheduled>,
    seq: u64,
    now: f64,
    in_service: Option<(Job, f64)>,
    queue: VecDeque<Job>,
    processors: Vec<Processor>,
    blocked: usize,
    totals: Totals,
    log: Option<Vec<LogEntry>>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SimConfig, replication: usize, keep_log: bool) -> Self {
        let n = cfg.params.n_processors();
        let streams = (0..n)
            .map(|p| rng::processor_stream(cfg.base_seed, replication as u64, p as u64))
            .collect();
        Engine {
            cfg,
            replication,
            streams,
            calendar: BinaryHeap::with_capacity(n + 1),
            seq: 0,
            now: 0.0,
            in_service: None,
            queue: VecDeque::with_capacity(2 * n),
            processors: vec![Processor::default(); n],
            blocked: 0,
            totals: Totals::default(),
            log: keep_log.then(Vec::new),
        }
    }

    fn schedule(&mut self, time: f64, event: Event) {
        self.seq += 1;
        self.calendar.push(Scheduled {
            time,
            seq: self.seq,
            event,
        });
    }

    fn record(&mut self, event: LogEvent) {
        if let Some(log) = &mut self.log {
            log.push(LogEntry {
                time: self.now,
                event,
            });
        }
    }

    fn violation(&self, detail: String) -> SimError {
        SimError::InvariantViolation {
            replication: self.replication,
            time: self.now,
            detail,
        }
    }

    /// Integrates the time-weighted metrics up to `t`.
    fn advance(&mut self, t: f64) {
        let from = self.now.max(self.cfg.warmup);
        let to = t.min(self.cfg.horizon);
        if to > from {
            let span = to - from;
            self.totals.blocked_area += self.blocked as f64 * span;
            if self.in_service.is_some() {
                self.totals.busy_area += span;
            }
        }
        self.now = t;
    }

    fn start(&mut self, job: Job) {
        self.in_service = Some((job, self.now));
        self.record(LogEvent::ServiceStart {
            request: job.request,
            processor: job.owner,
        });
        self.schedule(self.now + job.service, Event::ServiceEnd);
    }

    fn dispatch(&mut self) {
        if self.in_service.is_none() {
            if let Some(job) = self.queue.pop_front() {
                self.start(job);
            }
        }
    }

    fn think(&mut self, processor: usize) {
        let delay = rng::exponential(&mut self.streams[processor], self.cfg.params.think_rate());
        self.schedule(self.now + delay, Event::ThinkEnd(processor));
    }

    fn on_think_end(&mut self, owner: usize) -> Result<(), SimError> {
        self.record(LogEvent::ThinkEnd { processor: owner });
        if self.processors[owner].blocked {
            return Err(self.violation(format!(
                "processor {owner} issued a second blocking request"
            )));
        }
        self.processors[owner].blocked = true;
        self.blocked += 1;
        let service = sample(self.cfg.params.blocking_service(), &mut self.streams[owner]);
        self.queue.push_back(Job {
            request: Request::Blocking,
            owner,
            enqueued: self.now,
            service,
        });
        self.dispatch();
        Ok(())
    }

    fn on_service_end(&mut self) -> Result<(), SimError> {
        let (job, started) = self
            .in_service
            .take()
            .ok_or_else(|| self.violation("service completion on an idle bus".into()))?;
        self.record(LogEvent::ServiceEnd {
            request: job.request,
            processor: job.owner,
        });
        let wait = started - job.enqueued;
        let counted = self.now >= self.cfg.warmup;
        let owner = job.owner;
        match job.request {
            Request::Blocking => {
                if counted {
                    self.totals.blocking_completions += 1;
                    self.totals.wait_blocking += wait;
                }
                self.processors[owner].blocked = false;
                self.blocked -= 1;
                let coin: f64 = rand::Rng::random(&mut self.streams[owner]);
                self.think(owner);
                if coin < self.cfg.params.writeback_prob() {
                    if self.processors[owner].writeback_outstanding {
                        return Err(self.violation(format!(
                            "processor {owner} has two write-backs outstanding"
                        )));
                    }
                    self.processors[owner].writeback_outstanding = true;
                    let service = sample(
                        self.cfg.params.writeback_service(),
                        &mut self.streams[owner],
                    );
                    let wb = Job {
                        request: Request::Writeback,
                        owner,
                        enqueued: self.now,
                        service,
                    };
                    match self.cfg.discipline {
                        Discipline::Priority => self.start(wb),
                        Discipline::Fcfs => self.queue.push_back(wb),
                    }
                }
            }
            Request::Writeback => {
                if counted {
                    self.totals.writeback_completions += 1;
                    self.totals.wait_writeback += wait;
                    self.totals.max_wait_writeback = self.totals.max_wait_writeback.max(wait);
                }
                self.processors[owner].writeback_outstanding = false;
            }
        }
        self.dispatch();
        Ok(())
    }

    fn run(mut self) -> Result<(ReplicationStats, Option<Vec<LogEntry>>), SimError> {
        for p in 0..self.processors.len() {
            self.think(p);
        }
        while let Some(next) = self.calendar.pop() {
            if next.time > self.cfg.horizon {
                break;
            }
            self.advance(next.time);
            match next.event {
                Event::ThinkEnd(p) => self.on_think_end(p)?,
                Event::ServiceEnd => self.on_service_end()?,
            }
            if self.in_service.is_none() && !self.queue.is_empty() {
                return Err(self.violation(format!(
                    "bus idle with {} queued requests",
                    self.queue.len()
                )));
            }
        }
        self.advance(self.cfg.horizon);

        let window = self.cfg.window();
        let t = &self.totals;
        let mean = |total: f64, count: u64| if count > 0 { total / count as f64 } else { 0.0 };
        let stats = ReplicationStats {
            time_avg_blocked: t.blocked_area / window,
            time_avg_busy: t.busy_area / window,
            mean_wait_blocking: mean(t.wait_blocking, t.blocking_completions),
            mean_wait_writeback: mean(t.wait_writeback, t.writeback_completions),
            mean_wait_overall: mean(
                t.wait_blocking + t.wait_writeback,
                t.blocking_completions + t.writeback_completions,
            ),
            max_wait_writeback: t.max_wait_writeback,
            blocking_completions: t.blocking_completions,
            writeback_completions: t.writeback_completions,
        };
        Ok((stats, self.log))
    }
}

/// Simulates one replication; deterministic in `(config, replication)`.
pub fn run_replication(
    config: &SimConfig,
    replication: usize,
) -> Result<ReplicationStats, SimError> {
    config.validate()?;
    Ok(Engine::new(config, replication, false).run()?.0)
}

/// Like [`run_replication`], also returning the full event log.
pub fn run_replication_logged(
    config: &SimConfig,
    replication: usize,
) -> Result<(ReplicationStats, Vec<LogEntry>), SimError> {
    config.validate()?;
    let (stats, log) = Engine::new(config, replication, true).run()?;
    Ok((stats, log.unwrap_or_default()))
}

/// Replication-averaged estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimAggregate {
    pub config: SimConfig,
    pub anbc: Estimate,
    pub anpec: Estimate,
    pub utilization: Estimate,
    pub mean_wait_blocking: Estimate,
    pub mean_wait_writeback: Estimate,
    pub mean_wait_overall: Estimate,
    pub blocking_completions: Estimate,
    pub writeback_completions: Estimate,
    pub replications: Vec<ReplicationStats>,
}

impl SimAggregate {
    /// `(name, estimate)` pairs in a fixed order.
    pub fn metrics(&self) -> [(&'static str, Estimate); 8] {
        [
            ("anbc", self.anbc),
            ("anpec", self.anpec),
            ("utilization", self.utilization),
            ("mean_wait_blocking", self.mean_wait_blocking),
            ("mean_wait_writeback", self.mean_wait_writeback),
            ("mean_wait_overall", self.mean_wait_overall),
            ("blocking_completions", self.blocking_completions),
            ("writeback_completions", self.writeback_completions),
        ]
    }
}

/// Runs all replications (in parallel when a rayon pool is available) and
/// aggregates them in replication order.
pub fn run(config: &SimConfig) -> Result<SimAggregate, SimError> {
    config.validate()?;
    let replications = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(config, replications))
}

fn aggregate(config: &SimConfig, replications: Vec<ReplicationStats>) -> SimAggregate {
    let level = config.ci_level;
    let n = config.params.n_processors() as f64;
    let of = |f: &dyn Fn(&ReplicationStats) -> f64| {
        let xs: Vec<f64> = replications.iter().map(f).collect();
        estimate(&xs, level)
    };
    SimAggregate {
        config: config.clone(),
        anbc: of(&|r| r.time_avg_blocked),
        anpec: of(&|r| n - r.time_avg_blocked),
        utilization: of(&|r| r.time_avg_busy),
        mean_wait_blocking: of(&|r| r.mean_wait_blocking),
        mean_wait_writeback: of(&|r| r.mean_wait_writeback),
        mean_wait_overall: of(&|r| r.mean_wait_overall),
        blocking_completions: of(&|r| r.blocking_completions as f64),
        writeback_completions: of(&|r| r.writeback_completions as f64),
        replications,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RawParams, ServiceSpec};

    fn config(n: usize, lambda: f64, discipline: Discipline) -> SimConfig {
        SimConfig {
            horizon: 2e5,
            warmup: 1e4,
            replications: 4,
            ..SimConfig::new(
                ModelParams::exponential(n, lambda, 0.1, 0.01, 0.8),
                discipline,
            )
        }
    }

    #[test]
    fn config_validation() {
        let base = config(2, 0.001, Discipline::Fcfs);
        for bad in [
            SimConfig {
                warmup: 3e5,
                ..base.clone()
            },
            SimConfig {
                replications: 1,
                ..base.clone()
            },
            SimConfig {
                ci_level: 1.0,
                ..base.clone()
            },
            SimConfig {
                horizon: f64::INFINITY,
                ..base.clone()
            },
        ] {
            assert!(matches!(
                run_replication(&bad, 0),
                Err(SimError::InvalidConfig(_))
            ));
        }
    }

    #[test]
    fn no_arrivals_means_idle_bus() {
        let cfg = config(4, 1e-12, Discipline::Fcfs);
        let s = run_replication(&cfg, 0).unwrap();
        assert_eq!(s.time_avg_blocked, 0.0);
        assert_eq!(s.time_avg_busy, 0.0);
        assert_eq!(s.blocking_completions, 0);
    }

    #[test]
    fn priority_writebacks_never_wait() {
        for lambda in [0.001, 0.01, 0.05] {
            let cfg = config(6, lambda, Discipline::Priority);
            for r in 0..3 {
                let s = run_replication(&cfg, r).unwrap();
                assert!(s.writeback_completions > 0);
                assert_eq!(s.mean_wait_writeback, 0.0);
                assert_eq!(s.max_wait_writeback, 0.0);
            }
        }
    }

    #[test]
    fn fcfs_writebacks_wait_under_load() {
        let s = run_replication(&config(6, 0.01, Discipline::Fcfs), 0).unwrap();
        assert!(s.mean_wait_writeback > 0.0);
    }

    #[test]
    fn overall_wait_is_completion_weighted() {
        let s = run_replication(&config(5, 0.006, Discipline::Fcfs), 1).unwrap();
        let (nb, nw) = (
            s.blocking_completions as f64,
            s.writeback_completions as f64,
        );
        let expected = (s.mean_wait_blocking * nb + s.mean_wait_writeback * nw) / (nb + nw);
        assert!((s.mean_wait_overall - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn single_processor_logs_coincide() {
        let fcfs = config(1, 0.004, Discipline::Fcfs);
        let prio = config(1, 0.004, Discipline::Priority);
        let (sa, la) = run_replication_logged(&fcfs, 2).unwrap();
        let (sb, lb) = run_replication_logged(&prio, 2).unwrap();
        assert!(la.len() > 1000);
        assert_eq!(la, lb);
        assert_eq!(sa, sb);
    }

    #[test]
    fn replications_are_deterministic() {
        let cfg = config(3, 0.005, Discipline::Fcfs);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
        let other = SimConfig {
            base_seed: 7,
            ..cfg.clone()
        };
        assert_ne!(run(&cfg).unwrap().anbc, run(&other).unwrap().anbc);
    }

    #[test]
    fn general_services_are_accepted() {
        let raw = RawParams {
            blocking_service: ServiceSpec::Deterministic { duration: 10.0 },
            writeback_service: ServiceSpec::HyperExponential {
                weights: vec![0.5, 0.5],
                rates: vec![0.2, 0.05],
            },
            ..RawParams::exponential(4, 0.005, 0.1, 0.01, 0.8)
        };
        let params = ModelParams::new(raw).unwrap();
        let agg = run(&SimConfig {
            horizon: 1e5,
            warmup: 1e4,
            ..SimConfig::new(params, Discipline::Fcfs)
        })
        .unwrap();
        assert!(agg.anbc.mean > 0.0 && agg.anbc.mean < 4.0);
        assert!(agg.utilization.mean > 0.0 && agg.utilization.mean < 1.0);
    }
}
