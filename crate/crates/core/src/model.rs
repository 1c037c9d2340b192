//! Model parameters and service-time distributions shared by the analytical
//! chains and the simulator.
//!
//! All rates are per time unit (t.u.) and all durations are in t.u.

use std::fmt;

use thiserror::Error;

/// Tolerance on the sum of hyperexponential branch weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// A single violated parameter constraint.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamViolation {
    #[error("number of processors must be at least 1")]
    ZeroProcessors,
    #[error("{what} must be strictly positive and finite, got {value}")]
    NonPositiveRate { what: String, value: f64 },
    #[error("{what} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { what: String, value: f64 },
    #[error("{what}: {reason}")]
    MalformedService { what: String, reason: String },
}

/// Every constraint violated by a candidate parameter set.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid model parameters: {}", join_violations(.0))]
pub struct ValidationError(pub Vec<ParamViolation>);

fn join_violations(v: &[ParamViolation]) -> String {
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ValidationError {
    pub fn violations(&self) -> &[ParamViolation] {
        &self.0
    }
}

/// Service-time distribution of a bus transaction.
#[derive(Debug, Clone, PartialEq)]
pub enum ServiceSpec {
    Exponential { rate: f64 },
    Deterministic { duration: f64 },
    Erlang { shape: u32, rate: f64 },
    HyperExponential { weights: Vec<f64>, rates: Vec<f64> },
}

impl ServiceSpec {
    pub fn exponential(rate: f64) -> Self {
        ServiceSpec::Exponential { rate }
    }

    /// Analytic mean service time.
    pub fn mean(&self) -> f64 {
        match self {
            ServiceSpec::Exponential { rate } => 1.0 / rate,
            ServiceSpec::Deterministic { duration } => *duration,
            ServiceSpec::Erlang { shape, rate } => f64::from(*shape) / rate,
            ServiceSpec::HyperExponential { weights, rates } => {
                weights.iter().zip(rates).map(|(w, r)| w / r).sum()
            }
        }
    }

    /// The rate if this is an exponential distribution.
    pub fn exponential_rate(&self) -> Option<f64> {
        match self {
            ServiceSpec::Exponential { rate } => Some(*rate),
            _ => None,
        }
    }

    fn check(&self, what: &str, out: &mut Vec<ParamViolation>) {
        let positive = |name: String, v: f64, out: &mut Vec<ParamViolation>| {
            if !(v > 0.0 && v.is_finite()) {
                out.push(ParamViolation::NonPositiveRate {
                    what: name,
                    value: v,
                });
            }
        };
        match self {
            ServiceSpec::Exponential { rate } => positive(format!("{what} rate"), *rate, out),
            ServiceSpec::Deterministic { duration } => {
                positive(format!("{what} duration"), *duration, out)
            }
            ServiceSpec::Erlang { shape, rate } => {
                if *shape == 0 {
                    out.push(ParamViolation::MalformedService {
                        what: what.to_string(),
                        reason: "Erlang shape must be at least 1".into(),
                    });
                }
                positive(format!("{what} rate"), *rate, out);
            }
            ServiceSpec::HyperExponential { weights, rates } => {
                if weights.is_empty() || weights.len() != rates.len() {
                    out.push(ParamViolation::MalformedService {
                        what: what.to_string(),
                        reason: format!(
                            "hyperexponential needs matching non-empty weight and rate lists ({} vs {})",
                            weights.len(),
                            rates.len()
                        ),
                    });
                    return;
                }
                for (i, w) in weights.iter().enumerate() {
                    if !(0.0..=1.0).contains(w) {
                        out.push(ParamViolation::ProbabilityOutOfRange {
                            what: format!("{what} weight {i}"),
                            value: *w,
                        });
                    }
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    out.push(ParamViolation::MalformedService {
                        what: what.to_string(),
                        reason: format!("weights sum to {total}, expected 1"),
                    });
                }
                for (i, r) in rates.iter().enumerate() {
                    positive(format!("{what} rate {i}"), *r, out);
                }
            }
        }
    }
}

impl fmt::Display for ServiceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServiceSpec::Exponential { rate } => write!(f, "exp:{rate}"),
            ServiceSpec::Deterministic { duration } => write!(f, "det:{duration}"),
            ServiceSpec::Erlang { shape, rate } => write!(f, "erlang:{shape}:{rate}"),
            ServiceSpec::HyperExponential { weights, rates } => {
                let join = |v: &[f64]| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "hyper:{}:{}", join(weights), join(rates))
            }
        }
    }
}

/// Parse failure for a `kind:args` service string.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("malformed service distribution '{input}': {reason}")]
pub struct ParseServiceError {
    pub input: String,
    pub reason: String,
}

impl std::str::FromStr for ServiceSpec {
    type Err = ParseServiceError;

    /// Accepts `exp:r`, `det:d`, `erlang:k:r` and `hyper:w1,w2,..:r1,r2,..`.
    /// Value constraints are left to [`validate`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| ParseServiceError {
            input: s.to_string(),
            reason,
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| fail(format!("'{t}' is not a number")))
        };
        let list = |t: &str| t.split(',').map(num).collect::<Result<Vec<_>, _>>();
        let parts: Vec<&str> = s.trim().split(':').collect();
        let arity = |n: usize| {
            if parts.len() == n {
                Ok(())
            } else {
                Err(fail(format!("'{}' takes {} field(s)", parts[0], n - 1)))
            }
        };
        match parts[0].to_ascii_lowercase().as_str() {
            "exp" => {
                arity(2)?;
                Ok(ServiceSpec::Exponential {
                    rate: num(parts[1])?,
                })
            }
            "det" => {
                arity(2)?;
                Ok(ServiceSpec::Deterministic {
                    duration: num(parts[1])?,
                })
            }
            "erlang" => {
                arity(3)?;
                let shape = parts[1]
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| fail(format!("'{}' is not a shape", parts[1])))?;
                Ok(ServiceSpec::Erlang {
                    shape,
                    rate: num(parts[2])?,
                })
            }
            "hyper" => {
                arity(3)?;
                Ok(ServiceSpec::HyperExponential {
                    weights: list(parts[1])?,
                    rates: list(parts[2])?,
                })
            }
            other => Err(fail(format!(
                "unknown kind '{other}' (expected exp, det, erlang or hyper)"
            ))),
        }
    }
}

/// Bus service discipline for write-back requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Discipline {
    /// Write-backs join the tail of the single bus queue.
    Fcfs,
    /// A generated write-back seizes the bus right after its parent request.
    Priority,
}

impl Discipline {
    pub const ALL: [Discipline; 2] = [Discipline::Fcfs, Discipline::Priority];

    pub fn as_str(self) -> &'static str {
        match self {
            Discipline::Fcfs => "fcfs",
            Discipline::Priority => "priority",
        }
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Discipline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fcfs" => Ok(Discipline::Fcfs),
            "priority" | "prio" => Ok(Discipline::Priority),
            other => Err(format!(
                "unknown discipline '{other}' (expected fcfs or priority)"
            )),
        }
    }
}

/// Unvalidated model input.
#[derive(Debug, Clone, PartialEq)]
pub struct RawParams {
    pub n_processors: usize,
    pub think_rate: f64,
    pub resume_prob: f64,
    pub blocking_service: ServiceSpec,
    pub writeback_service: ServiceSpec,
}

impl RawParams {
    /// Exponential blocking and write-back services with rates `mu1`, `mu2`.
    pub fn exponential(n: usize, lambda: f64, mu1: f64, mu2: f64, p: f64) -> Self {
        RawParams {
            n_processors: n,
            think_rate: lambda,
            resume_prob: p,
            blocking_service: ServiceSpec::exponential(mu1),
            writeback_service: ServiceSpec::exponential(mu2),
        }
    }
}

/// A validated model instance.
///
/// The write-back probability `q = 1 - p` is always derived from the resume
/// probability and never stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    n_processors: usize,
    think_rate: f64,
    resume_prob: f64,
    blocking_service: ServiceSpec,
    writeback_service: ServiceSpec,
}

impl ModelParams {
    pub fn new(raw: RawParams) -> Result<Self, ValidationError> {
        validate(raw)
    }

    /// Validated exponential instance; panics on invalid input.
    pub fn exponential(n: usize, lambda: f64, mu1: f64, mu2: f64, p: f64) -> Self {
        validate(RawParams::exponential(n, lambda, mu1, mu2, p)).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn n_processors(&self) -> usize {
        self.n_processors
    }

    pub fn think_rate(&self) -> f64 {
        self.think_rate
    }

    pub fn resume_prob(&self) -> f64 {
        self.resume_prob
    }

    pub fn writeback_prob(&self) -> f64 {
        1.0 - self.resume_prob
    }

    pub fn blocking_service(&self) -> &ServiceSpec {
        &self.blocking_service
    }

    pub fn writeback_service(&self) -> &ServiceSpec {
        &self.writeback_service
    }

    /// `(mu1, mu2)` when both services are exponential.
    pub fn exponential_rates(&self) -> Option<(f64, f64)> {
        Some((
            self.blocking_service.exponential_rate()?,
            self.writeback_service.exponential_rate()?,
        ))
    }

    pub fn to_raw(&self) -> RawParams {
        RawParams {
            n_processors: self.n_processors,
            think_rate: self.think_rate,
            resume_prob: self.resume_prob,
            blocking_service: self.blocking_service.clone(),
            writeback_service: self.writeback_service.clone(),
        }
    }

    pub fn with_n(&self, n: usize) -> Result<Self, ValidationError> {
        validate(RawParams {
            n_processors: n,
            ..self.to_raw()
        })
    }

    pub fn with_think_rate(&self, lambda: f64) -> Result<Self, ValidationError> {
        validate(RawParams {
            think_rate: lambda,
            ..self.to_raw()
        })
    }
}

/// Checks every constraint and reports all violations at once.
pub fn validate(raw: RawParams) -> Result<ModelParams, ValidationError> {
    let mut violations = Vec::new();
    if raw.n_processors == 0 {
        violations.push(ParamViolation::ZeroProcessors);
    }
    if !(raw.think_rate > 0.0 && raw.think_rate.is_finite()) {
        violations.push(ParamViolation::NonPositiveRate {
            what: "think rate".into(),
            value: raw.think_rate,
        });
    }
    if !(0.0..=1.0).contains(&raw.resume_prob) {
        violations.push(ParamViolation::ProbabilityOutOfRange {
            what: "resume probability p".into(),
            value: raw.resume_prob,
        });
    }
    raw.blocking_service
        .check("blocking service", &mut violations);
    raw.writeback_service
        .check("write-back service", &mut violations);
    if violations.is_empty() {
        Ok(ModelParams {
            n_processors: raw.n_processors,
            think_rate: raw.think_rate,
            resume_prob: raw.resume_prob,
            blocking_service: raw.blocking_service,
            writeback_service: raw.writeback_service,
        })
    } else {
        Err(ValidationError(violations))
    }
}
