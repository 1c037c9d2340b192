//! Continuous-time Markov chain assembly and solution.
//!
//! A [`Generator`] stores only the off-diagonal rates in compressed rows; the
//! diagonal is implicit and equals minus the row's exit rate, so every row sums
//! to zero by construction.
//!
//! Stationary vectors come from one of two routes that are kept independent of
//! each other so they can cross-check:
//!
//! * [`stationary_direct`]: Grassmann-Taksar-Heyman elimination on a sparse
//!   copy of the generator. It never subtracts, which keeps small
//!   probabilities accurate to full relative precision.
//! * [`stationary_iterative`]: power iteration on the uniformized matrix
//!   `P = I + Q / Λ`, stopped on the residual `‖πQ‖∞`.
//!
//! Transient vectors use uniformization with Poisson weights, split into
//! chunks so the weights never underflow for long horizons.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::{BuildHasherDefault, Hash};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CtmcError {
    #[error("transition references unknown state {0}")]
    UnknownState(String),
    #[error("transition {from} -> {to} has non-positive rate {rate}")]
    NonPositiveRate { from: usize, to: usize, rate: f64 },
    #[error("self-transition on state {0}")]
    SelfLoop(usize),
    #[error("duplicate state descriptor {0}")]
    DuplicateState(String),
    #[error("chain has {n} states, above the direct-solve cap of {cap}")]
    TooLargeForDirect { n: usize, cap: usize },
    #[error("chain is reducible: state {state} cannot reach a lower-indexed state")]
    ReducibleChain { state: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("invalid initial distribution: {0}")]
    InvalidInitial(String),
    #[error("empty state space")]
    Empty,
}

/// Ordered collection of unique state descriptors with dense indices.
#[derive(Debug, Clone)]
pub struct StateSpace<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
}

impl<S: Clone + Eq + Hash> Default for StateSpace<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Clone + Eq + Hash> StateSpace<S> {
    pub fn new() -> Self {
        StateSpace {
            states: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_states(states: impl IntoIterator<Item = S>) -> Result<Self, CtmcError>
    where
        S: Debug,
    {
        let mut space = Self::new();
        for s in states {
            let (_, fresh) = space.insert(s.clone());
            if !fresh {
                return Err(CtmcError::DuplicateState(format!("{s:?}")));
            }
        }
        Ok(space)
    }

    /// Index of `s`, adding it if absent. The flag is true when `s` was new.
    pub fn insert(&mut self, s: S) -> (usize, bool) {
        if let Some(&i) = self.index.get(&s) {
            return (i, false);
        }
        let i = self.states.len();
        self.index.insert(s.clone(), i);
        self.states.push(s);
        (i, true)
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }
}

impl<S> StateSpace<S> {
    pub fn get(&self, i: usize) -> Option<&S> {
        self.states.get(i)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.states.iter()
    }
}

/// Sparse infinitesimal generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    rates: Vec<f64>,
    exit: Vec<f64>,
}

impl Generator {
    /// Builds a generator from index-based transitions, summing parallel edges.
    pub fn from_indexed(
        n: usize,
        transitions: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, CtmcError> {
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        for (from, to, rate) in transitions {
            if from >= n {
                return Err(CtmcError::UnknownState(format!("index {from}")));
            }
            if to >= n {
                return Err(CtmcError::UnknownState(format!("index {to}")));
            }
            if from == to {
                return Err(CtmcError::SelfLoop(from));
            }
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(CtmcError::NonPositiveRate { from, to, rate });
            }
            edges.push((from, to, rate));
        }
        // Stable sort keeps summation order of parallel edges deterministic.
        edges.sort_by_key(|&(f, t, _)| (f, t));

        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(edges.len());
        let mut rates: Vec<f64> = Vec::with_capacity(edges.len());
        let mut last: Option<(usize, usize)> = None;
        for (from, to, rate) in edges {
            if last == Some((from, to)) {
                *rates.last_mut().expect("previous edge") += rate;
            } else {
                cols.push(to);
                rates.push(rate);
                row_ptr[from + 1] += 1;
                last = Some((from, to));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let exit = (0..n)
            .map(|i| rates[row_ptr[i]..row_ptr[i + 1]].iter().sum())
            .collect();
        Ok(Generator {
            row_ptr,
            cols,
            rates,
            exit,
        })
    }

    pub fn dim(&self) -> usize {
        self.exit.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Off-diagonal entries of row `i` as `(column, rate)`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.rates[span].iter().copied())
    }

    /// Total rate out of state `i` (minus the diagonal entry).
    pub fn exit_rate(&self, i: usize) -> f64 {
        self.exit[i]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.exit.iter().cloned().fold(0.0, f64::max)
    }

    /// Entry `Q[i][j]`, including the implicit diagonal.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return -self.exit[i];
        }
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, r)| r)
    }

    /// Sum of row `i` including the diagonal.
    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, r)| r).sum::<f64>() - self.exit[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut q = vec![vec![0.0; n]; n];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, r) in self.row(i) {
                row[j] = r;
            }
            row[i] = -self.exit[i];
        }
        q
    }

    /// `out = v · P` for the uniformized matrix `P = I + Q / lambda`.
    fn uniformized_step(&self, v: &[f64], lambda: f64, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = v[j] * (1.0 - self.exit[j] / lambda);
        }
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let scaled = vi / lambda;
            for (j, r) in self.row(i) {
                out[j] += scaled * r;
            }
        }
    }
}

/// Assembles a generator from descriptor-based transitions.
pub fn assemble<S: Clone + Eq + Hash + Debug>(
    states: &StateSpace<S>,
    transitions: impl IntoIterator<Item = (S, S, f64)>,
) -> Result<Generator, CtmcError> {
    let mut indexed = Vec::new();
    for (from, to, rate) in transitions {
        let f = states
            .index_of(&from)
            .ok_or_else(|| CtmcError::UnknownState(format!("{from:?}")))?;
        let t = states
            .index_of(&to)
            .ok_or_else(|| CtmcError::UnknownState(format!("{to:?}")))?;
        indexed.push((f, t, rate));
    }
    Generator::from_indexed(states.len(), indexed)
}

/// `‖πQ‖∞`.
pub fn residual(g: &Generator, pi: &[f64]) -> f64 {
    let mut flow: Vec<f64> = pi.iter().zip(&g.exit).map(|(p, e)| -p * e).collect();
    for (i, &pi_i) in pi.iter().enumerate() {
        for (j, r) in g.row(i) {
            flow[j] += pi_i * r;
        }
    }
    flow.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Iterative,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Direct => "direct",
            SolveMethod::Iterative => "iterative",
        }
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" | "gth" => Ok(SolveMethod::Direct),
            "iterative" | "power" => Ok(SolveMethod::Iterative),
            other => Err(format!(
                "unknown method '{other}' (expected direct or iterative)"
            )),
        }
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Largest chain handed to the direct solver.
    pub direct_cap: usize,
    /// Residual target `‖πQ‖∞` for the iterative solver.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Uniformization constant as a multiple of the largest exit rate.
    pub uniformization_factor: f64,
    /// Iterations between residual evaluations.
    pub check_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            direct_cap: 5000,
            tolerance: 1e-12,
            max_iterations: 10_000_000,
            uniformization_factor: 1.01,
            check_every: 10,
        }
    }
}

/// Equilibrium probability vector plus solver metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    probs: Vec<f64>,
    residual: f64,
    method: SolveMethod,
    iterations: usize,
}

impl StationaryDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn method(&self) -> SolveMethod {
        self.method
    }

    /// Zero for direct solves.
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

type DetMap = HashMap<usize, f64, BuildHasherDefault<DefaultHasher>>;

/// GTH elimination. States are eliminated from the highest index down, so
/// every state must be able to reach state 0 (the builders put the empty or
/// idle state first).
pub fn stationary_direct(
    g: &Generator,
    opts: &SolverOptions,
) -> Result<StationaryDistribution, CtmcError> {
    let n = g.dim();
    if n == 0 {
        return Err(CtmcError::Empty);
    }
    if n > opts.direct_cap {
        return Err(CtmcError::TooLargeForDirect {
            n,
            cap: opts.direct_cap,
        });
    }

    let mut rows: Vec<DetMap> = (0..n).map(|i| g.row(i).collect()).collect();
    let mut col_pattern: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for (j, _) in g.row(i) {
            col_pattern[j].push(i);
        }
    }

    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut pivots = vec![0.0; n];
    for k in (1..n).rev() {
        let mut out: Vec<(usize, f64)> = rows[k]
            .iter()
            .filter(|(&j, _)| j < k)
            .map(|(&j, &r)| (j, r))
            .collect();
        out.sort_unstable_by_key(|&(j, _)| j);
        let pivot: f64 = out.iter().map(|&(_, r)| r).sum();
        if pivot <= 0.0 {
            return Err(CtmcError::ReducibleChain { state: k });
        }

        let mut ins: Vec<(usize, f64)> = std::mem::take(&mut col_pattern[k])
            .into_iter()
            .filter(|&i| i < k)
            .filter_map(|i| rows[i].remove(&k).map(|a| (i, a)))
            .collect();
        ins.sort_unstable_by_key(|&(i, _)| i);

        for &(i, a) in &ins {
            let scale = a / pivot;
            for &(j, b) in &out {
                if j == i {
                    continue;
                }
                let entry = rows[i].entry(j).or_insert_with(|| {
                    col_pattern[j].push(i);
                    0.0
                });
                *entry += scale * b;
            }
        }
        rows[k] = DetMap::default();
        incoming[k] = ins;
        pivots[k] = pivot;
    }

    let mut probs = vec![0.0; n];
    probs[0] = 1.0;
    for k in 1..n {
        let inflow: f64 = incoming[k].iter().map(|&(i, a)| probs[i] * a).sum();
        probs[k] = inflow / pivots[k];
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let residual = residual(g, &probs);
    Ok(StationaryDistribution {
        probs,
        residual,
        method: SolveMethod::Direct,
        iterations: 0,
    })
}

/// Power iteration on the uniformized chain until `‖πQ‖∞ ≤ opts.tolerance`.
pub fn stationary_iterative(
    g: &Generator,
    opts: &SolverOptions,
) -> Result<StationaryDistribution, CtmcError> {
    let n = g.dim();
    if n == 0 {
        return Err(CtmcError::Empty);
    }
    let max_exit = g.max_exit_rate();
    if max_exit == 0.0 {
        if n == 1 {
            return Ok(StationaryDistribution {
                probs: vec![1.0],
                residual: 0.0,
                method: SolveMethod::Iterative,
                iterations: 0,
            });
        }
        return Err(CtmcError::ReducibleChain { state: 0 });
    }
    let lambda = opts.uniformization_factor * max_exit;
    let check_every = opts.check_every.max(1);

    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut last_residual = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        g.uniformized_step(&pi, lambda, &mut next);
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        std::mem::swap(&mut pi, &mut next);
        if it % check_every == 0 {
            last_residual = residual(g, &pi);
            if last_residual <= opts.tolerance {
                return Ok(StationaryDistribution {
                    probs: pi,
                    residual: last_residual,
                    method: SolveMethod::Iterative,
                    iterations: it,
                });
            }
        }
    }
    Err(CtmcError::NoConvergence {
        iterations: opts.max_iterations,
        residual: last_residual,
    })
}

/// Dispatches to the requested stationary solver.
pub fn stationary(
    g: &Generator,
    method: SolveMethod,
    opts: &SolverOptions,
) -> Result<StationaryDistribution, CtmcError> {
    match method {
        SolveMethod::Direct => stationary_direct(g, opts),
        SolveMethod::Iterative => stationary_iterative(g, opts),
    }
}

/// Largest Poisson mean handled in a single uniformization chunk.
const MAX_CHUNK_MASS: f64 = 50.0;

/// Default truncation bound for [`transient`].
pub const TRANSIENT_TOLERANCE: f64 = 1e-10;

/// `π(t) = π0 · exp(Qt)` by uniformization, with total truncation error at
/// most `tol` in the 1-norm.
pub fn transient(g: &Generator, pi0: &[f64], t: f64, tol: f64) -> Result<Vec<f64>, CtmcError> {
    if pi0.len() != g.dim() {
        return Err(CtmcError::InvalidInitial(format!(
            "length {} does not match {} states",
            pi0.len(),
            g.dim()
        )));
    }
    if pi0.iter().any(|&x| x.is_nan() || x < 0.0) {
        return Err(CtmcError::InvalidInitial("negative or NaN entry".into()));
    }
    let mass: f64 = pi0.iter().sum();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(CtmcError::InvalidInitial(format!("entries sum to {mass}")));
    }
    if t < 0.0 || t.is_nan() {
        return Err(CtmcError::NegativeTime(t));
    }
    let max_exit = g.max_exit_rate();
    if t == 0.0 || max_exit == 0.0 {
        return Ok(pi0.to_vec());
    }

    let lambda = 1.01 * max_exit;
    let total = lambda * t;
    let chunks = (total / MAX_CHUNK_MASS).ceil().max(1.0);
    let x = total / chunks;
    let eps = tol / chunks;

    let mut v = pi0.to_vec();
    let mut term = vec![0.0; v.len()];
    let mut scratch = vec![0.0; v.len()];
    for _ in 0..chunks as u64 {
        let mut weight = (-x).exp();
        term.copy_from_slice(&v);
        let mut acc: Vec<f64> = v.iter().map(|p| weight * p).collect();
        let mut k = 0u64;
        loop {
            g.uniformized_step(&term, lambda, &mut scratch);
            std::mem::swap(&mut term, &mut scratch);
            k += 1;
            weight *= x / k as f64;
            for (a, p) in acc.iter_mut().zip(&term) {
                *a += weight * p;
            }
            let ratio = x / (k + 1) as f64;
            // Poisson tail beyond k is bounded by a geometric series once k > x.
            if ratio < 1.0 && weight * ratio / (1.0 - ratio) <= eps {
                break;
            }
        }
        v = acc;
    }
    Ok(v)
}

/// `Σ π_i f(state_i)`.
pub fn expect<S>(
    pi: &StationaryDistribution,
    states: &StateSpace<S>,
    f: impl Fn(&S) -> f64,
) -> f64 {
    pi.probs()
        .iter()
        .zip(states.states())
        .map(|(p, s)| p * f(s))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_flop(a: f64, b: f64) -> Generator {
        Generator::from_indexed(2, [(0, 1, a), (1, 0, b)]).unwrap()
    }

    // Hand-written N=1 priority chain: Idle, SB1, SW0, SW1.
    fn single_processor_chain() -> Generator {
        let (l, mu1, mu2, p) = (0.001, 0.1, 0.01, 0.8);
        let q = 1.0 - p;
        Generator::from_indexed(
            4,
            [
                (0, 1, l),
                (1, 0, p * mu1),
                (1, 2, q * mu1),
                (2, 3, l),
                (2, 0, mu2),
                (3, 1, mu2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flip_flop_generator() {
        let g = flip_flop(1.0, 2.0);
        assert_eq!(g.to_dense(), vec![vec![-1.0, 1.0], vec![2.0, -2.0]]);
    }

    #[test]
    fn parallel_edges_are_summed() {
        let g = Generator::from_indexed(2, [(0, 1, 0.3), (0, 1, 0.2), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.nnz(), 2);
        assert!((g.rate(0, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_transitions() {
        assert_eq!(
            Generator::from_indexed(2, [(0, 0, 1.0)]).unwrap_err(),
            CtmcError::SelfLoop(0)
        );
        assert!(matches!(
            Generator::from_indexed(2, [(0, 1, 0.0)]),
            Err(CtmcError::NonPositiveRate { .. })
        ));
        assert!(matches!(
            Generator::from_indexed(2, [(0, 2, 1.0)]),
            Err(CtmcError::UnknownState(_))
        ));
        let space = StateSpace::from_states(["a", "b"]).unwrap();
        assert!(matches!(
            assemble(&space, [("a", "c", 1.0)]),
            Err(CtmcError::UnknownState(_))
        ));
        assert!(matches!(
            StateSpace::from_states(["a", "a"]),
            Err(CtmcError::DuplicateState(_))
        ));
    }

    #[test]
    fn assemble_by_descriptor() {
        let space = StateSpace::from_states(["A", "B"]).unwrap();
        let g = assemble(&space, [("A", "B", 1.0), ("B", "A", 2.0)]).unwrap();
        assert_eq!(g, flip_flop(1.0, 2.0));
        for i in 0..2 {
            assert!(g.row_sum(i).abs() <= 1e-12);
        }
    }

    #[test]
    fn flip_flop_stationary() {
        let g = flip_flop(1.0, 2.0);
        let opts = SolverOptions::default();
        for pi in [
            stationary_direct(&g, &opts).unwrap(),
            stationary_iterative(&g, &opts).unwrap(),
        ] {
            assert!((pi.prob(0) - 2.0 / 3.0).abs() < 1e-12);
            assert!((pi.prob(1) - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_chain() {
        let g = Generator::from_indexed(1, []).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(stationary_direct(&g, &opts).unwrap().probs(), &[1.0]);
        assert_eq!(stationary_iterative(&g, &opts).unwrap().probs(), &[1.0]);
    }

    #[test]
    fn single_processor_hand_solution() {
        let pi = stationary_direct(&single_processor_chain(), &SolverOptions::default()).unwrap();
        let unnormalized = [1.0, 0.01018519, 0.01851852, 0.00185185];
        let total: f64 = unnormalized.iter().sum();
        for (i, u) in unnormalized.iter().enumerate() {
            // Hand values carry 8 decimals.
            assert!(
                (pi.prob(i) * total - u).abs() < 1e-8,
                "state {i}: {}",
                pi.prob(i) * total
            );
        }
        assert!(pi.residual() <= 1e-12);
        let states = StateSpace::from_states([0usize, 1, 0, 1].into_iter().enumerate()).unwrap();
        let anbc = expect(&pi, &states, |&(_, blocked)| blocked as f64);
        assert!((anbc - 0.01168013).abs() < 2e-8, "{anbc}");
    }

    #[test]
    fn expect_of_constants() {
        let pi = stationary_direct(&flip_flop(1.0, 3.0), &SolverOptions::default()).unwrap();
        let states = StateSpace::from_states([0u8, 1]).unwrap();
        assert!((expect(&pi, &states, |_| 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(expect(&pi, &states, |_| 0.0), 0.0);
    }

    #[test]
    fn direct_cap_and_reducibility() {
        let g = flip_flop(1.0, 1.0);
        let opts = SolverOptions {
            direct_cap: 1,
            ..SolverOptions::default()
        };
        assert_eq!(
            stationary_direct(&g, &opts).unwrap_err(),
            CtmcError::TooLargeForDirect { n: 2, cap: 1 }
        );
        // state 1 is absorbing
        let g = Generator::from_indexed(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            stationary_direct(&g, &SolverOptions::default()).unwrap_err(),
            CtmcError::ReducibleChain { state: 1 }
        );
    }

    #[test]
    fn iterative_reports_non_convergence() {
        let g = single_processor_chain();
        let opts = SolverOptions {
            max_iterations: 20,
            ..SolverOptions::default()
        };
        assert!(matches!(
            stationary_iterative(&g, &opts),
            Err(CtmcError::NoConvergence { iterations: 20, .. })
        ));
    }

    #[test]
    fn transient_basics() {
        let g = flip_flop(1.0, 1.0);
        assert_eq!(
            transient(&g, &[1.0, 0.0], 0.0, 1e-10).unwrap(),
            vec![1.0, 0.0]
        );
        let late = transient(&g, &[1.0, 0.0], 50.0, 1e-10).unwrap();
        assert!((late[0] - 0.5).abs() < 1e-8 && (late[1] - 0.5).abs() < 1e-8);
        // exact: p0(t) = 1/2 + e^{-2t}/2
        let mid = transient(&g, &[1.0, 0.0], 0.7, 1e-12).unwrap();
        assert!((mid[0] - (0.5 + 0.5 * (-1.4f64).exp())).abs() < 1e-11);
        assert_eq!(
            transient(&g, &[1.0, 0.0], -1.0, 1e-10),
            Err(CtmcError::NegativeTime(-1.0))
        );
        assert!(transient(&g, &[0.7, 0.7], 1.0, 1e-10).is_err());
    }

    #[test]
    fn transient_reaches_equilibrium() {
        let g = single_processor_chain();
        let pi = stationary_direct(&g, &SolverOptions::default()).unwrap();
        let mut previous = f64::INFINITY;
        let mut t = 100.0;
        while t <= 1e6 {
            let v = transient(&g, &[1.0, 0.0, 0.0, 0.0], t, 1e-14).unwrap();
            let sum: f64 = v.iter().sum();
            assert!(v.iter().all(|&x| x >= 0.0) && (sum - 1.0).abs() <= 1e-10);
            let dist = v
                .iter()
                .zip(pi.probs())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            // slack covers truncation and rounding once the distance hits its floor
            assert!(dist <= previous + 1e-13, "t={t}: {dist} > {previous}");
            previous = dist;
            t *= 2.0;
        }
        assert!(previous < 1e-8);
        let v = transient(&g, &[1.0, 0.0, 0.0, 0.0], 1e6, TRANSIENT_TOLERANCE).unwrap();
        assert!(v.iter().zip(pi.probs()).all(|(a, b)| (a - b).abs() < 1e-8));
    }
}
