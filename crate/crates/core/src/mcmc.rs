//! Swap-chain sampler over loopy graphs with a fixed degree sequence.
//!
//! Each step proposes, with probability `epsilon`, a triangle-loop swap on
//! three uniformly drawn distinct edges, and otherwise a double swap on two
//! uniformly drawn distinct edges with a uniformly drawn pairing. Invalid
//! proposals leave the graph unchanged.
//!
//! A double swap that takes one loop and one plain edge reaches its target
//! under both pairings, while the reverse move reaches it under only one.
//! Accepting such swaps with probability 1/2 balances the kernel against the
//! uniform distribution over labeled graphs ([`Mode::VertexUniform`]).
//! Without that correction the double-swap kernel balances against weights
//! `2^-loops`, the stub-labeled target ([`Mode::StubUniform`]), and there
//! triangle-to-loops moves are accepted with probability 1/8 to match.

use std::borrow::Borrow;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::degseq::{
    check_connectivity, detect_disconnected, realize_initial_graph, DegreeSequence,
};
use crate::error::{Error, Result};
use crate::graph::{CanonicalKey, Edge, LoopyGraph};
use crate::swaps::{
    evaluate_double, evaluate_triangle, triangle_direction, Pairing, SwapOutcome, TriangleDirection,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Uniform over labeled loopy graphs.
    VertexUniform,
    /// Uniform over stub matchings: weight `2^-loops` per labeled graph.
    StubUniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Epsilon {
    Fixed(f64),
    /// Zero when double swaps alone connect the space, else [`Epsilon::DEFAULT`].
    Auto,
}

impl Epsilon {
    pub const DEFAULT: f64 = 0.05;

    pub fn resolve(self, ds: &DegreeSequence) -> Result<f64> {
        match self {
            Epsilon::Fixed(e) if (0.0..1.0).contains(&e) => Ok(e),
            Epsilon::Fixed(e) => Err(Error::Config(format!("epsilon {e} outside [0, 1)"))),
            Epsilon::Auto => Ok(if check_connectivity(ds)?.is_disconnected() {
                Epsilon::DEFAULT
            } else {
                0.0
            }),
        }
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::Fixed(Epsilon::DEFAULT)
    }
}

#[derive(Clone, Debug)]
pub struct ChainConfig {
    pub epsilon: Epsilon,
    pub mode: Mode,
    pub seed: u64,
    /// Defaults to `ceil(10 · m · ln m)` proposals for `m` edges.
    pub burn_in: Option<u64>,
    /// Defaults to `m` proposals between samples.
    pub thinning: Option<u64>,
    pub trace_loops: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            epsilon: Epsilon::default(),
            mode: Mode::VertexUniform,
            seed: 0,
            burn_in: None,
            thinning: None,
            trace_loops: false,
        }
    }
}

impl ChainConfig {
    pub fn burn_in_for(&self, m: usize) -> u64 {
        self.burn_in.unwrap_or_else(|| {
            if m < 2 {
                0
            } else {
                (10.0 * m as f64 * (m as f64).ln()).ceil() as u64
            }
        })
    }

    pub fn thinning_for(&self, m: usize) -> u64 {
        self.thinning.unwrap_or(m.max(1) as u64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStats {
    pub steps: u64,
    pub accepted_double: u64,
    pub accepted_triangle: u64,
    pub rejected: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_count_trace: Option<Vec<usize>>,
}

impl ChainStats {
    fn record(&mut self, outcome: StepOutcome, loops: usize) {
        self.steps += 1;
        match outcome {
            StepOutcome::AcceptedDouble => self.accepted_double += 1,
            StepOutcome::AcceptedTriangle => self.accepted_triangle += 1,
            StepOutcome::Rejected => self.rejected += 1,
        }
        if let Some(trace) = &mut self.loop_count_trace {
            trace.push(loops);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    AcceptedDouble,
    AcceptedTriangle,
    Rejected,
}

/// Probability of applying a valid double swap that removes `removed`.
#[inline]
fn double_acceptance(mode: Mode, removed: &[Edge; 2]) -> f64 {
    let one_loop = removed[0].is_loop() != removed[1].is_loop();
    match mode {
        Mode::VertexUniform if one_loop => 0.5,
        _ => 1.0,
    }
}

#[inline]
fn triangle_acceptance(mode: Mode, direction: TriangleDirection) -> f64 {
    match (mode, direction) {
        (Mode::StubUniform, TriangleDirection::ToLoops) => 0.125,
        _ => 1.0,
    }
}

#[inline]
fn two_distinct<R: Rng + ?Sized>(rng: &mut R, m: usize) -> (usize, usize) {
    let i = rng.random_range(0..m);
    let mut j = rng.random_range(0..m - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

#[inline]
fn three_distinct<R: Rng + ?Sized>(rng: &mut R, m: usize) -> (usize, usize, usize) {
    let (i, j) = two_distinct(rng, m);
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut k = rng.random_range(0..m - 2);
    if k >= lo {
        k += 1;
    }
    if k >= hi {
        k += 1;
    }
    (i, j, k)
}

/// One proposal of the chain, applied to `g` in place when accepted.
pub fn step<R: Rng + ?Sized>(
    g: &mut LoopyGraph,
    epsilon: f64,
    mode: Mode,
    rng: &mut R,
) -> Result<StepOutcome> {
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::DegenerateGraph(m));
    }
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        if m < 3 {
            return Ok(StepOutcome::Rejected);
        }
        let (i, j, k) = three_distinct(rng, m);
        let outcome = evaluate_triangle(g, [g.edge_at(i), g.edge_at(j), g.edge_at(k)]);
        if let (SwapOutcome::Valid { removed, added }, Some(dir)) =
            (outcome, triangle_direction(&outcome))
        {
            let p = triangle_acceptance(mode, dir);
            if p >= 1.0 || rng.random::<f64>() < p {
                g.replace_edges(&removed, &added);
                return Ok(StepOutcome::AcceptedTriangle);
            }
        }
        return Ok(StepOutcome::Rejected);
    }

    let (i, j) = two_distinct(rng, m);
    let pairing = if rng.random::<bool>() {
        Pairing::A
    } else {
        Pairing::B
    };
    if let SwapOutcome::Valid { removed, added } =
        evaluate_double(g, g.edge_at(i), g.edge_at(j), pairing)
    {
        let p = double_acceptance(mode, &removed);
        if p >= 1.0 || rng.random::<f64>() < p {
            g.replace_edges(&removed, &added);
            return Ok(StepOutcome::AcceptedDouble);
        }
    }
    Ok(StepOutcome::Rejected)
}

/// A running chain: current graph, owned random stream, and counters.
#[derive(Clone, Debug)]
pub struct Chain {
    graph: LoopyGraph,
    epsilon: f64,
    mode: Mode,
    rng: ChaCha8Rng,
    stats: ChainStats,
}

impl Chain {
    pub fn new(graph: LoopyGraph, cfg: &ChainConfig) -> Result<Self> {
        let epsilon = match cfg.epsilon {
            Epsilon::Auto => cfg.epsilon.resolve(&graph.degree_sequence())?,
            fixed => fixed.resolve(&DegreeSequence::new(Vec::new()))?,
        };
        if cfg.thinning == Some(0) {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        let stats = ChainStats {
            loop_count_trace: cfg.trace_loops.then(Vec::new),
            ..ChainStats::default()
        };
        Ok(Chain {
            graph,
            epsilon,
            mode: cfg.mode,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            stats,
        })
    }

    pub fn step(&mut self) -> Result<StepOutcome> {
        let outcome = step(&mut self.graph, self.epsilon, self.mode, &mut self.rng)?;
        self.stats.record(outcome, self.graph.loop_count());
        Ok(outcome)
    }

    pub fn run(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    pub fn graph(&self) -> &LoopyGraph {
        &self.graph
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    pub fn into_parts(self) -> (LoopyGraph, ChainStats) {
        (self.graph, self.stats)
    }
}

/// Runs `steps` proposals from `g0`. Deterministic for a fixed seed.
pub fn run(g0: LoopyGraph, cfg: &ChainConfig, steps: u64) -> Result<(LoopyGraph, ChainStats)> {
    let mut chain = Chain::new(g0, cfg)?;
    chain.run(steps)?;
    Ok(chain.into_parts())
}

/// Stream of thinned samples started from the m*-loopy realization.
#[derive(Clone, Debug)]
pub struct Sampler {
    chain: Chain,
    burn_in: u64,
    thinning: u64,
    started: bool,
    frozen: bool,
}

impl Sampler {
    pub fn new(ds: &DegreeSequence, cfg: &ChainConfig) -> Result<Self> {
        let g0 = realize_initial_graph(ds)?;
        let m = g0.edge_count();
        let chain = Chain::new(g0, cfg)?;
        if chain.epsilon == 0.0 {
            let report = detect_disconnected(ds)?;
            if report.is_disconnected() {
                return Err(Error::Config(format!(
                    "double swaps alone cannot reach every graph for {ds} ({}); use epsilon > 0",
                    report.detail
                )));
            }
        }
        Ok(Sampler {
            burn_in: cfg.burn_in_for(m),
            thinning: cfg.thinning_for(m),
            // fewer than two edges: the realization is the only graph
            frozen: m < 2,
            started: false,
            chain,
        })
    }

    pub fn stats(&self) -> &ChainStats {
        &self.chain.stats
    }

    pub fn epsilon(&self) -> f64 {
        self.chain.epsilon
    }

    pub fn next_sample(&mut self) -> Result<LoopyGraph> {
        if !self.frozen {
            if !self.started {
                self.chain.run(self.burn_in)?;
            }
            self.chain.run(self.thinning)?;
        }
        self.started = true;
        Ok(self.chain.graph.clone())
    }
}

impl Iterator for Sampler {
    type Item = LoopyGraph;

    fn next(&mut self) -> Option<LoopyGraph> {
        // construction guarantees at least two edges whenever steps are taken
        Some(
            self.next_sample()
                .expect("sampler chain has at least two edges"),
        )
    }
}

/// Draws `n_samples` graphs: burn-in, then one sample every `thinning` steps.
pub fn sample(ds: &DegreeSequence, cfg: &ChainConfig, n_samples: usize) -> Result<Vec<LoopyGraph>> {
    let mut sampler = Sampler::new(ds, cfg)?;
    (0..n_samples).map(|_| sampler.next_sample()).collect()
}

/// Exact one-step transition probabilities out of `g`, aggregated by target
/// graph and excluding `g` itself. Uses the same acceptance rules as
/// [`step`]; the remaining mass is the probability of staying put.
pub fn exact_transitions(g: &LoopyGraph, epsilon: f64, mode: Mode) -> Vec<(LoopyGraph, f64)> {
    let m = g.edge_count();
    let mut out: FxHashMap<CanonicalKey, (LoopyGraph, f64)> = FxHashMap::default();
    let mut add = |removed: &[Edge], added: &[Edge], p: f64| {
        let mut h = g.clone();
        h.replace_edges(removed, added);
        out.entry(h.canonical_key()).or_insert((h, 0.0)).1 += p;
    };
    let edges = g.edges();
    if m >= 2 {
        let per = (1.0 - epsilon) / (m * (m - 1) / 2) as f64 / 2.0;
        for i in 0..m {
            for j in i + 1..m {
                for pairing in [Pairing::A, Pairing::B] {
                    if let SwapOutcome::Valid { removed, added } =
                        evaluate_double(g, edges[i], edges[j], pairing)
                    {
                        add(&removed, &added, per * double_acceptance(mode, &removed));
                    }
                }
            }
        }
    }
    if m >= 3 && epsilon > 0.0 {
        let per = epsilon / (m * (m - 1) * (m - 2) / 6) as f64;
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let outcome = evaluate_triangle(g, [edges[i], edges[j], edges[k]]);
                    if let (SwapOutcome::Valid { removed, added }, Some(dir)) =
                        (outcome, triangle_direction(&outcome))
                    {
                        add(&removed, &added, per * triangle_acceptance(mode, dir));
                    }
                }
            }
        }
    }
    out.into_values().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: u64,
}

/// Pearson goodness of fit of sampled graphs against expected weights
/// (normalized internally). A sample outside the table is an error.
pub fn chi_square_uniformity<I, K>(
    samples: I,
    expected: &HashMap<CanonicalKey, f64>,
) -> Result<ChiSquare>
where
    I: IntoIterator<Item = K>,
    K: Borrow<CanonicalKey>,
{
    let total_weight: f64 = expected.values().sum();
    let mut counts: HashMap<&CanonicalKey, u64> = expected.keys().map(|k| (k, 0)).collect();
    let mut n = 0u64;
    for key in samples {
        *counts.get_mut(key.borrow()).ok_or(Error::UnknownGraph)? += 1;
        n += 1;
    }
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (key, &observed) in &counts {
        let p = expected[*key] / total_weight;
        if p > 0.0 {
            let e = p * n as f64;
            statistic += (observed as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map(|d| d.sf(statistic))
            .unwrap_or(f64::NAN)
    };
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
        samples: n,
    })
}
