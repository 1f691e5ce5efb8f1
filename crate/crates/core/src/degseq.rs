//! Degree-sequence analysis: graphicality, loop placement, and detection of
//! sequences whose loopy graphs fall apart under double edge swaps.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Infeasibility, Result};
use crate::graph::LoopyGraph;

/// Target degrees `k_i`, indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSequence(Vec<u32>);

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Self {
        DegreeSequence(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Number of vertices with nonzero degree.
    pub fn n_star(&self) -> usize {
        self.0.iter().filter(|&&k| k > 0).count()
    }

    /// Vertex indices by decreasing degree, ties broken by lower index.
    pub fn decreasing_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by_key(|&i| (Reverse(self.0[i]), i));
        order
    }

    pub fn sorted_decreasing(&self) -> DegreeSequence {
        let mut d = self.0.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(d)
    }

    fn is_all(&self, value: u32) -> bool {
        self.0.iter().filter(|&&k| k > 0).all(|&k| k == value)
    }

    /// Erdős–Gallai: realizable as a simple graph (no loops, no multiedges).
    pub fn is_simple_graphical(&self) -> bool {
        erdos_gallai(self.0.clone())
    }

    /// Simple-graphical after removing two from each of the `m` largest
    /// degrees, i.e. realizable with self-loops on exactly those vertices.
    pub fn is_m_simple_graphical(&self, m: usize) -> bool {
        m <= self.0.len() && m_reduced_is_graphical(&self.sorted_decreasing().0, m)
    }

    /// Largest `m` for which the sequence is `m`-simple-graphical.
    pub fn m_star(&self) -> Result<usize> {
        if self.sum() % 2 == 1 {
            return Err(Error::NotLoopyGraphical(Infeasibility::OddDegreeSum));
        }
        // a loop needs degree two, so no m beyond the count of such vertices works
        let upper = self.0.iter().filter(|&&k| k >= 2).count();
        let sorted = self.sorted_decreasing();
        (0..=upper)
            .rev()
            .find(|&m| m_reduced_is_graphical(&sorted.0, m))
            .ok_or(Error::NotLoopyGraphical(Infeasibility::NoLoopPlacement))
    }

    /// Some loopy graph realizes the sequence. Loops can always be moved
    /// onto the largest degrees, so checking prefix placements suffices.
    pub fn is_loopy_graphical(&self) -> bool {
        self.m_star().is_ok()
    }

    pub fn infeasibility(&self) -> Option<Infeasibility> {
        match self.m_star() {
            Err(Error::NotLoopyGraphical(why)) => Some(why),
            _ => None,
        }
    }
}

impl From<Vec<u32>> for DegreeSequence {
    fn from(v: Vec<u32>) -> Self {
        DegreeSequence(v)
    }
}

impl<const N: usize> From<[u32; N]> for DegreeSequence {
    fn from(v: [u32; N]) -> Self {
        DegreeSequence(v.to_vec())
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    /// Whitespace- or comma-separated non-negative integers.
    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid degree {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DegreeSequence)
    }
}

fn erdos_gallai(mut d: Vec<u32>) -> bool {
    d.sort_unstable_by(|a, b| b.cmp(a));
    erdos_gallai_sorted(&d)
}

/// `sorted` is non-increasing. Lowering its first `m` entries by two keeps
/// both runs sorted, so a merge restores order without a full sort.
fn m_reduced_is_graphical(sorted: &[u32], m: usize) -> bool {
    if m > sorted.len() || sorted[..m].iter().any(|&k| k < 2) {
        return false;
    }
    let (head, tail) = sorted.split_at(m);
    let mut merged = Vec::with_capacity(sorted.len());
    let (mut i, mut j) = (0, 0);
    while i < head.len() && j < tail.len() {
        if head[i] - 2 >= tail[j] {
            merged.push(head[i] - 2);
            i += 1;
        } else {
            merged.push(tail[j]);
            j += 1;
        }
    }
    merged.extend(head[i..].iter().map(|&k| k - 2));
    merged.extend_from_slice(&tail[j..]);
    erdos_gallai_sorted(&merged)
}

fn erdos_gallai_sorted(d: &[u32]) -> bool {
    let n = d.len();
    let mut prefix = vec![0u64; n + 1];
    for (i, &k) in d.iter().enumerate() {
        prefix[i + 1] = prefix[i] + k as u64;
    }
    if prefix[n] % 2 == 1 {
        return false;
    }
    // positions holding degree >= k form a prefix that shrinks as k grows
    let mut at_least_k = n;
    for k in 1..=n {
        while at_least_k > 0 && (d[at_least_k - 1] as usize) < k {
            at_least_k -= 1;
        }
        let split = at_least_k.max(k);
        let k64 = k as u64;
        let rhs = k64 * (k64 - 1) + k64 * (split - k) as u64 + (prefix[n] - prefix[split]);
        if prefix[k] > rhs {
            return false;
        }
    }
    true
}

/// Builds an m*-loopy realization: self-loops on the `m*` largest degrees,
/// the remainder wired by Havel–Hakimi (largest residual first).
pub fn realize_initial_graph(ds: &DegreeSequence) -> Result<LoopyGraph> {
    let m_star = ds.m_star()?;
    let mut g = LoopyGraph::empty(ds.len());
    let mut residual = ds.degrees().to_vec();
    for &i in &ds.decreasing_order()[..m_star] {
        g.insert_edge(i as u32, i as u32)?;
        residual[i] -= 2;
    }

    let mut pool: BTreeSet<(Reverse<u32>, u32)> = residual
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| (Reverse(k), i as u32))
        .collect();
    let mut taken = Vec::new();
    while let Some((Reverse(d), u)) = pool.pop_first() {
        taken.clear();
        taken.extend(pool.iter().take(d as usize).copied());
        if taken.len() < d as usize {
            return Err(Error::NotLoopyGraphical(Infeasibility::NoLoopPlacement));
        }
        for &(Reverse(k), v) in &taken {
            pool.remove(&(Reverse(k), v));
            g.insert_edge(u, v)?;
            if k > 1 {
                pool.insert((Reverse(k - 1), v));
            }
        }
    }
    debug_assert_eq!(g.degrees(), ds.degrees());
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Connected,
    Disconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Maximum degree too small for a loop-blocking core to exist.
    MaxDegreeBound,
    /// Minimum-degree peeling down to a two-valued core.
    Peeling,
    /// Fewer than three vertices of nonzero degree.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub status: Status,
    pub method: Method,
    pub detail: String,
    /// A wiring that no sequence of double swaps can bring to the maximal
    /// self-loop configuration. Present iff `status` is `Disconnected`.
    pub witness: Option<LoopyGraph>,
}

impl ConnectivityReport {
    fn connected(method: Method, detail: &str) -> Self {
        ConnectivityReport {
            status: Status::Connected,
            method,
            detail: detail.to_string(),
            witness: None,
        }
    }

    fn disconnected(detail: &str, witness: LoopyGraph) -> Self {
        ConnectivityReport {
            status: Status::Disconnected,
            method: Method::Peeling,
            detail: detail.to_string(),
            witness: Some(witness),
        }
    }

    pub fn is_disconnected(&self) -> bool {
        self.status == Status::Disconnected
    }
}

/// One-sided test: `Some(Connected)` when the maximum degree is below
/// `2·sqrt(n* − 3) + 1`, compared exactly as `(max − 1)² < 4(n* − 3)`.
/// Sequences whose nonzero entries are all two are excluded.
pub fn max_degree_guarantee(ds: &DegreeSequence) -> Option<Status> {
    let max = ds.max() as i64;
    if max == 0 || ds.is_all(2) {
        return None;
    }
    let n_star = ds.n_star() as i64;
    ((max - 1) * (max - 1) < 4 * (n_star - 3)).then_some(Status::Connected)
}

/// Exact decision of whether double edge swaps connect all loopy graphs
/// with this degree sequence. Zero degrees are ignored; vertex labels in the
/// witness match the input positions.
pub fn detect_disconnected(ds: &DegreeSequence) -> Result<ConnectivityReport> {
    ds.m_star()?;

    let mut residual: Vec<(u32, u32)> = ds
        .degrees()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| (k, i as u32))
        .collect();
    sort_residual(&mut residual);
    let n = residual.len();
    let ids: Vec<u32> = residual.iter().map(|&(_, id)| id).collect();

    if n <= 2 {
        return Ok(ConnectivityReport::connected(
            Method::Degenerate,
            "fewer than three vertices of nonzero degree",
        ));
    }
    if ds.is_all(2) {
        let mut g = LoopyGraph::empty(ds.len());
        for i in 0..n {
            g.insert_edge(ids[i], ids[(i + 1) % n])?;
        }
        return Ok(ConnectivityReport::disconnected(
            "all degrees two: cycle",
            g,
        ));
    }
    if ds.is_all(n as u32 - 1) {
        let mut g = LoopyGraph::empty(ds.len());
        add_clique(&mut g, &ids)?;
        return Ok(ConnectivityReport::disconnected(
            "all degrees n-1: clique",
            g,
        ));
    }

    let mut witness = LoopyGraph::empty(ds.len());
    let mut scratch = Vec::with_capacity(n);
    while !residual.is_empty() {
        if let Some((detail, g)) = wire_core(&residual, &witness)? {
            debug_assert_eq!(g.degrees(), ds.degrees());
            // peeled vertices can land on loop-free core vertices, which
            // leaves a graph that double swaps can still grow loops in
            if g.is_in_q1() || g.is_in_q2() {
                return Ok(ConnectivityReport::disconnected(detail, g));
            }
        }
        let (min_degree, min_id) = residual.pop().expect("nonempty");
        if min_degree as usize > residual.len() {
            break;
        }
        let k = min_degree as usize;
        for entry in residual.iter_mut().take(k) {
            entry.0 -= 1;
            witness.insert_edge(min_id, entry.1)?;
        }
        merge_runs(&mut residual, k, &mut scratch);
    }
    Ok(ConnectivityReport::connected(
        Method::Peeling,
        "no loop-blocking core remains after peeling",
    ))
}

/// Max-degree bound first, exact peeling as the fallback.
pub fn check_connectivity(ds: &DegreeSequence) -> Result<ConnectivityReport> {
    ds.m_star()?;
    if max_degree_guarantee(ds).is_some() {
        return Ok(ConnectivityReport::connected(
            Method::MaxDegreeBound,
            "maximum degree below 2*sqrt(n*-3)+1",
        ));
    }
    detect_disconnected(ds)
}

fn sort_residual(residual: &mut [(u32, u32)]) {
    residual.sort_unstable_by_key(|&(k, id)| (Reverse(k), id));
}

/// Restores order after the first `split` entries were each decremented:
/// both runs are still sorted, so one linear merge suffices.
fn merge_runs(residual: &mut Vec<(u32, u32)>, split: usize, scratch: &mut Vec<(u32, u32)>) {
    let key = |&(k, id): &(u32, u32)| (Reverse(k), id);
    scratch.clear();
    let (mut i, mut j) = (0, split);
    while i < split && j < residual.len() {
        if key(&residual[j]) < key(&residual[i]) {
            scratch.push(residual[j]);
            j += 1;
        } else {
            scratch.push(residual[i]);
            i += 1;
        }
    }
    scratch.extend_from_slice(&residual[i..split]);
    scratch.extend_from_slice(&residual[j..]);
    std::mem::swap(residual, scratch);
}

fn add_clique(g: &mut LoopyGraph, vertices: &[u32]) -> Result<()> {
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            g.ensure_edge(u, v)?;
        }
    }
    Ok(())
}

/// If the residual sequence takes exactly two values `a < b` with `a >= 3`
/// and at least three `a`s, and matches one of the two loop-blocking core
/// shapes, returns `base` with that core wired in, and names it.
fn wire_core(
    residual: &[(u32, u32)],
    base: &LoopyGraph,
) -> Result<Option<(&'static str, LoopyGraph)>> {
    let n_t = residual.len();
    let b = residual[0].0;
    let a = residual[n_t - 1].0;
    // both shapes need a vertex adjacent to every other one
    if a < 3 || a == b || n_t > b as usize + 1 {
        return Ok(None);
    }
    let n_b = residual.iter().take_while(|&&(k, _)| k == b).count();
    let n_a = n_t - n_b;
    // sorted, so a single middle value would sit right after the b run
    if residual[n_b].0 != a || n_a < 3 {
        return Ok(None);
    }
    let (a, b, n_b, n_t) = (a as usize, b as usize, n_b, n_t);
    let id = |pos: usize| residual[pos].1;
    let all: Vec<u32> = (0..n_t).map(id).collect();

    if a + 2 == b && a + 1 == n_t {
        let mut g = base.clone();
        // clique on every residual vertex, loops on the high-degree ones
        for &u in &all[..n_b] {
            g.ensure_edge(u, u)?;
        }
        add_clique(&mut g, &all)?;
        return Ok(Some((
            "clique core with loops on the high-degree vertices",
            g,
        )));
    }
    if b == n_t + 1 && a == n_b + 2 {
        let mut g = base.clone();
        // looped hubs see everything; a loop-free triangle plus looped
        // pendants hang off the hubs
        for &u in &all[..n_b] {
            for &v in &all {
                g.ensure_edge(u, v)?;
            }
        }
        for &u in &all[..n_t - 3] {
            g.ensure_edge(u, u)?;
        }
        add_clique(&mut g, &all[n_t - 3..])?;
        return Ok(Some(("looped hubs over a loop-free triangle", g)));
    }
    Ok(None)
}
