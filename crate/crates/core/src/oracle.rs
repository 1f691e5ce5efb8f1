//! Exhaustive ground truth for small degree sequences.
//!
//! Enumerates every labeled loopy graph of a sequence, links graphs one swap
//! apart, and checks the structural claims the detector and sampler rely on:
//! disconnection coincides with membership in Q1 or Q2, both classes are
//! closed under double swaps, triangle-loop swaps connect everything, and the
//! peeling detector and max-degree bound agree with the component count.

use std::collections::HashMap;
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::degseq::{detect_disconnected, max_degree_guarantee, DegreeSequence};
use crate::error::{Error, Infeasibility, Result};
use crate::graph::{CanonicalKey, LoopyGraph};
use crate::mcmc::{exact_transitions, Mode};
use crate::swaps::{double_neighbors, triangle_neighbors};

/// Largest degree sum enumerated unless a caller asks for more.
pub const DEFAULT_BOUND: u64 = 16;

/// All labeled loopy graphs with degree sequence `ds`, each exactly once.
pub fn enumerate_labeled_loopy_graphs(ds: &DegreeSequence) -> Result<Vec<LoopyGraph>> {
    enumerate_with_bound(ds, DEFAULT_BOUND)
}

pub fn enumerate_with_bound(ds: &DegreeSequence, bound: u64) -> Result<Vec<LoopyGraph>> {
    let sum = ds.sum();
    if sum > bound {
        return Err(Error::BoundExceeded { sum, bound });
    }
    let mut out = Vec::new();
    if sum % 2 == 1 {
        return Ok(out);
    }
    let mut residual = ds.degrees().to_vec();
    let mut edges = Vec::new();
    assign_vertex(0, &mut residual, &mut edges, &mut out);
    Ok(out)
}

/// Settles vertex `v`: optionally a loop, then every choice of partners
/// among higher-indexed vertices that exactly uses up its residual degree.
fn assign_vertex(
    v: usize,
    residual: &mut [u32],
    edges: &mut Vec<(u32, u32)>,
    out: &mut Vec<LoopyGraph>,
) {
    let n = residual.len();
    if v == n {
        out.push(LoopyGraph::build(n, edges.iter().copied()).expect("enumerated graph is valid"));
        return;
    }
    let need = residual[v];
    let candidates: Vec<usize> = (v + 1..n).filter(|&w| residual[w] > 0).collect();
    let later_sum: u64 = candidates.iter().map(|&w| residual[w] as u64).sum();

    for with_loop in [false, true] {
        let partners = if with_loop {
            match need.checked_sub(2) {
                Some(p) => p,
                None => continue,
            }
        } else {
            need
        };
        if partners as usize > candidates.len() {
            continue;
        }
        // parity: what later vertices still need after this one must pair up
        if (later_sum - partners as u64) % 2 == 1 {
            continue;
        }
        residual[v] = 0;
        if with_loop {
            edges.push((v as u32, v as u32));
        }
        choose_partners(v, &candidates, 0, partners as usize, residual, edges, out);
        if with_loop {
            edges.pop();
        }
        residual[v] = need;
    }
}

fn choose_partners(
    v: usize,
    candidates: &[usize],
    start: usize,
    remaining: usize,
    residual: &mut [u32],
    edges: &mut Vec<(u32, u32)>,
    out: &mut Vec<LoopyGraph>,
) {
    if remaining == 0 {
        assign_vertex(v + 1, residual, edges, out);
        return;
    }
    for idx in start..candidates.len() {
        if candidates.len() - idx < remaining {
            break;
        }
        let w = candidates[idx];
        residual[w] -= 1;
        edges.push((v as u32, w as u32));
        choose_partners(v, candidates, idx + 1, remaining - 1, residual, edges, out);
        edges.pop();
        residual[w] += 1;
    }
}

/// Second, independent enumerator: decides each candidate pair (loops
/// included) in row-major order, requiring a vertex's degree to be met once
/// its row is finished.
pub fn enumerate_by_pairs(ds: &DegreeSequence) -> Vec<LoopyGraph> {
    let n = ds.len() as u32;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    let mut residual: Vec<i64> = ds.degrees().iter().map(|&k| k as i64).collect();
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    decide_pair(0, &pairs, &mut residual, &mut chosen, &mut out);
    out
}

fn decide_pair(
    i: usize,
    pairs: &[(u32, u32)],
    residual: &mut [i64],
    chosen: &mut Vec<(u32, u32)>,
    out: &mut Vec<LoopyGraph>,
) {
    if i == pairs.len() {
        if residual.iter().all(|&r| r == 0) {
            out.push(LoopyGraph::build(residual.len(), chosen.iter().copied()).expect("valid"));
        }
        return;
    }
    let (u, v) = pairs[i];
    let row_ends = v as usize + 1 == residual.len();
    let cost = |w: u32| if u == v { 2 } else { (w == u || w == v) as i64 };
    let mut recurse = |residual: &mut [i64], chosen: &mut Vec<(u32, u32)>| {
        if !row_ends || residual[u as usize] == 0 {
            decide_pair(i + 1, pairs, residual, chosen, out);
        }
    };

    // leave the pair out
    recurse(residual, chosen);

    // take it
    let ok = if u == v {
        residual[u as usize] >= 2
    } else {
        residual[u as usize] >= 1 && residual[v as usize] >= 1
    };
    if ok {
        residual[u as usize] -= cost(u);
        if u != v {
            residual[v as usize] -= cost(v);
        }
        chosen.push((u, v));
        recurse(residual, chosen);
        chosen.pop();
        residual[u as usize] += cost(u);
        if u != v {
            residual[v as usize] += cost(v);
        }
    }
}

/// Connected-component labels `0..count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn members(&self, label: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(move |&i| self.labels[i] == label)
    }
}

/// Every loopy graph of a degree sequence, linked by single swaps.
#[derive(Clone, Debug)]
pub struct GraphOfGraphs {
    nodes: Vec<LoopyGraph>,
    index: FxHashMap<CanonicalKey, usize>,
    double_adjacency: Vec<Vec<usize>>,
    triangle_adjacency: Vec<Vec<usize>>,
}

pub fn build_graph_of_graphs(
    graphs: Vec<LoopyGraph>,
    include_triangle: bool,
) -> Result<GraphOfGraphs> {
    GraphOfGraphs::build(graphs, include_triangle)
}

impl GraphOfGraphs {
    pub fn build(graphs: Vec<LoopyGraph>, include_triangle: bool) -> Result<Self> {
        let index: FxHashMap<CanonicalKey, usize> = graphs
            .iter()
            .enumerate()
            .map(|(i, g)| (g.canonical_key(), i))
            .collect();
        let lookup = |hs: Vec<LoopyGraph>| -> Result<Vec<usize>> {
            let mut ids = hs
                .iter()
                .map(|h| {
                    index
                        .get(&h.canonical_key())
                        .copied()
                        .ok_or(Error::UnknownNeighbor)
                })
                .collect::<Result<Vec<_>>>()?;
            ids.sort_unstable();
            Ok(ids)
        };
        let mut double_adjacency = Vec::with_capacity(graphs.len());
        let mut triangle_adjacency = Vec::with_capacity(graphs.len());
        for g in &graphs {
            double_adjacency.push(lookup(double_neighbors(g))?);
            triangle_adjacency.push(if include_triangle {
                lookup(triangle_neighbors(g))?
            } else {
                Vec::new()
            });
        }
        Ok(GraphOfGraphs {
            nodes: graphs,
            index,
            double_adjacency,
            triangle_adjacency,
        })
    }

    pub fn nodes(&self) -> &[LoopyGraph] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn double_adjacency(&self) -> &[Vec<usize>] {
        &self.double_adjacency
    }

    /// Neighbors reachable only through a triangle-loop swap.
    pub fn triangle_adjacency(&self) -> &[Vec<usize>] {
        &self.triangle_adjacency
    }

    pub fn components(&self, triangle: bool) -> Components {
        let n = self.nodes.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (i, nbrs) in self.double_adjacency.iter().enumerate() {
            for &j in nbrs {
                uf.union(i, j);
            }
        }
        if triangle {
            for (i, nbrs) in self.triangle_adjacency.iter().enumerate() {
                for &j in nbrs {
                    uf.union(i, j);
                }
            }
        }
        let mut relabel = HashMap::new();
        let labels: Vec<usize> = (0..n)
            .map(|i| {
                let next = relabel.len();
                *relabel.entry(uf.find(i)).or_insert(next)
            })
            .collect();
        Components {
            count: relabel.len(),
            labels,
        }
    }

    /// Adjacency is symmetric and the triangle components coarsen the
    /// double-swap components.
    pub fn is_consistent(&self) -> bool {
        let symmetric = |adj: &[Vec<usize>]| {
            adj.iter().enumerate().all(|(i, nbrs)| {
                nbrs.iter()
                    .all(|&j| j != i && adj[j].binary_search(&i).is_ok())
            })
        };
        if !symmetric(&self.double_adjacency) || !symmetric(&self.triangle_adjacency) {
            return false;
        }
        let fine = self.components(false);
        let coarse = self.components(true);
        let mut image = vec![None; fine.count];
        fine.labels.iter().zip(&coarse.labels).all(|(&f, &c)| {
            let slot = &mut image[f];
            *slot.get_or_insert(c) == c
        })
    }

    /// Graphs in double-swap component `component` with the most self-loops,
    /// narrowed to those with the most edges among loop-free vertices.
    pub fn max_loop_representatives(
        &self,
        components: &Components,
        component: usize,
    ) -> Vec<&LoopyGraph> {
        let members: Vec<&LoopyGraph> = components
            .members(component)
            .map(|i| &self.nodes[i])
            .collect();
        let Some(max_loops) = members.iter().map(|g| g.loop_count()).max() else {
            return Vec::new();
        };
        let most_loops: Vec<&LoopyGraph> = members
            .into_iter()
            .filter(|g| g.loop_count() == max_loops)
            .collect();
        let best = most_loops
            .iter()
            .map(|g| loop_free_edges(g))
            .max()
            .unwrap_or(0);
        most_loops
            .into_iter()
            .filter(|g| loop_free_edges(g) == best)
            .collect()
    }

    /// Graphviz rendering, one node per graph labeled by its edge list.
    pub fn to_dot(&self, triangle: bool) -> String {
        let mut s = String::from("graph G {\n");
        for (i, g) in self.nodes.iter().enumerate() {
            let label: Vec<String> = g.sorted_edges().iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "  {i} [label=\"{}\"];", label.join(" "));
        }
        for (i, nbrs) in self.double_adjacency.iter().enumerate() {
            for &j in nbrs.iter().filter(|&&j| j > i) {
                let _ = writeln!(s, "  {i} -- {j};");
            }
        }
        if triangle {
            for (i, nbrs) in self.triangle_adjacency.iter().enumerate() {
                for &j in nbrs.iter().filter(|&&j| j > i) {
                    let _ = writeln!(s, "  {i} -- {j} [style=dashed];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Non-loop edges with both endpoints loop-free.
fn loop_free_edges(g: &LoopyGraph) -> usize {
    g.edges()
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            u != v && !g.has_loop(u) && !g.has_loop(v)
        })
        .count()
}

/// Size of the largest clique among the loop-free vertices.
pub fn max_v0_clique(g: &LoopyGraph) -> usize {
    let v0: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| !g.has_loop(v))
        .collect();
    let mut best = 0;
    grow_clique(g, &v0, &mut Vec::new(), 0, &mut best);
    best
}

fn grow_clique(
    g: &LoopyGraph,
    pool: &[u32],
    current: &mut Vec<u32>,
    start: usize,
    best: &mut usize,
) {
    *best = (*best).max(current.len());
    for i in start..pool.len() {
        if current.len() + (pool.len() - i) <= *best {
            return;
        }
        let v = pool[i];
        if current.iter().all(|&u| g.has_edge(u, v)) {
            current.push(v);
            grow_clique(g, pool, current, i + 1, best);
            current.pop();
        }
    }
}

/// No loop-free vertex has a larger degree than a looped one.
pub fn loops_on_largest_degrees(g: &LoopyGraph) -> bool {
    let (mut free_max, mut looped_min) = (0, u32::MAX);
    for v in 0..g.vertex_count() as u32 {
        if g.has_loop(v) {
            looped_min = looped_min.min(g.degree(v));
        } else {
            free_max = free_max.max(g.degree(v));
        }
    }
    free_max <= looped_min
}

/// Loops sit exactly on the `m*` largest positions (ties by lower index).
pub fn is_m_star_loopy(g: &LoopyGraph, ds: &DegreeSequence, m_star: usize) -> bool {
    let mut top: Vec<u32> = ds.decreasing_order()[..m_star]
        .iter()
        .map(|&i| i as u32)
        .collect();
    top.sort_unstable();
    g.looped_vertices() == top
}

/// `m*` loops on vertices whose degrees are the `m*` largest, up to ties.
pub fn is_m_star_loopy_up_to_ties(g: &LoopyGraph, ds: &DegreeSequence, m_star: usize) -> bool {
    let looped = g.looped_vertices();
    if looped.len() != m_star {
        return false;
    }
    let mut have: Vec<u32> = looped.iter().map(|&v| ds.degrees()[v as usize]).collect();
    have.sort_unstable_by(|a, b| b.cmp(a));
    have[..] == ds.sorted_decreasing().degrees()[..m_star]
}

/// Stationary weights of each sampling mode, normalized over `graphs`.
pub fn stationary_distribution(graphs: &[LoopyGraph], mode: Mode) -> HashMap<CanonicalKey, f64> {
    let weight = |g: &LoopyGraph| match mode {
        Mode::VertexUniform => 1.0,
        Mode::StubUniform => 0.5f64.powi(g.loop_count() as i32),
    };
    let total: f64 = graphs.iter().map(weight).sum();
    graphs
        .iter()
        .map(|g| (g.canonical_key(), weight(g) / total))
        .collect()
}

/// Dense one-step transition matrix of the sampler over `graphs`, rows and
/// columns in the order given. Every neighbor must be listed.
pub fn transition_matrix(graphs: &[LoopyGraph], epsilon: f64, mode: Mode) -> Result<Vec<Vec<f64>>> {
    let index: FxHashMap<CanonicalKey, usize> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| (g.canonical_key(), i))
        .collect();
    let n = graphs.len();
    let mut p = vec![vec![0.0; n]; n];
    for (i, g) in graphs.iter().enumerate() {
        let mut leave = 0.0;
        for (h, q) in exact_transitions(g, epsilon, mode) {
            let j = *index
                .get(&h.canonical_key())
                .ok_or(Error::UnknownNeighbor)?;
            p[i][j] += q;
            leave += q;
        }
        p[i][i] += 1.0 - leave;
    }
    Ok(p)
}

/// Smallest `t <= max_steps` such that `t` steps from any start land within
/// total variation `tolerance` of the stationary distribution.
pub fn mixing_time(
    graphs: &[LoopyGraph],
    epsilon: f64,
    mode: Mode,
    tolerance: f64,
    max_steps: u64,
) -> Result<Option<u64>> {
    let p = transition_matrix(graphs, epsilon, mode)?;
    let pi = stationary_distribution(graphs, mode);
    let pi: Vec<f64> = graphs.iter().map(|g| pi[&g.canonical_key()]).collect();
    let n = graphs.len();
    let mut pt = p.clone();
    for t in 1..=max_steps {
        let worst = pt
            .iter()
            .map(|row| row.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
            .fold(0.0, f64::max);
        if worst <= tolerance {
            return Ok(Some(t));
        }
        pt = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| pt[i][k] * p[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    /// Disconnected exactly when some graph lies in Q1 or Q2.
    pub a: bool,
    /// Q1 and Q2 are closed under double swaps.
    pub b: bool,
    /// Triangle-loop swaps connect the space.
    pub c: bool,
    /// The max-degree bound never certifies a disconnected space.
    pub d: bool,
    /// The peeling detector agrees, and its witness is a valid Q1/Q2 member.
    pub e: bool,
    /// All m*-loopy graphs share one double-swap component.
    pub f: bool,
    /// Every component has a max-loop representative whose loop-free
    /// vertices carry the smallest degrees, and each such representative
    /// without a loop-free triangle is m*-loopy.
    pub g: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e && self.f && self.g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub sequence: DegreeSequence,
    pub n_graphs: usize,
    pub components_double: usize,
    pub components_triangle: usize,
    pub disconnected: bool,
    pub q1_count: usize,
    pub q2_count: usize,
    pub checks: Checks,
}

pub fn verify_theorems(ds: &DegreeSequence) -> Result<TheoremReport> {
    verify_with_bound(ds, DEFAULT_BOUND)
}

pub fn verify_with_bound(ds: &DegreeSequence, bound: u64) -> Result<TheoremReport> {
    let graphs = enumerate_with_bound(ds, bound)?;
    if graphs.is_empty() {
        return Err(Error::NotLoopyGraphical(
            ds.infeasibility().unwrap_or(Infeasibility::NoLoopPlacement),
        ));
    }
    let gog = GraphOfGraphs::build(graphs, true)?;
    let double = gog.components(false);
    let triangle = gog.components(true);
    let disconnected = double.count > 1;

    let in_q1: Vec<bool> = gog.nodes.iter().map(LoopyGraph::is_in_q1).collect();
    let in_q2: Vec<bool> = gog.nodes.iter().map(LoopyGraph::is_in_q2).collect();
    let q1_count = in_q1.iter().filter(|&&x| x).count();
    let q2_count = in_q2.iter().filter(|&&x| x).count();

    let closed = |class: &[bool]| {
        (0..gog.len()).all(|i| !class[i] || gog.double_adjacency[i].iter().all(|&j| class[j]))
    };

    let detector_agrees = match detect_disconnected(ds) {
        Ok(report) => {
            report.is_disconnected() == disconnected
                && report.witness.as_ref().is_none_or(|w| {
                    w.validate().is_ok()
                        && w.degree_sequence() == *ds
                        && (w.is_in_q1() || w.is_in_q2())
                        && gog.position(&w.canonical_key()).is_some()
                })
        }
        Err(_) => false,
    };

    let m_star = ds.m_star()?;
    let mut loopy_components = gog
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, g)| is_m_star_loopy(g, ds, m_star))
        .map(|(i, _)| double.labels[i]);
    let first = loopy_components.next();
    let m_star_connected = first.is_some() && loopy_components.all(|c| Some(c) == first);

    let reps_loopy = (0..double.count).all(|c| {
        let reps: Vec<&LoopyGraph> = gog
            .max_loop_representatives(&double, c)
            .into_iter()
            .filter(|g| loops_on_largest_degrees(g))
            .collect();
        !reps.is_empty()
            && reps
                .into_iter()
                .filter(|g| max_v0_clique(g) <= 2)
                .all(|g| is_m_star_loopy_up_to_ties(g, ds, m_star))
    });

    let checks = Checks {
        a: disconnected == (q1_count + q2_count > 0),
        b: closed(&in_q1) && closed(&in_q2),
        c: triangle.count == 1,
        d: max_degree_guarantee(ds).is_none() || !disconnected,
        e: detector_agrees,
        f: m_star_connected,
        g: reps_loopy,
    };
    Ok(TheoremReport {
        sequence: ds.clone(),
        n_graphs: gog.len(),
        components_double: double.count,
        components_triangle: triangle.count,
        disconnected,
        q1_count,
        q2_count,
        checks,
    })
}

/// Non-increasing positive sequences with even sum at most `max_sum` that
/// some loopy graph realizes, ordered by sum and then lexicographically
/// from the largest entries down. Every other loopy-graphical sequence is a
/// relabeling of one of these, padded with zeros.
pub fn loopy_graphical_sequences(max_sum: u64) -> Vec<DegreeSequence> {
    let mut out = Vec::new();
    for sum in (2..=max_sum).step_by(2) {
        let mut current = Vec::new();
        partitions(sum as u32, sum as u32, &mut current, &mut out);
    }
    out.retain(DegreeSequence::is_loopy_graphical);
    out
}

fn partitions(remaining: u32, cap: u32, current: &mut Vec<u32>, out: &mut Vec<DegreeSequence>) {
    if remaining == 0 {
        out.push(DegreeSequence::new(current.clone()));
        return;
    }
    for part in (1..=cap.min(remaining)).rev() {
        current.push(part);
        partitions(remaining - part, part, current, out);
        current.pop();
    }
}

/// Runs [`verify_with_bound`] on every sequence from
/// [`loopy_graphical_sequences`] on the current rayon pool. Reports come
/// back in sequence order.
pub fn sweep(max_sum: u64, bound: u64) -> Result<Vec<TheoremReport>> {
    if max_sum > bound {
        return Err(Error::BoundExceeded {
            sum: max_sum,
            bound,
        });
    }
    loopy_graphical_sequences(max_sum)
        .par_iter()
        .map(|ds| verify_with_bound(ds, bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn ds(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec())
    }

    fn keys(gs: &[LoopyGraph]) -> Vec<CanonicalKey> {
        let mut k: Vec<_> = gs.iter().map(LoopyGraph::canonical_key).collect();
        k.sort();
        k
    }

    #[test]
    fn enumerates_small_spaces() {
        let two = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2])).unwrap();
        assert_eq!(keys(&two), keys(&[triangle(), three_loops()]));

        let eight = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2, 2])).unwrap();
        assert_eq!(eight.len(), 8);
        let by_loops = |l: usize| eight.iter().filter(|g| g.loop_count() == l).count();
        assert_eq!((by_loops(0), by_loops(1), by_loops(4)), (3, 4, 1));
        assert_eq!(by_loops(2), 0);

        assert_eq!(
            enumerate_labeled_loopy_graphs(&ds(&[1, 1])).unwrap().len(),
            1
        );
        assert!(enumerate_labeled_loopy_graphs(&ds(&[3, 2]))
            .unwrap()
            .is_empty());
        assert!(matches!(
            enumerate_labeled_loopy_graphs(&ds(&[9, 9])),
            Err(Error::BoundExceeded { sum: 18, bound: 16 })
        ));
    }

    #[test]
    fn two_enumerators_agree() {
        for s in loopy_graphical_sequences(10) {
            let a = enumerate_labeled_loopy_graphs(&s).unwrap();
            let b = enumerate_by_pairs(&s);
            assert_eq!(a.len(), keys(&a).len());
            assert_eq!(keys(&a), keys(&b), "{s}");
        }
        // unsorted input with zeros
        let s = ds(&[1, 0, 3, 2, 0]);
        assert_eq!(
            keys(&enumerate_labeled_loopy_graphs(&s).unwrap()),
            keys(&enumerate_by_pairs(&s))
        );
    }

    #[test]
    fn graph_of_graphs_components() {
        let two = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2])).unwrap();
        let gog = GraphOfGraphs::build(two.clone(), false).unwrap();
        assert_eq!(gog.components(false).count, 2);
        assert!(gog.double_adjacency().iter().all(Vec::is_empty));
        let gog = GraphOfGraphs::build(two, true).unwrap();
        assert_eq!(gog.components(true).count, 1);
        assert_eq!(gog.triangle_adjacency(), &[vec![1], vec![0]]);

        let eight = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2, 2])).unwrap();
        let gog = GraphOfGraphs::build(eight, true).unwrap();
        let mut sizes = gog.components(false).sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 7]);
        assert_eq!(gog.components(true).count, 1);
        assert!(gog.is_consistent());

        let single = enumerate_labeled_loopy_graphs(&ds(&[4, 4, 2])).unwrap();
        assert_eq!(
            GraphOfGraphs::build(single, false)
                .unwrap()
                .components(false)
                .count,
            1
        );
    }

    #[test]
    fn missing_neighbor_is_reported() {
        let mut eight = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2, 2])).unwrap();
        eight.retain(|g| g.loop_count() != 1);
        assert!(matches!(
            GraphOfGraphs::build(eight, false),
            Err(Error::UnknownNeighbor)
        ));
    }

    #[test]
    fn representatives() {
        let two = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2])).unwrap();
        let gog = GraphOfGraphs::build(two, false).unwrap();
        let comps = gog.components(false);
        let loops_component = comps.labels[gog.position(&three_loops().canonical_key()).unwrap()];
        assert_eq!(
            gog.max_loop_representatives(&comps, loops_component),
            vec![&three_loops()]
        );

        let eight = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2, 2])).unwrap();
        let gog = GraphOfGraphs::build(eight, false).unwrap();
        let comps = gog.components(false);
        let big = comps.sizes().iter().position(|&s| s == 7).unwrap();
        let reps = gog.max_loop_representatives(&comps, big);
        assert_eq!(reps.len(), 4);
        assert!(reps
            .iter()
            .all(|g| g.loop_count() == 1 && max_v0_clique(g) == 3));

        let s = ds(&[4, 4, 2]);
        let gog = GraphOfGraphs::build(enumerate_labeled_loopy_graphs(&s).unwrap(), false).unwrap();
        let comps = gog.components(false);
        let reps = gog.max_loop_representatives(&comps, 0);
        assert!(reps
            .iter()
            .all(|g| g.loop_count() == 2 && is_m_star_loopy(g, &s, 2)));
    }

    #[test]
    fn representatives_with_loops_on_small_degrees_are_not_judged() {
        let s = ds(&[6, 2, 1, 5, 5, 3]);
        let r = verify_with_bound(&s, 22).unwrap();
        assert!(r.checks.all(), "{r:?}");
        let odd_one = LoopyGraph::build(
            6,
            [
                (0, 0),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 1),
                (3, 3),
                (3, 4),
                (3, 5),
                (4, 4),
                (4, 5),
            ],
        )
        .unwrap();
        assert_eq!(odd_one.degree_sequence(), s);
        assert!(!loops_on_largest_degrees(&odd_one));
        assert!(!is_m_star_loopy_up_to_ties(&odd_one, &s, 4));
    }

    #[test]
    fn stationary_weights() {
        let two = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2])).unwrap();
        let v = stationary_distribution(&two, Mode::VertexUniform);
        assert_eq!(v[&triangle().canonical_key()], 0.5);
        let s = stationary_distribution(&two, Mode::StubUniform);
        assert!((s[&triangle().canonical_key()] - 8.0 / 9.0).abs() < 1e-15);
        assert!((s[&three_loops().canonical_key()] - 1.0 / 9.0).abs() < 1e-15);
        let one = enumerate_labeled_loopy_graphs(&ds(&[1, 1])).unwrap();
        assert_eq!(
            stationary_distribution(&one, Mode::StubUniform)
                .values()
                .sum::<f64>(),
            1.0
        );
    }

    #[test]
    fn kernel_is_reversible_with_respect_to_the_target() {
        for (seq, eps, mode) in [
            (&[2, 2, 2, 2][..], 0.1, Mode::VertexUniform),
            (&[2, 2, 2, 2][..], 0.1, Mode::StubUniform),
            (&[3, 3, 2, 2][..], 0.0, Mode::StubUniform),
            (&[3, 3, 2, 2][..], 0.3, Mode::VertexUniform),
            (&[3, 3, 3, 3][..], 0.2, Mode::StubUniform),
        ] {
            let graphs = enumerate_labeled_loopy_graphs(&ds(seq)).unwrap();
            let p = transition_matrix(&graphs, eps, mode).unwrap();
            let pi = stationary_distribution(&graphs, mode);
            let pi: Vec<f64> = graphs.iter().map(|g| pi[&g.canonical_key()]).collect();
            for i in 0..graphs.len() {
                assert!((p[i].iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for j in 0..graphs.len() {
                    assert!(
                        (pi[i] * p[i][j] - pi[j] * p[j][i]).abs() < 1e-15,
                        "{seq:?} {i} {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn mixing_times() {
        let graphs = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2, 2])).unwrap();
        let t = mixing_time(&graphs, 0.1, Mode::VertexUniform, 1e-3, 1000).unwrap();
        assert!(matches!(t, Some(10..=200)), "{t:?}");
        // the lone four-loop graph is unreachable without triangle moves
        assert_eq!(
            mixing_time(&graphs, 0.0, Mode::VertexUniform, 1e-3, 1000).unwrap(),
            None
        );
        let one = enumerate_labeled_loopy_graphs(&ds(&[4, 4, 2])).unwrap();
        assert_eq!(
            mixing_time(&one, 0.0, Mode::StubUniform, 1e-3, 10).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn verify_examples() {
        let r = verify_theorems(&ds(&[2, 2, 2])).unwrap();
        assert!(r.checks.all() && r.disconnected);
        assert_eq!((r.n_graphs, r.q2_count), (2, 1));

        let r = verify_theorems(&ds(&[5, 3, 3, 3])).unwrap();
        assert!(r.checks.all() && r.disconnected, "{r:?}");

        let r = verify_theorems(&ds(&[4, 4, 2])).unwrap();
        assert!(r.checks.all() && !r.disconnected);
        assert_eq!(r.q1_count + r.q2_count, 0);

        let r = verify_with_bound(&ds(&[6, 3, 3, 3, 3]), 18).unwrap();
        assert!(r.checks.all() && r.disconnected && r.q2_count >= 1);

        assert!(verify_theorems(&ds(&[3, 2])).is_err());
    }

    #[test]
    fn sequence_listing() {
        let seqs = loopy_graphical_sequences(4);
        let shown: Vec<String> = seqs.iter().map(|s| s.to_string()).collect();
        // {4} is a lone vertex needing two loops; {3,1} is a loop plus an edge
        assert_eq!(shown, ["2", "1,1", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
    }

    #[test]
    fn dot_output() {
        let two = enumerate_labeled_loopy_graphs(&ds(&[2, 2, 2])).unwrap();
        let dot = GraphOfGraphs::build(two, true).unwrap().to_dot(true);
        assert!(dot.starts_with("graph G {"));
        assert!(dot.contains("style=dashed"));
    }
}
