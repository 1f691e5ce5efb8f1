//! Labeled loopy graphs: at most one self-loop per vertex, no multiedges.
//!
//! Edges live in a dense array so the sampler can draw them by index in
//! O(1), with a hash index from edge to position for membership tests.
//! Neighbor lists are derived on demand; the hot path never needs them.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};

/// An unordered vertex pair stored as `(min, max)`. `(u, u)` is a self-loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: u32,
    hi: u32,
}

impl Edge {
    #[inline]
    pub fn new(u: u32, v: u32) -> Self {
        if u <= v {
            Edge { lo: u, hi: v }
        } else {
            Edge { lo: v, hi: u }
        }
    }

    #[inline]
    pub fn self_loop(v: u32) -> Self {
        Edge { lo: v, hi: v }
    }

    #[inline]
    pub fn endpoints(self) -> (u32, u32) {
        (self.lo, self.hi)
    }

    #[inline]
    pub fn is_loop(self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn touches(self, v: u32) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Byte encoding of a labeled graph's sorted edge list. Two graphs on the
/// same vertex count share a key iff their edge sets are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct LoopyGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    index: FxHashMap<Edge, usize>,
    degrees: Vec<u32>,
    loops: usize,
}

impl LoopyGraph {
    pub fn empty(vertex_count: usize) -> Self {
        LoopyGraph {
            vertex_count,
            edges: Vec::new(),
            index: FxHashMap::default(),
            degrees: vec![0; vertex_count],
            loops: 0,
        }
    }

    /// Builds a validated graph. Duplicate pairs, including a repeated
    /// self-loop, are rejected as multiedges.
    pub fn build<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut g = LoopyGraph::empty(vertex_count);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn insert_edge(&mut self, u: u32, v: u32) -> Result<()> {
        for w in [u, v] {
            if w as usize >= self.vertex_count {
                return Err(Error::Index {
                    vertex: w,
                    vertex_count: self.vertex_count,
                });
            }
        }
        let e = Edge::new(u, v);
        if self.index.contains_key(&e) {
            return Err(Error::Multiedge(e.lo, e.hi));
        }
        self.index.insert(e, self.edges.len());
        self.edges.push(e);
        if e.is_loop() {
            self.degrees[u as usize] += 2;
            self.loops += 1;
        } else {
            self.degrees[u as usize] += 1;
            self.degrees[v as usize] += 1;
        }
        Ok(())
    }

    /// Inserts the edge unless it is already present.
    pub(crate) fn ensure_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if self.has_edge(u, v) {
            Ok(())
        } else {
            self.insert_edge(u, v)
        }
    }

    /// Swaps `removed` out for `added` in place. Callers guarantee the move
    /// preserves degrees and creates no multiedge.
    pub(crate) fn replace_edges(&mut self, removed: &[Edge], added: &[Edge]) {
        debug_assert_eq!(removed.len(), added.len());
        let mut slots = [0usize; 3];
        for (slot, e) in slots.iter_mut().zip(removed) {
            *slot = self.index.remove(e).expect("removed edge must be present");
            if e.is_loop() {
                self.loops -= 1;
            }
        }
        for (&slot, &e) in slots.iter().zip(added) {
            self.edges[slot] = e;
            let prev = self.index.insert(e, slot);
            debug_assert!(prev.is_none(), "added edge {e} already present");
            if e.is_loop() {
                self.loops += 1;
            }
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in storage order. The order changes as swaps are applied.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge_at(&self, i: usize) -> Edge {
        self.edges[i]
    }

    #[inline]
    pub fn contains(&self, e: Edge) -> bool {
        self.index.contains_key(&e)
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.contains(Edge::new(u, v))
    }

    #[inline]
    pub fn has_loop(&self, v: u32) -> bool {
        self.contains(Edge::self_loop(v))
    }

    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        self.degrees[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    #[inline]
    pub fn loop_count(&self) -> usize {
        self.loops
    }

    pub fn looped_vertices(&self) -> Vec<u32> {
        (0..self.vertex_count as u32)
            .filter(|&v| self.has_loop(v))
            .collect()
    }

    /// Degrees in vertex order, self-loops counted twice.
    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.degrees.clone())
    }

    /// Degrees after deleting every self-loop.
    pub fn simplified_degree_sequence(&self) -> DegreeSequence {
        let degrees = (0..self.vertex_count as u32)
            .map(|v| self.degree(v) - if self.has_loop(v) { 2 } else { 0 })
            .collect();
        DegreeSequence::new(degrees)
    }

    /// Sorted neighbor lists. A vertex never lists itself; self-loops are
    /// reported by [`LoopyGraph::has_loop`].
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            let (u, v) = e.endpoints();
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn layer_decomposition(&self) -> LayerDecomposition {
        LayerDecomposition::compute(self, &self.adjacency())
    }

    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u == v || self.has_edge(u, v))
        })
    }

    /// Membership in the clique-like class Q1: the loop-free vertices with
    /// loop-free neighbors form a clique `K0` of size at least four, `K0`
    /// together with the first layer is a clique, and nothing lies beyond
    /// the first layer.
    pub fn is_in_q1(&self) -> bool {
        let adj = self.adjacency();
        let layers = LayerDecomposition::compute(self, &adj);
        let in_v0 = |v: u32| layers.distance(v) == Some(0);

        let k0: Vec<u32> = layers
            .v0()
            .into_iter()
            .filter(|&u| adj[u as usize].iter().any(|&w| in_v0(w)))
            .collect();
        if k0.len() < 4 || !self.is_clique(&k0) {
            return false;
        }
        if layers.iter().any(|d| d != Some(0) && d != Some(1)) {
            return false;
        }
        let mut core = k0;
        core.extend(layers.layer(1));
        self.is_clique(&core)
    }

    /// Membership in the cycle-like class Q2: loop-free vertices with
    /// loop-free neighbors have exactly two of them and see all of the first
    /// layer, the first layer is a clique, second-layer vertices attach to
    /// exactly the first layer, and unreachable looped vertices only occur
    /// as isolated loops when the first layer is empty.
    pub fn is_in_q2(&self) -> bool {
        let adj = self.adjacency();
        let layers = LayerDecomposition::compute(self, &adj);
        let v1 = layers.layer(1);

        let mut cycle_vertices = 0;
        for u in layers.v0() {
            let in_v0 = adj[u as usize]
                .iter()
                .filter(|&&w| layers.distance(w) == Some(0))
                .count();
            match in_v0 {
                0 => {}
                2 if v1.iter().all(|&x| self.has_edge(u, x)) => cycle_vertices += 1,
                _ => return false,
            }
        }
        if cycle_vertices < 3 || !self.is_clique(&v1) {
            return false;
        }
        for u in layers.layer(2) {
            // adjacency lists are sorted and exclude the vertex itself
            if adj[u as usize] != v1 {
                return false;
            }
        }
        if layers.iter().any(|d| matches!(d, Some(k) if k >= 3)) {
            return false;
        }
        let vinf = layers.vinf();
        vinf.is_empty() || (v1.is_empty() && vinf.iter().all(|&u| self.degree(u) == 2))
    }

    /// Sorted, normalized edge list as bytes.
    pub fn canonical_key(&self) -> CanonicalKey {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let mut bytes = Vec::with_capacity(sorted.len() * 8);
        for e in sorted {
            bytes.extend_from_slice(&e.lo.to_le_bytes());
            bytes.extend_from_slice(&e.hi.to_le_bytes());
        }
        CanonicalKey(bytes.into_boxed_slice())
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted
    }

    /// Re-derives every invariant from the edge array.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistent(msg));
        if self.index.len() != self.edges.len() {
            return fail(format!(
                "index holds {} entries for {} edges",
                self.index.len(),
                self.edges.len()
            ));
        }
        let mut degrees = vec![0u32; self.vertex_count];
        let mut loops = 0;
        for (i, &e) in self.edges.iter().enumerate() {
            let (u, v) = e.endpoints();
            if u > v || v as usize >= self.vertex_count {
                return fail(format!("malformed edge {e}"));
            }
            if self.index.get(&e) != Some(&i) {
                return fail(format!("edge {e} is duplicated or mis-indexed"));
            }
            if u == v {
                degrees[u as usize] += 2;
                loops += 1;
            } else {
                degrees[u as usize] += 1;
                degrees[v as usize] += 1;
            }
        }
        if degrees != self.degrees {
            return fail("cached degrees disagree with edges".into());
        }
        if loops != self.loops {
            return fail("cached loop count disagrees with edges".into());
        }
        Ok(())
    }
}

impl PartialEq for LoopyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edges.len() == other.edges.len()
            && self.edges.iter().all(|&e| other.contains(e))
    }
}

impl Eq for LoopyGraph {}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[u32; 2]>,
}

impl Serialize for LoopyGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.vertex_count,
            edges: self
                .sorted_edges()
                .into_iter()
                .map(|e| [e.lo, e.hi])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LoopyGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        LoopyGraph::build(repr.n, repr.edges.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}

/// Shortest-path layers measured from the loop-free vertex set `V0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    distance: Vec<Option<u32>>,
}

impl LayerDecomposition {
    fn compute(g: &LoopyGraph, adj: &[Vec<u32>]) -> Self {
        let mut distance = vec![None; g.vertex_count()];
        let mut queue = VecDeque::new();
        for v in 0..g.vertex_count() as u32 {
            if !g.has_loop(v) {
                distance[v as usize] = Some(0);
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            let next = distance[u as usize].map(|d| d + 1);
            for &w in &adj[u as usize] {
                if distance[w as usize].is_none() {
                    distance[w as usize] = next;
                    queue.push_back(w);
                }
            }
        }
        LayerDecomposition { distance }
    }

    /// `Some(k)` for a vertex in layer `k`, `None` for one in `V∞`.
    pub fn distance(&self, v: u32) -> Option<u32> {
        self.distance[v as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<u32>> + '_ {
        self.distance.iter().copied()
    }

    pub fn v0(&self) -> Vec<u32> {
        self.layer(0)
    }

    pub fn layer(&self, k: u32) -> Vec<u32> {
        self.select(|d| d == Some(k))
    }

    pub fn vinf(&self) -> Vec<u32> {
        self.select(|d| d.is_none())
    }

    /// Largest finite layer index, `None` when `V0` is empty.
    pub fn depth(&self) -> Option<u32> {
        self.distance.iter().flatten().copied().max()
    }

    fn select(&self, pred: impl Fn(Option<u32>) -> bool) -> Vec<u32> {
        (0..self.distance.len() as u32)
            .filter(|&v| pred(self.distance[v as usize]))
            .collect()
    }
}
