//! Double edge swaps and triangle-loop swaps.
//!
//! For edges `(u,v), (x,y)` pairing `A` yields `(u,x), (v,y)` and pairing
//! `B` yields `(u,y), (v,x)`, with endpoints taken in stored `(min, max)`
//! order. A triangle-loop swap trades a triangle's three edges for loops on
//! its three corners, or the reverse.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{CanonicalKey, Edge, LoopyGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapProposal {
    Double {
        first: Edge,
        second: Edge,
        pairing: Pairing,
    },
    TriangleLoop {
        edges: [Edge; 3],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// The swap reproduces the original edge pair.
    NoOp,
    /// Both new edges coincide.
    CollidingEdges,
    /// A new edge is already in the graph.
    EdgeExists(Edge),
    /// Three edges that are neither a triangle nor three loops.
    NotTriangleOrLoops,
}

/// Which way a valid triangle-loop swap goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleDirection {
    ToLoops,
    ToTriangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapOutcome<const N: usize> {
    Valid {
        removed: [Edge; N],
        added: [Edge; N],
    },
    Rejected(RejectReason),
}

impl<const N: usize> SwapOutcome<N> {
    pub fn is_valid(&self) -> bool {
        matches!(self, SwapOutcome::Valid { .. })
    }

    /// Change in self-loop count if applied.
    pub fn loop_delta(&self) -> isize {
        match self {
            SwapOutcome::Valid { removed, added } => {
                let count = |es: &[Edge; N]| es.iter().filter(|e| e.is_loop()).count() as isize;
                count(added) - count(removed)
            }
            SwapOutcome::Rejected(_) => 0,
        }
    }
}

pub type DoubleOutcome = SwapOutcome<2>;
pub type TriangleOutcome = SwapOutcome<3>;

/// The two edges a double swap would insert, before any validity check.
#[inline]
pub fn paired_edges(first: Edge, second: Edge, pairing: Pairing) -> [Edge; 2] {
    let (u, v) = first.endpoints();
    let (x, y) = second.endpoints();
    match pairing {
        Pairing::A => [Edge::new(u, x), Edge::new(v, y)],
        Pairing::B => [Edge::new(u, y), Edge::new(v, x)],
    }
}

/// Validity of a double swap whose edges are known to be present and
/// distinct. This is the sampler's inner-loop check.
#[inline]
pub(crate) fn evaluate_double(
    g: &LoopyGraph,
    first: Edge,
    second: Edge,
    pairing: Pairing,
) -> DoubleOutcome {
    let added = paired_edges(first, second, pairing);
    // any overlap between added and removed edges forces the identity swap
    if added[0] == first || added[0] == second {
        return SwapOutcome::Rejected(RejectReason::NoOp);
    }
    if added[0] == added[1] {
        return SwapOutcome::Rejected(RejectReason::CollidingEdges);
    }
    for e in added {
        if g.contains(e) {
            return SwapOutcome::Rejected(RejectReason::EdgeExists(e));
        }
    }
    SwapOutcome::Valid {
        removed: [first, second],
        added,
    }
}

/// Validity of a triangle-loop swap on three distinct present edges.
#[inline]
pub(crate) fn evaluate_triangle(g: &LoopyGraph, edges: [Edge; 3]) -> TriangleOutcome {
    let loops = edges.iter().filter(|e| e.is_loop()).count();
    let added = match loops {
        3 => {
            let [a, b, c] = edges.map(|e| e.endpoints().0);
            [Edge::new(a, b), Edge::new(b, c), Edge::new(c, a)]
        }
        0 => match triangle_corners(edges) {
            Some([a, b, c]) => [Edge::self_loop(a), Edge::self_loop(b), Edge::self_loop(c)],
            None => return SwapOutcome::Rejected(RejectReason::NotTriangleOrLoops),
        },
        _ => return SwapOutcome::Rejected(RejectReason::NotTriangleOrLoops),
    };
    for e in added {
        if g.contains(e) {
            return SwapOutcome::Rejected(RejectReason::EdgeExists(e));
        }
    }
    SwapOutcome::Valid {
        removed: edges,
        added,
    }
}

/// Corners of the triangle formed by three distinct non-loop edges.
fn triangle_corners(edges: [Edge; 3]) -> Option<[u32; 3]> {
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return None;
    }
    // three distinct non-loop edges on exactly three vertices are a triangle
    let (a, b) = edges[0].endpoints();
    let (c, d) = edges[1].endpoints();
    let (e, f) = edges[2].endpoints();
    let mut corners = [a, b, c, d, e, f];
    corners.sort_unstable();
    let mut distinct = [0u32; 3];
    let mut count = 0;
    for (i, &v) in corners.iter().enumerate() {
        if i == 0 || v != corners[i - 1] {
            if count == 3 {
                return None;
            }
            distinct[count] = v;
            count += 1;
        }
    }
    (count == 3).then_some(distinct)
}

pub fn triangle_direction(outcome: &TriangleOutcome) -> Option<TriangleDirection> {
    match outcome {
        SwapOutcome::Valid { added, .. } if added[0].is_loop() => Some(TriangleDirection::ToLoops),
        SwapOutcome::Valid { .. } => Some(TriangleDirection::ToTriangle),
        SwapOutcome::Rejected(_) => None,
    }
}

fn require_present(g: &LoopyGraph, edges: &[Edge]) -> Result<()> {
    match edges.iter().find(|&&e| !g.contains(e)) {
        Some(&e) => Err(Error::EdgeNotPresent(e)),
        None => Ok(()),
    }
}

/// Checks a double swap proposal against `g`.
pub fn double_swap_result(
    g: &LoopyGraph,
    first: Edge,
    second: Edge,
    pairing: Pairing,
) -> Result<DoubleOutcome> {
    require_present(g, &[first, second])?;
    if first == second {
        return Err(Error::InvalidSwap(
            "double swap needs two distinct edges".into(),
        ));
    }
    Ok(evaluate_double(g, first, second, pairing))
}

/// Checks a triangle-loop swap proposal against `g`.
pub fn triangle_swap_result(g: &LoopyGraph, edges: [Edge; 3]) -> Result<TriangleOutcome> {
    require_present(g, &edges)?;
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return Err(Error::InvalidSwap(
            "triangle-loop swap needs three distinct edges".into(),
        ));
    }
    Ok(evaluate_triangle(g, edges))
}

pub fn evaluate(g: &LoopyGraph, proposal: &SwapProposal) -> Result<(Vec<Edge>, Vec<Edge>)> {
    match *proposal {
        SwapProposal::Double {
            first,
            second,
            pairing,
        } => match double_swap_result(g, first, second, pairing)? {
            SwapOutcome::Valid { removed, added } => Ok((removed.to_vec(), added.to_vec())),
            SwapOutcome::Rejected(why) => Err(Error::InvalidSwap(format!("{why:?}"))),
        },
        SwapProposal::TriangleLoop { edges } => match triangle_swap_result(g, edges)? {
            SwapOutcome::Valid { removed, added } => Ok((removed.to_vec(), added.to_vec())),
            SwapOutcome::Rejected(why) => Err(Error::InvalidSwap(format!("{why:?}"))),
        },
    }
}

/// Applies a double swap in place; fails unless the proposal is valid.
pub fn apply_double_swap(
    g: &mut LoopyGraph,
    first: Edge,
    second: Edge,
    pairing: Pairing,
) -> Result<()> {
    apply(
        g,
        &SwapProposal::Double {
            first,
            second,
            pairing,
        },
    )
}

/// Applies a triangle-loop swap in place; fails unless the proposal is valid.
pub fn apply_triangle_swap(g: &mut LoopyGraph, edges: [Edge; 3]) -> Result<()> {
    apply(g, &SwapProposal::TriangleLoop { edges })
}

pub fn apply(g: &mut LoopyGraph, proposal: &SwapProposal) -> Result<()> {
    let (removed, added) = evaluate(g, proposal)?;
    g.replace_edges(&removed, &added);
    Ok(())
}

/// Every distinct graph one valid swap away from `g`, excluding `g`.
pub fn enumerate_neighbors(g: &LoopyGraph, include_triangle: bool) -> Vec<LoopyGraph> {
    let mut out = double_neighbors(g);
    if include_triangle {
        // a triangle-loop swap changes three edges, a double swap two
        out.extend(triangle_neighbors(g));
    }
    out
}

/// Distinct graphs one valid double swap away from `g`.
pub fn double_neighbors(g: &LoopyGraph) -> Vec<LoopyGraph> {
    let mut collect = Collector::new(g);
    let edges = g.edges();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            for pairing in [Pairing::A, Pairing::B] {
                if let SwapOutcome::Valid { removed, added } =
                    evaluate_double(g, edges[i], edges[j], pairing)
                {
                    collect.push(&removed, &added);
                }
            }
        }
    }
    collect.out
}

/// Distinct graphs one valid triangle-loop swap away from `g`.
pub fn triangle_neighbors(g: &LoopyGraph) -> Vec<LoopyGraph> {
    let mut collect = Collector::new(g);
    let edges = g.edges();
    let m = edges.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if let SwapOutcome::Valid { removed, added } =
                    evaluate_triangle(g, [edges[i], edges[j], edges[k]])
                {
                    collect.push(&removed, &added);
                }
            }
        }
    }
    collect.out
}

struct Collector<'a> {
    base: &'a LoopyGraph,
    seen: FxHashSet<CanonicalKey>,
    out: Vec<LoopyGraph>,
}

impl<'a> Collector<'a> {
    fn new(base: &'a LoopyGraph) -> Self {
        Collector {
            base,
            seen: FxHashSet::default(),
            out: Vec::new(),
        }
    }

    fn push(&mut self, removed: &[Edge], added: &[Edge]) {
        let mut h = self.base.clone();
        h.replace_edges(removed, added);
        if self.seen.insert(h.canonical_key()) {
            self.out.push(h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn e(u: u32, v: u32) -> Edge {
        Edge::new(u, v)
    }

    #[test]
    fn disjoint_edges_swap() {
        let g = LoopyGraph::build(4, [(0, 1), (2, 3)]).unwrap();
        let out = double_swap_result(&g, e(0, 1), e(2, 3), Pairing::A).unwrap();
        assert_eq!(
            out,
            SwapOutcome::Valid {
                removed: [e(0, 1), e(2, 3)],
                added: [e(0, 2), e(1, 3)]
            }
        );
        let out = double_swap_result(&g, e(0, 1), e(2, 3), Pairing::B).unwrap();
        assert!(matches!(out, SwapOutcome::Valid { added, .. } if added == [e(0, 3), e(1, 2)]));
    }

    #[test]
    fn adjacent_edges_create_loop() {
        let g = LoopyGraph::build(3, [(0, 1), (0, 2)]).unwrap();
        let out = double_swap_result(&g, e(0, 1), e(0, 2), Pairing::A).unwrap();
        assert!(matches!(out, SwapOutcome::Valid { added, .. } if added == [e(0, 0), e(1, 2)]));
        assert_eq!(out.loop_delta(), 1);
        let out = double_swap_result(&g, e(0, 1), e(0, 2), Pairing::B).unwrap();
        assert_eq!(out, SwapOutcome::Rejected(RejectReason::NoOp));
    }

    #[test]
    fn loop_and_edge_give_same_result_under_both_pairings() {
        let g = LoopyGraph::build(3, [(0, 0), (1, 2)]).unwrap();
        let a = double_swap_result(&g, e(0, 0), e(1, 2), Pairing::A).unwrap();
        let b = double_swap_result(&g, e(1, 2), e(0, 0), Pairing::B).unwrap();
        for out in [a, b] {
            match out {
                SwapOutcome::Valid { added, .. } => {
                    let mut added = added;
                    added.sort();
                    assert_eq!(added, [e(0, 1), e(0, 2)]);
                }
                other => panic!("expected valid, got {other:?}"),
            }
        }
        assert_eq!(a.loop_delta(), -1);
    }

    #[test]
    fn two_loops_always_rejected() {
        let g = LoopyGraph::build(2, [(0, 0), (1, 1)]).unwrap();
        for p in [Pairing::A, Pairing::B] {
            let out = double_swap_result(&g, e(0, 0), e(1, 1), p).unwrap();
            assert_eq!(out, SwapOutcome::Rejected(RejectReason::CollidingEdges));
        }
    }

    #[test]
    fn existing_edges_block_swap() {
        let g = cycle(4);
        let out = double_swap_result(&g, e(0, 1), e(2, 3), Pairing::B).unwrap();
        assert!(matches!(
            out,
            SwapOutcome::Rejected(RejectReason::EdgeExists(_))
        ));
    }

    #[test]
    fn missing_edge_is_an_error() {
        let g = cycle(4);
        assert!(matches!(
            double_swap_result(&g, e(0, 2), e(1, 3), Pairing::A),
            Err(Error::EdgeNotPresent(_))
        ));
        assert!(matches!(
            apply_double_swap(&mut cycle(4), e(0, 1), e(2, 3), Pairing::B),
            Err(Error::InvalidSwap(_))
        ));
    }

    #[test]
    fn path_swap_preserves_degrees_and_reverses() {
        let mut g = LoopyGraph::build(3, [(0, 1), (1, 2)]).unwrap();
        let before = g.clone();
        apply_double_swap(&mut g, e(0, 1), e(1, 2), Pairing::B).unwrap();
        g.validate().unwrap();
        assert!(g.has_loop(1) && g.has_edge(0, 2));
        assert_eq!(g.degree_sequence(), before.degree_sequence());
        apply_double_swap(&mut g, e(1, 1), e(0, 2), Pairing::A).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn triangle_loop_swaps() {
        let t = triangle();
        let out = triangle_swap_result(&t, [e(0, 1), e(1, 2), e(0, 2)]).unwrap();
        assert_eq!(triangle_direction(&out), Some(TriangleDirection::ToLoops));
        let mut g = t.clone();
        apply_triangle_swap(&mut g, [e(0, 2), e(0, 1), e(1, 2)]).unwrap();
        assert_eq!(g, three_loops());
        assert_eq!(out.loop_delta(), 3);

        let out = triangle_swap_result(&three_loops(), [e(0, 0), e(1, 1), e(2, 2)]).unwrap();
        assert_eq!(
            triangle_direction(&out),
            Some(TriangleDirection::ToTriangle)
        );
        apply_triangle_swap(&mut g, [e(1, 1), e(0, 0), e(2, 2)]).unwrap();
        assert_eq!(g, t);

        let path = LoopyGraph::build(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let out = triangle_swap_result(&path, [e(0, 1), e(1, 2), e(2, 3)]).unwrap();
        assert_eq!(out, SwapOutcome::Rejected(RejectReason::NotTriangleOrLoops));

        // a looped corner blocks the collapse
        let g = LoopyGraph::build(3, [(0, 1), (1, 2), (0, 2), (1, 1)]).unwrap();
        let out = triangle_swap_result(&g, [e(0, 1), e(1, 2), e(0, 2)]).unwrap();
        assert_eq!(
            out,
            SwapOutcome::Rejected(RejectReason::EdgeExists(e(1, 1)))
        );
        // an existing edge blocks the expansion
        let g = LoopyGraph::build(3, [(0, 0), (1, 1), (2, 2), (0, 1)]).unwrap();
        let out = triangle_swap_result(&g, [e(0, 0), e(1, 1), e(2, 2)]).unwrap();
        assert!(!out.is_valid());
        // mixed triples never qualify
        let out = triangle_swap_result(&g, [e(0, 0), e(1, 1), e(0, 1)]).unwrap();
        assert_eq!(out, SwapOutcome::Rejected(RejectReason::NotTriangleOrLoops));
    }

    #[test]
    fn triangle_corner_detection_is_order_free() {
        let sides = [e(3, 5), e(5, 9), e(3, 9)];
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for p in perms {
            let mut c = triangle_corners([sides[p[0]], sides[p[1]], sides[p[2]]]).unwrap();
            c.sort();
            assert_eq!(c, [3, 5, 9]);
        }
        assert!(triangle_corners([e(0, 1), e(2, 3), e(0, 2)]).is_none());
        assert!(triangle_corners([e(0, 1), e(1, 2), e(1, 3)]).is_none());
        assert!(triangle_corners([e(0, 1), e(0, 2), e(0, 3)]).is_none());
    }

    #[test]
    fn neighbors_of_small_graphs() {
        assert!(enumerate_neighbors(&triangle(), false).is_empty());
        assert_eq!(enumerate_neighbors(&triangle(), true), vec![three_loops()]);

        let mut found = enumerate_neighbors(&cycle(4), false);
        assert_eq!(found.len(), 6);
        found.retain(|h| h.loop_count() == 1);
        // a loop at each corner, the remaining three vertices in a triangle
        assert_eq!(found.len(), 4);
        for h in &found {
            let v = h.looped_vertices()[0];
            let rest: Vec<u32> = (0..4).filter(|&w| w != v).collect();
            assert!(h.is_clique(&rest));
        }
    }
}
