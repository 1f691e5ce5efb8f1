//! Shared inputs for the criterion benches.

use loopy_core::{realize_initial_graph, DegreeSequence, LoopyGraph};

/// `n` vertices of degree `k`; `n * k` must be even.
pub fn regular(n: usize, k: u32) -> DegreeSequence {
    DegreeSequence::new(vec![k; n])
}

/// A graph with `2 * n` edges realized from an all-fours sequence.
pub fn four_regular_graph(n: usize) -> LoopyGraph {
    realize_initial_graph(&regular(n, 4)).expect("even degree sum")
}

/// A mix of degrees with a heavy tail, long enough that peeling runs for a while.
pub fn skewed(n: usize) -> DegreeSequence {
    let mut degrees: Vec<u32> = (0..n)
        .map(|i| 1 + (n / (i + 1)).min(n - 1) as u32)
        .collect();
    if degrees.iter().map(|&k| k as u64).sum::<u64>() % 2 == 1 {
        degrees[n - 1] += 1;
    }
    DegreeSequence::new(degrees)
}
