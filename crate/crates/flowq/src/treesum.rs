//! Combinatorial oracles for weighted tree and forest sums, checked
//! elsewhere against Laplacian minors. Everything here enumerates edge
//! subsets directly and is intentionally independent of the elimination
//! code.

use crate::field::{FieldElem, FieldParams};
use crate::graph::{connected_components, Multigraph};
use thiserror::Error;

/// Subset enumeration is capped at this many edges.
pub const ORACLE_EDGE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeSumError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("root set is empty")]
    NoRoots,
    #[error("graph has {0} edges; subset oracles handle at most {ORACLE_EDGE_LIMIT}")]
    TooManyEdges(usize),
    #[error("expected {expected} edge weights, got {got}")]
    WeightCount { expected: usize, got: usize },
}

fn check_weights(g: &Multigraph, weights: &[FieldElem]) -> Result<(), TreeSumError> {
    if weights.len() != g.n_edges() {
        return Err(TreeSumError::WeightCount {
            expected: g.n_edges(),
            got: weights.len(),
        });
    }
    Ok(())
}

/// All spanning trees of a connected graph, as sorted edge-index sets.
/// A single vertex has exactly one spanning tree, the empty set.
pub fn spanning_trees(g: &Multigraph) -> Result<Vec<Vec<usize>>, TreeSumError> {
    if g.n_edges() > ORACLE_EDGE_LIMIT {
        return Err(TreeSumError::TooManyEdges(g.n_edges()));
    }
    if !g.is_connected() {
        return Err(TreeSumError::Disconnected);
    }
    let target = g.n_vertices() - 1;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(target);
    // Depth-first over edge indices; prune when the remaining edges
    // cannot finish connecting the chosen forest.
    fn rec(
        g: &Multigraph,
        idx: usize,
        chosen: &mut Vec<usize>,
        target: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == target {
            // `chosen` is acyclic with n-1 edges, hence spanning.
            out.push(chosen.clone());
            return;
        }
        if idx == g.n_edges() {
            return;
        }
        let need = target - chosen.len();
        if g.n_edges() - idx < need {
            return;
        }
        let subset: Vec<(usize, usize)> = chosen.iter().map(|&e| g.edges()[e]).collect();
        let (u, v) = g.edges()[idx];
        let mut with_edge = subset.clone();
        with_edge.push((u, v));
        // Include idx only if it joins two distinct components.
        if connected_components(g.n_vertices(), &with_edge)
            < connected_components(g.n_vertices(), &subset)
        {
            chosen.push(idx);
            rec(g, idx + 1, chosen, target, out);
            chosen.pop();
        }
        rec(g, idx + 1, chosen, target, out);
    }
    rec(g, 0, &mut chosen, target, &mut out);
    Ok(out)
}

/// Weighted spanning-tree sum: over every spanning tree, the product of
/// its edge weights, summed in F_q.
pub fn tree_sum_bruteforce(
    g: &Multigraph,
    fp: &FieldParams,
    weights: &[FieldElem],
) -> Result<FieldElem, TreeSumError> {
    check_weights(g, weights)?;
    let trees = spanning_trees(g)?;
    let mut acc = FieldElem::ZERO;
    for t in trees {
        let mut prod = FieldElem::ONE;
        for e in t {
            prod = fp.mul(prod, weights[e]);
        }
        acc = fp.add(acc, prod);
    }
    Ok(acc)
}

/// The same tree sum through the matrix-tree route: determinant of the
/// weighted Laplacian with row and column 0 deleted.
pub fn tree_sum_det(
    g: &Multigraph,
    fp: &FieldParams,
    weights: &[FieldElem],
) -> Result<FieldElem, TreeSumError> {
    check_weights(g, weights)?;
    if !g.is_connected() {
        return Err(TreeSumError::Disconnected);
    }
    let n = g.n_vertices();
    if n == 1 {
        return Ok(FieldElem::ONE);
    }
    let m = crate::laplacian::laplacian(g, fp, weights);
    let idx: Vec<usize> = (1..n).collect();
    let minor = m.principal_submatrix(&idx);
    Ok(crate::laplacian::det_fq(&minor, fp))
}

/// Weighted sum over spanning forests with exactly one tree per root:
/// edge subsets of size |V| - |roots| that are acyclic and leave every
/// pair of roots in different components contribute the product of
/// their weights.
///
/// Duplicate roots are ignored. Nothing requires the graph to be
/// connected here, but callers cross-check against minors of connected
/// graphs.
pub fn forest_sum(
    g: &Multigraph,
    fp: &FieldParams,
    weights: &[FieldElem],
    roots: &[usize],
) -> Result<FieldElem, TreeSumError> {
    check_weights(g, weights)?;
    let n = g.n_vertices();
    let m = g.n_edges();
    if m > ORACLE_EDGE_LIMIT {
        return Err(TreeSumError::TooManyEdges(m));
    }
    let mut is_root = vec![false; n];
    for &r in roots {
        assert!(r < n, "root {r} out of range");
        is_root[r] = true;
    }
    let roots: Vec<usize> = (0..n).filter(|&v| is_root[v]).collect();
    if roots.is_empty() {
        return Err(TreeSumError::NoRoots);
    }
    let k = roots.len();
    if n - k > m {
        return Ok(FieldElem::ZERO);
    }
    let want = (n - k) as u32;
    let mut acc = FieldElem::ZERO;
    'subsets: for mask in 0u32..(1u32 << m) {
        if mask.count_ones() != want {
            continue;
        }
        // Acyclic check by incremental union; forests with n - k edges
        // have exactly k components.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..m {
            if mask >> e & 1 == 0 {
                continue;
            }
            let (u, v) = g.edges()[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                continue 'subsets; // cycle
            }
            parent[ru] = rv;
        }
        // Every tree must contain exactly one root, i.e. roots lie in
        // pairwise distinct components.
        for i in 0..k {
            for j in i + 1..k {
                if find(&mut parent, roots[i]) == find(&mut parent, roots[j]) {
                    continue 'subsets;
                }
            }
        }
        let mut prod = FieldElem::ONE;
        for (e, &w) in weights.iter().enumerate().take(m) {
            if mask >> e & 1 == 1 {
                prod = fp.mul(prod, w);
            }
        }
        acc = fp.add(acc, prod);
    }
    Ok(acc)
}
