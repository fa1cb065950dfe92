//! Reference flow-polynomial computation: deletion–contraction with
//! memoization over relabeled graphs, plus a direct count of
//! nowhere-zero Z_q-flows for cross-checking.

use crate::graph::{connected_components, Multigraph};
use std::collections::HashMap;
use thiserror::Error;

/// Deletion–contraction is capped at this many edges.
pub const FLOW_POLY_EDGE_LIMIT: usize = 24;
/// Direct flow counting enumerates at most this many assignments.
pub const DIRECT_COUNT_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("graph has {0} edges; deletion-contraction handles at most {FLOW_POLY_EDGE_LIMIT}")]
    TooManyEdges(usize),
    #[error("direct count would enumerate {space} assignments (limit {limit})")]
    SearchTooLarge { space: u128, limit: u64 },
    #[error("flow counting needs a modulus of at least 2, got {0}")]
    BadModulus(u64),
}

/// Integer polynomial with exact i128 coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> IntPolynomial {
        IntPolynomial { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i128>) -> IntPolynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// Coefficients by ascending degree; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: i128) -> i128 {
        let mut acc = 0i128;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sub(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0i128; len];
        for (i, c) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *c = a - b;
        }
        IntPolynomial::from_coeffs(out)
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(out)
    }

    /// (x - 1)^k, the factor a loop contributes to a flow polynomial.
    fn loop_factor(k: usize) -> IntPolynomial {
        let mut acc = IntPolynomial::one();
        let lin = IntPolynomial::from_coeffs(vec![-1, 1]);
        for _ in 0..k {
            acc = acc.mul(&lin);
        }
        acc
    }
}

/// Graph key for memoization: vertices relabeled by ascending degree
/// (ties by first incidence), edges sorted. Collapses many of the
/// relabelings produced along a deletion-contraction run.
#[derive(Clone, PartialEq, Eq, Hash)]
struct GraphKey {
    n: u16,
    edges: Vec<(u16, u16)>,
}

fn graph_key(n: usize, edges: &[(usize, usize)]) -> GraphKey {
    // Drop isolated vertices, then relabel by (degree, old index).
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| deg[v] > 0).collect();
    order.sort_by_key(|&v| (deg[v], v));
    let mut map = vec![u16::MAX; n];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new as u16;
    }
    let mut out: Vec<(u16, u16)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (map[u], map[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    GraphKey {
        n: order.len().max(1) as u16,
        edges: out,
    }
}

/// Number of flows (not necessarily nowhere-zero) is irrelevant here;
/// this is the classic recursion on nowhere-zero flow counts:
/// F(G) = F(G/e) - F(G-e) for a non-loop edge e, F picks up a factor
/// (q-1) per loop, and any bridge forces F = 0.
fn flow_poly_rec(key: GraphKey, memo: &mut HashMap<GraphKey, IntPolynomial>) -> IntPolynomial {
    if key.edges.is_empty() {
        return IntPolynomial::one();
    }
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let n = key.n as usize;
    let edges: Vec<(usize, usize)> = key
        .edges
        .iter()
        .map(|&(u, v)| (u as usize, v as usize))
        .collect();
    // Bridge test: only edges without a parallel partner can be bridges.
    let base_comps = connected_components(n, &edges);
    let mut result = None;
    for (i, &e) in edges.iter().enumerate() {
        let multiplicity = edges.iter().filter(|&&f| f == e).count();
        if multiplicity > 1 {
            continue;
        }
        let rest: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &f)| f)
            .collect();
        if connected_components(n, &rest) > base_comps {
            result = Some(IntPolynomial::zero());
            break;
        }
    }
    let poly = result.unwrap_or_else(|| {
        // Recurse on the first edge.
        let (u, v) = edges[0];
        let deleted: Vec<(usize, usize)> = edges[1..].to_vec();
        // Contract: merge v into u; parallel copies of (u, v) become
        // loops, each contributing a factor (q - 1).
        let mut contracted = Vec::new();
        let mut loops = 0usize;
        for &(a, b) in &edges[1..] {
            let a = if a == v { u } else { a };
            let b = if b == v { u } else { b };
            if a == b {
                loops += 1;
            } else {
                contracted.push((a, b));
            }
        }
        let pc = flow_poly_rec(graph_key(n, &contracted), memo);
        let pd = flow_poly_rec(graph_key(n, &deleted), memo);
        pc.mul(&IntPolynomial::loop_factor(loops)).sub(&pd)
    });
    memo.insert(key, poly.clone());
    poly
}

/// Flow polynomial of a multigraph by deletion–contraction. The result
/// counts nowhere-zero A-flows for any abelian group A of order q (only
/// |A| matters), evaluated by substituting q.
pub fn flow_poly(g: &Multigraph) -> Result<IntPolynomial, FlowError> {
    if g.n_edges() > FLOW_POLY_EDGE_LIMIT {
        return Err(FlowError::TooManyEdges(g.n_edges()));
    }
    let mut memo = HashMap::new();
    Ok(flow_poly_rec(graph_key(g.n_vertices(), g.edges()), &mut memo))
}

/// Counts nowhere-zero Z_q-flows by exhausting all (q-1)^E assignments
/// of nonzero values to oriented edges and testing conservation at every
/// vertex. Completely independent of `flow_poly`.
pub fn flow_count_direct(g: &Multigraph, q: u64) -> Result<i128, FlowError> {
    if q < 2 {
        return Err(FlowError::BadModulus(q));
    }
    let m = g.n_edges();
    if m == 0 {
        return Ok(1);
    }
    let space = (q as u128 - 1)
        .checked_pow(m as u32)
        .unwrap_or(u128::MAX);
    if space > DIRECT_COUNT_LIMIT as u128 {
        return Err(FlowError::SearchTooLarge {
            space,
            limit: DIRECT_COUNT_LIMIT,
        });
    }
    let n = g.n_vertices();
    let edges = g.edges();
    // Depth-first assignment with incremental vertex sums; `nonzero`
    // tracks how many vertex sums are currently nonzero so the leaf
    // test is O(1).
    struct State<'a> {
        edges: &'a [(usize, usize)],
        q: u64,
        sums: Vec<u64>,
        nonzero: usize,
        count: i128,
    }
    impl State<'_> {
        fn bump(&mut self, v: usize, delta: u64) {
            let before = self.sums[v];
            let after = (before + delta) % self.q;
            self.sums[v] = after;
            self.nonzero = self.nonzero + usize::from(after != 0) - usize::from(before != 0);
        }
        fn rec(&mut self, depth: usize) {
            if depth == self.edges.len() {
                if self.nonzero == 0 {
                    self.count += 1;
                }
                return;
            }
            let (u, v) = self.edges[depth];
            for k in 1..self.q {
                // Flow k leaves u and enters v.
                self.bump(u, self.q - k);
                self.bump(v, k);
                self.rec(depth + 1);
                self.bump(u, k);
                self.bump(v, self.q - k);
            }
        }
    }
    let mut st = State {
        edges,
        q,
        sums: vec![0; n],
        nonzero: 0,
        count: 0,
    };
    st.rec(0);
    Ok(st.count)
}
