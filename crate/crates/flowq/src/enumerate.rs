//! Exhaustive enumeration over edge-weight assignments: graded
//! character sums of Laplacian-minor determinants, their reassembly
//! into the nowhere-zero flow count, and the companion count of
//! assignments with nonsingular reduced Laplacian.

use crate::exec::{chunk_prefix, run_chunks};
use crate::field::{Arith, FieldElem, FieldParams};
use crate::graph::Multigraph;
use crate::laplacian::sym_eliminate;
use thiserror::Error;

/// Default ceiling on enumerated weight assignments for `s_table`.
pub const S_TABLE_SPACE_LIMIT: u64 = 10_000_000_000;
/// Default ceiling on enumerated assignments for `nonsingular_count`.
pub const NONSINGULAR_SPACE_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("search space of {space} assignments exceeds limit {limit} (force overrides)")]
    SearchSpaceTooLarge { space: u128, limit: u64 },
    #[error("search space of {0} assignments cannot be enumerated at all")]
    SearchSpaceUnbounded(u128),
    #[error("nonzero character sum {value} at odd rank {rank}")]
    OddRankResidue { rank: usize, value: i128 },
    #[error("graded sums are not divisible by the required power of q")]
    NonIntegerFlow,
    #[error("value exceeded 128-bit integer range")]
    Overflow,
}

/// Knobs for the enumeration entry points.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Quotient by the scaling action: pin the first edge weight to 1,
    /// scale counts by q - 1, and zero the odd-rank sums (exact).
    pub reduction: bool,
    /// Ignore the search-space ceiling.
    pub force: bool,
    /// Worker threads: 0 = default pool, 1 = strictly sequential.
    pub threads: usize,
}

impl Default for EnumOptions {
    fn default() -> EnumOptions {
        EnumOptions {
            reduction: true,
            force: false,
            threads: 0,
        }
    }
}

/// Graded character sums of a graph over a field, plus derived values.
///
/// `s_values[r]` sums, over the enumerated nonzero-weight assignments
/// whose weighted Laplacian has rank r, the quadratic character of a
/// maximal nonsingular principal minor. `rank_counts[r]` counts those
/// assignments. `flow_value` is the reassembled number of nowhere-zero
/// flows. `nonsingular` is filled by [`nonsingular_count`] when run
/// through [`STable::with_nonsingular`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct STable {
    /// Free-form label for reports; defaults to a shape signature.
    pub graph: String,
    pub q: u32,
    pub s_values: Vec<i128>,
    pub rank_counts: Vec<u64>,
    pub flow_value: i128,
    pub nonsingular: Option<i128>,
    /// Assignments actually walked (after any reduction).
    pub enumerated: u64,
}

impl STable {
    pub fn with_nonsingular(mut self, count: i128) -> STable {
        self.nonsingular = Some(count);
        self
    }
}

/// Walks weight assignments while maintaining the weighted Laplacian
/// incrementally; each leaf re-runs symmetric elimination on a scratch
/// copy and accumulates per-rank character sums and counts in i64/u64,
/// which cannot overflow within the supported search spaces.
struct Walker<'a, A: Arith> {
    ar: &'a A,
    edges: &'a [(usize, usize)],
    free: &'a [usize],
    n: usize,
    lap: Vec<u32>,
    weights: Vec<u32>,
    scratch: Vec<u32>,
    pivots: Vec<usize>,
    eta_sums: Vec<i64>,
    counts: Vec<u64>,
}

impl<'a, A: Arith> Walker<'a, A> {
    fn new(ar: &'a A, edges: &'a [(usize, usize)], free: &'a [usize], n: usize) -> Self {
        Walker {
            ar,
            edges,
            free,
            n,
            lap: vec![0; n * n],
            weights: vec![0; edges.len()],
            scratch: vec![0; n * n],
            pivots: Vec::with_capacity(n),
            eta_sums: vec![0; n + 1],
            counts: vec![0; n + 1],
        }
    }

    /// Rebuilds the Laplacian from the current weight vector.
    fn rebuild(&mut self) {
        self.lap.fill(0);
        let n = self.n;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let w = self.weights[e];
            if w == 0 {
                continue;
            }
            self.lap[u * n + u] = self.ar.add(self.lap[u * n + u], w);
            self.lap[v * n + v] = self.ar.add(self.lap[v * n + v], w);
            let off = self.ar.sub(self.lap[u * n + v], w);
            self.lap[u * n + v] = off;
            self.lap[v * n + u] = off;
        }
    }

    /// Changes one edge weight, updating the four affected entries.
    #[inline]
    fn set_edge(&mut self, e: usize, w: u32) {
        let old = self.weights[e];
        if old == w {
            return;
        }
        self.weights[e] = w;
        let delta = self.ar.sub(w, old);
        let (u, v) = self.edges[e];
        let n = self.n;
        self.lap[u * n + u] = self.ar.add(self.lap[u * n + u], delta);
        self.lap[v * n + v] = self.ar.add(self.lap[v * n + v], delta);
        let off = self.ar.sub(self.lap[u * n + v], delta);
        self.lap[u * n + v] = off;
        self.lap[v * n + u] = off;
    }

    #[inline]
    fn leaf(&mut self) {
        self.scratch.copy_from_slice(&self.lap);
        let eta = sym_eliminate(self.ar, &mut self.scratch, self.n, &mut self.pivots);
        let r = self.pivots.len();
        self.eta_sums[r] += eta as i64;
        self.counts[r] += 1;
    }

    /// Enumerates weights 1..q on free edges from `depth` on, restoring
    /// weight 1 afterwards.
    fn dfs(&mut self, depth: usize) {
        if depth == self.free.len() {
            self.leaf();
            return;
        }
        let e = self.free[depth];
        for w in 1..self.ar.q() {
            self.set_edge(e, w);
            self.dfs(depth + 1);
        }
        self.set_edge(e, 1);
    }
}

fn accumulate<A: Arith + Sync>(
    ar: &A,
    g: &Multigraph,
    free: &[usize],
    pinned: &[(usize, u32)],
    threads: usize,
) -> (Vec<i64>, Vec<u64>) {
    let n = g.n_vertices();
    let q1 = ar.q() as u64 - 1;
    let (prefix_len, n_chunks) = chunk_prefix(q1.max(2), free.len(), threads);
    let eval_chunk = |chunk: u64| -> (Vec<i64>, Vec<u64>) {
        let mut w = Walker::new(ar, g.edges(), free, n);
        for e in 0..g.n_edges() {
            w.weights[e] = 1;
        }
        for &(e, pw) in pinned {
            w.weights[e] = pw;
        }
        let mut c = chunk;
        for &e in &free[..prefix_len] {
            w.weights[e] = (c % q1) as u32 + 1;
            c /= q1;
        }
        w.rebuild();
        w.dfs(prefix_len);
        (w.eta_sums, w.counts)
    };
    let merge = |(mut ea, mut ca): (Vec<i64>, Vec<u64>), (eb, cb): (Vec<i64>, Vec<u64>)| {
        for (a, b) in ea.iter_mut().zip(eb) {
            *a += b;
        }
        for (a, b) in ca.iter_mut().zip(cb) {
            *a += b;
        }
        (ea, ca)
    };
    run_chunks(
        n_chunks,
        threads,
        eval_chunk,
        merge,
        (vec![0i64; n + 1], vec![0u64; n + 1]),
    )
}

fn space_for(base: u64, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

fn check_space(space: u128, limit: u64, force: bool) -> Result<u64, EnumError> {
    if !force && space > limit as u128 {
        return Err(EnumError::SearchSpaceTooLarge { space, limit });
    }
    u64::try_from(space).map_err(|_| EnumError::SearchSpaceUnbounded(space))
}

/// Computes the graded character sums of `g` over `fp` and reassembles
/// the nowhere-zero flow count.
///
/// With `opts.reduction` (the default) only assignments with first edge
/// weight 1 are walked; the scaling action of F_q* makes the full sums
/// exactly (q-1) times the pinned ones at even rank and zero at odd
/// rank, and multiplies every rank count by (q-1).
pub fn s_table(g: &Multigraph, fp: &FieldParams, opts: &EnumOptions) -> Result<STable, EnumError> {
    if !g.is_connected() {
        return Err(EnumError::Disconnected);
    }
    let n = g.n_vertices();
    let m = g.n_edges();
    let q1 = fp.q() as u64 - 1;
    let reduce = opts.reduction && m >= 1;
    let free: Vec<usize> = if reduce { (1..m).collect() } else { (0..m).collect() };
    let space = space_for(q1, free.len());
    let enumerated = check_space(space, S_TABLE_SPACE_LIMIT, opts.force)?;
    let pinned = [(0usize, 1u32)];
    let pinned: &[(usize, u32)] = if reduce { &pinned } else { &[] };
    let (eta_sums, counts) = match fp.table_arith() {
        Some(t) => accumulate(&t, g, &free, pinned, opts.threads),
        None => accumulate(&fp.gen_arith(), g, &free, pinned, opts.threads),
    };
    let scale = if reduce { q1 as i128 } else { 1 };
    let mut s_values = vec![0i128; n + 1];
    let mut rank_counts = vec![0u64; n + 1];
    for r in 0..=n {
        rank_counts[r] = counts[r]
            .checked_mul(if reduce { q1 } else { 1 })
            .ok_or(EnumError::Overflow)?;
        s_values[r] = if reduce && r % 2 == 1 {
            0
        } else {
            (eta_sums[r] as i128)
                .checked_mul(scale)
                .ok_or(EnumError::Overflow)?
        };
    }
    let mut table = STable {
        graph: format!("{}v{}e", n, m),
        q: fp.q(),
        s_values,
        rank_counts,
        flow_value: 0,
        nonsingular: None,
        enumerated,
    };
    table.flow_value = flow_from_stable(&table, fp)?;
    Ok(table)
}

/// Per-rank assignment counts (the histogram part of [`s_table`]).
pub fn rank_profile(
    g: &Multigraph,
    fp: &FieldParams,
    opts: &EnumOptions,
) -> Result<Vec<u64>, EnumError> {
    s_table(g, fp, opts).map(|t| t.rank_counts)
}

/// Reassembles the flow count from graded sums: the alternating series
/// sum_r S(r) eta(-1)^(r/2) / q^(r/2) over even r, evaluated exactly by
/// clearing denominators. Fails if an odd rank carries a nonzero sum or
/// the cleared sum is not divisible by the q-power it must absorb.
pub fn flow_from_stable(table: &STable, fp: &FieldParams) -> Result<i128, EnumError> {
    let q = fp.q() as i128;
    for (rank, &value) in table.s_values.iter().enumerate() {
        if rank % 2 == 1 && value != 0 {
            return Err(EnumError::OddRankResidue { rank, value });
        }
    }
    let Some(rmax) = (0..table.s_values.len())
        .rev()
        .find(|&r| table.s_values[r] != 0)
    else {
        return Ok(0);
    };
    let eta_m1 = fp.eta(fp.neg(FieldElem::ONE)) as i128;
    let mut num = 0i128;
    for r in (0..=rmax).step_by(2) {
        let sign = if (r / 2) % 2 == 1 { eta_m1 } else { 1 };
        let power = q
            .checked_pow(((rmax - r) / 2) as u32)
            .ok_or(EnumError::Overflow)?;
        let term = table.s_values[r]
            .checked_mul(sign)
            .and_then(|t| t.checked_mul(power))
            .ok_or(EnumError::Overflow)?;
        num = num.checked_add(term).ok_or(EnumError::Overflow)?;
    }
    let den = q.checked_pow((rmax / 2) as u32).ok_or(EnumError::Overflow)?;
    if num % den != 0 {
        return Err(EnumError::NonIntegerFlow);
    }
    Ok(num / den)
}

/// Counts weight assignments (zeros allowed) whose Laplacian minor with
/// row and column 0 deleted is nonsingular. Enumerates all q^E
/// assignments; no scaling reduction applies because zero weights break
/// the orbit structure.
pub fn nonsingular_count(
    g: &Multigraph,
    fp: &FieldParams,
    opts: &EnumOptions,
) -> Result<i128, EnumError> {
    if !g.is_connected() {
        return Err(EnumError::Disconnected);
    }
    let n = g.n_vertices();
    let m = g.n_edges();
    let q = fp.q() as u64;
    let space = space_for(q, m);
    check_space(space, NONSINGULAR_SPACE_LIMIT, opts.force)?;
    if n == 1 {
        // The empty minor is nonsingular for every assignment.
        return Ok(space as i128);
    }
    let count = match fp.table_arith() {
        Some(t) => count_nonsingular(&t, g, opts.threads),
        None => count_nonsingular(&fp.gen_arith(), g, opts.threads),
    };
    Ok(count as i128)
}

fn count_nonsingular<A: Arith + Sync>(ar: &A, g: &Multigraph, threads: usize) -> u64 {
    let n = g.n_vertices();
    let k = n - 1;
    let m = g.n_edges();
    let q = ar.q() as u64;
    let (prefix_len, n_chunks) = chunk_prefix(q, m, threads);
    let edges = g.edges();
    let eval_chunk = |chunk: u64| -> u64 {
        // Maintain only the reduced matrix (rows/cols 1..n, shifted by
        // one); edges at vertex 0 touch a single diagonal entry.
        let mut minor = vec![0u32; k * k];
        let mut weights = vec![0u32; m];
        let mut scratch = vec![0u32; k * k];
        let mut c = chunk;
        for slot in weights.iter_mut().take(prefix_len) {
            *slot = (c % q) as u32;
            c /= q;
        }
        let apply = |minor: &mut [u32], e: usize, delta: u32| {
            let (u, v) = edges[e];
            if u > 0 {
                let i = u - 1;
                minor[i * k + i] = ar.add(minor[i * k + i], delta);
            }
            if v > 0 {
                let j = v - 1;
                minor[j * k + j] = ar.add(minor[j * k + j], delta);
            }
            if u > 0 && v > 0 {
                let (i, j) = (u - 1, v - 1);
                let off = ar.sub(minor[i * k + j], delta);
                minor[i * k + j] = off;
                minor[j * k + i] = off;
            }
        };
        for (e, &pw) in weights.iter().enumerate().take(prefix_len) {
            if pw != 0 {
                apply(&mut minor, e, pw);
            }
        }
        #[allow(clippy::too_many_arguments)]
        fn rec<A: Arith>(
            ar: &A,
            edges: &[(usize, usize)],
            apply: &impl Fn(&mut [u32], usize, u32),
            minor: &mut Vec<u32>,
            weights: &mut Vec<u32>,
            scratch: &mut Vec<u32>,
            k: usize,
            depth: usize,
            count: &mut u64,
        ) {
            if depth == edges.len() {
                scratch.copy_from_slice(minor);
                if is_nonsingular(ar, scratch, k) {
                    *count += 1;
                }
                return;
            }
            let q = ar.q();
            for w in 0..q {
                let old = weights[depth];
                if w != old {
                    apply(minor, depth, ar.sub(w, old));
                    weights[depth] = w;
                }
                rec(ar, edges, apply, minor, weights, scratch, k, depth + 1, count);
            }
            // Restore weight 0.
            let old = weights[depth];
            if old != 0 {
                apply(minor, depth, ar.neg(old));
                weights[depth] = 0;
            }
        }
        let mut count = 0u64;
        rec(
            ar,
            edges,
            &apply,
            &mut minor,
            &mut weights,
            &mut scratch,
            k,
            prefix_len,
            &mut count,
        );
        count
    };
    run_chunks(n_chunks, threads, eval_chunk, |a, b| a + b, 0u64)
}

/// Nonsingularity by plain Gaussian elimination with early exit.
fn is_nonsingular<A: Arith>(ar: &A, m: &mut [u32], k: usize) -> bool {
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| m[r * k + col] != 0) else {
            return false;
        };
        if piv != col {
            for j in col..k {
                m.swap(piv * k + j, col * k + j);
            }
        }
        let inv = ar.inv_nz(m[col * k + col]);
        for r in col + 1..k {
            let f = ar.mul(m[r * k + col], inv);
            if f == 0 {
                continue;
            }
            for j in col..k {
                m[r * k + j] = ar.sub(m[r * k + j], ar.mul(f, m[col * k + j]));
            }
        }
    }
    true
}
