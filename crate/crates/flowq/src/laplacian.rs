//! Weighted Laplacians over F_q and their invariants: rank, determinant,
//! and the quadratic character of a maximal nonsingular principal minor
//! found by symmetric congruence elimination.

use crate::field::{Arith, FieldElem, FieldParams};
use crate::graph::Multigraph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaplacianError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} carries weight zero (weights must be nonzero)")]
    ZeroWeight(usize),
    #[error("expected {expected} edge weights, got {got}")]
    WeightCount { expected: usize, got: usize },
}

/// Symmetric matrix over F_q, stored densely row-major. Writes through
/// [`SymmetricFqMatrix::set`] keep the two mirror entries equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFqMatrix {
    n: usize,
    entries: Vec<FieldElem>,
}

impl SymmetricFqMatrix {
    pub fn zero(n: usize) -> SymmetricFqMatrix {
        SymmetricFqMatrix {
            n,
            entries: vec![FieldElem::ZERO; n * n],
        }
    }

    /// Builds from rows, which must form a square symmetric array.
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> SymmetricFqMatrix {
        let n = rows.len();
        let mut m = SymmetricFqMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, rows[j][i], "input not symmetric at ({i},{j})");
                m.entries[i * n + j] = v;
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.entries[i * self.n + j]
    }

    /// Sets entry (i, j) and its mirror (j, i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    /// Principal submatrix on the given (strictly increasing) indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> SymmetricFqMatrix {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        let k = idx.len();
        let mut out = SymmetricFqMatrix::zero(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.entries[a * k + b] = self.get(i, j);
            }
        }
        out
    }

    pub(crate) fn raw_indices(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.index()).collect()
    }
}

/// Outcome of symmetric elimination on a symmetric matrix: the rank, a
/// principal index set carrying a nonsingular minor of that order, the
/// quadratic character of that minor's determinant, and (for Laplacian
/// callers) the complementary vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub pivot_set: Vec<usize>,
    pub eta_minor: i32,
    pub complement: Vec<usize>,
}

/// Weighted Laplacian of a graph: diagonal entries sum the weights of
/// incident edges, off-diagonal entries (i, j) sum the negated weights
/// of edges joining i and j. Weights may be zero.
pub fn laplacian(g: &Multigraph, fp: &FieldParams, weights: &[FieldElem]) -> SymmetricFqMatrix {
    assert_eq!(
        weights.len(),
        g.n_edges(),
        "one weight per edge ({} edges, {} weights)",
        g.n_edges(),
        weights.len()
    );
    let n = g.n_vertices();
    let mut m = SymmetricFqMatrix::zero(n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = weights[e];
        m.set(u, u, fp.add(m.get(u, u), w));
        m.set(v, v, fp.add(m.get(v, v), w));
        let off = fp.sub(m.get(u, v), w);
        m.set(u, v, off);
    }
    m
}

/// Core elimination used by both the public entry points and the
/// enumeration hot loop. Operates on a raw index matrix in place.
///
/// Repeatedly pivots on the lowest-index nonzero diagonal entry among
/// the active rows; when every active diagonal is zero, pivots on the
/// lexicographically first 2x2 block [[0, a], [a, 0]] with a != 0,
/// whose determinant is -a^2. Pivot indices accumulate in `pivots`
/// (unsorted) and the return value is the quadratic character of the
/// product of pivot-block determinants, i.e. of the nonsingular
/// principal minor on the pivot set; +1 for the empty minor.
pub(crate) fn sym_eliminate<A: Arith>(
    ar: &A,
    m: &mut [u32],
    n: usize,
    pivots: &mut Vec<usize>,
) -> i32 {
    pivots.clear();
    let mut active = [true; 32];
    assert!(n <= 32, "elimination sized for small matrices");
    let mut det: u32 = 1;
    let mut remaining = n;
    let mut rowk = [0u32; 32];
    let mut rowi = [0u32; 32];
    let mut rowj = [0u32; 32];
    while remaining > 0 {
        let mut piv = usize::MAX;
        for k in 0..n {
            if active[k] && m[k * n + k] != 0 {
                piv = k;
                break;
            }
        }
        if piv != usize::MAX {
            let k = piv;
            let pv = m[k * n + k];
            det = ar.mul(det, pv);
            let ipv = ar.inv_nz(pv);
            active[k] = false;
            remaining -= 1;
            pivots.push(k);
            rowk[..n].copy_from_slice(&m[k * n..k * n + n]);
            for i in 0..n {
                if !active[i] {
                    continue;
                }
                let f = ar.mul(rowk[i], ipv);
                if f == 0 {
                    continue;
                }
                let base = i * n;
                for j in 0..n {
                    if active[j] {
                        m[base + j] = ar.sub(m[base + j], ar.mul(f, rowk[j]));
                    }
                }
            }
            continue;
        }
        // All active diagonals are zero: look for an off-diagonal pivot
        // pair, lowest (i, j) in lexicographic order.
        let mut pair = None;
        'scan: for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in i + 1..n {
                if active[j] && m[i * n + j] != 0 {
                    pair = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = pair else {
            break; // active block is entirely zero
        };
        let a = m[i * n + j];
        det = ar.mul(det, ar.neg(ar.mul(a, a)));
        let ia = ar.inv_nz(a);
        active[i] = false;
        active[j] = false;
        remaining -= 2;
        pivots.push(i);
        pivots.push(j);
        rowi[..n].copy_from_slice(&m[i * n..i * n + n]);
        rowj[..n].copy_from_slice(&m[j * n..j * n + n]);
        for k in 0..n {
            if !active[k] {
                continue;
            }
            // Block elimination through [[0,a],[a,0]]^-1: entry (k, l)
            // loses (M[k][i] M[j][l] + M[k][j] M[i][l]) / a.
            let ci = ar.mul(rowi[k], ia);
            let cj = ar.mul(rowj[k], ia);
            if ci == 0 && cj == 0 {
                continue;
            }
            let base = k * n;
            for l in 0..n {
                if active[l] {
                    let t = ar.add(ar.mul(ci, rowj[l]), ar.mul(cj, rowi[l]));
                    m[base + l] = ar.sub(m[base + l], t);
                }
            }
        }
    }
    ar.eta_nz(det)
}

fn eliminate_dispatch(fp: &FieldParams, m: &mut [u32], n: usize, pivots: &mut Vec<usize>) -> i32 {
    match fp.table_arith() {
        Some(t) => sym_eliminate(&t, m, n, pivots),
        None => sym_eliminate(&fp.gen_arith(), m, n, pivots),
    }
}

/// Rank of a symmetric matrix over F_q.
pub fn rank_fq(m: &SymmetricFqMatrix, fp: &FieldParams) -> usize {
    let mut raw = m.raw_indices();
    let mut pivots = Vec::new();
    eliminate_dispatch(fp, &mut raw, m.n(), &mut pivots);
    pivots.len()
}

/// Determinant of a symmetric matrix over F_q (via general row
/// elimination with sign tracking; independent of `sym_eliminate`).
pub fn det_fq(m: &SymmetricFqMatrix, fp: &FieldParams) -> FieldElem {
    let n = m.n();
    let mut a = m.raw_indices();
    let mut det = FieldElem::ONE;
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r * n + col] != 0);
        let Some(piv) = piv else {
            return FieldElem::ZERO;
        };
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = fp.neg(det);
        }
        let pv = fp.elem(a[col * n + col]);
        det = fp.mul(det, pv);
        let ipv = fp.inv(pv).expect("pivot is nonzero");
        for r in col + 1..n {
            let f = fp.mul(fp.elem(a[r * n + col]), ipv);
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let cur = fp.elem(a[r * n + j]);
                let sub = fp.mul(f, fp.elem(a[col * n + j]));
                a[r * n + j] = fp.sub(cur, sub).index();
            }
        }
    }
    det
}

/// Runs symmetric elimination on a copy of `m` and packages the result.
pub fn max_nonsingular_principal(m: &SymmetricFqMatrix, fp: &FieldParams) -> RankCertificate {
    let n = m.n();
    let mut raw = m.raw_indices();
    let mut pivots = Vec::new();
    let eta_minor = eliminate_dispatch(fp, &mut raw, n, &mut pivots);
    pivots.sort_unstable();
    let complement = (0..n).filter(|v| !pivots.contains(v)).collect();
    RankCertificate {
        rank: pivots.len(),
        pivot_set: pivots,
        eta_minor,
        complement,
    }
}

/// Builds the weighted Laplacian of a connected graph with nowhere-zero
/// weights and certifies a maximal nonsingular principal minor. The
/// certificate's `complement` is the vertex set whose contraction
/// realizes that minor as a full-rank Laplacian.
pub fn weighted_rank_certificate(
    g: &Multigraph,
    fp: &FieldParams,
    weights: &[FieldElem],
) -> Result<RankCertificate, LaplacianError> {
    if weights.len() != g.n_edges() {
        return Err(LaplacianError::WeightCount {
            expected: g.n_edges(),
            got: weights.len(),
        });
    }
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected);
    }
    if let Some(e) = weights.iter().position(|w| w.is_zero()) {
        return Err(LaplacianError::ZeroWeight(e));
    }
    let m = laplacian(g, fp, weights);
    Ok(max_nonsingular_principal(&m, fp))
}
