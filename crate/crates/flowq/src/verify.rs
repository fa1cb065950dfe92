//! Numerical verification of the character identities behind the
//! Laplacian-minor route to flow counting, plus exact oracle
//! cross-checks packaged in the same report shape.
//!
//! Every check sums unit-modulus complex terms in double precision and
//! compares against a closed form; the default tolerance of 1e-6 leaves
//! orders of magnitude of headroom at the permitted problem sizes.

use crate::field::{FieldElem, FieldParams};
use crate::flowpoly::flow_poly;
use crate::graph::Multigraph;
use crate::laplacian::{det_fq, laplacian, max_nonsingular_principal, SymmetricFqMatrix};
use crate::treesum::{forest_sum, spanning_trees, tree_sum_det, TreeSumError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Absolute tolerance for every complex comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Base seed for randomized checks; mixed with call parameters so each
/// configuration sees its own reproducible stream.
pub const CHECK_SEED: u64 = 0x5eed_f10e;

/// Field-order ceiling for the per-element delta and Gaussian checks.
pub const SMALL_FIELD_LIMIT: u64 = 49;
/// Field-order ceiling for the triangle identity.
pub const TRIANGLE_FIELD_LIMIT: u64 = 13;
/// Term ceiling q^(V+E) for the character factorization check.
pub const FACTORIZATION_TERM_LIMIT: u128 = 100_000_000;
/// Term ceiling (q-1)^E * q^V for the flow double-sum check.
pub const DOUBLE_SUM_TERM_LIMIT: u128 = 100_000_000;
/// Point ceiling q^n for the multidimensional Gaussian check.
pub const MULTIDIM_SPACE_LIMIT: u128 = 10_000_000;
/// Assignment ceiling q^E for the exhaustive tree-sum cross-check.
pub const TREE_SUM_SPACE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("{identity}: problem size {size} exceeds limit {limit}")]
    TooLarge {
        identity: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("{identity}: {source}")]
    Oracle {
        identity: &'static str,
        #[source]
        source: TreeSumError,
    },
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub identity: String,
    pub instances: u64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Running maximum-deviation accumulator.
struct Dev {
    max: f64,
    count: u64,
}

impl Dev {
    fn new() -> Dev {
        Dev { max: 0.0, count: 0 }
    }

    fn record(&mut self, d: f64) {
        self.count += 1;
        if d > self.max {
            self.max = d;
        }
    }

    fn report(self, identity: String) -> CheckReport {
        CheckReport {
            identity,
            instances: self.count,
            max_deviation: self.max,
            tolerance: DEFAULT_TOLERANCE,
            pass: self.max <= DEFAULT_TOLERANCE,
        }
    }
}

fn chi_table(fp: &FieldParams) -> Vec<Complex64> {
    fp.elements().map(|e| fp.chi1(e)).collect()
}

fn guard(identity: &'static str, size: u128, limit: u128) -> Result<(), CheckError> {
    if size > limit {
        return Err(CheckError::TooLarge {
            identity,
            size,
            limit,
        });
    }
    Ok(())
}

/// For every t: sum over k of chi1(k t) equals q when t = 0 and 0
/// otherwise (q times the zero indicator).
pub fn verify_delta_identity(fp: &FieldParams) -> Result<CheckReport, CheckError> {
    guard("delta-identity", fp.q() as u128, SMALL_FIELD_LIMIT as u128)?;
    let chi = chi_table(fp);
    let mut dev = Dev::new();
    for t in fp.elements() {
        let sum: Complex64 = fp
            .elements()
            .map(|k| chi[fp.mul(k, t).index() as usize])
            .sum();
        let expected = Complex64::new(fp.q() as f64 * fp.delta_ind(t) as f64, 0.0);
        dev.record((sum - expected).norm());
    }
    Ok(dev.report(format!("delta-identity(q={})", fp.q())))
}

/// For every t: sum over k of chi1(k^2 t) equals q when t = 0 and
/// eta(t) g(q) otherwise.
pub fn verify_gauss_onedim(fp: &FieldParams) -> Result<CheckReport, CheckError> {
    guard("gauss-one-dim", fp.q() as u128, SMALL_FIELD_LIMIT as u128)?;
    let chi = chi_table(fp);
    let g = fp.gauss_formula();
    let mut dev = Dev::new();
    for t in fp.elements() {
        let sum: Complex64 = fp
            .elements()
            .map(|k| chi[fp.mul(fp.mul(k, k), t).index() as usize])
            .sum();
        let expected = if t.is_zero() {
            Complex64::new(fp.q() as f64, 0.0)
        } else {
            g * fp.eta(t) as f64
        };
        dev.record((sum - expected).norm());
    }
    Ok(dev.report(format!("gauss-one-dim(q={})", fp.q())))
}

/// Closed-form Gaussian sum against the direct definition.
pub fn verify_gauss_closed_form(fp: &FieldParams) -> Result<CheckReport, CheckError> {
    let direct = fp
        .gauss_direct()
        .map_err(|_| CheckError::TooLarge {
            identity: "gauss-closed-form",
            size: fp.q() as u128,
            limit: crate::field::GAUSS_DIRECT_LIMIT as u128,
        })?;
    let mut dev = Dev::new();
    dev.record((direct - fp.gauss_formula()).norm());
    Ok(dev.report(format!("gauss-closed-form(q={})", fp.q())))
}

/// The additive character of a weighted edge sum factors through vertex
/// conservation: for every edge vector k, summing
/// chi1(sum_e (x_u - x_v) k_e) over all vertex vectors x gives q^V
/// exactly when k is conservative at every vertex, else 0.
pub fn verify_char_factorization(
    g: &Multigraph,
    fp: &FieldParams,
) -> Result<CheckReport, CheckError> {
    let q = fp.q() as u128;
    let (n, m) = (g.n_vertices(), g.n_edges());
    let size = q
        .checked_pow((n + m) as u32)
        .unwrap_or(u128::MAX);
    guard("char-factorization", size, FACTORIZATION_TERM_LIMIT)?;
    let chi = chi_table(fp);
    let qn = (fp.q() as u64).pow(n as u32);
    let qm = (fp.q() as u64).pow(m as u32);
    let edges = g.edges();
    let mut dev = Dev::new();
    let mut k = vec![FieldElem::ZERO; m];
    for ki in 0..qm {
        let mut idx = ki;
        for slot in k.iter_mut() {
            *slot = fp.elem((idx % fp.q() as u64) as u32);
            idx /= fp.q() as u64;
        }
        // Direct double sum.
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut x = vec![FieldElem::ZERO; n];
        for xi in 0..qn {
            let mut idx = xi;
            for slot in x.iter_mut() {
                *slot = fp.elem((idx % fp.q() as u64) as u32);
                idx /= fp.q() as u64;
            }
            let mut s = FieldElem::ZERO;
            for (e, &(u, v)) in edges.iter().enumerate() {
                s = fp.add(s, fp.mul(fp.sub(x[u], x[v]), k[e]));
            }
            lhs += chi[s.index() as usize];
        }
        // Conservation side: q^V times the product of per-vertex zero
        // indicators of the signed incidence sums.
        let mut net = vec![FieldElem::ZERO; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            net[u] = fp.sub(net[u], k[e]);
            net[v] = fp.add(net[v], k[e]);
        }
        let conservative = net.iter().all(|s| s.is_zero());
        let rhs = if conservative { qn as f64 } else { 0.0 };
        dev.record((lhs - Complex64::new(rhs, 0.0)).norm());
    }
    Ok(dev.report(format!("char-factorization(q={},m={})", fp.q(), m)))
}

/// The double character sum over nonzero edge weights and vertex
/// potentials reproduces the nowhere-zero flow count:
/// q^-V * sum_alpha sum_x chi1(sum_e alpha_e (x_u - x_v)^2) = F(q).
pub fn verify_flow_double_sum(
    g: &Multigraph,
    fp: &FieldParams,
) -> Result<CheckReport, CheckError> {
    let q = fp.q() as u128;
    let (n, m) = (g.n_vertices(), g.n_edges());
    let size = (q - 1)
        .checked_pow(m as u32)
        .and_then(|a| a.checked_mul(q.checked_pow(n as u32)?))
        .unwrap_or(u128::MAX);
    guard("flow-double-sum", size, DOUBLE_SUM_TERM_LIMIT)?;
    let target = flow_poly(g)
        .map_err(|_| CheckError::TooLarge {
            identity: "flow-double-sum",
            size: m as u128,
            limit: crate::flowpoly::FLOW_POLY_EDGE_LIMIT as u128,
        })?
        .eval(fp.q() as i128);
    let chi = chi_table(fp);
    let qv = (fp.q() as u64).pow(n as u32);
    let edges = g.edges();
    let mut total = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    let mut x = vec![FieldElem::ZERO; n];
    let mut d2 = vec![FieldElem::ZERO; m];
    for xi in 0..qv {
        let mut idx = xi;
        for slot in x.iter_mut() {
            *slot = fp.elem((idx % fp.q() as u64) as u32);
            idx /= fp.q() as u64;
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            let d = fp.sub(x[u], x[v]);
            d2[e] = fp.mul(d, d);
        }
        // All nonzero weight vectors by odometer; the running form value
        // updates by (new - old) * d2 on the changed digit.
        let mut alpha = vec![FieldElem::ONE; m];
        let mut s = FieldElem::ZERO;
        for &d in &d2 {
            s = fp.add(s, d);
        }
        'assignments: loop {
            total += chi[s.index() as usize];
            terms += 1;
            for e in 0..m {
                let cur = alpha[e].index();
                if cur + 1 < fp.q() {
                    let next = fp.elem(cur + 1);
                    s = fp.add(s, fp.mul(fp.sub(next, alpha[e]), d2[e]));
                    alpha[e] = next;
                    continue 'assignments;
                }
                let next = FieldElem::ONE;
                s = fp.add(s, fp.mul(fp.sub(next, alpha[e]), d2[e]));
                alpha[e] = next;
            }
            break;
        }
    }
    let got = total / qv as f64;
    let mut dev = Dev::new();
    dev.record((got - Complex64::new(target as f64, 0.0)).norm());
    let mut report = dev.report(format!("flow-double-sum(q={})", fp.q()));
    report.instances = terms;
    Ok(report)
}

/// Sum of chi1 over a quadratic form x^T B x equals
/// q^n * eta(minor) * (g/q)^r, where r and the minor come from the
/// elimination certificate; exercised on seeded random symmetric B.
pub fn verify_multidim_gauss(
    n: usize,
    fp: &FieldParams,
    trials: u64,
) -> Result<CheckReport, CheckError> {
    let q = fp.q() as u128;
    let size = q.checked_pow(n as u32).unwrap_or(u128::MAX);
    guard("multidim-gauss", size, MULTIDIM_SPACE_LIMIT)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED ^ ((n as u64) << 32) ^ fp.q() as u64);
    let chi = chi_table(fp);
    let ratio = fp.gauss_formula() / fp.q() as f64;
    let qn = (fp.q() as u64).pow(n as u32);
    let mut dev = Dev::new();
    for _ in 0..trials {
        let mut b = SymmetricFqMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                b.set(i, j, fp.elem(rng.random_range(0..fp.q())));
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut x = vec![FieldElem::ZERO; n];
        for xi in 0..qn {
            let mut idx = xi;
            for slot in x.iter_mut() {
                *slot = fp.elem((idx % fp.q() as u64) as u32);
                idx /= fp.q() as u64;
            }
            let mut form = FieldElem::ZERO;
            for i in 0..n {
                let mut row = FieldElem::ZERO;
                for (j, &xj) in x.iter().enumerate() {
                    row = fp.add(row, fp.mul(b.get(i, j), xj));
                }
                form = fp.add(form, fp.mul(x[i], row));
            }
            sum += chi[form.index() as usize];
        }
        // Rank 0 gives eta_minor = +1 (empty minor), so the closed form
        // degenerates to q^n as it must.
        let cert = max_nonsingular_principal(&b, fp);
        let mut expected = Complex64::new(qn as f64 * cert.eta_minor as f64, 0.0);
        for _ in 0..cert.rank {
            expected *= ratio;
        }
        dev.record((sum - expected).norm());
    }
    Ok(dev.report(format!("multidim-gauss(n={},q={})", n, fp.q())))
}

/// Triangle identity: q - 1 equals the sum over nonzero weight triples
/// of eta(a1 a2 + a1 a3 + a2 a3) times (g/q)^2.
pub fn verify_k3_identity(fp: &FieldParams) -> Result<CheckReport, CheckError> {
    guard(
        "triangle-identity",
        fp.q() as u128,
        TRIANGLE_FIELD_LIMIT as u128,
    )?;
    let mut acc = 0i64;
    for a1 in 1..fp.q() {
        for a2 in 1..fp.q() {
            for a3 in 1..fp.q() {
                let (x, y, z) = (fp.elem(a1), fp.elem(a2), fp.elem(a3));
                let s = fp.add(
                    fp.add(fp.mul(x, y), fp.mul(x, z)),
                    fp.mul(y, z),
                );
                acc += fp.eta(s) as i64;
            }
        }
    }
    let ratio = fp.gauss_formula() / fp.q() as f64;
    let got = ratio * ratio * acc as f64;
    let mut dev = Dev::new();
    dev.record((got - Complex64::new(fp.q() as f64 - 1.0, 0.0)).norm());
    let mut report = dev.report(format!("triangle-identity(q={})", fp.q()));
    report.instances = ((fp.q() - 1) as u64).pow(3);
    Ok(report)
}

/// Exhaustive agreement of the two spanning-tree-sum routes over every
/// weight assignment (zeros included); deviation counts mismatches.
pub fn verify_tree_sums(g: &Multigraph, fp: &FieldParams) -> Result<CheckReport, CheckError> {
    const ID: &str = "tree-sum-routes";
    let q = fp.q() as u128;
    let m = g.n_edges();
    let size = q.checked_pow(m as u32).unwrap_or(u128::MAX);
    guard(ID, size, TREE_SUM_SPACE_LIMIT)?;
    let trees = spanning_trees(g).map_err(|source| CheckError::Oracle { identity: ID, source })?;
    let mut dev = Dev::new();
    let mut w = vec![FieldElem::ZERO; m];
    for wi in 0..size as u64 {
        let mut idx = wi;
        for slot in w.iter_mut() {
            *slot = fp.elem((idx % fp.q() as u64) as u32);
            idx /= fp.q() as u64;
        }
        let mut direct = FieldElem::ZERO;
        for t in &trees {
            let mut prod = FieldElem::ONE;
            for &e in t {
                prod = fp.mul(prod, w[e]);
            }
            direct = fp.add(direct, prod);
        }
        let via_det =
            tree_sum_det(g, fp, &w).map_err(|source| CheckError::Oracle { identity: ID, source })?;
        dev.record(if direct == via_det { 0.0 } else { 1.0 });
    }
    Ok(dev.report(format!("tree-sum-routes(q={},m={})", fp.q(), m)))
}

/// Seeded random agreement of forest sums with the principal minor
/// obtained by deleting the root rows and columns.
pub fn verify_forest_minors(
    g: &Multigraph,
    fp: &FieldParams,
    trials: u64,
) -> Result<CheckReport, CheckError> {
    const ID: &str = "forest-minors";
    let n = g.n_vertices();
    let mut rng =
        ChaCha8Rng::seed_from_u64(CHECK_SEED ^ ((g.n_edges() as u64) << 24) ^ fp.q() as u64);
    let mut dev = Dev::new();
    for _ in 0..trials {
        let w: Vec<FieldElem> = (0..g.n_edges())
            .map(|_| fp.elem(rng.random_range(0..fp.q())))
            .collect();
        let mut roots: Vec<usize> = (0..n).filter(|_| rng.random_range(0..3u8) == 0).collect();
        if roots.is_empty() {
            roots.push(rng.random_range(0..n));
        }
        let keep: Vec<usize> = (0..n).filter(|v| !roots.contains(v)).collect();
        let lap = laplacian(g, fp, &w);
        let minor_det = det_fq(&lap.principal_submatrix(&keep), fp);
        let forest =
            forest_sum(g, fp, &w, &roots).map_err(|source| CheckError::Oracle { identity: ID, source })?;
        dev.record(if forest == minor_det { 0.0 } else { 1.0 });
    }
    Ok(dev.report(format!("forest-minors(q={},m={})", fp.q(), g.n_edges())))
}
