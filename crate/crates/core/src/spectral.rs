//! Representations by unit vectors, Gram matrices, and spectral bounds.
//!
//! A representation assigns a unit vector to every vertex of a graph. It is
//! *orthonormal* when non-adjacent vertices receive orthogonal vectors,
//! *faithful* when adjacent vertices additionally receive non-orthogonal
//! ones, and *nonnegative* when all pairwise inner products are >= 0.
//!
//! Factored representations (tensor families) are validated with exact
//! integer zero tests. Explicit-coordinate representations are validated
//! against a tolerance with a dead zone: inner products that are neither
//! clearly zero nor clearly nonzero are reported as indeterminate rather
//! than silently classified.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::construction::FamilySample;
use crate::error::Error;
use crate::fp;
use crate::graph::Graph;
use crate::hypercube::MAX_MATERIALIZE;
use crate::matrix::{jacobi_eigen, SymMatrix};

/// Dense-storage guard for Gram matrices.
pub const MAX_GRAM_N: usize = 4096;

/// Unit-norm tolerance for explicit-coordinate vectors.
pub const NORM_TOL: f64 = 1e-9;

/// Vertex vectors, either in factored tensor form or as explicit coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorForm {
    Factored(FamilySample),
    Explicit { dim: usize, vectors: Vec<Vec<f64>> },
}

/// An assignment of unit vectors to the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub graph: Graph,
    pub form: VectorForm,
}

impl Representation {
    pub fn factored(graph: Graph, family: FamilySample) -> Result<Self, Error> {
        if family.n() != graph.n() {
            return Err(Error::DimensionMismatch(format!(
                "family of {} vectors on a graph with {} vertices",
                family.n(),
                graph.n()
            )));
        }
        Ok(Self { graph, form: VectorForm::Factored(family) })
    }

    pub fn explicit(graph: Graph, vectors: Vec<Vec<f64>>) -> Result<Self, Error> {
        if vectors.len() != graph.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} vectors on a graph with {} vertices",
                vectors.len(),
                graph.n()
            )));
        }
        let dim = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("vectors of mixed dimension".into()));
        }
        Ok(Self { graph, form: VectorForm::Explicit { dim, vectors } })
    }

    /// The standard-basis representation `v -> e_v` (orthonormal for every
    /// graph, faithful only for the empty one).
    pub fn identity_basis(graph: Graph) -> Self {
        let n = graph.n();
        let vectors = (0..n)
            .map(|v| {
                let mut e = vec![0.0; n];
                e[v] = 1.0;
                e
            })
            .collect();
        Self { graph, form: VectorForm::Explicit { dim: n, vectors } }
    }

    /// The all-same-vector representation (orthonormal only for complete graphs).
    pub fn constant(graph: Graph) -> Self {
        let n = graph.n();
        Self {
            graph,
            form: VectorForm::Explicit { dim: 1, vectors: vec![vec![1.0]; n] },
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Ambient dimension (`k^m` in factored form), if it fits in a `u128`.
    pub fn dim(&self) -> Option<u128> {
        match &self.form {
            VectorForm::Factored(f) => f.dim(),
            VectorForm::Explicit { dim, .. } => Some(*dim as u128),
        }
    }

    /// Converts a factored representation to explicit coordinates
    /// (guarded at `k^m <= 2^20`). Explicit input is returned unchanged.
    pub fn materialized(&self) -> Result<Self, Error> {
        match &self.form {
            VectorForm::Explicit { .. } => Ok(self.clone()),
            VectorForm::Factored(fam) => {
                let vectors: Result<Vec<Vec<f64>>, Error> =
                    fam.vectors.iter().map(|v| v.materialize()).collect();
                Representation::explicit(self.graph.clone(), vectors?)
            }
        }
    }

    /// The squared lift `g(v) = f(v) f(v)^T`, flattened row-major, under the
    /// Frobenius inner product. The lift of any orthonormal representation
    /// is nonnegative since `<g(u), g(v)> = <f(u), f(v)>^2`.
    pub fn lift_squared(&self) -> Result<Self, Error> {
        let explicit = self.materialized()?;
        let VectorForm::Explicit { dim, vectors } = &explicit.form else {
            unreachable!()
        };
        let r = *dim;
        let lifted_dim = (r as u128) * (r as u128);
        if lifted_dim > MAX_MATERIALIZE as u128 {
            return Err(Error::SizeGuard(format!(
                "lifted dimension {lifted_dim} exceeds guard {MAX_MATERIALIZE}"
            )));
        }
        let lifted = vectors
            .iter()
            .map(|f| {
                let mut g = Vec::with_capacity(r * r);
                for i in 0..r {
                    for j in 0..r {
                        g.push(f[i] * f[j]);
                    }
                }
                g
            })
            .collect();
        Representation::explicit(self.graph.clone(), lifted)
    }

    /// Inner product of the vectors at `u` and `v`.
    pub fn inner_product(&self, u: usize, v: usize) -> Result<f64, Error> {
        match &self.form {
            VectorForm::Factored(f) => f.vectors[u].normalized_inner_product(&f.vectors[v]),
            VectorForm::Explicit { vectors, .. } => {
                Ok(vectors[u].iter().zip(&vectors[v]).map(|(a, b)| a * b).sum())
            }
        }
    }
}

/// The Gram matrix `M(u, v) = <f(u), f(v)>` of a representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(SymMatrix);

impl GramMatrix {
    pub fn matrix(&self) -> &SymMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.0.get(u, v)
    }
}

/// Computes the Gram matrix (guarded at `n <= 4096` dense entries).
///
/// Factored form preserves exact zeros; explicit form takes dot products.
pub fn gram(rep: &Representation) -> Result<GramMatrix, Error> {
    let n = rep.n();
    if n > MAX_GRAM_N {
        return Err(Error::SizeGuard(format!("n = {n} exceeds Gram guard {MAX_GRAM_N}")));
    }
    let mut m = SymMatrix::zeros(n);
    for u in 0..n {
        for v in u..n {
            let ip = if u == v {
                match &rep.form {
                    VectorForm::Factored(_) => 1.0,
                    VectorForm::Explicit { .. } => rep.inner_product(u, v)?,
                }
            } else {
                rep.inner_product(u, v)?
            };
            m.set_sym(u, v, ip);
        }
    }
    Ok(GramMatrix(m))
}

/// Largest eigenvalue of a Gram matrix.
pub fn lambda_max(m: &GramMatrix) -> Result<f64, Error> {
    Ok(jacobi_eigen(m.matrix())?.values[0])
}

/// Which representation constraint a reported pair concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Non-adjacent vertices must receive orthogonal vectors.
    NonEdgeZero,
    /// Adjacent vertices must receive non-orthogonal vectors (faithfulness).
    EdgeNonzero,
    /// All pairs must have nonnegative inner product.
    Nonnegative,
    /// Every vector must have unit norm.
    UnitNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Violated,
    /// The value fell in the dead zone between clear-zero and clear-nonzero.
    Indeterminate,
}

/// One reported pair (or vertex, for norm checks with `v == u`).
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub u: usize,
    pub v: usize,
    pub value: f64,
    pub constraint: Constraint,
    pub verdict: Verdict,
}

/// Validation flags; `None` means the checks hit indeterminate pairs and the
/// flag could not be decided either way.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub orthonormal: Option<bool>,
    pub faithful: Option<bool>,
    pub nonnegative: Option<bool>,
    /// Factored inputs are decided exactly; tolerances were never consulted.
    pub exact: bool,
    pub reports: Vec<PairReport>,
}

impl ValidationReport {
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal == Some(true)
    }
    pub fn is_faithful(&self) -> bool {
        self.faithful == Some(true)
    }
    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative == Some(true)
    }
}

/// Checks every pair against the graph.
///
/// Explicit form classifies `|ip| <= tol/10` as zero and `|ip| >= tol` as
/// nonzero; the band in between is reported, not guessed. Factored form
/// ignores `tol` and decides exactly.
pub fn validate(rep: &Representation, tol: f64) -> ValidationReport {
    let n = rep.n();
    let mut reports = Vec::new();
    let exact = matches!(rep.form, VectorForm::Factored(_));
    let z_lo = tol / 10.0;
    let z_hi = tol;

    if let VectorForm::Explicit { vectors, .. } = &rep.form {
        for (v, f) in vectors.iter().enumerate() {
            let norm_sq: f64 = f.iter().map(|x| x * x).sum();
            if fp::abs(fp::sqrt(norm_sq) - 1.0) > NORM_TOL {
                reports.push(PairReport {
                    u: v,
                    v,
                    value: fp::sqrt(norm_sq),
                    constraint: Constraint::UnitNorm,
                    verdict: Verdict::Violated,
                });
            }
        }
    }

    for u in 0..n {
        for v in u + 1..n {
            let ip = rep.inner_product(u, v).expect("validated at construction");
            let edge = rep.graph.has_edge(u, v);
            if exact {
                if edge && ip == 0.0 {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::EdgeNonzero, verdict: Verdict::Violated });
                }
                if !edge && ip != 0.0 {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::NonEdgeZero, verdict: Verdict::Violated });
                }
                if ip < 0.0 {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::Nonnegative, verdict: Verdict::Violated });
                }
            } else {
                let mag = fp::abs(ip);
                if !edge {
                    if mag >= z_hi {
                        reports.push(PairReport { u, v, value: ip, constraint: Constraint::NonEdgeZero, verdict: Verdict::Violated });
                    } else if mag > z_lo {
                        reports.push(PairReport { u, v, value: ip, constraint: Constraint::NonEdgeZero, verdict: Verdict::Indeterminate });
                    }
                } else if mag <= z_lo {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::EdgeNonzero, verdict: Verdict::Violated });
                } else if mag < z_hi {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::EdgeNonzero, verdict: Verdict::Indeterminate });
                }
                if ip <= -z_hi {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::Nonnegative, verdict: Verdict::Violated });
                } else if ip < -z_lo {
                    reports.push(PairReport { u, v, value: ip, constraint: Constraint::Nonnegative, verdict: Verdict::Indeterminate });
                }
            }
        }
    }

    let flag = |constraints: &[Constraint]| -> Option<bool> {
        let mut indeterminate = false;
        for r in &reports {
            if constraints.contains(&r.constraint) {
                match r.verdict {
                    Verdict::Violated => return Some(false),
                    Verdict::Indeterminate => indeterminate = true,
                }
            }
        }
        if indeterminate {
            None
        } else {
            Some(true)
        }
    };

    let orthonormal = flag(&[Constraint::NonEdgeZero, Constraint::UnitNorm]);
    let faithful = match (orthonormal, flag(&[Constraint::EdgeNonzero])) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (None, _) | (_, None) => None,
        (Some(true), Some(true)) => Some(true),
    };
    let nonnegative = flag(&[Constraint::Nonnegative, Constraint::UnitNorm]);

    ValidationReport { orthonormal, faithful, nonnegative, exact, reports }
}

fn require_orthonormal(rep: &Representation, tol: f64) -> Result<ValidationReport, Error> {
    let report = validate(rep, tol);
    if !report.is_orthonormal() {
        return Err(Error::InvalidRepresentation {
            required: "orthonormal",
            detail: describe_failures(&report),
        });
    }
    Ok(report)
}

pub(crate) fn describe_failures(report: &ValidationReport) -> String {
    let mut s = String::new();
    for r in report.reports.iter().take(4) {
        s.push_str(&format!(
            "({}, {}) {:?} {:?} value {:.3e}; ",
            r.u, r.v, r.constraint, r.verdict, r.value
        ));
    }
    if report.reports.len() > 4 {
        s.push_str(&format!("... {} total", report.reports.len()));
    }
    if s.is_empty() {
        s.push_str("no pair reports");
    }
    s
}

/// Numeric-rank threshold relative to the largest singular value.
pub const RANK_REL_TOL: f64 = 1e-8;

fn numeric_rank_of_eigdata(values: &[f64]) -> usize {
    let max = values.iter().fold(0.0f64, |a, &b| a.max(fp::abs(b)));
    if max == 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| fp::abs(v) > RANK_REL_TOL * max).count()
}

/// Upper bound on the minimum semidefinite rank: the numeric rank of the
/// Gram matrix. Requires the representation to validate orthonormal; for
/// faithful representations the same number also bounds the faithful
/// variant.
pub fn msr_upper(rep: &Representation, tol: f64) -> Result<usize, Error> {
    require_orthonormal(rep, tol)?;
    let g = gram(rep)?;
    let eig = jacobi_eigen(g.matrix())?;
    let rank = numeric_rank_of_eigdata(&eig.values);
    if let Some(dim) = rep.dim() {
        debug_assert!(rank as u128 <= dim, "rank {rank} exceeds ambient dimension {dim}");
    }
    Ok(rank)
}

/// Certified lower bound on the theta value of the complement graph: the
/// largest Gram eigenvalue of an orthonormal representation.
///
/// Since the Gram has unit trace per vertex, `lambda_1 >= n / rank` holds and
/// is asserted.
pub fn theta_lower(rep: &Representation, tol: f64) -> Result<f64, Error> {
    require_orthonormal(rep, tol)?;
    let g = gram(rep)?;
    let eig = jacobi_eigen(g.matrix())?;
    let lambda1 = eig.values[0];
    let rank = numeric_rank_of_eigdata(&eig.values);
    let n = rep.n() as f64;
    assert!(
        rank == 0 || lambda1 >= n / rank as f64 - 1e-6 * n,
        "trace/rank bound violated: lambda1 = {lambda1}, n/rank = {}",
        n / rank as f64
    );
    Ok(lambda1)
}

/// Result of the squared-eigenvalue edge bound check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBoundCheck {
    /// `lambda_1(M)^2`.
    pub lambda1_sq: f64,
    /// `tr(M^2)`, computed as the sum of squared entries.
    pub trace_m2: f64,
    /// `2 |E| + n`.
    pub edge_bound: f64,
    pub ok: bool,
}

/// Checks `lambda_1(M)^2 <= tr(M^2) <= 2|E| + n` for an orthonormal
/// representation, within relative tolerance 1e-6.
pub fn check_edge_bound(rep: &Representation, tol: f64) -> Result<EdgeBoundCheck, Error> {
    require_orthonormal(rep, tol)?;
    let g = gram(rep)?;
    let lambda1 = lambda_max(&g)?;
    let lambda1_sq = lambda1 * lambda1;
    let trace_m2 = g.matrix().sum_of_squares();
    let edge_bound = (2 * rep.graph.edge_count() + rep.n()) as f64;
    let rel = 1e-6;
    let ok = lambda1_sq <= trace_m2 * (1.0 + rel) + rel
        && trace_m2 <= edge_bound * (1.0 + rel) + rel;
    Ok(EdgeBoundCheck { lambda1_sq, trace_m2, edge_bound, ok })
}

/// Rebuilds an explicit orthonormal representation from a PSD matrix with
/// zeros on non-edges (e.g. a repaired SDP solution).
///
/// Vertices whose diagonal is numerically zero receive a fresh coordinate of
/// their own, keeping them orthogonal to everything.
pub fn orthonormal_rep_from_psd(m: &SymMatrix, graph: Graph) -> Result<Representation, Error> {
    let n = m.n();
    if n != graph.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix of size {n} on a graph with {} vertices",
            graph.n()
        )));
    }
    let eig = jacobi_eigen(m)?;
    // vertices the solution barely uses would amplify factorization noise
    // under normalization; give them a fresh exactly-orthogonal coordinate
    let degenerate: Vec<usize> = (0..n).filter(|&v| m.get(v, v) <= 1e-8).collect();
    let dim = n + degenerate.len();
    let mut vectors = vec![vec![0.0; dim]; n];
    for (j, (&lam, evec)) in eig.values.iter().zip(&eig.vectors).enumerate() {
        let s = fp::sqrt(lam.max(0.0));
        for v in 0..n {
            vectors[v][j] = s * evec[v];
        }
    }
    for (extra, &v) in degenerate.iter().enumerate() {
        for x in vectors[v].iter_mut() {
            *x = 0.0;
        }
        vectors[v][n + extra] = 1.0;
    }
    for f in vectors.iter_mut() {
        let norm = fp::sqrt(f.iter().map(|x| x * x).sum());
        debug_assert!(norm > 0.0);
        for x in f.iter_mut() {
            *x /= norm;
        }
    }
    Representation::explicit(graph, vectors)
}
