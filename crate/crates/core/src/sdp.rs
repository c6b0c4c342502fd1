//! Semidefinite programs for the theta value of the complement and the
//! vector chromatic number, plus the certificate operations built on
//! nonnegative orthonormal representations.
//!
//! Both programs maximize the sum of all matrix entries over unit-trace PSD
//! matrices vanishing on the *non*-edges of the input graph; the vector
//! chromatic variant additionally forces nonnegative entries on edges and
//! the diagonal, so its feasible set is contained in the theta one and
//! `chi_vec(G) <= theta(complement G)` falls out of the encodings.
//!
//! NOTE on the constraint pattern: the sum formulation of the vector
//! chromatic number is sometimes printed with the zero and nonnegativity
//! patterns swapped (zeros on edges). That version evaluates to 1 on
//! complete graphs, contradicting the defining value `chi_vec(K_n) = n`,
//! and it rejects the Gram matrix of a nonnegative orthonormal
//! representation, which the certificate construction below feeds in as
//! feasible. We therefore implement zeros on non-edges and nonnegativity on
//! edges and the diagonal throughout.
//!
//! Solver: over-relaxed alternating projections (ADMM) between the entrywise
//! constraint set and the PSD cone, the latter projected by full
//! eigendecomposition. Everything is deterministic: fixed iteration order,
//! fixed over-relaxation 1.6, and a residual-balancing penalty update on a
//! fixed cadence.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fp;
use crate::graph::Graph;
use crate::matrix::{jacobi_eigen, SymMatrix};
use crate::spectral::{gram, validate, Representation};

/// Exact-solve guard; larger graphs get representation-based bounds only.
pub const MAX_SDP_N: usize = 32;
/// Residual target for both the primal and dual residuals.
pub const SDP_TOL: f64 = 1e-7;
/// Iteration cap.
pub const SDP_MAX_ITER: usize = 50_000;
const OVER_RELAX: f64 = 1.6;
/// Penalty rebalancing cadence and trigger ratio.
const RHO_INTERVAL: usize = 100;
const RHO_RATIO: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpVariant {
    /// Lovász theta of the complement: zeros on non-edges.
    ThetaBar,
    /// Vector chromatic number: zeros on non-edges, nonnegativity on edges
    /// and the diagonal.
    ChiVec,
}

/// Solver output. `certified_value` is the objective of the iterate after
/// repair to exact feasibility, so it is a safe-side (lower) estimate of the
/// true maximum regardless of solver slack.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub variant: SdpVariant,
    pub n: usize,
    pub x: SymMatrix,
    /// The iterate repaired to exact feasibility (zero pattern, sign
    /// pattern, PSD, unit trace); `certified_value` is its objective.
    pub x_certified: SymMatrix,
    pub objective: f64,
    pub certified_value: f64,
    /// `max(certified_value, 2)`; the vector chromatic number is defined as
    /// a minimum over kappa >= 2, so edgeless graphs report both the raw SDP
    /// value 1 and this floor. `None` for the theta variant.
    pub floored_value: Option<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean projection of `d` onto the probability simplex.
fn project_simplex(d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut u = d.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let cand = (css - 1.0) / (i + 1) as f64;
        if ui - cand > 0.0 {
            theta = cand;
        }
    }
    let _ = n;
    d.iter().map(|&x| (x - theta).max(0.0)).collect()
}

struct Patterns {
    n: usize,
    /// Off-diagonal non-edge pairs, forced to zero.
    zero: Vec<(usize, usize)>,
    /// Off-diagonal edge pairs, forced nonnegative in the chi variant.
    edge: Vec<(usize, usize)>,
}

impl Patterns {
    fn of(g: &Graph) -> Self {
        let n = g.n();
        let mut zero = Vec::new();
        let mut edge = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    edge.push((u, v));
                } else {
                    zero.push((u, v));
                }
            }
        }
        Self { n, zero, edge }
    }

    /// Projection onto the entrywise constraint set (zero pattern, sign
    /// pattern, unit trace). The constraint blocks touch disjoint entries,
    /// so the projection is exact.
    fn project(&self, x: &mut SymMatrix, variant: SdpVariant) {
        for &(u, v) in &self.zero {
            x.set_sym(u, v, 0.0);
        }
        match variant {
            SdpVariant::ThetaBar => {
                let shift = (1.0 - x.trace()) / self.n as f64;
                x.add_scaled_identity(shift);
            }
            SdpVariant::ChiVec => {
                for &(u, v) in &self.edge {
                    let val = x.get(u, v);
                    if val < 0.0 {
                        x.set_sym(u, v, 0.0);
                    }
                }
                let diag: Vec<f64> = (0..self.n).map(|i| x.get(i, i)).collect();
                for (i, d) in project_simplex(&diag).into_iter().enumerate() {
                    x.set_sym(i, i, d);
                }
            }
        }
    }
}

fn project_psd(x: &SymMatrix) -> Result<SymMatrix, Error> {
    let eig = jacobi_eigen(x)?;
    let n = x.n();
    let mut out = SymMatrix::zeros(n);
    let buf = out.as_mut_slice();
    for (lam, vec) in eig.values.iter().zip(&eig.vectors) {
        if *lam <= 0.0 {
            continue;
        }
        for i in 0..n {
            let li = lam * vec[i];
            for j in 0..n {
                buf[i * n + j] += li * vec[j];
            }
        }
    }
    Ok(out)
}

fn frob_dist(a: &SymMatrix, b: &SymMatrix) -> f64 {
    fp::sqrt(
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum(),
    )
}

/// Repairs an entrywise-feasible iterate to exact feasibility (PSD shift and
/// trace renormalization) and evaluates the objective there.
fn certify(x: &SymMatrix, patterns: &Patterns, variant: SdpVariant) -> Result<(SymMatrix, f64), Error> {
    let mut xc = x.clone();
    for &(u, v) in &patterns.zero {
        xc.set_sym(u, v, 0.0);
    }
    if variant == SdpVariant::ChiVec {
        for &(u, v) in &patterns.edge {
            if xc.get(u, v) < 0.0 {
                xc.set_sym(u, v, 0.0);
            }
        }
        for i in 0..patterns.n {
            let d = xc.get(i, i);
            if d < 0.0 {
                xc.set_sym(i, i, 0.0);
            }
        }
    }
    let lam_min = jacobi_eigen(&xc)?.values.last().copied().unwrap_or(0.0);
    if lam_min < 0.0 {
        xc.add_scaled_identity(-lam_min);
    }
    let tr = xc.trace();
    if tr > 0.0 {
        xc.scale(1.0 / tr);
    }
    let value = xc.total();
    Ok((xc, value))
}

fn solve(g: &Graph, variant: SdpVariant) -> Result<SdpSolution, Error> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("SDP on the empty graph".into()));
    }
    if n > MAX_SDP_N {
        return Err(Error::SizeGuard(format!("n = {n} exceeds SDP guard {MAX_SDP_N}")));
    }
    let patterns = Patterns::of(g);
    let nf = n as f64;

    let mut z = SymMatrix::zeros(n);
    z.add_scaled_identity(1.0 / nf);
    let mut u = SymMatrix::zeros(n);
    let mut rho = 1.0f64;

    let mut x = SymMatrix::zeros(n);
    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=SDP_MAX_ITER {
        iterations = it;
        // x = P_entrywise(z - u + J / rho)
        {
            let xs = x.as_mut_slice();
            let zs = z.as_slice();
            let us = u.as_slice();
            let jr = 1.0 / rho;
            for i in 0..xs.len() {
                xs[i] = zs[i] - us[i] + jr;
            }
        }
        patterns.project(&mut x, variant);

        // over-relaxed z and u updates
        let mut xh = x.clone();
        {
            let xs = xh.as_mut_slice();
            let zs = z.as_slice();
            for i in 0..xs.len() {
                xs[i] = OVER_RELAX * xs[i] + (1.0 - OVER_RELAX) * zs[i];
            }
        }
        let mut w = xh.clone();
        {
            let ws = w.as_mut_slice();
            let us = u.as_slice();
            for i in 0..ws.len() {
                ws[i] += us[i];
            }
        }
        let z_new = project_psd(&w)?;
        {
            let us = u.as_mut_slice();
            let xs = xh.as_slice();
            let zs = z_new.as_slice();
            for i in 0..us.len() {
                us[i] += xs[i] - zs[i];
            }
        }
        primal = frob_dist(&x, &z_new);
        dual = rho * frob_dist(&z_new, &z);
        z = z_new;
        if primal < SDP_TOL && dual < SDP_TOL {
            converged = true;
            break;
        }
        // deterministic residual balancing
        if it % RHO_INTERVAL == 0 {
            if primal > RHO_RATIO * dual && rho < 1e6 {
                rho *= 2.0;
                u.scale(0.5);
            } else if dual > RHO_RATIO * primal && rho > 1e-6 {
                rho *= 0.5;
                u.scale(2.0);
            }
        }
    }

    let objective = x.total();
    let (x_certified, certified_value) = certify(&x, &patterns, variant)?;
    let floored_value = match variant {
        SdpVariant::ThetaBar => None,
        SdpVariant::ChiVec => Some(certified_value.max(2.0)),
    };
    Ok(SdpSolution {
        variant,
        n,
        x,
        x_certified,
        objective,
        certified_value,
        floored_value,
        primal_residual: primal,
        dual_residual: dual,
        iterations,
        converged,
    })
}

/// Theta value of the complement graph: maximize the entry sum over
/// unit-trace PSD matrices vanishing on non-edges of `g`.
pub fn solve_theta_bar(g: &Graph) -> Result<SdpSolution, Error> {
    solve(g, SdpVariant::ThetaBar)
}

/// Vector chromatic number of `g`: the theta-bar program restricted to
/// entrywise-nonnegative matrices on edges and the diagonal.
pub fn solve_chi_vec(g: &Graph) -> Result<SdpSolution, Error> {
    solve(g, SdpVariant::ChiVec)
}

fn require_explicit_unit(x: &[f64]) -> Result<(), Error> {
    let norm: f64 = fp::sqrt(x.iter().map(|a| a * a).sum());
    if fp::abs(norm - 1.0) > 1e-10 {
        return Err(Error::InvalidParameter(format!("certificate vector has norm {norm}")));
    }
    Ok(())
}

/// Lower bound on the vector chromatic number from a nonnegative orthonormal
/// representation and a unit direction: the sum of squared projections
/// `sum_v <f(v), x>^2`.
pub fn chi_vec_certificate(rep: &Representation, x: &[f64], tol: f64) -> Result<f64, Error> {
    let report = validate(rep, tol);
    if !(report.is_orthonormal() && report.is_nonnegative()) {
        return Err(Error::InvalidRepresentation {
            required: "nonnegative orthonormal",
            detail: crate::spectral::describe_failures(&report),
        });
    }
    require_explicit_unit(x)?;
    let explicit = rep.materialized()?;
    let crate::spectral::VectorForm::Explicit { dim, vectors } = &explicit.form else {
        unreachable!()
    };
    if x.len() != *dim {
        return Err(Error::DimensionMismatch(format!(
            "direction of length {} in a {dim}-dimensional representation",
            x.len()
        )));
    }
    Ok(vectors
        .iter()
        .map(|f| {
            let d: f64 = f.iter().zip(x).map(|(a, b)| a * b).sum();
            d * d
        })
        .sum())
}

/// A certificate/bound pair from one of the squared-lift constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftWitness {
    /// The realized certificate `sum_v <g(v), B>_F^2`, a lower bound on the
    /// vector chromatic number.
    pub certificate: f64,
    /// The closed-form bound the construction guarantees.
    pub bound: f64,
}

/// Certificate from lifting the top Gram eigenvector: with `g(v) = f(v)f(v)^T`
/// and `B = (Lx)(Lx)^T / lambda_1`, the certificate evaluates to
/// `lambda_1^2 * sum_v x(v)^4 >= lambda_1^2 / n`.
pub fn witness_eigen_lift(rep: &Representation, tol: f64) -> Result<LiftWitness, Error> {
    let report = validate(rep, tol);
    if !report.is_orthonormal() {
        return Err(Error::InvalidRepresentation {
            required: "orthonormal",
            detail: crate::spectral::describe_failures(&report),
        });
    }
    let g = gram(rep)?;
    let eig = jacobi_eigen(g.matrix())?;
    let lambda1 = eig.values[0];
    let x = &eig.vectors[0];
    let n = rep.n() as f64;
    // <B, B>_F = (x^T M x)^2 / lambda_1^2 must be 1
    let mx = g.matrix().mul_vec(x);
    let xmx: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
    let bb = (xmx * xmx) / (lambda1 * lambda1);
    assert!(fp::abs(bb - 1.0) <= 1e-8, "witness matrix not unit norm: <B,B> = {bb}");
    let sum_x4: f64 = x.iter().map(|&v| v * v * v * v).sum();
    let certificate = lambda1 * lambda1 * sum_x4;
    let bound = lambda1 * lambda1 / n;
    assert!(
        certificate >= bound - 1e-9 * (1.0 + fp::abs(bound)),
        "power-mean step violated: certificate {certificate} < bound {bound}"
    );
    Ok(LiftWitness { certificate, bound })
}

/// Certificate from lifting against the normalized identity: with
/// `B = I / sqrt(r)` the certificate evaluates to `n / r` exactly, for an
/// `r`-dimensional orthonormal representation.
pub fn witness_identity_lift(rep: &Representation, tol: f64) -> Result<LiftWitness, Error> {
    let report = validate(rep, tol);
    if !report.is_orthonormal() {
        return Err(Error::InvalidRepresentation {
            required: "orthonormal",
            detail: crate::spectral::describe_failures(&report),
        });
    }
    let explicit = rep.materialized()?;
    let crate::spectral::VectorForm::Explicit { dim, vectors } = &explicit.form else {
        unreachable!()
    };
    let r = *dim as f64;
    let certificate: f64 = vectors
        .iter()
        .map(|f| {
            // <f f^T, I / sqrt(r)>_F = tr(f f^T) / sqrt(r) = ||f||^2 / sqrt(r)
            let trace: f64 = f.iter().map(|a| a * a).sum();
            assert!(fp::abs(trace - 1.0) <= 1e-8, "lifted vector trace {trace} != 1");
            (trace / fp::sqrt(r)) * (trace / fp::sqrt(r))
        })
        .sum();
    let bound = rep.n() as f64 / r;
    Ok(LiftWitness { certificate, bound })
}

/// Checks a vector `kappa`-coloring: every edge `uv` needs
/// `<f(u), f(v)> <= -1 / (kappa - 1)` (within 1e-10 slack). A `true` result
/// certifies that the vector chromatic number is at most `kappa`.
pub fn validate_vector_coloring(
    vectors: &[Vec<f64>],
    g: &Graph,
    kappa: f64,
) -> Result<bool, Error> {
    if kappa < 2.0 {
        return Err(Error::InvalidParameter(format!("kappa = {kappa} must be >= 2")));
    }
    if vectors.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors on a graph with {} vertices",
            vectors.len(),
            g.n()
        )));
    }
    for v in vectors {
        require_explicit_unit(v)?;
    }
    let threshold = -1.0 / (kappa - 1.0) + 1e-10;
    for (u, v) in g.edges() {
        let ip: f64 = vectors[u].iter().zip(&vectors[v]).map(|(a, b)| a * b).sum();
        if ip > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n` unit vectors with pairwise inner product exactly `-1/(n-1)` (the
/// vertices of a regular simplex), the classical vector `n`-coloring of the
/// complete graph.
pub fn simplex_vectors(n: usize) -> Result<Vec<Vec<f64>>, Error> {
    if n < 2 {
        return Err(Error::InvalidParameter("simplex needs n >= 2".into()));
    }
    let nf = n as f64;
    let scale = 1.0 / fp::sqrt(1.0 - 1.0 / nf);
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|c| {
                    let e = if c == i { 1.0 } else { 0.0 };
                    (e - 1.0 / nf) * scale
                })
                .collect()
        })
        .collect())
}
