//! Numeric Perron–Frobenius machinery.
//!
//! Power iteration on the 0-1 matrix `T(1)` (and its transpose) yields the
//! spectral radius with left and right eigenvectors, from which the growth
//! constants of any aperiodic strongly-connected digraph follow. Callers
//! must have verified aperiodicity and strong connectivity; the iteration
//! itself only reports what it sees.

use num_traits::Float;
use serde::Serialize;

use crate::closed_forms::{AsymptoticEstimate, ConstValue, Source};
use crate::error::{Error, Result};
use crate::restriction::RestrictionDigraph;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Spectral radius with positive left/right eigenvectors, `left . right = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct PerronData<F> {
    pub rho: F,
    pub right: Vec<F>,
    pub left: Vec<F>,
    pub iterations: usize,
    pub residual: F,
}

pub type Perron = PerronData<f64>;

fn matvec<F: Float>(arcs: &[Vec<usize>], x: &[F], transpose: bool) -> Vec<F> {
    let mut y = vec![F::zero(); x.len()];
    for (u, outs) in arcs.iter().enumerate() {
        for &v in outs {
            if transpose {
                y[v] = y[v] + x[u];
            } else {
                y[u] = y[u] + x[v];
            }
        }
    }
    y
}

fn rayleigh<F: Float>(x: &[F], ax: &[F]) -> F {
    let mut num = F::zero();
    let mut den = F::zero();
    for (a, b) in x.iter().zip(ax) {
        num = num + *a * *b;
        den = den + *a * *a;
    }
    num / den
}

fn power_iterate<F: Float>(
    arcs: &[Vec<usize>],
    transpose: bool,
    tol: F,
    max_iter: usize,
) -> Result<(F, Vec<F>, usize)> {
    let n = arcs.len();
    // deterministic all-ones start
    let mut x = vec![F::one(); n];
    let mut prev = F::nan();
    for it in 1..=max_iter {
        let ax = matvec(arcs, &x, transpose);
        let rho = rayleigh(&x, &ax);
        let scale = ax.iter().fold(F::zero(), |m, &v| m.max(v.abs()));
        if scale == F::zero() {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: f64::INFINITY,
            });
        }
        x = ax.iter().map(|&v| v / scale).collect();
        if !prev.is_nan() && (rho - prev).abs() <= tol * F::one().max(rho.abs()) {
            return Ok((rho, x, it));
        }
        prev = rho;
    }
    let ax = matvec(arcs, &x, transpose);
    let rho = rayleigh(&x, &ax);
    let mut residual = F::zero();
    for (a, b) in ax.iter().zip(&x) {
        residual = residual.max((*a - rho * *b).abs());
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Runs power iteration on `T(1)` and its transpose. Preconditions (checked
/// by the caller): the recurrent digraph is strongly connected with cycle
/// gcd 1, under which the iteration converges to a simple dominant
/// eigenvalue with strictly positive eigenvectors.
pub fn perron<F: Float>(
    digraph: &RestrictionDigraph,
    tol: F,
    max_iter: usize,
) -> Result<PerronData<F>> {
    let arcs = digraph.arcs();
    let (rho_r, right, it_r) = power_iterate(arcs, false, tol, max_iter)?;
    let (_rho_l, left, it_l) = power_iterate(arcs, true, tol, max_iter)?;

    if right.iter().chain(&left).any(|&v| v <= F::zero()) {
        return Err(Error::Unsupported(
            "eigenvector is not strictly positive; digraph is likely periodic or reducible".into(),
        ));
    }
    // normalize left . right = 1
    let mut dot = F::zero();
    for (l, r) in left.iter().zip(&right) {
        dot = dot + *l * *r;
    }
    let left: Vec<F> = left.iter().map(|&v| v / dot).collect();

    let ax = matvec(arcs, &right, false);
    let mut residual = F::zero();
    for (a, b) in ax.iter().zip(&right) {
        residual = residual.max((*a - rho_r * *b).abs());
    }
    Ok(PerronData {
        rho: rho_r,
        right,
        left,
        iterations: it_r.max(it_l),
        residual,
    })
}

/// Growth constants from the spectral data:
/// `A = (1/|G|) (alpha(1) . g) (h . beta_b(1)) rho^(-1-b/span)` and
/// `B = rho^(1/span)`, where `alpha(1)` and `beta_b(1)` are the integer
/// degree vectors of the start and terminal arcs.
pub fn asymptotic_constants(
    digraph: &RestrictionDigraph,
    b: usize,
    perron: &Perron,
) -> Result<AsymptoticEstimate> {
    let n = digraph.recurrent().len();
    let terminal = digraph.terminal_arcs(b).ok_or(Error::NoTerminal { b })?;
    if terminal.is_empty() {
        return Err(Error::NoTerminal { b });
    }
    let mut alpha_dot_g = 0.0;
    for &v in digraph.start_arcs() {
        alpha_dot_g += perron.right[v];
    }
    let mut beta = vec![0.0f64; n];
    for (u, _) in terminal {
        beta[*u] += 1.0;
    }
    let h_dot_beta: f64 = perron.left.iter().zip(&beta).map(|(l, b)| l * b).sum();
    let span = digraph.span() as f64;
    let order = digraph.group().order() as f64;
    let a = alpha_dot_g * h_dot_beta * perron.rho.powf(-1.0 - b as f64 / span) / order;
    AsymptoticEstimate::checked(
        ConstValue::Approx(a),
        ConstValue::Approx(perron.rho.powf(1.0 / span)),
        b,
        Source::Spectral,
    )
}
