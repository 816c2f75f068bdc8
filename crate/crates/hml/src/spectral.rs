//! Spectral radius, operator norms and numerical radius for nonnegative
//! matrices, with Collatz-Wielandt certificates, plus an independent
//! characteristic-polynomial oracle for small dimensions.
//!
//! # Spectral radius engine
//!
//! Plain power iteration stalls on reducible or periodic matrices (a
//! permutation matrix has several eigenvalues on the spectral circle, a
//! nilpotent one has none dominating). The engine therefore runs an
//! epsilon-regularized continuation: for a decreasing ladder of epsilons it
//! power-iterates `M = A + eps*J + eps*I` (J all-ones), which is strictly
//! positive and hence primitive, and certifies each level with the
//! Collatz-Wielandt bracket
//!
//! ```text
//!   min_i (Mx)_i / x_i  <=  rho(M)  <=  max_i (Mx)_i / x_i    (x > 0)
//! ```
//!
//! The ladder is accepted once two successive levels agree within the
//! requested tolerance; rho(M_eps) decreases to rho(A) monotonically as eps
//! shrinks, so the agreement bounds the remaining continuation error.
//! Inside a level the iteration vector is advanced by `M + s*I` with `s`
//! set to the running estimate; the shift leaves the Perron pair unchanged
//! while keeping the bracket contracting when the dominant eigenvalue sits
//! on a cycle of the spectral circle.
//!
//! Two exact short-cuts keep zero chains exact: an acyclic support pattern
//! means the matrix is nilpotent and rho = 0 with no iteration at all, and
//! the final bracket is re-measured on A itself (both Collatz-Wielandt
//! bounds hold for any positive test vector), with the regularization
//! offsets subtracted exactly, so the reported bracket is rigorous for A
//! and the value is clamped into it.

use crate::error::{Error, Result};
use crate::matrix::NonNegativeMatrix;
use num_complex::Complex64;

/// Tolerance used by the convenience entry points ([`spectral_radius_value`],
/// [`operator_norm`], [`numerical_radius`]).
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap per epsilon level.
const LEVEL_ITERATION_CAP: u64 = 50_000;

/// Maximum number of epsilon levels before giving up.
const MAX_LEVELS: usize = 200;

/// Spectral-radius estimate with its Collatz-Wielandt certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// Best estimate of rho(A), clamped into the bracket below.
    pub value: f64,
    /// Rigorous lower bound: `min_i (Ax)_i / x_i` at the final positive x.
    pub cw_lower: f64,
    /// Rigorous upper bound: `max_i (Ax)_i / x_i` at the final positive x.
    pub cw_upper: f64,
    /// Total matrix-vector products spent.
    pub iterations: u64,
    /// Last regularization epsilon used (0 for the exact short-cuts).
    pub epsilon_used: f64,
    pub converged: bool,
}

/// Which sequence-space operator norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Maximum column sum.
    L1,
    /// Spectral norm, computed as `sqrt(rho(A^T A))`.
    L2,
    /// Maximum row sum.
    LInf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::LInf];

    pub fn tag(&self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::LInf => "linf",
        }
    }
}

/// Perron root of a nonnegative matrix, certified to `tol*max(1, rho)`.
pub fn spectral_radius(a: &NonNegativeMatrix, tol: f64) -> SpectralEstimate {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = a.n();

    if a.is_nilpotent_pattern() {
        return SpectralEstimate {
            value: 0.0,
            cw_lower: 0.0,
            cw_upper: 0.0,
            iterations: 0,
            epsilon_used: 0.0,
            converged: true,
        };
    }

    let scale = a.max_row_sum();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut eps = 1e-4 * scale;
    let mut total_iterations = 0u64;
    let mut prev_lambda: Option<f64> = None;
    let mut lambda = 0.0;
    let mut converged = false;

    'ladder: for _level in 0..MAX_LEVELS {
        let mut level_ok = false;
        for _ in 0..LEVEL_ITERATION_CAP {
            // y = (A + eps*J + eps*I) x with x normalized to sum 1, so the
            // all-ones rank-one term contributes exactly eps per entry.
            matvec(a, &x, &mut y);
            for (yi, &xi) in y.iter_mut().zip(&x) {
                *yi += eps * (1.0 + xi);
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (yi, xi) in y.iter().zip(&x) {
                let r = yi / xi;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            lambda = 0.5 * (lo + hi);
            total_iterations += 1;
            if hi - lo <= tol * lambda.max(1.0) / 32.0 {
                level_ok = true;
                break;
            }
            // Shifted update keeps the bracket contracting on periodic
            // structure; the Perron pair of M + s*I is that of M.
            let s = lambda.max(0.0);
            let mut sum = 0.0;
            for (xi, &yi) in x.iter_mut().zip(y.iter()) {
                *xi = yi + s * *xi;
                sum += *xi;
            }
            for xi in x.iter_mut() {
                *xi /= sum;
            }
        }
        if !level_ok {
            break 'ladder;
        }
        if let Some(prev) = prev_lambda {
            if (prev - lambda).abs() <= tol * lambda.max(1.0) / 8.0 {
                converged = true;
                break 'ladder;
            }
        }
        prev_lambda = Some(lambda);
        eps /= 10.0;
        if eps < 1e-280 {
            break 'ladder;
        }
    }

    // Re-measure the bracket on A itself; both Collatz-Wielandt bounds are
    // valid for any strictly positive test vector.
    matvec(a, &x, &mut y);
    let mut cw_lower = f64::INFINITY;
    let mut cw_upper = f64::NEG_INFINITY;
    for (yi, xi) in y.iter().zip(&x) {
        let r = yi / xi;
        cw_lower = cw_lower.min(r);
        cw_upper = cw_upper.max(r);
    }
    let value = lambda.clamp(cw_lower, cw_upper).max(0.0);

    SpectralEstimate {
        value,
        cw_lower,
        cw_upper,
        iterations: total_iterations,
        epsilon_used: eps,
        converged,
    }
}

/// Spectral radius at [`DEFAULT_TOL`], erroring on non-convergence.
pub fn spectral_radius_value(a: &NonNegativeMatrix) -> Result<f64> {
    let est = spectral_radius(a, DEFAULT_TOL);
    if !est.converged {
        return Err(Error::NotConverged { what: "spectral radius" });
    }
    Ok(est.value)
}

/// Operator norm in the chosen sequence space. l1 and l-infinity are column
/// and row sums; l2 goes through `rho(A^T A)` and inherits that
/// certificate.
pub fn operator_norm(a: &NonNegativeMatrix, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::L1 => Ok(a.max_col_sum()),
        NormKind::LInf => Ok(a.max_row_sum()),
        NormKind::L2 => {
            let est = spectral_radius(&a.gram(), DEFAULT_TOL);
            if !est.converged {
                return Err(Error::NotConverged { what: "l2 operator norm" });
            }
            Ok(est.value.sqrt())
        }
    }
}

/// Numerical radius of a nonnegative matrix.
///
/// For a positive operator the numerical radius is the supremum of
/// `<Af, f>` over unit vectors in the nonnegative cone; that quadratic form
/// only sees the symmetric part H = (A + A^T)/2, and since H is symmetric
/// nonnegative its largest eigenvalue is its Perron root, attained at a
/// nonnegative eigenvector. So w(A) = rho((A + A^T)/2).
pub fn numerical_radius(a: &NonNegativeMatrix) -> Result<f64> {
    let est = spectral_radius(&a.symmetric_part(), DEFAULT_TOL);
    if !est.converged {
        return Err(Error::NotConverged { what: "numerical radius" });
    }
    Ok(est.value)
}

#[inline]
fn matvec(a: &NonNegativeMatrix, x: &[f64], y: &mut [f64]) {
    let n = a.n();
    let data = a.entries();
    for i in 0..n {
        let row = &data[i * n..(i + 1) * n];
        let mut acc = 0.0;
        for (rj, xj) in row.iter().zip(x) {
            acc += rj * xj;
        }
        y[i] = acc;
    }
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial oracle (n <= 5)
// ---------------------------------------------------------------------------

/// Independent spectral-radius oracle for n <= 5: expands det(xI - A) by
/// cofactors with exact polynomial arithmetic, deflates exact zero roots,
/// finds the remaining roots by Durand-Kerner, and polishes repeated-root
/// clusters through the derivative (a root of multiplicity m is a simple,
/// well-conditioned root of the (m-1)-th derivative). Shares no code with
/// the power-iteration engine.
pub fn spectral_radius_oracle(a: &NonNegativeMatrix) -> Result<f64> {
    let n = a.n();
    if n > 5 {
        return Err(Error::OracleDimension { n });
    }
    // Normalize scale so the coefficients stay well conditioned; roots scale
    // back exactly. A zero max row sum means the matrix is zero.
    let scale = a.max_row_sum();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let scaled: Vec<f64> = a.entries().iter().map(|&v| v / scale).collect();
    let coeffs = char_poly(n, &scaled);

    // Exact trailing zeros: every term of those determinant coefficients
    // contains a zero factor, so they come out as literal 0.0 and the
    // corresponding power of x can be deflated with no roundoff.
    let zeros = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let reduced = &coeffs[zeros..];
    if reduced.len() <= 1 {
        return Ok(0.0);
    }

    let roots = durand_kerner(reduced);
    let max_modulus = polish_and_max_modulus(reduced, &roots);
    Ok(max_modulus * scale)
}

/// Coefficients of det(xI - A), ascending, monic of degree n.
fn char_poly(n: usize, entries: &[f64]) -> Vec<f64> {
    // Entry (i,j) of xI - A is the linear polynomial [-a_ij, delta_ij].
    let polys: Vec<Vec<f64>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            vec![-entries[idx], if i == j { 1.0 } else { 0.0 }]
        })
        .collect();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    poly_det(&polys, n, &rows, &cols)
}

fn poly_det(polys: &[Vec<f64>], n: usize, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    if rows.len() == 1 {
        return polys[rows[0] * n + cols[0]].clone();
    }
    let mut det = vec![0.0];
    let sub_rows = &rows[1..];
    for (k, &col) in cols.iter().enumerate() {
        let entry = &polys[rows[0] * n + col];
        if entry.iter().all(|&c| c == 0.0) {
            continue;
        }
        let sub_cols: Vec<usize> =
            cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
        let minor = poly_det(polys, n, sub_rows, &sub_cols);
        let term = poly_mul(entry, &minor);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        poly_add_scaled(&mut det, &term, sign);
    }
    det
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Vec<f64>, term: &[f64], sign: f64) {
    if acc.len() < term.len() {
        acc.resize(term.len(), 0.0);
    }
    for (a, &t) in acc.iter_mut().zip(term) {
        *a += sign * t;
    }
}

fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// All roots of a monic polynomial given by ascending coefficients
/// (degree >= 1, leading coefficient 1 by construction).
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    // Cauchy bound on root moduli for a monic polynomial.
    let bound = 1.0 + coeffs[..degree].iter().fold(0.0f64, |m, &c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| seed.powu(k as u32 + 1) * bound)
        .collect();
    for _ in 0..800 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-8 * bound, 1e-8 * bound);
                max_step = f64::INFINITY;
                continue;
            }
            let step = poly_eval(coeffs, z[i]) / den;
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step <= 1e-15 {
            break;
        }
    }
    z
}

/// Newton-polishes simple near-real roots, replaces clustered roots by a
/// derivative-polished multiple root when the residual confirms the
/// multiplicity, and returns the largest modulus.
fn polish_and_max_modulus(coeffs: &[f64], roots: &[Complex64]) -> f64 {
    let coeff_scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let residual_ok = |z: Complex64| {
        let budget = 1e-12 * coeff_scale * z.norm().max(1.0).powi(coeffs.len() as i32 - 1);
        poly_eval(coeffs, z).norm() <= budget
    };

    // Group roots into clusters of mutually close points.
    let k = roots.len();
    let mut cluster_of: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            let tol = 4e-3 * (1.0 + roots[i].norm());
            if (roots[i] - roots[j]).norm() <= tol {
                let (a, b) = (cluster_of[i], cluster_of[j]);
                let target = a.min(b);
                for c in cluster_of.iter_mut() {
                    if *c == a || *c == b {
                        *c = target;
                    }
                }
            }
        }
    }

    let mut best: f64 = 0.0;
    for cluster in 0..k {
        let members: Vec<Complex64> = (0..k)
            .filter(|&i| cluster_of[i] == cluster)
            .map(|i| roots[i])
            .collect();
        if members.is_empty() {
            continue;
        }
        if members.len() == 1 {
            let z = newton_polish(coeffs, members[0]);
            best = best.max(if residual_ok(z) { z.norm() } else { members[0].norm() });
            continue;
        }
        // Candidate multiple root: the cluster mean cancels the symmetric
        // first-order spread; Newton on the (m-1)-th derivative then sees a
        // simple root. Accept only when p itself vanishes there, otherwise
        // these were distinct roots and the raw values stand.
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        let mut deriv = coeffs.to_vec();
        for _ in 0..members.len() - 1 {
            deriv = poly_derivative(&deriv);
        }
        let polished = newton_polish(&deriv, mean);
        if residual_ok(polished) {
            best = best.max(polished.norm());
        } else {
            for z in members {
                best = best.max(z.norm());
            }
        }
    }
    best
}

fn newton_polish(coeffs: &[f64], start: Complex64) -> Complex64 {
    let deriv = poly_derivative(coeffs);
    let mut z = start;
    for _ in 0..60 {
        let dp = poly_eval(&deriv, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = poly_eval(coeffs, z) / dp;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}
