//! Dense symmetric kernels backing the controllability tests: eigensolve,
//! SVD rank, matrix exponential action and the controllability Grammian
//! (closed form plus a trapezoid oracle).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Numerical rank decided from singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
}

pub fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteEntry)
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    check_finite(m)?;
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthogonal eigenvector matrix (columns).
pub fn sym_eig(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(m)?;
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// SVD-based rank. Default tolerance is the standard heuristic
/// max(rows, cols) * eps * sigma_max.
pub fn numerical_rank(m: &DMatrix<f64>, tol: Option<f64>) -> RankResult {
    if m.nrows() == 0 || m.ncols() == 0 {
        return RankResult {
            rank: 0,
            singular_values: Vec::new(),
            tolerance_used: tol.unwrap_or(f64::EPSILON),
        };
    }
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tolerance = tol.unwrap_or(m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sigma_max);
    let rank = sv.iter().filter(|&&s| s > tolerance).count();
    RankResult {
        rank,
        singular_values: sv,
        tolerance_used: tolerance,
    }
}

/// e^{m t} v for symmetric m, via the spectral decomposition.
pub fn expm_action(m: &DMatrix<f64>, t: f64, v: &DVector<f64>) -> Result<DVector<f64>> {
    let (values, vectors) = sym_eig(m)?;
    let mut coeffs = vectors.transpose() * v;
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c *= (values[i] * t).exp();
    }
    Ok(&vectors * coeffs)
}

/// Controllability Grammian W_c(t0, t1) = int e^{-L(t1-t)} b b^T e^{-L(t1-t)} dt,
/// evaluated in closed form through the spectrum of L.
pub fn grammian(l: &DMatrix<f64>, b: &DVector<f64>, t0: f64, t1: f64) -> Result<DMatrix<f64>> {
    if !(t1 > t0) {
        return Err(Error::BadHorizon { t0, t1 });
    }
    let (values, vectors) = sym_eig(l)?;
    let horizon = t1 - t0;
    let c = vectors.transpose() * b;
    let n = l.nrows();
    let mut core = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            core[(i, j)] = c[i] * c[j] * phi(values[i] + values[j], horizon);
        }
    }
    Ok(&vectors * core * vectors.transpose())
}

// phi(mu, T) = int_0^T e^{-mu s} ds
fn phi(mu: f64, horizon: f64) -> f64 {
    if mu.abs() < 1e-300 {
        horizon
    } else {
        (-(-mu * horizon).exp_m1()) / mu
    }
}

/// Composite-trapezoid Grammian, kept as an independent oracle for the
/// closed form.
pub fn quadrature_grammian(
    l: &DMatrix<f64>,
    b: &DVector<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<DMatrix<f64>> {
    if !(t1 > t0) {
        return Err(Error::BadHorizon { t0, t1 });
    }
    check_symmetric(l)?;
    let n = l.nrows();
    let h = (t1 - t0) / steps as f64;
    let mut acc = DMatrix::zeros(n, n);
    for k in 0..=steps {
        let t = t0 + k as f64 * h;
        let g = expm_action(&(-l), t1 - t, b)?;
        let outer = &g * g.transpose();
        let weight = if k == 0 || k == steps { 0.5 } else { 1.0 };
        acc += outer * (weight * h);
    }
    Ok(acc)
}
