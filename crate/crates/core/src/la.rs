//! Dense decompositions used across the crate, backed by faer.
//!
//! nalgebra's complex SVD loses accuracy on clustered singular values
//! (projector-like inputs come out with O(1e-2) errors in the vectors), so
//! every rank/angle decision routes through these wrappers instead.

use faer::linalg::solvers::GeneralizedEigen;
use faer_ext::{IntoFaer, IntoNalgebra};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn to_faer(m: &DMatrix<Complex64>) -> faer::MatRef<'_, Complex64> {
    m.view_range(.., ..).into_faer()
}

fn to_nalgebra(m: faer::MatRef<'_, Complex64>) -> DMatrix<Complex64> {
    m.into_nalgebra().clone_owned()
}

/// Full SVD `m = u diag(s) v^H`; `u` is `nrows x nrows`, `v` is
/// `ncols x ncols`, `s` has `min(nrows, ncols)` entries in nonincreasing
/// order.
pub(crate) fn svd_full(m: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let f = to_faer(m)
        .svd()
        .map_err(|_| Error::Precondition("svd did not converge".into()))?;
    let s = f.S().column_vector().iter().map(|x| x.re).collect();
    Ok((to_nalgebra(f.U()), s, to_nalgebra(f.V())))
}

/// Singular values in nonincreasing order.
pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    Ok(to_faer(m)
        .singular_values()
        .map_err(|_| Error::Precondition("svd did not converge".into()))?)
}

/// Largest singular value (0 for a matrix with an empty dimension).
pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Eigenvalues of a square matrix, unsorted.
pub(crate) fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    to_faer(m)
        .eigenvalues()
        .map_err(|_| Error::Precondition("eigenvalue iteration did not converge".into()))
}

/// Generalized eigenvalues of the square pencil `(a, b)`: pairs
/// `(alpha_i, beta_i)` with `a u = (alpha/beta) b u`; `beta = 0` marks an
/// infinite eigenvalue.
pub(crate) fn generalized_eigenvalues(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
) -> Result<Vec<(Complex64, Complex64)>> {
    let g: GeneralizedEigen<f64> = to_faer(a)
        .generalized_eigen(to_faer(b))
        .map_err(|_| Error::Precondition("qz iteration did not converge".into()))?;
    Ok(g.S_a()
        .column_vector()
        .iter()
        .zip(g.S_b().column_vector().iter())
        .map(|(&a, &b)| (a, b))
        .collect())
}

/// Moore-Penrose pseudoinverse with relative rank cutoff `tol * sigma_max`.
pub(crate) fn pseudo_inverse(m: &DMatrix<Complex64>, tol: f64) -> Result<DMatrix<Complex64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(DMatrix::zeros(m.ncols(), m.nrows()));
    }
    let (u, s, v) = svd_full(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let cutoff = tol * smax;
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (i, &si) in s.iter().enumerate() {
        if si > cutoff && si > 0.0 {
            let vi = v.column(i);
            let ui = u.column(i);
            out += (&vi * ui.adjoint()).map(|x| x / si);
        }
    }
    Ok(out)
}
