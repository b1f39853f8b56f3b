//! Tolerance-aware arithmetic of finite-dimensional complex subspaces.
//!
//! A `Subspace` is stored as an orthonormal frame; all arithmetic
//! (span, sum, intersection, orthogonal complement) reduces to SVDs with a
//! relative rank cutoff.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::la;

/// Default relative rank tolerance: singular values below `tol * sigma_max`
/// are treated as zero.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A numerically orthonormalized subspace of C^n.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    /// ambient x dim matrix with orthonormal columns.
    frame: DMatrix<Complex64>,
    tol: f64,
}

impl Subspace {
    /// The zero subspace of C^n.
    pub fn zero(ambient: usize, tol: f64) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::ZeroAmbient);
        }
        Ok(Subspace {
            ambient,
            frame: DMatrix::zeros(ambient, 0),
            tol,
        })
    }

    /// All of C^n.
    pub fn full(ambient: usize, tol: f64) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::ZeroAmbient);
        }
        Ok(Subspace {
            ambient,
            frame: DMatrix::identity(ambient, ambient),
            tol,
        })
    }

    /// Span of the columns of `mat`, with numerical rank decided by singular
    /// values relative to `tol`.
    pub fn span_mat(mat: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let ambient = mat.nrows();
        if ambient == 0 {
            return Err(Error::ZeroAmbient);
        }
        if tol < 0.0 {
            return Err(Error::InvalidInput("tol must be nonnegative".into()));
        }
        if mat.ncols() == 0 {
            return Subspace::zero(ambient, tol);
        }
        let (u, sv, _) = la::svd_full(mat)?;
        let smax = sv.first().copied().unwrap_or(0.0);
        let cutoff = tol * smax;
        let rank = sv.iter().filter(|&&s| s > cutoff && s > 0.0).count();
        let frame = u.columns(0, rank).clone_owned();
        Ok(Subspace { ambient, frame, tol })
    }

    /// Span of an explicit list of ambient vectors. An empty list yields the
    /// zero subspace of C^`ambient`.
    pub fn span(ambient: usize, vectors: &[DVector<Complex64>], tol: f64) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::ZeroAmbient);
        }
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::AmbientMismatch(ambient, v.len()));
            }
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient, tol);
        }
        let mut mat = DMatrix::zeros(ambient, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            mat.set_column(j, v);
        }
        Subspace::span_mat(&mat, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Orthonormal frame (ambient x dim).
    pub fn frame(&self) -> &DMatrix<Complex64> {
        &self.frame
    }

    fn check_ambient(&self, other: &Subspace) -> Result<f64> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(self.tol.max(other.tol))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let tol = self.check_ambient(other)?;
        let mut mat = DMatrix::zeros(self.ambient, self.dim() + other.dim());
        for j in 0..self.dim() {
            mat.set_column(j, &self.frame.column(j));
        }
        for j in 0..other.dim() {
            mat.set_column(self.dim() + j, &other.frame.column(j));
        }
        Subspace::span_mat(&mat, tol)
    }

    /// Orthogonal complement, dim U + dim U^perp = ambient.
    pub fn complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient, self.tol).expect("ambient > 0");
        }
        // Trailing columns of the full left-singular basis of the frame.
        let (u, _, _) = la::svd_full(&self.frame).expect("svd of orthonormal frame");
        let frame = u.columns(self.dim(), self.ambient - self.dim()).clone_owned();
        Subspace {
            ambient: self.ambient,
            frame,
            tol: self.tol,
        }
    }

    /// U ∩ V, computed as (U^perp + V^perp)^perp.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.complement().sum(&other.complement())?.complement())
    }

    /// Orthogonal projector F F^H.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.frame * self.frame.adjoint()
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if x.len() != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient, x.len()));
        }
        Ok(&self.frame * (self.frame.adjoint() * x))
    }

    /// Membership test: ||x - P x|| <= tol * ||x|| (the zero vector belongs
    /// to every subspace).
    pub fn contains(&self, x: &DVector<Complex64>) -> Result<bool> {
        let p = self.project(x)?;
        let nx = x.norm();
        Ok((x - p).norm() <= self.tol.max(DEFAULT_TOL) * nx.max(1e-300))
    }

    /// Spectral norm of (I - P_other) F_self: sin of the largest principal
    /// angle of self against other, 0 when self ⊆ other.
    pub fn residual_in(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let rem = &self.frame - other.projector() * &self.frame;
        la::spectral_norm(&rem)
    }

    /// Symmetric subspace distance: max of the two one-sided residuals.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        Ok(self.residual_in(other)?.max(other.residual_in(self)?))
    }

    /// Equality as subspaces: equal dimensions and mutual containment within
    /// tolerance.
    pub fn approx_eq(&self, other: &Subspace) -> Result<bool> {
        let tol = self.check_ambient(other)?;
        Ok(self.dim() == other.dim() && self.distance(other)? <= 1e4 * tol.max(DEFAULT_TOL))
    }
}
