//! Spectrum, point classification, the Weyl-correction construction, and
//! Möbius resolvent machinery for finite-dimensional relations.
//!
//! Degenerate-case note: in finite dimensions every relation is Fredholm, so
//! sigma_e1 = sigma_e2 = sigma_e3 = {} always, and sigma_e4 is {} when
//! dim G(T) = dim X and all of C otherwise (kappa(lambda - T) = dim G - dim X
//! for every lambda). The five essential spectra only become distinct on the
//! banded models; see [`finite_dim_essential_spectra`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fredholm::FredholmData;
use crate::poly::sort_complex;
use crate::relation::Relation;

/// Classification of a single point lambda against a relation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PointClass {
    pub lambda: Complex64,
    pub fredholm: FredholmData,
    pub in_resolvent: bool,
}

/// Spectrum of a finite-dimensional relation.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    /// kappa(lambda - T) != 0 for every lambda, or the pencil is singular.
    AllOfC,
    Points(Vec<Complex64>),
}

/// Fredholm data of lambda - T.
pub fn classify_point(t: &Relation, lambda: Complex64) -> Result<PointClass> {
    let fredholm = t.shift(lambda)?.fredholm();
    let in_resolvent =
        fredholm.alpha_finite() == Some(0) && fredholm.beta_finite() == Some(0);
    Ok(PointClass {
        lambda,
        fredholm,
        in_resolvent,
    })
}

/// Degenerate finite-dimensional essential spectra, exposed honestly:
/// returns (sigma_e1..e3 empty, sigma_e4 = if dim G == dim X { empty } else
/// { all of C }).
pub fn finite_dim_essential_spectra(t: &Relation) -> (Spectrum, Spectrum) {
    let e123 = Spectrum::Points(Vec::new());
    let e4 = if t.graph().dim() == t.dim_x() {
        Spectrum::Points(Vec::new())
    } else {
        Spectrum::AllOfC
    };
    (e123, e4)
}

/// The spectrum of a square relation.
///
/// If dim G != dim X, kappa(lambda - T) != 0 everywhere and the spectrum is
/// all of C. Otherwise the graph frame [Fx; Fy] defines the square pencil
/// Fy - lambda Fx whose eigenvalues are the spectrum; an identically
/// rank-deficient (singular) pencil again yields all of C.
pub fn spectrum(t: &Relation) -> Result<Spectrum> {
    if !t.is_square() {
        return Err(Error::Shape("spectrum requires a square relation".into()));
    }
    let n = t.dim_x();
    if t.graph().dim() != n {
        return Ok(Spectrum::AllOfC);
    }
    let frame = t.graph().frame();
    let fx = frame.rows(0, n).clone_owned();
    let fy = frame.rows(n, n).clone_owned();

    // Singular-pencil probe: rank of Fy - lambda Fx at 3 pseudo-random
    // points; identically deficient means the spectrum is all of C.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5bec7a11);
    let tol = t.tol().max(1e-12);
    let mut regular_mu = None;
    for _ in 0..3 {
        let mu = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0)
            * Complex64::new(1.0 + n as f64, 0.0);
        let m = &fy - fx.scale(1.0) * mu;
        let sv = crate::la::singular_values(&m)?;
        let smax = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&s| s > tol.max(1e-10) * smax.max(1.0)).count();
        if rank == n {
            regular_mu = Some(mu);
            break;
        }
    }
    if regular_mu.is_none() {
        return Ok(Spectrum::AllOfC);
    }

    // QZ on the regular pencil (Fy, Fx): pairs (a, b) with Fy u = (a/b) Fx u.
    // b ~ 0 marks an eigenvalue at infinity, which is not a spectrum point.
    let pairs = crate::la::generalized_eigenvalues(&fy, &fx)?;
    let mut points: Vec<Complex64> = pairs
        .into_iter()
        .filter(|(a, b)| b.norm() > 1e-10 * (a.norm() + b.norm()))
        .map(|(a, b)| a / b)
        .collect();
    sort_complex(&mut points);
    Ok(Spectrum::Points(points))
}

/// Finite-rank correction K with rank alpha(lambda - T) such that
/// lambda lies in rho(T + K), built from orthonormal bases of N(lambda - T)
/// and R(lambda - T)^perp (the biorthogonal duals of an orthonormal basis
/// are the basis vectors themselves).
pub fn weyl_correction(t: &Relation, lambda: Complex64) -> Result<Relation> {
    let shifted = t.shift(lambda)?;
    let parts = shifted.parts();
    let kernel = parts.kernel;
    let range_perp = parts.range.complement();
    if kernel.dim() != range_perp.dim() {
        return Err(Error::Precondition(format!(
            "weyl correction needs alpha = beta, got {} and {}",
            kernel.dim(),
            range_perp.dim()
        )));
    }
    let n = t.dim_x();
    let k_mat = if kernel.dim() == 0 {
        DMatrix::zeros(n, n)
    } else {
        range_perp.frame() * kernel.frame().adjoint()
    };
    Relation::from_operator(&k_mat, t.tol())
}

/// T_mu = (mu - T)^{-1} for mu in rho(T); single-valued with full domain.
pub fn mobius_resolvent(t: &Relation, mu: Complex64) -> Result<Relation> {
    let pc = classify_point(t, mu)?;
    if !pc.in_resolvent {
        return Err(Error::Precondition(format!(
            "mu = {mu} is not in the resolvent set"
        )));
    }
    Ok(t.shift(mu)?.inverse())
}

/// Checks the factorization lambda - T = S (mu - T) with
/// S = (mu - lambda)((mu - lambda)^{-1} - T_mu). Returns the graph-equality
/// verdict and the principal-angle residual.
pub fn mobius_factor_check(
    t: &Relation,
    mu: Complex64,
    lambda: Complex64,
) -> Result<(bool, f64)> {
    if (mu - lambda).norm() == 0.0 {
        return Err(Error::Precondition("lambda must differ from mu".into()));
    }
    let t_mu = mobius_resolvent(t, mu)?;
    let a_mu = t_mu
        .to_operator_matrix()
        .ok_or_else(|| Error::Precondition("resolvent is not an operator".into()))?;
    let n = t.dim_x();
    let eta = 1.0 / (mu - lambda);
    let s_mat = (DMatrix::identity(n, n) * eta - a_mu) * (mu - lambda);
    let s = Relation::from_operator(&s_mat, t.tol())?;
    let composed = s.compose(&t.shift(mu)?)?;
    let target = t.shift(lambda)?;
    let residual = composed.graph().distance(target.graph())?;
    Ok((residual < 1e-8, residual))
}
