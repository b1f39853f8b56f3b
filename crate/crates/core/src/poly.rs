//! Complex polynomial roots via the companion matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a general complex matrix, sorted by (re, im) for
/// determinism.
pub fn complex_eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut eig = crate::la::eigenvalues(m).expect("eigenvalue iteration converges");
    sort_complex(&mut eig);
    eig
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// Roots of c[0] + c[1] z + ... + c[d] z^d. Leading zeros are trimmed with a
/// relative cutoff; a constant polynomial has no roots.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut d = coeffs.len() - 1;
    while d > 0 && coeffs[d].norm() <= 1e-14 * scale {
        d -= 1;
    }
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let mut comp = DMatrix::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -coeffs[i] / lead;
    }
    complex_eigenvalues(&comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let r = poly_roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.len(), 2);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn complex_roots() {
        // z^2 + 1 = (z-i)(z+i)
        let r = poly_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.len(), 2);
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_and_zero_polynomials() {
        assert!(poly_roots(&[c(5.0, 0.0)]).is_empty());
        assert!(poly_roots(&[c(0.0, 0.0)]).is_empty());
    }

    #[test]
    fn trims_tiny_leading_coefficient() {
        let r = poly_roots(&[c(-1.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)]);
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-10);
    }
}
