//! Laurent symbols: finite Laurent polynomials a(z) = sum a_k z^k, plus the
//! rational form num/den needed by the Moebius-transformed models.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::poly_roots;

/// Relative on-curve tolerance factor: lambda counts as on the symbol curve
/// when its distance to {a(e^{i theta})} is at most `1e-6 * (1 + scale)`.
pub const CURVE_TOL_FACTOR: f64 = 1e-6;

/// A banded symbol, possibly rational. The plain polynomial case has a
/// trivial denominator `{0: 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSymbol {
    num: BTreeMap<i64, Complex64>,
    den: BTreeMap<i64, Complex64>,
}

fn trim(map: &BTreeMap<i64, Complex64>) -> BTreeMap<i64, Complex64> {
    let scale = map.values().map(|c| c.norm()).fold(0.0f64, f64::max);
    map.iter()
        .filter(|(_, c)| c.norm() > 1e-15 * scale)
        .map(|(&k, &c)| (k, c))
        .collect()
}

fn eval_poly(map: &BTreeMap<i64, Complex64>, z: Complex64) -> Complex64 {
    map.iter().map(|(&k, &c)| c * z.powi(k as i32)).sum()
}

impl LaurentSymbol {
    /// Finite Laurent polynomial from its coefficient map.
    pub fn from_coeffs(coeffs: BTreeMap<i64, Complex64>) -> Result<Self> {
        let num = trim(&coeffs);
        if num.is_empty() {
            return Err(Error::InvalidInput("symbol needs a nonzero coefficient".into()));
        }
        let mut den = BTreeMap::new();
        den.insert(0, Complex64::new(1.0, 0.0));
        Ok(LaurentSymbol { num, den })
    }

    /// Rational symbol num(z)/den(z); the denominator must not vanish on the
    /// unit circle (checked via its root radii and by sampling).
    pub fn rational(
        num: BTreeMap<i64, Complex64>,
        den: BTreeMap<i64, Complex64>,
    ) -> Result<Self> {
        let num = trim(&num);
        let den = trim(&den);
        if num.is_empty() {
            return Err(Error::InvalidInput("symbol needs a nonzero coefficient".into()));
        }
        if den.is_empty() {
            return Err(Error::InvalidInput("denominator is identically zero".into()));
        }
        for root in roots_of(&den) {
            if (root.norm() - 1.0).abs() < 1e-8 {
                return Err(Error::InvalidInput(format!(
                    "denominator root {root} too close to the unit circle"
                )));
            }
        }
        let den_min = (0..1024)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / 1024.0;
                eval_poly(&den, Complex64::from_polar(1.0, th)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        if den_min < 1e-10 {
            return Err(Error::InvalidInput("denominator vanishes on the unit circle".into()));
        }
        Ok(LaurentSymbol { num, den })
    }

    /// Convenience constructor from (exponent, re, im) triples.
    pub fn from_terms(terms: &[(i64, f64, f64)]) -> Result<Self> {
        let map = terms
            .iter()
            .map(|&(k, re, im)| (k, Complex64::new(re, im)))
            .collect();
        LaurentSymbol::from_coeffs(map)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
            && self.den.get(&0).is_some_and(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-15)
    }

    pub fn numerator(&self) -> &BTreeMap<i64, Complex64> {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<i64, Complex64> {
        &self.den
    }

    /// Coefficient support [min_k, max_k] of a polynomial symbol.
    pub fn support(&self) -> (i64, i64) {
        let lo = *self.num.keys().next().expect("nonempty");
        let hi = *self.num.keys().next_back().expect("nonempty");
        (lo, hi)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval_poly(&self.num, z) / eval_poly(&self.den, z)
    }

    /// Magnitude scale used in the on-curve tolerance: max coefficient
    /// magnitude for polynomials, max curve magnitude for rational symbols.
    pub fn scale(&self) -> f64 {
        if self.is_polynomial() {
            self.num.values().map(|c| c.norm()).fold(0.0f64, f64::max)
        } else {
            self.curve_samples(1024)
                .iter()
                .map(|c| c.norm())
                .fold(0.0f64, f64::max)
        }
    }

    /// Absolute on-curve tolerance for this symbol.
    pub fn curve_tol(&self) -> f64 {
        CURVE_TOL_FACTOR * (1.0 + self.scale())
    }

    /// a(e^{2 pi i j / n}) for j = 0..n.
    pub fn curve_samples(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                self.eval(Complex64::from_polar(1.0, th))
            })
            .collect()
    }

    /// min over theta of |a(e^{i theta}) - lambda|, with local refinement
    /// around the best coarse sample.
    pub fn curve_distance(&self, lambda: Complex64) -> f64 {
        self.curve_argmin(lambda).1
    }

    /// (theta, distance) minimizing |a(e^{i theta}) - lambda|.
    pub fn curve_argmin(&self, lambda: Complex64) -> (f64, f64) {
        let n = 1024;
        let step = 2.0 * std::f64::consts::PI / n as f64;
        let d = |th: f64| (self.eval(Complex64::from_polar(1.0, th)) - lambda).norm();
        let mut best = (0.0, d(0.0));
        for j in 1..n {
            let th = step * j as f64;
            let dj = d(th);
            if dj < best.1 {
                best = (th, dj);
            }
        }
        // Ternary refinement on the bracketing interval.
        let (mut lo, mut hi) = (best.0 - step, best.0 + step);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if d(m1) < d(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let th = 0.5 * (lo + hi);
        let dist = d(th);
        if dist < best.1 {
            (th, dist)
        } else {
            best
        }
    }

    pub fn is_on_curve(&self, lambda: Complex64) -> bool {
        self.curve_distance(lambda) <= self.curve_tol()
    }

    /// Winding number of theta -> a(e^{i theta}) - lambda by accumulated
    /// argument, doubling the sample count until every increment is < pi/2.
    pub fn winding(&self, lambda: Complex64, n_samples: usize) -> Result<i64> {
        if n_samples < 256 {
            return Err(Error::InvalidInput("need at least 256 samples".into()));
        }
        if self.is_on_curve(lambda) {
            return Err(Error::OnCurve);
        }
        let mut n = n_samples;
        loop {
            match winding_from_samples(&self.curve_samples(n), lambda) {
                Some(w) => return Ok(w),
                None => {
                    n *= 2;
                    if n > 1 << 22 {
                        return Err(Error::Precondition(
                            "winding did not stabilize; lambda too close to the curve".into(),
                        ));
                    }
                }
            }
        }
    }

    /// Adjoint symbol: coefficient map k -> conj(a_{-k}) for numerator and
    /// denominator alike, so that the curve is complex-conjugated.
    pub fn conjugate(&self) -> LaurentSymbol {
        let flip = |m: &BTreeMap<i64, Complex64>| m.iter().map(|(&k, &c)| (-k, c.conj())).collect();
        LaurentSymbol {
            num: flip(&self.num),
            den: flip(&self.den),
        }
    }

    /// Fourier coefficients a_k for |k| <= max_band, truncated where they
    /// fall below 1e-15 of the symbol scale. Exact (and exactly supported)
    /// for polynomial symbols.
    pub fn band_coefficients(&self, max_band: usize) -> BTreeMap<i64, Complex64> {
        if self.is_polynomial() {
            return self
                .num
                .iter()
                .filter(|(&k, _)| k.unsigned_abs() as usize <= max_band)
                .map(|(&k, &c)| (k, c))
                .collect();
        }
        // Trapezoid rule on the circle: spectrally accurate, and the
        // coefficients of a circle-regular rational symbol decay
        // geometrically.
        let n = (8 * (max_band + 1)).next_power_of_two().max(4096);
        let samples = self.curve_samples(n);
        let cutoff = 1e-15 * self.scale();
        let mut out = BTreeMap::new();
        for k in -(max_band as i64)..=(max_band as i64) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &s) in samples.iter().enumerate() {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                acc += s * Complex64::from_polar(1.0, -(k as f64) * th);
            }
            acc /= n as f64;
            if acc.norm() > cutoff {
                out.insert(k, acc);
            }
        }
        out
    }
}

/// Nonzero roots of a Laurent polynomial (roots of w^p * m(w) with the
/// spurious w = 0 factor removed by the constructor's support shift).
pub(crate) fn roots_of(map: &BTreeMap<i64, Complex64>) -> Vec<Complex64> {
    let lo = *map.keys().next().expect("nonempty");
    let hi = *map.keys().next_back().expect("nonempty");
    let deg = (hi - lo) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (&k, &c) in map {
        coeffs[(k - lo) as usize] = c;
    }
    poly_roots(&coeffs)
}

/// Accumulated-argument winding; None when an increment reaches pi/2.
pub(crate) fn winding_from_samples(samples: &[Complex64], lambda: Complex64) -> Option<i64> {
    let mut total = 0.0f64;
    let n = samples.len();
    for j in 0..n {
        let a = samples[j] - lambda;
        let b = samples[(j + 1) % n] - lambda;
        let delta = (b / a).arg();
        if delta.abs() >= std::f64::consts::FRAC_PI_2 {
            return None;
        }
        total += delta;
    }
    Some((total / (2.0 * std::f64::consts::PI)).round() as i64)
}
