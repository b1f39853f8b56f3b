//! Kernel bases of banded Toeplitz operators lambda - T via symbol roots.
//!
//! Writing b = a - lambda with support [-p, q] (p, q >= 0 after trimming),
//! a decaying sequence x_j = z^j solves the interior rows of (a - lambda)x=0
//! exactly when w = 1/z is a root of b, i.e. z is the reciprocal of a root
//! outside the unit disk. Rows i < q are boundary conditions imposed on the
//! candidate set by a small nullspace problem.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::la;
use crate::subspace::DEFAULT_TOL;

use super::symbol::{roots_of, LaurentSymbol};

/// One kernel element of a banded Toeplitz operator, stored in closed form:
/// x_j = sum over terms of weight * j^power * root^j (root = 0 encodes the
/// finitely supported generator e_power).
#[derive(Clone, Debug)]
pub struct KernelGenerator {
    pub terms: Vec<KernelTerm>,
}

#[derive(Clone, Debug)]
pub struct KernelTerm {
    pub root: Complex64,
    pub power: usize,
    pub weight: Complex64,
}

impl KernelGenerator {
    fn monomial(root: Complex64, power: usize) -> Self {
        KernelGenerator {
            terms: vec![KernelTerm {
                root,
                power,
                weight: Complex64::new(1.0, 0.0),
            }],
        }
    }

    /// First `len` entries (j = 0..len) of the sequence.
    pub fn sample(&self, len: usize) -> DVector<Complex64> {
        DVector::from_fn(len, |j, _| self.value_at(j))
    }

    pub fn value_at(&self, j: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let base = if t.root.norm() == 0.0 {
                // 0^0 = 1: e_power basis vector family.
                if j == t.power {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                (j as f64).powi(t.power as i32).max(if t.power == 0 { 1.0 } else { 0.0 })
                    * t.root.powu(j as u32)
            };
            acc += t.weight * base;
        }
        acc
    }
}

/// Kernel basis and nullity of lambda - T for a polynomial Toeplitz symbol.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub alpha: usize,
    pub generators: Vec<KernelGenerator>,
    /// Winding number of a - lambda, for cross-checks (kappa = -winding).
    pub winding: i64,
}

/// Compute the kernel basis of lambda - T(a) on the one-sided sequence
/// space. Requires a polynomial symbol and lambda off the curve; roots
/// within 1e-8 of the unit circle are rejected as near-curve.
pub fn toeplitz_kernel_basis(sym: &LaurentSymbol, lambda: Complex64) -> Result<KernelBasis> {
    if !sym.is_polynomial() {
        return Err(Error::InvalidInput(
            "kernel basis requires a polynomial symbol".into(),
        ));
    }
    if sym.is_on_curve(lambda) {
        return Err(Error::OnCurve);
    }
    let mut b = sym.numerator().clone();
    let zero = Complex64::new(0.0, 0.0);
    *b.entry(0).or_insert(zero) -= lambda;
    let scale = b.values().map(|c| c.norm()).fold(0.0f64, f64::max);
    b.retain(|_, c| c.norm() > 1e-15 * scale);
    if b.is_empty() {
        return Err(Error::Precondition("a - lambda vanished identically".into()));
    }
    let lo = *b.keys().next().unwrap();
    let hi = *b.keys().next_back().unwrap();
    let p = (-lo).max(0);
    let q = hi;

    let roots = roots_of(&b);
    // roots_of drops the w^lo factor; a strictly positive lower support
    // means a zero of order lo at w = 0, inside the disk.
    let mut inside = lo.max(0);
    let mut candidates: Vec<Complex64> = Vec::new();
    for w in &roots {
        if (w.norm() - 1.0).abs() < 1e-8 {
            return Err(Error::NearCurve);
        }
        if w.norm() < 1.0 {
            inside += 1;
        } else {
            candidates.push(1.0 / w);
        }
    }
    let winding = inside - p;
    let alpha = (-winding).max(0) as usize;

    // Group reciprocal roots into clusters for multiplicity bookkeeping.
    let mut clustered: Vec<(Complex64, usize)> = Vec::new();
    candidates.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    for z in candidates {
        match clustered.last_mut() {
            Some((zc, m)) if (*zc - z).norm() < 1e-8 * (1.0 + z.norm()) => *m += 1,
            _ => clustered.push((z, 1)),
        }
    }

    let mut cands: Vec<KernelGenerator> = Vec::new();
    for &(z, m) in &clustered {
        for t in 0..m {
            cands.push(KernelGenerator::monomial(z, t));
        }
    }
    if q < 0 {
        // Columns 0..(-q) never meet any row: standard basis generators.
        for t in 0..(-q) as usize {
            cands.push(KernelGenerator::monomial(zero, t));
        }
    }

    let generators = if q <= 0 {
        cands
    } else {
        // Boundary rows i = 0..q-1 of (a - lambda) x = 0 select a subspace
        // of the candidate span.
        let qb = q as usize;
        let jmax = qb + p as usize;
        let mut bc = DMatrix::<Complex64>::zeros(qb, cands.len());
        for (col, g) in cands.iter().enumerate() {
            for i in 0..qb {
                let mut acc = zero;
                for j in 0..=jmax {
                    let k = i as i64 - j as i64;
                    if let Some(&bk) = b.get(&k) {
                        // Boundary rows truncate the convolution at j >= 0,
                        // but the full interior identity lets us subtract:
                        // here we just accumulate the true row sum over the
                        // support window, extended far enough that z^j tails
                        // below do not contribute (handled analytically).
                        acc += bk * g.value_at(j);
                    }
                }
                // For decaying generators the row sum over j in
                // [0, i+p] is exact because b_{i-j} = 0 beyond it.
                bc[(i, col)] = acc;
            }
        }
        combine_nullspace(&cands, &bc, alpha)?
    };

    if generators.len() != alpha {
        return Err(Error::Precondition(format!(
            "kernel dimension {} disagrees with winding bookkeeping alpha = {}",
            generators.len(),
            alpha
        )));
    }
    Ok(KernelBasis {
        alpha,
        generators,
        winding,
    })
}

/// Nullspace of the boundary-condition matrix, re-expressed as combined
/// generators.
fn combine_nullspace(
    cands: &[KernelGenerator],
    bc: &DMatrix<Complex64>,
    expected: usize,
) -> Result<Vec<KernelGenerator>> {
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let (_, s, v) = la::svd_full(bc)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > DEFAULT_TOL.max(1e-9) * smax.max(1.0)).count();
    let null_dim = cands.len() - rank;
    if null_dim != expected {
        return Err(Error::Precondition(format!(
            "boundary nullspace dimension {null_dim}, expected {expected}"
        )));
    }
    let mut out = Vec::with_capacity(null_dim);
    for col in rank..cands.len() {
        let mut terms = Vec::new();
        for (row, g) in cands.iter().enumerate() {
            let w = v[(row, col)];
            if w.norm() > 1e-13 {
                for t in &g.terms {
                    terms.push(KernelTerm {
                        root: t.root,
                        power: t.power,
                        weight: t.weight * w,
                    });
                }
            }
        }
        out.push(KernelGenerator { terms });
    }
    Ok(out)
}
