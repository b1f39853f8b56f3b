//! The BandedModel: a Laurent or Toeplitz operator given by its symbol,
//! optionally with a finite-rank perturbation, a finite-dimensional
//! multivalued part, and a finite-codimensional domain restriction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fredholm::{Card, FredholmClass, FredholmData, IndexValue};
use crate::la;
use crate::poly::sort_complex;
use crate::relation::Relation;
use crate::spectra::{spectrum, Spectrum};
use crate::subspace::DEFAULT_TOL;

use super::symbol::LaurentSymbol;
use super::Rect;

/// Which sequence space the model acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Two-sided l^2(Z).
    Laurent,
    /// One-sided l^2(N).
    Toeplitz,
}

/// Finitely supported vector on the sequence lattice.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVec(pub Vec<(i64, Complex64)>);

impl SparseVec {
    pub fn new(entries: Vec<(i64, Complex64)>) -> Self {
        SparseVec(entries)
    }

    pub fn from_terms(terms: &[(i64, f64, f64)]) -> Self {
        SparseVec(
            terms
                .iter()
                .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|(_, c)| c.norm() == 0.0)
    }

    fn min_index(&self) -> Option<i64> {
        self.0.iter().map(|&(k, _)| k).min()
    }

    fn max_index(&self) -> Option<i64> {
        self.0.iter().map(|&(k, _)| k).max()
    }

    /// Dense window [offset, offset + len).
    pub fn densify(&self, offset: i64, len: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(len);
        for &(k, c) in &self.0 {
            let i = k - offset;
            if i >= 0 && (i as usize) < len {
                v[i as usize] += c;
            }
        }
        v
    }
}

/// Banded operator model; see the module docs.
#[derive(Clone, Debug)]
pub struct BandedModel {
    pub space: SpaceKind,
    pub symbol: LaurentSymbol,
    /// Finite-rank part F = sum_i u_i <v_i, .>.
    pub perturbation: Vec<(SparseVec, SparseVec)>,
    /// Spanning vectors of the multivalued part M = T(0).
    pub mv_part: Vec<SparseVec>,
    /// Spanning vectors of the orthogonal complement of the domain:
    /// D(T) = (span restriction)^perp. Arises as the adjoint of an mv part.
    pub restriction: Vec<SparseVec>,
}

/// One window of a singular sequence, plus its exact residual.
#[derive(Clone, Debug)]
pub struct SingularSequence {
    /// Lattice index of values[0].
    pub start: i64,
    pub values: DVector<Complex64>,
    /// ||(lambda - T) x_n|| computed over the full (finite) output support,
    /// after projecting out the multivalued part.
    pub residual: f64,
}

impl BandedModel {
    pub fn new(space: SpaceKind, symbol: LaurentSymbol) -> Result<Self> {
        let model = BandedModel {
            space,
            symbol,
            perturbation: Vec::new(),
            mv_part: Vec::new(),
            restriction: Vec::new(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_perturbation(mut self, pairs: Vec<(SparseVec, SparseVec)>) -> Result<Self> {
        self.perturbation = pairs;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mv_part(mut self, vectors: Vec<SparseVec>) -> Result<Self> {
        self.mv_part = vectors;
        self.validate()?;
        Ok(self)
    }

    pub fn with_restriction(mut self, vectors: Vec<SparseVec>) -> Result<Self> {
        self.restriction = vectors;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.space == SpaceKind::Toeplitz {
            let all = self
                .perturbation
                .iter()
                .flat_map(|(u, v)| [u, v])
                .chain(self.mv_part.iter())
                .chain(self.restriction.iter());
            for sv in all {
                if sv.min_index().is_some_and(|k| k < 0) {
                    return Err(Error::InvalidInput(
                        "negative support index in a Toeplitz model".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// dim T(0).
    pub fn mv_dim(&self) -> usize {
        sparse_rank(&self.mv_part)
    }

    /// codim D(T).
    pub fn restriction_dim(&self) -> usize {
        sparse_rank(&self.restriction)
    }

    /// Index-space offset of a size-n truncation: lattice index = row - offset.
    pub fn truncation_offset(&self, n: usize) -> i64 {
        match self.space {
            SpaceKind::Laurent => (n / 2) as i64,
            SpaceKind::Toeplitz => 0,
        }
    }

    /// Dense n x n truncation of the single-valued part (symbol +
    /// perturbation); the mv part and restriction live in
    /// `truncation_relation`.
    pub fn truncation_matrix(&self, n: usize) -> DMatrix<Complex64> {
        let coeffs = self.symbol.band_coefficients(n.max(1) - 1);
        let off = self.truncation_offset(n);
        let mut a = DMatrix::zeros(n, n);
        for (&k, &c) in &coeffs {
            // Band k: A_ij = a_{i-j} with i - j = k.
            let start = k.max(0) as usize;
            for i in start..n {
                let j = i as i64 - k;
                if j >= 0 && (j as usize) < n {
                    a[(i, j as usize)] = c;
                }
            }
        }
        for (u, v) in &self.perturbation {
            let ud = u.densify(-off, n);
            let vd = v.densify(-off, n);
            a += ud * vd.adjoint();
        }
        a
    }

    /// Truncation as a finite-dimensional Relation, including the mv part
    /// (graph generators (0, m)) and the domain restriction.
    pub fn truncation_relation(&self, n: usize) -> Result<Relation> {
        let a = self.truncation_matrix(n);
        let off = self.truncation_offset(n);
        if self.mv_part.is_empty() && self.restriction.is_empty() {
            return Relation::from_operator(&a, DEFAULT_TOL);
        }
        // Domain frame: complement of the restriction span.
        let q = if self.restriction.is_empty() {
            DMatrix::identity(n, n)
        } else {
            let r = sparse_frame(&self.restriction, -off, n)?;
            r.complement().frame().clone()
        };
        let d = q.ncols();
        let m = self.mv_part.len();
        let mut gens = DMatrix::zeros(2 * n, d + m);
        let aq = &a * &q;
        for j in 0..d {
            for i in 0..n {
                gens[(i, j)] = q[(i, j)];
                gens[(n + i, j)] = aq[(i, j)];
            }
        }
        for (j, mv) in self.mv_part.iter().enumerate() {
            let dense = mv.densify(-off, n);
            for i in 0..n {
                gens[(n + i, d + j)] = dense[i];
            }
        }
        let cols: Vec<DVector<Complex64>> = gens.column_iter().map(|c| c.clone_owned()).collect();
        Relation::from_graph_generators(n, n, &cols, DEFAULT_TOL)
    }

    /// Semi-Fredholm classification of lambda - T.
    ///
    /// Off the curve the operator is Fredholm with
    /// kappa = kappa_symbol + dim T(0) - codim D(T), where kappa_symbol is
    /// -winding (Toeplitz) or 0 (Laurent); the finite-rank perturbation never
    /// moves the index. The reported alpha/beta are the generic values
    /// max(0, +/-kappa); exact values at perturbed points come from
    /// `point_eigenvalues`. On-curve points are not semi-Fredholm and only
    /// `class`/`closed_range` are meaningful there (alpha/beta carry the
    /// infinite markers).
    pub fn fredholm_classify(&self, lambda: Complex64) -> Result<FredholmData> {
        if self.symbol.is_on_curve(lambda) {
            return Ok(FredholmData {
                alpha: Card::Infinite,
                beta: Card::Infinite,
                kappa: IndexValue::Undefined,
                closed_range: false,
                class: FredholmClass::NotSemiFredholm,
            });
        }
        let kappa_symbol = match self.space {
            SpaceKind::Laurent => 0,
            SpaceKind::Toeplitz => -self.symbol.winding(lambda, 256)?,
        };
        let kappa = kappa_symbol + self.mv_dim() as i64 - self.restriction_dim() as i64;
        Ok(FredholmData {
            alpha: Card::Finite(kappa.max(0) as usize),
            beta: Card::Finite((-kappa).max(0) as usize),
            kappa: IndexValue::Finite(kappa),
            closed_range: true,
            class: FredholmClass::Phi,
        })
    }

    /// Point-spectrum candidates inside `bounds`: eigenvalues of the
    /// truncations that persist across all sizes within 1e-4 and lie off the
    /// symbol curve.
    pub fn point_eigenvalues(&self, bounds: &Rect, trunc_sizes: &[usize]) -> Result<Vec<Complex64>> {
        if trunc_sizes.len() < 2 {
            return Err(Error::InvalidInput("need at least two truncation sizes".into()));
        }
        let mut sizes = trunc_sizes.to_vec();
        sizes.sort_unstable();
        if sizes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("truncation sizes must be distinct".into()));
        }
        if self.mv_dim() != self.restriction_dim() {
            return Err(Error::Precondition(
                "point spectrum is not discrete when dim T(0) != codim D(T); \
                 truncation eigenvalues carry no information"
                    .into(),
            ));
        }
        let tol_persist = 1e-4;
        let curve_margin = self.symbol.curve_tol().max(tol_persist);
        let mut per_size: Vec<Vec<Complex64>> = Vec::with_capacity(sizes.len());
        for &n in &sizes {
            let eig = if self.mv_part.is_empty() && self.restriction.is_empty() {
                la::eigenvalues(&self.truncation_matrix(n))?
            } else {
                match spectrum(&self.truncation_relation(n)?)? {
                    Spectrum::Points(p) => p,
                    Spectrum::AllOfC => {
                        return Err(Error::Precondition(
                            "truncation relation has a singular pencil".into(),
                        ))
                    }
                }
            };
            per_size.push(
                eig.into_iter()
                    .filter(|l| bounds.contains(*l) && self.symbol.curve_distance(*l) > curve_margin)
                    .collect(),
            );
        }
        let (largest, rest) = per_size.split_last().expect("nonempty");
        let mut out: Vec<Complex64> = Vec::new();
        'cand: for &l in largest {
            for other in rest {
                if !other.iter().any(|&m| (m - l).norm() <= tol_persist) {
                    continue 'cand;
                }
            }
            if !out.iter().any(|&m| (m - l).norm() <= tol_persist) {
                out.push(l);
            }
        }
        // Finite sections of shift-like symbols carry exact eigenvalues whose
        // (approximate) kernel vectors live at the artificial window edges:
        // persistence alone cannot reject them. Keep a candidate only when
        // its kernel vector at the largest size is interior-localized.
        let n_big = *sizes.last().expect("nonempty");
        let mut kept = Vec::new();
        for &l in &out {
            let ok = if self.mv_part.is_empty() && self.restriction.is_empty() {
                let a = self.truncation_matrix(n_big);
                let shifted = DMatrix::from_diagonal_element(n_big, n_big, l) - &a;
                let (_, _, v) = la::svd_full(&shifted)?;
                self.interior_localized(&v.column(n_big - 1).clone_owned())
            } else {
                let ker = self.truncation_relation(n_big)?.shift(l)?.parts().kernel;
                ker.dim() == 0
                    || (0..ker.dim())
                        .any(|j| self.interior_localized(&ker.frame().column(j).clone_owned()))
            };
            if ok {
                kept.push(l);
            }
        }
        sort_complex(&mut kept);
        Ok(kept)
    }

    /// True when the window vector carries essentially no mass at the
    /// artificial edges of the truncation (both edges for Laurent, the far
    /// edge for Toeplitz, whose index-0 boundary is a real one).
    fn interior_localized(&self, x: &DVector<Complex64>) -> bool {
        let len = x.len();
        if len == 0 {
            return false;
        }
        let total = x.norm_squared();
        if total <= 0.0 {
            return false;
        }
        let margin = (len / 8).max(8).min(len.div_ceil(3));
        let mut edge = 0.0;
        for i in 0..margin {
            edge += x[len - 1 - i].norm_sqr();
            if self.space == SpaceKind::Laurent {
                edge += x[i].norm_sqr();
            }
        }
        edge / total < 1e-6
    }

    /// The Prop 2.2 window x_n(k) = z0^k / sqrt(2n+1) on |k| <= n (Laurent)
    /// or 0 <= k <= 2n (Toeplitz), where z0 is chosen so the interior rows
    /// reproduce a(e^{i theta0}) = lambda. Residual decays like n^{-1/2}.
    pub fn singular_sequence(&self, lambda: Complex64, n: usize) -> Result<SingularSequence> {
        let (theta0, dist) = self.symbol.curve_argmin(lambda);
        if dist > self.symbol.curve_tol() {
            return Err(Error::Precondition(format!(
                "lambda is not on the symbol curve (distance {dist:.3e})"
            )));
        }
        // A x with x_j = z0^j gives z0^i a(1/z0); 1/z0 = e^{i theta0} wants
        // z0 = e^{-i theta0}.
        let z0 = Complex64::from_polar(1.0, -theta0);
        let len = 2 * n + 1;
        let start = match self.space {
            SpaceKind::Laurent => -(n as i64),
            SpaceKind::Toeplitz => 0,
        };
        let scale = 1.0 / (len as f64).sqrt();
        let x = DVector::from_fn(len, |j, _| z0.powi(start as i32 + j as i32) * scale);

        // Output support: window plus the band, plus perturbation supports.
        let band = 4 * n + 64;
        let coeffs = self.symbol.band_coefficients(band);
        let blo = coeffs.keys().next().copied().unwrap_or(0);
        let bhi = coeffs.keys().next_back().copied().unwrap_or(0);
        let mut lo = start + blo.min(0);
        let mut hi = start + len as i64 - 1 + bhi.max(0);
        for (u, _) in &self.perturbation {
            if let (Some(a), Some(b)) = (u.min_index(), u.max_index()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        for m in &self.mv_part {
            if let (Some(a), Some(b)) = (m.min_index(), m.max_index()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if self.space == SpaceKind::Toeplitz {
            lo = lo.max(0);
        }
        let out_len = (hi - lo + 1) as usize;

        // y = (lambda - T) x over the full output support.
        let mut y = DVector::<Complex64>::zeros(out_len);
        for j in 0..len {
            y[(start + j as i64 - lo) as usize] += lambda * x[j];
        }
        for (&k, &c) in &coeffs {
            for j in 0..len {
                let i = start + j as i64 + k;
                if i >= lo && i <= hi {
                    y[(i - lo) as usize] -= c * x[j];
                }
            }
        }
        for (u, v) in &self.perturbation {
            let mut inner = Complex64::new(0.0, 0.0);
            for &(k, c) in &v.0 {
                let j = k - start;
                if j >= 0 && (j as usize) < len {
                    inner += c.conj() * x[j as usize];
                }
            }
            for &(k, c) in &u.0 {
                if k >= lo && k <= hi {
                    y[(k - lo) as usize] -= c * inner;
                }
            }
        }
        // The mv part absorbs components of y along M.
        if !self.mv_part.is_empty() {
            let frame = sparse_frame(&self.mv_part, lo, out_len)?;
            y -= frame.projector() * &y;
        }
        Ok(SingularSequence {
            start,
            values: x,
            residual: y.norm(),
        })
    }

    /// Adjoint model: flipped-conjugated symbol, perturbation pairs swapped,
    /// mv part and restriction exchanged.
    pub fn conjugate_model(&self) -> BandedModel {
        BandedModel {
            space: self.space,
            symbol: self.symbol.conjugate(),
            perturbation: self
                .perturbation
                .iter()
                .map(|(u, v)| (v.clone(), u.clone()))
                .collect(),
            mv_part: self.restriction.clone(),
            restriction: self.mv_part.clone(),
        }
    }

    /// Resolvent model T_mu = (mu - T)^{-1} as a rational-symbol Laurent
    /// model. Requires the Laurent space, no perturbation/mv/restriction
    /// (their transforms leave the banded class), and mu in rho(T).
    pub fn mobius_laurent(&self, mu: Complex64) -> Result<BandedModel> {
        if self.space != SpaceKind::Laurent {
            return Err(Error::InvalidInput(
                "resolvents of Toeplitz models are not Toeplitz; Laurent only".into(),
            ));
        }
        if !self.perturbation.is_empty() {
            return Err(Error::Precondition(
                "mobius transform of a perturbed model is not finitely banded".into(),
            ));
        }
        if !self.mv_part.is_empty() || !self.restriction.is_empty() {
            return Err(Error::Precondition(
                "mu in rho(T) is impossible with a multivalued part or restriction".into(),
            ));
        }
        if self.symbol.is_on_curve(mu) {
            return Err(Error::Precondition("mu lies on the symbol curve".into()));
        }
        if self.symbol.winding(mu, 256)? != 0 {
            return Err(Error::Precondition("mu - T has nonzero index".into()));
        }
        // 1/(mu - num/den) = den / (mu den - num).
        let num = self.symbol.denominator().clone();
        let mut den = self.symbol.denominator().clone();
        for c in den.values_mut() {
            *c *= mu;
        }
        for (&k, &c) in self.symbol.numerator() {
            *den.entry(k).or_insert(Complex64::new(0.0, 0.0)) -= c;
        }
        let symbol = LaurentSymbol::rational(num, den)?;
        BandedModel::new(SpaceKind::Laurent, symbol)
    }

    /// Smallest singular values of the size-n truncation of lambda - T
    /// (single-valued part). Used as the independent Fredholmness probe.
    pub fn truncation_smallest_svs(&self, lambda: Complex64, n: usize, count: usize) -> Result<Vec<f64>> {
        let mut m = -self.truncation_matrix(n);
        for i in 0..n {
            m[(i, i)] += lambda;
        }
        let sv = la::singular_values(&m)?;
        Ok(sv.iter().rev().take(count).copied().collect())
    }
}

/// Numerical rank of a finite family of sparse vectors.
fn sparse_rank(vectors: &[SparseVec]) -> usize {
    let nonzero: Vec<&SparseVec> = vectors.iter().filter(|v| !v.is_empty()).collect();
    if nonzero.is_empty() {
        return 0;
    }
    let lo = nonzero.iter().filter_map(|v| v.min_index()).min().unwrap();
    let hi = nonzero.iter().filter_map(|v| v.max_index()).max().unwrap();
    let len = (hi - lo + 1) as usize;
    let mut m = DMatrix::zeros(len, nonzero.len());
    for (j, v) in nonzero.iter().enumerate() {
        m.set_column(j, &v.densify(lo, len));
    }
    let sv = la::singular_values(&m).expect("svd converges");
    let smax = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > DEFAULT_TOL * smax).count()
}

/// Orthonormalized dense window of a sparse family.
fn sparse_frame(vectors: &[SparseVec], offset: i64, len: usize) -> Result<crate::Subspace> {
    let mut m = DMatrix::zeros(len, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, &v.densify(offset, len));
    }
    crate::Subspace::span_mat(&m, DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift(space: SpaceKind) -> BandedModel {
        BandedModel::new(space, LaurentSymbol::from_terms(&[(1, 1.0, 0.0)]).unwrap()).unwrap()
    }

    #[test]
    fn truncation_matrix_band_layout() {
        let m = shift(SpaceKind::Toeplitz).truncation_matrix(4);
        // a(z) = z: ones on the subdiagonal (A e_j = e_{j+1}).
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], c(expect, 0.0));
            }
        }
    }

    #[test]
    fn classify_unilateral_shift() {
        let t = shift(SpaceKind::Toeplitz);
        let f = t.fredholm_classify(c(0.0, 0.0)).unwrap();
        assert_eq!(f.kappa, IndexValue::Finite(-1));
        assert_eq!(f.alpha, Card::Finite(0));
        assert_eq!(f.beta, Card::Finite(1));
        assert_eq!(f.class, FredholmClass::Phi);
        let on = t.fredholm_classify(Complex64::from_polar(1.0, 0.7)).unwrap();
        assert_eq!(on.class, FredholmClass::NotSemiFredholm);
        assert!(!on.closed_range);
    }

    #[test]
    fn perturbation_never_moves_index() {
        let base = shift(SpaceKind::Laurent);
        let pert = base
            .clone()
            .with_perturbation(vec![
                (SparseVec::from_terms(&[(0, 1.0, 0.0)]), SparseVec::from_terms(&[(1, 2.0, 0.0)])),
                (SparseVec::from_terms(&[(2, 0.5, 0.5)]), SparseVec::from_terms(&[(-1, 1.0, 0.0)])),
            ])
            .unwrap();
        for lambda in [c(0.0, 0.0), c(2.0, 1.0), c(-0.4, 0.3)] {
            let a = base.fredholm_classify(lambda).unwrap();
            let b = pert.fredholm_classify(lambda).unwrap();
            assert_eq!(a.kappa, b.kappa);
            assert_eq!(a.class, b.class);
        }
    }

    #[test]
    fn mv_part_shifts_index_up() {
        let t = shift(SpaceKind::Laurent)
            .with_mv_part(vec![SparseVec::from_terms(&[(0, 1.0, 0.0)])])
            .unwrap();
        let f = t.fredholm_classify(c(0.0, 2.0)).unwrap();
        assert_eq!(f.kappa, IndexValue::Finite(1));
        let r = shift(SpaceKind::Laurent)
            .with_restriction(vec![SparseVec::from_terms(&[(0, 1.0, 0.0)])])
            .unwrap();
        assert_eq!(r.fredholm_classify(c(0.0, 2.0)).unwrap().kappa, IndexValue::Finite(-1));
    }

    #[test]
    fn laurent_truncation_relation_matches_matrix_case() {
        let t = shift(SpaceKind::Laurent);
        let rel = t.truncation_relation(9).unwrap();
        let mat = t.truncation_matrix(9);
        let direct = Relation::from_operator(&mat, DEFAULT_TOL).unwrap();
        assert!(rel.approx_eq(&direct).unwrap());
    }

    #[test]
    fn bilateral_shift_has_no_persistent_eigenvalues() {
        let t = shift(SpaceKind::Laurent);
        let bounds = Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let eig = t.point_eigenvalues(&bounds, &[60, 90, 120]).unwrap();
        assert!(eig.is_empty(), "found {eig:?}");
    }

    #[test]
    fn rank_one_update_eigenvalue_matches_secular_equation() {
        // L + 2 e0 <e0, .>: the rank-one secular equation
        // 1 = 2 <e0, (lambda - L)^{-1} e0> gives lambda = 2 exactly
        // (resolvent diagonal of the bilateral shift is 1/lambda outside
        // the unit circle).
        let t = shift(SpaceKind::Laurent)
            .with_perturbation(vec![(
                SparseVec::from_terms(&[(0, 2.0, 0.0)]),
                SparseVec::from_terms(&[(0, 1.0, 0.0)]),
            )])
            .unwrap();
        let bounds = Rect::new(1.2, 3.0, -1.0, 1.0).unwrap();
        let eig = t.point_eigenvalues(&bounds, &[60, 90, 120]).unwrap();
        assert_eq!(eig.len(), 1, "eigenvalues {eig:?}");
        assert!((eig[0] - c(2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn mv_part_eigenvalues_via_relation_path() {
        // Balanced mv part / restriction keeps the truncation pencil regular
        // (graph dimension n), so the relation path runs; the true relation
        // L|_{e0-perp} + span{(0, e0)} has empty point spectrum off the disk.
        let t = shift(SpaceKind::Laurent)
            .with_mv_part(vec![SparseVec::from_terms(&[(0, 1.0, 0.0)])])
            .unwrap()
            .with_restriction(vec![SparseVec::from_terms(&[(0, 1.0, 0.0)])])
            .unwrap();
        let bounds = Rect::new(1.5, 3.0, -0.5, 0.5).unwrap();
        // Small sizes keep the relation-path QZ affordable.
        let eig = t.point_eigenvalues(&bounds, &[24, 36]).unwrap();
        assert!(eig.is_empty(), "found {eig:?}");
    }

    #[test]
    fn unbalanced_mv_part_rejects_point_eigenvalues() {
        let t = shift(SpaceKind::Laurent)
            .with_mv_part(vec![SparseVec::from_terms(&[(0, 1.0, 0.0)])])
            .unwrap();
        let bounds = Rect::new(1.5, 3.0, -0.5, 0.5).unwrap();
        assert!(matches!(
            t.point_eigenvalues(&bounds, &[24, 36]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn singular_sequence_residual_decay() {
        let t = shift(SpaceKind::Laurent);
        let lambda = c(1.0, 0.0);
        let r64 = t.singular_sequence(lambda, 64).unwrap().residual;
        let r256 = t.singular_sequence(lambda, 256).unwrap().residual;
        let ratio = r256 / r64;
        assert!(ratio > 0.4 && ratio < 0.65, "ratio {ratio}");
        let s = t.singular_sequence(lambda, 64).unwrap();
        assert!((s.values.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_sequence_needs_curve_point() {
        let t = shift(SpaceKind::Laurent);
        assert!(t.singular_sequence(c(3.0, 0.0), 64).is_err());
    }

    #[test]
    fn toeplitz_singular_sequence_one_sided() {
        let t = shift(SpaceKind::Toeplitz);
        let s = t.singular_sequence(c(1.0, 0.0), 64).unwrap();
        assert_eq!(s.start, 0);
        let s4 = t.singular_sequence(c(1.0, 0.0), 256).unwrap();
        let ratio = s4.residual / s.residual;
        assert!(ratio > 0.4 && ratio < 0.65, "ratio {ratio}");
    }

    #[test]
    fn conjugate_model_swaps_everything() {
        let t = shift(SpaceKind::Laurent)
            .with_perturbation(vec![(
                SparseVec::from_terms(&[(0, 1.0, 0.0)]),
                SparseVec::from_terms(&[(1, 0.0, 1.0)]),
            )])
            .unwrap()
            .with_mv_part(vec![SparseVec::from_terms(&[(2, 1.0, 0.0)])])
            .unwrap();
        let tc = t.conjugate_model();
        assert_eq!(tc.symbol.numerator().get(&-1), Some(&c(1.0, 0.0)));
        assert_eq!(tc.perturbation[0].0, t.perturbation[0].1);
        assert!(tc.mv_part.is_empty());
        assert_eq!(tc.restriction, t.mv_part);
        // Double adjoint restores the model.
        let tcc = tc.conjugate_model();
        assert_eq!(tcc.symbol, t.symbol);
        assert_eq!(tcc.mv_part, t.mv_part);
    }

    #[test]
    fn adjoint_truncation_is_matrix_adjoint() {
        let sym = LaurentSymbol::from_terms(&[(1, 1.0, 0.0), (-2, 0.0, 0.5), (0, 0.3, 0.0)]).unwrap();
        let t = BandedModel::new(SpaceKind::Laurent, sym).unwrap();
        let a = t.truncation_matrix(11);
        let ac = t.conjugate_model().truncation_matrix(11);
        assert!((a.adjoint() - ac).norm() < 1e-14);
    }

    #[test]
    fn mobius_laurent_spectral_mapping() {
        let t = shift(SpaceKind::Laurent);
        let mu = c(2.0, 0.0);
        let tm = t.mobius_laurent(mu).unwrap();
        // Curve identity: (mu - lambda)^{-1} on the transformed curve for
        // lambda on the original one.
        for j in 0..20 {
            let th = 2.0 * std::f64::consts::PI * j as f64 / 20.0;
            let lambda = t.symbol.eval(Complex64::from_polar(1.0, th));
            let mapped = 1.0 / (mu - lambda);
            assert!(tm.symbol.curve_distance(mapped) < 1e-8);
        }
        // Index mapping off the curve.
        for lambda in [c(0.0, 0.0), c(0.3, 0.4), c(3.0, 1.0), c(-1.4, 0.2)] {
            if t.symbol.curve_distance(lambda) < 0.05 {
                continue;
            }
            let mapped = 1.0 / (mu - lambda);
            if tm.symbol.curve_distance(mapped) < 1e-6 {
                continue;
            }
            let k1 = t.fredholm_classify(lambda).unwrap().kappa;
            let k2 = tm.fredholm_classify(mapped).unwrap().kappa;
            assert_eq!(k1, k2, "lambda {lambda}");
        }
    }

    #[test]
    fn mobius_preconditions() {
        let t = shift(SpaceKind::Toeplitz);
        assert!(t.mobius_laurent(c(2.0, 0.0)).is_err());
        let l = shift(SpaceKind::Laurent);
        assert!(l.mobius_laurent(c(1.0, 0.0)).is_err()); // on curve
        assert!(l.mobius_laurent(c(0.0, 0.0)).is_err()); // winding 1
        let p = shift(SpaceKind::Laurent)
            .with_perturbation(vec![(
                SparseVec::from_terms(&[(0, 1.0, 0.0)]),
                SparseVec::from_terms(&[(0, 1.0, 0.0)]),
            )])
            .unwrap();
        assert!(p.mobius_laurent(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn toeplitz_rejects_negative_support() {
        let r = shift(SpaceKind::Toeplitz)
            .with_mv_part(vec![SparseVec::from_terms(&[(-1, 1.0, 0.0)])]);
        assert!(r.is_err());
    }

    #[test]
    fn smallest_sv_probe_separates_regimes() {
        // Bilateral shift: off curve with winding 0 the truncation stays
        // uniformly invertible; on the curve sigma_min sinks with n.
        let t = shift(SpaceKind::Laurent);
        let far = t.truncation_smallest_svs(c(2.0, 0.0), 200, 1).unwrap()[0];
        assert!(far > 0.5);
        let on = t.truncation_smallest_svs(c(1.0, 0.0), 200, 1).unwrap()[0];
        assert!(on < 0.05);
    }
}
