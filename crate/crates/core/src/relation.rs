//! Finite-dimensional linear relations stored as graph subspaces.
//!
//! A relation T : C^n -> C^m is identified with its graph
//! G(T) = {(x, y) | y in Tx}, a subspace of C^(n+m). Domain, range, kernel
//! and multivalued part are all derived from the graph; the quotient-map
//! quantities ||T|| and gamma(T) come from the operator part.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fredholm::FredholmData;
use crate::subspace::Subspace;

/// A linear relation X -> Y represented by its graph subspace.
#[derive(Clone, Debug)]
pub struct Relation {
    dim_x: usize,
    dim_y: usize,
    graph: Subspace,
}

/// The four derived subspaces of a relation.
#[derive(Clone, Debug)]
pub struct Parts {
    /// D(T), projection of the graph onto X.
    pub domain: Subspace,
    /// R(T), projection of the graph onto Y.
    pub range: Subspace,
    /// N(T) = {x | (x, 0) in G}.
    pub kernel: Subspace,
    /// T(0) = {y | (0, y) in G}.
    pub mv: Subspace,
}

/// The single-valued operator Q_T T : D(T) -> T(0)^perp in domain-frame
/// coordinates.
#[derive(Clone, Debug)]
pub struct OperatorPart {
    pub domain: Subspace,
    pub mv: Subspace,
    /// dim_y x dim D(T): maps domain-frame coordinates to ambient Y values
    /// already projected along T(0).
    pub matrix: DMatrix<Complex64>,
}

impl Relation {
    /// Relation of a single-valued everywhere-defined operator matrix.
    pub fn from_operator(a: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        if m == 0 || n == 0 {
            return Err(Error::ZeroAmbient);
        }
        let mut gens = DMatrix::zeros(n + m, n);
        for j in 0..n {
            gens[(j, j)] = Complex64::new(1.0, 0.0);
            for i in 0..m {
                gens[(n + i, j)] = a[(i, j)];
            }
        }
        Ok(Relation {
            dim_x: n,
            dim_y: m,
            graph: Subspace::span_mat(&gens, tol)?,
        })
    }

    /// Pencil form: graph generated by the columns of [B; A], i.e.
    /// G = {(Bu, Au)}.
    pub fn from_pencil(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if a.ncols() != b.ncols() {
            return Err(Error::Shape(format!(
                "pencil column mismatch: A has {}, B has {}",
                a.ncols(),
                b.ncols()
            )));
        }
        let (m, n, p) = (a.nrows(), b.nrows(), a.ncols());
        if m == 0 || n == 0 {
            return Err(Error::ZeroAmbient);
        }
        let mut gens = DMatrix::zeros(n + m, p);
        for j in 0..p {
            for i in 0..n {
                gens[(i, j)] = b[(i, j)];
            }
            for i in 0..m {
                gens[(n + i, j)] = a[(i, j)];
            }
        }
        Ok(Relation {
            dim_x: n,
            dim_y: m,
            graph: Subspace::span_mat(&gens, tol)?,
        })
    }

    /// Graph generated by explicit vectors in C^(dim_x + dim_y).
    pub fn from_graph_generators(
        dim_x: usize,
        dim_y: usize,
        vectors: &[DVector<Complex64>],
        tol: f64,
    ) -> Result<Self> {
        if dim_x == 0 || dim_y == 0 {
            return Err(Error::ZeroAmbient);
        }
        Ok(Relation {
            dim_x,
            dim_y,
            graph: Subspace::span(dim_x + dim_y, vectors, tol)?,
        })
    }

    /// Wrap an existing graph subspace.
    pub fn from_graph(dim_x: usize, dim_y: usize, graph: Subspace) -> Result<Self> {
        if dim_x == 0 || dim_y == 0 {
            return Err(Error::ZeroAmbient);
        }
        if graph.ambient_dim() != dim_x + dim_y {
            return Err(Error::AmbientMismatch(dim_x + dim_y, graph.ambient_dim()));
        }
        Ok(Relation { dim_x, dim_y, graph })
    }

    pub fn identity(n: usize, tol: f64) -> Result<Self> {
        Relation::from_operator(&DMatrix::identity(n, n), tol)
    }

    pub fn zero_operator(dim_x: usize, dim_y: usize, tol: f64) -> Result<Self> {
        Relation::from_operator(&DMatrix::zeros(dim_y, dim_x), tol)
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn tol(&self) -> f64 {
        self.graph.tol()
    }

    pub fn is_square(&self) -> bool {
        self.dim_x == self.dim_y
    }

    fn top_block(&self, col: usize) -> DVector<Complex64> {
        DVector::from_fn(self.dim_x, |i, _| self.graph.frame()[(i, col)])
    }

    fn bottom_block(&self, col: usize) -> DVector<Complex64> {
        DVector::from_fn(self.dim_y, |i, _| self.graph.frame()[(self.dim_x + i, col)])
    }

    /// D(T), R(T), N(T), T(0).
    pub fn parts(&self) -> Parts {
        let tol = self.tol();
        let g = self.graph.dim();
        let mut top = DMatrix::zeros(self.dim_x, g);
        let mut bot = DMatrix::zeros(self.dim_y, g);
        for j in 0..g {
            top.set_column(j, &self.top_block(j));
            bot.set_column(j, &self.bottom_block(j));
        }
        let domain = Subspace::span_mat(&top, tol).expect("dim_x > 0");
        let range = Subspace::span_mat(&bot, tol).expect("dim_y > 0");

        // N(T): top blocks of G ∩ (X ⊕ 0); T(0): bottom blocks of G ∩ (0 ⊕ Y).
        let x_axis = embed_subspace(&Subspace::full(self.dim_x, tol).unwrap(), self.dim_x + self.dim_y, 0);
        let y_axis = embed_subspace(&Subspace::full(self.dim_y, tol).unwrap(), self.dim_x + self.dim_y, self.dim_x);
        let kern_pairs = self.graph.intersect(&x_axis).expect("same ambient");
        let mv_pairs = self.graph.intersect(&y_axis).expect("same ambient");
        let kernel = block_of(&kern_pairs, 0, self.dim_x, tol);
        let mv = block_of(&mv_pairs, self.dim_x, self.dim_y, tol);
        Parts {
            domain,
            range,
            kernel,
            mv,
        }
    }

    /// Nullity, deficiency, index. In finite dimensions every relation is
    /// Fredholm with closed range.
    pub fn fredholm(&self) -> FredholmData {
        let p = self.parts();
        FredholmData::finite(p.kernel.dim(), self.dim_y - p.range.dim())
    }

    /// T^{-1}: graph swap. N(T^{-1}) = T(0), T^{-1}(0) = N(T).
    pub fn inverse(&self) -> Relation {
        let g = self.graph.dim();
        let mut gens = DMatrix::zeros(self.dim_x + self.dim_y, g);
        for j in 0..g {
            let x = self.top_block(j);
            let y = self.bottom_block(j);
            for i in 0..self.dim_y {
                gens[(i, j)] = y[i];
            }
            for i in 0..self.dim_x {
                gens[(self.dim_y + i, j)] = x[i];
            }
        }
        Relation {
            dim_x: self.dim_y,
            dim_y: self.dim_x,
            graph: Subspace::span_mat(&gens, self.tol()).expect("nonzero ambient"),
        }
    }

    /// The conjugate (Hilbert adjoint) relation: orthogonal complement of
    /// the rotated graph {(y, -x) : (x, y) in G(T)} in Y ⊕ X.
    pub fn conjugate(&self) -> Relation {
        let g = self.graph.dim();
        let mut gens = DMatrix::zeros(self.dim_x + self.dim_y, g);
        for j in 0..g {
            let x = self.top_block(j);
            let y = self.bottom_block(j);
            for i in 0..self.dim_y {
                gens[(i, j)] = y[i];
            }
            for i in 0..self.dim_x {
                gens[(self.dim_y + i, j)] = -x[i];
            }
        }
        let rotated = Subspace::span_mat(&gens, self.tol()).expect("nonzero ambient");
        Relation {
            dim_x: self.dim_y,
            dim_y: self.dim_x,
            graph: rotated.complement(),
        }
    }

    /// lambda - T: graph {(x, lambda x - y)}. Requires a square relation.
    pub fn shift(&self, lambda: Complex64) -> Result<Relation> {
        if !self.is_square() {
            return Err(Error::Shape("shift requires dim_x = dim_y".into()));
        }
        let n = self.dim_x;
        let g = self.graph.dim();
        let mut gens = DMatrix::zeros(2 * n, g);
        for j in 0..g {
            let x = self.top_block(j);
            let y = self.bottom_block(j);
            for i in 0..n {
                gens[(i, j)] = x[i];
                gens[(n + i, j)] = lambda * x[i] - y[i];
            }
        }
        Ok(Relation {
            dim_x: n,
            dim_y: n,
            graph: Subspace::span_mat(&gens, self.tol())?,
        })
    }

    /// T + S: graph {(x, y + z) : (x, y) in G(T), (x, z) in G(S)}.
    pub fn add(&self, other: &Relation) -> Result<Relation> {
        if self.dim_x != other.dim_x || self.dim_y != other.dim_y {
            return Err(Error::Shape(format!(
                "add: ({}, {}) vs ({}, {})",
                self.dim_x, self.dim_y, other.dim_x, other.dim_y
            )));
        }
        let (n, m) = (self.dim_x, self.dim_y);
        let tol = self.tol().max(other.tol());
        // Work in C^(n+m+m) with coordinates (x, y, z).
        let amb = n + 2 * m;
        let lift_t = lift(&self.graph, amb, &[(0, 0, n), (n, n, m)], m, n + m, tol);
        let lift_s = lift(&other.graph, amb, &[(0, 0, n), (n, n + m, m)], m, n, tol);
        let w = lift_t.intersect(&lift_s)?;
        // Map (x, y, z) -> (x, y + z).
        let g = w.dim();
        let mut gens = DMatrix::zeros(n + m, g);
        for j in 0..g {
            for i in 0..n {
                gens[(i, j)] = w.frame()[(i, j)];
            }
            for i in 0..m {
                gens[(n + i, j)] = w.frame()[(n + i, j)] + w.frame()[(n + m + i, j)];
            }
        }
        Ok(Relation {
            dim_x: n,
            dim_y: m,
            graph: Subspace::span_mat(&gens, tol)?,
        })
    }

    /// self ∘ inner: graph {(x, z) : exists y, (x, y) in G(inner),
    /// (y, z) in G(self)}.
    pub fn compose(&self, inner: &Relation) -> Result<Relation> {
        if inner.dim_y != self.dim_x {
            return Err(Error::Shape(format!(
                "compose: inner maps into C^{}, outer expects C^{}",
                inner.dim_y, self.dim_x
            )));
        }
        let (n, m, k) = (inner.dim_x, inner.dim_y, self.dim_y);
        let tol = self.tol().max(inner.tol());
        let amb = n + m + k;
        let lift_inner = lift(&inner.graph, amb, &[(0, 0, n), (n, n, m)], k, n + m, tol);
        let lift_outer = lift(&self.graph, amb, &[(0, n, m), (m, n + m, k)], n, 0, tol);
        let w = lift_inner.intersect(&lift_outer)?;
        let g = w.dim();
        let mut gens = DMatrix::zeros(n + k, g);
        for j in 0..g {
            for i in 0..n {
                gens[(i, j)] = w.frame()[(i, j)];
            }
            for i in 0..k {
                gens[(n + i, j)] = w.frame()[(n + m + i, j)];
            }
        }
        Ok(Relation {
            dim_x: n,
            dim_y: k,
            graph: Subspace::span_mat(&gens, tol)?,
        })
    }

    /// The matrix of Q_T T : D(T) -> T(0)^perp in domain-frame coordinates.
    pub fn operator_part(&self) -> OperatorPart {
        let parts = self.parts();
        let tol = self.tol();
        let g = self.graph.dim();
        let d = parts.domain.dim();
        let mut top = DMatrix::zeros(self.dim_x, g);
        let mut bot = DMatrix::zeros(self.dim_y, g);
        for j in 0..g {
            top.set_column(j, &self.top_block(j));
            bot.set_column(j, &self.bottom_block(j));
        }
        // Least-squares selection: for each domain frame vector x, a solution
        // c of top c = x gives y = bot c; selections differ by N(top) which
        // maps into T(0), projected out below.
        let pinv = pseudo_inverse(&top, tol);
        let mv_proj = parts.mv.projector();
        let mut matrix = DMatrix::zeros(self.dim_y, d);
        for j in 0..d {
            let x = parts.domain.frame().column(j).clone_owned();
            let c = &pinv * &x;
            let y = &bot * c;
            let y_proj = &y - &mv_proj * &y;
            matrix.set_column(j, &y_proj);
        }
        OperatorPart {
            domain: parts.domain,
            mv: parts.mv,
            matrix,
        }
    }

    /// ||T|| = ||Q_T T||: largest singular value of the operator part.
    pub fn rel_norm(&self) -> f64 {
        let op = self.operator_part();
        if op.matrix.ncols() == 0 {
            return 0.0;
        }
        crate::la::spectral_norm(&op.matrix).expect("svd converges")
    }

    /// Minimum modulus gamma(T); +inf when D(T) ⊆ N(T).
    pub fn min_modulus(&self) -> f64 {
        let op = self.operator_part();
        let parts = self.parts();
        let w = parts
            .domain
            .intersect(&parts.kernel.complement())
            .expect("same ambient");
        if w.dim() == 0 {
            return f64::INFINITY;
        }
        // Coordinates of the W frame in the domain frame.
        let coords = parts.domain.frame().adjoint() * w.frame();
        let b = &op.matrix * coords;
        crate::la::singular_values(&b)
            .expect("svd converges")
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Monte-Carlo estimate of gamma(T_G) under the sum graph norm
    /// ||x||_T = ||x|| + ||Tx||, for an everywhere-defined operator relation.
    /// Deterministic for fixed (samples, seed).
    pub fn graph_norm_gamma_estimate(&self, samples: usize, seed: u64) -> Result<f64> {
        let parts = self.parts();
        if parts.mv.dim() != 0 || parts.domain.dim() != self.dim_x {
            return Err(Error::Precondition(
                "graph-norm estimate needs an operator relation with full domain".into(),
            ));
        }
        if samples < 1000 {
            return Err(Error::InvalidInput("need at least 1000 samples".into()));
        }
        if self.rel_norm() == 0.0 {
            // gamma(T_G) := inf by convention when T = 0.
            return Ok(f64::INFINITY);
        }
        let a = self
            .to_operator_matrix()
            .expect("full-domain single-valued relation");
        let kern_proj = parts.kernel.projector();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::INFINITY;
        for _ in 0..samples {
            let x = DVector::from_fn(self.dim_x, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            });
            // For z in N(T): T(x - z) = Tx, so the graph-norm distance to the
            // kernel is d(x, N) + ||Tx||.
            let tx = (&a * &x).norm();
            let dist = (&x - &kern_proj * &x).norm();
            let denom = dist + tx;
            if denom > 1e-14 {
                best = best.min(tx / denom);
            }
        }
        Ok(best)
    }

    /// Standard-coordinate matrix, when the relation is a single-valued
    /// everywhere-defined operator.
    pub fn to_operator_matrix(&self) -> Option<DMatrix<Complex64>> {
        let op = self.operator_part();
        if op.mv.dim() != 0 || op.domain.dim() != self.dim_x {
            return None;
        }
        Some(&op.matrix * op.domain.frame().adjoint())
    }

    /// Graph-subspace equality within tolerance.
    pub fn approx_eq(&self, other: &Relation) -> Result<bool> {
        if self.dim_x != other.dim_x || self.dim_y != other.dim_y {
            return Ok(false);
        }
        self.graph.approx_eq(&other.graph)
    }
}

/// Embed a subspace of C^k into C^amb at row offset.
fn embed_subspace(s: &Subspace, amb: usize, offset: usize) -> Subspace {
    let mut gens = DMatrix::zeros(amb, s.dim());
    for j in 0..s.dim() {
        for i in 0..s.ambient_dim() {
            gens[(offset + i, j)] = s.frame()[(i, j)];
        }
    }
    Subspace::span_mat(&gens, s.tol()).expect("nonzero ambient")
}

/// Extract the block [offset, offset+len) of a subspace's frame columns and
/// re-span it. Used for kernels and multivalued parts, whose frames vanish
/// outside the block.
fn block_of(s: &Subspace, offset: usize, len: usize, tol: f64) -> Subspace {
    let mut gens = DMatrix::zeros(len, s.dim());
    for j in 0..s.dim() {
        for i in 0..len {
            gens[(i, j)] = s.frame()[(offset + i, j)];
        }
    }
    Subspace::span_mat(&gens, tol).expect("nonzero block")
}

/// Lift a graph subspace into a larger ambient space: each `(src, dst, len)`
/// copies `len` rows starting at `src` to destination offset `dst`; the
/// remaining `free_len` coordinates starting at `free_offset` are left free.
fn lift(
    graph: &Subspace,
    amb: usize,
    blocks: &[(usize, usize, usize)],
    free_len: usize,
    free_offset: usize,
    tol: f64,
) -> Subspace {
    let g = graph.dim();
    let mut gens = DMatrix::zeros(amb, g + free_len);
    for j in 0..g {
        for &(src, dst, len) in blocks {
            for i in 0..len {
                gens[(dst + i, j)] = graph.frame()[(src + i, j)];
            }
        }
    }
    for j in 0..free_len {
        gens[(free_offset + j, g + j)] = Complex64::new(1.0, 0.0);
    }
    Subspace::span_mat(&gens, tol).expect("nonzero ambient")
}

/// Moore-Penrose pseudoinverse with relative rank cutoff.
pub(crate) fn pseudo_inverse(m: &DMatrix<Complex64>, tol: f64) -> DMatrix<Complex64> {
    crate::la::pseudo_inverse(m, tol.max(1e-14)).expect("svd converges")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_relation(rng: &mut ChaCha8Rng, n: usize, m: usize, graph_dim: usize) -> Relation {
        let vs: Vec<DVector<Complex64>> = (0..graph_dim)
            .map(|_| {
                DVector::from_fn(n + m, |_, _| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    c(re, im)
                })
            })
            .collect();
        Relation::from_graph_generators(n, m, &vs, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn identity_parts() {
        let t = Relation::identity(3, DEFAULT_TOL).unwrap();
        let p = t.parts();
        assert_eq!(p.domain.dim(), 3);
        assert_eq!(p.range.dim(), 3);
        assert_eq!(p.kernel.dim(), 0);
        assert_eq!(p.mv.dim(), 0);
    }

    #[test]
    fn zero_operator_parts() {
        let t = Relation::zero_operator(2, 2, DEFAULT_TOL).unwrap();
        let p = t.parts();
        assert_eq!(p.kernel.dim(), 2);
        assert_eq!(p.range.dim(), 0);
    }

    #[test]
    fn purely_multivalued_relation() {
        let v = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let t = Relation::from_graph_generators(1, 1, &[v], DEFAULT_TOL).unwrap();
        let p = t.parts();
        assert_eq!(p.domain.dim(), 0);
        assert_eq!(p.mv.dim(), 1);
    }

    #[test]
    fn pencil_matches_graph_generators() {
        // pencil A = [1], B = [0] gives the purely multivalued relation.
        let a = DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]);
        let b = DMatrix::from_row_slice(1, 1, &[c(0.0, 0.0)]);
        let t = Relation::from_pencil(&a, &b, DEFAULT_TOL).unwrap();
        let v = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let s = Relation::from_graph_generators(1, 1, &[v], DEFAULT_TOL).unwrap();
        assert!(t.approx_eq(&s).unwrap());
    }

    #[test]
    fn graph_dim_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let t = random_relation(&mut rng, 2, 3, 3);
            let p = t.parts();
            assert_eq!(t.graph().dim(), p.domain.dim() + p.mv.dim());
            assert_eq!(t.graph().dim(), p.kernel.dim() + p.range.dim());
        }
    }

    #[test]
    fn inverse_swaps_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let t = random_relation(&mut rng, 3, 2, 2);
            let ti = t.inverse();
            let p = t.parts();
            let q = ti.parts();
            assert!(p.domain.approx_eq(&q.range).unwrap());
            assert!(p.range.approx_eq(&q.domain).unwrap());
            assert!(p.kernel.approx_eq(&q.mv).unwrap());
            assert!(p.mv.approx_eq(&q.kernel).unwrap());
            assert!(ti.inverse().approx_eq(&t).unwrap());
        }
    }

    #[test]
    fn inverse_of_identity() {
        let t = Relation::identity(3, DEFAULT_TOL).unwrap();
        assert!(t.inverse().approx_eq(&t).unwrap());
    }

    #[test]
    fn conjugate_of_hermitian_operator() {
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        assert!(t.conjugate().approx_eq(&t).unwrap());
    }

    #[test]
    fn conjugate_duality_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let t = random_relation(&mut rng, 3, 3, 3);
            let tc = t.conjugate();
            let f = t.fredholm();
            let fc = tc.fredholm();
            assert_eq!(fc.alpha, f.beta);
            assert_eq!(fc.beta, f.alpha);
            let p = t.parts();
            let pc = tc.parts();
            // dim T'(0) = dim_X - dim D(T)
            assert_eq!(pc.mv.dim(), t.dim_x() - p.domain.dim());
        }
    }

    #[test]
    fn double_conjugate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_relation(&mut rng, 2, 3, 2);
            assert!(t.conjugate().conjugate().approx_eq(&t).unwrap());
        }
    }

    #[test]
    fn shift_preserves_graph_dim() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let t = random_relation(&mut rng, 3, 3, 2);
            let s = t.shift(c(0.7, -1.3)).unwrap();
            assert_eq!(s.graph().dim(), t.graph().dim());
        }
    }

    #[test]
    fn shift_identity_at_one() {
        let t = Relation::identity(2, DEFAULT_TOL).unwrap();
        let s = t.shift(c(1.0, 0.0)).unwrap();
        assert_eq!(s.parts().kernel.dim(), 2);
    }

    #[test]
    fn shift_requires_square() {
        let t = Relation::zero_operator(2, 3, DEFAULT_TOL).unwrap();
        assert!(t.shift(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn add_operator_and_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = DMatrix::from_fn(3, 3, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            c(re, 0.0)
        });
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        let nt = Relation::from_operator(&(-a), DEFAULT_TOL).unwrap();
        let sum = t.add(&nt).unwrap();
        let z = Relation::zero_operator(3, 3, DEFAULT_TOL).unwrap();
        assert!(sum.approx_eq(&z).unwrap());
    }

    #[test]
    fn add_associative_on_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                let a = DMatrix::from_fn(2, 2, |_, _| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    c(re, im)
                });
                Relation::from_operator(&a, DEFAULT_TOL).unwrap()
            };
            let (t, s, r) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let lhs = t.add(&s).unwrap().add(&r).unwrap();
            let rhs = t.add(&s.add(&r).unwrap()).unwrap();
            assert!(lhs.approx_eq(&rhs).unwrap());
        }
    }

    #[test]
    fn compose_with_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = random_relation(&mut rng, 3, 3, 3);
        let id = Relation::identity(3, DEFAULT_TOL).unwrap();
        assert!(id.compose(&t).unwrap().approx_eq(&t).unwrap());
        assert!(t.compose(&id).unwrap().approx_eq(&t).unwrap());
    }

    #[test]
    fn compose_inverse_of_invertible() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        let got = t.inverse().compose(&t).unwrap();
        let id = Relation::identity(2, DEFAULT_TOL).unwrap();
        assert!(got.approx_eq(&id).unwrap());
    }

    #[test]
    fn operator_part_recovers_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        let back = t.to_operator_matrix().unwrap();
        assert!((back - a).norm() < 1e-10);
    }

    #[test]
    fn operator_part_well_defined() {
        // Two different selections y1, y2 in Tx project to the same value.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let t = random_relation(&mut rng, 3, 3, 4); // graph dim 4 forces mv or kernel
            let op = t.operator_part();
            let p = t.parts();
            if p.domain.dim() == 0 {
                continue;
            }
            // Pick x = first domain frame vector; find all selections by
            // solving on the graph and perturbing along 0 ⊕ T(0).
            let x = p.domain.frame().column(0).clone_owned();
            let qx = op.matrix.column(0).clone_owned();
            // Any y in Tx equals selection + mv element; projecting along mv
            // gives back qx.
            if p.mv.dim() > 0 {
                let mv_vec = p.mv.frame().column(0).clone_owned();
                let y_alt = &qx + &mv_vec * c(2.5, -1.0);
                let projected = &y_alt - p.mv.projector() * &y_alt;
                assert!((projected - &qx).norm() < 1e-9, "x = {x:?}");
            }
        }
    }

    #[test]
    fn rel_norm_of_diag() {
        let a = DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)]);
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        assert!((t.rel_norm() - 4.0).abs() < 1e-10);
        assert!((Relation::identity(3, DEFAULT_TOL).unwrap().rel_norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rel_norm_of_purely_multivalued_is_zero() {
        let v = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let t = Relation::from_graph_generators(1, 1, &[v], DEFAULT_TOL).unwrap();
        assert_eq!(t.rel_norm(), 0.0);
    }

    #[test]
    fn rel_norm_with_mv_part_matches_sphere_sampling() {
        // Relation "A + multivalued span{e1}": norm is the largest singular
        // value of P_{e1 perp} A, cross-checked by sampling the unit sphere.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DMatrix::from_fn(3, 3, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        let mut gens: Vec<DVector<Complex64>> = Vec::new();
        for j in 0..3 {
            let mut v = DVector::zeros(6);
            v[j] = c(1.0, 0.0);
            for i in 0..3 {
                v[3 + i] = a[(i, j)];
            }
            gens.push(v);
        }
        let mut mv = DVector::zeros(6);
        mv[3] = c(1.0, 0.0); // e1 of Y
        gens.push(mv);
        let t = Relation::from_graph_generators(3, 3, &gens, DEFAULT_TOL).unwrap();

        // Sphere-sampling oracle for sup ||Q T x||.
        let mut best: f64 = 0.0;
        for _ in 0..100_000 {
            let mut x = DVector::from_fn(3, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                c(re, im)
            });
            x /= c(x.norm(), 0.0);
            let mut y = &a * &x;
            y[0] = c(0.0, 0.0); // project along span{e1}
            best = best.max(y.norm());
        }
        assert!((t.rel_norm() - best).abs() < 1e-3 * best.max(1.0));
    }

    #[test]
    fn min_modulus_basics() {
        assert!((Relation::identity(2, DEFAULT_TOL).unwrap().min_modulus() - 1.0).abs() < 1e-10);
        let z = Relation::zero_operator(2, 2, DEFAULT_TOL).unwrap();
        assert!(z.min_modulus().is_infinite());
    }

    #[test]
    fn min_modulus_inverse_norm_duality() {
        // gamma(T) * ||T^{-1}|| = 1 in the finite cases.
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut checked = 0;
        for _ in 0..500 {
            let t = random_relation(&mut rng, 3, 3, 3);
            let g = t.min_modulus();
            if !g.is_finite() {
                continue;
            }
            let inv_norm = t.inverse().rel_norm();
            assert!((g * inv_norm - 1.0).abs() < 1e-8, "gamma {g} inv_norm {inv_norm}");
            checked += 1;
        }
        assert!(checked > 400);
    }

    #[test]
    fn graph_norm_gamma_identity() {
        // gamma(T) = 1 for the identity predicts gamma(T_G) = 1/2.
        let t = Relation::identity(2, DEFAULT_TOL).unwrap();
        let est = t.graph_norm_gamma_estimate(100_000, 7).unwrap();
        assert!((est - 0.5).abs() < 0.025, "estimate {est}");
    }

    #[test]
    fn graph_norm_gamma_diag() {
        // gamma = 2 for diag(2, 3) predicts gamma(T_G) = 2/3.
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
        let est = t.graph_norm_gamma_estimate(100_000, 11).unwrap();
        assert!((est - 2.0 / 3.0).abs() < 0.034, "estimate {est}");
    }

    #[test]
    fn graph_norm_gamma_zero_operator() {
        let t = Relation::zero_operator(2, 2, DEFAULT_TOL).unwrap();
        assert!(t.graph_norm_gamma_estimate(1000, 1).unwrap().is_infinite());
    }

    #[test]
    fn graph_norm_gamma_rejects_small_samples() {
        let t = Relation::identity(2, DEFAULT_TOL).unwrap();
        assert!(t.graph_norm_gamma_estimate(10, 1).is_err());
    }

    #[test]
    fn kappa_of_shift_is_graph_dim_minus_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for g in 1..=5 {
            let t = random_relation(&mut rng, 3, 3, g);
            for lam in [c(0.0, 0.0), c(1.5, -0.5), c(-2.0, 3.0)] {
                let f = t.shift(lam).unwrap().fredholm();
                assert_eq!(f.kappa_finite().unwrap(), g as i64 - 3);
            }
        }
    }
}
