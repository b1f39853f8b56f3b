//! Seeded random-instance generators and named property suites.
//!
//! Each suite checks one quantified invariant from the relation, spectra, or
//! banded modules on reproducible random instances. Trials draw from
//! independent RNG streams keyed by (seed, trial index), so reports are
//! deterministic regardless of execution order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::banded::{BandedModel, LaurentSymbol, Rect, RegionOptions, SparseVec, SpaceKind};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::schema::{ModelDoc, RelationDoc};
use crate::spectra::{classify_point, mobius_factor_check, mobius_resolvent, spectrum, weyl_correction, Spectrum};
use crate::subspace::DEFAULT_TOL;

/// Machine-readable outcome of one suite run. Empty `failures` means pass;
/// every failure carries its serialized inputs for replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub max_residual: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<ModelDoc>,
}

/// Instance shapes for `gen_relation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Operator,
    Pencil,
    WithMvPart,
    LowRankKernel,
}

const PROFILES: [Profile; 4] = [
    Profile::Operator,
    Profile::Pencil,
    Profile::WithMvPart,
    Profile::LowRankKernel,
];

fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn random_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(nrows, ncols, |_, _| random_complex(rng))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| random_complex(rng))
}

/// Reproducible random square relation of the given profile on C^dims.
pub fn gen_relation(seed: u64, dims: usize, profile: Profile) -> Result<Relation> {
    if dims == 0 || dims > 12 {
        return Err(Error::InvalidInput(format!(
            "dims must be in 1..=12, got {dims}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        Profile::Operator => Relation::from_operator(&random_matrix(&mut rng, dims, dims), DEFAULT_TOL),
        Profile::Pencil => {
            let a = random_matrix(&mut rng, dims, dims);
            let mut b = random_matrix(&mut rng, dims, dims);
            if dims > 1 && rng.gen_bool(0.5) {
                // Rank-deficient B exercises genuinely multivalued pencils.
                let col = rng.gen_range(0..dims);
                b.set_column(col, &DVector::zeros(dims));
            }
            Relation::from_pencil(&a, &b, DEFAULT_TOL)
        }
        Profile::WithMvPart => {
            let a = random_matrix(&mut rng, dims, dims);
            let mut gens: Vec<DVector<Complex64>> = (0..dims)
                .map(|j| {
                    let mut g = DVector::zeros(2 * dims);
                    g[j] = Complex64::new(1.0, 0.0);
                    for i in 0..dims {
                        g[dims + i] = a[(i, j)];
                    }
                    g
                })
                .collect();
            let mut mv = DVector::zeros(2 * dims);
            let y = random_vector(&mut rng, dims);
            for i in 0..dims {
                mv[dims + i] = y[i];
            }
            gens.push(mv);
            Relation::from_graph_generators(dims, dims, &gens, DEFAULT_TOL)
        }
        Profile::LowRankKernel => {
            // A annihilates v, so alpha(A) >= 1. dims = 1 needs the exact
            // zero matrix: m - (m v)v* leaves a ~1e-16 residue whose rank is
            // read inconsistently by relative tolerances.
            let a = if dims == 1 {
                DMatrix::zeros(1, 1)
            } else {
                let m = random_matrix(&mut rng, dims, dims);
                let v = random_vector(&mut rng, dims).normalize();
                &m - (m.clone() * &v) * v.adjoint()
            };
            Relation::from_operator(&a, DEFAULT_TOL)
        }
    }
}

/// Random perturbation S satisfying the small-perturbation hypotheses for T:
/// D(S) = X (so D(S) contains D(T)), S(0) inside T(0), and
/// rel_norm(S) <= 0.9 * min(gamma(T), 1).
pub fn gen_small_perturbation(t: &Relation, seed: u64) -> Result<Relation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = t.min_modulus();
    let cap = 0.9 * gamma.min(1.0);
    if !(cap > 0.0) {
        return Err(Error::Precondition(format!(
            "minimum modulus {gamma} admits no nonzero small perturbation"
        )));
    }
    let (dx, dy) = (t.dim_x(), t.dim_y());
    let b = random_matrix(&mut rng, dy, dx);
    let norm = crate::la::spectral_norm(&b)?;
    let scale = cap * rng.gen_range(0.2..0.9) / norm.max(1e-300);
    let b = b * Complex64::new(scale, 0.0);

    let t_mv = t.parts().mv;
    if t_mv.dim() > 0 && rng.gen_bool(0.5) {
        // Include a multivalued direction inside T(0).
        let mut gens: Vec<DVector<Complex64>> = (0..dx)
            .map(|j| {
                let mut g = DVector::zeros(dx + dy);
                g[j] = Complex64::new(1.0, 0.0);
                for i in 0..dy {
                    g[dx + i] = b[(i, j)];
                }
                g
            })
            .collect();
        let mut mv = DVector::zeros(dx + dy);
        let col = t_mv.frame().column(0).clone_owned();
        for i in 0..dy {
            mv[dx + i] = col[i];
        }
        gens.push(mv);
        Relation::from_graph_generators(dx, dy, &gens, DEFAULT_TOL)
    } else {
        Relation::from_operator(&b, DEFAULT_TOL)
    }
}

fn relation_alpha_beta_kappa(t: &Relation) -> (usize, usize, i64) {
    let p = t.parts();
    let alpha = p.kernel.dim();
    let beta = t.dim_y() - p.range.dim();
    (alpha, beta, alpha as i64 - beta as i64)
}

/// c * S as a relation (compose with the scalar operator on Y).
fn scale_relation(s: &Relation, c: Complex64) -> Result<Relation> {
    let dy = s.dim_y();
    let m = DMatrix::from_diagonal_element(dy, dy, c);
    Relation::from_operator(&m, s.tol())?.compose(s)
}

struct SuiteCtx {
    seed: u64,
    failures: Vec<Failure>,
    max_residual: f64,
    notes: Vec<String>,
}

impl SuiteCtx {
    fn new(seed: u64) -> Self {
        SuiteCtx {
            seed,
            failures: Vec::new(),
            max_residual: 0.0,
            notes: Vec::new(),
        }
    }

    fn fail_relations(&mut self, trial: u64, detail: String, rels: &[&Relation]) {
        self.failures.push(Failure {
            trial,
            detail,
            relations: rels.iter().map(|r| RelationDoc::from_relation(r)).collect(),
            models: Vec::new(),
        });
    }

    fn fail_models(&mut self, trial: u64, detail: String, models: &[&BandedModel]) {
        self.failures.push(Failure {
            trial,
            detail,
            relations: Vec::new(),
            models: models.iter().map(|m| ModelDoc::from_model(m)).collect(),
        });
    }

    fn residual(&mut self, r: f64) {
        if r > self.max_residual {
            self.max_residual = r;
        }
    }

    fn report(self, name: &str, trials: usize) -> SuiteReport {
        SuiteReport {
            suite_name: name.to_string(),
            seed: self.seed,
            trials,
            failures: self.failures,
            max_residual: self.max_residual,
            notes: self.notes,
        }
    }
}

fn trial_seed(seed: u64, trial: u64) -> u64 {
    // Distinct generator seeds per trial; generators own their streams.
    seed ^ (trial.wrapping_mul(0x9e37_79b9_7f4a_7c15)).wrapping_add(1)
}

fn suite_graph_dim_identities(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(1..=8);
        let profile = PROFILES[trial as usize % PROFILES.len()];
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        let p = t.parts();
        let g = t.graph().dim();
        let ok_nr = g == p.kernel.dim() + p.range.dim();
        let ok_dm = g == p.domain.dim() + p.mv.dim();
        let lambda = random_complex(&mut rng);
        let (_, _, kappa) = relation_alpha_beta_kappa(&t.shift(lambda).expect("square"));
        let ok_kappa = kappa == g as i64 - t.dim_x() as i64;
        if !(ok_nr && ok_dm && ok_kappa) {
            ctx.fail_relations(
                trial,
                format!(
                    "dim G = {g}, N+R = {}, D+T(0) = {}, kappa(lambda-T) = {kappa}",
                    p.kernel.dim() + p.range.dim(),
                    p.domain.dim() + p.mv.dim()
                ),
                &[&t],
            );
        }
    }
    ctx.report("graph_dim_identities", trials)
}

fn suite_prop_2_3(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(1..=8);
        let profile = PROFILES[trial as usize % PROFILES.len()];
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        let s = match gen_small_perturbation(&t, trial_seed(seed, trial ^ 0xabcd)) {
            Ok(s) => s,
            Err(_) => continue, // gamma = 0: hypotheses are unsatisfiable
        };
        let sum = t.add(&s).expect("same dims");
        let (a_t, b_t, _) = relation_alpha_beta_kappa(&t);
        let (a_s, b_s, _) = relation_alpha_beta_kappa(&sum);
        if a_s > a_t || b_s > b_t {
            ctx.fail_relations(
                trial,
                format!("alpha {a_t} -> {a_s}, beta {b_t} -> {b_s} under small perturbation"),
                &[&t, &s],
            );
        }
    }
    ctx.report("prop_2_3_perturbation_bounds", trials)
}

fn suite_prop_2_5(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(1..=8);
        let profile = PROFILES[trial as usize % PROFILES.len()];
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        let s = match gen_small_perturbation(&t, trial_seed(seed, trial ^ 0xabcd)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let sum = t.add(&s).expect("same dims");
        let (_, _, k_t) = relation_alpha_beta_kappa(&t);
        let (_, _, k_s) = relation_alpha_beta_kappa(&sum);
        if k_t != k_s {
            ctx.fail_relations(trial, format!("kappa {k_t} -> {k_s}"), &[&t, &s]);
        }
    }
    ctx.report("prop_2_5_index_stability", trials)
}

fn suite_prop_2_6a(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(1..=8);
        let profile = PROFILES[trial as usize % 2]; // operator | pencil
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        // Finite-rank S with full domain: dim R(S) <= 2 < infinity.
        let rank = rng.gen_range(1..=2.min(dims));
        let mut f = DMatrix::zeros(dims, dims);
        for _ in 0..rank {
            let u = random_vector(&mut rng, dims);
            let v = random_vector(&mut rng, dims);
            f += u * v.adjoint();
        }
        let s = Relation::from_operator(&f, DEFAULT_TOL).expect("operator");
        let sum = t.add(&s).expect("same dims");
        let fred = sum.fredholm();
        let ok = fred.closed_range && fred.beta_finite().is_some();
        if !ok {
            ctx.fail_relations(trial, "T + finite-rank S left Phi_-".into(), &[&t, &s]);
        }
    }
    ctx.report("prop_2_6a_finite_rank_phi_minus", trials)
}

fn suite_prop_3_2(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(1..=8);
        let profile = PROFILES[trial as usize % PROFILES.len()];
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        let lambda = random_complex(&mut rng);
        let a = t.shift(lambda).expect("square");
        let ap = a.conjugate();
        let (al, be, _) = relation_alpha_beta_kappa(&a);
        let (al_c, be_c, _) = relation_alpha_beta_kappa(&ap);
        let pa = a.parts();
        let domain_defect = a.dim_x() - pa.domain.dim();
        let mv_conj = ap.parts().mv.dim();
        if al_c != be || be_c != al || mv_conj != domain_defect {
            ctx.fail_relations(
                trial,
                format!(
                    "conjugate duality broke: alpha' {al_c} vs beta {be}, beta' {be_c} vs alpha {al}, \
                     dim T'(0) {mv_conj} vs codim D(T) {domain_defect}"
                ),
                &[&t],
            );
        }
    }
    ctx.report("prop_3_2_conjugate_duality", trials)
}

fn suite_prop_3_4(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(2..=8);
        let a = random_matrix(&mut rng, dims, dims);
        let t = Relation::from_operator(&a, DEFAULT_TOL).expect("operator");
        // Operators have kappa(lambda - T) = 0 everywhere; pick an eigenvalue.
        let eigs = crate::la::eigenvalues(&a).expect("eigen");
        let lambda = eigs[rng.gen_range(0..eigs.len())];
        let k = match weyl_correction(&t, lambda) {
            Ok(k) => k,
            Err(e) => {
                ctx.fail_relations(trial, format!("construction failed: {e}"), &[&t]);
                continue;
            }
        };
        let shifted = t.shift(lambda).expect("square");
        let sp = shifted.parts();
        let kp = k.parts();
        let alpha = sp.kernel.dim();
        let rank_k = kp.range.dim();
        let sum = t.add(&k).expect("same dims");
        let in_res = classify_point(&sum, lambda).map(|c| c.in_resolvent).unwrap_or(false);
        // Proof steps: N(lambda-T) meets N(K) trivially, R(lambda-T) meets
        // R(K) trivially.
        let null_meet = sp.kernel.intersect(&kp.kernel).expect("ambient").dim();
        let range_meet = sp.range.intersect(&kp.range).expect("ambient").dim();
        if rank_k != alpha || !in_res || null_meet != 0 || range_meet != 0 {
            ctx.fail_relations(
                trial,
                format!(
                    "rank K = {rank_k} vs alpha = {alpha}, lambda in rho(T+K): {in_res}, \
                     N-meet {null_meet}, R-meet {range_meet}"
                ),
                &[&t, &k],
            );
        }
    }
    ctx.report("prop_3_4_weyl_correction", trials)
}

fn suite_prop_3_5(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    let mut outer_only = 0usize;
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(2..=6);
        let profile = if trial % 2 == 0 { Profile::Operator } else { Profile::LowRankKernel };
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        let s = match gen_small_perturbation(&t, trial_seed(seed, trial ^ 0xabcd)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        // The paper's nu is existential; this concrete radius is a choice.
        let nu = 0.5 * t.min_modulus().min(1.0) / s.rel_norm().max(1.0);
        let alphas_on = |radius: f64| -> Vec<usize> {
            (0..64)
                .map(|i| {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
                    let lam = Complex64::from_polar(radius, theta);
                    let scaled = scale_relation(&s, lam).expect("scale");
                    t.add(&scaled).expect("same dims").parts().kernel.dim()
                })
                .collect()
        };
        let outer = alphas_on(nu / 2.0);
        let inner = alphas_on(nu / 4.0);
        let inner_const = inner.windows(2).all(|w| w[0] == w[1]);
        let all_const = inner_const
            && outer.windows(2).all(|w| w[0] == w[1])
            && outer[0] == inner[0];
        if !inner_const {
            ctx.fail_relations(
                trial,
                format!("alpha(T + lambda S) not constant on |lambda| = nu/4: {inner:?}"),
                &[&t, &s],
            );
        } else if !all_const {
            outer_only += 1;
        }
    }
    if outer_only > 0 {
        ctx.notes.push(format!(
            "constancy held only on the smaller circle in {outer_only} trials \
             (the paper gives no effective bound for nu)"
        ));
    }
    ctx.report("prop_3_5_annulus_constancy", trials)
}

fn random_polynomial_symbol(rng: &mut ChaCha8Rng) -> LaurentSymbol {
    loop {
        let mut terms: Vec<(i64, f64, f64)> = Vec::new();
        for k in -2..=2 {
            if rng.gen_bool(0.6) {
                let c = random_complex(rng);
                terms.push((k, c.re, c.im));
            }
        }
        if let Ok(sym) = LaurentSymbol::from_terms(&terms) {
            let (lo, hi) = sym.support();
            if lo != hi || lo != 0 {
                return sym;
            }
        }
    }
}

fn random_banded_model(rng: &mut ChaCha8Rng, max_rank: usize) -> BandedModel {
    let symbol = random_polynomial_symbol(rng);
    let space = if rng.gen_bool(0.5) { SpaceKind::Laurent } else { SpaceKind::Toeplitz };
    let rank = rng.gen_range(0..=max_rank);
    let perturbation = (0..rank)
        .map(|_| {
            let mk = |rng: &mut ChaCha8Rng| {
                let terms: Vec<(i64, f64, f64)> = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let c = random_complex(rng);
                        (rng.gen_range(0..6), c.re, c.im)
                    })
                    .collect();
                SparseVec::from_terms(&terms)
            };
            (mk(rng), mk(rng))
        })
        .collect();
    BandedModel::new(space, symbol)
        .expect("valid symbol")
        .with_perturbation(perturbation)
        .expect("nonnegative indices")
}

fn suite_grid_property(
    name: &str,
    seed: u64,
    trials: usize,
    check: impl Fn(&crate::banded::RegionGrid) -> bool,
    detail: &str,
) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    let bounds = Rect::new(-2.5, 2.5, -2.5, 2.5).expect("valid rect");
    let opts = RegionOptions {
        detect_eigenvalues: false,
        trunc_sizes: vec![48, 72],
        curve_samples: 2048,
    };
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let model = random_banded_model(&mut rng, 2);
        match crate::banded::essential_region(&model, &bounds, (32, 32), &opts) {
            Ok(grid) => {
                if !check(&grid) {
                    ctx.fail_models(trial, detail.into(), &[&model]);
                }
            }
            Err(e) => ctx.fail_models(trial, format!("grid failed: {e}"), &[&model]),
        }
    }
    ctx.report(name, trials)
}

fn suite_prop_3_9(seed: u64, trials: usize) -> SuiteReport {
    suite_grid_property(
        "prop_3_9_inclusion_chain",
        seed,
        trials,
        |g| g.chain_holds(),
        "per-point inclusion chain e1 <= e2 <= e3 <= e4 <= e5 <= sigma violated",
    )
}

fn suite_prop_3_10(seed: u64, trials: usize) -> SuiteReport {
    suite_grid_property(
        "prop_3_10_component_winding",
        seed,
        trials,
        |g| g.winding_constant_per_component(),
        "winding not constant on a flood-fill component",
    )
}

/// The five fixed symbols used by the banded Weyl-invariance suite.
pub fn weyl_suite_symbols() -> Vec<(LaurentSymbol, SpaceKind)> {
    vec![
        (LaurentSymbol::from_terms(&[(1, 1.0, 0.0)]).unwrap(), SpaceKind::Toeplitz),
        (
            LaurentSymbol::from_terms(&[(-1, 0.5, 0.0), (1, 1.0, 0.0)]).unwrap(),
            SpaceKind::Laurent,
        ),
        (
            LaurentSymbol::from_terms(&[(-1, 0.5, 0.0), (0, -1.5, 0.0), (2, 1.0, 0.0)]).unwrap(),
            SpaceKind::Toeplitz,
        ),
        (
            LaurentSymbol::from_terms(&[(-2, 1.0, 0.0), (0, 2.0, 0.0), (1, 1.0, 0.0)]).unwrap(),
            SpaceKind::Laurent,
        ),
        (
            LaurentSymbol::from_terms(&[(-1, 0.0, 0.5), (3, 0.3, 0.0)]).unwrap(),
            SpaceKind::Toeplitz,
        ),
    ]
}

fn e1_to_e4_columns(grid: &crate::banded::RegionGrid) -> Vec<(bool, bool, bool, bool)> {
    grid.points
        .iter()
        .map(|p| (p.e1, p.e2, p.e3, p.e4))
        .collect()
}

fn suite_thm_4_4(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    let symbols = weyl_suite_symbols();
    let bounds = Rect::new(-2.5, 2.5, -2.5, 2.5).expect("valid rect");
    let opts = RegionOptions {
        detect_eigenvalues: false,
        trunc_sizes: vec![48, 72],
        curve_samples: 2048,
    };
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let (symbol, space) = symbols[trial as usize % symbols.len()].clone();
        let base = BandedModel::new(space, symbol).expect("valid symbol");
        let rank = rng.gen_range(1..=3);
        let perturbation = (0..rank)
            .map(|_| {
                let mk = |rng: &mut ChaCha8Rng| {
                    let c = random_complex(rng);
                    let d = random_complex(rng);
                    SparseVec::from_terms(&[
                        (rng.gen_range(0..6), c.re, c.im),
                        (rng.gen_range(0..6), d.re, d.im),
                    ])
                };
                (mk(&mut rng), mk(&mut rng))
            })
            .collect();
        let perturbed = base.clone().with_perturbation(perturbation).expect("nonnegative");
        let g0 = crate::banded::essential_region(&base, &bounds, (32, 32), &opts);
        let g1 = crate::banded::essential_region(&perturbed, &bounds, (32, 32), &opts);
        match (g0, g1) {
            (Ok(g0), Ok(g1)) => {
                if e1_to_e4_columns(&g0) != e1_to_e4_columns(&g1) {
                    ctx.fail_models(
                        trial,
                        "e1..e4 grid columns changed under a finite-rank perturbation".into(),
                        &[&base, &perturbed],
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                ctx.fail_models(trial, format!("grid failed: {e}"), &[&base, &perturbed])
            }
        }
    }
    ctx.report("thm_4_4_weyl_invariance_banded", trials)
}

fn suite_prop_5_1(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(2..=6);
        let profile = PROFILES[trial as usize % PROFILES.len()];
        let t = gen_relation(trial_seed(seed, trial), dims, profile).expect("generator");
        // S with D(S) = Y: operator graph plus an optional multivalued line.
        let b = random_matrix(&mut rng, dims, dims);
        let s = if rng.gen_bool(0.4) {
            let mut gens: Vec<DVector<Complex64>> = (0..dims)
                .map(|j| {
                    let mut g = DVector::zeros(2 * dims);
                    g[j] = Complex64::new(1.0, 0.0);
                    for i in 0..dims {
                        g[dims + i] = b[(i, j)];
                    }
                    g
                })
                .collect();
            let mut mv = DVector::zeros(2 * dims);
            let y = random_vector(&mut rng, dims);
            for i in 0..dims {
                mv[dims + i] = y[i];
            }
            gens.push(mv);
            Relation::from_graph_generators(dims, dims, &gens, DEFAULT_TOL).expect("graph")
        } else {
            let mut m = b.clone();
            if rng.gen_bool(0.5) {
                // Singular S exercises dim(T(0) cap N(S)) > 0 paths.
                let v = random_vector(&mut rng, dims).normalize();
                m -= (m.clone() * &v) * v.adjoint();
            }
            Relation::from_operator(&m, DEFAULT_TOL).expect("operator")
        };
        let st = s.compose(&t).expect("same middle dim");
        let (_, _, k_st) = relation_alpha_beta_kappa(&st);
        let (_, _, k_t) = relation_alpha_beta_kappa(&t);
        let (_, _, k_s) = relation_alpha_beta_kappa(&s);
        let meet = t
            .parts()
            .mv
            .intersect(&s.parts().kernel)
            .expect("same ambient")
            .dim() as i64;
        if k_st != k_t + k_s - meet {
            ctx.fail_relations(
                trial,
                format!("kappa(ST) = {k_st}, kappa(T)+kappa(S)-dim(T(0) cap N(S)) = {}", k_t + k_s - meet),
                &[&t, &s],
            );
        }
    }
    ctx.report("prop_5_1_index_theorem", trials)
}

fn pick_resolvent_point(t: &Relation, rng: &mut ChaCha8Rng) -> Option<Complex64> {
    for _ in 0..64 {
        let mu = random_complex(rng) * 2.0;
        if classify_point(t, mu).map(|c| c.in_resolvent).unwrap_or(false) {
            return Some(mu);
        }
    }
    None
}

fn suite_thm_5_2(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(2..=6);
        let t = gen_relation(trial_seed(seed, trial), dims, Profile::Operator).expect("generator");
        let Some(mu) = pick_resolvent_point(&t, &mut rng) else {
            ctx.fail_relations(trial, "no resolvent point found".into(), &[&t]);
            continue;
        };
        // Point mapping: spectra correspond under lambda -> (mu - lambda)^{-1}.
        let spec_t = match spectrum(&t) {
            Ok(Spectrum::Points(p)) => p,
            _ => {
                ctx.fail_relations(trial, "operator spectrum not a point set".into(), &[&t]);
                continue;
            }
        };
        let t_mu = mobius_resolvent(&t, mu).expect("mu in resolvent");
        let spec_mu = match spectrum(&t_mu) {
            Ok(Spectrum::Points(p)) => p,
            _ => Vec::new(),
        };
        let mut mapped: Vec<Complex64> = spec_t.iter().map(|&l| (mu - l).powi(-1)).collect();
        let mut ok = mapped.len() == spec_mu.len();
        if ok {
            let mut pool = spec_mu.clone();
            for m in mapped.drain(..) {
                match pool
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - m).norm().total_cmp(&(b.1 - m).norm()))
                {
                    Some((idx, v)) if (v - m).norm() < 1e-8 * (1.0 + m.norm()) => {
                        pool.swap_remove(idx);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        // Factorization lambda - T = S(mu - T) at a random lambda.
        let lambda = random_complex(&mut rng) * 2.0;
        let (holds, residual) = if (lambda - mu).norm() < 1e-6 {
            (true, 0.0)
        } else {
            mobius_factor_check(&t, mu, lambda).unwrap_or((false, f64::INFINITY))
        };
        ctx.residual(residual);
        if !ok || !holds {
            ctx.fail_relations(
                trial,
                format!("point mapping ok: {ok}, factorization residual {residual:.3e}"),
                &[&t],
            );
        }
    }
    ctx.report("thm_5_2_mobius_factorization", trials)
}

fn suite_thm_5_3(seed: u64, trials: usize) -> SuiteReport {
    let mut ctx = SuiteCtx::new(seed);
    for trial in 0..trials as u64 {
        let mut rng = rng_for(seed, trial);
        let dims = rng.gen_range(2..=8);
        let a = random_matrix(&mut rng, dims, dims);
        let rank = rng.gen_range(1..=2.min(dims));
        let mut f = DMatrix::zeros(dims, dims);
        for _ in 0..rank {
            let u = random_vector(&mut rng, dims);
            let v = random_vector(&mut rng, dims);
            f += u * v.adjoint();
        }
        let t = Relation::from_operator(&a, DEFAULT_TOL).expect("operator");
        let s = Relation::from_operator(&(&a + &f), DEFAULT_TOL).expect("operator");
        let Some(mu) = (0..64).find_map(|_| {
            let mu = random_complex(&mut rng) * 2.0;
            let ok = classify_point(&t, mu).map(|c| c.in_resolvent).unwrap_or(false)
                && classify_point(&s, mu).map(|c| c.in_resolvent).unwrap_or(false);
            ok.then_some(mu)
        }) else {
            ctx.fail_relations(trial, "no common resolvent point".into(), &[&t, &s]);
            continue;
        };
        let t_mu = mobius_resolvent(&t, mu).expect("resolvent");
        let s_mu = mobius_resolvent(&s, mu).expect("resolvent");
        let diff = t_mu.to_operator_matrix().expect("operator")
            - s_mu.to_operator_matrix().expect("operator");
        let sv = crate::la::singular_values(&diff).expect("svd");
        let smax = sv.first().copied().unwrap_or(0.0);
        let rank_diff = sv.iter().filter(|&&x| x > 1e-10 * smax.max(1.0)).count();
        if rank_diff > rank {
            ctx.fail_relations(
                trial,
                format!("resolvent difference has rank {rank_diff} > rank(F) = {rank}"),
                &[&t, &s],
            );
        }
    }
    ctx.report("thm_5_3_resolvent_difference", trials)
}

/// All suite names accepted by `run_suite`, in execution order of "all".
pub const SUITE_NAMES: [&str; 13] = [
    "graph_dim_identities",
    "prop_2_3_perturbation_bounds",
    "prop_2_5_index_stability",
    "prop_2_6a_finite_rank_phi_minus",
    "prop_3_2_conjugate_duality",
    "prop_3_4_weyl_correction",
    "prop_3_5_annulus_constancy",
    "prop_3_9_inclusion_chain",
    "prop_3_10_component_winding",
    "thm_4_4_weyl_invariance_banded",
    "prop_5_1_index_theorem",
    "thm_5_2_mobius_factorization",
    "thm_5_3_resolvent_difference",
];

/// Runs the named suite. "all" runs every suite and aggregates failures.
pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<SuiteReport> {
    let report = match name {
        "graph_dim_identities" => suite_graph_dim_identities(seed, trials),
        "prop_2_3_perturbation_bounds" => suite_prop_2_3(seed, trials),
        "prop_2_5_index_stability" => suite_prop_2_5(seed, trials),
        "prop_2_6a_finite_rank_phi_minus" => suite_prop_2_6a(seed, trials),
        "prop_3_2_conjugate_duality" => suite_prop_3_2(seed, trials),
        "prop_3_4_weyl_correction" => suite_prop_3_4(seed, trials),
        "prop_3_5_annulus_constancy" => suite_prop_3_5(seed, trials),
        "prop_3_9_inclusion_chain" => suite_prop_3_9(seed, trials),
        "prop_3_10_component_winding" => suite_prop_3_10(seed, trials),
        "thm_4_4_weyl_invariance_banded" => suite_thm_4_4(seed, trials),
        "prop_5_1_index_theorem" => suite_prop_5_1(seed, trials),
        "thm_5_2_mobius_factorization" => suite_thm_5_2(seed, trials),
        "thm_5_3_resolvent_difference" => suite_thm_5_3(seed, trials),
        "all" => {
            let mut agg = SuiteReport {
                suite_name: "all".into(),
                seed,
                trials,
                failures: Vec::new(),
                max_residual: 0.0,
                notes: Vec::new(),
            };
            for sub in SUITE_NAMES {
                let mut r = run_suite(sub, seed, trials)?;
                agg.notes.push(format!(
                    "{sub}: {} failures, max residual {:.3e}",
                    r.failures.len(),
                    r.max_residual
                ));
                for f in &mut r.failures {
                    f.detail = format!("[{sub}] {}", f.detail);
                }
                agg.failures.append(&mut r.failures);
                agg.max_residual = agg.max_residual.max(r.max_residual);
                agg.notes.extend(r.notes.into_iter().map(|n| format!("{sub}: {n}")));
            }
            agg
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_relation_is_deterministic() {
        let a = gen_relation(1, 3, Profile::Operator).unwrap();
        let b = gen_relation(1, 3, Profile::Operator).unwrap();
        assert!((a.graph().projector() - b.graph().projector()).norm() == 0.0);
    }

    #[test]
    fn gen_relation_profiles_meet_contracts() {
        for seed in 0..10 {
            let mv = gen_relation(seed, 4, Profile::WithMvPart).unwrap();
            assert!(mv.parts().mv.dim() >= 1);
            let lk = gen_relation(seed, 4, Profile::LowRankKernel).unwrap();
            assert!(lk.parts().kernel.dim() >= 1);
        }
    }

    #[test]
    fn gen_relation_rejects_bad_dims() {
        assert!(gen_relation(0, 0, Profile::Operator).is_err());
        assert!(gen_relation(0, 13, Profile::Operator).is_err());
    }

    #[test]
    fn small_perturbation_satisfies_hypotheses() {
        for seed in 0..20 {
            let t = gen_relation(seed, 5, PROFILES[seed as usize % 4]).unwrap();
            let s = gen_small_perturbation(&t, seed + 100).unwrap();
            assert!(s.parts().domain.dim() == 5, "full domain");
            let mv_ok = s.parts().mv.residual_in(&t.parts().mv).unwrap() < 1e-9;
            assert!(mv_ok, "S(0) not inside T(0)");
            assert!(s.rel_norm() <= 0.9 * t.min_modulus().min(1.0) + 1e-12);
        }
    }

    #[test]
    fn unknown_suite_is_error() {
        assert!(matches!(run_suite("nope", 1, 1), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("prop_2_5_index_stability", 42, 25).unwrap();
        let b = run_suite("prop_2_5_index_stability", 42, 25).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn exact_integer_suites_pass() {
        for name in [
            "graph_dim_identities",
            "prop_2_3_perturbation_bounds",
            "prop_2_5_index_stability",
            "prop_2_6a_finite_rank_phi_minus",
            "prop_3_2_conjugate_duality",
            "prop_5_1_index_theorem",
        ] {
            let r = run_suite(name, 7, 40).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures.first().map(|f| &f.detail));
        }
    }

    #[test]
    fn weyl_and_mobius_suites_pass() {
        for name in [
            "prop_3_4_weyl_correction",
            "thm_5_2_mobius_factorization",
            "thm_5_3_resolvent_difference",
        ] {
            let r = run_suite(name, 11, 30).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures.first().map(|f| &f.detail));
        }
        let r = run_suite("thm_5_2_mobius_factorization", 11, 30).unwrap();
        assert!(r.max_residual < 1e-8, "residual {}", r.max_residual);
    }

    #[test]
    fn annulus_suite_passes_inner_circle() {
        let r = run_suite("prop_3_5_annulus_constancy", 13, 20).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first().map(|f| &f.detail));
    }

    #[test]
    fn banded_grid_suites_pass() {
        for name in ["prop_3_9_inclusion_chain", "prop_3_10_component_winding"] {
            let r = run_suite(name, 5, 4).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures.first().map(|f| &f.detail));
        }
    }

    #[test]
    fn weyl_invariance_banded_suite_passes() {
        let r = run_suite("thm_4_4_weyl_invariance_banded", 3, 5).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first().map(|f| &f.detail));
    }

    #[test]
    fn failures_serialize_replayable_relations() {
        let t = gen_relation(9, 4, Profile::WithMvPart).unwrap();
        let doc = RelationDoc::from_relation(&t);
        let text = serde_json::to_string(&doc).unwrap();
        let back = crate::schema::relation_from_json(&text, DEFAULT_TOL).unwrap();
        assert!((back.graph().projector() - t.graph().projector()).norm() < 1e-10);
    }
}
