//! Grid classification of the complex plane into the five essential
//! spectra, with flood-fill component labels and CSV/JSON emission.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

use super::model::{BandedModel, SpaceKind};
use super::symbol::winding_from_samples;
use super::Rect;

/// Per-point classification record.
#[derive(Clone, Copy, Debug)]
pub struct GridPoint {
    pub lambda: Complex64,
    pub on_curve: bool,
    /// Winding of a - lambda; 0 at on-curve points (where it is undefined).
    pub winding: i64,
    /// Flood-fill component of the off-curve set; -1 at on-curve points.
    pub component_id: i64,
    pub sigma: bool,
    pub e1: bool,
    pub e2: bool,
    pub e2prime: bool,
    pub e3: bool,
    pub e4: bool,
    pub e5: bool,
}

/// One off-curve component of the grid.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentInfo {
    pub id: i64,
    pub winding: i64,
    pub meets_resolvent: bool,
}

/// Classified rectangular grid; points are stored row-major, rows ordered by
/// increasing imaginary part.
#[derive(Clone, Debug)]
pub struct RegionGrid {
    pub bounds: Rect,
    pub nx: usize,
    pub ny: usize,
    pub points: Vec<GridPoint>,
    pub components: Vec<ComponentInfo>,
    pub eigenvalues: Vec<Complex64>,
}

/// Tuning knobs for `essential_region`.
#[derive(Clone, Debug)]
pub struct RegionOptions {
    /// Run truncation eigenvalue detection for the sigma column and the
    /// meets_resolvent flags. e1..e4 never depend on it.
    pub detect_eigenvalues: bool,
    pub trunc_sizes: Vec<usize>,
    /// Number of symbol curve samples used per point.
    pub curve_samples: usize,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            detect_eigenvalues: true,
            trunc_sizes: vec![200, 400, 800],
            curve_samples: 4096,
        }
    }
}

/// Classify every grid point of `bounds` at the given resolution.
///
/// The on-curve band is widened to resolve the (measure-zero) curve at the
/// grid scale: tolerance = max(symbol tol, 0.75 * cell diagonal).
pub fn essential_region(
    model: &BandedModel,
    bounds: &Rect,
    resolution: (usize, usize),
    options: &RegionOptions,
) -> Result<RegionGrid> {
    let (nx, ny) = resolution;
    if nx < 32 || ny < 32 {
        return Err(Error::InvalidInput("resolution must be at least 32x32".into()));
    }
    let dx = (bounds.re1 - bounds.re0) / (nx - 1) as f64;
    let dy = (bounds.im1 - bounds.im0) / (ny - 1) as f64;
    let band_tol = model
        .symbol
        .curve_tol()
        .max(0.75 * (dx * dx + dy * dy).sqrt());

    let samples = model.symbol.curve_samples(options.curve_samples.max(1024));
    let kappa_correction = model.mv_dim() as i64 - model.restriction_dim() as i64;

    // With kappa_correction != 0 the resolvent set is empty and truncation
    // eigenvalues carry no information; skip detection in that case.
    let eigenvalues = if options.detect_eigenvalues && kappa_correction == 0 {
        model.point_eigenvalues(bounds, &options.trunc_sizes)?
    } else {
        Vec::new()
    };
    let eig_radius = (dx.hypot(dy)) * 0.75;

    // Pass 1: curve distance and winding.
    let mut on_curve = vec![false; nx * ny];
    let mut winding = vec![0i64; nx * ny];
    for iy in 0..ny {
        let im = bounds.im0 + dy * iy as f64;
        for ix in 0..nx {
            let re = bounds.re0 + dx * ix as f64;
            let lambda = Complex64::new(re, im);
            let idx = iy * nx + ix;
            let dist = samples.iter().map(|&s| (s - lambda).norm()).fold(f64::INFINITY, f64::min);
            if dist <= band_tol {
                on_curve[idx] = true;
                continue;
            }
            let w = match winding_from_samples(&samples, lambda) {
                Some(w) => w,
                // Rare: grid point close to the sampled polyline; fall back
                // to the adaptive single-point routine.
                None => model.symbol.winding(lambda, options.curve_samples.max(1024))?,
            };
            winding[idx] = w;
        }
    }

    // Pass 2: flood-fill components of the off-curve set (4-connectivity),
    // labeled in row-major discovery order for determinism.
    let mut component = vec![-1i64; nx * ny];
    let mut comp_winding: Vec<i64> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..nx * ny {
        if on_curve[start] || component[start] >= 0 {
            continue;
        }
        let id = comp_winding.len() as i64;
        comp_winding.push(winding[start]);
        component[start] = id;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            let (iy, ix) = (p / nx, p % nx);
            let mut push = |q: usize| {
                if !on_curve[q] && component[q] < 0 {
                    component[q] = id;
                    queue.push_back(q);
                }
            };
            if ix > 0 {
                push(p - 1);
            }
            if ix + 1 < nx {
                push(p + 1);
            }
            if iy > 0 {
                push(p - nx);
            }
            if iy + 1 < ny {
                push(p + nx);
            }
        }
    }

    // Pass 3: per-component resolvent contact.
    let kappa_of = |idx: usize| match model.space {
        SpaceKind::Laurent => kappa_correction,
        SpaceKind::Toeplitz => -winding[idx] + kappa_correction,
    };
    let near_eig = |lambda: Complex64| {
        eigenvalues.iter().any(|&e| (e - lambda).norm() <= eig_radius)
    };
    let mut meets_resolvent = vec![false; comp_winding.len()];
    for iy in 0..ny {
        let im = bounds.im0 + dy * iy as f64;
        for ix in 0..nx {
            let idx = iy * nx + ix;
            if on_curve[idx] {
                continue;
            }
            let lambda = Complex64::new(bounds.re0 + dx * ix as f64, im);
            if kappa_of(idx) == 0 && !near_eig(lambda) {
                meets_resolvent[component[idx] as usize] = true;
            }
        }
    }

    // Pass 4: assemble flags.
    let mut points = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let im = bounds.im0 + dy * iy as f64;
        for ix in 0..nx {
            let idx = iy * nx + ix;
            let lambda = Complex64::new(bounds.re0 + dx * ix as f64, im);
            let p = if on_curve[idx] {
                GridPoint {
                    lambda,
                    on_curve: true,
                    winding: 0,
                    component_id: -1,
                    sigma: true,
                    e1: true,
                    e2: true,
                    e2prime: true,
                    e3: true,
                    e4: true,
                    e5: true,
                }
            } else {
                let kappa = kappa_of(idx);
                let e4 = kappa != 0;
                let e5 = e4 || !meets_resolvent[component[idx] as usize];
                let sigma = e5 || near_eig(lambda);
                GridPoint {
                    lambda,
                    on_curve: false,
                    winding: winding[idx],
                    component_id: component[idx],
                    sigma,
                    e1: false,
                    e2: false,
                    e2prime: false,
                    e3: false,
                    e4,
                    e5,
                }
            };
            points.push(p);
        }
    }

    let components = comp_winding
        .iter()
        .enumerate()
        .map(|(id, &w)| ComponentInfo {
            id: id as i64,
            winding: w,
            meets_resolvent: meets_resolvent[id],
        })
        .collect();

    Ok(RegionGrid {
        bounds: *bounds,
        nx,
        ny,
        points,
        components,
        eigenvalues,
    })
}

impl RegionGrid {
    /// CSV per the fixed column contract; flags are bit-exact 0/1.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.points.len() * 48);
        out.push_str("re,im,on_curve,winding,component_id,sigma,e1,e2,e2prime,e3,e4,e5\n");
        let b = |f: bool| if f { '1' } else { '0' };
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                p.lambda.re,
                p.lambda.im,
                b(p.on_curve),
                p.winding,
                p.component_id,
                b(p.sigma),
                b(p.e1),
                b(p.e2),
                b(p.e2prime),
                b(p.e3),
                b(p.e4),
                b(p.e5)
            );
        }
        out
    }

    /// Summary JSON: component table (sorted by id) plus detected
    /// eigenvalues.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            bounds: [f64; 4],
            resolution: [usize; 2],
            components: &'a [ComponentInfo],
            eigenvalues: Vec<[f64; 2]>,
        }
        let s = Summary {
            bounds: [self.bounds.re0, self.bounds.re1, self.bounds.im0, self.bounds.im1],
            resolution: [self.nx, self.ny],
            components: &self.components,
            eigenvalues: self.eigenvalues.iter().map(|e| [e.re, e.im]).collect(),
        };
        serde_json::to_string_pretty(&s).expect("serializable")
    }

    /// Per-point inclusion chain sigma_e1 ... sigma_e5 subset of sigma.
    pub fn chain_holds(&self) -> bool {
        self.points.iter().all(|p| {
            (!p.e1 || p.e2)
                && (!p.e2 || p.e3)
                && (!p.e2prime || p.e3)
                && (!p.e3 || p.e4)
                && (!p.e4 || p.e5)
                && (!p.e5 || p.sigma)
        })
    }

    /// Winding constancy per flood-fill component.
    pub fn winding_constant_per_component(&self) -> bool {
        self.points
            .iter()
            .filter(|p| !p.on_curve)
            .all(|p| self.components[p.component_id as usize].winding == p.winding)
    }
}
