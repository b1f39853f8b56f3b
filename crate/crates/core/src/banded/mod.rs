//! Banded Laurent/Toeplitz operator models: the desk-scale setting where
//! the five essential spectra genuinely differ.

pub mod kernel;
pub mod model;
pub mod region;
pub mod symbol;

pub use kernel::{toeplitz_kernel_basis, KernelBasis, KernelGenerator};
pub use model::{BandedModel, SingularSequence, SparseVec, SpaceKind};
pub use region::{essential_region, ComponentInfo, GridPoint, RegionGrid, RegionOptions};
pub use symbol::LaurentSymbol;

/// Rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl Rect {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> crate::Result<Self> {
        if !(re0 < re1 && im0 < im1) {
            return Err(crate::Error::InvalidInput(format!(
                "degenerate bounds [{re0},{re1}]x[{im0},{im1}]"
            )));
        }
        Ok(Rect { re0, re1, im0, im1 })
    }

    pub fn contains(&self, z: num_complex::Complex64) -> bool {
        z.re >= self.re0 && z.re <= self.re1 && z.im >= self.im0 && z.im <= self.im1
    }
}
