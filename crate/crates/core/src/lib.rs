//! Open-system dynamics of a single bosonic mode in Kerr and cubic nonlinear
//! media, optical tomograms of the evolving state, and two tomogram-based
//! nonclassicality quantifiers: the homodyne nonclassical area and the sum of
//! tomographic entropies in conjugate quadratures.
//!
//! Units: `ħ = 1`; times are in the inverse units of the susceptibility `χ`.

pub mod error;
pub mod evolution;
pub mod fock;
pub mod numerics;
pub mod quantifiers;
pub mod tomography;

pub use error::{Error, Result};
pub use evolution::{
    AmplitudeSolver, DampingChannel, DampingSpec, MediumKind, MediumSpec, Propagator, TimeGrid,
};
pub use fock::{DensityMatrix, FockVector, InitialStateSpec, LadderExpectations, StateKind};
pub use quantifiers::{AreaPath, EntropyPair, QuantifierRecord};
pub use tomography::{QuadratureGrid, Tomogram, Tomographer, XAxis};

pub use num_complex::Complex64;
