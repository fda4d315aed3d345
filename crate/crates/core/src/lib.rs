//! Forward and inverse spectral problems for the Dirac-type system
//! `B y′(x) + Q(x) y(x−a) = λ y(x)` on `(0, π)` with a constant delay
//! `a ∈ [π/3, 2π/5)`, `B = [[0, 1], [−1, 0]]` and
//! `Q = [[q, p], [p, −q]]` vanishing on `(0, a)`.
//!
//! * [`forward`] maps a potential pair to the characteristic functions
//!   `Δ₁, Δ₂` of the problems `y₁(0) = 0, y_j(π) = 0`.
//! * [`eigensolver`] locates and certifies their zeros.
//! * [`inverse`] reconstructs `(q, p)` on `[a, π]` from both spectra and the
//!   potentials on the window `(3a/2, π/2+a/4)`.
//! * [`cli`] drives experiments and reads/writes the CSV and JSON formats.

pub mod cli;
pub mod domain;
pub mod eigensolver;
pub mod error;
pub mod forward;
pub mod grid;
pub mod inverse;
pub mod potentials;

pub use domain::{
    lattice_point, region_layout, DelayParameter, Interval, PotentialPair, RegionLayout,
    SpectralData, Spectrum,
};
pub use error::{Error, Result};
pub use grid::{PiecewiseFunction, SampledFunction, UniformGrid};
pub use num_complex::Complex64;
pub use potentials::TestPotential;
