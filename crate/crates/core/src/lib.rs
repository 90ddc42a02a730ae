//! Characteristic time operators for discrete semibounded Hamiltonians.
//!
//! From a spectrum `E_1 < E_2 < ...` with constant degeneracy `M`, this crate
//! builds the time operator with matrix elements `i*hbar/(E_s - E_{s'})`
//! (distinct levels, and distinct degeneracy labels when `M >= 2`), verifies
//! the canonical commutation relation exactly on the difference-vector
//! subspace, and runs the spectral, tail-bound, and kernel diagnostics that
//! back the operator's self-adjointness and compactness properties.
//!
//! Everything numerical can run in two arithmetic modes: exact Gaussian
//! rationals (identities asserted with `==`) or `f64`.
//!
//! ```
//! use chronolab_core::ccr::{ccr_residual, dc_generators};
//! use chronolab_core::scalar::{ratio, BigRational};
//! use chronolab_core::spectra::make_harmonic;
//! use num::traits::One;
//!
//! let spec = make_harmonic(BigRational::one(), 1, BigRational::one())?;
//! for generator in dc_generators::<BigRational>(6, 1)? {
//!     let res = ccr_residual(&spec, generator.expansion())?;
//!     assert!(res.exact_zero); // (TH - HT)phi = i*hbar*phi, to the last bit
//! }
//! # Ok::<(), chronolab_core::Error>(())
//! ```

pub mod ccr;
pub mod conditions;
pub mod config;
pub mod error;
pub mod kernel;
pub mod mm;
pub mod quad;
pub mod sa;
pub mod scalar;
pub mod spectra;
pub mod timeop;

pub use error::{Error, Result};
pub use scalar::{parse_rational, Arithmetic, Scalar};
pub use spectra::{BasisIndex, Spectrum, SpectrumKind};
