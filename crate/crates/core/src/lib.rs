//! Numerical models for the thermodynamic cost of recording a bit: a
//! δ-barrier Szilard box, a spin-boson partition inserted into a bath, a
//! spin–oscillator switch with pointer states, and the Landauer bound with its
//! product-state assumption made explicit.
//!
//! Natural units ħ = k_B = 1 throughout unless a function takes [`Units`].

pub mod bath;
pub mod boxmodel;
pub mod error;
pub mod landauer;
pub mod linalg;
pub mod numerics;
pub mod partition;
pub mod switch;
pub mod units;

pub use bath::{BathSpec, ModeRow, ModeSet};
pub use boxmodel::{Barrier, Level, LevelTable, Localization, Parity, WellSpec};
pub use error::{Error, Result};
pub use landauer::{ErgodicDecomposition, JointState, LandauerReport, QuantumSystem};
pub use linalg::CMatrix;
pub use partition::{Branch, CoherentAmplitudes, RampProtocol, WorkLedger};
pub use switch::{CutoffPolicy, DensityMatrix, SwitchParams};
pub use units::Units;

pub use num_complex::Complex64;
