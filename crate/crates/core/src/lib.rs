//! Dirac particle dynamics as a unitary path summation on a spacetime
//! lattice, cross-validated three ways: exhaustive path enumeration,
//! momentum-space transfer operators, and real-space spinor evolution.
//!
//! The crate also carries the time-scale analysis built on the relation
//! x = sin(x zeta) and its small-x Schwarzschild rearrangement.

pub mod analysis;
pub mod emit;
pub mod error;
pub mod fftutil;
pub mod field;
pub mod model;
pub mod modes;
pub mod path;
pub mod pauli;
pub mod spin;

pub use error::{Error, Result};
pub use model::{
    shifted_wavevector, FourPotential, LatticeSpec, ModelParams, ShiftedWaveVector, WaveVector4,
};
pub use modes::{
    collide_op, dirac_hamiltonian, eigenphase, generator_phase_residual, generator_residual,
    generator_residual_with, stream_op, transfer_op, zeta_factor, DispersionConvention,
    DispersionPoint, ModeOperator, OperatorKind,
};
pub use path::{
    bend_histogram, kernel_enumeration, kernel_momentum, phi_count, Displacement, PathEnsemble,
};
pub use spin::{
    contraction_identity_check, qubit_encode, BendConvention, BendCount, Direction, Spin4,
    SpinChain,
};
