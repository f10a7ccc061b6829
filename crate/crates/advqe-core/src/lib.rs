//! Variational quantum solver for the 1D periodic advection-diffusion equation.
//!
//! The library discretizes the dimensionless advection-diffusion equation
//! `dC/dt + dC/dx = (1/Pe) d2C/dx2` on a periodic grid of `2^N` points and
//! advances it in time two ways:
//!
//! - [`pde`] holds the classical reference path: central-difference operator
//!   assembly, a forward-Euler stepper, and an exact matrix-exponential
//!   propagator used as an independent oracle.
//! - [`vqe`] recasts each Euler step as a linear system whose solution is the
//!   ground state of a positive semidefinite Hamiltonian, and finds that
//!   ground state variationally with a [RealAmplitudes](ansatz) circuit
//!   simulated on an exact statevector backend ([`sim`]). No shots, no noise:
//!   expectation values are computed from the full wavefunction.
//!
//! [`transpile`] lowers the ansatz to the `{X, sqrt(X), RZ, CZ}` basis on a
//! linear qubit topology and counts gates and depth, so runs can be compared
//! against published resource figures for Trotterization, VarQTE and AVQDS.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion
//! `advqe-cli` crate carries configuration files, CSV output and the command
//! line front end.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod ansatz;
pub mod error;
mod fmath;
pub mod linalg;
pub mod optim;
pub mod pde;
pub mod reference;
pub mod sim;
pub mod transpile;
pub mod vqe;

pub use error::Error;
pub use linalg::DenseOperator;
pub use pde::{Field, PdeConfig};
pub use sim::{Circuit, Gate, Statevector};
