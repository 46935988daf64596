//! Semidefinite programs.
//!
//! [`solver`] is a dense primal-dual interior-point method for linear matrix
//! inequalities; [`model`] builds programs over Hermitian matrix variables.
//! Complex data is handled by the real embedding
//! `H ↦ [[Re H, −Im H], [Im H, Re H]]`; when every coefficient is real the
//! variables are restricted to real symmetric matrices instead, which loses
//! nothing because the complex conjugate of a feasible point is feasible with
//! the same objective.
//!
//! # Diamond norm
//!
//! For a Hermiticity-preserving difference Δ = N₁ − N₂ with unnormalized
//! Choi matrix J_Δ on A⊗B,
//!
//! ```text
//! ½‖Δ‖⋄ = min t  s.t.  Z ⪰ 0,  Z ⪰ J_Δ,  t·I_A − Tr_B Z ⪰ 0.
//! ```
//!
//! The ε-parameters (approximate degradability, anti-degradability,
//! entanglement breaking) add the Choi matrix of the simulating map as a
//! further variable with the channel constraints J ⪰ 0, Tr_out J = I, and
//! write J_Δ as an affine function of it.

pub mod model;
pub mod programs;
pub mod solver;
pub mod witness;

pub use model::{solve, solve_optimal, Affine, ConeProgram, ConeSolution, Scalar, Sense, Var};
pub use programs::*;
pub use solver::{SolverOptions, Status};
pub use witness::{
    lambda_minus, rmax_dual_parameter, verify_cbeta_witness, verify_emax_witness,
    CbetaWitnessReport, EmaxWitnessReport,
};
