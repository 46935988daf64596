//! Capacity bounds for the generalized amplitude damping channel (GADC).
//!
//! The library is organised bottom-up: [`mathcore`] and [`channels`] hold
//! generic finite-dimensional machinery, [`gadc`] the channel family itself,
//! [`sdp`] a small dense interior-point solver with the semidefinite programs
//! used by the bounds, and the three `bounds_*` modules the capacity bounds.

pub mod bounds_classical;
pub mod bounds_quantum;
pub mod bounds_twoway;
pub mod channels;
pub mod error;
pub mod gadc;
pub mod mathcore;
pub mod optim;
pub mod sdp;
