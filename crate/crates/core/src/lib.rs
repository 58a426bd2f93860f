//! Periodically driven quantum systems H = V(λ(t)) f(ωt + θ): exact
//! propagation, the adiabatic effective propagator of the transformed frame,
//! and the non-Abelian geometric phases acquired when λ(t) traverses a loop.

pub mod cli;
pub mod driving;
pub mod error;
pub mod protocols;
pub mod evolution;
pub mod smallmat;
pub mod spin;
pub mod tolerances;
pub mod transform;

pub use error::{Error, Result};
