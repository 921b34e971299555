//! Simulation and verification toolkit for level-2 rough differential
//! equations.
//!
//! Driving signals of unbounded variation (fast deterministic oscillations,
//! Wiener interpolations) are lifted to level-2 rough paths: an increment
//! together with its matrix of iterated integrals. Systems driven by such
//! paths pick up a second-level correction term; as the oscillation index
//! grows the correction converges to a constant-rate Lévy-area contribution
//! and the driven system converges to a deterministic limit ODE. This crate
//! builds the lifts, integrates the driven and limit systems, and certifies
//! asymptotic stability of the limit on radial grids with Lyapunov
//! candidates.
//!
//! Module map:
//! - [`tensor`]: the truncated tensor algebra T²(ℝⁿ) and the Chen product.
//! - [`paths`]: sampled paths, piecewise-linear lifts, p-variation, and the
//!   grid-restricted rough-path distance.
//! - [`signals`]: driving-signal generators and their limit rate structure.
//! - [`dynamics`]: vector-field systems and integrators (rough Euler, RK4,
//!   Euler-Maruyama, Stratonovich Heun).
//! - [`lyapunov`]: Lie derivatives, the diffusion generator, and stability
//!   verdicts on radial grids.
//! - [`systems`]: built-in case-study systems.
//! - [`rng`]: seeded splitmix64 streams and Box-Muller Gaussians.

pub mod dynamics;
pub mod lyapunov;
pub mod paths;
pub mod rng;
pub mod signals;
pub mod systems;
pub mod tensor;
