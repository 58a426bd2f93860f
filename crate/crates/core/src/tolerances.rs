//! Numerical tolerances shared across the crate.

/// Relative Hermiticity defect accepted by `herm_eig`: ‖A − A†‖_F ≤ tol·‖A‖_F.
pub const HERMITIAN_REL: f64 = 1e-12;

/// Absolute unitarity defect for operators flagged unitary: ‖U†U − I‖_F.
pub const UNITARY_ABS: f64 = 1e-10;

/// State normalization tolerance after a propagation step.
pub const STATE_NORM: f64 = 1e-10;

/// Unitarity defect accepted on a finished propagator.
pub const PROPAGATOR_UNITARITY: f64 = 1e-8;

/// Zero-average tolerance for drive profiles and their primitives.
pub const ZERO_MEAN: f64 = 1e-10;

/// Relative finite-difference step for ∂R/∂λ_μ.
pub const FD_STEP_REL: f64 = 1e-5;

/// Field magnitude (in units of ω/g_F) below which the Bessel-form
/// effective Hamiltonian switches to its weak-driving limit.
pub const SMALL_FIELD: f64 = 1e-8;

/// Default and maximum order of the nested-commutator series for W.
pub const SERIES_ORDER_DEFAULT: usize = 12;
pub const SERIES_ORDER_MAX: usize = 30;
/// Series stops once ‖term‖ ≤ tol·‖sum‖.
pub const SERIES_CONVERGENCE: f64 = 1e-12;

/// Upper bound on ω·Δt for exact propagation.
pub const MAX_PHASE_STEP: f64 = 0.2;

/// Upper bound on g_F f_F |Ḃ| / ω² during ramps.
pub const RAMP_ADIABATIC_GUARD: f64 = 0.2;

/// Default phase-grid size per drive period.
pub const PHASE_GRID_DEFAULT: usize = 256;
/// Smallest tabulated grid accepted.
pub const PHASE_GRID_MIN: usize = 64;

/// Default exact-propagation resolution.
pub const STEPS_PER_PERIOD_DEFAULT: usize = 512;
/// Minimum exact-propagation resolution.
pub const STEPS_PER_PERIOD_MIN: usize = 64;
/// Default slow-time steps per schedule piece for effective propagation.
pub const EFFECTIVE_STEPS_DEFAULT: usize = 256;
