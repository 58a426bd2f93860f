//! Time-ordered propagation: the exact driven dynamics, the adiabatic
//! effective propagator generated by W⁽⁰⁾, their assembly with the
//! micromotion into original-frame solutions, and closed-form loop holonomies.
//!
//! Every propagator is a product of midpoint exponentials exp(−iH(t_mid)Δt),
//! second-order accurate and unitary to roundoff. Step grids restart at the
//! breakpoints of the parameter path so that each smooth piece is sampled on
//! its own uniform grid.

use crate::driving::DrivingProfile;
use crate::error::{Error, Result};
use crate::smallmat::{unitary_eigenphases, unitary_exp, Operator, Role, StateVector, C64};
use crate::spin::{SpinSystem, Vec3};
use crate::tolerances;
use crate::transform::{bessel_j0, one_minus_j0, r_operator, TransformedFrame, VOperatorMap};

/// A propagator U(t1, t0) with diagnostics.
#[derive(Debug, Clone)]
pub struct PropagatorResult {
    pub u: Operator,
    pub t0: f64,
    pub t1: f64,
    pub steps_used: usize,
    /// ‖U†U − I‖_F.
    pub unitarity_defect: f64,
    /// Largest |W⁽ⁿ⁾|/ω (n = ±1) seen at piece midpoints, for effective runs.
    pub adiabaticity_max: Option<f64>,
}

impl PropagatorResult {
    fn new(u: Operator, t0: f64, t1: f64, steps_used: usize) -> Self {
        let unitarity_defect = u.unitary_defect();
        Self {
            u: u.with_role(Role::Unitary),
            t0,
            t1,
            steps_used,
            unitarity_defect,
            adiabaticity_max: None,
        }
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        self.u.apply(state)
    }

    /// Γ with U = exp(iΓ), eigenphases taken in (−π, π].
    pub fn geometric_exponent(&self) -> Operator {
        geometric_exponent(&self.u)
    }
}

/// Hermitian Γ with U = exp(iΓ), using the principal branch of each eigenphase.
pub fn geometric_exponent(u: &Operator) -> Operator {
    let (phases, q) = unitary_eigenphases(u);
    let diag: Vec<f64> = phases;
    let d = Operator::real_diagonal(&diag);
    (&(&q * &d) * &q.adjoint()).hermitian_part()
}

/// Split [t0, t1] at the interior breakpoints.
pub(crate) fn pieces(t0: f64, t1: f64, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let eps = 1e-12 * (t1 - t0).abs().max(1.0);
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| b > t0 + eps && b < t1 - eps)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut start = t0;
    for c in cuts {
        out.push((start, c));
        start = c;
    }
    if t1 > start || out.is_empty() {
        out.push((start, t1));
    }
    out
}

/// Product of midpoint exponentials over the pieces; `steps(len)` fixes the
/// step count of each piece. `observe` sees the accumulated propagator after
/// every step.
pub(crate) fn time_ordered(
    dim: usize,
    pieces: &[(f64, f64)],
    steps: impl Fn(f64) -> usize,
    mut generator: impl FnMut(f64) -> Result<Operator>,
    mut observe: impl FnMut(f64, &Operator),
) -> Result<(Operator, usize)> {
    let mut u = Operator::identity(dim);
    let mut total = 0;
    for &(a, b) in pieces {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let n = steps(len).max(1);
        let dt = len / n as f64;
        for k in 0..n {
            let mid = a + (k as f64 + 0.5) * dt;
            let h = generator(mid)?;
            u = &unitary_exp(&h, dt)? * &u;
            observe(a + (k + 1) as f64 * dt, &u);
        }
        total += n;
    }
    Ok((u, total))
}

fn nominal_step(profile: &DrivingProfile, steps_per_period: usize) -> Result<f64> {
    let dt = profile.period() / steps_per_period.max(1) as f64;
    let phase_step = profile.omega() * dt;
    if steps_per_period < tolerances::STEPS_PER_PERIOD_MIN || phase_step >= tolerances::MAX_PHASE_STEP
    {
        return Err(Error::StepGuard {
            phase_step,
            limit: tolerances::MAX_PHASE_STEP,
        });
    }
    Ok(dt)
}

fn steps_for(dt: f64) -> impl Fn(f64) -> usize {
    move |len| ((len / dt) - 1e-9).ceil().max(1.0) as usize
}

fn check_interval(t0: f64, t1: f64) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::InvalidArgument(format!(
            "propagation interval [{t0}, {t1}] is not ordered"
        )));
    }
    Ok(())
}

/// Exact propagator of i∂_t|φ⟩ = V(λ(t)) f(ωt + θ)|φ⟩.
pub fn propagate_exact(
    map: &VOperatorMap<'_>,
    profile: &DrivingProfile,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
) -> Result<PropagatorResult> {
    propagate_exact_observed(map, profile, t0, t1, steps_per_period, |_, _| {})
}

/// As [`propagate_exact`], reporting the propagator after every step.
pub fn propagate_exact_observed(
    map: &VOperatorMap<'_>,
    profile: &DrivingProfile,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
    observe: impl FnMut(f64, &Operator),
) -> Result<PropagatorResult> {
    check_interval(t0, t1)?;
    let dt = nominal_step(profile, steps_per_period)?;
    let parts = pieces(t0, t1, &map.path.breakpoints());
    let (u, n) = time_ordered(
        map.dim(),
        &parts,
        steps_for(dt),
        |t| Ok(map.v_at(t).scale_re(profile.drive(profile.phase(t)))),
        observe,
    )?;
    Ok(PropagatorResult::new(u, t0, t1, n))
}

/// Exact propagator of the transformed-frame equation i∂_t|ψ⟩ = W(ωt + θ, t)|ψ⟩.
pub fn propagate_transformed(
    frame: &TransformedFrame<'_>,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
) -> Result<PropagatorResult> {
    check_interval(t0, t1)?;
    let dt = nominal_step(frame.profile, steps_per_period)?;
    let parts = pieces(t0, t1, &frame.map.path.breakpoints());
    let (u, n) = time_ordered(frame.map.dim(), &parts, steps_for(dt), |t| frame.w_at(t), |_, _| {})?;
    Ok(PropagatorResult::new(u, t0, t1, n))
}

/// Time-ordered exponential of an effective Hamiltonian W⁽⁰⁾(t) over `steps`
/// uniform slow-time steps.
pub fn propagate_effective(
    w0: impl Fn(f64) -> Result<Operator>,
    dim: usize,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<PropagatorResult> {
    check_interval(t0, t1)?;
    if steps < 64 {
        return Err(Error::InvalidArgument(format!(
            "effective propagation needs at least 64 steps, got {steps}"
        )));
    }
    let (u, n) = time_ordered(dim, &[(t0, t1)], |_| steps, w0, |_, _| {})?;
    Ok(PropagatorResult::new(u, t0, t1, n))
}

/// Effective propagator U_eff(0)(t1, t0) of a transformed frame, with
/// W⁽⁰⁾(t) taken as the period average of W and `steps_per_piece` slow steps
/// on every smooth piece of the path.
pub fn propagate_effective_frame(
    frame: &TransformedFrame<'_>,
    t0: f64,
    t1: f64,
    steps_per_piece: usize,
) -> Result<PropagatorResult> {
    check_interval(t0, t1)?;
    if steps_per_piece < 64 {
        return Err(Error::InvalidArgument(format!(
            "effective propagation needs at least 64 steps, got {steps_per_piece}"
        )));
    }
    let parts = pieces(t0, t1, &frame.map.path.breakpoints());
    let (u, n) = time_ordered(
        frame.map.dim(),
        &parts,
        |_| steps_per_piece,
        |t| frame.w0(t),
        |_, _| {},
    )?;
    let mut worst: f64 = 0.0;
    for &(a, b) in &parts {
        worst = worst.max(frame.adiabaticity(0.5 * (a + b), 1)?);
    }
    let mut r = PropagatorResult::new(u, t0, t1, n);
    r.adiabaticity_max = Some(worst);
    Ok(r)
}

/// How the transformed-frame part of a full solution is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Body {
    /// Adiabatic effective propagator, with slow steps per path piece.
    Effective { steps: usize },
    /// Exact transformed-frame propagator.
    Exact { steps_per_period: usize },
}

/// Original-frame propagator e^{−iS(t1)} U_body e^{iS(t0)}.
pub fn full_solution(frame: &TransformedFrame<'_>, t0: f64, t1: f64, body: Body) -> Result<PropagatorResult> {
    let inner = match body {
        Body::Effective { steps } => propagate_effective_frame(frame, t0, t1, steps)?,
        Body::Exact { steps_per_period } => propagate_transformed(frame, t0, t1, steps_per_period)?,
    };
    let profile = frame.profile;
    let r1 = r_operator(profile, &frame.map.v_at(t1), profile.phase(t1))?;
    let r0 = r_operator(profile, &frame.map.v_at(t0), profile.phase(t0))?;
    let u = &(&r1 * &inner.u) * &r0.adjoint();
    Ok(PropagatorResult::new(u, t0, t1, inner.steps_used))
}

/// Ω_spin = Ω[1 − J₀(a)].
pub fn omega_spin(omega_rot: f64, a: f64) -> f64 {
    omega_rot * one_minus_j0(a)
}

/// Loop holonomy U = exp(−iγ F·n̂) with γ = 2π[1 − J₀(a)].
#[derive(Debug, Clone)]
pub struct HolonomyOperator {
    pub axis: Vec3,
    pub gamma: f64,
    pub u: Operator,
}

/// Holonomy of one anti-clockwise field loop about `axis` at a = g_F B/ω.
pub fn holonomy_loop(sys: &SpinSystem, axis: &Vec3, a: f64) -> Result<HolonomyOperator> {
    if (axis.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "loop axis must be a unit vector, |n| = {}",
            axis.norm()
        )));
    }
    let gamma = std::f64::consts::TAU * one_minus_j0(a);
    let u = unitary_exp(&sys.f_dot(axis), gamma)?;
    Ok(HolonomyOperator {
        axis: *axis,
        gamma,
        u,
    })
}

/// ‖[U₁, U₂]‖_F.
pub fn commutator_norm(u1: &Operator, u2: &Operator) -> Result<f64> {
    Ok(crate::smallmat::commutator(u1, u2)?.frobenius_norm())
}

/// γ = 2π[1 − J₀(a)].
pub fn geometric_angle(a: f64) -> f64 {
    std::f64::consts::TAU * (1.0 - bessel_j0(a))
}

/// Exact diagonal propagator for a fixed field along z (commuting case):
/// phases −g m B [𝓕(θ′₁) − 𝓕(θ′₀)]/ω.
pub fn static_z_propagator(sys: &SpinSystem, bz: f64, profile: &DrivingProfile, t0: f64, t1: f64) -> Operator {
    let delta = profile.c(profile.phase(t1)) - profile.c(profile.phase(t0));
    let phases: Vec<C64> = sys
        .projections()
        .iter()
        .map(|m| C64::from_polar(1.0, -sys.g_factor() * bz * m * delta))
        .collect();
    Operator::diagonal(&phases)
}
