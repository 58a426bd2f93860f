//! Field schedules B(t) and the loop measurement protocols built from them.
//!
//! A schedule is a chain of segments: smoothstep ramps of |B| along a fixed
//! direction, and rotations of B about a fixed axis at constant |B|. The
//! rotation rate itself is switched on and off smoothly so that B and Ḃ are
//! continuous everywhere.

use nalgebra::{Rotation3, Unit};
use rayon::prelude::*;

use crate::driving::DrivingProfile;
use crate::error::{Error, Result};
use crate::evolution::{holonomy_loop, propagate_exact, PropagatorResult};
use crate::smallmat::{Operator, StateVector};
use crate::spin::{SpinSystem, Vec3};
use crate::tolerances;
use crate::transform::{bessel_j0, ParameterPath, VOperatorMap};
use std::f64::consts::TAU;

/// Adiabaticity ratio ρ = Ω g_F B₀/ω².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AdiabaticityRatio(pub f64);

impl AdiabaticityRatio {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn rho(omega_rot: f64, g: f64, b0: f64, omega: f64) -> Result<AdiabaticityRatio> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidFrequency(omega));
    }
    Ok(AdiabaticityRatio(omega_rot * g * b0 / (omega * omega)))
}

/// One schedule segment.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// Smoothstep ramp from the current field to `target`, which must be
    /// parallel to it (or either of them zero).
    RampUp { duration: f64, target: Vec3 },
    /// Rotation of the current field by `cycles` full turns about `axis`.
    /// Positive `omega` is anti-clockwise by the right-hand rule. The rate
    /// is ramped in and out over `edge`, which lengthens the segment by
    /// `edge` beyond cycles·2π/|Ω|.
    RotateLoop {
        axis: Vec3,
        omega: f64,
        cycles: f64,
        edge: f64,
    },
    /// Smoothstep ramp of the current field to zero.
    RampDown { duration: f64 },
}

/// s(x) = 3x² − 2x³.
fn smoothstep(x: f64) -> (f64, f64) {
    let x = x.clamp(0.0, 1.0);
    (x * x * (3.0 - 2.0 * x), 6.0 * x * (1.0 - x))
}

#[derive(Debug, Clone)]
enum Piece {
    Ramp {
        t0: f64,
        t1: f64,
        from: Vec3,
        to: Vec3,
    },
    Rotate {
        t0: f64,
        t1: f64,
        start: Vec3,
        axis: Unit<Vec3>,
        rate: f64,
        edge: f64,
        total: f64,
    },
}

impl Piece {
    fn span(&self) -> (f64, f64) {
        match *self {
            Piece::Ramp { t0, t1, .. } | Piece::Rotate { t0, t1, .. } => (t0, t1),
        }
    }

    /// Rotation angle and its rate at elapsed time s.
    fn angle(s: f64, len: f64, rate: f64, edge: f64, total: f64) -> (f64, f64) {
        let ramp_in = |s: f64| {
            let x = s / edge;
            (
                rate * edge * (x * x * x - 0.5 * x * x * x * x),
                rate * x * x * (3.0 - 2.0 * x),
            )
        };
        if s <= 0.0 {
            (0.0, 0.0)
        } else if s >= len {
            (total, 0.0)
        } else if s < edge {
            ramp_in(s)
        } else if s > len - edge {
            let (phi, dphi) = ramp_in(len - s);
            (total - phi, dphi)
        } else {
            (0.5 * rate * edge + rate * (s - edge), rate)
        }
    }

    fn field(&self, t: f64) -> (Vec3, Vec3) {
        match *self {
            Piece::Ramp { t0, t1, from, to } => {
                let (s, ds) = smoothstep((t - t0) / (t1 - t0));
                let d = to - from;
                (from + d * s, d * (ds / (t1 - t0)))
            }
            Piece::Rotate {
                t0,
                t1,
                start,
                axis,
                rate,
                edge,
                total,
            } => {
                let (phi, dphi) = Self::angle(t - t0, t1 - t0, rate, edge, total);
                let b = Rotation3::from_axis_angle(&axis, phi) * start;
                (b, axis.cross(&b) * dphi)
            }
        }
    }

    fn end_field(&self) -> Vec3 {
        self.field(self.span().1).0
    }
}

/// Segment with an optional declared start time, which must match the end of
/// the previous segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedSegment {
    pub start: Option<f64>,
    pub segment: Segment,
}

/// A piecewise-analytic field trajectory B(t).
#[derive(Debug, Clone)]
pub struct FieldSchedule {
    t_start: f64,
    initial: Vec3,
    segments: Vec<Segment>,
    pieces: Vec<Piece>,
    joins: Vec<f64>,
}

impl FieldSchedule {
    /// Schedule starting at t = 0 from zero field.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        Self::build(
            0.0,
            Vec3::zeros(),
            segments
                .into_iter()
                .map(|segment| TimedSegment {
                    start: None,
                    segment,
                })
                .collect(),
        )
    }

    pub fn build(t_start: f64, initial: Vec3, segments: Vec<TimedSegment>) -> Result<Self> {
        let bad = |index: usize, reason: String| Error::InvalidSegment { index, reason };
        let mut pieces = Vec::with_capacity(segments.len());
        let mut joins = Vec::new();
        let mut t = t_start;
        let mut b = initial;
        for (index, ts) in segments.iter().enumerate() {
            if let Some(s) = ts.start {
                if (s - t).abs() > 1e-9 * t.abs().max(1.0) {
                    return Err(bad(
                        index,
                        format!("declared start {s} does not match previous end {t}"),
                    ));
                }
            }
            let piece = match ts.segment {
                Segment::RampUp { duration, target } => {
                    check_duration(index, duration)?;
                    if !target.iter().all(|x| x.is_finite()) {
                        return Err(bad(index, "target field is not finite".into()));
                    }
                    let cross = b.cross(&target).norm();
                    if cross > 1e-9 * b.norm() * target.norm() {
                        return Err(bad(index, "ramp target is not parallel to the current field".into()));
                    }
                    Piece::Ramp {
                        t0: t,
                        t1: t + duration,
                        from: b,
                        to: target,
                    }
                }
                Segment::RampDown { duration } => {
                    check_duration(index, duration)?;
                    Piece::Ramp {
                        t0: t,
                        t1: t + duration,
                        from: b,
                        to: Vec3::zeros(),
                    }
                }
                Segment::RotateLoop {
                    axis,
                    omega,
                    cycles,
                    edge,
                } => {
                    if b.norm() == 0.0 {
                        return Err(bad(index, "cannot rotate a zero field".into()));
                    }
                    if !(axis.norm() > 0.0 && axis.iter().all(|x| x.is_finite())) {
                        return Err(bad(index, "rotation axis must be a nonzero vector".into()));
                    }
                    if !(omega.is_finite() && omega != 0.0) {
                        return Err(bad(index, "rotation frequency must be nonzero".into()));
                    }
                    if !(cycles.is_finite() && cycles > 0.0) {
                        return Err(bad(index, "cycles must be positive".into()));
                    }
                    if !(edge.is_finite() && edge >= 0.0) {
                        return Err(bad(index, "edge duration must be non-negative".into()));
                    }
                    let plateau = TAU * cycles / omega.abs();
                    let edge = edge.min(plateau);
                    let len = plateau + edge;
                    let t0 = t;
                    if edge > 0.0 {
                        joins.push(t0 + edge);
                        joins.push(t0 + len - edge);
                    }
                    Piece::Rotate {
                        t0,
                        t1: t0 + len,
                        start: b,
                        axis: Unit::new_normalize(axis),
                        rate: omega,
                        edge,
                        total: TAU * cycles * omega.signum(),
                    }
                }
            };
            let (_, t1) = piece.span();
            b = piece.end_field();
            joins.push(t1);
            t = t1;
            pieces.push(piece);
        }
        Ok(Self {
            t_start,
            initial,
            segments: segments.into_iter().map(|s| s.segment).collect(),
            pieces,
            joins,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.pieces.last().map_or(self.t_start, |p| p.span().1)
    }

    /// Start and end time of each segment.
    pub fn segment_times(&self) -> Vec<(f64, f64)> {
        self.pieces.iter().map(Piece::span).collect()
    }

    /// B(t) and Ḃ(t), held constant outside the schedule.
    pub fn field(&self, t: f64) -> (Vec3, Vec3) {
        if self.pieces.is_empty() || t <= self.t_start {
            return (self.initial, Vec3::zeros());
        }
        let k = self.pieces.partition_point(|p| p.span().1 < t);
        match self.pieces.get(k) {
            Some(p) => p.field(t),
            None => (self.pieces[self.pieces.len() - 1].end_field(), Vec3::zeros()),
        }
    }

    pub fn b(&self, t: f64) -> Vec3 {
        self.field(t).0
    }

    pub fn b_dot(&self, t: f64) -> Vec3 {
        self.field(t).1
    }

    /// B vanishes at both ends, so the micromotion does not contribute there.
    pub fn is_measurement(&self) -> bool {
        self.b(self.t_start).norm() == 0.0 && self.b(self.t_end()).norm() == 0.0
    }

    /// max over ramps of g_F f_F |Ḃ| / ω², which must stay below the guard.
    pub fn ramp_guard(&self, sys: &SpinSystem, omega: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in &self.pieces {
            if let Piece::Ramp { t0, t1, from, to } = *p {
                let rate = 1.5 * (to - from).norm() / (t1 - t0);
                worst = worst.max(sys.g_factor().abs() * sys.spin() * rate / (omega * omega));
            }
        }
        if worst >= tolerances::RAMP_ADIABATIC_GUARD {
            return Err(Error::RampTooFast {
                ratio: worst,
                limit: tolerances::RAMP_ADIABATIC_GUARD,
            });
        }
        Ok(worst)
    }
}

fn check_duration(index: usize, duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSegment {
            index,
            reason: format!("duration must be positive, got {duration}"),
        })
    }
}

impl ParameterPath for FieldSchedule {
    fn lambda(&self, t: f64) -> Vec<f64> {
        self.b(t).as_slice().to_vec()
    }

    fn lambda_dot(&self, t: f64) -> Vec<f64> {
        self.b_dot(t).as_slice().to_vec()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.joins.clone()
    }
}

/// Parameters of the ramp → loop(s) → ramp measurement sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPlan {
    pub rho: f64,
    /// Ramp duration in drive periods.
    pub ramp_periods: u32,
    /// Loop rate switching time in drive periods.
    pub edge_periods: f64,
    pub steps_per_period: usize,
}

impl Default for MeasurementPlan {
    fn default() -> Self {
        Self {
            rho: 0.1,
            ramp_periods: 5,
            edge_periods: 8.0,
            steps_per_period: tolerances::STEPS_PER_PERIOD_DEFAULT,
        }
    }
}

/// Ramp up along e_z to B₀ = aω/g_F, one loop about each axis in turn at
/// Ω = ρω/a, then ramp down along the final direction. At a = 0 the schedule
/// keeps the field at zero and has no loops.
pub fn measurement_schedule(
    sys: &SpinSystem,
    omega: f64,
    a: f64,
    axes: &[Vec3],
    plan: &MeasurementPlan,
) -> Result<FieldSchedule> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidFrequency(omega));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("a must be non-negative, got {a}")));
    }
    if !(plan.rho.is_finite() && plan.rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {}", plan.rho)));
    }
    if plan.ramp_periods == 0 {
        return Err(Error::InvalidArgument("ramp_periods must be at least 1".into()));
    }
    let g = sys.g_factor();
    if a > 0.0 && g == 0.0 {
        return Err(Error::InvalidArgument("a > 0 needs a nonzero g factor".into()));
    }
    let period = TAU / omega;
    let ramp = plan.ramp_periods as f64 * period;
    let b0 = if a == 0.0 { 0.0 } else { a * omega / g };
    let mut segments = vec![Segment::RampUp {
        duration: ramp,
        target: Vec3::new(0.0, 0.0, b0),
    }];
    if a > 0.0 {
        let rate = plan.rho * omega / a;
        for axis in axes {
            segments.push(Segment::RotateLoop {
                axis: *axis,
                omega: rate,
                cycles: 1.0,
                edge: plan.edge_periods * period,
            });
        }
    }
    segments.push(Segment::RampDown { duration: ramp });
    let schedule = FieldSchedule::new(segments)?;
    schedule.ramp_guard(sys, omega)?;
    Ok(schedule)
}

/// The single y-loop sequence.
pub fn build_fig2_schedule(sys: &SpinSystem, omega: f64, a: f64, plan: &MeasurementPlan) -> Result<FieldSchedule> {
    measurement_schedule(sys, omega, a, &[Vec3::new(0.0, 1.0, 0.0)], plan)
}

/// {cos⁴(γ/2), sin²γ/2, sin⁴(γ/2)} for m_F = +1, 0, −1.
pub fn fig2_analytic(gamma: f64) -> [f64; 3] {
    let (s, c) = (0.5 * gamma).sin_cos();
    [c.powi(4), 0.5 * gamma.sin().powi(2), s.powi(4)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub a: f64,
    pub gamma: f64,
    pub exact: [f64; 3],
    pub analytic: [f64; 3],
    pub max_dev: f64,
}

/// Exact propagation of the single-loop sequence for each a, starting in
/// m_F = +1, against the closed-form loop probabilities.
pub fn run_fig2(
    sys: &SpinSystem,
    profile: &DrivingProfile,
    a_grid: &[f64],
    plan: &MeasurementPlan,
) -> Result<Vec<Fig2Row>> {
    if sys.spin() != 1.0 {
        return Err(Error::InvalidArgument(format!(
            "the loop measurement table needs spin 1, got {}",
            sys.spin()
        )));
    }
    a_grid
        .par_iter()
        .map(|&a| fig2_point(sys, profile, a, plan))
        .collect()
}

fn fig2_point(sys: &SpinSystem, profile: &DrivingProfile, a: f64, plan: &MeasurementPlan) -> Result<Fig2Row> {
    let schedule = build_fig2_schedule(sys, profile.omega(), a, plan)?;
    let map = VOperatorMap::new(sys, &schedule);
    let r = propagate_exact(&map, profile, schedule.t_start(), schedule.t_end(), plan.steps_per_period)?;
    let psi = r.apply(&StateVector::basis(3, 0));
    let p = psi.probabilities();
    let exact = [p[0], p[1], p[2]];
    let gamma = TAU * (1.0 - bessel_j0(a));
    let analytic = fig2_analytic(gamma);
    let max_dev = exact
        .iter()
        .zip(&analytic)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(Fig2Row {
        a,
        gamma,
        exact,
        analytic,
        max_dev,
    })
}

#[derive(Debug, Clone)]
pub struct DoubleLoopResult {
    pub exact: PropagatorResult,
    /// U^{(axis2)} U^{(axis1)}.
    pub closed_form: Operator,
    pub distance: f64,
}

/// Two consecutive loops, about `axes.0` and then `axes.1`.
pub fn run_double_loop(
    sys: &SpinSystem,
    profile: &DrivingProfile,
    a: f64,
    axes: (Vec3, Vec3),
    plan: &MeasurementPlan,
) -> Result<DoubleLoopResult> {
    let first = holonomy_loop(sys, &axes.0, a)?;
    let second = holonomy_loop(sys, &axes.1, a)?;
    let schedule = measurement_schedule(sys, profile.omega(), a, &[axes.0, axes.1], plan)?;
    let map = VOperatorMap::new(sys, &schedule);
    let exact = propagate_exact(&map, profile, schedule.t_start(), schedule.t_end(), plan.steps_per_period)?;
    let closed_form = &second.u * &first.u;
    let distance = crate::smallmat::dist(&exact.u, &closed_form)?;
    Ok(DoubleLoopResult {
        exact,
        closed_form,
        distance,
    })
}
