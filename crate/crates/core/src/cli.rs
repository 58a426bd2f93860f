//! Experiment configuration and the commands behind the `floquet` binary.
//!
//! Commands return their CSV as a string; reading config files, writing
//! outputs and mapping failures to exit codes is left to the caller.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::driving::{harmonic_profile, parse_drive_table, DrivingProfile};
use crate::error::Error;
use crate::evolution::{commutator_norm, holonomy_loop, propagate_exact_observed};
use crate::protocols::{
    build_fig2_schedule, run_fig2, FieldSchedule, MeasurementPlan, Segment, TimedSegment,
};
use crate::smallmat::{dist, StateVector};
use crate::spin::{SpinSystem, Vec3};
use crate::tolerances;
use crate::transform::{w_numeric, w_series, w_spin_closed, LinearPath, TransformedFrame, VOperatorMap};

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },
    #[error("numerical guard: {0}")]
    Numerical(Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    fn config(message: impl Into<String>) -> Self {
        CliError::Config {
            line: None,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::StepGuard { .. }
            | Error::RampTooFast { .. }
            | Error::NotHermitian { .. }
            | Error::FiniteDifference { .. }
            | Error::Undersampled { .. } => CliError::Numerical(e),
            other => CliError::config(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn default_drive() -> String {
    "harmonic".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spin: f64,
    pub g_factor: f64,
    pub omega: f64,
    #[serde(default)]
    pub theta: f64,
    /// "harmonic" or the path of a two-column drive table.
    #[serde(default = "default_drive")]
    pub drive: String,
    #[serde(default)]
    pub integration: Integration,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig2: Option<Fig2Config>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wcheck: Option<WcheckConfig>,
    #[serde(default, rename = "segment", skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<SegmentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Integration {
    pub steps_per_period: usize,
    pub phase_grid: usize,
}

impl Default for Integration {
    fn default() -> Self {
        Self {
            steps_per_period: tolerances::STEPS_PER_PERIOD_DEFAULT,
            phase_grid: tolerances::PHASE_GRID_DEFAULT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Evolve columns to keep: any of "amplitudes", "probabilities",
    /// "field", "adiabaticity". Empty keeps all.
    pub quantities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    /// Initial projection along z; defaults to +f.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_m: Option<f64>,
    /// End time; defaults to the end of the schedule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub sample_every: usize,
    /// Highest Fourier mode in the adiabaticity column.
    pub adiabaticity_modes: i64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            initial_m: None,
            t_end: None,
            sample_every: 16,
            adiabaticity_modes: 2,
        }
    }
}

fn default_ramp_periods() -> u32 {
    5
}

fn default_edge_periods() -> f64 {
    8.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Config {
    pub a_grid: Vec<f64>,
    pub rho: f64,
    #[serde(default = "default_ramp_periods")]
    pub ramp_periods: u32,
    #[serde(default = "default_edge_periods")]
    pub edge_periods: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyConfig {
    pub axes: Vec<[f64; 3]>,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WcheckConfig {
    pub draws: usize,
    pub spins: Vec<f64>,
    /// Largest a = g_F|B|/ω for the three-way comparison.
    pub a_series: f64,
    /// Largest a for numeric against closed form.
    pub a_closed: f64,
    pub series_order: usize,
}

impl Default for WcheckConfig {
    fn default() -> Self {
        Self {
            draws: 100,
            spins: vec![0.5, 1.0, 1.5],
            a_series: 1.0,
            a_closed: 6.0,
            series_order: tolerances::SERIES_ORDER_DEFAULT,
        }
    }
}

fn default_cycles() -> f64 {
    1.0
}

/// One `[[segment]]` block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentConfig {
    RampUp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<f64>,
        duration: f64,
        target: [f64; 3],
    },
    RotateLoop {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<f64>,
        axis: [f64; 3],
        omega: f64,
        #[serde(default = "default_cycles")]
        cycles: f64,
        /// Rate switching time; defaults to eight drive periods.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edge: Option<f64>,
    },
    RampDown {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<f64>,
        duration: f64,
    },
}

impl SegmentConfig {
    fn to_timed(&self, period: f64) -> TimedSegment {
        let v = |x: &[f64; 3]| Vec3::new(x[0], x[1], x[2]);
        match self {
            SegmentConfig::RampUp {
                start,
                duration,
                target,
            } => TimedSegment {
                start: *start,
                segment: Segment::RampUp {
                    duration: *duration,
                    target: v(target),
                },
            },
            SegmentConfig::RotateLoop {
                start,
                axis,
                omega,
                cycles,
                edge,
            } => TimedSegment {
                start: *start,
                segment: Segment::RotateLoop {
                    axis: v(axis),
                    omega: *omega,
                    cycles: *cycles,
                    edge: edge.unwrap_or(default_edge_periods() * period),
                },
            },
            SegmentConfig::RampDown { start, duration } => TimedSegment {
                start: *start,
                segment: Segment::RampDown { duration: *duration },
            },
        }
    }
}

/// Line of the `index`-th `[[segment]]` header.
fn segment_line(text: &str, index: usize) -> Option<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with("[[segment]]"))
        .nth(index)
        .map(|(n, _)| n + 1)
}

impl ExperimentConfig {
    /// Parse and validate; messages carry the offending line where known.
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].lines().count().max(1));
            CliError::Config {
                line,
                message: e.message().to_string(),
            }
        })?;
        cfg.validate().map_err(|e| match e {
            CliError::Config { line: None, message } => {
                let line = segment_index(&message).and_then(|i| segment_line(text, i));
                CliError::Config { line, message }
            }
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        let finite = [
            ("spin", self.spin),
            ("g_factor", self.g_factor),
            ("omega", self.omega),
            ("theta", self.theta),
        ];
        for (name, x) in finite {
            if !x.is_finite() {
                return Err(CliError::config(format!("{name} must be finite")));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidFrequency(self.omega).into());
        }
        SpinSystem::new(self.spin, self.g_factor)?;
        if self.integration.phase_grid < tolerances::PHASE_GRID_MIN {
            return Err(CliError::config(format!(
                "integration.phase_grid must be at least {}",
                tolerances::PHASE_GRID_MIN
            )));
        }
        if !self.segments.is_empty() {
            self.schedule_from_segments()?;
        }
        if let Some(f) = &self.fig2 {
            if f.a_grid.iter().any(|a| !a.is_finite() || *a < 0.0) {
                return Err(CliError::config("fig2.a_grid entries must be finite and non-negative"));
            }
            if !(f.rho.is_finite() && f.rho > 0.0) {
                return Err(CliError::config("fig2.rho must be positive"));
            }
        }
        if let Some(h) = &self.holonomy {
            if !h.a.is_finite() {
                return Err(CliError::config("holonomy.a must be finite"));
            }
            if h.axes.iter().any(|x| Vec3::from(*x).norm() == 0.0 || x.iter().any(|c| !c.is_finite())) {
                return Err(CliError::config("holonomy.axes entries must be finite nonzero vectors"));
            }
        }
        if let Some(e) = &self.evolve {
            if e.sample_every == 0 {
                return Err(CliError::config("evolve.sample_every must be at least 1"));
            }
        }
        Ok(())
    }

    fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    fn schedule_from_segments(&self) -> CliResult<FieldSchedule> {
        let timed = self.segments.iter().map(|s| s.to_timed(self.period())).collect();
        Ok(FieldSchedule::build(0.0, Vec3::zeros(), timed)?)
    }

    fn plan(&self) -> Option<MeasurementPlan> {
        self.fig2.as_ref().map(|f| MeasurementPlan {
            rho: f.rho,
            ramp_periods: f.ramp_periods,
            edge_periods: f.edge_periods,
            steps_per_period: self.integration.steps_per_period,
        })
    }
}

fn segment_index(message: &str) -> Option<usize> {
    let rest = message.strip_prefix("schedule segment ")?;
    rest.split(':').next()?.trim().parse().ok()
}

/// Overrides from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub theta: Option<f64>,
    pub seed: Option<u64>,
}

/// A validated config with its drive profile and spin resolved.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub sys: SpinSystem,
    pub profile: DrivingProfile,
}

impl Experiment {
    /// Tabulated drive paths are resolved against `base_dir`.
    pub fn new(mut config: ExperimentConfig, base_dir: &Path, overrides: &Overrides) -> CliResult<Self> {
        if let Some(steps) = overrides.steps {
            config.integration.steps_per_period = steps;
        }
        if let Some(theta) = overrides.theta {
            config.theta = theta;
        }
        config.validate()?;
        let sys = SpinSystem::new(config.spin, config.g_factor)?;
        let profile = if config.drive == "harmonic" {
            harmonic_profile(config.omega, config.theta)?
        } else {
            let path = base_dir.join(&config.drive);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            DrivingProfile::tabulated(config.omega, config.theta, &parse_drive_table(&text)?)?
        };
        Ok(Self { config, sys, profile })
    }

    fn steps_per_period(&self) -> usize {
        self.config.integration.steps_per_period
    }
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column label of projection m: "1", "0", "m1", "1_2", "m3_2".
pub fn m_label(m: f64) -> String {
    let sign = if m < 0.0 { "m" } else { "" };
    let twice = (2.0 * m.abs()).round() as i64;
    if twice % 2 == 0 {
        format!("{sign}{}", twice / 2)
    } else {
        format!("{sign}{twice}_2")
    }
}

fn wants(quantities: &[String], name: &str) -> bool {
    quantities.is_empty() || quantities.iter().any(|q| q == name)
}

/// Time series of the exact evolution along the configured schedule.
///
/// The schedule is the `[[segment]]` list when present, otherwise the loop
/// measurement sequence of a single-entry `[fig2]` grid, otherwise zero field.
pub fn cmd_evolve(exp: &Experiment) -> CliResult<String> {
    let cfg = &exp.config;
    let ev = cfg.evolve.clone().unwrap_or_default();
    let schedule = if !cfg.segments.is_empty() {
        cfg.schedule_from_segments()?
    } else if let (Some(f), Some(plan)) = (&cfg.fig2, cfg.plan()) {
        if f.a_grid.len() != 1 {
            return Err(CliError::config(
                "evolve without segments needs a single-entry fig2.a_grid",
            ));
        }
        build_fig2_schedule(&exp.sys, cfg.omega, f.a_grid[0], &plan)?
    } else {
        FieldSchedule::new(Vec::new())?
    };
    if !cfg.segments.is_empty() {
        schedule.ramp_guard(&exp.sys, cfg.omega)?;
    }
    let t0 = schedule.t_start();
    let t1 = match ev.t_end {
        Some(t) => t,
        None if schedule.segments().is_empty() => t0 + cfg.period(),
        None => schedule.t_end(),
    };
    if t1.is_nan() || t1 < t0 {
        return Err(CliError::config(format!("evolve.t_end {t1} precedes the schedule start {t0}")));
    }
    let m0 = ev.initial_m.unwrap_or(exp.sys.spin());
    let k0 = exp
        .sys
        .index_of(m0)
        .ok_or_else(|| CliError::config(format!("evolve.initial_m {m0} is not a projection of spin {}", cfg.spin)))?;
    let psi0 = StateVector::basis(exp.sys.dim(), k0);

    let map = VOperatorMap::new(&exp.sys, &schedule);
    let frame = TransformedFrame::new(map, &exp.profile).with_phase_points(cfg.integration.phase_grid);
    let labels: Vec<String> = exp.sys.projections().into_iter().map(m_label).collect();
    let q = &cfg.output.quantities;

    let mut header = vec!["t".to_string()];
    if wants(q, "amplitudes") {
        for l in &labels {
            header.push(format!("re_{l}"));
            header.push(format!("im_{l}"));
        }
    }
    if wants(q, "probabilities") {
        header.extend(labels.iter().map(|l| format!("p_{l}")));
    }
    if wants(q, "field") {
        header.push("b_norm".into());
    }
    if wants(q, "adiabaticity") {
        header.push("adiabaticity".into());
    }

    let mut samples = vec![(t0, crate::smallmat::Operator::identity(exp.sys.dim()))];
    let mut count = 0usize;
    let result = propagate_exact_observed(&map, &exp.profile, t0, t1, exp.steps_per_period(), |t, u| {
        count += 1;
        if count.is_multiple_of(ev.sample_every) {
            samples.push((t, u.clone()));
        }
    })?;
    if samples.last().map(|s| s.0) != Some(t1) {
        samples.push((t1, result.u.clone()));
    }

    let mut out = header.join(",");
    out.push('\n');
    for (t, u) in &samples {
        let psi = u.apply(&psi0);
        let mut row = vec![fmt_num(*t)];
        if wants(q, "amplitudes") {
            for z in psi.amplitudes() {
                row.push(fmt_num(z.re));
                row.push(fmt_num(z.im));
            }
        }
        if wants(q, "probabilities") {
            row.extend(psi.probabilities().into_iter().map(fmt_num));
        }
        if wants(q, "field") {
            row.push(fmt_num(schedule.b(*t).norm()));
        }
        if wants(q, "adiabaticity") {
            row.push(fmt_num(frame.adiabaticity(*t, ev.adiabaticity_modes.max(1))?));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub const FIG2_HEADER: &str = "a,gamma,p1_exact,p0_exact,pm1_exact,p1_analytic,p0_analytic,pm1_analytic,max_dev";

/// Loop measurement table over `fig2.a_grid`.
pub fn cmd_fig2(exp: &Experiment) -> CliResult<String> {
    let f = exp
        .config
        .fig2
        .as_ref()
        .ok_or_else(|| CliError::config("fig2 needs a [fig2] section"))?;
    let plan = exp.config.plan().expect("fig2 section present");
    let rows = run_fig2(&exp.sys, &exp.profile, &f.a_grid, &plan)?;
    let mut out = String::from(FIG2_HEADER);
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = [r.a, r.gamma]
            .into_iter()
            .chain(r.exact)
            .chain(r.analytic)
            .chain([r.max_dev])
            .map(fmt_num)
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Loop holonomies about each configured axis and their pairwise commutator
/// norms. Returns the CSV and warnings for axes that had to be normalized.
pub fn cmd_holonomy(exp: &Experiment) -> CliResult<(String, Vec<String>)> {
    let h = exp
        .config
        .holonomy
        .as_ref()
        .ok_or_else(|| CliError::config("holonomy needs a [holonomy] section"))?;
    let mut warnings = Vec::new();
    let mut loops = Vec::new();
    for (i, raw) in h.axes.iter().enumerate() {
        let v = Vec3::from(*raw);
        let n = v.normalize();
        if (v.norm() - 1.0).abs() > 1e-12 {
            warnings.push(format!("axis {i} has norm {} and was normalized", v.norm()));
        }
        loops.push(holonomy_loop(&exp.sys, &n, h.a)?);
    }
    let dim = exp.sys.dim();
    let mut header: Vec<String> = ["record", "i", "j", "nx", "ny", "nz", "gamma", "commutator_norm"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for r in 0..dim {
        for c in 0..dim {
            header.push(format!("re_{r}_{c}"));
            header.push(format!("im_{r}_{c}"));
        }
    }
    let empty_u = vec![String::new(); 2 * dim * dim];
    let mut out = header.join(",");
    out.push('\n');
    for (i, l) in loops.iter().enumerate() {
        let mut row = vec!["loop".to_string(), i.to_string(), String::new()];
        row.extend(l.axis.iter().map(|x| fmt_num(*x)));
        row.push(fmt_num(l.gamma));
        row.push(String::new());
        for z in l.u.row_major() {
            row.push(fmt_num(z.re));
            row.push(fmt_num(z.im));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    for i in 0..loops.len() {
        for j in i + 1..loops.len() {
            let mut row = vec!["commutator".to_string(), i.to_string(), j.to_string()];
            row.extend(std::iter::repeat_n(String::new(), 4));
            row.push(fmt_num(commutator_norm(&loops[i].u, &loops[j].u)?));
            row.extend(empty_u.iter().cloned());
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    Ok((out, warnings))
}

/// Worst pairwise distances among the three W evaluations for one spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcheckRow {
    pub spin: f64,
    pub draws: usize,
    /// Draws with a ≤ a_series: numeric, series and closed form pairwise.
    pub numeric_series: f64,
    pub series_closed: f64,
    pub numeric_closed_small: f64,
    /// Draws with a ≤ a_closed: numeric against closed form.
    pub numeric_closed_large: f64,
}

impl WcheckRow {
    pub fn max_small(&self) -> f64 {
        self.numeric_series.max(self.series_closed).max(self.numeric_closed_small)
    }
}

/// Random (B, Ḃ, θ′) draws at a = g_F|B|/ω up to `a_max`, fed to `check`.
fn draw_points(
    rng: &mut ChaCha8Rng,
    sys: &SpinSystem,
    omega: f64,
    a_max: f64,
    draws: usize,
    mut check: impl FnMut(Vec3, Vec3, f64) -> CliResult<()>,
) -> CliResult<()> {
    for _ in 0..draws {
        let dir = loop {
            let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                break v / n;
            }
        };
        let a = a_max * rng.random_range(1e-3..=1.0);
        let b = dir * (a * omega / sys.g_factor());
        let b_dot = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        check(b, b_dot, phase)?;
    }
    Ok(())
}

/// W oracle triangle on seeded random draws.
pub fn wcheck(
    profile: &DrivingProfile,
    g_factor: f64,
    opts: &WcheckConfig,
    seed: u64,
) -> CliResult<Vec<WcheckRow>> {
    if g_factor == 0.0 {
        return Err(CliError::config("wcheck needs a nonzero g_factor"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &spin in &opts.spins {
        let sys = SpinSystem::new(spin, g_factor)?;
        let numeric = |b: &Vec3, b_dot: &Vec3, phase: f64| {
            let path = LinearPath {
                origin: b.as_slice().to_vec(),
                rate: b_dot.as_slice().to_vec(),
            };
            w_numeric(&VOperatorMap::new(&sys, &path), profile, phase, 0.0)
        };
        let mut row = WcheckRow {
            spin,
            draws: opts.draws,
            numeric_series: 0.0,
            series_closed: 0.0,
            numeric_closed_small: 0.0,
            numeric_closed_large: 0.0,
        };
        draw_points(&mut rng, &sys, profile.omega(), opts.a_series, opts.draws, |b, b_dot, phase| {
            let wn = numeric(&b, &b_dot, phase)?;
            let ws = w_series(profile.c(phase), &sys.zeeman(&b), &sys.zeeman(&b_dot), opts.series_order)?;
            let wc = w_spin_closed(&sys, &b, &b_dot, profile, phase);
            row.numeric_series = row.numeric_series.max(dist(&wn, &ws)?);
            row.series_closed = row.series_closed.max(dist(&ws, &wc)?);
            row.numeric_closed_small = row.numeric_closed_small.max(dist(&wn, &wc)?);
            Ok(())
        })?;
        draw_points(&mut rng, &sys, profile.omega(), opts.a_closed, opts.draws, |b, b_dot, phase| {
            let wn = numeric(&b, &b_dot, phase)?;
            let wc = w_spin_closed(&sys, &b, &b_dot, profile, phase);
            row.numeric_closed_large = row.numeric_closed_large.max(dist(&wn, &wc)?);
            Ok(())
        })?;
        rows.push(row);
    }
    Ok(rows)
}

pub const WCHECK_HEADER: &str =
    "spin,draws,numeric_series,series_closed,numeric_closed_small_a,numeric_closed_large_a,max_pairwise_small_a";

pub fn cmd_wcheck(exp: &Experiment, seed: u64) -> CliResult<String> {
    let opts = exp.config.wcheck.clone().unwrap_or_default();
    let rows = wcheck(&exp.profile, exp.config.g_factor, &opts, seed)?;
    let mut out = String::from(WCHECK_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_num(r.spin),
            r.draws,
            fmt_num(r.numeric_series),
            fmt_num(r.series_closed),
            fmt_num(r.numeric_closed_small),
            fmt_num(r.numeric_closed_large),
            fmt_num(r.max_small())
        );
    }
    Ok(out)
}

/// Config used by `wcheck` when none is given.
pub fn default_wcheck_config() -> ExperimentConfig {
    ExperimentConfig {
        spin: 0.5,
        g_factor: 1.0,
        omega: 1.0,
        theta: 0.0,
        drive: default_drive(),
        integration: Integration::default(),
        output: OutputConfig::default(),
        evolve: None,
        fig2: None,
        holonomy: None,
        wcheck: Some(WcheckConfig::default()),
        segments: Vec::new(),
    }
}
