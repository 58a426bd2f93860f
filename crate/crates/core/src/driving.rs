//! Periodic drive f(θ′), its zero-average primitive 𝓕(θ′) and period averages.
//!
//! Phases θ′ = ωt + θ are 2π-periodic. All period averages use the uniform
//! trapezoid rule, which is exact for trigonometric polynomials below the
//! grid's Nyquist frequency.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::smallmat::C64;
use crate::tolerances;

/// Uniform phase grid θ_k = 2πk/M, k = 0…M−1.
pub fn phase_grid(points: usize) -> impl Iterator<Item = f64> + Clone {
    (0..points).map(move |k| TAU * k as f64 / points as f64)
}

/// (1/2π)∫₀^{2π} g(θ′)e^{−imθ′}dθ′ by the `points`-point trapezoid rule.
pub fn fourier_coeff(g: impl Fn(f64) -> f64, mode: i64, points: usize) -> Result<C64> {
    if points < 4 * mode.unsigned_abs() as usize || points == 0 {
        return Err(Error::Undersampled { mode, grid: points });
    }
    let sum: C64 = phase_grid(points)
        .map(|th| g(th) * C64::from_polar(1.0, -(mode as f64) * th))
        .sum();
    Ok(sum / points as f64)
}

/// Period average of `g` on a uniform grid.
pub fn period_mean(g: impl Fn(f64) -> f64, points: usize) -> f64 {
    phase_grid(points).map(g).sum::<f64>() / points as f64
}

/// Discrete Fourier coefficients of grid samples, for modes −K…K with
/// K = ⌈M/2⌉ − 1 (the Nyquist mode of an even grid is dropped).
fn sample_coefficients(samples: &[f64]) -> Vec<C64> {
    let m = samples.len();
    let k_max = (m as i64 + 1) / 2 - 1;
    (-k_max..=k_max)
        .map(|mode| {
            samples
                .iter()
                .enumerate()
                .map(|(k, &v)| v * C64::from_polar(1.0, -(mode as f64) * TAU * k as f64 / m as f64))
                .sum::<C64>()
                / m as f64
        })
        .collect()
}

fn eval_series(coeffs: &[C64], theta: f64) -> f64 {
    let k_max = (coeffs.len() / 2) as i64;
    // coefficients are Hermitian-symmetric, so sum the m ≥ 0 half
    let mut acc = coeffs[k_max as usize].re;
    for mode in 1..=k_max {
        let c = coeffs[(k_max + mode) as usize];
        acc += 2.0 * (c * C64::from_polar(1.0, mode as f64 * theta)).re;
    }
    acc
}

fn zero_mean_scale(samples: &[f64]) -> f64 {
    samples.iter().fold(1.0f64, |a, v| a.max(v.abs()))
}

/// Zero-mean primitive of grid samples by spectral integration.
///
/// Fourier coefficients are divided by im and the constant is chosen so the
/// primitive averages to zero. Fails if the input mean is not zero.
pub fn primitive(samples: &[f64]) -> Result<Vec<f64>> {
    let m = samples.len();
    if m < 4 {
        return Err(Error::InvalidTable(format!("grid of {m} points is too small")));
    }
    let mean = samples.iter().sum::<f64>() / m as f64;
    if mean.abs() > tolerances::ZERO_MEAN * zero_mean_scale(samples) {
        return Err(Error::NonZeroMean { mean });
    }
    let coeffs = integrated(&sample_coefficients(samples));
    Ok(phase_grid(m).map(|th| eval_series(&coeffs, th)).collect())
}

fn integrated(coeffs: &[C64]) -> Vec<C64> {
    let k_max = (coeffs.len() / 2) as i64;
    (-k_max..=k_max)
        .zip(coeffs)
        .map(|(mode, &c)| {
            if mode == 0 {
                C64::new(0.0, 0.0)
            } else {
                c / C64::new(0.0, mode as f64)
            }
        })
        .collect()
}

/// Period average of 𝓕² (the p-factor of the weak-driving effective Hamiltonian).
pub fn p_factor(primitive: impl Fn(f64) -> f64, points: usize) -> f64 {
    period_mean(|th| primitive(th).powi(2), points)
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Harmonic,
    Tabulated {
        samples: Vec<f64>,
        drive: Vec<C64>,
        primitive: Vec<C64>,
        mean_correction: f64,
    },
}

/// A 2π-periodic zero-average drive f(θ′) with frequency ω and phase θ.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingProfile {
    omega: f64,
    theta: f64,
    shape: Shape,
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidFrequency(omega));
    }
    Ok(())
}

/// f = cos, 𝓕 = sin.
pub fn harmonic_profile(omega: f64, theta: f64) -> Result<DrivingProfile> {
    check_omega(omega)?;
    Ok(DrivingProfile {
        omega,
        theta,
        shape: Shape::Harmonic,
    })
}

impl DrivingProfile {
    /// Drive tabulated on a uniform grid over one period.
    ///
    /// The sample mean is subtracted; see [`DrivingProfile::mean_correction`].
    pub fn tabulated(omega: f64, theta: f64, samples: &[f64]) -> Result<Self> {
        check_omega(omega)?;
        if samples.len() < tolerances::PHASE_GRID_MIN {
            return Err(Error::InvalidTable(format!(
                "{} samples; at least {} required",
                samples.len(),
                tolerances::PHASE_GRID_MIN
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite sample".into()));
        }
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let centered: Vec<f64> = samples.iter().map(|v| v - mean).collect();
        let drive = sample_coefficients(&centered);
        let primitive = integrated(&drive);
        Ok(Self {
            omega,
            theta,
            shape: Shape::Tabulated {
                samples: centered,
                drive,
                primitive,
                mean_correction: mean,
            },
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            theta,
            ..self.clone()
        }
    }

    pub fn is_harmonic(&self) -> bool {
        matches!(self.shape, Shape::Harmonic)
    }

    /// Mean subtracted from tabulated input (zero for analytic shapes).
    pub fn mean_correction(&self) -> f64 {
        match &self.shape {
            Shape::Harmonic => 0.0,
            Shape::Tabulated {
                mean_correction, ..
            } => *mean_correction,
        }
    }

    /// Tabulated samples after mean removal, if any.
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Harmonic => None,
            Shape::Tabulated { samples, .. } => Some(samples),
        }
    }

    /// θ′ = ωt + θ.
    pub fn phase(&self, t: f64) -> f64 {
        self.omega * t + self.theta
    }

    /// f(θ′).
    pub fn drive(&self, phase: f64) -> f64 {
        match &self.shape {
            Shape::Harmonic => phase.cos(),
            Shape::Tabulated { drive, .. } => eval_series(drive, phase),
        }
    }

    /// 𝓕(θ′).
    pub fn primitive(&self, phase: f64) -> f64 {
        match &self.shape {
            Shape::Harmonic => phase.sin(),
            Shape::Tabulated { primitive, .. } => eval_series(primitive, phase),
        }
    }

    /// c(θ′) = 𝓕(θ′)/ω.
    pub fn c(&self, phase: f64) -> f64 {
        self.primitive(phase) / self.omega
    }

    /// f⁽ᵐ⁾ = (1/2π)∫ f e^{−imθ′} dθ′.
    pub fn drive_coeff(&self, mode: i64) -> C64 {
        match &self.shape {
            Shape::Harmonic => {
                if mode.abs() == 1 {
                    C64::new(0.5, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            Shape::Tabulated { drive, .. } => {
                let k_max = (drive.len() / 2) as i64;
                if mode.abs() > k_max {
                    C64::new(0.0, 0.0)
                } else {
                    drive[(k_max + mode) as usize]
                }
            }
        }
    }

    /// Period average of 𝓕².
    pub fn p_factor(&self) -> f64 {
        match &self.shape {
            Shape::Harmonic => 0.5,
            Shape::Tabulated { primitive, .. } => {
                primitive.iter().map(|c| c.norm_sqr()).sum::<f64>()
            }
        }
    }

    /// max |𝓕| over a period, sampled on `points` phases.
    pub fn primitive_max(&self, points: usize) -> f64 {
        match self.shape {
            Shape::Harmonic => 1.0,
            _ => phase_grid(points).map(|th| self.primitive(th).abs()).fold(0.0, f64::max),
        }
    }
}

/// Parse a two-column (θ′, f) table on a uniform grid covering [0, 2π).
///
/// Blank lines and lines starting with `#` are skipped. Columns may be
/// separated by whitespace or commas.
pub fn parse_drive_table(text: &str) -> Result<Vec<f64>> {
    let mut thetas = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::InvalidTable(format!(
                "line {}: expected 2 columns, found {}",
                lineno + 1,
                cols.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| {
                Error::InvalidTable(format!("line {}: {e}: {s:?}", lineno + 1))
            })
        };
        thetas.push(parse(cols[0])?);
        values.push(parse(cols[1])?);
    }
    let m = thetas.len();
    if m < tolerances::PHASE_GRID_MIN {
        return Err(Error::InvalidTable(format!(
            "{m} rows; at least {} required",
            tolerances::PHASE_GRID_MIN
        )));
    }
    for (k, th) in thetas.iter().enumerate() {
        let expect = TAU * k as f64 / m as f64;
        if (th - expect).abs() > 1e-6 * PI {
            return Err(Error::InvalidTable(format!(
                "row {}: phase {th} is off the uniform grid (expected {expect})",
                k + 1
            )));
        }
    }
    Ok(values)
}
