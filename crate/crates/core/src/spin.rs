//! Spin operators and the Zeeman coupling V(B) = g_F F·B.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::smallmat::{Operator, Role, C64};

/// Real 3-vector used for fields, field rates and rotation axes.
pub type Vec3 = Vector3<f64>;

/// Cartesian spin matrices (F_x, F_y, F_z) for spin `f`.
///
/// The basis is ordered by decreasing projection, m = f, f−1, …, −f.
pub fn spin_matrices(f: f64) -> Result<[Operator; 3]> {
    let doubled = doubled_spin(f)?;
    let dim = doubled as usize + 1;
    let m_of = |k: usize| f - k as f64;

    // ⟨m+1|F₊|m⟩ sits at (k−1, k) with m = f − k.
    let raise = |r: usize, c: usize| {
        if c == r + 1 {
            let m = m_of(c);
            C64::new((f * (f + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let f_plus = Operator::from_fn(dim, raise);
    let f_minus = f_plus.adjoint();

    let fx = (&f_plus + &f_minus).scale_re(0.5).with_role(Role::Hermitian);
    let fy = (&f_plus - &f_minus)
        .scale(C64::new(0.0, -0.5))
        .with_role(Role::Hermitian);
    let fz = Operator::real_diagonal(&(0..dim).map(m_of).collect::<Vec<_>>());
    Ok([fx, fy, fz])
}

fn doubled_spin(f: f64) -> Result<u32> {
    let twice = 2.0 * f;
    if !f.is_finite() || f < 0.0 || (twice - twice.round()).abs() > 1e-12 || twice > 1e4 {
        return Err(Error::InvalidSpin(f));
    }
    Ok(twice.round() as u32)
}

/// A spin of quantum number f_F with gyromagnetic factor g_F.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    spin: f64,
    g_factor: f64,
    ops: [Operator; 3],
}

impl SpinSystem {
    pub fn new(spin: f64, g_factor: f64) -> Result<Self> {
        if !g_factor.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gyromagnetic factor must be finite, got {g_factor}"
            )));
        }
        Ok(Self {
            spin,
            g_factor,
            ops: spin_matrices(spin)?,
        })
    }

    pub fn spin(&self) -> f64 {
        self.spin
    }

    pub fn g_factor(&self) -> f64 {
        self.g_factor
    }

    pub fn dim(&self) -> usize {
        self.ops[2].dim()
    }

    pub fn fx(&self) -> &Operator {
        &self.ops[0]
    }

    pub fn fy(&self) -> &Operator {
        &self.ops[1]
    }

    pub fn fz(&self) -> &Operator {
        &self.ops[2]
    }

    /// Projections m_F in basis order.
    pub fn projections(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.spin - k as f64).collect()
    }

    /// Basis index of projection `m` along z.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let k = self.spin - m;
        let kr = k.round();
        if (k - kr).abs() > 1e-9 || kr < 0.0 || kr as usize >= self.dim() {
            None
        } else {
            Some(kr as usize)
        }
    }

    /// F·v.
    pub fn f_dot(&self, v: &Vec3) -> Operator {
        let mut out = self.ops[0].scale_re(v.x);
        out += &self.ops[1].scale_re(v.y);
        out += &self.ops[2].scale_re(v.z);
        out.with_role(Role::Hermitian)
    }

    /// V(B) = g_F F·B.
    pub fn zeeman(&self, b: &Vec3) -> Operator {
        self.f_dot(&(b * self.g_factor))
    }
}

/// V(B) = g_F F·B.
pub fn zeeman_v(sys: &SpinSystem, b: &Vec3) -> Operator {
    sys.zeeman(b)
}
