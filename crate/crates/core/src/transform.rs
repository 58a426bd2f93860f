//! The transformed frame.
//!
//! The unitary R = exp(−i c V) with c = 𝓕(θ′)/ω removes the driven
//! Hamiltonian V(λ)f(θ′) from the equations of motion. What is left is the
//! generator W(θ′, t) = λ̇_μ A_μ with A_μ = −i R†∂R/∂λ_μ, which vanishes for a
//! constant λ. This module evaluates W three independent ways (finite
//! differences of R, the nested-commutator series in c, and the closed form
//! for a spin in a field), its Fourier modes W⁽ⁿ⁾, the zero mode W⁽⁰⁾ that
//! generates adiabatic motion inside one Floquet band, and the
//! extended-space matrix K used to inspect band decoupling.

use std::f64::consts::TAU;

use crate::driving::{phase_grid, DrivingProfile};
use crate::error::{Error, Result};
use crate::smallmat::{commutator, herm_eig, unitary_exp, Operator, Role, C64, I};
use crate::spin::{SpinSystem, Vec3};
use crate::tolerances;

/// A Hermitian operator V(λ) depending on slow parameters λ.
pub trait SlowOperator: Sync {
    fn dim(&self) -> usize;

    fn n_params(&self) -> usize;

    fn operator(&self, lambda: &[f64]) -> Operator;

    /// W at slow parameters λ, rates λ̇ and c = 𝓕(θ′)/ω.
    ///
    /// Defaults to the finite-difference definition; implementors with a
    /// closed form may override it.
    fn transformed_generator(&self, lambda: &[f64], lambda_dot: &[f64], c: f64) -> Result<Operator> {
        w_finite_difference(self, lambda, lambda_dot, c)
    }
}

/// A trajectory λ(t) with its analytic rate λ̇(t).
pub trait ParameterPath: Sync {
    fn lambda(&self, t: f64) -> Vec<f64>;

    fn lambda_dot(&self, t: f64) -> Vec<f64>;

    /// Times at which λ̇ or its derivatives are not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// V(λ(t)): an operator family together with a trajectory through it.
#[derive(Clone, Copy)]
pub struct VOperatorMap<'a> {
    pub operator: &'a dyn SlowOperator,
    pub path: &'a dyn ParameterPath,
}

impl<'a> VOperatorMap<'a> {
    pub fn new(operator: &'a dyn SlowOperator, path: &'a dyn ParameterPath) -> Self {
        Self { operator, path }
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn v_at(&self, t: f64) -> Operator {
        self.operator.operator(&self.path.lambda(t))
    }

    /// V̇ = (∂V/∂λ_μ)λ̇_μ by central differences.
    pub fn v_dot_at(&self, t: f64) -> Result<Operator> {
        let lambda = self.path.lambda(t);
        let rate = self.path.lambda_dot(t);
        let mut out = Operator::zeros(self.dim());
        for (mu, &ld) in rate.iter().enumerate() {
            if ld == 0.0 {
                continue;
            }
            let (plus, minus, h) = shifted(&lambda, mu)?;
            let d = &self.operator.operator(&plus) - &self.operator.operator(&minus);
            out += &d.scale_re(ld / (2.0 * h));
        }
        Ok(out.hermitian_part())
    }
}

/// λ(t) = λ₀ + λ̇ t.
#[derive(Debug, Clone)]
pub struct LinearPath {
    pub origin: Vec<f64>,
    pub rate: Vec<f64>,
}

impl ParameterPath for LinearPath {
    fn lambda(&self, t: f64) -> Vec<f64> {
        self.origin.iter().zip(&self.rate).map(|(x, r)| x + r * t).collect()
    }

    fn lambda_dot(&self, _t: f64) -> Vec<f64> {
        self.rate.clone()
    }
}

/// Fixed λ.
#[derive(Debug, Clone)]
pub struct ConstantPath(pub Vec<f64>);

impl ParameterPath for ConstantPath {
    fn lambda(&self, _t: f64) -> Vec<f64> {
        self.0.clone()
    }

    fn lambda_dot(&self, _t: f64) -> Vec<f64> {
        vec![0.0; self.0.len()]
    }
}

impl SlowOperator for SpinSystem {
    fn dim(&self) -> usize {
        SpinSystem::dim(self)
    }

    fn n_params(&self) -> usize {
        3
    }

    fn operator(&self, lambda: &[f64]) -> Operator {
        self.zeeman(&Vec3::from_column_slice(lambda))
    }

    fn transformed_generator(&self, lambda: &[f64], lambda_dot: &[f64], c: f64) -> Result<Operator> {
        Ok(spin_w_at(
            self,
            &Vec3::from_column_slice(lambda),
            &Vec3::from_column_slice(lambda_dot),
            c,
        ))
    }
}

/// R = exp(−i (𝓕(θ′)/ω) V).
pub fn r_operator(profile: &DrivingProfile, v: &Operator, phase: f64) -> Result<Operator> {
    unitary_exp(v, profile.c(phase))
}

fn shifted(lambda: &[f64], mu: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let x = lambda[mu];
    let h = tolerances::FD_STEP_REL * x.abs().max(1.0);
    let mut plus = lambda.to_vec();
    let mut minus = lambda.to_vec();
    plus[mu] = x + h;
    minus[mu] = x - h;
    let span = plus[mu] - minus[mu];
    if !span.is_finite() || span <= 0.0 || !x.is_finite() {
        return Err(Error::FiniteDifference { step: h, value: x });
    }
    // use the representable step
    Ok((plus, minus, span / 2.0))
}

/// W = λ̇_μ A_μ with A_μ = −i R†∂R/∂λ_μ, ∂R/∂λ_μ by central differences at
/// fixed c. The result is symmetrized to remove O(h²) anti-Hermitian residue.
pub fn w_finite_difference<O: SlowOperator + ?Sized>(
    op: &O,
    lambda: &[f64],
    lambda_dot: &[f64],
    c: f64,
) -> Result<Operator> {
    let dim = op.dim();
    if c == 0.0 || lambda_dot.iter().all(|&x| x == 0.0) {
        return Ok(Operator::zeros(dim));
    }
    let r_dag = unitary_exp(&op.operator(lambda), c)?.adjoint();
    let mut dr = Operator::zeros(dim);
    for (mu, &rate) in lambda_dot.iter().enumerate() {
        if rate == 0.0 {
            continue;
        }
        let (plus, minus, h) = shifted(lambda, mu)?;
        let rp = unitary_exp(&op.operator(&plus), c)?;
        let rm = unitary_exp(&op.operator(&minus), c)?;
        dr += &(&rp - &rm).scale_re(rate / (2.0 * h));
    }
    Ok((&r_dag * &dr).scale(-I).hermitian_part())
}

/// W(θ′, t) from the finite-difference definition.
pub fn w_numeric(map: &VOperatorMap<'_>, profile: &DrivingProfile, phase: f64, t: f64) -> Result<Operator> {
    w_finite_difference(
        map.operator,
        &map.path.lambda(t),
        &map.path.lambda_dot(t),
        profile.c(phase),
    )
}

/// Nested-commutator series
/// i{(ic)V̇/1! + (ic)²[V,V̇]/2! + (ic)³[V,[V,V̇]]/3! + …}, truncated after
/// `order` terms (capped at 30) or once a term drops below 1e−12 of the sum.
pub fn w_series(c: f64, v: &Operator, v_dot: &Operator, order: usize) -> Result<Operator> {
    if order == 0 {
        return Err(Error::InvalidArgument("series order must be at least 1".into()));
    }
    let order = order.min(tolerances::SERIES_ORDER_MAX);
    let mut sum = Operator::zeros(v.dim());
    if c == 0.0 {
        return Ok(sum);
    }
    let ic = C64::new(0.0, c);
    let mut nested = v_dot.clone();
    let mut coef = I * ic;
    for k in 1..=order {
        let term = nested.scale(coef);
        sum += &term;
        let tn = term.frobenius_norm();
        if tn <= tolerances::SERIES_CONVERGENCE * sum.frobenius_norm() {
            break;
        }
        nested = commutator(v, &nested)?;
        coef *= ic / (k + 1) as f64;
    }
    Ok(sum.hermitian_part())
}

/// sin x / x
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

/// (x − sin x)/x³
fn sinc_defect(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ (−1)^k x^{2k}/(2k+3)!
        let x2 = x * x;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for k in 1..12 {
            term *= -x2 / ((2 * k + 2) * (2 * k + 3)) as f64;
            sum += term;
        }
        sum
    } else {
        (x - x.sin()) / x.powi(3)
    }
}

/// (1 − cos x)/x²
fn cos_defect(x: f64) -> f64 {
    0.5 * sinc(0.5 * x).powi(2)
}

/// The vector X with W = F·X for a spin in a field B changing at rate Ḃ, at
/// κ = g_F c:
///
///   X = −κ (B·Ḃ)B/B² − sin(κB)[(B×Ḃ)×B]/B³ − [cos(κB) − 1](B×Ḃ)/B²
///
/// Grouped as −κ sinc(κB) Ḃ − κ³ (B·Ḃ) B (κB − sin κB)/(κB)³
/// + κ² (B×Ḃ)(1 − cos κB)/(κB)², every coefficient is regular at B → 0.
pub fn spin_x_vector(b: &Vec3, b_dot: &Vec3, kappa: f64) -> Vec3 {
    let x = kappa * b.norm();
    b_dot * (-kappa * sinc(x)) - b * (kappa.powi(3) * b.dot(b_dot) * sinc_defect(x))
        + b.cross(b_dot) * (kappa * kappa * cos_defect(x))
}

fn spin_w_at(sys: &SpinSystem, b: &Vec3, b_dot: &Vec3, c: f64) -> Operator {
    sys.f_dot(&spin_x_vector(b, b_dot, sys.g_factor() * c))
}

/// Closed-form W(θ′) for V = g_F F·B.
pub fn w_spin_closed(
    sys: &SpinSystem,
    b: &Vec3,
    b_dot: &Vec3,
    profile: &DrivingProfile,
    phase: f64,
) -> Operator {
    spin_w_at(sys, b, b_dot, profile.c(phase))
}

/// (1/2π)∫₀^{2π} W(θ′) e^{−inθ′} dθ′ on an M-point grid.
pub fn w_fourier(
    mode: i64,
    points: usize,
    w_of_phase: impl Fn(f64) -> Result<Operator>,
) -> Result<Operator> {
    if points == 0 || points < 4 * mode.unsigned_abs() as usize {
        return Err(Error::Undersampled { mode, grid: points });
    }
    let mut acc: Option<Operator> = None;
    for th in phase_grid(points) {
        let w = w_of_phase(th)?.scale(C64::from_polar(1.0, -(mode as f64) * th));
        match acc.as_mut() {
            Some(a) => *a += &w,
            None => acc = Some(w),
        }
    }
    let out = acc.expect("nonempty grid").scale_re(1.0 / points as f64);
    Ok(if mode == 0 { out.hermitian_part() } else { out })
}

fn bessel_points(a: f64) -> usize {
    64 + 2 * a.abs().ceil() as usize
}

/// J₀(a) = (1/2π)∫₀^{2π} e^{ia sinθ} dθ by the trapezoid rule.
pub fn bessel_j0(a: f64) -> f64 {
    let m = bessel_points(a);
    phase_grid(m).map(|th| (a * th.sin()).cos()).sum::<f64>() / m as f64
}

/// 1 − J₀(a), summed as the average of 2 sin²(a sinθ/2) to keep precision at small a.
pub fn one_minus_j0(a: f64) -> f64 {
    let m = bessel_points(a);
    phase_grid(m)
        .map(|th| 2.0 * (0.5 * a * th.sin()).sin().powi(2))
        .sum::<f64>()
        / m as f64
}

/// Zero mode for harmonic drive: [1 − J₀(g_F B/ω)]/B² · F·(B×Ḃ).
///
/// For B below 1e−8·ω/g_F the weak-driving limit (g_F²/4ω²)F·(B×Ḃ) is used.
pub fn w0_spin_harmonic(sys: &SpinSystem, b: &Vec3, b_dot: &Vec3, omega: f64) -> Operator {
    let g = sys.g_factor();
    let bn = b.norm();
    let w = b.cross(b_dot);
    if g == 0.0 {
        return Operator::zeros(sys.dim());
    }
    let prefactor = if bn < tolerances::SMALL_FIELD * omega / g.abs() {
        g * g / (4.0 * omega * omega)
    } else {
        one_minus_j0(g * bn / omega) / (bn * bn)
    };
    sys.f_dot(&(w * prefactor))
}

/// Zero-mode vector potential A⁽⁰⁾ = [1 − J₀(g_F B/ω)]/B² (F×B), one
/// operator per Cartesian component, so that W⁽⁰⁾ = Ḃ·A⁽⁰⁾.
pub fn vector_potential_spin(sys: &SpinSystem, b: &Vec3, omega: f64) -> [Operator; 3] {
    let bn = b.norm();
    let g = sys.g_factor();
    let pref = if bn == 0.0 || g == 0.0 {
        0.0
    } else {
        one_minus_j0(g * bn / omega) / (bn * bn)
    };
    let [fx, fy, fz] = [sys.fx(), sys.fy(), sys.fz()];
    // (F×B)_x = F_y B_z − F_z B_y, etc.
    let comp = |p: &Operator, bp: f64, q: &Operator, bq: f64| {
        (&p.scale_re(bp * pref) - &q.scale_re(bq * pref)).with_role(Role::Hermitian)
    };
    [
        comp(fy, b.z, fz, b.y),
        comp(fz, b.x, fx, b.z),
        comp(fx, b.y, fy, b.x),
    ]
}

/// −i p/(2ω²) [V, V̇].
pub fn weak_driving_w0(v: &Operator, v_dot: &Operator, p: f64, omega: f64) -> Result<Operator> {
    Ok(commutator(v, v_dot)?
        .scale(C64::new(0.0, -p / (2.0 * omega * omega)))
        .hermitian_part())
}

/// Blocks K_{nm} = nω δ_{nm} + W⁽ⁿ⁻ᵐ⁾ for |n|, |m| ≤ n_max.
#[derive(Debug, Clone)]
pub struct KMatrixBlock {
    pub n_max: usize,
    pub omega: f64,
    /// `blocks[i][j]` holds K_{nm} with n = i − n_max, m = j − n_max.
    pub blocks: Vec<Vec<Operator>>,
}

impl KMatrixBlock {
    pub fn block_dim(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn assemble(&self) -> Operator {
        let d = self.block_dim();
        let nb = self.blocks.len();
        Operator::from_fn(nb * d, |r, c| self.blocks[r / d][c / d].get(r % d, c % d))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let k = self.assemble();
        let scale = k.frobenius_norm();
        // tolerate the roundoff of the mode quadrature
        if k.hermitian_defect() > 1e-10 * scale.max(1.0) {
            return Err(Error::NotHermitian {
                defect: k.hermitian_defect() / scale,
            });
        }
        Ok(herm_eig(&k.hermitian_part())?.values)
    }
}

/// Extended-space Floquet matrix at one slow time, from a provider of W⁽ᵏ⁾.
pub fn k_matrix(
    n_max: usize,
    omega: f64,
    w_mode: impl Fn(i64) -> Result<Operator>,
) -> Result<KMatrixBlock> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let span = 2 * n_max as i64;
    let modes: Vec<Operator> = (-span..=span).map(&w_mode).collect::<Result<_>>()?;
    let nb = 2 * n_max + 1;
    let blocks = (0..nb)
        .map(|i| {
            (0..nb)
                .map(|j| {
                    let k = i as i64 - j as i64;
                    let w = &modes[(k + span) as usize];
                    if i == j {
                        let n = i as f64 - n_max as f64;
                        w + &Operator::identity(w.dim()).scale_re(n * omega)
                    } else {
                        w.clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(KMatrixBlock {
        n_max,
        omega,
        blocks,
    })
}

/// max over n ≠ 0 in `modes` and all matrix elements of |W⁽ⁿ⁾_{αβ}|/ω.
pub fn adiabaticity_check(
    modes: impl IntoIterator<Item = i64>,
    omega: f64,
    w_mode: impl Fn(i64) -> Result<Operator>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in modes.into_iter().filter(|&n| n != 0) {
        worst = worst.max(w_mode(n)?.max_abs() / omega);
    }
    Ok(worst)
}

/// A driven system viewed in the transformed frame: V(λ(t)), the drive and a
/// phase grid for period averages.
#[derive(Clone, Copy)]
pub struct TransformedFrame<'a> {
    pub map: VOperatorMap<'a>,
    pub profile: &'a DrivingProfile,
    pub phase_points: usize,
}

impl<'a> TransformedFrame<'a> {
    pub fn new(map: VOperatorMap<'a>, profile: &'a DrivingProfile) -> Self {
        Self {
            map,
            profile,
            phase_points: tolerances::PHASE_GRID_DEFAULT,
        }
    }

    pub fn with_phase_points(mut self, points: usize) -> Self {
        self.phase_points = points;
        self
    }

    pub fn omega(&self) -> f64 {
        self.profile.omega()
    }

    /// W(θ′, t), using the operator family's preferred evaluation.
    pub fn w(&self, phase: f64, t: f64) -> Result<Operator> {
        let lambda = self.map.path.lambda(t);
        let rate = self.map.path.lambda_dot(t);
        self.map
            .operator
            .transformed_generator(&lambda, &rate, self.profile.c(phase))
    }

    /// W along the physical time axis, W(ωt + θ, t).
    pub fn w_at(&self, t: f64) -> Result<Operator> {
        self.w(self.profile.phase(t), t)
    }

    pub fn w_mode(&self, mode: i64, t: f64) -> Result<Operator> {
        let lambda = self.map.path.lambda(t);
        let rate = self.map.path.lambda_dot(t);
        if rate.iter().all(|&x| x == 0.0) {
            return Ok(Operator::zeros(self.map.dim()));
        }
        w_fourier(mode, self.phase_points, |th| {
            self.map
                .operator
                .transformed_generator(&lambda, &rate, self.profile.c(th))
        })
    }

    /// Effective Hamiltonian W⁽⁰⁾(t).
    pub fn w0(&self, t: f64) -> Result<Operator> {
        self.w_mode(0, t)
    }

    pub fn k_matrix(&self, t: f64, n_max: usize) -> Result<KMatrixBlock> {
        k_matrix(n_max, self.omega(), |n| self.w_mode(n, t))
    }

    /// Adiabaticity measure over modes 1…n_max and their negatives.
    pub fn adiabaticity(&self, t: f64, n_max: i64) -> Result<f64> {
        adiabaticity_check((-n_max..=n_max).filter(|&n| n != 0), self.omega(), |n| {
            self.w_mode(n, t)
        })
    }

    /// S = (𝓕(θ′)/ω) V(λ(t)).
    pub fn micromotion(&self, phase: f64, t: f64) -> Operator {
        micromotion(&self.map.v_at(t), self.profile, phase)
    }
}

/// S = (𝓕(θ′)/ω) V, so that R = exp(−iS).
pub fn micromotion(v: &Operator, profile: &DrivingProfile, phase: f64) -> Operator {
    v.scale_re(profile.c(phase)).with_role(Role::Hermitian)
}

/// S = (𝓕(θ′)/ω) g_F F·B.
pub fn micromotion_s(sys: &SpinSystem, b: &Vec3, profile: &DrivingProfile, phase: f64) -> Operator {
    micromotion(&sys.zeeman(b), profile, phase)
}

/// Duration of one drive period.
pub fn period(omega: f64) -> f64 {
    TAU / omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driving::harmonic_profile;
    use crate::smallmat::dist;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    struct Linear {
        b: Vec3,
        b_dot: Vec3,
    }

    impl ParameterPath for Linear {
        fn lambda(&self, t: f64) -> Vec<f64> {
            (self.b + self.b_dot * t).as_slice().to_vec()
        }
        fn lambda_dot(&self, _t: f64) -> Vec<f64> {
            self.b_dot.as_slice().to_vec()
        }
    }

    /// Forces the finite-difference route for a spin.
    struct NumericSpin(SpinSystem);

    impl SlowOperator for NumericSpin {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn n_params(&self) -> usize {
            3
        }
        fn operator(&self, lambda: &[f64]) -> Operator {
            self.0.zeeman(&Vec3::from_column_slice(lambda))
        }
    }

    fn rand_vec(rng: &mut impl Rng, scale: f64) -> Vec3 {
        Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ) * scale
    }

    #[test]
    fn r_is_identity_at_zero_primitive() {
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(2.0, 0.0).unwrap();
        let r = r_operator(&prof, &sys.zeeman(&Vec3::new(0.3, 1.0, -0.2)), 0.0).unwrap();
        assert!(dist(&r, &Operator::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn r_for_diagonal_generator() {
        let g = 0.8;
        let b0 = 1.7;
        let sys = SpinSystem::new(1.0, g).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let r = r_operator(&prof, &sys.zeeman(&Vec3::new(0.0, 0.0, b0)), PI / 2.0).unwrap();
        let expect = Operator::diagonal(
            &[1.0, 0.0, -1.0].map(|m: f64| C64::from_polar(1.0, -g * b0 * m)),
        );
        assert!(dist(&r, &expect).unwrap() < 1e-14);
    }

    #[test]
    fn r_is_unitary_for_random_v() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sys = SpinSystem::new(0.5, 1.3).unwrap();
        let prof = harmonic_profile(0.7, 0.4).unwrap();
        for _ in 0..10 {
            let v = sys.zeeman(&rand_vec(&mut rng, 3.0));
            let r = r_operator(&prof, &v, rng.random_range(0.0..TAU)).unwrap();
            assert!(r.unitary_defect() < 1e-10);
        }
    }

    #[test]
    fn w_numeric_zero_cases() {
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let still = ConstantPath(vec![0.2, 0.5, 1.0]);
        let map = VOperatorMap::new(&sys, &still);
        assert_eq!(w_numeric(&map, &prof, 1.0, 0.0).unwrap().frobenius_norm(), 0.0);

        let moving = Linear {
            b: Vec3::new(0.2, 0.5, 1.0),
            b_dot: Vec3::new(0.1, -0.3, 0.2),
        };
        let map = VOperatorMap::new(&sys, &moving);
        assert_eq!(w_numeric(&map, &prof, 0.0, 0.0).unwrap().frobenius_norm(), 0.0);
        // sin(π) is only zero to roundoff
        assert!(w_numeric(&map, &prof, PI, 0.0).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn w_numeric_matches_closed_form_for_spin_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        for _ in 0..20 {
            let b = rand_vec(&mut rng, 2.0);
            let b_dot = rand_vec(&mut rng, 0.5);
            let path = Linear { b, b_dot };
            let map = VOperatorMap::new(&sys, &path);
            let th = rng.random_range(0.0..TAU);
            let num = w_numeric(&map, &prof, th, 0.0).unwrap();
            let closed = w_spin_closed(&sys, &b, &b_dot, &prof, th);
            assert!(dist(&num, &closed).unwrap() < 1e-6);
            assert!(num.hermitian_defect() < 1e-10);
        }
    }

    #[test]
    fn w_series_zero_and_commuting() {
        let sys = SpinSystem::new(1.5, 1.0).unwrap();
        let v = sys.zeeman(&Vec3::new(0.0, 0.0, 1.2));
        let v_dot = sys.zeeman(&Vec3::new(0.0, 0.0, -0.4));
        assert_eq!(w_series(0.0, &v, &v_dot, 12).unwrap().frobenius_norm(), 0.0);
        for order in [1, 5, 12] {
            let w = w_series(0.7, &v, &v_dot, order).unwrap();
            assert!(dist(&w, &v_dot.scale_re(-0.7)).unwrap() < 1e-15);
        }
        assert!(w_series(0.7, &v, &v_dot, 0).is_err());
    }

    #[test]
    fn w_series_matches_numeric_small_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let sys = SpinSystem::new(0.5, 1.0).unwrap();
        let num_sys = NumericSpin(sys.clone());
        for _ in 0..10 {
            let b = rand_vec(&mut rng, 1.0);
            let b_dot = rand_vec(&mut rng, 1.0);
            // |c| g |B| = 0.1
            let c = 0.1 / (sys.g_factor() * b.norm());
            let v = sys.zeeman(&b);
            let v_dot = sys.zeeman(&b_dot);
            let series = w_series(c, &v, &v_dot, 8).unwrap();
            let num =
                w_finite_difference(&num_sys, b.as_slice(), b_dot.as_slice(), c).unwrap();
            assert!(dist(&series, &num).unwrap() < 1e-8);
        }
    }

    #[test]
    fn closed_form_zero_and_parallel_cases() {
        let sys = SpinSystem::new(1.0, 1.4).unwrap();
        let prof = harmonic_profile(1.0, 0.3).unwrap();
        let b = Vec3::new(0.3, -0.4, 1.2);
        assert_eq!(
            w_spin_closed(&sys, &b, &Vec3::zeros(), &prof, 1.0).frobenius_norm(),
            0.0
        );
        // B ∥ Ḃ: only −(g𝓕/ω)(Ḃ·b̂)F·b̂ survives, and it averages to zero
        let b_dot = b * 0.25;
        let th = 0.9;
        let w = w_spin_closed(&sys, &b, &b_dot, &prof, th);
        let bhat = b / b.norm();
        let expect = sys.f_dot(&bhat).scale_re(-1.4 * prof.c(th) * b_dot.dot(&bhat));
        assert!(dist(&w, &expect).unwrap() < 1e-14);
        let w0 = w_fourier(0, 256, |t| Ok(w_spin_closed(&sys, &b, &b_dot, &prof, t))).unwrap();
        assert!(w0.frobenius_norm() < 1e-14);
    }

    #[test]
    fn closed_form_regular_at_vanishing_field() {
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let b_dot = Vec3::new(0.2, -0.1, 0.5);
        let th = 1.1;
        // B → 0: W → −(g𝓕/ω) F·Ḃ
        let w = w_spin_closed(&sys, &Vec3::zeros(), &b_dot, &prof, th);
        let expect = sys.f_dot(&b_dot).scale_re(-prof.c(th));
        assert!(dist(&w, &expect).unwrap() < 1e-15);
        // corrections are O(κ²|B||Ḃ|)
        let tiny = w_spin_closed(&sys, &Vec3::new(1e-9, 0.0, 2e-9), &b_dot, &prof, th);
        assert!(dist(&tiny, &expect).unwrap() < 1e-8);
    }

    #[test]
    fn first_series_term_has_no_zero_mode() {
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let v = sys.zeeman(&Vec3::new(0.5, 0.1, 0.9));
        let v_dot = sys.zeeman(&Vec3::new(-0.2, 0.6, 0.1));
        let w0 = w_fourier(0, 256, |th| w_series(prof.c(th), &v, &v_dot, 1)).unwrap();
        assert!(w0.frobenius_norm() <= 1e-10);
    }

    #[test]
    fn fourier_zero_mode_matches_bessel_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = 1.0;
        let omega = 1.0;
        let sys = SpinSystem::new(1.0, g).unwrap();
        let prof = harmonic_profile(omega, 0.0).unwrap();
        for a in [0.0, 0.3, 1.0, 2.405, 3.83, 6.0] {
            let dir = rand_vec(&mut rng, 1.0).normalize();
            let b = dir * (a * omega / g);
            let b_dot = rand_vec(&mut rng, 0.3);
            let w0 = w_fourier(0, 256, |th| Ok(w_spin_closed(&sys, &b, &b_dot, &prof, th))).unwrap();
            let bessel = w0_spin_harmonic(&sys, &b, &b_dot, omega);
            assert!(dist(&w0, &bessel).unwrap() < 1e-8, "a = {a}");
        }
    }

    #[test]
    fn w0_spin_limits() {
        let g = 1.3;
        let omega = 2.0;
        let sys = SpinSystem::new(1.0, g).unwrap();
        // prefactor → g²/4ω² as a → 0
        let b_dot = Vec3::new(0.0, 0.4, 0.0);
        let b = Vec3::new(1e-5, 0.0, 0.0);
        let w = w0_spin_harmonic(&sys, &b, &b_dot, omega);
        let weak = sys.f_dot(&(b.cross(&b_dot) * (g * g / (4.0 * omega * omega))));
        assert!(dist(&w, &weak).unwrap() < 1e-9 * weak.frobenius_norm());
        // below the switch it is exactly the weak form
        let b = Vec3::new(1e-10, 0.0, 0.0);
        let weak = sys.f_dot(&(b.cross(&b_dot) * (g * g / (4.0 * omega * omega))));
        assert_eq!(w0_spin_harmonic(&sys, &b, &b_dot, omega), weak);
        // B ∥ Ḃ
        let b = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(w0_spin_harmonic(&sys, &b, &b_dot, omega).frobenius_norm(), 0.0);
    }

    #[test]
    fn w0_at_first_bessel_zero_rotates_with_field() {
        // a = 2.405: prefactor·B² = 1 − J₀ ≈ 1, so W⁽⁰⁾ ≈ Ω F·n
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let omega_rot = 0.05;
        let b = Vec3::new(0.0, 0.0, 2.405);
        let b_dot = Vec3::new(omega_rot * 2.405, 0.0, 0.0);
        let w = w0_spin_harmonic(&sys, &b, &b_dot, 1.0);
        let expect = sys.f_dot(&Vec3::new(0.0, omega_rot, 0.0));
        assert!(dist(&w, &expect).unwrap() < 5e-4 * expect.frobenius_norm());
    }

    fn j0_series(a: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let q = (a / 2.0).powi(2);
        for k in 1..80 {
            term *= -q / (k * k) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!(bessel_j0(2.405).abs() < 5e-4);
        assert!((bessel_j0(3.8317) + 0.4028).abs() < 1e-3);
        for k in 0..=160 {
            let a = -8.0 + 0.1 * k as f64;
            assert!((bessel_j0(a) - j0_series(a)).abs() < 1e-10, "a = {a}");
            assert!((one_minus_j0(a) - (1.0 - j0_series(a))).abs() < 1e-10);
        }
        let a: f64 = 1e-4;
        assert!((one_minus_j0(a) / (a * a / 4.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn weak_driving_examples() {
        let sys = SpinSystem::new(1.0, 0.9).unwrap();
        let v = sys.zeeman(&Vec3::new(0.0, 0.0, 1.0));
        let v_dot = sys.zeeman(&Vec3::new(0.0, 0.0, 0.3));
        assert!(weak_driving_w0(&v, &v_dot, 0.5, 1.0).unwrap().frobenius_norm() < 1e-15);

        // harmonic spin: −i(1/2)/(2ω²)·g²[F·B, F·Ḃ] = (g²/4ω²)F·(B×Ḃ)
        let omega = 1.7;
        let b = Vec3::new(0.3, 0.2, 0.8);
        let b_dot = Vec3::new(-0.5, 0.4, 0.1);
        let w = weak_driving_w0(&sys.zeeman(&b), &sys.zeeman(&b_dot), 0.5, omega).unwrap();
        let expect = sys.f_dot(&(b.cross(&b_dot) * (0.81 / (4.0 * omega * omega))));
        assert!(dist(&w, &expect).unwrap() < 1e-14);
    }

    #[test]
    fn weak_driving_agrees_with_series_zero_mode() {
        let g = 1.0;
        let omega = 1.0;
        let sys = SpinSystem::new(1.0, g).unwrap();
        let prof = harmonic_profile(omega, 0.0).unwrap();
        let b = Vec3::new(0.0, 0.0, 0.05);
        let b_dot = Vec3::new(0.04, 0.01, 0.0);
        let v = sys.zeeman(&b);
        let v_dot = sys.zeeman(&b_dot);
        let series0 = w_fourier(0, 256, |th| w_series(prof.c(th), &v, &v_dot, 12)).unwrap();
        let weak = weak_driving_w0(&v, &v_dot, prof.p_factor(), omega).unwrap();
        let rel = dist(&series0, &weak).unwrap() / weak.frobenius_norm();
        assert!(rel < 1e-2, "rel {rel}");
    }

    #[test]
    fn first_modes_follow_weak_driving_estimate() {
        // W⁽ᵐ⁾ ≈ i V̇ f⁽ᵐ⁾/(mω) at small a
        let sys = SpinSystem::new(0.5, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let b = Vec3::new(0.0, 0.02, 0.03);
        let b_dot = Vec3::new(0.01, 0.0, -0.02);
        let v_dot = sys.zeeman(&b_dot);
        for m in [1i64, -1] {
            let wm = w_fourier(m, 256, |th| Ok(w_spin_closed(&sys, &b, &b_dot, &prof, th))).unwrap();
            let est = v_dot.scale(I * prof.drive_coeff(m) / (m as f64));
            let rel = dist(&wm, &est).unwrap() / est.frobenius_norm();
            assert!(rel < 1e-2, "m = {m}, rel {rel}");
        }
    }

    #[test]
    fn vector_potential_reproduces_zero_mode() {
        let sys = SpinSystem::new(1.5, 0.8).unwrap();
        let b = Vec3::new(0.4, -1.1, 0.7);
        let b_dot = Vec3::new(0.2, 0.1, -0.3);
        let a0 = vector_potential_spin(&sys, &b, 1.3);
        let mut w = Operator::zeros(sys.dim());
        for (comp, rate) in a0.iter().zip(b_dot.iter()) {
            w += &comp.scale_re(*rate);
        }
        let expect = w0_spin_harmonic(&sys, &b, &b_dot, 1.3);
        assert!(dist(&w, &expect).unwrap() < 1e-14);
    }

    #[test]
    fn k_matrix_static_bands() {
        let omega = 1.5;
        let k = k_matrix(2, omega, |_| Ok(Operator::zeros(3))).unwrap();
        let ev = k.eigenvalues().unwrap();
        for (i, e) in ev.iter().enumerate() {
            let n = (i / 3) as f64 - 2.0;
            assert!((e - n * omega).abs() < 1e-12);
        }
        assert!(k_matrix(0, omega, |_| Ok(Operator::zeros(3))).is_err());
    }

    #[test]
    fn k_matrix_hermitian_and_clustered() {
        let sys = SpinSystem::new(0.5, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let path = Linear {
            b: Vec3::new(0.0, 0.0, 1.0),
            b_dot: Vec3::new(0.02, 0.0, 0.0),
        };
        let frame = TransformedFrame::new(VOperatorMap::new(&sys, &path), &prof);
        let k = frame.k_matrix(0.0, 1).unwrap();
        assert!(k.assemble().hermitian_defect() <= 1e-10);
        assert!(frame.adiabaticity(0.0, 2).unwrap() < 0.05);
        let ev = k.eigenvalues().unwrap();
        for (i, e) in ev.iter().enumerate() {
            let n = (i / 2) as f64 - 1.0;
            assert!((e - n).abs() < 0.05, "{ev:?}");
        }
    }

    #[test]
    fn adiabaticity_scales_with_rate() {
        let sys = SpinSystem::new(1.0, 1.0).unwrap();
        let prof = harmonic_profile(1.0, 0.0).unwrap();
        let b = Vec3::new(0.0, 0.0, 1.0);
        let slow = Linear {
            b,
            b_dot: Vec3::new(0.01, 0.0, 0.0),
        };
        let fast = Linear {
            b,
            b_dot: Vec3::new(0.02, 0.0, 0.0),
        };
        let m1 = TransformedFrame::new(VOperatorMap::new(&sys, &slow), &prof)
            .adiabaticity(0.0, 3)
            .unwrap();
        let m2 = TransformedFrame::new(VOperatorMap::new(&sys, &fast), &prof)
            .adiabaticity(0.0, 3)
            .unwrap();
        assert!((m2 / m1 - 2.0).abs() < 0.1);

        let still = ConstantPath(vec![0.0, 0.0, 1.0]);
        let m0 = TransformedFrame::new(VOperatorMap::new(&sys, &still), &prof)
            .adiabaticity(0.0, 3)
            .unwrap();
        assert_eq!(m0, 0.0);
    }

    #[test]
    fn micromotion_examples() {
        let sys = SpinSystem::new(1.0, 1.2).unwrap();
        let prof = harmonic_profile(1.5, 0.0).unwrap();
        assert_eq!(
            micromotion_s(&sys, &Vec3::zeros(), &prof, 1.0).frobenius_norm(),
            0.0
        );
        let b = Vec3::new(0.5, -0.3, 0.8);
        assert_eq!(micromotion_s(&sys, &b, &prof, 0.0).frobenius_norm(), 0.0);
        let th = 0.77;
        let s = micromotion_s(&sys, &b, &prof, th);
        let r = r_operator(&prof, &sys.zeeman(&b), th).unwrap();
        assert!(dist(&r, &unitary_exp(&s, 1.0).unwrap()).unwrap() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vec3(scale: f64) -> impl Strategy<Value = Vec3> {
            (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, z)| Vec3::new(x, y, z))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn oracle_triangle(b in vec3(0.6), b_dot in vec3(1.0), th in 0.0..TAU, twice in 1u32..4) {
                let sys = SpinSystem::new(twice as f64 / 2.0, 1.0).unwrap();
                let num_sys = NumericSpin(sys.clone());
                let prof = harmonic_profile(1.0, 0.0).unwrap();
                let c = prof.c(th);
                let closed = w_spin_closed(&sys, &b, &b_dot, &prof, th);
                let series = w_series(c, &sys.zeeman(&b), &sys.zeeman(&b_dot), 20).unwrap();
                let num = w_finite_difference(&num_sys, b.as_slice(), b_dot.as_slice(), c).unwrap();
                prop_assert!(dist(&closed, &series).unwrap() < 1e-8);
                prop_assert!(dist(&closed, &num).unwrap() < 1e-6);
                prop_assert!(closed.hermitian_defect() <= 1e-10);
            }
        }
    }
}
