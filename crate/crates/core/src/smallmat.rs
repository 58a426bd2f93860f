//! Dense complex matrices for the small operators used throughout the crate.
//!
//! Everything here works in units with ℏ = 1. Matrices are a few states wide,
//! so eigendecompositions are cheap and every Hermitian exponential is taken
//! spectrally, which keeps propagators unitary to machine precision.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// What is known about an operator. Informational; checks are numerical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    General,
    Hermitian,
    Unitary,
}

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    role: Role,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({:?}, {}x{})", self.role, self.dim(), self.dim())?;
        for r in 0..self.dim() {
            write!(f, "\n ")?;
            for c in 0..self.dim() {
                let z = self.mat[(r, c)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
            role: Role::Hermitian,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
            role: Role::Unitary,
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            mat: DMatrix::from_fn(dim, dim, f),
            role: Role::General,
        }
    }

    /// Row-major entries; panics unless `entries.len()` is a perfect square.
    pub fn from_row_major(entries: &[C64]) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entry count must be a square");
        Self::from_fn(dim, |r, c| entries[r * dim + c])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |r, c| if r == c { diag[r] } else { C64::new(0.0, 0.0) })
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diagonal(&d).with_role(Role::Hermitian)
    }

    pub fn from_matrix(mat: DMatrix<C64>) -> Self {
        assert!(mat.is_square(), "operator must be square");
        Self {
            mat,
            role: Role::General,
        }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n * n).map(|k| self.mat[(k / n, k % n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            role: self.role,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let role = match self.role {
            Role::Hermitian if s.im == 0.0 => Role::Hermitian,
            _ => Role::General,
        };
        Self {
            mat: &self.mat * s,
            role,
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖A − A†‖_F.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖A†A − I‖_F.
    pub fn unitary_defect(&self) -> f64 {
        let n = self.dim();
        (self.mat.adjoint() * &self.mat - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// (A + A†)/2, flagged Hermitian.
    pub fn hermitian_part(&self) -> Self {
        Self {
            mat: (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0),
            role: Role::Hermitian,
        }
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        StateVector(&self.mat * &v.0)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Hermitian && rhs.role == Role::Hermitian {
            Role::Hermitian
        } else {
            Role::General
        };
        Operator {
            mat: &self.mat + &rhs.mat,
            role,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Hermitian && rhs.role == Role::Hermitian {
            Role::Hermitian
        } else {
            Role::General
        };
        Operator {
            mat: &self.mat - &rhs.mat,
            role,
        }
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        self.mat += &rhs.mat;
        if rhs.role != Role::Hermitian || self.role != Role::Hermitian {
            self.role = Role::General;
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Unitary && rhs.role == Role::Unitary {
            Role::Unitary
        } else {
            Role::General
        };
        Operator {
            mat: &self.mat * &rhs.mat,
            role,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator {
            mat: -&self.mat,
            role: if self.role == Role::Hermitian {
                Role::Hermitian
            } else {
                Role::General
            },
        }
    }
}

/// Column state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    pub fn from_amplitudes(amps: &[C64]) -> Self {
        Self(DVector::from_column_slice(amps))
    }

    /// Unit vector along basis state `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.0 - &other.0).norm()
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: Operator,
}

impl HermEig {
    /// Q·diag(g(λ))·Q†.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> C64) -> Operator {
        let q = self.vectors.matrix();
        let n = q.nrows();
        let mut scaled = q.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let gj = g(lam);
            for i in 0..n {
                scaled[(i, j)] *= gj;
            }
        }
        Operator::from_matrix(scaled * q.adjoint())
    }
}

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
pub fn herm_eig(a: &Operator) -> Result<HermEig> {
    let scale = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > tolerances::HERMITIAN_REL * scale.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotHermitian {
            defect: defect / scale,
        });
    }
    let n = a.dim();
    if scale == 0.0 {
        return Ok(HermEig {
            values: vec![0.0; n],
            vectors: Operator::identity(n),
        });
    }
    let sym = a.hermitian_part();
    let eig = nalgebra::SymmetricEigen::new(sym.mat);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermEig {
        values,
        vectors: Operator::from_matrix(vectors).with_role(Role::Unitary),
    })
}

/// exp(−i·s·H) for Hermitian H.
pub fn unitary_exp(h: &Operator, s: f64) -> Result<Operator> {
    let eig = herm_eig(h)?;
    Ok(eig
        .map_spectrum(|lam| C64::from_polar(1.0, -s * lam))
        .with_role(Role::Unitary))
}

/// AB − BA.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.check_dims(b)?;
    Ok(Operator::from_matrix(&a.mat * &b.mat - &b.mat * &a.mat))
}

/// Frobenius distance ‖A − B‖_F.
pub fn dist(a: &Operator, b: &Operator) -> Result<f64> {
    a.check_dims(b)?;
    Ok((&a.mat - &b.mat)
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Eigenphases in (−π, π] and eigenvectors of a unitary matrix.
///
/// A unitary matrix is normal, so its complex Schur form is diagonal up to
/// roundoff and the Schur vectors are eigenvectors.
pub fn unitary_eigenphases(u: &Operator) -> (Vec<f64>, Operator) {
    let schur = nalgebra::Schur::new(u.mat.clone());
    let (q, t) = schur.unpack();
    let phases = (0..u.dim())
        .map(|k| {
            let p = t[(k, k)].arg();
            if p <= -std::f64::consts::PI {
                p + 2.0 * std::f64::consts::PI
            } else {
                p
            }
        })
        .collect();
    (phases, Operator::from_matrix(q).with_role(Role::Unitary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn random_hermitian(dim: usize, rng: &mut impl Rng) -> Operator {
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for r in 0..dim {
            m[(r, r)] = c(rng.random_range(-1.0..1.0), 0.0);
            for col in r + 1..dim {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(r, col)] = z;
                m[(col, r)] = z.conj();
            }
        }
        Operator::from_matrix(m).with_role(Role::Hermitian)
    }

    fn sigma_x() -> Operator {
        Operator::from_row_major(&[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    #[test]
    fn eig_of_diagonal_half() {
        let a = Operator::real_diagonal(&[0.5, -0.5]);
        let e = herm_eig(&a).unwrap();
        assert_eq!(e.values, vec![-0.5, 0.5]);
    }

    #[test]
    fn eig_of_half_sigma_x() {
        let e = herm_eig(&sigma_x().scale_re(0.5)).unwrap();
        assert!((e.values[0] + 0.5).abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(5, &mut rng);
        let e = herm_eig(&a).unwrap();
        let rebuilt = e.map_spectrum(|x| c(x, 0.0));
        assert!(dist(&a, &rebuilt).unwrap() <= 1e-12 * a.frobenius_norm());
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(e.vectors.unitary_defect() < 1e-12);
    }

    #[test]
    fn eig_of_real_diagonal_is_sorted_diagonal() {
        let d = [3.25, -1.5, 0.0, 7.0, -2.0];
        let e = herm_eig(&Operator::real_diagonal(&d)).unwrap();
        let mut sorted = d.to_vec();
        sorted.sort_by(f64::total_cmp);
        for (x, y) in e.values.iter().zip(&sorted) {
            assert!((x - y).abs() <= 1e-14);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = Operator::from_row_major(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        match herm_eig(&a) {
            Err(Error::NotHermitian { defect }) => assert!(defect > 0.5),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_hermitian(4, &mut rng);
        let u = unitary_exp(&h, 0.0).unwrap();
        assert!(dist(&u, &Operator::identity(4)).unwrap() < 1e-14);
    }

    #[test]
    fn exp_of_half_sigma_z_over_two_pi() {
        let h = Operator::real_diagonal(&[0.5, -0.5]);
        let u = unitary_exp(&h, 2.0 * std::f64::consts::PI).unwrap();
        assert!(dist(&u, &Operator::identity(2).scale_re(-1.0)).unwrap() < 1e-14);
    }

    fn taylor_exp(h: &Operator, s: f64) -> Operator {
        let gen = h.scale(c(0.0, -s));
        let mut term = Operator::identity(h.dim());
        let mut sum = term.clone();
        for k in 1..200 {
            term = (&term * &gen).scale_re(1.0 / k as f64);
            sum += &term;
            if term.frobenius_norm() < 1e-18 {
                break;
            }
        }
        sum
    }

    #[test]
    fn exp_matches_power_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let h = random_hermitian(4, &mut rng);
        let u = unitary_exp(&h, 0.37).unwrap();
        assert!(dist(&u, &taylor_exp(&h, 0.37)).unwrap() <= 1e-12);
        assert!(u.unitary_defect() < 1e-12);
        assert_eq!(u.role(), Role::Unitary);
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_hermitian(3, &mut rng);
        assert_eq!(commutator(&a, &a).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn dims_must_match() {
        let a = Operator::identity(2);
        let b = Operator::identity(3);
        assert!(matches!(commutator(&a, &b), Err(Error::DimMismatch { .. })));
        assert!(matches!(dist(&a, &b), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(&Operator::identity(3), &Operator::identity(3)).unwrap(), 0.0);
        let d = dist(&Operator::zeros(2), &sigma_x()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = unitary_exp(&random_hermitian(3, &mut rng), 1.3).unwrap();
        let alpha: f64 = 0.7;
        let phased = u.scale(C64::from_polar(1.0, alpha));
        let expected = (c(1.0, 0.0) - C64::from_polar(1.0, alpha)).norm() * u.frobenius_norm();
        assert!((dist(&u, &phased).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn eigenphases_of_diagonal_unitary() {
        let u = Operator::diagonal(&[C64::from_polar(1.0, 0.3), C64::from_polar(1.0, -2.9)]);
        let (mut p, _) = unitary_eigenphases(&u);
        p.sort_by(f64::total_cmp);
        assert!((p[0] + 2.9).abs() < 1e-14 && (p[1] - 0.3).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn exp_inverse_and_group_law(seed in any::<u64>(), s in -5.0f64..5.0, r in -5.0f64..5.0) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let h = random_hermitian(4, &mut rng);
                let fwd = unitary_exp(&h, s).unwrap();
                let back = unitary_exp(&h, -s).unwrap();
                prop_assert!(dist(&(&fwd * &back), &Operator::identity(4)).unwrap() <= 1e-10);
                let sum = unitary_exp(&h, s + r).unwrap();
                let prod = &fwd * &unitary_exp(&h, r).unwrap();
                prop_assert!(dist(&sum, &prod).unwrap() <= 1e-10);
            }
        }
    }
}
