//! Rotations, polar frames, the structural matrix fields `Σ`, `N`, `T`, and
//! sampled symmetry-adaptation checks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVec2 = Vector2<C64>;
pub type CMat2 = Matrix2<C64>;
pub type RVec2 = Vector2<f64>;
pub type RMat2 = Matrix2<f64>;

/// Seed used by every sampled check unless `DERHAM_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 20260326;

/// Sampling seed, honouring the `DERHAM_SEED` environment variable.
pub fn sampling_seed() -> u64 {
    std::env::var("DERHAM_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// A point `(x, y)` of the plane; evaluators accept any finite point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Self { x: r * theta.cos(), y: r * theta.sin() }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// `r² = x² + y²`.
    pub fn r2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn theta(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotated(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    pub fn as_vec(&self) -> RVec2 {
        RVec2::new(self.x, self.y)
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Rotation matrix `ρ(φ)`.
pub fn rot(phi: f64) -> RMat2 {
    let (s, c) = phi.sin_cos();
    RMat2::new(c, -s, s, c)
}

/// Polar frame `(e_r, e_θ)` at a point other than the origin.
pub fn frame(p: DiskPoint) -> Result<(RVec2, RVec2)> {
    let r = p.r();
    if r == 0.0 {
        return Err(Error::FrameUndefined);
    }
    Ok((RVec2::new(p.x / r, p.y / r), RVec2::new(-p.y / r, p.x / r)))
}

/// `Σ(x, y) = [[x² - y², 2xy], [2xy, y² - x²]]`.
pub fn sigma(p: DiskPoint) -> RMat2 {
    let (x, y) = (p.x, p.y);
    RMat2::new(x * x - y * y, 2.0 * x * y, 2.0 * x * y, y * y - x * x)
}

/// Weight making vector polynomials normal on the unit circle.
pub fn n_weight(p: DiskPoint) -> RMat2 {
    let (x, y) = (p.x, p.y);
    RMat2::new(1.0 - y * y, x * y, x * y, 1.0 - x * x)
}

/// Weight making vector polynomials tangential on the unit circle.
pub fn t_weight(p: DiskPoint) -> RMat2 {
    let (x, y) = (p.x, p.y);
    RMat2::new(1.0 - x * x, -x * y, -x * y, 1.0 - y * y)
}

pub fn complexify(m: &RMat2) -> CMat2 {
    m.map(|v| C64::new(v, 0.0))
}

pub fn complexify_vec(v: &RVec2) -> CVec2 {
    v.map(|x| C64::new(x, 0.0))
}

/// Scalar, vector or matrix values of a field, with the rotation action that
/// defines symmetry adaptation.
pub trait FieldValue: Copy + Send + Sync + 'static {
    fn zero() -> Self;
    /// Euclidean (Frobenius) norm.
    fn magnitude(&self) -> f64;
    /// Residual of the symmetry-adaptation identity given `f(ρp)` and `f(p)`.
    fn symmetry_residual(at_rotated: &Self, at_base: &Self, rho: &RMat2, phase: C64) -> f64;
}

impl FieldValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn symmetry_residual(at_rotated: &Self, at_base: &Self, _rho: &RMat2, phase: C64) -> f64 {
        (at_rotated - at_base * phase).norm()
    }
}

impl FieldValue for CVec2 {
    fn zero() -> Self {
        CVec2::zeros()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn symmetry_residual(at_rotated: &Self, at_base: &Self, rho: &RMat2, phase: C64) -> f64 {
        (at_rotated - complexify(rho) * at_base * phase).norm()
    }
}

impl FieldValue for CMat2 {
    fn zero() -> Self {
        CMat2::zeros()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn symmetry_residual(at_rotated: &Self, at_base: &Self, rho: &RMat2, phase: C64) -> f64 {
        let rc = complexify(rho);
        (at_rotated * rc - rc * at_base * phase).norm()
    }
}

/// Closed-form evaluator on the plane with its true polynomial degree and mode.
#[derive(Clone)]
pub struct Field<V> {
    f: Arc<dyn Fn(DiskPoint) -> V + Send + Sync>,
    pub degree: usize,
    pub mode: i32,
}

pub type ScalarField = Field<C64>;
pub type VectorField = Field<CVec2>;
pub type MatrixField = Field<CMat2>;

impl<V: FieldValue> Field<V> {
    pub fn new<F>(degree: usize, mode: i32, f: F) -> Self
    where
        F: Fn(DiskPoint) -> V + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), degree, mode }
    }

    pub fn eval(&self, p: DiskPoint) -> V {
        (self.f)(p)
    }
}

impl<V> fmt::Debug for Field<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("degree", &self.degree)
            .field("mode", &self.mode)
            .finish()
    }
}

/// Deterministic uniform samples `(p, φ)` with `|p| ≤ 0.95` and `φ ∈ [0, 2π)`.
pub fn sample_points(samples: usize, seed: u64) -> Vec<(DiskPoint, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let r = 0.95 * rng.gen::<f64>().sqrt();
            let th = 2.0 * PI * rng.gen::<f64>();
            let phi = 2.0 * PI * rng.gen::<f64>();
            (DiskPoint::polar(r, th), phi)
        })
        .collect()
}

/// Max residual of `f(ρ(φ)p) = [ρ(φ)·] f(p) [·ρ(φ)ᵀ] e^{imφ}` over random samples.
pub fn check_symmetry_adapted<V: FieldValue>(f: &Field<V>, m: i32, samples: usize) -> f64 {
    sample_points(samples, sampling_seed())
        .into_iter()
        .map(|(p, phi)| {
            let rho = rot(phi);
            let phase = C64::from_polar(1.0, m as f64 * phi);
            V::symmetry_residual(&f.eval(p.rotated(phi)), &f.eval(p), &rho, phase)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rotations() {
        assert_eq!(rot(0.0), RMat2::identity());
        let q = rot(PI / 2.0);
        assert_relative_eq!(q, RMat2::new(0.0, -1.0, 1.0, 0.0), epsilon = 1e-15);
        assert_relative_eq!(rot(0.3) * rot(1.1), rot(1.4), epsilon = 1e-15);
    }

    #[test]
    fn frames() {
        let (er, et) = frame(DiskPoint::new(1.0, 0.0)).unwrap();
        assert_eq!((er, et), (RVec2::new(1.0, 0.0), RVec2::new(0.0, 1.0)));
        let (er, et) = frame(DiskPoint::new(0.0, 2.0)).unwrap();
        assert_eq!((er, et), (RVec2::new(0.0, 1.0), RVec2::new(-1.0, 0.0)));
        assert_eq!(frame(DiskPoint::new(0.0, 0.0)), Err(Error::FrameUndefined));
    }

    #[test]
    fn structural_matrices() {
        assert_eq!(sigma(DiskPoint::new(1.0, 0.0)), RMat2::new(1.0, 0.0, 0.0, -1.0));
        assert_relative_eq!(
            n_weight(DiskPoint::new(0.6, 0.8)),
            RMat2::new(0.36, 0.48, 0.48, 0.64),
            epsilon = 1e-15
        );
        let p = DiskPoint::new(0.3, 0.4);
        assert_relative_eq!(t_weight(p) * n_weight(p), RMat2::identity() * 0.75, epsilon = 1e-15);
    }

    #[test]
    fn non_adapted_constant() {
        let f = VectorField::new(0, 0, |_| CVec2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        assert!(check_symmetry_adapted(&f, 0, 50) > 0.1);
        let z = VectorField::new(0, 3, |_| CVec2::zeros());
        assert_eq!(check_symmetry_adapted(&z, 3, 50), 0.0);
    }
}
