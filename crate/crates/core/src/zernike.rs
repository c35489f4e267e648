//! Scalar, vector and matrix Zernike families for the weight `(1 - r²)^λ`.
//!
//! Every evaluator is a Cartesian closed form: the `r^{-1}`, `r^{-2}` and
//! `r^{-4}` prefactors of the polar definitions are cancelled symbolically so
//! the values are finite at the origin.

use std::fmt;

use crate::diskbases;
use crate::error::{Error, Result};
use crate::geometry::{
    CMat2, CVec2, DiskPoint, Field, MatrixField, ScalarField, VectorField, C64,
};
use crate::univariate::jacobi_int;

/// Sign label of the `±` recombinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Family tag of a [`ModeIndex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `z_{mj}^{(λ)} = P_j^{(λ,|m|)}(2r²-1) y_m`.
    ScalarZ { lambda: f64 },
    /// `w_{mj} = (1 - r²) z_{mj}^{(1)}`.
    WeightedW,
    VecZ { lambda: f64, nu: u8 },
    MatZ { lambda: f64, nu: u8 },
    /// `r^{2j} y_m` (vector harmonic analogue; `j ≥ 1` needed when `m = 0`).
    VecY,
    /// `r^{2j} Y_m` (matrix harmonic analogue; polynomial when `2j ≥ 2 - |m|`).
    MatY,
    /// `v_{mj}^{N,ν}`, orthogonal under the `N` weight.
    NormalV { nu: u8 },
    /// `n_{mj}^ν = N v_{mj}^{N,ν}`.
    NormalN { nu: u8 },
    NormalPm { sign: Sign },
    Tangential { sign: Sign },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::ScalarZ { lambda } => format!("z(lambda={lambda})"),
            Family::WeightedW => "w".into(),
            Family::VecZ { lambda, nu } => format!("vz{nu}(lambda={lambda})"),
            Family::MatZ { lambda, nu } => format!("mZ{nu}(lambda={lambda})"),
            Family::VecY => "vy".into(),
            Family::MatY => "mY".into(),
            Family::NormalV { nu } => format!("vN{nu}"),
            Family::NormalN { nu } => format!("n{nu}"),
            Family::NormalPm { sign } => format!("n{}", sign.symbol()),
            Family::Tangential { sign } => format!("t{}", sign.symbol()),
        }
    }
}

/// One basis element: Fourier mode `m`, radial index `j`, family tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub m: i32,
    pub j: usize,
    pub family: Family,
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[m={}, j={}]", self.family.name(), self.m, self.j)
    }
}

/// Values of any of the three field shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnyValue {
    Scalar(C64),
    Vector(CVec2),
    Matrix(CMat2),
}

impl AnyValue {
    /// Entries in row-major order.
    pub fn components(&self) -> Vec<C64> {
        match self {
            AnyValue::Scalar(c) => vec![*c],
            AnyValue::Vector(v) => vec![v[0], v[1]],
            AnyValue::Matrix(m) => vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
        }
    }
}

/// A field of any shape.
#[derive(Debug, Clone)]
pub enum AnyField {
    Scalar(ScalarField),
    Vector(VectorField),
    Matrix(MatrixField),
}

impl AnyField {
    pub fn eval(&self, p: DiskPoint) -> AnyValue {
        match self {
            AnyField::Scalar(f) => AnyValue::Scalar(f.eval(p)),
            AnyField::Vector(f) => AnyValue::Vector(f.eval(p)),
            AnyField::Matrix(f) => AnyValue::Matrix(f.eval(p)),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AnyField::Scalar(f) => f.degree,
            AnyField::Vector(f) => f.degree,
            AnyField::Matrix(f) => f.degree,
        }
    }
}

fn index_err(what: &str, m: i32, j: usize) -> Error {
    Error::Index(format!("{what} is undefined for m = {m}, j = {j}"))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > -1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("lambda = {lambda} must exceed -1")))
    }
}

fn check_nu(nu: u8, max: u8) -> Result<()> {
    if (1..=max).contains(&nu) {
        Ok(())
    } else {
        Err(Error::Index(format!("nu = {nu} must lie in 1..={max}")))
    }
}

/// `sign(m)` with `sign(0) = +1`.
pub fn sgn(m: i32) -> f64 {
    if m < 0 {
        -1.0
    } else {
        1.0
    }
}

fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl ModeIndex {
    pub fn new(m: i32, j: usize, family: Family) -> Self {
        Self { m, j, family }
    }

    /// Check the family-specific index ranges.
    pub fn validate(&self) -> Result<()> {
        let (m, j) = (self.m, self.j);
        let am = m.unsigned_abs() as usize;
        match self.family {
            Family::ScalarZ { lambda } => check_lambda(lambda),
            Family::WeightedW => Ok(()),
            Family::VecZ { lambda, nu } => {
                check_lambda(lambda)?;
                check_nu(nu, 2)?;
                let ok = match nu {
                    1 => m != 0 || j >= 1,
                    _ => j >= 1,
                };
                ok.then_some(()).ok_or_else(|| index_err("vector Zernike", m, j))
            }
            Family::MatZ { lambda, nu } => {
                check_lambda(lambda)?;
                check_nu(nu, 4)?;
                let ok = match nu {
                    1 => j + am.min(2) >= 2,
                    2 | 3 => j >= 1,
                    _ => j >= 2,
                };
                ok.then_some(()).ok_or_else(|| index_err("matrix Zernike", m, j))
            }
            Family::VecY => (m != 0 || j >= 1)
                .then_some(())
                .ok_or_else(|| Error::UseScaledForm("y_0 is singular; use r^{2k} y_0 with k >= 1".into())),
            Family::MatY => (am >= 2 || (am == 1 && j >= 1) || (am == 0 && j >= 2))
                .then_some(())
                .ok_or_else(|| Error::UseScaledForm(format!("Y_{m} needs a factor r^{{2k}}"))),
            Family::NormalV { nu } | Family::NormalN { nu } => {
                check_nu(nu, 2)?;
                let ok = if m == 0 { j >= 1 } else { nu == 1 || j >= 1 };
                ok.then_some(()).ok_or_else(|| index_err("normal family", m, j))
            }
            Family::NormalPm { sign } | Family::Tangential { sign } => {
                let ok = match sign {
                    Sign::Plus => j >= 1,
                    Sign::Minus => m != 0 || j >= 1,
                };
                ok.then_some(()).ok_or_else(|| index_err("recombined normal family", m, j))
            }
        }
    }

    /// True polynomial degree of the element.
    pub fn degree(&self) -> usize {
        let am = self.m.unsigned_abs() as usize;
        let two_j = 2 * self.j;
        match self.family {
            Family::ScalarZ { .. } => two_j + am,
            Family::WeightedW => two_j + am + 2,
            Family::VecZ { .. } | Family::NormalV { .. } => (two_j + am).saturating_sub(1),
            Family::MatZ { .. } => (two_j + am).saturating_sub(2),
            Family::VecY => (two_j + am).saturating_sub(1),
            Family::MatY => (two_j + am).saturating_sub(2),
            Family::NormalN { .. } | Family::NormalPm { .. } | Family::Tangential { .. } => {
                two_j + am + 1
            }
        }
    }

    /// Closed-form evaluator for this element.
    pub fn field(&self) -> Result<AnyField> {
        self.validate()?;
        let (m, j) = (self.m, self.j);
        let deg = self.degree();
        Ok(match self.family {
            Family::ScalarZ { lambda } => {
                AnyField::Scalar(Field::new(deg, m, move |p| z_eval(lambda, m, j, p)))
            }
            Family::WeightedW => AnyField::Scalar(Field::new(deg, m, move |p| w_eval(m, j, p))),
            Family::VecZ { lambda, nu } => AnyField::Vector(Field::new(deg, m, move |p| {
                vec_z_unchecked(lambda, m, j, nu, p)
            })),
            Family::MatZ { lambda, nu } => AnyField::Matrix(Field::new(deg, m, move |p| {
                mat_z_unchecked(lambda, m, j, nu, p)
            })),
            Family::VecY => AnyField::Vector(Field::new(deg, m, move |p| {
                if m == 0 {
                    scaled_vec_y0(j, p)
                } else {
                    vec_y_unchecked(m, p) * C64::from(p.r2().powi(j as i32))
                }
            })),
            Family::MatY => {
                AnyField::Matrix(Field::new(deg, m, move |p| scaled_mat_y_unchecked(m, j, p)))
            }
            Family::NormalV { nu } => AnyField::Vector(diskbases::normal_v_field(m, j, nu)?),
            Family::NormalN { nu } => AnyField::Vector(diskbases::normal_n_field(m, j, nu)?),
            Family::NormalPm { sign } => AnyField::Vector(diskbases::normal_pm_field(m, j, sign)?),
            Family::Tangential { sign } => {
                AnyField::Vector(diskbases::tangential_field(m, j, sign)?)
            }
        })
    }

    /// Evaluate at a point.
    pub fn eval(&self, p: DiskPoint) -> Result<AnyValue> {
        Ok(self.field()?.eval(p))
    }
}

/// `y_m = (x + sign(m) i y)^{|m|}`.
pub fn y_eval(m: i32, p: DiskPoint) -> C64 {
    cx(p.x, sgn(m) * p.y).powu(m.unsigned_abs())
}

fn jac(j: usize, lambda: f64, b: i32, r2: f64) -> f64 {
    jacobi_int(j, lambda, b, 2.0 * r2 - 1.0)
}

/// Generalised Zernike polynomial `z_{mj}^{(λ)}`.
pub fn z_eval(lambda: f64, m: i32, j: usize, p: DiskPoint) -> C64 {
    y_eval(m, p) * jac(j, lambda, m.abs(), p.r2())
}

/// Weighted Zernike polynomial `w_{mj} = (1 - r²) z_{mj}^{(1)}`, zero on `r = 1`.
pub fn w_eval(m: i32, j: usize, p: DiskPoint) -> C64 {
    z_eval(1.0, m, j, p) * (1.0 - p.r2())
}

fn vec_y_unchecked(m: i32, p: DiskPoint) -> CVec2 {
    let s = sgn(m);
    CVec2::new(cx(1.0, 0.0), cx(0.0, s)) * y_eval(m - s as i32, p)
}

/// `y_m = r^{|m|-1}(e_r + i sign(m) e_θ) e^{imθ}` for `m ≠ 0`.
pub fn vec_y_eval(m: i32, p: DiskPoint) -> Result<CVec2> {
    if m == 0 {
        return Err(Error::UseScaledForm(
            "y_0 is singular at the origin; use scaled_vec_y0_eval".into(),
        ));
    }
    Ok(vec_y_unchecked(m, p))
}

fn scaled_vec_y0(k: usize, p: DiskPoint) -> CVec2 {
    CVec2::new(cx(1.0, 0.0), cx(0.0, 1.0)) * cx(p.x, -p.y) * C64::from(p.r2().powi(k as i32 - 1))
}

/// `r^{2k} y_0`, with `r² y_0 = (x - iy, y + ix)ᵀ`.
pub fn scaled_vec_y0_eval(k: usize, p: DiskPoint) -> Result<CVec2> {
    if k == 0 {
        return Err(Error::UseScaledForm("r^{2k} y_0 needs k >= 1".into()));
    }
    Ok(scaled_vec_y0(k, p))
}

/// `Σ y_m`, polynomial for every `m` (with `Σ y_0 = (x + iy, y - ix)ᵀ`).
pub fn sigma_vec_y_eval(m: i32, p: DiskPoint) -> CVec2 {
    let s = sgn(m);
    CVec2::new(cx(1.0, 0.0), cx(0.0, -s)) * y_eval(m + s as i32, p)
}

fn vec_z_unchecked(lambda: f64, m: i32, j: usize, nu: u8, p: DiskPoint) -> CVec2 {
    let am = m.abs();
    let r2 = p.r2();
    if nu == 1 {
        if m == 0 {
            let jf = j as f64;
            let c = (jf + lambda) / jf * jac(j - 1, lambda, 1, r2);
            scaled_vec_y0(1, p) * C64::from(c)
        } else {
            vec_y_unchecked(m, p) * C64::from(jac(j, lambda, am - 1, r2))
        }
    } else {
        sigma_vec_y_eval(m, p) * C64::from(jac(j - 1, lambda, am + 1, r2))
    }
}

/// Vector Zernike polynomial `z_{mj}^{(λ),ν}`.
pub fn vec_z_eval(lambda: f64, m: i32, j: usize, nu: u8, p: DiskPoint) -> Result<CVec2> {
    ModeIndex::new(m, j, Family::VecZ { lambda, nu }).validate()?;
    Ok(vec_z_unchecked(lambda, m, j, nu, p))
}

fn cm(a: C64, b: C64, c: C64, d: C64) -> CMat2 {
    CMat2::new(a, b, c, d)
}

/// `[[1, is], [is, -1]]`.
fn c_s(s: f64) -> CMat2 {
    cm(cx(1.0, 0.0), cx(0.0, s), cx(0.0, s), cx(-1.0, 0.0))
}

fn r_pow(r2: f64, k: i32) -> C64 {
    C64::from(r2.powi(k))
}

/// `r^{2k} Y_m`; requires `|m| ≥ 2`, or `|m| = 1, k ≥ 1`, or `m = 0, k ≥ 2`.
fn scaled_mat_y_unchecked(m: i32, k: usize, p: DiskPoint) -> CMat2 {
    let s = sgn(m);
    let am = m.abs();
    let r2 = p.r2();
    let k = k as i32;
    match am {
        0 => c_s(1.0) * y_eval(-2, p) * r_pow(r2, k - 2),
        1 => c_s(s) * y_eval(-(s as i32), p) * r_pow(r2, k - 1),
        _ => c_s(s) * y_eval(m - 2 * s as i32, p) * r_pow(r2, k),
    }
}

/// Matrix harmonic analogue `Y_m` for `|m| ≥ 2`.
pub fn mat_y_eval(m: i32, p: DiskPoint) -> Result<CMat2> {
    if m.abs() < 2 {
        return Err(Error::UseScaledForm(format!(
            "Y_{m} is singular at the origin; use scaled_mat_y_eval"
        )));
    }
    Ok(scaled_mat_y_unchecked(m, 0, p))
}

/// `r^{2k} Y_m` where it is a polynomial.
pub fn scaled_mat_y_eval(m: i32, k: usize, p: DiskPoint) -> Result<CMat2> {
    ModeIndex::new(m, k, Family::MatY).validate()?;
    Ok(scaled_mat_y_unchecked(m, k, p))
}

/// `Σ Y_m = [[1, is], [-is, 1]] y_m`.
pub fn sigma_mat_y_eval(m: i32, p: DiskPoint) -> CMat2 {
    let s = sgn(m);
    cm(cx(1.0, 0.0), cx(0.0, s), cx(0.0, -s), cx(1.0, 0.0)) * y_eval(m, p)
}

/// `Y_m Σ = [[1, -is], [is, 1]] y_m`.
pub fn mat_y_sigma_eval(m: i32, p: DiskPoint) -> CMat2 {
    let s = sgn(m);
    cm(cx(1.0, 0.0), cx(0.0, -s), cx(0.0, s), cx(1.0, 0.0)) * y_eval(m, p)
}

/// `Σ Y_m Σ = [[1, -is], [-is, -1]] y_{m+2s}`.
pub fn sigma_mat_y_sigma_eval(m: i32, p: DiskPoint) -> CMat2 {
    let s = sgn(m);
    c_s(-s) * y_eval(m + 2 * s as i32, p)
}

fn mat_z_unchecked(lambda: f64, m: i32, j: usize, nu: u8, p: DiskPoint) -> CMat2 {
    let am = m.abs();
    let r2 = p.r2();
    let jf = j as f64;
    match nu {
        1 => match am {
            0 => {
                let c = (jf + lambda - 1.0) * (jf + lambda) / (jf * (jf - 1.0));
                c_s(1.0) * y_eval(-2, p) * C64::from(c * jac(j - 2, lambda, 2, r2))
            }
            1 => {
                let s = sgn(m);
                let c = (jf + lambda) / jf;
                c_s(s) * y_eval(-(s as i32), p) * C64::from(c * jac(j - 1, lambda, 1, r2))
            }
            _ => scaled_mat_y_unchecked(m, 0, p) * C64::from(jac(j, lambda, am - 2, r2)),
        },
        2 => sigma_mat_y_eval(m, p) * C64::from(jac(j - 1, lambda, am, r2)),
        3 => mat_y_sigma_eval(m, p) * C64::from(jac(j - 1, lambda, am, r2)),
        _ => sigma_mat_y_sigma_eval(m, p) * C64::from(jac(j - 2, lambda, am + 2, r2)),
    }
}

/// Matrix Zernike polynomial `Z_{mj}^{(λ),ν}`.
pub fn mat_z_eval(lambda: f64, m: i32, j: usize, nu: u8, p: DiskPoint) -> Result<CMat2> {
    ModeIndex::new(m, j, Family::MatZ { lambda, nu }).validate()?;
    Ok(mat_z_unchecked(lambda, m, j, nu, p))
}

/// Families that come with a degree-graded orthogonal enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    ScalarZ { lambda: f64 },
    VecZ { lambda: f64 },
    MatZ { lambda: f64 },
    /// `v^{N,ν}`, orthogonal under the `N` weight.
    NormalV,
    /// `n^ν`, orthogonal under `N^{-1}` (pulled back to `v^{N,ν}` under `N`).
    NormalN,
}

impl Basis {
    fn variants(&self) -> Vec<Family> {
        match *self {
            Basis::ScalarZ { lambda } => vec![Family::ScalarZ { lambda }],
            Basis::VecZ { lambda } => (1..=2).map(|nu| Family::VecZ { lambda, nu }).collect(),
            Basis::MatZ { lambda } => (1..=4).map(|nu| Family::MatZ { lambda, nu }).collect(),
            Basis::NormalV => (1..=2).map(|nu| Family::NormalV { nu }).collect(),
            Basis::NormalN => (1..=2).map(|nu| Family::NormalN { nu }).collect(),
        }
    }

    /// Elements of degree `n` in graded order: by `ν`, then descending `|m|`,
    /// `+m` before `-m`.
    pub fn enumerate_degree(&self, n: usize) -> Vec<ModeIndex> {
        let mut out = Vec::new();
        for family in self.variants() {
            for am in (0..=n + 2).rev() {
                let signs: &[i32] = if am == 0 { &[1] } else { &[1, -1] };
                for &s in signs {
                    let m = s * am as i32;
                    for j in 0..=n / 2 + 2 {
                        let idx = ModeIndex::new(m, j, family);
                        if idx.validate().is_ok() && idx.degree() == n {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        out
    }

    /// All elements of degree `≤ maxdeg`, degree by degree.
    pub fn enumerate_upto(&self, maxdeg: usize) -> Vec<ModeIndex> {
        (0..=maxdeg).flat_map(|n| self.enumerate_degree(n)).collect()
    }
}

/// Elements of degree `n` of a graded family.
pub fn enumerate_degree(basis: Basis, n: usize) -> Vec<ModeIndex> {
    basis.enumerate_degree(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::check_symmetry_adapted;
    use approx::assert_relative_eq;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn harmonic_scalars() {
        let p = DiskPoint::new(1.0, 1.0);
        assert!(close(y_eval(0, p), cx(1.0, 0.0)));
        assert!(close(y_eval(2, p), cx(0.0, 2.0)));
        assert!(close(y_eval(-2, p), cx(0.0, -2.0)));
    }

    #[test]
    fn scalar_families() {
        let p = DiskPoint::new(1.0, 0.0);
        assert!(close(z_eval(0.0, 0, 1, p), cx(1.0, 0.0)));
        assert!(close(z_eval(1.5, 0, 0, DiskPoint::new(0.2, 0.7)), cx(1.0, 0.0)));
        assert!(close(w_eval(0, 0, DiskPoint::new(0.5, 0.0)), cx(0.75, 0.0)));
    }

    #[test]
    fn vector_harmonics() {
        let p = DiskPoint::new(0.3, -0.2);
        assert_eq!(vec_y_eval(1, p).unwrap(), CVec2::new(cx(1.0, 0.0), cx(0.0, 1.0)));
        assert_eq!(vec_y_eval(-1, p).unwrap(), CVec2::new(cx(1.0, 0.0), cx(0.0, -1.0)));
        let s = scaled_vec_y0_eval(1, p).unwrap();
        assert!(close(s[0], cx(0.3, 0.2)) && close(s[1], cx(-0.2, 0.3)));
        let q = DiskPoint::new(1.0, 0.0);
        assert_eq!(vec_y_eval(2, q).unwrap(), CVec2::new(cx(1.0, 0.0), cx(0.0, 1.0)));
        assert!(matches!(vec_y_eval(0, p), Err(Error::UseScaledForm(_))));
        assert!(scaled_vec_y0_eval(0, p).is_err());
    }

    #[test]
    fn vector_zernike_examples() {
        let p = DiskPoint::new(0.4, 0.1);
        assert_eq!(vec_z_eval(0.5, 3, 0, 1, p).unwrap(), vec_y_eval(3, p).unwrap());
        let v = vec_z_eval(1.0, 1, 1, 2, DiskPoint::new(1.0, 0.0)).unwrap();
        assert!(close(v[0], cx(1.0, 0.0)) && close(v[1], cx(0.0, -1.0)));
        assert!(vec_z_eval(0.0, 2, 0, 2, p).is_err());
        assert!(vec_z_eval(0.0, 0, 0, 1, p).is_err());
        let origin = vec_z_eval(0.0, 0, 1, 1, DiskPoint::new(0.0, 0.0)).unwrap();
        assert!(origin.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn matrix_examples() {
        let p = DiskPoint::new(0.3, 0.6);
        assert_eq!(mat_y_eval(2, p).unwrap(), c_s(1.0));
        assert_eq!(mat_z_eval(0.0, -3, 0, 1, p).unwrap(), mat_y_eval(-3, p).unwrap());
        let z = mat_z_eval(0.0, 2, 1, 2, DiskPoint::new(1.0, 0.0)).unwrap();
        assert_eq!(z, cm(cx(1.0, 0.0), cx(0.0, 1.0), cx(0.0, -1.0), cx(1.0, 0.0)));
        assert!(mat_y_eval(1, p).is_err());
        assert!(mat_z_eval(0.0, 0, 1, 1, p).is_err());
        assert!(mat_z_eval(0.0, 1, 0, 1, p).is_err());
    }

    #[test]
    fn sigma_products() {
        let p = DiskPoint::new(0.35, -0.55);
        let sg = crate::geometry::complexify(&crate::geometry::sigma(p));
        for m in -4..=4 {
            if m != 0 {
                let lhs = sg * vec_y_eval(m, p).unwrap();
                assert_relative_eq!((lhs - sigma_vec_y_eval(m, p)).norm(), 0.0, epsilon = 1e-14);
            }
            if m.abs() >= 2 {
                let y = mat_y_eval(m, p).unwrap();
                assert!((sg * y - sigma_mat_y_eval(m, p)).norm() < 1e-14);
                assert!((y * sg - mat_y_sigma_eval(m, p)).norm() < 1e-14);
                assert!((sg * y * sg - sigma_mat_y_sigma_eval(m, p)).norm() < 1e-14);
            }
        }
        let r2y0 = scaled_vec_y0_eval(1, p).unwrap();
        assert!((sg * r2y0 - sigma_vec_y_eval(0, p) * C64::from(p.r2())).norm() < 1e-14);
    }

    #[test]
    fn enumeration_examples() {
        let s = enumerate_degree(Basis::ScalarZ { lambda: 0.0 }, 2);
        let mj: Vec<_> = s.iter().map(|i| (i.m, i.j)).collect();
        assert_eq!(mj, vec![(2, 0), (-2, 0), (0, 1)]);
        let v = enumerate_degree(Basis::VecZ { lambda: 0.0 }, 2);
        let mj: Vec<_> = v
            .iter()
            .map(|i| match i.family {
                Family::VecZ { nu, .. } => (nu, i.m, i.j),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(mj, vec![(1, 3, 0), (1, -3, 0), (1, 1, 1), (1, -1, 1), (2, 1, 1), (2, -1, 1)]);
        let m = enumerate_degree(Basis::MatZ { lambda: 0.0 }, 0);
        let mj: Vec<_> = m
            .iter()
            .map(|i| match i.family {
                Family::MatZ { nu, .. } => (nu, i.m, i.j),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(mj, vec![(1, 2, 0), (1, -2, 0), (2, 0, 1), (3, 0, 1)]);
    }

    #[test]
    fn enumeration_counts() {
        for n in 0..=12 {
            assert_eq!(enumerate_degree(Basis::ScalarZ { lambda: 1.0 }, n).len(), n + 1);
            assert_eq!(enumerate_degree(Basis::VecZ { lambda: 1.0 }, n).len(), 2 * (n + 1));
            assert_eq!(enumerate_degree(Basis::MatZ { lambda: 1.0 }, n).len(), 4 * (n + 1));
            assert_eq!(enumerate_degree(Basis::NormalV, n).len(), 2 * (n + 1));
        }
    }

    #[test]
    fn declared_modes_hold() {
        for basis in [
            Basis::ScalarZ { lambda: 0.5 },
            Basis::VecZ { lambda: 1.0 },
            Basis::MatZ { lambda: 2.0 },
        ] {
            for idx in basis.enumerate_upto(6) {
                let res = match idx.field().unwrap() {
                    AnyField::Scalar(f) => check_symmetry_adapted(&f, idx.m, 40),
                    AnyField::Vector(f) => check_symmetry_adapted(&f, idx.m, 40),
                    AnyField::Matrix(f) => check_symmetry_adapted(&f, idx.m, 40),
                };
                assert!(res < 1e-12, "{idx}: {res}");
            }
        }
    }
}
