//! Independent oracles: tensor quadrature on the disk, Gram matrices, central
//! finite differences and brute-force Gram–Schmidt in `𝓜`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::derham::{CVec3, CylDomain};
use crate::diskbases::EquivWeightSpec;
use crate::error::{Error, Result};
use crate::geometry::{CVec2, DiskPoint, RMat2, C64};
use crate::modm::{graded_label, DiagWeightSpec, MPoly, Poly};
use crate::univariate::{gauss_jacobi_rule, QuadRule};
use crate::zernike::{AnyField, AnyValue, ModeIndex};

/// Weight of a disk inner product.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskWeight {
    /// `(1 - r²)^λ`.
    Scalar { lambda: f64 },
    /// `α(r²) I + β(r²) Σ`, for vector fields only.
    Matrix(EquivWeightSpec),
}

impl DiskWeight {
    pub fn degree(&self) -> usize {
        match self {
            DiskWeight::Scalar { .. } => 0,
            DiskWeight::Matrix(w) => (2 * w.alpha.degree()).max(2 * w.beta.degree() + 2),
        }
    }

    fn lambda(&self) -> f64 {
        match self {
            DiskWeight::Scalar { lambda } => *lambda,
            DiskWeight::Matrix(_) => 0.0,
        }
    }
}

/// Tensor rule on the disk: Gauss–Jacobi in `t = r²` times a trapezoid in `θ`.
#[derive(Debug, Clone)]
pub struct DiskQuadrature {
    pub points: Vec<DiskPoint>,
    pub weights: Vec<f64>,
}

impl DiskQuadrature {
    /// Exact for polynomial integrands of total degree `deg` against `(1 - r²)^λ`.
    pub fn new(deg: usize, lambda: f64) -> Result<Self> {
        let rule: QuadRule = gauss_jacobi_rule((deg + 2).div_ceil(2), lambda)?;
        let nth = deg + 1;
        let mut points = Vec::with_capacity(rule.len() * nth);
        let mut weights = Vec::with_capacity(rule.len() * nth);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            for k in 0..nth {
                points.push(DiskPoint::polar(t.sqrt(), 2.0 * PI * k as f64 / nth as f64));
                weights.push(0.5 * w * 2.0 * PI / nth as f64);
            }
        }
        Ok(Self { points, weights })
    }
}

/// `a* W b` pointwise: conjugate-linear in `a`; matrices pair by Frobenius.
pub fn weighted_dot(a: &AnyValue, b: &AnyValue, w: Option<&RMat2>) -> Result<C64> {
    match (a, b, w) {
        (AnyValue::Vector(u), AnyValue::Vector(v), Some(w)) => {
            let wv = crate::geometry::complexify(w) * v;
            Ok(u.dotc(&wv))
        }
        (_, _, Some(_)) => Err(Error::Unsupported("matrix weights apply to vector fields only".into())),
        (AnyValue::Scalar(u), AnyValue::Scalar(v), None) => Ok(u.conj() * v),
        (AnyValue::Vector(u), AnyValue::Vector(v), None) => Ok(u.dotc(v)),
        (AnyValue::Matrix(u), AnyValue::Matrix(v), None) => Ok(u.dotc(v)),
        _ => Err(Error::Parameter("inner product of fields of different shapes".into())),
    }
}

/// `⟨f, g⟩` over the unit disk, exact when `deg_hint ≥ deg f + deg g` (plus the
/// weight degree for matrix weights).
pub fn disk_inner(f: &AnyField, g: &AnyField, weight: &DiskWeight, deg_hint: usize) -> Result<C64> {
    let q = DiskQuadrature::new(deg_hint + weight.degree(), weight.lambda())?;
    let mut s = C64::new(0.0, 0.0);
    for (p, w) in q.points.iter().zip(&q.weights) {
        let wm = match weight {
            DiskWeight::Matrix(m) => Some(m.eval(*p)),
            DiskWeight::Scalar { .. } => None,
        };
        s += weighted_dot(&f.eval(*p), &g.eval(*p), wm.as_ref())? * *w;
    }
    Ok(s)
}

/// Gram matrix with its orthogonality summary.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub matrix: DMatrix<C64>,
    /// `max |G_ij| / sqrt(G_ii G_jj)` over `i ≠ j`.
    pub max_offdiag_rel: f64,
    pub min_diag: f64,
    /// `max |G - G*|`.
    pub hermitian_residual: f64,
    pub basis: Vec<ModeIndex>,
}

/// Relative off-diagonal size `max |G_ij| / sqrt(|G_ii G_jj|)`.
pub fn max_offdiag_rel(g: &DMatrix<C64>) -> f64 {
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = (g[(i, i)].norm() * g[(j, j)].norm()).sqrt();
                worst = worst.max(g[(i, j)].norm() / d);
            }
        }
    }
    worst
}

/// Gram matrix of `basis` under `weight`, evaluating each element once per node.
pub fn gram(basis: &[ModeIndex], weight: &DiskWeight) -> Result<GramReport> {
    let fields: Vec<AnyField> = basis.iter().map(|b| b.field()).collect::<Result<_>>()?;
    let maxdeg = fields.iter().map(AnyField::degree).max().unwrap_or(0);
    let q = DiskQuadrature::new(2 * maxdeg + weight.degree(), weight.lambda())?;
    let values: Vec<Vec<AnyValue>> =
        fields.par_iter().map(|f| q.points.iter().map(|p| f.eval(*p)).collect()).collect();
    let wmats: Vec<Option<RMat2>> = q
        .points
        .iter()
        .map(|p| match weight {
            DiskWeight::Matrix(m) => Some(m.eval(*p)),
            DiskWeight::Scalar { .. } => None,
        })
        .collect();
    let n = basis.len();
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = C64::new(0.0, 0.0);
                    for k in 0..q.weights.len() {
                        s += weighted_dot(&values[i][k], &values[j][k], wmats[k].as_ref())? * q.weights[k];
                    }
                    Ok(s)
                })
                .collect::<Result<Vec<C64>>>()
        })
        .collect::<Result<_>>()?;
    let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let hermitian_residual = (&matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(GramReport {
        max_offdiag_rel: max_offdiag_rel(&matrix),
        min_diag: (0..n).map(|i| matrix[(i, i)].re).fold(f64::INFINITY, f64::min),
        hermitian_residual,
        matrix,
        basis: basis.to_vec(),
    })
}

/// Gram matrix of `count` functions `f(i, t)` in `𝓜` under `∫₀¹ fᵀ V g dt`,
/// exact for integrands of degree `deg`.
pub fn module_gram<F>(count: usize, f: F, weight: &DiagWeightSpec, deg: usize) -> Result<DMatrix<f64>>
where
    F: Fn(usize, f64) -> [f64; 2] + Sync,
{
    let rule = gauss_jacobi_rule((deg + weight_poly_degree(weight) + 2).div_ceil(2), 0.0)?;
    let vals: Vec<Vec<[f64; 2]>> =
        (0..count).into_par_iter().map(|i| rule.nodes.iter().map(|&t| f(i, t)).collect()).collect();
    let wv: Vec<[f64; 2]> = rule.nodes.iter().map(|&t| weight.eval(t)).collect();
    Ok(DMatrix::from_fn(count, count, |i, j| {
        (0..rule.len())
            .map(|k| {
                rule.weights[k]
                    * (vals[i][k][0] * wv[k][0] * vals[j][k][0] + vals[i][k][1] * wv[k][1] * vals[j][k][1])
            })
            .sum()
    }))
}

fn weight_poly_degree(w: &DiagWeightSpec) -> usize {
    w.alpha.degree().max(w.beta.degree() + 1) + w.b as usize
}

/// Relative off-diagonal size of a real Gram matrix.
pub fn max_offdiag_rel_real(g: &DMatrix<f64>) -> f64 {
    max_offdiag_rel(&g.map(|v| C64::new(v, 0.0)))
}

/// Differential operators available to the finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOp {
    Grad,
    Curl2d,
    Div2d,
    Grad3d,
    Curl3d,
    Div3d,
}

fn check_disk(p: DiskPoint, h: f64) -> Result<()> {
    if 1.0 - p.r() > 2.0 * h {
        Ok(())
    } else {
        Err(Error::Domain(format!("point {p} is within 2h = {} of the boundary", 2.0 * h)))
    }
}

fn check_cyl(domain: CylDomain, x: f64, y: f64, z: f64, h: f64) -> Result<()> {
    check_disk(DiskPoint::new(x, y), h)?;
    if domain == CylDomain::Finite && 1.0 - z.abs() <= 2.0 * h {
        return Err(Error::Domain(format!("z = {z} is within 2h of an end of the cylinder")));
    }
    Ok(())
}

/// Central-difference gradient of a scalar field on the disk.
pub fn fd_grad<F: Fn(DiskPoint) -> C64>(f: F, p: DiskPoint, h: f64) -> Result<CVec2> {
    check_disk(p, h)?;
    let dx = (f(DiskPoint::new(p.x + h, p.y)) - f(DiskPoint::new(p.x - h, p.y))) / (2.0 * h);
    let dy = (f(DiskPoint::new(p.x, p.y + h)) - f(DiskPoint::new(p.x, p.y - h))) / (2.0 * h);
    Ok(CVec2::new(dx, dy))
}

fn jac2<F: Fn(DiskPoint) -> CVec2>(f: F, p: DiskPoint, h: f64) -> [CVec2; 2] {
    [
        (f(DiskPoint::new(p.x + h, p.y)) - f(DiskPoint::new(p.x - h, p.y))) / C64::from(2.0 * h),
        (f(DiskPoint::new(p.x, p.y + h)) - f(DiskPoint::new(p.x, p.y - h))) / C64::from(2.0 * h),
    ]
}

/// `curl f = -∂_y f₁ + ∂_x f₂`.
pub fn fd_curl2d<F: Fn(DiskPoint) -> CVec2>(f: F, p: DiskPoint, h: f64) -> Result<C64> {
    check_disk(p, h)?;
    let [dx, dy] = jac2(f, p, h);
    Ok(-dy[0] + dx[1])
}

/// `div f = ∂_x f₁ + ∂_y f₂`.
pub fn fd_div2d<F: Fn(DiskPoint) -> CVec2>(f: F, p: DiskPoint, h: f64) -> Result<C64> {
    check_disk(p, h)?;
    let [dx, dy] = jac2(f, p, h);
    Ok(dx[0] + dy[1])
}

fn partials3<V, F>(f: F, (x, y, z): (f64, f64, f64), h: f64) -> [V; 3]
where
    V: std::ops::Sub<Output = V> + std::ops::Div<C64, Output = V>,
    F: Fn(f64, f64, f64) -> V,
{
    let d = C64::from(2.0 * h);
    [
        (f(x + h, y, z) - f(x - h, y, z)) / d,
        (f(x, y + h, z) - f(x, y - h, z)) / d,
        (f(x, y, z + h) - f(x, y, z - h)) / d,
    ]
}

pub fn fd_grad3d<F: Fn(f64, f64, f64) -> C64>(
    f: F,
    domain: CylDomain,
    p: (f64, f64, f64),
    h: f64,
) -> Result<CVec3> {
    check_cyl(domain, p.0, p.1, p.2, h)?;
    let [a, b, c] = partials3(f, p, h);
    Ok(CVec3::new(a, b, c))
}

/// `curl(f, g, h) = (∂_y h - ∂_z g, ∂_z f - ∂_x h, ∂_x g - ∂_y f)`.
pub fn fd_curl3d<F: Fn(f64, f64, f64) -> CVec3>(
    f: F,
    domain: CylDomain,
    p: (f64, f64, f64),
    h: f64,
) -> Result<CVec3> {
    check_cyl(domain, p.0, p.1, p.2, h)?;
    let [dx, dy, dz] = partials3(f, p, h);
    Ok(CVec3::new(dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]))
}

pub fn fd_div3d<F: Fn(f64, f64, f64) -> CVec3>(
    f: F,
    domain: CylDomain,
    p: (f64, f64, f64),
    h: f64,
) -> Result<C64> {
    check_cyl(domain, p.0, p.1, p.2, h)?;
    let [dx, dy, dz] = partials3(f, p, h);
    Ok(dx[0] + dy[1] + dz[2])
}

/// Result of [`fd_apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdValue {
    Scalar(C64),
    Vector(CVec2),
}

/// Two-dimensional operators applied to a disk field.
pub fn fd_apply(op: FdOp, f: &AnyField, p: DiskPoint, h: f64) -> Result<FdValue> {
    let scalar = |v: AnyValue| match v {
        AnyValue::Scalar(s) => s,
        _ => C64::new(f64::NAN, 0.0),
    };
    let vector = |v: AnyValue| match v {
        AnyValue::Vector(s) => s,
        _ => CVec2::new(C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)),
    };
    let shape_err = || Error::Parameter(format!("{op:?} does not apply to this field shape"));
    match (op, f) {
        (FdOp::Grad, AnyField::Scalar(_)) => Ok(FdValue::Vector(fd_grad(|q| scalar(f.eval(q)), p, h)?)),
        (FdOp::Curl2d, AnyField::Vector(_)) => Ok(FdValue::Scalar(fd_curl2d(|q| vector(f.eval(q)), p, h)?)),
        (FdOp::Div2d, AnyField::Vector(_)) => Ok(FdValue::Scalar(fd_div2d(|q| vector(f.eval(q)), p, h)?)),
        (FdOp::Grad3d | FdOp::Curl3d | FdOp::Div3d, _) => {
            Err(Error::Unsupported("three-dimensional operators take cylinder fields".into()))
        }
        _ => Err(shape_err()),
    }
}

/// Shifted Chebyshev polynomials `T_k(2t - 1)`, `k = 0..=n`, as monomial coefficients.
fn shifted_chebyshev(n: usize) -> Vec<Poly> {
    let x = Poly(vec![-1.0, 2.0]);
    let mut out = vec![Poly::constant(1.0), x.clone()];
    while out.len() <= n {
        let k = out.len();
        let next = &(&x * &out[k - 1]).scale(2.0) - &out[k - 2];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// Orthogonal polynomials in `𝓜` by two-pass modified Gram–Schmidt over the
/// graded basis `(1,1)ᵀT_n(2t-1)`, `(1,-1)ᵀ t T_{n-1}(2t-1)`, normalised so the
/// coefficient at each element's own graded position is `1`.
pub fn brute_orthogonalize(weight: &DiagWeightSpec, maxdeg: usize) -> Result<Vec<MPoly>> {
    let len = 2 * maxdeg + 1;
    let cheb = shifted_chebyshev(maxdeg);
    let basis: Vec<MPoly> = (0..len)
        .map(|i| match graded_label(i) {
            (n, 1) => MPoly::from_split(&cheb[n], &Poly(Vec::new())),
            (n, _) => MPoly::from_split(&Poly(vec![0.0; n]), &cheb[n - 1]),
        })
        .collect();
    let rule = gauss_jacobi_rule(maxdeg + weight_poly_degree(weight) / 2 + 3, 0.0)?;
    let wv: Vec<[f64; 2]> = rule.nodes.iter().map(|&t| weight.eval(t)).collect();
    let inner = |a: &[[f64; 2]], b: &[[f64; 2]]| -> f64 {
        (0..rule.len())
            .map(|k| rule.weights[k] * (a[k][0] * wv[k][0] * b[k][0] + a[k][1] * wv[k][1] * b[k][1]))
            .sum()
    };
    // values at the nodes and coefficients (in `basis`) of each orthogonalised element
    let mut vals: Vec<Vec<[f64; 2]>> = Vec::with_capacity(len);
    let mut coef: Vec<Vec<f64>> = Vec::with_capacity(len);
    let mut norms: Vec<f64> = Vec::with_capacity(len);
    for i in 0..len {
        let mut v: Vec<[f64; 2]> = rule.nodes.iter().map(|&t| basis[i].eval(t)).collect();
        let mut c = vec![0.0; len];
        c[i] = 1.0;
        let n0 = inner(&v, &v);
        for _pass in 0..2 {
            for j in 0..i {
                let r = inner(&vals[j], &v) / norms[j];
                for (a, b) in v.iter_mut().zip(&vals[j]) {
                    a[0] -= r * b[0];
                    a[1] -= r * b[1];
                }
                for (a, b) in c.iter_mut().zip(&coef[j]) {
                    *a -= r * b;
                }
            }
        }
        let nn = inner(&v, &v);
        if !(nn > 1e-24 * n0.abs().max(f64::MIN_POSITIVE)) {
            return Err(Error::Factorization(format!(
                "Gram–Schmidt collapsed at element {i}: weight is not positive definite"
            )));
        }
        vals.push(v);
        coef.push(c);
        norms.push(nn);
    }
    Ok(coef
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = c.iter().zip(&basis).fold(MPoly::zero(maxdeg), |acc, (s, b)| acc.axpy(*s, b));
            let lead = p.coeffs()[i];
            p.scale(1.0 / lead)
        })
        .collect())
}

/// `1 - |cos ∠(a, b)|` between coefficient vectors.
pub fn cosine_distance(a: &MPoly, b: &MPoly) -> f64 {
    let n = a.degree().max(b.degree());
    let (a, b) = (a.padded(n), b.padded(n));
    let dot: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum();
    let na = a.coeffs().iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.coeffs().iter().map(|x| x * x).sum::<f64>().sqrt();
    (1.0 - (dot / (na * nb)).abs()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Field;
    use crate::modm::{p_ab_coeffs, q_coeffs};
    use crate::zernike::{Basis, Family};

    fn const_scalar(c: f64) -> AnyField {
        AnyField::Scalar(Field::new(0, 0, move |_| C64::from(c)))
    }

    #[test]
    fn area_and_moments() {
        let one = const_scalar(1.0);
        let a = disk_inner(&one, &one, &DiskWeight::Scalar { lambda: 0.0 }, 0).unwrap();
        assert!((a.re - PI).abs() < 1e-14);
        let ex = AnyField::Vector(Field::new(0, 0, |_| CVec2::new(C64::from(1.0), C64::from(0.0))));
        let v = disk_inner(&ex, &ex, &DiskWeight::Matrix(EquivWeightSpec::n()), 0).unwrap();
        assert!((v.re - 0.75 * PI).abs() < 1e-14);
    }

    #[test]
    fn distinct_modes_orthogonal() {
        let a = ModeIndex::new(2, 0, Family::ScalarZ { lambda: 0.0 }).field().unwrap();
        let b = ModeIndex::new(3, 0, Family::ScalarZ { lambda: 0.0 }).field().unwrap();
        let v = disk_inner(&a, &b, &DiskWeight::Scalar { lambda: 0.0 }, 5).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn scalar_gram_small() {
        let basis = Basis::ScalarZ { lambda: 0.0 }.enumerate_upto(6);
        let r = gram(&basis, &DiskWeight::Scalar { lambda: 0.0 }).unwrap();
        assert!(r.max_offdiag_rel < 1e-10);
        assert!(r.hermitian_residual < 1e-12);
    }

    #[test]
    fn finite_differences() {
        let g = fd_grad(|p| C64::from(1.0 - p.r2()), DiskPoint::new(0.3, 0.4), 1e-5).unwrap();
        assert!((g[0].re + 0.6).abs() < 1e-9 && (g[1].re + 0.8).abs() < 1e-9);
        let rot = |p: DiskPoint| CVec2::new(C64::from(-p.y), C64::from(p.x));
        assert!((fd_curl2d(rot, DiskPoint::new(0.1, 0.2), 1e-5).unwrap().re - 2.0).abs() < 1e-9);
        let rad = |p: DiskPoint| CVec2::new(C64::from(p.x), C64::from(p.y));
        assert!((fd_div2d(rad, DiskPoint::new(0.1, 0.2), 1e-5).unwrap().re - 2.0).abs() < 1e-9);
        let near = DiskPoint::new(0.99999, 0.0);
        assert!(matches!(fd_grad(|p| C64::from(p.x), near, 1e-5), Err(Error::Domain(_))));
    }

    #[test]
    fn brute_force_matches_closed_forms() {
        let w = DiagWeightSpec::new(Poly::constant(1.0), Poly(Vec::new()), 0).unwrap();
        let out = brute_orthogonalize(&w, 5).unwrap();
        for (i, o) in out.iter().enumerate() {
            let (n, nu) = graded_label(i);
            assert!(cosine_distance(o, &p_ab_coeffs(0.0, 0.0, nu, n).unwrap()) < 1e-9);
        }
        for b in 0..3 {
            let w = DiagWeightSpec::new(Poly(vec![1.0, -0.5]), Poly::constant(0.5), b).unwrap();
            let out = brute_orthogonalize(&w, 6).unwrap();
            for (i, o) in out.iter().enumerate() {
                let (n, nu) = graded_label(i);
                assert!(cosine_distance(o, &q_coeffs(b, nu, n).unwrap()) < 1e-9, "b={b} i={i}");
            }
        }
    }

    #[test]
    fn brute_force_rejects_indefinite() {
        let w = DiagWeightSpec { alpha: Poly(vec![1.0, -3.0]), beta: Poly(Vec::new()), b: 0 };
        assert!(brute_orthogonalize(&w, 4).is_err());
    }
}
