//! Vector bases on the disk built from `𝓜`: the `𝒫ₘ` lift, orthogonal
//! polynomials for equivariant weights `α(r²)I + β(r²)Σ`, the `N`-weight
//! family `v^N`, the boundary-normal family `n` and the tangential family `t`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{
    check_symmetry_adapted, complexify, n_weight, rot, CVec2, DiskPoint, VectorField, C64,
};
use crate::modm::{
    q_split, scalar_weight_modify_lu, weight_modify_lu, DiagWeightSpec, MPoly, Poly, Split,
};
use crate::univariate::jacobi;
use crate::zernike::{sgn, sigma_vec_y_eval, y_eval, Sign};

/// Equivariant weight `W(x, y) = α(r²) I + β(r²) Σ(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivWeightSpec {
    pub alpha: Poly,
    pub beta: Poly,
}

impl EquivWeightSpec {
    /// Checks `α ± tβ > 0` at 64 interior sample points of `(0, 1)`.
    pub fn new(alpha: Poly, beta: Poly) -> Result<Self> {
        let w = Self { alpha, beta };
        w.diag().check_positive()?;
        Ok(w)
    }

    pub fn identity() -> Self {
        Self { alpha: Poly::constant(1.0), beta: Poly(Vec::new()) }
    }

    /// The weight `N = I - x xᵀ`, i.e. `α = 1 - t/2`, `β = 1/2`.
    pub fn n() -> Self {
        Self { alpha: Poly(vec![1.0, -0.5]), beta: Poly::constant(0.5) }
    }

    /// Its restriction `diag(α + tβ, α - tβ)` along `θ = 0`.
    pub fn diag(&self) -> DiagWeightSpec {
        DiagWeightSpec { alpha: self.alpha.clone(), beta: self.beta.clone(), b: 0 }
    }

    pub fn eval(&self, p: DiskPoint) -> nalgebra::Matrix2<f64> {
        let t = p.r2();
        nalgebra::Matrix2::identity() * self.alpha.eval(t)
            + crate::geometry::sigma(p) * self.beta.eval(t)
    }
}

fn vec_y_or_zero(m: i32, p: DiskPoint) -> CVec2 {
    let s = sgn(m);
    CVec2::new(C64::new(1.0, 0.0), C64::new(0.0, s)) * y_eval(m - s as i32, p)
}

fn lift(m: i32, sp: Split, p: DiskPoint) -> CVec2 {
    vec_y_or_zero(m, p) * C64::from(sp.c) + sigma_vec_y_eval(m, p) * C64::from(sp.d_over_t)
}

fn require_nonzero_mode(m: i32) -> Result<()> {
    if m == 0 {
        Err(Error::Unsupported("the lift P_m is defined for m != 0 only".into()))
    } else {
        Ok(())
    }
}

/// `𝒫ₘ f = r^{|m|-1} e^{imθ} ρ(θ) diag(1, i sign m) f(r²)`, evaluated as
/// `c(r²) y_m + (d/t)(r²) Σ y_m` so it is polynomial in `(x, y)`.
pub fn pm_apply(m: i32, f: &MPoly) -> Result<VectorField> {
    require_nonzero_mode(m)?;
    let (c, e) = (f.c_poly(), f.d_over_t_poly());
    let deg = 2 * f.degree() + m.unsigned_abs() as usize - 1;
    Ok(VectorField::new(deg, m, move |p| {
        let t = p.r2();
        lift(m, Split { c: c.eval(t), d_over_t: e.eval(t) }, p)
    }))
}

/// Inverse of [`pm_apply`] for a mode-`m` field whose preimage has degree at most
/// `degree`, recovered by least squares along the ray `θ = 0`.
pub fn pm_inverse(m: i32, g: &VectorField, degree: usize) -> Result<MPoly> {
    require_nonzero_mode(m)?;
    let scale = (0..8)
        .map(|k| g.eval(DiskPoint::new(0.1 + 0.1 * k as f64, 0.05)).norm())
        .fold(1e-300, f64::max);
    if check_symmetry_adapted(g, m, 32) > 1e-8 * scale {
        return Err(Error::Parameter(format!("field is not symmetry adapted with mode {m}")));
    }
    let s = sgn(m);
    let npts = 4 * (degree + 1);
    let ts: Vec<f64> = (0..npts)
        .map(|k| 0.5 - 0.5 * (std::f64::consts::PI * (k as f64 + 0.5) / npts as f64).cos())
        .collect();
    let vand = DMatrix::from_fn(npts, degree + 1, |i, k| ts[i].powi(k as i32));
    let mut rhs1 = DVector::zeros(npts);
    let mut rhs2 = DVector::zeros(npts);
    for (i, &t) in ts.iter().enumerate() {
        let v = g.eval(DiskPoint::new(t.sqrt(), 0.0));
        let scale = t.powf((1.0 - m.unsigned_abs() as f64) / 2.0);
        rhs1[i] = v[0].re * scale;
        rhs2[i] = (v[1] * C64::new(0.0, -s)).re * scale;
    }
    let qr = vand.qr();
    let solve = |rhs: &DVector<f64>| -> Result<Vec<f64>> {
        let y = qr.q().transpose() * rhs;
        qr.r()
            .solve_upper_triangular(&y)
            .map(|x| x.iter().copied().collect())
            .ok_or_else(|| Error::Factorization("singular fitting system".into()))
    };
    let (f1, f2) = (solve(&rhs1)?, solve(&rhs2)?);
    let mut f2 = f2;
    // membership in the module fixes the constant term of the second component
    f2[0] = f1[0];
    MPoly::from_components(&f1, &f2)
}

fn index_err(what: &str, m: i32, j: usize) -> Error {
    Error::Index(format!("{what}: (m, j) = ({m}, {j}) out of range"))
}

fn check_v_range(m: i32, j: usize, nu: u8) -> Result<()> {
    if nu != 1 && nu != 2 {
        return Err(Error::Index(format!("nu = {nu} must be 1 or 2")));
    }
    let ok = if m == 0 { j >= 1 } else { nu == 1 || j >= 1 };
    ok.then_some(()).ok_or_else(|| index_err("v/n family", m, j))
}

fn check_pm_range(m: i32, j: usize, sign: Sign) -> Result<()> {
    let ok = match sign {
        Sign::Plus => j >= 1,
        Sign::Minus => m != 0 || j >= 1,
    };
    ok.then_some(()).ok_or_else(|| index_err("recombined family", m, j))
}

/// Symmetry-adapted orthogonal polynomials for a general equivariant weight,
/// built once up to a degree bound.
#[derive(Debug, Clone)]
pub struct GeneralFamily {
    pub m: i32,
    pub maxj: usize,
    /// `m ≠ 0`: orthogonal elements of `𝓜` in graded order.
    vector: Vec<MPoly>,
    /// `m = 0`: scalar polynomials for `t(α + tβ)` and `t(α - tβ)`.
    radial: (Vec<Poly>, Vec<Poly>),
}

impl GeneralFamily {
    pub fn new(w: &EquivWeightSpec, m: i32, maxj: usize) -> Result<Self> {
        if m == 0 {
            let plus = &w.alpha + &(&Poly::t() * &w.beta);
            let minus = &w.alpha - &(&Poly::t() * &w.beta);
            let deg = maxj.saturating_sub(1);
            let pp = scalar_weight_modify_lu(&plus, 0.0, 1.0, deg)?;
            let pm = scalar_weight_modify_lu(&minus, 0.0, 1.0, deg)?;
            Ok(Self { m, maxj, vector: Vec::new(), radial: (pp, pm) })
        } else {
            let b = m.unsigned_abs() - 1;
            let vector = weight_modify_lu(&w.alpha, &w.beta, b, maxj)?;
            Ok(Self { m, maxj, vector, radial: (Vec::new(), Vec::new()) })
        }
    }

    /// The `𝓜` element lifted to `v_{mj}^{W,ν}` (`m ≠ 0`).
    pub fn mpoly(&self, j: usize, nu: u8) -> Result<&MPoly> {
        require_nonzero_mode(self.m)?;
        check_v_range(self.m, j, nu)?;
        if j > self.maxj {
            return Err(index_err("general family beyond its degree bound", self.m, j));
        }
        Ok(&self.vector[crate::modm::graded_index(j, nu)])
    }

    pub fn eval(&self, j: usize, nu: u8, p: DiskPoint) -> Result<CVec2> {
        check_v_range(self.m, j, nu)?;
        if j > self.maxj {
            return Err(index_err("general family beyond its degree bound", self.m, j));
        }
        if self.m == 0 {
            let t = p.r2();
            Ok(if nu == 1 {
                CVec2::new(p.x.into(), p.y.into()) * C64::from(self.radial.0[j - 1].eval(t))
            } else {
                CVec2::new((-p.y).into(), p.x.into()) * C64::from(self.radial.1[j - 1].eval(t))
            })
        } else {
            let f = self.mpoly(j, nu)?;
            let t = p.r2();
            Ok(lift(self.m, Split { c: f.c_poly().eval(t), d_over_t: f.d_over_t_poly().eval(t) }, p))
        }
    }

    pub fn field(&self, j: usize, nu: u8) -> Result<VectorField> {
        self.eval(j, nu, DiskPoint::new(0.0, 0.0))?;
        let fam = self.clone();
        let deg = (2 * j + self.m.unsigned_abs() as usize).saturating_sub(1);
        Ok(VectorField::new(deg, self.m, move |p| fam.eval(j, nu, p).expect("range checked")))
    }
}

/// `v_{mj}^{W,ν}(p)` for an equivariant weight `W`; builds the family on each call.
pub fn v_general_eval(w: &EquivWeightSpec, m: i32, j: usize, nu: u8, p: DiskPoint) -> Result<CVec2> {
    GeneralFamily::new(w, m, j.max(1))?.eval(j, nu, p)
}

fn v_n_unchecked(m: i32, j: usize, nu: u8, p: DiskPoint) -> CVec2 {
    let t = p.r2();
    if m == 0 {
        if nu == 1 {
            CVec2::new(p.x.into(), p.y.into()) * C64::from(jacobi(j - 1, 0.0, 1.0, 2.0 * t - 1.0))
        } else {
            CVec2::new((-p.y).into(), p.x.into()) * C64::from(jacobi(j - 1, 1.0, 1.0, 2.0 * t - 1.0))
        }
    } else {
        let b = m.unsigned_abs() - 1;
        lift(m, q_split(b, nu, j, t).expect("range checked"), p)
    }
}

/// `v_{mj}^{N,ν}`, orthogonal under the weight `N`.
pub fn v_n_eval(m: i32, j: usize, nu: u8, p: DiskPoint) -> Result<CVec2> {
    check_v_range(m, j, nu)?;
    Ok(v_n_unchecked(m, j, nu, p))
}

fn n_unchecked(m: i32, j: usize, nu: u8, p: DiskPoint) -> CVec2 {
    complexify(&n_weight(p)) * v_n_unchecked(m, j, nu, p)
}

/// `n_{mj}^ν = N v_{mj}^{N,ν}`, normal on the unit circle.
pub fn n_eval(m: i32, j: usize, nu: u8, p: DiskPoint) -> Result<CVec2> {
    check_v_range(m, j, nu)?;
    Ok(n_unchecked(m, j, nu, p))
}

fn n_pm_unchecked(m: i32, j: usize, sign: Sign, p: DiskPoint) -> CVec2 {
    let two = C64::from(2.0);
    if m == 0 {
        match sign {
            Sign::Plus => n_unchecked(0, j, 1, p) * two,
            Sign::Minus => n_unchecked(0, j, 2, p) * two,
        }
    } else if j == 0 {
        n_unchecked(m, 0, 1, p) * two
    } else {
        let (a, b) = (n_unchecked(m, j, 1, p), n_unchecked(m, j, 2, p));
        match sign {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }
}

/// `n_{mj}^±`, the recombination that diagonalises the gradient and curl.
pub fn n_pm_eval(m: i32, j: usize, sign: Sign, p: DiskPoint) -> Result<CVec2> {
    check_pm_range(m, j, sign)?;
    Ok(n_pm_unchecked(m, j, sign, p))
}

fn t_unchecked(m: i32, j: usize, sign: Sign, p: DiskPoint) -> CVec2 {
    complexify(&rot(std::f64::consts::FRAC_PI_2)) * n_pm_unchecked(m, j, sign, p)
}

/// `t_{mj}^± = ρ(π/2) n_{mj}^±`, tangential on the unit circle.
pub fn t_eval(m: i32, j: usize, sign: Sign, p: DiskPoint) -> Result<CVec2> {
    check_pm_range(m, j, sign)?;
    Ok(t_unchecked(m, j, sign, p))
}

fn v_degree(m: i32, j: usize) -> usize {
    (2 * j + m.unsigned_abs() as usize).saturating_sub(1)
}

pub fn normal_v_field(m: i32, j: usize, nu: u8) -> Result<VectorField> {
    check_v_range(m, j, nu)?;
    Ok(VectorField::new(v_degree(m, j), m, move |p| v_n_unchecked(m, j, nu, p)))
}

pub fn normal_n_field(m: i32, j: usize, nu: u8) -> Result<VectorField> {
    check_v_range(m, j, nu)?;
    Ok(VectorField::new(v_degree(m, j) + 2, m, move |p| n_unchecked(m, j, nu, p)))
}

pub fn normal_pm_field(m: i32, j: usize, sign: Sign) -> Result<VectorField> {
    check_pm_range(m, j, sign)?;
    Ok(VectorField::new(v_degree(m, j) + 2, m, move |p| n_pm_unchecked(m, j, sign, p)))
}

pub fn tangential_field(m: i32, j: usize, sign: Sign) -> Result<VectorField> {
    check_pm_range(m, j, sign)?;
    Ok(VectorField::new(v_degree(m, j) + 2, m, move |p| t_unchecked(m, j, sign, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modm::q_coeffs;
    use crate::zernike::vec_y_eval;

    fn close(a: CVec2, b: CVec2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn cv(a: C64, b: C64) -> CVec2 {
        CVec2::new(a, b)
    }

    #[test]
    fn lift_examples() {
        let p = DiskPoint::new(0.3, -0.4);
        for m in [-3, -1, 1, 2] {
            let f = pm_apply(m, &MPoly::unit(4)).unwrap();
            let e = vec_y_eval(m, p).unwrap() * C64::from(p.r2().powi(2));
            assert!(close(f.eval(p), e, 1e-15));
            let f = pm_apply(m, &MPoly::unit(3)).unwrap();
            let e = sigma_vec_y_eval(m, p) * C64::from(p.r2());
            assert!(close(f.eval(p), e, 1e-15));
        }
        assert!(matches!(pm_apply(0, &MPoly::unit(0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lift_round_trip() {
        for m in [1, -2, 3] {
            let f = MPoly::new(vec![0.3, -0.7, 1.1, 0.25, -0.5, 0.8, 0.4]).unwrap();
            let g = pm_apply(m, &f).unwrap();
            let back = pm_inverse(m, &g, f.degree()).unwrap();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                assert!((a - b).abs() < 1e-11, "m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn v_n_examples() {
        let p = DiskPoint::new(0.3, 0.5);
        let (x, y) = (C64::from(p.x), C64::from(p.y));
        assert!(close(v_n_eval(0, 1, 1, p).unwrap(), cv(x, y), 1e-15));
        assert!(close(v_n_eval(0, 1, 2, p).unwrap(), cv(-y, x), 1e-15));
        let v = v_n_eval(1, 0, 1, DiskPoint::new(1.0, 0.0)).unwrap();
        assert!(close(v, cv(C64::new(0.5, 0.0), C64::new(0.0, 0.5)), 1e-15));
        assert!(v_n_eval(0, 0, 1, p).is_err());
        assert!(v_n_eval(2, 0, 2, p).is_err());
    }

    #[test]
    fn n_examples() {
        let p = DiskPoint::new(-0.2, 0.6);
        let (x, y) = (C64::from(p.x), C64::from(p.y));
        assert!(close(n_eval(0, 1, 1, p).unwrap(), cv(x, y), 1e-15));
        let s = C64::from(1.0 - p.r2());
        assert!(close(n_eval(0, 1, 2, p).unwrap(), cv(-y * s, x * s), 1e-15));
        let two = C64::from(2.0);
        assert!(close(n_pm_eval(0, 1, Sign::Plus, p).unwrap(), cv(x * two, y * two), 1e-15));
        assert!(n_pm_eval(0, 0, Sign::Minus, p).is_err());
        assert!(n_pm_eval(3, 0, Sign::Minus, p).is_ok());
        assert!(t_eval(3, 0, Sign::Plus, p).is_err());
    }

    #[test]
    fn general_identity_weight() {
        let w = EquivWeightSpec::identity();
        let p = DiskPoint::new(0.45, -0.3);
        for m in [-2, 1, 3] {
            let fam = GeneralFamily::new(&w, m, 4).unwrap();
            for j in 0..=4 {
                let v = fam.eval(j, 1, p).unwrap();
                let e = vec_y_eval(m, p).unwrap()
                    * C64::from(jacobi(j, 0.0, (m.abs() - 1) as f64, 2.0 * p.r2() - 1.0));
                let ratio = v[0] / e[0];
                assert!(close(v, e * ratio, 1e-12), "m={m} j={j}");
                assert!((ratio.im).abs() < 1e-12 && ratio.re > 0.0);
            }
        }
        let fam = GeneralFamily::new(&w, 0, 4).unwrap();
        for j in 1..=4 {
            let v = fam.eval(j, 1, p).unwrap();
            let e = CVec2::new(p.x.into(), p.y.into())
                * C64::from(jacobi(j - 1, 0.0, 1.0, 2.0 * p.r2() - 1.0));
            let ratio = v[0] / e[0];
            assert!(close(v, e * ratio, 1e-12));
        }
    }

    #[test]
    fn general_n_weight_matches_closed_form() {
        let w = EquivWeightSpec::n();
        for m in [-3, -1, 0, 2] {
            let fam = GeneralFamily::new(&w, m, 5).unwrap();
            for j in 0..=5 {
                for nu in [1u8, 2] {
                    if check_v_range(m, j, nu).is_err() {
                        continue;
                    }
                    if m != 0 {
                        let a = fam.mpoly(j, nu).unwrap().coeffs().to_vec();
                        let b = q_coeffs(m.unsigned_abs() - 1, nu, j).unwrap().coeffs().to_vec();
                        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                        let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                        let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                        assert!(1.0 - (dot / (na * nb)).abs() < 1e-9, "m={m} j={j} nu={nu}");
                    }
                    let p = DiskPoint::new(0.2, 0.7);
                    let (a, b) = (fam.eval(j, nu, p).unwrap(), v_n_eval(m, j, nu, p).unwrap());
                    let r = if b[0].norm() > b[1].norm() { a[0] / b[0] } else { a[1] / b[1] };
                    assert!(close(a, b * r, 1e-9 * a.norm().max(1.0)), "m={m} j={j} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn indefinite_weight_rejected() {
        assert!(EquivWeightSpec::new(Poly(vec![0.5, -1.0]), Poly(Vec::new())).is_err());
        let bad = EquivWeightSpec { alpha: Poly(vec![0.2]), beta: Poly(vec![1.0]) };
        assert!(matches!(GeneralFamily::new(&bad, 2, 3), Err(Error::Factorization(_))));
    }
}
