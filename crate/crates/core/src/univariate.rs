//! Jacobi, Legendre and ultraspherical kernels plus Gauss–Jacobi rules on `[0, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Parameters `(a, b)` of a Jacobi family `P_n^{(a,b)}`.
///
/// `a > -1` always; `b > -1`, or exactly `-1` / `-2` for the
/// series-expansion conventions used by the vector and matrix Zernike families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParam {
    pub a: f64,
    pub b: f64,
}

impl JacobiParam {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) || !a.is_finite() {
            return Err(Error::Parameter(format!("jacobi parameter a = {a} must exceed -1")));
        }
        if !(b > -1.0 || b == -1.0 || b == -2.0) || !b.is_finite() {
            return Err(Error::Parameter(format!(
                "jacobi parameter b = {b} must exceed -1 or equal -1, -2"
            )));
        }
        Ok(Self { a, b })
    }

    /// True when `b` selects one of the negative-parameter conventions.
    pub fn is_convention(&self) -> bool {
        self.b == -1.0 || self.b == -2.0
    }

    /// Evaluate, dispatching to the convention branch when `b ∈ {-1, -2}`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        if self.b == -1.0 {
            convention_minus1(n, self.a, x)
        } else if self.b == -2.0 {
            convention_minus2(n, self.a, x)
        } else {
            jacobi(n, self.a, self.b, x)
        }
    }
}

/// `P_n^{(a,b)}(x)` by the forward three-term recurrence, without parameter checks.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let c2 = (s + 1.0) * (a * a - b * b);
        let c3 = s * (s + 1.0) * (s + 2.0);
        let c4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Checked evaluation of `P_n^{(a,b)}(x)` for `b > -1`.
pub fn jacobi_eval(n: usize, p: JacobiParam, x: f64) -> Result<f64> {
    let p = JacobiParam::new(p.a, p.b)?;
    if p.is_convention() {
        return Err(Error::Parameter(format!(
            "b = {} needs jacobi_convention_eval",
            p.b
        )));
    }
    Ok(jacobi(n, p.a, p.b, x))
}

fn convention_minus1(n: usize, lambda: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let nf = n as f64;
    (1.0 + x) * (nf + lambda) / (2.0 * nf) * jacobi(n - 1, lambda, 1.0, x)
}

fn convention_minus2(n: usize, lambda: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => (2.0 + lambda + lambda * x) / 2.0,
        _ => {
            let nf = n as f64;
            (nf + lambda - 1.0) * (nf + lambda) / (4.0 * nf * (nf - 1.0))
                * (1.0 + x)
                * (1.0 + x)
                * jacobi(n - 2, lambda, 2.0, x)
        }
    }
}

/// `P_n^{(λ,b)}(x)` for `b ∈ {-1, -2}` under the series-expansion conventions.
pub fn jacobi_convention_eval(n: usize, lambda: f64, bneg: i32, x: f64) -> Result<f64> {
    if !(lambda > -1.0) {
        return Err(Error::Parameter(format!("lambda = {lambda} must exceed -1")));
    }
    match bneg {
        -1 => Ok(convention_minus1(n, lambda, x)),
        -2 => Ok(convention_minus2(n, lambda, x)),
        _ => Err(Error::Parameter(format!("convention parameter {bneg} is not -1 or -2"))),
    }
}

/// `P_n^{(λ,b)}(x)` for integer `b ≥ -2`, using the conventions for negative `b`.
pub fn jacobi_int(n: usize, lambda: f64, b: i32, x: f64) -> f64 {
    match b {
        -1 => convention_minus1(n, lambda, x),
        -2 => convention_minus2(n, lambda, x),
        _ => jacobi(n, lambda, b as f64, x),
    }
}

/// `d/dx P_n^{(a,b)}(x) = (n+a+b+1)/2 · P_{n-1}^{(a+1,b+1)}(x)`.
pub fn jacobi_deriv(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (n as f64 + a + b + 1.0) / 2.0 * jacobi(n - 1, a + 1.0, b + 1.0, x)
}

/// Coefficients `(α_n, β_n, γ_n)` of `x P_n = α_n P_{n+1} + β_n P_n + γ_n P_{n-1}`.
pub fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    if n == 0 {
        return (2.0 / (a + b + 2.0), (b - a) / (a + b + 2.0), 0.0);
    }
    let alpha = 2.0 * (nf + 1.0) * (nf + a + b + 1.0) / ((s + 1.0) * (s + 2.0));
    let beta = (b * b - a * a) / (s * (s + 2.0));
    let gamma = 2.0 * (nf + a) * (nf + b) / (s * (s + 1.0));
    (alpha, beta, gamma)
}

/// Monomial coefficients in `t` of `P_n^{(a,b)}(2t - 1)`, lowest degree first.
pub fn jacobi_shifted_coeffs(n: usize, a: f64, b: f64) -> Vec<f64> {
    let nf = n as f64;
    let mut out = vec![0.0; n + 1];
    for (m, c) in out.iter_mut().enumerate() {
        // (-1)^{n+m} C(n,m) (b+m+1)_{n-m} (a+b+n+1)_m / n!
        let mut v = binomial(n, m);
        for i in m..n {
            v *= b + i as f64 + 1.0;
        }
        for i in 0..m {
            v *= a + b + nf + 1.0 + i as f64;
        }
        for i in 1..=n {
            v /= i as f64;
        }
        *c = if (n + m) % 2 == 0 { v } else { -v };
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Legendre polynomial `P_n(z) = P_n^{(0,0)}(z)`.
pub fn legendre_eval(n: usize, z: f64) -> f64 {
    jacobi(n, 0.0, 0.0, z)
}

/// Ultraspherical `C_n^{(3/2)}(z) = (n+2)/2 · P_n^{(1,1)}(z)`.
pub fn ultra32_eval(n: usize, z: f64) -> f64 {
    (n as f64 + 2.0) / 2.0 * jacobi(n, 1.0, 1.0, z)
}

/// `(1 - z²) C_n^{(3/2)}(z)`, whose derivative is `-(n+1)(n+2) P_{n+1}(z)`.
pub fn weighted_ultra32_eval(n: usize, z: f64) -> f64 {
    (1.0 - z * z) * ultra32_eval(n, z)
}

/// A quadrature rule on `[0, 1]` for the weight `(1 - t)^λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(t_i)`, i.e. `∫₀¹ f(t) (1-t)^λ dt` for polynomial `f` of low enough degree.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Gauss rule with `npts` nodes for `(1 - t)^λ` on `[0, 1]` (Golub–Welsch).
pub fn gauss_jacobi_rule(npts: usize, lambda: f64) -> Result<QuadRule> {
    if npts == 0 {
        return Err(Error::Parameter("quadrature needs at least one node".into()));
    }
    if !(lambda > -1.0) {
        return Err(Error::Parameter(format!("lambda = {lambda} must exceed -1")));
    }
    // Monic Jacobi recurrence on [-1, 1] for (1-x)^λ (1+x)^0.
    let (a, b) = (lambda, 0.0);
    let mut jac = DMatrix::<f64>::zeros(npts, npts);
    for i in 0..npts {
        let (_, beta, _) = jacobi_recurrence(i, a, b);
        jac[(i, i)] = beta;
        if i + 1 < npts {
            let k = (i + 1) as f64;
            let s = 2.0 * k + a + b;
            let off2 = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
            let off = off2.sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mu0 = 1.0 / (lambda + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..npts)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + eig.eigenvalues[i]) / 2.0, mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(QuadRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        exactness_degree: 2 * npts - 1,
    })
}

/// Horner evaluation of a monomial coefficient list (lowest degree first).
pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi(0, 0.3, 0.7, 5.0), 1.0);
        assert_relative_eq!(jacobi(1, 0.0, 0.0, 0.3), 0.3);
        assert_relative_eq!(jacobi(2, 1.0, 0.0, 1.0), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn endpoint_is_binomial() {
        for n in 0..12 {
            for &a in &[0.0, 1.0, 2.0, 0.5] {
                let mut expect = 1.0;
                for i in 1..=n {
                    expect *= (i as f64 + a) / i as f64;
                }
                assert_relative_eq!(jacobi(n, a, 1.3, 1.0), expect, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn checked_eval_rejects_bad_params() {
        assert!(jacobi_eval(2, JacobiParam { a: -1.0, b: 0.0 }, 0.1).is_err());
        assert!(jacobi_eval(2, JacobiParam { a: 0.0, b: -1.5 }, 0.1).is_err());
        assert!(jacobi_eval(2, JacobiParam { a: 0.0, b: -1.0 }, 0.1).is_err());
        assert!(jacobi_convention_eval(2, 0.0, -3, 0.1).is_err());
    }

    #[test]
    fn conventions() {
        assert_eq!(jacobi_convention_eval(0, 0.7, -1, 0.2).unwrap(), 1.0);
        assert_relative_eq!(jacobi_convention_eval(1, 0.0, -1, 1.0).unwrap(), 1.0);
        for &x in &[-0.9, 0.0, 0.4] {
            assert_relative_eq!(jacobi_convention_eval(1, 0.0, -2, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn shifted_coefficients_match_evaluation() {
        for n in 0..10 {
            let c = jacobi_shifted_coeffs(n, 1.0, 2.0);
            for &t in &[0.0, 0.3, 0.77, 1.0] {
                assert_relative_eq!(
                    horner(&c, t),
                    jacobi(n, 1.0, 2.0, 2.0 * t - 1.0),
                    epsilon = 1e-10,
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn recurrence_coefficients() {
        for &(a, b) in &[(0.0, 0.0), (1.0, 2.0), (0.0, 3.0)] {
            for n in 0..8 {
                let (al, be, ga) = jacobi_recurrence(n, a, b);
                let x = 0.37;
                let lhs = x * jacobi(n, a, b, x);
                let prev = if n == 0 { 0.0 } else { jacobi(n - 1, a, b, x) };
                let rhs = al * jacobi(n + 1, a, b, x) + be * jacobi(n, a, b, x) + ga * prev;
                assert_relative_eq!(lhs, rhs, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let h = 1e-6;
        for n in 0..7 {
            let x = 0.21;
            let fd = (jacobi(n, 1.0, 2.0, x + h) - jacobi(n, 1.0, 2.0, x - h)) / (2.0 * h);
            assert_relative_eq!(jacobi_deriv(n, 1.0, 2.0, x), fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn ultraspherical_and_legendre() {
        assert_eq!(ultra32_eval(0, 0.4), 1.0);
        assert_eq!(legendre_eval(1, 0.4), 0.4);
        let h = 1e-6;
        for k in 0..6 {
            let z = 0.3;
            let fd = (weighted_ultra32_eval(k, z + h) - weighted_ultra32_eval(k, z - h)) / (2.0 * h);
            let kf = k as f64;
            assert_relative_eq!(
                fd,
                -(kf + 1.0) * (kf + 2.0) * legendre_eval(k + 1, z),
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn small_rules() {
        let r = gauss_jacobi_rule(1, 0.0).unwrap();
        assert_relative_eq!(r.nodes[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        let r = gauss_jacobi_rule(2, 0.0).unwrap();
        assert_relative_eq!(r.integrate(|t| t * t), 1.0 / 3.0, epsilon = 1e-15);
        let r = gauss_jacobi_rule(3, 1.0).unwrap();
        assert_relative_eq!(r.integrate(|_| 1.0), 0.5, epsilon = 1e-15);
        assert!(gauss_jacobi_rule(0, 0.0).is_err());
    }
}
