//! Vector orthogonal polynomials on `[0, 1]` in the module `𝓜` of real
//! 2-vector polynomials whose constant term has equal components.
//!
//! Elements are stored in the graded ordering
//! `(1,1)ᵀ, (1,-1)ᵀt, (1,1)ᵀt, (1,-1)ᵀt², (1,1)ᵀt², …`, which is also the
//! column ordering `p₀¹, p₁², p₁¹, p₂², p₂¹, …` of every family here.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::univariate::{binomial, horner, jacobi, jacobi_recurrence, jacobi_shifted_coeffs};

/// Real polynomial in `t`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Poly(vec![0.0, 1.0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.0, t)
    }

    /// Degree ignoring exact-zero trailing coefficients (`0` for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    /// Keep coefficients up to degree `n`.
    pub fn truncated(&self, n: usize) -> Self {
        Poly((0..=n).map(|k| self.coeff(k)).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

/// An element of `𝓜`: `c₀(1,1)ᵀ + Σ_k (c_k(1,1)ᵀ + d_k(1,-1)ᵀ) t^k`.
///
/// Stored interleaved as `[c₀, d₁, c₁, d₂, c₂, …]`, so membership in `𝓜` is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    coeffs: Vec<f64>,
}

/// Graded position of `p_n^ν` (`ν = 1` at `2n`, `ν = 2` at `2n - 1`).
pub fn graded_index(n: usize, nu: u8) -> usize {
    if nu == 1 {
        2 * n
    } else {
        2 * n - 1
    }
}

/// Inverse of [`graded_index`]: `(n, ν)`.
pub fn graded_label(i: usize) -> (usize, u8) {
    if i % 2 == 0 {
        (i / 2, 1)
    } else {
        (i.div_ceil(2), 2)
    }
}

impl MPoly {
    /// From interleaved coefficients; the length must be odd.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::Size(format!(
                "interleaved coefficient list has even length {}",
                coeffs.len()
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![0.0; 2 * degree + 1] }
    }

    /// The graded basis element with a single unit coefficient at position `i`.
    pub fn unit(i: usize) -> Self {
        let mut p = Self::zero(i.div_ceil(2));
        p.coeffs[i] = 1.0;
        p
    }

    /// From the two scalar components (monomial coefficients). Their constant
    /// terms must agree to `1e-12` relative.
    pub fn from_components(f1: &[f64], f2: &[f64]) -> Result<Self> {
        let a0 = f1.first().copied().unwrap_or(0.0);
        let b0 = f2.first().copied().unwrap_or(0.0);
        if (a0 - b0).abs() > 1e-12 * a0.abs().max(b0.abs()).max(1.0) {
            return Err(Error::Parameter(format!(
                "constant terms {a0} and {b0} differ; not an element of the module"
            )));
        }
        let n = f1.len().max(f2.len()).max(1) - 1;
        let a = |k: usize| f1.get(k).copied().unwrap_or(0.0);
        let b = |k: usize| f2.get(k).copied().unwrap_or(0.0);
        let mut p = Self::zero(n);
        p.coeffs[0] = (a0 + b0) / 2.0;
        for k in 1..=n {
            p.coeffs[2 * k] = (a(k) + b(k)) / 2.0;
            p.coeffs[2 * k - 1] = (a(k) - b(k)) / 2.0;
        }
        Ok(p)
    }

    /// From `c(t)` and `d(t)/t` where the element is `c(1,1)ᵀ + d(1,-1)ᵀ`.
    pub fn from_split(c: &Poly, d_over_t: &Poly) -> Self {
        let n = c.0.len().saturating_sub(1).max(d_over_t.0.len());
        let mut p = Self::zero(n);
        for k in 0..=n {
            p.coeffs[2 * k] = c.coeff(k);
            if k >= 1 {
                p.coeffs[2 * k - 1] = d_over_t.coeff(k - 1);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Coefficient of `(1,1)ᵀ t^k`.
    pub fn c(&self, k: usize) -> f64 {
        self.coeffs.get(2 * k).copied().unwrap_or(0.0)
    }

    /// Coefficient of `(1,-1)ᵀ t^k` (`k ≥ 1`).
    pub fn d(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.coeffs.get(2 * k - 1).copied().unwrap_or(0.0)
        }
    }

    /// `c(t)` of the splitting `c(1,1)ᵀ + d(1,-1)ᵀ`.
    pub fn c_poly(&self) -> Poly {
        Poly((0..=self.degree()).map(|k| self.c(k)).collect())
    }

    /// `d(t)/t`, a polynomial because `d(0) = 0`.
    pub fn d_over_t_poly(&self) -> Poly {
        Poly((1..=self.degree().max(1)).map(|k| self.d(k)).collect())
    }

    /// The two scalar components as monomial coefficient lists.
    pub fn components(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.degree();
        let f1 = (0..=n).map(|k| self.c(k) + self.d(k)).collect();
        let f2 = (0..=n).map(|k| self.c(k) - self.d(k)).collect();
        (f1, f2)
    }

    pub fn eval(&self, t: f64) -> [f64; 2] {
        let c = self.c_poly().eval(t);
        let d = t * self.d_over_t_poly().eval(t);
        [c + d, c - d]
    }

    /// Zero-padded to degree `n ≥ degree`.
    pub fn padded(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((2 * n + 1).max(coeffs.len()), 0.0);
        Self { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `self + s·other`, padding to the larger degree.
    pub fn axpy(&self, s: f64, other: &MPoly) -> Self {
        let n = self.degree().max(other.degree());
        let mut out = self.padded(n);
        for (o, x) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += s * x;
        }
        out
    }

    /// Multiplication by `t`.
    pub fn mul_t(&self) -> Self {
        let mut out = Self::zero(self.degree() + 1);
        for k in 0..=self.degree() {
            out.coeffs[2 * (k + 1)] = self.c(k);
            if k >= 1 {
                out.coeffs[2 * (k + 1) - 1] = self.d(k);
            }
        }
        out
    }

    /// Multiplication by `tS` with `S = diag(1, -1)`, which swaps the roles of `c` and `d`.
    pub fn mul_ts(&self) -> Self {
        let mut out = Self::zero(self.degree() + 1);
        for k in 0..=self.degree() {
            out.coeffs[2 * (k + 1) - 1] = self.c(k);
            out.coeffs[2 * (k + 1)] = self.d(k);
        }
        out
    }

    /// Drop trailing zero blocks.
    pub fn trimmed(&self) -> Self {
        let mut n = self.degree();
        while n > 0 && self.c(n) == 0.0 && self.d(n) == 0.0 {
            n -= 1;
        }
        Self { coeffs: self.coeffs[..2 * n + 1].to_vec() }
    }
}

/// Diagonal weight `diag(α + tβ, α - tβ) t^b` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagWeightSpec {
    pub alpha: Poly,
    pub beta: Poly,
    pub b: u32,
}

impl DiagWeightSpec {
    pub fn new(alpha: Poly, beta: Poly, b: u32) -> Result<Self> {
        let w = Self { alpha, beta, b };
        w.check_positive()?;
        Ok(w)
    }

    /// The two diagonal entries at `t`.
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let (a, b) = (self.alpha.eval(t), t * self.beta.eval(t));
        let tb = t.powi(self.b as i32);
        [(a + b) * tb, (a - b) * tb]
    }

    /// Positivity of both diagonal entries at 64 interior points of `(0, 1)`.
    pub fn check_positive(&self) -> Result<()> {
        for k in 0..64 {
            let t = (k as f64 + 0.5) / 64.0;
            let v = self.eval(t);
            if !(v[0] > 0.0 && v[1] > 0.0) {
                return Err(Error::Parameter(format!(
                    "weight is not positive definite at t = {t}"
                )));
            }
        }
        Ok(())
    }

    /// Orthogonal polynomials for this weight up to degree `maxdeg`, via [`weight_modify_lu`].
    pub fn orthogonal_polynomials(&self, maxdeg: usize) -> Result<Vec<MPoly>> {
        weight_modify_lu(&self.alpha, &self.beta, self.b, maxdeg)
    }
}

/// Multiplication operators acting on `𝓜`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulOp {
    T,
    TS,
}

/// Coefficient image of multiplication by `t` or `tS`, bounded by `max_degree`.
pub fn apply_operator(op: MulOp, poly: &MPoly, max_degree: usize) -> Result<MPoly> {
    let p = poly.trimmed();
    if p.degree() + 1 > max_degree {
        return Err(Error::Size(format!(
            "degree {} image exceeds truncation degree {max_degree}",
            p.degree() + 1
        )));
    }
    Ok(match op {
        MulOp::T => p.mul_t(),
        MulOp::TS => p.mul_ts(),
    })
}

fn check_p_index(nu: u8, n: usize) -> Result<()> {
    match (nu, n) {
        (1, _) => Ok(()),
        (2, n) if n >= 1 => Ok(()),
        (2, _) => Err(Error::Index("p_0^2 does not exist".into())),
        _ => Err(Error::Index(format!("nu = {nu} must be 1 or 2"))),
    }
}

/// `p_n^{(a,b),ν}(t)`: `P_n^{(a,b)}(2t-1)(1,1)ᵀ` or `t P_{n-1}^{(a,b+2)}(2t-1)(1,-1)ᵀ`.
pub fn p_ab_eval(a: f64, b: f64, nu: u8, n: usize, t: f64) -> Result<[f64; 2]> {
    check_p_index(nu, n)?;
    Ok(if nu == 1 {
        let v = jacobi(n, a, b, 2.0 * t - 1.0);
        [v, v]
    } else {
        let v = t * jacobi(n - 1, a, b + 2.0, 2.0 * t - 1.0);
        [v, -v]
    })
}

/// Coefficients of `p_n^{(a,b),ν}` in `𝓜`.
pub fn p_ab_coeffs(a: f64, b: f64, nu: u8, n: usize) -> Result<MPoly> {
    check_p_index(nu, n)?;
    Ok(if nu == 1 {
        MPoly::from_split(&Poly(jacobi_shifted_coeffs(n, a, b)), &Poly(Vec::new()))
    } else {
        MPoly::from_split(&Poly(vec![0.0; n]), &Poly(jacobi_shifted_coeffs(n - 1, a, b + 2.0)))
    })
}

/// The first `len` members of `{p_n^{(a,b),ν}}` in graded order.
pub fn p_ab_family(a: f64, b: f64, len: usize) -> Vec<MPoly> {
    (0..len)
        .map(|i| {
            let (n, nu) = graded_label(i);
            p_ab_coeffs(a, b, nu, n).expect("graded labels are valid")
        })
        .collect()
}

/// Which Jacobi-like operator: multiplication by `t` or by `tS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    T1,
    T2,
}

/// Block-tridiagonal operator with a leading `1×1` block and `2×2` blocks after.
///
/// Column block `n` holds the coefficients of `t·P_n` (or `tS·P_n`):
/// `C_n` in row block `n-1`, `A_n` in row block `n`, `B_n` in row block `n+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTridiag {
    pub a: Vec<DMatrix<f64>>,
    pub b: Vec<DMatrix<f64>>,
    /// `c[0]` is an empty placeholder; `c[n]` for `n ≥ 1` is `C_n`.
    pub c: Vec<DMatrix<f64>>,
    pub nblocks: usize,
}

/// Start of block `n` in the scalar graded ordering.
pub fn block_offset(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        2 * n - 1
    }
}

fn block_size(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        2
    }
}

/// Scalar dimension of `nblocks` blocks.
pub fn blocks_dim(nblocks: usize) -> usize {
    2 * nblocks - 1
}

impl BlockTridiag {
    pub fn dim(&self) -> usize {
        blocks_dim(self.nblocks)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for k in 0..self.nblocks {
            let col = block_offset(k);
            out.view_mut((col, col), self.a[k].shape()).copy_from(&self.a[k]);
            if k + 1 < self.nblocks {
                let row = block_offset(k + 1);
                out.view_mut((row, col), self.b[k].shape()).copy_from(&self.b[k]);
            }
            if k >= 1 {
                let row = block_offset(k - 1);
                out.view_mut((row, col), self.c[k].shape()).copy_from(&self.c[k]);
            }
        }
        out
    }
}

fn m22(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

/// Explicit blocks for `t` (`T1`) and `tS` (`T2`) on the family `{P_n^{(0,b)}}`.
pub fn block_jacobi(b: u32, which: Which, nblocks: usize) -> BlockTridiag {
    let bf = b as f64;
    let mut a = Vec::with_capacity(nblocks);
    let mut bb = Vec::with_capacity(nblocks);
    let mut c = Vec::with_capacity(nblocks);
    for n in 0..nblocks {
        let nf = n as f64;
        let s0 = 2.0 * nf + bf;
        if n == 0 {
            match which {
                Which::T1 => {
                    a.push(DMatrix::from_element(1, 1, (bf + 1.0) / (bf + 2.0)));
                    bb.push(DMatrix::from_column_slice(2, 1, &[0.0, 1.0 / (bf + 2.0)]));
                }
                Which::T2 => {
                    a.push(DMatrix::zeros(1, 1));
                    bb.push(DMatrix::from_column_slice(2, 1, &[1.0, 0.0]));
                }
            }
            c.push(DMatrix::zeros(0, 0));
            continue;
        }
        match which {
            Which::T1 => {
                let den = s0 * (s0 + 2.0);
                a.push(m22(
                    (bf * bf + bf * (2.0 * nf + 3.0) + 2.0 * (nf * nf + nf + 1.0)) / den,
                    0.0,
                    0.0,
                    (bf * (bf + 1.0) + 2.0 * bf * nf + 2.0 * nf * (nf + 1.0)) / den,
                ));
                let den = (s0 + 1.0) * (s0 + 2.0);
                bb.push(m22(nf * (nf + bf + 2.0) / den, 0.0, 0.0, (nf + 1.0) * (nf + bf + 1.0) / den));
                if n == 1 {
                    let v = (bf + 1.0) / ((bf + 2.0) * (bf + 3.0));
                    c.push(DMatrix::from_row_slice(1, 2, &[0.0, v]));
                } else {
                    let den = s0 * (s0 + 1.0);
                    c.push(m22((nf - 1.0) * (nf + bf + 1.0) / den, 0.0, 0.0, nf * (nf + bf) / den));
                }
            }
            Which::T2 => {
                let v = 2.0 * nf * (nf + bf + 1.0) / (s0 * (s0 + 2.0));
                a.push(m22(0.0, v, v, 0.0));
                let den = (s0 + 1.0) * (s0 + 2.0);
                bb.push(m22(0.0, (nf + bf + 1.0) * (nf + bf + 2.0) / den, nf * (nf + 1.0) / den, 0.0));
                if n == 1 {
                    c.push(DMatrix::from_row_slice(1, 2, &[(bf + 1.0) / (bf + 3.0), 0.0]));
                } else {
                    let den = s0 * (s0 + 1.0);
                    c.push(m22(0.0, (nf - 1.0) * nf / den, (nf + bf) * (nf + bf + 1.0) / den, 0.0));
                }
            }
        }
    }
    BlockTridiag { a, b: bb, c, nblocks }
}

/// `‖T₁² + T₂²‖_max` over the leading `keep` blocks of a truncation, as a diagnostic.
pub fn t_square_residual(b: u32, keep: usize) -> f64 {
    let nb = keep + 2;
    let t1 = block_jacobi(b, Which::T1, nb).to_dense();
    let t2 = block_jacobi(b, Which::T2, nb).to_dense();
    let s = &t1 * &t1 + &t2 * &t2;
    let k = blocks_dim(keep);
    s.view((0, 0), (k, k)).amax()
}

fn poly_of_matrix(p: &Poly, t: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.nrows();
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for &c in p.0.iter().rev() {
        acc = &acc * t;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

/// Doolittle LU without pivoting; returns `U` (upper) and checks pivots are positive.
fn lu_upper(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut a = m.clone();
    for k in 0..n {
        let piv = a[(k, k)];
        if !(piv > 1e-14 * scale) {
            return Err(Error::Factorization(format!(
                "pivot {piv:e} at position {k}: modified weight is not positive definite"
            )));
        }
        for i in k + 1..n {
            let l = a[(i, k)] / piv;
            if l != 0.0 {
                for j in k..n {
                    a[(i, j)] -= l * a[(k, j)];
                }
            }
            a[(i, k)] = 0.0;
        }
    }
    Ok(a.upper_triangle())
}

fn upper_inverse(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut inv = DMatrix::<f64>::zeros(n, n);
    for col in 0..n {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in i + 1..=col {
                s -= u[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = s / u[(i, i)];
        }
    }
    inv
}

/// Orthogonal polynomials for `M·V` from those of `V = t^b I` by LU factorisation of
/// `α̃(T₁) + T₂ β̃(T₁) = LU`, where `M = diag(α̃ + tβ̃, α̃ - tβ̃)`.
///
/// Returns the columns of `P^{(0,b)} U^{-1}` in graded order, up to degree `maxdeg`
/// (`2·maxdeg + 1` elements). Columns are determined up to scaling.
pub fn weight_modify_lu(alpha: &Poly, beta: &Poly, b: u32, maxdeg: usize) -> Result<Vec<MPoly>> {
    let nblocks = maxdeg + 2 + alpha.degree() + beta.degree() + 1;
    let t1 = block_jacobi(b, Which::T1, nblocks).to_dense();
    let t2 = block_jacobi(b, Which::T2, nblocks).to_dense();
    let m = poly_of_matrix(alpha, &t1) + &t2 * poly_of_matrix(beta, &t1);
    let k = blocks_dim(maxdeg + 1);
    let lead = m.view((0, 0), (k, k)).into_owned();
    let uinv = upper_inverse(&lu_upper(&lead)?);
    let base = p_ab_family(0.0, b as f64, k);
    Ok((0..k)
        .map(|col| {
            (0..=col).fold(MPoly::zero(graded_label(col).0), |acc, row| {
                acc.axpy(uinv[(row, col)], &base[row])
            })
        })
        .collect())
}

/// Scalar analogue: orthogonal polynomials for `μ(t)(1-t)^a t^b` from the Jacobi
/// family `P_n^{(a,b)}(2t-1)` by LU factorisation of `μ(J)`.
///
/// Returns monomial coefficient lists for degrees `0..=maxdeg`.
pub fn scalar_weight_modify_lu(mu: &Poly, a: f64, b: f64, maxdeg: usize) -> Result<Vec<Poly>> {
    let n = maxdeg + 2 + mu.degree();
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let (al, be, ga) = jacobi_recurrence(k, a, b);
        jm[(k, k)] = (be + 1.0) / 2.0;
        if k + 1 < n {
            jm[(k + 1, k)] = al / 2.0;
        }
        if k >= 1 {
            jm[(k - 1, k)] = ga / 2.0;
        }
    }
    let m = poly_of_matrix(mu, &jm);
    let lead = m.view((0, 0), (maxdeg + 1, maxdeg + 1)).into_owned();
    let uinv = upper_inverse(&lu_upper(&lead)?);
    let base: Vec<Poly> = (0..=maxdeg).map(|k| Poly(jacobi_shifted_coeffs(k, a, b))).collect();
    Ok((0..=maxdeg)
        .map(|col| {
            (0..=col).fold(Poly(vec![0.0; col + 1]), |acc, row| {
                &acc + &base[row].scale(uinv[(row, col)])
            })
        })
        .collect())
}

/// Coordinates of `poly` in the family `{p_n^{(0,b),ν}}` (graded order).
pub fn expand_in_base(poly: &MPoly, b: u32) -> Vec<f64> {
    let k = poly.coeffs().len();
    let base = p_ab_family(0.0, b as f64, k);
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = poly.coeffs()[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            s -= base[j].coeffs().get(i).copied().unwrap_or(0.0) * xj;
        }
        x[i] = s / base[i].coeffs()[i];
    }
    x
}

/// `𝔯_n^{(b)} = 10n² + n(13b + 19) + 4(b + 1)(b + 2)`.
pub fn rq_const(b: u32, n: usize) -> i64 {
    let (b, n) = (b as i64, n as i64);
    10 * n * n + n * (13 * b + 19) + 4 * (b + 1) * (b + 2)
}

/// Value split as `c (1,1)ᵀ + t·e (1,-1)ᵀ` with `e = d/t` kept explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub c: f64,
    pub d_over_t: f64,
}

impl Split {
    pub fn value(&self, t: f64) -> [f64; 2] {
        [self.c + t * self.d_over_t, self.c - t * self.d_over_t]
    }

    fn axpy(self, s: f64, o: Split) -> Split {
        Split { c: self.c + s * o.c, d_over_t: self.d_over_t + s * o.d_over_t }
    }

    fn scale(self, s: f64) -> Split {
        Split { c: self.c * s, d_over_t: self.d_over_t * s }
    }
}

/// Polynomial version of [`Split`].
#[derive(Debug, Clone, PartialEq)]
struct SplitPoly {
    c: Poly,
    d_over_t: Poly,
}

impl SplitPoly {
    fn axpy(&self, s: f64, o: &SplitPoly) -> SplitPoly {
        SplitPoly { c: &self.c + &o.c.scale(s), d_over_t: &self.d_over_t + &o.d_over_t.scale(s) }
    }

    fn scale(&self, s: f64) -> SplitPoly {
        SplitPoly { c: self.c.scale(s), d_over_t: self.d_over_t.scale(s) }
    }
}

fn v_b_split_at(b: u32, n: usize, t: f64) -> Split {
    let bf = b as f64;
    let nf = n as f64;
    let p = jacobi(n, 1.0, bf + 1.0, 2.0 * t - 1.0);
    let q = jacobi(n, 0.0, bf + 2.0, 2.0 * t - 1.0);
    Split {
        c: 0.5 * ((bf + 1.0) * (2.0 - t) * p - 2.0 * (nf + 1.0) * t * q),
        d_over_t: 0.5 * (-(bf + 1.0) * p - 2.0 * (nf + 1.0) * q),
    }
}

fn v_b_split_poly(b: u32, n: usize) -> SplitPoly {
    let bf = b as f64;
    let nf = n as f64;
    let p = Poly(jacobi_shifted_coeffs(n, 1.0, bf + 1.0));
    let q = Poly(jacobi_shifted_coeffs(n, 0.0, bf + 2.0));
    let two_minus_t = Poly(vec![2.0, -1.0]);
    SplitPoly {
        c: &(&two_minus_t * &p).scale(0.5 * (bf + 1.0)) - &(&Poly::t() * &q).scale(nf + 1.0),
        d_over_t: &p.scale(-0.5 * (bf + 1.0)) - &q.scale(nf + 1.0),
    }
}

/// `v_n^{(b)}(t)`.
pub fn v_b_eval(b: u32, n: usize, t: f64) -> [f64; 2] {
    v_b_split_at(b, n, t).value(t)
}

fn q1_prefactors(b: u32, n: usize) -> (f64, f64, f64) {
    let bf = b as f64;
    let nf = n as f64;
    let k1 = (2.0 * nf + bf + 1.0) / ((nf + 1.0) * rq_const(b, n) as f64);
    let big = (2.0 * nf + bf + 2.0) * (2.0 * nf + bf + 3.0);
    (k1, big, nf + bf + 2.0)
}

/// `q_n^{(b),ν}` at `t` in split form (finite `d/t` at `t = 0`).
pub fn q_split(b: u32, nu: u8, n: usize, t: f64) -> Result<Split> {
    check_p_index(nu, n)?;
    let q1 = |n: usize| {
        let (k1, big, w) = q1_prefactors(b, n);
        let r = jacobi(n, 1.0, b as f64, 2.0 * t - 1.0);
        let first = Split { c: 0.5 * (2.0 - t) * r, d_over_t: -0.5 * r };
        first.scale(big).axpy(-w, v_b_split_at(b, n, t)).scale(k1)
    };
    Ok(if nu == 1 {
        q1(n)
    } else {
        v_b_split_at(b, n - 1, t).scale(-1.0 / n as f64).axpy(-1.0, q1(n))
    })
}

/// `q_n^{(b),ν}(t)`.
pub fn q_eval(b: u32, nu: u8, n: usize, t: f64) -> Result<[f64; 2]> {
    Ok(q_split(b, nu, n, t)?.value(t))
}

/// Coefficients of `q_n^{(b),ν}` in `𝓜`, truncated to its true degree `n`.
pub fn q_coeffs(b: u32, nu: u8, n: usize) -> Result<MPoly> {
    check_p_index(nu, n)?;
    let q1 = |n: usize| {
        let (k1, big, w) = q1_prefactors(b, n);
        let r = Poly(jacobi_shifted_coeffs(n, 1.0, b as f64));
        let first = SplitPoly { c: (&Poly(vec![2.0, -1.0]) * &r).scale(0.5), d_over_t: r.scale(-0.5) };
        first.scale(big).axpy(-w, &v_b_split_poly(b, n)).scale(k1)
    };
    let sp = if nu == 1 {
        q1(n)
    } else {
        v_b_split_poly(b, n - 1).scale(-1.0 / n as f64).axpy(-1.0, &q1(n))
    };
    let d = if n == 0 { Poly(Vec::new()) } else { sp.d_over_t.truncated(n - 1) };
    Ok(MPoly::from_split(&sp.c.truncated(n), &d))
}

/// Leading coefficient vector of `q_n^{(b),ν}` (coefficient of `t^n`).
pub fn leading_coeffs(b: u32, nu: u8, n: usize) -> Result<[f64; 2]> {
    check_p_index(nu, n)?;
    let bf = b as f64;
    let nf = n as f64;
    let r = rq_const(b, n) as f64;
    // (2n+b+1)! / (n! (n+b+1)!) = C(2n+b+1, n)
    let ratio = binomial(2 * n + b as usize + 1, n);
    Ok(if nu == 1 {
        let s = ratio / r;
        [
            s * (2.0 * nf * nf + (5.0 * bf + 7.0) * nf + 2.0 * bf * (bf + 3.0) + 4.0),
            s * 2.0 * (2.0 * nf + bf + 1.0) * (2.0 * nf + bf + 2.0),
        ]
    } else {
        let s = 2.0 * ratio * (2.0 * nf + bf + 2.0) * (2.0 * nf + bf + 1.0) / r;
        [s, -s]
    })
}

/// Block-bidiagonal operator: `diag[n]` is block `(n, n)`, `off[n]` is block
/// `(n, n+1)` when upper and `(n+1, n)` when lower.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBidiag {
    pub diag: Vec<DMatrix<f64>>,
    pub off: Vec<DMatrix<f64>>,
    pub upper: bool,
    pub nblocks: usize,
}

impl BlockBidiag {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = blocks_dim(self.nblocks);
        let mut out = DMatrix::zeros(n, n);
        for k in 0..self.nblocks {
            let o = block_offset(k);
            out.view_mut((o, o), self.diag[k].shape()).copy_from(&self.diag[k]);
            if k + 1 < self.nblocks {
                let o1 = block_offset(k + 1);
                let at = if self.upper { (o, o1) } else { (o1, o) };
                out.view_mut(at, self.off[k].shape()).copy_from(&self.off[k]);
            }
        }
        out
    }

    /// Block `(row, col)`, zero when outside the band.
    pub fn block(&self, row: usize, col: usize) -> DMatrix<f64> {
        let shape = (block_size(row), block_size(col));
        if row == col {
            self.diag[row].clone()
        } else if self.upper && col == row + 1 {
            self.off[row].clone()
        } else if !self.upper && row == col + 1 {
            self.off[col].clone()
        } else {
            DMatrix::zeros(shape.0, shape.1)
        }
    }
}

/// Lowering `L^{(b)}` (`D Q = P L`, `D = diag(1, 1-t)`) and raising `R^{(b)}` (`P = Q R`).
pub fn lr_blocks(b: u32, nblocks: usize) -> (BlockBidiag, BlockBidiag) {
    let bf = b as f64;
    let mut ld = Vec::new();
    let mut lo = Vec::new();
    let mut rd = Vec::new();
    let mut ro = Vec::new();
    for n in 0..nblocks {
        let nf = n as f64;
        let r = rq_const(b, n) as f64;
        let s = 2.0 * nf + bf;
        if n == 0 {
            ld.push(DMatrix::from_element(1, 1, (bf + 3.0) / (4.0 * (bf + 2.0))));
            lo.push(DMatrix::from_column_slice(2, 1, &[(bf + 2.0), -1.0]) / (4.0 * (bf + 2.0)));
            rd.push(DMatrix::from_element(1, 1, 2.0));
            let f = 2.0 * (bf + 1.0) / ((bf + 3.0) * (bf + 3.0));
            ro.push(DMatrix::from_row_slice(1, 2, &[f * (bf + 2.0), -f]));
            continue;
        }
        let w = (nf + bf + 1.0) * (6.0 * nf + 3.0 * bf + 5.0);
        ld.push(m22(1.0, 0.0, w / r, (s + 1.0) * (s + 3.0) / r));
        let f = (s + 1.0) / r;
        lo.push(m22(-f * (nf + bf + 2.0), f * (nf + bf + 2.0), f * (nf + 1.0), -f * (nf + 1.0)));
        let g1 = nf / (2.0 * (s + 1.0) * (s + 1.0) * (s + 2.0));
        let g2 = 2.0 * (nf + bf + 1.0) / (s + 1.0);
        rd.push(m22(g1 * r, g1 * w, 0.0, g2));
        let h1 = nf / (2.0 * (s + 2.0) * (s + 3.0));
        let h2 = 2.0 * (nf + bf + 1.0) / ((s + 3.0) * (s + 3.0));
        let (e1, e2) = (nf + bf + 2.0, nf + 1.0);
        ro.push(m22(-h1 * e1, h1 * e2, h2 * e1, -h2 * e2));
    }
    (
        BlockBidiag { diag: ld, off: lo, upper: false, nblocks },
        BlockBidiag { diag: rd, off: ro, upper: true, nblocks },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mpoly_storage() {
        let p = MPoly::from_components(&[1.0, 2.0, 3.0], &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 1.0, 1.0, 2.0, 1.0]);
        assert_eq!(p.eval(2.0), [1.0 + 4.0 + 12.0, 1.0 - 4.0]);
        assert!(MPoly::from_components(&[1.0], &[2.0]).is_err());
        assert!(MPoly::new(vec![1.0, 2.0]).is_err());
        assert_eq!(graded_label(graded_index(3, 2)), (3, 2));
        assert_eq!(graded_label(graded_index(3, 1)), (3, 1));
        assert_eq!(graded_label(0), (0, 1));
    }

    #[test]
    fn multiplication_operators() {
        let one = MPoly::unit(0);
        assert_eq!(apply_operator(MulOp::T, &one, 4).unwrap(), MPoly::unit(2));
        assert_eq!(apply_operator(MulOp::TS, &one, 4).unwrap(), MPoly::unit(1));
        assert!(apply_operator(MulOp::T, &MPoly::unit(4), 2).is_err());
        let p = MPoly::new(vec![0.3, -1.2, 0.7, 2.0, 0.1]).unwrap();
        for &t in &[0.2, 0.9] {
            let v = p.eval(t);
            let tv = p.mul_t().eval(t);
            let tsv = p.mul_ts().eval(t);
            assert_relative_eq!(tv[0], t * v[0], epsilon = 1e-14);
            assert_relative_eq!(tsv[1], -t * v[1], epsilon = 1e-14);
        }
    }

    #[test]
    fn scaled_identity_family() {
        assert_eq!(p_ab_eval(0.3, 1.0, 1, 0, 0.4).unwrap(), [1.0, 1.0]);
        assert_eq!(p_ab_eval(0.3, 1.0, 2, 1, 0.4).unwrap(), [0.4, -0.4]);
        let v = p_ab_eval(0.0, 0.0, 1, 1, 0.4).unwrap();
        assert_relative_eq!(v[0], -0.2, epsilon = 1e-15);
        assert!(p_ab_eval(0.0, 0.0, 2, 0, 0.4).is_err());
        for n in 0..6 {
            for nu in [1u8, 2] {
                if nu == 2 && n == 0 {
                    continue;
                }
                let c = p_ab_coeffs(1.0, 2.0, nu, n).unwrap();
                let t = 0.37;
                let (e, v) = (p_ab_eval(1.0, 2.0, nu, n, t).unwrap(), c.eval(t));
                assert_relative_eq!(e[0], v[0], epsilon = 1e-12);
                assert_relative_eq!(e[1], v[1], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn block_examples() {
        let t1 = block_jacobi(0, Which::T1, 3);
        assert_relative_eq!(t1.a[0][(0, 0)], 0.5);
        assert_eq!(t1.b[0].as_slice(), &[0.0, 0.5]);
        let t2 = block_jacobi(0, Which::T2, 3);
        assert_eq!(t2.a[0][(0, 0)], 0.0);
        assert_eq!(t2.b[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(t2.a[1], m22(0.0, 0.5, 0.5, 0.0));
        assert_eq!(t1.c[1].shape(), (1, 2));
    }

    #[test]
    fn t_times_p0_expands_per_blocks() {
        let x = expand_in_base(&p_ab_coeffs(0.0, 0.0, 1, 0).unwrap().mul_t(), 0);
        assert_relative_eq!(x[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(x[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(x[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn dense_operator_matches_multiplication() {
        for b in 0..3 {
            let nb = 6;
            let k = blocks_dim(nb - 1);
            let base = p_ab_family(0.0, b as f64, blocks_dim(nb));
            for (which, op) in [(Which::T1, MulOp::T), (Which::T2, MulOp::TS)] {
                let dense = block_jacobi(b, which, nb).to_dense();
                for col in 0..k {
                    let img = apply_operator(op, &base[col], nb).unwrap();
                    let coords = expand_in_base(&img, b);
                    for row in 0..coords.len().min(dense.nrows()) {
                        assert!((coords[row] - dense[(row, col)]).abs() < 1e-10, "b={b} {which:?} ({row},{col})");
                    }
                }
            }
        }
    }

    #[test]
    fn rq_values() {
        assert_eq!(rq_const(0, 0), 8);
        assert_eq!(rq_const(0, 1), 37);
        assert_eq!(rq_const(1, 0), 24);
    }

    #[test]
    fn q_examples() {
        for b in 0..3 {
            let v = v_b_eval(b, 0, 0.0);
            assert_eq!(v, [b as f64 + 1.0, b as f64 + 1.0]);
            let t = 0.3;
            let v = v_b_eval(b, 0, t);
            let bf = b as f64;
            assert_relative_eq!(v[0], (bf + 1.0) * (1.0 - t) - 2.0 * t, epsilon = 1e-15);
        }
        for &t in &[0.0, 0.4, 1.0] {
            let q = q_eval(0, 1, 0, t).unwrap();
            assert_relative_eq!(q[0], 0.5, epsilon = 1e-15);
            assert_relative_eq!(q[1], 0.5, epsilon = 1e-15);
        }
        let lc = leading_coeffs(0, 2, 1).unwrap();
        assert_relative_eq!(lc[0], 72.0 / 37.0, epsilon = 1e-15);
        assert_relative_eq!(lc[1], -72.0 / 37.0, epsilon = 1e-15);
        assert_eq!(leading_coeffs(0, 1, 0).unwrap(), [0.5, 0.5]);
        assert!(q_eval(0, 2, 0, 0.1).is_err());
    }

    #[test]
    fn q_coefficients_match_values_and_leading_terms() {
        for b in 0..4 {
            for n in 0..8 {
                for nu in [1u8, 2] {
                    if nu == 2 && n == 0 {
                        continue;
                    }
                    let c = q_coeffs(b, nu, n).unwrap();
                    for &t in &[0.0, 0.25, 0.8, 1.0] {
                        let (a, e) = (c.eval(t), q_eval(b, nu, n, t).unwrap());
                        assert!((a[0] - e[0]).abs() < 1e-9 && (a[1] - e[1]).abs() < 1e-9);
                    }
                    let lc = leading_coeffs(b, nu, n).unwrap();
                    let (f1, f2) = c.components();
                    assert_relative_eq!(f1[n], lc[0], max_relative = 1e-9);
                    assert_relative_eq!(f2[n], lc[1], max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn lr_examples() {
        let (l, r) = lr_blocks(0, 3);
        assert_eq!(r.diag[0][(0, 0)], 2.0);
        assert_relative_eq!(l.diag[0][(0, 0)], 3.0 / 8.0);
        assert_relative_eq!(l.diag[0][(0, 0)] * r.diag[0][(0, 0)], 0.75);
    }

    #[test]
    fn lu_identity_modification_is_base() {
        let out = weight_modify_lu(&Poly::constant(1.0), &Poly(vec![]), 1, 4).unwrap();
        let base = p_ab_family(0.0, 1.0, out.len());
        for (o, p) in out.iter().zip(&base) {
            let d = o.axpy(-1.0, p);
            assert!(d.coeffs().iter().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn lu_rejects_indefinite() {
        // M = diag(1 - 2t, 1 - 2t)·... changes sign on (0, 1).
        let res = weight_modify_lu(&Poly(vec![-1.0, 0.0]), &Poly(vec![]), 0, 3);
        assert!(matches!(res, Err(Error::Factorization(_))));
    }

    #[test]
    fn scalar_lu_reproduces_jacobi() {
        // μ(t) = 1 - t turns (0,1) Jacobi into (1,1) Jacobi, up to scaling.
        let out = scalar_weight_modify_lu(&Poly(vec![1.0, -1.0]), 0.0, 1.0, 5).unwrap();
        for (n, p) in out.iter().enumerate() {
            let e = Poly(jacobi_shifted_coeffs(n, 1.0, 1.0));
            let s = e.coeff(n) / p.coeff(n);
            for k in 0..=n {
                assert_relative_eq!(p.coeff(k) * s, e.coeff(k), epsilon = 1e-9, max_relative = 1e-10);
            }
        }
    }
}
