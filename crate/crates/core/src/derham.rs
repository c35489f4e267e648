//! Sparse recurrences for grad, curl and div on the disk and on periodic and
//! finite cylinders, and the decomposition of the discrete de Rham complex
//! into small sub-complexes whose exactness can be checked by rank counts.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, Vector3};

use crate::diskbases::{n_pm_eval, t_eval};
use crate::error::{Error, Result};
use crate::geometry::{CVec2, DiskPoint, C64};
use crate::modm::rq_const;
use crate::univariate::{legendre_eval, weighted_ultra32_eval};
use crate::zernike::{w_eval, z_eval, Family, ModeIndex, Sign};

pub type CVec3 = Vector3<C64>;

/// One term `coefficient · target` of an operator image.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm<T> {
    pub coefficient: C64,
    pub target: T,
}

impl<T> ExpansionTerm<T> {
    fn new(coefficient: C64, target: T) -> Self {
        Self { coefficient, target }
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn n_pm(m: i32, j: usize, sign: Sign) -> ModeIndex {
    ModeIndex::new(m, j, Family::NormalPm { sign })
}

fn z0(m: i32, j: usize) -> ModeIndex {
    ModeIndex::new(m, j, Family::ScalarZ { lambda: 0.0 })
}

/// `κ_{mj}`, the coefficient in `curl n_{mj}^- = -κ_{mj} z_{mj}`.
pub fn kappa(m: i32, j: usize) -> C64 {
    if m == 0 {
        return re(4.0 * j as f64);
    }
    let d = (2 * j + m.unsigned_abs() as usize) as f64;
    let r = rq_const(m.unsigned_abs() - 1, j) as f64;
    C64::new(0.0, 4.0 * d * (d + 1.0) * (d + 2.0) / r * m.signum() as f64)
}

fn check_pm(m: i32, j: usize, sign: Sign) -> Result<()> {
    n_pm(m, j, sign).validate()
}

/// `∇w_{mj} = -(j+1) n_{m,j+1}^+`.
pub fn grad_w(m: i32, j: usize) -> Vec<ExpansionTerm<ModeIndex>> {
    vec![ExpansionTerm::new(re(-(j as f64 + 1.0)), n_pm(m, j + 1, Sign::Plus))]
}

/// `curl n^+ = 0`, `curl n_{mj}^- = -κ_{mj} z_{mj}` (with `curl f = -∂_y f₁ + ∂_x f₂`).
pub fn curl_n(m: i32, j: usize, sign: Sign) -> Result<Vec<ExpansionTerm<ModeIndex>>> {
    check_pm(m, j, sign)?;
    Ok(match sign {
        Sign::Plus => Vec::new(),
        Sign::Minus => vec![ExpansionTerm::new(-kappa(m, j), z0(m, j))],
    })
}

/// `div t^+ = 0`, `div t_{mj}^- = κ_{mj} z_{mj}`.
pub fn div_t(m: i32, j: usize, sign: Sign) -> Result<Vec<ExpansionTerm<ModeIndex>>> {
    check_pm(m, j, sign)?;
    Ok(match sign {
        Sign::Plus => Vec::new(),
        Sign::Minus => vec![ExpansionTerm::new(kappa(m, j), z0(m, j))],
    })
}

/// Cylinder type: `z ∈ [0, 2π)` periodic, or `z ∈ [-1, 1]` with boundary conditions at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CylDomain {
    Periodic,
    Finite,
}

/// Basis element kind: disk factor, slot and (per domain) `z` factor.
///
/// | kind | field | periodic | finite |
/// |---|---|---|---|
/// | `W` | `w_{mj}` | `e^{ikz}` | `(1-z²)C_k^{(3/2)}` |
/// | `NH` | `(n_{mj}^±; 0)` | `e^{ikz}` | `(1-z²)C_k^{(3/2)}` |
/// | `WV` | `(0; w_{mj})` | `e^{ikz}` | `P_k` |
/// | `TH` | `(t_{mj}^±; 0)` | `e^{ikz}` | `P_k` |
/// | `ZV` | `(0; z_{mj})` | `e^{ikz}` | `(1-z²)C_k^{(3/2)}` |
/// | `Z` | `z_{mj}` | `e^{ikz}` | `P_k` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CylKind {
    W,
    NH(Sign),
    WV,
    TH(Sign),
    ZV,
    Z,
}

/// `z`-factor of a cylinder basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZFactor {
    Exp,
    LegendreP,
    WeightedC32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CylinderModeIndex {
    pub domain: CylDomain,
    pub m: i32,
    pub j: usize,
    pub k: i64,
    pub kind: CylKind,
}

impl fmt::Display for CylinderModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            CylKind::W => "W".to_string(),
            CylKind::NH(s) => format!("NH{}", s.symbol()),
            CylKind::WV => "WV".to_string(),
            CylKind::TH(s) => format!("TH{}", s.symbol()),
            CylKind::ZV => "ZV".to_string(),
            CylKind::Z => "Z".to_string(),
        };
        write!(f, "{name}[m={},j={},k={}]", self.m, self.j, self.k)
    }
}

/// Scalar or 3-vector value of a cylinder basis element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CylValue {
    Scalar(C64),
    Vector(CVec3),
}

impl CylValue {
    pub fn scalar(&self) -> Option<C64> {
        match self {
            CylValue::Scalar(v) => Some(*v),
            CylValue::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<CVec3> {
        match self {
            CylValue::Vector(v) => Some(*v),
            CylValue::Scalar(_) => None,
        }
    }
}

fn horizontal(v: CVec2) -> CVec3 {
    CVec3::new(v[0], v[1], C64::new(0.0, 0.0))
}

fn vertical(v: C64) -> CVec3 {
    CVec3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), v)
}

impl CylinderModeIndex {
    pub fn new(domain: CylDomain, kind: CylKind, m: i32, j: usize, k: i64) -> Self {
        Self { domain, m, j, k, kind }
    }

    /// Same kind and domain with shifted indices.
    fn with(&self, kind: CylKind, j: usize, k: i64) -> Self {
        Self { kind, j, k, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain == CylDomain::Finite && self.k < 0 {
            return Err(Error::Index(format!("finite cylinder needs k >= 0, got {}", self.k)));
        }
        match self.kind {
            CylKind::NH(s) | CylKind::TH(s) => check_pm(self.m, self.j, s),
            _ => Ok(()),
        }
    }

    pub fn z_factor(&self) -> ZFactor {
        match (self.domain, self.kind) {
            (CylDomain::Periodic, _) => ZFactor::Exp,
            (_, CylKind::W | CylKind::NH(_) | CylKind::ZV) => ZFactor::WeightedC32,
            _ => ZFactor::LegendreP,
        }
    }

    fn z_value(&self, z: f64) -> C64 {
        match self.z_factor() {
            ZFactor::Exp => C64::from_polar(1.0, self.k as f64 * z),
            ZFactor::LegendreP => re(legendre_eval(self.k as usize, z)),
            ZFactor::WeightedC32 => re(weighted_ultra32_eval(self.k as usize, z)),
        }
    }

    /// Closed-form value at `(x, y, z)`.
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<CylValue> {
        self.validate()?;
        let p = DiskPoint::new(x, y);
        let (m, j) = (self.m, self.j);
        let f = self.z_value(z);
        Ok(match self.kind {
            CylKind::W => CylValue::Scalar(w_eval(m, j, p) * f),
            CylKind::Z => CylValue::Scalar(z_eval(0.0, m, j, p) * f),
            CylKind::NH(s) => CylValue::Vector(horizontal(n_pm_eval(m, j, s, p)?) * f),
            CylKind::TH(s) => CylValue::Vector(horizontal(t_eval(m, j, s, p)?) * f),
            CylKind::WV => CylValue::Vector(vertical(w_eval(m, j, p) * f)),
            CylKind::ZV => CylValue::Vector(vertical(z_eval(0.0, m, j, p) * f)),
        })
    }

    /// `∂_z` of the `z`-factor as `(coefficient, new k)` in the complementary factor.
    fn dz(&self) -> (C64, i64) {
        let k = self.k;
        match self.domain {
            CylDomain::Periodic => (C64::new(0.0, k as f64), k),
            CylDomain::Finite => (re(-((k + 1) * (k + 2)) as f64), k + 1),
        }
    }
}

fn kind_err(op: &str, idx: &CylinderModeIndex) -> Error {
    Error::Index(format!("{op} is not defined on {idx}"))
}

/// Gradient of a scalar `H¹` basis element.
pub fn cyl_grad(idx: &CylinderModeIndex) -> Result<Vec<ExpansionTerm<CylinderModeIndex>>> {
    idx.validate()?;
    if idx.kind != CylKind::W {
        return Err(kind_err("grad", idx));
    }
    let (c, k1) = idx.dz();
    let mut out = vec![ExpansionTerm::new(
        re(-(idx.j as f64 + 1.0)),
        idx.with(CylKind::NH(Sign::Plus), idx.j + 1, idx.k),
    )];
    if c != C64::new(0.0, 0.0) {
        out.push(ExpansionTerm::new(c, idx.with(CylKind::WV, idx.j, k1)));
    }
    Ok(out)
}

/// Curl of an `H(curl)` basis element, `(∂_y h - ∂_z g, ∂_z f - ∂_x h, ∂_x g - ∂_y f)`.
pub fn cyl_curl(idx: &CylinderModeIndex) -> Result<Vec<ExpansionTerm<CylinderModeIndex>>> {
    idx.validate()?;
    let (c, k1) = idx.dz();
    let zero = C64::new(0.0, 0.0);
    let mut out = Vec::new();
    match idx.kind {
        CylKind::NH(s) => {
            if c != zero {
                out.push(ExpansionTerm::new(c, idx.with(CylKind::TH(s), idx.j, k1)));
            }
            if s == Sign::Minus {
                out.push(ExpansionTerm::new(-kappa(idx.m, idx.j), idx.with(CylKind::ZV, idx.j, idx.k)));
            }
        }
        CylKind::WV => out.push(ExpansionTerm::new(
            re(idx.j as f64 + 1.0),
            idx.with(CylKind::TH(Sign::Plus), idx.j + 1, idx.k),
        )),
        _ => return Err(kind_err("curl", idx)),
    }
    Ok(out)
}

/// Divergence of an `H(div)` basis element.
pub fn cyl_div(idx: &CylinderModeIndex) -> Result<Vec<ExpansionTerm<CylinderModeIndex>>> {
    idx.validate()?;
    let zero = C64::new(0.0, 0.0);
    Ok(match idx.kind {
        CylKind::TH(Sign::Plus) => Vec::new(),
        CylKind::TH(Sign::Minus) => {
            vec![ExpansionTerm::new(kappa(idx.m, idx.j), idx.with(CylKind::Z, idx.j, idx.k))]
        }
        CylKind::ZV => {
            let (c, k1) = idx.dz();
            if c == zero {
                Vec::new()
            } else {
                vec![ExpansionTerm::new(c, idx.with(CylKind::Z, idx.j, k1))]
            }
        }
        _ => return Err(kind_err("div", idx)),
    })
}

/// Apply a linear operator to a combination and merge equal targets exactly.
pub fn apply_linear<T, F>(terms: &[ExpansionTerm<T>], op: F) -> Result<Vec<ExpansionTerm<T>>>
where
    T: Clone + PartialEq,
    F: Fn(&T) -> Result<Vec<ExpansionTerm<T>>>,
{
    let mut acc: Vec<ExpansionTerm<T>> = Vec::new();
    for t in terms {
        for img in op(&t.target)? {
            let c = t.coefficient * img.coefficient;
            match acc.iter_mut().find(|a| a.target == img.target) {
                Some(a) => a.coefficient += c,
                None => acc.push(ExpansionTerm::new(c, img.target)),
            }
        }
    }
    acc.retain(|a| a.coefficient != C64::new(0.0, 0.0));
    Ok(acc)
}

/// Where a complex lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Disk,
    Periodic,
    Finite,
}

impl Domain {
    fn cyl(self) -> Option<CylDomain> {
        match self {
            Domain::Disk => None,
            Domain::Periodic => Some(CylDomain::Periodic),
            Domain::Finite => Some(CylDomain::Finite),
        }
    }
}

/// A basis element of any of the three complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Disk element: `w` (stage 0), `n^±` (stage 1) or `z` (stage 2).
    Disk { kind: DiskKind, m: i32, j: usize },
    Cyl(CylinderModeIndex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiskKind {
    W,
    N(Sign),
    Z,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Disk { kind, m, j } => match kind {
                DiskKind::W => write!(f, "w[m={m},j={j}]"),
                DiskKind::N(s) => write!(f, "n{}[m={m},j={j}]", s.symbol()),
                DiskKind::Z => write!(f, "z[m={m},j={j}]"),
            },
            BasisLabel::Cyl(c) => write!(f, "{c}"),
        }
    }
}

fn disk_label(kind: DiskKind, m: i32, j: usize) -> BasisLabel {
    BasisLabel::Disk { kind, m, j }
}

/// The differential applied at the stage a label lives in.
pub fn differential(label: &BasisLabel) -> Result<Vec<ExpansionTerm<BasisLabel>>> {
    let lift_disk = |terms: Vec<ExpansionTerm<ModeIndex>>| -> Vec<ExpansionTerm<BasisLabel>> {
        terms
            .into_iter()
            .map(|t| {
                let kind = match t.target.family {
                    Family::NormalPm { sign } => DiskKind::N(sign),
                    _ => DiskKind::Z,
                };
                ExpansionTerm::new(t.coefficient, disk_label(kind, t.target.m, t.target.j))
            })
            .collect()
    };
    let lift_cyl = |terms: Vec<ExpansionTerm<CylinderModeIndex>>| -> Vec<ExpansionTerm<BasisLabel>> {
        terms.into_iter().map(|t| ExpansionTerm::new(t.coefficient, BasisLabel::Cyl(t.target))).collect()
    };
    match *label {
        BasisLabel::Disk { kind, m, j } => Ok(match kind {
            DiskKind::W => lift_disk(grad_w(m, j)),
            DiskKind::N(s) => lift_disk(curl_n(m, j, s)?),
            DiskKind::Z => Vec::new(),
        }),
        BasisLabel::Cyl(c) => Ok(match c.kind {
            CylKind::W => lift_cyl(cyl_grad(&c)?),
            CylKind::NH(_) | CylKind::WV => lift_cyl(cyl_curl(&c)?),
            CylKind::TH(_) | CylKind::ZV => lift_cyl(cyl_div(&c)?),
            CylKind::Z => Vec::new(),
        }),
    }
}

/// Which family of sub-complexes a chain belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    /// `w_{mj}`-headed chain through `n^±_{m,j+1}` to `z_{m,j+1}`.
    Main,
    /// `m ≠ 0`, `j = 0`: starts at `n^-_{m0}`.
    NormalTail,
    /// Finite cylinder, `m ≠ 0`: `P₀ t^-_{m0} → P₀ z_{m0}`.
    TangentialTail,
    /// `m = 0`, `j = 0`: the vertical `(0; z₀₀)` chain.
    VerticalTail,
    /// Finite cylinder: `P₀(0; w_{mj}) → P₀ t^±_{m,j+1} → P₀ z_{m,j+1}`.
    Lowest,
    /// The lone constant `z₀₀` (disk) or `P₀ z₀₀` (finite cylinder).
    Residue,
}

/// A short complex `0 → V₀ → V₁ → V₂ → V₃ → 0` (some spaces may be empty).
#[derive(Debug, Clone)]
pub struct ComplexChain {
    pub domain: Domain,
    pub kind: ChainKind,
    pub m: i32,
    pub j: usize,
    pub k: i64,
    pub spaces: Vec<Vec<BasisLabel>>,
    /// `maps[i]` sends `spaces[i]` to `spaces[i+1]` (columns are sources).
    pub maps: Vec<DMatrix<C64>>,
}

impl ComplexChain {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = &BasisLabel> {
        self.spaces.iter().flatten()
    }

    pub fn label(&self) -> String {
        format!("{:?}/{:?}(m={}, j={}, k={})", self.domain, self.kind, self.m, self.j, self.k)
    }
}

fn assemble(
    domain: Domain,
    kind: ChainKind,
    (m, j, k): (i32, usize, i64),
    spaces: Vec<Vec<BasisLabel>>,
) -> Result<ComplexChain> {
    for s in spaces.iter().flatten() {
        if let BasisLabel::Cyl(c) = s {
            c.validate()?;
        }
    }
    let mut maps = Vec::new();
    for i in 0..spaces.len().saturating_sub(1) {
        let (src, dst) = (&spaces[i], &spaces[i + 1]);
        let mut mat = DMatrix::<C64>::zeros(dst.len(), src.len());
        for (col, s) in src.iter().enumerate() {
            for t in differential(s)? {
                let row = dst.iter().position(|d| *d == t.target).ok_or_else(|| {
                    Error::Index(format!("image {} of {s} lies outside the chain", t.target))
                })?;
                mat[(row, col)] += t.coefficient;
            }
        }
        maps.push(mat);
    }
    Ok(ComplexChain { domain, kind, m, j, k, spaces, maps })
}

/// The sub-complex of the given kind at `(m, j, k)` (`k` ignored on the disk).
pub fn subcomplex(domain: Domain, kind: ChainKind, m: i32, j: usize, k: i64) -> Result<ComplexChain> {
    use CylKind::*;
    use Sign::{Minus, Plus};
    let bad = || Error::Index(format!("no {kind:?} chain on {domain:?} at (m={m}, j={j}, k={k})"));
    let spaces: Vec<Vec<BasisLabel>> = match domain.cyl() {
        None => {
            let d = disk_label;
            match kind {
                ChainKind::Main => vec![
                    vec![d(DiskKind::W, m, j)],
                    vec![d(DiskKind::N(Plus), m, j + 1), d(DiskKind::N(Minus), m, j + 1)],
                    vec![d(DiskKind::Z, m, j + 1)],
                ],
                ChainKind::NormalTail if m != 0 && j == 0 => {
                    vec![vec![], vec![d(DiskKind::N(Minus), m, 0)], vec![d(DiskKind::Z, m, 0)]]
                }
                ChainKind::Residue if m == 0 && j == 0 => vec![vec![], vec![], vec![d(DiskKind::Z, 0, 0)]],
                _ => return Err(bad()),
            }
        }
        Some(cd) => {
            let c = |kind, jj, kk| BasisLabel::Cyl(CylinderModeIndex::new(cd, kind, m, jj, kk));
            let fin = cd == CylDomain::Finite;
            let (k1, k_next) = if fin { (k + 1, k + 1) } else { (k, k) };
            match kind {
                ChainKind::Main => vec![
                    vec![c(W, j, k)],
                    vec![c(NH(Plus), j + 1, k), c(NH(Minus), j + 1, k), c(WV, j, k1)],
                    vec![c(TH(Plus), j + 1, k_next), c(TH(Minus), j + 1, k_next), c(ZV, j + 1, k)],
                    vec![c(Z, j + 1, k_next)],
                ],
                ChainKind::NormalTail if m != 0 && j == 0 => vec![
                    vec![],
                    vec![c(NH(Minus), 0, k)],
                    vec![c(TH(Minus), 0, k_next), c(ZV, 0, k)],
                    vec![c(Z, 0, k_next)],
                ],
                ChainKind::TangentialTail if fin && m != 0 && j == 0 && k == 0 => {
                    vec![vec![], vec![], vec![c(TH(Minus), 0, 0)], vec![c(Z, 0, 0)]]
                }
                ChainKind::VerticalTail if m == 0 && j == 0 => {
                    vec![vec![], vec![], vec![c(ZV, 0, k)], vec![c(Z, 0, k_next)]]
                }
                ChainKind::Lowest if fin && k == 0 => vec![
                    vec![],
                    vec![c(WV, j, 0)],
                    vec![c(TH(Plus), j + 1, 0), c(TH(Minus), j + 1, 0)],
                    vec![c(Z, j + 1, 0)],
                ],
                ChainKind::Residue if fin && m == 0 && j == 0 && k == 0 => {
                    vec![vec![], vec![], vec![], vec![c(Z, 0, 0)]]
                }
                _ => return Err(bad()),
            }
        }
    };
    assemble(domain, kind, (m, j, k), spaces)
}

/// Every sub-complex with `|m| ≤ mmax`, chain index `j ≤ jmax` and `k` in
/// `-kmax..=kmax` (periodic) or `0..=kmax` (finite).
pub fn enumerate_chains(domain: Domain, mmax: i32, jmax: usize, kmax: i64) -> Result<Vec<ComplexChain>> {
    let ks: Vec<i64> = match domain {
        Domain::Disk => vec![0],
        Domain::Periodic => (-kmax..=kmax).collect(),
        Domain::Finite => (0..=kmax).collect(),
    };
    let mut out = Vec::new();
    for m in -mmax..=mmax {
        for &k in &ks {
            for j in 0..=jmax {
                out.push(subcomplex(domain, ChainKind::Main, m, j, k)?);
                if domain == Domain::Finite && k == 0 {
                    out.push(subcomplex(domain, ChainKind::Lowest, m, j, 0)?);
                }
            }
            if m != 0 {
                out.push(subcomplex(domain, ChainKind::NormalTail, m, 0, k)?);
                if domain == Domain::Finite && k == 0 {
                    out.push(subcomplex(domain, ChainKind::TangentialTail, m, 0, 0)?);
                }
            } else if domain != Domain::Disk {
                out.push(subcomplex(domain, ChainKind::VerticalTail, 0, 0, k)?);
            }
        }
        if m == 0 && domain != Domain::Periodic {
            out.push(subcomplex(domain, ChainKind::Residue, 0, 0, 0)?);
        }
    }
    Ok(out)
}

/// Rank data of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport {
    pub label: String,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    /// `dim ker D_i - rank D_{i-1}` per space.
    pub homology: Vec<usize>,
    /// Largest entry of any `D_{i+1} D_i` (exactly zero when the recurrences cancel).
    pub composition_max: f64,
    pub exact: bool,
}

fn rank(m: &DMatrix<C64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * smax.max(1.0)).count()
}

/// Ranks, kernels, homology and composition-to-zero of a chain.
pub fn exactness_check(chain: &ComplexChain) -> ExactnessReport {
    let dims = chain.dims();
    let ranks: Vec<usize> = chain.maps.iter().map(rank).collect();
    let kernel_dims: Vec<usize> = (0..dims.len())
        .map(|i| dims[i] - ranks.get(i).copied().unwrap_or(0))
        .collect();
    let homology: Vec<usize> = (0..dims.len())
        .map(|i| kernel_dims[i] - if i == 0 { 0 } else { ranks[i - 1] })
        .collect();
    let composition_max = chain
        .maps
        .windows(2)
        .map(|w| (&w[1] * &w[0]).iter().map(|c| c.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    ExactnessReport {
        label: chain.label(),
        exact: homology.iter().all(|&h| h == 0),
        dims,
        ranks,
        kernel_dims,
        homology,
        composition_max,
    }
}

/// Every basis element of the truncation with `|m| ≤ mmax`, `j ≤ jmax` and `k` in range.
pub fn truncated_basis(domain: Domain, mmax: i32, jmax: usize, kmax: i64) -> Vec<BasisLabel> {
    use CylKind::*;
    let mut out = Vec::new();
    let pm = |m: i32, j: usize, s: Sign| check_pm(m, j, s).is_ok();
    for m in -mmax..=mmax {
        for j in 0..=jmax {
            match domain.cyl() {
                None => {
                    out.push(disk_label(DiskKind::W, m, j));
                    for s in [Sign::Plus, Sign::Minus] {
                        if pm(m, j, s) {
                            out.push(disk_label(DiskKind::N(s), m, j));
                        }
                    }
                    out.push(disk_label(DiskKind::Z, m, j));
                }
                Some(cd) => {
                    let ks: Vec<i64> =
                        if cd == CylDomain::Periodic { (-kmax..=kmax).collect() } else { (0..=kmax).collect() };
                    for k in ks {
                        let mut kinds = vec![W, WV, ZV, Z];
                        for s in [Sign::Plus, Sign::Minus] {
                            if pm(m, j, s) {
                                kinds.push(NH(s));
                                kinds.push(TH(s));
                            }
                        }
                        for kind in kinds {
                            out.push(BasisLabel::Cyl(CylinderModeIndex::new(cd, kind, m, j, k)));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Partition check: elements of the truncated basis that appear in no chain,
/// and elements that appear in more than one.
pub fn coverage_check(
    domain: Domain,
    chains: &[ComplexChain],
    mmax: i32,
    jmax: usize,
    kmax: i64,
) -> (Vec<BasisLabel>, Vec<BasisLabel>) {
    let mut count: HashMap<BasisLabel, usize> = HashMap::new();
    for c in chains {
        for e in c.elements() {
            *count.entry(*e).or_default() += 1;
        }
    }
    let basis = truncated_basis(domain, mmax, jmax, kmax);
    let missing = basis.iter().filter(|b| !count.contains_key(b)).copied().collect();
    let mut repeated: Vec<BasisLabel> =
        count.iter().filter(|(_, &n)| n > 1).map(|(b, _)| *b).collect();
    repeated.sort_by_key(|b| b.to_string());
    (missing, repeated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(0, 1), re(4.0));
        let k = kappa(1, 1);
        assert!((k - C64::new(0.0, 240.0 / 37.0)).norm() < 1e-14);
        assert!((kappa(-1, 1) + k).norm() < 1e-14);
    }

    #[test]
    fn disk_recurrences() {
        let g = grad_w(3, 2);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].coefficient, re(-3.0));
        assert_eq!(g[0].target, n_pm(3, 3, Sign::Plus));
        assert!(curl_n(2, 1, Sign::Plus).unwrap().is_empty());
        assert_eq!(curl_n(0, 1, Sign::Minus).unwrap()[0].coefficient, re(-4.0));
        assert_eq!(div_t(0, 1, Sign::Minus).unwrap()[0].coefficient, re(4.0));
        assert!(curl_n(0, 0, Sign::Minus).is_err());
    }

    #[test]
    fn cylinder_recurrences() {
        let w = CylinderModeIndex::new(CylDomain::Periodic, CylKind::W, 1, 2, 3);
        let g = cyl_grad(&w).unwrap();
        assert_eq!(g[1].coefficient, C64::new(0.0, 3.0));
        let zv = CylinderModeIndex::new(CylDomain::Finite, CylKind::ZV, 2, 1, 2);
        let d = cyl_div(&zv).unwrap();
        assert_eq!(d[0].coefficient, re(-12.0));
        assert_eq!(d[0].target.k, 3);
        assert!(cyl_div(&w).is_err());
        let bad = CylinderModeIndex::new(CylDomain::Finite, CylKind::W, 0, 0, -1);
        assert!(cyl_grad(&bad).is_err());
    }

    #[test]
    fn compositions_cancel_exactly() {
        for domain in [CylDomain::Periodic, CylDomain::Finite] {
            for m in -2..=2 {
                for j in 0..3 {
                    for k in 0..3 {
                        let w = CylinderModeIndex::new(domain, CylKind::W, m, j, k);
                        let g = cyl_grad(&w).unwrap();
                        assert!(apply_linear(&g, cyl_curl).unwrap().is_empty());
                        for s in [Sign::Plus, Sign::Minus] {
                            let nh = CylinderModeIndex::new(domain, CylKind::NH(s), m, j + 1, k);
                            let c = cyl_curl(&nh).unwrap();
                            assert!(apply_linear(&c, cyl_div).unwrap().is_empty());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn disk_chain_example() {
        let c = subcomplex(Domain::Disk, ChainKind::Main, 2, 0, 0).unwrap();
        assert_eq!(c.dims(), vec![1, 2, 1]);
        assert!(exactness_check(&c).exact);
        let r = subcomplex(Domain::Disk, ChainKind::Residue, 0, 0, 0).unwrap();
        assert!(!exactness_check(&r).exact);
    }

    #[test]
    fn periodic_constant_chain_not_exact() {
        let c = subcomplex(Domain::Periodic, ChainKind::VerticalTail, 0, 0, 0).unwrap();
        let r = exactness_check(&c);
        assert_eq!(r.homology, vec![0, 0, 1, 1]);
        let c = subcomplex(Domain::Periodic, ChainKind::VerticalTail, 0, 0, 2).unwrap();
        assert!(exactness_check(&c).exact);
    }

    #[test]
    fn chains_partition_the_basis() {
        for domain in [Domain::Disk, Domain::Periodic, Domain::Finite] {
            let chains = enumerate_chains(domain, 2, 2, 2).unwrap();
            let (missing, repeated) = coverage_check(domain, &chains, 2, 2, 2);
            assert!(missing.is_empty(), "{domain:?} missing {missing:?}");
            assert!(repeated.is_empty(), "{domain:?} repeated {repeated:?}");
        }
    }
}
