use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use derham::derham::{enumerate_chains, exactness_check, Domain, ExactnessReport};
use derham::diskbases::EquivWeightSpec;
use derham::geometry::{frame, DiskPoint, C64};
use derham::suites::{run_suite, SuiteParams, SUITES};
use derham::verify::{gram, DiskWeight, GramReport};
use derham::zernike::{AnyValue, Basis, Family, ModeIndex, Sign};
use serde_json::json;

/// Orthogonal polynomial bases for the de Rham complex on the disk and cylinder.
#[derive(Parser, Debug)]
#[command(name = "derham", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one basis element at a point.
    Eval(EvalArgs),
    /// Assemble a Gram matrix and report its largest relative off-diagonal entry.
    Gram(GramArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Sample a basis element on a grid and write CSV.
    Field(FieldArgs),
    /// Tabulate the sub-complexes of a domain with their exactness data.
    Chains(ChainsArgs),
}

#[derive(Args, Debug, Clone)]
struct ElementArgs {
    /// z, w, vz, mZ, vy, mY, vN, n, n+, n-, t+ or t-.
    #[arg(long)]
    family: String,
    #[arg(long, allow_hyphen_values = true)]
    m: i32,
    #[arg(long)]
    j: usize,
    #[arg(long, default_value_t = 1)]
    nu: u8,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    element: ElementArgs,
    /// Point as `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct GramArgs {
    /// z (scalar), vz (vector), mZ (matrix) or vN.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Append the same family for a second λ (not orthogonal to the first).
    #[arg(long)]
    also_lambda: Option<f64>,
    #[arg(long)]
    maxdeg: usize,
    /// Weight for vN: N (default) or I.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the matrix here (CSV, or JSON with --json).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DomainArg {
    Disk,
    Periodic,
    Finite,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// zernike, qbasis, lu, lemma10, lemma11, gradient, curl, boundary, cylinder, complexes or all.
    suite: String,
    #[arg(long)]
    mmax: Option<i32>,
    #[arg(long)]
    jmax: Option<usize>,
    #[arg(long)]
    kmax: Option<i64>,
    #[arg(long)]
    maxdeg: Option<usize>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    domain: Option<DomainArg>,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[command(flatten)]
    element: ElementArgs,
    /// Cartesian grid with this many points per side over [-1, 1]².
    #[arg(long, default_value_t = 20)]
    grid: usize,
    /// Sample this many points on the unit circle instead of a grid.
    #[arg(long)]
    ring: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainsArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long, default_value_t = 2)]
    mmax: i32,
    #[arg(long, default_value_t = 2)]
    jmax: usize,
    #[arg(long, default_value_t = 1)]
    kmax: i64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<derham::Error> for Failure {
    fn from(e: derham::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Gram(a) => cmd_gram(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Field(a) => cmd_field(a),
        Command::Chains(a) => cmd_chains(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn parse_family(a: &ElementArgs) -> Result<Family, Failure> {
    let (lambda, nu) = (a.lambda, a.nu);
    Ok(match a.family.as_str() {
        "z" => Family::ScalarZ { lambda },
        "w" => Family::WeightedW,
        "vz" => Family::VecZ { lambda, nu },
        "mZ" | "mz" => Family::MatZ { lambda, nu },
        "vy" => Family::VecY,
        "mY" | "my" => Family::MatY,
        "vN" | "vn" => Family::NormalV { nu },
        "n" => Family::NormalN { nu },
        "n+" => Family::NormalPm { sign: Sign::Plus },
        "n-" => Family::NormalPm { sign: Sign::Minus },
        "t+" => Family::Tangential { sign: Sign::Plus },
        "t-" => Family::Tangential { sign: Sign::Minus },
        other => return Err(Failure::Usage(format!("unknown family `{other}`"))),
    })
}

fn nu_of(f: &Family) -> Option<u8> {
    match f {
        Family::VecZ { nu, .. } | Family::MatZ { nu, .. } => Some(*nu),
        Family::NormalV { nu } | Family::NormalN { nu } => Some(*nu),
        _ => None,
    }
}

fn parse_point(s: &str) -> Result<DiskPoint, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("point `{s}` must be `x,y`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let x = parts[0].parse().map_err(|_| bad())?;
    let y = parts[1].parse().map_err(|_| bad())?;
    Ok(DiskPoint::new(x, y))
}

/// Round to 15 significant digits and print in shortest form.
fn fmt_real(v: f64) -> String {
    let r: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn fmt_complex(c: C64) -> String {
    if fmt_real(c.im) == "0" {
        fmt_real(c.re)
    } else {
        format!("({}, {})", fmt_real(c.re), fmt_real(c.im))
    }
}

fn fmt_value(v: &AnyValue) -> String {
    match v {
        AnyValue::Scalar(c) => fmt_complex(*c),
        AnyValue::Vector(u) => format!("({}, {})", fmt_complex(u[0]), fmt_complex(u[1])),
        AnyValue::Matrix(m) => format!(
            "(({}, {}), ({}, {}))",
            fmt_complex(m[(0, 0)]),
            fmt_complex(m[(0, 1)]),
            fmt_complex(m[(1, 0)]),
            fmt_complex(m[(1, 1)])
        ),
    }
}

/// C-style `%.15e`.
fn fmt_e(v: f64) -> String {
    let s = format!("{v:.15e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mant}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let family = parse_family(&a.element)?;
    let idx = ModeIndex::new(a.element.m, a.element.j, family);
    let value = idx.eval(parse_point(&a.at)?)?;
    if a.json {
        let comps = value.components();
        let (re, im): (Vec<f64>, Vec<f64>) = comps.iter().map(|c| (c.re, c.im)).unzip();
        let (vre, vim) = if comps.len() == 1 { (json!(re[0]), json!(im[0])) } else { (json!(re), json!(im)) };
        let out = json!({
            "family": a.element.family,
            "m": idx.m,
            "j": idx.j,
            "nu": nu_of(&family),
            "value_re": vre,
            "value_im": vim,
        });
        println!("{out}");
    } else {
        println!("{}", fmt_value(&value));
    }
    Ok(())
}

fn gram_basis(family: &str, lambda: f64) -> Result<Basis, Failure> {
    Ok(match family {
        "z" | "scalar" => Basis::ScalarZ { lambda },
        "vz" | "vector" => Basis::VecZ { lambda },
        "mZ" | "mz" | "matrix" => Basis::MatZ { lambda },
        "vN" | "vn" => Basis::NormalV,
        other => return Err(Failure::Usage(format!("unknown gram family `{other}`"))),
    })
}

fn write_gram(r: &GramReport, path: &PathBuf, as_json: bool, family: &str) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    let n = r.matrix.nrows();
    if as_json {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| f(&r.matrix[(i, j)])).collect()).collect()
        };
        let basis: Vec<_> = r
            .basis
            .iter()
            .map(|b| json!({"family": b.family.name(), "m": b.m, "j": b.j, "nu": nu_of(&b.family)}))
            .collect();
        let out = json!({
            "family": family,
            "basis": basis,
            "matrix_re": rows(|c| c.re),
            "matrix_im": rows(|c| c.im),
            "max_offdiag_rel": r.max_offdiag_rel,
            "min_diag": r.min_diag,
        });
        writeln!(w, "{out}")?;
    } else {
        writeln!(w, "i,j,re,im")?;
        for i in 0..n {
            for j in 0..n {
                let c = r.matrix[(i, j)];
                writeln!(w, "{i},{j},{},{}", fmt_e(c.re), fmt_e(c.im))?;
            }
        }
        writeln!(w, "# max_offdiag_rel={}", fmt_e(r.max_offdiag_rel))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_gram(a: GramArgs) -> Result<(), Failure> {
    let basis = gram_basis(&a.family, a.lambda)?;
    let mut elements = basis.enumerate_upto(a.maxdeg);
    if let Some(l2) = a.also_lambda {
        if matches!(basis, Basis::NormalV) {
            return Err(Failure::Usage("--also-lambda applies to Zernike families only".into()));
        }
        elements.extend(gram_basis(&a.family, l2)?.enumerate_upto(a.maxdeg));
    }
    let weight = match (basis, a.weight.as_deref()) {
        (Basis::NormalV, None | Some("N") | Some("n")) => DiskWeight::Matrix(EquivWeightSpec::n()),
        (Basis::NormalV, Some("I") | Some("i")) => DiskWeight::Matrix(EquivWeightSpec::identity()),
        (_, None) => DiskWeight::Scalar { lambda: a.lambda },
        (_, Some(w)) => return Err(Failure::Usage(format!("weight `{w}` does not apply to {}", a.family))),
    };
    let report = gram(&elements, &weight)?;
    if let Some(path) = &a.out {
        write_gram(&report, path, a.json, &a.family)?;
    }
    println!("size={}", elements.len());
    println!("max_offdiag_rel={}", fmt_e(report.max_offdiag_rel));
    if report.max_offdiag_rel < a.tol {
        Ok(())
    } else {
        eprintln!("gram matrix is not diagonal to tolerance {}", fmt_e(a.tol));
        Err(Failure::Verification)
    }
}

fn domain_of(d: DomainArg) -> Domain {
    match d {
        DomainArg::Disk => Domain::Disk,
        DomainArg::Periodic => Domain::Periodic,
        DomainArg::Finite => Domain::Finite,
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let mut params = SuiteParams::default();
    if let Some(v) = a.mmax {
        params.mmax = v;
    }
    if let Some(v) = a.jmax {
        params.jmax = v;
    }
    if let Some(v) = a.kmax {
        params.kmax = v;
    }
    if let Some(v) = a.maxdeg {
        params.maxdeg = v;
    }
    if let Some(v) = a.samples {
        params.samples = v;
    }
    params.b = a.b;
    params.domain = a.domain.map(domain_of);
    let names: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
    let mut ok = true;
    for name in names {
        let report = run_suite(name, &params)
            .ok_or_else(|| Failure::Usage(format!("unknown suite `{name}`; expected one of {SUITES:?} or all")))??;
        println!("{report}");
        ok &= report.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_field(a: FieldArgs) -> Result<(), Failure> {
    let family = parse_family(&a.element)?;
    let idx = ModeIndex::new(a.element.m, a.element.j, family);
    let field = idx.field()?;
    let points: Vec<DiskPoint> = match a.ring {
        Some(n) => (0..n)
            .map(|k| DiskPoint::polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect(),
        None => {
            if a.grid < 2 {
                return Err(Failure::Usage("--grid needs at least 2 points per side".into()));
            }
            let c = |i: usize| -1.0 + 2.0 * i as f64 / (a.grid - 1) as f64;
            (0..a.grid).flat_map(|i| (0..a.grid).map(move |j| DiskPoint::new(c(j), c(i)))).collect()
        }
    };
    let ncomp = field.eval(DiskPoint::new(0.0, 0.0)).components().len();
    let names = ["u", "v", "w", "s"];
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut header = String::from("x,y");
    for n in &names[..ncomp] {
        header.push_str(&format!(",re_{n},im_{n}"));
    }
    writeln!(out, "{header}")?;
    let (mut tangential, mut normal) = (0.0f64, 0.0f64);
    for p in &points {
        let mut row = format!("{},{}", fmt_e(p.x), fmt_e(p.y));
        if p.r2() <= 1.0 + 1e-12 {
            let v = field.eval(*p);
            for c in v.components() {
                row.push_str(&format!(",{},{}", fmt_e(c.re), fmt_e(c.im)));
            }
            if let (AnyValue::Vector(u), Ok((er, et))) = (v, frame(*p)) {
                if a.ring.is_some() {
                    tangential = tangential.max((u[0] * et[0] + u[1] * et[1]).norm());
                    normal = normal.max((u[0] * er[0] + u[1] * er[1]).norm());
                }
            }
        } else {
            row.push_str(&",".repeat(2 * ncomp));
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    eprintln!(
        "{} rows, family={} m={} j={} degree={}",
        points.len(),
        family.name(),
        idx.m,
        idx.j,
        field.degree()
    );
    if a.ring.is_some() && ncomp == 2 {
        eprintln!("max_tangential={} max_normal={}", fmt_e(tangential), fmt_e(normal));
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn cmd_chains(a: ChainsArgs) -> Result<(), Failure> {
    let chains = enumerate_chains(domain_of(a.domain), a.mmax, a.jmax, a.kmax)?;
    let reports: Vec<ExactnessReport> = chains.iter().map(exactness_check).collect();
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if a.json {
        let rows: Vec<_> = reports
            .iter()
            .map(|r| {
                json!({
                    "label": r.label,
                    "dims": r.dims,
                    "ranks": r.ranks,
                    "homology": r.homology,
                    "composition_max": r.composition_max,
                    "exact": r.exact,
                })
            })
            .collect();
        writeln!(out, "{}", json!(rows))?;
    } else {
        writeln!(out, "label,dims,ranks,homology,composition_max,exact")?;
        for r in &reports {
            writeln!(
                out,
                "\"{}\",{},{},{},{},{}",
                r.label.replace('"', "\"\""),
                join(&r.dims),
                join(&r.ranks),
                join(&r.homology),
                fmt_e(r.composition_max),
                r.exact
            )?;
        }
    }
    out.flush()?;
    let inexact = reports.iter().filter(|r| !r.exact).count();
    eprintln!("{} chains, {} with nonzero homology", reports.len(), inexact);
    Ok(())
}
