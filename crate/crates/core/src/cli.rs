//! Batch front end. Every subcommand produces a [`Report`] of cases; the
//! exit code is 0 when all cases pass, 1 on a failed check, 2 on a usage
//! error, 3 when a size bound is exceeded and 4 when a polynomial fit fails.

use std::io::Write;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chartab::fmt_complex;
use crate::counting::kernel_count;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matspace::{gl_order, representative, ClassLabel, GroupClasses, Partition};
use crate::nirpoly;
use crate::stablering::{Basis, BasisLabel, MuVec, RingConfig, StableFunction, StableRing};
use crate::symcheck;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classes,
    Btil,
    BtilFr,
    Decompose,
    Chartable,
    Induce,
    Pieri,
    StableIrr,
    Verify,
    Pmu,
    Expect,
    Inner,
    SymCheck,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "scfq", about = "Stable class functions of GL_N(q)")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Eigenvalue for Jordan-type inputs.
    #[arg(long)]
    pub lambda: Option<String>,
    /// A partition such as `2,1`, or a labelled family such as `{1.0:2|1.1:1}`.
    #[arg(long)]
    pub mu: Option<String>,
    /// Class label such as `{x+1:2}`.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub qs: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub holdout: Vec<u32>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub suite: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub input: String,
    pub expected: Option<String>,
    pub got: String,
    pub residual: f64,
    pub pass: bool,
}

impl Case {
    fn info(input: impl Into<String>, got: impl Into<String>) -> Case {
        Case { input: input.into(), expected: None, got: got.into(), residual: 0.0, pass: true }
    }

    fn exact(input: impl Into<String>, expected: impl ToString, got: impl ToString) -> Case {
        let (e, g) = (expected.to_string(), got.to_string());
        Case { input: input.into(), pass: e == g, expected: Some(e), got: g, residual: 0.0 }
    }

    fn approx(input: impl Into<String>, expected: Complex64, got: Complex64, tol: f64) -> Case {
        let residual = (expected - got).norm();
        Case {
            input: input.into(),
            expected: Some(fmt_complex(expected)),
            got: fmt_complex(got),
            residual: crate::chartab::round(residual),
            pass: residual <= tol,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    /// The statement a suite exercises.
    pub paper_ref: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
    #[serde(skip)]
    pub extra: Option<String>,
}

impl Report {
    fn new(suite: &str, paper_ref: &str, cases: Vec<Case>) -> Report {
        let passed = cases.iter().filter(|c| c.pass).count();
        Report {
            suite: suite.into(),
            paper_ref: paper_ref.into(),
            summary: Summary { total: cases.len(), passed, pass: passed == cases.len() },
            cases,
            extra: None,
        }
    }

    fn with_extra(mut self, extra: String) -> Report {
        self.extra = Some(extra);
        self
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("scfq")).chain(args.into_iter().map(Into::into));
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion)
            {
                let _ = write!(out, "{e}");
                0
            } else {
                let _ = write!(err, "{e}");
                2
            };
            return code;
        }
    };
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        let _ = writeln!(err, "error: --tol must be positive");
        return 2;
    }
    let start = Instant::now();
    match execute(&cfg) {
        Ok(report) => {
            let _ = emit(&report, &cfg, start, out);
            if report.summary.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExceeded { .. } => 3,
        Error::FitFailure(_) => 4,
        Error::Parse(_) | Error::InvalidInput(_) | Error::UnsupportedField(_) | Error::TooSmallN { .. } => 2,
        _ => 1,
    }
}

fn emit(report: &Report, cfg: &RunConfig, start: Instant, out: &mut dyn Write) -> std::io::Result<()> {
    match cfg.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(report).expect("serializable report");
            writeln!(out, "{text}")
        }
        Format::Csv => {
            if let Some(extra) = &report.extra {
                return write!(out, "{extra}");
            }
            writeln!(out, "input,expected,got,residual,pass")?;
            for c in &report.cases {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&c.input),
                    csv_field(c.expected.as_deref().unwrap_or("")),
                    csv_field(&c.got),
                    c.residual,
                    c.pass
                )?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "suite: {} ({})", report.suite, report.paper_ref)?;
            if let Some(extra) = &report.extra {
                writeln!(out, "{extra}")?;
            }
            for c in &report.cases {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                match &c.expected {
                    Some(e) => writeln!(out, "[{tag}] {}: expected {e}, got {} (residual {:e})", c.input, c.got, c.residual)?,
                    None => writeln!(out, "[{tag}] {}: {}", c.input, c.got)?,
                }
            }
            writeln!(
                out,
                "summary: {}/{} passed in {:.3}s",
                report.summary.passed,
                report.summary.total,
                start.elapsed().as_secs_f64()
            )
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

fn ring(cfg: &RunConfig) -> Result<StableRing> {
    StableRing::new(cfg.q, RingConfig { tol: cfg.tol, seed: cfg.seed, ..RingConfig::default() })
}

/// `{...}` parses as a labelled family; anything else as a unipotent partition.
pub fn parse_mu(s: &str) -> Result<MuVec> {
    if s.trim_start().starts_with('{') {
        MuVec::parse(s)
    } else {
        Ok(MuVec::unipotent(Partition::parse(s)?))
    }
}

fn label(flag: &str, v: &Option<String>, f: &Field) -> Result<ClassLabel> {
    ClassLabel::parse(&need(v, flag)?, f)
}

fn execute(cfg: &RunConfig) -> Result<Report> {
    let f = Field::get(cfg.q)?;
    match cfg.command {
        Command::Classes => classes(cfg, f),
        Command::Btil => btil(cfg, f, false),
        Command::BtilFr => btil(cfg, f, true),
        Command::Decompose => decompose(cfg, f),
        Command::Chartable => chartable(cfg, f),
        Command::Induce => induce(cfg),
        Command::Pieri => pieri(cfg),
        Command::StableIrr => stable_irr(cfg, f),
        Command::Verify => verify(cfg, f),
        Command::Pmu => pmu(cfg),
        Command::Expect => expect(cfg, f),
        Command::Inner => inner(cfg),
        Command::SymCheck => sym_check(cfg),
    }
}

fn classes(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let n = need(&cfg.n, "n")?;
    let classes = GroupClasses::new(n, f)?;
    let mut cases: Vec<Case> = (0..classes.len())
        .map(|i| {
            Case::info(
                classes.labels[i].to_text(f),
                format!("centralizer {} size {}", classes.centralizers[i], classes.class_size(i)),
            )
        })
        .collect();
    let total: u128 = (0..classes.len()).map(|i| classes.class_size(i)).sum();
    cases.push(Case::exact("sum of class sizes", gl_order(n, f.q())?, total));
    Ok(Report::new("classes", "conjugacy classes via generalized Jordan form", cases))
}

fn btil(cfg: &RunConfig, f: &'static Field, full_rank: bool) -> Result<Report> {
    let r = ring(cfg)?;
    let b = label("b", &cfg.b, f)?;
    let g = label("g", &cfg.g, f)?;
    let input = format!("B={} g={}", b.to_text(f), g.to_text(f));
    let mut cases = Vec::new();
    if full_rank {
        let v = r.counter().btil_fr(&b, &g)?;
        // the decomposition inverted by hand gives the same count
        let mut alt = r.counter().btil(&b, &g)?;
        for (c, k) in r.counter().decomposition(&b)? {
            if c != b {
                alt -= k as i128 * r.counter().btil_fr(&c, &g)?;
            }
        }
        cases.push(Case::exact(input, alt, v));
        Ok(Report::new("btil-fr", "full-rank counts", cases))
    } else {
        let v = r.counter().btil(&b, &g)?;
        if b.is_single_block() {
            let k = kernel_count(&representative(&b, f), &representative(&g, f), f)?;
            cases.push(Case::exact(input, k, v));
        } else {
            cases.push(Case::info(input, v.to_string()));
        }
        Ok(Report::new("btil", "counts of intertwining matrices", cases))
    }
}

fn decompose(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let r = ring(cfg)?;
    let b = label("b", &cfg.b, f)?;
    let mut cases: Vec<Case> = r
        .counter()
        .decomposition(&b)?
        .into_iter()
        .map(|(c, k)| Case::info(c.to_text(f), format!("multiplicity {k}")))
        .collect();
    let n = cfg.n.unwrap_or(b.n());
    let lhs = r.btil_fn(&b, n)?;
    let classes = r.classes(n)?;
    let mut rhs = vec![0i128; classes.len()];
    for (c, k) in r.counter().decomposition(&b)? {
        for (x, v) in rhs.iter_mut().zip(r.btil_fr_fn(&c, n)?.values) {
            *x += k as i128 * v;
        }
    }
    for (i, l) in classes.labels.iter().enumerate() {
        cases.push(Case::exact(format!("g={}", l.to_text(f)), lhs.values[i], rhs[i]));
    }
    Ok(Report::new("decompose", "decomposition into full-rank counts", cases))
}

fn chartable(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let r = ring(cfg)?;
    let n = need(&cfg.n, "n")?;
    let t = r.table(n)?;
    let err = t.orthogonality_error();
    let mut cases = vec![Case {
        input: "row and column orthogonality".into(),
        expected: Some("0".into()),
        got: format!("{err:e}"),
        residual: crate::chartab::round(err),
        pass: err <= cfg.tol,
    }];
    cases.push(Case::exact("number of irreducibles", t.classes.len(), t.len()));
    let degree_sum: u128 = t.degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
    cases.push(Case::exact("sum of squared degrees", t.classes.order, degree_sum));
    let extra = match cfg.format {
        Format::Csv => t.to_csv(f),
        _ => format!("degrees: {:?}", t.degrees),
    };
    Ok(Report::new("chartable", "irreducible characters of GL_n(q)", cases).with_extra(extra))
}

fn induce(cfg: &RunConfig) -> Result<Report> {
    let r = ring(cfg)?;
    let m = need(&cfg.m, "m")?;
    let n = need(&cfg.n, "n")?;
    let rows = r.table(m)?.len();
    let cases = (0..rows)
        .into_par_iter()
        .map(|row| {
            let fourier = r.chi_circ_one(m, row, n)?;
            let direct = r.induce_direct(m, row, n)?;
            let residual = fourier.max_diff(&direct);
            Ok(Case {
                input: format!("chi={m}.{row} N={n}"),
                expected: Some(direct.values.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(" ")),
                got: fourier.values.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(" "),
                residual: crate::chartab::round(residual),
                pass: residual <= cfg.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("induce", "parabolic induction via full-rank counts", cases))
}

fn pieri(cfg: &RunConfig) -> Result<Report> {
    let r = ring(cfg)?;
    let mus = match &cfg.mu {
        Some(s) => vec![parse_mu(s)?],
        None => {
            let mut v = vec![MuVec::empty()];
            for rho in r.cuspidals(1)? {
                v.push(MuVec::from_pairs([(rho, Partition::single_row(1))]));
            }
            v
        }
    };
    let mut cases = Vec::new();
    for mu in mus {
        let rs: Vec<usize> = match (cfg.n, cfg.m) {
            (Some(n), _) => vec![n.checked_sub(mu.norm()).ok_or(Error::TooSmallN { n, min: mu.norm() })?],
            (None, Some(rmax)) => (0..=rmax).collect(),
            (None, None) => (0..=3).collect(),
        };
        for rr in rs {
            let rep = r.pieri_check(&mu, rr)?;
            cases.push(Case {
                input: format!("mu={} r={rr}", rep.mu),
                expected: Some(format!("{} constituents: {}", rep.predicted.len(), rep.predicted.join(" "))),
                got: format!("norm {:.6}{}", rep.norm, rep.direct.map(|d| format!(" direct {d:?}")).unwrap_or_default()),
                residual: crate::chartab::round(rep.max_deviation),
                pass: rep.pass,
            });
        }
    }
    Ok(Report::new("pieri", "Pieri rule for parabolic induction", cases))
}

fn stable_irr(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let r = ring(cfg)?;
    let mu = parse_mu(&need(&cfg.mu, "mu")?)?;
    let n = cfg.n.unwrap_or(2 * mu.norm().max(1));
    let chi = r.stable_irr_char(&mu, n)?;
    let classes = r.classes(n)?;
    let mut cases: Vec<Case> =
        classes.labels.iter().zip(&chi.values).map(|(l, v)| Case::info(l.to_text(f), fmt_complex(*v))).collect();
    let one = Complex64::new(1.0, 0.0);
    cases.push(Case::approx("squared norm", one, r.inner(&chi, &chi)?, 1e-6));
    let dim = r.stable_dim(&mu, n)?;
    let at_id = chi.values[classes.identity_index()];
    cases.push(Case::approx("dimension", Complex64::new(dim.to_string().parse().unwrap_or(f64::NAN), 0.0), at_id, 1e-6));
    let name = format!("stable irreducible {} at N={n}", mu.at_n(n)?);
    Ok(Report::new("stable-irr", "stable irreducible characters", cases).with_extra(name))
}

fn verify(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let r = ring(cfg)?;
    let suite = cfg.suite.as_deref().unwrap_or("main");
    match suite {
        "main" => {
            let m = need(&cfg.m, "m")?;
            let n = cfg.n.unwrap_or(2 * m);
            let rep = r.verify_filtration_equality(m, n)?;
            let cases = rep
                .families
                .iter()
                .map(|fam| Case {
                    input: format!("family {} at level <= {m} on GL_{n}({})", fam.family, cfg.q),
                    expected: Some(format!("rank {}", rep.target_rank)),
                    got: match fam.exact_rank {
                        Some(e) => format!("rank {} (exact {e}) of {} generators", fam.rank, fam.generators),
                        None => format!("rank {} of {} generators", fam.rank, fam.generators),
                    },
                    residual: crate::chartab::round(fam.max_residual),
                    pass: fam.pass,
                })
                .collect();
            Ok(Report::new("main", "equality of the four filtrations", cases))
        }
        "roundtrip" => {
            let m = need(&cfg.m, "m")?;
            let n = cfg.n.unwrap_or(2 * m);
            let mut cases = Vec::new();
            for j in 0..=m {
                for l in &r.classes(j)?.labels {
                    let start = StableFunction::single(BasisLabel::R(l.clone()));
                    let mut cur = start.clone();
                    for b in [Basis::Rfr, Basis::P, Basis::I, Basis::P, Basis::Rfr, Basis::R] {
                        cur = r.change_basis(&cur, b)?;
                    }
                    let through_i = r.change_basis(&start, Basis::I)?;
                    let diff = r.evaluate(&start, n)?.max_diff(&r.evaluate(&through_i, n)?);
                    let residual = cur.max_diff(&start).max(diff);
                    cases.push(Case {
                        input: format!("R[{}]", l.to_text(f)),
                        expected: Some(start.to_text(f)),
                        got: cur.to_text(f),
                        residual: crate::chartab::round(residual),
                        pass: residual <= 1e-6,
                    });
                }
            }
            Ok(Report::new("roundtrip", "change of basis R - Rfr - P - I", cases))
        }
        other => Err(Error::InvalidInput(format!("unknown suite '{other}' (main, roundtrip)"))),
    }
}

fn pmu(cfg: &RunConfig) -> Result<Report> {
    let mu = Partition::parse(&need(&cfg.mu, "mu")?)?;
    let qs = if cfg.qs.is_empty() { vec![2, 3, 4, 5] } else { cfg.qs.clone() };
    let fit = nirpoly::p_mu_fit(&mu, &qs, &cfg.holdout)?;
    let mut cases = vec![Case::info(format!("p_{} over q in {qs:?}", mu.to_text()), fit.to_text())];
    for &q in &cfg.holdout {
        let direct = nirpoly::p_mu_at_q(&mu, Field::get(q)?)?;
        cases.push(Case::exact(format!("held-out q={q}"), format!("{:?}", direct.0), format!("{:?}", fit.specialize(q).0)));
    }
    let text = fit.to_text();
    Ok(Report::new("pmu", "full-rank counts as polynomials in single-block counts", cases).with_extra(text))
}

fn expect(cfg: &RunConfig, f: &'static Field) -> Result<Report> {
    let r = ring(cfg)?;
    let n = need(&cfg.n, "n")?;
    let mut cases = Vec::new();
    if let Some(s) = &cfg.mu {
        let mu = parse_mu(s)?;
        let e = r.expectation(&*r.stable_irr_char(&mu, n)?)?;
        let want = if mu.norm() == 0 { 1.0 } else { 0.0 };
        cases.push(Case::approx(format!("E_{n}[chi_{mu}]"), Complex64::new(want, 0.0), e, cfg.tol));
    } else {
        let b = label("b", &cfg.b, f)?;
        let e_fr = r.exact_expectation(&r.btil_fr_fn(&b, n)?)?;
        let e = r.exact_expectation(&r.btil_fn(&b, n)?)?;
        if n > b.n() {
            cases.push(Case::exact(format!("E_{n}[btil_fr {}]", b.to_text(f)), BigRational::one(), e_fr));
        } else {
            cases.push(Case::info(format!("E_{n}[btil_fr {}]", b.to_text(f)), e_fr.to_string()));
        }
        let subspaces: BigRational = r
            .counter()
            .decomposition(&b)?
            .iter()
            .map(|(_, k)| BigRational::from_integer((*k as i64).into()))
            .fold(BigRational::zero(), |a, x| a + x);
        cases.push(Case::exact(format!("E_{n}[btil {}]", b.to_text(f)), subspaces, e));
    }
    Ok(Report::new("expect", "expected values under the uniform measure", cases))
}

fn inner(cfg: &RunConfig) -> Result<Report> {
    let r = ring(cfg)?;
    let ns: Vec<usize> = match cfg.n {
        Some(n) => vec![n],
        None => (2..=if cfg.q == 2 { 4 } else { 3 }).collect(),
    };
    let mut cases = Vec::new();
    for n in ns {
        let chi_p = r.chi_p(n)?;
        let fix = r.fixed_lines(n)?;
        cases.push(Case::approx(format!("<chi_P, chi_P>_{n}"), Complex64::new(1.0, 0.0), r.inner(&chi_p, &chi_p)?, cfg.tol));
        cases.push(Case::approx(format!("<fixed lines, fixed lines>_{n}"), Complex64::new(2.0, 0.0), r.inner(&fix, &fix)?, cfg.tol));
        if let Some(s) = &cfg.mu {
            let chi = r.stable_irr_char(&parse_mu(s)?, n)?;
            cases.push(Case::approx(format!("<chi, chi>_{n}"), Complex64::new(1.0, 0.0), r.inner(&chi, &chi)?, 1e-6));
        }
    }
    Ok(Report::new("inner", "stabilization of inner products", cases))
}

fn sym_check(cfg: &RunConfig) -> Result<Report> {
    let pairs: Vec<(usize, usize)> = match (cfg.m, cfg.n) {
        (Some(m), Some(n)) => vec![(m, n)],
        (Some(m), None) => (m..=8).map(|n| (m, n)).collect(),
        _ => (0..=4).flat_map(|m| (m..=8).map(move |n| (m, n))).collect(),
    };
    if pairs.iter().any(|&(m, n)| m > 4 || n > 8) {
        return Err(Error::bound("symmetric-group sizes (m <= 4, N <= 8)", 9, 8));
    }
    let reports: Vec<Vec<Case>> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let mut reps = vec![symcheck::sn_fourier_check(m, n)];
            if m <= 3 && n <= 6 {
                reps.push(symcheck::sn_brute_check(m, n));
            }
            reps.into_iter()
                .flat_map(|rep| rep.cases)
                .map(|c| Case {
                    input: format!("m={m} N={n} {}: {}", c.identity, c.input),
                    expected: Some(c.expected),
                    got: c.got,
                    residual: 0.0,
                    pass: c.pass,
                })
                .collect()
        })
        .collect();
    Ok(Report::new("sym-check", "symmetric-group counterpart: counts and both Fourier identities", reports.concat()))
}
