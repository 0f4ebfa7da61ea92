//! Command-line front end: `expand`, `verify` and `selftest`.
//!
//! Exit codes: 0 when everything selected passes, 1 on a verification or
//! numeric failure, 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng as _, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::anomaly::{self, CaseConfig, Family, TheoremReport, DEFAULT_ORDER_HALF, DEFAULT_RANK_N};
use crate::error::{Error, Result};
use crate::graded::GradedPoly;
use crate::kring::{self, render_kseries, BundleCtx, Builder, KSeries, Sym};
use crate::modforms::{self, numeric_modularity_check, Group, ModularForm, ModularLaw};
use crate::ring::Rat;
use crate::series::{q_power, QSeries};
use crate::theta::numeric::law_deviations;
use crate::theta::{theta_const_fourth, theta_quotient, univariate_ctx, QuotientKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "anomaly", version, about = "Exact verifier for modular anomaly cancellation identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the q-expansion of a named form, quotient or bundle.
    Expand(ExpandArgs),
    /// Verify theorem families and stream one report per case.
    Verify(VerifyArgs),
    /// Numeric transformation laws and quick exact properties.
    Selftest(SelftestArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Truncation in powers of q: the series keeps q^0 .. q^ORDER.
    #[arg(long)]
    pub order: Option<u32>,
    /// Exclusive truncation bound in powers of q^(1/2).
    #[arg(long, env = "ANOMALY_ORDER_HALF")]
    pub order_half: Option<u32>,
    /// Cohomological degree cap of the polynomial coefficients.
    #[arg(long)]
    pub degree_cap: Option<u32>,
    /// Rank N of the trivial bundle E (even).
    #[arg(long = "rank-N", visible_alias = "rank-n", default_value_t = DEFAULT_RANK_N)]
    pub rank_n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn order_half(&self) -> u32 {
        match (self.order, self.order_half) {
            (Some(q), _) => 2 * q + 1,
            (None, Some(h)) => h,
            (None, None) => DEFAULT_ORDER_HALF,
        }
    }
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// E4, E6, delta1, eps1, delta2, eps2, theta1_4 .. theta3_4, products
    /// such as E4^2*E6, quotients A, theta1 .. theta3, WY, LOGD1 .. LOGD3,
    /// or bundles Theta1 .. Theta3, Q, Q1 .. Q3, ThetaTL, ThetaStarTL.
    pub name: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Family to run; repeat for several. Defaults to all six.
    #[arg(long, value_parser = parse_family)]
    pub family: Vec<Family>,
    /// Dimension to run; repeat for several. Defaults per family.
    #[arg(long)]
    pub dim: Vec<u32>,
    /// Include the large default dimensions.
    #[arg(long)]
    pub heavy: bool,
    /// Tangent root count for the star families.
    #[arg(long)]
    pub roots: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Tolerance for the theta-function laws.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Tolerance for the modular-form laws.
    #[arg(long, default_value_t = 1e-6)]
    pub modular_tolerance: f64,
    /// Random upper half plane samples.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Factors kept in each theta product.
    #[arg(long, default_value_t = 60)]
    pub factors: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}, expected one of {}", names.join(", "))
    })
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out = match &cli.command {
        Command::Expand(a) => a.common.out.clone(),
        Command::Verify(a) => a.common.out.clone(),
        Command::Selftest(a) => a.out.clone(),
    };
    let mut w: Box<dyn Write> = match out {
        Some(p) => match File::create(&p) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                return EXIT_USAGE;
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = match &cli.command {
        Command::Expand(a) => run_expand(a, &mut w),
        Command::Verify(a) => run_verify(a, &mut w),
        Command::Selftest(a) => run_selftest(a, &mut w),
    };
    if let Err(e) = w.flush() {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }
    code
}

fn usage(e: &Error) -> bool {
    matches!(e, Error::InvalidArgument(_) | Error::InsufficientTruncation(_))
}

/// A named expansion.
#[derive(Clone, Debug)]
pub enum Expansion {
    Rational(QSeries<Rat>),
    Graded(QSeries<GradedPoly>),
    Bundle(KSeries),
}

fn rational_atom(name: &str, order: u32) -> Result<QSeries<Rat>> {
    let n = order.div_ceil(2);
    let s = match name {
        "E4" => modforms::eisenstein(4, n)?.series,
        "E6" => modforms::eisenstein(6, n)?.series,
        "delta1" => modforms::delta_eps(Group::Gamma0_2, order)?.0.series,
        "eps1" => modforms::delta_eps(Group::Gamma0_2, order)?.1.series,
        "delta2" => modforms::delta_eps(Group::Gamma0Upper2, order)?.0.series,
        "eps2" => modforms::delta_eps(Group::Gamma0Upper2, order)?.1.series,
        "theta1_4" => theta_const_fourth(1, order)?,
        "theta2_4" => theta_const_fourth(2, order)?,
        "theta3_4" => theta_const_fourth(3, order)?,
        _ => return Err(Error::InvalidArgument(format!("unknown name {name:?}"))),
    };
    Ok(s.truncate(order))
}

/// Resolves a name to its expansion at the given truncation.
pub fn expand(name: &str, order: u32, cap: u32) -> Result<Expansion> {
    if order < 2 {
        return Err(Error::InvalidArgument("order_half must be at least 2".into()));
    }
    if let Some(b) = Builder::from_name(name) {
        return Ok(Expansion::Bundle(kring::build(b, &BundleCtx::default(), order)?));
    }
    let quotient = match name {
        "A" => Some(QuotientKind::A),
        "theta1" => Some(QuotientKind::Q1),
        "theta2" => Some(QuotientKind::Q2),
        "theta3" => Some(QuotientKind::Q3),
        "WY" => Some(QuotientKind::WY),
        "LOGD1" => Some(QuotientKind::LOGD1),
        "LOGD2" => Some(QuotientKind::LOGD2),
        "LOGD3" => Some(QuotientKind::LOGD3),
        _ => None,
    };
    if let Some(kind) = quotient {
        let ctx = univariate_ctx(cap)?;
        return Ok(Expansion::Graded(theta_quotient(kind, &ctx, 0, order)?.series));
    }
    // products of rational forms, e.g. E4^2*E6
    let mut acc = QSeries::<Rat>::one(&(), order);
    for factor in name.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e.parse().map_err(|_| Error::InvalidArgument(format!("bad exponent in {factor:?}")))?;
                (b, e)
            }
            None => (factor, 1),
        };
        acc = acc.mul(&rational_atom(base.trim(), order)?.pow(exp)?)?;
    }
    Ok(Expansion::Rational(acc))
}

impl Expansion {
    pub fn to_text(&self) -> String {
        match self {
            Expansion::Rational(s) => format!("{s}\n"),
            Expansion::Bundle(s) => render_kseries(s),
            Expansion::Graded(s) => {
                let mut out = String::new();
                for (e, c) in s.terms() {
                    let label = match q_power(e) {
                        p if p.is_empty() => "1".to_string(),
                        p => p,
                    };
                    out.push_str(&format!("{label}: {c}\n"));
                }
                out.push_str(&format!("O({})\n", q_power(s.order())));
                out
            }
        }
    }

    pub fn to_json(&self, name: &str) -> serde_json::Value {
        let (kind, series) = match self {
            Expansion::Rational(s) => ("rational", s.to_json()),
            Expansion::Graded(s) => ("graded", s.to_json()),
            Expansion::Bundle(s) => ("bundle", s.to_json()),
        };
        json!({ "name": name, "kind": kind, "series": series })
    }
}

fn run_expand(a: &ExpandArgs, w: &mut dyn Write) -> i32 {
    let order = a.common.order_half();
    let cap = a.common.degree_cap.unwrap_or(8);
    match expand(&a.name, order, cap) {
        Ok(x) => {
            let text = match a.common.format {
                Format::Text => x.to_text(),
                Format::Json => format!("{}\n", x.to_json(&a.name)),
            };
            if w.write_all(text.as_bytes()).is_err() {
                return EXIT_FAIL;
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            if usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}

/// The cases a verify invocation selects, in output order.
pub fn select_cases(a: &VerifyArgs) -> Result<Vec<CaseConfig>> {
    let families: Vec<Family> = if a.family.is_empty() { Family::ALL.to_vec() } else { a.family.clone() };
    let explicit = !a.family.is_empty();
    let mut cases = Vec::new();
    for f in families {
        let dims = if a.dim.is_empty() { f.default_dims(a.heavy) } else { a.dim.clone() };
        for dim in dims {
            let cfg = CaseConfig {
                family: f,
                dim,
                order_half: a.common.order_half(),
                rank_n: a.common.rank_n,
                degree_cap: a.common.degree_cap,
                roots: if f.even_kind() == anomaly::EvenKind::Star { a.roots } else { None },
            };
            match cfg.validate() {
                Ok(_) => cases.push(cfg),
                // without an explicit family, skip families the dimension does not fit
                Err(_) if !explicit && !a.dim.is_empty() && f.even_kind().weight_index(dim).is_err() => {}
                Err(e) => return Err(e),
            }
        }
    }
    if cases.is_empty() {
        return Err(Error::InvalidArgument("no case matches the given families and dimensions".into()));
    }
    Ok(cases)
}

/// Runs cases in parallel and returns results in case order.
pub fn run_cases(cases: &[CaseConfig]) -> Vec<Result<TheoremReport>> {
    cases.par_iter().map(anomaly::verify).collect()
}

fn run_verify(a: &VerifyArgs, w: &mut dyn Write) -> i32 {
    let cases = match select_cases(a) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let results = run_cases(&cases);
    let mut code = EXIT_OK;
    let (mut passed, mut failed) = (0, 0);
    for (cfg, r) in cases.iter().zip(results) {
        match r {
            Ok(rep) => {
                if rep.pass {
                    passed += 1;
                } else {
                    failed += 1;
                    code = code.max(EXIT_FAIL);
                }
                let line = match a.common.format {
                    Format::Json => format!("{}\n", serde_json::to_string(&rep).expect("report serializes")),
                    Format::Text => rep.to_text(),
                };
                if w.write_all(line.as_bytes()).is_err() {
                    return EXIT_FAIL;
                }
            }
            Err(e) => {
                failed += 1;
                eprintln!("error: {}: {e}", cfg.case_id());
                code = code.max(if usage(&e) { EXIT_USAGE } else { EXIT_FAIL });
            }
        }
    }
    if a.common.format == Format::Text {
        let _ = writeln!(w, "{passed} passed, {failed} failed");
    }
    code
}

/// One line of the self-test.
#[derive(Clone, Debug, Serialize)]
pub struct SelftestLine {
    pub suite: String,
    pub law: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `tau` with real part in [-0.5, 0.5] and imaginary part in [0.8, 1.25].
pub fn sample_points(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(0.8..=1.25))).collect()
}

/// Numeric and quick exact checks.
pub fn selftest(a: &SelftestArgs) -> Result<Vec<SelftestLine>> {
    let taus = sample_points(a.samples, a.seed);
    let mut rng = StdRng::seed_from_u64(a.seed ^ 0x5eed);
    let mut worst: Vec<(String, f64)> = Vec::new();
    for &tau in &taus {
        let v = Complex64::new(rng.gen_range(-0.2..=0.2), rng.gen_range(-0.1..=0.1));
        for (law, d) in law_deviations(v, tau, a.factors)? {
            match worst.iter_mut().find(|(l, _)| *l == law) {
                Some(entry) => entry.1 = entry.1.max(d),
                None => worst.push((law, d)),
            }
        }
    }
    let mut lines: Vec<SelftestLine> = worst
        .into_iter()
        .map(|(law, d)| SelftestLine {
            suite: "theta".into(),
            law,
            max_deviation: d,
            tolerance: a.tolerance,
            pass: d.is_finite() && d < a.tolerance,
        })
        .collect();

    let order = 41;
    let e4 = modforms::eisenstein(4, 20)?;
    let e6 = modforms::eisenstein(6, 20)?;
    let (d1, e1) = modforms::delta_eps(Group::Gamma0_2, order)?;
    let (d2, e2) = modforms::delta_eps(Group::Gamma0Upper2, order)?;
    let modular: [(&str, &ModularForm, Option<&ModularForm>, ModularLaw); 6] = [
        ("E4_S", &e4, None, ModularLaw::S),
        ("E6_S", &e6, None, ModularLaw::S),
        ("delta2_S_delta1", &d2, Some(&d1), ModularLaw::SPartner),
        ("eps2_S_eps1", &e2, Some(&e1), ModularLaw::SPartner),
        ("delta1_T", &d1, None, ModularLaw::T),
        ("eps1_T", &e1, None, ModularLaw::T),
    ];
    for (name, f, g, law) in modular {
        let r = numeric_modularity_check(f, g, law, &taus, a.modular_tolerance)?;
        lines.push(SelftestLine {
            suite: "modular".into(),
            law: name.into(),
            max_deviation: r.max_deviation,
            tolerance: a.modular_tolerance,
            pass: r.pass,
        });
    }

    let exact = |law: &str, ok: bool| SelftestLine {
        suite: "exact".into(),
        law: law.into(),
        max_deviation: if ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: ok,
    };
    let ctx = BundleCtx::default();
    let st = kring::symm_series(&ctx, Sym::T, 7)?;
    let lt = kring::lambda_series(&ctx, Sym::T, -1, kring::ExponentFamily::Integer, 7)?;
    lines.push(exact("symmetric_times_lambda", st.mul(&lt)? == KSeries::one(&ctx, 7)));
    let e4s = modforms::eisenstein(4, 3)?.series;
    let e6s = modforms::eisenstein(6, 3)?.series;
    let disc = e4s.pow(3)?.sub(&e6s.pow(2)?)?;
    lines.push(exact("discriminant_valuation", disc.valuation() == Some(2)));
    lines.push(exact("eisenstein_inverse", e4s.mul(&e4s.inv()?)? == QSeries::one(&(), e4s.order())));
    Ok(lines)
}

fn run_selftest(a: &SelftestArgs, w: &mut dyn Write) -> i32 {
    let lines = match selftest(a) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return if usage(&e) { EXIT_USAGE } else { EXIT_FAIL };
        }
    };
    let mut ok = true;
    for l in &lines {
        ok &= l.pass;
        let text = match a.format {
            Format::Json => format!("{}\n", serde_json::to_string(l).expect("line serializes")),
            Format::Text => format!(
                "{:<8} {:<24} {:>10.3e}  tol {:.0e}  {}\n",
                l.suite,
                l.law,
                l.max_deviation,
                l.tolerance,
                if l.pass { "ok" } else { "FAIL" }
            ),
        };
        if w.write_all(text.as_bytes()).is_err() {
            return EXIT_FAIL;
        }
    }
    if ok {
        EXIT_OK
    } else {
        eprintln!(
            "selftest failed: a deviation exceeds its tolerance; raise --factors (now {}) or loosen --tolerance",
            a.factors
        );
        EXIT_FAIL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_flags() {
        let c = Cli::try_parse_from(["anomaly", "expand", "E4", "--order", "3"]).unwrap();
        let Command::Expand(a) = c.command else { panic!() };
        assert_eq!(a.common.order_half(), 7);
    }

    #[test]
    fn expand_e4() {
        let Expansion::Rational(s) = expand("E4", 7, 8).unwrap() else { panic!() };
        assert_eq!(s.to_string(), "1 + 240 q + 2160 q^2 + 6720 q^3 + O(q^{7/2})");
    }

    #[test]
    fn bad_dim_is_usage() {
        let code = main_with_args(["anomaly", "verify", "--family", "spin_sl2z", "--dim", "6"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
