//! Scalar modular forms and basis decompositions.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{rat, Algebra, Rat, Ring};
use crate::series::QSeries;
use crate::theta::theta_const_fourth;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Group {
    SL2Z,
    /// Gamma_0(2), lower-left entry even.
    Gamma0_2,
    /// Gamma^0(2), upper-right entry even.
    Gamma0Upper2,
    GammaTheta,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularForm {
    pub series: QSeries<Rat>,
    pub weight: u32,
    pub group: Group,
}

impl ModularForm {
    /// Evaluates the truncated expansion at `tau`.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        self.series.eval((PI * Complex64::new(0.0, 1.0) * tau).exp())
    }
}

/// Sum of `d^k` over the divisors `d` of `n`.
pub fn sigma(k: u32, n: u64) -> num_bigint::BigInt {
    let mut s = num_bigint::BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += num_bigint::BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += num_bigint::BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `E4` or `E6` through `q^n`.
pub fn eisenstein(weight: u32, n: u32) -> Result<ModularForm> {
    let (c, k) = match weight {
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(Error::InvalidArgument(format!("unsupported Eisenstein weight {weight}"))),
    };
    let order = 2 * n + 1;
    let mut terms = vec![(0, rat(1))];
    for m in 1..=n {
        terms.push((2 * m, Rat::from_integer(sigma(k, u64::from(m)) * c)));
    }
    Ok(ModularForm { series: QSeries::from_terms(&(), order, terms)?, weight, group: Group::SL2Z })
}

/// `(delta, epsilon)` for `Gamma_0(2)` or `Gamma^0(2)`.
pub fn delta_eps(group: Group, order: u32) -> Result<(ModularForm, ModularForm)> {
    if order < 2 {
        return Err(Error::InvalidArgument("order_half must be at least 2".into()));
    }
    let t1 = theta_const_fourth(1, order)?;
    let t2 = theta_const_fourth(2, order)?;
    let t3 = theta_const_fourth(3, order)?;
    let (d, e) = match group {
        Group::Gamma0_2 => (t2.add(&t3)?.scale(&Rat::new(1.into(), 8.into())), t2.mul(&t3)?.scale(&Rat::new(1.into(), 16.into()))),
        Group::Gamma0Upper2 => {
            (t1.add(&t3)?.scale(&Rat::new((-1).into(), 8.into())), t1.mul(&t3)?.scale(&Rat::new(1.into(), 16.into())))
        }
        _ => return Err(Error::InvalidArgument(format!("no delta/epsilon pair for {group:?}"))),
    };
    Ok((ModularForm { series: d, weight: 2, group }, ModularForm { series: e, weight: 4, group }))
}

/// Exponent pairs `(a, b)` with `4a + 6b = weight`, most `E4` first.
pub fn sl2z_basis_exponents(weight: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    if weight % 2 == 1 {
        return out;
    }
    for b in 0..=weight / 6 {
        let rest = weight - 6 * b;
        if rest.is_multiple_of(4) {
            out.push((rest / 4, b));
        }
    }
    out.sort_by_key(|x| std::cmp::Reverse(x.0));
    out
}

/// The monomial basis `E4^a E6^b` of weight `weight`, truncated at `order`.
pub fn sl2z_basis(weight: u32, order: u32) -> Result<Vec<QSeries<Rat>>> {
    let n = order / 2 + 1;
    let e4 = eisenstein(4, n)?.series.truncate(order);
    let e6 = eisenstein(6, n)?.series.truncate(order);
    sl2z_basis_exponents(weight)
        .into_iter()
        .map(|(a, b)| e4.pow(i64::from(a))?.mul(&e6.pow(i64::from(b))?))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Decomposition<R: Ring> {
    pub coefficients: Vec<R>,
    pub residual: QSeries<R>,
}

impl<R: Ring> Decomposition<R> {
    pub fn residual_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Solves `M x = b` over Q by Gaussian elimination; `M` is square.
pub fn solve_rational(m: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !Zero::is_zero(&a[r][col])).ok_or_else(|| Error::Singular(format!("pivot {col} vanishes")))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || Zero::is_zero(&a[r][col]) {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Ok(inv)
}

/// Writes `s` in the basis `E4^a E6^b` of the given weight using the leading
/// coefficients, and returns the remainder.
pub fn decompose_sl2z<R: Algebra>(s: &QSeries<R>, weight: u32) -> Result<Decomposition<R>> {
    let basis = sl2z_basis(weight, s.order())?;
    let d = basis.len();
    if 2 * d > s.order() as usize + 1 {
        return Err(Error::InsufficientTruncation(format!(
            "weight {weight} needs q^{} but the series stops at u^{}",
            d.saturating_sub(1),
            s.order()
        )));
    }
    let m: Vec<Vec<Rat>> =
        (0..d).map(|n| basis.iter().map(|b| b.coeff_q(n as u32).expect("in range")).collect()).collect();
    let minv = solve_rational(&m)?;
    let ctx = s.ctx().clone();
    let rhs: Vec<R> = (0..d).map(|n| s.coeff_q(n as u32)).collect::<Result<_>>()?;
    let mut coefficients = Vec::with_capacity(d);
    for row in &minv {
        let mut acc = R::zero(&ctx);
        for (c, r) in row.iter().zip(&rhs) {
            acc = acc.add(&r.scale(c))?;
        }
        coefficients.push(acc);
    }
    let residual = s.sub(&recompose(&basis, &coefficients, &ctx, s.order())?)?;
    Ok(Decomposition { coefficients, residual })
}

/// `sum c_i B_i`.
pub fn recompose<R: Algebra>(basis: &[QSeries<Rat>], coeffs: &[R], ctx: &R::Ctx, order: u32) -> Result<QSeries<R>> {
    let mut acc = QSeries::zero(ctx, order);
    for (b, c) in basis.iter().zip(coeffs) {
        let lifted = b.map(ctx, |v| Ok(c.scale(v)))?;
        acc = acc.add(&lifted)?;
    }
    Ok(acc)
}

/// `(8 delta)^(k-2s) eps^s` for `s = 0..=floor(k/2)`.
pub fn ladder_basis(group: Group, k: u32, order: u32) -> Result<Vec<QSeries<Rat>>> {
    let (d, e) = delta_eps(group, order)?;
    let d8 = d.series.scale(&rat(8));
    (0..=k / 2).map(|s| d8.pow(i64::from(k - 2 * s))?.mul(&e.series.pow(i64::from(s))?)).collect()
}

/// Triangular solve for `s = sum h_s (8 delta_2)^(k-2s) eps_2^s`.
///
/// `eps_2` has valuation `u^1` and `8 delta_2` a unit constant term, so the
/// `u^s` coefficient determines `h_s` once `h_0..h_(s-1)` are known.
pub fn decompose_gamma0upper<R: Algebra>(s: &QSeries<R>, k: u32) -> Result<Decomposition<R>> {
    let top = k / 2;
    if s.order() <= top {
        return Err(Error::InsufficientTruncation(format!("need u^{top} for k = {k}, series stops at u^{}", s.order())));
    }
    let basis = ladder_basis(Group::Gamma0Upper2, k, s.order())?;
    let ctx = s.ctx().clone();
    let mut rest = s.clone();
    let mut coefficients = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let lead = b.coeff(i as u32)?;
        if Zero::is_zero(&lead) {
            return Err(Error::Singular(format!("basis element {i} has no u^{i} term")));
        }
        let h = rest.coeff(i as u32)?.scale(&lead.recip());
        let lifted = b.map(&ctx, |v| Ok(h.scale(v)))?;
        rest = rest.sub(&lifted)?;
        coefficients.push(h);
    }
    Ok(Decomposition { coefficients, residual: rest })
}

/// `(8 delta_1)^(k-2s) eps_1^s`.
pub fn power_expansion_gamma0lower(k: u32, s: u32, order: u32) -> Result<QSeries<Rat>> {
    if 2 * s > k {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds floor(k/2) for k = {k}")));
    }
    let (d, e) = delta_eps(Group::Gamma0_2, order)?;
    d.series.scale(&rat(8)).pow(i64::from(k - 2 * s))?.mul(&e.series.pow(i64::from(s))?)
}

/// Which transformation to test numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModularLaw {
    /// `f(-1/tau) = tau^w f(tau)`
    S,
    /// `f(tau + 1) = f(tau)`
    T,
    /// `f(-1/tau) = tau^w g(tau)` for a partner form `g`
    SPartner,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularityReport {
    pub law: ModularLaw,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Samples skipped because `|q|` at an image point was too large.
    pub skipped: usize,
}

/// Checks a transformation law of `f` at the sample points. For `SPartner`
/// the right-hand side uses `partner`.
pub fn numeric_modularity_check(
    f: &ModularForm,
    partner: Option<&ModularForm>,
    law: ModularLaw,
    samples: &[Complex64],
    tol: f64,
) -> Result<ModularityReport> {
    let mut max_dev: f64 = 0.0;
    let mut skipped = 0;
    let mut used = 0;
    for &tau in samples {
        if tau.im <= 0.0 {
            return Err(Error::NotUpperHalfPlane(format!("{tau}")));
        }
        let image = match law {
            ModularLaw::T => tau + 1.0,
            _ => -tau.inv(),
        };
        // the truncated expansion is useless when |q| is close to 1
        if (-2.0 * PI * image.im).exp() > 0.5 || (-2.0 * PI * tau.im).exp() > 0.5 {
            skipped += 1;
            continue;
        }
        let lhs = f.eval(image);
        let rhs = match law {
            ModularLaw::T => f.eval(tau),
            ModularLaw::S => tau.powu(f.weight) * f.eval(tau),
            ModularLaw::SPartner => {
                let g = partner.ok_or_else(|| Error::InvalidArgument("partner form required".into()))?;
                tau.powu(f.weight) * g.eval(tau)
            }
        };
        max_dev = max_dev.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        used += 1;
    }
    Ok(ModularityReport { law, samples: used, max_deviation: max_dev, tolerance: tol, pass: used > 0 && max_dev < tol, skipped })
}
