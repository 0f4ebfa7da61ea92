//! Exact theta-function quotients and the numeric theta kernel.
//!
//! With `X = 2 pi i v` every quotient the anomaly formulas need is a power
//! series in `u = q^(1/2)` whose coefficients are rational polynomials in `X`:
//!
//! ```text
//! A   = (X/2)/sinh(X/2) * prod (1-q^n)^2 / ((1-q^n e^X)(1-q^n e^-X))
//! Q1  = cosh(X/2)       * prod (1+q^n e^X)(1+q^n e^-X) / (1+q^n)^2
//! Q2  =                   prod (1-q^(n-1/2) e^X)(1-q^(n-1/2) e^-X) / (1-q^(n-1/2))^2
//! Q3  =                   prod (1+q^(n-1/2) e^X)(1+q^(n-1/2) e^-X) / (1+q^(n-1/2))^2
//! WY  = sinh(Y/2)       * prod (1-q^n e^Y)(1-q^n e^-Y) / (1-q^n)^2
//! ```
//!
//! `A` is `x theta'(0)/theta(x)`, `Qj` is `theta_j(x)/theta_j(0)` and `WY` is
//! `i theta(y) / (theta_1 theta_2 theta_3)(0)` after the Jacobi identity.
//! `LOGDj` is `d/dZ log theta_j(Z)`, an odd series in `Z`.

pub mod numeric;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedCtx, GradedPoly, Mono};
use crate::ring::{rat, Rat, Ring};
use crate::series::QSeries;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum QuotientKind {
    A,
    Q1,
    Q2,
    Q3,
    WY,
    LOGD1,
    LOGD2,
    LOGD3,
}

impl QuotientKind {
    pub const ALL: [QuotientKind; 8] = [
        QuotientKind::A,
        QuotientKind::Q1,
        QuotientKind::Q2,
        QuotientKind::Q3,
        QuotientKind::WY,
        QuotientKind::LOGD1,
        QuotientKind::LOGD2,
        QuotientKind::LOGD3,
    ];

    /// Whether the series is odd in its variable.
    pub fn is_odd(&self) -> bool {
        matches!(self, QuotientKind::WY | QuotientKind::LOGD1 | QuotientKind::LOGD2 | QuotientKind::LOGD3)
    }
}

#[derive(Clone, Debug)]
pub struct ThetaQuotient {
    pub kind: QuotientKind,
    pub var: usize,
    pub series: QSeries<GradedPoly>,
}

impl ThetaQuotient {
    /// True when every coefficient only has powers of `var` of the expected parity.
    pub fn parity_ok(&self) -> bool {
        let want = u8::from(self.kind.is_odd());
        self.series.terms().all(|(_, c)| c.terms().all(|(m, _)| m.exp(self.var) % 2 == want))
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `sum_n c(n) X_var^n` up to the degree cap.
pub fn taylor<F: Fn(u32) -> Rat>(ctx: &GradedCtx, var: usize, c: F) -> GradedPoly {
    let mut p = GradedPoly::zero(ctx);
    for n in 0..=ctx.cap() / 2 {
        let v = c(n);
        if Zero::is_zero(&v) {
            continue;
        }
        let t = GradedPoly::term(ctx, Mono::var(var, n as u8), v);
        p = p.add(&t).expect("same context");
    }
    p
}

fn half_pow_over_fact(n: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2).pow(n) * factorial(n))
}

/// `cosh(X/2)`.
pub fn cosh_half(ctx: &GradedCtx, var: usize) -> GradedPoly {
    taylor(ctx, var, |n| if n.is_even() { half_pow_over_fact(n) } else { rat(0) })
}

/// `sinh(X/2)`.
pub fn sinh_half(ctx: &GradedCtx, var: usize) -> GradedPoly {
    taylor(ctx, var, |n| if n.is_odd() { half_pow_over_fact(n) } else { rat(0) })
}

/// `(X/2)/sinh(X/2)`.
pub fn ahat_factor(ctx: &GradedCtx, var: usize) -> Result<GradedPoly> {
    // sinh(X/2)/(X/2) = sum (X/2)^(2j) / (2j+1)!
    let s = taylor(ctx, var, |n| {
        if n.is_even() {
            Rat::new(BigInt::one(), BigInt::from(2).pow(n) * factorial(n + 1))
        } else {
            rat(0)
        }
    });
    s.inv()
}

/// `e^(mX) - e^(-mX) = 2 sinh(mX)`.
pub fn two_sinh(ctx: &GradedCtx, var: usize, m: i64) -> GradedPoly {
    taylor(ctx, var, |n| {
        if n.is_odd() {
            Rat::new(BigInt::from(2) * BigInt::from(m).pow(n), factorial(n))
        } else {
            rat(0)
        }
    })
}

/// `e^X + e^-X`.
fn two_cosh(ctx: &GradedCtx, var: usize) -> GradedPoly {
    taylor(ctx, var, |n| if n.is_even() { Rat::new(BigInt::from(2), factorial(n)) } else { rat(0) })
}

/// `prod_a (1 + s u^a C + u^(2a)) / (1 + s u^a)^2` over the given exponents `a`.
fn pair_product(ctx: &GradedCtx, var: usize, sign: i64, exps: &[u32], order: u32) -> Result<QSeries<GradedPoly>> {
    let c = two_cosh(ctx, var);
    let one = GradedPoly::one(ctx);
    let mut num = QSeries::one(ctx, order);
    let mut den = QSeries::<Rat>::one(&(), order);
    for &a in exps {
        let f = QSeries::from_terms(ctx, order, [(0, one.clone()), (a, c.scale_by(&rat(sign))), (2 * a, one.clone())])?;
        num = num.mul(&f)?;
        let d = QSeries::from_terms(&(), order, [(0, rat(1)), (a, rat(sign))])?;
        den = den.mul(&d)?.mul(&d)?;
    }
    num.mul_rat(&den.inv()?)
}

fn integer_exps(order: u32) -> Vec<u32> {
    (1..).map(|n| 2 * n).take_while(|&a| a < order).collect()
}

fn half_exps(order: u32) -> Vec<u32> {
    (1..).map(|n| 2 * n - 1).take_while(|&a| a < order).collect()
}

/// Builds the quotient `kind` in generator `var` of `ctx`, truncated at `u^order`.
pub fn theta_quotient(kind: QuotientKind, ctx: &GradedCtx, var: usize, order: u32) -> Result<ThetaQuotient> {
    if order == 0 {
        return Err(Error::InvalidArgument("order_half must be at least 1".into()));
    }
    if var >= ctx.arity() {
        return Err(Error::InvalidArgument(format!("generator {var} out of range")));
    }
    let series = match kind {
        QuotientKind::A => pair_product(ctx, var, -1, &integer_exps(order), order)?
            .inv()?
            .mul_coeff(&ahat_factor(ctx, var)?)?,
        QuotientKind::Q1 => pair_product(ctx, var, 1, &integer_exps(order), order)?.mul_coeff(&cosh_half(ctx, var))?,
        QuotientKind::Q2 => pair_product(ctx, var, -1, &half_exps(order), order)?,
        QuotientKind::Q3 => pair_product(ctx, var, 1, &half_exps(order), order)?,
        QuotientKind::WY => pair_product(ctx, var, -1, &integer_exps(order), order)?.mul_coeff(&sinh_half(ctx, var))?,
        QuotientKind::LOGD1 => {
            // (1/2) tanh(Z/2) + sum (-1)^(m+1) q^(nm) 2 sinh(mZ)
            let tanh = sinh_half(ctx, var).mul(&cosh_half(ctx, var).inv()?)?.scale_by(&Rat::new(1.into(), 2.into()));
            let mut s = QSeries::constant(tanh, order);
            s = s.add(&log_sum(ctx, var, order, &integer_exps(order), true, 1)?)?;
            s
        }
        QuotientKind::LOGD2 => log_sum(ctx, var, order, &half_exps(order), false, -1)?,
        QuotientKind::LOGD3 => log_sum(ctx, var, order, &half_exps(order), true, 1)?,
    };
    Ok(ThetaQuotient { kind, var, series })
}

/// `sign * sum_{a, m} eps_m u^(a m) 2 sinh(mZ)` with `eps_m = (-1)^(m+1)` when
/// `alternating`, else 1.
fn log_sum(
    ctx: &GradedCtx,
    var: usize,
    order: u32,
    exps: &[u32],
    alternating: bool,
    sign: i64,
) -> Result<QSeries<GradedPoly>> {
    let mut terms = Vec::new();
    for &a in exps {
        for m in 1.. {
            let e = a * m;
            if e >= order {
                break;
            }
            let eps = if alternating && m % 2 == 0 { -1 } else { 1 };
            terms.push((e, two_sinh(ctx, var, i64::from(m)).scale_by(&rat(sign * eps))));
        }
    }
    QSeries::from_terms(ctx, order, terms)
}

/// Single-variable context with the given degree cap.
pub fn univariate_ctx(cap: u32) -> Result<GradedCtx> {
    GradedCtx::new(1, false, cap)
}

/// `theta_j(0, tau)^4` as a rational series in `u`, for `j` in 1..=3.
pub fn theta_const_fourth(j: u32, order: u32) -> Result<QSeries<Rat>> {
    let one = QSeries::<Rat>::one(&(), order);
    let mut prod = one.clone();
    for a in integer_exps(order) {
        let f = QSeries::from_terms(&(), order, [(0, rat(1)), (a, rat(-1))])?;
        prod = prod.mul(&f.pow(4)?)?;
    }
    let (sign, exps, power, lead) = match j {
        1 => (1, integer_exps(order), 8, Some(16)),
        2 => (-1, half_exps(order), 8, None),
        3 => (1, half_exps(order), 8, None),
        _ => return Err(Error::InvalidArgument(format!("theta index must be 1, 2 or 3, got {j}"))),
    };
    for a in exps {
        let f = QSeries::from_terms(&(), order, [(0, rat(1)), (a, rat(sign))])?;
        prod = prod.mul(&f.pow(power)?)?;
    }
    if let Some(c) = lead {
        // 16 q^(1/2) from (2 q^(1/8))^4
        prod = prod.scale(&rat(c)).shift_up(1).truncate(order);
    }
    Ok(prod)
}
