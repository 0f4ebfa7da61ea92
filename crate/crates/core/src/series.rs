//! Truncated power series in `u = q^(1/2)`.
//!
//! A series stores the coefficients of `u^0 .. u^(order-1)`; everything from
//! `u^order` on is unknown. Reading an unknown coefficient is an error.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::ring::{Algebra, Rat, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct QSeries<R: Ring> {
    ctx: R::Ctx,
    order: u32,
    coeffs: BTreeMap<u32, R>,
}

impl<R: Ring> QSeries<R> {
    pub fn zero(ctx: &R::Ctx, order: u32) -> Self {
        QSeries { ctx: ctx.clone(), order, coeffs: BTreeMap::new() }
    }

    pub fn one(ctx: &R::Ctx, order: u32) -> Self {
        Self::monomial(ctx, 0, R::one(ctx), order)
    }

    pub fn constant(c: R, order: u32) -> Self {
        Self::monomial(&c.ctx(), 0, c, order)
    }

    /// `c * u^exp`, silently zero when `exp >= order`.
    pub fn monomial(ctx: &R::Ctx, exp: u32, c: R, order: u32) -> Self {
        let mut s = Self::zero(ctx, order);
        s.set(exp, c);
        s
    }

    /// Builds a series from `(u-exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(ctx: &R::Ctx, order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, R)>,
    {
        let mut s = Self::zero(ctx, order);
        for (e, c) in terms {
            if e >= order {
                continue;
            }
            let cur = s.coeffs.remove(&e).unwrap_or_else(|| R::zero(ctx));
            s.set(e, cur.add(&c)?);
        }
        Ok(s)
    }

    fn set(&mut self, exp: u32, c: R) {
        if exp < self.order && !c.is_zero() {
            self.coeffs.insert(exp, c);
        } else {
            self.coeffs.remove(&exp);
        }
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn ring_tag(&self) -> String {
        R::tag(&self.ctx)
    }

    /// Exclusive truncation bound in powers of `u`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient of `u^exp`.
    pub fn coeff(&self, exp: u32) -> Result<R> {
        if exp >= self.order {
            return Err(Error::BeyondTruncation { exp, order: self.order });
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(|| R::zero(&self.ctx)))
    }

    /// Coefficient of `q^n`.
    pub fn coeff_q(&self, n: u32) -> Result<R> {
        self.coeff(2 * n)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::RingMismatch(self.ring_tag(), other.ring_tag()));
        }
        Ok(())
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let coeffs = self.coeffs.range(..order).map(|(e, c)| (*e, c.clone())).collect();
        QSeries { ctx: self.ctx.clone(), order, coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (&e, c) in other.coeffs.range(..order) {
            let cur = out.coeffs.remove(&e).unwrap_or_else(|| R::zero(&self.ctx));
            out.set(e, cur.add(c)?);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        QSeries {
            ctx: self.ctx.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<u32, R> = BTreeMap::new();
        for (&ea, ca) in &self.coeffs {
            if ea >= order {
                break;
            }
            for (&eb, cb) in other.coeffs.range(..order - ea) {
                acc.entry(ea + eb)
                    .or_insert_with(|| R::zero(&self.ctx))
                    .add_mul_assign(ca, cb)?;
            }
        }
        let mut out = Self::zero(&self.ctx, order);
        for (e, c) in acc {
            out.set(e, c);
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeff(0)?;
        if !a0.is_unit() {
            return Err(Error::NonUnit);
        }
        let b0 = a0.inv()?;
        let mut b: Vec<R> = vec![b0.clone()];
        for n in 1..self.order {
            let mut s = R::zero(&self.ctx);
            for (&i, ai) in self.coeffs.range(1..=n) {
                s.add_mul_assign(ai, &b[(n - i) as usize])?;
            }
            b.push(b0.mul(&s)?.neg());
        }
        Ok(QSeries {
            ctx: self.ctx.clone(),
            order: self.order,
            coeffs: b.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e as u32, c)).collect(),
        })
    }

    /// `self / other`. A common power of `u` is cancelled first, which lowers
    /// the result's order by the divisor's valuation.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let v = other.valuation().ok_or(Error::NonUnit)?;
        let num_val = self.valuation().unwrap_or(self.order);
        if num_val < v {
            return Err(Error::Pole { num: num_val, den: v });
        }
        let num = self.shift_down(v);
        let den = other.shift_down(v);
        num.mul(&den.inv()?)
    }

    /// Divides by `u^v`, assuming the low terms vanish.
    fn shift_down(&self, v: u32) -> Self {
        QSeries {
            ctx: self.ctx.clone(),
            order: self.order - v,
            coeffs: self.coeffs.iter().filter(|(e, _)| **e >= v).map(|(e, c)| (e - v, c.clone())).collect(),
        }
    }

    /// Multiplies by `u^v`, raising the order accordingly.
    pub fn shift_up(&self, v: u32) -> Self {
        QSeries {
            ctx: self.ctx.clone(),
            order: self.order + v,
            coeffs: self.coeffs.iter().map(|(e, c)| (e + v, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut result = Self::one(&self.ctx, self.order);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `tau -> tau + 1`, i.e. `u -> -u`.
    pub fn tau_shift(&self) -> Self {
        QSeries {
            ctx: self.ctx.clone(),
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, if e % 2 == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplies every coefficient by a fixed ring element.
    pub fn mul_coeff(&self, c: &R) -> Result<Self> {
        let mut out = Self::zero(&self.ctx, self.order);
        for (&e, a) in &self.coeffs {
            out.set(e, a.mul(c)?);
        }
        Ok(out)
    }

    /// Applies `f` to each stored coefficient; the result lives over `S`.
    pub fn map<S: Ring, F>(&self, ctx: &S::Ctx, mut f: F) -> Result<QSeries<S>>
    where
        F: FnMut(&R) -> Result<S>,
    {
        let mut out = QSeries::zero(ctx, self.order);
        for (&e, c) in &self.coeffs {
            out.set(e, f(c)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self.coeffs.iter().map(|(e, c)| json!([e, c.to_json()])).collect();
        json!({ "order_half": self.order, "terms": terms })
    }
}

impl<R: Algebra> QSeries<R> {
    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.ctx, self.order);
        for (&e, a) in &self.coeffs {
            out.set(e, a.scale(c));
        }
        out
    }

    /// Multiplies by a series with rational coefficients.
    pub fn mul_rat(&self, other: &QSeries<Rat>) -> Result<Self> {
        let lifted = other.map(&self.ctx, |c| Ok(R::from_rat(&self.ctx, c)))?;
        self.mul(&lifted)
    }
}

impl QSeries<Rat> {
    /// Dense rational series from `u`-coefficients `c[0], c[1], ...`.
    pub fn from_rats(order: u32, c: &[Rat]) -> Self {
        let mut s = Self::zero(&(), order);
        for (e, v) in c.iter().enumerate() {
            s.set(e as u32, v.clone());
        }
        s
    }

    pub fn from_ints(order: u32, c: &[i64]) -> Self {
        Self::from_rats(order, &c.iter().map(|&v| crate::ring::rat(v)).collect::<Vec<_>>())
    }

    /// Evaluates at a complex `u`, summing the stored terms.
    pub fn eval(&self, u: num_complex::Complex64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (&e, c) in &self.coeffs {
            acc += u.powu(e) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

/// Renders as `1 + 240 q + 2160 q^2 + O(q^4)`, with `q^{1/2}` for odd powers of `u`.
impl fmt::Display for QSeries<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let qp = q_power(e);
            if qp.is_empty() {
                write!(f, "{}", mag)?;
            } else if num_traits::One::is_one(&mag) {
                write!(f, "{}", qp)?;
            } else {
                write!(f, "{} {}", mag, qp)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", if self.order == 0 { "1".to_string() } else { q_power(self.order) })
    }
}

/// Text form of `u^e` in powers of `q`.
pub fn q_power(e: u32) -> String {
    match (e, e % 2) {
        (0, _) => String::new(),
        (1, _) => "q^{1/2}".to_string(),
        (2, _) => "q".to_string(),
        (_, 0) => format!("q^{}", e / 2),
        _ => format!("q^{{{}/2}}", e),
    }
}
