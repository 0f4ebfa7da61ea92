//! Graded polynomials over Q in even generators of degree 2 and odd markers.
//!
//! Even generators are `X1..Xm` and optionally `Y` (stored last). An odd
//! marker `t_j` has degree `j`; a monomial carries at most one of them.
//! Terms above the degree cap are dropped on construction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ring::{rat, Algebra, Rat, Ring};

pub const MAX_GENERATORS: usize = 16;
pub const MAX_DEGREE_CAP: u32 = 500;

/// Generator layout and truncation shared by a family of polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GradedCtx {
    n_x: u8,
    has_y: bool,
    cap: u16,
}

impl GradedCtx {
    pub fn new(n_x: usize, has_y: bool, cap: u32) -> Result<Self> {
        let arity = n_x + usize::from(has_y);
        if arity > MAX_GENERATORS {
            return Err(Error::InvalidArgument(format!("at most {MAX_GENERATORS} even generators, got {arity}")));
        }
        if cap > MAX_DEGREE_CAP {
            return Err(Error::InvalidArgument(format!("degree cap {cap} exceeds {MAX_DEGREE_CAP}")));
        }
        Ok(GradedCtx { n_x: n_x as u8, has_y, cap: cap as u16 })
    }

    pub fn n_x(&self) -> usize {
        self.n_x as usize
    }

    pub fn has_y(&self) -> bool {
        self.has_y
    }

    pub fn arity(&self) -> usize {
        self.n_x() + usize::from(self.has_y)
    }

    pub fn cap(&self) -> u32 {
        u32::from(self.cap)
    }

    pub fn with_cap(&self, cap: u32) -> Result<Self> {
        Self::new(self.n_x(), self.has_y, cap)
    }

    /// Index of `Y`, if present.
    pub fn y_index(&self) -> Option<usize> {
        self.has_y.then(|| self.n_x())
    }

    pub fn name(&self, i: usize) -> String {
        if Some(i) == self.y_index() {
            "Y".to_string()
        } else {
            format!("X{}", i + 1)
        }
    }
}

/// Exponent vector packed one byte per generator, plus the odd marker degree.
/// Field order gives the canonical monomial order, graded by even degree.
/// The degree cap bounds the even degree only, so odd markers never truncate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono {
    deg: u16,
    odd: u8,
    exps: u128,
}

impl Mono {
    pub const ONE: Mono = Mono { deg: 0, odd: 0, exps: 0 };

    pub fn var(i: usize, e: u8) -> Mono {
        Mono { deg: 2 * u16::from(e), odd: 0, exps: u128::from(e) << (8 * i) }
    }

    pub fn odd_marker(j: u8) -> Mono {
        Mono { deg: 0, odd: j, exps: 0 }
    }

    /// Total degree, odd marker included.
    pub fn degree(&self) -> u32 {
        u32::from(self.deg) + u32::from(self.odd)
    }

    /// Degree in the even generators.
    pub fn even_degree(&self) -> u32 {
        u32::from(self.deg)
    }

    /// Degree of the odd marker, 0 when absent.
    pub fn odd(&self) -> u8 {
        self.odd
    }

    pub fn exp(&self, i: usize) -> u8 {
        (self.exps >> (8 * i)) as u8
    }

    /// Product; `None` if both carry an odd marker.
    fn mul(&self, o: &Mono) -> Option<Mono> {
        if self.odd != 0 && o.odd != 0 {
            return None;
        }
        Some(Mono { deg: self.deg + o.deg, odd: self.odd | o.odd, exps: self.exps + o.exps })
    }

    fn without_var(&self, i: usize) -> Mono {
        let e = self.exp(i);
        Mono { deg: self.deg - 2 * u16::from(e), odd: self.odd, exps: self.exps & !(0xffu128 << (8 * i)) }
    }

    fn render(&self, ctx: &GradedCtx) -> String {
        let mut parts = Vec::new();
        for i in 0..ctx.arity() {
            match self.exp(i) {
                0 => {}
                1 => parts.push(ctx.name(i)),
                e => parts.push(format!("{}^{}", ctx.name(i), e)),
            }
        }
        if self.odd != 0 {
            parts.push(format!("t{}", self.odd));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct GradedPoly {
    ctx: GradedCtx,
    terms: BTreeMap<Mono, Rat>,
}

impl GradedPoly {
    pub fn zero(ctx: &GradedCtx) -> Self {
        GradedPoly { ctx: *ctx, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &GradedCtx, c: Rat) -> Self {
        Self::term(ctx, Mono::ONE, c)
    }

    pub fn term(ctx: &GradedCtx, m: Mono, c: Rat) -> Self {
        let mut p = Self::zero(ctx);
        if m.even_degree() <= ctx.cap() && !Zero::is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// The even generator with index `i` (`X_{i+1}`, or `Y` at the last slot).
    pub fn var(ctx: &GradedCtx, i: usize) -> Result<Self> {
        if i >= ctx.arity() {
            return Err(Error::InvalidArgument(format!("generator index {i} out of range")));
        }
        Ok(Self::term(ctx, Mono::var(i, 1), rat(1)))
    }

    pub fn y(ctx: &GradedCtx) -> Result<Self> {
        let i = ctx.y_index().ok_or_else(|| Error::InvalidArgument("context has no Y".into()))?;
        Self::var(ctx, i)
    }

    /// Odd generator `t_j` of degree `j`.
    pub fn odd_gen(ctx: &GradedCtx, j: u8) -> Result<Self> {
        if j.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("odd generator degree must be odd, got {j}")));
        }
        Ok(Self::term(ctx, Mono::odd_marker(j), rat(1)))
    }

    pub fn ctx_ref(&self) -> &GradedCtx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Mono::ONE).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn has_odd(&self) -> bool {
        self.terms.keys().any(|m| m.odd != 0)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ctx != o.ctx {
            return Err(Error::ArityMismatch(GradedPoly::tag(&self.ctx), GradedPoly::tag(&o.ctx)));
        }
        Ok(())
    }

    fn from_map(ctx: &GradedCtx, map: HashMap<Mono, Rat>) -> Self {
        let terms = map.into_iter().filter(|(m, c)| !Zero::is_zero(c) && m.even_degree() <= ctx.cap()).collect();
        GradedPoly { ctx: *ctx, terms }
    }

    pub fn scale_by(&self, c: &Rat) -> Self {
        if Zero::is_zero(c) {
            return Self::zero(&self.ctx);
        }
        GradedPoly { ctx: self.ctx, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    /// Sum of the monomials of degree exactly `d`.
    pub fn degree_component(&self, d: u32) -> Self {
        GradedPoly {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Nonzero degree components, keyed by degree.
    pub fn components(&self) -> BTreeMap<u32, GradedPoly> {
        let mut out: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_insert_with(|| Self::zero(&self.ctx)).terms.insert(*m, c.clone());
        }
        out
    }

    /// Drops every monomial of degree above `d`.
    pub fn truncate_degree(&self, d: u32) -> Self {
        GradedPoly {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Terms carrying odd marker `j` (0 selects the purely even part).
    pub fn odd_component(&self, j: u8) -> Self {
        GradedPoly {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| m.odd == j).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `exp(a)` for an even `a` without constant term.
    pub fn exp_even(&self) -> Result<Self> {
        if !Zero::is_zero(&self.constant_term()) {
            return Err(Error::ExpArgument("nonzero constant term"));
        }
        if self.has_odd() {
            return Err(Error::ExpArgument("odd generator content"));
        }
        let mut result = Self::constant(&self.ctx, rat(1));
        let mut power = result.clone();
        let mut n = 1i64;
        loop {
            power = power.mul(self)?.scale_by(&Rat::new(1.into(), n.into()));
            if power.terms.is_empty() {
                break;
            }
            result = result.add(&power)?;
            n += 1;
        }
        Ok(result)
    }

    /// Partial derivative with respect to even generator `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let nm = Mono { deg: m.deg - 2, odd: m.odd, exps: m.exps - (1u128 << (8 * i)) };
            out.insert(nm, c * Rat::from_integer(e.into()));
        }
        Self::from_map(&self.ctx, out)
    }

    /// Re-expresses the polynomial in another context, sending generator `i`
    /// to generator `map[i]`.
    pub fn embed(&self, ctx: &GradedCtx, map: &[usize]) -> Result<Self> {
        let mut out = HashMap::new();
        for (m, c) in &self.terms {
            let mut nm = Mono { deg: m.deg, odd: m.odd, exps: 0 };
            for (i, &target) in map.iter().enumerate().take(self.ctx.arity()) {
                if target >= ctx.arity() {
                    return Err(Error::InvalidArgument(format!("generator {target} out of range")));
                }
                nm.exps += u128::from(m.exp(i)) << (8 * target);
            }
            *out.entry(nm).or_insert_with(|| rat(0)) += c;
        }
        Ok(Self::from_map(ctx, out))
    }

    /// Substitutes `Y^2 -> s` (with `s` free of `Y`), keeping a leftover odd power as `Y`.
    pub fn subst_y_squared(&self, s: &GradedPoly) -> Result<Self> {
        self.check(s)?;
        let yi = self.ctx.y_index().ok_or_else(|| Error::InvalidArgument("context has no Y".into()))?;
        if s.terms.keys().any(|m| m.exp(yi) != 0) {
            return Err(Error::InvalidArgument("substitution value depends on Y".into()));
        }
        let mut powers = vec![Self::constant(&self.ctx, rat(1))];
        let mut out = Self::zero(&self.ctx);
        let mut grouped: BTreeMap<u8, HashMap<Mono, Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(yi);
            let rest = m.without_var(yi);
            let rest = if e % 2 == 1 { rest.mul(&Mono::var(yi, 1)).expect("even") } else { rest };
            grouped.entry(e / 2).or_default().insert(rest, c.clone());
        }
        for (a, part) in grouped {
            while powers.len() <= a as usize {
                let next = powers.last().expect("nonempty").mul(s)?;
                powers.push(next);
            }
            let part = Self::from_map(&self.ctx, part);
            out = out.add(&part.mul(&powers[a as usize])?)?;
        }
        Ok(out)
    }

    /// Sets generator `i` to zero.
    pub fn set_zero(&self, i: usize) -> Self {
        GradedPoly {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| m.exp(i) == 0).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `Some(c)` when `self = c * other` exactly; `other` must be nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<Rat> {
        let (m0, c0) = other.terms.iter().next()?;
        let c = self.terms.get(m0).cloned().unwrap_or_else(|| rat(0)) / c0;
        if self.terms.len() != other.terms.len() && !Zero::is_zero(&c) {
            return None;
        }
        let ok = if Zero::is_zero(&c) {
            self.terms.is_empty()
        } else {
            other.terms.iter().all(|(m, v)| self.terms.get(m) == Some(&(v * &c)))
        };
        ok.then_some(c)
    }

    /// Numeric evaluation, split by odd marker (key 0 is the even part).
    pub fn eval_numeric(&self, values: &[Complex64]) -> Result<BTreeMap<u8, Complex64>> {
        let mut out: BTreeMap<u8, Complex64> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for i in 0..self.ctx.arity() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let x = values.get(i).ok_or_else(|| Error::MissingAssignment(self.ctx.name(i)))?;
                v *= x.powu(u32::from(e));
            }
            *out.entry(m.odd).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(out)
    }

    /// Largest absolute coefficient, as a cheap size measure.
    pub fn max_abs_coeff(&self) -> Rat {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(|| rat(0))
    }
}

impl Ring for GradedPoly {
    type Ctx = GradedCtx;

    fn ctx(&self) -> GradedCtx {
        self.ctx
    }
    fn zero(ctx: &GradedCtx) -> Self {
        GradedPoly::zero(ctx)
    }
    fn one(ctx: &GradedCtx) -> Self {
        GradedPoly::constant(ctx, rat(1))
    }
    fn tag(ctx: &GradedCtx) -> String {
        let names: Vec<_> = (0..ctx.arity()).map(|i| ctx.name(i)).collect();
        format!("GradedPoly[{}; cap {}]", names.join(","), ctx.cap())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let v = terms.remove(m).map_or_else(|| c.clone(), |a| a + c);
            if !Zero::is_zero(&v) {
                terms.insert(*m, v);
            }
        }
        Ok(GradedPoly { ctx: self.ctx, terms })
    }
    fn neg(&self) -> Self {
        GradedPoly { ctx: self.ctx, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut acc: HashMap<Mono, Rat> = HashMap::with_capacity(self.terms.len().max(o.terms.len()));
        mul_into(&mut acc, self, o, self.ctx.cap())?;
        Ok(Self::from_map(&self.ctx, acc))
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) -> Result<()> {
        self.check(a)?;
        a.check(b)?;
        let mut acc: HashMap<Mono, Rat> = std::mem::take(&mut self.terms).into_iter().collect();
        mul_into(&mut acc, a, b, self.ctx.cap())?;
        *self = Self::from_map(&self.ctx, acc);
        Ok(())
    }
    fn is_unit(&self) -> bool {
        !Zero::is_zero(&self.constant_term()) && !self.has_odd()
    }
    fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        // c (1 + n) with n nilpotent: 1/c * sum (-n)^i
        let c_inv = self.constant_term().recip();
        let n = self.scale_by(&c_inv).sub(&Self::one(&self.ctx))?;
        let minus_n = n.neg();
        let mut result = Self::one(&self.ctx);
        let mut power = Self::one(&self.ctx);
        loop {
            power = power.mul(&minus_n)?;
            if power.terms.is_empty() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result.scale_by(&c_inv))
    }
    fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self.terms.iter().map(|(m, c)| json!([m.render(&self.ctx), c.to_string()])).collect();
        serde_json::Value::Array(terms)
    }
}

impl Algebra for GradedPoly {
    fn scale(&self, c: &Rat) -> Self {
        self.scale_by(c)
    }
}

fn mul_into(acc: &mut HashMap<Mono, Rat>, a: &GradedPoly, b: &GradedPoly, cap: u32) -> Result<()> {
    // Terms are sorted by even degree, so the inner loop can stop at the cap.
    for (ma, ca) in &a.terms {
        let room = match cap.checked_sub(ma.even_degree()) {
            Some(r) => r,
            None => break,
        };
        for (mb, cb) in &b.terms {
            if mb.even_degree() > room {
                break;
            }
            let m = ma.mul(mb).ok_or(Error::OddTimesOdd)?;
            let v = ca * cb;
            match acc.get_mut(&m) {
                Some(x) => *x += v,
                None => {
                    acc.insert(m, v);
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Mono::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", m.render(&self.ctx))?;
            } else {
                write!(f, "{}*{}", mag, m.render(&self.ctx))?;
            }
        }
        Ok(())
    }
}
