//! Virtual bundles in a free lambda-ring normal form.
//!
//! Every expression is an integer polynomial in the atoms `λ^i(S~)` (`i >= 1`)
//! and `Δ(S)`, where `S~ = S - rank S`. Identities that hold for all ranks,
//! such as `S^2 x = x⊗x - Λ^2 x`, are applied on construction, so two
//! expressions are equal exactly when their normal forms agree. Untilded
//! bundles are expanded with their declared rank.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graded::{GradedCtx, GradedPoly};
use crate::ring::{rat, Rat, Ring};
use crate::series::QSeries;
use crate::theta::{cosh_half, sinh_half, two_sinh};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Sym {
    /// complexified tangent bundle
    T,
    /// the trivial rank-N bundle carrying g
    E,
    /// complexified real plane bundle of the line bundle
    L,
}

impl Sym {
    fn name(&self) -> &'static str {
        match self {
            Sym::T => "T",
            Sym::E => "E",
            Sym::L => "L",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// `λ^i(S~)`, `i >= 1`
    Lambda(Sym, u8),
    Delta(Sym),
}

impl Atom {
    fn render(&self) -> String {
        match self {
            Atom::Lambda(s, 1) => format!("{}~", s.name()),
            Atom::Lambda(s, i) => format!("Λ{}{}~", superscript(*i), s.name()),
            Atom::Delta(s) => format!("Δ({})", s.name()),
        }
    }
}

fn superscript(n: u8) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize]).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BundleCtx {
    /// Largest number of atoms allowed in one tensor monomial.
    pub max_atoms: usize,
}

impl Default for BundleCtx {
    fn default() -> Self {
        BundleCtx { max_atoms: 24 }
    }
}

/// Declared ranks of the symbols.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Ranks {
    pub t: u32,
    pub e: u32,
    pub l: u32,
}

impl Ranks {
    pub fn of(&self, s: Sym) -> u32 {
        match s {
            Sym::T => self.t,
            Sym::E => self.e,
            Sym::L => self.l,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct BundleExpr {
    ctx: BundleCtx,
    terms: BTreeMap<Vec<Atom>, BigInt>,
}

impl BundleExpr {
    pub fn integer(ctx: &BundleCtx, n: i64) -> Self {
        Self::mono(ctx, Vec::new(), BigInt::from(n))
    }

    fn mono(ctx: &BundleCtx, mut atoms: Vec<Atom>, c: BigInt) -> Self {
        atoms.sort();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(atoms, c);
        }
        BundleExpr { ctx: *ctx, terms }
    }

    /// `S~`.
    pub fn tilde(ctx: &BundleCtx, s: Sym) -> Self {
        Self::lambda_tilde(ctx, s, 1)
    }

    /// `λ^i(S~)`.
    pub fn lambda_tilde(ctx: &BundleCtx, s: Sym, i: u8) -> Self {
        if i == 0 {
            Self::integer(ctx, 1)
        } else {
            Self::mono(ctx, vec![Atom::Lambda(s, i)], BigInt::one())
        }
    }

    /// `S^i(S~)`, from `S_t = 1 / Λ_{-t}`.
    pub fn symm_tilde(ctx: &BundleCtx, s: Sym, i: u8) -> Result<Self> {
        let mut sym: Vec<BundleExpr> = vec![Self::integer(ctx, 1)];
        for n in 1..=i {
            let mut acc = Self::zero(ctx);
            for j in 1..=n {
                let term = Self::lambda_tilde(ctx, s, j).mul(&sym[(n - j) as usize])?;
                acc = if j % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            sym.push(acc);
        }
        Ok(sym.pop().expect("nonempty"))
    }

    /// `Δ(S)`.
    pub fn delta(ctx: &BundleCtx, s: Sym) -> Self {
        Self::mono(ctx, vec![Atom::Delta(s)], BigInt::one())
    }

    /// The untilded bundle `S = S~ + rank`.
    pub fn plain(ctx: &BundleCtx, s: Sym, ranks: &Ranks) -> Self {
        Self::tilde(ctx, s).add(&Self::integer(ctx, i64::from(ranks.of(s)))).expect("same context")
    }

    /// `λ^i(S) = sum_j C(rank, i-j) λ^j(S~)`.
    pub fn lambda_plain(ctx: &BundleCtx, s: Sym, i: u8, ranks: &Ranks) -> Self {
        let n = ranks.of(s);
        let mut acc = Self::zero(ctx);
        for j in 0..=i {
            let c = binomial(i64::from(n), i64::from(i - j));
            let t = Self::lambda_tilde(ctx, s, j).scale_int(&c);
            acc = acc.add(&t).expect("same context");
        }
        acc
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        BundleExpr { ctx: self.ctx, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Atom>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ctx != o.ctx {
            return Err(Error::RingMismatch(Self::tag(&self.ctx), Self::tag(&o.ctx)));
        }
        Ok(())
    }

    /// Virtual rank: tilde atoms have rank 0, `Δ(S)` rank `2^(rank S / 2)`.
    pub fn rank(&self, ranks: &Ranks) -> BigInt {
        let mut total = BigInt::zero();
        'terms: for (atoms, c) in &self.terms {
            let mut r = c.clone();
            for a in atoms {
                match a {
                    Atom::Lambda(..) => continue 'terms,
                    Atom::Delta(s) => r *= BigInt::from(2).pow(ranks.of(*s) / 2),
                }
            }
            total += r;
        }
        total
    }

    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self
            .terms
            .keys()
            .flatten()
            .map(|a| match a {
                Atom::Lambda(s, _) | Atom::Delta(s) => *s,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || (n >= 0 && k > n) {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for j in 0..k {
        r = r * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    r
}

impl Ring for BundleExpr {
    type Ctx = BundleCtx;

    fn ctx(&self) -> BundleCtx {
        self.ctx
    }
    fn zero(ctx: &BundleCtx) -> Self {
        BundleExpr { ctx: *ctx, terms: BTreeMap::new() }
    }
    fn one(ctx: &BundleCtx) -> Self {
        Self::integer(ctx, 1)
    }
    fn tag(ctx: &BundleCtx) -> String {
        format!("K[max_atoms {}]", ctx.max_atoms)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let v = terms.remove(m).map_or_else(|| c.clone(), |a| a + c);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(BundleExpr { ctx: self.ctx, terms })
    }
    fn neg(&self) -> Self {
        BundleExpr { ctx: self.ctx, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut terms: BTreeMap<Vec<Atom>, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma.len() + mb.len() > self.ctx.max_atoms {
                    return Err(Error::Capacity(format!(
                        "tensor monomial with {} atoms exceeds the cap of {}",
                        ma.len() + mb.len(),
                        self.ctx.max_atoms
                    )));
                }
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort();
                *terms.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(BundleExpr { ctx: self.ctx, terms })
    }
    fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(|c| c.abs().is_one())
    }
    fn inv(&self) -> Result<Self> {
        if self.is_unit() {
            Ok(self.clone())
        } else {
            Err(Error::NonUnit)
        }
    }
    fn to_json(&self) -> serde_json::Value {
        json!(self.to_string())
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // constants last, then by atom count
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| (a.0.is_empty(), a.0.len(), a.0).cmp(&(b.0.is_empty(), b.0.len(), b.0)));
        for (i, (atoms, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body: Vec<String> = atoms.iter().map(Atom::render).collect();
            if atoms.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", body.join("⊗"))?;
            } else {
                write!(f, "{} {}", mag, body.join("⊗"))?;
            }
        }
        Ok(())
    }
}

pub type KSeries = QSeries<BundleExpr>;

/// Which `u`-exponents a lambda or symmetric product runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ExponentFamily {
    /// `q^n`, n >= 1
    Integer,
    /// `q^(n - 1/2)`, n >= 1
    HalfInteger,
}

impl ExponentFamily {
    fn exps(&self, order: u32) -> Vec<u32> {
        let start = match self {
            ExponentFamily::Integer => 2,
            ExponentFamily::HalfInteger => 1,
        };
        (0..).map(|n| start + 2 * n).take_while(|&a| a < order).collect()
    }
}

/// `⊗_n Λ_{sign q^e_n}(S~)`.
pub fn lambda_series(ctx: &BundleCtx, s: Sym, sign: i64, family: ExponentFamily, order: u32) -> Result<KSeries> {
    let mut acc = KSeries::one(ctx, order);
    for a in family.exps(order) {
        let mut terms = vec![(0, BundleExpr::integer(ctx, 1))];
        for i in 1..=((order - 1) / a) {
            let c = if sign < 0 && i % 2 == 1 { -1 } else { 1 };
            terms.push((a * i, BundleExpr::lambda_tilde(ctx, s, i as u8).scale_int(&BigInt::from(c))));
        }
        acc = acc.mul(&KSeries::from_terms(ctx, order, terms)?)?;
    }
    Ok(acc)
}

/// `⊗_n S_{q^n}(S~)`, as the inverse of `⊗_n Λ_{-q^n}(S~)`.
pub fn symm_series(ctx: &BundleCtx, s: Sym, order: u32) -> Result<KSeries> {
    lambda_series(ctx, s, -1, ExponentFamily::Integer, order)?.inv()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Builder {
    Theta1,
    Theta2,
    Theta3,
    Q,
    Q1,
    Q2,
    Q3,
    ThetaTL,
    ThetaStarTL,
}

impl Builder {
    pub const ALL: [Builder; 9] = [
        Builder::Theta1,
        Builder::Theta2,
        Builder::Theta3,
        Builder::Q,
        Builder::Q1,
        Builder::Q2,
        Builder::Q3,
        Builder::ThetaTL,
        Builder::ThetaStarTL,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builder::Theta1 => "Theta1",
            Builder::Theta2 => "Theta2",
            Builder::Theta3 => "Theta3",
            Builder::Q => "Q",
            Builder::Q1 => "Q1",
            Builder::Q2 => "Q2",
            Builder::Q3 => "Q3",
            Builder::ThetaTL => "ThetaTL",
            Builder::ThetaStarTL => "ThetaStarTL",
        }
    }

    pub fn from_name(s: &str) -> Option<Builder> {
        Self::ALL.into_iter().find(|b| b.name() == s)
    }
}

/// Expands one of the twisted bundles as a q-series.
pub fn build(which: Builder, ctx: &BundleCtx, order: u32) -> Result<KSeries> {
    use ExponentFamily::*;
    let witten = || symm_series(ctx, Sym::T, order);
    match which {
        Builder::Theta1 => witten()?.mul(&lambda_series(ctx, Sym::T, 1, Integer, order)?),
        Builder::Theta2 => witten()?.mul(&lambda_series(ctx, Sym::T, -1, HalfInteger, order)?),
        Builder::Theta3 => witten()?.mul(&lambda_series(ctx, Sym::T, 1, HalfInteger, order)?),
        Builder::Q1 => lambda_series(ctx, Sym::E, 1, Integer, order)?.mul_coeff(&BundleExpr::delta(ctx, Sym::E)),
        Builder::Q2 => lambda_series(ctx, Sym::E, -1, HalfInteger, order),
        Builder::Q3 => lambda_series(ctx, Sym::E, 1, HalfInteger, order),
        Builder::Q => build(Builder::Q1, ctx, order)?
            .mul(&build(Builder::Q2, ctx, order)?)?
            .mul(&build(Builder::Q3, ctx, order)?),
        Builder::ThetaTL => witten()?
            .mul(&lambda_series(ctx, Sym::L, 1, Integer, order)?)?
            .mul(&lambda_series(ctx, Sym::L, -1, HalfInteger, order)?)?
            .mul(&lambda_series(ctx, Sym::L, 1, HalfInteger, order)?),
        Builder::ThetaStarTL => witten()?.mul(&lambda_series(ctx, Sym::L, -1, Integer, order)?),
    }
}

/// Text rendering, one q-power per line.
pub fn render_kseries(s: &KSeries) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let label = match crate::series::q_power(e) {
            p if p.is_empty() => "1".to_string(),
            p => p,
        };
        out.push_str(&format!("{label}: {c}\n"));
    }
    out.push_str(&format!("O({})\n", crate::series::q_power(s.order())));
    out
}

/// Chern roots of one symbol: `±ω` for each pair plus `zeros` vanishing roots.
#[derive(Clone, Debug)]
pub struct Roots {
    pub pairs: Vec<GradedPoly>,
    pub zeros: usize,
}

impl Roots {
    pub fn rank(&self) -> usize {
        2 * self.pairs.len() + self.zeros
    }
}

#[derive(Clone, Debug)]
pub struct RootAssignment {
    pub ctx: GradedCtx,
    pub roots: BTreeMap<Sym, Roots>,
}

impl RootAssignment {
    pub fn new(ctx: &GradedCtx) -> Self {
        RootAssignment { ctx: *ctx, roots: BTreeMap::new() }
    }

    /// Assigns `±X_j` for the listed generator indices plus `zeros` zero roots.
    pub fn with_generators(mut self, s: Sym, gens: &[usize], zeros: usize) -> Result<Self> {
        let pairs = gens.iter().map(|&i| GradedPoly::var(&self.ctx, i)).collect::<Result<_>>()?;
        self.roots.insert(s, Roots { pairs, zeros });
        Ok(self)
    }

    fn get(&self, s: Sym) -> Result<&Roots> {
        self.roots.get(&s).ok_or_else(|| Error::MissingAssignment(s.name().to_string()))
    }
}

/// Chern character of a bundle expression.
pub fn ch(e: &BundleExpr, roots: &RootAssignment) -> Result<GradedPoly> {
    let ctx = roots.ctx;
    let mut cache: BTreeMap<Atom, GradedPoly> = BTreeMap::new();
    let mut total = GradedPoly::zero(&ctx);
    for (atoms, c) in e.terms() {
        let mut term = GradedPoly::constant(&ctx, Rat::from_integer(c.clone()));
        for a in atoms {
            if !cache.contains_key(a) {
                let v = ch_atom(a, roots)?;
                cache.insert(*a, v);
            }
            term = term.mul(&cache[a])?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

fn ch_atom(a: &Atom, roots: &RootAssignment) -> Result<GradedPoly> {
    let ctx = roots.ctx;
    match a {
        Atom::Delta(s) => {
            let r = roots.get(*s)?;
            if r.zeros != 0 {
                return Err(Error::InvalidArgument(format!("Δ({}) needs roots in ± pairs", s.name())));
            }
            let mut p = GradedPoly::one(&ctx);
            for w in &r.pairs {
                // e^(w/2) + e^(-w/2)
                let h = w.scale_by(&Rat::new(1.into(), 2.into()));
                p = p.mul(&h.exp_even()?.add(&h.neg().exp_even()?)?)?;
            }
            Ok(p)
        }
        Atom::Lambda(s, i) => {
            let r = roots.get(*s)?;
            let i = usize::from(*i);
            // coefficients of t^0..t^i in prod (1 + t e^w) (1 + t)^(-n)
            let mut poly = vec![GradedPoly::zero(&ctx); i + 1];
            poly[0] = GradedPoly::one(&ctx);
            let mut factors: Vec<Vec<GradedPoly>> = Vec::new();
            for w in &r.pairs {
                let c = w.exp_even()?.add(&w.neg().exp_even()?)?;
                factors.push(vec![GradedPoly::one(&ctx), c, GradedPoly::one(&ctx)]);
            }
            for _ in 0..r.zeros {
                factors.push(vec![GradedPoly::one(&ctx), GradedPoly::one(&ctx)]);
            }
            let n = r.rank() as i64;
            let inv: Vec<GradedPoly> = (0..=i as i64)
                .map(|j| {
                    let c = binomial(n + j - 1, j) * if j % 2 == 1 { -1 } else { 1 };
                    GradedPoly::constant(&ctx, Rat::from_integer(c))
                })
                .collect();
            factors.push(inv);
            for f in factors {
                let mut next = vec![GradedPoly::zero(&ctx); i + 1];
                for (a, pa) in poly.iter().enumerate() {
                    if pa.num_terms() == 0 {
                        continue;
                    }
                    for (b, fb) in f.iter().enumerate() {
                        if a + b > i {
                            break;
                        }
                        next[a + b] = next[a + b].add(&pa.mul(fb)?)?;
                    }
                }
                poly = next;
            }
            Ok(poly.pop().expect("nonempty"))
        }
    }
}

/// Chern character applied coefficientwise.
pub fn ch_series(s: &KSeries, roots: &RootAssignment) -> Result<QSeries<GradedPoly>> {
    s.map(&roots.ctx, |c| ch(c, roots))
}

/// Odd Chern character density of an expression in `E` at the flat point,
/// as an odd series in the variable `z` of `zctx`.
///
/// It is the derivation with `λ^i(E~) -> (-1)^(i+1) 2 sinh(iZ)` and
/// `Δ(E) -> 2^(N/2) tanh(Z/2) / 2`, paired with ranks at the flat point.
pub fn ch_odd(e: &BundleExpr, rank_n: u32, zctx: &GradedCtx, z: usize) -> Result<GradedPoly> {
    let delta_rank = Rat::from_integer(BigInt::from(2).pow(rank_n / 2));
    let mut total = GradedPoly::zero(zctx);
    for (atoms, c) in e.terms() {
        if atoms.iter().any(|a| !matches!(a, Atom::Lambda(Sym::E, _) | Atom::Delta(Sym::E))) {
            return Err(Error::InvalidArgument("odd character is only defined for E".into()));
        }
        let n_lambda = atoms.iter().filter(|a| matches!(a, Atom::Lambda(..))).count();
        let n_delta = atoms.len() - n_lambda;
        let c = Rat::from_integer(c.clone());
        let term = match n_lambda {
            0 if n_delta == 0 => continue,
            0 => {
                // d(Δ^n) = n Δ^(n-1) dΔ
                let tanh = sinh_half(zctx, z).mul(&cosh_half(zctx, z).inv()?)?.scale_by(&Rat::new(1.into(), 2.into()));
                let f = rat(n_delta as i64) * num_traits::pow(delta_rank.clone(), n_delta);
                tanh.scale_by(&f)
            }
            1 => {
                let i = atoms.iter().find_map(|a| if let Atom::Lambda(_, i) = a { Some(*i) } else { None }).expect("one");
                let sign = if i % 2 == 1 { 1 } else { -1 };
                two_sinh(zctx, z, i64::from(i)).scale_by(&(rat(sign) * num_traits::pow(delta_rank.clone(), n_delta)))
            }
            _ => continue,
        };
        total = total.add(&term.scale_by(&c))?;
    }
    Ok(total)
}
