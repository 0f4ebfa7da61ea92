//! Assembly of the characteristic-form q-series and the theorem checks.
//!
//! A case multiplies an even part (a product of theta quotients over the
//! Chern roots) by the odd transgression series. The odd generator `t_(4r-1)`
//! stands for the normalized `Tr[(g^-1 dg)^(4r-1)]`; powers of `2 pi`, the
//! `-1/(8 pi^2)` prefactor and the curvature rescaling are absorbed into it,
//! which is harmless because every identity checked is linear in each
//! `t_(4r-1)`. The `2^(N/2)` rank of the spinor bundle is kept explicitly,
//! since the level-2 mirror relation depends on it.

pub mod divisibility;
pub mod gamma;
pub mod report;
pub mod sl2z;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedCtx, GradedPoly, Mono};
use crate::ring::{rat, Algebra, Rat, Ring};
use crate::series::QSeries;
use crate::theta::{factorial, theta_quotient, univariate_ctx, QuotientKind};

pub use report::{Check, SliceReport, TheoremReport};

pub const DEFAULT_ORDER_HALF: u32 = 6;
pub const DEFAULT_RANK_N: u32 = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SpinSl2z,
    SpincWitten,
    SpincStar,
    GammaSpin,
    GammaSpincWitten,
    GammaSpincStar,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::SpinSl2z,
        Family::SpincWitten,
        Family::SpincStar,
        Family::GammaSpin,
        Family::GammaSpincWitten,
        Family::GammaSpincStar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::SpinSl2z => "spin_sl2z",
            Family::SpincWitten => "spinc_witten",
            Family::SpincStar => "spinc_star",
            Family::GammaSpin => "gamma_spin",
            Family::GammaSpincWitten => "gamma_spinc_witten",
            Family::GammaSpincStar => "gamma_spinc_star",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn even_kind(&self) -> EvenKind {
        match self {
            Family::SpinSl2z | Family::GammaSpin => EvenKind::Spin,
            Family::SpincWitten | Family::GammaSpincWitten => EvenKind::Witten,
            Family::SpincStar | Family::GammaSpincStar => EvenKind::Star,
        }
    }

    pub fn is_gamma(&self) -> bool {
        matches!(self, Family::GammaSpin | Family::GammaSpincWitten | Family::GammaSpincStar)
    }

    /// Dimensions run by default and under the heavy flag.
    pub fn default_dims(&self, heavy: bool) -> Vec<u32> {
        let base: Vec<u32> = match self.even_kind() {
            EvenKind::Star => vec![9, 13, 17, 21, 25],
            _ => vec![7, 11, 15, 19, 23],
        };
        if heavy {
            base
        } else {
            base.into_iter().take(2).collect()
        }
    }
}

/// Shape of the even (tangent and line bundle) factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum EvenKind {
    /// `prod 2A(X_j) * (prod Q1 + prod Q2 + prod Q3)`
    Spin,
    /// `prod A(X_j) * Q1 Q2 Q3 (Y)` with `Y^2 = sum X_j^2 / 3`
    Witten,
    /// `prod A(X_j) * WY(Y)` with `Y^2 = sum X_j^2`
    Star,
}

impl EvenKind {
    /// `k` from the dimension, with the dimension's residue checked.
    pub fn weight_index(&self, dim: u32) -> Result<u32> {
        let (res, k) = match self {
            EvenKind::Star => (1, dim.saturating_sub(1) / 4),
            _ => (3, (dim + 1) / 4),
        };
        if dim % 4 != res {
            return Err(Error::InvalidArgument(format!("dim must be ≡ {res} mod 4, got {dim}")));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("dim {dim} is too small, the smallest case is k = 2")));
        }
        Ok(k)
    }

    /// Even-part degree paired with `t_(4r-1)`.
    pub fn even_degree(&self, k: u32, r: u32) -> u32 {
        let base = 4 * (k - r);
        if *self == EvenKind::Star {
            base + 2
        } else {
            base
        }
    }

    pub fn default_cap(&self, k: u32) -> u32 {
        self.even_degree(k, 1)
    }

    pub fn default_roots(&self, k: u32) -> u32 {
        match self {
            EvenKind::Star => 2 * k,
            _ => 2 * k - 1,
        }
    }
}

/// Which log-derivative feeds the odd transgression.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum OddFamily {
    /// `2^(N/2) (LOGD1 + LOGD2 + LOGD3)`
    SumA,
    /// `2^(N/2) LOGD1`
    Theta1,
    Theta2,
    Theta3,
}

/// `int_0^1 (u^2 - u)^(2r-1) du = -((2r-1)!)^2 / (4r-1)!`.
pub fn moment(r: u32) -> Result<Rat> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let a = factorial(2 * r - 1);
    Ok(-Rat::new(&a * &a, factorial(4 * r - 1)))
}

pub fn spinor_rank(rank_n: u32) -> Rat {
    Rat::from_integer(BigInt::from(2).pow(rank_n / 2))
}

/// Coefficient of `t_(4r-1)` in the odd Chern character, as a rational q-series.
pub fn odd_transgression(family: OddFamily, r: u32, order: u32, rank_n: u32) -> Result<QSeries<Rat>> {
    let deg = 2 * r - 1;
    let zctx = univariate_ctx(2 * deg)?;
    let kinds: &[QuotientKind] = match family {
        OddFamily::SumA => &[QuotientKind::LOGD1, QuotientKind::LOGD2, QuotientKind::LOGD3],
        OddFamily::Theta1 => &[QuotientKind::LOGD1],
        OddFamily::Theta2 => &[QuotientKind::LOGD2],
        OddFamily::Theta3 => &[QuotientKind::LOGD3],
    };
    let mut sum = QSeries::zero(&zctx, order);
    for &kind in kinds {
        sum = sum.add(&theta_quotient(kind, &zctx, 0, order)?.series)?;
    }
    let scale = match family {
        OddFamily::SumA | OddFamily::Theta1 => spinor_rank(rank_n),
        _ => rat(1),
    } * moment(r)?;
    z_coefficient(&sum, deg).map(|s| s.scale(&scale))
}

/// `[Z^d]` of a univariate series, coefficientwise.
pub fn z_coefficient(s: &QSeries<GradedPoly>, d: u32) -> Result<QSeries<Rat>> {
    s.map(&(), |p| Ok(p.degree_component(2 * d).constant_like()))
}

trait ConstantLike {
    fn constant_like(&self) -> Rat;
}

impl ConstantLike for GradedPoly {
    /// The single coefficient of a one-term polynomial (zero when empty).
    fn constant_like(&self) -> Rat {
        self.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(|| rat(0))
    }
}

/// Generator layout and truncation for one case.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub kind: EvenKind,
    pub k: u32,
    pub roots: u32,
    pub cap: u32,
    pub order: u32,
}

impl Layout {
    pub fn new(kind: EvenKind, dim: u32, order: u32, cap: Option<u32>, roots: Option<u32>) -> Result<Self> {
        let k = kind.weight_index(dim)?;
        let need = kind.default_cap(k);
        let cap = cap.unwrap_or(need);
        if cap < need {
            return Err(Error::InsufficientTruncation(format!("degree cap {cap} is below the {need} needed for dim {dim}")));
        }
        let roots = roots.unwrap_or_else(|| kind.default_roots(k));
        if roots == 0 {
            return Err(Error::InvalidArgument("root count must be positive".into()));
        }
        if order < 2 {
            return Err(Error::InvalidArgument("order_half must be at least 2".into()));
        }
        Ok(Layout { kind, k, roots, cap, order })
    }

    pub fn ctx(&self) -> Result<GradedCtx> {
        GradedCtx::new(self.roots as usize, self.kind != EvenKind::Spin, self.cap)
    }
}

/// `sum_j X_j^2` over the tangent roots.
pub fn p1_tangent(ctx: &GradedCtx) -> Result<GradedPoly> {
    let mut s = GradedPoly::zero(ctx);
    for j in 0..ctx.n_x() {
        let x = GradedPoly::var(ctx, j)?;
        s = s.add(&x.mul(&x)?)?;
    }
    Ok(s)
}

/// Product over the tangent roots of per-root factors built by `f`.
fn root_product<F>(ctx: &GradedCtx, order: u32, mut f: F) -> Result<QSeries<GradedPoly>>
where
    F: FnMut(usize) -> Result<QSeries<GradedPoly>>,
{
    let mut acc = QSeries::one(ctx, order);
    for j in 0..ctx.n_x() {
        acc = acc.mul(&f(j)?)?;
    }
    Ok(acc)
}

/// Even part of the case, before any slice is taken.
pub fn even_part(layout: &Layout) -> Result<QSeries<GradedPoly>> {
    let ctx = layout.ctx()?;
    let order = layout.order;
    let q = |kind, var| theta_quotient(kind, &ctx, var, order).map(|t| t.series);
    match layout.kind {
        EvenKind::Spin => {
            let mut total = QSeries::zero(&ctx, order);
            for qi in [QuotientKind::Q1, QuotientKind::Q2, QuotientKind::Q3] {
                let prod = root_product(&ctx, order, |j| Ok(q(QuotientKind::A, j)?.mul(&q(qi, j)?)?.scale(&rat(2))))?;
                total = total.add(&prod)?;
            }
            Ok(total)
        }
        EvenKind::Witten | EvenKind::Star => {
            let y = ctx.y_index().expect("layout has Y");
            let a = root_product(&ctx, order, |j| q(QuotientKind::A, j))?;
            let (fy, s) = if layout.kind == EvenKind::Witten {
                let f = q(QuotientKind::Q1, y)?.mul(&q(QuotientKind::Q2, y)?)?.mul(&q(QuotientKind::Q3, y)?)?;
                (f, p1_tangent(&ctx)?.scale(&Rat::new(1.into(), 3.into())))
            } else {
                (q(QuotientKind::WY, y)?, p1_tangent(&ctx)?)
            };
            let full = a.mul(&fy)?;
            full.map(&ctx, |c| c.subst_y_squared(&s))
        }
    }
}

/// Even part with the `Y`-dependent factor left unsubstituted.
pub fn even_part_unsubstituted(layout: &Layout) -> Result<QSeries<GradedPoly>> {
    let ctx = layout.ctx()?;
    let order = layout.order;
    let q = |kind, var| theta_quotient(kind, &ctx, var, order).map(|t| t.series);
    let y = ctx.y_index().ok_or_else(|| Error::InvalidArgument("spin layouts have no Y".into()))?;
    let a = root_product(&ctx, order, |j| q(QuotientKind::A, j))?;
    let fy = match layout.kind {
        EvenKind::Witten => q(QuotientKind::Q1, y)?.mul(&q(QuotientKind::Q2, y)?)?.mul(&q(QuotientKind::Q3, y)?)?,
        _ => q(QuotientKind::WY, y)?,
    };
    a.mul(&fy)
}

/// Degree-`d` part of every coefficient.
pub fn degree_slice(s: &QSeries<GradedPoly>, d: u32) -> Result<QSeries<GradedPoly>> {
    s.map(s.ctx(), |c| Ok(c.degree_component(d)))
}

/// The series paired with one odd generator.
#[derive(Clone, Debug)]
pub struct Slice {
    pub r: u32,
    pub even_degree: u32,
    /// `even^(deg) * odd_r * t_(4r-1)`
    pub series: QSeries<GradedPoly>,
    /// Excluded from the total because `t_3` vanishes when `c_3 = 0`.
    pub excluded: bool,
}

/// All slices `r = 1..=k` of `even * odd`.
pub fn slices(layout: &Layout, even: &QSeries<GradedPoly>, odd: OddFamily, rank_n: u32) -> Result<Vec<Slice>> {
    let ctx = layout.ctx()?;
    let mut out = Vec::new();
    for r in 1..=layout.k {
        let d = layout.kind.even_degree(layout.k, r);
        let o = odd_transgression(odd, r, layout.order, rank_n)?;
        let t = GradedPoly::odd_gen(&ctx, (4 * r - 1) as u8)?;
        let series = degree_slice(even, d)?.mul_rat(&o)?.mul_coeff(&t)?;
        out.push(Slice { r, even_degree: d, series, excluded: r == 1 });
    }
    Ok(out)
}

/// Sum of the included slices.
pub fn total(layout: &Layout, slices: &[Slice]) -> Result<QSeries<GradedPoly>> {
    let ctx = layout.ctx()?;
    let mut acc = QSeries::zero(&ctx, layout.order);
    for s in slices.iter().filter(|s| !s.excluded) {
        acc = acc.add(&s.series)?;
    }
    Ok(acc)
}

/// Total degree `4k-1` spin series over `SL_2(Z)`.
pub fn spin_sl2z_series(k: u32, order: u32, cap: Option<u32>, rank_n: u32) -> Result<QSeries<GradedPoly>> {
    let layout = Layout::new(EvenKind::Spin, 4 * k - 1, order, cap, None)?;
    let even = even_part(&layout)?;
    total(&layout, &slices(&layout, &even, OddFamily::SumA, rank_n)?)
}

/// Options shared by every verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub family: Family,
    pub dim: u32,
    pub order_half: u32,
    pub rank_n: u32,
    pub degree_cap: Option<u32>,
    pub roots: Option<u32>,
}

impl CaseConfig {
    pub fn new(family: Family, dim: u32) -> Self {
        CaseConfig { family, dim, order_half: DEFAULT_ORDER_HALF, rank_n: DEFAULT_RANK_N, degree_cap: None, roots: None }
    }

    pub fn validate(&self) -> Result<Layout> {
        if self.rank_n < 2 || self.rank_n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("rank N must be even and positive, got {}", self.rank_n)));
        }
        if self.roots.is_some() && self.family.even_kind() != EvenKind::Star {
            return Err(Error::InvalidArgument("a root count can only be set for the star families".into()));
        }
        Layout::new(self.family.even_kind(), self.dim, self.order_half, self.degree_cap, self.roots)
    }

    pub fn case_id(&self) -> String {
        format!("{}/{}", self.family.name(), self.dim)
    }
}

/// Runs the verification for one case.
pub fn verify(cfg: &CaseConfig) -> Result<TheoremReport> {
    if cfg.family.is_gamma() {
        gamma::gamma_pipeline(cfg)
    } else {
        sl2z::verify_sl2z_family(cfg)
    }
}

/// Even part with an extra `e^(Y/2)` factor before the substitution. The
/// theorems do not hold for it; it exists so tests can show that.
pub fn even_part_with_half_exponential(layout: &Layout) -> Result<QSeries<GradedPoly>> {
    let ctx = layout.ctx()?;
    ctx.y_index().ok_or_else(|| Error::InvalidArgument("spin layouts have no Y".into()))?;
    let e = GradedPoly::y(&ctx)?.scale_by(&Rat::new(1.into(), 2.into())).exp_even()?;
    let s = match layout.kind {
        EvenKind::Witten => p1_tangent(&ctx)?.scale(&Rat::new(1.into(), 3.into())),
        _ => p1_tangent(&ctx)?,
    };
    even_part_unsubstituted(layout)?.mul_coeff(&e)?.map(&ctx, |c| c.subst_y_squared(&s))
}

/// Rational `c` with `target = sum c_i basis_i`, when it exists and is unique.
pub fn linear_relation(target: &GradedPoly, basis: &[GradedPoly]) -> Option<Vec<Rat>> {
    use num_traits::Zero;
    use std::collections::BTreeSet;
    let n = basis.len();
    let monos: BTreeSet<Mono> =
        basis.iter().chain(std::iter::once(target)).flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    let value = |p: &GradedPoly, m: &Mono| p.terms().find(|(x, _)| *x == m).map(|(_, c)| c.clone()).unwrap_or_else(|| rat(0));
    // rows reduced against earlier pivots, each pivot normalized to 1
    let mut pivots: Vec<(usize, Vec<Rat>, Rat)> = Vec::new();
    for m in &monos {
        let mut row: Vec<Rat> = basis.iter().map(|b| value(b, m)).collect();
        let mut rhs = value(target, m);
        for (col, prow, prhs) in &pivots {
            let f = row[*col].clone();
            if Zero::is_zero(&f) {
                continue;
            }
            for j in 0..n {
                row[j] -= &f * &prow[j];
            }
            rhs -= &f * prhs;
        }
        match (0..n).find(|&j| !Zero::is_zero(&row[j])) {
            None if Zero::is_zero(&rhs) => {}
            None => return None,
            Some(col) => {
                let p = row[col].clone();
                let row: Vec<Rat> = row.iter().map(|v| v / &p).collect();
                pivots.push((col, row, rhs / &p));
            }
        }
    }
    if pivots.len() < n {
        return None;
    }
    let mut x = vec![rat(0); n];
    for (col, row, rhs) in pivots.iter().rev() {
        let mut v = rhs.clone();
        for j in 0..n {
            if j != *col {
                v -= &row[j] * &x[j];
            }
        }
        x[*col] = v;
    }
    Some(x)
}
