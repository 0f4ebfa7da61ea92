//! Property tests for the algebraic layers.

mod common;

use proptest::prelude::*;

use anomaly_core::anomaly::{slices, even_part, total, EvenKind, Layout, OddFamily};
use anomaly_core::kring::{ch, BundleCtx, BundleExpr, RootAssignment, Ranks, Sym};
use anomaly_core::modforms::decompose_sl2z;
use anomaly_core::ring::{rat, ratio, Rat};
use anomaly_core::{GradedCtx, GradedPoly, Mono, QSeries, Ring};

const ORDER: u32 = 8;

fn series() -> impl Strategy<Value = QSeries<Rat>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), ORDER as usize).prop_map(|c| {
        let terms: Vec<(u32, Rat)> = c.into_iter().enumerate().map(|(e, (n, d))| (e as u32, ratio(n, d))).collect();
        QSeries::from_terms(&(), ORDER, terms).unwrap()
    })
}

fn unit_series() -> impl Strategy<Value = QSeries<Rat>> {
    (series(), 1i64..=5).prop_map(|(s, c0)| {
        let fix = QSeries::constant(rat(c0) - s.coeff(0).unwrap(), ORDER);
        s.add(&fix).unwrap()
    })
}

proptest! {
    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b.mul(&c)?)?, a.mul(&b)?.mul(&c)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert_eq!(a.add(&b)?, b.add(&a)?);
        prop_assert!(a.sub(&a)?.is_zero());
        prop_assert_eq!(a.mul(&QSeries::one(&(), ORDER))?, a);
    }

    #[test]
    fn series_inverse(a in unit_series(), b in series()) {
        prop_assert_eq!(a.mul(&a.inv()?)?, QSeries::one(&(), ORDER));
        prop_assert_eq!(b.div(&a)?.mul(&a)?, b);
    }

    #[test]
    fn tau_shift_is_an_involutive_homomorphism(a in series(), b in series()) {
        prop_assert_eq!(a.tau_shift().tau_shift(), a.clone());
        prop_assert_eq!(a.mul(&b)?.tau_shift(), a.tau_shift().mul(&b.tau_shift())?);
        prop_assert_eq!(a.add(&b)?.tau_shift(), a.tau_shift().add(&b.tau_shift())?);
    }
}

const CAP: u32 = 8;

fn ctx3() -> GradedCtx {
    GradedCtx::new(3, false, CAP).unwrap()
}

/// Random polynomial in three even generators, optionally without constant term.
fn poly(constant: bool) -> impl Strategy<Value = GradedPoly> {
    prop::collection::vec(((0u8..=2, 0u8..=2, 0u8..=2), -6i64..=6, 1i64..=3), 1..6).prop_map(move |ts| {
        let ctx = ctx3();
        let mut p = GradedPoly::zero(&ctx);
        for ((a, b, c), n, d) in ts {
            if !constant && a + b + c == 0 {
                continue;
            }
            let mut t = GradedPoly::constant(&ctx, ratio(n, d));
            for (i, e) in [a, b, c].into_iter().enumerate() {
                t = t.mul(&GradedPoly::term(&ctx, Mono::var(i, e), rat(1))).unwrap();
            }
            p = p.add(&t).unwrap();
        }
        p
    })
}

proptest! {
    #[test]
    fn grading_is_multiplicative(a in poly(true), b in poly(true)) {
        let prod = a.mul(&b)?;
        for d in (0..=CAP).step_by(2) {
            let mut want = GradedPoly::zero(&ctx3());
            for i in (0..=d).step_by(2) {
                want = want.add(&a.degree_component(i).mul(&b.degree_component(d - i))?)?;
            }
            prop_assert_eq!(prod.degree_component(d), want);
        }
        let mut sum = GradedPoly::zero(&ctx3());
        for (_, c) in a.components() {
            sum = sum.add(&c)?;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn exp_law(a in poly(false), b in poly(false)) {
        prop_assert_eq!(a.add(&b)?.exp_even()?, a.exp_even()?.mul(&b.exp_even()?)?);
    }
}

/// Random integer combination of `λ^i(T~)`, `1` and one product.
fn bundle() -> impl Strategy<Value = BundleExpr> {
    (prop::collection::vec((0u8..=3, -3i64..=3), 1..4), 0u8..=2, 1u8..=2).prop_map(|(ts, i, j)| {
        let ctx = BundleCtx::default();
        let mut e = BundleExpr::integer(&ctx, 0);
        for (i, c) in ts {
            e = e.add(&BundleExpr::lambda_tilde(&ctx, Sym::T, i).scale_int(&c.into())).unwrap();
        }
        let extra = BundleExpr::lambda_tilde(&ctx, Sym::T, i).mul(&BundleExpr::lambda_tilde(&ctx, Sym::T, j)).unwrap();
        e.add(&extra).unwrap()
    })
}

fn assignment(pairs: usize, zeros: usize) -> RootAssignment {
    let gens: Vec<usize> = (0..pairs).collect();
    RootAssignment::new(&ctx3()).with_generators(Sym::T, &gens, zeros).unwrap()
}

proptest! {
    #[test]
    fn symmetric_times_lambda_from_roots(pairs in 1usize..=3, zeros in 0usize..=2) {
        let ctx = ctx3();
        let gens: Vec<usize> = (0..pairs).collect();
        let lam = common::root_oracle(&ctx, &gens, zeros, 4, false);
        let sym = common::root_oracle(&ctx, &gens, zeros, 4, true);
        let roots = assignment(pairs, zeros);
        let bctx = BundleCtx::default();
        for n in 1..=4usize {
            let mut acc = GradedPoly::zero(&ctx);
            for i in 0..=n {
                let t = sym[i].mul(&lam[n - i])?;
                acc = if (n - i) % 2 == 1 { acc.sub(&t)? } else { acc.add(&t)? };
            }
            prop_assert!(acc.is_zero(), "S_t Λ_-t at t^{}", n);
            prop_assert_eq!(&ch(&BundleExpr::lambda_tilde(&bctx, Sym::T, n as u8), &roots)?, &lam[n]);
            prop_assert_eq!(&ch(&BundleExpr::symm_tilde(&bctx, Sym::T, n as u8)?, &roots)?, &sym[n]);
        }
    }

    #[test]
    fn ch_is_a_ring_homomorphism(x in bundle(), y in bundle(), pairs in 1usize..=3, zeros in 0usize..=2) {
        let roots = assignment(pairs, zeros);
        let (cx, cy) = (ch(&x, &roots)?, ch(&y, &roots)?);
        prop_assert_eq!(ch(&x.mul(&y)?, &roots)?, cx.mul(&cy)?);
        prop_assert_eq!(ch(&x.add(&y)?, &roots)?, cx.add(&cy)?);
    }

    #[test]
    fn rank_is_degree_zero_of_ch(x in bundle(), pairs in 1usize..=3, zeros in 0usize..=2) {
        let roots = assignment(pairs, zeros);
        let ranks = Ranks { t: (2 * pairs + zeros) as u32, e: 0, l: 0 };
        prop_assert_eq!(Rat::from_integer(x.rank(&ranks)), ch(&x, &roots)?.constant_term());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Rescaling each odd generator leaves every slice modular with the same
    /// Eisenstein ratios.
    #[test]
    fn ratios_ignore_odd_normalization(dim in prop::sample::select(vec![7u32, 11]), scales in prop::collection::vec((1i64..=9, 1i64..=9, any::<bool>()), 3)) {
        let layout = Layout::new(EvenKind::Spin, dim, 6, None, None).unwrap();
        let even = even_part(&layout)?;
        let sl = slices(&layout, &even, OddFamily::SumA, 8)?;
        let base = total(&layout, &sl)?;
        let mut scaled = sl.clone();
        for (s, (n, d, neg)) in scaled.iter_mut().zip(scales) {
            s.series = s.series.scale(&(ratio(n, d) * rat(if neg { -1 } else { 1 })));
        }
        let moved = total(&layout, &scaled)?;
        let k = layout.k;
        prop_assert!(decompose_sl2z(&moved, 2 * k)?.residual_zero());
        for n in 1..=2 {
            let r0 = base.coeff_q(n)?.ratio_to(&base.coeff_q(0)?);
            let r1 = moved.coeff_q(n)?.ratio_to(&moved.coeff_q(0)?);
            prop_assert_eq!(r0, r1);
        }
    }
}
