//! Characters of the twisted bundles against products of theta quotients.

use num_bigint::BigInt;

use anomaly_core::kring::{build, ch_series, BundleCtx, Builder, RootAssignment, Sym};
use anomaly_core::ring::Rat;
use anomaly_core::theta::{ahat_factor, taylor, theta_quotient, QuotientKind};
use anomaly_core::{GradedCtx, GradedPoly, QSeries, Ring};

const ORDER: u32 = 5;
const PAIRS: usize = 2;

fn ctx() -> GradedCtx {
    GradedCtx::new(PAIRS, false, 8).unwrap()
}

fn roots(s: Sym) -> RootAssignment {
    let gens: Vec<usize> = (0..PAIRS).collect();
    // T carries one extra zero root, E none
    let zeros = usize::from(s == Sym::T);
    RootAssignment::new(&ctx()).with_generators(s, &gens, zeros).unwrap()
}

fn quotient(kind: QuotientKind, var: usize) -> QSeries<GradedPoly> {
    theta_quotient(kind, &ctx(), var, ORDER).unwrap().series
}

/// `prod_j f(X_j)` over the root pairs.
fn product(f: impl Fn(usize) -> QSeries<GradedPoly>) -> QSeries<GradedPoly> {
    (1..PAIRS).fold(f(0), |acc, j| acc.mul(&f(j)).unwrap())
}

/// `2 cosh(X/2)`.
fn two_cosh_half(var: usize) -> GradedPoly {
    let c = ctx();
    let mut fact = BigInt::from(1);
    let mut coeffs = vec![Rat::from_integer(2.into())];
    for n in 1..=c.cap() {
        fact *= BigInt::from(n);
        coeffs.push(if n % 2 == 0 { Rat::new(BigInt::from(2), BigInt::from(2).pow(n) * &fact) } else { Rat::from_integer(0.into()) });
    }
    taylor(&c, var, |n| coeffs[n as usize].clone())
}

fn character(b: Builder, s: Sym) -> QSeries<GradedPoly> {
    ch_series(&build(b, &BundleCtx::default(), ORDER).unwrap(), &roots(s)).unwrap()
}

#[test]
fn q2_q3_of_e_are_theta_products() {
    for (b, k) in [(Builder::Q2, QuotientKind::Q2), (Builder::Q3, QuotientKind::Q3)] {
        assert_eq!(character(b, Sym::E), product(|j| quotient(k, j)), "{}", b.name());
    }
}

#[test]
fn q1_of_e_carries_the_doubling() {
    let want = product(|j| quotient(QuotientKind::Q1, j).scale(&Rat::from_integer(2.into())));
    assert_eq!(character(Builder::Q1, Sym::E), want);
}

#[test]
fn theta2_theta3_over_ahat() {
    // A(X) divided by the A-hat factor
    let a = |j: usize| quotient(QuotientKind::A, j).mul_coeff(&ahat_factor(&ctx(), j).unwrap().inv().unwrap()).unwrap();
    for (b, k) in [(Builder::Theta2, QuotientKind::Q2), (Builder::Theta3, QuotientKind::Q3)] {
        let want = product(|j| a(j).mul(&quotient(k, j)).unwrap());
        assert_eq!(character(b, Sym::T), want, "{}", b.name());
    }
}

#[test]
fn theta1_with_spinor_factor() {
    let a = |j: usize| quotient(QuotientKind::A, j).mul_coeff(&ahat_factor(&ctx(), j).unwrap().inv().unwrap()).unwrap();
    let spinor = (1..PAIRS).fold(two_cosh_half(0), |acc, j| acc.mul(&two_cosh_half(j)).unwrap());
    let got = character(Builder::Theta1, Sym::T).mul_coeff(&spinor).unwrap();
    let want = product(|j| a(j).mul(&quotient(QuotientKind::Q1, j)).unwrap().scale(&Rat::from_integer(2.into())));
    assert_eq!(got, want);
}
