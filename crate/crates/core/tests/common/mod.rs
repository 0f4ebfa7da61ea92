//! Shared oracles for the integration tests.
#![allow(dead_code)]

use anomaly_core::ring::{rat, Rat};
use anomaly_core::theta::taylor;
use anomaly_core::{GradedCtx, GradedPoly, Ring};
use num_bigint::BigInt;

/// `e^(m X_var)` truncated at the cap of `ctx`.
pub fn exp_root(ctx: &GradedCtx, var: usize, m: i64) -> GradedPoly {
    let mut fact = BigInt::from(1);
    let mut coeffs = vec![rat(1)];
    for n in 1..=ctx.cap() {
        fact *= BigInt::from(n);
        coeffs.push(Rat::new(BigInt::from(m).pow(n), fact.clone()));
    }
    taylor(ctx, var, |n| coeffs[n as usize].clone())
}

type TPoly = Vec<GradedPoly>;

fn tmul(a: &TPoly, b: &TPoly, n: usize) -> TPoly {
    let ctx = *a[0].ctx_ref();
    let mut out = vec![GradedPoly::zero(&ctx); n + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= n {
                out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
            }
        }
    }
    out
}

fn binom(n: i64, k: i64) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `ch λ^i(V~)` or `ch S^i(V~)` for `i <= n`, where `V` has roots `±X_g`
/// for `g` in `gens` plus `zeros` zero roots, straight from the roots.
pub fn root_oracle(ctx: &GradedCtx, gens: &[usize], zeros: usize, n: usize, symmetric: bool) -> TPoly {
    let one = GradedPoly::one(ctx);
    let mut acc: TPoly = vec![one.clone()];
    acc.resize(n + 1, GradedPoly::zero(ctx));
    let rank = (2 * gens.len() + zeros) as i64;
    for &g in gens {
        for sign in [1, -1] {
            // 1 + t e^x, or 1 / (1 - t e^x) = sum t^m e^(m x)
            let f: TPoly = if symmetric {
                (0..=n).map(|m| exp_root(ctx, g, sign * m as i64)).collect()
            } else {
                vec![one.clone(), exp_root(ctx, g, sign)]
            };
            acc = tmul(&acc, &f, n);
        }
    }
    for _ in 0..zeros {
        let f: TPoly = if symmetric { vec![one.clone(); n + 1] } else { vec![one.clone(), one.clone()] };
        acc = tmul(&acc, &f, n);
    }
    // remove the rank: λ_t(C^r) = (1+t)^r, S_t(C^r) = (1-t)^(-r)
    let corr: TPoly = (0..=n as i64)
        .map(|j| {
            let c = if symmetric { binom(rank, j) * if j % 2 == 1 { -1 } else { 1 } } else { binom(rank + j - 1, j) * if j % 2 == 1 { -1 } else { 1 } };
            GradedPoly::constant(ctx, Rat::from_integer(c))
        })
        .collect();
    tmul(&acc, &corr, n)
}
