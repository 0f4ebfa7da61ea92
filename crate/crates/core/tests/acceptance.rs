//! Acceptance criteria 1-10. Each run prints one PASS/FAIL line per
//! criterion with the measured time against its budget.
//!
//! The default run covers the light dimensions. `acceptance_heavy` (ignored,
//! run with `--ignored`) adds the heavy dimensions and the strict form of every
//! printed constant.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use anomaly_core::anomaly::{self, degree_slice, even_part, CaseConfig, EvenKind, Family, Layout, TheoremReport};
use anomaly_core::kring::{build, ch, BundleCtx, BundleExpr, Builder, KSeries, RootAssignment, Sym};
use anomaly_core::modforms::{
    delta_eps, eisenstein, numeric_modularity_check, power_expansion_gamma0lower, Group, ModularLaw,
};
use anomaly_core::ring::{rat, ratio, Rat};
use anomaly_core::theta::numeric::{factors_for, law_deviations};
use anomaly_core::{GradedCtx, QSeries, Ring};

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    secs: f64,
    budget: f64,
}

impl Outcome {
    fn line(&self) -> String {
        let ok = self.pass && self.secs <= self.budget;
        format!(
            "criterion {:>2} {} {}: {} ({:.2}s, budget {}s)",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.secs,
            self.budget
        )
    }

    fn ok(&self) -> bool {
        self.pass && self.secs <= self.budget
    }
}

fn timed(id: u8, name: &'static str, budget: f64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    Outcome { id, name, pass, detail, secs: start.elapsed().as_secs_f64(), budget }
}

fn q_series(order: u32, coeffs: &[(u32, Rat)]) -> QSeries<Rat> {
    QSeries::from_terms(&(), order, coeffs.iter().cloned()).unwrap()
}

/// Integer series in `q`, stored at even `u`-exponents.
fn q_ints(order: u32, c: &[i64]) -> QSeries<Rat> {
    q_series(order, &c.iter().enumerate().map(|(n, &v)| (2 * n as u32, rat(v))).collect::<Vec<_>>())
}

fn c1_eisenstein() -> Outcome {
    timed(1, "Eisenstein fidelity", 1.0, || {
        let e4 = eisenstein(4, 3).unwrap().series;
        let e6 = eisenstein(6, 3).unwrap().series;
        let ok4 = e4 == q_ints(7, &[1, 240, 2160, 6720]);
        let ok6 = e6 == q_ints(7, &[1, -504, -16632, -122976]);
        (ok4 && ok6, format!("E4 = {e4}, E6 = {e6}"))
    })
}

/// The printed product expansions; `E4 E6` carries the printed `-117288`.
const PRINTED_PRODUCTS: [(&str, [i64; 3]); 4] = [
    ("E4^2", [1, 480, 61920]),
    ("E4*E6", [1, -264, -117288]),
    ("E4^3", [1, 720, 179280]),
    ("E6^2", [1, -1008, 220752]),
];

/// Mismatching products as `(name, engine q^2, printed q^2)`.
fn product_mismatches() -> Vec<(&'static str, Rat, i64)> {
    let e4 = eisenstein(4, 2).unwrap().series;
    let e6 = eisenstein(6, 2).unwrap().series;
    let got = [
        e4.mul(&e4).unwrap(),
        e4.mul(&e6).unwrap(),
        e4.pow(3).unwrap(),
        e6.mul(&e6).unwrap(),
    ];
    let mut bad = Vec::new();
    for ((name, want), s) in PRINTED_PRODUCTS.iter().zip(got) {
        if s != q_ints(5, want) {
            bad.push((*name, s.coeff_q(2).unwrap(), want[2]));
        }
    }
    bad
}

fn c2_products() -> Outcome {
    timed(2, "product fidelity", 1.0, || {
        let bad = product_mismatches();
        let detail = if bad.is_empty() {
            "E4^2, E4 E6, E4^3, E6^2 exact through q^2".to_string()
        } else {
            bad.iter()
                .map(|(n, got, want)| format!("{n}: q^2 coefficient {got}, printed {want}"))
                .collect::<Vec<_>>()
                .join("; ")
        };
        (bad.is_empty(), detail)
    })
}

fn sample_taus(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.25))).collect()
}

fn c3_delta_eps() -> Outcome {
    timed(3, "delta/epsilon fidelity", 5.0, || {
        let (d1, e1) = delta_eps(Group::Gamma0_2, 41).unwrap();
        let (d2, e2) = delta_eps(Group::Gamma0Upper2, 41).unwrap();
        let lead = |s: &QSeries<Rat>, n: u32| s.truncate(n);
        let ok_lead = lead(&d1.series, 3) == q_series(3, &[(0, ratio(1, 4)), (2, rat(6))])
            && lead(&e1.series, 3) == q_series(3, &[(0, ratio(1, 16)), (2, rat(-1))])
            && lead(&d2.series, 2) == q_series(2, &[(0, ratio(-1, 8)), (1, rat(-3))])
            && lead(&e2.series, 2) == q_series(2, &[(1, rat(1))]);
        let taus = sample_taus(16, 7);
        let rd = numeric_modularity_check(&d2, Some(&d1), ModularLaw::SPartner, &taus, 1e-6).unwrap();
        let re = numeric_modularity_check(&e2, Some(&e1), ModularLaw::SPartner, &taus, 1e-6).unwrap();
        let ok = ok_lead && rd.pass && re.pass && rd.samples >= 10 && re.samples >= 10;
        (
            ok,
            format!(
                "leading terms {}, S-law deviations {:.1e} / {:.1e} at {} points",
                if ok_lead { "exact" } else { "differ" },
                rd.max_deviation,
                re.max_deviation,
                rd.samples.min(re.samples)
            ),
        )
    })
}

fn c4_power_expansion() -> Outcome {
    timed(4, "power-expansion identity", 5.0, || {
        let mut bad = Vec::new();
        let mut n = 0;
        for k in 2..=6i64 {
            for s in 0..=k / 2 {
                let got = power_expansion_gamma0lower(k as u32, s as u32, 5).unwrap();
                let lead = pow2(k - 6 * s);
                let q1 = 24 * k - 64 * s;
                let q2 = 288 * k * k - 1536 * k * s + 2048 * s * s + 512 * s - 264 * k;
                let want = q_series(5, &[(0, rat(1)), (2, rat(q1)), (4, rat(q2))]).scale(&lead);
                n += 1;
                if got != want {
                    bad.push(format!("k={k} s={s}"));
                }
            }
        }
        (bad.is_empty(), if bad.is_empty() { format!("{n} (k, s) pairs exact through q^2") } else { bad.join(", ") })
    })
}

fn pow2(e: i64) -> Rat {
    let p = num_bigint::BigInt::from(2).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(1.into(), p)
    }
}

/// The printed expansions of the three theta bundles and `Q(E)` through `q^2`.
fn printed_bundles(ctx: &BundleCtx) -> Vec<(Builder, KSeries)> {
    let t = BundleExpr::tilde(ctx, Sym::T);
    let l = |i| BundleExpr::lambda_tilde(ctx, Sym::T, i);
    let s2 = BundleExpr::symm_tilde(ctx, Sym::T, 2).unwrap();
    let tt = t.mul(&t).unwrap();
    let int = |n| BundleExpr::integer(ctx, n);
    let sum = |xs: &[BundleExpr]| xs.iter().fold(int(0), |a, x| a.add(x).unwrap());
    let ks = |terms: Vec<(u32, BundleExpr)>| KSeries::from_terms(ctx, 5, terms).unwrap();

    let theta1 = ks(vec![(0, int(1)), (2, t.scale_int(&2.into())), (4, sum(&[t.scale_int(&2.into()), l(2), tt.clone(), s2.clone()]))]);
    let q_half = sum(&[l(3), t.clone(), tt.clone()]);
    let q_two = sum(&[l(4), l(2).mul(&t).unwrap(), tt.clone(), s2.clone(), t.clone()]);
    let theta2 = ks(vec![
        (0, int(1)),
        (1, t.neg()),
        (2, sum(&[t.clone(), l(2)])),
        (3, q_half.neg()),
        (4, q_two.clone()),
    ]);
    let theta3 = ks(vec![(0, int(1)), (1, t.clone()), (2, sum(&[t.clone(), l(2)])), (3, q_half), (4, q_two)]);

    let e = BundleExpr::tilde(ctx, Sym::E);
    let el = |i| BundleExpr::lambda_tilde(ctx, Sym::E, i);
    let ee = e.mul(&e).unwrap();
    let d = BundleExpr::delta(ctx, Sym::E);
    let q1 = sum(&[el(2).scale_int(&2.into()), ee.neg(), e.clone()]);
    let q2 = sum(&[
        el(2).mul(&el(2)).unwrap(),
        el(4).scale_int(&2.into()),
        e.mul(&el(3)).unwrap().scale_int(&(-2).into()),
        e.mul(&el(2)).unwrap().scale_int(&2.into()),
        ee.mul(&e).unwrap().neg(),
        e.clone(),
        el(2),
    ]);
    let q = ks(vec![(0, d.clone()), (2, d.mul(&q1).unwrap()), (4, d.mul(&q2).unwrap())]);
    vec![(Builder::Theta1, theta1), (Builder::Theta2, theta2), (Builder::Theta3, theta3), (Builder::Q, q)]
}

fn c5_bundles() -> Outcome {
    timed(5, "bundle expansions", 10.0, || {
        let ctx = BundleCtx::default();
        let mut bad = Vec::new();
        for (b, want) in printed_bundles(&ctx) {
            if build(b, &ctx, 5).unwrap() != want {
                bad.push(b.name());
            }
        }
        (bad.is_empty(), if bad.is_empty() { "Theta1, Theta2, Theta3, Q(E) structurally equal through q^2".into() } else { bad.join(", ") })
    })
}

fn run(family: Family, dim: u32) -> TheoremReport {
    anomaly::verify(&CaseConfig::new(family, dim)).unwrap()
}

fn describe(r: &TheoremReport) -> String {
    let fails = r.failed_checks();
    let keys = ["q1/q0", "q2/q0", "alpha", "beta"];
    let consts: Vec<String> = keys.iter().filter_map(|k| r.constants.get(*k).map(|v| format!("{k}={v}"))).collect();
    let mut s = format!("{}/{} {}", r.family, r.dim, consts.join(" "));
    if !fails.is_empty() {
        s.push_str(&format!(" failing [{}]", fails.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")));
    }
    if !r.residual_zero {
        s.push_str(" nonzero residual");
    }
    s
}

fn families(id: u8, name: &'static str, budget: f64, cases: &[(Family, u32)]) -> Outcome {
    timed(id, name, budget, || {
        let reports: Vec<TheoremReport> = cases.iter().map(|&(f, d)| run(f, d)).collect();
        let ok = reports.iter().all(|r| r.pass);
        (ok, reports.iter().map(describe).collect::<Vec<_>>().join("; "))
    })
}

fn c6_spin(heavy: bool) -> Outcome {
    let mut dims = vec![7, 11];
    if heavy {
        dims.extend([15, 19, 23]);
    }
    let cases: Vec<_> = dims.into_iter().map(|d| (Family::SpinSl2z, d)).collect();
    families(6, "spin SL2(Z) theorems", if heavy { 900.0 } else { 60.0 }, &cases)
}

fn c7_spinc(heavy: bool) -> Outcome {
    let mut cases = vec![(Family::SpincWitten, 7), (Family::SpincWitten, 11), (Family::SpincStar, 9), (Family::SpincStar, 13)];
    if heavy {
        cases.extend([15, 19, 23].map(|d| (Family::SpincWitten, d)));
        cases.extend([17, 21, 25].map(|d| (Family::SpincStar, d)));
    }
    families(7, "spin^c theorems", if heavy { 900.0 } else { 60.0 }, &cases)
}

fn c8_gamma(heavy: bool) -> Outcome {
    timed(8, "gamma ladder", if heavy { 900.0 } else { 300.0 }, || {
        let r = run(Family::GammaSpin, 11);
        let needed = ["h0_zero", "h1_sign", "q_half_bundle_image", "mirror"];
        let mut ok = r.pass && needed.iter().all(|n| r.checks.iter().any(|c| c.name == *n && c.pass));
        let mut detail = format!("dim 11: h0 = {}, h1 sign and mirror {}", r.constants["h0"], if ok { "exact" } else { "fail" });
        if heavy {
            let r15 = run(Family::GammaSpin, 15);
            let rec = r15.checks.iter().find(|c| c.name == "h2_recurrence").expect("k=4 has h2");
            ok &= rec.pass;
            detail.push_str(&format!(
                "; dim 15: h2 bracket printed {}, engine {}",
                r15.claimed["h2_bracket"], r15.constants["h2_bracket"]
            ));
        }
        (ok, detail)
    })
}

fn c9_laws() -> Outcome {
    timed(9, "numeric law suite", 5.0, || {
        let mut rng = StdRng::seed_from_u64(11);
        let mut worst = 0.0f64;
        let mut worst_name = String::new();
        let n = 24;
        for _ in 0..n {
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.25));
            let v = Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.05..0.05));
            let abs_q = (-2.0 * PI * tau.im).exp().max((-2.0 * PI * (-tau.inv()).im).exp());
            assert!(abs_q <= 0.1);
            for (law, d) in law_deviations(v, tau, factors_for(abs_q, 1e-18)).unwrap() {
                if d > worst {
                    worst = d;
                    worst_name = law;
                }
            }
        }
        (worst < 1e-9, format!("max deviation {worst:.1e} ({worst_name}) over {n} samples with |q| <= 0.1"))
    })
}

fn c10_properties() -> Outcome {
    timed(10, "property suites", 60.0, || {
        let mut notes = Vec::new();

        // ring axioms on fixed integer series
        let a = q_ints(9, &[1, -3, 5, 0, 2]);
        let b = q_ints(9, &[2, 7, -1, 4, 0]);
        let c = q_ints(9, &[-1, 0, 3, 3, -8]);
        let ring = a.mul(&b.mul(&c).unwrap()).unwrap() == a.mul(&b).unwrap().mul(&c).unwrap()
            && a.mul(&b.add(&c).unwrap()).unwrap() == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            && a.mul(&b).unwrap() == b.mul(&a).unwrap()
            && a.mul(&a.inv().unwrap()).unwrap() == QSeries::one(&(), 9);
        notes.push(format!("ring axioms {}", ring));

        // S_t Λ_{-t} = 1 from the roots, and ch matching the root oracle
        let gctx = GradedCtx::new(2, false, 8).unwrap();
        let roots = RootAssignment::new(&gctx).with_generators(Sym::T, &[0, 1], 1).unwrap();
        let bctx = BundleCtx::default();
        let lam = common::root_oracle(&gctx, &[0, 1], 1, 4, false);
        let sym = common::root_oracle(&gctx, &[0, 1], 1, 4, true);
        let mut st = true;
        for n in 1..=4 {
            let mut acc = anomaly_core::GradedPoly::zero(&gctx);
            for i in 0..=n {
                let t = sym[i].mul(&lam[n - i]).unwrap();
                acc = if (n - i) % 2 == 1 { acc.sub(&t).unwrap() } else { acc.add(&t).unwrap() };
            }
            st &= acc.is_zero();
        }
        let mut chk = true;
        for i in 1..=4u8 {
            chk &= ch(&BundleExpr::lambda_tilde(&bctx, Sym::T, i), &roots).unwrap() == lam[i as usize];
            chk &= ch(&BundleExpr::symm_tilde(&bctx, Sym::T, i).unwrap(), &roots).unwrap() == sym[i as usize];
        }
        let x = BundleExpr::lambda_tilde(&bctx, Sym::T, 2).add(&BundleExpr::tilde(&bctx, Sym::T)).unwrap();
        let y = BundleExpr::lambda_tilde(&bctx, Sym::T, 3).sub(&BundleExpr::integer(&bctx, 2)).unwrap();
        chk &= ch(&x.mul(&y).unwrap(), &roots).unwrap() == ch(&x, &roots).unwrap().mul(&ch(&y, &roots).unwrap()).unwrap();
        notes.push(format!("S_t Λ_-t = 1 {st}, ch homomorphism {chk}"));

        // degree-4 slice through q^3
        let mut slice = true;
        for kind in [EvenKind::Spin, EvenKind::Witten] {
            for dim in [7, 11] {
                let layout = Layout::new(kind, dim, 7, None, None).unwrap();
                slice &= degree_slice(&even_part(&layout).unwrap(), 4).unwrap().is_zero();
            }
        }
        notes.push(format!("degree-4 slice zero {slice}"));

        // rank parameter
        let mut same = true;
        for family in Family::ALL {
            for dim in family.default_dims(false) {
                let mut outcomes = Vec::new();
                for n in [4, 8] {
                    let mut cfg = CaseConfig::new(family, dim);
                    cfg.rank_n = n;
                    outcomes.push(anomaly::verify(&cfg).unwrap().pass);
                }
                same &= outcomes[0] == outcomes[1];
            }
        }
        notes.push(format!("rank invariance N=4,8 {same}"));
        (ring && st && chk && slice && same, notes.join(", "))
    })
}

fn all(heavy: bool) -> Vec<Outcome> {
    let out = vec![
        c1_eisenstein(),
        c2_products(),
        c3_delta_eps(),
        c4_power_expansion(),
        c5_bundles(),
        c6_spin(heavy),
        c7_spinc(heavy),
        c8_gamma(heavy),
        c9_laws(),
        c10_properties(),
    ];
    // straight to stdout so the lines survive output capture
    let mut w = std::io::stdout().lock();
    let _ = writeln!(w);
    for o in &out {
        let _ = writeln!(w, "{}", o.line());
    }
    out
}

#[test]
fn acceptance() {
    let out = all(false);
    for o in &out {
        if o.id == 2 {
            // the printed E4 E6 expansion has -117288 at q^2; the product is
            // -135432, the q^2 coefficient of E10 = 1 - 264 sum sigma_9(n) q^n
            let bad = product_mismatches();
            assert_eq!(bad.len(), 1, "{}", o.line());
            assert_eq!(bad[0].0, "E4*E6");
            assert_eq!(bad[0].1, rat(-135432));
            assert_eq!(bad[0].1, rat(-264) * rat(513));
            continue;
        }
        assert!(o.ok(), "{}", o.line());
    }
}

#[test]
#[ignore = "heavy dimensions and the strict printed constants; fails on the recorded errata"]
fn acceptance_heavy() {
    let out = all(true);
    let failed: Vec<String> = out.iter().filter(|o| !o.ok()).map(Outcome::line).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
