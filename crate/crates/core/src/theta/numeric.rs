//! Double-precision theta functions from their product definitions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Which {
    Theta,
    Theta1,
    Theta2,
    Theta3,
    /// `d theta / dv`
    ThetaPrime,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// `e^(2 pi i tau x)`.
fn qpow(tau: Complex64, x: f64) -> Complex64 {
    (2.0 * PI * i() * tau * x).exp()
}

/// Evaluates `which(v, tau)` with `n_factors` factors of the infinite product.
pub fn theta_numeric(which: Which, v: Complex64, tau: Complex64, n_factors: u32) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane(format!("{tau}")));
    }
    if n_factors == 0 {
        return Err(Error::InvalidArgument("n_factors must be at least 1".into()));
    }
    let z = (2.0 * PI * i() * v).exp();
    let zi = z.inv();
    let q18 = (PI * i() * tau / 4.0).exp();
    let one = Complex64::new(1.0, 0.0);
    let mut p = one;
    match which {
        Which::Theta | Which::Theta1 => {
            let s = if which == Which::Theta { -1.0 } else { 1.0 };
            for j in 1..=n_factors {
                let qj = qpow(tau, f64::from(j));
                p *= (one - qj) * (one + s * z * qj) * (one + s * zi * qj);
            }
            let trig = if which == Which::Theta { (PI * v).sin() } else { (PI * v).cos() };
            Ok(2.0 * q18 * trig * p)
        }
        Which::Theta2 | Which::Theta3 => {
            let s = if which == Which::Theta2 { -1.0 } else { 1.0 };
            for j in 1..=n_factors {
                let qj = qpow(tau, f64::from(j));
                let qh = qpow(tau, f64::from(j) - 0.5);
                p *= (one - qj) * (one + s * z * qh) * (one + s * zi * qh);
            }
            Ok(p)
        }
        Which::ThetaPrime => {
            // product rule on 2 q^(1/8) sin(pi v) prod f_j(v)
            let mut dlog = Complex64::new(0.0, 0.0);
            for j in 1..=n_factors {
                let qj = qpow(tau, f64::from(j));
                let a = one - z * qj;
                let b = one - zi * qj;
                p *= (one - qj) * a * b;
                let dz = 2.0 * PI * i();
                dlog += (-dz * z * qj) / a + (dz * zi * qj) / b;
            }
            let sin = (PI * v).sin();
            let cos = (PI * v).cos();
            Ok(2.0 * q18 * p * (PI * cos + sin * dlog))
        }
    }
}

/// Largest modulus of `q = e^(2 pi i tau)` for which the default product length
/// gives full double precision.
pub const MAX_ABS_Q: f64 = 0.1;

/// Product length needed for relative error `tol` at a given `|q|`.
pub fn factors_for(abs_q: f64, tol: f64) -> u32 {
    if abs_q <= 0.0 {
        return 1;
    }
    let n = (tol.ln() / abs_q.ln()).ceil();
    n.clamp(1.0, 10_000.0) as u32 + 2
}

/// One transformation law evaluated at a sample point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawSample {
    pub law: String,
    pub tau: [f64; 2],
    pub v: [f64; 2],
    pub deviation: f64,
}

fn sqrt_tau_over_i(tau: Complex64) -> Complex64 {
    // principal branch; tau/i has positive real part on the upper half plane
    (tau / i()).sqrt()
}

/// Relative deviation `|lhs - rhs| / max(1, |rhs|)`.
fn dev(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(1.0)
}

/// Evaluates the Jacobi identity and the S/T laws of all theta functions.
pub fn law_deviations(v: Complex64, tau: Complex64, n: u32) -> Result<Vec<(String, f64)>> {
    use Which::*;
    let th = |w, v, t| theta_numeric(w, v, t, n);
    let mut out = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    let pi = Complex64::new(PI, 0.0);

    let jac_l = th(ThetaPrime, zero, tau)?;
    let jac_r = pi * th(Theta1, zero, tau)? * th(Theta2, zero, tau)? * th(Theta3, zero, tau)?;
    out.push(("jacobi".to_string(), dev(jac_l, jac_r)));

    let phase = (PI * i() / 4.0).exp();
    let t1 = tau + 1.0;
    let s = -tau.inv();
    let pre = sqrt_tau_over_i(tau) * (PI * i() * tau * v * v).exp();
    let tv = tau * v;

    out.push(("theta_T".into(), dev(th(Theta, v, t1)?, phase * th(Theta, v, tau)?)));
    out.push(("theta_S".into(), dev(th(Theta, v, s)?, pre / i() * th(Theta, tv, tau)?)));
    out.push(("theta1_T".into(), dev(th(Theta1, v, t1)?, phase * th(Theta1, v, tau)?)));
    out.push(("theta1_S".into(), dev(th(Theta1, v, s)?, pre * th(Theta2, tv, tau)?)));
    out.push(("theta2_T".into(), dev(th(Theta2, v, t1)?, th(Theta3, v, tau)?)));
    out.push(("theta2_S".into(), dev(th(Theta2, v, s)?, pre * th(Theta1, tv, tau)?)));
    out.push(("theta3_T".into(), dev(th(Theta3, v, t1)?, th(Theta2, v, tau)?)));
    out.push(("theta3_S".into(), dev(th(Theta3, v, s)?, pre * th(Theta3, tv, tau)?)));
    out.push(("theta_prime_T".into(), dev(th(ThetaPrime, v, t1)?, phase * th(ThetaPrime, v, tau)?)));
    let tp_s = th(ThetaPrime, zero, s)?;
    let tp_r = sqrt_tau_over_i(tau) / i() * tau * th(ThetaPrime, zero, tau)?;
    out.push(("theta_prime_S".into(), dev(tp_s, tp_r)));
    Ok(out)
}
