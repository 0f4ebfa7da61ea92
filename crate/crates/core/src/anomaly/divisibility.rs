//! Claimed divisibility of the index identities.
//!
//! The engine cannot certify these, since they rest on integrality of
//! indices. It reports each claimed modulus and whether it already divides
//! the integer constants of the verified identity ("direct") or needs the
//! integrality argument on top ("chained").

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{EvenKind, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityRow {
    pub label: String,
    /// Printed as an integer, or as `2^e` for the level-2 rows.
    pub modulus: String,
    pub constants: Vec<i64>,
    pub direct: bool,
}

fn row(label: &str, modulus: i64, constants: &[i64]) -> DivisibilityRow {
    let m = BigInt::from(modulus);
    let direct = constants.iter().all(|&c| (BigInt::from(c) % &m).is_zero());
    DivisibilityRow { label: label.to_string(), modulus: modulus.to_string(), constants: constants.to_vec(), direct }
}

fn chained(label: &str, exp: i64) -> DivisibilityRow {
    DivisibilityRow { label: label.to_string(), modulus: format!("2^{exp}"), constants: Vec::new(), direct: false }
}

/// Weight-`2k` constants of the level-one identity: `(q^1, q^2)` for
/// `k <= 5`, and `(q^0, q^1)` coefficients of the weight-12 relation.
pub fn sl2z_constants(k: u32) -> Option<(i64, i64)> {
    match k {
        2 => Some((240, 2160)),
        3 => Some((-504, -16632)),
        4 => Some((480, 61920)),
        5 => Some((-264, -117288)),
        6 => Some((196560, -24)),
        _ => None,
    }
}

/// The claimed table for a case. `k` is the weight index of `dim`.
pub fn divisibility_table(family: Family, k: u32, rank_n: u32) -> Vec<DivisibilityRow> {
    let half = i64::from(rank_n / 2);
    let k64 = i64::from(k);
    if family.is_gamma() {
        let (c0, c1) = if k.is_multiple_of(2) { (half - 2 * k64, half - 2 * k64 + 6) } else { (half + 3 - 2 * k64, half - 2 * k64 + 9) };
        return vec![chained("index, constant term", c0), chained("index, q coefficient", c1)];
    }
    let Some((a, b)) = sl2z_constants(k) else {
        return Vec::new();
    };
    match family.even_kind() {
        EvenKind::Spin => {
            let m = match k {
                2 => 16,
                3 => 8,
                4 => 32,
                5 => 8,
                _ => 16,
            };
            if k == 6 {
                vec![row("weight 12 relation", m, &[a, b])]
            } else {
                vec![row("q and q^2 identities", m, &[a, b])]
            }
        }
        kind => {
            if k == 6 {
                return vec![row("weight 12 relation", 24, &[a, b])];
            }
            // the star section prints 6192 for the weight 8 q^2 modulus
            let m2 = if kind == EvenKind::Star && k == 4 { 6192 } else { b.abs() };
            vec![row("q identity", a.abs(), &[a]), row("q^2 identity", m2, &[b])]
        }
    }
}
