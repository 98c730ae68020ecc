//! Deterministic families of Seifert invariants used by the self-check
//! and the acceptance suite.

use crate::arith::gcd;
use crate::bounds::Target;
use crate::seifert::{derive, BaseClass, SeifertInvariants};
use crate::theorems::seifert_hypotheses;

/// Small invariants with embedded rings of dimension at most 12.
pub const FIXTURES: &[&str] = &[
    "(O,o;1|1:(2,1),(2,1),(6,1))",
    "(O,o;1|0:(2,1),(2,1))",
    "(O,o;0|0:(2,1),(2,1),(2,1),(2,1))",
    "(O,o;1|0:(2,1),(4,1),(6,1))",
    "(O,o;0|1:(2,1),(2,1),(2,1),(2,1),(2,1))",
    "(O,n;1|0:(4,1),(2,1),(2,1))",
    "(O,n;2|0:(2,1),(2,1))",
    "(O,o;1|0:(3,1),(5,1))",
    "(O,o;1|2:(3,2),(5,2))",
    "(O,o;2|0:(3,1),(5,1))",
];

/// Connected sums `#ₖ(S²×S¹)` among the fixtures.
pub const FIXTURE_CONNECTED_SUMS: &[u32] = &[1, 2, 3];

fn multisets(values: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    fn go(values: &[i64], start: usize, max_len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for k in start..values.len() {
            cur.push(values[k]);
            go(values, k, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(values, 0, max_len, &mut Vec::new(), &mut out);
    out
}

/// Largest `b ≤ 7` coprime to `a`, negated.
fn extreme_b(a: i64) -> i64 {
    -(1..=7).rev().find(|&b| gcd(a, b) == 1).expect("1 is coprime")
}

fn seifert(base: BaseClass, g: u32, e: i64, a: &[i64], b: &[i64]) -> SeifertInvariants {
    let fibers: Vec<(i64, i64)> = a.iter().copied().zip(b.iter().copied()).collect();
    SeifertInvariants::new(base, g, e, &fibers).expect("sweep invariants are valid")
}

/// Every sweep candidate with `aᵢ ≤ 8`, at most four fibers, `g ∈ {1,2}`,
/// `e ∈ {0,1}`, both bases, and `bᵢ` either all 1 or each the most negative
/// admissible value.
pub fn even_fiber_candidates(max_fibers: usize, genera: &[u32]) -> Vec<SeifertInvariants> {
    let mut out = Vec::new();
    for a in multisets(&[2, 3, 4, 5, 6, 7, 8], max_fibers) {
        if a.iter().all(|x| x % 2 == 1) {
            continue;
        }
        let ones = vec![1; a.len()];
        let extremes: Vec<i64> = a.iter().map(|&x| extreme_b(x)).collect();
        for base in [BaseClass::Orientable, BaseClass::Nonorientable] {
            for &g in genera {
                for e in [0, 1] {
                    for b in [&ones, &extremes] {
                        out.push(seifert(base, g, e, &a, b));
                    }
                }
            }
        }
    }
    out
}

fn predicts(inv: &SeifertInvariants, target: Target, orders: &[usize], hypothesis_prefix: &str) -> bool {
    let Ok(params) = derive(inv, 2) else { return false };
    seifert_hypotheses(inv, &params, orders)
        .predictions
        .iter()
        .any(|p| p.target == target && p.hypothesis.starts_with(hypothesis_prefix))
}

/// Invariants meeting either category hypothesis with `n₂ > 0`.
pub fn cat_family() -> Vec<SeifertInvariants> {
    even_fiber_candidates(4, &[1, 2])
        .into_iter()
        .filter(|inv| {
            predicts(inv, Target::Cat, &[], "n₂ ≥ 3") || predicts(inv, Target::Cat, &[], "C(a₁,2) even")
        })
        .collect()
}

/// Invariants meeting the TC hypotheses `g ≥ 1`, `n₂ > 1`, some `aᵢ ≡ 2 mod 4`.
pub fn tc_family() -> Vec<SeifertInvariants> {
    even_fiber_candidates(3, &[1])
        .into_iter()
        .filter(|inv| predicts(inv, Target::Tc(2), &[2], "g ≥ 1, n₂ > 1"))
        .collect()
}

/// Orientable base, all `aᵢ` odd, `Ae + C` even, `g ≥ 1`.
pub fn n2_zero_family() -> Vec<SeifertInvariants> {
    let mut out = Vec::new();
    for a in multisets(&[3, 5, 7], 3) {
        let m = a.len();
        for choice in 0..3usize.pow(m as u32) {
            let b: Vec<i64> = (0..m).map(|i| [1, 2, -2][(choice / 3usize.pow(i as u32)) % 3]).collect();
            for g in [1, 2] {
                for e in [0, 1, 2] {
                    let inv = seifert(BaseClass::Orientable, g, e, &a, &b);
                    if predicts(&inv, Target::Cat, &[], "n₂ = 0") {
                        out.push(inv);
                    }
                }
            }
        }
    }
    out
}

/// The `n₂ = 0` family restricted to `λ` odd and `g = 1`.
pub fn lambda_odd_family() -> Vec<SeifertInvariants> {
    n2_zero_family()
        .into_iter()
        .filter(|inv| inv.g == 1 && predicts(inv, Target::Tc(2), &[2], "n₂ = 0"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(&[1, 2, 3], 2).len(), 3 + 6);
        assert_eq!(extreme_b(2), -7);
        assert_eq!(extreme_b(7), -6);
    }

    #[test]
    fn families_are_nonempty_and_deterministic() {
        let cat = cat_family();
        assert!(cat.len() > 300, "{}", cat.len());
        assert_eq!(cat, cat_family());
        assert!(!tc_family().is_empty());
        assert!(!lambda_odd_family().is_empty());
        assert!(n2_zero_family().iter().all(|inv| inv.g >= 1));
    }
}
