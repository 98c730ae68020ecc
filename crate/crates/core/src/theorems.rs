//! Detection of the published hypotheses on Seifert invariants and
//! connected sums, and comparison of their predicted values with the
//! computed bounds.

use serde::{Deserialize, Serialize};

use crate::arith::binom2_mod;
use crate::bounds::{BoundReport, Target};
use crate::error::{Error, Result};
use crate::seifert::{BaseClass, DerivedParams, SeifertInvariants};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub target: Target,
    pub lower: u32,
    pub upper: u32,
    /// The hypotheses that triggered the prediction.
    pub hypothesis: String,
}

impl Prediction {
    pub fn claim(&self) -> String {
        if self.lower == self.upper {
            format!("{} = {}", self.target, self.lower)
        } else {
            format!("{} ≤ {} ≤ {}", self.lower, self.target, self.upper)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The computed interval lies inside the predicted one.
    Confirmed,
    /// The intervals overlap but the certificates do not reach the prediction.
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub claim: String,
    pub hypothesis: String,
    pub verdict: Verdict,
    pub computed: [u32; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub conditions: Vec<String>,
    pub predictions: Vec<Prediction>,
    /// Published bounds that are quoted but not computed.
    pub remarks: Vec<String>,
}

fn mod4_is_2(a: i64) -> bool {
    a.rem_euclid(4) == 2
}

/// Hypotheses and predictions for a Seifert manifold. `params2` must be the
/// mod-2 derived parameters, since every published hypothesis is a mod-2 or
/// mod-4 condition.
pub fn seifert_hypotheses(inv: &SeifertInvariants, params2: &DerivedParams, orders: &[usize]) -> Hypotheses {
    debug_assert_eq!(params2.prime, 2);
    let mut h = Hypotheses::default();
    let n2 = params2.n_p;
    let mut cond = |text: &str, holds: bool| {
        if holds {
            h.conditions.push(text.to_string());
        }
        holds
    };

    let g_pos = cond("g ≥ 1", inv.g >= 1);
    if n2 > 0 {
        let a1 = params2.a(0);
        let n2_ge_3 = cond("n₂ ≥ 3", n2 >= 3);
        let n2_gt_1 = cond("n₂ > 1", n2 > 1);
        let a1_2 = cond("a₁ ≡ 2 mod 4", mod4_is_2(a1));
        let binom_even = cond("C(a₁,2) even", binom2_mod(a1, 2) == 0);
        let later_2 = cond(
            "aᵢ ≡ 2 mod 4 for some 2 ≤ i ≤ n₂",
            (1..n2).any(|i| mod4_is_2(params2.a(i))),
        );

        if (n2_ge_3 && a1_2) || (binom_even && later_2) {
            let hypothesis = if n2_ge_3 && a1_2 {
                "n₂ ≥ 3 and a₁ ≡ 2 mod 4"
            } else {
                "C(a₁,2) even and aᵢ ≡ 2 mod 4 for some 2 ≤ i ≤ n₂"
            };
            h.predictions.push(Prediction {
                target: Target::Cat,
                lower: 4,
                upper: 4,
                hypothesis: hypothesis.into(),
            });
        }
        if g_pos && n2_gt_1 && (a1_2 || later_2) && orders.contains(&2) {
            h.predictions.push(Prediction {
                target: Target::Tc(2),
                lower: 6,
                upper: 7,
                hypothesis: "g ≥ 1, n₂ > 1 and aᵢ ≡ 2 mod 4 for some 1 ≤ i ≤ n₂".into(),
            });
        }
        if n2_gt_1 && (a1_2 || later_2) {
            for &n in orders {
                h.predictions.push(Prediction {
                    target: Target::Tc(n),
                    lower: 3 * n as u32,
                    upper: 3 * n as u32 + 1,
                    hypothesis: "n₂ > 1 and aᵢ ≡ 2 mod 4 for some 1 ≤ i ≤ n₂".into(),
                });
            }
        }
    } else if inv.base == BaseClass::Orientable {
        cond("n₂ = 0", true);
        let exact = cond("Ae+C ≡ 0 mod 2", params2.ae_plus_c_mod_p() == 0);
        let lambda_odd = cond("λ odd", params2.lambda == Some(1));
        if exact && g_pos {
            h.predictions.push(Prediction {
                target: Target::Cat,
                lower: 4,
                upper: 4,
                hypothesis: "n₂ = 0, Ae+C ≡ 0 mod 2 and g ≥ 1".into(),
            });
        }
        if exact && lambda_odd && g_pos && orders.contains(&2) {
            h.predictions.push(Prediction {
                target: Target::Tc(2),
                lower: 6,
                upper: 7,
                hypothesis: "n₂ = 0, Ae+C ≡ 0 mod 2, λ odd and g ≥ 1".into(),
            });
        }
    }
    if inv.base == BaseClass::Orientable && orders.contains(&2) {
        h.remarks
            .push("TC ≤ 6 when the circle action on an orientable-base Seifert manifold is free (not computed)".into());
    }
    h
}

pub fn connected_sum_hypotheses(k: u32, orders: &[usize]) -> Hypotheses {
    let mut h = Hypotheses {
        conditions: vec![format!("#{k}(S²×S¹)")],
        ..Default::default()
    };
    h.predictions.push(Prediction {
        target: Target::Cat,
        lower: 3,
        upper: 3,
        hypothesis: "connected sum of copies of S²×S¹".into(),
    });
    for &n in orders {
        let v = 2 * n as u32 + 1;
        h.predictions.push(Prediction {
            target: Target::Tc(n),
            lower: v,
            upper: v,
            hypothesis: "connected sum of copies of S²×S¹".into(),
        });
    }
    h
}

/// Compares a prediction with a computed report on the same target.
/// Disjoint intervals are a hard error; a weaker certificate is a
/// `NotCertified` verdict.
pub fn check(prediction: &Prediction, report: &BoundReport) -> Result<Annotation> {
    debug_assert_eq!(prediction.target, report.target);
    let computed = [report.lower, report.upper];
    if report.lower > prediction.upper || report.upper < prediction.lower {
        return Err(Error::TheoremDiscrepancy {
            theorem: format!("{} ⇒ {}", prediction.hypothesis, prediction.claim()),
            detail: format!("computed {} ≤ {} ≤ {}", report.lower, report.target, report.upper),
        });
    }
    let verdict = if report.lower >= prediction.lower && report.upper <= prediction.upper {
        Verdict::Confirmed
    } else {
        Verdict::NotCertified
    };
    Ok(Annotation {
        claim: prediction.claim(),
        hypothesis: prediction.hypothesis.clone(),
        verdict,
        computed,
    })
}
