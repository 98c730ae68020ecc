//! The full pipeline from invariants to a serializable report.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::arith::check_prime;
use crate::bounds::{
    cat_bounds, cup_length, tc_lower, tc_upper, tcn_lower_via_cat_power, wedge_tc, BoundReport, Confidence,
    LowerSource, SearchOptions, Target,
};
use crate::error::{Error, Result};
use crate::operations::{bockstein, StableOperation};
use crate::rings::{self, RingCase, RingTag};
use crate::seifert::{derive, DerivedParams, SeifertInvariants, RESIDUE_CONDITION_NOTE};
use crate::theorems::{self, Annotation, Hypotheses, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Seifert(SeifertInvariants),
    /// `#ₖ(S²×S¹)`.
    ConnectedSum(u32),
}

impl Input {
    pub fn echo(&self) -> String {
        match self {
            Input::Seifert(inv) => inv.to_string(),
            Input::ConnectedSum(k) => format!("#{k}(S²×S¹)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub prime: u32,
    /// Requested TCₙ orders.
    pub orders: Vec<usize>,
    pub search: SearchOptions,
    /// Cohomological dimension of the product group for the wedge formula.
    pub wedge_cd: Option<u32>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            prime: 2,
            orders: vec![2],
            search: SearchOptions::default(),
            wedge_cd: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSummary {
    pub case: RingTag,
    pub dim: usize,
    pub betti: Vec<usize>,
    pub additive_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeReport {
    pub cd_product: u32,
    pub lower: u32,
    pub upper: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub input: String,
    pub prime: u32,
    pub derived: Option<DerivedParams>,
    pub ring: RingSummary,
    pub cat: BoundReport,
    pub tc: Vec<BoundReport>,
    pub wedge: Option<WedgeReport>,
    pub conditions: Vec<String>,
    pub annotations: Vec<Annotation>,
    pub remarks: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("report JSON: {e}")))
    }

    pub fn tc_report(&self, n: usize) -> Option<&BoundReport> {
        self.tc.iter().find(|r| r.target == Target::Tc(n))
    }

    /// Plain-text rendering with witness products in ⊗ notation.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input    {}", self.input);
        let _ = writeln!(out, "prime    {}", self.prime);
        let _ = writeln!(
            out,
            "ring     {} (dim {}, Betti {:?}{})",
            self.ring.case,
            self.ring.dim,
            self.ring.betti,
            if self.ring.additive_only { ", additive only" } else { "" }
        );
        for r in std::iter::once(&self.cat).chain(&self.tc) {
            render_bound(&mut out, r);
        }
        if let Some(w) = &self.wedge {
            let _ = writeln!(out, "wedge    {} ≤ TC ≤ {} (cd of product group {})", w.lower, w.upper, w.cd_product);
        }
        if !self.conditions.is_empty() {
            let _ = writeln!(out, "conditions: {}", self.conditions.join("; "));
        }
        for a in &self.annotations {
            let verdict = match a.verdict {
                Verdict::Confirmed => "confirmed",
                Verdict::NotCertified => "not certified",
            };
            let _ = writeln!(
                out,
                "predicted {} [{}] ({}); computed [{}, {}]",
                a.claim, verdict, a.hypothesis, a.computed[0], a.computed[1]
            );
        }
        for r in &self.remarks {
            let _ = writeln!(out, "remark: {r}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn render_bound(out: &mut String, r: &BoundReport) {
    let label = r.target.to_string();
    match r.exact {
        Some(v) => {
            let _ = writeln!(out, "{label:<8} = {v}");
        }
        None => {
            let _ = writeln!(out, "{label:<8} {} ≤ {label} ≤ {}", r.lower, r.upper);
        }
    }
    let _ = writeln!(
        out,
        "         lower via {:?}, upper via {:?}{}",
        r.lower_source,
        r.upper_tag,
        if r.confidence == Confidence::LowConfidence { " (low confidence)" } else { "" }
    );
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "         witness {} (weight ≥ {})", w.classes.join(" · "), w.weight);
        let _ = writeln!(out, "         product {}", w.product);
    }
}

struct Built {
    case: RingCase,
    ring: Arc<GradedAlgebra>,
    op: Option<StableOperation>,
    derived: Option<DerivedParams>,
    hypotheses: Hypotheses,
    warnings: Vec<String>,
}

fn build_seifert(inv: &SeifertInvariants, opts: &Options) -> Result<Built> {
    let mut warnings = Vec::new();
    let params = derive(inv, opts.prime)?;
    if params.check_residue_conditions().is_err() {
        warnings.push(format!("fiber residue conditions fail; {RESIDUE_CONDITION_NOTE}"));
    }
    let (case, ring) = rings::build(inv, &params)?;
    if let Some(reason) = ring.additive_reason() {
        warnings.push(format!("additive structure only: {reason}"));
    }
    let op = match bockstein(&ring, Some(&params), case) {
        Ok(op) => Some(op),
        Err(e @ (Error::UnsupportedCase(_) | Error::ProductStructureUnavailable(_))) => {
            warnings.push(format!("Bockstein unavailable: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let params2 = if opts.prime == 2 { params.clone() } else { derive(inv, 2)? };
    let hypotheses = theorems::seifert_hypotheses(inv, &params2, &opts.orders);
    Ok(Built {
        case,
        ring,
        op,
        derived: Some(params),
        hypotheses,
        warnings,
    })
}

fn build_connected_sum(k: u32, opts: &Options) -> Result<Built> {
    if opts.prime != 2 {
        return Err(Error::UnsupportedCase(format!(
            "connected sums are built mod 2 only (requested p = {})",
            opts.prime
        )));
    }
    let ring = rings::build_connected_sum(k)?;
    let case = RingCase {
        tag: RingTag::ConnectedSumS2xS1,
        prime: 2,
    };
    let op = bockstein(&ring, None, case)?;
    Ok(Built {
        case,
        ring,
        op: Some(op),
        derived: None,
        hypotheses: theorems::connected_sum_hypotheses(k, &opts.orders),
        warnings: Vec::new(),
    })
}

fn tc_report(built: &Built, cat: &BoundReport, n: usize, opts: &Options, warnings: &mut Vec<String>) -> Result<BoundReport> {
    let ring = &built.ring;
    let upper = tc_upper(cat.upper, n, ring.top_degree());
    let cl = match cup_length(ring) {
        Ok(c) => c.length,
        Err(Error::ProductStructureUnavailable(_)) => cat.lower - 1,
        Err(e) => return Err(e),
    };
    let mut lower = (tcn_lower_via_cat_power(cl, n), LowerSource::CatPower, None);

    let weighted = match (&built.op, built.case.prime) {
        (Some(op), 2) => match tc_lower(ring, op, n, opts.search) {
            Ok((t, s)) => Some((s.bound, s.to_witness(&t))),
            Err(e @ Error::BudgetExceeded { .. }) => {
                warnings.push(format!("TC_{n}: weighted search skipped, {e}"));
                None
            }
            Err(Error::ProductStructureUnavailable(_)) => None,
            Err(e) => return Err(e),
        },
        (Some(_), p) => {
            warnings.push(format!(
                "TC_{n}: weighted search skipped, {}",
                Error::OddCharacteristicUnsupported(p)
            ));
            None
        }
        (None, _) => None,
    };
    if let Some((bound, witness)) = weighted {
        if bound >= lower.0 {
            lower = (bound, LowerSource::WeightedZeroDivisors, Some(witness));
        }
    }
    BoundReport::new(Target::Tc(n), lower, upper, cat.confidence)
}

/// Runs parse-free pipeline stages: derive, classify, build, Bockstein, bounds.
pub fn compute(input: &Input, opts: &Options) -> Result<Report> {
    check_prime(opts.prime)?;
    if let Some(&n) = opts.orders.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("TC order {n} is below 2")));
    }
    let built = match input {
        Input::Seifert(inv) => build_seifert(inv, opts)?,
        Input::ConnectedSum(k) => build_connected_sum(*k, opts)?,
    };
    let mut warnings = built.warnings.clone();
    let mut cat = cat_bounds(&built.ring, built.case.tag)?;
    let mut tc = Vec::with_capacity(opts.orders.len());
    for &n in &opts.orders {
        tc.push(tc_report(&built, &cat, n, opts, &mut warnings)?);
    }

    let conditions = built.hypotheses.conditions.clone();
    cat.detected_conditions = conditions.clone();
    for r in &mut tc {
        r.detected_conditions = conditions.clone();
    }

    let mut annotations = Vec::new();
    for p in &built.hypotheses.predictions {
        let report = std::iter::once(&cat).chain(&tc).find(|r| r.target == p.target);
        let Some(report) = report else { continue };
        let a = theorems::check(p, report)?;
        if a.verdict == Verdict::NotCertified {
            warnings.push(format!(
                "not certified: {} ({}); computed [{}, {}]",
                a.claim, a.hypothesis, a.computed[0], a.computed[1]
            ));
        }
        annotations.push(a);
    }

    let wedge = match opts.wedge_cd {
        None => None,
        Some(cd) => match tc.iter().find(|r| r.target == Target::Tc(2)) {
            Some(r) => Some(WedgeReport {
                cd_product: cd,
                lower: wedge_tc(&[r.lower], cd),
                upper: wedge_tc(&[r.upper], cd),
            }),
            None => {
                warnings.push("wedge formula needs TC_2 among the requested orders".into());
                None
            }
        },
    };

    Ok(Report {
        schema: SCHEMA_VERSION,
        input: input.echo(),
        prime: opts.prime,
        derived: built.derived,
        ring: RingSummary {
            case: built.case.tag,
            dim: built.ring.dim(),
            betti: built.ring.betti_numbers(),
            additive_only: !built.ring.has_products(),
        },
        cat,
        tc,
        wedge,
        conditions,
        annotations,
        remarks: built.hypotheses.remarks.clone(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seifert(text: &str) -> Input {
        Input::Seifert(SeifertInvariants::parse(text).unwrap())
    }

    #[test]
    fn fixture_report() {
        let r = compute(&seifert("(O,o;1|1:(2,1),(2,1),(6,1))"), &Options::default()).unwrap();
        assert_eq!(r.cat.exact, Some(4));
        let tc2 = r.tc_report(2).unwrap();
        assert_eq!((tc2.lower, tc2.upper), (6, 7));
        assert!(r.annotations.iter().all(|a| a.verdict == Verdict::Confirmed));
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert!(r.render_text().contains("witness"));
    }

    #[test]
    fn connected_sum_report() {
        let opts = Options {
            orders: vec![2, 3],
            ..Options::default()
        };
        let r = compute(&Input::ConnectedSum(2), &opts).unwrap();
        assert_eq!(r.cat.exact, Some(3));
        assert_eq!(r.tc_report(3).unwrap().exact, Some(7));
        assert_eq!(r.input, "#2(S²×S¹)");
    }

    #[test]
    fn additive_ring_report() {
        let r = compute(&seifert("(O,o;1|0:(3,1))"), &Options::default()).unwrap();
        assert!(r.ring.additive_only);
        assert_eq!(r.cat.confidence, Confidence::LowConfidence);
        let tc2 = r.tc_report(2).unwrap();
        assert_eq!(tc2.lower_source, LowerSource::CatPower);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn unsupported_case_surfaces() {
        let err = compute(&seifert("(O,n;1|0:(3,1))"), &Options::default()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedCase(_)));
    }

    #[test]
    fn odd_prime_skips_tensor_search() {
        let opts = Options {
            prime: 3,
            ..Options::default()
        };
        let r = compute(&seifert("(O,o;1|0:(3,1),(3,1))"), &opts).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("characteristic 2")));
        assert_eq!(r.tc_report(2).unwrap().lower_source, LowerSource::CatPower);
    }

    #[test]
    fn budget_truncation_is_a_warning() {
        let opts = Options {
            orders: vec![4],
            search: SearchOptions {
                budget: 100,
                all_pairs: false,
            },
            ..Options::default()
        };
        let r = compute(&seifert("(O,o;1|1:(2,1),(2,1),(6,1))"), &opts).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("budget")));
        assert_eq!(r.tc_report(4).unwrap().lower, 10);
    }

    #[test]
    fn wedge_formula() {
        let opts = Options {
            wedge_cd: Some(6),
            ..Options::default()
        };
        let r = compute(&seifert("(O,o;1|1:(2,1),(2,1),(6,1))"), &opts).unwrap();
        let w = r.wedge.unwrap();
        assert_eq!((w.lower, w.upper), (7, 7));
    }
}
