//! Built-in invariant suite over the embedded fixtures, plus a table of
//! the published-result checks.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{AlgebraDocument, Element, GradedAlgebra};
use crate::arith::binom2_mod;
use crate::bounds::{cat_bounds, tc_lower, tc_upper, SearchOptions};
use crate::error::{Error, Result};
use crate::operations::{bockstein, bockstein_formula_np_positive, StableOperation};
use crate::report::{compute, Input, Options};
use crate::rings::{self, RingCase, RingTag};
use crate::seifert::{derive, DerivedParams, SeifertInvariants};
use crate::sweeps;
use crate::tensor::{TensorAlgebra, TensorElement, DEFAULT_BUDGET};

/// Maximum failures listed per check.
const SHOWN_FAILURES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: impl Into<String>, r: Result<()>) -> Self {
        let (passed, detail) = match r {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e.to_string()),
        };
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub invariants: Vec<Check>,
    pub criteria: Vec<Criterion>,
}

impl Outcome {
    /// Pass/fail of the invariant suite; the criteria table is informational.
    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "invariant suite");
        for c in &self.invariants {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "  {mark} {}", c.name);
            } else {
                let _ = writeln!(out, "  {mark} {}: {}", c.name, c.detail);
            }
        }
        let _ = writeln!(out, "published results");
        for c in &self.criteria {
            let mark = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {:>2} {mark} {} ({} cases, {} failing)",
                c.id,
                c.title,
                c.cases,
                c.failures.len()
            );
            for f in c.failures.iter().take(SHOWN_FAILURES) {
                let _ = writeln!(out, "       {f}");
            }
        }
        let _ = writeln!(out, "{}", if self.passed() { "selfcheck passed" } else { "selfcheck FAILED" });
        out
    }
}

/// A Seifert ring at p = 2 with its Bockstein, when one is defined.
pub struct SeifertSetup {
    pub params: DerivedParams,
    pub case: RingCase,
    pub ring: Arc<GradedAlgebra>,
    pub op: Option<StableOperation>,
}

pub fn seifert_setup(inv: &SeifertInvariants) -> Result<SeifertSetup> {
    let params = derive(inv, 2)?;
    let (case, ring) = rings::build(inv, &params)?;
    let op = match bockstein(&ring, Some(&params), case) {
        Ok(op) => Some(op),
        Err(Error::ProductStructureUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SeifertSetup { params, case, ring, op })
}

fn connected_sum_setup(k: u32) -> Result<(Arc<GradedAlgebra>, StableOperation)> {
    let ring = rings::build_connected_sum(k)?;
    let case = RingCase {
        tag: RingTag::ConnectedSumS2xS1,
        prime: 2,
    };
    let op = bockstein(&ring, None, case)?;
    Ok((ring, op))
}

/// Validates a ring given as a document: the ring axioms on all basis
/// triples and Poincaré duality.
pub fn check_document(label: &str, doc: &AlgebraDocument) -> Check {
    let r = doc.clone().into_algebra().and_then(|ring| ring.check_poincare_duality());
    Check::from_result(format!("{label}: ring axioms and Poincaré duality"), r)
}

fn squares_match_formula(ring: &Arc<GradedAlgebra>, params: &DerivedParams) -> Result<()> {
    let formula = bockstein_formula_np_positive(ring, params)?;
    for i in ring.basis_in_degree(1) {
        let x = Element::basis(ring, i);
        let sq = x.cup(&x)?;
        if sq != formula[&i] {
            return Err(Error::invariant(
                "Bockstein cross-check",
                format!("{}² = {sq}, formula gives {}", ring.name(i), formula[&i]),
            ));
        }
    }
    Ok(())
}

/// `ᾱᵢ·B̄(αᵢ)·B̄(α_k)` in `H*(M²)` against its four-term expansion
/// `α_k²⊗(c₁+cᵢ)γ + αᵢ²⊗c₁γ + c₁γ⊗αᵢ² + (c₁+cᵢ)γ⊗α_k²` with `c = C(a,2)`.
pub fn expansion_identity(setup: &SeifertSetup, i: usize, k: usize) -> Result<(TensorElement, TensorElement)> {
    let ring = &setup.ring;
    let op = setup
        .op
        .as_ref()
        .ok_or_else(|| Error::ProductStructureUnavailable("no Bockstein".into()))?;
    let t = TensorAlgebra::new(ring, 2, DEFAULT_BUDGET)?;
    let ai = Element::named(ring, &rings::alpha(i))?;
    let ak = Element::named(ring, &rings::alpha(k))?;
    let lhs = t.mul_many([
        &t.zero_divisor(&ai, 1, 2)?.element,
        &t.bockstein_zero_divisor(op, &ai, 1, 2)?.element,
        &t.bockstein_zero_divisor(op, &ak, 1, 2)?.element,
    ]);
    let c1 = binom2_mod(setup.params.a(0), 2) as i64;
    let ci = binom2_mod(setup.params.a(i - 1), 2) as i64;
    let gamma = Element::named(ring, rings::GAMMA)?;
    let (sq_i, sq_k) = (ai.cup(&ai)?, ak.cup(&ak)?);
    let terms = [
        [sq_k.clone(), gamma.scale(c1 + ci)],
        [sq_i.clone(), gamma.scale(c1)],
        [gamma.scale(c1), sq_i],
        [gamma.scale(c1 + ci), sq_k],
    ];
    let mut rhs = TensorElement::zero();
    for pair in &terms {
        rhs = rhs.add(&t.pure_tensor(pair)?);
    }
    Ok((lhs, rhs))
}

fn expansion_holds(setup: &SeifertSetup) -> Result<()> {
    let n = setup.params.n_p;
    for i in 2..=n {
        for k in 2..=n {
            if i == k {
                continue;
            }
            let (lhs, rhs) = expansion_identity(setup, i, k)?;
            if lhs != rhs {
                return Err(Error::invariant("expansion identity", format!("fails for i = {i}, k = {k}")));
            }
        }
    }
    Ok(())
}

fn document_round_trip(ring: &Arc<GradedAlgebra>) -> Result<()> {
    let back = ring.to_document().into_algebra()?;
    if back.to_document() != ring.to_document() {
        return Err(Error::invariant("document round-trip", "structure constants changed"));
    }
    Ok(())
}

fn seifert_invariants(text: &str) -> Vec<Check> {
    let label = text.to_string();
    let setup = match SeifertInvariants::parse(text).and_then(|inv| seifert_setup(&inv)) {
        Ok(s) => s,
        Err(e) => return vec![Check::from_result(format!("{label}: build"), Err(e))],
    };
    let ring = &setup.ring;
    let mut checks = vec![
        Check::from_result(format!("{label}: ring axioms"), ring.validate()),
        Check::from_result(format!("{label}: Poincaré duality"), ring.check_poincare_duality()),
        Check::from_result(format!("{label}: document round-trip"), document_round_trip(ring)),
    ];
    if matches!(setup.case.tag, RingTag::OoNpPositive | RingTag::OnNpPositive) {
        checks.push(Check::from_result(
            format!("{label}: triple products"),
            rings::check_triple_products(ring, &setup.params),
        ));
        checks.push(Check::from_result(
            format!("{label}: Bockstein cross-check"),
            squares_match_formula(ring, &setup.params),
        ));
        if setup.params.n_p >= 3 {
            checks.push(Check::from_result(format!("{label}: expansion identity"), expansion_holds(&setup)));
        }
    }
    checks
}

/// Runs the invariant suite on the embedded fixtures and on any extra ring
/// documents, then the published-result table.
pub fn run_with(extra: &[(String, AlgebraDocument)]) -> Outcome {
    let mut invariants = Vec::new();
    for text in sweeps::FIXTURES {
        invariants.extend(seifert_invariants(text));
    }
    for &k in sweeps::FIXTURE_CONNECTED_SUMS {
        let label = format!("#{k}(S²×S¹)");
        let r = connected_sum_setup(k).and_then(|(ring, _)| {
            ring.validate()?;
            ring.check_poincare_duality()?;
            document_round_trip(&ring)
        });
        invariants.push(Check::from_result(format!("{label}: ring axioms and Poincaré duality"), r));
    }
    for (label, doc) in extra {
        invariants.push(check_document(label, doc));
    }
    Outcome {
        invariants,
        criteria: criteria(),
    }
}

pub fn run() -> Outcome {
    run_with(&[])
}

fn record(failures: &mut Vec<String>, label: impl std::fmt::Display, r: Result<()>) {
    if let Err(e) = r {
        failures.push(format!("{label}: {e}"));
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn nonzero(t: &TensorAlgebra, classes: &[TensorElement]) -> bool {
    !t.mul_many(classes.iter()).is_zero()
}

fn cat_is_four(inv: &SeifertInvariants) -> Result<()> {
    let s = seifert_setup(inv)?;
    let rep = cat_bounds(&s.ring, s.case.tag)?;
    if rep.exact != Some(4) {
        return Err(fail(format!("cat in [{}, {}]", rep.lower, rep.upper)));
    }
    Ok(())
}

fn n2_zero_cat(inv: &SeifertInvariants) -> Result<()> {
    cat_is_four(inv)?;
    let s = seifert_setup(inv)?;
    let r = &s.ring;
    let prod = Element::cup_many(&[
        Element::named(r, &rings::theta(1))?,
        Element::named(r, rings::ALPHA)?,
        Element::named(r, &rings::theta_prime(1))?,
    ])?;
    if prod != Element::named(r, rings::GAMMA)? {
        return Err(fail(format!("θ1·α·θ'1 = {prod}")));
    }
    Ok(())
}

fn tc_interval(s: &SeifertSetup, n: usize, lower: u32, upper: u32) -> Result<()> {
    let op = s.op.as_ref().ok_or_else(|| fail("no Bockstein"))?;
    let cat = cat_bounds(&s.ring, s.case.tag)?;
    let (_, search) = tc_lower(&s.ring, op, n, SearchOptions::default())?;
    let (up, _) = tc_upper(cat.upper, n, s.ring.top_degree());
    if search.bound < lower || up != upper {
        return Err(fail(format!("TC_{n} certified in [{}, {up}]", search.bound)));
    }
    Ok(())
}

/// Some `ᾱᵢ·B̄(αᵢ)·B̄(α_k)`, `i ≠ k`, is nonzero.
fn tc_shape(s: &SeifertSetup) -> Result<()> {
    let op = s.op.as_ref().ok_or_else(|| fail("no Bockstein"))?;
    let t = TensorAlgebra::new(&s.ring, 2, DEFAULT_BUDGET)?;
    let n = s.params.n_p;
    for i in 2..=n {
        for k in 2..=n {
            if i == k {
                continue;
            }
            let ai = Element::named(&s.ring, &rings::alpha(i))?;
            let ak = Element::named(&s.ring, &rings::alpha(k))?;
            let (Ok(bi), Ok(bk)) = (t.bockstein_zero_divisor(op, &ai, 1, 2), t.bockstein_zero_divisor(op, &ak, 1, 2))
            else {
                continue;
            };
            if nonzero(&t, &[t.zero_divisor(&ai, 1, 2)?.element, bi.element, bk.element]) {
                return Ok(());
            }
        }
    }
    Err(fail("no nonzero ᾱᵢ·B̄(αᵢ)·B̄(α_k) with i ≠ k"))
}

fn tc_family_case(inv: &SeifertInvariants) -> Result<()> {
    let s = seifert_setup(inv)?;
    tc_interval(&s, 2, 6, 7)?;
    tc_shape(&s)
}

fn lambda_odd_case(inv: &SeifertInvariants) -> Result<()> {
    let s = seifert_setup(inv)?;
    tc_interval(&s, 2, 6, 7)?;
    let op = s.op.as_ref().ok_or_else(|| fail("no Bockstein"))?;
    let t = TensorAlgebra::new(&s.ring, 2, DEFAULT_BUDGET)?;
    let r = &s.ring;
    let alpha = Element::named(r, rings::ALPHA)?;
    let classes = [
        t.zero_divisor(&Element::named(r, &rings::theta(1))?, 1, 2)?.element,
        t.zero_divisor(&alpha, 1, 2)?.element,
        t.zero_divisor(&Element::named(r, &rings::theta_prime(1))?, 1, 2)?.element,
        t.bockstein_zero_divisor(op, &alpha, 1, 2)?.element,
    ];
    if !nonzero(&t, &classes) {
        return Err(fail("θ̄·ᾱ·θ̄'·B̄(α) vanishes"));
    }
    Ok(())
}

/// `B̄(x)_{1,2} · ∏ x̄_{1,i} · ∏ B̄(y)_{1,i}` with `x = α₂`, `y = α₃`.
pub fn higher_shape(ring: &Arc<GradedAlgebra>, op: &StableOperation, n: usize) -> Result<Vec<TensorElement>> {
    let t = TensorAlgebra::new(ring, n, DEFAULT_BUDGET)?;
    let x = Element::named(ring, &rings::alpha(2))?;
    let y = Element::named(ring, &rings::alpha(3))?;
    let mut classes = vec![t.bockstein_zero_divisor(op, &x, 1, 2)?.element];
    for i in 2..=n {
        classes.push(t.zero_divisor(&x, 1, i)?.element);
    }
    for i in 2..=n {
        classes.push(t.bockstein_zero_divisor(op, &y, 1, i)?.element);
    }
    Ok(classes)
}

fn higher_case(s: &SeifertSetup, n: usize) -> Result<()> {
    let n32 = n as u32;
    tc_interval(s, n, 3 * n32, 3 * n32 + 1)?;
    let op = s.op.as_ref().ok_or_else(|| fail("no Bockstein"))?;
    let t = TensorAlgebra::new(&s.ring, n, DEFAULT_BUDGET)?;
    if !nonzero(&t, &higher_shape(&s.ring, op, n)?) {
        return Err(fail("the weight 3n−1 witness shape vanishes"));
    }
    Ok(())
}

fn connected_sum_case(k: u32, n: usize) -> Result<()> {
    let opts = Options {
        orders: vec![n],
        ..Options::default()
    };
    let r = compute(&Input::ConnectedSum(k), &opts)?;
    let tc = r.tc_report(n).ok_or_else(|| fail("missing TC report"))?;
    let want = 2 * n as u32 + 1;
    if r.cat.exact != Some(3) || tc.exact != Some(want) {
        return Err(fail(format!(
            "cat in [{}, {}], TC_{n} in [{}, {}], expected exactly {want}",
            r.cat.lower, r.cat.upper, tc.lower, tc.upper
        )));
    }
    Ok(())
}

fn ring_validity(inv: &SeifertInvariants) -> Result<()> {
    let s = seifert_setup(inv)?;
    s.ring.validate()?;
    s.ring.check_poincare_duality()?;
    rings::check_triple_products(&s.ring, &s.params)?;
    squares_match_formula(&s.ring, &s.params)
}

/// Max weight by plain enumeration of nondecreasing candidate sequences,
/// skipping only subtrees under a zero product.
fn unpruned_weight(t: &TensorAlgebra, pool: &[crate::tensor::WeightedClass]) -> u32 {
    fn go(t: &TensorAlgebra, pool: &[crate::tensor::WeightedClass], start: usize, p: &TensorElement, w: u32, d: u32) -> u32 {
        let mut best = w;
        for k in start..pool.len() {
            let nd = d + pool[k].degree;
            if nd > t.top_degree() {
                continue;
            }
            let next = t.mul(p, &pool[k].element);
            if !next.is_zero() {
                best = best.max(go(t, pool, k, &next, w + pool[k].weight, nd));
            }
        }
        best
    }
    go(t, pool, 0, &t.unit(), 0, 0)
}

fn search_matches_enumeration(ring: &Arc<GradedAlgebra>, op: &StableOperation, n: usize) -> Result<()> {
    let t = TensorAlgebra::new(ring, n, DEFAULT_BUDGET)?;
    let pool = crate::bounds::candidate_pool(&t, op, false)?;
    let searched = crate::bounds::search_pool(&t, &pool)?.weight;
    let enumerated = unpruned_weight(&t, &pool);
    if searched != enumerated {
        return Err(fail(format!("search weight {searched}, enumeration {enumerated}")));
    }
    Ok(())
}

fn criterion(id: u8, title: &'static str, cases: Vec<(String, Result<()>)>) -> Criterion {
    let mut failures = Vec::new();
    let n = cases.len();
    for (label, r) in cases {
        record(&mut failures, label, r);
    }
    Criterion {
        id,
        title,
        cases: n,
        failures,
    }
}

fn over<T>(items: Vec<SeifertInvariants>, f: impl Fn(&SeifertInvariants) -> Result<T>) -> Vec<(String, Result<()>)> {
    items.into_iter().map(|inv| (inv.to_string(), f(&inv).map(|_| ()))).collect()
}

/// Every published-result check, computed with the library alone.
pub fn criteria() -> Vec<Criterion> {
    let fixture_inv = SeifertInvariants::parse(sweeps::FIXTURES[0]).expect("fixture parses");
    let fixture = seifert_setup(&fixture_inv);

    let mut validity = over(sweeps::cat_family(), ring_validity);
    validity.extend(over(sweeps::n2_zero_family(), |inv| {
        let s = seifert_setup(inv)?;
        s.ring.validate()?;
        s.ring.check_poincare_duality()
    }));

    let mut oracle_cases = Vec::new();
    for text in sweeps::FIXTURES {
        let setup = SeifertInvariants::parse(text).and_then(|inv| seifert_setup(&inv));
        for n in 2..=3 {
            let r = setup.as_ref().map_err(Clone::clone).and_then(|s| match &s.op {
                Some(op) => search_matches_enumeration(&s.ring, op, n),
                None => Ok(()),
            });
            oracle_cases.push((format!("{text} n={n}"), r));
        }
    }
    for &k in sweeps::FIXTURE_CONNECTED_SUMS {
        for n in 2..=3 {
            let r = connected_sum_setup(k).and_then(|(ring, op)| search_matches_enumeration(&ring, &op, n));
            oracle_cases.push((format!("#{k}(S²×S¹) n={n}"), r));
        }
    }

    let expansion = match &fixture {
        Ok(s) => expansion_holds(s),
        Err(e) => Err(e.clone()),
    };

    vec![
        criterion(1, "category theorem family: cat = 4", over(sweeps::cat_family(), cat_is_four)),
        criterion(2, "n₂ = 0 category: cat = 4 via θ₁·α·θ'₁", over(sweeps::n2_zero_family(), n2_zero_cat)),
        criterion(3, "TC family: 6 ≤ TC ≤ 7 with the ᾱᵢB̄(αᵢ)B̄(α_k) witness", over(sweeps::tc_family(), tc_family_case)),
        criterion(4, "n₂ = 0, λ odd: 6 ≤ TC ≤ 7", over(sweeps::lambda_odd_family(), lambda_odd_case)),
        criterion(
            5,
            "higher TC: 3n ≤ TCₙ ≤ 3n+1 for n = 2, 3, 4",
            (2..=4)
                .map(|n| {
                    let r = fixture.as_ref().map_err(Clone::clone).and_then(|s| higher_case(s, n));
                    (format!("{} n={n}", sweeps::FIXTURES[0]), r)
                })
                .collect(),
        ),
        criterion(
            6,
            "connected sums: cat = 3, TCₙ = 2n+1",
            (1..=3u32)
                .flat_map(|k| (2..=5).map(move |n| (format!("#{k}(S²×S¹) n={n}"), connected_sum_case(k, n))))
                .collect(),
        ),
        criterion(7, "ring validity and Bockstein agreement", validity),
        criterion(8, "pruned search equals enumeration", oracle_cases),
        criterion(9, "four-term expansion identity", vec![(sweeps::FIXTURES[0].to_string(), expansion)]),
    ]
}
