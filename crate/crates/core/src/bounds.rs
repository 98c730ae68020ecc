//! Cup-length and weighted zero-divisor cup-length searches, and the
//! category / topological complexity bounds assembled from them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::operations::StableOperation;
use crate::rings::RingTag;
use crate::tensor::{TensorAlgebra, TensorElement, WeightedClass};

/// Terms shown when a witness product is rendered.
const DISPLAY_TERMS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Cat,
    Tc(usize),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Cat => f.write_str("cat"),
            Target::Tc(n) => write!(f, "TC_{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerSource {
    CupLength,
    WeightedZeroDivisors,
    CatPower,
    /// Only the additive structure is known: some positive-degree class exists.
    PositiveDegreeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperTag {
    /// `cat ≤ dim + 1` for closed manifolds.
    DimensionBound,
    /// Category of a connected sum of copies of S²×S¹.
    ConnectedSumCategory,
    /// `TCₙ(X) ≤ cat(Xⁿ) ≤ n(cat X − 1) + 1`.
    CatPowerBound,
    /// `TC(X) ≤ 2 cat(X) − 1`.
    FarberBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Certified,
    LowConfidence,
}

/// Classes whose product is nonzero, certifying a lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub classes: Vec<String>,
    pub weight: u32,
    pub product: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub target: Target,
    pub lower: u32,
    pub lower_source: LowerSource,
    pub witness: Option<Witness>,
    pub upper: u32,
    pub upper_tag: UpperTag,
    pub exact: Option<u32>,
    pub confidence: Confidence,
    pub detected_conditions: Vec<String>,
}

impl BoundReport {
    pub fn new(
        target: Target,
        (lower, lower_source, witness): (u32, LowerSource, Option<Witness>),
        (upper, upper_tag): (u32, UpperTag),
        confidence: Confidence,
    ) -> Result<Self> {
        if lower > upper {
            return Err(Error::invariant(
                "lower ≤ upper",
                format!("{target}: lower {lower} exceeds upper {upper}"),
            ));
        }
        Ok(Self {
            target,
            lower,
            lower_source,
            witness,
            upper,
            upper_tag,
            exact: (lower == upper).then_some(lower),
            confidence,
            detected_conditions: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupLength {
    pub length: u32,
    /// Basis indices of one maximizing monomial.
    pub witness: Vec<usize>,
}

/// Longest nonzero product of positive-degree basis elements. By
/// multilinearity this is the cup-length of the ring.
pub fn cup_length(ring: &Arc<GradedAlgebra>) -> Result<CupLength> {
    if !ring.has_products() {
        return Err(Error::ProductStructureUnavailable(
            ring.additive_reason().unwrap_or("additive structure only").to_string(),
        ));
    }
    let mut order: Vec<usize> = (0..ring.dim()).filter(|&i| ring.degree(i) > 0).collect();
    order.sort_by_key(|&i| (ring.degree(i), i));

    struct Search<'a> {
        ring: &'a Arc<GradedAlgebra>,
        order: Vec<usize>,
        stack: Vec<usize>,
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn dfs(&mut self, start: usize, product: &Element, degree: u32) -> Result<()> {
            for k in start..self.order.len() {
                let b = self.order[k];
                let d = degree + self.ring.degree(b);
                if d > self.ring.top_degree() {
                    break;
                }
                let next = product.cup(&Element::basis(self.ring, b))?;
                if next.is_zero() {
                    continue;
                }
                self.stack.push(b);
                if self.stack.len() > self.best.len() {
                    self.best = self.stack.clone();
                }
                self.dfs(k, &next, d)?;
                self.stack.pop();
            }
            Ok(())
        }
    }

    let mut search = Search {
        ring,
        order,
        stack: Vec::new(),
        best: Vec::new(),
    };
    search.dfs(0, &Element::unit(ring), 0)?;
    Ok(CupLength {
        length: search.best.len() as u32,
        witness: search.best,
    })
}

fn cat_upper(tag: RingTag, top_degree: u32) -> (u32, UpperTag) {
    match tag {
        RingTag::ConnectedSumS2xS1 => (3, UpperTag::ConnectedSumCategory),
        _ => (top_degree + 1, UpperTag::DimensionBound),
    }
}

/// `cat ≥ cup-length + 1`, against the dimension (or connected-sum) upper bound.
pub fn cat_bounds(ring: &Arc<GradedAlgebra>, tag: RingTag) -> Result<BoundReport> {
    let upper = cat_upper(tag, ring.top_degree());
    if !ring.has_products() {
        let lower = if ring.dim() > 1 { 2 } else { 1 };
        return BoundReport::new(
            Target::Cat,
            (lower, LowerSource::PositiveDegreeClass, None),
            upper,
            Confidence::LowConfidence,
        );
    }
    let cl = cup_length(ring)?;
    let factors: Vec<Element> = cl.witness.iter().map(|&b| Element::basis(ring, b)).collect();
    let witness = Witness {
        classes: cl.witness.iter().map(|&b| ring.name(b).to_string()).collect(),
        weight: cl.length,
        product: Element::cup_many(&factors)?.to_string(),
    };
    BoundReport::new(
        Target::Cat,
        (cl.length + 1, LowerSource::CupLength, Some(witness)),
        upper,
        Confidence::Certified,
    )
}

/// Upper bound for `TCₙ` from an upper bound on `cat` and the dimension.
pub fn tc_upper(cat_upper: u32, n: usize, dim: u32) -> (u32, UpperTag) {
    let n = n as u32;
    let mut options = Vec::new();
    if n == 2 {
        options.push((2 * cat_upper - 1, UpperTag::FarberBound));
    }
    options.push((n * (cat_upper - 1) + 1, UpperTag::CatPowerBound));
    options.push((n * dim + 1, UpperTag::DimensionBound));
    // min_by_key keeps the first of equal minima
    options.into_iter().min_by_key(|&(v, _)| v).expect("nonempty")
}

/// `TCₙ ≥ cat(Xⁿ⁻¹) ≥ cup-length(Xⁿ⁻¹) + 1 = (n − 1)·cup-length(X) + 1`.
pub fn tcn_lower_via_cat_power(cup_length: u32, n: usize) -> u32 {
    if n <= 1 {
        return 1;
    }
    cup_length * (n as u32 - 1) + 1
}

/// TC of a wedge of aspherical spaces given the parts and `cd` of the product group.
pub fn wedge_tc(tc_parts: &[u32], cd_product: u32) -> u32 {
    tc_parts.iter().copied().fold(cd_product + 1, u32::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// Include `pⱼ*(u) − pᵢ*(u)` for every pair `i < j`, not only `i = 1`.
    pub all_pairs: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: crate::tensor::DEFAULT_BUDGET,
            all_pairs: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TcSearch {
    /// `Σ weights + 1`.
    pub bound: u32,
    pub weight: u32,
    pub witness: Vec<WeightedClass>,
    pub product: TensorElement,
    /// Number of candidate products formed during the search.
    pub nodes: u64,
}

impl TcSearch {
    pub fn to_witness(&self, t: &TensorAlgebra) -> Witness {
        Witness {
            classes: self.witness.iter().map(|c| c.provenance.to_string()).collect(),
            weight: self.weight,
            product: display_truncated(t, &self.product),
        }
    }
}

fn display_truncated(t: &TensorAlgebra, e: &TensorElement) -> String {
    if e.len() <= DISPLAY_TERMS {
        return t.display(e);
    }
    let head = TensorElement::from_ids(e.ids()[..DISPLAY_TERMS].to_vec());
    format!("{} + … ({} terms)", t.display(&head), e.len())
}

/// Zero divisors `ū_{1,i}` for basis classes of degree 1 and 2 and their
/// Bockstein images for degree-1 classes, in search order.
pub fn candidate_pool(t: &TensorAlgebra, op: &StableOperation, all_pairs: bool) -> Result<Vec<WeightedClass>> {
    let ring = t.factor();
    let n = t.arity();
    let pairs: Vec<(usize, usize)> = if all_pairs {
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
    } else {
        (2..=n).map(|j| (1, j)).collect()
    };
    let mut pool = Vec::new();
    for b in 0..ring.dim() {
        let d = ring.degree(b);
        if d != 1 && d != 2 {
            continue;
        }
        let u = Element::basis(ring, b);
        for &(i, j) in &pairs {
            pool.push(t.zero_divisor(&u, i, j)?);
        }
        if d == op.domain_degree() && !op.apply(&u)?.is_zero() {
            for &(i, j) in &pairs {
                pool.push(t.bockstein_zero_divisor(op, &u, i, j)?);
            }
        }
    }
    pool.sort_by(search_order);
    Ok(pool)
}

/// Weight/degree ratio descending, then provenance.
fn search_order(a: &WeightedClass, b: &WeightedClass) -> Ordering {
    (b.weight * a.degree)
        .cmp(&(a.weight * b.degree))
        .then_with(|| a.provenance.to_string().cmp(&b.provenance.to_string()))
}

/// Known witness shapes, tried before the exhaustive search so that the
/// reported witness is the familiar one whenever it is optimal.
fn seed_witnesses(t: &TensorAlgebra, pool: &[WeightedClass]) -> Vec<Vec<usize>> {
    let ring = t.factor();
    let n = t.arity();
    let find = |class: &str, op: bool, i: usize, j: usize| {
        pool.iter().position(|c| {
            c.provenance.class == class && c.provenance.operation.is_some() == op && c.provenance.i == i && c.provenance.j == j
        })
    };
    let collect = |shape: &[(&str, bool, usize, usize)]| -> Option<Vec<usize>> {
        shape.iter().map(|&(c, op, i, j)| find(c, op, i, j)).collect()
    };
    let names = |deg: u32| -> Vec<&str> { ring.basis_in_degree(deg).into_iter().map(|b| ring.name(b)).collect() };
    let deg1 = names(1);
    let deg2 = names(2);
    let with_op: Vec<&str> = deg1.iter().copied().filter(|c| find(c, true, 1, 2).is_some()).collect();

    let mut seeds = Vec::new();
    // B̄(x)_{1,2} · ∏ x̄_{1,i} · ∏ B̄(y)_{1,i}
    for &x in &with_op {
        for &y in &with_op {
            if x == y {
                continue;
            }
            let mut shape = vec![(x, true, 1, 2)];
            shape.extend((2..=n).map(|i| (x, false, 1, i)));
            shape.extend((2..=n).map(|i| (y, true, 1, i)));
            seeds.extend(collect(&shape));
        }
    }
    // t̄ · x̄ · t̄′ · B̄(x)
    for &x in &with_op {
        for &a in &deg1 {
            for &b in &deg1 {
                if a < b && a != x && b != x {
                    seeds.extend(collect(&[(a, false, 1, 2), (x, false, 1, 2), (b, false, 1, 2), (x, true, 1, 2)]));
                }
            }
        }
    }
    // w̄₂ · z̄₂ · ∏ ū_i · ∏ v̄_i for pairs u·v ≠ 0 and w·z ≠ 0
    let dual: Vec<(&str, &str)> = deg1
        .iter()
        .flat_map(|&u| deg2.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| {
            let (Ok(u), Ok(v)) = (Element::named(ring, u), Element::named(ring, v)) else {
                return false;
            };
            u.cup(&v).map(|p| !p.is_zero()).unwrap_or(false)
        })
        .collect();
    for &(u, v) in &dual {
        for &(w, z) in &dual {
            if u == w || v == z {
                continue;
            }
            let mut shape = vec![(w, false, 1, 2), (z, false, 1, 2)];
            shape.extend((2..=n).map(|i| (u, false, 1, i)));
            shape.extend((2..=n).map(|i| (v, false, 1, i)));
            seeds.extend(collect(&shape));
        }
    }
    seeds
}

struct Dfs<'a> {
    t: &'a TensorAlgebra,
    pool: &'a [WeightedClass],
    top: u32,
    stack: Vec<usize>,
    best: Vec<usize>,
    best_weight: u32,
    nodes: u64,
}

impl Dfs<'_> {
    fn run(&mut self, start: usize, product: &TensorElement, weight: u32, degree: u32) {
        for k in start..self.pool.len() {
            let c = &self.pool[k];
            // remaining candidates have ratio at most this one's
            let reachable = weight + c.weight * (self.top - degree) / c.degree;
            if reachable <= self.best_weight {
                break;
            }
            let d = degree + c.degree;
            if d > self.top {
                continue;
            }
            self.nodes += 1;
            let next = self.t.mul(product, &c.element);
            if next.is_zero() {
                continue;
            }
            self.stack.push(k);
            let w = weight + c.weight;
            if w > self.best_weight {
                self.best_weight = w;
                self.best = self.stack.clone();
            }
            self.run(k, &next, w, d);
            self.stack.pop();
        }
    }
}

/// Weighted zero-divisor cup-length search in `H*(Mⁿ; F₂)`.
pub fn tc_lower(ring: &Arc<GradedAlgebra>, op: &StableOperation, n: usize, opts: SearchOptions) -> Result<(TensorAlgebra, TcSearch)> {
    if !ring.has_products() {
        return Err(Error::ProductStructureUnavailable(
            ring.additive_reason().unwrap_or("additive structure only").to_string(),
        ));
    }
    if !Arc::ptr_eq(op.algebra(), ring) {
        return Err(Error::MismatchedAlgebra);
    }
    let t = TensorAlgebra::new(ring, n, opts.budget)?;
    let pool = candidate_pool(&t, op, opts.all_pairs)?;
    let search = search_pool(&t, &pool)?;
    Ok((t, search))
}

/// Runs the seeded, pruned search over a prepared pool.
pub fn search_pool(t: &TensorAlgebra, pool: &[WeightedClass]) -> Result<TcSearch> {
    let mut dfs = Dfs {
        t,
        pool,
        top: t.top_degree(),
        stack: Vec::new(),
        best: Vec::new(),
        best_weight: 0,
        nodes: 0,
    };
    for seed in seed_witnesses(t, pool) {
        let weight: u32 = seed.iter().map(|&k| pool[k].weight).sum();
        let degree: u32 = seed.iter().map(|&k| pool[k].degree).sum();
        if weight <= dfs.best_weight || degree > dfs.top {
            continue;
        }
        dfs.nodes += 1;
        if !t.mul_many(seed.iter().map(|&k| &pool[k].element)).is_zero() {
            dfs.best_weight = weight;
            dfs.best = seed;
        }
    }
    dfs.run(0, &t.unit(), 0, 0);

    let witness: Vec<WeightedClass> = dfs.best.iter().map(|&k| pool[k].clone()).collect();
    // recompute in reverse order, independent of the search's partial products
    let product = t.mul_many(witness.iter().rev().map(|c| &c.element));
    if !witness.is_empty() && product.is_zero() {
        return Err(Error::invariant("witness re-verification", "witness product vanished on recomputation"));
    }
    Ok(TcSearch {
        bound: dfs.best_weight + 1,
        weight: dfs.best_weight,
        witness,
        product,
        nodes: dfs.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operations::bockstein;
    use crate::rings;
    use crate::seifert::{derive, SeifertInvariants};

    fn setup(text: &str) -> (Arc<GradedAlgebra>, StableOperation, RingTag) {
        let inv = SeifertInvariants::parse(text).unwrap();
        let params = derive(&inv, 2).unwrap();
        let (case, ring) = rings::build(&inv, &params).unwrap();
        let b = bockstein(&ring, Some(&params), case).unwrap();
        (ring, b, case.tag)
    }

    fn connected_sum(k: u32) -> (Arc<GradedAlgebra>, StableOperation) {
        let ring = rings::build_connected_sum(k).unwrap();
        let case = rings::RingCase {
            tag: RingTag::ConnectedSumS2xS1,
            prime: 2,
        };
        let b = bockstein(&ring, None, case).unwrap();
        (ring, b)
    }

    #[test]
    fn cup_length_of_seifert_ring() {
        let (ring, _, tag) = setup("(O,o;1|1:(2,1),(2,1),(6,1))");
        let cl = cup_length(&ring).unwrap();
        assert_eq!(cl.length, 3);
        let rep = cat_bounds(&ring, tag).unwrap();
        assert_eq!(rep.exact, Some(4));
        assert_eq!(rep.upper_tag, UpperTag::DimensionBound);
    }

    #[test]
    fn cup_length_of_connected_sum() {
        let (ring, _) = connected_sum(2);
        let cl = cup_length(&ring).unwrap();
        assert_eq!(cl.length, 2);
        let names: Vec<&str> = cl.witness.iter().map(|&b| ring.name(b)).collect();
        assert_eq!(names, ["x1^1", "x1^2"]);
        assert_eq!(cat_bounds(&ring, RingTag::ConnectedSumS2xS1).unwrap().exact, Some(3));
    }

    #[test]
    fn additive_ring_has_low_confidence_cat() {
        let inv = SeifertInvariants::parse("(O,o;1|0:(3,1))").unwrap();
        let (case, ring) = rings::build(&inv, &derive(&inv, 2).unwrap()).unwrap();
        let tag = case.tag;
        assert_eq!(tag, RingTag::OoNpZeroInexact);
        assert!(matches!(cup_length(&ring), Err(Error::ProductStructureUnavailable(_))));
        let rep = cat_bounds(&ring, tag).unwrap();
        assert_eq!((rep.lower, rep.upper), (2, 4));
        assert_eq!(rep.confidence, Confidence::LowConfidence);
    }

    #[test]
    fn upper_bound_formulas() {
        assert_eq!(tc_upper(4, 2, 3), (7, UpperTag::FarberBound));
        assert_eq!(tc_upper(4, 3, 3), (10, UpperTag::CatPowerBound));
        for n in 2..6 {
            assert_eq!(tc_upper(3, n, 3).0, 2 * n as u32 + 1);
        }
    }

    #[test]
    fn cat_power_and_wedge() {
        assert_eq!(tcn_lower_via_cat_power(3, 2), 4);
        assert_eq!(tcn_lower_via_cat_power(2, 2), 3);
        assert_eq!(tcn_lower_via_cat_power(3, 1), 1);
        assert_eq!(wedge_tc(&[7, 7], 6), 7);
        assert_eq!(wedge_tc(&[4], 2), 4);
        assert_eq!(wedge_tc(&[], 6), 7);
    }

    #[test]
    fn bound_report_rejects_inverted_interval() {
        let r = BoundReport::new(
            Target::Cat,
            (5, LowerSource::CupLength, None),
            (4, UpperTag::DimensionBound),
            Confidence::Certified,
        );
        assert!(matches!(r, Err(Error::InvariantViolated { .. })));
    }

    #[test]
    fn tc_of_seifert_ring() {
        let (ring, b, _) = setup("(O,o;1|1:(2,1),(2,1),(6,1))");
        let (t, s) = tc_lower(&ring, &b, 2, SearchOptions::default()).unwrap();
        assert_eq!(s.bound, 6);
        assert_eq!(s.weight, 5);
        let w = s.to_witness(&t);
        assert_eq!(w.classes.len(), 3);
        assert!(w.classes.iter().filter(|c| c.starts_with("zd(B2(")).count() == 2);
    }

    #[test]
    fn tc_of_connected_sum() {
        let (ring, b) = connected_sum(2);
        // at n = 2 every weight-4 product cancels mod 2
        let (_, s) = tc_lower(&ring, &b, 2, SearchOptions::default()).unwrap();
        assert_eq!(s.bound, 4);
        let (_, s) = tc_lower(&ring, &b, 3, SearchOptions::default()).unwrap();
        assert_eq!(s.bound, 7);
    }

    #[test]
    fn tensor_cup_length_is_additive() {
        // cup-length of X ⊗ X over the pulled-back basis equals 2·cl(X)
        let (ring, _, _) = setup("(O,o;1|0:(2,1),(2,1))");
        let cl = cup_length(&ring).unwrap().length;
        let t = TensorAlgebra::new(&ring, 2, 1_000).unwrap();
        let gens: Vec<TensorElement> = (1..ring.dim())
            .flat_map(|b| (1..=2).map(move |i| (b, i)))
            .map(|(b, i)| t.pullback(&Element::basis(&ring, b), i).unwrap())
            .collect();
        fn longest(t: &TensorAlgebra, gens: &[TensorElement], start: usize, p: &TensorElement) -> u32 {
            (start..gens.len())
                .filter_map(|k| {
                    let q = t.mul(p, &gens[k]);
                    (!q.is_zero()).then(|| 1 + longest(t, gens, k, &q))
                })
                .max()
                .unwrap_or(0)
        }
        let tensor_cl = longest(&t, &gens, 0, &t.unit());
        assert_eq!(tensor_cl, 2 * cl);
        assert_eq!(tcn_lower_via_cat_power(cl, 3), tensor_cl + 1);
    }

    #[test]
    fn budget_is_enforced() {
        let (ring, b, _) = setup("(O,o;1|1:(2,1),(2,1),(6,1))");
        let opts = SearchOptions {
            budget: 50,
            all_pairs: false,
        };
        assert!(matches!(tc_lower(&ring, &b, 2, opts), Err(Error::BudgetExceeded { needed: 100, budget: 50 })));
    }
}
