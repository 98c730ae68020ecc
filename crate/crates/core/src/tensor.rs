//! `H*(Mⁿ; F₂)` as the n-fold tensor power of a factor ring, with
//! projections, the diagonal, and zero-divisor classes.
//!
//! Basis tuples are encoded as mixed-radix integers (slot 0 is the least
//! significant digit) and elements are sorted lists of tuple ids; every
//! coefficient is 1 since only characteristic 2 is supported.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::operations::{weight_of, ClassKind, StableOperation};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElement {
    terms: Vec<u64>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds an element from tuple ids, cancelling repeated ids in pairs.
    pub fn from_ids(mut ids: Vec<u64>) -> Self {
        ids.sort_unstable();
        let mut terms = Vec::with_capacity(ids.len());
        let mut k = 0;
        while k < ids.len() {
            let mut run = 1;
            while k + run < ids.len() && ids[k + run] == ids[k] {
                run += 1;
            }
            if run % 2 == 1 {
                terms.push(ids[k]);
            }
            k += run;
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut ids = self.terms.clone();
        ids.extend_from_slice(&other.terms);
        Self::from_ids(ids)
    }

    pub fn contains(&self, id: u64) -> bool {
        self.terms.binary_search(&id).is_ok()
    }
}

#[derive(Debug)]
pub struct TensorAlgebra {
    factor: Arc<GradedAlgebra>,
    n: usize,
    dim: usize,
    /// Factor products as index lists (coefficients are all 1 mod 2).
    mult: Vec<Vec<u32>>,
    powers: Vec<u64>,
}

impl TensorAlgebra {
    pub fn new(factor: &Arc<GradedAlgebra>, n: usize, budget: u64) -> Result<Self> {
        if factor.prime() != 2 {
            return Err(Error::OddCharacteristicUnsupported(factor.prime()));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!("tensor power needs n ≥ 2, got {n}")));
        }
        let dim = factor.dim();
        let needed = (dim as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut mult = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                mult.push(factor.product(i, j)?.iter().map(|&(k, _)| k as u32).collect());
            }
        }
        let powers = (0..=n).map(|s| (dim as u64).pow(s as u32)).collect();
        Ok(Self {
            factor: Arc::clone(factor),
            n,
            dim,
            mult,
            powers,
        })
    }

    pub fn factor(&self) -> &Arc<GradedAlgebra> {
        &self.factor
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> u64 {
        self.powers[self.n]
    }

    pub fn top_degree(&self) -> u32 {
        self.n as u32 * self.factor.top_degree()
    }

    pub fn slot(&self, id: u64, s: usize) -> usize {
        ((id / self.powers[s]) % self.dim as u64) as usize
    }

    pub fn tuple(&self, id: u64) -> Vec<usize> {
        (0..self.n).map(|s| self.slot(id, s)).collect()
    }

    pub fn id_of(&self, tuple: &[usize]) -> u64 {
        tuple.iter().enumerate().map(|(s, &b)| b as u64 * self.powers[s]).sum()
    }

    pub fn tuple_degree(&self, id: u64) -> u32 {
        (0..self.n).map(|s| self.factor.degree(self.slot(id, s))).sum()
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self, t: &TensorElement) -> Option<u32> {
        let mut degs = t.terms.iter().map(|&id| self.tuple_degree(id));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Pushes the ids of the product of two basis tuples onto `out`.
    fn tuple_product(&self, a: u64, b: u64, out: &mut Vec<u64>) {
        let mut partial: Vec<u64> = vec![0];
        for s in 0..self.n {
            let x = self.slot(a, s);
            let y = self.slot(b, s);
            let w = self.powers[s];
            if y == 0 {
                partial.iter_mut().for_each(|p| *p += x as u64 * w);
            } else if x == 0 {
                partial.iter_mut().for_each(|p| *p += y as u64 * w);
            } else {
                let prod = &self.mult[x * self.dim + y];
                match prod.len() {
                    0 => return,
                    1 => partial.iter_mut().for_each(|p| *p += prod[0] as u64 * w),
                    _ => {
                        partial = partial
                            .iter()
                            .flat_map(|&p| prod.iter().map(move |&k| p + k as u64 * w))
                            .collect();
                    }
                }
            }
        }
        out.extend(partial);
    }

    pub fn mul(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let mut ids = Vec::with_capacity(a.len() * b.len());
        for &x in &a.terms {
            for &y in &b.terms {
                self.tuple_product(x, y, &mut ids);
            }
        }
        TensorElement::from_ids(ids)
    }

    pub fn mul_many<'a>(&self, factors: impl IntoIterator<Item = &'a TensorElement>) -> TensorElement {
        let mut acc = self.unit();
        for f in factors {
            acc = self.mul(&acc, f);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn unit(&self) -> TensorElement {
        TensorElement { terms: vec![0] }
    }

    fn check_factor(&self, u: &Element) -> Result<()> {
        if Arc::ptr_eq(u.algebra(), &self.factor) {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebra)
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    /// `u₁ ⊗ u₂ ⊗ … ⊗ uₙ`, expanded over the basis.
    pub fn pure_tensor(&self, factors: &[Element]) -> Result<TensorElement> {
        if factors.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} tensor factors, got {}",
                self.n,
                factors.len()
            )));
        }
        let mut ids: Vec<u64> = vec![0];
        for (s, u) in factors.iter().enumerate() {
            self.check_factor(u)?;
            let w = self.powers[s];
            let support: Vec<usize> = u.terms().map(|(k, _)| k).collect();
            ids = ids
                .iter()
                .flat_map(|&p| support.iter().map(move |&k| p + k as u64 * w))
                .collect();
        }
        Ok(TensorElement::from_ids(ids))
    }

    /// `pᵢ*(u)`: `u` in slot `i` (1-based), units elsewhere.
    pub fn pullback(&self, u: &Element, i: usize) -> Result<TensorElement> {
        self.check_factor(u)?;
        self.check_index(i)?;
        let w = self.powers[i - 1];
        Ok(TensorElement::from_ids(u.terms().map(|(k, _)| k as u64 * w).collect()))
    }

    /// `dₙ*(t)`: every tuple maps to the product of its components.
    pub fn diagonal_pullback(&self, t: &TensorElement) -> Result<Element> {
        let mut out = Element::zero(&self.factor);
        for &id in &t.terms {
            let parts: Vec<Element> = self
                .tuple(id)
                .into_iter()
                .map(|k| Element::basis(&self.factor, k))
                .collect();
            out = out.add(&Element::cup_many(&parts)?)?;
        }
        Ok(out)
    }

    fn difference(&self, u: &Element, i: usize, j: usize) -> Result<TensorElement> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidArgument("zero divisor needs i ≠ j".into()));
        }
        if !u.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.pullback(u, j)?.add(&self.pullback(u, i)?))
    }

    fn certified(&self, element: TensorElement, kind: ClassKind, provenance: Provenance) -> Result<WeightedClass> {
        if element.is_zero() {
            return Err(Error::ZeroClass(provenance.to_string()));
        }
        if !self.diagonal_pullback(&element)?.is_zero() {
            return Err(Error::invariant("zero divisor", format!("{provenance} is not in ker dₙ*")));
        }
        let degree = self.degree(&element).ok_or(Error::NotHomogeneous)?;
        Ok(WeightedClass {
            element,
            weight: weight_of(kind)?,
            degree,
            kind,
            provenance,
        })
    }

    /// `pⱼ*(u) + pᵢ*(u)` with weight 1.
    pub fn zero_divisor(&self, u: &Element, i: usize, j: usize) -> Result<WeightedClass> {
        let element = self.difference(u, i, j)?;
        let provenance = Provenance {
            class: u.to_string(),
            operation: None,
            i,
            j,
        };
        self.certified(element, ClassKind::PlainZeroDivisor, provenance)
    }

    /// `pⱼ*(Bu) + pᵢ*(Bu)` for a degree-1 class `u`, with weight 2.
    pub fn bockstein_zero_divisor(&self, op: &StableOperation, u: &Element, i: usize, j: usize) -> Result<WeightedClass> {
        self.check_factor(u)?;
        let kind = ClassKind::StableOpImage {
            excess: op.excess(),
            source_degree: u.degree().unwrap_or(op.domain_degree()),
        };
        weight_of(kind)?;
        let image = op.apply(u)?;
        let element = self.difference(&image, i, j)?;
        let provenance = Provenance {
            class: u.to_string(),
            operation: Some(op.name().to_string()),
            i,
            j,
        };
        self.certified(element, kind, provenance)
    }

    /// Human-readable expansion, e.g. `α2⊗1 + 1⊗α2`.
    pub fn display(&self, t: &TensorElement) -> String {
        if t.is_zero() {
            return "0".into();
        }
        t.terms
            .iter()
            .map(|&id| {
                self.tuple(id)
                    .into_iter()
                    .map(|k| self.factor.name(k))
                    .collect::<Vec<_>>()
                    .join("⊗")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Where a weighted class came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    /// The factor class `u`.
    pub class: String,
    /// Stable operation applied to `u`, if any.
    pub operation: Option<String>,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.operation {
            Some(op) => write!(f, "zd({op}({}))_{{{},{}}}", self.class, self.i, self.j),
            None => write!(f, "zd({})_{{{},{}}}", self.class, self.i, self.j),
        }
    }
}

/// A zero divisor together with its certified TCₙ-weight lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedClass {
    pub element: TensorElement,
    pub weight: u32,
    pub degree: u32,
    pub kind: ClassKind,
    pub provenance: Provenance,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operations::bockstein;
    use crate::rings;
    use crate::seifert::{derive, SeifertInvariants};

    fn seifert(text: &str) -> (Arc<GradedAlgebra>, StableOperation) {
        let inv = SeifertInvariants::parse(text).unwrap();
        let params = derive(&inv, 2).unwrap();
        let (case, ring) = rings::build(&inv, &params).unwrap();
        let b = bockstein(&ring, Some(&params), case).unwrap();
        (ring, b)
    }

    fn el(r: &Arc<GradedAlgebra>, name: &str) -> Element {
        Element::named(r, name).unwrap()
    }

    #[test]
    fn dimension_and_budget() {
        let (r, _) = seifert("(O,o;1|0:(3,1),(5,1))");
        assert_eq!(r.dim(), 8);
        let t = TensorAlgebra::new(&r, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.dimension(), 512);
        assert_eq!(t.top_degree(), 9);
        assert!(matches!(TensorAlgebra::new(&r, 7, DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })));
        assert!(TensorAlgebra::new(&r, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn rejects_odd_characteristic() {
        let inv = SeifertInvariants::parse("(O,o;1|0:(3,1),(3,1))").unwrap();
        let params = derive(&inv, 3).unwrap();
        let (_, r) = rings::build(&inv, &params).unwrap();
        assert_eq!(TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap_err(), Error::OddCharacteristicUnsupported(3));
    }

    #[test]
    fn products_of_pullbacks() {
        let (r, _) = seifert("(O,o;1|0:(2,1),(2,1))");
        let t = TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap();
        let a = el(&r, "α2");
        let left = t.pullback(&a, 1).unwrap();
        let right = t.pullback(&a, 2).unwrap();
        assert_eq!(t.display(&t.mul(&left, &right)), "α2⊗α2");
        // a₁ ≡ 2 mod 4, n₂ = 2: α₂² = β₁ + β₂ = 0
        assert!(t.mul(&left, &left).is_zero());
        let one = Element::unit(&r);
        assert_eq!(t.mul(&left, &t.pullback(&one, 2).unwrap()), left);
    }

    #[test]
    fn pullback_cases() {
        let (r, _) = seifert("(O,o;1|0:(2,1),(2,1),(2,1))");
        let t = TensorAlgebra::new(&r, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.display(&t.pullback(&el(&r, "α2"), 2).unwrap()), "1⊗α2⊗1");
        assert!(t.pullback(&Element::zero(&r), 1).unwrap().is_zero());
        assert_eq!(t.pullback(&el(&r, "γ"), 4), Err(Error::IndexOutOfRange { index: 4, n: 3 }));
        let t2 = TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(t2.display(&t2.pullback(&el(&r, "γ"), 1).unwrap()), "γ⊗1");
    }

    #[test]
    fn zero_divisors() {
        let (r, b) = seifert("(O,o;1|0:(2,1),(2,1),(6,1))");
        let t = TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap();
        let a = el(&r, "α2");
        let zd = t.zero_divisor(&a, 1, 2).unwrap();
        assert_eq!(t.display(&zd.element), "α2⊗1 + 1⊗α2");
        assert_eq!(zd.weight, 1);
        assert!(t.diagonal_pullback(&zd.element).unwrap().is_zero());
        assert_eq!(zd.provenance.to_string(), "zd(α2)_{1,2}");

        let bz = t.bockstein_zero_divisor(&b, &a, 1, 2).unwrap();
        let sq = a.cup(&a).unwrap();
        let expected = t.pullback(&sq, 1).unwrap().add(&t.pullback(&sq, 2).unwrap());
        assert_eq!(bz.element, expected);
        assert_eq!(bz.weight, 2);
        assert_eq!(bz.provenance.to_string(), "zd(B2(α2))_{1,2}");

        assert!(matches!(
            t.bockstein_zero_divisor(&b, &el(&r, "θ1"), 1, 2),
            Err(Error::ZeroClass(_))
        ));
        let mixed = a.add(&el(&r, "β2")).unwrap();
        assert_eq!(t.zero_divisor(&mixed, 1, 2), Err(Error::NotHomogeneous));
        assert!(t.zero_divisor(&a, 2, 2).is_err());
        assert!(matches!(
            t.bockstein_zero_divisor(&b, &el(&r, "β2"), 1, 2),
            Err(Error::ExcessTooSmall { excess: 1, degree: 2 })
        ));
    }

    #[test]
    fn diagonal() {
        let (r, _) = seifert("(O,o;1|0:(2,1),(2,1),(6,1))");
        let t = TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap();
        let x = t.pure_tensor(&[Element::unit(&r), el(&r, "γ")]).unwrap();
        assert_eq!(t.diagonal_pullback(&x).unwrap(), el(&r, "γ"));
        let y = t.pure_tensor(&[el(&r, "θ1"), el(&r, "φ'1")]).unwrap();
        assert_eq!(t.diagonal_pullback(&y).unwrap(), el(&r, "γ"));
    }

    #[test]
    fn connected_sum_zero_divisor() {
        let r = rings::build_connected_sum(2).unwrap();
        let t = TensorAlgebra::new(&r, 2, DEFAULT_BUDGET).unwrap();
        let zd = t.zero_divisor(&el(&r, "x1^1"), 1, 2).unwrap();
        assert_eq!(t.display(&zd.element), "x1^1⊗1 + 1⊗x1^1");
    }

    #[test]
    fn from_ids_cancels_pairs() {
        let e = TensorElement::from_ids(vec![3, 1, 3, 2, 3]);
        assert_eq!(e.ids(), &[1, 2, 3]);
        assert!(TensorElement::from_ids(vec![5, 5]).is_zero());
    }
}
