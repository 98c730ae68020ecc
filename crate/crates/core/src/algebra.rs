//! Finite-dimensional graded-commutative algebras over a prime field.
//!
//! An algebra is a named basis with degrees plus a table of structure
//! constants. Basis element 0 is always the unit. Products that are not
//! listed in the table are zero.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, check_prime, mul_mod, neg_mod, rank_mod_p, reduce};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

/// Sparse coefficient list `(basis index, coefficient)`, coefficients in `1..p`.
pub type SparseVec = Vec<(usize, u32)>;

#[derive(Debug)]
pub struct GradedAlgebra {
    prime: u32,
    top_degree: u32,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    /// Dense `dim * dim` index into sparse products; `None` for additive-only
    /// algebras.
    table: Option<Vec<SparseVec>>,
    additive_reason: Option<String>,
}

impl GradedAlgebra {
    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasisElement(name.to_string()))
    }

    pub fn has_products(&self) -> bool {
        self.table.is_some()
    }

    /// Why the product structure is missing, for additive-only algebras.
    pub fn additive_reason(&self) -> Option<&str> {
        self.additive_reason.as_deref()
    }

    pub fn betti(&self, degree: u32) -> usize {
        self.basis.iter().filter(|b| b.degree == degree).count()
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.top_degree).map(|d| self.betti(d)).collect()
    }

    /// Basis indices in the given degree, in basis order.
    pub fn basis_in_degree(&self, degree: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == degree).collect()
    }

    /// Structure constants of `basis[i] * basis[j]`.
    pub fn product(&self, i: usize, j: usize) -> Result<&[(usize, u32)]> {
        match &self.table {
            Some(t) => Ok(&t[i * self.dim() + j]),
            None => Err(self.unavailable()),
        }
    }

    fn unavailable(&self) -> Error {
        Error::ProductStructureUnavailable(
            self.additive_reason
                .clone()
                .unwrap_or_else(|| "algebra is additive-only".into()),
        )
    }

    fn sign(&self, i: usize, j: usize) -> u32 {
        if (self.degree(i) * self.degree(j)) % 2 == 1 {
            neg_mod(1, self.prime)
        } else {
            1
        }
    }

    /// Runs the structural checks: basis sanity, grading, unit law, graded
    /// commutativity and associativity on all basis triples.
    pub fn validate(&self) -> Result<()> {
        if self.basis.first().map(|b| b.degree) != Some(0) {
            return Err(Error::invariant("unit", "basis[0] must have degree 0"));
        }
        let mut seen = BTreeSet::new();
        for b in &self.basis {
            if !seen.insert(b.name.as_str()) {
                return Err(Error::invariant("unique names", format!("duplicate {:?}", b.name)));
            }
            if b.degree > self.top_degree {
                return Err(Error::invariant(
                    "degree bound",
                    format!("{} has degree {} > {}", b.name, b.degree, self.top_degree),
                ));
            }
        }
        if self.table.is_none() {
            return Ok(());
        }
        let dim = self.dim();
        let e = |i: usize| {
            let mut v = vec![0u32; dim];
            v[i] = 1;
            v
        };
        for i in 0..dim {
            for j in 0..dim {
                let target = self.degree(i) + self.degree(j);
                for &(k, _) in self.product(i, j)? {
                    if self.degree(k) != target {
                        return Err(Error::invariant(
                            "grading",
                            format!(
                                "{}·{} has a {} term",
                                self.name(i),
                                self.name(j),
                                self.name(k)
                            ),
                        ));
                    }
                }
            }
        }
        for i in 0..dim {
            let x = e(i);
            if self.mul_raw(&e(0), &x)? != x
                || self.mul_raw(&x, &e(0))? != x
            {
                return Err(Error::invariant(
                    "unit",
                    format!("1 does not act as identity on {}", self.name(i)),
                ));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let xy = self.mul_raw(&e(i), &e(j))?;
                let yx = self.mul_raw(&e(j), &e(i))?;
                let s = self.sign(i, j);
                let signed: Vec<u32> = yx.iter().map(|&c| mul_mod(c, s, self.prime)).collect();
                if xy != signed {
                    let name = if self.prime == 2 {
                        "characteristic-2 symmetry"
                    } else {
                        "graded commutativity"
                    };
                    return Err(Error::invariant(
                        name,
                        format!("{}·{} vs {}·{}", self.name(i), self.name(j), self.name(j), self.name(i)),
                    ));
                }
            }
        }
        for i in 1..dim {
            for j in 1..dim {
                let xy = self.mul_raw(&e(i), &e(j))?;
                for k in 1..dim {
                    let z = &e(k);
                    let left = self.mul_raw(&xy, z)?;
                    let yz = self.mul_raw(&e(j), z)?;
                    let right = self.mul_raw(&e(i), &yz)?;
                    if left != right {
                        return Err(Error::invariant(
                            "associativity",
                            format!("({}·{})·{}", self.name(i), self.name(j), self.name(k)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Poincaré duality for a closed orientable 3-manifold ring: Betti numbers
    /// are palindromic with a one-dimensional top, and the pairing
    /// H¹ × H² → H³ is nondegenerate.
    pub fn check_poincare_duality(&self) -> Result<()> {
        let top = self.top_degree;
        let b = self.betti_numbers();
        for d in 0..=top {
            if b[d as usize] != b[(top - d) as usize] {
                return Err(Error::invariant("Poincaré duality", format!("Betti numbers {b:?}")));
            }
        }
        if b[0] != 1 || b[top as usize] != 1 {
            return Err(Error::invariant("Poincaré duality", format!("Betti numbers {b:?}")));
        }
        let fundamental = self.basis_in_degree(top)[0];
        for d in 1..=top / 2 {
            let low = self.basis_in_degree(d);
            let high = self.basis_in_degree(top - d);
            let mut rows = Vec::with_capacity(low.len());
            for &i in &low {
                let mut row = Vec::with_capacity(high.len());
                for &j in &high {
                    let c = self
                        .product(i, j)?
                        .iter()
                        .find(|&&(k, _)| k == fundamental)
                        .map_or(0, |&(_, c)| c);
                    row.push(c);
                }
                rows.push(row);
            }
            let rank = rank_mod_p(rows, self.prime);
            if rank != low.len() {
                return Err(Error::invariant(
                    "Poincaré duality",
                    format!("pairing H^{d} x H^{} has rank {rank}, expected {}", top - d, low.len()),
                ));
            }
        }
        Ok(())
    }

    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        let table = self.table.as_ref().ok_or_else(|| self.unavailable())?;
        let dim = self.dim();
        let p = self.prime;
        let mut out = vec![0u32; dim];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let c = mul_mod(ca, cb, p);
                for &(k, s) in &table[i * dim + j] {
                    out[k] = add_mod(out[k], mul_mod(c, s, p), p);
                }
            }
        }
        Ok(out)
    }

    /// Debug document: basis names, degrees and nonzero structure constants.
    pub fn to_document(&self) -> AlgebraDocument {
        let mut products = Vec::new();
        if let Some(table) = &self.table {
            let dim = self.dim();
            for i in 0..dim {
                for j in 0..dim {
                    let entry = &table[i * dim + j];
                    if !entry.is_empty() {
                        products.push(ProductEntry {
                            i,
                            j,
                            coeffs: entry.iter().map(|&(k, c)| (self.name(k).to_string(), c)).collect(),
                        });
                    }
                }
            }
        }
        AlgebraDocument {
            p: self.prime,
            basis: self.basis.clone(),
            products,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("algebra document serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, u32>,
}

/// JSON form `{p, basis:[{name,degree}], products:[{i,j,coeffs:{name:coef}}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub p: u32,
    pub basis: Vec<BasisElement>,
    pub products: Vec<ProductEntry>,
}

impl AlgebraDocument {
    /// Rebuilds the algebra exactly as written (no unit insertion), then
    /// validates it.
    pub fn into_algebra(self) -> Result<Arc<GradedAlgebra>> {
        let top = self.basis.iter().map(|b| b.degree).max().unwrap_or(0);
        let mut builder = AlgebraBuilder::bare(self.p, top)?;
        for b in &self.basis {
            builder.push_basis(&b.name, b.degree);
        }
        for entry in self.products {
            let mut terms = Vec::new();
            for (name, c) in entry.coeffs {
                let k = builder
                    .basis
                    .iter()
                    .position(|b| b.name == name)
                    .ok_or(Error::UnknownBasisElement(name))?;
                terms.push((k, c as i64));
            }
            builder.set_product(entry.i, entry.j, &terms);
        }
        let alg = builder.build_unchecked();
        alg.validate()?;
        Ok(alg)
    }
}

/// Incremental construction of a [`GradedAlgebra`].
#[derive(Debug, Clone)]
pub struct AlgebraBuilder {
    prime: u32,
    top_degree: u32,
    basis: Vec<BasisElement>,
    products: HashMap<(usize, usize), SparseVec>,
    insert_unit_products: bool,
}

impl AlgebraBuilder {
    /// New builder whose basis starts with the unit `1`.
    pub fn new(prime: u32, top_degree: u32) -> Result<Self> {
        let mut b = Self::bare(prime, top_degree)?;
        b.insert_unit_products = true;
        b.push_basis("1", 0);
        Ok(b)
    }

    fn bare(prime: u32, top_degree: u32) -> Result<Self> {
        Ok(Self {
            prime: check_prime(prime)?,
            top_degree,
            basis: Vec::new(),
            products: HashMap::new(),
            insert_unit_products: false,
        })
    }

    fn push_basis(&mut self, name: &str, degree: u32) -> usize {
        self.basis.push(BasisElement {
            name: name.to_string(),
            degree,
        });
        self.basis.len() - 1
    }

    pub fn generator(&mut self, name: impl Into<String>, degree: u32) -> usize {
        let name = name.into();
        self.push_basis(&name, degree)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// Sets `basis[i] * basis[j]` (replacing any previous entry).
    pub fn set_product(&mut self, i: usize, j: usize, terms: &[(usize, i64)]) {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for &(k, c) in terms {
            let e = acc.entry(k).or_insert(0);
            *e = add_mod(*e, reduce(c as i128, self.prime), self.prime);
        }
        let sparse: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        self.products.insert((i, j), sparse);
    }

    /// Sets `basis[i] * basis[j]` and the graded-commutative partner
    /// `basis[j] * basis[i] = (-1)^{|i||j|} basis[i] * basis[j]`.
    pub fn set_graded_product(&mut self, i: usize, j: usize, terms: &[(usize, i64)]) {
        self.set_product(i, j, terms);
        if i != j {
            let odd = (self.basis[i].degree * self.basis[j].degree) % 2 == 1;
            let flipped: Vec<(usize, i64)> =
                terms.iter().map(|&(k, c)| (k, if odd { -c } else { c })).collect();
            self.set_product(j, i, &flipped);
        }
    }

    fn table(&mut self) -> Vec<SparseVec> {
        let dim = self.basis.len();
        if self.insert_unit_products {
            for i in 0..dim {
                self.products.entry((0, i)).or_insert_with(|| vec![(i, 1)]);
                self.products.entry((i, 0)).or_insert_with(|| vec![(i, 1)]);
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for (&(i, j), v) in &self.products {
            table[i * dim + j] = v.clone();
        }
        table
    }

    fn finish(self, table: Option<Vec<SparseVec>>, additive_reason: Option<String>) -> Arc<GradedAlgebra> {
        let index = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.clone(), i))
            .collect();
        Arc::new(GradedAlgebra {
            prime: self.prime,
            top_degree: self.top_degree,
            basis: self.basis,
            index,
            table,
            additive_reason,
        })
    }

    /// Builds and runs [`GradedAlgebra::validate`].
    pub fn build(self) -> Result<Arc<GradedAlgebra>> {
        let alg = self.build_unchecked();
        alg.validate()?;
        Ok(alg)
    }

    /// Builds without validation; used for fixtures that must be inspected
    /// after construction.
    pub fn build_unchecked(mut self) -> Arc<GradedAlgebra> {
        let table = self.table();
        self.finish(Some(table), None)
    }

    /// Builds an algebra with no product structure.
    pub fn build_additive(self, reason: impl Into<String>) -> Result<Arc<GradedAlgebra>> {
        let alg = self.finish(None, Some(reason.into()));
        alg.validate()?;
        Ok(alg)
    }
}

/// An element of a [`GradedAlgebra`], stored as a dense coefficient vector.
#[derive(Clone)]
pub struct Element {
    algebra: Arc<GradedAlgebra>,
    coeffs: Vec<u32>,
}

impl Element {
    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            coeffs: vec![0; algebra.dim()],
        }
    }

    pub fn unit(algebra: &Arc<GradedAlgebra>) -> Self {
        Self::basis(algebra, 0)
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[i] = 1;
        e
    }

    pub fn named(algebra: &Arc<GradedAlgebra>, name: &str) -> Result<Self> {
        Ok(Self::basis(algebra, algebra.index_of(name)?))
    }

    pub fn from_coeffs(algebra: &Arc<GradedAlgebra>, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                algebra.dim(),
                coeffs.len()
            )));
        }
        let p = algebra.prime();
        Ok(Self {
            algebra: Arc::clone(algebra),
            coeffs: coeffs.iter().map(|&c| reduce(c as i128, p)).collect(),
        })
    }

    pub fn from_sparse(algebra: &Arc<GradedAlgebra>, terms: &[(usize, u32)]) -> Self {
        let mut e = Self::zero(algebra);
        let p = algebra.prime();
        for &(k, c) in terms {
            e.coeffs[k] = add_mod(e.coeffs[k], c % p, p);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs[i]
    }

    /// Nonzero `(basis index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c))
    }

    fn same_parent(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebra)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_parent(other)?;
        let p = self.algebra.prime();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        })
    }

    pub fn neg(&self) -> Element {
        let p = self.algebra.prime();
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().map(|&c| neg_mod(c, p)).collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Element {
        let p = self.algebra.prime();
        let c = reduce(c as i128, p);
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().map(|&x| mul_mod(x, c, p)).collect(),
        }
    }

    pub fn cup(&self, other: &Element) -> Result<Element> {
        self.same_parent(other)?;
        let coeffs = self.algebra.mul_raw(&self.coeffs, &other.coeffs)?;
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        })
    }

    /// Left fold of [`Element::cup`] over a non-empty list.
    pub fn cup_many(factors: &[Element]) -> Result<Element> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.cup(f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn degree_support(&self) -> BTreeSet<u32> {
        self.terms().map(|(i, _)| self.algebra.degree(i)).collect()
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.degree_support().len() <= 1
    }

    /// The degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<u32> {
        let s = self.degree_support();
        if s.len() == 1 {
            s.into_iter().next()
        } else {
            None
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}·")?;
            }
            f.write_str(self.algebra.name(i))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}
