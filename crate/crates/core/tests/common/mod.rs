//! Independent reference computations for integration tests: a dense
//! mod-2 tensor power built directly from the factor ring's cup product,
//! and an unpruned enumeration of candidate products.

#![allow(dead_code)]

use std::sync::Arc;

use seifert_tc::{Element, GradedAlgebra};

/// Dense element of `H*(X)^{⊗n}` over F₂, big-endian tuple indexing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dense {
    pub bits: Vec<bool>,
}

pub struct DensePower {
    pub ring: Arc<GradedAlgebra>,
    pub n: usize,
    pub dim: usize,
}

impl DensePower {
    pub fn new(ring: &Arc<GradedAlgebra>, n: usize) -> Self {
        assert_eq!(ring.prime(), 2);
        Self {
            ring: Arc::clone(ring),
            n,
            dim: ring.dim(),
        }
    }

    pub fn size(&self) -> usize {
        self.dim.pow(self.n as u32)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.n];
        for s in (0..self.n).rev() {
            t[s] = idx % self.dim;
            idx /= self.dim;
        }
        t
    }

    pub fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &b| acc * self.dim + b)
    }

    pub fn zero(&self) -> Dense {
        Dense {
            bits: vec![false; self.size()],
        }
    }

    pub fn unit(&self) -> Dense {
        let mut d = self.zero();
        d.bits[0] = true;
        d
    }

    /// `u₁ ⊗ … ⊗ uₙ`.
    pub fn pure(&self, factors: &[Element]) -> Dense {
        let mut d = self.zero();
        for idx in 0..self.size() {
            let t = self.tuple(idx);
            d.bits[idx] = t.iter().zip(factors).all(|(&b, u)| u.coeff(b) % 2 == 1);
        }
        d
    }

    /// `u` in slot `i` (1-based), unit elsewhere.
    pub fn slot(&self, u: &Element, i: usize) -> Dense {
        let mut factors = vec![Element::unit(&self.ring); self.n];
        factors[i - 1] = u.clone();
        self.pure(&factors)
    }

    pub fn zero_divisor(&self, u: &Element, i: usize, j: usize) -> Dense {
        add(&self.slot(u, i), &self.slot(u, j))
    }

    pub fn mul(&self, a: &Dense, b: &Dense) -> Dense {
        let mut out = self.zero();
        let nz = |d: &Dense| -> Vec<usize> { (0..d.bits.len()).filter(|&k| d.bits[k]).collect() };
        let (xs, ys) = (nz(a), nz(b));
        for &x in &xs {
            let tx = self.tuple(x);
            for &y in &ys {
                let ty = self.tuple(y);
                let slots: Vec<Element> = tx
                    .iter()
                    .zip(&ty)
                    .map(|(&p, &q)| {
                        Element::basis(&self.ring, p)
                            .cup(&Element::basis(&self.ring, q))
                            .unwrap()
                    })
                    .collect();
                let supports: Vec<Vec<usize>> = slots
                    .iter()
                    .map(|e| e.terms().filter(|&(_, c)| c % 2 == 1).map(|(k, _)| k).collect())
                    .collect();
                let mut idxs = vec![0usize];
                for sup in &supports {
                    idxs = idxs.iter().flat_map(|&i| sup.iter().map(move |&k| i * self.dim + k)).collect();
                }
                for i in idxs {
                    out.bits[i] ^= true;
                }
            }
        }
        out
    }

    /// Image under the diagonal: each tuple maps to the product of its entries.
    pub fn diagonal(&self, d: &Dense) -> Element {
        let mut out = Element::zero(&self.ring);
        for idx in 0..self.size() {
            if d.bits[idx] {
                let parts: Vec<Element> = self.tuple(idx).into_iter().map(|b| Element::basis(&self.ring, b)).collect();
                out = out.add(&Element::cup_many(&parts).unwrap()).unwrap();
            }
        }
        out
    }
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    Dense {
        bits: a.bits.iter().zip(&b.bits).map(|(x, y)| x ^ y).collect(),
    }
}

pub fn is_zero(d: &Dense) -> bool {
    !d.bits.iter().any(|&b| b)
}

#[derive(Clone, Debug)]
pub struct OracleClass {
    pub label: String,
    pub element: Dense,
    pub weight: u32,
    pub degree: u32,
}

/// Zero divisors `ū_{1,i}` for basis classes of degree 1 and 2, plus the
/// weight-2 classes from squares of degree-1 classes (the mod-2 Bockstein
/// on every ring in scope).
pub fn oracle_pool(p: &DensePower) -> Vec<OracleClass> {
    let ring = &p.ring;
    let mut pool = Vec::new();
    for b in 0..ring.dim() {
        let d = ring.degree(b);
        if d != 1 && d != 2 {
            continue;
        }
        let u = Element::basis(ring, b);
        for i in 2..=p.n {
            pool.push(OracleClass {
                label: format!("{}[{i}]", ring.name(b)),
                element: p.zero_divisor(&u, 1, i),
                weight: 1,
                degree: d,
            });
        }
        if d == 1 {
            let sq = u.cup(&u).unwrap();
            if !sq.is_zero() {
                for i in 2..=p.n {
                    pool.push(OracleClass {
                        label: format!("sq{}[{i}]", ring.name(b)),
                        element: p.zero_divisor(&sq, 1, i),
                        weight: 2,
                        degree: 2,
                    });
                }
            }
        }
    }
    pool
}

/// Maximum total weight over all candidate multisets with a nonzero product.
/// No bound pruning; only subtrees under a zero product are skipped.
pub fn brute_force_weight(p: &DensePower, pool: &[OracleClass]) -> u32 {
    fn go(p: &DensePower, pool: &[OracleClass], start: usize, prod: &Dense, weight: u32, degree: u32, top: u32) -> u32 {
        let mut best = weight;
        for k in start..pool.len() {
            let d = degree + pool[k].degree;
            if d > top {
                continue;
            }
            let next = p.mul(prod, &pool[k].element);
            if is_zero(&next) {
                continue;
            }
            best = best.max(go(p, pool, k, &next, weight + pool[k].weight, d, top));
        }
        best
    }
    let top = p.n as u32 * p.ring.top_degree();
    go(p, pool, 0, &p.unit(), 0, 0, top)
}

/// Longest nonzero product of positive-degree basis elements, by plain
/// recursion over all nondecreasing index sequences.
pub fn oracle_cup_length(ring: &Arc<GradedAlgebra>) -> u32 {
    fn go(ring: &Arc<GradedAlgebra>, start: usize, prod: &Element) -> u32 {
        (start..ring.dim())
            .filter(|&b| ring.degree(b) > 0)
            .filter_map(|b| {
                let next = prod.cup(&Element::basis(ring, b)).unwrap();
                (!next.is_zero()).then(|| 1 + go(ring, b, &next))
            })
            .max()
            .unwrap_or(0)
    }
    go(ring, 0, &Element::unit(ring))
}

/// Dense product of the classes named by the library's provenance strings,
/// e.g. `zd(α2)_{1,2}` or `zd(B2(α2))_{1,3}`, with the Bockstein read as
/// squaring.
pub fn product_of_provenances(p: &DensePower, labels: &[String]) -> Dense {
    let mut acc = p.unit();
    for label in labels {
        let (class, i, j) = parse_provenance(label);
        let (name, squared) = match class.strip_prefix("B2(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => (inner.to_string(), true),
            None => (class, false),
        };
        let mut u = Element::named(&p.ring, &name).unwrap();
        if squared {
            u = u.cup(&u).unwrap();
        }
        acc = p.mul(&acc, &p.zero_divisor(&u, i, j));
    }
    acc
}

fn parse_provenance(label: &str) -> (String, usize, usize) {
    let body = label.strip_prefix("zd(").expect("zd prefix");
    let close = body.rfind(")_{").expect("index suffix");
    let class = body[..close].to_string();
    let idx = &body[close + 3..body.len() - 1];
    let (i, j) = idx.split_once(',').unwrap();
    (class, i.parse().unwrap(), j.parse().unwrap())
}
