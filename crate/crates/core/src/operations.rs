//! The mod-p Bockstein on degree-1 classes, and the weight certificates for
//! zero divisors built from it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::rings::{self, RingCase, RingTag};
use crate::seifert::DerivedParams;

/// A stable cohomology operation, recorded by its action on the degree-1
/// subspace of one algebra.
#[derive(Debug, Clone)]
pub struct StableOperation {
    name: String,
    degree_shift: u32,
    excess: u32,
    domain_degree: u32,
    algebra: Arc<GradedAlgebra>,
    /// Image of each basis element of the domain degree.
    action: BTreeMap<usize, Element>,
}

impl StableOperation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree_shift(&self) -> u32 {
        self.degree_shift
    }

    pub fn excess(&self) -> u32 {
        self.excess
    }

    pub fn domain_degree(&self) -> u32 {
        self.domain_degree
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    /// Image of the basis element `i`, which must lie in the domain degree.
    pub fn on_basis(&self, i: usize) -> Option<&Element> {
        self.action.get(&i)
    }

    pub fn apply(&self, u: &Element) -> Result<Element> {
        if !Arc::ptr_eq(u.algebra(), &self.algebra) {
            return Err(Error::MismatchedAlgebra);
        }
        let support = u.degree_support();
        if support.iter().any(|&d| d != self.domain_degree) {
            return Err(Error::DegreeOutOfDomain {
                expected: self.domain_degree,
                found: support.into_iter().collect(),
            });
        }
        let mut out = Element::zero(&self.algebra);
        for (i, c) in u.terms() {
            out = out.add(&self.action[&i].scale(c as i64))?;
        }
        Ok(out)
    }
}

fn operation(algebra: &Arc<GradedAlgebra>, action: BTreeMap<usize, Element>) -> StableOperation {
    StableOperation {
        name: format!("B{}", algebra.prime()),
        degree_shift: 1,
        excess: 1,
        domain_degree: 1,
        algebra: Arc::clone(algebra),
        action,
    }
}

fn zero_action(algebra: &Arc<GradedAlgebra>) -> BTreeMap<usize, Element> {
    algebra
        .basis_in_degree(1)
        .into_iter()
        .map(|i| (i, Element::zero(algebra)))
        .collect()
}

/// `B_p(αᵢ) = −a′ᵢcᵢβᵢ + a′₁c₁β₁` with `β₁ = −Σ_{k≥2} βₖ`, and zero on the
/// θ classes. Only valid for orientable-base rings with `n_p > 0`.
pub fn bockstein_formula_np_positive(
    algebra: &Arc<GradedAlgebra>,
    params: &DerivedParams,
) -> Result<BTreeMap<usize, Element>> {
    let n = params.n_p;
    let mut action = zero_action(algebra);
    let betas = (2..=n)
        .map(|i| Element::named(algebra, &rings::beta(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut beta_one = Element::zero(algebra);
    for b in &betas {
        beta_one = beta_one.sub(b)?;
    }
    let first = params.a_prime[0] as i128 * params.bezout[0][0] as i128;
    for i in 2..=n {
        let k = i - 1;
        let own = params.a_prime[k] as i128 * params.bezout[k][0] as i128;
        let image = betas[k - 1]
            .scale(reduce_i64(-own, algebra.prime()))
            .add(&beta_one.scale(reduce_i64(first, algebra.prime())))?;
        action.insert(algebra.index_of(&rings::alpha(i))?, image);
    }
    Ok(action)
}

fn reduce_i64(x: i128, p: u32) -> i64 {
    x.rem_euclid(p as i128) as i64
}

/// Squares of the degree-1 basis: the mod-2 Bockstein on degree 1.
fn squaring_action(algebra: &Arc<GradedAlgebra>) -> Result<BTreeMap<usize, Element>> {
    algebra
        .basis_in_degree(1)
        .into_iter()
        .map(|i| {
            let x = Element::basis(algebra, i);
            Ok((i, x.cup(&x)?))
        })
        .collect()
}

/// The mod-p Bockstein on `H¹` of a built ring.
///
/// At p = 2 on `n₂ > 0` rings it is computed as squaring through the ring's
/// own multiplication and cross-checked against the closed formula; on the
/// `n_p = 0` ring it is `α ↦ −λβ` (cross-checked against `α²` at p = 2).
pub fn bockstein(algebra: &Arc<GradedAlgebra>, params: Option<&DerivedParams>, case: RingCase) -> Result<StableOperation> {
    let p = algebra.prime();
    let need_params = || {
        params.ok_or_else(|| Error::InvalidArgument("Seifert rings need derived parameters".into()))
    };
    let action = match case.tag {
        RingTag::ConnectedSumS2xS1 => {
            let squares = squaring_action(algebra)?;
            if squares.values().any(|x| !x.is_zero()) {
                return Err(Error::invariant("Bockstein", "a degree-1 square is nonzero"));
            }
            zero_action(algebra)
        }
        RingTag::OoNpPositive | RingTag::OnNpPositive => {
            let params = need_params()?;
            if p == 2 {
                let squares = squaring_action(algebra)?;
                let formula = bockstein_formula_np_positive(algebra, params)?;
                for (i, sq) in &squares {
                    if sq != &formula[i] {
                        return Err(Error::invariant(
                            "Bockstein cross-check",
                            format!("{}² = {sq} but the formula gives {}", algebra.name(*i), formula[i]),
                        ));
                    }
                }
                squares
            } else if case.tag == RingTag::OoNpPositive {
                bockstein_formula_np_positive(algebra, params)?
            } else {
                return Err(Error::UnsupportedCase(
                    "odd-p Bockstein on a non-orientable base needs β₁, whose defining relation is not determined"
                        .into(),
                ));
            }
        }
        RingTag::OoNpZeroExact => {
            let params = need_params()?;
            let lambda = params
                .lambda
                .ok_or_else(|| Error::invariant("λ defined", "λ missing for an Ae+C ≡ 0 ring"))?;
            let mut action = zero_action(algebra);
            let alpha = algebra.index_of(rings::ALPHA)?;
            let image = Element::named(algebra, rings::BETA)?.scale(-(lambda as i64));
            if p == 2 {
                let a = Element::basis(algebra, alpha);
                let sq = a.cup(&a)?;
                if sq != image {
                    return Err(Error::invariant(
                        "Bockstein cross-check",
                        format!("α² = {sq} but −λβ = {image}"),
                    ));
                }
            }
            action.insert(alpha, image);
            action
        }
        RingTag::OoNpZeroInexact => {
            return Err(Error::ProductStructureUnavailable(
                "no Bockstein is available for the additive-only Ae+C ≢ 0 ring".into(),
            ))
        }
    };
    Ok(operation(algebra, action))
}

/// What a zero-divisor class was built from, for weight certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    /// `pⱼ*(u) − pᵢ*(u)`.
    PlainZeroDivisor,
    /// `pⱼ*(μu) − pᵢ*(μu)` for a stable operation `μ` of the given excess
    /// applied to a class of `source_degree`.
    StableOpImage { excess: u32, source_degree: u32 },
}

/// Certified lower bound on the TCₙ-weight of a class of the given kind.
pub fn weight_of(kind: ClassKind) -> Result<u32> {
    match kind {
        ClassKind::PlainZeroDivisor => Ok(1),
        ClassKind::StableOpImage { excess, source_degree } if excess >= source_degree => Ok(2),
        ClassKind::StableOpImage { excess, source_degree } => Err(Error::ExcessTooSmall {
            excess,
            degree: source_degree,
        }),
    }
}
