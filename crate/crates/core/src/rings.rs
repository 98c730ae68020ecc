//! Mod-p cohomology rings of orientable Seifert fibred manifolds and of
//! connected sums of S²×S¹, built from their presentations.
//!
//! Generator names: `α{i}` and `β{i}` for `2 ≤ i ≤ n_p`, `θ{l}`, `θ'{l}`,
//! `φ{l}`, `φ'{l}` for `1 ≤ l ≤ g`, `α`, `β` for the `n_p = 0` ring, `γ` for
//! the top class, and `x{i}^1`, `x{i}^2` for the i-th S²×S¹ summand.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraBuilder, Element, GradedAlgebra};
use crate::arith::binom2_mod;
use crate::error::{Error, Result};
use crate::seifert::{BaseClass, DerivedParams, SeifertInvariants};

pub const TOP_DEGREE: u32 = 3;

pub fn alpha(i: usize) -> String {
    format!("α{i}")
}
pub fn beta(i: usize) -> String {
    format!("β{i}")
}
pub fn theta(l: u32) -> String {
    format!("θ{l}")
}
pub fn theta_prime(l: u32) -> String {
    format!("θ'{l}")
}
pub fn phi(l: u32) -> String {
    format!("φ{l}")
}
pub fn phi_prime(l: u32) -> String {
    format!("φ'{l}")
}
pub const GAMMA: &str = "γ";
pub const ALPHA: &str = "α";
pub const BETA: &str = "β";

pub fn sum_degree1(i: usize) -> String {
    format!("x{i}^1")
}
pub fn sum_degree2(i: usize) -> String {
    format!("x{i}^2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    /// Orientable base, `n_p > 0`.
    OoNpPositive,
    /// Orientable base, `n_p = 0`, `Ae + C ≡ 0 (mod p)`.
    OoNpZeroExact,
    /// Orientable base, `n_p = 0`, `Ae + C ≢ 0 (mod p)`; additive only.
    OoNpZeroInexact,
    /// Non-orientable base, `n_p > 0`.
    OnNpPositive,
    /// `#ₖ(S²×S¹)`.
    ConnectedSumS2xS1,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingTag::OoNpPositive => "Oo_NpPositive",
            RingTag::OoNpZeroExact => "Oo_NpZero_Exact",
            RingTag::OoNpZeroInexact => "Oo_NpZero_Inexact",
            RingTag::OnNpPositive => "On_NpPositive",
            RingTag::ConnectedSumS2xS1 => "ConnectedSumS2xS1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingCase {
    pub tag: RingTag,
    pub prime: u32,
}

pub fn classify(inv: &SeifertInvariants, params: &DerivedParams) -> Result<RingCase> {
    let tag = match (inv.base, params.n_p > 0) {
        (BaseClass::Orientable, true) => RingTag::OoNpPositive,
        (BaseClass::Nonorientable, true) => RingTag::OnNpPositive,
        (BaseClass::Orientable, false) if params.ae_plus_c_mod_p() == 0 => RingTag::OoNpZeroExact,
        (BaseClass::Orientable, false) => RingTag::OoNpZeroInexact,
        (BaseClass::Nonorientable, false) => {
            return Err(Error::UnsupportedCase(format!(
                "no presentation is available for a non-orientable base with n_{} = 0",
                params.prime
            )))
        }
    };
    Ok(RingCase {
        tag,
        prime: params.prime,
    })
}

/// Builds the ring for the given invariants and runs the post-build checks.
pub fn build(inv: &SeifertInvariants, params: &DerivedParams) -> Result<(RingCase, Arc<GradedAlgebra>)> {
    let case = classify(inv, params)?;
    let ring = match case.tag {
        RingTag::OoNpPositive => build_oo_np_positive(params, inv.g)?,
        RingTag::OoNpZeroExact | RingTag::OoNpZeroInexact => build_oo_np_zero(params, inv.g)?,
        RingTag::OnNpPositive => build_on_np_positive(params, inv.g)?,
        RingTag::ConnectedSumS2xS1 => unreachable!("classify never selects connected sums"),
    };
    post_build_checks(&ring, case, Some(params))?;
    Ok((case, ring))
}

/// Poincaré duality and, for `n_2 > 0` rings, the triple-product identities.
pub fn post_build_checks(ring: &Arc<GradedAlgebra>, case: RingCase, params: Option<&DerivedParams>) -> Result<()> {
    if !ring.has_products() {
        return Ok(());
    }
    ring.check_poincare_duality()?;
    if let (Some(params), RingTag::OoNpPositive | RingTag::OnNpPositive, 2) = (params, case.tag, case.prime) {
        check_triple_products(ring, params)?;
    }
    Ok(())
}

/// For `2 ≤ i,j,k ≤ n₂`: `αᵢαⱼα_k = C(a₁,2)γ` unless `i = j = k`, and
/// `αᵢ³ = [C(a₁,2) + C(aᵢ,2)]γ`.
pub fn check_triple_products(ring: &Arc<GradedAlgebra>, params: &DerivedParams) -> Result<()> {
    let n = params.n_p;
    let c1 = binom2_mod(params.a(0), 2) as i64;
    let gamma = Element::named(ring, GAMMA)?;
    let alphas = (2..=n)
        .map(|i| Element::named(ring, &alpha(i)))
        .collect::<Result<Vec<_>>>()?;
    for (i, ai) in alphas.iter().enumerate() {
        for (j, aj) in alphas.iter().enumerate() {
            for (k, ak) in alphas.iter().enumerate() {
                let got = Element::cup_many(&[ai.clone(), aj.clone(), ak.clone()])?;
                let coeff = if i == j && j == k {
                    c1 + binom2_mod(params.a(i + 1), 2) as i64
                } else {
                    c1
                };
                let want = gamma.scale(coeff);
                if got != want {
                    return Err(Error::invariant(
                        "triple products",
                        format!("α{}·α{}·α{} = {got}, expected {want}", i + 2, j + 2, k + 2),
                    ));
                }
            }
        }
    }
    Ok(())
}

struct SeifertGenerators {
    alphas: Vec<usize>,
    betas: Vec<usize>,
    thetas: Vec<usize>,
    theta_primes: Vec<usize>,
    phis: Vec<usize>,
    phi_primes: Vec<usize>,
    gamma: usize,
}

fn np_positive_generators(b: &mut AlgebraBuilder, n_p: usize, g: u32, primed: bool) -> SeifertGenerators {
    let alphas = (2..=n_p).map(|i| b.generator(alpha(i), 1)).collect();
    let mut thetas = Vec::new();
    let mut theta_primes = Vec::new();
    for l in 1..=g {
        thetas.push(b.generator(theta(l), 1));
        if primed {
            theta_primes.push(b.generator(theta_prime(l), 1));
        }
    }
    let betas = (2..=n_p).map(|i| b.generator(beta(i), 2)).collect();
    let mut phis = Vec::new();
    let mut phi_primes = Vec::new();
    for l in 1..=g {
        phis.push(b.generator(phi(l), 2));
        if primed {
            phi_primes.push(b.generator(phi_prime(l), 2));
        }
    }
    let gamma = b.generator(GAMMA, 3);
    SeifertGenerators {
        alphas,
        betas,
        thetas,
        theta_primes,
        phis,
        phi_primes,
        gamma,
    }
}

/// `αᵢαⱼ = C(a₁,2)β₁ + δᵢⱼ C(aᵢ,2)βᵢ` with `β₁ = Σ_{k≥2} βₖ` (mod 2).
fn set_alpha_squares_mod2(b: &mut AlgebraBuilder, gens: &SeifertGenerators, params: &DerivedParams) {
    let c1 = binom2_mod(params.a(0), 2) as i64;
    for (x, &ai) in gens.alphas.iter().enumerate() {
        for (y, &aj) in gens.alphas.iter().enumerate() {
            let mut terms: Vec<(usize, i64)> = gens.betas.iter().map(|&bk| (bk, c1)).collect();
            if x == y {
                terms.push((gens.betas[x], binom2_mod(params.a(x + 1), 2) as i64));
            }
            b.set_product(ai, aj, &terms);
        }
    }
}

/// Ring for an orientable base with `n_p ≥ 1`.
pub fn build_oo_np_positive(params: &DerivedParams, g: u32) -> Result<Arc<GradedAlgebra>> {
    let mut b = AlgebraBuilder::new(params.prime, TOP_DEGREE)?;
    let gens = np_positive_generators(&mut b, params.n_p, g, true);
    if params.prime == 2 {
        set_alpha_squares_mod2(&mut b, &gens, params);
    }
    for (&a, &bt) in gens.alphas.iter().zip(&gens.betas) {
        b.set_graded_product(a, bt, &[(gens.gamma, -1)]);
    }
    for l in 0..g as usize {
        b.set_graded_product(gens.thetas[l], gens.phi_primes[l], &[(gens.gamma, 1)]);
        b.set_graded_product(gens.theta_primes[l], gens.phis[l], &[(gens.gamma, 1)]);
    }
    b.build()
}

/// Ring for a non-orientable base with `n_p ≥ 1`.
///
/// The `βᵢ` coefficient of `αᵢ²` is taken to be `C(aᵢ,2)`, the value forced
/// by `B₂(αᵢ) = αᵢ²` together with the Bockstein formula and the stated cube
/// `αᵢ³ = [C(a₁,2) + C(aᵢ,2)]γ`.
pub fn build_on_np_positive(params: &DerivedParams, g: u32) -> Result<Arc<GradedAlgebra>> {
    let mut b = AlgebraBuilder::new(params.prime, TOP_DEGREE)?;
    let gens = np_positive_generators(&mut b, params.n_p, g, false);
    if params.prime == 2 {
        set_alpha_squares_mod2(&mut b, &gens, params);
    }
    for (&a, &bt) in gens.alphas.iter().zip(&gens.betas) {
        b.set_graded_product(a, bt, &[(gens.gamma, -1)]);
    }
    for l in 0..g as usize {
        b.set_graded_product(gens.thetas[l], gens.phis[l], &[(gens.gamma, -1)]);
    }
    b.build()
}

/// Ring for an orientable base with `n_p = 0`. Additive-only when
/// `Ae + C ≢ 0 (mod p)`, and for odd `p` (see below).
pub fn build_oo_np_zero(params: &DerivedParams, g: u32) -> Result<Arc<GradedAlgebra>> {
    let p = params.prime;
    let exact = params.ae_plus_c_mod_p() == 0;
    let mut b = AlgebraBuilder::new(p, TOP_DEGREE)?;
    let a = exact.then(|| b.generator(ALPHA, 1));
    let mut thetas = Vec::new();
    for l in 1..=g {
        thetas.push((b.generator(theta(l), 1), b.generator(theta_prime(l), 1)));
    }
    let bt = exact.then(|| b.generator(BETA, 2));
    let mut phis = Vec::new();
    for l in 1..=g {
        phis.push((b.generator(phi(l), 2), b.generator(phi_prime(l), 2)));
    }
    let gamma = b.generator(GAMMA, 3);
    let (Some(a), Some(bt)) = (a, bt) else {
        return b.build_additive(format!(
            "Ae+C ≢ 0 (mod {p}): only the additive structure of this ring is known"
        ));
    };

    if p == 2 {
        // α² = [q + (Ae+C)/2] β
        let coeff = params.q as i128 + params.ae_plus_c / 2;
        b.set_product(a, a, &[(bt, coeff.rem_euclid(2) as i64)]);
    }
    for (l, &(t, tp)) in thetas.iter().enumerate() {
        let (f, fp) = phis[l];
        b.set_graded_product(a, t, &[(f, 1)]);
        b.set_graded_product(a, tp, &[(fp, 1)]);
        b.set_graded_product(t, tp, &[(bt, 1)]);
        b.set_graded_product(t, fp, &[(gamma, 1)]);
        b.set_graded_product(tp, f, &[(gamma, 1)]);
    }
    b.set_graded_product(a, bt, &[(gamma, -1)]);

    if p == 2 {
        return b.build();
    }
    // With graded signs, (αθ)θ′ = γ but α(θθ′) = −γ, so the listed relations
    // are only associative in characteristic 2.
    let additive = b.clone();
    match b.build() {
        Ok(ring) => Ok(ring),
        Err(Error::InvariantViolated { invariant, detail }) => additive.build_additive(format!(
            "listed products fail {invariant} at p = {p} ({detail})"
        )),
        Err(e) => Err(e),
    }
}

/// `H*(#ₖ(S²×S¹); F₂)`: `xᵢ¹·xᵢ² = γ`, all other positive-degree products zero.
pub fn build_connected_sum(k: u32) -> Result<Arc<GradedAlgebra>> {
    if k == 0 {
        return Err(Error::InvalidArgument("connected sum needs k ≥ 1".into()));
    }
    let mut b = AlgebraBuilder::new(2, TOP_DEGREE)?;
    let ones: Vec<usize> = (1..=k as usize).map(|i| b.generator(sum_degree1(i), 1)).collect();
    let twos: Vec<usize> = (1..=k as usize).map(|i| b.generator(sum_degree2(i), 2)).collect();
    let gamma = b.generator(GAMMA, 3);
    for (&x, &y) in ones.iter().zip(&twos) {
        b.set_graded_product(x, y, &[(gamma, 1)]);
    }
    let ring = b.build()?;
    let case = RingCase {
        tag: RingTag::ConnectedSumS2xS1,
        prime: 2,
    };
    post_build_checks(&ring, case, None)?;
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::derive;

    fn ring(text: &str) -> (RingCase, Arc<GradedAlgebra>) {
        let inv = SeifertInvariants::parse(text).unwrap();
        let params = derive(&inv, 2).unwrap();
        build(&inv, &params).unwrap()
    }

    fn el(r: &Arc<GradedAlgebra>, name: &str) -> Element {
        Element::named(r, name).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(ring("(O,o;1|0:(2,1),(4,1))").0.tag, RingTag::OoNpPositive);
        assert_eq!(ring("(O,o;1|0:(3,1),(3,1))").0.tag, RingTag::OoNpZeroExact);
        assert_eq!(ring("(O,o;1|0:(3,1))").0.tag, RingTag::OoNpZeroInexact);
        assert_eq!(ring("(O,n;1|0:(2,1))").0.tag, RingTag::OnNpPositive);
        let inv = SeifertInvariants::parse("(O,n;1|0:(3,1))").unwrap();
        let params = derive(&inv, 2).unwrap();
        assert!(matches!(classify(&inv, &params), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn theorem_one_ring_products() {
        // n₂ = 3, a = (2,2,2): C(2,2) = 1 so α₂² = β₁ + β₂ = β₃
        let (_, r) = ring("(O,o;1|0:(2,1),(2,1),(2,1))");
        assert_eq!(r.betti(1), 4);
        assert_eq!(r.betti(0), 1);
        assert_eq!(el(&r, "α2").cup(&el(&r, "α2")).unwrap(), el(&r, "β3"));
        assert_eq!(
            el(&r, "α2").cup(&el(&r, "α3")).unwrap(),
            el(&r, "β2").add(&el(&r, "β3")).unwrap()
        );
        assert_eq!(el(&r, "α2").cup(&el(&r, "β2")).unwrap(), el(&r, "γ"));
        assert_eq!(el(&r, "θ1").cup(&el(&r, "φ'1")).unwrap(), el(&r, "γ"));
        assert_eq!(el(&r, "1").cup(&el(&r, "θ1")).unwrap(), el(&r, "θ1"));
        let g = el(&r, "γ");
        assert!(g.cup(&g).unwrap().is_zero());
        assert!(g.add(&g).unwrap().is_zero());
    }

    #[test]
    fn theorem_one_cube() {
        // a₁ ≡ 0 mod 4, a₂ ≡ 2 mod 4: α₂³ = [0 + 1]γ
        let (_, r) = ring("(O,o;1|0:(4,1),(2,1))");
        let a = el(&r, "α2");
        assert_eq!(Element::cup_many(&[a.clone(), a.clone(), a]).unwrap(), el(&r, "γ"));
        // a₁ ≡ 2 mod 4: α₂α₂α₃ = γ
        let (_, r) = ring("(O,o;1|0:(2,1),(4,1),(4,1))");
        let prod = Element::cup_many(&[el(&r, "α2"), el(&r, "α2"), el(&r, "α3")]).unwrap();
        assert_eq!(prod, el(&r, "γ"));
    }

    #[test]
    fn betti_one_formula() {
        for (text, n2, g) in [
            ("(O,o;2|0:(2,1),(4,1),(6,1),(3,1))", 3usize, 2u32),
            ("(O,o;0|0:(2,1))", 1, 0),
            ("(O,o;1|0:(2,1),(2,3))", 2, 1),
        ] {
            let (_, r) = ring(text);
            assert_eq!(r.betti(1), (n2 - 1) + 2 * g as usize, "{text}");
            assert_eq!(r.betti(0), 1);
        }
    }

    #[test]
    fn n_p_one_has_no_alpha() {
        let (_, r) = ring("(O,o;1|0:(2,1),(3,1))");
        assert!(r.index_of("α2").is_err());
        assert_eq!(r.dim(), 6);
    }

    #[test]
    fn np_zero_ring() {
        // q = 0, Ae+C = 8 ≡ 0 mod 4: α² = 0
        let (case, r) = ring("(O,o;1|0:(3,1),(5,1))");
        assert_eq!(case.tag, RingTag::OoNpZeroExact);
        let a = el(&r, "α");
        assert!(a.cup(&a).unwrap().is_zero());
        let prod = Element::cup_many(&[el(&r, "θ1"), a.clone(), el(&r, "θ'1")]).unwrap();
        assert_eq!(prod, el(&r, "γ"));
        assert_eq!(el(&r, "θ1").cup(&el(&r, "φ'1")).unwrap(), el(&r, "γ"));
        // Ae+C = 6, (Ae+C)/2 odd: α² = β
        let (_, r) = ring("(O,o;1|0:(3,1),(3,1))");
        let a = el(&r, "α");
        assert_eq!(a.cup(&a).unwrap(), el(&r, "β"));
    }

    #[test]
    fn inexact_ring_is_additive() {
        let (_, r) = ring("(O,o;1|0:(3,1))");
        assert!(!r.has_products());
        let t = el(&r, "θ1");
        assert!(matches!(t.cup(&t), Err(Error::ProductStructureUnavailable(_))));
        assert_eq!(r.betti_numbers(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn nonorientable_ring() {
        // a₁ ≡ 0 mod 4 kills the β₁ term; a₂ = 2 gives α₂² = β₂
        let (_, r) = ring("(O,n;1|0:(4,1),(2,1),(2,1))");
        assert_eq!(el(&r, "α2").cup(&el(&r, "α2")).unwrap(), el(&r, "β2"));
        assert_eq!(el(&r, "α2").cup(&el(&r, "β2")).unwrap(), el(&r, "γ"));
        assert_eq!(el(&r, "θ1").cup(&el(&r, "φ1")).unwrap(), el(&r, "γ"));
        assert_eq!(r.betti_numbers(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn odd_prime_rings() {
        let inv = SeifertInvariants::parse("(O,o;1|0:(3,1),(3,2),(2,1))").unwrap();
        let params = derive(&inv, 3).unwrap();
        let (case, r) = build(&inv, &params).unwrap();
        assert_eq!(case.tag, RingTag::OoNpPositive);
        let a = el(&r, "α2");
        assert_eq!(a.cup(&el(&r, "β2")).unwrap(), el(&r, "γ").scale(-1));
        assert!(a.cup(&a).unwrap().is_zero());

        let inv = SeifertInvariants::parse("(O,o;1|0:(2,1),(2,1))").unwrap();
        let params = derive(&inv, 3).unwrap();
        assert_eq!(params.ae_plus_c_mod_p(), 1); // C = 4
        let inv = SeifertInvariants::parse("(O,o;1|0:(2,1),(4,1))").unwrap();
        let params = derive(&inv, 3).unwrap();
        assert_eq!(params.ae_plus_c_mod_p(), 0); // C = 6
        let (case, r) = build(&inv, &params).unwrap();
        assert_eq!(case.tag, RingTag::OoNpZeroExact);
        assert!(!r.has_products());
        assert!(r.additive_reason().unwrap().contains("associativity"));
    }

    #[test]
    fn connected_sums() {
        let r = build_connected_sum(2).unwrap();
        assert_eq!(el(&r, "x1^1").cup(&el(&r, "x1^2")).unwrap(), el(&r, "γ"));
        assert!(el(&r, "x1^1").cup(&el(&r, "x2^2")).unwrap().is_zero());
        assert!(el(&r, "x1^1").cup(&el(&r, "x1^1")).unwrap().is_zero());
        let r1 = build_connected_sum(1).unwrap();
        assert_eq!((r1.betti(1), r1.betti(2)), (1, 1));
        assert!(build_connected_sum(0).is_err());
    }
}
