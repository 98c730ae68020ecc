//! Property tests over randomly drawn Seifert invariants.

mod common;

use proptest::prelude::*;
use seifert_tc::arith::gcd;
use seifert_tc::bounds::{tc_lower, SearchOptions};
use seifert_tc::report::{compute, Input, Options, Report};
use seifert_tc::selfcheck::{seifert_setup, SeifertSetup};
use seifert_tc::tensor::{TensorAlgebra, TensorElement, DEFAULT_BUDGET};
use seifert_tc::{BaseClass, Element, SeifertInvariants};

fn fiber() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=8, -7i64..=7).prop_filter("coprime", |&(a, b)| b != 0 && gcd(a, b) == 1)
}

fn invariants(max_fibers: usize, max_genus: u32) -> impl Strategy<Value = SeifertInvariants> {
    (
        prop_oneof![Just(BaseClass::Orientable), Just(BaseClass::Nonorientable)],
        1..=max_genus,
        -2i64..=2,
        prop::collection::vec(fiber(), 0..=max_fibers),
    )
        .prop_map(|(base, g, e, fibers)| SeifertInvariants::new(base, g, e, &fibers).unwrap())
}

/// Invariants whose mod-2 ring has full products and a Bockstein.
fn with_setup(inv: &SeifertInvariants) -> Option<SeifertSetup> {
    let s = seifert_setup(inv).ok()?;
    (s.ring.has_products() && s.op.is_some()).then_some(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trips(inv in invariants(4, 3)) {
        prop_assert_eq!(SeifertInvariants::parse(&inv.to_string()).unwrap(), inv);
    }

    #[test]
    fn rings_are_associative_with_duality(inv in invariants(4, 2)) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        prop_assert!(s.ring.validate().is_ok());
        prop_assert!(s.ring.check_poincare_duality().is_ok());
    }

    #[test]
    fn bockstein_is_squaring_on_degree_one(inv in invariants(4, 2)) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        let op = s.op.unwrap();
        for b in s.ring.basis_in_degree(1) {
            let x = Element::basis(&s.ring, b);
            prop_assert_eq!(op.apply(&x).unwrap(), x.cup(&x).unwrap());
        }
    }

    #[test]
    fn pullback_is_multiplicative(inv in invariants(3, 1), a in 0usize..64, b in 0usize..64, slot in 1usize..=2) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        let t = TensorAlgebra::new(&s.ring, 2, DEFAULT_BUDGET).unwrap();
        let dim = s.ring.dim();
        let (x, y) = (Element::basis(&s.ring, a % dim), Element::basis(&s.ring, b % dim));
        let lhs = t.pullback(&x.cup(&y).unwrap(), slot).unwrap();
        let rhs = t.mul(&t.pullback(&x, slot).unwrap(), &t.pullback(&y, slot).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diagonal_kills_zero_divisors(inv in invariants(3, 1), a in 0usize..64, n in 2usize..=3) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        let t = TensorAlgebra::new(&s.ring, n, DEFAULT_BUDGET).unwrap();
        let dim = s.ring.dim();
        let u = Element::basis(&s.ring, 1 + a % (dim - 1));
        let z = t.zero_divisor(&u, 1, n).unwrap();
        prop_assert!(t.diagonal_pullback(&z.element).unwrap().is_zero());
    }

    #[test]
    fn sparse_product_matches_dense_reference(inv in invariants(3, 1), a in 0usize..64, b in 0usize..64) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        let t = TensorAlgebra::new(&s.ring, 2, DEFAULT_BUDGET).unwrap();
        let p = common::DensePower::new(&s.ring, 2);
        let dim = s.ring.dim();
        let x = Element::basis(&s.ring, 1 + a % (dim - 1));
        let y = Element::basis(&s.ring, 1 + b % (dim - 1));
        let sparse = t.mul(&t.zero_divisor(&x, 1, 2).unwrap().element, &t.zero_divisor(&y, 1, 2).unwrap().element);
        let dense = p.mul(&p.zero_divisor(&x, 1, 2), &p.zero_divisor(&y, 1, 2));
        let ids: Vec<u64> = (0..dense.bits.len())
            .filter(|&k| dense.bits[k])
            .map(|k| t.id_of(&p.tuple(k)))
            .collect();
        prop_assert_eq!(sparse, TensorElement::from_ids(ids));
    }

    #[test]
    fn tc_lower_grows_with_n(inv in invariants(3, 1)) {
        let Some(s) = with_setup(&inv) else { return Ok(()) };
        let op = s.op.unwrap();
        let (_, two) = tc_lower(&s.ring, &op, 2, SearchOptions::default()).unwrap();
        let (_, three) = tc_lower(&s.ring, &op, 3, SearchOptions::default()).unwrap();
        prop_assert!(three.bound >= two.bound, "{} < {}", three.bound, two.bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reports_are_consistent_and_round_trip(inv in invariants(3, 1)) {
        let opts = Options { orders: vec![2, 3], ..Options::default() };
        let Ok(report) = compute(&Input::Seifert(inv), &opts) else { return Ok(()) };
        prop_assert!(report.cat.lower <= report.cat.upper);
        for tc in &report.tc {
            prop_assert!(tc.lower <= tc.upper);
        }
        let json = report.to_json();
        let back = Report::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(back, report);
    }
}

