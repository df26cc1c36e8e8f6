use oscillator_core::error::Error;
use oscillator_core::fields::{field_of_order, make_field, FqElem};
use proptest::prelude::*;

const ORDERS: [u64; 8] = [3, 5, 7, 9, 11, 25, 27, 49];

fn elem(q: u64, i: u32) -> FqElem {
    field_of_order(q).unwrap().elem(i % q as u32).unwrap()
}

#[test]
fn construction() {
    let f9 = make_field(3, 2).unwrap();
    assert_eq!(f9.q(), 9);
    assert_eq!(f9.modulus(), &[1, 0, 1]);
    assert_eq!(make_field(4, 1).unwrap_err(), Error::NonPrime(4));
    assert_eq!(field_of_order(27).unwrap().ell(), 3);
    assert!(field_of_order(12).is_err());
    assert!(field_of_order(8).is_err());
}

#[test]
fn spec_examples() {
    let f3 = field_of_order(3).unwrap();
    assert_eq!(f3.quad_char(f3.from_int(1)), 1);
    assert_eq!(f3.quad_char(f3.from_int(2)), -1);
    assert_eq!(f3.trace_to_prime(f3.from_int(2)), 2);
    assert_eq!(f3.half(f3.one()), f3.from_int(2));
    let f5 = field_of_order(5).unwrap();
    assert_eq!(f5.half(f5.one()), f5.from_int(3));
    assert_eq!(f5.half(f5.zero()), f5.zero());
    let f9 = field_of_order(9).unwrap();
    assert_eq!(f9.trace_to_prime(f9.one()), 2);
    assert_eq!(f9.quad_char(f9.primitive_element()), -1);
}

#[test]
fn quadratic_character_factors_through_the_norm() {
    for q in [9, 25, 27] {
        let f = field_of_order(q).unwrap();
        for a in f.units() {
            assert_eq!(f.quad_char(a), f.quad_char_prime(f.norm_to_prime(a)), "q={q} a={a}");
        }
    }
}

proptest! {
    #[test]
    fn ring_axioms(k in 0usize..ORDERS.len(), a in 0u32..49, b in 0u32..49, c in 0u32..49) {
        let q = ORDERS[k];
        let f = field_of_order(q).unwrap();
        let (a, b, c) = (elem(q, a), elem(q, b), elem(q, c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.add(f.half(a), f.half(a)), a);
    }

    #[test]
    fn trace_is_additive_and_character_multiplicative(k in 0usize..ORDERS.len(), a in 0u32..49, b in 0u32..49) {
        let q = ORDERS[k];
        let f = field_of_order(q).unwrap();
        let (a, b) = (elem(q, a), elem(q, b));
        prop_assert_eq!(f.trace_to_prime(f.add(a, b)), (f.trace_to_prime(a) + f.trace_to_prime(b)) % f.p());
        prop_assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
        prop_assert_eq!(f.pow(a, q), a);
    }
}
