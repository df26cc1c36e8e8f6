use oscillator_core::scalars::CycScalar;
use oscillator_core::star::{heisenberg_act, heisenberg_product, sl2_action, StarElement};
use oscillator_core::verify::{context, random_element};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn unit_and_inverse_vectors() {
    let ctx = context(5, 1, "plus:2", 1).unwrap();
    let one = StarElement::unit(&ctx);
    for u in [1u64, 7, 100, 624] {
        let x = StarElement::basis(&ctx, u).unwrap();
        assert_eq!(x.star(&one).unwrap(), x);
        let minus = StarElement::basis(&ctx, ctx.neg_vector(u).unwrap()).unwrap();
        assert_eq!(x.star(&minus).unwrap(), one);
    }
    assert_eq!(one.to_model().unwrap(), one.to_model().unwrap().identity_like());
}

#[test]
fn trace_of_the_unit_is_the_model_dimension() {
    for (q, half, spec) in [(3, 1, "odd:1"), (3, 2, "plus:2"), (5, 1, "odd:3")] {
        let ctx = context(q, half, spec, 1).unwrap();
        let one = StarElement::unit(&ctx);
        let md = CycScalar::from_int(ctx.field().p(), q, ctx.model_dim() as i64);
        assert_eq!(one.trace(), md);
        assert_eq!(one.to_model().unwrap().trace(), md);
        assert!(StarElement::basis(&ctx, 1).unwrap().trace().is_zero());
    }
}

#[test]
fn random_pairs_compose() {
    for (q, half, spec) in [(3, 1, "odd:1"), (5, 1, "plus:2"), (3, 2, "odd:1"), (9, 1, "odd:1")] {
        let ctx = context(q, half, spec, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for _ in 0..20 {
            let a = random_element(&ctx, &mut rng, 5).unwrap();
            let b = random_element(&ctx, &mut rng, 5).unwrap();
            let lhs = a.star(&b).unwrap().to_model().unwrap();
            assert_eq!(lhs, a.to_model().unwrap().mul(&b.to_model().unwrap()).unwrap());
        }
    }
}

#[test]
fn json_roundtrip() {
    let ctx = context(3, 1, "minus:2", 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = random_element(&ctx, &mut rng, 8).unwrap();
    assert_eq!(StarElement::from_json(&x.to_json()).unwrap(), x);
}

#[test]
fn matrix_free_action_matches_the_model() {
    let ctx = context(3, 1, "odd:3", 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = random_element(&ctx, &mut rng, 10).unwrap();
    let m = x.to_model().unwrap();
    for col in 0..ctx.model_dim() {
        let got: Vec<(usize, CycScalar)> = x.apply_to_basis(col).unwrap().into_iter().map(|(i, c)| (i as usize, c)).collect();
        assert_eq!(got, m.column(col as usize));
    }
}

#[test]
fn heisenberg_action_is_a_group_action() {
    let ctx = context(3, 1, "plus:2", 1).unwrap();
    let f = ctx.field();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..500 {
        let (v, w) = (rng.gen_range(0..ctx.size()), rng.gen_range(0..ctx.size()));
        let (c, d) = (f.elem(rng.gen_range(0..3)).unwrap(), f.elem(rng.gen_range(0..3)).unwrap());
        let x = rng.gen_range(0..ctx.model_dim());
        let (e1, y) = heisenberg_act(&ctx, w, d, x).unwrap();
        let (e2, z) = heisenberg_act(&ctx, v, c, y).unwrap();
        let (prod, pc) = heisenberg_product(&ctx, (v, c), (w, d)).unwrap();
        assert_eq!(heisenberg_act(&ctx, prod, pc, x).unwrap(), ((e1 + e2) % 3, z));
    }
}

#[test]
fn sl2_action_rejects_non_unimodular_matrices() {
    let ctx = context(3, 1, "odd:1", 1).unwrap();
    let f = ctx.field();
    assert!(sl2_action(&ctx, [f.one(), f.one(), f.zero(), f.from_int(2)]).is_err());
}

#[test]
fn elements_from_different_algebras_do_not_mix() {
    let a = StarElement::unit(&context(3, 1, "odd:1", 1).unwrap());
    let b = StarElement::unit(&context(3, 1, "odd:1", 2).unwrap());
    assert!(a.star(&b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_is_associative_with_a_star_homomorphic_trace(seed in any::<u64>()) {
        let ctx = context(5, 1, "odd:1", 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            random_element(&ctx, &mut rng, 5).unwrap(),
            random_element(&ctx, &mut rng, 5).unwrap(),
            random_element(&ctx, &mut rng, 5).unwrap(),
        );
        prop_assert_eq!(a.star(&b).unwrap().star(&c).unwrap(), a.star(&b.star(&c).unwrap()).unwrap());
        prop_assert_eq!(a.star(&b).unwrap().trace(), b.star(&a).unwrap().trace());
        prop_assert_eq!(a.trace(), a.to_model().unwrap().trace());
    }
}
