use oscillator_core::error::Error;
use oscillator_core::fields::FqElem;
use oscillator_core::generators::*;
use oscillator_core::linalg;
use oscillator_core::scalars::{gauss_sum, CycScalar};
use oscillator_core::star::{oscillator_dilation, oscillator_fourier, oscillator_shear, sl2_action, StarElement};
use oscillator_core::verify::context;

#[test]
fn k_constant_examples() {
    let ctx = context(3, 1, "odd:1", 1).unwrap();
    let f = ctx.field();
    assert_eq!(k_constant(&ctx, f.one()).scalar(3), gauss_sum(f, f.one()));
    assert_eq!(k_constant(&ctx, f.zero()).scalar(3), CycScalar::from_int(3, 3, 3));
    for (q, spec) in [(5, "plus:2"), (7, "odd:3"), (9, "minus:2"), (5, "odd:3:ns")] {
        let ctx = context(q, 1, spec, 1).unwrap();
        for c in ctx.field().elements() {
            assert_eq!(k_constant(&ctx, c).scalar(q), k_closed_form(&ctx, c), "q={q} {spec} c={c}");
        }
    }
}

#[test]
fn reflections_square_to_one_and_act_geometrically() {
    for (q, half, spec) in [(3, 1, "plus:2"), (5, 1, "odd:1"), (3, 2, "odd:1")] {
        let ctx = context(q, half, spec, 1).unwrap();
        let f = ctx.field();
        let one = StarElement::unit(&ctx);
        for i in 1..(q as u64).pow(ctx.n() as u32) {
            let l = linalg::decode(f, i, ctx.n());
            if ctx.form().quad(&l).is_zero() {
                assert_eq!(reflection_element(&ctx, &l).unwrap_err(), Error::IsotropicInput);
                continue;
            }
            let r = reflection_element(&ctx, &l).unwrap();
            assert_eq!(r.star(&r).unwrap(), one);
            assert_eq!(r.to_model().unwrap(), reflection_operator(&ctx, &l).unwrap());
        }
    }
}

#[test]
fn reflection_words_are_multiplicative() {
    let ctx = context(3, 1, "odd:3", 1).unwrap();
    let f = ctx.field();
    let sample: Vec<Vec<FqElem>> = [[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 2, 0]]
        .iter()
        .map(|v| v.iter().map(|&x| f.from_int(x)).collect())
        .filter(|l: &Vec<FqElem>| !ctx.form().quad(l).is_zero())
        .collect();
    assert!(reflection_subgroup_check(&ctx, &sample, 30, 5).unwrap().iter().all(|w| w.pass));
}

#[test]
fn isotropic_idempotents() {
    let ctx = context(3, 1, "plus:4", 1).unwrap();
    let f = ctx.field();
    let vecs: Vec<Vec<FqElem>> = (1..81).map(|i| linalg::decode(f, i, 4)).collect();
    let a = vecs.iter().find(|x| ctx.form().quad(x).is_zero()).unwrap().clone();
    let b = vecs
        .iter()
        .find(|y| ctx.form().quad(y).is_zero() && ctx.form().bilinear(&a, y).is_zero() && linalg::rank(f, &[a.clone(), y.to_vec()].concat(), 2, 4) == 2)
        .unwrap()
        .clone();
    let c = vecs.iter().find(|y| ctx.form().quad(y).is_zero() && !ctx.form().bilinear(&a, y).is_zero()).unwrap().clone();
    for k in [vec![a.clone()], vec![a.clone(), b.clone()]] {
        let e = isotropic_idempotent(&ctx, &k).unwrap();
        assert_eq!(e.star(&e).unwrap(), e);
        let want = CycScalar::from_int(3, 3, 3i64.pow((4 - 2 * k.len()) as u32));
        assert_eq!(e.to_model().unwrap().trace(), want);
    }
    assert_eq!(isotropic_idempotent(&ctx, &[a.clone(), a.clone()]).unwrap_err(), Error::NotIndependent);
    assert_eq!(isotropic_idempotent(&ctx, &[a.clone(), c]).unwrap_err(), Error::NotIsotropic);
}

#[test]
fn plane_generators_match_the_oscillator_operators() {
    for (q, spec) in [(3, "odd:1"), (5, "plus:2"), (3, "minus:2")] {
        let ctx = context(q, 1, spec, 1).unwrap();
        let f = ctx.field();
        assert_eq!(beta(&ctx).unwrap().to_model().unwrap(), oscillator_fourier(&ctx).unwrap());
        for t in f.units() {
            assert_eq!(gamma_s(&ctx, t).unwrap().to_model().unwrap(), oscillator_shear(&ctx, t).unwrap());
            assert_eq!(g_t(&ctx, t).unwrap().to_model().unwrap(), sl2_action(&ctx, g_t_matrix(&ctx, t).unwrap()).unwrap());
            if t != f.one() {
                assert_eq!(alpha_t(&ctx, t).unwrap().to_model().unwrap(), oscillator_dilation(&ctx, t).unwrap());
            }
        }
    }
}

#[test]
fn degenerate_parameters() {
    let ctx = context(5, 1, "odd:1", 1).unwrap();
    let f = ctx.field();
    assert_eq!(g_t(&ctx, f.zero()).unwrap_err(), Error::ZeroParameter);
    assert!(matches!(alpha_t(&ctx, f.one()), Err(Error::DegenerateParameter(_))));
    assert!(matches!(gamma_s(&ctx, f.zero()), Err(Error::DegenerateParameter(_))));
    assert!(matches!(appendix_check(&ctx, f.one()), Err(Error::DegenerateParameter(_))));
    let big = context(3, 2, "odd:1", 1).unwrap();
    assert!(matches!(g_t(&big, big.field().one()), Err(Error::Invalid(_))));
}

#[test]
fn sl2_closure_on_the_split_plane() {
    for q in [3u64, 5] {
        let ctx = context(q, 1, "plus:2", 1).unwrap();
        assert_eq!(sl2_closure_order(&ctx, 10_000).unwrap(), (q * (q * q - 1)) as usize);
    }
    let ctx = context(3, 1, "odd:1", 1).unwrap();
    assert!(matches!(sl2_closure_order(&ctx, 10), Err(Error::SizeLimit(_))));
}

#[test]
fn appendix_identity_small_cases() {
    for (q, spec) in [(3, "odd:1"), (5, "plus:2"), (7, "odd:1")] {
        let ctx = context(q, 1, spec, 1).unwrap();
        let f = ctx.field();
        for t in f.units().filter(|&t| t != f.one()) {
            let c = appendix_check(&ctx, t).unwrap();
            assert!(c.cleared && c.normalized && c.constants, "q={q} {spec} t={t}");
        }
    }
}
