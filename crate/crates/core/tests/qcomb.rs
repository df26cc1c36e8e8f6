use oscillator_core::error::Error;
use oscillator_core::fields::{field_of_order, FqElem};
use oscillator_core::forms::{FormType, SymmetricForm, SymplecticSpace};
use oscillator_core::grid::Grid;
use oscillator_core::orbits::{rref_matrices, Side};
use oscillator_core::qcomb::*;
use proptest::prelude::*;

fn q_plus_one() -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, 1])
}

#[test]
fn gaussian_binomials() {
    assert_eq!(gaussian_binomial(5, 0).unwrap(), IntPolynomial::one());
    assert_eq!(gaussian_binomial(2, 1).unwrap(), q_plus_one());
    assert_eq!(gaussian_binomial(4, 2).unwrap().eval_u64(3), 130.into());
    assert!(matches!(gaussian_binomial(2, 3), Err(Error::OutOfRange(_))));
    assert!(gaussian_binomial(-1, 0).is_err());
}

#[test]
fn lemma_examples() {
    let (l, r) = lemma_sides(1, 1, 0).unwrap();
    assert_eq!(l, &q_plus_one() * &IntPolynomial::big_q(2));
    assert_eq!(l, r);
    for r in 1..=7 {
        for b in 0..r {
            let (l, rhs) = lemma_sides(0, r, b).unwrap();
            let direct: IntPolynomial = (b..=r).map(|j| IntPolynomial::big_q(j as usize)).product();
            assert_eq!(l, direct);
            assert_eq!(rhs, direct);
            for p in 0..=5 {
                assert!(lemma_identity_check(p, r, b).unwrap(), "p={p} r={r} b={b}");
            }
        }
    }
}

#[test]
fn tranche_identity() {
    for k in 0..=5 {
        for p in 0..=5 {
            for b in 0..=k {
                for r in k..=5 {
                    let (l, rhs) = tranche_sides(k, p, b, r).unwrap();
                    assert_eq!(l, rhs, "k={k} p={p} b={b} r={r}");
                }
            }
        }
    }
}

#[test]
fn group_orders() {
    assert_eq!(ClassicalGroup::Sp(1).order_at(3).unwrap(), 24.into());
    assert_eq!(ClassicalGroup::Oplus(2).order_at(3).unwrap(), 1152.into());
    assert_eq!(ClassicalGroup::Oodd(1).order_at(3).unwrap(), 48.into());
    assert_eq!(ClassicalGroup::Oplus(0).order_at(3).unwrap(), 1.into());
    assert!(ClassicalGroup::Ominus(0).order().is_err());
    assert_eq!("ominus:3".parse::<ClassicalGroup>().unwrap(), ClassicalGroup::Ominus(3));
    assert_eq!(ClassicalGroup::orthogonal(FormType::Odd, 5).unwrap(), ClassicalGroup::Oodd(2));
}

#[test]
fn parabolic_indices() {
    assert_eq!(ClassicalGroup::Oodd(1).parabolic_index(1).unwrap().eval_u64(3), 4.into());
    assert_eq!(ClassicalGroup::Oplus(1).parabolic_index(1).unwrap().eval_u64(3), 2.into());
    assert_eq!(ClassicalGroup::Sp(1).parabolic_index(1).unwrap().eval_u64(3), 4.into());
    // the minus-type plane has no isotropic lines at all, and k = 1 exceeds its Witt index
    assert_eq!(ClassicalGroup::Ominus(1).quadric_points().unwrap(), IntPolynomial::zero());
    assert!(matches!(ClassicalGroup::Ominus(1).parabolic_index(1), Err(Error::RangeExceeded { .. })));
    for g in ["sp:3", "oodd:3", "oplus:4", "ominus:4", "oplus:1"] {
        let g: ClassicalGroup = g.parse().unwrap();
        for k in 0..=g.witt_index() {
            assert_eq!(g.parabolic_index(k).unwrap(), g.parabolic_index_closed(k).unwrap(), "{g} k={k}");
        }
    }
}

/// Totally isotropic `k`-subspaces counted by brute force.
fn isotropic_subspaces(q: u64, dim: usize, k: usize, pairing: impl Fn(&[FqElem], &[FqElem]) -> bool) -> u64 {
    let f = field_of_order(q).unwrap();
    rref_matrices(&f, k, dim)
        .into_iter()
        .filter(|m| {
            let rows: Vec<&[FqElem]> = m.chunks(dim).collect();
            rows.iter().all(|a| rows.iter().all(|b| pairing(a, b)))
        })
        .count() as u64
}

#[test]
fn parabolic_indices_count_isotropic_subspaces() {
    for q in [3u64, 5] {
        let f = field_of_order(q).unwrap();
        for (kind, n) in [(FormType::Plus, 4), (FormType::Minus, 4), (FormType::Odd, 3), (FormType::Odd, 5)] {
            if q == 5 && n == 5 {
                continue;
            }
            let b = SymmetricForm::standard(f.clone(), kind, n, false).unwrap();
            let g = ClassicalGroup::of_form(&b);
            for k in 1..=g.witt_index() {
                let want = isotropic_subspaces(q, n, k, |x, y| b.bilinear(x, y).is_zero());
                assert_eq!(g.parabolic_index(k).unwrap().eval_u64(q), want.into(), "{g} q={q} k={k}");
            }
        }
        let v = SymplecticSpace::new(f.clone(), 2);
        for k in 1..=2 {
            let want = isotropic_subspaces(q, 4, k, |x, y| v.form(x, y).is_zero());
            assert_eq!(ClassicalGroup::Sp(2).parabolic_index(k).unwrap().eval_u64(q), want.into());
        }
    }
}

#[test]
fn hom_identities_and_theorem() {
    let pair = DualPair::new(1, ClassicalGroup::Oplus(2)).unwrap();
    assert!(pair.o_stable());
    for ell in 0..=pair.max_shift(Side::O) {
        assert!(hom_dimension_identity(Side::O, &pair, ell).unwrap().pass());
    }
    let f = field_of_order(3).unwrap();
    let w = SymmetricForm::parse(f.clone(), "plus:4").unwrap();
    let t = theorem_dimension_check(Side::O, &f, 1, &w).unwrap();
    assert_eq!(t.census, 40.into());
    assert!(t.pass());
    let w = SymmetricForm::parse(f.clone(), "minus:4").unwrap();
    assert!(matches!(theorem_dimension_check(Side::O, &f, 2, &w), Err(Error::NotInStableRange(_))));
    for half in 0..=3 {
        for ell in 0..=half {
            let [ol, sl, or, sr] = halving_sides(half, ell).unwrap();
            assert_eq!((ol, or), (sl, sr));
        }
    }
}

#[test]
fn every_registered_identity_holds_on_its_default_grid() {
    for id in identity_registry() {
        let rows = id.rows(&Grid::default()).unwrap();
        assert!(!rows.is_empty(), "{}", id.name());
        let bad: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{}: {bad:?}", id.name());
    }
    assert!(find_identity("lemma99").is_err());
}

#[test]
fn polynomial_division() {
    let a = IntPolynomial::q_pow_minus_one(6);
    let b = IntPolynomial::q_pow_minus_one(2);
    assert_eq!(&a.div_exact(&b).unwrap() * &b, a);
    assert!(b.div_exact(&a).is_err());
    assert_eq!(IntPolynomial::from_i64s(&[-1, 0, 2, 1]).to_string(), "q^3 + 2*q^2 - 1");
}

proptest! {
    #[test]
    fn polynomial_ring_laws(a in prop::collection::vec(-9i64..10, 0..6), b in prop::collection::vec(-9i64..10, 0..6), q in 2u64..9) {
        let (x, y) = (IntPolynomial::from_i64s(&a), IntPolynomial::from_i64s(&b));
        prop_assert_eq!((&x * &y).eval_u64(q), x.eval_u64(q) * y.eval_u64(q));
        prop_assert_eq!((&x + &y).eval_u64(q), x.eval_u64(q) + y.eval_u64(q));
        if !y.is_zero() {
            prop_assert_eq!((&x * &y).div_exact(&y).unwrap(), x);
        }
    }

    #[test]
    fn pascal_rule((a, b) in (2i64..9).prop_flat_map(|a| (Just(a), 1..a))) {
        // (a choose b) = (a−1 choose b−1) + q^b (a−1 choose b)
        let lhs = gaussian_binomial(a, b).unwrap();
        let rhs = &gaussian_binomial(a - 1, b - 1).unwrap() + &(&IntPolynomial::q_pow(b as usize) * &gaussian_binomial(a - 1, b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
